//! Class decomposition of a log symplectic form and everything that hangs off
//! it: the partitionability conditions, the canonical divisor partition,
//! normal-form templates, and the induced cosymplectic data on strata.
//!
//! The class of a closed log 2-form splits into an H²(M) part `a`, an H¹(Z_i)
//! part `b_i` per hypersurface, and locally constant pairing scalars `c_{st}`
//! on double intersections. Partitionability is a set of vanishing conditions
//! on (b, c) which force the divisor into (x, y) pairs and z-type singles.

use crate::arrangement::Arrangement;
use crate::symcalc::{k_cosymplectic_log, CosymplecticReport, LogForm, Parity, Rat, TrigPoly};
use crate::{Error, Result};
use num_traits::Zero;
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};

/// The H²(M) part of the class: presence plus an optional smooth
/// representative (constant Fourier modes of the smooth layer).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct AClass {
    pub nonzero: bool,
    pub representative: Option<LogForm>,
}

/// One hypersurface's H¹(Z) data.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct BClass {
    pub nonzero: bool,
    /// Per other hypersurface t meeting Z: does the class restrict to zero
    /// on Z ∩ Z_t? A zero class vanishes everywhere; for a nonzero class a
    /// missing flag is read as "does not vanish".
    pub restriction_vanishes: BTreeMap<String, bool>,
}

/// Pairing scalars for one unordered pair, one entry per connected component
/// of the intersection.
#[derive(Debug, Clone, PartialEq)]
pub struct CEntry {
    pub pair: (String, String),
    pub scalars: Vec<Rat>,
}

impl CEntry {
    pub fn class_nonzero(&self) -> bool {
        self.scalars.iter().any(|s| !s.is_zero())
    }

    pub fn everywhere_nonzero(&self) -> bool {
        !self.scalars.is_empty() && self.scalars.iter().all(|s| !s.is_zero())
    }
}

/// Decomposition of a class in the log de Rham cohomology: (a, b_i, c_{st}).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ClassDecomposition {
    pub a: AClass,
    pub b: BTreeMap<String, BClass>,
    pub c: Vec<CEntry>,
}

impl ClassDecomposition {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builder helper: mark b nonzero/zero for a hypersurface.
    pub fn with_b(mut self, id: &str, nonzero: bool) -> Self {
        self.b.entry(id.to_string()).or_default().nonzero = nonzero;
        self
    }

    /// Builder helper: record whether b restricts to zero on Z_id ∩ Z_other.
    pub fn with_restriction(mut self, id: &str, other: &str, vanishes: bool) -> Self {
        self.b
            .entry(id.to_string())
            .or_default()
            .restriction_vanishes
            .insert(other.to_string(), vanishes);
        self
    }

    /// Builder helper: set the pairing scalars of an unordered pair.
    pub fn with_c(mut self, s: &str, t: &str, scalars: Vec<Rat>) -> Self {
        self.c.push(CEntry {
            pair: (s.to_string(), t.to_string()),
            scalars,
        });
        self
    }

    pub fn c_entry(&self, s: &str, t: &str) -> Option<&CEntry> {
        self.c
            .iter()
            .find(|e| (e.pair.0 == s && e.pair.1 == t) || (e.pair.0 == t && e.pair.1 == s))
    }

    fn b_nonzero(&self, id: &str) -> bool {
        self.b.get(id).map(|b| b.nonzero).unwrap_or(false)
    }

    /// i*_t b_id = 0 on Z_id ∩ Z_t? Zero classes restrict to zero; otherwise
    /// the recorded flag decides, defaulting to "does not vanish".
    fn restriction_vanishes(&self, id: &str, t: &str) -> bool {
        match self.b.get(id) {
            None => true,
            Some(b) if !b.nonzero => true,
            Some(b) => b.restriction_vanishes.get(t).copied().unwrap_or(false),
        }
    }

    /// Structural validation against an arrangement: known ids, flags and
    /// scalars only on non-empty intersections, right scalar counts.
    pub fn validate(&self, arr: &Arrangement) -> Result<()> {
        for (id, b) in &self.b {
            arr.hypersurface_index(id)?;
            for t in b.restriction_vanishes.keys() {
                if t == id {
                    return Err(Error::DuplicateInSubset(id.clone()));
                }
                let st = arr.stratum(&[id, t])?;
                if st.empty {
                    return Err(Error::EmptyStratumSelected(format!("{id}, {t}")));
                }
            }
        }
        let mut seen: BTreeSet<(usize, usize)> = BTreeSet::new();
        for e in &self.c {
            let (s, t) = (&e.pair.0, &e.pair.1);
            let si = arr.hypersurface_index(s)?;
            let ti = arr.hypersurface_index(t)?;
            if si == ti {
                return Err(Error::DuplicateInSubset(s.clone()));
            }
            if !seen.insert((si.min(ti), si.max(ti))) {
                return Err(Error::DuplicateStratum(format!("{s}, {t}")));
            }
            let st = arr.stratum(&[s, t])?;
            if e.scalars.len() as u64 != st.components {
                return Err(Error::ScalarVectorLength {
                    s: s.clone(),
                    t: t.clone(),
                    got: e.scalars.len(),
                    expected: st.components,
                });
            }
        }
        Ok(())
    }
}

/// How per-component pairing scalars count as nonzero when deciding
/// partitionability and partners.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ComponentRule {
    /// Class-level reading: nonzero on at least one component.
    #[default]
    ClassLevel,
    /// Strict reading: a used pairing must be nonzero on every component;
    /// mixed entries are flagged as violations.
    EveryComponent,
}

/// One violated partitionability clause, with the offending ids.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "clause", rename_all = "snake_case")]
pub enum Violation {
    /// Condition (1): b_s ≠ 0 but c_{i,s} ≠ 0.
    Condition1 { s: String, i: String },
    /// Condition (2): c_{s,t} ≠ 0 but the restriction of b to the
    /// intersection does not vanish for `offender`.
    Condition2Restriction {
        s: String,
        t: String,
        offender: String,
    },
    /// Condition (2): a hypersurface carries nonzero pairings with two
    /// different partners.
    Condition2Matching {
        shared: String,
        first: String,
        second: String,
    },
    /// Strict component rule only: scalars vanish on some components but
    /// not all of them.
    MixedComponents { s: String, t: String },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PartitionabilityReport {
    pub partitionable: bool,
    pub violations: Vec<Violation>,
}

/// Decide the partitionability conditions, reporting every violated clause.
pub fn is_partitionable(
    dec: &ClassDecomposition,
    arr: &Arrangement,
    rule: ComponentRule,
) -> Result<PartitionabilityReport> {
    dec.validate(arr)?;
    let mut violations = Vec::new();
    let nonzero_entries: Vec<&CEntry> = dec.c.iter().filter(|e| e.class_nonzero()).collect();
    // condition (1): a nonzero b forbids any nonzero pairing at its hypersurface
    for e in &nonzero_entries {
        let (s, t) = (&e.pair.0, &e.pair.1);
        if dec.b_nonzero(s) {
            violations.push(Violation::Condition1 {
                s: s.clone(),
                i: t.clone(),
            });
        }
        if dec.b_nonzero(t) {
            violations.push(Violation::Condition1 {
                s: t.clone(),
                i: s.clone(),
            });
        }
    }
    // condition (2), restriction clause: both b's restrict to zero on the intersection
    for e in &nonzero_entries {
        let (s, t) = (&e.pair.0, &e.pair.1);
        for (side, other) in [(s, t), (t, s)] {
            if !dec.restriction_vanishes(side, other) {
                violations.push(Violation::Condition2Restriction {
                    s: s.clone(),
                    t: t.clone(),
                    offender: side.clone(),
                });
            }
        }
    }
    // condition (2), matching clause: at most one nonzero pairing per hypersurface
    let mut partners: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    for e in &nonzero_entries {
        partners.entry(&e.pair.0).or_default().push(&e.pair.1);
        partners.entry(&e.pair.1).or_default().push(&e.pair.0);
    }
    for (shared, list) in &partners {
        if list.len() > 1 {
            violations.push(Violation::Condition2Matching {
                shared: shared.to_string(),
                first: list[0].to_string(),
                second: list[1].to_string(),
            });
        }
    }
    if rule == ComponentRule::EveryComponent {
        for e in &nonzero_entries {
            if !e.everywhere_nonzero() {
                violations.push(Violation::MixedComponents {
                    s: e.pair.0.clone(),
                    t: e.pair.1.clone(),
                });
            }
        }
    }
    Ok(PartitionabilityReport {
        partitionable: violations.is_empty(),
        violations,
    })
}

/// How the symplectic foliation behaves on a codimension-2 intersection:
/// a paired intersection is a symplectic leaf (type 1); two independent log
/// directions give a codimension-2 foliation (type 2).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum IntersectionType {
    Type1,
    Type2,
}

/// The canonical partition of the divisor into (x, y) pairs and z-types.
#[derive(Debug, Clone)]
pub struct Partition {
    pairs: Vec<(String, String)>,
    zs: Vec<String>,
    // declaration order of ids, for canonical sorting of derived partitions
    ord: BTreeMap<String, usize>,
}

impl PartialEq for Partition {
    fn eq(&self, other: &Self) -> bool {
        self.pairs == other.pairs && self.zs == other.zs
    }
}

impl Partition {
    /// Build and canonicalize: within a pair the lower-indexed id comes
    /// first, pairs sort by their lower index, z's sort by index.
    pub fn new(
        arr: &Arrangement,
        pairs: Vec<(String, String)>,
        zs: Vec<String>,
    ) -> Result<Partition> {
        let mut ord = BTreeMap::new();
        let mut seen = BTreeSet::new();
        let mut claim = |id: &String| -> Result<()> {
            if !seen.insert(id.clone()) {
                return Err(Error::PartitionOverlap(id.clone()));
            }
            Ok(())
        };
        for (x, y) in &pairs {
            claim(x)?;
            claim(y)?;
        }
        for z in &zs {
            claim(z)?;
        }
        for h in arr.hypersurfaces() {
            ord.insert(h.id.clone(), arr.hypersurface_index(&h.id)?);
        }
        for id in &seen {
            if !ord.contains_key(id) {
                return Err(Error::UnknownHypersurface(id.clone()));
            }
        }
        let mut pairs: Vec<(String, String)> = pairs
            .into_iter()
            .map(|(x, y)| if ord[&x] <= ord[&y] { (x, y) } else { (y, x) })
            .collect();
        pairs.sort_by_key(|(x, _)| ord[x]);
        let mut zs = zs;
        zs.sort_by_key(|z| ord[z]);
        Ok(Partition { pairs, zs, ord })
    }

    pub fn pairs(&self) -> &[(String, String)] {
        &self.pairs
    }

    pub fn zs(&self) -> &[String] {
        &self.zs
    }

    pub fn k(&self) -> usize {
        self.pairs.len()
    }

    pub fn ell(&self) -> usize {
        self.zs.len()
    }

    /// All member ids: pair members first, then z-types.
    pub fn members(&self) -> impl Iterator<Item = &str> {
        self.pairs
            .iter()
            .flat_map(|(x, y)| [x.as_str(), y.as_str()])
            .chain(self.zs.iter().map(String::as_str))
    }

    /// Every hypersurface of the arrangement appears in the partition.
    pub fn covers(&self, arr: &Arrangement) -> Result<()> {
        let members: BTreeSet<&str> = self.members().collect();
        for h in arr.hypersurfaces() {
            if !members.contains(h.id.as_str()) {
                return Err(Error::PartitionIncomplete(h.id.clone()));
            }
        }
        Ok(())
    }

    /// Subpartition of a subset: full pairs stay pairs, a lone pair member
    /// turns z-type, z-types stay z-type.
    pub fn subpartition(&self, subset: &[&str]) -> Result<Partition> {
        let mut chosen = BTreeSet::new();
        for id in subset {
            if !self.ord.contains_key(*id) || !self.members().any(|m| m == *id) {
                return Err(Error::UnknownHypersurface(id.to_string()));
            }
            if !chosen.insert(*id) {
                return Err(Error::DuplicateInSubset(id.to_string()));
            }
        }
        let mut pairs = Vec::new();
        let mut zs = Vec::new();
        for (x, y) in &self.pairs {
            match (chosen.contains(x.as_str()), chosen.contains(y.as_str())) {
                (true, true) => pairs.push((x.clone(), y.clone())),
                (true, false) => zs.push(x.clone()),
                (false, true) => zs.push(y.clone()),
                (false, false) => {}
            }
        }
        for z in &self.zs {
            if chosen.contains(z.as_str()) {
                zs.push(z.clone());
            }
        }
        zs.sort_by_key(|z| self.ord[z]);
        Ok(Partition {
            pairs,
            zs,
            ord: self.ord.clone(),
        })
    }

    /// Classify a codimension-2 intersection under this partition.
    pub fn intersection_type(&self, s: &str, t: &str) -> Result<IntersectionType> {
        if s == t {
            return Err(Error::DuplicateInSubset(s.to_string()));
        }
        for id in [s, t] {
            if !self.members().any(|m| m == id) {
                return Err(Error::UnknownHypersurface(id.to_string()));
            }
        }
        let paired = self
            .pairs
            .iter()
            .any(|(x, y)| (x == s && y == t) || (x == t && y == s));
        Ok(if paired {
            IntersectionType::Type1
        } else {
            IntersectionType::Type2
        })
    }
}

/// Derive the partition from a decomposition: nonzero b's are z-type, the
/// rest pair with their unique nonzero-c partner.
pub fn derive_partition(
    dec: &ClassDecomposition,
    arr: &Arrangement,
    rule: ComponentRule,
) -> Result<Partition> {
    dec.validate(arr)?;
    let counts = |e: &CEntry| match rule {
        ComponentRule::ClassLevel => e.class_nonzero(),
        ComponentRule::EveryComponent => e.everywhere_nonzero(),
    };
    let partners = |id: &str| -> Vec<String> {
        dec.c
            .iter()
            .filter(|e| counts(e) && (e.pair.0 == id || e.pair.1 == id))
            .map(|e| {
                if e.pair.0 == id {
                    e.pair.1.clone()
                } else {
                    e.pair.0.clone()
                }
            })
            .collect()
    };
    let mut pairs = Vec::new();
    let mut zs = Vec::new();
    let mut taken: BTreeSet<String> = BTreeSet::new();
    for h in arr.hypersurfaces() {
        let id = &h.id;
        if taken.contains(id) {
            continue;
        }
        if dec.b_nonzero(id) {
            zs.push(id.clone());
            continue;
        }
        let mine = partners(id);
        match mine.len() {
            0 => return Err(Error::PairingMissing(id.clone())),
            1 => {}
            _ => return Err(Error::PairingAmbiguous(id.clone(), mine)),
        }
        let partner = mine.into_iter().next().unwrap();
        let theirs = partners(&partner);
        if theirs.len() > 1 {
            return Err(Error::PairingAmbiguous(partner, theirs));
        }
        taken.insert(id.clone());
        taken.insert(partner.clone());
        pairs.push((id.clone(), partner));
    }
    Partition::new(arr, pairs, zs)
}

/// Divided extraction of the smooth layer: per flagged coordinate of each
/// component, subtract the interpolant (A + B·cos θ)/sin θ matching the two
/// residue values, which moves the remainder into a plain dθ slot. What
/// survives with no pole is the smooth representative; for closed forms the
/// dropped log pieces are exactly the residue classes.
fn smooth_projection(form: &LogForm) -> LogForm {
    let n = form.n();
    let half = Rat::new(1.into(), 2.into());
    let mut pieces: Vec<(Vec<usize>, TrigPoly)> = Vec::new();
    for (tuple, coeff) in form.components() {
        let flagged: Vec<usize> = tuple
            .iter()
            .copied()
            .filter(|t| form.poles().contains(t))
            .collect();
        let mut work = vec![coeff.clone()];
        for t in flagged {
            let mut next = Vec::new();
            for c in work {
                let r0 = c.restrict(t, Parity::Zero);
                let rpi = c.restrict(t, Parity::Pi);
                let even = (&r0 + &rpi).mul_rat(&half);
                let odd = &(&r0 - &rpi).mul_rat(&half) * &TrigPoly::cos(n, t, 1);
                let interp = &even + &odd;
                let q = (&c - &interp)
                    .div_sin(t)
                    .expect("interpolant matches the coefficient at both zeros");
                if !q.is_zero() {
                    next.push(q);
                }
                // the interp · ê_t piece stays log along t: dropped
            }
            work = next;
        }
        for q in work {
            pieces.push((tuple.clone(), q));
        }
    }
    let mut out = LogForm::zero(n, form.degree());
    for (tuple, c) in pieces {
        out = out
            .add(
                &LogForm::from_components(n, form.degree(), BTreeSet::new(), vec![(tuple, c)])
                    .expect("tuples come from a valid form"),
            )
            .expect("matching shape");
    }
    out
}

/// Constant Fourier modes of a pole-free form: its torus cohomology class.
fn constant_mode_form(form: &LogForm) -> LogForm {
    let n = form.n();
    let mut out = LogForm::zero(n, form.degree());
    for (tuple, c) in form.components() {
        let k = c.const_coeff();
        if !k.is_zero() {
            out = out
                .add(
                    &LogForm::from_components(
                        n,
                        form.degree(),
                        BTreeSet::new(),
                        vec![(tuple.clone(), TrigPoly::from_coeff(n, k))],
                    )
                    .expect("valid tuple"),
                )
                .expect("matching shape");
        }
    }
    out
}

/// Class of a pole-free form restricted to {θ_t = parity}: drop dθ_t
/// components, restrict coefficients, take constant modes.
fn pullback_class_nonzero(form: &LogForm, t: usize, parity: Parity) -> bool {
    form.components()
        .any(|(tuple, c)| !tuple.contains(&t) && !c.restrict(t, parity).const_coeff().is_zero())
}

/// Extract the (a, b, c) class decomposition of a closed log 2-form on a
/// torus arrangement by residues and divided extraction. Scalars on a double
/// intersection are ordered by parity pairs (0,0), (0,π), (π,0), (π,π) of the
/// lower-indexed hypersurface first.
pub fn decompose_class(omega: &LogForm, arr: &Arrangement) -> Result<ClassDecomposition> {
    if omega.degree() != 2 {
        return Err(Error::DegreeMismatch {
            expected: 2,
            got: omega.degree(),
        });
    }
    if omega.n() != arr.dim() {
        return Err(Error::DimensionMismatch {
            expected: arr.dim(),
            got: omega.n(),
        });
    }
    let hyps = arr.hypersurfaces();
    let mut coord_of = Vec::with_capacity(hyps.len());
    for h in hyps {
        coord_of.push(arr.divisor_coordinate(&h.id)?);
    }
    for &p in omega.poles() {
        if !coord_of.contains(&p) {
            return Err(Error::PoleOutsideDivisor(p));
        }
    }
    if !omega.is_closed() {
        return Err(Error::NotClosed);
    }

    let mut dec = ClassDecomposition::new();
    // residues of omega along each hypersurface, per parity, or None when
    // omega carries no pole there
    let mut rhos: Vec<Option<[LogForm; 2]>> = Vec::with_capacity(hyps.len());
    for &coord in &coord_of {
        if omega.poles().contains(&coord) {
            let pair = omega.residue(coord)?;
            rhos.push(Some([pair.at_zero, pair.at_pi]));
        } else {
            rhos.push(None);
        }
    }

    for (i, h) in hyps.iter().enumerate() {
        let mut b = BClass::default();
        if let Some(rho) = &rhos[i] {
            let smooth = [smooth_projection(&rho[0]), smooth_projection(&rho[1])];
            b.nonzero = smooth.iter().any(|s| !constant_mode_form(s).is_zero());
            if b.nonzero {
                for (j, other) in hyps.iter().enumerate() {
                    if j == i || arr.stratum(&[&h.id, &other.id])?.empty {
                        continue;
                    }
                    let tc = coord_of[j];
                    let vanish = smooth.iter().all(|s| {
                        Parity::BOTH
                            .iter()
                            .all(|&p| !pullback_class_nonzero(s, tc, p))
                    });
                    b.restriction_vanishes.insert(other.id.clone(), vanish);
                }
            }
        }
        dec.b.insert(h.id.clone(), b);
    }

    for i in 0..hyps.len() {
        for j in i + 1..hyps.len() {
            let (rho_i, cj) = match &rhos[i] {
                Some(r) => (r, coord_of[j]),
                None => continue,
            };
            if !rho_i[0].poles().contains(&cj) {
                continue;
            }
            if arr.stratum(&[&hyps[i].id, &hyps[j].id])?.empty {
                continue;
            }
            let mut scalars = Vec::with_capacity(4);
            for rho in rho_i {
                let pair = rho.residue(cj)?;
                for second in [&pair.at_zero, &pair.at_pi] {
                    let v = second
                        .component(&[])
                        .as_rational_constant()
                        .expect("iterated residue of a closed form is constant");
                    scalars.push(v);
                }
            }
            dec.c.push(CEntry {
                pair: (hyps[i].id.clone(), hyps[j].id.clone()),
                scalars,
            });
        }
    }

    let smooth = smooth_projection(omega);
    let rep = constant_mode_form(&smooth);
    dec.a = AClass {
        nonzero: !rep.is_zero(),
        representative: (!rep.is_zero()).then_some(rep),
    };
    Ok(dec)
}

/// Assemble the normal-form template Σ ê_x∧ê_y + Σ ê_z∧α_j + δ for a
/// partition whose members carry coordinates. The α's and δ must be closed,
/// pole-free, and must not touch partition coordinates.
pub fn normal_form(
    partition: &Partition,
    arr: &Arrangement,
    alphas: &[LogForm],
    delta: &LogForm,
) -> Result<LogForm> {
    let n = arr.dim();
    if alphas.len() != partition.ell() {
        return Err(Error::AlphaCount {
            got: alphas.len(),
            expected: partition.ell(),
        });
    }
    let mut coords: BTreeMap<&str, usize> = BTreeMap::new();
    for id in partition.members() {
        coords.insert(id, arr.divisor_coordinate(id)?);
    }
    let check_residual = |f: &LogForm, degree: usize| -> Result<()> {
        if f.n() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: f.n(),
            });
        }
        if f.degree() != degree {
            return Err(Error::DegreeMismatch {
                expected: degree,
                got: f.degree(),
            });
        }
        if let Some(&p) = f.minimal_poles().poles().iter().next() {
            return Err(Error::UnexpectedPole(p));
        }
        for (tuple, _) in f.components() {
            for t in tuple {
                if coords.values().any(|c| c == t) {
                    return Err(Error::CoordinateCollision(*t));
                }
            }
        }
        if !f.is_closed() {
            return Err(Error::NotClosed);
        }
        Ok(())
    };
    for a in alphas {
        check_residual(a, 1)?;
    }
    check_residual(delta, 2)?;

    let mut omega = delta.clone();
    for (x, y) in partition.pairs() {
        let ex = LogForm::covector(n, coords[x.as_str()], true);
        let ey = LogForm::covector(n, coords[y.as_str()], true);
        omega = omega.add(&ex.wedge(&ey)?)?;
    }
    for (z, alpha) in partition.zs().iter().zip(alphas) {
        let ez = LogForm::covector(n, coords[z.as_str()], true);
        omega = omega.add(&ez.wedge(alpha)?)?;
    }
    Ok(omega)
}

/// The ℓ-cosymplectic data a partitionable form induces on one component of
/// a stratum: residues along the z-types of the subpartition plus the smooth
/// residual, with the nonvanishing check in the log frame (valid away from
/// deeper intersections).
#[derive(Debug, Clone, PartialEq)]
pub struct InducedStructure {
    pub alphas: Vec<LogForm>,
    pub beta: LogForm,
    pub subpartition: Partition,
    pub stratum_dim: usize,
    pub report: CosymplecticReport,
}

impl InducedStructure {
    pub fn verified(&self) -> Option<bool> {
        self.report.verdict()
    }
}

/// Compute the induced structure on the stratum component picked by
/// `parities` (one per subset member, in subset order).
pub fn induced_cosymplectic(
    omega: &LogForm,
    arr: &Arrangement,
    subset: &[&str],
    parities: &[Parity],
    rule: ComponentRule,
) -> Result<InducedStructure> {
    if parities.len() != subset.len() {
        return Err(Error::DimensionMismatch {
            expected: subset.len(),
            got: parities.len(),
        });
    }
    let stratum = arr.stratum(subset)?;
    if stratum.empty {
        return Err(Error::EmptyStratumSelected(subset.join(", ")));
    }
    let dec = decompose_class(omega, arr)?;
    let gate = is_partitionable(&dec, arr, rule)?;
    if !gate.partitionable {
        return Err(Error::NotPartitionable(gate));
    }
    let lambda = derive_partition(&dec, arr, rule)?;
    let lambda_s = lambda.subpartition(subset)?;

    let mut fixed: BTreeMap<usize, Parity> = BTreeMap::new();
    for (id, &p) in subset.iter().zip(parities) {
        fixed.insert(arr.divisor_coordinate(id)?, p);
    }
    let restriction = omega.restrict(&fixed);
    let beta = restriction.residual.clone();
    let zero1 = || LogForm::zero(omega.n(), 1);
    let alphas: Vec<LogForm> = lambda_s
        .zs()
        .iter()
        .map(|z| -> Result<LogForm> {
            let coord = arr.divisor_coordinate(z)?;
            Ok(restriction
                .residues
                .get(&coord)
                .cloned()
                .unwrap_or_else(zero1))
        })
        .collect::<Result<_>>()?;
    let stratum_dim = arr.dim() - subset.len();
    let report = k_cosymplectic_log(&alphas, &beta, stratum_dim)?;
    Ok(InducedStructure {
        alphas,
        beta,
        subpartition: lambda_s,
        stratum_dim,
        report,
    })
}
