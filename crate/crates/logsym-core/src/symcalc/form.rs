//! Differential forms on the n-torus in a mixed frame: flagged directions use
//! the log basis covector ê_j = dθ_j / sin θ_j, the rest use dθ_j. All
//! coefficient arithmetic is exact.

use super::certify::{certify_nonvanishing, Certification};
use super::trig::TrigPoly;
use super::{merge_tuples, Parity};
use crate::{Error, Result};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// A degree-p form Σ c_T · ê_T with strictly increasing index tuples T.
/// `poles` is the global frame: which coordinates use ê = dθ/sin θ.
#[derive(Debug, Clone)]
pub struct LogForm {
    n: usize,
    degree: usize,
    poles: BTreeSet<usize>,
    comps: BTreeMap<Vec<usize>, TrigPoly>,
}

/// restrict() output: the pullback part plus, per fixed log direction, the
/// residue form living on the stratum.
#[derive(Debug, Clone)]
pub struct Restriction {
    pub residual: LogForm,
    pub residues: BTreeMap<usize, LogForm>,
}

/// Residues along the two components of {sin θ_j = 0}.
#[derive(Debug, Clone, PartialEq)]
pub struct ResiduePair {
    pub at_zero: LogForm,
    pub at_pi: LogForm,
}

/// is_log_symplectic() output. `top_coefficient` is the coefficient of the
/// full wedge ê_0∧…∧ê_{n−1} in ω^{n/2}, written in ω's own log frame.
#[derive(Debug, Clone)]
pub struct SymplecticReport {
    pub closed: bool,
    pub top_coefficient: TrigPoly,
    pub nondegenerate: Certification,
}

impl SymplecticReport {
    /// Fully verified log symplectic: closed and certified nondegenerate.
    pub fn verified(&self) -> bool {
        self.closed && self.nondegenerate.is_nonvanishing()
    }
}

/// is_k_cosymplectic() output: closedness per input plus the nonvanishing
/// check of α_1∧…∧α_k∧β^ℓ.
#[derive(Debug, Clone, PartialEq)]
pub struct CosymplecticReport {
    pub alphas_closed: Vec<bool>,
    pub beta_closed: bool,
    pub top_coefficient: TrigPoly,
    pub nonvanishing: Certification,
}

impl CosymplecticReport {
    /// Some(true) certified, Some(false) refuted, None undetermined.
    pub fn verdict(&self) -> Option<bool> {
        if self.alphas_closed.iter().any(|c| !c) || !self.beta_closed {
            return Some(false);
        }
        match self.nonvanishing {
            Certification::Nonvanishing => Some(true),
            Certification::Vanishes { .. } => Some(false),
            Certification::Undetermined => None,
        }
    }
}

impl LogForm {
    pub fn zero(n: usize, degree: usize) -> Self {
        LogForm {
            n,
            degree,
            poles: BTreeSet::new(),
            comps: BTreeMap::new(),
        }
    }

    /// Degree-0 form from a scalar.
    pub fn scalar(p: TrigPoly) -> Self {
        let n = p.n();
        let mut f = Self::zero(n, 0);
        f.add_component(Vec::new(), p);
        f
    }

    /// dθ_j, or ê_j = dθ_j/sin θ_j when `pole` is set.
    pub fn covector(n: usize, j: usize, pole: bool) -> Self {
        assert!(j < n);
        let mut f = Self::zero(n, 1);
        if pole {
            f.poles.insert(j);
        }
        f.add_component(vec![j], TrigPoly::one(n));
        f
    }

    /// Assemble from explicit components; validates tuple shape.
    pub fn from_components(
        n: usize,
        degree: usize,
        poles: BTreeSet<usize>,
        comps: Vec<(Vec<usize>, TrigPoly)>,
    ) -> Result<Self> {
        let mut f = Self::zero(n, degree);
        for &j in &poles {
            if j >= n {
                return Err(Error::CoordinateOutOfRange {
                    coordinate: j,
                    dim: n,
                });
            }
        }
        f.poles = poles;
        for (tuple, c) in comps {
            if tuple.len() != degree {
                return Err(Error::DegreeMismatch {
                    expected: degree,
                    got: tuple.len(),
                });
            }
            if tuple.windows(2).any(|w| w[0] >= w[1]) || tuple.iter().any(|&t| t >= n) {
                return Err(Error::CoordinateOutOfRange {
                    coordinate: tuple.iter().max().copied().unwrap_or(0),
                    dim: n,
                });
            }
            if c.n() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: c.n(),
                });
            }
            f.add_component(tuple, c);
        }
        Ok(f)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn poles(&self) -> &BTreeSet<usize> {
        &self.poles
    }

    pub fn components(&self) -> impl Iterator<Item = (&Vec<usize>, &TrigPoly)> {
        self.comps.iter()
    }

    pub fn component(&self, tuple: &[usize]) -> TrigPoly {
        self.comps
            .get(tuple)
            .cloned()
            .unwrap_or_else(|| TrigPoly::zero(self.n))
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    pub(crate) fn add_component(&mut self, tuple: Vec<usize>, c: TrigPoly) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.comps.entry(tuple) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    /// Re-express in the frame with pole flags `target`. Adding a flag
    /// multiplies affected coefficients by sin θ; removing one divides, which
    /// fails if the pole is genuinely there.
    pub fn with_poles(&self, target: &BTreeSet<usize>) -> Result<LogForm> {
        let mut out = Self::zero(self.n, self.degree);
        out.poles = target.clone();
        for (tuple, c) in &self.comps {
            let mut c = c.clone();
            for &j in tuple {
                let had = self.poles.contains(&j);
                let want = target.contains(&j);
                if had && !want {
                    c = c.div_sin(j).ok_or(Error::PoleNotRemovable(j))?;
                } else if !had && want {
                    c = c.mul_sin(j);
                }
            }
            out.add_component(tuple.clone(), c);
        }
        Ok(out)
    }

    /// Canonical frame: drop every pole flag the coefficients don't need.
    pub fn minimal_poles(&self) -> LogForm {
        let mut cur = self.clone();
        for j in self.poles.iter().copied().collect::<Vec<_>>() {
            let mut target = cur.poles.clone();
            target.remove(&j);
            if let Ok(f) = cur.with_poles(&target) {
                cur = f;
            }
        }
        cur
    }

    pub fn add(&self, other: &LogForm) -> Result<LogForm> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: other.n,
            });
        }
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                got: other.degree,
            });
        }
        let union: BTreeSet<usize> = self.poles.union(&other.poles).copied().collect();
        let mut out = self.with_poles(&union).expect("adding poles cannot fail");
        let other = other.with_poles(&union).expect("adding poles cannot fail");
        for (tuple, c) in other.comps {
            out.add_component(tuple, c);
        }
        Ok(out)
    }

    pub fn neg(&self) -> LogForm {
        LogForm {
            n: self.n,
            degree: self.degree,
            poles: self.poles.clone(),
            comps: self.comps.iter().map(|(t, c)| (t.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &LogForm) -> Result<LogForm> {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: &TrigPoly) -> LogForm {
        assert_eq!(s.n(), self.n);
        let mut out = Self::zero(self.n, self.degree);
        out.poles = self.poles.clone();
        for (tuple, c) in &self.comps {
            out.add_component(tuple.clone(), c * s);
        }
        out
    }

    pub fn wedge(&self, other: &LogForm) -> Result<LogForm> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: other.n,
            });
        }
        let union: BTreeSet<usize> = self.poles.union(&other.poles).copied().collect();
        let a = self.with_poles(&union).expect("adding poles cannot fail");
        let b = other.with_poles(&union).expect("adding poles cannot fail");
        let mut out = Self::zero(self.n, self.degree + other.degree);
        out.poles = union;
        for (t1, c1) in &a.comps {
            for (t2, c2) in &b.comps {
                if let Some((tuple, sign)) = merge_tuples(t1, t2) {
                    let c = c1 * c2;
                    out.add_component(tuple, if sign < 0 { -&c } else { c });
                }
            }
        }
        Ok(out)
    }

    /// k-fold wedge power; k = 0 gives the constant function 1.
    pub fn pow_wedge(&self, k: usize) -> Result<LogForm> {
        let mut acc = Self::scalar(TrigPoly::one(self.n));
        for _ in 0..k {
            acc = acc.wedge(self)?;
        }
        Ok(acc)
    }

    /// Exterior derivative. The frame is unchanged: d(ê_T) = 0, and dθ_j
    /// entering a flagged slot picks up the factor sin θ_j (dθ = sin θ · ê).
    pub fn exterior_d(&self) -> LogForm {
        let mut out = Self::zero(self.n, self.degree + 1);
        out.poles = self.poles.clone();
        for (tuple, c) in &self.comps {
            for j in 0..self.n {
                if tuple.contains(&j) {
                    continue;
                }
                let mut dc = c.partial(j);
                if dc.is_zero() {
                    continue;
                }
                if self.poles.contains(&j) {
                    dc = dc.mul_sin(j);
                }
                let pos = tuple.iter().filter(|&&t| t < j).count();
                let mut t = tuple.clone();
                t.insert(pos, j);
                out.add_component(t, if pos % 2 == 1 { -&dc } else { dc });
            }
        }
        out
    }

    pub fn is_closed(&self) -> bool {
        self.exterior_d().is_zero()
    }

    /// Fix coordinates at sin-zeros. Components avoiding the fixed directions
    /// pull back into `residual`; per fixed *flagged* direction the ê_j
    /// coefficient restricts to the stratum as the residue form. Components
    /// hitting a fixed unflagged dθ_j, or two fixed directions at once, have
    /// no pullback and appear in neither part.
    pub fn restrict(&self, fixed: &BTreeMap<usize, Parity>) -> Restriction {
        let surviving: BTreeSet<usize> = self
            .poles
            .iter()
            .filter(|j| !fixed.contains_key(j))
            .copied()
            .collect();
        let restrict_coeff = |c: &TrigPoly| {
            let mut c = c.clone();
            for (&j, &par) in fixed {
                c = c.restrict(j, par);
            }
            c
        };
        let mut residual = Self::zero(self.n, self.degree);
        residual.poles = surviving.clone();
        let mut residues: BTreeMap<usize, LogForm> = self
            .poles
            .iter()
            .filter(|j| fixed.contains_key(j))
            .map(|&j| {
                let mut f = Self::zero(self.n, self.degree.saturating_sub(1));
                f.poles = surviving.clone();
                (j, f)
            })
            .collect();
        for (tuple, c) in &self.comps {
            let touched: Vec<usize> = tuple
                .iter()
                .copied()
                .filter(|t| fixed.contains_key(t))
                .collect();
            match touched[..] {
                [] => residual.add_component(tuple.clone(), restrict_coeff(c)),
                [j] if self.poles.contains(&j) => {
                    let pos = tuple.iter().position(|&t| t == j).unwrap();
                    let mut t = tuple.clone();
                    t.remove(pos);
                    let cc = restrict_coeff(c);
                    let slot = residues.get_mut(&j).expect("flagged fixed direction");
                    slot.add_component(t, if pos % 2 == 1 { -&cc } else { cc });
                }
                _ => {}
            }
        }
        Restriction { residual, residues }
    }

    /// Residue along {sin θ_j = 0}: the ê_j coefficient restricted to each of
    /// the two components. Other directions stay untouched (other log poles
    /// included), so residues can be iterated.
    pub fn residue(&self, j: usize) -> Result<ResiduePair> {
        if !self.poles.contains(&j) {
            return Err(Error::NoLogPole(j));
        }
        let mut poles = self.poles.clone();
        poles.remove(&j);
        let build = |par: Parity| {
            let mut out = Self::zero(self.n, self.degree.saturating_sub(1));
            out.poles = poles.clone();
            for (tuple, c) in &self.comps {
                if let Some(pos) = tuple.iter().position(|&t| t == j) {
                    let mut t = tuple.clone();
                    t.remove(pos);
                    let cc = c.restrict(j, par);
                    out.add_component(t, if pos % 2 == 1 { -&cc } else { cc });
                }
            }
            out
        };
        Ok(ResiduePair {
            at_zero: build(Parity::Zero),
            at_pi: build(Parity::Pi),
        })
    }

    /// Closedness plus certified nondegeneracy of a 2-form: the coefficient
    /// of ω^{n/2} against the full log frame must not vanish.
    pub fn is_log_symplectic(&self) -> Result<SymplecticReport> {
        if self.degree != 2 {
            return Err(Error::DegreeMismatch {
                expected: 2,
                got: self.degree,
            });
        }
        if !self.n.is_multiple_of(2) {
            return Err(Error::OddDimension(self.n));
        }
        let closed = self.exterior_d().is_zero();
        let top = self.pow_wedge(self.n / 2)?;
        let full: Vec<usize> = (0..self.n).collect();
        let top_coefficient = top.component(&full);
        let nondegenerate = certify_nonvanishing(&top_coefficient);
        Ok(SymplecticReport {
            closed,
            top_coefficient,
            nondegenerate,
        })
    }

    /// Grammar-compatible rendering, e.g. `dx/sin(x)^dy + 2*cos(x) dz^dt`.
    pub fn render(&self, names: &[String]) -> String {
        assert_eq!(names.len(), self.n);
        if self.is_zero() {
            return "0".to_string();
        }
        if self.degree == 0 {
            return self.component(&[]).render(names);
        }
        let mut out = String::new();
        let mut first = true;
        for (tuple, c) in &self.comps {
            let wedge: Vec<String> = tuple
                .iter()
                .map(|&t| {
                    if self.poles.contains(&t) {
                        format!("d{}/sin({})", names[t], names[t])
                    } else {
                        format!("d{}", names[t])
                    }
                })
                .collect();
            let wedge = wedge.join("^");
            let scalar = c.render(names);
            // distribute a sum coefficient over the wedge monomial
            let pieces: Vec<(bool, String)> = split_rendered_sum(&scalar);
            for (neg, mag) in pieces {
                if first {
                    if neg {
                        out.push('-');
                    }
                    first = false;
                } else {
                    out.push_str(if neg { " - " } else { " + " });
                }
                if mag == "1" {
                    out.push_str(&wedge);
                } else {
                    out.push_str(&mag);
                    out.push(' ');
                    out.push_str(&wedge);
                }
            }
        }
        out
    }
}

/// Split a rendered scalar sum back into signed monomial strings. The
/// renderer only emits `a + b - c` shapes with monomial summands, so
/// splitting on the separators it uses is lossless.
fn split_rendered_sum(s: &str) -> Vec<(bool, String)> {
    let mut out = Vec::new();
    let (mut rest, mut neg) = match s.strip_prefix('-') {
        Some(r) => (r, true),
        None => (s, false),
    };
    loop {
        let plus = rest.find(" + ");
        let minus = rest.find(" - ");
        let (cut, next_neg) = match (plus, minus) {
            (Some(p), Some(m)) if p < m => (p, false),
            (Some(p), None) => (p, false),
            (_, Some(m)) => (m, true),
            (None, None) => {
                out.push((neg, rest.to_string()));
                return out;
            }
        };
        out.push((neg, rest[..cut].to_string()));
        rest = &rest[cut + 3..];
        neg = next_neg;
    }
}

impl PartialEq for LogForm {
    fn eq(&self, other: &Self) -> bool {
        if self.n != other.n || self.degree != other.degree {
            return false;
        }
        let union: BTreeSet<usize> = self.poles.union(&other.poles).copied().collect();
        let a = self.with_poles(&union).expect("adding poles cannot fail");
        let b = other.with_poles(&union).expect("adding poles cannot fail");
        a.comps == b.comps
    }
}

impl fmt::Display for LogForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.n).map(|j| format!("θ{j}")).collect();
        write!(f, "{}", self.render(&names))
    }
}

/// α_1∧…∧α_k∧β^{(dim−k)/2} must concentrate on one coordinate tuple and be
/// certified nonvanishing; inputs must be pole-free (the public contract).
pub fn is_k_cosymplectic(
    alphas: &[LogForm],
    beta: &LogForm,
    dim: usize,
) -> Result<CosymplecticReport> {
    for a in alphas {
        if let Some(&j) = a.minimal_poles().poles().iter().next() {
            return Err(Error::UnexpectedPole(j));
        }
    }
    if let Some(&j) = beta.minimal_poles().poles().iter().next() {
        return Err(Error::UnexpectedPole(j));
    }
    k_cosymplectic_log(alphas, beta, dim)
}

/// Same check in an arbitrary log frame; used for structures induced on
/// strata, whose forms may keep poles along the remaining divisor.
pub(crate) fn k_cosymplectic_log(
    alphas: &[LogForm],
    beta: &LogForm,
    dim: usize,
) -> Result<CosymplecticReport> {
    let n = beta.n();
    let k = alphas.len();
    if dim < k || !(dim - k).is_multiple_of(2) {
        return Err(Error::CosymplecticParity { dim, k });
    }
    for a in alphas {
        if a.n() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: a.n(),
            });
        }
        if a.degree() != 1 {
            return Err(Error::DegreeMismatch {
                expected: 1,
                got: a.degree(),
            });
        }
    }
    if beta.degree() != 2 {
        return Err(Error::DegreeMismatch {
            expected: 2,
            got: beta.degree(),
        });
    }
    let ell = (dim - k) / 2;
    let mut top = beta.pow_wedge(ell)?;
    for a in alphas.iter().rev() {
        top = a.wedge(&top)?;
    }
    let mut iter = top.components();
    let top_coefficient = match (iter.next(), iter.next()) {
        (None, _) => TrigPoly::zero(n),
        (Some((_, c)), None) => c.clone(),
        (Some(_), Some(_)) => return Err(Error::NotASubtorusForm { dim }),
    };
    Ok(CosymplecticReport {
        alphas_closed: alphas.iter().map(LogForm::is_closed).collect(),
        beta_closed: beta.is_closed(),
        nonvanishing: certify_nonvanishing(&top_coefficient),
        top_coefficient,
    })
}
