//! Multivector fields on the n-torus and the Schouten–Nijenhuis bracket.
//!
//! In coordinates the bracket is the odd Poisson bracket
//!   [P, Q] = (−1)^{p−1} Σ_j ∂P/∂ξ_j ∧ ∂Q/∂θ_j − (−1)^{p(q−1)} Σ_j ∂Q/∂ξ_j ∧ ∂P/∂θ_j
//! where ξ_j stands for ∂/∂θ_j and ∂/∂ξ_j is the left odd derivative. The
//! sign pair is forced by [X, Q] = L_X Q, graded antisymmetry, and the
//! Leibniz rule; the identity tests below pin all three. In particular
//! [π, f] = π^♯(df) with components π^{ac}∂_c f.

use super::form::LogForm;
use super::merge_tuples;
use super::trig::TrigPoly;
use crate::{Error, Result};
use std::collections::BTreeMap;
use std::fmt;

/// A degree-p multivector field Σ c_T · ∂_T, strictly increasing tuples T,
/// trig-polynomial coefficients (always pole-free).
#[derive(Debug, Clone, PartialEq)]
pub struct Multivector {
    n: usize,
    degree: usize,
    comps: BTreeMap<Vec<usize>, TrigPoly>,
}

impl Multivector {
    pub fn zero(n: usize, degree: usize) -> Self {
        Multivector {
            n,
            degree,
            comps: BTreeMap::new(),
        }
    }

    /// Degree-0 multivector, i.e. a function.
    pub fn scalar(p: TrigPoly) -> Self {
        let n = p.n();
        let mut m = Self::zero(n, 0);
        m.add_component(Vec::new(), p);
        m
    }

    /// The coordinate field ∂_j.
    pub fn field(n: usize, j: usize) -> Self {
        assert!(j < n);
        let mut m = Self::zero(n, 1);
        m.add_component(vec![j], TrigPoly::one(n));
        m
    }

    pub fn from_components(
        n: usize,
        degree: usize,
        comps: Vec<(Vec<usize>, TrigPoly)>,
    ) -> Result<Self> {
        let mut m = Self::zero(n, degree);
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
            m.add_component(tuple, c);
        }
        Ok(m)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.degree
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

    pub fn add(&self, other: &Multivector) -> Result<Multivector> {
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
        let mut out = self.clone();
        for (tuple, c) in &other.comps {
            out.add_component(tuple.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> Multivector {
        Multivector {
            n: self.n,
            degree: self.degree,
            comps: self.comps.iter().map(|(t, c)| (t.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Multivector) -> Result<Multivector> {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: &TrigPoly) -> Multivector {
        assert_eq!(s.n(), self.n);
        let mut out = Self::zero(self.n, self.degree);
        for (tuple, c) in &self.comps {
            out.add_component(tuple.clone(), c * s);
        }
        out
    }

    pub fn wedge(&self, other: &Multivector) -> Result<Multivector> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: other.n,
            });
        }
        let mut out = Self::zero(self.n, self.degree + other.degree);
        for (t1, c1) in &self.comps {
            for (t2, c2) in &other.comps {
                if let Some((tuple, sign)) = merge_tuples(t1, t2) {
                    let c = c1 * c2;
                    out.add_component(tuple, if sign < 0 { -&c } else { c });
                }
            }
        }
        Ok(out)
    }

    /// Left odd derivative ∂/∂ξ_j: strip ξ_j with the sign of moving it to
    /// the front.
    fn del_odd(&self, j: usize) -> Multivector {
        let mut out = Self::zero(self.n, self.degree.saturating_sub(1));
        for (tuple, c) in &self.comps {
            if let Some(pos) = tuple.iter().position(|&t| t == j) {
                let mut t = tuple.clone();
                t.remove(pos);
                out.add_component(t, if pos % 2 == 1 { -c } else { c.clone() });
            }
        }
        out
    }

    /// Coefficientwise ∂/∂θ_j.
    fn del_coord(&self, j: usize) -> Multivector {
        let mut out = Self::zero(self.n, self.degree);
        for (tuple, c) in &self.comps {
            out.add_component(tuple.clone(), c.partial(j));
        }
        out
    }

    /// [self, self] = 0, i.e. the bivector is Poisson. Meaningful for any
    /// degree but the even-degree cases are the nontrivial ones.
    pub fn is_poisson(&self) -> bool {
        schouten(self, self).is_zero()
    }

    /// Grammar-compatible rendering with ∂-atoms spelled as `d<name>`.
    pub fn render(&self, names: &[String]) -> String {
        assert_eq!(names.len(), self.n);
        if self.is_zero() {
            return "0".to_string();
        }
        if self.degree == 0 {
            return self.component(&[]).render(names);
        }
        let mut pieces = Vec::new();
        for (tuple, c) in &self.comps {
            let wedge: Vec<String> = tuple.iter().map(|&t| format!("d{}", names[t])).collect();
            pieces.push((wedge.join("^"), c.render(names)));
        }
        let mut out = String::new();
        for (i, (wedge, scalar)) in pieces.iter().enumerate() {
            if i > 0 {
                out.push_str(" + ");
            }
            if scalar == "1" {
                out.push_str(wedge);
            } else if scalar.contains(" + ") || scalar.contains(" - ") {
                out.push_str(&format!("({scalar}) {wedge}"));
            } else {
                out.push_str(&format!("{scalar} {wedge}"));
            }
        }
        out
    }
}

impl fmt::Display for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.n).map(|j| format!("θ{j}")).collect();
        write!(f, "{}", self.render(&names))
    }
}

/// Schouten–Nijenhuis bracket. Panics on mismatched underlying tori (a
/// programming error, not a data error).
pub fn schouten(p: &Multivector, q: &Multivector) -> Multivector {
    assert_eq!(p.n, q.n, "multivectors live on different tori");
    let n = p.n;
    let (dp, dq) = (p.degree, q.degree);
    if dp + dq == 0 {
        return Multivector::zero(n, 0);
    }
    let mut out = Multivector::zero(n, dp + dq - 1);
    // (−1)^{p−1} and −(−1)^{p(q−1)}, without usize underflow
    let first_neg = dp % 2 == 0;
    let second_neg = (dp * (dq + 1)) % 2 == 0;
    for j in 0..n {
        let first = p.del_odd(j).wedge(&q.del_coord(j)).expect("same torus");
        for (t, c) in first.comps {
            out.add_component(t, if first_neg { -&c } else { c });
        }
        let second = q.del_odd(j).wedge(&p.del_coord(j)).expect("same torus");
        for (t, c) in second.comps {
            out.add_component(t, if second_neg { -&c } else { c });
        }
    }
    out
}

/// The Lichnerowicz differential d_π = [π, ·].
pub fn lichnerowicz(pi: &Multivector, p: &Multivector) -> Multivector {
    schouten(pi, p)
}

/// Check that π inverts ω as bundle maps: the matrix of π^♯ against the
/// matrix of ω^♭ must multiply to the identity, as exact identities. The ω
/// entries carry 1/sin factors from the log frame; they must cancel into the
/// π entries, otherwise the failure is reported rather than approximated.
#[allow(clippy::needless_range_loop)] // matrix assembly reads clearest with index pairs
pub fn verify_inverse(omega: &LogForm, pi: &Multivector) -> Result<bool> {
    let n = omega.n();
    if pi.n() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: pi.n(),
        });
    }
    if omega.degree() != 2 {
        return Err(Error::DegreeMismatch {
            expected: 2,
            got: omega.degree(),
        });
    }
    if pi.degree() != 2 {
        return Err(Error::DegreeMismatch {
            expected: 2,
            got: pi.degree(),
        });
    }
    // Ω[k][j]: coefficient of ê_k∧ê_j in ω's own frame (antisymmetric fill).
    let entry = |k: usize, j: usize| -> TrigPoly {
        if k < j {
            omega.component(&[k, j])
        } else if j < k {
            -&omega.component(&[j, k])
        } else {
            TrigPoly::zero(n)
        }
    };
    // B[j][l] = Π_jl / (f_j f_l): divide out the frame factors exactly.
    let mut b = vec![vec![TrigPoly::zero(n); n]; n];
    for j in 0..n {
        for l in 0..n {
            let mut p = if j < l {
                pi.component(&[j, l])
            } else if l < j {
                -&pi.component(&[l, j])
            } else {
                TrigPoly::zero(n)
            };
            if p.is_zero() {
                continue;
            }
            for &m in omega.poles() {
                if m == j || m == l {
                    p = p
                        .div_sin(m)
                        .ok_or(Error::NonCancellingDenominator { row: j, col: l })?;
                }
            }
            b[j][l] = p;
        }
    }
    // Ω · B = Id?
    for k in 0..n {
        for l in 0..n {
            let mut sum = TrigPoly::zero(n);
            for (j, row) in b.iter().enumerate() {
                let o = entry(k, j);
                if o.is_zero() || row[l].is_zero() {
                    continue;
                }
                sum = &sum + &(&o * &row[l]);
            }
            let expect = if k == l {
                TrigPoly::one(n)
            } else {
                TrigPoly::zero(n)
            };
            if sum != expect {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::super::trig::rat;
    use super::*;
    use crate::symcalc::Parity;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn dd(j: usize) -> Multivector {
        Multivector::field(4, j)
    }

    /// π from the worked T⁴ model: sin θ0 sin θ1 ∂_1∧∂_0 + sin θ2 ∂_3∧∂_2.
    fn pi_model() -> Multivector {
        let ss = TrigPoly::sin(4, 0, 1).mul_sin(1);
        dd(1)
            .wedge(&dd(0))
            .unwrap()
            .scale(&ss)
            .add(&dd(3).wedge(&dd(2)).unwrap().scale(&TrigPoly::sin(4, 2, 1)))
            .unwrap()
    }

    /// ω from the worked T⁴ model: ê_0∧ê_1 + ê_2∧dθ_3.
    fn omega_model() -> LogForm {
        let e = |j| LogForm::covector(4, j, true);
        let d = |j| LogForm::covector(4, j, false);
        e(0).wedge(&e(1))
            .unwrap()
            .add(&e(2).wedge(&d(3)).unwrap())
            .unwrap()
    }

    fn random_multivector(rng: &mut StdRng, n: usize, degree: usize) -> Multivector {
        let mut m = Multivector::zero(n, degree);
        let tuples: Vec<Vec<usize>> = (0..1u32 << n)
            .filter(|m| m.count_ones() as usize == degree)
            .map(|mask| (0..n).filter(|j| mask >> j & 1 == 1).collect())
            .collect();
        for t in tuples {
            if rng.gen_bool(0.5) {
                continue;
            }
            let mut c = TrigPoly::constant(n, rat(rng.gen_range(-2..=2)));
            for _ in 0..2 {
                let j = rng.gen_range(0..n);
                let k = rng.gen_range(1..=2);
                c = if rng.gen_bool(0.5) {
                    &c * &TrigPoly::sin(n, j, k)
                } else {
                    &c * &TrigPoly::cos(n, j, k)
                };
            }
            m.add_component(t, c);
        }
        m
    }

    #[test]
    fn bracket_is_the_lie_bracket_on_fields() {
        // [∂_0, sin θ0 ∂_1] = cos θ0 ∂_1
        let x = dd(0);
        let y = dd(1).scale(&TrigPoly::sin(4, 0, 1));
        let b = schouten(&x, &y);
        assert_eq!(b, dd(1).scale(&TrigPoly::cos(4, 0, 1)));
        // and [X, f] = X(f)
        let f = Multivector::scalar(TrigPoly::cos(4, 0, 2));
        let xf = schouten(&x, &f);
        assert_eq!(xf.component(&[]), TrigPoly::cos(4, 0, 2).partial(0));
    }

    #[test]
    fn model_bivector_is_poisson() {
        assert!(pi_model().is_poisson());
        // a deliberately broken variant is not
        let bad = pi_model()
            .add(&dd(0).wedge(&dd(2)).unwrap().scale(&TrigPoly::sin(4, 1, 1)))
            .unwrap();
        assert!(!bad.is_poisson());
    }

    #[test]
    fn lichnerowicz_on_functions_is_the_hamiltonian_field() {
        // pairs-only π on T⁴ coordinates (a1,a2,b1,b2) = (0,1,2,3):
        // π_I = sin a1 sin a2 ∂_{a2}∧∂_{a1} + ∂_{b2}∧∂_{b1}
        let ss = TrigPoly::sin(4, 0, 1).mul_sin(1);
        let pi1 = dd(1)
            .wedge(&dd(0))
            .unwrap()
            .scale(&ss)
            .add(&dd(3).wedge(&dd(2)).unwrap())
            .unwrap();
        assert!(pi1.is_poisson());
        // d_π(cos b1) = π^♯(d cos b1) = −sin(b1) ∂_{b2}
        let f = Multivector::scalar(TrigPoly::cos(4, 2, 1));
        let df = lichnerowicz(&pi1, &f);
        assert_eq!(df, dd(3).scale(&TrigPoly::sin(4, 2, 1)).neg());
        // constants are Casimirs
        let c = Multivector::scalar(TrigPoly::constant(4, rat(7)));
        assert!(lichnerowicz(&pi1, &c).is_zero());
    }

    #[test]
    fn d_pi_squares_to_zero() {
        let pi = pi_model();
        let mut rng = StdRng::seed_from_u64(0x5eed);
        for _ in 0..20 {
            let p = random_multivector(&mut rng, 4, 1);
            let ddp = lichnerowicz(&pi, &lichnerowicz(&pi, &p));
            assert!(ddp.is_zero(), "d_π² ≠ 0 on {p}");
        }
    }

    #[test]
    fn graded_antisymmetry_and_leibniz() {
        let mut rng = StdRng::seed_from_u64(0xbe11);
        for _ in 0..25 {
            // dp ≥ 1: a bracket of two functions is an empty multivector of
            // formal degree −1, which add/wedge cannot bookkeep (and the
            // identities are vacuous there anyway).
            let dp = rng.gen_range(1..=2);
            let dq = rng.gen_range(0..=2);
            let dr = rng.gen_range(0..=1);
            let p = random_multivector(&mut rng, 3, dp);
            let q = random_multivector(&mut rng, 3, dq);
            let r = random_multivector(&mut rng, 3, dr);
            // [P,Q] = −(−1)^{(p−1)(q−1)} [Q,P]
            let lhs = schouten(&p, &q);
            let mut rhs = schouten(&q, &p);
            if (dp + 1) * (dq + 1) % 2 == 0 {
                rhs = rhs.neg();
            }
            assert_eq!(lhs, rhs, "antisymmetry failed at degrees ({dp},{dq})");
            // [P, Q∧R] = [P,Q]∧R + (−1)^{(p−1)q} Q∧[P,R]
            let lhs = schouten(&p, &q.wedge(&r).unwrap());
            let mut second = q.wedge(&schouten(&p, &r)).unwrap();
            if (dp + 1) * dq % 2 == 1 {
                second = second.neg();
            }
            let rhs = schouten(&p, &q).wedge(&r).unwrap().add(&second).unwrap();
            assert_eq!(lhs, rhs, "Leibniz failed at degrees ({dp},{dq},{dr})");
        }
    }

    #[test]
    fn inverse_verification_on_the_model_pair() {
        assert_eq!(verify_inverse(&omega_model(), &pi_model()), Ok(true));
        // pairs-only pair on the same torus
        let e = |j| LogForm::covector(4, j, true);
        let d = |j| LogForm::covector(4, j, false);
        let omega1 = e(0)
            .wedge(&e(1))
            .unwrap()
            .add(&d(2).wedge(&d(3)).unwrap())
            .unwrap();
        let ss = TrigPoly::sin(4, 0, 1).mul_sin(1);
        let pi1 = dd(1)
            .wedge(&dd(0))
            .unwrap()
            .scale(&ss)
            .add(&dd(3).wedge(&dd(2)).unwrap())
            .unwrap();
        assert_eq!(verify_inverse(&omega1, &pi1), Ok(true));
        // mismatched pair fails without erroring
        assert_eq!(verify_inverse(&omega1, &pi_model()), Ok(false));
        // a constant bivector cannot cancel the log poles
        let flat = dd(0).wedge(&dd(1)).unwrap();
        assert_eq!(
            verify_inverse(&omega1, &flat),
            Err(Error::NonCancellingDenominator { row: 0, col: 1 })
        );
    }

    #[test]
    fn restriction_respects_bracket_on_scalars() {
        // sanity link between modules: restricting a Casimir-style identity
        let pi = pi_model();
        let f = Multivector::scalar(TrigPoly::cos(4, 3, 1));
        let df = lichnerowicz(&pi, &f);
        // d_π(cos t) = ±sin θ2 sin θ3 ∂_2; its coefficient restricts to 0 on {θ2 = 0}
        let c = df.component(&[2]);
        assert!(c.restrict(2, Parity::Zero).is_zero());
        assert!(!c.is_zero());
    }
}
