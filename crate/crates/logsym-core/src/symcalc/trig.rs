//! Trigonometric polynomials with exact Gaussian-rational coefficients,
//! stored in the complex exponential basis exp(i k·θ), k ∈ Zⁿ.

use super::Parity;
use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

pub type Rat = BigRational;
pub type Coeff = Complex<Rat>;

pub(crate) fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

fn czero() -> Coeff {
    Coeff::new(Rat::zero(), Rat::zero())
}

fn cre(r: Rat) -> Coeff {
    Coeff::new(r, Rat::zero())
}

fn cim(r: Rat) -> Coeff {
    Coeff::new(Rat::zero(), r)
}

/// Finite sum Σ_k c_k exp(i k·θ) on the n-torus. Real-valued polynomials are
/// exactly the conjugate-symmetric ones (c_{-k} = conj(c_k)); products are
/// convolutions, so the ring operations stay exact.
#[derive(Clone, PartialEq, Eq)]
pub struct TrigPoly {
    n: usize,
    /// Invariant: no zero coefficients, every key has length n.
    terms: BTreeMap<Vec<i64>, Coeff>,
}

impl TrigPoly {
    pub fn zero(n: usize) -> Self {
        TrigPoly {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, c: Rat) -> Self {
        Self::from_coeff(n, cre(c))
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, Rat::one())
    }

    pub fn from_coeff(n: usize, c: Coeff) -> Self {
        let mut p = Self::zero(n);
        p.add_term(vec![0; n], c);
        p
    }

    /// Single basis exponential exp(i k·θ).
    pub fn exponential(n: usize, k: Vec<i64>) -> Self {
        assert_eq!(k.len(), n);
        let mut p = Self::zero(n);
        p.add_term(k, cre(Rat::one()));
        p
    }

    /// sin(freq·θ_coord) = (E_freq − E_{−freq}) / 2i.
    pub fn sin(n: usize, coord: usize, freq: i64) -> Self {
        assert!(coord < n);
        let mut p = Self::zero(n);
        if freq != 0 {
            let mut k = vec![0; n];
            k[coord] = freq;
            p.add_term(k.clone(), cim(-Rat::one() / rat(2)));
            k[coord] = -freq;
            p.add_term(k, cim(Rat::one() / rat(2)));
        }
        p
    }

    /// cos(freq·θ_coord) = (E_freq + E_{−freq}) / 2.
    pub fn cos(n: usize, coord: usize, freq: i64) -> Self {
        assert!(coord < n);
        if freq == 0 {
            return Self::one(n);
        }
        let mut p = Self::zero(n);
        let mut k = vec![0; n];
        k[coord] = freq;
        p.add_term(k.clone(), cre(Rat::one() / rat(2)));
        k[coord] = -freq;
        p.add_term(k, cre(Rat::one() / rat(2)));
        p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &Coeff)> {
        self.terms.iter()
    }

    pub(crate) fn add_term(&mut self, k: Vec<i64>, c: Coeff) {
        debug_assert_eq!(k.len(), self.n);
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(k) {
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

    /// The coefficient of exp(0) — the average value over the torus.
    pub fn const_coeff(&self) -> Coeff {
        self.terms
            .get(&vec![0; self.n])
            .cloned()
            .unwrap_or_else(czero)
    }

    /// Some(c) iff the polynomial is the constant c (zero gives Some(0)).
    pub fn as_constant(&self) -> Option<Coeff> {
        match self.terms.len() {
            0 => Some(czero()),
            1 => {
                let (k, c) = self.terms.iter().next().unwrap();
                k.iter().all(|&x| x == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    /// Some(r) iff the polynomial is the real constant r.
    pub fn as_rational_constant(&self) -> Option<Rat> {
        let c = self.as_constant()?;
        c.im.is_zero().then_some(c.re)
    }

    /// Real-valuedness = conjugate symmetry of the coefficients.
    pub fn is_real(&self) -> bool {
        self.terms.iter().all(|(k, c)| {
            let neg: Vec<i64> = k.iter().map(|x| -x).collect();
            match self.terms.get(&neg) {
                Some(d) => d.re == c.re && d.im == -c.im.clone(),
                None => false,
            }
        })
    }

    /// ∂/∂θ_j multiplies the k-term by i·k_j.
    pub fn partial(&self, j: usize) -> Self {
        assert!(j < self.n);
        let mut out = Self::zero(self.n);
        for (k, c) in &self.terms {
            if k[j] != 0 {
                out.add_term(k.clone(), c * &cim(rat(k[j])));
            }
        }
        out
    }

    pub fn mul_sin(&self, j: usize) -> Self {
        self * &Self::sin(self.n, j, 1)
    }

    pub fn mul_rat(&self, r: &Rat) -> Self {
        self.mul_coeff(&cre(r.clone()))
    }

    pub fn mul_coeff(&self, m: &Coeff) -> Self {
        let mut out = Self::zero(self.n);
        if m.is_zero() {
            return out;
        }
        for (k, c) in &self.terms {
            out.add_term(k.clone(), c * m);
        }
        out
    }

    /// Exact division by sin θ_j, if the quotient is again a trig polynomial.
    ///
    /// Grouping the terms by their frequencies away from j gives univariate
    /// Laurent polynomials p(w), w = exp(iθ_j); then f/sin θ_j = 2i·w·p(w) /
    /// (w²−1), which clears the denominator iff 2i·w·p vanishes at w = ±1.
    pub fn div_sin(&self, j: usize) -> Option<Self> {
        assert!(j < self.n);
        let mut groups: BTreeMap<Vec<i64>, BTreeMap<i64, Coeff>> = BTreeMap::new();
        for (k, c) in &self.terms {
            let mut rest = k.clone();
            let kj = rest[j];
            rest[j] = 0;
            groups.entry(rest).or_default().insert(kj, c.clone());
        }
        let two_i = cim(rat(2));
        let mut out = Self::zero(self.n);
        for (rest, poly) in groups {
            // q(w) = 2i·w·p(w), exponents shifted down to start at zero
            let min_e = poly.keys().next().unwrap() + 1;
            let max_e = poly.keys().last().unwrap() + 1;
            let mut q = vec![czero(); (max_e - min_e + 1) as usize];
            for (e, c) in &poly {
                q[(e + 1 - min_e) as usize] = c * &two_i;
            }
            let h = div_linear(&q, &cre(Rat::one()))?;
            let h = div_linear(&h, &cre(-Rat::one()))?;
            for (i, c) in h.into_iter().enumerate() {
                let mut k = rest.clone();
                k[j] = min_e + i as i64;
                out.add_term(k, c);
            }
        }
        Some(out)
    }

    /// Substitute θ_j = 0 or π; the result no longer involves θ_j.
    pub fn restrict(&self, j: usize, parity: Parity) -> Self {
        assert!(j < self.n);
        let mut out = Self::zero(self.n);
        for (k, c) in &self.terms {
            let mut kk = k.clone();
            let kj = kk[j];
            kk[j] = 0;
            let flip = parity == Parity::Pi && kj.rem_euclid(2) == 1;
            out.add_term(kk, if flip { -c.clone() } else { c.clone() });
        }
        out
    }

    /// Exact evaluation at the quarter-turn point θ_j = point[j]·π/2.
    pub fn eval_quarter(&self, point: &[u8]) -> Coeff {
        assert_eq!(point.len(), self.n);
        let mut acc = czero();
        for (k, c) in &self.terms {
            let t: i64 = k.iter().zip(point).map(|(kj, &m)| kj * i64::from(m)).sum();
            // multiply c by i^t
            acc += match t.rem_euclid(4) {
                0 => c.clone(),
                1 => Coeff::new(-c.im.clone(), c.re.clone()),
                2 => -c.clone(),
                _ => Coeff::new(c.im.clone(), -c.re.clone()),
            };
        }
        acc
    }

    /// Coordinates with a nonzero frequency somewhere.
    pub fn support(&self) -> BTreeSet<usize> {
        let mut s = BTreeSet::new();
        for k in self.terms.keys() {
            for (j, &kj) in k.iter().enumerate() {
                if kj != 0 {
                    s.insert(j);
                }
            }
        }
        s
    }

    pub fn max_abs_freq(&self) -> i64 {
        self.terms
            .keys()
            .flat_map(|k| k.iter().map(|x| x.abs()))
            .max()
            .unwrap_or(0)
    }

    /// Σ_k (|Re c_k| + |Im c_k|) · ‖k‖₁ — a sup-norm Lipschitz constant.
    pub fn lipschitz_l1(&self) -> Rat {
        let mut acc = Rat::zero();
        for (k, c) in &self.terms {
            let norm: i64 = k.iter().map(|x| x.abs()).sum();
            acc += (c.re.abs() + c.im.abs()) * rat(norm);
        }
        acc
    }

    /// Rewrite in the real product basis Π_j {cos, sin}(k_j θ_j); `None` when
    /// the polynomial is not real-valued.
    pub fn product_basis(&self) -> Option<BTreeMap<ProductMonomial, Rat>> {
        let mut acc: BTreeMap<ProductMonomial, Coeff> = BTreeMap::new();
        for (k, c) in &self.terms {
            let mut parts: Vec<(ProductMonomial, Coeff)> = vec![(Vec::new(), c.clone())];
            for (j, &kj) in k.iter().enumerate() {
                if kj == 0 {
                    continue;
                }
                let a = kj.unsigned_abs();
                let i_sign = cim(rat(kj.signum()));
                let mut next = Vec::with_capacity(parts.len() * 2);
                for (atoms, coeff) in parts {
                    let mut with_cos = atoms.clone();
                    with_cos.push((j, TrigAtom::Cos, a));
                    next.push((with_cos, coeff.clone()));
                    let mut with_sin = atoms;
                    with_sin.push((j, TrigAtom::Sin, a));
                    next.push((with_sin, &coeff * &i_sign));
                }
                parts = next;
            }
            for (atoms, coeff) in parts {
                let slot = acc.entry(atoms).or_insert_with(czero);
                *slot = &*slot + &coeff;
            }
        }
        let mut out = BTreeMap::new();
        for (atoms, coeff) in acc {
            if !coeff.im.is_zero() {
                return None;
            }
            if !coeff.re.is_zero() {
                out.insert(atoms, coeff.re);
            }
        }
        Some(out)
    }

    /// Human/grammar form like `3/2*sin(2x)*cos(y) + 1`. Falls back to a debug
    /// dump for non-real polynomials.
    pub fn render(&self, names: &[String]) -> String {
        assert_eq!(names.len(), self.n);
        let Some(basis) = self.product_basis() else {
            return format!("{self:?}");
        };
        if basis.is_empty() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (i, (atoms, q)) in basis.iter().enumerate() {
            let neg = q.is_negative();
            let mag = q.abs();
            if i == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mut factors: Vec<String> = Vec::new();
            if !mag.is_one() || atoms.is_empty() {
                factors.push(mag.to_string());
            }
            for (j, kind, a) in atoms {
                let f = match kind {
                    TrigAtom::Sin => "sin",
                    TrigAtom::Cos => "cos",
                };
                if *a == 1 {
                    factors.push(format!("{f}({})", names[*j]));
                } else {
                    factors.push(format!("{f}({a}{})", names[*j]));
                }
            }
            s.push_str(&factors.join("*"));
        }
        s
    }
}

/// Which real atom a product-basis factor is.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum TrigAtom {
    Cos,
    Sin,
}

/// A product-basis monomial: one (coordinate, atom, frequency) factor per
/// involved coordinate, sorted by coordinate.
pub type ProductMonomial = Vec<(usize, TrigAtom, u64)>;

/// Divide q(w) (dense, constant term first) by (w − r); `None` if a nonzero
/// remainder is left.
fn div_linear(q: &[Coeff], r: &Coeff) -> Option<Vec<Coeff>> {
    if q.iter().all(Coeff::is_zero) {
        return Some(Vec::new());
    }
    let d = q.len() - 1;
    if d == 0 {
        return None; // nonzero constant is never divisible
    }
    let mut c = vec![czero(); d];
    c[d - 1] = q[d].clone();
    for i in (1..d).rev() {
        c[i - 1] = &q[i] + &(r * &c[i]);
    }
    let rem = &q[0] + &(r * &c[0]);
    rem.is_zero().then_some(c)
}

impl fmt::Debug for TrigPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TrigPoly(n={}, {{", self.n)?;
        for (i, (k, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{k:?}: {}+{}i", c.re, c.im)?;
        }
        write!(f, "}})")
    }
}

impl fmt::Display for TrigPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.n).map(|j| format!("θ{j}")).collect();
        write!(f, "{}", self.render(&names))
    }
}

impl Add for &TrigPoly {
    type Output = TrigPoly;
    fn add(self, rhs: &TrigPoly) -> TrigPoly {
        assert_eq!(self.n, rhs.n);
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(k.clone(), c.clone());
        }
        out
    }
}

impl Sub for &TrigPoly {
    type Output = TrigPoly;
    fn sub(self, rhs: &TrigPoly) -> TrigPoly {
        self + &(-rhs)
    }
}

impl Neg for &TrigPoly {
    type Output = TrigPoly;
    fn neg(self) -> TrigPoly {
        TrigPoly {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.clone(), -c.clone()))
                .collect(),
        }
    }
}

impl Mul for &TrigPoly {
    type Output = TrigPoly;
    fn mul(self, rhs: &TrigPoly) -> TrigPoly {
        assert_eq!(self.n, rhs.n);
        let mut out = TrigPoly::zero(self.n);
        for (k1, c1) in &self.terms {
            for (k2, c2) in &rhs.terms {
                let k: Vec<i64> = k1.iter().zip(k2).map(|(a, b)| a + b).collect();
                out.add_term(k, c1 * c2);
            }
        }
        out
    }
}
