//! Graded dimension bookkeeping: Betti vectors with direct sum, degree shift
//! and Künneth product.

use num_bigint::BigUint;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::fmt;

/// Dimension vector of a non-negatively graded vector space, stored densely
/// from degree 0 with trailing zeros trimmed, so the zero space is `[]`.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BettiVector(Vec<BigUint>);

impl BettiVector {
    pub fn new(mut dims: Vec<BigUint>) -> Self {
        while dims.last().is_some_and(Zero::is_zero) {
            dims.pop();
        }
        BettiVector(dims)
    }

    pub fn from_u64s(dims: &[u64]) -> Self {
        Self::new(dims.iter().map(|&d| BigUint::from(d)).collect())
    }

    pub fn zero() -> Self {
        BettiVector(Vec::new())
    }

    /// Betti numbers of a point: `[1]`.
    pub fn point() -> Self {
        Self::from_u64s(&[1])
    }

    /// Betti numbers of a circle: `[1, 1]`.
    pub fn circle() -> Self {
        Self::from_u64s(&[1, 1])
    }

    /// Betti numbers of the n-torus (rows of Pascal's triangle).
    pub fn torus(n: usize) -> Self {
        (0..n).fold(Self::point(), |acc, _| acc.kunneth(&Self::circle()))
    }

    pub fn dims(&self) -> &[BigUint] {
        &self.0
    }

    /// Dimension in degree `p` (zero beyond the stored range).
    pub fn dim(&self, p: usize) -> BigUint {
        self.0.get(p).cloned().unwrap_or_else(BigUint::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Largest degree with a nonzero dimension; `None` for the zero space.
    pub fn top_degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn total(&self) -> BigUint {
        self.0.iter().sum()
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let len = self.0.len().max(other.0.len());
        Self::new((0..len).map(|p| self.dim(p) + other.dim(p)).collect())
    }

    /// Shift every degree up by `m`; the zero space stays zero.
    pub fn shift(&self, m: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut dims = vec![BigUint::zero(); m];
        dims.extend(self.0.iter().cloned());
        Self::new(dims)
    }

    /// Graded tensor product: dimension convolution.
    pub fn kunneth(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut dims = vec![BigUint::zero(); self.0.len() + other.0.len() - 1];
        for (p, a) in self.0.iter().enumerate() {
            for (q, b) in other.0.iter().enumerate() {
                dims[p + q] += a * b;
            }
        }
        Self::new(dims)
    }

    /// `copies` disjoint copies of the same space.
    pub fn scaled(&self, copies: &BigUint) -> Self {
        Self::new(self.0.iter().map(|d| d * copies).collect())
    }
}

impl fmt::Display for BettiVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, d) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{d}")?;
        }
        write!(f, "]")
    }
}
