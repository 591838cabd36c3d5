//! Exact symbolic calculus on torus models: trigonometric-polynomial
//! coefficients, log differential forms (poles along {sin θ = 0}), and
//! multivector fields with the Schouten bracket.

pub mod certify;
mod form;
mod multi;
mod trig;

pub use certify::{certify_nonvanishing, Certification};
pub(crate) use form::k_cosymplectic_log;
pub use form::{
    is_k_cosymplectic, CosymplecticReport, LogForm, ResiduePair, Restriction, SymplecticReport,
};
pub use multi::{lichnerowicz, schouten, verify_inverse, Multivector};
pub use trig::{Coeff, ProductMonomial, Rat, TrigAtom, TrigPoly};

use serde::{Deserialize, Serialize};

/// Which zero of sin θ a restriction lands on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Parity {
    Zero,
    Pi,
}

impl Parity {
    pub const BOTH: [Parity; 2] = [Parity::Zero, Parity::Pi];
}

impl std::fmt::Display for Parity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Parity::Zero => write!(f, "0"),
            Parity::Pi => write!(f, "π"),
        }
    }
}

/// Merge two strictly increasing index tuples, counting the permutation sign;
/// `None` when they overlap.
pub(crate) fn merge_tuples(a: &[usize], b: &[usize]) -> Option<(Vec<usize>, i8)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let mut sign = 1i8;
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i] < b[j]) {
            out.push(a[i]);
            i += 1;
        } else if i == a.len() || b[j] < a[i] {
            // b[j] jumps over the remaining a-elements
            if (a.len() - i) % 2 == 1 {
                sign = -sign;
            }
            out.push(b[j]);
            j += 1;
        } else {
            return None; // equal indices: wedge vanishes
        }
    }
    Some((out, sign))
}
