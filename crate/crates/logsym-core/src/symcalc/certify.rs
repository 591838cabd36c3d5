//! Nonvanishing certificates for trigonometric polynomials, fully rational:
//! exact evaluation on the quarter-turn lattice plus a Lipschitz bound.

use super::trig::{rat, Rat, TrigPoly};
use num_traits::{Signed, Zero};

/// Outcome of a nonvanishing check. `Vanishes` carries an exact lattice
/// witness (quarter turns of π/2 per coordinate); `None` means the polynomial
/// is identically zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certification {
    Nonvanishing,
    Vanishes { witness: Option<Vec<u8>> },
    Undetermined,
}

impl Certification {
    pub fn is_nonvanishing(&self) -> bool {
        matches!(self, Certification::Nonvanishing)
    }
}

/// Try to certify p ≠ 0 everywhere on the torus.
///
/// Every point is within sup-distance π/4 of the lattice {0, π/2, π, 3π/2}^n,
/// and |p(θ) − p(x)| ≤ L·‖θ − x‖_∞ with L = Σ_k(|Re c_k|+|Im c_k|)·‖k‖₁. So if
/// the lattice minimum of max(|Re p|, |Im p|) exceeds L·π/4 the polynomial
/// cannot vanish; π is bounded above by 355/113. An exact lattice zero is
/// returned as a witness. Anything in between stays `Undetermined`.
pub fn certify_nonvanishing(p: &TrigPoly) -> Certification {
    if let Some(c) = p.as_constant() {
        return if c.is_zero() {
            Certification::Vanishes { witness: None }
        } else {
            Certification::Nonvanishing
        };
    }
    let coords: Vec<usize> = p.support().into_iter().collect();
    let mut min_lb: Option<Rat> = None;
    let mut counter = vec![0u8; coords.len()];
    loop {
        let mut point = vec![0u8; p.n()];
        for (slot, &c) in counter.iter().zip(&coords) {
            point[c] = *slot;
        }
        let v = p.eval_quarter(&point);
        if v.is_zero() {
            return Certification::Vanishes {
                witness: Some(point),
            };
        }
        let lb = v.re.abs().max(v.im.abs());
        min_lb = Some(match min_lb {
            Some(m) => m.min(lb),
            None => lb,
        });
        // advance the mixed-radix counter
        let mut i = 0;
        loop {
            if i == counter.len() {
                let threshold = p.lipschitz_l1() * rat(355) / rat(452); // L·π/4 ≤ L·355/452
                return if min_lb.expect("lattice is non-empty") > threshold {
                    Certification::Nonvanishing
                } else {
                    Certification::Undetermined
                };
            }
            counter[i] += 1;
            if counter[i] < 4 {
                break;
            }
            counter[i] = 0;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    #[test]
    fn constants_decide_exactly() {
        assert_eq!(
            certify_nonvanishing(&TrigPoly::constant(2, rat(5))),
            Certification::Nonvanishing
        );
        assert_eq!(
            certify_nonvanishing(&TrigPoly::zero(2)),
            Certification::Vanishes { witness: None }
        );
    }

    #[test]
    fn lattice_zero_gives_witness() {
        let p = TrigPoly::sin(2, 1, 1);
        match certify_nonvanishing(&p) {
            Certification::Vanishes { witness: Some(w) } => {
                assert!(p.eval_quarter(&w).is_zero());
            }
            other => panic!("expected witness, got {other:?}"),
        }
        // 1 + cos vanishes exactly at θ = π
        let q = &TrigPoly::one(1) + &TrigPoly::cos(1, 0, 1);
        assert_eq!(
            certify_nonvanishing(&q),
            Certification::Vanishes {
                witness: Some(vec![2])
            }
        );
    }

    #[test]
    fn comfortable_margin_certifies() {
        // 3 + cos θ: lattice min 2, L = 1, threshold 355/452 < 1
        let p = &TrigPoly::constant(1, rat(3)) + &TrigPoly::cos(1, 0, 1);
        assert_eq!(certify_nonvanishing(&p), Certification::Nonvanishing);
        // 3 + sin(x)sin(y): lattice min 2, L = 2
        let q =
            &TrigPoly::constant(2, rat(3)) + &(&TrigPoly::sin(2, 0, 1) * &TrigPoly::sin(2, 1, 1));
        assert_eq!(certify_nonvanishing(&q), Certification::Nonvanishing);
    }

    #[test]
    fn thin_margin_stays_undetermined() {
        // 101/100 + cos θ is positive but the lattice bound cannot see it
        let p = &TrigPoly::constant(1, BigRational::new(101.into(), 100.into()))
            + &TrigPoly::cos(1, 0, 1);
        assert_eq!(certify_nonvanishing(&p), Certification::Undetermined);
    }

    #[test]
    fn zero_away_from_lattice_is_undetermined_not_certified() {
        // cos θ − 1/2 vanishes at θ = π/3; the verdict must not be Nonvanishing
        let p =
            &TrigPoly::cos(1, 0, 1) - &TrigPoly::constant(1, BigRational::new(1.into(), 2.into()));
        assert_eq!(certify_nonvanishing(&p), Certification::Undetermined);
    }
}
