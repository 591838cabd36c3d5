//! Log de Rham cohomology of an arrangement: the cohomology of the log
//! tangent bundle of (M, D) decomposes as H^p(M) ⊕ ⊕_{∅≠τ⊆D} H^{p−|τ|}(X_τ),
//! so it is a direct sum over the stored strata with degree shifts.

use crate::arrangement::Arrangement;
use crate::graded::BettiVector;
use crate::Result;

/// Log cohomology with the full divisor: ⊕_{τ⊆D} H^{p−|τ|}(X_τ).
pub fn b_cohomology(arr: &Arrangement) -> BettiVector {
    let mut acc = BettiVector::zero();
    for (mask, stratum) in arr.strata().enumerate() {
        acc = acc.direct_sum(&stratum.betti.shift(mask.count_ones() as usize));
    }
    acc
}

/// Same sum restricted to subsets of `keep`: the log cohomology of the
/// sub-arrangement that only keeps those hypersurfaces as divisor.
pub fn b_cohomology_restricted(arr: &Arrangement, keep: &[&str]) -> Result<BettiVector> {
    let ids: Vec<String> = keep.iter().map(|s| s.to_string()).collect();
    let keep_mask = arr.mask_for(&ids)?;
    let mut acc = BettiVector::zero();
    // enumerate submasks of keep_mask, including 0 (the M term)
    let mut sub = keep_mask;
    loop {
        acc = acc.direct_sum(
            &arr.stratum_by_mask(sub)
                .betti
                .shift(sub.count_ones() as usize),
        );
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & keep_mask;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::Arrangement;
    use crate::Error;

    fn bv(dims: &[u64]) -> BettiVector {
        BettiVector::from_u64s(dims)
    }

    #[test]
    fn t4_with_three_divisors() {
        let arr = Arrangement::torus_model(4, &[0, 1, 2]).unwrap();
        // degreewise: [1, 4+3·2, 6+3·6+3·4, 4+18+24+8, 1+6+12+8]
        assert_eq!(b_cohomology(&arr), bv(&[1, 10, 36, 54, 27]));
    }

    #[test]
    fn t2_with_one_divisor() {
        let arr = Arrangement::torus_model(2, &[0]).unwrap();
        // H^p(T²) ⊕ H^{p-1}(two circles)
        assert_eq!(b_cohomology(&arr), bv(&[1, 4, 3]));
    }

    #[test]
    fn empty_divisor_is_plain_cohomology() {
        let arr = Arrangement::torus_model(4, &[]).unwrap();
        assert_eq!(b_cohomology(&arr), bv(&[1, 4, 6, 4, 1]));
    }

    #[test]
    fn restricted_to_one_hypersurface() {
        let arr = Arrangement::torus_model(4, &[0, 1, 2]).unwrap();
        assert_eq!(
            b_cohomology_restricted(&arr, &["Z2"]).unwrap(),
            bv(&[1, 6, 12, 10, 3])
        );
    }

    #[test]
    fn restricted_edge_cases() {
        let arr = Arrangement::torus_model(4, &[0, 1, 2]).unwrap();
        assert_eq!(
            b_cohomology_restricted(&arr, &["Z0", "Z1", "Z2"]).unwrap(),
            b_cohomology(&arr)
        );
        assert_eq!(
            b_cohomology_restricted(&arr, &[]).unwrap(),
            bv(&[1, 4, 6, 4, 1])
        );
        assert_eq!(
            b_cohomology_restricted(&arr, &["nope"]),
            Err(Error::UnknownHypersurface("nope".into()))
        );
    }

    #[test]
    fn degree_zero_is_component_count() {
        for coords in [&[][..], &[0][..], &[0, 1][..], &[0, 1, 2, 3][..]] {
            let arr = Arrangement::torus_model(4, coords).unwrap();
            assert_eq!(b_cohomology(&arr).dim(0), arr.manifold_betti().dim(0));
        }
    }

    #[test]
    fn multiplicative_under_products() {
        let a = Arrangement::torus_model(2, &[0]).unwrap();
        let b = Arrangement::torus_model(4, &[1, 2]).unwrap();
        let p = Arrangement::product(&a, &b).unwrap();
        assert_eq!(
            b_cohomology(&p),
            b_cohomology(&a).kunneth(&b_cohomology(&b))
        );
    }

    #[test]
    fn adding_hypersurfaces_is_monotone() {
        let small = Arrangement::torus_model(4, &[0, 1]).unwrap();
        let big = Arrangement::torus_model(4, &[0, 1, 2]).unwrap();
        let (s, b) = (b_cohomology(&small), b_cohomology(&big));
        for p in 0..=4 {
            assert!(s.dim(p) <= b.dim(p));
        }
    }
}
