//! Poisson cohomology of a partitionable log symplectic structure: the log
//! de Rham cohomology plus one shifted stratum summand per admissible index
//! collection over the divisor partition. Collections use the pairs fully
//! (I), on the x side (J), on the y side (K), or cut a z-type (L); I must be
//! non-empty and disjoint from J and K.

use crate::arrangement::Arrangement;
use crate::decomposition::{
    decompose_class, derive_partition, is_partitionable, ClassDecomposition, ComponentRule,
    Partition,
};
use crate::graded::BettiVector;
use crate::logcohom::b_cohomology;
use crate::symcalc::LogForm;
use crate::{Error, Result};
use serde::Serialize;
use std::collections::BTreeSet;

/// One admissible collection (I, J, K, L). Indices refer to the partition's
/// pair list (I, J, K) and z list (L).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Default, Serialize)]
pub struct IndexCollection {
    pub i: BTreeSet<usize>,
    pub j: BTreeSet<usize>,
    pub k: BTreeSet<usize>,
    pub l: BTreeSet<usize>,
}

impl IndexCollection {
    /// Codimension of the associated stratum: m = 2|I| + |J| + |K| + |L|.
    pub fn weight(&self) -> usize {
        2 * self.i.len() + self.j.len() + self.k.len() + self.l.len()
    }

    /// Hypersurfaces the collection cuts, in partition order.
    pub fn stratum_ids(&self, partition: &Partition) -> Vec<String> {
        let mut ids = Vec::new();
        for (idx, (x, y)) in partition.pairs().iter().enumerate() {
            if self.i.contains(&idx) {
                ids.push(x.clone());
                ids.push(y.clone());
            } else {
                if self.j.contains(&idx) {
                    ids.push(x.clone());
                }
                if self.k.contains(&idx) {
                    ids.push(y.clone());
                }
            }
        }
        for (idx, z) in partition.zs().iter().enumerate() {
            if self.l.contains(&idx) {
                ids.push(z.clone());
            }
        }
        ids
    }

    /// Twist bookkeeping for the coefficients of the summand.
    pub fn twist(&self, partition: &Partition) -> TwistData {
        let mut half_pairs = Vec::new();
        for (idx, (x, y)) in partition.pairs().iter().enumerate() {
            if self.j.contains(&idx) && !self.k.contains(&idx) {
                half_pairs.push(x.clone());
            }
            if self.k.contains(&idx) && !self.j.contains(&idx) {
                half_pairs.push(y.clone());
            }
        }
        TwistData {
            half_pairs,
            trivial: true,
        }
    }
}

/// Local-coefficient data of a summand: cutting only one member of a pair
/// twists the coefficients along the partner direction, but on torus models
/// the twist bundle is trivial, so dimensions are unaffected.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TwistData {
    pub half_pairs: Vec<String>,
    pub trivial: bool,
}

/// All collections over k pairs and ℓ z-types with I ≠ ∅, I disjoint from J
/// and K, and weight ≤ p_max, in canonical order: by weight, then
/// lexicographically by (I, J, K, L). `strict_jk` additionally forbids a pair
/// from sitting in J and K at once.
pub fn enumerate_index_sets(
    k: usize,
    ell: usize,
    p_max: usize,
    strict_jk: bool,
) -> Vec<IndexCollection> {
    let mut out = Vec::new();
    let mut col = IndexCollection::default();
    extend(0, k, ell, p_max, strict_jk, &mut col, &mut out);
    out.sort_by(|a, b| a.weight().cmp(&b.weight()).then_with(|| a.cmp(b)));
    out
}

fn extend(
    slot: usize,
    k: usize,
    ell: usize,
    p_max: usize,
    strict_jk: bool,
    col: &mut IndexCollection,
    out: &mut Vec<IndexCollection>,
) {
    if col.weight() > p_max {
        return; // weight only grows along a branch
    }
    if slot == k + ell {
        if !col.i.is_empty() {
            out.push(col.clone());
        }
        return;
    }
    if slot < k {
        // unused pair
        extend(slot + 1, k, ell, p_max, strict_jk, col, out);
        // full pair
        col.i.insert(slot);
        extend(slot + 1, k, ell, p_max, strict_jk, col, out);
        col.i.remove(&slot);
        // x side only
        col.j.insert(slot);
        extend(slot + 1, k, ell, p_max, strict_jk, col, out);
        // both sides separately (kept unless strict)
        if !strict_jk {
            col.k.insert(slot);
            extend(slot + 1, k, ell, p_max, strict_jk, col, out);
            col.k.remove(&slot);
        }
        col.j.remove(&slot);
        // y side only
        col.k.insert(slot);
        extend(slot + 1, k, ell, p_max, strict_jk, col, out);
        col.k.remove(&slot);
    } else {
        let z = slot - k;
        extend(slot + 1, k, ell, p_max, strict_jk, col, out);
        col.l.insert(z);
        extend(slot + 1, k, ell, p_max, strict_jk, col, out);
        col.l.remove(&z);
    }
}

/// One stratum summand of the Poisson cohomology.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PoissonSummand {
    pub collection: IndexCollection,
    pub stratum: Vec<String>,
    pub weight: usize,
    pub twist: TwistData,
    pub empty: bool,
    /// Stratum Betti numbers shifted by the weight; zero when the stratum is
    /// empty.
    pub contribution: BettiVector,
}

/// Poisson cohomology with provenance: the log de Rham part plus one record
/// per admissible index collection.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PoissonReport {
    pub pairs: Vec<(String, String)>,
    pub zs: Vec<String>,
    pub log_part: BettiVector,
    pub summands: Vec<PoissonSummand>,
    pub total: BettiVector,
}

/// Sum the theorem over a covering partition of the divisor.
pub fn poisson_cohomology_of_partition(
    partition: &Partition,
    arr: &Arrangement,
    strict_jk: bool,
) -> Result<PoissonReport> {
    partition.covers(arr)?;
    let log_part = b_cohomology(arr);
    let mut total = log_part.clone();
    let mut summands = Vec::new();
    for col in enumerate_index_sets(partition.k(), partition.ell(), arr.dim(), strict_jk) {
        let ids = col.stratum_ids(partition);
        let stratum = {
            let refs: Vec<&str> = ids.iter().map(String::as_str).collect();
            arr.stratum(&refs)?
        };
        let weight = col.weight();
        let contribution = if stratum.empty {
            BettiVector::zero()
        } else {
            stratum.betti.shift(weight)
        };
        total = total.direct_sum(&contribution);
        summands.push(PoissonSummand {
            twist: col.twist(partition),
            collection: col,
            stratum: ids,
            weight,
            empty: stratum.empty,
            contribution,
        });
    }
    Ok(PoissonReport {
        pairs: partition.pairs().to_vec(),
        zs: partition.zs().to_vec(),
        log_part,
        summands,
        total,
    })
}

/// Gate a decomposition on partitionability, derive its partition, and sum.
pub fn poisson_cohomology_of_decomposition(
    dec: &ClassDecomposition,
    arr: &Arrangement,
    rule: ComponentRule,
    strict_jk: bool,
) -> Result<PoissonReport> {
    let gate = is_partitionable(dec, arr, rule)?;
    if !gate.partitionable {
        return Err(Error::NotPartitionable(gate));
    }
    let partition = derive_partition(dec, arr, rule)?;
    poisson_cohomology_of_partition(&partition, arr, strict_jk)
}

/// Full pipeline from a symbolic log symplectic form.
pub fn poisson_cohomology_report(
    omega: &LogForm,
    arr: &Arrangement,
    rule: ComponentRule,
    strict_jk: bool,
) -> Result<PoissonReport> {
    let dec = decompose_class(omega, arr)?;
    poisson_cohomology_of_decomposition(&dec, arr, rule, strict_jk)
}

/// Just the graded dimensions of the full pipeline.
pub fn poisson_cohomology(
    omega: &LogForm,
    arr: &Arrangement,
    rule: ComponentRule,
    strict_jk: bool,
) -> Result<BettiVector> {
    Ok(poisson_cohomology_report(omega, arr, rule, strict_jk)?.total)
}
