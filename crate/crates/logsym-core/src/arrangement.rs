//! Hypersurface arrangements on a compact manifold: the intersection poset
//! with per-stratum topological data, plus builders for torus models and
//! products.

use crate::graded::BettiVector;
use crate::{Error, Result};
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;

/// Default bound on |D|; strata are stored for all 2^|D| subsets, so this
/// keeps arrangements desk-sized. The `*_capped` builders let callers raise it.
pub const MAX_DIVISORS: usize = 8;

/// Partition role a hypersurface can be labelled with: member of the i-th
/// pair (`X`/`Y`) or the j-th lone hypersurface (`Z`). Indices are 1-based as
/// declared by the user.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Role {
    X(usize),
    Y(usize),
    Z(usize),
}

impl Role {
    /// Parse labels like `"x1"`, `"y_2"`, `"z3"`.
    pub fn parse(s: &str) -> Option<Role> {
        let s = s.trim();
        let (kind, rest) = s.split_at(1);
        let rest = rest.strip_prefix('_').unwrap_or(rest);
        let idx: usize = rest.parse().ok()?;
        if idx == 0 {
            return None;
        }
        match kind {
            "x" | "X" => Some(Role::X(idx)),
            "y" | "Y" => Some(Role::Y(idx)),
            "z" | "Z" => Some(Role::Z(idx)),
            _ => None,
        }
    }

    pub fn pair_index(&self) -> Option<usize> {
        match self {
            Role::X(i) | Role::Y(i) => Some(*i),
            Role::Z(_) => None,
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Role::X(i) => write!(f, "x{i}"),
            Role::Y(i) => write!(f, "y{i}"),
            Role::Z(i) => write!(f, "z{i}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hypersurface {
    pub id: String,
    /// Optional declared partition role, cross-checked against the derived one.
    pub role: Option<Role>,
    /// Defining coordinate for torus models: Z = {sin θ_c = 0}.
    pub coordinate: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Stratum {
    /// Hypersurface ids cutting out this stratum, in arrangement order; empty
    /// for M itself.
    pub subset: Vec<String>,
    /// dim(M) − |subset| (formal value also kept for empty strata).
    pub dim: i64,
    pub empty: bool,
    pub components: u64,
    pub betti: BettiVector,
}

/// Immutable arrangement: manifold data plus one stratum per subset of D.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Arrangement {
    dim: usize,
    hypersurfaces: Vec<Hypersurface>,
    /// Indexed by bitmask over `hypersurfaces`; entry 0 is M itself.
    strata: Vec<Stratum>,
}

/// One row of the table handed to `custom_arrangement`.
#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
pub struct StratumEntry {
    pub subset: Vec<String>,
    pub betti: BettiVector,
    pub components: u64,
}

impl Arrangement {
    /// Tⁿ with divisor {sin θ_c = 0 : c ∈ divisor_coords}; hypersurface ids
    /// default to `Z<coordinate>`.
    pub fn torus_model(n: usize, divisor_coords: &[usize]) -> Result<Arrangement> {
        Self::torus_model_capped(n, divisor_coords, MAX_DIVISORS)
    }

    pub fn torus_model_capped(
        n: usize,
        divisor_coords: &[usize],
        cap: usize,
    ) -> Result<Arrangement> {
        let named: Vec<(String, usize, Option<Role>)> = divisor_coords
            .iter()
            .map(|&c| (format!("Z{c}"), c, None))
            .collect();
        Self::torus_model_named(n, &named, cap)
    }

    /// Torus model with explicit hypersurface ids and optional role labels.
    pub fn torus_model_named(
        n: usize,
        divisors: &[(String, usize, Option<Role>)],
        cap: usize,
    ) -> Result<Arrangement> {
        if n == 0 {
            return Err(Error::ZeroDimension);
        }
        if !n.is_multiple_of(2) {
            return Err(Error::OddDimension(n));
        }
        if divisors.len() > cap {
            return Err(Error::TooManyHypersurfaces {
                count: divisors.len(),
                limit: cap,
            });
        }
        let mut seen_ids = BTreeSet::new();
        let mut seen_coords = BTreeSet::new();
        for (id, c, _) in divisors {
            if *c >= n {
                return Err(Error::CoordinateOutOfRange {
                    coordinate: *c,
                    dim: n,
                });
            }
            // coordinate clash first: ids are synthesized from coordinates in
            // the unnamed builder, so the coordinate is the root cause there
            if !seen_coords.insert(*c) {
                return Err(Error::DuplicateCoordinate(*c));
            }
            if !seen_ids.insert(id.clone()) {
                return Err(Error::DuplicateHypersurface(id.clone()));
            }
        }
        let hypersurfaces: Vec<Hypersurface> = divisors
            .iter()
            .map(|(id, c, role)| Hypersurface {
                id: id.clone(),
                role: *role,
                coordinate: Some(*c),
            })
            .collect();
        let k = hypersurfaces.len();
        let mut strata = Vec::with_capacity(1 << k);
        for mask in 0u32..(1 << k) {
            let s = mask.count_ones() as usize;
            // 2^s components, each a T^{n-s}
            let copies = BigUint::from(1u64 << s);
            let betti = BettiVector::torus(n - s).scaled(&copies);
            debug_assert!(poincare_symmetric(&betti, n - s));
            strata.push(Stratum {
                subset: ids_for_mask(&hypersurfaces, mask),
                dim: (n - s) as i64,
                empty: false,
                components: 1 << s,
                betti,
            });
        }
        Ok(Arrangement {
            dim: n,
            hypersurfaces,
            strata,
        })
    }

    /// The one-point arrangement: unit for `product`.
    pub fn point() -> Arrangement {
        Arrangement {
            dim: 0,
            hypersurfaces: Vec::new(),
            strata: vec![Stratum {
                subset: Vec::new(),
                dim: 0,
                empty: false,
                components: 1,
                betti: BettiVector::point(),
            }],
        }
    }

    /// Product arrangement (M₁×M₂, D₁×M₂ ∪ M₁×D₂): strata tensor, right-factor
    /// coordinates shift by dim(M₁), colliding right-factor ids get a `'`.
    pub fn product(a: &Arrangement, b: &Arrangement) -> Result<Arrangement> {
        Self::product_capped(a, b, MAX_DIVISORS)
    }

    pub fn product_capped(a: &Arrangement, b: &Arrangement, cap: usize) -> Result<Arrangement> {
        let ka = a.hypersurfaces.len();
        let kb = b.hypersurfaces.len();
        if ka + kb > cap {
            return Err(Error::TooManyHypersurfaces {
                count: ka + kb,
                limit: cap,
            });
        }
        let mut hypersurfaces = a.hypersurfaces.clone();
        let left_pairs = a.max_role_index(false);
        let left_zs = a.max_role_index(true);
        for h in &b.hypersurfaces {
            let mut id = h.id.clone();
            while hypersurfaces.iter().any(|g| g.id == id) {
                id.push('\'');
            }
            // keep labels meaningful in the product: reindex past the left factor's roles
            let role = h.role.map(|r| match r {
                Role::X(i) => Role::X(i + left_pairs),
                Role::Y(i) => Role::Y(i + left_pairs),
                Role::Z(j) => Role::Z(j + left_zs),
            });
            hypersurfaces.push(Hypersurface {
                id,
                role,
                coordinate: h.coordinate.map(|c| c + a.dim),
            });
        }
        let mut strata = Vec::with_capacity(1 << (ka + kb));
        for mask in 0u32..(1 << (ka + kb)) {
            let amask = mask & ((1u32 << ka) - 1);
            let bmask = mask >> ka;
            let sa = &a.strata[amask as usize];
            let sb = &b.strata[bmask as usize];
            let empty = sa.empty || sb.empty;
            let subset = ids_for_mask(&hypersurfaces, mask);
            let components = sa
                .components
                .checked_mul(sb.components)
                .ok_or_else(|| Error::ComponentOverflow(subset.join(",")))?;
            strata.push(Stratum {
                subset,
                dim: sa.dim + sb.dim,
                empty,
                components,
                betti: sa.betti.kunneth(&sb.betti),
            });
        }
        Ok(Arrangement {
            dim: a.dim + b.dim,
            hypersurfaces,
            strata,
        })
    }

    /// Arrangement from explicit Betti data. The table must carry one entry
    /// per non-empty subset of ids; emptiness is marked by `components: 0`
    /// with a zero Betti vector. The M stratum comes from `manifold_betti`.
    pub fn custom_arrangement(
        manifold_betti: BettiVector,
        dim: usize,
        hypersurfaces: Vec<Hypersurface>,
        table: Vec<StratumEntry>,
    ) -> Result<Arrangement> {
        Self::custom_arrangement_capped(manifold_betti, dim, hypersurfaces, table, MAX_DIVISORS)
    }

    pub fn custom_arrangement_capped(
        manifold_betti: BettiVector,
        dim: usize,
        hypersurfaces: Vec<Hypersurface>,
        table: Vec<StratumEntry>,
        cap: usize,
    ) -> Result<Arrangement> {
        if !dim.is_multiple_of(2) {
            return Err(Error::OddDimension(dim));
        }
        if hypersurfaces.len() > cap {
            return Err(Error::TooManyHypersurfaces {
                count: hypersurfaces.len(),
                limit: cap,
            });
        }
        let mut seen = BTreeSet::new();
        for h in &hypersurfaces {
            if !seen.insert(h.id.clone()) {
                return Err(Error::DuplicateHypersurface(h.id.clone()));
            }
            if let Some(c) = h.coordinate {
                if c >= dim {
                    return Err(Error::CoordinateOutOfRange { coordinate: c, dim });
                }
            }
        }
        let k = hypersurfaces.len();
        let manifold_components = manifold_betti
            .dim(0)
            .to_u64()
            .ok_or_else(|| Error::ComponentOverflow("∅".into()))?;
        let mut strata: Vec<Option<Stratum>> = vec![None; 1 << k];
        strata[0] = Some(Stratum {
            subset: Vec::new(),
            dim: dim as i64,
            empty: manifold_betti.is_zero(),
            components: manifold_components,
            betti: manifold_betti,
        });
        for entry in table {
            let mask = mask_for_ids(&hypersurfaces, &entry.subset)?;
            let subset = ids_for_mask(&hypersurfaces, mask);
            let key = subset.join(",");
            if mask == 0 {
                return Err(Error::DuplicateStratum("∅".into()));
            }
            if strata[mask as usize].is_some() {
                return Err(Error::DuplicateStratum(key));
            }
            let empty = entry.components == 0;
            if empty && !entry.betti.is_zero() {
                return Err(Error::ComponentMismatch {
                    subset: key,
                    betti0: entry.betti.dim(0).to_string(),
                    components: 0,
                });
            }
            if !empty && entry.betti.dim(0) != BigUint::from(entry.components) {
                return Err(Error::ComponentMismatch {
                    subset: key,
                    betti0: entry.betti.dim(0).to_string(),
                    components: entry.components,
                });
            }
            let s = mask.count_ones() as i64;
            strata[mask as usize] = Some(Stratum {
                subset,
                dim: dim as i64 - s,
                empty,
                components: entry.components,
                betti: entry.betti,
            });
        }
        let strata: Vec<Stratum> = strata
            .into_iter()
            .enumerate()
            .map(|(mask, s)| {
                s.ok_or_else(|| {
                    Error::MissingStratum(ids_for_mask(&hypersurfaces, mask as u32).join(","))
                })
            })
            .collect::<Result<_>>()?;
        // monotonicity: one-bit steps suffice for the closure
        for mask in 0u32..(1 << k) {
            if strata[mask as usize].empty {
                continue;
            }
            for b in 0..k {
                let sub = mask & !(1u32 << b);
                if sub != mask && strata[sub as usize].empty {
                    return Err(Error::EmptinessNotMonotone {
                        empty: ids_for_mask(&hypersurfaces, sub).join(","),
                        superset: ids_for_mask(&hypersurfaces, mask).join(","),
                    });
                }
            }
        }
        Ok(Arrangement {
            dim,
            hypersurfaces,
            strata,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn hypersurfaces(&self) -> &[Hypersurface] {
        &self.hypersurfaces
    }

    pub fn divisor_count(&self) -> usize {
        self.hypersurfaces.len()
    }

    pub fn hypersurface_index(&self, id: &str) -> Result<usize> {
        self.hypersurfaces
            .iter()
            .position(|h| h.id == id)
            .ok_or_else(|| Error::UnknownHypersurface(id.to_string()))
    }

    /// Defining coordinate of hypersurface `id` (torus models).
    pub fn divisor_coordinate(&self, id: &str) -> Result<usize> {
        let idx = self.hypersurface_index(id)?;
        self.hypersurfaces[idx]
            .coordinate
            .ok_or_else(|| Error::NoDefiningCoordinate(id.to_string()))
    }

    /// All defining coordinates, in hypersurface order; errors if any is missing.
    pub fn divisor_coordinates(&self) -> Result<Vec<usize>> {
        self.hypersurfaces
            .iter()
            .map(|h| {
                h.coordinate
                    .ok_or_else(|| Error::NoDefiningCoordinate(h.id.clone()))
            })
            .collect()
    }

    pub fn manifold(&self) -> &Stratum {
        &self.strata[0]
    }

    pub fn manifold_betti(&self) -> &BettiVector {
        &self.strata[0].betti
    }

    pub fn stratum(&self, subset: &[&str]) -> Result<&Stratum> {
        let ids: Vec<String> = subset.iter().map(|s| s.to_string()).collect();
        let mask = mask_for_ids(&self.hypersurfaces, &ids)?;
        Ok(&self.strata[mask as usize])
    }

    pub fn stratum_by_mask(&self, mask: u32) -> &Stratum {
        &self.strata[mask as usize]
    }

    pub fn mask_for(&self, subset: &[String]) -> Result<u32> {
        mask_for_ids(&self.hypersurfaces, subset)
    }

    /// All strata in bitmask order (M first).
    pub fn strata(&self) -> impl Iterator<Item = &Stratum> {
        self.strata.iter()
    }

    fn max_role_index(&self, z: bool) -> usize {
        self.hypersurfaces
            .iter()
            .filter_map(|h| h.role)
            .filter_map(|r| match (z, r) {
                (false, Role::X(i)) | (false, Role::Y(i)) => Some(i),
                (true, Role::Z(j)) => Some(j),
                _ => None,
            })
            .max()
            .unwrap_or(0)
    }
}

fn ids_for_mask(hypersurfaces: &[Hypersurface], mask: u32) -> Vec<String> {
    hypersurfaces
        .iter()
        .enumerate()
        .filter(|(i, _)| mask & (1 << i) != 0)
        .map(|(_, h)| h.id.clone())
        .collect()
}

fn mask_for_ids(hypersurfaces: &[Hypersurface], ids: &[String]) -> Result<u32> {
    let mut mask = 0u32;
    for id in ids {
        let i = hypersurfaces
            .iter()
            .position(|h| &h.id == id)
            .ok_or_else(|| Error::UnknownHypersurface(id.clone()))?;
        if mask & (1 << i) != 0 {
            return Err(Error::DuplicateInSubset(id.clone()));
        }
        mask |= 1 << i;
    }
    Ok(mask)
}

fn poincare_symmetric(betti: &BettiVector, dim: usize) -> bool {
    (0..=dim).all(|p| betti.dim(p) == betti.dim(dim - p))
}
