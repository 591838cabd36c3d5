//! Just enough exact sparse linear algebra for the oracles: ranks over the
//! complex rationals, with an optional block split along Fourier modes.

use crate::symcalc::Coeff;
use num_traits::Zero;
use std::collections::BTreeMap;

/// Row label of the operator matrices: a Fourier mode plus a coordinate
/// tuple.
pub(crate) type RowKey = (Vec<i64>, Vec<usize>);

/// Rank by column elimination: reduce each column against the pivots found so
/// far; a surviving column is normalized and becomes a pivot at its leading
/// row.
pub(crate) fn rank<I>(columns: I) -> usize
where
    I: IntoIterator<Item = BTreeMap<usize, Coeff>>,
{
    let mut pivots: BTreeMap<usize, BTreeMap<usize, Coeff>> = BTreeMap::new();
    for col in columns {
        if let Some((row, reduced)) = reduce(&pivots, col) {
            pivots.insert(row, reduced);
        }
    }
    pivots.len()
}

fn reduce(
    pivots: &BTreeMap<usize, BTreeMap<usize, Coeff>>,
    mut col: BTreeMap<usize, Coeff>,
) -> Option<(usize, BTreeMap<usize, Coeff>)> {
    loop {
        let (row, lead) = match col.iter().next() {
            None => return None,
            Some((&r, v)) => (r, v.clone()),
        };
        if lead.is_zero() {
            col.remove(&row);
            continue;
        }
        match pivots.get(&row) {
            None => {
                // normalize the leading entry to 1
                let normalized = col.iter().map(|(&r, v)| (r, v / &lead)).collect();
                return Some((row, normalized));
            }
            Some(pivot) => {
                for (&r, v) in pivot {
                    let delta = &lead * v;
                    match col.remove(&r) {
                        None => {
                            col.insert(r, -delta);
                        }
                        Some(old) => {
                            let new = old - delta;
                            if !new.is_zero() {
                                col.insert(r, new);
                            }
                        }
                    }
                }
            }
        }
    }
}

/// Rank of a matrix whose rows and columns carry Fourier modes. Columns only
/// interact through shared row modes, so union-find splits the matrix into
/// independent blocks that are eliminated separately.
pub(crate) fn rank_by_mode_blocks(cols: &[(Vec<i64>, BTreeMap<RowKey, Coeff>)]) -> usize {
    fn intern_id<'a>(m: &mut BTreeMap<&'a Vec<i64>, usize>, k: &'a Vec<i64>) -> usize {
        let next = m.len();
        *m.entry(k).or_insert(next)
    }
    let mut intern: BTreeMap<&Vec<i64>, usize> = BTreeMap::new();
    for (mode, col) in cols {
        intern_id(&mut intern, mode);
        for key in col.keys() {
            intern_id(&mut intern, &key.0);
        }
    }
    let mut dsu = Dsu::new(intern.len());
    for (mode, col) in cols {
        let c = intern[mode];
        for key in col.keys() {
            dsu.union(c, intern[&key.0]);
        }
    }
    // group columns by block, with block-local row numbering
    type Block<'a> = (BTreeMap<&'a RowKey, usize>, Vec<BTreeMap<usize, Coeff>>);
    let mut blocks: BTreeMap<usize, Block> = BTreeMap::new();
    for (mode, col) in cols {
        let root = dsu.find(intern[mode]);
        let (rows, cls) = blocks.entry(root).or_default();
        let mut local = BTreeMap::new();
        for (key, v) in col {
            let next = rows.len();
            let r = *rows.entry(key).or_insert(next);
            local.insert(r, v.clone());
        }
        cls.push(local);
    }
    blocks.into_values().map(|(_, cls)| rank(cls)).sum()
}

struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    fn new(len: usize) -> Dsu {
        Dsu {
            parent: (0..len).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcalc::Rat;

    fn c(re: i64) -> Coeff {
        Coeff::new(Rat::from_integer(re.into()), Rat::from_integer(0.into()))
    }

    fn ci(im: i64) -> Coeff {
        Coeff::new(Rat::from_integer(0.into()), Rat::from_integer(im.into()))
    }

    fn col(entries: &[(usize, Coeff)]) -> BTreeMap<usize, Coeff> {
        entries.iter().cloned().collect()
    }

    #[test]
    fn ranks_of_small_matrices() {
        // identity
        let id3 = vec![col(&[(0, c(1))]), col(&[(1, c(5))]), col(&[(2, c(-2))])];
        assert_eq!(rank(id3), 3);
        // a scaled copy and an explicit zero entry both collapse
        let dup = vec![
            col(&[(0, c(1)), (1, c(2))]),
            col(&[(0, c(2)), (1, c(4))]),
            col(&[(0, c(0))]),
        ];
        assert_eq!(rank(dup), 1);
        // a column independent of the span is still counted
        let mixed = vec![
            col(&[(0, c(1)), (1, c(2))]),
            col(&[(0, c(2)), (1, c(4))]),
            col(&[(1, c(1))]),
        ];
        assert_eq!(rank(mixed), 2);
        // empty matrix and zero columns
        assert_eq!(rank(Vec::new()), 0);
        assert_eq!(rank(vec![BTreeMap::new(), BTreeMap::new()]), 0);
    }

    #[test]
    fn complex_entries_are_exact() {
        // [i, 1; 1, -i] has rank 1 since (i)·(-i) = 1
        let m = vec![
            col(&[(0, ci(1)), (1, c(1))]),
            col(&[(0, c(1)), (1, ci(-1))]),
        ];
        assert_eq!(rank(m), 1);
        let m = vec![col(&[(0, ci(1)), (1, c(1))]), col(&[(0, c(1)), (1, ci(1))])];
        assert_eq!(rank(m), 2);
    }

    #[test]
    fn mode_blocks_agree_with_a_flat_rank() {
        // two decoupled blocks: modes (0,) and (5,)
        let key = |m: i64, t: usize| (vec![m], vec![t]);
        let cols = vec![
            (
                vec![0],
                [(key(0, 0), c(1)), (key(1, 0), c(1))].into_iter().collect(),
            ),
            (
                vec![1],
                [(key(0, 0), c(2)), (key(1, 0), c(2))].into_iter().collect(),
            ),
            (vec![5], [(key(5, 1), c(3))].into_iter().collect()),
            (vec![7], BTreeMap::new()),
        ];
        assert_eq!(rank_by_mode_blocks(&cols), 2);
    }
}
