//! Exhaustive enumeration of homogeneous (optionally cycle-free) `d`-partitions
//! of `K_{2d}`.
//!
//! The search colors edges in lexicographic order, trying colors in ascending
//! order, so members come out already sorted by canonical code. Each color has
//! a budget of `2d - 1` edges; in cycle-free mode every color also keeps a
//! component labelling of the vertices and an edge inside one component is
//! pruned immediately.
//!
//! The parallel path shards on the colors of the first three edges. Shards are
//! collected in prefix order, which is again canonical-code order, so the
//! member sequence does not depend on the number of worker threads.

use rayon::prelude::*;
use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::model::{self, edge_count, EdgePartition};

/// Largest `d` enumerated without an explicit override.
pub const MAX_EXHAUSTIVE_D: usize = 3;

const SHARD_DEPTH: usize = 3;

#[derive(Clone, Copy, Debug, Default)]
pub struct EnumerateOptions {
    /// Lift the `d <= 3` feasibility guard.
    pub allow_large: bool,
    /// Run single-threaded.
    pub sequential: bool,
}

/// Homogeneous partitions of `K_{2d}`, sorted by canonical code, with a
/// hashed code index for constant-time lookup.
#[derive(Clone, Debug)]
pub struct PartitionSet {
    d: usize,
    n: usize,
    cycle_free: bool,
    colors: Vec<u8>,
    codes: Vec<u128>,
    index: FxHashMap<u128, u32>,
}

impl PartitionSet {
    fn from_flat(d: usize, n: usize, cycle_free: bool, colors: Vec<u8>) -> Self {
        let width = edge_count(n);
        let codes: Vec<u128> = colors
            .chunks_exact(width)
            .map(|c| model::canonical_code(c, d))
            .collect();
        debug_assert!(codes.windows(2).all(|w| w[0] < w[1]));
        let index = codes
            .iter()
            .enumerate()
            .map(|(k, &c)| (c, k as u32))
            .collect();
        PartitionSet {
            d,
            n,
            cycle_free,
            colors,
            codes,
            index,
        }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_cycle_free_set(&self) -> bool {
        self.cycle_free
    }

    pub fn edge_count(&self) -> usize {
        edge_count(self.n)
    }

    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }

    /// Colors of the member at position `k`.
    pub fn colors(&self, k: usize) -> &[u8] {
        let w = self.edge_count();
        &self.colors[k * w..(k + 1) * w]
    }

    pub fn get(&self, k: usize) -> EdgePartition {
        EdgePartition::from_parts_unchecked(self.d, self.n, self.colors(k).to_vec())
    }

    pub fn code(&self, k: usize) -> u128 {
        self.codes[k]
    }

    pub fn codes(&self) -> &[u128] {
        &self.codes
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = EdgePartition> + '_ {
        (0..self.len()).map(move |k| self.get(k))
    }

    pub fn index_of_code(&self, code: u128) -> Option<usize> {
        self.index.get(&code).map(|&k| k as usize)
    }

    /// Position of `colors` (same `d` and `n` as the set) among the members.
    pub fn index_of_colors(&self, colors: &[u8]) -> Option<usize> {
        self.index_of_code(model::canonical_code(colors, self.d))
    }

    pub fn index_of(&self, p: &EdgePartition) -> Result<Option<usize>> {
        self.check_dims(p)?;
        Ok(self.index_of_colors(p.colors()))
    }

    pub fn contains(&self, p: &EdgePartition) -> Result<bool> {
        Ok(self.index_of(p)?.is_some())
    }

    pub(crate) fn check_dims(&self, p: &EdgePartition) -> Result<()> {
        if p.d() != self.d || p.n() != self.n {
            return Err(Error::input(format!(
                "partition has (d, n) = ({}, {}) but the set was built for ({}, {})",
                p.d(),
                p.n(),
                self.d,
                self.n
            )));
        }
        Ok(())
    }
}

/// Enumerates with default options (feasibility guard on, parallel).
pub fn enumerate(d: usize, cycle_free: bool) -> Result<PartitionSet> {
    enumerate_with(d, cycle_free, EnumerateOptions::default())
}

pub fn enumerate_with(d: usize, cycle_free: bool, opts: EnumerateOptions) -> Result<PartitionSet> {
    check_feasible(d, opts.allow_large)?;
    let n = 2 * d;
    let search = Search::new(d, cycle_free);
    let shard_depth = SHARD_DEPTH.min(search.edges.len());
    let prefixes = search.prefixes(shard_depth);
    let run = |prefix: &Vec<u8>| {
        let mut out = Vec::new();
        search.run(prefix, |c| out.extend_from_slice(c));
        out
    };
    let shards: Vec<Vec<u8>> = if opts.sequential {
        prefixes.iter().map(run).collect()
    } else {
        prefixes.par_iter().map(run).collect()
    };
    Ok(PartitionSet::from_flat(d, n, cycle_free, shards.concat()))
}

/// Streams every partition, in canonical order, to `visit` without storing them.
pub fn for_each_partition(
    d: usize,
    cycle_free: bool,
    allow_large: bool,
    mut visit: impl FnMut(&[u8]),
) -> Result<()> {
    check_feasible(d, allow_large)?;
    Search::new(d, cycle_free).run(&[], &mut visit);
    Ok(())
}

fn check_feasible(d: usize, allow_large: bool) -> Result<()> {
    if d == 0 {
        return Err(Error::input("d must be at least 1"));
    }
    if d > MAX_EXHAUSTIVE_D && !allow_large {
        let parts = vec![2 * d - 1; d];
        let total = multinomial(&parts)
            .map(|m| m.to_string())
            .unwrap_or_else(|| "more than 2^128".into());
        return Err(Error::Infeasible {
            d,
            reason: format!(
                "there are {total} homogeneous {d}-partitions of K_{}; pass the override to try anyway",
                2 * d
            ),
        });
    }
    if d > 5 {
        return Err(Error::Infeasible {
            d,
            reason: "canonical codes do not fit in 128 bits".into(),
        });
    }
    Ok(())
}

/// `(Σ k_i)! / Π k_i!`, or `None` on overflow.
pub fn multinomial(parts: &[usize]) -> Option<u128> {
    let mut acc: u128 = 1;
    let mut total: u128 = 0;
    for &k in parts {
        for j in 1..=k as u128 {
            total += 1;
            // acc is M_prev * C(total - 1, j - 1) here, so the division is exact
            acc = acc.checked_mul(total)? / j;
        }
    }
    Some(acc)
}

struct Search {
    d: usize,
    n: usize,
    cycle_free: bool,
    budget: usize,
    edges: Vec<(usize, usize)>,
}

impl Search {
    fn new(d: usize, cycle_free: bool) -> Self {
        let n = 2 * d;
        Search {
            d,
            n,
            cycle_free,
            budget: 2 * d - 1,
            edges: model::edges(n).iter().map(|e| (e.i - 1, e.j - 1)).collect(),
        }
    }

    fn prefixes(&self, depth: usize) -> Vec<Vec<u8>> {
        let mut out = vec![Vec::new()];
        for _ in 0..depth {
            out = out
                .into_iter()
                .flat_map(|p| {
                    (0..self.d as u8).map(move |c| {
                        let mut q = p.clone();
                        q.push(c);
                        q
                    })
                })
                .collect();
        }
        out
    }

    /// Depth-first search restricted to colorings starting with `prefix`.
    fn run(&self, prefix: &[u8], mut emit: impl FnMut(&[u8])) {
        let e = self.edges.len();
        let width = self.d * self.n;
        let mut state = State {
            colors: vec![0; e],
            remaining: vec![self.budget; self.d],
            labels: vec![0; (e + 1) * width],
        };
        for c in 0..self.d {
            for v in 0..self.n {
                state.labels[c * self.n + v] = v as u8;
            }
        }
        self.descend(&mut state, 0, prefix, &mut emit);
    }

    fn descend(&self, st: &mut State, depth: usize, prefix: &[u8], emit: &mut impl FnMut(&[u8])) {
        if depth == self.edges.len() {
            emit(&st.colors);
            return;
        }
        let (u, v) = self.edges[depth];
        let width = self.d * self.n;
        let colors: std::ops::Range<u8> = match prefix.get(depth) {
            Some(&c) => c..c + 1,
            None => 0..self.d as u8,
        };
        for c in colors {
            let ci = c as usize;
            if st.remaining[ci] == 0 {
                continue;
            }
            let (cur, next) = st.labels.split_at_mut((depth + 1) * width);
            let cur = &cur[depth * width..];
            let next = &mut next[..width];
            if self.cycle_free {
                let row = &cur[ci * self.n..(ci + 1) * self.n];
                let (lu, lv) = (row[u], row[v]);
                if lu == lv {
                    continue;
                }
                next.copy_from_slice(cur);
                for l in &mut next[ci * self.n..(ci + 1) * self.n] {
                    if *l == lv {
                        *l = lu;
                    }
                }
            }
            st.colors[depth] = c;
            st.remaining[ci] -= 1;
            self.descend(st, depth + 1, prefix, emit);
            st.remaining[ci] += 1;
        }
    }
}

struct State {
    colors: Vec<u8>,
    remaining: Vec<usize>,
    labels: Vec<u8>,
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent oracle: every d-coloring of K_{2d}, filtered by the
    /// predicates on `EdgePartition`.
    fn brute_force(d: usize, cycle_free: bool) -> Vec<u128> {
        let n = 2 * d;
        let e = edge_count(n);
        let total = (d as u128).pow(e as u32);
        (0..total)
            .filter_map(|code| {
                let mut colors = vec![0u8; e];
                let mut rest = code;
                for k in (0..e).rev() {
                    colors[k] = (rest % d as u128) as u8;
                    rest /= d as u128;
                }
                let p = EdgePartition::new(d, n, colors).unwrap();
                (p.is_homogeneous() && (!cycle_free || p.is_cycle_free())).then_some(code)
            })
            .collect()
    }

    #[test]
    fn small_counts() {
        assert_eq!(enumerate(1, false).unwrap().len(), 1);
        assert_eq!(enumerate(1, true).unwrap().len(), 1);
        assert_eq!(enumerate(2, false).unwrap().len(), 20);
        assert_eq!(enumerate(2, true).unwrap().len(), 12);
    }

    #[test]
    fn matches_brute_force_for_d2() {
        for cf in [false, true] {
            let set = enumerate(2, cf).unwrap();
            assert_eq!(set.codes(), brute_force(2, cf).as_slice());
        }
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let seq = enumerate_with(
            3,
            true,
            EnumerateOptions {
                sequential: true,
                ..Default::default()
            },
        )
        .unwrap();
        let par = enumerate(3, true).unwrap();
        assert_eq!(seq.codes(), par.codes());
        assert_eq!(seq.len(), 66240);
    }

    #[test]
    fn streaming_matches_stored() {
        let set = enumerate(2, true).unwrap();
        let mut seen = Vec::new();
        for_each_partition(2, true, false, |c| seen.push(model::canonical_code(c, 2))).unwrap();
        assert_eq!(seen, set.codes());
    }

    #[test]
    fn multinomial_identity() {
        assert_eq!(multinomial(&[5, 5, 5]), Some(756756));
        assert_eq!(multinomial(&[3, 3]), Some(20));
        assert_eq!(multinomial(&[1]), Some(1));
        assert_eq!(multinomial(&[7, 7, 7, 7]), Some(472518347558400));
    }

    #[test]
    fn feasibility_guard() {
        assert!(matches!(
            enumerate(4, true),
            Err(Error::Infeasible { d: 4, .. })
        ));
        assert!(enumerate(0, true).is_err());
    }

    #[test]
    fn contains_examples() {
        let set = enumerate(2, true).unwrap();
        let fig1 =
            EdgePartition::from_classes(4, &[&[(1, 2), (1, 4), (2, 3)], &[(1, 3), (2, 4), (3, 4)]])
                .unwrap();
        let fig2 =
            EdgePartition::from_classes(4, &[&[(1, 2), (1, 3), (1, 4)], &[(2, 3), (2, 4), (3, 4)]])
                .unwrap();
        let lopsided = EdgePartition::new(2, 4, vec![0, 0, 0, 0, 1, 1]).unwrap();
        assert!(set.contains(&fig1).unwrap());
        assert!(!set.contains(&fig2).unwrap());
        assert!(!set.contains(&lopsided).unwrap());
        let wrong = EdgePartition::new(3, 4, vec![0; 6]).unwrap();
        assert!(set.contains(&wrong).is_err());
    }
}
