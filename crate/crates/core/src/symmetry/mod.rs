//! The `S_{2d} × S_d` action on edge partitions: vertex relabelling by `σ`
//! and color relabelling by `τ`. An edge `(i, j)` of color `c` is sent to
//! `(σ(i), σ(j))` with color `τ(c)`.

mod appendix;

use std::fmt;

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;

use crate::enumeration::PartitionSet;
use crate::error::{Error, Result};
use crate::flips::Sign;
use crate::model::{classify_tree, edge_count, edge_index_unchecked, EdgePartition, TreeShape};

pub use appendix::{
    epsilon_formula_check, epsilon_formula_check_d2, match_appendix, AppendixData, AppendixEntry,
    AppendixReport, AppendixRepresentative, EpsilonReport, EpsilonViolation,
};

/// A permutation of `{1, …, n}`, stored as 0-based images.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(Vec<u8>);

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n as u8).collect())
    }

    /// From 1-based images `[σ(1), …, σ(n)]`.
    pub fn from_images(images: &[usize]) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in images {
            if x == 0 || x > n || std::mem::replace(&mut seen[x - 1], true) {
                return Err(Error::input(format!("{images:?} is not a permutation")));
            }
        }
        Ok(Perm(images.iter().map(|&x| (x - 1) as u8).collect()))
    }

    /// Parses cycle notation such as `(1,2,4)(3,6,5)`; `e` or an empty string
    /// is the identity. A cycle `(a,b,c)` sends `a -> b -> c -> a`.
    pub fn parse_cycles(s: &str, n: usize) -> Result<Self> {
        let mut images: Vec<u8> = (0..n as u8).collect();
        let body = s.trim();
        if body.is_empty() || body == "e" {
            return Ok(Perm(images));
        }
        let bad = || Error::input(format!("cannot parse permutation {s:?} on {n} points"));
        let mut moved = vec![false; n];
        for part in body.split(')') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let inner = part.strip_prefix('(').ok_or_else(bad)?;
            let cycle: Vec<usize> = inner
                .split(',')
                .map(|t| t.trim().parse::<usize>().map_err(|_| bad()))
                .collect::<Result<_>>()?;
            for (k, &a) in cycle.iter().enumerate() {
                let b = cycle[(k + 1) % cycle.len()];
                if a == 0 || a > n || b == 0 || b > n || std::mem::replace(&mut moved[a - 1], true)
                {
                    return Err(bad());
                }
                images[a - 1] = (b - 1) as u8;
            }
        }
        Ok(Perm(images))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `σ(i)` for 1-based `i`.
    pub fn apply(&self, i: usize) -> usize {
        self.0[i - 1] as usize + 1
    }

    pub(crate) fn images0(&self) -> &[u8] {
        &self.0
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Perm) -> Perm {
        assert_eq!(
            self.len(),
            other.len(),
            "composing permutations of different degree"
        );
        Perm(other.0.iter().map(|&x| self.0[x as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u8; self.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x as usize] = i as u8;
        }
        Perm(inv)
    }

    pub fn sign(&self) -> Sign {
        let n = self.len();
        let mut seen = vec![false; n];
        let mut even_cycles = 0;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut k = start;
            while !seen[k] {
                seen[k] = true;
                k = self.0[k] as usize;
                len += 1;
            }
            if len % 2 == 0 {
                even_cycles += 1;
            }
        }
        Sign::from_parity(even_cycles % 2 == 1)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i == x as usize)
    }

    /// The transposition `(k, k+1)`, 1-based.
    pub fn adjacent_transposition(n: usize, k: usize) -> Perm {
        let mut p = Perm::identity(n);
        p.0.swap(k - 1, k);
        p
    }

    /// All `n!` permutations in lexicographic order of their image lists.
    pub fn all(n: usize) -> Vec<Perm> {
        (0..n as u8).permutations(n).map(Perm).collect()
    }

    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Perm {
        let mut images: Vec<u8> = (0..n as u8).collect();
        images.shuffle(rng);
        Perm(images)
    }

    /// Image of the edge with index `idx` of `K_n` (`n = self.len()`).
    pub fn edge_map(&self) -> Vec<usize> {
        let n = self.len();
        let mut out = Vec::with_capacity(edge_count(n));
        for i in 0..n {
            for j in i + 1..n {
                let (a, b) = (self.0[i] as usize, self.0[j] as usize);
                let (a, b) = (a.min(b), a.max(b));
                out.push(edge_index_unchecked(a + 1, b + 1, n));
            }
        }
        out
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.len();
        let mut seen = vec![false; n];
        let mut wrote = false;
        for start in 0..n {
            if seen[start] || self.0[start] as usize == start {
                continue;
            }
            write!(f, "(")?;
            let mut k = start;
            let mut first = true;
            while !seen[k] {
                seen[k] = true;
                if !first {
                    write!(f, ",")?;
                }
                write!(f, "{}", k + 1)?;
                first = false;
                k = self.0[k] as usize;
            }
            write!(f, ")")?;
            wrote = true;
        }
        if !wrote {
            write!(f, "e")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// An element `(σ, τ)` of `S_{2d} × S_d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PermPair {
    pub sigma: Perm,
    pub tau: Perm,
}

impl PermPair {
    pub fn new(sigma: Perm, tau: Perm) -> Self {
        PermPair { sigma, tau }
    }

    pub fn identity(d: usize) -> Self {
        PermPair::new(Perm::identity(2 * d), Perm::identity(d))
    }

    pub fn parse(sigma: &str, tau: &str, d: usize) -> Result<Self> {
        Ok(PermPair::new(
            Perm::parse_cycles(sigma, 2 * d)?,
            Perm::parse_cycles(tau, d)?,
        ))
    }

    pub fn compose(&self, other: &PermPair) -> PermPair {
        PermPair::new(
            self.sigma.compose(&other.sigma),
            self.tau.compose(&other.tau),
        )
    }

    pub fn inverse(&self) -> PermPair {
        PermPair::new(self.sigma.inverse(), self.tau.inverse())
    }

    pub fn random<R: Rng + ?Sized>(d: usize, rng: &mut R) -> PermPair {
        PermPair::new(Perm::random(2 * d, rng), Perm::random(d, rng))
    }

    /// Every element of the group, `σ` outer, `τ` inner.
    pub fn all(d: usize) -> Vec<PermPair> {
        let taus = Perm::all(d);
        Perm::all(2 * d)
            .into_iter()
            .flat_map(|s| {
                taus.iter()
                    .map(move |t| PermPair::new(s.clone(), t.clone()))
            })
            .collect()
    }

    /// Precomputed form for acting on many partitions.
    pub fn action(&self) -> Action {
        Action {
            edge_map: self.sigma.edge_map(),
            color_map: self.tau.images0().to_vec(),
        }
    }
}

impl fmt::Display for PermPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} × {}", self.sigma, self.tau)
    }
}

/// `(σ, τ)` compiled to an edge-index map and a color map.
#[derive(Clone, Debug)]
pub struct Action {
    edge_map: Vec<usize>,
    color_map: Vec<u8>,
}

impl Action {
    pub fn apply_colors(&self, colors: &[u8], out: &mut [u8]) {
        for (k, &c) in colors.iter().enumerate() {
            out[self.edge_map[k]] = self.color_map[c as usize];
        }
    }

    /// Where the edge with index `k` is sent.
    pub fn edge_image(&self, k: usize) -> usize {
        self.edge_map[k]
    }
}

/// `(σ, τ) * P`.
pub fn act(g: &PermPair, p: &EdgePartition) -> Result<EdgePartition> {
    if g.sigma.len() != p.n() || g.tau.len() != p.d() {
        return Err(Error::input(format!(
            "group element acts on (n, d) = ({}, {}) but the partition has ({}, {})",
            g.sigma.len(),
            g.tau.len(),
            p.n(),
            p.d()
        )));
    }
    let mut out = vec![0u8; p.colors().len()];
    g.action().apply_colors(p.colors(), &mut out);
    Ok(EdgePartition::from_parts_unchecked(p.d(), p.n(), out))
}

/// `|S_{2d} × S_d| = (2d)! · d!`.
pub fn group_order(d: usize) -> u64 {
    let fact = |k: usize| (1..=k as u64).product::<u64>();
    fact(2 * d) * fact(d)
}

#[derive(Clone, Debug)]
pub struct Orbit {
    /// Minimal-code member.
    pub representative: EdgePartition,
    pub size: usize,
    pub stabilizer: Vec<PermPair>,
    /// Tree shapes of the representative's classes; only for `K_6`.
    pub shapes: Option<Vec<TreeShape>>,
}

#[derive(Clone, Debug)]
pub struct OrbitTable {
    pub d: usize,
    /// Sorted by representative code.
    pub orbits: Vec<Orbit>,
    /// Orbit position of each member of the partition set.
    pub orbit_of: Vec<u32>,
}

impl OrbitTable {
    pub fn total(&self) -> usize {
        self.orbits.iter().map(|o| o.size).sum()
    }

    /// Orbit sizes sorted descending.
    pub fn size_multiset(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self.orbits.iter().map(|o| o.size).collect();
        s.sort_unstable_by(|a, b| b.cmp(a));
        s
    }

    /// Orbit containing `p`.
    pub fn orbit_index(&self, set: &PartitionSet, p: &EdgePartition) -> Result<usize> {
        let k = set
            .index_of(p)?
            .ok_or_else(|| Error::input(format!("{p} is not in the partition set")))?;
        Ok(self.orbit_of[k] as usize)
    }

    /// Rows `(orbit_id, rep_code, size, stab_order, type1, …)` as CSV.
    pub fn write_csv<W: std::io::Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        let mut header = vec![
            "orbit_id".to_string(),
            "rep_code".into(),
            "size".into(),
            "stab_order".into(),
        ];
        header.extend((1..=self.d).map(|c| format!("type{c}")));
        out.write_record(&header)?;
        for (k, o) in self.orbits.iter().enumerate() {
            let mut row = vec![
                (k + 1).to_string(),
                o.representative.canonical_code().to_string(),
                o.size.to_string(),
                o.stabilizer.len().to_string(),
            ];
            match &o.shapes {
                Some(shapes) => row.extend(shapes.iter().map(|s| s.to_string())),
                None => row.extend(std::iter::repeat_n(String::new(), self.d)),
            }
            out.write_record(&row)?;
        }
        out.flush()?;
        Ok(())
    }
}

/// All `(σ, τ)` fixing `p`, by brute force over the whole group.
pub fn stabilizer(p: &EdgePartition) -> Vec<PermPair> {
    let mut out = vec![0u8; p.colors().len()];
    PermPair::all(p.d())
        .into_iter()
        .filter(|g| {
            g.action().apply_colors(p.colors(), &mut out);
            out == p.colors()
        })
        .collect()
}

pub fn shapes(p: &EdgePartition) -> Option<Vec<TreeShape>> {
    (p.n() == 6).then(|| {
        (0..p.d() as u8)
            .map(|c| {
                let edges = p.class_edges(c);
                if edges.len() == 5 {
                    classify_tree(&edges).unwrap_or(TreeShape::NotTree)
                } else {
                    TreeShape::NotTree
                }
            })
            .collect()
    })
}

/// Orbit decomposition of `set` under `S_{2d} × S_d`, by breadth-first search
/// along adjacent transpositions of both factors.
pub fn orbits(set: &PartitionSet) -> Result<OrbitTable> {
    let d = set.d();
    let n = set.n();
    let mut generators = Vec::new();
    for k in 1..n {
        generators.push(PermPair::new(
            Perm::adjacent_transposition(n, k),
            Perm::identity(d),
        ));
    }
    for k in 1..d {
        generators.push(PermPair::new(
            Perm::identity(n),
            Perm::adjacent_transposition(d, k),
        ));
    }
    let actions: Vec<Action> = generators.iter().map(PermPair::action).collect();

    let mut orbit_of = vec![u32::MAX; set.len()];
    let mut reps = Vec::new();
    let mut sizes = Vec::new();
    let mut buf = vec![0u8; set.edge_count()];
    let mut stack = Vec::new();
    for root in 0..set.len() {
        if orbit_of[root] != u32::MAX {
            continue;
        }
        let id = reps.len() as u32;
        orbit_of[root] = id;
        stack.push(root);
        let mut size = 0;
        while let Some(u) = stack.pop() {
            size += 1;
            for a in &actions {
                a.apply_colors(set.colors(u), &mut buf);
                let v = set.index_of_colors(&buf).ok_or_else(|| {
                    Error::Certificate(format!(
                        "group action moved {} out of the partition set",
                        set.get(u)
                    ))
                })?;
                if orbit_of[v] == u32::MAX {
                    orbit_of[v] = id;
                    stack.push(v);
                }
            }
        }
        reps.push(root);
        sizes.push(size);
    }

    let orbits = reps
        .par_iter()
        .zip(sizes.par_iter())
        .map(|(&r, &size)| {
            let representative = set.get(r);
            Orbit {
                stabilizer: stabilizer(&representative),
                shapes: shapes(&representative),
                representative,
                size,
            }
        })
        .collect();
    Ok(OrbitTable {
        d,
        orbits,
        orbit_of,
    })
}
