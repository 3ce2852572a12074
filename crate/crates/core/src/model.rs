//! Edges and faces of `K_n`, edge partitions and the predicates on them.
//!
//! Vertices are 1-based everywhere in the public API. Colors are 0-based
//! internally; color `c` is the class `Γ_{c+1}` when printed.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::union_find::DisjointSet;

/// Number of edges of `K_n`.
pub const fn edge_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// An undirected edge `{i, j}` with `i < j`, 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub i: usize,
    pub j: usize,
}

impl Edge {
    /// Normalizes the endpoint order; rejects loops.
    pub fn new(a: usize, b: usize) -> Result<Self> {
        if a == b {
            return Err(Error::input(format!("loop edge ({a},{a})")));
        }
        Ok(Edge {
            i: a.min(b),
            j: a.max(b),
        })
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.i, self.j)
    }
}

/// Lexicographic rank of the edge `(i, j)` of `K_n`.
pub fn edge_index(i: usize, j: usize, n: usize) -> Result<usize> {
    if i == 0 || i >= j || j > n {
        return Err(Error::input(format!(
            "edge ({i},{j}) is not an edge of K_{n} (need 1 <= i < j <= n)"
        )));
    }
    Ok(edge_index_unchecked(i, j, n))
}

#[inline]
pub(crate) fn edge_index_unchecked(i: usize, j: usize, n: usize) -> usize {
    (i - 1) * n + j - 1 - i * (i + 1) / 2
}

/// Inverse of [`edge_index`].
pub fn edge_at(index: usize, n: usize) -> Result<Edge> {
    if index >= edge_count(n) {
        return Err(Error::input(format!(
            "edge index {index} out of range for K_{n}"
        )));
    }
    let mut rest = index;
    for i in 1..n {
        let row = n - i;
        if rest < row {
            return Ok(Edge { i, j: i + 1 + rest });
        }
        rest -= row;
    }
    unreachable!("index checked against edge_count")
}

/// All edges of `K_n` in index order.
pub fn edges(n: usize) -> Vec<Edge> {
    (1..n)
        .flat_map(|i| (i + 1..=n).map(move |j| Edge { i, j }))
        .collect()
}

/// A triangle `x < y < z` of `K_n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Face {
    pub x: usize,
    pub y: usize,
    pub z: usize,
}

impl Face {
    pub fn new(a: usize, b: usize, c: usize) -> Result<Self> {
        let mut v = [a, b, c];
        v.sort_unstable();
        if v[0] == v[1] || v[1] == v[2] || v[0] == 0 {
            return Err(Error::input(format!("({a},{b},{c}) is not a face")));
        }
        Ok(Face {
            x: v[0],
            y: v[1],
            z: v[2],
        })
    }

    /// Edge indices of `(x,y)`, `(x,z)`, `(y,z)` in that order.
    pub fn edge_indices(&self, n: usize) -> [usize; 3] {
        [
            edge_index_unchecked(self.x, self.y, n),
            edge_index_unchecked(self.x, self.z, n),
            edge_index_unchecked(self.y, self.z, n),
        ]
    }

    pub fn check_in(&self, n: usize) -> Result<()> {
        if self.z > n {
            return Err(Error::input(format!("face {self} is not a face of K_{n}")));
        }
        Ok(())
    }
}

impl fmt::Display for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.x, self.y, self.z)
    }
}

/// All faces of `K_n` in lexicographic order.
pub fn faces(n: usize) -> Vec<Face> {
    let mut out = Vec::new();
    for x in 1..=n {
        for y in x + 1..=n {
            for z in y + 1..=n {
                out.push(Face { x, y, z });
            }
        }
    }
    out
}

/// An ordered `d`-partition `(Γ_1, …, Γ_d)` of the edges of `K_n`, stored as
/// one color per edge in lexicographic edge order.
///
/// Serializes to the shared partition JSON object
/// `{"d": .., "n": .., "colors": [..]}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawPartition", into = "RawPartition")]
pub struct EdgePartition {
    d: usize,
    n: usize,
    colors: Vec<u8>,
}

#[derive(Serialize, Deserialize)]
struct RawPartition {
    d: usize,
    n: usize,
    colors: Vec<u8>,
}

impl TryFrom<RawPartition> for EdgePartition {
    type Error = Error;

    fn try_from(raw: RawPartition) -> Result<Self> {
        EdgePartition::new(raw.d, raw.n, raw.colors)
    }
}

impl From<EdgePartition> for RawPartition {
    fn from(p: EdgePartition) -> Self {
        RawPartition {
            d: p.d,
            n: p.n,
            colors: p.colors,
        }
    }
}

impl EdgePartition {
    pub fn new(d: usize, n: usize, colors: Vec<u8>) -> Result<Self> {
        if d == 0 || d > u8::MAX as usize {
            return Err(Error::input(format!("color count d = {d} out of range")));
        }
        if colors.len() != edge_count(n) {
            return Err(Error::input(format!(
                "K_{n} has {} edges but {} colors were given",
                edge_count(n),
                colors.len()
            )));
        }
        if let Some(c) = colors.iter().find(|&&c| c as usize >= d) {
            return Err(Error::input(format!("color {c} out of range for d = {d}")));
        }
        if code_capacity(d, n).is_none() {
            return Err(Error::input(format!(
                "d = {d}, n = {n}: canonical code does not fit in 128 bits"
            )));
        }
        Ok(EdgePartition { d, n, colors })
    }

    /// Builds a partition from explicit 1-based edge lists, one list per class.
    /// Every edge of `K_n` must appear in exactly one list.
    pub fn from_classes(n: usize, classes: &[&[(usize, usize)]]) -> Result<Self> {
        let d = classes.len();
        let mut colors = vec![u8::MAX; edge_count(n)];
        for (c, class) in classes.iter().enumerate() {
            for &(a, b) in class.iter() {
                let e = Edge::new(a, b)?;
                let idx = edge_index(e.i, e.j, n)?;
                if colors[idx] != u8::MAX {
                    return Err(Error::input(format!("edge {e} listed twice")));
                }
                colors[idx] = c as u8;
            }
        }
        if let Some(idx) = colors.iter().position(|&c| c == u8::MAX) {
            return Err(Error::input(format!(
                "edge {} is in no class",
                edge_at(idx, n)?
            )));
        }
        EdgePartition::new(d, n, colors)
    }

    pub(crate) fn from_parts_unchecked(d: usize, n: usize, colors: Vec<u8>) -> Self {
        debug_assert_eq!(colors.len(), edge_count(n));
        EdgePartition { d, n, colors }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn colors(&self) -> &[u8] {
        &self.colors
    }

    pub fn into_colors(self) -> Vec<u8> {
        self.colors
    }

    pub fn color(&self, e: Edge) -> u8 {
        self.colors[edge_index_unchecked(e.i, e.j, self.n)]
    }

    /// Edges of the class with 0-based color `c`.
    pub fn class_edges(&self, c: u8) -> Vec<Edge> {
        edges(self.n)
            .into_iter()
            .zip(&self.colors)
            .filter(|(_, &col)| col == c)
            .map(|(e, _)| e)
            .collect()
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.d];
        for &c in &self.colors {
            sizes[c as usize] += 1;
        }
        sizes
    }

    pub fn is_homogeneous(&self) -> bool {
        is_homogeneous(&self.colors, self.d)
    }

    pub fn is_cycle_free(&self) -> bool {
        is_cycle_free(&self.colors, self.d, self.n)
    }

    /// Base-`d` integer whose digits are the colors, edge 0 most significant.
    pub fn canonical_code(&self) -> u128 {
        canonical_code(&self.colors, self.d)
    }
}

impl fmt::Display for EdgePartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for c in 0..self.d as u8 {
            if c > 0 {
                write!(f, ", ")?;
            }
            write!(f, "Γ{}={{", c + 1)?;
            for (k, e) in self.class_edges(c).iter().enumerate() {
                if k > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{e}")?;
            }
            write!(f, "}}")?;
        }
        write!(f, ")")
    }
}

/// `d^(n(n-1)/2)`, the number of `d`-colorings of `K_n`, if it fits.
pub fn code_capacity(d: usize, n: usize) -> Option<u128> {
    (d as u128).checked_pow(edge_count(n) as u32)
}

pub(crate) fn canonical_code(colors: &[u8], d: usize) -> u128 {
    let d = d as u128;
    colors.iter().fold(0u128, |acc, &c| acc * d + c as u128)
}

pub(crate) fn is_homogeneous(colors: &[u8], d: usize) -> bool {
    let mut sizes = [0usize; 256];
    for &c in colors {
        sizes[c as usize] += 1;
    }
    sizes[..d].iter().all(|&s| s == sizes[0])
}

/// One union-find over `d` disjoint copies of the vertex set; an edge whose
/// endpoints are already joined in its color's copy witnesses a cycle.
pub(crate) fn is_cycle_free(colors: &[u8], d: usize, n: usize) -> bool {
    let mut ds = DisjointSet::new(d * n);
    let mut idx = 0;
    for i in 0..n {
        for j in i + 1..n {
            let base = colors[idx] as usize * n;
            if !ds.union(base + i, base + j) {
                return false;
            }
            idx += 1;
        }
    }
    true
}

/// The six trees on six vertices, plus everything else.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum TreeShape {
    I6,
    Y6,
    E6,
    H6,
    C6,
    S6,
    NotTree,
}

impl fmt::Display for TreeShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            TreeShape::I6 => "I6",
            TreeShape::Y6 => "Y6",
            TreeShape::E6 => "E6",
            TreeShape::H6 => "H6",
            TreeShape::C6 => "C6",
            TreeShape::S6 => "S6",
            TreeShape::NotTree => "NotTree",
        };
        f.write_str(s)
    }
}

/// Classifies a 5-edge graph on vertices `1..=6` by its degree sequence.
/// The two shapes with degrees `(3,2,2,1,1,1)` are told apart by how many
/// leaves hang off the branch vertex: two for `Y6`, one for `E6`.
pub fn classify_tree(edges: &[Edge]) -> Result<TreeShape> {
    if edges.len() != 5 {
        return Err(Error::input(format!(
            "tree classification needs 5 edges, got {}",
            edges.len()
        )));
    }
    if let Some(e) = edges.iter().find(|e| e.i == 0 || e.j > 6 || e.i >= e.j) {
        return Err(Error::input(format!("edge {e} is not an edge of K_6")));
    }
    let mut ds = DisjointSet::new(6);
    for e in edges {
        if !ds.union(e.i - 1, e.j - 1) {
            return Ok(TreeShape::NotTree);
        }
    }
    let mut degree = [0usize; 6];
    for e in edges {
        degree[e.i - 1] += 1;
        degree[e.j - 1] += 1;
    }
    let mut sorted = degree;
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    let shape = match sorted {
        [2, 2, 2, 2, 1, 1] => TreeShape::I6,
        [5, 1, 1, 1, 1, 1] => TreeShape::S6,
        [4, 2, 1, 1, 1, 1] => TreeShape::C6,
        [3, 3, 1, 1, 1, 1] => TreeShape::H6,
        [3, 2, 2, 1, 1, 1] => {
            let branch = degree.iter().position(|&k| k == 3).unwrap() + 1;
            let leaves = edges
                .iter()
                .filter_map(|e| match (e.i == branch, e.j == branch) {
                    (true, _) => Some(e.j),
                    (_, true) => Some(e.i),
                    _ => None,
                })
                .filter(|&v| degree[v - 1] == 1)
                .count();
            if leaves == 2 {
                TreeShape::Y6
            } else {
                TreeShape::E6
            }
        }
        _ => TreeShape::NotTree,
    };
    Ok(shape)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(i: usize, j: usize) -> Edge {
        Edge::new(i, j).unwrap()
    }

    #[test]
    fn edge_index_examples() {
        assert_eq!(edge_index(1, 2, 6).unwrap(), 0);
        assert_eq!(edge_index(1, 6, 6).unwrap(), 4);
        assert_eq!(edge_index(5, 6, 6).unwrap(), 14);
        assert!(edge_index(2, 2, 6).is_err());
        assert!(edge_index(3, 2, 6).is_err());
        assert!(edge_index(0, 2, 6).is_err());
        assert!(edge_index(5, 7, 6).is_err());
    }

    #[test]
    fn edge_index_round_trips() {
        for n in 2..=16 {
            for (k, edge) in edges(n).into_iter().enumerate() {
                assert_eq!(edge_index(edge.i, edge.j, n).unwrap(), k);
                assert_eq!(edge_at(k, n).unwrap(), edge);
            }
        }
    }

    #[test]
    fn face_normalizes() {
        let f = Face::new(3, 1, 2).unwrap();
        assert_eq!((f.x, f.y, f.z), (1, 2, 3));
        assert_eq!(f.edge_indices(4), [0, 1, 3]);
        assert!(Face::new(1, 1, 2).is_err());
        assert_eq!(faces(6).len(), 20);
    }

    fn fig1() -> EdgePartition {
        EdgePartition::from_classes(4, &[&[(1, 2), (1, 4), (2, 3)], &[(1, 3), (2, 4), (3, 4)]])
            .unwrap()
    }

    #[test]
    fn figure_partitions() {
        let p = fig1();
        assert!(p.is_homogeneous());
        assert!(p.is_cycle_free());

        let fig2 =
            EdgePartition::from_classes(4, &[&[(1, 2), (1, 3), (1, 4)], &[(2, 3), (2, 4), (3, 4)]])
                .unwrap();
        assert!(fig2.is_homogeneous());
        assert!(!fig2.is_cycle_free());

        let fig3 =
            EdgePartition::from_classes(4, &[&[(1, 2), (1, 3)], &[(2, 3), (1, 4), (2, 4), (3, 4)]])
                .unwrap();
        assert!(!fig3.is_homogeneous());
        assert!(!fig3.is_cycle_free());
    }

    #[test]
    fn monochrome_and_empty_classes() {
        let mono = EdgePartition::new(3, 6, vec![0; 15]).unwrap();
        assert!(!mono.is_homogeneous());
        assert!(!mono.is_cycle_free());
        // classes 1 and 2 are empty, hence acyclic; only class 0 matters
        let single = EdgePartition::new(3, 2, vec![0]).unwrap();
        assert!(single.is_cycle_free());
    }

    #[test]
    fn canonical_code_examples() {
        assert_eq!(
            EdgePartition::new(2, 4, vec![0; 6])
                .unwrap()
                .canonical_code(),
            0
        );
        assert_eq!(
            EdgePartition::new(2, 4, vec![1, 0, 0, 0, 0, 0])
                .unwrap()
                .canonical_code(),
            32
        );
        assert_eq!(fig1().canonical_code(), 0b010011);
    }

    #[test]
    fn rejects_malformed_partitions() {
        assert!(EdgePartition::new(2, 4, vec![0; 5]).is_err());
        assert!(EdgePartition::new(2, 4, vec![2; 6]).is_err());
        assert!(EdgePartition::new(0, 1, vec![]).is_err());
        assert!(EdgePartition::from_classes(4, &[&[(1, 2)], &[(1, 2)]]).is_err());
        assert!(EdgePartition::from_classes(3, &[&[(1, 2)], &[(1, 3)]]).is_err());
    }

    #[test]
    fn partition_json_shape() {
        let json = serde_json::to_string(&fig1()).unwrap();
        assert_eq!(json, r#"{"d":2,"n":4,"colors":[0,1,0,0,1,1]}"#);
        let back: EdgePartition = serde_json::from_str(&json).unwrap();
        assert_eq!(back, fig1());
        assert!(serde_json::from_str::<EdgePartition>(r#"{"d":2,"n":4,"colors":[0,1]}"#).is_err());
    }

    #[test]
    fn display_is_one_based() {
        assert_eq!(fig1().to_string(), "(Γ1={12,14,23}, Γ2={13,24,34})");
    }

    #[test]
    fn classify_examples() {
        let path = [e(1, 2), e(2, 3), e(3, 4), e(4, 5), e(5, 6)];
        assert_eq!(classify_tree(&path).unwrap(), TreeShape::I6);
        let fig13 = [e(6, 4), e(4, 1), e(1, 3), e(1, 2), e(2, 5)];
        assert_eq!(classify_tree(&fig13).unwrap(), TreeShape::E6);
        let star = [e(1, 2), e(1, 3), e(1, 4), e(1, 5), e(1, 6)];
        assert_eq!(classify_tree(&star).unwrap(), TreeShape::S6);
        let y = [e(1, 2), e(2, 3), e(3, 4), e(4, 5), e(4, 6)];
        assert_eq!(classify_tree(&y).unwrap(), TreeShape::Y6);
        let h = [e(1, 2), e(1, 3), e(1, 4), e(2, 5), e(2, 6)];
        assert_eq!(classify_tree(&h).unwrap(), TreeShape::H6);
        let c = [e(1, 2), e(2, 3), e(3, 4), e(3, 5), e(3, 6)];
        assert_eq!(classify_tree(&c).unwrap(), TreeShape::C6);
        let cyc = [e(1, 2), e(2, 3), e(1, 3), e(4, 5), e(5, 6)];
        assert_eq!(classify_tree(&cyc).unwrap(), TreeShape::NotTree);
        assert!(classify_tree(&path[..4]).is_err());
    }
}
