//! Face flips on homogeneous cycle-free partitions and the graph they span.
//!
//! For a partition `P` and a face `(x,y,z)` the flip is the unique other
//! homogeneous cycle-free partition that agrees with `P` off the face and
//! differs from it on at least two face edges. [`flip`] finds it by trying
//! every recoloring of the three face edges and insists on exactly one
//! survivor; anything else is reported as [`Error::LemmaViolation`].

use std::collections::VecDeque;
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::enumeration::PartitionSet;
use crate::error::{Error, Result};
use crate::model::{self, faces, EdgePartition, Face};

/// A value of the signature map.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+1")]
    Plus,
    #[serde(rename = "-1")]
    Minus,
}

impl Sign {
    pub fn from_parity(odd: bool) -> Self {
        if odd {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn is_plus(self) -> bool {
        self == Sign::Plus
    }
}

impl std::ops::Neg for Sign {
    type Output = Sign;

    fn neg(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl std::ops::Mul for Sign {
    type Output = Sign;

    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+1",
            Sign::Minus => "-1",
        })
    }
}

/// The flip of `p` across `face`.
pub fn flip(p: &EdgePartition, face: Face) -> Result<EdgePartition> {
    face.check_in(p.n())?;
    if !p.is_homogeneous() || !p.is_cycle_free() {
        return Err(Error::input(format!(
            "flips are defined on homogeneous cycle-free partitions; {p} is not one"
        )));
    }
    let mut out = p.colors().to_vec();
    match flip_colors(p.colors(), p.d(), p.n(), face.edge_indices(p.n()), &mut out) {
        1 => Ok(EdgePartition::from_parts_unchecked(p.d(), p.n(), out)),
        survivors => Err(Error::LemmaViolation {
            partition: p.clone(),
            face,
            survivors,
        }),
    }
}

/// Tries all `d^3 - 1` recolorings of the face and returns how many are
/// homogeneous, cycle-free and differ on at least two face edges. The first
/// survivor is left in `out`.
pub(crate) fn flip_colors(
    colors: &[u8],
    d: usize,
    n: usize,
    face: [usize; 3],
    out: &mut [u8],
) -> usize {
    let original = face.map(|k| colors[k]);
    let mut scratch = colors.to_vec();
    let mut survivors = 0;
    let d = d as u8;
    for a in 0..d {
        for b in 0..d {
            for c in 0..d {
                let cand = [a, b, c];
                let differing = cand.iter().zip(&original).filter(|(x, y)| x != y).count();
                if differing < 2 {
                    continue;
                }
                for (k, &col) in face.iter().zip(&cand) {
                    scratch[*k] = col;
                }
                if model::is_homogeneous(&scratch, d as usize)
                    && model::is_cycle_free(&scratch, d as usize, n)
                {
                    if survivors == 0 {
                        out.copy_from_slice(&scratch);
                    }
                    survivors += 1;
                }
            }
        }
    }
    survivors
}

/// Nodes are the members of a cycle-free [`PartitionSet`]; node `k` has one
/// neighbour per face of `K_{2d}`, stored as a node index.
#[derive(Clone, Debug)]
pub struct FlipGraph {
    set: Arc<PartitionSet>,
    faces: Vec<Face>,
    adjacency: Vec<u32>,
}

impl FlipGraph {
    /// Computes every flip of every node. Fails with the first
    /// [`Error::LemmaViolation`] encountered.
    pub fn build(set: Arc<PartitionSet>) -> Result<Self> {
        if !set.is_cycle_free_set() {
            return Err(Error::input(
                "the flip graph is built on the cycle-free partition set",
            ));
        }
        let (d, n) = (set.d(), set.n());
        let faces = faces(n);
        let face_edges: Vec<[usize; 3]> = faces.iter().map(|f| f.edge_indices(n)).collect();
        let rows: Vec<Vec<u32>> = (0..set.len())
            .into_par_iter()
            .map(|k| {
                let colors = set.colors(k);
                let mut out = colors.to_vec();
                face_edges
                    .iter()
                    .zip(&faces)
                    .map(|(fe, face)| {
                        let survivors = flip_colors(colors, d, n, *fe, &mut out);
                        if survivors != 1 {
                            return Err(Error::LemmaViolation {
                                partition: set.get(k),
                                face: *face,
                                survivors,
                            });
                        }
                        set.index_of_colors(&out).map(|j| j as u32).ok_or_else(|| {
                            Error::Certificate(format!(
                                "flip of node {k} across {face} left the partition set"
                            ))
                        })
                    })
                    .collect()
            })
            .collect::<Result<_>>()?;
        Ok(FlipGraph {
            set,
            faces,
            adjacency: rows.concat(),
        })
    }

    pub fn set(&self) -> &Arc<PartitionSet> {
        &self.set
    }

    pub fn node_count(&self) -> usize {
        self.set.len()
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn degree(&self) -> usize {
        self.faces.len()
    }

    /// Neighbours of `node`, in face order.
    pub fn neighbors(&self, node: usize) -> &[u32] {
        let f = self.faces.len();
        &self.adjacency[node * f..(node + 1) * f]
    }

    /// Undirected flip edges `(u, v, face)` with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, Face)> + '_ {
        (0..self.node_count()).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .zip(&self.faces)
                .filter(move |(&v, _)| u < v as usize)
                .map(move |(&v, &f)| (u, v as usize, f))
        })
    }

    /// Checks that every stored flip is an involution without fixed points.
    pub fn check_involution(&self) -> Result<()> {
        for u in 0..self.node_count() {
            for (fi, &v) in self.neighbors(u).iter().enumerate() {
                let v = v as usize;
                if v == u || self.neighbors(v)[fi] as usize != u {
                    return Err(Error::Certificate(format!(
                        "flip across {} is not a fixed-point-free involution at {}",
                        self.faces[fi],
                        self.set.get(u)
                    )));
                }
            }
        }
        Ok(())
    }

    /// BFS 2-coloring. Each component is signed by the anchor it contains, or
    /// `+1` on its minimal-code node when it contains none.
    pub fn check_bipartite(&self, anchors: &[(EdgePartition, Sign)]) -> Result<Bipartition> {
        let mut anchor_nodes = Vec::with_capacity(anchors.len());
        for (p, s) in anchors {
            let k = self.set.index_of(p)?.ok_or_else(|| {
                Error::input(format!(
                    "anchor {p} is not a homogeneous cycle-free partition"
                ))
            })?;
            anchor_nodes.push((k, *s));
        }
        match two_color(
            self.node_count(),
            |u| self.neighbors(u).iter().map(|&v| v as usize),
            &anchor_nodes,
        )? {
            Ok(signs) => Ok(Bipartition::Signature(SignatureTable {
                set: Arc::clone(&self.set),
                signs,
            })),
            Err(cycle) => Ok(Bipartition::OddCycle(OddCycleWitness {
                cycle: cycle.into_iter().map(|k| self.set.get(k)).collect(),
            })),
        }
    }

    /// Flip edges whose endpoints carry the same sign under `sig`.
    pub fn same_sign_edges(&self, sig: &SignatureTable) -> Vec<(usize, usize, Face)> {
        self.edges()
            .filter(|&(u, v, _)| sig.sign_at(u) == sig.sign_at(v))
            .collect()
    }

    pub fn check_connected(&self) -> Connectivity {
        let labels = components(self.node_count(), |u| {
            self.neighbors(u).iter().map(|&v| v as usize)
        });
        let count = labels.iter().map(|&c| c as usize + 1).max().unwrap_or(0);
        let mut reps: Vec<Option<usize>> = vec![None; count];
        for (k, &c) in labels.iter().enumerate() {
            reps[c as usize].get_or_insert(k);
        }
        Connectivity {
            component_of: labels,
            representatives: reps.into_iter().map(|r| self.set.get(r.unwrap())).collect(),
        }
    }
}

#[derive(Clone, Debug)]
pub enum Bipartition {
    Signature(SignatureTable),
    OddCycle(OddCycleWitness),
}

impl Bipartition {
    pub fn signature(self) -> Result<SignatureTable> {
        match self {
            Bipartition::Signature(t) => Ok(t),
            Bipartition::OddCycle(w) => Err(Error::Certificate(format!(
                "flip graph is not bipartite; odd cycle of length {}",
                w.cycle.len()
            ))),
        }
    }
}

/// A closed walk of odd length: consecutive entries, and the last and first,
/// are adjacent.
#[derive(Clone, Debug)]
pub struct OddCycleWitness {
    pub cycle: Vec<EdgePartition>,
}

#[derive(Clone, Debug)]
pub struct Connectivity {
    /// Component id of each node; ids are numbered by first (minimal-code) node.
    pub component_of: Vec<u32>,
    /// Minimal-code node of each component.
    pub representatives: Vec<EdgePartition>,
}

impl Connectivity {
    pub fn count(&self) -> usize {
        self.representatives.len()
    }
}

/// A total map from the partition set to `{+1, -1}`.
#[derive(Clone, Debug)]
pub struct SignatureTable {
    set: Arc<PartitionSet>,
    signs: Vec<Sign>,
}

impl SignatureTable {
    pub fn set(&self) -> &Arc<PartitionSet> {
        &self.set
    }

    pub fn signature(&self, p: &EdgePartition) -> Result<Sign> {
        let k = self
            .set
            .index_of(p)?
            .ok_or_else(|| Error::input(format!("{p} is not in the signature table")))?;
        Ok(self.signs[k])
    }

    pub fn sign_at(&self, k: usize) -> Sign {
        self.signs[k]
    }

    pub fn signs(&self) -> &[Sign] {
        &self.signs
    }

    /// Sizes of the `+1` and `-1` classes.
    pub fn class_sizes(&self) -> (usize, usize) {
        let plus = self.signs.iter().filter(|s| s.is_plus()).count();
        (plus, self.signs.len() - plus)
    }

    /// `Some(sign)` for members, `None` for anything outside the set.
    pub fn lookup_colors(&self, colors: &[u8]) -> Option<Sign> {
        self.set.index_of_colors(colors).map(|k| self.signs[k])
    }
}

/// Connected-component labels, numbered in order of each component's
/// smallest node.
pub fn components<I>(node_count: usize, neighbors: impl Fn(usize) -> I) -> Vec<u32>
where
    I: IntoIterator<Item = usize>,
{
    let mut label = vec![u32::MAX; node_count];
    let mut next = 0;
    let mut queue = VecDeque::new();
    for root in 0..node_count {
        if label[root] != u32::MAX {
            continue;
        }
        label[root] = next;
        queue.push_back(root);
        while let Some(u) = queue.pop_front() {
            for v in neighbors(u) {
                if label[v] == u32::MAX {
                    label[v] = next;
                    queue.push_back(v);
                }
            }
        }
        next += 1;
    }
    label
}

/// Signs every node so that each edge joins opposite signs.
///
/// The outer `Result` fails on inconsistent anchors; the inner one carries an
/// odd cycle (as a node list) when the graph is not bipartite.
pub fn two_color<I>(
    node_count: usize,
    neighbors: impl Fn(usize) -> I,
    anchors: &[(usize, Sign)],
) -> Result<std::result::Result<Vec<Sign>, Vec<usize>>>
where
    I: IntoIterator<Item = usize>,
{
    let labels = components(node_count, &neighbors);
    let count = labels.iter().map(|&c| c as usize + 1).max().unwrap_or(0);
    let mut roots: Vec<Option<(usize, Sign)>> = vec![None; count];
    for &(k, s) in anchors {
        if k >= node_count {
            return Err(Error::input(format!("anchor node {k} out of range")));
        }
        roots[labels[k] as usize].get_or_insert((k, s));
    }
    for (c, root) in roots.iter_mut().enumerate() {
        if root.is_none() {
            let first = labels.iter().position(|&l| l as usize == c).unwrap();
            *root = Some((first, Sign::Plus));
        }
    }

    let mut sign: Vec<Option<Sign>> = vec![None; node_count];
    let mut parent = vec![usize::MAX; node_count];
    let mut queue = VecDeque::new();
    for &(root, s) in roots.iter().flatten() {
        sign[root] = Some(s);
        queue.push_back(root);
        while let Some(u) = queue.pop_front() {
            let su = sign[u].unwrap();
            for v in neighbors(u) {
                match sign[v] {
                    None => {
                        sign[v] = Some(-su);
                        parent[v] = u;
                        queue.push_back(v);
                    }
                    Some(sv) if sv == su => return Ok(Err(odd_cycle(&parent, u, v))),
                    Some(_) => {}
                }
            }
        }
    }
    let signs: Vec<Sign> = sign.into_iter().map(Option::unwrap).collect();

    for &(k, s) in anchors {
        if signs[k] != s {
            let (root, root_sign) = roots[labels[k] as usize].unwrap();
            let path = tree_path(&parent, k);
            return Err(Error::Certificate(format!(
                "anchor conflict: node {root} is anchored at {root_sign} and node {k} at {s}, \
                 but they are joined by a flip path of length {} (witness path {:?})",
                path.len() - 1,
                path
            )));
        }
    }
    Ok(Ok(signs))
}

fn tree_path(parent: &[usize], mut node: usize) -> Vec<usize> {
    let mut path = vec![node];
    while parent[node] != usize::MAX {
        node = parent[node];
        path.push(node);
    }
    path
}

/// Closes the same-sign edge `(u, v)` with the BFS tree paths to their
/// lowest common ancestor.
fn odd_cycle(parent: &[usize], u: usize, v: usize) -> Vec<usize> {
    let pu = tree_path(parent, u);
    let pv = tree_path(parent, v);
    let mut i = pu.len();
    let mut j = pv.len();
    while i > 0 && j > 0 && pu[i - 1] == pv[j - 1] {
        i -= 1;
        j -= 1;
    }
    // pu[i] == pv[j] is the lowest common ancestor
    let mut cycle: Vec<usize> = pu[..=i].to_vec();
    cycle.extend(pv[..j].iter().rev());
    cycle
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumeration::enumerate;

    fn fig1() -> EdgePartition {
        EdgePartition::from_classes(4, &[&[(1, 2), (1, 4), (2, 3)], &[(1, 3), (2, 4), (3, 4)]])
            .unwrap()
    }

    /// Oracle for the d = 2 example, written independently of `flip_colors`:
    /// permute the three face colors in every way and keep the members of the
    /// enumerated set.
    #[test]
    fn flip_example_d2() {
        let p = fig1();
        let face = Face::new(1, 2, 3).unwrap();
        let set = enumerate(2, true).unwrap();
        let idx = face.edge_indices(4);
        let mut partners = Vec::new();
        for a in 0..2u8 {
            for b in 0..2u8 {
                for c in 0..2u8 {
                    let mut colors = p.colors().to_vec();
                    colors[idx[0]] = a;
                    colors[idx[1]] = b;
                    colors[idx[2]] = c;
                    let q = EdgePartition::new(2, 4, colors).unwrap();
                    if q != p && set.contains(&q).unwrap() {
                        partners.push(q);
                    }
                }
            }
        }
        let expected =
            EdgePartition::from_classes(4, &[&[(1, 3), (1, 4), (2, 3)], &[(1, 2), (2, 4), (3, 4)]])
                .unwrap();
        assert_eq!(partners, vec![expected.clone()]);
        assert_eq!(flip(&p, face).unwrap(), expected);
    }

    #[test]
    fn flip_rejects_bad_input() {
        let cyclic =
            EdgePartition::from_classes(4, &[&[(1, 2), (1, 3), (1, 4)], &[(2, 3), (2, 4), (3, 4)]])
                .unwrap();
        assert!(matches!(
            flip(&cyclic, Face::new(1, 2, 3).unwrap()),
            Err(Error::InvalidInput(_))
        ));
        assert!(flip(&fig1(), Face::new(1, 2, 5).unwrap()).is_err());
    }

    #[test]
    fn d2_graph() {
        let g = FlipGraph::build(Arc::new(enumerate(2, true).unwrap())).unwrap();
        assert_eq!(g.node_count(), 12);
        assert_eq!(g.degree(), 4);
        g.check_involution().unwrap();
        let t = g.check_bipartite(&[]).unwrap().signature().unwrap();
        assert_eq!(t.class_sizes(), (6, 6));
        assert_eq!(g.check_connected().count(), 1);
        for (u, v, _) in g.edges() {
            assert_eq!(t.sign_at(u), -t.sign_at(v));
        }
    }

    #[test]
    fn anchors_override_default() {
        let g = FlipGraph::build(Arc::new(enumerate(2, true).unwrap())).unwrap();
        let p = fig1();
        let plus = g
            .check_bipartite(&[(p.clone(), Sign::Plus)])
            .unwrap()
            .signature()
            .unwrap();
        let minus = g
            .check_bipartite(&[(p.clone(), Sign::Minus)])
            .unwrap()
            .signature()
            .unwrap();
        assert_eq!(plus.signature(&p).unwrap(), Sign::Plus);
        assert_eq!(minus.signature(&p).unwrap(), Sign::Minus);
        let q = flip(&p, Face::new(1, 2, 3).unwrap()).unwrap();
        let conflict = g.check_bipartite(&[(p, Sign::Plus), (q, Sign::Plus)]);
        assert!(matches!(conflict, Err(Error::Certificate(_))));
    }

    #[test]
    fn triangle_is_not_bipartite() {
        let adj = [vec![1, 2], vec![0, 2], vec![0, 1]];
        let res = two_color(3, |u| adj[u].clone(), &[]).unwrap();
        let cycle = res.unwrap_err();
        assert_eq!(cycle.len(), 3);
        for k in 0..cycle.len() {
            let (a, b) = (cycle[k], cycle[(k + 1) % cycle.len()]);
            assert!(adj[a].contains(&b));
        }
    }

    #[test]
    fn odd_cycle_witness_on_pentagon_with_tail() {
        // 0-1-2-3-4-0 plus 5 hanging off 2
        let adj = [
            vec![1, 4],
            vec![0, 2],
            vec![1, 3, 5],
            vec![2, 4],
            vec![3, 0],
            vec![2],
        ];
        let cycle = two_color(6, |u| adj[u].clone(), &[]).unwrap().unwrap_err();
        assert_eq!(cycle.len() % 2, 1);
        for k in 0..cycle.len() {
            let (a, b) = (cycle[k], cycle[(k + 1) % cycle.len()]);
            assert!(adj[a].contains(&b), "{cycle:?}");
        }
    }

    #[test]
    fn components_of_forest() {
        let adj = [vec![1], vec![0], vec![], vec![4], vec![3]];
        assert_eq!(components(5, |u| adj[u].clone()), vec![0, 0, 1, 2, 2]);
        let single: [Vec<usize>; 1] = [vec![]];
        assert_eq!(components(1, |u| single[u].clone()), vec![0]);
    }

    #[test]
    fn unknown_partition_has_no_signature() {
        let g = FlipGraph::build(Arc::new(enumerate(2, true).unwrap())).unwrap();
        let t = g.check_bipartite(&[]).unwrap().signature().unwrap();
        let cyclic = EdgePartition::new(2, 4, vec![0, 0, 0, 1, 1, 1]).unwrap();
        assert!(t.signature(&cyclic).is_err());
    }
}
