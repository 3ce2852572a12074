use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{check_modulus, linalg, Fp};
use crate::error::{Error, Result};
use crate::flips::SignatureTable;
use crate::model::{edge_count, faces, EdgePartition, Face};

/// Largest dense sign table the sweep will allocate (entries, one byte each).
const MAX_TABLE: usize = 1 << 26;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RelationMode {
    Full,
    Sample { count: u64, seed: u64 },
}

/// The symmetrized face relation: the colors `multiset` placed on `face` in
/// every distinct order, all other edges colored by `context`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationInstance {
    pub face: Face,
    /// Sorted, 0-based colors.
    pub multiset: [u8; 3],
    /// Colors of the non-face edges in lex edge order.
    pub context: Vec<u8>,
}

impl RelationInstance {
    /// Distinct orderings of the multiset: 1, 3 or 6 of them.
    pub fn arrangements(&self) -> Vec<[u8; 3]> {
        arrangements(self.multiset)
    }

    /// Full coloring with `arrangement` on the face edges `(x,y), (x,z), (y,z)`.
    pub fn coloring(&self, n: usize, arrangement: [u8; 3]) -> Vec<u8> {
        let face_edges = self.face.edge_indices(n);
        let mut out = Vec::with_capacity(self.context.len() + 3);
        let mut ctx = self.context.iter();
        for k in 0..edge_count(n) {
            match face_edges.iter().position(|&f| f == k) {
                Some(slot) => out.push(arrangement[slot]),
                None => out.push(*ctx.next().expect("context covers the other edges")),
            }
        }
        out
    }

    /// The generators whose sum is this relation.
    pub fn expand(&self, d: usize, n: usize) -> Vec<EdgePartition> {
        self.arrangements()
            .into_iter()
            .map(|a| EdgePartition::new(d, n, self.coloring(n, a)).expect("colors below d"))
            .collect()
    }
}

fn arrangements(m: [u8; 3]) -> Vec<[u8; 3]> {
    let mut out = Vec::with_capacity(6);
    for p in [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ] {
        let a = [m[p[0]], m[p[1]], m[p[2]]];
        if !out.contains(&a) {
            out.push(a);
        }
    }
    out
}

fn multisets(d: usize) -> Vec<[u8; 3]> {
    let d = d as u8;
    let mut out = Vec::new();
    for a in 0..d {
        for b in a..d {
            for c in b..d {
                out.push([a, b, c]);
            }
        }
    }
    out
}

/// Number of instances in a full sweep: faces × multisets × contexts.
pub fn relation_count(d: usize) -> u128 {
    let n = 2 * d;
    let f = faces(n).len() as u128;
    let m = multisets(d).len() as u128;
    f * m * (d as u128).pow(edge_count(n).saturating_sub(3) as u32)
}

fn check_d(d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::input(
            "face relations need d >= 2 (K_{2d} must contain a triangle)",
        ));
    }
    Ok(())
}

/// All instances (face-major, then multiset, then context in lex order), or
/// a seeded uniform sample.
pub fn relation_instances(
    d: usize,
    mode: RelationMode,
) -> Result<Box<dyn Iterator<Item = RelationInstance>>> {
    check_d(d)?;
    let n = 2 * d;
    let fs = faces(n);
    let ms = multisets(d);
    let ctx_len = edge_count(n) - 3;
    match mode {
        RelationMode::Full => {
            let total = relation_count(d);
            let per_face = total / fs.len() as u128;
            let ctx_count = per_face / ms.len() as u128;
            Ok(Box::new((0..total).map(move |idx| {
                let face = fs[(idx / per_face) as usize];
                let multiset = ms[((idx % per_face) / ctx_count) as usize];
                let mut c = idx % ctx_count;
                let mut context = vec![0u8; ctx_len];
                for slot in context.iter_mut().rev() {
                    *slot = (c % d as u128) as u8;
                    c /= d as u128;
                }
                RelationInstance {
                    face,
                    multiset,
                    context,
                }
            })))
        }
        RelationMode::Sample { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            Ok(Box::new((0..count).map(move |_| {
                let face = fs[rng.gen_range(0..fs.len())];
                let multiset = ms[rng.gen_range(0..ms.len())];
                let context = (0..ctx_len).map(|_| rng.gen_range(0..d as u8)).collect();
                RelationInstance {
                    face,
                    multiset,
                    context,
                }
            })))
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RelationWitness {
    pub face: String,
    /// 1-based colors.
    pub multiset: Vec<usize>,
    pub context: Vec<u8>,
    pub sum: i64,
}

#[derive(Clone, Debug, Serialize)]
pub struct RelationReport {
    pub d: usize,
    pub mode: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub instances: u64,
    pub generator_terms: u64,
    /// Instances with at least one term in the partition set.
    pub supported_instances: u64,
    pub violations: u64,
    pub first_violation: Option<RelationWitness>,
}

impl RelationReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

/// Sign of every coloring indexed by its base-`d` code; zero off the set.
fn sign_table(sig: &SignatureTable) -> Result<Vec<i8>> {
    let set = sig.set();
    let size = (set.d() as u128).pow(set.edge_count() as u32);
    if size > MAX_TABLE as u128 {
        return Err(Error::Infeasible {
            d: set.d(),
            reason: format!("relation sweep needs a sign table of {size} entries"),
        });
    }
    let mut table = vec![0i8; size as usize];
    for k in 0..set.len() {
        table[set.code(k) as usize] = sig.sign_at(k).value() as i8;
    }
    Ok(table)
}

#[derive(Default)]
struct Tally {
    instances: u64,
    terms: u64,
    supported: u64,
    violations: u64,
    first: Option<RelationWitness>,
}

impl Tally {
    fn record(
        &mut self,
        terms: usize,
        supported: bool,
        sum: i64,
        witness: impl FnOnce() -> RelationWitness,
    ) {
        self.instances += 1;
        self.terms += terms as u64;
        self.supported += u64::from(supported);
        if sum != 0 {
            self.violations += 1;
            if self.first.is_none() {
                self.first = Some(witness());
            }
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.instances += other.instances;
        self.terms += other.terms;
        self.supported += other.supported;
        self.violations += other.violations;
        self.first = self.first.or(other.first);
        self
    }
}

fn witness(face: Face, multiset: [u8; 3], context: Vec<u8>, sum: i64) -> RelationWitness {
    RelationWitness {
        face: face.to_string(),
        multiset: multiset.iter().map(|&c| c as usize + 1).collect(),
        context,
        sum,
    }
}

/// Checks that `ε` summed over every relation's expansion is zero.
pub fn verify_relations(sig: &SignatureTable, mode: RelationMode) -> Result<RelationReport> {
    let set = sig.set();
    let (d, n) = (set.d(), set.n());
    check_d(d)?;
    if n != 2 * d || !set.is_cycle_free_set() {
        return Err(Error::input(
            "verify_relations needs the cycle-free partition set of K_{2d}",
        ));
    }
    let table = sign_table(sig)?;
    let e = set.edge_count();
    let weights: Vec<usize> = (0..e).map(|k| d.pow((e - 1 - k) as u32)).collect();
    let ms = multisets(d);

    let tally = match mode {
        RelationMode::Full => {
            let fs = faces(n);
            let per_face: Vec<Tally> = fs
                .par_iter()
                .map(|&face| sweep_face(face, d, n, &weights, &ms, &table))
                .collect();
            per_face.into_iter().fold(Tally::default(), Tally::merge)
        }
        RelationMode::Sample { .. } => {
            let mut t = Tally::default();
            for inst in relation_instances(d, mode)? {
                let mut sum = 0i64;
                let mut supported = false;
                let arr = inst.arrangements();
                for &a in &arr {
                    let code: usize = inst
                        .coloring(n, a)
                        .iter()
                        .zip(&weights)
                        .map(|(&c, &w)| c as usize * w)
                        .sum();
                    let s = table[code];
                    supported |= s != 0;
                    sum += s as i64;
                }
                t.record(arr.len(), supported, sum, || {
                    witness(inst.face, inst.multiset, inst.context.clone(), sum)
                });
            }
            t
        }
    };

    let (mode_name, seed) = match mode {
        RelationMode::Full => ("full", None),
        RelationMode::Sample { seed, .. } => ("sample", Some(seed)),
    };
    Ok(RelationReport {
        d,
        mode: mode_name.to_string(),
        seed,
        instances: tally.instances,
        generator_terms: tally.terms,
        supported_instances: tally.supported,
        violations: tally.violations,
        first_violation: tally.first,
    })
}

/// Every context and multiset on one face, using offsets into the dense table.
fn sweep_face(
    face: Face,
    d: usize,
    n: usize,
    weights: &[usize],
    ms: &[[u8; 3]],
    table: &[i8],
) -> Tally {
    let fe = face.edge_indices(n);
    let others: Vec<usize> = (0..weights.len()).filter(|k| !fe.contains(k)).collect();

    // Context codes in lex order of the context digits.
    let mut bases = vec![0usize];
    for &k in &others {
        let mut next = Vec::with_capacity(bases.len() * d);
        for &b in &bases {
            for c in 0..d {
                next.push(b + c * weights[k]);
            }
        }
        bases = next;
    }
    let offsets: Vec<Vec<usize>> = ms
        .iter()
        .map(|&m| {
            arrangements(m)
                .iter()
                .map(|a| (0..3).map(|s| a[s] as usize * weights[fe[s]]).sum())
                .collect()
        })
        .collect();

    let mut t = Tally::default();
    for (ci, &base) in bases.iter().enumerate() {
        for (mi, offs) in offsets.iter().enumerate() {
            let mut sum = 0i64;
            let mut supported = false;
            for &o in offs {
                let s = table[base + o];
                supported |= s != 0;
                sum += s as i64;
            }
            t.record(offs.len(), supported, sum, || {
                let mut context = vec![0u8; others.len()];
                let mut c = ci;
                for slot in context.iter_mut().rev() {
                    *slot = (c % d) as u8;
                    c /= d;
                }
                witness(face, ms[mi], context, sum)
            });
        }
    }
    t
}

#[derive(Clone, Debug, Serialize)]
pub struct RankReport {
    pub p: u64,
    pub generators: usize,
    pub relations: usize,
    pub rank: usize,
    /// `generators - rank`: dimension of the quotient.
    pub dimension: usize,
}

/// Dimension of the `d = 2` quotient: the 64 basis tensors modulo the span
/// of all 128 relation vectors, by elimination over `GF(p)`.
pub fn rank_certify_d2(p: u64) -> Result<RankReport> {
    check_modulus(p)?;
    let (d, n) = (2usize, 4usize);
    let e = edge_count(n);
    let generators = d.pow(e as u32);
    let zero = Fp::new(0, p);
    let one = Fp::new(1, p);
    let rows: Vec<Vec<Fp>> = relation_instances(d, RelationMode::Full)?
        .map(|inst| {
            let mut row = vec![zero; generators];
            for a in inst.arrangements() {
                let code = inst
                    .coloring(n, a)
                    .iter()
                    .fold(0usize, |acc, &c| acc * d + c as usize);
                row[code] = row[code] + one;
            }
            row
        })
        .collect();
    let rank = linalg::rank(&rows);
    Ok(RankReport {
        p,
        generators,
        relations: rows.len(),
        rank,
        dimension: generators - rank,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        assert_eq!(relation_count(2), 128);
        assert_eq!(relation_count(3), 106_288_200);
        assert_eq!(
            relation_instances(2, RelationMode::Full).unwrap().count(),
            128
        );
        assert!(relation_instances(1, RelationMode::Full).is_err());
    }

    #[test]
    fn expansion_sizes() {
        assert_eq!(arrangements([0, 0, 0]).len(), 1);
        assert_eq!(arrangements([0, 0, 1]).len(), 3);
        assert_eq!(arrangements([0, 1, 2]).len(), 6);
        assert_eq!(multisets(3).len(), 10);
        assert_eq!(multisets(2).len(), 4);
    }

    #[test]
    fn coloring_places_face_and_context() {
        let inst = RelationInstance {
            face: Face::new(1, 2, 3).unwrap(),
            multiset: [0, 0, 1],
            context: vec![1, 0, 1],
        };
        // edges 12 13 14 23 24 34; face edges 12 13 23
        assert_eq!(inst.coloring(4, [0, 1, 0]), [0, 1, 1, 0, 0, 1]);
        let parts = inst.expand(2, 4);
        assert_eq!(parts.len(), 3);
    }

    #[test]
    fn full_order_is_face_major() {
        let all: Vec<_> = relation_instances(2, RelationMode::Full).unwrap().collect();
        assert_eq!(all[0].face, Face::new(1, 2, 3).unwrap());
        assert_eq!(all[0].context, [0, 0, 0]);
        assert_eq!(all[1].context, [0, 0, 1]);
        assert_eq!(all[8].multiset, [0, 0, 1]);
        assert_eq!(all[127].face, Face::new(2, 3, 4).unwrap());
    }

    #[test]
    fn sampling_is_seeded() {
        let a: Vec<_> = relation_instances(3, RelationMode::Sample { count: 20, seed: 9 })
            .unwrap()
            .collect();
        let b: Vec<_> = relation_instances(3, RelationMode::Sample { count: 20, seed: 9 })
            .unwrap()
            .collect();
        assert_eq!(a, b);
        assert!(a.iter().all(|i| i.context.len() == 12));
    }

    #[test]
    fn rank_guard() {
        assert!(rank_certify_d2(2).is_err());
        assert!(rank_certify_d2(3).is_err());
    }
}
