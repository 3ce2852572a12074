//! The nineteen orbit representatives of homogeneous cycle-free 3-partitions
//! of `K_6`, with their stated orbit sizes, stabilizers and tree shapes, and
//! the checks that tie them to the computed orbit table and signature.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{act, shapes, stabilizer, OrbitTable, PermPair};
use crate::algebra::build_e;
use crate::enumeration::PartitionSet;
use crate::error::{Error, Result};
use crate::flips::{Sign, SignatureTable};
use crate::model::{EdgePartition, TreeShape};

const APPENDIX_JSON: &str = include_str!("../../data/appendix.json");

#[derive(Deserialize)]
struct RawAppendix {
    d: usize,
    representatives: Vec<RawRepresentative>,
}

#[derive(Deserialize)]
struct RawRepresentative {
    name: String,
    classes: Vec<Vec<(usize, usize)>>,
    shapes: Vec<TreeShape>,
    orbit_size: usize,
    stabilizer: Vec<RawPair>,
}

#[derive(Deserialize)]
struct RawPair {
    sigma: String,
    tau: String,
}

#[derive(Clone, Debug)]
pub struct AppendixRepresentative {
    pub name: String,
    pub partition: EdgePartition,
    pub shapes: Vec<TreeShape>,
    pub orbit_size: usize,
    /// Stabilizer elements as listed alongside the figure.
    pub stabilizer: Vec<PermPair>,
}

#[derive(Clone, Debug)]
pub struct AppendixData {
    pub d: usize,
    pub representatives: Vec<AppendixRepresentative>,
}

impl AppendixData {
    /// The checked-in table `data/appendix.json`.
    pub fn load() -> Result<Self> {
        Self::from_json(APPENDIX_JSON)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawAppendix = serde_json::from_str(text)?;
        let n = 2 * raw.d;
        let representatives = raw
            .representatives
            .into_iter()
            .map(|r| {
                let classes: Vec<&[(usize, usize)]> = r.classes.iter().map(Vec::as_slice).collect();
                let partition = EdgePartition::from_classes(n, &classes)?;
                let stabilizer = r
                    .stabilizer
                    .iter()
                    .map(|p| PermPair::parse(&p.sigma, &p.tau, raw.d))
                    .collect::<Result<_>>()?;
                Ok(AppendixRepresentative {
                    name: r.name,
                    partition,
                    shapes: r.shapes,
                    orbit_size: r.orbit_size,
                    stabilizer,
                })
            })
            .collect::<Result<_>>()?;
        Ok(AppendixData {
            d: raw.d,
            representatives,
        })
    }

    /// Every representative anchored at `+1`.
    pub fn anchors(&self) -> Vec<(EdgePartition, Sign)> {
        self.representatives
            .iter()
            .map(|r| (r.partition.clone(), Sign::Plus))
            .collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AppendixEntry {
    pub name: String,
    pub homogeneous_cycle_free: bool,
    /// 1-based orbit id in the computed table.
    pub orbit_id: usize,
    pub orbit_size: usize,
    pub expected_orbit_size: usize,
    pub stabilizer_order: usize,
    pub expected_stabilizer_order: usize,
    /// Brute-force stabilizer of the representative equals the listed one.
    pub stabilizer_matches: bool,
    pub shapes: Vec<TreeShape>,
    pub expected_shapes: Vec<TreeShape>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AppendixReport {
    pub entries: Vec<AppendixEntry>,
    pub orbit_count: usize,
    pub distinct_orbits_hit: usize,
    pub mismatches: Vec<String>,
}

impl AppendixReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Locates each representative in the computed orbit table and compares
/// orbit size, stabilizer and shapes with the stated values.
pub fn match_appendix(
    table: &OrbitTable,
    set: &PartitionSet,
    data: &AppendixData,
) -> Result<AppendixReport> {
    if table.d != data.d || set.d() != data.d {
        return Err(Error::input(format!(
            "appendix data is for d = {}, orbit table for d = {}",
            data.d, table.d
        )));
    }
    let mut entries = Vec::new();
    let mut mismatches = Vec::new();
    let mut hit = vec![false; table.orbits.len()];
    for rep in &data.representatives {
        let p = &rep.partition;
        let ok_member = p.is_homogeneous() && p.is_cycle_free();
        if !ok_member {
            mismatches.push(format!("{} is not homogeneous and cycle-free", rep.name));
            continue;
        }
        let orbit = table.orbit_index(set, p)?;
        let computed = &table.orbits[orbit];
        if std::mem::replace(&mut hit[orbit], true) {
            mismatches.push(format!("{} lands in an orbit already hit", rep.name));
        }

        let mut stab = stabilizer(p);
        stab.sort();
        let mut listed = rep.stabilizer.clone();
        listed.sort();
        let expected_stab = (super::group_order(data.d) as usize) / rep.orbit_size;
        let got_shapes = shapes(p).unwrap_or_default();

        let entry = AppendixEntry {
            name: rep.name.clone(),
            homogeneous_cycle_free: ok_member,
            orbit_id: orbit + 1,
            orbit_size: computed.size,
            expected_orbit_size: rep.orbit_size,
            stabilizer_order: computed.stabilizer.len(),
            expected_stabilizer_order: expected_stab,
            stabilizer_matches: stab == listed,
            shapes: got_shapes.clone(),
            expected_shapes: rep.shapes.clone(),
        };
        if entry.orbit_size != entry.expected_orbit_size {
            mismatches.push(format!(
                "{}: orbit size {} (expected {})",
                rep.name, entry.orbit_size, entry.expected_orbit_size
            ));
        }
        if entry.stabilizer_order != expected_stab || listed.len() != expected_stab {
            mismatches.push(format!(
                "{}: stabilizer order {} computed, {} listed, {} expected",
                rep.name,
                entry.stabilizer_order,
                listed.len(),
                expected_stab
            ));
        }
        if !entry.stabilizer_matches {
            mismatches.push(format!(
                "{}: listed stabilizer differs from computed",
                rep.name
            ));
        }
        if got_shapes != rep.shapes {
            mismatches.push(format!(
                "{}: shapes {:?} (expected {:?})",
                rep.name, got_shapes, rep.shapes
            ));
        }
        entries.push(entry);
    }
    let distinct = hit.iter().filter(|&&h| h).count();
    if distinct != table.orbits.len() {
        mismatches.push(format!(
            "{} representatives hit {} of {} orbits",
            data.representatives.len(),
            distinct,
            table.orbits.len()
        ));
    }
    Ok(AppendixReport {
        entries,
        orbit_count: table.orbits.len(),
        distinct_orbits_hit: distinct,
        mismatches,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct EpsilonViolation {
    pub representative: String,
    pub group_element: String,
    pub expected: Sign,
    pub found: Sign,
}

#[derive(Clone, Debug, Serialize)]
pub struct EpsilonReport {
    pub checked: usize,
    pub violations: Vec<EpsilonViolation>,
}

impl EpsilonReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Samples `(σ, τ, i)` and checks `ε((σ, τ) * P_i) = sign(τ)`.
pub fn epsilon_formula_check(
    sig: &SignatureTable,
    data: &AppendixData,
    samples: usize,
    seed: u64,
) -> Result<EpsilonReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let reps = &data.representatives;
    let draws: Vec<(usize, PermPair)> = (0..samples)
        .map(|_| {
            (
                rng.gen_range(0..reps.len()),
                PermPair::random(data.d, &mut rng),
            )
        })
        .collect();
    let mut violations = Vec::new();
    for (i, g) in &draws {
        let expected = g.tau.sign();
        check_one(
            sig,
            &reps[*i].name,
            &reps[*i].partition,
            g,
            expected,
            &mut violations,
        )?;
    }
    Ok(EpsilonReport {
        checked: draws.len(),
        violations,
    })
}

/// For `d = 2` the group acts transitively; checks
/// `ε((σ, τ) * E_2) = sign(σ) · sign(τ)` over the whole group.
pub fn epsilon_formula_check_d2(sig: &SignatureTable) -> Result<EpsilonReport> {
    let p0 = build_e(2);
    let mut violations = Vec::new();
    let group = PermPair::all(2);
    for g in &group {
        let expected = g.sigma.sign() * g.tau.sign();
        check_one(sig, "P0", &p0, g, expected, &mut violations)?;
    }
    Ok(EpsilonReport {
        checked: group.len(),
        violations,
    })
}

fn check_one(
    sig: &SignatureTable,
    name: &str,
    p: &EdgePartition,
    g: &PermPair,
    expected: Sign,
    violations: &mut Vec<EpsilonViolation>,
) -> Result<()> {
    let found = sig.signature(&act(g, p)?)?;
    if found != expected {
        violations.push(EpsilonViolation {
            representative: name.to_string(),
            group_element: g.to_string(),
            expected,
            found,
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn data_file_parses() {
        let data = AppendixData::load().unwrap();
        assert_eq!(data.d, 3);
        assert_eq!(data.representatives.len(), 19);
        let sizes: Vec<usize> = data.representatives.iter().map(|r| r.orbit_size).collect();
        assert_eq!(
            sizes,
            [
                4320, 720, 720, 4320, 4320, 4320, 4320, 4320, 4320, 2160, 4320, 1440, 4320, 4320,
                4320, 4320, 4320, 4320, 720
            ]
        );
        assert_eq!(sizes.iter().sum::<usize>(), 66240);
        for r in &data.representatives {
            assert!(r.partition.is_homogeneous(), "{}", r.name);
            assert!(r.partition.is_cycle_free(), "{}", r.name);
            assert_eq!(r.stabilizer.len() * r.orbit_size, 4320, "{}", r.name);
        }
    }

    #[test]
    fn listed_stabilizers_fix_their_representative() {
        let data = AppendixData::load().unwrap();
        for r in &data.representatives {
            for g in &r.stabilizer {
                assert_eq!(
                    act(g, &r.partition).unwrap(),
                    r.partition,
                    "{} {}",
                    r.name,
                    g
                );
            }
        }
    }

    #[test]
    fn stated_shapes() {
        let data = AppendixData::load().unwrap();
        for r in &data.representatives {
            assert_eq!(shapes(&r.partition).unwrap(), r.shapes, "{}", r.name);
        }
        assert_eq!(
            data.representatives[18].shapes,
            vec![TreeShape::H6, TreeShape::H6, TreeShape::H6]
        );
    }
}
