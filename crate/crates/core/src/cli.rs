//! The `lambda-s2` command line: one subcommand per operation, JSON
//! certificates on standard output.
//!
//! Exit codes: 0 when every check passes, 1 when a certificate fails, 2 on
//! bad input or usage.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use crate::algebra::{
    self, build_e, e_matrix_text, e_tensor, rank_certify_d2, rational, verify_relations, AnyTensor,
    Determinant, FieldScalar, RelationMode, VectorFile,
};
use crate::certificate::Certificate;
use crate::enumeration::{enumerate, enumerate_with, multinomial, EnumerateOptions, PartitionSet};
use crate::error::{Error, Result};
use crate::flips::{flip, Bipartition, FlipGraph, Sign, SignatureTable};
use crate::model::{EdgePartition, Face};
use crate::pipeline::standard_anchors;
use crate::symmetry::{
    epsilon_formula_check, epsilon_formula_check_d2, group_order, match_appendix, orbits,
    AppendixData,
};

const FLIP_LEMMA: &str = "flip lemma: every face admits exactly one partner partition";
const SIGNATURE_EXISTENCE: &str = "signature existence: flips join opposite signs";
const COUNTS: &str = "homogeneous and cycle-free partition counts";
const ORBIT_TABLE: &str = "orbit table of the nineteen representatives";
const EPSILON_FORMULA: &str = "signature formula on orbits";
const DET_NORMALIZATION: &str = "Det^{S²}(E_d) = 1";
const RELATION_VANISHING: &str = "Det^{S²} vanishes on the face relations";
const RANK_D2: &str = "dim Λ^{S²}_{V_2}(5) = 1";

#[derive(Parser, Debug)]
#[command(
    name = "lambda-s2",
    version,
    about = "Edge partitions of K_2d, face flips and Det^{S²}"
)]
struct Cli {
    /// Worker threads (defaults to available parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Add wall-clock time to certificates (output is then not reproducible).
    #[arg(long, global = true)]
    timings: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Homogeneous (optionally cycle-free) d-partitions of K_2d.
    Enumerate {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        cycle_free: bool,
        #[arg(long)]
        count_only: bool,
        /// Write partitions as JSON lines to this file.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Lift the d <= 3 feasibility guard.
        #[arg(long)]
        allow_large: bool,
    },
    /// Flip a partition across a face.
    Flip {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        partition: PathBuf,
        #[arg(long, num_args = 3, value_names = ["X", "Y", "Z"])]
        face: Vec<usize>,
    },
    /// Build the flip graph and certify bipartiteness and/or connectivity.
    FlipGraph {
        #[arg(long)]
        d: usize,
        #[arg(long, value_delimiter = ',', default_value = "bipartite,connected")]
        check: Vec<GraphCheck>,
        /// JSON list of {"partition": {...}, "sign": "+1" | "-1"}.
        #[arg(long)]
        anchors: Option<PathBuf>,
    },
    /// Orbits under S_2d x S_d, optionally as CSV.
    Orbits {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Match the nineteen d = 3 representatives and sample the signature formula.
    VerifyAppendix {
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long)]
        seed: u64,
    },
    /// Sign of one partition, or a check of the signature formula.
    Signature {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        partition: Option<PathBuf>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Evaluate Det^{S²} on a vector file.
    Det {
        #[arg(long)]
        input: PathBuf,
    },
    /// Sum the signature over every face relation.
    VerifyRelations {
        #[arg(long)]
        d: usize,
        /// Check this many seeded random instances instead of all of them.
        #[arg(long)]
        sample: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Dimension of the d = 2 quotient over GF(p).
    Rank {
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, default_value_t = algebra::DEFAULT_PRIME)]
        p: u64,
    },
    /// Print E_d as partition JSON and matrix text.
    Emat {
        #[arg(long)]
        d: usize,
        /// Also write E_d as a rational vector file.
        #[arg(long)]
        vectors: Option<PathBuf>,
    },
    /// Run every certificate for d in {2, 3}.
    CertifyAll {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        /// Sample the relation sweep instead of running it in full.
        #[arg(long)]
        relation_sample: Option<u64>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum GraphCheck {
    Bipartite,
    Connected,
}

#[derive(Deserialize)]
struct AnchorEntry {
    partition: EdgePartition,
    sign: Sign,
}

/// Runs the tool on `argv` (program name first), writing to `out`.
pub fn run_with<I, S>(argv: I, out: &mut (dyn Write + Send)) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            if code == 0 {
                let _ = write!(out, "{e}");
            } else {
                eprint!("{e}");
            }
            return code;
        }
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(t) = cli.threads {
        if t == 0 {
            eprintln!("error: --threads must be positive");
            return 2;
        }
        pool = pool.num_threads(t);
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let mut ctx = Ctx {
        out,
        timings: cli.timings,
        failed: false,
    };
    match pool.install(|| dispatch(cli.command, &mut ctx)) {
        Ok(()) if ctx.failed => 1,
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Runs the tool on the process arguments and standard output.
pub fn run<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let mut stdout = std::io::stdout();
    run_with(argv, &mut stdout)
}

struct Ctx<'a> {
    out: &'a mut (dyn Write + Send),
    timings: bool,
    failed: bool,
}

impl Ctx<'_> {
    fn line(&mut self, s: &str) -> Result<()> {
        writeln!(self.out, "{s}")?;
        Ok(())
    }

    fn emit(&mut self, mut cert: Certificate, started: Instant) -> Result<()> {
        if self.timings {
            cert.wall_time_s = Some(started.elapsed().as_secs_f64());
        }
        self.failed |= !cert.passed();
        self.line(&cert.to_json())
    }
}

fn dispatch(cmd: Command, ctx: &mut Ctx) -> Result<()> {
    let t0 = Instant::now();
    match cmd {
        Command::Enumerate {
            d,
            cycle_free,
            count_only,
            out,
            allow_large,
        } => {
            let set = enumerate_with(
                d,
                cycle_free,
                EnumerateOptions {
                    allow_large,
                    ..Default::default()
                },
            )?;
            if count_only {
                return ctx.line(&set.len().to_string());
            }
            match out {
                Some(path) => {
                    write_jsonl(&set, &mut BufWriter::new(File::create(&path)?))?;
                    let mut cert = Certificate::new("enumerate")
                        .param("d", d)
                        .param("cycle_free", cycle_free)
                        .param("out", path.display().to_string());
                    cert.number("count", set.len());
                    ctx.emit(cert, t0)
                }
                None => write_jsonl(&set, ctx.out),
            }
        }
        Command::Flip { d, partition, face } => {
            let p = read_partition(&partition, d)?;
            let face = Face::new(face[0], face[1], face[2])?;
            let q = flip(&p, face)?;
            ctx.line(&serde_json::to_string(&q)?)
        }
        Command::FlipGraph { d, check, anchors } => {
            let anchors = match anchors {
                Some(path) => read_anchors(&path, d)?,
                None => standard_anchors(d)?,
            };
            match flip_graph_or_witness(Arc::new(enumerate(d, true)?))? {
                Ok(graph) => {
                    let (cert, _) = flip_graph_certificate(&graph, &check, &anchors)?;
                    ctx.emit(cert, t0)
                }
                Err(cert) => ctx.emit(cert, t0),
            }
        }
        Command::Orbits { d, out } => {
            let set = enumerate(d, true)?;
            let table = orbits(&set)?;
            if let Some(path) = &out {
                table.write_csv(BufWriter::new(File::create(path)?))?;
            }
            let mut cert = Certificate::new("orbits").param("d", d);
            if let Some(path) = &out {
                cert = cert.param("out", path.display().to_string());
            }
            orbit_numbers(&mut cert, &table, &set);
            ctx.emit(cert, t0)
        }
        Command::VerifyAppendix { samples, seed } => {
            let graph = flip_graph_or_witness(Arc::new(enumerate(3, true)?))?;
            let graph = match graph {
                Ok(g) => g,
                Err(cert) => return ctx.emit(cert, t0),
            };
            let table = orbits(graph.set())?;
            let mut cert = Certificate::new("verify-appendix")
                .param("samples", samples)
                .param("seed", seed);
            appendix_numbers(&mut cert, &table, graph.set())?;
            let sig = graph.check_bipartite(&standard_anchors(3)?)?.signature()?;
            epsilon_numbers(&mut cert, &sig, samples, seed)?;
            ctx.emit(cert, t0)
        }
        Command::Signature {
            d,
            partition,
            samples,
            seed,
        } => {
            let sig = signature_table(d)?;
            if let Some(path) = partition {
                let p = read_partition(&path, d)?;
                let s = match sig.lookup_colors(p.colors()) {
                    Some(s) => s.to_string(),
                    None => "0".into(),
                };
                return ctx.line(&s);
            }
            let samples = samples.unwrap_or(10_000);
            let mut cert = Certificate::new("signature").param("d", d);
            if d == 3 {
                let seed =
                    seed.ok_or_else(|| Error::input("--seed is required for sampled checks"))?;
                cert = cert.param("samples", samples).param("seed", seed);
            }
            let (plus, minus) = sig.class_sizes();
            cert.number("plus", plus).number("minus", minus);
            epsilon_numbers(&mut cert, &sig, samples, seed.unwrap_or(0))?;
            ctx.emit(cert, t0)
        }
        Command::Det { input } => {
            let tensor = VectorFile::read(&input)?.into_tensor()?;
            let det = Determinant::new(&signature_table(tensor.d())?);
            let value = match tensor {
                AnyTensor::Rational(x) => FieldScalar::Rational(det.eval(&x)?),
                AnyTensor::Gf(x) => FieldScalar::Gf(det.eval(&x)?),
            };
            ctx.line(&value.to_string())
        }
        Command::VerifyRelations { d, sample, seed } => {
            let mode = relation_mode(sample, seed)?;
            let sig = signature_table(d)?;
            let cert = relation_certificate(&sig, mode)?;
            ctx.emit(cert, t0)
        }
        Command::Rank { d, p } => {
            if d != 2 {
                return Err(Error::input(
                    "rank certification is implemented for d = 2 only",
                ));
            }
            let cert = rank_certificate(p)?;
            ctx.emit(cert, t0)
        }
        Command::Emat { d, vectors } => {
            if !(1..=5).contains(&d) {
                return Err(Error::input("d must be between 1 and 5"));
            }
            let e = build_e(d);
            ctx.line(&serde_json::to_string(&e)?)?;
            write!(ctx.out, "{}", e_matrix_text(&e))?;
            if let Some(path) = vectors {
                let file = VectorFile::from_rational(&e_tensor(d, &rational(1, 1)));
                std::fs::write(&path, serde_json::to_string_pretty(&file)? + "\n")?;
            }
            Ok(())
        }
        Command::CertifyAll {
            d,
            seed,
            samples,
            relation_sample,
        } => certify_all(ctx, d, seed, samples, relation_sample),
    }
}

fn write_jsonl(set: &PartitionSet, out: &mut dyn Write) -> Result<()> {
    for p in set.iter() {
        serde_json::to_writer(&mut *out, &p)?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

fn read_partition(path: &Path, d: usize) -> Result<EdgePartition> {
    let p: EdgePartition = serde_json::from_str(&std::fs::read_to_string(path)?)?;
    if p.d() != d || p.n() != 2 * d {
        return Err(Error::input(format!(
            "partition in {} has (d, n) = ({}, {}), expected ({d}, {})",
            path.display(),
            p.d(),
            p.n(),
            2 * d
        )));
    }
    Ok(p)
}

fn read_anchors(path: &Path, d: usize) -> Result<Vec<(EdgePartition, Sign)>> {
    let entries: Vec<AnchorEntry> = serde_json::from_str(&std::fs::read_to_string(path)?)?;
    entries
        .into_iter()
        .map(|a| {
            if a.partition.d() != d {
                return Err(Error::input("anchor partition has the wrong d"));
            }
            Ok((a.partition, a.sign))
        })
        .collect()
}

fn relation_mode(sample: Option<u64>, seed: Option<u64>) -> Result<RelationMode> {
    match (sample, seed) {
        (None, _) => Ok(RelationMode::Full),
        (Some(count), Some(seed)) => Ok(RelationMode::Sample { count, seed }),
        (Some(_), None) => Err(Error::input("--sample needs --seed")),
    }
}

fn signature_table(d: usize) -> Result<SignatureTable> {
    crate::pipeline::signature(d)
}

/// The flip graph, or a failing certificate when a flip has no unique partner.
fn flip_graph_or_witness(
    set: Arc<PartitionSet>,
) -> Result<std::result::Result<FlipGraph, Certificate>> {
    let d = set.d();
    match FlipGraph::build(set) {
        Ok(g) => Ok(Ok(g)),
        Err(Error::LemmaViolation {
            partition,
            face,
            survivors,
        }) => {
            let mut cert = Certificate::new("flip-graph").param("d", d);
            cert.check(false, FLIP_LEMMA);
            cert.witness("partition", &partition)
                .witness("face", face.to_string())
                .witness("survivors", survivors);
            Ok(Err(cert))
        }
        Err(e) => Err(e),
    }
}

/// Certificate for the requested checks, and the signature when bipartite.
fn flip_graph_certificate(
    graph: &FlipGraph,
    checks: &[GraphCheck],
    anchors: &[(EdgePartition, Sign)],
) -> Result<(Certificate, Option<SignatureTable>)> {
    let d = graph.set().d();
    let mut checks: Vec<GraphCheck> = checks.to_vec();
    checks.sort_by_key(|c| *c as u8);
    checks.dedup();
    let names: Vec<&str> = checks
        .iter()
        .map(|c| match c {
            GraphCheck::Bipartite => "bipartite",
            GraphCheck::Connected => "connected",
        })
        .collect();
    let mut cert = Certificate::new("flip-graph")
        .param("d", d)
        .param("check", names)
        .param("anchors", anchors.len());
    cert.number("nodes", graph.node_count())
        .number("degree", graph.degree())
        .number("edges", graph.node_count() * graph.degree() / 2);
    cert.check(graph.check_involution().is_ok(), FLIP_LEMMA);

    let mut signature = None;
    if checks.contains(&GraphCheck::Bipartite) {
        match graph.check_bipartite(anchors)? {
            Bipartition::Signature(sig) => {
                let (plus, minus) = sig.class_sizes();
                let bad = graph.same_sign_edges(&sig);
                cert.number("bipartite", true)
                    .number("class_sizes", [plus, minus])
                    .number("same_sign_edges", bad.len());
                cert.check(bad.is_empty(), SIGNATURE_EXISTENCE);
                if let Some(&(u, v, f)) = bad.first() {
                    cert.witness(
                        "same_sign_edge",
                        (graph.set().get(u), graph.set().get(v), f.to_string()),
                    );
                }
                signature = Some(sig);
            }
            Bipartition::OddCycle(w) => {
                cert.number("bipartite", false);
                cert.check(false, SIGNATURE_EXISTENCE);
                cert.witness("odd_cycle", &w.cycle);
            }
        }
    }
    if checks.contains(&GraphCheck::Connected) {
        let conn = graph.check_connected();
        cert.number("components", conn.count())
            .number("connected", conn.count() == 1);
        // A single component bounds the quotient dimension by one.
        if conn.count() == 1 {
            cert.number("dimension_at_most_one", true);
        } else {
            cert.witness("component_representatives", &conn.representatives);
        }
    }
    Ok((cert, signature))
}

fn orbit_numbers(cert: &mut Certificate, table: &crate::symmetry::OrbitTable, set: &PartitionSet) {
    let order = group_order(table.d) as usize;
    let stabilizer_ok = table
        .orbits
        .iter()
        .all(|o| o.size * o.stabilizer.len() == order);
    cert.number("orbits", table.orbits.len())
        .number("total", table.total())
        .number("size_multiset", table.size_multiset())
        .number("group_order", order);
    cert.check(
        stabilizer_ok && table.total() == set.len(),
        "orbit-stabilizer identity",
    );
    if table.d == 3 {
        cert.check(table.orbits.len() == 19, ORBIT_TABLE);
    }
}

fn appendix_numbers(
    cert: &mut Certificate,
    table: &crate::symmetry::OrbitTable,
    set: &PartitionSet,
) -> Result<()> {
    let report = match_appendix(table, set, &AppendixData::load()?)?;
    let by_name: BTreeMap<String, [usize; 3]> = report
        .entries
        .iter()
        .map(|e| {
            (
                e.name.clone(),
                [e.orbit_id, e.orbit_size, e.stabilizer_order],
            )
        })
        .collect();
    cert.number("representatives", report.entries.len())
        .number("distinct_orbits_hit", report.distinct_orbits_hit)
        .number("orbit_id_size_stabilizer", by_name);
    cert.check(report.passed(), ORBIT_TABLE);
    if !report.passed() {
        cert.witness("appendix_mismatches", &report.mismatches);
    }
    Ok(())
}

fn epsilon_numbers(
    cert: &mut Certificate,
    sig: &SignatureTable,
    samples: usize,
    seed: u64,
) -> Result<()> {
    let report = match sig.set().d() {
        2 => epsilon_formula_check_d2(sig)?,
        3 => epsilon_formula_check(sig, &AppendixData::load()?, samples, seed)?,
        d => {
            return Err(Error::input(format!(
                "the signature formula is stated for d = 2 and d = 3, not d = {d}"
            )))
        }
    };
    cert.number("epsilon_checked", report.checked)
        .number("epsilon_violations", report.violations.len());
    cert.check(report.passed(), EPSILON_FORMULA);
    if let Some(v) = report.violations.first() {
        cert.witness("epsilon_violation", v);
    }
    Ok(())
}

fn relation_certificate(sig: &SignatureTable, mode: RelationMode) -> Result<Certificate> {
    let report = verify_relations(sig, mode)?;
    let mut cert = Certificate::new("verify-relations")
        .param("d", report.d)
        .param("mode", &report.mode);
    if let Some(seed) = report.seed {
        cert = cert.param("seed", seed);
    }
    cert.number("instances", report.instances)
        .number("generator_terms", report.generator_terms)
        .number("supported_instances", report.supported_instances)
        .number("violations", report.violations);
    cert.check(report.passed(), RELATION_VANISHING);
    if let Some(w) = &report.first_violation {
        cert.witness("relation", w);
    }
    Ok(cert)
}

fn rank_certificate(p: u64) -> Result<Certificate> {
    let r = rank_certify_d2(p)?;
    let mut cert = Certificate::new("rank").param("d", 2).param("p", p);
    cert.number("generators", r.generators)
        .number("relations", r.relations)
        .number("rank", r.rank)
        .number("dimension", r.dimension);
    cert.check(r.dimension == 1, RANK_D2);
    Ok(cert)
}

fn det_certificate(sig: &SignatureTable) -> Result<Certificate> {
    let d = sig.set().d();
    let det = Determinant::new(sig);
    let q = det.eval(&e_tensor(d, &rational(1, 1)))?;
    let f = det.eval(&e_tensor(d, &algebra::Fp::new(1, algebra::DEFAULT_PRIME)))?;
    let mut cert = Certificate::new("det").param("d", d).param("input", "E_d");
    cert.number("terms", det.terms())
        .number("value_rational", q.to_string())
        .number("value_gf101", f.value());
    cert.check(q == rational(1, 1) && f.value() == 1, DET_NORMALIZATION);
    Ok(cert)
}

fn certify_all(
    ctx: &mut Ctx,
    d: usize,
    seed: u64,
    samples: usize,
    relation_sample: Option<u64>,
) -> Result<()> {
    if !(2..=3).contains(&d) {
        return Err(Error::input("certify-all supports d = 2 and d = 3"));
    }
    let mode = relation_mode(relation_sample, Some(seed))?;

    let t = Instant::now();
    let all = enumerate(d, false)?;
    let set = Arc::new(enumerate(d, true)?);
    let expected = multinomial(&vec![2 * d - 1; d]);
    let mut cert = Certificate::new("enumerate").param("d", d);
    cert.number("homogeneous", all.len())
        .number("cycle_free", set.len())
        .number("multinomial", expected.map(|m| m.to_string()));
    cert.check(expected == Some(all.len() as u128), COUNTS);
    cert.check(
        set.iter().all(|p| p.is_homogeneous() && p.is_cycle_free()),
        COUNTS,
    );
    let known = match d {
        2 => (20, 12),
        _ => (756_756, 66_240),
    };
    cert.check((all.len(), set.len()) == known, COUNTS);
    drop(all);
    ctx.emit(cert, t)?;

    let t = Instant::now();
    let graph = match flip_graph_or_witness(Arc::clone(&set))? {
        Ok(g) => g,
        Err(cert) => return ctx.emit(cert, t),
    };
    let anchors = standard_anchors(d)?;
    let checks = [GraphCheck::Bipartite, GraphCheck::Connected];
    let (cert, sig) = flip_graph_certificate(&graph, &checks, &anchors)?;
    drop(graph);
    ctx.emit(cert, t)?;
    let Some(sig) = sig else {
        return Ok(());
    };

    let t = Instant::now();
    let table = orbits(&set)?;
    let mut cert = Certificate::new("orbits").param("d", d);
    orbit_numbers(&mut cert, &table, &set);
    if d == 3 {
        appendix_numbers(&mut cert, &table, &set)?;
    }
    ctx.emit(cert, t)?;

    let t = Instant::now();
    let mut cert = Certificate::new("signature").param("d", d);
    if d == 3 {
        cert = cert.param("samples", samples).param("seed", seed);
    }
    epsilon_numbers(&mut cert, &sig, samples, seed)?;
    ctx.emit(cert, t)?;

    let t = Instant::now();
    ctx.emit(det_certificate(&sig)?, t)?;

    let t = Instant::now();
    ctx.emit(relation_certificate(&sig, mode)?, t)?;

    if d == 2 {
        for p in [algebra::DEFAULT_PRIME, 5] {
            let t = Instant::now();
            ctx.emit(rank_certificate(p)?, t)?;
        }
    }
    Ok(())
}
