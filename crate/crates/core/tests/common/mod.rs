#![allow(dead_code)]

use std::sync::{Arc, OnceLock};

use lambda_s2::algebra::{rational, Determinant, TensorInput};
use lambda_s2::enumeration::{enumerate, PartitionSet};
use lambda_s2::flips::{FlipGraph, SignatureTable};
use lambda_s2::pipeline::standard_anchors;
use num_rational::BigRational;
use rand::Rng;

pub struct Fixture {
    pub set: Arc<PartitionSet>,
    pub graph: FlipGraph,
    pub sig: SignatureTable,
    pub det: Determinant,
}

fn build(d: usize) -> Fixture {
    let set = Arc::new(enumerate(d, true).unwrap());
    let graph = FlipGraph::build(Arc::clone(&set)).unwrap();
    let sig = graph
        .check_bipartite(&standard_anchors(d).unwrap())
        .unwrap()
        .signature()
        .unwrap();
    let det = Determinant::new(&sig);
    Fixture {
        set,
        graph,
        sig,
        det,
    }
}

pub fn d2() -> &'static Fixture {
    static F: OnceLock<Fixture> = OnceLock::new();
    F.get_or_init(|| build(2))
}

pub fn d3() -> &'static Fixture {
    static F: OnceLock<Fixture> = OnceLock::new();
    F.get_or_init(|| build(3))
}

pub fn fixture(d: usize) -> &'static Fixture {
    match d {
        2 => d2(),
        3 => d3(),
        _ => panic!("no fixture for d = {d}"),
    }
}

/// Small numerators and denominators keep exact arithmetic cheap.
pub fn random_rational<R: Rng>(rng: &mut R) -> BigRational {
    rational(rng.gen_range(-6..=6), rng.gen_range(1..=4))
}

pub fn random_vector<R: Rng>(d: usize, rng: &mut R) -> Vec<BigRational> {
    (0..d).map(|_| random_rational(rng)).collect()
}

pub fn random_input<R: Rng>(d: usize, rng: &mut R) -> TensorInput<BigRational> {
    let e = d * (2 * d - 1);
    TensorInput::new(d, (0..e).map(|_| random_vector(d, rng)).collect()).unwrap()
}
