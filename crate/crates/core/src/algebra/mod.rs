//! Exact arithmetic on tensors of edge-indexed vectors: the `E_d`
//! generator, evaluation of `Det^{S²}`, the face relations and the `d = 2`
//! certifiers.

mod det;
mod field;
mod geometry;
mod linalg;
mod relations;

use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{edge_count, edge_index_unchecked, EdgePartition};
use crate::symmetry::Perm;

pub use det::{det2_explicit, det_eval, DetScalar, Determinant, DET2_EXPLICIT_SIGN};
pub use field::{
    check_modulus, is_prime, parse_rational, rational, FieldScalar, Fp, Scalar, DEFAULT_PRIME,
};
pub use geometry::{geometric_check_d2, quadrilateral_input, GeometricReport};
pub use linalg::{determinant, rank};
pub use relations::{
    rank_certify_d2, relation_count, relation_instances, verify_relations, RankReport,
    RelationInstance, RelationMode, RelationReport, RelationWitness,
};

/// `d(2d-1)` vectors of `V = k^d`, one per edge of `K_{2d}` in lex order.
#[derive(Clone, Debug, PartialEq)]
pub struct TensorInput<F> {
    d: usize,
    vectors: Vec<Vec<F>>,
}

impl<F: Scalar> TensorInput<F> {
    pub fn new(d: usize, vectors: Vec<Vec<F>>) -> Result<Self> {
        if d == 0 {
            return Err(Error::input("d must be at least 1"));
        }
        let e = edge_count(2 * d);
        if vectors.len() != e {
            return Err(Error::input(format!(
                "d = {d} needs {e} vectors, got {}",
                vectors.len()
            )));
        }
        if let Some(k) = vectors.iter().position(|v| v.len() != d) {
            return Err(Error::input(format!(
                "vector {k} has {} coordinates, expected {d}",
                vectors[k].len()
            )));
        }
        Ok(TensorInput { d, vectors })
    }

    /// The basis tensor of `p`: edge `k` carries `e_{c+1}` where `c` is its color.
    pub fn basis(p: &EdgePartition, unit: &F) -> Result<Self> {
        if p.n() != 2 * p.d() {
            return Err(Error::input(format!(
                "a tensor input needs n = 2d, partition has n = {}, d = {}",
                p.n(),
                p.d()
            )));
        }
        let (zero, one) = (unit.zero_like(), unit.one_like());
        let vectors = p
            .colors()
            .iter()
            .map(|&c| {
                let mut v = vec![zero.clone(); p.d()];
                v[c as usize] = one.clone();
                v
            })
            .collect();
        Ok(TensorInput { d: p.d(), vectors })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        2 * self.d
    }

    pub fn vectors(&self) -> &[Vec<F>] {
        &self.vectors
    }

    pub fn into_vectors(self) -> Vec<Vec<F>> {
        self.vectors
    }

    /// `v_{i,j}` for `1 ≤ i < j ≤ 2d`.
    pub fn at(&self, i: usize, j: usize) -> &[F] {
        &self.vectors[edge_index_unchecked(i, j, self.n())]
    }

    pub fn set(&mut self, k: usize, v: Vec<F>) -> Result<()> {
        if k >= self.vectors.len() || v.len() != self.d {
            return Err(Error::input("vector index or length out of range"));
        }
        self.vectors[k] = v;
        Ok(())
    }

    /// The partition whose basis tensor this is, if every entry is a basis vector.
    pub fn as_partition(&self) -> Option<EdgePartition> {
        let colors = self
            .vectors
            .iter()
            .map(|v| {
                let mut hot = None;
                for (c, x) in v.iter().enumerate() {
                    if x.is_zero_value() {
                        continue;
                    }
                    if *x != x.one_like() || hot.is_some() {
                        return None;
                    }
                    hot = Some(c as u8);
                }
                hot
            })
            .collect::<Option<Vec<u8>>>()?;
        EdgePartition::new(self.d, self.n(), colors).ok()
    }

    pub fn map<G>(&self, f: impl Fn(&F) -> G) -> TensorInput<G> {
        TensorInput {
            d: self.d,
            vectors: self
                .vectors
                .iter()
                .map(|v| v.iter().map(&f).collect())
                .collect(),
        }
    }
}

/// The generator `E_d` as a partition of `K_{2d}`.
///
/// `E_{d-1}` occupies the first `2d-2` vertices; the two new vertices are
/// joined to the pair `(2s-1, 2s)` by colors `d, s` and `s, d`, and to each
/// other by color `d`.
///
/// Panics unless `1 <= d <= 5`, the range in which partitions have a
/// canonical code.
pub fn build_e(d: usize) -> EdgePartition {
    assert!((1..=5).contains(&d), "E_d is built for 1 <= d <= 5");
    let n = 2 * d;
    let mut colors = vec![0u8; edge_count(n)];
    for m in 1..=d {
        let (a, b) = (2 * m - 1, 2 * m);
        let top = (m - 1) as u8;
        for s in 1..m {
            let low = (s - 1) as u8;
            colors[edge_index_unchecked(2 * s - 1, a, n)] = top;
            colors[edge_index_unchecked(2 * s - 1, b, n)] = low;
            colors[edge_index_unchecked(2 * s, a, n)] = low;
            colors[edge_index_unchecked(2 * s, b, n)] = top;
        }
        colors[edge_index_unchecked(a, b, n)] = top;
    }
    EdgePartition::new(d, n, colors).expect("E_d is a valid partition")
}

/// `E_d` as a tensor input over the field of `unit`.
pub fn e_tensor<F: Scalar>(d: usize, unit: &F) -> TensorInput<F> {
    TensorInput::basis(&build_e(d), unit).expect("E_d has n = 2d")
}

/// True when some basis vector fills at least `2d` edge positions, which
/// forces the generator to vanish.
pub fn zero_by_multiplicity<F: Scalar>(x: &TensorInput<F>) -> Result<bool> {
    let p = x
        .as_partition()
        .ok_or_else(|| Error::input("zero_by_multiplicity needs a basis-valued input"))?;
    Ok(p.class_sizes().iter().any(|&s| s >= 2 * x.d()))
}

/// `σ ⇀ X`: the vector at `(a, b)` moves to `(σ(a), σ(b))`.
pub fn act_on_tensor<F: Scalar>(sigma: &Perm, x: &TensorInput<F>) -> Result<TensorInput<F>> {
    if sigma.len() != x.n() {
        return Err(Error::input(format!(
            "permutation of degree {} cannot act on K_{}",
            sigma.len(),
            x.n()
        )));
    }
    let map = sigma.edge_map();
    let mut vectors = x.vectors.clone();
    for (k, v) in x.vectors.iter().enumerate() {
        vectors[map[k]] = v.clone();
    }
    Ok(TensorInput { d: x.d, vectors })
}

/// `T * X`: the `d × d` matrix `T` applied to every entry.
pub fn act_matrix<F: Scalar>(t: &[Vec<F>], x: &TensorInput<F>) -> Result<TensorInput<F>> {
    let d = x.d;
    if t.len() != d || t.iter().any(|row| row.len() != d) {
        return Err(Error::input(format!("T must be {d} × {d}")));
    }
    let vectors = x
        .vectors
        .iter()
        .map(|v| {
            t.iter()
                .map(|row| {
                    row.iter()
                        .zip(v)
                        .fold(v[0].zero_like(), |acc, (a, b)| acc + a.clone() * b.clone())
                })
                .collect()
        })
        .collect();
    Ok(TensorInput { d, vectors })
}

/// Tensor input of either field, as read from a vector file.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyTensor {
    Rational(TensorInput<BigRational>),
    Gf(TensorInput<Fp>),
}

impl AnyTensor {
    pub fn d(&self) -> usize {
        match self {
            AnyTensor::Rational(x) => x.d(),
            AnyTensor::Gf(x) => x.d(),
        }
    }
}

/// On-disk form: `{"d", "field": "rational" | "gfp", "p"?, "vectors"}` with
/// coordinates as strings (`"a/b"` for rationals).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VectorFile {
    pub d: usize,
    pub field: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    pub vectors: Vec<Vec<String>>,
}

impl VectorFile {
    pub fn from_rational(x: &TensorInput<BigRational>) -> Self {
        VectorFile {
            d: x.d,
            field: "rational".into(),
            p: None,
            vectors: x
                .vectors
                .iter()
                .map(|v| v.iter().map(ToString::to_string).collect())
                .collect(),
        }
    }

    pub fn from_gf(x: &TensorInput<Fp>, p: u64) -> Self {
        VectorFile {
            d: x.d,
            field: "gfp".into(),
            p: Some(p),
            vectors: x
                .vectors
                .iter()
                .map(|v| v.iter().map(ToString::to_string).collect())
                .collect(),
        }
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn into_tensor(self) -> Result<AnyTensor> {
        match self.field.as_str() {
            "rational" => {
                let vectors = self
                    .vectors
                    .iter()
                    .map(|v| v.iter().map(|s| parse_rational(s)).collect())
                    .collect::<Result<_>>()?;
                Ok(AnyTensor::Rational(TensorInput::new(self.d, vectors)?))
            }
            "gfp" => {
                let p = self.p.unwrap_or(DEFAULT_PRIME);
                check_modulus(p)?;
                let vectors = self
                    .vectors
                    .iter()
                    .map(|v| {
                        v.iter()
                            .map(|s| {
                                s.trim()
                                    .parse::<BigInt>()
                                    .map(|x| Fp::from_bigint(&x, p))
                                    .map_err(|_| Error::input(format!("not an integer: {s:?}")))
                            })
                            .collect()
                    })
                    .collect::<Result<_>>()?;
                Ok(AnyTensor::Gf(TensorInput::new(self.d, vectors)?))
            }
            other => Err(Error::input(format!(
                "unknown field {other:?} (expected \"rational\" or \"gfp\")"
            ))),
        }
    }
}

/// `E_d` as upper-triangular matrix text: row `i` lists `e_c` for `j > i`.
pub fn e_matrix_text(p: &EdgePartition) -> String {
    let n = p.n();
    let mut out = String::new();
    for i in 1..=n {
        let row: Vec<String> = (1..=n)
            .map(|j| {
                if j <= i {
                    ".".to_string()
                } else {
                    format!("e{}", p.colors()[edge_index_unchecked(i, j, n)] + 1)
                }
            })
            .collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Edge;

    fn class(p: &EdgePartition, c: u8) -> Vec<String> {
        p.class_edges(c).iter().map(Edge::to_string).collect()
    }

    #[test]
    fn e1_e2_e3() {
        let e1 = build_e(1);
        assert_eq!(e1.colors(), &[0]);

        let e2 = build_e(2);
        assert_eq!(class(&e2, 0), ["12", "14", "23"]);
        assert_eq!(class(&e2, 1), ["13", "24", "34"]);

        let e3 = build_e(3);
        assert_eq!(class(&e3, 0), ["12", "14", "16", "23", "25"]);
        assert_eq!(class(&e3, 1), ["13", "24", "34", "36", "45"]);
        assert_eq!(class(&e3, 2), ["15", "26", "35", "46", "56"]);
        for d in 1..=5 {
            let e = build_e(d);
            assert!(e.is_homogeneous() && e.is_cycle_free(), "E_{d}");
        }
    }

    #[test]
    fn multiplicity() {
        let one = rational(1, 1);
        assert!(!zero_by_multiplicity(&e_tensor(3, &one)).unwrap());

        let all_e1 = EdgePartition::new(3, 6, vec![0; 15]).unwrap();
        assert!(zero_by_multiplicity(&TensorInput::basis(&all_e1, &one).unwrap()).unwrap());

        let mut colors = build_e(3).into_colors();
        let k = colors.iter().position(|&c| c == 1).unwrap();
        colors[k] = 0;
        let six = EdgePartition::new(3, 6, colors).unwrap();
        assert_eq!(six.class_sizes()[0], 6);
        assert!(zero_by_multiplicity(&TensorInput::basis(&six, &one).unwrap()).unwrap());

        let mut x = e_tensor(2, &one);
        x.set(0, vec![rational(1, 2), rational(0, 1)]).unwrap();
        assert!(zero_by_multiplicity(&x).is_err());
    }

    #[test]
    fn basis_round_trip() {
        let e3 = build_e(3);
        let x = TensorInput::basis(&e3, &Fp::new(1, 101)).unwrap();
        assert_eq!(x.as_partition().unwrap(), e3);
        assert_eq!(
            x.at(1, 6),
            [Fp::new(1, 101), Fp::new(0, 101), Fp::new(0, 101)]
        );
    }

    #[test]
    fn permutation_moves_entries() {
        let one = rational(1, 1);
        let x = e_tensor(2, &one);
        let sigma = Perm::parse_cycles("(1,2)", 4).unwrap();
        let y = act_on_tensor(&sigma, &x).unwrap();
        // v_{1,3} moves to (2,3)
        assert_eq!(y.at(2, 3), x.at(1, 3));
        assert_eq!(y.at(1, 2), x.at(1, 2));
    }

    #[test]
    fn vector_file_round_trip() {
        let x = e_tensor(2, &rational(1, 1));
        let file = VectorFile::from_rational(&x);
        let text = serde_json::to_string(&file).unwrap();
        let back: VectorFile = serde_json::from_str(&text).unwrap();
        assert_eq!(back.into_tensor().unwrap(), AnyTensor::Rational(x));

        let bad = VectorFile {
            d: 2,
            field: "gfp".into(),
            p: Some(3),
            vectors: vec![vec!["1".into(), "0".into()]; 6],
        };
        assert!(bad.into_tensor().is_err());
    }

    #[test]
    fn matrix_text() {
        let text = e_matrix_text(&build_e(2));
        assert_eq!(text, ". e1 e2 e1\n. . e1 e2\n. . . e2\n. . . .\n");
    }
}
