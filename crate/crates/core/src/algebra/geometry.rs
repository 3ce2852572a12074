use num_rational::BigRational;
use num_traits::Zero;

use super::{linalg, Determinant, Scalar, TensorInput};
use crate::error::{Error, Result};
use crate::model::{edge_index_unchecked, faces};

#[derive(Clone, Debug, PartialEq)]
pub struct GeometricReport {
    pub det_zero: bool,
    pub lambda_exists: bool,
    /// Nonzero `λ_{i,j}` in lex edge order, when one exists.
    pub lambda_witness: Option<Vec<BigRational>>,
}

impl GeometricReport {
    pub fn agrees(&self) -> bool {
        self.det_zero == self.lambda_exists
    }
}

/// Solves, for `d = 2`, `λ_{x,y} v_{x,y} + λ_{y,z} v_{y,z} + λ_{z,x} v_{z,x} = 0`
/// on every face with `λ` symmetric and `v_{z,x} = -v_{x,z}`, and compares
/// solvability with `Det^{S²}(X) = 0`.
pub fn geometric_check_d2(
    det: &Determinant,
    x: &TensorInput<BigRational>,
) -> Result<GeometricReport> {
    if x.d() != 2 || det.d() != 2 {
        return Err(Error::input("geometric_check_d2 needs d = 2"));
    }
    let n = 4;
    let unit = &x.vectors()[0][0];
    let mut rows = Vec::with_capacity(8);
    for f in faces(n) {
        let xy = edge_index_unchecked(f.x, f.y, n);
        let yz = edge_index_unchecked(f.y, f.z, n);
        let xz = edge_index_unchecked(f.x, f.z, n);
        for coord in 0..2 {
            let mut row = vec![unit.zero_like(); 6];
            row[xy] = x.vectors()[xy][coord].clone();
            row[yz] = x.vectors()[yz][coord].clone();
            row[xz] = -x.vectors()[xz][coord].clone();
            rows.push(row);
        }
    }
    let witness = linalg::kernel_vector(&rows, 6, unit);
    Ok(GeometricReport {
        det_zero: det.eval(x)?.is_zero(),
        lambda_exists: witness.is_some(),
        lambda_witness: witness,
    })
}

/// `v_{i,j} = P_j - P_i` for four points of the plane.
pub fn quadrilateral_input(points: &[[BigRational; 2]; 4]) -> TensorInput<BigRational> {
    let mut vectors = Vec::with_capacity(6);
    for i in 0..4 {
        for j in i + 1..4 {
            vectors.push(vec![
                points[j][0].clone() - points[i][0].clone(),
                points[j][1].clone() - points[i][1].clone(),
            ]);
        }
    }
    TensorInput::new(2, vectors).expect("six plane vectors")
}
