use super::Scalar;

/// Row-reduces `m` in place to reduced echelon form; returns pivot columns.
pub(crate) fn row_reduce<F: Scalar>(m: &mut [Vec<F>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !m[i][c].is_zero_value()) else {
            continue;
        };
        m.swap(r, pr);
        let inv = m[r][c].inverse().expect("pivot is nonzero");
        for x in m[r].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for i in 0..rows {
            if i == r || m[i][c].is_zero_value() {
                continue;
            }
            let factor = m[i][c].clone();
            for j in c..cols {
                let delta = factor.clone() * m[r][j].clone();
                m[i][j] = m[i][j].clone() - delta;
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<F: Scalar>(rows: &[Vec<F>]) -> usize {
    let mut m = rows.to_vec();
    row_reduce(&mut m).len()
}

/// A nonzero kernel vector of `rows`, if one exists.
pub(crate) fn kernel_vector<F: Scalar>(rows: &[Vec<F>], cols: usize, unit: &F) -> Option<Vec<F>> {
    let mut m = rows.to_vec();
    let pivots = row_reduce(&mut m);
    let free = (0..cols).find(|c| !pivots.contains(c))?;
    let mut v = vec![unit.zero_like(); cols];
    v[free] = unit.one_like();
    for (r, &pc) in pivots.iter().enumerate() {
        v[pc] = -m[r][free].clone();
    }
    Some(v)
}

/// Determinant of a square matrix by elimination.
pub fn determinant<F: Scalar>(m: &[Vec<F>]) -> F {
    let n = m.len();
    assert!(
        n > 0 && m.iter().all(|r| r.len() == n),
        "square matrix required"
    );
    let mut a = m.to_vec();
    let mut det = a[0][0].one_like();
    for c in 0..n {
        let Some(pr) = (c..n).find(|&i| !a[i][c].is_zero_value()) else {
            return det.zero_like();
        };
        if pr != c {
            a.swap(pr, c);
            det = -det;
        }
        det = det * a[c][c].clone();
        let inv = a[c][c].inverse().expect("pivot is nonzero");
        for i in c + 1..n {
            if a[i][c].is_zero_value() {
                continue;
            }
            let factor = a[i][c].clone() * inv.clone();
            for j in c..n {
                let delta = factor.clone() * a[c][j].clone();
                a[i][j] = a[i][j].clone() - delta;
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rational, Fp};

    fn q(rows: &[&[i64]]) -> Vec<Vec<num_rational::BigRational>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| rational(x, 1)).collect())
            .collect()
    }

    #[test]
    fn small_determinants() {
        assert_eq!(determinant(&q(&[&[2, 1], &[7, 4]])), rational(1, 1));
        assert_eq!(determinant(&q(&[&[0, 1], &[1, 0]])), rational(-1, 1));
        assert_eq!(
            determinant(&q(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]])),
            rational(0, 1)
        );
        assert_eq!(
            determinant(&q(&[&[2, 0, 1], &[1, 3, 2], &[1, 1, 2]])),
            rational(6, 1)
        );
    }

    #[test]
    fn ranks_and_kernels() {
        let m = q(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(rank(&m), 2);
        let v = kernel_vector(&m, 3, &rational(1, 1)).unwrap();
        for row in &m {
            let s = row
                .iter()
                .zip(&v)
                .fold(rational(0, 1), |a, (x, y)| a + x * y);
            assert_eq!(s, rational(0, 1));
        }
        assert!(kernel_vector(&q(&[&[1, 0], &[0, 1]]), 2, &rational(1, 1)).is_none());

        let f: Vec<Vec<Fp>> = vec![
            vec![Fp::new(1, 5), Fp::new(2, 5)],
            vec![Fp::new(3, 5), Fp::new(1, 5)],
        ];
        // det = 1 - 6 = -5 = 0 mod 5
        assert_eq!(rank(&f), 1);
    }
}
