//! Dense helpers for small vectors and matrices: inner products,
//! Gram-Schmidt orthonormalization with rank detection, orientation
//! completion and null-space extraction.

use crate::error::{Error, Result};

/// Relative tolerance below which a Gram-Schmidt residual counts as zero.
pub const RANK_TOL: f64 = 1e-12;

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn scale(a: &[f64], c: f64) -> Vec<f64> {
    a.iter().map(|x| c * x).collect()
}

pub fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// a += c * b
pub fn axpy(a: &mut [f64], c: f64, b: &[f64]) {
    debug_assert_eq!(a.len(), b.len());
    for (x, y) in a.iter_mut().zip(b) {
        *x += c * y;
    }
}

pub fn all_finite(a: &[f64]) -> bool {
    a.iter().all(|x| x.is_finite())
}

/// Modified Gram-Schmidt with a second orthogonalization pass.
///
/// Inputs whose residual drops below `RANK_TOL` relative to their own norm
/// are dropped; the returned rank counts the kept vectors.
pub fn orthonormalize(vectors: &[Vec<f64>]) -> Result<(Vec<Vec<f64>>, usize)> {
    if vectors.is_empty() {
        return Ok((Vec::new(), 0));
    }
    let n = vectors[0].len();
    if vectors.len() > n {
        return Err(Error::InvalidInput(format!(
            "{} vectors in dimension {}",
            vectors.len(),
            n
        )));
    }
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(vectors.len());
    for v in vectors {
        if v.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: v.len(),
            });
        }
        if !all_finite(v) {
            return Err(Error::NonFinite("orthonormalize input".into()));
        }
        let scale_ref = norm(v);
        let mut w = v.clone();
        // two passes of MGS keep orthogonality near machine precision
        for _ in 0..2 {
            for e in &basis {
                let c = dot(e, &w);
                axpy(&mut w, -c, e);
            }
        }
        let r = norm(&w);
        if r <= RANK_TOL * scale_ref.max(1.0) {
            continue; // dependent input, reduced rank
        }
        basis.push(scale(&w, 1.0 / r));
    }
    let rank = basis.len();
    Ok((basis, rank))
}

/// Determinant by LU with partial pivoting. Matrix given as rows.
pub fn det(m: &[Vec<f64>]) -> f64 {
    let n = m.len();
    let mut a: Vec<Vec<f64>> = m.to_vec();
    let mut d = 1.0;
    for k in 0..n {
        let (p, _) = a
            .iter()
            .enumerate()
            .skip(k)
            .map(|(i, row)| (i, row[k].abs()))
            .max_by(|x, y| x.1.total_cmp(&y.1))
            .unwrap();
        if a[p][k] == 0.0 {
            return 0.0;
        }
        if p != k {
            a.swap(p, k);
            d = -d;
        }
        d *= a[k][k];
        for i in k + 1..n {
            let f = a[i][k] / a[k][k];
            for j in k..n {
                a[i][j] -= f * a[k][j];
            }
        }
    }
    d
}

/// Completes `n-1` orthonormal vectors to a positively oriented basis and
/// returns the last vector.
///
/// The result satisfies `det(frame, result) = +1`; it is built from the
/// cofactor expansion of that determinant along the last row, so the sign
/// comes out right by construction.
pub fn complete_orientation(frame: &[Vec<f64>]) -> Result<Vec<f64>> {
    if frame.is_empty() {
        return Err(Error::InvalidInput("empty frame".into()));
    }
    let n = frame[0].len();
    if frame.len() != n - 1 {
        return Err(Error::DimensionMismatch {
            expected: n - 1,
            got: frame.len(),
        });
    }
    let mut c = vec![0.0; n];
    for i in 0..n {
        // minor: delete column i from the (n-1) x n frame matrix
        let minor: Vec<Vec<f64>> = frame
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(j, _)| *j != i)
                    .map(|(_, x)| *x)
                    .collect()
            })
            .collect();
        // cofactor of entry (n, i+1) in det(frame rows, x)
        let sign = if (n + i + 1) % 2 == 0 { 1.0 } else { -1.0 };
        c[i] = sign * det(&minor);
    }
    let len = norm(&c);
    if len < 1e-8 {
        return Err(Error::RankDeficient(
            "frame does not span an (n-1)-dimensional subspace".into(),
        ));
    }
    Ok(scale(&c, 1.0 / len))
}

/// Orthonormal basis of the null space of a square matrix (rows), with the
/// rank decided relative to the largest entry.
pub fn nullspace(m: &[Vec<f64>], rel_tol: f64) -> Result<Vec<Vec<f64>>> {
    let n = m.len();
    let mut a: Vec<Vec<f64>> = m.to_vec();
    let mut col_perm: Vec<usize> = (0..n).collect();
    let max_entry = a
        .iter()
        .flat_map(|r| r.iter())
        .fold(0.0f64, |acc, x| acc.max(x.abs()));
    if max_entry == 0.0 {
        // zero matrix: whole space
        let mut basis = Vec::new();
        for i in 0..n {
            let mut e = vec![0.0; n];
            e[i] = 1.0;
            basis.push(e);
        }
        return Ok(basis);
    }
    let tol = rel_tol * max_entry;
    let mut rank = 0;
    for k in 0..n {
        // full pivoting
        let mut best = (k, k, 0.0f64);
        for i in k..n {
            for j in k..n {
                if a[i][j].abs() > best.2 {
                    best = (i, j, a[i][j].abs());
                }
            }
        }
        if best.2 <= tol {
            break;
        }
        a.swap(k, best.0);
        if best.1 != k {
            for row in a.iter_mut() {
                row.swap(k, best.1);
            }
            col_perm.swap(k, best.1);
        }
        for i in k + 1..n {
            let f = a[i][k] / a[k][k];
            for j in k..n {
                a[i][j] -= f * a[k][j];
            }
        }
        rank += 1;
    }
    // back substitution: one basis vector per free column
    let mut basis = Vec::new();
    for free in rank..n {
        let mut x = vec![0.0; n]; // in permuted coordinates
        x[free] = 1.0;
        for i in (0..rank).rev() {
            let mut s = 0.0;
            for j in i + 1..n {
                s += a[i][j] * x[j];
            }
            x[i] = -s / a[i][i];
        }
        let mut v = vec![0.0; n];
        for (pos, &orig) in col_perm.iter().enumerate() {
            v[orig] = x[pos];
        }
        basis.push(v);
    }
    let (ortho, _) = orthonormalize(&basis)?;
    Ok(ortho)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orthonormalize_identity_passthrough() {
        let (basis, rank) =
            orthonormalize(&[vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert_eq!(rank, 2);
        assert_eq!(basis[0], vec![1.0, 0.0]);
        assert_eq!(basis[1], vec![0.0, 1.0]);
    }

    #[test]
    fn orthonormalize_normalizes() {
        let (basis, rank) = orthonormalize(&[vec![3.0, 4.0]]).unwrap();
        assert_eq!(rank, 1);
        assert!((basis[0][0] - 0.6).abs() < 1e-15);
        assert!((basis[0][1] - 0.8).abs() < 1e-15);
    }

    #[test]
    fn orthonormalize_detects_dependence() {
        let s = 1.0 / 2f64.sqrt();
        let (basis, rank) =
            orthonormalize(&[vec![1.0, 1.0, 0.0], vec![1.0, 1.0, 1e-18]]).unwrap();
        assert_eq!(rank, 1);
        assert!((basis[0][0] - s).abs() < 1e-15);
        assert!((basis[0][1] - s).abs() < 1e-15);
        assert_eq!(basis[0][2], 0.0);
    }

    #[test]
    fn complete_orientation_r3() {
        let e3 = complete_orientation(&[vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]]).unwrap();
        assert_eq!(e3, vec![0.0, 0.0, 1.0]);
        let m = complete_orientation(&[vec![0.0, 1.0, 0.0], vec![1.0, 0.0, 0.0]]).unwrap();
        assert_eq!(m, vec![0.0, 0.0, -1.0]);
    }

    #[test]
    fn complete_orientation_r4() {
        let e4 = complete_orientation(&[
            vec![1.0, 0.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0, 0.0],
            vec![0.0, 0.0, 1.0, 0.0],
        ])
        .unwrap();
        assert_eq!(e4, vec![0.0, 0.0, 0.0, 1.0]);
    }

    #[test]
    fn complete_orientation_rejects_deficient_frame() {
        let r = complete_orientation(&[vec![1.0, 0.0, 0.0], vec![1.0, 0.0, 0.0]]);
        assert!(r.is_err());
    }

    #[test]
    fn nullspace_of_singular_matrix() {
        // rows of rank 2 in R^3, kernel spanned by (1, -2, 1)
        let m = vec![
            vec![1.0, 1.0, 1.0],
            vec![1.0, 2.0, 3.0],
            vec![2.0, 3.0, 4.0],
        ];
        let ns = nullspace(&m, 1e-10).unwrap();
        assert_eq!(ns.len(), 1);
        let v = &ns[0];
        for row in &m {
            assert!(dot(row, v).abs() < 1e-10);
        }
    }
}
