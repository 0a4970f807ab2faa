//! The skew-symmetric tridiagonal eigenproblem.
//!
//! A matrix with off-diagonal band `(b_1, .., b_{n-1})`, `+b_i` above and
//! `-b_i` below the diagonal, has purely imaginary eigenvalues `±i b`.
//! The positive rates `b` equal the positive eigenvalues of the symmetric
//! tridiagonal matrix with the same off-diagonals (similarity through
//! `diag(1, i, i^2, ...)`), which are computed here by bisection on Sturm
//! sequence sign counts.

use crate::error::{Error, Result};
use crate::numkit::linalg::{self, dot, norm, scale};

/// Separation budget for eigenplane extraction.
const PLANE_TOL: f64 = 1e-8;

/// Skew-symmetric tridiagonal matrix, stored by its off-diagonal band.
#[derive(Debug, Clone, PartialEq)]
pub struct SkewTridiag {
    offdiag: Vec<f64>,
}

/// Positive rotation rates of a [`SkewTridiag`], ascending, plus the
/// odd-dimension kernel flag.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub frequencies: Vec<f64>,
    pub has_zero: bool,
}

/// Orthonormal pair spanning an invariant 2-plane, oriented so that
/// `F u = +frequency v` (and hence `F v = -frequency u`).
#[derive(Debug, Clone)]
pub struct PlaneBasis {
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub frequency: f64,
}

impl SkewTridiag {
    /// Band entries must all be nonzero and finite; a zero entry means the
    /// curve degenerates to a lower-dimensional space.
    pub fn new(offdiag: Vec<f64>) -> Result<Self> {
        if offdiag.is_empty() {
            return Err(Error::InvalidInput("empty off-diagonal band".into()));
        }
        for (i, b) in offdiag.iter().enumerate() {
            if !b.is_finite() {
                return Err(Error::NonFinite(format!("off-diagonal entry {}", i + 1)));
            }
            if *b == 0.0 {
                return Err(Error::InvalidInput(format!(
                    "off-diagonal entry {} is zero; the curve lives in a lower dimension",
                    i + 1
                )));
            }
        }
        Ok(Self { offdiag })
    }

    /// Band `(1, c_2, .., c_{n-1})` for curvature ratio constants.
    pub fn from_ratios(ratios: &[f64]) -> Result<Self> {
        let mut band = Vec::with_capacity(ratios.len() + 1);
        band.push(1.0);
        band.extend_from_slice(ratios);
        Self::new(band)
    }

    pub fn dim(&self) -> usize {
        self.offdiag.len() + 1
    }

    pub fn offdiag(&self) -> &[f64] {
        &self.offdiag
    }

    /// `F v`
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        let n = self.dim();
        debug_assert_eq!(v.len(), n);
        let b = &self.offdiag;
        (0..n)
            .map(|i| {
                let mut x = 0.0;
                if i + 1 < n {
                    x += b[i] * v[i + 1];
                }
                if i > 0 {
                    x -= b[i - 1] * v[i - 1];
                }
                x
            })
            .collect()
    }

    /// `F^T v = -F v`
    pub fn apply_transpose(&self, v: &[f64]) -> Vec<f64> {
        scale(&self.apply(v), -1.0)
    }

    /// Dense form, rows first. Handy for determinant-style oracles.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let n = self.dim();
        let mut m = vec![vec![0.0; n]; n];
        for (i, b) in self.offdiag.iter().enumerate() {
            m[i][i + 1] = *b;
            m[i + 1][i] = -*b;
        }
        m
    }

    /// Sturm count for the symmetric surrogate: number of eigenvalues < x.
    fn sturm_count(&self, x: f64) -> usize {
        let n = self.dim();
        let tiny = f64::MIN_POSITIVE.sqrt();
        let mut count = 0;
        let mut q = -x;
        if q < 0.0 {
            count += 1;
        }
        for i in 1..n {
            if q.abs() < tiny {
                q = if q < 0.0 { -tiny } else { tiny };
            }
            q = -x - self.offdiag[i - 1] * self.offdiag[i - 1] / q;
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn eigenvalue_by_index(&self, j: usize, bound: f64) -> f64 {
        let mut lo = -bound;
        let mut hi = bound;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.sturm_count(mid) > j {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Positive rotation rates, ascending. The symmetric surrogate has a
    /// spectrum symmetric about zero; only the positive half is returned.
    pub fn frequencies(&self) -> Result<Spectrum> {
        let n = self.dim();
        let m = n / 2;
        let bound = {
            let b = &self.offdiag;
            let mut r: f64 = 0.0;
            for i in 0..n {
                let mut row = 0.0;
                if i > 0 {
                    row += b[i - 1].abs();
                }
                if i < n - 1 {
                    row += b[i].abs();
                }
                r = r.max(row);
            }
            r * (1.0 + 1e-12) + f64::MIN_POSITIVE
        };
        let freqs: Vec<f64> = (n - m..n)
            .map(|j| self.eigenvalue_by_index(j, bound))
            .collect();
        Ok(Spectrum {
            frequencies: freqs,
            has_zero: n % 2 == 1,
        })
    }

    /// Invariant 2-planes (one per frequency) and, in odd dimensions, the
    /// unit kernel axis.
    pub fn invariant_planes(
        &self,
        spectrum: &Spectrum,
    ) -> Result<(Vec<PlaneBasis>, Option<Vec<f64>>)> {
        let n = self.dim();
        let dense = self.to_dense();
        let mut planes = Vec::with_capacity(spectrum.frequencies.len());
        for &b in &spectrum.frequencies {
            // null space of F^2 + b^2 I, built columnwise
            let mut m = vec![vec![0.0; n]; n];
            for j in 0..n {
                let mut e = vec![0.0; n];
                e[j] = 1.0;
                let col = self.apply(&self.apply(&e));
                for i in 0..n {
                    m[i][j] = col[i];
                }
            }
            for i in 0..n {
                m[i][i] += b * b;
            }
            let ns = linalg::nullspace(&m, PLANE_TOL)?;
            if ns.len() != 2 {
                return Err(Error::Degenerate(format!(
                    "eigenplane for frequency {b} has numerical dimension {}; \
                     frequencies too close to separate",
                    ns.len()
                )));
            }
            let u = ns[0].clone();
            let fu = self.apply(&u);
            let v = scale(&fu, 1.0 / b);
            let vn = norm(&v);
            if (vn - 1.0).abs() > PLANE_TOL {
                return Err(Error::Degenerate(format!(
                    "eigenplane for frequency {b} failed the rotation residual check"
                )));
            }
            let v = scale(&v, 1.0 / vn);
            // residual of the reverse rotation
            let fv = self.apply(&v);
            let mut res = 0.0f64;
            for i in 0..n {
                res = res.max((fv[i] + b * u[i]).abs());
            }
            if res > PLANE_TOL {
                return Err(Error::Degenerate(format!(
                    "eigenplane for frequency {b} failed the rotation residual check"
                )));
            }
            planes.push(PlaneBasis { u, v, frequency: b });
        }
        let axis = if spectrum.has_zero {
            let ns = linalg::nullspace(&dense, PLANE_TOL)?;
            if ns.len() != 1 {
                return Err(Error::Degenerate(format!(
                    "kernel has numerical dimension {}",
                    ns.len()
                )));
            }
            Some(ns[0].clone())
        } else {
            None
        };
        Ok((planes, axis))
    }
}

impl Spectrum {
    /// Pairwise distinct nonzero frequencies, the twistedness condition for
    /// torus geodesics. Relative gap tolerance 1e-9.
    pub fn is_twisted(&self) -> bool {
        let f = &self.frequencies;
        if f.iter().any(|x| *x <= 0.0) {
            return false;
        }
        for i in 1..f.len() {
            let gap = (f[i] - f[i - 1]).abs();
            if gap <= 1e-9 * f[i].abs().max(f[i - 1].abs()) {
                return false;
            }
        }
        true
    }
}

impl PlaneBasis {
    /// Orthogonal projection of `x` onto the plane.
    pub fn project(&self, x: &[f64]) -> Vec<f64> {
        let mut p = scale(&self.u, dot(&self.u, x));
        linalg::axpy(&mut p, dot(&self.v, x), &self.v);
        p
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rotation_generator_n2() {
        let f = SkewTridiag::new(vec![1.0]).unwrap();
        let s = f.frequencies().unwrap();
        assert!(!s.has_zero);
        assert_eq!(s.frequencies.len(), 1);
        assert!((s.frequencies[0] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn n3_closed_form() {
        for c in [0.3, 1.0, 4.2] {
            let f = SkewTridiag::new(vec![1.0, c]).unwrap();
            let s = f.frequencies().unwrap();
            assert!(s.has_zero);
            assert_eq!(s.frequencies.len(), 1);
            assert!((s.frequencies[0] - (1.0 + c * c).sqrt()).abs() < 1e-13);
        }
    }

    #[test]
    fn n4_worked_constants() {
        let f = SkewTridiag::new(vec![1.0, 0.5, 3f64.sqrt() / 2.0]).unwrap();
        let s = f.frequencies().unwrap();
        assert!(!s.has_zero);
        assert!((s.frequencies[0] - 1.0 / 2f64.sqrt()).abs() < 1e-13);
        assert!((s.frequencies[1] - (1.5f64).sqrt()).abs() < 1e-13);
    }

    #[test]
    fn zero_band_entry_rejected() {
        assert!(SkewTridiag::new(vec![1.0, 0.0, 0.5]).is_err());
    }

    #[test]
    fn planes_n2_standard_basis() {
        let f = SkewTridiag::new(vec![1.0]).unwrap();
        let s = f.frequencies().unwrap();
        let (planes, axis) = f.invariant_planes(&s).unwrap();
        assert!(axis.is_none());
        assert_eq!(planes.len(), 1);
        let p = &planes[0];
        assert!((dot(&p.u, &p.u) - 1.0).abs() < 1e-12);
        assert!(dot(&p.u, &p.v).abs() < 1e-12);
    }

    #[test]
    fn axis_n3_direct_solve() {
        // kernel of the 3x3 system is (c, 0, 1)/sqrt(1+c^2)
        let c = 0.8;
        let f = SkewTridiag::new(vec![1.0, c]).unwrap();
        let s = f.frequencies().unwrap();
        let (_, axis) = f.invariant_planes(&s).unwrap();
        let a = axis.unwrap();
        let expect = scale(&[c, 0.0, 1.0], 1.0 / (1.0 + c * c).sqrt());
        let sign = if dot(&a, &expect) < 0.0 { -1.0 } else { 1.0 };
        for i in 0..3 {
            assert!((sign * a[i] - expect[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn planes_n4_eigen_residual() {
        let f = SkewTridiag::new(vec![1.0, 0.5, 3f64.sqrt() / 2.0]).unwrap();
        let s = f.frequencies().unwrap();
        let (planes, axis) = f.invariant_planes(&s).unwrap();
        assert!(axis.is_none());
        assert_eq!(planes.len(), 2);
        for p in &planes {
            let fu = f.apply(&p.u);
            for i in 0..4 {
                assert!((fu[i] - p.frequency * p.v[i]).abs() < 1e-10);
            }
        }
        // planes pairwise orthogonal
        assert!(dot(&planes[0].u, &planes[1].u).abs() < 1e-10);
        assert!(dot(&planes[0].u, &planes[1].v).abs() < 1e-10);
        assert!(dot(&planes[0].v, &planes[1].u).abs() < 1e-10);
        assert!(dot(&planes[0].v, &planes[1].v).abs() < 1e-10);
    }

    #[test]
    fn twisted_flags() {
        let t = Spectrum {
            frequencies: vec![1.0, 2.0],
            has_zero: false,
        };
        assert!(t.is_twisted());
        let eq = Spectrum {
            frequencies: vec![1.0, 1.0],
            has_zero: false,
        };
        assert!(!eq.is_twisted());
        let worked = Spectrum {
            frequencies: vec![1.0 / 2f64.sqrt(), (1.5f64).sqrt()],
            has_zero: false,
        };
        assert!(worked.is_twisted());
    }
}
