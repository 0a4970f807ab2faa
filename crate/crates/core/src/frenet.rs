//! Frenet frames, curvatures and curvature-ratio diagnostics for curves in
//! R^n, from analytic derivative oracles or from uniform samples.
//!
//! The frame comes from Gram-Schmidt on the derivatives of orders 1..n-1
//! with the last vector fixed by orientation. Curvatures come from the
//! triangular Gram-Schmidt coefficients: with `A = QR` the QR factorization
//! of the derivative matrix, `k_i = R_{i+1,i+1} / (R_{i,i} |a'|)`, which is
//! the `<e_i', e_{i+1}>/|a'|` definition written without differentiating
//! the frame.

use crate::error::{Error, Result};
use crate::numkit::diff;
use crate::numkit::linalg::{self, axpy, complete_orientation, dot, norm, scale, RANK_TOL};

/// Minimum sample count for the pure-differencing path.
pub const MIN_SAMPLES: usize = 32;

/// Default relative-spread tolerance for ratio constancy verdicts.
pub const CONSTANCY_TOL: f64 = 1e-3;

/// Uniformly sampled curve in R^n; the universal exchange format.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveSamples {
    dim: usize,
    grid: Vec<f64>,
    points: Vec<Vec<f64>>,
}

impl CurveSamples {
    pub fn new(grid: Vec<f64>, points: Vec<Vec<f64>>) -> Result<Self> {
        if grid.len() != points.len() {
            return Err(Error::InvalidInput(format!(
                "{} grid values for {} points",
                grid.len(),
                points.len()
            )));
        }
        if grid.len() < 2 {
            return Err(Error::TooFewSamples {
                needed: 2,
                got: grid.len(),
            });
        }
        let dim = points[0].len();
        if dim < 2 {
            return Err(Error::InvalidInput("dimension must be at least 2".into()));
        }
        for p in &points {
            if p.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: p.len(),
                });
            }
            if !linalg::all_finite(p) {
                return Err(Error::NonFinite("curve sample".into()));
            }
        }
        let h = grid[1] - grid[0];
        if !(h.is_finite() && h > 0.0) {
            return Err(Error::NonUniformGrid);
        }
        for i in 1..grid.len() {
            let step = grid[i] - grid[i - 1];
            if (step - h).abs() > 1e-12 * h.abs().max(grid[i].abs()) {
                return Err(Error::NonUniformGrid);
            }
        }
        Ok(Self { dim, grid, points })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn step(&self) -> f64 {
        self.grid[1] - self.grid[0]
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }
}

type CurveFn = Box<dyn Fn(f64) -> Vec<f64> + Send + Sync>;

/// Curve given by a point oracle and optional derivative oracles.
///
/// Missing derivative orders are produced by local sampling and finite
/// differencing at a step balancing truncation against rounding.
pub struct AnalyticCurve {
    dim: usize,
    domain: (f64, f64),
    point: CurveFn,
    derivs: Vec<CurveFn>,
}

impl AnalyticCurve {
    pub fn new(dim: usize, domain: (f64, f64), point: CurveFn) -> Self {
        Self {
            dim,
            domain,
            point,
            derivs: Vec::new(),
        }
    }

    pub fn with_derivatives(
        dim: usize,
        domain: (f64, f64),
        point: CurveFn,
        derivs: Vec<CurveFn>,
    ) -> Self {
        Self {
            dim,
            domain,
            point,
            derivs,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    pub fn point(&self, s: f64) -> Result<Vec<f64>> {
        self.check_domain(s)?;
        let p = (self.point)(s);
        if !linalg::all_finite(&p) {
            return Err(Error::NonFinite(format!("point at {s}")));
        }
        Ok(p)
    }

    fn check_domain(&self, s: f64) -> Result<()> {
        // tolerate endpoint rounding from accumulated grid arithmetic
        let slack = 1e-9 * (self.domain.1 - self.domain.0);
        if s < self.domain.0 - slack || s > self.domain.1 + slack {
            return Err(Error::DomainViolation(format!(
                "{s} outside [{}, {}]",
                self.domain.0, self.domain.1
            )));
        }
        Ok(())
    }

    /// Derivative of the given order (1-based), analytic when an oracle is
    /// available, otherwise by a local Fornberg stencil inside the domain.
    pub fn derivative(&self, order: usize, s: f64) -> Result<Vec<f64>> {
        if order == 0 {
            return self.point(s);
        }
        self.check_domain(s)?;
        if order <= self.derivs.len() {
            let d = (self.derivs[order - 1])(s);
            if !linalg::all_finite(&d) {
                return Err(Error::NonFinite(format!("derivative {order} at {s}")));
            }
            return Ok(d);
        }
        // numeric fallback
        let span = self.domain.1 - self.domain.0;
        let h = span * f64::EPSILON.powf(1.0 / (order + 4) as f64);
        let w = {
            let w = order + 4;
            if w % 2 == 0 {
                w + 1
            } else {
                w
            }
        };
        let half = (w / 2) as f64;
        // shift the window to stay inside the domain
        let mut lo = s - half * h;
        if lo < self.domain.0 {
            lo = self.domain.0;
        }
        if lo + (w - 1) as f64 * h > self.domain.1 {
            lo = self.domain.1 - (w - 1) as f64 * h;
        }
        if lo < self.domain.0 {
            return Err(Error::DomainViolation(format!(
                "domain too short for a numeric derivative of order {order}"
            )));
        }
        let nodes: Vec<f64> = (0..w).map(|j| lo + j as f64 * h).collect();
        let wt = diff::fd_weights(s, &nodes, order);
        let mut out = vec![0.0; self.dim];
        for (j, node) in nodes.iter().enumerate() {
            let p = self.point(*node)?;
            axpy(&mut out, wt[order][j], &p);
        }
        Ok(out)
    }

    /// Uniform sampling of the point oracle.
    pub fn sample_uniform(&self, lo: f64, hi: f64, steps: usize) -> Result<CurveSamples> {
        if steps == 0 {
            return Err(Error::InvalidInput("steps must be at least 1".into()));
        }
        let h = (hi - lo) / steps as f64;
        let grid: Vec<f64> = (0..=steps).map(|i| lo + i as f64 * h).collect();
        let points = grid
            .iter()
            .map(|&s| self.point(s))
            .collect::<Result<Vec<_>>>()?;
        CurveSamples::new(grid, points)
    }
}

/// Frenet frame, curvatures and speed at a single parameter value.
#[derive(Debug, Clone)]
pub struct Apparatus {
    /// Rows e_1 .. e_n, orthonormal with determinant +1.
    pub frame: Vec<Vec<f64>>,
    /// k_1 .. k_{n-1}; all but the last are positive by construction.
    pub curvatures: Vec<f64>,
    pub speed: f64,
}

/// Frenet apparatus from the derivative vectors of orders 1..n.
///
/// The first n-1 must be linearly independent (the twisted condition); the
/// n-th only feeds the signed last curvature.
pub fn frenet_from_derivatives(derivs: &[Vec<f64>]) -> Result<Apparatus> {
    if derivs.is_empty() {
        return Err(Error::InvalidInput("no derivatives".into()));
    }
    let n = derivs[0].len();
    if derivs.len() < n {
        return Err(Error::InvalidInput(format!(
            "need derivatives up to order {n}, got {}",
            derivs.len()
        )));
    }
    let mut frame: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut r_diag = vec![0.0; n];
    for j in 0..n - 1 {
        let d = &derivs[j];
        if d.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: d.len(),
            });
        }
        let scale_ref = norm(d);
        let mut w = d.clone();
        for _ in 0..2 {
            for e in &frame {
                let c = dot(e, &w);
                axpy(&mut w, -c, e);
            }
        }
        let r = norm(&w);
        if r <= RANK_TOL * scale_ref.max(1.0) {
            return Err(Error::RankDeficient(format!(
                "derivatives dependent at order {}",
                j + 1
            )));
        }
        r_diag[j] = r;
        frame.push(scale(&w, 1.0 / r));
    }
    let e_n = complete_orientation(&frame)?;
    r_diag[n - 1] = dot(&derivs[n - 1], &e_n);
    frame.push(e_n);
    let speed = norm(&derivs[0]);
    let curvatures = (0..n - 1)
        .map(|i| r_diag[i + 1] / (r_diag[i] * speed))
        .collect();
    Ok(Apparatus {
        frame,
        curvatures,
        speed,
    })
}

/// Frenet apparatus of an analytic curve at one parameter value.
pub fn frenet_apparatus(curve: &AnalyticCurve, at: f64) -> Result<Apparatus> {
    let n = curve.dim();
    let derivs = (1..=n)
        .map(|k| curve.derivative(k, at))
        .collect::<Result<Vec<_>>>()?;
    frenet_from_derivatives(&derivs)
}

/// Per-sample Frenet apparatus over a grid, with frame-continuity sign
/// fixing across samples.
#[derive(Debug, Clone)]
pub struct FrenetData {
    pub grid: Vec<f64>,
    /// frames[i] holds rows e_1 .. e_n at sample i.
    pub frames: Vec<Vec<Vec<f64>>>,
    /// curvatures[k][i] is k_{k+1} at sample i.
    pub curvatures: Vec<Vec<f64>>,
    pub speeds: Vec<f64>,
    /// Lower-confidence flag (one-sided differencing stencils).
    pub boundary: Vec<bool>,
}

impl FrenetData {
    pub fn dim(&self) -> usize {
        self.frames[0].len()
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    /// Sample indices trusted for statistics: centered stencils only, with
    /// a two-sample margin at each end.
    pub fn interior(&self) -> Vec<usize> {
        let m = self.len();
        (0..m)
            .filter(|&i| i >= 2 && i + 2 < m && !self.boundary[i])
            .collect()
    }
}

fn assemble_profile(
    grid: Vec<f64>,
    mut apparatuses: Vec<Apparatus>,
    boundary: Vec<bool>,
) -> FrenetData {
    let n = apparatuses[0].frame.len();
    // sign-align each frame with its predecessor; Gram-Schmidt has no sign
    // memory, and the Frenet formulae need a continuous frame
    for i in 1..apparatuses.len() {
        let (prev, rest) = apparatuses.split_at_mut(i);
        let prev = &prev[i - 1];
        let cur = &mut rest[0];
        let mut sign = vec![1.0f64; n];
        let mut product = 1.0;
        for j in 1..n - 1 {
            if dot(&prev.frame[j], &cur.frame[j]) < 0.0 {
                sign[j] = -1.0;
                product = -product;
            }
        }
        // e_n flips by the product so the determinant stays +1
        sign[n - 1] = product;
        if sign.iter().any(|s| *s < 0.0) {
            for j in 0..n {
                if sign[j] < 0.0 {
                    for x in cur.frame[j].iter_mut() {
                        *x = -*x;
                    }
                }
            }
            for j in 0..n - 1 {
                cur.curvatures[j] *= sign[j] * sign[j + 1];
            }
        }
    }
    let m = apparatuses.len();
    let mut curvatures = vec![vec![0.0; m]; n - 1];
    let mut speeds = vec![0.0; m];
    let mut frames = Vec::with_capacity(m);
    for (i, ap) in apparatuses.into_iter().enumerate() {
        for k in 0..n - 1 {
            curvatures[k][i] = ap.curvatures[k];
        }
        speeds[i] = ap.speed;
        frames.push(ap.frame);
    }
    FrenetData {
        grid,
        frames,
        curvatures,
        speeds,
        boundary,
    }
}

/// Frenet profile of an analytic curve over an explicit grid.
pub fn curvature_profile(curve: &AnalyticCurve, grid: &[f64]) -> Result<FrenetData> {
    if grid.len() < 2 {
        return Err(Error::TooFewSamples {
            needed: 2,
            got: grid.len(),
        });
    }
    let apparatuses = grid
        .iter()
        .map(|&s| frenet_apparatus(curve, s))
        .collect::<Result<Vec<_>>>()?;
    let boundary = vec![false; grid.len()];
    Ok(assemble_profile(grid.to_vec(), apparatuses, boundary))
}

/// Frenet profile of a sampled curve through the differencing path.
pub fn curvature_profile_samples(samples: &CurveSamples) -> Result<FrenetData> {
    let n = samples.dim();
    let m = samples.len();
    if m < MIN_SAMPLES {
        return Err(Error::TooFewSamples {
            needed: MIN_SAMPLES,
            got: m,
        });
    }
    let h = samples.step();
    let stride = diff::auto_stride(m, h, n);
    let set = diff::derivatives_strided(samples.points(), h, n, stride)?;
    let mut apparatuses = Vec::with_capacity(m);
    for i in 0..m {
        let derivs: Vec<Vec<f64>> = (0..n).map(|k| set.derivs[k][i].clone()).collect();
        apparatuses.push(frenet_from_derivatives(&derivs)?);
    }
    Ok(assemble_profile(
        samples.grid().to_vec(),
        apparatuses,
        set.boundary,
    ))
}

/// Estimated ratio constants c_2 .. c_{n-1} with constancy verdicts.
///
/// The constants follow the band convention c_i = k_i / k_1, so they can
/// be fed straight into the constant-coefficient Frenet matrix; their
/// joint constancy is equivalent to all consecutive quotients
/// k_{i+1}/k_i being constant.
#[derive(Debug, Clone)]
pub struct RatioReport {
    /// Median of the pointwise ratio k_{i+1}/k_1.
    pub ratios: Vec<f64>,
    /// Pointwise ratio profiles over the trusted interior samples.
    pub profiles: Vec<Vec<f64>>,
    /// Relative standard deviation of each profile.
    pub spreads: Vec<f64>,
    pub verdicts: Vec<bool>,
}

impl RatioReport {
    /// True when every consecutive ratio is constant within tolerance.
    /// Vacuously true for planar curves, which have a single curvature.
    pub fn is_ccr(&self) -> bool {
        self.verdicts.iter().all(|v| *v)
    }
}

pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.total_cmp(b));
    let m = v.len();
    if m % 2 == 1 {
        v[m / 2]
    } else {
        0.5 * (v[m / 2 - 1] + v[m / 2])
    }
}

/// Ratio diagnostics at the default constancy tolerance.
pub fn ratio_analysis(data: &FrenetData) -> Result<RatioReport> {
    ratio_analysis_tol(data, CONSTANCY_TOL)
}

pub fn ratio_analysis_tol(data: &FrenetData, tol: f64) -> Result<RatioReport> {
    let n = data.dim();
    let interior = data.interior();
    if interior.is_empty() {
        return Err(Error::TooFewSamples {
            needed: 5,
            got: 0,
        });
    }
    let mut ratios = Vec::new();
    let mut profiles = Vec::new();
    let mut spreads = Vec::new();
    let mut verdicts = Vec::new();
    let denom = &data.curvatures[0];
    for &j in &interior {
        if !(denom[j] > 0.0) {
            return Err(Error::InvalidInput(
                "curvature k_1 crosses zero; ratios undefined".into(),
            ));
        }
    }
    for i in 0..n.saturating_sub(2) {
        let numer = &data.curvatures[i + 1];
        let profile: Vec<f64> = interior.iter().map(|&j| numer[j] / denom[j]).collect();
        let c = median(&profile);
        let mean = profile.iter().sum::<f64>() / profile.len() as f64;
        let var = profile.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>()
            / profile.len() as f64;
        let spread = var.sqrt() / c.abs().max(f64::MIN_POSITIVE);
        verdicts.push(spread < tol);
        spreads.push(spread);
        ratios.push(c);
        profiles.push(profile);
    }
    Ok(RatioReport {
        ratios,
        profiles,
        spreads,
        verdicts,
    })
}

/// Max-norm residual of the Frenet formulae `e' = |a'| K e` at `at`,
/// with the frame derivative taken by five-point differencing.
pub fn frenet_residual(curve: &AnalyticCurve, at: f64) -> Result<f64> {
    let span = curve.domain().1 - curve.domain().0;
    let h = (span * 1e-4).max(1e-8);
    if at - 2.0 * h < curve.domain().0 || at + 2.0 * h > curve.domain().1 {
        return Err(Error::DomainViolation(
            "need a neighborhood of `at` inside the domain".into(),
        ));
    }
    let center = frenet_apparatus(curve, at)?;
    let n = curve.dim();
    let offsets = [-2.0, -1.0, 1.0, 2.0];
    let mut neighbors = Vec::with_capacity(4);
    for o in offsets {
        let mut ap = frenet_apparatus(curve, at + o * h)?;
        // sign-align with the center frame
        for j in 0..n {
            if dot(&ap.frame[j], &center.frame[j]) < 0.0 {
                for x in ap.frame[j].iter_mut() {
                    *x = -*x;
                }
            }
        }
        neighbors.push(ap);
    }
    let mut residual = 0.0f64;
    for j in 0..n {
        // e_j' by the 4th-order central stencil
        let mut deriv = vec![0.0; n];
        let w = [1.0, -8.0, 8.0, -1.0];
        for (idx, ap) in neighbors.iter().enumerate() {
            axpy(&mut deriv, w[idx] / (12.0 * h), &ap.frame[j]);
        }
        // |a'| K e row j
        let mut expect = vec![0.0; n];
        if j > 0 {
            axpy(
                &mut expect,
                -center.speed * center.curvatures[j - 1],
                &center.frame[j - 1],
            );
        }
        if j + 1 < n {
            axpy(
                &mut expect,
                center.speed * center.curvatures[j],
                &center.frame[j + 1],
            );
        }
        for i in 0..n {
            residual = residual.max((deriv[i] - expect[i]).abs());
        }
    }
    Ok(residual)
}

/// Same residual evaluated at one sample of an already-computed profile.
pub fn frenet_residual_data(data: &FrenetData, idx: usize) -> Result<f64> {
    let m = data.len();
    if idx < 2 || idx + 2 >= m {
        return Err(Error::InvalidInput(
            "need two samples on each side of idx".into(),
        ));
    }
    let n = data.dim();
    let h = data.grid[1] - data.grid[0];
    let w = [1.0, -8.0, 8.0, -1.0];
    let neighbors = [idx - 2, idx - 1, idx + 1, idx + 2];
    let mut residual = 0.0f64;
    for j in 0..n {
        let mut deriv = vec![0.0; n];
        for (pos, &i) in neighbors.iter().enumerate() {
            axpy(&mut deriv, w[pos] / (12.0 * h), &data.frames[i][j]);
        }
        let mut expect = vec![0.0; n];
        if j > 0 {
            axpy(
                &mut expect,
                -data.speeds[idx] * data.curvatures[j - 1][idx],
                &data.frames[idx][j - 1],
            );
        }
        if j + 1 < n {
            axpy(
                &mut expect,
                data.speeds[idx] * data.curvatures[j][idx],
                &data.frames[idx][j + 1],
            );
        }
        for i in 0..n {
            residual = residual.max((deriv[i] - expect[i]).abs());
        }
    }
    Ok(residual)
}
