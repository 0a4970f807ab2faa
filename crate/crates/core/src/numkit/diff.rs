//! Finite differencing on uniform grids.
//!
//! Stencil weights come from Fornberg's recurrence, so interior points get
//! symmetric fourth-order stencils and points near the edge get one-sided
//! stencils of the same formal order (flagged as lower-confidence).
//!
//! High derivative orders on very fine grids are dominated by rounding
//! noise; the strided variants evaluate the same stencils on a coarser
//! subgrid (step `stride * h`) around each sample, which is how the curve
//! pipelines keep third and fourth derivatives usable at 1e4 samples.

use crate::error::{Error, Result};

/// Per-sample derivative vectors up to `max_order`.
#[derive(Debug, Clone)]
pub struct DerivativeSet {
    pub max_order: usize,
    /// `derivs[k-1][i]` is the k-th derivative at sample i.
    pub derivs: Vec<Vec<Vec<f64>>>,
    /// True where a one-sided stencil was used (lower confidence).
    pub boundary: Vec<bool>,
    pub stride: usize,
}

/// Fornberg weights: `w[k][j]` multiplies the sample at `nodes[j]` in the
/// k-th derivative approximation at `x0`.
pub fn fd_weights(x0: f64, nodes: &[f64], max_order: usize) -> Vec<Vec<f64>> {
    let n = nodes.len();
    let m = max_order;
    let mut c = vec![vec![0.0f64; n]; m + 1];
    let mut c1 = 1.0;
    let mut c4 = nodes[0] - x0;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = nodes[i] - x0;
        for j in 0..i {
            let c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i] = c1 * (k as f64 * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][j] = (c4 * c[k][j] - k as f64 * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    c
}

/// Window width used for a given derivative order (odd, at least order+4).
fn window(max_order: usize) -> usize {
    let w = max_order + 4;
    if w % 2 == 0 {
        w + 1
    } else {
        w
    }
}

/// Largest stride usable with `len` samples for the given order.
pub fn max_stride(len: usize, max_order: usize) -> usize {
    let w = window(max_order);
    ((len - 1) / (w - 1)).max(1)
}

/// Stride targeting the truncation/rounding noise balance for the highest
/// requested derivative: effective step ~ span * eps^(1/(order+4)).
pub fn auto_stride(len: usize, h: f64, max_order: usize) -> usize {
    auto_stride_for(len, h, max_order, f64::EPSILON)
}

/// [`auto_stride`] for samples whose relative noise floor is `eps` rather
/// than machine epsilon (e.g. profiles that were themselves measured by
/// finite differences).
pub fn auto_stride_for(len: usize, h: f64, max_order: usize, eps: f64) -> usize {
    let span = h * (len - 1) as f64;
    let target = span * eps.powf(1.0 / (max_order + 4) as f64);
    let s = (target / h).round() as usize;
    s.clamp(1, max_stride(len, max_order))
}

/// 4th-order finite differences of vector samples on a uniform grid of
/// step `h`. Needs at least `max_order + 5` samples.
pub fn derivatives(points: &[Vec<f64>], h: f64, max_order: usize) -> Result<DerivativeSet> {
    derivatives_strided(points, h, max_order, 1)
}

/// Same stencils evaluated on the subgrid of step `stride * h`.
pub fn derivatives_strided(
    points: &[Vec<f64>],
    h: f64,
    max_order: usize,
    stride: usize,
) -> Result<DerivativeSet> {
    if max_order == 0 {
        return Err(Error::InvalidInput("max_order must be at least 1".into()));
    }
    let m = points.len();
    if m < max_order + 5 {
        return Err(Error::TooFewSamples {
            needed: max_order + 5,
            got: m,
        });
    }
    if stride == 0 || stride > max_stride(m, max_order) {
        return Err(Error::InvalidInput(format!(
            "stride {stride} out of range for {m} samples"
        )));
    }
    if !(h.is_finite() && h > 0.0) {
        return Err(Error::InvalidInput("grid step must be positive".into()));
    }
    let dim = points[0].len();
    let w = window(max_order);
    let half = w / 2;
    // weights depend only on where the evaluation point sits in the window;
    // a unit-stride table backs the samples that cannot anchor a strided one
    let tables: Vec<Vec<Vec<Vec<f64>>>> = [stride, 1]
        .iter()
        .map(|&st| {
            let nodes: Vec<f64> = (0..w).map(|j| j as f64 * h * st as f64).collect();
            (0..w).map(|p| fd_weights(nodes[p], &nodes, max_order)).collect()
        })
        .collect();

    let mut derivs = vec![vec![vec![0.0; dim]; m]; max_order];
    let mut boundary = vec![false; m];
    for i in 0..m {
        // window anchor must satisfy lo ≡ i (mod st) so the evaluation
        // point falls exactly on a subgrid node
        let r = i % stride;
        let lo_max = m - 1 - (w - 1) * stride;
        let (lo, st, table) = if r <= lo_max {
            let desired = i.saturating_sub(half * stride);
            let mut lo = if desired <= r {
                r
            } else {
                desired - ((desired - r) % stride)
            };
            if lo > lo_max {
                lo = lo_max - ((lo_max - r) % stride);
            }
            (lo, stride, &tables[0])
        } else {
            let lo = i.saturating_sub(half).min(m - w);
            (lo, 1, &tables[1])
        };
        let pos = (i - lo) / st;
        debug_assert_eq!(lo + pos * st, i);
        boundary[i] = pos != half || st != stride;
        let wt = &table[pos];
        for k in 1..=max_order {
            let row = &wt[k];
            let out = &mut derivs[k - 1][i];
            for (j, wj) in row.iter().enumerate() {
                let p = &points[lo + j * st];
                for d in 0..dim {
                    out[d] += wj * p[d];
                }
            }
        }
    }
    Ok(DerivativeSet {
        max_order,
        derivs,
        boundary,
        stride,
    })
}

/// Derivative of a scalar profile on a uniform grid.
pub fn scalar_derivative(
    values: &[f64],
    h: f64,
    order: usize,
    stride: usize,
) -> Result<Vec<f64>> {
    let pts: Vec<Vec<f64>> = values.iter().map(|v| vec![*v]).collect();
    let set = derivatives_strided(&pts, h, order, stride)?;
    Ok(set.derivs[order - 1].iter().map(|v| v[0]).collect())
}
