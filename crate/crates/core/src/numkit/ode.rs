//! Classical fixed-step fourth-order Runge-Kutta integration.

use crate::error::{Error, Result};
use crate::numkit::linalg::all_finite;

/// Integrates `y' = field(t, y)` over `interval` with `steps` equal steps.
///
/// Returns the `steps + 1` states including both endpoints. Deterministic:
/// the same inputs always produce the same trajectory.
pub fn rk4_solve<F>(
    field: F,
    y0: &[f64],
    interval: (f64, f64),
    steps: usize,
) -> Result<Vec<Vec<f64>>>
where
    F: Fn(f64, &[f64]) -> Vec<f64>,
{
    if steps == 0 {
        return Err(Error::InvalidInput("steps must be at least 1".into()));
    }
    if !all_finite(y0) {
        return Err(Error::NonFinite("initial state".into()));
    }
    let (a, b) = interval;
    let h = (b - a) / steps as f64;
    let mut out = Vec::with_capacity(steps + 1);
    out.push(y0.to_vec());
    let mut y = y0.to_vec();
    for i in 0..steps {
        let t = a + i as f64 * h;
        let k1 = field(t, &y);
        let k2 = field(t + 0.5 * h, &step(&y, &k1, 0.5 * h));
        let k3 = field(t + 0.5 * h, &step(&y, &k2, 0.5 * h));
        let k4 = field(t + h, &step(&y, &k3, h));
        for j in 0..y.len() {
            y[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
        if !all_finite(&y) {
            return Err(Error::NonFinite(format!("state after step {}", i + 1)));
        }
        out.push(y.clone());
    }
    Ok(out)
}

fn step(y: &[f64], k: &[f64], h: f64) -> Vec<f64> {
    y.iter().zip(k).map(|(a, b)| a + h * b).collect()
}
