//! Intrinsic geometry of curves on the unit 3-sphere in R^4: the
//! intrinsic Frenet frame {t, n, b}, the curvature/torsion relations
//! kappa^2 = k1^2 - 1 and tau = k1^2 k2 / kappa^2 to the ambient
//! apparatus, the intrinsic-helix criterion tau = b kappa +- 1, and a
//! harness tying helix status to constant curvature ratios.

use crate::ccr::{self, CcrSpec};
use crate::error::{Error, Result};
use crate::frenet::{self, CurveSamples, FrenetData, RatioReport};
use crate::numkit::linalg::{dot, norm, scale, sub};
use crate::sphere;

/// kappa below this counts as a geodesic point; tau is undefined there.
pub const GEODESIC_TOL: f64 = 1e-5;

/// Relative residual tolerance of the helix fit.
pub const HELIX_TOL: f64 = 1e-4;

/// Generalized cross product in R^4: the unique vector with
/// `det(u, v, w, out) = |out|^2`, i.e. orthogonal to all three inputs
/// with positively oriented span. Degenerate inputs give the zero vector.
pub fn cross4(u: &[f64], v: &[f64], w: &[f64]) -> Vec<f64> {
    debug_assert!(u.len() == 4 && v.len() == 4 && w.len() == 4);
    let minor = |a: usize, b: usize, c: usize| -> f64 {
        u[a] * (v[b] * w[c] - v[c] * w[b]) - u[b] * (v[a] * w[c] - v[c] * w[a])
            + u[c] * (v[a] * w[b] - v[b] * w[a])
    };
    // cofactors of the bottom row of det(u, v, w, x)
    vec![
        -minor(1, 2, 3),
        minor(0, 2, 3),
        -minor(0, 1, 3),
        minor(0, 1, 2),
    ]
}

/// Per-sample intrinsic apparatus of a curve on the unit sphere.
#[derive(Debug, Clone)]
pub struct IntrinsicData {
    pub grid: Vec<f64>,
    /// Intrinsic tangent t = e1.
    pub t: Vec<Vec<f64>>,
    /// Intrinsic normal: tangential part of e2, normalized.
    pub n: Vec<Vec<f64>>,
    /// Intrinsic binormal b with {t, n, b, alpha} positively oriented.
    pub b: Vec<Vec<f64>>,
    /// Intrinsic curvature kappa = sqrt(k1^2 - 1).
    pub kappa: Vec<f64>,
    /// Intrinsic torsion tau = k1^2 k2 / kappa^2; NaN at geodesic points.
    pub tau: Vec<f64>,
    /// True where kappa < tolerance and n, b, tau are undefined.
    pub geodesic: Vec<bool>,
    /// Inherited one-sided-stencil flags from the ambient apparatus.
    pub boundary: Vec<bool>,
}

impl IntrinsicData {
    /// Indices with trustworthy, fully defined values.
    pub fn regular(&self) -> Vec<usize> {
        (0..self.grid.len())
            .filter(|&i| !self.geodesic[i] && !self.boundary[i])
            .collect()
    }
}

/// Computes the intrinsic apparatus from samples on the unit sphere and
/// their ambient Frenet data.
pub fn intrinsic_apparatus(samples: &CurveSamples, data: &FrenetData) -> Result<IntrinsicData> {
    if samples.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            got: samples.dim(),
        });
    }
    let m = samples.len();
    if data.grid.len() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            got: data.grid.len(),
        });
    }
    let worst = samples
        .points()
        .iter()
        .map(|p| (norm(p) - 1.0).abs())
        .fold(0.0f64, f64::max);
    if worst > 1e-6 {
        return Err(Error::DomainViolation(format!(
            "curve leaves the unit sphere by {worst:.2e}"
        )));
    }
    let mut t = Vec::with_capacity(m);
    let mut nn = Vec::with_capacity(m);
    let mut bb = Vec::with_capacity(m);
    let mut kappa = Vec::with_capacity(m);
    let mut tau = Vec::with_capacity(m);
    let mut geodesic = Vec::with_capacity(m);
    for i in 0..m {
        let alpha = &samples.points()[i];
        let e1 = data.frames[i][0].clone();
        let e2 = &data.frames[i][1];
        let k1 = data.curvatures[0][i];
        let k2 = data.curvatures[1][i];
        let kap2 = k1 * k1 - 1.0;
        let kap = kap2.max(0.0).sqrt();
        if kap < GEODESIC_TOL {
            t.push(e1);
            nn.push(vec![0.0; 4]);
            bb.push(vec![0.0; 4]);
            kappa.push(kap.max(0.0));
            tau.push(f64::NAN);
            geodesic.push(true);
            continue;
        }
        // tangential projection of the ambient normal
        let mut raw_n = e2.clone();
        let c = dot(e2, alpha);
        for d in 0..4 {
            raw_n[d] -= c * alpha[d];
        }
        let raw_norm = norm(&raw_n);
        let n_vec = scale(&raw_n, 1.0 / raw_norm);
        let b_raw = cross4(alpha, &e1, &n_vec);
        let b_vec = scale(&b_raw, 1.0 / norm(&b_raw));
        t.push(e1);
        nn.push(n_vec);
        bb.push(b_vec);
        kappa.push(kap);
        tau.push(k1 * k1 * k2 / kap2);
        geodesic.push(false);
    }
    Ok(IntrinsicData {
        grid: data.grid.clone(),
        t,
        n: nn,
        b: bb,
        kappa,
        tau,
        geodesic,
        boundary: data.boundary.clone(),
    })
}

/// Outcome of the intrinsic-helix test.
#[derive(Debug, Clone)]
pub struct HelixVerdict {
    pub is_helix: bool,
    /// Least-squares slope in tau = b kappa +- 1; zero for the tau = 0 branch.
    pub b_estimate: f64,
    /// +1 or -1, the sign branch kept.
    pub sign_branch: f64,
    /// Max fit residual relative to the sup norm of tau (absolute when
    /// tau vanishes identically).
    pub residual: f64,
}

/// Tests the helix condition: tau = 0, or tau = b kappa + sigma for a
/// constant b and a sign sigma. Both branches are fitted and the better
/// one kept; ties break toward +1.
pub fn helix_test(data: &IntrinsicData) -> Result<HelixVerdict> {
    let idx = data.regular();
    if idx.len() < 2 {
        return Err(Error::TooFewSamples {
            needed: 2,
            got: idx.len(),
        });
    }
    let tau_sup = idx.iter().map(|&i| data.tau[i].abs()).fold(0.0f64, f64::max);
    if tau_sup < HELIX_TOL {
        return Ok(HelixVerdict {
            is_helix: true,
            b_estimate: 0.0,
            sign_branch: 1.0,
            residual: tau_sup,
        });
    }
    let mut best: Option<HelixVerdict> = None;
    for sigma in [1.0, -1.0] {
        let mut num = 0.0;
        let mut den = 0.0;
        for &i in &idx {
            num += data.kappa[i] * (data.tau[i] - sigma);
            den += data.kappa[i] * data.kappa[i];
        }
        let b = num / den;
        let residual = idx
            .iter()
            .map(|&i| (data.tau[i] - b * data.kappa[i] - sigma).abs())
            .fold(0.0f64, f64::max)
            / tau_sup;
        let cand = HelixVerdict {
            is_helix: residual < HELIX_TOL,
            b_estimate: b,
            sign_branch: sigma,
            residual,
        };
        let better = match &best {
            None => true,
            Some(old) => residual < old.residual,
        };
        if better {
            best = Some(cand);
        }
    }
    Ok(best.unwrap())
}

/// Joint report: is the curve an intrinsic helix, does it have constant
/// curvature ratios, are its curvature profiles constant, and does
/// (helix and ccr) imply constant curvatures.
#[derive(Debug, Clone)]
pub struct PropositionReport {
    pub helix: HelixVerdict,
    pub ratios: RatioReport,
    pub is_ccr: bool,
    pub curvatures_constant: bool,
    pub implication_holds: bool,
}

/// Runs the full pipeline on spherical curve samples (any center, unit
/// radius): recenters, measures the ambient and intrinsic apparatus,
/// tests the helix condition and checks the implication
/// (helix and ccr) implies constant curvatures.
pub fn proposition_report(samples: &CurveSamples) -> Result<PropositionReport> {
    let (center, radius, rms) = sphere::fit_sphere(samples)?;
    if rms > 1e-5 || (radius - 1.0).abs() > 1e-5 {
        return Err(Error::InvalidInput(format!(
            "input is not a unit-sphere curve (radius {radius:.6}, rms {rms:.2e})"
        )));
    }
    let recentered = CurveSamples::new(
        samples.grid().to_vec(),
        samples.points().iter().map(|p| sub(p, &center)).collect(),
    )?;
    let data = frenet::curvature_profile_samples(&recentered)?;
    let ratios = frenet::ratio_analysis(&data)?;
    let is_ccr = ratios.is_ccr();
    let intr = intrinsic_apparatus(&recentered, &data)?;
    let helix = helix_test(&intr)?;
    let interior = data.interior();
    let curvatures_constant = data.curvatures.iter().all(|prof| {
        let vals: Vec<f64> = interior.iter().map(|&i| prof[i]).collect();
        let mean = vals.iter().sum::<f64>() / vals.len() as f64;
        vals.iter().all(|v| (v - mean).abs() < 1e-3 * mean.abs().max(1.0))
    });
    let implication_holds = !(helix.is_helix && is_ccr) || curvatures_constant;
    Ok(PropositionReport {
        helix,
        ratios,
        is_ccr,
        curvatures_constant,
        implication_holds,
    })
}

/// [`proposition_report`] for a synthesized spec (which must produce a
/// spherical curve).
pub fn proposition_harness(spec: &CcrSpec, steps: usize) -> Result<PropositionReport> {
    let samples = ccr::synthesize(spec, steps)?;
    proposition_report(&samples)
}
