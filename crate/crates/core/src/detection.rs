//! Detection modes for the beam width and the angular spread.
//!
//! `v0 = (x^2 + y^2) u0 / sqrt(F00)` is the mode whose amplitude quadrature
//! carries all of the linearized width noise. `m0 = -∇²u0 / (k^2 sqrt(F~00))`
//! plays the same role for the angular spread. Both are stored as samples on a
//! quadrature grid and can be decomposed on analytic bases.

use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::modes::{SampledMode, TransverseMode};
use crate::quadrature::{Dims, Quadrature};

/// Coefficients of a sampled mode on a finite basis.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Decomposition {
    pub basis: Vec<String>,
    #[serde(serialize_with = "serialize_complex")]
    pub coefficients: Vec<Complex64>,
    /// `sum |c_i|^2`.
    pub completeness: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

fn serialize_complex<S: serde::Serializer>(v: &[Complex64], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for z in v {
        seq.serialize_element(&[z.re, z.im])?;
    }
    seq.end()
}

/// Completeness below `1 - COMPLETENESS_TOL` triggers a warning.
pub const COMPLETENESS_TOL: f64 = 1e-6;

/// Coefficients below this fraction of the largest one do not fix the phase.
const PHASE_REFERENCE_FLOOR: f64 = 1e-8;

impl Decomposition {
    pub fn coefficient(&self, label: &str) -> Option<Complex64> {
        self.basis.iter().position(|b| b == label).map(|i| self.coefficients[i])
    }
}

/// Analytic basis families available for decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisFamily {
    HermiteGauss,
    HermiteGauss1D,
    LaguerreGauss,
}

/// All members of a family up to a total order.
///
/// The order is `nx + ny` for HG, `n` for 1-D HG and `2p + |l|` for LG.
/// Members are listed by increasing order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisSpec {
    pub family: BasisFamily,
    pub max_order: u32,
    pub waist: f64,
}

impl BasisSpec {
    pub fn new(family: BasisFamily, max_order: u32, waist: f64) -> Self {
        Self {
            family,
            max_order,
            waist,
        }
    }

    pub fn members(&self) -> Result<Vec<TransverseMode>> {
        let mut out = Vec::new();
        for order in 0..=self.max_order {
            match self.family {
                BasisFamily::HermiteGauss1D => out.push(TransverseMode::hermite_gauss_1d(order, self.waist)?),
                BasisFamily::HermiteGauss => {
                    for nx in (0..=order).rev() {
                        out.push(TransverseMode::hermite_gauss(nx, order - nx, self.waist)?);
                    }
                }
                BasisFamily::LaguerreGauss => {
                    let o = order as i32;
                    for l in (-o..=o).step_by(2) {
                        let p = (order - l.unsigned_abs()) / 2;
                        out.push(TransverseMode::laguerre_gauss(l, p, self.waist)?);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn dims(&self) -> Dims {
        match self.family {
            BasisFamily::HermiteGauss1D => Dims::One,
            _ => Dims::Two,
        }
    }
}

/// Raw overlaps `<u_i|v>` on the grid of `v`.
pub fn project(v: &SampledMode, modes: &[TransverseMode]) -> Result<Vec<Complex64>> {
    let q = v.quadrature();
    modes
        .par_iter()
        .map(|m| {
            let s = m.sample(q)?;
            Ok(q.sum_values(s.values().zip(v.values()).map(|(a, b)| a.conj() * b)))
        })
        .collect()
}

/// Rotates the global phase so that the first coefficient of non-negligible
/// magnitude is real and non-negative.
pub fn fix_phase(coefficients: &mut [Complex64]) {
    let largest = coefficients.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if largest == 0.0 {
        return;
    }
    if let Some(reference) = coefficients.iter().find(|c| c.norm() > PHASE_REFERENCE_FLOOR * largest) {
        let rot = reference.conj() / reference.norm();
        coefficients.iter_mut().for_each(|c| *c *= rot);
    }
}

/// Decomposes `v` on `modes` with the global phase fixed.
pub fn decompose_on_modes(v: &SampledMode, modes: &[TransverseMode]) -> Result<Decomposition> {
    if modes.is_empty() {
        return Err(Error::EmptyBasis);
    }
    let mut coefficients = project(v, modes)?;
    fix_phase(&mut coefficients);
    let completeness = coefficients.iter().map(|c| c.norm_sqr()).sum::<f64>();
    let warning = (completeness < 1.0 - COMPLETENESS_TOL).then(|| {
        format!("basis captures {completeness:.9} of the norm; raise the maximum order for a complete expansion")
    });
    Ok(Decomposition {
        basis: modes.iter().map(|m| m.label()).collect(),
        coefficients,
        completeness,
        warning,
    })
}

/// `c_i = <u_i|v>` over every basis member up to `spec.max_order`.
pub fn decompose_on_basis(v: &SampledMode, spec: &BasisSpec) -> Result<Decomposition> {
    if v.quadrature().dims() != spec.dims() {
        return Err(Error::DimensionMismatch(format!(
            "cannot decompose a {:?} profile on a {:?} basis",
            v.quadrature().dims(),
            spec.dims()
        )));
    }
    decompose_on_modes(v, &spec.members()?)
}

/// `v0 = (x^2 + y^2) u0 / sqrt(F00)`, unit norm on `q` (`x^2 u0` in 1-D).
pub fn width_detection_mode(u0: &TransverseMode, q: &Arc<Quadrature>) -> Result<SampledMode> {
    let samples = u0.sample(q)?;
    let values = q
        .points()
        .iter()
        .zip(samples.values())
        .map(|(p, u)| u * (p[0] * p[0] + p[1] * p[1]))
        .collect();
    SampledMode::new(q.clone(), values)?.normalized()
}

fn check_k(k: f64) -> Result<()> {
    if k > 0.0 && k.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidMode(format!("wavenumber must be positive, got {k}")))
    }
}

/// `m0 = -∇²u0 / (k^2 sqrt(F~00))`, unit norm on `q`.
///
/// `k` cancels after normalization and is only validated.
pub fn angular_detection_mode(u0: &TransverseMode, k: f64, q: &Arc<Quadrature>) -> Result<SampledMode> {
    check_k(k)?;
    let samples = u0.sample(q)?;
    let values = samples.jets.iter().map(|j| -j.laplacian / (k * k)).collect();
    SampledMode::new(q.clone(), values)?.normalized()
}

/// `u0 = coeff0 v0 + coeff1 v1` with `v1` orthogonal to `v0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Residual {
    pub v0: SampledMode,
    pub v1: SampledMode,
    /// `D00 / sqrt(F00)`.
    pub coeff0: f64,
    /// `sqrt(1 - D00^2 / F00)`.
    pub coeff1: f64,
}

/// Smallest `1 - D00^2/F00` accepted before `v1` is considered undefined.
const RESIDUAL_FLOOR: f64 = 1e-12;

pub fn residual_mode(u0: &TransverseMode, q: &Arc<Quadrature>) -> Result<Residual> {
    let v0 = width_detection_mode(u0, q)?;
    let u = SampledMode::new(q.clone(), u0.sample(q)?.values().collect())?;
    let overlap = v0.inner(&u)?;
    let coeff0 = overlap.re;
    let rest = 1.0 - coeff0 * coeff0;
    if !(rest > RESIDUAL_FLOOR) {
        return Err(Error::Degenerate(format!(
            "{u0} is an eigenfunction of the radial weight (1 - D00^2/F00 = {rest:.3e})"
        )));
    }
    let values = u
        .values()
        .iter()
        .zip(v0.values())
        .map(|(a, b)| a - overlap * b)
        .collect();
    let v1 = SampledMode::new(q.clone(), values)?.normalized()?;
    Ok(Residual {
        v0,
        v1,
        coeff0,
        coeff1: rest.sqrt(),
    })
}

/// Which detection mode to evaluate on a profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DetectionKind {
    Width,
    Angular,
}

/// Detection-mode amplitude at arbitrary points, evaluated from the analytic
/// mode and normalized on `q`.
pub fn detection_profile(
    u0: &TransverseMode,
    kind: DetectionKind,
    q: &Quadrature,
    points: &[[f64; 2]],
) -> Result<Vec<Complex64>> {
    let samples = u0.sample(q)?;
    let norm2 = match kind {
        DetectionKind::Width => q.sum_values(
            q.points()
                .iter()
                .zip(samples.values())
                .map(|(p, u)| (p[0] * p[0] + p[1] * p[1]).powi(2) * u.norm_sqr()),
        ),
        DetectionKind::Angular => q.sum_values(samples.jets.iter().map(|j| j.laplacian.norm_sqr())),
    };
    if !(norm2 > 0.0) {
        return Err(Error::Degenerate(format!("{u0} has a vanishing detection mode")));
    }
    let scale = 1.0 / norm2.sqrt();
    Ok(points
        .par_iter()
        .map(|&[x, y]| match kind {
            DetectionKind::Width => u0.evaluate(x, y) * ((x * x + y * y) * scale),
            DetectionKind::Angular => -u0.laplacian(x, y) * scale,
        })
        .collect())
}

/// A local maximum located by parabolic refinement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    pub x: f64,
    pub value: f64,
}

/// Interior local maxima of `values` sampled at increasing `xs`, refined by a
/// parabola through each maximum and its neighbours. Maxima lower than
/// `min_fraction` of the global maximum are dropped.
pub fn profile_peaks(xs: &[f64], values: &[f64], min_fraction: f64) -> Result<Vec<Peak>> {
    if xs.len() != values.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} abscissae for {} values",
            xs.len(),
            values.len()
        )));
    }
    let top = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut peaks = Vec::new();
    for i in 1..values.len().saturating_sub(1) {
        let (a, b, c) = (values[i - 1], values[i], values[i + 1]);
        if !(b > a && b >= c) || b < min_fraction * top {
            continue;
        }
        let (x0, x1, x2) = (xs[i - 1], xs[i], xs[i + 1]);
        // vertex of the interpolating parabola
        let d1 = (b - a) / (x1 - x0);
        let d2 = (c - b) / (x2 - x1);
        let curv = (d2 - d1) / (x2 - x0);
        let peak = if curv < 0.0 {
            let x = 0.5 * (x0 + x1) - d1 / (2.0 * curv);
            let x = x.clamp(x0, x2);
            let value = b + d1 * (x - x1) + curv * (x - x0) * (x - x1);
            Peak { x, value }
        } else {
            Peak { x: x1, value: b }
        };
        peaks.push(peak);
    }
    Ok(peaks)
}
