//! Beam-width mean and variance.
//!
//! Single-mode results go through the Mandel parameter,
//! `<dW^2> = (D00^2 Q + F00) / n`, and the six state-specific closed forms are
//! kept alongside for cross-checking. The general four-operator formula works
//! against a [`MomentProvider`], and bright multimode fields use the
//! linearized amplitude-quadrature result.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::modes::{default_quadrature, Family, TransverseMode};
use crate::moments::{spatial_moment, MomentMatrices};
use crate::optimize::scan_then_golden;
use crate::quadrature::Quadrature;
use crate::states::{PhotonStatistics, SingleModeState};

/// `D00` and `F00` of a single mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeMoments {
    pub d00: f64,
    pub f00: f64,
}

impl ModeMoments {
    pub fn new(d00: f64, f00: f64) -> Result<Self> {
        if !(d00 > 0.0 && f00 > 0.0 && d00.is_finite() && f00.is_finite()) {
            return Err(Error::Degenerate(format!(
                "moments must be positive, got D00={d00}, F00={f00}"
            )));
        }
        Ok(Self { d00, f00 })
    }

    /// Moments on the default quadrature for the mode (or its own grid if sampled).
    pub fn of(mode: &TransverseMode) -> Result<Self> {
        match mode.family() {
            Family::Sampled(s) => Self::with_quadrature(mode, s.quadrature()),
            _ => Self::with_quadrature(mode, &default_quadrature(std::slice::from_ref(mode))?),
        }
    }

    pub fn with_quadrature(mode: &TransverseMode, q: &Quadrature) -> Result<Self> {
        let d00 = spatial_moment(mode, mode, 1, q)?.re;
        let f00 = spatial_moment(mode, mode, 2, q)?.re;
        Self::new(d00, f00)
    }

    /// `rho = D00^2 / F00`, between 0 and 1 by Cauchy-Schwarz.
    pub fn ratio(&self) -> f64 {
        self.d00 * self.d00 / self.f00
    }

    /// `<dW^2>` for the given photon statistics.
    pub fn width_variance(&self, stats: PhotonStatistics) -> Result<f64> {
        let q = stats.mandel_q();
        if q.vacuum {
            return Err(Error::Vacuum);
        }
        Ok((self.d00 * self.d00 * q.value + self.f00) / stats.mean)
    }

    /// Variance relative to a coherent state of equal mean photon number.
    pub fn relative_noise(&self, stats: PhotonStatistics) -> Result<f64> {
        let q = stats.mandel_q();
        if q.vacuum {
            return Err(Error::Vacuum);
        }
        Ok(1.0 + self.ratio() * q.value)
    }

    /// Variance relative to the squared mean width.
    pub fn relative_noise_by_mean(&self, stats: PhotonStatistics) -> Result<f64> {
        Ok(self.width_variance(stats)? / (self.d00 * self.d00))
    }
}

/// `<W> = D00`.
pub fn mean_width(mode: &TransverseMode) -> Result<f64> {
    Ok(ModeMoments::of(mode)?.d00)
}

pub fn single_mode_width_variance(mode: &TransverseMode, state: &SingleModeState) -> Result<f64> {
    ModeMoments::of(mode)?.width_variance(state.statistics())
}

pub fn relative_width_noise(mode: &TransverseMode, state: &SingleModeState) -> Result<f64> {
    ModeMoments::of(mode)?.relative_noise(state.statistics())
}

pub fn relative_noise_by_mean(mode: &TransverseMode, state: &SingleModeState) -> Result<f64> {
    ModeMoments::of(mode)?.relative_noise_by_mean(state.statistics())
}

/// State-specific closed forms of the relative noise, written in terms of
/// `rho = D00^2/F00`, the mean photon number and the state parameters.
pub fn closed_form_relative_noise(state: &SingleModeState, rho: f64) -> Result<f64> {
    let n = state.mean_photon();
    if n == 0.0 {
        return Err(Error::Vacuum);
    }
    let r = match *state {
        SingleModeState::Coherent { .. } => 1.0,
        SingleModeState::Fock { .. } => 1.0 - rho,
        SingleModeState::SqueezedVacuum { .. } => rho * (2.0 * n + 1.0) + 1.0,
        SingleModeState::DisplacedSqueezed { s, .. } => {
            let sh2 = s.sinh().powi(2);
            let e = (-2.0 * s).exp();
            (-sh2 * e + 2.0 * sh2 * (sh2 + 1.0)) * rho / n + 1.0 + rho * (e - 1.0)
        }
        SingleModeState::Thermal { .. } => rho * n + 1.0,
        SingleModeState::DisplacedThermal { n_th, .. } => rho * (2.0 - n_th / n) * n_th + 1.0,
    };
    Ok(r)
}

/// Bright mean field in mode `u0` for the linearized multimode treatment.
#[derive(Debug, Clone, PartialEq)]
pub struct MeanField {
    pub mode: TransverseMode,
    /// `<a0>`, real by choice of phase.
    pub mean_amplitude: f64,
    pub total_photons: f64,
}

impl MeanField {
    pub fn new(mode: TransverseMode, mean_amplitude: f64, total_photons: f64) -> Result<Self> {
        if !(mean_amplitude >= 0.0 && mean_amplitude.is_finite()) {
            return Err(Error::InvalidState(format!(
                "mean amplitude must be >= 0, got {mean_amplitude}"
            )));
        }
        if !(total_photons >= 0.0 && total_photons.is_finite()) {
            return Err(Error::InvalidState(format!(
                "total photon number must be >= 0, got {total_photons}"
            )));
        }
        // allow rounding when <a0>^2 is meant to equal N
        if mean_amplitude * mean_amplitude > total_photons * (1.0 + 1e-12) {
            return Err(Error::InvalidState(format!(
                "<a0>^2 = {} exceeds the total photon number {total_photons}",
                mean_amplitude * mean_amplitude
            )));
        }
        Ok(Self {
            mode,
            mean_amplitude,
            total_photons,
        })
    }

    /// A coherent beam with `n` photons and vacuum in every other mode.
    pub fn coherent(mode: TransverseMode, n: f64) -> Result<Self> {
        Self::new(mode, n.max(0.0).sqrt(), n)
    }
}

/// `<a0>^2 F00 / N^2 * <d^2 X>` with `X = A + A^†` and vacuum variance 1.
pub fn linearized_multimode_variance(mf: &MeanField, f00: f64, x_variance: f64) -> Result<f64> {
    if mf.total_photons <= 0.0 {
        return Err(Error::NoPhotons(mf.total_photons));
    }
    if !(x_variance >= 0.0 && x_variance.is_finite()) {
        return Err(Error::InvalidState(format!(
            "quadrature variance must be >= 0, got {x_variance}"
        )));
    }
    if !(f00 >= 0.0 && f00.is_finite()) {
        return Err(Error::Degenerate(format!("F00 must be >= 0, got {f00}")));
    }
    let a2 = mf.mean_amplitude * mf.mean_amplitude;
    Ok(a2 * f00 / (mf.total_photons * mf.total_photons) * x_variance)
}

/// Normally ordered moments of a multimode state over a basis.
pub trait MomentProvider {
    fn dim(&self) -> usize;

    /// `<a_i^† a_j>`.
    fn second(&self, i: usize, j: usize) -> Complex64;

    /// `<a_i^† a_k^† a_j a_l>`.
    fn fourth(&self, i: usize, k: usize, j: usize, l: usize) -> Complex64;

    /// `<a_i>`.
    fn amplitude(&self, i: usize) -> Complex64;

    /// `<a_i a_j>`.
    fn anomalous(&self, i: usize, j: usize) -> Complex64;

    fn total_photons(&self) -> f64 {
        (0..self.dim()).map(|i| self.second(i, i).re).sum()
    }
}

/// Product of coherent states with amplitudes `alpha_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoherentProduct {
    pub amplitudes: Vec<Complex64>,
}

impl MomentProvider for CoherentProduct {
    fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    fn second(&self, i: usize, j: usize) -> Complex64 {
        self.amplitudes[i].conj() * self.amplitudes[j]
    }

    fn fourth(&self, i: usize, k: usize, j: usize, l: usize) -> Complex64 {
        let a = &self.amplitudes;
        a[i].conj() * a[k].conj() * a[j] * a[l]
    }

    fn amplitude(&self, i: usize) -> Complex64 {
        self.amplitudes[i]
    }

    fn anomalous(&self, i: usize, j: usize) -> Complex64 {
        self.amplitudes[i] * self.amplitudes[j]
    }
}

/// A single-mode state placed in basis slot `index`, vacuum elsewhere.
#[derive(Debug, Clone, PartialEq)]
pub struct SingleModeEmbedding {
    pub state: SingleModeState,
    pub index: usize,
    pub dim: usize,
}

impl SingleModeEmbedding {
    pub fn new(state: SingleModeState, index: usize, dim: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::DimensionMismatch(format!(
                "index {index} outside a basis of {dim}"
            )));
        }
        Ok(Self { state, index, dim })
    }
}

impl MomentProvider for SingleModeEmbedding {
    fn dim(&self) -> usize {
        self.dim
    }

    fn second(&self, i: usize, j: usize) -> Complex64 {
        if i == self.index && j == self.index {
            Complex64::new(self.state.mean_photon(), 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    }

    fn fourth(&self, i: usize, k: usize, j: usize, l: usize) -> Complex64 {
        let m = self.index;
        if i == m && k == m && j == m && l == m {
            Complex64::new(self.state.statistics().second_factorial_moment(), 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    }

    fn amplitude(&self, i: usize) -> Complex64 {
        if i != self.index {
            return Complex64::new(0.0, 0.0);
        }
        let a = match self.state {
            SingleModeState::Coherent { alpha }
            | SingleModeState::DisplacedSqueezed { alpha, .. }
            | SingleModeState::DisplacedThermal { alpha, .. } => alpha,
            _ => 0.0,
        };
        Complex64::new(a, 0.0)
    }

    fn anomalous(&self, i: usize, j: usize) -> Complex64 {
        if i != self.index || j != self.index {
            return Complex64::new(0.0, 0.0);
        }
        let v = match self.state {
            SingleModeState::Coherent { alpha } | SingleModeState::DisplacedThermal { alpha, .. } => alpha * alpha,
            SingleModeState::Fock { .. } | SingleModeState::Thermal { .. } => 0.0,
            // amplitude squeezing: <(da)^2> = -sinh s cosh s
            SingleModeState::SqueezedVacuum { s } => -s.sinh() * s.cosh(),
            SingleModeState::DisplacedSqueezed { alpha, s } => alpha * alpha - s.sinh() * s.cosh(),
        };
        Complex64::new(v, 0.0)
    }
}

/// `(1/N^2) [ sum D_ij D_kl (<a_i^† a_k^† a_j a_l> - <a_i^† a_j><a_k^† a_l>) + sum F_il <a_i^† a_l> ]`.
pub fn general_width_variance(m: &MomentMatrices, p: &dyn MomentProvider) -> Result<f64> {
    let n = m.dim();
    if p.dim() != n {
        return Err(Error::DimensionMismatch(format!(
            "moment provider has {} modes, matrices have {n}",
            p.dim()
        )));
    }
    let total = p.total_photons();
    if !(total > 0.0) {
        return Err(Error::NoPhotons(total));
    }
    let second = DMatrix::from_fn(n, n, |i, j| p.second(i, j));
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            let dij = m.d[(i, j)];
            if dij == Complex64::new(0.0, 0.0) {
                continue;
            }
            for k in 0..n {
                for l in 0..n {
                    let connected = p.fourth(i, k, j, l) - second[(i, j)] * second[(k, l)];
                    acc += dij * m.d[(k, l)] * connected;
                }
            }
        }
    }
    for i in 0..n {
        for l in 0..n {
            acc += m.f[(i, l)] * second[(i, l)];
        }
    }
    Ok(acc.re / (total * total))
}

/// Variance of `X = A + A^†` for the mode operator `A = sum_i conj(c_i) a_i`,
/// where `c_i` are the coefficients of the mode on the basis.
pub fn amplitude_quadrature_variance(coefficients: &[Complex64], p: &dyn MomentProvider) -> Result<f64> {
    let n = p.dim();
    if coefficients.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "{} coefficients for a basis of {n}",
            coefficients.len()
        )));
    }
    let mut mean = Complex64::new(0.0, 0.0);
    let mut number = Complex64::new(0.0, 0.0);
    let mut square = Complex64::new(0.0, 0.0);
    for (i, ci) in coefficients.iter().enumerate() {
        mean += ci.conj() * p.amplitude(i);
        for (j, cj) in coefficients.iter().enumerate() {
            number += ci * cj.conj() * p.second(i, j);
            square += ci.conj() * cj.conj() * p.anomalous(i, j);
        }
    }
    Ok(1.0 + 2.0 * (number.re - mean.norm_sqr()) + 2.0 * (square - mean * mean).re)
}

/// Best displaced squeezed state at a fixed mean photon number.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimalSqueezing {
    pub s: f64,
    pub alpha: f64,
    pub ratio: f64,
}

/// Coarse scan points used before golden-section refinement.
const SQUEEZING_SCAN_STEPS: usize = 400;

/// Minimizes the relative noise over displaced squeezed states with
/// `sinh^2 s + alpha^2 = n`, for a mode with moment ratio `rho`.
pub fn optimal_squeezing_for_ratio(rho: f64, nbar: f64) -> Result<OptimalSqueezing> {
    if !(nbar > 0.0 && nbar.is_finite()) {
        return Err(Error::NoPhotons(nbar));
    }
    let s_max = nbar.sqrt().asinh();
    let alpha_at = |s: f64| (nbar - s.sinh().powi(2)).max(0.0).sqrt();
    let ratio_at = |s: f64| {
        let st = SingleModeState::DisplacedSqueezed { alpha: alpha_at(s), s };
        1.0 + rho * (st.photon_number_variance() / nbar - 1.0)
    };
    let m = scan_then_golden(ratio_at, 0.0, s_max, SQUEEZING_SCAN_STEPS, 1e-10)?;
    Ok(OptimalSqueezing {
        s: m.x,
        alpha: alpha_at(m.x),
        ratio: m.value,
    })
}

pub fn optimal_squeezing(mode: &TransverseMode, nbar: f64) -> Result<OptimalSqueezing> {
    if !(nbar > 0.0 && nbar.is_finite()) {
        return Err(Error::NoPhotons(nbar));
    }
    optimal_squeezing_for_ratio(ModeMoments::of(mode)?.ratio(), nbar)
}
