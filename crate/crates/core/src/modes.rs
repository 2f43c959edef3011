//! Normalized transverse mode families at the waist plane.
//!
//! Conventions (waist `w`, all lengths in the same unit):
//!
//! * Hermite-Gauss, per axis:
//!   `u_n(x) = (2/pi)^{1/4} (2^n n! w)^{-1/2} H_n(sqrt(2) x / w) exp(-x^2 / w^2)`
//! * Laguerre-Gauss:
//!   `u_lp ∝ (sqrt(2) r / w)^{|l|} L_p^{|l|}(2 r^2 / w^2) exp(-r^2 / w^2) e^{i l phi}`
//! * Flattened Gaussian of order `N`:
//!   `u_N = A_N exp(-r^2 / w^2) sum_{n=0}^{N} (r^2 / w^2)^n / n!`,
//!   with `A_N` fixed by numerical normalization.
//!
//! Every family is normalized to unit power on the plane (on the line for
//! the 1-D Hermite-Gauss variant).

use std::f64::consts::{PI, SQRT_2};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::quadrature::{
    gauss_laguerre, Dims, Layout, Quadrature, DEFAULT_ANGULAR_NODES, DEFAULT_AXIS_NODES, DEFAULT_RADIAL_NODES,
};
use crate::special::{laguerre, laguerre_derivative, ln_factorial, scaled_hermite_into, truncated_exp};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Mode family and indices.
#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    HermiteGauss { nx: u32, ny: u32 },
    HermiteGauss1D { n: u32 },
    LaguerreGauss { l: i32, p: u32 },
    FlattenedGaussian { order: u32 },
    Sampled(Arc<SampledMode>),
}

/// Value, gradient and Laplacian of a mode at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub value: Complex64,
    pub gradient: [Complex64; 2],
    pub laplacian: Complex64,
}

/// A normalized solution of the paraxial wave equation at `z = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransverseMode {
    family: Family,
    waist: f64,
    amplitude: f64,
}

fn check_waist(waist: f64) -> Result<()> {
    if waist > 0.0 && waist.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidMode(format!(
            "waist must be positive and finite, got {waist}"
        )))
    }
}

impl TransverseMode {
    pub fn hermite_gauss(nx: u32, ny: u32, waist: f64) -> Result<Self> {
        check_waist(waist)?;
        Ok(Self {
            family: Family::HermiteGauss { nx, ny },
            waist,
            amplitude: (2.0 / PI).sqrt() / waist,
        })
    }

    pub fn hermite_gauss_1d(n: u32, waist: f64) -> Result<Self> {
        check_waist(waist)?;
        Ok(Self {
            family: Family::HermiteGauss1D { n },
            waist,
            amplitude: (2.0 / PI).powf(0.25) / waist.sqrt(),
        })
    }

    pub fn laguerre_gauss(l: i32, p: u32, waist: f64) -> Result<Self> {
        check_waist(waist)?;
        let m = l.unsigned_abs() as usize;
        let p_us = p as usize;
        let ln_c = 0.5 * (2f64.ln() + ln_factorial(p_us) - PI.ln() - ln_factorial(p_us + m));
        Ok(Self {
            family: Family::LaguerreGauss { l, p },
            waist,
            amplitude: ln_c.exp() / waist,
        })
    }

    /// Flattened Gaussian of order `order`; the amplitude is fixed by a
    /// Gauss-Laguerre normalization integral that is exact for this family.
    pub fn flattened_gaussian(order: u32, waist: f64) -> Result<Self> {
        check_waist(waist)?;
        let n = order as usize;
        // ∬|u|^2 = A^2 (pi w^2 / 2) ∫ e^{-t} P(t/2)^2 dt
        let (t, w, _) = gauss_laguerre((n + 1).max(DEFAULT_RADIAL_NODES / 2))?;
        let integral: f64 = t
            .iter()
            .zip(&w)
            .map(|(t, w)| {
                let (p, _) = truncated_exp(n, t / 2.0);
                w * p * p
            })
            .sum();
        let norm = integral * PI * waist * waist / 2.0;
        Ok(Self {
            family: Family::FlattenedGaussian { order },
            waist,
            amplitude: 1.0 / norm.sqrt(),
        })
    }

    /// Wraps sampled values; the waist is carried for bookkeeping only.
    pub fn sampled(mode: SampledMode, waist: f64) -> Result<Self> {
        check_waist(waist)?;
        Ok(Self {
            family: Family::Sampled(Arc::new(mode)),
            waist,
            amplitude: 1.0,
        })
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn waist(&self) -> f64 {
        self.waist
    }

    /// Normalization constant multiplying the analytic profile.
    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    pub fn dims(&self) -> Dims {
        match &self.family {
            Family::HermiteGauss1D { .. } => Dims::One,
            Family::Sampled(s) => s.quadrature().dims(),
            _ => Dims::Two,
        }
    }

    /// Same family with a different waist.
    pub fn with_waist(&self, waist: f64) -> Result<Self> {
        match &self.family {
            Family::HermiteGauss { nx, ny } => Self::hermite_gauss(*nx, *ny, waist),
            Family::HermiteGauss1D { n } => Self::hermite_gauss_1d(*n, waist),
            Family::LaguerreGauss { l, p } => Self::laguerre_gauss(*l, *p, waist),
            Family::FlattenedGaussian { .. } => {
                check_waist(waist)?;
                Ok(Self {
                    family: self.family.clone(),
                    waist,
                    amplitude: self.amplitude * self.waist / waist,
                })
            }
            Family::Sampled(_) => Err(Error::InvalidMode("sampled modes cannot be rescaled".into())),
        }
    }

    /// Polynomial degree of the profile in the transverse coordinates; used to
    /// pick quadrature resolution. `None` for sampled modes.
    pub fn polynomial_degree(&self) -> Option<u32> {
        match &self.family {
            Family::HermiteGauss { nx, ny } => Some(nx + ny),
            Family::HermiteGauss1D { n } => Some(*n),
            Family::LaguerreGauss { l, p } => Some(2 * p + l.unsigned_abs()),
            Family::FlattenedGaussian { order } => Some(2 * order),
            Family::Sampled(_) => None,
        }
    }

    /// Largest azimuthal harmonic present in the profile.
    pub fn max_harmonic(&self) -> u32 {
        match &self.family {
            Family::LaguerreGauss { l, .. } => l.unsigned_abs(),
            Family::FlattenedGaussian { .. } => 0,
            _ => self.polynomial_degree().unwrap_or(0),
        }
    }

    /// Normalized complex amplitude at `(x, y)`; `y` is ignored for 1-D modes.
    pub fn evaluate(&self, x: f64, y: f64) -> Complex64 {
        match &self.family {
            Family::Sampled(s) => s.interpolate(x, y),
            _ => self.jet(x, y).value,
        }
    }

    /// Gradient `(∂x u, ∂y u)`; the second entry is zero for 1-D modes.
    pub fn gradient(&self, x: f64, y: f64) -> [Complex64; 2] {
        self.jet(x, y).gradient
    }

    /// `∂x^2 u + ∂y^2 u` (just `∂x^2 u` in 1-D). Analytic for every family
    /// except sampled modes, which fall back to finite differences.
    pub fn laplacian(&self, x: f64, y: f64) -> Complex64 {
        self.jet(x, y).laplacian
    }

    /// Value, gradient and Laplacian together.
    pub fn jet(&self, x: f64, y: f64) -> Jet {
        let w = self.waist;
        match &self.family {
            Family::HermiteGauss1D { n } => {
                let (v, d, dd) = hermite_axis_jet(*n as usize, x, w);
                let a = self.amplitude;
                Jet {
                    value: (a * v).into(),
                    gradient: [(a * d).into(), ZERO],
                    laplacian: (a * dd).into(),
                }
            }
            Family::HermiteGauss { nx, ny } => {
                let (vx, dx, ddx) = hermite_axis_jet(*nx as usize, x, w);
                let (vy, dy, ddy) = hermite_axis_jet(*ny as usize, y, w);
                let a = self.amplitude;
                Jet {
                    value: (a * vx * vy).into(),
                    gradient: [(a * dx * vy).into(), (a * vx * dy).into()],
                    laplacian: (a * (ddx * vy + vx * ddy)).into(),
                }
            }
            Family::LaguerreGauss { l, p } => laguerre_gauss_jet(*l, *p, self.amplitude, w, x, y),
            Family::FlattenedGaussian { order } => {
                let n = *order as usize;
                let s = (x * x + y * y) / (w * w);
                let env = (-s).exp();
                let (poly, last) = truncated_exp(n, s);
                let a = self.amplitude;
                // d/ds [e^{-s} P_N(s)] = -e^{-s} s^N / N!
                let ds = -a * env * last;
                let lap = -a * 4.0 / (w * w) * env * last * (n as f64 + 1.0 - s);
                Jet {
                    value: (a * env * poly).into(),
                    gradient: [(ds * 2.0 * x / (w * w)).into(), (ds * 2.0 * y / (w * w)).into()],
                    laplacian: lap.into(),
                }
            }
            Family::Sampled(s) => s.jet(x, y),
        }
    }

    /// Values, gradients and Laplacians at every node of `q`.
    ///
    /// Sampled modes that live on `q` itself return their stored values.
    pub fn sample(&self, q: &Quadrature) -> Result<Samples> {
        if self.dims() != q.dims() {
            return Err(Error::DimensionMismatch(format!(
                "{} is {:?} but the quadrature is {:?}",
                self,
                self.dims(),
                q.dims()
            )));
        }
        let jets: Vec<Jet> = if let Family::Sampled(s) = &self.family {
            if s.quadrature().as_ref() == q {
                q.points()
                    .iter()
                    .zip(&s.values)
                    .map(|(p, v)| {
                        let mut jet = s.jet(p[0], p[1]);
                        jet.value = *v;
                        jet
                    })
                    .collect()
            } else {
                q.points().iter().map(|p| s.jet(p[0], p[1])).collect()
            }
        } else {
            q.points().par_iter().map(|p| self.jet(p[0], p[1])).collect()
        };
        Ok(Samples { jets })
    }

    /// Label in the command-line mode syntax (`hg:1,0`, `lg:2,1`, ...).
    pub fn label(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for TransverseMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.family {
            Family::HermiteGauss { nx, ny } => write!(f, "hg:{nx},{ny}"),
            Family::HermiteGauss1D { n } => write!(f, "hg1d:{n}"),
            Family::LaguerreGauss { l, p } => write!(f, "lg:{l},{p}"),
            Family::FlattenedGaussian { order } => write!(f, "fg:{order}"),
            Family::Sampled(_) => write!(f, "sampled"),
        }
    }
}

/// `(u, u', u'')` of the unnormalized per-axis Hermite-Gauss factor
/// `h_n(xi) exp(-xi^2 / 2)`, `xi = sqrt(2) x / w`, with `h_n = H_n / sqrt(2^n n!)`.
fn hermite_axis_jet(n: usize, x: f64, w: f64) -> (f64, f64, f64) {
    let xi = SQRT_2 * x / w;
    let mut h = [0.0; 64];
    let mut heap;
    let buf: &mut [f64] = if n + 2 <= h.len() {
        &mut h[..n + 2]
    } else {
        heap = vec![0.0; n + 2];
        &mut heap
    };
    scaled_hermite_into(xi, buf);
    let env = (-0.5 * xi * xi).exp();
    let value = buf[n] * env;
    let lower = if n > 0 {
        (n as f64 / 2.0).sqrt() * buf[n - 1]
    } else {
        0.0
    };
    let upper = ((n as f64 + 1.0) / 2.0).sqrt() * buf[n + 1];
    let d = SQRT_2 / w * (lower - upper) * env;
    let dd = 2.0 / (w * w) * (xi * xi - 2.0 * n as f64 - 1.0) * value;
    (value, d, dd)
}

fn laguerre_gauss_jet(l: i32, p: u32, c: f64, w: f64, x: f64, y: f64) -> Jet {
    let m = l.unsigned_abs() as i32;
    let sgn = if l < 0 { -1.0 } else { 1.0 };
    let zeta = Complex64::new(SQRT_2 * x / w, sgn * SQRT_2 * y / w);
    let t = 2.0 * (x * x + y * y) / (w * w);
    let env = (-0.5 * t).exp();
    let lag = laguerre(p as usize, m as f64, t);
    let dlag = laguerre_derivative(p as usize, m as f64, t);
    let g = lag * env;
    let dg = (dlag - 0.5 * lag) * env;
    let zm = zeta.powi(m);
    let value = c * zm * g;
    let (dzx, dzy) = if m > 0 {
        let zm1 = zeta.powi(m - 1) * (m as f64) * g;
        (zm1 * (SQRT_2 / w), zm1 * Complex64::new(0.0, sgn * SQRT_2 / w))
    } else {
        (ZERO, ZERO)
    };
    let gx = c * (dzx + zm * dg * (4.0 * x / (w * w)));
    let gy = c * (dzy + zm * dg * (4.0 * y / (w * w)));
    let order = 2.0 * p as f64 + m as f64;
    let lap = value * (2.0 / (w * w) * (t - 2.0 * (order + 1.0)));
    Jet {
        value,
        gradient: [gx, gy],
        laplacian: lap,
    }
}

/// Mode jets evaluated on the nodes of a quadrature.
#[derive(Debug, Clone)]
pub struct Samples {
    pub jets: Vec<Jet>,
}

impl Samples {
    pub fn values(&self) -> impl Iterator<Item = Complex64> + '_ {
        self.jets.iter().map(|j| j.value)
    }
}

/// Complex amplitudes stored on the nodes of a quadrature grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledMode {
    quadrature: Arc<Quadrature>,
    values: Vec<Complex64>,
    norm: f64,
}

impl SampledMode {
    /// Wraps node values; `values[k]` belongs to `quadrature.points()[k]`.
    pub fn new(quadrature: Arc<Quadrature>, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != quadrature.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} values for a grid of {} nodes",
                values.len(),
                quadrature.len()
            )));
        }
        let norm = quadrature.sum_values(values.iter().map(|v| v.norm_sqr())).sqrt();
        Ok(Self {
            quadrature,
            values,
            norm,
        })
    }

    /// Samples a function on the quadrature nodes.
    pub fn from_fn(quadrature: Arc<Quadrature>, f: impl Fn(f64, f64) -> Complex64 + Sync) -> Result<Self> {
        let values = quadrature.points().par_iter().map(|p| f(p[0], p[1])).collect();
        Self::new(quadrature, values)
    }

    /// Rescales to unit norm under the companion quadrature.
    pub fn normalized(mut self) -> Result<Self> {
        if !(self.norm > 0.0) || !self.norm.is_finite() {
            return Err(Error::Degenerate(format!(
                "cannot normalize a mode of norm {}",
                self.norm
            )));
        }
        let s = 1.0 / self.norm;
        self.values.iter_mut().for_each(|v| *v *= s);
        self.norm = self
            .quadrature
            .sum_values(self.values.iter().map(|v| v.norm_sqr()))
            .sqrt();
        Ok(self)
    }

    pub fn quadrature(&self) -> &Arc<Quadrature> {
        &self.quadrature
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn norm(&self) -> f64 {
        self.norm
    }

    /// `<self|other>` on the shared grid.
    pub fn inner(&self, other: &SampledMode) -> Result<Complex64> {
        if self.quadrature != other.quadrature {
            return Err(Error::DimensionMismatch("sampled modes live on different grids".into()));
        }
        Ok(self
            .quadrature
            .sum_values(self.values.iter().zip(&other.values).map(|(a, b)| a.conj() * b)))
    }

    /// Multilinear interpolation in the native axes of the grid.
    pub fn interpolate(&self, x: f64, y: f64) -> Complex64 {
        let q = &self.quadrature;
        let first = &q.first_axis().nodes;
        match q.layout() {
            Layout::Line => {
                let (i, t) = bracket(first, x);
                lerp(self.values[i], self.values[(i + 1).min(first.len() - 1)], t)
            }
            Layout::Cartesian | Layout::Polar => {
                let second = &q.second_axis().expect("2-D grid").nodes;
                let ns = second.len();
                let (a, b) = if q.layout() == Layout::Cartesian {
                    (x, y)
                } else {
                    let mut phi = y.atan2(x);
                    if phi < 0.0 {
                        phi += 2.0 * PI;
                    }
                    (x.hypot(y), phi)
                };
                let (i, ti) = bracket(first, a);
                let i1 = (i + 1).min(first.len() - 1);
                let (j, j1, tj) = if q.layout() == Layout::Polar {
                    periodic_bracket(second, b)
                } else {
                    let (j, tj) = bracket(second, b);
                    (j, (j + 1).min(ns - 1), tj)
                };
                let v = |ii: usize, jj: usize| self.values[ii * ns + jj];
                lerp(lerp(v(i, j), v(i, j1), tj), lerp(v(i1, j), v(i1, j1), tj), ti)
            }
        }
    }

    /// Finite-difference jet of the interpolant, step set by the local grid spacing.
    fn jet(&self, x: f64, y: f64) -> Jet {
        let q = &self.quadrature;
        let h = local_spacing(
            &q.first_axis().nodes,
            if q.layout() == Layout::Polar { x.hypot(y) } else { x },
        );
        let f = |x: f64, y: f64| self.interpolate(x, y);
        let value = f(x, y);
        let dxx = (f(x + h, y) - 2.0 * value + f(x - h, y)) / (h * h);
        let dx = (f(x + h, y) - f(x - h, y)) / (2.0 * h);
        if q.dims() == Dims::One {
            return Jet {
                value,
                gradient: [dx, ZERO],
                laplacian: dxx,
            };
        }
        let hy = if q.layout() == Layout::Cartesian {
            local_spacing(&q.second_axis().expect("2-D grid").nodes, y)
        } else {
            h
        };
        let dyy = (f(x, y + hy) - 2.0 * value + f(x, y - hy)) / (hy * hy);
        let dy = (f(x, y + hy) - f(x, y - hy)) / (2.0 * hy);
        Jet {
            value,
            gradient: [dx, dy],
            laplacian: dxx + dyy,
        }
    }
}

fn lerp(a: Complex64, b: Complex64, t: f64) -> Complex64 {
    a + (b - a) * t
}

/// Index `i` with `nodes[i] <= x <= nodes[i+1]` and the fractional position;
/// clamps outside the grid.
fn bracket(nodes: &[f64], x: f64) -> (usize, f64) {
    let n = nodes.len();
    if n == 1 || x <= nodes[0] {
        return (0, 0.0);
    }
    if x >= nodes[n - 1] {
        return (n - 1, 0.0);
    }
    let i = nodes.partition_point(|v| *v <= x) - 1;
    (i, (x - nodes[i]) / (nodes[i + 1] - nodes[i]))
}

fn periodic_bracket(nodes: &[f64], phi: f64) -> (usize, usize, f64) {
    let n = nodes.len();
    let (i, t) = bracket(nodes, phi);
    if phi >= nodes[n - 1] {
        let gap = 2.0 * PI - nodes[n - 1] + nodes[0];
        return (n - 1, 0, (phi - nodes[n - 1]) / gap);
    }
    (i, (i + 1).min(n - 1), t)
}

fn local_spacing(nodes: &[f64], x: f64) -> f64 {
    if nodes.len() < 2 {
        return 1e-3;
    }
    let (i, _) = bracket(nodes, x);
    let i = i.min(nodes.len() - 2);
    nodes[i + 1] - nodes[i]
}

/// `∬ |u|^2` under the given quadrature.
pub fn mode_norm(mode: &TransverseMode, q: &Quadrature) -> Result<f64> {
    let samples = mode.sample(q)?;
    Ok(q.sum_values(samples.values().map(|v| v.norm_sqr())))
}

/// A quadrature that integrates products of the given modes (and their
/// derivatives, times up to `(x^2 + y^2)^2`) exactly.
///
/// 1-D modes get a Gauss-Hermite line rule, pure Hermite-Gauss sets a
/// Cartesian Gauss-Hermite rule and anything else the polar Gauss-Laguerre
/// rule. Node counts never drop below the defaults.
pub fn default_quadrature(modes: &[TransverseMode]) -> Result<Quadrature> {
    default_quadrature_with(modes, DEFAULT_AXIS_NODES, DEFAULT_RADIAL_NODES)
}

/// [`default_quadrature`] with explicit base node counts.
pub fn default_quadrature_with(modes: &[TransverseMode], axis_nodes: usize, radial_nodes: usize) -> Result<Quadrature> {
    let first = modes.first().ok_or(Error::EmptyBasis)?;
    let waist = first.waist();
    if let Some(m) = modes.iter().find(|m| (m.waist() - waist).abs() > 1e-12 * waist) {
        return Err(Error::InvalidMode(format!(
            "all modes must share one waist: {} has {} but {} has {}",
            first,
            waist,
            m,
            m.waist()
        )));
    }
    if modes.iter().any(|m| matches!(m.family(), Family::Sampled(_))) {
        return Err(Error::InvalidMode("sampled modes carry their own quadrature".into()));
    }
    let dims = first.dims();
    if modes.iter().any(|m| m.dims() != dims) {
        return Err(Error::DimensionMismatch("cannot mix 1-D and 2-D modes".into()));
    }
    // highest polynomial degree of a product including r^4 and two derivatives
    let deg = 2 * modes.iter().filter_map(|m| m.polynomial_degree()).max().unwrap_or(0) as usize + 8;
    let exact_nodes = deg / 2 + 1;
    if dims == Dims::One {
        return Quadrature::gauss_hermite_line(axis_nodes.max(exact_nodes), waist);
    }
    let all_hg = modes.iter().all(|m| matches!(m.family(), Family::HermiteGauss { .. }));
    if all_hg {
        Quadrature::gauss_hermite_per_axis(axis_nodes.max(exact_nodes), waist)
    } else {
        let harmonic = 2 * modes.iter().map(|m| m.max_harmonic()).max().unwrap_or(0) as usize + 1;
        // the radial variable is t ∝ r^2, so half the degree suffices
        let radial = radial_nodes.max(deg / 4 + 1);
        Quadrature::gauss_laguerre_radial(radial, DEFAULT_ANGULAR_NODES.max(harmonic + 8), waist)
    }
}

/// Parses the command-line mode syntax: `hg:<nx>,<ny>`, `hg1d:<n>`,
/// `lg:<l>,<p>`, `fg:<N>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeSpec {
    HermiteGauss { nx: u32, ny: u32 },
    HermiteGauss1D { n: u32 },
    LaguerreGauss { l: i32, p: u32 },
    FlattenedGaussian { order: u32 },
}

impl ModeSpec {
    pub fn build(&self, waist: f64) -> Result<TransverseMode> {
        match *self {
            ModeSpec::HermiteGauss { nx, ny } => TransverseMode::hermite_gauss(nx, ny, waist),
            ModeSpec::HermiteGauss1D { n } => TransverseMode::hermite_gauss_1d(n, waist),
            ModeSpec::LaguerreGauss { l, p } => TransverseMode::laguerre_gauss(l, p, waist),
            ModeSpec::FlattenedGaussian { order } => TransverseMode::flattened_gaussian(order, waist),
        }
    }
}

impl fmt::Display for ModeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModeSpec::HermiteGauss { nx, ny } => write!(f, "hg:{nx},{ny}"),
            ModeSpec::HermiteGauss1D { n } => write!(f, "hg1d:{n}"),
            ModeSpec::LaguerreGauss { l, p } => write!(f, "lg:{l},{p}"),
            ModeSpec::FlattenedGaussian { order } => write!(f, "fg:{order}"),
        }
    }
}

pub(crate) fn parse_index<T: FromStr>(token: &str, whole: &str, what: &str) -> Result<T> {
    let t = token.trim();
    if t.starts_with('-') && what != "l" {
        return Err(Error::parse(whole, format!("{what} must be non-negative, got `{t}`")));
    }
    t.parse::<T>()
        .map_err(|_| Error::parse(whole, format!("`{t}` is not a valid {what}")))
}

impl FromStr for ModeSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, args) = s
            .split_once(':')
            .ok_or_else(|| Error::parse(s, "expected <family>:<indices>"))?;
        let parts: Vec<&str> = args.split(',').collect();
        let want = |n: usize| {
            if parts.len() == n {
                Ok(())
            } else {
                Err(Error::parse(s, format!("expected {n} index(es), got {}", parts.len())))
            }
        };
        match kind.trim().to_ascii_lowercase().as_str() {
            "hg" => {
                want(2)?;
                Ok(ModeSpec::HermiteGauss {
                    nx: parse_index(parts[0], s, "nx")?,
                    ny: parse_index(parts[1], s, "ny")?,
                })
            }
            "hg1d" => {
                want(1)?;
                Ok(ModeSpec::HermiteGauss1D {
                    n: parse_index(parts[0], s, "n")?,
                })
            }
            "lg" => {
                want(2)?;
                Ok(ModeSpec::LaguerreGauss {
                    l: parse_index(parts[0], s, "l")?,
                    p: parse_index(parts[1], s, "p")?,
                })
            }
            "fg" => {
                want(1)?;
                Ok(ModeSpec::FlattenedGaussian {
                    order: parse_index(parts[0], s, "order")?,
                })
            }
            other => Err(Error::parse(s, format!("unknown mode family `{other}`"))),
        }
    }
}

/// Splits a comma-separated list of mode specs, e.g. `hg:0,0,hg:2,0,fg:30`.
/// A token that starts with a letter opens a new spec.
pub fn parse_mode_list(s: &str) -> Result<Vec<ModeSpec>> {
    let mut groups: Vec<String> = Vec::new();
    for tok in s.split(',') {
        let t = tok.trim();
        if t.is_empty() {
            return Err(Error::parse(s, "empty entry in mode list"));
        }
        if t.starts_with(|c: char| c.is_ascii_alphabetic()) {
            groups.push(t.to_string());
        } else {
            let last = groups
                .last_mut()
                .ok_or_else(|| Error::parse(t, "mode list must start with a family name"))?;
            last.push(',');
            last.push_str(t);
        }
    }
    groups.iter().map(|g| g.parse()).collect()
}
