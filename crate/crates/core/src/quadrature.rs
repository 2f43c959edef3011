//! Transverse-plane quadrature rules.
//!
//! Every in-scope integrand is a polynomial times `exp(-2 r^2 / w^2)`, so the
//! rules here are Gaussian rules in the natural variable of that envelope:
//! Gauss-Hermite in `xi = sqrt(2) x / w` per Cartesian axis, or Gauss-Laguerre
//! in `t = 2 r^2 / w^2` combined with a uniform azimuthal rule. Weights are
//! stored "scaled", i.e. with the reciprocal envelope and the Jacobian folded
//! in, so `sum_k weight_k * f(point_k)` approximates `∬ f dx dy` directly.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Default Gauss-Hermite node count per Cartesian axis.
pub const DEFAULT_AXIS_NODES: usize = 64;
/// Default Gauss-Laguerre node count in the radial variable.
pub const DEFAULT_RADIAL_NODES: usize = 128;
/// Default number of uniform azimuthal nodes for polar rules.
pub const DEFAULT_ANGULAR_NODES: usize = 64;

/// Number of transverse dimensions an integrand lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dims {
    One,
    Two,
}

/// Which construction produced a [`Quadrature`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Scheme {
    /// Gauss-Hermite on a single axis (1-D modes).
    GaussHermiteLine { nodes: usize },
    /// Tensor product of Gauss-Hermite rules on both axes.
    GaussHermitePerAxis { nodes: usize },
    /// Gauss-Laguerre in `t = 2 r^2 / w^2` times a uniform azimuthal rule.
    GaussLaguerreRadial { radial: usize, angular: usize },
    /// Explicit nodes and weights.
    TensorGrid,
}

/// Coordinate system of the tensor-product axes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Layout {
    /// `x` only.
    Line,
    /// `(x, y)`.
    Cartesian,
    /// `(r, phi)` with `phi` periodic on `[0, 2 pi)`.
    Polar,
}

/// A one-dimensional rule: sorted nodes and (scaled) weights.
#[derive(Debug, Clone, PartialEq)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Gauss-Hermite nodes for the weight `exp(-x^2)` on the real line.
///
/// Returns nodes in ascending order together with the plain weights and the
/// scaled weights `w_i exp(x_i^2)`. The Newton iteration runs on normalized
/// Hermite functions so nothing overflows for large node counts.
pub fn gauss_hermite(n: usize) -> Result<(Vec<f64>, Vec<f64>, Vec<f64>)> {
    if n == 0 {
        return Err(Error::Quadrature("Gauss-Hermite rule needs at least one node".into()));
    }
    let pim4 = PI.powf(-0.25);
    let nf = n as f64;
    let mut x = vec![0.0; n];
    let mut scaled = vec![0.0; n];
    let half = n.div_ceil(2);
    let mut z = 0.0;
    for i in 0..half {
        z = match i {
            0 => (2.0 * nf + 1.0).sqrt() - 1.85575 * (2.0 * nf + 1.0).powf(-1.0 / 6.0),
            1 => z - 1.14 * nf.powf(0.426) / z,
            2 => 1.86 * z - 0.86 * x[0],
            3 => 1.91 * z - 0.91 * x[1],
            _ => 2.0 * z - x[i - 2],
        };
        let mut pp = 0.0;
        let mut converged = false;
        for _ in 0..100 {
            let mut p1 = pim4 * (-0.5 * z * z).exp();
            let mut p2 = 0.0;
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = z * (2.0 / (jf + 1.0)).sqrt() * p2 - (jf / (jf + 1.0)).sqrt() * p3;
            }
            // polynomial derivative scaled by the envelope; the full
            // Hermite-function derivative adds -z * p1
            pp = (2.0 * nf).sqrt() * p2;
            let dz = p1 / (pp - z * p1);
            z -= dz;
            if converged {
                break;
            }
            if dz.abs() <= 1e-12 * z.abs().max(1.0) {
                converged = true;
            }
        }
        if !converged {
            return Err(Error::Quadrature(format!(
                "Gauss-Hermite Newton iteration did not converge for node {i} of {n}"
            )));
        }
        x[i] = z;
        x[n - 1 - i] = -z;
        let ws = 2.0 / (pp * pp);
        scaled[i] = ws;
        scaled[n - 1 - i] = ws;
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    x.reverse();
    scaled.reverse();
    let plain = x.iter().zip(&scaled).map(|(xi, ws)| ws * (-xi * xi).exp()).collect();
    Ok((x, plain, scaled))
}

/// Gauss-Laguerre nodes for the weight `exp(-t)` on `[0, inf)`.
///
/// Returns ascending nodes, plain weights and scaled weights `w_i exp(t_i)`.
pub fn gauss_laguerre(n: usize) -> Result<(Vec<f64>, Vec<f64>, Vec<f64>)> {
    if n == 0 {
        return Err(Error::Quadrature("Gauss-Laguerre rule needs at least one node".into()));
    }
    let nf = n as f64;
    let mut x = vec![0.0; n];
    let mut scaled = vec![0.0; n];
    let mut z = 0.0;
    for i in 0..n {
        z = match i {
            0 => 3.0 / (1.0 + 2.4 * nf),
            1 => z + 15.0 / (1.0 + 2.5 * nf),
            _ => {
                let ai = (i - 1) as f64;
                z + ((1.0 + 2.55 * ai) / (1.9 * ai)) * (z - x[i - 2])
            }
        };
        let mut converged = false;
        let mut pp = 0.0;
        let mut p2 = 0.0;
        for _ in 0..200 {
            // Laguerre polynomials times exp(-z/2)
            let mut p1 = (-0.5 * z).exp();
            p2 = 0.0;
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = ((2.0 * jf + 1.0 - z) * p2 - jf * p3) / (jf + 1.0);
            }
            pp = nf * (p1 - p2) / z;
            let dz = p1 / (pp - 0.5 * p1);
            z -= dz;
            if converged {
                break;
            }
            // roundoff in the recurrence bounds the attainable step at ~1e-14 z;
            // one more step after reaching 1e-12 lands on it
            if dz.abs() <= 1e-12 * z.abs() {
                converged = true;
            }
        }
        if !converged || !z.is_finite() || (i > 0 && z <= x[i - 1]) {
            return Err(Error::Quadrature(format!(
                "Gauss-Laguerre Newton iteration failed for node {i} of {n}"
            )));
        }
        x[i] = z;
        scaled[i] = -1.0 / (pp * nf * p2);
    }
    let plain = x.iter().zip(&scaled).map(|(t, ws)| ws * (-t).exp()).collect();
    Ok((x, plain, scaled))
}

/// Nodes and weights for integrals over the transverse plane (or a line).
#[derive(Debug, Clone, PartialEq)]
pub struct Quadrature {
    scheme: Scheme,
    layout: Layout,
    first: Rule,
    second: Option<Rule>,
    points: Vec<[f64; 2]>,
    weights: Vec<f64>,
}

impl Quadrature {
    fn assemble(scheme: Scheme, layout: Layout, first: Rule, second: Option<Rule>) -> Self {
        let mut points = Vec::new();
        let mut weights = Vec::new();
        match (&layout, &second) {
            (Layout::Line, _) => {
                points.extend(first.nodes.iter().map(|&x| [x, 0.0]));
                weights.extend_from_slice(&first.weights);
            }
            (Layout::Cartesian, Some(sec)) => {
                for (x, wx) in first.nodes.iter().zip(&first.weights) {
                    for (y, wy) in sec.nodes.iter().zip(&sec.weights) {
                        points.push([*x, *y]);
                        weights.push(wx * wy);
                    }
                }
            }
            (Layout::Polar, Some(sec)) => {
                for (r, wr) in first.nodes.iter().zip(&first.weights) {
                    for (phi, wphi) in sec.nodes.iter().zip(&sec.weights) {
                        points.push([r * phi.cos(), r * phi.sin()]);
                        weights.push(wr * wphi);
                    }
                }
            }
            _ => unreachable!("two-dimensional layouts carry a second rule"),
        }
        Quadrature {
            scheme,
            layout,
            first,
            second,
            points,
            weights,
        }
    }

    /// Gauss-Hermite rule on a line, scaled to the waist `w`.
    pub fn gauss_hermite_line(nodes: usize, waist: f64) -> Result<Self> {
        let rule = hermite_axis(nodes, waist)?;
        Ok(Self::assemble(
            Scheme::GaussHermiteLine { nodes },
            Layout::Line,
            rule,
            None,
        ))
    }

    /// Tensor Gauss-Hermite rule with `nodes` points per axis.
    ///
    /// Exact for `p(x) q(y) exp(-2 (x^2 + y^2) / w^2)` with `deg p, deg q <= 2 nodes - 1`.
    pub fn gauss_hermite_per_axis(nodes: usize, waist: f64) -> Result<Self> {
        let rule = hermite_axis(nodes, waist)?;
        Ok(Self::assemble(
            Scheme::GaussHermitePerAxis { nodes },
            Layout::Cartesian,
            rule.clone(),
            Some(rule),
        ))
    }

    /// Polar rule: Gauss-Laguerre in `t = 2 r^2 / w^2`, uniform in `phi`.
    ///
    /// Exact for `t^m exp(-t) e^{i k phi}` with `m <= 2 radial - 1`, `|k| < angular`.
    pub fn gauss_laguerre_radial(radial: usize, angular: usize, waist: f64) -> Result<Self> {
        check_waist(waist)?;
        if angular == 0 {
            return Err(Error::Quadrature("polar rule needs at least one azimuthal node".into()));
        }
        let (t, _, scaled) = gauss_laguerre(radial)?;
        // r dr = (w^2 / 4) dt
        let jac = waist * waist / 4.0;
        let radial_rule = Rule {
            nodes: t.iter().map(|t| waist * (t / 2.0).sqrt()).collect(),
            weights: scaled.iter().map(|ws| ws * jac).collect(),
        };
        let dphi = 2.0 * PI / angular as f64;
        let angular_rule = Rule {
            nodes: (0..angular).map(|b| b as f64 * dphi).collect(),
            weights: vec![dphi; angular],
        };
        Ok(Self::assemble(
            Scheme::GaussLaguerreRadial { radial, angular },
            Layout::Polar,
            radial_rule,
            Some(angular_rule),
        ))
    }

    /// Explicit tensor grid from one or two axis rules.
    pub fn tensor_grid(x: Rule, y: Option<Rule>) -> Result<Self> {
        for rule in std::iter::once(&x).chain(y.as_ref()) {
            if rule.is_empty() || rule.nodes.len() != rule.weights.len() {
                return Err(Error::Quadrature(
                    "axis rule must be non-empty with one weight per node".into(),
                ));
            }
            if rule.weights.iter().any(|w| !(*w > 0.0) || !w.is_finite()) {
                return Err(Error::Quadrature("weights must be positive and finite".into()));
            }
            if rule.nodes.windows(2).any(|p| !(p[1] > p[0])) {
                return Err(Error::Quadrature("axis nodes must be strictly increasing".into()));
            }
        }
        let layout = if y.is_some() { Layout::Cartesian } else { Layout::Line };
        Ok(Self::assemble(Scheme::TensorGrid, layout, x, y))
    }

    /// Uniform trapezoid grid on `[-extent, extent]` per axis with `points` nodes.
    ///
    /// The end weights are halved; for integrands that have decayed to zero at
    /// the boundary this is spectrally accurate.
    pub fn uniform(dims: Dims, extent: f64, points: usize) -> Result<Self> {
        if points < 2 || !(extent > 0.0) || !extent.is_finite() {
            return Err(Error::Quadrature(
                "uniform grid needs >= 2 points and a positive extent".into(),
            ));
        }
        let h = 2.0 * extent / (points - 1) as f64;
        let nodes: Vec<f64> = (0..points).map(|i| -extent + i as f64 * h).collect();
        let mut weights = vec![h; points];
        weights[0] *= 0.5;
        weights[points - 1] *= 0.5;
        let rule = Rule { nodes, weights };
        match dims {
            Dims::One => Self::tensor_grid(rule, None),
            Dims::Two => Self::tensor_grid(rule.clone(), Some(rule)),
        }
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn layout(&self) -> Layout {
        self.layout
    }

    pub fn dims(&self) -> Dims {
        match self.layout {
            Layout::Line => Dims::One,
            _ => Dims::Two,
        }
    }

    /// Node coordinates `(x, y)`; `y = 0` on a line.
    pub fn points(&self) -> &[[f64; 2]] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// First axis rule (`x`, or `r` for polar layouts).
    pub fn first_axis(&self) -> &Rule {
        &self.first
    }

    /// Second axis rule (`y`, or `phi` for polar layouts).
    pub fn second_axis(&self) -> Option<&Rule> {
        self.second.as_ref()
    }

    /// `sum_k w_k f(x_k, y_k)`.
    pub fn integrate<F: Fn(f64, f64) -> f64>(&self, f: F) -> f64 {
        self.points
            .iter()
            .zip(&self.weights)
            .map(|(p, w)| w * f(p[0], p[1]))
            .sum()
    }

    /// Weighted sum over precomputed node values.
    pub fn sum_values<T>(&self, values: impl IntoIterator<Item = T>) -> T
    where
        T: std::ops::Mul<f64, Output = T> + std::iter::Sum<T>,
    {
        values.into_iter().zip(&self.weights).map(|(v, w)| v * *w).sum()
    }
}

fn check_waist(waist: f64) -> Result<()> {
    if waist > 0.0 && waist.is_finite() {
        Ok(())
    } else {
        Err(Error::Quadrature(format!(
            "waist must be positive and finite, got {waist}"
        )))
    }
}

fn hermite_axis(nodes: usize, waist: f64) -> Result<Rule> {
    check_waist(waist)?;
    let (xi, _, scaled) = gauss_hermite(nodes)?;
    // x = xi w / sqrt 2, envelope exp(-2 x^2 / w^2) = exp(-xi^2)
    let s = waist / std::f64::consts::SQRT_2;
    Ok(Rule {
        nodes: xi.iter().map(|xi| xi * s).collect(),
        weights: scaled.iter().map(|ws| ws * s).collect(),
    })
}
