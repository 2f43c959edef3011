//! Spatial and angular moment matrices over a finite mode basis.
//!
//! * `D_ij = ∬ (x^2 + y^2) u_i^* u_j`
//! * `F_il = ∬ (x^2 + y^2)^2 u_i^* u_l`
//! * `D~_ij = (1/k^2) ∬ ∇u_i^* · ∇u_j` (equal to `-(1/k^2) ∬ u_i^* ∇^2 u_j`)
//! * `F~_il = (1/k^4) ∬ (∇^2 u_i)^* ∇^2 u_l`
//!
//! 1-D modes use `x^2` in place of `x^2 + y^2`.

use log::debug;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::modes::{Samples, TransverseMode};
use crate::quadrature::Quadrature;

/// Tolerance on `|<u_i|u_j> - delta_ij|` accepted by [`build_matrices`].
pub const ORTHONORMALITY_TOL: f64 = 1e-8;

fn check_pair(a: &TransverseMode, b: &TransverseMode, q: &Quadrature) -> Result<()> {
    if a.dims() != b.dims() {
        return Err(Error::DimensionMismatch(format!(
            "{a} is {:?} but {b} is {:?}",
            a.dims(),
            b.dims()
        )));
    }
    if a.dims() != q.dims() {
        return Err(Error::DimensionMismatch(format!(
            "modes are {:?} but the quadrature is {:?}",
            a.dims(),
            q.dims()
        )));
    }
    Ok(())
}

fn check_k(k: f64) -> Result<()> {
    if k > 0.0 && k.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidMode(format!(
            "wavenumber must be positive and finite, got {k}"
        )))
    }
}

fn radial_weight(q: &Quadrature, power: u32) -> Vec<f64> {
    q.points()
        .iter()
        .map(|p| (p[0] * p[0] + p[1] * p[1]).powi(power as i32))
        .collect()
}

fn contract_values(a: &Samples, b: &Samples, weight: Option<&[f64]>, q: &Quadrature) -> Complex64 {
    let terms = a.jets.iter().zip(&b.jets).enumerate().map(|(k, (ja, jb))| {
        let w = weight.map_or(1.0, |w| w[k]);
        ja.value.conj() * jb.value * w
    });
    q.sum_values(terms)
}

fn contract_gradients(a: &Samples, b: &Samples, q: &Quadrature) -> Complex64 {
    q.sum_values(
        a.jets
            .iter()
            .zip(&b.jets)
            .map(|(ja, jb)| ja.gradient[0].conj() * jb.gradient[0] + ja.gradient[1].conj() * jb.gradient[1]),
    )
}

fn contract_laplacians(a: &Samples, b: &Samples, q: &Quadrature) -> Complex64 {
    q.sum_values(
        a.jets
            .iter()
            .zip(&b.jets)
            .map(|(ja, jb)| ja.laplacian.conj() * jb.laplacian),
    )
}

/// `∬ (x^2 + y^2)^power u_i^* u_j`; `power` is 1 (`D_ij`) or 2 (`F_ij`).
pub fn spatial_moment(ui: &TransverseMode, uj: &TransverseMode, power: u32, q: &Quadrature) -> Result<Complex64> {
    check_pair(ui, uj, q)?;
    if !(1..=2).contains(&power) {
        return Err(Error::InvalidMode(format!("moment power must be 1 or 2, got {power}")));
    }
    let a = ui.sample(q)?;
    let b = uj.sample(q)?;
    let w = radial_weight(q, power);
    Ok(contract_values(&a, &b, Some(&w), q))
}

/// `D~_ij = (1/k^2) ∬ ∇u_i^* · ∇u_j`.
pub fn angular_moment(ui: &TransverseMode, uj: &TransverseMode, k: f64, q: &Quadrature) -> Result<Complex64> {
    check_pair(ui, uj, q)?;
    check_k(k)?;
    let a = ui.sample(q)?;
    let b = uj.sample(q)?;
    Ok(contract_gradients(&a, &b, q) / (k * k))
}

/// `D~_ij` in the second-derivative form `-(1/k^2) ∬ u_i^* ∇^2 u_j`.
pub fn angular_moment_laplacian_form(
    ui: &TransverseMode,
    uj: &TransverseMode,
    k: f64,
    q: &Quadrature,
) -> Result<Complex64> {
    check_pair(ui, uj, q)?;
    check_k(k)?;
    let a = ui.sample(q)?;
    let b = uj.sample(q)?;
    let s = q.sum_values(
        a.jets
            .iter()
            .zip(&b.jets)
            .map(|(ja, jb)| ja.value.conj() * jb.laplacian),
    );
    Ok(-s / (k * k))
}

/// `F~_il = (1/k^4) ∬ (∇^2 u_i)^* ∇^2 u_l`.
pub fn fourth_angular_moment(ui: &TransverseMode, ul: &TransverseMode, k: f64, q: &Quadrature) -> Result<Complex64> {
    check_pair(ui, ul, q)?;
    check_k(k)?;
    let a = ui.sample(q)?;
    let b = ul.sample(q)?;
    Ok(contract_laplacians(&a, &b, q) / k.powi(4))
}

/// Moment matrices over a basis.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentMatrices {
    pub labels: Vec<String>,
    pub k: f64,
    pub d: DMatrix<Complex64>,
    pub f: DMatrix<Complex64>,
    pub dtilde: DMatrix<Complex64>,
    pub ftilde: DMatrix<Complex64>,
}

impl MomentMatrices {
    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn d00(&self) -> f64 {
        self.d[(0, 0)].re
    }

    pub fn f00(&self) -> f64 {
        self.f[(0, 0)].re
    }

    /// Matrices in the rotated basis `v_a = sum_i U_ia u_i`, i.e. `U^† M U`.
    pub fn rotated(&self, u: &DMatrix<Complex64>) -> Result<Self> {
        if u.nrows() != self.dim() || u.ncols() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "rotation is {}x{} for a basis of {}",
                u.nrows(),
                u.ncols(),
                self.dim()
            )));
        }
        let ud = u.adjoint();
        let labels = (0..self.dim()).map(|a| format!("rot{a}")).collect();
        Ok(Self {
            labels,
            k: self.k,
            d: &ud * &self.d * u,
            f: &ud * &self.f * u,
            dtilde: &ud * &self.dtilde * u,
            ftilde: &ud * &self.ftilde * u,
        })
    }
}

fn hermitize(name: &str, m: &mut DMatrix<Complex64>) -> f64 {
    let adj = m.adjoint();
    let residual = (&*m - &adj).iter().map(|z| z.norm()).fold(0.0, f64::max);
    *m = (&*m + adj) * Complex64::new(0.5, 0.0);
    debug!("{name}: max Hermiticity residual {residual:.3e}");
    residual
}

/// Assembles `D`, `F`, `D~`, `F~` over `basis`.
///
/// Fails on an empty basis or when the quadrature Gram matrix departs from the
/// identity by more than [`ORTHONORMALITY_TOL`]. Each matrix is Hermitized by
/// averaging with its adjoint.
pub fn build_matrices(basis: &[TransverseMode], k: f64, q: &Quadrature) -> Result<MomentMatrices> {
    if basis.is_empty() {
        return Err(Error::EmptyBasis);
    }
    check_k(k)?;
    for m in basis {
        check_pair(&basis[0], m, q)?;
    }
    let samples: Vec<Samples> = basis.iter().map(|m| m.sample(q)).collect::<Result<_>>()?;
    let n = basis.len();
    let r2 = radial_weight(q, 1);
    let r4 = radial_weight(q, 2);

    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    let entries: Vec<[Complex64; 5]> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let (a, b) = (&samples[i], &samples[j]);
            [
                contract_values(a, b, None, q),
                contract_values(a, b, Some(&r2), q),
                contract_values(a, b, Some(&r4), q),
                contract_gradients(a, b, q) / (k * k),
                contract_laplacians(a, b, q) / k.powi(4),
            ]
        })
        .collect();

    for (&(i, j), e) in pairs.iter().zip(&entries) {
        let expected = if i == j { 1.0 } else { 0.0 };
        let dev = (e[0] - expected).norm();
        if dev > ORTHONORMALITY_TOL {
            return Err(Error::NotOrthonormal {
                i: basis[i].label(),
                j: basis[j].label(),
                overlap: e[0].norm(),
                expected,
            });
        }
    }

    let mat = |c: usize| DMatrix::from_fn(n, n, |i, j| entries[i * n + j][c]);
    let mut d = mat(1);
    let mut f = mat(2);
    let mut dtilde = mat(3);
    let mut ftilde = mat(4);
    hermitize("D", &mut d);
    hermitize("F", &mut f);
    hermitize("Dtilde", &mut dtilde);
    hermitize("Ftilde", &mut ftilde);

    Ok(MomentMatrices {
        labels: basis.iter().map(|m| m.label()).collect(),
        k,
        d,
        f,
        dtilde,
        ftilde,
    })
}
