//! Checks shared by the acceptance runner and the property tests.
//!
//! Every check returns `Ok(summary)` or `Err(reason)` so that the acceptance
//! runner can print one line per criterion without panicking.

#![allow(dead_code)]

use beamwidth::modes::{default_quadrature, TransverseMode};
use beamwidth::moments::{build_matrices, spatial_moment};
use beamwidth::quadrature::Quadrature;
use beamwidth::Complex64;
use nalgebra::DMatrix;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

pub type Check = Result<String, String>;

pub fn hg_basis(max_order: u32, waist: f64) -> Vec<TransverseMode> {
    let mut out = Vec::new();
    for order in 0..=max_order {
        for nx in (0..=order).rev() {
            out.push(TransverseMode::hermite_gauss(nx, order - nx, waist).unwrap());
        }
    }
    out
}

pub fn lg_basis(max_order: u32, waist: f64) -> Vec<TransverseMode> {
    let mut out = Vec::new();
    for order in 0..=max_order {
        let o = order as i32;
        for l in (-o..=o).step_by(2) {
            let p = (order - l.unsigned_abs()) / 2;
            out.push(TransverseMode::laguerre_gauss(l, p, waist).unwrap());
        }
    }
    out
}

pub fn hg1d_basis(max_order: u32, waist: f64) -> Vec<TransverseMode> {
    (0..=max_order)
        .map(|n| TransverseMode::hermite_gauss_1d(n, waist).unwrap())
        .collect()
}

/// Quadrature Gram matrix `<u_i|u_j>`.
pub fn gram(modes: &[TransverseMode], q: &Quadrature) -> DMatrix<Complex64> {
    let w: Vec<f64> = q.weights().iter().map(|w| w.sqrt()).collect();
    let cols: Vec<Vec<Complex64>> = modes
        .iter()
        .map(|m| m.sample(q).unwrap().values().zip(&w).map(|(v, s)| v * *s).collect())
        .collect();
    let s = DMatrix::from_fn(q.len(), modes.len(), |k, i| cols[i][k]);
    s.adjoint() * s
}

pub fn check_orthonormal(name: &str, modes: &[TransverseMode], tol: f64) -> Check {
    let q = default_quadrature(modes).map_err(|e| e.to_string())?;
    let g = gram(modes, &q);
    let n = modes.len();
    let mut worst = (0.0, 0, 0);
    for i in 0..n {
        for j in 0..n {
            let expect = if i == j { 1.0 } else { 0.0 };
            let dev = (g[(i, j)] - expect).norm();
            if dev > worst.0 {
                worst = (dev, i, j);
            }
        }
    }
    if worst.0 <= tol {
        Ok(format!("{name}: {n} modes, max |G - I| = {:.1e}", worst.0))
    } else {
        Err(format!(
            "{name}: <{}|{}> deviates by {:.3e}",
            modes[worst.1], modes[worst.2], worst.0
        ))
    }
}

/// Raw moment integrands over a basis, assembled from one sampling per mode
/// with no symmetrization: `D`, `F`, `D~` (gradient form), `F~`, and `D~`
/// in the second-derivative form `-(1/k^2) ∬ u_i^* ∇^2 u_j`.
pub struct RawMoments {
    pub d: DMatrix<Complex64>,
    pub f: DMatrix<Complex64>,
    pub dtilde: DMatrix<Complex64>,
    pub ftilde: DMatrix<Complex64>,
    pub dtilde_laplacian: DMatrix<Complex64>,
}

pub fn raw_moments(modes: &[TransverseMode], k: f64, q: &Quadrature) -> Result<RawMoments, String> {
    let samples: Vec<_> = modes
        .iter()
        .map(|m| m.sample(q))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    let sw: Vec<f64> = q.weights().iter().map(|w| w.sqrt()).collect();
    let r2: Vec<f64> = q.points().iter().map(|p| p[0] * p[0] + p[1] * p[1]).collect();
    let (nodes, n) = (q.len(), modes.len());
    let column = |f: &dyn Fn(&beamwidth::modes::Jet, usize) -> Complex64| {
        DMatrix::from_fn(nodes, n, |node, i| f(&samples[i].jets[node], node) * sw[node])
    };
    let v = column(&|j, _| j.value);
    let vr2 = column(&|j, node| j.value * r2[node]);
    let gx = column(&|j, _| j.gradient[0]);
    let gy = column(&|j, _| j.gradient[1]);
    let lap = column(&|j, _| j.laplacian);
    let vd = v.adjoint();
    Ok(RawMoments {
        d: &vd * &vr2,
        f: vr2.adjoint() * &vr2,
        dtilde: (gx.adjoint() * &gx + gy.adjoint() * &gy) / Complex64::new(k * k, 0.0),
        ftilde: lap.adjoint() * &lap / Complex64::new(k.powi(4), 0.0),
        dtilde_laplacian: -(&vd * &lap) / Complex64::new(k * k, 0.0),
    })
}

/// Largest `|M_ij - conj(M_ji)|` and `|A_ij - B_ij|`, each measured against
/// the Cauchy-Schwarz scale `sqrt(|S_ii| |S_jj|)` of a reference matrix `S`.
fn scaled_defect(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>, s: &DMatrix<Complex64>) -> f64 {
    let n = a.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let scale = (s[(i, i)].norm() * s[(j, j)].norm()).sqrt().max(f64::MIN_POSITIVE);
            worst = worst.max((a[(i, j)] - b[(i, j)]).norm() / scale);
        }
    }
    worst
}

/// Hermiticity of the raw moment integrands, the equality of the gradient and
/// second-derivative forms of `D~` (Hermiticity of `-∇^2` under the rule), and,
/// for orthonormal sets, agreement of the library matrices with the raw ones.
pub fn check_hermitian(name: &str, modes: &[TransverseMode], k: f64, orthonormal: bool, tol: f64) -> Check {
    let q = default_quadrature(modes).map_err(|e| e.to_string())?;
    let raw = raw_moments(modes, k, &q)?;
    let mut worst = 0.0f64;
    for (m, label) in [
        (&raw.d, "D"),
        (&raw.f, "F"),
        (&raw.dtilde, "D~"),
        (&raw.ftilde, "F~"),
        (&raw.dtilde_laplacian, "D~ (second-derivative form)"),
    ] {
        let defect = scaled_defect(m, &m.adjoint(), m);
        if defect > tol {
            return Err(format!(
                "{name}: {label} Hermiticity defect {defect:.3e} exceeds {tol:.0e}"
            ));
        }
        worst = worst.max(defect);
    }
    let parts = scaled_defect(&raw.dtilde_laplacian, &raw.dtilde, &raw.dtilde);
    if parts > tol {
        return Err(format!(
            "{name}: gradient and second-derivative forms of D~ differ by {parts:.3e}"
        ));
    }
    if !orthonormal {
        return Ok(format!(
            "{name}: {} modes, Hermiticity defect {worst:.1e}, D~ forms {parts:.1e}",
            modes.len()
        ));
    }
    let lib = build_matrices(modes, k, &q).map_err(|e| e.to_string())?;
    let agree = [
        scaled_defect(&lib.d, &raw.d, &raw.d),
        scaled_defect(&lib.f, &raw.f, &raw.f),
        scaled_defect(&lib.dtilde, &raw.dtilde, &raw.dtilde),
        scaled_defect(&lib.ftilde, &raw.ftilde, &raw.ftilde),
    ]
    .into_iter()
    .fold(0.0, f64::max);
    if agree > tol {
        return Err(format!(
            "{name}: library matrices differ from raw integrals by {agree:.3e}"
        ));
    }
    Ok(format!(
        "{name}: {} modes, Hermiticity defect {worst:.1e}, D~ forms {parts:.1e}",
        modes.len()
    ))
}

/// `D00^2 <= F00` and real non-negative diagonals, mode by mode.
pub fn check_cauchy_schwarz(modes: &[TransverseMode]) -> Check {
    let mut tightest = f64::INFINITY;
    for m in modes {
        let q = default_quadrature(std::slice::from_ref(m)).map_err(|e| e.to_string())?;
        let d = spatial_moment(m, m, 1, &q).map_err(|e| e.to_string())?;
        let f = spatial_moment(m, m, 2, &q).map_err(|e| e.to_string())?;
        if d.re < 0.0 || f.re < 0.0 || d.im.abs() > 1e-12 * d.re || f.im.abs() > 1e-12 * f.re {
            return Err(format!("{m}: diagonal moments D00={d}, F00={f} not real non-negative"));
        }
        if d.re * d.re > f.re {
            return Err(format!("{m}: D00^2 = {} > F00 = {}", d.re * d.re, f.re));
        }
        tightest = tightest.min(1.0 - d.re * d.re / f.re);
    }
    Ok(format!("{} modes, smallest 1 - D00^2/F00 = {tightest:.4}", modes.len()))
}

/// `D ~ w^2`, `F ~ w^4`, `D~ ~ w^-2`, `F~ ~ w^-4` between two waists.
pub fn check_scaling(make: &dyn Fn(f64) -> TransverseMode, w1: f64, w2: f64, tol: f64) -> Check {
    let eval = |w: f64| -> Result<[f64; 4], String> {
        let m = make(w);
        let q = default_quadrature(std::slice::from_ref(&m)).map_err(|e| e.to_string())?;
        let mm = build_matrices(std::slice::from_ref(&m), 1.0, &q).map_err(|e| e.to_string())?;
        Ok([
            mm.d[(0, 0)].re,
            mm.f[(0, 0)].re,
            mm.dtilde[(0, 0)].re,
            mm.ftilde[(0, 0)].re,
        ])
    };
    let (a, b) = (eval(w1)?, eval(w2)?);
    let r = w2 / w1;
    let expect = [r * r, r.powi(4), r.powi(-2), r.powi(-4)];
    let label = make(w1).to_string();
    for (i, name) in ["D", "F", "Dtilde", "Ftilde"].iter().enumerate() {
        let got = b[i] / a[i];
        if ((got - expect[i]) / expect[i]).abs() > tol {
            return Err(format!("{label}: {name} ratio {got} vs {}", expect[i]));
        }
    }
    Ok(format!("{label}: scaling exact within {tol:.0e}"))
}

/// Central-difference Laplacian with two Richardson levels (`O(h^6)`).
///
/// The extra level matters near high-charge vortices, where the Laplacian
/// vanishes like `r^(|l|-2)` and an `O(h^4)` stencil loses relative accuracy.
pub fn fd_laplacian(mode: &TransverseMode, x: f64, y: f64, h: f64, two_d: bool) -> Complex64 {
    let f = |x: f64, y: f64| mode.evaluate(x, y);
    let c = f(x, y);
    let stencil = |h: f64| {
        let mut s = f(x + h, y) + f(x - h, y) - 2.0 * c;
        if two_d {
            s += f(x, y + h) + f(x, y - h) - 2.0 * c;
        }
        s / (h * h)
    };
    let (s1, s2, s4) = (stencil(h), stencil(h / 2.0), stencil(h / 4.0));
    let (r1, r2) = ((s2 * 4.0 - s1) / 3.0, (s4 * 4.0 - s2) / 3.0);
    (r2 * 16.0 - r1) / 15.0
}

/// Outer finite-difference step in units of the waist.
pub const FD_STEP: f64 = 4e-3;

/// Laplacian error measured against the local curvature scale
/// `|∇²u| + |∇u|/w + |u|/w^2`. The gradient term sets the stencil roundoff
/// near nodal lines, where `u` and `∇²u` can both be small. Where all three
/// vanish (vortex axis) the scale is floored at `1e-6` of `A/w^2`, with `A`
/// the amplitude scale of a normalized mode.
pub fn laplacian_error(mode: &TransverseMode, x: f64, y: f64) -> f64 {
    let w = mode.waist();
    let two_d = mode.dims() == beamwidth::quadrature::Dims::Two;
    let fd = fd_laplacian(mode, x, y, FD_STEP * w, two_d);
    let an = mode.laplacian(x, y);
    let [gx, gy] = mode.gradient(x, y);
    let grad = (gx.norm_sqr() + gy.norm_sqr()).sqrt();
    let amplitude = if two_d { 1.0 / w } else { 1.0 / w.sqrt() };
    let floor = 1e-6 * amplitude / (w * w);
    let scale = an.norm() + grad / w + mode.evaluate(x, y).norm() / (w * w);
    (an - fd).norm() / scale.max(floor)
}

pub fn mode_strategy() -> impl Strategy<Value = TransverseMode> {
    let w = 0.5..2.0f64;
    prop_oneof![
        (0u32..=8, 0u32..=8, w.clone()).prop_map(|(a, b, w)| TransverseMode::hermite_gauss(a, b, w).unwrap()),
        (0u32..=8, w.clone()).prop_map(|(n, w)| TransverseMode::hermite_gauss_1d(n, w).unwrap()),
        (-8i32..=8, 0u32..=8, w.clone()).prop_map(|(l, p, w)| TransverseMode::laguerre_gauss(l, p, w).unwrap()),
        (0u32..=30, w).prop_map(|(n, w)| TransverseMode::flattened_gaussian(n, w).unwrap()),
    ]
}

/// A mode and a point inside its bright region.
pub fn mode_and_point() -> impl Strategy<Value = (TransverseMode, f64, f64)> {
    (mode_strategy(), 0.0..1.0f64, 0.0..std::f64::consts::TAU).prop_map(|(m, u, phi)| {
        let order = m.polynomial_degree().unwrap_or(0) as f64;
        let r = u * (2.0 + order.sqrt()) * m.waist();
        let (x, y) = if m.dims() == beamwidth::quadrature::Dims::One {
            (r * phi.cos(), 0.0)
        } else {
            (r * phi.cos(), r * phi.sin())
        };
        (m, x, y)
    })
}

/// Deterministic sweep of the Laplacian check over `cases` random points.
pub fn check_laplacian_random(cases: u32, tol: f64) -> Check {
    let mut runner = TestRunner::new_with_rng(
        Config {
            cases,
            failure_persistence: None,
            ..Config::default()
        },
        proptest::test_runner::TestRng::deterministic_rng(proptest::test_runner::RngAlgorithm::ChaCha),
    );
    let worst = std::cell::Cell::new(0.0f64);
    let result = runner.run(&mode_and_point(), |(m, x, y)| {
        let e = laplacian_error(&m, x, y);
        worst.set(worst.get().max(e));
        prop_assert!(e <= tol, "{} at ({}, {}): error {:.3e}", m, x, y, e);
        Ok(())
    });
    match result {
        Ok(()) => Ok(format!("{cases} random points, worst error {:.1e}", worst.get())),
        Err(e) => Err(e.to_string()),
    }
}
