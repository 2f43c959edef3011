//! Single-mode photon statistics.
//!
//! Displacements are real and squeezing acts on the amplitude quadrature, so
//! a displaced squeezed state with `s > 0` has sub-Poissonian number noise
//! once the displacement dominates.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::modes::parse_index;

/// Photon-number mean and variance of a single-mode state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhotonStatistics {
    pub mean: f64,
    pub variance: f64,
}

/// Mandel parameter together with a flag for the `n = 0` convention.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MandelQ {
    pub value: f64,
    /// Set when the mean photon number is zero and `Q = 0` is a convention.
    pub vacuum: bool,
}

impl PhotonStatistics {
    pub fn new(mean: f64, variance: f64) -> Result<Self> {
        if !(mean >= 0.0) || !mean.is_finite() || !(variance >= 0.0) || !variance.is_finite() {
            return Err(Error::InvalidState(format!(
                "photon statistics need mean >= 0 and variance >= 0, got ({mean}, {variance})"
            )));
        }
        Ok(Self { mean, variance })
    }

    /// `Q = <dn^2>/<n> - 1`; zero by convention for the vacuum.
    pub fn mandel_q(&self) -> MandelQ {
        if self.mean == 0.0 {
            MandelQ {
                value: 0.0,
                vacuum: true,
            }
        } else {
            MandelQ {
                value: self.variance / self.mean - 1.0,
                vacuum: false,
            }
        }
    }

    /// Normally ordered second factorial moment `<a^†2 a^2> = <n^2> - <n>`.
    pub fn second_factorial_moment(&self) -> f64 {
        self.variance + self.mean * self.mean - self.mean
    }
}

/// The single-mode state families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SingleModeState {
    Coherent { alpha: f64 },
    Fock { n: u32 },
    SqueezedVacuum { s: f64 },
    DisplacedSqueezed { alpha: f64, s: f64 },
    Thermal { n_th: f64 },
    DisplacedThermal { alpha: f64, n_th: f64 },
}

fn non_negative(name: &str, v: f64) -> Result<f64> {
    if v >= 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(Error::InvalidState(format!("{name} must be finite and >= 0, got {v}")))
    }
}

impl SingleModeState {
    pub fn coherent(alpha: f64) -> Result<Self> {
        Ok(Self::Coherent {
            alpha: non_negative("alpha", alpha)?,
        })
    }

    pub fn fock(n: u32) -> Self {
        Self::Fock { n }
    }

    pub fn squeezed_vacuum(s: f64) -> Result<Self> {
        Ok(Self::SqueezedVacuum {
            s: non_negative("s", s)?,
        })
    }

    pub fn displaced_squeezed(alpha: f64, s: f64) -> Result<Self> {
        Ok(Self::DisplacedSqueezed {
            alpha: non_negative("alpha", alpha)?,
            s: non_negative("s", s)?,
        })
    }

    pub fn thermal(n_th: f64) -> Result<Self> {
        Ok(Self::Thermal {
            n_th: non_negative("n_th", n_th)?,
        })
    }

    pub fn displaced_thermal(alpha: f64, n_th: f64) -> Result<Self> {
        Ok(Self::DisplacedThermal {
            alpha: non_negative("alpha", alpha)?,
            n_th: non_negative("n_th", n_th)?,
        })
    }

    pub fn mean_photon(&self) -> f64 {
        match *self {
            Self::Coherent { alpha } => alpha * alpha,
            Self::Fock { n } => n as f64,
            Self::SqueezedVacuum { s } => s.sinh().powi(2),
            Self::DisplacedSqueezed { alpha, s } => s.sinh().powi(2) + alpha * alpha,
            Self::Thermal { n_th } => n_th,
            Self::DisplacedThermal { alpha, n_th } => n_th + alpha * alpha,
        }
    }

    pub fn photon_number_variance(&self) -> f64 {
        let sq = |s: f64| {
            let sh2 = s.sinh().powi(2);
            2.0 * sh2 * (sh2 + 1.0)
        };
        match *self {
            Self::Coherent { alpha } => alpha * alpha,
            Self::Fock { .. } => 0.0,
            Self::SqueezedVacuum { s } => sq(s),
            Self::DisplacedSqueezed { alpha, s } => alpha * alpha * (-2.0 * s).exp() + sq(s),
            Self::Thermal { n_th } => n_th * (n_th + 1.0),
            Self::DisplacedThermal { alpha, n_th } => n_th * (n_th + 1.0) + alpha * alpha * (1.0 + 2.0 * n_th),
        }
    }

    pub fn statistics(&self) -> PhotonStatistics {
        PhotonStatistics {
            mean: self.mean_photon(),
            variance: self.photon_number_variance(),
        }
    }

    pub fn mandel_q(&self) -> MandelQ {
        self.statistics().mandel_q()
    }

    pub fn family_name(&self) -> &'static str {
        match self {
            Self::Coherent { .. } => "coherent",
            Self::Fock { .. } => "fock",
            Self::SqueezedVacuum { .. } => "sqvac",
            Self::DisplacedSqueezed { .. } => "dispsq",
            Self::Thermal { .. } => "thermal",
            Self::DisplacedThermal { .. } => "dispthermal",
        }
    }
}

impl fmt::Display for SingleModeState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Coherent { alpha } => write!(f, "coherent:{alpha}"),
            Self::Fock { n } => write!(f, "fock:{n}"),
            Self::SqueezedVacuum { s } => write!(f, "sqvac:{s}"),
            Self::DisplacedSqueezed { alpha, s } => write!(f, "dispsq:{alpha},{s}"),
            Self::Thermal { n_th } => write!(f, "thermal:{n_th}"),
            Self::DisplacedThermal { alpha, n_th } => write!(f, "dispthermal:{alpha},{n_th}"),
        }
    }
}

fn parse_real(token: &str, whole: &str, what: &str) -> Result<f64> {
    let v: f64 = token
        .trim()
        .parse()
        .map_err(|_| Error::parse(whole, format!("`{}` is not a valid {what}", token.trim())))?;
    if !(v >= 0.0) || !v.is_finite() {
        return Err(Error::parse(whole, format!("{what} must be finite and >= 0")));
    }
    Ok(v)
}

impl FromStr for SingleModeState {
    type Err = Error;

    /// `coherent:<alpha>`, `fock:<n>`, `sqvac:<s>`, `dispsq:<alpha>,<s>`,
    /// `thermal:<nth>`, `dispthermal:<alpha>,<nth>`.
    fn from_str(s: &str) -> Result<Self> {
        let (kind, args) = s
            .split_once(':')
            .ok_or_else(|| Error::parse(s, "expected <family>:<parameters>"))?;
        let parts: Vec<&str> = args.split(',').collect();
        let want = |n: usize| {
            if parts.len() == n {
                Ok(())
            } else {
                Err(Error::parse(
                    s,
                    format!("expected {n} parameter(s), got {}", parts.len()),
                ))
            }
        };
        let state = match kind.trim().to_ascii_lowercase().as_str() {
            "coherent" => {
                want(1)?;
                Self::Coherent {
                    alpha: parse_real(parts[0], s, "alpha")?,
                }
            }
            "fock" => {
                want(1)?;
                Self::Fock {
                    n: parse_index(parts[0], s, "n")?,
                }
            }
            "sqvac" => {
                want(1)?;
                Self::SqueezedVacuum {
                    s: parse_real(parts[0], s, "s")?,
                }
            }
            "dispsq" => {
                want(2)?;
                Self::DisplacedSqueezed {
                    alpha: parse_real(parts[0], s, "alpha")?,
                    s: parse_real(parts[1], s, "s")?,
                }
            }
            "thermal" => {
                want(1)?;
                Self::Thermal {
                    n_th: parse_real(parts[0], s, "nth")?,
                }
            }
            "dispthermal" => {
                want(2)?;
                Self::DisplacedThermal {
                    alpha: parse_real(parts[0], s, "alpha")?,
                    n_th: parse_real(parts[1], s, "nth")?,
                }
            }
            other => return Err(Error::parse(s, format!("unknown state family `{other}`"))),
        };
        Ok(state)
    }
}
