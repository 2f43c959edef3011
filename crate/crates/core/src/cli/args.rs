//! Command-line configuration.

use std::f64::consts::LN_2;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::detection::BasisFamily;
use crate::error::{Error, Result};
use crate::modes::{parse_index, parse_mode_list, ModeSpec};
use crate::states::{PhotonStatistics, SingleModeState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Normalize {
    /// Relative to a coherent state with the same mean photon number.
    #[default]
    Coherent,
    /// Relative to the squared mean width.
    Mean,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Figure {
    /// Relative width noise of the fundamental Gaussian against the mean photon number.
    Fig2a,
    /// Coherent-state noise over the squared mean width for LG modes with p = 0.
    Fig2b,
    /// 1-D fundamental Gaussian and its width detection mode.
    Fig3a,
    /// Flattened Gaussian of order 30 and its width detection mode, cut along x.
    Fig3b,
}

/// Comma-separated mode list such as `hg:0,0,hg:2,0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModeList(pub Vec<ModeSpec>);

impl FromStr for ModeList {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_mode_list(s).map(ModeList)
    }
}

impl fmt::Display for ModeList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|m| m.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

/// Evenly spaced mean photon numbers, `start:stop:count` with both ends included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NbarRange {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl NbarRange {
    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let h = (self.stop - self.start) / (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                if i + 1 == self.count {
                    self.stop
                } else {
                    self.start + h * i as f64
                }
            })
            .collect()
    }
}

impl FromStr for NbarRange {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::parse(s, "expected <start>:<stop>:<count>"));
        }
        let num = |t: &str, what: &str| -> Result<f64> {
            let v: f64 = t
                .trim()
                .parse()
                .map_err(|_| Error::parse(s, format!("`{t}` is not a valid {what}")))?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(Error::parse(s, format!("{what} must be finite")))
            }
        };
        let count: usize = parse_index(parts[2], s, "count")?;
        if count == 0 {
            return Err(Error::parse(s, "count must be at least 1"));
        }
        Ok(Self {
            start: num(parts[0], "start")?,
            stop: num(parts[1], "stop")?,
            count,
        })
    }
}

impl fmt::Display for NbarRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.start, self.stop, self.count)
    }
}

/// State family evaluated at a swept mean photon number.
///
/// `dispthermal:<nth>` caps the thermal part at the mean photon number and
/// `dispsq:<s>` caps the squeezing at `sinh^2 s = n`, so that the displacement
/// stays real at small `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StateTemplate {
    Coherent,
    /// Number-state statistics (`Q = -1`) at mean `n`.
    Fock,
    SqueezedVacuum,
    Thermal,
    DisplacedThermal {
        n_th: f64,
    },
    DisplacedSqueezed {
        s: f64,
    },
}

impl StateTemplate {
    /// The squeezing that halves the amplitude-quadrature variance.
    pub const MINUS_3DB: f64 = LN_2 / 2.0;

    pub fn statistics(&self, nbar: f64) -> Result<PhotonStatistics> {
        if !(nbar >= 0.0 && nbar.is_finite()) {
            return Err(Error::InvalidState(format!(
                "mean photon number must be >= 0, got {nbar}"
            )));
        }
        let state = match *self {
            StateTemplate::Fock => return PhotonStatistics::new(nbar, 0.0),
            StateTemplate::Coherent => SingleModeState::coherent(nbar.sqrt())?,
            StateTemplate::SqueezedVacuum => SingleModeState::squeezed_vacuum(nbar.sqrt().asinh())?,
            StateTemplate::Thermal => SingleModeState::thermal(nbar)?,
            StateTemplate::DisplacedThermal { n_th } => {
                let n_th = n_th.min(nbar);
                SingleModeState::displaced_thermal((nbar - n_th).max(0.0).sqrt(), n_th)?
            }
            StateTemplate::DisplacedSqueezed { s } => {
                let s = s.min(nbar.sqrt().asinh());
                SingleModeState::displaced_squeezed((nbar - s.sinh().powi(2)).max(0.0).sqrt(), s)?
            }
        };
        Ok(state.statistics())
    }
}

impl FromStr for StateTemplate {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let (kind, arg) = match s.split_once(':') {
            Some((k, a)) => (k.trim(), Some(a.trim())),
            None => (s.trim(), None),
        };
        let param = |what: &str| -> Result<f64> {
            let a = arg.ok_or_else(|| Error::parse(s, format!("`{kind}` needs a {what} parameter")))?;
            let v: f64 = a
                .parse()
                .map_err(|_| Error::parse(s, format!("`{a}` is not a valid {what}")))?;
            if v >= 0.0 && v.is_finite() {
                Ok(v)
            } else {
                Err(Error::parse(s, format!("{what} must be finite and >= 0")))
            }
        };
        let none = || match arg {
            None => Ok(()),
            Some(_) => Err(Error::parse(s, format!("`{kind}` takes no parameter in a sweep"))),
        };
        Ok(match kind.to_ascii_lowercase().as_str() {
            "coherent" => none().map(|_| StateTemplate::Coherent)?,
            "fock" => none().map(|_| StateTemplate::Fock)?,
            "sqvac" => none().map(|_| StateTemplate::SqueezedVacuum)?,
            "thermal" => none().map(|_| StateTemplate::Thermal)?,
            "dispthermal" => StateTemplate::DisplacedThermal { n_th: param("nth")? },
            "dispsq" => StateTemplate::DisplacedSqueezed { s: param("s")? },
            other => return Err(Error::parse(s, format!("unknown state family `{other}`"))),
        })
    }
}

impl fmt::Display for StateTemplate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateTemplate::Coherent => f.write_str("coherent"),
            StateTemplate::Fock => f.write_str("fock"),
            StateTemplate::SqueezedVacuum => f.write_str("sqvac"),
            StateTemplate::Thermal => f.write_str("thermal"),
            StateTemplate::DisplacedThermal { n_th } => write!(f, "dispthermal:{n_th}"),
            StateTemplate::DisplacedSqueezed { s } => write!(f, "dispsq:{s}"),
        }
    }
}

/// Comma-separated list of [`StateTemplate`]s.
#[derive(Debug, Clone, PartialEq)]
pub struct TemplateList(pub Vec<StateTemplate>);

impl FromStr for TemplateList {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let list: Vec<StateTemplate> = s.split(',').map(str::parse).collect::<Result<_>>()?;
        Ok(TemplateList(list))
    }
}

impl fmt::Display for TemplateList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|t| t.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

/// Decomposition target `hg:<max_order>`, `hg1d:<max_order>` or `lg:<max_order>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DecomposeSpec {
    pub family: BasisFamily,
    pub max_order: u32,
}

impl FromStr for DecomposeSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let (kind, order) = s
            .split_once(':')
            .ok_or_else(|| Error::parse(s, "expected hg:<n>, hg1d:<n> or lg:<n>"))?;
        let family = match kind.trim().to_ascii_lowercase().as_str() {
            "hg" => BasisFamily::HermiteGauss,
            "hg1d" => BasisFamily::HermiteGauss1D,
            "lg" => BasisFamily::LaguerreGauss,
            other => return Err(Error::parse(s, format!("unknown basis family `{other}`"))),
        };
        Ok(Self {
            family,
            max_order: parse_index(order, s, "max order")?,
        })
    }
}

impl fmt::Display for DecomposeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.family {
            BasisFamily::HermiteGauss => "hg",
            BasisFamily::HermiteGauss1D => "hg1d",
            BasisFamily::LaguerreGauss => "lg",
        };
        write!(f, "{kind}:{}", self.max_order)
    }
}

/// Quantum noise in the width of paraxial beams.
#[derive(Debug, Clone, PartialEq, Parser)]
#[command(name = "beamwidth", version, about, propagate_version = true)]
pub struct RunConfig {
    /// Beam waist w (length unit of all output).
    #[arg(long, global = true, default_value_t = 1.0)]
    pub waist: f64,

    /// Output format; `moments` defaults to json, everything else to csv.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Output file (stdout when absent).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Base Gauss-Hermite nodes per axis.
    #[arg(long, global = true, env = "BEAMWIDTH_AXIS_NODES")]
    pub axis_nodes: Option<usize>,

    /// Base Gauss-Laguerre radial nodes.
    #[arg(long, global = true, env = "BEAMWIDTH_RADIAL_NODES")]
    pub radial_nodes: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, PartialEq, Subcommand)]
pub enum Command {
    /// Moment matrices D, F, D~, F~ over a basis.
    Moments(MomentsArgs),
    /// Width noise of one mode in one state.
    Noise(NoiseArgs),
    /// Width noise against the mean photon number for several state families.
    Sweep(SweepArgs),
    /// Width (or angular) detection mode profile, optionally decomposed.
    DetectionMode(DetectionArgs),
    /// Displaced squeezed state with the lowest width noise at fixed photon number.
    OptimizeSqueezing(OptimizeArgs),
    /// Data behind the published figures.
    ///
    /// fig2a uses dispthermal with 2 thermal photons and an amplitude-squeezed
    /// state at -3 dB (exp(-2s) = 1/2) whose displacement fills up the mean
    /// photon number; below the cap both fall back to pure thermal or squeezed
    /// vacuum. fig2b needs an explicit mean photon number (default 1).
    Figure(FigureArgs),
}

#[derive(Debug, Clone, PartialEq, Args)]
pub struct MomentsArgs {
    /// Basis, e.g. `hg:0,0,hg:2,0,hg:0,2`.
    #[arg(long)]
    pub basis: ModeList,
    /// Wavenumber for the angular moments.
    #[arg(long, default_value_t = 1.0)]
    pub k: f64,
    /// Base node count for both axis and radial rules.
    #[arg(long)]
    pub nodes: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Args)]
pub struct NoiseArgs {
    #[arg(long)]
    pub mode: ModeSpec,
    #[arg(long)]
    pub state: SingleModeState,
    #[arg(long, value_enum, default_value_t = Normalize::Coherent)]
    pub normalize: Normalize,
}

#[derive(Debug, Clone, PartialEq, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub mode: ModeSpec,
    /// Families: coherent, fock, sqvac, thermal, dispthermal:<nth>, dispsq:<s>.
    #[arg(long)]
    pub states: TemplateList,
    /// `<start>:<stop>:<count>`.
    #[arg(long)]
    pub nbar: NbarRange,
    #[arg(long, value_enum, default_value_t = Normalize::Coherent)]
    pub normalize: Normalize,
}

#[derive(Debug, Clone, PartialEq, Args)]
pub struct DetectionArgs {
    #[arg(long)]
    pub mode: ModeSpec,
    /// Angular-spread detection mode instead of the width detection mode.
    #[arg(long)]
    pub angular: bool,
    /// Basis for decomposition: `hg:<n>`, `hg1d:<n>` or `lg:<n>`.
    #[arg(long)]
    pub decompose: Option<DecomposeSpec>,
    /// Decomposition output (defaults to `<out>.decomposition.json`, or stderr).
    #[arg(long)]
    pub sidecar: Option<PathBuf>,
    #[arg(long, default_value_t = 1.0)]
    pub k: f64,
    /// Profile points per axis.
    #[arg(long)]
    pub points: Option<usize>,
    /// Half-width of the profile window; derived from the mode when absent.
    #[arg(long)]
    pub extent: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Args)]
pub struct OptimizeArgs {
    #[arg(long)]
    pub mode: ModeSpec,
    #[arg(long)]
    pub nbar: f64,
}

#[derive(Debug, Clone, PartialEq, Args)]
pub struct FigureArgs {
    #[arg(value_enum)]
    pub figure: Figure,
    /// fig2a: `<start>:<stop>:<count>` (default 0.1:20:200); fig2b: a single value (default 1).
    #[arg(long)]
    pub nbar: Option<String>,
    /// fig2b: largest azimuthal index.
    #[arg(long, default_value_t = 10)]
    pub lmax: u32,
    /// fig3a/fig3b: profile points.
    #[arg(long)]
    pub points: Option<usize>,
}

impl RunConfig {
    /// Command line that parses back to an equal config.
    pub fn to_args(&self) -> Vec<String> {
        let mut a = vec!["beamwidth".to_string()];
        let mut push = |k: &str, v: String| {
            a.push(k.to_string());
            a.push(v);
        };
        push("--waist", self.waist.to_string());
        if let Some(f) = self.format {
            push("--format", value_name(f));
        }
        if let Some(p) = &self.out {
            push("--out", p.display().to_string());
        }
        if let Some(n) = self.axis_nodes {
            push("--axis-nodes", n.to_string());
        }
        if let Some(n) = self.radial_nodes {
            push("--radial-nodes", n.to_string());
        }
        match &self.command {
            Command::Moments(m) => {
                a.push("moments".into());
                a.extend(["--basis".into(), m.basis.to_string(), "--k".into(), m.k.to_string()]);
                if let Some(n) = m.nodes {
                    a.extend(["--nodes".into(), n.to_string()]);
                }
            }
            Command::Noise(n) => {
                a.push("noise".into());
                a.extend([
                    "--mode".into(),
                    n.mode.to_string(),
                    "--state".into(),
                    n.state.to_string(),
                    "--normalize".into(),
                    value_name(n.normalize),
                ]);
            }
            Command::Sweep(s) => {
                a.push("sweep".into());
                a.extend([
                    "--mode".into(),
                    s.mode.to_string(),
                    "--states".into(),
                    s.states.to_string(),
                    "--nbar".into(),
                    s.nbar.to_string(),
                    "--normalize".into(),
                    value_name(s.normalize),
                ]);
            }
            Command::DetectionMode(d) => {
                a.push("detection-mode".into());
                a.extend(["--mode".into(), d.mode.to_string(), "--k".into(), d.k.to_string()]);
                if d.angular {
                    a.push("--angular".into());
                }
                if let Some(spec) = d.decompose {
                    a.extend(["--decompose".into(), spec.to_string()]);
                }
                if let Some(p) = &d.sidecar {
                    a.extend(["--sidecar".into(), p.display().to_string()]);
                }
                if let Some(n) = d.points {
                    a.extend(["--points".into(), n.to_string()]);
                }
                if let Some(e) = d.extent {
                    a.extend(["--extent".into(), e.to_string()]);
                }
            }
            Command::OptimizeSqueezing(o) => {
                a.push("optimize-squeezing".into());
                a.extend(["--mode".into(), o.mode.to_string(), "--nbar".into(), o.nbar.to_string()]);
            }
            Command::Figure(f) => {
                a.push("figure".into());
                a.push(value_name(f.figure));
                if let Some(n) = &f.nbar {
                    a.extend(["--nbar".into(), n.clone()]);
                }
                a.extend(["--lmax".into(), f.lmax.to_string()]);
                if let Some(n) = f.points {
                    a.extend(["--points".into(), n.to_string()]);
                }
            }
        }
        a
    }
}

fn value_name<V: ValueEnum>(v: V) -> String {
    v.to_possible_value()
        .expect("no skipped variants")
        .get_name()
        .to_string()
}
