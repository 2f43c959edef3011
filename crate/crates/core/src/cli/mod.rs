//! Command-line front end.
//!
//! [`render`] turns a [`RunConfig`] into output text without touching the file
//! system, so every command is deterministic and testable; [`run`] writes it.

mod args;
mod table;

use std::path::{Path, PathBuf};
use std::sync::Arc;

use rayon::prelude::*;
use serde_json::{json, Value};

pub use args::{
    Command, DecomposeSpec, DetectionArgs, Figure, FigureArgs, Format, ModeList, MomentsArgs, NbarRange, NoiseArgs,
    Normalize, OptimizeArgs, RunConfig, StateTemplate, SweepArgs, TemplateList,
};
pub use table::{format_number, Cell, Table};

use crate::detection::{self, BasisFamily, BasisSpec, Decomposition, DetectionKind};
use crate::error::{Error, Result};
use crate::modes::{default_quadrature_with, ModeSpec, TransverseMode};
use crate::moments::build_matrices;
use crate::noise::{optimal_squeezing_for_ratio, ModeMoments};
use crate::quadrature::{Dims, Quadrature, DEFAULT_AXIS_NODES, DEFAULT_RADIAL_NODES};
use crate::states::PhotonStatistics;

/// Text produced by a command: the main document and an optional sidecar.
#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub main: String,
    pub sidecar: Option<String>,
}

impl Output {
    fn main(main: String) -> Self {
        Self { main, sidecar: None }
    }
}

/// Runs the command and writes its output.
pub fn run(cfg: &RunConfig) -> Result<()> {
    let out = render(cfg)?;
    match &cfg.out {
        Some(path) => std::fs::write(path, &out.main)?,
        None => print!("{}", out.main),
    }
    if let Some(side) = out.sidecar {
        match sidecar_path(cfg) {
            Some(path) => std::fs::write(path, side)?,
            None => eprint!("{side}"),
        }
    }
    Ok(())
}

/// Where the decomposition sidecar goes: `--sidecar`, else next to `--out`.
pub fn sidecar_path(cfg: &RunConfig) -> Option<PathBuf> {
    if let Command::DetectionMode(d) = &cfg.command {
        if let Some(p) = &d.sidecar {
            return Some(p.clone());
        }
    }
    cfg.out
        .as_deref()
        .map(|p: &Path| p.with_extension("decomposition.json"))
}

/// Produces the output text for `cfg`.
pub fn render(cfg: &RunConfig) -> Result<Output> {
    check_waist(cfg.waist)?;
    let ctx = Context::from(cfg);
    match &cfg.command {
        Command::Moments(a) => moments(&ctx, a),
        Command::Noise(a) => noise(&ctx, a),
        Command::Sweep(a) => sweep(&ctx, a),
        Command::DetectionMode(a) => detection_mode(&ctx, a),
        Command::OptimizeSqueezing(a) => optimize(&ctx, a),
        Command::Figure(a) => figure(&ctx, a),
    }
}

fn check_waist(w: f64) -> Result<()> {
    if w > 0.0 && w.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidMode(format!("waist must be positive, got {w}")))
    }
}

struct Context {
    waist: f64,
    format: Option<Format>,
    axis_nodes: usize,
    radial_nodes: usize,
}

impl From<&RunConfig> for Context {
    fn from(cfg: &RunConfig) -> Self {
        Self {
            waist: cfg.waist,
            format: cfg.format,
            axis_nodes: cfg.axis_nodes.unwrap_or(DEFAULT_AXIS_NODES),
            radial_nodes: cfg.radial_nodes.unwrap_or(DEFAULT_RADIAL_NODES),
        }
    }
}

impl Context {
    fn quadrature(&self, modes: &[TransverseMode]) -> Result<Quadrature> {
        default_quadrature_with(modes, self.axis_nodes, self.radial_nodes)
    }

    fn mode(&self, spec: &ModeSpec) -> Result<TransverseMode> {
        spec.build(self.waist)
    }

    fn moments_of(&self, mode: &TransverseMode) -> Result<ModeMoments> {
        ModeMoments::with_quadrature(mode, &self.quadrature(std::slice::from_ref(mode))?)
    }

    fn emit(&self, table: &Table, extra: Value) -> Result<String> {
        match self.format.unwrap_or(Format::Csv) {
            Format::Csv => table.to_csv(),
            Format::Json => {
                let mut doc = table.to_json();
                if let (Value::Object(d), Value::Object(e)) = (&mut doc, extra) {
                    d.extend(e);
                }
                json_text(&doc)
            }
        }
    }
}

fn json_text(v: &Value) -> Result<String> {
    let mut s = serde_json::to_string(v).map_err(|e| Error::Io(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn ratio(m: &ModeMoments, stats: PhotonStatistics, normalize: Normalize) -> Result<f64> {
    match normalize {
        Normalize::Coherent => m.relative_noise(stats),
        Normalize::Mean => m.relative_noise_by_mean(stats),
    }
}

fn moments(ctx: &Context, a: &MomentsArgs) -> Result<Output> {
    let basis: Vec<TransverseMode> = a.basis.0.iter().map(|s| ctx.mode(s)).collect::<Result<_>>()?;
    let q = match a.nodes {
        Some(n) => default_quadrature_with(&basis, n, n)?,
        None => ctx.quadrature(&basis)?,
    };
    let m = build_matrices(&basis, a.k, &q)?;
    let named = [("D", &m.d), ("F", &m.f), ("Dtilde", &m.dtilde), ("Ftilde", &m.ftilde)];
    match ctx.format.unwrap_or(Format::Json) {
        Format::Json => {
            let mut doc = serde_json::Map::new();
            doc.insert("basis".into(), json!(m.labels));
            doc.insert("waist".into(), json!(ctx.waist));
            doc.insert("k".into(), json!(a.k));
            for (name, mat) in named {
                let rows: Vec<Vec<[f64; 2]>> = (0..mat.nrows())
                    .map(|i| (0..mat.ncols()).map(|j| [mat[(i, j)].re, mat[(i, j)].im]).collect())
                    .collect();
                doc.insert(name.into(), json!(rows));
            }
            Ok(Output::main(json_text(&Value::Object(doc))?))
        }
        Format::Csv => {
            let mut t = Table::new(["matrix", "row", "col", "re", "im"]);
            for (name, mat) in named {
                for i in 0..mat.nrows() {
                    for j in 0..mat.ncols() {
                        t.push(vec![
                            name.into(),
                            m.labels[i].as_str().into(),
                            m.labels[j].as_str().into(),
                            mat[(i, j)].re.into(),
                            mat[(i, j)].im.into(),
                        ]);
                    }
                }
            }
            Ok(Output::main(t.to_csv()?))
        }
    }
}

fn noise(ctx: &Context, a: &NoiseArgs) -> Result<Output> {
    let mode = ctx.mode(&a.mode)?;
    let m = ctx.moments_of(&mode)?;
    let stats = a.state.statistics();
    let variance = m.width_variance(stats)?;
    let r = ratio(&m, stats, a.normalize)?;
    let mut t = Table::new(["mode", "state", "nbar", "mean_width", "variance", "normalize", "ratio"]);
    t.push(vec![
        a.mode.to_string().into(),
        a.state.to_string().into(),
        stats.mean.into(),
        m.d00.into(),
        variance.into(),
        match a.normalize {
            Normalize::Coherent => "coherent",
            Normalize::Mean => "mean",
        }
        .into(),
        r.into(),
    ]);
    Ok(Output::main(ctx.emit(&t, json!({}))?))
}

fn sweep_table(
    m: &ModeMoments,
    columns: &[(String, StateTemplate)],
    nbars: &[f64],
    normalize: Normalize,
) -> Result<Table> {
    let rows: Vec<Vec<Cell>> = nbars
        .par_iter()
        .map(|&n| {
            let mut row = vec![Cell::Num(n)];
            for (_, t) in columns {
                row.push(ratio(m, t.statistics(n)?, normalize)?.into());
            }
            Ok(row)
        })
        .collect::<Result<_>>()?;
    let mut t = Table::new(std::iter::once("nbar".to_string()).chain(columns.iter().map(|c| c.0.clone())));
    rows.into_iter().for_each(|r| t.push(r));
    Ok(t)
}

fn sweep(ctx: &Context, a: &SweepArgs) -> Result<Output> {
    let mode = ctx.mode(&a.mode)?;
    let m = ctx.moments_of(&mode)?;
    let columns: Vec<(String, StateTemplate)> = a.states.0.iter().map(|t| (t.to_string(), *t)).collect();
    let t = sweep_table(&m, &columns, &a.nbar.values(), a.normalize)?;
    Ok(Output::main(ctx.emit(&t, json!({ "mode": a.mode.to_string() }))?))
}

fn default_points(dims: Dims) -> usize {
    match dims {
        Dims::One => 401,
        Dims::Two => 101,
    }
}

/// Window half-width that holds the mode and its detection modes.
fn default_extent(m: &ModeMoments, waist: f64) -> f64 {
    2.0 * m.d00.sqrt() + 2.0 * waist
}

fn line(extent: f64, points: usize) -> Vec<f64> {
    if points == 1 {
        return vec![0.0];
    }
    let h = 2.0 * extent / (points - 1) as f64;
    (0..points).map(|i| -extent + h * i as f64).collect()
}

fn detection_mode(ctx: &Context, a: &DetectionArgs) -> Result<Output> {
    let u0 = ctx.mode(&a.mode)?;
    let dims = u0.dims();
    let points = a.points.unwrap_or(default_points(dims));
    if points == 0 {
        return Err(Error::InvalidMode("profile needs at least one point".into()));
    }
    let kind = if a.angular {
        DetectionKind::Angular
    } else {
        DetectionKind::Width
    };
    let decomposition_basis = match a.decompose {
        Some(spec) => {
            let family = match (spec.family, dims) {
                (BasisFamily::HermiteGauss, Dims::One) => BasisFamily::HermiteGauss1D,
                (BasisFamily::HermiteGauss1D, Dims::Two) | (BasisFamily::LaguerreGauss, Dims::One) => {
                    return Err(Error::DimensionMismatch(format!(
                        "basis `{spec}` does not match the {dims:?} mode {u0}"
                    )))
                }
                (f, _) => f,
            };
            Some(BasisSpec::new(family, spec.max_order, ctx.waist))
        }
        None => None,
    };
    let mut all = vec![u0.clone()];
    if let Some(b) = &decomposition_basis {
        all.extend(b.members()?);
    }
    let q = Arc::new(ctx.quadrature(&all)?);

    let extent = match a.extent {
        Some(e) if e > 0.0 && e.is_finite() => e,
        Some(e) => return Err(Error::InvalidMode(format!("extent must be positive, got {e}"))),
        None => default_extent(&ModeMoments::with_quadrature(&u0, &q)?, ctx.waist),
    };
    let axis = line(extent, points);
    let (columns, pts): (Vec<&str>, Vec<[f64; 2]>) = match dims {
        Dims::One => (vec!["x", "re", "im"], axis.iter().map(|&x| [x, 0.0]).collect()),
        Dims::Two => (
            vec!["x", "y", "re", "im"],
            axis.iter().flat_map(|&x| axis.iter().map(move |&y| [x, y])).collect(),
        ),
    };
    let values = detection::detection_profile(&u0, kind, &q, &pts)?;
    let mut t = Table::new(columns);
    for (p, v) in pts.iter().zip(&values) {
        let mut row: Vec<Cell> = vec![p[0].into()];
        if dims == Dims::Two {
            row.push(p[1].into());
        }
        row.push(v.re.into());
        row.push(v.im.into());
        t.push(row);
    }

    let decomposition: Option<Decomposition> = match &decomposition_basis {
        Some(b) => {
            let sampled = match kind {
                DetectionKind::Width => detection::width_detection_mode(&u0, &q)?,
                DetectionKind::Angular => detection::angular_detection_mode(&u0, 1.0, &q)?,
            };
            Some(detection::decompose_on_basis(&sampled, b)?)
        }
        None => None,
    };
    let kind_name = match kind {
        DetectionKind::Width => "width",
        DetectionKind::Angular => "angular",
    };
    let decomposition_json = decomposition.as_ref().map(decomposition_value).unwrap_or(Value::Null);
    match ctx.format.unwrap_or(Format::Csv) {
        Format::Csv => Ok(Output {
            main: t.to_csv()?,
            sidecar: decomposition
                .as_ref()
                .map(|_| json_text(&decomposition_json))
                .transpose()?,
        }),
        Format::Json => Ok(Output::main(ctx.emit(
            &t,
            json!({ "mode": a.mode.to_string(), "kind": kind_name, "decomposition": decomposition_json }),
        )?)),
    }
}

fn decomposition_value(d: &Decomposition) -> Value {
    let round = |v: f64| format_number(v).parse::<f64>().unwrap_or(v);
    json!({
        "basis": d.basis,
        "coefficients": d.coefficients.iter().map(|c| [round(c.re), round(c.im)]).collect::<Vec<_>>(),
        "completeness": round(d.completeness),
        "warning": d.warning,
    })
}

fn optimize(ctx: &Context, a: &OptimizeArgs) -> Result<Output> {
    let mode = ctx.mode(&a.mode)?;
    let m = ctx.moments_of(&mode)?;
    let opt = optimal_squeezing_for_ratio(m.ratio(), a.nbar)?;
    let mut t = Table::new(["mode", "nbar", "s", "alpha", "squeezing_db", "ratio"]);
    // quadrature variance exp(-2s) expressed in dB
    let db = -20.0 * opt.s / std::f64::consts::LN_10;
    t.push(vec![
        a.mode.to_string().into(),
        a.nbar.into(),
        opt.s.into(),
        opt.alpha.into(),
        db.into(),
        opt.ratio.into(),
    ]);
    Ok(Output::main(ctx.emit(&t, json!({}))?))
}

fn figure(ctx: &Context, a: &FigureArgs) -> Result<Output> {
    match a.figure {
        Figure::Fig2a => {
            let range: NbarRange = a.nbar.as_deref().unwrap_or("0.1:20:200").parse()?;
            let u0 = ctx.mode(&ModeSpec::HermiteGauss { nx: 0, ny: 0 })?;
            let m = ctx.moments_of(&u0)?;
            let columns = vec![
                ("coherent".to_string(), StateTemplate::Coherent),
                ("fock".to_string(), StateTemplate::Fock),
                ("sqvac".to_string(), StateTemplate::SqueezedVacuum),
                ("thermal".to_string(), StateTemplate::Thermal),
                (
                    "dispthermal:2".to_string(),
                    StateTemplate::DisplacedThermal { n_th: 2.0 },
                ),
                (
                    "dispsq:-3dB".to_string(),
                    StateTemplate::DisplacedSqueezed {
                        s: StateTemplate::MINUS_3DB,
                    },
                ),
            ];
            let t = sweep_table(&m, &columns, &range.values(), Normalize::Coherent)?;
            Ok(Output::main(ctx.emit(&t, json!({ "figure": "fig2a" }))?))
        }
        Figure::Fig2b => {
            let nbar: f64 = match a.nbar.as_deref() {
                None => 1.0,
                Some(s) => s
                    .trim()
                    .parse()
                    .map_err(|_| Error::parse(s, "fig2b takes a single mean photon number"))?,
            };
            let rows: Vec<Vec<Cell>> = (0..=a.lmax)
                .into_par_iter()
                .map(|l| {
                    let u = ctx.mode(&ModeSpec::LaguerreGauss { l: l as i32, p: 0 })?;
                    let m = ctx.moments_of(&u)?;
                    let stats = PhotonStatistics::new(nbar, nbar)?;
                    Ok(vec![Cell::Num(l as f64), m.relative_noise_by_mean(stats)?.into()])
                })
                .collect::<Result<_>>()?;
            let mut t = Table::new(["l", "coherent"]);
            rows.into_iter().for_each(|r| t.push(r));
            Ok(Output::main(ctx.emit(&t, json!({ "figure": "fig2b", "nbar": nbar }))?))
        }
        Figure::Fig3a | Figure::Fig3b => {
            let (spec, default_pts) = if a.figure == Figure::Fig3a {
                (ModeSpec::HermiteGauss1D { n: 0 }, 301)
            } else {
                (ModeSpec::FlattenedGaussian { order: 30 }, 801)
            };
            let u0 = ctx.mode(&spec)?;
            let q = ctx.quadrature(std::slice::from_ref(&u0))?;
            let m = ModeMoments::with_quadrature(&u0, &q)?;
            let xs = line(default_extent(&m, ctx.waist), a.points.unwrap_or(default_pts));
            let pts: Vec<[f64; 2]> = xs.iter().map(|&x| [x, 0.0]).collect();
            let v0 = detection::detection_profile(&u0, DetectionKind::Width, &q, &pts)?;
            let mut t = Table::new(["x", "u0", "v0"]);
            for ((x, p), v) in xs.iter().zip(&pts).zip(&v0) {
                t.push(vec![(*x).into(), u0.evaluate(p[0], p[1]).re.into(), v.re.into()]);
            }
            let name = if a.figure == Figure::Fig3a { "fig3a" } else { "fig3b" };
            Ok(Output::main(
                ctx.emit(&t, json!({ "figure": name, "mode": spec.to_string() }))?,
            ))
        }
    }
}
