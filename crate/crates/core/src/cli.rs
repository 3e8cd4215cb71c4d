//! Command-line front end. Each subcommand reads one versioned JSON document
//! and writes one versioned JSON report; some also emit CSV tables.
//!
//! Exit status: 0 on success, 2 when a checked tolerance is breached or a
//! numerical procedure fails, 1 on any input error.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::carleson::{
    besov_norm_m, besov_pairing_disk, besov_seminorm_disk, box_norm, default_probes, kps_norm_disk_with, testing_norm,
    BesovParams, DiscreteMeasure, KPS_RADIAL,
};
use crate::config::NumericConfig;
use crate::convex_poisson::{
    grid_scan, random_competitors, saddle_value, solve_bezout_min_norm, BezoutProblem, BezoutSolver, SaddleOptions,
    ShiftConfig,
};
use crate::dbar::{
    cauchy_pompeiu_measure, cauchy_pompeiu_solve, certify_lower_bound, fd_dbar, h2_carleson_norm, jones_solve,
    koszul_corona_disk, square_grid, GridField, KoszulOptions,
};
use crate::error::{Error, Result};
use crate::imp::{falsify_report, standard_grid, FalsifierConfig};
use crate::io::{
    create, matrix_from_rows, matrix_to_rows, read_versioned, to_versioned_json, write_imp_csv, write_outer_csv,
};
use crate::kernels::{
    besov_kernel_coeffs, ComplexPoint, DomainKind, DomainSpec, Kernel, KernelFamily, KernelSpec, PointSet,
    PowerSeries1D, C64, DEFAULT_TRUNC,
};
use crate::outer::{construct_outer, verify_outer_identity};
use crate::rescaling::check_rescaling;
use crate::rkhs::{
    build_gram_with, kernel_multiplier_norm_lower, restricted_multiplier_norm, restricted_vector_norms, SampleFunction,
};

#[derive(Debug, Parser)]
#[command(name = "coronakit", version, about = "Finite-scale RKHS and corona numerics")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Input JSON document.
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// Report path; stdout when absent.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Override the command's primary tolerance.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Override the command's node count.
    #[arg(long, global = true)]
    pub nodes: Option<usize>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Series truncation for Besov–Sobolev kernels.
    #[arg(long, global = true)]
    pub trunc: Option<usize>,
    /// Extra CSV output (outer, imp-falsify, dbar).
    #[arg(long, global = true)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Kernel values, normalized kernels and distances at point pairs.
    KernelEval,
    /// Gram matrix and its spectrum.
    Gram,
    /// Restricted multiplier norm (row/column/max for vector symbols).
    MultNorm,
    /// Probe lower bound for the kernel-multiplier norm.
    KmultNorm,
    /// Decide whether two kernel matrices are rescalings and recover psi.
    RescaleCheck,
    /// Minimum convex-shifted-norm Bezout solve at fixed theta.
    Bezout,
    /// Minimax over theta with certificates.
    Saddle,
    /// Disk outer function for a convex kernel weight.
    Outer,
    /// Ball/polydisc slice integral and its Laplacian.
    ImpFalsify,
    /// Box and kernel-testing Carleson norms of a discrete measure.
    Carleson,
    /// Besov–Sobolev seminorms, pairing and K_p^sigma norm.
    Besov,
    /// Jones solution for a discrete measure, with the Cauchy–Pompeiu check.
    Dbar,
    /// Koszul corona solve on the disk.
    CoronaDisk,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::KernelEval => "kernel-eval",
            Command::Gram => "gram",
            Command::MultNorm => "mult-norm",
            Command::KmultNorm => "kmult-norm",
            Command::RescaleCheck => "rescale-check",
            Command::Bezout => "bezout",
            Command::Saddle => "saddle",
            Command::Outer => "outer",
            Command::ImpFalsify => "imp-falsify",
            Command::Carleson => "carleson",
            Command::Besov => "besov",
            Command::Dbar => "dbar",
            Command::CoronaDisk => "corona-disk",
        }
    }
}

/// Everything that determines a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    pub input: Option<PathBuf>,
    pub output: Option<PathBuf>,
    pub tol: Option<f64>,
    pub nodes: Option<usize>,
    pub seed: u64,
    pub trunc: Option<usize>,
    pub csv: Option<PathBuf>,
}

impl From<Cli> for RunConfig {
    fn from(c: Cli) -> Self {
        Self {
            command: c.command,
            input: c.input,
            output: c.output,
            tol: c.tol,
            nodes: c.nodes,
            seed: c.seed,
            trunc: c.trunc,
            csv: c.csv,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Ok,
    ToleranceBreach,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
struct Effective {
    tol: f64,
    nodes: Option<usize>,
    seed: u64,
    trunc: Option<usize>,
    numeric: NumericConfig,
}

#[derive(Debug, Serialize)]
struct Envelope<'a> {
    command: &'a str,
    status: Status,
    effective: Effective,
    result: Value,
}

/// A finished run: the report text and its status.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub status: Status,
    pub report: String,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        match self.status {
            Status::Ok => 0,
            Status::ToleranceBreach => 2,
        }
    }
}

struct Handled {
    result: Value,
    breach: bool,
    tol: f64,
    numeric: NumericConfig,
}

fn handled<T: Serialize>(result: &T, breach: bool, tol: f64) -> Result<Handled> {
    Ok(Handled { result: serde_json::to_value(result)?, breach, tol, numeric: NumericConfig::default() })
}

fn input_doc<T: DeserializeOwned>(cfg: &RunConfig) -> Result<T> {
    let path = cfg.input.as_deref().ok_or_else(|| Error::Schema(format!("{} needs --input", cfg.command.name())))?;
    read_versioned(path)
}

fn write_csv(path: &Path, f: impl FnOnce(std::fs::File) -> Result<()>) -> Result<()> {
    f(create(path)?)
}

/// Run one command and write its report. The report is also returned.
pub fn dispatch(cfg: &RunConfig) -> Result<Outcome> {
    let h = match cfg.command {
        Command::KernelEval => kernel_eval(cfg)?,
        Command::Gram => gram(cfg)?,
        Command::MultNorm => mult_norm(cfg)?,
        Command::KmultNorm => kmult_norm(cfg)?,
        Command::RescaleCheck => rescale_check(cfg)?,
        Command::Bezout => bezout(cfg)?,
        Command::Saddle => saddle(cfg)?,
        Command::Outer => outer(cfg)?,
        Command::ImpFalsify => imp_falsify(cfg)?,
        Command::Carleson => carleson(cfg)?,
        Command::Besov => besov(cfg)?,
        Command::Dbar => dbar(cfg)?,
        Command::CoronaDisk => corona_disk(cfg)?,
    };
    let status = if h.breach { Status::ToleranceBreach } else { Status::Ok };
    let env = Envelope {
        command: cfg.command.name(),
        status,
        effective: Effective { tol: h.tol, nodes: cfg.nodes, seed: cfg.seed, trunc: cfg.trunc, numeric: h.numeric },
        result: h.result,
    };
    let report = to_versioned_json(&env)?;
    if let Some(path) = &cfg.output {
        std::fs::write(path, &report)?;
    }
    Ok(Outcome { status, report })
}

/// Parse arguments, run, and map the result to an exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    configure_threads();
    let cfg = RunConfig::from(cli);
    match dispatch(&cfg) {
        Ok(out) => {
            if cfg.output.is_none() {
                print!("{}", out.report);
            }
            out.exit_code()
        }
        Err(e) => {
            eprintln!("coronakit {}: {e}", cfg.command.name());
            match e {
                Error::Numerical(_) => 2,
                _ => 1,
            }
        }
    }
}

/// Cap the rayon pool at `CORONAKIT_THREADS` when set.
pub fn configure_threads() {
    if let Some(n) = std::env::var("CORONAKIT_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

fn apply_trunc(mut spec: KernelSpec, cfg: &RunConfig) -> KernelSpec {
    if spec.family == KernelFamily::BesovSobolevDisk {
        if let Some(t) = cfg.trunc {
            spec.trunc = Some(t);
        }
    }
    spec
}

fn point_set(p: PointSet) -> Result<PointSet> {
    PointSet::new(p.domain, p.points)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct KernelEvalDoc {
    kernel: KernelSpec,
    x: Vec<ComplexPoint>,
    y: Vec<ComplexPoint>,
}

fn kernel_eval(cfg: &RunConfig) -> Result<Handled> {
    let doc: KernelEvalDoc = input_doc(cfg)?;
    if doc.x.len() != doc.y.len() {
        return Err(Error::Schema(format!("{} x points but {} y points", doc.x.len(), doc.y.len())));
    }
    let k = Kernel::new(apply_trunc(doc.kernel, cfg))?;
    let rows = doc
        .x
        .iter()
        .zip(&doc.y)
        .map(|(x, y)| {
            Ok(json!({
                "value": k.eval(x, y)?,
                "normalized": k.normalized(x, y)?,
                "distance": k.distance(x, y)?,
            }))
        })
        .collect::<Result<Vec<_>>>()?;
    handled(&json!({ "kernel": k.spec(), "pairs": rows }), false, 0.0)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GramDoc {
    kernel: KernelSpec,
    points: PointSet,
    #[serde(default)]
    numeric: NumericConfig,
}

fn gram(cfg: &RunConfig) -> Result<Handled> {
    let doc: GramDoc = input_doc(cfg)?;
    let g = build_gram_with(&Kernel::new(apply_trunc(doc.kernel, cfg))?, &point_set(doc.points)?, &doc.numeric)?;
    let tol = cfg.tol.unwrap_or(doc.numeric.psd_tol);
    let psd = g.min_eig >= -tol * g.max_eig.abs().max(f64::MIN_POSITIVE);
    let mut h = handled(
        &json!({
            "entries": matrix_to_rows(&g.entries),
            "min_eig": g.min_eig,
            "max_eig": g.max_eig,
            "duplicates": g.duplicates,
            "psd": psd,
        }),
        !psd,
        tol,
    )?;
    h.numeric = doc.numeric;
    Ok(h)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MultDoc {
    kernel: KernelSpec,
    points: PointSet,
    phi: SampleFunction,
    #[serde(default)]
    numeric: NumericConfig,
    #[serde(default)]
    probes: Option<Vec<ComplexPoint>>,
    #[serde(default)]
    random_probes: usize,
}

fn mult_setup(cfg: &RunConfig) -> Result<(MultDoc, crate::rkhs::GramMatrix)> {
    let doc: MultDoc = input_doc(cfg)?;
    let g =
        build_gram_with(&Kernel::new(apply_trunc(doc.kernel, cfg))?, &point_set(doc.points.clone())?, &doc.numeric)?;
    doc.phi.check_len(g.len())?;
    Ok((doc, g))
}

fn mult_norm(cfg: &RunConfig) -> Result<Handled> {
    let (doc, g) = mult_setup(cfg)?;
    let result = if doc.phi.num_channels() == 1 {
        json!({ "norm": restricted_multiplier_norm(&g, &doc.phi)? })
    } else {
        json!({ "vector": restricted_vector_norms(&g, &doc.phi)? })
    };
    let mut h = handled(&result, false, 0.0)?;
    h.numeric = doc.numeric;
    Ok(h)
}

/// Uniform samples of the domain shrunk by `0.95`.
fn random_domain_points(domain: DomainSpec, count: usize, seed: u64) -> Vec<ComplexPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let coords: Vec<C64> =
            (0..domain.dim).map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let ok = match domain.kind {
            DomainKind::Polydisc => coords.iter().all(|c| c.norm() < 0.95),
            _ => coords.iter().map(|c| c.norm_sqr()).sum::<f64>() < 0.95 * 0.95,
        };
        if ok {
            out.push(ComplexPoint::new(coords));
        }
    }
    out
}

fn kmult_norm(cfg: &RunConfig) -> Result<Handled> {
    let (doc, g) = mult_setup(cfg)?;
    let mut probes = doc.probes.clone().unwrap_or_else(|| g.points.points.clone());
    probes.extend(random_domain_points(g.points.domain, doc.random_probes, cfg.seed));
    let r = kernel_multiplier_norm_lower(&g, &doc.phi, &probes)?;
    let mut h = handled(&json!({ "lower_bound": r, "probes": probes.len() }), false, 0.0)?;
    h.numeric = doc.numeric;
    Ok(h)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RescaleDoc {
    big: Vec<Vec<C64>>,
    small: Vec<Vec<C64>>,
}

fn rescale_check(cfg: &RunConfig) -> Result<Handled> {
    let doc: RescaleDoc = input_doc(cfg)?;
    let tol = cfg.tol.unwrap_or(1e-8);
    let r = check_rescaling(&matrix_from_rows(&doc.big)?, &matrix_from_rows(&doc.small)?, tol)?;
    handled(&r, false, tol)
}

fn bezout(cfg: &RunConfig) -> Result<Handled> {
    let mut doc: BezoutProblem = input_doc(cfg)?;
    doc.spec = apply_trunc(doc.spec, cfg);
    doc.pts = point_set(doc.pts)?;
    let tol = cfg.tol.unwrap_or(1e-8);
    let s = solve_bezout_min_norm(&doc)?;
    let breach = !(s.residual <= tol);
    handled(&s, breach, tol)
}

fn ones(n: usize) -> SampleFunction {
    SampleFunction::constant(n, C64::new(1.0, 0.0))
}

fn default_competitors() -> usize {
    20
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SaddleDoc {
    kernel: KernelSpec,
    points: PointSet,
    phi: SampleFunction,
    #[serde(default)]
    rhs: Option<SampleFunction>,
    base_points: Vec<ComplexPoint>,
    #[serde(default)]
    lower_bound_c: f64,
    #[serde(default)]
    options: SaddleOptions,
    #[serde(default)]
    grid_resolution: Option<usize>,
    #[serde(default = "default_competitors")]
    competitors: usize,
    #[serde(default)]
    numeric: NumericConfig,
}

fn saddle(cfg: &RunConfig) -> Result<Handled> {
    let doc: SaddleDoc = input_doc(cfg)?;
    let g = build_gram_with(&Kernel::new(apply_trunc(doc.kernel, cfg))?, &point_set(doc.points)?, &doc.numeric)?;
    let rhs = doc.rhs.unwrap_or_else(|| ones(g.len()));
    let solver = BezoutSolver::new(&g, &doc.phi, &rhs, &doc.base_points, doc.lower_bound_c)?;
    let report = saddle_value(&solver, &doc.base_points, &doc.options)?;
    let tol = cfg.tol.unwrap_or(1e-6);
    let scale = report.value.abs().max(1.0);
    let values = random_competitors(&solver, &report.g_star.g, doc.competitors, cfg.seed);
    let weak_duality_violations = values.iter().filter(|&&v| v < report.value - 1e-9 * scale).count();
    let mut breach = !report.converged || weak_duality_violations > 0;
    let grid = match doc.grid_resolution {
        Some(res) => {
            let (v, theta) = grid_scan(&solver, res)?;
            let diff = report.value - v;
            breach |= diff.abs() > tol * scale;
            Some(json!({ "resolution": res, "value": v, "theta": theta, "difference": diff }))
        }
        None => None,
    };
    let min_competitor = values.iter().copied().fold(f64::INFINITY, f64::min);
    let mut h = handled(
        &json!({
            "saddle": report,
            "grid": grid,
            "competitors": { "count": values.len(), "min_value": min_competitor, "violations": weak_duality_violations },
        }),
        breach,
        tol,
    )?;
    h.numeric = doc.numeric;
    Ok(h)
}

fn default_degree() -> usize {
    8
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct OuterDoc {
    shift: ShiftConfig,
    #[serde(default = "default_degree")]
    degree: usize,
}

fn outer(cfg: &RunConfig) -> Result<Handled> {
    let doc: OuterDoc = input_doc(cfg)?;
    doc.shift.validate().map_err(|e| Error::Schema(e.to_string()))?;
    let f = construct_outer(&doc.shift, cfg.nodes.unwrap_or(4096))?;
    let id = verify_outer_identity(&f, &doc.shift, doc.degree)?;
    let tol = cfg.tol.unwrap_or(1e-6);
    let (min, max) = f.modulus_range();
    let breach = id.boundary_modulus_error > tol || (id.h2_norm - 1.0).abs() > tol || id.max_discrepancy > tol;
    if let Some(path) = &cfg.csv {
        write_csv(path, |file| write_outer_csv(&f, file))?;
    }
    let head: Vec<C64> = f.log_coeffs.iter().take(16).copied().collect();
    handled(
        &json!({
            "identity": id,
            "f_at_zero": f.eval(C64::new(0.0, 0.0)),
            "modulus_min": min,
            "modulus_max": max,
            "log_coeffs_head": head,
            "nodes": f.nodes,
        }),
        breach,
        tol,
    )
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ImpDoc {
    config: FalsifierConfig,
    #[serde(default)]
    grid: Option<(f64, usize, usize)>,
}

fn imp_falsify(cfg: &RunConfig) -> Result<Handled> {
    let mut doc: ImpDoc = match cfg.input {
        Some(_) => input_doc(cfg)?,
        None => ImpDoc { config: FalsifierConfig::ball(C64::new(0.5, 0.0), 2), grid: None },
    };
    if let Some(n) = cfg.nodes {
        doc.config.lambda_nodes = n;
    }
    let (r_max, nr, na) = doc.grid.unwrap_or((0.8, 20, 21));
    let r = falsify_report(&doc.config, &standard_grid(r_max, nr, na))?;
    let tol = cfg.tol.unwrap_or(1e-4);
    if let Some(path) = &cfg.csv {
        write_csv(path, |file| write_imp_csv(&r, file))?;
    }
    let breach = r.max_fd_relative_error > tol;
    handled(&r, breach, tol)
}

fn default_sigmas() -> Vec<f64> {
    vec![0.25, 0.5, 1.0]
}

fn default_p() -> f64 {
    2.0
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CarlesonDoc {
    /// A single measure, or a corpus under `measures`.
    #[serde(default)]
    measure: Option<DiscreteMeasure>,
    #[serde(default)]
    measures: Vec<DiscreteMeasure>,
    #[serde(default = "default_sigmas")]
    sigmas: Vec<f64>,
    #[serde(default = "default_p")]
    p: f64,
    #[serde(default)]
    probes: Option<Vec<ComplexPoint>>,
}

fn carleson(cfg: &RunConfig) -> Result<Handled> {
    let doc: CarlesonDoc = input_doc(cfg)?;
    let measures: Vec<&DiscreteMeasure> = doc.measure.iter().chain(&doc.measures).collect();
    if measures.is_empty() {
        return Err(Error::Schema("carleson needs `measure` or `measures`".into()));
    }
    let bound = cfg.tol.unwrap_or(32.0);
    let mut breach = false;
    let mut reports = Vec::with_capacity(measures.len());
    for mu in measures {
        mu.validate()?;
        let probes = doc.probes.clone().unwrap_or_else(|| default_probes(mu));
        let rows = doc
            .sigmas
            .iter()
            .map(|&sigma| {
                let b = box_norm(mu, sigma, doc.p, 1)?;
                let t = testing_norm(mu, sigma, doc.p, &probes)?;
                let ratio = if b.value > 0.0 { Some(t.value / b.value) } else { None };
                if let Some(r) = ratio {
                    breach |= !(r >= 1.0 / bound && r <= bound);
                }
                Ok(json!({ "sigma": sigma, "box": b, "testing": t, "ratio": ratio }))
            })
            .collect::<Result<Vec<_>>>()?;
        reports.push(json!({ "total_mass": mu.total_mass(), "norms": rows }));
    }
    handled(&json!({ "p": doc.p, "measures": reports }), breach, bound)
}

fn default_m() -> usize {
    1
}

fn default_radial() -> usize {
    64
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct BesovDoc {
    #[serde(default)]
    phi: Option<PowerSeries1D>,
    sigma: f64,
    #[serde(default = "default_p")]
    p: f64,
    #[serde(default)]
    alpha: f64,
    #[serde(default = "default_m")]
    m: usize,
    #[serde(default = "default_radial")]
    radial: usize,
    #[serde(default)]
    pair_with: Option<PowerSeries1D>,
    /// Pair with the Besov–Sobolev kernel `k_w` instead.
    #[serde(default)]
    pair_with_kernel_at: Option<C64>,
    /// Functions for the algebra check `‖φ²‖ ≤ C‖φ‖²`.
    #[serde(default)]
    algebra_corpus: Vec<PowerSeries1D>,
}

fn besov(cfg: &RunConfig) -> Result<Handled> {
    let doc: BesovDoc = input_doc(cfg)?;
    let params = BesovParams { sigma: doc.sigma, p: doc.p, alpha: doc.alpha, m: doc.m };
    params.validate()?;
    let angles = cfg.nodes.unwrap_or(128);
    let kps_angles = angles.max(64);
    let mut result = serde_json::Map::new();
    if let Some(phi) = &doc.phi {
        let other = match (&doc.pair_with, doc.pair_with_kernel_at) {
            (Some(g), _) => Some(g.clone()),
            (None, Some(w)) => {
                let c = besov_kernel_coeffs(doc.sigma, doc.alpha, doc.p, cfg.trunc.unwrap_or(DEFAULT_TRUNC))?;
                Some(PowerSeries1D::new(
                    c.coeffs.iter().enumerate().map(|(k, ck)| ck * w.conj().powu(k as u32)).collect(),
                ))
            }
            (None, None) => None,
        };
        let pairing = match &other {
            Some(g) => Some(besov_pairing_disk(phi, g, &params, doc.radial, angles)?),
            None => None,
        };
        result.insert("seminorm".into(), json!(besov_seminorm_disk(phi, &params, doc.radial, angles)?));
        result.insert("norm_m".into(), json!(besov_norm_m(phi, &params, doc.radial, angles)?));
        result.insert("pairing".into(), json!(pairing));
        result.insert("kps".into(), json!(kps_norm_disk_with(phi, doc.sigma, doc.p, doc.m, KPS_RADIAL, kps_angles)?));
    }
    if !doc.algebra_corpus.is_empty() {
        let rows = doc
            .algebra_corpus
            .iter()
            .map(|f| {
                let a = kps_norm_disk_with(f, doc.sigma, doc.p, doc.m, KPS_RADIAL, kps_angles)?.value;
                let b = kps_norm_disk_with(&f.mul(f), doc.sigma, doc.p, doc.m, KPS_RADIAL, kps_angles)?.value;
                Ok(json!({ "norm": a, "square_norm": b, "constant": b / (a * a) }))
            })
            .collect::<Result<Vec<_>>>()?;
        let c = rows.iter().filter_map(|r| r["constant"].as_f64()).fold(0.0, f64::max);
        result.insert("algebra".into(), json!({ "functions": rows, "empirical_constant": c }));
    }
    handled(&Value::Object(result), false, 0.0)
}

fn default_step() -> f64 {
    0.05
}

fn default_fd_radius() -> f64 {
    0.9
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct DbarDoc {
    measure: DiscreteMeasure,
    #[serde(default)]
    eval_points: Vec<C64>,
    #[serde(default = "default_step")]
    grid_step: f64,
    #[serde(default = "default_fd_radius")]
    grid_radius: f64,
    /// Optional smooth data as a `GridField` CSV; solved by Cauchy–Pompeiu
    /// at the evaluation points.
    #[serde(default)]
    field_csv: Option<PathBuf>,
}

pub(crate) const DBAR_FD_STEP: f64 = 1e-4;

fn dbar(cfg: &RunConfig) -> Result<Handled> {
    let doc: DbarDoc = input_doc(cfg)?;
    doc.measure.validate()?;
    let mu = &doc.measure;
    let mass = mu.total_mass();
    let tol = cfg.tol.unwrap_or(1e-3);
    let nodes = cfg.nodes.unwrap_or(512);
    let boundary: Vec<C64> =
        (0..nodes).map(|j| C64::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / nodes as f64)).collect();
    let ub = jones_solve(mu, &boundary)?;
    let boundary_sup = ub.sup_norm();
    let values = jones_solve(mu, &doc.eval_points)?;
    let h2 = h2_carleson_norm(mu)?;

    let support: Vec<C64> = mu.points.points.iter().map(|p| p.z()).collect();
    let h = DBAR_FD_STEP;
    let grid: Vec<C64> = square_grid(doc.grid_step, doc.grid_radius)
        .into_iter()
        .filter(|z| support.iter().all(|s| (z - s).norm() > 10.0 * h))
        .collect();
    let residual = if mu.is_empty() {
        0.0
    } else {
        let diff = |z: C64| -> C64 {
            let u = jones_solve(mu, &[z]).map(|s| s.channel(0)[0]);
            let u0 = cauchy_pompeiu_measure(mu, z);
            match (u, u0) {
                (Ok(u), Ok(u0)) => u - C64::new(0.0, 2.0) * u0,
                _ => C64::new(f64::NAN, 0.0),
            }
        };
        grid.iter().map(|&z| fd_dbar(diff, z, h).norm()).fold(0.0, f64::max)
    };
    let field = match &doc.field_csv {
        Some(path) => {
            let g = GridField::read_csv(std::fs::File::open(path)?)?;
            Some(doc.eval_points.iter().map(|&z| cauchy_pompeiu_solve(&g, z)).collect::<Result<Vec<_>>>()?)
        }
        None => None,
    };
    if let Some(path) = &cfg.csv {
        let u = GridField::sample(
            |z| jones_solve(mu, &[z]).map(|s| s.channel(0)[0]).unwrap_or(C64::new(f64::NAN, 0.0)),
            32,
            64,
        );
        write_csv(path, |file| u.write_csv(file))?;
    }
    let breach = !(residual <= tol * mass.max(f64::MIN_POSITIVE)) && !mu.is_empty() || !boundary_sup.is_finite();
    handled(
        &json!({
            "h2_carleson_norm": h2,
            "total_mass": mass,
            "values": values.channels.first().cloned().unwrap_or_default(),
            "boundary_nodes": nodes,
            "boundary_sup": boundary_sup,
            "boundary_sup_over_h2": if h2 > 0.0 { Some(boundary_sup / h2) } else { None },
            "holomorphic_residual": residual,
            "grid_points": grid.len(),
            "cauchy_pompeiu_field": field,
        }),
        breach,
        tol,
    )
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CoronaDoc {
    phi: Vec<PowerSeries1D>,
    #[serde(default)]
    c: Option<f64>,
    #[serde(default)]
    options: KoszulOptions,
}

fn corona_disk(cfg: &RunConfig) -> Result<Handled> {
    let mut doc: CoronaDoc = input_doc(cfg)?;
    if let Some(t) = cfg.tol {
        doc.options.residual_tol = t;
    }
    if let Some(n) = cfg.nodes {
        doc.options.boundary_nodes = n;
    }
    let c = match doc.c {
        Some(c) => c,
        None => certify_lower_bound(&doc.phi, doc.options.grid_step, 1.0, doc.options.boundary_nodes),
    };
    let r = koszul_corona_disk(&doc.phi, c, &doc.options)?;
    let breach = !r.within_tolerance;
    handled(&r, breach, doc.options.residual_tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_command_is_an_input_error() {
        assert_eq!(run(["coronakit", "frobnicate"]), 1);
        assert_eq!(run(["coronakit", "gram"]), 1);
    }

    #[test]
    fn imp_defaults_run_without_input() {
        let cfg = RunConfig {
            command: Command::ImpFalsify,
            input: None,
            output: None,
            tol: None,
            nodes: Some(512),
            seed: 0,
            trunc: None,
            csv: None,
        };
        let out = dispatch(&cfg).unwrap();
        assert_eq!(out.status, Status::Ok);
        assert!(out.report.contains("\"schema_version\": 1"));
    }
}
