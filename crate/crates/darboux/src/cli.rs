//! Argument parsing and subcommand dispatch.
//!
//! Exit codes: 0 success, 1 a study or check failed, 2 usage or
//! invalid-parameter error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use darboux_core::budget::{self, BudgetInput};
use darboux_core::lattice::{compare_flows, integrate, Transport};
use darboux_core::lieseries::{transform_h, NormalFormModel};
use darboux_core::moser::{verify_pullback, DarbouxMap, Direction};
use darboux_core::{Boundary, LatticeState, ModelKind, ModelParams};
use log::info;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::config::StudyConfig;
use crate::experiments::{self, Pair};
use crate::{formula, poly_json, sampling};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "darboux", version, about = "Normal forms and Darboux coordinates for nonstandard-bracket lattices")]
#[command(arg_required_else_help = true)]
pub struct Cli {
    /// Worker threads (defaults to the number of cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Increase log verbosity (repeatable).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    /// Reproducible mode: randomized commands require --seed.
    #[arg(long, global = true)]
    ci: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Transform a lattice Hamiltonian and print its normal form.
    NormalForm(NormalFormArgs),
    /// Check that the Darboux map pulls one bracket back to the other.
    VerifyDarboux(VerifyArgs),
    /// Degree law and fitted exponent of the truncated transformation of P.
    TruncationStudy(TruncationArgs),
    /// Deviation of the nonstandard lattices from their normal forms.
    ClosenessScaling(ClosenessArgs),
    /// Integrate one lattice and write the trajectory as CSV.
    Simulate(SimulateArgs),
    /// Distance between two lattice flows over a radius grid.
    CompareFlows(CompareArgs),
    /// A-priori bounds for transforming P on a given domain.
    ErrorBudget(BudgetArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum NfModel {
    Salerno,
    Al,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Model {
    Dnls,
    Al,
    Salerno,
    Z0,
    Z1,
}

impl From<Model> for ModelKind {
    fn from(m: Model) -> Self {
        match m {
            Model::Dnls => ModelKind::DNls,
            Model::Al => ModelKind::Al,
            Model::Salerno => ModelKind::Salerno,
            Model::Z0 => ModelKind::Z0,
            Model::Z1 => ModelKind::Z1,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Bc {
    Periodic,
    Fixed,
}

impl From<Bc> for Boundary {
    fn from(b: Bc) -> Self {
        match b {
            Bc::Periodic => Boundary::Periodic,
            Bc::Fixed => Boundary::Fixed,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TransportArg {
    None,
    Darboux,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum DirectionArg {
    Inverse,
    Forward,
    Both,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PairArg {
    SalernoZ0,
    SalernoZ1,
    AlZ0,
    All,
}

#[derive(Debug, Args)]
struct NormalFormArgs {
    #[arg(long, value_enum, default_value = "salerno")]
    model: NfModel,
    /// Lie-series truncation order.
    #[arg(long = "K", default_value_t = 1)]
    k: u32,
    /// Field cap: keep field terms up to phase degree 2L+1.
    #[arg(long = "L", default_value_t = 1)]
    l: usize,
    /// Phase degree at which the result is truncated.
    #[arg(long, default_value_t = 6)]
    degree: u32,
    #[arg(long, default_value_t = 3)]
    sites: usize,
    /// Print only the per-site formula.
    #[arg(long)]
    formula: bool,
    /// Write the JSON document here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 0.5)]
    nu: f64,
    /// Radius of the ball the sample points are drawn from.
    #[arg(long, default_value_t = 0.3)]
    rho: f64,
    #[arg(long, default_value_t = 100)]
    samples: usize,
    #[arg(long, default_value_t = 4)]
    sites: usize,
    #[arg(long)]
    seed: Option<u64>,
    /// Largest acceptable pullback residual.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long, value_enum, default_value = "both")]
    direction: DirectionArg,
}

/// Overrides shared by the study commands.
#[derive(Debug, Args)]
struct StudyFlags {
    /// TOML or JSON study config (falls back to $DARBOUX_CONFIG).
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    nu: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    /// Comma-separated, strictly decreasing radii.
    #[arg(long, value_delimiter = ',')]
    rho_grid: Option<Vec<f64>>,
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long)]
    json: Option<PathBuf>,
    /// Write the effective configuration as JSON.
    #[arg(long)]
    dump_config: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct TruncationArgs {
    #[command(flatten)]
    study: StudyFlags,
    /// Comma-separated truncation orders.
    #[arg(long = "K", value_delimiter = ',')]
    k: Option<Vec<u32>>,
    #[arg(long = "L", conflicts_with = "no_cap")]
    l: Option<usize>,
    /// Run uncapped rows only.
    #[arg(long)]
    no_cap: bool,
    #[arg(long)]
    directions: Option<usize>,
}

#[derive(Debug, Args)]
struct ClosenessArgs {
    #[command(flatten)]
    study: StudyFlags,
    #[arg(long, value_enum, default_value = "all")]
    pair: PairArg,
    #[arg(long)]
    sites: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    samples: Option<usize>,
}

#[derive(Debug, Args)]
struct LatticeFlags {
    #[arg(long, default_value_t = 0.5)]
    nu: f64,
    #[arg(long, default_value_t = 1.0)]
    gamma: f64,
    #[arg(long, default_value_t = 8)]
    sites: usize,
    #[arg(long, value_enum, default_value = "periodic")]
    bc: Bc,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[command(flatten)]
    lattice: LatticeFlags,
    #[arg(long, value_enum)]
    model: Model,
    #[arg(long, default_value_t = 0.1)]
    eps: f64,
    /// Radius of the seeded initial state.
    #[arg(long, default_value_t = 0.1)]
    rho: f64,
    /// Explicit initial state `x_0,…,x_{N-1},y_0,…,y_{N-1}`.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    init: Option<Vec<f64>>,
    #[arg(long, default_value_t = 10.0)]
    t_end: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CompareArgs {
    #[command(flatten)]
    lattice: LatticeFlags,
    #[arg(long, value_enum)]
    model_a: Model,
    #[arg(long, value_enum)]
    model_b: Model,
    /// Fixed coupling; by default `eps = rho^2` at every radius.
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long, value_delimiter = ',', default_value = "0.2,0.1,0.05")]
    rho_grid: Vec<f64>,
    /// Fixed horizon; by default `1/(rho^2 + eps)`.
    #[arg(long)]
    horizon: Option<f64>,
    #[arg(long, value_enum, default_value = "darboux")]
    transport: TransportArg,
    #[arg(long, default_value_t = 200)]
    samples: usize,
}

#[derive(Debug, Args)]
struct BudgetArgs {
    #[arg(long, default_value_t = 0.5)]
    nu: f64,
    #[arg(long, default_value_t = 0.1)]
    rho: f64,
    #[arg(long = "K", default_value_t = 1)]
    k: u32,
    #[arg(long = "L")]
    l: Option<usize>,
    #[arg(long, default_value_t = 1)]
    sites: usize,
    /// Override the majorant of the transformed function.
    #[arg(long)]
    f_majorant: Option<f64>,
    /// Override the majorant of the spatial field.
    #[arg(long)]
    x_majorant: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long, default_value_t = budget::DEFAULT_SHRINK)]
    d1: f64,
    #[arg(long, default_value_t = budget::DEFAULT_SHRINK)]
    d2: f64,
}

/// Bad flags or parameters; reported with exit code 2.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct UsageError(pub String);

/// A completed run whose check did not pass; exit code 1.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct StudyFailed(pub String);

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

fn core_err(e: darboux_core::Error) -> anyhow::Error {
    use darboux_core::Error as E;
    match e {
        E::InvalidArgument(_) | E::TooFewSites { .. } | E::FieldOrder { .. } | E::NonFinite => usage(e.to_string()),
        other => anyhow!(other),
    }
}

fn require_seed(ci: bool, seed: Option<u64>) -> anyhow::Result<u64> {
    match (ci, seed) {
        (_, Some(s)) => Ok(s),
        (true, None) => Err(usage("--ci requires --seed")),
        (false, None) => Ok(StudyConfig::default().seed),
    }
}

fn write_or_print(path: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            if !text.ends_with('\n') {
                out.write_all(b"\n")?;
            }
            Ok(())
        }
    }
}

fn pretty<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("report types serialize") + "\n"
}

fn normal_form(a: &NormalFormArgs) -> anyhow::Result<()> {
    if a.degree > 12 || a.sites > 8 {
        return Err(usage("normal-form supports degree <= 12 and sites <= 8"));
    }
    let model = match a.model {
        NfModel::Salerno => NormalFormModel::Salerno,
        NfModel::Al => NormalFormModel::Al,
    };
    let h = transform_h(model, a.k, a.l, a.degree, a.sites).map_err(core_err)?;
    let per_site = formula::per_site_formula(&h).unwrap_or_else(|| "not translation invariant".into());
    if a.formula {
        return write_or_print(a.out.as_deref(), &per_site);
    }
    let doc = json!({
        "model": format!("{:?}", a.model).to_lowercase(),
        "K": a.k,
        "L": a.l,
        "degree": a.degree,
        "sites": a.sites,
        "per_site": per_site,
        "poly": poly_json::to_value(&h),
    });
    write_or_print(a.out.as_deref(), &pretty(&doc))
}

fn verify_darboux(a: &VerifyArgs, ci: bool) -> anyhow::Result<()> {
    let seed = require_seed(ci, a.seed)?;
    if !(a.nu > 0.0 && a.rho > 0.0 && a.nu * a.rho * a.rho < 1.0) {
        return Err(usage("need nu > 0, rho > 0 and nu*rho^2 < 1"));
    }
    if a.samples == 0 || a.sites == 0 {
        return Err(usage("samples and sites must be positive"));
    }
    let dirs: Vec<Direction> = match a.direction {
        DirectionArg::Inverse => vec![Direction::Inverse],
        DirectionArg::Forward => vec![Direction::Forward],
        DirectionArg::Both => vec![Direction::Inverse, Direction::Forward],
    };
    let residuals = (0..a.samples as u64)
        .into_par_iter()
        .map(|i| {
            let z = sampling::state_in_ball(seed, i, a.sites, a.rho, Boundary::Periodic);
            dirs.iter()
                .map(|d| verify_pullback(&DarbouxMap::new(*d, a.nu), &z))
                .try_fold(0.0f64, |m, r| r.map(|r| m.max(r)))
        })
        .collect::<darboux_core::Result<Vec<f64>>>()
        .map_err(core_err)?;
    let max_residual = residuals.iter().copied().fold(0.0, f64::max);
    let pass = max_residual < a.tol;
    let doc = json!({
        "max_residual": max_residual,
        "samples": a.samples,
        "pass": pass,
        "nu": a.nu,
        "rho": a.rho,
        "seed": seed,
    });
    write_or_print(None, &pretty(&doc))?;
    if pass {
        Ok(())
    } else {
        Err(StudyFailed(format!("pullback residual {max_residual:e} exceeds {:e}", a.tol)).into())
    }
}

fn resolve_study(f: &StudyFlags, ci: bool) -> anyhow::Result<StudyConfig> {
    if ci && f.seed.is_none() {
        return Err(usage("--ci requires --seed"));
    }
    let mut cfg = StudyConfig::resolve(f.config.as_deref()).map_err(|e| usage(e.to_string()))?;
    if let Some(s) = f.seed {
        cfg.seed = s;
    }
    if let Some(v) = f.nu {
        cfg.nu = v;
    }
    if let Some(v) = f.gamma {
        cfg.gamma = v;
    }
    Ok(cfg)
}

fn finish_study(f: &StudyFlags, cfg: &StudyConfig, csv: &str, json: &str, pass: bool, what: &str) -> anyhow::Result<()> {
    if let Some(p) = &f.dump_config {
        fs::write(p, pretty(cfg)).with_context(|| format!("writing {}", p.display()))?;
    }
    if let Some(p) = &f.json {
        fs::write(p, json).with_context(|| format!("writing {}", p.display()))?;
    }
    match (&f.csv, &f.json) {
        (Some(p), _) => fs::write(p, csv).with_context(|| format!("writing {}", p.display()))?,
        (None, None) => write_or_print(None, csv)?,
        (None, Some(_)) => {}
    }
    if pass {
        Ok(())
    } else {
        Err(StudyFailed(format!("{what} did not pass")).into())
    }
}

fn truncation_study(a: &TruncationArgs, ci: bool) -> anyhow::Result<()> {
    let mut cfg = resolve_study(&a.study, ci)?;
    if let Some(g) = &a.study.rho_grid {
        cfg.rho_grid = g.clone();
    }
    if let Some(k) = &a.k {
        cfg.k_values = k.clone();
    }
    if a.no_cap {
        cfg.cap_l = None;
    } else if let Some(l) = a.l {
        cfg.cap_l = Some(l);
    }
    if let Some(d) = a.directions {
        cfg.directions = d;
    }
    cfg.validate().map_err(|e| usage(e.to_string()))?;
    info!("truncation study over K = {:?}, rho = {:?}", cfg.k_values, cfg.rho_grid);
    let report = experiments::truncation_study(&cfg).map_err(core_err)?;
    finish_study(&a.study, &cfg, &experiments::truncation_csv(&report), &pretty(&report), report.pass, "truncation study")
}

fn closeness_scaling(a: &ClosenessArgs, ci: bool) -> anyhow::Result<()> {
    let mut cfg = resolve_study(&a.study, ci)?;
    if let Some(g) = &a.study.rho_grid {
        cfg.closeness_rho_grid = g.clone();
    }
    if let Some(v) = a.sites {
        cfg.sites = v;
    }
    if let Some(v) = a.tol {
        cfg.tol = v;
    }
    if let Some(v) = a.samples {
        cfg.samples = v;
    }
    cfg.validate().map_err(|e| usage(e.to_string()))?;
    let pairs: Vec<Pair> = match a.pair {
        PairArg::SalernoZ0 => vec![Pair::SalernoZ0],
        PairArg::SalernoZ1 => vec![Pair::SalernoZ1],
        PairArg::AlZ0 => vec![Pair::AlZ0],
        PairArg::All => Pair::ALL.to_vec(),
    };
    info!("closeness study over rho = {:?}", cfg.closeness_rho_grid);
    let report = experiments::closeness_scaling(&cfg, &pairs).map_err(core_err)?;
    finish_study(&a.study, &cfg, &experiments::closeness_csv(&report), &pretty(&report), report.pass, "closeness study")
}

fn initial_state(l: &LatticeFlags, seed: u64, rho: f64, init: Option<&[f64]>) -> anyhow::Result<LatticeState> {
    match init {
        Some(v) => {
            if v.len() != 2 * l.sites {
                return Err(usage(format!("--init needs {} values for {} sites", 2 * l.sites, l.sites)));
            }
            LatticeState::from_flat(v, l.bc.into()).map_err(core_err)
        }
        None => {
            if !(rho >= 0.0 && rho.is_finite()) {
                return Err(usage("rho must be non-negative"));
            }
            Ok(sampling::state_on_sphere(seed, 0, l.sites, rho, l.bc.into()))
        }
    }
}

fn check_lattice(l: &LatticeFlags) -> anyhow::Result<()> {
    if l.sites == 0 {
        return Err(usage("sites must be positive"));
    }
    if !(1e-13..=1e-6).contains(&l.tol) {
        return Err(usage("tol must lie in [1e-13, 1e-6]"));
    }
    Ok(())
}

fn simulate(a: &SimulateArgs, ci: bool) -> anyhow::Result<()> {
    let l = &a.lattice;
    check_lattice(l)?;
    let seed = if a.init.is_some() { l.seed.unwrap_or(0) } else { require_seed(ci, l.seed)? };
    let params = ModelParams::new(a.model.into(), l.nu, l.gamma, a.eps).map_err(core_err)?;
    let s0 = initial_state(l, seed, a.rho, a.init.as_deref())?;
    let traj = integrate(&params, &s0, a.t_end, l.tol).map_err(core_err)?;
    let n = l.sites;
    let mut csv = String::from("t");
    for j in 0..n {
        csv.push_str(&format!(",x_{j}"));
    }
    for j in 0..n {
        csv.push_str(&format!(",y_{j}"));
    }
    csv.push_str(",H,P_or_norm\n");
    for (i, s) in traj.states.iter().enumerate() {
        csv.push_str(&format!("{}", traj.times[i]));
        for v in s.x.iter().chain(&s.y) {
            csv.push_str(&format!(",{v:e}"));
        }
        csv.push_str(&format!(",{:e},{:e}\n", traj.h_values[i], traj.p_values[i]));
    }
    write_or_print(a.out.as_deref(), &csv)
}

fn compare(a: &CompareArgs, ci: bool) -> anyhow::Result<()> {
    let l = &a.lattice;
    check_lattice(l)?;
    let seed = require_seed(ci, l.seed)?;
    if a.rho_grid.is_empty() || a.rho_grid.iter().any(|r| !(*r > 0.0)) {
        return Err(usage("rho-grid needs positive radii"));
    }
    let transport = match a.transport {
        TransportArg::None => Transport::None,
        TransportArg::Darboux => Transport::Darboux,
    };
    let cells = a
        .rho_grid
        .par_iter()
        .map(|&rho| {
            let eps = a.eps.unwrap_or(rho * rho);
            let horizon = a.horizon.unwrap_or(1.0 / (rho * rho + eps));
            let gamma_for = |m: Model| if matches!(m, Model::Al) { 0.0 } else { l.gamma };
            let ma = ModelParams::new(a.model_a.into(), l.nu, gamma_for(a.model_a), eps).map_err(core_err)?;
            let mb = ModelParams::new(a.model_b.into(), l.nu, gamma_for(a.model_b), eps).map_err(core_err)?;
            let s0 = sampling::state_on_sphere(seed, 0, l.sites, rho, l.bc.into());
            let c = compare_flows(&ma, &mb, &s0, horizon, transport, l.tol, a.samples).map_err(core_err)?;
            Ok(json!({ "rho": rho, "eps": eps, "horizon": horizon, "max_deviation": c.max }))
        })
        .collect::<anyhow::Result<Vec<_>>>()?;
    let devs: Vec<f64> = cells.iter().map(|c| c["max_deviation"].as_f64().unwrap_or(0.0)).collect();
    let exponent = experiments::log_log_slope(&a.rho_grid, &devs);
    write_or_print(None, &pretty(&json!({ "seed": seed, "cells": cells, "exponent": exponent })))
}

#[derive(Serialize)]
struct BudgetJson {
    rho: f64,
    delta: f64,
    t_horizon: f64,
    d1: f64,
    d2: f64,
    gamma: f64,
    gamma3: Option<f64>,
    gamma_star: f64,
    below_gamma_star: bool,
    convergence_warning: bool,
    convergence_time: f64,
    lie_derivative_bounds: Vec<f64>,
    truncation_bound: f64,
    field_truncation_bound: Option<f64>,
    deformation_bound: Option<f64>,
}

impl From<budget::ErrorBudget> for BudgetJson {
    fn from(b: budget::ErrorBudget) -> Self {
        BudgetJson {
            rho: b.rho,
            delta: b.delta,
            t_horizon: b.t_horizon,
            d1: b.d1,
            d2: b.d2,
            gamma: b.gamma,
            gamma3: b.gamma3,
            gamma_star: b.gamma_star,
            below_gamma_star: b.below_gamma_star,
            convergence_warning: b.convergence_warning,
            convergence_time: b.convergence_time,
            lie_derivative_bounds: b.lie_derivative_bounds,
            truncation_bound: b.truncation_bound,
            field_truncation_bound: b.field_truncation_bound,
            deformation_bound: b.deformation_bound,
        }
    }
}

fn error_budget(a: &BudgetArgs) -> anyhow::Result<()> {
    if !(a.nu > 0.0 && a.rho > 0.0) || a.sites == 0 {
        return Err(usage("nu, rho and sites must be positive"));
    }
    let delta = a.delta.unwrap_or(1.0 / (2.0 * a.nu * a.rho * a.rho));
    let f = match a.f_majorant {
        Some(f) => f,
        None => a.sites as f64 * budget::p_majorant(a.nu, a.rho).map_err(core_err)?,
    };
    let x = match (a.x_majorant, a.l) {
        (Some(x), _) => x,
        (None, None) => budget::moser_x_majorant(a.nu, a.rho, delta).map_err(core_err)?,
        (None, Some(l)) => budget::capped_x_majorant(a.nu, a.rho, delta, l),
    };
    let input = BudgetInput {
        f_majorant: f,
        x_majorant: x,
        rho: a.rho,
        delta,
        t_horizon: delta,
        d1: a.d1,
        d2: a.d2,
        k: a.k,
        y_majorant: a.l.map(|l| budget::field_remainder_majorant(a.nu, a.rho, delta, l)),
    };
    let b = budget::error_budget(&input).map_err(core_err)?;
    if b.convergence_warning {
        log::warn!("Gamma = {:.4} >= 1/e: the series need not converge at t = 1", b.gamma);
    }
    write_or_print(None, &pretty(&BudgetJson::from(b)))
}

fn dispatch(cli: &Cli) -> anyhow::Result<()> {
    match &cli.command {
        Command::NormalForm(a) => normal_form(a),
        Command::VerifyDarboux(a) => verify_darboux(a, cli.ci),
        Command::TruncationStudy(a) => truncation_study(a, cli.ci),
        Command::ClosenessScaling(a) => closeness_scaling(a, cli.ci),
        Command::Simulate(a) => simulate(a, cli.ci),
        Command::CompareFlows(a) => compare(a, cli.ci),
        Command::ErrorBudget(a) => error_budget(a),
    }
}

fn init_logging(verbose: u8) {
    let level = match verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        2 => log::LevelFilter::Debug,
        _ => log::LevelFilter::Trace,
    };
    let _ = env_logger::Builder::new().filter_level(level).parse_default_env().try_init();
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    init_logging(cli.verbose);
    let result = match cli.jobs {
        Some(0) => Err(usage("--jobs must be positive")),
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| dispatch(&cli)),
            Err(e) => Err(anyhow!(e)),
        },
        None => dispatch(&cli),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) if e.is::<UsageError>() => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_FAILED
        }
    }
}
