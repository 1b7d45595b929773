//! Convergence studies: degree laws of the truncated transformation of `P`
//! and the closeness of the nonstandard lattices to their normal forms.

use darboux_core::budget::{capped_x_majorant, error_budget, field_remainder_majorant, moser_x_majorant, p_majorant, BudgetInput};
use darboux_core::lattice::{compare_flows, Transport};
use darboux_core::lieseries::transform_p;
use darboux_core::{Boundary, ModelKind, ModelParams};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::StudyConfig;
use crate::sampling;

/// Extra series order kept beyond the leading residual term, so that the
/// numeric evaluation sees the exact residual to double precision.
const EXTRA_ORDER: usize = 8;

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(x: &[f64], y: &[f64]) -> Option<f64> {
    if x.len() != y.len() || x.len() < 2 || y.iter().any(|v| !(*v > 0.0)) {
        return None;
    }
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BudgetCell {
    pub rho: f64,
    /// Largest sampled `|½|z|² − exp_K(P)|` on the sphere of radius `rho`.
    pub measured: f64,
    pub truncation_bound: f64,
    pub field_truncation_bound: Option<f64>,
    pub gamma: f64,
    pub below_gamma_star: bool,
    pub dominated: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruncationRow {
    pub k: u32,
    pub capped_l: Option<usize>,
    /// Lowest phase degree of the exact residual, `None` if it vanishes.
    pub min_degree: Option<u32>,
    pub expected_degree: u32,
    /// Fitted exponent, `None` when the residual is identically zero.
    pub slope: Option<f64>,
    pub expected_slope: f64,
    pub budget: Vec<BudgetCell>,
    pub degree_ok: bool,
    pub slope_ok: bool,
    /// Every cell dominated, and `Γ < Γ*` wherever `ρ ≤ 0.1`.
    pub budget_ok: bool,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruncationReport {
    pub config: StudyConfig,
    pub cells: Vec<TruncationRow>,
    pub pass: bool,
}

fn truncation_row(cfg: &StudyConfig, k: u32, cap: Option<usize>, directions: &[Vec<f64>]) -> darboux_core::Result<TruncationRow> {
    let residual = transform_p(k, cap, k as usize + 3 + EXTRA_ORDER)?;
    let effective = cap.map_or(k, |l| k.min(l as u32));
    let expected_degree = 2 * effective + 4;
    let nsites = cfg.residual_sites;
    let mut measured = Vec::with_capacity(cfg.rho_grid.len());
    let mut budget = Vec::with_capacity(cfg.rho_grid.len());
    for &rho in &cfg.rho_grid {
        let mut worst = 0.0f64;
        for u in directions {
            let mut total = 0.0;
            for j in 0..nsites {
                let s = cfg.nu * rho * rho * (u[j] * u[j] + u[nsites + j] * u[nsites + j]);
                total += residual.eval(s, cfg.nu)?;
            }
            worst = worst.max(total.abs());
        }
        let t = 1.0 / (2.0 * cfg.nu * rho * rho);
        let x = match cap {
            None => moser_x_majorant(cfg.nu, rho, t)?,
            Some(l) => capped_x_majorant(cfg.nu, rho, t, l),
        };
        let mut input = BudgetInput::standard(cfg.nu, rho, nsites as f64 * p_majorant(cfg.nu, rho)?, x, k);
        input.y_majorant = cap.map(|l| field_remainder_majorant(cfg.nu, rho, t, l));
        let b = error_budget(&input)?;
        let bound = b.truncation_bound + b.field_truncation_bound.unwrap_or(0.0);
        budget.push(BudgetCell {
            rho,
            measured: worst,
            truncation_bound: b.truncation_bound,
            field_truncation_bound: b.field_truncation_bound,
            gamma: b.gamma,
            below_gamma_star: b.below_gamma_star,
            dominated: worst <= bound,
        });
        measured.push(worst);
    }
    let exact = residual.min_s_degree.is_none();
    let slope = if exact { None } else { log_log_slope(&cfg.rho_grid, &measured) };
    let expected_slope = expected_degree as f64;
    let degree_ok = residual.min_phase_degree() == Some(expected_degree);
    let slope_ok = slope.is_some_and(|s| (s - expected_slope).abs() <= cfg.slope_tolerance);
    let budget_ok = budget.iter().all(|c| c.dominated && (c.rho > 0.1 || c.below_gamma_star));
    Ok(TruncationRow {
        k,
        capped_l: cap,
        min_degree: residual.min_phase_degree(),
        expected_degree,
        slope,
        expected_slope,
        budget,
        degree_ok,
        slope_ok,
        budget_ok,
        pass: degree_ok && slope_ok && budget_ok,
    })
}

/// Transforms `P` for every `K` (uncapped, and capped at `L` if configured)
/// and checks the degree law, the fitted exponent and budget dominance.
pub fn truncation_study(cfg: &StudyConfig) -> darboux_core::Result<TruncationReport> {
    let dim = 2 * cfg.residual_sites;
    let directions: Vec<Vec<f64>> = (0..cfg.directions as u64)
        .map(|i| sampling::unit_direction(&mut sampling::rng(cfg.seed, i), dim))
        .collect();
    let mut jobs: Vec<(u32, Option<usize>)> = cfg.k_values.iter().map(|&k| (k, None)).collect();
    if let Some(l) = cfg.cap_l {
        jobs.extend(cfg.k_values.iter().map(|&k| (k, Some(l))));
    }
    let cells = jobs
        .par_iter()
        .map(|&(k, cap)| truncation_row(cfg, k, cap, &directions))
        .collect::<darboux_core::Result<Vec<_>>>()?;
    let pass = cells.iter().all(|r| r.pass);
    Ok(TruncationReport { config: cfg.clone(), cells, pass })
}

pub fn truncation_csv(report: &TruncationReport) -> String {
    let mut out = String::from("K,min_degree,slope,capped_L\n");
    for r in &report.cells {
        let degree = r.min_degree.map_or("none".to_owned(), |d| d.to_string());
        let slope = r.slope.map_or("exact".to_owned(), |s| format!("{s:.6}"));
        let cap = r.capped_l.map_or(String::new(), |l| l.to_string());
        out.push_str(&format!("{},{degree},{slope},{cap}\n", r.k));
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Pair {
    SalernoZ0,
    SalernoZ1,
    AlZ0,
}

impl Pair {
    pub const ALL: [Pair; 3] = [Pair::SalernoZ0, Pair::SalernoZ1, Pair::AlZ0];

    pub fn name(self) -> &'static str {
        match self {
            Pair::SalernoZ0 => "salerno-z0",
            Pair::SalernoZ1 => "salerno-z1",
            Pair::AlZ0 => "al-z0",
        }
    }

    /// Accepted range of the fitted deviation exponent.
    pub fn window(self) -> (f64, f64) {
        match self {
            Pair::SalernoZ0 | Pair::AlZ0 => (2.7, 3.3),
            Pair::SalernoZ1 => (4.5, 5.5),
        }
    }

    /// Models, coupling and horizon at radius `rho`.
    fn setup(self, cfg: &StudyConfig, rho: f64) -> darboux_core::Result<(ModelParams, ModelParams, f64, f64)> {
        let (a, b, gamma, eps) = match self {
            Pair::SalernoZ0 => (ModelKind::Salerno, ModelKind::Z0, cfg.gamma, cfg.salerno_eps.unwrap_or(rho * rho)),
            Pair::SalernoZ1 => (ModelKind::Salerno, ModelKind::Z1, cfg.gamma, cfg.salerno_eps.unwrap_or(rho * rho)),
            Pair::AlZ0 => (ModelKind::Al, ModelKind::Z0, 0.0, cfg.al_eps),
        };
        let horizon = match self {
            Pair::AlZ0 => 1.0 / eps,
            _ => 1.0 / (rho * rho + eps),
        };
        let ma = ModelParams::new(a, cfg.nu, gamma, eps)?;
        let mb = ModelParams::new(b, cfg.nu, gamma, eps)?;
        Ok((ma, mb, eps, horizon))
    }
}

impl std::str::FromStr for Pair {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Pair::ALL.into_iter().find(|p| p.name() == s).ok_or_else(|| format!("unknown pair {s:?}"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClosenessCell {
    pub rho: f64,
    pub eps: f64,
    pub horizon: f64,
    pub max_deviation: Option<f64>,
    /// Why the cell produced no deviation (integration failure).
    pub failed: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClosenessStudy {
    pub pair: Pair,
    pub cells: Vec<ClosenessCell>,
    pub exponent: Option<f64>,
    pub window: (f64, f64),
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClosenessReport {
    pub config: StudyConfig,
    pub cells: Vec<ClosenessStudy>,
    pub pass: bool,
}

/// Starts both lattices of `pair` from `ρu` with a seeded unit direction `u`
/// and fits the growth of the largest deviation over the horizon in `ρ`.
pub fn closeness_pair(cfg: &StudyConfig, pair: Pair) -> darboux_core::Result<ClosenessStudy> {
    let cells = cfg
        .closeness_rho_grid
        .par_iter()
        .map(|&rho| {
            let (a, b, eps, horizon) = pair.setup(cfg, rho)?;
            let s0 = sampling::state_on_sphere(cfg.seed, 0, cfg.sites, rho, Boundary::Periodic);
            let (max_deviation, failed) =
                match compare_flows(&a, &b, &s0, horizon, Transport::Darboux, cfg.tol, cfg.samples) {
                    Ok(curve) => (Some(curve.max), None),
                    Err(e) => {
                        log::warn!("{} at rho = {rho}: {e}", pair.name());
                        (None, Some(e.to_string()))
                    }
                };
            Ok(ClosenessCell { rho, eps, horizon, max_deviation, failed })
        })
        .collect::<darboux_core::Result<Vec<_>>>()?;
    let (rhos, devs): (Vec<f64>, Vec<f64>) =
        cells.iter().filter_map(|c| c.max_deviation.map(|d| (c.rho, d))).unzip();
    let exponent = log_log_slope(&rhos, &devs);
    let window = pair.window();
    let all_ran = cells.iter().all(|c| c.failed.is_none());
    let pass = all_ran && exponent.is_some_and(|e| e >= window.0 && e <= window.1);
    Ok(ClosenessStudy { pair, cells, exponent, window, pass })
}

pub fn closeness_scaling(cfg: &StudyConfig, pairs: &[Pair]) -> darboux_core::Result<ClosenessReport> {
    let cells = pairs
        .par_iter()
        .map(|&p| closeness_pair(cfg, p))
        .collect::<darboux_core::Result<Vec<_>>>()?;
    let pass = cells.iter().all(|c| c.pass);
    Ok(ClosenessReport { config: cfg.clone(), cells, pass })
}

pub fn closeness_csv(report: &ClosenessReport) -> String {
    let mut out = String::from("pair,rho,eps,horizon,max_deviation\n");
    for study in &report.cells {
        for c in &study.cells {
            let dev = c.max_deviation.map_or("failed".to_owned(), |d| format!("{d:e}"));
            out.push_str(&format!("{},{},{},{},{dev}\n", study.pair.name(), c.rho, c.eps, c.horizon));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_a_power_law() {
        let x = [0.2, 0.1, 0.05];
        let y: Vec<f64> = x.iter().map(|v: &f64| 3.0 * v.powi(5)).collect();
        assert!((log_log_slope(&x, &y).unwrap() - 5.0).abs() < 1e-12);
        assert!(log_log_slope(&x, &[1.0, 0.0, 1.0]).is_none());
    }

    #[test]
    fn pair_names_round_trip() {
        for p in Pair::ALL {
            assert_eq!(p.name().parse::<Pair>().unwrap(), p);
        }
    }
}
