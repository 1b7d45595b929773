//! A-priori bounds for Lie series on the domain `|t| < δ`, `z ∈ D_ρ`.
//!
//! Sup norms are replaced by coefficient majorants, which dominate them on
//! the polydisk, so every figure returned here is a conservative upper bound.

use alloc::vec::Vec;
use core::f64::consts::E;

use crate::moser::build_moser_field;
use crate::polyring::ParamValues;
use crate::{Error, Result};

/// `Γ* = e/(1 + e²)`: below it the series at `t = ±1` are admissible.
pub const GAMMA_STAR: f64 = E / (1.0 + E * E);

/// Shrinking factor used by default for both the time and the phase domain.
pub const DEFAULT_SHRINK: f64 = 0.25;

/// Inputs of [`error_budget`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BudgetInput {
    /// Majorant of the transformed function on the full domain.
    pub f_majorant: f64,
    /// Majorant of the spatial field component `X`.
    pub x_majorant: f64,
    pub rho: f64,
    pub delta: f64,
    /// Time horizon of the field (only recorded; the bounds use `delta`).
    pub t_horizon: f64,
    pub d1: f64,
    pub d2: f64,
    pub k: u32,
    /// Majorant of the field difference `Y = X₁ − X₂`, if a truncated field
    /// is compared with the full one.
    pub y_majorant: Option<f64>,
}

impl BudgetInput {
    /// Domain `δ = T = 1/(2νρ²)` with `d₁ = d₂ = 1/4`.
    pub fn standard(nu: f64, rho: f64, f_majorant: f64, x_majorant: f64, k: u32) -> Self {
        let delta = 1.0 / (2.0 * nu * rho * rho);
        BudgetInput {
            f_majorant,
            x_majorant,
            rho,
            delta,
            t_horizon: delta,
            d1: DEFAULT_SHRINK,
            d2: DEFAULT_SHRINK,
            k,
            y_majorant: None,
        }
    }
}

/// Derived quantities and bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorBudget {
    pub rho: f64,
    pub delta: f64,
    pub t_horizon: f64,
    pub d1: f64,
    pub d2: f64,
    pub gamma: f64,
    pub gamma3: Option<f64>,
    pub gamma_star: f64,
    /// `Γ < Γ*`: the maps at `t = ±1` are well defined.
    pub below_gamma_star: bool,
    /// `Γ ≥ 1/e`: convergence at `t = ±1` is not guaranteed.
    pub convergence_warning: bool,
    /// Series converge for `|t| < 1/(eΓ)`.
    pub convergence_time: f64,
    /// Bounds on `‖L^k f‖` on the shrunk domain, `k = 0..=K`.
    pub lie_derivative_bounds: Vec<f64>,
    /// `(eΓ)^{K+1}‖f‖`, the Lie-series truncation bound.
    pub truncation_bound: f64,
    /// `Γ₃‖f‖(1 + Σ_k k(eΓ)^k)` when a field difference is given.
    pub field_truncation_bound: Option<f64>,
    /// Displacement bound `(d₂ρ/e²)·eΓ/(1 − eΓ)` of the maps from the identity.
    pub deformation_bound: Option<f64>,
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if !(v.is_finite() && v > 0.0) {
        return Err(Error::InvalidArgument(alloc::format!("{name} must be positive and finite")));
    }
    Ok(())
}

fn check_shrink(d: f64) -> Result<()> {
    if !(d > 0.0 && d < 1.0) {
        return Err(Error::InvalidArgument("shrinking factors must lie in (0, 1)".into()));
    }
    Ok(())
}

/// `Γ = 1/(d₁δ) + ‖X‖/(d₂ρ)`.
pub fn gamma(x_majorant: f64, rho: f64, delta: f64, d1: f64, d2: f64) -> f64 {
    1.0 / (d1 * delta) + x_majorant / (d2 * rho)
}

/// Time-derivative Cauchy bound `‖∂_t f‖ ≤ ‖f‖/(d₁δ)`.
pub fn cauchy_time(f_majorant: f64, delta: f64, d1: f64) -> f64 {
    f_majorant / (d1 * delta)
}

/// Phase-derivative Cauchy bound `‖∂_z f‖ ≤ ‖f‖/(d₂ρ)`.
pub fn cauchy_phase(f_majorant: f64, rho: f64, d2: f64) -> f64 {
    f_majorant / (d2 * rho)
}

/// `‖L^k f‖ ≤ k!/e (eΓ)^k ‖f‖` for `k ≥ 1` (and `‖f‖` for `k = 0`).
pub fn lie_power_bound(k: u32, gamma: f64, f_majorant: f64) -> f64 {
    if k == 0 {
        return f_majorant;
    }
    let fact: f64 = (1..=k).map(f64::from).product();
    fact / E * libm::pow(E * gamma, k as f64) * f_majorant
}

/// Bound for a product of `k` different Lie derivatives,
/// `k! e^{k−1} Π Γ_j ‖f‖`.
pub fn lie_product_bound(gammas: &[f64], f_majorant: f64) -> f64 {
    let k = gammas.len();
    if k == 0 {
        return f_majorant;
    }
    let fact: f64 = (1..=k).map(|i| i as f64).product();
    fact * libm::pow(E, (k - 1) as f64) * gammas.iter().product::<f64>() * f_majorant
}

/// `C(n, k)` as a float.
fn binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Taylor remainder of order `k + 1` in `n` variables on `D_ρ`:
/// `(2ρ)^{k+1} E ‖f‖_1` with `E = C(n + k, k + 1)`; needs `ρ < ½`.
pub fn taylor_remainder_bound(rho: f64, k: u32, n: u32, f_unit_majorant: f64) -> Result<f64> {
    if !(rho > 0.0 && rho < 0.5) {
        return Err(Error::InvalidArgument("the Taylor remainder bound needs 0 < rho < 1/2".into()));
    }
    let e = binomial((n + k) as u64, (k + 1) as u64);
    Ok(libm::pow(2.0 * rho, (k + 1) as f64) * e * f_unit_majorant)
}

/// Field-truncation bound `(E/d₂)‖X‖_1 ‖f‖ ρ^L`.
pub fn field_truncation_decay_bound(e: f64, d2: f64, x_unit_majorant: f64, f_majorant: f64, rho: f64, l: u32) -> f64 {
    e / d2 * x_unit_majorant * f_majorant * libm::pow(rho, l as f64)
}

/// `1 + Σ_{k≥1} k q^k = 1 + q/(1 − q)²` for `q < 1`.
fn weighted_geometric(q: f64) -> f64 {
    if q < 1.0 {
        1.0 + q / ((1.0 - q) * (1.0 - q))
    } else {
        f64::INFINITY
    }
}

pub fn error_budget(input: &BudgetInput) -> Result<ErrorBudget> {
    check_positive("rho", input.rho)?;
    check_positive("delta", input.delta)?;
    check_positive("T", input.t_horizon)?;
    check_shrink(input.d1)?;
    check_shrink(input.d2)?;
    if !(input.f_majorant.is_finite() && input.f_majorant >= 0.0)
        || !(input.x_majorant.is_finite() && input.x_majorant >= 0.0)
    {
        return Err(Error::InvalidArgument("majorants must be finite and nonnegative".into()));
    }
    let g = gamma(input.x_majorant, input.rho, input.delta, input.d1, input.d2);
    let eg = E * g;
    let gamma3 = match input.y_majorant {
        Some(y) if !(y.is_finite() && y >= 0.0) => {
            return Err(Error::InvalidArgument("Y majorant must be finite and nonnegative".into()))
        }
        Some(y) => Some(y / (input.d2 * input.rho)),
        None => None,
    };
    Ok(ErrorBudget {
        rho: input.rho,
        delta: input.delta,
        t_horizon: input.t_horizon,
        d1: input.d1,
        d2: input.d2,
        gamma: g,
        gamma3,
        gamma_star: GAMMA_STAR,
        below_gamma_star: g < GAMMA_STAR,
        convergence_warning: g >= 1.0 / E,
        convergence_time: 1.0 / eg,
        lie_derivative_bounds: (0..=input.k).map(|k| lie_power_bound(k, g, input.f_majorant)).collect(),
        truncation_bound: libm::pow(eg, (input.k + 1) as f64) * input.f_majorant,
        // the field difference shares the time component, so Γ bounds both fields
        field_truncation_bound: gamma3.map(|g3| g3 * input.f_majorant * weighted_geometric(eg)),
        deformation_bound: (eg < 1.0).then(|| input.d2 * input.rho / (E * E) * eg / (1.0 - eg)),
    })
}

/// `−ln(1 − σ)/σ − 1 = Σ_{k≥1} σ^k/(k+1)`, the majorant of `ln(1+s)/s − 1`
/// on `|s| ≤ σ < 1`.
fn log_factor_majorant(sigma: f64) -> f64 {
    if sigma < 1e-4 {
        (1..8).map(|k| libm::pow(sigma, k as f64) / (k + 1) as f64).sum()
    } else {
        -libm::log1p(-sigma) / sigma - 1.0
    }
}

/// Sup bound of the Moser field `|χ(t, s)|·|z|` for `|t| ≤ T`, `|z| ≤ ρ`,
/// using `|1 + ts| ≥ 1 − Tνρ²`. Requires `Tνρ² < 1` and `νρ² < 1`.
pub fn moser_x_majorant(nu: f64, rho: f64, t_max: f64) -> Result<f64> {
    let s = nu * rho * rho;
    if !(s < 1.0 && t_max * s < 1.0) {
        return Err(Error::InvalidArgument("domain exceeds the analyticity radius of the field".into()));
    }
    Ok((1.0 + s) / (2.0 * (1.0 - t_max * s)) * log_factor_majorant(s) * rho)
}

/// `|χ_k|(T)`: each coefficient of the Moser field series with `t` replaced
/// by `T` and every term taken in absolute value.
fn chi_coefficient_majorants(order: usize, t_max: f64) -> Vec<f64> {
    let chi = build_moser_field(order).chi;
    let unit = ParamValues::new(1.0, 1.0, 1.0);
    chi.coeffs().iter().map(|c| c.majorant_norm_bounded(1.0, &unit, t_max)).collect()
}

/// Majorant of the field truncated at phase degree `2L + 1`:
/// `Σ_{k=1}^{L} |χ_k|(T) (νρ²)^k ρ`.
pub fn capped_x_majorant(nu: f64, rho: f64, t_max: f64, cap: usize) -> f64 {
    let s = nu * rho * rho;
    chi_coefficient_majorants(cap, t_max)
        .iter()
        .enumerate()
        .map(|(k, c)| c * libm::pow(s, k as f64))
        .sum::<f64>()
        * rho
}

/// Series order used for the field-remainder majorant.
pub const TAIL_ORDER: usize = 40;

/// Majorant of the field remainder `V − V^{(2L+1)}`:
/// `Σ_{k=L+1}^{40} |χ_k|(T) (νρ²)^k ρ`. The terms decay geometrically once
/// `Tνρ² < 1`, so the tail beyond order 40 is negligible for `Tνρ² ≤ ½`.
pub fn field_remainder_majorant(nu: f64, rho: f64, t_max: f64, cap: usize) -> f64 {
    let s = nu * rho * rho;
    chi_coefficient_majorants(TAIL_ORDER, t_max)
        .iter()
        .enumerate()
        .skip(cap + 1)
        .map(|(k, c)| c * libm::pow(s, k as f64))
        .sum::<f64>()
        * rho
}

/// Majorant of `P = ln(1 + ν|z|²)/(2ν)` on `D_ρ`: `−ln(1 − νρ²)/(2ν)`.
pub fn p_majorant(nu: f64, rho: f64) -> Result<f64> {
    let s = nu * rho * rho;
    if !(s < 1.0) {
        return Err(Error::InvalidArgument("nu*rho^2 must be below 1".into()));
    }
    Ok(rho * rho * (1.0 + log_factor_majorant(s)) / 2.0)
}

/// Budget for transforming `P` on the standard domain of radius `rho`.
pub fn p_budget(nu: f64, rho: f64, k: u32, cap: Option<usize>) -> Result<ErrorBudget> {
    let t = 1.0 / (2.0 * nu * rho * rho);
    let f = p_majorant(nu, rho)?;
    let x = match cap {
        None => moser_x_majorant(nu, rho, t)?,
        Some(l) => capped_x_majorant(nu, rho, t, l),
    };
    let mut input = BudgetInput::standard(nu, rho, f, x, k);
    input.y_majorant = cap.map(|l| field_remainder_majorant(nu, rho, t, l));
    error_budget(&input)
}
