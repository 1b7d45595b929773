//! Lie series along the extended Moser field `Ṽ = (1, V_t)`.
//!
//! On a lattice polynomial the Lie derivative is
//! `L f = ∂_t f + Σ_j χ(t, s_j)·(x_j ∂_{x_j} + y_j ∂_{y_j}) f`; the Euler
//! operator in the bracket just multiplies a monomial by its degree in site
//! `j`. Powers `L^k f` are kept as polynomials in `t` and `t` is replaced by
//! `τ` only once the truncated exponential has been summed.

use alloc::vec::Vec;

use num_traits::Zero;

use crate::moser::build_moser_field;
use crate::polyring::{rat, radial_expand, MIndex, Param, ParamValues, Poly, RadialFn, RadialSeries, Rat, Var};
use crate::{Error, Result};

/// `(1, V_t)` with `V_t = χ(t, s_j)(x_j, y_j)` on every site, optionally
/// truncated to the Taylor polynomial of phase degree `2L + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtendedField {
    pub chi: RadialSeries,
    pub cap: Option<usize>,
}

impl ExtendedField {
    pub fn new(chi: RadialSeries, cap: Option<usize>) -> Self {
        ExtendedField { chi, cap }
    }

    /// Moser field expanded to `order`, capped at `2L + 1` if `cap = Some(L)`.
    pub fn moser(order: usize, cap: Option<usize>) -> Self {
        ExtendedField::new(build_moser_field(order).chi, cap)
    }

    /// The radial multiplier actually applied: coefficients above the cap
    /// are zeroed, the series order is kept.
    pub fn effective_chi(&self) -> RadialSeries {
        match self.cap {
            Some(l) if l < self.chi.order() => self.chi.truncate(l).truncate(self.chi.order()),
            _ => self.chi.clone(),
        }
    }

    /// Series order needed so that no term of phase degree ≤ `degree` is lost.
    pub fn required_order(&self, degree: u32) -> usize {
        let need = (degree.saturating_sub(1) / 2) as usize;
        self.cap.map_or(need, |l| need.min(l))
    }
}

/// Precomputed per-site multipliers `χ(t, s_j)` for one lattice shape, so
/// that repeated applications do not re-expand the series.
#[derive(Debug, Clone)]
pub struct LieOperator {
    multipliers: Vec<Poly>,
    with_time: bool,
    nsites: usize,
    trunc: u32,
}

impl LieOperator {
    /// Operator of `field` acting on polynomials with `nsites` sites and
    /// truncation degree `trunc`.
    pub fn new(field: &ExtendedField, nsites: usize, trunc: u32) -> Result<Self> {
        let need = field.required_order(trunc);
        let have = field.chi.order();
        if have < need {
            return Err(Error::FieldOrder {
                have,
                need,
                degree: trunc,
            });
        }
        Ok(LieOperator::from_chi(&field.effective_chi(), nsites, trunc, true))
    }

    /// Operator of a purely spatial radial field `(0, χ(t, s_j)(x_j, y_j))`,
    /// e.g. the difference of two extended fields.
    pub fn spatial(chi: &RadialSeries, nsites: usize, trunc: u32) -> Self {
        LieOperator::from_chi(chi, nsites, trunc, false)
    }

    fn from_chi(chi: &RadialSeries, nsites: usize, trunc: u32, with_time: bool) -> Self {
        LieOperator {
            multipliers: (0..nsites).map(|j| chi.to_poly(nsites, trunc, j)).collect(),
            with_time,
            nsites,
            trunc,
        }
    }

    pub fn apply(&self, f: &Poly) -> Result<Poly> {
        if f.nsites() != self.nsites {
            return Err(Error::SiteMismatch {
                left: f.nsites(),
                right: self.nsites,
            });
        }
        if f.trunc() != self.trunc {
            return Err(Error::TruncationMismatch {
                left: f.trunc(),
                right: self.trunc,
            });
        }
        let mut out = if self.with_time {
            f.diff(Var::T)?
        } else {
            Poly::zero(self.nsites, self.trunc)
        };
        for (j, m) in self.multipliers.iter().enumerate() {
            let euler = f.map_terms(|idx, c| c * Rat::from_integer(idx.site_degree(j).into()));
            if !euler.is_zero() {
                out = out.checked_add(&m.checked_mul(&euler)?)?;
            }
        }
        Ok(out)
    }

    /// `Σ_{k=0}^{K} sign^k/k! · L^k f` with `t ↦ tau` after summation.
    pub fn exp_trunc(&self, f: &Poly, k_max: u32, sign: i32, tau: &Rat) -> Result<Poly> {
        if sign != 1 && sign != -1 {
            return Err(Error::InvalidArgument("sign must be +1 or -1".into()));
        }
        let mut acc = f.clone();
        let mut term = f.clone();
        for k in 1..=k_max {
            term = self.apply(&term)?.scale(&rat(sign as i64, k as i64));
            if term.is_zero() {
                break;
            }
            acc = acc.checked_add(&term)?;
        }
        Ok(acc.substitute_t(tau))
    }
}

/// `L_Ṽ f`, truncated at the phase degree of `f`.
pub fn lie_derivative(f: &Poly, field: &ExtendedField) -> Result<Poly> {
    LieOperator::new(field, f.nsites(), f.trunc())?.apply(f)
}

/// Truncated Lie series `Σ_{k≤K} sign^k/k! L^k f` evaluated at `t = tau`.
/// `sign = −1, tau = 1` expresses `f` in the new coordinates; `sign = +1,
/// tau = 0` gives the forward flow.
pub fn exp_trunc(f: &Poly, field: &ExtendedField, k_max: u32, sign: i32, tau: &Rat) -> Result<Poly> {
    LieOperator::new(field, f.nsites(), f.trunc())?.exp_trunc(f, k_max, sign, tau)
}

/// Residual of the transformed conserved quantity, in radial form.
#[derive(Debug, Clone, PartialEq)]
pub struct PResidual {
    /// `ν·(½s/ν − exp_K(P))` as a series in `s` (free of `ν`).
    pub scaled_residual: RadialSeries,
    /// Lowest power of `s` present, `None` if the residual vanishes to order.
    pub min_s_degree: Option<usize>,
}

impl PResidual {
    /// Lowest phase degree of the residual (`2·min_s_degree`).
    pub fn min_phase_degree(&self) -> Option<u32> {
        self.min_s_degree.map(|k| 2 * k as u32)
    }

    /// Residual at radial variable `s`, i.e. `scaled_residual(s)/ν`.
    pub fn eval(&self, s: f64, nu: f64) -> Result<f64> {
        let v = self
            .scaled_residual
            .coeffs()
            .iter()
            .rev()
            .try_fold(0.0, |acc, c| Ok::<_, Error>(acc * s + c.eval(&[], &[], &ParamValues::new(nu, 0.0, 0.0), 0.0)?))?;
        Ok(v / nu)
    }
}

/// Transforms `P = ln(1 + ν(x² + y²))/(2ν)` on one site with the Lie series
/// truncated at `K` (field capped at `2L + 1` if given), and returns the
/// deviation from `½(x² + y²)` through order `s^S`.
pub fn transform_p(k_max: u32, cap: Option<usize>, s_order: usize) -> Result<PResidual> {
    if s_order < k_max as usize + 3 {
        return Err(Error::InvalidArgument(alloc::format!(
            "s-order {s_order} must be at least K + 3 = {}",
            k_max + 3
        )));
    }
    let d = 2 * s_order as u32;
    // ν·P is free of negative ν powers; L commutes with multiplying by ν.
    let nu_p = radial_expand(RadialFn::PRadial, s_order).to_poly(1, d, 0);
    let field = ExtendedField::moser(s_order, cap);
    let transformed = exp_trunc(&nu_p, &field, k_max, -1, &rat(1, 1))?;
    let half_s = RadialSeries::from_rationals(&[rat(0, 1), rat(1, 2)]).to_poly(1, d, 0);
    let residual = half_s.checked_sub(&transformed)?;
    let scaled_residual = RadialSeries::from_site_poly(&residual, 0, s_order).ok_or_else(|| {
        Error::InvalidArgument("transformed P is not radial".into())
    })?;
    let min_s_degree = scaled_residual.min_degree();
    Ok(PResidual {
        scaled_residual,
        min_s_degree,
    })
}

/// Lattice model whose Hamiltonian is put into normal form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormalFormModel {
    Salerno,
    Al,
}

fn param_monomial(nsites: usize, trunc: u32, params: [u32; 3], c: Rat) -> Poly {
    Poly::monomial(nsites, trunc, MIndex::new(alloc::vec![0; 2 * nsites], 0, params), c)
}

/// Nearest-neighbour coupling `ε Σ_j (x_{j+1}x_j + y_{j+1}y_j)` on a
/// periodic ring.
pub fn coupling_poly(nsites: usize, trunc: u32) -> Result<Poly> {
    let mut out = Poly::zero(nsites, trunc);
    for j in 0..nsites {
        let k = (j + 1) % nsites;
        for v in [Var::X as fn(usize) -> Var, Var::Y] {
            out = out.checked_add(&Poly::var(nsites, trunc, v(k))?.checked_mul(&Poly::var(nsites, trunc, v(j))?)?)?;
        }
    }
    out.checked_mul(&Poly::param(nsites, trunc, Param::Eps))
}

/// Salerno on-site energy `γ Σ_j Σ_{k≥2} (−1)^k ν^{k−2} A_j^k/(4k)`,
/// the Taylor expansion of `(γ/4ν²)[νA − ln(1+νA)]`, through phase degree
/// `trunc`.
pub fn salerno_onsite_poly(nsites: usize, trunc: u32) -> Result<Poly> {
    let mut out = Poly::zero(nsites, trunc);
    for j in 0..nsites {
        let a = Poly::site_norm2(nsites, trunc, j)?;
        for k in 2..=(trunc / 2) {
            let c = rat(if k % 2 == 0 { 1 } else { -1 }, 4 * k as i64);
            let coeff = param_monomial(nsites, trunc, [k - 2, 1, 0], c);
            out = out.checked_add(&a.pow(k).checked_mul(&coeff)?)?;
        }
    }
    Ok(out)
}

/// Taylor expansion of the model Hamiltonian in cartesian variables,
/// periodic boundary.
pub fn model_hamiltonian_poly(model: NormalFormModel, nsites: usize, trunc: u32) -> Result<Poly> {
    let h1 = coupling_poly(nsites, trunc)?;
    match model {
        NormalFormModel::Salerno => salerno_onsite_poly(nsites, trunc)?.checked_add(&h1),
        NormalFormModel::Al => Ok(h1),
    }
}

/// `exp_K(−L_Ṽ) H` at `τ = 1` with the field capped at `2L + 1`, truncated at
/// phase degree `degree`, on a periodic ring of `nsites ≥ 3` sites.
pub fn transform_h(model: NormalFormModel, k_max: u32, cap: usize, degree: u32, nsites: usize) -> Result<Poly> {
    if nsites < 3 {
        return Err(Error::TooFewSites { need: 3, got: nsites });
    }
    let h = model_hamiltonian_poly(model, nsites, degree)?;
    let order = (degree as usize).div_ceil(2).max(1);
    let field = ExtendedField::moser(order, Some(cap));
    exp_trunc(&h, &field, k_max, -1, &rat(1, 1))
}

/// Forward Lie-series images `(exp_K(L) x_site, exp_K(L) y_site)` at `τ = 0`.
pub fn coordinate_flow(field: &ExtendedField, k_max: u32, nsites: usize, trunc: u32, site: usize) -> Result<(Poly, Poly)> {
    let op = LieOperator::new(field, nsites, trunc)?;
    let x = op.exp_trunc(&Poly::var(nsites, trunc, Var::X(site))?, k_max, 1, &Rat::zero())?;
    let y = op.exp_trunc(&Poly::var(nsites, trunc, Var::Y(site))?, k_max, 1, &Rat::zero())?;
    Ok((x, y))
}

/// Radial-form Lie derivative `F_t + 2χ s F_s` for a single-site radial
/// function `F(t, s)`. Used as an independent check of the lattice engine.
pub fn radial_lie_derivative(f: &RadialSeries, chi: &RadialSeries) -> RadialSeries {
    let order = f.order().min(chi.order());
    let f = f.truncate(order);
    let drift = chi.truncate(order).mul(&f.deriv_s().truncate(order)).mul_s().scale(&rat(2, 1));
    f.deriv_t().add(&drift)
}
