//! Moser's construction of the Darboux map for the weighted bracket, and the
//! closed-form map itself.
//!
//! Per site the symplectic form is `Ω(z) = J/(1 + ν|z|²)`. Interpolating
//! `Ω_t = J + t(Ω − J)` and solving `Ω_t V_t = a` with the rotation-gauge
//! potential `a = c(s)(−p, q)` yields the radial field `V_t = χ(t, s)(q, p)`.
//! Its time-one flow is the forward map `φ(q) = ξ(s)q`; the inverse is
//! `φ⁻¹(x) = σ(s)x`.

use alloc::vec::Vec;

use crate::lattice::LatticeState;
use crate::ode::Dopri5;
use crate::polyring::{rat, radial_expand, Poly, RadialFn, RadialSeries, Var};
use crate::scalar;
use crate::{Error, Result};

/// The time-dependent Moser field in radial form.
#[derive(Debug, Clone, PartialEq)]
pub struct MoserField {
    pub chi: RadialSeries,
    /// `χ` is also available in closed form (see [`scalar::chi`]).
    pub closed_form_available: bool,
    /// Numeric `ν`, or `None` while it is kept formal.
    pub nu: Option<f64>,
}

impl MoserField {
    pub fn with_nu(mut self, nu: f64) -> Self {
        self.nu = Some(nu);
        self
    }
}

/// Radial coefficient `c(s) = ½[ln(1+s)/s − 1]` of the potential
/// `a(q, p) = c(s)(−p, q)`, expanded to order `order`.
pub fn build_vector_potential(order: usize) -> RadialSeries {
    radial_expand(RadialFn::LogFactor, order).scale(&rat(1, 2))
}

/// `∂_p a₁ − ∂_q a₂ − s/(1+s)` for a single site with `s = ν(q² + p²)`,
/// expanded with the potential at order `order`. Terms of phase degree up
/// to `2·order` are exact; the potential solves the curl equation iff the
/// result is zero.
pub fn curl_residual(order: usize) -> Result<Poly> {
    // a = c(s)(−p, q) reaches degree 2·order + 1 before differentiation
    let d = 2 * order as u32 + 1;
    let c = build_vector_potential(order).to_poly(1, d, 0);
    let q = Poly::var(1, d, Var::X(0))?;
    let p = Poly::var(1, d, Var::Y(0))?;
    let a1 = -&(&c * &p);
    let a2 = &c * &q;
    let curl = a1.diff(Var::Y(0))?.checked_sub(&a2.diff(Var::X(0))?)?;
    // s/(1+s) = Σ_{k≥1} (−1)^{k+1} s^k
    let target = RadialSeries::from_rationals(
        &(0..=order)
            .map(|k| match k {
                0 => rat(0, 1),
                k => rat(if k % 2 == 1 { 1 } else { -1 }, 1),
            })
            .collect::<Vec<_>>(),
    )
    .to_poly(1, d, 0);
    Ok(curl.checked_sub(&target)?.with_trunc(d - 1))
}

/// Moser field `χ = (1+s)/(1+ts) · c(s)`: the radial part of `Ω_t^{-⊤}`
/// applied to the potential.
pub fn build_moser_field(order: usize) -> MoserField {
    let chi = radial_expand(RadialFn::GFactor, order).mul(&build_vector_potential(order));
    MoserField {
        chi,
        closed_form_available: true,
        nu: None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// `φ`: original to Darboux coordinates, factor `ξ`.
    Forward,
    /// `φ⁻¹`: Darboux to original coordinates, factor `σ`.
    Inverse,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DarbouxMap {
    pub direction: Direction,
    pub nu: f64,
}

impl DarbouxMap {
    pub fn new(direction: Direction, nu: f64) -> Self {
        DarbouxMap { direction, nu }
    }

    pub fn inverse(&self) -> Self {
        let direction = match self.direction {
            Direction::Forward => Direction::Inverse,
            Direction::Inverse => Direction::Forward,
        };
        DarbouxMap { direction, nu: self.nu }
    }

    pub fn radial_factor(&self, s: f64) -> f64 {
        match self.direction {
            Direction::Forward => scalar::xi(s),
            Direction::Inverse => scalar::sigma(s),
        }
    }

    fn radial_factor_deriv(&self, s: f64) -> f64 {
        match self.direction {
            Direction::Forward => scalar::xi_deriv(s),
            Direction::Inverse => scalar::sigma_deriv(s),
        }
    }
}

/// Rescales every site by the map's radial factor.
pub fn darboux_apply(map: &DarbouxMap, state: &LatticeState) -> Result<LatticeState> {
    if !state.is_finite() || !map.nu.is_finite() {
        return Err(Error::NonFinite);
    }
    let mut out = state.clone();
    for j in 0..state.sites() {
        let f = map.radial_factor(map.nu * state.site_norm2(j));
        out.x[j] *= f;
        out.y[j] *= f;
    }
    if !out.is_finite() {
        return Err(Error::NonFinite);
    }
    Ok(out)
}

type Mat2 = [[f64; 2]; 2];

fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut c = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    c
}

fn transpose(a: &Mat2) -> Mat2 {
    [[a[0][0], a[1][0]], [a[0][1], a[1][1]]]
}

const J: Mat2 = [[0.0, 1.0], [-1.0, 0.0]];

fn scaled_j(c: f64) -> Mat2 {
    [[0.0, c], [-c, 0.0]]
}

/// Largest entry of the per-site pullback defect. For the inverse map this is
/// `(Dφ⁻¹)ᵀ Ω(φ⁻¹(x)) Dφ⁻¹ − J`; for the forward map `(Dφ)ᵀ J Dφ − Ω(q)`.
/// Jacobians use the analytic derivative of the radial factor.
pub fn verify_pullback(map: &DarbouxMap, state: &LatticeState) -> Result<f64> {
    if !state.is_finite() {
        return Err(Error::NonFinite);
    }
    let nu = map.nu;
    let mut worst = 0.0f64;
    for j in 0..state.sites() {
        let z = [state.x[j], state.y[j]];
        let s = nu * state.site_norm2(j);
        let f = map.radial_factor(s);
        let fp = map.radial_factor_deriv(s);
        // D(f(s) z) = f I + 2ν f'(s) z zᵀ
        let mut d = [[0.0; 2]; 2];
        for a in 0..2 {
            for b in 0..2 {
                d[a][b] = 2.0 * nu * fp * z[a] * z[b] + if a == b { f } else { 0.0 };
            }
        }
        let (inner, target) = match map.direction {
            Direction::Inverse => {
                let image_s = s * f * f;
                (scaled_j(1.0 / (1.0 + image_s)), J)
            }
            Direction::Forward => (J, scaled_j(1.0 / (1.0 + s))),
        };
        let pulled = mat_mul(&transpose(&d), &mat_mul(&inner, &d));
        for a in 0..2 {
            for b in 0..2 {
                worst = worst.max((pulled[a][b] - target[a][b]).abs());
            }
        }
    }
    Ok(worst)
}

/// States along the flow of `V_t = χ(t, s)(q, p)` (closed-form `χ`) started
/// at `t = 0`, sampled at each of the increasing `times`.
pub fn flow_v_at(state0: &LatticeState, nu: f64, times: &[f64], tol: f64) -> Result<Vec<LatticeState>> {
    if !state0.is_finite() {
        return Err(Error::NonFinite);
    }
    let n = state0.sites();
    let rhs = |t: f64, z: &[f64], dz: &mut [f64]| {
        for j in 0..n {
            let c = scalar::chi(t, nu * (z[j] * z[j] + z[n + j] * z[n + j]));
            dz[j] = c * z[j];
            dz[n + j] = c * z[n + j];
        }
    };
    let (ys, _) = Dopri5::new(tol).solve(rhs, 0.0, &state0.flat(), times)?;
    ys.iter().map(|z| LatticeState::from_flat(z, state0.bc)).collect()
}

/// Time-`t_end` flow of the Moser field.
pub fn flow_v_numeric(state0: &LatticeState, nu: f64, t_end: f64, tol: f64) -> Result<LatticeState> {
    Ok(flow_v_at(state0, nu, &[t_end], tol)?.remove(0))
}

/// Outcome of substituting `h(ϱ) = (e^{ϱ²} − 1)/ϱ²` into
/// `h' + (2/ϱ)(1 − ϱ²)h − 2/ϱ = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct HOdeCheck {
    /// The series residual vanishes identically through order 8 in `ϱ`.
    pub series_exact: bool,
    /// Largest absolute residual on the grid `ϱ ∈ [0.05, 0.5]`.
    pub numeric_max: f64,
}

impl HOdeCheck {
    /// Single figure of merit: the numeric residual, or infinity if the
    /// series check failed.
    pub fn residual(&self) -> f64 {
        if self.series_exact {
            self.numeric_max
        } else {
            f64::INFINITY
        }
    }
}

/// Residual of the `h` equation at one radius.
pub fn h_ode_residual(rho: f64) -> f64 {
    scalar::h_deriv(rho) + 2.0 / rho * (1.0 - rho * rho) * scalar::h(rho) - 2.0 / rho
}

pub fn check_h_ode() -> HOdeCheck {
    // In u = ϱ², ϱ·(equation) reads 2u h_u + 2h − 2u h − 2 = 0; order 4 in u
    // covers order 8 in ϱ. One extra order absorbs the shift from u·h.
    let order = 4;
    let h = radial_expand(RadialFn::H, order + 1);
    let two = rat(2, 1);
    let lhs = h
        .deriv_s()
        .mul_s()
        .scale(&two)
        .add(&h.scale(&two))
        .sub(&h.mul_s().scale(&two))
        .sub(&RadialSeries::from_rationals(&[two]).truncate(order + 1));
    let series_exact = lhs.truncate(order).is_zero();
    let numeric_max = (0..=45)
        .map(|i| h_ode_residual(0.05 + 0.01 * i as f64).abs())
        .fold(0.0, f64::max);
    HOdeCheck {
        series_exact,
        numeric_max,
    }
}
