//! Lattice models in cartesian variables and their flows.
//!
//! The AL and Salerno models carry the nonstandard bracket with per-site
//! weight `1 + ν(x_j² + y_j²)`; dNLS and the normal forms `Z0`, `Z1` use the
//! standard bracket. States are laid out as `[x_0..x_{N-1}, y_0..y_{N-1}]`
//! whenever they are flattened.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::moser::{darboux_apply, DarbouxMap, Direction};
use crate::ode::Dopri5;
use crate::scalar;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Boundary {
    Periodic,
    Fixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelKind {
    DNls,
    Al,
    Salerno,
    Z0,
    Z1,
}

impl ModelKind {
    /// Whether the model's flow uses the weighted (nonstandard) bracket.
    pub fn nonstandard(self) -> bool {
        matches!(self, ModelKind::Al | ModelKind::Salerno)
    }
}

/// Model selection plus `ν = μ/2`, `γ`, `ε`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub kind: ModelKind,
    pub nu: f64,
    pub gamma: f64,
    pub eps: f64,
}

impl ModelParams {
    pub fn new(kind: ModelKind, nu: f64, gamma: f64, eps: f64) -> Result<Self> {
        if !(nu.is_finite() && gamma.is_finite() && eps.is_finite()) {
            return Err(Error::InvalidArgument("model parameters must be finite".into()));
        }
        if nu < 0.0 || eps < 0.0 {
            return Err(Error::InvalidArgument("nu and eps must be nonnegative".into()));
        }
        if kind == ModelKind::Al && gamma != 0.0 {
            return Err(Error::InvalidArgument("the AL model has gamma = 0".into()));
        }
        Ok(ModelParams { kind, nu, gamma, eps })
    }

    pub fn with_kind(&self, kind: ModelKind) -> Result<Self> {
        let gamma = if kind == ModelKind::Al { 0.0 } else { self.gamma };
        ModelParams::new(kind, self.nu, gamma, self.eps)
    }
}

/// Real phase-space point of an `N`-site lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeState {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub bc: Boundary,
}

impl LatticeState {
    pub fn new(x: Vec<f64>, y: Vec<f64>, bc: Boundary) -> Result<Self> {
        if x.len() != y.len() || x.is_empty() {
            return Err(Error::InvalidArgument(format!(
                "x and y must have the same nonzero length (got {} and {})",
                x.len(),
                y.len()
            )));
        }
        let s = LatticeState { x, y, bc };
        if !s.is_finite() {
            return Err(Error::NonFinite);
        }
        Ok(s)
    }

    pub fn zeros(n: usize, bc: Boundary) -> Self {
        LatticeState {
            x: vec![0.0; n],
            y: vec![0.0; n],
            bc,
        }
    }

    /// Splits a flat `[x.., y..]` vector.
    pub fn from_flat(v: &[f64], bc: Boundary) -> Result<Self> {
        let n = v.len() / 2;
        LatticeState::new(v[..n].to_vec(), v[n..2 * n].to_vec(), bc)
    }

    pub fn flat(&self) -> Vec<f64> {
        let mut v = self.x.clone();
        v.extend_from_slice(&self.y);
        v
    }

    pub fn sites(&self) -> usize {
        self.x.len()
    }

    pub fn is_finite(&self) -> bool {
        self.x.iter().chain(&self.y).all(|v| v.is_finite())
    }

    /// `x_j² + y_j²`.
    pub fn site_norm2(&self, j: usize) -> f64 {
        self.x[j] * self.x[j] + self.y[j] * self.y[j]
    }

    pub fn norm(&self) -> f64 {
        libm::sqrt((0..self.sites()).map(|j| self.site_norm2(j)).sum())
    }

    pub fn distance(&self, other: &LatticeState) -> f64 {
        libm::sqrt(
            self.x
                .iter()
                .zip(&other.x)
                .chain(self.y.iter().zip(&other.y))
                .map(|(a, b)| (a - b) * (a - b))
                .sum(),
        )
    }

    /// Common phase rotation of every site by `theta`.
    pub fn rotated(&self, theta: f64) -> LatticeState {
        let (s, c) = (libm::sin(theta), libm::cos(theta));
        LatticeState {
            x: self.x.iter().zip(&self.y).map(|(x, y)| c * x + s * y).collect(),
            y: self.x.iter().zip(&self.y).map(|(x, y)| -s * x + c * y).collect(),
            bc: self.bc,
        }
    }
}

/// Neighbour multiset of site `j` (periodic wrap or fixed clamp).
pub fn neighbors(n: usize, bc: Boundary, j: usize) -> impl Iterator<Item = usize> {
    let (left, right) = match bc {
        Boundary::Periodic => (Some((j + n - 1) % n), Some((j + 1) % n)),
        Boundary::Fixed => (j.checked_sub(1), (j + 1 < n).then_some(j + 1)),
    };
    right.into_iter().chain(left)
}

/// Nearest-neighbour bonds `(j, j+1)`; periodic lattices include the
/// wrap-around bond.
pub fn bonds(n: usize, bc: Boundary) -> impl Iterator<Item = (usize, usize)> {
    let count = match bc {
        Boundary::Periodic => n,
        Boundary::Fixed => n.saturating_sub(1),
    };
    (0..count).map(move |j| (j, (j + 1) % n))
}

fn coupling_energy(state: &LatticeState) -> f64 {
    bonds(state.sites(), state.bc)
        .map(|(a, b)| state.x[a] * state.x[b] + state.y[a] * state.y[b])
        .sum()
}

fn site_coupling(state: &LatticeState, j: usize) -> f64 {
    neighbors(state.sites(), state.bc, j)
        .map(|m| state.x[j] * state.x[m] + state.y[j] * state.y[m])
        .sum()
}

/// Energy of the chosen model at `state`.
pub fn hamiltonian(params: &ModelParams, state: &LatticeState) -> Result<f64> {
    let n = state.sites();
    let ModelParams { nu, gamma, eps, .. } = *params;
    let mut h = eps * coupling_energy(state);
    for j in 0..n {
        let a = state.site_norm2(j);
        h += match params.kind {
            ModelKind::Al | ModelKind::Salerno => {
                if 1.0 + nu * a <= 0.0 {
                    return Err(Error::InvalidArgument("1 + nu*A must stay positive".into()));
                }
                0.25 * gamma * a * a * scalar::onsite_ratio(nu * a)
            }
            ModelKind::DNls | ModelKind::Z0 => gamma / 8.0 * a * a,
            ModelKind::Z1 => {
                gamma / 8.0 * a * a
                    + gamma * nu / 24.0 * a * a * a
                    + 0.25 * eps * nu * a * site_coupling(state, j)
            }
        };
    }
    Ok(h)
}

/// The extra conserved quantity: `P = Σ ln(1+νA_j)/(2ν)` for AL/Salerno.
pub fn conserved_p(nu: f64, state: &LatticeState) -> f64 {
    (0..state.sites())
        .map(|j| {
            let a = state.site_norm2(j);
            0.5 * a * scalar::log_ratio(nu * a)
        })
        .sum()
}

/// `½ Σ (x_j² + y_j²)`.
pub fn half_norm2(state: &LatticeState) -> f64 {
    0.5 * (0..state.sites()).map(|j| state.site_norm2(j)).sum::<f64>()
}

/// Gradient of the model Hamiltonian, written into `gx`, `gy`.
fn gradient(params: &ModelParams, x: &[f64], y: &[f64], bc: Boundary, gx: &mut [f64], gy: &mut [f64]) {
    let n = x.len();
    let ModelParams { nu, gamma, eps, kind } = *params;
    for j in 0..n {
        let (mut sx, mut sy) = (0.0, 0.0);
        for m in neighbors(n, bc, j) {
            sx += x[m];
            sy += y[m];
        }
        let a = x[j] * x[j] + y[j] * y[j];
        let onsite = match kind {
            ModelKind::Al | ModelKind::Salerno => 0.5 * gamma * a / (1.0 + nu * a),
            ModelKind::DNls | ModelKind::Z0 => 0.5 * gamma * a,
            ModelKind::Z1 => 0.5 * gamma * a + 0.25 * gamma * nu * a * a,
        };
        gx[j] = eps * sx + onsite * x[j];
        gy[j] = eps * sy + onsite * y[j];
    }
    if kind == ModelKind::Z1 {
        // ¼εν Σ_j A_j Σ_{m∈nb(j)} (x_j x_m + y_j y_m)
        let c = 0.25 * eps * nu;
        for j in 0..n {
            let a = x[j] * x[j] + y[j] * y[j];
            for m in neighbors(n, bc, j) {
                let b = x[j] * x[m] + y[j] * y[m];
                gx[j] += c * (2.0 * x[j] * b + a * x[m]);
                gy[j] += c * (2.0 * y[j] * b + a * y[m]);
                gx[m] += c * a * x[j];
                gy[m] += c * a * y[j];
            }
        }
    }
}

fn field_flat(params: &ModelParams, bc: Boundary, z: &[f64], out: &mut [f64]) {
    let n = z.len() / 2;
    let (x, y) = z.split_at(n);
    let (ox, oy) = out.split_at_mut(n);
    // ox holds ∂H/∂x and oy holds ∂H/∂y until the symplectic swap below
    gradient(params, x, y, bc, ox, oy);
    for j in 0..n {
        let w = if params.kind.nonstandard() {
            1.0 + params.nu * (x[j] * x[j] + y[j] * y[j])
        } else {
            1.0
        };
        let (hx, hy) = (ox[j], oy[j]);
        ox[j] = w * hy;
        oy[j] = -w * hx;
    }
}

/// Velocities `(ẋ, ẏ)` of the model's Hamiltonian flow.
pub fn vector_field(params: &ModelParams, state: &LatticeState) -> (Vec<f64>, Vec<f64>) {
    let mut out = vec![0.0; 2 * state.sites()];
    field_flat(params, state.bc, &state.flat(), &mut out);
    let y = out.split_off(state.sites());
    (out, y)
}

/// Time-stamped states with the conserved quantities at each sample.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<LatticeState>,
    pub h_values: Vec<f64>,
    /// `P` for AL/Salerno, `½‖z‖²` for the standard-bracket models.
    pub p_values: Vec<f64>,
    pub norm_values: Vec<f64>,
}

impl Trajectory {
    /// Largest relative deviation of a recorded quantity from its first value.
    pub fn relative_drift(values: &[f64]) -> f64 {
        let Some(&v0) = values.first() else { return 0.0 };
        let scale = v0.abs().max(f64::MIN_POSITIVE);
        values.iter().map(|v| (v - v0).abs() / scale).fold(0.0, f64::max)
    }
}

fn check_tol(tol: f64) -> Result<()> {
    if !(1e-13..=1e-6).contains(&tol) {
        return Err(Error::InvalidArgument(format!("tol {tol} outside [1e-13, 1e-6]")));
    }
    Ok(())
}

/// Integrates to `t_end` with 100 evenly spaced samples (plus `t = 0`).
pub fn integrate(params: &ModelParams, state0: &LatticeState, t_end: f64, tol: f64) -> Result<Trajectory> {
    if !(t_end > 0.0) {
        return Err(Error::InvalidArgument("t_end must be positive".into()));
    }
    let times: Vec<f64> = (0..=100).map(|k| t_end * k as f64 / 100.0).collect();
    integrate_at(params, state0, &times, tol)
}

/// Integrates from `t = 0` and records the state at each of `times`
/// (monotone, all on one side of zero).
pub fn integrate_at(
    params: &ModelParams,
    state0: &LatticeState,
    times: &[f64],
    tol: f64,
) -> Result<Trajectory> {
    check_tol(tol)?;
    if !state0.is_finite() {
        return Err(Error::NonFinite);
    }
    let bc = state0.bc;
    let solver = Dopri5::new(tol);
    let (ys, _) = solver.solve(
        |_, z, dz| field_flat(params, bc, z, dz),
        0.0,
        &state0.flat(),
        times,
    )?;
    let mut traj = Trajectory {
        times: times.to_vec(),
        states: Vec::with_capacity(ys.len()),
        h_values: Vec::with_capacity(ys.len()),
        p_values: Vec::with_capacity(ys.len()),
        norm_values: Vec::with_capacity(ys.len()),
    };
    for z in ys {
        let s = LatticeState::from_flat(&z, bc)?;
        traj.h_values.push(hamiltonian(params, &s)?);
        let norm = half_norm2(&s);
        traj.p_values.push(if params.kind.nonstandard() {
            conserved_p(params.nu, &s)
        } else {
            norm
        });
        traj.norm_values.push(norm);
        traj.states.push(s);
    }
    Ok(traj)
}

/// How states of a nonstandard-bracket model are brought into the
/// coordinates of the comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Transport {
    None,
    /// Start nonstandard models from `φ⁻¹(z₀)` and map samples forward by `φ`.
    Darboux,
}

/// Distance between two flows sampled on a common time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct DeviationCurve {
    pub times: Vec<f64>,
    pub deviations: Vec<f64>,
    pub max: f64,
}

/// Runs both models from the same initial data in the compared coordinates
/// and records the Euclidean distance at `samples + 1` evenly spaced times
/// over `[0, horizon]`.
pub fn compare_flows(
    model_a: &ModelParams,
    model_b: &ModelParams,
    state0: &LatticeState,
    horizon: f64,
    transport: Transport,
    tol: f64,
    samples: usize,
) -> Result<DeviationCurve> {
    if model_a.kind.nonstandard() != model_b.kind.nonstandard() && transport == Transport::None {
        return Err(Error::InvalidArgument(
            "comparing brackets of different type needs darboux transport".into(),
        ));
    }
    if !(horizon > 0.0) || samples == 0 {
        return Err(Error::InvalidArgument("horizon and samples must be positive".into()));
    }
    let times: Vec<f64> = (0..=samples).map(|k| horizon * k as f64 / samples as f64).collect();
    let run = |m: &ModelParams| -> Result<Vec<LatticeState>> {
        let carry = transport == Transport::Darboux && m.kind.nonstandard();
        let start = if carry {
            darboux_apply(&DarbouxMap::new(Direction::Inverse, m.nu), state0)?
        } else {
            state0.clone()
        };
        let traj = integrate_at(m, &start, &times, tol)?;
        if carry {
            let fwd = DarbouxMap::new(Direction::Forward, m.nu);
            traj.states.iter().map(|s| darboux_apply(&fwd, s)).collect()
        } else {
            Ok(traj.states)
        }
    };
    let a = run(model_a)?;
    let b = run(model_b)?;
    let deviations: Vec<f64> = a.iter().zip(&b).map(|(p, q)| p.distance(q)).collect();
    let max = deviations.iter().copied().fold(0.0, f64::max);
    Ok(DeviationCurve { times, deviations, max })
}
