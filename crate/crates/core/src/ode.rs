//! Adaptive Dormand–Prince 5(4) integrator.
//!
//! Steps are clamped so that every requested sample time is hit exactly,
//! which keeps sampled states at full step accuracy.

use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// Counters collected during one solve.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OdeStats {
    pub accepted: usize,
    pub rejected: usize,
    pub evals: usize,
}

/// Solver settings. `rtol`/`atol` bound the local error estimate per step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dopri5 {
    pub rtol: f64,
    pub atol: f64,
    pub h_max: f64,
    pub max_steps: usize,
    pub safety: f64,
    pub fac_min: f64,
    pub fac_max: f64,
}

impl Dopri5 {
    pub fn new(tol: f64) -> Self {
        Dopri5 {
            rtol: tol,
            atol: tol,
            h_max: f64::INFINITY,
            max_steps: 5_000_000,
            safety: 0.9,
            fac_min: 0.2,
            fac_max: 10.0,
        }
    }

    fn error_norm(&self, err: &[f64], y: &[f64], y_new: &[f64]) -> f64 {
        let n = err.len().max(1) as f64;
        let sum: f64 = err
            .iter()
            .zip(y.iter().zip(y_new))
            .map(|(e, (a, b))| {
                let sk = self.atol + self.rtol * a.abs().max(b.abs());
                (e / sk) * (e / sk)
            })
            .sum();
        libm::sqrt(sum / n)
    }

    fn initial_step<F>(&self, f: &mut F, t0: f64, y0: &[f64], f0: &[f64], dir: f64) -> f64
    where
        F: FnMut(f64, &[f64], &mut [f64]),
    {
        let sk = |v: f64| self.atol + self.rtol * v.abs();
        let sq = |v: f64| v * v;
        let n = y0.len().max(1) as f64;
        let d0 = libm::sqrt(y0.iter().map(|v| sq(v / sk(*v))).sum::<f64>() / n);
        let d1 = libm::sqrt(
            f0.iter().zip(y0).map(|(d, v)| sq(d / sk(*v))).sum::<f64>() / n,
        );
        let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
        let h0 = h0.min(self.h_max);
        let y1: Vec<f64> = y0.iter().zip(f0).map(|(v, d)| v + dir * h0 * d).collect();
        let mut f1 = vec![0.0; y0.len()];
        f(t0 + dir * h0, &y1, &mut f1);
        let d2 = libm::sqrt(
            f1.iter()
                .zip(f0)
                .zip(y0)
                .map(|((a, b), v)| sq((a - b) / sk(*v)))
                .sum::<f64>()
                / n,
        ) / h0;
        let big = d1.max(d2);
        let h1 = if big <= 1e-15 {
            (h0 * 1e-3).max(1e-6)
        } else {
            libm::pow(0.01 / big, 1.0 / 5.0)
        };
        (100.0 * h0).min(h1).min(self.h_max)
    }

    /// Integrates `y' = f(t, y)` from `t0`, returning the state at each of
    /// the monotone `samples` (which all lie on one side of `t0`).
    pub fn solve<F>(
        &self,
        mut f: F,
        t0: f64,
        y0: &[f64],
        samples: &[f64],
    ) -> Result<(Vec<Vec<f64>>, OdeStats)>
    where
        F: FnMut(f64, &[f64], &mut [f64]),
    {
        let n = y0.len();
        let mut stats = OdeStats::default();
        let mut out = Vec::with_capacity(samples.len());
        let Some(&t_last) = samples.last() else {
            return Ok((out, stats));
        };
        let dir = if t_last >= t0 { 1.0 } else { -1.0 };
        if samples
            .windows(2)
            .any(|w| dir * (w[1] - w[0]) < 0.0)
            || dir * (samples[0] - t0) < 0.0
        {
            return Err(Error::InvalidArgument("sample times must be monotone away from t0".into()));
        }

        let mut t = t0;
        let mut y = y0.to_vec();
        let mut k1 = vec![0.0; n];
        f(t, &y, &mut k1);
        stats.evals += 1;
        let mut h = if t_last == t0 {
            0.0
        } else {
            self.initial_step(&mut f, t0, &y, &k1, dir)
        };

        let (mut k2, mut k3, mut k4, mut k5, mut k6, mut k7) = (
            vec![0.0; n],
            vec![0.0; n],
            vec![0.0; n],
            vec![0.0; n],
            vec![0.0; n],
            vec![0.0; n],
        );
        let mut tmp = vec![0.0; n];
        let mut y_new = vec![0.0; n];
        let mut err = vec![0.0; n];
        let mut steps = 0usize;

        for &target in samples {
            while dir * (target - t) > 0.0 {
                steps += 1;
                if steps > self.max_steps {
                    return Err(Error::TooManySteps { t });
                }
                let remaining = (target - t).abs();
                let mut hs = h.min(self.h_max);
                let hits_target = hs >= remaining * (1.0 - 1e-12);
                if hits_target {
                    hs = remaining;
                }
                if hs < 1e-14 * t.abs().max(1.0) {
                    return Err(Error::StepUnderflow { t });
                }
                let hd = dir * hs;

                for i in 0..n {
                    tmp[i] = y[i] + hd * A21 * k1[i];
                }
                f(t + C2 * hd, &tmp, &mut k2);
                for i in 0..n {
                    tmp[i] = y[i] + hd * (A31 * k1[i] + A32 * k2[i]);
                }
                f(t + C3 * hd, &tmp, &mut k3);
                for i in 0..n {
                    tmp[i] = y[i] + hd * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
                }
                f(t + C4 * hd, &tmp, &mut k4);
                for i in 0..n {
                    tmp[i] = y[i] + hd * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
                }
                f(t + C5 * hd, &tmp, &mut k5);
                for i in 0..n {
                    tmp[i] = y[i]
                        + hd * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]);
                }
                f(t + hd, &tmp, &mut k6);
                for i in 0..n {
                    y_new[i] = y[i]
                        + hd * (A71 * k1[i] + A73 * k3[i] + A74 * k4[i] + A75 * k5[i] + A76 * k6[i]);
                }
                f(t + hd, &y_new, &mut k7);
                stats.evals += 6;
                for i in 0..n {
                    err[i] = hd
                        * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
                }
                let mut en = self.error_norm(&err, &y, &y_new);
                if !en.is_finite() || y_new.iter().any(|v| !v.is_finite()) {
                    en = f64::INFINITY;
                }

                let fac = if en == 0.0 {
                    self.fac_max
                } else if en.is_finite() {
                    (self.safety * libm::pow(en, -0.2)).clamp(self.fac_min, self.fac_max)
                } else {
                    self.fac_min
                };

                if en <= 1.0 {
                    stats.accepted += 1;
                    t = if hits_target { target } else { t + hd };
                    core::mem::swap(&mut y, &mut y_new);
                    core::mem::swap(&mut k1, &mut k7);
                    // a clamped step says nothing about the natural step size
                    if !hits_target || fac < 1.0 {
                        h = hs * fac;
                    }
                } else {
                    stats.rejected += 1;
                    h = hs * fac.min(1.0);
                }
            }
            out.push(y.clone());
        }
        Ok((out, stats))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_decay() {
        let solver = Dopri5::new(1e-12);
        let (ys, _) = solver
            .solve(|_, y, d| d[0] = -y[0], 0.0, &[1.0], &[0.5, 1.0, 2.0])
            .unwrap();
        for (y, t) in ys.iter().zip([0.5f64, 1.0, 2.0]) {
            assert!((y[0] - libm::exp(-t)).abs() < 1e-11);
        }
    }

    #[test]
    fn harmonic_oscillator_backwards() {
        let solver = Dopri5::new(1e-12);
        let rhs = |_: f64, y: &[f64], d: &mut [f64]| {
            d[0] = y[1];
            d[1] = -y[0];
        };
        let (ys, _) = solver.solve(rhs, 0.0, &[1.0, 0.0], &[-3.0]).unwrap();
        assert!((ys[0][0] - libm::cos(3.0)).abs() < 1e-10);
        assert!((ys[0][1] - libm::sin(3.0)).abs() < 1e-10);
    }

    #[test]
    fn blow_up_is_reported() {
        let solver = Dopri5::new(1e-10);
        let res = solver.solve(|_, y, d| d[0] = y[0] * y[0], 0.0, &[1.0], &[2.0]);
        assert!(matches!(
            res,
            Err(Error::StepUnderflow { .. }) | Err(Error::TooManySteps { .. })
        ));
    }

    #[test]
    fn sample_at_start_returns_initial_state() {
        let solver = Dopri5::new(1e-10);
        let (ys, _) = solver.solve(|_, _, d| d[0] = 1.0, 0.0, &[2.0], &[0.0]).unwrap();
        assert_eq!(ys[0], vec![2.0]);
    }
}
