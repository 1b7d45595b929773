//! Closed-form radial profiles evaluated in floating point.
//!
//! All of them have removable singularities at `s = 0`; below
//! [`SERIES_THRESHOLD`] the order-6 Taylor polynomial is used instead of the
//! direct formula (the truncation error there is below 1e−24).

/// Radial variable below which the Taylor branch is used.
pub const SERIES_THRESHOLD: f64 = 1e-4;

const TAYLOR_ORDER: usize = 6;

fn factorial(n: usize) -> f64 {
    (2..=n).fold(1.0, |acc, k| acc * k as f64)
}

fn horner(coeffs: &[f64], s: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * s + c)
}

/// `ln(1+s)/s`.
pub fn log_ratio(s: f64) -> f64 {
    if s.abs() < SERIES_THRESHOLD {
        let c: [f64; TAYLOR_ORDER + 1] =
            core::array::from_fn(|k| (if k % 2 == 0 { 1.0 } else { -1.0 }) / (k as f64 + 1.0));
        horner(&c, s)
    } else {
        libm::log1p(s) / s
    }
}

/// `d/ds [ln(1+s)/s]`.
pub fn log_ratio_deriv(s: f64) -> f64 {
    if s.abs() < SERIES_THRESHOLD {
        // Σ_{k≥1} (−1)^k k s^{k−1}/(k+1)
        let c: [f64; TAYLOR_ORDER] = core::array::from_fn(|i| {
            let k = i + 1;
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            sign * k as f64 / (k as f64 + 1.0)
        });
        horner(&c, s)
    } else {
        (s / (1.0 + s) - libm::log1p(s)) / (s * s)
    }
}

/// `ln(1+s)/s − 1`.
pub fn log_factor(s: f64) -> f64 {
    if s.abs() < SERIES_THRESHOLD {
        let c: [f64; TAYLOR_ORDER + 1] = core::array::from_fn(|k| match k {
            0 => 0.0,
            k => (if k % 2 == 0 { 1.0 } else { -1.0 }) / (k as f64 + 1.0),
        });
        horner(&c, s)
    } else {
        libm::log1p(s) / s - 1.0
    }
}

/// `(e^s − 1)/s`.
pub fn exp_ratio(s: f64) -> f64 {
    if s.abs() < SERIES_THRESHOLD {
        let c: [f64; TAYLOR_ORDER + 1] = core::array::from_fn(|k| 1.0 / factorial(k + 1));
        horner(&c, s)
    } else {
        libm::expm1(s) / s
    }
}

/// `d/ds [(e^s − 1)/s]`.
pub fn exp_ratio_deriv(s: f64) -> f64 {
    if s.abs() < SERIES_THRESHOLD {
        let c: [f64; TAYLOR_ORDER] =
            core::array::from_fn(|i| (i + 1) as f64 / factorial(i + 2));
        horner(&c, s)
    } else {
        (s * libm::exp(s) - libm::expm1(s)) / (s * s)
    }
}

/// Moser field multiplier `χ(t, s) = (1+s)/(2(1+ts)) · [ln(1+s)/s − 1]`.
pub fn chi(t: f64, s: f64) -> f64 {
    (1.0 + s) / (2.0 * (1.0 + t * s)) * log_factor(s)
}

/// Inverse-map radial factor `σ(s) = √((e^s − 1)/s)`.
pub fn sigma(s: f64) -> f64 {
    libm::sqrt(exp_ratio(s))
}

pub fn sigma_deriv(s: f64) -> f64 {
    exp_ratio_deriv(s) / (2.0 * sigma(s))
}

/// Forward-map radial factor `ξ(s) = √(ln(1+s)/s)`.
pub fn xi(s: f64) -> f64 {
    libm::sqrt(log_ratio(s))
}

pub fn xi_deriv(s: f64) -> f64 {
    log_ratio_deriv(s) / (2.0 * xi(s))
}

/// `h(ϱ) = (e^{ϱ²} − 1)/ϱ²`.
pub fn h(rho: f64) -> f64 {
    exp_ratio(rho * rho)
}

pub fn h_deriv(rho: f64) -> f64 {
    2.0 * rho * exp_ratio_deriv(rho * rho)
}

/// `(s − ln(1+s))/s²`, so that the Salerno on-site energy is `γ A² g(νA)/4`.
pub fn onsite_ratio(s: f64) -> f64 {
    if s.abs() < SERIES_THRESHOLD {
        // Σ_{k≥2} (−1)^k s^{k−2}/k
        let c: [f64; TAYLOR_ORDER + 1] = core::array::from_fn(|i| {
            let k = i + 2;
            (if k % 2 == 0 { 1.0 } else { -1.0 }) / k as f64
        });
        horner(&c, s)
    } else {
        (s - libm::log1p(s)) / (s * s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1e-300)
    }

    #[test]
    fn branches_agree_at_threshold() {
        let s = SERIES_THRESHOLD;
        let below = s * (1.0 - 1e-9);
        let above = s * (1.0 + 1e-9);
        for f in [log_ratio, log_factor, exp_ratio, exp_ratio_deriv, log_ratio_deriv, onsite_ratio] {
            // sample points are 2e-13 apart and every slope here is O(1)
            let (a, b) = (f(below), f(above));
            assert!((a - b).abs() <= 1e-12 + 1e-9 * b.abs(), "{a} vs {b}");
        }
    }

    #[test]
    fn limits_at_zero() {
        assert_eq!(sigma(0.0), 1.0);
        assert_eq!(xi(0.0), 1.0);
        assert_eq!(h(0.0), 1.0);
        assert_eq!(chi(0.3, 0.0), 0.0);
        assert_eq!(onsite_ratio(0.0), 0.5);
    }

    #[test]
    fn sigma_at_one() {
        assert!(close(sigma(1.0), libm::sqrt(core::f64::consts::E - 1.0), 1e-15));
        assert!((sigma(1.0) - 1.31083).abs() < 1e-5);
    }

    #[test]
    fn derivatives_match_finite_differences() {
        for s in [1e-5f64, 3e-3, 0.2, 1.5] {
            let hstep = 1e-6 * s.max(1e-3);
            let fd = |f: fn(f64) -> f64| (f(s + hstep) - f(s - hstep)) / (2.0 * hstep);
            assert!(close(sigma_deriv(s), fd(sigma), 1e-6));
            assert!(close(xi_deriv(s), fd(xi), 1e-6));
        }
    }

    #[test]
    fn chi_small_s_is_minus_quarter_s() {
        let s = 1e-6;
        assert!(close(chi(0.7, s), -0.25 * s, 1e-5));
    }
}
