use alloc::vec::Vec;

use num_traits::{One, Zero};

use super::poly::{rat_to_f64, MIndex, Param, ParamValues, Poly, Var};
use super::{rat, Rat};

/// Truncated power series `Σ_k c_k s^k` in the radial variable
/// `s = ν(x² + y²)` of one site. Each `c_k` is a phase-free polynomial in
/// `t` and the formal parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RadialSeries {
    coeffs: Vec<Poly>,
}

/// Named analytic radial profiles that [`radial_expand`] knows how to expand.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RadialFn {
    /// `ln(1+s)/s − 1`
    LogFactor,
    /// `(1+s)/(1+ts)`
    GFactor,
    /// `g_factor · log_factor / 2`, the Moser field multiplier.
    Chi,
    /// `√((e^s − 1)/s)`, radial factor of the inverse Darboux map.
    Sigma,
    /// `√(ln(1+s)/s)`, radial factor of the forward Darboux map.
    Xi,
    /// `ln(1+s)/2`, i.e. `ν·P` for the conserved quantity `P`.
    PRadial,
    /// `(e^s − 1)/s`, the square of `Sigma` (with `s = ϱ²`).
    H,
}

fn t_poly(coeffs: &[(u32, Rat)]) -> Poly {
    Poly::from_terms(
        0,
        0,
        coeffs
            .iter()
            .map(|(e, c)| (MIndex::new(Vec::new(), *e, [0; 3]), c.clone())),
    )
}

fn constant(c: Rat) -> Poly {
    Poly::constant(0, 0, c)
}

fn factorial(n: u32) -> Rat {
    let mut acc = num_bigint::BigInt::one();
    for k in 2..=n {
        acc *= k;
    }
    Rat::from_integer(acc)
}

impl RadialSeries {
    pub fn zero(order: usize) -> Self {
        RadialSeries {
            coeffs: (0..=order).map(|_| Poly::zero(0, 0)).collect(),
        }
    }

    /// Series with constant rational coefficients.
    pub fn from_rationals(coeffs: &[Rat]) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least the s^0 coefficient");
        RadialSeries {
            coeffs: coeffs.iter().cloned().map(constant).collect(),
        }
    }

    /// Series from explicit phase-free coefficient polynomials.
    pub fn from_coeffs(coeffs: Vec<Poly>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least the s^0 coefficient");
        assert!(coeffs.iter().all(|c| c.nsites() == 0), "coefficients must be phase-free");
        RadialSeries { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> &Poly {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[Poly] {
        &self.coeffs
    }

    /// Constant rational value of coefficient `k`, if it has no `t` or
    /// parameter dependence.
    pub fn rational_coeff(&self, k: usize) -> Option<Rat> {
        let c = &self.coeffs[k];
        match c.len() {
            0 => Some(Rat::zero()),
            1 => {
                let (i, v) = c.terms().next().unwrap();
                (i.t() == 0 && i.params() == [0; 3]).then(|| v.clone())
            }
            _ => None,
        }
    }

    pub fn truncate(&self, order: usize) -> Self {
        let mut coeffs: Vec<Poly> = self.coeffs.iter().take(order + 1).cloned().collect();
        while coeffs.len() < order + 1 {
            coeffs.push(Poly::zero(0, 0));
        }
        RadialSeries { coeffs }
    }

    /// Lowest power of `s` with a nonzero coefficient.
    pub fn min_degree(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Poly::is_zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        RadialSeries {
            coeffs: (0..=n).map(|k| &self.coeffs[k] + &other.coeffs[k]).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        RadialSeries {
            coeffs: (0..=n).map(|k| &self.coeffs[k] - &other.coeffs[k]).collect(),
        }
    }

    /// Cauchy product truncated at the smaller order.
    pub fn mul(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let coeffs = (0..=n)
            .map(|k| {
                (0..=k).fold(Poly::zero(0, 0), |acc, i| {
                    &acc + &(&self.coeffs[i] * &other.coeffs[k - i])
                })
            })
            .collect();
        RadialSeries { coeffs }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        RadialSeries {
            coeffs: self.coeffs.iter().map(|p| p.scale(c)).collect(),
        }
    }

    /// Multiplies every coefficient by a phase-free polynomial.
    pub fn scale_poly(&self, p: &Poly) -> Self {
        RadialSeries {
            coeffs: self.coeffs.iter().map(|c| c * p).collect(),
        }
    }

    /// Multiplication by `s`, keeping the order fixed.
    pub fn mul_s(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        coeffs.push(Poly::zero(0, 0));
        coeffs.extend(self.coeffs[..self.order()].iter().cloned());
        RadialSeries { coeffs }
    }

    /// `d/ds`; the order drops by one (never below zero).
    pub fn deriv_s(&self) -> Self {
        if self.order() == 0 {
            return RadialSeries::zero(0);
        }
        RadialSeries {
            coeffs: (1..=self.order())
                .map(|k| self.coeffs[k].scale(&rat(k as i64, 1)))
                .collect(),
        }
    }

    pub fn deriv_t(&self) -> Self {
        RadialSeries {
            coeffs: self
                .coeffs
                .iter()
                .map(|c| c.diff(Var::T).expect("t is always a variable"))
                .collect(),
        }
    }

    pub fn substitute_t(&self, tau: &Rat) -> Self {
        RadialSeries {
            coeffs: self.coeffs.iter().map(|c| c.substitute_t(tau)).collect(),
        }
    }

    /// Square root of a series whose constant coefficient is exactly one.
    pub fn sqrt_unit(&self) -> Self {
        assert!(self.coeffs[0] == Poly::one(0, 0), "sqrt_unit needs c_0 = 1");
        let half = rat(1, 2);
        let mut out: Vec<Poly> = Vec::with_capacity(self.coeffs.len());
        out.push(Poly::one(0, 0));
        for n in 1..=self.order() {
            let mut acc = self.coeffs[n].clone();
            for k in 1..n {
                acc = &acc - &(&out[k] * &out[n - k]);
            }
            out.push(acc.scale(&half));
        }
        RadialSeries { coeffs: out }
    }

    /// Floating-point evaluation by Horner's rule in `s`.
    pub fn eval(&self, s: f64, t: f64, params: &ParamValues) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| {
            acc * s + c.eval(&[], &[], params, t).expect("phase-free coefficient")
        })
    }

    /// Largest coefficient magnitude, for coefficients free of `t` and
    /// parameters; `None` otherwise.
    pub fn max_abs_rational(&self) -> Option<f64> {
        (0..=self.order())
            .map(|k| self.rational_coeff(k).map(|c| rat_to_f64(&c).abs()))
            .try_fold(0.0f64, |m, v| v.map(|v| m.max(v)))
    }

    /// Expands `Σ c_k s^k` with `s = ν(x_site² + y_site²)` into a lattice
    /// polynomial.
    pub fn to_poly(&self, nsites: usize, trunc: u32, site: usize) -> Poly {
        let s = &Poly::param(nsites, trunc, Param::Nu)
            * &Poly::site_norm2(nsites, trunc, site).expect("site within lattice");
        let mut out = Poly::zero(nsites, trunc);
        let mut s_pow = Poly::one(nsites, trunc);
        for c in &self.coeffs {
            if s_pow.is_zero() {
                break;
            }
            out = &out + &(&c.embed(nsites, trunc) * &s_pow);
            s_pow = &s_pow * &s;
        }
        out
    }

    /// Recovers the radial series of a polynomial that depends on the phase
    /// variables only through `s = ν(x_site² + y_site²)`. Returns `None` if
    /// the polynomial is not of that form.
    pub fn from_site_poly(poly: &Poly, site: usize, order: usize) -> Option<Self> {
        let n = poly.nsites();
        if site >= n {
            return None;
        }
        let mut coeffs: Vec<Poly> = (0..=order).map(|_| Poly::zero(0, 0)).collect();
        for (idx, c) in poly.terms() {
            if idx.y_exp(site) != 0 || idx.phase_degree() != idx.x_exp(site) {
                continue;
            }
            let e = idx.x_exp(site);
            if e % 2 != 0 {
                return None;
            }
            let k = (e / 2) as usize;
            let mut params = idx.params();
            if params[0] < k as u32 {
                return None;
            }
            params[0] -= k as u32;
            if k > order {
                return None;
            }
            let term = Poly::monomial(0, 0, MIndex::new(Vec::new(), idx.t(), params), c.clone());
            coeffs[k] = &coeffs[k] + &term;
        }
        let series = RadialSeries { coeffs };
        (series.to_poly(n, poly.trunc(), site) == *poly).then_some(series)
    }
}

/// Taylor expansion at `s = 0` of a named radial profile through order `order`.
pub fn radial_expand(f: RadialFn, order: usize) -> RadialSeries {
    let log_ratio = || {
        // ln(1+s)/s = Σ (−1)^k s^k/(k+1)
        RadialSeries::from_rationals(
            &(0..=order)
                .map(|k| rat(if k % 2 == 0 { 1 } else { -1 }, k as i64 + 1))
                .collect::<Vec<_>>(),
        )
    };
    let exp_ratio = || {
        // (e^s − 1)/s = Σ s^k/(k+1)!
        RadialSeries::from_rationals(
            &(0..=order)
                .map(|k| factorial(k as u32 + 1).recip())
                .collect::<Vec<_>>(),
        )
    };
    match f {
        RadialFn::LogFactor => {
            let mut s = log_ratio();
            s.coeffs[0] = Poly::zero(0, 0);
            s
        }
        RadialFn::GFactor => {
            // (1+s)·Σ (−ts)^m
            let coeffs = (0..=order)
                .map(|k| {
                    if k == 0 {
                        return Poly::one(0, 0);
                    }
                    let sign = |m: usize| rat(if m % 2 == 0 { 1 } else { -1 }, 1);
                    t_poly(&[(k as u32, sign(k)), (k as u32 - 1, sign(k - 1))])
                })
                .collect();
            RadialSeries { coeffs }
        }
        RadialFn::Chi => radial_expand(RadialFn::GFactor, order)
            .mul(&radial_expand(RadialFn::LogFactor, order))
            .scale(&rat(1, 2)),
        RadialFn::Sigma => exp_ratio().sqrt_unit(),
        RadialFn::Xi => log_ratio().sqrt_unit(),
        RadialFn::PRadial => RadialSeries::from_rationals(
            &(0..=order)
                .map(|k| match k {
                    0 => Rat::zero(),
                    k => rat(if k % 2 == 1 { 1 } else { -1 }, 2 * k as i64),
                })
                .collect::<Vec<_>>(),
        ),
        RadialFn::H => exp_ratio(),
    }
}
