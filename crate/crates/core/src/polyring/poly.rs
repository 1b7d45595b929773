use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{rat_pow, Rat};
use crate::{Error, Result};

/// A differentiable variable: a phase coordinate of some site, or the time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Var {
    X(usize),
    Y(usize),
    T,
}

/// Formal parameters carried as monomial exponents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Param {
    Nu,
    Gamma,
    Eps,
}

impl Param {
    pub const ALL: [Param; 3] = [Param::Nu, Param::Gamma, Param::Eps];

    fn index(self) -> usize {
        match self {
            Param::Nu => 0,
            Param::Gamma => 1,
            Param::Eps => 2,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Param::Nu => "nu",
            Param::Gamma => "gamma",
            Param::Eps => "eps",
        }
    }
}

/// Numeric values of `(ν, γ, ε)` used when a polynomial is evaluated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamValues {
    pub nu: f64,
    pub gamma: f64,
    pub eps: f64,
}

impl ParamValues {
    pub fn new(nu: f64, gamma: f64, eps: f64) -> Self {
        ParamValues { nu, gamma, eps }
    }

    fn as_array(&self) -> [f64; 3] {
        [self.nu, self.gamma, self.eps]
    }
}

/// Exponent vector of a monomial.
///
/// Phase exponents are laid out as `x_0..x_{N-1}` followed by `y_0..y_{N-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MIndex {
    phase: Vec<u32>,
    t: u32,
    params: [u32; 3],
}

impl MIndex {
    pub fn one(nsites: usize) -> Self {
        MIndex {
            phase: vec![0; 2 * nsites],
            t: 0,
            params: [0; 3],
        }
    }

    /// Builds an index from raw exponents. `phase.len()` must be even.
    pub fn new(phase: Vec<u32>, t: u32, params: [u32; 3]) -> Self {
        assert!(phase.len() % 2 == 0, "phase exponent vector must hold x and y blocks");
        MIndex { phase, t, params }
    }

    pub fn nsites(&self) -> usize {
        self.phase.len() / 2
    }

    pub fn phase(&self) -> &[u32] {
        &self.phase
    }

    pub fn t(&self) -> u32 {
        self.t
    }

    pub fn params(&self) -> [u32; 3] {
        self.params
    }

    pub fn param(&self, p: Param) -> u32 {
        self.params[p.index()]
    }

    pub fn x_exp(&self, site: usize) -> u32 {
        self.phase[site]
    }

    pub fn y_exp(&self, site: usize) -> u32 {
        self.phase[self.nsites() + site]
    }

    /// Degree in the two variables of one site.
    pub fn site_degree(&self, site: usize) -> u32 {
        self.x_exp(site) + self.y_exp(site)
    }

    pub fn phase_degree(&self) -> u32 {
        self.phase.iter().sum()
    }

    fn slot(&self, var: Var) -> Option<usize> {
        let n = self.nsites();
        match var {
            Var::X(j) if j < n => Some(j),
            Var::Y(j) if j < n => Some(n + j),
            _ => None,
        }
    }

    fn exp_of(&self, var: Var) -> u32 {
        match var {
            Var::T => self.t,
            _ => self.slot(var).map_or(0, |i| self.phase[i]),
        }
    }

    fn with_exp(&self, var: Var, e: u32) -> MIndex {
        let mut out = self.clone();
        match var {
            Var::T => out.t = e,
            _ => {
                let i = self.slot(var).expect("variable checked by caller");
                out.phase[i] = e;
            }
        }
        out
    }

    fn product(&self, other: &MIndex) -> MIndex {
        MIndex {
            phase: self.phase.iter().zip(&other.phase).map(|(a, b)| a + b).collect(),
            t: self.t + other.t,
            params: [
                self.params[0] + other.params[0],
                self.params[1] + other.params[1],
                self.params[2] + other.params[2],
            ],
        }
    }
}

// Graded lexicographic: total phase degree first, then the exponent vectors.
impl Ord for MIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.phase_degree()
            .cmp(&other.phase_degree())
            .then_with(|| self.phase.cmp(&other.phase))
            .then_with(|| self.t.cmp(&other.t))
            .then_with(|| self.params.cmp(&other.params))
    }
}

impl PartialOrd for MIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial with exact rational coefficients, truncated at total
/// phase degree `trunc`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    nsites: usize,
    trunc: u32,
    terms: BTreeMap<MIndex, Rat>,
}

impl Poly {
    pub fn zero(nsites: usize, trunc: u32) -> Self {
        Poly {
            nsites,
            trunc,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nsites: usize, trunc: u32, c: Rat) -> Self {
        Self::monomial(nsites, trunc, MIndex::one(nsites), c)
    }

    pub fn one(nsites: usize, trunc: u32) -> Self {
        Self::constant(nsites, trunc, Rat::one())
    }

    /// Single term; dropped if its phase degree exceeds `trunc` or `c == 0`.
    pub fn monomial(nsites: usize, trunc: u32, index: MIndex, c: Rat) -> Self {
        assert_eq!(index.nsites(), nsites, "monomial built for a different lattice");
        let mut p = Self::zero(nsites, trunc);
        p.add_term(index, c);
        p
    }

    pub fn var(nsites: usize, trunc: u32, var: Var) -> Result<Self> {
        let one = MIndex::one(nsites);
        if var != Var::T && one.slot(var).is_none() {
            return Err(Error::UnknownVariable(var));
        }
        let idx = one.with_exp(var, 1);
        Ok(Self::monomial(nsites, trunc, idx, Rat::one()))
    }

    pub fn param(nsites: usize, trunc: u32, p: Param) -> Self {
        let mut idx = MIndex::one(nsites);
        idx.params[p.index()] = 1;
        Self::monomial(nsites, trunc, idx, Rat::one())
    }

    /// `x_j² + y_j²` for one site.
    pub fn site_norm2(nsites: usize, trunc: u32, site: usize) -> Result<Self> {
        let x = Self::var(nsites, trunc, Var::X(site))?;
        let y = Self::var(nsites, trunc, Var::Y(site))?;
        Ok(&(&x * &x) + &(&y * &y))
    }

    /// Builds a polynomial from explicit terms, summing duplicates.
    pub fn from_terms<I>(nsites: usize, trunc: u32, terms: I) -> Self
    where
        I: IntoIterator<Item = (MIndex, Rat)>,
    {
        let mut p = Self::zero(nsites, trunc);
        for (idx, c) in terms {
            assert_eq!(idx.nsites(), nsites, "monomial built for a different lattice");
            p.add_term(idx, c);
        }
        p
    }

    pub fn nsites(&self) -> usize {
        self.nsites
    }

    pub fn trunc(&self) -> u32 {
        self.trunc
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&MIndex, &Rat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, index: &MIndex) -> Rat {
        self.terms.get(index).cloned().unwrap_or_else(Rat::zero)
    }

    fn add_term(&mut self, index: MIndex, c: Rat) {
        if c.is_zero() || index.phase_degree() > self.trunc {
            return;
        }
        match self.terms.entry(index) {
            alloc::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            alloc::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn check_compatible(&self, other: &Poly) -> Result<()> {
        if self.nsites != other.nsites {
            return Err(Error::SiteMismatch {
                left: self.nsites,
                right: other.nsites,
            });
        }
        if self.trunc != other.trunc {
            return Err(Error::TruncationMismatch {
                left: self.trunc,
                right: other.trunc,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Poly) -> Result<Poly> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (idx, c) in &other.terms {
            out.add_term(idx.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Poly) -> Result<Poly> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (idx, c) in &other.terms {
            out.add_term(idx.clone(), -c.clone());
        }
        Ok(out)
    }

    /// Product with every term above the truncation degree discarded.
    pub fn checked_mul(&self, other: &Poly) -> Result<Poly> {
        self.check_compatible(other)?;
        let mut out = Poly::zero(self.nsites, self.trunc);
        for (ia, ca) in &self.terms {
            let da = ia.phase_degree();
            for (ib, cb) in &other.terms {
                if da + ib.phase_degree() > self.trunc {
                    continue;
                }
                out.add_term(ia.product(ib), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nsites, self.trunc);
        }
        Poly {
            nsites: self.nsites,
            trunc: self.trunc,
            terms: self.terms.iter().map(|(i, v)| (i.clone(), v * c)).collect(),
        }
    }

    /// Multiplies by a single monomial.
    pub fn mul_monomial(&self, index: &MIndex, c: &Rat) -> Poly {
        let mut out = Poly::zero(self.nsites, self.trunc);
        for (i, v) in &self.terms {
            out.add_term(i.product(index), v * c);
        }
        out
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut acc = Poly::one(self.nsites, self.trunc);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Exact partial derivative in a phase variable or in `t`.
    pub fn diff(&self, var: Var) -> Result<Poly> {
        if var != Var::T && MIndex::one(self.nsites).slot(var).is_none() {
            return Err(Error::UnknownVariable(var));
        }
        let mut out = Poly::zero(self.nsites, self.trunc);
        for (idx, c) in &self.terms {
            let e = idx.exp_of(var);
            if e == 0 {
                continue;
            }
            out.add_term(idx.with_exp(var, e - 1), c * Rat::from_integer(e.into()));
        }
        Ok(out)
    }

    /// Same polynomial re-truncated at `trunc` (which may be larger).
    pub fn with_trunc(&self, trunc: u32) -> Poly {
        Poly {
            nsites: self.nsites,
            trunc,
            terms: self
                .terms
                .iter()
                .filter(|(i, _)| i.phase_degree() <= trunc)
                .map(|(i, c)| (i.clone(), c.clone()))
                .collect(),
        }
    }

    /// Terms of exactly the given phase degree.
    pub fn homogeneous_part(&self, degree: u32) -> Poly {
        self.filter(|i| i.phase_degree() == degree)
    }

    pub fn filter(&self, mut keep: impl FnMut(&MIndex) -> bool) -> Poly {
        Poly {
            nsites: self.nsites,
            trunc: self.trunc,
            terms: self
                .terms
                .iter()
                .filter(|(i, _)| keep(i))
                .map(|(i, c)| (i.clone(), c.clone()))
                .collect(),
        }
    }

    /// Rewrites every coefficient, dropping terms that become zero.
    pub fn map_terms(&self, mut f: impl FnMut(&MIndex, &Rat) -> Rat) -> Poly {
        let mut out = Poly::zero(self.nsites, self.trunc);
        for (i, c) in &self.terms {
            out.add_term(i.clone(), f(i, c));
        }
        out
    }

    /// Embeds a polynomial with no phase variables into an `nsites` lattice.
    pub fn embed(&self, nsites: usize, trunc: u32) -> Poly {
        assert_eq!(self.nsites, 0, "only phase-free polynomials can be embedded");
        let mut out = Poly::zero(nsites, trunc);
        for (i, c) in &self.terms {
            out.add_term(
                MIndex {
                    phase: vec![0; 2 * nsites],
                    t: i.t,
                    params: i.params,
                },
                c.clone(),
            );
        }
        out
    }

    /// Lowest phase degree carrying a nonzero term.
    pub fn min_phase_degree(&self) -> Option<u32> {
        self.terms.keys().map(MIndex::phase_degree).min()
    }

    pub fn max_t_degree(&self) -> u32 {
        self.terms.keys().map(|i| i.t).max().unwrap_or(0)
    }

    /// Substitutes `t ↦ tau` exactly.
    pub fn substitute_t(&self, tau: &Rat) -> Poly {
        let mut out = Poly::zero(self.nsites, self.trunc);
        for (i, c) in &self.terms {
            let mut j = i.clone();
            j.t = 0;
            out.add_term(j, c * rat_pow(tau, i.t));
        }
        out
    }

    /// Substitutes rational values for the formal parameters that are given.
    pub fn bind_params(&self, nu: Option<&Rat>, gamma: Option<&Rat>, eps: Option<&Rat>) -> Poly {
        let vals = [nu, gamma, eps];
        let mut out = Poly::zero(self.nsites, self.trunc);
        for (i, c) in &self.terms {
            let mut j = i.clone();
            let mut coeff = c.clone();
            for (k, v) in vals.iter().enumerate() {
                if let Some(v) = v {
                    coeff *= rat_pow(v, i.params[k]);
                    j.params[k] = 0;
                }
            }
            out.add_term(j, coeff);
        }
        out
    }

    /// Floating-point evaluation at a phase point given as `x` and `y` slices.
    pub fn eval(&self, x: &[f64], y: &[f64], params: &ParamValues, t: f64) -> Result<f64> {
        let n = self.nsites;
        if x.len() < n || y.len() < n {
            return Err(Error::MissingAssignment {
                need: 2 * n,
                got: x.len().min(n) + y.len().min(n),
            });
        }
        let mut max_exp = vec![0u32; 2 * n];
        let mut max_t = 0;
        let mut max_p = [0u32; 3];
        for idx in self.terms.keys() {
            for (m, e) in max_exp.iter_mut().zip(&idx.phase) {
                *m = (*m).max(*e);
            }
            max_t = max_t.max(idx.t);
            for k in 0..3 {
                max_p[k] = max_p[k].max(idx.params[k]);
            }
        }
        let powers = |base: f64, top: u32| -> Vec<f64> {
            let mut v = Vec::with_capacity(top as usize + 1);
            let mut acc = 1.0;
            for _ in 0..=top {
                v.push(acc);
                acc *= base;
            }
            v
        };
        let phase_pows: Vec<Vec<f64>> = (0..2 * n)
            .map(|i| {
                let base = if i < n { x[i] } else { y[i - n] };
                powers(base, max_exp[i])
            })
            .collect();
        let t_pows = powers(t, max_t);
        let pv = params.as_array();
        let p_pows: Vec<Vec<f64>> = (0..3).map(|k| powers(pv[k], max_p[k])).collect();

        let mut sum = 0.0;
        for (idx, c) in &self.terms {
            let mut term = rat_to_f64(c);
            for (i, e) in idx.phase.iter().enumerate() {
                if *e > 0 {
                    term *= phase_pows[i][*e as usize];
                }
            }
            term *= t_pows[idx.t as usize];
            for k in 0..3 {
                term *= p_pows[k][idx.params[k] as usize];
            }
            sum += term;
        }
        Ok(sum)
    }

    /// `Σ |c| ρ^{deg}`, which dominates the sup norm on the polydisk of
    /// radius `rho`. Fails if `t` or any formal parameter is still present.
    pub fn majorant_norm(&self, rho: f64) -> Result<f64> {
        if self.terms.keys().any(|i| i.t > 0 || i.params.iter().any(|&e| e > 0)) {
            return Err(Error::Unevaluated);
        }
        Ok(self
            .terms
            .iter()
            .map(|(i, c)| rat_to_f64(&c.abs()) * libm::pow(rho, i.phase_degree() as f64))
            .sum())
    }

    /// Majorant with parameters replaced by their magnitudes and `|t| ≤ t_max`.
    pub fn majorant_norm_bounded(&self, rho: f64, params: &ParamValues, t_max: f64) -> f64 {
        let pv = params.as_array();
        self.terms
            .iter()
            .map(|(i, c)| {
                let mut v = rat_to_f64(&c.abs()) * libm::pow(rho, i.phase_degree() as f64);
                v *= libm::pow(t_max.abs(), i.t as f64);
                for k in 0..3 {
                    v *= libm::pow(pv[k].abs(), i.params[k] as f64);
                }
                v
            })
            .sum()
    }
}

pub(crate) fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Fall back to a ratio of integer parts for huge operands.
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Standard Poisson bracket `Σ_j ∂_{x_j}f ∂_{y_j}g − ∂_{y_j}f ∂_{x_j}g`.
pub fn poisson_bracket(f: &Poly, g: &Poly) -> Result<Poly> {
    f.check_compatible(g)?;
    let mut out = Poly::zero(f.nsites, f.trunc);
    for j in 0..f.nsites {
        let a = f.diff(Var::X(j))?.checked_mul(&g.diff(Var::Y(j))?)?;
        let b = f.diff(Var::Y(j))?.checked_mul(&g.diff(Var::X(j))?)?;
        out = out.checked_add(&a)?.checked_sub(&b)?;
    }
    Ok(out)
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.checked_add(rhs).expect("incompatible polynomials")
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.checked_sub(rhs).expect("incompatible polynomials")
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.checked_mul(rhs).expect("incompatible polynomials")
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&-Rat::one())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let n = self.nsites;
        for (k, (idx, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if k == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            let mut factors: Vec<(alloc::string::String, u32)> = Vec::new();
            for p in Param::ALL {
                factors.push((p.name().into(), idx.param(p)));
            }
            factors.push(("t".into(), idx.t));
            for j in 0..n {
                factors.push((alloc::format!("x{j}"), idx.x_exp(j)));
                factors.push((alloc::format!("y{j}"), idx.y_exp(j)));
            }
            let factors: Vec<_> = factors.into_iter().filter(|(_, e)| *e > 0).collect();
            let unit = mag.is_one();
            if !unit || factors.is_empty() {
                write!(f, "{mag}")?;
            }
            for (i, (name, e)) in factors.iter().enumerate() {
                if i > 0 || !unit {
                    f.write_str("*")?;
                }
                if *e == 1 {
                    write!(f, "{name}")?;
                } else {
                    write!(f, "{name}^{e}")?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::rat;

    fn x(n: usize, d: u32) -> Poly {
        Poly::var(n, d, Var::X(0)).unwrap()
    }
    fn y(n: usize, d: u32) -> Poly {
        Poly::var(n, d, Var::Y(0)).unwrap()
    }

    #[test]
    fn difference_of_squares() {
        let one = Poly::one(1, 2);
        let a = &one + &x(1, 2);
        let b = &one - &x(1, 2);
        let expect = &one - &(&x(1, 2) * &x(1, 2));
        assert_eq!(&a * &b, expect);
    }

    #[test]
    fn product_above_truncation_vanishes() {
        let s = &x(1, 1) + &y(1, 1);
        assert!((&s * &s).is_zero());
    }

    #[test]
    fn cancellation_removes_terms() {
        let x2 = &x(1, 2) * &x(1, 2);
        let a = &x2 + &y(1, 2).scale(&rat(2, 1));
        let sum = &a + &(-&x2);
        assert_eq!(sum, y(1, 2).scale(&rat(2, 1)));
        assert_eq!(sum.len(), 1);
    }

    #[test]
    fn mismatched_operands_are_rejected() {
        assert!(matches!(
            x(1, 2).checked_add(&x(2, 2)),
            Err(Error::SiteMismatch { .. })
        ));
        assert!(matches!(
            x(1, 2).checked_mul(&x(1, 3)),
            Err(Error::TruncationMismatch { .. })
        ));
    }

    #[test]
    fn derivatives() {
        let d = 4;
        let x2y = &(&x(1, d) * &x(1, d)) * &y(1, d);
        let two_xy = (&x(1, d) * &y(1, d)).scale(&rat(2, 1));
        assert_eq!(x2y.diff(Var::X(0)).unwrap(), two_xy);

        let t = Poly::var(1, d, Var::T).unwrap();
        let t2x = &(&t * &t) * &x(1, d);
        let two_tx = (&t * &x(1, d)).scale(&rat(2, 1));
        assert_eq!(t2x.diff(Var::T).unwrap(), two_tx);

        let x2 = &x(1, d) * &x(1, d);
        assert!(x2.diff(Var::Y(0)).unwrap().is_zero());
        assert_eq!(x2.diff(Var::X(3)), Err(Error::UnknownVariable(Var::X(3))));
    }

    #[test]
    fn majorant_examples() {
        let p = &(&x(1, 2) * &x(1, 2)) + &y(1, 2).scale(&rat(2, 1));
        assert!((p.majorant_norm(0.5).unwrap() - 1.25).abs() < 1e-15);
        assert_eq!(Poly::constant(1, 2, rat(3, 1)).majorant_norm(0.7).unwrap(), 3.0);
        assert_eq!(Poly::zero(1, 2).majorant_norm(0.7).unwrap(), 0.0);
        let nu = Poly::param(1, 2, Param::Nu);
        assert_eq!(nu.majorant_norm(0.5), Err(Error::Unevaluated));
    }

    #[test]
    fn evaluation_examples() {
        let pv = ParamValues::new(0.5, 1.0, 0.0);
        let p = &(&x(1, 2) * &x(1, 2)) + &y(1, 2).scale(&rat(2, 1));
        assert_eq!(p.eval(&[1.0], &[2.0], &pv, 0.0).unwrap(), 5.0);

        let t = Poly::var(1, 2, Var::T).unwrap();
        assert_eq!((&t * &x(1, 2)).eval(&[3.0], &[0.0], &pv, 1.0).unwrap(), 3.0);

        let s = &Poly::param(1, 2, Param::Nu) * &Poly::site_norm2(1, 2, 0).unwrap();
        let v = s.eval(&[0.1], &[0.2], &pv, 0.0).unwrap();
        assert!((v - 0.025).abs() < 1e-15);

        assert!(matches!(
            p.eval(&[1.0], &[], &pv, 0.0),
            Err(Error::MissingAssignment { .. })
        ));
    }

    #[test]
    fn graded_lex_order_is_by_degree_first() {
        let d = 4;
        let p = &(&(&x(1, d) * &x(1, d)) * &x(1, d)) + &(&y(1, d) + &Poly::one(1, d));
        let degrees: Vec<u32> = p.terms().map(|(i, _)| i.phase_degree()).collect();
        assert_eq!(degrees, vec![0, 1, 3]);
    }

    #[test]
    fn substitution_and_binding() {
        let t = Poly::var(1, 2, Var::T).unwrap();
        let nu = Poly::param(1, 2, Param::Nu);
        let p = &(&t * &t) * &nu;
        let q = p.substitute_t(&rat(1, 2)).bind_params(Some(&rat(3, 1)), None, None);
        assert_eq!(q, Poly::constant(1, 2, rat(3, 4)));
    }

    #[test]
    fn display_is_readable() {
        let p = &(&x(1, 2) * &x(1, 2)).scale(&rat(1, 8)) - &Poly::param(1, 2, Param::Eps);
        assert_eq!(alloc::format!("{p}"), "-eps + 1/8*x0^2");
    }
}
