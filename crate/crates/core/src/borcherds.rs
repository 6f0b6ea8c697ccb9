//! Twisted Borcherds products `Ψ = q^ρ Π_{n≥1} P_Δ(q^n)^{c(n)}` and their
//! logarithmic derivatives.
//!
//! With `√Δ = i√|Δ|` for negative `Δ` the Gauss sum gives
//! `log P_Δ(X) = −sgn(Δ)·√Δ·Σ_{k≥1} (Δ/k) X^k / k`, which covers `Δ = 1`
//! (`P_1 = 1 − X`) as well. All products are assembled in log space.

use crate::algebra::kronecker::{divisors, is_fundamental_discriminant};
use crate::algebra::{kronecker, rat, ratio, QSeries, QuadNum, Rational};
use crate::error::{precondition, Error, Result};
use num_complex::Complex64;
use num_traits::Zero;
use std::collections::BTreeMap;

/// Exponents `c(n) = c⁺(|Δ|n²/4N, rn/2N)` of a twisted product.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExponentData {
    pub delta: i64,
    pub r: i64,
    pub level: i64,
    pub c_plus: BTreeMap<i64, Rational>,
    /// Weyl vector as an exponent of `q`; zero unless `Δ = 1`.
    pub weyl: Rational,
}

impl ExponentData {
    pub fn new(delta: i64, r: i64, level: i64, c_plus: BTreeMap<i64, Rational>) -> Self {
        ExponentData { delta, r, level, c_plus, weyl: Rational::zero() }
    }

    pub fn validate(&self) -> Result<()> {
        if !is_fundamental_discriminant(self.delta) {
            return precondition(format!("{} is not a fundamental discriminant", self.delta));
        }
        if self.level < 1 {
            return precondition(format!("level must be positive, got {}", self.level));
        }
        if (self.delta - self.r * self.r).rem_euclid(4 * self.level) != 0 {
            return Err(Error::Congruence(format!(
                "{} ≢ {}² (mod {})",
                self.delta,
                self.r,
                4 * self.level
            )));
        }
        if self.delta != 1 && !self.weyl.is_zero() {
            return precondition("a nonzero Weyl vector needs Δ = 1");
        }
        Ok(())
    }

    /// `c(n)`; every `1 ≤ n < prec` must be present.
    fn exponents_below(&self, prec: i64) -> Result<Vec<(i64, Rational)>> {
        (1..prec)
            .map(|n| self.c_plus.get(&n).map(|c| (n, c.clone())).ok_or(Error::MissingExponent(n)))
            .collect()
    }
}

/// `−sgn(Δ)·√Δ`, the common factor of the logarithms.
fn log_factor(delta: i64) -> QuadNum {
    -QuadNum::sqrt_of(delta).scale(&rat(delta.signum()))
}

/// `log P_Δ(X) + O(X^prec)`.
pub fn log_p_delta(delta: i64, prec: i64) -> Result<QSeries> {
    if !is_fundamental_discriminant(delta) {
        return precondition(format!("{delta} is not a fundamental discriminant"));
    }
    let f = log_factor(delta);
    Ok(QSeries::from_terms(
        1,
        prec.max(0),
        (1..prec).map(|k| (k, f.scale(&ratio(i64::from(kronecker(delta, k)), k)))),
    ))
}

/// `P_Δ(X) = Π_{b mod Δ} (1 − e(b/Δ)X)^{(Δ/b)} + O(X^prec)` over `ℚ(√Δ)`.
pub fn p_delta_series(delta: i64, prec: i64) -> Result<QSeries> {
    Ok(log_p_delta(delta, prec)?.exp()?)
}

/// `Σ_{t mod |Δ|} (Δ/t) e(nt/|Δ|)` in floating point.
pub fn gauss_sum(delta: i64, n: i64) -> Complex64 {
    let m = delta.abs();
    (0..m)
        .map(|t| {
            let phase = 2.0 * std::f64::consts::PI * ((n * t).rem_euclid(m) as f64) / m as f64;
            Complex64::from_polar(f64::from(kronecker(delta, t)), phase)
        })
        .sum()
}

/// `|gauss_sum(Δ, n) − (Δ/n)·ε·√|Δ||` with `ε = 1` or `i` by the sign of `Δ`.
pub fn gauss_sum_defect(delta: i64, n: i64) -> f64 {
    let root = (delta.abs() as f64).sqrt();
    let eps = if delta > 0 { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 1.0) };
    (gauss_sum(delta, n) - eps * root * f64::from(kronecker(delta, n))).norm()
}

/// `Ψ = q^ρ·exp(Σ_n c(n)·log P_Δ(q^n))`, with the product part known below
/// `q^prec`.
pub fn twisted_product(data: &ExponentData, prec: i64) -> Result<QSeries> {
    data.validate()?;
    let base = log_p_delta(data.delta, prec)?;
    let mut log = QSeries::zero(1, prec.max(0));
    for (n, c) in data.exponents_below(prec)? {
        if !c.is_zero() {
            log = log.add(&base.rescale(n).truncate(prec).scale_rational(&c));
        }
    }
    Ok(log.exp()?.shift_by(&data.weyl))
}

/// The q-expansion of the logarithmic derivative `q·d/dq log Ψ`:
/// `ρ − sgn(Δ)√Δ·Σ_{n≥1} (Σ_{d|n} (n/d)(Δ/d)c(n/d)) q^n`.
pub fn dlog_expansion(data: &ExponentData, prec: i64) -> Result<QSeries> {
    data.validate()?;
    let c: BTreeMap<i64, Rational> = data.exponents_below(prec)?.into_iter().collect();
    let f = log_factor(data.delta);
    let mut terms = vec![(0, QuadNum::rational(data.weyl.clone()))];
    for n in 1..prec {
        let s: Rational = divisors(n)
            .into_iter()
            .map(|d| &c[&(n / d)] * rat((n / d) * i64::from(kronecker(data.delta, d))))
            .sum();
        terms.push((n, f.scale(&s)));
    }
    Ok(QSeries::from_terms(1, prec.max(0), terms))
}
