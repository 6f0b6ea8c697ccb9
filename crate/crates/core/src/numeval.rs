//! Floating-point evaluation of `η(τ)` anywhere in the upper half plane, and
//! the Heegner point relation of Gross on `X₀(37)`.

use crate::algebra::{QSeries, QuadNum, ratio};
use crate::error::{precondition, Result};
use crate::heegner::{classes, heegner_point, Bqf, HeegnerClass};
use crate::modforms::eta_quotient;
use num_complex::Complex64;
use std::f64::consts::PI;

fn e(x: f64) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * x)
}

fn check_upper(tau: Complex64) -> Result<()> {
    if !(tau.im > 0.0) || !tau.re.is_finite() {
        return precondition(format!("{tau} is not in the upper half plane"));
    }
    Ok(())
}

/// `q^{1/24}·Π(1 − qⁿ)` summed until `|qⁿ|` drops below machine precision.
pub fn eta_product(tau: Complex64) -> Result<Complex64> {
    check_upper(tau)?;
    let q = (Complex64::i() * 2.0 * PI * tau).exp();
    let mut prod = Complex64::new(1.0, 0.0);
    let mut qn = q;
    while qn.norm() > 1e-18 {
        prod *= Complex64::new(1.0, 0.0) - qn;
        qn *= q;
    }
    Ok((Complex64::i() * 2.0 * PI * tau / 24.0).exp() * prod)
}

/// `η(τ)`, after moving `τ` into the fundamental domain with
/// `η(τ + 1) = e(1/24)η(τ)` and `η(−1/τ) = √(−iτ)·η(τ)`.
pub fn eta_numeric(tau: Complex64) -> Result<Complex64> {
    check_upper(tau)?;
    let mut factor = Complex64::new(1.0, 0.0);
    let mut z = tau;
    for _ in 0..1000 {
        let n = z.re.round();
        z.re -= n;
        factor *= e(n / 24.0);
        if z.norm_sqr() >= 1.0 - 1e-15 {
            return Ok(factor * eta_product(z)?);
        }
        let w = -z.inv();
        factor *= (-Complex64::i() * w).sqrt();
        z = w;
    }
    precondition(format!("reduction of {tau} did not terminate"))
}

/// `(3 + √−139)/2`, the value of `η(z)²/η(37z)²` at the zeros of `r`.
fn gross_constant() -> QuadNum {
    QuadNum::new(ratio(3, 2), ratio(1, 2), -139)
}

fn t37(tau: Complex64) -> Result<Complex64> {
    let ratio = eta_numeric(tau)? / eta_numeric(tau * 37.0)?;
    Ok(ratio * ratio)
}

/// `r(τ) = η(τ)²/η(37τ)² − (3 + √−139)/2`.
pub fn r37_eval(tau: Complex64) -> Result<Complex64> {
    Ok(t37(tau)? - gross_constant().to_complex())
}

/// `r′(τ) = η(τ)²/η(37τ)² − (3 − √−139)/2`.
pub fn r37_conj_eval(tau: Complex64) -> Result<Complex64> {
    Ok(t37(tau)? - gross_constant().conj().to_complex())
}

#[derive(Clone, Debug)]
pub struct ResidueReport {
    pub values: Vec<(HeegnerClass, f64)>,
}

impl ResidueReport {
    /// Largest `|f(α)|`, or `None` for an empty class list.
    pub fn max(&self) -> Option<f64> {
        self.values.iter().map(|(_, v)| *v).reduce(f64::max)
    }

    pub fn zeros(&self, tol: f64) -> Vec<&HeegnerClass> {
        self.values.iter().filter(|(_, v)| *v < tol).map(|(c, _)| c).collect()
    }
}

/// `|f(α_Q)|` at the CM point of every class in `classes(N, D, r)`.
pub fn heegner_residue_check(
    n: i64,
    d: i64,
    r: i64,
    f: impl Fn(Complex64) -> Result<Complex64>,
) -> Result<ResidueReport> {
    let values = classes(n, d, r)?
        .into_iter()
        .map(|c| {
            let v = f(c.point.to_complex())?.norm();
            Ok((c, v))
        })
        .collect::<Result<_>>()?;
    Ok(ResidueReport { values })
}

/// `|f(α_Q)|` at the CM points of explicit forms.
pub fn residues_at(forms: &[Bqf], f: impl Fn(Complex64) -> Result<Complex64>) -> Result<Vec<f64>> {
    forms.iter().map(|q| Ok(f(heegner_point(q)?.to_complex())?.norm())).collect()
}

/// Both sides of `r·r′·η(37z)²/η(z)² = t − 3 + 37t⁻¹` with
/// `t = η(z)²/η(37z)²`, to `O(q^prec)`.
pub fn gross_identity(prec: i64) -> Result<(QSeries, QSeries)> {
    // r·r′ starts at q⁻⁶, which costs six terms of t and of t⁻¹
    let t = eta_quotient(&[(1, 2), (37, -2)], prec + 6)?;
    let alpha = gross_constant();
    let r = t.add_constant(&-&alpha);
    let r_conj = t.add_constant(&-alpha.conj());
    let t_inv = eta_quotient(&[(1, -2), (37, 2)], prec + 6)?;
    let lhs = r.mul(&r_conj).mul(&t_inv);
    let rhs = t.add_constant(&QuadNum::from_int(-3)).add(&t_inv.scale(&QuadNum::from_int(37)));
    Ok((lhs.truncate_q(prec), rhs.truncate_q(prec)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn eta_at_i() {
        let v = eta_numeric(c(0.0, 1.0)).unwrap();
        assert!((v - c(0.768_225_422_326_056_6, 0.0)).norm() < 1e-14);
        assert!((eta_product(c(0.0, 1.0)).unwrap() - v).norm() < 1e-14);
    }

    #[test]
    fn transformation_laws() {
        let tau = c(0.0, 2.0);
        let quotient = eta_numeric(tau + 1.0).unwrap() / eta_numeric(tau).unwrap();
        assert!((quotient - e(1.0 / 24.0)).norm() < 1e-12);
        let s = eta_numeric(-tau.inv()).unwrap();
        assert!((s - 2f64.sqrt() * eta_numeric(tau).unwrap()).norm() < 1e-12);
    }

    #[test]
    fn rejects_lower_half_plane() {
        assert!(eta_numeric(c(0.3, 0.0)).is_err());
        assert!(eta_numeric(c(0.3, -1.0)).is_err());
    }

    #[test]
    fn gross_points() {
        let unprimed = [Bqf::new(37, 3, 1), Bqf::new(185, 151, 31), Bqf::new(185, -71, 7)];
        let primed = unprimed.map(|q| Bqf::new(-q.a, q.b, -q.c));
        for v in residues_at(&unprimed, r37_eval).unwrap() {
            assert!(v < 1e-8, "|r(α)| = {v}");
        }
        for v in residues_at(&primed, r37_conj_eval).unwrap() {
            assert!(v < 1e-8, "|r′(α′)| = {v}");
        }
        assert!(r37_eval(c(0.0, 2.0)).unwrap().norm() > 1.0);
        assert!(residues_at(&primed, r37_eval).unwrap().iter().all(|&v| v > 1e-3));
    }

    #[test]
    fn residue_report_over_classes() {
        let report = heegner_residue_check(37, -139, 3, r37_eval).unwrap();
        assert_eq!(report.values.len(), 6);
        assert_eq!(report.zeros(1e-8).len(), 3);
        let empty = heegner_residue_check(1, -15, 0, r37_eval);
        assert!(empty.map(|r| r.max().is_none()).unwrap_or(true));
    }

    #[test]
    fn gross_series_identity() {
        let (lhs, rhs) = gross_identity(30).unwrap();
        assert!(lhs.prec_exponent() >= crate::algebra::rat(30));
        assert_eq!(lhs, rhs);
    }

    proptest! {
        #[test]
        fn agrees_with_direct_product(re in -2.0f64..2.0, im in 0.6f64..3.0) {
            let tau = c(re, im);
            let direct = eta_product(tau).unwrap();
            prop_assert!((eta_numeric(tau).unwrap() - direct).norm() < 1e-10);
        }

        #[test]
        fn multiplier_bookkeeping(a in -5i64..=5, b in -5i64..=5, c_ in -5i64..=5) {
            // complete (a, c) to a matrix of determinant one when gcd(a, c) = 1
            prop_assume!(crate::algebra::kronecker::gcd(a, c_) == 1 && c_ != 0);
            let (g, x, y) = ext_gcd(a, c_);
            prop_assume!(g == 1);
            let (bb, d) = (-y + b * a, x + b * c_);
            prop_assert_eq!(a * d - bb * c_, 1);
            let tau = c(1.0 / 3.0, 0.2);
            let gamma_tau = (tau * a as f64 + bb as f64) / (tau * c_ as f64 + d as f64);
            prop_assert!((eta_numeric(gamma_tau).unwrap() / dedekind_transform(a, bb, c_, d, tau) - 1.0).norm() < 1e-10);
        }
    }

    /// `s(h, k) = Σ_{j<k} ((j/k))((hj/k))`.
    fn dedekind_sum(h: i64, k: i64) -> f64 {
        let saw = |x: f64| if x.fract() == 0.0 { 0.0 } else { x - x.floor() - 0.5 };
        (1..k).map(|j| saw(j as f64 / k as f64) * saw((h * j) as f64 / k as f64)).sum()
    }

    /// `η(γτ)` from the closed form `e^{πi((a+d)/12c − s(d,c))}·√(−i(cτ+d))·η(τ)`
    /// for `c > 0`, with `η(τ)` from the plain product.
    fn dedekind_transform(a: i64, b: i64, c_: i64, d: i64, tau: Complex64) -> Complex64 {
        let (a, _b, c_, d) = if c_ < 0 { (-a, -b, -c_, -d) } else { (a, b, c_, d) };
        let phase = PI * ((a + d) as f64 / (12 * c_) as f64 - dedekind_sum(d, c_));
        let root = (-Complex64::i() * (tau * c_ as f64 + d as f64)).sqrt();
        Complex64::from_polar(1.0, phase) * root * eta_product(tau).unwrap()
    }

    fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
        if b == 0 {
            (a.abs(), a.signum(), 0)
        } else {
            let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
            (g, y, x - a.div_euclid(b) * y)
        }
    }
}
