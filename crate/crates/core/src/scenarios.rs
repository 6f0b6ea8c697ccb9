//! The worked product identities and the Gross relation as runnable checks,
//! shared by the command-line tool and the acceptance tests.

use crate::algebra::{kronecker, ratio, QSeries, QuadNum, Rational};
use crate::borcherds::{twisted_product, ExponentData};
use crate::error::{precondition, Result};
use crate::heegner::Bqf;
use crate::modforms::{eisenstein_series, j_series, level6_forms, mock_series, plus_form};
use crate::numeval::{gross_identity, r37_conj_eval, r37_eval, residues_at};
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScenarioReport {
    pub name: &'static str,
    pub passed: bool,
    pub lines: Vec<String>,
}

impl ScenarioReport {
    fn new(name: &'static str) -> Self {
        ScenarioReport { name, passed: true, lines: Vec::new() }
    }

    fn note(&mut self, line: impl Into<String>) {
        self.lines.push(line.into());
    }

    fn compare(&mut self, label: &str, lhs: &QSeries, rhs: &QSeries) {
        match lhs.first_discrepancy(rhs) {
            Some(d) => {
                self.passed = false;
                self.note(format!("{label}: first discrepancy {d}"));
            }
            None => {
                let upto = lhs.prec_exponent().min(rhs.prec_exponent());
                self.note(format!("{label}: agree to O(q^{upto})"));
            }
        }
    }
}

impl fmt::Display for ScenarioReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "scenario {}", self.name)?;
        for line in &self.lines {
            writeln!(f, "  {line}")?;
        }
        write!(f, "{}", if self.passed { "PASS" } else { "FAIL" })
    }
}

/// `Δ = 5`, `r = 1`, `N = 1` with `c(n) = c_{−3}(5n²)`, enough for a product
/// known below `q^prec`.
pub fn zagier5_exponents(prec: i64) -> Result<ExponentData> {
    if prec < 1 {
        return precondition("precision must be positive");
    }
    let top = 5 * (prec - 1) * (prec - 1);
    let f = plus_form(-3, top.max(30) + 1)?;
    let c_plus = (1..prec).map(|n| (n, f.coeff(5 * n * n))).collect();
    Ok(ExponentData::new(5, 1, 1, c_plus))
}

/// `Δ = −8`, `r = 4`, `N = 6` with `c(n) = (n/3)·a(n²/3)`.
pub fn mock6_exponents(prec: i64) -> Result<ExponentData> {
    if prec < 1 {
        return precondition("precision must be positive");
    }
    // a(n²/3) needs n²/3 < mock precision / 2
    let mock = mock_series(2 * (prec - 1) * (prec - 1) / 3 + 4);
    let c_plus = (1..prec)
        .map(|n| {
            let chi = kronecker(n, 3);
            let c = if chi == 0 { Rational::from_integer(0.into()) } else { mock.a(n * n) * Rational::from_integer(chi.into()) };
            (n, c)
        })
        .collect();
    Ok(ExponentData::new(-8, 4, 6, c_plus))
}

/// `(j + 191025/2 + (85995/2)√5)/(j + 191025/2 − (85995/2)√5)` to `O(q^prec)`.
pub fn zagier5_rhs(prec: i64) -> Result<QSeries> {
    let j = j_series(prec + 1)?;
    let s = QuadNum::new(ratio(191025, 2), ratio(85995, 2), 5);
    let num = j.add_constant(&s);
    let den = j.add_constant(&s.conj());
    Ok(num.div(&den)?.truncate_q(prec))
}

/// `φ/((j₆* + 10)δ₆)` to `O(q^prec)`, where `450φ` is the combination of `δ₆`
/// and `E₄(mz)` for `m | 6`.
pub fn mock6_rhs(prec: i64) -> Result<QSeries> {
    let w = prec + 2;
    let (j6, delta6) = level6_forms(w)?;
    let e4 = eisenstein_series(4, w)?;
    let q2 = |a: i64, b: i64| QuadNum::new(ratio(a, 450), ratio(b, 450), -2);
    let mut phi = delta6.scale(&q2(3360, -1920));
    for (m, c) in [(1, q2(1, -7)), (2, q2(4, -28)), (3, q2(89, 7)), (6, q2(356, 28))] {
        phi = phi.add(&e4.rescale(m).truncate(w).scale(&c));
    }
    let den = j6.add_constant(&QuadNum::from_int(10)).mul(&delta6);
    Ok(phi.div(&den)?.truncate_q(prec))
}

/// The four coefficients after the constant term of the mock theta product.
pub fn mock6_leading() -> [QuadNum; 4] {
    let q2 = |a: i64, b: i64| QuadNum::new(ratio(a, 1), ratio(b, 1), -2);
    [q2(0, -8), q2(-64, 24), q2(384, 168), q2(64, -1768)]
}

pub fn verify_zagier5(prec: i64) -> Result<ScenarioReport> {
    let mut report = ScenarioReport::new("zagier5");
    let data = zagier5_exponents(prec)?;
    let exps: Vec<String> = data.c_plus.values().take(4).map(|c| c.to_string()).collect();
    report.note(format!("c(n) = c_-3(5n^2): {}, ...", exps.join(", ")));
    let lhs = twisted_product(&data, prec)?;
    let rhs = zagier5_rhs(prec)?;
    report.compare("product vs j-quotient", &lhs, &rhs);
    Ok(report)
}

pub fn verify_mock6(prec: i64) -> Result<ScenarioReport> {
    let mut report = ScenarioReport::new("mock6");
    let data = mock6_exponents(prec)?;
    let lhs = twisted_product(&data, prec)?;
    let rhs = mock6_rhs(prec)?;
    for line in lhs.truncate_q(prec.min(5)).to_lines().into_iter().filter(|l| !l.starts_with('O')) {
        report.note(line);
    }
    report.compare("product vs phi/((j6*+10)delta6)", &lhs, &rhs);
    for (n, expected) in (1i64..).zip(mock6_leading()) {
        if n >= prec {
            break;
        }
        let got = lhs.coeff_int(n);
        if got != expected {
            report.passed = false;
            report.note(format!("coefficient of q^{n}: {got}, expected {expected}"));
        }
    }
    Ok(report)
}

pub fn verify_gross37(prec: i64, tol: f64) -> Result<ScenarioReport> {
    let mut report = ScenarioReport::new("gross37");
    let unprimed = [Bqf::new(37, 3, 1), Bqf::new(185, 151, 31), Bqf::new(185, -71, 7)];
    let primed = unprimed.map(|q| Bqf::new(-q.a, q.b, -q.c));
    for (label, forms, f) in [
        ("r", &unprimed, r37_eval as fn(_) -> _),
        ("r'", &primed, r37_conj_eval as fn(_) -> _),
    ] {
        let values = residues_at(forms, f)?;
        let max = values.iter().copied().fold(0.0, f64::max);
        let ok = max < tol;
        report.passed &= ok;
        report.note(format!("max |{label}| at {} points: {max:.3e} ({})", values.len(), if ok { "ok" } else { "above tolerance" }));
    }
    let (lhs, rhs) = gross_identity(prec)?;
    report.compare("r*r'*eta(37z)^2/eta(z)^2 vs t - 3 + 37/t", &lhs, &rhs);
    Ok(report)
}
