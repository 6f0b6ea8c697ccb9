//! Explicit q-expansions: η and η-quotients, θ, Eisenstein series, j, the
//! level 6 Hauptmodul and cusp form, the weight 1/2 plus-space basis f_d and
//! the mock theta functions f(q), ω(q).
//!
//! Unless stated otherwise `prec` is an integer exponent bound: the result is
//! known for exponents `< prec`.

use crate::algebra::kronecker::divisors;
use crate::algebra::{rat, QSeries, QuadNum, Rational};
use crate::error::{precondition, Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

fn int_series(start: i64, prec: i64, coeffs: Vec<BigInt>) -> QSeries {
    QSeries::from_dense(start, prec, coeffs.into_iter().map(Rational::from_integer))
}

/// `Π_{n≥1} (1 − q^n) + O(q^prec)`, expanded factor by factor.
pub fn euler_product(prec: i64) -> QSeries {
    let p = prec.max(0) as usize;
    let mut c = vec![BigInt::zero(); p];
    if p > 0 {
        c[0] = BigInt::one();
    }
    for n in 1..p {
        for j in (n..p).rev() {
            let t = c[j - n].clone();
            c[j] -= t;
        }
    }
    int_series(0, prec, c)
}

/// Same product via Euler's pentagonal number theorem.
pub fn euler_product_pentagonal(prec: i64) -> QSeries {
    let mut terms = Vec::new();
    let mut k = 0i64;
    loop {
        let e1 = k * (3 * k - 1) / 2;
        let e2 = k * (3 * k + 1) / 2;
        if e1 >= prec && e2 >= prec {
            break;
        }
        let sign = if k % 2 == 0 { 1 } else { -1 };
        terms.push((e1, QuadNum::from_int(sign)));
        if k > 0 {
            terms.push((e2, QuadNum::from_int(sign)));
        }
        k += 1;
    }
    QSeries::from_terms(1, prec.max(0), terms)
}

/// `η(τ) = q^{1/24} Π (1 − q^n)` with the product known below `q^prec`;
/// `den = 24`.
pub fn eta_series(prec: i64) -> QSeries {
    euler_product(prec).with_den(24).shift(1)
}

/// `Π η(m τ)^k` over the given `(m, k)` pairs, known below `q^prec`. The
/// denominator is reduced as far as the exponents allow.
pub fn eta_quotient(factors: &[(i64, i64)], prec: i64) -> Result<QSeries> {
    let lead = factors.iter().map(|(m, k)| rat(m * k)).sum::<Rational>() / rat(24);
    let rel = (rat(prec) - &lead).ceil().to_integer();
    let rel: i64 = i64::try_from(rel).map_err(|_| Error::Precondition("precision overflow".into()))?;
    let rel = rel.max(0);
    let base = euler_product(rel);
    let mut acc = QSeries::one(rel);
    for &(m, k) in factors {
        if m <= 0 {
            return precondition(format!("eta quotient needs positive scale, got {m}"));
        }
        acc = acc.mul(&base.rescale(m).truncate(rel).pow(k)?);
    }
    let shifted = acc.shift_by(&lead);
    let den = shifted.den();
    Ok(shifted.truncate(prec * den).reduce_den())
}

/// `θ(τ) = Σ_{n∈ℤ} q^{n²}`.
pub fn theta_series(prec: i64) -> QSeries {
    let mut terms = vec![(0, QuadNum::one())];
    let mut n = 1;
    while n * n < prec {
        terms.push((n * n, QuadNum::from_int(2)));
        n += 1;
    }
    QSeries::from_terms(1, prec.max(0), terms)
}

fn sigma(k: u32, n: i64) -> BigInt {
    divisors(n).into_iter().map(|d| num_traits::pow(BigInt::from(d), k as usize)).sum()
}

/// Normalized Eisenstein series `E_4 = 1 + 240 Σ σ_3(n) q^n` and
/// `E_6 = 1 − 504 Σ σ_5(n) q^n`.
pub fn eisenstein_series(k: u32, prec: i64) -> Result<QSeries> {
    let factor = match k {
        4 => BigInt::from(240),
        6 => BigInt::from(-504),
        _ => return precondition(format!("Eisenstein series of weight {k} not provided")),
    };
    let coeffs = (0..prec.max(0))
        .map(|n| if n == 0 { BigInt::one() } else { &factor * sigma(k - 1, n) })
        .collect();
    Ok(int_series(0, prec, coeffs))
}

/// `Δ = η^24 = q Π (1 − q^n)^24`.
pub fn discriminant_series(prec: i64) -> QSeries {
    euler_product(prec - 1).pow(24).expect("positive power").shift(1)
}

/// `j = E_4³ / Δ`.
pub fn j_series(prec: i64) -> Result<QSeries> {
    // Δ has valuation 1, so dividing costs two orders of precision.
    let e4 = eisenstein_series(4, prec + 1)?;
    let delta = discriminant_series(prec + 2);
    Ok(e4.pow(3)?.div(&delta)?.truncate(prec))
}

/// The Hauptmodul `j₆*` of `Γ₀*(6)` and the weight 4 cusp form `δ₆`.
pub fn level6_forms(prec: i64) -> Result<(QSeries, QSeries)> {
    let u = eta_quotient(&[(1, 4), (2, 4), (3, -4), (6, -4)], prec + 2)?;
    let j6 = u
        .add(&u.inv()?.scale_rational(&rat(81)))
        .add_constant(&QuadNum::from_int(4))
        .truncate(prec);
    let delta6 = eta_quotient(&[(1, 2), (2, 2), (3, 2), (6, 2)], prec)?;
    Ok((j6, delta6))
}

/// `F_2 = η(4τ)^8/η(2τ)^4 = Σ_{n odd} σ_1(n) q^n`, weight 2 on Γ₀(4).
pub fn f2_series(prec: i64) -> Result<QSeries> {
    eta_quotient(&[(4, 8), (2, -4)], prec)
}

/// A member `f_d = q^d + Σ_{n>0} c_d(n) q^n` of the weight 1/2 plus space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlusForm {
    pub d: i64,
    pub series: QSeries,
}

impl PlusForm {
    /// `c_d(n)`.
    pub fn coeff(&self, n: i64) -> Rational {
        self.series.coeff_int(n).as_rational().cloned().expect("plus-space coefficients are rational")
    }

    fn check(&self) -> Result<()> {
        let fail = |what: String| Err(Error::LinearAlgebra(format!("f_{}: {what}", self.d)));
        if self.series.coeff_int(self.d) != QuadNum::one() {
            return fail("leading coefficient is not 1".into());
        }
        for (e, c) in self.series.iter_scaled() {
            if matches!(e.rem_euclid(4), 2 | 3) {
                return fail(format!("nonzero coefficient at q^{e}"));
            }
            if e <= 0 && e != self.d {
                return fail(format!("unexpected coefficient at q^{e}"));
            }
            if !c.is_rational() {
                return fail(format!("irrational coefficient at q^{e}"));
            }
        }
        Ok(())
    }
}

/// Solves `A x = b` over ℚ by Gauss–Jordan elimination, insisting on a unique
/// solution.
fn solve_unique(mut rows: Vec<Vec<Rational>>, ncols: usize) -> Result<Vec<Rational>> {
    let mut rank = 0;
    let mut pivots = Vec::new();
    for col in 0..ncols {
        let Some(p) = (rank..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let pv = rows[rank][col].clone();
        for x in rows[rank].iter_mut() {
            *x /= &pv;
        }
        let pivot_row = rows[rank].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != rank && !row[col].is_zero() {
                let f = row[col].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(col);
        rank += 1;
    }
    if rows[rank..].iter().any(|r| !r[ncols].is_zero()) {
        return Err(Error::LinearAlgebra("inconsistent conditions".into()));
    }
    if rank < ncols {
        return Err(Error::LinearAlgebra(format!("solution not unique (rank {rank} < {ncols})")));
    }
    let mut x = vec![Rational::zero(); ncols];
    for (i, c) in pivots.into_iter().enumerate() {
        x[c] = rows[i][ncols].clone();
    }
    Ok(x)
}

/// `f_{-3}`, obtained from `g = f_{-3}·Δ(4τ) = q − … `, a plus-space form of
/// weight 25/2. The holomorphic forms of that weight on Γ₀(4) are spanned by
/// `θ^{25−4j} F_2^j` for `0 ≤ j ≤ 6`; `g` is the member with coefficients
/// `0, 1, 0` at `q^0, q^1, q^4` and none at exponents `≡ 2, 3 (mod 4)`.
fn seed_f3(prec: i64) -> Result<QSeries> {
    let w = prec + 8;
    let theta = theta_series(w);
    let theta4 = theta.pow(4)?;
    let f2 = f2_series(w)?;
    let mut basis = Vec::with_capacity(7);
    let mut f2j = QSeries::one(w);
    for j in 0..=6 {
        basis.push(theta.mul(&theta4.pow(6 - j)?).mul(&f2j));
        f2j = f2j.mul(&f2);
    }
    let coeff = |s: &QSeries, n: i64| s.coeff_int(n).as_rational().cloned().expect("rational");
    let mut bound = 48.min(w);
    let x = loop {
        let mut rows = Vec::new();
        for (n, v) in [(0, 0), (1, 1), (4, 0)] {
            let mut row: Vec<Rational> = basis.iter().map(|b| coeff(b, n)).collect();
            row.push(rat(v));
            rows.push(row);
        }
        for n in (0..bound).filter(|n| matches!(n % 4, 2 | 3)) {
            let mut row: Vec<Rational> = basis.iter().map(|b| coeff(b, n)).collect();
            row.push(Rational::zero());
            rows.push(row);
        }
        match solve_unique(rows, basis.len()) {
            Ok(x) => break x,
            Err(e) if bound >= w => return Err(e),
            Err(_) => bound = (bound + 20).min(w),
        }
    };
    let mut g = QSeries::zero(1, w);
    for (b, c) in basis.iter().zip(&x) {
        g = g.add(&b.scale_rational(c));
    }
    let delta4 = discriminant_series(w).rescale(4);
    Ok(g.div(&delta4)?.truncate(prec))
}

/// The basis elements `f_d` for all discriminants `dmin ≤ d < 0`.
///
/// The plus space is a free module over `ℂ[j(4τ)]` generated by `f_0 = θ` and
/// `f_{-3}`. Multiplying by `j(4τ) = q^{-4} + …` and cancelling the lower
/// principal-part terms against already known `f_{d'}` (and the constant term
/// against θ) yields `f_d` for `|d| = 4, 7, 8, 11, …`. Each result is checked
/// against the plus-space support condition on every computed coefficient.
pub fn plus_space_basis(dmin: i64, prec: i64) -> Result<Vec<PlusForm>> {
    if dmin >= 0 || !matches!(dmin.rem_euclid(4), 0 | 1) {
        return precondition(format!("{dmin} is not a negative discriminant"));
    }
    let kmax = -dmin;
    if prec <= kmax + 20 {
        return precondition(format!("precision {prec} must exceed {}", kmax + 20));
    }
    // each multiplication by j(4τ) costs four orders of precision
    let w = prec + kmax + 4;
    let j4 = j_series(w / 4 + 2)?.rescale(4);
    let mut reduced: BTreeMap<i64, QSeries> = BTreeMap::new();
    reduced.insert(0, theta_series(w));
    reduced.insert(3, seed_f3(w)?);
    let mut k = 4;
    while k <= kmax {
        let mut v = reduced[&(k - 4)].mul(&j4);
        for (&j, r) in reduced.iter().rev() {
            let c = v.coeff_int(-j);
            if !c.is_zero() {
                v = v.sub(&r.scale(&c));
            }
        }
        reduced.insert(k, v);
        k += if k % 4 == 0 { 3 } else { 1 };
    }
    let mut out = Vec::new();
    for d in dmin..0 {
        if matches!(d.rem_euclid(4), 0 | 1) {
            let f = PlusForm { d, series: reduced[&(-d)].truncate(prec) };
            if f.series.prec() < prec {
                return Err(Error::LinearAlgebra(format!("f_{d}: precision loss")));
            }
            f.check()?;
            out.push(f);
        }
    }
    Ok(out)
}

/// `f_d` alone.
pub fn plus_form(d: i64, prec: i64) -> Result<PlusForm> {
    let mut all = plus_space_basis(d, prec)?;
    Ok(all.remove(0))
}

/// Ramanujan's third order mock theta functions and the coefficients
/// `a(n)`, `n ∈ ℤ + 1/3`, of `−2q^{1/3}(ω(q^{1/2}) + ω(−q^{1/2}))`.
#[derive(Clone, Debug)]
pub struct MockData {
    pub omega: QSeries,
    pub f: QSeries,
    /// The series `Σ a(n) q^n` (denominator 3).
    pub a_series: QSeries,
    /// `a(n)` keyed by `3n`.
    pub a_coeffs: BTreeMap<i64, Rational>,
}

impl MockData {
    /// `a(n)` for `n` given as `3n`; zero off the support.
    pub fn a(&self, three_n: i64) -> Rational {
        assert!(
            three_n < self.a_series.prec() * 3 / self.a_series.den(),
            "a(n) requested beyond precision"
        );
        self.a_coeffs.get(&three_n).cloned().unwrap_or_else(Rational::zero)
    }
}

/// `ω(q) = Σ_{n≥0} q^{2n²+2n} / (q;q²)_{n+1}²`.
pub fn mock_omega(prec: i64) -> QSeries {
    let p = prec.max(0) as usize;
    let mut total = vec![BigInt::zero(); p];
    // g = 1/(q;q²)_{n+1}², updated as n grows.
    let mut g = vec![BigInt::zero(); p];
    if p > 0 {
        g[0] = BigInt::one();
    }
    let mut n = 0usize;
    loop {
        let shift = 2 * n * n + 2 * n;
        if shift >= p {
            break;
        }
        let m = 2 * n + 1;
        for _ in 0..2 {
            for j in m..p {
                let t = g[j - m].clone();
                g[j] += t;
            }
        }
        for j in shift..p {
            total[j] += &g[j - shift];
        }
        n += 1;
    }
    int_series(0, prec, total)
}

/// `f(q) = Σ_{n≥0} q^{n²} / (−q;q)_n²`.
pub fn mock_f(prec: i64) -> QSeries {
    let p = prec.max(0) as usize;
    let mut total = vec![BigInt::zero(); p];
    let mut g = vec![BigInt::zero(); p];
    if p > 0 {
        g[0] = BigInt::one();
    }
    let mut n = 0usize;
    while n * n < p {
        if n > 0 {
            for _ in 0..2 {
                for j in n..p {
                    let t = g[j - n].clone();
                    g[j] -= t;
                }
            }
        }
        for j in n * n..p {
            total[j] += &g[j - n * n];
        }
        n += 1;
    }
    int_series(0, prec, total)
}

/// ω and f to `O(q^prec)`, and `a(n)` for `n < prec/2 + 1/3`.
pub fn mock_series(prec: i64) -> MockData {
    let omega = mock_omega(prec);
    let f = mock_f(prec);
    let half = omega.substitute_root(2);
    let half_alt = omega.alternate().substitute_root(2);
    let a_series = half
        .add(&half_alt)
        .with_den(6)
        .shift(2)
        .scale_rational(&rat(-2))
        .reduce_den();
    let a_coeffs = a_series
        .terms()
        .map(|(e, c)| {
            let key = (e * rat(3)).to_integer();
            (i64::try_from(key).expect("exponent fits"), c.as_rational().cloned().expect("rational"))
        })
        .collect();
    MockData { omega, f, a_series, a_coeffs }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::ratio;

    fn ints(s: &QSeries, from: i64, to: i64) -> Vec<i64> {
        (from..to)
            .map(|n| {
                let c = s.coeff_int(n);
                i64::try_from(c.as_rational().unwrap().to_integer()).unwrap()
            })
            .collect()
    }

    #[test]
    fn pentagonal_numbers() {
        assert_eq!(ints(&euler_product(6), 0, 6), vec![1, -1, -1, 0, 0, 1]);
        assert_eq!(euler_product(200), euler_product_pentagonal(200));
    }

    #[test]
    fn eta_leading_exponents() {
        let eta = eta_series(5);
        assert_eq!(eta.valuation(), Some(1));
        assert_eq!(eta.den(), 24);
        let eta6 = eta.rescale(6).reduce_den();
        assert_eq!(eta6.terms().next().unwrap().0, ratio(1, 4));
    }

    #[test]
    fn eta_squared_matches_double_sum() {
        // (Σ_a ε_a q^{p_a})² by brute force over pentagonal exponents
        let pent = euler_product_pentagonal(5);
        let mut brute = [0i64; 5];
        for (i, a) in pent.iter_scaled() {
            for (j, b) in pent.iter_scaled() {
                if i + j < 5 {
                    brute[(i + j) as usize] +=
                        (a * b).as_rational().unwrap().to_integer().try_into().unwrap_or(0i64);
                }
            }
        }
        let sq = eta_series(5).mul(&eta_series(5)).reduce_den();
        for (n, c) in brute.iter().enumerate() {
            assert_eq!(sq.coeff(&(rat(n as i64) + ratio(1, 12))), QuadNum::from_int(*c));
        }
    }

    #[test]
    fn eta_24_is_delta() {
        let d = eta_series(6).pow(24).unwrap().reduce_den();
        assert_eq!(d.den(), 1);
        assert_eq!(ints(&d, 1, 6), vec![1, -24, 252, -1472, 4830]);
        assert_eq!(d.truncate(6), discriminant_series(6));
    }

    #[test]
    fn eisenstein_and_j() {
        let e4 = eisenstein_series(4, 5).unwrap();
        assert_eq!(ints(&e4, 0, 3), vec![1, 240, 2160]);
        let j = j_series(3).unwrap();
        assert_eq!(ints(&j, -1, 3), vec![1, 744, 196884, 21493760]);
        assert!(eisenstein_series(8, 3).is_err());
    }

    #[test]
    fn ramanujan_identity() {
        let p = 40;
        let e4 = eisenstein_series(4, p).unwrap();
        let e6 = eisenstein_series(6, p).unwrap();
        let lhs = e4.pow(3).unwrap().sub(&e6.pow(2).unwrap()).scale_rational(&ratio(1, 1728));
        let rhs = eta_series(p).pow(24).unwrap().reduce_den();
        assert!(lhs.agrees_with(&rhs));
        assert!(rhs.prec() >= p);
    }

    #[test]
    fn theta_values() {
        let th = theta_series(10);
        assert_eq!(ints(&th, 0, 10), vec![1, 2, 0, 0, 2, 0, 0, 0, 0, 2]);
        assert!(th.iter_scaled().all(|(e, _)| matches!(e % 4, 0 | 1)));
        // θ = η(2τ)^5 / (η(τ)² η(4τ)²)
        let q = eta_quotient(&[(2, 5), (1, -2), (4, -2)], 60).unwrap();
        assert_eq!(q, theta_series(60));
    }

    #[test]
    fn level6_expansions() {
        let (j6, d6) = level6_forms(9).unwrap();
        assert_eq!(ints(&j6, -1, 4), vec![1, 0, 79, 352, 1431]);
        assert_eq!(ints(&d6, 1, 9), vec![1, -2, -3, 4, 6, 6, -16, -8]);
    }

    #[test]
    fn f_minus_3() {
        let f = plus_form(-3, 40).unwrap();
        let got: Vec<i64> = [1, 4, 5, 8, 9]
            .iter()
            .map(|&n| i64::try_from(f.coeff(n).to_integer()).unwrap())
            .collect();
        assert_eq!(got, vec![-248, 26752, -85995, 1707264, -4096248]);
    }

    #[test]
    fn plus_basis_support_and_integrality() {
        let basis = plus_space_basis(-100, 130).unwrap();
        assert_eq!(basis.len(), 50);
        for f in &basis {
            assert!(f.series.iter_scaled().all(|(e, c)| {
                matches!(e.rem_euclid(4), 0 | 1) && c.as_rational().unwrap().is_integer()
            }));
        }
        // f_{-4} = q^{-4} + 492 q + …
        let f4 = basis.iter().find(|f| f.d == -4).unwrap();
        assert_eq!(f4.coeff(1), rat(492));
    }

    #[test]
    fn plus_basis_preconditions() {
        assert!(plus_space_basis(-2, 50).is_err());
        assert!(plus_space_basis(-3, 23).is_err());
        assert!(plus_space_basis(-3, 24).is_ok());
    }

    #[test]
    fn mock_theta_coefficients() {
        let m = mock_series(120);
        assert_eq!(m.omega.coeff_int(0), QuadNum::one());
        assert_eq!(ints(&m.omega, 0, 6), vec![1, 2, 3, 4, 6, 8]);
        assert!((0..100).all(|n| m.omega.coeff_int(n).as_rational().unwrap() > &rat(0)));
        assert_eq!(ints(&m.f, 0, 6), vec![1, 1, -2, 3, -3, 3]);
        let a: Vec<Rational> = [1, 4, 7, 10].iter().map(|&k| m.a(k)).collect();
        assert_eq!(a, vec![rat(-4), rat(-12), rat(-24), rat(-40)]);
        assert!(m.a_coeffs.keys().all(|k| k.rem_euclid(3) == 1));
        for (k, v) in &m.a_coeffs {
            let j = (k - 1) / 3;
            assert_eq!(QuadNum::rational(v.clone()), m.omega.coeff_int(2 * j).scale(&rat(-4)));
        }
    }
}
