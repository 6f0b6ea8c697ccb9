//! Truncated Laurent series in `q^{1/den}` with exact coefficients.
//!
//! Exponents and the precision bound are stored as integers scaled by `den`,
//! so `q^{1/24}` is the scaled exponent `1` at `den = 24`. A series with
//! precision `prec` says nothing about exponents `>= prec/den`; no operation
//! stores a term there, and binary operations return the smallest precision
//! the inputs justify.

use super::quad::QuadNum;
use super::rational::{format_rational, rat, ratio, Rational};
use super::AlgebraError;
use num_integer::Integer;
use num_traits::Zero;
use std::borrow::Cow;
use std::collections::BTreeMap;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSeries {
    den: i64,
    coeffs: BTreeMap<i64, QuadNum>,
    prec: i64,
}

/// First exponent at which two series differ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Discrepancy {
    pub exponent: Rational,
    pub left: QuadNum,
    pub right: QuadNum,
}

impl fmt::Display for Discrepancy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} != {}", format_exponent(&self.exponent), self.left, self.right)
    }
}

/// `q^{e}` as printed by the CLI: `q^{3}`, `q^{-1/24}`.
pub fn format_exponent(e: &Rational) -> String {
    format!("q^{{{}}}", format_rational(e))
}

impl QSeries {
    pub fn zero(den: i64, prec: i64) -> Self {
        assert!(den > 0, "series denominator must be positive");
        QSeries { den, coeffs: BTreeMap::new(), prec }
    }

    /// The constant `c + O(q^prec)` with integer exponents.
    pub fn constant(c: QuadNum, prec: i64) -> Self {
        Self::from_terms(1, prec, [(0, c)])
    }

    pub fn one(prec: i64) -> Self {
        Self::constant(QuadNum::one(), prec)
    }

    /// Builds a series from `(scaled exponent, coefficient)` pairs; zero
    /// coefficients and exponents at or beyond `prec` are dropped, repeated
    /// exponents are summed.
    pub fn from_terms<I>(den: i64, prec: i64, terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, QuadNum)>,
    {
        let mut s = Self::zero(den, prec);
        for (e, c) in terms {
            if e < prec {
                s.add_term(e, &c);
            }
        }
        s
    }

    /// Integer-exponent series `Σ c_i q^{start+i}` from a dense list.
    pub fn from_dense<I>(start: i64, prec: i64, coeffs: I) -> Self
    where
        I: IntoIterator<Item = Rational>,
    {
        Self::from_terms(
            1,
            prec,
            coeffs.into_iter().enumerate().map(|(i, c)| (start + i as i64, QuadNum::rational(c))),
        )
    }

    /// `c·q^{exp}` with `exp` and `prec` scaled by `den`.
    pub fn monomial(den: i64, exp: i64, c: QuadNum, prec: i64) -> Self {
        Self::from_terms(den, prec, [(exp, c)])
    }

    fn add_term(&mut self, e: i64, c: &QuadNum) {
        debug_assert!(e < self.prec);
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(e).or_insert_with(QuadNum::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&e);
        }
    }

    pub fn den(&self) -> i64 {
        self.den
    }

    /// Precision bound, scaled by `den`.
    pub fn prec(&self) -> i64 {
        self.prec
    }

    /// Precision bound as an exponent of `q`.
    pub fn prec_exponent(&self) -> Rational {
        ratio(self.prec, self.den)
    }

    /// Lowest scaled exponent with a nonzero coefficient.
    pub fn valuation(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    fn valuation_or_prec(&self) -> i64 {
        self.valuation().unwrap_or(self.prec)
    }

    pub fn leading_coefficient(&self) -> Option<&QuadNum> {
        self.coeffs.values().next()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    /// Coefficient at a scaled exponent.
    pub fn coeff_scaled(&self, e: i64) -> QuadNum {
        self.coeffs.get(&e).cloned().unwrap_or_else(QuadNum::zero)
    }

    /// Coefficient of `q^e`. Panics if `e` is at or beyond the precision, or
    /// not representable with this series' denominator (then it is zero only
    /// if it lies below the precision, which is what we return).
    pub fn coeff(&self, e: &Rational) -> QuadNum {
        assert!(*e < self.prec_exponent(), "coefficient requested beyond precision");
        let scaled = e * rat(self.den);
        if !scaled.is_integer() {
            return QuadNum::zero();
        }
        let scaled: i64 = num_traits::ToPrimitive::to_i64(&scaled.to_integer()).expect("exponent overflow");
        self.coeff_scaled(scaled)
    }

    /// Coefficient of `q^n` for an integer `n`.
    pub fn coeff_int(&self, n: i64) -> QuadNum {
        self.coeff(&rat(n))
    }

    /// `(scaled exponent, coefficient)` pairs in increasing order.
    pub fn iter_scaled(&self) -> impl Iterator<Item = (i64, &QuadNum)> {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    /// `(exponent, coefficient)` pairs in increasing order.
    pub fn terms(&self) -> impl Iterator<Item = (Rational, &QuadNum)> + '_ {
        self.coeffs.iter().map(move |(e, c)| (ratio(*e, self.den), c))
    }

    /// Squarefree `D` of the first irrational coefficient, or `1`.
    pub fn field(&self) -> i64 {
        self.coeffs.values().find(|c| !c.is_rational()).map_or(1, QuadNum::radicand)
    }

    /// Re-expresses the series with denominator `den`, a multiple of the
    /// current one.
    pub fn with_den(&self, den: i64) -> Self {
        assert!(den % self.den == 0, "denominator {den} is not a multiple of {}", self.den);
        let k = den / self.den;
        if k == 1 {
            return self.clone();
        }
        QSeries {
            den,
            coeffs: self.coeffs.iter().map(|(e, c)| (e * k, c.clone())).collect(),
            prec: self.prec * k,
        }
    }

    /// Smallest denominator that still represents every stored exponent.
    /// The precision is rounded down when it does not divide evenly.
    pub fn reduce_den(&self) -> Self {
        let mut g = self.den;
        for e in self.coeffs.keys() {
            g = super::kronecker::gcd(g, *e);
        }
        if g == 1 {
            return self.clone();
        }
        QSeries {
            den: self.den / g,
            coeffs: self.coeffs.iter().map(|(e, c)| (e / g, c.clone())).collect(),
            prec: self.prec.div_euclid(g),
        }
    }

    /// Drops everything at or beyond the scaled precision `prec`.
    pub fn truncate(&self, prec: i64) -> Self {
        let prec = prec.min(self.prec);
        QSeries {
            den: self.den,
            coeffs: self.coeffs.range(..prec).map(|(e, c)| (*e, c.clone())).collect(),
            prec,
        }
    }

    /// Truncates to `O(q^n)` for an integer `n`.
    pub fn truncate_q(&self, n: i64) -> Self {
        self.truncate(n * self.den)
    }

    fn aligned<'a>(a: &'a QSeries, b: &'a QSeries) -> (Cow<'a, QSeries>, Cow<'a, QSeries>) {
        if a.den == b.den {
            return (Cow::Borrowed(a), Cow::Borrowed(b));
        }
        let den = a.den.lcm(&b.den);
        (Cow::Owned(a.with_den(den)), Cow::Owned(b.with_den(den)))
    }

    pub fn add(&self, other: &QSeries) -> QSeries {
        let (f, g) = Self::aligned(self, other);
        let prec = f.prec.min(g.prec);
        let mut out = f.truncate(prec);
        for (e, c) in g.coeffs.range(..prec) {
            out.add_term(*e, c);
        }
        out
    }

    pub fn neg(&self) -> QSeries {
        QSeries {
            den: self.den,
            coeffs: self.coeffs.iter().map(|(e, c)| (*e, -c)).collect(),
            prec: self.prec,
        }
    }

    pub fn sub(&self, other: &QSeries) -> QSeries {
        self.add(&other.neg())
    }

    /// Multiplies every coefficient by `c`.
    pub fn scale(&self, c: &QuadNum) -> QSeries {
        let mut out = QSeries::zero(self.den, self.prec);
        for (e, x) in &self.coeffs {
            out.add_term(*e, &(x * c));
        }
        out
    }

    pub fn scale_rational(&self, c: &Rational) -> QSeries {
        self.scale(&QuadNum::rational(c.clone()))
    }

    /// Adds a constant `c·q^0`.
    pub fn add_constant(&self, c: &QuadNum) -> QSeries {
        let mut out = self.clone();
        if 0 < out.prec {
            out.add_term(0, c);
        }
        out
    }

    /// Cauchy product. If `f = O(q^{P_f})` and `g = O(q^{P_g})` with lowest
    /// exponents `v_f`, `v_g`, the product is known below
    /// `min(P_f + v_g, P_g + v_f)`.
    pub fn mul(&self, other: &QSeries) -> QSeries {
        let (f, g) = Self::aligned(self, other);
        let (vf, vg) = (f.valuation_or_prec(), g.valuation_or_prec());
        let prec = (f.prec + vg).min(g.prec + vf);
        let base = vf + vg;
        if prec <= base {
            return QSeries::zero(f.den, prec);
        }
        let mut acc = vec![QuadNum::zero(); (prec - base) as usize];
        for (i, a) in f.coeffs.iter() {
            if i + vg >= prec {
                break;
            }
            for (j, b) in g.coeffs.iter() {
                let e = i + j;
                if e >= prec {
                    break;
                }
                acc[(e - base) as usize] += &(a * b);
            }
        }
        QSeries::from_terms(f.den, prec, acc.into_iter().enumerate().map(|(k, c)| (base + k as i64, c)))
    }

    /// Multiplicative inverse. The leading exponent is negated and the
    /// relative precision is preserved.
    pub fn inv(&self) -> Result<QSeries, AlgebraError> {
        let v = self.valuation().ok_or(AlgebraError::ZeroLeadingCoefficient)?;
        let lead = self.coeffs[&v].clone();
        let lead_inv = lead.inv()?;
        let rel = self.prec - v;
        // h = f / (lead q^v) = 1 + Σ_{e>0} h_e q^e
        let tail: Vec<(i64, QuadNum)> =
            self.coeffs.iter().skip(1).map(|(e, c)| (e - v, c * &lead_inv)).collect();
        let mut w = vec![QuadNum::zero(); rel as usize];
        w[0] = QuadNum::one();
        for n in 1..rel {
            let mut acc = QuadNum::zero();
            for (e, h) in &tail {
                if *e > n {
                    break;
                }
                let prev = &w[(n - e) as usize];
                if !prev.is_zero() {
                    acc += &(h * prev);
                }
            }
            w[n as usize] = -acc;
        }
        Ok(QSeries::from_terms(
            self.den,
            rel - v,
            w.into_iter().enumerate().map(|(k, c)| (k as i64 - v, c * &lead_inv)),
        ))
    }

    pub fn div(&self, other: &QSeries) -> Result<QSeries, AlgebraError> {
        Ok(self.mul(&other.inv()?))
    }

    /// Integer power; negative exponents go through [`QSeries::inv`].
    pub fn pow(&self, k: i64) -> Result<QSeries, AlgebraError> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc: Option<QSeries> = None;
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => sq.clone(),
                    Some(a) => a.mul(&sq),
                });
            }
            e >>= 1;
            if e > 0 {
                sq = sq.mul(&sq);
            }
        }
        Ok(acc.unwrap_or_else(|| {
            // f^0 = 1 with the relative precision of f.
            let rel = self.prec - self.valuation_or_prec();
            QSeries::monomial(self.den, 0, QuadNum::one(), rel)
        }))
    }

    /// `exp(f)` for `f` with strictly positive lowest exponent.
    pub fn exp(&self) -> Result<QSeries, AlgebraError> {
        if let Some(v) = self.valuation() {
            if v <= 0 {
                return Err(AlgebraError::Precondition(
                    "exp needs a series with positive leading exponent".into(),
                ));
            }
        }
        let p = self.prec.max(0);
        // n g_n = Σ_e e f_e g_{n-e}
        let terms: Vec<(i64, QuadNum)> = self.coeffs.iter().map(|(e, c)| (*e, c.clone())).collect();
        let mut g = vec![QuadNum::zero(); p as usize];
        if p > 0 {
            g[0] = QuadNum::one();
        }
        for n in 1..p {
            let mut acc = QuadNum::zero();
            for (e, c) in &terms {
                if *e > n {
                    break;
                }
                let prev = &g[(n - e) as usize];
                if !prev.is_zero() {
                    acc += &(c * prev).scale(&rat(*e));
                }
            }
            g[n as usize] = acc.scale(&ratio(1, n));
        }
        Ok(QSeries::from_terms(self.den, p, g.into_iter().enumerate().map(|(k, c)| (k as i64, c))))
    }

    /// `log(f)` for `f = 1 + (terms with positive exponent)`.
    pub fn log(&self) -> Result<QSeries, AlgebraError> {
        let ok = self.prec > 0
            && self.valuation() == Some(0)
            && self.coeffs[&0] == QuadNum::one();
        if !ok {
            return Err(AlgebraError::Precondition(
                "log needs a series of the form 1 + O(q^{>0})".into(),
            ));
        }
        let p = self.prec;
        let f: Vec<(i64, QuadNum)> = self.coeffs.iter().skip(1).map(|(e, c)| (*e, c.clone())).collect();
        // n g_n = n f_n − Σ_{1 ≤ e < n} (n − e) g_{n−e} f_e
        let mut g = vec![QuadNum::zero(); p as usize];
        for n in 1..p {
            let mut acc = self.coeff_scaled(n).scale(&rat(n));
            for (e, c) in &f {
                if *e >= n {
                    break;
                }
                let prev = &g[(n - e) as usize];
                if !prev.is_zero() {
                    acc += &(-(prev * c).scale(&rat(n - e)));
                }
            }
            g[n as usize] = acc.scale(&ratio(1, n));
        }
        Ok(QSeries::from_terms(self.den, p, g.into_iter().enumerate().map(|(k, c)| (k as i64, c))))
    }

    /// Substitutes `q → q^m`.
    pub fn rescale(&self, m: i64) -> QSeries {
        assert!(m > 0, "rescale factor must be positive");
        QSeries {
            den: self.den,
            coeffs: self.coeffs.iter().map(|(e, c)| (e * m, c.clone())).collect(),
            prec: self.prec * m,
        }
    }

    /// Substitutes `q → q^{1/k}`.
    pub fn substitute_root(&self, k: i64) -> QSeries {
        assert!(k > 0, "root index must be positive");
        QSeries { den: self.den * k, coeffs: self.coeffs.clone(), prec: self.prec }
    }

    /// Substitutes `q → −q`; only defined for integer exponents.
    pub fn alternate(&self) -> QSeries {
        assert_eq!(self.den, 1, "q -> -q needs integer exponents");
        QSeries {
            den: 1,
            coeffs: self
                .coeffs
                .iter()
                .map(|(e, c)| (*e, if e.rem_euclid(2) == 1 { -c } else { c.clone() }))
                .collect(),
            prec: self.prec,
        }
    }

    /// Multiplies by `q^{e/den}` (scaled shift).
    pub fn shift(&self, e: i64) -> QSeries {
        QSeries {
            den: self.den,
            coeffs: self.coeffs.iter().map(|(k, c)| (k + e, c.clone())).collect(),
            prec: self.prec + e,
        }
    }

    /// Multiplies by `q^e` for a rational exponent `e`.
    pub fn shift_by(&self, e: &Rational) -> QSeries {
        let den = self.den.lcm(&i64::try_from(e.denom()).expect("exponent denominator overflow"));
        let s = self.with_den(den);
        let scaled = e * rat(den);
        s.shift(i64::try_from(scaled.to_integer()).expect("exponent overflow"))
    }

    /// `q·d/dq`.
    pub fn theta(&self) -> QSeries {
        let mut out = QSeries::zero(self.den, self.prec);
        for (e, c) in &self.coeffs {
            out.add_term(*e, &c.scale(&ratio(*e, self.den)));
        }
        out
    }

    /// Conjugates every coefficient (`√D → −√D`).
    pub fn conj(&self) -> QSeries {
        QSeries {
            den: self.den,
            coeffs: self.coeffs.iter().map(|(e, c)| (*e, c.conj())).collect(),
            prec: self.prec,
        }
    }

    /// Compares coefficients below the smaller of the two precisions and
    /// reports the first mismatch.
    pub fn first_discrepancy(&self, other: &QSeries) -> Option<Discrepancy> {
        let (f, g) = Self::aligned(self, other);
        let prec = f.prec.min(g.prec);
        let exps: std::collections::BTreeSet<i64> =
            f.coeffs.range(..prec).chain(g.coeffs.range(..prec)).map(|(e, _)| *e).collect();
        exps.into_iter().find_map(|e| {
            let (l, r) = (f.coeff_scaled(e), g.coeff_scaled(e));
            (l != r).then(|| Discrepancy { exponent: ratio(e, f.den), left: l, right: r })
        })
    }

    /// Equality of all coefficients below the common precision.
    pub fn agrees_with(&self, other: &QSeries) -> bool {
        self.first_discrepancy(other).is_none()
    }

    /// Whether every coefficient is rational.
    pub fn is_rational(&self) -> bool {
        self.coeffs.values().all(QuadNum::is_rational)
    }

    /// One line per nonzero term, `q^{p/q}: a [+ b*sqrt(D)]`, then the
    /// error term.
    pub fn to_lines(&self) -> Vec<String> {
        let mut lines: Vec<String> =
            self.terms().map(|(e, c)| format!("{}: {}", format_exponent(&e), c)).collect();
        lines.push(format!("O({})", format_exponent(&self.prec_exponent())));
        lines
    }

    pub fn sum<'a, I: IntoIterator<Item = &'a QSeries>>(den: i64, prec: i64, items: I) -> QSeries {
        items.into_iter().fold(QSeries::zero(den, prec), |acc, s| acc.add(s))
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({}){}", c, if e.is_zero() { String::new() } else { format!("*{}", format_exponent(&e)) })?;
        }
        if !first {
            write!(f, " + ")?;
        }
        write!(f, "O({})", format_exponent(&self.prec_exponent()))
    }
}
