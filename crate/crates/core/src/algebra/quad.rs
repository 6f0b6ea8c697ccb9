//! Elements `a + b√D` of a quadratic field with exact rational parts.

use super::kronecker::squarefree_decomposition;
use super::rational::{format_rational, rat, Rational};
use super::AlgebraError;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

/// `a + b·√D` with `D` squarefree and `√D = i√|D|` for `D < 0`.
///
/// A value with `b = 0` is rational and may be combined with an element of
/// any field. Two irrational values must share `D`; the crate never needs a
/// compositum.
#[derive(Clone, Debug)]
pub struct QuadNum {
    radicand: i64,
    a: Rational,
    b: Rational,
}

/// Operation selector for [`quad_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuadOp {
    Add,
    Sub,
    Mul,
    Div,
    Conj,
    Norm,
}

/// Applies `op` to `x` (and `y` for the binary operations).
pub fn quad_arith(x: &QuadNum, y: &QuadNum, op: QuadOp) -> Result<QuadNum, AlgebraError> {
    match op {
        QuadOp::Add => x.checked_add(y),
        QuadOp::Sub => x.checked_sub(y),
        QuadOp::Mul => x.checked_mul(y),
        QuadOp::Div => x.checked_div(y),
        QuadOp::Conj => Ok(x.conj()),
        QuadOp::Norm => Ok(QuadNum::rational(x.norm())),
    }
}

impl QuadNum {
    pub fn zero() -> Self {
        Self::rational(Rational::zero())
    }

    pub fn one() -> Self {
        Self::rational(Rational::one())
    }

    pub fn rational(a: Rational) -> Self {
        QuadNum { radicand: 1, a, b: Rational::zero() }
    }

    pub fn from_int(n: i64) -> Self {
        Self::rational(rat(n))
    }

    /// `a + b√d` for an arbitrary nonzero integer `d`; square factors of `d`
    /// are moved into `b`.
    pub fn new(a: Rational, b: Rational, d: i64) -> Self {
        let (f, s) = squarefree_decomposition(d);
        if s == 1 {
            return Self::rational(a + b * rat(f));
        }
        let b = b * rat(f);
        QuadNum { radicand: s, a, b }
    }

    /// The element `√d` (`i√|d|` when `d < 0`).
    pub fn sqrt_of(d: i64) -> Self {
        Self::new(Rational::zero(), Rational::one(), d)
    }

    /// Squarefree `D` of the ambient field; `1` for a plain rational.
    pub fn radicand(&self) -> i64 {
        self.radicand
    }

    pub fn rational_part(&self) -> &Rational {
        &self.a
    }

    pub fn irrational_part(&self) -> &Rational {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// The rational value if `b = 0`.
    pub fn as_rational(&self) -> Option<&Rational> {
        self.is_rational().then_some(&self.a)
    }

    /// Tags a rational value with a field so that printing and later mixing
    /// stay in that field. Irrational values keep their own tag.
    pub fn in_field(mut self, d: i64) -> Self {
        if self.b.is_zero() {
            let (_, s) = squarefree_decomposition(d);
            self.radicand = s;
        }
        self
    }

    fn field_with(&self, other: &QuadNum) -> Result<i64, AlgebraError> {
        match (self.b.is_zero(), other.b.is_zero()) {
            (false, false) if self.radicand != other.radicand => Err(AlgebraError::IncompatibleField {
                left: self.radicand,
                right: other.radicand,
            }),
            (false, _) => Ok(self.radicand),
            (true, false) => Ok(other.radicand),
            (true, true) => Ok(if self.radicand != 1 { self.radicand } else { other.radicand }),
        }
    }

    pub fn checked_add(&self, other: &QuadNum) -> Result<QuadNum, AlgebraError> {
        let radicand = self.field_with(other)?;
        Ok(QuadNum { radicand, a: &self.a + &other.a, b: &self.b + &other.b })
    }

    pub fn checked_sub(&self, other: &QuadNum) -> Result<QuadNum, AlgebraError> {
        let radicand = self.field_with(other)?;
        Ok(QuadNum { radicand, a: &self.a - &other.a, b: &self.b - &other.b })
    }

    pub fn checked_mul(&self, other: &QuadNum) -> Result<QuadNum, AlgebraError> {
        let radicand = self.field_with(other)?;
        let (a, b) = match (self.b.is_zero(), other.b.is_zero()) {
            (true, true) => (&self.a * &other.a, Rational::zero()),
            (true, false) => (&self.a * &other.a, &self.a * &other.b),
            (false, true) => (&self.a * &other.a, &self.b * &other.a),
            (false, false) => (
                &self.a * &other.a + &self.b * &other.b * rat(radicand),
                &self.a * &other.b + &self.b * &other.a,
            ),
        };
        Ok(QuadNum { radicand, a, b })
    }

    pub fn checked_div(&self, other: &QuadNum) -> Result<QuadNum, AlgebraError> {
        self.field_with(other)?;
        let inv = other.inv()?;
        self.checked_mul(&inv)
    }

    pub fn inv(&self) -> Result<QuadNum, AlgebraError> {
        let n = self.norm();
        if n.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        let c = self.conj();
        Ok(QuadNum { radicand: self.radicand, a: c.a / &n, b: c.b / &n })
    }

    /// `a − b√D`.
    pub fn conj(&self) -> QuadNum {
        QuadNum { radicand: self.radicand, a: self.a.clone(), b: -&self.b }
    }

    /// `a² − D·b²`.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - &self.b * &self.b * rat(self.radicand)
    }

    pub fn trace(&self) -> Rational {
        &self.a + &self.a
    }

    pub fn scale(&self, c: &Rational) -> QuadNum {
        QuadNum { radicand: self.radicand, a: &self.a * c, b: &self.b * c }
    }

    pub fn pow(&self, e: u32) -> QuadNum {
        let mut acc = QuadNum::one().in_field(self.radicand);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Complex value with `√D = i√|D|` for negative `D`.
    pub fn to_complex(&self) -> num_complex::Complex64 {
        use super::rational::to_f64;
        let a = to_f64(&self.a);
        let b = to_f64(&self.b);
        let r = (self.radicand.abs() as f64).sqrt();
        if self.radicand < 0 {
            num_complex::Complex64::new(a, b * r)
        } else {
            num_complex::Complex64::new(a + b * r, 0.0)
        }
    }
}

impl PartialEq for QuadNum {
    fn eq(&self, other: &Self) -> bool {
        self.a == other.a
            && self.b == other.b
            && (self.b.is_zero() || self.radicand == other.radicand)
    }
}

impl Eq for QuadNum {}

impl From<Rational> for QuadNum {
    fn from(a: Rational) -> Self {
        QuadNum::rational(a)
    }
}

impl From<i64> for QuadNum {
    fn from(n: i64) -> Self {
        QuadNum::from_int(n)
    }
}

impl fmt::Display for QuadNum {
    /// `a`, or `a + b*sqrt(D)` / `a - |b|*sqrt(D)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_rational(&self.a))?;
        if !self.b.is_zero() {
            let sign = if self.b.is_negative() { '-' } else { '+' };
            write!(f, " {} {}*sqrt({})", sign, format_rational(&self.b.abs()), self.radicand)?;
        }
        Ok(())
    }
}

// Operator impls panic on incompatible fields; use the `checked_*` methods
// where mixed input is possible.
macro_rules! binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&QuadNum> for &QuadNum {
            type Output = QuadNum;
            fn $method(self, rhs: &QuadNum) -> QuadNum {
                self.$checked(rhs).expect("quadratic field mismatch")
            }
        }
        impl $trait<QuadNum> for QuadNum {
            type Output = QuadNum;
            fn $method(self, rhs: QuadNum) -> QuadNum {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&QuadNum> for QuadNum {
            type Output = QuadNum;
            fn $method(self, rhs: &QuadNum) -> QuadNum {
                (&self).$method(rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl AddAssign<&QuadNum> for QuadNum {
    fn add_assign(&mut self, rhs: &QuadNum) {
        self.radicand = self.field_with(rhs).expect("quadratic field mismatch");
        self.a += &rhs.a;
        if !rhs.b.is_zero() {
            self.b += &rhs.b;
        }
    }
}

impl Neg for QuadNum {
    type Output = QuadNum;
    fn neg(self) -> QuadNum {
        QuadNum { radicand: self.radicand, a: -self.a, b: -self.b }
    }
}

impl Neg for &QuadNum {
    type Output = QuadNum;
    fn neg(self) -> QuadNum {
        -self.clone()
    }
}
