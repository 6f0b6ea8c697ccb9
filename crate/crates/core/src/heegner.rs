//! Binary quadratic forms, Γ₀(N)-classes of Heegner forms, CM points and the
//! generalized genus character.
//!
//! Forms are `[a, b, c] = aX² + bXY + cY²`. Heegner forms of level `N` have
//! `N | a`. Matrices act on the right, `(Q∘γ)(x, y) = Q(αx + βy, γx + δy)`,
//! which preserves `N | a` and `b mod 2N` for `γ ∈ Γ₀(N)`.

use crate::algebra::kronecker::{divisors, gcd, is_discriminant, is_fundamental_discriminant, is_square_mod};
use crate::algebra::{kronecker, rat, ratio, QuadNum, Rational};
use crate::error::{precondition, Error, Result};
use num_traits::Zero;
use std::fmt;

pub type Matrix = [[i64; 2]; 2];

pub const IDENTITY: Matrix = [[1, 0], [0, 1]];

pub fn mat_mul(x: &Matrix, y: &Matrix) -> Matrix {
    [
        [x[0][0] * y[0][0] + x[0][1] * y[1][0], x[0][0] * y[0][1] + x[0][1] * y[1][1]],
        [x[1][0] * y[0][0] + x[1][1] * y[1][0], x[1][0] * y[0][1] + x[1][1] * y[1][1]],
    ]
}

/// Inverse of a determinant-one matrix.
pub fn mat_inv(m: &Matrix) -> Matrix {
    [[m[1][1], -m[0][1]], [-m[1][0], m[0][0]]]
}

pub fn det(m: &Matrix) -> i64 {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

pub fn in_gamma0(m: &Matrix, n: i64) -> bool {
    det(m) == 1 && m[1][0] % n == 0
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bqf {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl Bqf {
    pub const fn new(a: i64, b: i64, c: i64) -> Self {
        Bqf { a, b, c }
    }

    pub fn disc(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn eval(&self, x: i64, y: i64) -> i64 {
        self.a * x * x + self.b * x * y + self.c * y * y
    }

    pub fn neg(&self) -> Bqf {
        Bqf::new(-self.a, -self.b, -self.c)
    }

    /// `Q∘m`.
    pub fn act(&self, m: &Matrix) -> Bqf {
        let [[p, q], [r, s]] = *m;
        Bqf {
            a: self.eval(p, r),
            b: 2 * self.a * p * q + self.b * (p * s + q * r) + 2 * self.c * r * s,
            c: self.eval(q, s),
        }
    }

    /// Ordering key `(|a|, a, b, c)` used to pick canonical representatives.
    pub fn sort_key(&self) -> (i64, i64, i64, i64) {
        (self.a.abs(), self.a, self.b, self.c)
    }
}

impl fmt::Display for Bqf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{},{}]", self.a, self.b, self.c)
    }
}

/// `Q∘matrix = sign·form` with `form` reduced and positive definite.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Reduction {
    pub form: Bqf,
    pub matrix: Matrix,
    pub sign: i64,
}

fn is_reduced(q: &Bqf) -> bool {
    q.b.abs() <= q.a && q.a <= q.c && (q.b >= 0 || (q.b.abs() != q.a && q.a != q.c))
}

/// Classical reduction of a definite form, recording the transformation.
pub fn reduce_form(q: &Bqf) -> Result<Reduction> {
    let d = q.disc();
    if d >= 0 {
        return precondition(format!("form {q} is not definite (discriminant {d})"));
    }
    let sign = if q.a > 0 { 1 } else { -1 };
    let mut f = if sign > 0 { *q } else { q.neg() };
    let mut m = IDENTITY;
    loop {
        // bring b into (−a, a]
        let k = (f.a - f.b).div_euclid(2 * f.a);
        if k != 0 {
            let t = [[1, k], [0, 1]];
            f = f.act(&t);
            m = mat_mul(&m, &t);
        }
        if f.a > f.c || (f.a == f.c && f.b < 0) {
            let s = [[0, -1], [1, 0]];
            f = f.act(&s);
            m = mat_mul(&m, &s);
            continue;
        }
        break;
    }
    debug_assert!(is_reduced(&f));
    Ok(Reduction { form: f, matrix: m, sign })
}

/// All `U ∈ SL₂(ℤ)` with `R∘U = R` for a reduced positive definite `R`. The
/// entries of such automorphs are bounded by one.
pub fn automorphs(r: &Bqf) -> Vec<Matrix> {
    let mut out = Vec::new();
    for p in -1..=1 {
        for q in -1..=1 {
            for s in -1..=1 {
                for t in -1..=1 {
                    let u = [[p, q], [s, t]];
                    if det(&u) == 1 && r.act(&u) == *r {
                        out.push(u);
                    }
                }
            }
        }
    }
    out
}

/// A `γ ∈ Γ₀(N)` with `q1∘γ = q2`, if one exists.
pub fn gamma0_equivalence(q1: &Bqf, q2: &Bqf, n: i64) -> Result<Option<Matrix>> {
    let r1 = reduce_form(q1)?;
    let r2 = reduce_form(q2)?;
    if r1.form != r2.form || r1.sign != r2.sign {
        return Ok(None);
    }
    let m2inv = mat_inv(&r2.matrix);
    for u in automorphs(&r1.form) {
        let g = mat_mul(&mat_mul(&r1.matrix, &u), &m2inv);
        if in_gamma0(&g, n) {
            debug_assert_eq!(q1.act(&g), *q2);
            return Ok(Some(g));
        }
    }
    Ok(None)
}

pub fn gamma0_equivalent(q1: &Bqf, q2: &Bqf, n: i64) -> Result<bool> {
    Ok(gamma0_equivalence(q1, q2, n)?.is_some())
}

/// Order of the stabilizer of `Q` in Γ₀(N) (including `−1`).
pub fn stab_order(q: &Bqf, n: i64) -> Result<usize> {
    let red = reduce_form(q)?;
    let minv = mat_inv(&red.matrix);
    Ok(automorphs(&red.form)
        .iter()
        .filter(|u| in_gamma0(&mat_mul(&mat_mul(&red.matrix, u), &minv), n))
        .count())
}

/// The root of `Q(X, 1)` in the upper half plane, `−b/2a + (sgn(a)/2a)·√D`
/// with `√D = i√|D|`.
pub fn heegner_point(q: &Bqf) -> Result<QuadNum> {
    if q.a == 0 {
        return precondition("heegner_point needs a ≠ 0");
    }
    let d = q.disc();
    if d >= 0 {
        return precondition(format!("form {q} is not definite"));
    }
    let two_a = 2 * q.a;
    Ok(QuadNum::new(ratio(-q.b, two_a), ratio(q.a.signum(), two_a), d))
}

/// Reduced positive definite forms of discriminant `d < 0`, primitive or not.
pub fn reduced_forms(d: i64) -> Vec<Bqf> {
    let mut out = Vec::new();
    let mut a = 1;
    while 3 * a * a <= -d {
        for b in -a + 1..=a {
            let num = b * b - d;
            if num % (4 * a) != 0 {
                continue;
            }
            let f = Bqf::new(a, b, num / (4 * a));
            if is_reduced(&f) {
                out.push(f);
            }
        }
        a += 1;
    }
    out
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

/// Representatives of `SL₂(ℤ)/Γ₀(N)`, indexed by the first column mod `N`.
pub fn gamma0_coset_reps(n: i64) -> Vec<Matrix> {
    let mut reps = Vec::new();
    for x in 0..n {
        for y in 0..n {
            if gcd(gcd(x, y), n) != 1 {
                continue;
            }
            // lift (x, y) mod N to a coprime integer pair
            let mut lifted = None;
            'search: for k in 0..=n + 1 {
                for l in 0..=n + 1 {
                    let (p, r) = (x + k * n, y + l * n);
                    if gcd(p, r) == 1 {
                        lifted = Some((p, r));
                        break 'search;
                    }
                }
            }
            let (p, r) = lifted.expect("coprime lift exists");
            let (_, u, v) = ext_gcd(p, r);
            // p·u + r·v = ±1 (sign follows the gcd); build det 1
            let g = p * u + r * v;
            let m = [[p, -v * g], [r, u * g]];
            debug_assert_eq!(det(&m), 1);
            reps.push(m);
        }
    }
    reps
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeegnerClass {
    pub rep: Bqf,
    pub point: QuadNum,
    pub w: usize,
}

/// Γ₀(N)-classes of forms `[a, b, c]` with discriminant `d`, `N | a` and
/// `b ≡ r (mod 2N)`, both definite signs included. Each class is represented
/// by its smallest member under `(|a|, a, b, c)` among forms with
/// `−|a| ≤ b < |a|`, and the list is sorted by that key.
pub fn classes(n: i64, d: i64, r: i64) -> Result<Vec<HeegnerClass>> {
    if n < 1 {
        return precondition(format!("level must be positive, got {n}"));
    }
    if d >= 0 {
        return precondition(format!("discriminant {d} must be negative"));
    }
    if (d - r * r).rem_euclid(4 * n) != 0 {
        return Err(Error::Congruence(format!("{d} ≢ {r}² (mod {})", 4 * n)));
    }
    let r2 = r.rem_euclid(2 * n);
    let cosets = gamma0_coset_reps(n);
    // one member of each orbit, found by moving reduced forms through cosets
    let mut orbits: Vec<Bqf> = Vec::new();
    for base in reduced_forms(d) {
        for sign in [1, -1] {
            let f = if sign > 0 { base } else { base.neg() };
            for g in &cosets {
                let q = f.act(g);
                if q.a % n != 0 || (q.b - r2).rem_euclid(2 * n) != 0 {
                    continue;
                }
                let mut new = true;
                for o in &orbits {
                    if gamma0_equivalent(o, &q, n)? {
                        new = false;
                        break;
                    }
                }
                if new {
                    orbits.push(q);
                }
            }
        }
    }
    // canonical representatives by scanning |a| = N, 2N, ...
    let mut canon: Vec<Option<Bqf>> = vec![None; orbits.len()];
    let mut abs_a = n;
    while canon.iter().any(Option::is_none) {
        for a in [-abs_a, abs_a] {
            let mut b = -abs_a + (r2 - (-abs_a)).rem_euclid(2 * n);
            while b < abs_a {
                let num = b * b - d;
                if num % (4 * a) == 0 {
                    let q = Bqf::new(a, b, num / (4 * a));
                    for (i, o) in orbits.iter().enumerate() {
                        if canon[i].is_none() && gamma0_equivalent(o, &q, n)? {
                            canon[i] = Some(q);
                            break;
                        }
                    }
                }
                b += 2 * n;
            }
        }
        abs_a += n;
    }
    let mut reps: Vec<Bqf> = canon.into_iter().map(|c| c.expect("assigned")).collect();
    reps.sort_by_key(Bqf::sort_key);
    reps.into_iter()
        .map(|q| Ok(HeegnerClass { rep: q, point: heegner_point(&q)?, w: stab_order(&q, n)? }))
        .collect()
}

fn discriminant_factorizations(delta: i64) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    for d in divisors(delta) {
        for d1 in [d, -d] {
            if delta % d1 != 0 {
                continue;
            }
            let d2 = delta / d1;
            if is_discriminant(d1) && is_discriminant(d2) {
                out.push((d1, d2));
            }
        }
    }
    out
}

/// The shared degenerate cases: returns `(a', c)` with `Q = [N a', b, c]`
/// when the character can be nonzero.
fn genus_char_setup(delta: i64, q: &Bqf, n: i64) -> Result<Option<(i64, i64)>> {
    if n < 1 {
        return precondition(format!("level must be positive, got {n}"));
    }
    if q.a % n != 0 {
        return precondition(format!("form {q} does not have {n} | a"));
    }
    let a1 = q.a / n;
    let disc = q.disc();
    if disc % delta != 0
        || !is_square_mod(disc / delta, 4 * n)
        || gcd(gcd(gcd(a1, q.b), q.c), delta) != 1
    {
        return Ok(None);
    }
    Ok(Some((a1, q.c)))
}

/// `χ_Δ([N a', b, c])` by the product formula: for a factorization
/// `Δ = Δ₁Δ₂` into discriminants and `N = N₁N₂` with
/// `gcd(Δ₁, N₁a') = gcd(Δ₂, N₂c) = 1`, the value is `(Δ₁/N₁a')(Δ₂/N₂c)`.
pub fn genus_char(delta: i64, q: &Bqf, n: i64) -> Result<i32> {
    let Some((a1, c)) = genus_char_setup(delta, q, n)? else {
        return Ok(0);
    };
    for (d1, d2) in discriminant_factorizations(delta) {
        for n1 in divisors(n) {
            let n2 = n / n1;
            if gcd(d1, n1 * a1) == 1 && gcd(d2, n2 * c) == 1 {
                return Ok(kronecker(d1, n1 * a1) * kronecker(d2, n2 * c));
            }
        }
    }
    Ok(0)
}

/// `χ_Δ` from the definition: `(Δ/m)` for any `m` coprime to `Δ` represented
/// by one of the forms `[N₁a', b, N₂c]`.
pub fn genus_char_oracle(delta: i64, q: &Bqf, n: i64) -> Result<i32> {
    let Some((a1, c)) = genus_char_setup(delta, q, n)? else {
        return Ok(0);
    };
    for n1 in divisors(n) {
        let f = Bqf::new(n1 * a1, q.b, (n / n1) * c);
        for x in -50i64..=50 {
            for y in -50i64..=50 {
                let m = f.eval(x, y);
                if m != 0 && gcd(m, delta) == 1 {
                    return Ok(kronecker(delta, m));
                }
            }
        }
    }
    Err(Error::SearchExhausted(format!("no value of {q} prime to {delta} with |x|, |y| ≤ 50")))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeegnerDivisor {
    pub delta: i64,
    pub r: i64,
    pub level: i64,
    pub m: Rational,
    pub h: i64,
    /// Classes with weight `χ_Δ/w`.
    pub entries: Vec<(HeegnerClass, Rational)>,
}

impl HeegnerDivisor {
    /// Sum of the weights.
    pub fn degree(&self) -> Rational {
        self.entries.iter().map(|(_, w)| w.clone()).sum()
    }

    /// Weights multiplied by two, so that classes with `w = 2` count `±1`.
    pub fn normalized_w2(&self) -> Vec<(HeegnerClass, Rational)> {
        self.entries.iter().map(|(c, w)| (c.clone(), w * rat(2))).collect()
    }
}

/// `Z_{Δ,r}(m, h)`: the classes of discriminant `dΔ`, `d = 4Nm·sgn(Δ)`, with
/// `b ≡ rh (mod 2N)`, weighted by `χ_Δ/w`. Classes with `χ_Δ = 0` are dropped.
pub fn twisted_divisor(delta: i64, r: i64, n: i64, m: &Rational, h: i64) -> Result<HeegnerDivisor> {
    if !is_fundamental_discriminant(delta) {
        return precondition(format!("{delta} is not a fundamental discriminant"));
    }
    if (delta - r * r).rem_euclid(4 * n) != 0 {
        return Err(Error::Congruence(format!("{delta} ≢ {r}² (mod {})", 4 * n)));
    }
    let scaled = m * rat(4 * n * delta.signum());
    if !scaled.is_integer() {
        return precondition(format!("4Nm·sgn(Δ) is not an integer for m = {m}"));
    }
    let d: i64 = i64::try_from(scaled.to_integer()).map_err(|_| Error::Precondition("m too large".into()))?;
    if (d - h * h).rem_euclid(4 * n) != 0 {
        return Err(Error::Congruence(format!("m = {m} is not in ℤ + sgn(Δ)·{h}²/{}", 4 * n)));
    }
    let disc = d * delta;
    if disc >= 0 {
        return precondition(format!("dΔ = {disc} must be negative"));
    }
    let mut entries = Vec::new();
    for class in classes(n, disc, r * h)? {
        let chi = genus_char(delta, &class.rep, n)?;
        if chi != 0 {
            let w = ratio(i64::from(chi), class.w as i64);
            entries.push((class, w));
        }
    }
    Ok(HeegnerDivisor { delta, r, level: n, m: m.clone(), h: h.rem_euclid(2 * n), entries })
}

/// Whether `point` is a root of `Q(X, 1)` with positive imaginary part.
pub fn is_cm_point_of(q: &Bqf, point: &QuadNum) -> bool {
    let val = &(&point.clone() * point).scale(&rat(q.a)) + &point.scale(&rat(q.b));
    let val = val + QuadNum::from_int(q.c);
    val.is_zero() && point.radicand() < 0 && point.irrational_part() > &Rational::zero()
}
