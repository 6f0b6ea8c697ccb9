//! Hecke eigenvalues of weight-2 newforms attached to elliptic curves, and
//! central values and derivatives of their quadratic twists.

use crate::algebra::kronecker::{gcd, is_fundamental_discriminant, is_prime};
use crate::algebra::kronecker;
use crate::error::{precondition, Result};

/// A long Weierstrass model `y² + a1xy + a3y = x³ + a2x² + a4x + a6`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EllipticCurve {
    pub a: [i64; 5],
    pub conductor: i64,
}

/// `(b2, b4, b6, b8)`.
fn b_invariants(a: &[i64; 5]) -> [i128; 4] {
    let [a1, a2, a3, a4, a6] = a.map(i128::from);
    [
        a1 * a1 + 4 * a2,
        2 * a4 + a1 * a3,
        a3 * a3 + 4 * a6,
        a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4,
    ]
}

/// Coefficients after `x = u²x′ + r`, `y = u³y′ + su²x′ + t`, if integral.
fn change_coordinates(a: &[i64; 5], u: i64, r: i64, s: i64, t: i64) -> Option<[i64; 5]> {
    let [a1, a2, a3, a4, a6] = a.map(i128::from);
    let (u, r, s, t) = (i128::from(u), i128::from(r), i128::from(s), i128::from(t));
    let raw = [
        (a1 + 2 * s, 1),
        (a2 - s * a1 + 3 * r - s * s, 2),
        (a3 + r * a1 + 2 * t, 3),
        (a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t, 4),
        (a6 + r * a4 + r * r * a2 + r * r * r - t * a3 - t * t - r * t * a1, 6),
    ];
    let mut out = [0; 5];
    for (slot, (v, e)) in out.iter_mut().zip(raw) {
        let ue = u.pow(e);
        if v % ue != 0 {
            return None;
        }
        *slot = i64::try_from(v / ue).ok()?;
    }
    Some(out)
}

fn prime_factors(mut n: i128) -> Vec<i64> {
    n = n.abs();
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p as i64);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n as i64);
    }
    out
}

impl EllipticCurve {
    pub fn new(a: [i64; 5], conductor: i64) -> Result<Self> {
        let e = EllipticCurve { a, conductor };
        if e.discriminant() == 0 {
            return precondition(format!("singular model {a:?}"));
        }
        if conductor < 1 {
            return precondition(format!("conductor must be positive, got {conductor}"));
        }
        Ok(e)
    }

    pub fn discriminant(&self) -> i128 {
        let [b2, b4, b6, b8] = b_invariants(&self.a);
        -b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6
    }

    pub fn c4(&self) -> i128 {
        let [b2, b4, ..] = b_invariants(&self.a);
        b2 * b2 - 24 * b4
    }

    /// A model that is minimal at every prime, reached by repeatedly dividing
    /// out `u = p` where `p¹²` divides the discriminant.
    pub fn minimal_model(&self) -> EllipticCurve {
        let mut a = self.a;
        'outer: loop {
            let disc = EllipticCurve { a, conductor: self.conductor }.discriminant();
            for p in prime_factors(disc) {
                if disc % i128::from(p).pow(12) != 0 {
                    continue;
                }
                // r mod u², s mod u and t mod u³ cover every integral change
                for s in 0..p {
                    for r in 0..p * p {
                        for t in 0..p * p * p {
                            if let Some(b) = change_coordinates(&a, p, r, s, t) {
                                a = b;
                                continue 'outer;
                            }
                        }
                    }
                }
            }
            return EllipticCurve { a, conductor: self.conductor };
        }
    }

    fn equation_mod(&self, p: i64, x: i64, y: i64) -> i64 {
        let [a1, a2, a3, a4, a6] = self.a.map(|v| v.rem_euclid(p));
        let lhs = (y * y + a1 * x % p * y + a3 * y) % p;
        let rhs = (((x * x % p) * x) % p + a2 * (x * x % p) + a4 * x + a6) % p;
        (lhs - rhs).rem_euclid(p)
    }

    /// Affine points over `F_p` by the full double loop.
    pub fn count_affine_naive(&self, p: i64) -> i64 {
        (0..p).map(|x| (0..p).filter(|&y| self.equation_mod(p, x, y) == 0).count() as i64).sum()
    }

    /// Affine points over `F_p`, counting the roots of the quadratic in `y`
    /// through the quadratic character of its discriminant.
    pub fn count_affine(&self, p: i64) -> i64 {
        if p == 2 {
            return self.count_affine_naive(p);
        }
        let mut is_square = vec![false; p as usize];
        for y in 1..p {
            is_square[(y * y % p) as usize] = true;
        }
        let [a1, a2, a3, a4, a6] = self.a.map(|v| v.rem_euclid(p));
        (0..p)
            .map(|x| {
                let lin = (a1 * x + a3) % p;
                let cubic = ((x * x % p * x) % p + a2 * (x * x % p) + a4 * x + a6) % p;
                let disc = (lin * lin + 4 * cubic) % p;
                if disc == 0 {
                    1
                } else if is_square[disc as usize] {
                    2
                } else {
                    0
                }
            })
            .sum()
    }

    fn singular_point(&self, p: i64) -> Option<(i64, i64)> {
        let [a1, a2, a3, a4, _] = self.a.map(|v| v.rem_euclid(p));
        (0..p).flat_map(|x| (0..p).map(move |y| (x, y))).find(|&(x, y)| {
            let fx = (a1 * y - 3 * x * x - 2 * a2 * x - a4).rem_euclid(p);
            let fy = (2 * y + a1 * x + a3).rem_euclid(p);
            fx == 0 && fy == 0 && self.equation_mod(p, x, y) == 0
        })
    }
}

/// `a_p` of a curve, assumed minimal at `p`.
///
/// Good primes use `p + 1 − #E(F_p)`. At multiplicative primes the tangent
/// cone `m² + a1·m − (3x₀ + a2)` at the node decides split (`+1`) against
/// nonsplit (`−1`); additive reduction gives `0`.
pub fn curve_ap(e: &EllipticCurve, p: i64) -> Result<i64> {
    if !is_prime(p) {
        return precondition(format!("{p} is not prime"));
    }
    let pp = i128::from(p);
    if e.discriminant() % pp != 0 {
        return Ok(p - e.count_affine(p));
    }
    if e.c4() % pp == 0 {
        return Ok(0);
    }
    let Some((x0, _)) = e.singular_point(p) else {
        return precondition(format!("no singular point of the reduction at {p}"));
    };
    let [a1, a2, ..] = e.a;
    let split = (0..p).any(|m| (m * m + a1 * m - 3 * x0 - a2).rem_euclid(p) == 0);
    Ok(if split { 1 } else { -1 })
}

/// `a_1, …, a_M` of a newform together with the sign of its functional
/// equation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewformCoeffs {
    pub level: i64,
    /// `a[n]` for `1 ≤ n ≤ M`; `a[0]` is unused and zero.
    pub a: Vec<i64>,
    pub epsilon: i32,
}

impl NewformCoeffs {
    pub fn len(&self) -> usize {
        self.a.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Coefficients of the newform of a semistable curve.
///
/// The root number is `−Π_{p|N} (−a_p)`, which only holds when every bad prime
/// is multiplicative, so additive reduction is rejected.
pub fn newform_an(curve: &EllipticCurve, m: usize) -> Result<NewformCoeffs> {
    if m < 1 {
        return precondition("need at least one coefficient");
    }
    let e = curve.minimal_model();
    let bad = prime_factors(e.discriminant());
    let mut epsilon = -1;
    for &p in &bad {
        let ap = curve_ap(&e, p)?;
        if ap == 0 {
            return precondition(format!("additive reduction at {p}"));
        }
        if e.conductor % p != 0 {
            return precondition(format!("bad prime {p} does not divide the conductor {}", e.conductor));
        }
        epsilon *= -ap as i32;
    }
    let mut spf = vec![0usize; m + 1];
    for i in 2..=m {
        if spf[i] == 0 {
            for k in (i..=m).step_by(i) {
                if spf[k] == 0 {
                    spf[k] = i;
                }
            }
        }
    }
    let mut a = vec![0i64; m + 1];
    a[1] = 1;
    for n in 2..=m {
        let p = spf[n];
        let mut k = n;
        while k % p == 0 {
            k /= p;
        }
        if k > 1 {
            a[n] = a[n / k] * a[k];
        } else if n == p {
            a[n] = curve_ap(&e, p as i64)?;
        } else if bad.contains(&(p as i64)) {
            a[n] = a[p] * a[n / p];
        } else {
            a[n] = a[p] * a[n / p] - p as i64 * a[n / (p * p)];
        }
    }
    Ok(NewformCoeffs { level: e.conductor, a, epsilon })
}

/// Sign `ε·χ_d(−N)` of the functional equation of the twist by `χ_d`.
pub fn twist_sign(epsilon: i32, level: i64, d: i64) -> Result<i32> {
    if !is_fundamental_discriminant(d) {
        return precondition(format!("{d} is not a fundamental discriminant"));
    }
    if gcd(d, level) != 1 {
        return precondition(format!("twist {d} is not coprime to the level {level}"));
    }
    Ok(epsilon * kronecker(d, -level))
}

/// Neumaier's compensated sum.
#[derive(Default)]
struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// `E₁(x) = −γ − ln x − Σ_{k≥1} (−x)^k/(k·k!)`.
pub fn exp_integral_series(x: f64) -> f64 {
    let mut sum = CompensatedSum::default();
    let mut term = 1.0;
    for k in 1..200 {
        term *= -x / k as f64;
        let t = term / k as f64;
        sum.add(t);
        if t.abs() < 1e-18 * sum.value().abs().max(1e-300) {
            break;
        }
    }
    -EULER_GAMMA - x.ln() - sum.value()
}

/// `E₁(x) = e^{−x}/(x + 1 − 1²/(x + 3 − 2²/(x + 5 − …)))` by the modified Lentz
/// method.
pub fn exp_integral_cf(x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut b = x + 1.0;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..10_000 {
        let an = -((i * i) as f64);
        b += 2.0;
        d = 1.0 / (an * d + b);
        c = b + an / c;
        let delta = c * d;
        h *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    h * (-x).exp()
}

/// The exponential integral `E₁(x)` for `x > 0`.
pub fn exp_integral(x: f64) -> f64 {
    if x <= 1.0 {
        exp_integral_series(x)
    } else {
        exp_integral_cf(x)
    }
}

/// Smallest `n_max ≥ A` with `4·e^{−(n_max+1)/A}/(1 − e^{−1/A}) < tol/2`.
///
/// `|a_n| ≤ d(n)√n ≤ 2n` and `E₁(x) ≤ e^{−x}` for `x ≥ 1` bound each tail
/// term by `2·2·e^{−n/A}`.
fn truncation_point(a_scale: f64, tol: f64) -> usize {
    let ratio = 1.0 - (-1.0 / a_scale).exp();
    let mut n = a_scale.ceil() as usize;
    while 4.0 * (-((n + 1) as f64) / a_scale).exp() / ratio >= tol / 2.0 {
        n += 1;
    }
    n
}

fn twisted_sum(g: &NewformCoeffs, d: i64, tol: f64, weight: impl Fn(f64) -> f64) -> Result<f64> {
    if !(tol > 0.0) {
        return precondition("tolerance must be positive");
    }
    let a_scale = d.abs() as f64 * (g.level as f64).sqrt() / (2.0 * std::f64::consts::PI);
    let n_max = truncation_point(a_scale, tol);
    if n_max > g.len() {
        return precondition(format!("need {n_max} coefficients, have {}", g.len()));
    }
    let mut sum = CompensatedSum::default();
    for n in 1..=n_max {
        let an = g.a[n];
        if an == 0 {
            continue;
        }
        let chi = kronecker(d, n as i64);
        if chi == 0 {
            continue;
        }
        sum.add((an * i64::from(chi)) as f64 / n as f64 * weight(n as f64 / a_scale));
    }
    Ok(2.0 * sum.value())
}

/// `L(G, χ_d, 1) = 2Σ a_n χ_d(n)/n · e^{−n/A}` with `A = |d|√N/2π`.
pub fn l_central(g: &NewformCoeffs, d: i64, tol: f64) -> Result<f64> {
    if twist_sign(g.epsilon, g.level, d)? != 1 {
        return precondition(format!("the twist by {d} has an odd functional equation"));
    }
    twisted_sum(g, d, tol, |x| (-x).exp())
}

/// `L′(G, χ_d, 1) = 2Σ a_n χ_d(n)/n · E₁(n/A)` with `A = |d|√N/2π`.
pub fn l_derivative(g: &NewformCoeffs, d: i64, tol: f64) -> Result<f64> {
    if twist_sign(g.epsilon, g.level, d)? != -1 {
        return precondition(format!("the twist by {d} has an even functional equation"));
    }
    twisted_sum(g, d, tol, exp_integral)
}

/// Coefficients sufficient for `l_central`/`l_derivative` at `d` and `tol`.
pub fn coefficients_needed(level: i64, d: i64, tol: f64) -> usize {
    truncation_point(d.abs() as f64 * (level as f64).sqrt() / (2.0 * std::f64::consts::PI), tol)
}
