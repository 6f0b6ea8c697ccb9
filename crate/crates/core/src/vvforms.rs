//! Vector-valued coefficient tables for the discriminant form `ℤ/2Nℤ`, the
//! Hecke operators `T(p)`, the pairing between dual weights, numerical Weil
//! representation matrices, and Zwegers' 12-component embedding for `N = 6`.
//!
//! A table entry `c(n, h)` is keyed by `(4N·n, h mod 2N)`.

use crate::algebra::kronecker::{gcd, is_prime};
use crate::algebra::rational::pow_i;
use crate::algebra::{kronecker, rat, QSeries, Rational};
use crate::error::{precondition, Result};
use num_complex::Complex64;
use num_traits::Zero;
use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::PI;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VvCoeffs {
    pub level: i64,
    /// `+1` for ρ_L, `−1` for the dual representation.
    pub sigma: i64,
    pub weight: Rational,
    /// `(4N·n, h) → c(n, h)` with `0 ≤ h < 2N`; zeros are not stored.
    pub entries: BTreeMap<(i64, i64), Rational>,
}

impl VvCoeffs {
    pub fn new(level: i64, sigma: i64, weight: Rational) -> Self {
        assert!(level >= 1 && sigma.abs() == 1);
        VvCoeffs { level, sigma, weight, entries: BTreeMap::new() }
    }

    fn modulus(&self) -> i64 {
        2 * self.level
    }

    /// `c(n, h)` with `n` given as `4N·n`.
    pub fn get(&self, n4: i64, h: i64) -> Rational {
        self.entries.get(&(n4, h.rem_euclid(self.modulus()))).cloned().unwrap_or_else(Rational::zero)
    }

    /// Adds `c` to the entry at `(4N·n, h)`.
    pub fn add(&mut self, n4: i64, h: i64, c: Rational) {
        let key = (n4, h.rem_euclid(self.modulus()));
        let v = self.entries.remove(&key).unwrap_or_else(Rational::zero) + c;
        if !v.is_zero() {
            self.entries.insert(key, v);
        }
    }

    /// Whether `4N·n ≡ σh² (mod 4N)` at every stored entry.
    pub fn satisfies_support(&self) -> bool {
        let m = 4 * self.level;
        self.entries.keys().all(|&(n4, h)| (n4 - self.sigma * h * h).rem_euclid(m) == 0)
    }

    /// `s` if `c(n, −h) = s·c(n, h)` holds everywhere for `s = ±1`.
    pub fn symmetry_sign(&self) -> Option<i64> {
        [1, -1].into_iter().find(|&s| {
            self.entries.iter().all(|(&(n4, h), c)| self.get(n4, -h) == c * rat(s))
        })
    }
}

fn inverse_mod(a: i64, m: i64) -> i64 {
    (1..m).find(|x| (a * x).rem_euclid(m) == 1 % m).unwrap_or(0)
}

/// `T(p)` for an odd prime `p ∤ N`:
/// `b*(n,h) = b(p²n, ph) + p^{k−3/2}(4Nσn/p) b(n,h) + p^{2k−2} b(n/p², h/p)`.
pub fn hecke_tp(f: &VvCoeffs, p: i64) -> Result<VvCoeffs> {
    if !is_prime(p) || p == 2 || f.level % p == 0 {
        return precondition(format!("T(p) needs an odd prime p not dividing N, got p = {p}"));
    }
    let half = Rational::new(3.into(), 2.into());
    let e1 = &f.weight - &half;
    let e2 = &f.weight * rat(2) - rat(2);
    if !e1.is_integer() {
        return precondition(format!("weight {} is not half-integral", f.weight));
    }
    let to_i64 = |x: &Rational| i64::try_from(x.to_integer()).expect("weight fits");
    let f1 = pow_i(&rat(p), to_i64(&e1));
    let f2 = pow_i(&rat(p), to_i64(&e2));
    let m = f.modulus();
    let pinv = inverse_mod(p, m);
    let p2 = p * p;
    let mut keys = BTreeSet::new();
    for &(n4, h) in f.entries.keys() {
        keys.insert((n4, h));
        keys.insert((n4 * p2, (h * p).rem_euclid(m)));
        if n4 % p2 == 0 {
            keys.insert((n4 / p2, (h * pinv).rem_euclid(m)));
        }
    }
    let mut out = VvCoeffs::new(f.level, f.sigma, f.weight.clone());
    for (n4, h) in keys {
        let mut v = f.get(n4 * p2, h * p);
        let chi = kronecker(f.sigma * n4, p);
        if chi != 0 {
            v += &f1 * rat(i64::from(chi)) * f.get(n4, h);
        }
        if n4 % p2 == 0 {
            v += &f2 * f.get(n4 / p2, h * pinv);
        }
        out.add(n4, h, v);
    }
    Ok(out)
}

/// `{g, f} = Σ_h Σ_{n≤0} c⁺(n, h) b(−n, h)`.
pub fn pairing(g: &VvCoeffs, f: &VvCoeffs) -> Result<Rational> {
    if g.level != f.level || g.sigma != -f.sigma {
        return precondition("pairing needs equal levels and dual representations");
    }
    Ok(f.entries
        .range(..(1, 0))
        .map(|(&(n4, h), c)| c * g.get(-n4, h))
        .sum())
}

pub type CMatrix = Vec<Vec<Complex64>>;

fn e(x: f64) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * x)
}

fn cmul(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let n = a.len();
    let mut out = vec![vec![Complex64::zero(); n]; n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i][k];
            if aik == Complex64::zero() {
                continue;
            }
            for j in 0..n {
                out[i][j] += aik * b[k][j];
            }
        }
    }
    out
}

fn adjoint(a: &CMatrix) -> CMatrix {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| a[j][i].conj()).collect()).collect()
}

fn max_defect(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter()
        .zip(b)
        .flat_map(|(r, s)| r.iter().zip(s).map(|(x, y)| (x - y).norm()))
        .fold(0.0, f64::max)
}

fn identity(n: usize) -> CMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Complex64::new(1.0, 0.0) } else { Complex64::zero() }).collect())
        .collect()
}

/// Matrices of `ρ_L(T)`, `ρ_L(S)` and `ρ_L(Z)` on `ℂ[ℤ/2N]` for signature
/// (2, 1); column `h` is the image of `e_h`.
#[derive(Clone, Debug)]
pub struct WeilMatrices {
    pub level: i64,
    pub t: CMatrix,
    pub s: CMatrix,
    pub z: CMatrix,
}

pub fn weil_matrices(n: i64) -> WeilMatrices {
    let m = (2 * n) as usize;
    let four_n = (4 * n) as f64;
    let two_n = (2 * n) as f64;
    let mut t = vec![vec![Complex64::zero(); m]; m];
    let mut s = vec![vec![Complex64::zero(); m]; m];
    let mut z = vec![vec![Complex64::zero(); m]; m];
    let scale = e(-1.0 / 8.0) / two_n.sqrt();
    for h in 0..m {
        let hh = h as i64;
        t[h][h] = e(((hh * hh) % (4 * n)) as f64 / four_n);
        for h2 in 0..m {
            s[h2][h] = scale * e(-(((hh * h2 as i64) % (2 * n)) as f64) / two_n);
        }
        let neg = ((2 * n - hh) % (2 * n)) as usize;
        z[neg][h] = e(-0.25);
    }
    WeilMatrices { level: n, t, s, z }
}

/// Max-norm defects of the defining relations.
#[derive(Clone, Debug, PartialEq)]
pub struct WeilReport {
    pub t_unitary: f64,
    pub s_unitary: f64,
    pub s2_minus_z: f64,
    pub st3_minus_z: f64,
    pub z_central: f64,
}

impl WeilReport {
    pub fn max(&self) -> f64 {
        [self.t_unitary, self.s_unitary, self.s2_minus_z, self.st3_minus_z, self.z_central]
            .into_iter()
            .fold(0.0, f64::max)
    }
}

pub fn weil_check(w: &WeilMatrices) -> WeilReport {
    let id = identity(w.t.len());
    let st = cmul(&w.s, &w.t);
    let zt = max_defect(&cmul(&w.z, &w.t), &cmul(&w.t, &w.z));
    let zs = max_defect(&cmul(&w.z, &w.s), &cmul(&w.s, &w.z));
    WeilReport {
        t_unitary: max_defect(&cmul(&w.t, &adjoint(&w.t)), &id),
        s_unitary: max_defect(&cmul(&w.s, &adjoint(&w.s)), &id),
        s2_minus_z: max_defect(&cmul(&w.s, &w.s), &w.z),
        st3_minus_z: max_defect(&cmul(&cmul(&st, &st), &st), &w.z),
        z_central: zt.max(zs),
    }
}

/// `(0, h₀, h₂−h₁, 0, −h₁−h₂, −h₀, 0, h₀, h₁+h₂, 0, h₁−h₂, −h₀)`, component
/// `j` belonging to the coset `j/12`.
pub fn zwegers_embed(h0: &QSeries, h1: &QSeries, h2: &QSeries) -> [QSeries; 12] {
    // zero series carrying the common denominator and precision
    let zero = h0.add(h1).add(h2).scale_rational(&Rational::zero());
    let h12 = h1.add(h2);
    let d21 = h2.sub(h1);
    [
        zero.clone(),
        h0.clone(),
        d21.clone(),
        zero.clone(),
        h12.neg(),
        h0.neg(),
        zero.clone(),
        h0.clone(),
        h12,
        zero,
        d21.neg(),
        h0.neg(),
    ]
}

/// Whether `gcd(p, 2N) = 1`, the condition for [`hecke_tp`].
pub fn hecke_admissible(p: i64, n: i64) -> bool {
    is_prime(p) && gcd(p, 2 * n) == 1
}
