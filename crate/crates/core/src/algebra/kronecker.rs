//! Kronecker symbols and small integer helpers shared by the number-theoretic
//! modules.

/// Extended Kronecker symbol `(m/n)`.
///
/// Completely multiplicative in `n`. At `n = 0` the value is `1` for `m = 1`
/// and `0` otherwise, which is the convention the twisted theta lift uses for
/// the trivial character.
pub fn kronecker(m: i64, n: i64) -> i32 {
    kronecker_i128(m as i128, n as i128)
}

pub fn kronecker_i128(m: i128, n: i128) -> i32 {
    if n == 0 {
        return i32::from(m == 1);
    }
    let mut result = 1;
    let mut n = n;
    if n < 0 {
        n = -n;
        if m < 0 {
            result = -result;
        }
    }
    let twos = n.trailing_zeros();
    if twos > 0 {
        if m % 2 == 0 {
            return 0;
        }
        n >>= twos;
        if twos % 2 == 1 && matches!(m.rem_euclid(8), 3 | 5) {
            result = -result;
        }
    }
    result * jacobi(m.rem_euclid(n), n)
}

/// Jacobi symbol for odd positive `n` and `0 <= a < n`.
fn jacobi(mut a: i128, mut n: i128) -> i32 {
    debug_assert!(n > 0 && n % 2 == 1);
    let mut result = 1;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a as i64
}

pub fn is_prime(n: i64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub fn is_squarefree(n: i64) -> bool {
    if n == 0 {
        return false;
    }
    let n = n.abs();
    let mut d = 2;
    while d * d <= n {
        if n % (d * d) == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Positive divisors of `|n|` in increasing order.
pub fn divisors(n: i64) -> Vec<i64> {
    let n = n.abs();
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Whether `d` is a discriminant in the loose sense: `d ≡ 0, 1 (mod 4)`.
pub fn is_discriminant(d: i64) -> bool {
    matches!(d.rem_euclid(4), 0 | 1)
}

/// Fundamental discriminant: `1`, a squarefree `d ≡ 1 (mod 4)`, or `4m` with
/// `m` squarefree and `m ≡ 2, 3 (mod 4)`.
pub fn is_fundamental_discriminant(d: i64) -> bool {
    if d == 1 {
        return true;
    }
    if d == 0 {
        return false;
    }
    match d.rem_euclid(4) {
        1 => is_squarefree(d),
        0 => {
            let m = d / 4;
            matches!(m.rem_euclid(4), 2 | 3) && is_squarefree(m)
        }
        _ => false,
    }
}

/// Whether `x` is a square modulo `m` (`m >= 1`).
pub fn is_square_mod(x: i64, m: i64) -> bool {
    let x = x.rem_euclid(m);
    (0..m).any(|y| (y * y) % m == x)
}

/// Writes `n = f^2 * s` with `s` squarefree (sign carried by `s`).
pub fn squarefree_decomposition(n: i64) -> (i64, i64) {
    assert!(n != 0, "zero has no squarefree decomposition");
    let mut s = n.signum();
    let mut f = 1;
    let mut m = n.abs();
    let mut p = 2;
    while p * p <= m {
        while m % (p * p) == 0 {
            m /= p * p;
            f *= p;
        }
        if m % p == 0 {
            m /= p;
            s *= p;
        }
        p += 1;
    }
    (f, s * m)
}
