use borcherds_core::algebra::rational::to_f64;
use borcherds_core::algebra::{ratio, QuadNum};
use borcherds_core::heegner::twisted_divisor;
use borcherds_core::modforms::j_series;
use borcherds_core::numeval::eta_numeric;
use num_complex::Complex64;

/// `j(τ)` summed from its exact q-expansion; fine for `Im τ` near 1 and above.
fn j_numeric(tau: Complex64) -> Complex64 {
    let j = j_series(60).unwrap();
    let q = (Complex64::i() * 2.0 * std::f64::consts::PI * tau).exp();
    (-1..60).map(|n| q.powi(n as i32) * to_f64(j.coeff_int(n).rational_part())).sum()
}

#[test]
fn zagier_divisor_sits_at_the_roots_of_the_quotient() {
    // Δ = 5, d = −3: classes of discriminant −15 at level 1
    let z = twisted_divisor(5, 1, 1, &ratio(-3, 4), 1).unwrap();
    assert_eq!(z.entries.len(), 4);
    let root = QuadNum::new(ratio(-191025, 2), ratio(-85995, 2), 5).to_complex();
    let pole = QuadNum::new(ratio(-191025, 2), ratio(85995, 2), 5).to_complex();
    for (class, weight) in &z.entries {
        let jv = j_numeric(class.point.to_complex());
        let target = if weight > &ratio(0, 1) { root } else { pole };
        assert!((jv - target).norm() / target.norm() < 1e-9, "{}: j = {jv}, weight {weight}", class.rep);
    }
    assert_eq!(z.degree(), ratio(0, 1));
}

#[test]
fn eta_gives_the_same_j() {
    let tau = Complex64::new(-0.25, 15f64.sqrt() / 4.0);
    let eta = eta_numeric(tau).unwrap();
    let eta2 = eta_numeric(tau * 2.0).unwrap();
    // j = (x + 16)³/x with x = 2¹²·(η(2τ)/η(τ))²⁴
    let x = (eta2 / eta).powi(24) * 4096.0;
    let j = (x + 16.0).powi(3) / x;
    assert!((j - j_numeric(tau)).norm() / j.norm() < 1e-9);
}
