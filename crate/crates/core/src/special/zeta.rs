//! Hurwitz zeta by Euler-Maclaurin summation, valid for complex s != 1 and
//! real shift a > 0.

use num_complex::Complex64;

// B_{2k} for k = 1..12.
const BERNOULLI: [f64; 12] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
];

/// Hurwitz zeta(s, a) = sum_{k>=0} (k+a)^{-s}, continued to complex s != 1,
/// for real a > 0. Euler-Maclaurin with the tail cut at N ~ 10 + |s| terms
/// and a 12-term Bernoulli correction series.
pub fn hurwitz_zeta(s: Complex64, a: f64) -> Complex64 {
    assert!(a > 0.0, "hurwitz_zeta requires a > 0");
    assert!(
        (s - Complex64::new(1.0, 0.0)).norm() > 1e-14,
        "hurwitz_zeta pole at s = 1"
    );
    let n = (10.0 + s.norm()).ceil() as usize;
    // Direct part: sum_{k=0}^{n-1} (k+a)^{-s}.
    let mut direct = Complex64::new(0.0, 0.0);
    for k in 0..n {
        direct += Complex64::new(k as f64 + a, 0.0).powc(-s);
    }
    let x = n as f64 + a;
    let xc = Complex64::new(x, 0.0);
    // Integral term x^{1-s}/(s-1) and half-weight endpoint term.
    let mut acc = direct + xc.powc(Complex64::new(1.0, 0.0) - s) / (s - 1.0)
        + 0.5 * xc.powc(-s);
    // Bernoulli correction: sum_k B_{2k}/(2k)! * (s)_{2k-1} * x^{-s-2k+1}.
    let mut poch = s; // rising factorial (s)_{2k-1}, starts at (s)_1 = s
    let mut fact = 2.0; // (2k)!
    let mut xpow = xc.powc(-s - 1.0); // x^{-s-2k+1}
    let x2 = x * x;
    for (k, &b) in BERNOULLI.iter().enumerate() {
        acc += b / fact * poch * xpow;
        let m = 2.0 * (k as f64 + 1.0);
        poch *= (s + m - 1.0) * (s + m);
        fact *= (m + 1.0) * (m + 2.0);
        xpow /= x2;
    }
    acc
}

/// Riemann zeta(s) for real s != 1.
pub fn riemann_zeta(s: f64) -> f64 {
    hurwitz_zeta(Complex64::new(s, 0.0), 1.0).re
}
