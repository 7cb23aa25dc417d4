//! Regularized upper incomplete gamma Q(a, x) = Gamma(a, x)/Gamma(a), for
//! a > 0 and x >= 0. Series for the lower function when x < a + 1, modified
//! Lentz continued fraction for the upper function otherwise.

use super::gamma::ln_gamma;
use num_complex::Complex64;

/// Regularized upper incomplete gamma Q(a, x).
pub fn reg_gamma_q(a: f64, x: f64) -> f64 {
    assert!(a > 0.0 && x >= 0.0, "reg_gamma_q requires a > 0, x >= 0");
    if x == 0.0 {
        return 1.0;
    }
    let lg = ln_gamma(Complex64::new(a, 0.0)).re;
    let prefactor = (a * x.ln() - x - lg).exp();
    if x < a + 1.0 {
        // Lower series: P(a,x) = x^a e^{-x}/Gamma(a) * sum_n x^n / (a)_{n+1}.
        let mut term = 1.0 / a;
        let mut sum = term;
        let mut ap = a;
        for _ in 0..500 {
            ap += 1.0;
            term *= x / ap;
            sum += term;
            if term.abs() < sum.abs() * 1e-17 {
                break;
            }
        }
        1.0 - prefactor * sum
    } else {
        // Continued fraction Gamma(a,x) = e^{-x} x^a / (x+1-a - 1(1-a)/(x+3-a - ...)).
        let tiny = 1e-300;
        let mut b = x + 1.0 - a;
        let mut c = 1.0 / tiny;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..500 {
            let an = -(i as f64) * (i as f64 - a);
            b += 2.0;
            d = an * d + b;
            if d.abs() < tiny {
                d = tiny;
            }
            c = b + an / c;
            if c.abs() < tiny {
                c = tiny;
            }
            d = 1.0 / d;
            let delta = d * c;
            h *= delta;
            if (delta - 1.0).abs() < 1e-17 {
                break;
            }
        }
        prefactor * h
    }
}

/// Q(1/4, x) or Q(3/4, x), the two smoothing weights that occur in the
/// approximate functional equation for real quadratic characters (even and
/// odd parity respectively).
pub fn reg_gamma_q_quarter(odd: bool, x: f64) -> f64 {
    reg_gamma_q(if odd { 0.75 } else { 0.25 }, x)
}
