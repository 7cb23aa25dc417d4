//! Gauss hypergeometric 2F1(a, b; c; z) for complex parameters and real
//! argument 0 <= z < 1: the power series for z <= 0.98, and for larger z the
//! logarithmic connection formula in the balanced case c = a + b (the only
//! near-unit-argument regime the asymptotic integrands produce).

use super::gamma::{digamma, ln_gamma};
use crate::{Error, Result};
use num_complex::Complex64;

/// 2F1(a, b; c; z) for real z in [0, 1).
pub fn hyp2f1(a: Complex64, b: Complex64, c: Complex64, z: f64) -> Result<Complex64> {
    if !(0.0..1.0).contains(&z) {
        return Err(Error::Domain(format!("hyp2f1: z = {z} outside [0, 1)")));
    }
    if z <= 0.98 {
        return gauss_series(a, b, c, z);
    }
    let balance = c - a - b;
    if balance.norm() < 1e-12 {
        return balanced_near_one(a, b, z);
    }
    Err(Error::Domain(
        "hyp2f1: z > 0.98 supported only in the balanced case c = a + b".into(),
    ))
}

fn gauss_series(a: Complex64, b: Complex64, c: Complex64, z: f64) -> Result<Complex64> {
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    for n in 0..20_000 {
        let nf = n as f64;
        term *= (a + nf) * (b + nf) / ((c + nf) * (nf + 1.0)) * z;
        sum += term;
        if term.norm() < sum.norm().max(1e-30) * 1e-16 {
            return Ok(sum);
        }
    }
    Err(Error::Convergence(format!(
        "hyp2f1 series stalled at z = {z}"
    )))
}

// Balanced connection formula (c = a + b):
// 2F1(a,b;a+b;z) = Gamma(a+b)/(Gamma(a)Gamma(b)) *
//   sum_n (a)_n (b)_n / (n!)^2 [2 psi(n+1) - psi(a+n) - psi(b+n) - ln(1-z)] (1-z)^n.
fn balanced_near_one(a: Complex64, b: Complex64, z: f64) -> Result<Complex64> {
    let w = 1.0 - z;
    let lw = w.ln();
    let prefactor = (ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b)).exp();
    let mut poch = Complex64::new(1.0, 0.0); // (a)_n (b)_n / (n!)^2 * w^n
    let mut psi1 = -super::EULER_GAMMA; // psi(n+1)
    let mut psi_a = digamma(a);
    let mut psi_b = digamma(b);
    let mut sum = Complex64::new(0.0, 0.0);
    for n in 0..2000 {
        let nf = n as f64;
        let coeff = 2.0 * psi1 - psi_a - psi_b - lw;
        let term = poch * coeff;
        sum += term;
        if term.norm() < sum.norm().max(1e-30) * 1e-16 && n > 3 {
            return Ok(prefactor * sum);
        }
        poch *= (a + nf) * (b + nf) / ((nf + 1.0) * (nf + 1.0)) * w;
        psi1 += 1.0 / (nf + 1.0);
        psi_a += 1.0 / (a + nf);
        psi_b += 1.0 / (b + nf);
    }
    Err(Error::Convergence(format!(
        "hyp2f1 balanced expansion stalled at z = {z}"
    )))
}
