//! The four theta-multiplier exponential sums. Each is an exact finite sum
//! over the reduced residues a mod c of a product (unit eighth root) x
//! (quadratic symbol) x (additive character), accumulated in fixed ascending
//! order with compensated summation so grid scans are bit-reproducible.

use crate::arith::{epsilon_d, gcd, mod_inverse, symbol_shimura};
use crate::{Complex64, Error, Result};

fn inv(a: i64, m: i64) -> i64 {
    mod_inverse(a, m).expect("reduced residue has an inverse")
}

/// Which theta sum a value belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThetaKind {
    Theta0,
    Theta1,
    Theta4,
    Theta5,
}

/// Value of one theta sum at (c, n).
#[derive(Debug, Clone, Copy)]
pub struct ThetaSumValue {
    pub kind: ThetaKind,
    pub c: i64,
    pub n: i64,
    pub value: Complex64,
}

/// e(x) = exp(2 pi i x).
pub fn e_of(x: f64) -> Complex64 {
    let t = 2.0 * std::f64::consts::PI * x;
    Complex64::new(t.cos(), t.sin())
}

/// Complex Kahan accumulator: fixed-order compensated summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanComplex {
    sum: Complex64,
    comp: Complex64,
}

impl KahanComplex {
    pub fn new() -> Self {
        Self::default()
    }
    pub fn add(&mut self, x: Complex64) {
        let y = x - self.comp;
        let t = self.sum + y;
        self.comp = (t - self.sum) - y;
        self.sum = t;
    }
    pub fn value(&self) -> Complex64 {
        self.sum
    }
}

fn conj_eps(d: i64) -> Result<Complex64> {
    Ok(epsilon_d(d)?.conj())
}

/// Theta sum for c divisible by 4: sum over reduced residues a of
/// conj(eps_d) (c/d) e(-dn/c), with d the inverse of a mod c.
pub fn theta0(c: i64, n: i64) -> Result<ThetaSumValue> {
    if c <= 0 || c % 4 != 0 {
        return Err(Error::Domain(format!("theta0: c = {c} must be positive, 0 mod 4")));
    }
    let mut acc = KahanComplex::new();
    for a in 1..c {
        if gcd(a, c) != 1 {
            continue;
        }
        let d = inv(a, c);
        let unit = conj_eps(d)? * symbol_shimura(c, d)? as f64;
        acc.add(unit * e_of(-(d as f64) * n as f64 / c as f64));
    }
    Ok(ThetaSumValue {
        kind: ThetaKind::Theta0,
        c,
        n,
        value: acc.value(),
    })
}

/// Theta sum for odd c, in the closed character form
/// conj(eps_c) sum_a (a/c) e(an/c). For c = 1 the empty-modulus convention
/// gives 1.
pub fn theta1(c: i64, n: i64) -> Result<ThetaSumValue> {
    if c <= 0 || c % 2 == 0 {
        return Err(Error::Domain(format!("theta1: c = {c} must be positive odd")));
    }
    let value = if c == 1 {
        Complex64::new(1.0, 0.0)
    } else {
        let eps = conj_eps(c)?;
        let mut acc = KahanComplex::new();
        for a in 1..c {
            if gcd(a, c) != 1 {
                continue;
            }
            let chi = symbol_shimura(a, c)? as f64;
            acc.add(chi * e_of(a as f64 * n as f64 / c as f64));
        }
        eps * acc.value()
    };
    Ok(ThetaSumValue {
        kind: ThetaKind::Theta1,
        c,
        n,
        value,
    })
}

/// The defining form of [`theta1`]: sum over a of the multiplier
/// conj(eps_c)(4d/c) at d with 4ad = -1 mod c, times e(dn/c). Kept separate
/// as a cross-check oracle for the closed form.
pub fn theta1_defining(c: i64, n: i64) -> Result<Complex64> {
    if c <= 0 || c % 2 == 0 {
        return Err(Error::Domain(format!("theta1: c = {c} must be positive odd")));
    }
    if c == 1 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let eps = conj_eps(c)?;
    let mut acc = KahanComplex::new();
    for a in 1..c {
        if gcd(a, c) != 1 {
            continue;
        }
        // d solves 4ad = -1 (mod c)
        let d = (c - inv(4 * a % c, c)) % c;
        let chi = symbol_shimura(4 * d % c, c)? as f64;
        acc.add(chi * e_of(d as f64 * n as f64 / c as f64));
    }
    Ok(eps * acc.value())
}

/// Theta sum for c = 2 mod 4: eps_{c1} sum_a (8a/c1) e(-(8a)^{-1} n/c1),
/// c1 = c/2, the sum over reduced residues a mod c.
pub fn theta4(c: i64, n: i64) -> Result<ThetaSumValue> {
    if c <= 0 || c % 4 != 2 {
        return Err(Error::Domain(format!("theta4: c = {c} must be positive, 2 mod 4")));
    }
    let c1 = c / 2;
    let mut acc = KahanComplex::new();
    for a in 1..c {
        if gcd(a, c) != 1 {
            continue;
        }
        if c1 == 1 {
            acc.add(Complex64::new(1.0, 0.0));
            continue;
        }
        let chi = symbol_shimura(8 * a % c1, c1)? as f64;
        let d4 = (c1 - inv(8 * a % c1, c1)) % c1;
        let eps = epsilon_d(c1)?;
        acc.add(eps * chi * e_of(d4 as f64 * n as f64 / c1 as f64));
    }
    Ok(ThetaSumValue {
        kind: ThetaKind::Theta4,
        c,
        n,
        value: acc.value(),
    })
}

/// Theta sum for c = 2 mod 4 in the second normalization:
/// conj(eps_{c1}) sum_a (-2 a^{-1}/c1) e(-(2a)^{-1} n/c1).
pub fn theta5(c: i64, n: i64) -> Result<ThetaSumValue> {
    if c <= 0 || c % 4 != 2 {
        return Err(Error::Domain(format!("theta5: c = {c} must be positive, 2 mod 4")));
    }
    let c1 = c / 2;
    let mut acc = KahanComplex::new();
    if c1 == 1 {
        acc.add(Complex64::new(1.0, 0.0));
    } else {
        let eps = conj_eps(c1)?;
        for a in 1..c {
            if gcd(a, c) != 1 {
                continue;
            }
            let abar = inv(a % c1, c1);
            let arg = ((-2 * abar).rem_euclid(c1)) % c1;
            let chi = symbol_shimura(arg, c1)? as f64;
            let d5 = (c1 - inv(2 * a % c1, c1)) % c1;
            acc.add(eps * chi * e_of(d5 as f64 * n as f64 / c1 as f64));
        }
    }
    Ok(ThetaSumValue {
        kind: ThetaKind::Theta5,
        c,
        n,
        value: acc.value(),
    })
}

/// Dispatch by kind (CLI entry point).
pub fn theta(kind: ThetaKind, c: i64, n: i64) -> Result<ThetaSumValue> {
    match kind {
        ThetaKind::Theta0 => theta0(c, n),
        ThetaKind::Theta1 => theta1(c, n),
        ThetaKind::Theta4 => theta4(c, n),
        ThetaKind::Theta5 => theta5(c, n),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Complex64, b: Complex64, tol: f64) {
        assert!((a - b).norm() <= tol, "{a} vs {b}");
    }

    #[test]
    fn theta0_brute_force_small() {
        // c = 4: a in {1,3}, each self-inverse mod 4.
        for n in -3..=3 {
            let mut expect = Complex64::new(0.0, 0.0);
            for a in [1i64, 3] {
                let d = a; // a^2 = 1 mod 4
                let unit = epsilon_d(d).unwrap().conj() * symbol_shimura(4, d).unwrap() as f64;
                expect += unit * e_of(-(d as f64) * n as f64 / 4.0);
            }
            close(theta0(4, n).unwrap().value, expect, 1e-14);
        }
    }

    #[test]
    fn theta1_small_and_conventions() {
        for n in -5..=5 {
            close(theta1(1, n).unwrap().value, Complex64::new(1.0, 0.0), 0.0);
        }
        // c = 3: conj(eps_3) [(1/3)e(n/3) + (2/3)e(2n/3)]
        let expect = Complex64::new(0.0, -1.0)
            * (e_of(1.0 / 3.0) - e_of(2.0 / 3.0));
        close(theta1(3, 1).unwrap().value, expect, 1e-14);
        // Nontrivial character summed over the full group vanishes at n = 0.
        close(theta1(5, 0).unwrap().value, Complex64::new(0.0, 0.0), 1e-13);
    }

    #[test]
    fn theta1_dual_form_agreement() {
        for c in (3..400).step_by(2) {
            for n in [-100i64, -7, -1, 0, 1, 2, 13, 100] {
                let a_form = theta1(c, n).unwrap().value;
                let d_form = theta1_defining(c, n).unwrap();
                assert!(
                    (a_form - d_form).norm() < 1e-10,
                    "c={c} n={n}: {a_form} vs {d_form}"
                );
            }
        }
    }

    #[test]
    fn reduction_lemma_small() {
        // theta4 = theta5 = theta1(c/2) for c = 2 mod 4.
        for c in [2i64, 6, 10, 14, 18, 22, 26].iter().copied() {
            for n in -8..=8 {
                let t4 = theta4(c, n).unwrap().value;
                let t5 = theta5(c, n).unwrap().value;
                let t1 = theta1(c / 2, n).unwrap().value;
                close(t4, t1, 1e-12);
                close(t5, t1, 1e-12);
            }
        }
    }

    #[test]
    fn residue_reduction_set_property() {
        // {a mod c, (a,c)=1} reduced mod c1 = {a mod c1, (a,c1)=1} as sets.
        for c in (2..400i64).step_by(4) {
            let c = c + if c % 4 == 2 { 0 } else { 2 };
            if c % 4 != 2 {
                continue;
            }
            let c1 = c / 2;
            let mut reduced: Vec<i64> = (1..c)
                .filter(|&a| gcd(a, c) == 1)
                .map(|a| a % c1)
                .collect();
            reduced.sort_unstable();
            reduced.dedup();
            let direct: Vec<i64> = if c1 == 1 {
                vec![0]
            } else {
                (0..c1).filter(|&a| gcd(a, c1) == 1).collect()
            };
            assert_eq!(reduced, direct, "c={c}");
        }
    }

    #[test]
    fn trivial_bound() {
        for c in [4i64, 8, 12, 60, 100] {
            for n in [-17i64, 0, 5] {
                assert!(theta0(c, n).unwrap().value.norm() <= c as f64 + 1e-9);
            }
        }
        for c in [3i64, 9, 45, 101] {
            for n in [-17i64, 0, 5] {
                assert!(theta1(c, n).unwrap().value.norm() <= c as f64 + 1e-9);
            }
        }
    }

    #[test]
    fn domain_rejection() {
        assert!(theta0(6, 1).is_err());
        assert!(theta1(4, 1).is_err());
        assert!(theta4(8, 1).is_err());
        assert!(theta5(5, 1).is_err());
    }
}
