//! Quadratic Dirichlet L-functions and the Zagier L-series apparatus:
//! the factored and direct-series evaluations, the q(w,n)/L*(w,n) objects,
//! the r2 two-adic factor, numerical verification of the two theta-sum
//! generating Dirichlet series, and the quadratic large-sieve scan.

use crate::arith::{decompose, divisors, factorize, kronecker, lambda_q, tau_nu};
use crate::special::{hurwitz_zeta, reg_gamma_q, ZETA_HALF};
use crate::theta::{theta0, theta1, KahanComplex};
use crate::{Complex64, Error, Result};
use rayon::prelude::*;

/// How an L-value was computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LMethod {
    DirectSeries,
    Hurwitz,
    Afe,
    Factored,
}

impl std::fmt::Display for LMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            LMethod::DirectSeries => "direct-series",
            LMethod::Hurwitz => "hurwitz",
            LMethod::Afe => "afe",
            LMethod::Factored => "factored",
        };
        write!(f, "{name}")
    }
}

/// One evaluated L-value with its provenance and a truncation-error bound
/// (0 for closed routes whose error is at rounding level).
#[derive(Debug, Clone, Copy)]
pub struct LValue {
    pub s: Complex64,
    pub label: i64,
    pub value: Complex64,
    pub method: LMethod,
    pub truncation_error: f64,
}

/// chi_D(m) as a float.
fn chi(d: i64, m: i64) -> f64 {
    kronecker(d, m) as f64
}

/// L(s, chi_D) for a fundamental discriminant D (or D = 1, meaning zeta) by
/// the Hurwitz-zeta representation |D|^{-s} sum_a chi_D(a) zeta(s, a/|D|).
/// Valid for every s except the D = 1 pole at s = 1.
pub fn dirichlet_l(s: Complex64, d: i64) -> Result<LValue> {
    if d == 1 {
        if (s - Complex64::new(1.0, 0.0)).norm() < 1e-12 {
            return Err(Error::Domain("dirichlet_l: zeta pole at s = 1".into()));
        }
        return Ok(LValue {
            s,
            label: 1,
            value: hurwitz_zeta(s, 1.0),
            method: LMethod::Hurwitz,
            truncation_error: 1e-13,
        });
    }
    let q = d.unsigned_abs() as i64;
    let at_pole = (s - Complex64::new(1.0, 0.0)).norm() < 1e-10;
    let mut acc = KahanComplex::new();
    for a in 1..=q {
        let c = chi(d, a);
        if c != 0.0 {
            // At s = 1 each Hurwitz term has a simple pole with residue 1;
            // the poles cancel over the character sum, leaving
            // lim (zeta(s,x) - 1/(s-1)) = -psi(x).
            let term = if at_pole {
                -crate::special::digamma(Complex64::new(a as f64 / q as f64, 0.0))
            } else {
                hurwitz_zeta(s, a as f64 / q as f64)
            };
            acc.add(c * term);
        }
    }
    let scale = Complex64::new(q as f64, 0.0).powc(-s);
    Ok(LValue {
        s,
        label: d,
        value: scale * acc.value(),
        method: LMethod::Hurwitz,
        truncation_error: 1e-12 * q as f64,
    })
}

/// L(s, chi_D) by direct Dirichlet series, Re s > 1 only, with the rigorous
/// tail bound M^{1-sigma}/(sigma-1).
pub fn dirichlet_l_series(s: Complex64, d: i64, m_max: u64) -> Result<LValue> {
    if s.re <= 1.0 {
        return Err(Error::Domain(format!(
            "dirichlet_l_series requires Re s > 1, got {}",
            s.re
        )));
    }
    let mut acc = KahanComplex::new();
    for m in 1..=m_max as i64 {
        let c = chi(d, m);
        if c != 0.0 {
            acc.add(c * Complex64::new(m as f64, 0.0).powc(-s));
        }
    }
    let tail = (m_max as f64).powf(1.0 - s.re) / (s.re - 1.0);
    Ok(LValue {
        s,
        label: d,
        value: acc.value(),
        method: LMethod::DirectSeries,
        truncation_error: tail,
    })
}

/// Central value L(1/2, chi_D) for a fundamental discriminant by the smoothed
/// approximate functional equation
/// L(1/2, chi_D) = 2 sum_m chi_D(m) m^{-1/2} Q(a, pi m^2/|D|),
/// a = 1/4 for D > 0 (even character), 3/4 for D < 0 (odd character); the
/// root number of a real primitive character is +1. Cost O(sqrt|D|).
pub fn central_value_afe(d: i64) -> Result<f64> {
    if d == 1 {
        return Ok(ZETA_HALF);
    }
    let q = d.unsigned_abs() as f64;
    let a = if d > 0 { 0.25 } else { 0.75 };
    // Q(a, x) < 1e-18 once x > 45.
    let m_max = (45.0 * q / std::f64::consts::PI).sqrt().ceil() as i64 + 2;
    let mut sum = 0.0;
    let mut comp = 0.0;
    for m in 1..=m_max {
        let c = chi(d, m);
        if c == 0.0 {
            continue;
        }
        let x = std::f64::consts::PI * (m * m) as f64 / q;
        let term = c / (m as f64).sqrt() * reg_gamma_q(a, x);
        // Kahan step
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    Ok(2.0 * sum)
}

/// zeta(s) with the Euler factor at 2 removed: zeta(s)(1 - 2^{-s}).
pub fn zeta_no2(s: Complex64) -> Complex64 {
    hurwitz_zeta(s, 1.0) * (Complex64::new(1.0, 0.0) - Complex64::new(2.0, 0.0).powc(-s))
}

/// Fundamental discriminant whose Kronecker character restricted to odd
/// arguments equals the Jacobi symbol (n0/.): n0 itself if n0 = 1 mod 4,
/// otherwise 4 n0.
pub fn fundamental_of_squarefree(n0: i64) -> i64 {
    if n0.rem_euclid(4) == 1 {
        n0
    } else {
        4 * n0
    }
}

/// The finite Euler product q(w,n) over odd primes dividing n1 (n = n0 n1^2,
/// n0 squarefree):
/// prod_p sum_{b=0..v} (1 - [b<v] chi_{n0}(p) p^{-w}) p^{-2b(w-1/2)}.
pub fn q_factor(w: Complex64, n: i64) -> Result<Complex64> {
    let dec = decompose(n)?;
    let mut prod = Complex64::new(1.0, 0.0);
    for (p, v) in factorize(dec.n1 as u64) {
        if p == 2 {
            continue;
        }
        let pf = p as f64;
        let chi_p = chi(dec.n0, p as i64);
        let mut total = Complex64::new(0.0, 0.0);
        for b in 0..=v {
            let num = if b < v {
                Complex64::new(1.0, 0.0) - chi_p * Complex64::new(pf, 0.0).powc(-w)
            } else {
                Complex64::new(1.0, 0.0)
            };
            total += num * Complex64::new(pf, 0.0).powc(-2.0 * (b as f64) * (w - 0.5));
        }
        prod *= total;
    }
    Ok(prod)
}

/// The closed geometric-sum form of [`q_factor`]:
/// prod_p [ (1 - p^{(1-2w)(v+1)})/(1 - p^{1-2w})
///          - chi_{n0}(p) p^{-w} (1 - p^{(1-2w)v})/(1 - p^{1-2w}) ].
pub fn q_factor_product(w: Complex64, n: i64) -> Result<Complex64> {
    let dec = decompose(n)?;
    let one = Complex64::new(1.0, 0.0);
    let mut prod = one;
    for (p, v) in factorize(dec.n1 as u64) {
        if p == 2 {
            continue;
        }
        let pf = Complex64::new(p as f64, 0.0);
        let chi_p = chi(dec.n0, p as i64);
        // Geometric sums written term-by-term: the ratio p^{1-2w} hits 1 at
        // w = 1/2, where the closed quotient form is 0/0.
        let x = pf.powc(one - 2.0 * w);
        let mut geom_full = Complex64::new(0.0, 0.0);
        let mut geom_trunc = Complex64::new(0.0, 0.0);
        let mut xp = one;
        for j in 0..=v {
            geom_full += xp;
            if j < v {
                geom_trunc += xp;
            }
            xp *= x;
        }
        prod *= geom_full - chi_p * pf.powc(-w) * geom_trunc;
    }
    Ok(prod)
}

/// L*(w,n) = q(w,n) L_2(w, chi_{n0}), the 2-factor-removed Dirichlet
/// L-function of the squarefree kernel character times the finite product.
pub fn l_star(w: Complex64, n: i64) -> Result<LValue> {
    let dec = decompose(n)?;
    let d = fundamental_of_squarefree(dec.n0);
    let base = dirichlet_l(w, d)?;
    let euler2 = Complex64::new(1.0, 0.0)
        - chi(d, 2) * Complex64::new(2.0, 0.0).powc(-w);
    let q = q_factor(w, n)?;
    Ok(LValue {
        s: w,
        label: n,
        value: q * base.value * euler2,
        method: LMethod::Factored,
        truncation_error: base.truncation_error * q.norm(),
    })
}

/// The two-adic factor r2(s,n) of the Theta0 generating series.
///
/// The printed case formulas carry two typographical slips in their powers of
/// two; the exponents below (4s in the leading terms, 6s - 3/2 in the
/// correction) are the ones under which the generating-series identity
/// verifies numerically to truncation level, and that identity is the
/// arbiter. The 4^r recursion is as printed.
pub fn r2(s: Complex64, n: i64) -> Result<Complex64> {
    if n == 0 {
        return Err(Error::Domain("r2 needs n != 0".into()));
    }
    let one_plus_i = Complex64::new(1.0, 1.0);
    let two = Complex64::new(2.0, 0.0);
    match n.rem_euclid(4) {
        2 | 3 => Ok(-one_plus_i * two.powc(-4.0 * s)),
        1 => {
            let sign = if ((n - 1) / 4).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
            Ok(one_plus_i * two.powc(-4.0 * s)
                + sign * one_plus_i * two.powc(-(6.0 * s - 1.5)))
        }
        _ => {
            // n = 4^r n4 with n4 != 0 mod 4
            let mut r = 0u32;
            let mut n4 = n;
            while n4 % 4 == 0 {
                r += 1;
                n4 /= 4;
            }
            let x = two.powc(Complex64::new(1.0, 0.0) - 2.0 * s);
            let x2 = x * x;
            let u_r = (x2.powf((r + 1) as f64) - x2) / (x2 - 1.0);
            Ok(one_plus_i / 4.0 * u_r
                + Complex64::new(4.0, 0.0).powc((r as f64) * (Complex64::new(1.0, 0.0) - 2.0 * s))
                    * r2(s, n4)?)
        }
    }
}

/// Zagier L-series by the factored route l^{1/2-s} T_l^{(D)}(s) L(s, chi_D);
/// exactly zero for n = 2,3 mod 4.
pub fn zagier_l(s: Complex64, n: i64) -> Result<LValue> {
    if n == 0 {
        return Err(Error::Domain("zagier_l needs n != 0".into()));
    }
    if n.rem_euclid(4) >= 2 {
        return Ok(LValue {
            s,
            label: n,
            value: Complex64::new(0.0, 0.0),
            method: LMethod::Factored,
            truncation_error: 0.0,
        });
    }
    let dec = decompose(n)?;
    let l_val = dirichlet_l(s, dec.d)?;
    let t = t_factor(s, dec.d, dec.l);
    let scale = Complex64::new(dec.l as f64, 0.0).powc(Complex64::new(0.5, 0.0) - s);
    Ok(LValue {
        s,
        label: n,
        value: scale * t * l_val.value,
        method: LMethod::Factored,
        truncation_error: l_val.truncation_error * (t.norm() + 1.0),
    })
}

/// T_l^{(D)}(s) = sum_{l1 l2 = l} chi_D(l1) mu(l1) l1^{-1/2} tau_{s-1/2}(l2).
fn t_factor(s: Complex64, d: i64, l: i64) -> Complex64 {
    let nu = s - Complex64::new(0.5, 0.0);
    let mut total = Complex64::new(0.0, 0.0);
    for l1 in divisors(l as u64) {
        let mu = crate::arith::mobius(l1);
        if mu == 0 {
            continue;
        }
        let l2 = l as u64 / l1;
        total += chi(d, l1 as i64) * mu as f64 / (l1 as f64).sqrt() * tau_nu(nu, l2);
    }
    total
}

/// Zagier L-series by the direct lambda_q series (absolute convergence
/// region Re s >= 2 in practice), with a heuristic divisor-bound tail.
pub fn zagier_l_series(s: Complex64, n: i64, q_max: u64) -> Result<LValue> {
    if s.re < 1.5 {
        return Err(Error::Domain(format!(
            "zagier_l_series requires Re s >= 1.5, got {}",
            s.re
        )));
    }
    let mut acc = KahanComplex::new();
    let mut last_block = 0.0f64;
    let block_lo = q_max / 2;
    for q in 1..=q_max {
        let lam = lambda_q(q as i64, n)?;
        if lam != 0 {
            let term = lam as f64 * Complex64::new(q as f64, 0.0).powc(-s);
            acc.add(term);
            if q > block_lo {
                last_block += term.norm();
            }
        }
    }
    // Heuristic: treat the final dyadic block as the scale of the geometric
    // tail, with an analytic floor from |lambda_q| << d3(q) sqrt(q)-free bound.
    let sigma = s.re;
    let floor = (q_max as f64).powf(1.0 - sigma) / (sigma - 1.0)
        * (q_max as f64).ln().powi(2);
    let tail = (2.0 * last_block).max(floor);
    Ok(LValue {
        s,
        label: n,
        value: acc.value(),
        method: LMethod::DirectSeries,
        truncation_error: tail,
    })
}

/// Central value of the Zagier L-series (s = 1/2), using the O(sqrt D) AFE
/// for the Dirichlet factor: ℒ_n(1/2) = T_l^{(D)}(1/2) L(1/2, chi_D).
pub fn zagier_central(n: i64) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("zagier_central needs n != 0".into()));
    }
    if n.rem_euclid(4) >= 2 {
        return Ok(0.0);
    }
    let dec = decompose(n)?;
    let l_val = central_value_afe(dec.d)?;
    let t = t_factor(Complex64::new(0.5, 0.0), dec.d, dec.l);
    Ok(t.re * l_val)
}

/// Residual report for one generating-series identity check.
#[derive(Debug, Clone, Copy)]
pub struct ResidualReport {
    pub s: Complex64,
    pub n: i64,
    pub c_max: i64,
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub residual: f64,
    pub tail_estimate: f64,
}

fn identity_rhs(s: Complex64, n: i64) -> Result<Complex64> {
    let w = 2.0 * s - 0.5;
    let ls = l_star(w, n)?;
    Ok(ls.value / zeta_no2(4.0 * s - 1.0))
}

/// Partial sums of theta values / c^{2s} over a fixed arithmetic progression
/// of c, for several exponents s at once:
/// the theta values (the expensive part) are computed once per c —
/// parallelized with an ordered deterministic reduction — and reused for
/// every s.
fn theta_dirichlet_sum_multi<F>(
    cs: Vec<i64>,
    n: i64,
    ss: &[Complex64],
    eval: F,
) -> Result<Vec<(Complex64, f64)>>
where
    F: Fn(i64, i64) -> Result<Complex64> + Sync,
{
    let values: Result<Vec<(i64, Complex64)>> =
        cs.par_iter().map(|&c| Ok((c, eval(c, n)?))).collect();
    let values = values?;
    let c_max = values.last().map(|&(c, _)| c).unwrap_or(1);
    let mut out = Vec::with_capacity(ss.len());
    for &s in ss {
        let mut acc = KahanComplex::new();
        let mut last_block = 0.0;
        for &(c, v) in &values {
            let t = v * Complex64::new(c as f64, 0.0).powc(-2.0 * s);
            acc.add(t);
            if c > c_max / 2 {
                last_block += t.norm();
            }
        }
        out.push((acc.value(), last_block));
    }
    Ok(out)
}

fn identity_tail(s: Complex64, c_max: i64, last_block: f64) -> f64 {
    // |Theta(c,n)| is O(c^{1/2+eps}) on average, so the tail of
    // sum Theta/c^{2s} is of order C^{3/2-2 sigma}; take the max of that
    // analytic floor and twice the observed final dyadic block.
    let sigma = s.re;
    let floor = (c_max as f64).powf(1.5 - 2.0 * sigma) / (2.0 * sigma - 1.5);
    (2.0 * last_block).max(floor)
}

/// Check sum over odd c of Theta1(c,n)/c^{2s} against
/// L*(2s-1/2,n)/zeta_2(4s-1).
pub fn series_identity_theta1(s: Complex64, n: i64, c_max: i64) -> Result<ResidualReport> {
    Ok(series_identity_theta1_multi(&[s], n, c_max)?.pop().expect("one s"))
}

/// [`series_identity_theta1`] for several s sharing one pass of theta sums.
pub fn series_identity_theta1_multi(
    ss: &[Complex64],
    n: i64,
    c_max: i64,
) -> Result<Vec<ResidualReport>> {
    if ss.iter().any(|s| s.re <= 1.0) {
        return Err(Error::Domain("series_identity_theta1 needs Re s > 1".into()));
    }
    let cs: Vec<i64> = (1..=c_max).step_by(2).collect();
    let sums = theta_dirichlet_sum_multi(cs, n, ss, |c, n| Ok(theta1(c, n)?.value))?;
    ss.iter()
        .zip(sums)
        .map(|(&s, (lhs, last_block))| {
            let rhs = identity_rhs(s, n)?;
            Ok(ResidualReport {
                s,
                n,
                c_max,
                lhs,
                rhs,
                residual: (lhs - rhs).norm(),
                tail_estimate: identity_tail(s, c_max, last_block),
            })
        })
        .collect()
}

/// Check sum over c = 0 mod 4 of Theta0(c,n)/c^{2s} against
/// L*(2s-1/2,n)/zeta_2(4s-1) times conj(r2(conj(s),n)).
pub fn series_identity_theta0(s: Complex64, n: i64, c_max: i64) -> Result<ResidualReport> {
    Ok(series_identity_theta0_multi(&[s], n, c_max)?.pop().expect("one s"))
}

/// [`series_identity_theta0`] for several s sharing one pass of theta sums.
pub fn series_identity_theta0_multi(
    ss: &[Complex64],
    n: i64,
    c_max: i64,
) -> Result<Vec<ResidualReport>> {
    if ss.iter().any(|s| s.re <= 1.0) {
        return Err(Error::Domain("series_identity_theta0 needs Re s > 1".into()));
    }
    let cs: Vec<i64> = (4..=c_max).step_by(4).collect();
    let sums = theta_dirichlet_sum_multi(cs, n, ss, |c, n| Ok(theta0(c, n)?.value))?;
    ss.iter()
        .zip(sums)
        .map(|(&s, (lhs, last_block))| {
            let rhs = identity_rhs(s, n)? * r2(s.conj(), n)?.conj();
            Ok(ResidualReport {
                s,
                n,
                c_max,
                lhs,
                rhs,
                residual: (lhs - rhs).norm(),
                tail_estimate: identity_tail(s, c_max, last_block),
            })
        })
        .collect()
}

/// One dyadic checkpoint of the large-sieve scan.
#[derive(Debug, Clone, Copy)]
pub struct SieveCheckpoint {
    pub n_limit: i64,
    pub cumulative: f64,
}

/// Scan result: cumulative sums of |ℒ_n(1/2+it)|^2 at dyadic checkpoints and
/// the fitted log-log slope over the checkpoints.
#[derive(Debug, Clone)]
pub struct LargeSieveScan {
    pub t: f64,
    pub checkpoints: Vec<SieveCheckpoint>,
    pub slope: f64,
}

/// Cumulative second moment of Zagier central values: sum_{n<=N'}
/// |ℒ_n(1/2+it)|^2 at N' in {2^6, 2^7, ..., n_max}, with log-log slope fit.
/// t = 0 uses the fast AFE route; other t go through the Hurwitz route.
pub fn large_sieve_scan(n_max: i64, t: f64) -> Result<LargeSieveScan> {
    if n_max < 128 || n_max > (1 << 16) {
        return Err(Error::Domain(format!(
            "large_sieve_scan: n_max = {n_max} outside [128, 65536]"
        )));
    }
    let values: Result<Vec<f64>> = (1..=n_max)
        .into_par_iter()
        .map(|n| {
            if n.rem_euclid(4) >= 2 {
                return Ok(0.0);
            }
            if t == 0.0 {
                Ok(zagier_central(n)?.powi(2))
            } else {
                Ok(zagier_l(Complex64::new(0.5, t), n)?.value.norm_sqr())
            }
        })
        .collect();
    let values = values?;
    let mut checkpoints = Vec::new();
    let mut cum = 0.0;
    let mut comp = 0.0;
    let mut next_mark = 64i64;
    for (i, v) in values.iter().enumerate() {
        let y = v - comp;
        let s = cum + y;
        comp = (s - cum) - y;
        cum = s;
        let n = i as i64 + 1;
        if n == next_mark || n == n_max {
            checkpoints.push(SieveCheckpoint {
                n_limit: n,
                cumulative: cum,
            });
            if n == next_mark {
                next_mark *= 2;
            }
        }
    }
    checkpoints.dedup_by_key(|c| c.n_limit);
    // Least-squares slope of log cum vs log N over the checkpoints.
    let pts: Vec<(f64, f64)> = checkpoints
        .iter()
        .filter(|c| c.cumulative > 0.0)
        .map(|c| ((c.n_limit as f64).ln(), c.cumulative.ln()))
        .collect();
    let m = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    let slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    Ok(LargeSieveScan {
        t,
        checkpoints,
        slope,
    })
}
