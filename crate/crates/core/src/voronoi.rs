//! Half-integral-weight Voronoi summation: smooth compactly supported test
//! functions, the oscillatory (J0 - Y0) and exponential K0 kernels, the
//! integral transforms, the logarithmic main term, the coefficients a_n, and
//! residual verification of the three summation identities (c = 0 mod 4,
//! c odd, c = 2 mod 4).
//!
//! Conventions that the identity checks pin down numerically:
//! - the oscillatory kernel is sqrt(x/2)(J0 - Y0)(2 sqrt x) (the sign of the
//!   J0 term is fixed by the c = 2 main-term-free identity),
//! - the main term is the two-functional form
//!   R(X) = sqrt(pi)/(Gamma(3/4) X) * int phi(x) x^{-1/2}
//!          [log x / 2 + kappa - log X] dx
//!   with kappa = 2 gamma + 2 log 2 - zeta'(1/2)/zeta(1/2).

use crate::arith::{epsilon_d, gcd, mod_inverse, symbol_shimura};
use crate::lseries::zagier_central;
use crate::quad::{gl24, integrate, integrate_complex, QuadratureReport};
use crate::special::{
    j0_minus_y0, k0, EULER_GAMMA, GAMMA_QUARTER, GAMMA_THREE_QUARTER, ZETA_LOG_DERIV_HALF,
};
use crate::theta::{e_of, KahanComplex};
use crate::{Complex64, Error, Result};
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

/// kappa = 2 gamma + 2 log 2 - zeta'(1/2)/zeta(1/2), the constant in the
/// logarithmic main-term functional.
pub const MAIN_TERM_KAPPA: f64 =
    2.0 * EULER_GAMMA + 2.0 * std::f64::consts::LN_2 - ZETA_LOG_DERIV_HALF;

/// A smooth test function with compact support in (0, inf): evaluator,
/// finite-difference derivatives, and numerical Mellin transform.
#[derive(Clone)]
pub struct TestFunction {
    pub lo: f64,
    pub hi: f64,
    eval: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl std::fmt::Debug for TestFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "TestFunction[{}, {}]", self.lo, self.hi)
    }
}

fn bump_profile(u: f64) -> f64 {
    if u.abs() < 1.0 {
        (-1.0 / (1.0 - u * u)).exp()
    } else {
        0.0
    }
}

/// One-sided smooth step: 0 for t <= 0, 1 for t >= 1, C-infinity.
fn smooth_step(t: f64) -> f64 {
    let b = |t: f64| if t > 0.0 { (-1.0 / t).exp() } else { 0.0 };
    let num = b(t);
    let den = num + b(1.0 - t);
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

impl TestFunction {
    /// The standard bump exp(-1/(1-u^2)) on [lo, hi], u the affine map of x
    /// onto [-1, 1]; identically zero outside, all derivatives vanish at the
    /// endpoints.
    pub fn bump(lo: f64, hi: f64) -> Self {
        assert!(0.0 < lo && lo < hi, "bump needs 0 < lo < hi");
        TestFunction {
            lo,
            hi,
            eval: Arc::new(move |x| bump_profile((2.0 * x - (lo + hi)) / (hi - lo))),
        }
    }

    /// A plateau cutoff: 0 outside [lo, hi], identically 1 on
    /// [flat_lo, flat_hi], smooth monotone shoulders between.
    pub fn plateau(lo: f64, flat_lo: f64, flat_hi: f64, hi: f64) -> Self {
        assert!(0.0 < lo && lo < flat_lo && flat_lo < flat_hi && flat_hi < hi);
        TestFunction {
            lo,
            hi,
            eval: Arc::new(move |x| {
                smooth_step((x - lo) / (flat_lo - lo)) * smooth_step((hi - x) / (hi - flat_hi))
            }),
        }
    }

    /// Wrap an arbitrary smooth closure supported on [lo, hi]. The caller is
    /// responsible for the closure vanishing (with derivatives) at the
    /// endpoints.
    pub fn from_closure(lo: f64, hi: f64, eval: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        assert!(0.0 < lo && lo < hi, "from_closure needs 0 < lo < hi");
        TestFunction { lo, hi, eval: Arc::new(eval) }
    }

    /// alpha * f + beta * g (support hull of the two supports).
    pub fn linear_combination(alpha: f64, f: &TestFunction, beta: f64, g: &TestFunction) -> Self {
        let (f, g) = (f.clone(), g.clone());
        TestFunction {
            lo: f.lo.min(g.lo),
            hi: f.hi.max(g.hi),
            eval: Arc::new(move |x| alpha * f.value(x) + beta * g.value(x)),
        }
    }

    pub fn value(&self, x: f64) -> f64 {
        (self.eval)(x)
    }

    /// k-th derivative (k <= 8) by the central binomial stencil of spacing
    /// scaled to the support; accuracy ~1e-5 relative, which is all the
    /// envelope checks need.
    pub fn derivative(&self, k: u32, x: f64) -> f64 {
        assert!(k <= 8, "derivative order limited to 8");
        if k == 0 {
            return self.value(x);
        }
        let h = (self.hi - self.lo) / 2000.0 * (1 << k.min(4)) as f64;
        let mut acc = 0.0;
        for i in 0..=k {
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            let binom = (0..i).fold(1.0, |p, j| p * (k - j) as f64 / (j + 1) as f64);
            acc += sign * binom * self.value(x + (k as f64 / 2.0 - i as f64) * h);
        }
        acc / h.powi(k as i32)
    }

    /// Mellin transform integral of phi(x) x^{s-1} over the support.
    pub fn mellin(&self, s: Complex64) -> Result<Complex64> {
        let me = self.clone();
        let (v, _) = integrate_complex(
            move |x| me.value(x) * Complex64::new(x, 0.0).powc(s - 1.0),
            self.lo,
            self.hi,
            1e-12,
        )?;
        Ok(v)
    }
}

/// Oscillatory kernel sqrt(x/2) (J0 - Y0)(2 sqrt x).
pub fn kernel_pp(x: f64) -> f64 {
    assert!(x > 0.0, "kernel_pp needs x > 0");
    (x / 2.0).sqrt() * j0_minus_y0(2.0 * x.sqrt())
}

/// Exponentially decaying kernel 2 sqrt(x) K0(2 sqrt x) / Gamma(3/4)^2.
pub fn kernel_mp(x: f64) -> f64 {
    assert!(x > 0.0, "kernel_mp needs x > 0");
    let u = 2.0 * x.sqrt();
    2.0 * x.sqrt() * k0(u) / (GAMMA_THREE_QUARTER * GAMMA_THREE_QUARTER)
}

// Fixed quadrature grid over the support with the weight phi(x)/x folded in.
struct TransformGrid {
    xs: Vec<f64>,
    w: Vec<f64>,
}

impl TransformGrid {
    fn build(phi: &TestFunction, panels: usize) -> Self {
        let rule = gl24();
        let h = (phi.hi - phi.lo) / panels as f64;
        let mut xs = Vec::with_capacity(panels * rule.len());
        let mut w = Vec::with_capacity(panels * rule.len());
        for p in 0..panels {
            let c = phi.lo + (p as f64 + 0.5) * h;
            for &(t, wt) in rule {
                let x = c + 0.5 * h * t;
                xs.push(x);
                w.push(0.5 * h * wt * phi.value(x) / x);
            }
        }
        TransformGrid { xs, w }
    }

    // (1/sqrt 2) int phi(x)/x sqrt(xy) (J0 - Y0)(2 sqrt(xy)) dx
    fn jy(&self, y: f64) -> f64 {
        let mut acc = 0.0;
        for (&x, &w) in self.xs.iter().zip(&self.w) {
            let xy = x * y;
            acc += w * xy.sqrt() * j0_minus_y0(2.0 * xy.sqrt());
        }
        acc / std::f64::consts::SQRT_2
    }

    // int phi(x)/x 2 sqrt(xy) K0(2 sqrt(xy)) dx / Gamma(3/4)^2
    fn k(&self, y: f64) -> f64 {
        let mut acc = 0.0;
        for (&x, &w) in self.xs.iter().zip(&self.w) {
            let xy = x * y;
            let u = 2.0 * xy.sqrt();
            if u > 600.0 {
                continue;
            }
            acc += w * 2.0 * xy.sqrt() * k0(u);
        }
        acc / (GAMMA_THREE_QUARTER * GAMMA_THREE_QUARTER)
    }
}

// Panel count resolving the kernel oscillation (sqrt(hi) - sqrt(lo)) sqrt(y)
// / pi full periods over the support, ~4 panels per period.
fn panels_for(phi: &TestFunction, y: f64, refine: usize) -> usize {
    let osc = (phi.hi.sqrt() - phi.lo.sqrt()) * y.max(1.0).sqrt() / std::f64::consts::PI;
    ((osc * 4.0).ceil() as usize + 16) * refine
}

/// The integral transform of the summation formulas: positive y uses the
/// oscillatory kernel, negative y the K0 kernel. The error estimate is the
/// difference against a grid refined 2x.
pub fn phi_hat(phi: &TestFunction, y: f64, tol: f64) -> Result<QuadratureReport> {
    if y == 0.0 {
        return Err(Error::Domain("phi_hat needs y != 0".into()));
    }
    let ay = y.abs();
    let coarse = TransformGrid::build(phi, panels_for(phi, ay, 1));
    let fine = TransformGrid::build(phi, panels_for(phi, ay, 2));
    let (v1, v2) = if y > 0.0 {
        (coarse.jy(ay), fine.jy(ay))
    } else {
        (coarse.k(ay), fine.k(ay))
    };
    let err = (v1 - v2).abs();
    if err > tol.max(1e-14) {
        return Err(Error::Convergence(format!(
            "phi_hat({y:.3e}): refinement difference {err:.3e} exceeds {tol:.3e}"
        )));
    }
    Ok(QuadratureReport {
        value: v2,
        error: err,
        evaluations: coarse.xs.len() + fine.xs.len(),
    })
}

/// Logarithmic main term
/// R(X) = sqrt(pi)/(Gamma(3/4) X) int phi(x) x^{-1/2} [log x/2 + kappa - log X] dx.
pub fn main_term_r(phi: &TestFunction, x_arg: f64) -> Result<f64> {
    if x_arg <= 0.0 {
        return Err(Error::Domain("main_term_r needs X > 0".into()));
    }
    let p = phi.clone();
    let i0 = integrate(move |x| p.value(x) / x.sqrt(), phi.lo, phi.hi, 1e-12)?.value;
    let p = phi.clone();
    let i1 = integrate(move |x| p.value(x) / x.sqrt() * x.ln(), phi.lo, phi.hi, 1e-12)?.value;
    Ok(std::f64::consts::PI.sqrt() / (GAMMA_THREE_QUARTER * x_arg)
        * (0.5 * i1 + (MAIN_TERM_KAPPA - x_arg.ln()) * i0))
}

/// Voronoi coefficient a_n = Gamma(1/2 - sgn(n)/4) ℒ_n(1/2) / (2 sqrt(pi |n|)).
/// Values are memoized process-wide: identity checks at different moduli and
/// tolerances reuse the same central values.
pub fn a_coeff(n: i64) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("a_coeff needs n != 0".into()));
    }
    static CACHE: OnceLock<Mutex<HashMap<i64, f64>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(&v) = cache.lock().unwrap().get(&n) {
        return Ok(v);
    }
    let gamma_factor = if n > 0 { GAMMA_QUARTER } else { GAMMA_THREE_QUARTER };
    let v =
        gamma_factor * zagier_central(n)? / (2.0 * (std::f64::consts::PI * n.abs() as f64).sqrt());
    cache.lock().unwrap().insert(n, v);
    Ok(v)
}

/// Result of one summation-formula check.
#[derive(Debug, Clone, Copy)]
pub struct VoronoiReport {
    pub a: i64,
    pub c: i64,
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub main_term: Complex64,
    pub n_truncation: i64,
    pub residual: f64,
    pub tail_estimate: f64,
}

// Direct side: sum over integers in the support of phi(n) a_n e(an/c).
fn direct_side(phi: &TestFunction, a: i64, c: i64) -> Result<Complex64> {
    let mut acc = KahanComplex::new();
    let n_lo = phi.lo.ceil() as i64;
    let n_hi = phi.hi.floor() as i64;
    for n in n_lo..=n_hi {
        let w = phi.value(n as f64);
        if w != 0.0 {
            acc.add(w * a_coeff(n)? * e_of(a as f64 * n as f64 / c as f64));
        }
    }
    Ok(acc.value())
}

// One dual sum, evaluated simultaneously for a family of phase numerators:
// for each phase d the value is sum over n >= 1 of
//   a_{stride n} T(y_scale n) e(sign_j d n / modulus)
// + a_{-stride n} K(y_scale n) e(-sign_j d n / modulus).
// The transforms and coefficients do not depend on d, so the whole family
// shares one pass of quadrature work; only the phase accumulation is per-d.
// Truncation is adaptive: stop once three consecutive blocks are either below
// tol/10 in summed magnitude or below the quadrature noise floor term-wise.
// `refine` scales the quadrature grids for tightened-tolerance reruns.
struct DualSum {
    value: Complex64,
    n_truncation: i64,
    tail_estimate: f64,
}

fn dual_sum_batch(
    phi: &TestFunction,
    stride: i64,
    y_scale: f64,
    phase_nums: &[i64],
    modulus: i64,
    tol: f64,
    refine: usize,
) -> Result<Vec<DualSum>> {
    let mut accs: Vec<KahanComplex> = vec![KahanComplex::new(); phase_nums.len()];
    let mut n_done = 0i64;
    let mut small_blocks = 0;
    let mut block_lo = 1i64;
    let mut block_hi = 32i64;
    let mut last_blocks = 0.0f64;
    let max_n = 1 << 16;
    while small_blocks < 3 && block_lo < max_n {
        // Quadrature noise floor for the oscillatory transform: the integrand
        // has magnitude ~ y^{1/4}, so once the true transform sinks below
        // ~eps * y^{1/4} the computed terms are pure rounding noise and the
        // sum is converged regardless of how a block of them adds up.
        let noise_floor = 1e-13 * (y_scale * block_hi as f64).max(1.0).powf(0.25);
        // Shared grid sized for the largest argument in the block.
        let grid = TransformGrid::build(phi, panels_for(phi, y_scale * block_hi as f64, refine));
        let mut block_abs = 0.0;
        let mut block_max = 0.0f64;
        for n in block_lo..=block_hi {
            let y = y_scale * n as f64;
            let ap = a_coeff(stride * n)?;
            let tj = if ap != 0.0 { grid.jy(y) } else { 0.0 };
            let am = a_coeff(-stride * n)?;
            // the K0 side is numerically zero past argument ~ 45
            let tk = if am != 0.0 && 2.0 * (phi.lo * y).sqrt() < 45.0 {
                grid.k(y)
            } else {
                0.0
            };
            let (pos, neg) = (ap * tj, am * tk);
            if pos != 0.0 || neg != 0.0 {
                for (acc, &d) in accs.iter_mut().zip(phase_nums) {
                    let ph = e_of(d as f64 * n as f64 / modulus as f64);
                    acc.add(pos * ph + neg * ph.conj());
                }
            }
            let mag = pos.abs() + neg.abs();
            block_abs += mag;
            block_max = block_max.max(mag);
        }
        n_done = block_hi;
        if block_abs < tol / 10.0 || block_max < noise_floor {
            small_blocks += 1;
        } else {
            small_blocks = 0;
        }
        last_blocks = 0.5 * last_blocks + block_abs.min(10.0 * block_max);
        block_lo = block_hi + 1;
        // Grow geometrically at first, then advance in fixed blocks so the
        // shared quadrature grid (sized for the largest argument in the
        // block) is never wildly oversized for most of its terms.
        block_hi = block_lo - 1 + (block_lo - 1).min(512).max(32);
    }
    if small_blocks < 3 {
        return Err(Error::Convergence(format!(
            "dual sum not converged by n = {n_done} at tol {tol:.1e}"
        )));
    }
    let tail = last_blocks.max(tol / 10.0);
    Ok(accs
        .into_iter()
        .map(|acc| DualSum {
            value: acc.value(),
            n_truncation: n_done,
            tail_estimate: tail,
        })
        .collect())
}

fn check_coprime(a: i64, c: i64) -> Result<()> {
    if c <= 0 {
        return Err(Error::Domain(format!("modulus c = {c} must be positive")));
    }
    if gcd(a, c) != 1 {
        return Err(Error::Domain(format!("need (a, c) = 1, got a = {a}, c = {c}")));
    }
    Ok(())
}

fn refine_of(tol: f64) -> usize {
    // Tightening the tolerance below the default 1e-6 budget upgrades the
    // quadrature grids as well as the truncation depth.
    if tol < 5e-7 {
        2
    } else {
        1
    }
}

fn reduced_residues(c: i64) -> Vec<i64> {
    if c == 1 {
        vec![1]
    } else {
        (1..c).filter(|&a| gcd(a, c) == 1).collect()
    }
}

fn c0mod4_multi(phi: &TestFunction, aa: &[i64], c: i64, tol: f64) -> Result<Vec<VoronoiReport>> {
    if c % 4 != 0 || c <= 0 {
        return Err(Error::Domain(format!("c = {c} is not positive, 0 mod 4")));
    }
    let main = main_term_r(phi, c as f64)?;
    let mut phases = Vec::with_capacity(aa.len());
    let mut prefactors = Vec::with_capacity(aa.len());
    for &a in aa {
        check_coprime(a, c)?;
        let d = mod_inverse(a, c).expect("coprime");
        let theta = epsilon_d(d)?.conj() * symbol_shimura(c, d)? as f64;
        prefactors.push(theta * e_of(0.125));
        phases.push((-d).rem_euclid(c));
    }
    let duals = dual_sum_batch(
        phi,
        1,
        4.0 * std::f64::consts::PI.powi(2) / (c * c) as f64,
        &phases,
        c,
        tol,
        refine_of(tol),
    )?;
    aa.iter()
        .zip(prefactors)
        .zip(duals)
        .map(|((&a, prefactor), dual)| {
            let lhs = direct_side(phi, a, c)?;
            let rhs = prefactor * (main + dual.value);
            Ok(VoronoiReport {
                a,
                c,
                lhs,
                rhs,
                main_term: prefactor * main,
                n_truncation: dual.n_truncation,
                residual: (lhs - rhs).norm(),
                tail_estimate: dual.tail_estimate,
            })
        })
        .collect()
}

/// Summation formula for c = 0 mod 4: with d the inverse of a mod c and
/// multiplier theta = conj(eps_d)(c/d),
/// sum phi(n) a_n e(an/c) = theta e(1/8) [ R(c) + dual sum at 4 pi^2 n/c^2
/// with phases e(-dn/c) ].
pub fn voronoi_check_c0mod4(
    phi: &TestFunction,
    a: i64,
    c: i64,
    tol: f64,
) -> Result<VoronoiReport> {
    Ok(c0mod4_multi(phi, &[a], c, tol)?.pop().expect("one report"))
}

/// [`voronoi_check_c0mod4`] for every reduced residue a mod c, sharing one
/// pass of transform quadrature across the whole family.
pub fn voronoi_check_c0mod4_all(
    phi: &TestFunction,
    c: i64,
    tol: f64,
) -> Result<Vec<VoronoiReport>> {
    c0mod4_multi(phi, &reduced_residues(c), c, tol)
}

fn codd_multi(phi: &TestFunction, aa: &[i64], c: i64, tol: f64) -> Result<Vec<VoronoiReport>> {
    if c <= 0 || c % 2 == 0 {
        return Err(Error::Domain(format!("c = {c} is not positive odd")));
    }
    let main = main_term_r(phi, 4.0 * c as f64)?;
    let mut phases = Vec::with_capacity(aa.len());
    let mut prefactors = Vec::with_capacity(aa.len());
    for &a in aa {
        check_coprime(a, c)?;
        let (d, theta) = if c == 1 {
            (0, Complex64::new(1.0, 0.0))
        } else {
            let d = (c - mod_inverse(4 * a % c, c).expect("coprime")) % c;
            (
                d,
                epsilon_d(c)?.conj() * symbol_shimura(4 * d % c, c)? as f64,
            )
        };
        phases.push(d);
        prefactors.push(theta * std::f64::consts::SQRT_2);
    }
    let duals = dual_sum_batch(
        phi,
        4,
        std::f64::consts::PI.powi(2) / (c * c) as f64,
        &phases,
        c,
        tol,
        refine_of(tol),
    )?;
    aa.iter()
        .zip(prefactors)
        .zip(duals)
        .map(|((&a, prefactor), dual)| {
            let lhs = direct_side(phi, a, c)?;
            let rhs = prefactor * (main + dual.value);
            Ok(VoronoiReport {
                a,
                c,
                lhs,
                rhs,
                main_term: prefactor * main,
                n_truncation: dual.n_truncation,
                residual: (lhs - rhs).norm(),
                tail_estimate: dual.tail_estimate,
            })
        })
        .collect()
}

/// Summation formula for odd c: with d solving 4ad = -1 mod c and multiplier
/// theta = conj(eps_c)(4d/c) (theta = 1 when c = 1),
/// sum phi(n) a_n e(an/c) = theta sqrt 2 [ R(4c) + dual sum of a_{4n} at
/// pi^2 n/c^2 with phases e(dn/c) ].
pub fn voronoi_check_codd(
    phi: &TestFunction,
    a: i64,
    c: i64,
    tol: f64,
) -> Result<VoronoiReport> {
    Ok(codd_multi(phi, &[a], c, tol)?.pop().expect("one report"))
}

/// [`voronoi_check_codd`] for every reduced residue a mod c, sharing one pass
/// of transform quadrature across the whole family.
pub fn voronoi_check_codd_all(
    phi: &TestFunction,
    c: i64,
    tol: f64,
) -> Result<Vec<VoronoiReport>> {
    codd_multi(phi, &reduced_residues(c), c, tol)
}

fn c2mod4_multi(phi: &TestFunction, aa: &[i64], c: i64, tol: f64) -> Result<Vec<VoronoiReport>> {
    if c <= 0 || c.rem_euclid(4) != 2 {
        return Err(Error::Domain(format!("c = {c} is not positive, 2 mod 4")));
    }
    let c1 = c / 2;
    let mut phases4 = Vec::with_capacity(aa.len());
    let mut phases5 = Vec::with_capacity(aa.len());
    let mut mult4 = Vec::with_capacity(aa.len());
    let mut mult5 = Vec::with_capacity(aa.len());
    for &a in aa {
        check_coprime(a, c)?;
        let (d4, d5, theta4_inv, theta5) = if c1 == 1 {
            (0, 0, Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0))
        } else {
            let d4 = (c1 - mod_inverse(8 * a % c1, c1).expect("coprime")) % c1;
            let d5 = (c1 - mod_inverse(2 * a % c1, c1).expect("coprime")) % c1;
            (
                d4,
                d5,
                epsilon_d(c1)? * symbol_shimura(8 * a % c1, c1)? as f64,
                epsilon_d(c1)?.conj() * symbol_shimura(4 * d5 % c1, c1)? as f64,
            )
        };
        phases4.push(d4);
        phases5.push(d5);
        mult4.push(theta4_inv);
        mult5.push(theta5);
    }
    let main = main_term_r(phi, 4.0 * c1 as f64)?;
    let pi2 = std::f64::consts::PI.powi(2);
    let refine = refine_of(tol);
    let duals1 = dual_sum_batch(phi, 1, pi2 / (4 * c1 * c1) as f64, &phases4, c1, tol, refine)?;
    let duals2 = dual_sum_batch(phi, 4, pi2 / (c1 * c1) as f64, &phases5, c1, tol, refine)?;
    let sqrt2 = std::f64::consts::SQRT_2;
    let mut out = Vec::with_capacity(aa.len());
    for (i, &a) in aa.iter().enumerate() {
        let lhs = direct_side(phi, a, c)?;
        let rhs = sqrt2 * mult4[i] * (main + duals1[i].value)
            - sqrt2 * mult5[i] * (main + duals2[i].value);
        out.push(VoronoiReport {
            a,
            c,
            lhs,
            rhs,
            main_term: sqrt2 * (mult4[i] - mult5[i]) * main,
            n_truncation: duals1[i].n_truncation.max(duals2[i].n_truncation),
            residual: (lhs - rhs).norm(),
            tail_estimate: duals1[i].tail_estimate + duals2[i].tail_estimate,
        });
    }
    Ok(out)
}

/// Summation formula for c = 2 mod 4, c1 = c/2: two main terms and two dual
/// sums, with d4 solving 8 a d4 = -1 mod c1, d5 solving 2 a d5 = -1 mod c1,
/// inverse multiplier eps_{c1}(8a/c1) on the first branch and
/// conj(eps_{c1})(4 d5/c1) on the second.
pub fn voronoi_check_c2mod4(
    phi: &TestFunction,
    a: i64,
    c: i64,
    tol: f64,
) -> Result<VoronoiReport> {
    Ok(c2mod4_multi(phi, &[a], c, tol)?.pop().expect("one report"))
}

/// [`voronoi_check_c2mod4`] for every reduced residue a mod c, sharing the
/// transform quadrature of both dual sums across the whole family.
pub fn voronoi_check_c2mod4_all(
    phi: &TestFunction,
    c: i64,
    tol: f64,
) -> Result<Vec<VoronoiReport>> {
    c2mod4_multi(phi, &reduced_residues(c), c, tol)
}

/// Dispatch on the residue class of c.
pub fn voronoi_check(phi: &TestFunction, a: i64, c: i64, tol: f64) -> Result<VoronoiReport> {
    match c.rem_euclid(4) {
        0 => voronoi_check_c0mod4(phi, a, c, tol),
        2 => voronoi_check_c2mod4(phi, a, c, tol),
        _ => voronoi_check_codd(phi, a, c, tol),
    }
}

/// Dispatch on the residue class of c, all reduced residues a.
pub fn voronoi_check_all(phi: &TestFunction, c: i64, tol: f64) -> Result<Vec<VoronoiReport>> {
    match c.rem_euclid(4) {
        0 => voronoi_check_c0mod4_all(phi, c, tol),
        2 => voronoi_check_c2mod4_all(phi, c, tol),
        _ => voronoi_check_codd_all(phi, c, tol),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theta::theta0;

    #[test]
    fn test_function_basics() {
        let phi = TestFunction::bump(1.0, 3.0);
        assert_eq!(phi.value(0.9), 0.0);
        assert_eq!(phi.value(3.1), 0.0);
        assert!((phi.value(2.0) - (-1.0f64).exp()).abs() < 1e-15);
        // derivative sign changes across the peak
        assert!(phi.derivative(1, 1.5) > 0.0);
        assert!(phi.derivative(1, 2.5) < 0.0);
        // identically zero outside the support, stencil included
        for k in 1..=4 {
            assert_eq!(phi.derivative(k, 0.9), 0.0, "k={k}");
        }
        // concave at the peak
        assert!(phi.derivative(2, 2.0) < 0.0);
        let u = TestFunction::plateau(1.0, 1.2, 1.8, 2.0);
        assert_eq!(u.value(1.5), 1.0);
        assert_eq!(u.value(0.99), 0.0);
        assert!(u.value(1.1) > 0.0 && u.value(1.1) < 1.0);
    }

    #[test]
    fn mellin_against_direct_quadrature() {
        let phi = TestFunction::bump(1.0, 2.0);
        let m = phi.mellin(Complex64::new(0.5, 0.0)).unwrap();
        let direct = integrate(
            |x| bump_profile((2.0 * x - 3.0) / 1.0) / x.sqrt(),
            1.0,
            2.0,
            1e-12,
        )
        .unwrap();
        assert!((m.re - direct.value).abs() < 1e-11);
        assert!(m.im.abs() < 1e-13);
    }

    #[test]
    fn kernel_shapes() {
        // K0 kernel positive, and matching its definition at x = 1
        assert!(kernel_mp(0.5) > 0.0);
        let expect = 2.0 * k0(2.0) / (GAMMA_THREE_QUARTER * GAMMA_THREE_QUARTER);
        assert!((kernel_mp(1.0) - expect).abs() < 1e-14);
        // oscillatory kernel changes sign on [1, 100]
        let signs: Vec<bool> = (1..=400).map(|i| kernel_pp(i as f64 * 0.25) > 0.0).collect();
        assert!(signs.windows(2).any(|w| w[0] != w[1]));
    }

    #[test]
    fn phi_hat_sign_decay_linearity() {
        let phi = TestFunction::bump(1.0, 2.0);
        // negative argument: positive kernel, positive integrand
        let v1 = phi_hat(&phi, -1.0, 1e-9).unwrap().value;
        assert!(v1 > 0.0);
        let v100 = phi_hat(&phi, -100.0, 1e-12).unwrap().value;
        assert!(v1 / v100.abs() > 1e3, "{v1} vs {v100}");
        // linearity
        let psi = TestFunction::bump(1.5, 2.5);
        let comb = TestFunction::linear_combination(2.0, &phi, -0.5, &psi);
        let lhs = phi_hat(&comb, 7.0, 1e-10).unwrap().value;
        let rhs = 2.0 * phi_hat(&phi, 7.0, 1e-10).unwrap().value
            - 0.5 * phi_hat(&psi, 7.0, 1e-10).unwrap().value;
        assert!((lhs - rhs).abs() < 1e-10);
    }

    #[test]
    fn phi_hat_log_log_decay_slope() {
        let phi = TestFunction::bump(1.0, 2.0);
        let y_vals = [10.0, 100.0, 1000.0];
        let v: Vec<f64> = y_vals
            .iter()
            .map(|&y| phi_hat(&phi, -y, 1e-13).unwrap().value.abs().max(1e-300))
            .collect();
        let slope = (v[2].ln() - v[0].ln()) / (y_vals[2].ln() - y_vals[0].ln());
        assert!(slope <= -3.0, "slope {slope}");
    }

    #[test]
    fn main_term_scaling() {
        let phi = TestFunction::bump(1.0, 2.0);
        let r1 = main_term_r(&phi, 3.0).unwrap();
        let r2 = main_term_r(&phi, 6.0).unwrap();
        // R(2X) - R(X)/2 = -sqrt(pi) log 2/(2 X Gamma(3/4)) * mellin(1/2)
        let m = phi.mellin(Complex64::new(0.5, 0.0)).unwrap().re;
        let expect = -std::f64::consts::PI.sqrt() * std::f64::consts::LN_2
            / (2.0 * 3.0 * GAMMA_THREE_QUARTER)
            * m;
        assert!(
            ((r2 - r1 / 2.0) - expect).abs() < 1e-11,
            "{} vs {expect}",
            r2 - r1 / 2.0
        );
    }

    #[test]
    fn a_coeff_structure() {
        assert_eq!(a_coeff(2).unwrap(), 0.0);
        assert_eq!(a_coeff(7).unwrap(), 0.0);
        let a1 = a_coeff(1).unwrap();
        let expect = GAMMA_QUARTER * zagier_central(1).unwrap()
            / (2.0 * std::f64::consts::PI.sqrt());
        assert!((a1 - expect).abs() < 1e-14);
        assert!(a_coeff(-3).unwrap() != 0.0);
    }

    #[test]
    fn voronoi_c0mod4_small_bump() {
        let phi = TestFunction::bump(1.0, 20.0);
        for a in [1i64, 3] {
            let r = voronoi_check_c0mod4(&phi, a, 4, 1e-6).unwrap();
            assert!(r.residual < 1e-6, "a={a}: residual {}", r.residual);
        }
    }

    #[test]
    fn voronoi_codd_small_bump() {
        let phi = TestFunction::bump(1.0, 20.0);
        for (a, c) in [(1i64, 1i64), (1, 3), (2, 5)] {
            let r = voronoi_check_codd(&phi, a, c, 1e-6).unwrap();
            assert!(r.residual < 1e-6, "a={a} c={c}: residual {}", r.residual);
        }
    }

    #[test]
    fn voronoi_c2mod4_small_bump() {
        let phi = TestFunction::bump(1.0, 20.0);
        for (a, c) in [(1i64, 2i64), (1, 6), (5, 6)] {
            let r = voronoi_check_c2mod4(&phi, a, c, 1e-6).unwrap();
            assert!(r.residual < 1e-6, "a={a} c={c}: residual {}", r.residual);
        }
    }

    #[test]
    fn conjugation_symmetry() {
        let phi = TestFunction::bump(1.0, 15.0);
        let r1 = voronoi_check_c0mod4(&phi, 1, 8, 1e-6).unwrap();
        let r2 = voronoi_check_c0mod4(&phi, 7, 8, 1e-6).unwrap();
        assert!((r1.lhs - r2.lhs.conj()).norm() < 1e-10);
        assert!((r1.rhs - r2.rhs.conj()).norm() < 2e-6);
    }

    #[test]
    fn theta_route_consistency() {
        // Summing the direct side over all reduced a equals the theta-sum
        // regrouping of the dual side: sum_a lhs(a,c) =
        // e(1/8)[R(c) Theta0(c,0) + sum_n phi_hat a_n Theta0(c,n)].
        let phi = TestFunction::bump(1.0, 15.0);
        for c in [4i64, 8] {
            let mut direct = Complex64::new(0.0, 0.0);
            for a in 1..c {
                if gcd(a, c) == 1 {
                    direct += direct_side(&phi, a, c).unwrap();
                }
            }
            let main = main_term_r(&phi, c as f64).unwrap();
            let mut dual = Complex64::new(main, 0.0) * theta0(c, 0).unwrap().value;
            let y_scale = 4.0 * std::f64::consts::PI.powi(2) / (c * c) as f64;
            // truncate both dual families at fixed physical arguments so the
            // tail is comparable across c (the oscillatory side decays only
            // polynomially)
            let n_max = (10_000.0 / y_scale).ceil() as i64;
            for n in 1..=n_max {
                let ap = a_coeff(n).unwrap();
                if ap != 0.0 {
                    dual += ap
                        * phi_hat(&phi, y_scale * n as f64, 1e-9).unwrap().value
                        * theta0(c, n).unwrap().value;
                }
                // carry the slowly-decaying negative-frequency side out to
                // a fixed physical argument |y| ~ 150 regardless of c
                if (y_scale * n as f64) <= 150.0 {
                    let am = a_coeff(-n).unwrap();
                    if am != 0.0 {
                        dual += am
                            * phi_hat(&phi, -y_scale * n as f64, 1e-9).unwrap().value
                            * theta0(c, -n).unwrap().value;
                    }
                }
            }
            let rhs = e_of(0.125) * dual;
            assert!(
                (direct - rhs).norm() < 1e-8 * (direct.norm().max(1.0)) + 1e-6,
                "c={c}: {direct} vs {rhs}"
            );
        }
    }
}
