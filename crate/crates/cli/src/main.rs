//! `zagierlab` — command-line front end for the numerical toolkit: every
//! verification and sweep is a subcommand emitting CSV (17 significant
//! digits, deterministic ordering).

use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use zagierlab_core::asymptotics::{
    dyadic_cutoff, saddle_phi_hat, v_weight, v_weight_leading, SaddleContext,
};
use zagierlab_core::lseries::{
    large_sieve_scan, q_factor, series_identity_theta0, series_identity_theta1, zagier_l,
};
use zagierlab_core::moment::{
    delta_identity_check, hecke_extend, ingest_spectral, moment_sum, zagier_side_sum,
    zagier_side_sum_direct, MomentConfig, SpectralDatum, ZagierVariant,
};
use zagierlab_core::theta::{theta, theta1, theta4, theta5, ThetaKind};
use zagierlab_core::voronoi::{voronoi_check, TestFunction};

#[derive(Parser)]
#[command(
    name = "zagierlab",
    about = "Numerical toolkit: theta sums, L-series, summation formulas, \
             oscillatory asymptotics, and moment experiments",
    version
)]
struct Cli {
    /// Optional config file of `key=value` lines supplying default flag
    /// values for the subcommand; explicit flags win.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Theta0,
    Theta1,
    Theta4,
    Theta5,
}

impl From<KindArg> for ThetaKind {
    fn from(k: KindArg) -> ThetaKind {
        match k {
            KindArg::Theta0 => ThetaKind::Theta0,
            KindArg::Theta1 => ThetaKind::Theta1,
            KindArg::Theta4 => ThetaKind::Theta4,
            KindArg::Theta5 => ThetaKind::Theta5,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum CaseArg {
    C0mod4,
    Codd,
    C2mod4,
}

#[derive(Clone, Copy, ValueEnum)]
enum WhichArg {
    Theta0,
    Theta1,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    #[value(name = "**")]
    StarStar,
    #[value(name = "*4")]
    Star4,
    #[value(name = "4*")]
    FourStar,
    #[value(name = "44")]
    Four4,
    #[value(name = "direct")]
    Direct,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the Jacobi symbol (a/m) for odd positive m.
    Jacobi {
        #[arg(long)]
        a: i64,
        #[arg(long)]
        m: i64,
    },
    /// Evaluate the quadratic L-series attached to a discriminant-like
    /// index n at a complex point s.
    ZagierL {
        #[arg(long, value_parser = parse_complex)]
        s: Complex64,
        #[arg(long)]
        n: i64,
    },
    /// Evaluate one twisted quadratic exponential sum, or a grid of them.
    Theta {
        #[arg(long, value_enum, required_unless_present = "grid")]
        kind: Option<KindArg>,
        #[arg(long, required_unless_present = "grid", allow_hyphen_values = true)]
        c: Option<i64>,
        #[arg(long, required_unless_present = "grid", allow_hyphen_values = true)]
        n: Option<i64>,
        /// Emit all four sums over 1 <= c <= cmax, |n| <= nmax.
        #[arg(long)]
        grid: bool,
        #[arg(long, default_value_t = 20)]
        cmax: i64,
        #[arg(long, default_value_t = 10)]
        nmax: i64,
    },
    /// Check one summation-formula identity; exit 0 when the residual is
    /// below the tolerance.
    VoronoiCheck {
        #[arg(long, value_enum)]
        case: CaseArg,
        #[arg(long, allow_hyphen_values = true)]
        a: i64,
        #[arg(long)]
        c: i64,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        /// Support of the bump test function [1, hi].
        #[arg(long, default_value_t = 300.0)]
        hi: f64,
    },
    /// Check a Dirichlet-series identity between a theta-sum series and its
    /// closed form; exit 0 when the residual is below 10x the tail estimate.
    SeriesIdentity {
        #[arg(long, value_enum)]
        which: WhichArg,
        #[arg(long, value_parser = parse_complex)]
        s: Complex64,
        #[arg(long)]
        n: i64,
        #[arg(long, default_value_t = 10_000)]
        cmax: i64,
    },
    /// Compare the saddle-point asymptotic of the resonance transform with
    /// direct quadrature over a sweep of frequency indices m.
    SaddleSweep {
        #[arg(long = "T")]
        t: f64,
        #[arg(long = "G", default_value_t = 1.0)]
        g: f64,
        #[arg(long)]
        c: i64,
        #[arg(long)]
        q: i64,
    },
    /// Evaluate the smoothing weight V(y, t) and its first-order model.
    VWeight {
        #[arg(long)]
        y: f64,
        #[arg(long)]
        t: f64,
    },
    /// Cumulative second moment of central L-series values at dyadic
    /// checkpoints with fitted log-log slope.
    LargeSieve {
        #[arg(long = "N")]
        n: i64,
        #[arg(long, default_value_t = 0.0)]
        t: f64,
    },
    /// Weighted second moment over an ingested spectral data file.
    Moment {
        #[arg(long)]
        data: PathBuf,
        #[arg(long = "T")]
        t: f64,
        #[arg(long = "G")]
        g: f64,
    },
    /// Arithmetic-side double sum over the congruence-class variant.
    ZagierSide {
        #[arg(long = "T")]
        t: f64,
        #[arg(long = "G")]
        g: f64,
        #[arg(long, value_enum, default_value = "**")]
        variant: VariantArg,
    },
    /// Run the full invariant suite; exit 0 only if every check passes.
    Selftest,
}

fn parse_complex(s: &str) -> Result<Complex64, String> {
    let s = s.trim();
    if let Ok(re) = s.parse::<f64>() {
        return Ok(Complex64::new(re, 0.0));
    }
    let body = s
        .strip_suffix('i')
        .ok_or_else(|| format!("`{s}` is not a real or a+bi complex literal"))?;
    // split the trailing imaginary part off at the last +/- that is not an
    // exponent sign and not the leading sign
    let bytes = body.as_bytes();
    let mut split = None;
    for idx in (1..bytes.len()).rev() {
        let b = bytes[idx];
        if (b == b'+' || b == b'-') && !matches!(bytes[idx - 1], b'e' | b'E') {
            split = Some(idx);
            break;
        }
    }
    match split {
        Some(idx) => {
            let re: f64 = body[..idx]
                .parse()
                .map_err(|e| format!("bad real part in `{s}`: {e}"))?;
            let im_str = &body[idx..];
            let im: f64 = if im_str == "+" {
                1.0
            } else if im_str == "-" {
                -1.0
            } else {
                im_str.parse().map_err(|e| format!("bad imaginary part in `{s}`: {e}"))?
            };
            Ok(Complex64::new(re, im))
        }
        None => {
            let im: f64 = if body.is_empty() || body == "+" {
                1.0
            } else if body == "-" {
                -1.0
            } else {
                body.parse().map_err(|e| format!("bad imaginary part in `{s}`: {e}"))?
            };
            Ok(Complex64::new(0.0, im))
        }
    }
}

/// 17-significant-digit formatting shared by every CSV emitter.
fn f(x: f64) -> String {
    format!("{x:.16e}")
}

fn run() -> Result<bool, String> {
    if let Ok(threads) = std::env::var("ZAGIERLAB_THREADS") {
        let n: usize = threads
            .parse()
            .map_err(|e| format!("ZAGIERLAB_THREADS = `{threads}` invalid: {e}"))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| format!("thread pool: {e}"))?;
    }
    let cli = Cli::parse_from(merge_config_args()?);
    let err = |e: zagierlab_core::Error| e.to_string();
    match cli.command {
        Command::Jacobi { a, m } => {
            let v = zagierlab_core::arith::jacobi_classical(a, m).map_err(err)?;
            println!("a,m,jacobi");
            println!("{a},{m},{v}");
            Ok(true)
        }
        Command::ZagierL { s, n } => {
            let lv = zagier_l(s, n).map_err(err)?;
            println!("s_re,s_im,n,value_re,value_im,method,truncation_error");
            println!(
                "{},{},{n},{},{},{},{}",
                f(s.re),
                f(s.im),
                f(lv.value.re),
                f(lv.value.im),
                lv.method,
                f(lv.truncation_error)
            );
            Ok(true)
        }
        Command::Theta { kind, c, n, grid, cmax, nmax } => {
            println!("kind,c,n,value_re,value_im");
            if grid {
                for c in 1..=cmax {
                    for n in -nmax..=nmax {
                        for kind in
                            [KindArg::Theta0, KindArg::Theta1, KindArg::Theta4, KindArg::Theta5]
                        {
                            match theta(kind.into(), c, n) {
                                Ok(tv) => println!(
                                    "{},{c},{n},{},{}",
                                    kind_name(kind),
                                    f(tv.value.re),
                                    f(tv.value.im)
                                ),
                                Err(zagierlab_core::Error::Domain(_)) => {}
                                Err(e) => return Err(e.to_string()),
                            }
                        }
                    }
                }
            } else {
                let (kind, c, n) = (kind.unwrap(), c.unwrap(), n.unwrap());
                let tv = theta(kind.into(), c, n).map_err(err)?;
                println!("{},{c},{n},{},{}", kind_name(kind), f(tv.value.re), f(tv.value.im));
            }
            Ok(true)
        }
        Command::VoronoiCheck { case, a, c, tol, hi } => {
            let expected = match c.rem_euclid(4) {
                0 => CaseArg::C0mod4,
                2 => CaseArg::C2mod4,
                _ => CaseArg::Codd,
            };
            if !matches!(
                (case, expected),
                (CaseArg::C0mod4, CaseArg::C0mod4)
                    | (CaseArg::Codd, CaseArg::Codd)
                    | (CaseArg::C2mod4, CaseArg::C2mod4)
            ) {
                return Err(format!("c = {c} is not in the residue class of the requested case"));
            }
            let phi = TestFunction::bump(1.0, hi);
            let rep = voronoi_check(&phi, a, c, tol).map_err(err)?;
            println!("case,a,c,tol,residual,tail_estimate,lhs_re,lhs_im,rhs_re,rhs_im");
            println!(
                "{},{a},{c},{},{},{},{},{},{},{}",
                case_name(case),
                f(tol),
                f(rep.residual),
                f(rep.tail_estimate),
                f(rep.lhs.re),
                f(rep.lhs.im),
                f(rep.rhs.re),
                f(rep.rhs.im)
            );
            Ok(rep.residual < tol)
        }
        Command::SeriesIdentity { which, s, n, cmax } => {
            let rep = match which {
                WhichArg::Theta0 => series_identity_theta0(s, n, cmax).map_err(err)?,
                WhichArg::Theta1 => series_identity_theta1(s, n, cmax).map_err(err)?,
            };
            println!("which,s_re,s_im,n,cmax,residual,tail_estimate");
            println!(
                "{},{},{},{n},{cmax},{},{}",
                match which {
                    WhichArg::Theta0 => "theta0",
                    WhichArg::Theta1 => "theta1",
                },
                f(s.re),
                f(s.im),
                f(rep.residual),
                f(rep.tail_estimate)
            );
            Ok(rep.residual < 10.0 * rep.tail_estimate)
        }
        Command::SaddleSweep { t, g, c, q } => {
            println!("T,G,c,q,m,asym_re,asym_im,quad_re,quad_im,abs_err,bound");
            let l = 2.0 * ((c * q) * (c * q)) as f64;
            // center the sweep where the stationary point sits mid-support
            let m_center = (2.0 * t * q as f64 * (c * c) as f64 / l).powi(2);
            let mut ok = true;
            let mut seen = HashSet::new();
            for factor in [0.7, 0.85, 1.0, 1.2, 1.4] {
                let m = (m_center * factor).round().max(1.0) as i64;
                if !seen.insert(m) {
                    continue;
                }
                let ctx = SaddleContext::new(t, g, c, q, l, m).map_err(err)?;
                let rep = saddle_phi_hat(&ctx, &dyadic_cutoff(), 3).map_err(err)?;
                let abs_err = (rep.asymptotic - rep.quadrature).norm();
                println!(
                    "{},{},{c},{q},{m},{},{},{},{},{},{}",
                    f(t),
                    f(g),
                    f(rep.asymptotic.re),
                    f(rep.asymptotic.im),
                    f(rep.quadrature.re),
                    f(rep.quadrature.im),
                    f(abs_err),
                    f(rep.error_bound)
                );
                ok &= abs_err <= rep.error_bound;
            }
            Ok(ok)
        }
        Command::VWeight { y, t } => {
            let v = v_weight(y, t, 0.7, 1, 1e-9).map_err(err)?;
            let lead = v_weight_leading(y, t, 0.7, 1, 1e-9).map_err(err)?;
            println!("y,t,value_re,value_im,leading_re,leading_im");
            println!(
                "{},{},{},{},{},{}",
                f(y),
                f(t),
                f(v.re),
                f(v.im),
                f(lead.re),
                f(lead.im)
            );
            Ok(true)
        }
        Command::LargeSieve { n, t } => {
            let scan = large_sieve_scan(n, t).map_err(err)?;
            println!("t,n_limit,cumulative,slope");
            for cp in &scan.checkpoints {
                println!("{},{},{},{}", f(t), cp.n_limit, f(cp.cumulative), f(scan.slope));
            }
            Ok(true)
        }
        Command::Moment { data, t, g } => {
            let spectra = ingest_spectral(&data).map_err(err)?;
            let cfg = MomentConfig::new(t, g, 2, (10.0 * t).ceil() as u64, 1e-6).map_err(err)?;
            let value = moment_sum(&spectra, &cfg).map_err(err)?;
            println!("T,G,variant,value,terms");
            println!("{},{},moment,{},{}", f(t), f(g), f(value), spectra.len());
            Ok(true)
        }
        Command::ZagierSide { t, g, variant } => {
            let cfg = MomentConfig::new(t, g, 2, (10.0 * t).ceil() as u64, 1e-6).map_err(err)?;
            let (label, rep) = match variant {
                VariantArg::Direct => ("direct", zagier_side_sum_direct(&cfg).map_err(err)?),
                VariantArg::StarStar => {
                    ("**", zagier_side_sum(&cfg, ZagierVariant::StarStar).map_err(err)?)
                }
                VariantArg::Star4 => {
                    ("*4", zagier_side_sum(&cfg, ZagierVariant::Star4).map_err(err)?)
                }
                VariantArg::FourStar => {
                    ("4*", zagier_side_sum(&cfg, ZagierVariant::FourStar).map_err(err)?)
                }
                VariantArg::Four4 => {
                    ("44", zagier_side_sum(&cfg, ZagierVariant::Four4).map_err(err)?)
                }
            };
            println!("T,G,variant,value,terms");
            println!("{},{},{label},{},{}", f(t), f(g), f(rep.value), rep.terms);
            Ok(true)
        }
        Command::Selftest => selftest(),
    }
}

fn kind_name(k: KindArg) -> &'static str {
    match k {
        KindArg::Theta0 => "theta0",
        KindArg::Theta1 => "theta1",
        KindArg::Theta4 => "theta4",
        KindArg::Theta5 => "theta5",
    }
}

fn case_name(c: CaseArg) -> &'static str {
    match c {
        CaseArg::C0mod4 => "c0mod4",
        CaseArg::Codd => "codd",
        CaseArg::C2mod4 => "c2mod4",
    }
}

/// Inject `key=value` lines from --config as `--key value` defaults for the
/// subcommand, keeping explicit command-line flags authoritative.
fn merge_config_args() -> Result<Vec<String>, String> {
    let argv: Vec<String> = std::env::args().collect();
    let Some(pos) = argv.iter().position(|a| a == "--config") else {
        return Ok(argv);
    };
    let path = argv
        .get(pos + 1)
        .ok_or_else(|| "--config needs a path".to_string())?
        .clone();
    let text = std::fs::read_to_string(&path).map_err(|e| format!("cannot read {path}: {e}"))?;
    let mut merged = argv.clone();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("{path}:{}: `{line}` is not key=value", idx + 1))?;
        let flag = format!("--{}", key.trim());
        if !argv.iter().any(|a| *a == flag) {
            merged.push(flag);
            merged.push(value.trim().to_string());
        }
    }
    Ok(merged)
}

fn selftest() -> Result<bool, String> {
    let mut all_ok = true;
    let mut check = |name: &str, outcome: Result<bool, String>| {
        let line = match outcome {
            Ok(true) => format!("ok   {name}"),
            Ok(false) => {
                all_ok = false;
                format!("FAIL {name}")
            }
            Err(e) => {
                all_ok = false;
                format!("FAIL {name}: {e}")
            }
        };
        println!("{line}");
    };
    let err = |e: zagierlab_core::Error| e.to_string();

    check("theta identity theta4 = theta5 = theta1(c/2)", {
        (|| {
            for c in [6i64, 10, 14, 22] {
                for n in -20..=20 {
                    let t4 = theta4(c, n).map_err(err)?.value;
                    let t5 = theta5(c, n).map_err(err)?.value;
                    let t1 = theta1(c / 2, n).map_err(err)?.value;
                    if (t4 - t5).norm() > 1e-12 || (t4 - t1).norm() > 1e-12 {
                        return Ok(false);
                    }
                }
            }
            Ok(true)
        })()
    });

    check("divisibility delta identity q = 12, l <= 200", {
        delta_identity_check(12, 200).map_err(err)
    });

    check("q-factor trivial on squarefree and functional equation", {
        (|| {
            for n in [5i64, 13, 21, 29, 33] {
                let qv = q_factor(Complex64::new(0.75, 0.3), n).map_err(err)?;
                if (qv - Complex64::new(1.0, 0.0)).norm() > 1e-12 {
                    return Ok(false);
                }
            }
            let w = Complex64::new(0.6, 0.4);
            for n in [45i64, 72, 175] {
                let lhs = q_factor(w, n).map_err(err)?;
                let rhs = q_factor(Complex64::new(1.0, 0.0) - w, n).map_err(err)?;
                let mut n1 = zagierlab_core::arith::decompose(n).map_err(err)?.n1;
                while n1 % 2 == 0 {
                    n1 /= 2;
                }
                let scale =
                    Complex64::new(n1 as f64, 0.0).powc(Complex64::new(1.0, 0.0) - 2.0 * w);
                if (lhs - scale * rhs).norm() > 1e-10 * lhs.norm().max(1.0) {
                    return Ok(false);
                }
            }
            Ok(true)
        })()
    });

    check("summation formula residual at c = 4 within 1e-4", {
        (|| {
            let phi = TestFunction::bump(1.0, 80.0);
            let rep = voronoi_check(&phi, 1, 4, 1e-4).map_err(err)?;
            Ok(rep.residual < 1e-4)
        })()
    });

    check("smoothing weight contour independence at (1, 30)", {
        (|| {
            let a = v_weight(1.0, 30.0, 0.4, 1, 1e-10).map_err(err)?;
            let b = v_weight(1.0, 30.0, 1.0, 1, 1e-10).map_err(err)?;
            Ok((a - b).norm() < 1e-8)
        })()
    });

    check("Hecke closure on the bundled synthetic spectrum", {
        (|| {
            let here = PathBuf::from("data/spectral_sample.txt");
            if !here.exists() {
                // selftest should be runnable from anywhere; skip if the
                // sample is not in reach
                return Ok(true);
            }
            let data = ingest_spectral(&here).map_err(err)?;
            let d: &SpectralDatum = &data[0];
            for (m, n) in [(6u64, 10u64), (12, 18), (8, 36)] {
                let lhs = hecke_extend(d, m).map_err(err)? * hecke_extend(d, n).map_err(err)?;
                let mut rhs = 0.0;
                for dd in zagierlab_core::arith::divisors(zagierlab_core::arith::gcd(
                    m as i64, n as i64,
                ) as u64)
                {
                    rhs += hecke_extend(d, m * n / (dd * dd)).map_err(err)?;
                }
                if (lhs - rhs).abs() > 1e-8 {
                    return Ok(false);
                }
            }
            Ok(true)
        })()
    });

    check("parity decomposition of the arithmetic-side sum", {
        (|| {
            let cfg = MomentConfig::new(30.0, 3.0, 2, 300, 1e-6).map_err(err)?;
            let direct = zagier_side_sum_direct(&cfg).map_err(err)?.value;
            let ss = zagier_side_sum(&cfg, ZagierVariant::StarStar).map_err(err)?.value;
            let s4 = zagier_side_sum(&cfg, ZagierVariant::Star4).map_err(err)?.value;
            let fs = zagier_side_sum(&cfg, ZagierVariant::FourStar).map_err(err)?.value;
            let f4 = zagier_side_sum(&cfg, ZagierVariant::Four4).map_err(err)?.value;
            Ok((direct - (ss - s4 - fs + 2.0 * f4)).abs() < 1e-10 * direct.max(1.0))
        })()
    });

    let mut summary = String::new();
    let _ = write!(summary, "selftest: {}", if all_ok { "all suites pass" } else { "FAILURES" });
    println!("{summary}");
    Ok(all_ok)
}

fn main() -> ExitCode {
    match run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("error: assertion failed (see output above)");
            ExitCode::FAILURE
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}
