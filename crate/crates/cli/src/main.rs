//! Command-line surface over the entropy library.
//!
//! Output discipline: everything written to stdout is a pure function of
//! argv — the only environment input is `CORE_ENTROPY_THREADS`, which caps
//! the worker pool without affecting a single output byte. Reals are printed
//! with 9 significant digits, CSV uses a header row and LF line endings, and
//! repeated runs are byte-identical.
//!
//! Exit codes: 0 success, 1 usage error (bad grammar, unparseable input),
//! 2 domain error (well-formed input outside an operation's domain or
//! budget), 3 convergence failure.

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use core_entropy::entropy::DEFAULT_TOL;
use core_entropy::kneading_det::DEFAULT_TERMS;
use core_entropy::{
    build_pair_matrix, char_poly, core_entropy, core_entropy_with_method, core_entropy_with_tol,
    family_growth, family_polynomial, fit_asymptotics, graph_samples, kneading_lambda,
    kneading_sequence, kneading_signs, parse_angle, root_cloud, tune_angle, Angle, CloudSet,
    EntropyReport, Error, FamilyName, FamilySpec, Method,
};
use std::path::PathBuf;
use std::process::ExitCode;

/// Core entropy and biaccessibility dimension of quadratic polynomials,
/// computed from rational external angles.
#[derive(Parser)]
#[command(name = "core-entropy", version, max_term_width = 100)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Growth rate λ, entropy ln λ, and dimension log₂ λ of one angle
    Entropy {
        /// External angle: `NUM/DEN`, `0b.BITS`, or `0b.PRE(PER)`
        angle: String,
        /// Computation route: pair-matrix, kneading, or subshift
        #[arg(long, default_value_t = Method::PairMatrix, value_parser = method_arg)]
        method: Method,
        /// Bracket tolerance on λ (pair-matrix route only)
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        /// Emit a single JSON object instead of key: value lines
        #[arg(long)]
        json: bool,
    },
    /// Growth rates on a dyadic grid over an angle interval, as CSV
    Graph {
        /// Lower endpoint (inclusive)
        lo: String,
        /// Upper endpoint (inclusive)
        hi: String,
        /// Grid depth: one sample per k/2^DEPTH inside the interval
        #[arg(long)]
        depth: u32,
        /// Write CSV here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Angle-pair transition matrix underlying the growth rate
    Matrix {
        /// External angle
        angle: String,
        /// Print the full matrix, one row per line
        #[arg(long)]
        dump: bool,
        /// Print the exact characteristic polynomial
        #[arg(long)]
        charpoly: bool,
    },
    /// Catalog polynomial families: member polynomials and asymptotics
    Family {
        /// Family name, e.g. principal_center, real_center, x16_beta
        name: String,
        /// Limb parameter q (principal and vein families)
        #[arg(long)]
        q: Option<u32>,
        /// Member index n (all non-principal families)
        #[arg(long, conflicts_with = "fit")]
        n: Option<u32>,
        /// Fit the geometric correction λ_n ≈ λ₀ ± K·λ₀⁻ⁿ over n ∈ LO..HI
        #[arg(long, value_parser = range_arg)]
        fit: Option<(u32, u32)>,
    },
    /// Tuning substitution on binary expansions: 0 ↦ WMINUS, 1 ↦ WPLUS
    Tune {
        /// Word substituted for each 0 digit
        wminus: String,
        /// Word substituted for each 1 digit
        wplus: String,
        /// Angle whose expansion is rewritten
        angle: String,
    },
    /// Kneading-determinant route on the real slice: ν, signs, t*, λ
    Knead {
        /// External angle in [0, 1/2]
        angle: String,
        /// Truncation order of the determinant series
        #[arg(long, default_value_t = DEFAULT_TERMS)]
        terms: usize,
    },
    /// Root cloud of a coefficient-constrained polynomial set, as CSV
    Galois {
        /// Which set to enumerate: m0, m1, or m2
        set: String,
        /// Degree bound (m0, m1) or period bound (m2)
        #[arg(long)]
        max_degree: u32,
        /// Residual certification tolerance per root
        #[arg(long, default_value_t = core_entropy::galois::DEFAULT_ROOT_RESIDUAL)]
        tol: f64,
        /// Write CSV here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn method_arg(s: &str) -> Result<Method, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn range_arg(s: &str) -> Result<(u32, u32), String> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| format!("expected LO..HI, got '{s}'"))?;
    let lo = lo.parse().map_err(|_| format!("bad range start '{lo}'"))?;
    let hi = hi.parse().map_err(|_| format!("bad range end '{hi}'"))?;
    if hi < lo {
        return Err(format!("empty range {lo}..{hi}"));
    }
    Ok((lo, hi))
}

/// A failure ready for the shell: message for stderr plus exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_) => 1,
            Error::Domain(_) | Error::Budget(_) => 2,
            Error::Convergence { .. } => 3,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure {
            code: 1,
            message: format!("io error: {e}"),
        }
    }
}

/// Writes to stdout, exiting quietly if the downstream consumer closed the
/// pipe (so `core-entropy graph … | head` behaves like any Unix filter).
fn write_stdout(s: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    if out.write_all(s.as_bytes()).and_then(|()| out.flush()).is_err() {
        std::process::exit(0);
    }
}

fn write_stderr(s: &str) {
    use std::io::Write;
    let _ = std::io::stderr().lock().write_all(s.as_bytes());
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        // clap's native convention is exit 2 for usage errors; the documented
        // contract here is 1, with help/version on stdout at 0.
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    write_stdout(&e.to_string());
                    ExitCode::SUCCESS
                }
                _ => {
                    write_stderr(&e.to_string());
                    ExitCode::from(1)
                }
            }
        }
    };
    let run = configure_threads().and_then(|()| dispatch(cli.command));
    match run {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            write_stderr(&format!("{}\n", f.message));
            ExitCode::from(f.code)
        }
    }
}

/// Applies the CORE_ENTROPY_THREADS cap to the global worker pool.
fn configure_threads() -> Result<(), Failure> {
    let var = match std::env::var("CORE_ENTROPY_THREADS") {
        Err(std::env::VarError::NotPresent) => return Ok(()),
        Err(e) => {
            return Err(Failure {
                code: 1,
                message: format!("CORE_ENTROPY_THREADS: {e}"),
            })
        }
        Ok(v) => v,
    };
    let threads: usize = var.trim().parse().unwrap_or(0);
    if threads == 0 {
        return Err(Failure {
            code: 1,
            message: format!("CORE_ENTROPY_THREADS must be a positive integer, got '{var}'"),
        });
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure {
            code: 1,
            message: format!("thread pool: {e}"),
        })
}

fn dispatch(cmd: Command) -> Result<(), Failure> {
    match cmd {
        Command::Entropy {
            angle,
            method,
            tol,
            json,
        } => cmd_entropy(&angle, method, tol, json),
        Command::Graph { lo, hi, depth, out } => cmd_graph(&lo, &hi, depth, out.as_deref()),
        Command::Matrix {
            angle,
            dump,
            charpoly,
        } => cmd_matrix(&angle, dump, charpoly),
        Command::Family { name, q, n, fit } => cmd_family(&name, q, n, fit),
        Command::Tune {
            wminus,
            wplus,
            angle,
        } => cmd_tune(&wminus, &wplus, &angle),
        Command::Knead { angle, terms } => cmd_knead(&angle, terms),
        Command::Galois {
            set,
            max_degree,
            tol,
            out,
        } => cmd_galois(&set, max_degree, tol, out.as_deref()),
    }
}

// ── formatting ─────────────────────────────────────────────────────────

/// Real number with 9 significant digits; exact zeros print as `0`, values
/// outside [1e−4, 1e9) fall back to scientific notation.
fn sig9(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let a = x.abs();
    if (1e-4..1e9).contains(&a) {
        let decimals = (8 - a.log10().floor() as i32).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{x:.8e}")
    }
}

/// `0b.PRE(PER)` rendering of the angle's exact binary expansion.
fn binary_render(theta: Angle) -> Result<String, Failure> {
    let (pre, per) = theta.to_binary()?;
    Ok(if per.is_empty() {
        format!("0b.{pre}")
    } else {
        format!("0b.{pre}({per})")
    })
}

fn report_lines(r: &EntropyReport) -> String {
    format!(
        "theta: {}\npreperiod: {}\nperiod: {}\nmatrix_dim: {}\nlambda: {}\nentropy: {}\ndimension: {}\nmethod: {}\niterations: {}\n",
        r.theta,
        r.preperiod,
        r.period,
        r.matrix_dim,
        sig9(r.lambda),
        sig9(r.entropy),
        sig9(r.dimension),
        r.method,
        r.iterations,
    )
}

fn report_json(r: &EntropyReport) -> String {
    format!(
        "{{\"theta\":\"{}\",\"preperiod\":{},\"period\":{},\"matrix_dim\":{},\"lambda\":{},\"entropy\":{},\"dimension\":{},\"method\":\"{}\",\"iterations\":{}}}\n",
        r.theta,
        r.preperiod,
        r.period,
        r.matrix_dim,
        sig9(r.lambda),
        sig9(r.entropy),
        sig9(r.dimension),
        r.method,
        r.iterations,
    )
}

/// Writes `content` to `out` if given (with a stdout receipt), else to stdout.
fn emit(out: Option<&std::path::Path>, content: &str, rows: usize) -> Result<(), Failure> {
    match out {
        None => write_stdout(content),
        Some(path) => {
            std::fs::write(path, content)?;
            write_stdout(&format!("wrote {rows} rows to {}\n", path.display()));
        }
    }
    Ok(())
}

// ── commands ───────────────────────────────────────────────────────────

fn cmd_entropy(angle: &str, method: Method, tol: f64, json: bool) -> Result<(), Failure> {
    let theta = parse_angle(angle)?;
    let r = if method == Method::PairMatrix {
        core_entropy_with_tol(theta, tol)?
    } else {
        core_entropy_with_method(theta, method, tol)?
    };
    write_stdout(&if json { report_json(&r) } else { report_lines(&r) });
    Ok(())
}

fn cmd_graph(lo: &str, hi: &str, depth: u32, out: Option<&std::path::Path>) -> Result<(), Failure> {
    let lo = parse_angle(lo)?;
    let hi = parse_angle(hi)?;
    let samples = graph_samples(lo, hi, depth, DEFAULT_TOL)?;
    let mut csv = String::from("theta_num,theta_den,preperiod,period,matrix_dim,lambda,dimension,iterations\n");
    for r in &samples {
        csv.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            r.theta.numer(),
            r.theta.denom(),
            r.preperiod,
            r.period,
            r.matrix_dim,
            sig9(r.lambda),
            sig9(r.dimension),
            r.iterations,
        ));
    }
    emit(out, &csv, samples.len())
}

fn cmd_matrix(angle: &str, dump: bool, charpoly: bool) -> Result<(), Failure> {
    let theta = parse_angle(angle)?;
    let pm = build_pair_matrix(theta)?;
    let r = core_entropy(theta)?;
    let m = pm.matrix();
    let mut text = format!(
        "theta: {}\npreperiod: {}\nperiod: {}\norbit: {}\npair_basis: {}\nnonzero: {}\nlambda: {}\ndimension: {}\n",
        theta,
        r.preperiod,
        r.period,
        pm.orbit_len(),
        pm.dim(),
        m.nnz(),
        sig9(r.lambda),
        sig9(r.dimension),
    );
    if dump {
        text.push_str(&format!("matrix: {0}x{0}\n", pm.dim()));
        for row in 0..pm.dim() {
            let line: Vec<String> = (0..pm.dim())
                .map(|col| m.entry(row, col).to_string())
                .collect();
            text.push_str(&line.join(" "));
            text.push('\n');
        }
    }
    if charpoly {
        text.push_str(&format!("charpoly: {}\n", char_poly(m)?));
    }
    write_stdout(&text);
    Ok(())
}

fn cmd_family(
    name: &str,
    q: Option<u32>,
    n: Option<u32>,
    fit: Option<(u32, u32)>,
) -> Result<(), Failure> {
    let name: FamilyName = name.parse()?;
    let mut text = format!("family: {name}\n");
    if let Some(q) = q {
        text.push_str(&format!("q: {q}\n"));
    }
    if let Some((lo, hi)) = fit {
        let f = fit_asymptotics(name, q, lo, hi)?;
        text.push_str(&format!(
            "fit_range: {}..{}\nsamples: {}\nlambda0: {}\nk: {}\ndrift: {}\n",
            lo,
            hi,
            f.samples,
            sig9(f.lambda0),
            sig9(f.k),
            sig9(f.drift),
        ));
        write_stdout(&text);
        return Ok(());
    }
    if let Some(n) = n {
        text.push_str(&format!("n: {n}\n"));
    }
    let spec = FamilySpec::new(name, q, n)?;
    let p = family_polynomial(&spec)?;
    let lambda = family_growth(&spec)?;
    text.push_str(&format!(
        "polynomial: {}\nlambda: {}\ndimension: {}\n",
        p,
        sig9(lambda),
        sig9(lambda.log2()),
    ));
    write_stdout(&text);
    Ok(())
}

fn cmd_tune(wminus: &str, wplus: &str, angle: &str) -> Result<(), Failure> {
    let eta = parse_angle(angle)?;
    let theta = tune_angle(wminus, wplus, eta)?;
    let eta_r = core_entropy(eta)?;
    let theta_r = core_entropy(theta)?;
    write_stdout(&format!(
        "eta: {}\neta_binary: {}\nw_minus: {}\nw_plus: {}\ntheta: {}\ntheta_binary: {}\neta_lambda: {}\ntheta_lambda: {}\neta_dimension: {}\ntheta_dimension: {}\n",
        eta,
        binary_render(eta)?,
        wminus,
        wplus,
        theta,
        binary_render(theta)?,
        sig9(eta_r.lambda),
        sig9(theta_r.lambda),
        sig9(eta_r.dimension),
        sig9(theta_r.dimension),
    ));
    Ok(())
}

/// Longest prefix of the sign sequence shown inline before truncation.
const SIGN_WINDOW: usize = 32;

fn cmd_knead(angle: &str, terms: usize) -> Result<(), Failure> {
    let theta = parse_angle(angle)?;
    let kv = kneading_lambda(theta, terms)?;
    let nu = kneading_sequence(theta)?;
    let signs = kneading_signs(theta, terms)?;
    let shown: String = signs
        .iter()
        .take(SIGN_WINDOW)
        .map(|&s| if s > 0 { '+' } else { '-' })
        .collect();
    let suffix = if signs.len() > SIGN_WINDOW {
        format!(" (first {SIGN_WINDOW} of {})", signs.len())
    } else {
        String::new()
    };
    write_stdout(&format!(
        "theta: {}\nnu: {}\nadmissible: {}\nsigns: {}{}\nt_star: {}\nlambda: {}\nterms: {}\n",
        theta,
        nu,
        if kv.admissible {
            "true".to_string()
        } else {
            "false (unsupported regime)".to_string()
        },
        shown,
        suffix,
        kv.t_star.map_or("none".to_string(), sig9),
        sig9(kv.lambda),
        kv.terms,
    ));
    if !kv.admissible {
        // The value above is informational: off the real-admissible set this
        // route and the pair matrix provably diverge.
        return Err(Failure {
            code: 2,
            message: format!(
                "domain error: {theta} is not real-admissible; kneading value does not bound the growth rate"
            ),
        });
    }
    Ok(())
}

fn cmd_galois(
    set: &str,
    max_degree: u32,
    tol: f64,
    out: Option<&std::path::Path>,
) -> Result<(), Failure> {
    let set: CloudSet = set.parse()?;
    let cloud = root_cloud(set, max_degree, tol)?;
    let tag = set.as_str().to_ascii_lowercase();
    let mut csv = String::from("re,im,degree,poly_id,set\n");
    for p in &cloud.points {
        csv.push_str(&format!(
            "{},{},{},{},{}\n",
            sig9(p.re),
            sig9(p.im),
            p.degree,
            p.poly_id,
            tag,
        ));
    }
    emit(out, &csv, cloud.points.len())
}

// `entropy --method kneading` and the `subshift` route have their own tests
// through the binary; unit coverage for the formatting helpers lives here.
#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nine_significant_digits() {
        assert_eq!(sig9(0.0), "0");
        assert_eq!(sig9(-0.0), "0");
        assert_eq!(sig9(2.0), "2.00000000");
        assert_eq!(sig9(1.5213797068), "1.52137971");
        assert_eq!(sig9(0.6055129151), "0.605512915");
        assert_eq!(sig9(-1.0), "-1.00000000");
        assert_eq!(sig9(123456.789), "123456.789");
        assert_eq!(sig9(1e-17), "1.00000000e-17");
        assert_eq!(sig9(0.00012), "0.000120000000");
    }

    #[test]
    fn range_argument_grammar() {
        assert_eq!(range_arg("15..40"), Ok((15, 40)));
        assert_eq!(range_arg("3..3"), Ok((3, 3)));
        assert!(range_arg("40..15").is_err());
        assert!(range_arg("15").is_err());
        assert!(range_arg("a..b").is_err());
    }

    #[test]
    fn failure_codes_follow_error_classes() {
        let f: Failure = Error::Parse("x".into()).into();
        assert_eq!(f.code, 1);
        let f: Failure = Error::Domain("x".into()).into();
        assert_eq!(f.code, 2);
        let f: Failure = Error::Budget("x".into()).into();
        assert_eq!(f.code, 2);
        let f: Failure = Error::Convergence {
            lo: 1.0,
            hi: 2.0,
            iterations: 5,
        }
        .into();
        assert_eq!(f.code, 3);
    }
}
