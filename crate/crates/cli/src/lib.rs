//! `qmrc`: expansions, brackets, decompositions and identity checks from the
//! command line.
//!
//! Every command writes line-oriented JSON to stdout. Exit status is `0` on
//! success, `1` when a check fails and `2` on usage or parse errors.

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use quasimodular::brackets::{bracket, BracketParams};
use quasimodular::coeffsolver::solve_and_confirm;
use quasimodular::identities::{self, IdentityReport};
use quasimodular::numkernel::format_rational;
use quasimodular::spaces::decompose;
use quasimodular::{expr, qseries, wz, Error, QuasiForm};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "qmrc", version, about = "Exact computations with level-1 quasimodular forms")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// q-expansion of an expression
    Expand {
        expr: String,
        #[arg(long, default_value_t = 20)]
        order: usize,
        /// Write the series to a file instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rankin-Cohen bracket of two expressions
    Bracket {
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: Option<u32>,
        #[arg(long)]
        s: Option<u32>,
        #[arg(long)]
        l: Option<u32>,
        #[arg(long)]
        t: Option<u32>,
    },
    /// Run identity verifiers
    Verify {
        which: Verifier,
        /// Coefficient bound: n <= nmax for the tau formulas (default 50), the
        /// derivative order for prop-dern (default 8). With `all` it bounds the
        /// tau formulas only.
        #[arg(long)]
        nmax: Option<u64>,
    },
    /// Structure decomposition into derivatives of modular forms
    Decompose { expr: String },
    /// Solve the depth-cancellation system for the bracket coefficients
    SolveCoeffs {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        s: u32,
        #[arg(long)]
        l: u32,
        #[arg(long)]
        t: u32,
        #[arg(long)]
        n: u32,
    },
    /// Check the certificate and the sum A(N) for 2 <= N <= max-N
    Wz {
        #[arg(long = "max-N", default_value_t = 40)]
        max_n: i64,
    },
    /// Coefficients of Delta
    Tau {
        #[arg(long = "max-n", default_value_t = 20)]
        max_n: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Verifier {
    Ramanujan,
    Niebur,
    Vdp,
    Chazy,
    PropDern,
    All,
}

pub const DEFAULT_TAU_NMAX: u64 = 50;
pub const DEFAULT_DERN_NMAX: u64 = 8;

/// Failure kinds, mapped onto exit codes.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Discrepancy(_) | Error::DepthBound { .. } => Failure::Check(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn line(out: &mut dyn Write, v: &Value) -> std::io::Result<()> {
    writeln!(out, "{v}")
}

fn form_json(f: &QuasiForm) -> Value {
    json!({
        "weight": f.weight(),
        "depth": f.exact_depth().unwrap_or(0),
        "form": f.to_string(),
        "terms": serde_json::to_value(f.poly().to_records()).expect("records serialize"),
    })
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_FAILED,
        Err(Failure::Check(m)) => {
            let _ = writeln!(err, "check failed: {m}");
            EXIT_FAILED
        }
        Err(Failure::Usage(m)) => {
            let _ = writeln!(err, "error: {m}");
            EXIT_USAGE
        }
    }
}

/// Runs one command; `Ok(false)` means a check reported failure.
pub fn execute(command: Command, out: &mut dyn Write) -> Result<bool, Failure> {
    match command {
        Command::Expand { expr, order, out: path } => {
            let f = expr::eval_str(&expr)?;
            let text = f.to_qseries(order).to_text();
            match path {
                Some(p) => std::fs::write(p, format!("{text}\n"))?,
                None => writeln!(out, "{text}")?,
            }
            Ok(true)
        }
        Command::Bracket { f, g, n, k, s, l, t } => {
            let (f, g) = (expr::eval_str(&f)?, expr::eval_str(&g)?);
            let params = match (k, s, l, t) {
                (None, None, None, None) => None,
                _ => Some(BracketParams::new(
                    n,
                    k.unwrap_or(f.weight()),
                    s.unwrap_or(f.exact_depth().unwrap_or(0)),
                    l.unwrap_or(g.weight()),
                    t.unwrap_or(g.exact_depth().unwrap_or(0)),
                )?),
            };
            let b = bracket(&f, &g, n, params)?;
            let p = params.map_or_else(|| quasimodular::brackets::default_params(&f, &g, n), Ok)?;
            let mut v = form_json(&b);
            v["params"] = json!(p.to_string());
            v["coefficients"] = json!(quasimodular::brackets::rc_coeffs(&p).to_string());
            line(out, &v)?;
            Ok(true)
        }
        Command::Verify { which, nmax } => {
            let tau_nmax = nmax.unwrap_or(DEFAULT_TAU_NMAX);
            let dern_nmax = u32::try_from(nmax.unwrap_or(DEFAULT_DERN_NMAX))
                .map_err(|_| Failure::Usage("nmax too large".into()))?;
            if nmax == Some(0) && which != Verifier::PropDern && which != Verifier::Chazy && which != Verifier::Ramanujan {
                return Err(Failure::Usage("--nmax must be positive".into()));
            }
            let reports: Vec<IdentityReport> = match which {
                Verifier::Ramanujan => vec![identities::verify_ramanujan()],
                Verifier::Niebur => vec![identities::verify_niebur(tau_nmax)],
                Verifier::Vdp => vec![identities::verify_vanderpol(tau_nmax)],
                Verifier::Chazy => vec![identities::verify_chazy()],
                Verifier::PropDern => vec![identities::verify_prop_dern(dern_nmax)],
                Verifier::All => identities::verify_all(tau_nmax, DEFAULT_DERN_NMAX as u32),
            };
            for r in &reports {
                writeln!(out, "{}", r.to_text())?;
            }
            Ok(reports.iter().all(|r| r.pass))
        }
        Command::Decompose { expr } => {
            let f = expr::eval_str(&expr)?;
            let d = decompose(&f)?;
            let parts: Vec<Value> = d
                .parts
                .iter()
                .map(|(j, m)| json!({"j": j, "modular": m.to_string()}))
                .collect();
            let ok = d.reassemble() == *f.poly();
            line(
                out,
                &json!({
                    "weight": d.weight,
                    "parts": parts,
                    "line": d.line.as_ref().map(format_rational),
                    "reassembles": ok,
                }),
            )?;
            Ok(ok)
        }
        Command::SolveCoeffs { k, s, l, t, n } => {
            let v = solve_and_confirm(k, l, s, t, n)?;
            writeln!(out, "{v}")?;
            Ok(true)
        }
        Command::Wz { max_n } => {
            if max_n < 2 {
                return Err(Failure::Usage("--max-N must be at least 2".into()));
            }
            let reports = std::thread::scope(|scope| {
                let handles: Vec<_> = (2..=max_n).map(|n| scope.spawn(move || wz::certificate_check(n))).collect();
                handles.into_iter().map(|h| h.join().expect("wz worker panicked")).collect::<Vec<_>>()
            });
            let mut ok = true;
            for r in reports {
                let r = r?;
                ok &= r.pass();
                line(out, &serde_json::to_value(&r).expect("report serializes"))?;
            }
            for m in 0..=3 {
                let pass = wz::q2_bracket_check(m)?;
                ok &= pass;
                line(out, &json!({"q2_bracket": m, "pass": pass}))?;
            }
            Ok(ok)
        }
        Command::Tau { max_n } => {
            for (i, t) in qseries::tau_table(max_n)?.iter().enumerate() {
                line(out, &json!({"n": i + 1, "tau": t.to_string()}))?;
            }
            Ok(true)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let mut argv = vec!["qmrc"];
        argv.extend_from_slice(args);
        let code = run(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn expand_delta() {
        let (code, out, _) = call(&["expand", "Delta", "--order", "5"]);
        assert_eq!(code, 0);
        let s = qseries::QSeries::from_text(out.trim()).unwrap();
        let c: Vec<String> = s.dense().iter().map(|x| x.to_string()).collect();
        assert_eq!(c, ["0", "1", "-24", "252", "-1472", "4830"]);
    }

    #[test]
    fn solve_coeffs() {
        let (code, out, _) = call(&["solve-coeffs", "--k", "2", "--s", "1", "--l", "2", "--t", "1", "--n", "4"]);
        assert_eq!((code, out.trim()), (0, "(1,-16,36,-16,1)"));
    }

    #[test]
    fn bracket_command() {
        let (code, out, _) = call(&["bracket", "--f", "E4", "--g", "D(E4)", "--n", "1"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(out.trim()).unwrap();
        assert_eq!(v["form"], "5/9*E4^3 - 5/9*E6^2");
        assert_eq!(v["params"], "(1; 4, 0; 6, 1)");
        let (code, _, err) = call(&["bracket", "--f", "E2^2", "--g", "E4", "--n", "1", "--s", "1"]);
        assert_eq!(code, 2, "{err}");
        let (code, out, _) = call(&["bracket", "--f", "E4", "--g", "E4", "--n", "2", "--s", "1"]);
        assert_eq!(code, 0);
        assert!(out.contains("\"params\":\"(2; 4, 1; 4, 0)\""));
    }

    #[test]
    fn decompose_command() {
        let (code, out, _) = call(&["decompose", "E2^2"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(out.trim()).unwrap();
        assert_eq!(v["reassembles"], true);
        assert_eq!(v["line"], "12");
    }

    #[test]
    fn parse_errors_exit_2() {
        let (code, _, err) = call(&["expand", "E2^^2"]);
        assert_eq!(code, 2);
        assert!(err.contains("offset 3"), "{err}");
        assert_eq!(call(&["expand", "E8"]).0, 2);
        assert_eq!(call(&["frobnicate"]).0, 2);
        assert_eq!(call(&["verify", "nonsense"]).0, 2);
        assert_eq!(call(&["wz", "--max-N", "1"]).0, 2);
        assert_eq!(call(&["--help"]).0, 0);
    }

    #[test]
    fn verify_and_wz() {
        let (code, out, _) = call(&["verify", "chazy"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().count(), 1);
        let (code, out, _) = call(&["wz", "--max-N", "6"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().count(), 5 + 4);
        let (code, out, _) = call(&["tau", "--max-n", "3"]);
        assert_eq!(code, 0);
        assert!(out.lines().last().unwrap().contains("\"252\""));
    }

    #[test]
    fn expand_to_file() {
        let path = std::env::temp_dir().join(format!("qmrc-test-{}.json", std::process::id()));
        let (code, out, _) = call(&["expand", "E4", "--order", "3", "--out", path.to_str().unwrap()]);
        assert_eq!((code, out.as_str()), (0, ""));
        let text = std::fs::read_to_string(&path).unwrap();
        std::fs::remove_file(&path).unwrap();
        assert_eq!(text.trim(), r#"{"order":3,"coeffs":{"0":"1","1":"240","2":"2160","3":"6720"}}"#);
    }
}
