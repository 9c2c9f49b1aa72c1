//! The `dividelab` command line.
//!
//! Exit codes: 0 on success, 1 when an input fails validation (or an identity
//! check fails under `verify`), 2 on usage errors.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Read as _};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::divide::{build_divide, Divide, RawDivide};
use crate::enumerate::enumerate_divides;
use crate::generators::{cable, chebyshev_divide, puiseux_divide, reduction_count, PuiseuxPairs};
use crate::render::{render_svg, LayoutOptions};
use crate::report::analyze;
use crate::tracer::{combinatorialize, parse_rational, trace, ParamCurve, TraceOptions};

#[derive(Debug, Parser)]
#[command(name = "dividelab", version, about = "Divides of plane curve singularities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a divide from singularity data.
    #[command(subcommand)]
    Gen(Gen),
    /// Star product P_{p,q} * F.
    Cable {
        p: u64,
        q: u64,
        /// Base divide JSON ("-" for stdin).
        #[arg(long)]
        input: PathBuf,
    },
    /// Counts, matrices, polynomials and identity checks.
    Analyze {
        /// Divide JSON; "-" or omitted reads stdin.
        file: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Trace a parametrized branch and combinatorialize it.
    Trace {
        /// "x=t^m; y=c1*t^k1+c2*t^k2+..."
        curve: String,
        #[arg(long, default_value = "1")]
        scale: String,
        /// Also write the polyline as CSV (t,x,y).
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Enumerate one-arc divides with g double points.
    Enumerate {
        #[arg(long)]
        g: usize,
        /// Write one JSON divide per class here.
        #[arg(long)]
        emit_dir: Option<PathBuf>,
    },
    /// Lay out a divide and write SVG.
    Render {
        file: PathBuf,
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
    },
    /// Run the full identity suite; exit 1 if any check fails.
    Verify { file: PathBuf },
}

#[derive(Debug, Subcommand)]
enum Gen {
    /// Chebyshev block P_{p,q}.
    Torus { p: u64, q: u64 },
    /// Irreducible germ from Puiseux pairs "(a1,b1),(a2,b2),...".
    Puiseux { pairs: String },
}

/// Divide document with the optional Puiseux data it was generated from.
#[derive(Debug, Serialize, Deserialize)]
struct Document {
    #[serde(flatten)]
    raw: RawDivide,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    puiseux: Option<String>,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Invalid(String),
}

impl<E: std::error::Error> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Invalid(e.to_string())
    }
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn io::Write, err: &mut dyn io::Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
        Err(Failure::Invalid(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
    }
}

fn read_input(path: Option<&Path>) -> Result<String, Failure> {
    match path {
        None => read_stdin(),
        Some(p) if p == Path::new("-") => read_stdin(),
        Some(p) => fs::read_to_string(p).map_err(|e| Failure::Invalid(format!("{}: {e}", p.display()))),
    }
}

fn read_stdin() -> Result<String, Failure> {
    let mut text = String::new();
    io::stdin().read_to_string(&mut text)?;
    Ok(text)
}

fn load(path: Option<&Path>) -> Result<(Divide, Option<PuiseuxPairs>), Failure> {
    let text = read_input(path)?;
    let doc: Document = serde_json::from_str(&text).map_err(|e| Failure::Invalid(format!("malformed JSON: {e}")))?;
    let d = build_divide(&doc.raw)?;
    let pairs = doc.puiseux.map(|s| s.parse::<PuiseuxPairs>()).transpose()?;
    Ok((d, pairs))
}

fn emit(d: &Divide, puiseux: Option<&PuiseuxPairs>) -> String {
    let doc = Document {
        raw: d.to_raw(),
        puiseux: puiseux.map(|p| p.to_string()),
    };
    serde_json::to_string(&doc).expect("divide serializes")
}

fn dispatch(command: Command, out: &mut dyn io::Write) -> Result<i32, Failure> {
    match command {
        Command::Gen(Gen::Torus { p, q }) => {
            let d = chebyshev_divide(p, q)?;
            writeln!(out, "{}", emit(&d, None))?;
        }
        Command::Gen(Gen::Puiseux { pairs }) => {
            let pp: PuiseuxPairs = pairs.parse()?;
            let d = puiseux_divide(&pp)?;
            writeln!(out, "{}", emit(&d, Some(&pp)))?;
        }
        Command::Cable { p, q, input } => {
            let (base, _) = load(Some(&input))?;
            writeln!(out, "{}", emit(&cable(p, q, &base)?, None))?;
        }
        Command::Analyze { file, json } => {
            let (d, pairs) = load(file.as_deref())?;
            let mut report = analyze(&d)?;
            report.reduction_curves = pairs.as_ref().map(reduction_count);
            if json {
                writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?;
            } else {
                write!(out, "{report}")?;
            }
        }
        Command::Trace { curve, scale, csv } => {
            let scale = parse_rational(scale.trim())
                .filter(|s| *s.numer() > 0)
                .ok_or_else(|| Failure::Usage(format!("--scale: expected a positive rational, got {scale:?}")))?;
            let curve: ParamCurve = curve.parse()?;
            let traced = trace(&curve.with_scale(scale)?, &TraceOptions::default())?;
            let d = combinatorialize(&traced)?;
            if let Some(path) = csv {
                fs::write(&path, traced.to_csv())?;
            }
            writeln!(out, "{}", emit(&d, None))?;
        }
        Command::Enumerate { g, emit_dir } => {
            let found = enumerate_divides(g);
            if let Some(dir) = emit_dir {
                fs::create_dir_all(&dir)?;
                for (i, d) in found.values().enumerate() {
                    fs::write(dir.join(format!("g{g}_{i:04}.json")), emit(d, None))?;
                }
            }
            writeln!(out, "g = {g}: {} divides", found.len())?;
        }
        Command::Render { file, output } => {
            let (d, _) = load(Some(&file))?;
            let svg = render_svg(&d, &LayoutOptions::from_env())?;
            fs::write(&output, svg)?;
        }
        Command::Verify { file } => {
            let (d, _) = load(Some(&file))?;
            let report = analyze(&d)?;
            let failed: Vec<&str> = report.checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect();
            writeln!(out, "{} checks, {} failed", report.checks.len(), failed.len())?;
            for name in &failed {
                writeln!(out, "FAIL {name}")?;
            }
            return Ok(if failed.is_empty() { 0 } else { 1 });
        }
    }
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("dividelab").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn puiseux_report_shows_reduction_curves() {
        let dir = tempfile::tempdir().unwrap();
        let (code, json, _) = call(&["gen", "puiseux", "(2,3),(2,7)"]);
        assert_eq!(code, 0);
        let path = dir.path().join("d.json");
        fs::write(&path, json).unwrap();
        let (code, text, _) = call(&["analyze", path.to_str().unwrap()]);
        assert_eq!(code, 0);
        assert!(text.contains("D (delta) = 8"), "{text}");
        assert!(text.contains("mu = 16"));
        assert!(text.contains("reduction curves = 2"));
    }

    #[test]
    fn usage_errors_name_the_flag() {
        let (code, _, err) = call(&["enumerate", "--g", "x"]);
        assert_eq!(code, 2);
        assert!(err.contains("--g"), "{err}");
        let (code, _, err) = call(&["trace", "x=t^2; y=t^3", "--scale", "0"]);
        assert_eq!(code, 2);
        assert!(err.contains("--scale"), "{err}");
        let (code, _, _) = call(&["frobnicate"]);
        assert_eq!(code, 2);
    }

    #[test]
    fn malformed_divides_exit_one() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.json");
        // two crossings glued slot-to-slot close to a torus
        fs::write(
            &path,
            r#"{"crossings":[[0,1,2,3],[4,5,6,7]],"endpoints":[],"edges":[[0,4],[1,5],[2,6],[3,7]]}"#,
        )
        .unwrap();
        let (code, _, err) = call(&["analyze", path.to_str().unwrap()]);
        assert_eq!(code, 1);
        assert!(err.contains("NonPlanar"), "{err}");
        fs::write(&path, "{not json").unwrap();
        let (code, _, err) = call(&["verify", path.to_str().unwrap()]);
        assert_eq!(code, 1);
        assert!(err.contains("malformed JSON"));
    }
}
