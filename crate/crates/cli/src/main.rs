//! Command-line frontend: compute Stirling triangles, evaluate any family at
//! given parameters, run the verification suite, and trace the floating
//! Dobinski demonstration.
//!
//! Exit codes: 0 on success (and when every identity passes), 1 when a
//! verification run finds a failing identity (the report is still written),
//! 2 on usage, parse, pole, or domain-guard errors.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use degen_bell::bell::{dobinski_demo, eval_family, Family, FamilyParams};
use degen_bell::rational::{format_rat, parse_rat, rat_to_f64};
use degen_bell::report::IdentityReport;
use degen_bell::table::TriangleTable;
use degen_bell::verify::{all_pass, reports_to_json, run_suite, Mutation, VerifyConfig};
use degen_bell::{Evaluator, Rat};

#[derive(Parser)]
#[command(
    name = "degen-bell",
    version,
    about = "Exact degenerate Bell/Stirling calculator and identity verifier"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Emit a degenerate (r-)Stirling triangle up to --nmax
    Stirling {
        #[arg(long, default_value_t = 6)]
        nmax: u32,
        /// Shift parameter of the r-Stirling family
        #[arg(long, default_value_t = 0)]
        r: u32,
        /// Rational `p/q`, or `sym` for symbolic entries (coefficient lists)
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        lambda: String,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Write to a file instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate one family at exact rational parameters
    Eval {
        /// One of: bell, bell-two-var, bell-r, phi, phi-deg, bel, fubini,
        /// fubini-classical
        #[arg(long, value_parser = parse_family_arg)]
        family: Family,
        #[arg(long, default_value_t = 0)]
        n: u32,
        #[arg(long, value_parser = parse_rat_arg, default_value = "1", allow_hyphen_values = true)]
        lambda: Rat,
        #[arg(long, value_parser = parse_rat_arg, default_value = "1", allow_hyphen_values = true)]
        x: Rat,
        #[arg(long, value_parser = parse_rat_arg, default_value = "1", allow_hyphen_values = true)]
        y: Rat,
        /// Family order: the r of the r-Bell families and the order k of the
        /// degenerate Fubini polynomials
        #[arg(long, default_value_t = 0)]
        r: u32,
        /// Also print a double-precision rendering
        #[arg(long)]
        float: bool,
        /// Structured output instead of plain lines
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Run the identity verification suite and write a report
    Verify {
        #[arg(long, default_value_t = 20240)]
        seed: u64,
        /// Samples per identity
        #[arg(long, default_value_t = 50)]
        samples: usize,
        /// Bound on the first recurrence index n
        #[arg(long, default_value_t = 6)]
        nmax: u32,
        /// Bound on the second recurrence index m
        #[arg(long, default_value_t = 6)]
        m: u32,
        /// Bound on the shift parameter r
        #[arg(long, default_value_t = 3)]
        r: u32,
        /// Series truncation order
        #[arg(long, default_value_t = 24)]
        order: u32,
        /// Report file format
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Report path
        #[arg(long, default_value = "verify-report.json")]
        out: PathBuf,
        /// Testing hook: run with a deliberately wrong Stirling recurrence;
        /// the suite must fail with counterexamples
        #[arg(long, hide = true)]
        inject_mutation: bool,
    },
    /// Floating-point Dobinski convergence demonstration (not part of the
    /// exact suite)
    DobinskiDemo {
        #[arg(long, default_value_t = 0)]
        n: u32,
        #[arg(long, value_parser = parse_rat_arg, default_value = "1", allow_hyphen_values = true)]
        lambda: Rat,
        #[arg(long, value_parser = parse_rat_arg, default_value = "1", allow_hyphen_values = true)]
        x: Rat,
        #[arg(long, value_parser = parse_rat_arg, default_value = "1", allow_hyphen_values = true)]
        y: Rat,
        #[arg(long, default_value_t = 0)]
        r: u32,
        /// Number of series terms to sum
        #[arg(long, default_value_t = 200)]
        k: u32,
        #[arg(long, default_value_t = 1e-9)]
        tolerance: f64,
    },
}

fn parse_rat_arg(s: &str) -> Result<Rat, String> {
    parse_rat(s).map_err(|e| e.to_string())
}

fn parse_family_arg(s: &str) -> Result<Family, String> {
    Family::parse(s).ok_or_else(|| {
        let names: Vec<&str> = Family::ALL.iter().map(|f| f.name()).collect();
        format!(
            "unknown family `{s}` (expected one of: {})",
            names.join(", ")
        )
    })
}

fn write_output(out: &Option<PathBuf>, content: &str) -> Result<()> {
    match out {
        Some(path) => {
            fs::write(path, content).with_context(|| format!("writing {}", path.display()))
        }
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn cmd_stirling(
    nmax: u32,
    r: u32,
    lambda: &str,
    format: Format,
    out: Option<PathBuf>,
) -> Result<ExitCode> {
    let table = match lambda {
        "sym" | "symbolic" => TriangleTable::symbolic(r, nmax),
        other => TriangleTable::evaluated(r, parse_rat(other)?, nmax),
    };
    let rendered = match format {
        Format::Csv => table.to_csv(),
        Format::Json => {
            let mut s = table.to_json();
            s.push('\n');
            s
        }
    };
    write_output(&out, &rendered)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_eval(
    family: Family,
    params: FamilyParams,
    float: bool,
    format: Option<Format>,
) -> Result<ExitCode> {
    let mut ev = Evaluator::new();
    let result = eval_family(&mut ev, family, &params)?;
    let value = format_rat(&result.value);
    match format {
        None => {
            println!("{value}");
            if float {
                println!("float: {}", rat_to_f64(&result.value));
            }
            if let Some(prefactor) = result.omitted_prefactor() {
                println!("note: normalized value; omitted prefactor {prefactor}");
            }
        }
        Some(Format::Json) => {
            let doc = serde_json::json!({
                "family": family.name(),
                "n": params.n,
                "lambda": format_rat(&params.lambda),
                "x": format_rat(&params.x),
                "y": format_rat(&params.y),
                "r": params.r,
                "value": value,
                "float": if float { Some(rat_to_f64(&result.value)) } else { None },
                "normalized": family.is_normalized(),
                "omitted_prefactor": result.omitted_prefactor(),
            });
            println!("{}", serde_json::to_string_pretty(&doc)?);
        }
        Some(Format::Csv) => {
            println!("family,n,lambda,x,y,r,value");
            println!(
                "{},{},{},{},{},{},{}",
                family.name(),
                params.n,
                format_rat(&params.lambda),
                format_rat(&params.x),
                format_rat(&params.y),
                params.r,
                value
            );
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn reports_to_csv(reports: &[IdentityReport]) -> String {
    let mut out = String::from("identity_id,status,samples,lhs,rhs,context\n");
    for r in reports {
        let (lhs, rhs, context) = match &r.counterexample {
            Some(cx) => (cx.lhs.as_str(), cx.rhs.as_str(), cx.context.as_str()),
            None => ("", "", ""),
        };
        let status = if r.passed() { "pass" } else { "fail" };
        out.push_str(&format!(
            "{},{},{},{},{},\"{}\"\n",
            r.identity_id, status, r.samples_run, lhs, rhs, context
        ));
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    seed: u64,
    samples: usize,
    nmax: u32,
    m: u32,
    r: u32,
    order: u32,
    format: Format,
    out: PathBuf,
    inject_mutation: bool,
) -> Result<ExitCode> {
    let cfg = VerifyConfig {
        seed,
        samples,
        n_max: nmax,
        m_max: m,
        r_max: r,
        order: order as usize,
        mutation: inject_mutation.then_some(Mutation::FlipStirlingLambdaSign),
    };
    let started = std::time::Instant::now();
    let reports = run_suite(&cfg)?;
    for report in &reports {
        println!(
            "{}  {:<35} ({} samples)",
            if report.passed() { "pass" } else { "FAIL" },
            report.identity_id,
            report.samples_run
        );
        if let Some(cx) = &report.counterexample {
            println!(
                "      counterexample at {}: lhs = {}, rhs = {}",
                cx.context, cx.lhs, cx.rhs
            );
        }
    }
    let passed = reports.iter().filter(|r| r.passed()).count();
    println!(
        "{passed}/{} identities passed (seed {seed}, {samples} samples per identity)",
        reports.len()
    );
    let rendered = match format {
        Format::Json => reports_to_json(&reports),
        Format::Csv => reports_to_csv(&reports),
    };
    fs::write(&out, rendered).with_context(|| format!("writing {}", out.display()))?;
    eprintln!(
        "report written to {} in {:?}",
        out.display(),
        started.elapsed()
    );
    Ok(if all_pass(&reports) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_dobinski_demo(params: FamilyParams, terms: u32, tolerance: f64) -> Result<ExitCode> {
    let mut ev = Evaluator::new();
    let trace = dobinski_demo(&mut ev, &params, terms)?;
    let stride = (trace.steps.len() / 12).max(1);
    for step in trace.steps.iter().step_by(stride) {
        println!("k = {:>4}   partial = {:.15}", step.k, step.partial);
    }
    let last = trace.steps.last().expect("at least one term");
    if !(last.k as usize).is_multiple_of(stride) {
        println!("k = {:>4}   partial = {:.15}", last.k, last.partial);
    }
    println!("exact    = {:.15}", trace.exact);
    println!("approx   = {:.15}", trace.approx);
    println!("rel err  = {:.3e}", trace.rel_error);
    println!(
        "{}",
        if trace.rel_error <= tolerance {
            "converged within tolerance"
        } else {
            "NOT within tolerance"
        }
    );
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Stirling {
            nmax,
            r,
            lambda,
            format,
            out,
        } => cmd_stirling(nmax, r, &lambda, format, out),
        Command::Eval {
            family,
            n,
            lambda,
            x,
            y,
            r,
            float,
            format,
        } => cmd_eval(
            family,
            FamilyParams::new(n, lambda, x).with_y(y).with_r(r),
            float,
            format,
        ),
        Command::Verify {
            seed,
            samples,
            nmax,
            m,
            r,
            order,
            format,
            out,
            inject_mutation,
        } => cmd_verify(
            seed,
            samples,
            nmax,
            m,
            r,
            order,
            format,
            out,
            inject_mutation,
        ),
        Command::DobinskiDemo {
            n,
            lambda,
            x,
            y,
            r,
            k,
            tolerance,
        } => cmd_dobinski_demo(
            FamilyParams::new(n, lambda, x).with_y(y).with_r(r),
            k,
            tolerance,
        ),
    }
}

fn main() -> ExitCode {
    // die quietly when a downstream pipe closes (e.g. `stirling | head`)
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
