mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::json;
use torsionlab::invariants::{classify, fels_curvature, fels_torsion, format_matrix, tensor_is_zero};
use torsionlab::lambdacollect::{
    case_split_check, collect, emit_system, emitted_golden, equivalent_systems, mirror_check, transcribed_system,
    EquivalenceReport, PdeSystem, SystemTag,
};
use torsionlab::laxlab::{closure_obstruction, compare_eta, horizontal_frame, CaseTag};
use torsionlab::symcore::{frac, render, Assignment, Frac, Style, Var};
use torsionlab::verify::{
    chart_equivalence, separated_form_check, curvature_nonzero, nonflat_check, numeric_residuals, residuals,
    verify_ruling, SolutionCandidate, Status,
};
use torsionlab::{suite, Error};

use report::RunReport;

#[derive(Parser)]
#[command(name = "torsion-lab", version, about = "Checks for path geometries with constant torsion")]
struct Cli {
    /// Write a JSON run report to this path.
    #[arg(long, global = true)]
    json: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Normalize an expression.
    Simplify {
        expr: String,
        #[arg(long, default_value = "canonical")]
        style: Style,
    },
    /// Torsion, curvature and classification of x'' = F1, y'' = F2.
    Invariants {
        #[arg(long, allow_hyphen_values = true)]
        f1: String,
        #[arg(long, allow_hyphen_values = true)]
        f2: String,
        /// Evaluation point for non-constant torsion, as `x1=0.5,p2=1`.
        #[arg(long)]
        at: Option<String>,
    },
    /// Lax pairs and their closure.
    #[command(subcommand)]
    Lax(LaxCommand),
    /// Emit, compare and reduce PDE systems.
    #[command(subcommand)]
    System(SystemCommand),
    /// Check a candidate (u, v).
    #[command(subcommand)]
    Solution(SolutionCommand),
    /// Cone equations on rulings and charts.
    #[command(subcommand)]
    Cone(ConeCommand),
    /// Run the full acceptance battery.
    Suite,
}

#[derive(Args, Clone)]
struct CaseArg {
    #[arg(long)]
    case: CaseTag,
}

#[derive(Subcommand)]
enum LaxCommand {
    /// Frame, solved eta's and their comparison with the closed forms.
    Derive(CaseArg),
    /// The obstruction of [L0, L1] modulo L0, L1.
    Closure {
        #[command(flatten)]
        case: CaseArg,
        #[arg(long, allow_hyphen_values = true)]
        u: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        v: Option<String>,
    },
}

#[derive(Subcommand)]
enum SystemCommand {
    /// Derive the PDE system from the Lax pair.
    Emit(CaseArg),
    /// Compare the derived system with the transcribed block.
    #[command(name = "verify-paper")]
    VerifyTranscribed(CaseArg),
    /// Mutual membership of the explicit and reduced systems.
    Reduce {
        #[arg(long, default_value_t = 2)]
        degree_bound: u32,
    },
    /// The three case splits of the reduced system.
    Cases {
        #[arg(long, default_value_t = 2)]
        degree_bound: u32,
    },
}

#[derive(Subcommand)]
enum SolutionCommand {
    /// Substitute a candidate (u, v) into the derived system.
    Check {
        #[command(flatten)]
        case: CaseArg,
        #[arg(long, allow_hyphen_values = true)]
        u: String,
        #[arg(long, allow_hyphen_values = true)]
        v: String,
        /// Also evaluate at this many random points.
        #[arg(long)]
        numeric: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
}

#[derive(Subcommand)]
enum ConeCommand {
    /// Sample the ruling and the chart map and evaluate the cone equation.
    Verify {
        #[command(flatten)]
        case: CaseArg,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn is_usage(e: &Error) -> bool {
    matches!(
        e,
        Error::Syntax { .. }
            | Error::UnknownIdentifier(_)
            | Error::Dependency { .. }
            | Error::Declaration(_)
            | Error::Data(_)
            | Error::Unresolved(_)
    )
}

fn parse_point(text: &str) -> Result<Assignment, Error> {
    let mut a = Assignment::new();
    for pair in text.split(',').filter(|p| !p.trim().is_empty()) {
        let (k, v) = pair
            .split_once('=')
            .ok_or_else(|| Error::Syntax { offset: 0, message: format!("expected name=value, got `{pair}`") })?;
        let var = Var::from_name(k.trim()).ok_or_else(|| Error::UnknownIdentifier(k.trim().to_string()))?;
        let x: f64 = v
            .trim()
            .parse()
            .map_err(|_| Error::Syntax { offset: 0, message: format!("`{v}` is not a number") })?;
        a = a.with_var(var, x);
    }
    Ok(a)
}

fn print_membership(name: &str, r: &EquivalenceReport, report: &mut RunReport) {
    let count = |es: &[torsionlab::lambdacollect::MembershipEntry]| es.iter().filter(|e| e.witness.is_some()).count();
    println!(
        "{name}: forward {}/{}, backward {}/{}, prolonged {}",
        count(&r.forward),
        r.forward.len(),
        count(&r.backward),
        r.backward.len(),
        r.prolongations()
    );
    for (dir, e) in r.failures() {
        report.violation(
            format!("{name}: {dir} equation {} is not a member", e.index),
            Some(Frac::from(e.equation.clone()).to_string()),
        );
    }
    report.metric(&format!("{name}_prolonged"), r.prolongations());
}

fn derived_system(case: CaseTag) -> torsionlab::Result<PdeSystem> {
    match case {
        CaseTag::RealRoots => emit_system(case),
        CaseTag::ComplexRoots => emitted_golden(case),
    }
}

fn run(command: &Command, report: &mut RunReport) -> torsionlab::Result<()> {
    match command {
        Command::Simplify { expr, style } => {
            let f = frac(expr)?;
            println!("{}", render(&f.to_expr(), *style));
            report.equations = Some(vec![f.to_string()]);
        }
        Command::Invariants { f1, f2, at } => {
            let (f1, f2) = (frac(f1)?, frac(f2)?);
            let t = fels_torsion(&f1, &f2)?;
            let at = at.as_deref().map(parse_point).transpose()?;
            let class = classify(&t, at.as_ref())?;
            let flat = tensor_is_zero(&fels_curvature(&f1, &f2)?);
            println!("T = {}", format_matrix(&t));
            println!("class {class}, cone surface \"{}\"", class.surface());
            println!("curvature {}", if flat { "vanishes" } else { "nonzero" });
            report.metric("torsion", format_matrix(&t));
            report.metric("class", class.to_string());
            report.metric("surface", class.surface());
            report.metric("curvature_zero", flat);
        }
        Command::Lax(LaxCommand::Derive(CaseArg { case })) => {
            report.case = Some(case.name().into());
            let (y0, y1) = horizontal_frame(*case);
            let cmp = compare_eta(*case)?;
            println!("Y0 = {y0}");
            println!("Y1 = {y1}");
            println!("eta0 = {}", cmp.solved.eta0);
            println!("eta1 = {}", cmp.solved.eta1);
            report.check(cmp.solved.check.iter().all(Frac::is_zero), "solved eta's leave a p-residual");
            report.check(!cmp.solved.system.determinant.is_zero(), "eta system is singular");
            report.equations = Some(vec![cmp.solved.eta0.to_string(), cmp.solved.eta1.to_string()]);
            if cmp.matches() {
                println!("closed forms: equal");
            } else {
                println!("closed forms: differ");
                for (i, d) in cmp.difference.iter().enumerate() {
                    report.finding("mismatch", format!("eta{i}: solver minus closed form"), Some(d.to_string()));
                }
                report.finding(
                    "note",
                    format!("closed form satisfies the defining conditions: {}", cmp.closed_form_satisfies_conditions()),
                    None,
                );
                report.mark_finding();
            }
        }
        Command::Lax(LaxCommand::Closure { case: CaseArg { case }, u, v }) => {
            report.case = Some(case.name().into());
            let u = u.as_deref().map(frac).transpose()?;
            let v = v.as_deref().map(frac).transpose()?;
            let formal = u.is_none() && v.is_none();
            let r = closure_obstruction(*case, u.as_ref(), v.as_ref())?;
            for (dir, c) in ["p1", "p2", "lam"].iter().zip(&r) {
                if formal {
                    let terms = collect(c).map(|m| m.len()).unwrap_or(0);
                    println!("d_{dir}: {} numerator terms, {terms} lam-monomials", c.num().len());
                } else {
                    println!("d_{dir}: {c}");
                }
            }
            let zero = r.iter().all(Frac::is_zero);
            report.metric("closed", zero);
            if formal {
                println!("formal u, v: the coefficients define the PDE system (see `system emit`)");
            } else {
                for (dir, c) in ["p1", "p2", "lam"].iter().zip(&r).filter(|(_, c)| !c.is_zero()) {
                    report.violation(format!("[L0, L1] has a d_{dir} residual"), Some(c.to_string()));
                }
            }
        }
        Command::System(SystemCommand::Emit(CaseArg { case })) => {
            report.case = Some(case.name().into());
            let s = emit_system(*case)?;
            let lines = s.to_lines();
            for l in &lines {
                println!("{l}");
            }
            report.metric("count", lines.len());
            report.equations = Some(lines);
        }
        Command::System(SystemCommand::VerifyTranscribed(CaseArg { case })) => {
            report.case = Some(case.name().into());
            if *case != CaseTag::RealRoots {
                return Err(Error::Data("only the real case has a transcribed block".into()));
            }
            report.degree_bound = Some(0);
            let emitted = emit_system(*case)?;
            let r = equivalent_systems(&emitted, &transcribed_system(SystemTag::Explicit)?, 0)?;
            println!("emitted {} equations", emitted.len());
            print_membership("span", &r, report);
            report.metric("count", emitted.len());
        }
        Command::System(SystemCommand::Reduce { degree_bound }) => {
            report.degree_bound = Some(*degree_bound);
            let r = equivalent_systems(
                &transcribed_system(SystemTag::Explicit)?,
                &transcribed_system(SystemTag::Reduced)?,
                *degree_bound,
            )?;
            print_membership("explicit~reduced", &r, report);
        }
        Command::System(SystemCommand::Cases { degree_bound }) => {
            report.degree_bound = Some(*degree_bound);
            for c in case_split_check(*degree_bound)? {
                print_membership(&format!("case{}", c.case), &c.report, report);
                for line in &c.cancellations {
                    println!("  {line}");
                    report.finding("cancellation", format!("case {}: {line}", c.case), None);
                }
            }
            print_membership("mirror", &mirror_check()?, report);
        }
        Command::Solution(SolutionCommand::Check {
            case: CaseArg { case },
            u,
            v,
            numeric,
            seed,
            tol,
        }) => {
            report.case = Some(case.name().into());
            let cand = SolutionCandidate::parse(u, v)?;
            let system = derived_system(*case)?;
            let res = residuals(&system, &cand)?;
            let nonzero: Vec<_> = res.iter().enumerate().filter(|(_, r)| !r.is_zero()).collect();
            println!("{}/{} residuals vanish", res.len() - nonzero.len(), res.len());
            for (i, r) in &nonzero {
                report.violation(format!("equation {} has a nonzero residual", i + 1), Some(r.to_string()));
            }
            let c1 = separated_form_check(&cand)?;
            let nonflat = nonflat_check(&cand)?;
            let curv = curvature_nonzero(&cand)?;
            println!("separated form: {c1}; nonflat: {nonflat}; curvature nonzero: {curv}");
            report.metric("separated_form", c1);
            report.metric("nonflat", nonflat);
            report.metric("curvature_nonzero", curv);
            if let Some(n) = numeric {
                report.seed = Some(*seed);
                report.tol = Some(*tol);
                let nr = numeric_residuals(&system, &cand, *n, *seed, *tol)?;
                println!("numeric: max |residual| {:.3e} over {} points", nr.max_residual, nr.valid);
                report.metric("max_residual", nr.max_residual);
                if nonzero.is_empty() && !nr.passed() {
                    report.violation("symbolic and numeric residuals disagree", None);
                }
            }
        }
        Command::Cone(ConeCommand::Verify { case: CaseArg { case }, samples, tol, seed }) => {
            report.case = Some(case.name().into());
            report.seed = Some(*seed);
            report.tol = Some(*tol);
            let ruling = verify_ruling(*case, *samples, *tol, *seed);
            let chart = chart_equivalence(*case, *samples, *tol, *seed);
            for (name, r) in [("ruling", &ruling), ("chart", &chart)] {
                println!(
                    "{name}: {}, {} valid of {}, max |residual| {:.3e}",
                    r.status.name(),
                    r.valid,
                    r.samples,
                    r.max_residual
                );
                report.metric(&format!("{name}_max_residual"), r.max_residual);
                report.metric(&format!("{name}_valid"), r.valid);
                match r.status {
                    Status::Pass | Status::Finding => {}
                    Status::Fail => report.violation(format!("{name}: residual above tolerance"), None),
                    Status::Inconclusive => {
                        report.finding("inconclusive", format!("{name}: too few valid samples"), None);
                        if report.status == Status::Pass {
                            report.status = Status::Inconclusive;
                        }
                    }
                }
            }
        }
        Command::Suite => {
            for o in suite::run_all() {
                println!("{}", o.line());
                report.metric(&format!("criterion_{}", o.id), o.status.name());
                for d in &o.details {
                    if let Some(rest) = d.strip_prefix("finding: ") {
                        report.finding("finding", format!("criterion {}: {rest}", o.id), None);
                    }
                }
                if !o.passed() {
                    report.violation(format!("criterion {} failed", o.id), Some(o.details.join("; ")));
                }
            }
        }
    }
    Ok(())
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Simplify { .. } => "simplify",
        Command::Invariants { .. } => "invariants",
        Command::Lax(LaxCommand::Derive(_)) => "lax derive",
        Command::Lax(LaxCommand::Closure { .. }) => "lax closure",
        Command::System(SystemCommand::Emit(_)) => "system emit",
        Command::System(SystemCommand::VerifyTranscribed(_)) => "system verify-paper",
        Command::System(SystemCommand::Reduce { .. }) => "system reduce",
        Command::System(SystemCommand::Cases { .. }) => "system cases",
        Command::Solution(_) => "solution check",
        Command::Cone(_) => "cone verify",
        Command::Suite => "suite",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut report = RunReport::new(command_name(&cli.command));
    let start = Instant::now();
    let code = match run(&cli.command, &mut report) {
        Ok(()) => report.exit_code(),
        Err(e) => {
            eprintln!("error: {e}");
            report.status = Status::Fail;
            report.finding("error", e.to_string(), None);
            if is_usage(&e) {
                2
            } else {
                3
            }
        }
    };
    report.metric("runtime_ms", json!(start.elapsed().as_millis() as u64));
    if code <= 1 {
        eprintln!("status: {}", report.status.name());
    }
    if let Some(path) = &cli.json {
        if let Err(e) = report.write_json(path) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(3);
        }
    }
    ExitCode::from(code)
}
