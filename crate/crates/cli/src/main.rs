//! Command-line front end: parse specs, dispatch to checkers, operators and
//! verifiers, and emit machine-readable reports.
//!
//! Exit codes: 0 when the outcome is holds/pass, 2 when a condition fails or
//! diverges (the report is still emitted), 1 on usage, parse or configuration
//! errors. Reports are versioned JSON (schema 1) and byte-deterministic for
//! fixed inputs, seeds and configuration, regardless of the thread count.

use clap::{Args, Parser, Subcommand, ValueEnum};
use orliczkit_core::conditions::{self, CondStatus, ConditionReport, FourWeights};
use orliczkit_core::funcspace::{self, Domain, PowerWeight};
use orliczkit_core::operators::{self, OperatorTag};
use orliczkit_core::report::Report;
use orliczkit_core::verify;
use orliczkit_core::youngfn::{self, parse_young_spec};
use orliczkit_core::{Error, LogGrid};
use serde_json::{json, Value};
use std::path::PathBuf;

mod config;
use config::RunConfig;

#[derive(Parser)]
#[command(
    name = "orliczkit",
    version,
    about = "Young functions, weighted gauges, dilation-commuting operators, and integral condition checkers"
)]
struct Cli {
    #[command(flatten)]
    run: RunFlags,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct RunFlags {
    /// Grid points (≥ 3)
    #[arg(long, global = true)]
    grid_points: Option<usize>,
    /// Grid lower end (> 0)
    #[arg(long, global = true)]
    grid_lo: Option<f64>,
    /// Grid upper end
    #[arg(long, global = true)]
    grid_hi: Option<f64>,
    /// Worker threads (also ORLICZKIT_THREADS)
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Configuration file (JSON)
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write the report here instead of stdout
    #[arg(long, global = true)]
    json: Option<PathBuf>,
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Inspect a Young function spec
    Young {
        #[command(subcommand)]
        sub: YoungCmd,
    },
    /// Gauge ρ_{Φ, ε|x|^γ}(f) of a step function
    Gauge {
        #[arg(long)]
        phi: String,
        #[arg(long)]
        gamma: f64,
        #[arg(long, default_value_t = 1.0)]
        coeff: f64,
        #[arg(long = "fn")]
        file: PathBuf,
        #[arg(long, default_value_t = 1.0)]
        eps: f64,
        #[arg(long, value_enum, default_value_t = DomainArg::RPlus)]
        domain: DomainArg,
        /// Use the s-homogeneous gauge ρ^(s) instead
        #[arg(long)]
        s: Option<f64>,
    },
    /// Apply an operator to a step function and evaluate pointwise
    Apply {
        /// P:p=<r> | Q:q=<r> | I | M | H
        #[arg(long)]
        op: String,
        #[arg(long = "fn")]
        file: PathBuf,
        /// Comma-separated evaluation points
        #[arg(long)]
        at: String,
        #[arg(long, value_enum, default_value_t = DomainArg::RPlus)]
        domain: DomainArg,
    },
    /// Run a condition checker
    Check {
        #[command(subcommand)]
        sub: CheckCmd,
    },
    /// Run a verification suite
    Verify {
        #[command(subcommand)]
        sub: VerifyCmd,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum DomainArg {
    #[value(name = "r+")]
    RPlus,
    R,
}

impl From<DomainArg> for Domain {
    fn from(d: DomainArg) -> Domain {
        match d {
            DomainArg::RPlus => Domain::RPlus,
            DomainArg::R => Domain::R,
        }
    }
}

#[derive(Subcommand)]
enum YoungCmd {
    /// Parse and sample Φ, φ, φ⁻¹, Ψ on the grid
    Show {
        #[arg(long)]
        spec: String,
    },
}

#[derive(Subcommand)]
enum CheckCmd {
    /// BK condition for the Hardy operator P_p
    BkP {
        #[arg(long)]
        phi1: String,
        #[arg(long)]
        phi2: String,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        gamma: f64,
        /// Use the Remark's reformulated predicate
        #[arg(long)]
        remark: bool,
    },
    /// BK condition for the adjoint Hardy operator Q_q
    BkQ {
        #[arg(long)]
        phi1: String,
        #[arg(long)]
        phi2: String,
        #[arg(long)]
        q: f64,
        #[arg(long)]
        gamma: f64,
    },
    /// Maximal-operator condition (Δ₂ for Ψ plus the averaged inverse bound)
    Maximal {
        #[arg(long)]
        phi: String,
        #[arg(long)]
        gamma: f64,
    },
    /// Hilbert-transform condition (Δ₂ pair plus the averaged inverse bound)
    Hilbert {
        #[arg(long)]
        phi: String,
        #[arg(long)]
        gamma: f64,
    },
    /// Interval A_φ condition for the weight coeff·|x|^γ
    Aphi {
        #[arg(long)]
        phi: String,
        #[arg(long)]
        gamma: f64,
        #[arg(long, default_value_t = 1.0)]
        coeff: f64,
    },
    /// Interval BK condition for the weight coeff·|x|^γ
    BkGeneral {
        #[arg(long)]
        phi: String,
        #[arg(long)]
        gamma: f64,
        #[arg(long, default_value_t = 1.0)]
        coeff: f64,
    },
    /// Four-weight condition with power weights t, u, v, w
    Fourweight {
        #[arg(long)]
        phi1: String,
        #[arg(long)]
        phi2: String,
        #[arg(long, default_value_t = 0.0)]
        gamma_t: f64,
        #[arg(long, default_value_t = 0.0)]
        gamma_u: f64,
        #[arg(long, default_value_t = 0.0)]
        gamma_v: f64,
        #[arg(long, default_value_t = -1.0)]
        gamma_w: f64,
    },
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Gauge ⇔ modular equivalence on a random corpus
    Theorem1 {
        #[arg(long)]
        phi1: String,
        #[arg(long)]
        phi2: String,
        /// P:p=<r> | Q:q=<r> | M | H
        #[arg(long)]
        op: String,
        #[arg(long)]
        gamma: f64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        count: usize,
    },
    /// Weak-type ⇔ strong modular for the primitive If
    Weakstrong {
        #[arg(long)]
        phi1: String,
        #[arg(long)]
        phi2: String,
        #[arg(long, default_value_t = 0.0)]
        gamma_t: f64,
        #[arg(long, default_value_t = 0.0)]
        gamma_u: f64,
        #[arg(long, default_value_t = 0.0)]
        gamma_v: f64,
        #[arg(long, default_value_t = -1.0)]
        gamma_w: f64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        count: usize,
    },
    /// Condition checker verdict corroborated on a corpus
    Predicts {
        #[arg(long)]
        op: String,
        #[arg(long)]
        phi1: String,
        #[arg(long)]
        phi2: String,
        /// p for P, q for Q (ignored for M and H)
        #[arg(long, default_value_t = 1.0)]
        p: f64,
        #[arg(long)]
        gamma: f64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        count: usize,
    },
    /// Exact counterexample report (A_φ fails, BK holds)
    Counterexample {
        #[arg(long, default_value_t = 1.0)]
        gamma: f64,
        #[arg(long, default_value_t = 8)]
        kmax: usize,
    },
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // clap's own exit code for usage errors is 2; the contract here
            // reserves 2 for failing conditions
            let is_usage_error = e.use_stderr();
            let _ = e.print();
            std::process::exit(if is_usage_error { 1 } else { 0 });
        }
    };
    let code = match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    };
    std::process::exit(code);
}

fn run(cli: Cli) -> Result<i32, Error> {
    let cfg = RunConfig::assemble(&cli.run)?;
    orliczkit_core::parallel::set_thread_count(cfg.threads);
    let grid = cfg.grid()?;
    let (mut report, code) = dispatch(&cli.command, &cfg, &grid)?;
    report.params.insert("config".into(), cfg.echo());
    let text = match cli.run.format {
        Format::Json => report.to_json(),
        Format::Csv => to_csv(&report),
    };
    match &cli.run.json {
        Some(path) => std::fs::write(path, text + "\n")
            .map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display())))?,
        None => println!("{text}"),
    }
    Ok(code)
}

fn to_csv(report: &Report) -> String {
    let mut rows = vec![
        format!("schema,{}", report.schema),
        format!("tool_version,{}", report.tool_version),
        format!("command,{}", report.command),
        format!("status,{}", report.status),
    ];
    if let Some(c) = report.c_min {
        rows.push(format!("c_min,{c}"));
    }
    for (k, v) in &report.params {
        rows.push(format!("param.{k},{v}"));
    }
    rows.push(format!("grid,{}", report.grid));
    rows.join("\n")
}

fn exit_code_for(status: &str) -> i32 {
    match status {
        "holds" | "pass" => 0,
        _ => 2,
    }
}

fn condition_into_report(command: &str, rep: ConditionReport) -> (Report, i32) {
    let status = match rep.status {
        CondStatus::Holds => "holds",
        CondStatus::Fails => "fails",
        CondStatus::Divergent => "divergent",
    };
    let mut out = Report::new(command, status);
    for (k, v) in &rep.params {
        out.params.insert(k.clone(), v.clone());
    }
    out.c_min = rep.c_min;
    out.witness = rep
        .witness
        .as_ref()
        .map(|w| serde_json::to_value(w).expect("serializable witness"));
    out.grid = Value::String(rep.grid.clone());
    out.tolerances = rep.tolerances.clone();
    out.values = Some(json!({ "notes": rep.notes }));
    let code = exit_code_for(status);
    (out, code)
}

fn dispatch(cmd: &Command, cfg: &RunConfig, grid: &LogGrid) -> Result<(Report, i32), Error> {
    match cmd {
        Command::Young { sub: YoungCmd::Show { spec } } => {
            let y = parse_young_spec(spec)?;
            let d2 = youngfn::check_delta2(&y, grid);
            let mut samples = Vec::new();
            for t in grid.values().into_iter().step_by(grid.points / 12 + 1) {
                samples.push(json!({
                    "t": t,
                    "phi": y.phi(t),
                    "Phi": y.big_phi(t),
                    "phi_inv": y.phi_inv(t).ok(),
                    "Psi": y.psi(t).ok(),
                }));
            }
            let mut rep = Report::new("young show", "pass")
                .param("spec", spec.as_str())
                .param("kind", format!("{:?}", y.kind()));
            rep.values = Some(json!({
                "samples": samples,
                "delta2": serde_json::to_value(&d2).expect("serializable"),
            }));
            rep.grid = Value::String(grid.describe());
            Ok((rep, 0))
        }
        Command::Gauge { phi, gamma, coeff, file, eps, domain, s } => {
            let y = parse_young_spec(phi)?;
            let text = std::fs::read_to_string(file)
                .map_err(|e| Error::Config(format!("cannot read {}: {e}", file.display())))?;
            let f = funcspace::step_from_json((*domain).into(), &text)?;
            let w = PowerWeight::new(*gamma, *coeff)?;
            let g = match s {
                Some(s) => funcspace::gauge_s(&y, &f, &w, *s)?,
                None => funcspace::gauge(&y, &f, &w, *eps)?,
            };
            let mut rep = Report::new("gauge", "pass")
                .param("phi", phi.as_str())
                .param("gamma", *gamma)
                .param("eps", *eps);
            rep.values = Some(json!({
                "value": g.value,
                "bracket": g.bracket,
                "iterations": g.iterations,
                "residual": g.residual,
            }));
            rep.grid = Value::String(grid.describe());
            Ok((rep, 0))
        }
        Command::Apply { op, file, at, domain } => {
            let tag = OperatorTag::parse(op)?;
            let text = std::fs::read_to_string(file)
                .map_err(|e| Error::Config(format!("cannot read {}: {e}", file.display())))?;
            let f = funcspace::step_from_json((*domain).into(), &text)?;
            let applied = operators::apply(tag, &f)?;
            let mut pairs = Vec::new();
            for tok in at.split(',') {
                let x: f64 = tok
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad evaluation point '{tok}'")))?;
                pairs.push(json!({"x": x, "value": applied.eval(x)}));
            }
            let mut rep = Report::new("apply", "pass")
                .param("op", tag.label())
                .param("domain", format!("{:?}", Domain::from(*domain)));
            rep.values = Some(Value::Array(pairs));
            Ok((rep, 0))
        }
        Command::Check { sub } => {
            let (name, rep) = run_check(sub, grid)?;
            Ok(condition_into_report(name, rep))
        }
        Command::Verify { sub } => run_verify(sub, cfg, grid),
    }
}

fn run_check(sub: &CheckCmd, grid: &LogGrid) -> Result<(&'static str, ConditionReport), Error> {
    match sub {
        CheckCmd::BkP { phi1, phi2, p, gamma, remark } => {
            let y1 = parse_young_spec(phi1)?;
            let y2 = parse_young_spec(phi2)?;
            let rep = if *remark {
                conditions::check_bk_pp_remark(&y1, &y2, *p, *gamma, grid)?
            } else {
                conditions::check_bk_pp(&y1, &y2, *p, *gamma, grid)?
            };
            Ok(("check bk-p", rep))
        }
        CheckCmd::BkQ { phi1, phi2, q, gamma } => {
            let y1 = parse_young_spec(phi1)?;
            let y2 = parse_young_spec(phi2)?;
            Ok(("check bk-q", conditions::check_bk_qq(&y1, &y2, *q, *gamma, grid)?))
        }
        CheckCmd::Maximal { phi, gamma } => {
            let y = parse_young_spec(phi)?;
            Ok(("check maximal", conditions::check_maximal_condition(&y, *gamma, grid)?))
        }
        CheckCmd::Hilbert { phi, gamma } => {
            let y = parse_young_spec(phi)?;
            Ok(("check hilbert", conditions::check_hilbert_condition(&y, *gamma, grid)?))
        }
        CheckCmd::Aphi { phi, gamma, coeff } => {
            let y = parse_young_spec(phi)?;
            let w = PowerWeight::new(*gamma, *coeff)?;
            let intervals = conditions::default_intervals(&y, grid);
            let eps = [0.25, 1.0, 4.0];
            Ok(("check aphi", conditions::check_aphi_general(&y, &w, &intervals, &eps)?))
        }
        CheckCmd::BkGeneral { phi, gamma, coeff } => {
            let y = parse_young_spec(phi)?;
            let w = PowerWeight::new(*gamma, *coeff)?;
            let intervals = conditions::default_intervals(&y, grid);
            let lams = conditions::default_scalar_grid(&LogGrid::new(1e-3, 1e3, 25)?, 25);
            Ok(("check bk-general", conditions::check_bk_general(&y, &w, &intervals, &lams)?))
        }
        CheckCmd::Fourweight { phi1, phi2, gamma_t, gamma_u, gamma_v, gamma_w } => {
            let y1 = parse_young_spec(phi1)?;
            let y2 = parse_young_spec(phi2)?;
            let weights = FourWeights {
                t: PowerWeight::plain(*gamma_t),
                u: PowerWeight::plain(*gamma_u),
                v: PowerWeight::plain(*gamma_v),
                w: PowerWeight::plain(*gamma_w),
            };
            let lams = conditions::default_scalar_grid(&LogGrid::new(1e-2, 1e2, 9)?, 9);
            let xs = conditions::default_scalar_grid(&LogGrid::new(1e-2, 1e2, 13)?, 13);
            Ok((
                "check fourweight",
                conditions::check_fourweight_condition(&y1, &y2, &weights, &lams, &xs)?,
            ))
        }
    }
}

fn run_verify(sub: &VerifyCmd, _cfg: &RunConfig, grid: &LogGrid) -> Result<(Report, i32), Error> {
    match sub {
        VerifyCmd::Theorem1 { phi1, phi2, op, gamma, seed, count } => {
            let y1 = parse_young_spec(phi1)?;
            let y2 = parse_young_spec(phi2)?;
            let tag = OperatorTag::parse(op)?;
            let domain = match tag {
                OperatorTag::M | OperatorTag::H => Domain::R,
                _ => Domain::RPlus,
            };
            let corpus = verify::Corpus::new(*seed, *count, domain);
            let r = verify::verify_gauge_modular_equiv(&y1, &y2, tag, *gamma, &corpus)?;
            let status = if r.passed { "pass" } else { "fails" };
            let mut rep = Report::new("verify theorem1", status)
                .param("phi1", phi1.as_str())
                .param("phi2", phi2.as_str())
                .param("op", tag.label())
                .param("gamma", *gamma)
                .param("seed", *seed)
                .param("count", *count);
            rep.values = Some(verify::report_to_value(&r));
            rep.grid = Value::String(grid.describe());
            Ok((rep, exit_code_for(status)))
        }
        VerifyCmd::Weakstrong {
            phi1, phi2, gamma_t, gamma_u, gamma_v, gamma_w, seed, count,
        } => {
            let y1 = parse_young_spec(phi1)?;
            let y2 = parse_young_spec(phi2)?;
            let weights = FourWeights {
                t: PowerWeight::plain(*gamma_t),
                u: PowerWeight::plain(*gamma_u),
                v: PowerWeight::plain(*gamma_v),
                w: PowerWeight::plain(*gamma_w),
            };
            let corpus = verify::Corpus::new(*seed, *count, Domain::RPlus);
            let lams = conditions::default_scalar_grid(&LogGrid::new(1e-3, 1e3, 17)?, 17);
            let r = verify::verify_weak_strong(&y1, &y2, &weights, &corpus, &lams)?;
            let status = if r.passed { "pass" } else { "fails" };
            let mut rep = Report::new("verify weakstrong", status)
                .param("phi1", phi1.as_str())
                .param("phi2", phi2.as_str())
                .param("seed", *seed)
                .param("count", *count);
            rep.values = Some(verify::report_to_value(&r));
            Ok((rep, exit_code_for(status)))
        }
        VerifyCmd::Predicts { op, phi1, phi2, p, gamma, seed, count } => {
            let y1 = parse_young_spec(phi1)?;
            let y2 = parse_young_spec(phi2)?;
            let tag = OperatorTag::parse(op)?;
            let domain = match tag {
                OperatorTag::M | OperatorTag::H => Domain::R,
                _ => Domain::RPlus,
            };
            let corpus = verify::Corpus::new(*seed, *count, domain);
            let r = verify::verify_condition_predicts(tag, &y1, &y2, *p, *gamma, &corpus, grid)?;
            let status = if r.passed { "pass" } else { "fails" };
            let mut rep = Report::new("verify predicts", status)
                .param("op", tag.label())
                .param("phi1", phi1.as_str())
                .param("phi2", phi2.as_str())
                .param("p_or_q", *p)
                .param("gamma", *gamma)
                .param("seed", *seed)
                .param("count", *count);
            rep.values = Some(verify::report_to_value(&r));
            rep.grid = Value::String(grid.describe());
            Ok((rep, exit_code_for(status)))
        }
        VerifyCmd::Counterexample { gamma, kmax } => {
            let r = verify::counterexample_report(*gamma, *kmax)?;
            let status = if r.pass { "pass" } else { "fails" };
            let mut rep = Report::new("verify counterexample", status)
                .param("gamma", *gamma)
                .param("kmax", *kmax);
            rep.values = Some(verify::report_to_value(&r));
            Ok((rep, exit_code_for(status)))
        }
    }
}
