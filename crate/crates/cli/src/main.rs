//! Command-line front end for the OGIS laboratory: single synthesis runs,
//! the separation experiment battery, and finite concept-class analyses.

mod report;

use clap::{Parser, Subcommand};
use ogis_lab::engine::{run_cegis, RunConfig, RunResult};
use ogis_lab::experiments::run_battery;
use ogis_lab::families::FamilySpec;
use ogis_lab::finite_lab::{
    min_set_cover, parse_class, parse_cover, setcover_to_fis, FiniteConceptClass,
};
use ogis_lab::learners::LearnerSpec;
use ogis_lab::query::OracleInterface;
use ogis_lab::transcript::TranscriptOrder;
use ogis_lab::verifiers::{Strategy, VerifierKind};
use report::{Format, Report, SummaryRow};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const EXIT_OK: u8 = 0;
const EXIT_ERROR: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_WRONG: u8 = 3;
const EXIT_BUDGET: u8 = 4;

#[derive(Parser)]
#[command(
    name = "ogis-lab",
    version,
    about = "Oracle-guided inductive synthesis laboratory",
    long_about = "Runs counterexample-guided synthesis dialogues against a catalog of decidable \
                  languages, replays the separation experiments, and analyzes finite concept \
                  classes (teaching dimension, VC dimension, set-cover reduction)."
)]
struct Cli {
    #[command(subcommand)]
    command: Commands,
}

#[derive(Subcommand)]
enum Commands {
    /// Run one synthesis dialogue and report its outcome.
    ///
    /// Exit codes: 0 identified, 3 converged to a wrong hypothesis,
    /// 4 budget exhausted without convergence, 2 usage error.
    Run(RunArgs),
    /// Run the fixed separation experiment battery (E1-E7).
    ///
    /// Exit code 0 iff every experiment passes.
    Separations(SeparationsArgs),
    /// Finite concept-class analyses over .cls / .scv files.
    Finite {
        #[command(subcommand)]
        cmd: FiniteCmd,
    },
}

#[derive(clap::Args)]
struct RunArgs {
    /// Language family: notcb, notpb, pb, or cbnotpb
    #[arg(long)]
    family: String,
    /// Target index within the family's member list
    #[arg(long)]
    target: u64,
    /// Verifier: check, mincheck, bcheck:B, or hcheck
    #[arg(long, default_value = "check")]
    verifier: String,
    /// Counterexample strategy for check: ascending, descending-capped:H,
    /// or seeded-random:S
    #[arg(long, default_value = "ascending")]
    strategy: String,
    /// Learner: gold-finite, chain, pbcegis-family3, consistent-enum,
    /// or lossy-gold-3
    #[arg(long)]
    learner: String,
    /// Transcript order: ascending or shuffle (seeded from --seed)
    #[arg(long, default_value = "ascending")]
    order: String,
    #[arg(long, default_value_t = 1000)]
    budget: usize,
    #[arg(long, default_value_t = 25)]
    window: usize,
    /// Learner memory bound in bytes
    #[arg(long, default_value_t = 4096)]
    memory_bound: usize,
    /// Seed (falls back to OGIS_LAB_SEED, then 42)
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(clap::Args)]
struct SeparationsArgs {
    /// Seed (falls back to OGIS_LAB_SEED, then 42)
    #[arg(long)]
    seed: Option<u64>,
    /// Reduced corpus sizes; same experiments and pass criteria
    #[arg(long)]
    quick: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Subcommand)]
enum FiniteCmd {
    /// Teaching dimension of a concept class, with per-concept sequences
    Td { file: PathBuf },
    /// VC dimension of a concept class
    Vc { file: PathBuf },
    /// Check VC/log2|C| <= TD <= |C|-1
    Bounds { file: PathBuf },
    /// Minimum counterexample set distinguishing a target concept
    Mincex {
        file: PathBuf,
        #[arg(long)]
        target: usize,
    },
    /// Reduce a set-cover instance and compare both minimum sizes
    Reduce { file: PathBuf },
    /// Worst-case sample complexity versus teaching dimension
    Mogis { file: PathBuf },
}

fn seed_or_default(arg: Option<u64>) -> u64 {
    arg.or_else(|| {
        std::env::var("OGIS_LAB_SEED")
            .ok()
            .and_then(|s| s.parse().ok())
    })
    .unwrap_or(42)
}

fn usage_error(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(EXIT_USAGE)
}

fn parse_strategy(s: &str) -> Result<Strategy, String> {
    if s == "ascending" {
        return Ok(Strategy::Ascending);
    }
    if let Some(rest) = s.strip_prefix("descending-capped:") {
        return rest
            .parse()
            .map(Strategy::DescendingCapped)
            .map_err(|_| format!("bad cap in strategy `{s}`"));
    }
    if let Some(rest) = s.strip_prefix("seeded-random:") {
        return rest
            .parse()
            .map(Strategy::SeededRandom)
            .map_err(|_| format!("bad seed in strategy `{s}`"));
    }
    Err(format!(
        "unknown strategy `{s}` (expected ascending, descending-capped:H, or seeded-random:S)"
    ))
}

fn parse_verifier(v: &str, strategy: Strategy) -> Result<VerifierKind, String> {
    match v {
        "check" => Ok(VerifierKind::Arbitrary(strategy)),
        "mincheck" => Ok(VerifierKind::Minimal),
        "hcheck" => Ok(VerifierKind::PositiveBounded),
        other => {
            if let Some(rest) = other.strip_prefix("bcheck:") {
                rest.parse()
                    .map(VerifierKind::ConstantBounded)
                    .map_err(|_| format!("bad bound in verifier `{other}`"))
            } else {
                Err(format!(
                    "unknown verifier `{other}` (expected check, mincheck, bcheck:B, or hcheck)"
                ))
            }
        }
    }
}

fn write_or_print(out: &Option<PathBuf>, rendered: &str) -> Result<(), String> {
    match out {
        Some(path) => std::fs::write(path, rendered)
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            print!("{rendered}");
            Ok(())
        }
    }
}

fn run_metrics(r: &RunResult) -> BTreeMap<String, String> {
    BTreeMap::from([
        ("converged".into(), r.converged.to_string()),
        ("identified".into(), r.identified.to_string()),
        ("final_hypothesis".into(), r.final_hypothesis.clone()),
        ("steps_used".into(), r.steps_used.to_string()),
        ("positive_queries".into(), r.positive_queries.to_string()),
        (
            "correctness_queries".into(),
            r.correctness_queries.to_string(),
        ),
        ("probe_queries".into(), r.probe_queries.to_string()),
        ("counterexamples".into(), r.counterexamples.to_string()),
        ("max_state_bytes".into(), r.max_state_bytes.to_string()),
    ])
}

fn cmd_run(args: RunArgs) -> ExitCode {
    let seed = seed_or_default(args.seed);
    let invocation: Vec<String> = [
        "run",
        "--family",
        &args.family,
        "--target",
        &args.target.to_string(),
        "--verifier",
        &args.verifier,
        "--strategy",
        &args.strategy,
        "--learner",
        &args.learner,
        "--order",
        &args.order,
        "--budget",
        &args.budget.to_string(),
        "--window",
        &args.window.to_string(),
        "--memory-bound",
        &args.memory_bound.to_string(),
        "--seed",
        &seed.to_string(),
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    let family = match FamilySpec::parse(&args.family) {
        Ok(f) => f,
        Err(e) => return usage_error(&e.to_string()),
    };
    let target = match family.target(args.target, seed) {
        Ok(t) => t,
        Err(e) => return usage_error(&e.to_string()),
    };
    let strategy = match parse_strategy(&args.strategy) {
        Ok(s) => s,
        Err(e) => return usage_error(&e),
    };
    let verifier = match parse_verifier(&args.verifier, strategy) {
        Ok(v) => v,
        Err(e) => return usage_error(&e),
    };
    let members = family.members(seed);
    let learner = match LearnerSpec::parse(&args.learner, Some(&members)) {
        Ok(l) => l,
        Err(e) => return usage_error(&e.to_string()),
    };
    let order = match args.order.as_str() {
        "ascending" => TranscriptOrder::Ascending,
        "shuffle" => TranscriptOrder::SeededShuffle(seed),
        other => return usage_error(&format!("unknown order `{other}`")),
    };

    let config = RunConfig {
        family_id: Some(family.id().to_string()),
        target,
        verifier,
        learner,
        order,
        step_budget: args.budget,
        stability_window: args.window,
        memory_bound: args.memory_bound,
        seed,
    };
    let result = match run_cegis(&config) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("run failed: {e}");
            return ExitCode::from(EXIT_ERROR);
        }
    };

    let status = if result.identified {
        "identified"
    } else if result.converged {
        "converged-wrong"
    } else {
        "budget-exhausted"
    };
    let report = Report::new(
        invocation,
        serde_json::to_value(vec![&result]).expect("run result serializes"),
        vec![SummaryRow {
            id: "run".into(),
            status: status.into(),
            metrics: run_metrics(&result),
        }],
    );
    if let Err(e) = write_or_print(&args.out, &report.render(args.format)) {
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_ERROR);
    }
    if args.out.is_some() {
        println!(
            "{status}: target {} -> {} in {} steps ({} correctness queries)",
            result.config.target,
            result.final_hypothesis,
            result.steps_used,
            result.correctness_queries
        );
    }
    match status {
        "identified" => ExitCode::from(EXIT_OK),
        "converged-wrong" => ExitCode::from(EXIT_WRONG),
        _ => ExitCode::from(EXIT_BUDGET),
    }
}

fn cmd_separations(args: SeparationsArgs) -> ExitCode {
    let seed = seed_or_default(args.seed);
    let mut invocation = vec!["separations".to_string(), "--seed".into(), seed.to_string()];
    if args.quick {
        invocation.push("--quick".into());
    }
    let outcome = run_battery(seed, args.quick);
    let summary: Vec<SummaryRow> = outcome
        .experiments
        .iter()
        .map(|e| SummaryRow {
            id: e.id.clone(),
            status: if e.pass { "pass" } else { "fail" }.into(),
            metrics: e
                .metrics
                .iter()
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
        })
        .collect();
    let report = Report::new(
        invocation,
        serde_json::to_value(&outcome).expect("battery serializes"),
        summary,
    );
    if let Err(e) = write_or_print(&args.out, &report.render(args.format)) {
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_ERROR);
    }
    for e in &outcome.experiments {
        eprintln!(
            "[{}] {}: {}",
            e.id,
            if e.pass { "pass" } else { "FAIL" },
            e.title
        );
    }
    if outcome.all_pass {
        ExitCode::from(EXIT_OK)
    } else {
        ExitCode::from(EXIT_ERROR)
    }
}

fn load_class(path: &Path) -> Result<FiniteConceptClass, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    parse_class(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn cmd_finite(cmd: FiniteCmd) -> ExitCode {
    let outcome: Result<(), String> = match cmd {
        FiniteCmd::Td { file } => load_class(&file).and_then(|class| {
            let r = class.teaching_dimension().map_err(|e| e.to_string())?;
            println!("TD = {}", r.td);
            for seq in &r.per_concept {
                let rendered: Vec<String> = seq
                    .examples
                    .iter()
                    .map(|(e, label)| format!("{}{e}", if *label { '+' } else { '-' }))
                    .collect();
                println!("concept {}: {{{}}}", seq.concept, rendered.join(", "));
            }
            Ok(())
        }),
        FiniteCmd::Vc { file } => load_class(&file).and_then(|class| {
            let vc = class.vc_dimension().map_err(|e| e.to_string())?;
            println!("VC = {vc}");
            Ok(())
        }),
        FiniteCmd::Bounds { file } => load_class(&file).and_then(|class| {
            let r = class.td_bounds_check().map_err(|e| e.to_string())?;
            if r.lower_checked {
                println!(
                    "{} <= {} <= {}: {}",
                    r.lower,
                    r.td,
                    r.upper,
                    if r.pass { "pass" } else { "fail" }
                );
            } else {
                println!(
                    "TD = {} <= {} (lower bound skipped for a single-concept class): {}",
                    r.td,
                    r.upper,
                    if r.pass { "pass" } else { "fail" }
                );
            }
            Ok(())
        }),
        FiniteCmd::Mincex { file, target } => load_class(&file).and_then(|class| {
            let set = class
                .min_counterexample_set(target)
                .map_err(|e| e.to_string())?;
            let rendered: Vec<String> = set.iter().map(|e| e.to_string()).collect();
            println!(
                "minimum counterexample set (size {}): {{{}}}",
                set.len(),
                rendered.join(", ")
            );
            Ok(())
        }),
        FiniteCmd::Reduce { file } => {
            let text = std::fs::read_to_string(&file)
                .map_err(|e| format!("cannot read {}: {e}", file.display()));
            text.and_then(|t| {
                let inst = parse_cover(&t).map_err(|e| format!("{}: {e}", file.display()))?;
                let cover = min_set_cover(&inst).map_err(|e| e.to_string())?;
                let class = setcover_to_fis(&inst).map_err(|e| e.to_string())?;
                let target = class.target().expect("reduction sets a target");
                let mcs = class
                    .min_counterexample_set(target)
                    .map_err(|e| e.to_string())?;
                println!("minimum set cover size: {}", cover.len());
                println!("reduced minimum counterexample set size: {}", mcs.len());
                println!(
                    "sizes {}",
                    if cover.len() == mcs.len() {
                        "agree"
                    } else {
                        "DISAGREE"
                    }
                );
                Ok(())
            })
        }
        FiniteCmd::Mogis { file } => load_class(&file).and_then(|class| {
            let r = class
                .ogis_sample_complexity(&OracleInterface::finite_class())
                .map_err(|e| e.to_string())?;
            println!(
                "measured worst-case examples = {}, TD = {}: {}",
                r.measured_worst,
                r.td,
                if r.pass {
                    "measured >= TD"
                } else {
                    "measured < TD"
                }
            );
            Ok(())
        }),
    };
    match outcome {
        Ok(()) => ExitCode::from(EXIT_OK),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Commands::Run(args) => cmd_run(args),
        Commands::Separations(args) => cmd_separations(args),
        Commands::Finite { cmd } => cmd_finite(cmd),
    }
}
