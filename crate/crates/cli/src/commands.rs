//! Subcommand implementations.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Duration;

use transted::eval::{
    self, binarize, compute_metrics, emit_report, format_threshold, matrix_at, percent,
    score_dataset, threshold_sweep, MetricsError, MetricsReport, Policy, Report, ReportFormat,
    Scorer, SweepError, SweepResult,
};
use transted::oracle::{shortest_path_pseudometric, solve_max_pseudometric, verify_membership, FiniteInstance};
use transted::parser::statement_opt;
use transted::ted::{self as ted_mod, similarity_from_distance, EditCosts};
use transted::transform::{transted_trees, BudgetError, RuleLibrary, SearchBudget};
use transted::OperatorTree;

use crate::error::{syntax, CliError};
use crate::{EvalArgs, FormatArg, Metric, Pair, PolicyArg, SearchArgs};

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

/// Statement text and a name for diagnostics.
fn statement_source(arg: &str, from_file: bool, name: &str) -> Result<(String, String), CliError> {
    if from_file {
        Ok((read(Path::new(arg))?, arg.to_string()))
    } else {
        Ok((arg.to_string(), name.to_string()))
    }
}

fn parse_tree(arg: &str, from_file: bool, name: &str) -> Result<OperatorTree, CliError> {
    let (source, name) = statement_source(arg, from_file, name)?;
    statement_opt(&source).map_err(|e| syntax(&name, &source, &e))
}

fn pair_trees(pair: &Pair) -> Result<(OperatorTree, OperatorTree), CliError> {
    Ok((
        parse_tree(&pair.first, pair.from_file, "first")?,
        parse_tree(&pair.second, pair.from_file, "second")?,
    ))
}

/// Full-precision value followed by its two-decimal display.
fn real(x: f64) -> String {
    format!("{x:?} ({x:.2})")
}

fn budget(args: &SearchArgs) -> Result<SearchBudget, CliError> {
    let wall = match args.max_seconds {
        None => None,
        Some(s) if s.is_finite() && s > 0.0 => Some(Duration::from_secs_f64(s)),
        Some(_) => return Err(BudgetError::WallTime.into()),
    };
    Ok(SearchBudget::new(args.max_nodes, args.max_depth, wall)?)
}

fn rules(args: &SearchArgs) -> Result<RuleLibrary, CliError> {
    match &args.rules {
        None => Ok(RuleLibrary::default_library()),
        Some(path) => RuleLibrary::from_json(&read(path)?)
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display()))),
    }
}

pub fn parse(statement: &str, from_file: bool) -> Result<(), CliError> {
    let tree = parse_tree(statement, from_file, "statement")?;
    println!("{}", tree.to_json());
    Ok(())
}

pub fn ted(pair: &Pair, script: bool) -> Result<(), CliError> {
    let (t1, t2) = pair_trees(pair)?;
    let (distance, edits) = ted_mod::ted(&t1, &t2, &EditCosts::unit());
    println!("distance: {distance}");
    println!("similarity: {}", real(similarity_from_distance(distance, &t1, &t2)));
    if script {
        println!("script: {}", serde_json::to_string(&edits).expect("scripts serialize"));
    }
    Ok(())
}

pub fn transted(pair: &Pair, search: &SearchArgs) -> Result<(), CliError> {
    let budget = budget(search)?;
    let rules = rules(search)?;
    let (t1, t2) = pair_trees(pair)?;
    let r = transted_trees(&t1, &t2, &budget, &rules)?;
    let trace: Vec<String> = r.trace.iter().map(ToString::to_string).collect();
    println!("distance: {}", r.distance);
    println!("similarity: {}", real(r.similarity));
    println!("proved: {}", r.proved_equal);
    println!("initial distance: {}", r.initial_distance);
    println!("expanded: {}", r.expanded);
    if r.timed_out {
        println!("timed out: true");
    }
    println!("trace: [{}]", trace.join(", "));
    Ok(())
}

fn policy(p: PolicyArg) -> Policy {
    match p {
        PolicyArg::Strict => Policy::Strict,
        PolicyArg::HumanInLoop => Policy::HumanInLoop,
    }
}

fn load_error(e: eval::LoadError) -> CliError {
    match e {
        eval::LoadError::Io { .. } => CliError::Io(e.to_string()),
        _ => CliError::Input(e.to_string()),
    }
}

fn sweep_summary(out: &mut String, sweep: &SweepResult) {
    let _ = writeln!(out, "thresholds: {}", sweep.points.len());
    match sweep.best_by_kappa {
        Some(t) => {
            let r = &sweep.point(t).expect("best threshold is a candidate").report;
            let _ = writeln!(out, "best by kappa: threshold {} kappa {} accuracy {}", format_threshold(t), real(r.kappa), percent(Some(r.accuracy)));
        }
        None => out.push_str("best by kappa: n/a\n"),
    }
    let t = sweep.best_by_accuracy;
    let r = &sweep.point(t).expect("best threshold is a candidate").report;
    let _ = writeln!(out, "best by accuracy: threshold {} accuracy {} kappa {}", format_threshold(t), real(r.accuracy), real(r.kappa));
}

pub fn eval(args: &EvalArgs) -> Result<(), CliError> {
    if args.jobs == 0 {
        return Err(CliError::Input("--jobs must be positive".to_string()));
    }
    if args.threshold.is_nan() {
        return Err(CliError::Input("--threshold must be a number".to_string()));
    }
    let budget = budget(&args.search)?;
    let (library, external) = match args.metric {
        Metric::Transted => (Some(rules(&args.search)?), None),
        Metric::External => {
            let path: &PathBuf = args
                .scores
                .as_ref()
                .ok_or_else(|| CliError::Input("--metric external requires --scores".to_string()))?;
            (None, Some(eval::load_external_scores(path).map_err(load_error)?))
        }
        Metric::Ted => (None, None),
    };
    let records = eval::load_benchmark(&args.benchmark).map_err(load_error)?;
    let scorer = match (&library, &external) {
        (Some(rules), _) => Scorer::TransTed { budget, rules },
        (_, Some(map)) => Scorer::External(map),
        _ => Scorer::Ted,
    };
    let entries = score_dataset(&records, &scorer, args.jobs).map_err(|e| CliError::Input(e.to_string()))?;

    let policy = policy(args.policy);
    let mut scores = Vec::new();
    let mut truths = Vec::new();
    let mut summary = String::new();
    for (rec, entry) in records.iter().zip(&entries) {
        match (entry.score, &entry.error) {
            (Some(s), _) => {
                scores.push(s);
                truths.push(binarize(rec.annotation, policy));
            }
            (None, error) => eprintln!("warning: {}: {}", rec.id, error.as_deref().unwrap_or("no score")),
        }
    }
    let degraded = entries.iter().filter(|e| e.degraded).count();
    let _ = writeln!(
        summary,
        "records: {} (scored {}, errors {}, degraded {})",
        records.len(),
        scores.len(),
        records.len() - scores.len(),
        degraded
    );
    let _ = writeln!(summary, "policy: {policy} (true {} of {})", truths.iter().filter(|&&t| t).count(), truths.len());
    if scores.is_empty() {
        return Err(CliError::Input("no record could be scored".to_string()));
    }

    let report = if args.sweep {
        let sweep = match threshold_sweep(&scores, &truths) {
            Ok(s) => s,
            Err(SweepError::Degenerate { truth, sweep }) => {
                eprintln!("warning: every record is {truth} under {policy}; kappa is not informative");
                sweep
            }
            Err(e) => return Err(CliError::Input(e.to_string())),
        };
        sweep_summary(&mut summary, &sweep);
        Report::Sweep { sweep }
    } else {
        let cm = matrix_at(&scores, &truths, args.threshold);
        let metrics: MetricsReport = match compute_metrics(cm) {
            Ok(m) => m,
            Err(MetricsError::Degenerate(m)) => {
                eprintln!("warning: degenerate confusion matrix at threshold {}", format_threshold(args.threshold));
                m
            }
            Err(MetricsError::Empty) => unreachable!("scores are non-empty"),
        };
        let _ = writeln!(summary, "threshold {}: {metrics}", format_threshold(args.threshold));
        Report::Metrics {
            threshold: args.threshold,
            metrics,
        }
    };

    let format = match args.format {
        FormatArg::Json => ReportFormat::Json,
        FormatArg::Csv => ReportFormat::Csv,
    };
    let doc = emit_report(&report, format);
    match &args.out {
        Some(path) => {
            std::fs::write(path, doc).map_err(|e| CliError::io(path, e))?;
            print!("{summary}");
        }
        None => {
            print!("{doc}");
            eprint!("{summary}");
        }
    }
    Ok(())
}

pub fn oracle(path: &Path) -> Result<(), CliError> {
    let text = read(path)?;
    let instance = FiniteInstance::from_json(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let table = solve_max_pseudometric(&instance);
    let violations = verify_membership(&instance, &table);
    let matches_shortest_paths = instance
        .constraints
        .is_empty()
        .then(|| shortest_path_pseudometric(&instance.bound) == table);
    let out = serde_json::json!({
        "points": instance.points,
        "table": table,
        "member": violations.is_empty(),
        "violations": violations,
        "matches_shortest_paths": matches_shortest_paths,
    });
    println!("{}", serde_json::to_string_pretty(&out).expect("tables serialize"));
    Ok(())
}
