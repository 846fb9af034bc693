mod cache;
mod table;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use cliffhier::classify::{
    classify_cycle_structures, count_ae_classes_full, extend_classification, normalize_shape,
    shape_label, verify_4q_representatives, ClassifyOptions, CycleClassification,
    MAX_DIRECT_QUBITS,
};
use cliffhier::gates::parse_circuit;
use cliffhier::hierarchy::{
    default_cap, diag_group_order, generate_diag_group, is_semi_clifford, level, DiagGroupSpec,
    DIAG_GROUP_GUARD,
};
use cliffhier::search::{sweep_ch3, ClassSpace, SweepOptions, Verdict};
use cliffhier::{Circuit, STATE_INDEX_CONVENTION};
use serde::Serialize;
use thiserror::Error;

use cache::{to_sorted_json, Cache};
use table::TableFormat;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Guard(String),
    #[error("{0}")]
    Expectation(String),
    #[error("{0}")]
    MissingDatabase(String),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Library(String),
}

impl From<cliffhier::Error> for CliError {
    fn from(e: cliffhier::Error) -> Self {
        match e {
            cliffhier::Error::Parse { .. } => CliError::Parse(e.to_string()),
            cliffhier::Error::GuardExceeded(_) => CliError::Guard(e.to_string()),
            other => CliError::Library(other.to_string()),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Expectation(_) => 1,
            CliError::Parse(_) => 2,
            CliError::Guard(_) => 3,
            CliError::MissingDatabase(_) | CliError::Io(_) | CliError::Library(_) => 4,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Status messages go to stderr; stdout carries only the artifact.
pub fn progress(msg: &str) {
    eprintln!("[cliffhier] {msg}");
}

#[derive(Parser)]
#[command(
    name = "cliffhier",
    version,
    about = "Permutation gates in the qubit Clifford hierarchy"
)]
struct Cli {
    /// Worker threads for parallel steps (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Expect {
    AllSemiClifford,
    CounterexampleFound,
}

#[derive(Subcommand)]
enum Command {
    /// Clifford hierarchy level of a circuit file.
    Level {
        file: PathBuf,
        /// Highest level tried; defaults to qubits + 2.
        #[arg(long)]
        cap: Option<u32>,
        #[arg(long, value_enum, default_value = "text")]
        format: OutputFormat,
    },
    /// Whether a circuit file is semi-Clifford.
    Semiclifford {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: OutputFormat,
    },
    /// Affine equivalence classes of all permutations on N qubits (N <= 3).
    ClassifyPerms {
        #[arg(long)]
        qubits: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: OutputFormat,
    },
    /// Classes of one cycle shape, stored in the class database.
    ClassifyCycles {
        /// Cycle lengths such as `4,2`; `id` for the identity.
        #[arg(long, value_parser = parse_shape)]
        shape: Shape,
        #[arg(long)]
        qubits: usize,
        /// Extend the result qubit by qubit up to this count.
        #[arg(long)]
        extend_to: Option<usize>,
        #[arg(long, value_enum, default_value = "text")]
        format: OutputFormat,
    },
    /// Levels and class distinctness of the five 4-qubit representatives.
    #[command(name = "verify-4q")]
    Verify4q {
        #[arg(long, value_enum, default_value = "text")]
        format: OutputFormat,
    },
    /// Exhaustive check that third-level 4-qubit gates are semi-Clifford.
    #[command(name = "sweep-ch3")]
    SweepCh3 {
        /// Use all 2^20 diagonal classes instead of the 4096-class family.
        #[arg(long)]
        full_space: bool,
        /// Check every class without exclusion filters.
        #[arg(long)]
        no_filters: bool,
        /// Exit with status 1 unless the verdict matches.
        #[arg(long, value_enum)]
        expect: Option<Expect>,
        #[arg(long, value_enum, default_value = "text")]
        format: OutputFormat,
    },
    /// Order of the diagonal group D_k on N qubits.
    DiagOrder {
        #[arg(long)]
        qubits: usize,
        #[arg(long)]
        level: u32,
        /// Also build the group by closure and compare.
        #[arg(long)]
        verify: bool,
    },
    /// Emit a classification table from the class database.
    Table {
        #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(["2", "3"]))]
        which: String,
        #[arg(long, value_enum, default_value = "md")]
        format: TableFormat,
        /// Compute and store missing databases instead of failing.
        #[arg(long)]
        compute: bool,
    },
}

#[derive(Clone, Debug)]
struct Shape(Vec<usize>);

fn parse_shape(s: &str) -> Result<Shape, String> {
    let s = s.trim();
    if s.is_empty() || s.eq_ignore_ascii_case("id") {
        return Ok(Shape(Vec::new()));
    }
    let lens = s
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| format!("bad cycle length {t:?}"))
        })
        .collect::<Result<Vec<_>, _>>()?;
    normalize_shape(&lens).map(Shape).map_err(|e| e.to_string())
}

fn read_circuit(path: &Path) -> CliResult<Circuit> {
    let text =
        fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    parse_circuit(&text).map_err(|e| match e {
        cliffhier::Error::Parse {
            line,
            column,
            message,
        } => CliError::Parse(format!("{}:{line}:{column}: {message}", path.display())),
        other => CliError::from(other),
    })
}

/// Text reports open with the state-index convention.
fn text_report(lines: impl IntoIterator<Item = String>) -> String {
    let mut out = format!("# {STATE_INDEX_CONVENTION}\n");
    for l in lines {
        out.push_str(&l);
        out.push('\n');
    }
    out
}

#[derive(Serialize)]
struct Report<T: Serialize> {
    state_index_convention: &'static str,
    #[serde(flatten)]
    body: T,
}

fn json_report<T: Serialize>(body: T) -> CliResult<String> {
    to_sorted_json(&Report {
        state_index_convention: STATE_INDEX_CONVENTION,
        body,
    })
}

fn cell_line(c: &CycleClassification) -> String {
    let mut line = format!(
        "n={} shape {}: {} (conjugation classes {}, {:?})",
        c.n,
        shape_label(&c.shape),
        c.cell(),
        c.conjugation_cell(),
        c.two_sided_method
    );
    if !c.unresolved_pairs.is_empty() {
        line += &format!(", {} unresolved pairs", c.unresolved_pairs.len());
    }
    line
}

fn run(cmd: Command) -> CliResult<String> {
    match cmd {
        Command::Level { file, cap, format } => {
            let c = read_circuit(&file)?;
            let cap = cap.unwrap_or_else(|| default_cap(c.num_qubits()));
            let v = level(&c.to_permutation().to_monomial(), cap);
            match format {
                OutputFormat::Text => Ok(text_report([v.to_string()])),
                OutputFormat::Json => {
                    #[derive(Serialize)]
                    struct Out {
                        qubits: usize,
                        cap: u32,
                        level: cliffhier::LevelVerdict,
                    }
                    json_report(Out {
                        qubits: c.num_qubits(),
                        cap,
                        level: v,
                    })
                }
            }
        }
        Command::Semiclifford { file, format } => {
            let c = read_circuit(&file)?;
            let semi = is_semi_clifford(&c.to_permutation().to_monomial());
            match format {
                OutputFormat::Text => Ok(text_report([if semi {
                    "semi-Clifford".to_string()
                } else {
                    "not semi-Clifford".to_string()
                }])),
                OutputFormat::Json => {
                    #[derive(Serialize)]
                    struct Out {
                        qubits: usize,
                        semi_clifford: bool,
                    }
                    json_report(Out {
                        qubits: c.num_qubits(),
                        semi_clifford: semi,
                    })
                }
            }
        }
        Command::ClassifyPerms { qubits, format } => {
            progress(&format!("enumerating all permutations on {qubits} qubits"));
            let census = count_ae_classes_full(qubits)?;
            let path = Cache::from_env().store_census(&census)?;
            progress(&format!("wrote {}", path.display()));
            match format {
                OutputFormat::Json => json_report(&census),
                OutputFormat::Text => {
                    let mut lines = vec![format!(
                        "{} classes, {} in CH",
                        census.classes.len(),
                        census.num_in_ch()
                    )];
                    for c in &census.classes {
                        lines.push(format!(
                            "  {:?}  size {}  {}{}",
                            c.representative,
                            c.class_size,
                            c.level,
                            if c.semi_clifford {
                                ", semi-Clifford"
                            } else {
                                ""
                            }
                        ));
                    }
                    Ok(text_report(lines))
                }
            }
        }
        Command::ClassifyCycles {
            shape: Shape(shape),
            qubits,
            extend_to,
            format,
        } => {
            let last = extend_to.unwrap_or(qubits);
            if last < qubits {
                return Err(CliError::Parse(format!(
                    "--extend-to {last} is below --qubits {qubits}"
                )));
            }
            let cache = Cache::from_env();
            let start = qubits.min(MAX_DIRECT_QUBITS);
            progress(&format!(
                "classifying n={start}, shape {}",
                shape_label(&shape)
            ));
            let mut cur = classify_cycle_structures(start, &shape)?;
            let mut cells = Vec::new();
            loop {
                cache.store_cell(&cur)?;
                if cur.n >= qubits {
                    cells.push(cur.clone());
                }
                if cur.n == last {
                    break;
                }
                progress(&format!("extending to n={}", cur.n + 1));
                cur = extend_classification(&cur, &ClassifyOptions::default())?;
            }
            match format {
                OutputFormat::Json => json_report(serde_json::json!({ "cells": cells })),
                OutputFormat::Text => {
                    let mut lines = Vec::new();
                    for c in &cells {
                        lines.push(cell_line(c));
                        for r in &c.classes {
                            lines.push(format!(
                                "  {}  {}{}",
                                r.notation,
                                r.level,
                                match r.semi_clifford {
                                    Some(true) => ", semi-Clifford",
                                    Some(false) => ", not semi-Clifford",
                                    None => "",
                                }
                            ));
                        }
                    }
                    Ok(text_report(lines))
                }
            }
        }
        Command::Verify4q { format } => {
            let report = verify_4q_representatives()?;
            let out = match format {
                OutputFormat::Json => json_report(&report)?,
                OutputFormat::Text => {
                    let mut lines: Vec<String> = report
                        .representatives
                        .iter()
                        .map(|r| {
                            format!(
                                "{}: {} (expected level {}){}",
                                r.name,
                                r.level,
                                r.expected_level,
                                if r.semi_clifford {
                                    ", semi-Clifford"
                                } else {
                                    ""
                                }
                            )
                        })
                        .collect();
                    lines.push(format!(
                        "levels match: {}; profile collisions: {:?}; canonical-form collisions: {:?}",
                        report.levels_match, report.profile_collisions, report.canonical_collisions
                    ));
                    text_report(lines)
                }
            };
            if report.passed() {
                Ok(out)
            } else {
                print!("{out}");
                Err(CliError::Expectation("verify-4q failed".into()))
            }
        }
        Command::SweepCh3 {
            full_space,
            no_filters,
            expect,
            format,
        } => {
            let opts = SweepOptions {
                space: if full_space {
                    ClassSpace::Full
                } else {
                    ClassSpace::Restricted
                },
                filters: !no_filters,
            };
            progress(&format!(
                "sweeping {} diagonal classes{}",
                opts.space.size(),
                if opts.filters { "" } else { " without filters" }
            ));
            let report = sweep_ch3(opts)?;
            let out = match format {
                OutputFormat::Json => json_report(&report)?,
                OutputFormat::Text => {
                    let mut lines = vec![format!("verdict: {}", report.verdict)];
                    lines.push(format!("classes: {}", report.classes_total));
                    for (tag, count) in &report.classes_excluded_by {
                        lines.push(format!("excluded ({tag}): {count}"));
                    }
                    lines.push(format!("checked: {}", report.classes_checked));
                    lines.push(format!(
                        "in CH3: {} ({} semi-Clifford)",
                        report.in_ch3, report.in_ch3_semi_clifford
                    ));
                    for o in &report.offenders {
                        lines.push(format!("offender: {} with {}", o.permutation, o.class));
                    }
                    text_report(lines)
                }
            };
            let wanted = expect.map(|e| match e {
                Expect::AllSemiClifford => Verdict::AllSemiClifford,
                Expect::CounterexampleFound => Verdict::CounterexampleFound,
            });
            match wanted {
                Some(v) if v != report.verdict => {
                    print!("{out}");
                    Err(CliError::Expectation(format!(
                        "expected verdict \"{v}\", got \"{}\"",
                        report.verdict
                    )))
                }
                _ => Ok(out),
            }
        }
        Command::DiagOrder {
            qubits,
            level,
            verify,
        } => {
            if qubits == 0 || level == 0 {
                return Err(CliError::Parse(
                    "--qubits and --level must be positive".into(),
                ));
            }
            let order = diag_group_order(qubits, level);
            if verify {
                if order > DIAG_GROUP_GUARD.into() {
                    return Err(CliError::Guard(format!(
                        "closure of a group of order {order} exceeds the limit {DIAG_GROUP_GUARD}"
                    )));
                }
                let built = generate_diag_group(&DiagGroupSpec::d(qubits, level)?)?;
                if order != built.len().into() {
                    return Err(CliError::Expectation(format!(
                        "formula gives {order}, closure gives {}",
                        built.len()
                    )));
                }
            }
            Ok(format!("{order}\n"))
        }
        Command::Table {
            which,
            format,
            compute,
        } => {
            let cache = Cache::from_env();
            match which.as_str() {
                "2" => table::table2(&cache, format, compute),
                _ => table::table3(&cache, format, compute),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(4);
        }
    }
    match run(cli.command) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
