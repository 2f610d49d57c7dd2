//! `transdist`: distances between word transducers from the command line.
//!
//! Exit codes: 0 for decisive answers, 2 for UNKNOWN, 1 for input errors.

mod format;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};
use transdist::kapprox::{close, distance, kclose};
use transdist::relations::{diameter, distance_relation, index, index_is_experimental};
use transdist::transducer::Transducer;
use transdist::verdict::{Certificate, Closeness, Distance, Limits};
use transdist::{word_distance, Alphabet, ExtendedNat, MetricId};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Format(String),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] transdist::Error),
}

#[derive(Parser)]
#[command(name = "transdist", version, about = "Distances between word transducers and rational relations")]
struct Cli {
    /// print results as JSON
    #[arg(long, global = true)]
    json: bool,
    /// ceiling on explored states in determinizations and distance automata
    #[arg(long, global = true, env = "TRANSDIST_STATE_CEILING")]
    state_ceiling: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Output of a transducer on a word, or "undefined"
    Eval { file: PathBuf, word: String },
    /// Distance between two words
    Worddist {
        #[arg(short, long)]
        metric: MetricId,
        u: String,
        v: String,
    },
    /// Decide whether two transducers are at bounded distance
    Close {
        #[arg(short, long)]
        metric: MetricId,
        file1: PathBuf,
        file2: PathBuf,
    },
    /// Decide whether two transducers are at distance at most k
    Kclose {
        #[arg(short, long)]
        metric: MetricId,
        #[arg(short)]
        k: u64,
        file1: PathBuf,
        file2: PathBuf,
    },
    /// Exact distance between two transducers
    Distance {
        #[arg(short, long)]
        metric: MetricId,
        file1: PathBuf,
        file2: PathBuf,
    },
    /// Largest distance between the components of a related pair
    Diameter {
        #[arg(short, long)]
        metric: MetricId,
        relation: PathBuf,
    },
    /// Least number of steps of a generating relation that covers a relation
    Index {
        relation: PathBuf,
        /// generating relation file
        #[arg(long, conflicts_with = "unit_sphere", required_unless_present = "unit_sphere")]
        s: Option<PathBuf>,
        /// generate by the pairs at distance one under this metric
        #[arg(long)]
        unit_sphere: Option<MetricId>,
        /// metric the generating relation is asserted to induce
        #[arg(long)]
        assert_metrizable: Option<MetricId>,
    },
    /// Largest distance over common inputs of each length, by enumeration
    Oracle {
        #[arg(short, long)]
        metric: MetricId,
        file1: PathBuf,
        file2: PathBuf,
        #[arg(long, default_value_t = 8)]
        max_len: usize,
    },
}

/// Result of a command: text lines, a JSON mirror, and whether the answer is UNKNOWN.
struct Report {
    lines: Vec<String>,
    json: Value,
    unknown: bool,
}

impl Report {
    fn decisive(lines: Vec<String>, json: Value) -> Self {
        Report { lines, json, unknown: false }
    }

    fn distance(d: &Distance) -> Self {
        match d {
            Distance::Value(v) => Report::decisive(vec![v.to_string()], json!({ "distance": v.to_string() })),
            Distance::Unknown(msg) => Report {
                lines: vec!["unknown".into(), format!("reason: {msg}")],
                json: json!({ "distance": "unknown", "reason": msg }),
                unknown: true,
            },
        }
    }
}

/// Both machines re-expressed over the unions of their alphabets.
fn load_pair(file1: &Path, file2: &Path) -> Result<(Transducer, Transducer), CliError> {
    let (t1, t2) = (format::load_transducer(file1)?, format::load_transducer(file2)?);
    let input = t1.input_alphabet().union(t2.input_alphabet());
    let output = t1.output_alphabet().union(t2.output_alphabet());
    let align = |t: &Transducer| -> Result<Transducer, CliError> { Ok(t.with_input_alphabet(&input)?.with_output_alphabet(&output)?) };
    Ok((align(&t1)?, align(&t2)?))
}

fn closeness_report(v: &Closeness, input: &Alphabet) -> Report {
    match v {
        Closeness::Close { bound } => {
            let mut lines = vec!["CLOSE".to_string()];
            lines.extend(bound.map(|b| format!("bound: {b}")));
            Report::decisive(lines, json!({ "verdict": "CLOSE", "bound": bound }))
        }
        Closeness::NotClose(cert) => {
            let instances: Vec<String> = match cert {
                Certificate::Input(w) => vec![input.render(w)],
                Certificate::Pump { .. } => (1..=3).map(|i| input.render(&cert.instance(i))).collect(),
            };
            let mut lines = vec!["NOT_CLOSE".to_string(), format!("certificate: {}", cert.render(input))];
            lines.extend(instances.iter().enumerate().map(|(i, w)| format!("instance {}: {w:?}", i + 1)));
            let cert_json = match cert {
                Certificate::Input(w) => json!({ "kind": "input", "input": input.render(w) }),
                Certificate::Pump { prefix, cycle, suffix } => json!({
                    "kind": "pump",
                    "prefix": input.render(prefix),
                    "cycle": input.render(cycle),
                    "suffix": input.render(suffix),
                }),
            };
            Report::decisive(lines, json!({ "verdict": "NOT_CLOSE", "certificate": cert_json, "instances": instances }))
        }
        Closeness::Unknown(msg) => Report {
            lines: vec!["UNKNOWN".into(), format!("reason: {msg}")],
            json: json!({ "verdict": "UNKNOWN", "reason": msg }),
            unknown: true,
        },
    }
}

fn oracle_report(m: MetricId, t1: &Transducer, t2: &Transducer, max_len: usize) -> Result<Report, CliError> {
    let mut lines = vec!["length max cumulative".to_string()];
    let mut rows = Vec::new();
    let mut cumulative: Option<ExtendedNat> = None;
    for n in 0..=max_len {
        let mut best: Option<ExtendedNat> = None;
        for w in t1.input_alphabet().words_of_length(n) {
            if let (Some(a), Some(b)) = (t1.eval(&w)?, t2.eval(&w)?) {
                let d = word_distance(m, &a, &b);
                best = Some(best.map_or(d, |x| x.max(d)));
            }
        }
        cumulative = match (cumulative, best) {
            (Some(c), Some(b)) => Some(c.max(b)),
            (c, b) => c.or(b),
        };
        let show = |x: Option<ExtendedNat>| x.map_or("-".to_string(), |d| d.to_string());
        lines.push(format!("{n} {} {}", show(best), show(cumulative)));
        rows.push(json!({ "length": n, "max": best.map(|d| d.to_string()), "cumulative": cumulative.map(|d| d.to_string()) }));
    }
    Ok(Report::decisive(lines, json!({ "rows": rows })))
}

fn run(cli: &Cli) -> Result<Report, CliError> {
    let mut limits = Limits::default();
    if let Some(c) = cli.state_ceiling {
        limits.state_ceiling = c;
    }
    Ok(match &cli.command {
        Command::Eval { file, word } => {
            let t = format::load_transducer(file)?;
            let w = t.input_alphabet().parse_word(word)?;
            match t.eval(&w)? {
                Some(out) => {
                    let s = t.output_alphabet().render(&out);
                    Report::decisive(vec![s.clone()], json!({ "output": s }))
                }
                None => Report::decisive(vec!["undefined".into()], json!({ "output": null })),
            }
        }
        Command::Worddist { metric, u, v } => {
            let mut symbols: Vec<char> = u.chars().chain(v.chars()).collect();
            symbols.sort_unstable();
            symbols.dedup();
            let a = Alphabet::new(symbols)?;
            let d = word_distance(*metric, &a.parse_word(u)?, &a.parse_word(v)?);
            Report::decisive(vec![d.to_string()], json!({ "distance": d.to_string() }))
        }
        Command::Close { metric, file1, file2 } => {
            let (t1, t2) = load_pair(file1, file2)?;
            closeness_report(&close(*metric, &t1, &t2, &limits)?, t1.input_alphabet())
        }
        Command::Kclose { metric, k, file1, file2 } => {
            let (t1, t2) = load_pair(file1, file2)?;
            let yes = kclose(*metric, &t1, &t2, *k, &limits)?;
            let s = if yes { "YES" } else { "NO" };
            Report::decisive(vec![s.into()], json!({ "kclose": yes, "k": k }))
        }
        Command::Distance { metric, file1, file2 } => {
            let (t1, t2) = load_pair(file1, file2)?;
            Report::distance(&distance(*metric, &t1, &t2, &limits)?)
        }
        Command::Diameter { metric, relation } => {
            let r = format::load_relation(relation)?;
            Report::distance(&diameter(&r, *metric, &limits)?)
        }
        Command::Index { relation, s, unit_sphere, assert_metrizable } => {
            let r = format::load_relation(relation)?;
            let (s, declared) = match (s, unit_sphere) {
                (Some(path), _) => {
                    let declared = assert_metrizable
                        .ok_or_else(|| CliError::Usage("--s requires --assert-metrizable METRIC".into()))?;
                    (format::load_relation(path)?, declared)
                }
                (None, Some(m)) => (distance_relation(*m, r.alphabet())?, assert_metrizable.unwrap_or(*m)),
                (None, None) => return Err(CliError::Usage("either --s or --unit-sphere is required".into())),
            };
            if index_is_experimental(declared) {
                eprintln!("note: index answers for the length pseudo-metric are experimental");
            }
            Report::distance(&index(&r, &s, declared, &limits)?)
        }
        Command::Oracle { metric, file1, file2, max_len } => {
            let (t1, t2) = load_pair(file1, file2)?;
            oracle_report(*metric, &t1, &t2, *max_len)?
        }
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok(report) => {
            if cli.json {
                println!("{}", report.json);
            } else {
                for line in &report.lines {
                    println!("{line}");
                }
            }
            if report.unknown {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
