use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use autoreduce::oracles::{equiv_exact, equiv_up_to, EquivQuery, EquivVerdict};
use autoreduce::table::ObservationTable;
use autoreduce::{format, frame, rational, Automaton, Error, ReductionResult};
use clap::{Args, Parser, Subcommand};

/// Exact reduction of probabilistic and weighted automata.
#[derive(Parser)]
#[command(name = "autoreduce", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Eliminate redundant states. Without --out/--report the report is printed.
    Reduce {
        automaton: PathBuf,
        /// Write the reduced automaton here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the reduction report here.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Print the observation table as tab-separated values.
    ObsTable {
        automaton: PathBuf,
        #[command(flatten)]
        columns: Columns,
    },
    /// Print the indices of the frame (or, with --convex, the vertices) of a point set.
    Frame {
        points: PathBuf,
        #[arg(long)]
        convex: bool,
    },
    /// Evaluate the language of a state on a word.
    Eval {
        automaton: PathBuf,
        #[arg(long)]
        state: String,
        #[arg(long)]
        word: String,
    },
    /// Compare the languages of two states.
    Equiv {
        left_automaton: PathBuf,
        right_automaton: PathBuf,
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        /// Compare only words up to this length.
        #[arg(long, conflicts_with = "exact")]
        max_len: Option<usize>,
        /// Decide equality on all words (the default).
        #[arg(long)]
        exact: bool,
    },
    /// Re-check a reduction report.
    Verify {
        report: PathBuf,
        #[arg(long, default_value_t = 12)]
        max_len: usize,
    },
}

#[derive(Args)]
#[group(multiple = false)]
struct Columns {
    /// Comma-separated column words (eps for the empty word).
    #[arg(long)]
    words: Option<String>,
    /// Grow the columns until the table is consistent.
    #[arg(long)]
    consistent: bool,
}

/// A user-facing failure: exit code 2 with a diagnostic.
struct Failure {
    path: Option<PathBuf>,
    error: String,
}

impl Failure {
    fn at(path: &Path) -> impl FnOnce(Error) -> Failure + '_ {
        move |e| Failure {
            path: Some(path.to_path_buf()),
            error: e.to_string(),
        }
    }

    fn bare(error: impl ToString) -> Failure {
        Failure {
            path: None,
            error: error.to_string(),
        }
    }
}

fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    fs::read(path).map_err(|e| Failure {
        path: Some(path.to_path_buf()),
        error: e.to_string(),
    })
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure {
        path: Some(path.to_path_buf()),
        error: e.to_string(),
    })
}

fn load(path: &Path) -> Result<Automaton, Failure> {
    format::parse(&read(path)?).map_err(Failure::at(path))
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    match cli.command {
        Command::Reduce {
            automaton,
            out,
            report,
        } => {
            let aut = load(&automaton)?;
            let result = autoreduce::reduce(&aut).map_err(Failure::at(&automaton))?;
            if let Some(path) = &out {
                write(path, &format::emit(&result.reduced))?;
            }
            if let Some(path) = &report {
                write(path, &result.to_json_string())?;
            }
            if out.is_none() && report.is_none() {
                print!("{}", result.to_json_string());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::ObsTable { automaton, columns } => {
            let aut = load(&automaton)?;
            let table = if columns.consistent {
                autoreduce::make_consistent(&aut)
            } else {
                let words = match &columns.words {
                    None => vec![autoreduce::Word::empty()],
                    Some(list) => list
                        .split(',')
                        .map(|w| aut.parse_word(w.trim()))
                        .collect::<Result<Vec<_>, _>>()
                        .map_err(Failure::bare)?,
                };
                ObservationTable::build(&aut, words).map_err(Failure::bare)?
            };
            print!("{}", table.to_tsv());
            Ok(ExitCode::SUCCESS)
        }
        Command::Frame { points, convex } => {
            let text = String::from_utf8(read(&points)?).map_err(|e| Failure {
                path: Some(points.clone()),
                error: e.to_string(),
            })?;
            let m = format::parse_points(&text).map_err(Failure::at(&points))?;
            let picked = if convex {
                frame::convex_extreme_points(&m)
            } else {
                frame::conical_frame(&m)
            };
            for i in picked {
                println!("{i}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Eval {
            automaton,
            state,
            word,
        } => {
            let aut = load(&automaton)?;
            let v = aut.dirac(&state).map_err(Failure::bare)?;
            let w = aut.parse_word(&word).map_err(Failure::bare)?;
            println!("{}", rational::format(&aut.obs(&v, &w)));
            Ok(ExitCode::SUCCESS)
        }
        Command::Equiv {
            left_automaton,
            right_automaton,
            left,
            right,
            max_len,
            exact: _,
        } => {
            let la = load(&left_automaton)?;
            let ra = load(&right_automaton)?;
            let query = EquivQuery::states(&la, &left, &ra, &right).map_err(Failure::bare)?;
            let verdict = match max_len {
                Some(n) => equiv_up_to(&query, n),
                None => equiv_exact(&query).map_err(Failure::bare)?,
            };
            match verdict {
                EquivVerdict::Equal => {
                    println!("Equal");
                    Ok(ExitCode::SUCCESS)
                }
                EquivVerdict::Counterexample(w) => {
                    println!("Counterexample: {}", la.render_word(&w));
                    Ok(ExitCode::from(1))
                }
            }
        }
        Command::Verify { report, max_len } => {
            let result =
                ReductionResult::from_json(&read(&report)?).map_err(Failure::at(&report))?;
            let outcome = autoreduce::verify(&result, max_len);
            println!("{}", outcome.summary());
            Ok(if outcome.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(Failure { path, error }) => {
            match path {
                Some(p) => eprintln!("error: {}: {error}", p.display()),
                None => eprintln!("error: {error}"),
            }
            ExitCode::from(2)
        }
    }
}
