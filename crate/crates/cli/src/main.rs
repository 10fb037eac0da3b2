//! `toral`: analyze, construct, compare and verify Z^d-actions on tori.
//!
//! Exit codes: 0 ok, 1 violation (failed check or invalid input), 2 some verdict not verified.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use toral_core::centralizer::DEFAULT_UNIT_BOX;
use toral_core::classify::{compare, CompareOptions, DEFAULT_Z_CONJUGACY_BOX};
use toral_core::corpus::Corpus;
use toral_core::format::{construct_file, parse_field_source, to_json_text, ActionFile};
use toral_core::report::{analyze, comparison_text, comparison_verdict};
use toral_core::verify::{verify, VerifyOptions};
use toral_core::Execution;

#[derive(Parser)]
#[command(name = "toral", version, about = "Exact invariants of Z^d-actions by toral automorphisms")]
struct Cli {
    /// Run every search on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Invariant report for one action file.
    Analyze {
        file: PathBuf,
        /// Coefficient box for the unit search behind the maximality verdict.
        #[arg(long = "box", default_value_t = DEFAULT_UNIT_BOX)]
        search_box: i64,
        #[arg(long)]
        json: bool,
    },
    /// Build an action file from field data by multiplying a lattice by the units.
    Construct {
        #[arg(long)]
        field: PathBuf,
        #[arg(long)]
        lattice: String,
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
    },
    /// Compare two actions and name the first invariant that separates them.
    Compare {
        first: PathBuf,
        second: PathBuf,
        #[arg(long = "box", default_value_t = DEFAULT_UNIT_BOX)]
        search_box: i64,
        #[arg(long)]
        json: bool,
    },
    /// Check every bundled corpus assertion.
    VerifyPaper {
        /// Example tag (such as 3b) or substring of an entry name.
        #[arg(long)]
        filter: Option<String>,
        /// Corpus directory with actions/*.json and assertions.json instead of the bundled one.
        #[arg(long)]
        corpus: Option<PathBuf>,
        #[arg(long = "box", default_value_t = DEFAULT_UNIT_BOX)]
        search_box: i64,
    },
}

fn fail(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(1)
}

fn load(path: &PathBuf) -> Result<(ActionFile, toral_core::action::ZdAction), String> {
    let file = ActionFile::from_path(path).map_err(|e| e.to_string())?;
    let action = file.to_action().map_err(|e| format!("{}: {e}", path.display()))?;
    Ok((file, action))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let exec = if cli.sequential { Execution::Sequential } else { Execution::default() };
    match cli.command {
        Command::Analyze { file, search_box, json } => {
            let (f, a) = match load(&file) {
                Ok(x) => x,
                Err(e) => return fail(e),
            };
            let r = analyze(&f.name, &a, search_box, exec);
            if json {
                print!("{}", r.to_json());
            } else {
                print!("{}", r.to_text());
            }
            ExitCode::from(r.status().exit_code() as u8)
        }
        Command::Construct { field, lattice, output } => {
            let text = match std::fs::read_to_string(&field) {
                Ok(t) => t,
                Err(e) => return fail(format!("{}: {e}", field.display())),
            };
            let built = parse_field_source(&text).and_then(|(name, block)| construct_file(&name, &block, &lattice));
            match built {
                Ok(f) => {
                    if let Err(e) = std::fs::write(&output, f.to_canonical_json()) {
                        return fail(format!("{}: {e}", output.display()));
                    }
                    println!("wrote {} ({} generators on lattice {lattice})", output.display(), f.rank);
                    ExitCode::SUCCESS
                }
                Err(e) => fail(e),
            }
        }
        Command::Compare { first, second, search_box, json } => {
            let ((fa, a), (fb, b)) = match (load(&first), load(&second)) {
                (Ok(x), Ok(y)) => (x, y),
                (Err(e), _) | (_, Err(e)) => return fail(e),
            };
            let opts = CompareOptions { unit_box: search_box, z_box: DEFAULT_Z_CONJUGACY_BOX, exec };
            let r = match compare(&a, &b, opts) {
                Ok(r) => r,
                Err(e) => return fail(e),
            };
            let identical = a.generators() == b.generators();
            if json {
                let v = serde_json::json!({
                    "first": fa.name,
                    "second": fb.name,
                    "verdict": comparison_verdict(&r, identical),
                    "report": r,
                });
                print!("{}", to_json_text(&v));
            } else {
                print!("{}", comparison_text(&fa.name, &fb.name, &r, identical));
            }
            ExitCode::SUCCESS
        }
        Command::VerifyPaper { filter, corpus, search_box } => {
            let corpus = match corpus {
                Some(dir) => Corpus::load_dir(&dir),
                None => Corpus::bundled(),
            };
            let corpus = match corpus {
                Ok(c) => c,
                Err(e) => return fail(e),
            };
            let start = std::time::Instant::now();
            let results = verify(&corpus, &VerifyOptions { filter, unit_box: search_box, exec });
            for r in &results {
                println!("{}", r.line());
            }
            let failed = results.iter().filter(|r| !r.passed).count();
            println!(
                "{} checks, {} passed, {} failed ({:.1} s)",
                results.len(),
                results.len() - failed,
                failed,
                start.elapsed().as_secs_f64()
            );
            if failed > 0 {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
    }
}
