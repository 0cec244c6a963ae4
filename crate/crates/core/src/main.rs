use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use tense_coherence::corpus::run_corpus;
use tense_coherence::{check_axioms, interpret, parse_axioms, parse_discourse, parse_lexicon, CausalAxiom, InterpretOptions, Lexicon};

const EXIT_INFELICITOUS: u8 = 1;
const EXIT_INPUT_ERROR: u8 = 2;
const EXIT_CORPUS_FAILURE: u8 = 3;

#[derive(Parser)]
#[command(name = "tense-coherence", version, about = "Temporal interpretation of discourses from tense and coherence relations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Knowledge {
    /// Verb lexicon (`verb <lemma> class=<accomplishment|achievement>` lines).
    #[arg(long)]
    lexicon: PathBuf,
    /// Causal axioms (`cause <lemma> <lemma>` lines).
    #[arg(long)]
    axioms: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Interpret a single discourse file.
    Interpret {
        file: PathBuf,
        #[command(flatten)]
        knowledge: Knowledge,
        /// Print JSON and exit 0 whatever the verdict.
        #[arg(long)]
        json: bool,
        /// List every consistent relation assignment.
        #[arg(long)]
        all: bool,
        /// Print the staged derivation to stderr.
        #[arg(long)]
        trace: bool,
    },
    /// Run every `<name>.disc` in a directory against `<name>.expect.json`.
    Corpus {
        dir: PathBuf,
        #[command(flatten)]
        knowledge: Knowledge,
        #[arg(long)]
        json: bool,
    },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_knowledge(k: &Knowledge) -> Result<(Lexicon, Vec<CausalAxiom>)> {
    let lexicon = parse_lexicon(&read(&k.lexicon)?).with_context(|| format!("{}", k.lexicon.display()))?;
    let axioms = parse_axioms(&read(&k.axioms)?).with_context(|| format!("{}", k.axioms.display()))?;
    check_axioms(&axioms, &lexicon).with_context(|| format!("{}", k.axioms.display()))?;
    Ok((lexicon, axioms))
}

fn run(cli: Cli) -> Result<u8> {
    let mut stdout = std::io::stdout().lock();
    match cli.command {
        Command::Interpret { file, knowledge, json, all, trace } => {
            let (lexicon, axioms) = load_knowledge(&knowledge)?;
            let discourse = parse_discourse(&read(&file)?, &lexicon).with_context(|| format!("{}", file.display()))?;
            let result = interpret(&discourse, &axioms, InterpretOptions { all, trace });
            if trace {
                let mut stderr = std::io::stderr().lock();
                for line in &result.trace {
                    writeln!(stderr, "{line}")?;
                }
            }
            if json {
                stdout.write_all(result.to_json(all).as_bytes())?;
                Ok(0)
            } else {
                write!(stdout, "{result}")?;
                Ok(if result.felicitous { 0 } else { EXIT_INFELICITOUS })
            }
        }
        Command::Corpus { dir, knowledge, json } => {
            let (lexicon, axioms) = load_knowledge(&knowledge)?;
            let report = run_corpus(&dir, &lexicon, &axioms)?;
            if json {
                stdout.write_all(report.to_json().as_bytes())?;
            } else {
                write!(stdout, "{report}")?;
            }
            Ok(if report.all_passed() { 0 } else { EXIT_CORPUS_FAILURE })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_INPUT_ERROR)
        }
    }
}
