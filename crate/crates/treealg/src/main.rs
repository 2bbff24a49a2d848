//! The `treealg` command-line front-end.
//!
//! Every subcommand reads automaton or table files in the text format of
//! [`treealg::format`], writes results to standard output, and reports
//! problems on standard error with a stable exit-code contract:
//!
//! | code | meaning                                      |
//! |------|----------------------------------------------|
//! | 0    | success                                      |
//! | 1    | unreadable input or parse error              |
//! | 2    | semantic error (arity, alphabet, totality)   |
//! | 3    | resource cap exceeded                        |
//! | 4    | automata inequivalent (`equiv` only)         |
//! | 5    | insufficient heights (`nerode` only)         |
//!
//! Output is byte-identical across repeated invocations: all iteration orders
//! are canonical and nothing timestamps the results.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use treealg::dfta::{equiv, Dfta};
use treealg::effectful::{determinise_capped, DEFAULT_SUBSET_CAP};
use treealg::error::{Error, Result};
use treealg::format::{parse_automaton, parse_file, render_dfta, Automaton, ParsedFile};
use treealg::nerode::{minimal_from_oracle_capped, ContextMode, LanguageOracle, NerodeTable};
use treealg::quotient::{is_minimal, is_simple, minimise};
use treealg::term::{parse_tree, Frontier, Signature, Tree, DEFAULT_ENUM_CAP};

#[derive(Parser)]
#[command(
    name = "treealg",
    version,
    about = "Bottom-up tree automata: evaluate, minimise, determinise, synthesise",
    max_term_width = 100
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a tree: reached state (dfta), state set (nfta), weight vector (wfta)
    Eval { file: PathBuf, tree: String },
    /// Decide acceptance of a tree (dfta over outputs {0,1}, or nfta)
    Accepts { file: PathBuf, tree: String },
    /// Print the weight of a tree under a weighted automaton
    Weight { file: PathBuf, tree: String },
    /// Restrict a dfta to its reachable states and print it
    Trim { file: PathBuf },
    /// Minimise a dfta (trim, restrict outputs, quotient) and print it
    Minimise {
        file: PathBuf,
        /// Also print the state partition of the trimmed automaton as a comment
        #[arg(long)]
        emit_partition: bool,
    },
    /// Determinise an nfta by the reachable-subset construction and print the dfta
    Determinise {
        file: PathBuf,
        /// Abort once this many subset states have been discovered
        #[arg(long, default_value_t = DEFAULT_SUBSET_CAP)]
        max_subsets: usize,
    },
    /// Decide language equivalence of two automata (nftas are determinised first)
    Equiv { left: PathBuf, right: PathBuf },
    /// Synthesise the minimal automaton from a language oracle (dfta or table file)
    Nerode {
        file: PathBuf,
        /// Enumerate all trees up to this height
        #[arg(long)]
        tree_height: usize,
        /// Enumerate all contexts up to this height
        #[arg(long)]
        ctx_height: usize,
        /// Use only contexts with exactly one hole
        #[arg(long)]
        single_hole: bool,
        /// Node budget for tree and context enumeration
        #[arg(long, default_value_t = DEFAULT_ENUM_CAP)]
        max_enum: usize,
    },
    /// Validate a file and report its kind
    Check { file: PathBuf },
    /// Report whether a dfta admits no proper quotient
    Simple { file: PathBuf },
    /// Report whether a dfta is reachable and simple
    Minimal { file: PathBuf },
}

fn main() -> ExitCode {
    match run(Cli::parse().command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Syntax { .. } | Error::File { .. } | Error::Io { .. } => 1,
                Error::Invalid(_) => 2,
                Error::ResourceLimit(_) => 3,
                Error::InsufficientHeights { .. } => 5,
            })
        }
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

fn load_automaton(path: &Path) -> Result<Automaton> {
    parse_automaton(&read(path)?)
}

fn load_dfta(path: &Path, verb: &str) -> Result<Dfta> {
    match load_automaton(path)? {
        Automaton::Dfta(a) => Ok(a),
        other => Err(Error::invalid(format!(
            "{verb} expects a dfta file, found a {} file",
            other.kind()
        ))),
    }
}

fn tree_arg(text: &str, sig: &Signature, frontier: &Frontier) -> Result<Tree> {
    parse_tree(text, sig, frontier)
}

fn render_set(set: &BTreeSet<usize>, names: &[String]) -> String {
    let mut out = String::from("{");
    for (i, &q) in set.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(&names[q]);
    }
    out.push('}');
    out
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Eval { file, tree } => match load_automaton(&file)? {
            Automaton::Dfta(a) => {
                let t = tree_arg(&tree, a.sig(), a.frontier())?;
                println!("{}", a.state_name(a.eval(&t)?));
            }
            Automaton::Nfta(a) => {
                let t = tree_arg(&tree, a.sig(), a.frontier())?;
                println!("{}", render_set(&a.eval(&t)?, a.state_names()));
            }
            Automaton::WftaRational(a) => {
                let t = tree_arg(&tree, a.sig(), a.frontier())?;
                println!("{}", a.eval(&t)?.render(a.state_names()));
            }
            Automaton::WftaBool(a) => {
                let t = tree_arg(&tree, a.sig(), a.frontier())?;
                println!("{}", a.eval(&t)?.render(a.state_names()));
            }
        },
        Command::Accepts { file, tree } => match load_automaton(&file)? {
            Automaton::Dfta(a) => {
                let acceptor = a.outputs().len() == 2
                    && a.outputs().index_of("0").is_some()
                    && a.outputs().index_of("1").is_some();
                if !acceptor {
                    return Err(Error::invalid(
                        "acceptance needs outputs {0,1}; this dfta has other outputs",
                    ));
                }
                let t = tree_arg(&tree, a.sig(), a.frontier())?;
                println!("{}", a.output_of(&t)? == "1");
            }
            Automaton::Nfta(a) => {
                let t = tree_arg(&tree, a.sig(), a.frontier())?;
                println!("{}", a.accepts(&t)?);
            }
            _ => {
                return Err(Error::invalid(
                    "weighted automata assign weights, not acceptance; use `weight`",
                ))
            }
        },
        Command::Weight { file, tree } => match load_automaton(&file)? {
            Automaton::WftaRational(a) => {
                let t = tree_arg(&tree, a.sig(), a.frontier())?;
                println!("{}", a.weight(&t)?);
            }
            Automaton::WftaBool(a) => {
                let t = tree_arg(&tree, a.sig(), a.frontier())?;
                println!("{}", a.weight(&t)?);
            }
            other => {
                return Err(Error::invalid(format!(
                    "weight expects a wfta file, found a {} file",
                    other.kind()
                )))
            }
        },
        Command::Trim { file } => {
            let a = load_dfta(&file, "trim")?;
            print!("{}", render_dfta(&a.trim_reachable()));
        }
        Command::Minimise {
            file,
            emit_partition,
        } => {
            // trim before restricting so the kept outputs are exactly those
            // of reachable states
            let trimmed = load_dfta(&file, "minimise")?
                .trim_reachable()
                .restrict_outputs();
            let (minimal, partition) = minimise(&trimmed)?;
            print!("{}", render_dfta(&minimal));
            if emit_partition {
                println!("# partition: {}", partition.render(trimmed.state_names()));
            }
        }
        Command::Determinise { file, max_subsets } => match load_automaton(&file)? {
            Automaton::Nfta(a) => print!("{}", render_dfta(&determinise_capped(&a, max_subsets)?)),
            other => {
                return Err(Error::invalid(format!(
                    "determinise expects an nfta file, found a {} file",
                    other.kind()
                )))
            }
        },
        Command::Equiv { left, right } => {
            let to_dfta = |auto: Automaton, path: &Path| -> Result<Dfta> {
                match auto {
                    Automaton::Dfta(a) => Ok(a),
                    Automaton::Nfta(a) => determinise_capped(&a, DEFAULT_SUBSET_CAP),
                    other => Err(Error::invalid(format!(
                        "equivalence of weighted automata is not supported ({} is a {} file)",
                        path.display(),
                        other.kind()
                    ))),
                }
            };
            let a = to_dfta(load_automaton(&left)?, &left)?;
            let b = to_dfta(load_automaton(&right)?, &right)?;
            match equiv(&a, &b)? {
                None => println!("equivalent"),
                Some(cx) => {
                    println!(
                        "counterexample: {} {} {}",
                        cx.tree.render(a.sig(), a.frontier()),
                        cx.left,
                        cx.right
                    );
                    return Ok(ExitCode::from(4));
                }
            }
        }
        Command::Nerode {
            file,
            tree_height,
            ctx_height,
            single_hole,
            max_enum,
        } => {
            let mode = if single_hole {
                ContextMode::SingleHole
            } else {
                ContextMode::MultiHole
            };
            let synthesise = |oracle: &dyn LanguageOracle,
                              sig: &Signature,
                              frontier: &Frontier|
             -> Result<(Dfta, NerodeTable)> {
                minimal_from_oracle_capped(
                    oracle,
                    sig,
                    frontier,
                    tree_height,
                    ctx_height,
                    mode,
                    max_enum,
                )
            };
            let (automaton, table, sig, frontier) = match parse_file(&read(&file)?)? {
                ParsedFile::Automaton(Automaton::Dfta(a)) => {
                    let (sig, frontier) = (a.sig().clone(), a.frontier().clone());
                    let (automaton, table) = synthesise(&a, &sig, &frontier)?;
                    (automaton, table, sig, frontier)
                }
                ParsedFile::Table(t) => {
                    let (sig, frontier) = (t.sig().clone(), t.frontier().clone());
                    let (automaton, table) = synthesise(&t, &sig, &frontier)?;
                    (automaton, table, sig, frontier)
                }
                ParsedFile::Automaton(other) => {
                    return Err(Error::invalid(format!(
                        "nerode expects a dfta or table oracle, found a {} file; \
                         determinise nondeterministic input first",
                        other.kind()
                    )))
                }
            };
            for class in 0..table.num_classes() {
                println!(
                    "# class {class}: {}",
                    table.representative(class).render(&sig, &frontier)
                );
            }
            print!("{}", render_dfta(&automaton));
        }
        Command::Check { file } => {
            println!("ok: {}", parse_file(&read(&file)?)?.kind());
        }
        Command::Simple { file } => {
            let a = load_dfta(&file, "simple")?;
            println!("{}", is_simple(&a)?);
        }
        Command::Minimal { file } => {
            let a = load_dfta(&file, "minimal")?;
            println!("{}", is_minimal(&a)?);
        }
    }
    Ok(ExitCode::SUCCESS)
}
