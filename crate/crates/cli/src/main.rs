use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{Map, Value};

use hyperell::crystal::{validate, CrystalData};
use hyperell::gallery::{self, EntryOutcome, GalleryEntry};
use hyperell::io::parse;
use hyperell::report::{full_report, InvariantReport};

const EXIT_INVALID: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_MISMATCH: u8 = 3;
const EXIT_COMPUTE: u8 = 4;

#[derive(Parser)]
#[command(name = "hyperell", version, about = "Invariants of hyperelliptic manifolds T/G from crystallographic data")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Default, ValueEnum)]
enum Format {
    #[default]
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Check the crystallographic axioms.
    Validate {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Integral cohomology: H^1, Gamma^ab, psi, torsion of H^2.
    Invariants {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Tangent characters and triviality of their Chern classes.
    Chern {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Betti numbers.
    Betti {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Hodge numbers h^(0,q).
    Hodge {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Full report.
    Report {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Built-in examples.
    Gallery {
        #[command(subcommand)]
        command: GalleryCommand,
    },
}

#[derive(Subcommand)]
enum GalleryCommand {
    /// List entry ids.
    List,
    /// Compute every entry and compare against its expected values.
    Run {
        /// Run only these ids.
        ids: Vec<String>,
        /// Print the full report of each entry.
        #[arg(long)]
        verbose: bool,
    },
}

struct Failure {
    code: u8,
    message: String,
}

fn fail(code: u8, message: impl Into<String>) -> Failure {
    Failure { code, message: message.into() }
}

fn load(path: &PathBuf) -> Result<CrystalData, Failure> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map(|_| s)
    } else {
        std::fs::read_to_string(path)
    }
    .map_err(|e| fail(EXIT_PARSE, format!("{}: {e}", path.display())))?;
    parse(&text).map_err(|e| fail(EXIT_PARSE, format!("{}: {e}", path.display())))
}

fn report_of(d: &CrystalData) -> Result<InvariantReport, Failure> {
    let r = full_report(d).map_err(|e| fail(EXIT_COMPUTE, e.to_string()))?;
    if !r.validation.valid {
        let mut msg = String::from("invalid datum");
        for m in &r.validation.messages {
            msg.push_str("\n  ");
            msg.push_str(m);
        }
        return Err(fail(EXIT_INVALID, msg));
    }
    Ok(r)
}

/// The named top-level fields of the report, in the given order.
fn section(r: &InvariantReport, keys: &[&str]) -> Value {
    let full = r.to_value();
    let mut m = Map::new();
    for k in keys {
        m.insert((*k).to_string(), full.get(*k).cloned().unwrap_or(Value::Null));
    }
    Value::Object(m)
}

fn require<T: Clone>(r: &InvariantReport, v: &Option<T>, what: &str) -> Result<T, Failure> {
    v.clone().ok_or_else(|| {
        let why = r.unavailable.iter().find(|u| u.contains(what)).cloned().unwrap_or_else(|| format!("{what} unavailable"));
        fail(EXIT_COMPUTE, why)
    })
}

fn join(v: &[usize]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json value serializes")
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Validate { file, format } => {
            let d = load(&file)?;
            let v = validate(&d);
            match format {
                Format::Text => print!("{v}"),
                Format::Json => {
                    let r = full_report(&d).map_err(|e| fail(EXIT_COMPUTE, e.to_string()))?;
                    println!("{}", pretty(&section(&r, &["validation"])["validation"]));
                }
            }
            if v.is_valid() {
                Ok(())
            } else {
                let culprit = v.non_free_element.as_ref().map(|g| format!(": element {g} has a fixed point"));
                Err(fail(EXIT_INVALID, format!("invalid datum{}", culprit.unwrap_or_default())))
            }
        }
        Command::Invariants { file, format } => {
            let r = report_of(&load(&file)?)?;
            match format {
                Format::Json => println!(
                    "{}",
                    pretty(&section(
                        &r,
                        &["h1_free_rank", "h1_group", "gamma_ab", "coinvariants", "h2_group_cohomology", "psi", "tors_h2", "h2_full", "aut0_dim", "ns_rank"]
                    ))
                ),
                Format::Text => {
                    let keep = ["H^1", "Gamma", "coinvariants", "H^2", "psi", "Tors", "Aut", "NS"];
                    for line in r.to_text().lines().filter(|l| keep.iter().any(|k| l.contains(k))) {
                        println!("{line}");
                    }
                }
            }
            Ok(())
        }
        Command::Chern { file, format } => {
            let r = report_of(&load(&file)?)?;
            require(&r, &r.chern, "chern")?;
            match format {
                Format::Json => println!("{}", pretty(&section(&r, &["tangent", "chern"]))),
                Format::Text => {
                    let text = r.to_text();
                    let start = text.lines().position(|l| l.starts_with("tangent")).unwrap_or(0);
                    for line in text.lines().skip(start).take_while(|l| !l.starts_with("dim Aut")) {
                        println!("{line}");
                    }
                }
            }
            Ok(())
        }
        Command::Betti { file, format } => {
            let r = report_of(&load(&file)?)?;
            let b = require(&r, &r.betti, "betti")?;
            match format {
                Format::Json => println!("{}", pretty(&section(&r, &["betti"]))),
                Format::Text => println!("{}", join(&b)),
            }
            Ok(())
        }
        Command::Hodge { file, format } => {
            let r = report_of(&load(&file)?)?;
            let h = require(&r, &r.hodge, "hodge")?;
            match format {
                Format::Json => println!("{}", pretty(&section(&r, &["hodge"]))),
                Format::Text => println!("{}", join(&h)),
            }
            Ok(())
        }
        Command::Report { file, format } => {
            let d = load(&file)?;
            let r = full_report(&d).map_err(|e| fail(EXIT_COMPUTE, e.to_string()))?;
            match format {
                Format::Json => println!("{}", r.to_json()),
                Format::Text => print!("{}", r.to_text()),
            }
            if r.validation.valid {
                Ok(())
            } else {
                Err(fail(EXIT_INVALID, "invalid datum"))
            }
        }
        Command::Gallery { command } => {
            let entries = gallery::gallery().map_err(|e| fail(EXIT_PARSE, e.to_string()))?;
            match command {
                GalleryCommand::List => {
                    for e in &entries {
                        println!("{}\t{}", e.id, e.description);
                    }
                    Ok(())
                }
                GalleryCommand::Run { ids, verbose } => run_gallery(&entries, &ids, verbose),
            }
        }
    }
}

fn run_gallery(entries: &[GalleryEntry], ids: &[String], verbose: bool) -> Result<(), Failure> {
    for id in ids {
        if !entries.iter().any(|e| &e.id == id) {
            return Err(fail(EXIT_PARSE, format!("no gallery entry with id {id}")));
        }
    }
    let selected: Vec<&GalleryEntry> = entries.iter().filter(|e| ids.is_empty() || ids.contains(&e.id)).collect();
    let mut outcomes: Vec<EntryOutcome> = std::thread::scope(|s| {
        let handles: Vec<_> = selected.iter().map(|e| s.spawn(move || gallery::run_entry(e))).collect();
        handles.into_iter().map(|h| h.join().expect("gallery worker panicked")).collect()
    });
    outcomes.sort_by(|a, b| a.id.cmp(&b.id));

    let mut failed = 0;
    for o in &outcomes {
        let checked = selected.iter().find(|e| e.id == o.id).map_or(0, |e| e.expected.len());
        if o.passed() {
            println!("ok    {} ({checked} values)", o.id);
        } else {
            failed += 1;
            println!("FAIL  {}", o.id);
            if let Some(err) = &o.error {
                println!("      {err}");
            }
            for m in &o.mismatches {
                let actual = m.actual.as_ref().map_or("<missing>".to_string(), |v| v.to_string());
                println!("      {}: expected {}, got {}", m.path, m.expected, actual);
            }
        }
        if verbose {
            if let Some(r) = &o.report {
                for line in r.to_text().lines() {
                    println!("      | {line}");
                }
            }
        }
    }
    println!("{} entries, {} failed", outcomes.len(), failed);
    if failed == 0 {
        Ok(())
    } else {
        Err(fail(EXIT_MISMATCH, format!("{failed} gallery entries do not match")))
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
