use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lextag_core::generator::{check_languages, Status};
use lextag_core::transfer::DEFAULT_EXPANSION_CAP;
use lextag_core::{
    parse, run_corpus, tokenize, translate, Error, LanguageResources, OutcomeClass, ParseOptions,
    Schedule, TransferTable, TranslateOptions, Violation,
};

const EXIT_NONE: u8 = 1;
const EXIT_NO_CANDIDATE: u8 = 2;
const EXIT_FAULT: u8 = 3;
const MAX_EXPANSION_VAR: &str = "LEXTAG_MAX_EXPANSION";

#[derive(Parser)]
#[command(
    name = "lextag",
    version,
    about = "Lexical selection by feature unification over synchronous TAG"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check grammar and transfer files; transfer tables are checked against
    /// the grammars named in the same invocation.
    Validate {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Parse a sentence and print every derivation.
    Parse {
        #[arg(long)]
        grammar: PathBuf,
        #[arg(long, value_enum, default_value_t = Show::Derivation)]
        show: Show,
        /// Postpone all unification until the derivation is complete.
        #[arg(long)]
        defer_unification: bool,
        /// Root category of complete parses.
        #[arg(long, default_value = "S")]
        start: String,
        sentence: String,
    },
    /// Translate a sentence and print the surviving target sentences.
    Translate {
        #[command(flatten)]
        pair: Pair,
        /// Print every survivor, best first (the default).
        #[arg(long, conflicts_with = "first")]
        all: bool,
        /// Print only the best survivor.
        #[arg(long)]
        first: bool,
        /// Add a table with every candidate and the clash that removed it.
        #[arg(long)]
        trace: bool,
        /// Print the full result as JSON.
        #[arg(long)]
        json: bool,
        sentence: String,
    },
    /// Translate a `source<TAB>expected` file and report exact matches.
    Corpus {
        #[arg(long)]
        tsv: PathBuf,
        #[command(flatten)]
        pair: Pair,
        /// Print the full report as JSON.
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct Pair {
    /// Source-language grammar file.
    #[arg(long)]
    src: PathBuf,
    /// Target-language grammar file.
    #[arg(long)]
    tgt: PathBuf,
    /// Transfer table from source to target.
    #[arg(long)]
    transfer: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum Show {
    Derivation,
    Tree,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Validate { files } => validate(&files),
        Command::Parse {
            grammar,
            show,
            defer_unification,
            start,
            sentence,
        } => cmd_parse(&grammar, show, defer_unification, start, &sentence),
        Command::Translate {
            pair,
            first,
            trace,
            json,
            sentence,
            ..
        } => cmd_translate(&pair, first, trace, json, &sentence),
        Command::Corpus { tsv, pair, json } => cmd_corpus(&tsv, &pair, json),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_FAULT)
        }
    }
}

enum Resource {
    Grammar(LanguageResources),
    Transfer(TransferTable),
}

fn load_any(path: &Path) -> Result<Resource, Error> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.into(),
        source,
    })?;
    let value: serde_json::Value = serde_json::from_str(&text).map_err(|source| Error::Json {
        path: path.into(),
        source,
    })?;
    let with_path = |e: Error| match e {
        Error::Json { source, .. } => Error::Json {
            path: path.into(),
            source,
        },
        e => Error::Format(format!("{}: {e}", path.display())),
    };
    if value.get("tree_links").is_some() {
        TransferTable::from_json(&text)
            .map(Resource::Transfer)
            .map_err(with_path)
    } else {
        LanguageResources::from_json(&text)
            .map(Resource::Grammar)
            .map_err(with_path)
    }
}

fn validate(files: &[PathBuf]) -> Result<u8, Error> {
    let mut grammars = Vec::new();
    let mut tables = Vec::new();
    let mut failed = false;
    for f in files {
        match load_any(f) {
            Ok(Resource::Grammar(g)) => grammars.push((f, g)),
            Ok(Resource::Transfer(t)) => tables.push((f, t)),
            Err(e) => {
                println!("{}: error: {e}", f.display());
                failed = true;
            }
        }
    }
    let mut report = |f: &PathBuf, violations: Vec<Violation>| {
        if violations.is_empty() {
            println!("{}: ok", f.display());
        }
        for v in violations {
            println!("{}: {v}", f.display());
            failed = true;
        }
    };
    for (f, g) in &grammars {
        report(f, g.validate());
    }
    for (f, t) in &tables {
        let find = |lang: &str| {
            grammars
                .iter()
                .find(|(_, g)| g.language == lang)
                .map(|(_, g)| g)
        };
        let violations = match (find(&t.source_lang), find(&t.target_lang)) {
            (Some(s), Some(g)) => t.validate(s, g),
            (s, g) => [(s, &t.source_lang), (g, &t.target_lang)]
                .into_iter()
                .filter(|(found, _)| found.is_none())
                .map(|(_, lang)| {
                    Violation::new(
                        lextag_core::ViolationKind::MissingGrammar,
                        format!("language {lang}"),
                        "no grammar for this language was given",
                    )
                })
                .collect(),
        };
        report(f, violations);
    }
    Ok(if failed { EXIT_FAULT } else { 0 })
}

fn cmd_parse(
    grammar: &Path,
    show: Show,
    defer: bool,
    start: String,
    sentence: &str,
) -> Result<u8, Error> {
    let res = LanguageResources::load(grammar)?;
    let tokens = tokenize(sentence)?;
    let schedule = if defer {
        Schedule::Deferred
    } else {
        Schedule::Eager
    };
    let parses = parse(&tokens, &res, &ParseOptions { start, schedule })?;
    if parses.is_empty() {
        println!("no parse");
        return Ok(EXIT_NONE);
    }
    let n = parses.len();
    for (i, p) in parses.iter().enumerate() {
        println!("# parse {} of {n}", i + 1);
        match show {
            Show::Derivation => {
                print!("{}", p.derivation.to_text());
                println!(
                    "{}",
                    serde_json::to_string_pretty(&p.derivation).expect("derivation serializes")
                );
            }
            Show::Tree => print!("{}", p.derived.to_text()),
        }
    }
    Ok(0)
}

fn load_pair(pair: &Pair) -> Result<(LanguageResources, LanguageResources, TransferTable), Error> {
    let src = LanguageResources::load(&pair.src)?;
    let tgt = LanguageResources::load(&pair.tgt)?;
    let table = TransferTable::load(&pair.transfer)?;
    check_languages(&src, &tgt, &table)?;
    let mut problems: Vec<String> = src
        .validate()
        .iter()
        .chain(tgt.validate().iter())
        .map(ToString::to_string)
        .collect();
    problems.extend(table.validate(&src, &tgt).iter().map(ToString::to_string));
    if !problems.is_empty() {
        return Err(Error::Format(format!(
            "invalid resources:\n  {}",
            problems.join("\n  ")
        )));
    }
    Ok((src, tgt, table))
}

fn options() -> Result<TranslateOptions, Error> {
    let max_expansion = match std::env::var(MAX_EXPANSION_VAR) {
        Ok(v) => v.trim().parse().map_err(|_| {
            Error::Format(format!(
                "{MAX_EXPANSION_VAR} must be a nonnegative integer, got `{v}`"
            ))
        })?,
        Err(_) => DEFAULT_EXPANSION_CAP,
    };
    Ok(TranslateOptions {
        max_expansion,
        ..TranslateOptions::default()
    })
}

fn trace_table(t: &lextag_core::Translation) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<3} {:<40} {:<9} {:<12} {:<7} {:<12} atoms",
        "#", "lemmas", "status", "lemma", "node", "path"
    );
    for (i, c) in t.candidates.iter().enumerate() {
        let lemmas = c.lemmas.join(", ");
        match (&c.status, &c.failure) {
            (Status::Failed, Some(f)) => {
                let _ = writeln!(
                    out,
                    "{:<3} {lemmas:<40} {:<9} {:<12} {:<7} {:<12} {} vs {}",
                    i + 1,
                    "failed",
                    f.lemma,
                    f.addr.to_string(),
                    f.path,
                    f.atoms.0,
                    f.atoms.1
                );
            }
            _ => {
                let _ = writeln!(
                    out,
                    "{:<3} {lemmas:<40} {:<9} {}",
                    i + 1,
                    "survived",
                    c.surface.as_deref().unwrap_or("")
                );
            }
        }
    }
    out
}

fn cmd_translate(
    pair: &Pair,
    first: bool,
    trace: bool,
    json: bool,
    sentence: &str,
) -> Result<u8, Error> {
    let (src, tgt, table) = load_pair(pair)?;
    let t = translate(sentence, &src, &tgt, &table, &options()?)?;
    if json {
        println!("{}", t.to_json());
    } else {
        if trace {
            print!("{}", trace_table(&t));
        }
        let shown = if first {
            &t.survivors[..t.survivors.len().min(1)]
        } else {
            &t.survivors[..]
        };
        for s in shown {
            println!("{s}");
        }
    }
    Ok(match t.outcome() {
        OutcomeClass::Translated => 0,
        OutcomeClass::NoParse => {
            eprintln!("no parse for `{sentence}`");
            EXIT_NONE
        }
        OutcomeClass::NoCandidate => {
            eprintln!("no candidate survived target-side unification");
            if !json && !trace {
                eprint!("{}", trace_table(&t));
            }
            EXIT_NO_CANDIDATE
        }
    })
}

fn cmd_corpus(tsv: &Path, pair: &Pair, json: bool) -> Result<u8, Error> {
    let text = std::fs::read_to_string(tsv).map_err(|source| Error::Io {
        path: tsv.into(),
        source,
    })?;
    let (src, tgt, table) = load_pair(pair)?;
    let report = run_corpus(&text, &src, &tgt, &table, &options()?);
    if json {
        println!(
            "{}",
            serde_json::to_string_pretty(&report).expect("report serializes")
        );
    } else {
        for m in &report.mismatches {
            match (&m.expected, &m.got) {
                (Some(e), Some(g)) => {
                    println!("line {}: `{}`: expected `{e}`, got `{g}`", m.line, m.source)
                }
                _ => println!("line {}: `{}`: {}", m.line, m.source, m.reason),
            }
        }
        for r in &report.records {
            match r.outcome {
                OutcomeClass::NoParse => println!("line {}: `{}`: no parse", r.line, r.source),
                OutcomeClass::NoCandidate => {
                    println!("line {}: `{}`: no candidate", r.line, r.source)
                }
                OutcomeClass::Translated => {}
            }
        }
        println!(
            "total {} exact {} no-parse {} no-candidate {} mismatches {}",
            report.total,
            report.exact,
            report.no_parse,
            report.no_candidate,
            report.mismatches.len()
        );
    }
    Ok(if report.all_exact() { 0 } else { EXIT_NONE })
}
