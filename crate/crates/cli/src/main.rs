//! `ncvx`, the workbench front end.

mod commands;
mod show;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;

use clap::Parser;
use ncvx_core::text::Workspace;
use serde_json::json;

use commands::{CliError, Options, Outcome, COMMANDS};

/// Exact computations with nearly convex sets, mappings and functions.
///
/// Definition files come first, then the command and its arguments.
/// Vector arguments are rationals such as `-1/2`; write `'|'` between
/// the groups of `coderiv` and `rule`.
#[derive(Parser, Debug)]
#[command(name = "ncvx", version)]
struct Cli {
    /// FILE… COMMAND ARGS…
    #[arg(required = true, value_name = "WORDS")]
    words: Vec<String>,
    /// Print JSON instead of text.
    #[arg(long)]
    json: bool,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    /// Source and target dimensions for `verify`, as `n,p`.
    #[arg(long, default_value = "2,1", value_parser = parse_dims)]
    dims: (usize, usize),
}

fn parse_dims(s: &str) -> Result<(usize, usize), String> {
    let (n, p) = s.split_once(',').ok_or("expected n,p")?;
    let n = n.trim().parse().map_err(|_| format!("bad dimension {n}"))?;
    let p = p.trim().parse().map_err(|_| format!("bad dimension {p}"))?;
    Ok((n, p))
}

/// Moves flags ahead of a `--` so that words such as `-1/2` stay positional.
fn arrange(argv: Vec<String>) -> Vec<String> {
    let mut it = argv.into_iter();
    let mut flags: Vec<String> = it.next().into_iter().collect();
    let mut words = Vec::new();
    while let Some(a) = it.next() {
        let with_value = ["--seed", "--trials", "--dims"].contains(&a.as_str());
        if a.starts_with("--") || a == "-h" || a == "-V" {
            flags.push(a);
            if with_value {
                flags.extend(it.next());
            }
        } else {
            words.push(a);
        }
    }
    flags.push("--".into());
    flags.extend(words);
    flags
}

fn load(files: &[String]) -> Result<Workspace, CliError> {
    let mut ws = Workspace::new();
    for file in files {
        let source = std::fs::read_to_string(file).map_err(|e| CliError::User {
            code: "IoError".into(),
            message: format!("{file}: {e}"),
        })?;
        ws.parse_into(&source).map_err(|e| CliError::User {
            code: e.code().into(),
            message: format!("{file}:{e}"),
        })?;
    }
    Ok(ws)
}

fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    let at = cli
        .words
        .iter()
        .position(|w| COMMANDS.contains(&w.as_str()))
        .ok_or_else(|| CliError::usage(format!("no command given; commands: {}", COMMANDS.join(", "))))?;
    let (files, rest) = cli.words.split_at(at);
    let ws = load(files)?;
    let opts = Options {
        seed: cli.seed,
        trials: cli.trials,
        dims: cli.dims,
    };
    commands::run(&ws, &rest[0], &rest[1..], &opts)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse_from(arrange(std::env::args().collect())) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let result = catch_unwind(AssertUnwindSafe(|| execute(&cli))).unwrap_or_else(|panic| {
        let text = panic
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_default();
        Err(CliError::Internal {
            code: "InvariantViolation".into(),
            message: text,
        })
    });
    match result {
        Ok(out) => {
            if cli.json {
                let mut doc = json!({ "format_version": 1 });
                if let (Some(d), Some(r)) = (doc.as_object_mut(), out.shown.json.as_object()) {
                    d.extend(r.clone());
                }
                println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
            } else {
                print!("{}", out.shown.text);
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            }
        }
        Err(e) => {
            if cli.json {
                let doc = json!({
                    "format_version": 1,
                    "error": { "code": e.code(), "message": e.message() },
                });
                println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
            } else {
                eprintln!("error[{}]: {}", e.code(), e.message());
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn words(s: &str) -> Vec<String> {
        s.split_whitespace().map(String::from).collect()
    }

    #[test]
    fn flags_move_ahead_of_words() {
        let got = arrange(words("ncvx f.ncvx eval g -1/2 --json --seed 3 0"));
        assert_eq!(got, words("ncvx --json --seed 3 -- f.ncvx eval g -1/2 0"));
        let cli = Cli::try_parse_from(got).unwrap();
        assert!(cli.json);
        assert_eq!(cli.seed, 3);
        assert_eq!(cli.words, words("f.ncvx eval g -1/2 0"));
    }

    #[test]
    fn dims_pair() {
        assert_eq!(parse_dims("3,2"), Ok((3, 2)));
        assert!(parse_dims("3").is_err());
    }
}
