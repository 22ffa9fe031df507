use std::io::{self, BufRead, IsTerminal, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use plural::session::{script_dir, Engine, Semantics, Session, Settings};
use plural::{run_script, LineBuffer};

/// Interpreter for plural constructor systems.
#[derive(Parser)]
#[command(version)]
struct Args {
    /// Module to load at startup.
    file: Option<PathBuf>,
    /// Run the commands in a script and exit; the exit status is nonzero if
    /// any command failed.
    #[arg(long)]
    run: Option<PathBuf>,
    /// call-time, run-time, alpha, beta, s-alpha or s-beta.
    #[arg(long, value_parser = parse_semantics)]
    semantics: Option<Semantics>,
    /// calculi or rewrite.
    #[arg(long, value_parser = parse_engine)]
    engine: Option<Engine>,
    /// Default depth ceiling for the calculi engine, or `inf`.
    #[arg(long, value_parser = parse_limit)]
    depth: Option<Limit>,
    /// Default step bound for rewriting, or `inf`.
    #[arg(long, value_parser = parse_limit)]
    steps: Option<Limit>,
    /// Maximum size of a compressible parameter set, or `inf`.
    #[arg(long, value_parser = parse_limit)]
    width: Option<Limit>,
}

/// A bound, `None` for `inf`.
#[derive(Clone, Copy)]
struct Limit(Option<usize>);

fn parse_semantics(s: &str) -> Result<Semantics, String> {
    Semantics::from_name(s).ok_or_else(|| format!("unknown semantics `{}`", s))
}

fn parse_engine(s: &str) -> Result<Engine, String> {
    Engine::from_name(s).ok_or_else(|| format!("unknown engine `{}`", s))
}

fn parse_limit(s: &str) -> Result<Limit, String> {
    match s {
        "inf" | "unbounded" => Ok(Limit(None)),
        n => n.parse().map(|n| Limit(Some(n))).map_err(|_| format!("expected a number or `inf`, found `{}`", n)),
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    let mut settings = Settings::default();
    if let Some(s) = args.semantics {
        settings.semantics = s;
    }
    if let Some(e) = args.engine {
        settings.engine = e;
    }
    if let Some(Limit(d)) = args.depth {
        settings.depth = d.map(|d| u32::try_from(d).unwrap_or(u32::MAX));
    }
    if let Some(Limit(s)) = args.steps {
        settings.steps = s;
    }
    if let Some(Limit(w)) = args.width {
        settings.width = w;
    }
    let mut session = Session::with_settings(settings);
    let mut failed = false;

    if let Some(file) = &args.file {
        match session.execute(&format!("load {} .", file.display())) {
            Ok(lines) => lines.iter().for_each(|l| println!("{}", l)),
            Err(e) => {
                eprintln!("Error: {}", e);
                failed = true;
            }
        }
    }

    if let Some(script) = &args.run {
        let text = match std::fs::read_to_string(script) {
            Ok(t) => t,
            Err(e) => {
                eprintln!("Error: cannot read {}: {}", script.display(), e);
                return ExitCode::FAILURE;
            }
        };
        session.set_base_dir(script_dir(script));
        let (lines, errors) = run_script(&mut session, &text);
        lines.iter().for_each(|l| println!("{}", l));
        return if failed || errors > 0 { ExitCode::FAILURE } else { ExitCode::SUCCESS };
    }

    let stdin = io::stdin();
    let interactive = stdin.is_terminal();
    let mut buf = LineBuffer::new();
    let prompt = |buf: &LineBuffer| {
        if interactive {
            print!("{}", if buf.is_empty() { "plural> " } else { "> " });
            let _ = io::stdout().flush();
        }
    };
    prompt(&buf);
    for line in stdin.lock().lines() {
        let Ok(line) = line else { break };
        if let Some(cmd) = buf.push(&line) {
            report(&mut session, &cmd, &mut failed);
            if session.has_quit() {
                break;
            }
        }
        prompt(&buf);
    }
    if let Some(cmd) = buf.finish() {
        report(&mut session, &cmd, &mut failed);
    }
    if !interactive && failed {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}

fn report(session: &mut Session, cmd: &str, failed: &mut bool) {
    match session.execute(cmd) {
        Ok(lines) => lines.iter().for_each(|l| println!("{}", l)),
        Err(e) => {
            println!("Error: {}", e);
            *failed = true;
        }
    }
}
