//! The interactive interpreter: settings, the loaded module and the live
//! result stream behind `eval` and `more`.

use std::fmt;
use std::path::{Path, PathBuf};

use plural_core::calculi::{enumerate_values, enumerate_values_direct, DerivationTrace, UNBOUNDED};
use plural_core::rewriting::{Reachable, RewriteStep};
use plural_core::transform::{pst_optimized, pst_simple};
use plural_core::{
    is_class_cab_combined, parse_open_expression, parse_program, print_program, DenotationStream, EnumConfig, Program,
    SearchConfig, SearchStrategy, SemanticsMode, Term,
};
use thiserror::Error;

pub const CAB_SUPPORTED: &str = "Both alpha and beta plural semantics supported for this program.";
pub const DEFAULT_DEPTH: u32 = 12;
pub const DEFAULT_STEPS: usize = 10_000;
pub const DEFAULT_WIDTH: usize = 4;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SessionError {
    #[error("no module loaded")]
    NoModule,
    #[error("no active evaluation; use eval first")]
    NoStream,
    #[error("no result to show a path for")]
    NoResult,
    #[error("cannot read {path}: {reason}")]
    Io { path: String, reason: String },
    #[error("{0}")]
    Parse(String),
    #[error("unknown command `{0}`")]
    UnknownCommand(String),
    #[error("invalid argument for {command}: `{arg}`")]
    InvalidArgument { command: &'static str, arg: String },
}

/// Value semantics. Run-time choice is plain rewriting of the program.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Semantics {
    Calculus(SemanticsMode),
    RunTime,
}

impl Semantics {
    pub fn from_name(s: &str) -> Option<Semantics> {
        match s {
            "run-time" | "runtime" | "rt" => Some(Semantics::RunTime),
            "call-time" | "calltime" | "ct" => Some(Semantics::Calculus(SemanticsMode::CallTime)),
            "alpha-plural" | "apl" => Some(Semantics::Calculus(SemanticsMode::AlphaPlural)),
            "beta-plural" | "bpl" => Some(Semantics::Calculus(SemanticsMode::BetaPlural)),
            "sapl" => Some(Semantics::Calculus(SemanticsMode::CombinedAlpha)),
            "sbpl" => Some(Semantics::Calculus(SemanticsMode::CombinedBeta)),
            _ => SemanticsMode::from_name(s).map(Semantics::Calculus),
        }
    }
}

impl fmt::Display for Semantics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Semantics::Calculus(m) => write!(f, "{}", m),
            Semantics::RunTime => f.write_str("run-time"),
        }
    }
}

/// How plural semantics are computed. `Rewrite` runs plain rewriting on the
/// pST-transformed program.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Engine {
    Calculi,
    Rewrite,
}

impl Engine {
    pub fn from_name(s: &str) -> Option<Engine> {
        match s {
            "calculi" | "calculus" => Some(Engine::Calculi),
            "rewrite" | "rewriting" | "rewrite-via-pst" => Some(Engine::Rewrite),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Settings {
    pub semantics: Semantics,
    pub engine: Engine,
    pub strategy: SearchStrategy,
    /// Limit used when `eval` gives no depth; `None` is unbounded.
    pub depth: Option<u32>,
    pub steps: Option<usize>,
    pub width: Option<usize>,
    pub show_paths: bool,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            semantics: Semantics::Calculus(SemanticsMode::CombinedAlpha),
            engine: Engine::Calculi,
            strategy: SearchStrategy::BreadthFirst,
            depth: Some(DEFAULT_DEPTH),
            steps: Some(DEFAULT_STEPS),
            width: Some(DEFAULT_WIDTH),
            show_paths: false,
        }
    }
}

enum Stream {
    Calculi { stream: Box<DenotationStream>, expr: Term },
    Rewrite { search: Box<Reachable> },
}

impl Stream {
    fn next_total(&mut self) -> Option<Term> {
        match self {
            Stream::Calculi { stream, .. } => stream.next(),
            Stream::Rewrite { search } => search.by_ref().map(|(t, _)| t).find(|t| t.is_cterm() && t.is_total()),
        }
    }

    fn path(&mut self, t: &Term) -> Option<Evidence> {
        match self {
            Stream::Calculi { stream, expr } => {
                let d = stream.depth_reached()?;
                stream.evaluator().prove(expr, t, d).map(Evidence::Proof)
            }
            Stream::Rewrite { search } => search.path_to(t).map(Evidence::Steps),
        }
    }
}

enum Evidence {
    Proof(DerivationTrace),
    Steps(Vec<RewriteStep>),
}

#[derive(Default)]
pub struct Session {
    settings: Settings,
    module: Option<Program>,
    stream: Option<Stream>,
    last: Option<Term>,
    start: Option<Term>,
    base_dir: Option<PathBuf>,
    quit: bool,
}

impl Session {
    pub fn new() -> Self {
        Session::default()
    }

    pub fn with_settings(settings: Settings) -> Self {
        Session { settings, ..Session::default() }
    }

    pub fn settings(&self) -> &Settings {
        &self.settings
    }

    pub fn settings_mut(&mut self) -> &mut Settings {
        &mut self.settings
    }

    pub fn module(&self) -> Option<&Program> {
        self.module.as_ref()
    }

    /// Relative `load` paths that do not exist from the working directory
    /// are looked up here.
    pub fn set_base_dir(&mut self, dir: Option<PathBuf>) {
        self.base_dir = dir;
    }

    pub fn has_quit(&self) -> bool {
        self.quit
    }

    /// Runs one complete command, bare or parenthesized, and returns the
    /// lines it prints.
    pub fn execute(&mut self, command: &str) -> Result<Vec<String>, SessionError> {
        let text = strip_comments(command);
        let mut text = text.trim();
        if text.starts_with('(') && text.ends_with(')') && balanced(&text[1..text.len() - 1]) {
            text = text[1..text.len() - 1].trim();
        }
        let body = text.strip_suffix('.').unwrap_or(text).trim();
        let (word, rest) = match body.find(char::is_whitespace) {
            Some(i) => (&body[..i], body[i..].trim()),
            None => (body, ""),
        };
        match word {
            "" => Ok(vec![]),
            "plural" => self.introduce(&format!("({})", text)),
            "load" | "in" => self.load(rest),
            "eval" | "red" | "reduce" => self.eval(rest),
            "more" => self.more(),
            "depth-first" => self.set_strategy(SearchStrategy::DepthFirst),
            "breadth-first" => self.set_strategy(SearchStrategy::BreadthFirst),
            "reboot" => {
                *self = Session { base_dir: self.base_dir.take(), ..Session::default() };
                Ok(vec!["Session rebooted.".into()])
            }
            "showTr" | "show-tr" => self.show_tr(rest),
            "semantics" => {
                let s = Semantics::from_name(rest)
                    .ok_or_else(|| SessionError::InvalidArgument { command: "semantics", arg: rest.into() })?;
                self.settings.semantics = s;
                self.stream = None;
                Ok(vec![format!("Semantics set to {}.", s)])
            }
            "engine" => {
                let e = Engine::from_name(rest)
                    .ok_or_else(|| SessionError::InvalidArgument { command: "engine", arg: rest.into() })?;
                self.settings.engine = e;
                self.stream = None;
                Ok(vec![format!("Engine set to {}.", if e == Engine::Calculi { "calculi" } else { "rewrite" })])
            }
            "width" => {
                self.settings.width = match rest {
                    "inf" | "unbounded" => None,
                    n => Some(
                        n.parse()
                            .ok()
                            .filter(|&n: &usize| n > 0)
                            .ok_or_else(|| SessionError::InvalidArgument { command: "width", arg: rest.into() })?,
                    ),
                };
                Ok(vec![])
            }
            "path" => {
                self.settings.show_paths = match rest {
                    "on" => true,
                    "off" => false,
                    _ => return Err(SessionError::InvalidArgument { command: "path", arg: rest.into() }),
                };
                Ok(vec![])
            }
            "show" if rest == "path" => self.show_path(),
            "quit" | "q" | "exit" => {
                self.quit = true;
                Ok(vec![])
            }
            other => Err(SessionError::UnknownCommand(other.into())),
        }
    }

    fn introduce(&mut self, text: &str) -> Result<Vec<String>, SessionError> {
        let program = parse_program(text).map_err(|d| SessionError::Parse(d.to_string()))?;
        let mut out = vec!["Module introduced.".to_string()];
        let cab = is_class_cab_combined(&program);
        out.push(match cab.violations.first() {
            None => CAB_SUPPORTED.to_string(),
            Some(v) => {
                let user = v.rule + 1 - (program.rules().len() - program.user_rules().len());
                let vars: Vec<&str> = v.vars.iter().map(|x| x.as_str()).collect();
                format!(
                    "Only alpha plural semantics supported for this program: rule {} `{}` shares {} of argument {} with its right-hand side.",
                    user,
                    program.rule(v.rule),
                    vars.join(", "),
                    v.arg + 1
                )
            }
        });
        self.module = Some(program);
        self.stream = None;
        self.last = None;
        Ok(out)
    }

    fn load(&mut self, path: &str) -> Result<Vec<String>, SessionError> {
        let path = path.trim_matches('"');
        let mut p = PathBuf::from(path);
        if !p.exists() && p.is_relative() {
            if let Some(base) = &self.base_dir {
                p = base.join(path);
            }
        }
        let text =
            std::fs::read_to_string(&p).map_err(|e| SessionError::Io { path: path.into(), reason: e.to_string() })?;
        self.introduce(&text)
    }

    fn module_ref(&self) -> Result<&Program, SessionError> {
        self.module.as_ref().ok_or(SessionError::NoModule)
    }

    fn eval(&mut self, rest: &str) -> Result<Vec<String>, SessionError> {
        let program = self.module_ref()?.clone();
        let (limit, expr_text) = split_depth(rest)?;
        let expr =
            parse_open_expression(expr_text, program.signature()).map_err(|d| SessionError::Parse(d.to_string()))?;
        let s = &self.settings;
        let stream = match (s.semantics, s.engine) {
            (Semantics::RunTime, _) => self.rewrite_stream(&program, &expr, limit),
            (Semantics::Calculus(_), Engine::Rewrite) => {
                let pst = pst_optimized(&program).map_err(|e| SessionError::Parse(e.to_string()))?;
                self.rewrite_stream(&pst.output, &expr, limit)
            }
            (Semantics::Calculus(mode), Engine::Calculi) => {
                let depth = match limit {
                    Limit::Default => s.depth.unwrap_or(UNBOUNDED),
                    Limit::Bounded(n) => u32::try_from(n).unwrap_or(UNBOUNDED),
                    Limit::Unbounded => UNBOUNDED,
                };
                let cfg = EnumConfig { depth, plural_width: s.width, ..EnumConfig::default() };
                let stream = match s.strategy {
                    SearchStrategy::BreadthFirst => enumerate_values(&program, mode, &expr, &cfg),
                    SearchStrategy::DepthFirst if depth != UNBOUNDED => {
                        enumerate_values_direct(&program, mode, &expr, &cfg)
                    }
                    SearchStrategy::DepthFirst => enumerate_values(&program, mode, &expr, &cfg),
                }
                .map_err(|e| SessionError::Parse(e.to_string()))?;
                Stream::Calculi { stream: Box::new(stream), expr: expr.clone() }
            }
        };
        self.stream = Some(stream);
        self.start = Some(expr);
        self.last = None;
        self.advance("No solution.")
    }

    fn rewrite_stream(&self, program: &Program, e: &Term, limit: Limit) -> Stream {
        let bound = match limit {
            Limit::Default => self.settings.steps,
            Limit::Bounded(n) => Some(n),
            Limit::Unbounded => None,
        };
        let cfg = SearchConfig {
            strategy: self.settings.strategy,
            step_bound: bound,
            record_paths: true,
            ..SearchConfig::bfs(0)
        };
        Stream::Rewrite { search: Box::new(Reachable::new(program, e, cfg)) }
    }

    fn more(&mut self) -> Result<Vec<String>, SessionError> {
        if self.stream.is_none() {
            return Err(SessionError::NoStream);
        }
        self.advance("No more solutions.")
    }

    fn advance(&mut self, exhausted: &str) -> Result<Vec<String>, SessionError> {
        let stream = self.stream.as_mut().ok_or(SessionError::NoStream)?;
        match stream.next_total() {
            Some(t) => {
                let mut out = vec![format!("Result: {}", t)];
                if self.settings.show_paths {
                    out.extend(render_path(stream.path(&t), self.start.as_ref()));
                }
                self.last = Some(t);
                Ok(out)
            }
            None => Ok(vec![exhausted.to_string()]),
        }
    }

    fn show_path(&mut self) -> Result<Vec<String>, SessionError> {
        let t = self.last.clone().ok_or(SessionError::NoResult)?;
        let stream = self.stream.as_mut().ok_or(SessionError::NoResult)?;
        Ok(render_path(stream.path(&t), self.start.as_ref()))
    }

    fn set_strategy(&mut self, s: SearchStrategy) -> Result<Vec<String>, SessionError> {
        self.settings.strategy = s;
        Ok(vec![])
    }

    fn show_tr(&self, rest: &str) -> Result<Vec<String>, SessionError> {
        let program = self.module_ref()?;
        let report = match rest {
            "" | "optimized" => pst_optimized(program),
            "simple" => pst_simple(program),
            _ => return Err(SessionError::InvalidArgument { command: "showTr", arg: rest.into() }),
        }
        .map_err(|e| SessionError::Parse(e.to_string()))?;
        Ok(print_program(&report.output).lines().map(str::to_string).collect())
    }
}

fn render_path(path: Option<Evidence>, start: Option<&Term>) -> Vec<String> {
    match path {
        Some(Evidence::Proof(tr)) => tr.to_string().lines().map(str::to_string).collect(),
        Some(Evidence::Steps(steps)) => {
            let mut out: Vec<String> = start.map(|s| format!("   {}", s)).into_iter().collect();
            out.extend(steps.iter().map(|s| format!("-> {}   [rule {} at {}]", s.result, s.rule, s.position)));
            out
        }
        None => vec!["No path available.".into()],
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Limit {
    Default,
    Bounded(usize),
    Unbounded,
}

/// Splits an optional leading `depth = N` (or `[depth = N]`) off `eval`'s
/// argument.
fn split_depth(rest: &str) -> Result<(Limit, &str), SessionError> {
    let s = rest.trim_start();
    let bracketed = s.starts_with('[');
    let inner = if bracketed { s[1..].trim_start() } else { s };
    let Some(after) = inner.strip_prefix("depth") else { return Ok((Limit::Default, rest)) };
    let Some(after) = after.trim_start().strip_prefix('=') else { return Ok((Limit::Default, rest)) };
    let after = after.trim_start();
    let end = after.find(|c: char| c.is_whitespace() || c == ']').unwrap_or(after.len());
    let (num, mut tail) = after.split_at(end);
    if bracketed {
        tail = tail
            .trim_start()
            .strip_prefix(']')
            .ok_or_else(|| SessionError::InvalidArgument { command: "eval", arg: rest.into() })?;
    }
    let limit = match num {
        "inf" | "unbounded" => Limit::Unbounded,
        n => Limit::Bounded(n.parse().map_err(|_| SessionError::InvalidArgument { command: "eval", arg: n.into() })?),
    };
    Ok((limit, tail.trim()))
}

fn strip_comments(text: &str) -> String {
    text.lines().map(|l| l.find("***").map_or(l, |i| &l[..i])).collect::<Vec<_>>().join("\n")
}

fn balanced(s: &str) -> bool {
    let mut depth = 0i32;
    for c in s.chars() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth < 0 {
                    return false;
                }
            }
            _ => {}
        }
    }
    depth == 0
}

const NULLARY: &[&str] = &["more", "reboot", "depth-first", "breadth-first", "showTr", "show-tr", "quit", "q", "exit"];

/// Accumulates input lines into complete commands. A command ends when its
/// parentheses balance and it ends with `.` or `)`, or is a bare nullary
/// command. Inline modules end at `endp`.
#[derive(Default)]
pub struct LineBuffer {
    pending: String,
}

impl LineBuffer {
    pub fn new() -> Self {
        LineBuffer::default()
    }

    pub fn is_empty(&self) -> bool {
        self.pending.trim().is_empty()
    }

    /// Adds a line and returns the command it completes, if any.
    pub fn push(&mut self, line: &str) -> Option<String> {
        self.pending.push_str(line);
        self.pending.push('\n');
        let text = strip_comments(&self.pending);
        let t = text.trim();
        if t.is_empty() {
            self.pending.clear();
            return None;
        }
        let head = t.trim_start_matches('(').trim_start();
        let first = head.split(|c: char| c.is_whitespace() || c == '.' || c == ')').next().unwrap_or("");
        let done = if first == "plural" {
            balanced(t) && t.split(|c: char| !c.is_alphanumeric()).any(|w| w == "endp")
        } else {
            balanced(t) && (t.ends_with('.') || t.ends_with(')') || NULLARY.contains(&t))
        };
        if done {
            Some(std::mem::take(&mut self.pending))
        } else {
            None
        }
    }

    /// Whatever is left at end of input.
    pub fn finish(&mut self) -> Option<String> {
        let rest = std::mem::take(&mut self.pending);
        (!strip_comments(&rest).trim().is_empty()).then_some(rest)
    }
}

/// Runs a whole script, collecting printed lines. Errors are printed as
/// `Error: ...` lines; the count of failed commands is returned alongside.
pub fn run_script(session: &mut Session, script: &str) -> (Vec<String>, usize) {
    let mut out = Vec::new();
    let mut errors = 0;
    let mut buf = LineBuffer::new();
    let mut commands: Vec<String> = Vec::new();
    for line in script.lines() {
        commands.extend(buf.push(line));
    }
    commands.extend(buf.finish());
    for c in commands {
        match session.execute(&c) {
            Ok(lines) => out.extend(lines),
            Err(e) => {
                errors += 1;
                out.push(format!("Error: {}", e));
            }
        }
        if session.has_quit() {
            break;
        }
    }
    (out, errors)
}

/// The directory of a script, used to resolve its `load` commands.
pub fn script_dir(path: &Path) -> Option<PathBuf> {
    path.parent().map(Path::to_path_buf)
}
