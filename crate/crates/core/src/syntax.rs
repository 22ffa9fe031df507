//! Concrete syntax of programs and expressions.
//!
//! ```text
//! plural SAMPLE-PROGRAM is
//!   f is plural .
//!   f(c(X)) -> p(X, X) .
//! endp
//! ```
//!
//! Identifiers starting with an uppercase letter or `_` are variables.
//! `?` is infix and right-associative, `if e1 then e2` is mixfix, `bot`
//! (or `_|_`) is ⊥.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::program::{
    Diagnostic, DiagnosticKind, Diagnostics, Location, Plurality, PluralityMap, Program, Rule, Signature,
};
use crate::term::{Sym, Term, CHOICE, FF, IF_THEN, TT};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Comma,
    Dot,
    Arrow,
    Question,
    Bottom,
    Kw(Keyword),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Keyword {
    Plural,
    Is,
    Endp,
    If,
    Then,
    Bot,
}

fn keyword(s: &str) -> Option<Keyword> {
    Some(match s {
        "plural" => Keyword::Plural,
        "is" => Keyword::Is,
        "endp" => Keyword::Endp,
        "if" => Keyword::If,
        "then" => Keyword::Then,
        "bot" => Keyword::Bot,
        _ => return None,
    })
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

fn syntax_error(msg: String, loc: Location) -> Diagnostic {
    Diagnostic::new(DiagnosticKind::Syntax, msg).at(loc)
}

fn lex(src: &str) -> Result<Vec<(Tok, Location)>, Diagnostic> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        let loc = Location { line, col };
        let advance = |n: usize, i: &mut usize, col: &mut usize| {
            *i += n;
            *col += n;
        };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            advance(1, &mut i, &mut col);
            continue;
        }
        // `***` comments run to the end of the line
        if chars[i..].starts_with(&['*', '*', '*']) {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let tok = match c {
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            '.' => Tok::Dot,
            '?' => Tok::Question,
            '-' if chars.get(i + 1) == Some(&'>') => {
                advance(2, &mut i, &mut col);
                out.push((Tok::Arrow, loc));
                continue;
            }
            '_' if chars[i..].starts_with(&['_', '|', '_']) => {
                advance(3, &mut i, &mut col);
                out.push((Tok::Bottom, loc));
                continue;
            }
            c if is_ident_char(c) => {
                let start = i;
                while i < chars.len()
                    && (is_ident_char(chars[i])
                        || (chars[i] == '-' && chars.get(i + 1).is_some_and(|&n| is_ident_char(n))))
                {
                    i += 1;
                }
                col += i - start;
                let word: String = chars[start..i].iter().collect();
                out.push((keyword(&word).map(Tok::Kw).unwrap_or(Tok::Ident(word)), loc));
                continue;
            }
            other => return Err(syntax_error(format!("unexpected character `{}`", other), loc)),
        };
        advance(1, &mut i, &mut col);
        out.push((tok, loc));
    }
    Ok(out)
}

/// Untyped expression tree; symbol classes are assigned afterwards.
#[derive(Clone, Debug)]
enum Raw {
    Var(String),
    Bot,
    App(String, Vec<Raw>, Location),
    Choice(Box<Raw>, Box<Raw>),
    IfThen(Box<Raw>, Box<Raw>),
}

fn is_var_name(s: &str) -> bool {
    s.chars().next().is_some_and(|c| c.is_uppercase() || c == '_')
}

struct Parser {
    toks: Vec<(Tok, Location)>,
    pos: usize,
    end: Location,
}

impl Parser {
    fn new(src: &str) -> Result<Self, Diagnostic> {
        let toks = lex(src)?;
        let line = src.lines().count().max(1);
        let col = src.lines().last().map(|l| l.chars().count() + 1).unwrap_or(1);
        Ok(Parser { toks, pos: 0, end: Location { line, col } })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|(t, _)| t)
    }

    fn loc(&self) -> Location {
        self.toks.get(self.pos).map(|(_, l)| *l).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        self.pos += 1;
        t
    }

    fn describe(t: Option<&Tok>) -> String {
        match t {
            None => "end of input".to_string(),
            Some(Tok::Ident(s)) => format!("`{}`", s),
            Some(t) => format!("`{}`", tok_text(t)),
        }
    }

    fn expect(&mut self, want: Tok) -> Result<(), Diagnostic> {
        if self.peek() == Some(&want) {
            self.pos += 1;
            Ok(())
        } else {
            Err(syntax_error(
                format!("expected `{}`, found {}", tok_text(&want), Self::describe(self.peek())),
                self.loc(),
            ))
        }
    }

    fn expr(&mut self) -> Result<Raw, Diagnostic> {
        let left = self.guarded()?;
        if self.peek() == Some(&Tok::Question) {
            self.pos += 1;
            let right = self.expr()?;
            return Ok(Raw::Choice(Box::new(left), Box::new(right)));
        }
        Ok(left)
    }

    fn guarded(&mut self) -> Result<Raw, Diagnostic> {
        if self.peek() == Some(&Tok::Kw(Keyword::If)) {
            self.pos += 1;
            let cond = self.expr()?;
            self.expect(Tok::Kw(Keyword::Then))?;
            let then = self.expr()?;
            return Ok(Raw::IfThen(Box::new(cond), Box::new(then)));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Raw, Diagnostic> {
        let loc = self.loc();
        match self.bump() {
            Some(Tok::LParen) => {
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Some(Tok::Kw(Keyword::Bot)) | Some(Tok::Bottom) => Ok(Raw::Bot),
            Some(Tok::Ident(name)) => {
                let mut args = Vec::new();
                let applied = self.peek() == Some(&Tok::LParen);
                if applied {
                    self.pos += 1;
                    if self.peek() == Some(&Tok::RParen) {
                        self.pos += 1;
                    } else {
                        loop {
                            args.push(self.expr()?);
                            match self.bump() {
                                Some(Tok::Comma) => continue,
                                Some(Tok::RParen) => break,
                                t => {
                                    self.pos -= 1;
                                    return Err(syntax_error(
                                        format!("expected `,` or `)`, found {}", Self::describe(t.as_ref())),
                                        self.loc(),
                                    ));
                                }
                            }
                        }
                    }
                }
                if is_var_name(&name) {
                    if applied {
                        return Err(syntax_error(format!("variable `{}` cannot be applied", name), loc));
                    }
                    Ok(Raw::Var(name))
                } else {
                    Ok(Raw::App(name, args, loc))
                }
            }
            t => {
                self.pos -= 1;
                Err(syntax_error(format!("expected an expression, found {}", Self::describe(t.as_ref())), loc))
            }
        }
    }
}

fn tok_text(t: &Tok) -> &str {
    match t {
        Tok::Ident(s) => s,
        Tok::LParen => "(",
        Tok::RParen => ")",
        Tok::Comma => ",",
        Tok::Dot => ".",
        Tok::Arrow => "->",
        Tok::Question => "?",
        Tok::Bottom => "_|_",
        Tok::Kw(k) => match k {
            Keyword::Plural => "plural",
            Keyword::Is => "is",
            Keyword::Endp => "endp",
            Keyword::If => "if",
            Keyword::Then => "then",
            Keyword::Bot => "bot",
        },
    }
}

fn collect_arities(r: &Raw, out: &mut BTreeMap<String, (usize, Location)>, diags: &mut Vec<Diagnostic>) {
    match r {
        Raw::Var(_) | Raw::Bot => {}
        Raw::App(name, args, loc) => {
            match out.get(name) {
                Some(&(n, _)) if n != args.len() => diags.push(
                    Diagnostic::new(
                        DiagnosticKind::ArityClash,
                        format!("`{}` is used with arities {} and {}", name, n, args.len()),
                    )
                    .at(*loc),
                ),
                Some(_) => {}
                None => {
                    out.insert(name.clone(), (args.len(), *loc));
                }
            }
            args.iter().for_each(|a| collect_arities(a, out, diags));
        }
        Raw::Choice(a, b) | Raw::IfThen(a, b) => {
            collect_arities(a, out, diags);
            collect_arities(b, out, diags);
        }
    }
}

fn classify(r: &Raw, functions: &BTreeSet<String>) -> Term {
    match r {
        Raw::Var(v) => Term::var(v),
        Raw::Bot => Term::Bottom,
        Raw::App(name, args, _) => {
            let args = args.iter().map(|a| classify(a, functions)).collect();
            if functions.contains(name) {
                Term::Fun(Sym::new(name), args)
            } else {
                Term::Con(Sym::new(name), args)
            }
        }
        Raw::Choice(a, b) => Term::choice(classify(a, functions), classify(b, functions)),
        Raw::IfThen(c, t) => Term::if_then(classify(c, functions), classify(t, functions)),
    }
}

enum Statement {
    Rule(Raw, Raw, Location),
    Annotation(String, String, Location),
}

/// Parses and validates a program. Rule-defined roots and annotated names
/// are functions; every other applied name is a constructor.
pub fn parse_program(text: &str) -> Result<Program, Diagnostics> {
    let mut p = Parser::new(text)?;
    let wrapped = p.peek() == Some(&Tok::LParen);
    if wrapped {
        p.pos += 1;
    }
    p.expect(Tok::Kw(Keyword::Plural))?;
    let name = match p.bump() {
        Some(Tok::Ident(n)) => n,
        t => {
            p.pos -= 1;
            return Err(syntax_error(
                format!("expected a module name, found {}", Parser::describe(t.as_ref())),
                p.loc(),
            )
            .into());
        }
    };
    p.expect(Tok::Kw(Keyword::Is))?;
    let mut stmts = Vec::new();
    loop {
        let loc = p.loc();
        match p.peek() {
            Some(Tok::Kw(Keyword::Endp)) => {
                p.pos += 1;
                break;
            }
            None => return Err(syntax_error("missing `endp`".to_string(), loc).into()),
            Some(Tok::Ident(f)) if p.peek_at(1) == Some(&Tok::Kw(Keyword::Is)) => {
                let f = f.clone();
                p.pos += 2;
                let value = match p.bump() {
                    Some(Tok::Kw(Keyword::Plural)) => "plural".to_string(),
                    Some(Tok::Ident(s)) => s,
                    t => {
                        p.pos -= 1;
                        return Err(syntax_error(
                            format!("expected a plurality, found {}", Parser::describe(t.as_ref())),
                            p.loc(),
                        )
                        .into());
                    }
                };
                p.expect(Tok::Dot)?;
                stmts.push(Statement::Annotation(f, value, loc));
            }
            _ => {
                let lhs = p.expr()?;
                p.expect(Tok::Arrow)?;
                let rhs = p.expr()?;
                p.expect(Tok::Dot)?;
                stmts.push(Statement::Rule(lhs, rhs, loc));
            }
        }
    }
    if wrapped {
        p.expect(Tok::RParen)?;
    }
    if let Some(t) = p.peek() {
        return Err(syntax_error(format!("unexpected {} after `endp`", Parser::describe(Some(t))), p.loc()).into());
    }

    let mut diags = Vec::new();
    let mut functions: BTreeSet<String> = [CHOICE, IF_THEN].iter().map(|s| s.to_string()).collect();
    let mut arities = BTreeMap::new();
    arities.insert(CHOICE.to_string(), (2, Location { line: 0, col: 0 }));
    arities.insert(IF_THEN.to_string(), (2, Location { line: 0, col: 0 }));
    arities.insert(TT.to_string(), (0, Location { line: 0, col: 0 }));
    arities.insert(FF.to_string(), (0, Location { line: 0, col: 0 }));
    for s in &stmts {
        match s {
            Statement::Rule(lhs, rhs, loc) => {
                match lhs {
                    Raw::App(f, _, _) => {
                        functions.insert(f.clone());
                    }
                    Raw::Choice(..) | Raw::IfThen(..) => diags.push(
                        Diagnostic::new(
                            DiagnosticKind::BuiltinRedefined,
                            "rules for the built-in `?` and `if_then` cannot be redefined".to_string(),
                        )
                        .at(*loc),
                    ),
                    _ => diags.push(
                        Diagnostic::new(
                            DiagnosticKind::LhsNotFunction,
                            "left-hand side must be a function application".to_string(),
                        )
                        .at(*loc),
                    ),
                }
                collect_arities(lhs, &mut arities, &mut diags);
                collect_arities(rhs, &mut arities, &mut diags);
            }
            Statement::Annotation(f, _, _) => {
                functions.insert(f.clone());
            }
        }
    }
    if !diags.is_empty() {
        return Err(Diagnostics(diags));
    }

    let mut plurality = PluralityMap::new();
    let mut rules = Vec::new();
    let mut rule_locs = Vec::new();
    for s in &stmts {
        match s {
            Statement::Rule(lhs, rhs, loc) => {
                rules.push(Rule::new(classify(lhs, &functions), classify(rhs, &functions)));
                rule_locs.push(*loc);
            }
            Statement::Annotation(f, value, loc) => {
                let Some(&(arity, _)) = arities.get(f) else {
                    diags.push(
                        Diagnostic::new(
                            DiagnosticKind::UnknownAnnotation,
                            format!("plurality annotation for unknown function `{}`", f),
                        )
                        .at(*loc),
                    );
                    continue;
                };
                match PluralityMap::parse_annotation(value, arity) {
                    Some(tags) => plurality.set(Sym::new(f), tags),
                    None => diags.push(
                        Diagnostic::new(
                            DiagnosticKind::AnnotationArity,
                            format!("annotation `{}` does not fit `{}` of arity {}", value, f, arity),
                        )
                        .at(*loc),
                    ),
                }
            }
        }
    }
    if !diags.is_empty() {
        return Err(Diagnostics(diags));
    }
    match Program::new(&name, rules, plurality, &[]) {
        Ok(p) => Ok(p),
        Err(Diagnostics(mut ds)) => {
            for d in &mut ds {
                if d.location.is_none() {
                    if let Some(idx) = rule_index(&d.message) {
                        d.location = rule_locs.get(idx).copied();
                    }
                }
            }
            Err(Diagnostics(ds))
        }
    }
}

/// Recovers the 0-based rule index from validation messages of the form
/// `rule N ...`.
fn rule_index(msg: &str) -> Option<usize> {
    let rest = msg.strip_prefix("rule ")?;
    let num: String = rest.chars().take_while(|c| c.is_ascii_digit()).collect();
    num.parse::<usize>().ok()?.checked_sub(1)
}

/// Parses an expression over a loaded program's signature.
pub fn parse_expression(text: &str, sig: &Signature) -> Result<Term, Diagnostic> {
    resolve(&parse_raw_expression(text)?, sig)
}

/// Like [`parse_expression`], but names the signature does not know are
/// taken as constructors, with the arity of their first use.
pub fn parse_open_expression(text: &str, sig: &Signature) -> Result<Term, Diagnostic> {
    let raw = parse_raw_expression(text)?;
    let mut arities = BTreeMap::new();
    let mut diags = Vec::new();
    collect_arities(&raw, &mut arities, &mut diags);
    if let Some(d) = diags.into_iter().next() {
        return Err(d);
    }
    let mut open = sig.clone();
    for (name, (n, _)) in arities {
        if !sig.contains(&name) {
            open.constructors.insert(Sym::new(&name), n);
        }
    }
    resolve(&raw, &open)
}

fn parse_raw_expression(text: &str) -> Result<Raw, Diagnostic> {
    let mut p = Parser::new(text)?;
    let raw = p.expr()?;
    if p.peek() == Some(&Tok::Dot) {
        p.pos += 1;
    }
    if let Some(t) = p.peek() {
        return Err(syntax_error(format!("unexpected {}", Parser::describe(Some(t))), p.loc()));
    }
    Ok(raw)
}

fn resolve(r: &Raw, sig: &Signature) -> Result<Term, Diagnostic> {
    match r {
        Raw::Var(v) => Ok(Term::var(v)),
        Raw::Bot => Ok(Term::Bottom),
        Raw::Choice(a, b) => Ok(Term::choice(resolve(a, sig)?, resolve(b, sig)?)),
        Raw::IfThen(c, t) => Ok(Term::if_then(resolve(c, sig)?, resolve(t, sig)?)),
        Raw::App(name, args, loc) => {
            let (arity, is_fun) = match (sig.constructor_arity(name), sig.function_arity(name)) {
                (Some(n), _) => (n, false),
                (None, Some(n)) => (n, true),
                (None, None) => {
                    return Err(
                        Diagnostic::new(DiagnosticKind::UnknownSymbol, format!("unknown symbol `{}`", name)).at(*loc)
                    )
                }
            };
            if arity != args.len() {
                return Err(Diagnostic::new(
                    DiagnosticKind::ArityMismatch,
                    format!("`{}` expects {} argument(s), found {}", name, arity, args.len()),
                )
                .at(*loc));
            }
            let args = args.iter().map(|a| resolve(a, sig)).collect::<Result<Vec<_>, _>>()?;
            Ok(if is_fun { Term::Fun(Sym::new(name), args) } else { Term::Con(Sym::new(name), args) })
        }
    }
}

/// Surface rendering: `p(pepe,maria)`, `a ? b`, `if c then e`, `_|_`.
pub fn print_term(e: &Term) -> String {
    e.to_string()
}

fn is_mixfix(e: &Term) -> bool {
    matches!(e, Term::Fun(f, a) if a.len() == 2 && (f.as_str() == CHOICE || f.as_str() == IF_THEN))
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => f.write_str(v),
            Term::Bottom => f.write_str("_|_"),
            Term::Fun(s, a) if a.len() == 2 && s.as_str() == CHOICE => {
                if is_mixfix(&a[0]) {
                    write!(f, "({}) ? {}", a[0], a[1])
                } else {
                    write!(f, "{} ? {}", a[0], a[1])
                }
            }
            Term::Fun(s, a) if a.len() == 2 && s.as_str() == IF_THEN => {
                if matches!(&a[0], Term::Fun(g, _) if g.as_str() == IF_THEN) {
                    write!(f, "if ({}) then {}", a[0], a[1])
                } else {
                    write!(f, "if {} then {}", a[0], a[1])
                }
            }
            Term::Con(s, a) | Term::Fun(s, a) => {
                f.write_str(s)?;
                if !a.is_empty() {
                    f.write_str("(")?;
                    for (i, x) in a.iter().enumerate() {
                        if i > 0 {
                            f.write_str(",")?;
                        }
                        write!(f, "{}", x)?;
                    }
                    f.write_str(")")?;
                }
                Ok(())
            }
        }
    }
}

fn annotation(tags: &[Plurality]) -> Option<String> {
    if tags.iter().all(|t| *t == Plurality::Singular) {
        None
    } else if tags.iter().all(|t| *t == Plurality::Plural) {
        Some("plural".to_string())
    } else {
        Some(tags.iter().map(|t| if *t == Plurality::Singular { 's' } else { 'p' }).collect())
    }
}

/// Renders a program in surface syntax: annotations first, then user rules.
pub fn print_program(p: &Program) -> String {
    let mut out = format!("plural {} is\n", p.name());
    for (f, tags) in p.plurality().iter() {
        if let Some(a) = annotation(tags) {
            out.push_str(&format!("  {} is {} .\n", f, a));
        }
    }
    for r in p.user_rules() {
        out.push_str(&format!("  {}\n", r));
    }
    out.push_str("endp\n");
    out
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_program(self))
    }
}
