//! Programs: signatures, rules, plurality maps and load-time validation.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::term::{Sym, Term, CHOICE, FF, IF_THEN, TT};

/// Number of built-in rules at the front of every program's rule list.
pub const BUILTIN_RULES: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Signature {
    pub constructors: BTreeMap<Sym, usize>,
    pub functions: BTreeMap<Sym, usize>,
}

impl Signature {
    /// The signature every program starts from: `?`, `if_then`, `tt`, `ff`.
    pub fn builtin() -> Self {
        let mut s = Signature::default();
        s.functions.insert(Sym::new(CHOICE), 2);
        s.functions.insert(Sym::new(IF_THEN), 2);
        s.constructors.insert(Sym::new(TT), 0);
        s.constructors.insert(Sym::new(FF), 0);
        s
    }

    pub fn constructor_arity(&self, name: &str) -> Option<usize> {
        self.constructors.get(name).copied()
    }

    pub fn function_arity(&self, name: &str) -> Option<usize> {
        self.functions.get(name).copied()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.constructors.contains_key(name) || self.functions.contains_key(name)
    }

    /// Checks that every application in `e` uses a known symbol of the right
    /// class and arity.
    pub fn check_term(&self, e: &Term) -> Result<(), Diagnostic> {
        let (table, name, args, class) = match e {
            Term::Var(_) | Term::Bottom => return Ok(()),
            Term::Con(c, a) => (&self.constructors, c, a, "constructor"),
            Term::Fun(f, a) => (&self.functions, f, a, "function"),
        };
        match table.get(name) {
            None => Err(Diagnostic::new(DiagnosticKind::UnknownSymbol, format!("unknown {} `{}`", class, name))),
            Some(&n) if n != args.len() => Err(Diagnostic::new(
                DiagnosticKind::ArityMismatch,
                format!("`{}` expects {} argument(s), found {}", name, n, args.len()),
            )),
            Some(_) => args.iter().try_for_each(|a| self.check_term(a)),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Plurality {
    Singular,
    Plural,
}

/// Per-function argument plurality. Missing entries are singular.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PluralityMap(BTreeMap<Sym, Vec<Plurality>>);

impl PluralityMap {
    pub fn new() -> Self {
        PluralityMap(BTreeMap::new())
    }

    pub fn set(&mut self, f: Sym, tags: Vec<Plurality>) {
        self.0.insert(f, tags);
    }

    pub fn get(&self, f: &str, arg: usize) -> Plurality {
        self.0.get(f).and_then(|v| v.get(arg)).copied().unwrap_or(Plurality::Singular)
    }

    pub fn tags(&self, f: &str) -> Option<&[Plurality]> {
        self.0.get(f).map(Vec::as_slice)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Sym, &Vec<Plurality>)> {
        self.0.iter()
    }

    /// Parses `plural`, `singular` or an `s`/`p` string for a function of
    /// the given arity.
    pub fn parse_annotation(text: &str, arity: usize) -> Option<Vec<Plurality>> {
        match text {
            "plural" => Some(vec![Plurality::Plural; arity]),
            "singular" => Some(vec![Plurality::Singular; arity]),
            s if s.len() == arity && s.chars().all(|c| c == 's' || c == 'p') => {
                Some(s.chars().map(|c| if c == 's' { Plurality::Singular } else { Plurality::Plural }).collect())
            }
            _ => None,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Rule {
    pub lhs: Term,
    pub rhs: Term,
}

impl Rule {
    pub fn new(lhs: Term, rhs: Term) -> Self {
        Rule { lhs, rhs }
    }

    pub fn function(&self) -> &Sym {
        self.lhs.root().expect("rule lhs is an application")
    }

    pub fn patterns(&self) -> &[Term] {
        self.lhs.args()
    }

    /// Variables of `rhs` missing from `lhs`.
    pub fn extra_vars(&self) -> Vec<Sym> {
        let lhs = self.lhs.var_set();
        self.rhs.vars().into_iter().filter(|v| !lhs.contains(v)).collect()
    }
}

impl fmt::Debug for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {} .", self.lhs, self.rhs)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiagnosticKind {
    Syntax,
    NonLinearLhs,
    NonCTermLhsArg,
    ExtraVariable,
    BottomInRule,
    LhsNotFunction,
    BuiltinRedefined,
    AnnotationArity,
    UnknownAnnotation,
    ArityClash,
    UnknownSymbol,
    ArityMismatch,
}

/// 1-based line and column.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Location {
    pub line: usize,
    pub col: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub kind: DiagnosticKind,
    pub message: String,
    pub location: Option<Location>,
}

impl Diagnostic {
    pub fn new(kind: DiagnosticKind, message: String) -> Self {
        Diagnostic { kind, message, location: None }
    }

    pub fn at(mut self, loc: Location) -> Self {
        self.location = Some(loc);
        self
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.location {
            Some(l) => write!(f, "{}:{}: {}", l.line, l.col, self.message),
            None => f.write_str(&self.message),
        }
    }
}

impl core::error::Error for Diagnostic {}

/// Load failure: one or more diagnostics.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostics(pub Vec<Diagnostic>);

impl Diagnostics {
    pub fn has(&self, kind: DiagnosticKind) -> bool {
        self.0.iter().any(|d| d.kind == kind)
    }
}

impl fmt::Display for Diagnostics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, d) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("\n")?;
            }
            write!(f, "{}", d)?;
        }
        Ok(())
    }
}

impl core::error::Error for Diagnostics {}

impl From<Diagnostic> for Diagnostics {
    fn from(d: Diagnostic) -> Self {
        Diagnostics(vec![d])
    }
}

#[derive(Debug)]
struct ProgramData {
    name: String,
    signature: Signature,
    rules: Vec<Rule>,
    plurality: PluralityMap,
    by_function: BTreeMap<Sym, Vec<usize>>,
}

/// A validated left-linear constructor system without extra variables.
/// Cloning is cheap.
#[derive(Clone, Debug)]
pub struct Program(Arc<ProgramData>);

impl Program {
    /// The built-in rules `X ? Y -> X`, `X ? Y -> Y`, `if tt then E -> E`.
    pub fn builtin_rules() -> Vec<Rule> {
        let (x, y, e) = (Term::var("X"), Term::var("Y"), Term::var("E"));
        vec![
            Rule::new(Term::choice(x.clone(), y.clone()), x.clone()),
            Rule::new(Term::choice(x, y.clone()), y),
            Rule::new(Term::if_then(Term::cst(TT), e.clone()), e),
        ]
    }

    /// Validates `rules` (user rules only; the built-ins are injected) and
    /// infers the signature from the symbol classes used in the terms.
    /// `extra_constructors` adds constructors that no rule mentions.
    pub fn new(
        name: &str,
        rules: Vec<Rule>,
        plurality: PluralityMap,
        extra_constructors: &[(Sym, usize)],
    ) -> Result<Program, Diagnostics> {
        let mut diags = Vec::new();
        let mut signature = Signature::builtin();
        for (c, n) in extra_constructors {
            record(&mut signature, c, *n, true, &mut diags);
        }
        for rule in &rules {
            collect_symbols(&rule.lhs, &mut signature, &mut diags);
            collect_symbols(&rule.rhs, &mut signature, &mut diags);
        }
        for (i, rule) in rules.iter().enumerate() {
            validate_rule(i, rule, &mut diags);
        }
        for (f, tags) in plurality.iter() {
            match signature.function_arity(f) {
                None => diags.push(Diagnostic::new(
                    DiagnosticKind::UnknownAnnotation,
                    format!("plurality annotation for unknown function `{}`", f),
                )),
                Some(n) if n != tags.len() => diags.push(Diagnostic::new(
                    DiagnosticKind::AnnotationArity,
                    format!("annotation for `{}` has {} tag(s) but its arity is {}", f, tags.len(), n),
                )),
                _ => {}
            }
        }
        if !diags.is_empty() {
            return Err(Diagnostics(diags));
        }
        let mut all = Program::builtin_rules();
        all.extend(rules);
        let mut by_function: BTreeMap<Sym, Vec<usize>> = BTreeMap::new();
        for (i, r) in all.iter().enumerate() {
            by_function.entry(r.function().clone()).or_default().push(i);
        }
        Ok(Program(Arc::new(ProgramData { name: name.to_string(), signature, rules: all, plurality, by_function })))
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    pub fn signature(&self) -> &Signature {
        &self.0.signature
    }

    /// All rules, built-ins first.
    pub fn rules(&self) -> &[Rule] {
        &self.0.rules
    }

    pub fn user_rules(&self) -> &[Rule] {
        &self.0.rules[BUILTIN_RULES..]
    }

    pub fn rule(&self, index: usize) -> &Rule {
        &self.0.rules[index]
    }

    /// Indices of the rules defining `f`, in program order.
    pub fn rules_for(&self, f: &str) -> &[usize] {
        self.0.by_function.get(f).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn plurality(&self) -> &PluralityMap {
        &self.0.plurality
    }

    /// Total number of symbols in user rules.
    pub fn size(&self) -> usize {
        self.user_rules().iter().map(|r| r.lhs.size() + r.rhs.size()).sum()
    }

    /// True when every function argument is tagged plural.
    pub fn all_plural(&self) -> bool {
        self.0
            .signature
            .functions
            .iter()
            .filter(|(f, _)| f.as_str() != CHOICE && f.as_str() != IF_THEN)
            .all(|(f, &n)| (0..n).all(|i| self.0.plurality.get(f, i) == Plurality::Plural))
    }

    /// Copy of this program with a different plurality map.
    pub fn with_plurality(&self, plurality: PluralityMap) -> Result<Program, Diagnostics> {
        let extra: Vec<(Sym, usize)> = self.0.signature.constructors.iter().map(|(c, &n)| (c.clone(), n)).collect();
        Program::new(&self.0.name, self.user_rules().to_vec(), plurality, &extra)
    }
}

fn record(sig: &mut Signature, name: &Sym, arity: usize, is_con: bool, diags: &mut Vec<Diagnostic>) {
    let (mine, other) =
        if is_con { (&mut sig.constructors, &sig.functions) } else { (&mut sig.functions, &sig.constructors) };
    if other.contains_key(name) {
        diags.push(Diagnostic::new(
            DiagnosticKind::ArityClash,
            format!("`{}` is used both as a constructor and as a function", name),
        ));
        return;
    }
    match mine.get(name) {
        Some(&n) if n != arity => diags.push(Diagnostic::new(
            DiagnosticKind::ArityClash,
            format!("`{}` is used with arities {} and {}", name, n, arity),
        )),
        Some(_) => {}
        None => {
            mine.insert(name.clone(), arity);
        }
    }
}

fn collect_symbols(e: &Term, sig: &mut Signature, diags: &mut Vec<Diagnostic>) {
    match e {
        Term::Con(c, args) => {
            record(sig, c, args.len(), true, diags);
            args.iter().for_each(|a| collect_symbols(a, sig, diags));
        }
        Term::Fun(f, args) => {
            record(sig, f, args.len(), false, diags);
            args.iter().for_each(|a| collect_symbols(a, sig, diags));
        }
        _ => {}
    }
}

fn validate_rule(index: usize, rule: &Rule, diags: &mut Vec<Diagnostic>) {
    let what = || format!("rule {} `{}`", index + 1, rule);
    match &rule.lhs {
        Term::Fun(f, _) if f.as_str() == CHOICE || f.as_str() == IF_THEN => {
            diags.push(Diagnostic::new(
                DiagnosticKind::BuiltinRedefined,
                format!("{}: rules for the built-in `{}` cannot be redefined", what(), f),
            ));
            return;
        }
        Term::Fun(..) => {}
        _ => {
            diags.push(Diagnostic::new(
                DiagnosticKind::LhsNotFunction,
                format!("{}: left-hand side must be a function application", what()),
            ));
            return;
        }
    }
    for p in rule.patterns() {
        if !p.is_cterm() {
            diags.push(Diagnostic::new(
                DiagnosticKind::NonCTermLhsArg,
                format!("{}: argument `{}` is not a constructor term", what(), p),
            ));
        }
    }
    if !rule.lhs.is_total() || !rule.rhs.is_total() {
        diags.push(Diagnostic::new(
            DiagnosticKind::BottomInRule,
            format!("{}: program rules cannot mention bot", what()),
        ));
    }
    if !rule.lhs.is_linear() {
        diags.push(Diagnostic::new(DiagnosticKind::NonLinearLhs, format!("{}: left-hand side is not linear", what())));
    }
    let extra = rule.extra_vars();
    if !extra.is_empty() {
        let names: Vec<&str> = extra.iter().map(Sym::as_str).collect();
        diags.push(Diagnostic::new(
            DiagnosticKind::ExtraVariable,
            format!("{}: extra variable(s) {} in right-hand side", what(), names.join(", ")),
        ));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_are_injected() {
        let p = Program::new("M", vec![], PluralityMap::new(), &[]).unwrap();
        assert_eq!(p.rules().len(), BUILTIN_RULES);
        assert_eq!(p.rules_for(CHOICE), &[0, 1]);
        assert_eq!(p.rules_for(IF_THEN), &[2]);
        assert_eq!(p.signature().function_arity(CHOICE), Some(2));
        assert_eq!(p.signature().constructor_arity(TT), Some(0));
    }

    #[test]
    fn rejects_kind_clash() {
        let r = Rule::new(Term::fun("f", vec![Term::var("X")]), Term::con("f", vec![Term::var("X")]));
        let err = Program::new("M", vec![r], PluralityMap::new(), &[]).unwrap_err();
        assert!(err.has(DiagnosticKind::ArityClash));
    }

    #[test]
    fn annotation_parsing() {
        assert_eq!(PluralityMap::parse_annotation("sp", 2), Some(vec![Plurality::Singular, Plurality::Plural]));
        assert_eq!(PluralityMap::parse_annotation("plural", 1), Some(vec![Plurality::Plural]));
        assert_eq!(PluralityMap::parse_annotation("spp", 2), None);
    }
}
