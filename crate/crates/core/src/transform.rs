//! The pST transformation, which compiles plural pattern matching into
//! `match`/`proj` auxiliary functions so that plain rewriting simulates the
//! α plural semantics, and the C_AB class analyzer.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::program::{Diagnostics, Plurality, Program, Rule};
use crate::term::{apply_subst, Subst, Sym, Term, TT};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FreshKind {
    Match,
    Proj { arg: usize, var: Sym },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreshSymbol {
    pub name: Sym,
    /// Index of the source rule in the program's rule list.
    pub rule: usize,
    pub kind: FreshKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RuleCase {
    Untouched,
    Simple,
    /// Every argument was routed through `match`/`proj`.
    OptimizedFull,
    /// Some arguments kept their original pattern.
    OptimizedPartial,
}

#[derive(Clone, Debug)]
pub struct TransformReport {
    pub output: Program,
    pub fresh: Vec<FreshSymbol>,
    /// One entry per user rule of the source program.
    pub cases: Vec<RuleCase>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TransformError {
    ExtraVariables { rule: usize },
    Invalid(Diagnostics),
}

impl fmt::Display for TransformError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TransformError::ExtraVariables { rule } => write!(f, "rule {} has extra variables", rule),
            TransformError::Invalid(d) => write!(f, "transformed program is invalid: {}", d),
        }
    }
}

impl core::error::Error for TransformError {}

pub fn match_name(rule: usize) -> String {
    format!("match${}", rule)
}

pub fn proj_name(rule: usize, var: &str) -> String {
    format!("proj${}${}", rule, var)
}

/// Rewrites one rule, routing the arguments at `routed` through fresh
/// variables. Returns the new rules (transformed rule first) and the fresh
/// symbols introduced.
fn route(idx: usize, rule: &Rule, routed: &[usize]) -> (Vec<Rule>, Vec<FreshSymbol>) {
    let f = rule.function().clone();
    let pats = rule.patterns();
    let used = rule.rhs.var_set();
    let ys: BTreeMap<usize, Term> = routed.iter().map(|&i| (i, Term::var(&format!("Y${}", i + 1)))).collect();

    let lhs_args: Vec<Term> =
        pats.iter().enumerate().map(|(i, p)| ys.get(&i).cloned().unwrap_or_else(|| p.clone())).collect();
    let mut proj = Subst::new();
    let mut fresh = Vec::new();
    let mut aux = Vec::new();
    let mname = Sym::new(&match_name(idx));
    fresh.push(FreshSymbol { name: mname.clone(), rule: idx, kind: FreshKind::Match });
    aux.push(Rule::new(Term::Fun(mname.clone(), routed.iter().map(|&i| pats[i].clone()).collect()), Term::cst(TT)));
    for &i in routed {
        for x in pats[i].vars() {
            if !used.contains(&x) {
                continue;
            }
            let pname = Sym::new(&proj_name(idx, &x));
            proj.bind(x.clone(), Term::Fun(pname.clone(), alloc::vec![ys[&i].clone()]));
            aux.push(Rule::new(Term::Fun(pname.clone(), alloc::vec![pats[i].clone()]), Term::Var(x.clone())));
            fresh.push(FreshSymbol { name: pname, rule: idx, kind: FreshKind::Proj { arg: i, var: x } });
        }
    }
    let guard = Term::Fun(mname, routed.iter().map(|i| ys[i].clone()).collect());
    let mut rules = alloc::vec![Rule::new(Term::Fun(f, lhs_args), Term::if_then(guard, apply_subst(&rule.rhs, &proj)))];
    rules.extend(aux);
    (rules, fresh)
}

fn transform(p: &Program, optimized: bool) -> Result<TransformReport, TransformError> {
    if let Some(rule) = p.rules().iter().position(|r| !r.extra_vars().is_empty()) {
        return Err(TransformError::ExtraVariables { rule });
    }
    let offset = p.rules().len() - p.user_rules().len();
    let mut rules = Vec::new();
    let mut fresh = Vec::new();
    let mut cases = Vec::new();
    for (j, rule) in p.user_rules().iter().enumerate() {
        let idx = offset + j;
        let n = rule.patterns().len();
        let routed: Vec<usize> = if optimized {
            (0..n).filter(|&i| !rule.patterns()[i].is_var() && !rule.patterns()[i].vars().is_empty()).collect()
        } else {
            (0..n).collect()
        };
        if optimized && routed.is_empty() {
            rules.push(rule.clone());
            cases.push(RuleCase::Untouched);
            continue;
        }
        let (new, syms) = route(idx, rule, &routed);
        rules.extend(new);
        fresh.extend(syms);
        cases.push(match (optimized, routed.len() == n) {
            (false, _) => RuleCase::Simple,
            (true, true) => RuleCase::OptimizedFull,
            (true, false) => RuleCase::OptimizedPartial,
        });
    }
    let extra: Vec<(Sym, usize)> = p.signature().constructors.iter().map(|(c, &n)| (c.clone(), n)).collect();
    let output = Program::new(p.name(), rules, p.plurality().clone(), &extra).map_err(TransformError::Invalid)?;
    Ok(TransformReport { output, fresh, cases })
}

/// Every user rule `f(p1..pn) -> r` becomes
/// `f(Y1..Yn) -> if match(Y1..Yn) then r[X/proj_X(Yi)]` with
/// `match(p1..pn) -> tt` and `proj_X(pi) -> X` for each `X ∈ var(pi) ∩ var(r)`.
/// The rules of `?` and `if_then` are left alone.
pub fn pst_simple(p: &Program) -> Result<TransformReport, TransformError> {
    transform(p, false)
}

/// Like [`pst_simple`], but only arguments that are neither variables nor
/// ground are routed; rules with no such argument are kept as they are.
pub fn pst_optimized(p: &Program) -> Result<TransformReport, TransformError> {
    transform(p, true)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CabViolation {
    pub rule: usize,
    pub arg: usize,
    pub vars: Vec<Sym>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CabReport {
    pub in_class: bool,
    pub violations: Vec<CabViolation>,
}

/// Membership in C_AB: every left-hand side argument shares at most one
/// variable with the right-hand side.
pub fn is_class_cab(p: &Program) -> CabReport {
    cab_report(p, |_, _| true)
}

/// The same test restricted to the arguments the plurality map declares
/// plural. Singular arguments are passed alike by the two combined
/// semantics, so a program passing this test has equal `s-alpha` and
/// `s-beta` values.
pub fn is_class_cab_combined(p: &Program) -> CabReport {
    cab_report(p, |f, i| p.plurality().get(f, i) == Plurality::Plural)
}

fn cab_report(p: &Program, checked: impl Fn(&str, usize) -> bool) -> CabReport {
    let mut violations = Vec::new();
    for (idx, rule) in p.rules().iter().enumerate() {
        let used = rule.rhs.var_set();
        for (i, pat) in rule.patterns().iter().enumerate() {
            if !checked(rule.function().as_str(), i) {
                continue;
            }
            let shared: Vec<Sym> = pat.vars().into_iter().filter(|v| used.contains(v)).collect();
            if shared.len() > 1 {
                violations.push(CabViolation { rule: idx, arg: i, vars: shared });
            }
        }
    }
    CabReport { in_class: violations.is_empty(), violations }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_program;

    #[test]
    fn simple_p1() {
        let p = parse_program("plural P is f(c(X)) -> d(X, X) . endp").unwrap();
        let r = pst_simple(&p).unwrap();
        let shown: Vec<String> = r.output.user_rules().iter().map(|r| format!("{}", r)).collect();
        assert_eq!(
            shown,
            alloc::vec![
                "f(Y$1) -> if match$3(Y$1) then d(proj$3$X(Y$1),proj$3$X(Y$1)) .",
                "match$3(c(X)) -> tt .",
                "proj$3$X(c(X)) -> X .",
            ]
        );
        assert_eq!(r.cases, alloc::vec![RuleCase::Simple]);
    }

    #[test]
    fn optimized_leaves_variables_and_ground() {
        let p = parse_program("plural P is pair(X) -> d(X, X) . null(nil) -> tt . endp").unwrap();
        let r = pst_optimized(&p).unwrap();
        assert_eq!(r.cases, alloc::vec![RuleCase::Untouched, RuleCase::Untouched]);
        assert_eq!(r.output.user_rules(), p.user_rules());
    }

    #[test]
    fn cab_counts() {
        let p = parse_program("plural P is f(c(X)) -> d(X, X) . h(d(X, Y)) -> d(X, X) . endp").unwrap();
        assert!(is_class_cab(&p).in_class);
        let g = parse_program("plural G is g(d(X, Y)) -> l(X, X, Y, Y) . endp").unwrap();
        let rep = is_class_cab(&g);
        assert!(!rep.in_class);
        assert_eq!(
            rep.violations,
            alloc::vec![CabViolation { rule: 3, arg: 0, vars: alloc::vec![Sym::new("X"), Sym::new("Y")] }]
        );
        let s = parse_program("plural S is g is singular . g(d(X, Y)) -> l(X, X, Y, Y) . endp").unwrap();
        assert!(!is_class_cab(&s).in_class);
        assert!(is_class_cab_combined(&s).in_class);
        let q = parse_program("plural Q is g is plural . g(d(X, Y)) -> l(X, X, Y, Y) . endp").unwrap();
        assert!(!is_class_cab_combined(&q).in_class);
    }
}
