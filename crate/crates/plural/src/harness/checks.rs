//! Cross-semantics checks on one program and expression.

use std::collections::BTreeSet;
use std::fmt;

use plural_core::calculi::{total_values, Evaluator};
use plural_core::rewriting::{reaches, runtime_values, Reach};
use plural_core::transform::{pst_optimized, pst_simple, TransformError};
use plural_core::{
    is_class_cab, is_class_cab_combined, print_program, EnumConfig, Plurality, Program, SemanticsMode, Term,
};

/// States a single reachability question may visit.
pub const REACH_BUDGET: usize = 20_000;
/// Size cap for the intermediate sets of run-time value enumeration.
pub const VALUE_CAP: usize = 2_000;
/// Rule-application nesting allowed per original rule application when
/// rewriting a pST-transformed program: the rule itself, its `match` guard
/// and the guard's `if` step.
pub const PST_FUEL_FACTOR: u32 = 3;

/// A value found on the left side of an inclusion but not on the right.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub program: String,
    pub expr: Term,
    pub left: String,
    pub right: String,
    pub term: Term,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}\t{}\t{} <= {}\t{}", self.program, self.expr, self.left, self.right, self.term)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CheckReport {
    pub violations: Vec<Witness>,
    /// Least values separating semantics that the inclusion allows to
    /// differ.
    pub strict: Vec<Witness>,
    /// Questions abandoned because a search budget ran out.
    pub inconclusive: usize,
    /// The sets compared were whole denotations, not depth-bounded ones.
    pub exact: bool,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn merge(&mut self, other: CheckReport) {
        self.violations.extend(other.violations);
        self.strict.extend(other.strict);
        self.inconclusive += other.inconclusive;
        self.exact &= other.exact;
    }
}

pub fn one_line(p: &Program) -> String {
    print_program(p).split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Rewrite step bound matching calculus depth `depth`.
pub fn matched_bound(p: &Program, depth: u32) -> usize {
    (1usize << depth.min(20)) * p.size().max(1)
}

/// Depth up to which a missing value is searched for again.
pub fn ceiling(depth: u32) -> u32 {
    (2 * depth).max(depth + 2)
}

struct Ctx<'a> {
    program: &'a Program,
    expr: &'a Term,
    report: CheckReport,
}

impl Ctx<'_> {
    fn witness(&self, left: &str, right: &str, term: &Term) -> Witness {
        Witness {
            program: one_line(self.program),
            expr: self.expr.clone(),
            left: left.into(),
            right: right.into(),
            term: term.clone(),
        }
    }

    /// `left ⊆ right(K)` for some `K` from `depth` up to `retry`. Deepening
    /// stops early once the right side is a whole denotation.
    fn calculus_includes(
        &mut self,
        left_name: &str,
        left: &BTreeSet<Term>,
        mode: SemanticsMode,
        depth: u32,
        retry: u32,
    ) {
        let mut ev = Evaluator::new(self.program, mode, &EnumConfig::with_depth(retry.max(depth)));
        let mut missing: Vec<&Term> = left.iter().collect();
        let mut k = depth;
        loop {
            let right = ev.values(self.expr, k);
            missing.retain(|t| !right.contains(t));
            if missing.is_empty() {
                return;
            }
            if !right.truncated || k >= retry {
                break;
            }
            k += 1;
        }
        let w = self.witness(left_name, mode.name(), missing[0]);
        self.report.violations.push(w);
    }

    /// Every term of `left` is in `known` or reachable from the expression
    /// in `target`.
    fn reachable_includes(
        &mut self,
        left_name: &str,
        left: &BTreeSet<Term>,
        known: &BTreeSet<Term>,
        target: &Program,
        right: &str,
        bound: usize,
    ) {
        for t in left.difference(known) {
            let r = match reaches(target, self.expr, t, bound, REACH_BUDGET) {
                Reach::NotFound => reaches(target, self.expr, t, 2 * bound, REACH_BUDGET),
                r => r,
            };
            match r {
                Reach::Found(_) => {}
                Reach::OutOfBudget => self.report.inconclusive += 1,
                Reach::NotFound => {
                    let w = self.witness(left_name, right, t);
                    self.report.violations.push(w);
                    return;
                }
            }
        }
    }

    fn note_strict(&mut self, small: &BTreeSet<Term>, big: &BTreeSet<Term>, left: &str, right: &str) {
        if let Some(t) = big.difference(small).next() {
            let w = self.witness(right, left, t);
            self.report.strict.push(w);
        }
    }
}

/// The least depth up to `max` at which the value set of `e` is a whole
/// denotation.
fn exact_by(p: &Program, mode: SemanticsMode, e: &Term, from: u32, max: u32) -> Option<BTreeSet<Term>> {
    let mut ev = Evaluator::new(p, mode, &EnumConfig::with_depth(max));
    (from..=max).map(|d| ev.values(e, d)).find(|v| !v.truncated).map(|v| v.totals().cloned().collect())
}

fn exact_at(p: &Program, mode: SemanticsMode, e: &Term, depth: u32) -> bool {
    exact_by(p, mode, e, depth, depth).is_some()
}

/// `CallTime ⊆ RunTime ⊆ BetaPlural ⊆ AlphaPlural` on total values. The
/// run-time side explores rewriting with `depth` nesting, and a call-time
/// value it misses is searched for by plain reachability within
/// [`matched_bound`] steps.
pub fn check_hierarchy(p: &Program, e: &Term, depth: u32) -> CheckReport {
    let cfg = EnumConfig::with_depth(depth);
    let ct = total_values(p, SemanticsMode::CallTime, e, &cfg);
    let bt = total_values(p, SemanticsMode::BetaPlural, e, &cfg);
    let at = total_values(p, SemanticsMode::AlphaPlural, e, &cfg);
    let rt = runtime_values(p, e, depth, VALUE_CAP);
    let mut cx = Ctx { program: p, expr: e, report: CheckReport::default() };
    cx.reachable_includes("call-time", &ct, &rt.values, p, "run-time", matched_bound(p, depth));
    cx.calculus_includes("run-time", &rt.values, SemanticsMode::BetaPlural, depth, ceiling(depth));
    cx.calculus_includes("beta", &bt, SemanticsMode::AlphaPlural, depth, ceiling(depth));
    cx.note_strict(&ct, &rt.values, "call-time", "run-time");
    cx.note_strict(&rt.values, &bt, "run-time", "beta");
    cx.note_strict(&bt, &at, "beta", "alpha");
    cx.report.inconclusive += usize::from(rt.overflow);
    cx.report.exact = !rt.truncated && exact_at(p, SemanticsMode::AlphaPlural, e, depth);
    cx.report
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NotInClass;

impl fmt::Display for NotInClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("program is not in C_AB")
    }
}

impl std::error::Error for NotInClass {}

/// On C_AB programs the α and β plural value sets coincide at every depth,
/// and so do the two combined semantics. When only the plural arguments
/// pass the test just the combined pair is compared.
pub fn check_cab_equivalence(p: &Program, e: &Term, depth: u32) -> Result<CheckReport, NotInClass> {
    use SemanticsMode::*;
    let pairs: &[(SemanticsMode, SemanticsMode)] = if is_class_cab(p).in_class {
        &[(AlphaPlural, BetaPlural), (CombinedAlpha, CombinedBeta)]
    } else if is_class_cab_combined(p).in_class {
        &[(CombinedAlpha, CombinedBeta)]
    } else {
        return Err(NotInClass);
    };
    let cfg = EnumConfig::with_depth(depth);
    let mut cx = Ctx { program: p, expr: e, report: CheckReport::default() };
    for &(a, b) in pairs {
        let at = total_values(p, a, e, &cfg);
        let bt = total_values(p, b, e, &cfg);
        if let Some(t) = at.difference(&bt).next() {
            let w = cx.witness(a.name(), b.name(), t);
            cx.report.violations.push(w);
        }
        if let Some(t) = bt.difference(&at).next() {
            let w = cx.witness(b.name(), a.name(), t);
            cx.report.violations.push(w);
        }
    }
    cx.report.exact = pairs.iter().all(|&(a, _)| exact_at(p, a, e, depth));
    Ok(cx.report)
}

/// Depth by which the α denotation must be finite for adequacy to be
/// checked as an equality.
pub const SATURATION_DEPTH: u32 = 6;
/// Largest rewriting nesting tried when matching a finite α denotation.
pub const MAX_PST_FUEL: u32 = 96;

/// Plain rewriting of pST(P) computes the α plural values of P. Soundness
/// (rewriting ⊆ α) is always checked; the converse only when the α
/// denotation is finite by [`SATURATION_DEPTH`].
pub fn check_pst_adequacy(p: &Program, e: &Term, depth: u32, optimized: bool) -> Result<CheckReport, TransformError> {
    let q = if optimized { pst_optimized(p)? } else { pst_simple(p)? }.output;
    let name = if optimized { "pst-optimized" } else { "pst-simple" };
    let mut cx = Ctx { program: p, expr: e, report: CheckReport::default() };
    let fuel = PST_FUEL_FACTOR * depth;
    let rt = runtime_values(&q, e, fuel, VALUE_CAP);
    cx.report.inconclusive += usize::from(rt.overflow);
    cx.calculus_includes(name, &rt.values, SemanticsMode::AlphaPlural, depth, fuel);
    if let Some(at) = exact_by(p, SemanticsMode::AlphaPlural, e, depth, SATURATION_DEPTH) {
        let mut fuel = PST_FUEL_FACTOR * SATURATION_DEPTH;
        let full = loop {
            let r = runtime_values(&q, e, fuel, VALUE_CAP);
            if !r.truncated || at.is_subset(&r.values) || fuel >= MAX_PST_FUEL {
                break r;
            }
            fuel = (2 * fuel).min(MAX_PST_FUEL);
        };
        cx.report.inconclusive += usize::from(full.overflow);
        if let Some(t) = full.values.difference(&at).next() {
            let w = cx.witness(name, "alpha", t);
            cx.report.violations.push(w);
        }
        cx.reachable_includes("alpha", &at, &full.values, &q, name, matched_bound(&q, SATURATION_DEPTH));
        cx.report.exact = !full.truncated;
    }
    Ok(cx.report)
}

/// Name of the hole variable in contexts.
pub const HOLE: &str = "[]";

pub fn plug(ctx: &Term, e: &Term) -> Term {
    match ctx {
        Term::Var(x) if x.as_str() == HOLE => e.clone(),
        Term::Con(c, args) => Term::Con(c.clone(), args.iter().map(|a| plug(a, e)).collect()),
        Term::Fun(f, args) => Term::Fun(f.clone(), args.iter().map(|a| plug(a, e)).collect()),
        t => t.clone(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BubblingError {
    /// The context must have exactly one hole and otherwise be ground.
    Malformed,
    /// The hole sits under a symbol the law does not cover for this mode.
    NotConstructorContext,
}

impl fmt::Display for BubblingError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BubblingError::Malformed => f.write_str("context needs exactly one hole and no other variables"),
            BubblingError::NotConstructorContext => {
                f.write_str("the hole is not in a constructor (or singular) context")
            }
        }
    }
}

impl std::error::Error for BubblingError {}

fn hole_count(t: &Term) -> Option<usize> {
    match t {
        Term::Var(x) if x.as_str() == HOLE => Some(1),
        Term::Var(_) => None,
        Term::Bottom => Some(0),
        Term::Con(_, args) | Term::Fun(_, args) => args.iter().map(hole_count).sum(),
    }
}

/// The hole lies below constructors only, or in call-time style modes also
/// below singular function arguments.
fn covered(p: &Program, mode: SemanticsMode, t: &Term) -> bool {
    match t {
        Term::Var(_) => true,
        Term::Bottom => true,
        Term::Con(_, args) => args.iter().all(|a| hole_count(a) == Some(0) || covered(p, mode, a)),
        Term::Fun(f, args) => args.iter().enumerate().all(|(i, a)| {
            hole_count(a) == Some(0)
                || (f.as_str() != plural_core::term::CHOICE
                    && mode.plurality(p, f, i) == Plurality::Singular
                    && covered(p, mode, a))
        }),
    }
}

/// `values(C[e1 ? e2]) = values(C[e1] ? C[e2])` for a context `C` given as
/// a term containing the variable [`HOLE`] once.
pub fn check_bubbling(
    p: &Program,
    ctx: &Term,
    e1: &Term,
    e2: &Term,
    depth: u32,
    mode: SemanticsMode,
) -> Result<CheckReport, BubblingError> {
    if hole_count(ctx) != Some(1) {
        return Err(BubblingError::Malformed);
    }
    if !covered(p, mode, ctx) {
        return Err(BubblingError::NotConstructorContext);
    }
    let inner = plug(ctx, &Term::choice(e1.clone(), e2.clone()));
    let outer = Term::choice(plug(ctx, e1), plug(ctx, e2));
    let cfg = EnumConfig::with_depth(depth);
    let l = total_values(p, mode, &inner, &cfg);
    let r = total_values(p, mode, &outer, &cfg);
    let mut cx = Ctx { program: p, expr: &inner, report: CheckReport::default() };
    let name = format!("{} C[e1?e2]", mode.name());
    let mut ev = Evaluator::new(p, mode, &EnumConfig::with_depth(ceiling(depth)));
    let r_hi = ev.values(&outer, ceiling(depth));
    if let Some(t) = l.difference(&r).find(|t| !r_hi.contains(t)) {
        let w = cx.witness(&name, "C[e1]?C[e2]", t);
        cx.report.violations.push(w);
    }
    let l_hi = ev.values(&inner, ceiling(depth));
    if let Some(t) = r.difference(&l).find(|t| !l_hi.contains(t)) {
        let w = cx.witness("C[e1]?C[e2]", &name, t);
        cx.report.violations.push(w);
    }
    cx.report.exact = !l_hi.truncated && !r_hi.truncated;
    Ok(cx.report)
}
