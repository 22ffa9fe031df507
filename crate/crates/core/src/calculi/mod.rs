//! Depth-bounded enumeration of denotations under call-time choice, the
//! α and β plural calculi and their combinations with a plurality map.
//!
//! Value sets are kept as antichains of maximal partial c-terms: every
//! calculus here is closed downwards (a value may always be lowered
//! towards ⊥), so the maximal elements determine the whole set.
//!
//! The depth of a proof counts nested applications of the outer-reduction
//! rule of a program rule. Choices `a ? b` are resolved directly as the
//! union of both operands and cost no depth.

mod trace;

pub use trace::{verify_trace, DerivationTrace, RuleTag, TraceError};

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::rc::Rc;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use hashbrown::{HashMap, HashSet};

use crate::program::{Plurality, Program};
use crate::subst::{question_combine, DisjSubst};
use crate::term::{
    apply_subst, approx_leq, cartesian, down_closure, match_value, maximal_of, meet, Subst, Sym, Term, CHOICE,
};

/// Depth value standing for "no bound".
pub const UNBOUNDED: u32 = u32::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SemanticsMode {
    CallTime,
    AlphaPlural,
    BetaPlural,
    CombinedAlpha,
    CombinedBeta,
}

impl SemanticsMode {
    pub const ALL: [SemanticsMode; 5] = [
        SemanticsMode::CallTime,
        SemanticsMode::AlphaPlural,
        SemanticsMode::BetaPlural,
        SemanticsMode::CombinedAlpha,
        SemanticsMode::CombinedBeta,
    ];

    /// The outer-reduction rule used by this calculus.
    pub fn or_tag(self) -> RuleTag {
        match self {
            SemanticsMode::CallTime => RuleTag::OR,
            SemanticsMode::AlphaPlural => RuleTag::APOR,
            SemanticsMode::BetaPlural => RuleTag::BPOR,
            SemanticsMode::CombinedAlpha => RuleTag::SAPOR,
            SemanticsMode::CombinedBeta => RuleTag::SBPOR,
        }
    }

    /// Whether plural parameter sets must be compressible.
    pub fn is_beta(self) -> bool {
        matches!(self, SemanticsMode::BetaPlural | SemanticsMode::CombinedBeta)
    }

    /// Parameter passing for argument `i` of `f` under this mode.
    pub fn plurality(self, program: &Program, f: &str, i: usize) -> Plurality {
        match self {
            SemanticsMode::CallTime => Plurality::Singular,
            SemanticsMode::AlphaPlural | SemanticsMode::BetaPlural => Plurality::Plural,
            SemanticsMode::CombinedAlpha | SemanticsMode::CombinedBeta => program.plurality().get(f, i),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SemanticsMode::CallTime => "call-time",
            SemanticsMode::AlphaPlural => "alpha",
            SemanticsMode::BetaPlural => "beta",
            SemanticsMode::CombinedAlpha => "s-alpha",
            SemanticsMode::CombinedBeta => "s-beta",
        }
    }

    pub fn from_name(s: &str) -> Option<SemanticsMode> {
        SemanticsMode::ALL.into_iter().find(|m| m.name() == s)
    }
}

impl fmt::Display for SemanticsMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumConfig {
    /// Maximum nesting of outer-reduction steps; [`UNBOUNDED`] for none.
    pub depth: u32,
    /// Maximum size of a compressible parameter set built from two or more
    /// relevant variables (β modes only). `None` is unbounded.
    pub plural_width: Option<usize>,
    pub totals_only: bool,
    /// Lower matched variables that the rule body never uses to ⊥ before
    /// combining. Does not change any value set.
    pub restrict_relevant: bool,
}

impl Default for EnumConfig {
    fn default() -> Self {
        EnumConfig { depth: 12, plural_width: Some(4), totals_only: true, restrict_relevant: true }
    }
}

impl EnumConfig {
    pub fn with_depth(depth: u32) -> Self {
        EnumConfig { depth, ..EnumConfig::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CalculiError {
    ExtraVariables { rule: usize },
}

impl fmt::Display for CalculiError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CalculiError::ExtraVariables { rule } => write!(f, "rule {} has extra variables", rule),
        }
    }
}

impl core::error::Error for CalculiError {}

fn check_program(p: &Program) -> Result<(), CalculiError> {
    match p.rules().iter().position(|r| !r.extra_vars().is_empty()) {
        Some(rule) => Err(CalculiError::ExtraVariables { rule }),
        None => Ok(()),
    }
}

/// Maximal values of an expression at one depth.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Values {
    /// Antichain of maximal partial c-terms, in discovery order. Never empty.
    pub maximal: Vec<Term>,
    /// Some function application was cut off by the depth bound. When false
    /// the set is the full, unbounded denotation.
    pub truncated: bool,
}

impl Values {
    fn bottom(truncated: bool) -> Self {
        Values { maximal: alloc::vec![Term::Bottom], truncated }
    }

    /// `t` belongs to the (downward closed) value set.
    pub fn contains(&self, t: &Term) -> bool {
        self.maximal.iter().any(|m| approx_leq(t, m))
    }

    pub fn totals(&self) -> impl Iterator<Item = &Term> {
        self.maximal.iter().filter(|t| t.is_total())
    }

    pub fn same_set(&self, other: &Values) -> bool {
        let a: BTreeSet<&Term> = self.maximal.iter().collect();
        let b: BTreeSet<&Term> = other.maximal.iter().collect();
        a == b
    }
}

/// One way of passing parameters to a rule: per-argument parameter sets
/// restricted to the relevant variables, and their combination.
#[derive(Clone, Debug)]
struct Passing {
    sets: Vec<Vec<Subst>>,
    theta: DisjSubst,
}

/// The alternatives of a nest of `?`, left to right.
fn choice_leaves<'a>(e: &'a Term, out: &mut Vec<&'a Term>) {
    match e {
        Term::Fun(f, args) if f.as_str() == CHOICE && args.len() == 2 => {
            choice_leaves(&args[0], out);
            choice_leaves(&args[1], out);
        }
        _ => out.push(e),
    }
}

/// Memoizing evaluator for one program and mode.
pub struct Evaluator {
    program: Program,
    mode: SemanticsMode,
    width: Option<usize>,
    restrict: bool,
    memo: HashMap<Term, BTreeMap<u32, Rc<Values>>>,
}

impl Evaluator {
    pub fn new(program: &Program, mode: SemanticsMode, cfg: &EnumConfig) -> Self {
        Evaluator {
            program: program.clone(),
            mode,
            width: cfg.plural_width,
            restrict: cfg.restrict_relevant,
            memo: HashMap::new(),
        }
    }

    pub fn program(&self) -> &Program {
        &self.program
    }

    pub fn mode(&self) -> SemanticsMode {
        self.mode
    }

    /// Values of `e` with proofs of depth at most `k`.
    pub fn values(&mut self, e: &Term, k: u32) -> Rc<Values> {
        match e {
            Term::Bottom => Rc::new(Values::bottom(false)),
            Term::Var(_) => Rc::new(Values { maximal: alloc::vec![e.clone()], truncated: false }),
            _ if e.is_cterm() => Rc::new(Values { maximal: alloc::vec![e.clone()], truncated: false }),
            _ => {
                if let Some(m) = self.memo.get(e) {
                    if let Some(v) = m.get(&k) {
                        return v.clone();
                    }
                    // a complete set at a smaller depth is the set at every depth
                    if let Some((_, v)) = m.range(..k).find(|(_, v)| !v.truncated) {
                        return v.clone();
                    }
                }
                let v = Rc::new(self.compute(e, k));
                self.memo.entry(e.clone()).or_default().insert(k, v.clone());
                v
            }
        }
    }

    fn compute(&mut self, e: &Term, k: u32) -> Values {
        match e {
            Term::Con(c, args) => {
                let mut truncated = false;
                let mut parts = Vec::with_capacity(args.len());
                for a in args {
                    let v = self.values(a, k);
                    truncated |= v.truncated;
                    parts.push(v.maximal.clone());
                }
                let maximal = cartesian(&parts).into_iter().map(|ts| Term::Con(c.clone(), ts)).collect();
                Values { maximal, truncated }
            }
            Term::Fun(f, args) if f.as_str() == CHOICE && args.len() == 2 => {
                let mut alternatives = Vec::new();
                choice_leaves(e, &mut alternatives);
                let mut truncated = false;
                let mut out = Vec::new();
                for a in alternatives {
                    let v = self.values(a, k);
                    truncated |= v.truncated;
                    out.extend(v.maximal.iter().cloned());
                }
                Values { maximal: maximal_of(out), truncated }
            }
            Term::Fun(f, args) => {
                if k == 0 {
                    return Values::bottom(true);
                }
                let mut out = alloc::vec![Term::Bottom];
                let mut truncated = false;
                for idx in self.program.rules_for(f).to_vec() {
                    let (passings, trunc) = self.passings(idx, args, k);
                    truncated |= trunc;
                    let rhs = self.program.rule(idx).rhs.clone();
                    for p in passings {
                        let body = p.theta.apply(&rhs);
                        let v = self.values(&body, k - 1);
                        truncated |= v.truncated;
                        out.extend(v.maximal.iter().cloned());
                    }
                }
                Values { maximal: maximal_of(out), truncated }
            }
            _ => unreachable!("c-terms are handled by values()"),
        }
    }

    fn relevant_vars(&self, idx: usize, arg: usize) -> Vec<Sym> {
        let rule = self.program.rule(idx);
        let vars = rule.patterns()[arg].vars();
        if self.restrict {
            let used = rule.rhs.var_set();
            vars.into_iter().filter(|v| used.contains(v)).collect()
        } else {
            vars
        }
    }

    /// Maximal matching substitutions of pattern `arg` of rule `idx`
    /// against the values of `e` at depth `k`, restricted to the relevant
    /// variables.
    fn matches(&mut self, idx: usize, arg: usize, e: &Term, k: u32) -> (Vec<Subst>, Vec<Sym>, bool) {
        let pattern = self.program.rule(idx).patterns()[arg].clone();
        let vars = self.relevant_vars(idx, arg);
        let v = self.values(e, k);
        let mut seen = HashSet::new();
        let mut all: Vec<Subst> = Vec::new();
        for t in &v.maximal {
            if let Some(th) = match_value(&pattern, t) {
                let th = th.restrict(&vars);
                if seen.insert(th.clone()) {
                    all.push(th);
                }
            }
        }
        let total = |s: &Subst| s.iter().all(|(_, t)| t.is_total());
        let keep: Vec<bool> =
            all.iter().map(|th| total(th) || !all.iter().any(|s| s != th && th.approx_leq(s))).collect();
        let out = all.into_iter().zip(keep).filter_map(|(th, k)| k.then_some(th)).collect();
        (out, vars, v.truncated)
    }

    /// Every parameter passing allowed by the mode for rule `idx` applied to
    /// `args`, whose arguments are evaluated at depth `k - 1`.
    fn passings(&mut self, idx: usize, args: &[Term], k: u32) -> (Vec<Passing>, bool) {
        let f = self.program.rule(idx).function().clone();
        let mut truncated = false;
        let mut options: Vec<Vec<Vec<Subst>>> = Vec::with_capacity(args.len());
        for (i, a) in args.iter().enumerate() {
            let (m, vars, trunc) = self.matches(idx, i, a, k - 1);
            truncated |= trunc;
            if m.is_empty() {
                return (Vec::new(), truncated);
            }
            let opts = match self.mode.plurality(&self.program, &f, i) {
                Plurality::Singular => m.into_iter().map(|s| alloc::vec![s]).collect(),
                Plurality::Plural if !self.mode.is_beta() || vars.len() <= 1 => alloc::vec![m],
                Plurality::Plural => compressible_families(&m, &vars, self.width),
            };
            options.push(opts);
        }
        let passings = cartesian(&options)
            .into_iter()
            .map(|sets| {
                let theta = sets.iter().fold(DisjSubst::new(), |acc, set| {
                    acc.disjoint_union(&question_combine(set).expect("parameter sets are non-empty").dedup())
                });
                Passing { sets, theta }
            })
            .collect();
        (passings, truncated)
    }

    /// Builds a proof of `e ↠ t` of depth at most `k`, if there is one.
    pub fn prove(&mut self, e: &Term, t: &Term, k: u32) -> Option<DerivationTrace> {
        if t.is_bottom() {
            return Some(DerivationTrace::leaf(RuleTag::B, e.clone(), Term::Bottom));
        }
        match (e, t) {
            (Term::Var(x), Term::Var(y)) if x == y => Some(DerivationTrace::leaf(RuleTag::RR, e.clone(), t.clone())),
            (Term::Con(c, es), Term::Con(d, ts)) if c == d && es.len() == ts.len() => {
                let children = es.iter().zip(ts).map(|(a, b)| self.prove(a, b, k)).collect::<Option<Vec<_>>>()?;
                let mut node = DerivationTrace::leaf(RuleTag::DC, e.clone(), t.clone());
                node.children = children;
                Some(node)
            }
            (Term::Fun(f, args), _) if f.as_str() == CHOICE && args.len() == 2 => {
                for (idx, side) in [(0usize, 0usize), (1, 1)] {
                    if self.values(&args[side], k).contains(t) {
                        return Some(self.prove_choice(e, args, idx, side, t, k));
                    }
                }
                None
            }
            (Term::Fun(f, args), _) => {
                if k == 0 || !self.values(e, k).contains(t) {
                    return None;
                }
                for idx in self.program.rules_for(f).to_vec() {
                    let (passings, _) = self.passings(idx, args, k);
                    let rhs = self.program.rule(idx).rhs.clone();
                    for p in passings {
                        if !self.values(&p.theta.apply(&rhs), k - 1).contains(t) {
                            continue;
                        }
                        if let Some(node) = self.prove_passing(e, args, idx, &p, t, k) {
                            return Some(node);
                        }
                    }
                }
                None
            }
            _ => None,
        }
    }

    fn prove_passing(
        &mut self,
        e: &Term,
        args: &[Term],
        idx: usize,
        p: &Passing,
        t: &Term,
        k: u32,
    ) -> Option<DerivationTrace> {
        let rule = self.program.rule(idx).clone();
        let mut thetas = Vec::with_capacity(args.len());
        let mut children = Vec::new();
        let mut theta = DisjSubst::new();
        for (i, set) in p.sets.iter().enumerate() {
            let pattern = &rule.patterns()[i];
            let ext: Vec<Subst> = set.iter().map(|s| extend_bottom(s, pattern)).collect();
            for s in &ext {
                children.push(self.prove(&args[i], &apply_subst(pattern, s), k - 1)?);
            }
            theta = theta.disjoint_union(&question_combine(&ext).ok()?.dedup());
            thetas.push(ext);
        }
        let body = theta.apply(&rule.rhs);
        children.push(self.prove(&body, t, k - 1)?);
        Some(DerivationTrace {
            tag: self.mode.or_tag(),
            expr: e.clone(),
            value: t.clone(),
            rule: Some(idx),
            thetas,
            subst: Some(theta),
            children,
        })
    }

    /// `a ? b ↠ t` through the built-in rule `idx`, taking `t` from operand
    /// `side` and ⊥ from the other.
    fn prove_choice(&mut self, e: &Term, args: &[Term], idx: usize, side: usize, t: &Term, k: u32) -> DerivationTrace {
        let (x, y) = (Sym::new("X"), Sym::new("Y"));
        let (tx, ty) = if side == 0 { (t.clone(), Term::Bottom) } else { (Term::Bottom, t.clone()) };
        let sx = Subst::from_pairs([(x, tx.clone())]);
        let sy = Subst::from_pairs([(y, ty.clone())]);
        let chosen = self.prove(&args[side], t, k).expect("operand value has a proof");
        let other = DerivationTrace::leaf(RuleTag::B, args[1 - side].clone(), Term::Bottom);
        let children = if side == 0 { alloc::vec![chosen, other] } else { alloc::vec![other, chosen] };
        let theta = DisjSubst::from_subst(&sx).disjoint_union(&DisjSubst::from_subst(&sy));
        let body = theta.apply(&self.program.rule(idx).rhs);
        let mut all = children;
        all.push(self.prove(&body, t, k).expect("a c-term proves its approximations"));
        DerivationTrace {
            tag: self.mode.or_tag(),
            expr: e.clone(),
            value: t.clone(),
            rule: Some(idx),
            thetas: alloc::vec![alloc::vec![sx], alloc::vec![sy]],
            subst: Some(theta),
            children: all,
        }
    }
}

/// Binds every variable of `pattern` missing from `s` to ⊥.
fn extend_bottom(s: &Subst, pattern: &Term) -> Subst {
    let mut out = s.clone();
    for v in pattern.vars() {
        if !out.contains(&v) {
            out.bind(v, Term::Bottom);
        }
    }
    out
}

/// Closure of `items ∪ {⊥}` under pairwise meets.
fn meet_closure(items: &[Term]) -> Vec<Term> {
    let mut out: Vec<Term> = Vec::new();
    for t in items.iter().cloned().chain(core::iter::once(Term::Bottom)) {
        if !out.contains(&t) {
            out.push(t);
        }
    }
    let mut i = 0;
    while i < out.len() {
        for j in 0..i {
            let m = meet(&out[i], &out[j]);
            if !out.contains(&m) {
                out.push(m);
            }
        }
        i += 1;
    }
    out
}

fn is_antichain(ts: &[&Term]) -> bool {
    ts.iter().enumerate().all(|(i, a)| ts.iter().enumerate().all(|(j, b)| i == j || !approx_leq(a, b)))
}

/// Non-empty antichains of `cands` with at most `max` elements.
fn antichains(cands: &[Term], max: usize) -> Vec<Vec<&Term>> {
    fn go<'a>(cands: &'a [Term], start: usize, max: usize, cur: &mut Vec<&'a Term>, out: &mut Vec<Vec<&'a Term>>) {
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        if cur.len() == max {
            return;
        }
        for i in start..cands.len() {
            cur.push(&cands[i]);
            if is_antichain(cur) {
                go(cands, i + 1, max, cur, out);
            }
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(cands, 0, max, &mut Vec::new(), &mut out);
    out
}

/// Maximal compressible parameter sets below the matches `m` over the
/// variables `vars`: products `A1 × ... × An` of coordinate antichains,
/// every tuple of which lies below some match, with at most `width` tuples.
///
/// Coordinates are drawn from the meet closure of the projections of `m`;
/// any admissible coordinate value can be raised to an element of that
/// closure without leaving the admissible region.
fn compressible_families(m: &[Subst], vars: &[Sym], width: Option<usize>) -> Vec<Vec<Subst>> {
    let cands: Vec<Vec<Term>> = vars
        .iter()
        .map(|x| {
            let proj: Vec<Term> = m.iter().map(|s| s.image(x)).collect();
            meet_closure(&proj)
        })
        .collect();
    let below = |prefix: &[&Term]| m.iter().any(|s| prefix.iter().zip(vars).all(|(a, x)| approx_leq(a, &s.image(x))));
    let mut families: Vec<Vec<Vec<&Term>>> = Vec::new();
    fn go<'a>(
        cands: &'a [Vec<Term>],
        width: usize,
        below: &dyn Fn(&[&Term]) -> bool,
        cur: &mut Vec<Vec<&'a Term>>,
        out: &mut Vec<Vec<Vec<&'a Term>>>,
    ) {
        let used: usize = cur.iter().map(Vec::len).product();
        if cur.len() == cands.len() {
            out.push(cur.clone());
            return;
        }
        for a in antichains(&cands[cur.len()], width / used) {
            cur.push(a);
            let lists: Vec<Vec<&Term>> = cur.clone();
            if cartesian(&lists).iter().all(|tuple| below(tuple)) {
                go(cands, width, below, cur, out);
            }
            cur.pop();
        }
    }
    let width = width.unwrap_or(usize::MAX);
    go(&cands, width, &below, &mut Vec::new(), &mut families);

    let dominated = |f: &Vec<Vec<&Term>>, g: &Vec<Vec<&Term>>| {
        f.iter().zip(g).all(|(fa, ga)| fa.iter().all(|a| ga.iter().any(|b| approx_leq(a, b))))
    };
    let mut keep: Vec<Vec<Vec<&Term>>> = Vec::new();
    for f in families {
        if keep.iter().any(|g| dominated(&f, g)) {
            continue;
        }
        keep.retain(|g| !dominated(g, &f));
        keep.push(f);
    }
    keep.into_iter()
        .map(|f| {
            let lists: Vec<Vec<Term>> = f.iter().map(|a| a.iter().map(|t| (*t).clone()).collect()).collect();
            cartesian(&lists).into_iter().map(|tuple| Subst::from_pairs(vars.iter().cloned().zip(tuple))).collect()
        })
        .collect()
}

/// Lazily produced, deduplicated values of an expression, stratum by
/// stratum in increasing depth and in discovery order within a stratum.
pub struct DenotationStream {
    eval: Evaluator,
    expr: Term,
    max_depth: u32,
    next_depth: u32,
    totals_only: bool,
    buffer: VecDeque<Term>,
    seen: HashSet<Term>,
    finished: bool,
    exact: bool,
}

impl DenotationStream {
    /// The depth of the last stratum computed.
    pub fn depth_reached(&self) -> Option<u32> {
        self.next_depth.checked_sub(1)
    }

    /// The stream ended because the whole denotation was produced, not
    /// because of the depth bound.
    pub fn is_exact(&self) -> bool {
        self.exact
    }

    pub fn evaluator(&mut self) -> &mut Evaluator {
        &mut self.eval
    }

    fn refill(&mut self) -> bool {
        while self.buffer.is_empty() && !self.finished {
            let d = self.next_depth;
            if d > self.max_depth {
                self.finished = true;
                break;
            }
            let v = self.eval.values(&self.expr, d);
            for m in &v.maximal {
                if self.totals_only {
                    if m.is_total() && self.seen.insert(m.clone()) {
                        self.buffer.push_back(m.clone());
                    }
                } else {
                    for t in down_closure(m) {
                        if self.seen.insert(t.clone()) {
                            self.buffer.push_back(t);
                        }
                    }
                }
            }
            if !v.truncated {
                self.finished = true;
                self.exact = true;
            }
            if d == u32::MAX {
                self.finished = true;
            } else {
                self.next_depth = d + 1;
            }
        }
        !self.buffer.is_empty()
    }
}

impl Iterator for DenotationStream {
    type Item = Term;

    fn next(&mut self) -> Option<Term> {
        if self.refill() {
            self.buffer.pop_front()
        } else {
            None
        }
    }
}

/// Values of `e` with proofs of depth at most `cfg.depth`, by iterative
/// deepening.
pub fn enumerate_values(
    program: &Program,
    mode: SemanticsMode,
    e: &Term,
    cfg: &EnumConfig,
) -> Result<DenotationStream, CalculiError> {
    enumerate_from(program, mode, e, cfg, 0)
}

/// Like [`enumerate_values`] but computing only the stratum at
/// `cfg.depth`, which contains all the others.
pub fn enumerate_values_direct(
    program: &Program,
    mode: SemanticsMode,
    e: &Term,
    cfg: &EnumConfig,
) -> Result<DenotationStream, CalculiError> {
    enumerate_from(program, mode, e, cfg, cfg.depth)
}

fn enumerate_from(
    program: &Program,
    mode: SemanticsMode,
    e: &Term,
    cfg: &EnumConfig,
    start: u32,
) -> Result<DenotationStream, CalculiError> {
    check_program(program)?;
    Ok(DenotationStream {
        eval: Evaluator::new(program, mode, cfg),
        expr: e.clone(),
        max_depth: cfg.depth,
        next_depth: start,
        totals_only: cfg.totals_only,
        buffer: VecDeque::new(),
        seen: HashSet::new(),
        finished: false,
        exact: false,
    })
}

/// All total values at `cfg.depth` as a set.
pub fn total_values(program: &Program, mode: SemanticsMode, e: &Term, cfg: &EnumConfig) -> BTreeSet<Term> {
    let mut ev = Evaluator::new(program, mode, cfg);
    let v = ev.values(e, cfg.depth);
    v.totals().cloned().collect()
}

/// Least depth `d ≤ cfg.depth` from which the value set no longer grows up
/// to `cfg.depth`, if the sets at `d` and `cfg.depth` coincide and either
/// `d < cfg.depth` or the set at `cfg.depth` is already complete.
pub fn saturates(program: &Program, mode: SemanticsMode, e: &Term, cfg: &EnumConfig) -> Option<u32> {
    let mut ev = Evaluator::new(program, mode, cfg);
    let mut history: Vec<Rc<Values>> = Vec::new();
    let mut d = 0u32;
    loop {
        let v = ev.values(e, d);
        let last = !v.truncated || d == cfg.depth;
        history.push(v.clone());
        if last {
            let first = history.iter().position(|h| h.same_set(&v)).unwrap_or(history.len() - 1) as u32;
            return if first < d || !v.truncated { Some(first) } else { None };
        }
        d += 1;
    }
}

/// A proof of `e ↠ t` of least depth not above `cfg.depth`.
pub fn derives(
    program: &Program,
    mode: SemanticsMode,
    e: &Term,
    t: &Term,
    cfg: &EnumConfig,
) -> Option<DerivationTrace> {
    if check_program(program).is_err() || !t.is_cterm() {
        return None;
    }
    let mut ev = Evaluator::new(program, mode, cfg);
    let mut d = 0u32;
    loop {
        let v = ev.values(e, d);
        if v.contains(t) {
            return ev.prove(e, t, d);
        }
        if !v.truncated || d >= cfg.depth {
            return None;
        }
        d += 1;
    }
}

/// Renders a value set for diagnostics.
pub fn render_set<'a, I: IntoIterator<Item = &'a Term>>(ts: I) -> String {
    let items: Vec<String> = ts.into_iter().map(|t| alloc::format!("{}", t)).collect();
    alloc::format!("{{{}}}", items.join(", "))
}
