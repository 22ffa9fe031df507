//! Plain term rewriting: the step relation, bounded reachability search and
//! the run-time choice denotation.

use alloc::collections::{BTreeSet, VecDeque};
use alloc::rc::Rc;
use alloc::vec::Vec;

use hashbrown::{HashMap, HashSet};

use crate::program::Program;
use crate::term::{
    apply_subst, approx_leq, cartesian, down_closure, insert_maximal, positions, replace_at, shell, subterm_at,
    Position, Subst, Sym, Term, CHOICE,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RewriteStep {
    pub rule: usize,
    pub position: Position,
    pub matcher: Subst,
    pub result: Term,
}

/// Matches a rule left-hand side `f(p1..pn)` against an expression.
fn match_lhs(lhs: &Term, e: &Term) -> Option<Subst> {
    match (lhs, e) {
        (Term::Fun(f, ps), Term::Fun(g, es)) if f == g && ps.len() == es.len() => {
            let mut out = Subst::new();
            for (p, a) in ps.iter().zip(es) {
                out = out.union(&crate::term::match_pattern(p, a)?);
            }
            Some(out)
        }
        _ => None,
    }
}

/// Every rewrite step from `e`: positions leftmost-innermost first, rules
/// in program order.
pub fn one_step(program: &Program, e: &Term) -> Vec<RewriteStep> {
    let mut out = Vec::new();
    for pos in positions(e) {
        let sub = subterm_at(e, &pos).expect("positions are valid");
        let Term::Fun(f, _) = sub else { continue };
        for &idx in program.rules_for(f) {
            let rule = program.rule(idx);
            if let Some(m) = match_lhs(&rule.lhs, sub) {
                let result = replace_at(e, &pos, apply_subst(&rule.rhs, &m)).expect("valid position");
                out.push(RewriteStep { rule: idx, position: pos.clone(), matcher: m, result });
            }
        }
    }
    out
}

/// `source|o ≡ lσ` and `result ≡ source[rσ]o`.
pub fn check_step(program: &Program, source: &Term, step: &RewriteStep) -> bool {
    let Some(rule) = program.rules().get(step.rule) else { return false };
    let Ok(sub) = subterm_at(source, &step.position) else { return false };
    *sub == apply_subst(&rule.lhs, &step.matcher)
        && replace_at(source, &step.position, apply_subst(&rule.rhs, &step.matcher)).as_ref() == Ok(&step.result)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchStrategy {
    DepthFirst,
    BreadthFirst,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub strategy: SearchStrategy,
    /// Maximum derivation length; `None` is unbounded.
    pub step_bound: Option<usize>,
    /// Maximum number of distinct expressions visited; `None` is unbounded.
    pub state_budget: Option<usize>,
    /// Keep the predecessor of each expression so derivations can be
    /// reconstructed with [`Reachable::path_to`].
    pub record_paths: bool,
}

impl SearchConfig {
    pub fn bfs(bound: usize) -> Self {
        SearchConfig {
            strategy: SearchStrategy::BreadthFirst,
            step_bound: Some(bound),
            state_budget: Some(1_000_000),
            record_paths: false,
        }
    }

    pub fn dfs(bound: usize) -> Self {
        SearchConfig { strategy: SearchStrategy::DepthFirst, ..SearchConfig::bfs(bound) }
    }
}

/// Expressions reachable from a start expression, each yielded once with
/// the length of the derivation that found it.
pub struct Reachable {
    program: Program,
    cfg: SearchConfig,
    frontier: VecDeque<(Term, usize)>,
    best: HashMap<Term, usize>,
    yielded: HashSet<Term>,
    parents: HashMap<Term, (Term, RewriteStep)>,
    bound_hit: bool,
}

impl Reachable {
    pub fn new(program: &Program, e: &Term, cfg: SearchConfig) -> Self {
        let mut best = HashMap::new();
        best.insert(e.clone(), 0);
        Reachable {
            program: program.clone(),
            cfg,
            frontier: VecDeque::from([(e.clone(), 0)]),
            best,
            yielded: HashSet::new(),
            parents: HashMap::new(),
            bound_hit: false,
        }
    }

    /// Some expression had successors beyond the step bound or the state
    /// budget ran out, so the search may be incomplete.
    pub fn bound_hit(&self) -> bool {
        self.bound_hit
    }

    /// The steps from the start expression to `t`, when paths are recorded
    /// and `t` has been reached.
    pub fn path_to(&self, t: &Term) -> Option<Vec<RewriteStep>> {
        if !self.best.contains_key(t) {
            return None;
        }
        let mut steps = Vec::new();
        let mut cur = t.clone();
        while let Some((prev, step)) = self.parents.get(&cur) {
            steps.push(step.clone());
            cur = prev.clone();
        }
        steps.reverse();
        Some(steps)
    }

    fn expand(&mut self, t: &Term, len: usize) {
        let steps = one_step(&self.program, t);
        if steps.is_empty() {
            return;
        }
        if self.cfg.step_bound.is_some_and(|b| len >= b) {
            self.bound_hit = true;
            return;
        }
        let mut fresh = Vec::new();
        for step in steps {
            let known = self.best.get(&step.result).copied();
            if known.is_some_and(|l| l <= len + 1) {
                continue;
            }
            if known.is_none() && self.cfg.state_budget.is_some_and(|b| self.best.len() >= b) {
                self.bound_hit = true;
                continue;
            }
            self.best.insert(step.result.clone(), len + 1);
            if self.cfg.record_paths {
                self.parents.insert(step.result.clone(), (t.clone(), step.clone()));
            }
            fresh.push((step.result, len + 1));
        }
        match self.cfg.strategy {
            SearchStrategy::BreadthFirst => self.frontier.extend(fresh),
            SearchStrategy::DepthFirst => {
                for item in fresh.into_iter().rev() {
                    self.frontier.push_front(item);
                }
            }
        }
    }
}

impl Iterator for Reachable {
    type Item = (Term, usize);

    fn next(&mut self) -> Option<(Term, usize)> {
        while let Some((t, len)) = self.frontier.pop_front() {
            // entries superseded by a shorter derivation are stale
            if self.best.get(&t).is_some_and(|&b| b < len) {
                continue;
            }
            self.expand(&t, len);
            if self.yielded.insert(t.clone()) {
                return Some((t, len));
            }
        }
        None
    }
}

pub fn reachable(program: &Program, e: &Term, cfg: SearchConfig) -> Reachable {
    Reachable::new(program, e, cfg)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Reach {
    Found(usize),
    NotFound,
    /// More than the allowed number of expressions had to be visited.
    OutOfBudget,
}

/// Length of a shortest derivation from `e` to the c-term `target` within
/// `bound` steps. Rewriting never shrinks the shell of an expression, so
/// expressions whose shell is not below `target` are not explored.
pub fn reaches(program: &Program, e: &Term, target: &Term, bound: usize, budget: usize) -> Reach {
    let mut seen = HashSet::new();
    let mut frontier = VecDeque::from([(e.clone(), 0usize)]);
    seen.insert(e.clone());
    while let Some((t, len)) = frontier.pop_front() {
        if &t == target {
            return Reach::Found(len);
        }
        if len >= bound {
            continue;
        }
        for step in one_step(program, &t) {
            if !approx_leq(&shell(&step.result), target) || seen.contains(&step.result) {
                continue;
            }
            if seen.len() >= budget {
                return Reach::OutOfBudget;
            }
            seen.insert(step.result.clone());
            frontier.push_back((step.result, len + 1));
        }
    }
    Reach::NotFound
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuntimeValues {
    /// Total c-terms reached.
    pub values: BTreeSet<Term>,
    /// Some branch ran out of fuel or hit the size cap, so `values` may be
    /// incomplete.
    pub truncated: bool,
    /// Some intermediate set reached the size cap.
    pub overflow: bool,
}

type Reducts = Rc<(Vec<Term>, bool)>;

/// Demand-driven exploration of the rewrite relation. Arguments of a
/// function call are rewritten only as far as a rule pattern inspects
/// them; the parts bound to pattern variables are copied unevaluated, which
/// keeps independent steps from being interleaved in every order.
struct Demand<'a> {
    program: &'a Program,
    cap: usize,
    overflow: bool,
    hnf_memo: HashMap<(Term, Term, u32), Reducts>,
    val_memo: HashMap<(Term, u32), Rc<RuntimeValues>>,
}

impl Demand<'_> {
    fn product(&mut self, parts: &[Vec<Term>]) -> Vec<Vec<Term>> {
        let size = parts.iter().try_fold(1usize, |acc, p| acc.checked_mul(p.len()));
        if size.is_none_or(|n| n > self.cap) {
            self.overflow = true;
            let clipped: Vec<Vec<Term>> = parts.iter().map(|p| p.iter().take(1).cloned().collect()).collect();
            return cartesian(&clipped);
        }
        cartesian(parts)
    }

    fn clip<T>(&mut self, items: &mut Vec<T>) {
        if items.len() > self.cap {
            self.overflow = true;
            items.truncate(self.cap);
        }
    }

    /// Instances of the rule patterns of `f` reachable from `args`,
    /// with the matched rule bodies.
    fn root_steps(&mut self, f: &Sym, args: &[Term], fuel: u32) -> (Vec<Term>, bool) {
        let mut out = Vec::new();
        let mut truncated = false;
        for &idx in self.program.rules_for(f) {
            let rule = self.program.rule(idx).clone();
            let mut parts = Vec::new();
            for (a, p) in args.iter().zip(rule.patterns()) {
                let r = self.hnf(a, p, fuel);
                truncated |= r.1;
                parts.push(r.0.clone());
            }
            for tuple in self.product(&parts) {
                let lhs = Term::Fun(f.clone(), tuple);
                if let Some(m) = match_lhs(&rule.lhs, &lhs) {
                    out.push(apply_subst(&rule.rhs, &m));
                }
            }
        }
        (out, truncated)
    }

    /// Expressions reachable from `e` that match `p`, rewritten only at
    /// positions `p` inspects.
    fn hnf(&mut self, e: &Term, p: &Term, fuel: u32) -> Reducts {
        if p.is_var() {
            return Rc::new((alloc::vec![e.clone()], false));
        }
        let key = (e.clone(), p.clone(), fuel);
        if let Some(r) = self.hnf_memo.get(&key) {
            return r.clone();
        }
        let mut out = Vec::new();
        let mut truncated = false;
        match (e, p) {
            (Term::Con(c, es), Term::Con(d, ps)) if c == d && es.len() == ps.len() => {
                let mut parts = Vec::new();
                for (a, q) in es.iter().zip(ps) {
                    let r = self.hnf(a, q, fuel);
                    truncated |= r.1;
                    parts.push(r.0.clone());
                }
                out = self.product(&parts).into_iter().map(|args| Term::Con(c.clone(), args)).collect();
            }
            (Term::Fun(f, args), _) if f.as_str() == CHOICE => {
                for a in args {
                    let r = self.hnf(a, p, fuel);
                    truncated |= r.1;
                    out.extend(r.0.iter().cloned());
                }
            }
            (Term::Fun(f, args), _) => {
                if fuel == 0 {
                    truncated = true;
                } else {
                    let (bodies, t) = self.root_steps(f, args, fuel - 1);
                    truncated |= t;
                    for b in bodies {
                        let r = self.hnf(&b, p, fuel - 1);
                        truncated |= r.1;
                        out.extend(r.0.iter().cloned());
                    }
                }
            }
            _ => {}
        }
        let mut seen = HashSet::new();
        out.retain(|t| seen.insert(t.clone()));
        self.clip(&mut out);
        let r = Rc::new((out, truncated || self.overflow));
        self.hnf_memo.insert(key, r.clone());
        r
    }

    fn values(&mut self, e: &Term, fuel: u32) -> Rc<RuntimeValues> {
        if e.is_cterm() {
            let values = if e.is_total() { BTreeSet::from([e.clone()]) } else { BTreeSet::new() };
            return Rc::new(RuntimeValues { values, truncated: false, overflow: false });
        }
        let key = (e.clone(), fuel);
        if let Some(r) = self.val_memo.get(&key) {
            return r.clone();
        }
        let mut values = BTreeSet::new();
        let mut truncated = false;
        match e {
            Term::Con(c, es) => {
                let mut parts = Vec::new();
                for a in es {
                    let r = self.values(a, fuel);
                    truncated |= r.truncated;
                    parts.push(r.values.iter().cloned().collect::<Vec<_>>());
                }
                values = self.product(&parts).into_iter().map(|args| Term::Con(c.clone(), args)).collect();
            }
            Term::Fun(f, args) if f.as_str() == CHOICE => {
                for a in args {
                    let r = self.values(a, fuel);
                    truncated |= r.truncated;
                    values.extend(r.values.iter().cloned());
                }
            }
            Term::Fun(f, args) => {
                if fuel == 0 {
                    truncated = true;
                } else {
                    let (bodies, t) = self.root_steps(f, args, fuel - 1);
                    truncated |= t;
                    for b in bodies {
                        let r = self.values(&b, fuel - 1);
                        truncated |= r.truncated;
                        values.extend(r.values.iter().cloned());
                    }
                }
            }
            _ => {}
        }
        if values.len() > self.cap {
            self.overflow = true;
            values = values.into_iter().take(self.cap).collect();
        }
        let overflow = self.overflow;
        let r = Rc::new(RuntimeValues { values, truncated: truncated || overflow, overflow });
        self.val_memo.insert(key, r.clone());
        r
    }
}

/// Total c-terms reachable from `e` by rewriting, exploring rule
/// applications nested at most `fuel` deep. Steps of the built-in `?` rules
/// cost no fuel. Every value returned is reachable; when `truncated` is
/// false the set is the whole run-time denotation. Intermediate sets are
/// cut at `cap` elements.
pub fn runtime_values(program: &Program, e: &Term, fuel: u32, cap: usize) -> RuntimeValues {
    let mut d = Demand { program, cap, overflow: false, hnf_memo: HashMap::new(), val_memo: HashMap::new() };
    let r = d.values(e, fuel);
    RuntimeValues { overflow: d.overflow, truncated: r.truncated || d.overflow, values: r.values.clone() }
}

/// Run-time choice denotation within `bound` steps. With `totals_only` the
/// reachable total c-terms; otherwise every `t ⊑ |e'|` for reachable `e'`.
pub fn runtime_denotation(program: &Program, e: &Term, bound: usize, totals_only: bool) -> BTreeSet<Term> {
    let search = reachable(program, e, SearchConfig::bfs(bound));
    if totals_only {
        return search.map(|(t, _)| t).filter(|t| t.is_cterm() && t.is_total()).collect();
    }
    let mut shells = Vec::new();
    for (t, _) in search {
        insert_maximal(&mut shells, shell(&t));
    }
    shells.iter().flat_map(down_closure).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_open_expression, parse_program};

    #[test]
    fn steps_replay() {
        let p = parse_program("plural P is f(c(X)) -> d(X, X) . endp").unwrap();
        let e = parse_open_expression("f(c(0) ? c(1))", p.signature()).unwrap();
        let steps = one_step(&p, &e);
        assert_eq!(steps.len(), 2);
        assert!(steps.iter().all(|s| s.position == Position(alloc::vec![1]) && s.rule < 2));
        assert!(steps.iter().all(|s| check_step(&p, &e, s)));
        let e = parse_open_expression("f(c(0))", p.signature()).unwrap();
        assert_eq!(one_step(&p, &e)[0].result, parse_open_expression("d(0,0)", p.signature()).unwrap());
    }

    #[test]
    fn targeted_reachability() {
        let p = parse_program("plural P is f(c(X)) -> d(X, X) . endp").unwrap();
        let e = parse_open_expression("f(c(0 ? 1))", p.signature()).unwrap();
        let t = parse_open_expression("d(0,1)", p.signature()).unwrap();
        assert_eq!(reaches(&p, &e, &t, 10, 1000), Reach::Found(3));
        let e = parse_open_expression("f(c(0) ? c(1))", p.signature()).unwrap();
        assert_eq!(reaches(&p, &e, &t, 10, 1000), Reach::NotFound);
    }

    #[test]
    fn demand_driven_values() {
        let p = parse_program("plural P is f(c(X)) -> d(X, X) . from(X) -> X ? s(from(X)) . endp").unwrap();
        let e = parse_open_expression("f(c(0 ? 1))", p.signature()).unwrap();
        let r = runtime_values(&p, &e, 3, 1000);
        assert_eq!(r.values.len(), 4);
        assert!(!r.truncated);
        let e = parse_open_expression("f(c(0) ? c(1))", p.signature()).unwrap();
        assert_eq!(runtime_values(&p, &e, 3, 1000).values.len(), 2);
        let z = parse_open_expression("from(z)", p.signature()).unwrap();
        let r = runtime_values(&p, &z, 3, 1000);
        assert!(r.truncated);
        assert_eq!(r.values.len(), 3);
    }

    #[test]
    fn looping_function_has_bottom_shell() {
        let p = parse_program("plural L is f(X) -> f(X) . endp").unwrap();
        let e = parse_open_expression("f(0)", p.signature()).unwrap();
        let den = runtime_denotation(&p, &e, 5, false);
        assert_eq!(den.into_iter().collect::<Vec<_>>(), alloc::vec![Term::Bottom]);
    }
}
