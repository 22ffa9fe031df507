//! Partial expressions, the approximation ordering, shells, positions and
//! syntactic matching.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::borrow::Borrow;
use core::cmp::Ordering;
use core::fmt;
use core::ops::Deref;

/// Name of the built-in binary choice function.
pub const CHOICE: &str = "?";
/// Name of the built-in guard function `if _ then _`.
pub const IF_THEN: &str = "if_then";
/// Predefined nullary constructor for true.
pub const TT: &str = "tt";
/// Predefined nullary constructor for false.
pub const FF: &str = "ff";

/// An interned-by-reference symbol name. Identity is the string.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sym(Arc<str>);

impl Sym {
    pub fn new(name: &str) -> Self {
        Sym(Arc::from(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl Deref for Sym {
    type Target = str;
    fn deref(&self) -> &str {
        &self.0
    }
}

impl Borrow<str> for Sym {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl From<&str> for Sym {
    fn from(s: &str) -> Self {
        Sym::new(s)
    }
}

impl fmt::Debug for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A partial expression.
///
/// Applications carry their symbol class so that c-term tests and shells do
/// not need a signature lookup.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(Sym),
    Bottom,
    /// Constructor application.
    Con(Sym, Vec<Term>),
    /// Function application.
    Fun(Sym, Vec<Term>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(Sym::new(name))
    }

    pub fn con(name: &str, args: Vec<Term>) -> Term {
        Term::Con(Sym::new(name), args)
    }

    pub fn cst(name: &str) -> Term {
        Term::Con(Sym::new(name), Vec::new())
    }

    pub fn fun(name: &str, args: Vec<Term>) -> Term {
        Term::Fun(Sym::new(name), args)
    }

    /// `a ? b`.
    pub fn choice(a: Term, b: Term) -> Term {
        Term::Fun(Sym::new(CHOICE), alloc::vec![a, b])
    }

    /// Right-nested disjunction `t1 ? (t2 ? ... ? tn)`. Panics on an empty list.
    pub fn disjunction(mut alternatives: Vec<Term>) -> Term {
        let mut acc = alternatives.pop().expect("empty disjunction");
        while let Some(t) = alternatives.pop() {
            acc = Term::choice(t, acc);
        }
        acc
    }

    /// `if c then e`.
    pub fn if_then(cond: Term, then: Term) -> Term {
        Term::Fun(Sym::new(IF_THEN), alloc::vec![cond, then])
    }

    pub fn args(&self) -> &[Term] {
        match self {
            Term::Con(_, a) | Term::Fun(_, a) => a,
            _ => &[],
        }
    }

    pub fn root(&self) -> Option<&Sym> {
        match self {
            Term::Con(s, _) | Term::Fun(s, _) => Some(s),
            _ => None,
        }
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    pub fn is_bottom(&self) -> bool {
        matches!(self, Term::Bottom)
    }

    /// No function symbols anywhere.
    pub fn is_cterm(&self) -> bool {
        match self {
            Term::Var(_) | Term::Bottom => true,
            Term::Con(_, args) => args.iter().all(Term::is_cterm),
            Term::Fun(..) => false,
        }
    }

    /// No ⊥ anywhere.
    pub fn is_total(&self) -> bool {
        match self {
            Term::Bottom => false,
            Term::Var(_) => true,
            Term::Con(_, args) | Term::Fun(_, args) => args.iter().all(Term::is_total),
        }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::Bottom => true,
            Term::Con(_, args) | Term::Fun(_, args) => args.iter().all(Term::is_ground),
        }
    }

    /// Height of the term tree; leaves have depth 0.
    pub fn depth(&self) -> usize {
        self.args().iter().map(|a| a.depth() + 1).max().unwrap_or(0)
    }

    pub fn size(&self) -> usize {
        1 + self.args().iter().map(Term::size).sum::<usize>()
    }

    /// Variables in order of first occurrence, without repetitions.
    pub fn vars(&self) -> Vec<Sym> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut Vec<Sym>) {
        match self {
            Term::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            Term::Bottom => {}
            Term::Con(_, args) | Term::Fun(_, args) => {
                for a in args {
                    a.collect_vars(out);
                }
            }
        }
    }

    pub fn var_set(&self) -> BTreeSet<Sym> {
        self.vars().into_iter().collect()
    }

    /// Every variable occurs at most once.
    pub fn is_linear(&self) -> bool {
        fn walk(t: &Term, seen: &mut BTreeSet<Sym>) -> bool {
            match t {
                Term::Var(v) => seen.insert(v.clone()),
                Term::Bottom => true,
                Term::Con(_, args) | Term::Fun(_, args) => args.iter().all(|a| walk(a, seen)),
            }
        }
        walk(self, &mut BTreeSet::new())
    }

    /// Function symbols occurring in the term.
    pub fn functions(&self) -> BTreeSet<Sym> {
        fn walk(t: &Term, out: &mut BTreeSet<Sym>) {
            if let Term::Fun(f, _) = t {
                out.insert(f.clone());
            }
            for a in t.args() {
                walk(a, out);
            }
        }
        let mut out = BTreeSet::new();
        walk(self, &mut out);
        out
    }

    fn rank(&self) -> u8 {
        match self {
            Term::Bottom => 0,
            Term::Var(_) => 1,
            Term::Con(..) => 2,
            Term::Fun(..) => 3,
        }
    }
}

/// Canonical total order: by depth, then ⊥ < variables < constructors <
/// functions, then symbol name, then children lexicographically.
impl Ord for Term {
    fn cmp(&self, other: &Self) -> Ordering {
        self.depth().cmp(&other.depth()).then_with(|| self.rank().cmp(&other.rank())).then_with(|| {
            match (self, other) {
                (Term::Var(a), Term::Var(b)) => a.cmp(b),
                (Term::Con(f, xs), Term::Con(g, ys)) | (Term::Fun(f, xs), Term::Fun(g, ys)) => {
                    f.cmp(g).then_with(|| xs.cmp(ys))
                }
                _ => Ordering::Equal,
            }
        })
    }
}

impl PartialOrd for Term {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A: `a ⊑ b`, i.e. `a` results from `b` by replacing subterms with ⊥.
pub fn approx_leq(a: &Term, b: &Term) -> bool {
    match (a, b) {
        (Term::Bottom, _) => true,
        (Term::Var(x), Term::Var(y)) => x == y,
        (Term::Con(f, xs), Term::Con(g, ys)) | (Term::Fun(f, xs), Term::Fun(g, ys)) => {
            f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| approx_leq(x, y))
        }
        _ => false,
    }
}

/// Greatest lower bound with respect to `⊑`.
pub fn meet(a: &Term, b: &Term) -> Term {
    match (a, b) {
        (Term::Var(x), Term::Var(y)) if x == y => a.clone(),
        (Term::Con(f, xs), Term::Con(g, ys)) if f == g && xs.len() == ys.len() => {
            Term::Con(f.clone(), xs.iter().zip(ys).map(|(x, y)| meet(x, y)).collect())
        }
        (Term::Fun(f, xs), Term::Fun(g, ys)) if f == g && xs.len() == ys.len() => {
            Term::Fun(f.clone(), xs.iter().zip(ys).map(|(x, y)| meet(x, y)).collect())
        }
        _ => Term::Bottom,
    }
}

/// The outer constructor part `|e|`: function-rooted subterms become ⊥.
pub fn shell(e: &Term) -> Term {
    match e {
        Term::Var(_) | Term::Bottom => e.clone(),
        Term::Con(c, args) => Term::Con(c.clone(), args.iter().map(shell).collect()),
        Term::Fun(..) => Term::Bottom,
    }
}

/// Every `t' ⊑ t`, including `t` itself. Exponential in the size of `t`.
pub fn down_closure(t: &Term) -> Vec<Term> {
    let mut out = alloc::vec![Term::Bottom];
    match t {
        Term::Bottom => {}
        Term::Var(_) => out.push(t.clone()),
        Term::Con(c, args) | Term::Fun(c, args) => {
            let parts: Vec<Vec<Term>> = args.iter().map(down_closure).collect();
            for combo in cartesian(&parts) {
                out.push(match t {
                    Term::Con(..) => Term::Con(c.clone(), combo),
                    _ => Term::Fun(c.clone(), combo),
                });
            }
        }
    }
    out
}

/// All tuples picking one element from each list, in lexicographic order of
/// list positions.
pub fn cartesian<T: Clone>(lists: &[Vec<T>]) -> Vec<Vec<T>> {
    let mut acc: Vec<Vec<T>> = alloc::vec![Vec::new()];
    for list in lists {
        let mut next = Vec::with_capacity(acc.len() * list.len());
        for prefix in &acc {
            for item in list {
                let mut v = prefix.clone();
                v.push(item.clone());
                next.push(v);
            }
        }
        acc = next;
    }
    acc
}

/// The maximal elements of `cands`, each once, in order of first
/// occurrence. Total terms are compared by equality only.
pub fn maximal_of<I: IntoIterator<Item = Term>>(cands: I) -> Vec<Term> {
    let mut seen = hashbrown::HashSet::new();
    let mut all = Vec::new();
    for t in cands {
        if seen.insert(t.clone()) {
            all.push(t);
        }
    }
    let keep: Vec<bool> = all.iter().map(|t| t.is_total() || !all.iter().any(|s| s != t && approx_leq(t, s))).collect();
    all.into_iter().zip(keep).filter_map(|(t, k)| k.then_some(t)).collect()
}

/// Inserts `t` into an antichain of maximal elements. Elements dominated by
/// `t` are dropped and `t` takes the slot of the first of them.
pub fn insert_maximal(set: &mut Vec<Term>, t: Term) -> bool {
    if set.iter().any(|s| approx_leq(&t, s)) {
        return false;
    }
    match set.iter().position(|s| approx_leq(s, &t)) {
        Some(first) => {
            set[first] = t;
            let mut i = first + 1;
            while i < set.len() {
                if approx_leq(&set[i], &set[first]) {
                    set.remove(i);
                } else {
                    i += 1;
                }
            }
        }
        None => set.push(t),
    }
    true
}

/// A substitution. Identity bindings are never stored, so the key set is
/// the domain.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Subst(BTreeMap<Sym, Term>);

impl Subst {
    pub fn new() -> Self {
        Subst(BTreeMap::new())
    }

    /// Builds from bindings, dropping identity bindings. Later bindings win.
    pub fn from_pairs<I: IntoIterator<Item = (Sym, Term)>>(pairs: I) -> Self {
        let mut s = Subst::new();
        for (x, t) in pairs {
            s.bind(x, t);
        }
        s
    }

    pub fn bind(&mut self, x: Sym, t: Term) {
        if matches!(&t, Term::Var(y) if *y == x) {
            self.0.remove(&x);
        } else {
            self.0.insert(x, t);
        }
    }

    pub fn get(&self, x: &str) -> Option<&Term> {
        self.0.get(x)
    }

    /// `Xθ`: the image, or the variable itself outside the domain.
    pub fn image(&self, x: &Sym) -> Term {
        self.0.get(x).cloned().unwrap_or_else(|| Term::Var(x.clone()))
    }

    pub fn domain(&self) -> impl Iterator<Item = &Sym> {
        self.0.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Sym, &Term)> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, x: &str) -> bool {
        self.0.contains_key(x)
    }

    /// Every image is a partial c-term.
    pub fn is_csubst(&self) -> bool {
        self.0.values().all(Term::is_cterm)
    }

    /// `θ|D`.
    pub fn restrict<'a, I: IntoIterator<Item = &'a Sym>>(&self, vars: I) -> Subst {
        let mut out = Subst::new();
        for x in vars {
            if let Some(t) = self.0.get(x) {
                out.0.insert(x.clone(), t.clone());
            }
        }
        out
    }

    /// Disjoint union; bindings of `other` win on overlap.
    pub fn union(mut self, other: &Subst) -> Subst {
        for (x, t) in other.iter() {
            self.0.insert(x.clone(), t.clone());
        }
        self
    }

    /// Pointwise `⊑` over the union of both domains.
    pub fn approx_leq(&self, other: &Subst) -> bool {
        self.0.iter().all(|(x, t)| match other.0.get(x) {
            Some(u) => approx_leq(t, u),
            None => approx_leq(t, &Term::Var(x.clone())),
        }) && other
            .0
            .iter()
            .filter(|(x, _)| !self.0.contains_key(*x))
            .all(|(x, u)| approx_leq(&Term::Var(x.clone()), u))
    }
}

impl fmt::Debug for Subst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Subst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, (x, t)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}/{}", x, t)?;
        }
        f.write_str("]")
    }
}

/// Simultaneous homomorphic replacement of the variables in `sigma`'s domain.
pub fn apply_subst(e: &Term, sigma: &Subst) -> Term {
    match e {
        Term::Var(x) => sigma.image(x),
        Term::Bottom => Term::Bottom,
        Term::Con(c, args) => Term::Con(c.clone(), args.iter().map(|a| apply_subst(a, sigma)).collect()),
        Term::Fun(f, args) => Term::Fun(f.clone(), args.iter().map(|a| apply_subst(a, sigma)).collect()),
    }
}

/// First-order matching of a linear c-term pattern against an arbitrary
/// expression. Pattern variables may bind any subexpression, including ⊥.
pub fn match_pattern(pattern: &Term, e: &Term) -> Option<Subst> {
    let mut out = Subst::new();
    if match_into(pattern, e, &mut out) {
        Some(out)
    } else {
        None
    }
}

fn match_into(pattern: &Term, e: &Term, out: &mut Subst) -> bool {
    match (pattern, e) {
        (Term::Var(x), _) => {
            out.bind(x.clone(), e.clone());
            true
        }
        (Term::Con(c, ps), Term::Con(d, es)) => {
            c == d && ps.len() == es.len() && ps.iter().zip(es).all(|(p, t)| match_into(p, t, out))
        }
        _ => false,
    }
}

/// Matches a rule argument pattern against a partial c-term value.
pub fn match_value(pattern: &Term, value: &Term) -> Option<Subst> {
    debug_assert!(pattern.is_cterm() && pattern.is_total() && pattern.is_linear());
    debug_assert!(value.is_cterm());
    match_pattern(pattern, value)
}

/// A position: a path of 1-based child indices. The empty path is the root.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Position(pub Vec<usize>);

impl Position {
    pub fn root() -> Self {
        Position(Vec::new())
    }

    pub fn child(&self, i: usize) -> Position {
        let mut v = self.0.clone();
        v.push(i);
        Position(v)
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Debug for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        for (i, k) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            write!(f, "{}", k)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvalidPosition(pub Position);

impl fmt::Display for InvalidPosition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid position {}", self.0)
    }
}

impl core::error::Error for InvalidPosition {}

/// `e|o`.
pub fn subterm_at<'a>(e: &'a Term, pos: &Position) -> Result<&'a Term, InvalidPosition> {
    let mut cur = e;
    for &i in &pos.0 {
        cur = i.checked_sub(1).and_then(|k| cur.args().get(k)).ok_or_else(|| InvalidPosition(pos.clone()))?;
    }
    Ok(cur)
}

/// `e[e']o`.
pub fn replace_at(e: &Term, pos: &Position, with: Term) -> Result<Term, InvalidPosition> {
    fn go(e: &Term, path: &[usize], with: Term, pos: &Position) -> Result<Term, InvalidPosition> {
        let Some((&i, rest)) = path.split_first() else {
            return Ok(with);
        };
        let (sym, args, is_con) = match e {
            Term::Con(c, a) => (c, a, true),
            Term::Fun(f, a) => (f, a, false),
            _ => return Err(InvalidPosition(pos.clone())),
        };
        if i == 0 || i > args.len() {
            return Err(InvalidPosition(pos.clone()));
        }
        let mut new_args = args.clone();
        new_args[i - 1] = go(&args[i - 1], rest, with, pos)?;
        Ok(if is_con { Term::Con(sym.clone(), new_args) } else { Term::Fun(sym.clone(), new_args) })
    }
    go(e, &pos.0, with, pos)
}

/// All positions of `e` in leftmost-innermost order (children before their
/// parent, left to right).
pub fn positions(e: &Term) -> Vec<Position> {
    fn go(e: &Term, here: Position, out: &mut Vec<Position>) {
        for (i, a) in e.args().iter().enumerate() {
            go(a, here.child(i + 1), out);
        }
        out.push(here);
    }
    let mut out = Vec::new();
    go(e, Position::root(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn c0() -> Term {
        Term::cst("0")
    }
    fn c1() -> Term {
        Term::cst("1")
    }

    #[test]
    fn approx_examples() {
        let d01 = Term::con("d", vec![c0(), c1()]);
        assert!(approx_leq(&Term::Bottom, &d01));
        assert!(!approx_leq(&d01, &Term::con("d", vec![c1(), c1()])));
        assert!(!approx_leq(&d01, &Term::Bottom));
    }

    #[test]
    fn pointwise_approx() {
        // c(⊥,0) ⊑ c(1,0)
        assert!(approx_leq(&Term::con("c", vec![Term::Bottom, c0()]), &Term::con("c", vec![c1(), c0()])));
    }

    #[test]
    fn shell_examples() {
        assert_eq!(shell(&Term::fun("f", vec![c0()])), Term::Bottom);
        assert_eq!(
            shell(&Term::con("c", vec![Term::fun("f", vec![c0()]), c1()])),
            Term::con("c", vec![Term::Bottom, c1()])
        );
        let d01 = Term::con("d", vec![c0(), c1()]);
        assert_eq!(shell(&d01), d01);
    }

    #[test]
    fn subst_examples() {
        let x = Term::var("X");
        let s = Subst::from_pairs([(Sym::new("X"), c0())]);
        assert_eq!(apply_subst(&Term::con("d", vec![x.clone(), x.clone()]), &s), Term::con("d", vec![c0(), c0()]));
        assert_eq!(apply_subst(&x, &Subst::new()), x);
        let s = Subst::from_pairs([(Sym::new("X"), Term::choice(c0(), c1()))]);
        assert_eq!(apply_subst(&Term::con("c", vec![x.clone()]), &s), Term::con("c", vec![Term::choice(c0(), c1())]));
    }

    #[test]
    fn match_examples() {
        let cx = Term::con("c", vec![Term::var("X")]);
        assert_eq!(match_value(&cx, &Term::con("c", vec![c0()])), Some(Subst::from_pairs([(Sym::new("X"), c0())])));
        assert_eq!(match_value(&cx, &Term::Bottom), None);
        let dxy = Term::con("d", vec![Term::var("X"), Term::var("Y")]);
        assert_eq!(
            match_value(&dxy, &Term::con("d", vec![c0(), Term::Bottom])),
            Some(Subst::from_pairs([(Sym::new("X"), c0()), (Sym::new("Y"), Term::Bottom)]))
        );
    }

    #[test]
    fn position_examples() {
        let e = Term::fun("f", vec![Term::con("c", vec![c0()])]);
        assert_eq!(subterm_at(&e, &Position(vec![1, 1])).unwrap(), &c0());
        let d01 = Term::con("d", vec![c0(), c1()]);
        assert_eq!(
            replace_at(&d01, &Position(vec![2]), Term::cst("9")).unwrap(),
            Term::con("d", vec![c0(), Term::cst("9")])
        );
        assert!(subterm_at(&Term::var("X"), &Position(vec![1])).is_err());
        assert_eq!(replace_at(&d01, &Position::root(), c0()).unwrap(), c0());
        assert!(replace_at(&d01, &Position(vec![3]), c0()).is_err());
    }

    #[test]
    fn canonical_order() {
        let mut v = vec![Term::con("d", vec![c0(), c1()]), c1(), Term::var("X"), Term::Bottom, c0()];
        v.sort();
        assert_eq!(v, vec![Term::Bottom, Term::var("X"), c0(), c1(), Term::con("d", vec![c0(), c1()])]);
    }

    #[test]
    fn maximal_insertion_keeps_first_slot() {
        let mut set = vec![Term::con("d", vec![c0(), Term::Bottom]), c1()];
        assert!(insert_maximal(&mut set, Term::con("d", vec![c0(), c1()])));
        assert_eq!(set, vec![Term::con("d", vec![c0(), c1()]), c1()]);
        assert!(!insert_maximal(&mut set, Term::Bottom));
        let m = maximal_of(vec![
            Term::Bottom,
            c0(),
            Term::con("d", vec![Term::Bottom, c1()]),
            c0(),
            Term::con("d", vec![c0(), c1()]),
        ]);
        assert_eq!(m, vec![c0(), Term::con("d", vec![c0(), c1()])]);
    }

    #[test]
    fn closure_and_meet() {
        let d01 = Term::con("d", vec![c0(), c1()]);
        assert_eq!(down_closure(&d01).len(), 5);
        assert_eq!(meet(&d01, &Term::con("d", vec![c0(), c0()])), Term::con("d", vec![c0(), Term::Bottom]));
        assert_eq!(meet(&c0(), &c1()), Term::Bottom);
    }
}
