//! Seeded random programs and expressions over a small constructor alphabet.

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use plural_core::term::{CHOICE, IF_THEN};
use plural_core::{PluralityMap, Program, Rule, Sym, Term};

/// The constructor alphabet, in the order `constructors` takes a prefix of.
pub const ALPHABET: [(&str, usize); 4] = [("0", 0), ("1", 0), ("c", 1), ("d", 2)];

#[derive(Clone, Debug, PartialEq)]
pub struct GenConfig {
    pub seed: u64,
    /// How many constructors of [`ALPHABET`] to use, at least one.
    pub constructors: usize,
    pub functions: usize,
    pub max_arity: usize,
    pub max_rules: usize,
    pub max_rhs_depth: usize,
    /// Chance that a right-hand side variable reuses one already placed.
    pub share_prob: f64,
    /// Build every rule so that each argument shares at most one variable
    /// with the right-hand side.
    pub force_cab: bool,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            seed: 0,
            constructors: 4,
            functions: 3,
            max_arity: 2,
            max_rules: 3,
            max_rhs_depth: 3,
            share_prob: 0.5,
            force_cab: false,
        }
    }
}

impl GenConfig {
    pub fn seeded(seed: u64) -> Self {
        GenConfig { seed, ..GenConfig::default() }
    }
}

struct Gen<'a> {
    rng: ChaCha8Rng,
    cfg: &'a GenConfig,
    cons: Vec<(&'static str, usize)>,
    funs: Vec<(String, usize)>,
}

struct RuleCtx<'a> {
    /// Index of the function being defined.
    me: usize,
    patterns: &'a [Term],
    allowed: Vec<Sym>,
    placed: Vec<Sym>,
    recursed: bool,
}

impl Gen<'_> {
    fn constant(&mut self) -> Term {
        let nullary: Vec<&str> = self.cons.iter().filter(|c| c.1 == 0).map(|c| c.0).collect();
        Term::cst(nullary.choose(&mut self.rng).expect("0 is always available"))
    }

    fn pattern(&mut self, depth: usize, next_var: &mut usize) -> Term {
        if depth == 0 || self.rng.random_bool(0.5) {
            *next_var += 1;
            return Term::var(&format!("X{}", next_var));
        }
        let &(c, n) = self.cons.choose(&mut self.rng).expect("non-empty alphabet");
        Term::con(c, (0..n).map(|_| self.pattern(depth - 1, next_var)).collect())
    }

    fn pick_var(&mut self, ctx: &mut RuleCtx) -> Option<Term> {
        if ctx.allowed.is_empty() {
            return None;
        }
        let x = if !ctx.placed.is_empty() && self.rng.random_bool(self.cfg.share_prob) {
            ctx.placed.choose(&mut self.rng).cloned()
        } else {
            let fresh: Vec<Sym> = ctx.allowed.iter().filter(|x| !ctx.placed.contains(x)).cloned().collect();
            fresh.choose(&mut self.rng).or_else(|| ctx.allowed.choose(&mut self.rng)).cloned()
        }?;
        if !ctx.placed.contains(&x) {
            ctx.placed.push(x.clone());
        }
        Some(Term::Var(x))
    }

    /// A call of the function being defined on strictly smaller arguments,
    /// when some argument pattern exposes an allowed variable under a
    /// constructor.
    fn recursive_call(&mut self, ctx: &mut RuleCtx) -> Option<Term> {
        let shrinking: Vec<(usize, Sym)> = ctx
            .patterns
            .iter()
            .enumerate()
            .filter(|(_, p)| !p.is_var())
            .flat_map(|(i, p)| p.vars().into_iter().map(move |x| (i, x)))
            .filter(|(_, x)| ctx.allowed.contains(x))
            .collect();
        let (k, x) = shrinking.choose(&mut self.rng)?.clone();
        let mut args = Vec::new();
        for (i, p) in ctx.patterns.iter().enumerate() {
            args.push(match p {
                _ if i == k => Term::Var(x.clone()),
                Term::Var(y) if ctx.allowed.contains(y) => Term::Var(y.clone()),
                _ => Term::cst("0"),
            });
        }
        for a in &args {
            if let Term::Var(y) = a {
                if !ctx.placed.contains(y) {
                    ctx.placed.push(y.clone());
                }
            }
        }
        ctx.recursed = true;
        Some(Term::Fun(Sym::new(&self.funs[ctx.me].0), args))
    }

    fn rhs(&mut self, depth: usize, ctx: &mut RuleCtx) -> Term {
        if depth == 0 || self.rng.random_bool(0.2) {
            if self.rng.random_bool(0.8) {
                if let Some(v) = self.pick_var(ctx) {
                    return v;
                }
            }
            return self.constant();
        }
        let later: Vec<usize> = (ctx.me + 1..self.funs.len()).collect();
        match self.rng.random_range(0..10) {
            0..=3 => {
                let &(c, n) = self.cons.choose(&mut self.rng).expect("non-empty alphabet");
                Term::con(c, (0..n).map(|_| self.rhs(depth - 1, ctx)).collect())
            }
            4..=6 if !later.is_empty() => {
                let j = *later.choose(&mut self.rng).expect("non-empty");
                let (name, n) = self.funs[j].clone();
                Term::Fun(Sym::new(&name), (0..n).map(|_| self.rhs(depth - 1, ctx)).collect())
            }
            7 if !ctx.recursed => match self.recursive_call(ctx) {
                Some(t) => t,
                None => self.rhs(depth - 1, ctx),
            },
            8 | 9 => Term::choice(self.rhs(depth - 1, ctx), self.rhs(depth - 1, ctx)),
            _ => self.rhs(depth - 1, ctx),
        }
    }

    fn rule(&mut self, me: usize) -> Rule {
        let (name, n) = self.funs[me].clone();
        let mut next_var = 0;
        let patterns: Vec<Term> = (0..n).map(|_| self.pattern(2, &mut next_var)).collect();
        let allowed: Vec<Sym> = if self.cfg.force_cab {
            patterns
                .iter()
                .filter_map(|p| {
                    let vs = p.vars();
                    if vs.is_empty() || self.rng.random_bool(0.2) {
                        None
                    } else {
                        vs.choose(&mut self.rng).cloned()
                    }
                })
                .collect()
        } else {
            patterns.iter().flat_map(Term::vars).collect()
        };
        let mut ctx = RuleCtx { me, patterns: &patterns, allowed, placed: Vec::new(), recursed: false };
        let max = self.cfg.max_rhs_depth.max(1);
        let depth = self.rng.random_range(max.min(2)..=max);
        let rhs = self.rhs(depth, &mut ctx);
        Rule::new(Term::Fun(Sym::new(&name), patterns.clone()), rhs)
    }
}

/// A valid program: left-linear, constructor-based, without extra
/// variables. Function `fi` only calls `fj` for `j > i`, or itself on
/// strictly smaller arguments. The same configuration gives the same
/// program.
pub fn gen_program(cfg: &GenConfig) -> Program {
    let mut g = Gen {
        rng: ChaCha8Rng::seed_from_u64(cfg.seed),
        cfg,
        cons: ALPHABET[..cfg.constructors.clamp(1, ALPHABET.len())].to_vec(),
        funs: Vec::new(),
    };
    for i in 0..cfg.functions.max(1) {
        let n = if cfg.max_arity == 0 || g.rng.random_bool(0.1) { 0 } else { g.rng.random_range(1..=cfg.max_arity) };
        g.funs.push((format!("f{}", i + 1), n));
    }
    let mut rules = Vec::new();
    for me in 0..g.funs.len() {
        let count = g.rng.random_range(1..=cfg.max_rules.max(1));
        for _ in 0..count {
            rules.push(g.rule(me));
        }
    }
    let extra: Vec<(Sym, usize)> = g.cons.iter().map(|&(c, n)| (Sym::new(c), n)).collect();
    Program::new(&format!("G{}", cfg.seed), rules, PluralityMap::new(), &extra)
        .expect("generated programs are valid by construction")
}

/// The user-defined functions of a program with their arities.
pub fn user_functions(p: &Program) -> Vec<(Sym, usize)> {
    p.signature()
        .functions
        .iter()
        .filter(|(f, _)| f.as_str() != CHOICE && f.as_str() != IF_THEN)
        .map(|(f, &n)| (f.clone(), n))
        .collect()
}

fn expression<R: Rng>(rng: &mut R, p: &Program, depth: usize, top: bool) -> Term {
    let funs = user_functions(p);
    let cons: Vec<(Sym, usize)> = p
        .signature()
        .constructors
        .iter()
        .filter(|(c, _)| ALPHABET.iter().any(|a| a.0 == c.as_str()))
        .map(|(c, &n)| (c.clone(), n))
        .collect();
    let nullary: Vec<&Sym> = cons.iter().filter(|c| c.1 == 0).map(|c| &c.0).collect();
    if depth == 0 {
        return Term::Con(nullary.choose(rng).map(|c| (*c).clone()).unwrap_or_else(|| Sym::new("0")), vec![]);
    }
    let roll = rng.random_range(0..10);
    if (top && roll < 8) || (!top && roll < 3) {
        if let Some((f, n)) = funs.choose(rng) {
            return Term::Fun(f.clone(), (0..*n).map(|_| expression(rng, p, depth - 1, false)).collect());
        }
    }
    if roll >= 6 {
        return Term::choice(expression(rng, p, depth - 1, false), expression(rng, p, depth - 1, false));
    }
    let (c, n) = cons.choose(rng).cloned().unwrap_or((Sym::new("0"), 0));
    Term::Con(c, (0..n).map(|_| expression(rng, p, depth - 1, false)).collect())
}

/// Ground expressions over the program's functions, the constructors of
/// [`ALPHABET`] and `?`, at most `depth` deep, usually rooted at a function
/// call.
pub fn gen_expressions(p: &Program, seed: u64, count: usize, depth: usize) -> Vec<Term> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    (0..count).map(|_| expression(&mut rng, p, depth, true)).collect()
}
