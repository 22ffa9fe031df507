//! Random programs and cross-semantics oracle checks.

mod checks;
mod compress;
mod gen;

use std::fmt;
use std::ops::RangeInclusive;

pub use checks::{
    ceiling, check_bubbling, check_cab_equivalence, check_hierarchy, check_pst_adequacy, matched_bound, one_line, plug,
    BubblingError, CheckReport, NotInClass, Witness, HOLE, MAX_PST_FUEL, PST_FUEL_FACTOR, REACH_BUDGET,
    SATURATION_DEPTH, VALUE_CAP,
};
pub use compress::{brute_force_compressible, check_compress_seed, random_family};
pub use gen::{gen_expressions, gen_program, user_functions, GenConfig, ALPHABET};

use plural_core::calculi::total_values;
use plural_core::{EnumConfig, Program, SemanticsMode, Term};
use rand::seq::IndexedRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Expressions checked per generated program.
pub const EXPRS_PER_PROGRAM: usize = 3;
/// Nesting depth of generated expressions.
pub const EXPR_DEPTH: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Hierarchy,
    Pst,
    Cab,
    Bubbling,
    Compress,
    /// β = call-time = run-time on right-linear programs. Exploratory: its
    /// mismatches are reported as notes, never as violations.
    RightLinear,
}

impl Suite {
    pub const ALL: [Suite; 6] =
        [Suite::Hierarchy, Suite::Pst, Suite::Cab, Suite::Bubbling, Suite::Compress, Suite::RightLinear];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Hierarchy => "hierarchy",
            Suite::Pst => "pst",
            Suite::Cab => "cab",
            Suite::Bubbling => "bubbling",
            Suite::Compress => "compress",
            Suite::RightLinear => "right-linear",
        }
    }

    pub fn from_name(s: &str) -> Option<Suite> {
        Suite::ALL.into_iter().find(|x| x.name() == s)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, Default)]
pub struct SuiteReport {
    pub checks: usize,
    /// One line per failure: program, expression, semantics pair, witness.
    pub failures: Vec<String>,
    pub inconclusive: usize,
    /// Checks whose sets were whole denotations.
    pub exact: usize,
    pub notes: Vec<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn absorb(&mut self, r: CheckReport) {
        self.checks += 1;
        self.inconclusive += r.inconclusive;
        self.exact += usize::from(r.exact);
        self.failures.extend(r.violations.iter().map(Witness::to_string));
    }
}

fn random_context(seed: u64) -> Term {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(31).wrapping_add(7));
    let mut ctx = Term::var(HOLE);
    let layers = [
        |h: Term| Term::con("c", vec![h]),
        |h: Term| Term::con("d", vec![h, Term::cst("0")]),
        |h: Term| Term::con("d", vec![Term::cst("1"), h]),
    ];
    for _ in 0..(seed % 3) {
        ctx = layers.choose(&mut rng).expect("non-empty")(ctx);
    }
    ctx
}

fn is_right_linear(p: &Program) -> bool {
    p.user_rules().iter().all(|r| {
        let vs = r.rhs.vars();
        vs.len() == r.rhs.var_set().len()
    })
}

/// Runs one suite over a seed range at the given calculus depth.
pub fn run_suite(suite: Suite, seeds: RangeInclusive<u64>, depth: u32) -> SuiteReport {
    let mut rep = SuiteReport::default();
    for seed in seeds {
        match suite {
            Suite::Compress => {
                rep.checks += 1;
                rep.failures.extend(check_compress_seed(seed));
            }
            Suite::Hierarchy => {
                let p = gen_program(&GenConfig::seeded(seed));
                for e in gen_expressions(&p, seed, EXPRS_PER_PROGRAM, EXPR_DEPTH) {
                    rep.absorb(check_hierarchy(&p, &e, depth));
                }
            }
            Suite::Cab => {
                let p = gen_program(&GenConfig { force_cab: true, ..GenConfig::seeded(seed) });
                for e in gen_expressions(&p, seed, EXPRS_PER_PROGRAM, EXPR_DEPTH) {
                    match check_cab_equivalence(&p, &e, depth) {
                        Ok(r) => rep.absorb(r),
                        Err(_) => rep.failures.push(format!("{}\tforced C_AB program outside C_AB", one_line(&p))),
                    }
                }
            }
            Suite::Pst => {
                let p = gen_program(&GenConfig::seeded(seed));
                for e in gen_expressions(&p, seed, EXPRS_PER_PROGRAM, EXPR_DEPTH) {
                    for optimized in [false, true] {
                        match check_pst_adequacy(&p, &e, depth, optimized) {
                            Ok(r) => rep.absorb(r),
                            Err(err) => rep.failures.push(format!("{}\t{}\t{}", one_line(&p), e, err)),
                        }
                    }
                }
            }
            Suite::Bubbling => {
                let p = gen_program(&GenConfig::seeded(seed));
                let es = gen_expressions(&p, seed, 2, EXPR_DEPTH - 1);
                let ctx = random_context(seed);
                for mode in SemanticsMode::ALL {
                    match check_bubbling(&p, &ctx, &es[0], &es[1], depth, mode) {
                        Ok(r) => rep.absorb(r),
                        Err(err) => rep.failures.push(format!("{}\t{}\t{}", one_line(&p), ctx, err)),
                    }
                }
            }
            Suite::RightLinear => {
                let p = gen_program(&GenConfig { share_prob: 0.0, ..GenConfig::seeded(seed) });
                if !is_right_linear(&p) {
                    continue;
                }
                let cfg = EnumConfig::with_depth(depth);
                for e in gen_expressions(&p, seed, EXPRS_PER_PROGRAM, EXPR_DEPTH) {
                    rep.checks += 1;
                    let ct = total_values(&p, SemanticsMode::CallTime, &e, &cfg);
                    let bt = total_values(&p, SemanticsMode::BetaPlural, &e, &cfg);
                    if ct != bt {
                        let t = bt.symmetric_difference(&ct).next().expect("sets differ");
                        rep.notes.push(format!("{}\t{}\tcall-time != beta\t{}", one_line(&p), e, t));
                    }
                }
            }
        }
    }
    rep
}
