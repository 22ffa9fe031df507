//! Seeded cross-check of the compressibility test against a direct product
//! construction.

use std::collections::BTreeSet;

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use plural_core::subst::{compressible_completion, is_compressible};
use plural_core::{Subst, Sym, Term};

const VARS: [&str; 3] = ["X", "Y", "Z"];

fn images() -> Vec<Term> {
    vec![
        Term::cst("0"),
        Term::cst("1"),
        Term::Bottom,
        Term::con("c", vec![Term::cst("0")]),
        Term::con("c", vec![Term::Bottom]),
    ]
}

/// A family of one to five c-substitutions over X, Y, Z. Fewer images are
/// drawn for small seeds' families so that both verdicts come up.
pub fn random_family(seed: u64) -> Vec<Subst> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pool = images();
    let width = rng.random_range(2..=pool.len());
    let pool = &pool[..width];
    let nvars = rng.random_range(1..=VARS.len());
    let n = rng.random_range(1..=5);
    (0..n)
        .map(|_| {
            let mut pairs = Vec::new();
            for x in &VARS[..nvars] {
                if rng.random_bool(0.85) {
                    pairs.push((Sym::new(x), pool.choose(&mut rng).expect("non-empty").clone()));
                }
            }
            Subst::from_pairs(pairs)
        })
        .collect()
}

/// The image tuples of `thetas` over the union of their domains equal the
/// product of the per-variable image sets.
pub fn brute_force_compressible(thetas: &[Subst]) -> bool {
    let vars: BTreeSet<Sym> = thetas.iter().flat_map(|t| t.domain().cloned()).collect();
    let tuples: BTreeSet<Vec<Term>> = thetas.iter().map(|t| vars.iter().map(|x| t.image(x)).collect()).collect();
    let mut product: Vec<Vec<Term>> = vec![vec![]];
    for x in &vars {
        let column: BTreeSet<Term> = thetas.iter().map(|t| t.image(x)).collect();
        product = product
            .into_iter()
            .flat_map(|pre| {
                column.iter().map(move |t| {
                    let mut next = pre.clone();
                    next.push(t.clone());
                    next
                })
            })
            .collect();
    }
    product.len() == tuples.len() && product.into_iter().all(|v| tuples.contains(&v))
}

/// Problems found for one seed, each as a one-line description.
pub fn check_compress_seed(seed: u64) -> Vec<String> {
    let thetas = random_family(seed);
    let show = || thetas.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(" ");
    let mut out = Vec::new();
    let fast = is_compressible(&thetas);
    let slow = brute_force_compressible(&thetas);
    if fast != slow {
        out.push(format!("seed {}\t{}\tis_compressible={} product={}", seed, show(), fast, slow));
    }
    let cc: Vec<Subst> = compressible_completion(&thetas).expect("non-empty family").into_iter().collect();
    if !thetas.iter().all(|t| cc.contains(t)) {
        out.push(format!("seed {}\t{}\tcompletion is not a superset", seed, show()));
    }
    if !brute_force_compressible(&cc) {
        out.push(format!("seed {}\t{}\tcompletion is not compressible", seed, show()));
    }
    if slow && cc.len() != thetas.iter().collect::<BTreeSet<_>>().len() {
        out.push(format!("seed {}\t{}\tcompletion of a compressible set grew", seed, show()));
    }
    out
}
