//! Disjunctive substitutions, the `?` combination of c-substitutions,
//! compressibility and compressible completion.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::fmt;

use crate::term::{apply_subst, approx_leq, Subst, Sym, Term};

/// Returned when a combination is asked of an empty family.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EmptyInput;

impl fmt::Display for EmptyInput {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("empty set of substitutions")
    }
}

impl core::error::Error for EmptyInput {}

/// A substitution whose images are non-empty disjunctions `t1 ? ... ? tn`
/// of partial c-terms, kept as the list of alternatives.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct DisjSubst(BTreeMap<Sym, Vec<Term>>);

impl DisjSubst {
    pub fn new() -> Self {
        DisjSubst(BTreeMap::new())
    }

    /// Embeds a c-substitution as the singleton-alternative case.
    pub fn from_subst(s: &Subst) -> Self {
        DisjSubst(s.iter().map(|(x, t)| (x.clone(), alloc::vec![t.clone()])).collect())
    }

    /// Binds `x` to the given alternatives. Panics on an empty list.
    pub fn bind(&mut self, x: Sym, alternatives: Vec<Term>) {
        assert!(!alternatives.is_empty(), "a disjunction needs at least one alternative");
        debug_assert!(alternatives.iter().all(Term::is_cterm));
        if alternatives.len() == 1 && alternatives[0] == Term::Var(x.clone()) {
            self.0.remove(&x);
        } else {
            self.0.insert(x, alternatives);
        }
    }

    pub fn get(&self, x: &str) -> Option<&[Term]> {
        self.0.get(x).map(Vec::as_slice)
    }

    pub fn domain(&self) -> impl Iterator<Item = &Sym> {
        self.0.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Sym, &Vec<Term>)> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The alternatives for `x`, or `[x]` outside the domain.
    pub fn alternatives(&self, x: &Sym) -> Vec<Term> {
        self.0.get(x).cloned().unwrap_or_else(|| alloc::vec![Term::Var(x.clone())])
    }

    /// The plain substitution mapping each variable to its disjunction term.
    pub fn to_subst(&self) -> Subst {
        Subst::from_pairs(self.0.iter().map(|(x, alts)| (x.clone(), Term::disjunction(alts.clone()))))
    }

    pub fn apply(&self, e: &Term) -> Term {
        apply_subst(e, &self.to_subst())
    }

    /// `θ|D`.
    pub fn restrict<'a, I: IntoIterator<Item = &'a Sym>>(&self, vars: I) -> DisjSubst {
        let mut out = DisjSubst::new();
        for x in vars {
            if let Some(a) = self.0.get(x) {
                out.0.insert(x.clone(), a.clone());
            }
        }
        out
    }

    /// `θ ⊎ θ'`. Domains are expected to be disjoint; `other` wins otherwise.
    pub fn disjoint_union(mut self, other: &DisjSubst) -> DisjSubst {
        debug_assert!(other.domain().all(|x| !self.0.contains_key(x)));
        for (x, a) in other.iter() {
            self.0.insert(x.clone(), a.clone());
        }
        self
    }

    /// Drops repeated alternatives, keeping first occurrences.
    pub fn dedup(mut self) -> DisjSubst {
        for alts in self.0.values_mut() {
            let mut seen = BTreeSet::new();
            alts.retain(|t| seen.insert(t.clone()));
        }
        self
    }

    /// Sorts alternatives canonically and drops repetitions.
    pub fn canonical(mut self) -> DisjSubst {
        for alts in self.0.values_mut() {
            alts.sort();
            alts.dedup();
        }
        self
    }

    /// Every alternative of `self(X)` is `⊑` some alternative of `other(X)`,
    /// for every variable of either domain.
    pub fn alt_leq(&self, other: &DisjSubst) -> bool {
        self.0.keys().chain(other.0.keys()).all(|x| {
            let theirs = other.alternatives(x);
            self.alternatives(x).iter().all(|a| theirs.iter().any(|b| approx_leq(a, b)))
        })
    }
}

impl fmt::Debug for DisjSubst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for DisjSubst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, (x, alts)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}/", x)?;
            for (j, t) in alts.iter().enumerate() {
                if j > 0 {
                    f.write_str(" ? ")?;
                }
                write!(f, "{}", t)?;
            }
        }
        f.write_str("]")
    }
}

fn domain_union<'a, I: IntoIterator<Item = &'a Subst>>(thetas: I) -> BTreeSet<Sym> {
    thetas.into_iter().flat_map(|t| t.domain().cloned()).collect()
}

/// `?(θ1 ... θn)` for a sequence. A variable missing from some `θi` keeps
/// itself as the first alternative followed by the images of the `θi`
/// binding it, in sequence order; otherwise its alternatives are all the
/// images in sequence order.
pub fn question_combine(thetas: &[Subst]) -> Result<DisjSubst, EmptyInput> {
    if thetas.is_empty() {
        return Err(EmptyInput);
    }
    let mut out = DisjSubst::new();
    for x in domain_union(thetas) {
        let images: Vec<Term> = thetas.iter().filter_map(|t| t.get(&x).cloned()).collect();
        let alts = if images.len() < thetas.len() {
            let mut v = alloc::vec![Term::Var(x.clone())];
            v.extend(images);
            v
        } else {
            images
        };
        out.0.insert(x, alts);
    }
    Ok(out)
}

/// `?Θ` for a set: the sequence form over the canonical substitution order.
pub fn question_combine_set(thetas: &BTreeSet<Subst>) -> Result<DisjSubst, EmptyInput> {
    let seq: Vec<Subst> = thetas.iter().cloned().collect();
    question_combine(&seq)
}

/// Distinct images `{Xθ | θ ∈ Θ}` per variable of `⋃ dom(θ)`.
fn coordinates(thetas: &[Subst]) -> Vec<(Sym, Vec<Term>)> {
    domain_union(thetas)
        .into_iter()
        .map(|x| {
            let set: BTreeSet<Term> = thetas.iter().map(|t| t.image(&x)).collect();
            (x, set.into_iter().collect())
        })
        .collect()
}

/// Compressibility by the recombination criterion: for every choice of
/// `θ1..θn ∈ Θ` some `θ ∈ Θ` agrees with `θi` on `Xi` for every `i`.
pub fn is_compressible(thetas: &[Subst]) -> bool {
    let coords = coordinates(thetas);
    if coords.is_empty() {
        return true;
    }
    let present: BTreeSet<Vec<Term>> =
        thetas.iter().map(|t| coords.iter().map(|(x, _)| t.image(x)).collect()).collect();
    // odometer over the product of coordinate images
    let mut idx = alloc::vec![0usize; coords.len()];
    loop {
        let tuple: Vec<Term> = idx.iter().zip(&coords).map(|(&i, (_, v))| v[i].clone()).collect();
        if !present.contains(&tuple) {
            return false;
        }
        let mut k = coords.len();
        loop {
            if k == 0 {
                return true;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < coords[k].1.len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

/// `cc(Θ)`: every recombination of coordinate images of members of `Θ`.
pub fn compressible_completion(thetas: &[Subst]) -> Result<BTreeSet<Subst>, EmptyInput> {
    if thetas.is_empty() {
        return Err(EmptyInput);
    }
    let coords = coordinates(thetas);
    let lists: Vec<Vec<Term>> = coords.iter().map(|(_, v)| v.clone()).collect();
    Ok(crate::term::cartesian(&lists)
        .into_iter()
        .map(|tuple| Subst::from_pairs(coords.iter().map(|(x, _)| x.clone()).zip(tuple)))
        .collect())
}

/// `{θ|D | θ ∈ Θ}` for a compressible `Θ`; the result is compressible too.
pub fn restrict_compressible(thetas: &[Subst], vars: &BTreeSet<Sym>) -> BTreeSet<Subst> {
    debug_assert!(is_compressible(thetas), "restrict_compressible: input is not compressible");
    let out: BTreeSet<Subst> = thetas.iter().map(|t| t.restrict(vars)).collect();
    debug_assert!(is_compressible(&out.iter().cloned().collect::<Vec<_>>()));
    out
}
