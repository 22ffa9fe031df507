use std::collections::BTreeSet;

use plural_core::calculi::{
    derives, enumerate_values, saturates, total_values, verify_trace, EnumConfig, RuleTag, SemanticsMode,
};
use plural_core::{parse_open_expression, parse_program, Program, Term};

use SemanticsMode::*;

fn prog(src: &str) -> Program {
    parse_program(src).unwrap()
}

fn expr(p: &Program, s: &str) -> Term {
    parse_open_expression(s, p.signature()).unwrap()
}

fn set(p: &Program, items: &[&str]) -> BTreeSet<Term> {
    items.iter().map(|s| expr(p, s)).collect()
}

fn totals(p: &Program, mode: SemanticsMode, e: &str, depth: u32) -> BTreeSet<Term> {
    total_values(p, mode, &expr(p, e), &EnumConfig::with_depth(depth))
}

const P1: &str = "plural P is f(c(X)) -> d(X, X) . endp";
const EP3: &str = "plural E is
  f(c(X)) -> d(X, X) .
  h(d(X, Y)) -> d(X, X) .
  g(d(X, Y)) -> l(X, X, Y, Y) .
  k(d(X, Y)) -> d(X, Y) .
endp";

#[test]
fn call_time_shares_choices() {
    let p = prog(P1);
    assert_eq!(totals(&p, CallTime, "f(c(0 ? 1))", 4), set(&p, &["d(0,0)", "d(1,1)"]));
}

#[test]
fn alpha_combines_matches() {
    let p = prog(P1);
    let all = set(&p, &["d(0,0)", "d(0,1)", "d(1,0)", "d(1,1)"]);
    assert_eq!(totals(&p, AlphaPlural, "f(c(0) ? c(1))", 4), all);
    assert_eq!(totals(&p, BetaPlural, "f(c(0) ? c(1))", 4), all);
    assert_eq!(totals(&p, CallTime, "f(c(0) ? c(1))", 8), set(&p, &["d(0,0)", "d(1,1)"]));
}

#[test]
fn beta_avoids_mixups() {
    let p = prog(EP3);
    assert_eq!(totals(&p, BetaPlural, "g(d(0,0) ? d(1,1))", 4), set(&p, &["l(0,0,0,0)", "l(1,1,1,1)"]));
    assert_eq!(totals(&p, AlphaPlural, "g(d(0,0) ? d(1,1))", 4).len(), 16);
    let four = set(&p, &["d(0,0)", "d(0,1)", "d(1,0)", "d(1,1)"]);
    assert_eq!(totals(&p, AlphaPlural, "k(d(0,0) ? d(1,1))", 4), four);
    assert_eq!(totals(&p, BetaPlural, "k(d(0,0) ? d(1,1))", 4), set(&p, &["d(0,0)", "d(1,1)"]));
    assert_eq!(totals(&p, BetaPlural, "h(d(0,0) ? d(1,1))", 4), four);
    assert_eq!(totals(&p, AlphaPlural, "h(d(0,0) ? d(1,1))", 4), four);
}

#[test]
fn combined_plurality() {
    let p = prog("plural C is f is sp . f(X, c(Y)) -> d(X, X, Y, Y) . endp");
    let v = totals(&p, CombinedAlpha, "f(0 ? 1, c(0) ? c(1))", 12);
    assert!(v.contains(&expr(&p, "d(0,0,0,1)")));
    assert!(!v.contains(&expr(&p, "d(0,1,0,1)")));
    assert_eq!(v.len(), 8);
}

#[test]
fn proofs_replay() {
    let p = prog(P1);
    let e = expr(&p, "f(c(0) ? c(1))");
    let t = expr(&p, "d(0,1)");
    let tr = derives(&p, AlphaPlural, &e, &t, &EnumConfig::with_depth(4)).unwrap();
    assert_eq!(tr.tag, RuleTag::APOR);
    verify_trace(&p, AlphaPlural, &tr).unwrap();
    assert!(derives(&p, CallTime, &e, &t, &EnumConfig::with_depth(8)).is_none());
    let b = derives(&p, CallTime, &e, &Term::Bottom, &EnumConfig::with_depth(0)).unwrap();
    assert_eq!(b.tag, RuleTag::B);
}

#[test]
fn saturation() {
    let p = prog(P1);
    let d = saturates(&p, CallTime, &expr(&p, "f(c(0 ? 1))"), &EnumConfig::with_depth(10)).unwrap();
    assert!(d <= 4);
    let q = prog("plural F is from(X) -> X ? s(from(X)) . endp");
    assert_eq!(saturates(&q, AlphaPlural, &expr(&q, "from(z)"), &EnumConfig::with_depth(10)), None);
    assert!(saturates(&q, AlphaPlural, &expr(&q, "z"), &EnumConfig::with_depth(1)).unwrap() <= 1);
}

#[test]
fn stream_strata() {
    let q = prog("plural F is from(X) -> X ? s(from(X)) . endp");
    let got: Vec<Term> =
        enumerate_values(&q, CallTime, &expr(&q, "from(z)"), &EnumConfig::with_depth(3)).unwrap().collect();
    assert_eq!(got, vec![expr(&q, "z"), expr(&q, "s(z)"), expr(&q, "s(s(z))")]);
}
