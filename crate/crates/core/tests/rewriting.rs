use std::collections::BTreeSet;

use plural_core::rewriting::{check_step, one_step, reachable, runtime_denotation, SearchConfig};
use plural_core::transform::pst_simple;
use plural_core::{parse_open_expression, parse_program, Program, Term};

fn prog(src: &str) -> Program {
    parse_program(src).unwrap()
}

fn expr(p: &Program, s: &str) -> Term {
    parse_open_expression(s, p.signature()).unwrap()
}

fn set(p: &Program, items: &[&str]) -> BTreeSet<Term> {
    items.iter().map(|s| expr(p, s)).collect()
}

const P1: &str = "plural P is f(c(X)) -> d(X, X) . endp";

#[test]
fn run_time_choice_copies_unevaluated_arguments() {
    let p = prog(P1);
    let all = set(&p, &["d(0,0)", "d(0,1)", "d(1,0)", "d(1,1)"]);
    assert_eq!(runtime_denotation(&p, &expr(&p, "f(c(0 ? 1))"), 20, true), all);
    assert_eq!(runtime_denotation(&p, &expr(&p, "f(c(0) ? c(1))"), 20, true), set(&p, &["d(0,0)", "d(1,1)"]));
}

#[test]
fn no_function_step_below_a_choice() {
    let p = prog(P1);
    let e = expr(&p, "f(c(0) ? c(1))");
    let steps = one_step(&p, &e);
    assert!(!steps.is_empty());
    assert!(steps.iter().all(|s| p.rule(s.rule).function().as_str() == "?"));
    let g = expr(&p, "if tt then 0");
    assert_eq!(one_step(&p, &g)[0].result, expr(&p, "0"));
}

#[test]
fn cterms_are_normal_forms() {
    let p = prog(P1);
    let t = expr(&p, "d(0,1)");
    let got: Vec<_> = reachable(&p, &t, SearchConfig::bfs(5)).collect();
    assert_eq!(got, vec![(t, 0)]);
}

#[test]
fn bfs_and_dfs_agree() {
    let p = prog(P1);
    for src in ["f(c(0 ? 1))", "f(c(0) ? c(1))", "f(c(0 ? 1)) ? f(c(1))"] {
        let e = expr(&p, src);
        let b: BTreeSet<Term> = reachable(&p, &e, SearchConfig::bfs(30)).map(|(t, _)| t).collect();
        let d: BTreeSet<Term> = reachable(&p, &e, SearchConfig::dfs(30)).map(|(t, _)| t).collect();
        assert_eq!(b, d, "{}", src);
    }
}

#[test]
fn bfs_levels_increase() {
    let p = prog(P1);
    let lens: Vec<usize> = reachable(&p, &expr(&p, "f(c(0 ? 1))"), SearchConfig::bfs(20)).map(|(_, l)| l).collect();
    assert!(lens.windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn transformed_program_reaches_mixed_value() {
    let p = prog(P1);
    let q = pst_simple(&p).unwrap().output;
    let e = expr(&q, "f(c(0) ? c(1))");
    let target = expr(&q, "d(0,1)");
    let mut cfg = SearchConfig::bfs(10);
    cfg.record_paths = true;
    let mut search = reachable(&q, &e, cfg);
    let found = search.by_ref().find(|(t, _)| *t == target).expect("reachable within 10 steps");
    assert!(found.1 <= 10);
    let path = search.path_to(&target).unwrap();
    assert_eq!(path.len(), found.1);
    let mut cur = e;
    for step in &path {
        assert!(check_step(&q, &cur, step));
        cur = step.result.clone();
    }
    assert_eq!(cur, target);
}
