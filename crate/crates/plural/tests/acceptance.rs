use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use plural::harness::{
    check_bubbling, check_compress_seed, gen_expressions, gen_program, run_suite, BubblingError, GenConfig, Suite, HOLE,
};
use plural::Session;
use plural_core::calculi::{total_values, verify_trace, Evaluator};
use plural_core::subst::is_compressible;
use plural_core::term::{down_closure, shell};
use plural_core::{
    derives, parse_open_expression, parse_program, pst_simple, reaches, runtime_values, saturates, EnumConfig, Program,
    Reach, SemanticsMode, Subst, Sym, Term,
};

use SemanticsMode::*;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

const P1: &str = "plural P is f(c(X)) -> d(X, X) . endp";
const EP3: &str = "plural E is
  f(c(X)) -> d(X, X) .
  h(d(X, Y)) -> d(X, X) .
  g(d(X, Y)) -> l(X, X, Y, Y) .
  k(d(X, Y)) -> d(X, Y) .
endp";

fn prog(src: &str) -> Program {
    parse_program(src).expect("fixture parses")
}

fn expr(p: &Program, s: &str) -> Term {
    parse_open_expression(s, p.signature()).expect("fixture expression parses")
}

fn set(p: &Program, items: &[&str]) -> BTreeSet<Term> {
    items.iter().map(|s| expr(p, s)).collect()
}

fn show(ts: &BTreeSet<Term>) -> String {
    let v: Vec<String> = ts.iter().map(Term::to_string).collect();
    format!("{{{}}}", v.join(", "))
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Total values once the calculus saturates.
fn saturated(p: &Program, mode: SemanticsMode, e: &str) -> Result<BTreeSet<Term>, String> {
    let e = expr(p, e);
    let cfg = EnumConfig::with_depth(12);
    let d = saturates(p, mode, &e, &cfg).ok_or_else(|| format!("{} {} does not saturate by 12", mode.name(), e))?;
    Ok(total_values(p, mode, &e, &EnumConfig::with_depth(d)))
}

/// The whole run-time denotation, found by demand-driven rewriting.
fn run_time(p: &Program, e: &str) -> Result<BTreeSet<Term>, String> {
    let e = expr(p, e);
    let r = runtime_values(p, &e, 32, 10_000);
    ensure(!r.truncated, || format!("run-time {} not exhausted", e))?;
    Ok(r.values)
}

fn expect_eq(what: &str, got: &BTreeSet<Term>, want: &BTreeSet<Term>) -> Result<(), String> {
    ensure(got == want, || format!("{}: got {}, want {}", what, show(got), show(want)))
}

fn all_tuples(name: &str, n: usize) -> Vec<String> {
    (0..1usize << n)
        .map(|bits| {
            let args: Vec<&str> = (0..n).map(|i| if bits >> (n - 1 - i) & 1 == 1 { "1" } else { "0" }).collect();
            format!("{}({})", name, args.join(","))
        })
        .collect()
}

fn criterion_1() -> Outcome {
    let p = prog(P1);
    let four = all_tuples("d", 2);
    let four: Vec<&str> = four.iter().map(String::as_str).collect();
    let diag = set(&p, &["d(0,0)", "d(1,1)"]);
    let all = set(&p, &four);
    expect_eq("call-time f(c(0?1))", &saturated(&p, CallTime, "f(c(0 ? 1))")?, &diag)?;
    expect_eq("run-time f(c(0?1))", &run_time(&p, "f(c(0 ? 1))")?, &all)?;
    expect_eq("run-time f(c(0)?c(1))", &run_time(&p, "f(c(0) ? c(1))")?, &diag)?;
    expect_eq("alpha f(c(0)?c(1))", &saturated(&p, AlphaPlural, "f(c(0) ? c(1))")?, &all)?;
    expect_eq("beta f(c(0)?c(1))", &saturated(&p, BetaPlural, "f(c(0) ? c(1))")?, &all)?;
    Ok("call-time, run-time, alpha and beta sets match".into())
}

fn criterion_2() -> Outcome {
    let p = prog(EP3);
    let four = all_tuples("d", 2);
    let four = set(&p, &four.iter().map(String::as_str).collect::<Vec<_>>());
    let sixteen = all_tuples("l", 4);
    let sixteen = set(&p, &sixteen.iter().map(String::as_str).collect::<Vec<_>>());
    let diag = set(&p, &["d(0,0)", "d(1,1)"]);
    let arg = "d(0,0) ? d(1,1)";
    let h = format!("h({})", arg);
    let g = format!("g({})", arg);
    let k = format!("k({})", arg);
    expect_eq("alpha h", &saturated(&p, AlphaPlural, &h)?, &four)?;
    expect_eq("beta h", &saturated(&p, BetaPlural, &h)?, &four)?;
    expect_eq("beta g", &saturated(&p, BetaPlural, &g)?, &set(&p, &["l(0,0,0,0)", "l(1,1,1,1)"]))?;
    expect_eq("alpha g", &saturated(&p, AlphaPlural, &g)?, &sixteen)?;
    expect_eq("call-time k", &saturated(&p, CallTime, &k)?, &diag)?;
    expect_eq("run-time k", &run_time(&p, &k)?, &diag)?;
    expect_eq("beta k", &saturated(&p, BetaPlural, &k)?, &diag)?;
    expect_eq("alpha k", &saturated(&p, AlphaPlural, &k)?, &four)?;
    Ok("h, g and k sets match in every semantics".into())
}

/// Rules as strings with fresh function symbols and variables renamed in
/// order of first occurrence.
fn canonical_rules(p: &Program, known: &BTreeSet<&str>) -> BTreeSet<String> {
    fn walk(
        t: &Term,
        known: &BTreeSet<&str>,
        funs: &mut BTreeMap<Sym, String>,
        vars: &mut BTreeMap<Sym, String>,
    ) -> Term {
        match t {
            Term::Var(x) => {
                let n = vars.len();
                Term::var(vars.entry(x.clone()).or_insert_with(|| format!("V{}", n)))
            }
            Term::Bottom => Term::Bottom,
            Term::Con(c, args) => Term::Con(c.clone(), args.iter().map(|a| walk(a, known, funs, vars)).collect()),
            Term::Fun(f, args) => {
                let name = if known.contains(f.as_str()) {
                    f.as_str().to_string()
                } else {
                    let n = funs.len();
                    funs.entry(f.clone()).or_insert_with(|| format!("F{}", n)).clone()
                };
                Term::Fun(Sym::new(&name), args.iter().map(|a| walk(a, known, funs, vars)).collect())
            }
        }
    }
    let mut funs = BTreeMap::new();
    p.user_rules()
        .iter()
        .map(|r| {
            let mut vars = BTreeMap::new();
            let lhs = walk(&r.lhs, known, &mut funs, &mut vars);
            let rhs = walk(&r.rhs, known, &mut funs, &mut vars);
            format!("{} -> {}", lhs, rhs)
        })
        .collect()
}

fn criterion_3() -> Outcome {
    let p = prog(P1);
    let q = pst_simple(&p).map_err(|e| e.to_string())?.output;
    let expected = prog(
        "plural H is
           f(Y) -> if mt(Y) then d(pj(Y), pj(Y)) .
           mt(c(X)) -> tt .
           pj(c(X)) -> X .
         endp",
    );
    let known: BTreeSet<&str> = ["f", "?", "if_then"].into_iter().collect();
    let (got, want) = (canonical_rules(&q, &known), canonical_rules(&expected, &known));
    ensure(got == want, || format!("pst_simple(P1) is {:?}, want {:?}", got, want))?;
    let e = expr(&q, "f(c(0) ? c(1))");
    let target = expr(&q, "d(0,1)");
    let steps = match reaches(&q, &e, &target, 10, 1_000_000) {
        Reach::Found(n) => n,
        other => return Err(format!("d(0,1) not reached within 10 steps: {:?}", other)),
    };
    let rt = runtime_values(&q, &e, 32, 10_000);
    ensure(!rt.truncated, || "run-time denotation of pST(P1) not exhausted".into())?;
    expect_eq("run-time under pST(P1) vs alpha under P1", &rt.values, &saturated(&p, AlphaPlural, "f(c(0) ? c(1))")?)?;
    Ok(format!("pST(P1) matches up to renaming, d(0,1) in {} steps, denotations equal", steps))
}

fn criterion_4() -> Outcome {
    let p = prog("plural C is f is sp . f(X, c(Y)) -> d(X, X, Y, Y) . endp");
    let e = expr(&p, "f(0 ? 1, c(0) ? c(1))");
    let good = expr(&p, "d(0,0,0,1)");
    let bad = expr(&p, "d(0,1,0,1)");
    let mut ev = Evaluator::new(&p, CombinedAlpha, &EnumConfig::with_depth(12));
    ensure(ev.values(&e, 12).contains(&good), || "d(0,0,0,1) missing".into())?;
    for k in 0..=12 {
        ensure(!ev.values(&e, k).contains(&bad), || format!("d(0,1,0,1) derived at depth {}", k))?;
    }
    let mixed = expr(&p, "d(0,1,0,0)");
    ensure(matches!(reaches(&p, &e, &mixed, 12, 1_000_000), Reach::Found(_)), || "rewriting misses d(0,1,0,0)".into())?;
    Ok("d(0,0,0,1) derived, d(0,1,0,1) never up to depth 12, rewriting reaches d(0,1,0,0)".into())
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("programs").join(name)
}

fn session_with(file: &str) -> Result<(Session, Vec<String>), String> {
    let mut s = Session::new();
    let path = fixture(file);
    let out = s.execute(&format!("(load {} .)", path.display())).map_err(|e| e.to_string())?;
    Ok((s, out))
}

/// The first result of `eval` and the results of up to `limit` `more`s.
fn solutions(s: &mut Session, e: &str, limit: usize) -> Result<Vec<String>, String> {
    let mut out = s.execute(&format!("(eval {} .)", e)).map_err(|e| e.to_string())?;
    for _ in 0..limit {
        let more = s.execute("(more .)").map_err(|e| e.to_string())?;
        let done = more.iter().any(|l| l == "No more solutions.");
        out.extend(more);
        if done {
            break;
        }
    }
    Ok(out.into_iter().filter_map(|l| l.strip_prefix("Result: ").map(str::to_string)).collect())
}

fn genre_mismatch(t: &Term) -> bool {
    let women = ["maria", "laura"];
    match t {
        Term::Con(c, args) if c.as_str() == "p" && args.len() == 2 => match (&args[0], &args[1]) {
            (Term::Con(n, _), Term::Con(g, _)) => (women.contains(&n.as_str())) != (g.as_str() == "women"),
            _ => false,
        },
        Term::Con(_, args) => args.iter().any(genre_mismatch),
        _ => false,
    }
}

fn criterion_5() -> Outcome {
    let (mut s, out) = session_with("clerks.plural")?;
    ensure(out == ["Module introduced.", "Both alpha and beta plural semantics supported for this program."], || {
        format!("load printed {:?}", out)
    })?;
    let two = solutions(&mut s, "twoclerks", 20)?;
    ensure(two.first().map(String::as_str) == Some("p(pepe,pepe)"), || format!("twoclerks starts {:?}", two.first()))?;
    ensure(two.iter().any(|t| t == "p(pepe,maria)"), || "p(pepe,maria) missing".into())?;
    let three = solutions(&mut s, "nClerks(s(s(s(z))))", 20)?;
    ensure(three.iter().any(|t| t == "cons(pepe,cons(maria,cons(laura,nil)))"), || {
        format!("nClerks gave {:?}", three)
    })?;
    let ng = solutions(&mut s, "nClerksNG(s(s(s(z))))", 20)?;
    ensure(ng.iter().any(|t| t == "cons(p(pepe,men),cons(p(maria,women),cons(p(laura,women),nil)))"), || {
        format!("nClerksNG gave {:?}", ng)
    })?;
    let p = s.module().expect("module loaded").clone();
    let e = expr(&p, "nClerksNG(s(s(s(z))))");
    for mode in [CombinedAlpha, CombinedBeta] {
        let all = total_values(&p, mode, &e, &EnumConfig::with_depth(12));
        ensure(!all.is_empty(), || format!("{} gives no nClerksNG value", mode.name()))?;
        if let Some(t) = all.iter().find(|t| genre_mismatch(t)) {
            return Err(format!("{} pairs a name with the wrong genre: {}", mode.name(), t));
        }
    }
    Ok(format!("banner, twoclerks order, {} nClerks and {} nClerksNG solutions checked", three.len(), ng.len()))
}

fn criterion_6() -> Outcome {
    let (mut s, _) = session_with("dungeon.plural")?;
    let how = solutions(&mut s, "escapeHow", 40)?;
    for want in ["p(circe,item(treasure-map))", "p(calypso,item(chest-code))", "p(polyphemus,key)"] {
        ensure(how.iter().any(|t| t == want), || format!("escapeHow misses {}: {:?}", want, how))?;
    }
    let pairs = solutions(&mut s, "genPairs(z)", 10)?;
    ensure(pairs.iter().any(|t| t == "p(p(z,z),z)"), || format!("genPairs(z) gave {:?}", pairs))?;
    let p = s.module().expect("module loaded").clone();
    let target = expr(&p, "p(p(z,z),z)");
    let bad = total_values(&p, CombinedAlpha, &expr(&p, "genPairsBad(z)"), &EnumConfig::with_depth(10));
    ensure(!bad.contains(&target), || "genPairsBad(z) computes p(p(z,z),z)".into())?;
    let bad_stream = solutions(&mut s, "[depth = 10] genPairsBad(z)", 50)?;
    ensure(!bad_stream.iter().any(|t| t == "p(p(z,z),z)"), || "genPairsBad(z) stream yields p(p(z,z),z)".into())?;
    Ok(format!("escapeHow has the three exchanges, genPairsBad(z) has {} values and no p(p(z,z),z)", bad.len()))
}

fn subst(pairs: &[(&str, Term)]) -> Subst {
    Subst::from_pairs(pairs.iter().map(|(x, t)| (Sym::new(x), t.clone())))
}

fn criterion_7() -> Outcome {
    let (c0, c1) = (Term::cst("0"), Term::cst("1"));
    let diag = [subst(&[("X", c0.clone()), ("Y", c0.clone())]), subst(&[("X", c1.clone()), ("Y", c1.clone())])];
    ensure(!is_compressible(&diag), || "{[X/0,Y/0],[X/1,Y/1]} reported compressible".into())?;
    let mut full = Vec::new();
    for x in [&c0, &c1] {
        for y in [&c0, &c1] {
            full.push(subst(&[("X", x.clone()), ("Y", y.clone())]));
        }
    }
    ensure(is_compressible(&full), || "the four-element product reported not compressible".into())?;
    let (pepe, maria) = (Term::cst("pepe"), Term::cst("maria"));
    let mixed = [
        subst(&[("N", pepe.clone()), ("G", Term::cst("men"))]),
        subst(&[("N", maria.clone()), ("G", Term::cst("women"))]),
    ];
    ensure(!is_compressible(&mixed), || "name/genre pairs reported compressible".into())?;
    let blurred = [subst(&[("N", pepe), ("G", Term::Bottom)]), subst(&[("N", maria), ("G", Term::Bottom)])];
    ensure(is_compressible(&blurred), || "pairs with undefined genre reported not compressible".into())?;
    for s in diag.iter().chain(&full).chain(&mixed) {
        ensure(is_compressible(std::slice::from_ref(s)), || format!("singleton {{{}}} not compressible", s))?;
    }
    let failures: Vec<String> = (1..=500).flat_map(check_compress_seed).collect();
    ensure(failures.is_empty(), || format!("{} brute-force disagreements, first: {}", failures.len(), failures[0]))?;
    Ok("worked examples, singleton law and 500 brute-force seeds agree".into())
}

fn suite(name: Suite, hi: u64) -> Result<String, String> {
    let r = run_suite(name, 1..=hi, 4);
    ensure(r.passed(), || format!("{}: {} failures, first: {}", name, r.failures.len(), r.failures[0]))?;
    Ok(format!("{} {} checks ({} inconclusive)", name, r.checks, r.inconclusive))
}

/// Polarity, the union law, values of c-terms and shell membership on
/// generated programs, for every mode.
fn laws() -> Result<String, String> {
    let mut checks = 0;
    for seed in 1..=40 {
        let p = gen_program(&GenConfig::seeded(seed));
        let es = gen_expressions(&p, seed, 2, 3);
        let cfg = EnumConfig::with_depth(3);
        for mode in SemanticsMode::ALL {
            let mut ev = Evaluator::new(&p, mode, &cfg);
            let (a, b) = (&es[0], &es[1]);
            let either = ev.values(&Term::choice(a.clone(), b.clone()), 3);
            let (va, vb) = (ev.values(a, 3), ev.values(b, 3));
            let joined: BTreeSet<&Term> = va
                .maximal
                .iter()
                .chain(&vb.maximal)
                .filter(|t| {
                    !va.maximal.iter().chain(&vb.maximal).any(|s| s != *t && plural_core::term::approx_leq(t, s))
                })
                .collect();
            let left: BTreeSet<&Term> = either.maximal.iter().collect();
            ensure(left == joined, || format!("union law fails for {} ? {} in {}", a, b, mode.name()))?;
            for e in &es {
                let vs = ev.values(e, 3);
                if let Some(t) = vs.maximal.iter().find(|t| t.size() <= 6) {
                    for below in down_closure(t) {
                        let tr = derives(&p, mode, e, &below, &cfg)
                            .ok_or_else(|| format!("polarity: {} has {} but not {}", e, t, below))?;
                        verify_trace(&p, mode, &tr)
                            .map_err(|err| format!("bad proof of {} -> {}: {}", e, below, err))?;
                    }
                }
                let sh = shell(e);
                ensure(derives(&p, mode, e, &sh, &EnumConfig::with_depth(0)).is_some(), || {
                    format!("shell {} of {} not a value", sh, e)
                })?;
                for t in vs.maximal.iter().filter(|t| t.is_total()) {
                    let tv = ev.values(t, 0);
                    ensure(tv.maximal == [t.clone()] && !tv.truncated, || format!("values of c-term {} differ", t))?;
                    for below in down_closure(t).into_iter().take(8) {
                        ensure(derives(&p, mode, t, &below, &EnumConfig::with_depth(0)).is_some(), || {
                            format!("c-term {} does not reduce to {}", t, below)
                        })?;
                    }
                }
                checks += 1;
            }
        }
    }
    Ok(format!("{} polarity/union/c-term/shell checks", checks))
}

fn bubbling_counterexample() -> Result<String, String> {
    let p = prog("plural B is pair(X) -> p(X, X) . endp");
    let inner = expr(&p, "pair(0 ? 1)");
    let outer = expr(&p, "pair(0) ? pair(1)");
    let t = expr(&p, "p(0,1)");
    ensure(saturated(&p, AlphaPlural, "pair(0 ? 1)")?.contains(&t), || format!("p(0,1) not a value of {}", inner))?;
    ensure(!saturated(&p, AlphaPlural, "pair(0) ? pair(1)")?.contains(&t), || {
        format!("p(0,1) is a value of {}", outer)
    })?;
    let ctx = Term::fun("pair", vec![Term::var(HOLE)]);
    let refused = check_bubbling(&p, &ctx, &Term::cst("0"), &Term::cst("1"), 4, AlphaPlural);
    ensure(refused.err() == Some(BubblingError::NotConstructorContext), || "pair([]) accepted as a c-context".into())?;
    Ok("pair(0?1) has p(0,1), pair(0)?pair(1) does not, pair([]) refused".into())
}

fn criterion_8() -> Outcome {
    let parts = [
        suite(Suite::Hierarchy, 200)?,
        suite(Suite::Cab, 100)?,
        suite(Suite::Pst, 100)?,
        laws()?,
        suite(Suite::Bubbling, 200)?,
        bubbling_counterexample()?,
    ];
    Ok(parts.join("; "))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("1 call-time, run-time and plural values of f(c(X)) -> d(X,X)", criterion_1),
        ("2 alpha versus beta on h, g and k", criterion_2),
        ("3 pST of f(c(X)) -> d(X,X) and its adequacy", criterion_3),
        ("4 combined singular/plural parameter passing", criterion_4),
        ("5 Clerks transcript", criterion_5),
        ("6 Dungeon transcript", criterion_6),
        ("7 compressibility", criterion_7),
        ("8 property suites", criterion_8),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let result = run();
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("PASS  criterion {} ({:.2}s): {}", name, secs, detail),
            Err(why) => {
                failed += 1;
                println!("FAIL  criterion {} ({:.2}s): {}", name, secs, why);
            }
        }
    }
    println!("acceptance: {} of 8 criteria passed", 8 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
