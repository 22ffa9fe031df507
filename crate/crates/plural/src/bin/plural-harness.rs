use std::ops::RangeInclusive;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;

use plural::harness::{run_suite, Suite};

/// Differential checks of the semantics on seeded random inputs.
#[derive(Parser)]
#[command(version)]
struct Args {
    /// Seed range, `A..B` inclusive, or a single seed.
    #[arg(long, value_parser = parse_seeds, default_value = "1..100")]
    seeds: RangeInclusive<u64>,
    /// Calculus depth bound.
    #[arg(long, default_value_t = 4)]
    depth: u32,
    /// hierarchy, pst, cab, bubbling, compress or right-linear.
    #[arg(long, value_parser = parse_suite)]
    suite: Suite,
}

fn parse_seeds(s: &str) -> Result<RangeInclusive<u64>, String> {
    let bad = || format!("expected A..B or a number, found `{}`", s);
    match s.split_once("..") {
        Some((a, b)) => {
            let a: u64 = a.trim().parse().map_err(|_| bad())?;
            let b: u64 = b.trim_start_matches('=').trim().parse().map_err(|_| bad())?;
            Ok(a..=b)
        }
        None => s.trim().parse().map(|n| n..=n).map_err(|_| bad()),
    }
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    Suite::from_name(s).ok_or_else(|| format!("unknown suite `{}`", s))
}

fn main() -> ExitCode {
    let args = Args::parse();
    let start = Instant::now();
    let rep = run_suite(args.suite, args.seeds.clone(), args.depth);
    for f in &rep.failures {
        println!("FAIL\t{}\t{}", args.suite, f);
    }
    for n in &rep.notes {
        println!("NOTE\t{}\t{}", args.suite, n);
    }
    println!(
        "{} seeds {}..{} depth {}: {} checks, {} failures, {} exact, {} inconclusive, {:.2}s",
        args.suite,
        args.seeds.start(),
        args.seeds.end(),
        args.depth,
        rep.checks,
        rep.failures.len(),
        rep.exact,
        rep.inconclusive,
        start.elapsed().as_secs_f64()
    );
    if rep.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
