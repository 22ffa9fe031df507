use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("programs").join(name).display().to_string()
}

fn script(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::Builder::new().suffix(".plural").tempfile().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

fn plural(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_plural")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> Vec<String> {
    String::from_utf8_lossy(&o.stdout).lines().map(String::from).collect()
}

#[test]
fn clerks_transcript() {
    let s = script(&format!("(load {} .)\n(eval twoclerks .)\n(more .)\n", fixture("clerks.plural")));
    let o = plural(&["--run", s.path().to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let lines = stdout(&o);
    assert_eq!(
        lines[..4],
        [
            "Module introduced.",
            "Both alpha and beta plural semantics supported for this program.",
            "Result: p(pepe,pepe)",
            "Result: p(pepe,maria)",
        ]
    );
}

#[test]
fn startup_file_and_flags() {
    let s = script("(eval f(c(0) ? c(1)) .)\n(more .)\n(more .)\n(more .)\n(more .)\n");
    let prog = script("(plural P is f(c(X)) -> d(X, X) . endp)\n");
    let o = plural(&[prog.path().to_str().unwrap(), "--semantics", "alpha", "--run", s.path().to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let results: Vec<String> = stdout(&o).into_iter().filter(|l| l.starts_with("Result: ")).collect();
    assert_eq!(results.len(), 4, "{results:?}");
    let o = plural(&[prog.path().to_str().unwrap(), "--semantics", "call-time", "--run", s.path().to_str().unwrap()]);
    let lines = stdout(&o);
    assert!(lines.contains(&"Result: d(0,0)".to_string()));
    assert!(!lines.contains(&"Result: d(0,1)".to_string()));
    assert!(lines.contains(&"No more solutions.".to_string()));
}

#[test]
fn errors_make_the_run_fail() {
    let s = script("(eval f(0) .)\n");
    let o = plural(&["--run", s.path().to_str().unwrap()]);
    assert!(!o.status.success());
    assert!(stdout(&o).contains(&"Error: no module loaded".to_string()), "{:?}", stdout(&o));
    let o = plural(&["--semantics", "gamma"]);
    assert!(!o.status.success());
}

#[test]
fn depth_and_width_flags() {
    let prog = script("(plural F is from is plural . from(X) -> X ? s(from(X)) . endp)\n");
    let s = script("(eval from(z) .)\n(more .)\n(more .)\n(more .)\n");
    let o =
        plural(&[prog.path().to_str().unwrap(), "--depth", "2", "--width", "inf", "--run", s.path().to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(
        stdout(&o),
        [
            "Module introduced.",
            "Both alpha and beta plural semantics supported for this program.",
            "Result: z",
            "Result: s(z)",
            "No more solutions.",
            "No more solutions."
        ]
    );
}

#[test]
fn harness_reports_one_line_per_failure() {
    let o = Command::new(env!("CARGO_BIN_EXE_plural-harness"))
        .args(["--suite", "cab", "--seeds", "1..10", "--depth", "3"])
        .output()
        .expect("harness runs");
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stdout));
    let out = String::from_utf8_lossy(&o.stdout);
    assert!(!out.contains("FAIL\t"), "{out}");
    assert!(out.lines().last().unwrap().contains("cab"), "{out}");
}
