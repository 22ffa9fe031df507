use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use super::SemanticsMode;
use crate::program::{Plurality, Program};
use crate::subst::{is_compressible, question_combine, DisjSubst};
use crate::term::{apply_subst, Subst, Term};

#[allow(clippy::upper_case_acronyms)]
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RuleTag {
    B,
    RR,
    DC,
    OR,
    APOR,
    BPOR,
    SAPOR,
    SBPOR,
}

impl RuleTag {
    pub fn is_outer(self) -> bool {
        !matches!(self, RuleTag::B | RuleTag::RR | RuleTag::DC)
    }
}

impl fmt::Display for RuleTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            RuleTag::B => "B",
            RuleTag::RR => "RR",
            RuleTag::DC => "DC",
            RuleTag::OR => "OR",
            RuleTag::APOR => "APOR",
            RuleTag::BPOR => "BPOR",
            RuleTag::SAPOR => "SAPOR",
            RuleTag::SBPOR => "SBPOR",
        };
        f.write_str(s)
    }
}

/// A proof tree for a statement `expr ↠ value`.
///
/// Outer-reduction nodes record the rule index, the parameter set chosen
/// for each argument and their combination `⊎ ?Θi`. Their children are the
/// argument premises `ei ↠ pi θij`, argument by argument, followed by the
/// body premise `r θ ↠ value`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivationTrace {
    pub tag: RuleTag,
    pub expr: Term,
    pub value: Term,
    pub rule: Option<usize>,
    pub thetas: Vec<Vec<Subst>>,
    pub subst: Option<DisjSubst>,
    pub children: Vec<DerivationTrace>,
}

impl DerivationTrace {
    pub fn leaf(tag: RuleTag, expr: Term, value: Term) -> Self {
        DerivationTrace { tag, expr, value, rule: None, thetas: Vec::new(), subst: None, children: Vec::new() }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        1 + self.children.iter().map(DerivationTrace::size).sum::<usize>()
    }

    /// Largest number of outer-reduction nodes on a root-to-leaf path.
    pub fn or_depth(&self) -> usize {
        let below = self.children.iter().map(DerivationTrace::or_depth).max().unwrap_or(0);
        below + usize::from(self.tag.is_outer())
    }

    fn render(&self, indent: usize, out: &mut String) {
        out.push_str(&format!("{:width$}{} {} ->> {}", "", self.tag, self.expr, self.value, width = indent));
        if let Some(r) = self.rule {
            out.push_str(&format!("  rule {}", r));
        }
        if let Some(s) = &self.subst {
            out.push_str(&format!("  {}", s));
        }
        out.push('\n');
        for c in &self.children {
            c.render(indent + 2, out);
        }
    }
}

impl fmt::Display for DerivationTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        self.render(0, &mut s);
        f.write_str(s.trim_end())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceError {
    pub statement: String,
    pub reason: String,
}

impl fmt::Display for TraceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.statement, self.reason)
    }
}

impl core::error::Error for TraceError {}

fn fail(node: &DerivationTrace, reason: &str) -> Result<(), TraceError> {
    Err(TraceError { statement: format!("{} ->> {}", node.expr, node.value), reason: reason.into() })
}

/// Checks every inference of `trace` against the rules of the calculus
/// selected by `mode`.
pub fn verify_trace(program: &Program, mode: SemanticsMode, trace: &DerivationTrace) -> Result<(), TraceError> {
    let node = trace;
    match node.tag {
        RuleTag::B => {
            if !node.value.is_bottom() || !node.children.is_empty() {
                return fail(node, "B concludes only bot");
            }
            Ok(())
        }
        RuleTag::RR => {
            if !node.expr.is_var() || node.value != node.expr || !node.children.is_empty() {
                return fail(node, "RR needs a variable reducing to itself");
            }
            Ok(())
        }
        RuleTag::DC => {
            let (Term::Con(c, es), Term::Con(d, ts)) = (&node.expr, &node.value) else {
                return fail(node, "DC needs constructor-rooted expression and value");
            };
            if c != d || es.len() != ts.len() || node.children.len() != es.len() {
                return fail(node, "DC premises do not match the arguments");
            }
            for ((child, e), t) in node.children.iter().zip(es).zip(ts) {
                if &child.expr != e || &child.value != t {
                    return fail(node, "DC premise statement mismatch");
                }
                verify_trace(program, mode, child)?;
            }
            Ok(())
        }
        tag => {
            if tag != mode.or_tag() {
                return fail(node, "outer-reduction rule does not belong to this calculus");
            }
            let Term::Fun(f, args) = &node.expr else {
                return fail(node, "outer reduction needs a function application");
            };
            let Some(idx) = node.rule.filter(|&i| i < program.rules().len()) else {
                return fail(node, "missing or invalid rule index");
            };
            let rule = program.rule(idx);
            if rule.function() != f || rule.patterns().len() != args.len() || node.thetas.len() != args.len() {
                return fail(node, "rule does not fit the application");
            }
            let mut theta = DisjSubst::new();
            let mut k = 0;
            for (i, set) in node.thetas.iter().enumerate() {
                let pattern = &rule.patterns()[i];
                let pvars = pattern.var_set();
                if set.is_empty() {
                    return fail(node, "empty parameter set");
                }
                if set.iter().any(|s| !s.is_csubst() || s.domain().any(|x| !pvars.contains(x))) {
                    return fail(node, "parameter substitution outside the pattern variables");
                }
                match mode.plurality(program, f, i) {
                    Plurality::Singular if set.len() != 1 => {
                        return fail(node, "singular argument with more than one substitution")
                    }
                    Plurality::Plural if mode.is_beta() && !is_compressible(set) => {
                        return fail(node, "parameter set is not compressible")
                    }
                    _ => {}
                }
                for s in set {
                    let Some(child) = node.children.get(k) else {
                        return fail(node, "missing argument premise");
                    };
                    if child.expr != args[i] || child.value != apply_subst(pattern, s) {
                        return fail(node, "argument premise statement mismatch");
                    }
                    verify_trace(program, mode, child)?;
                    k += 1;
                }
                let combined = question_combine(set).map_err(|_| TraceError {
                    statement: format!("{}", node.expr),
                    reason: "empty parameter set".into(),
                })?;
                theta = theta.disjoint_union(&combined.dedup());
            }
            if node.subst.as_ref() != Some(&theta) {
                return fail(node, "recorded substitution is not the combination of the parameter sets");
            }
            if node.children.len() != k + 1 {
                return fail(node, "wrong number of premises");
            }
            let body = &node.children[k];
            if body.expr != theta.apply(&rule.rhs) || body.value != node.value {
                return fail(node, "body premise statement mismatch");
            }
            verify_trace(program, mode, body)
        }
    }
}
