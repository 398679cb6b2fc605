use std::fmt::Write;

use lericone::formula::{Formula, OccurrencePath};
use lericone::semantics::Status;
use lericone::seq::{annotate_from, LericoneSeq};
use lericone::tableau::ProofTree;

use crate::Row;

/// One line per node, indented by depth, with the node's sequence.
pub fn annotation(f: &Formula) -> String {
    let mut out = String::new();
    annotate_from(f, &LericoneSeq::empty(), &mut OccurrencePath::root(), &mut |path, seq, node| {
        let indent = "  ".repeat(path.steps().len());
        let text = format!("{indent}{node}");
        let _ = writeln!(out, "{text:<40} {seq:?}");
    });
    out
}

fn status(s: Status) -> &'static str {
    match s {
        Status::Valid => "valid",
        Status::Invalid => "invalid",
    }
}

pub fn row(r: &Row) -> String {
    let mut out = String::new();
    let methods: Vec<String> = r.methods.iter().map(|(name, s)| format!("{name}={}", status(*s))).collect();
    let _ = writeln!(out, "{:<8} {:<9} {}    [{}]", status(r.status), r.mode.name(), r.sequent, methods.join(" "));
    if let Some(m) = &r.countermodel {
        let check = if r.verified == Some(true) { "falsifies" } else { "DOES NOT falsify" };
        let _ = writeln!(out, "  countermodel {m:?} ({check})");
    }
    if let Some(p) = &r.proof {
        let _ = writeln!(out, "  closed tableau, {} steps:", p.steps());
        tree(&p.tree, 2, &mut out);
    }
    out
}

fn tree(t: &ProofTree, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    match t {
        ProofTree::Apply { consumed, rule, branches } => {
            let _ = writeln!(out, "{pad}{consumed:?}  by {}", rule.name());
            let split = branches.len() > 1;
            for b in branches {
                let added: Vec<String> = b.added.iter().map(|t| format!("{t:?}")).collect();
                let _ = writeln!(out, "{pad}{} {}", if split { "|" } else { "+" }, added.join(" "));
                tree(&b.then, depth + usize::from(split), out);
            }
        }
        ProofTree::Closed(c) => {
            let _ = writeln!(out, "{pad}x {:?} / {:?}", c.positive, c.negative);
        }
        ProofTree::Open => {
            let _ = writeln!(out, "{pad}open");
        }
    }
}
