//! Browser bindings: annotate a formula, prove a sequent (with a countermodel
//! when it fails), and apply the Gödel coding. Every export takes text and
//! returns a JSON string; failures come back as `{"error": "..."}`.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use lericone::formula::{Formula, OccurrencePath, Sequent};
use lericone::seq::{annotate_from, LericoneSeq, Mode};
use lericone::subst::godel_substitute;
use lericone::tableau::{prove, positive_atoms, TableauOutcome};

fn respond(result: Result<Value, String>) -> String {
    match result {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e }).to_string(),
    }
}

/// Nodes in pre-order with depth, text and sequence.
pub fn annotate_value(formula: &str) -> Result<Value, String> {
    let f: Formula = formula.parse().map_err(|e| format!("{e}"))?;
    let mut nodes = Vec::new();
    annotate_from(&f, &LericoneSeq::empty(), &mut OccurrencePath::root(), &mut |path, seq, node| {
        nodes.push(json!({
            "depth": path.steps().len(),
            "path": path.to_string(),
            "text": node.to_string(),
            "seq": seq.to_string(),
        }));
    });
    Ok(json!({ "formula": f.to_string(), "nodes": nodes }))
}

pub fn prove_value(sequent: &str, mode: &str) -> Result<Value, String> {
    let s: Sequent = sequent.parse().map_err(|e| format!("{e}"))?;
    let mode: Mode = mode.parse().map_err(|e| format!("{e}"))?;
    match prove(&s, mode).map_err(|e| format!("{e}"))? {
        TableauOutcome::Proved(p) => Ok(json!({
            "sequent": s.to_string(),
            "mode": mode.name(),
            "status": "valid",
            "steps": p.steps(),
            "proof": p,
        })),
        TableauOutcome::Refuted { branch, countermodel } => {
            let true_at: Vec<String> = positive_atoms(&countermodel).iter().map(|(x, p)| format!("({x:?}, p{p})")).collect();
            Ok(json!({
                "sequent": s.to_string(),
                "mode": mode.name(),
                "status": "invalid",
                "branch": branch.iter().map(|t| format!("{t:?}")).collect::<Vec<_>>(),
                "true_at": true_at,
                "countermodel": countermodel,
                "falsifies": countermodel.falsifies(&s),
            }))
        }
    }
}

pub fn godel_value(formula: &str) -> Result<Value, String> {
    let f: Formula = formula.parse().map_err(|e| format!("{e}"))?;
    let image = godel_substitute(&f).map_err(|e| format!("{e}"))?;
    Ok(json!({ "input": f.to_string(), "output": image.to_string() }))
}

#[wasm_bindgen]
pub fn annotate(formula: &str) -> String {
    respond(annotate_value(formula))
}

#[wasm_bindgen]
pub fn prove_sequent(sequent: &str, mode: &str) -> String {
    respond(prove_value(sequent, mode))
}

#[wasm_bindgen]
pub fn godel(formula: &str) -> String {
    respond(godel_value(formula))
}
