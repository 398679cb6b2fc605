mod common;

use proptest::prelude::*;

use common::{f, sequent};
use lericone::formula::Sequent;
use lericone::semantics::{decide, Status, DEFAULT_CAP};
use lericone::seq::Mode;
use lericone::tableau::{prove, tableau_status, ProofTree, TableauOutcome, TableauProof};

fn depth(t: &ProofTree) -> usize {
    match t {
        ProofTree::Apply { branches, .. } => 1 + branches.iter().map(|b| depth(&b.then)).max().unwrap_or(0),
        _ => 0,
    }
}

fn mode() -> impl Strategy<Value = Mode> {
    prop_oneof![Just(Mode::Plain), Just(Mode::Faithful)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn proofs_replay_and_countermodels_falsify(sq in sequent(3), m in mode()) {
        let outcome = prove(&sq, m).unwrap();
        prop_assert_eq!(outcome.status(), tableau_status(&sq, m));
        prop_assert_eq!(outcome.status(), decide(&sq, m, DEFAULT_CAP).unwrap().status);
        match outcome {
            TableauOutcome::Proved(proof) => {
                proof.replay().unwrap();
                // each step on a branch consumes a distinct compound occurrence
                let bound: usize = sq.formulas().map(|a| a.connectives()).sum();
                prop_assert!(depth(&proof.tree) <= bound);
                let text = serde_json::to_string(&proof).unwrap();
                let back: TableauProof = serde_json::from_str(&text).unwrap();
                back.replay().unwrap();
            }
            TableauOutcome::Refuted { countermodel, .. } => prop_assert!(countermodel.falsifies(&sq)),
        }
    }
}

#[test]
fn known_verdicts() {
    let cases = [
        ("p1 -> p1", true, true),
        ("~~p1 -> p1", false, true),
        ("p1 -> ~~p1", false, true),
        ("(p1 -> p2) | (p2 -> p3)", true, true),
        ("(p1 -> (p1 -> p2)) -> (p1 -> p2)", false, false),
        ("p1 -> (p2 | ~p2)", false, false),
    ];
    for (text, plain, faithful) in cases {
        let sq = Sequent::theorem(f(text));
        assert_eq!(prove(&sq, Mode::Plain).unwrap().status() == Status::Valid, plain, "{text} plain");
        assert_eq!(prove(&sq, Mode::Faithful).unwrap().status() == Status::Valid, faithful, "{text} faithful");
    }
}

#[test]
fn tampered_proofs_fail_replay() {
    let sq = Sequent::theorem(f("(p1 & p2) -> p1"));
    let TableauOutcome::Proved(mut proof) = prove(&sq, Mode::Plain).unwrap() else { panic!("valid") };
    proof.sequent = Sequent::theorem(f("(p1 & p2) -> p2"));
    assert!(proof.replay().is_err());
}
