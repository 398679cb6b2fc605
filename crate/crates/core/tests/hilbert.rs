use lericone::formula::Formula;
use lericone::hilbert::{check_proof, transform_proof, HilbertProof, Justification, Line, Logic, RuleId};
use lericone::random::{proof, proof_hints, rng, substitution};
use lericone::semantics::{decide, DEFAULT_CAP};
use lericone::seq::{LericoneSeq, Mode};
use lericone::subst::Keying;

fn mode_for(logic: Logic) -> Mode {
    match logic {
        Logic::BM => Mode::Plain,
        Logic::B => Mode::Faithful,
    }
}

#[test]
fn transformed_proofs_conclude_the_image() {
    let mut r = rng(11);
    for logic in [Logic::BM, Logic::B] {
        let keyings: &[Keying] = match logic {
            Logic::BM => &[Keying::Uniform, Keying::Exact, Keying::Faithful],
            Logic::B => &[Keying::Uniform, Keying::Faithful],
        };
        for i in 0..120 {
            let pr = proof(&mut r, logic, 8, 3, 8);
            let hints = proof_hints(&pr);
            let sigma = substitution(&mut r, keyings[i % keyings.len()], 3, &hints, 4, 1);
            let out = transform_proof(&pr, &sigma).unwrap();
            check_proof(&out).unwrap();
            let expected = sigma.apply(&LericoneSeq::empty(), pr.conclusion().unwrap());
            assert_eq!(out.conclusion(), Some(&expected));
            let verdict = decide(&lericone::formula::Sequent::theorem(expected.clone()), mode_for(logic), DEFAULT_CAP).unwrap();
            assert!(verdict.is_valid(), "{expected} from {logic:?} proof under {sigma:?}");
        }
    }
}

#[test]
fn b_proofs_refuse_exact_tables() {
    let pr = proof(&mut rng(5), Logic::B, 4, 2, 8);
    let mut sigma = lericone::subst::LericoneSubstitution::identity(Keying::Exact);
    sigma.insert(&"c".parse().unwrap(), lericone::formula::Atom::p(1), Formula::atom(2));
    assert!(transform_proof(&pr, &sigma).is_err());
}

#[test]
fn theorems_are_valid() {
    let mut r = rng(12);
    for logic in [Logic::BM, Logic::B] {
        for _ in 0..100 {
            let pr = proof(&mut r, logic, 10, 3, 10);
            for line in &pr.lines {
                let sq = lericone::formula::Sequent::theorem(line.formula.clone());
                assert!(decide(&sq, mode_for(logic), DEFAULT_CAP).unwrap().is_valid(), "{} in {logic:?}", line.formula);
            }
        }
    }
}

#[test]
fn json_round_trip_and_rejections() {
    let pr = proof(&mut rng(13), Logic::B, 8, 3, 10);
    assert_eq!(HilbertProof::from_json(&pr.to_json()).unwrap(), pr);

    let bad = HilbertProof {
        logic: Logic::BM,
        lines: vec![
            Line { formula: "p1 -> p1".parse().unwrap(), just: Justification::Axiom { axiom: "A1".into(), bind: None } },
            Line { formula: "~p1 -> ~p1".parse().unwrap(), just: Justification::Rule { rule: RuleId::R5, from: vec![0] } },
        ],
    };
    assert!(check_proof(&bad).is_err());
    let premise = r#"{"logic":"BM","lines":[{"formula":"p1","just":{"premise":true}}]}"#;
    assert!(check_proof(&HilbertProof::from_json(premise).unwrap()).is_err());
}
