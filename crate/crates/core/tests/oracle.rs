mod common;

use common::{brute_min_length, random_formula, rng, traces_of_length};
use ltlf_muc::oracle::{LtlfOracle, Progressor, SatOutcome};
use ltlf_muc::{ConjunctiveSpec, Probe, SelectorSet};

#[test]
fn minimum_length_matches_enumeration() {
    let mut r = rng(11);
    for _ in 0..300 {
        let psi = vec![random_formula(&mut r, &["a", "b"], 4)];
        match LtlfOracle::new().check_satisfiability(&psi).unwrap() {
            SatOutcome::Sat { length, witness } => {
                assert_eq!(witness.len(), length);
                assert!(witness.evaluate(&psi[0], 0).unwrap(), "{} on {witness}", psi[0]);
                if length <= 4 {
                    assert_eq!(brute_min_length(&psi, length), Some(length), "{}", psi[0]);
                }
            }
            SatOutcome::Unsat => assert_eq!(brute_min_length(&psi, 4), None, "{}", psi[0]),
        }
    }
}

#[test]
fn progression_agrees_with_semantics() {
    let mut r = rng(12);
    let atoms = vec!["a".to_string(), "b".to_string()];
    let traces: Vec<_> = (1..=3).flat_map(|len| traces_of_length(&atoms, len)).collect();
    for _ in 0..150 {
        let psi = vec![random_formula(&mut r, &["a", "b"], 4), random_formula(&mut r, &["a", "b"], 2)];
        let mut p = Progressor::new();
        for tr in &traces {
            let expected = psi.iter().all(|f| tr.evaluate(f, 0).unwrap());
            assert_eq!(p.accepts(&psi, tr), expected, "{} & {} on {tr}", psi[0], psi[1]);
        }
    }
}

#[test]
fn oracle_agrees_with_probe() {
    let mut r = rng(13);
    for _ in 0..150 {
        let psi = vec![random_formula(&mut r, &["a", "b"], 3), random_formula(&mut r, &["a", "b"], 3)];
        let spec = ConjunctiveSpec::new(psi.clone()).unwrap();
        let all = SelectorSet::full(2);
        let length = LtlfOracle::new().check_satisfiability(&psi).unwrap().length();
        for k in 1..=6 {
            let sat = Probe::build(&spec, k).unwrap().query(&all).unwrap().is_sat();
            let expected = length != 0 && k >= length;
            assert_eq!(sat, expected, "{} & {} at depth {k}, oracle length {length}", psi[0], psi[1]);
        }
    }
}

#[test]
fn state_count_below_cap() {
    let mut r = rng(14);
    for _ in 0..200 {
        let psi = vec![random_formula(&mut r, &["a", "b", "c"], 5)];
        let (_, stats) = LtlfOracle::new().check_with_stats(&psi).unwrap();
        if stats.subformulas < 60 {
            assert!(stats.states as u64 <= 1u64 << stats.subformulas);
        }
    }
}
