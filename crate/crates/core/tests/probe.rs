mod common;

use common::{random_spec, rng, MaskTable};
use ltlf_muc::mus::enumerate_mus;
use ltlf_muc::{evaluate, Probe, ProbeResult, SelectorSet};
use rand::Rng;

#[test]
fn verdicts_match_enumeration() {
    let mut r = rng(21);
    for _ in 0..120 {
        let n = r.gen_range(1..=3);
        let spec = random_spec(&mut r, n, &["a", "b"], 3);
        let table = MaskTable::new(&spec, 3);
        for k in 1..=3 {
            let mut probe = Probe::build(&spec, k).unwrap();
            for m in 0u64..1 << n {
                let set = SelectorSet::from_mask(m, n);
                match probe.query(&set).unwrap() {
                    ProbeResult::Sat { witness } => {
                        assert!(table.sat_within(&set, k));
                        assert!(witness.len() <= k);
                        for i in set.iter() {
                            assert!(evaluate(&witness, spec.conjunct(i), 0).unwrap());
                        }
                    }
                    ProbeResult::Unsat { core } => {
                        assert!(!table.sat_within(&set, k));
                        assert!(core.is_subset(&set));
                        assert!(!table.sat_within(&core, k));
                    }
                }
            }
        }
    }
}

#[test]
fn mus_set_is_k_muc_set() {
    let mut r = rng(22);
    for _ in 0..100 {
        let spec = random_spec(&mut r, 4, &["a", "b"], 3);
        let table = MaskTable::new(&spec, 3);
        for k in 1..=3 {
            let mut found: Vec<SelectorSet> = enumerate_mus(Probe::build(&spec, k).unwrap())
                .map(Result::unwrap)
                .collect();
            found.sort();
            assert_eq!(found, table.k_mucs(k));
        }
    }
}

#[test]
fn monotone_in_set_and_depth() {
    let mut r = rng(23);
    for _ in 0..60 {
        let spec = random_spec(&mut r, 4, &["a", "b", "c"], 3);
        let mut sat = vec![vec![false; 16]; 5];
        for (k, row) in sat.iter_mut().enumerate().skip(1) {
            let mut probe = Probe::build(&spec, k).unwrap();
            for (m, cell) in row.iter_mut().enumerate() {
                *cell = probe.query(&SelectorSet::from_mask(m as u64, 4)).unwrap().is_sat();
            }
        }
        for k in 1..=4 {
            for m in 0..16usize {
                for sub in 0..16usize {
                    if sub & m == sub && sat[k][m] {
                        assert!(sat[k][sub]);
                    }
                }
                if k < 4 && sat[k][m] {
                    assert!(sat[k + 1][m]);
                }
            }
        }
    }
}
