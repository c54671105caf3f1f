mod common;

use common::{brute_mucs, random_spec, rng};
use ltlf_muc::engine::{depth_cap, Event, RunSummary};
use ltlf_muc::oracle::check_satisfiability;
use ltlf_muc::{enumerate_mucs, ConjunctiveSpec, EngineConfig, SelectorSet};
use rand::Rng;

struct Run {
    mucs: Vec<SelectorSet>,
    deepens: Vec<(usize, usize)>,
    summary: RunSummary,
    cache_len: usize,
}

fn run(spec: &ConjunctiveSpec, pipelined: bool) -> Run {
    let mut stream = enumerate_mucs(
        spec,
        EngineConfig {
            pipelined,
            ..EngineConfig::default()
        },
    );
    let mut mucs = Vec::new();
    let mut deepens = Vec::new();
    let mut summary = None;
    for event in stream.by_ref() {
        match event {
            Event::Muc(r) => mucs.push(r.conjuncts),
            Event::Deepen { from_k, to_k, .. } => deepens.push((from_k, to_k)),
            Event::Disproved { .. } => {}
            Event::Finished(s) => summary = Some(s),
        }
    }
    Run {
        mucs,
        deepens,
        summary: summary.expect("summary event"),
        cache_len: stream.cache().len(),
    }
}

#[test]
fn emitted_set_is_every_muc() {
    let mut r = rng(31);
    for _ in 0..120 {
        let n = r.gen_range(1..=5);
        let spec = random_spec(&mut r, n, &["a", "b", "c"], 3);
        let out = run(&spec, false);
        assert!(out.summary.complete);
        assert!(out.summary.error.is_none());

        // Soundness of each emission, straight from the definition.
        for m in &out.mucs {
            assert!(!check_satisfiability(&spec.to_formula(m)).unwrap().is_sat());
            for i in m.iter() {
                assert!(check_satisfiability(&spec.to_formula(&m.without(i))).unwrap().is_sat());
            }
        }

        let mut found = out.mucs.clone();
        found.sort();
        let emitted = found.len();
        found.dedup();
        assert_eq!(found.len(), emitted, "duplicate emission");
        assert_eq!(found, brute_mucs(&spec));

        assert_eq!(out.summary.certifications, out.cache_len, "a candidate was certified twice");
        for (from, to) in &out.deepens {
            assert!(to > from);
        }
        assert!(out.summary.final_k <= depth_cap(&spec));
    }
}

#[test]
fn pipelined_matches_sequential() {
    let mut r = rng(32);
    for _ in 0..40 {
        let n = r.gen_range(2..=5);
        let spec = random_spec(&mut r, n, &["a", "b"], 3);
        let seq = run(&spec, false);
        let par = run(&spec, true);
        assert_eq!(seq.mucs, par.mucs);
        assert_eq!(seq.deepens, par.deepens);
        assert_eq!(seq.summary.final_k, par.summary.final_k);
        assert!(par.summary.complete);
    }
}
