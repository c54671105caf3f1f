//! Brute-force reference implementations and random instance generation
//! shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use ltlf_muc::oracle::check_satisfiability;
use ltlf_muc::{ConjunctiveSpec, Formula, SelectorSet, Trace};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random formula over `atoms` using every operator, nesting at most `depth`.
pub fn random_formula(rng: &mut ChaCha8Rng, atoms: &[&str], depth: usize) -> Formula {
    if depth == 0 || rng.gen_bool(0.2) {
        return if rng.gen_bool(0.08) {
            if rng.gen_bool(0.5) {
                Formula::True
            } else {
                Formula::False
            }
        } else {
            Formula::atom(atoms[rng.gen_range(0..atoms.len())])
        };
    }
    let sub = |rng: &mut ChaCha8Rng| random_formula(rng, atoms, depth - 1);
    match rng.gen_range(0..11) {
        0 | 1 => Formula::not(sub(rng)),
        2 => Formula::and(sub(rng), sub(rng)),
        3 => Formula::or(sub(rng), sub(rng)),
        4 => Formula::implies(sub(rng), sub(rng)),
        5 => Formula::next(sub(rng)),
        6 => Formula::weak_next(sub(rng)),
        7 => Formula::until(sub(rng), sub(rng)),
        8 => Formula::release(sub(rng), sub(rng)),
        9 => Formula::eventually(sub(rng)),
        _ => Formula::globally(sub(rng)),
    }
}

pub fn random_spec(rng: &mut ChaCha8Rng, n: usize, atoms: &[&str], depth: usize) -> ConjunctiveSpec {
    ConjunctiveSpec::new((0..n).map(|_| random_formula(rng, atoms, depth)).collect()).unwrap()
}

/// Every trace of exactly `len` states over `atoms`.
pub fn traces_of_length(atoms: &[String], len: usize) -> Vec<Trace> {
    let bits = atoms.len() * len;
    assert!(bits < 24, "too many traces to enumerate");
    (0u64..1 << bits)
        .map(|code| {
            let states = (0..len)
                .map(|t| {
                    atoms
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| code >> (t * atoms.len() + i) & 1 == 1)
                        .map(|(_, a)| a.clone())
                        .collect::<BTreeSet<String>>()
                })
                .collect();
            Trace::new(states).unwrap()
        })
        .collect()
}

/// For each length `1..=max_len`, the set of conjunct masks realized by
/// some trace of that length: bit `i-1` is set when conjunct `i` holds.
pub struct MaskTable {
    pub n: usize,
    pub by_length: Vec<BTreeSet<u64>>,
}

impl MaskTable {
    pub fn new(spec: &ConjunctiveSpec, max_len: usize) -> Self {
        let atoms: Vec<String> = spec.alphabet().iter().cloned().collect();
        let mut by_length = vec![BTreeSet::new()];
        for len in 1..=max_len {
            let masks = traces_of_length(&atoms, len)
                .iter()
                .map(|tr| {
                    spec.conjuncts()
                        .iter()
                        .enumerate()
                        .filter(|(_, f)| tr.evaluate(f, 0).unwrap())
                        .fold(0u64, |m, (i, _)| m | 1 << i)
                })
                .collect();
            by_length.push(masks);
        }
        MaskTable {
            n: spec.len(),
            by_length,
        }
    }

    /// Some trace of length at most `k` satisfies every conjunct in `set`.
    pub fn sat_within(&self, set: &SelectorSet, k: usize) -> bool {
        let want = set.to_mask();
        self.by_length[1..=k].iter().any(|ms| ms.iter().any(|m| m & want == want))
    }

    /// Minimal subsets with no model of length at most `k`.
    pub fn k_mucs(&self, k: usize) -> Vec<SelectorSet> {
        let unsat: Vec<SelectorSet> = (0u64..1 << self.n)
            .map(|m| SelectorSet::from_mask(m, self.n))
            .filter(|s| !self.sat_within(s, k))
            .collect();
        minimal_members(&unsat)
    }
}

/// Shortest model of the conjunction of `psi` up to `max_len`, by enumeration.
pub fn brute_min_length(psi: &[Formula], max_len: usize) -> Option<usize> {
    let atoms: Vec<String> = psi
        .iter()
        .flat_map(|f| f.atoms())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    (1..=max_len).find(|&len| {
        traces_of_length(&atoms, len)
            .iter()
            .any(|tr| psi.iter().all(|f| tr.evaluate(f, 0).unwrap()))
    })
}

pub fn minimal_members(sets: &[SelectorSet]) -> Vec<SelectorSet> {
    let mut out: Vec<SelectorSet> = sets
        .iter()
        .filter(|s| !sets.iter().any(|t| t != *s && t.is_subset(s)))
        .cloned()
        .collect();
    out.sort();
    out.dedup();
    out
}

/// All MUCs of `spec`, by certifying every subset with the complete oracle.
pub fn brute_mucs(spec: &ConjunctiveSpec) -> Vec<SelectorSet> {
    let n = spec.len();
    let mut verdict: HashMap<u64, bool> = HashMap::new();
    for m in 0u64..1 << n {
        let set = SelectorSet::from_mask(m, n);
        let sat = check_satisfiability(&spec.to_formula(&set)).unwrap().is_sat();
        verdict.insert(m, sat);
    }
    let unsat: Vec<SelectorSet> = verdict
        .iter()
        .filter(|(_, sat)| !**sat)
        .map(|(m, _)| SelectorSet::from_mask(*m, n))
        .collect();
    minimal_members(&unsat)
}
