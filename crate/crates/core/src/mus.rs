//! Lazy enumeration of minimal unsatisfiable subsets over a monotone
//! subset oracle, by exploring the power-set lattice.
//!
//! The exploration map is a CNF over one meta-variable per selector whose
//! models are the subsets not yet classified. Each round takes a maximal
//! unexplored seed. A satisfiable seed is then a maximal satisfiable subset
//! and its down-set is blocked; an unsatisfiable seed's core is shrunk to a
//! MUS whose up-set is blocked.

use crate::error::Error;
use crate::sat::{ClauseDb, Lit, SatResult, Var};
use crate::syntax::SelectorSet;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SubsetCheck {
    Sat,
    /// A subset of the queried set that is itself unsatisfiable.
    Unsat(SelectorSet),
}

/// Satisfiability of subsets of `{1..=universe}`. Must be monotone:
/// subsets of satisfiable sets are satisfiable.
pub trait SubsetOracle {
    fn universe(&self) -> usize;
    fn check(&mut self, set: &SelectorSet) -> Result<SubsetCheck, Error>;
}

impl<O: SubsetOracle + ?Sized> SubsetOracle for &mut O {
    fn universe(&self) -> usize {
        (**self).universe()
    }

    fn check(&mut self, set: &SelectorSet) -> Result<SubsetCheck, Error> {
        (**self).check(set)
    }
}

pub struct ExplorationMap {
    db: ClauseDb,
    vars: Vec<Var>,
    up_blocks: Vec<SelectorSet>,
    down_blocks: Vec<SelectorSet>,
}

impl ExplorationMap {
    pub fn new(n: usize) -> Self {
        let mut db = ClauseDb::new();
        db.set_default_phase(true);
        let vars = (0..n).map(|_| db.new_var()).collect();
        ExplorationMap {
            db,
            vars,
            up_blocks: Vec::new(),
            down_blocks: Vec::new(),
        }
    }

    pub fn universe(&self) -> usize {
        self.vars.len()
    }

    fn meta(&self, index: usize) -> Var {
        self.vars[index - 1]
    }

    /// An unexplored subset to which no further element can be added
    /// without entering an explored region, or `None` when the whole
    /// lattice is classified.
    pub fn next_seed(&mut self) -> Result<Option<SelectorSet>, Error> {
        let model = match self.db.solve(&[])? {
            SatResult::Sat(m) => m,
            SatResult::Unsat(_) => return Ok(None),
        };
        let mut seed: Vec<usize> = (1..=self.universe())
            .filter(|&i| model.var_value(self.meta(i)))
            .collect();
        // Adding elements never violates a down-block, so only the
        // up-blocks can stop the growth.
        for i in 1..=self.universe() {
            if seed.contains(&i) {
                continue;
            }
            seed.push(i);
            let candidate = SelectorSet::new(seed.iter().copied());
            if self.up_blocks.iter().any(|m| m.is_subset(&candidate)) {
                seed.pop();
            }
        }
        Ok(Some(SelectorSet::new(seed)))
    }

    /// Marks every superset of `mus` as explored.
    pub fn block_up(&mut self, mus: &SelectorSet) {
        let clause: Vec<Lit> = mus.iter().map(|i| self.meta(i).neg()).collect();
        self.db.add_clause(&clause);
        self.up_blocks.push(mus.clone());
    }

    /// Marks every subset of `set` as explored.
    pub fn block_down(&mut self, set: &SelectorSet) {
        let clause: Vec<Lit> = (1..=self.universe())
            .filter(|&i| !set.contains(i))
            .map(|i| self.meta(i).pos())
            .collect();
        self.db.add_clause(&clause);
        self.down_blocks.push(set.clone());
    }

    pub fn is_unexplored(&self, set: &SelectorSet) -> bool {
        !self.up_blocks.iter().any(|m| m.is_subset(set))
            && !self.down_blocks.iter().any(|d| set.is_subset(d))
    }
}

/// Deletion-based minimization of a set known to be unsatisfiable.
/// Candidates are removed from the highest index down; every failed
/// removal's core replaces the working set.
fn shrink_known_unsat<O: SubsetOracle>(oracle: &mut O, set: SelectorSet) -> Result<SelectorSet, Error> {
    let mut current = set;
    let mut critical = SelectorSet::empty();
    loop {
        let Some(s) = current.iter().rev().find(|&s| !critical.contains(s)) else {
            break;
        };
        let trial = current.without(s);
        match oracle.check(&trial)? {
            SubsetCheck::Sat => critical = critical.with(s),
            SubsetCheck::Unsat(core) => {
                debug_assert!(core.is_subset(&trial));
                current = core;
            }
        }
    }
    Ok(current)
}

/// Shrinks the unsatisfiable `set` to a minimal unsatisfiable subset.
///
/// # Panics
///
/// If `set` is satisfiable.
pub fn shrink<O: SubsetOracle>(oracle: &mut O, set: &SelectorSet) -> Result<SelectorSet, Error> {
    match oracle.check(set)? {
        SubsetCheck::Sat => panic!("shrink called on a satisfiable set {set}"),
        SubsetCheck::Unsat(core) => shrink_known_unsat(oracle, core),
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct MusStats {
    pub seeds: u64,
    pub sat_seeds: u64,
    pub muses: u64,
}

/// Stream of the MUSes of an oracle; each is yielded exactly once.
pub struct MusEnumerator<O> {
    oracle: O,
    map: ExplorationMap,
    done: bool,
    stats: MusStats,
}

impl<O: SubsetOracle> MusEnumerator<O> {
    pub fn new(oracle: O) -> Self {
        let map = ExplorationMap::new(oracle.universe());
        MusEnumerator {
            oracle,
            map,
            done: false,
            stats: MusStats::default(),
        }
    }

    pub fn oracle(&self) -> &O {
        &self.oracle
    }

    pub fn oracle_mut(&mut self) -> &mut O {
        &mut self.oracle
    }

    pub fn into_oracle(self) -> O {
        self.oracle
    }

    pub fn exploration_map(&self) -> &ExplorationMap {
        &self.map
    }

    pub fn stats(&self) -> MusStats {
        self.stats
    }

    /// True once the lattice is fully explored.
    pub fn is_exhausted(&self) -> bool {
        self.done
    }

    fn step(&mut self) -> Result<Option<SelectorSet>, Error> {
        while let Some(seed) = self.map.next_seed()? {
            self.stats.seeds += 1;
            match self.oracle.check(&seed)? {
                SubsetCheck::Sat => {
                    self.stats.sat_seeds += 1;
                    self.map.block_down(&seed);
                }
                SubsetCheck::Unsat(core) => {
                    let mus = shrink_known_unsat(&mut self.oracle, core)?;
                    self.map.block_up(&mus);
                    self.stats.muses += 1;
                    return Ok(Some(mus));
                }
            }
        }
        Ok(None)
    }
}

impl<O: SubsetOracle> Iterator for MusEnumerator<O> {
    type Item = Result<SelectorSet, Error>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        match self.step() {
            Ok(Some(mus)) => Some(Ok(mus)),
            Ok(None) => {
                self.done = true;
                None
            }
            Err(e) => {
                self.done = true;
                Some(Err(e))
            }
        }
    }
}

/// MUSes of `oracle`, lazily.
pub fn enumerate_mus<O: SubsetOracle>(oracle: O) -> MusEnumerator<O> {
    MusEnumerator::new(oracle)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Unsatisfiable iff the set contains one of `bad`. The returned core is
    /// the whole query, so shrinking has to do all the work.
    struct Family {
        n: usize,
        bad: Vec<SelectorSet>,
        calls: usize,
    }

    impl SubsetOracle for Family {
        fn universe(&self) -> usize {
            self.n
        }

        fn check(&mut self, set: &SelectorSet) -> Result<SubsetCheck, Error> {
            self.calls += 1;
            Ok(if self.bad.iter().any(|b| b.is_subset(set)) {
                SubsetCheck::Unsat(set.clone())
            } else {
                SubsetCheck::Sat
            })
        }
    }

    fn minimal(bad: &[SelectorSet]) -> Vec<SelectorSet> {
        let mut out: Vec<SelectorSet> = bad
            .iter()
            .filter(|b| !bad.iter().any(|c| c != *b && c.is_subset(b)))
            .cloned()
            .collect();
        out.sort();
        out.dedup();
        out
    }

    fn s(ix: &[usize]) -> SelectorSet {
        SelectorSet::new(ix.iter().copied())
    }

    #[test]
    fn contradiction_pair() {
        let oracle = Family {
            n: 3,
            bad: vec![s(&[1, 2])],
            calls: 0,
        };
        let found: Vec<_> = enumerate_mus(oracle).map(Result::unwrap).collect();
        assert_eq!(found, vec![s(&[1, 2])]);
    }

    #[test]
    fn nothing_unsat() {
        let oracle = Family {
            n: 2,
            bad: vec![],
            calls: 0,
        };
        let mut e = enumerate_mus(oracle);
        assert!(e.next().is_none());
        assert!(e.is_exhausted());
    }

    #[test]
    fn shrink_removes_redundant() {
        let mut oracle = Family {
            n: 3,
            bad: vec![s(&[1, 2])],
            calls: 0,
        };
        assert_eq!(shrink(&mut oracle, &s(&[1, 2, 3])).unwrap(), s(&[1, 2]));
        assert_eq!(shrink(&mut oracle, &s(&[1, 2])).unwrap(), s(&[1, 2]));
    }

    #[test]
    #[should_panic(expected = "satisfiable")]
    fn shrink_rejects_sat() {
        let mut oracle = Family {
            n: 3,
            bad: vec![s(&[1, 2])],
            calls: 0,
        };
        let _ = shrink(&mut oracle, &s(&[1, 3]));
    }

    #[test]
    fn every_round_explores_something() {
        let oracle = Family {
            n: 5,
            bad: vec![s(&[1, 2]), s(&[2, 3, 4]), s(&[5])],
            calls: 0,
        };
        let mut e = enumerate_mus(oracle);
        let count = |m: &ExplorationMap| (0u64..32).filter(|&x| m.is_unexplored(&SelectorSet::from_mask(x, 5))).count();
        let mut before = count(e.exploration_map());
        assert_eq!(before, 32);
        while e.next().is_some() {
            let after = count(e.exploration_map());
            assert!(after < before);
            before = after;
        }
        assert_eq!(count(e.exploration_map()), 0);
    }

    proptest! {
        #[test]
        fn finds_exactly_the_minimal_members(
            n in 1usize..=7,
            masks in prop::collection::vec(1u64..128, 0..6),
        ) {
            let bad: Vec<SelectorSet> = masks
                .iter()
                .map(|&m| SelectorSet::from_mask(m & ((1 << n) - 1), n))
                .filter(|b| !b.is_empty())
                .collect();
            let expected = minimal(&bad);
            let oracle = Family { n, bad, calls: 0 };
            let mut found: Vec<SelectorSet> = enumerate_mus(oracle).map(Result::unwrap).collect();
            let emitted = found.len();
            found.sort();
            found.dedup();
            prop_assert_eq!(emitted, found.len());
            prop_assert_eq!(found, expected);
        }
    }
}
