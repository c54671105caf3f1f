//! Complete LTLf satisfiability by progression.
//!
//! A formula is put in negation normal form and every obligation is expanded
//! into symbolic transitions: a cube over the atoms plus the obligations that
//! must hold from the next position on. A state is a set of obligations read
//! as a conjunction. Breadth-first search over states gives the minimum model
//! length together with a witness trace.

mod nnf;

use std::collections::{BTreeSet, HashMap};
use std::rc::Rc;

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::syntax::{Formula, State, Trace};

use nnf::{Arena, AtomSet, NId, Transition};

/// Default cap on the number of distinct states explored per call.
pub const DEFAULT_STATE_BUDGET: usize = 1 << 22;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SatOutcome {
    Unsat,
    /// `length` is the minimum length of a model; `witness` is one of them.
    Sat { length: usize, witness: Trace },
}

impl SatOutcome {
    pub fn is_sat(&self) -> bool {
        matches!(self, SatOutcome::Sat { .. })
    }

    /// Minimum model length, or 0 when unsatisfiable.
    pub fn length(&self) -> usize {
        match self {
            SatOutcome::Unsat => 0,
            SatOutcome::Sat { length, .. } => *length,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct OracleStats {
    pub states: usize,
    /// Distinct normalized subformulas; states are sets of these.
    pub subformulas: usize,
}

#[derive(Clone, Debug)]
pub struct LtlfOracle {
    pub max_states: usize,
    pub limits: Limits,
}

impl Default for LtlfOracle {
    fn default() -> Self {
        LtlfOracle {
            max_states: DEFAULT_STATE_BUDGET,
            limits: Limits::none(),
        }
    }
}

type Obligation = Vec<NId>;

fn transitions_of(arena: &mut Arena, obligation: &[NId]) -> Vec<Transition> {
    let mut acc = vec![Transition::empty()];
    for &o in obligation {
        let e = arena.expand(o);
        acc = acc.iter().flat_map(|a| e.iter().filter_map(move |b| a.join(b))).collect();
        if acc.is_empty() {
            break;
        }
    }
    acc
}

fn successor(arena: &Arena, t: &Transition) -> Option<Obligation> {
    arena.obligation(t.strong.iter().chain(&t.weak).copied())
}

fn state_of(arena: &Arena, atoms: &AtomSet) -> State {
    atoms.iter().map(|a| arena.atom_name(a).to_string()).collect()
}

impl LtlfOracle {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_max_states(mut self, max_states: usize) -> Self {
        self.max_states = max_states;
        self
    }

    pub fn with_limits(mut self, limits: Limits) -> Self {
        self.limits = limits;
        self
    }

    pub fn check_satisfiability(&self, psi: &[Formula]) -> Result<SatOutcome> {
        self.check_with_stats(psi).map(|(o, _)| o)
    }

    /// Decides `psi` (read as a conjunction) and reports how many states the
    /// search visited. The state count never exceeds `2^subformulas`.
    pub fn check_with_stats(&self, psi: &[Formula]) -> Result<(SatOutcome, OracleStats)> {
        let mut arena = Arena::default();
        let roots: Vec<NId> = psi.iter().map(|f| arena.convert(f, true)).collect();
        let mut stats = OracleStats::default();
        let Some(init) = arena.obligation(roots) else {
            stats.subformulas = arena.len();
            return Ok((SatOutcome::Unsat, stats));
        };

        // Visited states with the step that first reached them.
        let mut index: HashMap<Rc<Obligation>, usize> = HashMap::new();
        let mut parent: Vec<Option<(usize, AtomSet)>> = Vec::new();
        let mut layer: Vec<(usize, Rc<Obligation>)> = Vec::new();
        let init = Rc::new(init);
        index.insert(Rc::clone(&init), 0);
        parent.push(None);
        layer.push((0, init));

        let mut depth = 0usize;
        while !layer.is_empty() {
            let mut next_layer = Vec::new();
            for (sid, obligation) in &layer {
                if *sid % 256 == 0 {
                    self.limits.check()?;
                }
                let ts = transitions_of(&mut arena, obligation);
                if let Some(t) = ts.iter().find(|t| t.strong.is_empty()) {
                    let mut states = vec![state_of(&arena, &t.pos)];
                    let mut cur = *sid;
                    while let Some((p, atoms)) = &parent[cur] {
                        states.push(state_of(&arena, atoms));
                        cur = *p;
                    }
                    states.reverse();
                    debug_assert_eq!(states.len(), depth + 1);
                    stats.states = parent.len();
                    stats.subformulas = arena.len();
                    let witness = Trace::new(states).expect("witness is non-empty");
                    return Ok((
                        SatOutcome::Sat {
                            length: depth + 1,
                            witness,
                        },
                        stats,
                    ));
                }
                for t in &ts {
                    let Some(succ) = successor(&arena, t) else {
                        continue;
                    };
                    if index.contains_key(&succ) {
                        continue;
                    }
                    if parent.len() >= self.max_states {
                        return Err(Error::StateBudget(self.max_states));
                    }
                    let succ = Rc::new(succ);
                    let id = parent.len();
                    index.insert(Rc::clone(&succ), id);
                    parent.push(Some((*sid, t.pos.clone())));
                    next_layer.push((id, succ));
                }
            }
            layer = next_layer;
            depth += 1;
        }
        stats.states = parent.len();
        stats.subformulas = arena.len();
        Ok((SatOutcome::Unsat, stats))
    }
}

/// [`LtlfOracle::check_satisfiability`] with default budgets.
pub fn check_satisfiability(psi: &[Formula]) -> Result<SatOutcome> {
    LtlfOracle::default().check_satisfiability(psi)
}

/// What the remaining suffix of a trace must satisfy: a disjunction of
/// obligation sets. Only meaningful for the [`Progressor`] that built it.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ObligationState {
    options: BTreeSet<Obligation>,
}

impl ObligationState {
    /// Nothing left to satisfy.
    pub fn is_trivial(&self) -> bool {
        self.options.contains(&Vec::new())
    }

    /// Number of alternative obligation sets.
    pub fn width(&self) -> usize {
        self.options.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Progress {
    Accept,
    Reject,
    Continue(ObligationState),
}

/// Step-by-step progression of obligations through trace states.
#[derive(Default)]
pub struct Progressor {
    arena: Arena,
}

impl Progressor {
    pub fn new() -> Self {
        Self::default()
    }

    /// The obligation that the conjunction of `psi` holds from here on.
    pub fn initial(&mut self, psi: &[Formula]) -> ObligationState {
        let roots: Vec<NId> = psi.iter().map(|f| self.arena.convert(f, true)).collect();
        ObligationState {
            options: self.arena.obligation(roots).into_iter().collect(),
        }
    }

    /// Consumes `sigma` as the current trace state. When `is_last`, the
    /// state is accepted iff `sigma` ends a model of the obligation.
    pub fn progress(&mut self, state: &ObligationState, sigma: &State, is_last: bool) -> Progress {
        let mut bits = AtomSet::default();
        for a in sigma {
            if let Some(id) = self.arena.atom_id(a) {
                bits.insert(id);
            }
        }
        let mut next = BTreeSet::new();
        for obligation in &state.options {
            for t in transitions_of(&mut self.arena, obligation) {
                if !t.allows(&bits) {
                    continue;
                }
                if is_last {
                    if t.strong.is_empty() {
                        return Progress::Accept;
                    }
                } else if let Some(succ) = successor(&self.arena, &t) {
                    next.insert(succ);
                }
            }
        }
        if is_last || next.is_empty() {
            Progress::Reject
        } else {
            Progress::Continue(ObligationState { options: next })
        }
    }

    /// Runs `trace` through progression from the initial state of `psi`.
    pub fn accepts(&mut self, psi: &[Formula], trace: &Trace) -> bool {
        let mut state = self.initial(psi);
        let n = trace.len();
        for (i, sigma) in trace.states().iter().enumerate() {
            match self.progress(&state, sigma, i + 1 == n) {
                Progress::Accept => return true,
                Progress::Reject => return false,
                Progress::Continue(s) => state = s,
            }
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    fn state(atoms: &[&str]) -> State {
        atoms.iter().map(|a| a.to_string()).collect()
    }

    #[test]
    fn contradiction_is_unsat() {
        assert_eq!(check_satisfiability(&[f("a & !a")]).unwrap(), SatOutcome::Unsat);
    }

    #[test]
    fn delayed_atom_needs_six_states() {
        let out = check_satisfiability(&[f("X X X X X b")]).unwrap();
        let expected = Trace::from_atoms(&[&[], &[], &[], &[], &[], &["b"]]).unwrap();
        assert_eq!(
            out,
            SatOutcome::Sat {
                length: 6,
                witness: expected
            }
        );
    }

    #[test]
    fn delayed_contradiction_is_unsat() {
        let out = check_satisfiability(&[f("X X X X X b"), f("X X X X X !b")]).unwrap();
        assert_eq!(out, SatOutcome::Unsat);
        assert_eq!(out.length(), 0);
    }

    #[test]
    fn liveness_needs_witness_in_trace() {
        assert_eq!(check_satisfiability(&[f("G !b"), f("F b")]).unwrap(), SatOutcome::Unsat);
        assert_eq!(check_satisfiability(&[f("G X true")]).unwrap(), SatOutcome::Unsat);
        assert_eq!(check_satisfiability(&[f("G WX true")]).unwrap().length(), 1);
        assert_eq!(check_satisfiability(&[f("a U (b & X c)")]).unwrap().length(), 2);
        assert_eq!(check_satisfiability(&[f("!a"), f("X a"), f("G (a -> X !a)"), f("F (a & X a)")]).unwrap(), SatOutcome::Unsat);
    }

    #[test]
    fn witnesses_satisfy_every_conjunct() {
        for text in ["a U b", "G (a | b) & F !a & F !b", "(a R b) & X X !b", "X (a & X !a) & G (b -> a)", "true"] {
            let psi = [f(text)];
            match check_satisfiability(&psi).unwrap() {
                SatOutcome::Sat { length, witness } => {
                    assert_eq!(witness.len(), length);
                    assert!(witness.evaluate(&psi[0], 0).unwrap(), "{text} on {witness}");
                }
                SatOutcome::Unsat => panic!("{text} should be satisfiable"),
            }
        }
    }

    #[test]
    fn empty_conjunction_is_trivial() {
        assert_eq!(check_satisfiability(&[]).unwrap().length(), 1);
    }

    #[test]
    fn state_budget_is_an_error() {
        let oracle = LtlfOracle::new().with_max_states(3);
        let err = oracle.check_satisfiability(&[f("X X X X X b")]).unwrap_err();
        assert!(matches!(err, Error::StateBudget(3)));
    }

    #[test]
    fn interrupt_stops_search() {
        use std::sync::atomic::AtomicBool;
        use std::sync::Arc;
        let flag = Arc::new(AtomicBool::new(true));
        let oracle = LtlfOracle::new().with_limits(Limits::none().with_interrupt(flag));
        assert!(matches!(oracle.check_satisfiability(&[f("a")]), Err(Error::Interrupted)));
    }

    #[test]
    fn progress_examples() {
        let mut p = Progressor::new();
        let until = p.initial(&[f("a U b")]);
        assert_eq!(p.progress(&until, &state(&["b"]), true), Progress::Accept);
        assert_eq!(p.progress(&until, &state(&["a"]), true), Progress::Reject);
        assert_eq!(p.progress(&until, &state(&[]), false), Progress::Reject);
        assert!(matches!(p.progress(&until, &state(&["a"]), false), Progress::Continue(_)));

        let next = p.initial(&[f("X a")]);
        for sigma in [state(&[]), state(&["a"])] {
            assert_eq!(p.progress(&next, &sigma, true), Progress::Reject);
        }

        let top = p.initial(&[f("true")]);
        assert!(top.is_trivial());
        assert_eq!(p.progress(&top, &state(&["a"]), true), Progress::Accept);
        assert_eq!(p.progress(&top, &state(&[]), false), Progress::Continue(top.clone()));
    }

    #[test]
    fn state_count_respects_cap() {
        for text in ["G (a -> X b) & F a", "(a U b) & (c R !b) & X X X c", "G F a & G F !a"] {
            let (_, stats) = LtlfOracle::new().check_with_stats(&[f(text)]).unwrap();
            assert!(stats.subformulas >= 63 || stats.states <= 1 << stats.subformulas);
        }
    }
}
