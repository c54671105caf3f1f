use std::collections::BTreeSet;
use std::fmt;

use crate::error::Error;

use super::formula::Formula;

/// Set of atoms true at one instant.
pub type State = BTreeSet<String>;

/// A finite, non-empty sequence of states.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Trace {
    states: Vec<State>,
}

impl Trace {
    pub fn new(states: Vec<State>) -> Result<Self, Error> {
        if states.is_empty() {
            return Err(Error::EmptyTrace);
        }
        Ok(Trace { states })
    }

    /// Convenience constructor from slices of atom names.
    pub fn from_atoms<S: AsRef<str>>(states: &[&[S]]) -> Result<Self, Error> {
        Trace::new(
            states
                .iter()
                .map(|s| s.iter().map(|a| a.as_ref().to_string()).collect())
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    /// Always false; kept for API symmetry with collections.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn states(&self) -> &[State] {
        &self.states
    }

    pub fn state(&self, i: usize) -> &State {
        &self.states[i]
    }

    /// Fails on the first atom not in `alphabet`.
    pub fn check_alphabet(&self, alphabet: &BTreeSet<String>) -> Result<(), Error> {
        for (t, s) in self.states.iter().enumerate() {
            if let Some(a) = s.iter().find(|a| !alphabet.contains(*a)) {
                return Err(Error::UnknownAtom {
                    atom: a.clone(),
                    position: t,
                });
            }
        }
        Ok(())
    }

    /// `π, i ⊨ f`, by direct recursion on the finite-trace semantics.
    pub fn evaluate(&self, f: &Formula, i: usize) -> Result<bool, Error> {
        if i >= self.len() {
            return Err(Error::PositionOutOfRange {
                position: i,
                length: self.len(),
            });
        }
        Ok(self.holds(f, i))
    }

    fn holds(&self, f: &Formula, i: usize) -> bool {
        use Formula::*;
        let last = self.len() - 1;
        match f {
            True => true,
            False => false,
            Atom(a) => self.states[i].contains(a),
            Not(g) => !self.holds(g, i),
            And(g, h) => self.holds(g, i) && self.holds(h, i),
            Or(g, h) => self.holds(g, i) || self.holds(h, i),
            Implies(g, h) => !self.holds(g, i) || self.holds(h, i),
            Next(g) => i < last && self.holds(g, i + 1),
            WeakNext(g) => i == last || self.holds(g, i + 1),
            Until(g, h) => {
                for j in i..=last {
                    if self.holds(h, j) {
                        return true;
                    }
                    if !self.holds(g, j) {
                        return false;
                    }
                }
                false
            }
            Release(g, h) => {
                for j in i..=last {
                    if !self.holds(h, j) {
                        return false;
                    }
                    if self.holds(g, j) {
                        return true;
                    }
                }
                true
            }
            Eventually(g) => (i..=last).any(|j| self.holds(g, j)),
            Globally(g) => (i..=last).all(|j| self.holds(g, j)),
        }
    }
}

impl fmt::Display for Trace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, s) in self.states.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{{")?;
            for (j, a) in s.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{a}")?;
            }
            write!(f, "}}")?;
        }
        write!(f, "]")
    }
}

/// Free-function form of [`Trace::evaluate`].
pub fn evaluate(trace: &Trace, f: &Formula, i: usize) -> Result<bool, Error> {
    trace.evaluate(f, i)
}
