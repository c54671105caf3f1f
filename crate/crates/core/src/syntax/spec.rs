use std::collections::BTreeSet;
use std::fmt;

use crate::error::Error;

use super::formula::Formula;

/// How a parsed formula is cut into conjuncts.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SplitMode {
    /// Only the top-level `&` is split: `(a & !b) & (c U b)` has two conjuncts.
    Root,
    /// Every `&` reachable from the root through `&` nodes is split.
    #[default]
    Recursive,
}

/// Ordered list of conjuncts, addressed by 1-based indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjunctiveSpec {
    conjuncts: Vec<Formula>,
    alphabet: BTreeSet<String>,
}

impl ConjunctiveSpec {
    pub fn new(conjuncts: Vec<Formula>) -> Result<Self, Error> {
        if conjuncts.is_empty() {
            return Err(Error::EmptySpec);
        }
        let mut alphabet = BTreeSet::new();
        for c in &conjuncts {
            c.collect_atoms(&mut alphabet);
        }
        Ok(ConjunctiveSpec {
            conjuncts,
            alphabet,
        })
    }

    pub fn split(f: &Formula, mode: SplitMode) -> Self {
        let conjuncts = match (mode, f) {
            (SplitMode::Root, Formula::And(l, r)) => vec![(**l).clone(), (**r).clone()],
            (SplitMode::Root, _) => vec![f.clone()],
            (SplitMode::Recursive, _) => {
                let mut out = Vec::new();
                split_into(f, &mut out);
                out
            }
        };
        ConjunctiveSpec::new(conjuncts).expect("a split yields at least one conjunct")
    }

    /// Number of conjuncts.
    pub fn len(&self) -> usize {
        self.conjuncts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.conjuncts.is_empty()
    }

    pub fn conjuncts(&self) -> &[Formula] {
        &self.conjuncts
    }

    /// Conjunct by 1-based index.
    pub fn conjunct(&self, index: usize) -> &Formula {
        &self.conjuncts[index - 1]
    }

    pub fn alphabet(&self) -> &BTreeSet<String> {
        &self.alphabet
    }

    pub fn all(&self) -> SelectorSet {
        SelectorSet::full(self.len())
    }

    pub fn check_selectors(&self, set: &SelectorSet) -> Result<(), Error> {
        match set.iter().find(|&i| i == 0 || i > self.len()) {
            Some(index) => Err(Error::SelectorOutOfRange {
                index,
                n: self.len(),
            }),
            None => Ok(()),
        }
    }

    /// The conjuncts named by `set`, in index order.
    pub fn to_formula(&self, set: &SelectorSet) -> Vec<Formula> {
        set.iter().map(|i| self.conjunct(i).clone()).collect()
    }

    /// The sub-specification named by `set`, re-indexed from 1.
    pub fn restrict(&self, set: &SelectorSet) -> Result<ConjunctiveSpec, Error> {
        self.check_selectors(set)?;
        ConjunctiveSpec::new(self.to_formula(set))
    }

    /// Inverse of [`ConjunctiveSpec::to_formula`]: the indices of the given
    /// conjuncts, or `None` if one of them is not a conjunct. Repeated
    /// conjuncts map to their first occurrence.
    pub fn selectors_of(&self, conjuncts: &[Formula]) -> Option<SelectorSet> {
        conjuncts
            .iter()
            .map(|f| self.conjuncts.iter().position(|c| c == f).map(|p| p + 1))
            .collect()
    }
}

/// Top-down split: an `And` contributes the splits of both children.
pub fn split_conjunctive(f: &Formula) -> ConjunctiveSpec {
    ConjunctiveSpec::split(f, SplitMode::Recursive)
}

fn split_into(f: &Formula, out: &mut Vec<Formula>) {
    match f {
        Formula::And(l, r) => {
            split_into(l, out);
            split_into(r, out);
        }
        other => out.push(other.clone()),
    }
}

/// Set of 1-based conjunct indices.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SelectorSet(Vec<usize>);

impl SelectorSet {
    pub fn new(indices: impl IntoIterator<Item = usize>) -> Self {
        let mut v: Vec<usize> = indices.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        SelectorSet(v)
    }

    pub fn empty() -> Self {
        SelectorSet(Vec::new())
    }

    /// `{1, ..., n}`.
    pub fn full(n: usize) -> Self {
        SelectorSet((1..=n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, index: usize) -> bool {
        self.0.binary_search(&index).is_ok()
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn without(&self, index: usize) -> Self {
        SelectorSet(self.0.iter().copied().filter(|&i| i != index).collect())
    }

    pub fn with(&self, index: usize) -> Self {
        SelectorSet::new(self.0.iter().copied().chain([index]))
    }

    pub fn is_subset(&self, other: &SelectorSet) -> bool {
        self.0.iter().all(|&i| other.contains(i))
    }

    /// Subset of `{1..=n}` encoded by the low `n` bits of `mask`
    /// (bit `i - 1` selects conjunct `i`).
    pub fn from_mask(mask: u64, n: usize) -> Self {
        SelectorSet((1..=n).filter(|i| mask >> (i - 1) & 1 == 1).collect())
    }

    pub fn to_mask(&self) -> u64 {
        self.0.iter().fold(0, |m, &i| m | 1 << (i - 1))
    }
}

impl FromIterator<usize> for SelectorSet {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        SelectorSet::new(iter)
    }
}

impl fmt::Display for SelectorSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (j, i) in self.0.iter().enumerate() {
            if j > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}
