//! Negation normal form with hash-consing and light normalization, plus the
//! one-step expansion of a formula into symbolic transitions.

use std::collections::HashMap;
use std::rc::Rc;

use crate::syntax::Formula;

pub(crate) type NId = u32;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) enum Nnf {
    True,
    False,
    Lit(u32, bool),
    And(Vec<NId>),
    Or(Vec<NId>),
    Next(NId),
    WeakNext(NId),
    Until(NId, NId),
    Release(NId, NId),
}

/// Bitset over interned atom indices. Missing high words read as zero.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) struct AtomSet(Vec<u64>);

impl AtomSet {
    pub(crate) fn singleton(atom: u32) -> Self {
        let mut s = AtomSet::default();
        s.insert(atom);
        s
    }

    pub(crate) fn insert(&mut self, atom: u32) {
        let w = atom as usize / 64;
        if self.0.len() <= w {
            self.0.resize(w + 1, 0);
        }
        self.0[w] |= 1 << (atom % 64);
    }

    fn word(&self, i: usize) -> u64 {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub(crate) fn union(&self, other: &AtomSet) -> AtomSet {
        let n = self.0.len().max(other.0.len());
        AtomSet((0..n).map(|i| self.word(i) | other.word(i)).collect())
    }

    pub(crate) fn intersects(&self, other: &AtomSet) -> bool {
        self.0.iter().zip(&other.0).any(|(a, b)| a & b != 0)
    }

    pub(crate) fn is_subset(&self, other: &AtomSet) -> bool {
        self.0.iter().enumerate().all(|(i, &w)| w & !other.word(i) == 0)
    }

    pub(crate) fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.0.iter().enumerate().flat_map(|(i, &w)| {
            (0..64).filter(move |b| w >> b & 1 == 1).map(move |b| (i * 64 + b) as u32)
        })
    }
}

/// One way of satisfying an obligation at the current position: the atoms
/// that must be true and false now, the obligations that require a next
/// position, and those that only apply if one exists.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) struct Transition {
    pub(crate) pos: AtomSet,
    pub(crate) neg: AtomSet,
    pub(crate) strong: Vec<NId>,
    pub(crate) weak: Vec<NId>,
}

impl Transition {
    pub(crate) fn empty() -> Self {
        Transition {
            pos: AtomSet::default(),
            neg: AtomSet::default(),
            strong: Vec::new(),
            weak: Vec::new(),
        }
    }

    pub(crate) fn join(&self, other: &Transition) -> Option<Transition> {
        let pos = self.pos.union(&other.pos);
        let neg = self.neg.union(&other.neg);
        if pos.intersects(&neg) {
            return None;
        }
        Some(Transition {
            pos,
            neg,
            strong: merge(&self.strong, &other.strong),
            weak: merge(&self.weak, &other.weak),
        })
    }

    /// Every trace step allowed by `other` is allowed by `self`, with a
    /// weaker remaining obligation.
    fn subsumes(&self, other: &Transition) -> bool {
        self.pos.is_subset(&other.pos)
            && self.neg.is_subset(&other.neg)
            && subset(&self.strong, &other.strong)
            && self
                .strong
                .iter()
                .chain(&self.weak)
                .all(|x| other.strong.binary_search(x).is_ok() || other.weak.binary_search(x).is_ok())
    }

    /// Consistent with the full assignment `sigma`?
    pub(crate) fn allows(&self, sigma: &AtomSet) -> bool {
        self.pos.is_subset(sigma) && !self.neg.intersects(sigma)
    }
}

fn merge(a: &[NId], b: &[NId]) -> Vec<NId> {
    let mut v: Vec<NId> = a.iter().chain(b).copied().collect();
    v.sort_unstable();
    v.dedup();
    v
}

fn subset(a: &[NId], b: &[NId]) -> bool {
    a.iter().all(|x| b.binary_search(x).is_ok())
}

const SUBSUMPTION_LIMIT: usize = 512;

fn simplify(mut ts: Vec<Transition>) -> Vec<Transition> {
    let mut seen = std::collections::HashSet::new();
    ts.retain(|t| seen.insert(t.clone()));
    if ts.len() > SUBSUMPTION_LIMIT {
        return ts;
    }
    let keep: Vec<bool> = (0..ts.len())
        .map(|i| {
            !ts.iter()
                .enumerate()
                .any(|(j, t)| j != i && t.subsumes(&ts[i]) && (!ts[i].subsumes(t) || j < i))
        })
        .collect();
    ts.into_iter().zip(keep).filter_map(|(t, k)| k.then_some(t)).collect()
}

#[derive(Default)]
pub(crate) struct Arena {
    nodes: Vec<Nnf>,
    index: HashMap<Nnf, NId>,
    atoms: Vec<String>,
    atom_index: HashMap<String, u32>,
    expansions: HashMap<NId, Rc<Vec<Transition>>>,
}

impl Arena {
    pub(crate) fn len(&self) -> usize {
        self.nodes.len()
    }

    #[cfg(test)]
    pub(crate) fn node(&self, id: NId) -> &Nnf {
        &self.nodes[id as usize]
    }

    pub(crate) fn atom_name(&self, atom: u32) -> &str {
        &self.atoms[atom as usize]
    }

    pub(crate) fn atom_id(&self, name: &str) -> Option<u32> {
        self.atom_index.get(name).copied()
    }

    fn intern_atom(&mut self, name: &str) -> u32 {
        if let Some(&a) = self.atom_index.get(name) {
            return a;
        }
        let a = self.atoms.len() as u32;
        self.atoms.push(name.to_string());
        self.atom_index.insert(name.to_string(), a);
        a
    }

    fn intern(&mut self, node: Nnf) -> NId {
        if let Some(&id) = self.index.get(&node) {
            return id;
        }
        let id = self.nodes.len() as NId;
        self.nodes.push(node.clone());
        self.index.insert(node, id);
        id
    }

    pub(crate) fn tt(&mut self) -> NId {
        self.intern(Nnf::True)
    }

    pub(crate) fn ff(&mut self) -> NId {
        self.intern(Nnf::False)
    }

    /// Flattened, sorted, deduplicated conjunction with constants folded.
    pub(crate) fn and(&mut self, parts: Vec<NId>) -> NId {
        self.junction(parts, true)
    }

    pub(crate) fn or(&mut self, parts: Vec<NId>) -> NId {
        self.junction(parts, false)
    }

    fn junction(&mut self, parts: Vec<NId>, conj: bool) -> NId {
        let mut flat = Vec::with_capacity(parts.len());
        for p in parts {
            match (&self.nodes[p as usize], conj) {
                (Nnf::And(cs), true) | (Nnf::Or(cs), false) => flat.extend(cs.iter().copied()),
                (Nnf::True, true) | (Nnf::False, false) => {}
                (Nnf::False, true) => return self.ff(),
                (Nnf::True, false) => return self.tt(),
                _ => flat.push(p),
            }
        }
        flat.sort_unstable();
        flat.dedup();
        // Complementary literals.
        for w in flat.windows(2) {
            if let (Nnf::Lit(a, pa), Nnf::Lit(b, pb)) = (&self.nodes[w[0] as usize], &self.nodes[w[1] as usize]) {
                if a == b && pa != pb {
                    return if conj { self.ff() } else { self.tt() };
                }
            }
        }
        match flat.len() {
            0 => {
                if conj {
                    self.tt()
                } else {
                    self.ff()
                }
            }
            1 => flat[0],
            _ => self.intern(if conj { Nnf::And(flat) } else { Nnf::Or(flat) }),
        }
    }

    /// NNF of `f` (or of `!f` when `positive` is false).
    pub(crate) fn convert(&mut self, f: &Formula, positive: bool) -> NId {
        use Formula::*;
        match (f, positive) {
            (True, true) | (False, false) => self.tt(),
            (True, false) | (False, true) => self.ff(),
            (Atom(a), p) => {
                let a = self.intern_atom(a);
                self.intern(Nnf::Lit(a, p))
            }
            (Not(g), p) => self.convert(g, !p),
            (And(g, h), true) | (Or(g, h), false) => {
                let (g, h) = (self.convert(g, positive), self.convert(h, positive));
                self.and(vec![g, h])
            }
            (Or(g, h), true) | (And(g, h), false) => {
                let (g, h) = (self.convert(g, positive), self.convert(h, positive));
                self.or(vec![g, h])
            }
            (Implies(g, h), true) => {
                let (g, h) = (self.convert(g, false), self.convert(h, true));
                self.or(vec![g, h])
            }
            (Implies(g, h), false) => {
                let (g, h) = (self.convert(g, true), self.convert(h, false));
                self.and(vec![g, h])
            }
            (Next(g), true) | (WeakNext(g), false) => {
                let g = self.convert(g, positive);
                self.intern(Nnf::Next(g))
            }
            (WeakNext(g), true) | (Next(g), false) => {
                let g = self.convert(g, positive);
                self.intern(Nnf::WeakNext(g))
            }
            (Until(g, h), true) | (Release(g, h), false) => {
                let (g, h) = (self.convert(g, positive), self.convert(h, positive));
                self.until(g, h)
            }
            (Release(g, h), true) | (Until(g, h), false) => {
                let (g, h) = (self.convert(g, positive), self.convert(h, positive));
                self.release(g, h)
            }
            (Eventually(g), true) | (Globally(g), false) => {
                let (t, g) = (self.tt(), self.convert(g, positive));
                self.until(t, g)
            }
            (Globally(g), true) | (Eventually(g), false) => {
                let (f, g) = (self.ff(), self.convert(g, positive));
                self.release(f, g)
            }
        }
    }

    fn until(&mut self, l: NId, r: NId) -> NId {
        match self.nodes[r as usize] {
            Nnf::True | Nnf::False => r,
            _ => self.intern(Nnf::Until(l, r)),
        }
    }

    fn release(&mut self, l: NId, r: NId) -> NId {
        match self.nodes[r as usize] {
            Nnf::True | Nnf::False => r,
            _ => self.intern(Nnf::Release(l, r)),
        }
    }

    fn product(a: &[Transition], b: &[Transition]) -> Vec<Transition> {
        let mut out = Vec::with_capacity(a.len() * b.len());
        for x in a {
            for y in b {
                if let Some(t) = x.join(y) {
                    out.push(t);
                }
            }
        }
        simplify(out)
    }

    /// Disjunction of transitions equivalent to `id` at the current position.
    pub(crate) fn expand(&mut self, id: NId) -> Rc<Vec<Transition>> {
        if let Some(ts) = self.expansions.get(&id) {
            return Rc::clone(ts);
        }
        let ts = match self.nodes[id as usize].clone() {
            Nnf::True => vec![Transition::empty()],
            Nnf::False => vec![],
            Nnf::Lit(a, true) => vec![Transition {
                pos: AtomSet::singleton(a),
                ..Transition::empty()
            }],
            Nnf::Lit(a, false) => vec![Transition {
                neg: AtomSet::singleton(a),
                ..Transition::empty()
            }],
            Nnf::And(cs) => {
                let mut acc = vec![Transition::empty()];
                for c in cs {
                    let e = self.expand(c);
                    acc = Self::product(&acc, &e);
                    if acc.is_empty() {
                        break;
                    }
                }
                acc
            }
            Nnf::Or(cs) => {
                let mut acc = Vec::new();
                for c in cs {
                    acc.extend(self.expand(c).iter().cloned());
                }
                simplify(acc)
            }
            Nnf::Next(g) => vec![Transition {
                strong: vec![g],
                ..Transition::empty()
            }],
            Nnf::WeakNext(g) => vec![Transition {
                weak: vec![g],
                ..Transition::empty()
            }],
            Nnf::Until(l, r) => {
                let stay = vec![Transition {
                    strong: vec![id],
                    ..Transition::empty()
                }];
                let el = self.expand(l);
                let mut acc: Vec<Transition> = self.expand(r).iter().cloned().collect();
                acc.extend(Self::product(&el, &stay));
                simplify(acc)
            }
            Nnf::Release(l, r) => {
                let mut either: Vec<Transition> = self.expand(l).iter().cloned().collect();
                either.push(Transition {
                    weak: vec![id],
                    ..Transition::empty()
                });
                let er = self.expand(r);
                Self::product(&er, &simplify(either))
            }
        };
        let ts = Rc::new(ts);
        self.expansions.insert(id, Rc::clone(&ts));
        ts
    }

    /// Canonical obligation set for a conjunction of `parts`: top-level
    /// conjunctions flattened, `true` dropped. `None` if `false` occurs.
    pub(crate) fn obligation(&self, parts: impl IntoIterator<Item = NId>) -> Option<Vec<NId>> {
        let mut out = Vec::new();
        let mut stack: Vec<NId> = parts.into_iter().collect();
        while let Some(p) = stack.pop() {
            match &self.nodes[p as usize] {
                Nnf::True => {}
                Nnf::False => return None,
                Nnf::And(cs) => stack.extend(cs.iter().copied()),
                _ => out.push(p),
            }
        }
        out.sort_unstable();
        out.dedup();
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;

    #[test]
    fn nnf_pushes_negation_to_atoms() {
        let mut arena = Arena::default();
        let id = arena.convert(&parse("!(a U X b)").unwrap(), true);
        let Nnf::Release(l, r) = arena.node(id).clone() else {
            panic!("expected release");
        };
        assert_eq!(arena.node(l), &Nnf::Lit(0, false));
        let Nnf::WeakNext(inner) = arena.node(r).clone() else {
            panic!("expected weak next");
        };
        assert_eq!(arena.node(inner), &Nnf::Lit(1, false));
    }

    #[test]
    fn normalization_folds_constants() {
        let mut arena = Arena::default();
        assert_eq!(arena.convert(&parse("a & !a").unwrap(), true), arena.ff());
        assert_eq!(arena.convert(&parse("a | !a").unwrap(), true), arena.tt());
        assert_eq!(arena.convert(&parse("a & true").unwrap(), true), arena.convert(&parse("a").unwrap(), true));
        let ab = arena.convert(&parse("a & b").unwrap(), true);
        let ba = arena.convert(&parse("b & (a & a)").unwrap(), true);
        assert_eq!(ab, ba);
    }

    #[test]
    fn until_expansion() {
        let mut arena = Arena::default();
        let id = arena.convert(&parse("a U b").unwrap(), true);
        let ts = arena.expand(id);
        assert_eq!(ts.len(), 2);
        assert!(ts.iter().any(|t| t.strong.is_empty() && t.pos == AtomSet::singleton(1)));
        assert!(ts.iter().any(|t| t.strong == vec![id] && t.pos == AtomSet::singleton(0)));
    }

    #[test]
    fn subsumed_transitions_dropped() {
        let mut arena = Arena::default();
        // a | (a & b): the second disjunct adds nothing.
        let id = arena.convert(&parse("a | (a & b)").unwrap(), true);
        assert_eq!(arena.expand(id).len(), 1);
    }

    #[test]
    fn atom_sets() {
        let mut s = AtomSet::singleton(70);
        s.insert(1);
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![1, 70]);
        assert!(AtomSet::singleton(1).is_subset(&s));
        assert!(!s.is_subset(&AtomSet::singleton(1)));
        assert!(s.intersects(&AtomSet::singleton(70)));
    }
}
