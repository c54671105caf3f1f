//! Hash-consed subformula DAG with reproducible integer ids.
//!
//! Ids are assigned from the root: the root gets 0; visiting a node first
//! numbers all of its not-yet-numbered children left to right, then visits
//! each child depth-first. For `(a & !b) & (c U b)` this yields
//!
//! ```text
//! 0: conjunction [1, 2]   3: atom a      5: atom b
//! 1: conjunction [3, 4]   4: negate [5]  6: atom c
//! 2: until [6, 5]
//! ```

use std::collections::HashMap;
use std::fmt;

use super::formula::Formula;
use super::spec::ConjunctiveSpec;

pub type NodeId = usize;

/// Node of the core (desugared) syntax.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum NodeKind {
    True,
    Atom(String),
    Negate(NodeId),
    Conjunction(Vec<NodeId>),
    Disjunction(Vec<NodeId>),
    Next(NodeId),
    Until(NodeId, NodeId),
    Release(NodeId, NodeId),
}

impl NodeKind {
    pub fn name(&self) -> &'static str {
        match self {
            NodeKind::True => "true",
            NodeKind::Atom(_) => "atom",
            NodeKind::Negate(_) => "negate",
            NodeKind::Conjunction(_) => "conjunction",
            NodeKind::Disjunction(_) => "disjunction",
            NodeKind::Next(_) => "next",
            NodeKind::Until(..) => "until",
            NodeKind::Release(..) => "release",
        }
    }

    pub fn children(&self) -> Vec<NodeId> {
        match self {
            NodeKind::True | NodeKind::Atom(_) => vec![],
            NodeKind::Negate(c) | NodeKind::Next(c) => vec![*c],
            NodeKind::Conjunction(cs) | NodeKind::Disjunction(cs) => cs.clone(),
            NodeKind::Until(l, r) | NodeKind::Release(l, r) => vec![*l, *r],
        }
    }

    fn map_children(&self, f: impl Fn(NodeId) -> NodeId) -> NodeKind {
        match self {
            NodeKind::True => NodeKind::True,
            NodeKind::Atom(a) => NodeKind::Atom(a.clone()),
            NodeKind::Negate(c) => NodeKind::Negate(f(*c)),
            NodeKind::Next(c) => NodeKind::Next(f(*c)),
            NodeKind::Conjunction(cs) => NodeKind::Conjunction(cs.iter().map(|&c| f(c)).collect()),
            NodeKind::Disjunction(cs) => NodeKind::Disjunction(cs.iter().map(|&c| f(c)).collect()),
            NodeKind::Until(l, r) => NodeKind::Until(f(*l), f(*r)),
            NodeKind::Release(l, r) => NodeKind::Release(f(*l), f(*r)),
        }
    }
}

/// One row of [`SubformulaTable::rows`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableRow {
    pub id: NodeId,
    pub kind: &'static str,
    pub atom: Option<String>,
    pub children: Vec<NodeId>,
}

impl fmt::Display for TableRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}\t{}", self.id, self.kind)?;
        if let Some(a) = &self.atom {
            write!(f, "\t{a}")?;
        }
        for c in &self.children {
            write!(f, "\t{c}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct SubformulaTable {
    nodes: Vec<NodeKind>,
    /// Root id of each conjunct when built from a specification.
    conjunct_roots: Vec<NodeId>,
    children_first: Vec<NodeId>,
}

#[derive(Default)]
struct Interner {
    nodes: Vec<NodeKind>,
    index: HashMap<NodeKind, NodeId>,
}

impl Interner {
    fn intern(&mut self, kind: NodeKind) -> NodeId {
        if let Some(&id) = self.index.get(&kind) {
            return id;
        }
        let id = self.nodes.len();
        self.nodes.push(kind.clone());
        self.index.insert(kind, id);
        id
    }

    /// Interns a formula that is already desugared.
    fn add(&mut self, f: &Formula) -> NodeId {
        let kind = match f {
            Formula::True => NodeKind::True,
            Formula::Atom(a) => NodeKind::Atom(a.clone()),
            Formula::Not(g) => NodeKind::Negate(self.add(g)),
            Formula::And(g, h) => NodeKind::Conjunction(vec![self.add(g), self.add(h)]),
            Formula::Or(g, h) => NodeKind::Disjunction(vec![self.add(g), self.add(h)]),
            Formula::Next(g) => NodeKind::Next(self.add(g)),
            Formula::Until(g, h) => NodeKind::Until(self.add(g), self.add(h)),
            Formula::Release(g, h) => NodeKind::Release(self.add(g), self.add(h)),
            other => unreachable!("not desugared: {other}"),
        };
        self.intern(kind)
    }
}

impl SubformulaTable {
    /// Table of a single formula; the formula itself is node 0.
    pub fn from_formula(f: &Formula) -> Self {
        let mut interner = Interner::default();
        let root = interner.add(&f.desugar());
        Self::renumber(interner, root, &[])
    }

    /// Table of a specification: node 0 is a conjunction whose children are
    /// the conjunct roots, in conjunct order.
    pub fn from_spec(spec: &ConjunctiveSpec) -> Self {
        let mut interner = Interner::default();
        let roots: Vec<NodeId> = spec
            .conjuncts()
            .iter()
            .map(|c| interner.add(&c.desugar()))
            .collect();
        let root = interner.intern(NodeKind::Conjunction(roots.clone()));
        Self::renumber(interner, root, &roots)
    }

    fn renumber(interner: Interner, root: NodeId, conjunct_roots: &[NodeId]) -> Self {
        let old = interner.nodes;
        let mut new_id: Vec<Option<NodeId>> = vec![None; old.len()];
        let mut order = vec![root];
        new_id[root] = Some(0);
        let mut visited = vec![false; old.len()];

        fn visit(
            node: NodeId,
            old: &[NodeKind],
            new_id: &mut [Option<NodeId>],
            order: &mut Vec<NodeId>,
            visited: &mut [bool],
        ) {
            visited[node] = true;
            let children = old[node].children();
            for &c in &children {
                if new_id[c].is_none() {
                    new_id[c] = Some(order.len());
                    order.push(c);
                }
            }
            for &c in &children {
                if !visited[c] {
                    visit(c, old, new_id, order, visited);
                }
            }
        }
        visit(root, &old, &mut new_id, &mut order, &mut visited);

        let remap = |c: NodeId| new_id[c].expect("reachable from root");
        let nodes: Vec<NodeKind> = order.iter().map(|&o| old[o].map_children(remap)).collect();

        let mut children_first = Vec::with_capacity(nodes.len());
        let mut done = vec![false; nodes.len()];
        fn post(node: NodeId, nodes: &[NodeKind], done: &mut [bool], out: &mut Vec<NodeId>) {
            if done[node] {
                return;
            }
            done[node] = true;
            for c in nodes[node].children() {
                post(c, nodes, done, out);
            }
            out.push(node);
        }
        post(0, &nodes, &mut done, &mut children_first);

        SubformulaTable {
            conjunct_roots: conjunct_roots.iter().map(|&r| remap(r)).collect(),
            nodes,
            children_first,
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn kind(&self, id: NodeId) -> &NodeKind {
        &self.nodes[id]
    }

    pub fn nodes(&self) -> &[NodeKind] {
        &self.nodes
    }

    /// Root ids of the conjuncts (empty for tables built from one formula).
    pub fn conjunct_roots(&self) -> &[NodeId] {
        &self.conjunct_roots
    }

    /// All ids, each listed after its children.
    pub fn children_first(&self) -> &[NodeId] {
        &self.children_first
    }

    pub fn rows(&self) -> Vec<TableRow> {
        self.nodes
            .iter()
            .enumerate()
            .map(|(id, kind)| TableRow {
                id,
                kind: kind.name(),
                atom: match kind {
                    NodeKind::Atom(a) => Some(a.clone()),
                    _ => None,
                },
                children: kind.children(),
            })
            .collect()
    }
}

/// Rows of the subformula DAG of `f`, in id order.
pub fn subformula_table(f: &Formula) -> Vec<TableRow> {
    SubformulaTable::from_formula(f).rows()
}
