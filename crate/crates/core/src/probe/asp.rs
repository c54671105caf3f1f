//! Export of a probe as an ASP program in clingo syntax.
//!
//! The formula is reified as facts over `conjunction/2`, `disjunction/2`,
//! `negate/2`, `next/2`, `until/3`, `release/3`, `atom/2`, `top/1` and
//! `root/1`, one fact per line, nodes in depth-first visiting order. The
//! root's `conjunction(0, id)` facts are replaced by the probe annotation
//! `conjunction(0,id) :- phi(j). {phi(j)}.` where `j` is the 0-based
//! position of the conjunct.

use std::fmt::Write;

use crate::syntax::{ConjunctiveSpec, NodeKind, SubformulaTable};

const SEMANTICS: &str = "\
holds(T,X) :- trace(T,A), atom(X,A).
holds(T,X) :- top(X), time(T).
holds(T,X) :- negate(X,F), not holds(T,F), time(T).
holds(T,X) :- conjunction(X,_), time(T), holds(T,F) : conjunction(X,F).
holds(T,X) :- disjunction(X,F), holds(T,F).
holds(T,X) :- next(X,F), holds(T+1,F), time(T), not last(T).
holds(T,X) :- until(X,L,R), holds(T,R).
holds(T,X) :- until(X,L,R), holds(T,L), holds(T+1,X), time(T), not last(T).
holds(T,X) :- release(X,L,R), holds(T,R), holds(T,L).
holds(T,X) :- release(X,L,R), holds(T,R), last(T).
holds(T,X) :- release(X,L,R), holds(T,R), holds(T+1,X), time(T), not last(T).
";

/// Renders the depth-`k` probe for `spec`: reified facts, probe annotation,
/// the bounded-satisfiability preamble, the semantics rules and the root
/// constraint.
///
/// Traces have any length in `1..=k`: `last/1` marks the final position and
/// the temporal rules never look past it.
pub fn export_asp_facts(spec: &ConjunctiveSpec, k: usize) -> String {
    let table = SubformulaTable::from_spec(spec);
    let mut out = String::new();

    out.push_str("% formula\n");
    let mut emitted = std::collections::HashSet::new();
    for id in visit_order(&table) {
        if id == 0 {
            continue;
        }
        for fact in facts(id, table.kind(id)) {
            if emitted.insert(fact.clone()) {
                out.push_str(&fact);
                out.push('\n');
            }
        }
    }
    out.push_str("root(0).\n");

    out.push_str("% probe annotation\n");
    for (j, root) in table.conjunct_roots().iter().enumerate() {
        writeln!(out, "conjunction(0,{root}) :- phi({j}). {{phi({j})}}.").unwrap();
    }

    out.push_str("% bounded satisfiability\n");
    writeln!(out, "time(0..{}).", k.saturating_sub(1)).unwrap();
    out.push_str("{ trace(T,A) : atom(_,A) } :- time(T).\n");
    out.push_str("1 { last(T) : time(T) } 1.\n");
    out.push_str("% semantics\n");
    out.push_str(SEMANTICS);
    out.push_str("enabled :- phi(_).\n");
    out.push_str(":- root(X), enabled, not holds(0,X).\n");
    out
}

fn visit_order(table: &SubformulaTable) -> Vec<usize> {
    fn go(id: usize, table: &SubformulaTable, seen: &mut [bool], out: &mut Vec<usize>) {
        seen[id] = true;
        out.push(id);
        for c in table.kind(id).children() {
            if !seen[c] {
                go(c, table, seen, out);
            }
        }
    }
    let mut seen = vec![false; table.len()];
    let mut out = Vec::with_capacity(table.len());
    go(0, table, &mut seen, &mut out);
    out
}

fn facts(id: usize, kind: &NodeKind) -> Vec<String> {
    match kind {
        NodeKind::True => vec![format!("top({id}).")],
        NodeKind::Atom(a) => vec![format!("atom({id},{a}).")],
        NodeKind::Negate(c) => vec![format!("negate({id},{c}).")],
        NodeKind::Next(c) => vec![format!("next({id},{c}).")],
        NodeKind::Conjunction(cs) => cs.iter().map(|c| format!("conjunction({id},{c}).")).collect(),
        NodeKind::Disjunction(cs) => cs.iter().map(|c| format!("disjunction({id},{c}).")).collect(),
        NodeKind::Until(l, r) => vec![format!("until({id},{l},{r}).")],
        NodeKind::Release(l, r) => vec![format!("release({id},{l},{r}).")],
    }
}
