//! Depth-bounded satisfiability probe over a conjunctive specification.
//!
//! For every time `t < k` and every subformula `x`, a literal `holds(t, x)`
//! is constrained to be equivalent to "`x` holds at position `t`". An
//! exactly-one marker `last(t)` selects the trace length, so one probe
//! answers for every length `1..=k`. Each conjunct `i` gets a selector
//! `phi(i)` with `phi(i) -> holds(0, root_i)`; queries assume selectors.

mod asp;

pub use asp::export_asp_facts;

use crate::error::Error;
use crate::limits::Limits;
use crate::mus::{SubsetCheck, SubsetOracle};
use crate::sat::{ClauseDb, Lit, Model, SatResult, Var};
use crate::syntax::{ConjunctiveSpec, NodeKind, SelectorSet, State, SubformulaTable, Trace};

pub const DEFAULT_VAR_BUDGET: usize = 10_000_000;

#[derive(Clone, Debug)]
pub struct ProbeConfig {
    /// Upper bound on propositional variables; larger probes are refused.
    pub max_vars: usize,
    /// Per-query propagation cap handed to the SAT search.
    pub propagation_budget: Option<u64>,
    pub limits: Limits,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        ProbeConfig {
            max_vars: DEFAULT_VAR_BUDGET,
            propagation_budget: None,
            limits: Limits::none(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProbeResult {
    /// The enforced conjuncts hold at position 0 of `witness`, whose length
    /// is at most the probe depth.
    Sat { witness: Trace },
    /// `core` is a subset of the query that is still unsatisfiable at this depth.
    Unsat { core: SelectorSet },
}

impl ProbeResult {
    pub fn is_sat(&self) -> bool {
        matches!(self, ProbeResult::Sat { .. })
    }
}

pub struct Probe {
    spec: ConjunctiveSpec,
    depth: usize,
    table: SubformulaTable,
    db: ClauseDb,
    atoms: Vec<String>,
    selectors: Vec<Lit>,
    trace_vars: Vec<Vec<Var>>,
    alive: Vec<Var>,
    queries: u64,
}

impl Probe {
    pub fn build(spec: &ConjunctiveSpec, depth: usize) -> Result<Self, Error> {
        Probe::with_config(spec, depth, ProbeConfig::default())
    }

    pub fn with_config(spec: &ConjunctiveSpec, depth: usize, config: ProbeConfig) -> Result<Self, Error> {
        if depth == 0 {
            return Err(Error::ZeroDepth);
        }
        if spec.is_empty() {
            return Err(Error::EmptySpec);
        }
        let table = SubformulaTable::from_spec(spec);
        let atoms: Vec<String> = spec.alphabet().iter().cloned().collect();
        let m = table.len();
        let needed = depth
            .saturating_mul(m + atoms.len() + 2)
            .saturating_add(spec.len() + 1);
        if needed > config.max_vars {
            return Err(Error::VariableBudget {
                needed,
                budget: config.max_vars,
            });
        }

        let mut db = ClauseDb::new();
        db.set_propagation_budget(config.propagation_budget);
        db.set_limits(config.limits);
        let top = db.new_var().pos();
        db.add_clause(&[top]);

        let trace_vars: Vec<Vec<Var>> = (0..depth)
            .map(|_| atoms.iter().map(|_| db.new_var()).collect())
            .collect();

        // alive(t) <=> t < length; last(t) <=> alive(t) & !alive(t+1).
        let alive: Vec<Var> = (0..depth).map(|_| db.new_var()).collect();
        db.add_clause(&[alive[0].pos()]);
        let mut last: Vec<Lit> = Vec::with_capacity(depth);
        for t in 0..depth {
            if t + 1 < depth {
                db.add_clause(&[alive[t + 1].neg(), alive[t].pos()]);
                let l = db.new_var().pos();
                and_def(&mut db, l, &[alive[t].pos(), alive[t + 1].neg()]);
                last.push(l);
            } else {
                last.push(alive[t].pos());
            }
        }

        let atom_index = |name: &str| atoms.binary_search_by(|a| a.as_str().cmp(name)).expect("atom in alphabet");
        let mut holds: Vec<Lit> = vec![!top; depth * m];
        let at = |t: usize, x: usize| t * m + x;
        for t in (0..depth).rev() {
            let final_step = t + 1 == depth;
            for &x in table.children_first() {
                if x == 0 {
                    continue;
                }
                let h = |c: usize| holds[at(t, c)];
                let later = |c: usize| if final_step { !top } else { holds[at(t + 1, c)] };
                let lit = match table.kind(x) {
                    NodeKind::True => top,
                    NodeKind::Atom(a) => trace_vars[t][atom_index(a)].pos(),
                    NodeKind::Negate(c) => !h(*c),
                    NodeKind::Conjunction(cs) => {
                        let v = db.new_var().pos();
                        and_def(&mut db, v, &cs.iter().map(|&c| h(c)).collect::<Vec<_>>());
                        v
                    }
                    NodeKind::Disjunction(cs) => {
                        let v = db.new_var().pos();
                        let negs: Vec<Lit> = cs.iter().map(|&c| !h(c)).collect();
                        and_def(&mut db, !v, &negs);
                        v
                    }
                    NodeKind::Next(c) => {
                        if final_step {
                            !top
                        } else {
                            let v = db.new_var().pos();
                            and_def(&mut db, v, &[!last[t], later(*c)]);
                            v
                        }
                    }
                    NodeKind::Until(l, r) => {
                        if final_step {
                            h(*r)
                        } else {
                            // v <=> r | (l & !last & v')
                            let (v, r, l, next) = (db.new_var().pos(), h(*r), h(*l), later(x));
                            db.add_clause(&[!v, r, l]);
                            db.add_clause(&[!v, r, !last[t]]);
                            db.add_clause(&[!v, r, next]);
                            db.add_clause(&[!r, v]);
                            db.add_clause(&[!l, last[t], !next, v]);
                            v
                        }
                    }
                    NodeKind::Release(l, r) => {
                        // v <=> r & (l | last | v')
                        let (v, r, l, next) = (db.new_var().pos(), h(*r), h(*l), later(x));
                        db.add_clause(&[!v, r]);
                        db.add_clause(&[!v, l, last[t], next]);
                        db.add_clause(&[!r, !l, v]);
                        db.add_clause(&[!r, !last[t], v]);
                        if !final_step {
                            db.add_clause(&[!r, !next, v]);
                        }
                        v
                    }
                };
                holds[at(t, x)] = lit;
            }
        }

        let selectors: Vec<Lit> = table
            .conjunct_roots()
            .iter()
            .map(|&root| {
                let s = db.new_var().pos();
                db.register_assumable(s);
                db.add_clause(&[!s, holds[at(0, root)]]);
                s
            })
            .collect();

        Ok(Probe {
            spec: spec.clone(),
            depth,
            table,
            db,
            atoms,
            selectors,
            trace_vars,
            alive,
            queries: 0,
        })
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn spec(&self) -> &ConjunctiveSpec {
        &self.spec
    }

    pub fn table(&self) -> &SubformulaTable {
        &self.table
    }

    /// Selector literal of conjunct `index` (1-based).
    pub fn selector(&self, index: usize) -> Lit {
        self.selectors[index - 1]
    }

    pub fn num_vars(&self) -> usize {
        self.db.num_vars()
    }

    pub fn num_clauses(&self) -> usize {
        self.db.num_clauses()
    }

    /// Number of [`Probe::query`] calls so far.
    pub fn queries(&self) -> u64 {
        self.queries
    }

    pub fn set_limits(&mut self, limits: Limits) {
        self.db.set_limits(limits);
    }

    /// Is there a trace of length at most `depth` satisfying every conjunct in `set`?
    pub fn query(&mut self, set: &SelectorSet) -> Result<ProbeResult, Error> {
        self.spec.check_selectors(set)?;
        self.queries += 1;
        let assumptions: Vec<Lit> = set.iter().map(|i| self.selectors[i - 1]).collect();
        match self.db.solve(&assumptions)? {
            SatResult::Sat(model) => Ok(ProbeResult::Sat {
                witness: self.decode(&model),
            }),
            SatResult::Unsat(core) => Ok(ProbeResult::Unsat {
                core: core
                    .iter()
                    .map(|l| 1 + self.selectors.iter().position(|s| s == l).expect("core lit is a selector"))
                    .collect(),
            }),
        }
    }

    fn decode(&self, model: &Model) -> Trace {
        let len = self.alive.iter().take_while(|v| model.var_value(**v)).count();
        let states: Vec<State> = (0..len)
            .map(|t| {
                self.atoms
                    .iter()
                    .zip(&self.trace_vars[t])
                    .filter(|(_, v)| model.var_value(**v))
                    .map(|(a, _)| a.clone())
                    .collect()
            })
            .collect();
        Trace::new(states).expect("alive(0) is asserted")
    }

    /// DIMACS dump of the probe's clauses, for differential testing.
    pub fn write_dimacs<W: std::io::Write>(&self, w: W) -> std::io::Result<()> {
        self.db.write_dimacs(w)
    }
}

impl SubsetOracle for Probe {
    fn universe(&self) -> usize {
        self.spec.len()
    }

    fn check(&mut self, set: &SelectorSet) -> Result<SubsetCheck, Error> {
        Ok(match self.query(set)? {
            ProbeResult::Sat { .. } => SubsetCheck::Sat,
            ProbeResult::Unsat { core } => SubsetCheck::Unsat(core),
        })
    }
}

/// `v <=> conj(lits)`.
fn and_def(db: &mut ClauseDb, v: Lit, lits: &[Lit]) {
    for &l in lits {
        db.add_clause(&[!v, l]);
    }
    let mut big: Vec<Lit> = lits.iter().map(|&l| !l).collect();
    big.push(v);
    db.add_clause(&big);
}

/// Builds the depth-`k` probe.
pub fn build_probe(spec: &ConjunctiveSpec, k: usize) -> Result<Probe, Error> {
    Probe::build(spec, k)
}
