//! Propositional satisfiability under assumptions with core extraction.

mod solver;
mod types;

pub use solver::{ClauseDb, SolverStats};
pub use types::{Lit, Model, SatResult, Var};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use proptest::prelude::*;

    fn vars(db: &mut ClauseDb, n: usize) -> Vec<Var> {
        (0..n).map(|_| db.new_var()).collect()
    }

    #[test]
    fn empty_clause_makes_everything_unsat() {
        let mut db = ClauseDb::new();
        let v = vars(&mut db, 2);
        db.register_assumable(v[0].pos());
        db.add_clause(&[]);
        assert_eq!(db.solve(&[]).unwrap(), SatResult::Unsat(vec![]));
        assert_eq!(db.solve(&[v[0].pos()]).unwrap(), SatResult::Unsat(vec![]));
    }

    #[test]
    fn unit_contradiction() {
        let mut db = ClauseDb::new();
        let x = db.new_var();
        db.add_clause(&[x.pos()]);
        db.add_clause(&[x.neg()]);
        assert!(!db.solve(&[]).unwrap().is_sat());
    }

    #[test]
    fn guarded_contradiction_core() {
        let mut db = ClauseDb::new();
        let s = db.new_var();
        let x = db.new_var();
        db.register_assumable(s.pos());
        db.add_clause(&[s.neg(), x.pos()]);
        db.add_clause(&[x.neg()]);
        match db.solve(&[s.pos()]).unwrap() {
            SatResult::Unsat(core) => assert!(core.iter().all(|&l| l == s.pos())),
            r => panic!("expected unsat, got {r:?}"),
        }
        assert!(db.solve(&[]).unwrap().is_sat());
    }

    #[test]
    fn two_selectors() {
        let mut db = ClauseDb::new();
        let s1 = db.new_var();
        let s2 = db.new_var();
        let x = db.new_var();
        db.register_assumable(s1.pos());
        db.register_assumable(s2.pos());
        db.add_clause(&[s1.neg(), x.pos()]);
        db.add_clause(&[s2.neg(), x.neg()]);
        match db.solve(&[s1.pos(), s2.pos()]).unwrap() {
            SatResult::Unsat(core) => {
                assert!(core.iter().all(|l| [s1.pos(), s2.pos()].contains(l)));
                assert!(!db.solve(&core).unwrap().is_sat());
            }
            r => panic!("expected unsat, got {r:?}"),
        }
        match db.solve(&[s1.pos()]).unwrap() {
            SatResult::Sat(m) => assert!(m.var_value(x)),
            r => panic!("expected sat, got {r:?}"),
        }
        assert!(db.solve(&[]).unwrap().is_sat());
    }

    #[test]
    fn unregistered_assumption_rejected() {
        let mut db = ClauseDb::new();
        let x = db.new_var();
        assert!(matches!(
            db.solve(&[x.pos()]),
            Err(Error::UnregisteredAssumption(1))
        ));
    }

    #[test]
    fn contradictory_assumptions() {
        let mut db = ClauseDb::new();
        let x = db.new_var();
        db.register_assumable(x.pos());
        match db.solve(&[x.pos(), x.neg()]).unwrap() {
            SatResult::Unsat(core) => {
                let mut core = core;
                core.sort();
                assert_eq!(core, vec![x.pos(), x.neg()]);
            }
            r => panic!("expected unsat, got {r:?}"),
        }
    }

    /// Pigeonhole 6 into 5: needs real search.
    #[test]
    fn pigeonhole_is_unsat() {
        let mut db = ClauseDb::new();
        let (p, h) = (6, 5);
        let x: Vec<Vec<Var>> = (0..p).map(|_| vars(&mut db, h)).collect();
        for row in &x {
            db.add_clause(&row.iter().map(|v| v.pos()).collect::<Vec<_>>());
        }
        for j in 0..h {
            for a in 0..p {
                for b in a + 1..p {
                    db.add_clause(&[x[a][j].neg(), x[b][j].neg()]);
                }
            }
        }
        assert_eq!(db.solve(&[]).unwrap(), SatResult::Unsat(vec![]));
    }

    #[test]
    fn propagation_budget_is_not_unsat() {
        let mut db = ClauseDb::new();
        let (p, h) = (9, 8);
        let x: Vec<Vec<Var>> = (0..p).map(|_| vars(&mut db, h)).collect();
        for row in &x {
            db.add_clause(&row.iter().map(|v| v.pos()).collect::<Vec<_>>());
        }
        for j in 0..h {
            for a in 0..p {
                for b in a + 1..p {
                    db.add_clause(&[x[a][j].neg(), x[b][j].neg()]);
                }
            }
        }
        db.set_propagation_budget(Some(1000));
        assert!(matches!(db.solve(&[]), Err(Error::PropagationBudget(1000))));
    }

    #[test]
    fn dimacs_dump() {
        let mut db = ClauseDb::new();
        let v = vars(&mut db, 2);
        db.add_clause(&[v[0].pos(), v[1].neg()]);
        db.add_clause(&[]);
        let mut out = Vec::new();
        db.write_dimacs(&mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "p cnf 2 2\n1 -2 0\n0\n");
    }

    fn brute_force(n: usize, clauses: &[Vec<(usize, bool)>], assumed: &[(usize, bool)]) -> bool {
        (0u32..1 << n).any(|m| {
            let val = |(v, pos): (usize, bool)| (m >> v & 1 == 1) == pos;
            assumed.iter().all(|&l| val(l)) && clauses.iter().all(|c| c.iter().any(|&l| val(l)))
        })
    }

    fn instance() -> impl Strategy<Value = (usize, Vec<Vec<(usize, bool)>>, Vec<(usize, bool)>)> {
        (3usize..=12).prop_flat_map(|n| {
            let lit = (0..n, any::<bool>());
            (
                Just(n),
                prop::collection::vec(prop::collection::vec(lit.clone(), 1..=4), 0..=3 * n),
                prop::collection::vec(lit, 0..=4),
            )
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(400))]

        #[test]
        fn agrees_with_truth_table((n, clauses, assumed) in instance()) {
            let mut db = ClauseDb::new();
            let vs = vars(&mut db, n);
            let lit = |(v, pos): (usize, bool)| Lit::new(vs[v], pos);
            for &(v, _) in &assumed {
                db.register_assumable(vs[v].pos());
            }
            for c in &clauses {
                db.add_clause(&c.iter().map(|&l| lit(l)).collect::<Vec<_>>());
            }
            let assumptions: Vec<Lit> = assumed.iter().map(|&l| lit(l)).collect();
            // Solve twice: verdicts must repeat with learnt clauses present.
            for _ in 0..2 {
                let expected = brute_force(n, &clauses, &assumed);
                match db.solve(&assumptions).unwrap() {
                    SatResult::Sat(m) => {
                        prop_assert!(expected);
                        for c in &clauses {
                            prop_assert!(c.iter().any(|&l| m.value(lit(l))));
                        }
                        for &a in &assumptions {
                            prop_assert!(m.value(a));
                        }
                    }
                    SatResult::Unsat(core) => {
                        prop_assert!(!expected);
                        for l in &core {
                            prop_assert!(assumptions.contains(l));
                        }
                        prop_assert!(!db.solve(&core).unwrap().is_sat());
                        let core_lits: Vec<(usize, bool)> =
                            core.iter().map(|l| (l.var().index(), l.is_positive())).collect();
                        prop_assert!(!brute_force(n, &clauses, &core_lits));
                    }
                }
            }
        }
    }
}
