//! Random conjunction instances.
//!
//! Each conjunct is drawn independently over atoms `p0..p{atoms-1}`. A node
//! at remaining depth `d > 0` is a literal with probability 1/4, otherwise
//! an operator drawn with weights `G`:3 `F`:2 `X`:3 `!`:1 `&`:2 `|`:2 `->`:3
//! `U`:1 `R`:1. Depth 0 always gives a literal. The stream is ChaCha8
//! seeded with `seed`, so the same parameters always give the same instance.

use anyhow::{ensure, Result};
use ltlf_muc::Formula;
use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenParams {
    pub conjuncts: usize,
    pub atoms: usize,
    pub depth: usize,
    pub seed: u64,
}

#[derive(Clone, Copy)]
enum Op {
    Globally,
    Eventually,
    Next,
    Not,
    And,
    Or,
    Implies,
    Until,
    Release,
}

const OPS: [(Op, u32); 9] = [
    (Op::Globally, 3),
    (Op::Eventually, 2),
    (Op::Next, 3),
    (Op::Not, 1),
    (Op::And, 2),
    (Op::Or, 2),
    (Op::Implies, 3),
    (Op::Until, 1),
    (Op::Release, 1),
];

struct Generator {
    rng: ChaCha8Rng,
    atoms: usize,
    ops: WeightedIndex<u32>,
}

impl Generator {
    fn literal(&mut self) -> Formula {
        let a = Formula::atom(format!("p{}", self.rng.gen_range(0..self.atoms)));
        if self.rng.gen_bool(0.5) {
            a
        } else {
            Formula::not(a)
        }
    }

    fn formula(&mut self, depth: usize) -> Formula {
        if depth == 0 || self.rng.gen_bool(0.25) {
            return self.literal();
        }
        let d = depth - 1;
        match OPS[self.ops.sample(&mut self.rng)].0 {
            Op::Globally => Formula::globally(self.formula(d)),
            Op::Eventually => Formula::eventually(self.formula(d)),
            Op::Next => Formula::next(self.formula(d)),
            Op::Not => Formula::not(self.formula(d)),
            Op::And => Formula::and(self.formula(d), self.formula(d)),
            Op::Or => Formula::or(self.formula(d), self.formula(d)),
            Op::Implies => Formula::implies(self.formula(d), self.formula(d)),
            Op::Until => Formula::until(self.formula(d), self.formula(d)),
            Op::Release => Formula::release(self.formula(d), self.formula(d)),
        }
    }
}

pub fn generate(params: GenParams) -> Result<Vec<Formula>> {
    ensure!(params.conjuncts > 0, "need at least one conjunct");
    ensure!(params.atoms > 0, "need at least one atom");
    let mut g = Generator {
        rng: ChaCha8Rng::seed_from_u64(params.seed),
        atoms: params.atoms,
        ops: WeightedIndex::new(OPS.iter().map(|(_, w)| *w)).expect("positive weights"),
    };
    Ok((0..params.conjuncts).map(|_| g.formula(params.depth)).collect())
}

/// One conjunct per line, preceded by a comment naming the parameters.
pub fn render(params: GenParams, conjuncts: &[Formula]) -> String {
    let mut out = format!(
        "# random conjunction: conjuncts={} atoms={} depth={} seed={}\n",
        params.conjuncts, params.atoms, params.depth, params.seed
    );
    for c in conjuncts {
        out.push_str(&c.to_string());
        out.push('\n');
    }
    out
}
