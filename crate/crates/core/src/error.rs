use thiserror::Error;

use crate::syntax::ParseError;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("trace must contain at least one state")]
    EmptyTrace,
    #[error("position {position} out of range for trace of length {length}")]
    PositionOutOfRange { position: usize, length: usize },
    #[error("atom `{atom}` at position {position} is not in the alphabet")]
    UnknownAtom { atom: String, position: usize },
    #[error("specification has no conjuncts")]
    EmptySpec,
    #[error("probe depth must be at least 1")]
    ZeroDepth,
    #[error("conjunct index {index} outside 1..={n}")]
    SelectorOutOfRange { index: usize, n: usize },
    #[error("literal {0} was not registered as an assumption")]
    UnregisteredAssumption(i64),
    #[error("probe needs {needed} variables, budget is {budget}")]
    VariableBudget { needed: usize, budget: usize },
    #[error("propagation budget of {0} exceeded")]
    PropagationBudget(u64),
    #[error("satisfiability search exceeded the budget of {0} states")]
    StateBudget(usize),
    #[error("deadline reached")]
    Timeout,
    #[error("interrupted")]
    Interrupted,
    #[error("depth {requested} exceeds the cap of {cap}")]
    DepthCap { requested: usize, cap: usize },
}

impl Error {
    /// Limits that stop a search without deciding it.
    pub fn is_resource(&self) -> bool {
        matches!(
            self,
            Error::VariableBudget { .. }
                | Error::PropagationBudget(_)
                | Error::StateBudget(_)
                | Error::DepthCap { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
