//! LTLf syntax: parsing, printing, conjunct splitting, the subformula DAG
//! and direct evaluation over finite traces.

mod dag;
mod formula;
mod parser;
mod spec;
mod trace;

pub use dag::{subformula_table, NodeId, NodeKind, SubformulaTable, TableRow};
pub use formula::Formula;
pub use parser::{parse, parse_conjunct_lines, ParseError, ParseErrorKind};
pub use spec::{split_conjunctive, ConjunctiveSpec, SelectorSet, SplitMode};
pub use trace::{evaluate, State, Trace};
