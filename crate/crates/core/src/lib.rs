pub mod bounds;
pub mod cuts;
pub mod error;
pub mod graph;
pub mod oracle;
pub mod pauli;
pub mod states;

pub use bounds::{classify, criteria_report, BoundReport, Verdict};
pub use cuts::{Partition, SeparabilityClass};
pub use error::{Error, Result};
pub use graph::{Graph, Relation};
pub use oracle::OracleConfig;
pub use pauli::{cp_expand, OperatorSet, PauliString};
pub use states::{evaluate_q, QuantumState};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/pauli.md")]
    mod pauli {}
    #[doc = include_str!("../../../book/src/cuts.md")]
    mod cuts {}
    #[doc = include_str!("../../../book/src/bounds.md")]
    mod bounds {}
    #[doc = include_str!("../../../book/src/states.md")]
    mod states {}
    #[doc = include_str!("../../../book/src/oracle.md")]
    mod oracle {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
