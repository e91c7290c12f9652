//! Monotone NAE-3-SAT and its reduction to span-λ edge labeling.

mod build;
mod contract;
mod formula;
mod gadgets;
mod joint;

pub use build::{
    build_reduction, decode_assignment, format_sidecar, parse_sidecar, BuildError, DecodeError,
    ReductionArtifact, Sidecar,
};
pub use contract::{
    check_gadget_contract, enumeration_transcript, ContractError, ContractReport,
};
pub use formula::{
    nae_eval, nae_satisfiable, parse_mcnf, format_mcnf, Assignment, Formula3MCNF, FormulaError,
    NaeOutcome, MAX_BRUTE_FORCE_VARIABLES,
};
pub use gadgets::{
    gadget, max_degree_for, Contract, GadgetError, GadgetRole, GadgetTemplate, Port, PortDir,
};
pub use joint::{joint_complete, JointCase, JointCompletion, JointError};

use crate::labeling::Label;

/// The odd and even labels up to `lambda`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelSets {
    pub odd: Vec<Label>,
    pub even: Vec<Label>,
}

impl LabelSets {
    pub fn new(lambda: Label) -> Self {
        LabelSets {
            odd: (0..=lambda).filter(|x| x % 2 == 1).collect(),
            even: (0..=lambda).filter(|x| x % 2 == 0).collect(),
        }
    }
}

/// Which port labels mean false and which mean true.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polarity {
    pub false_labels: Vec<Label>,
    pub true_labels: Vec<Label>,
}

impl Polarity {
    /// `{0, 1}` is false and `{λ−1, λ}` is true.
    pub fn standard(lambda: Label) -> Self {
        Polarity {
            false_labels: vec![0, 1],
            true_labels: vec![lambda - 1, lambda],
        }
    }

    pub fn value(&self, label: Label) -> Option<bool> {
        if self.false_labels.contains(&label) {
            Some(false)
        } else if self.true_labels.contains(&label) {
            Some(true)
        } else {
            None
        }
    }
}
