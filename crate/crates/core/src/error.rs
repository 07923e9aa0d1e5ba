use pcycle_ilp::IlpError;
use thiserror::Error;

use crate::topology::LinkId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("line {line}: unknown node `{node}`")]
    UnknownNode { line: usize, node: String },

    #[error("line {line}: duplicate link {a}-{b}")]
    DuplicateLink { line: usize, a: String, b: String },

    #[error("line {line}: self-loop on node `{node}`")]
    SelfLoop { line: usize, node: String },

    #[error("invalid network: {0}")]
    InvalidNetwork(String),

    #[error("cycle enumeration exceeded the cap of {cap} cycles")]
    CycleCap { cap: usize },

    #[error("unknown link id {0}")]
    UnknownLink(usize),

    #[error("unknown cycle id {0}")]
    UnknownCycle(usize),

    #[error("link {link} ({endpoints}) carries working capacity but straddles no candidate cycle")]
    NoStraddlingCycle { link: LinkId, endpoints: String },

    #[error("link {link} ({endpoints}) carries working capacity but has no protection-pair")]
    NoProtectionPair { link: LinkId, endpoints: String },

    #[error("malformed plan: {0}")]
    MalformedPlan(String),

    #[error("plan line {line}: {message}")]
    PlanSyntax { line: usize, message: String },

    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },

    #[error("SE undefined: total working capacity is zero")]
    SeUndefined,

    #[error(transparent)]
    Solver(#[from] IlpError),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}
