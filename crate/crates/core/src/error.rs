use thiserror::Error;

use crate::lattice::NodeRef;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid hammock specification: {0}")]
    InvalidSpec(String),

    #[error("node {node} is outside the {rows} x {cols} lattice ({detail})")]
    OutOfBounds {
        node: NodeRef,
        rows: usize,
        cols: usize,
        detail: String,
    },

    #[error("node {0} is a terminal node; an interior node (x,y) is required here")]
    TerminalNode(NodeRef),

    #[error("terminal node {0} is not supported by the {1} method; use the dense oracle instead")]
    UnsupportedNode(NodeRef, &'static str),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("parameter out of range: {0}")]
    Domain(String),

    #[error("singular parameter: {0}")]
    SingularParameter(String),

    #[error("problem size {nodes} exceeds the dense cap of {cap} nodes for {what}")]
    SizeCap {
        nodes: usize,
        cap: usize,
        what: &'static str,
    },

    #[error("cannot parse node '{0}': expected 'x,y', 'O' or 'OP'")]
    NodeSyntax(String),

    #[error("internal error: {0}")]
    Internal(String),
}
