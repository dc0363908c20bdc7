use core::fmt;

/// Contract violations and refusals raised by the pipeline stages.
#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    /// A distance query was made against a graph with no segments.
    EmptyGraph,
    /// The instance has no disks.
    EmptyInstance,
    /// Disk `index` has a non-finite coordinate or a non-positive radius.
    InvalidDisk { index: usize },
    /// A visiting order is not a permutation of the disk indices.
    NotAPermutation,
    /// A tolerance or other numeric parameter is out of range.
    InvalidParameter(&'static str),
    /// An exponential solver was asked to handle more items than its limit.
    TooLarge { size: usize, limit: usize },
    /// A hyperedge has no vertices, so no hitting set exists.
    EmptyEdge { edge: usize },
    /// A disk passed to a connector stage already touches the base graph.
    AlreadyConnected { index: usize },
    /// The assembled graph is not connected.
    Disconnected { components: usize },
    /// A vertex of the doubled graph has odd degree.
    OddDegree { vertex: usize },
    /// A structural property that the construction guarantees did not hold.
    Violated { property: &'static str, detail: alloc::string::String },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::EmptyGraph => write!(f, "distance query against an empty graph"),
            Error::EmptyInstance => write!(f, "instance has no disks"),
            Error::InvalidDisk { index } => {
                write!(f, "disk {index} must have finite center and positive finite radius")
            }
            Error::NotAPermutation => write!(f, "visiting order is not a permutation"),
            Error::InvalidParameter(what) => write!(f, "invalid parameter: {what}"),
            Error::TooLarge { size, limit } => {
                write!(f, "instance of size {size} exceeds the limit of {limit}")
            }
            Error::EmptyEdge { edge } => write!(f, "hyperedge {edge} is empty"),
            Error::AlreadyConnected { index } => {
                write!(f, "disk {index} already intersects the base graph")
            }
            Error::Disconnected { components } => {
                write!(f, "assembled graph has {components} connected components")
            }
            Error::OddDegree { vertex } => write!(f, "vertex {vertex} has odd degree"),
            Error::Violated { property, detail } => write!(f, "{property} violated: {detail}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
