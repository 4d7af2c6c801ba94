use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("element {element} is outside the ground set of size {n}")]
    InvalidElement { element: usize, n: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("input set is empty")]
    EmptyInput,

    #[error("objective `{0}` has no compressed marginal summary")]
    UnsupportedSummary(&'static str),

    #[error("machine {machine} holds {load} elements, capacity is {capacity}")]
    CapacityViolation {
        machine: usize,
        load: usize,
        capacity: usize,
    },

    #[error("constraint infeasible: {0}")]
    Infeasible(String),

    #[error("enumeration of {subsets} subsets exceeds the limit of {limit}")]
    TooLarge { subsets: u128, limit: u128 },
}
