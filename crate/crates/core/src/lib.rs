pub mod cli;
pub mod entropy;
pub mod error;
pub(crate) mod fit;
pub mod groupoid;
pub mod sft;
pub mod traces;
pub mod weights;

pub use error::{Error, Result};
