pub mod abl;
pub mod causal;
pub mod cli;
pub mod error;
pub mod hardy;
pub mod prodrule;
pub mod scenario;
pub mod statespace;

pub use error::{Error, Result};
