pub mod classify;
pub mod diagram;
pub mod error;
pub mod fincat;
pub mod functors;
pub mod generate;
pub mod linalg;
pub mod modcat;
pub mod par;
pub mod rep;
pub mod report;

pub use error::{Error, Result};
