pub mod cli;
pub mod cohomology;
pub mod error;
pub mod integrate;
pub mod levi;
pub mod manifold;
pub mod modelspace;
pub mod morse;
pub mod numeric;
pub mod report;
pub mod szego;

pub use error::{Error, Result};
