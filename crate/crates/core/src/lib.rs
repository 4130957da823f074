pub mod chart;
pub mod eigen;
pub mod error;
pub mod geometry;
pub mod harmonic;
pub mod linalg;
pub mod oracle;
pub mod poly;
pub mod report;
pub mod reproduction;
pub mod scalar;
pub mod sl2;
pub mod stability;
pub mod unipoly;

pub use error::{Error, Result};
