//! Khovanov homology of links via the scanning algorithm.

pub mod cob;
pub mod complex;
pub mod cube;
pub mod diagram;
pub mod error;
pub mod homology;
pub mod jones;
pub mod ring;
pub mod scan;
pub mod smith;
pub mod three_braid;

pub use error::{KhError, Result};
