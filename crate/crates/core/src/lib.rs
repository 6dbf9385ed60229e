//! Exact computations in rational Cherednik algebras of small finite matrix
//! groups.

pub mod error;
pub mod groups;
pub mod jobs;
pub mod linalg;
pub mod params;
pub mod parse;
pub mod pbw;
pub mod rank1;
pub mod representations;
pub mod scalars;

pub use error::{Error, Result};
