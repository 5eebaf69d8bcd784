#![allow(clippy::needless_range_loop)]

pub mod adjoints;
pub mod algebras;
pub mod error;
pub mod exactla;
pub mod fixtures;
pub mod gauge;
pub mod liecore;
pub mod pbw;
pub mod report;

pub use error::{Error, Result};
pub use report::{Check, Report, Status};
