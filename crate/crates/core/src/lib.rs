mod error;
pub mod arrangement;
pub mod cluster;
pub mod ehrhart;
pub mod noncrossing;
pub mod nonnesting;
pub mod poly;
pub mod rootsys;
pub mod verify;
pub mod weyl;

pub use error::{Error, Result};
