pub mod dominance;
pub mod error;
pub mod fixtures;
pub mod generate;
pub mod hierarchy;
pub mod model;
pub mod packing;
pub mod pager;
pub mod ranking;
pub mod par;
pub mod skyline;
pub mod spatial;

pub use error::{Error, Result};
pub use par::Parallelism;
