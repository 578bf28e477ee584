pub mod canonical;
pub mod error;
pub mod experiments;
pub mod family;
pub mod growth;
pub mod machines;
pub mod permquot;
pub mod tree;

pub use error::{Error, Result};
pub use experiments::ParamPoint;

pub type ParamPoint64 = ParamPoint<f64>;
pub type ParamPoint32 = ParamPoint<f32>;
