//! Two-distance entropy continuity bounds and capacity upper bounds for
//! approximately degradable quantum channels.

pub mod capacity;
pub mod channel;
pub mod entropy;
pub mod error;
pub mod json;
pub mod linalg;
pub mod norms;
pub mod optim;
pub mod sdp;

pub use error::{Error, Result};
