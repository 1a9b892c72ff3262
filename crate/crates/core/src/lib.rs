pub mod certify;
pub mod conditions;
pub mod error;
pub mod linalg;
pub mod models;
pub mod planar;
pub mod pointgeom;
pub mod polyform;
pub mod scalar;

pub use error::{Error, Result};
