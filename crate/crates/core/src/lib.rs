pub mod error;
pub mod filling;
pub mod folding;
pub mod freegroup;
pub mod graph;
pub mod natural_maps;
pub mod sampling;
pub mod spine;
pub mod verify;

pub use error::{Error, Result};
