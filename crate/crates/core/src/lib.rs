//! Finite-time Lyapunov exponents and Lyapunov dimensions of attractors.

pub mod atlas;
pub mod config;
pub mod error;
pub mod exact;
pub mod flow;
pub mod lyap;
pub mod report;
pub mod smallmat;
pub mod systems;
pub mod verify;

pub use error::{Error, Result};
