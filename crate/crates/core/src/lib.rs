pub mod cli;
pub mod code;
pub mod error;
pub mod gf;
pub mod matrix;
pub mod metrics;
pub mod placement;
pub mod presets;
pub mod reliability;
pub mod report;
pub mod sim;

pub use code::{CodeDefinition, CodeSpec, ErasurePattern, Family, Role, Stripe};
pub use error::{Error, Result};
pub use gf::Gf;
pub use matrix::GfMatrix;
