//! Files and command line around [`obbcgc_core`]: DOTA v1.0 annotation
//! parsing, canonical box records, run configuration, CSV/JSON reports and
//! the `obbcgc` subcommands.

pub mod cli;
pub mod config;
pub mod dota;
mod error;
pub mod format;
pub mod report;

pub use error::{Error, Result};
pub use obbcgc_core::anchors::{generate_anchors, AnchorGrid};
pub use obbcgc_core::fit::quad_to_obb;
