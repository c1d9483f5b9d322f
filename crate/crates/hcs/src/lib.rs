//! Catalog files, verification sweeps, and the `hcs` command line.

pub mod catalog_file;
pub mod cli;
pub mod verify;

pub use catalog_file::{CatalogError, CatalogFile};
