//! Hermitian and Poincaré Picard groups of explicit rings with involution.

pub mod abgrp;
pub mod brauerseq;
pub mod classgrp;
pub mod config;
pub mod error;
pub mod hermforms;
pub mod matrix;
pub mod pnpic;
pub mod ringsinv;
pub mod structure;
pub mod unitsnorm;

pub use config::Limits;
pub use error::{Error, Result};
