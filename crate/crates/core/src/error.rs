use thiserror::Error;

use crate::abgrp::GroupError;
use crate::brauerseq::ScenarioError;
use crate::classgrp::ClassError;
use crate::hermforms::FormError;
use crate::ringsinv::RingError;
use crate::structure::StructureError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error(transparent)]
    Class(#[from] ClassError),
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
