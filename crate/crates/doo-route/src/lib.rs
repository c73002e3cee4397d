//! File formats, command-line interface, SVG rendering and the parallel
//! benchmark harness for [`doo_route_core`].

pub mod bench;
pub mod cli;
pub mod io;
pub mod svg;

use doo_route_core::configuration::EncodeError;
use doo_route_core::geometry::GeometryError;
use doo_route_core::graph::GraphError;
use doo_route_core::router::RouterError;
use doo_route_core::world::{EpisodeError, WorldError};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}: {1}")]
    Io(String, String),
    #[error("{0}: {1}")]
    Parse(String, String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Encode(#[from] EncodeError),
    #[error("{0}")]
    Invalid(String),
    #[error("NoProgress: no valid action reduces the distance {0}")]
    NoProgress(usize),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::NoProgress(_) => 3,
            CliError::Internal(_) => 1,
            _ => 2,
        }
    }
}

impl From<RouterError> for CliError {
    fn from(e: RouterError) -> Self {
        match e {
            RouterError::NoProgress(d) => CliError::NoProgress(d),
            other => CliError::Invalid(other.to_string()),
        }
    }
}

impl From<WorldError> for CliError {
    fn from(e: WorldError) -> Self {
        match e {
            WorldError::Geometry(e) => e.into(),
            WorldError::Graph(e) => e.into(),
            WorldError::Encode(e) => e.into(),
            WorldError::Router(e) => e.into(),
            WorldError::InvalidConfiguration(_) | WorldError::GenerationFailure(_) => CliError::Invalid(e.to_string()),
            other => CliError::Internal(other.to_string()),
        }
    }
}

impl From<EpisodeError> for CliError {
    fn from(e: EpisodeError) -> Self {
        match e {
            EpisodeError::Router(e) => e.into(),
            EpisodeError::World(e) => e.into(),
            EpisodeError::ZeroCap | EpisodeError::InvalidGoal(_) => CliError::Invalid(e.to_string()),
            other => CliError::Internal(other.to_string()),
        }
    }
}
