use std::path::PathBuf;

use gammaflip_core::gamma::GammaError;
use gammaflip_core::kinetic::KineticError;
use gammaflip_core::recoupling::RecouplingError;
use gammaflip_core::report::ReportError;
use gammaflip_core::spine::SpineError;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot access {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{message}")]
    Parse {
        module: &'static str,
        message: String,
    },
    #[error("{message}")]
    Precondition {
        module: &'static str,
        message: String,
    },
    #[error("{0}")]
    NonGeneric(String),
}

#[derive(Serialize)]
struct ErrorRecord<'a> {
    error: &'a str,
    module: &'a str,
    message: String,
    exit_code: u8,
}

impl CliError {
    pub fn parse(module: &'static str, message: impl ToString) -> CliError {
        CliError::Parse {
            module,
            message: message.to_string(),
        }
    }

    pub fn precondition(module: &'static str, message: impl ToString) -> CliError {
        CliError::Precondition {
            module,
            message: message.to_string(),
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. } | CliError::Precondition { .. } => 2,
            CliError::Parse { .. } => 3,
            CliError::NonGeneric(_) => 4,
        }
    }

    /// One-line JSON record for stderr.
    pub fn to_json(&self) -> String {
        let (error, module) = match self {
            CliError::Io { .. } => ("io", "cli"),
            CliError::Parse { module, .. } => ("parse", *module),
            CliError::Precondition { module, .. } => ("precondition", *module),
            CliError::NonGeneric(_) => ("non_generic_scene", "kinetic"),
        };
        let record = ErrorRecord {
            error,
            module,
            message: self.to_string(),
            exit_code: self.exit_code(),
        };
        serde_json::to_string(&record).expect("error record serializes")
    }
}

impl From<KineticError> for CliError {
    fn from(e: KineticError) -> CliError {
        match e {
            KineticError::DegenerateTriangle
            | KineticError::DegenerateConfiguration(_)
            | KineticError::HullChange { .. }
            | KineticError::TriangleCollapse { .. }
            | KineticError::SimultaneousEvents { .. } => CliError::NonGeneric(e.to_string()),
            other => CliError::precondition("kinetic", other),
        }
    }
}

impl From<RecouplingError> for CliError {
    fn from(e: RecouplingError) -> CliError {
        match e {
            RecouplingError::Kinetic(k) => k.into(),
            other => CliError::precondition("recoupling", other),
        }
    }
}

impl From<GammaError> for CliError {
    fn from(e: GammaError) -> CliError {
        match e {
            GammaError::Parse(_) => CliError::parse("gamma", e),
            other => CliError::precondition("gamma", other),
        }
    }
}

impl From<SpineError> for CliError {
    fn from(e: SpineError) -> CliError {
        match e {
            SpineError::Parse(_) => CliError::parse("spine", e),
            other => CliError::precondition("spine", other),
        }
    }
}

impl From<ReportError> for CliError {
    fn from(e: ReportError) -> CliError {
        match e {
            ReportError::Gamma(g) => g.into(),
            ReportError::Kinetic(k) => k.into(),
        }
    }
}
