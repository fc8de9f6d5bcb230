use std::fmt;
use std::process::ExitCode;

/// Why a command stopped, carried up to `main` to pick the exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    /// Verification ran and found a problem in the checked files.
    Rejected,
    Input,
    Internal,
    SizeCap,
}

impl Kind {
    pub fn exit_code(self) -> ExitCode {
        ExitCode::from(match self {
            Kind::Rejected => 1,
            Kind::Input => 2,
            Kind::Internal => 3,
            Kind::SizeCap => 4,
        })
    }
}

#[derive(Debug)]
pub struct Failure {
    pub kind: Kind,
    pub error: anyhow::Error,
}

impl Failure {
    pub fn new(kind: Kind, error: impl Into<anyhow::Error>) -> Self {
        Failure {
            kind,
            error: error.into(),
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#}", self.error)
    }
}

pub type Outcome<T = ()> = Result<T, Failure>;

pub trait Classify<T> {
    fn or_fail(self, kind: Kind) -> Outcome<T>;
}

impl<T, E: Into<anyhow::Error>> Classify<T> for Result<T, E> {
    fn or_fail(self, kind: Kind) -> Outcome<T> {
        self.map_err(|e| Failure::new(kind, e))
    }
}

pub fn input(msg: impl fmt::Display) -> Failure {
    Failure::new(Kind::Input, anyhow::anyhow!("{msg}"))
}

pub fn internal(msg: impl fmt::Display) -> Failure {
    Failure::new(Kind::Internal, anyhow::anyhow!("{msg}"))
}
