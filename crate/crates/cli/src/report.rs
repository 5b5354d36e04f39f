//! Error-to-exit-code policy and the report fragments shared by every
//! subcommand. Reports go to standard output as pretty JSON; a one-line
//! human summary goes to standard error.

use despla_core::{Certificate, Error as EngineError, SearchBudget};
use serde::Serialize;

use crate::format::LoadError;

/// Exit codes: 0 success or true verdict, 1 false verdict, 2 engine
/// errors, 64 usage, 65 unparsable or invalid input files, 69 budget.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Load(#[from] LoadError),
    #[error("{0}")]
    Engine(#[from] EngineError),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> CliError {
        CliError::Usage(msg.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 64,
            CliError::Load(_) => 65,
            CliError::Engine(EngineError::BudgetExceeded { .. }) => 69,
            CliError::Engine(_) => 2,
        }
    }
}

/// The search caps a run was performed under; part of every report so
/// cost regressions are visible in recorded output.
#[derive(Debug, Clone, Serialize)]
pub struct BudgetReport {
    pub comma_objects: usize,
    pub cocones: usize,
    pub pspb_objects: usize,
    pub pspb_morphisms: usize,
    pub equiv_objects: usize,
    pub equiv_morphisms: usize,
    pub equiv_candidates: usize,
    pub descent_max_stages: usize,
}

impl From<&SearchBudget> for BudgetReport {
    fn from(b: &SearchBudget) -> BudgetReport {
        BudgetReport {
            comma_objects: b.comma_objects,
            cocones: b.cocones,
            pspb_objects: b.pspb_objects,
            pspb_morphisms: b.pspb_morphisms,
            equiv_objects: b.equiv_objects,
            equiv_morphisms: b.equiv_morphisms,
            equiv_candidates: b.equiv_candidates,
            descent_max_stages: b.descent_max_stages,
        }
    }
}

/// Work counters from one corepresentability search.
#[derive(Debug, Clone, Serialize)]
pub struct CertificateReport {
    pub comma_objects: usize,
    pub candidates_examined: usize,
    pub bijection_pairs: usize,
    pub naturality_checks: usize,
}

impl From<&Certificate> for CertificateReport {
    fn from(c: &Certificate) -> CertificateReport {
        CertificateReport {
            comma_objects: c.comma_objects,
            candidates_examined: c.candidates_examined,
            bijection_pairs: c.bijection_pairs,
            naturality_checks: c.naturality_checks,
        }
    }
}

/// Print the JSON report and the human summary, then return the verdict's
/// exit code.
pub fn emit<T: Serialize>(report: &T, human: &str, code: i32) -> i32 {
    let json = serde_json::to_string_pretty(report).expect("reports always serialize");
    println!("{json}");
    eprintln!("{human}");
    code
}
