//! Certification that the lines generate the Néron–Severi lattice.
//!
//! Two pipelines are provided:
//!
//! * **discriminant mode** compares the discriminant of the line lattice `N`
//!   with that of a lattice `N_p` of full rank on a supersingular reduction;
//!   a squarefree gcd shows `N` is saturated;
//! * **duality mode** shows, for each prime `l | m`, that the pairing
//!   `N / lN -> Hom(L, F_l)` is injective, where `L` is spanned by `N` and
//!   pushed-down special lines. The kernel is cut down incrementally with
//!   random batches of orbit columns.
//!
//! Both produce a [`Certificate`] that records enough to replay the run.

mod discriminant;
mod duality;
mod primitivity;
mod table;

use serde::Serialize;
use thiserror::Error;

use crate::char_p_divisors::{CharPError, CoverParams};
use crate::exact_linalg::LinalgError;
use crate::fermat_combinatorics::CombinatoricsError;
use crate::field_tower::FieldError;
use crate::line_lattice::LatticeError;

pub use discriminant::{
    certify_discriminant, mixed_basis_sigmas, negative_control, reference_discriminants,
    sigma_for_index, DiscriminantData, NegativeControl, DISCRIMINANT_DEGREES,
};
pub use duality::{certify_duality, reproduce_table_row, reproduce_table_row_with};
pub use primitivity::{primitivity_toolkit, PrimitivityCheck, PrimitivityReport};
pub use table::{Table, TableRow};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum CertifyError {
    #[error("degree {0} has no row in the table")]
    RowNotFound(u64),
    #[error("discriminant mode is not available for degree {0}")]
    UnsupportedDegree(u64),
    #[error("invalid configuration: {0}")]
    BadConfig(String),
    #[error("table line {line}: {msg}")]
    Table { line: usize, msg: String },
    #[error("{what}: expected {expected}, computed {found}")]
    OracleMismatch {
        what: String,
        expected: String,
        found: String,
    },
    #[error("{0}")]
    Io(String),
    #[error(transparent)]
    CharP(#[from] CharPError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Combinatorics(#[from] CombinatoricsError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Mode {
    #[serde(rename = "duality")]
    Duality,
    #[serde(rename = "disc")]
    Discriminant,
}

impl std::str::FromStr for Mode {
    type Err = CertifyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "duality" => Ok(Mode::Duality),
            "disc" | "discriminant" => Ok(Mode::Discriminant),
            _ => Err(CertifyError::BadConfig(format!("unknown mode {s:?}"))),
        }
    }
}

/// `FAILED` is reserved for runs whose internal consistency checks broke
/// (a nontrivial deck stabilizer, or a self-intersection that disagrees
/// with the adjunction value). A nonzero terminal kernel or a non-squarefree
/// gcd only gives `INCONCLUSIVE`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Generated,
    Inconclusive,
    Failed,
}

impl Verdict {
    /// Process exit code for the CLI.
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Generated => 0,
            Verdict::Inconclusive => 2,
            Verdict::Failed => 1,
        }
    }
}

/// An `(alpha, beta)` pair as coefficient lists in powers of `gamma`,
/// constant term first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairSpec {
    pub alpha: Vec<i64>,
    pub beta: Vec<i64>,
}

/// Pairs to be used for the listed primes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairGroup {
    pub ells: Vec<u64>,
    pub pairs: Vec<PairSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificationConfig {
    pub m: u64,
    pub mode: Mode,
    /// Defining polynomial of `F_{q^2}`; searched for when absent.
    pub f: Option<Vec<i64>>,
    /// Explicit pairs; primes without a group use random pairs.
    pub pair_groups: Vec<PairGroup>,
    /// Primes to certify; all prime divisors of `m` by default.
    pub ells: Option<Vec<u64>>,
    pub seed: u64,
    /// First batch size; `4m` by default. Later batches double.
    pub batch: Option<usize>,
    /// Batches without progress before moving to the next pair.
    pub stall_limit: usize,
    /// Random pairs tried per prime when no explicit pairs are given.
    pub max_random_pairs: usize,
}

impl CertificationConfig {
    pub fn new(m: u64, mode: Mode) -> Self {
        Self {
            m,
            mode,
            f: None,
            pair_groups: Vec::new(),
            ells: None,
            seed: 0,
            batch: None,
            stall_limit: 3,
            max_random_pairs: 4,
        }
    }

    /// Pins `f` and the pairs to table rows of one degree.
    pub fn from_rows(rows: &[&TableRow]) -> Result<Self, CertifyError> {
        let first = rows
            .first()
            .ok_or_else(|| CertifyError::BadConfig("no table rows".into()))?;
        if rows.iter().any(|r| r.m != first.m || r.f != first.f) {
            return Err(CertifyError::BadConfig(format!(
                "rows for degree {} disagree on m or f",
                first.m
            )));
        }
        let mut cfg = Self::new(first.m, Mode::Duality);
        cfg.f = Some(first.f.clone());
        cfg.pair_groups = rows
            .iter()
            .map(|r| PairGroup {
                ells: r.ells.clone(),
                pairs: r.pairs.clone(),
            })
            .collect();
        Ok(cfg)
    }

    /// The primes to certify, checked to be prime divisors of `m`.
    pub fn resolved_ells(&self) -> Result<Vec<u64>, CertifyError> {
        let ells = match &self.ells {
            Some(v) => v.clone(),
            None => crate::numtheory::prime_divisors(self.m),
        };
        if ells.is_empty() {
            return Err(CertifyError::BadConfig("empty prime list".into()));
        }
        for &l in &ells {
            if !crate::numtheory::is_prime(l) || self.m % l != 0 {
                return Err(CertifyError::BadConfig(format!(
                    "{l} is not a prime divisor of {}",
                    self.m
                )));
            }
        }
        Ok(ells)
    }

    pub fn initial_batch(&self) -> usize {
        self.batch.unwrap_or(4 * self.m as usize).max(1)
    }

    fn pairs_for(&self, ell: u64) -> Option<&[PairSpec]> {
        self.pair_groups
            .iter()
            .find(|g| g.ells.contains(&ell))
            .map(|g| g.pairs.as_slice())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CoverSummary {
    pub r: u64,
    pub q: u64,
    pub p: u64,
    pub n: u32,
}

impl From<&CoverParams> for CoverSummary {
    fn from(c: &CoverParams) -> Self {
        Self {
            r: c.r,
            q: c.q,
            p: c.p,
            n: c.n,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Schedule {
    pub initial_batch: usize,
    pub growth: &'static str,
    pub stall_limit: usize,
    pub max_random_pairs: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EllRecord {
    pub ell: u64,
    /// Kernel dimension after initialisation and after every batch.
    pub trace: Vec<usize>,
    pub pairs_used: usize,
    pub columns: usize,
    /// Orbit elements skipped because a pulled-back line coincided with
    /// the orbit line.
    pub coincidences: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiscRecord {
    /// Exact value as a decimal string.
    pub value: String,
    pub factorization: String,
    pub rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiscSummary {
    pub lattice: DiscRecord,
    pub reduction: DiscRecord,
    /// `None` when the gcd could not be classified.
    pub squarefree_gcd: Option<bool>,
}

/// Replayable record of one certification run. Field order is fixed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub schema_version: u32,
    pub m: u64,
    pub mode: Mode,
    pub cover: CoverSummary,
    pub f: Vec<i64>,
    pub f_source: &'static str,
    pub pairs: Vec<PairSpec>,
    pub per_ell: Vec<EllRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub discs: Option<DiscSummary>,
    pub verdict: Verdict,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub schedule: Option<Schedule>,
    pub premises: Vec<&'static str>,
    pub warnings: Vec<String>,
    pub elapsed_ms: u64,
}

impl Certificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    /// Equality up to wall-clock time.
    pub fn replays(&self, other: &Certificate) -> bool {
        let mut a = self.clone();
        a.elapsed_ms = other.elapsed_ms;
        a == *other
    }
}

const PREMISES: [&str; 2] = [
    "Neron-Severi groups of the complex surface and of its reduction are torsion-free",
    "reduction at a prime of good reduction embeds NS(S) into NS(S_p) compatibly with the pairing",
];

/// Coefficients of a field element, constant first, with trailing zeros
/// removed.
pub(crate) fn coeff_list(e: &crate::field_tower::FieldElem) -> Vec<i64> {
    let mut v: Vec<i64> = e.coeffs().iter().map(|&c| c as i64).collect();
    while v.len() > 1 && v.last() == Some(&0) {
        v.pop();
    }
    v
}
