//! Construction and machine verification of quadratic APN functions over
//! GF(2^n), together with the CCZ-equivalence invariants (code weight
//! distributions, Γ-rank, Δ-rank) used to tell them apart.
//!
//! Module map:
//!
//! * [`gf2n`]: field arithmetic for 2 <= n <= 24.
//! * [`vbf`]: functions on GF(2^n), differential and Walsh spectra.
//! * [`families`]: validated constructors for the seven APN families.
//! * [`proofcheck`]: step-by-step numeric verification of the APN proof
//!   for the quadrinomial family.
//! * [`invariants`]: parity-check codes, dual weight distributions,
//!   development ranks and EA transforms.
//! * [`bitmatrix`]: packed GF(2) matrices and the incremental rank engine.
//! * [`formats`]: function files, reports and CSV export.

pub mod bitmatrix;
pub mod families;
pub mod formats;
pub mod gf2n;
pub mod invariants;
pub mod proofcheck;
pub mod vbf;

pub use bitmatrix::{BitMatrix, RankEngine};
pub use families::{build_family, FamilyParams};
pub use gf2n::{make_field, Elem, FieldSpec};
pub use vbf::{FunctionSpec, Spectrum, SpectrumKind, Term};

/// Seed used whenever a caller does not supply one.
pub const DEFAULT_SEED: u64 = 0x4150_4e5f_3132;

/// Environment variable holding the rank engine's memory cap in bytes.
pub const MEMORY_CAP_ENV: &str = "APNKIT_MEM_CAP";

/// Size caps for the expensive computations.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Largest n for which differential and Walsh spectra are computed.
    pub spectra_max_n: u32,
    /// Largest n for which development ranks are computed.
    pub rank_max_n: u32,
    /// Upper bound on pivot storage of the rank engine, in bytes.
    pub memory_cap: Option<usize>,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { spectra_max_n: 16, rank_max_n: 9, memory_cap: None }
    }
}

impl Limits {
    /// Default caps with the memory cap read from [`MEMORY_CAP_ENV`].
    pub fn from_env() -> Self {
        let memory_cap = std::env::var(MEMORY_CAP_ENV).ok().and_then(|v| v.trim().parse().ok());
        Limits { memory_cap, ..Limits::default() }
    }

    /// Lifts the size caps (used for `--big-rank` and similar overrides).
    pub fn unbounded(self) -> Self {
        Limits { spectra_max_n: gf2n::MAX_DEGREE, rank_max_n: gf2n::MAX_DEGREE, ..self }
    }
}
