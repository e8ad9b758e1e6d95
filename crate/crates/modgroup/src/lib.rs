//! Finitely generated subgroups of the modular group `PSL(2, Z) = <a, b | a^2 = b^3 = 1>`,
//! represented by their Stallings graphs.
//!
//! The crate provides the reduced-word algebra over `{a, b, b^-1}`, the graph model
//! (a partial involution `alpha` for `a`-edges and a partial map `beta` with closed
//! triangles for `b`-edges), construction of Stallings graphs from generating sets,
//! the silhouette rewriting system, deciders for freeness, finite index, parabolicity
//! and almost malnormality, exact uniform samplers, brute-force enumeration oracles,
//! and a seeded experiment harness. The `modgroup` binary exposes all of it.

pub mod analysis;
pub mod codec;
pub mod experiment;
pub mod fixtures;
pub mod graph;
pub mod oracle;
pub mod sampler;
pub mod silhouette;
pub mod stallings;
pub mod tables;
pub mod word;

/// Crate-wide error type. Variants map onto the CLI exit codes: parse and
/// validation problems are domain errors (exit 1), limit refusals are usage
/// errors (exit 2), failed verifications exit 3.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("word syntax error at byte {position}: {message}")]
    WordSyntax { position: usize, message: String },

    #[error("malformed graph: {0}")]
    Malformed(String),

    #[error("invalid graph: {0}")]
    Invalid(String),

    #[error("move not applicable: {0}")]
    MoveNotApplicable(String),

    #[error("enumeration limit exceeded: n = {n} is above the limit {limit} for mode {mode} ({estimate})")]
    EnumerationLimit {
        n: u32,
        limit: u32,
        mode: String,
        estimate: String,
    },

    #[error("bad argument: {0}")]
    BadArgument(String),

    #[error("verification failed: {0}")]
    VerificationFailed(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
