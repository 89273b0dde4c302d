//! Exact-arithmetic engine for the elliptic quantum toroidal algebra of type
//! `gl(1)` and the Jordan-quiver (N=2*) gauge theories built on top of it.
//!
//! Everything here is computed over exact rationals: partitions and their
//! arm/leg statistics, truncated multivariate Laurent series in formal nomes
//! and spectral variables, theta and multiple elliptic Gamma expansions,
//! partition-indexed Nekrasov kernels in all their equivalent forms, the
//! free-boson vertex-operator calculus at level (1,N), the vector / q-Fock /
//! elliptic Ruijsenaars representations with relation verifiers, and the
//! 5d/6d instanton series (chi_y genus and elliptic genus) for U(1) and U(M).
//!
//! Identity checks are equalities of truncated series, never tolerance
//! comparisons. The crate ships a CLI (`elltor`) that runs the verification
//! suites and emits coefficient tables; see the `examples/` directory for
//! one runnable demo per major capability.

pub mod params;
pub mod partition;
pub mod series;
pub mod special;
pub mod nekrasov;
pub mod fock;
pub mod reps;
pub mod gauge;
pub mod report;
pub mod cli;

pub use params::ParamPoint;
pub use partition::Partition;
pub use series::{TruncSeries, VarTable};
