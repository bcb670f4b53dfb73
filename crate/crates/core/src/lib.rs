//! Partial difference sets (PDSs) in finite abelian groups.
//!
//! - [`group`]: abelian groups in primary decomposition, power classes, Hall
//!   subgroups and characters.
//! - [`pds`]: exact PDS verification and strongly regular Cayley graph checks.
//! - [`field`]: finite fields and the Paley construction from nonzero squares.
//! - [`feasibility`]: the order-level sieve for Paley-type PDSs.
//! - [`search`]: exhaustive search over power-class unions.
//! - [`cli`]: the `pds-kit` command-line frontend.

pub mod arith;
pub mod cli;
pub mod feasibility;
pub mod field;
pub mod group;
pub mod pds;
pub mod search;

pub use feasibility::{sieve, OrderFactorization, RuleId, Verdict, VerdictKind};
pub use field::{paley_pds, FiniteField};
pub use group::{AbelianGroup, CharacterIndex, GroupElement, HallSubgroup};
pub use pds::{paley_params, verify_pds, CandidateSet, PdsParams, VerificationReport};
pub use search::{search, SearchMode, SearchProblem, SearchResult};
