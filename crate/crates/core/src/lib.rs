//! Security thresholds for key distribution built on the monogamy of CHSH
//! violations, valid against eavesdroppers whose outcome alphabet is
//! unrestricted.
//!
//! The crate is organised bottom-up:
//!
//! - [`entropy`]: binary/Shannon entropy and mutual information in bits.
//! - [`monogamy`]: closed-form and user-supplied monogamy curves `f(β)`.
//! - [`security`]: the pointwise and β-level sufficient conditions, and a
//!   bisection solver for the critical β.
//! - [`adversary`]: finite-alphabet eavesdropper strategies, the concavity
//!   bound on Eve's conditional entropy, a grid-search oracle for it, and
//!   counterexamples showing why `P_B > P_E` alone is not enough.
//! - [`figio`]: figure sampling, CSV/JSON/SVG emitters and the CLI.
//!
//! ```
//! use monoqkd::monogamy::MonogamyModel;
//! use monoqkd::security::{critical_beta, tsirelson, CriticalStatus};
//!
//! let qm = critical_beta(&MonogamyModel::quantum(), 1e-9).unwrap();
//! assert_eq!(qm.status, CriticalStatus::Root);
//! assert!(qm.beta_star.get() < tsirelson().get());
//! ```

pub mod adversary;
pub mod entropy;
pub mod error;
pub mod figio;
pub mod monogamy;
pub mod numfmt;
pub mod security;

pub use error::{Error, Result};
