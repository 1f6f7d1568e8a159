//! Contextuality in systems of binary random variables with signaling
//! (violations of marginal selectivity) allowed.
//!
//! * [`measures`]: closed-form Δ₀, Δ_CHSH, Δ_min and the contextuality degree
//!   for Bell (2×2) and Leggett–Garg (cyclic-3) systems.
//! * [`polytope`]: re-derives the underlying inequality systems from the
//!   correlation polytope (double description, Fourier–Motzkin elimination,
//!   LP redundancy removal).
//! * [`oracle`]: exact LP over couplings, used as independent ground truth.
//! * [`io`] and [`cli`]: JSON input documents, reports, and the binary.
//!
//! All arithmetic is exact ([`Rational`]).

pub mod cli;
pub mod error;
pub mod io;
pub mod linear_system;
pub mod lp;
pub mod measures;
pub mod polytope;
pub mod model;
pub mod oracle;
pub mod rational;

pub use error::{Error, Result};
pub use linear_system::{LinearSystem, Row};
pub use model::{
    coupling_marginal, expectations_from_table, validate_context, BellObservables,
    ConnectionExpectations, ContextTable, Coupling, LGObservables, ObservedSystem, Observables,
    SystemKind,
};
pub use rational::Rational;
