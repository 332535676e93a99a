//! Exact class computations for genus-zero moduli spaces and their
//! `F_1`-structures.
//!
//! * [`motive`]: polynomials in the torus class `T` with big-integer
//!   coefficients, basis changes, point counts, the blowup formula.
//! * [`genseries`]: recursions and differential-equation solvers for
//!   `[M̄_{0,n}]` and `[T_{d,n}]`.
//! * [`treeop`]: the operad of rooted trees, stability, strata enumeration.
//! * [`torif`]: an expression calculus for (constructible) torifications.
//! * [`blueprint`]: blueprint presentations of `M̄_{0,n}` and crossed products.
//! * [`cli`]: the `f1kit` command surface.

pub mod blueprint;
pub mod cli;
pub mod error;
pub mod genseries;
pub mod motive;
pub mod perm;
pub mod torif;
pub mod treeop;

pub use error::{Error, Result};
pub use genseries::{
    f1m_count, mbar0_class, open_stratum_class, solve_tdn_ode, tdn_class, EGFSeries,
};
pub use motive::{blowup_class, expand_falling, proj_class, Basis, MotClass};
pub use perm::Permutation;
pub use treeop::RootedTree;
