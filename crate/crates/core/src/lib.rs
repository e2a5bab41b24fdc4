//! Global minimization of non-convex polynomials over algebraic subsets of
//! the hypercube `[-1,1]^D`.
//!
//! Instead of attacking the polynomial program directly, the solver optimizes
//! over moments of sums of product measures supported on the feasible set.
//! Positive-semidefiniteness of the per-dimension Hankel moment matrices is
//! enforced through a Burer-Monteiro factorization, which turns the problem
//! into a smooth equality-constrained NLP with essentially no spurious local
//! minima. A self-contained augmented-Lagrangian / L-BFGS solver handles the
//! NLP, and the optimizer location is read back off the dominant mixture
//! component's first moments.
//!
//! Pipeline for one problem:
//!
//! ```ignore
//! let problem = polymoment::bench::gen_annulus(2).slackify();
//! let nlp = polymoment::reformulation::build(&problem, 2)?;
//! let x0 = nlp.initial_point(7);
//! let report = polymoment::solver::solve(&nlp, &x0, None, &SolverConfig::default())?;
//! let mu = nlp.moment_vector(&report.point);
//! let solution = polymoment::recovery::recover_location(&mu, &problem)?;
//! ```
//!
//! The `polymoment` binary wraps the same pipeline behind `solve`, `bench`,
//! `oracle` and `gen` subcommands.

pub mod bench;
pub mod moment;
pub mod poly;
pub mod recovery;
pub mod reformulation;
pub mod solver;

pub use poly::{parse_problem, serialize_problem, MultiIndex, ProblemSpec, SparsePoly};
