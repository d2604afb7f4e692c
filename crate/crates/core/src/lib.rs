//! Operator orderings over free noncommutative algebras.
//!
//! The crate relates any two monomial orderings of operator products through
//! contractions and operator directional derivatives, and uses that machinery
//! to build Baker-Campbell-Hausdorff and (discrete-time) Magnus expansions.
//! Every symbolic result can be cross-checked against exact formal-log
//! oracles and against random matrix representations.

pub mod exprparse;
pub mod gotcore;
pub mod matrep;
pub mod ncalg;
pub mod ordering;
pub mod series;
pub mod suite;

pub use gotcore::{Decomposition, GotError, OrderingPair, VerificationReport};
pub use ncalg::{rat, GradedSeries, Generator, NcPoly, Scalar, Word};
pub use ordering::{MonomialOrdering, OrderingRule, WeightedOrdering};
