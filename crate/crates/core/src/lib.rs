//! Koszul homology of graph edge ideals over an exact field.
//!
//! [`graph`] holds the graphs, [`chain`] the chain level of the Koszul
//! complex, [`stratum`] its finite multigraded pieces, [`homology`] the
//! linear algebra on top, [`classes`] the distinguished classes and
//! structural maps between graphs, and [`verify`] the named check suites.

pub mod chain;
pub mod classes;
pub mod field;
pub mod graph;
pub mod homology;
pub mod linalg;
pub mod stratum;
pub mod verify;

pub use classes::{ClassDescriptor, ClassError, StarSpec};
pub use verify::{Suite, VerificationReport, VerifyError};
pub use chain::{ChainElement, ChainError, Divisor, EdgeSet, Multidegree, QuotientSpec, WedgeTerm};
pub use field::{Field, FieldError, Rational, Scalar, DEFAULT_PRIME};
pub use linalg::{Matrix, Subspace};
pub use stratum::{stratum_basis, Stratum};
pub use homology::{default_box, widened_box, HomClass, HomologyEngine, HomologyError, HomologyStratum};
pub use graph::{EdgeAssignment, GlueMap, Graph, GraphError, Matching, SplitMap};
