//! Numerical toolkit for dissipative dynamics on finite-dimensional
//! C*-algebras: generators, semigroups, dissipativity certification, spin
//! chains, and GNS representations.

pub mod algebra;
pub mod dissipativity;
pub mod error;
pub mod generators;
pub mod gns;
pub mod json;
pub mod lattice;
pub mod linalg;
pub mod random;
pub mod scalar;
pub mod semigroup;

pub use algebra::{Algebra, AlgebraElement, BasisIndex, PositivityCheck, PositivityWitness, State};
pub use dissipativity::{CertifyOptions, DissipativityCheck, DissipativityReport, WellBehavedReport};
pub use error::Error;
pub use generators::Superoperator;
pub use gns::{GnsRepresentation, ImplementationReport, ImplementingForm, ImplementingOperator};
pub use lattice::{Interaction, LatticeRegion};
pub use scalar::{Cpx, Scalar};

/// Concrete aliases at default (f64) precision.
pub type Element = AlgebraElement<f64>;
pub type StateF64 = State<f64>;
pub type Map = Superoperator<f64>;
pub type C64 = Cpx<f64>;
