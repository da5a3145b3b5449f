//! Quantale modules and their transforms.
//!
//! The crate is organised bottom-up:
//!
//! * [`quantale`]: carriers (integer chains, the unit interval, powersets of
//!   finite monoids, explicit tables) and their law checker.
//! * [`suplattice`]: residuated maps and closure operators on finite lattices.
//! * [`qmodule`]: free modules `Q^X`, interval modules, nuclei and homomorphisms.
//! * [`transform`]: kernels, the transform pair `(H_p, Λ_p)`, coder classes and
//!   projective cores.
//! * [`fuzzy`]: fuzzy partitions, the Łukasiewicz basis and F-transforms.
//! * [`morphology`]: translation-invariant dilation and erosion on grids.
//!
//! Every carrier is an exact structure except [`UnitQuantale`], whose laws
//! hold up to a tolerance.

pub mod error;
pub mod fuzzy;
pub mod laws;
pub mod morphology;
pub mod qmodule;
pub mod quantale;
pub mod suplattice;
pub mod transform;

pub use error::{Error, Result};
pub use laws::LawReport;
pub use quantale::{
    ChainQuantale, ChainTnorm, FiniteQuantale, FloatUnitQuantale, MonoidTable, PowersetQuantale,
    Quantale, SampledUnitQuantale, TableQuantale, UnitTnorm,
};

/// The unit interval in double precision.
pub type UnitQuantale = FloatUnitQuantale<f64>;
/// The unit interval in single precision.
pub type UnitQuantale32 = FloatUnitQuantale<f32>;
/// Exact rational scalars for the piecewise-linear basis evaluators.
pub type Rational = num_rational::Ratio<i64>;
