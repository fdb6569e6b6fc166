//! Higher Nash blowups of affine toric varieties, computed combinatorially.
//!
//! Given generators `a_1, …, a_s ∈ Z^d` of a semigroup, the order-`n` Nash
//! blowup is described by the exponents of the non-vanishing maximal minors
//! of the order-`n` Jacobian of the monomial map. Every such exponent is the
//! center of an affine chart; charts whose generator set has the origin
//! outside its convex hull cover the blowup, and such a chart is smooth iff
//! its semigroup has exactly `d` minimal generators.
//!
//! ```
//! use toric_nash::{nash_step, GeneratorMatrix, PipelineConfig};
//!
//! let a = GeneratorMatrix::from_columns(vec![vec![1, 0], vec![1, 1], vec![1, 2], vec![2, 5]]).unwrap();
//! let step = nash_step(&a, 1, &PipelineConfig::default()).unwrap();
//! assert_eq!(step.exponents.len(), 6);
//! assert!(!step.all_smooth);
//! ```

pub mod error;
pub mod jets;
pub mod lattice_geometry;
mod lp;
pub mod minors;
pub mod monomial_jacobian;
pub mod multiindex;
pub mod pipeline;
pub mod semigroup;

pub use error::{NashError, Result};
pub use minors::{
    det_exact, nonzero_minor_exponents, ExponentSet, SearchConfig, SearchMode, SearchStats,
};
pub use monomial_jacobian::{build_coeff_matrix, CoeffMatrix, GeneratorMatrix, Point};
pub use multiindex::MultiIndex;
pub use pipeline::{
    exponent_set, nash_step, resolve, ExponentForm, PipelineConfig, ResolutionReport, StepReport,
    Verdict,
};
pub use semigroup::Chart;
