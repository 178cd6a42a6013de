//! Two-point resistance of the M x N "hammock" resistor network.
//!
//! The hammock is a rectangular grid of `M` rows and `N` columns. Nodes along a
//! row are joined by resistors of strength `r`, nodes along a column by
//! resistors of strength `s`, and every node of the bottom row (top row) is
//! linked through a resistor `s` to an extra terminal node `O` (`O'`).
//!
//! Four independent routes to the resistance between two nodes live here:
//!
//! | Module | Route |
//! |--------|-------|
//! | [`closed_form`] | single-sum closed form over the transverse modes |
//! | [`spectral`] | inverse of the Laplacian second minor plus a rank-one correction |
//! | [`recursion`] | column-current recurrence diagonalised by a cosine transform |
//! | [`oracle`] | dense grounded solve (float and exact rational) and full eigen-expansion |
//!
//! All public indices are 1-based: columns `x = 1..=N`, rows `y = 1..=M`.
//!
//! ```
//! use hammock::{closed_form, HammockSpec, NodeRef};
//!
//! let spec = HammockSpec::new(1, 2, 1.0, 1.0).unwrap();
//! let r = closed_form::resistance_general(&spec, NodeRef::interior(1, 1), NodeRef::interior(2, 1))
//!     .unwrap();
//! assert!((r.ohms - 0.5).abs() < 1e-12);
//! ```

pub mod closed_form;
pub mod error;
mod hyperbolic;
pub mod lattice;
pub mod numeric;
pub mod oracle;
pub mod recursion;
pub mod result;
pub mod spectral;

pub use error::{Error, Result};
pub use lattice::{CoordB, Edge, FlatIndex, HammockSpec, NodeRef};
pub use oracle::{Arithmetic, DenseCaps};
pub use result::{Method, ResistanceResult};
