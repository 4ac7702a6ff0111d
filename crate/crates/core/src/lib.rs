//! Newton maps of complex polynomials and their combinatorics: channel
//! diagrams, iterated pullback graphs, abstract Newton graph validation,
//! rotation-preserving equivalence, and Thurston-side linear algebra.

pub mod cli_io;
pub mod complex_poly;
pub mod dynamics;
pub mod newton_graph;
pub mod planar_graph;
pub mod thurston;
pub mod error;
pub mod tolerance;

pub use error::{Error, Result};
pub use tolerance::Tolerances;
