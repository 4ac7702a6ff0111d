//! Polynomials, rational maps of the sphere, and Newton maps built from roots.

mod newton;
mod poly;
mod rational;
pub mod roots;

pub use newton::{newton_map, newton_map_from_roots, polynomial_from_roots, RootSpec, SpecRoot};
pub use poly::Polynomial;
pub use rational::{RationalMap, SpherePoint, CHART_SWAP_RADIUS};
pub use roots::{MultipleRoot, RootOptions};

pub use num_complex::Complex64;
