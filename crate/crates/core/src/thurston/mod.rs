//! Thurston transformations of multicurves given by their lift data,
//! Perron-Frobenius eigenvalues, irreducibility, and orbifold signatures of
//! marked branched covers.

mod matrix;
mod orbifold;

pub use matrix::{
    is_irreducible, leading_eigenvalue, obstruction_verdict, thurston_matrix, LiftComponent, LiftData, LiftDatum,
    NonnegMatrix, ObstructionReport, OBSTRUCTION_TOL,
};
pub use orbifold::{orbifold_signature, OrbifoldMapData, OrbifoldSignature, Weight};
