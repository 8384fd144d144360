//! Exact computer algebra for saturated special fiber rings of height-three
//! Gorenstein ideals: sparse polynomials, Gröbner bases, Hilbert functions,
//! pfaffians, and closed-form multiplicity formulas.

pub mod polycore;
mod serde_str;
pub mod groebner;
pub mod polymat;
pub mod hilbert;
pub mod formulas;
pub mod linalg;
pub mod gorenstein;
pub mod fiber;
