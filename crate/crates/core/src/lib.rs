//! Majorana stellar representation of permutation-symmetric multiqubit states.
//!
//! A symmetric `N`-qubit pure state is the symmetrization of `N` single-qubit
//! spinors, which are the roots of a degree-`N` polynomial built from its
//! Dicke-basis coefficients. This crate converts between states and their
//! root constellations and builds on that representation:
//!
//! - [`majorana`]: polynomial, constellation extraction and inversion, rotations;
//! - [`slocc`]: entanglement families from root degeneracies, identical local maps;
//! - [`marginals`]: reduced density matrices, concurrence, tangle and
//!   reconstruction of a state from two of its marginals;
//! - [`geomeasure`]: geometric measure of entanglement over spin-coherent states.
//!
//! ```
//! use majorana::{ghz_state, majorana_points, slocc::classify};
//!
//! let ghz = ghz_state(3).unwrap();
//! assert_eq!(majorana_points(&ghz, 1e-6).points().len(), 3);
//! assert_eq!(classify(&ghz, 1e-6).label(), "D_{1,1,1}");
//! ```

pub mod density;
pub mod error;
pub mod geomeasure;
pub mod io;
pub mod majorana;
pub mod marginals;
mod math;
pub mod optim;
pub mod parallel;
pub mod poly;
pub mod slocc;
pub mod state;
pub mod table;

pub use density::{Basis, DensityMatrix};
pub use error::{Error, Result};
pub use majorana::{
    majorana_points, majorana_polynomial, state_from_constellation, su2_rotate, wigner_d_column,
    MajoranaConstellation, ProjectiveRoot,
};
pub use math::binomial;
pub use state::{
    dicke_state, expand_to_full, ghz_state, overlap, project_to_symmetric, symmetrize,
    symmetrize_brute_force, FullState, PureState, Spinor, SymmetricState,
};

/// 2×2 complex matrix, row-major.
pub type Mat2 = [[num_complex::Complex64; 2]; 2];
