//! Nodal domains of Laplace eigenfunctions on rectangular flat tori.
//!
//! * [`arith`]: 2-adic valuations and representations by `αm² + βn²`.
//! * [`spectra`]: tori, eigenspaces and eigenfunction evaluation.
//! * [`antisym`]: sign-flipping translations and the domain pairing they induce.
//! * [`nodal`]: sign grids and periodic connected-component labeling.
//! * [`construct`]: eigenfunctions with an odd number of nodal domains.
//! * [`scan`]: the parity pipeline over many eigenvalues.
//! * [`render`]: PPM/PGM output.

pub mod antisym;
pub mod arith;
pub mod construct;
pub mod nodal;
pub mod render;
pub mod scan;
pub mod spectra;

pub use antisym::{antisymmetry_vector, pair_domains, verify_on_basis, TranslationVector};
pub use nodal::{
    count_nodal_domains, label_components, sign_grid, CountConfig, NodalDecomposition,
};
pub use spectra::{
    BasisFunction, Eigenfunction, Eigenspace, Family, Rational, TorusPoint, TorusShape,
};
