//! Special functions: complete elliptic integrals, Jacobi elliptic
//! functions, log-gamma, and Bessel functions of the first kind with
//! their zeros and ratio-generator cells.

pub mod bessel;
pub mod elliptic;
pub mod gamma;

pub use bessel::{
    bessel_j, bessel_j_zero, bessel_j_zeros_in, bessel_ratio, bessel_ratio_cells,
    bessel_ratio_derivative, BesselOrder,
};
pub use elliptic::{
    complete_elliptic_k, jacobi_cells_cn, jacobi_cells_sn, jacobi_sncndn, EllipticModulus,
    JacobiTriple,
};
pub use gamma::{gamma, ln_gamma};
