//! Quadrature, root finding, fixed-point iteration and compensated
//! floating-point primitives shared by every other module.

pub mod compensated;
pub mod fixed_point;
pub mod quadrature;
pub mod roots;

pub use compensated::{two_prod, two_sum, DoubleDouble, KahanSum};
pub use fixed_point::{fixed_point, FixedPoint};
pub use quadrature::{
    adaptive_integrate, integrate_peaked, Quadrature, ABSOLUTE_TOLERANCE_FLOOR, PANEL_BUDGET,
};
pub use roots::find_root_bracketed;
