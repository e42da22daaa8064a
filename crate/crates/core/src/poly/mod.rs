//! Complex polynomial arithmetic: bivariate polynomials, dense univariate
//! polynomials, Sylvester resultants and an Aberth–Ehrlich root finder.

mod bivariate;
mod resultant;
mod roots;
mod univariate;

pub use bivariate::BiPoly;
pub use resultant::{det_lu, resultant_eliminate};
pub use roots::{uniroots, uniroots_with, Root, RootList};
pub use univariate::UniPoly;

use crate::catalog::PlaneMap;
use crate::C64;
use serde::{Deserialize, Serialize};

/// One of the two affine coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Var {
    X,
    Y,
}

impl Var {
    pub fn other(self) -> Var {
        match self {
            Var::X => Var::Y,
            Var::Y => Var::X,
        }
    }
}

/// `f1(x, y)` evaluated at a point.
pub fn eval(p: &BiPoly, x: C64, y: C64) -> C64 {
    p.eval(x, y)
}

/// Formal partial derivative.
pub fn partial(p: &BiPoly, var: Var) -> BiPoly {
    p.partial(var)
}

/// Determinant of the Jacobian of the plane map at `(x, y)`.
///
/// Target shifts are constants, so this is also the Jacobian of the shifted
/// system `f - s` for every target `s`.
pub fn jacobian_det(m: &PlaneMap, x: C64, y: C64) -> C64 {
    m.jacobian_det(x, y)
}
