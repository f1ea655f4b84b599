//! Differential analysis of the trivariate quadratic family
//! `C_u(x, y, z) = (x^3 + u y^2 z, y^3 + u x z^2, z^3 + u x^2 y)` over GF(2^m)^3.

pub mod derivative;
pub mod geometry;
pub mod gf2m;
pub mod identities;
pub mod mpoly;
