//! Polynomials standing in for affinoid functions, domains inside the unit
//! polydisc, and their exact norms.

mod domain;
mod multi_index;
mod norms;
mod poly;
mod power;

pub use domain::{Domain, Hole, HoledDisc, Polydisc};
pub use multi_index::MultiIndex;
pub use norms::{annulus_sup, gauss_norm, laurent_basis_derivative, rescale_to_subdisc, sup_norm};
pub use poly::{AffinoidFunction, Poly};
