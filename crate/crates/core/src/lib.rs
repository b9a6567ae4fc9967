//! Exact 2-local algebra for Brown-Peterson cohomology computations.
//!
//! Layers, bottom up:
//! - [`scalar`], [`poly`], [`matrix`], [`lattice`], [`f2lin`], [`bp`]: exact
//!   arithmetic, the coefficient ring `BP*`, Smith normal form.
//! - [`fgl`]: the 2-series and the presentations of `BP*` of skeleta of `BZ/2`.
//! - [`gmod`]: degreewise realization of graded `BP*`-modules and `Tor_1`.
//! - [`steenrod`]: mod-2 cohomology rings with Steenrod squares.
//! - [`charclass`]: Chern roots on `SU(2) x SU(2)`.
//! - [`ahss`]: the associated-graded model after `d_3 = Sq^3` and the
//!   leading-term decision procedure.

pub mod ahss;
pub mod bp;
pub mod charclass;
pub mod error;
pub mod f2lin;
pub mod fgl;
pub mod gmod;
pub mod lattice;
pub mod matrix;
pub mod poly;
pub mod scalar;
pub mod steenrod;
pub mod trace;

pub use error::{Error, Result};
pub use scalar::{LocalInt2, F2};

/// Sparse element of `BP* = Z_(2)[v1..vk]`.
pub type BPElem = bp::BPElem;
/// Monomial in the `v_i`.
pub type VMonomial = bp::VMonomial;
/// Polynomial over `F_2` (mod-2 cohomology classes).
pub type MGPoly = poly::Poly<F2>;
/// Integer polynomial in Chern roots.
pub type RootPoly = poly::Poly<i64>;
/// Rational polynomial, used while building the formal group law.
pub type RatPoly = poly::Poly<num_rational::BigRational>;
/// Matrix over `Z_(2)`.
pub type ZMat = lattice::ZMat;

/// Default number of `v_i` generators.
pub const DEFAULT_K: usize = 4;
