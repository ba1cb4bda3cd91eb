//! Coefficient rings for differential-form components.
//!
//! Two backends implement [`Scalar`]: [`Fourier`] (truncated Fourier series
//! over Gaussian rationals on the flat torus) and [`ExpPoly`]
//! (rational polynomials times real exponentials on flat space). Both are
//! closed under addition, multiplication and partial differentiation, so
//! every operation in the crate stays exact. A form is generic over its
//! backend, which rules out mixing backends inside one expression.

use std::fmt::Debug;

use rand::Rng;

use crate::rational::Q;

pub use crate::exppoly::ExpPoly;
pub use crate::fourier::Fourier;

pub trait Scalar: Clone + Debug + PartialEq + Send + Sync + 'static {
    const BACKEND: &'static str;

    fn zero() -> Self;
    fn constant(c: &Q) -> Self;
    fn is_zero(&self) -> bool;

    fn add_assign(&mut self, other: &Self);
    fn sub_assign(&mut self, other: &Self);
    fn mul(&self, other: &Self) -> Self;
    fn scale(&self, c: &Q) -> Self;
    /// Partial derivative with respect to the coordinate `x^mu`.
    fn partial(&self, mu: usize) -> Self;

    /// Small random element, deterministic in the generator state.
    /// `cutoff` bounds frequencies (Fourier) or polynomial degree (ExpPoly).
    fn random<R: Rng>(rng: &mut R, cutoff: u32) -> Self;

    /// Number of stored terms.
    fn len(&self) -> usize;

    fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.sub_assign(other);
        out
    }

    fn neg(&self) -> Self {
        self.scale(&crate::rational::qi(-1))
    }

    /// `self += c * other`
    fn axpy(&mut self, c: &Q, other: &Self) {
        self.add_assign(&other.scale(c));
    }
}
