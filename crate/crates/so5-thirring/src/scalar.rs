//! Scalar abstraction for the numeric kernels.
//!
//! All matrix arithmetic is generic over the underlying real type through
//! [`Scalar`]; complex entries are `num_complex::Complex<T>`. Concrete `f64`
//! aliases are exported from the crate root for everyday use.

use num_complex::Complex;
use num_traits::{Float, FloatConst, NumAssign};
use std::fmt;
use std::iter::Sum;

/// Real scalar type underlying all operator matrices.
///
/// The bound collects what the kernels actually use: IEEE float arithmetic,
/// compound assignment, summation, and thread-safe, printable values.
pub trait Scalar:
    Float + FloatConst + NumAssign + Sum + Send + Sync + fmt::Debug + fmt::Display + 'static
{
}

impl<T> Scalar for T where
    T: Float + FloatConst + NumAssign + Sum + Send + Sync + fmt::Debug + fmt::Display + 'static
{
}

/// Complex number over a [`Scalar`].
pub type C<T> = Complex<T>;

/// Imaginary unit for the given scalar.
pub fn imag_unit<T: Scalar>() -> C<T> {
    C::new(T::zero(), T::one())
}

/// Real constant lifted into the complex field.
pub fn re<T: Scalar>(x: T) -> C<T> {
    C::new(x, T::zero())
}
