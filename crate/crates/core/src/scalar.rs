//! Exact scalar arithmetic: arbitrary-precision rationals and complex rationals.
//!
//! Every coefficient in the symbolic layer lives in `CRat` =
//! `Complex<BigRational>`; nothing here is floating point. `BigRational`
//! keeps fractions reduced with a positive denominator, which is exactly
//! the invariant the coefficient ring needs.

use num::rational::BigRational;
use num::{BigInt, One, Zero};
use num_complex::Complex;

pub type Rational = BigRational;
pub type CRat = Complex<Rational>;

/// Rational `n/d`. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Purely real complex rational.
pub fn cre(r: Rational) -> CRat {
    Complex::new(r, Rational::zero())
}

/// Purely imaginary complex rational.
pub fn cim(r: Rational) -> CRat {
    Complex::new(Rational::zero(), r)
}

pub fn cint(n: i64) -> CRat {
    cre(rat_int(n))
}

pub fn crat(n: i64, d: i64) -> CRat {
    cre(rat(n, d))
}

/// The imaginary unit.
pub fn ci() -> CRat {
    cim(Rational::one())
}

pub fn c_one() -> CRat {
    cre(Rational::one())
}

pub fn c_zero() -> CRat {
    CRat::zero()
}

/// Integer power of a complex rational (exact).
pub fn cpow(base: &CRat, exp: u32) -> CRat {
    let mut acc = c_one();
    for _ in 0..exp {
        acc *= base;
    }
    acc
}

/// Exact binomial coefficient as a complex rational.
pub fn c_binomial(n: u32, k: u32) -> CRat {
    cre(Rational::from_integer(num::integer::binomial(
        BigInt::from(n),
        BigInt::from(k),
    )))
}

/// Falling factorial n·(n−1)···(n−k+1) as a complex rational.
pub fn c_falling(n: u32, k: u32) -> CRat {
    let mut acc = BigInt::one();
    for j in 0..k {
        acc *= BigInt::from(n - j);
    }
    cre(Rational::from_integer(acc))
}

/// Render a rational the way the expression DSL reads it back: `3`, `-1/2`.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Best-effort conversion to `f64` for the numeric layer.
pub fn rational_to_f64(r: &Rational) -> f64 {
    use num::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn crat_to_c64(c: &CRat) -> num_complex::Complex64 {
    num_complex::Complex64::new(rational_to_f64(&c.re), rational_to_f64(&c.im))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_stay_reduced() {
        let r = rat(6, -4);
        assert_eq!(format_rational(&r), "-3/2");
        assert!(r.denom() > &BigInt::zero());
    }

    #[test]
    fn complex_arithmetic_is_exact() {
        let z = ci() * ci();
        assert_eq!(z, cint(-1));
        assert_eq!(cpow(&ci(), 4), c_one());
        let half = crat(1, 2);
        assert_eq!(&half + &half, c_one());
    }

    #[test]
    fn binomials_and_falling_factorials() {
        assert_eq!(c_binomial(4, 2), cint(6));
        assert_eq!(c_falling(5, 3), cint(60));
        assert_eq!(c_falling(2, 3), c_zero());
    }
}
