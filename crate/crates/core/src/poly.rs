//! Exact polynomials in the phase-space variables x and p.
//!
//! `PolySymbol` is a finite map from exponent pairs to complex-rational
//! coefficients. Zero coefficients are never stored, so structural equality
//! is mathematical equality. These polynomials carry the Hamiltonians and
//! ladder symbols fed to the star-product engine, and come back out as
//! obstruction residuals.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::Zero;
use num_complex::Complex64;

use crate::scalar::{
    c_one, c_zero, cint, cpow, crat_to_c64, format_rational, CRat, Rational,
};

/// Exponent pair (x^a, p^b), ordered graded-lexicographically so that map
/// iteration order is also the canonical printing order: lower total degree
/// first, and within a degree the x-heavy monomial first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Powers {
    pub x_pow: u32,
    pub p_pow: u32,
}

impl Powers {
    pub const fn new(x_pow: u32, p_pow: u32) -> Self {
        Powers { x_pow, p_pow }
    }

    pub fn degree(&self) -> u32 {
        self.x_pow + self.p_pow
    }
}

impl Ord for Powers {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then(other.x_pow.cmp(&self.x_pow))
            .then(other.p_pow.cmp(&self.p_pow))
    }
}

impl PartialOrd for Powers {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PolySymbol {
    terms: BTreeMap<Powers, CRat>,
}

impl PolySymbol {
    pub fn zero() -> Self {
        PolySymbol::default()
    }

    pub fn constant(c: CRat) -> Self {
        let mut poly = PolySymbol::zero();
        poly.add_term(Powers::new(0, 0), c);
        poly
    }

    pub fn one() -> Self {
        PolySymbol::constant(c_one())
    }

    /// The coordinate symbol x.
    pub fn x() -> Self {
        PolySymbol::monomial(1, 0, c_one())
    }

    /// The momentum symbol p.
    pub fn p() -> Self {
        PolySymbol::monomial(0, 1, c_one())
    }

    pub fn monomial(x_pow: u32, p_pow: u32, coeff: CRat) -> Self {
        let mut poly = PolySymbol::zero();
        poly.add_term(Powers::new(x_pow, p_pow), coeff);
        poly
    }

    /// The harmonic-oscillator symbol (x² + p²)/2.
    pub fn harmonic_oscillator() -> Self {
        let half = crate::scalar::crat(1, 2);
        PolySymbol::monomial(2, 0, half.clone()) + PolySymbol::monomial(0, 2, half)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Powers, &CRat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, key: Powers) -> CRat {
        self.terms.get(&key).cloned().unwrap_or_else(c_zero)
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Powers::degree).max().unwrap_or(0)
    }

    pub fn add_term(&mut self, key: Powers, coeff: CRat) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(key).or_insert_with(c_zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn scale(&self, c: &CRat) -> Self {
        if c.is_zero() {
            return PolySymbol::zero();
        }
        let mut out = PolySymbol::zero();
        for (k, v) in &self.terms {
            out.add_term(*k, v * c);
        }
        out
    }

    /// ∂/∂x, exact.
    pub fn diff_x(&self) -> Self {
        let mut out = PolySymbol::zero();
        for (k, v) in &self.terms {
            if k.x_pow > 0 {
                out.add_term(
                    Powers::new(k.x_pow - 1, k.p_pow),
                    v * cint(k.x_pow as i64),
                );
            }
        }
        out
    }

    /// ∂/∂p, exact.
    pub fn diff_p(&self) -> Self {
        let mut out = PolySymbol::zero();
        for (k, v) in &self.terms {
            if k.p_pow > 0 {
                out.add_term(
                    Powers::new(k.x_pow, k.p_pow - 1),
                    v * cint(k.p_pow as i64),
                );
            }
        }
        out
    }

    /// Complex conjugate of all coefficients (x, p are real symbols).
    pub fn conj(&self) -> Self {
        let mut out = PolySymbol::zero();
        for (k, v) in &self.terms {
            out.add_term(*k, v.conj());
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = PolySymbol::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// True if every coefficient is real.
    pub fn is_real(&self) -> bool {
        self.terms.values().all(|c| c.im.is_zero())
    }

    /// Exact evaluation at a rational point.
    pub fn eval_exact(&self, x: &CRat, p: &CRat) -> CRat {
        let mut acc = c_zero();
        for (k, v) in &self.terms {
            acc += v * cpow(x, k.x_pow) * cpow(p, k.p_pow);
        }
        acc
    }

    /// Floating-point evaluation for the grid layer.
    pub fn eval_f64(&self, x: f64, p: f64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, v) in &self.terms {
            acc += crat_to_c64(v) * x.powi(k.x_pow as i32) * p.powi(k.p_pow as i32);
        }
        acc
    }
}

impl Add for &PolySymbol {
    type Output = PolySymbol;
    fn add(self, rhs: &PolySymbol) -> PolySymbol {
        let mut out = self.clone();
        for (k, v) in &rhs.terms {
            out.add_term(*k, v.clone());
        }
        out
    }
}

impl Add for PolySymbol {
    type Output = PolySymbol;
    fn add(self, rhs: PolySymbol) -> PolySymbol {
        &self + &rhs
    }
}

impl Sub for &PolySymbol {
    type Output = PolySymbol;
    fn sub(self, rhs: &PolySymbol) -> PolySymbol {
        let mut out = self.clone();
        for (k, v) in &rhs.terms {
            out.add_term(*k, -v.clone());
        }
        out
    }
}

impl Sub for PolySymbol {
    type Output = PolySymbol;
    fn sub(self, rhs: PolySymbol) -> PolySymbol {
        &self - &rhs
    }
}

impl Neg for &PolySymbol {
    type Output = PolySymbol;
    fn neg(self) -> PolySymbol {
        self.scale(&cint(-1))
    }
}

impl Neg for PolySymbol {
    type Output = PolySymbol;
    fn neg(self) -> PolySymbol {
        -&self
    }
}

impl Mul for &PolySymbol {
    type Output = PolySymbol;
    fn mul(self, rhs: &PolySymbol) -> PolySymbol {
        let mut out = PolySymbol::zero();
        for (ka, va) in &self.terms {
            for (kb, vb) in &rhs.terms {
                out.add_term(
                    Powers::new(ka.x_pow + kb.x_pow, ka.p_pow + kb.p_pow),
                    va * vb,
                );
            }
        }
        out
    }
}

impl Mul for PolySymbol {
    type Output = PolySymbol;
    fn mul(self, rhs: PolySymbol) -> PolySymbol {
        &self * &rhs
    }
}

/// Canonical DSL-syntax rendering: `1/2 + 1/2 . x . x + 1/2 . p . p`.
/// A complex coefficient is split into a real and an imaginary term so the
/// printed text stays inside the expression grammar.
impl fmt::Display for PolySymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut pieces: Vec<(bool, String)> = Vec::new();
        for (k, v) in &self.terms {
            for (value, imag) in [(&v.re, false), (&v.im, true)] {
                if value.is_zero() {
                    continue;
                }
                pieces.push((
                    value < &Rational::zero(),
                    render_poly_term(value, imag, k),
                ));
            }
        }
        if pieces.is_empty() {
            return write!(f, "0");
        }
        let mut out = String::new();
        for (idx, (negative, body)) in pieces.iter().enumerate() {
            if idx == 0 {
                if *negative {
                    out.push_str("- ");
                }
            } else if *negative {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            out.push_str(body);
        }
        write!(f, "{out}")
    }
}

fn render_poly_term(value: &Rational, imag: bool, k: &Powers) -> String {
    let mut factors: Vec<String> = Vec::new();
    let magnitude = if value < &Rational::zero() {
        -value.clone()
    } else {
        value.clone()
    };
    if !num::One::is_one(&magnitude) || (!imag && k.degree() == 0) {
        factors.push(format_rational(&magnitude));
    }
    if imag {
        factors.push("i".into());
    }
    for _ in 0..k.x_pow {
        factors.push("x".into());
    }
    for _ in 0..k.p_pow {
        factors.push("p".into());
    }
    factors.join(" . ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{ci, crat};

    #[test]
    fn no_zero_terms_survive() {
        let q = PolySymbol::x() - PolySymbol::x();
        assert!(q.is_zero());
        let r = PolySymbol::x() * PolySymbol::p() - PolySymbol::p() * PolySymbol::x();
        assert!(r.is_zero());
    }

    #[test]
    fn differentiation() {
        let q = PolySymbol::x().pow(4);
        let dq = q.diff_x();
        assert_eq!(dq, PolySymbol::monomial(3, 0, cint(4)));
        assert!(q.diff_p().is_zero());
    }

    #[test]
    fn exact_eval() {
        let q = PolySymbol::harmonic_oscillator();
        let v = q.eval_exact(&cint(2), &cint(2));
        assert_eq!(v, cint(4));
    }

    #[test]
    fn display_is_graded_and_dsl_shaped() {
        let q = PolySymbol::constant(crat(1, 2))
            + PolySymbol::monomial(2, 0, crat(1, 2))
            + PolySymbol::monomial(0, 2, crat(1, 2));
        assert_eq!(q.to_string(), "1/2 + 1/2 . x . x + 1/2 . p . p");
        let r = PolySymbol::monomial(1, 0, ci()) - PolySymbol::one();
        assert_eq!(r.to_string(), "- 1 + i . x");
        assert_eq!(PolySymbol::zero().to_string(), "0");
    }
}
