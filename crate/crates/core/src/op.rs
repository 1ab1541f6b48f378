//! Normal-ordered linear differential operators acting on an abstract
//! phase-space function W.
//!
//! An `OpMonomial` {a, b, c, d} is the map W ↦ x^a p^b ∂x^c ∂p^d W, with the
//! derivatives applied to W first and the polynomial multiplication second.
//! A `DiffOpExpr` is a finite linear combination of such monomials with
//! complex-rational coefficients; its term map is a normal form, so two
//! expressions are equal exactly when they are mathematically equal. This is
//! the universal currency of the symbolic half of the crate: every generator,
//! bracket and current lives here.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num::{One, Zero};

use crate::error::AlgebraError;
use crate::poly::{PolySymbol, Powers};
use crate::scalar::{c_binomial, c_falling, c_one, c_zero, format_rational, CRat, Rational};

/// x^a p^b ∂x^c ∂p^d, derivatives first. Ordered graded-lexicographically
/// (total order a+b+c+d, then x-heavy first) so map iteration doubles as the
/// canonical printing order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct OpMonomial {
    pub x_pow: u32,
    pub p_pow: u32,
    pub dx_ord: u32,
    pub dp_ord: u32,
}

impl OpMonomial {
    pub const fn new(x_pow: u32, p_pow: u32, dx_ord: u32, dp_ord: u32) -> Self {
        OpMonomial { x_pow, p_pow, dx_ord, dp_ord }
    }

    pub const IDENTITY: OpMonomial = OpMonomial::new(0, 0, 0, 0);

    pub fn grade(&self) -> u32 {
        self.x_pow + self.p_pow + self.dx_ord + self.dp_ord
    }

    /// Order of the derivative part ∂x^c ∂p^d.
    pub fn derivative_order(&self) -> u32 {
        self.dx_ord + self.dp_ord
    }

    fn key(&self) -> (u32, u32, u32, u32) {
        (self.x_pow, self.p_pow, self.dx_ord, self.dp_ord)
    }
}

impl Ord for OpMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.grade()
            .cmp(&other.grade())
            .then(other.key().cmp(&self.key()))
    }
}

impl PartialOrd for OpMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiffOpExpr {
    terms: BTreeMap<OpMonomial, CRat>,
    hbar: Rational,
}

impl DiffOpExpr {
    pub fn zero(hbar: Rational) -> Self {
        DiffOpExpr { terms: BTreeMap::new(), hbar }
    }

    /// The identity operator W ↦ W.
    pub fn identity(hbar: Rational) -> Self {
        DiffOpExpr::from_monomial(OpMonomial::IDENTITY, c_one(), hbar)
    }

    pub fn from_monomial(mono: OpMonomial, coeff: CRat, hbar: Rational) -> Self {
        let mut expr = DiffOpExpr::zero(hbar);
        expr.add_term(mono, coeff);
        expr
    }

    /// ∂x as an operator.
    pub fn dx(hbar: Rational) -> Self {
        DiffOpExpr::from_monomial(OpMonomial::new(0, 0, 1, 0), c_one(), hbar)
    }

    /// ∂p as an operator.
    pub fn dp(hbar: Rational) -> Self {
        DiffOpExpr::from_monomial(OpMonomial::new(0, 0, 0, 1), c_one(), hbar)
    }

    /// The phase-space Laplacian ∂x² + ∂p².
    pub fn laplacian(hbar: Rational) -> Self {
        let mut expr = DiffOpExpr::zero(hbar);
        expr.add_term(OpMonomial::new(0, 0, 2, 0), c_one());
        expr.add_term(OpMonomial::new(0, 0, 0, 2), c_one());
        expr
    }

    /// Multiplication operator W ↦ q(x,p)·W.
    pub fn from_poly(q: &PolySymbol, hbar: Rational) -> Self {
        let mut expr = DiffOpExpr::zero(hbar);
        for (k, v) in q.terms() {
            expr.add_term(OpMonomial::new(k.x_pow, k.p_pow, 0, 0), v.clone());
        }
        expr
    }

    pub fn hbar(&self) -> &Rational {
        &self.hbar
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&OpMonomial, &CRat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, mono: OpMonomial) -> CRat {
        self.terms.get(&mono).cloned().unwrap_or_else(c_zero)
    }

    pub fn add_term(&mut self, mono: OpMonomial, coeff: CRat) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(mono).or_insert_with(c_zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&mono);
        }
    }

    pub fn scale(&self, c: &CRat) -> Self {
        let mut out = DiffOpExpr::zero(self.hbar.clone());
        if c.is_zero() {
            return out;
        }
        for (k, v) in &self.terms {
            out.add_term(*k, v * c);
        }
        out
    }

    fn check_hbar(&self, other: &DiffOpExpr) -> Result<(), AlgebraError> {
        if self.hbar != other.hbar {
            return Err(AlgebraError::HbarMismatch {
                left: format_rational(&self.hbar),
                right: format_rational(&other.hbar),
            });
        }
        Ok(())
    }

    /// Exact linear combination c1·E1 + c2·E2 in normal form.
    pub fn scale_and_add(
        c1: &CRat,
        e1: &DiffOpExpr,
        c2: &CRat,
        e2: &DiffOpExpr,
    ) -> Result<DiffOpExpr, AlgebraError> {
        e1.check_hbar(e2)?;
        let mut out = e1.scale(c1);
        for (k, v) in &e2.terms {
            out.add_term(*k, v * c2);
        }
        Ok(out)
    }

    pub fn try_add(&self, other: &DiffOpExpr) -> Result<DiffOpExpr, AlgebraError> {
        DiffOpExpr::scale_and_add(&c_one(), self, &c_one(), other)
    }

    pub fn try_sub(&self, other: &DiffOpExpr) -> Result<DiffOpExpr, AlgebraError> {
        DiffOpExpr::scale_and_add(&c_one(), self, &(-c_one()), other)
    }

    /// Operator composition: (E1 ∘ E2) W = E1 (E2 W), returned in normal
    /// form via the rewrite ∂x ∘ x^a = x^a ∂x + a x^{a−1} applied
    /// exhaustively (and the p analogue). Bilinear in both arguments.
    pub fn compose(&self, rhs: &DiffOpExpr) -> Result<DiffOpExpr, AlgebraError> {
        self.check_hbar(rhs)?;
        let mut out = DiffOpExpr::zero(self.hbar.clone());
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                let base = c1 * c2;
                compose_monomials(m1, m2, &base, &mut out);
            }
        }
        Ok(out)
    }

    /// Formal adjoint under ∫∫ dx dp with x† = x, ∂† = −∂ and composition
    /// order reversed. This is the transpose with respect to the bilinear
    /// pairing, not the sesquilinear one: coefficients are not conjugated,
    /// so the map is linear and involutive.
    pub fn adjoint(&self) -> DiffOpExpr {
        let mut out = DiffOpExpr::zero(self.hbar.clone());
        for (m, c) in &self.terms {
            // (x^a p^b ∂x^c ∂p^d)† = (−1)^{c+d} ∂x^c ∂p^d ∘ x^a p^b,
            // normal-ordered by the same rewrite compose() uses.
            let sign = if m.derivative_order() % 2 == 0 {
                c.clone()
            } else {
                -c.clone()
            };
            compose_monomials(
                &OpMonomial::new(0, 0, m.dx_ord, m.dp_ord),
                &OpMonomial::new(m.x_pow, m.p_pow, 0, 0),
                &sign,
                &mut out,
            );
        }
        out
    }

    /// Apply the operator to a polynomial stand-in for W, exactly.
    pub fn apply_to_poly(&self, w: &PolySymbol) -> PolySymbol {
        let mut out = PolySymbol::zero();
        for (m, c) in &self.terms {
            let mut q = w.clone();
            for _ in 0..m.dx_ord {
                q = q.diff_x();
            }
            for _ in 0..m.dp_ord {
                q = q.diff_p();
            }
            for (k, v) in q.terms() {
                out.add_term(
                    Powers::new(k.x_pow + m.x_pow, k.p_pow + m.p_pow),
                    v * c,
                );
            }
        }
        out
    }

    /// The derivative-free part of the expression as a polynomial.
    pub fn polynomial_part(&self) -> PolySymbol {
        let mut out = PolySymbol::zero();
        for (m, c) in &self.terms {
            if m.derivative_order() == 0 {
                out.add_term(Powers::new(m.x_pow, m.p_pow), c.clone());
            }
        }
        out
    }

    /// Largest derivative order appearing in any term.
    pub fn max_derivative_order(&self) -> u32 {
        self.terms.keys().map(OpMonomial::derivative_order).max().unwrap_or(0)
    }
}

/// Normal-order m1 ∘ m2 and accumulate `base`-scaled terms into `out`.
///
/// The derivative block of m1 must pass through the polynomial block of m2:
/// ∂x^c ∘ x^a = Σ_k C(c,k) a!/(a−k)! x^{a−k} ∂x^{c−k}, independently in x
/// and p since ∂x commutes with p and ∂p with x.
fn compose_monomials(m1: &OpMonomial, m2: &OpMonomial, base: &CRat, out: &mut DiffOpExpr) {
    for k in 0..=m1.dx_ord.min(m2.x_pow) {
        let cx = c_binomial(m1.dx_ord, k) * c_falling(m2.x_pow, k);
        for l in 0..=m1.dp_ord.min(m2.p_pow) {
            let cp = c_binomial(m1.dp_ord, l) * c_falling(m2.p_pow, l);
            let mono = OpMonomial::new(
                m1.x_pow + m2.x_pow - k,
                m1.p_pow + m2.p_pow - l,
                m1.dx_ord - k + m2.dx_ord,
                m1.dp_ord - l + m2.dp_ord,
            );
            out.add_term(mono, base * &cx * &cp);
        }
    }
}

impl Add for &DiffOpExpr {
    type Output = DiffOpExpr;
    fn add(self, rhs: &DiffOpExpr) -> DiffOpExpr {
        self.try_add(rhs).expect("hbar mismatch in +")
    }
}

impl Sub for &DiffOpExpr {
    type Output = DiffOpExpr;
    fn sub(self, rhs: &DiffOpExpr) -> DiffOpExpr {
        self.try_sub(rhs).expect("hbar mismatch in -")
    }
}

impl Neg for &DiffOpExpr {
    type Output = DiffOpExpr;
    fn neg(self) -> DiffOpExpr {
        self.scale(&(-c_one()))
    }
}

impl Add for DiffOpExpr {
    type Output = DiffOpExpr;
    fn add(self, rhs: DiffOpExpr) -> DiffOpExpr {
        &self + &rhs
    }
}

impl Sub for DiffOpExpr {
    type Output = DiffOpExpr;
    fn sub(self, rhs: DiffOpExpr) -> DiffOpExpr {
        &self - &rhs
    }
}

impl Neg for DiffOpExpr {
    type Output = DiffOpExpr;
    fn neg(self) -> DiffOpExpr {
        -&self
    }
}

impl fmt::Display for DiffOpExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::dsl::format(self))
    }
}

pub fn default_hbar() -> Rational {
    Rational::one()
}
