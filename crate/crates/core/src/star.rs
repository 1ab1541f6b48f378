//! The Groenewold star product, Bopp shifts, and the Moyal/Poisson brackets.
//!
//! For polynomial symbols the exponential star kernel truncates exactly, so
//! everything here is finite and rational. Two independent routes are kept:
//! `star_poly` evaluates the bidifferential series directly, while `bopp`
//! realizes left/right star multiplication as a normal-ordered differential
//! operator; the test suite plays them against each other.
//!
//! Ladder symbols a = (x+ip)/√2 and a* = (x−ip)/√2 individually carry an
//! irrational 1/√2. The coefficient ring stays rational by only exposing
//! even pairings: the `Ladder` constructors track each √2 internally and
//! combine pairs into an exact factor 1/2.

use num::{One, Zero};

use crate::error::AlgebraError;
use crate::op::{DiffOpExpr, OpMonomial};
use crate::poly::PolySymbol;
use crate::scalar::{c_one, ci, cim, cpow, cre, Rational};

/// Which side of the star product a symbol multiplies from.
///
/// Left means f ⋆ (·) with x → x + (iħ/2)∂p, p → p − (iħ/2)∂x;
/// Right means (·) ⋆ g with x → x − (iħ/2)∂p, p → p + (iħ/2)∂x.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoppSide {
    Left,
    Right,
}

/// f ⋆ g as a polynomial: Σₙ (iħ/2)ⁿ/n! f (←∂x→∂p − ←∂p→∂x)ⁿ g.
/// The series terminates once either factor is differentiated to death,
/// and reduces to the pointwise product at ħ = 0.
pub fn star_poly(f: &PolySymbol, g: &PolySymbol, hbar: &Rational) -> PolySymbol {
    let mut out = PolySymbol::zero();
    let step = cim(hbar / Rational::from_integer(2.into())); // iħ/2
    let max_n = f.degree().min(g.degree());
    let mut n_factorial = Rational::one();
    for n in 0..=max_n {
        if n > 0 {
            n_factorial *= Rational::from_integer(n.into());
        }
        let prefactor = cpow(&step, n) * cre(Rational::one() / n_factorial.clone());
        if prefactor.is_zero() {
            // ħ = 0 kills every n ≥ 1 term.
            if n > 0 {
                break;
            }
            continue;
        }
        // (←∂x→∂p − ←∂p→∂x)ⁿ expands binomially because the two arrow
        // operators commute: Σ_k C(n,k) (−1)^{n−k} ∂x^k∂p^{n−k}f · ∂x^{n−k}∂p^k g.
        for k in 0..=n {
            let mut df = f.clone();
            for _ in 0..k {
                df = df.diff_x();
            }
            for _ in 0..(n - k) {
                df = df.diff_p();
            }
            if df.is_zero() {
                continue;
            }
            let mut dg = g.clone();
            for _ in 0..(n - k) {
                dg = dg.diff_x();
            }
            for _ in 0..k {
                dg = dg.diff_p();
            }
            if dg.is_zero() {
                continue;
            }
            let sign = if (n - k) % 2 == 0 { c_one() } else { -c_one() };
            let binom = crate::scalar::c_binomial(n, k);
            out = out + (df * dg).scale(&(&prefactor * sign * binom));
        }
    }
    out
}

/// Bopp-shift realization of one-sided star multiplication as a
/// normal-ordered operator. The shifted arguments commute once the
/// derivatives are restricted to act on the other factor only, which is
/// exactly the normal-ordered placement, so each polynomial term expands
/// binomially with no operator reordering:
/// x^a p^b → Σ C(a,j) C(b,k) (±iħ/2)^j (∓iħ/2)^k x^{a−j} p^{b−k} ∂x^k ∂p^j.
pub fn bopp(f: &PolySymbol, side: BoppSide, hbar: &Rational) -> DiffOpExpr {
    let half_ih = cim(hbar / Rational::from_integer(2.into()));
    let (x_shift, p_shift) = match side {
        BoppSide::Left => (half_ih.clone(), -half_ih),
        BoppSide::Right => (-half_ih.clone(), half_ih),
    };
    let mut out = DiffOpExpr::zero(hbar.clone());
    for (pw, coeff) in f.terms() {
        for j in 0..=pw.x_pow {
            let cj = crate::scalar::c_binomial(pw.x_pow, j) * cpow(&x_shift, j);
            for k in 0..=pw.p_pow {
                let ck = crate::scalar::c_binomial(pw.p_pow, k) * cpow(&p_shift, k);
                out.add_term(
                    OpMonomial::new(pw.x_pow - j, pw.p_pow - k, k, j),
                    coeff * &cj * &ck,
                );
            }
        }
    }
    out
}

/// The two-sided sandwich f ⋆ W ⋆ g as an operator on W:
/// compose(bopp(f, Left), bopp(g, Right)). The two sides commute.
pub fn sandwich(f: &PolySymbol, g: &PolySymbol, hbar: &Rational) -> DiffOpExpr {
    bopp(f, BoppSide::Left, hbar)
        .compose(&bopp(g, BoppSide::Right, hbar))
        .expect("both sides built with the same hbar")
}

/// Moyal bracket {{H, ·}} = (1/iħ)(H ⋆ · − · ⋆ H) as an operator, computed
/// through the Bopp-shift difference. Every surviving term carries at least
/// one derivative of W, and all coefficients are real for real H.
pub fn moyal_bracket(h: &PolySymbol, hbar: &Rational) -> Result<DiffOpExpr, AlgebraError> {
    if hbar.is_zero() {
        return Err(AlgebraError::HbarZero);
    }
    let diff = bopp(h, BoppSide::Left, hbar) - bopp(h, BoppSide::Right, hbar);
    let inv_ih = c_one() / cim(hbar.clone());
    Ok(diff.scale(&inv_ih))
}

/// Classical Poisson bracket {H, ·} = (∂xH)∂p − (∂pH)∂x as an operator.
pub fn poisson_bracket(h: &PolySymbol) -> DiffOpExpr {
    poisson_bracket_hbar(h, &Rational::one())
}

/// Poisson bracket tagged with an explicit ħ so it can be combined with
/// Moyal output at the same substitution.
pub fn poisson_bracket_hbar(h: &PolySymbol, hbar: &Rational) -> DiffOpExpr {
    let dp_op = DiffOpExpr::dp(hbar.clone());
    let dx_op = DiffOpExpr::dx(hbar.clone());
    let lhs = DiffOpExpr::from_poly(&h.diff_x(), hbar.clone())
        .compose(&dp_op)
        .expect("same hbar");
    let rhs = DiffOpExpr::from_poly(&h.diff_p(), hbar.clone())
        .compose(&dx_op)
        .expect("same hbar");
    lhs - rhs
}

/// Ladder symbols, stored in scaled form so all coefficients stay rational.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ladder {
    /// a = (x + ip)/√2
    Annihilate,
    /// a* = (x − ip)/√2
    Create,
}

impl Ladder {
    /// √2·a or √2·a*: the rational-coefficient part of the symbol.
    pub fn scaled_poly(self) -> PolySymbol {
        match self {
            Ladder::Annihilate => PolySymbol::x() + PolySymbol::monomial(0, 1, ci()),
            Ladder::Create => PolySymbol::x() - PolySymbol::monomial(0, 1, ci()),
        }
    }
}

/// The sandwich l ⋆ W ⋆ r for a ladder pair, with the two 1/√2 factors
/// combined into an exact 1/2.
pub fn ladder_sandwich(left: Ladder, right: Ladder, hbar: &Rational) -> DiffOpExpr {
    sandwich(&left.scaled_poly(), &right.scaled_poly(), hbar).scale(&crate::scalar::crat(1, 2))
}

/// The polynomial l ⋆ r for a ladder pair (e.g. a* ⋆ a = (x²+p²)/2 − ħ/2),
/// again with the pair's √2 factors folded into 1/2.
pub fn ladder_star_pair(left: Ladder, right: Ladder, hbar: &Rational) -> PolySymbol {
    star_poly(&left.scaled_poly(), &right.scaled_poly(), hbar).scale(&crate::scalar::crat(1, 2))
}

/// P ⋆ W + W ⋆ P as an operator (the anticommutator generator).
pub fn two_sided_anticommutator(p: &PolySymbol, hbar: &Rational) -> DiffOpExpr {
    bopp(p, BoppSide::Left, hbar) + bopp(p, BoppSide::Right, hbar)
}

/// P ⋆ W − W ⋆ P as an operator (the bare star commutator, no 1/iħ).
pub fn two_sided_commutator(p: &PolySymbol, hbar: &Rational) -> DiffOpExpr {
    bopp(p, BoppSide::Left, hbar) - bopp(p, BoppSide::Right, hbar)
}

pub fn hbar_one() -> Rational {
    Rational::one()
}
