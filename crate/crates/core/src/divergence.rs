//! Deciding whether an operator expression is a total phase-space
//! divergence, extracting a current when it is, and the obstruction
//! polynomial when it is not.
//!
//! Two independent routes are implemented on purpose. `residual` computes
//! the obstruction as the formal adjoint applied to the constant function 1,
//! which needs no reduction at all. `decompose` peels derivative monomials
//! through ∂x and ∂p with a fixed tie-break and keeps whatever cannot be
//! peeled. The two must agree exactly; the property suite holds them to it.
//!
//! Sign conventions: `decompose` returns (jx, jp, r) with
//! E = ∂x∘jx + ∂p∘jp + r·id. The physical current of the continuity
//! equation ∂tW = E = −∇·J + r·W is therefore J = −(jx, jp). The named
//! Lindblad currents `j_lindblad` are returned in the physical convention,
//! so −∇·j_lindblad(s) reproduces the corresponding generator.

use std::fmt;
use std::str::FromStr;

use crate::error::AlgebraError;
use crate::op::{DiffOpExpr, OpMonomial};
use crate::poly::{PolySymbol, Powers};
use crate::scalar::{c_one, cint, crat, CRat, Rational};
use crate::star::{
    hbar_one, ladder_sandwich, ladder_star_pair, two_sided_anticommutator,
    two_sided_commutator, Ladder,
};

/// A symbolic current J = (Jx, Jp); each component is an operator applied
/// to W.
#[derive(Debug, Clone, PartialEq)]
pub struct CurrentSymbol {
    pub jx: DiffOpExpr,
    pub jp: DiffOpExpr,
}

impl CurrentSymbol {
    pub fn zero(hbar: Rational) -> Self {
        CurrentSymbol {
            jx: DiffOpExpr::zero(hbar.clone()),
            jp: DiffOpExpr::zero(hbar),
        }
    }

    /// ∇·J = ∂x∘Jx + ∂p∘Jp.
    pub fn divergence(&self) -> DiffOpExpr {
        let hbar = self.jx.hbar().clone();
        let dx = DiffOpExpr::dx(hbar.clone());
        let dp = DiffOpExpr::dp(hbar);
        let div_x = dx.compose(&self.jx).expect("same hbar");
        let div_p = dp.compose(&self.jp).expect("same hbar");
        div_x + div_p
    }

    pub fn negate(&self) -> Self {
        CurrentSymbol {
            jx: -&self.jx,
            jp: -&self.jp,
        }
    }
}

/// Result of the reduction: E = ∂x∘jx + ∂p∘jp + residual·id, exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    pub current: CurrentSymbol,
    pub residual: PolySymbol,
}

/// Obstruction polynomial of E, computed as adjoint(E) applied to the
/// constant function 1. Linear in E; kills anything of the form ∂∘A; maps
/// a pure multiplication operator r·id to r.
pub fn residual(e: &DiffOpExpr) -> PolySymbol {
    e.adjoint().apply_to_poly(&PolySymbol::one())
}

/// Peel E into divergence form with the canonical tie-break: any monomial
/// with a ∂x is pulled through ∂x first; ∂x-free monomials with a ∂p go
/// through ∂p; derivative-free monomials accumulate into the residual.
/// Each peel strictly reduces x_pow + dx_ord (or p_pow + dp_ord), so the
/// worklist terminates.
pub fn decompose(e: &DiffOpExpr) -> Decomposition {
    let hbar = e.hbar().clone();
    let mut jx = DiffOpExpr::zero(hbar.clone());
    let mut jp = DiffOpExpr::zero(hbar.clone());
    let mut res = PolySymbol::zero();

    let mut work: Vec<(OpMonomial, CRat)> =
        e.terms().map(|(m, c)| (*m, c.clone())).collect();

    while let Some((m, c)) = work.pop() {
        if m.dx_ord >= 1 {
            // x^a p^b ∂x^c ∂p^d = ∂x ∘ (x^a p^b ∂x^{c−1} ∂p^d)
            //                     − a·x^{a−1} p^b ∂x^{c−1} ∂p^d
            let peeled = OpMonomial::new(m.x_pow, m.p_pow, m.dx_ord - 1, m.dp_ord);
            jx.add_term(peeled, c.clone());
            if m.x_pow >= 1 {
                let rem = OpMonomial::new(m.x_pow - 1, m.p_pow, m.dx_ord - 1, m.dp_ord);
                work.push((rem, -(c * cint(m.x_pow as i64))));
            }
        } else if m.dp_ord >= 1 {
            let peeled = OpMonomial::new(m.x_pow, m.p_pow, m.dx_ord, m.dp_ord - 1);
            jp.add_term(peeled, c.clone());
            if m.p_pow >= 1 {
                let rem = OpMonomial::new(m.x_pow, m.p_pow - 1, m.dx_ord, m.dp_ord - 1);
                work.push((rem, -(c * cint(m.p_pow as i64))));
            }
        } else {
            res.add_term(Powers::new(m.x_pow, m.p_pow), c);
        }
    }

    Decomposition {
        current: CurrentSymbol { jx, jp },
        residual: res,
    }
}

/// True iff E is a total divergence, i.e. its obstruction vanishes.
pub fn is_divergence(e: &DiffOpExpr) -> bool {
    residual(e).is_zero()
}

/// The named generators of the identity suite, all built from star-product
/// primitives at ħ = 1 rather than transcribed coefficient tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GeneratorName {
    /// a* ⋆ W ⋆ a
    PhotonAdd,
    /// a ⋆ W ⋆ a*
    PhotonRemove,
    /// a*⋆a⋆W − W⋆a*⋆a (bare star commutator, no 1/iħ)
    NumberCommutator,
    /// a*⋆a⋆W + W⋆a*⋆a
    NumberAnticommutator,
    /// a⋆a*⋆W + W⋆a⋆a*
    AntinumberAnticommutator,
    /// 2 a*⋆W⋆a − (a⋆a*⋆W + W⋆a⋆a*)
    LindbladUp,
    /// 2 a⋆W⋆a* − (a*⋆a⋆W + W⋆a*⋆a)
    LindbladDown,
}

impl GeneratorName {
    pub const ALL: [GeneratorName; 7] = [
        GeneratorName::PhotonAdd,
        GeneratorName::PhotonRemove,
        GeneratorName::NumberCommutator,
        GeneratorName::NumberAnticommutator,
        GeneratorName::AntinumberAnticommutator,
        GeneratorName::LindbladUp,
        GeneratorName::LindbladDown,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            GeneratorName::PhotonAdd => "photon_add",
            GeneratorName::PhotonRemove => "photon_remove",
            GeneratorName::NumberCommutator => "number_commutator",
            GeneratorName::NumberAnticommutator => "number_anticommutator",
            GeneratorName::AntinumberAnticommutator => "antinumber_anticommutator",
            GeneratorName::LindbladUp => "lindblad_up",
            GeneratorName::LindbladDown => "lindblad_down",
        }
    }
}

impl fmt::Display for GeneratorName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for GeneratorName {
    type Err = AlgebraError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        GeneratorName::ALL
            .iter()
            .find(|g| g.as_str() == s)
            .copied()
            .ok_or_else(|| AlgebraError::UnknownGenerator(s.to_string()))
    }
}

/// Build a named generator exactly from sandwich/bopp compositions (ħ = 1).
pub fn named_generator(name: GeneratorName) -> DiffOpExpr {
    let h = hbar_one();
    match name {
        GeneratorName::PhotonAdd => ladder_sandwich(Ladder::Create, Ladder::Annihilate, &h),
        GeneratorName::PhotonRemove => ladder_sandwich(Ladder::Annihilate, Ladder::Create, &h),
        GeneratorName::NumberCommutator => {
            let n = ladder_star_pair(Ladder::Create, Ladder::Annihilate, &h);
            two_sided_commutator(&n, &h)
        }
        GeneratorName::NumberAnticommutator => {
            let n = ladder_star_pair(Ladder::Create, Ladder::Annihilate, &h);
            two_sided_anticommutator(&n, &h)
        }
        GeneratorName::AntinumberAnticommutator => {
            let n = ladder_star_pair(Ladder::Annihilate, Ladder::Create, &h);
            two_sided_anticommutator(&n, &h)
        }
        GeneratorName::LindbladUp => {
            let sand = named_generator(GeneratorName::PhotonAdd).scale(&cint(2));
            sand - named_generator(GeneratorName::AntinumberAnticommutator)
        }
        GeneratorName::LindbladDown => {
            let sand = named_generator(GeneratorName::PhotonRemove).scale(&cint(2));
            sand - named_generator(GeneratorName::NumberAnticommutator)
        }
    }
}

/// Sign selector for the two Lindblad currents.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LindbladSign {
    /// J₋ = (xW − ½∂xW, pW − ½∂pW); −∇·J₋ is the `LindbladUp` generator.
    Minus,
    /// J₊ = (−xW − ½∂xW, −pW − ½∂pW); −∇·J₊ is the `LindbladDown` generator.
    Plus,
}

/// The physical Lindblad currents J∓ = −((∓x + ½∂x)W, (∓p + ½∂p)W), ħ = 1.
pub fn j_lindblad(sign: LindbladSign) -> CurrentSymbol {
    let h = hbar_one();
    let coord_sign = match sign {
        LindbladSign::Minus => c_one(),
        LindbladSign::Plus => -c_one(),
    };
    let mut jx = DiffOpExpr::from_monomial(OpMonomial::new(1, 0, 0, 0), coord_sign.clone(), h.clone());
    jx.add_term(OpMonomial::new(0, 0, 1, 0), crat(-1, 2));
    let mut jp = DiffOpExpr::from_monomial(OpMonomial::new(0, 1, 0, 0), coord_sign, h);
    jp.add_term(OpMonomial::new(0, 0, 0, 1), crat(-1, 2));
    CurrentSymbol { jx, jp }
}
