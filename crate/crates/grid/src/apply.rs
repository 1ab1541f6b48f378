//! Numerical realization of symbolic operators on sampled fields.
//!
//! A `CompiledOp` groups a `DiffOpExpr` by derivative signature (c, d),
//! samples each group's polynomial prefactor once, and then evaluates
//! W ↦ Σ prefactor_{c,d} · ∂x^c ∂p^d W with spectral derivatives. This is
//! what the time stepper calls thousands of times per run.

use ndarray::Array2;
use num_complex::Complex64;
use std::collections::BTreeMap;

use wigner_core::{DiffOpExpr, PolySymbol, Powers};

use crate::field::WignerField;
use crate::grid::PhaseSpaceGrid;
use crate::spectral::Spectral2D;

pub struct CompiledOp {
    grid: PhaseSpaceGrid,
    spectral: Spectral2D,
    terms: Vec<(u32, u32, Array2<Complex64>)>,
}

impl CompiledOp {
    pub fn new(expr: &DiffOpExpr, grid: &PhaseSpaceGrid) -> Self {
        // collect Σ coeff·x^a p^b per derivative signature
        let mut groups: BTreeMap<(u32, u32), PolySymbol> = BTreeMap::new();
        for (mono, coeff) in expr.terms() {
            groups
                .entry((mono.dx_ord, mono.dp_ord))
                .or_insert_with(PolySymbol::zero)
                .add_term(Powers::new(mono.x_pow, mono.p_pow), coeff.clone());
        }

        let xs = grid.xs();
        let ps = grid.ps();
        let terms = groups
            .into_iter()
            .map(|((c, d), poly)| {
                let mut prefactor = Array2::zeros((grid.np, grid.nx));
                for (j, &p) in ps.iter().enumerate() {
                    for (i, &x) in xs.iter().enumerate() {
                        prefactor[[j, i]] = poly.eval_f64(x, p);
                    }
                }
                (c, d, prefactor)
            })
            .collect();

        CompiledOp {
            grid: grid.clone(),
            spectral: Spectral2D::new(grid),
            terms,
        }
    }

    pub fn grid(&self) -> &PhaseSpaceGrid {
        &self.grid
    }

    pub fn apply_values(&self, values: &Array2<Complex64>) -> Array2<Complex64> {
        let mut out: Array2<Complex64> = Array2::zeros(values.raw_dim());
        for (c, d, prefactor) in &self.terms {
            if *c == 0 && *d == 0 {
                ndarray::Zip::from(&mut out)
                    .and(prefactor)
                    .and(values)
                    .for_each(|o, &f, &v| *o += f * v);
            } else {
                let derived = self.spectral.derivative(values, *c, *d);
                ndarray::Zip::from(&mut out)
                    .and(prefactor)
                    .and(&derived)
                    .for_each(|o, &f, &v| *o += f * v);
            }
        }
        out
    }

    pub fn apply(&self, w: &WignerField) -> WignerField {
        WignerField {
            grid: w.grid.clone(),
            values: self.apply_values(&w.values),
            label: w.label.clone(),
        }
    }
}

/// One-shot operator application. Warns (but proceeds) when the field has
/// not decayed at the box edge, since the periodic convention then leaks.
pub fn apply_expr(expr: &DiffOpExpr, w: &WignerField) -> WignerField {
    let (boundary, edge) = w.boundary_max_abs();
    let peak = w.max_abs();
    if peak > 0.0 && boundary > 1e-10 * peak {
        log::warn!(
            "field `{}` has boundary mass {boundary:.3e} on the {edge} edge \
             (peak {peak:.3e}); periodic derivatives may be contaminated",
            w.label
        );
    }
    CompiledOp::new(expr, &w.grid).apply(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{make_state, StateSpec};
    use wigner_core::op::default_hbar;

    #[test]
    fn identity_operator_is_identity() {
        let grid = PhaseSpaceGrid::square(6.0, 64).unwrap();
        let w = make_state(&StateSpec::Vacuum, &grid).unwrap();
        let out = apply_expr(&DiffOpExpr::identity(default_hbar()), &w);
        assert_eq!(out.values, w.values);
    }

    #[test]
    fn polynomial_multiplication_operator() {
        let grid = PhaseSpaceGrid::square(6.0, 64).unwrap();
        let w = make_state(&StateSpec::Vacuum, &grid).unwrap();
        let op = DiffOpExpr::from_poly(&PolySymbol::x(), default_hbar());
        let out = apply_expr(&op, &w);
        for (j, p) in grid.ps().iter().enumerate() {
            for (i, x) in grid.xs().iter().enumerate() {
                let want = x * w.values[[j, i]].re;
                assert!((out.values[[j, i]].re - want).abs() < 1e-14, "at ({x},{p})");
            }
        }
    }
}
