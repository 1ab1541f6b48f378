//! Closed-form Wigner functions of the standard quantum-optical states,
//! sampled and normalized on a grid. Conventions: ħ = m = ω = 1,
//! a = (x + ip)/√2, so a coherent state α sits at (x₀, p₀) = √2(Re α, Im α)
//! and the vacuum has variance 1/2 in both quadratures.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::GridError;
use crate::field::WignerField;
use crate::grid::PhaseSpaceGrid;

#[derive(Debug, Clone, PartialEq)]
pub enum StateSpec {
    Vacuum,
    Coherent { alpha: Complex64 },
    Squeezed { r: f64, phi: f64 },
    Fock { n: u32 },
    Thermal { nbar: f64 },
}

impl StateSpec {
    pub fn label(&self) -> String {
        match self {
            StateSpec::Vacuum => "vacuum".into(),
            StateSpec::Coherent { alpha } => format!("coherent(alpha={alpha})"),
            StateSpec::Squeezed { r, phi } => format!("squeezed(r={r}, phi={phi})"),
            StateSpec::Fock { n } => format!("fock({n})"),
            StateSpec::Thermal { nbar } => format!("thermal(nbar={nbar})"),
        }
    }

    pub fn validate(&self) -> Result<(), GridError> {
        match self {
            StateSpec::Thermal { nbar } if *nbar < 0.0 => Err(GridError::Config(
                format!("thermal occupation must be >= 0, got {nbar}"),
            )),
            StateSpec::Coherent { alpha } if !alpha.re.is_finite() || !alpha.im.is_finite() => {
                Err(GridError::Config("coherent displacement must be finite".into()))
            }
            StateSpec::Squeezed { r, phi } if !r.is_finite() || !phi.is_finite() => {
                Err(GridError::Config("squeezing parameters must be finite".into()))
            }
            _ => Ok(()),
        }
    }
}

/// Laguerre polynomial L_n(z) by the three-term recurrence.
fn laguerre(n: u32, z: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut curr = 1.0 - z;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 - z) * curr - kf * prev) / (kf + 1.0);
        prev = curr;
        curr = next;
    }
    curr
}

fn closed_form(spec: &StateSpec) -> impl Fn(f64, f64) -> f64 + '_ {
    move |x: f64, p: f64| -> f64 {
        match spec {
            StateSpec::Vacuum => (-(x * x + p * p)).exp() / PI,
            StateSpec::Coherent { alpha } => {
                let x0 = std::f64::consts::SQRT_2 * alpha.re;
                let p0 = std::f64::consts::SQRT_2 * alpha.im;
                (-((x - x0).powi(2) + (p - p0).powi(2))).exp() / PI
            }
            StateSpec::Squeezed { r, phi } => {
                // variances e^{−2r}/2 along the φ-rotated axis, e^{+2r}/2 across
                let u = x * phi.cos() + p * phi.sin();
                let v = -x * phi.sin() + p * phi.cos();
                (-((2.0 * r).exp() * u * u + (-2.0 * r).exp() * v * v)).exp() / PI
            }
            StateSpec::Fock { n } => {
                let r2 = x * x + p * p;
                let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                sign / PI * laguerre(*n, 2.0 * r2) * (-r2).exp()
            }
            StateSpec::Thermal { nbar } => {
                let width = nbar + 0.5;
                (-(x * x + p * p) / (2.0 * width)).exp() / (2.0 * PI * width)
            }
        }
    }
}

/// Sample a state on a grid and normalize to unit integral by midpoint
/// quadrature. Errors if the grid is too small to hold the state: the
/// boundary samples must stay below 1e−12 of the peak.
pub fn make_state(spec: &StateSpec, grid: &PhaseSpaceGrid) -> Result<WignerField, GridError> {
    spec.validate()?;
    grid.validate()?;
    let field = WignerField::from_fn(grid.clone(), spec.label(), closed_form(spec));

    let peak = field.max_abs();
    let (boundary, edge) = field.boundary_max_abs();
    if boundary > 1e-12 * peak {
        return Err(GridError::GridTooSmall {
            label: field.label.clone(),
            edge,
            boundary,
            peak,
        });
    }

    Ok(field.renormalized())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::diagnostics;

    fn grid256() -> PhaseSpaceGrid {
        PhaseSpaceGrid::square(6.0, 256).unwrap()
    }

    #[test]
    fn vacuum_peak_is_one_over_pi() {
        let w = make_state(&StateSpec::Vacuum, &grid256()).unwrap();
        // (0,0) is a grid point for even n over a symmetric box
        let i0 = 128;
        assert!((w.values[[i0, i0]].re - 1.0 / PI).abs() < 1e-9);
    }

    #[test]
    fn fock_one_is_negative_at_origin() {
        let w = make_state(&StateSpec::Fock { n: 1 }, &grid256()).unwrap();
        let i0 = 128;
        assert!((w.values[[i0, i0]].re + 1.0 / PI).abs() < 1e-9);
    }

    #[test]
    fn thermal_at_zero_occupation_is_vacuum_pointwise() {
        let vac = make_state(&StateSpec::Vacuum, &grid256()).unwrap();
        let th = make_state(&StateSpec::Thermal { nbar: 0.0 }, &grid256()).unwrap();
        assert_eq!(vac.values, th.values);
    }

    #[test]
    fn too_small_grid_is_rejected_with_edge_info() {
        let tiny = PhaseSpaceGrid::square(1.5, 32).unwrap();
        let err = make_state(&StateSpec::Vacuum, &tiny).unwrap_err();
        match err {
            GridError::GridTooSmall { boundary, peak, .. } => {
                assert!(boundary > 1e-12 * peak);
            }
            other => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn diagnostics_of_standard_states() {
        let vac = make_state(&StateSpec::Vacuum, &grid256()).unwrap();
        let d = diagnostics(&vac);
        assert!((d.norm - 1.0).abs() < 1e-12);
        assert!((d.var_x - 0.5).abs() < 1e-9);
        assert!((d.var_p - 0.5).abs() < 1e-9);
        assert!((d.purity - 1.0).abs() < 1e-9);
        assert!(d.min_value >= -1e-15);

        let f1 = make_state(&StateSpec::Fock { n: 1 }, &grid256()).unwrap();
        let d = diagnostics(&f1);
        assert!((d.min_value + 1.0 / PI).abs() < 1e-6);
        assert!((d.norm - 1.0).abs() < 1e-12);

        let th = make_state(&StateSpec::Thermal { nbar: 1.0 }, &grid256()).unwrap();
        let d = diagnostics(&th);
        assert!((d.var_x - 1.5).abs() < 1e-6);
        assert!((d.var_p - 1.5).abs() < 1e-6);
        assert!((d.purity - 1.0 / 3.0).abs() < 1e-6);
    }

    #[test]
    fn coherent_state_center() {
        let alpha = Complex64::new(1.0, -0.5);
        let w = make_state(&StateSpec::Coherent { alpha }, &grid256()).unwrap();
        let d = diagnostics(&w);
        assert!((d.mean_x - std::f64::consts::SQRT_2).abs() < 1e-9);
        assert!((d.mean_p + std::f64::consts::SQRT_2 * 0.5).abs() < 1e-9);
    }

    #[test]
    fn squeezed_state_variances() {
        let w = make_state(&StateSpec::Squeezed { r: 0.3, phi: 0.0 }, &grid256()).unwrap();
        let d = diagnostics(&w);
        assert!((d.var_x - 0.5 * (-0.6f64).exp()).abs() < 1e-9);
        assert!((d.var_p - 0.5 * (0.6f64).exp()).abs() < 1e-9);
        assert!((d.purity - 1.0).abs() < 1e-9);
    }

    #[test]
    fn fock_states_are_normalized_up_to_n4() {
        for n in 0..=4 {
            let w = make_state(&StateSpec::Fock { n }, &grid256()).unwrap();
            let d = diagnostics(&w);
            assert!((d.norm - 1.0).abs() < 1e-12);
            // energy of |n⟩ gives var_x = var_p = n + 1/2
            assert!(
                (d.var_x - (n as f64 + 0.5)).abs() < 1e-6,
                "fock {n} var_x = {}",
                d.var_x
            );
        }
    }
}
