//! Time integration of ∂tW = −∇·J by the method of lines.
//!
//! The right-hand side is the full Moyal operator of the (polynomial)
//! Hamiltonian — exact, not an ħ-truncation — plus, when a bath is coupled,
//! minus the divergence of the environment current. Classical RK4 advances
//! the resulting linear system; the default step size is 0.8 times a
//! spectral stability estimate built from the grid spacing, max|∇H| over
//! the box and the bath diffusion strength.

use ndarray::Array2;
use num_complex::Complex64;

use wigner_core::{moyal_bracket, PolySymbol, Rational};

use crate::apply::CompiledOp;
use crate::currents::BathParams;
use crate::error::GridError;
use crate::field::{diagnostics, Diagnostics, WignerField};
use crate::grid::PhaseSpaceGrid;
use crate::spectral::Spectral2D;
use crate::states::{make_state, StateSpec};

#[derive(Debug, Clone)]
pub struct EvolutionConfig {
    pub hamiltonian: PolySymbol,
    /// ħ substitution for the Moyal operator (the grid itself is in ħ = 1
    /// units; this is kept separate so scaling experiments stay possible).
    pub hbar: Rational,
    pub bath: Option<BathParams>,
    pub initial: StateSpec,
    pub grid: PhaseSpaceGrid,
    /// Step size; `None` picks the stability default.
    pub dt: Option<f64>,
    pub t_end: f64,
    /// Emit a frame every this many steps (the final state is always a frame).
    pub frame_stride: usize,
    /// Test-only switch: drop J_diff while keeping J_damp, to demonstrate
    /// why the environment current needs both parts.
    #[doc(hidden)]
    pub diffusion_off: bool,
}

impl EvolutionConfig {
    pub fn new(
        hamiltonian: PolySymbol,
        initial: StateSpec,
        grid: PhaseSpaceGrid,
        t_end: f64,
    ) -> Self {
        EvolutionConfig {
            hamiltonian,
            hbar: wigner_core::op::default_hbar(),
            bath: None,
            initial,
            grid,
            dt: None,
            t_end,
            frame_stride: 100,
            diffusion_off: false,
        }
    }

    pub fn validate(&self) -> Result<(), GridError> {
        self.grid.validate()?;
        self.initial.validate()?;
        if let Some(bath) = &self.bath {
            bath.validate()?;
        }
        if !(self.t_end >= 0.0) || !self.t_end.is_finite() {
            return Err(GridError::Config(format!("t_end must be >= 0, got {}", self.t_end)));
        }
        if let Some(dt) = self.dt {
            // dt = 0 is tolerated as an explicit no-op step
            if !(dt >= 0.0) || !dt.is_finite() {
                return Err(GridError::Config(format!("dt must be >= 0, got {dt}")));
            }
        }
        if self.frame_stride == 0 {
            return Err(GridError::Config("frame_stride must be >= 1".into()));
        }
        if !self.hamiltonian.is_real() {
            return Err(GridError::Config("hamiltonian must have real coefficients".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct Frame {
    pub index: usize,
    pub t: f64,
    pub field: WignerField,
    pub diag: Diagnostics,
}

/// Precompiled right-hand side of the continuity equation on one grid.
pub struct Stepper {
    grid: PhaseSpaceGrid,
    spectral: Spectral2D,
    moyal: CompiledOp,
    bath: Option<BathParams>,
    diffusion_off: bool,
    xs: Vec<f64>,
    ps: Vec<f64>,
    max_grad_h: (f64, f64),
}

impl Stepper {
    pub fn new(config: &EvolutionConfig) -> Result<Self, GridError> {
        config.validate()?;
        let bracket = moyal_bracket(&config.hamiltonian, &config.hbar)
            .map_err(|e| GridError::Config(e.to_string()))?;
        let grid = config.grid.clone();

        // max |∂pH| and |∂xH| over the box corners/edges: polynomials are
        // sampled on the grid, which is enough for a stability estimate.
        let dhdx = config.hamiltonian.diff_x();
        let dhdp = config.hamiltonian.diff_p();
        let mut max_dp = 0.0f64;
        let mut max_dx = 0.0f64;
        for &p in &[grid.p_min, 0.0, grid.p_max] {
            for &x in &[grid.x_min, 0.0, grid.x_max] {
                max_dp = max_dp.max(dhdp.eval_f64(x, p).norm());
                max_dx = max_dx.max(dhdx.eval_f64(x, p).norm());
            }
        }

        Ok(Stepper {
            spectral: Spectral2D::new(&grid),
            moyal: CompiledOp::new(&bracket, &grid),
            bath: config.bath.filter(|b| b.gamma > 0.0),
            diffusion_off: config.diffusion_off,
            xs: grid.xs(),
            ps: grid.ps(),
            grid,
            max_grad_h: (max_dp, max_dx),
        })
    }

    /// ∂tW for the current field values.
    pub fn rhs_values(&self, v: &Array2<Complex64>) -> Array2<Complex64> {
        let mut out = self.moyal.apply_values(v);
        if let Some(bath) = &self.bath {
            // J_env = −(γ/2)(xW, pW) − (γ/2)(ħ/ω₀)(n̄+½)∇W; subtract ∇·J_env
            let half_gamma = 0.5 * bath.gamma;
            let strength = if self.diffusion_off { 0.0 } else { bath.diffusion_strength() };

            let mut jx;
            let mut jp;
            if strength != 0.0 {
                jx = self.spectral.derivative(v, 1, 0);
                jp = self.spectral.derivative(v, 0, 1);
                jx.mapv_inplace(|d| d * (-strength));
                jp.mapv_inplace(|d| d * (-strength));
            } else {
                jx = Array2::zeros(v.raw_dim());
                jp = Array2::zeros(v.raw_dim());
            }
            for (j, &p) in self.ps.iter().enumerate() {
                for (i, &x) in self.xs.iter().enumerate() {
                    let w = v[[j, i]];
                    jx[[j, i]] -= half_gamma * x * w;
                    jp[[j, i]] -= half_gamma * p * w;
                }
            }
            let div = self.spectral.derivative(&jx, 1, 0) + self.spectral.derivative(&jp, 0, 1);
            out -= &div;
        }
        out
    }

    /// One classical RK4 step.
    pub fn rk4_step(&self, v: &Array2<Complex64>, dt: f64) -> Array2<Complex64> {
        let k1 = self.rhs_values(v);
        let k2 = self.rhs_values(&stage(v, &k1, 0.5 * dt));
        let k3 = self.rhs_values(&stage(v, &k2, 0.5 * dt));
        let k4 = self.rhs_values(&stage(v, &k3, dt));
        let mut out = v.clone();
        let w = dt / 6.0;
        ndarray::Zip::from(&mut out)
            .and(&k1)
            .and(&k2)
            .and(&k3)
            .and(&k4)
            .for_each(|o, &a, &b, &c, &d| {
                *o += w * (a + 2.0 * b + 2.0 * c + d);
            });
        out
    }

    /// Declared stability bound: dt must stay below ~2.7/λ where λ adds the
    /// advective spectral radius (max|∇H| and bath drift against the grid's
    /// maximum wavenumbers) and the diffusive one.
    pub fn stability_limit(&self) -> f64 {
        let kx_max = std::f64::consts::PI / self.grid.dx();
        let kp_max = std::f64::consts::PI / self.grid.dp();
        let (max_dp, max_dx) = self.max_grad_h;
        let mut lambda = max_dp * kx_max + max_dx * kp_max;
        if let Some(bath) = &self.bath {
            let half_gamma = 0.5 * bath.gamma;
            let xm = self.grid.x_min.abs().max(self.grid.x_max.abs());
            let pm = self.grid.p_min.abs().max(self.grid.p_max.abs());
            lambda += half_gamma * (xm * kx_max + pm * kp_max);
            if !self.diffusion_off {
                lambda += bath.diffusion_strength() * (kx_max * kx_max + kp_max * kp_max);
            }
        }
        if lambda <= 0.0 {
            // free constant Hamiltonian: nothing moves, any step is stable
            return f64::INFINITY;
        }
        2.7 / lambda
    }

    /// Default step: 0.8 × the stability limit.
    pub fn stable_dt(&self) -> f64 {
        0.8 * self.stability_limit()
    }
}

fn stage(v: &Array2<Complex64>, k: &Array2<Complex64>, h: f64) -> Array2<Complex64> {
    let mut out = v.clone();
    ndarray::Zip::from(&mut out).and(k).for_each(|o, &kk| *o += h * kk);
    out
}

/// One-shot right-hand side at ħ = 1:
/// rhs = apply(moyal_bracket(H), W) − ∇·J_env(W).
pub fn rhs(
    w: &WignerField,
    hamiltonian: &PolySymbol,
    bath: Option<&BathParams>,
) -> Result<WignerField, GridError> {
    let mut config = EvolutionConfig::new(
        hamiltonian.clone(),
        StateSpec::Vacuum,
        w.grid.clone(),
        1.0,
    );
    config.bath = bath.copied();
    let stepper = Stepper::new(&config)?;
    Ok(WignerField {
        grid: w.grid.clone(),
        values: stepper.rhs_values(&w.values),
        label: format!("rhs({})", w.label),
    })
}

/// One dt advance of a field under the config's dynamics (dt = 0 is a no-op).
pub fn step(w: &WignerField, config: &EvolutionConfig) -> Result<WignerField, GridError> {
    let stepper = Stepper::new(config)?;
    let dt = config.dt.unwrap_or_else(|| {
        let d = stepper.stable_dt();
        if d.is_finite() { d } else { 1.0 }
    });
    let values = if dt == 0.0 {
        w.values.clone()
    } else {
        stepper.rk4_step(&w.values, dt)
    };
    let out = WignerField { grid: w.grid.clone(), values, label: w.label.clone() };
    if !out.is_finite() {
        return Err(GridError::NumericBlowup { t: dt });
    }
    Ok(out)
}

/// Integrate from the configured initial state to t_end, collecting frames
/// every `frame_stride` steps plus the final state. Aborts with the time
/// stamp if the field stops being finite.
pub fn evolve(config: &EvolutionConfig) -> Result<Vec<Frame>, GridError> {
    let stepper = Stepper::new(config)?;
    let initial = make_state(&config.initial, &config.grid)?;
    let mut dt = config.dt.unwrap_or_else(|| stepper.stable_dt());
    if config.t_end > 0.0 {
        if dt == 0.0 {
            return Err(GridError::Config("dt = 0 cannot reach t_end > 0".into()));
        }
        // a free constant Hamiltonian has no stability ceiling
        dt = dt.min(config.t_end);
    }

    let n_steps = if config.t_end == 0.0 {
        0
    } else {
        (config.t_end / dt).ceil() as usize
    };

    let mut frames = Vec::new();
    let mut values = initial.values.clone();
    let push_frame =
        |frames: &mut Vec<Frame>, index: usize, t: f64, values: &Array2<Complex64>| {
            let field = WignerField {
                grid: config.grid.clone(),
                values: values.clone(),
                label: format!("{} @ t={t:.6}", initial.label),
            };
            let diag = diagnostics(&field);
            frames.push(Frame { index, t, field, diag });
        };

    push_frame(&mut frames, 0, 0.0, &values);

    for k in 0..n_steps {
        // land the last step exactly on t_end
        let t_now = k as f64 * dt;
        let step_dt = if k + 1 == n_steps { config.t_end - t_now } else { dt };
        values = stepper.rk4_step(&values, step_dt);
        let t_next = if k + 1 == n_steps { config.t_end } else { t_now + dt };
        if !values.iter().all(|v| v.re.is_finite() && v.im.is_finite()) {
            return Err(GridError::NumericBlowup { t: t_next });
        }
        if (k + 1) % config.frame_stride == 0 || k + 1 == n_steps {
            push_frame(&mut frames, k + 1, t_next, &values);
        }
    }

    Ok(frames)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn osc() -> PolySymbol {
        PolySymbol::harmonic_oscillator()
    }

    #[test]
    fn rhs_of_vacuum_under_oscillator_vanishes() {
        let grid = PhaseSpaceGrid::square(7.0, 64).unwrap();
        let w = make_state(&StateSpec::Vacuum, &grid).unwrap();
        let out = rhs(&w, &osc(), None).unwrap();
        assert!(out.max_abs() < 1e-12, "rhs magnitude {:.3e}", out.max_abs());
    }

    #[test]
    fn rhs_of_matched_thermal_state_vanishes() {
        let grid = PhaseSpaceGrid::square(7.0, 64).unwrap();
        let nbar = 0.5;
        let w = make_state(&StateSpec::Thermal { nbar }, &grid).unwrap();
        let bath = BathParams::new(0.3, nbar);
        let out = rhs(&w, &osc(), Some(&bath)).unwrap();
        assert!(out.max_abs() < 1e-8, "rhs magnitude {:.3e}", out.max_abs());
    }

    #[test]
    fn rhs_of_coherent_state_is_classical_advection() {
        let grid = PhaseSpaceGrid::square(8.0, 128).unwrap();
        let alpha = Complex64::new(1.0, 0.0);
        let w = make_state(&StateSpec::Coherent { alpha }, &grid).unwrap();
        let out = rhs(&w, &osc(), None).unwrap();
        // −(p∂x − x∂p)W for the displaced Gaussian:
        // ∂xW = −2(x−x₀)W, ∂pW = −2pW with x₀ = √2,
        // so rhs = 2[p(x−x₀) − xp]W = −2√2 p W
        let x0 = std::f64::consts::SQRT_2;
        let mut max_err = 0.0f64;
        for (j, p) in grid.ps().iter().enumerate() {
            for (i, _) in grid.xs().iter().enumerate() {
                let want = -2.0 * x0 * p * w.values[[j, i]].re;
                max_err = max_err.max((out.values[[j, i]].re - want).abs());
            }
        }
        assert!(max_err < 1e-8, "max error {max_err:.3e}");
    }

    #[test]
    fn rhs_integrates_to_zero_for_divergence_dynamics() {
        let grid = PhaseSpaceGrid::square(7.0, 64).unwrap();
        let w = make_state(&StateSpec::Fock { n: 2 }, &grid).unwrap();
        let bath = BathParams::new(0.4, 0.3);
        let out = rhs(&w, &(osc() + PolySymbol::x().pow(4)), Some(&bath)).unwrap();
        assert!(out.integral().norm() < 1e-9);
    }

    #[test]
    fn zero_dt_step_is_identity() {
        let grid = PhaseSpaceGrid::square(7.0, 32).unwrap();
        let w = make_state(&StateSpec::Vacuum, &grid).unwrap();
        let mut config = EvolutionConfig::new(osc(), StateSpec::Vacuum, grid, 1.0);
        config.dt = Some(0.0);
        let out = step(&w, &config).unwrap();
        assert_eq!(out.values, w.values);
    }

    #[test]
    fn vacuum_is_a_fixed_point_of_the_stepper() {
        let grid = PhaseSpaceGrid::square(7.0, 64).unwrap();
        let w = make_state(&StateSpec::Vacuum, &grid).unwrap();
        let config = EvolutionConfig::new(osc(), StateSpec::Vacuum, grid, 1.0);
        let out = step(&w, &config).unwrap();
        assert!(w.linf_distance(&out) < 1e-10);
    }

    #[test]
    fn rk4_convergence_order_is_four() {
        let grid = PhaseSpaceGrid::square(7.0, 32).unwrap();
        let alpha = Complex64::new(1.0, 0.0);
        let w = make_state(&StateSpec::Coherent { alpha }, &grid).unwrap();
        let config = EvolutionConfig::new(osc(), StateSpec::Vacuum, grid, 1.0);
        let stepper = Stepper::new(&config).unwrap();

        // advance a fixed horizon T with steps h, h/2, h/4 (all inside the
        // stability region); Richardson gives the global order
        let t_total = 0.2;
        let run = |h: f64| -> Array2<Complex64> {
            let n = (t_total / h).round() as usize;
            let mut v = w.values.clone();
            for _ in 0..n {
                v = stepper.rk4_step(&v, h);
            }
            v
        };
        let coarse = run(0.02);
        let medium = run(0.01);
        let fine = run(0.005);
        let d1 = coarse
            .iter()
            .zip(medium.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        let d2 = medium
            .iter()
            .zip(fine.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        let order = (d1 / d2).log2();
        assert!(
            (order - 4.0).abs() < 0.2,
            "measured order {order:.3} (d1 = {d1:.3e}, d2 = {d2:.3e})"
        );
    }

    #[test]
    fn zero_duration_run_returns_single_frame() {
        let grid = PhaseSpaceGrid::square(7.0, 32).unwrap();
        let config = EvolutionConfig::new(osc(), StateSpec::Vacuum, grid.clone(), 0.0);
        let frames = evolve(&config).unwrap();
        assert_eq!(frames.len(), 1);
        let w = make_state(&StateSpec::Vacuum, &grid).unwrap();
        assert_eq!(frames[0].field.values, w.values);
        assert_eq!(frames[0].t, 0.0);
    }

    #[test]
    fn zero_gamma_bath_is_bitwise_the_closed_system() {
        let grid = PhaseSpaceGrid::square(8.0, 32).unwrap();
        let alpha = Complex64::new(0.5, 0.5);
        let mut closed = EvolutionConfig::new(
            osc(),
            StateSpec::Coherent { alpha },
            grid,
            0.5,
        );
        closed.frame_stride = 7;
        let mut open = closed.clone();
        open.bath = Some(BathParams::new(0.0, 1.5));

        let a = evolve(&closed).unwrap();
        let b = evolve(&open).unwrap();
        assert_eq!(a.len(), b.len());
        for (fa, fb) in a.iter().zip(b.iter()) {
            assert_eq!(fa.field.values, fb.field.values);
        }
    }

    #[test]
    fn final_frame_lands_exactly_on_t_end() {
        // a constant Hamiltonian exercises the frame bookkeeping alone
        let grid = PhaseSpaceGrid::square(7.0, 32).unwrap();
        let mut config =
            EvolutionConfig::new(PolySymbol::zero(), StateSpec::Vacuum, grid, 0.777);
        config.dt = Some(0.1);
        config.frame_stride = 3;
        let frames = evolve(&config).unwrap();
        let last = frames.last().unwrap();
        assert_eq!(last.t, 0.777);
        assert_eq!(last.index, 8); // ceil(0.777/0.1)
        for pair in frames.windows(2) {
            assert!(pair[1].t > pair[0].t);
        }
        // the state itself never moved
        assert!(last.field.linf_distance(&frames[0].field) < 1e-15);
    }

    #[test]
    fn default_dt_handles_free_dynamics() {
        let grid = PhaseSpaceGrid::square(7.0, 32).unwrap();
        let config = EvolutionConfig::new(PolySymbol::zero(), StateSpec::Vacuum, grid, 2.0);
        let frames = evolve(&config).unwrap();
        assert_eq!(frames.last().unwrap().t, 2.0);
    }
}
