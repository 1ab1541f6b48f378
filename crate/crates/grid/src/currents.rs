//! Sampled phase-space currents: the classical Hamiltonian current and the
//! environment-coupling current of the damped-oscillator master equation,
//!
//!   J_env = −(γ/2) W (x, p)ᵀ − (γ/2)(ħ/ω₀)(n̄ + ½) ∇W ≡ J_damp + J_diff.

use serde::{Deserialize, Serialize};

use wigner_core::PolySymbol;

use crate::error::GridError;
use crate::field::{CurrentField, WignerField};
use crate::spectral::Spectral2D;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BathParams {
    /// Damping rate γ ≥ 0.
    pub gamma: f64,
    /// Thermal occupation n̄ ≥ 0.
    pub nbar: f64,
    /// Oscillator frequency ω₀ > 0 entering the diffusion strength.
    pub omega0: f64,
    /// ħ in the ħ/ω₀ diffusion factor.
    pub hbar: f64,
}

impl Default for BathParams {
    fn default() -> Self {
        BathParams { gamma: 0.0, nbar: 0.0, omega0: 1.0, hbar: 1.0 }
    }
}

impl BathParams {
    pub fn new(gamma: f64, nbar: f64) -> Self {
        BathParams { gamma, nbar, ..Default::default() }
    }

    pub fn validate(&self) -> Result<(), GridError> {
        if !(self.gamma >= 0.0) {
            return Err(GridError::InvalidBath(format!("gamma must be >= 0, got {}", self.gamma)));
        }
        if !(self.nbar >= 0.0) {
            return Err(GridError::InvalidBath(format!("nbar must be >= 0, got {}", self.nbar)));
        }
        if !(self.omega0 > 0.0) {
            return Err(GridError::InvalidBath(format!("omega0 must be > 0, got {}", self.omega0)));
        }
        if !(self.hbar > 0.0) {
            return Err(GridError::InvalidBath(format!("hbar must be > 0, got {}", self.hbar)));
        }
        Ok(())
    }

    /// The ∇W prefactor (γ/2)(ħ/ω₀)(n̄ + ½) of J_diff.
    pub fn diffusion_strength(&self) -> f64 {
        0.5 * self.gamma * (self.hbar / self.omega0) * (self.nbar + 0.5)
    }
}

/// The damping and diffusion parts of J_env, separately.
pub fn env_current_split(w: &WignerField, bath: &BathParams) -> (CurrentField, CurrentField) {
    let mut damp = CurrentField::zeros(w.grid.clone());
    let mut diff = CurrentField::zeros(w.grid.clone());
    if bath.gamma == 0.0 {
        return (damp, diff);
    }

    let half_gamma = 0.5 * bath.gamma;
    let xs = w.grid.xs();
    let ps = w.grid.ps();
    for (j, &p) in ps.iter().enumerate() {
        for (i, &x) in xs.iter().enumerate() {
            let v = w.values[[j, i]].re;
            damp.jx[[j, i]] = -half_gamma * x * v;
            damp.jp[[j, i]] = -half_gamma * p * v;
        }
    }

    let strength = bath.diffusion_strength();
    let spectral = Spectral2D::new(&w.grid);
    let dxw = spectral.derivative(&w.values, 1, 0);
    let dpw = spectral.derivative(&w.values, 0, 1);
    for j in 0..w.grid.np {
        for i in 0..w.grid.nx {
            diff.jx[[j, i]] = -strength * dxw[[j, i]].re;
            diff.jp[[j, i]] = -strength * dpw[[j, i]].re;
        }
    }
    (damp, diff)
}

/// The full environment current J_env = J_damp + J_diff.
pub fn env_current(w: &WignerField, bath: &BathParams) -> CurrentField {
    let (damp, diff) = env_current_split(w, bath);
    damp.add(&diff)
}

/// The classical current J₁ = (W ∂pH, −W ∂xH).
pub fn classical_current(h: &PolySymbol, w: &WignerField) -> CurrentField {
    let dhdx = h.diff_x();
    let dhdp = h.diff_p();
    let mut out = CurrentField::zeros(w.grid.clone());
    let xs = w.grid.xs();
    let ps = w.grid.ps();
    for (j, &p) in ps.iter().enumerate() {
        for (i, &x) in xs.iter().enumerate() {
            let v = w.values[[j, i]].re;
            out.jx[[j, i]] = v * dhdp.eval_f64(x, p).re;
            out.jp[[j, i]] = -v * dhdx.eval_f64(x, p).re;
        }
    }
    out
}
