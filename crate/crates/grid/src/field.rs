//! Sampled fields on a phase-space grid and their diagnostics.
//!
//! Values are stored as an `Array2<Complex64>` of shape (np, nx), indexed
//! `[[p_index, x_index]]`, which makes the x direction contiguous — the
//! same order as the `.f64` raster (row-major, x varying fastest).
//! Imaginary parts of physical states stay at rounding level; they are kept
//! so that non-Hermitian operator output can be represented faithfully.

use ndarray::Array2;
use num_complex::Complex64;

use crate::grid::PhaseSpaceGrid;

#[derive(Debug, Clone)]
pub struct WignerField {
    pub grid: PhaseSpaceGrid,
    pub values: Array2<Complex64>,
    pub label: String,
}

impl WignerField {
    pub fn zeros(grid: PhaseSpaceGrid, label: impl Into<String>) -> Self {
        let values = Array2::zeros((grid.np, grid.nx));
        WignerField { grid, values, label: label.into() }
    }

    /// Sample a real-valued closed form.
    pub fn from_fn(
        grid: PhaseSpaceGrid,
        label: impl Into<String>,
        f: impl Fn(f64, f64) -> f64,
    ) -> Self {
        let mut field = WignerField::zeros(grid, label);
        let (xs, ps) = (field.grid.xs(), field.grid.ps());
        for (j, &p) in ps.iter().enumerate() {
            for (i, &x) in xs.iter().enumerate() {
                field.values[[j, i]] = Complex64::new(f(x, p), 0.0);
            }
        }
        field
    }

    /// Midpoint-rule integral ∫∫ W dx dp.
    pub fn integral(&self) -> Complex64 {
        self.values.sum() * self.grid.cell_area()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Largest |W| on the four retained grid edges, with the edge name.
    pub fn boundary_max_abs(&self) -> (f64, &'static str) {
        let (np, nx) = self.values.dim();
        let mut worst = (0.0f64, "x_min");
        let mut consider = |v: Complex64, edge: &'static str| {
            let a = v.norm();
            if a > worst.0 {
                worst = (a, edge);
            }
        };
        for j in 0..np {
            consider(self.values[[j, 0]], "x_min");
            consider(self.values[[j, nx - 1]], "x_max");
        }
        for i in 0..nx {
            consider(self.values[[0, i]], "p_min");
            consider(self.values[[np - 1, i]], "p_max");
        }
        worst
    }

    pub fn max_imag_abs(&self) -> f64 {
        self.values.iter().map(|v| v.im.abs()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.re.is_finite() && v.im.is_finite())
    }

    /// Rescaled to unit integral (real part of the current norm).
    pub fn renormalized(&self) -> WignerField {
        let norm = self.integral().re;
        let mut out = self.clone();
        out.values.mapv_inplace(|v| v / norm);
        out
    }

    pub fn linf_distance(&self, other: &WignerField) -> f64 {
        self.values
            .iter()
            .zip(other.values.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// L2 distance in the quadrature norm: sqrt(∫∫ |ΔW|² dx dp).
    pub fn l2_distance(&self, other: &WignerField) -> f64 {
        let sum: f64 = self
            .values
            .iter()
            .zip(other.values.iter())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum();
        (sum * self.grid.cell_area()).sqrt()
    }
}

/// A sampled phase-space current (Jx, Jp); components are real fields.
#[derive(Debug, Clone)]
pub struct CurrentField {
    pub grid: PhaseSpaceGrid,
    pub jx: Array2<f64>,
    pub jp: Array2<f64>,
}

impl CurrentField {
    pub fn zeros(grid: PhaseSpaceGrid) -> Self {
        let jx = Array2::zeros((grid.np, grid.nx));
        let jp = Array2::zeros((grid.np, grid.nx));
        CurrentField { grid, jx, jp }
    }

    pub fn max_abs(&self) -> f64 {
        self.jx
            .iter()
            .chain(self.jp.iter())
            .map(|v| v.abs())
            .fold(0.0, f64::max)
    }

    pub fn add(&self, other: &CurrentField) -> CurrentField {
        CurrentField {
            grid: self.grid.clone(),
            jx: &self.jx + &other.jx,
            jp: &self.jp + &other.jp,
        }
    }
}

/// Midpoint-quadrature moments and purity of a field.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Diagnostics {
    pub norm: f64,
    pub mean_x: f64,
    pub mean_p: f64,
    pub var_x: f64,
    pub var_p: f64,
    /// 2πħ ∫∫ W² dx dp with ħ = 1.
    pub purity: f64,
    pub min_value: f64,
}

pub fn diagnostics(w: &WignerField) -> Diagnostics {
    let area = w.grid.cell_area();
    let xs = w.grid.xs();
    let ps = w.grid.ps();

    let mut norm = 0.0;
    let mut sx = 0.0;
    let mut sp = 0.0;
    let mut sxx = 0.0;
    let mut spp = 0.0;
    let mut sq = 0.0;
    let mut min_value = f64::INFINITY;

    for (j, &p) in ps.iter().enumerate() {
        for (i, &x) in xs.iter().enumerate() {
            let v = w.values[[j, i]].re;
            norm += v;
            sx += x * v;
            sp += p * v;
            sxx += x * x * v;
            spp += p * p * v;
            sq += w.values[[j, i]].norm_sqr();
            if v < min_value {
                min_value = v;
            }
        }
    }
    norm *= area;
    sx *= area;
    sp *= area;
    sxx *= area;
    spp *= area;
    sq *= area;

    let mean_x = sx / norm;
    let mean_p = sp / norm;
    Diagnostics {
        norm,
        mean_x,
        mean_p,
        var_x: sxx / norm - mean_x * mean_x,
        var_p: spp / norm - mean_p * mean_p,
        purity: 2.0 * std::f64::consts::PI * sq,
        min_value,
    }
}
