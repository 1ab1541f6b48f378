//! Uniform phase-space grids with the periodic endpoint-excluded
//! convention: x_i = x_min + i·dx for i in 0..nx, so x_max itself is the
//! wrap-around point. Units are dimensionless (ħ = m = ω = 1).

use serde::{Deserialize, Serialize};

use crate::error::GridError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhaseSpaceGrid {
    pub x_min: f64,
    pub x_max: f64,
    pub p_min: f64,
    pub p_max: f64,
    pub nx: usize,
    pub np: usize,
}

impl PhaseSpaceGrid {
    pub fn new(
        x_min: f64,
        x_max: f64,
        p_min: f64,
        p_max: f64,
        nx: usize,
        np: usize,
    ) -> Result<Self, GridError> {
        let grid = PhaseSpaceGrid { x_min, x_max, p_min, p_max, nx, np };
        grid.validate()?;
        Ok(grid)
    }

    /// Square box [−half_width, half_width]² with n points per axis.
    pub fn square(half_width: f64, n: usize) -> Result<Self, GridError> {
        PhaseSpaceGrid::new(-half_width, half_width, -half_width, half_width, n, n)
    }

    pub fn validate(&self) -> Result<(), GridError> {
        if !(self.x_max > self.x_min) || !(self.p_max > self.p_min) {
            return Err(GridError::InvalidGrid(format!(
                "box must have positive extent, got x [{}, {}], p [{}, {}]",
                self.x_min, self.x_max, self.p_min, self.p_max
            )));
        }
        if self.nx == 0 || self.np == 0 {
            return Err(GridError::InvalidGrid("nx and np must be positive".into()));
        }
        if !self.x_min.is_finite()
            || !self.x_max.is_finite()
            || !self.p_min.is_finite()
            || !self.p_max.is_finite()
        {
            return Err(GridError::InvalidGrid("box bounds must be finite".into()));
        }
        Ok(())
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / self.nx as f64
    }

    pub fn dp(&self) -> f64 {
        (self.p_max - self.p_min) / self.np as f64
    }

    /// Midpoint-rule cell weight.
    pub fn cell_area(&self) -> f64 {
        self.dx() * self.dp()
    }

    pub fn x_at(&self, i: usize) -> f64 {
        self.x_min + i as f64 * self.dx()
    }

    pub fn p_at(&self, j: usize) -> f64 {
        self.p_min + j as f64 * self.dp()
    }

    pub fn xs(&self) -> Vec<f64> {
        (0..self.nx).map(|i| self.x_at(i)).collect()
    }

    pub fn ps(&self) -> Vec<f64> {
        (0..self.np).map(|j| self.p_at(j)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoint_is_excluded() {
        let g = PhaseSpaceGrid::square(6.0, 4).unwrap();
        assert_eq!(g.dx(), 3.0);
        assert_eq!(g.xs(), vec![-6.0, -3.0, 0.0, 3.0]);
    }

    #[test]
    fn rejects_degenerate_boxes() {
        assert!(PhaseSpaceGrid::new(1.0, 1.0, -1.0, 1.0, 8, 8).is_err());
        assert!(PhaseSpaceGrid::new(-1.0, 1.0, -1.0, 1.0, 0, 8).is_err());
    }
}
