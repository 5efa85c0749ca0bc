//! Asymmetry measures over distributions and parameter sweeps.
//!
//! Every sweep evaluates its grid points independently on the rayon pool;
//! results are assembled in grid order.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::coin::{AngleMode, CoinParams};
use crate::error::{Error, Result};
use crate::evolution::run_walk;
use crate::state::ProbabilityDistribution;

/// Default θ grid in degrees: 0° to 315° every 45°.
pub const DEFAULT_THETA_GRID_DEG: (f64, f64, f64) = (0.0, 315.0, 45.0);
/// Default φ₁ grid in degrees: 0° to 180° every 30°.
pub const DEFAULT_PHI1_GRID_DEG: (f64, f64, f64) = (0.0, 180.0, 30.0);
/// Default φ₂ grid in degrees: 0° to 150° every 30°.
pub const DEFAULT_PHI2_GRID_DEG: (f64, f64, f64) = (0.0, 150.0, 30.0);

/// Height of the tallest probability minus the tallest at any other
/// position. Zero when the maximum is attained at two or more positions.
pub fn peak_gap(dist: &ProbabilityDistribution) -> Result<f64> {
    if dist.len() < 2 {
        return Err(Error::InvalidInput("peak gap needs at least two positions".into()));
    }
    let probs = dist.probs();
    let top = probs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut at_top = 0;
    let mut runner_up = f64::NEG_INFINITY;
    for &p in probs {
        if p == top {
            at_top += 1;
        } else {
            runner_up = runner_up.max(p);
        }
    }
    if at_top >= 2 {
        return Ok(0.0);
    }
    Ok(top - runner_up)
}

/// `max_x |P(x) − P(−x)|` over a window symmetric about the origin.
pub fn symmetry_deviation(dist: &ProbabilityDistribution) -> Result<f64> {
    let xs = dist.positions();
    let symmetric = xs.iter().zip(xs.iter().rev()).all(|(a, b)| *a == -*b);
    if !symmetric {
        return Err(Error::InvalidInput("position window is not symmetric about 0".into()));
    }
    let ps = dist.probs();
    Ok(ps
        .iter()
        .zip(ps.iter().rev())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max))
}

/// One walk per parameter set, all from the same initial coin state.
pub fn sweep(
    params: &[CoinParams],
    alpha: Complex64,
    beta: Complex64,
    steps: usize,
) -> Result<Vec<ProbabilityDistribution>> {
    params.par_iter().map(|p| run_walk(p, alpha, beta, steps)).collect()
}

pub fn theta_sweep(
    thetas: &[f64],
    phi1: f64,
    phi2: f64,
    alpha: Complex64,
    beta: Complex64,
    steps: usize,
    mode: AngleMode,
) -> Result<Vec<(f64, ProbabilityDistribution)>> {
    if steps == 0 {
        return Err(Error::InvalidParameter("a sweep needs at least one step".into()));
    }
    let params = thetas
        .iter()
        .map(|&t| CoinParams::with_mode(t, phi1, phi2, mode))
        .collect::<Result<Vec<_>>>()?;
    let dists = sweep(&params, alpha, beta, steps)?;
    Ok(thetas.iter().copied().zip(dists).collect())
}

/// Peak gap over a (φ₁, φ₂) grid at fixed θ and time.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseDiagram {
    pub theta: f64,
    pub time: usize,
    pub phi1_grid: Vec<f64>,
    pub phi2_grid: Vec<f64>,
    /// `delta[i][j]` belongs to `(phi1_grid[i], phi2_grid[j])`.
    pub delta: Vec<Vec<f64>>,
}

impl PhaseDiagram {
    /// Largest spread of Δ along the φ₂ axis over all rows.
    pub fn phi2_variation(&self) -> f64 {
        self.delta
            .iter()
            .map(|row| {
                let hi = row.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                let lo = row.iter().copied().fold(f64::INFINITY, f64::min);
                hi - lo
            })
            .fold(0.0, f64::max)
    }

    /// Row-major `(phi1, phi2, delta)` triples.
    pub fn cells(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.phi1_grid.iter().zip(&self.delta).flat_map(move |(&p1, row)| {
            self.phi2_grid.iter().zip(row).map(move |(&p2, &d)| (p1, p2, d))
        })
    }
}

pub fn phase_diagram(
    theta: f64,
    phi1_grid: &[f64],
    phi2_grid: &[f64],
    alpha: Complex64,
    beta: Complex64,
    steps: usize,
    mode: AngleMode,
) -> Result<PhaseDiagram> {
    if phi1_grid.is_empty() || phi2_grid.is_empty() {
        return Err(Error::InvalidInput("phase diagram grids must be nonempty".into()));
    }
    let cols = phi2_grid.len();
    let params = phi1_grid
        .iter()
        .flat_map(|&p1| phi2_grid.iter().map(move |&p2| (p1, p2)))
        .map(|(p1, p2)| CoinParams::with_mode(theta, p1, p2, mode))
        .collect::<Result<Vec<_>>>()?;
    let flat = params
        .par_iter()
        .map(|p| run_walk(p, alpha, beta, steps).and_then(|d| peak_gap(&d)))
        .collect::<Result<Vec<f64>>>()?;
    Ok(PhaseDiagram {
        theta,
        time: steps,
        phi1_grid: phi1_grid.to_vec(),
        phi2_grid: phi2_grid.to_vec(),
        delta: flat.chunks(cols).map(<[f64]>::to_vec).collect(),
    })
}

/// Inclusive arithmetic grid `start, start+step, ...` up to `stop`.
pub fn linear_grid(start: f64, stop: f64, step: f64) -> Vec<f64> {
    if !(step > 0.0) || stop < start {
        return if start == stop { vec![start] } else { Vec::new() };
    }
    let slack = step * 1e-9;
    (0..)
        .map(|i| start + i as f64 * step)
        .take_while(|v| *v <= stop + slack)
        .collect()
}

pub fn degrees_to_radians(grid: &[f64]) -> Vec<f64> {
    grid.iter().map(|d| d.to_radians()).collect()
}
