//! Husimi Q function of piston states and a radial nonpassivity indicator.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quantum::{coherent_amplitudes, ln_factorials, DensityMatrix, C64};

use super::GaussianPistonState;

const INV_PI: f64 = std::f64::consts::FRAC_1_PI;

/// Square grid of complex amplitudes, `points` per axis over
/// [-alpha_max, alpha_max] in both quadratures.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub alpha_max: f64,
    pub points: usize,
}

impl GridSpec {
    pub fn new(alpha_max: f64, points: usize) -> Result<Self> {
        if !(alpha_max > 0.0 && alpha_max.is_finite()) || points < 2 {
            return Err(Error::InvalidInput(format!(
                "grid needs alpha_max > 0 and at least 2 points, got {alpha_max}, {points}"
            )));
        }
        Ok(Self { alpha_max, points })
    }

    pub fn axis(&self) -> Vec<f64> {
        let step = self.step();
        (0..self.points).map(|i| -self.alpha_max + i as f64 * step).collect()
    }

    pub fn step(&self) -> f64 {
        2.0 * self.alpha_max / (self.points - 1) as f64
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QGrid {
    pub spec: GridSpec,
    /// Real quadrature values, one per column.
    pub xs: Vec<f64>,
    /// Imaginary quadrature values, one per row.
    pub ys: Vec<f64>,
    /// values[row][col] = Q(xs[col] + i ys[row])
    pub values: Vec<Vec<f64>>,
}

impl QGrid {
    fn build<F: Fn(C64) -> f64>(spec: GridSpec, q: F) -> Self {
        let axis = spec.axis();
        let values = axis
            .iter()
            .map(|&y| axis.iter().map(|&x| q(C64::new(x, y))).collect())
            .collect();
        Self {
            spec,
            xs: axis.clone(),
            ys: axis,
            values,
        }
    }

    /// Trapezoid-free cell sum of Q over the grid.
    pub fn integral(&self) -> f64 {
        let h = self.spec.step();
        self.values.iter().flatten().sum::<f64>() * h * h
    }

    pub fn min(&self) -> f64 {
        self.values.iter().flatten().copied().fold(f64::INFINITY, f64::min)
    }

    /// Grid point carrying the largest Q.
    pub fn argmax(&self) -> C64 {
        let mut best = (f64::NEG_INFINITY, C64::new(0.0, 0.0));
        for (row, y) in self.values.iter().zip(&self.ys) {
            for (v, x) in row.iter().zip(&self.xs) {
                if *v > best.0 {
                    best = (*v, C64::new(*x, *y));
                }
            }
        }
        best.1
    }
}

/// Q(beta) = <beta| rho |beta> / pi on the grid.
pub fn quasiprobability_grid(rho: &DensityMatrix, spec: GridSpec) -> QGrid {
    let n = rho.dim();
    if rho.off_diagonal_mass() == 0.0 {
        return quasiprobability_grid_populations(&rho.populations(), spec);
    }
    let m = rho.matrix();
    QGrid::build(spec, |beta| {
        let c = coherent_amplitudes(beta, n);
        let mut acc = C64::new(0.0, 0.0);
        for j in 0..n {
            let mut col = C64::new(0.0, 0.0);
            for i in 0..n {
                col += c[i].conj() * m[(i, j)];
            }
            acc += col * c[j];
        }
        (acc.re * INV_PI).max(0.0)
    })
}

/// Q on the grid for a number-diagonal state given by its populations.
/// Only levels within a wide window around |beta|^2 contribute.
pub fn quasiprobability_grid_populations(pops: &[f64], spec: GridSpec) -> QGrid {
    let lf = ln_factorials(pops.len());
    QGrid::build(spec, |beta| windowed_q(pops, &lf, beta.norm()))
}

fn windowed_q(pops: &[f64], lf: &[f64], r: f64) -> f64 {
    let r2 = r * r;
    if r == 0.0 {
        return pops.first().copied().unwrap_or(0.0) * INV_PI;
    }
    // the Poisson weight e^{-r^2} r^{2k} / k! is below e^{-700} outside
    let half = 40.0 * (r2 + 1.0).sqrt() + 40.0;
    let lo = (r2 - half).max(0.0) as usize;
    let hi = ((r2 + half).ceil() as usize).min(pops.len());
    let ln_r = r.ln();
    (lo..hi)
        .filter(|&k| pops[k] > 0.0)
        .map(|k| pops[k] * (-r2 + 2.0 * k as f64 * ln_r - lf[k]).exp())
        .sum::<f64>()
        * INV_PI
}

/// Closed form for the displaced thermal family:
/// Q(beta) = exp(-|beta - alpha|^2 / (n_th + 1)) / (pi (n_th + 1)).
pub fn quasiprobability_grid_gaussian(gs: &GaussianPistonState, spec: GridSpec) -> QGrid {
    let w = gs.n_th + 1.0;
    QGrid::build(spec, |beta| (-(beta - gs.alpha).norm_sqr() / w).exp() * INV_PI / w)
}

/// Angle average of Q at radius r for number populations `pops`:
/// e^{-r^2} / pi sum_n p_n r^{2n} / n!.
pub fn angle_averaged_q(pops: &[f64], r: f64) -> f64 {
    let lf = ln_factorials(pops.len());
    let r2 = r * r;
    if r == 0.0 {
        return pops.first().copied().unwrap_or(0.0) * INV_PI;
    }
    let ln_r = r.ln();
    pops.iter()
        .enumerate()
        .filter(|(_, p)| **p > 0.0)
        .map(|(k, p)| p * (-r2 + 2.0 * k as f64 * ln_r - lf[k]).exp())
        .sum::<f64>()
        * INV_PI
}

/// d/dr of [`angle_averaged_q`]:
/// 2 e^{-r^2} / pi sum_n p_n r^{2n-1} (n - r^2) / n!.
fn angle_averaged_slope(pops: &[f64], lf: &[f64], r: f64) -> f64 {
    let r2 = r * r;
    let ln_r = r.ln();
    2.0 * INV_PI
        * pops
            .iter()
            .enumerate()
            .filter(|(_, p)| **p > 0.0)
            .map(|(k, p)| {
                let kf = k as f64;
                p * (-r2 + (2.0 * kf - 1.0) * ln_r - lf[k]).exp() * (kf - r2)
            })
            .sum::<f64>()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RadialIndicator {
    /// Largest radial slope of the angle-averaged Q over r > 0.
    pub max_slope: f64,
    /// Radius where it occurs.
    pub location: f64,
    /// Largest |slope| anywhere, for scale.
    pub slope_scale: f64,
}

impl RadialIndicator {
    /// max_slope / slope_scale, in [-1, 1].
    pub fn normalized(&self) -> f64 {
        if self.slope_scale > 0.0 {
            self.max_slope / self.slope_scale
        } else {
            0.0
        }
    }

    /// A positive slope away from the origin flags nonpassive structure.
    /// This is an indicator only; ergotropy decides passivity.
    pub fn flags_nonpassive(&self) -> bool {
        self.normalized() > 1e-9
    }
}

/// Radial profile check on number populations. Only populations enter the
/// angle average, so phase information does not affect the result.
pub fn radial_nonpassivity_indicator(pops: &[f64]) -> RadialIndicator {
    let mean: f64 = pops.iter().enumerate().map(|(k, p)| k as f64 * p).sum();
    let second: f64 = pops.iter().enumerate().map(|(k, p)| (k * k) as f64 * p).sum();
    let sd = (second - mean * mean).max(0.0).sqrt();
    let r_max = (mean + 6.0 * sd + 1.0).sqrt() + 4.0;
    let lf = ln_factorials(pops.len());
    let samples = 800;
    let mut out = RadialIndicator {
        max_slope: f64::NEG_INFINITY,
        location: 0.0,
        slope_scale: 0.0,
    };
    for i in 1..=samples {
        let r = r_max * i as f64 / samples as f64;
        let s = angle_averaged_slope(pops, &lf, r);
        out.slope_scale = out.slope_scale.max(s.abs());
        if s > out.max_slope {
            out.max_slope = s;
            out.location = r;
        }
    }
    out
}
