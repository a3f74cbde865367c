//! Trace-distance (BLP) non-Markovianity of the coin.
//!
//! The reduced coin dynamics from a product initial state is a fixed linear
//! map per step. Evolving `|↑,0⟩` and `|↓,0⟩` once gives the operators
//! `M_ij(t) = Tr_pos |Psi_i(t)⟩⟨Psi_j(t)|`, from which every initial coin
//! state follows as `rho(t) = sum_ij rho_ij(0) M_ij(t)`. For an orthogonal
//! pair with Bloch vectors `±r` the trace distance is `|A_t r|`, with `A_t` the
//! real 3x3 block of the map acting on Bloch vectors.

use std::f64::consts::{PI, TAU};

use nalgebra::{Matrix2, Matrix3, Vector3};
use num_complex::Complex64;
use rayon::prelude::*;

use super::coin::{reduced_coin, trace_distance, CoinDensityMatrix};
use crate::error::Result;
use crate::walk::{CoinState, Lattice, Stepper, WalkConfig, WalkerState};

/// Per-step values of a distance or entanglement quantity together with the
/// running sum of its positive increments.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureSeries {
    pub values: Vec<f64>,
    pub accumulated: Vec<f64>,
}

impl MeasureSeries {
    pub fn from_values(values: Vec<f64>) -> Self {
        let mut accumulated = Vec::with_capacity(values.len());
        let mut total = 0.0;
        for (i, &v) in values.iter().enumerate() {
            if i > 0 {
                let dv = v - values[i - 1];
                if dv > 0.0 {
                    total += dv;
                }
            }
            accumulated.push(total);
        }
        MeasureSeries {
            values,
            accumulated,
        }
    }

    /// Accumulated measure up to and including step `t`.
    pub fn at(&self, t: usize) -> f64 {
        self.accumulated[t.min(self.accumulated.len() - 1)]
    }

    pub fn total(&self) -> f64 {
        self.accumulated.last().copied().unwrap_or(0.0)
    }
}

/// Sum of positive consecutive increments.
pub fn blp_from_series(values: &[f64]) -> f64 {
    values
        .windows(2)
        .map(|w| (w[1] - w[0]).max(0.0))
        .sum()
}

fn pauli() -> [Matrix2<Complex64>; 3] {
    let z = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    [
        Matrix2::new(z, one, one, z),
        Matrix2::new(z, -i, i, z),
        Matrix2::new(one, z, z, -one),
    ]
}

/// Reduced coin dynamics from the origin, `t = 0..=t_max`.
#[derive(Debug, Clone)]
pub struct CoinDynamics {
    /// `[M_00, M_01, M_10, M_11]` per step.
    responses: Vec<[Matrix2<Complex64>; 4]>,
    bloch_maps: Vec<Matrix3<f64>>,
}

impl CoinDynamics {
    pub fn compute(theta: f64, phi: f64, t_max: usize) -> Result<Self> {
        let lattice = Lattice::open_for_steps(t_max);
        let cfg = WalkConfig::new(theta, phi, lattice);
        let mut up = WalkerState::localized(lattice, CoinState::up(), 0)?;
        let mut down = WalkerState::localized(lattice, CoinState::down(), 0)?;
        let mut stepper = Stepper::new(&cfg);
        let mut responses = Vec::with_capacity(t_max + 1);
        for t in 0..=t_max {
            if t > 0 {
                stepper.advance(&mut up)?;
                stepper.advance(&mut down)?;
            }
            responses.push(cross_traces(&up, &down));
        }
        let sigma = pauli();
        let bloch_maps = responses
            .iter()
            .map(|m| {
                Matrix3::from_fn(|b, a| {
                    let out = apply_response(m, &sigma[a]);
                    0.5 * (sigma[b] * out).trace().re
                })
            })
            .collect();
        Ok(CoinDynamics {
            responses,
            bloch_maps,
        })
    }

    pub fn t_max(&self) -> usize {
        self.responses.len() - 1
    }

    /// Reduced coin state at step `t` for the initial coin `rho0`.
    pub fn evolve(&self, rho0: &CoinDensityMatrix, t: usize) -> CoinDensityMatrix {
        CoinDensityMatrix::from_matrix(apply_response(&self.responses[t], rho0.matrix()))
    }

    /// Trace distance at every step for the pair with Bloch vectors `±r`.
    pub fn antipodal_distances(&self, r: [f64; 3]) -> Vec<f64> {
        let r = Vector3::from(r);
        self.bloch_maps.iter().map(|a| (a * r).norm()).collect()
    }
}

fn apply_response(m: &[Matrix2<Complex64>; 4], rho0: &Matrix2<Complex64>) -> Matrix2<Complex64> {
    m[0] * rho0[(0, 0)] + m[1] * rho0[(0, 1)] + m[2] * rho0[(1, 0)] + m[3] * rho0[(1, 1)]
}

fn cross_traces(up: &WalkerState, down: &WalkerState) -> [Matrix2<Complex64>; 4] {
    let mut out = [Matrix2::zeros(); 4];
    let states = [up.amplitudes(), down.amplitudes()];
    for (i, si) in states.iter().enumerate() {
        for (j, sj) in states.iter().enumerate() {
            let m = &mut out[2 * i + j];
            for (a, b) in si.chunks_exact(2).zip(sj.chunks_exact(2)) {
                for c in 0..2 {
                    for d in 0..2 {
                        m[(c, d)] += a[c] * b[d].conj();
                    }
                }
            }
        }
    }
    out
}

fn bloch_of(gamma: f64, eta: f64) -> [f64; 3] {
    [
        gamma.sin() * eta.cos(),
        gamma.sin() * eta.sin(),
        gamma.cos(),
    ]
}

/// Trace-distance series for the pair `(gamma, eta)` and its antipode, by
/// evolving both members directly.
pub fn pair_trace_distances(
    theta: f64,
    phi: f64,
    t_max: usize,
    gamma: f64,
    eta: f64,
) -> Result<Vec<f64>> {
    let (g2, e2) = CoinState::antipode_angles(gamma, eta);
    let lattice = Lattice::open_for_steps(t_max);
    let cfg = WalkConfig::new(theta, phi, lattice);
    let mut a = WalkerState::localized(lattice, CoinState::from_angles(gamma, eta), 0)?;
    let mut b = WalkerState::localized(lattice, CoinState::from_angles(g2, e2), 0)?;
    let mut stepper = Stepper::new(&cfg);
    let mut out = Vec::with_capacity(t_max + 1);
    for t in 0..=t_max {
        if t > 0 {
            stepper.advance(&mut a)?;
            stepper.advance(&mut b)?;
        }
        out.push(trace_distance(&reduced_coin(&a), &reduced_coin(&b)));
    }
    Ok(out)
}

/// Search grid over orthogonal initial pairs. One member is
/// `cos(γ/2)|↑⟩ + e^{iη} sin(γ/2)|↓⟩` with `γ = iπ/gamma_points`,
/// `η = 2πj/eta_points`; the other is its antipode. The best cell is then
/// resampled on a `refine x refine` grid spanning one cell in each direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairGrid {
    pub gamma_points: usize,
    pub eta_points: usize,
    pub refine: usize,
}

impl Default for PairGrid {
    fn default() -> Self {
        PairGrid {
            gamma_points: 64,
            eta_points: 64,
            refine: 8,
        }
    }
}

impl PairGrid {
    pub fn gamma_step(&self) -> f64 {
        PI / self.gamma_points as f64
    }

    pub fn eta_step(&self) -> f64 {
        TAU / self.eta_points as f64
    }

    fn coarse(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        (0..self.gamma_points).flat_map(move |i| {
            (0..self.eta_points)
                .map(move |j| (i as f64 * self.gamma_step(), j as f64 * self.eta_step()))
        })
    }

    fn around(&self, gamma: f64, eta: f64) -> Vec<(f64, f64)> {
        if self.refine < 2 {
            return Vec::new();
        }
        let r = self.refine;
        let span = |k: usize| -1.0 + 2.0 * k as f64 / (r - 1) as f64;
        (0..r)
            .flat_map(|a| (0..r).map(move |b| (span(a), span(b))))
            .map(|(x, y)| (gamma + x * self.gamma_step(), eta + y * self.eta_step()))
            .collect()
    }
}

/// Maximal BLP measure at one horizon and the pair attaining it.
#[derive(Debug, Clone, PartialEq)]
pub struct BlpOptimum {
    pub t_max: usize,
    pub measure: f64,
    pub gamma: f64,
    pub eta: f64,
    pub series: MeasureSeries,
}

/// Accumulated trace-distance increments at each requested horizon,
/// maximised over the pair grid separately for each horizon.
pub fn blp_measure(theta: f64, phi: f64, t_maxes: &[usize], grid: &PairGrid) -> Result<Vec<BlpOptimum>> {
    let horizon = t_maxes.iter().copied().max().unwrap_or(0);
    let dyn_ = CoinDynamics::compute(theta, phi, horizon)?;
    let score = |gamma: f64, eta: f64| -> Vec<f64> {
        let series = MeasureSeries::from_values(dyn_.antipodal_distances(bloch_of(gamma, eta)));
        t_maxes.iter().map(|&t| series.at(t)).collect()
    };
    let coarse: Vec<(f64, f64)> = grid.coarse().collect();
    let scores: Vec<Vec<f64>> = coarse.par_iter().map(|&(g, e)| score(g, e)).collect();

    let mut out = Vec::with_capacity(t_maxes.len());
    for (k, &t_max) in t_maxes.iter().enumerate() {
        let (mut best, mut gamma, mut eta) = (f64::NEG_INFINITY, 0.0, 0.0);
        for (&(g, e), s) in coarse.iter().zip(&scores) {
            if s[k] > best + 1e-12 {
                best = s[k];
                gamma = g;
                eta = e;
            }
        }
        let (g0, e0) = (gamma, eta);
        for (g, e) in grid.around(g0, e0) {
            let s = score(g, e)[k];
            if s > best + 1e-12 {
                best = s;
                gamma = g;
                eta = e;
            }
        }
        let mut values = dyn_.antipodal_distances(bloch_of(gamma, eta));
        values.truncate(t_max + 1);
        out.push(BlpOptimum {
            t_max,
            measure: best,
            gamma,
            eta,
            series: MeasureSeries::from_values(values),
        });
    }
    Ok(out)
}

/// BLP series for the sigma_x eigenstate pair `(|Psi_S⟩, |Psi_A⟩)`.
pub fn blp_sigma_x_pair(theta: f64, phi: f64, t_max: usize) -> Result<MeasureSeries> {
    let dyn_ = CoinDynamics::compute(theta, phi, t_max)?;
    Ok(MeasureSeries::from_values(
        dyn_.antipodal_distances([1.0, 0.0, 0.0]),
    ))
}

/// Time average of `r_x` over `window`, with separate even- and odd-step
/// averages.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochAverage {
    pub mean: f64,
    pub even: f64,
    pub odd: f64,
}

pub fn mean_bloch_x(
    theta: f64,
    phi: f64,
    initial: CoinState,
    window: std::ops::Range<usize>,
) -> Result<BlochAverage> {
    let dyn_ = CoinDynamics::compute(theta, phi, window.end.saturating_sub(1))?;
    let rho0 = CoinDensityMatrix::pure(&initial);
    let (mut sum, mut even, mut odd, mut ne, mut no) = (0.0, 0.0, 0.0, 0usize, 0usize);
    for t in window.clone() {
        let rx = dyn_.evolve(&rho0, t).bloch()[0];
        sum += rx;
        if t % 2 == 0 {
            even += rx;
            ne += 1;
        } else {
            odd += rx;
            no += 1;
        }
    }
    let avg = |s: f64, n: usize| if n == 0 { f64::NAN } else { s / n as f64 };
    Ok(BlochAverage {
        mean: avg(sum, window.len()),
        even: avg(even, ne),
        odd: avg(odd, no),
    })
}
