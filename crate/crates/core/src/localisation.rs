//! Coin-averaged position distributions and localisation diagnostics.
//!
//! Averaging over all initial coin states is the same as averaging over any
//! orthogonal pair, i.e. evolving the maximally mixed coin at the origin.

use rayon::prelude::*;

use crate::bound::{
    analytic_origin_probability, analytic_participation_ratio, StepParity,
};
use crate::error::{Error, Result};
use crate::walk::{CoinState, Lattice, ProbabilityDistribution, Stepper, WalkConfig, WalkerState};

/// Coin-averaged distribution after `t` steps from the origin.
#[derive(Debug, Clone)]
pub struct AveragedDistribution {
    pub p_mean: ProbabilityDistribution,
    pub t: usize,
    pub pair: (CoinState, CoinState),
    /// Averaged `P_0` at every step `0..=t`.
    pub origin_series: Vec<f64>,
}

impl AveragedDistribution {
    /// `⟨P_0⟩` averaged over the last `window` even steps up to `t`.
    pub fn mean_origin_probability(&self, window: usize) -> f64 {
        let evens: Vec<f64> = self
            .origin_series
            .iter()
            .step_by(2)
            .rev()
            .take(window.max(1))
            .copied()
            .collect();
        evens.iter().sum::<f64>() / evens.len() as f64
    }

    pub fn participation_ratio(&self) -> f64 {
        participation_ratio(&self.p_mean)
    }
}

pub fn mean_origin_probability(avg: &AveragedDistribution, window: usize) -> f64 {
    avg.mean_origin_probability(window)
}

/// `sum_n P_n²`: one for a point distribution, `1/N` for a uniform one.
pub fn participation_ratio(dist: &ProbabilityDistribution) -> f64 {
    dist.values().iter().map(|p| p * p).sum()
}

fn check_pair(pair: &(CoinState, CoinState)) -> Result<()> {
    for c in [&pair.0, &pair.1] {
        if (c.norm_sqr() - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidParameter(format!(
                "initial coin state has norm² {}",
                c.norm_sqr()
            )));
        }
    }
    let overlap = pair.0.inner(&pair.1).norm();
    if overlap > 1e-10 {
        return Err(Error::NonOrthogonalPair { overlap });
    }
    Ok(())
}

/// Evolve both members of `pair` from the origin for `t` steps, calling
/// `observer` with the averaged distribution at every step including `t = 0`.
pub fn averaged_distribution_with<F>(
    theta: f64,
    phi: f64,
    t: usize,
    pair: (CoinState, CoinState),
    mut observer: F,
) -> Result<AveragedDistribution>
where
    F: FnMut(usize, &ProbabilityDistribution),
{
    check_pair(&pair)?;
    let lattice = Lattice::open_for_steps(t);
    let cfg = WalkConfig::new(theta, phi, lattice);
    let mut a = WalkerState::localized(lattice, pair.0, 0)?;
    let mut b = WalkerState::localized(lattice, pair.1, 0)?;
    let mut stepper = Stepper::new(&cfg);
    let mut origin_series = Vec::with_capacity(t + 1);
    let mut current = mean_of(&a, &b);
    for step in 0..=t {
        if step > 0 {
            stepper.advance(&mut a)?;
            stepper.advance(&mut b)?;
            current = mean_of(&a, &b);
        }
        origin_series.push(current.at(0));
        observer(step, &current);
    }
    Ok(AveragedDistribution {
        p_mean: current,
        t,
        pair,
        origin_series,
    })
}

fn mean_of(a: &WalkerState, b: &WalkerState) -> ProbabilityDistribution {
    let pa = a.position_distribution();
    let pb = b.position_distribution();
    let p = pa
        .values()
        .iter()
        .zip(pb.values())
        .map(|(x, y)| 0.5 * (x + y))
        .collect();
    ProbabilityDistribution::from_vec(pa.half_width(), p)
}

pub fn averaged_distribution(
    theta: f64,
    phi: f64,
    t: usize,
    pair: (CoinState, CoinState),
) -> Result<AveragedDistribution> {
    averaged_distribution_with(theta, phi, t, pair, |_, _| {})
}

/// Numeric and analytic localisation diagnostics at one impurity phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalisationPoint {
    pub phi: f64,
    pub pr_numeric: f64,
    pub pr_analytic: f64,
    pub p0_numeric: f64,
    pub p0_analytic: f64,
}

pub fn localisation_point(theta: f64, phi: f64, t: usize, window: usize) -> Result<LocalisationPoint> {
    let avg = averaged_distribution(theta, phi, t, (CoinState::up(), CoinState::down()))?;
    Ok(LocalisationPoint {
        phi,
        pr_numeric: avg.participation_ratio(),
        pr_analytic: analytic_participation_ratio(theta, phi, StepParity::of(t))?,
        p0_numeric: avg.mean_origin_probability(window),
        p0_analytic: analytic_origin_probability(theta, phi)?,
    })
}

/// [`localisation_point`] over a set of phases, in parallel.
pub fn localisation_sweep(
    theta: f64,
    phis: &[f64],
    t: usize,
    window: usize,
) -> Result<Vec<LocalisationPoint>> {
    phis.par_iter()
        .map(|&phi| localisation_point(theta, phi, t, window))
        .collect()
}
