//! Impurity bound states from the transfer-matrix recursion.
//!
//! A stationary state `W|E⟩ = e^{-iE}|E⟩` with up/down amplitudes
//! `(alpha_n, beta_n)` obeys `(alpha_{n+1}, beta_n) = T(phi_n) (alpha_n, beta_{n-1})`.
//! Away from the origin the state decays with the sub-unit eigenvalue
//! `lambda` of `T`; at the origin the reflection constraint
//! `alpha_{-n} = ±beta_n` closes the problem and fixes the quasi-energy.
//!
//! Each supported reflection parity contributes an in-gap state with
//! `|E| < theta` and its sublattice partner at `E + pi` (transfer eigenvalue
//! `-lambda`).

use nalgebra::{Matrix2, Vector2};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::walk::{Boundary, Coin, Lattice, ProbabilityDistribution, WalkerState};
use crate::wrap_angle;

const VALIDITY_TOLERANCE: f64 = 1e-10;

/// Eigenvalue of the reflection operator `R`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Symmetric,
    Antisymmetric,
}

impl Parity {
    pub fn sign(self) -> f64 {
        match self {
            Parity::Symmetric => 1.0,
            Parity::Antisymmetric => -1.0,
        }
    }

    pub fn as_i32(self) -> i32 {
        match self {
            Parity::Symmetric => 1,
            Parity::Antisymmetric => -1,
        }
    }

    pub const BOTH: [Parity; 2] = [Parity::Symmetric, Parity::Antisymmetric];
}

/// Transfer matrix `T(phi_n)` relating `(alpha_n, beta_{n-1})` to
/// `(alpha_{n+1}, beta_n)` at quasi-energy `E`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferMatrix {
    m: Matrix2<Complex64>,
}

impl TransferMatrix {
    pub fn new(theta: f64, energy: f64, phi_site: f64) -> Result<Self> {
        let c = theta.cos();
        if c.abs() < 1e-12 {
            return Err(Error::SingularCoin { theta });
        }
        let sec = 1.0 / c;
        let tan = theta.tan();
        let m = Matrix2::new(
            Complex64::from_polar(sec, energy + phi_site),
            Complex64::new(0.0, -tan),
            Complex64::new(0.0, tan),
            Complex64::from_polar(sec, -(energy + phi_site)),
        );
        Ok(TransferMatrix { m })
    }

    pub fn matrix(&self) -> &Matrix2<Complex64> {
        &self.m
    }

    pub fn determinant(&self) -> Complex64 {
        self.m[(0, 0)] * self.m[(1, 1)] - self.m[(0, 1)] * self.m[(1, 0)]
    }

    /// `sigma_x T sigma_x`, which is the inverse of `T`.
    pub fn inverse(&self) -> TransferMatrix {
        let m = &self.m;
        TransferMatrix {
            m: Matrix2::new(m[(1, 1)], m[(1, 0)], m[(0, 1)], m[(0, 0)]),
        }
    }

    pub fn apply(&self, v: &Vector2<Complex64>) -> Vector2<Complex64> {
        self.m * v
    }
}

/// Decaying eigenvalue of the bulk transfer matrix at quasi-energy `E`:
/// `(cos E - sqrt(sin²θ - sin²E)) / cos θ` for `cos E ≥ 0`, and the root of
/// smaller modulus `(cos E + sqrt(...)) / cos θ` on the `E + pi` side.
pub fn transfer_eigenvalue(theta: f64, energy: f64) -> Result<f64> {
    let c = theta.cos();
    if c.abs() < 1e-12 {
        return Err(Error::SingularCoin { theta });
    }
    let q2 = theta.sin().powi(2) - energy.sin().powi(2);
    if q2 < -1e-14 {
        return Err(Error::ExtendedState { energy });
    }
    let q = q2.max(0.0).sqrt();
    let ce = energy.cos();
    Ok(if ce >= 0.0 { (ce - q) / c } else { (ce + q) / c })
}

/// Inverse localisation length `-ln|lambda|` (positive for bound states).
pub fn inverse_localisation_length(lambda: f64) -> Result<f64> {
    let a = lambda.abs();
    if !(a > 0.0 && a < 1.0) {
        return Err(Error::NotBound { lambda });
    }
    Ok(-a.ln())
}

/// A normalizable stationary state localised at the impurity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundState {
    pub parity: Parity,
    pub theta: f64,
    pub phi: f64,
    /// Quasi-energy in `(-pi, pi]`.
    pub energy: f64,
    /// Transfer eigenvalue, `|lambda| < 1`.
    pub lambda: f64,
    /// `(alpha_1, beta_0)`, with `alpha_1` real and positive.
    pub seed: [Complex64; 2],
    /// `|C|²`.
    pub norm_const: f64,
    /// `E + pi` wrapped into `(-pi, pi]`.
    pub sublattice_partner_energy: f64,
    /// True for the member with `|E| < theta`, false for its sublattice partner.
    pub in_gap: bool,
}

impl BoundState {
    pub fn inverse_localisation_length(&self) -> f64 {
        -self.lambda.abs().ln()
    }

    /// Residual of `sin(E + phi ∓ theta) = ± sqrt(sin²θ - sin²E) / sin θ`.
    /// The sublattice partner satisfies it with the opposite sign on the right.
    pub fn validity_residual(&self) -> f64 {
        let sign = if self.in_gap { 1.0 } else { -1.0 };
        validity_residual(self.theta, self.phi, self.energy, self.parity, sign)
    }

    /// The `x` component of the coin Bloch vector after tracing out position.
    /// The `y` and `z` components vanish.
    pub fn rx(&self) -> f64 {
        let p = self.parity.sign();
        let l = self.lambda;
        0.5 * p * ((1.0 - l * l) + 2.0 * l * (self.energy + self.phi - p * self.theta).cos())
    }

    /// Smallest `n_max` for which `|lambda|^n_max ≤ 1e-10`.
    pub fn required_truncation(&self) -> usize {
        (1e-10f64.ln() / self.lambda.abs().ln()).ceil().max(1.0) as usize
    }

    /// The state amplitudes on `[-n_max, n_max]`, placed on an open lattice of
    /// half-width `n_max + 1` so that one more step stays inside.
    pub fn amplitudes(&self, n_max: usize) -> Result<WalkerState> {
        let required = self.required_truncation();
        if n_max < required {
            return Err(Error::TruncationTooSmall { n_max, required });
        }
        let lattice = Lattice::new(n_max + 1, Boundary::OpenPadded)?;
        let mut state = WalkerState::zeros(lattice);
        let p = self.parity.sign();
        let [alpha1, beta0] = self.seed;
        let nm = n_max as i64;
        let mut pow = 1.0;
        // alpha_m = lambda^{m-1} alpha_1 (m ≥ 1), beta_m = lambda^m beta_0 (m ≥ 0)
        for m in 0..=nm {
            let beta = beta0 * pow;
            state.set(Coin::Down, m, beta)?;
            state.set(Coin::Up, -m, beta * p)?;
            if m >= 1 {
                let alpha = alpha1 * (pow / self.lambda);
                state.set(Coin::Up, m, alpha)?;
                state.set(Coin::Down, -m, alpha * p)?;
            }
            pow *= self.lambda;
        }
        Ok(state)
    }
}

pub fn transfer_matrix(theta: f64, energy: f64, phi_site: f64) -> Result<TransferMatrix> {
    TransferMatrix::new(theta, energy, phi_site)
}

pub fn bound_state_amplitudes(bound: &BoundState, n_max: usize) -> Result<WalkerState> {
    bound.amplitudes(n_max)
}

pub fn bound_rx(bound: &BoundState) -> f64 {
    bound.rx()
}

fn validity_residual(theta: f64, phi: f64, energy: f64, parity: Parity, sign: f64) -> f64 {
    let p = parity.sign();
    let s = theta.sin();
    let q = (s * s - energy.sin().powi(2)).max(0.0).sqrt();
    ((energy + phi - p * theta).sin() - sign * p * q / s).abs()
}

fn check_theta(theta: f64) -> Result<()> {
    if !(theta > 0.0 && theta < std::f64::consts::FRAC_PI_2) {
        return Err(Error::UnsupportedCoinAngle { theta });
    }
    Ok(())
}

/// In-gap quasi-energy candidate for the given parity. The cotangent relation
/// fixes `E` modulo `pi`; the branch with `cos E > 0` is returned.
fn in_gap_energy(theta: f64, phi: f64, parity: Parity) -> f64 {
    let s = theta.sin();
    match parity {
        // cot E = (1 - sin(θ-φ) sin θ) / (sin θ cos(θ-φ))
        Parity::Symmetric => (s * (theta - phi).cos()).atan2(1.0 - s * (theta - phi).sin()),
        // cot E = -(1 - sin(θ+φ) sin θ) / (sin θ cos(θ+φ))
        Parity::Antisymmetric => (-s * (theta + phi).cos()).atan2(1.0 - s * (theta + phi).sin()),
    }
}

fn solve_parity(theta: f64, phi: f64, parity: Parity) -> Option<[BoundState; 2]> {
    let s = theta.sin();
    let c = theta.cos();
    let p = parity.sign();
    let energy = in_gap_energy(theta, phi, parity);
    let q2 = s * s - energy.sin().powi(2);
    if q2 <= 0.0 {
        return None;
    }
    let q = q2.sqrt();
    // the validity condition separates the decaying solution from the one
    // growing away from the origin
    let lhs = (energy + phi - p * theta).sin();
    let good = (lhs - p * q / s).abs();
    let bad = (lhs + p * q / s).abs();
    if good > VALIDITY_TOLERANCE || good >= bad {
        return None;
    }
    let lambda = (energy.cos() - q) / c;
    if lambda.is_nan() || lambda.abs() >= 1.0 {
        return None;
    }
    let norm_const = (1.0 - lambda * lambda) / (4.0 * s * s);
    let amp = norm_const.sqrt();
    let seed = [
        Complex64::new(amp * s, 0.0),
        Complex64::new(amp * energy.sin(), -amp * q),
    ];
    let partner_energy = wrap_angle(energy + std::f64::consts::PI);
    let in_gap = BoundState {
        parity,
        theta,
        phi,
        energy,
        lambda,
        seed,
        norm_const,
        sublattice_partner_energy: partner_energy,
        in_gap: true,
    };
    let partner = BoundState {
        energy: partner_energy,
        lambda: -lambda,
        // S flips the odd-site component alpha_1; the overall sign keeps alpha_1 > 0
        seed: [seed[0], -seed[1]],
        sublattice_partner_energy: energy,
        in_gap: false,
        ..in_gap
    };
    Some([in_gap, partner])
}

/// All bound states for `theta ∈ (0, pi/2)`: zero, two or four entries, in the
/// order (symmetric, its partner, antisymmetric, its partner).
pub fn solve_bound_states(theta: f64, phi: f64) -> Result<Vec<BoundState>> {
    check_theta(theta)?;
    if !phi.is_finite() {
        return Err(Error::InvalidParameter(format!("phi = {phi}")));
    }
    let phi = phi.rem_euclid(std::f64::consts::TAU);
    Ok(Parity::BOTH
        .iter()
        .filter_map(|&parity| solve_parity(theta, phi, parity))
        .flatten()
        .collect())
}

/// `lambda²` per parity, with an absent parity counted as `lambda² = 1` so
/// its contributions vanish.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundWeights {
    pub symmetric: f64,
    pub antisymmetric: f64,
}

impl BoundWeights {
    pub fn from_states(states: &[BoundState]) -> Self {
        let mut w = BoundWeights {
            symmetric: 1.0,
            antisymmetric: 1.0,
        };
        for b in states {
            match b.parity {
                Parity::Symmetric => w.symmetric = b.lambda * b.lambda,
                Parity::Antisymmetric => w.antisymmetric = b.lambda * b.lambda,
            }
        }
        w
    }

    pub fn solve(theta: f64, phi: f64) -> Result<Self> {
        Ok(Self::from_states(&solve_bound_states(theta, phi)?))
    }

    fn each(&self) -> [f64; 2] {
        [self.symmetric, self.antisymmetric]
    }
}

/// Sum of `-ln|lambda|` over all bound states; extended states contribute
/// nothing in the infinite-chain limit.
pub fn effective_inverse_localisation_length(theta: f64, phi: f64) -> Result<f64> {
    Ok(solve_bound_states(theta, phi)?
        .iter()
        .map(BoundState::inverse_localisation_length)
        .sum())
}

/// Weight of the initial state `(cos(γ/2)|↑⟩ + e^{iη} sin(γ/2)|↓⟩) ⊗ |0⟩` in
/// the bound subspace.
pub fn bound_overlap(gamma: f64, eta: f64, theta: f64, phi: f64) -> Result<f64> {
    let w = BoundWeights::solve(theta, phi)?;
    let (lp, lm) = (w.symmetric, w.antisymmetric);
    Ok(((2.0 - lp - lm) - (lp - lm) * gamma.sin() * eta.cos()) / 2.0)
}

/// Which sublattice is occupied by the bound part of a walk started at the
/// origin: even sites after an even number of steps, odd sites otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepParity {
    Even,
    Odd,
}

impl StepParity {
    pub fn of(t: usize) -> Self {
        if t.is_multiple_of(2) {
            StepParity::Even
        } else {
            StepParity::Odd
        }
    }
}

/// Long-time envelope of the coin-averaged distribution at site `n`:
/// `⟨P_0⟩ = ½ Σ (1-λ²)²`, `⟨P_n⟩ = ¼ Σ λ^{2|n|-2} (1+λ²)(1-λ²)²`.
pub fn mean_envelope(weights: &BoundWeights, n: i64) -> f64 {
    weights
        .each()
        .iter()
        .filter(|&&l2| l2 < 1.0)
        .map(|&l2| {
            let g = 1.0 - l2;
            if n == 0 {
                0.5 * g * g
            } else {
                0.25 * l2.powi(n.unsigned_abs() as i32 - 1) * (1.0 + l2) * g * g
            }
        })
        .sum()
}

/// Analytic long-time `⟨P_0⟩`.
pub fn analytic_origin_probability(theta: f64, phi: f64) -> Result<f64> {
    Ok(mean_envelope(&BoundWeights::solve(theta, phi)?, 0))
}

/// Bound-subspace part of the coin-averaged distribution on `[-n_max, n_max]`
/// at steps of the given parity. It sums to the averaged bound weight
/// `½[(1-λ₊²) + (1-λ₋²)]`, not to one.
pub fn analytic_mean_distribution(
    theta: f64,
    phi: f64,
    n_max: usize,
    step_parity: StepParity,
) -> Result<ProbabilityDistribution> {
    let w = BoundWeights::solve(theta, phi)?;
    let offset = match step_parity {
        StepParity::Even => 0,
        StepParity::Odd => 1,
    };
    let nm = n_max as i64;
    let p = (-nm..=nm)
        .map(|n| {
            if n.rem_euclid(2) == offset {
                mean_envelope(&w, n)
            } else {
                0.0
            }
        })
        .collect();
    Ok(ProbabilityDistribution::from_vec(n_max, p))
}

/// Truncation for analytic sums: far enough that the largest surviving
/// `lambda²` has decayed below 1e-20.
pub fn analytic_truncation(weights: &BoundWeights) -> usize {
    let l2 = weights
        .each()
        .into_iter()
        .filter(|&x| x < 1.0)
        .fold(0.0, f64::max);
    if l2 <= 0.0 {
        return 1;
    }
    ((1e-20f64.ln() / l2.ln()).ceil() as usize).clamp(1, 1_000_000)
}

/// Participation ratio of the analytic long-time distribution.
pub fn analytic_participation_ratio(theta: f64, phi: f64, step_parity: StepParity) -> Result<f64> {
    let w = BoundWeights::solve(theta, phi)?;
    let n_max = analytic_truncation(&w);
    let dist = analytic_mean_distribution(theta, phi, n_max, step_parity)?;
    Ok(dist.values().iter().map(|p| p * p).sum())
}
