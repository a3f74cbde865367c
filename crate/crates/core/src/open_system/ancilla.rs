//! Coin entangled with a static ancilla qubit, and the concurrence (RHP)
//! measure of non-Markovianity.

use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::{Matrix2, Matrix4, SymmetricEigen};
use num_complex::Complex64;

use super::blp::MeasureSeries;
use crate::error::Result;
use crate::walk::{CoinState, Lattice, Stepper, WalkConfig, WalkerState};

/// Basis of the coin labels in the initial Bell state
/// `(|a⟩_C|↓⟩_A + |b⟩_C|↑⟩_A)/√2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BellBasis {
    /// `a = |←⟩`, `b = |→⟩` (sigma_x eigenstates).
    #[default]
    SigmaX,
    /// `a = |↓⟩`, `b = |↑⟩`.
    SigmaZ,
}

/// Walker plus ancilla, stored as one walker branch per ancilla state.
/// Index `a = 0` is ancilla up.
#[derive(Debug, Clone, PartialEq)]
pub struct CoinAncillaState {
    branches: [WalkerState; 2],
}

impl CoinAncillaState {
    pub fn new(up: WalkerState, down: WalkerState) -> Self {
        CoinAncillaState {
            branches: [up, down],
        }
    }

    /// Bell state of coin and ancilla with the walker at the origin.
    pub fn bell(lattice: Lattice, basis: BellBasis) -> Result<Self> {
        let (with_up, with_down) = match basis {
            BellBasis::SigmaX => (CoinState::plus_x(), CoinState::minus_x()),
            BellBasis::SigmaZ => (CoinState::up(), CoinState::down()),
        };
        let s = Complex64::new(FRAC_1_SQRT_2, 0.0);
        Ok(CoinAncillaState {
            branches: [
                WalkerState::localized(lattice, with_up, 0)?.scaled(s),
                WalkerState::localized(lattice, with_down, 0)?.scaled(s),
            ],
        })
    }

    /// `|coin⟩_C |ancilla⟩_A |0⟩`.
    pub fn product(lattice: Lattice, coin: CoinState, ancilla: CoinState) -> Result<Self> {
        let base = WalkerState::localized(lattice, coin, 0)?;
        Ok(CoinAncillaState {
            branches: [base.scaled(ancilla.up), base.scaled(ancilla.down)],
        })
    }

    pub fn branch(&self, ancilla: usize) -> &WalkerState {
        &self.branches[ancilla]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.branches.iter().map(WalkerState::norm_sqr).sum()
    }

    fn advance(&mut self, stepper: &mut Stepper) -> Result<()> {
        for b in &mut self.branches {
            stepper.advance(b)?;
        }
        Ok(())
    }

    /// Coin-ancilla state after tracing out position, in the basis
    /// `|c⟩_C|a⟩_A` with index `2c + a`.
    pub fn reduced(&self) -> Matrix4<Complex64> {
        let mut rho = Matrix4::zeros();
        let amps = [self.branches[0].amplitudes(), self.branches[1].amplitudes()];
        for a in 0..2 {
            for b in 0..2 {
                for (x, y) in amps[a].chunks_exact(2).zip(amps[b].chunks_exact(2)) {
                    for c in 0..2 {
                        for d in 0..2 {
                            rho[(2 * c + a, 2 * d + b)] += x[c] * y[d].conj();
                        }
                    }
                }
            }
        }
        rho
    }
}

pub fn reduced_coin_ancilla(state: &CoinAncillaState) -> Matrix4<Complex64> {
    state.reduced()
}

/// Reduced ancilla state of a coin-ancilla density matrix.
pub fn ancilla_marginal(rho: &Matrix4<Complex64>) -> Matrix2<Complex64> {
    Matrix2::from_fn(|a, b| rho[(a, b)] + rho[(2 + a, 2 + b)])
}

/// Reduced coin state of a coin-ancilla density matrix.
pub fn coin_marginal(rho: &Matrix4<Complex64>) -> Matrix2<Complex64> {
    Matrix2::from_fn(|c, d| rho[(2 * c, 2 * d)] + rho[(2 * c + 1, 2 * d + 1)])
}

/// Coin-ancilla density matrices at `t = 0..=t_max` from the Bell state.
pub fn evolve_with_ancilla(
    theta: f64,
    phi: f64,
    t_max: usize,
    basis: BellBasis,
) -> Result<Vec<Matrix4<Complex64>>> {
    let lattice = Lattice::open_for_steps(t_max);
    let cfg = WalkConfig::new(theta, phi, lattice);
    let mut state = CoinAncillaState::bell(lattice, basis)?;
    let mut stepper = Stepper::new(&cfg);
    let mut out = Vec::with_capacity(t_max + 1);
    for t in 0..=t_max {
        if t > 0 {
            state.advance(&mut stepper)?;
        }
        out.push(state.reduced());
    }
    Ok(out)
}

/// Wootters concurrence `max(0, s1 - s2 - s3 - s4)`, where `s_i` are the
/// square roots, in descending order, of the eigenvalues of
/// `rho (sy⊗sy) rho* (sy⊗sy)`. Writing `rho = X X†`, these are the singular
/// values of the symmetric matrix `Xᵀ (sy⊗sy) X`.
pub fn concurrence(rho: &Matrix4<Complex64>) -> f64 {
    let one = Complex64::new(1.0, 0.0);
    let z = Complex64::new(0.0, 0.0);
    #[rustfmt::skip]
    let yy = Matrix4::new(
        z, z, z, -one,
        z, z, one, z,
        z, one, z, z,
        -one, z, z, z,
    );
    let eig = SymmetricEigen::new(*rho);
    let weights = eig.eigenvalues.map(|p| Complex64::new(p.max(0.0).sqrt(), 0.0));
    let x = eig.eigenvectors * Matrix4::from_diagonal(&weights);
    let tau = x.transpose() * yy * x;
    let mut s: Vec<f64> = tau.singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    (s[0] - s[1] - s[2] - s[3]).clamp(0.0, 1.0)
}

/// Concurrence per step and the accumulated positive increments.
pub fn rhp_measure(theta: f64, phi: f64, t_max: usize, basis: BellBasis) -> Result<MeasureSeries> {
    let values = evolve_with_ancilla(theta, phi, t_max, basis)?
        .iter()
        .map(concurrence)
        .collect();
    Ok(MeasureSeries::from_values(values))
}
