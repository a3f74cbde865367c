use nalgebra::{DMatrix, Matrix2};
use num_complex::Complex64;

use crate::walk::{CoinState, WalkerState};

/// Reduced coin state `rho = (I + r·sigma) / 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoinDensityMatrix {
    rho: Matrix2<Complex64>,
}

impl CoinDensityMatrix {
    pub fn from_matrix(rho: Matrix2<Complex64>) -> Self {
        CoinDensityMatrix { rho }
    }

    pub fn pure(coin: &CoinState) -> Self {
        let v = [coin.up, coin.down];
        let rho = Matrix2::from_fn(|i, j| v[i] * v[j].conj());
        CoinDensityMatrix { rho }
    }

    pub fn from_bloch(r: [f64; 3]) -> Self {
        let h = |x: f64, y: f64| Complex64::new(x, y);
        CoinDensityMatrix {
            rho: Matrix2::new(
                h(0.5 * (1.0 + r[2]), 0.0),
                h(0.5 * r[0], -0.5 * r[1]),
                h(0.5 * r[0], 0.5 * r[1]),
                h(0.5 * (1.0 - r[2]), 0.0),
            ),
        }
    }

    pub fn matrix(&self) -> &Matrix2<Complex64> {
        &self.rho
    }

    pub fn trace(&self) -> f64 {
        (self.rho[(0, 0)] + self.rho[(1, 1)]).re
    }

    /// Bloch vector, normalized by the trace.
    pub fn bloch(&self) -> [f64; 3] {
        let tr = self.trace();
        let off = self.rho[(0, 1)];
        [
            2.0 * off.re / tr,
            -2.0 * off.im / tr,
            (self.rho[(0, 0)].re - self.rho[(1, 1)].re) / tr,
        ]
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> [f64; 2] {
        hermitian_2x2_eigenvalues(&self.rho)
    }

    pub fn purity(&self) -> f64 {
        self.rho.iter().map(|x| x.norm_sqr()).sum()
    }
}

fn hermitian_2x2_eigenvalues(m: &Matrix2<Complex64>) -> [f64; 2] {
    let a = m[(0, 0)].re;
    let d = m[(1, 1)].re;
    let mean = 0.5 * (a + d);
    let radius = (0.25 * (a - d) * (a - d) + m[(0, 1)].norm_sqr()).sqrt();
    [mean - radius, mean + radius]
}

/// Partial trace over position.
pub fn reduced_coin(state: &WalkerState) -> CoinDensityMatrix {
    let mut rho = Matrix2::zeros();
    for pair in state.amplitudes().chunks_exact(2) {
        for i in 0..2 {
            for j in 0..2 {
                rho[(i, j)] += pair[i] * pair[j].conj();
            }
        }
    }
    CoinDensityMatrix { rho }
}

/// `½ ‖rho1 - rho2‖₁` from the closed-form eigenvalues of the difference.
pub fn trace_distance(a: &CoinDensityMatrix, b: &CoinDensityMatrix) -> f64 {
    let [l1, l2] = hermitian_2x2_eigenvalues(&(a.rho - b.rho));
    0.5 * (l1.abs() + l2.abs())
}

/// `½ ‖rho1 - rho2‖₁` for Hermitian matrices of any (equal) dimension.
pub fn trace_distance_general(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    let diff = a - b;
    let eig = nalgebra::SymmetricEigen::new(diff);
    0.5 * eig.eigenvalues.iter().map(|x| x.abs()).sum::<f64>()
}
