//! Quasi-energy spectrum of the step operator on a finite ring.
//!
//! Ring sites are labelled `m = 0..N` with `m ≡ n (mod N)`, and amplitudes are
//! stored at index `2m + c` (`c = 0` for up, `1` for down). The impurity sits
//! at `m = 0`. Quasi-energies follow `W = e^{-iH}`: an eigenvalue
//! `e^{-iE}` is reported as `E = -arg(eigenvalue)` in `(-pi, pi]`.

use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::{DMatrix, Matrix2};
use num_complex::Complex64;

use crate::bound::Parity;
use crate::error::{Error, Result};
use crate::wrap_angle;

const RESIDUAL_TOLERANCE: f64 = 1e-8;

/// The two band values `E(k) ∈ [0, pi]` with `cos E = ±cos θ cos k`.
///
/// The step operator at momentum `k` has eigenvalues `e^{∓iE₊(k)}`; the
/// second band `E₋ = pi - E₊` is the same pair seen from `k + pi`.
pub fn dispersion(theta: f64, k: f64) -> [f64; 2] {
    let x = (theta.cos() * k.cos()).clamp(-1.0, 1.0);
    [x.acos(), (-x).acos()]
}

/// Step operator of the impurity-free walk acting on the plane wave
/// `sum_n e^{-ikn}|c, n⟩`.
pub fn momentum_block(theta: f64, k: f64) -> Matrix2<Complex64> {
    let shift = Matrix2::new(
        Complex64::from_polar(1.0, k),
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::from_polar(1.0, -k),
    );
    shift * coin_matrix(theta)
}

fn coin_matrix(theta: f64) -> Matrix2<Complex64> {
    let c = Complex64::new(theta.cos(), 0.0);
    let s = Complex64::new(0.0, -theta.sin());
    Matrix2::new(c, s, s, c)
}

/// Coin Bloch vector of the impurity-free eigenstate at momentum `k` with
/// quasi-energy `+E₊(k)`. The eigenstate at `-E₊(k)` has the opposite vector.
pub fn ideal_coin_bloch(theta: f64, k: f64) -> Result<[f64; 3]> {
    let e = dispersion(theta, k)[0];
    let se = e.sin();
    if se.abs() < 1e-12 {
        return Err(Error::DegenerateEnergy { k });
    }
    Ok([
        k.cos() * theta.sin() / se,
        -k.sin() * theta.sin() / se,
        -k.sin() * theta.cos() / se,
    ])
}

/// Non-zero entries of `W` in column `col`: `(row, value)` pairs.
fn step_column(theta: f64, phi: f64, n: usize, col: usize) -> [(usize, Complex64); 2] {
    let m = col / 2;
    let c = col % 2;
    let phase = if m == 0 {
        Complex64::from_polar(1.0, phi)
    } else {
        Complex64::new(1.0, 0.0)
    };
    let coin = coin_matrix(theta);
    let up = coin[(0, c)] * phase;
    let down = coin[(1, c)] * phase;
    [(2 * ((m + 1) % n), up), (2 * ((m + n - 1) % n) + 1, down)]
}

/// Dense `2N x 2N` step operator on the ring.
pub fn ring_step_matrix(theta: f64, phi: f64, n: usize) -> Result<DMatrix<Complex64>> {
    check_ring(n)?;
    let mut w = DMatrix::zeros(2 * n, 2 * n);
    for col in 0..2 * n {
        for (row, v) in step_column(theta, phi, n, col) {
            w[(row, col)] += v;
        }
    }
    Ok(w)
}

fn check_ring(n: usize) -> Result<()> {
    if n < 3 {
        return Err(Error::RingTooSmall(n));
    }
    Ok(())
}

/// Orthonormal basis of one reflection-parity sector. Each vector has two
/// entries of modulus `1/sqrt(2)`, and each ring index appears in exactly one
/// vector.
struct Sector {
    parity: Parity,
    vectors: Vec<[(usize, f64); 2]>,
    // ring index -> (vector, coefficient)
    lookup: Vec<(usize, f64)>,
}

impl Sector {
    fn new(n: usize, parity: Parity) -> Self {
        let p = parity.sign();
        let a = FRAC_1_SQRT_2;
        let mut vectors = Vec::with_capacity(n);
        for m in 0..n {
            let mirror = (n - m) % n;
            if mirror == m {
                vectors.push([(2 * m, a), (2 * m + 1, p * a)]);
            } else if m < mirror {
                vectors.push([(2 * m, a), (2 * mirror + 1, p * a)]);
                vectors.push([(2 * m + 1, a), (2 * mirror, p * a)]);
            }
        }
        let mut lookup = vec![(0, 0.0); 2 * n];
        for (j, v) in vectors.iter().enumerate() {
            for &(i, b) in v {
                lookup[i] = (j, b);
            }
        }
        Sector {
            parity,
            vectors,
            lookup,
        }
    }

    fn step_block(&self, theta: f64, phi: f64, n: usize) -> DMatrix<Complex64> {
        let dim = self.vectors.len();
        let mut w = DMatrix::zeros(dim, dim);
        for (j, v) in self.vectors.iter().enumerate() {
            for &(i, b) in v {
                for (row, val) in step_column(theta, phi, n, i) {
                    let (jr, br) = self.lookup[row];
                    w[(jr, j)] += val * (b * br);
                }
            }
        }
        w
    }

    fn embed(&self, coords: impl Iterator<Item = Complex64>, n: usize) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); 2 * n];
        for (v, x) in self.vectors.iter().zip(coords) {
            for &(i, b) in v {
                out[i] += x * b;
            }
        }
        out
    }
}

/// Eigen-decomposition of the ring step operator, sorted by quasi-energy.
#[derive(Debug, Clone)]
pub struct QuasiEnergySpectrum {
    pub theta: f64,
    pub phi: f64,
    pub ring_size: usize,
    pub energies: Vec<f64>,
    /// Columns are normalized eigenstates in the ring basis.
    pub eigenvectors: DMatrix<Complex64>,
    /// Site-resolved inverse participation ratio `sum_m P_m²`.
    pub ipr: Vec<f64>,
    pub parity: Vec<Parity>,
    pub bound_threshold: f64,
}

impl QuasiEnergySpectrum {
    pub fn len(&self) -> usize {
        self.energies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.energies.is_empty()
    }

    pub fn is_bound_candidate(&self, i: usize) -> bool {
        self.ipr[i] > self.bound_threshold
    }

    /// Indices of eigenstates whose IPR exceeds the threshold.
    pub fn bound_candidates(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.is_bound_candidate(i)).collect()
    }

    pub fn amplitude(&self, i: usize, up: bool, m: usize) -> Complex64 {
        self.eigenvectors[(2 * m + usize::from(!up), i)]
    }

    /// `P_m` of eigenstate `i` for ring sites `m = 0..N`.
    pub fn site_probabilities(&self, i: usize) -> Vec<f64> {
        let col = self.eigenvectors.column(i);
        (0..self.ring_size)
            .map(|m| col[2 * m].norm_sqr() + col[2 * m + 1].norm_sqr())
            .collect()
    }
}

/// Signed lattice position of ring site `m`, in `(-N/2, N/2]`.
pub fn signed_site(m: usize, n: usize) -> i64 {
    let m = m as i64;
    let n = n as i64;
    if 2 * m > n {
        m - n
    } else {
        m
    }
}

fn diagonalize_sector(
    theta: f64,
    phi: f64,
    n: usize,
    sector: &Sector,
) -> Result<Vec<(f64, Vec<Complex64>, Parity)>> {
    let block = sector.step_block(theta, phi, n);
    let schur = block
        .try_schur(1e-15, 10_000)
        .ok_or_else(|| Error::Diagonalization(format!("Schur iteration did not converge (N = {n})")))?;
    let (q, t) = schur.unpack();
    let mut out = Vec::with_capacity(q.ncols());
    for k in 0..q.ncols() {
        let ev = t[(k, k)];
        let energy = wrap_angle(-ev.arg());
        let mut v = sector.embed(q.column(k).iter().copied(), n);
        let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        v.iter_mut().for_each(|x| *x /= norm);
        let residual = step_residual(theta, phi, n, &v, Complex64::from_polar(1.0, -energy));
        if residual > RESIDUAL_TOLERANCE || (ev.norm() - 1.0).abs() > 1e-10 {
            return Err(Error::Diagonalization(format!(
                "eigenpair {k} residual {residual:e}, |eigenvalue| {}",
                ev.norm()
            )));
        }
        out.push((energy, v, sector.parity));
    }
    Ok(out)
}

fn step_residual(theta: f64, phi: f64, n: usize, v: &[Complex64], eig: Complex64) -> f64 {
    let mut wv = vec![Complex64::new(0.0, 0.0); 2 * n];
    for (col, &x) in v.iter().enumerate() {
        for (row, val) in step_column(theta, phi, n, col) {
            wv[row] += val * x;
        }
    }
    wv.iter()
        .zip(v)
        .map(|(a, b)| (a - eig * b).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// Full diagonalization of the impurity step operator on a ring of `N`
/// sites. States with IPR above `5/N` are flagged as bound candidates.
pub fn diagonalize_ring(theta: f64, phi: f64, n: usize) -> Result<QuasiEnergySpectrum> {
    check_ring(n)?;
    let sectors = [
        Sector::new(n, Parity::Symmetric),
        Sector::new(n, Parity::Antisymmetric),
    ];
    let (a, b) = rayon::join(
        || diagonalize_sector(theta, phi, n, &sectors[0]),
        || diagonalize_sector(theta, phi, n, &sectors[1]),
    );
    let mut states = a?;
    states.extend(b?);
    states.sort_by(|x, y| x.0.total_cmp(&y.0));

    let dim = 2 * n;
    let mut eigenvectors = DMatrix::zeros(dim, dim);
    let mut energies = Vec::with_capacity(dim);
    let mut ipr = Vec::with_capacity(dim);
    let mut parity = Vec::with_capacity(dim);
    for (k, (e, v, p)) in states.into_iter().enumerate() {
        ipr.push(
            v.chunks(2)
                .map(|c| (c[0].norm_sqr() + c[1].norm_sqr()).powi(2))
                .sum(),
        );
        eigenvectors.set_column(k, &nalgebra::DVector::from_vec(v));
        energies.push(e);
        parity.push(p);
    }
    Ok(QuasiEnergySpectrum {
        theta,
        phi,
        ring_size: n,
        energies,
        eigenvectors,
        ipr,
        parity,
        bound_threshold: 5.0 / n as f64,
    })
}
