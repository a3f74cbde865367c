//! Coin ⊗ position state of the impurity walk and its exact evolution.
//!
//! One step is `W = T C P`: the impurity phase `P` multiplies the amplitudes
//! at the origin by `e^{i phi}`, the coin `C = exp(-i theta sigma_x)` rotates
//! the coin at every site, and the conditional shift `T` moves up amplitudes
//! one site to the right and down amplitudes one site to the left. Other
//! orderings appear in the literature; this one is fixed throughout the crate.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const NORM_CHECK_INTERVAL: usize = 100;
const NORM_TOLERANCE: f64 = 1e-9;

/// Coin basis state, the eigenstates of `sigma_z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Coin {
    Up,
    Down,
}

impl Coin {
    #[inline]
    pub fn index(self) -> usize {
        match self {
            Coin::Up => 0,
            Coin::Down => 1,
        }
    }

    pub fn flip(self) -> Coin {
        match self {
            Coin::Up => Coin::Down,
            Coin::Down => Coin::Up,
        }
    }
}

/// A normalized (or at least finite) coin spinor `up |↑⟩ + down |↓⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoinState {
    pub up: Complex64,
    pub down: Complex64,
}

impl CoinState {
    pub fn new(up: Complex64, down: Complex64) -> Self {
        CoinState { up, down }
    }

    pub fn up() -> Self {
        CoinState::new(Complex64::new(1.0, 0.0), ZERO)
    }

    pub fn down() -> Self {
        CoinState::new(ZERO, Complex64::new(1.0, 0.0))
    }

    /// `(|↑⟩ + |↓⟩)/√2`, the reflection-symmetric `sigma_x` eigenstate.
    pub fn plus_x() -> Self {
        CoinState::new(
            Complex64::new(FRAC_1_SQRT_2, 0.0),
            Complex64::new(FRAC_1_SQRT_2, 0.0),
        )
    }

    /// `(|↑⟩ - |↓⟩)/√2`, the reflection-antisymmetric `sigma_x` eigenstate.
    pub fn minus_x() -> Self {
        CoinState::new(
            Complex64::new(FRAC_1_SQRT_2, 0.0),
            Complex64::new(-FRAC_1_SQRT_2, 0.0),
        )
    }

    /// `cos(gamma/2) |↑⟩ + e^{i eta} sin(gamma/2) |↓⟩`.
    pub fn from_angles(gamma: f64, eta: f64) -> Self {
        CoinState::new(
            Complex64::new((gamma / 2.0).cos(), 0.0),
            Complex64::from_polar((gamma / 2.0).sin(), eta),
        )
    }

    /// The state orthogonal to `from_angles(gamma, eta)`: the antipode on the
    /// Bloch sphere.
    pub fn antipode_angles(gamma: f64, eta: f64) -> (f64, f64) {
        (std::f64::consts::PI - gamma, eta + std::f64::consts::PI)
    }

    pub fn component(&self, coin: Coin) -> Complex64 {
        match coin {
            Coin::Up => self.up,
            Coin::Down => self.down,
        }
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &CoinState) -> Complex64 {
        self.up.conj() * other.up + self.down.conj() * other.down
    }

    pub fn norm_sqr(&self) -> f64 {
        self.up.norm_sqr() + self.down.norm_sqr()
    }

    /// Bloch vector `(x, y, z)` of the (normalized) pure state.
    pub fn bloch(&self) -> [f64; 3] {
        let n = self.norm_sqr();
        let c = self.up * self.down.conj();
        [
            2.0 * c.re / n,
            -2.0 * c.im / n,
            (self.up.norm_sqr() - self.down.norm_sqr()) / n,
        ]
    }
}

/// How the finite lattice is closed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    /// Open chain large enough that no amplitude ever reaches the edge.
    /// Touching the edge is an error rather than a reflection.
    OpenPadded,
    /// Periodic ring of `2L + 1` sites.
    Ring,
}

/// Sites `n ∈ [-L, L]` with a boundary condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Lattice {
    half_width: usize,
    boundary: Boundary,
}

impl Lattice {
    pub fn new(half_width: usize, boundary: Boundary) -> Result<Self> {
        if half_width < 1 {
            return Err(Error::InvalidLattice(half_width));
        }
        Ok(Lattice {
            half_width,
            boundary,
        })
    }

    /// Open lattice sized for `steps` steps from the origin (`L = steps + 2`).
    pub fn open_for_steps(steps: usize) -> Self {
        Lattice {
            half_width: steps + 2,
            boundary: Boundary::OpenPadded,
        }
    }

    pub fn half_width(&self) -> usize {
        self.half_width
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    /// Number of sites, `2L + 1`.
    pub fn sites(&self) -> usize {
        2 * self.half_width + 1
    }

    pub fn site_range(&self) -> std::ops::RangeInclusive<i64> {
        let l = self.half_width as i64;
        -l..=l
    }

    pub fn contains(&self, n: i64) -> bool {
        n.unsigned_abs() as usize <= self.half_width
    }

    #[inline]
    fn offset(&self, n: i64) -> usize {
        (n + self.half_width as i64) as usize
    }
}

/// Walk parameters: coin angle `theta`, impurity phase `phi`, lattice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WalkConfig {
    pub theta: f64,
    pub phi: f64,
    pub lattice: Lattice,
}

impl WalkConfig {
    pub fn new(theta: f64, phi: f64, lattice: Lattice) -> Self {
        WalkConfig {
            theta,
            phi,
            lattice,
        }
    }

    /// Open lattice padded for `steps` steps.
    pub fn for_steps(theta: f64, phi: f64, steps: usize) -> Self {
        WalkConfig::new(theta, phi, Lattice::open_for_steps(steps))
    }
}

/// Position probabilities `P_n = Σ_c |a_{c,n}|²` over `n ∈ [-L, L]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityDistribution {
    half_width: usize,
    p: Vec<f64>,
}

impl ProbabilityDistribution {
    pub fn from_vec(half_width: usize, p: Vec<f64>) -> Self {
        assert_eq!(p.len(), 2 * half_width + 1);
        ProbabilityDistribution { half_width, p }
    }

    pub fn half_width(&self) -> usize {
        self.half_width
    }

    pub fn at(&self, n: i64) -> f64 {
        if n.unsigned_abs() as usize > self.half_width {
            return 0.0;
        }
        self.p[(n + self.half_width as i64) as usize]
    }

    pub fn values(&self) -> &[f64] {
        &self.p
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        let l = self.half_width as i64;
        self.p.iter().enumerate().map(move |(i, &p)| (i as i64 - l, p))
    }

    pub fn total(&self) -> f64 {
        self.p.iter().sum()
    }

    pub fn mean(&self) -> f64 {
        self.iter().map(|(n, p)| n as f64 * p).sum::<f64>() / self.total()
    }

    pub fn variance(&self) -> f64 {
        let m = self.mean();
        self.iter().map(|(n, p)| (n as f64 - m).powi(2) * p).sum::<f64>() / self.total()
    }
}

/// Amplitudes `a_{c,n}(t)` on a finite lattice, stored densely as
/// `[a_{↑,-L}, a_{↓,-L}, a_{↑,-L+1}, ...]`.
///
/// Normalization is not enforced on construction: the coin-ancilla state
/// stores two components of norm 1/2 each.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkerState {
    lattice: Lattice,
    amps: Vec<Complex64>,
    time: usize,
}

impl WalkerState {
    pub fn zeros(lattice: Lattice) -> Self {
        WalkerState {
            lattice,
            amps: vec![ZERO; 2 * lattice.sites()],
            time: 0,
        }
    }

    /// `|coin⟩ ⊗ |site⟩`.
    pub fn localized(lattice: Lattice, coin: CoinState, site: i64) -> Result<Self> {
        let mut s = WalkerState::zeros(lattice);
        s.set(Coin::Up, site, coin.up)?;
        s.set(Coin::Down, site, coin.down)?;
        Ok(s)
    }

    /// Build from amplitudes in the storage order used by [`amplitudes`](Self::amplitudes).
    pub fn from_amplitudes(lattice: Lattice, amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != 2 * lattice.sites() {
            return Err(Error::InvalidParameter(format!(
                "expected {} amplitudes, got {}",
                2 * lattice.sites(),
                amps.len()
            )));
        }
        Ok(WalkerState {
            lattice,
            amps,
            time: 0,
        })
    }

    pub fn lattice(&self) -> Lattice {
        self.lattice
    }

    pub fn time(&self) -> usize {
        self.time
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    #[inline]
    fn idx(&self, coin: Coin, n: i64) -> usize {
        2 * self.lattice.offset(n) + coin.index()
    }

    pub fn get(&self, coin: Coin, n: i64) -> Complex64 {
        if !self.lattice.contains(n) {
            return ZERO;
        }
        self.amps[self.idx(coin, n)]
    }

    pub fn set(&mut self, coin: Coin, n: i64, value: Complex64) -> Result<()> {
        if !self.lattice.contains(n) {
            return Err(Error::InvalidParameter(format!(
                "site {n} outside lattice of half-width {}",
                self.lattice.half_width
            )));
        }
        let i = self.idx(coin, n);
        self.amps[i] = value;
        Ok(())
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `⟨self|other⟩`; both states must live on the same lattice.
    pub fn inner(&self, other: &WalkerState) -> Complex64 {
        assert_eq!(self.lattice, other.lattice, "lattice mismatch");
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Largest `|a_i - b_i|` over all amplitudes.
    pub fn max_abs_diff(&self, other: &WalkerState) -> f64 {
        assert_eq!(self.lattice, other.lattice, "lattice mismatch");
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn scaled(&self, factor: Complex64) -> WalkerState {
        let mut out = self.clone();
        out.amps.iter_mut().for_each(|a| *a *= factor);
        out
    }

    /// Coin rotation `exp(-i theta sigma_x)` at every site.
    pub fn apply_coin(&self, theta: f64) -> WalkerState {
        let (s, c) = theta.sin_cos();
        let mis = Complex64::new(0.0, -s);
        let mut out = self.clone();
        for pair in out.amps.chunks_exact_mut(2) {
            let (u, d) = (pair[0], pair[1]);
            pair[0] = u * c + mis * d;
            pair[1] = mis * u + d * c;
        }
        out
    }

    /// Multiply the amplitudes at the origin by `e^{i phi}`.
    pub fn apply_phase(&self, phi: f64) -> WalkerState {
        let mut out = self.clone();
        let ph = Complex64::from_polar(1.0, phi);
        let i = out.idx(Coin::Up, 0);
        out.amps[i] *= ph;
        out.amps[i + 1] *= ph;
        out
    }

    /// Conditional shift: `|↑,n⟩ → |↑,n+1⟩`, `|↓,n⟩ → |↓,n-1⟩`.
    pub fn apply_shift(&self) -> Result<WalkerState> {
        let mut out = WalkerState::zeros(self.lattice);
        out.time = self.time;
        shift_into(&self.lattice, &self.amps, &mut out.amps)?;
        Ok(out)
    }

    /// One step `W = T C P`; increments the time.
    pub fn step(&self, config: &WalkConfig) -> Result<WalkerState> {
        let mut out = self.clone();
        Stepper::new(config).advance(&mut out)?;
        Ok(out)
    }

    /// `W^t |self⟩`.
    pub fn evolve(&self, config: &WalkConfig, steps: usize) -> Result<WalkerState> {
        self.evolve_with(config, steps, |_| {})
    }

    /// `W^t |self⟩`, calling `observer` on the initial state and after every
    /// step.
    pub fn evolve_with<F>(
        &self,
        config: &WalkConfig,
        steps: usize,
        mut observer: F,
    ) -> Result<WalkerState>
    where
        F: FnMut(&WalkerState),
    {
        check_lattice(config, self)?;
        let mut stepper = Stepper::new(config);
        let mut state = self.clone();
        let norm0 = state.norm_sqr();
        observer(&state);
        for k in 1..=steps {
            stepper.advance(&mut state)?;
            if k % NORM_CHECK_INTERVAL == 0 {
                let drift = (state.norm_sqr() - norm0).abs();
                if drift > NORM_TOLERANCE {
                    return Err(Error::NormDrift { step: k, drift });
                }
            }
            observer(&state);
        }
        Ok(state)
    }

    pub fn position_distribution(&self) -> ProbabilityDistribution {
        let p = self
            .amps
            .chunks_exact(2)
            .map(|c| c[0].norm_sqr() + c[1].norm_sqr())
            .collect();
        ProbabilityDistribution::from_vec(self.lattice.half_width, p)
    }

    /// Sublattice operator `S = I ⊗ Σ (-1)^n |n⟩⟨n|`.
    pub fn apply_sublattice(&self) -> WalkerState {
        let mut out = self.clone();
        let l = self.lattice.half_width as i64;
        for (i, pair) in out.amps.chunks_exact_mut(2).enumerate() {
            if (i as i64 - l).rem_euclid(2) == 1 {
                pair[0] = -pair[0];
                pair[1] = -pair[1];
            }
        }
        out
    }

    /// Reflection `R = sigma_x ⊗ Σ |-n⟩⟨n|`.
    pub fn apply_reflection(&self) -> WalkerState {
        let mut out = self.clone();
        let sites = self.lattice.sites();
        for i in 0..sites {
            let j = sites - 1 - i;
            out.amps[2 * j] = self.amps[2 * i + 1];
            out.amps[2 * j + 1] = self.amps[2 * i];
        }
        out
    }

    /// True when all amplitudes on sites of the given parity (0 even, 1 odd)
    /// vanish exactly.
    pub fn vanishes_on_sublattice(&self, parity: i64) -> bool {
        let l = self.lattice.half_width as i64;
        self.amps
            .chunks_exact(2)
            .enumerate()
            .filter(|(i, _)| (*i as i64 - l).rem_euclid(2) == parity)
            .all(|(_, c)| c[0] == ZERO && c[1] == ZERO)
    }
}

fn check_lattice(config: &WalkConfig, state: &WalkerState) -> Result<()> {
    if config.lattice != state.lattice {
        return Err(Error::InvalidParameter(
            "walk config lattice differs from the state's lattice".into(),
        ));
    }
    Ok(())
}

fn shift_into(lattice: &Lattice, src: &[Complex64], dst: &mut [Complex64]) -> Result<()> {
    let sites = lattice.sites();
    let l = lattice.half_width as i64;
    match lattice.boundary {
        Boundary::OpenPadded => {
            if src[2 * (sites - 1)] != ZERO {
                return Err(Error::BoundaryOverflow { site: l + 1 });
            }
            if src[1] != ZERO {
                return Err(Error::BoundaryOverflow { site: -l - 1 });
            }
            dst[0] = ZERO;
            dst[2 * sites - 1] = ZERO;
            for i in 0..sites - 1 {
                dst[2 * (i + 1)] = src[2 * i];
                dst[2 * i + 1] = src[2 * (i + 1) + 1];
            }
        }
        Boundary::Ring => {
            for i in 0..sites {
                let right = (i + 1) % sites;
                let left = (i + sites - 1) % sites;
                dst[2 * right] = src[2 * i];
                dst[2 * left + 1] = src[2 * i + 1];
            }
        }
    }
    Ok(())
}

/// Reusable in-place stepping with precomputed coin and phase factors.
#[derive(Debug, Clone)]
pub struct Stepper {
    cos: f64,
    mis: Complex64,
    phase: Complex64,
    lattice: Lattice,
    scratch: Vec<Complex64>,
}

impl Stepper {
    pub fn new(config: &WalkConfig) -> Self {
        let (s, c) = config.theta.sin_cos();
        Stepper {
            cos: c,
            mis: Complex64::new(0.0, -s),
            phase: Complex64::from_polar(1.0, config.phi),
            lattice: config.lattice,
            scratch: vec![ZERO; 2 * config.lattice.sites()],
        }
    }

    pub fn advance(&mut self, state: &mut WalkerState) -> Result<()> {
        debug_assert_eq!(state.lattice, self.lattice);
        let origin = 2 * self.lattice.offset(0);
        state.amps[origin] *= self.phase;
        state.amps[origin + 1] *= self.phase;
        let (c, mis) = (self.cos, self.mis);
        for pair in state.amps.chunks_exact_mut(2) {
            let (u, d) = (pair[0], pair[1]);
            pair[0] = u * c + mis * d;
            pair[1] = mis * u + d * c;
        }
        shift_into(&self.lattice, &state.amps, &mut self.scratch)?;
        std::mem::swap(&mut state.amps, &mut self.scratch);
        state.time += 1;
        Ok(())
    }
}
