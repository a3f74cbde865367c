//! Coin as an open system: position is traced out and treated as the
//! environment.

pub mod ancilla;
pub mod blp;
pub mod coin;

pub use ancilla::{
    concurrence, evolve_with_ancilla, reduced_coin_ancilla, rhp_measure, BellBasis,
    CoinAncillaState,
};
pub use blp::{
    blp_from_series, blp_measure, blp_sigma_x_pair, mean_bloch_x, pair_trace_distances,
    BlochAverage, BlpOptimum, CoinDynamics, MeasureSeries, PairGrid,
};
pub use coin::{reduced_coin, trace_distance, trace_distance_general, CoinDensityMatrix};
