use std::f64::consts::FRAC_PI_4;
use std::path::Path;

use rayon::prelude::*;

use super::config::ExperimentConfig;
use super::table::{num, Table};
use super::CliError;
use crate::bound::solve_bound_states;
use crate::localisation::localisation_point;
use crate::open_system::{blp_measure, rhp_measure, BellBasis, MeasureSeries, PairGrid};
use crate::spectral::diagonalize_ring;
use crate::walk::{CoinState, WalkConfig, WalkerState};

const DEFAULT_GRID: usize = 256;
const DEFAULT_HORIZONS: [usize; 3] = [150, 300, 500];

pub fn execute(command: &str, cfg: &ExperimentConfig) -> Result<Table, CliError> {
    match command {
        "evolve" => evolve(cfg),
        "bound-states" => bound_states(cfg),
        "localisation" => localisation(cfg),
        "blp" => blp(cfg),
        "rhp" => rhp(cfg),
        "spectrum" => spectrum(cfg),
        other => Err(CliError::Config(format!("unknown command {other:?}"))),
    }
}

fn theta(cfg: &ExperimentConfig) -> Result<f64, CliError> {
    cfg.angle("theta", FRAC_PI_4)
}

fn single_phi(cfg: &ExperimentConfig) -> Result<f64, CliError> {
    match cfg.phis(1)?.as_slice() {
        [phi] => Ok(*phi),
        _ => Err(CliError::Config("this command takes a single phi".into())),
    }
}

fn parity_label(p: crate::bound::Parity) -> String {
    p.as_i32().to_string()
}

fn evolve(cfg: &ExperimentConfig) -> Result<Table, CliError> {
    let theta = theta(cfg)?;
    let phi = single_phi(cfg)?;
    let steps = cfg.usize("steps", 150)?;
    let coin = CoinState::from_angles(cfg.angle("gamma", 0.0)?, cfg.angle("eta", 0.0)?);
    let wc = WalkConfig::for_steps(theta, phi, steps);
    let state = WalkerState::localized(wc.lattice, coin, 0)?.evolve(&wc, steps)?;
    let dist = state.position_distribution();
    let mut table = Table::new(["n", "P_n"]);
    let t = steps as i64;
    for n in -t..=t {
        table.push(vec![n.to_string(), num(dist.at(n))]);
    }
    Ok(table)
}

fn bound_states(cfg: &ExperimentConfig) -> Result<Table, CliError> {
    let theta = theta(cfg)?;
    let mut table = Table::new(["phi", "parity", "E", "lambda", "inv_loc_length"]);
    for phi in cfg.phis(DEFAULT_GRID)? {
        for b in solve_bound_states(theta, phi)? {
            table.push(vec![
                num(phi),
                parity_label(b.parity),
                num(b.energy),
                num(b.lambda),
                num(b.inverse_localisation_length()),
            ]);
        }
    }
    Ok(table)
}

fn localisation(cfg: &ExperimentConfig) -> Result<Table, CliError> {
    let theta = theta(cfg)?;
    let steps = cfg.usize("steps", 150)?;
    let window = cfg.usize("window", 1)?;
    let phis = cfg.phis(DEFAULT_GRID)?;
    let points = phis
        .par_iter()
        .map(|&phi| localisation_point(theta, phi, steps, window))
        .collect::<Result<Vec<_>, _>>()?;
    let mut table = Table::new(["phi", "PR_numeric", "PR_analytic", "P0_numeric", "P0_analytic"]);
    for p in points {
        table.push(vec![
            num(p.phi),
            num(p.pr_numeric),
            num(p.pr_analytic),
            num(p.p0_numeric),
            num(p.p0_analytic),
        ]);
    }
    Ok(table)
}

fn series_dir(cfg: &ExperimentConfig) -> Result<Option<&Path>, CliError> {
    let Some(dir) = cfg.get("series-dir").map(Path::new) else {
        return Ok(None);
    };
    std::fs::create_dir_all(dir)?;
    Ok(Some(dir))
}

fn write_series(path: &Path, column: &str, series: &MeasureSeries) -> Result<(), CliError> {
    let mut table = Table::new(["t", column, "accumulated"]);
    for (t, (v, a)) in series.values.iter().zip(&series.accumulated).enumerate() {
        table.push(vec![t.to_string(), num(*v), num(*a)]);
    }
    std::fs::write(path, table.to_csv())?;
    Ok(())
}

fn blp(cfg: &ExperimentConfig) -> Result<Table, CliError> {
    let theta = theta(cfg)?;
    let horizons = cfg.usize_list("steps", &DEFAULT_HORIZONS)?;
    let points = cfg.usize("grid", 64)?;
    let grid = PairGrid {
        gamma_points: points.max(1),
        eta_points: points.max(1),
        refine: cfg.usize("refine", 8)?,
    };
    let phis = cfg.phis(DEFAULT_GRID)?;
    let results = phis
        .par_iter()
        .map(|&phi| blp_measure(theta, phi, &horizons, &grid))
        .collect::<Result<Vec<_>, _>>()?;

    let mut header = vec!["phi".to_string()];
    for t in &horizons {
        header.extend([format!("blp_t{t}"), format!("gamma_t{t}"), format!("eta_t{t}")]);
    }
    let mut table = Table::new(header);
    let dir = series_dir(cfg)?;
    for (j, (phi, optima)) in phis.iter().zip(&results).enumerate() {
        let mut row = vec![num(*phi)];
        for o in optima {
            row.extend([num(o.measure), num(o.gamma), num(o.eta)]);
        }
        table.push(row);
        if let Some(dir) = dir {
            let longest = optima.iter().max_by_key(|o| o.t_max).expect("non-empty horizons");
            write_series(&dir.join(format!("blp_phi{j:04}.csv")), "trace_distance", &longest.series)?;
        }
    }
    Ok(table)
}

fn rhp(cfg: &ExperimentConfig) -> Result<Table, CliError> {
    let theta = theta(cfg)?;
    let horizons = cfg.usize_list("steps", &DEFAULT_HORIZONS)?;
    let basis = match cfg.get("basis").unwrap_or("x") {
        "x" | "X" => BellBasis::SigmaX,
        "z" | "Z" => BellBasis::SigmaZ,
        other => return Err(CliError::Config(format!("basis must be x or z, got {other:?}"))),
    };
    let horizon = horizons.iter().copied().max().unwrap_or(0);
    let phis = cfg.phis(DEFAULT_GRID)?;
    let series = phis
        .par_iter()
        .map(|&phi| rhp_measure(theta, phi, horizon, basis))
        .collect::<Result<Vec<_>, _>>()?;

    let mut header = vec!["phi".to_string()];
    header.extend(horizons.iter().map(|t| format!("rhp_t{t}")));
    let mut table = Table::new(header);
    let dir = series_dir(cfg)?;
    for (j, (phi, s)) in phis.iter().zip(&series).enumerate() {
        let mut row = vec![num(*phi)];
        row.extend(horizons.iter().map(|&t| num(s.at(t))));
        table.push(row);
        if let Some(dir) = dir {
            write_series(&dir.join(format!("rhp_phi{j:04}.csv")), "concurrence", s)?;
        }
    }
    Ok(table)
}

fn spectrum(cfg: &ExperimentConfig) -> Result<Table, CliError> {
    let theta = theta(cfg)?;
    let ring = cfg.usize("grid", 201)?;
    let phis = cfg.phis(1)?;
    let spectra = phis
        .par_iter()
        .map(|&phi| diagonalize_ring(theta, phi, ring))
        .collect::<Result<Vec<_>, _>>()?;
    let mut table = Table::new(["phi", "index", "E", "ipr", "parity", "bound"]);
    for (phi, s) in phis.iter().zip(&spectra) {
        for i in 0..s.len() {
            table.push(vec![
                num(*phi),
                i.to_string(),
                num(s.energies[i]),
                num(s.ipr[i]),
                parity_label(s.parity[i]),
                u8::from(s.is_bound_candidate(i)).to_string(),
            ]);
        }
    }
    Ok(table)
}
