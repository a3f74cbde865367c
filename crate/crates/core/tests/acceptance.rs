//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.
//!
//! Run: cargo test --test acceptance

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};
use std::time::{Duration, Instant};

use impwalk::bound::{
    analytic_mean_distribution, analytic_origin_probability, analytic_participation_ratio,
    analytic_truncation, bound_overlap, effective_inverse_localisation_length,
    solve_bound_states, BoundWeights, Parity, StepParity, TransferMatrix,
};
use impwalk::localisation::{averaged_distribution, participation_ratio};
use impwalk::open_system::{
    blp_measure, concurrence, evolve_with_ancilla, reduced_coin, rhp_measure, BellBasis,
    PairGrid,
};
use impwalk::spectral::diagonalize_ring;
use impwalk::walk::{CoinState, Lattice, WalkConfig, WalkerState};
use impwalk::{wrap_angle, Complex64};
use nalgebra::{Matrix2, Matrix4};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

struct Report {
    failures: usize,
}

impl Report {
    fn check(&mut self, ok: bool, what: &str, detail: String) -> bool {
        println!("    [{}] {what}: {detail}", if ok { "ok" } else { "FAIL" });
        ok
    }

    fn criterion(&mut self, id: u32, name: &str, f: impl FnOnce(&mut Report) -> bool) {
        println!("criterion {id}: {name}");
        let start = Instant::now();
        let ok = f(self);
        let verdict = if ok { "PASS" } else { "FAIL" };
        println!(
            "{verdict} criterion {id} ({name}) [{:.1} s]",
            start.elapsed().as_secs_f64()
        );
        if !ok {
            self.failures += 1;
        }
    }
}

fn phi_grid(n: usize) -> Vec<f64> {
    (0..n).map(|j| TAU * j as f64 / n as f64).collect()
}

fn argmax(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, &x) in v.iter().enumerate() {
        if x > v[best] {
            best = i;
        }
    }
    best
}

/// `|f[j+1] - 2 f[j] + f[j-1]|`: jump of the forward slope at `j`.
fn slope_jump(f: &[f64], j: usize) -> f64 {
    (f[j + 1] - 2.0 * f[j] + f[j - 1]).abs()
}

fn kink_check(r: &mut Report, label: &str, f: &[f64], j: usize) -> bool {
    let here = slope_jump(f, j);
    let left = slope_jump(f, j - 1);
    let right = slope_jump(f, j + 1);
    r.check(
        here > 5.0 * left.max(right),
        &format!("{label} slope jump at grid index {j}"),
        format!("{here:.3e} vs neighbours {left:.3e}, {right:.3e} (need > 5x)"),
    )
}

fn symmetric_about_pi(f: &[f64]) -> f64 {
    let n = f.len();
    (1..n).map(|j| (f[j] - f[n - j]).abs()).fold(0.0, f64::max)
}

fn criterion_1(r: &mut Report) -> bool {
    let theta = FRAC_PI_4;
    let n = 201;
    let start = Instant::now();
    let mut ok = true;
    let mut compared = 0;
    let mut worst: f64 = 0.0;
    for j in 1..=64 {
        let phi = TAU * j as f64 / 65.0;
        let spec = diagonalize_ring(theta, phi, n).expect("ring diagonalization");
        let flagged = spec.bound_candidates();
        for b in solve_bound_states(theta, phi).unwrap() {
            if b.lambda.abs() > 0.95 {
                continue;
            }
            compared += 1;
            let best = flagged
                .iter()
                .filter(|&&i| spec.parity[i] == b.parity)
                .map(|&i| wrap_angle(spec.energies[i] - b.energy).abs())
                .fold(f64::INFINITY, f64::min);
            worst = worst.max(best);
            if best > 1e-6 {
                ok = r.check(false, "analytic state matched", format!("phi = {phi:.4}, E = {:.6}, mismatch {best:.2e}", b.energy)) && ok;
            }
        }
    }
    let elapsed = start.elapsed();
    ok &= r.check(
        worst <= 1e-6,
        "quasi-energy agreement",
        format!("{compared} states with |lambda| <= 0.95, worst mismatch {worst:.2e} (tol 1e-6)"),
    );
    ok &= r.check(
        elapsed < Duration::from_secs(120),
        "runtime",
        format!("{:.1} s (limit 120 s)", elapsed.as_secs_f64()),
    );
    ok
}

fn criterion_2(r: &mut Report) -> bool {
    let eps = 1e-3;
    let mut ok = true;
    for (label, theta) in [("pi/6", PI / 6.0), ("pi/4", FRAC_PI_4), ("pi/3", PI / 3.0)] {
        let has = |phi: f64, p: Parity| {
            solve_bound_states(theta, phi)
                .unwrap()
                .iter()
                .any(|b| b.parity == p)
        };
        let sym_edge = TAU - 2.0 * theta;
        let anti_edge = 2.0 * theta;
        let sym_ok = has(eps, Parity::Symmetric)
            && has(sym_edge - eps, Parity::Symmetric)
            && !has(sym_edge + eps, Parity::Symmetric);
        let anti_ok = !has(anti_edge - eps, Parity::Antisymmetric)
            && has(anti_edge + eps, Parity::Antisymmetric)
            && has(TAU - eps, Parity::Antisymmetric);
        ok &= r.check(
            sym_ok,
            &format!("theta = {label}, symmetric window (0, 2pi - 2theta)"),
            format!(
                "present at edge-eps: {}, at edge+eps: {}",
                has(sym_edge - eps, Parity::Symmetric),
                has(sym_edge + eps, Parity::Symmetric)
            ),
        );
        ok &= r.check(
            anti_ok,
            &format!("theta = {label}, anti-symmetric window (2theta, 2pi)"),
            format!(
                "present at edge-eps: {}, at edge+eps: {}",
                has(anti_edge - eps, Parity::Antisymmetric),
                has(anti_edge + eps, Parity::Antisymmetric)
            ),
        );
    }
    ok
}

fn criterion_3(r: &mut Report) -> bool {
    let mut ok = true;
    let states = solve_bound_states(FRAC_PI_4, PI).unwrap();
    ok &= r.check(states.len() == 4, "state count", format!("{}", states.len()));
    for b in states {
        let n_max = b.required_truncation() + 2;
        let s = b.amplitudes(n_max).unwrap();
        let cfg = WalkConfig::new(FRAC_PI_4, PI, s.lattice());
        let residual = s
            .step(&cfg)
            .unwrap()
            .max_abs_diff(&s.scaled(Complex64::from_polar(1.0, -b.energy)));
        ok &= r.check(
            residual < 1e-8,
            &format!("parity {:+}, E = {:+.6}", b.parity.as_i32(), b.energy),
            format!("max |W psi - e^(-iE) psi| = {residual:.2e} (tol 1e-8)"),
        );
    }
    ok
}

fn criterion_4(r: &mut Report) -> bool {
    let theta = FRAC_PI_4;
    let t = 150;
    let grid = phi_grid(256);
    let start = Instant::now();
    let ell: Vec<f64> = grid
        .iter()
        .map(|&phi| effective_inverse_localisation_length(theta, phi).unwrap())
        .collect();
    let pr: Vec<f64> = grid
        .iter()
        .map(|&phi| {
            let avg = averaged_distribution(theta, phi, t, (CoinState::up(), CoinState::down())).unwrap();
            participation_ratio(&avg.p_mean)
        })
        .collect();
    let pr_an: Vec<f64> = grid
        .iter()
        .map(|&phi| analytic_participation_ratio(theta, phi, StepParity::of(t)).unwrap())
        .collect();
    let elapsed = start.elapsed();

    let mut ok = true;
    let s = symmetric_about_pi(&ell);
    ok &= r.check(s < 1e-6, "l_eff^-1 symmetric about pi", format!("max deviation {s:.2e}"));
    let s = symmetric_about_pi(&pr);
    ok &= r.check(s < 1e-6, "PR symmetric about pi", format!("max deviation {s:.2e}"));
    let i = argmax(&ell);
    ok &= r.check(i == 128, "l_eff^-1 maximal at pi", format!("argmax phi = {:.4} pi", grid[i] / PI));
    let i = argmax(&pr);
    ok &= r.check(
        i == 128,
        "PR maximal at pi",
        format!("argmax phi = {:.4} pi (PR {:.6} there, {:.6} at pi)", grid[i] / PI, pr[i], pr[128]),
    );
    for j in [64, 192] {
        ok &= kink_check(r, "l_eff^-1", &ell, j);
        ok &= kink_check(r, "PR", &pr, j);
    }
    let below = pr
        .iter()
        .zip(&pr_an)
        .map(|(n, a)| a - n)
        .fold(f64::NEG_INFINITY, f64::max);
    ok &= r.check(below <= 0.0, "PR_numeric >= PR_analytic", format!("max(analytic - numeric) = {below:.3e}"));
    let diff = grid
        .iter()
        .zip(pr.iter().zip(&pr_an))
        .filter(|(phi, _)| **phi > 0.6 * PI && **phi < 1.4 * PI)
        .map(|(_, (n, a))| (n - a).abs())
        .fold(0.0, f64::max);
    ok &= r.check(diff < 2e-2, "PR agreement on (0.6pi, 1.4pi)", format!("max |numeric - analytic| = {diff:.3e}"));
    ok &= r.check(
        elapsed < Duration::from_secs(300),
        "runtime",
        format!("{:.1} s (limit 300 s)", elapsed.as_secs_f64()),
    );
    ok
}

fn criterion_5(r: &mut Report) -> bool {
    let mut ok = true;
    for (label, phi) in [("0.75pi", 0.75 * PI), ("pi", PI), ("1.25pi", 1.25 * PI)] {
        let avg = averaged_distribution(FRAC_PI_4, phi, 150, (CoinState::up(), CoinState::down())).unwrap();
        let numeric = avg.mean_origin_probability(1);
        let analytic = analytic_origin_probability(FRAC_PI_4, phi).unwrap();
        ok &= r.check(
            (numeric - analytic).abs() < 1e-3,
            &format!("phi = {label}"),
            format!("numeric {numeric:.6}, analytic {analytic:.6}"),
        );
    }
    ok
}

/// Periods of the two strongest local maxima of the power spectrum.
fn dominant_periods(x: &[f64]) -> Vec<(f64, f64)> {
    let m = x.len();
    let mean = x.iter().sum::<f64>() / m as f64;
    let power: Vec<f64> = (0..=m / 2)
        .map(|k| {
            let (mut re, mut im) = (0.0, 0.0);
            for (t, v) in x.iter().enumerate() {
                let a = TAU * (k * t) as f64 / m as f64;
                re += (v - mean) * a.cos();
                im -= (v - mean) * a.sin();
            }
            re * re + im * im
        })
        .collect();
    let mut peaks: Vec<(f64, f64)> = (1..power.len())
        .filter(|&k| {
            power[k] > power[k - 1] && (k + 1 == power.len() || power[k] >= power[k + 1])
        })
        .map(|k| (m as f64 / k as f64, power[k]))
        .collect();
    peaks.sort_by(|a, b| b.1.total_cmp(&a.1));
    peaks.truncate(2);
    peaks
}

fn criterion_6(r: &mut Report) -> bool {
    let mut ok = true;
    let states = solve_bound_states(FRAC_PI_4, PI).unwrap();
    let gap: Vec<f64> = states.iter().filter(|b| b.in_gap).map(|b| b.energy).collect();
    let de = (gap[0] - gap[1]).abs();
    ok &= r.check(
        (de - 0.205 * PI).abs() < 0.005 * PI,
        "in-gap splitting",
        format!("dE = {:.4} pi", de / PI),
    );
    let c: Vec<f64> = evolve_with_ancilla(FRAC_PI_4, PI, 500, BellBasis::SigmaX)
        .unwrap()
        .iter()
        .map(concurrence)
        .collect();
    let peaks = dominant_periods(&c[100..=500]);
    let expected = TAU / de;
    let has = |lo: f64, hi: f64| peaks.iter().any(|(p, _)| *p >= lo && *p <= hi);
    let periods: Vec<String> = peaks.iter().map(|(p, _)| format!("{p:.3}")).collect();
    ok &= r.check(
        has(1.9, 2.1) && has(9.3, 10.3),
        "concurrence spectrum",
        format!("top periods [{}], expected 2 and {expected:.2}", periods.join(", ")),
    );
    ok
}

fn criterion_7(r: &mut Report) -> bool {
    let theta = FRAC_PI_4;
    let horizons = [150, 300, 500];
    let grid = phi_grid(256);
    let pairs = PairGrid::default();
    let start = Instant::now();
    let results: Vec<_> = grid
        .iter()
        .map(|&phi| blp_measure(theta, phi, &horizons, &pairs).unwrap())
        .collect();
    let elapsed = start.elapsed();
    let mut ok = true;
    for (k, t) in horizons.iter().enumerate() {
        let n: Vec<f64> = results.iter().map(|o| o[k].measure).collect();
        let i = argmax(&n);
        ok &= r.check(
            i == 128,
            &format!("t_max = {t}: maximal at pi"),
            format!("argmax phi = {:.4} pi, N(pi) = {:.4}", grid[i] / PI, n[128]),
        );
        let best = &results[128][k];
        let near = |x: f64, y: f64, step: f64| wrap_angle(x - y).abs() <= step + 1e-12;
        let sigma_x_pair = near(best.gamma, FRAC_PI_2, pairs.gamma_step())
            && (near(best.eta, 0.0, pairs.eta_step()) || near(best.eta, PI, pairs.eta_step()));
        ok &= r.check(
            sigma_x_pair,
            &format!("t_max = {t}: optimal pair at pi"),
            format!("gamma = {:.4} pi, eta = {:.4} pi", best.gamma / PI, best.eta / PI),
        );
        for j in [64, 192] {
            ok &= r.check(
                n[j] < n[j - 1] && n[j] < n[j + 1],
                &format!("t_max = {t}: local minimum at grid index {j}"),
                format!("{:.4}, {:.4}, {:.4}", n[j - 1], n[j], n[j + 1]),
            );
        }
    }
    let ratio = results[128][2].measure / results[128][1].measure;
    ok &= r.check(
        (ratio / (5.0 / 3.0) - 1.0).abs() < 0.1,
        "linear growth at pi",
        format!("N(500)/N(300) = {ratio:.4} (expected 1.667 within 10%)"),
    );
    ok &= r.check(
        elapsed < Duration::from_secs(900),
        "runtime",
        format!("{:.1} s on {} thread(s) (limit 900 s)", elapsed.as_secs_f64(), rayon::current_num_threads()),
    );
    ok
}

fn criterion_8(r: &mut Report) -> bool {
    let mut ok = true;
    let at_pi = rhp_measure(FRAC_PI_4, PI, 500, BellBasis::SigmaX).unwrap();
    let i_pi = at_pi.at(500);
    for (label, phi) in [("pi/4", FRAC_PI_4), ("pi/3", PI / 3.0), ("11pi/6", 11.0 * PI / 6.0)] {
        let v = rhp_measure(FRAC_PI_4, phi, 500, BellBasis::SigmaX).unwrap().at(500);
        ok &= r.check(
            v < 0.05 * i_pi,
            &format!("phi = {label}"),
            format!("I = {v:.4} vs 0.05 I(pi) = {:.4}", 0.05 * i_pi),
        );
    }
    let ratio = at_pi.at(500) / at_pi.at(300);
    ok &= r.check(
        (ratio / (5.0 / 3.0) - 1.0).abs() < 0.1,
        "linear growth at pi",
        format!("I(500)/I(300) = {ratio:.4} (expected 1.667 within 10%)"),
    );
    ok
}

fn random_state(rng: &mut StdRng, lattice: Lattice, spread: i64) -> WalkerState {
    let mut s = WalkerState::zeros(lattice);
    let mut norm = 0.0;
    for n in -spread..=spread {
        for c in [impwalk::walk::Coin::Up, impwalk::walk::Coin::Down] {
            let z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            norm += z.norm_sqr();
            s.set(c, n, z).unwrap();
        }
    }
    s.scaled(Complex64::new(1.0 / norm.sqrt(), 0.0))
}

fn criterion_9(r: &mut Report) -> bool {
    const CASES: usize = 100;
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut ok = true;

    let mut worst: f64 = 0.0;
    for _ in 0..CASES {
        let (theta, phi) = (rng.gen_range(0.0..TAU), rng.gen_range(0.0..TAU));
        let cfg = WalkConfig::for_steps(theta, phi, 30);
        let s = random_state(&mut rng, cfg.lattice, 5);
        let out = s.evolve(&cfg, 25).unwrap();
        worst = worst.max((out.norm_sqr() - 1.0).abs());
    }
    ok &= r.check(worst < 1e-12, "unitarity", format!("max norm drift {worst:.2e}"));

    let (mut ws, mut wr) = (0.0f64, 0.0f64);
    for _ in 0..CASES {
        let (theta, phi) = (rng.gen_range(0.0..TAU), rng.gen_range(0.0..TAU));
        let cfg = WalkConfig::for_steps(theta, phi, 12);
        let s = random_state(&mut rng, cfg.lattice, 6);
        let w = s.step(&cfg).unwrap();
        let sws = s.apply_sublattice().step(&cfg).unwrap().apply_sublattice();
        ws = ws.max(sws.max_abs_diff(&w.scaled(Complex64::new(-1.0, 0.0))));
        let rw = s.apply_reflection().step(&cfg).unwrap();
        let wr_ = w.apply_reflection();
        wr = wr.max(rw.max_abs_diff(&wr_));
    }
    ok &= r.check(ws < 1e-14, "S W S = -W", format!("max deviation {ws:.2e}"));
    ok &= r.check(wr < 1e-14, "[R, W] = 0", format!("max deviation {wr:.2e}"));

    let (mut wd, mut wi) = (0.0f64, 0.0f64);
    for _ in 0..CASES {
        let theta = rng.gen_range(0.05..1.5);
        let t = TransferMatrix::new(theta, rng.gen_range(-PI..PI), rng.gen_range(0.0..TAU)).unwrap();
        wd = wd.max((t.determinant() - 1.0).norm());
        let prod = t.matrix() * t.inverse().matrix();
        wi = wi.max((prod - Matrix2::identity()).norm());
    }
    ok &= r.check(wd < 1e-12, "det T = 1", format!("max deviation {wd:.2e}"));
    ok &= r.check(wi < 1e-12, "T sigma_x T sigma_x = I", format!("max deviation {wi:.2e}"));

    let mut wp: f64 = 0.0;
    for _ in 0..CASES {
        let (theta, phi) = (rng.gen_range(0.0..TAU), rng.gen_range(0.0..TAU));
        let cfg = WalkConfig::for_steps(theta, phi, 20);
        let s = random_state(&mut rng, cfg.lattice, 4).evolve(&cfg, 15).unwrap();
        let rho = reduced_coin(&s);
        let [lo, _] = rho.eigenvalues();
        let herm = (rho.matrix() - rho.matrix().adjoint()).norm();
        wp = wp.max((-lo).max(0.0)).max((rho.trace() - 1.0).abs()).max(herm);
    }
    ok &= r.check(wp < 1e-12, "partial trace positivity", format!("max violation {wp:.2e}"));

    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let bell = Matrix4::from_fn(|i, j| {
        let v = [h, zero, zero, h];
        v[i] * v[j].conj()
    });
    let mut wc: f64 = 0.0;
    for _ in 0..CASES {
        let p: f64 = rng.gen_range(0.0..1.0);
        let rho = bell * Complex64::new(p, 0.0) + Matrix4::identity() * Complex64::new((1.0 - p) / 4.0, 0.0);
        wc = wc.max((concurrence(&rho) - ((3.0 * p - 1.0) / 2.0).max(0.0)).abs());
    }
    ok &= r.check(wc < 1e-10, "Werner concurrence", format!("max deviation {wc:.2e}"));

    let mut wf: f64 = 0.0;
    for _ in 0..CASES {
        let (gamma, eta, phi) = (rng.gen_range(0.0..PI), rng.gen_range(0.0..TAU), rng.gen_range(0.0..TAU));
        let coin = CoinState::from_angles(gamma, eta);
        let mut projected = 0.0;
        for b in solve_bound_states(FRAC_PI_4, phi).unwrap() {
            let s = b.amplitudes(b.required_truncation()).unwrap();
            let probe = WalkerState::localized(s.lattice(), coin, 0).unwrap();
            projected += s.inner(&probe).norm_sqr();
        }
        wf = wf.max((projected - bound_overlap(gamma, eta, FRAC_PI_4, phi).unwrap()).abs());
    }
    ok &= r.check(wf < 1e-8, "F^bound projection oracle", format!("max deviation {wf:.2e}"));

    let mut wn: f64 = 0.0;
    for _ in 0..CASES {
        let phi = rng.gen_range(0.0..TAU);
        let w = BoundWeights::solve(FRAC_PI_4, phi).unwrap();
        let expected = 0.5 * ((1.0 - w.symmetric) + (1.0 - w.antisymmetric));
        let n_max = analytic_truncation(&w);
        for parity in [StepParity::Even, StepParity::Odd] {
            let d = analytic_mean_distribution(FRAC_PI_4, phi, n_max, parity).unwrap();
            wn = wn.max((d.total() - expected).abs());
        }
    }
    ok &= r.check(wn < 1e-10, "<P_n> geometric closure", format!("max deviation {wn:.2e}"));

    ok
}

fn main() {
    let mut report = Report {
        failures: 0,
    };
    report.criterion(1, "ring spectrum agrees with analytic bound states", criterion_1);
    report.criterion(2, "bound-state existence windows", criterion_2);
    report.criterion(3, "bound states are step eigenstates", criterion_3);
    report.criterion(4, "localisation curves", criterion_4);
    report.criterion(5, "long-time origin probability", criterion_5);
    report.criterion(6, "quasi-energy splitting and concurrence periods", criterion_6);
    report.criterion(7, "BLP measure", criterion_7);
    report.criterion(8, "RHP measure", criterion_8);
    report.criterion(9, "randomized property suites", criterion_9);
    println!();
    println!("acceptance: {} of 9 criteria failed", report.failures);
    if report.failures > 0 {
        std::process::exit(1);
    }
}
