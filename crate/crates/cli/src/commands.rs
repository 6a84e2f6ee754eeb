//! The data-producing subcommands. Each returns the files it wants written;
//! column schemas are listed on the functions.

use mfrisk_core::compound::{compound_mean, compound_state_prob, compound_var, simulate_compound, DiscreteClaimLaw};
use mfrisk_core::ensemble::{try_map_paths, EnsembleSpec};
use mfrisk_core::mfpp::{
    interarrival_cdf, interarrival_density, mfpp_mean, mfpp_var, pgf, simulate_mfpp, state_prob_pn, PnMethod,
    DEFAULT_KMAX,
};
use mfrisk_core::risk::{
    lrd_correlation, lrd_exponent, mfrp2_cov, mfrp_cov, srd_correlation, surplus_from_counts, surplus_mean,
    ClaimModel, RiskConfig, Variant,
};
use mfrisk_core::ruin::{
    ruin_asymptotic_subexp, ruin_prob_density, ruin_prob_lt, ruin_sandwich_mc, RuinEstimate, RuinMethod,
};
use mfrisk_core::stats::Estimate;
use mfrisk_core::subordinators::{
    mean_inverse, mean_inverse_asymptotic, sample_inverse_path, var_inverse_asymptotic, Regime,
};
use mfrisk_core::{Grid, MixedParams};
use serde::Serialize;

use crate::config::ExperimentConfig;
use crate::output::{json_file, num, OutputFile, Table};
use crate::RunError;

type Out = Result<Vec<OutputFile>, RunError>;

fn core(command: &'static str) -> impl Fn(mfrisk_core::Error) -> RunError {
    move |e| RunError::from_core(command, e)
}

fn ensemble(cfg: &ExperimentConfig) -> EnsembleSpec {
    EnsembleSpec {
        n_paths: cfg.sim.n_paths,
        seed: cfg.sim.master_seed,
        workers: cfg.sim.workers,
        step: cfg.sim.grid_step,
        op_step: cfg.sim.operational_step,
    }
}

/// Third process of a simulated path: the surplus when a `risk` section is
/// present, otherwise the compound sum with the configured discrete law
/// (unit claims by default).
enum Third {
    Surplus(RiskConfig, ClaimModel),
    Compound(DiscreteClaimLaw),
}

impl Third {
    fn from_config(cfg: &ExperimentConfig) -> Result<Self, RunError> {
        match (&cfg.risk, &cfg.claims) {
            (Some(r), Some(c)) => Ok(Third::Surplus(*r, c.clone())),
            (Some(_), None) => Err(RunError::Config("a `risk` section needs a `claims` section".into())),
            (None, Some(ClaimModel::Discrete { law })) => Ok(Third::Compound(law.clone())),
            (None, Some(ClaimModel::Degenerate { value })) if value.fract() == 0.0 && *value >= 1.0 => {
                Ok(Third::Compound(DiscreteClaimLaw::degenerate(*value as usize).map_err(core("simulate"))?))
            }
            (None, Some(_)) => {
                Err(RunError::Config("without a `risk` section the claims must be positive integers".into()))
            }
            (None, None) => Ok(Third::Compound(DiscreteClaimLaw::degenerate(1).expect("unit law"))),
        }
    }

    fn label(&self) -> &'static str {
        match self {
            Third::Surplus(..) => "surplus",
            Third::Compound(_) => "compound",
        }
    }
}

/// `(Y, N, C or R)` on `grid` for every path, in path order.
fn simulate_paths(
    cfg: &ExperimentConfig,
    grid: &Grid,
    third: &Third,
    command: &'static str,
) -> Result<Vec<[Vec<f64>; 3]>, RunError> {
    let p = cfg.params;
    let s = &cfg.sim;
    try_map_paths(s.n_paths, s.master_seed, s.workers, |_, rng| {
        let y = sample_inverse_path(&p, s.operational_step, grid, rng)?;
        let n = simulate_mfpp(&p, &y, rng);
        let x = match third {
            Third::Surplus(r, c) => surplus_from_counts(&p, r, c, &y, &n, rng)?.values().to_vec(),
            Third::Compound(law) => simulate_compound(&n, law, rng).into_values(),
        };
        let counts = n.counts().iter().map(|&k| k as f64).collect();
        Ok([y.values().to_vec(), counts, x])
    })
    .map_err(core(command))
}

fn column(paths: &[[Vec<f64>; 3]], which: usize, i: usize) -> Vec<f64> {
    paths.iter().map(|p| p[which][i]).collect()
}

/// Closed-form mean and variance of the third process at `t`, the latter
/// with `Var Y(t)` and `E N(t)` supplied.
fn third_moments(p: &MixedParams, third: &Third, t: f64, var_y: f64) -> mfrisk_core::Result<(f64, f64)> {
    match third {
        Third::Surplus(r, c) => {
            let en = mfpp_mean(p, t)?;
            let var = match r.variant() {
                Variant::Mfrp2 => mfrp2_cov(p, c, t, t, var_y, en)?,
                _ => mfrp_cov(p, r, c, t, t, var_y, en)?,
            };
            Ok((surplus_mean(p, r, t)?, var))
        }
        Third::Compound(law) => Ok((compound_mean(p, law, t)?, compound_var(p, law, t, var_y)?)),
    }
}

#[derive(Serialize)]
struct SimulateRow {
    t: f64,
    mean_y: Estimate,
    mean_y_closed: f64,
    var_y: Estimate,
    mean_n: Estimate,
    mean_n_closed: f64,
    var_n: Estimate,
    var_n_closed: f64,
    mean_x: Estimate,
    mean_x_closed: f64,
    var_x: Estimate,
    var_x_closed: f64,
}

#[derive(Serialize)]
struct SimulateSummary {
    third_process: &'static str,
    n_paths: usize,
    rows: Vec<SimulateRow>,
}

/// `paths.csv`: `path_id,t,Y,N,C_or_R`; `summary.json`: ensemble mean and
/// variance per grid time with standard errors next to the closed forms
/// (variances use the ensemble `Var Y(t)`).
pub fn simulate(cfg: &ExperimentConfig) -> Out {
    const CMD: &str = "simulate";
    let p = cfg.params;
    let third = Third::from_config(cfg)?;
    let grid = Grid::new(cfg.sim.grid_step, cfg.sim.horizon).map_err(core(CMD))?;
    let paths = simulate_paths(cfg, &grid, &third, CMD)?;

    let mut table = Table::new(&["path_id", "t", "Y", "N", "C_or_R"]);
    for (id, [y, n, x]) in paths.iter().enumerate() {
        for (i, t) in grid.points().enumerate() {
            table.push(vec![id.to_string(), num(t), num(y[i]), num(n[i]), num(x[i])]);
        }
    }

    let seed = cfg.sim.master_seed;
    let mut rows = Vec::with_capacity(grid.len());
    for (i, t) in grid.points().enumerate() {
        let (ys, ns, xs) = (column(&paths, 0, i), column(&paths, 1, i), column(&paths, 2, i));
        let var_y = Estimate::variance_of(&ys, seed);
        let f = || -> mfrisk_core::Result<SimulateRow> {
            let (mx, vx) = third_moments(&p, &third, t, var_y.value)?;
            Ok(SimulateRow {
                t,
                mean_y: Estimate::mean_of(&ys, seed),
                mean_y_closed: mean_inverse(&p, t)?,
                var_y,
                mean_n: Estimate::mean_of(&ns, seed),
                mean_n_closed: mfpp_mean(&p, t)?,
                var_n: Estimate::variance_of(&ns, seed),
                var_n_closed: mfpp_var(&p, t, var_y.value)?,
                mean_x: Estimate::mean_of(&xs, seed),
                mean_x_closed: mx,
                var_x: Estimate::variance_of(&xs, seed),
                var_x_closed: vx,
            })
        };
        rows.push(f().map_err(core(CMD))?);
    }
    let summary = SimulateSummary { third_process: third.label(), n_paths: cfg.sim.n_paths, rows };
    Ok(vec![table.into_file("paths.csv", cfg), json_file("summary.json", cfg, &summary)?])
}

/// `moments.csv`: `t,U,U_small,U_large,var_Y_large,mean_Y,mean_Y_se,var_Y,var_Y_se,
/// mean_N_closed,mean_N,mean_N_se,var_N_closed,var_N,var_N_se,overdispersion_closed,
/// mean_X_closed,mean_X,mean_X_se` at `moments.times`, which must be
/// multiples of `sim.grid_step`. Asymptotes that do not apply are `NaN`.
pub fn moments(cfg: &ExperimentConfig) -> Out {
    const CMD: &str = "moments";
    let p = cfg.params;
    let third = Third::from_config(cfg)?;
    let top = cfg.moments.times.iter().copied().fold(0.0, f64::max);
    let grid = Grid::new(cfg.sim.grid_step, top).map_err(core(CMD))?;
    let idx = cfg
        .moments
        .times
        .iter()
        .map(|&t| {
            grid.index_of(t)
                .ok_or_else(|| RunError::Config(format!("moments time {t} is not a multiple of sim.grid_step")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let paths = simulate_paths(cfg, &grid, &third, CMD)?;
    let seed = cfg.sim.master_seed;
    let mut table = Table::new(&[
        "t",
        "U",
        "U_small",
        "U_large",
        "var_Y_large",
        "mean_Y",
        "mean_Y_se",
        "var_Y",
        "var_Y_se",
        "mean_N_closed",
        "mean_N",
        "mean_N_se",
        "var_N_closed",
        "var_N",
        "var_N_se",
        "overdispersion_closed",
        "mean_X_closed",
        "mean_X",
        "mean_X_se",
    ]);
    for (&t, &i) in cfg.moments.times.iter().zip(&idx) {
        let (ys, ns, xs) = (column(&paths, 0, i), column(&paths, 1, i), column(&paths, 2, i));
        let (my, vy) = (Estimate::mean_of(&ys, seed), Estimate::variance_of(&ys, seed));
        let (mn, vn) = (Estimate::mean_of(&ns, seed), Estimate::variance_of(&ns, seed));
        let mx = Estimate::mean_of(&xs, seed);
        let row = || -> mfrisk_core::Result<Vec<String>> {
            let opt = |r: mfrisk_core::Result<f64>| num(r.unwrap_or(f64::NAN));
            let var_n = mfpp_var(&p, t, vy.value)?;
            let mean_n = mfpp_mean(&p, t)?;
            Ok(vec![
                num(t),
                num(mean_inverse(&p, t)?),
                opt(mean_inverse_asymptotic(&p, t, Regime::Small)),
                opt(mean_inverse_asymptotic(&p, t, Regime::Large)),
                opt(var_inverse_asymptotic(&p, t)),
                num(my.value),
                num(my.std_error),
                num(vy.value),
                num(vy.std_error),
                num(mean_n),
                num(mn.value),
                num(mn.std_error),
                num(var_n),
                num(vn.value),
                num(vn.std_error),
                num(var_n - mean_n),
                num(third_moments(&p, &third, t, vy.value)?.0),
                num(mx.value),
                num(mx.std_error),
            ])
        };
        table.push(row().map_err(core(CMD))?);
    }
    Ok(vec![table.into_file("moments.csv", cfg)])
}

#[derive(Serialize)]
struct DistributionSummary {
    t: f64,
    method: PnMethod,
    n_max: usize,
    sum_p_n: f64,
    normalization_error: f64,
    max_cross_gap: f64,
}

/// `distribution.csv`: `n,p_n,p_n_laplace,p_n_convolution,cross_gap` for
/// `n = 0..=n_max` plus a final `sum` row (cross columns `NaN` beyond
/// `n_cross`); `interarrival.csv`: `t,density,cdf`; `pgf.csv`: `z,pgf`;
/// `compound.csv` (discrete claims only): `n,q_n`; `distribution.json`.
pub fn distribution(cfg: &ExperimentConfig) -> Out {
    const CMD: &str = "distribution";
    let p = cfg.params;
    let d = &cfg.distribution;
    let e = core(CMD);
    let mut table = Table::new(&["n", "p_n", "p_n_laplace", "p_n_convolution", "cross_gap"]);
    let mut total = 0.0;
    let mut max_gap = 0.0f64;
    for n in 0..=d.n_max {
        let pn = state_prob_pn(&p, n, d.t, d.method).map_err(&e)?;
        total += pn;
        let (a, b) = if n <= d.n_cross {
            (
                state_prob_pn(&p, n, d.t, PnMethod::Laplace).map_err(&e)?,
                state_prob_pn(&p, n, d.t, PnMethod::Convolution).map_err(&e)?,
            )
        } else {
            (f64::NAN, f64::NAN)
        };
        if n <= d.n_cross {
            max_gap = max_gap.max((a - b).abs());
        }
        table.push(vec![n.to_string(), num(pn), num(a), num(b), num((a - b).abs())]);
    }
    table.push(vec!["sum".into(), num(total), num(f64::NAN), num(f64::NAN), num(f64::NAN)]);

    let mut times = d.density_times.clone();
    times.sort_by(f64::total_cmp);
    let cdf = interarrival_cdf(&p, &times).map_err(&e)?;
    let mut inter = Table::new(&["t", "density", "cdf"]);
    for (&t, &f) in times.iter().zip(&cdf) {
        let dens = if t > 0.0 { interarrival_density(&p, t, DEFAULT_KMAX).map_err(&e)? } else { f64::INFINITY };
        inter.push(vec![num(t), num(dens), num(f)]);
    }

    let mut gen = Table::new(&["z", "pgf"]);
    for &z in &d.pgf_points {
        gen.push(vec![num(z), num(pgf(&p, z, d.t).map_err(&e)?)]);
    }

    let summary = DistributionSummary {
        t: d.t,
        method: d.method,
        n_max: d.n_max,
        sum_p_n: total,
        normalization_error: (total - 1.0).abs(),
        max_cross_gap: max_gap,
    };
    let mut files = vec![
        table.into_file("distribution.csv", cfg),
        inter.into_file("interarrival.csv", cfg),
        gen.into_file("pgf.csv", cfg),
    ];
    if let Some(ClaimModel::Discrete { law }) = &cfg.claims {
        let mut comp = Table::new(&["n", "q_n"]);
        for n in 0..=d.n_max {
            comp.push(vec![n.to_string(), num(compound_state_prob(&p, law, n, d.t).map_err(&e)?)]);
        }
        files.push(comp.into_file("compound.csv", cfg));
    }
    files.push(json_file("distribution.json", cfg, &summary)?);
    Ok(files)
}

#[derive(Serialize)]
struct RuinRow {
    method: &'static str,
    estimate: RuinEstimate,
}

/// `ruin.csv`: `method,probability,std_error,n_paths,horizon` for Monte
/// Carlo and the two sandwich bounds, Laplace inversion and the density
/// integral (exponential claims), and the asymptote (subexponential claims,
/// `std_error` `NaN`); `ruin.json` holds the same rows.
pub fn ruin(cfg: &ExperimentConfig) -> Out {
    const CMD: &str = "ruin";
    let e = core(CMD);
    let p = cfg.params;
    let risk = cfg.risk()?;
    let claims = cfg.claims()?;
    let c = match (risk.variant(), risk.c()) {
        (Variant::Mfrp2, Some(c)) => c,
        _ => return Err(RunError::Config("ruin needs an MFRP-II risk section (variant \"mfrp2\")".into())),
    };
    let t = cfg.sim.horizon;
    let sw = ruin_sandwich_mc(&p, &risk, claims, t, &ensemble(cfg)).map_err(&e)?;
    let bound = |est: Estimate| RuinEstimate {
        probability: est.value,
        std_error: est.std_error,
        n_paths: est.n_paths,
        horizon: t,
        method: RuinMethod::MonteCarlo,
    };
    let mut rows = vec![
        RuinRow { method: "monte_carlo", estimate: sw.ruin },
        RuinRow { method: "sandwich_lower", estimate: bound(sw.lower) },
        RuinRow { method: "sandwich_upper", estimate: bound(sw.upper) },
    ];
    if let ClaimModel::Exponential { rate } = claims {
        rows.push(RuinRow {
            method: "laplace_inversion",
            estimate: ruin_prob_lt(&p, risk.u(), c, *rate, t).map_err(&e)?,
        });
        rows.push(RuinRow {
            method: "density_integral",
            estimate: ruin_prob_density(&p, risk.u(), c, *rate, t, cfg.ruin.density_step, cfg.ruin.density_terms)
                .map_err(&e)?,
        });
    }
    if claims.is_subexponential() {
        rows.push(RuinRow {
            method: "asymptotic",
            estimate: RuinEstimate {
                probability: ruin_asymptotic_subexp(&p, claims, risk.u(), t).map_err(&e)?,
                std_error: f64::NAN,
                n_paths: 0,
                horizon: t,
                method: RuinMethod::Asymptotic,
            },
        });
    }
    let mut table = Table::new(&["method", "probability", "std_error", "n_paths", "horizon"]);
    for r in &rows {
        let x = &r.estimate;
        table.push(vec![r.method.into(), num(x.probability), num(x.std_error), x.n_paths.to_string(), num(x.horizon)]);
    }
    #[derive(Serialize)]
    struct Summary<'a> {
        rows: &'a [RuinRow],
        sandwich_ordered: bool,
    }
    let summary = Summary { rows: &rows, sandwich_ordered: sw.ordered() };
    Ok(vec![table.into_file("ruin.csv", cfg), json_file("ruin.json", cfg, &summary)?])
}

#[derive(Serialize)]
struct DependenceSummary {
    alpha2: f64,
    s: f64,
    delta: f64,
    var_y_s: Estimate,
    lrd_exponent: f64,
    lrd_target: f64,
    srd_exponent: f64,
    srd_target: f64,
}

/// `dependence.csv`: `t,lrd_correlation,srd_correlation` on log-spaced
/// times; `dependence.json`: fitted exponents next to `alpha2` and
/// `(3 - alpha2) / 2`. `Var Y(s)` comes from `sim.n_paths` simulated paths.
pub fn dependence(cfg: &ExperimentConfig) -> Out {
    const CMD: &str = "dependence";
    let e = core(CMD);
    let p = cfg.params;
    let risk = cfg.risk()?;
    let claims = cfg.claims()?;
    if risk.variant() == Variant::Mfrp2 {
        return Err(RunError::Config("dependence needs an MFRP risk section".into()));
    }
    let dep = &cfg.dependence;
    let s_grid = Grid::with_len(dep.s, 2).map_err(&e)?;
    let ys = try_map_paths(cfg.sim.n_paths, cfg.sim.master_seed, cfg.sim.workers, |_, rng| {
        sample_inverse_path(&p, cfg.sim.operational_step, &s_grid, rng).map(|y| y.values()[1])
    })
    .map_err(&e)?;
    let var_y_s = Estimate::variance_of(&ys, cfg.sim.master_seed);

    let ratio = (dep.t_max / dep.t_min).ln();
    let times: Vec<f64> =
        (0..dep.points).map(|i| dep.t_min * (ratio * i as f64 / (dep.points - 1) as f64).exp()).collect();
    let mut lrd = Vec::with_capacity(times.len());
    let mut srd = Vec::with_capacity(times.len());
    let mut table = Table::new(&["t", "lrd_correlation", "srd_correlation"]);
    for &t in &times {
        let a = lrd_correlation(&p, &risk, claims, dep.s, var_y_s.value, t).map_err(&e)?;
        let b = srd_correlation(&p, &risk, claims, dep.s, dep.delta, t).map_err(&e)?;
        lrd.push((t, a));
        srd.push((t, b));
        table.push(vec![num(t), num(a), num(b)]);
    }
    let a2 = p.alpha2();
    let summary = DependenceSummary {
        alpha2: a2,
        s: dep.s,
        delta: dep.delta,
        var_y_s,
        lrd_exponent: lrd_exponent(&lrd).map_err(&e)?,
        lrd_target: a2,
        srd_exponent: lrd_exponent(&srd).map_err(&e)?,
        srd_target: (3.0 - a2) / 2.0,
    };
    Ok(vec![table.into_file("dependence.csv", cfg), json_file("dependence.json", cfg, &summary)?])
}
