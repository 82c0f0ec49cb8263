use nalgebra::DVector;
use serde_json::{json, Map, Value};

use topowire::braid::{adiabatic_move, interferometry_demo, prepare_move_initial_state};
use topowire::gaussian::{build_damping_matrices, occupation, random_covariance, CovarianceMatrix};
use topowire::liouville::{
    bulk_purity_spectrum, damping_spectrum, evolve_sampled, steady_state, steady_state_residual, uniform_times,
    zero_modes, DEFAULT_ZERO_TOL,
};
use topowire::models::{analytic_zero_modes, localization_length, RampSchedule, WireKind, WireSpec};
use topowire::momentum::{chiral_axis, filling, steady_bloch, winding_number, xi_deformed, BzGrid, Family};
use topowire::oracle::{covariance_from_rho, FockLindblad, FockSpace};

use crate::config::{Initial, Kind, RunConfig};
use crate::emit::{Cell, Report};
use crate::error::CliError;

/// Tolerance reported by `oracle-compare`.
pub const ORACLE_TOL: f64 = 1e-7;

/// Chiral-axis tolerance used by `winding`.
pub const AXIS_TOL: f64 = 1e-9;

pub fn run(cfg: &RunConfig) -> Result<Report, CliError> {
    match cfg.command {
        "spectrum" => spectrum(cfg),
        "zero-modes" => zero_mode_profiles(cfg),
        "steady" => steady(cfg),
        "evolve" => evolve(cfg),
        "winding" => winding(cfg),
        "move" => adiabatic(cfg),
        "braid-demo" => braid_demo(cfg),
        "oracle-compare" => oracle_compare(cfg),
        other => Err(CliError::Config(format!("unknown command {other}"))),
    }
}

fn wire_spec(cfg: &RunConfig) -> Result<WireSpec<f64>, CliError> {
    let kind = match cfg.kind {
        Kind::Ideal => return Ok(WireSpec::ideal(cfg.n)?.with_kappa(cfg.kappa)?),
        Kind::Canonical => WireKind::Canonical,
        Kind::NonCanonical => WireKind::NonCanonical,
        Kind::Imperfect => return Err(CliError::Config("kind imperfect has no real-space model".into())),
    };
    let mut spec = WireSpec::new(kind, cfg.n, cfg.theta)?
        .with_phi(cfg.phi)?
        .with_kappa(cfg.kappa)?;
    if cfg.epsilon > 0.0 {
        let seed = cfg
            .seed
            .ok_or_else(|| CliError::Config("seed is required when epsilon > 0".into()))?;
        spec = spec.with_disorder(cfg.epsilon, seed)?;
    }
    Ok(spec)
}

fn floats(v: &[f64]) -> Value {
    Value::Array(v.iter().map(|&x| json!(x)).collect())
}

fn object(v: Value) -> Map<String, Value> {
    match v {
        Value::Object(m) => m,
        _ => unreachable!("json! object literal"),
    }
}

fn spectrum(cfg: &RunConfig) -> Result<Report, CliError> {
    let pair = wire_spec(cfg)?.damping()?;
    let spec = damping_spectrum(&pair);
    let ss = steady_state(&pair, None)?;
    let mut purity = bulk_purity_spectrum(&ss, &spec);
    purity.sort_by(|a, b| a.partial_cmp(b).expect("finite purity"));
    let mut bulk = purity.iter();
    let rows = spec
        .eigenvalues
        .iter()
        .enumerate()
        .map(|(i, &e)| {
            let zero = spec.zero_indices.contains(&i);
            vec![
                Cell::I(i as i64 + 1),
                Cell::F(e),
                Cell::F(2.0 * e),
                Cell::B(zero),
                if zero { Cell::Empty } else { bulk.next().map_or(Cell::Empty, |&p| Cell::F(p)) },
            ]
        })
        .collect();
    let rates: Vec<f64> = spec.eigenvalues.clone();
    let json = object(json!({
        "matrix_rates": floats(&rates),
        "quasiparticle_rates": floats(&rates.iter().map(|e| 2.0 * e).collect::<Vec<_>>()),
        "n_zero": spec.n_zero(),
        "gap": spec.gap(),
        "bulk_purity": floats(&purity),
    }));
    Ok(Report {
        header: &["index", "matrix_rate", "quasiparticle_rate", "zero_mode", "bulk_purity"],
        rows,
        json,
    })
}

fn projected(z: &nalgebra::DMatrix<f64>, a: usize) -> DVector<f64> {
    let mut e = DVector::zeros(z.nrows());
    e[a] = 1.0;
    let v = z * (z.transpose() * e);
    let n = v.norm();
    if n > 0.0 {
        v / n
    } else {
        v
    }
}

fn zero_mode_profiles(cfg: &RunConfig) -> Result<Report, CliError> {
    let spec = wire_spec(cfg)?;
    let z = zero_modes(&spec.damping()?, DEFAULT_ZERO_TOL)?;
    if z.ncols() == 0 {
        return Err(topowire::WireError::NoZeroModes.into());
    }
    let dim = 2 * cfg.n;
    let left = projected(&z, 0);
    let right = projected(&z, dim - 1);
    let analytic = analytic_zero_modes(&spec).ok();
    let mut rows = Vec::with_capacity(dim);
    for a in 0..dim {
        let (al, ar) = match &analytic {
            Some((l, r)) => (Cell::F(l[a].abs()), Cell::F(r[a].abs())),
            None => (Cell::Empty, Cell::Empty),
        };
        rows.push(vec![
            Cell::I(a as i64 + 1),
            Cell::I((a / 2) as i64 + 1),
            Cell::F(left[a].abs()),
            Cell::F(right[a].abs()),
            al,
            ar,
        ]);
    }
    let abs = |v: &DVector<f64>| v.iter().map(|x| x.abs()).collect::<Vec<_>>();
    let xi = match cfg.kind {
        Kind::Ideal => 0.0,
        _ => localization_length(cfg.theta),
    };
    let json = object(json!({
        "n_zero": z.ncols(),
        "localization_length": xi,
        "left": floats(&abs(&left)),
        "right": floats(&abs(&right)),
        "analytic_left": analytic.as_ref().map(|(l, _)| floats(&abs(l))),
        "analytic_right": analytic.as_ref().map(|(_, r)| floats(&abs(r))),
    }));
    Ok(Report {
        header: &["majorana", "site", "left", "right", "analytic_left", "analytic_right"],
        rows,
        json,
    })
}

fn steady(cfg: &RunConfig) -> Result<Report, CliError> {
    let pair = wire_spec(cfg)?.damping()?;
    let ss = steady_state(&pair, None)?;
    let g = ss.matrix();
    let dim = g.nrows();
    let mut rows = Vec::with_capacity(dim * dim);
    for a in 0..dim {
        for b in 0..dim {
            rows.push(vec![Cell::I(a as i64 + 1), Cell::I(b as i64 + 1), Cell::F(g[(a, b)])]);
        }
    }
    let matrix: Vec<Value> = (0..dim)
        .map(|a| floats(&(0..dim).map(|b| g[(a, b)]).collect::<Vec<_>>()))
        .collect();
    let purity = bulk_purity_spectrum(&ss, &damping_spectrum(&pair));
    let json = object(json!({
        "dim": dim,
        "gamma": matrix,
        "residual": steady_state_residual(&pair, &ss),
        "bulk_purity_max": purity.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    }));
    Ok(Report {
        header: &["a", "b", "gamma"],
        rows,
        json,
    })
}

fn evolve(cfg: &RunConfig) -> Result<Report, CliError> {
    let pair = wire_spec(cfg)?.damping()?;
    let g0 = match cfg.initial {
        Initial::Vacuum => CovarianceMatrix::vacuum(cfg.n),
        Initial::Mixed => CovarianceMatrix::maximally_mixed(cfg.n),
        Initial::Random => random_covariance(cfg.n, cfg.seed.unwrap_or(0)),
    };
    let target = steady_state(&pair, Some(&g0))?;
    let times = uniform_times(cfg.t, cfg.samples);
    let report = evolve_sampled(&g0, &pair, None, &times, cfg.dt)?;
    let dim = 2 * cfg.n;
    let mut cols: [Vec<f64>; 5] = Default::default();
    for (&t, g) in report.times.iter().zip(&report.states) {
        let mean = (1..=cfg.n).map(|j| occupation(g, j)).sum::<Result<f64, _>>()? / cfg.n as f64;
        let dist = (g.matrix() - target.matrix()).amax();
        let purity = g.matrix().iter().map(|x| x * x).sum::<f64>() / dim as f64;
        for (c, v) in cols.iter_mut().zip([t, mean, g.get(1, dim), dist, purity]) {
            c.push(v);
        }
    }
    let rows = (0..cols[0].len())
        .map(|i| cols.iter().map(|c| Cell::F(c[i])).collect())
        .collect();
    let json = object(json!({
        "steps": report.steps,
        "t": floats(&cols[0]),
        "mean_occupation": floats(&cols[1]),
        "edge_correlation": floats(&cols[2]),
        "steady_distance": floats(&cols[3]),
        "purity": floats(&cols[4]),
    }));
    Ok(Report {
        header: &["t", "mean_occupation", "edge_correlation", "steady_distance", "purity"],
        rows,
        json,
    })
}

fn winding(cfg: &RunConfig) -> Result<Report, CliError> {
    let grid = BzGrid::new(cfg.grid)?;
    let (family, theta) = match cfg.kind {
        Kind::Ideal => (Family::Canonical, std::f64::consts::FRAC_PI_4),
        Kind::Canonical => (Family::Canonical, cfg.theta),
        Kind::NonCanonical => (Family::NonCanonical, cfg.theta),
        Kind::Imperfect => (Family::Imperfect(cfg.epsilon), 0.0),
    };
    let phi = if cfg.kind == Kind::Canonical { cfg.phi } else { 0.0 };
    let field = steady_bloch(&xi_deformed(family, theta, phi, grid)?)?;
    let axis = chiral_axis(&field, AXIS_TOL)?;
    let w = winding_number(&field, &axis)?;
    let (nbar, per_k) = filling(&field);
    let full = field.full();
    let mut rows = Vec::with_capacity(grid.len());
    let mut ks = Vec::with_capacity(grid.len());
    let mut comps: [Vec<f64>; 4] = Default::default();
    for (j, n) in full.iter().enumerate() {
        let k: f64 = grid.k(j);
        ks.push(k);
        for (c, v) in comps.iter_mut().zip([n.x, n.y, n.z, n.norm()]) {
            c.push(v);
        }
        rows.push(vec![
            Cell::I(j as i64),
            Cell::F(k),
            Cell::F(n.x),
            Cell::F(n.y),
            Cell::F(n.z),
            Cell::F(n.norm()),
            Cell::F(per_k[j]),
        ]);
    }
    let json = object(json!({
        "nu": w.nu,
        "angle": w.angle,
        "line_integral": w.line_integral,
        "q_trace": w.q_trace,
        "residual": w.residual,
        "axis": floats(&[axis.a.x, axis.a.y, axis.a.z]),
        "axis_violation": axis.max_violation,
        "filling": nbar,
        "min_purity": comps[3].iter().copied().fold(f64::INFINITY, f64::min),
        "k": floats(&ks),
        "nx": floats(&comps[0]),
        "ny": floats(&comps[1]),
        "nz": floats(&comps[2]),
        "purity": floats(&comps[3]),
    }));
    Ok(Report {
        header: &["j", "k", "nx", "ny", "nz", "purity", "filling_k"],
        rows,
        json,
    })
}

fn adiabatic(cfg: &RunConfig) -> Result<Report, CliError> {
    let g0 = prepare_move_initial_state(cfg.n, cfg.kappa, cfg.correlation)?;
    let r = adiabatic_move(&g0, &RampSchedule::linear(cfg.t)?, cfg.kappa, cfg.dt)?;
    let opt = |x: Option<f64>| x.map_or(Cell::Empty, Cell::F);
    let rows = vec![vec![
        Cell::I(r.n_sites as i64),
        Cell::F(r.duration),
        Cell::F(r.kappa),
        Cell::F(r.dt),
        Cell::I(r.steps as i64),
        Cell::F(r.dephasing_integral),
        Cell::F(r.initial_correlation),
        Cell::F(r.final_correlation),
        Cell::F(r.predicted),
        opt(r.measured),
        opt(r.relative_error),
        Cell::B(r.too_fast),
    ]];
    let json = object(json!({
        "n_sites": r.n_sites,
        "duration": r.duration,
        "kappa": r.kappa,
        "dt": r.dt,
        "steps": r.steps,
        "dephasing_integral": r.dephasing_integral,
        "initial_correlation": r.initial_correlation,
        "final_correlation": r.final_correlation,
        "predicted": r.predicted,
        "measured": r.measured,
        "relative_error": r.relative_error,
        "too_fast": r.too_fast,
    }));
    Ok(Report {
        header: &[
            "n_sites",
            "duration",
            "kappa",
            "dt",
            "steps",
            "dephasing_integral",
            "initial_correlation",
            "final_correlation",
            "predicted",
            "measured",
            "relative_error",
            "too_fast",
        ],
        rows,
        json,
    })
}

fn braid_demo(cfg: &RunConfig) -> Result<Report, CliError> {
    let r = interferometry_demo::<f64>(cfg.braided)?;
    let json = object(json!({
        "braided": cfg.braided,
        "n1": r.n1,
        "n2": r.n2,
        "var1": r.var1,
        "var2": r.var2,
    }));
    Ok(Report {
        header: &["braided", "n1", "n2", "var1", "var2"],
        rows: vec![vec![
            Cell::B(cfg.braided),
            Cell::F(r.n1),
            Cell::F(r.n2),
            Cell::F(r.var1),
            Cell::F(r.var2),
        ]],
        json,
    })
}

fn oracle_compare(cfg: &RunConfig) -> Result<Report, CliError> {
    let spec = wire_spec(cfg)?;
    let n = spec.n_sites;
    let space = FockSpace::<f64>::new(n)?;
    let ops = spec.operators()?;
    let jumps = ops
        .iter()
        .map(|l| space.jump_from_majorana(l))
        .collect::<Result<Vec<_>, _>>()?;
    let rho0 = space.random_gaussian_state(cfg.seed.unwrap_or(0))?;
    let times = uniform_times(cfg.t, cfg.samples);
    let fock = FockLindblad::new(&jumps, spec.kappa, None)?.trajectory(&rho0, &times, cfg.dt)?;
    let pair = build_damping_matrices(n, &ops, spec.kappa)?;
    let gauss = evolve_sampled(&covariance_from_rho(&space, &rho0)?, &pair, None, &times, cfg.dt)?;
    let mut devs = Vec::with_capacity(times.len());
    for (r, g) in fock.iter().zip(&gauss.states) {
        devs.push((covariance_from_rho(&space, r)?.matrix() - g.matrix()).amax());
    }
    let worst = devs.iter().copied().fold(0.0, f64::max);
    let rows = times
        .iter()
        .zip(&devs)
        .map(|(&t, &d)| vec![Cell::F(t), Cell::F(d)])
        .collect();
    let json = object(json!({
        "n_sites": n,
        "tolerance": ORACLE_TOL,
        "max_deviation": worst,
        "agrees": worst < ORACLE_TOL,
        "t": floats(&times),
        "deviation": floats(&devs),
    }));
    Ok(Report {
        header: &["t", "max_deviation"],
        rows,
        json,
    })
}
