use std::collections::BTreeMap;

use clap::Args;
use rgflow::cigar::{
    integrate_cigar, plateau_radius, ricci_cigar_profile, soliton_residual, sup_gap_to_ricci, CigarParams,
};
use rgflow::constant_curvature::{
    classify_regime, evolve_phi, extinction_time, phi_closed_form, phi_implicit_residual, ConstantCurvatureProblem,
};
use rgflow::curvature3d::{
    check_parabolicity, kn_local_homogeneity, sectional_from_ricci, solve_fixed_points_with_grid, DEFAULT_SEED_GRID,
};
use rgflow::homogeneous::{
    classify_asymptotics, evolve_homogeneous, phase_plane_scan, symmetric_metric, AsymptoticsClass, GeometryFamily,
    MilnorGeometry, PhaseGrid, DEFAULT_HORIZON,
};
use rgflow::ode::{IntegratorOptions, Termination};
use serde_json::Value;

use crate::output::{fmt_float, Sink};
use crate::svg::{line_plot, raster, Series};
use crate::{parse_family, CliError, CommonArgs};

type Params = BTreeMap<String, Value>;

fn params<const N: usize>(entries: [(&str, Value); N]) -> Params {
    entries.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

fn options(common: &CommonArgs) -> Result<IntegratorOptions, CliError> {
    let opts = IntegratorOptions::with_tolerances(common.rel_tol, common.abs_tol);
    opts.validate()?;
    Ok(opts)
}

fn sink(common: &CommonArgs, command: &str) -> Result<Sink, CliError> {
    Ok(Sink::new(
        &common.out_dir,
        command,
        common.csv,
        common.svg,
        common.manifest.clone(),
    )?)
}

fn finish(sink: Sink, parameters: Params, common: &CommonArgs) -> Result<(), CliError> {
    let path = sink.finish(parameters, common.rel_tol, common.abs_tol)?;
    println!("manifest: {}", path.display());
    Ok(())
}

#[derive(Args, Debug)]
pub struct ConstantCurvatureArgs {
    /// Sectional curvature of the initial metric.
    #[arg(long = "K", visible_alias = "k")]
    pub k: f64,
    /// Dimension.
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    /// Coupling.
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    /// End of the integration window.
    #[arg(long, default_value_t = 10.0)]
    pub t_end: f64,
    #[command(flatten)]
    pub common: CommonArgs,
}

pub fn constant_curvature(args: &ConstantCurvatureArgs) -> Result<(), CliError> {
    let opts = options(&args.common)?;
    if !(args.t_end > 0.0 && args.t_end.is_finite()) {
        return Err(CliError::Invalid(format!("t-end must be positive, got {}", args.t_end)));
    }
    let prob = ConstantCurvatureProblem::new(args.k, args.alpha, args.n)?;
    let regime = classify_regime(args.k, prob.params);
    let traj = evolve_phi(&prob, args.t_end, &opts)?;
    if traj.termination == Termination::StepSizeUnderflow {
        return Err(CliError::Failure(format!(
            "step size underflow at t = {}",
            traj.final_time()
        )));
    }

    let closed: Vec<f64> = traj
        .times
        .iter()
        .map(|t| phi_closed_form(*t, &prob).unwrap_or(f64::NAN))
        .collect();
    let rows: Vec<Vec<String>> = traj
        .times
        .iter()
        .zip(&traj.states)
        .zip(&closed)
        .map(|((t, y), cf)| {
            let residual = phi_implicit_residual(y[0], *t, &prob).unwrap_or(f64::NAN);
            vec![
                fmt_float(*t),
                fmt_float(y[0]),
                fmt_float(*cf),
                fmt_float(residual),
                regime.name().to_string(),
            ]
        })
        .collect();

    println!("regime: {}", regime.name());
    match extinction_time(&prob) {
        Some(t) => println!("extinction time: {}", fmt_float(t)),
        None => println!("extinction time: none"),
    }
    if let Some(t) = traj.event_time("extinction") {
        println!("integrated extinction: {}", fmt_float(t));
    }

    let mut sink = sink(&args.common, "constant-curvature")?;
    sink.write_csv(&["t", "phi", "phi_closed_form", "implicit_residual", "regime"], &rows)?;
    let phi = traj.component(0);
    sink.write_svg(&line_plot(
        &format!("scale factor, K = {}, n = {}, alpha = {}", args.k, args.n, args.alpha),
        "t",
        "phi",
        &[
            Series {
                label: "integrated",
                xs: &traj.times,
                ys: &phi,
            },
            Series {
                label: "closed form",
                xs: &traj.times,
                ys: &closed,
            },
        ],
    ))?;
    finish(
        sink,
        params([
            ("K", args.k.into()),
            ("n", args.n.into()),
            ("alpha", args.alpha.into()),
            ("t_end", args.t_end.into()),
        ]),
        &args.common,
    )
}

#[derive(Args, Debug)]
pub struct FixedPointsArgs {
    /// Coupling; must be non-zero.
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    /// Newton seeds per axis.
    #[arg(long, default_value_t = DEFAULT_SEED_GRID)]
    pub seed_grid: usize,
    #[command(flatten)]
    pub common: CommonArgs,
}

pub fn fixed_points(args: &FixedPointsArgs) -> Result<(), CliError> {
    options(&args.common)?;
    let points = solve_fixed_points_with_grid(args.alpha, args.seed_grid)?;
    let mut rows = Vec::new();
    for p in &points {
        let r = p.ricci;
        let homogeneous = kn_local_homogeneity(r);
        let parabolic = check_parabolicity(sectional_from_ricci(r), args.alpha);
        println!(
            "{:<26} ({}, {}, {})  residual {:.2e}",
            p.class.name(),
            fmt_float(r.lambda),
            fmt_float(r.mu),
            fmt_float(r.nu),
            p.residual_norm
        );
        rows.push(vec![
            fmt_float(r.lambda),
            fmt_float(r.mu),
            fmt_float(r.nu),
            p.class.name().to_string(),
            fmt_float(p.residual_norm),
            homogeneous.to_string(),
            parabolic.to_string(),
        ]);
    }
    println!("families: {}", points.len());

    let mut sink = sink(&args.common, "fixed-points")?;
    sink.write_csv(
        &[
            "lambda",
            "mu",
            "nu",
            "class",
            "residual_norm",
            "locally_homogeneous",
            "parabolic",
        ],
        &rows,
    )?;
    let index: Vec<f64> = (0..points.len()).map(|i| i as f64).collect();
    let component = |f: fn(&rgflow::curvature3d::FixedPoint) -> f64| points.iter().map(f).collect::<Vec<f64>>();
    let (l, m, n) = (
        component(|p| p.ricci.lambda),
        component(|p| p.ricci.mu),
        component(|p| p.ricci.nu),
    );
    sink.write_svg(&line_plot(
        &format!("fixed points, alpha = {}", args.alpha),
        "family",
        "Ricci eigenvalue",
        &[
            Series {
                label: "lambda",
                xs: &index,
                ys: &l,
            },
            Series {
                label: "mu",
                xs: &index,
                ys: &m,
            },
            Series {
                label: "nu",
                xs: &index,
                ys: &n,
            },
        ],
    ))?;
    finish(
        sink,
        params([("alpha", args.alpha.into()), ("seed_grid", args.seed_grid.into())]),
        &args.common,
    )
}

#[derive(Args, Debug)]
pub struct CigarArgs {
    /// Soliton constant in `f' = c phi`.
    #[arg(long, default_value_t = 1.0)]
    pub c: f64,
    /// Coupling; zero gives the Ricci cigar.
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    /// Arclength cutoff; defaults to `20/sqrt(c)`.
    #[arg(long)]
    pub s_max: Option<f64>,
    /// Overlay the Ricci cigar and report the gap to it.
    #[arg(long)]
    pub compare: bool,
    #[command(flatten)]
    pub common: CommonArgs,
}

pub fn cigar(args: &CigarArgs) -> Result<(), CliError> {
    let opts = options(&args.common)?;
    let p = CigarParams::new(args.c, args.alpha)?;
    let s_max = args.s_max.unwrap_or(20.0 / args.c.sqrt());
    let profile = integrate_cigar(&p, s_max, &opts)?;
    let (psi, k_psi) = ricci_cigar_profile(args.c, &profile.s)?;

    let residual = soliton_residual(&profile, &p);
    println!("max soliton residual: {residual:.3e}");
    println!("plateau radius: {}", fmt_float(plateau_radius(&p)));
    println!("final curvature: {:.3e}", profile.k.last().copied().unwrap_or(f64::NAN));
    if args.compare {
        println!("sup gap to Ricci cigar: {:.3e}", sup_gap_to_ricci(&profile, args.c)?);
    }

    let rows: Vec<Vec<String>> = (0..profile.len())
        .map(|i| {
            [
                profile.s[i],
                profile.phi[i],
                profile.v[i],
                profile.k[i],
                profile.f[i],
                psi[i],
                k_psi[i],
            ]
            .map(fmt_float)
            .to_vec()
        })
        .collect();
    let mut sink = sink(&args.common, "cigar")?;
    sink.write_csv(&["s", "phi", "v", "K", "f", "psi", "K_psi"], &rows)?;
    let mut series = vec![Series {
        label: "phi",
        xs: &profile.s,
        ys: &profile.phi,
    }];
    if args.compare {
        series.push(Series {
            label: "psi (Ricci)",
            xs: &profile.s,
            ys: &psi,
        });
    }
    sink.write_svg(&line_plot(
        &format!("soliton profile, c = {}, alpha = {}", args.c, args.alpha),
        "s",
        "warping",
        &series,
    ))?;
    finish(
        sink,
        params([
            ("c", args.c.into()),
            ("alpha", args.alpha.into()),
            ("s_max", s_max.into()),
            ("compare", args.compare.into()),
        ]),
        &args.common,
    )
}

#[derive(Args, Debug)]
pub struct PhasePlaneArgs {
    #[arg(long, value_parser = parse_family)]
    pub family: GeometryFamily,
    #[arg(long, default_value_t = 0.01)]
    pub alpha: f64,
    /// Smallest initial coefficient on both axes.
    #[arg(long, default_value_t = 1e-3)]
    pub grid_min: f64,
    /// Largest initial coefficient on both axes.
    #[arg(long, default_value_t = 10.0)]
    pub grid_max: f64,
    /// Points along the distinguished coefficient.
    #[arg(long, default_value_t = 40)]
    pub nx: usize,
    /// Points along the shared coefficient.
    #[arg(long, default_value_t = 40)]
    pub ny: usize,
    /// Flows alive at this time count as immortal.
    #[arg(long, default_value_t = DEFAULT_HORIZON)]
    pub horizon: f64,
    #[command(flatten)]
    pub common: CommonArgs,
}

const CLASSES: [AsymptoticsClass; 5] = [
    AsymptoticsClass::FiniteTimeShrinker,
    AsymptoticsClass::ImmortalCigar,
    AsymptoticsClass::ImmortalPancake,
    AsymptoticsClass::Static,
    AsymptoticsClass::Indeterminate,
];

pub fn phase_plane(args: &PhasePlaneArgs) -> Result<(), CliError> {
    let opts = options(&args.common)?;
    if !(args.horizon > 0.0 && args.horizon.is_finite()) {
        return Err(CliError::Invalid(format!(
            "horizon must be positive, got {}",
            args.horizon
        )));
    }
    let grid = PhaseGrid::log_spaced(args.grid_min, args.grid_max, args.nx, args.ny)?;
    let scan = phase_plane_scan(args.family, args.alpha, &grid, args.horizon, &opts)?;
    for (class, count) in scan.counts() {
        println!("{}: {count}", class.name());
    }

    let mut rows = Vec::with_capacity(grid.len());
    for (iy, y) in grid.ys.iter().enumerate() {
        for (ix, x) in grid.xs.iter().enumerate() {
            let metric = symmetric_metric(args.family, *x, *y)?;
            let mut row = vec![fmt_float(*x), fmt_float(*y)];
            row.extend(metric.map(fmt_float));
            row.push(scan.classes[iy][ix].name().to_string());
            rows.push(row);
        }
    }
    let mut sink = sink(&args.common, "phase-plane")?;
    sink.write_csv(&["x", "y", "A0", "B0", "C0", "class"], &rows)?;
    let cells: Vec<Vec<usize>> = scan
        .classes
        .iter()
        .map(|row| {
            row.iter()
                .map(|c| CLASSES.iter().position(|k| k == c).unwrap_or(0))
                .collect()
        })
        .collect();
    let names = CLASSES.map(|c| c.name());
    sink.write_svg(&raster(
        &format!("{} fates, alpha = {}", args.family, args.alpha),
        "distinguished coefficient",
        "shared coefficient",
        &grid.xs,
        &grid.ys,
        &cells,
        &names,
    ))?;
    finish(
        sink,
        params([
            ("family", args.family.name().into()),
            ("alpha", args.alpha.into()),
            ("grid_min", args.grid_min.into()),
            ("grid_max", args.grid_max.into()),
            ("nx", args.nx.into()),
            ("ny", args.ny.into()),
            ("horizon", args.horizon.into()),
        ]),
        &args.common,
    )
}

#[derive(Args, Debug)]
pub struct HomogeneousArgs {
    #[arg(long, value_parser = parse_family)]
    pub family: GeometryFamily,
    #[arg(long = "A", visible_alias = "a", default_value_t = 1.0)]
    pub a: f64,
    #[arg(long = "B", visible_alias = "b", default_value_t = 1.0)]
    pub b: f64,
    #[arg(long = "C", visible_alias = "c", default_value_t = 1.0)]
    pub c: f64,
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = DEFAULT_HORIZON)]
    pub t_end: f64,
    #[command(flatten)]
    pub common: CommonArgs,
}

pub fn homogeneous(args: &HomogeneousArgs) -> Result<(), CliError> {
    let opts = options(&args.common)?;
    if !(args.t_end > 0.0 && args.t_end.is_finite()) {
        return Err(CliError::Invalid(format!("t-end must be positive, got {}", args.t_end)));
    }
    let geom = MilnorGeometry::new(args.family, [args.a, args.b, args.c])?;
    let traj = evolve_homogeneous(&geom, args.alpha, args.t_end, &opts)?;
    let class = classify_asymptotics(&traj);
    match &traj.termination {
        Termination::ReachedHorizon => println!("reached t = {}", fmt_float(traj.final_time())),
        Termination::Event { time, label } => println!("{label} at t = {}", fmt_float(*time)),
        Termination::StepSizeUnderflow => println!("step size underflow at t = {}", fmt_float(traj.final_time())),
    }
    println!("asymptotics: {}", class.name());

    let rows: Vec<Vec<String>> = traj
        .times
        .iter()
        .zip(&traj.states)
        .map(|(t, g)| vec![fmt_float(*t), fmt_float(g[0]), fmt_float(g[1]), fmt_float(g[2])])
        .collect();
    let mut sink = sink(&args.common, "homogeneous")?;
    sink.write_csv(&["t", "A", "B", "C"], &rows)?;
    let logs: Vec<Vec<f64>> = (0..3)
        .map(|i| traj.component(i).iter().map(|g| g.log10()).collect())
        .collect();
    sink.write_svg(&line_plot(
        &format!("{} metric, alpha = {}", args.family, args.alpha),
        "t",
        "log10 coefficient",
        &[
            Series {
                label: "A",
                xs: &traj.times,
                ys: &logs[0],
            },
            Series {
                label: "B",
                xs: &traj.times,
                ys: &logs[1],
            },
            Series {
                label: "C",
                xs: &traj.times,
                ys: &logs[2],
            },
        ],
    ))?;
    finish(
        sink,
        params([
            ("family", args.family.name().into()),
            ("A", args.a.into()),
            ("B", args.b.into()),
            ("C", args.c.into()),
            ("alpha", args.alpha.into()),
            ("t_end", args.t_end.into()),
        ]),
        &args.common,
    )
}
