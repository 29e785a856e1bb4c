use std::fmt::Write as _;
use std::path::Path;

use rigidnet::ais::algorithm1_minimal_gais;
use rigidnet::formation::{self, FormationConfig, FormationTrajectory, TargetFormation};
use rigidnet::localization::{self, LocalizationConfig, LocalizationTrajectory, SensorNetwork};
use rigidnet::numerics::SeededRng;
use rigidnet::rigidity::{self, Framework};
use rigidnet::Error;
use serde_json::json;

use crate::schema::{self, FormationFile, FrameworkFile, LocalizeFile, SCHEMA_VERSION};
use crate::{Cli, CliError, Command, Output, RandKind, SimArgs};

const FRAMEWORK_KINDS: &[&str] = &["analyze", "gais", "randgen"];

pub fn run(cli: &Cli) -> Result<Output, CliError> {
    match &cli.command {
        Command::Analyze {
            input,
            generic,
            trials,
        } => analyze(cli, input, *generic, *trials),
        Command::Gais { input } => gais(cli, input),
        Command::Localize { input, sim } => localize(cli, input, sim),
        Command::Formation { input, sim } => formation(cli, input, sim),
        Command::Randgen { kind, n } => randgen(cli, *kind, *n),
    }
}

fn check_tolerance(cli: &Cli) -> Result<(), CliError> {
    if !(cli.tolerance > 0.0 && cli.tolerance < 1.0) {
        return Err(CliError::Input(format!(
            "tolerance must lie in (0, 1), got {}",
            cli.tolerance
        )));
    }
    Ok(())
}

fn load_framework(path: &Path) -> Result<FrameworkFile, CliError> {
    let f: FrameworkFile = schema::read(path)?;
    schema::check_header(f.schema_version, f.kind.as_deref(), FRAMEWORK_KINDS)?;
    Ok(f)
}

fn positioned(f: &FrameworkFile) -> Result<Framework, CliError> {
    let p = f
        .positions
        .as_ref()
        .ok_or_else(|| CliError::Input("positions are required".into()))?;
    schema::framework(f.n, &f.edges, p)
}

fn analyze(cli: &Cli, input: &Path, generic: bool, trials: usize) -> Result<Output, CliError> {
    check_tolerance(cli)?;
    let f = load_framework(input)?;
    let g = schema::graph(f.n, &f.edges)?;
    let is_laman = rigidity::is_laman(&g);
    if generic {
        if trials == 0 {
            return Err(CliError::Input("trials must be positive".into()));
        }
        let v = rigidity::generic_verdict(&g, trials, cli.seed)?;
        let summary = format!(
            "generic: ISAR on {}/{} samples, Laman spanning subgraph: {}",
            v.isar_count, trials, v.combinatorial
        );
        return Ok(Output {
            data: json!({
                "schema_version": SCHEMA_VERSION,
                "kind": "analyze",
                "is_laman": is_laman,
                "generic": v,
            }),
            summary,
        });
    }
    let fw = positioned(&f)?;
    let mut report = rigidity::analyze_with(&fw, cli.tolerance)?;
    report.seed = Some(cli.seed);
    let laman: Option<Vec<_>> = rigidity::contains_laman_spanning_subgraph(&g)
        .then(|| rigidity::extract_laman_spanning_subgraph(&fw))
        .transpose()?
        .map(|s| s.edges().collect());
    let summary = format!(
        "rank R_S {} of {}, ISAR {}, Laman {}",
        report.rank_signed_angle,
        (2 * fw.n()).saturating_sub(4),
        report.is_isar,
        is_laman
    );
    Ok(Output {
        data: json!({
            "schema_version": SCHEMA_VERSION,
            "kind": "analyze",
            "report": report,
            "is_laman": is_laman,
            "laman_subgraph": laman,
        }),
        summary,
    })
}

fn require_isar(fw: &Framework, tol: f64) -> Result<(), CliError> {
    let r = rigidity::analyze_with(fw, tol)?;
    if !r.is_isar {
        return Err(Error::NotIsar {
            rank: r.rank_signed_angle,
            expected: (2 * fw.n()).saturating_sub(4),
        }
        .into());
    }
    Ok(())
}

fn gais(cli: &Cli, input: &Path) -> Result<Output, CliError> {
    check_tolerance(cli)?;
    let fw = positioned(&load_framework(input)?)?;
    require_isar(&fw, cli.tolerance)?;
    let g = algorithm1_minimal_gais(&fw)?;
    let summary = format!(
        "{} triples, angle connected {}, restricted rank {}",
        g.size, g.angle_connected, g.restricted_rank
    );
    let mut data = serde_json::to_value(g.to_json()).map_err(|e| CliError::Io(e.to_string()))?;
    data["schema_version"] = json!(SCHEMA_VERSION);
    data["kind"] = json!("gais");
    Ok(Output { data, summary })
}

fn positive(name: &str, v: Option<f64>) -> Result<Option<f64>, CliError> {
    match v {
        Some(x) if !(x > 0.0 && x.is_finite()) => {
            Err(CliError::Input(format!("{name} must be positive, got {x}")))
        }
        other => Ok(other),
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn fit_json(fit: rigidnet::Result<rigidnet::numerics::FitResult>) -> serde_json::Value {
    match fit {
        Ok(f) => json!({ "slope": f.slope, "r_squared": f.r_squared, "points": f.points }),
        Err(_) => serde_json::Value::Null,
    }
}

fn localize(cli: &Cli, input: &Path, sim: &SimArgs) -> Result<Output, CliError> {
    let f: LocalizeFile = schema::read(input)?;
    schema::check_header(f.schema_version, f.kind.as_deref(), &["localize"])?;
    let fw = schema::framework(f.n, &f.edges, &f.positions)?;
    let net = SensorNetwork::new(fw, f.anchors.iter().copied())?;
    let defaults = LocalizationConfig::default();
    let config = LocalizationConfig {
        seed: cli.seed,
        step: positive("step", sim.step.or(f.step))?.unwrap_or(defaults.step),
        horizon: positive("horizon", sim.horizon.or(f.horizon))?.unwrap_or(defaults.horizon),
        sample_every: sim
            .sample_every
            .or(f.sample_every)
            .unwrap_or(defaults.sample_every),
        bypass_gate: false,
    };
    if !localization::check_localizable(&net) {
        return Err(Error::NotLocalizable(if net.anchors().len() < 2 {
            format!(
                "{} anchor(s); with fewer than two anchors the network can be rotated about an anchor without changing any signed angle",
                net.anchors().len()
            )
        } else {
            "framework is not infinitesimally signed-angle rigid".into()
        })
        .into());
    }
    let gais = match &f.triples {
        Some(t) => schema::triples(net.framework().graph(), t)?,
        None => localization::prepare_gais(&net)?,
    };
    let traj = localization::simulate_localization(&net, &gais, &config)?;
    if let Some(p) = &sim.out_csv {
        write_file(p, &localization_csv(&traj))?;
    }
    if let Some(p) = &sim.out_state {
        let state = json!({ "schema_version": SCHEMA_VERSION, "kind": "localize-state", "state": traj.final_state });
        write_file(p, &format!("{state:#}\n"))?;
    }
    let loc_fit = traj.location_fit(sim.tail_fraction);
    let bear_fit = traj.bearing_fit(sim.tail_fraction);
    let converging =
        matches!(&loc_fit, Ok(f) if f.slope < 0.0) || traj.final_location_error() <= 1e-12;
    let summary = format!(
        "t = {}: location error {:.3e}, bearing error {:.3e}, location rate {}",
        config.horizon,
        traj.final_location_error(),
        traj.final_bearing_error(),
        loc_fit
            .as_ref()
            .map(|f| format!("{:.4}", f.slope))
            .unwrap_or_else(|_| "n/a".into())
    );
    Ok(Output {
        data: json!({
            "schema_version": SCHEMA_VERSION,
            "kind": "localize",
            "seed": cli.seed,
            "step": config.step,
            "horizon": config.horizon,
            "triples": gais.iter().collect::<Vec<_>>(),
            "initial_location_error": traj.location_error[0],
            "initial_bearing_error": traj.bearing_error[0],
            "final_location_error": traj.final_location_error(),
            "final_bearing_error": traj.final_bearing_error(),
            "location_fit": fit_json(loc_fit),
            "bearing_fit": fit_json(bear_fit),
            "converging": converging,
        }),
        summary,
    })
}

fn localization_csv(traj: &LocalizationTrajectory) -> String {
    let mut s = format!("# schema_version={SCHEMA_VERSION}\nt,location_error,bearing_error\n");
    for ((t, a), b) in traj
        .times
        .iter()
        .zip(&traj.location_error)
        .zip(&traj.bearing_error)
    {
        let _ = writeln!(s, "{t},{a:e},{b:e}");
    }
    s
}

fn formation(cli: &Cli, input: &Path, sim: &SimArgs) -> Result<Output, CliError> {
    let f: FormationFile = schema::read(input)?;
    schema::check_header(f.schema_version, f.kind.as_deref(), &["formation"])?;
    let fw = schema::framework(f.n, &f.edges, &f.positions)?;
    let target = TargetFormation::new(fw)?;
    let defaults = FormationConfig::default();
    let config = FormationConfig {
        seed: cli.seed,
        step: positive("step", sim.step.or(f.step))?.unwrap_or(defaults.step),
        horizon: positive("horizon", sim.horizon.or(f.horizon))?.unwrap_or(defaults.horizon),
        sample_every: sim
            .sample_every
            .or(f.sample_every)
            .unwrap_or(defaults.sample_every),
        init_box: f.init_box.unwrap_or(defaults.init_box),
        init_attitude_range: f
            .init_attitude_range
            .unwrap_or(defaults.init_attitude_range),
    };
    let traj = match &f.initial {
        Some(agents) => formation::simulate_formation_from(&target, agents, &config)?,
        None => formation::simulate_formation(&target, &config)?,
    };
    if let Some(p) = &sim.out_csv {
        write_file(p, &formation_csv(&traj))?;
    }
    if let Some(p) = &sim.out_state {
        let state = json!({ "schema_version": SCHEMA_VERSION, "kind": "formation-state", "agents": traj.final_agents() });
        write_file(p, &format!("{state:#}\n"))?;
    }
    if !cli.quiet {
        for w in &traj.warnings {
            eprintln!("warning: {w}");
        }
    }
    let angle_fit = traj.angle_fit(sim.tail_fraction);
    let mut summary = format!(
        "t = {}: angle error {:.3e}, attitude error {:.3e}",
        config.horizon,
        traj.final_angle_error(),
        traj.final_attitude_error()
    );
    if traj.reversed {
        summary.push_str(", REVERSED equilibrium");
    }
    Ok(Output {
        data: json!({
            "schema_version": SCHEMA_VERSION,
            "kind": "formation",
            "seed": cli.seed,
            "step": config.step,
            "horizon": config.horizon,
            "gais": target.gais().iter().collect::<Vec<_>>(),
            "final_angle_error": traj.final_angle_error(),
            "final_attitude_error": traj.final_attitude_error(),
            "angle_fit": fit_json(angle_fit),
            "attitude_fit": fit_json(traj.attitude_fit(sim.tail_fraction)),
            "reversed": traj.reversed,
            "warnings": traj.warnings,
        }),
        summary,
    })
}

fn formation_csv(traj: &FormationTrajectory) -> String {
    let n = traj.positions.first().map_or(0, Vec::len);
    let mut s = format!("# schema_version={SCHEMA_VERSION}\nt");
    for i in 1..=n {
        let _ = write!(s, ",x_{i},y_{i},beta_{i}");
    }
    s.push_str(",angle_error,attitude_error\n");
    for k in 0..traj.times.len() {
        let _ = write!(s, "{}", traj.times[k]);
        for (p, b) in traj.positions[k].iter().zip(&traj.attitudes[k]) {
            let _ = write!(s, ",{},{},{}", p.x, p.y, b);
        }
        let _ = writeln!(s, ",{:e},{:e}", traj.angle_error[k], traj.attitude_error[k]);
    }
    s
}

fn randgen(cli: &Cli, kind: RandKind, n: usize) -> Result<Output, CliError> {
    if n < 3 {
        return Err(CliError::Input(format!("n must be at least 3, got {n}")));
    }
    let mut rng = SeededRng::new(cli.seed);
    let fw = match kind {
        RandKind::Laman => {
            let g = rigidity::random_laman_graph(n, &mut rng)?;
            rigidity::random_framework(g, &mut rng)?
        }
        RandKind::RandomIsar => rigidity::random_isar_laman_framework(n, &mut rng)?,
    };
    let summary = format!(
        "{} vertices, {} edges, seed {}",
        fw.n(),
        fw.graph().edge_count(),
        cli.seed
    );
    let data = serde_json::to_value(FrameworkFile::from_framework(&fw, "randgen"))
        .map_err(|e| CliError::Io(e.to_string()))?;
    Ok(Output { data, summary })
}
