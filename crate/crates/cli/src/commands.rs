//! Command implementations.

use std::f64::consts::FRAC_PI_2;
use std::path::{Path, PathBuf};

use bellsim::chsh::{
    horodecki_bound, maximize_general, maximize_restricted, maximize_restricted_state,
    violation_threshold, BellResult, ChshSettings, MaximizeOptions, NoiseFamily,
};
use bellsim::counting::{child_seed, experiment_sweep, run_chsh, DetectorModel, Shots, SweepOptions};
use bellsim::source::p_of_tau;
use bellsim::state::{NoiseModel, BASIS_LABELS};
use bellsim::tomography::reconstruct;
use bellsim::{exec, DensityMatrix};
use serde_json::{json, Map, Value};

use crate::args::{AngleArgs, Command, Family, Format, GlobalArgs, StateArgs, TargetArgs};
use crate::config::{load_source, ResolvedSource};
use crate::error::{CliError, CliResult};
use crate::output::{emit, float_json, fmt_sig, json_bytes, Cell, Table};

const BETA_NOTE: &str = "beta = CHSH Bell value <A0B0>+<A0B1>+<A1B0>-<A1B1> (not the analyzer angle); angles in degrees";

pub fn dispatch(g: &GlobalArgs, cmd: &Command) -> CliResult<()> {
    match cmd {
        Command::BellMax { p_min, p_max, steps, state, shots } => {
            bell_max(g, *p_min, *p_max, *steps, state, *shots)
        }
        Command::DelaySweep { tau_min, tau_max, steps, shots, angles, efficiency, accidentals } => {
            delay_sweep(g, *tau_min, *tau_max, *steps, *shots, angles, *efficiency, *accidentals)
        }
        Command::Surface { p, resolution } => surface(g, *p, *resolution),
        Command::Simulate { target, state, angles, shots, repeats } => {
            simulate(g, target, state, angles, *shots, *repeats)
        }
        Command::Tomo { target, state, shots, coeffs } => tomo(g, target, state, *shots, coeffs.as_deref()),
        Command::Validate => validate(g),
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// `steps` evenly spaced points from `lo` to `hi` inclusive; one point is `lo`.
fn linspace(name: &str, lo: f64, hi: f64, steps: usize) -> CliResult<Vec<f64>> {
    if steps == 0 {
        return Err(usage(format!("{name} grid needs at least one step")));
    }
    if !(lo.is_finite() && hi.is_finite()) {
        return Err(usage(format!("{name} grid bounds must be finite")));
    }
    if steps > 1 && lo > hi {
        return Err(usage(format!("{name} grid is reversed: min {lo} > max {hi}")));
    }
    if steps == 1 {
        return Ok(vec![lo]);
    }
    let h = (hi - lo) / (steps - 1) as f64;
    Ok((0..steps).map(|i| if i + 1 == steps { hi } else { lo + h * i as f64 }).collect())
}

fn shots_of(g: &GlobalArgs, shots: u64) -> CliResult<Shots> {
    if g.exact {
        return Ok(Shots::Exact);
    }
    if shots == 0 {
        return Err(usage("--shots must be positive"));
    }
    Ok(Shots::Finite(shots))
}

fn shots_cell(s: Option<u64>) -> Cell {
    s.map_or_else(|| Cell::S("exact".into()), Cell::U)
}

fn noise_family(s: &StateArgs) -> NoiseFamily {
    match s.family {
        Family::Colored => NoiseFamily::Colored,
        Family::White => NoiseFamily::White,
        Family::Mixed => NoiseFamily::Mixed { w: s.w },
    }
}

fn family_label(s: &StateArgs) -> String {
    match s.family {
        Family::Colored => "colored".into(),
        Family::White => "white".into(),
        Family::Mixed => format!("mixed (w = {})", fmt_sig(s.w)),
    }
}

fn model_state(s: &StateArgs, p: f64) -> CliResult<DensityMatrix> {
    Ok(NoiseModel::new(p, noise_family(s).into())?.state()?)
}

/// Best restricted-family settings; the closed form is used for colored noise.
fn restricted_optimum(s: &StateArgs, p: f64, rho: &DensityMatrix, opts: &MaximizeOptions) -> CliResult<BellResult> {
    Ok(match s.family {
        Family::Colored => maximize_restricted(p, opts)?,
        _ => maximize_restricted_state(rho, opts),
    })
}

fn require_config(g: &GlobalArgs, what: &str) -> CliResult<ResolvedSource> {
    let path = g.config.as_deref().ok_or_else(|| usage(format!("{what} requires --config PATH")))?;
    Ok(load_source(path)?)
}

fn resolve_p(g: &GlobalArgs, t: &TargetArgs) -> CliResult<f64> {
    match (t.p, t.tau) {
        (Some(p), None) => Ok(p),
        (None, Some(tau)) => {
            let src = require_config(g, "--tau")?;
            Ok(p_of_tau(tau, &src.params)?)
        }
        _ => Err(usage("give exactly one of --p or --tau")),
    }
}

fn fixed_angles(a: &AngleArgs) -> Option<(f64, f64)> {
    Some((a.theta?.to_radians(), a.phi?.to_radians()))
}

fn restricted_deg(s: &ChshSettings) -> (f64, f64) {
    let [_, t, f, _] = s.angles();
    (t.to_degrees(), f.to_degrees())
}

/// Writes the main dataset and reports a summary on whichever stream is free.
fn finish(g: &GlobalArgs, table: &Table, summary: &str) -> CliResult<()> {
    let bytes = match g.format {
        Format::Csv => table.to_csv(),
        Format::Json => json_bytes(&table.to_json()),
    };
    write_out(g.out.as_deref(), &bytes)?;
    report(g, summary);
    Ok(())
}

fn write_out(path: Option<&Path>, bytes: &[u8]) -> CliResult<()> {
    emit(path, bytes).map_err(|e| CliError::io(path, e))
}

fn report(g: &GlobalArgs, summary: &str) {
    if g.quiet || summary.is_empty() {
        return;
    }
    if g.out.is_some() {
        println!("{summary}");
    } else {
        eprintln!("{summary}");
    }
}

fn bell_max(
    g: &GlobalArgs,
    p_min: f64,
    p_max: f64,
    steps: usize,
    state: &StateArgs,
    shots: Option<u64>,
) -> CliResult<()> {
    // Domain before shape, so out-of-range bounds report as numeric errors.
    for p in [p_min, p_max] {
        model_state(state, p)?;
    }
    let ps = linspace("p", p_min, p_max, steps)?;
    let shots = match shots {
        Some(n) => shots_of(g, n)?,
        None => Shots::Exact,
    };
    let threshold = violation_threshold(noise_family(state))?;
    let opts = MaximizeOptions::default();
    let rows = exec::map_range(ps.len(), |i| -> CliResult<Vec<Cell>> {
        let p = ps[i];
        let rho = model_state(state, p)?;
        let best = restricted_optimum(state, p, &rho, &opts)?;
        let general = maximize_general(&rho, &opts);
        let seed = child_seed(g.seed, i as u64);
        let m = run_chsh(&rho, &best.settings, shots, seed)?;
        let (theta, phi) = restricted_deg(&best.settings);
        Ok(vec![
            Cell::F(p),
            Cell::F(best.value),
            Cell::F(theta),
            Cell::F(phi),
            Cell::F(horodecki_bound(&rho)),
            Cell::F(best.value.abs()),
            Cell::F(general.value),
            threshold.map_or_else(|| Cell::S("none".into()), Cell::F),
            Cell::B(best.violation),
            Cell::F(m.beta_hat),
            Cell::F(m.std_err),
            shots_cell(shots.finite()),
            Cell::U(seed),
        ])
    });
    let mut table = Table::new(
        format!(
            "{BETA_NOTE}\nfamily = {}; beta_max over settings (0, theta, phi, phi - theta); \
             beta_general over all x-z settings; violation = |beta_max| > 2",
            family_label(state)
        ),
        &[
            "p",
            "beta_max",
            "theta_deg",
            "phi_deg",
            "horodecki_bound",
            "abs_beta_max",
            "beta_general",
            "p_threshold",
            "violation",
            "beta_measured",
            "beta_stderr",
            "shots",
            "seed",
        ],
    );
    for row in rows {
        table.push(row?);
    }
    let summary = match threshold {
        Some(t) => format!("{} rows; {} family violates CHSH for p > {}", ps.len(), family_label(state), fmt_sig(t)),
        None => format!("{} rows; {} family never violates CHSH", ps.len(), family_label(state)),
    };
    finish(g, &table, &summary)
}

#[allow(clippy::too_many_arguments)]
fn delay_sweep(
    g: &GlobalArgs,
    tau_min: Option<f64>,
    tau_max: Option<f64>,
    steps: usize,
    shots: u64,
    angles: &AngleArgs,
    efficiency: Option<f64>,
    accidentals: Option<f64>,
) -> CliResult<()> {
    let src = require_config(g, "delay-sweep")?;
    let taus = linspace(
        "tau",
        tau_min.unwrap_or(0.0),
        tau_max.unwrap_or(src.window_half_width_fs),
        steps,
    )?;
    let detector = match (efficiency, accidentals) {
        (None, None) => None,
        (e, a) => Some(DetectorModel::new(e.unwrap_or(1.0), a.unwrap_or(0.0))?),
    };
    let fixed = fixed_angles(angles);
    let opts = SweepOptions {
        shots: shots_of(g, shots)?,
        seed: g.seed,
        optimize: fixed.is_none(),
        fixed: fixed.unwrap_or((0.0, 0.0)),
        detector,
        maximize: MaximizeOptions::default(),
    };
    let records = experiment_sweep(&src.params, &taus, &opts)?;
    let mut table = Table::new(
        format!(
            "{BETA_NOTE}\nkappa = {}; beta_model is the noise-free value at the listed angles",
            fmt_sig(src.kappa)
        ),
        &[
            "tau_fs",
            "p_model",
            "beta_measured",
            "beta_stderr",
            "beta_model",
            "theta_deg",
            "phi_deg",
            "shots",
            "seed",
        ],
    );
    for r in &records {
        table.push(vec![
            Cell::F(r.tau_fs),
            Cell::F(r.p_model),
            Cell::F(r.beta_measured),
            Cell::F(r.beta_stderr),
            Cell::F(r.beta_model),
            Cell::F(r.theta_deg),
            Cell::F(r.phi_deg),
            shots_cell(r.shots),
            Cell::U(r.seed),
        ]);
    }
    let summary = format!("{} delays from {} fs to {} fs", taus.len(), fmt_sig(taus[0]), fmt_sig(taus[taus.len() - 1]));
    finish(g, &table, &summary)
}

fn surface(g: &GlobalArgs, p: f64, resolution: usize) -> CliResult<()> {
    if resolution < 2 {
        return Err(usage("--resolution must be at least 2"));
    }
    let grid = linspace("angle", -FRAC_PI_2, FRAC_PI_2, resolution)?;
    let s = bellsim::chsh::beta_surface(p, &grid, &grid)?;
    let deg: Vec<f64> = grid.iter().map(|a| a.to_degrees()).collect();
    let bytes = match g.format {
        Format::Csv => {
            let mut out = format!("# {BETA_NOTE}\n# p = {}; rows theta_deg, columns phi_deg\n", fmt_sig(p)).into_bytes();
            let mut w = csv::Writer::from_writer(&mut out);
            let header = std::iter::once("theta_deg/phi_deg".to_string()).chain(deg.iter().map(|d| fmt_sig(*d)));
            w.write_record(header).expect("write to memory");
            for (t, row) in deg.iter().zip(&s.values) {
                let rec = std::iter::once(fmt_sig(*t)).chain(row.iter().map(|v| fmt_sig(*v)));
                w.write_record(rec).expect("write to memory");
            }
            w.flush().expect("flush to memory");
            drop(w);
            out
        }
        Format::Json => json_bytes(&json!({
            "p": float_json(p),
            "theta_deg": deg.iter().map(|d| float_json(*d)).collect::<Vec<_>>(),
            "phi_deg": deg.iter().map(|d| float_json(*d)).collect::<Vec<_>>(),
            "beta": s.values.iter()
                .map(|row| row.iter().map(|v| float_json(*v)).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        })),
    };
    write_out(g.out.as_deref(), &bytes)?;
    let (best, t, f) = s.max();
    report(
        g,
        &format!(
            "grid max beta = {} at theta = {} deg, phi = {} deg",
            fmt_sig(best),
            fmt_sig(t.to_degrees()),
            fmt_sig(f.to_degrees())
        ),
    );
    Ok(())
}

fn simulate(
    g: &GlobalArgs,
    target: &TargetArgs,
    state: &StateArgs,
    angles: &AngleArgs,
    shots: u64,
    repeats: u64,
) -> CliResult<()> {
    if repeats == 0 {
        return Err(usage("--repeats must be positive"));
    }
    let p = resolve_p(g, target)?;
    let shots = shots_of(g, shots)?;
    let rho = model_state(state, p)?;
    let settings = match fixed_angles(angles) {
        Some((theta, phi)) => ChshSettings::Restricted { theta, phi },
        None => restricted_optimum(state, p, &rho, &MaximizeOptions::default())?.settings,
    };
    let model = bellsim::chsh::bell_value(&rho, &settings).value;
    let (theta, phi) = restricted_deg(&settings);
    let runs = exec::map_range(repeats as usize, |r| {
        let seed = child_seed(g.seed, r as u64);
        run_chsh(&rho, &settings, shots, seed).map(|m| (seed, m))
    });
    let mut table = Table::new(
        format!("{BETA_NOTE}\nfamily = {}; e_ij = correlation of settings (A_i, B_j)", family_label(state)),
        &[
            "run",
            "seed",
            "p",
            "theta_deg",
            "phi_deg",
            "beta_model",
            "beta_measured",
            "beta_stderr",
            "e00",
            "e01",
            "e10",
            "e11",
            "shots",
        ],
    );
    let mut total = 0.0;
    for (r, run) in runs.into_iter().enumerate() {
        let (seed, m) = run?;
        total += m.beta_hat;
        let mut row = vec![
            Cell::U(r as u64),
            Cell::U(seed),
            Cell::F(p),
            Cell::F(theta),
            Cell::F(phi),
            Cell::F(model),
            Cell::F(m.beta_hat),
            Cell::F(m.std_err),
        ];
        row.extend(m.correlations.iter().map(|c| Cell::F(c.e_hat)));
        row.push(shots_cell(shots.finite()));
        table.push(row);
    }
    let summary = format!(
        "mean beta over {repeats} run(s) = {} (model {})",
        fmt_sig(total / repeats as f64),
        fmt_sig(model)
    );
    finish(g, &table, &summary)
}

fn default_coeffs_path(out: &Path) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    out.with_file_name(format!("{stem}.coeffs.csv"))
}

fn tomo(g: &GlobalArgs, target: &TargetArgs, state: &StateArgs, shots: u64, coeffs: Option<&Path>) -> CliResult<()> {
    let p = resolve_p(g, target)?;
    let shots = shots_of(g, shots)?;
    let rho = model_state(state, p)?;
    let r = reconstruct(&rho, shots, g.seed)?;

    let m = r.rho_hat.matrix();
    let part = |f: fn(&bellsim::state::C64) -> f64| -> Vec<Vec<Value>> {
        (0..4).map(|i| (0..4).map(|j| float_json(f(&m[(i, j)]))).collect()).collect()
    };
    let mut doc = Map::new();
    doc.insert("family".into(), Value::from(family_label(state)));
    doc.insert("p".into(), float_json(p));
    doc.insert("shots_per_basis".into(), r.shots.map_or(Value::from("exact"), Value::from));
    doc.insert("seed".into(), Value::from(r.seed));
    doc.insert("fidelity".into(), float_json(r.fidelity));
    doc.insert("fitted_p".into(), float_json(r.fitted_p));
    doc.insert("fidelity_to_fit".into(), float_json(r.fidelity_to_fit));
    doc.insert("purity".into(), float_json(r.purity));
    doc.insert("min_eig_raw".into(), float_json(r.min_eig_raw));
    doc.insert(
        "rho_hat".into(),
        json!({ "basis": BASIS_LABELS, "re": part(|z| z.re), "im": part(|z| z.im) }),
    );
    write_out(g.out.as_deref(), &json_bytes(&Value::Object(doc)))?;

    let coeff_path = coeffs.map(Path::to_path_buf).or_else(|| g.out.as_deref().map(default_coeffs_path));
    if let Some(path) = &coeff_path {
        const PAULI: [&str; 4] = ["I", "X", "Y", "Z"];
        let mut t = Table::new(
            "c_ij = Tr(rho sigma_i (x) sigma_j) of the linear-inversion estimate; rows qubit A, columns qubit B",
            &["pauli_a/pauli_b", "I", "X", "Y", "Z"],
        );
        for (label, row) in PAULI.iter().zip(&r.coefficients) {
            let mut cells = vec![Cell::S(label.to_string())];
            cells.extend(row.iter().map(|c| Cell::F(*c)));
            t.push(cells);
        }
        write_out(Some(path), &t.to_csv())?;
    }
    report(
        g,
        &format!(
            "fidelity {} (purity {}, fitted p {}, raw min eigenvalue {})",
            fmt_sig(r.fidelity),
            fmt_sig(r.purity),
            fmt_sig(r.fitted_p),
            fmt_sig(r.min_eig_raw)
        ),
    );
    Ok(())
}

fn validate(g: &GlobalArgs) -> CliResult<()> {
    use bellsim::source::PumpSpread;
    let src = require_config(g, "validate")?;
    let origin = |key: &str| {
        if src.defaults_used.iter().any(|d| d.starts_with(key)) {
            "default"
        } else {
            "config"
        }
    };
    let mut t = Table::new(
        format!("resolved source parameters from {}", g.config.as_deref().expect("checked").display()),
        &["parameter", "value", "origin"],
    );
    let mut row = |name: &'static str, v: f64, o: &str| {
        t.push(vec![Cell::S(name.into()), Cell::F(v), Cell::S(o.into())]);
    };
    let p = &src.params;
    row("crystal_length_mm", p.crystal_length_mm, origin("crystal_length_mm"));
    row("d_g_fs_per_mm", p.d_g_fs_per_mm, "config");
    match p.pump {
        PumpSpread::Bandwidth { lambda_p_fs_per_mm, sigma_p_rad_per_fs } => {
            row("lambda_p_fs_per_mm", lambda_p_fs_per_mm, "config");
            row("sigma_p_rad_per_fs", sigma_p_rad_per_fs, origin("sigma_p_rad_per_fs"));
            row("kappa", src.kappa, "derived");
        }
        PumpSpread::Kappa(k) => row("kappa", k, "config"),
    }
    row("delay_scale_fs", p.delay_scale_fs(), "derived");
    row("window_half_width_fs", src.window_half_width_fs, "derived");
    finish(g, &t, "config ok")
}
