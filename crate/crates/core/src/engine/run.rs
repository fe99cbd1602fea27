use log::{info, warn};
use serde::Serialize;

use crate::bath::spectral_separation_report;
use crate::channel::{
    gaussian_propagate, propagate_populations, quasiprobability_grid,
    quasiprobability_grid_gaussian, quasiprobability_grid_populations, GaussianPistonState, GridSpec,
    PistonChannel, QGrid,
};
use crate::error::{Error, Result};
use crate::joint::{
    build_liouvillian, max_stable_step, propagate_steps, qubit_steady_state, PropagateOptions,
};
use crate::passivity::{
    derivative, effective_temperature, ergotropy, ergotropy_diagonal,
    ladder_temperature_for_entropy, oscillator_hamiltonian, power_bound_series,
};
use crate::quantum::{entropy_of_spectrum, DensityMatrix, HilbertLayout};

use super::efficiency::{efficiency, reduced_heat_currents, Efficiency};
use super::scenario::{EngineMode, InitialState, Scenario};

/// Rows violating these are reported as warnings.
pub const SIGMA_FLOOR: f64 = -1e-8;

/// One sampled time of a run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Row {
    pub t_cycles: f64,
    /// nu <a^dag a>
    pub energy: f64,
    pub mean_occupation: f64,
    /// <(a^dag a)^2>
    pub second_moment: f64,
    /// |<a>|^2, the part a homodyne measurement sees.
    pub coherent_component: f64,
    pub w_max: f64,
    pub delta_w_max: f64,
    pub s_p: f64,
    pub t_p: f64,
    pub power_bound: f64,
    /// d W_max / dt, reported as the power output.
    pub power_output: f64,
    pub j_cold: Option<f64>,
    pub j_hot: Option<f64>,
    pub sigma: Option<f64>,
    pub eta: Option<f64>,
}

impl Row {
    /// |<a>|
    pub fn first_moment(&self) -> f64 {
        self.coherent_component.sqrt()
    }
}

/// How the reduced engine holds the piston state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Representation {
    /// Displaced thermal closed form.
    Gaussian,
    /// Number populations through the generating function.
    Diagonal,
}

#[derive(Clone, Debug, Serialize)]
pub struct LabeledGrid {
    pub label: String,
    pub t_cycles: f64,
    pub grid: QGrid,
}

/// Largest relative deviations of the full-joint run from the reduced run.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CrossValidation {
    /// On |<a>|.
    pub first_moment: f64,
    /// On <a^dag a>.
    pub second_moment: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub label: String,
    pub mode: EngineMode,
    pub initial: InitialState,
    pub duration_cycles: f64,
    pub omega0: f64,
    pub nu: f64,
    pub g: f64,
    pub fock_dim: usize,
    pub nu_plus: f64,
    pub nu_minus: f64,
    /// The reduced channel, when one ran.
    pub channel: Option<PistonChannel>,
    pub representation: Option<Representation>,
    /// Reduced rows when the reduced engine ran, joint rows otherwise.
    pub rows: Vec<Row>,
    /// Joint rows in `both` mode.
    pub joint_rows: Option<Vec<Row>>,
    pub qgrids: Vec<LabeledGrid>,
    pub cross_validation: Option<CrossValidation>,
    pub efficiency: Efficiency,
    /// Smallest eigenvalue of the joint state seen during the run.
    pub joint_min_eigenvalue: Option<f64>,
    pub warnings: Vec<String>,
}

impl Report {
    pub fn final_row(&self) -> &Row {
        self.rows.last().expect("reports have rows")
    }
}

/// Quantities of one sampled state before time derivatives are taken.
struct Sample {
    t_cycles: f64,
    mean: f64,
    second: f64,
    coherent: f64,
    w_max: f64,
    s_p: f64,
    t_p: f64,
    currents: Option<(f64, f64, Option<f64>)>,
}

fn gaussian_sample(gs: &GaussianPistonState, nu: f64, t_cycles: f64) -> Sample {
    let (a2, m) = (gs.alpha.norm_sqr(), gs.n_th);
    let mean = a2 + m;
    let var = m * (m + 1.0) + a2 * (2.0 * m + 1.0);
    Sample {
        t_cycles,
        mean,
        second: var + mean * mean,
        coherent: a2,
        w_max: gs.ergotropy(nu),
        s_p: gs.entropy(),
        t_p: gs.effective_temperature(nu),
        currents: None,
    }
}

fn diagonal_sample(pops: &[f64], nu: f64, t_cycles: f64) -> Result<Sample> {
    let (mut mean, mut second) = (0.0, 0.0);
    for (k, p) in pops.iter().enumerate() {
        let kf = k as f64;
        mean += kf * p;
        second += kf * kf * p;
    }
    let s_p = entropy_of_spectrum(pops);
    Ok(Sample {
        t_cycles,
        mean,
        second,
        coherent: 0.0,
        w_max: ergotropy_diagonal(pops, nu)?,
        s_p,
        t_p: ladder_temperature_for_entropy(s_p, nu, pops.len().max(2))?,
        currents: None,
    })
}

fn auto_grid(max_mean: f64) -> GridSpec {
    let spread = (max_mean + 1.0).sqrt();
    let alpha_max = (max_mean + 6.0 * spread + 1.0).sqrt() + 3.0;
    GridSpec {
        alpha_max,
        points: 81,
    }
}

fn snapshot_label(t_cycles: f64, duration: f64) -> String {
    if t_cycles == 0.0 {
        "initial".to_string()
    } else if t_cycles == duration {
        "final".to_string()
    } else {
        format!("c{t_cycles}")
    }
}

fn finish_rows(samples: Vec<Sample>, dt: f64, nu: f64) -> Result<Vec<Row>> {
    let energy: Vec<f64> = samples.iter().map(|s| nu * s.mean).collect();
    let t_p: Vec<f64> = samples.iter().map(|s| s.t_p).collect();
    let s_p: Vec<f64> = samples.iter().map(|s| s.s_p).collect();
    let w: Vec<f64> = samples.iter().map(|s| s.w_max).collect();
    let bound = power_bound_series(dt, &energy, &t_p, &s_p)?;
    let power = derivative(&w, dt)?;
    let w0 = w[0];
    Ok(samples
        .into_iter()
        .enumerate()
        .map(|(i, s)| Row {
            t_cycles: s.t_cycles,
            energy: energy[i],
            mean_occupation: s.mean,
            second_moment: s.second,
            coherent_component: s.coherent,
            w_max: s.w_max,
            delta_w_max: s.w_max - w0,
            s_p: s.s_p,
            t_p: s.t_p,
            power_bound: bound[i],
            power_output: power[i],
            j_cold: s.currents.map(|c| c.0),
            j_hot: s.currents.map(|c| c.1),
            sigma: s.currents.and_then(|c| c.2),
            eta: None,
        })
        .collect())
}

struct EngineRun {
    rows: Vec<Row>,
    grids: Vec<(f64, QGrid)>,
}

fn run_reduced(s: &Scenario, ch: &PistonChannel, repr: Representation) -> Result<EngineRun> {
    let nu = s.params.nu();
    let times = s.sample_cycles();
    // heat currents only mean something for the derived channel
    let qubit = match s.channel_override {
        None => Some(qubit_steady_state(&s.params)?),
        Some(_) => None,
    };
    let gs0 = s.initial.gaussian();
    let pops0 = match s.initial {
        InitialState::Fock { n } => {
            let mut p = vec![0.0; n + 1];
            p[n] = 1.0;
            p
        }
        _ => Vec::new(),
    };
    let evolve = |cycles: f64| -> Result<(Sample, Option<Vec<f64>>, Option<GaussianPistonState>)> {
        let t = s.params.time_of_cycles(cycles);
        match repr {
            Representation::Gaussian => {
                let gs = gaussian_propagate(gs0.expect("gaussian input"), ch, t);
                Ok((gaussian_sample(&gs, nu, cycles), None, Some(gs)))
            }
            Representation::Diagonal => {
                let pops = if t == 0.0 {
                    pops0.clone()
                } else {
                    propagate_populations(&pops0, ch, t)?
                };
                Ok((diagonal_sample(&pops, nu, cycles)?, Some(pops), None))
            }
        }
    };
    let mut samples = Vec::with_capacity(times.len());
    for &c in &times {
        let (mut sample, _, _) = evolve(c)?;
        if let Some(q) = qubit {
            let (jc, jh) = reduced_heat_currents(&s.params, q, sample.mean)?;
            sample.currents = Some((jc, jh, None));
        }
        samples.push(sample);
    }
    let max_mean = samples.iter().map(|x| x.mean).fold(0.0, f64::max);
    let spec = s.grid.unwrap_or_else(|| auto_grid(max_mean));
    let mut grids = Vec::new();
    for &c in &s.snapshots {
        let (_, pops, gs) = evolve(c)?;
        let grid = match (pops, gs) {
            (Some(p), _) => quasiprobability_grid_populations(&p, spec),
            (_, Some(g)) => quasiprobability_grid_gaussian(&g, spec),
            _ => unreachable!(),
        };
        grids.push((c, grid));
    }
    let dt = s.duration() / s.samples as f64;
    Ok(EngineRun {
        rows: finish_rows(samples, dt, nu)?,
        grids,
    })
}

fn run_joint(s: &Scenario, warnings: &mut Vec<String>) -> Result<(EngineRun, f64)> {
    let params = &s.params;
    let n = params.fock_dim();
    let nu = params.nu();
    let l = build_liouvillian(params)?;
    let layout = HilbertLayout::new(n)?;
    let ground = DensityMatrix::from_populations(&[1.0, 0.0]);
    let rho0 = layout.product_state(&ground, &s.initial.density(n)?)?;
    let t = s.duration();
    let per_sample = (t / (s.samples as f64 * max_stable_step(&l))).ceil().max(1.0) as usize;
    let steps = per_sample * s.samples;
    if steps > s.limits.max_steps {
        return Err(Error::InvalidInput(format!(
            "full-joint run needs {steps} RK4 steps, above the cap of {}",
            s.limits.max_steps
        )));
    }
    info!("{}: full-joint run, N = {n}, {steps} steps", s.label);
    let opts = PropagateOptions {
        record_every: per_sample,
        snapshot_every: per_sample,
        max_steps: s.limits.max_steps,
        ..PropagateOptions::default()
    };
    let traj = propagate_steps(&rho0, &l, t, steps, &opts)?;
    if traj.max_trace_error > 1e-8 {
        warnings.push(format!("joint trace drift reached {:.3e}", traj.max_trace_error));
    }
    let h = oscillator_hamiltonian(nu, n);
    let mut samples = Vec::with_capacity(traj.records.len());
    for (rec, snap) in traj.records.iter().zip(&traj.snapshots) {
        let pops = snap.state.populations();
        let second: f64 = pops.iter().enumerate().map(|(k, p)| (k * k) as f64 * p).sum();
        samples.push(Sample {
            t_cycles: rec.t_cycles,
            mean: rec.mean_n,
            second,
            coherent: rec.coherent_component(),
            w_max: ergotropy(&snap.state, &h)?,
            s_p: rec.entropy_p,
            t_p: effective_temperature(&snap.state, &h)?,
            currents: Some((rec.j_cold, rec.j_hot, Some(rec.sigma))),
        });
    }
    let max_mean = samples.iter().map(|x| x.mean).fold(0.0, f64::max);
    let spec = s.grid.unwrap_or_else(|| auto_grid(max_mean));
    let grids = s
        .snapshots
        .iter()
        .map(|&c| {
            let nearest = traj
                .snapshots
                .iter()
                .min_by(|a, b| (a.t_cycles - c).abs().total_cmp(&(b.t_cycles - c).abs()))
                .expect("snapshots recorded");
            (c, quasiprobability_grid(&nearest.state, spec))
        })
        .collect();
    let dt = t / s.samples as f64;
    Ok((
        EngineRun {
            rows: finish_rows(samples, dt, nu)?,
            grids,
        },
        traj.min_eigenvalue_seen,
    ))
}

fn relative_delta(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale < 1e-12 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

fn cross_validate(reduced: &[Row], joint: &[Row]) -> CrossValidation {
    let mut cv = CrossValidation {
        first_moment: 0.0,
        second_moment: 0.0,
    };
    for (r, j) in reduced.iter().zip(joint) {
        cv.first_moment = cv.first_moment.max(relative_delta(r.first_moment(), j.first_moment()));
        cv.second_moment = cv.second_moment.max(relative_delta(r.mean_occupation, j.mean_occupation));
    }
    cv
}

fn attach_efficiency(rows: &mut [Row], s: &Scenario) -> Efficiency {
    let eff = efficiency(rows, &s.params, s.initial.alpha().norm());
    for (row, eta) in rows.iter_mut().zip(&eff.eta) {
        row.eta = *eta;
    }
    eff
}

fn check_rows(rows: &[Row], tag: &str, warnings: &mut Vec<String>) {
    for r in rows {
        if let Some(sigma) = r.sigma.filter(|x| *x < SIGMA_FLOOR) {
            warnings.push(format!("{tag}: entropy production {sigma:.3e} at {} cycles", r.t_cycles));
        }
        if r.w_max < 0.0 {
            warnings.push(format!("{tag}: negative ergotropy at {} cycles", r.t_cycles));
        }
    }
}

fn run_inner(s: &Scenario) -> Result<Report> {
    s.validate()?;
    let params = &s.params;
    let mut warnings = Vec::new();
    let spectral = spectral_separation_report(params.baths(), params.omega0(), params.nu())?;
    if spectral.overlap_warning {
        warnings.push("bath spectra overlap at a sideband frequency".to_string());
    }

    let (channel, representation, reduced) = if s.mode.runs_reduced() {
        let ch = s.channel()?;
        let repr = match s.initial {
            InitialState::Fock { .. } => Representation::Diagonal,
            _ => Representation::Gaussian,
        };
        if !ch.is_completely_positive() {
            warnings.push(format!(
                "channel is not completely positive (gamma + D = {:.3e})",
                ch.kappa_down()
            ));
        }
        (Some(ch), Some(repr), Some(run_reduced(s, &ch, repr)?))
    } else {
        (None, None, None)
    };
    let (joint, joint_min_eigenvalue) = if s.mode.runs_joint() {
        let (run, min) = run_joint(s, &mut warnings)?;
        (Some(run), Some(min))
    } else {
        (None, None)
    };

    let cross_validation = match (&reduced, &joint) {
        (Some(r), Some(j)) => Some(cross_validate(&r.rows, &j.rows)),
        _ => None,
    };
    let (mut rows, grids, mut joint_rows) = match (reduced, joint) {
        (Some(r), j) => (r.rows, r.grids, j.map(|j| j.rows)),
        (None, Some(j)) => (j.rows, j.grids, None),
        (None, None) => unreachable!(),
    };
    let eff = match joint_rows.as_mut() {
        Some(jr) => {
            attach_efficiency(&mut rows, s);
            attach_efficiency(jr, s)
        }
        None => attach_efficiency(&mut rows, s),
    };
    check_rows(&rows, "rows", &mut warnings);
    if let Some(jr) = &joint_rows {
        check_rows(jr, "joint rows", &mut warnings);
    }
    for w in &warnings {
        warn!("{}: {w}", s.label);
    }
    let duration = s.duration_cycles;
    Ok(Report {
        label: s.label.clone(),
        mode: s.mode,
        initial: s.initial,
        duration_cycles: duration,
        omega0: params.omega0(),
        nu: params.nu(),
        g: params.g(),
        fock_dim: params.fock_dim(),
        nu_plus: params.nu_plus(),
        nu_minus: params.nu_minus(),
        channel,
        representation,
        rows,
        joint_rows,
        qgrids: grids
            .into_iter()
            .map(|(c, grid)| LabeledGrid {
                label: snapshot_label(c, duration),
                t_cycles: c,
                grid,
            })
            .collect(),
        cross_validation,
        efficiency: eff,
        joint_min_eigenvalue,
        warnings,
    })
}

/// Run one scenario. Errors carry the scenario label.
pub fn run_scenario(s: &Scenario) -> Result<Report> {
    run_inner(s).map_err(|e| e.in_scenario(&s.label))
}
