use log::{debug, warn};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quantum::{
    entropy_of_spectrum, partial_trace_qubit, CMatrix, DensityMatrix, Operator, C64, TAIL_TOL,
};

use super::liouvillian::{Harmonic, Liouvillian};
use super::thermo::{entropy_balance, heat_hamiltonian};

/// dt must not exceed this fraction of the inverse fastest rate.
pub const STEP_SAFETY: f64 = 0.05;
/// Minimum eigenvalue below which propagation aborts.
pub const POSITIVITY_ABORT: f64 = -1e-6;
/// Trace drift tolerated before it is reported.
pub const TRACE_DRIFT_TOL: f64 = 1e-8;

#[derive(Clone, Debug)]
pub struct PropagateOptions {
    /// Steps between recorded observables.
    pub record_every: usize,
    /// Steps between stored reduced piston states; 0 keeps none.
    pub snapshot_every: usize,
    /// Steps between positivity checks.
    pub positivity_every: usize,
    pub max_steps: usize,
    /// Rescale the trace back to 1 after every step.
    pub renormalize: bool,
}

impl Default for PropagateOptions {
    fn default() -> Self {
        Self {
            record_every: 1,
            snapshot_every: 0,
            positivity_every: 100,
            max_steps: 100_000,
            renormalize: false,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct JointRecord {
    pub time: f64,
    pub t_cycles: f64,
    /// nu <a^dag a> of the reduced dressed piston state.
    pub energy_p: f64,
    /// d<H_P>/dt from the generator.
    pub power_p: f64,
    pub energy_s: f64,
    pub excited_population: f64,
    pub mean_a_re: f64,
    pub mean_a_im: f64,
    pub mean_n: f64,
    pub entropy_p: f64,
    pub j_cold: f64,
    pub j_hot: f64,
    pub entropy_rate: f64,
    pub sigma: f64,
    pub trace: f64,
}

impl JointRecord {
    pub fn mean_a(&self) -> C64 {
        C64::new(self.mean_a_re, self.mean_a_im)
    }

    /// |<a>|^2
    pub fn coherent_component(&self) -> f64 {
        self.mean_a().norm_sqr()
    }
}

#[derive(Clone, Debug)]
pub struct PistonSnapshot {
    pub t_cycles: f64,
    pub state: DensityMatrix,
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    pub dt: f64,
    pub records: Vec<JointRecord>,
    pub snapshots: Vec<PistonSnapshot>,
    /// Joint dressed-frame state at the final time.
    pub final_state: DensityMatrix,
    pub max_trace_error: f64,
    /// Sum of |1 - tr| removed by renormalization.
    pub trace_correction: f64,
    pub min_eigenvalue_seen: f64,
}

/// Smallest step the generator's rates allow.
pub fn max_stable_step(l: &Liouvillian) -> f64 {
    let rate = l.rate_scale();
    if rate > 0.0 {
        STEP_SAFETY / rate
    } else {
        f64::INFINITY
    }
}

fn check_step(l: &Liouvillian, dt: f64) -> Result<()> {
    let limit = max_stable_step(l);
    if dt <= limit * (1.0 + 1e-12) {
        return Ok(());
    }
    let fast = l.rate_scale_of(&[Harmonic::Zero]);
    let slow = l.rate_scale_of(&[Harmonic::Upper, Harmonic::Lower]);
    let resolves_slow = slow == 0.0 || dt <= STEP_SAFETY / slow;
    if resolves_slow && fast > slow {
        warn!(
            "dt = {dt:.3e} resolves the sideband rate {slow:.3e} but not the qubit rate {fast:.3e}"
        );
    }
    Err(Error::InvalidInput(format!(
        "dt = {dt:.3e} exceeds {STEP_SAFETY}/rate = {limit:.3e} (qubit rate {fast:.3e}, sideband rate {slow:.3e})"
    )))
}

/// dst += w src
fn add_scaled(dst: &mut CMatrix, w: C64, src: &CMatrix) {
    for (d, s) in dst.as_mut_slice().iter_mut().zip(src.as_slice()) {
        *d += w * s;
    }
}

struct Observer {
    h_heat: Operator,
    n_diag: Vec<f64>,
    fock_dim: usize,
    nu: f64,
    omega0: f64,
}

impl Observer {
    fn new(l: &Liouvillian) -> Self {
        let fock_dim = l.params().fock_dim();
        Self {
            h_heat: heat_hamiltonian(l),
            n_diag: (0..fock_dim).map(|k| k as f64).collect(),
            fock_dim,
            nu: l.params().nu(),
            omega0: l.params().omega0(),
        }
    }

    fn record(&self, l: &Liouvillian, rho: &CMatrix, time: f64) -> Result<(JointRecord, DensityMatrix)> {
        let n = self.fock_dim;
        let state = DensityMatrix::from_matrix_unchecked(rho.clone());
        let piston = partial_trace_qubit(&state)?;
        let pops = piston.populations();
        let tail = pops[n - 1];
        if tail > TAIL_TOL {
            return Err(Error::Truncation {
                fock_dim: n,
                tail,
                required: n + n / 2,
            });
        }
        let mean_n: f64 = pops.iter().zip(&self.n_diag).map(|(p, k)| p * k).sum();
        let mut mean_a = C64::new(0.0, 0.0);
        for k in 1..n {
            mean_a += piston.get(k, k - 1) * (k as f64).sqrt();
        }
        let drho = l.apply(rho);
        let mut dn = 0.0;
        for q in 0..2 {
            for k in 0..n {
                dn += drho[(q * n + k, q * n + k)].re * k as f64;
            }
        }
        let excited: f64 = (0..n).map(|k| rho[(n + k, n + k)].re).sum();
        let bal = entropy_balance(&state, &drho, l, &self.h_heat);
        let record = JointRecord {
            time,
            t_cycles: l.params().cycles(time),
            energy_p: self.nu * mean_n,
            power_p: self.nu * dn,
            energy_s: self.omega0 * (excited - 0.5),
            excited_population: excited,
            mean_a_re: mean_a.re,
            mean_a_im: mean_a.im,
            mean_n,
            entropy_p: entropy_of_spectrum(&piston.eigenvalues()),
            j_cold: bal.j_cold,
            j_hot: bal.j_hot,
            entropy_rate: bal.entropy_rate,
            sigma: bal.sigma,
            trace: rho.trace().re,
        };
        Ok((record, piston))
    }
}

/// Fixed-step RK4 integration of d rho/dt = L rho for a dressed-frame
/// joint state over [0, t_final].
///
/// The step actually used is t_final / ceil(t_final / dt).
pub fn propagate(
    rho0: &DensityMatrix,
    l: &Liouvillian,
    t_final: f64,
    dt: f64,
    opts: &PropagateOptions,
) -> Result<Trajectory> {
    if !(t_final > 0.0 && dt > 0.0 && t_final.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "need t_final > 0 and dt > 0, got {t_final}, {dt}"
        )));
    }
    check_step(l, dt)?;
    propagate_steps(rho0, l, t_final, (t_final / dt).ceil() as usize, opts)
}

/// As [`propagate`] with the number of equal steps given directly.
pub fn propagate_steps(
    rho0: &DensityMatrix,
    l: &Liouvillian,
    t_final: f64,
    steps: usize,
    opts: &PropagateOptions,
) -> Result<Trajectory> {
    if rho0.dim() != l.dim() {
        return Err(Error::DimensionMismatch {
            expected: l.dim(),
            got: rho0.dim(),
        });
    }
    if !(t_final > 0.0 && t_final.is_finite() && steps > 0) {
        return Err(Error::InvalidInput(format!(
            "need t_final > 0 and steps > 0, got {t_final}, {steps}"
        )));
    }
    if steps > opts.max_steps {
        return Err(Error::InvalidInput(format!(
            "{steps} steps exceed the cap of {}",
            opts.max_steps
        )));
    }
    let h = t_final / steps as f64;
    check_step(l, h)?;
    let record_every = opts.record_every.max(1);
    let check_every = opts.positivity_every.max(1);
    debug!("propagating {steps} RK4 steps of {h:.4e}");

    let observer = Observer::new(l);
    let dim = l.dim();
    let mut rho = rho0.matrix().clone();
    let mut k = [
        CMatrix::zeros(dim, dim),
        CMatrix::zeros(dim, dim),
        CMatrix::zeros(dim, dim),
        CMatrix::zeros(dim, dim),
    ];
    let mut stage = CMatrix::zeros(dim, dim);
    let mut traj = Trajectory {
        dt: h,
        records: Vec::new(),
        snapshots: Vec::new(),
        final_state: rho0.clone(),
        max_trace_error: 0.0,
        trace_correction: 0.0,
        min_eigenvalue_seen: rho0.min_eigenvalue(),
    };

    let keep = |traj: &mut Trajectory, rho: &CMatrix, step: usize| -> Result<()> {
        let on_record = step % record_every == 0 || step == steps;
        let on_snapshot = opts.snapshot_every > 0 && (step % opts.snapshot_every == 0 || step == steps);
        if on_record || on_snapshot {
            let (rec, piston) = observer.record(l, rho, step as f64 * h)?;
            if on_snapshot {
                traj.snapshots.push(PistonSnapshot {
                    t_cycles: rec.t_cycles,
                    state: piston,
                });
            }
            if on_record {
                traj.records.push(rec);
            }
        }
        Ok(())
    };
    keep(&mut traj, &rho, 0)?;

    let half = C64::new(0.5 * h, 0.0);
    let full = C64::new(h, 0.0);
    let sixth = C64::new(h / 6.0, 0.0);
    for step in 1..=steps {
        l.apply_into(&rho, &mut k[0]);
        stage.copy_from(&rho);
        add_scaled(&mut stage, half, &k[0]);
        l.apply_into(&stage, &mut k[1]);
        stage.copy_from(&rho);
        add_scaled(&mut stage, half, &k[1]);
        l.apply_into(&stage, &mut k[2]);
        stage.copy_from(&rho);
        add_scaled(&mut stage, full, &k[2]);
        l.apply_into(&stage, &mut k[3]);
        for (i, w) in [1.0, 2.0, 2.0, 1.0].into_iter().enumerate() {
            add_scaled(&mut rho, sixth * w, &k[i]);
        }

        let tr = rho.trace().re;
        let drift = (tr - 1.0).abs();
        traj.max_trace_error = traj.max_trace_error.max(drift);
        if opts.renormalize {
            traj.trace_correction += drift;
            rho /= C64::new(tr, 0.0);
        } else if drift > TRACE_DRIFT_TOL {
            warn!("trace drift {drift:.3e} at step {step}");
        }
        if step % check_every == 0 || step == steps {
            let herm = (&rho + rho.adjoint()) * C64::new(0.5, 0.0);
            let min = DensityMatrix::from_matrix_unchecked(herm).min_eigenvalue();
            traj.min_eigenvalue_seen = traj.min_eigenvalue_seen.min(min);
            if min < POSITIVITY_ABORT {
                return Err(Error::Positivity {
                    time: step as f64 * h,
                    min_eigenvalue: min,
                });
            }
        }
        keep(&mut traj, &rho, step)?;
    }
    if opts.renormalize && traj.trace_correction > 0.0 {
        debug!("cumulative trace correction {:.3e}", traj.trace_correction);
    }
    traj.final_state = DensityMatrix::from_matrix_unchecked(rho);
    Ok(traj)
}
