use log::warn;
use serde::Serialize;

use crate::bath::BathLabel;
use crate::error::{Error, Result};
use crate::joint::EngineParams;

use super::Row;

/// Largest g tau for which the micromaser formulas are used without warning.
pub const MASER_MAX_COUPLING: f64 = 0.1;
/// Initial |alpha| above which a run counts as coherent dominated.
pub const COHERENT_DOMINATED_ALPHA: f64 = 3.0;

#[derive(Clone, Debug, Serialize)]
pub struct Efficiency {
    /// Power output over hot heat current, None where J_H <= 0.
    pub eta: Vec<Option<f64>>,
    /// nu / nu_+
    pub eta_bound: f64,
    pub coherent_dominated: bool,
    /// Largest eta over the rows where it is defined.
    pub eta_max: Option<f64>,
}

/// eta(t) = [d ergotropy / dt] / J_H over report rows. Rows without a hot
/// current carry no efficiency.
pub fn efficiency(rows: &[Row], params: &EngineParams, initial_alpha: f64) -> Efficiency {
    let eta: Vec<Option<f64>> = rows
        .iter()
        .map(|r| match r.j_hot {
            Some(jh) if jh > 0.0 => Some(r.power_output / jh),
            _ => None,
        })
        .collect();
    let eta_max = eta.iter().flatten().copied().reduce(f64::max);
    let coherent_dominated = initial_alpha > COHERENT_DOMINATED_ALPHA;
    if eta_max.is_some() && !coherent_dominated {
        warn!("|alpha| = {initial_alpha} <= {COHERENT_DOMINATED_ALPHA}: efficiency bound applies to |alpha| >> 1");
    }
    Efficiency {
        eta,
        eta_bound: params.nu() / params.nu_plus(),
        coherent_dominated,
        eta_max,
    }
}

/// Heat currents (J_C, J_H) for a qubit with populations (rho_00, rho_11)
/// uncorrelated with a piston of mean occupation `mean_n`, measured with
/// the dressed Hamiltonian.
pub fn reduced_heat_currents(params: &EngineParams, (rho00, rho11): (f64, f64), mean_n: f64) -> Result<(f64, f64)> {
    let s = params.samples()?;
    let k = params.q1_rate_factor() * params.sideband_weight();
    let (w0, wp, wm) = (params.omega0(), params.nu_plus(), params.nu_minus());
    let current = |label: BathLabel| {
        let (q, up, lo) = (s.qubit.bath(label), s.upper.bath(label), s.lower.bath(label));
        w0 * (q.minus * rho00 - q.plus * rho11)
            + k * wp * (up.minus * rho00 * (mean_n + 1.0) - up.plus * rho11 * mean_n)
            + k * wm * (lo.minus * rho00 * mean_n - lo.plus * rho11 * (mean_n + 1.0))
    };
    Ok((current(BathLabel::Cold), current(BathLabel::Hot)))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MaserComparison {
    /// R = r_a (g tau)^2
    pub rate: f64,
    pub generated_power: f64,
    pub input_power: f64,
    /// nu / omega0
    pub eta_max: f64,
    /// nu / (omega0 + nu), the bound of the quantized engine.
    pub eta_quantized: f64,
    pub warning: Option<String>,
}

/// Closed-form micromaser figures for atoms injected at rate r_a, each
/// interacting for a time tau with coupling g.
pub fn micromaser_compare(r_a: f64, g: f64, tau: f64, nu: f64, omega0: f64) -> Result<MaserComparison> {
    let all = [r_a, g, tau, nu, omega0];
    if all.iter().any(|x| !x.is_finite() || *x < 0.0) || nu <= 0.0 || omega0 <= 0.0 {
        return Err(Error::InvalidInput(
            "maser comparison needs r_a, g, tau >= 0 and nu, omega0 > 0".into(),
        ));
    }
    let gt = g * tau;
    let warning = (gt > MASER_MAX_COUPLING).then(|| {
        let msg = format!("g tau = {gt} > {MASER_MAX_COUPLING}: small-interaction formulas do not apply");
        warn!("{msg}");
        msg
    });
    let rate = r_a * gt * gt;
    Ok(MaserComparison {
        rate,
        generated_power: nu * rate,
        input_power: omega0 * rate,
        eta_max: nu / omega0,
        eta_quantized: nu / (omega0 + nu),
        warning,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bath::desk_scale_baths;
    use crate::joint::{build_liouvillian, heat_currents, heat_hamiltonian, qubit_steady_state};
    use crate::quantum::{thermal_state, DensityMatrix, HilbertLayout};

    #[test]
    fn maser_table() {
        let m = micromaser_compare(100.0, 0.05, 1.0, 1.0, 10.0).unwrap();
        assert!((m.rate - 0.25).abs() < 1e-15);
        assert!((m.generated_power - 0.25).abs() < 1e-15);
        assert!((m.input_power - 2.5).abs() < 1e-15);
        assert_eq!(m.eta_max, 0.1);
        assert!((m.eta_quantized - 1.0 / 11.0).abs() < 1e-15);
        assert!(m.warning.is_none());
        assert_eq!(micromaser_compare(1.0, 1.0, 0.1, 2.0, 2.0).unwrap().eta_max, 1.0);
        assert!(micromaser_compare(1.0, 1.0, 0.5, 1.0, 10.0).unwrap().warning.is_some());
        assert!(micromaser_compare(-1.0, 1.0, 0.5, 1.0, 10.0).is_err());
    }

    #[test]
    fn quantized_bound_below_maser() {
        for nu in [0.1, 1.0, 5.0, 9.9] {
            let m = micromaser_compare(1.0, 0.01, 1.0, nu, 10.0).unwrap();
            assert!(m.eta_quantized < m.eta_max);
        }
    }

    #[test]
    fn reduced_currents_match_joint_product_state() {
        let n = 60;
        let params = EngineParams::new(10.0, 1.0, 0.05, n, desk_scale_baths()).unwrap();
        let l = build_liouvillian(&params).unwrap();
        let h = heat_hamiltonian(&l);
        let (p0, p1) = qubit_steady_state(&params).unwrap();
        let qubit = DensityMatrix::from_populations(&[p0, p1]);
        let rho = HilbertLayout::new(n)
            .unwrap()
            .product_state(&qubit, &thermal_state(1.5, n).unwrap())
            .unwrap();
        let (jc, jh) = heat_currents(&rho, &l, &h);
        let (rc, rh) = reduced_heat_currents(&params, (p0, p1), 1.5).unwrap();
        let scale = jc.abs().max(jh.abs());
        assert!((jc - rc).abs() < 1e-9 * scale && (jh - rh).abs() < 1e-9 * scale);
    }
}
