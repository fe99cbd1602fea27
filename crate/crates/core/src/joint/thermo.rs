//! Qubit steady state, heat currents and entropy production.

use serde::Serialize;

use crate::bath::BathLabel;
use crate::error::{Error, Result};
use crate::quantum::{hermitian_eig_unchecked, CMatrix, DensityMatrix, Operator};

use super::liouvillian::Liouvillian;
use super::params::{EngineParams, HeatHamiltonian};

/// Qubit populations (rho_00, rho_11) from detailed balance of the
/// zero-harmonic block alone: rho_11 / rho_00 = G(-omega0) / G(omega0).
///
/// The sideband blocks also flip the qubit, so this is accurate to
/// O((g/nu)^2 <n> G(nu_+-) / G(omega0)).
pub fn qubit_steady_state(params: &EngineParams) -> Result<(f64, f64)> {
    let s = params.samples()?.qubit.combined;
    if s.plus <= 0.0 {
        return Err(Error::InvalidInput(
            "combined bath response vanishes at omega0: the qubit has no relaxation channel".into(),
        ));
    }
    let ratio = s.minus / s.plus;
    let rho00 = 1.0 / (1.0 + ratio);
    Ok((rho00, ratio * rho00))
}

/// Diagonal of H_S + nu n over the joint basis, qubit first.
fn dressed_energies(params: &EngineParams) -> Vec<f64> {
    let n = params.fock_dim();
    let half = 0.5 * params.omega0();
    (0..2 * n)
        .map(|i| {
            let (q, k) = (i / n, i % n);
            let qubit = if q == 0 { -half } else { half };
            qubit + params.nu() * k as f64
        })
        .collect()
}

/// The heat-current Hamiltonian as a dressed-frame operator.
pub fn heat_hamiltonian(l: &Liouvillian) -> Operator {
    let params = l.params();
    let dressed = Operator::from_real_diagonal(&dressed_energies(params));
    match params.heat_hamiltonian() {
        HeatHamiltonian::Dressed => dressed,
        HeatHamiltonian::Bare => {
            // the bare operator is the same expression in lab variables
            let u = l.frame().unitary();
            dressed.conjugate_by(&u.adjoint())
        }
    }
}

/// tr(A B) without forming the product.
pub(crate) fn trace_product(a: &CMatrix, b: &CMatrix) -> f64 {
    let n = a.nrows();
    let mut acc = 0.0;
    for i in 0..n {
        for k in 0..n {
            let (x, y) = (a[(i, k)], b[(k, i)]);
            acc += x.re * y.re - x.im * y.im;
        }
    }
    acc
}

/// (J_C, J_H) with J_j = tr(H sum_q L_q^j rho), rho in the dressed frame.
pub fn heat_currents(rho: &DensityMatrix, l: &Liouvillian, h: &Operator) -> (f64, f64) {
    let jc = trace_product(h.matrix(), &l.apply_bath(BathLabel::Cold, rho.matrix()));
    let jh = trace_product(h.matrix(), &l.apply_bath(BathLabel::Hot, rho.matrix()));
    (jc, jh)
}

/// Eigenvalues below this are treated as this value inside ln(rho).
const LOG_FLOOR: f64 = 1e-30;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EntropyBalance {
    /// dS/dt = -tr(L(rho) ln rho)
    pub entropy_rate: f64,
    pub j_cold: f64,
    pub j_hot: f64,
    /// dS/dt - J_C / T_C - J_H / T_H
    pub sigma: f64,
}

/// Entropy production of the joint state at one instant.
///
/// The entropy rate is evaluated from the generator rather than by
/// differencing a trajectory.
pub fn entropy_production(rho: &DensityMatrix, l: &Liouvillian, h: &Operator) -> EntropyBalance {
    let drho = l.apply(rho.matrix());
    entropy_balance(rho, &drho, l, h)
}

pub(crate) fn entropy_balance(
    rho: &DensityMatrix,
    drho: &CMatrix,
    l: &Liouvillian,
    h: &Operator,
) -> EntropyBalance {
    let eig = hermitian_eig_unchecked(rho.matrix());
    let mut entropy_rate = 0.0;
    let v = &eig.vectors;
    let tmp = drho * v;
    for (k, &lambda) in eig.values.iter().enumerate() {
        // <v_k| L(rho) |v_k>
        let flow: f64 = (0..v.nrows())
            .map(|i| (v[(i, k)].conj() * tmp[(i, k)]).re)
            .sum();
        entropy_rate -= flow * lambda.max(LOG_FLOOR).ln();
    }
    let (j_cold, j_hot) = heat_currents(rho, l, h);
    let baths = l.params().baths();
    let sigma =
        entropy_rate - j_cold / baths.cold.temperature() - j_hot / baths.hot.temperature();
    EntropyBalance {
        entropy_rate,
        j_cold,
        j_hot,
        sigma,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bath::{desk_scale_baths, BathPair, BathSpectrum, SpectralProfile};
    use crate::joint::build_liouvillian;
    use crate::quantum::{coherent_state, HilbertLayout, C64};

    fn pair(th: f64, tc: f64, hot: SpectralProfile, cold: SpectralProfile) -> BathPair {
        BathPair::new(
            BathSpectrum::new(BathLabel::Hot, th, hot).unwrap(),
            BathSpectrum::new(BathLabel::Cold, tc, cold).unwrap(),
        )
    }

    fn flat(height: f64) -> SpectralProfile {
        SpectralProfile::FlatWindow { lo: 0.0, hi: 30.0, height }
    }

    #[test]
    fn detailed_balance_arithmetic() {
        // G(-w0)/G(w0) = 1/2 needs exp(-w0/T) = 1/2
        let t = 10.0 / 2f64.ln();
        let p = EngineParams::new(10.0, 1.0, 0.05, 20, pair(t, t, flat(1.0), flat(0.5))).unwrap();
        let (a, b) = qubit_steady_state(&p).unwrap();
        assert!((a - 2.0 / 3.0).abs() < 1e-14 && (b - 1.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn zero_temperature_steady_state_is_ground() {
        let p = EngineParams::new(10.0, 1.0, 0.05, 20, pair(1e-3, 1e-3, flat(1.0), flat(1.0)))
            .unwrap();
        let (a, b) = qubit_steady_state(&p).unwrap();
        assert_eq!(b, 0.0);
        assert_eq!(a, 1.0);
    }

    #[test]
    fn no_relaxation_channel_rejected() {
        let off = SpectralProfile::FlatWindow { lo: 0.0, hi: 1.0, height: 1.0 };
        let p = EngineParams::new(10.0, 1.0, 0.05, 20, pair(1.0, 1.0, off, off)).unwrap();
        assert!(qubit_steady_state(&p).is_err());
    }

    fn gibbs(params: &EngineParams, t: f64) -> DensityMatrix {
        let e = dressed_energies(params);
        let w: Vec<f64> = e.iter().map(|x| (-(x - e[0]) / t).exp()).collect();
        let z: f64 = w.iter().sum();
        DensityMatrix::from_populations(&w.iter().map(|x| x / z).collect::<Vec<_>>())
    }

    #[test]
    fn equilibrium_has_no_currents_and_no_production() {
        let t = 3.0;
        let p = EngineParams::new(10.0, 1.0, 0.05, 20, pair(t, t, flat(0.8), flat(0.4))).unwrap();
        let l = build_liouvillian(&p).unwrap();
        let h = heat_hamiltonian(&l);
        let rho = gibbs(&p, t);
        let bal = entropy_production(&rho, &l, &h);
        assert!(bal.j_cold.abs() < 1e-9 && bal.j_hot.abs() < 1e-9);
        assert!(bal.sigma.abs() < 1e-8);
    }

    #[test]
    fn excited_qubit_dumps_heat_into_cold_bath() {
        let none = SpectralProfile::FlatWindow { lo: 0.0, hi: 0.0, height: 0.0 };
        let p = EngineParams::new(10.0, 1.0, 0.05, 20, pair(1.0, 0.5, none, flat(1.0))).unwrap();
        let l = build_liouvillian(&p).unwrap();
        let layout = HilbertLayout::new(20).unwrap();
        let mut pops = vec![0.0; 40];
        pops[layout.index(1, 0)] = 1.0;
        let (jc, jh) = heat_currents(&DensityMatrix::from_populations(&pops), &l, &heat_hamiltonian(&l));
        assert!(jc < 0.0);
        assert_eq!(jh, 0.0);
    }

    #[test]
    fn production_nonnegative_for_coherent_piston() {
        let p = EngineParams::new(10.0, 1.0, 0.05, 30, desk_scale_baths()).unwrap();
        let l = build_liouvillian(&p).unwrap();
        let layout = HilbertLayout::new(30).unwrap();
        let q = DensityMatrix::from_populations(&[0.9, 0.1]);
        let piston = coherent_state(C64::new(2.0, 0.0), 30).unwrap();
        let rho = layout.product_state(&q, &piston).unwrap();
        let bal = entropy_production(&rho, &l, &heat_hamiltonian(&l));
        assert!(bal.sigma >= -1e-8, "sigma {}", bal.sigma);
    }

    #[test]
    fn bare_hamiltonian_differs_at_finite_coupling() {
        let p = EngineParams::new(10.0, 1.0, 0.05, 20, desk_scale_baths()).unwrap();
        let bare = p.clone().with_heat_hamiltonian(HeatHamiltonian::Bare);
        let hd = heat_hamiltonian(&build_liouvillian(&p).unwrap());
        let hb = heat_hamiltonian(&build_liouvillian(&bare).unwrap());
        assert!(hd.max_abs_diff(&hb) > 1e-3);
        assert!(hb.is_hermitian());
    }
}
