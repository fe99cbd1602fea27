//! Bath generators for the joint qubit-piston state.
//!
//! Every block is applied in the dressed frame, where each jump operator
//! is a qubit flip times one of {1, a, a^dag}. Those act on at most one
//! entry per column, so a block costs O(N^2) instead of a dense product.
//! `apply_lab` is the dense double-commutator form in the lab frame.

use serde::Serialize;

use crate::bath::{BathLabel, SpectralSamples};
use crate::error::Result;
use crate::quantum::{CMatrix, DensityMatrix, Operator, C64};

use super::dressing::{transition_operators, DressedFrame, TransitionOperators};
use super::params::EngineParams;

/// Harmonic index q of the transition at omega0 + q nu.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Harmonic {
    Lower,
    Zero,
    Upper,
}

impl Harmonic {
    pub const ALL: [Harmonic; 3] = [Harmonic::Zero, Harmonic::Upper, Harmonic::Lower];

    pub fn q(self) -> i32 {
        match self {
            Harmonic::Lower => -1,
            Harmonic::Zero => 0,
            Harmonic::Upper => 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum ModeAction {
    Keep,
    Lower,
    Raise,
}

/// |to><from| (x) A with A in {1, a, a^dag}.
#[derive(Clone, Copy, Debug)]
struct JumpOp {
    from: usize,
    to: usize,
    mode: ModeAction,
}

impl JumpOp {
    fn relax(mode: ModeAction) -> Self {
        Self { from: 1, to: 0, mode }
    }

    fn excite(mode: ModeAction) -> Self {
        Self { from: 0, to: 1, mode }
    }

    /// (source level, target level, amplitude) for every nonzero column.
    fn mode_entries(&self, n: usize) -> Vec<(usize, usize, f64)> {
        match self.mode {
            ModeAction::Keep => (0..n).map(|k| (k, k, 1.0)).collect(),
            ModeAction::Lower => (1..n).map(|k| (k, k - 1, (k as f64).sqrt())).collect(),
            ModeAction::Raise => (0..n - 1).map(|k| (k, k + 1, ((k + 1) as f64).sqrt())).collect(),
        }
    }
}

/// A weighted sum of dissipators sum_j r_j D[L_j] with the anticommutator
/// parts folded into one diagonal.
#[derive(Clone, Debug)]
struct Kernel {
    fock_dim: usize,
    jumps: Vec<(Vec<(usize, usize, f64)>, usize, usize, f64)>,
    /// sum_j r_j L_j^dag L_j, diagonal in the dressed basis.
    decay: Vec<f64>,
}

impl Kernel {
    fn new(fock_dim: usize) -> Self {
        Self {
            fock_dim,
            jumps: Vec::new(),
            decay: vec![0.0; 2 * fock_dim],
        }
    }

    fn push(&mut self, op: JumpOp, rate: f64) {
        if rate == 0.0 {
            return;
        }
        let n = self.fock_dim;
        let entries = op.mode_entries(n);
        for &(src, _, c) in &entries {
            self.decay[op.from * n + src] += rate * c * c;
        }
        self.jumps.push((entries, op.from, op.to, rate));
    }

    fn merge(&mut self, other: &Kernel) {
        self.jumps.extend(other.jumps.iter().cloned());
        for (d, o) in self.decay.iter_mut().zip(&other.decay) {
            *d += o;
        }
    }

    /// out += K(rho)
    fn apply_into(&self, rho: &CMatrix, out: &mut CMatrix) {
        let n = self.fock_dim;
        let dim = 2 * n;
        for j in 0..dim {
            let dj = self.decay[j];
            for i in 0..dim {
                out[(i, j)] -= rho[(i, j)] * (0.5 * (self.decay[i] + dj));
            }
        }
        for (entries, from, to, rate) in &self.jumps {
            let (fo, to) = (from * n, to * n);
            for &(sn, tn, cn) in entries {
                let w = rate * cn;
                for &(sm, tm, cm) in entries {
                    out[(to + tm, to + tn)] += rho[(fo + sm, fo + sn)] * (w * cm);
                }
            }
        }
    }

    fn max_decay(&self) -> f64 {
        self.decay.iter().fold(0.0, |a, &b| a.max(b))
    }
}

/// One generator L_q^j: its two dissipator rates and the lab-frame
/// operators they multiply.
#[derive(Clone, Debug, Serialize)]
pub struct BlockInfo {
    pub harmonic: Harmonic,
    pub bath: BathLabel,
    /// Bath response at +(omega0 + q nu), weighting the relaxing jump.
    pub g_emission: f64,
    /// Bath response at -(omega0 + q nu), weighting the exciting jump.
    pub g_absorption: f64,
    /// Coefficient multiplying G in front of D[L].
    pub prefactor: f64,
}

#[derive(Clone, Debug)]
pub struct Liouvillian {
    params: EngineParams,
    samples: SpectralSamples,
    frame: DressedFrame,
    blocks: Vec<(BlockInfo, Kernel)>,
    total: Kernel,
    per_bath: [Kernel; 2],
}

fn bath_slot(label: BathLabel) -> usize {
    match label {
        BathLabel::Hot => 0,
        BathLabel::Cold => 1,
    }
}

pub fn build_liouvillian(params: &EngineParams) -> Result<Liouvillian> {
    let samples = params.samples()?;
    let n = params.fock_dim();
    let side = params.q1_rate_factor() * params.sideband_weight();
    let mut blocks = Vec::with_capacity(6);
    let mut total = Kernel::new(n);
    let mut per_bath = [Kernel::new(n), Kernel::new(n)];
    for harmonic in Harmonic::ALL {
        // relaxing jump, its exciting partner, dissipator prefactor
        let (relax, excite, prefactor) = match harmonic {
            Harmonic::Zero => (ModeAction::Keep, ModeAction::Keep, 1.0),
            Harmonic::Upper => (ModeAction::Lower, ModeAction::Raise, side),
            Harmonic::Lower => (ModeAction::Raise, ModeAction::Lower, side),
        };
        for bath in [BathLabel::Cold, BathLabel::Hot] {
            let s = samples.harmonic(harmonic.q()).bath(bath);
            let mut k = Kernel::new(n);
            k.push(JumpOp::relax(relax), prefactor * s.plus);
            k.push(JumpOp::excite(excite), prefactor * s.minus);
            total.merge(&k);
            per_bath[bath_slot(bath)].merge(&k);
            blocks.push((
                BlockInfo {
                    harmonic,
                    bath,
                    g_emission: s.plus,
                    g_absorption: s.minus,
                    prefactor,
                },
                k,
            ));
        }
    }
    Ok(Liouvillian {
        params: params.clone(),
        samples,
        frame: DressedFrame::new(params)?,
        blocks,
        total,
        per_bath,
    })
}

impl Liouvillian {
    pub fn params(&self) -> &EngineParams {
        &self.params
    }

    pub fn samples(&self) -> &SpectralSamples {
        &self.samples
    }

    pub fn frame(&self) -> &DressedFrame {
        &self.frame
    }

    pub fn blocks(&self) -> impl Iterator<Item = &BlockInfo> {
        self.blocks.iter().map(|(info, _)| info)
    }

    pub fn dim(&self) -> usize {
        2 * self.params.fock_dim()
    }

    /// L(rho) for a dressed-frame state.
    pub fn apply(&self, rho: &CMatrix) -> CMatrix {
        let mut out = CMatrix::zeros(rho.nrows(), rho.ncols());
        self.total.apply_into(rho, &mut out);
        out
    }

    pub(crate) fn apply_into(&self, rho: &CMatrix, out: &mut CMatrix) {
        out.fill(C64::new(0.0, 0.0));
        self.total.apply_into(rho, out);
    }

    /// Sum of the three blocks of one bath.
    pub fn apply_bath(&self, bath: BathLabel, rho: &CMatrix) -> CMatrix {
        let mut out = CMatrix::zeros(rho.nrows(), rho.ncols());
        self.per_bath[bath_slot(bath)].apply_into(rho, &mut out);
        out
    }

    pub fn apply_block(&self, harmonic: Harmonic, bath: BathLabel, rho: &DensityMatrix) -> Operator {
        let mut out = CMatrix::zeros(rho.dim(), rho.dim());
        for (info, k) in &self.blocks {
            if info.harmonic == harmonic && info.bath == bath {
                k.apply_into(rho.matrix(), &mut out);
            }
        }
        Operator::from_matrix(out)
    }

    /// Largest decay rate of any single block, sum_j r_j L_j^dag L_j.
    pub fn rate_scale(&self) -> f64 {
        self.blocks.iter().map(|(_, k)| k.max_decay()).fold(0.0, f64::max)
    }

    /// Largest decay rate among blocks of the given harmonics.
    pub fn rate_scale_of(&self, harmonics: &[Harmonic]) -> f64 {
        self.blocks
            .iter()
            .filter(|(info, _)| harmonics.contains(&info.harmonic))
            .map(|(_, k)| k.max_decay())
            .fold(0.0, f64::max)
    }

    /// The same generator in the lab frame, written as the double
    /// commutators of the dressed operators with dense products.
    pub fn apply_lab(&self, rho_lab: &DensityMatrix) -> Result<Operator> {
        let ops = transition_operators(&self.params)?;
        Ok(lab_generator(&ops, &self.blocks, rho_lab))
    }
}

fn double_commutator(l: &Operator, rho: &Operator) -> Operator {
    let ld = l.adjoint();
    let lr = l * rho;
    let rl = rho * &ld;
    &lr.commutator(&ld) + &l.commutator(&rl)
}

fn lab_generator(
    ops: &TransitionOperators,
    blocks: &[(BlockInfo, Kernel)],
    rho: &DensityMatrix,
) -> Operator {
    let r = rho.as_operator();
    let mut out = Operator::zeros(rho.dim());
    for (info, _) in blocks {
        let (relax, excite) = match info.harmonic {
            Harmonic::Zero => (&ops.sigma_minus, &ops.sigma_plus),
            Harmonic::Upper => (&ops.s_up, &ops.s_up_dag),
            Harmonic::Lower => (&ops.s_down, &ops.s_down_dag),
        };
        // prefactor multiplies D[L] = half the double commutator
        let w = 0.5 * info.prefactor;
        let term = &double_commutator(relax, &r).scale(C64::new(w * info.g_emission, 0.0))
            + &double_commutator(excite, &r).scale(C64::new(w * info.g_absorption, 0.0));
        out = &out + &term;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bath::{desk_scale_baths, BathPair, BathSpectrum, SpectralProfile};
    use crate::quantum::HilbertLayout;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_state(dim: usize, rng: &mut ChaCha8Rng) -> DensityMatrix {
        let a = CMatrix::from_fn(dim, dim, |_, _| {
            C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
        });
        let m = &a * a.adjoint();
        let tr = m.trace();
        DensityMatrix::new(m / tr).unwrap()
    }

    fn params(ratio: f64, n: usize) -> EngineParams {
        EngineParams::new(10.0, 1.0, ratio, n, desk_scale_baths()).unwrap()
    }

    /// Elementwise evaluation of sum_j r_j D[L_j] from explicit dense jump
    /// matrices, written without any of the kernel's index bookkeeping.
    fn elementwise_oracle(jumps: &[(CMatrix, f64)], rho: &CMatrix) -> CMatrix {
        let d = rho.nrows();
        let mut out = CMatrix::zeros(d, d);
        for (l, r) in jumps {
            let ld = l.adjoint();
            let mut ldl = CMatrix::zeros(d, d);
            for i in 0..d {
                for j in 0..d {
                    for k in 0..d {
                        ldl[(i, j)] += ld[(i, k)] * l[(k, j)];
                    }
                }
            }
            for i in 0..d {
                for j in 0..d {
                    let mut acc = C64::new(0.0, 0.0);
                    for k in 0..d {
                        for m in 0..d {
                            acc += l[(i, k)] * rho[(k, m)] * ld[(m, j)];
                        }
                        acc -= 0.5 * (ldl[(i, k)] * rho[(k, j)] + rho[(i, k)] * ldl[(k, j)]);
                    }
                    out[(i, j)] += acc * *r;
                }
            }
        }
        out
    }

    #[test]
    fn sparse_kernel_matches_elementwise_oracle() {
        use crate::quantum::{annihilation, creation, sigma_minus, sigma_plus};
        let n = 20;
        let p = params(0.07, n);
        let l = build_liouvillian(&p).unwrap();
        let layout = HilbertLayout::new(n).unwrap();
        let s = p.samples().unwrap();
        let side = 2.0 * p.sideband_weight();
        let id = Operator::identity(n);
        let a = annihilation(n).unwrap();
        let ad = creation(n).unwrap();
        let j = |q: &Operator, m: &Operator| layout.joint(q, m).unwrap().into_matrix();
        let (sm, sp) = (sigma_minus(), sigma_plus());
        let jumps = vec![
            (j(&sm, &id), s.qubit.combined.plus),
            (j(&sp, &id), s.qubit.combined.minus),
            (j(&sm, &a), side * s.upper.combined.plus),
            (j(&sp, &ad), side * s.upper.combined.minus),
            (j(&sm, &ad), side * s.lower.combined.plus),
            (j(&sp, &a), side * s.lower.combined.minus),
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let rho = random_state(2 * n, &mut rng);
        let fast = l.apply(rho.matrix());
        let slow = elementwise_oracle(&jumps, rho.matrix());
        let diff = (&fast - &slow).iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(diff < 1e-13, "diff {diff}");
    }

    #[test]
    fn lab_frame_is_dressed_kernel_conjugated() {
        let n = 20;
        let l = build_liouvillian(&params(0.05, n)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let rho_lab = random_state(2 * n, &mut rng);
        let lab = l.apply_lab(&rho_lab).unwrap();
        let frame = l.frame();
        let dressed = l.apply(frame.to_dressed(&rho_lab).matrix());
        let back = frame.lab_operator(&Operator::from_matrix(dressed));
        assert!(lab.max_abs_diff(&back) < 1e-12);
    }

    #[test]
    fn every_block_is_trace_annihilating_and_hermiticity_preserving() {
        let n = 20;
        let l = build_liouvillian(&params(0.1, n)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let rho = random_state(2 * n, &mut rng);
            for h in Harmonic::ALL {
                for b in [BathLabel::Hot, BathLabel::Cold] {
                    let out = l.apply_block(h, b, &rho);
                    assert!(out.trace().norm() < 1e-10);
                    assert!(out.hermiticity_defect() < 1e-13);
                }
            }
        }
    }

    #[test]
    fn six_blocks_with_samples() {
        let l = build_liouvillian(&params(0.05, 20)).unwrap();
        let infos: Vec<_> = l.blocks().collect();
        assert_eq!(infos.len(), 6);
        let upper_hot = infos
            .iter()
            .find(|b| b.harmonic == Harmonic::Upper && b.bath == BathLabel::Hot)
            .unwrap();
        assert_eq!(upper_hot.g_emission, desk_scale_baths().hot.sample(11.0));
        assert!((upper_hot.prefactor - 2.0 * 0.0025).abs() < 1e-15);
    }

    #[test]
    fn halved_convention_halves_sidebands_only() {
        let p = params(0.05, 20);
        let full = build_liouvillian(&p).unwrap();
        let half = build_liouvillian(&p.clone().with_halved_q1(true)).unwrap();
        let zero = [Harmonic::Zero];
        assert_eq!(full.rate_scale_of(&zero), half.rate_scale_of(&zero));
        let side = [Harmonic::Upper, Harmonic::Lower];
        assert!((full.rate_scale_of(&side) - 2.0 * half.rate_scale_of(&side)).abs() < 1e-15);
    }

    #[test]
    fn cold_zero_temperature_emission_only() {
        // no hot response; cold bath nearly at T = 0 only emits
        let hot = BathSpectrum::new(
            BathLabel::Hot,
            1.0,
            SpectralProfile::FlatWindow { lo: 0.0, hi: 0.0, height: 0.0 },
        )
        .unwrap();
        let cold = BathSpectrum::new(
            BathLabel::Cold,
            1e-3,
            SpectralProfile::FlatWindow { lo: 0.0, hi: 20.0, height: 0.3 },
        )
        .unwrap();
        let p = EngineParams::new(10.0, 1.0, 0.0, 20, BathPair::new(hot, cold)).unwrap();
        let l = build_liouvillian(&p).unwrap();
        let layout = HilbertLayout::new(20).unwrap();
        let excited = layout.index(1, 0);
        let rho = DensityMatrix::from_populations(
            &(0..40).map(|i| if i == excited { 1.0 } else { 0.0 }).collect::<Vec<_>>(),
        );
        let d = l.apply(rho.matrix());
        assert!((d[(excited, excited)].re + 0.3).abs() < 1e-14);
        assert!((d[(0, 0)].re - 0.3).abs() < 1e-14);
    }
}
