//! The polaron-like unitary that diagonalizes the qubit-piston Hamiltonian
//! and the lab-frame transition operators it produces.

use crate::error::Result;
use crate::quantum::{
    annihilation, sigma_minus, truncated_displacement, CMatrix, DensityMatrix, HilbertLayout,
    Operator, C64,
};

use super::params::EngineParams;

/// U = exp((g/nu)(a^dag - a) sigma_z).
///
/// sigma_z is diagonal, so U is block diagonal: D(g/nu) on the ground
/// sector and D(-g/nu) on the excited sector, each exactly unitary on the
/// truncated space.
pub fn dressed_transform(params: &EngineParams) -> Result<Operator> {
    let n = params.fock_dim();
    let theta = params.coupling_ratio();
    let d_ground = truncated_displacement(C64::new(theta, 0.0), n)?;
    let d_excited = truncated_displacement(C64::new(-theta, 0.0), n)?;
    let mut m = CMatrix::zeros(2 * n, 2 * n);
    m.view_mut((0, 0), (n, n)).copy_from(d_ground.matrix());
    m.view_mut((n, n), (n, n)).copy_from(d_excited.matrix());
    Ok(Operator::new(m)?)
}

/// Moves states between the lab frame and the frame where H is diagonal.
///
/// `to_dressed` maps rho to U rho U^dag; the lab-frame operator U^dag X U
/// acts on rho exactly as X acts on U rho U^dag.
#[derive(Clone, Debug)]
pub struct DressedFrame {
    u: Operator,
}

impl DressedFrame {
    pub fn new(params: &EngineParams) -> Result<Self> {
        Ok(Self {
            u: dressed_transform(params)?,
        })
    }

    pub fn unitary(&self) -> &Operator {
        &self.u
    }

    pub fn to_dressed(&self, rho_lab: &DensityMatrix) -> DensityMatrix {
        rho_lab.transform(&self.u)
    }

    pub fn to_lab(&self, rho_dressed: &DensityMatrix) -> DensityMatrix {
        rho_dressed.transform(&self.u.adjoint())
    }

    /// U^dag X U
    pub fn lab_operator(&self, dressed_op: &Operator) -> Operator {
        dressed_op.conjugate_by(&self.u)
    }
}

/// Lab-frame transition operators.
#[derive(Clone, Debug)]
pub struct TransitionOperators {
    /// U^dag sigma_- U
    pub sigma_minus: Operator,
    pub sigma_plus: Operator,
    /// b sigma~_-: qubit relaxes, piston loses a dressed quantum.
    pub s_up: Operator,
    pub s_up_dag: Operator,
    /// b^dag sigma~_-: qubit relaxes, piston gains a dressed quantum.
    pub s_down: Operator,
    pub s_down_dag: Operator,
    /// b = U^dag a U
    pub b: Operator,
}

pub fn transition_operators(params: &EngineParams) -> Result<TransitionOperators> {
    let frame = DressedFrame::new(params)?;
    let layout = HilbertLayout::new(params.fock_dim())?;
    let a = annihilation(params.fock_dim())?;
    let sm = layout.lift_qubit(&sigma_minus())?;
    let b = frame.lab_operator(&layout.lift_mode(&a)?);
    let sigma_minus = frame.lab_operator(&sm);
    let s_up = &b * &sigma_minus;
    let s_down = &b.adjoint() * &sigma_minus;
    Ok(TransitionOperators {
        sigma_plus: sigma_minus.adjoint(),
        sigma_minus,
        s_up_dag: s_up.adjoint(),
        s_up,
        s_down_dag: s_down.adjoint(),
        s_down,
        b,
    })
}
