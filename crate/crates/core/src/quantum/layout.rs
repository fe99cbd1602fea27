//! Qubit and truncated-oscillator operators, and the joint layout.
//!
//! Qubit basis index equals the level label: index 0 is the ground state
//! |0>, index 1 the excited state |1>. `sigma_z` is the population
//! difference |0><0| - |1><1|, so `sigma_z (x) I_N` has diagonal
//! (+1 repeated N times, then -1 repeated N times).

use num_complex::Complex64 as C64;

use super::operator::{kron, CMatrix, DensityMatrix, Operator};
use crate::error::{Error, Result};

/// Smallest Fock truncation accepted by the ladder constructors.
pub const MIN_FOCK_DIM: usize = 2;

/// Truncated annihilation operator: <n-1| a |n> = sqrt(n).
pub fn annihilation(fock_dim: usize) -> Result<Operator> {
    if fock_dim < MIN_FOCK_DIM {
        return Err(Error::InvalidInput(format!(
            "Fock dimension must be >= {MIN_FOCK_DIM}, got {fock_dim}"
        )));
    }
    let mut m = CMatrix::zeros(fock_dim, fock_dim);
    for n in 1..fock_dim {
        m[(n - 1, n)] = C64::new((n as f64).sqrt(), 0.0);
    }
    Ok(Operator::from_matrix(m))
}

pub fn creation(fock_dim: usize) -> Result<Operator> {
    Ok(annihilation(fock_dim)?.adjoint())
}

pub fn number(fock_dim: usize) -> Operator {
    let diag: Vec<f64> = (0..fock_dim).map(|n| n as f64).collect();
    Operator::from_real_diagonal(&diag)
}

pub fn sigma_z() -> Operator {
    Operator::from_real_diagonal(&[1.0, -1.0])
}

/// |1><0|
pub fn sigma_plus() -> Operator {
    let mut m = CMatrix::zeros(2, 2);
    m[(1, 0)] = C64::new(1.0, 0.0);
    Operator::from_matrix(m)
}

/// |0><1|
pub fn sigma_minus() -> Operator {
    sigma_plus().adjoint()
}

pub fn sigma_x() -> Operator {
    &sigma_plus() + &sigma_minus()
}

/// Projector on the excited qubit level.
pub fn excited_projector() -> Operator {
    Operator::from_real_diagonal(&[0.0, 1.0])
}

/// Qubit (x) truncated oscillator, qubit factor first.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HilbertLayout {
    fock_dim: usize,
}

impl HilbertLayout {
    pub const QUBIT_DIM: usize = 2;

    pub fn new(fock_dim: usize) -> Result<Self> {
        if fock_dim < MIN_FOCK_DIM {
            return Err(Error::InvalidInput(format!(
                "Fock dimension must be >= {MIN_FOCK_DIM}, got {fock_dim}"
            )));
        }
        Ok(Self { fock_dim })
    }

    pub fn fock_dim(&self) -> usize {
        self.fock_dim
    }

    pub fn total_dim(&self) -> usize {
        Self::QUBIT_DIM * self.fock_dim
    }

    /// Joint basis index of |qubit, n>.
    pub fn index(&self, qubit: usize, n: usize) -> usize {
        debug_assert!(qubit < 2 && n < self.fock_dim);
        qubit * self.fock_dim + n
    }

    /// The single entry point for building joint operators.
    pub fn joint(&self, qubit_op: &Operator, mode_op: &Operator) -> Result<Operator> {
        if qubit_op.dim() != Self::QUBIT_DIM {
            return Err(Error::DimensionMismatch {
                expected: Self::QUBIT_DIM,
                got: qubit_op.dim(),
            });
        }
        if mode_op.dim() != self.fock_dim {
            return Err(Error::DimensionMismatch {
                expected: self.fock_dim,
                got: mode_op.dim(),
            });
        }
        Ok(kron(qubit_op, mode_op))
    }

    pub fn lift_qubit(&self, qubit_op: &Operator) -> Result<Operator> {
        self.joint(qubit_op, &Operator::identity(self.fock_dim))
    }

    pub fn lift_mode(&self, mode_op: &Operator) -> Result<Operator> {
        self.joint(&Operator::identity(Self::QUBIT_DIM), mode_op)
    }

    pub fn product_state(&self, qubit: &DensityMatrix, mode: &DensityMatrix) -> Result<DensityMatrix> {
        let op = self.joint(&qubit.as_operator(), &mode.as_operator())?;
        Ok(DensityMatrix::from_matrix_unchecked(op.into_matrix()))
    }

    /// Reduced qubit state.
    pub fn trace_mode(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        self.check(rho)?;
        let n = self.fock_dim;
        let m = CMatrix::from_fn(2, 2, |q, r| {
            (0..n).map(|k| rho.get(q * n + k, r * n + k)).sum()
        });
        Ok(DensityMatrix::from_matrix_unchecked(m))
    }

    fn check(&self, rho: &DensityMatrix) -> Result<()> {
        if rho.dim() != self.total_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.total_dim(),
                got: rho.dim(),
            });
        }
        Ok(())
    }
}

/// Trace out the qubit of a state laid out as qubit (x) oscillator.
pub fn partial_trace_qubit(rho: &DensityMatrix) -> Result<DensityMatrix> {
    let dim = rho.dim();
    if dim % 2 != 0 {
        return Err(Error::InvalidInput(format!(
            "joint dimension must be even, got {dim}"
        )));
    }
    let n = dim / 2;
    let m = CMatrix::from_fn(n, n, |i, j| rho.get(i, j) + rho.get(n + i, n + j));
    Ok(DensityMatrix::from_matrix_unchecked(m))
}
