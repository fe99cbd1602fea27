//! Dense complex operators and density matrices.

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<C64>;

/// Entrywise tolerance for the Hermitian tag on operators.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Trace tolerance for density matrices.
pub const TRACE_TOL: f64 = 1e-10;
/// Smallest admissible eigenvalue of a density matrix.
pub const POSITIVITY_TOL: f64 = -1e-10;

/// A square complex matrix acting on a finite Hilbert space.
#[derive(Clone, Debug, PartialEq)]
pub struct Operator {
    m: CMatrix,
}

impl Operator {
    pub fn new(m: CMatrix) -> Result<Self> {
        if m.nrows() == 0 || m.nrows() != m.ncols() {
            return Err(Error::InvalidInput(format!(
                "operator must be square and non-empty, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidInput("operator has non-finite entries".into()));
        }
        Ok(Self { m })
    }

    /// Wraps a matrix the caller knows to be square and finite.
    pub(crate) fn from_matrix(m: CMatrix) -> Self {
        debug_assert_eq!(m.nrows(), m.ncols());
        Self { m }
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        Self::from_matrix(CMatrix::from_fn(n, n, |i, j| {
            if i == j {
                C64::new(diag[i], 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        }))
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_matrix(CMatrix::identity(dim, dim))
    }

    pub fn zeros(dim: usize) -> Self {
        Self::from_matrix(CMatrix::zeros(dim, dim))
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }

    pub fn into_matrix(self) -> CMatrix {
        self.m
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.m[(i, j)]
    }

    pub fn adjoint(&self) -> Self {
        Self::from_matrix(self.m.adjoint())
    }

    pub fn scale(&self, s: C64) -> Self {
        Self::from_matrix(&self.m * s)
    }

    pub fn trace(&self) -> C64 {
        self.m.trace()
    }

    pub fn commutator(&self, other: &Operator) -> Self {
        Self::from_matrix(&self.m * &other.m - &other.m * &self.m)
    }

    /// max |M - M^dag| entrywise.
    pub fn hermiticity_defect(&self) -> f64 {
        max_abs_diff(&self.m, &self.m.adjoint())
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermiticity_defect() <= HERMITIAN_TOL
    }

    /// max |A + A^dag| entrywise.
    pub fn anti_hermiticity_defect(&self) -> f64 {
        (&self.m + self.m.adjoint())
            .iter()
            .fold(0.0_f64, |acc, z| acc.max(z.norm()))
    }

    pub fn max_abs_diff(&self, other: &Operator) -> f64 {
        max_abs_diff(&self.m, &other.m)
    }

    /// U^dag M U
    pub fn conjugate_by(&self, u: &Operator) -> Self {
        Self::from_matrix(u.m.adjoint() * &self.m * &u.m)
    }
}

impl<'a> Mul<&'a Operator> for &'a Operator {
    type Output = Operator;
    fn mul(self, rhs: &'a Operator) -> Operator {
        Operator::from_matrix(&self.m * &rhs.m)
    }
}

impl<'a> Add<&'a Operator> for &'a Operator {
    type Output = Operator;
    fn add(self, rhs: &'a Operator) -> Operator {
        Operator::from_matrix(&self.m + &rhs.m)
    }
}

impl<'a> Sub<&'a Operator> for &'a Operator {
    type Output = Operator;
    fn sub(self, rhs: &'a Operator) -> Operator {
        Operator::from_matrix(&self.m - &rhs.m)
    }
}

impl Neg for &Operator {
    type Output = Operator;
    fn neg(self) -> Operator {
        Operator::from_matrix(-&self.m)
    }
}

pub(crate) fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter()
        .zip(b.iter())
        .fold(0.0_f64, |acc, (x, y)| acc.max((x - y).norm()))
}

/// Tensor product; the left factor is the slow (outer) index.
pub fn kron(a: &Operator, b: &Operator) -> Operator {
    Operator::from_matrix(a.m.kronecker(&b.m))
}

/// Eigen-decomposition of a Hermitian operator.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    /// Ascending.
    pub values: Vec<f64>,
    /// Columns are the eigenvectors, in the order of `values`.
    pub vectors: CMatrix,
}

impl HermitianEigen {
    /// V diag(f(lambda)) V^dag
    pub fn map_spectrum<F: Fn(f64) -> C64>(&self, f: F) -> CMatrix {
        let n = self.values.len();
        let mut scaled = self.vectors.clone();
        for (j, &lambda) in self.values.iter().enumerate() {
            let w = f(lambda);
            for i in 0..n {
                scaled[(i, j)] *= w;
            }
        }
        scaled * self.vectors.adjoint()
    }
}

pub fn hermitian_eig(m: &Operator) -> Result<HermitianEigen> {
    let deviation = m.hermiticity_defect();
    // Scale-aware: large operators (e.g. number operators at high N) carry
    // round-off proportional to their norm.
    let scale = m.m.iter().fold(1.0_f64, |acc, z| acc.max(z.norm()));
    if deviation > HERMITIAN_TOL * scale {
        return Err(Error::NotHermitian { deviation });
    }
    Ok(hermitian_eig_unchecked(&m.m))
}

pub(crate) fn hermitian_eig_unchecked(m: &CMatrix) -> HermitianEigen {
    let mut h = (m + m.adjoint()) * C64::new(0.5, 0.0);
    // Entries whose squares underflow make the Householder step return NaN.
    let floor = h.iter().fold(0.0_f64, |acc, z| acc.max(z.norm())) * 1e-30;
    h.iter_mut().filter(|z| z.norm() < floor).for_each(|z| *z = C64::new(0.0, 0.0));
    let eig = h.symmetric_eigen();
    let n = eig.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = CMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    HermitianEigen { values, vectors }
}

/// exp(A) for anti-Hermitian A, via the spectrum of the Hermitian iA.
pub fn matrix_exponential_unitary(a: &Operator) -> Result<Operator> {
    let deviation = a.anti_hermiticity_defect();
    if deviation > HERMITIAN_TOL {
        return Err(Error::NotAntiHermitian { deviation });
    }
    // A = -i H with H = iA Hermitian, so exp(A) = V exp(-i lambda) V^dag.
    let h = &a.m * C64::new(0.0, 1.0);
    let eig = hermitian_eig_unchecked(&h);
    Ok(Operator::from_matrix(
        eig.map_spectrum(|lambda| C64::new(0.0, -lambda).exp()),
    ))
}

/// A density matrix: Hermitian, unit trace, positive semidefinite.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    m: CMatrix,
}

impl DensityMatrix {
    pub fn new(m: CMatrix) -> Result<Self> {
        let op = Operator::new(m)?;
        let defect = op.hermiticity_defect();
        if defect > HERMITIAN_TOL {
            return Err(Error::InvalidState(format!(
                "not Hermitian (defect {defect:.3e})"
            )));
        }
        let tr = op.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace {tr} != 1")));
        }
        let min = hermitian_eig_unchecked(&op.m).values[0];
        if min < POSITIVITY_TOL {
            return Err(Error::InvalidState(format!(
                "negative eigenvalue {min:.3e}"
            )));
        }
        Ok(Self { m: op.m })
    }

    pub(crate) fn from_matrix_unchecked(m: CMatrix) -> Self {
        Self { m }
    }

    /// Pure state |psi><psi| from a normalized vector.
    pub fn pure(psi: &[C64]) -> Self {
        let n = psi.len();
        Self {
            m: CMatrix::from_fn(n, n, |i, j| psi[i] * psi[j].conj()),
        }
    }

    pub fn from_populations(p: &[f64]) -> Self {
        Self::from_matrix_unchecked(Operator::from_real_diagonal(p).into_matrix())
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }

    pub fn as_operator(&self) -> Operator {
        Operator::from_matrix(self.m.clone())
    }

    pub fn trace(&self) -> C64 {
        self.m.trace()
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.m[(i, j)]
    }

    /// tr(rho A)
    pub fn expectation(&self, a: &Operator) -> C64 {
        let n = self.dim();
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..n {
            for k in 0..n {
                acc += self.m[(i, k)] * a.m[(k, i)];
            }
        }
        acc
    }

    pub fn populations(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.m[(i, i)].re).collect()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eig_unchecked(&self.m).values
    }

    pub fn eigen(&self) -> HermitianEigen {
        hermitian_eig_unchecked(&self.m)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }

    /// The same state on a larger Fock space, padded with zeros.
    pub fn embed(&self, dim: usize) -> Result<Self> {
        let n = self.dim();
        if dim < n {
            return Err(Error::DimensionMismatch { expected: n, got: dim });
        }
        let mut m = CMatrix::zeros(dim, dim);
        m.view_mut((0, 0), (n, n)).copy_from(&self.m);
        Ok(Self { m })
    }

    /// U rho U^dag
    pub fn transform(&self, u: &Operator) -> Self {
        Self::from_matrix_unchecked(&u.m * &self.m * u.m.adjoint())
    }

    /// True when every off-diagonal entry is below `tol` in modulus.
    pub fn is_diagonal(&self, tol: f64) -> bool {
        self.off_diagonal_mass() <= tol
    }

    pub fn off_diagonal_mass(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    worst = worst.max(self.m[(i, j)].norm());
                }
            }
        }
        worst
    }

    pub fn trace_distance(&self, other: &DensityMatrix) -> f64 {
        let diff = &self.m - &other.m;
        0.5 * hermitian_eig_unchecked(&diff)
            .values
            .iter()
            .map(|v| v.abs())
            .sum::<f64>()
    }
}

/// Von Neumann entropy in nats; eigenvalues below 1e-14 are dropped.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    entropy_of_spectrum(&rho.eigenvalues())
}

/// Entropy in nats of a probability vector; entries below 1e-14 are dropped.
pub fn entropy_of_spectrum(values: &[f64]) -> f64 {
    values
        .iter()
        .filter(|&&p| p > 1e-14)
        .map(|&p| -p * p.ln())
        .sum::<f64>()
        .max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn sigma_x() -> Operator {
        Operator::new(CMatrix::from_row_slice(
            2,
            2,
            &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
        ))
        .unwrap()
    }

    #[test]
    fn kron_of_identities_is_identity() {
        let k = kron(&Operator::identity(2), &Operator::identity(3));
        assert_eq!(k, Operator::identity(6));
    }

    #[test]
    fn kron_matches_index_formula() {
        let a = Operator::new(CMatrix::from_fn(2, 2, |i, j| {
            c(0.3 * i as f64 - 0.7 * j as f64, 0.1 + 0.2 * (i * j) as f64)
        }))
        .unwrap();
        let b = Operator::new(CMatrix::from_fn(3, 3, |i, j| {
            c((i + 2 * j) as f64 * 0.5, -(i as f64) + 0.25 * j as f64)
        }))
        .unwrap();
        let k = kron(&a, &b);
        for i1 in 0..2 {
            for j1 in 0..2 {
                for i2 in 0..3 {
                    for j2 in 0..3 {
                        let expected = a.get(i1, j1) * b.get(i2, j2);
                        assert!((k.get(i1 * 3 + i2, j1 * 3 + j2) - expected).norm() < 1e-15);
                    }
                }
            }
        }
    }

    #[test]
    fn eig_sorts_diagonal() {
        let m = Operator::from_real_diagonal(&[3.0, 1.0, 2.0]);
        let e = hermitian_eig(&m).unwrap();
        assert_eq!(e.values, vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn eig_of_sigma_x() {
        let e = hermitian_eig(&sigma_x()).unwrap();
        assert!((e.values[0] + 1.0).abs() < 1e-14);
        assert!((e.values[1] - 1.0).abs() < 1e-14);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        // |0> - |1> up to phase for -1
        let v0 = e.vectors.column(0);
        let overlap = (v0[0] * s - v0[1] * s).norm();
        assert!((overlap - 1.0).abs() < 1e-12);
    }

    #[test]
    fn eig_rejects_non_hermitian() {
        let m = Operator::new(CMatrix::from_row_slice(
            2,
            2,
            &[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
        ))
        .unwrap();
        assert!(matches!(hermitian_eig(&m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn exp_of_zero_is_identity() {
        let u = matrix_exponential_unitary(&Operator::zeros(4)).unwrap();
        assert!(u.max_abs_diff(&Operator::identity(4)) < 1e-14);
    }

    #[test]
    fn exp_of_i_theta_sigma_z() {
        let theta = 0.731;
        let a = Operator::new(CMatrix::from_row_slice(
            2,
            2,
            &[c(0.0, theta), c(0.0, 0.0), c(0.0, 0.0), c(0.0, -theta)],
        ))
        .unwrap();
        let u = matrix_exponential_unitary(&a).unwrap();
        assert!((u.get(0, 0) - c(0.0, theta).exp()).norm() < 1e-14);
        assert!((u.get(1, 1) - c(0.0, -theta).exp()).norm() < 1e-14);
        assert!(u.get(0, 1).norm() < 1e-14);
    }

    #[test]
    fn exp_rejects_hermitian_generator() {
        assert!(matches!(
            matrix_exponential_unitary(&sigma_x()),
            Err(Error::NotAntiHermitian { .. })
        ));
    }

    #[test]
    fn entropy_of_simple_states() {
        let pure = DensityMatrix::pure(&[c(0.6, 0.0), c(0.0, 0.8)]);
        assert!(von_neumann_entropy(&pure).abs() < 1e-12);
        let mixed = DensityMatrix::from_populations(&[0.5, 0.5]);
        assert!((von_neumann_entropy(&mixed) - 2f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn density_matrix_validation() {
        assert!(DensityMatrix::new(CMatrix::identity(2, 2)).is_err());
        let bad = CMatrix::from_row_slice(2, 2, &[c(1.5, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-0.5, 0.0)]);
        assert!(DensityMatrix::new(bad).is_err());
        let ok = CMatrix::from_row_slice(2, 2, &[c(0.5, 0.0), c(0.1, 0.0), c(0.1, 0.0), c(0.5, 0.0)]);
        assert!(DensityMatrix::new(ok).is_ok());
    }
}
