//! Dense linear algebra and state constructors for the qubit (x) truncated
//! oscillator Hilbert space.

mod layout;
mod operator;
mod states;

pub use layout::{
    annihilation, creation, excited_projector, number, partial_trace_qubit, sigma_minus,
    sigma_plus, sigma_x, sigma_z, HilbertLayout, MIN_FOCK_DIM,
};
pub use operator::{
    hermitian_eig, kron, matrix_exponential_unitary, von_neumann_entropy, CMatrix,
    DensityMatrix, HermitianEigen, Operator, HERMITIAN_TOL, POSITIVITY_TOL, TRACE_TOL,
};
pub use states::{
    coherent_amplitudes, coherent_state, displace, displaced_thermal, displacement, fock_state,
    thermal_populations, thermal_state, truncated_displacement, TAIL_TOL,
};

pub use operator::entropy_of_spectrum;
pub(crate) use operator::hermitian_eig_unchecked;
pub(crate) use states::ln_factorials;


pub use num_complex::Complex64 as C64;
