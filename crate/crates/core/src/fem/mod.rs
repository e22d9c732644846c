//! Piecewise-linear finite elements on metric graphs.

pub mod assembly;
pub mod eigen;
pub mod factor;
pub mod sparse;
pub mod spectrum;

pub use assembly::{default_mesh_size, discretize, discretize_with_counts, element_counts, DiscreteSystem, DofMap, EdgeMesh};
pub use eigen::{SolverOptions, DEFAULT_EIGENVALUE_COUNT, RESIDUAL_TOLERANCE};
pub use factor::{count_below, ShiftedFactor};
pub use sparse::CsrMatrix;
pub use spectrum::{
    component_eigenvalues, CLUSTER_TOLERANCE, compute_spectrum, rayleigh_quotient, solve_spectrum, solve_spectrum_with, spectrum_with_counts, Cluster, EdgeFunction,
    EdgeSamples, HeatDecay, Spectrum, SpectrumOptions,
};
