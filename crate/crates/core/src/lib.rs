//! Sparse Bernoulli random tensors and the tools to measure how they
//! concentrate: sampling, unfoldings, spectral-norm sandwiches,
//! degree regularization, hypergraph expanders and proof diagnostics.
//!
//! Coordinates are 0-based in the API and 1-based in every text format.

pub mod diagnostics;
pub mod error;
pub mod hypergraph;
pub mod regularization;
pub mod rng;
pub mod sampling;
pub mod spectral;
pub mod tensor;
pub mod unfolding;

pub use error::{Error, Result};
pub use hypergraph::{
    adjacency, count_edges, matrix_mixing_check, mixing_check, EdgeCounter, FamilySpec, Hypergraph,
    MatrixMixingReport, MixingReport, MixingSummary, MixingTrial,
};
pub use regularization::{
    degree_map, expander_construct, regularize, removed_count_check, DegreeMap, RegularizationResult, RemovedCount,
};
pub use rng::SeedSpec;
pub use sampling::{bernoulli_sample, bernoulli_sample_with, er_hypergraph, sparsify_uniform, SamplingPath};
pub use spectral::{
    hopm_lower, matrix_op_norm, slice_lower, spectral_sandwich, LowerBound, MatrixNorm, PowerIterConfig,
    SparseMatrix, SpectralEstimate,
};
pub use tensor::{
    center, contract_all_but_one, frobenius_inner, frobenius_norm, hadamard, multilinear_form, rank1,
    DenseTensor, OffsetTensor, ProbabilityModel, SparseTensor, TensorShape, VectorTuple, DENSE_GATE,
};
pub use unfolding::{balanced_partition, multiway_partition, phi, phi_inverse, unfold, Partition, UnfoldedView};
