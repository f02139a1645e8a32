//! Finite-dimensional realisations: Hilbert and Riemann-Liouville matrices,
//! dense singular values, and multipliers from sampled convolution kernels.

mod fft;
mod matrix;
mod pipeline;
mod svd;

pub use fft::{direct_transform, fft_multiplier, plancherel, KernelSampler, SampledMultiplier};
pub use matrix::{hilbert_matrix, riemann_liouville_matrix, DenseMatrix};
pub use pipeline::{kernel_pipeline, matrix_pipeline, MatrixOperator, PipelineReport, TRUSTED_FRACTION};
pub use svd::{singular_values, svd, Factorization, SVD_DROP_TOL};
