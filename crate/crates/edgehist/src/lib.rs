//! Edge-preserving smoothing built on gradient-histogram thresholding.
//!
//! The core idea: compute the backward-difference gradients of an image,
//! zero every gradient entry whose magnitude falls below a threshold
//! `lambda`, and then recover the image whose gradients best match that
//! thresholded target under a dynamic-range constraint. Matching in the
//! 2-norm is solved with FISTA; matching in the 1-norm is solved with a
//! three-block ADMM whose linear step is exact through an FFT
//! diagonalization of the periodic difference operators.
//!
//! Repeating threshold-then-solve a few times (three by default) removes
//! textures progressively while leaving salient edges in place. On top of
//! that loop the crate ships four applications:
//!
//! * [`pipeline::smooth`] — image abstraction / texture removal,
//! * [`pipeline::edge_map`] — edge extraction from the smoothed image,
//! * [`pipeline::exaggerate`] — details exaggeration around the smooth base,
//! * [`pipeline::descan`] — removal of back-to-front interference in
//!   scanned documents, with automatic background-level detection and
//!   background pixels pinned to their original values.
//!
//! Each application has a runnable demo under `examples/`, and the
//! `edgehist` binary exposes them as batch subcommands.
//!
//! All arithmetic is `f64` on the `[0, 255]` intensity scale; images are
//! quantized (round half away from zero) only when written to disk.
//! Every entry point is deterministic: identical inputs and parameters
//! produce bit-identical outputs.
//!
//! ```
//! use edgehist::pipeline::{smooth, PipelineConfig};
//! use edgehist::Image;
//!
//! // A small step edge carrying faint texture.
//! let data: Vec<f64> = (0..16 * 16)
//!     .map(|i| {
//!         let (r, c) = (i / 16, i % 16);
//!         let step = if c >= 8 { 60.0 } else { 0.0 };
//!         100.0 + step + 3.0 * ((r + c) as f64).sin()
//!     })
//!     .collect();
//! let img = Image::new(16, 16, data);
//!
//! let cfg = PipelineConfig { lambda: 15.0, ..PipelineConfig::default() };
//! let out = smooth(&img, &cfg)?;
//!
//! // The step survives; the sub-threshold texture does not.
//! assert!(out.get(4, 12) - out.get(4, 3) > 48.0);
//! assert!(out.data().iter().all(|&v| (0.0..=255.0).contains(&v)));
//! # Ok::<(), edgehist::Error>(())
//! ```

pub mod background;
pub mod cli;
pub mod constraints;
mod fft;
pub mod gradients;
pub mod histogram;
pub mod image;
pub mod pipeline;
pub mod solvers;

pub use crate::background::{detect_background, BackgroundParams, BackgroundResult};
pub use crate::constraints::ConstraintSet;
pub use crate::gradients::{grad, grad_adjoint, gram_eigenvalues, GradientField};
pub use crate::histogram::{
    gaussian_smooth, magnitude_histogram, nnz, threshold_field, write_histogram_csv,
};
pub use crate::image::{load_image, save_image, ColorImage, Error, Image, Picture, Result};
pub use crate::pipeline::PipelineConfig;
pub use crate::solvers::{admm, fista, objective, Norm, SolveResult, SolverConfig};
