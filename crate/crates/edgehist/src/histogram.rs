//! Target gradient construction: hard thresholding and Gaussian
//! pre-smoothing.
//!
//! The smoothing pipeline zeroes every gradient entry with magnitude
//! below `lambda` and keeps the rest untouched; the resulting field is
//! the target the solvers try to match. A small Gaussian blur applied
//! before the loop suppresses strong textures whose edges would survive
//! thresholding.

use std::io::Write;
use std::path::Path;

use crate::gradients::GradientField;
use crate::image::{Error, Image, Result};

/// Keeps entries with `|y| >= lambda` (sign and magnitude intact) and
/// zeroes the rest. The boundary case `|y| == lambda` is kept.
pub fn threshold_field(g: &GradientField, lambda: f64) -> GradientField {
    assert!(lambda >= 0.0, "threshold must be nonnegative");
    g.map(|y| if y.abs() >= lambda { y } else { 0.0 })
}

/// Number of nonzero entries across both components.
pub fn nnz(g: &GradientField) -> usize {
    g.iter().filter(|&y| y != 0.0).count()
}

/// Separable Gaussian blur with standard deviation `sigma`, periodic
/// boundary. `sigma == 0` returns the input unchanged. The kernel is a
/// sampled Gaussian of radius `ceil(3 sigma)`, renormalized after
/// truncation, so constants (and the image mean) are preserved and the
/// output stays inside `[0, 255]`.
pub fn gaussian_smooth(img: &Image, sigma: f64) -> Image {
    assert!(sigma >= 0.0, "sigma must be nonnegative");
    if sigma == 0.0 {
        return img.clone();
    }
    let kernel = gaussian_kernel(sigma);
    let (m, n) = (img.height(), img.width());

    // Rows, then columns.
    let mut rows = vec![0.0; m * n];
    for r in 0..m {
        let src = &img.data()[r * n..(r + 1) * n];
        convolve_periodic(src, &kernel, &mut rows[r * n..(r + 1) * n]);
    }
    let mut out = vec![0.0; m * n];
    let mut col_in = vec![0.0; m];
    let mut col_out = vec![0.0; m];
    for c in 0..n {
        for r in 0..m {
            col_in[r] = rows[r * n + c];
        }
        convolve_periodic(&col_in, &kernel, &mut col_out);
        for r in 0..m {
            out[r * n + c] = col_out[r];
        }
    }
    Image::new(m, n, out)
}

fn gaussian_kernel(sigma: f64) -> Vec<f64> {
    let radius = (3.0 * sigma).ceil() as i64;
    let mut weights: Vec<f64> = (-radius..=radius)
        .map(|i| (-((i * i) as f64) / (2.0 * sigma * sigma)).exp())
        .collect();
    let total: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= total;
    }
    weights
}

/// 1-D convolution with wrap-around indexing; `kernel.len()` is odd and
/// may exceed the signal length.
fn convolve_periodic(signal: &[f64], kernel: &[f64], out: &mut [f64]) {
    let len = signal.len() as i64;
    let radius = (kernel.len() / 2) as i64;
    for (j, slot) in out.iter_mut().enumerate() {
        let mut acc = 0.0;
        for (k, &w) in kernel.iter().enumerate() {
            let idx = (j as i64 - radius + k as i64).rem_euclid(len);
            acc += w * signal[idx as usize];
        }
        *slot = acc;
    }
}

/// Gradient-magnitude histogram with unit-width bins: bin `k` counts
/// entries with `k <= sqrt(h^2 + ... )` — here per-entry magnitude
/// `|y|` — `< k + 1`, pooling the horizontal and vertical components.
/// Magnitudes of 255 land in the final bin.
pub fn magnitude_histogram(g: &GradientField) -> [u64; 256] {
    let mut bins = [0u64; 256];
    for y in g.iter() {
        let bin = (y.abs().floor() as usize).min(255);
        bins[bin] += 1;
    }
    bins
}

/// Writes a histogram as CSV with header `bin_low,bin_high,count`.
pub fn write_histogram_csv<P: AsRef<Path>>(path: P, bins: &[u64; 256]) -> Result<()> {
    let path = path.as_ref();
    let io_err = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let mut out = std::io::BufWriter::new(std::fs::File::create(path).map_err(io_err)?);
    writeln!(out, "bin_low,bin_high,count").map_err(io_err)?;
    for (k, count) in bins.iter().enumerate() {
        writeln!(out, "{},{},{}", k, k + 1, count).map_err(io_err)?;
    }
    out.flush().map_err(io_err)
}
