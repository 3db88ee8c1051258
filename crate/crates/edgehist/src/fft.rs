//! Minimal 2-D FFT wrapper used for the exact ADMM linear step.
//!
//! The periodic difference operators are circulant in both axes, so
//! `(G^T G + I) x = rhs` diagonalizes under the 2-D DFT: transform the
//! right-hand side, divide each bin by `eigenvalue + 1`, transform back.

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};
use std::sync::Arc;

pub(crate) struct Fft2 {
    m: usize,
    n: usize,
    fwd_rows: Arc<dyn Fft<f64>>,
    inv_rows: Arc<dyn Fft<f64>>,
    fwd_cols: Arc<dyn Fft<f64>>,
    inv_cols: Arc<dyn Fft<f64>>,
    buf: Vec<Complex<f64>>,
    transposed: Vec<Complex<f64>>,
}

impl Fft2 {
    pub fn new(m: usize, n: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            m,
            n,
            fwd_rows: planner.plan_fft_forward(n),
            inv_rows: planner.plan_fft_inverse(n),
            fwd_cols: planner.plan_fft_forward(m),
            inv_cols: planner.plan_fft_inverse(m),
            buf: vec![Complex::default(); m * n],
            transposed: vec![Complex::default(); m * n],
        }
    }

    /// Solves `(G^T G + I) x = rhs` exactly, where `gram_eigs` are the
    /// operator's Fourier eigenvalues in row-major frequency order.
    pub fn solve_gram_plus_identity(
        &mut self,
        rhs: &[f64],
        gram_eigs: &[f64],
        out: &mut [f64],
    ) {
        let (m, n) = (self.m, self.n);
        debug_assert_eq!(rhs.len(), m * n);
        debug_assert_eq!(gram_eigs.len(), m * n);
        debug_assert_eq!(out.len(), m * n);

        for (slot, &r) in self.buf.iter_mut().zip(rhs) {
            *slot = Complex::new(r, 0.0);
        }
        for row in self.buf.chunks_exact_mut(n) {
            self.fwd_rows.process(row);
        }
        // Column transforms run on the transposed layout so every FFT
        // sees contiguous memory; the spectrum of bin (k1, k2) then sits
        // at transposed[k2 * m + k1].
        transpose(&self.buf, &mut self.transposed, m, n);
        for col in self.transposed.chunks_exact_mut(m) {
            self.fwd_cols.process(col);
        }

        for k2 in 0..n {
            let col = &mut self.transposed[k2 * m..(k2 + 1) * m];
            for (k1, slot) in col.iter_mut().enumerate() {
                *slot /= gram_eigs[k1 * n + k2] + 1.0;
            }
        }

        for col in self.transposed.chunks_exact_mut(m) {
            self.inv_cols.process(col);
        }
        transpose(&self.transposed, &mut self.buf, n, m);
        for row in self.buf.chunks_exact_mut(n) {
            self.inv_rows.process(row);
        }

        let scale = 1.0 / (m * n) as f64;
        for (slot, value) in out.iter_mut().zip(&self.buf) {
            *slot = value.re * scale;
        }
    }
}

/// `src` is `rows x cols` row-major; `dst` becomes `cols x rows`.
fn transpose(src: &[Complex<f64>], dst: &mut [Complex<f64>], rows: usize, cols: usize) {
    for r in 0..rows {
        for c in 0..cols {
            dst[c * rows + r] = src[r * cols + c];
        }
    }
}
