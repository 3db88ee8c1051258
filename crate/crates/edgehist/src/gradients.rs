//! Backward-difference operators with periodic boundary.
//!
//! `grad` stacks the horizontal and vertical backward differences of an
//! image into a [`GradientField`]; `grad_adjoint` is its exact transpose
//! (a negative forward divergence). Both wrap at the image borders, which
//! makes the combined operator diagonal in the 2-D Fourier basis — the
//! eigenvalues come from [`gram_eigenvalues`] and drive both the FISTA
//! step size bound and the exact ADMM linear solve.

use crate::image::Image;

/// Horizontal and vertical backward differences of an `m x n` image,
/// each stored row-major with the same length as the image.
///
/// When flattened into a single vector the order is fixed: all horizontal
/// entries first, then all vertical entries.
#[derive(Debug, Clone, PartialEq)]
pub struct GradientField {
    height: usize,
    width: usize,
    h: Vec<f64>,
    v: Vec<f64>,
}

impl GradientField {
    /// Panics unless both component lengths equal `height * width`.
    pub fn new(height: usize, width: usize, h: Vec<f64>, v: Vec<f64>) -> Self {
        assert!(height > 0 && width > 0, "field dimensions must be positive");
        assert_eq!(h.len(), height * width, "h length must be h*w");
        assert_eq!(v.len(), height * width, "v length must be h*w");
        Self {
            height,
            width,
            h,
            v,
        }
    }

    /// An all-zero field of the given shape.
    pub fn zeros(height: usize, width: usize) -> Self {
        Self::new(
            height,
            width,
            vec![0.0; height * width],
            vec![0.0; height * width],
        )
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Horizontal component (difference against the left neighbor).
    pub fn h(&self) -> &[f64] {
        &self.h
    }

    /// Vertical component (difference against the neighbor above).
    pub fn v(&self) -> &[f64] {
        &self.v
    }

    pub(crate) fn h_mut(&mut self) -> &mut [f64] {
        &mut self.h
    }

    pub(crate) fn v_mut(&mut self) -> &mut [f64] {
        &mut self.v
    }

    /// Total entry count `2 * height * width`.
    pub fn len(&self) -> usize {
        2 * self.h.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// All entries, horizontal block first.
    pub fn iter(&self) -> impl Iterator<Item = f64> + '_ {
        self.h.iter().chain(self.v.iter()).copied()
    }

    /// Applies `f` to every entry of both components.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> GradientField {
        GradientField::new(
            self.height,
            self.width,
            self.h.iter().map(|&x| f(x)).collect(),
            self.v.iter().map(|&x| f(x)).collect(),
        )
    }

    pub fn same_shape(&self, other: &GradientField) -> bool {
        self.height == other.height && self.width == other.width
    }
}

/// Backward differences with periodic wrap: at each pixel,
/// `h = value - left neighbor`, `v = value - neighbor above`, where the
/// neighbors wrap around at column 0 and row 0 (2-D torus).
pub fn grad(img: &Image) -> GradientField {
    let mut out = GradientField::zeros(img.height(), img.width());
    grad_into(img.height(), img.width(), img.data(), &mut out);
    out
}

/// In-place version of [`grad`] on a raw row-major buffer.
pub(crate) fn grad_into(m: usize, n: usize, x: &[f64], out: &mut GradientField) {
    debug_assert_eq!(x.len(), m * n);
    debug_assert_eq!(out.height, m);
    debug_assert_eq!(out.width, n);
    for r in 0..m {
        let row = r * n;
        let above = (if r == 0 { m - 1 } else { r - 1 }) * n;
        for c in 0..n {
            let left = if c == 0 { n - 1 } else { c - 1 };
            out.h[row + c] = x[row + c] - x[row + left];
            out.v[row + c] = x[row + c] - x[above + c];
        }
    }
}

/// Transpose of [`grad`]: satisfies `<grad(x), g> == <x, grad_adjoint(g)>`
/// up to floating-point round-off. The result is image-shaped but not
/// range-limited.
pub fn grad_adjoint(g: &GradientField) -> Vec<f64> {
    let mut out = vec![0.0; g.height * g.width];
    grad_adjoint_into(g, &mut out);
    out
}

pub(crate) fn grad_adjoint_into(g: &GradientField, out: &mut [f64]) {
    let (m, n) = (g.height, g.width);
    debug_assert_eq!(out.len(), m * n);
    for r in 0..m {
        let row = r * n;
        let below = (if r == m - 1 { 0 } else { r + 1 }) * n;
        for c in 0..n {
            let right = if c == n - 1 { 0 } else { c + 1 };
            out[row + c] =
                g.h[row + c] - g.h[row + right] + g.v[row + c] - g.v[below + c];
        }
    }
}

/// Eigenvalues of the combined difference operator's Gram matrix under
/// the 2-D Fourier basis, as a row-major `m x n` array indexed by
/// frequency: `4 sin^2(pi k1 / m) + 4 sin^2(pi k2 / n)`.
///
/// The maximum never exceeds 8, which bounds the operator norm.
pub fn gram_eigenvalues(m: usize, n: usize) -> Vec<f64> {
    assert!(m >= 1 && n >= 1);
    let mut out = Vec::with_capacity(m * n);
    for k1 in 0..m {
        let s1 = (std::f64::consts::PI * k1 as f64 / m as f64).sin();
        let row_term = 4.0 * s1 * s1;
        for k2 in 0..n {
            let s2 = (std::f64::consts::PI * k2 as f64 / n as f64).sin();
            out.push(row_term + 4.0 * s2 * s2);
        }
    }
    out
}
