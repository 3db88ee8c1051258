//! Feasible sets for the solvers and their Euclidean projections.
//!
//! Every application constrains pixels to the dynamic range `[0, 255]`.
//! Scan-through removal additionally pins background pixels — those whose
//! reference value reaches the detected background level — to their
//! reference values, so the solver cannot touch them.

use crate::image::{Error, Image, Result, MAX_INTENSITY, MIN_INTENSITY};

/// A box `[lo, hi]` per pixel, optionally with a set of pixels pinned to
/// fixed values. Projection is exact and cheap: clamp, then overwrite
/// the pinned indices.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintSet {
    lo: f64,
    hi: f64,
    /// `(index, value)` pairs sorted by index; values lie in `[lo, hi]`.
    pinned: Vec<(usize, f64)>,
    /// Background level that generated the pins, if any.
    alpha: Option<f64>,
}

impl ConstraintSet {
    /// The plain dynamic-range box `[0, 255]` with no pinned pixels.
    pub fn make_box() -> Self {
        Self {
            lo: MIN_INTENSITY,
            hi: MAX_INTENSITY,
            pinned: Vec::new(),
            alpha: None,
        }
    }

    /// Box plus pinning for scan-through removal: every pixel `i` of the
    /// reference image with `x0[i] >= alpha` is pinned to `x0[i]`.
    ///
    /// Reference values must already lie in `[0, 255]`.
    pub fn make_scan(x0: &Image, alpha: f64) -> Self {
        let pinned = x0
            .data()
            .iter()
            .enumerate()
            .filter(|&(_, &v)| v >= alpha)
            .map(|(i, &v)| {
                debug_assert!((MIN_INTENSITY..=MAX_INTENSITY).contains(&v));
                (i, v)
            })
            .collect();
        Self {
            lo: MIN_INTENSITY,
            hi: MAX_INTENSITY,
            pinned,
            alpha: Some(alpha),
        }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    /// The background level behind the pin set, when one was used.
    pub fn alpha(&self) -> Option<f64> {
        self.alpha
    }

    /// Pinned `(index, value)` pairs in index order.
    pub fn pinned(&self) -> &[(usize, f64)] {
        &self.pinned
    }

    /// Exact Euclidean projection: clamp to the box, then restore pinned
    /// values. Errors if a pinned index does not fit `x`.
    pub fn project(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_len(x.len())?;
        let mut out = x.to_vec();
        self.project_in_place(&mut out);
        Ok(out)
    }

    /// In-place projection; the caller guarantees the length fits.
    pub(crate) fn project_in_place(&self, x: &mut [f64]) {
        for v in x.iter_mut() {
            *v = v.clamp(self.lo, self.hi);
        }
        for &(i, value) in &self.pinned {
            x[i] = value;
        }
    }

    /// Exact membership test.
    pub fn contains(&self, x: &[f64]) -> bool {
        if self.check_len(x.len()).is_err() {
            return false;
        }
        x.iter().all(|&v| v >= self.lo && v <= self.hi)
            && self.pinned.iter().all(|&(i, value)| x[i] == value)
    }

    fn check_len(&self, len: usize) -> Result<()> {
        match self.pinned.last() {
            Some(&(i, _)) if i >= len => Err(Error::DimensionMismatch {
                context: format!("pinned index {i} outside array of length {len}"),
            }),
            _ => Ok(()),
        }
    }
}
