//! Constrained gradient-matching solvers.
//!
//! Both solvers minimize `||Gx - d||_p^p` over a [`ConstraintSet`], where
//! `G` stacks the periodic backward differences and `d` is a target
//! gradient field (usually a thresholded one).
//!
//! * `p = 2`: [`fista`] — accelerated projected gradient. The smooth part
//!   has gradient `2 G^T (Gx - d)` and its Lipschitz constant is at most
//!   16 (twice the spectral bound of the difference operator), so the
//!   default step size `1/16` needs no line search.
//! * `p = 1`: [`admm`] — a three-block splitting with an extra copy `z`
//!   of `x`, so that the range/pinning projection and the linear step are
//!   both closed-form: `min ||y - d||_1 + i_C(z)` subject to `Gx = y`,
//!   `x = z`. The x-update solves `(G^T G + I) x = G^T(y - u_y) + (z -
//!   u_z)` exactly through the FFT diagonalization; the y-update is
//!   soft-thresholding shifted by `d`; the z-update is the projection.
//!
//! Both are deterministic: identical inputs produce bit-identical
//! iterates. The returned image is always projected onto the constraint
//! set, so range and pinning hold exactly even at the iteration cap.

use crate::constraints::ConstraintSet;
use crate::fft::Fft2;
use crate::gradients::{grad_adjoint_into, grad_into, gram_eigenvalues, GradientField};
use crate::image::{Error, Image, Result};

/// Which norm the data term uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Norm {
    /// `||.||_1` — solved by [`admm`].
    L1,
    /// `||.||_2^2` — solved by [`fista`].
    L2,
}

impl Norm {
    pub fn p(self) -> u8 {
        match self {
            Norm::L1 => 1,
            Norm::L2 => 2,
        }
    }

    pub fn from_p(p: u8) -> Option<Norm> {
        match p {
            1 => Some(Norm::L1),
            2 => Some(Norm::L2),
            _ => None,
        }
    }
}

/// Iterations over which the relative objective change is measured for
/// the FISTA stopping rule.
const STOP_WINDOW: usize = 5;

/// Solver parameters. All fields must be positive.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Data-term norm; decides which solver the pipeline dispatches to.
    pub norm: Norm,
    /// Inner iteration cap.
    pub max_iter: usize,
    /// Relative-change (FISTA) or scaled-residual (ADMM) stopping
    /// threshold.
    pub tol: f64,
    /// ADMM penalty parameter.
    pub rho: f64,
    /// Lipschitz constant of the smooth part for FISTA; 16 covers every
    /// image size because the difference operator's Gram spectrum is
    /// bounded by 8.
    pub lipschitz: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            norm: Norm::L2,
            max_iter: 500,
            tol: 1e-4,
            rho: 1.0,
            lipschitz: 16.0,
        }
    }
}

impl SolverConfig {
    fn validate(&self) {
        assert!(self.max_iter >= 1, "max_iter must be positive");
        assert!(self.tol > 0.0, "tol must be positive");
        assert!(self.rho > 0.0, "rho must be positive");
        assert!(self.lipschitz > 0.0, "lipschitz must be positive");
    }
}

/// Outcome of a solve.
#[derive(Debug, Clone)]
pub struct SolveResult {
    /// Final iterate, projected onto the constraint set.
    pub x: Image,
    /// Objective value at the initial point followed by one entry per
    /// iteration.
    pub objective_trace: Vec<f64>,
    /// ADMM primal residual pair `(||Gx - y||, ||x - z||)` per iteration;
    /// empty for FISTA.
    pub residual_trace: Vec<[f64; 2]>,
    /// Iterations actually run.
    pub iterations_run: usize,
    /// Whether the stopping rule fired before the iteration cap.
    pub converged: bool,
}

impl SolveResult {
    /// Objective of the returned (feasible) iterate.
    pub fn final_objective(&self, d: &GradientField, norm: Norm) -> f64 {
        objective(&self.x, d, norm)
    }
}

/// `sum_j |(Gx)_j - d_j|^p` for `p` in `{1, 2}`.
pub fn objective(x: &Image, d: &GradientField, norm: Norm) -> f64 {
    assert_eq!(x.height(), d.height(), "image/field height mismatch");
    assert_eq!(x.width(), d.width(), "image/field width mismatch");
    let mut field = GradientField::zeros(d.height(), d.width());
    grad_into(x.height(), x.width(), x.data(), &mut field);
    objective_of_grad(&field, d, norm)
}

fn objective_of_grad(gx: &GradientField, d: &GradientField, norm: Norm) -> f64 {
    let residuals = gx
        .h()
        .iter()
        .zip(d.h())
        .chain(gx.v().iter().zip(d.v()))
        .map(|(&a, &b)| a - b);
    match norm {
        Norm::L1 => residuals.map(f64::abs).sum(),
        Norm::L2 => residuals.map(|r| r * r).sum(),
    }
}

fn check_shapes(d: &GradientField, x_init: &Image) -> Result<()> {
    if d.height() != x_init.height() || d.width() != x_init.width() {
        return Err(Error::DimensionMismatch {
            context: format!(
                "target field is {}x{} but initial image is {}x{}",
                d.height(),
                d.width(),
                x_init.height(),
                x_init.width()
            ),
        });
    }
    Ok(())
}

/// Accelerated projected gradient for the `p = 2` model.
///
/// Stops when the objective changes by less than `cfg.tol` relatively
/// over a five-iteration window, or at `cfg.max_iter`. The result is
/// exactly feasible.
pub fn fista(
    d: &GradientField,
    c: &ConstraintSet,
    x_init: &Image,
    cfg: &SolverConfig,
) -> Result<SolveResult> {
    cfg.validate();
    check_shapes(d, x_init)?;
    let (m, n) = (d.height(), d.width());
    let mn = m * n;
    let step = 2.0 / cfg.lipschitz; // folds in the factor 2 of the gradient

    let mut x = c.project(x_init.data())?;
    let mut x_prev = x.clone();
    let mut y = x.clone();
    let mut t: f64 = 1.0;

    let mut field = GradientField::zeros(m, n);
    let mut ascent = vec![0.0; mn];

    grad_into(m, n, &x, &mut field);
    let mut trace = Vec::with_capacity(cfg.max_iter + 1);
    trace.push(objective_of_grad(&field, d, Norm::L2));

    let mut converged = false;
    let mut iterations_run = 0;
    for k in 1..=cfg.max_iter {
        // ascent = G^T (Gy - d); the step size absorbs the factor 2.
        grad_into(m, n, &y, &mut field);
        for (g, dv) in field.h_mut().iter_mut().zip(d.h()) {
            *g -= dv;
        }
        for (g, dv) in field.v_mut().iter_mut().zip(d.v()) {
            *g -= dv;
        }
        grad_adjoint_into(&field, &mut ascent);

        std::mem::swap(&mut x_prev, &mut x);
        for i in 0..mn {
            x[i] = y[i] - step * ascent[i];
        }
        c.project_in_place(&mut x);

        let t_next = 0.5 * (1.0 + (1.0 + 4.0 * t * t).sqrt());
        let beta = (t - 1.0) / t_next;
        for i in 0..mn {
            y[i] = x[i] + beta * (x[i] - x_prev[i]);
        }
        t = t_next;

        grad_into(m, n, &x, &mut field);
        let f = objective_of_grad(&field, d, Norm::L2);
        if !f.is_finite() {
            return Err(Error::NonFinite { context: "fista" });
        }
        trace.push(f);
        iterations_run = k;

        if k >= STOP_WINDOW {
            let before = trace[trace.len() - 1 - STOP_WINDOW];
            let rel = (f - before).abs() / before.max(1e-12);
            if rel < cfg.tol {
                converged = true;
                break;
            }
        }
    }

    Ok(SolveResult {
        x: Image::new(m, n, x),
        objective_trace: trace,
        residual_trace: Vec::new(),
        iterations_run,
        converged,
    })
}

#[inline]
fn soft_threshold(v: f64, t: f64) -> f64 {
    if v > t {
        v - t
    } else if v < -t {
        v + t
    } else {
        0.0
    }
}

/// Three-block ADMM for the `p = 1` model.
///
/// `y_init` seeds the split gradient variable; the smoothing pipeline
/// passes the target `d` itself. Stops once the primal residuals and the
/// split-variable movement (the dual-residual surrogate) all drop below
/// `cfg.tol * sqrt(m n) * 255`, or at `cfg.max_iter`. The movement term
/// matters: the soft-threshold offset can cancel the scaled dual exactly,
/// zeroing the primal residuals several iterations before the split
/// variables stop moving. The returned image is projected, so it is
/// feasible even without full convergence.
pub fn admm(
    d: &GradientField,
    c: &ConstraintSet,
    x_init: &Image,
    y_init: &GradientField,
    cfg: &SolverConfig,
) -> Result<SolveResult> {
    cfg.validate();
    check_shapes(d, x_init)?;
    if !d.same_shape(y_init) {
        return Err(Error::DimensionMismatch {
            context: "y_init shape differs from target field".into(),
        });
    }
    let (m, n) = (d.height(), d.width());
    let mn = m * n;
    let shrink = 1.0 / cfg.rho;
    let residual_threshold = cfg.tol * (mn as f64).sqrt() * 255.0;

    let mut x = x_init.data().to_vec();
    let mut z = c.project(&x)?;
    let mut z_prev = z.clone();
    let mut y = y_init.clone();
    let mut dual_y = GradientField::zeros(m, n);
    let mut dual_z = vec![0.0; mn];

    let eigs = gram_eigenvalues(m, n);
    let mut fft = Fft2::new(m, n);
    let mut gx = GradientField::zeros(m, n);
    let mut split_arg = GradientField::zeros(m, n);
    let mut rhs = vec![0.0; mn];

    grad_into(m, n, &x, &mut gx);
    let mut trace = Vec::with_capacity(cfg.max_iter + 1);
    trace.push(objective_of_grad(&gx, d, Norm::L1));
    let mut residuals = Vec::with_capacity(cfg.max_iter);

    let mut converged = false;
    let mut iterations_run = 0;
    for k in 1..=cfg.max_iter {
        // x-step: (G^T G + I) x = G^T (y - u_y) + (z - u_z).
        for i in 0..mn {
            split_arg.h_mut()[i] = y.h()[i] - dual_y.h()[i];
            split_arg.v_mut()[i] = y.v()[i] - dual_y.v()[i];
        }
        grad_adjoint_into(&split_arg, &mut rhs);
        for i in 0..mn {
            rhs[i] += z[i] - dual_z[i];
        }
        fft.solve_gram_plus_identity(&rhs, &eigs, &mut x);

        // y-step: soft-thresholding around the target.
        grad_into(m, n, &x, &mut gx);
        let mut movement = 0.0;
        for i in 0..mn {
            let yh = d.h()[i] + soft_threshold(gx.h()[i] + dual_y.h()[i] - d.h()[i], shrink);
            let yv = d.v()[i] + soft_threshold(gx.v()[i] + dual_y.v()[i] - d.v()[i], shrink);
            movement += (yh - y.h()[i]).powi(2) + (yv - y.v()[i]).powi(2);
            y.h_mut()[i] = yh;
            y.v_mut()[i] = yv;
        }

        // z-step: projection of x + u_z.
        std::mem::swap(&mut z, &mut z_prev);
        for i in 0..mn {
            z[i] = x[i] + dual_z[i];
        }
        c.project_in_place(&mut z);
        for i in 0..mn {
            movement += (z[i] - z_prev[i]).powi(2);
        }
        let movement = movement.sqrt();

        // Dual ascent and primal residuals.
        let mut res_y = 0.0;
        for i in 0..mn {
            let rh = gx.h()[i] - y.h()[i];
            let rv = gx.v()[i] - y.v()[i];
            dual_y.h_mut()[i] += rh;
            dual_y.v_mut()[i] += rv;
            res_y += rh * rh + rv * rv;
        }
        let mut res_z = 0.0;
        for i in 0..mn {
            let r = x[i] - z[i];
            dual_z[i] += r;
            res_z += r * r;
        }
        let res_y = res_y.sqrt();
        let res_z = res_z.sqrt();

        let f = objective_of_grad(&gx, d, Norm::L1);
        if !f.is_finite() || !res_y.is_finite() || !res_z.is_finite() {
            return Err(Error::NonFinite { context: "admm" });
        }
        trace.push(f);
        residuals.push([res_y, res_z]);
        iterations_run = k;

        if res_y < residual_threshold
            && res_z < residual_threshold
            && movement < residual_threshold
        {
            converged = true;
            break;
        }
    }

    // Feasibility is part of the contract; project the final iterate.
    c.project_in_place(&mut x);
    Ok(SolveResult {
        x: Image::new(m, n, x),
        objective_trace: trace,
        residual_trace: residuals,
        iterations_run,
        converged,
    })
}
