//! Projected gradient ascent on a product of unit spheres.
//!
//! The iterate is a concatenation of complex blocks, each kept at unit norm.
//! A step moves along the Riemannian gradient (the Euclidean gradient with
//! each block's radial part removed) and renormalizes. Trial step lengths
//! come from the Barzilai-Borwein formula and are shortened by Armijo
//! backtracking; a single move is never longer than [`MAX_MOVE`].

use crate::qcore::matrix::{C64, ZERO};

use super::{GradientMode, OptimizerConfig};

/// Longest allowed move in parameter norm.
pub const MAX_MOVE: f64 = 0.2;
/// A restart counts as converged when its final gradient norm is below this.
pub const CONVERGED_GRAD_NORM: f64 = 1e-6;
/// Iteration stops once the gradient is this small.
const STOP_GRAD_NORM: f64 = 1e-9;
/// Window for the stalled-objective test.
const STALL_WINDOW: usize = 20;
const ARMIJO: f64 = 1e-4;
/// Central-difference step for [`GradientMode::FiniteDifference`].
pub const FD_STEP: f64 = 1e-6;

/// A smooth function of unit-normalized complex blocks.
pub(crate) trait Objective: Sync {
    /// Lengths of the blocks that are normalized independently.
    fn blocks(&self) -> &[usize];

    fn value(&self, x: &[C64]) -> f64;

    /// Value and Euclidean gradient (real inner product on `Cⁿ`).
    fn value_and_gradient(&self, x: &[C64]) -> (f64, Vec<C64>);

    /// Nonsmooth objectives may legitimately end at a kink.
    fn is_smooth(&self) -> bool {
        true
    }
}

#[derive(Clone, Debug)]
pub(crate) struct AscentOutcome {
    pub x: Vec<C64>,
    pub value: f64,
    pub grad_norm: f64,
    pub converged: bool,
    pub hit_iteration_limit: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Stop {
    Gradient,
    Stalled,
    StepCollapsed,
    MaxIterations,
}

pub(crate) fn normalize_blocks(x: &mut [C64], blocks: &[usize]) {
    let mut start = 0;
    for &len in blocks {
        let b = &mut x[start..start + len];
        let n = b.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if n > 0.0 {
            b.iter_mut().for_each(|z| *z /= n);
        }
        start += len;
    }
}

/// Removes the radial component of `g` in every block.
fn project(x: &[C64], g: &mut [C64], blocks: &[usize]) {
    let mut start = 0;
    for &len in blocks {
        let xb = &x[start..start + len];
        let radial: f64 = xb
            .iter()
            .zip(&g[start..start + len])
            .map(|(a, b)| (a.conj() * b).re)
            .sum();
        for (gi, xi) in g[start..start + len].iter_mut().zip(xb) {
            *gi -= xi * radial;
        }
        start += len;
    }
}

fn norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn real_dot(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x.conj() * y).re).sum()
}

/// Central differences of `value` along every real coordinate, evaluated
/// through the block normalization.
pub(crate) fn finite_difference_gradient<O: Objective + ?Sized>(obj: &O, x: &[C64], h: f64) -> Vec<C64> {
    let blocks = obj.blocks();
    let mut grad = vec![ZERO; x.len()];
    let mut probe = x.to_vec();
    for i in 0..x.len() {
        for (unit, part) in [(C64::new(1.0, 0.0), 0), (C64::new(0.0, 1.0), 1)] {
            probe.copy_from_slice(x);
            probe[i] += unit * h;
            normalize_blocks(&mut probe, blocks);
            let up = obj.value(&probe);
            probe.copy_from_slice(x);
            probe[i] -= unit * h;
            normalize_blocks(&mut probe, blocks);
            let down = obj.value(&probe);
            let d = (up - down) / (2.0 * h);
            if part == 0 {
                grad[i].re = d;
            } else {
                grad[i].im = d;
            }
        }
    }
    grad
}

fn evaluate<O: Objective + ?Sized>(obj: &O, x: &[C64], mode: GradientMode) -> (f64, Vec<C64>) {
    match mode {
        GradientMode::AnalyticWhereAvailable => {
            let (f, mut g) = obj.value_and_gradient(x);
            project(x, &mut g, obj.blocks());
            (f, g)
        }
        GradientMode::FiniteDifference => {
            let f = obj.value(x);
            let mut g = finite_difference_gradient(obj, x, FD_STEP);
            project(x, &mut g, obj.blocks());
            (f, g)
        }
    }
}

/// Local ascent from `x0`.
pub(crate) fn ascend<O: Objective + ?Sized>(obj: &O, x0: Vec<C64>, cfg: &OptimizerConfig) -> AscentOutcome {
    let blocks = obj.blocks().to_vec();
    let mut x = x0;
    normalize_blocks(&mut x, &blocks);
    let (mut f, mut g) = evaluate(obj, &x, cfg.gradient_mode);
    let mut gn = norm(&g);
    let mut trial: f64 = 1.0;
    let mut history = vec![f];
    let mut stop = Stop::MaxIterations;
    let mut iterations = 0;

    while iterations < cfg.max_iterations {
        if gn < STOP_GRAD_NORM {
            stop = Stop::Gradient;
            break;
        }
        iterations += 1;
        let mut step = trial.min(MAX_MOVE / gn);
        let accepted = loop {
            let mut cand: Vec<C64> = x.iter().zip(&g).map(|(a, b)| a + b * step).collect();
            normalize_blocks(&mut cand, &blocks);
            let (fc, gc) = evaluate(obj, &cand, cfg.gradient_mode);
            if fc >= f + ARMIJO * step * gn * gn {
                break Some((cand, fc, gc, step));
            }
            step *= 0.5;
            if step * gn < cfg.step_tolerance {
                break None;
            }
        };
        let Some((cand, fc, gc, step)) = accepted else {
            stop = Stop::StepCollapsed;
            break;
        };
        // Barzilai-Borwein length for the next trial.
        let s: Vec<C64> = cand.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<C64> = gc.iter().zip(&g).map(|(a, b)| a - b).collect();
        let ss = real_dot(&s, &s);
        let sy = real_dot(&s, &y);
        trial = if sy < 0.0 { ss / -sy } else { 4.0 * step };
        trial = trial.clamp(1e-10, 1e4);

        x = cand;
        f = fc;
        g = gc;
        gn = norm(&g);
        history.push(f);
        if history.len() > STALL_WINDOW
            && f - history[history.len() - 1 - STALL_WINDOW] < cfg.objective_tolerance
        {
            stop = Stop::Stalled;
            break;
        }
        if step * gn < cfg.step_tolerance && gn < CONVERGED_GRAD_NORM {
            stop = Stop::StepCollapsed;
            break;
        }
    }

    let converged = gn < CONVERGED_GRAD_NORM
        || (!obj.is_smooth() && stop != Stop::MaxIterations);
    AscentOutcome {
        x,
        value: f,
        grad_norm: gn,
        converged,
        hit_iteration_limit: stop == Stop::MaxIterations,
    }
}
