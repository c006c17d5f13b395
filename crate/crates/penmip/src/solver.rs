//! Alternating block minimization of the penalized objective
//! `f(x, y) + phi_lambda(x, a)` with a geometrically growing penalty
//! coefficient.
//!
//! Each outer iteration performs, in order: the continuous (`y`) step, the
//! relaxed binary (`x`) step over `[0,1]^n` intersected with the region
//! slice, the closed-form auxiliary (`a`) step, and then the update
//! `lambda <- rho * lambda`. Within one iteration the penalized value cannot
//! increase across the three steps: each block solve starts from the previous
//! iterate and only accepts improvements.

use std::ops::Range;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::objective::Objective;
use crate::penalty::{distance_raw, penalty_gap_raw, threshold_raw};
use crate::subsolver::{minimize, project, FeasibleRegion, SubsolverParams};
use crate::vecmath::diff_inf;

/// Geometric penalty-coefficient schedule `lambda_t = rho^t * lambda0`.
///
/// The current value is always recomputed from the exponent, never
/// accumulated by repeated multiplication, so it cannot drift.
#[derive(Debug, Clone)]
pub struct PenaltySchedule {
    lambda0: f64,
    rho: f64,
    step: i32,
}

impl PenaltySchedule {
    /// Growing schedule; requires `lambda0 > 0` and `rho > 1`.
    pub fn new(lambda0: f64, rho: f64) -> Result<Self> {
        if !(lambda0 > 0.0) {
            return Err(Error::InvalidLambda(lambda0));
        }
        if !(rho > 1.0) {
            return Err(Error::InvalidRho(rho));
        }
        Ok(Self { lambda0, rho, step: 0 })
    }

    /// Constant schedule (`rho = 1`), used by fixed-lambda sweeps.
    pub fn fixed(lambda: f64) -> Result<Self> {
        if !(lambda > 0.0) {
            return Err(Error::InvalidLambda(lambda));
        }
        Ok(Self { lambda0: lambda, rho: 1.0, step: 0 })
    }

    pub fn lambda0(&self) -> f64 {
        self.lambda0
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn step(&self) -> i32 {
        self.step
    }

    pub fn current(&self) -> f64 {
        self.lambda_at(self.step)
    }

    pub fn lambda_at(&self, t: i32) -> f64 {
        self.rho.powi(t) * self.lambda0
    }

    pub fn advance(&mut self) {
        self.step += 1;
    }

    /// A copy rewound to `t = 0`.
    pub fn restarted(&self) -> Self {
        Self { step: 0, ..*self }
    }
}

/// How the continuous block is updated each iteration.
#[derive(Clone)]
pub enum ContinuousUpdate {
    /// Minimize over the continuous slice with the convex subsolver.
    Subsolve,
    /// Closed-form map `x -> y`, for problems whose continuous variables are
    /// auxiliary quantities pinned by the binary block (the map must return a
    /// point that is feasible together with `x`).
    ClosedForm(Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>),
}

/// A mixed-binary problem: minimize `f(x, y)` over a convex region with
/// `x ∈ {0,1}^n` relaxed to `[0,1]^n` and `y ∈ R^m`.
///
/// The joint vector is laid out as `z = [x | y]`. The region's bounds on the
/// binary block are intersected with `[0,1]` at construction.
#[derive(Clone)]
pub struct MixedProblem {
    n: usize,
    m: usize,
    objective: Objective,
    region: FeasibleRegion,
    lipschitz_x: Option<f64>,
    continuous_update: ContinuousUpdate,
    blocks: Vec<Range<usize>>,
    joint_xy: bool,
}

impl MixedProblem {
    pub fn new(n: usize, m: usize, objective: Objective, region: FeasibleRegion) -> Result<Self> {
        if region.dim() != n + m {
            return Err(Error::DimensionMismatch {
                expected: n + m,
                got: region.dim(),
            });
        }
        if n == 0 {
            return Err(Error::InvalidInstance(
                "binary block must be nonempty".into(),
            ));
        }
        let mut region = region;
        for i in 0..n {
            region.tighten_bounds(i, 0.0, 1.0);
        }
        Ok(Self {
            n,
            m,
            objective,
            region,
            lipschitz_x: None,
            continuous_update: ContinuousUpdate::Subsolve,
            blocks: vec![0..m],
            joint_xy: false,
        })
    }

    /// Declares the Lipschitz constant of `f` in `x` over `[0,1]^n`.
    pub fn with_lipschitz(mut self, l: f64) -> Self {
        self.lipschitz_x = Some(l);
        self
    }

    pub fn with_continuous_update(mut self, update: ContinuousUpdate) -> Self {
        self.continuous_update = update;
        self
    }

    /// Declares continuous sub-blocks (ranges are offsets into `y`).
    /// [`solve_multiblock`] updates them one at a time in the given order.
    pub fn with_blocks(mut self, blocks: Vec<Range<usize>>) -> Self {
        assert!(!blocks.is_empty());
        for b in &blocks {
            assert!(b.end <= self.m, "block range exceeds continuous block");
        }
        self.blocks = blocks;
        self
    }

    /// Declares the objective jointly convex in `(x, y)` so both blocks can
    /// be updated in a single subsolver call per iteration.
    pub fn with_joint_xy(mut self, joint: bool) -> Self {
        self.joint_xy = joint;
        self
    }

    pub fn binary_dim(&self) -> usize {
        self.n
    }

    pub fn continuous_dim(&self) -> usize {
        self.m
    }

    pub fn objective(&self) -> &Objective {
        &self.objective
    }

    pub fn region(&self) -> &FeasibleRegion {
        &self.region
    }

    pub fn lipschitz_x(&self) -> Option<f64> {
        self.lipschitz_x
    }

    /// Penalized objective `f(x,y) + phi_lambda(x,a)`.
    pub fn penalized(&self, x: &[f64], y: &[f64], aux: &[f64], lambda: f64) -> f64 {
        let z = [x, y].concat();
        self.objective.value(&z) + lambda * penalty_gap_raw(x, aux)
    }

    /// Midpoint convexity probe along random in-region segments, one block at
    /// a time. Returns the largest violation found; values materially above
    /// zero flag a modeling error in a problem declared block-convex.
    pub fn sample_block_convexity_violation(&self, samples: usize, seed: u64) -> f64 {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(seed);
        let dim = self.n + self.m;
        let draw_point = |rng: &mut StdRng| -> Vec<f64> {
            (0..dim)
                .map(|i| {
                    let (lo, hi) = self.region.bounds(i);
                    let lo = lo.max(-1e3);
                    let hi = hi.min(1e3);
                    rng.gen_range(lo..=hi)
                })
                .collect()
        };
        let mut blocks: Vec<Vec<usize>> = vec![(0..self.n).collect()];
        for b in &self.blocks {
            blocks.push((self.n + b.start..self.n + b.end).collect());
        }
        let mut worst: f64 = 0.0;
        for _ in 0..samples {
            let base = draw_point(&mut rng);
            for block in &blocks {
                if block.is_empty() {
                    continue;
                }
                let mut p = base.clone();
                let mut q = base.clone();
                for &i in block {
                    let (lo, hi) = self.region.bounds(i);
                    p[i] = rng.gen_range(lo.max(-1e3)..=hi.min(1e3));
                    q[i] = rng.gen_range(lo.max(-1e3)..=hi.min(1e3));
                }
                let mid: Vec<f64> = p.iter().zip(&q).map(|(a, b)| 0.5 * (a + b)).collect();
                let fmid = self.objective.value(&mid);
                let favg = 0.5 * (self.objective.value(&p) + self.objective.value(&q));
                if fmid.is_finite() && favg.is_finite() {
                    worst = worst.max(fmid - favg);
                }
            }
        }
        worst
    }
}

/// One outer iteration of the trace. The three `after_*` values are the
/// penalized objective at the iteration's lambda after each block step.
#[derive(Debug, Clone)]
pub struct IterationRecord {
    pub t: usize,
    pub lambda: f64,
    pub after_y_step: f64,
    pub after_x_step: f64,
    pub after_aux_step: f64,
    /// Raw objective `f(x, y)` at the end of the iteration.
    pub objective: f64,
    /// Binarity distance `d(x)` at the end of the iteration.
    pub distance: f64,
    pub step_x_inf: f64,
    pub step_y_inf: f64,
    pub step_aux_inf: f64,
}

/// Final point of a solve.
#[derive(Debug, Clone)]
pub struct Iterate {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub aux: Vec<f64>,
}

/// Full record of one alternating solve.
#[derive(Debug, Clone)]
pub struct SolveTrace {
    pub iterations: Vec<IterationRecord>,
    pub final_iterate: Iterate,
    /// Whether `d(x_final) <= epsilon`.
    pub binary: bool,
    pub outer_iterations: usize,
    /// Whether the stopping rule fired (as opposed to hitting `max_outer`).
    pub converged: bool,
    pub final_lambda: f64,
    pub final_distance: f64,
    /// `f(x, y)` at the final iterate.
    pub final_objective: f64,
}

/// Optional explicit start for the binary and auxiliary blocks.
#[derive(Debug, Clone)]
pub struct Start {
    pub x: Vec<f64>,
    pub aux: Vec<f64>,
}

#[derive(Clone)]
pub struct SolveParams {
    /// Binarity tolerance: the stop rule requires `d(x) <= epsilon`.
    pub epsilon: f64,
    /// Step-change tolerance on all three blocks (infinity norm).
    pub stop_tol: f64,
    pub max_outer: usize,
    pub subsolver: SubsolverParams,
    pub start: Option<Start>,
    /// Abort when lambda exceeds `lambda_cap_factor * lambda0`.
    pub lambda_cap_factor: f64,
}

impl Default for SolveParams {
    fn default() -> Self {
        Self {
            epsilon: 1e-3,
            stop_tol: 1e-6,
            max_outer: 500,
            subsolver: SubsolverParams::default(),
            start: None,
            lambda_cap_factor: 1e12,
        }
    }
}

/// Iteration count after which `lambda = rho^t * lambda0` first reaches
/// `L sqrt(n) / epsilon`, the point where the binarity distance is forced
/// below `epsilon`. Zero when `lambda0` already suffices.
pub fn iteration_bound(l: f64, n: usize, epsilon: f64, lambda0: f64, rho: f64) -> usize {
    assert!(l > 0.0 && epsilon > 0.0 && lambda0 > 0.0 && rho > 1.0 && n > 0);
    let raw = ((l * (n as f64).sqrt()).ln() - (epsilon * lambda0).ln()) / rho.ln();
    if raw <= 0.0 {
        return 0;
    }
    // Snap values a hair away from an integer before taking the ceiling, so
    // round-off in the logs cannot inflate an exactly attained bound.
    let snapped = if (raw - raw.round()).abs() < 1e-9 {
        raw.round()
    } else {
        raw.ceil()
    };
    snapped as usize
}

/// Penalty coefficients strictly above this threshold (the Lipschitz
/// constant of `f` in `x`) make every relaxed binary-block solution binary.
pub fn lambda_threshold(l: f64) -> f64 {
    assert!(l > 0.0);
    l
}

/// Runs the alternating solve with the continuous variables treated as one
/// block.
pub fn solve(
    problem: &MixedProblem,
    schedule: &PenaltySchedule,
    params: &SolveParams,
) -> Result<SolveTrace> {
    run(problem, schedule, params, false)
}

/// Runs the alternating solve updating the declared continuous sub-blocks
/// one at a time, in order, each with its own subsolver call.
pub fn solve_multiblock(
    problem: &MixedProblem,
    schedule: &PenaltySchedule,
    params: &SolveParams,
) -> Result<SolveTrace> {
    run(problem, schedule, params, true)
}

struct BlockContext<'a> {
    problem: &'a MixedProblem,
    params: &'a SolveParams,
}

impl<'a> BlockContext<'a> {
    fn joint(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        let mut z = Vec::with_capacity(x.len() + y.len());
        z.extend_from_slice(x);
        z.extend_from_slice(y);
        z
    }

    /// Minimizes the penalized objective over `free` coordinates of the joint
    /// region, starting from the (projected) current point. Returns the new
    /// joint point. Accepts the subproblem result only if it does not
    /// increase the penalized value at this lambda.
    fn block_step(
        &self,
        z: &[f64],
        free: &[usize],
        aux: &[f64],
        lambda: f64,
        iteration: usize,
    ) -> Result<Vec<f64>> {
        let n = self.problem.n;
        let dim = z.len();
        let mut fixed: Vec<Option<f64>> = z.iter().map(|&v| Some(v)).collect();
        for &i in free {
            fixed[i] = None;
        }
        let sub_region = self
            .problem
            .region
            .restrict(&fixed)
            .map_err(|e| wrap(iteration, e))?;

        // Penalized objective restricted to the free coordinates. The aux
        // penalty gradient is constant: lambda * (1 - 2 a_i) on binary coords.
        let base = self.problem.objective.restricted(z, free);
        let aux_owned: Vec<f64> = aux.to_vec();
        let free_owned: Vec<usize> = free.to_vec();
        let penalty_coeffs: Vec<f64> = free_owned
            .iter()
            .map(|&i| if i < n { lambda * (1.0 - 2.0 * aux_owned[i]) } else { 0.0 })
            .collect();
        let penalty_base: f64 = free_owned
            .iter()
            .filter(|&&i| i < n)
            .map(|&i| lambda * aux_owned[i])
            .sum();
        let eval_base = base.clone();
        let coeffs = penalty_coeffs.clone();
        let sub_obj = Objective::from_fns(
            move |sub: &[f64]| {
                let lin: f64 = sub.iter().zip(&coeffs).map(|(s, c)| s * c).sum();
                eval_base.value(sub) + lin + penalty_base
            },
            {
                let coeffs = penalty_coeffs;
                move |sub: &[f64]| {
                    let mut g = base.gradient(sub);
                    for (gi, c) in g.iter_mut().zip(&coeffs) {
                        *gi += c;
                    }
                    g
                }
            },
        );

        let warm_raw: Vec<f64> = free.iter().map(|&i| z[i]).collect();
        let warm = if sub_region.is_feasible(&warm_raw, 1e-8) {
            warm_raw
        } else {
            project(&warm_raw, &sub_region, self.params.subsolver.tol.min(1e-9))
                .map_err(|e| wrap(iteration, e))?
        };

        let warm_value = sub_obj.value(&warm);
        let result = minimize(&sub_obj, &sub_region, &warm, &self.params.subsolver)
            .map_err(|e| wrap(iteration, e))?;

        let mut out = z.to_vec();
        let chosen = if result.objective <= warm_value {
            result.minimizer
        } else {
            warm
        };
        for (j, &i) in free.iter().enumerate() {
            out[i] = chosen[j];
        }
        let _ = dim;
        Ok(out)
    }
}

fn wrap(iteration: usize, e: Error) -> Error {
    Error::Subproblem {
        iteration,
        source: Box::new(e),
    }
}

fn run(
    problem: &MixedProblem,
    schedule: &PenaltySchedule,
    params: &SolveParams,
    per_block: bool,
) -> Result<SolveTrace> {
    let n = problem.n;
    let m = problem.m;
    let mut schedule = schedule.restarted();
    let lambda_cap = params.lambda_cap_factor * schedule.lambda0();

    let (mut x, mut aux) = match &params.start {
        Some(s) => {
            assert_eq!(s.x.len(), n);
            assert_eq!(s.aux.len(), n);
            (s.x.clone(), s.aux.clone())
        }
        None => (vec![0.0; n], vec![0.0; n]),
    };

    // Initial continuous block: the closed-form map when available,
    // otherwise zero clamped into the continuous bounds.
    let mut y: Vec<f64> = match &problem.continuous_update {
        ContinuousUpdate::ClosedForm(f) => f(&x),
        ContinuousUpdate::Subsolve => (0..m)
            .map(|j| {
                let (lo, hi) = problem.region.bounds(n + j);
                0.0f64.clamp(lo, hi)
            })
            .collect(),
    };

    let ctx = BlockContext { problem, params };

    // Start repair: the default start x = 0 may violate equality constraints
    // (assignment rows, say); pull it into the binary-block slice once so
    // every later warm start is feasible.
    {
        let z = ctx.joint(&x, &y);
        let mut fixed: Vec<Option<f64>> = z.iter().map(|&v| Some(v)).collect();
        for i in 0..n {
            fixed[i] = None;
        }
        let slice = problem.region.restrict(&fixed).map_err(|e| wrap(0, e))?;
        if !slice.is_feasible(&x, 1e-8) {
            x = project(&x, &slice, params.subsolver.tol.min(1e-9)).map_err(|e| wrap(0, e))?;
            if let ContinuousUpdate::ClosedForm(f) = &problem.continuous_update {
                y = f(&x);
            }
        }
    }

    let mut records: Vec<IterationRecord> = Vec::new();
    let mut converged = false;
    let mut final_lambda = schedule.current();

    for t in 0..params.max_outer {
        let lambda = schedule.current();
        final_lambda = lambda;
        if lambda > lambda_cap {
            return Err(Error::LambdaOverflow {
                iteration: t,
                cap: lambda_cap,
            });
        }

        let x_prev = x.clone();
        let y_prev = y.clone();
        let aux_prev = aux.clone();

        let after_y_step;
        let after_x_step;

        if problem.joint_xy && m > 0 {
            // Jointly convex objective: one subsolver call updates x and y
            // together; the recorded y-step value is the pre-step value.
            after_y_step = problem.penalized(&x, &y, &aux, lambda);
            let z = ctx.joint(&x, &y);
            let free: Vec<usize> = (0..n + m).collect();
            let z_new = ctx.block_step(&z, &free, &aux, lambda, t)?;
            x = z_new[..n].to_vec();
            y = z_new[n..].to_vec();
            after_x_step = problem.penalized(&x, &y, &aux, lambda);
        } else {
            // Continuous step.
            if m > 0 {
                match &problem.continuous_update {
                    ContinuousUpdate::ClosedForm(f) => {
                        y = f(&x);
                    }
                    ContinuousUpdate::Subsolve => {
                        let block_list: Vec<Range<usize>> = if per_block {
                            problem.blocks.clone()
                        } else {
                            vec![0..m]
                        };
                        for b in block_list {
                            if b.is_empty() {
                                continue;
                            }
                            let z = ctx.joint(&x, &y);
                            let free: Vec<usize> =
                                (n + b.start..n + b.end).collect();
                            let z_new = ctx.block_step(&z, &free, &aux, lambda, t)?;
                            y = z_new[n..].to_vec();
                        }
                    }
                }
            }
            after_y_step = problem.penalized(&x, &y, &aux, lambda);

            // Relaxed binary step over [0,1]^n ∩ region slice.
            let z = ctx.joint(&x, &y);
            let free: Vec<usize> = (0..n).collect();
            let z_new = ctx.block_step(&z, &free, &aux, lambda, t)?;
            x = z_new[..n].to_vec();
            after_x_step = problem.penalized(&x, &y, &aux, lambda);
        }

        // Auxiliary step, in closed form.
        aux = threshold_raw(&x);
        let after_aux_step = problem.penalized(&x, &y, &aux, lambda);
        if !after_aux_step.is_finite() {
            return Err(Error::NonFiniteObjective {
                point: ctx.joint(&x, &y),
            });
        }

        let dist = distance_raw(&x);
        let record = IterationRecord {
            t,
            lambda,
            after_y_step,
            after_x_step,
            after_aux_step,
            objective: {
                let z = ctx.joint(&x, &y);
                problem.objective.value(&z)
            },
            distance: dist,
            step_x_inf: diff_inf(&x, &x_prev),
            step_y_inf: diff_inf(&y, &y_prev),
            step_aux_inf: diff_inf(&aux, &aux_prev),
        };
        let stop = record.step_x_inf <= params.stop_tol
            && record.step_y_inf <= params.stop_tol
            && record.step_aux_inf <= params.stop_tol
            && dist <= params.epsilon;
        records.push(record);
        if stop {
            converged = true;
            break;
        }
        schedule.advance();
    }

    // Keep the reported continuous block consistent with the final binary
    // block when a closed-form map defines it.
    if let ContinuousUpdate::ClosedForm(f) = &problem.continuous_update {
        y = f(&x);
    }

    let final_distance = distance_raw(&x);
    let z = ctx.joint(&x, &y);
    let final_objective = problem.objective.value(&z);
    Ok(SolveTrace {
        binary: final_distance <= params.epsilon,
        outer_iterations: records.len(),
        converged,
        final_lambda,
        final_distance,
        final_objective,
        iterations: records,
        final_iterate: Iterate { x, y, aux },
    })
}
