//! Convex subproblem solver: minimizes a differentiable convex function over
//! an intersection of box bounds, affine equalities, and convex inequalities.
//!
//! The method is projected gradient descent with Armijo backtracking
//! (sufficient-decrease constant 1e-4, backtrack factor 0.5). Projection onto
//! the region runs cyclic alternating projections with Dykstra corrections:
//! exact projections onto the box, each equality hyperplane and each linear
//! half-space, and half-space cuts re-linearized every cycle for nonlinear
//! convex constraints. Stationarity is measured by the projected-gradient
//! residual `||z - P(z - grad f(z))||_inf`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::objective::Objective;
use crate::vecmath::{all_finite, diff_inf, dot, norm2};

pub type ConstraintEvalFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;
pub type ConstraintGradFn = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;

/// A sparse affine form `sum_j coeffs[j] * z[indices[j]]` compared to `rhs`.
#[derive(Debug, Clone)]
pub struct AffineRow {
    indices: Vec<usize>,
    coeffs: Vec<f64>,
    rhs: f64,
    norm_sq: f64,
}

impl AffineRow {
    pub fn new(terms: &[(usize, f64)], rhs: f64) -> Self {
        let indices: Vec<usize> = terms.iter().map(|t| t.0).collect();
        let coeffs: Vec<f64> = terms.iter().map(|t| t.1).collect();
        let norm_sq = coeffs.iter().map(|c| c * c).sum();
        Self { indices, coeffs, rhs, norm_sq }
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.indices.iter().copied().zip(self.coeffs.iter().copied())
    }

    pub fn rhs(&self) -> f64 {
        self.rhs
    }

    fn value(&self, z: &[f64]) -> f64 {
        self.indices
            .iter()
            .zip(&self.coeffs)
            .map(|(&i, &c)| c * z[i])
            .sum()
    }

    /// Residual `a.z - rhs`.
    fn residual(&self, z: &[f64]) -> f64 {
        self.value(z) - self.rhs
    }

    /// Moves `z` onto the hyperplane `a.z = rhs` (nearest point).
    fn project_hyperplane(&self, z: &mut [f64]) {
        if self.norm_sq == 0.0 {
            return;
        }
        let t = self.residual(z) / self.norm_sq;
        for (&i, &c) in self.indices.iter().zip(&self.coeffs) {
            z[i] -= t * c;
        }
    }

    /// Moves `z` onto the half-space `a.z <= rhs` (nearest point).
    fn project_halfspace(&self, z: &mut [f64]) {
        if self.norm_sq == 0.0 {
            return;
        }
        let r = self.residual(z);
        if r > 0.0 {
            let t = r / self.norm_sq;
            for (&i, &c) in self.indices.iter().zip(&self.coeffs) {
                z[i] -= t * c;
            }
        }
    }
}

/// A smooth convex inequality `g(z) <= 0` given by evaluator and gradient.
#[derive(Clone)]
pub struct ConvexConstraint {
    eval: ConstraintEvalFn,
    grad: ConstraintGradFn,
}

impl ConvexConstraint {
    pub fn new(eval: ConstraintEvalFn, grad: ConstraintGradFn) -> Self {
        Self { eval, grad }
    }

    pub fn from_fns<E, G>(eval: E, grad: G) -> Self
    where
        E: Fn(&[f64]) -> f64 + Send + Sync + 'static,
        G: Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    {
        Self::new(Arc::new(eval), Arc::new(grad))
    }

    pub fn value(&self, z: &[f64]) -> f64 {
        (self.eval)(z)
    }

    pub fn gradient(&self, z: &[f64]) -> Vec<f64> {
        (self.grad)(z)
    }

    /// Half-space cut at the current point: if `g(z) > 0`, steps to the zero
    /// level of the linearization of `g` at `z`. For convex `g` the cut
    /// separates `z` from the feasible set.
    fn project_cut(&self, z: &mut [f64]) {
        let v = self.value(z);
        if v <= 0.0 {
            return;
        }
        let g = self.gradient(z);
        let nsq = dot(&g, &g);
        if nsq <= 1e-300 {
            return;
        }
        let t = v / nsq;
        for (zi, gi) in z.iter_mut().zip(&g) {
            *zi -= t * gi;
        }
    }
}

/// Intersection of a box, affine equalities, and convex inequalities.
#[derive(Clone, Default)]
pub struct FeasibleRegion {
    dim: usize,
    lower: Vec<f64>,
    upper: Vec<f64>,
    equalities: Vec<AffineRow>,
    linear_ineqs: Vec<AffineRow>,
    convex_ineqs: Vec<ConvexConstraint>,
}

impl FeasibleRegion {
    /// A region with free bounds `(-inf, inf)` in every coordinate.
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            lower: vec![f64::NEG_INFINITY; dim],
            upper: vec![f64::INFINITY; dim],
            equalities: Vec::new(),
            linear_ineqs: Vec::new(),
            convex_ineqs: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn set_bounds(&mut self, index: usize, lower: f64, upper: f64) {
        assert!(lower <= upper, "lower bound above upper bound");
        self.lower[index] = lower;
        self.upper[index] = upper;
    }

    pub fn bounds(&self, index: usize) -> (f64, f64) {
        (self.lower[index], self.upper[index])
    }

    /// Intersects the bounds of `index` with `[lower, upper]`.
    pub fn tighten_bounds(&mut self, index: usize, lower: f64, upper: f64) {
        self.lower[index] = self.lower[index].max(lower);
        self.upper[index] = self.upper[index].min(upper);
        assert!(
            self.lower[index] <= self.upper[index],
            "bound tightening produced an empty interval"
        );
    }

    pub fn add_equality(&mut self, row: AffineRow) {
        self.equalities.push(row);
    }

    pub fn add_linear_inequality(&mut self, row: AffineRow) {
        self.linear_ineqs.push(row);
    }

    pub fn add_convex_inequality(&mut self, c: ConvexConstraint) {
        self.convex_ineqs.push(c);
    }

    pub fn equalities(&self) -> &[AffineRow] {
        &self.equalities
    }

    pub fn linear_inequalities(&self) -> &[AffineRow] {
        &self.linear_ineqs
    }

    pub fn convex_inequalities(&self) -> &[ConvexConstraint] {
        &self.convex_ineqs
    }

    /// Largest constraint violation at `z` (0 when feasible).
    pub fn max_violation(&self, z: &[f64]) -> f64 {
        let mut v: f64 = 0.0;
        for i in 0..self.dim {
            v = v.max(self.lower[i] - z[i]).max(z[i] - self.upper[i]);
        }
        for row in &self.equalities {
            v = v.max(row.residual(z).abs());
        }
        for row in &self.linear_ineqs {
            v = v.max(row.residual(z));
        }
        for c in &self.convex_ineqs {
            v = v.max(c.value(z));
        }
        v
    }

    pub fn is_feasible(&self, z: &[f64], tol: f64) -> bool {
        self.max_violation(z) <= tol
    }

    /// Euclidean diameter of the box part, infinite when unbounded.
    pub fn box_diameter(&self) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.dim {
            let w = self.upper[i] - self.lower[i];
            if !w.is_finite() {
                return f64::INFINITY;
            }
            acc += w * w;
        }
        acc.sqrt()
    }

    fn clamp_to_box(&self, z: &mut [f64]) {
        for i in 0..self.dim {
            z[i] = z[i].clamp(self.lower[i], self.upper[i]);
        }
    }

    /// The slice of the region obtained by freezing the coordinates where
    /// `fixed[i]` is `Some(value)`. Rows whose support is entirely frozen are
    /// checked for consistency and dropped; a violated one means the slice is
    /// empty.
    pub fn restrict(&self, fixed: &[Option<f64>]) -> Result<FeasibleRegion> {
        assert_eq!(fixed.len(), self.dim);
        let mut new_index = vec![usize::MAX; self.dim];
        let mut free = Vec::new();
        for (i, f) in fixed.iter().enumerate() {
            if f.is_none() {
                new_index[i] = free.len();
                free.push(i);
            }
        }
        let mut out = FeasibleRegion::new(free.len());
        for (j, &i) in free.iter().enumerate() {
            out.lower[j] = self.lower[i];
            out.upper[j] = self.upper[i];
        }

        let restrict_row = |row: &AffineRow| -> (Option<AffineRow>, f64) {
            let mut terms = Vec::new();
            let mut shift = 0.0;
            for (&i, &c) in row.indices.iter().zip(&row.coeffs) {
                match fixed[i] {
                    Some(v) => shift += c * v,
                    None => terms.push((new_index[i], c)),
                }
            }
            if terms.is_empty() {
                (None, shift - row.rhs)
            } else {
                (Some(AffineRow::new(&terms, row.rhs - shift)), 0.0)
            }
        };

        for row in &self.equalities {
            match restrict_row(row) {
                (Some(r), _) => out.add_equality(r),
                (None, resid) => {
                    if resid.abs() > 1e-7 {
                        return Err(Error::EmptySlice(resid.abs()));
                    }
                }
            }
        }
        for row in &self.linear_ineqs {
            match restrict_row(row) {
                (Some(r), _) => out.add_linear_inequality(r),
                (None, resid) => {
                    if resid > 1e-7 {
                        return Err(Error::EmptySlice(resid));
                    }
                }
            }
        }

        let template: Vec<f64> = fixed.iter().map(|f| f.unwrap_or(0.0)).collect();
        for c in &self.convex_ineqs {
            let eval = c.eval.clone();
            let grad = c.grad.clone();
            let t1 = template.clone();
            let f1 = free.clone();
            let t2 = template.clone();
            let f2 = free.clone();
            out.add_convex_inequality(ConvexConstraint::from_fns(
                move |sub: &[f64]| {
                    let mut full = t1.clone();
                    for (j, &i) in f1.iter().enumerate() {
                        full[i] = sub[j];
                    }
                    eval(&full)
                },
                move |sub: &[f64]| {
                    let mut full = t2.clone();
                    for (j, &i) in f2.iter().enumerate() {
                        full[i] = sub[j];
                    }
                    let g = grad(&full);
                    f2.iter().map(|&i| g[i]).collect()
                },
            ));
        }
        Ok(out)
    }
}

/// Outcome of one convex subproblem solve.
#[derive(Debug, Clone)]
pub struct SubproblemResult {
    pub minimizer: Vec<f64>,
    pub objective: f64,
    pub kkt_residual: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Tunables for [`minimize`] and [`project`].
#[derive(Debug, Clone, Copy)]
pub struct SubsolverParams {
    /// Projected-gradient residual below which the solve counts as converged.
    pub tol: f64,
    /// Gradient-iteration budget per subproblem.
    pub max_iter: usize,
    /// Projection cycle budget.
    pub max_projection_cycles: usize,
}

impl Default for SubsolverParams {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            max_iter: 10_000,
            max_projection_cycles: 2_000,
        }
    }
}

const ARMIJO_C1: f64 = 1e-4;
const BACKTRACK: f64 = 0.5;
const MAX_BACKTRACKS: usize = 60;

/// Projects `point` onto `region` to within `tol` using cyclic alternating
/// projections with Dykstra corrections. Fails when the cycle budget runs out
/// without reaching feasibility, which usually signals an empty region.
pub fn project(point: &[f64], region: &FeasibleRegion, tol: f64) -> Result<Vec<f64>> {
    project_with(point, region, tol, SubsolverParams::default().max_projection_cycles)
}

fn project_with(
    point: &[f64],
    region: &FeasibleRegion,
    tol: f64,
    max_cycles: usize,
) -> Result<Vec<f64>> {
    assert_eq!(point.len(), region.dim());
    let mut z = point.to_vec();

    // Fast path: box only.
    if region.equalities.is_empty()
        && region.linear_ineqs.is_empty()
        && region.convex_ineqs.is_empty()
    {
        region.clamp_to_box(&mut z);
        return Ok(z);
    }

    let n_sets = 1 + region.equalities.len() + region.linear_ineqs.len()
        + region.convex_ineqs.len();
    // Dykstra correction per set, kept dense; sets touch few coordinates so
    // this trades a little memory for simple bookkeeping.
    let mut corrections = vec![vec![0.0; region.dim()]; n_sets];

    region.clamp_to_box(&mut z);
    for cycle in 0..max_cycles {
        let mut set_idx = 0;
        let mut apply = |z: &mut Vec<f64>,
                         corrections: &mut Vec<Vec<f64>>,
                         proj: &mut dyn FnMut(&mut [f64])| {
            let corr = &mut corrections[set_idx];
            for (zi, ci) in z.iter_mut().zip(corr.iter()) {
                *zi += *ci;
            }
            let before = z.clone();
            proj(z);
            for ((ci, bi), zi) in corr.iter_mut().zip(&before).zip(z.iter()) {
                *ci = bi - zi;
            }
            set_idx += 1;
        };

        apply(&mut z, &mut corrections, &mut |w| region.clamp_to_box(w));
        for row in &region.equalities {
            apply(&mut z, &mut corrections, &mut |w| row.project_hyperplane(w));
        }
        for row in &region.linear_ineqs {
            apply(&mut z, &mut corrections, &mut |w| row.project_halfspace(w));
        }
        for c in &region.convex_ineqs {
            apply(&mut z, &mut corrections, &mut |w| c.project_cut(w));
        }

        let violation = region.max_violation(&z);
        if violation <= tol {
            return Ok(z);
        }
        if cycle + 1 == max_cycles {
            return Err(Error::ProjectionStalled {
                cycles: max_cycles,
                residual: violation,
            });
        }
    }
    unreachable!("projection loop exits via return");
}

/// Minimizes a differentiable convex `objective` over `region` starting from
/// a feasible point. Returns the iterate with the smallest objective seen;
/// the objective value never exceeds the start value. `converged` reports
/// whether the projected-gradient residual dropped below `params.tol` within
/// the iteration budget.
pub fn minimize(
    objective: &Objective,
    region: &FeasibleRegion,
    start: &[f64],
    params: &SubsolverParams,
) -> Result<SubproblemResult> {
    assert_eq!(start.len(), region.dim());
    let start_violation = region.max_violation(start);
    if start_violation > 1e-8 {
        return Err(Error::InfeasibleStart {
            violation: start_violation,
            tolerance: 1e-8,
        });
    }

    let proj_tol = (params.tol * 0.1).min(1e-9);
    let mut z = start.to_vec();
    let mut fz = objective.value(&z);
    if !fz.is_finite() {
        return Err(Error::NonFiniteObjective { point: z });
    }

    let diameter = region.box_diameter();
    let mut prev_step: Option<f64> = None;
    let mut prev_z: Option<Vec<f64>> = None;
    let mut prev_g: Option<Vec<f64>> = None;
    let mut kkt = f64::INFINITY;
    let mut iterations = 0;
    let mut converged = false;

    for iter in 0..params.max_iter {
        iterations = iter + 1;
        let g = objective.gradient(&z);
        if !all_finite(&g) {
            return Err(Error::NonFiniteObjective { point: z });
        }

        // Stationarity residual with a unit gradient step.
        let unit_target: Vec<f64> = z.iter().zip(&g).map(|(zi, gi)| zi - gi).collect();
        let unit_proj = project_with(&unit_target, region, proj_tol, params.max_projection_cycles)?;
        kkt = diff_inf(&z, &unit_proj);
        if kkt <= params.tol {
            converged = true;
            break;
        }

        // Initial trial step: spectral (Barzilai-Borwein) when curvature
        // information exists, otherwise grow the previous accepted step. On
        // (near-)linear objectives the step is capped so a single move never
        // exceeds the region diameter.
        let gnorm = norm2(&g);
        let cap = if diameter.is_finite() && gnorm > 0.0 {
            (diameter / gnorm).max(1e-12)
        } else {
            1e8
        };
        let mut step = match (&prev_z, &prev_g) {
            (Some(pz), Some(pg)) => {
                let dz: Vec<f64> = z.iter().zip(pz).map(|(a, b)| a - b).collect();
                let dg: Vec<f64> = g.iter().zip(pg).map(|(a, b)| a - b).collect();
                let num = dot(&dz, &dz);
                let den = dot(&dz, &dg);
                if den > 1e-18 * num.max(1e-300) && num > 0.0 {
                    (num / den).clamp(1e-12, cap)
                } else {
                    (prev_step.unwrap_or(1.0) * 2.0).min(cap)
                }
            }
            _ => (1.0 / (1.0 + gnorm)).min(cap),
        };

        let mut accepted = false;
        let mut trial = Vec::new();
        let mut f_trial = f64::INFINITY;
        for _ in 0..MAX_BACKTRACKS {
            let target: Vec<f64> = z
                .iter()
                .zip(&g)
                .map(|(zi, gi)| zi - step * gi)
                .collect();
            trial = project_with(&target, region, proj_tol, params.max_projection_cycles)?;
            let direction_dot: f64 = trial
                .iter()
                .zip(&z)
                .zip(&g)
                .map(|((ti, zi), gi)| (ti - zi) * gi)
                .sum();
            f_trial = objective.value(&trial);
            if !f_trial.is_finite() {
                return Err(Error::NonFiniteObjective { point: trial });
            }
            if direction_dot >= -1e-18 {
                // No descent direction left at this step size.
                step *= BACKTRACK;
                continue;
            }
            if f_trial <= fz + ARMIJO_C1 * direction_dot {
                accepted = true;
                break;
            }
            step *= BACKTRACK;
        }

        if !accepted || f_trial >= fz {
            // Line search exhausted; the point is as good as this method gets.
            break;
        }

        prev_z = Some(z.clone());
        prev_g = Some(g);
        prev_step = Some(step);
        z = trial;
        fz = f_trial;

        if let Some(pz) = &prev_z {
            if diff_inf(pz, &z) <= 1e-15 * (1.0 + crate::vecmath::norm_inf(&z)) {
                break;
            }
        }
    }

    if !converged {
        // Refresh the residual at the final point.
        let g = objective.gradient(&z);
        let unit_target: Vec<f64> = z.iter().zip(&g).map(|(zi, gi)| zi - gi).collect();
        if let Ok(unit_proj) =
            project_with(&unit_target, region, proj_tol, params.max_projection_cycles)
        {
            kkt = diff_inf(&z, &unit_proj);
            converged = kkt <= params.tol;
        }
    }

    Ok(SubproblemResult {
        objective: fz,
        minimizer: z,
        kkt_residual: kkt,
        iterations,
        converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn unit_box(dim: usize) -> FeasibleRegion {
        let mut r = FeasibleRegion::new(dim);
        for i in 0..dim {
            r.set_bounds(i, 0.0, 1.0);
        }
        r
    }

    #[test]
    fn projection_box_clamp() {
        let r = unit_box(2);
        let p = project(&[1.5, -0.2], &r, 1e-10).unwrap();
        assert_eq!(p, vec![1.0, 0.0]);
    }

    #[test]
    fn projection_onto_budget_hyperplane() {
        let mut r = unit_box(2);
        r.add_equality(AffineRow::new(&[(0, 1.0), (1, 1.0)], 1.0));
        let p = project(&[0.0, 0.0], &r, 1e-10).unwrap();
        assert_abs_diff_eq!(p[0], 0.5, epsilon = 1e-9);
        assert_abs_diff_eq!(p[1], 0.5, epsilon = 1e-9);
    }

    #[test]
    fn projection_matches_simplex_slice_oracle() {
        // Nearest point of {sum z = 1} ∩ [0,1]^3 from (0.9, 0.9, 0.9): the
        // hyperplane projection z - (sum(z) - 1)/3 stays inside the box, so it
        // is the answer in closed form.
        let mut r = unit_box(3);
        r.add_equality(AffineRow::new(&[(0, 1.0), (1, 1.0), (2, 1.0)], 1.0));
        let p = project(&[0.9, 0.9, 0.9], &r, 1e-10).unwrap();
        for v in &p {
            assert_abs_diff_eq!(*v, 1.0 / 3.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn projection_is_idempotent() {
        let mut r = unit_box(3);
        r.add_equality(AffineRow::new(&[(0, 1.0), (1, 1.0), (2, 1.0)], 1.0));
        r.add_linear_inequality(AffineRow::new(&[(0, 1.0)], 0.6));
        let p1 = project(&[0.9, 0.4, 0.9], &r, 1e-10).unwrap();
        let p2 = project(&p1, &r, 1e-10).unwrap();
        assert!(diff_inf(&p1, &p2) <= 1e-9);
    }

    #[test]
    fn projection_respects_convex_constraint() {
        // Disk of radius 1 centered at the origin.
        let mut r = FeasibleRegion::new(2);
        r.set_bounds(0, -2.0, 2.0);
        r.set_bounds(1, -2.0, 2.0);
        r.add_convex_inequality(ConvexConstraint::from_fns(
            |z| z[0] * z[0] + z[1] * z[1] - 1.0,
            |z| vec![2.0 * z[0], 2.0 * z[1]],
        ));
        let p = project(&[2.0, 0.0], &r, 1e-9).unwrap();
        assert!(p[0] <= 1.0 + 1e-8);
        assert!((p[1]).abs() < 1e-8);
    }

    #[test]
    fn minimize_projects_unconstrained_minimum_onto_box() {
        let r = unit_box(2);
        let f = Objective::from_fns(
            |z| (z[0] - 2.0).powi(2) + (z[1] + 1.0).powi(2),
            |z| vec![2.0 * (z[0] - 2.0), 2.0 * (z[1] + 1.0)],
        );
        let res = minimize(&f, &r, &[0.5, 0.5], &SubsolverParams::default()).unwrap();
        assert!(res.converged);
        assert_abs_diff_eq!(res.minimizer[0], 1.0, epsilon = 1e-6);
        assert_abs_diff_eq!(res.minimizer[1], 0.0, epsilon = 1e-6);
    }

    #[test]
    fn minimize_linear_on_equality_segment() {
        // x1 + x2 on the segment {x1 + x2 = 1} ∩ [0,1]^2 is constant 1.
        let mut r = unit_box(2);
        r.add_equality(AffineRow::new(&[(0, 1.0), (1, 1.0)], 1.0));
        let f = Objective::from_fns(|z| z[0] + z[1], |_| vec![1.0, 1.0]);
        let res = minimize(&f, &r, &[0.5, 0.5], &SubsolverParams::default()).unwrap();
        assert_abs_diff_eq!(res.objective, 1.0, epsilon = 1e-8);
        assert!(r.is_feasible(&res.minimizer, 1e-8));
    }

    #[test]
    fn minimize_quadratic_on_diagonal_slice() {
        // (x1-0.3)^2 + (x2-0.7)^2 with x1 = x2 reduces to 2(t-0.5)^2 + const,
        // minimized at t = 0.5.
        let mut r = unit_box(2);
        r.add_equality(AffineRow::new(&[(0, 1.0), (1, -1.0)], 0.0));
        let f = Objective::from_fns(
            |z| (z[0] - 0.3).powi(2) + (z[1] - 0.7).powi(2),
            |z| vec![2.0 * (z[0] - 0.3), 2.0 * (z[1] - 0.7)],
        );
        let res = minimize(&f, &r, &[0.2, 0.2], &SubsolverParams::default()).unwrap();
        assert_abs_diff_eq!(res.minimizer[0], 0.5, epsilon = 1e-6);
        assert_abs_diff_eq!(res.minimizer[1], 0.5, epsilon = 1e-6);
    }

    #[test]
    fn minimize_recovers_interior_quadratic_minimum() {
        let mut r = FeasibleRegion::new(3);
        for i in 0..3 {
            r.set_bounds(i, -10.0, 10.0);
        }
        let c = [0.3, -1.2, 2.5];
        let f = Objective::from_fns(
            move |z| {
                z.iter()
                    .zip(&c)
                    .enumerate()
                    .map(|(i, (zi, ci))| (i as f64 + 1.0) * (zi - ci).powi(2))
                    .sum()
            },
            move |z| {
                z.iter()
                    .zip(&c)
                    .enumerate()
                    .map(|(i, (zi, ci))| 2.0 * (i as f64 + 1.0) * (zi - ci))
                    .collect()
            },
        );
        let res = minimize(&f, &r, &[0.0; 3], &SubsolverParams::default()).unwrap();
        for (got, want) in res.minimizer.iter().zip(&c) {
            assert_abs_diff_eq!(*got, *want, epsilon = 1e-6);
        }
    }

    #[test]
    fn minimize_rejects_infeasible_start() {
        let r = unit_box(2);
        let f = Objective::from_fns(|z| z[0], |_| vec![1.0, 0.0]);
        let err = minimize(&f, &r, &[2.0, 0.5], &SubsolverParams::default());
        assert!(matches!(err, Err(Error::InfeasibleStart { .. })));
    }

    #[test]
    fn minimize_reports_non_finite_objective() {
        let r = unit_box(1);
        let f = Objective::from_fns(|z| (1.0 / z[0]).ln(), |z| vec![-1.0 / z[0]]);
        let err = minimize(&f, &r, &[0.0], &SubsolverParams::default());
        assert!(matches!(err, Err(Error::NonFiniteObjective { .. })));
    }

    #[test]
    fn minimize_never_ascends() {
        // Descent property along the iterate path: final value never exceeds
        // the start value, here on an ill-conditioned quadratic.
        let mut r = FeasibleRegion::new(2);
        r.set_bounds(0, -5.0, 5.0);
        r.set_bounds(1, -5.0, 5.0);
        let f = Objective::from_fns(
            |z| 0.5 * (z[0] * z[0] + 999.0 * z[1] * z[1]),
            |z| vec![z[0], 999.0 * z[1]],
        );
        let start = [4.0, 3.0];
        let f0 = f.value(&start);
        let res = minimize(&f, &r, &start, &SubsolverParams::default()).unwrap();
        assert!(res.objective <= f0 + 1e-12);
        assert!(res.converged);
    }

    #[test]
    fn restrict_freezes_coordinates_and_shifts_rows() {
        let mut r = unit_box(3);
        r.add_equality(AffineRow::new(&[(0, 1.0), (2, 2.0)], 1.5));
        r.add_linear_inequality(AffineRow::new(&[(1, 1.0), (2, 1.0)], 1.0));
        let sliced = r.restrict(&[None, None, Some(0.5)]).unwrap();
        assert_eq!(sliced.dim(), 2);
        // equality becomes z0 = 0.5; inequality becomes z1 <= 0.5
        assert!(sliced.is_feasible(&[0.5, 0.5], 1e-12));
        assert!(!sliced.is_feasible(&[0.5, 0.7], 1e-12));
        assert!(!sliced.is_feasible(&[0.2, 0.2], 1e-12));
    }

    #[test]
    fn restrict_detects_empty_slice() {
        let mut r = unit_box(2);
        r.add_equality(AffineRow::new(&[(1, 1.0)], 0.25));
        let out = r.restrict(&[None, Some(0.9)]);
        assert!(matches!(out, Err(Error::EmptySlice(_))));
    }
}
