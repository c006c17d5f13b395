//! Differentiable objective functions given as evaluator/gradient closures.

use std::sync::Arc;

pub type EvalFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;
pub type GradFn = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;

/// A differentiable scalar function of a dense vector.
#[derive(Clone)]
pub struct Objective {
    eval: EvalFn,
    grad: GradFn,
}

impl Objective {
    pub fn new(eval: EvalFn, grad: GradFn) -> Self {
        Self { eval, grad }
    }

    pub fn from_fns<E, G>(eval: E, grad: G) -> Self
    where
        E: Fn(&[f64]) -> f64 + Send + Sync + 'static,
        G: Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    {
        Self::new(Arc::new(eval), Arc::new(grad))
    }

    /// The zero function. Convenient stand-in for an absent concave part.
    pub fn zero(dim: usize) -> Self {
        Self::from_fns(|_| 0.0, move |_| vec![0.0; dim])
    }

    pub fn value(&self, z: &[f64]) -> f64 {
        (self.eval)(z)
    }

    pub fn gradient(&self, z: &[f64]) -> Vec<f64> {
        (self.grad)(z)
    }

    /// Restriction to the coordinates listed in `free`, with all remaining
    /// coordinates frozen at their values in `template`.
    pub fn restricted(&self, template: &[f64], free: &[usize]) -> Objective {
        let template: Vec<f64> = template.to_vec();
        let free: Vec<usize> = free.to_vec();
        let eval = self.eval.clone();
        let grad = self.grad.clone();
        let t2 = template.clone();
        let f2 = free.clone();
        Objective::from_fns(
            move |sub: &[f64]| {
                let mut full = template.clone();
                for (j, &i) in free.iter().enumerate() {
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
        )
    }

    /// `self - other`, with gradients subtracted accordingly.
    pub fn minus(&self, other: &Objective) -> Objective {
        let (e1, g1) = (self.eval.clone(), self.grad.clone());
        let (e2, g2) = (other.eval.clone(), other.grad.clone());
        Objective::from_fns(
            move |z: &[f64]| e1(z) - e2(z),
            move |z: &[f64]| {
                let mut g = g1(z);
                for (gi, hi) in g.iter_mut().zip(g2(z)) {
                    *gi -= hi;
                }
                g
            },
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn restriction_freezes_coordinates() {
        let f = Objective::from_fns(
            |z| z[0] * z[0] + 2.0 * z[1] + z[2] * z[1],
            |z| vec![2.0 * z[0], 2.0 + z[2], z[1]],
        );
        let r = f.restricted(&[0.0, 5.0, 3.0], &[0, 2]);
        assert_eq!(r.value(&[2.0, 1.0]), 4.0 + 10.0 + 5.0);
        assert_eq!(r.gradient(&[2.0, 1.0]), vec![4.0, 5.0]);
    }

    #[test]
    fn minus_combines_values_and_gradients() {
        let f = Objective::from_fns(|z| z[0] * z[0], |z| vec![2.0 * z[0]]);
        let g = Objective::from_fns(|z| 3.0 * z[0], |_| vec![3.0]);
        let h = f.minus(&g);
        assert_eq!(h.value(&[2.0]), 4.0 - 6.0);
        assert_eq!(h.gradient(&[2.0]), vec![1.0]);
    }
}
