//! Gauss–Legendre rules: the reference rule on [−1, 1], radial grids on
//! (0, r_max] and composite panels on a finite interval.

use crate::error::LabError;
use crate::scalar::Real;

/// Gauss–Legendre rule on [−1, 1]; exact for polynomials of degree ≤ 2n − 1.
#[derive(Debug, Clone)]
pub struct GaussLegendre<T> {
    pub nodes: Vec<T>,
    pub weights: Vec<T>,
}

impl<T: Real> GaussLegendre<T> {
    pub fn new(n: usize) -> Result<Self, LabError> {
        if n == 0 {
            return Err(LabError::InvalidParameter {
                name: "order",
                reason: "Gauss-Legendre rule needs at least one node".into(),
            });
        }
        let (x, w) = gauss_legendre_f64(n);
        Ok(Self {
            nodes: x.into_iter().map(T::lit).collect(),
            weights: w.into_iter().map(T::lit).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// ∫_a^b f(x) dx.
    pub fn integrate<F: FnMut(T) -> T>(&self, a: T, b: T, mut f: F) -> T {
        let half = T::lit(0.5) * (b - a);
        let mid = T::lit(0.5) * (b + a);
        self.nodes
            .iter()
            .zip(&self.weights)
            .fold(T::zero(), |acc, (&x, &w)| acc + w * f(mid + half * x))
            * half
    }

    /// Nodes and weights mapped affinely onto [a, b].
    pub fn mapped(&self, a: T, b: T) -> (Vec<T>, Vec<T>) {
        let half = T::lit(0.5) * (b - a);
        let mid = T::lit(0.5) * (b + a);
        let x = self.nodes.iter().map(|&x| mid + half * x).collect();
        let w = self.weights.iter().map(|&w| half * w).collect();
        (x, w)
    }
}

/// Newton iteration on the Legendre recurrence, carried out in `f64`.
fn gauss_legendre_f64(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 1..n {
                let kf = k as f64;
                let p2 = ((2.0 * kf + 1.0) * z * p1 - kf * p0) / (kf + 1.0);
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 1 { z } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = nf * (z * pn - pm) / (z * z - 1.0);
            let dz = pn / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        if n == 1 {
            dp = 1.0;
        }
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    (x, w)
}

/// Quadrature nodes and weights on (0, r_max] used for every radial integral
/// and for the radial Nyström matrices.
#[derive(Debug, Clone)]
pub struct RadialGrid<T> {
    pub nodes: Vec<T>,
    pub weights: Vec<T>,
    pub r_max: T,
}

impl<T: Real> RadialGrid<T> {
    /// Gauss–Legendre rule of `n` nodes mapped affinely onto (0, r_max].
    pub fn gauss_legendre(n: usize, r_max: T) -> Result<Self, LabError> {
        if !(r_max > T::zero()) || !r_max.is_finite() {
            return Err(LabError::InvalidParameter {
                name: "rmax",
                reason: format!("radial cutoff must be positive and finite, got {r_max}"),
            });
        }
        let rule = GaussLegendre::new(n)?;
        let (nodes, weights) = rule.mapped(T::zero(), r_max);
        Ok(Self { nodes, weights, r_max })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Same cutoff with `n` nodes.
    pub fn with_nodes(&self, n: usize) -> Result<Self, LabError> {
        Self::gauss_legendre(n, self.r_max)
    }

    /// ∫_0^{r_max} f(r) dr.
    pub fn integrate<F: FnMut(T) -> T>(&self, mut f: F) -> T {
        self.nodes
            .iter()
            .zip(&self.weights)
            .fold(T::zero(), |acc, (&r, &w)| acc + w * f(r))
    }

    /// ∫_{|x| ≤ r_max} f(|x|) dx over ℝ³.
    pub fn integrate_radial_3d<F: FnMut(T) -> T>(&self, mut f: F) -> T {
        T::lit(4.0) * T::PI() * self.integrate(|r| r * r * f(r))
    }

    pub fn validate(&self) -> Result<(), LabError> {
        let ordered = self.nodes.windows(2).all(|w| w[0] < w[1]);
        let inside = self.nodes.iter().all(|&r| r > T::zero() && r <= self.r_max);
        let positive = self.weights.iter().all(|&w| w > T::zero());
        if self.nodes.is_empty() || !ordered || !inside || !positive || self.nodes.len() != self.weights.len() {
            return Err(LabError::InvalidGrid("radial grid must have increasing nodes in (0, r_max] and positive weights".into()));
        }
        Ok(())
    }
}

impl Default for RadialGrid<f64> {
    fn default() -> Self {
        Self::gauss_legendre(320, 30.0).expect("default grid")
    }
}

/// Composite Gauss–Legendre rule on [a, b] with `panels` equal panels of
/// `order` nodes each. Returns nodes, weights and the panel edges.
#[derive(Debug, Clone)]
pub struct CompositeRule<T> {
    pub nodes: Vec<T>,
    pub weights: Vec<T>,
    pub edges: Vec<T>,
    pub order: usize,
}

impl<T: Real> CompositeRule<T> {
    pub fn new(a: T, b: T, panels: usize, order: usize) -> Result<Self, LabError> {
        if panels == 0 || !(b > a) {
            return Err(LabError::InvalidParameter {
                name: "panels",
                reason: "composite rule needs at least one panel on a nonempty interval".into(),
            });
        }
        let rule = GaussLegendre::new(order)?;
        let h = (b - a) / T::from_usize_lossy(panels);
        let edges: Vec<T> = (0..=panels).map(|p| a + h * T::from_usize_lossy(p)).collect();
        let mut nodes = Vec::with_capacity(panels * order);
        let mut weights = Vec::with_capacity(panels * order);
        for p in 0..panels {
            let (x, w) = rule.mapped(edges[p], edges[p + 1]);
            nodes.extend(x);
            weights.extend(w);
        }
        Ok(Self { nodes, weights, edges, order })
    }

    pub fn panel_of(&self, node: usize) -> usize {
        node / self.order
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn rule_is_exact_to_degree_2n_minus_1() {
        let rule = GaussLegendre::<f64>::new(6).unwrap();
        // ∫_{-1}^{1} x^10 = 2/11
        assert_relative_eq!(rule.integrate(-1.0, 1.0, |x| x.powi(10)), 2.0 / 11.0, max_relative = 1e-14);
        assert_relative_eq!(rule.weights.iter().sum::<f64>(), 2.0, max_relative = 1e-15);
        let odd = GaussLegendre::<f64>::new(7).unwrap();
        assert_eq!(odd.nodes[3], 0.0);
    }

    #[test]
    fn large_rules_are_accurate() {
        let rule = GaussLegendre::<f64>::new(2000).unwrap();
        assert_relative_eq!(rule.weights.iter().sum::<f64>(), 2.0, max_relative = 1e-13);
        assert_relative_eq!(rule.integrate(0.0, 1.0, |x| x.exp()), std::f64::consts::E - 1.0, max_relative = 1e-13);
    }

    #[test]
    fn default_radial_grid_reproduces_exponential_moment() {
        let grid = RadialGrid::default();
        grid.validate().unwrap();
        let v = grid.integrate(|r| (-2.0 * r).exp() * r * r);
        assert_relative_eq!(v, 0.25, max_relative = 1e-12);
    }

    #[test]
    fn rejects_bad_cutoff() {
        assert!(RadialGrid::<f64>::gauss_legendre(10, -1.0).is_err());
        assert!(RadialGrid::<f64>::gauss_legendre(0, 1.0).is_err());
    }

    #[test]
    fn composite_rule_integrates_kink_on_panel_edge() {
        let rule = CompositeRule::<f64>::new(-1.0, 1.0, 2, 4).unwrap();
        let v: f64 = rule.nodes.iter().zip(&rule.weights).map(|(x, w)| w * x.abs()).sum();
        assert_relative_eq!(v, 1.0, max_relative = 1e-14);
        assert_eq!(rule.panel_of(5), 1);
    }
}
