//! Derivative-free search: Nelder–Mead and Bloch-ball maximization.

use rayon::prelude::*;

use crate::linalg::DensityMatrix;

/// Bloch directions on a Fibonacci sphere.
pub fn fibonacci_sphere(n: usize) -> Vec<[f64; 3]> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|i| {
            let z = 1.0 - 2.0 * (i as f64 + 0.5) / n as f64;
            let r = (1.0 - z * z).max(0.0).sqrt();
            let t = golden * i as f64;
            [r * t.cos(), r * t.sin(), z]
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NelderMead {
    pub max_iterations: usize,
    pub initial_step: f64,
    /// Stop once the spread of simplex values falls below this.
    pub f_tol: f64,
}

impl Default for NelderMead {
    fn default() -> Self {
        Self { max_iterations: 200, initial_step: 0.05, f_tol: 1e-13 }
    }
}

impl NelderMead {
    /// Minimizes `f` from `x0`, returning `(argmin, min)`.
    pub fn minimize(&self, f: impl Fn(&[f64]) -> f64, x0: &[f64]) -> (Vec<f64>, f64) {
        let n = x0.len();
        let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
        simplex.push((x0.to_vec(), f(x0)));
        for i in 0..n {
            let mut x = x0.to_vec();
            x[i] += self.initial_step;
            let v = f(&x);
            simplex.push((x, v));
        }
        let combine = |a: &[f64], b: &[f64], t: f64| -> Vec<f64> { a.iter().zip(b).map(|(a, b)| a + t * (b - a)).collect() };
        for _ in 0..self.max_iterations {
            simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
            if simplex[n].1 - simplex[0].1 <= self.f_tol {
                break;
            }
            let mut centroid = vec![0.0; n];
            for (x, _) in &simplex[..n] {
                for (c, xi) in centroid.iter_mut().zip(x) {
                    *c += xi / n as f64;
                }
            }
            let worst = simplex[n].0.clone();
            let xr = combine(&centroid, &worst, -1.0);
            let fr = f(&xr);
            if fr < simplex[0].1 {
                let xe = combine(&centroid, &worst, -2.0);
                let fe = f(&xe);
                simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
            } else if fr < simplex[n - 1].1 {
                simplex[n] = (xr, fr);
            } else {
                let (xc, fc) = if fr < simplex[n].1 {
                    let xc = combine(&centroid, &xr, 0.5);
                    let fc = f(&xc);
                    (xc, fc)
                } else {
                    let xc = combine(&centroid, &worst, 0.5);
                    let fc = f(&xc);
                    (xc, fc)
                };
                if fc < simplex[n].1.min(fr) {
                    simplex[n] = (xc, fc);
                } else {
                    let best = simplex[0].0.clone();
                    for s in simplex.iter_mut().skip(1) {
                        s.0 = combine(&best, &s.0, 0.5);
                        s.1 = f(&s.0);
                    }
                }
            }
        }
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        simplex.swap_remove(0)
    }
}

/// Maps `R³` onto the Bloch ball by radial clamping.
pub fn clamp_to_ball(x: &[f64]) -> [f64; 3] {
    let n = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
    let s = if n > 1.0 { 1.0 / n } else { 1.0 };
    [x[0] * s, x[1] * s, x[2] * s]
}

/// Grid sizes and refinement for [`maximize_over_qubit_states`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochSearch {
    pub directions: usize,
    pub radii: usize,
    pub refinements: usize,
    pub nelder_mead: NelderMead,
}

impl Default for BlochSearch {
    fn default() -> Self {
        Self { directions: 2000, radii: 21, refinements: 5, nelder_mead: NelderMead::default() }
    }
}

/// Maximizes `f` over qubit states: a grid of Fibonacci directions times
/// equispaced radii in `[0, 1]`, then Nelder–Mead from the best grid points.
/// Returns the maximum and the Bloch vector attaining it.
pub fn maximize_over_qubit_states<F>(f: F, search: &BlochSearch) -> (f64, [f64; 3])
where
    F: Fn(&DensityMatrix) -> f64 + Sync,
{
    let dirs = fibonacci_sphere(search.directions);
    let mut points: Vec<[f64; 3]> = vec![[0.0; 3]];
    for k in 1..search.radii {
        let r = k as f64 / (search.radii - 1) as f64;
        points.extend(dirs.iter().map(|d| [r * d[0], r * d[1], r * d[2]]));
    }
    let mut scored: Vec<(f64, [f64; 3])> =
        points.par_iter().map(|&r| (f(&DensityMatrix::from_bloch(r)), r)).collect();
    scored.sort_by(|a, b| b.0.total_cmp(&a.0));
    let g = |x: &[f64]| -f(&DensityMatrix::from_bloch(clamp_to_ball(x)));
    let best = scored
        .par_iter()
        .take(search.refinements.max(1))
        .map(|&(v, r)| {
            let (x, fx) = search.nelder_mead.minimize(g, &r);
            if -fx > v {
                (-fx, clamp_to_ball(&x))
            } else {
                (v, r)
            }
        })
        .reduce(|| (f64::NEG_INFINITY, [0.0; 3]), |a, b| if b.0 > a.0 { b } else { a });
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nelder_mead_finds_quadratic_minimum() {
        let f = |x: &[f64]| (x[0] - 1.0).powi(2) + 3.0 * (x[1] + 0.5).powi(2) + 2.0;
        let nm = NelderMead { max_iterations: 500, initial_step: 0.3, f_tol: 1e-16 };
        let (x, v) = nm.minimize(f, &[0.0, 0.0]);
        assert!((x[0] - 1.0).abs() < 1e-5 && (x[1] + 0.5).abs() < 1e-5);
        assert!((v - 2.0).abs() < 1e-10);
    }

    #[test]
    fn nelder_mead_rosenbrock() {
        let f = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let nm = NelderMead { max_iterations: 5000, initial_step: 0.5, f_tol: 1e-20 };
        let (x, _) = nm.minimize(f, &[-1.2, 1.0]);
        assert!((x[0] - 1.0).abs() < 1e-4 && (x[1] - 1.0).abs() < 1e-4);
    }

    #[test]
    fn fibonacci_points_are_unit_and_balanced() {
        let pts = fibonacci_sphere(2000);
        let mut mean = [0.0; 3];
        for p in &pts {
            assert!(((p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt() - 1.0).abs() < 1e-12);
            for k in 0..3 {
                mean[k] += p[k] / 2000.0;
            }
        }
        assert!(mean.iter().all(|m| m.abs() < 1e-2));
    }

    #[test]
    fn bloch_maximization_of_linear_functional() {
        // Tr(ρ Z) peaks at |0⟩ with value 1
        let f = |rho: &DensityMatrix| (rho.matrix()[(0, 0)] - rho.matrix()[(1, 1)]).re;
        let (v, r) = maximize_over_qubit_states(f, &BlochSearch::default());
        assert!((v - 1.0).abs() < 1e-9);
        assert!((r[2] - 1.0).abs() < 1e-4);
    }
}
