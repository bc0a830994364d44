use crate::error::{Error, Result};

fn check_grid(grid: &[f64], curves: &[Vec<f64>]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::Domain("empty grid".into()));
    }
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Domain("grid must be strictly increasing".into()));
    }
    for c in curves {
        if c.len() != grid.len() {
            return Err(Error::DimensionMismatch { expected: grid.len(), got: c.len() });
        }
    }
    Ok(())
}

/// Pointwise minimum over the finite entries; NaN where no curve is finite.
pub fn pointwise_min(grid: &[f64], curves: &[Vec<f64>]) -> Result<Vec<f64>> {
    check_grid(grid, curves)?;
    Ok((0..grid.len())
        .map(|i| curves.iter().map(|c| c[i]).filter(|v| v.is_finite()).reduce(f64::min).unwrap_or(f64::NAN))
        .collect())
}

fn cross(o: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Largest convex function below every curve, sampled on `grid`: lower hull
/// (monotone chain) of the pointwise minimum, linearly interpolated back onto
/// the grid. Non-finite samples are skipped, so a curve can be dropped at
/// individual points.
pub fn convex_envelope(grid: &[f64], curves: &[Vec<f64>]) -> Result<Vec<f64>> {
    let m = pointwise_min(grid, curves)?;
    let pts: Vec<(f64, f64)> = grid.iter().zip(&m).filter(|(_, y)| y.is_finite()).map(|(&x, &y)| (x, y)).collect();
    if pts.is_empty() {
        return Err(Error::Domain("no finite samples".into()));
    }
    let mut hull: Vec<(f64, f64)> = Vec::with_capacity(pts.len());
    for &p in &pts {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    let (first, last) = (hull[0].0, hull[hull.len() - 1].0);
    let mut seg = 0;
    Ok(grid
        .iter()
        .map(|&x| {
            if x < first || x > last {
                return f64::NAN;
            }
            if hull.len() == 1 {
                return hull[0].1;
            }
            while seg + 2 < hull.len() && x > hull[seg + 1].0 {
                seg += 1;
            }
            let (a, b) = (hull[seg], hull[seg + 1]);
            a.1 + (b.1 - a.1) * (x - a.0) / (b.0 - a.0)
        })
        .collect())
}

/// Sampling error estimate for the envelope: half the widest grid spacing
/// times the largest finite-difference slope of the pointwise minimum.
pub fn envelope_resolution(grid: &[f64], curves: &[Vec<f64>]) -> Result<f64> {
    let m = pointwise_min(grid, curves)?;
    let mut lip: f64 = 0.0;
    let mut h: f64 = 0.0;
    for i in 1..grid.len() {
        let dx = grid[i] - grid[i - 1];
        h = h.max(dx);
        if m[i].is_finite() && m[i - 1].is_finite() {
            lip = lip.max(((m[i] - m[i - 1]) / dx).abs());
        }
    }
    Ok(0.5 * h * lip)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(n: usize, a: f64, b: f64) -> Vec<f64> {
        (0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64).collect()
    }

    #[test]
    fn convex_curve_is_fixed() {
        let g = grid(101, -1.0, 2.0);
        let f: Vec<f64> = g.iter().map(|x| x * x + 0.3 * x).collect();
        let e = convex_envelope(&g, &[f.clone()]).unwrap();
        for (a, b) in e.iter().zip(&f) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn tent_gives_chord() {
        let g = grid(101, 0.0, 1.0);
        let a = g.clone();
        let b: Vec<f64> = g.iter().map(|x| 1.0 - x).collect();
        let e = convex_envelope(&g, &[a, b]).unwrap();
        assert!(e.iter().all(|v| v.abs() < 1e-15));
    }

    #[test]
    fn nan_points_are_skipped() {
        let g = grid(5, 0.0, 1.0);
        let f = vec![0.0, f64::NAN, -10.0, f64::NAN, 0.0];
        let e = convex_envelope(&g, &[f]).unwrap();
        assert_eq!(e[0], 0.0);
        assert!((e[1] + 5.0).abs() < 1e-12);
        assert_eq!(e[2], -10.0);
    }

    #[test]
    fn grid_checks() {
        let g = grid(3, 0.0, 1.0);
        assert!(convex_envelope(&g, &[vec![1.0, 2.0]]).is_err());
        assert!(convex_envelope(&[0.0, 0.0], &[vec![1.0, 2.0]]).is_err());
    }

    #[test]
    fn resolution_of_a_line() {
        let g = grid(11, 0.0, 1.0);
        let f: Vec<f64> = g.iter().map(|x| 3.0 * x).collect();
        assert!((envelope_resolution(&g, &[f]).unwrap() - 0.15).abs() < 1e-12);
    }
}
