//! Cyclic Jacobi eigendecomposition for dense complex Hermitian matrices.

use nalgebra::DMatrix;

use super::{C64, CMat};

const MAX_SWEEPS: usize = 100;
const OFF_TOL: f64 = 1e-13;

/// Spectral decomposition `M = U diag(values) U†`, eigenvalues non-increasing.
#[derive(Debug, Clone)]
pub struct Eigen {
    pub values: Vec<f64>,
    /// Columns are the eigenvectors, in the same order as `values`.
    pub vectors: CMat,
}

/// Diagonalizes a Hermitian matrix by cyclic complex Jacobi rotations.
///
/// The input is assumed Hermitian (callers validate); only the upper triangle
/// and the real part of the diagonal influence the result after the first
/// sweep. Iteration stops once the off-diagonal Frobenius mass falls below
/// `1e-13 * ‖M‖_F`.
pub fn jacobi_eigen(m: &CMat) -> Eigen {
    let n = m.nrows();
    assert_eq!(n, m.ncols(), "jacobi_eigen needs a square matrix");
    if n == 0 {
        return Eigen { values: vec![], vectors: CMat::zeros(0, 0) };
    }

    // row-major working copies
    let mut a: Vec<C64> = vec![C64::new(0.0, 0.0); n * n];
    for i in 0..n {
        for j in 0..n {
            a[i * n + j] = m[(i, j)];
        }
    }
    for i in 0..n {
        a[i * n + i] = C64::new(a[i * n + i].re, 0.0);
    }
    let mut v: Vec<C64> = vec![C64::new(0.0, 0.0); n * n];
    for i in 0..n {
        v[i * n + i] = C64::new(1.0, 0.0);
    }

    let total: f64 = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let target = OFF_TOL * total;

    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * n + j].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= target || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let z = a[p * n + q];
                let r = z.norm();
                if r == 0.0 || r < 1e-300 {
                    continue;
                }
                let w = z / r;
                let app = a[p * n + p].re;
                let aqq = a[q * n + q].re;
                let theta = 0.5 * (2.0 * r).atan2(aqq - app);
                let (s, c) = theta.sin_cos();
                // U restricted to (p, q): [[c, s], [-s w̄, c w̄]]
                let u_qp = -w.conj() * s;
                let u_qq = w.conj() * c;
                // A <- A U (columns p, q)
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = akp * c + akq * u_qp;
                    a[k * n + q] = akp * s + akq * u_qq;
                }
                // A <- U† A (rows p, q)
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = apk * c + aqk * u_qp.conj();
                    a[q * n + k] = apk * s + aqk * u_qq.conj();
                }
                a[p * n + q] = C64::new(0.0, 0.0);
                a[q * n + p] = C64::new(0.0, 0.0);
                a[p * n + p] = C64::new(a[p * n + p].re, 0.0);
                a[q * n + q] = C64::new(a[q * n + q].re, 0.0);
                // V <- V U
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = vkp * c + vkq * u_qp;
                    v[k * n + q] = vkp * s + vkq * u_qq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[j * n + j].re.total_cmp(&a[i * n + i].re));
    let values: Vec<f64> = order.iter().map(|&i| a[i * n + i].re).collect();
    let vectors = DMatrix::from_fn(n, n, |r, col| v[r * n + order[col]]);
    Eigen { values, vectors }
}
