//! Selected eigenpairs of a real symmetric tridiagonal matrix by Sturm
//! bisection and inverse iteration.

use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct SymTridiag {
    pub diag: Vec<f64>,
    /// off[i] couples rows i and i + 1.
    pub off: Vec<f64>,
}

impl SymTridiag {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Result<Self> {
        if diag.is_empty() || off.len() + 1 != diag.len() {
            return Err(Error::domain(
                "tridiagonal: off-diagonal must be one shorter than the diagonal",
            ));
        }
        Ok(Self { diag, off })
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// Number of eigenvalues strictly less than x.
    pub fn sturm_count(&self, x: f64) -> usize {
        let mut count = 0;
        let mut q = self.diag[0] - x;
        if q < 0.0 {
            count += 1;
        }
        for i in 1..self.diag.len() {
            let prev = if q == 0.0 {
                f64::EPSILON * (self.off[i - 1].abs() + 1e-300)
            } else {
                q
            };
            q = self.diag[i] - x - self.off[i - 1] * self.off[i - 1] / prev;
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// Gershgorin interval containing the spectrum.
    pub fn bounds(&self) -> (f64, f64) {
        let n = self.diag.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let left = if i > 0 { self.off[i - 1].abs() } else { 0.0 };
            let right = if i + 1 < n { self.off[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - left - right);
            hi = hi.max(self.diag[i] + left + right);
        }
        (lo, hi)
    }

    /// k-th smallest eigenvalue (0-based), bisected until the bracket is
    /// below rel_tol·|λ| or floating-point resolution.
    pub fn eigenvalue(&self, k: usize, rel_tol: f64) -> Result<f64> {
        if k >= self.len() {
            return Err(Error::domain(format!(
                "eigenvalue index {k} out of range {}",
                self.len()
            )));
        }
        let (mut lo, mut hi) = self.bounds();
        let pad = 1e-12 * (hi - lo).abs().max(1.0);
        lo -= pad;
        hi += pad;
        for _ in 0..400 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.sturm_count(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
            if hi - lo <= rel_tol * mid.abs() {
                break;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// Eigenvector for an (accurate) eigenvalue estimate, unit Euclidean norm.
    pub fn eigenvector(&self, lambda: f64) -> Result<Vec<f64>> {
        let n = self.len();
        let shift = lambda + f64::EPSILON * lambda.abs().max(1e-300) * 4.0;
        let mut x: Vec<f64> = (0..n).map(|i| 1.0 + 0.1 * ((i * 7919) % 13) as f64 / 13.0).collect();
        normalize(&mut x);
        for _ in 0..3 {
            x = self.solve_shifted(shift, &x)?;
            normalize(&mut x);
        }
        Ok(x)
    }

    /// Solves (T − σI) y = b by Gaussian elimination with partial pivoting.
    fn solve_shifted(&self, sigma: f64, b: &[f64]) -> Result<Vec<f64>> {
        let n = self.len();
        if n == 1 {
            let d = self.diag[0] - sigma;
            let d = if d == 0.0 { f64::EPSILON } else { d };
            return Ok(vec![b[0] / d]);
        }
        // Row i holds (lower, diag, upper, upper2) after elimination.
        let mut dl: Vec<f64> = self.off.clone();
        let mut d: Vec<f64> = self.diag.iter().map(|v| v - sigma).collect();
        let mut du: Vec<f64> = self.off.clone();
        let mut du2 = vec![0.0; n.saturating_sub(2)];
        let mut rhs = b.to_vec();
        let tiny = f64::EPSILON * self.bounds().1.abs().max(self.bounds().0.abs()).max(1e-300);
        for i in 0..n - 1 {
            if d[i].abs() >= dl[i].abs() {
                if d[i] == 0.0 {
                    d[i] = tiny;
                }
                let m = dl[i] / d[i];
                d[i + 1] -= m * du[i];
                rhs[i + 1] -= m * rhs[i];
                dl[i] = 0.0;
            } else {
                // Swap rows i and i + 1.
                let m = d[i] / dl[i];
                d[i] = dl[i];
                let tmp = d[i + 1];
                d[i + 1] = du[i] - m * tmp;
                if i + 1 < n - 1 {
                    du2[i] = du[i + 1];
                    du[i + 1] = -m * du2[i];
                }
                du[i] = tmp;
                rhs.swap(i, i + 1);
                rhs[i + 1] -= m * rhs[i];
                dl[i] = 0.0;
            }
        }
        if d[n - 1] == 0.0 {
            d[n - 1] = tiny;
        }
        let mut y = vec![0.0; n];
        y[n - 1] = rhs[n - 1] / d[n - 1];
        y[n - 2] = (rhs[n - 2] - du[n - 2] * y[n - 1]) / d[n - 2];
        for i in (0..n.saturating_sub(2)).rev() {
            y[i] = (rhs[i] - du[i] * y[i + 1] - du2[i] * y[i + 2]) / d[i];
        }
        if y.iter().any(|v| !v.is_finite()) {
            return Err(Error::RootFinding(
                "inverse iteration produced non-finite values".into(),
            ));
        }
        Ok(y)
    }
}

fn normalize(x: &mut [f64]) {
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm > 0.0 {
        x.iter_mut().for_each(|v| *v /= norm);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn laplacian(n: usize) -> SymTridiag {
        SymTridiag::new(vec![2.0; n], vec![-1.0; n - 1]).unwrap()
    }

    #[test]
    fn discrete_laplacian_spectrum() {
        let n = 200;
        let t = laplacian(n);
        for k in 0..6 {
            let exact = 2.0 - 2.0 * (std::f64::consts::PI * (k + 1) as f64 / (n + 1) as f64).cos();
            let got = t.eigenvalue(k, 1e-14).unwrap();
            assert!((got - exact).abs() < 1e-13 * exact.max(1.0), "{k}: {got} vs {exact}");
        }
    }

    #[test]
    fn eigenvector_residual() {
        let n = 300;
        let diag: Vec<f64> = (0..n)
            .map(|i| 2.0 + 0.01 * (i as f64).sin() - 50.0 / (i as f64 + 1.0))
            .collect();
        let t = SymTridiag::new(diag, vec![-1.0; n - 1]).unwrap();
        for k in 0..4 {
            let lam = t.eigenvalue(k, 1e-15).unwrap();
            let v = t.eigenvector(lam).unwrap();
            let mut worst = 0.0f64;
            for i in 0..n {
                let mut tv = t.diag[i] * v[i];
                if i > 0 {
                    tv += t.off[i - 1] * v[i - 1];
                }
                if i + 1 < n {
                    tv += t.off[i] * v[i + 1];
                }
                worst = worst.max((tv - lam * v[i]).abs());
            }
            assert!(worst < 1e-10, "k={k} residual {worst}");
        }
    }

    #[test]
    fn sturm_counts_monotone() {
        let t = laplacian(50);
        let (lo, hi) = t.bounds();
        assert_eq!(t.sturm_count(lo - 1.0), 0);
        assert_eq!(t.sturm_count(hi + 1.0), 50);
        assert!(t.eigenvalue(50, 1e-12).is_err());
    }
}
