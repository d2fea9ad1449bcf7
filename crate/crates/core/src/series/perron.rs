use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Tolerance on successive iterates (max norm, max entry scaled to 1).
pub const PERRON_TOL: f64 = 1e-14;
pub const PERRON_MAX_ITER: usize = 10_000;

/// Positive left eigenvector of a nonnegative matrix by power iteration.
///
/// Iterates `eta <- (B^T + I) eta`; the shift does not change eigenvectors and
/// makes the iteration converge for periodic matrices such as permutations.
/// Returns `eta` scaled to max entry 1 and the Rayleigh estimate of the
/// spectral radius. The result is a floating-point heuristic: any positive
/// weight gives valid bounds, this one makes them tight.
pub fn perron_weights(b: &DMatrix<f64>) -> Result<(Vec<f64>, f64)> {
    let n = b.nrows();
    if n == 0 || b.ncols() != n {
        return Err(Error::shape("nonempty square matrix", format!("{}x{}", n, b.ncols())));
    }
    if b.iter().any(|x| !(*x >= 0.0) || !x.is_finite()) {
        return Err(Error::Domain("matrix must be finite and nonnegative".into()));
    }
    if b.iter().all(|x| *x == 0.0) {
        return Err(Error::Domain("zero matrix has no Perron vector".into()));
    }
    let bt = b.transpose();
    let mut eta = vec![1.0; n];
    for _ in 0..PERRON_MAX_ITER {
        let mut next: Vec<f64> = (0..n)
            .map(|i| eta[i] + (0..n).map(|j| bt[(i, j)] * eta[j]).sum::<f64>())
            .collect();
        let m = next.iter().cloned().fold(0.0, f64::max);
        next.iter_mut().for_each(|x| *x /= m);
        let diff = next
            .iter()
            .zip(&eta)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        eta = next;
        if diff <= PERRON_TOL {
            let floor = f64::MIN_POSITIVE.sqrt();
            eta.iter_mut().for_each(|x| *x = x.max(floor));
            let rho = rayleigh(b, &eta);
            return Ok((eta, rho));
        }
    }
    Err(Error::Convergence(format!(
        "power iteration did not reach {PERRON_TOL:e} in {PERRON_MAX_ITER} steps"
    )))
}

/// `eta^T B eta / eta^T eta`.
fn rayleigh(b: &DMatrix<f64>, eta: &[f64]) -> f64 {
    let n = eta.len();
    let mut num = 0.0;
    for i in 0..n {
        for j in 0..n {
            num += eta[i] * b[(i, j)] * eta[j];
        }
    }
    num / eta.iter().map(|x| x * x).sum::<f64>()
}
