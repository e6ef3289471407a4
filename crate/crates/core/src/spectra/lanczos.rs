//! Lanczos iterations: lowest eigenpairs with deflation, and the Krylov
//! propagator `exp(-i H dt) v`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn orthogonalize(v: &mut [f64], against: &[Vec<f64>]) {
    for _ in 0..2 {
        for q in against {
            let c = dot(v, q);
            v.iter_mut().zip(q).for_each(|(x, y)| *x -= c * y);
        }
    }
}

/// Settings for [`lowest_eigenpairs`].
#[derive(Clone, Copy, Debug)]
pub struct LanczosConfig {
    pub krylov_dim: usize,
    pub max_restarts: usize,
    pub residual_tol: f64,
    pub seed: u64,
}

impl Default for LanczosConfig {
    fn default() -> Self {
        LanczosConfig {
            krylov_dim: 80,
            max_restarts: 400,
            residual_tol: 1e-9,
            seed: 0x5eed,
        }
    }
}

/// One converged pair.
#[derive(Clone, Debug)]
pub struct RitzPair {
    pub value: f64,
    pub vector: Vec<f64>,
    pub residual: f64,
    pub iterations: usize,
}

/// Finds eigenpairs of a symmetric operator from the bottom up, deflating
/// each converged vector, until `k` pairs are found or `stop(value)` holds
/// for the latest one (that pair is still returned).
pub fn lowest_eigenpairs<A, S>(apply: A, dim: usize, k: usize, stop: S, cfg: &LanczosConfig) -> Result<Vec<RitzPair>>
where
    A: Fn(&[f64], &mut [f64]),
    S: Fn(f64) -> bool,
{
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut found: Vec<RitzPair> = Vec::new();
    let mut basis: Vec<Vec<f64>> = Vec::new();
    let mut w = vec![0.0; dim];
    while found.len() < k.min(dim) {
        let mut start: Vec<f64> = (0..dim).map(|_| rng.gen::<f64>() - 0.5).collect();
        orthogonalize(&mut start, &basis);
        let mut iterations = 0;
        let mut converged = None;
        for _ in 0..cfg.max_restarts {
            let nrm = norm(&start);
            if nrm == 0.0 {
                return Err(Error::NoConvergence(
                    "Krylov start vector vanished after deflation".into(),
                ));
            }
            start.iter_mut().for_each(|x| *x /= nrm);
            let m_max = cfg.krylov_dim.min(dim - basis.len());
            let mut q: Vec<Vec<f64>> = vec![start.clone()];
            let mut alpha = Vec::with_capacity(m_max);
            let mut beta: Vec<f64> = Vec::with_capacity(m_max);
            for j in 0..m_max {
                apply(&q[j], &mut w);
                iterations += 1;
                let a = dot(&w, &q[j]);
                alpha.push(a);
                orthogonalize(&mut w, &basis);
                orthogonalize(&mut w, &q);
                let b = norm(&w);
                if j + 1 == m_max || b < 1e-12 {
                    break;
                }
                beta.push(b);
                q.push(w.iter().map(|x| x / b).collect());
            }
            let m = alpha.len();
            let mut t = DMatrix::<f64>::zeros(m, m);
            for i in 0..m {
                t[(i, i)] = alpha[i];
                if i + 1 < m {
                    t[(i, i + 1)] = beta[i];
                    t[(i + 1, i)] = beta[i];
                }
            }
            let eig = SymmetricEigen::new(t);
            let (imin, _) = eig
                .eigenvalues
                .iter()
                .copied()
                .enumerate()
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .expect("nonempty tridiagonal");
            let y = eig.eigenvectors.column(imin);
            let mut x = vec![0.0; dim];
            for (qi, yi) in q.iter().zip(y.iter()) {
                x.iter_mut().zip(qi).for_each(|(xv, qv)| *xv += yi * qv);
            }
            orthogonalize(&mut x, &basis);
            let nx = norm(&x);
            x.iter_mut().for_each(|v| *v /= nx);
            apply(&x, &mut w);
            let rayleigh = dot(&x, &w);
            let residual = w
                .iter()
                .zip(&x)
                .map(|(hv, v)| (hv - rayleigh * v).powi(2))
                .sum::<f64>()
                .sqrt();
            if residual <= cfg.residual_tol {
                converged = Some(RitzPair {
                    value: rayleigh,
                    vector: x,
                    residual,
                    iterations,
                });
                break;
            }
            start = x;
        }
        let Some(pair) = converged else {
            return Err(Error::NoConvergence(format!(
                "eigenpair {} not converged after {} restarts",
                found.len(),
                cfg.max_restarts
            )));
        };
        let done = stop(pair.value);
        basis.push(pair.vector.clone());
        found.push(pair);
        if done {
            break;
        }
    }
    found.sort_by(|a, b| a.value.total_cmp(&b.value));
    Ok(found)
}

/// `exp(-i H t) v` by Krylov steps with adaptive step size; the local error
/// estimate of each accepted step stays below `step_tol`.
pub fn krylov_expm<A>(apply: A, v: &[Complex64], t: f64, krylov_dim: usize, step_tol: f64) -> Result<Vec<Complex64>>
where
    A: Fn(&[Complex64], &mut [Complex64]),
{
    let dim = v.len();
    let mut state = v.to_vec();
    let mut remaining = t;
    let mut dt = t;
    let mut w = vec![Complex64::new(0.0, 0.0); dim];
    let cdot = |a: &[Complex64], b: &[Complex64]| -> Complex64 { a.iter().zip(b).map(|(x, y)| x.conj() * y).sum() };
    let mut guard = 0;
    while remaining.abs() > 0.0 {
        guard += 1;
        if guard > 100_000 {
            return Err(Error::NoConvergence("Krylov propagation step size collapsed".into()));
        }
        let nrm = cdot(&state, &state).re.sqrt();
        if nrm == 0.0 {
            return Ok(state);
        }
        let mut q: Vec<Vec<Complex64>> = vec![state.iter().map(|x| x / nrm).collect()];
        let mut alpha = Vec::new();
        let mut beta: Vec<f64> = Vec::new();
        let mut tail = 0.0;
        for j in 0..krylov_dim.min(dim) {
            apply(&q[j], &mut w);
            let a = cdot(&q[j], &w).re;
            alpha.push(a);
            for _ in 0..2 {
                for qi in &q {
                    let c = cdot(qi, &w);
                    w.iter_mut().zip(qi).for_each(|(x, y)| *x -= c * y);
                }
            }
            let b = cdot(&w, &w).re.sqrt();
            tail = b;
            if b < 1e-12 || j + 1 == krylov_dim.min(dim) {
                break;
            }
            beta.push(b);
            q.push(w.iter().map(|x| x / b).collect());
        }
        let m = alpha.len();
        let mut tm = DMatrix::<f64>::zeros(m, m);
        for i in 0..m {
            tm[(i, i)] = alpha[i];
            if i + 1 < m {
                tm[(i, i + 1)] = beta[i];
                tm[(i + 1, i)] = beta[i];
            }
        }
        let eig = SymmetricEigen::new(tm);
        loop {
            let step = dt.abs().min(remaining.abs()) * remaining.signum();
            // c = V exp(-i L step) V^T e1
            let coeffs: DVector<Complex64> = {
                let mut acc = DVector::from_element(m, Complex64::new(0.0, 0.0));
                for k in 0..m {
                    let phase = Complex64::new(0.0, -eig.eigenvalues[k] * step).exp();
                    let weight = eig.eigenvectors[(0, k)] * phase;
                    for i in 0..m {
                        acc[i] += eig.eigenvectors[(i, k)] * weight;
                    }
                }
                acc
            };
            let err = tail * coeffs[m - 1].norm() * nrm;
            if err <= step_tol || tail < 1e-12 {
                let mut next = vec![Complex64::new(0.0, 0.0); dim];
                for (qi, ci) in q.iter().zip(coeffs.iter()) {
                    next.iter_mut().zip(qi).for_each(|(x, y)| *x += ci * y * nrm);
                }
                state = next;
                remaining -= step;
                if err < step_tol / 16.0 {
                    dt *= 1.5;
                }
                break;
            }
            dt *= 0.5;
            if dt.abs() < 1e-14 * t.abs().max(1.0) {
                return Err(Error::NoConvergence("Krylov step below resolution".into()));
            }
        }
    }
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;

    // path-graph Laplacian: eigenvalues 2 - 2 cos(pi k / n)
    fn laplacian(n: usize) -> impl Fn(&[f64], &mut [f64]) {
        move |x: &[f64], y: &mut [f64]| {
            for i in 0..n {
                let mut v = 0.0;
                let mut deg = 0.0;
                if i > 0 {
                    v -= x[i - 1];
                    deg += 1.0;
                }
                if i + 1 < n {
                    v -= x[i + 1];
                    deg += 1.0;
                }
                y[i] = v + deg * x[i];
            }
        }
    }

    #[test]
    fn lowest_of_path_laplacian() {
        let n = 60;
        let pairs = lowest_eigenpairs(laplacian(n), n, 3, |_| false, &LanczosConfig::default()).unwrap();
        for (k, p) in pairs.iter().enumerate() {
            let exact = 2.0 - 2.0 * (std::f64::consts::PI * k as f64 / n as f64).cos();
            assert!((p.value - exact).abs() < 1e-9, "{k}: {} vs {exact}", p.value);
        }
    }

    #[test]
    fn degenerate_kernel_is_resolved() {
        // two disjoint path graphs: kernel of dimension 2
        let n = 40;
        let op = move |x: &[f64], y: &mut [f64]| {
            laplacian(n)(&x[..n], &mut y[..n]);
            laplacian(n)(&x[n..], &mut y[n..]);
        };
        let pairs = lowest_eigenpairs(op, 2 * n, 10, |v| v > 1e-6, &LanczosConfig::default()).unwrap();
        let zeros = pairs.iter().filter(|p| p.value.abs() < 1e-9).count();
        assert_eq!(zeros, 2);
    }

    #[test]
    fn krylov_matches_diagonal_phase() {
        let diag = [0.0, 1.0, 2.5];
        let apply = |x: &[Complex64], y: &mut [Complex64]| {
            for i in 0..3 {
                y[i] = x[i] * diag[i];
            }
        };
        let v = vec![Complex64::new(1.0, 0.0); 3];
        let out = krylov_expm(apply, &v, 3.0, 10, 1e-12).unwrap();
        for i in 0..3 {
            let want = Complex64::new(0.0, -diag[i] * 3.0).exp();
            assert!((out[i] - want).norm() < 1e-10);
        }
    }
}
