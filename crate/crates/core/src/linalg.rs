//! Small dense linear-algebra kernels used throughout the crate.
//!
//! Complex Hermitian eigenproblems are solved through the real symmetric
//! embedding [[Re, -Im], [Im, Re]], which doubles every eigenvalue; real
//! symmetric problems go to `nalgebra::SymmetricEigen`. Large sparse
//! ground-state problems use the Lanczos iteration at the bottom.

use nalgebra::DMatrix;
use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const ONE: C64 = C64::new(1.0, 0.0);
pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

pub fn identity_c(n: usize) -> Array2<C64> {
    Array2::from_diag_elem(n, ONE)
}

pub fn dagger(a: &Array2<C64>) -> Array2<C64> {
    a.t().mapv(|z| z.conj())
}

pub fn kron(a: &Array2<C64>, b: &Array2<C64>) -> Array2<C64> {
    let (ar, ac) = a.dim();
    let (br, bc) = b.dim();
    let mut out = Array2::zeros((ar * br, ac * bc));
    for i in 0..ar {
        for j in 0..ac {
            let aij = a[[i, j]];
            if aij == ZERO {
                continue;
            }
            for k in 0..br {
                for l in 0..bc {
                    out[[i * br + k, j * bc + l]] = aij * b[[k, l]];
                }
            }
        }
    }
    out
}

pub fn frobenius_norm(a: &Array2<C64>) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn frobenius_distance(a: &Array2<C64>, b: &Array2<C64>) -> f64 {
    debug_assert_eq!(a.dim(), b.dim());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// Deviation of `u` from unitarity, as the Frobenius norm of `u^† u - 1`.
pub fn unitarity_deviation(u: &Array2<C64>) -> f64 {
    let n = u.nrows();
    frobenius_distance(&dagger(u).dot(u), &identity_c(n))
}

/// Orthonormalize the columns of `g` in place via modified Gram-Schmidt
/// with a second pass. The implied R factor has a positive real diagonal,
/// so applying this to a complex Ginibre matrix yields a Haar unitary.
pub fn orthonormalize_columns(g: &mut Array2<C64>) -> Result<()> {
    let (n, m) = g.dim();
    if m > n {
        return Err(Error::InvalidArgument(
            "more columns than rows in orthonormalization".into(),
        ));
    }
    for j in 0..m {
        for _pass in 0..2 {
            for k in 0..j {
                let mut dot = ZERO;
                for r in 0..n {
                    dot += g[[r, k]].conj() * g[[r, j]];
                }
                for r in 0..n {
                    let v = g[[r, k]];
                    g[[r, j]] -= dot * v;
                }
            }
        }
        let norm: f64 = (0..n).map(|r| g[[r, j]].norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-14 {
            return Err(Error::InvalidArgument(
                "rank-deficient matrix in orthonormalization".into(),
            ));
        }
        for r in 0..n {
            g[[r, j]] /= norm;
        }
    }
    Ok(())
}

fn to_nalgebra(a: &Array2<f64>) -> DMatrix<f64> {
    DMatrix::from_fn(a.nrows(), a.ncols(), |i, j| a[[i, j]])
}

/// Eigendecomposition of a real symmetric matrix. Eigenvalues ascending,
/// eigenvectors as columns (orthonormal).
pub fn sym_eigen(a: &Array2<f64>) -> (Vec<f64>, Array2<f64>) {
    let n = a.nrows();
    let eig = to_nalgebra(a).symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].partial_cmp(&eig.eigenvalues[j]).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = Array2::zeros((n, n));
    for (col, &i) in order.iter().enumerate() {
        for r in 0..n {
            vectors[[r, col]] = eig.eigenvectors[(r, i)];
        }
    }
    (values, vectors)
}

fn embed_hermitian(h: &Array2<C64>) -> Array2<f64> {
    let n = h.nrows();
    let mut m = Array2::zeros((2 * n, 2 * n));
    for i in 0..n {
        for j in 0..n {
            let z = h[[i, j]];
            m[[i, j]] = z.re;
            m[[i + n, j + n]] = z.re;
            m[[i, j + n]] = -z.im;
            m[[i + n, j]] = z.im;
        }
    }
    m
}

/// Eigenvalues (ascending) of a complex Hermitian matrix.
pub fn hermitian_eigenvalues(h: &Array2<C64>) -> Vec<f64> {
    let n = h.nrows();
    let (vals, _) = sym_eigen(&embed_hermitian(h));
    // The embedding doubles every eigenvalue; take each pair once.
    (0..n).map(|k| 0.5 * (vals[2 * k] + vals[2 * k + 1])).collect()
}

/// Full eigendecomposition of a complex Hermitian matrix: eigenvalues
/// ascending, orthonormal eigenvectors as columns.
pub fn hermitian_eigen(h: &Array2<C64>) -> Result<(Vec<f64>, Array2<C64>)> {
    let n = h.nrows();
    let (vals, vecs) = sym_eigen(&embed_hermitian(h));
    let mut out_vals: Vec<f64> = Vec::with_capacity(n);
    let mut out_vecs: Array2<C64> = Array2::zeros((n, n));
    let mut accepted = 0usize;
    for k in 0..2 * n {
        if accepted == n {
            break;
        }
        // Complexify the embedded eigenvector [u; v] -> u + iv.
        let mut z: Vec<C64> = (0..n)
            .map(|r| C64::new(vecs[[r, k]], vecs[[r + n, k]]))
            .collect();
        // Project out previously accepted vectors of (numerically) the
        // same eigenvalue; the J-symmetry of the embedding makes one of
        // each pair redundant.
        for p in (0..accepted).rev() {
            if (out_vals[p] - vals[k]).abs() > 1e-7 * (1.0 + vals[k].abs()) {
                break;
            }
            let mut dot = ZERO;
            for r in 0..n {
                dot += out_vecs[[r, p]].conj() * z[r];
            }
            for r in 0..n {
                let v = out_vecs[[r, p]];
                z[r] -= dot * v;
            }
        }
        let norm: f64 = z.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-6 {
            continue;
        }
        for r in 0..n {
            out_vecs[[r, accepted]] = z[r] / norm;
        }
        out_vals.push(vals[k]);
        accepted += 1;
    }
    if accepted != n {
        return Err(Error::NoConvergence(
            "hermitian eigenbasis extraction failed".into(),
        ));
    }
    Ok((out_vals, out_vecs))
}

/// Square root of a positive semidefinite Hermitian matrix. Slightly
/// negative eigenvalues from roundoff are clamped to zero.
pub fn psd_sqrt(h: &Array2<C64>) -> Result<Array2<C64>> {
    let n = h.nrows();
    let (vals, vecs) = hermitian_eigen(h)?;
    let mut out = Array2::zeros((n, n));
    for k in 0..n {
        let s = vals[k].max(0.0).sqrt();
        if s == 0.0 {
            continue;
        }
        for i in 0..n {
            for j in 0..n {
                out[[i, j]] += s * vecs[[i, k]] * vecs[[j, k]].conj();
            }
        }
    }
    Ok(out)
}

/// Result of a Lanczos run: one converged extremal eigenpair.
pub struct LanczosPair {
    pub value: f64,
    pub vector: Vec<f64>,
    pub residual: f64,
}

/// Lowest eigenpair of a real symmetric operator given by `matvec`,
/// via Lanczos with full reorthogonalization and a stored basis.
pub fn lanczos_lowest<F>(matvec: F, dim: usize, max_iter: usize, tol: f64) -> Result<LanczosPair>
where
    F: Fn(&[f64], &mut [f64]),
{
    if dim > 1 << 20 {
        return Err(Error::BudgetExceeded(dim));
    }
    if dim == 1 {
        let mut out = vec![0.0];
        matvec(&[1.0], &mut out);
        return Ok(LanczosPair {
            value: out[0],
            vector: vec![1.0],
            residual: 0.0,
        });
    }
    let m = max_iter.min(dim);
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(m);
    let mut alphas: Vec<f64> = Vec::new();
    let mut betas: Vec<f64> = Vec::new();

    // Deterministic pseudo-random start vector.
    let mut v: Vec<f64> = (0..dim)
        .map(|i| {
            let mut s = 0x243f_6a88_85a3_08d3_u64 ^ (i as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15);
            s ^= s >> 29;
            s = s.wrapping_mul(0xbf58_476d_1ce4_e5b9);
            ((s >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        })
        .collect();
    normalize(&mut v);

    let mut w = vec![0.0; dim];
    for it in 0..m {
        basis.push(v.clone());
        matvec(&v, &mut w);
        let alpha = dot(&v, &w);
        alphas.push(alpha);
        // w -= alpha v + beta v_prev, then full reorthogonalization.
        for (wi, vi) in w.iter_mut().zip(v.iter()) {
            *wi -= alpha * vi;
        }
        if let Some(beta) = betas.last() {
            let prev = &basis[basis.len() - 2];
            for (wi, pi) in w.iter_mut().zip(prev.iter()) {
                *wi -= beta * pi;
            }
        }
        for b in &basis {
            let c = dot(b, &w);
            for (wi, bi) in w.iter_mut().zip(b.iter()) {
                *wi -= c * bi;
            }
        }
        let beta = dot(&w, &w).sqrt();

        // Check convergence of the lowest Ritz pair every few steps.
        if it >= 4 && (it % 5 == 0 || beta < 1e-13 || it + 1 == m) {
            let (ritz_val, ritz_y) = lowest_ritz(&alphas, &betas);
            let est = beta * ritz_y.last().unwrap().abs();
            if est < tol || beta < 1e-13 {
                let mut vec0 = vec![0.0; dim];
                for (yk, bk) in ritz_y.iter().zip(basis.iter()) {
                    for (vi, bi) in vec0.iter_mut().zip(bk.iter()) {
                        *vi += yk * bi;
                    }
                }
                normalize(&mut vec0);
                let mut hv = vec![0.0; dim];
                matvec(&vec0, &mut hv);
                let res = residual_norm(&hv, ritz_val, &vec0);
                return Ok(LanczosPair {
                    value: ritz_val,
                    vector: vec0,
                    residual: res,
                });
            }
        }
        if beta < 1e-13 {
            break;
        }
        betas.push(beta);
        for (vi, wi) in v.iter_mut().zip(w.iter()) {
            *vi = wi / beta;
        }
    }
    Err(Error::NoConvergence(format!(
        "Lanczos did not converge in {m} iterations"
    )))
}

fn lowest_ritz(alphas: &[f64], betas: &[f64]) -> (f64, Vec<f64>) {
    let k = alphas.len();
    let mut t = Array2::zeros((k, k));
    for i in 0..k {
        t[[i, i]] = alphas[i];
        if i + 1 < k {
            t[[i, i + 1]] = betas[i];
            t[[i + 1, i]] = betas[i];
        }
    }
    let (vals, vecs) = sym_eigen(&t);
    let y = (0..k).map(|r| vecs[[r, 0]]).collect();
    (vals[0], y)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

fn normalize(v: &mut [f64]) {
    let n = dot(v, v).sqrt();
    for x in v.iter_mut() {
        *x /= n;
    }
}

fn residual_norm(hv: &[f64], val: f64, v: &[f64]) -> f64 {
    hv.iter()
        .zip(v.iter())
        .map(|(h, x)| (h - val * x) * (h - val * x))
        .sum::<f64>()
        .sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn random_hermitian(n: usize, seed: u64) -> Array2<C64> {
        use rand::Rng;
        let mut rng = crate::rng::SeedStream::new(seed).rng();
        let mut h: Array2<C64> = Array2::zeros((n, n));
        for i in 0..n {
            for j in 0..n {
                h[[i, j]] = C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5);
            }
        }
        let hd = dagger(&h);
        (&h + &hd).mapv(|z| 0.5 * z)
    }

    #[test]
    fn hermitian_eigen_reconstructs() {
        for n in [2, 3, 4, 6] {
            let h = random_hermitian(n, 42 + n as u64);
            let (vals, vecs) = hermitian_eigen(&h).unwrap();
            let mut rec: Array2<C64> = Array2::zeros((n, n));
            for k in 0..n {
                for i in 0..n {
                    for j in 0..n {
                        rec[[i, j]] += vals[k] * vecs[[i, k]] * vecs[[j, k]].conj();
                    }
                }
            }
            assert!(frobenius_distance(&rec, &h) < 1e-9);
            // Orthonormality of the eigenbasis.
            assert!(unitarity_deviation(&vecs) < 1e-9);
        }
    }

    #[test]
    fn hermitian_eigen_handles_degeneracy() {
        // Identity has a fully degenerate spectrum.
        let h = identity_c(4);
        let (vals, vecs) = hermitian_eigen(&h).unwrap();
        for v in vals {
            assert!((v - 1.0).abs() < 1e-12);
        }
        assert!(unitarity_deviation(&vecs) < 1e-9);
    }

    #[test]
    fn psd_sqrt_squares_back() {
        let h = random_hermitian(4, 9);
        let hh = dagger(&h).dot(&h); // PSD
        let s = psd_sqrt(&hh).unwrap();
        assert!(frobenius_distance(&s.dot(&s), &hh) < 1e-8);
    }

    #[test]
    fn lanczos_matches_dense_eigen() {
        let n = 60;
        let mut a: Array2<f64> = Array2::zeros((n, n));
        for i in 0..n {
            a[[i, i]] = (i as f64).sin() * 2.0;
            if i + 1 < n {
                a[[i, i + 1]] = -1.3;
                a[[i + 1, i]] = -1.3;
            }
        }
        let (vals, _) = sym_eigen(&a);
        let pair = lanczos_lowest(
            |x, y| {
                for i in 0..n {
                    let mut acc = 0.0;
                    for j in 0..n {
                        acc += a[[i, j]] * x[j];
                    }
                    y[i] = acc;
                }
            },
            n,
            200,
            1e-11,
        )
        .unwrap();
        assert!((pair.value - vals[0]).abs() < 1e-9);
        assert!(pair.residual < 1e-9);
    }
}
