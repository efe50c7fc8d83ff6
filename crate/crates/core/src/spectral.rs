//! Full eigenvalue spectrum of symmetric sparse matrices, used for the
//! normalized-Laplacian analysis.
//!
//! The solver densifies the input and runs Householder tridiagonalization
//! followed by the implicit-shift QL iteration (the classic EISPACK
//! tred2/tql2 pair). A dense method is deliberate: the summary statistics
//! need every eigenvalue, which extremal iterative solvers cannot provide.
//! When eigenvectors are not requested the transformation is never
//! accumulated, which drops the QL phase to O(n^2).

use crate::error::{Error, Result};
use crate::sparse::SparseMatrix;
use ndarray::Array2;

/// Matrices larger than this are rejected unless the caller explicitly
/// lifts the cap; the dense workspace grows as 8n^2 bytes.
pub const DEFAULT_DENSE_CAP: usize = 5000;

const SYMMETRY_TOLERANCE: f64 = 1e-12;
const TRACE_RELATIVE_TOLERANCE: f64 = 1e-6;
const MAX_QL_ITERATIONS: usize = 50;

/// Eigenvalues in ascending order; column k of `eigenvectors` pairs with
/// `eigenvalues[k]`.
#[derive(Debug, Clone)]
pub struct SpectrumResult {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Option<Array2<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumStats {
    pub min: f64,
    pub median: f64,
    pub avg: f64,
    pub std: f64,
    pub max: f64,
}

impl SpectrumResult {
    /// Multiplicity of the zero eigenvalue within `tol`; equals the number
    /// of connected components when the input is a normalized Laplacian.
    pub fn near_zero_count(&self, tol: f64) -> usize {
        self.eigenvalues.iter().filter(|&&x| x.abs() < tol).count()
    }
}

/// Full spectrum with the default dense cap.
pub fn eigenvalues_symmetric(m: &SparseMatrix, want_vectors: bool) -> Result<SpectrumResult> {
    eigenvalues_symmetric_with_cap(m, want_vectors, Some(DEFAULT_DENSE_CAP))
}

/// Full spectrum; `cap = None` lifts the size guard (the --allow-large path).
pub fn eigenvalues_symmetric_with_cap(
    m: &SparseMatrix,
    want_vectors: bool,
    cap: Option<usize>,
) -> Result<SpectrumResult> {
    let n = m.num_rows();
    if n != m.num_cols() {
        return Err(Error::NotSquare {
            rows: n,
            cols: m.num_cols(),
        });
    }
    if let Some(cap) = cap {
        if n > cap {
            return Err(Error::SpectrumCapExceeded { num_rows: n, cap });
        }
    }
    let asymmetry = m.max_asymmetry();
    if asymmetry > SYMMETRY_TOLERANCE {
        return Err(Error::NonSymmetric {
            max_asymmetry: asymmetry,
        });
    }
    if n == 0 {
        return Ok(SpectrumResult {
            eigenvalues: Vec::new(),
            eigenvectors: None,
        });
    }

    let mut work = m.to_dense_flat();
    let mut diag = vec![0.0; n];
    let mut off = vec![0.0; n];
    householder_tridiagonalize(&mut work, n, &mut diag, &mut off, want_vectors);
    tridiagonal_ql(
        &mut diag,
        &mut off,
        if want_vectors { Some(&mut work) } else { None },
        n,
    )?;

    // Eigenvalue sum must reproduce the trace; a violation means the
    // iteration went off the rails.
    let trace = m.trace();
    let eigen_sum: f64 = diag.iter().sum();
    if (eigen_sum - trace).abs() > TRACE_RELATIVE_TOLERANCE * trace.abs().max(1.0) {
        return Err(Error::NumericalFailure(format!(
            "eigenvalue sum {eigen_sum} disagrees with trace {trace}"
        )));
    }

    let eigenvectors = if want_vectors {
        Some(Array2::from_shape_vec((n, n), work).expect("square workspace"))
    } else {
        None
    };
    Ok(SpectrumResult {
        eigenvalues: diag,
        eigenvectors,
    })
}

/// Summary statistics over a non-empty spectrum. Median of an even-length
/// spectrum is the mean of the two central values; std is the population
/// standard deviation.
pub fn spectrum_stats(s: &SpectrumResult) -> Result<SpectrumStats> {
    let eigs = &s.eigenvalues;
    if eigs.is_empty() {
        return Err(Error::EmptySpectrum);
    }
    let n = eigs.len();
    let min = eigs[0];
    let max = eigs[n - 1];
    let median = if n % 2 == 1 {
        eigs[n / 2]
    } else {
        0.5 * (eigs[n / 2 - 1] + eigs[n / 2])
    };
    let avg = eigs.iter().sum::<f64>() / n as f64;
    let variance = eigs.iter().map(|x| (x - avg) * (x - avg)).sum::<f64>() / n as f64;
    Ok(SpectrumStats {
        min,
        median,
        avg,
        std: variance.sqrt(),
        max,
    })
}

/// Householder reduction of a symmetric matrix to tridiagonal form
/// (EISPACK tred2). `v` holds the n x n row-major input and is destroyed;
/// with `accumulate` it ends up holding the orthogonal transformation.
/// Only the lower triangle is referenced. The two O(n^3) kernels are
/// restructured to walk rows instead of columns, which is what makes the
/// citation-scale matrices finish in seconds.
fn householder_tridiagonalize(
    v: &mut [f64],
    n: usize,
    d: &mut [f64],
    e: &mut [f64],
    accumulate: bool,
) {
    for j in 0..n {
        d[j] = v[(n - 1) * n + j];
    }

    for i in (1..n).rev() {
        let scale: f64 = d[..i].iter().map(|x| x.abs()).sum();
        let mut h = 0.0;
        if scale == 0.0 {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v[(i - 1) * n + j];
                v[i * n + j] = 0.0;
                v[j * n + i] = 0.0;
            }
        } else {
            // Generate the Householder vector in d[..i].
            for k in 0..i {
                d[k] /= scale;
                h += d[k] * d[k];
            }
            let f0 = d[i - 1];
            let mut g = h.sqrt();
            if f0 > 0.0 {
                g = -g;
            }
            e[i] = scale * g;
            h -= f0 * g;
            d[i - 1] = f0 - g;
            for item in e[..i].iter_mut() {
                *item = 0.0;
            }

            // e[..i] := T d over the lower-stored symmetric leading block.
            for k in 0..i {
                let dk = d[k];
                let row = &v[k * n..k * n + k + 1];
                let mut acc = row[k] * dk;
                for j in 0..k {
                    acc += row[j] * d[j];
                    e[j] += row[j] * dk;
                }
                e[k] += acc;
            }
            if accumulate {
                for j in 0..i {
                    v[j * n + i] = d[j];
                }
            }
            let mut f = 0.0;
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }

            // Rank-2 update of the lower triangle.
            for k in 0..i {
                let dk = d[k];
                let ek = e[k];
                let row = &mut v[k * n..k * n + k + 1];
                for j in 0..=k {
                    row[j] -= d[j] * ek + e[j] * dk;
                }
            }
            for j in 0..i {
                d[j] = v[(i - 1) * n + j];
                v[i * n + j] = 0.0;
            }
        }
        d[i] = h;
    }

    if accumulate {
        for i in 0..n.saturating_sub(1) {
            v[(n - 1) * n + i] = v[i * n + i];
            v[i * n + i] = 1.0;
            let h = d[i + 1];
            if h != 0.0 {
                for k in 0..=i {
                    d[k] = v[k * n + i + 1] / h;
                }
                for j in 0..=i {
                    let mut g = 0.0;
                    for k in 0..=i {
                        g += v[k * n + i + 1] * v[k * n + j];
                    }
                    for k in 0..=i {
                        v[k * n + j] -= g * d[k];
                    }
                }
            }
            for k in 0..=i {
                v[k * n + i + 1] = 0.0;
            }
        }
        for j in 0..n {
            d[j] = v[(n - 1) * n + j];
            v[(n - 1) * n + j] = 0.0;
        }
        v[(n - 1) * n + n - 1] = 1.0;
    } else {
        for j in 0..n {
            d[j] = v[j * n + j];
        }
    }
    e[0] = 0.0;
}

/// Implicit-shift QL iteration on a symmetric tridiagonal matrix
/// (EISPACK tql2). On return `d` holds the eigenvalues in ascending order;
/// when `z` is given its columns are rotated into the eigenvectors.
fn tridiagonal_ql(d: &mut [f64], e: &mut [f64], mut z: Option<&mut [f64]>, n: usize) -> Result<()> {
    if n == 0 {
        return Ok(());
    }
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;

    let eps = 2.0_f64.powi(-52);
    let mut shift_total = 0.0;
    let mut tst1: f64 = 0.0;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 && e[m].abs() > eps * tst1 {
            m += 1;
        }
        if m > l {
            let mut iterations = 0;
            loop {
                iterations += 1;
                if iterations > MAX_QL_ITERATIONS {
                    return Err(Error::NumericalFailure(format!(
                        "QL iteration failed to converge at eigenvalue index {l}"
                    )));
                }

                // Implicit shift from the leading 2x2.
                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let h = g - d[l];
                for item in d[l + 2..n].iter_mut() {
                    *item -= h;
                }
                shift_total += h;

                // One QL sweep of Givens rotations, bottom up.
                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g_i = c * e[i];
                    let h_i = c * p;
                    let r_i = p.hypot(e[i]);
                    e[i + 1] = s * r_i;
                    s = e[i] / r_i;
                    c = p / r_i;
                    p = c * d[i] - s * g_i;
                    d[i + 1] = h_i + s * (c * g_i + s * d[i]);
                    if let Some(zm) = z.as_deref_mut() {
                        for k in 0..n {
                            let t = zm[k * n + i + 1];
                            zm[k * n + i + 1] = s * zm[k * n + i] + c * t;
                            zm[k * n + i] = c * zm[k * n + i] - s * t;
                        }
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;

                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += shift_total;
        e[l] = 0.0;
    }

    // Ascending order, carrying eigenvector columns along.
    for i in 0..n.saturating_sub(1) {
        let mut k = i;
        for j in i + 1..n {
            if d[j] < d[k] {
                k = j;
            }
        }
        if k != i {
            d.swap(i, k);
            if let Some(zm) = z.as_deref_mut() {
                for row in 0..n {
                    zm.swap(row * n + i, row * n + k);
                }
            }
        }
    }
    Ok(())
}
