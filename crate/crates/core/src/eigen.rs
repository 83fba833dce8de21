//! Small dense eigensolvers for the (generally non-symmetric) real
//! tridiagonal matrices produced by the spectrum module.
// index loops mirror the textbook row/column formulation
#![allow(clippy::needless_range_loop)]

use num_complex::Complex64;

use crate::error::{Error, Result};

const MAX_QR_ITERATIONS: usize = 30;

/// Eigenvalues of the symmetric tridiagonal matrix with diagonal `diag` and
/// off-diagonal `off` (`off[i]` couples `i` and `i + 1`), ascending, by Sturm
/// sequence bisection.
pub fn symmetric_tridiagonal_eigenvalues(diag: &[f64], off: &[f64]) -> Vec<f64> {
    let n = diag.len();
    if n <= 1 {
        return diag.to_vec();
    }
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for i in 0..n {
        let r = if i > 0 { off[i - 1].abs() } else { 0.0 } + off.get(i).map_or(0.0, |e| e.abs());
        lo = lo.min(diag[i] - r);
        hi = hi.max(diag[i] + r);
    }
    let scale = lo.abs().max(hi.abs()).max(f64::MIN_POSITIVE);
    let pivmin = f64::MIN_POSITIVE.max(f64::EPSILON * f64::EPSILON * scale * scale);
    lo -= 2.0 * f64::EPSILON * scale;
    hi += 2.0 * f64::EPSILON * scale;

    // number of eigenvalues strictly below x
    let count_below = |x: f64| -> usize {
        let mut count = 0;
        let mut piv = 1.0;
        for i in 0..n {
            let coupling = if i > 0 {
                off[i - 1] * off[i - 1] / piv
            } else {
                0.0
            };
            piv = diag[i] - x - coupling;
            if piv.abs() < pivmin {
                piv = -pivmin;
            }
            if piv < 0.0 {
                count += 1;
            }
        }
        count
    };

    (0..n)
        .map(|k| {
            let (mut a, mut b) = (lo, hi);
            for _ in 0..200 {
                let mid = 0.5 * (a + b);
                if mid <= a || mid >= b {
                    break;
                }
                if count_below(mid) > k {
                    b = mid;
                } else {
                    a = mid;
                }
            }
            0.5 * (a + b)
        })
        .collect()
}

/// All eigenvalues of a real upper Hessenberg matrix by the shifted (Francis
/// double-shift) QR iteration. The matrix is consumed as scratch space.
pub fn hessenberg_eigenvalues(mut a: Vec<Vec<f64>>) -> Result<Vec<Complex64>> {
    let n = a.len();
    let mut wr = vec![0.0; n];
    let mut wi = vec![0.0; n];
    let eps = f64::EPSILON;
    let mut anorm = 0.0;
    for (i, row) in a.iter().enumerate() {
        for v in &row[i.saturating_sub(1)..] {
            anorm += v.abs();
        }
    }
    let mut nn = n as isize - 1;
    let mut t = 0.0;
    let mut total_iterations = 0;
    while nn >= 0 {
        let mut its = 0;
        loop {
            let nu = nn as usize;
            // look for a single small subdiagonal element
            let mut l = nu;
            while l > 0 {
                let mut s = a[l - 1][l - 1].abs() + a[l][l].abs();
                if s == 0.0 {
                    s = anorm;
                }
                if a[l][l - 1].abs() <= eps * s {
                    a[l][l - 1] = 0.0;
                    break;
                }
                l -= 1;
            }
            let mut x = a[nu][nu];
            if l == nu {
                wr[nu] = x + t;
                wi[nu] = 0.0;
                nn -= 1;
            } else {
                let mut y = a[nu - 1][nu - 1];
                let mut w = a[nu][nu - 1] * a[nu - 1][nu];
                if l == nu - 1 {
                    let p = 0.5 * (y - x);
                    let q = p * p + w;
                    let z = q.abs().sqrt();
                    x += t;
                    if q >= 0.0 {
                        let z = p + z.copysign(p);
                        wr[nu - 1] = x + z;
                        wr[nu] = if z != 0.0 { x - w / z } else { x + z };
                        wi[nu - 1] = 0.0;
                        wi[nu] = 0.0;
                    } else {
                        wr[nu - 1] = x + p;
                        wr[nu] = x + p;
                        wi[nu - 1] = z;
                        wi[nu] = -z;
                    }
                    nn -= 2;
                } else {
                    if its == MAX_QR_ITERATIONS {
                        return Err(Error::EigensolverNoConvergence {
                            iterations: total_iterations,
                        });
                    }
                    if its == 10 || its == 20 {
                        // exceptional shift
                        t += x;
                        for (i, row) in a.iter_mut().enumerate().take(nu + 1) {
                            row[i] -= x;
                        }
                        let s = a[nu][nu - 1].abs() + a[nu - 1][nu - 2].abs();
                        x = 0.75 * s;
                        y = x;
                        w = -0.4375 * s * s;
                    }
                    its += 1;
                    total_iterations += 1;
                    francis_step(&mut a, l, nu, x, y, w);
                }
            }
            if (l as isize) + 1 >= nn {
                break;
            }
        }
    }
    Ok(wr
        .into_iter()
        .zip(wi)
        .map(|(re, im)| Complex64::new(re, im))
        .collect())
}

/// One implicit double-shift QR sweep on the active block `l..=nn`.
fn francis_step(a: &mut [Vec<f64>], l: usize, nn: usize, x: f64, y: f64, w: f64) {
    let eps = f64::EPSILON;
    let (mut p, mut q, mut r);
    let mut z;
    // look for two consecutive small subdiagonal elements
    let mut m = nn - 2;
    loop {
        z = a[m][m];
        let rr = x - z;
        let ss = y - z;
        p = (rr * ss - w) / a[m + 1][m] + a[m][m + 1];
        q = a[m + 1][m + 1] - z - rr - ss;
        r = a[m + 2][m + 1];
        let s = p.abs() + q.abs() + r.abs();
        p /= s;
        q /= s;
        r /= s;
        if m == l {
            break;
        }
        let u = a[m][m - 1].abs() * (q.abs() + r.abs());
        let v = p.abs() * (a[m - 1][m - 1].abs() + z.abs() + a[m + 1][m + 1].abs());
        if u <= eps * v {
            break;
        }
        m -= 1;
    }
    for i in m..nn - 1 {
        a[i + 2][i] = 0.0;
        if i != m {
            a[i + 2][i - 1] = 0.0;
        }
    }
    let mut xk = 0.0;
    for k in m..nn {
        if k != m {
            p = a[k][k - 1];
            q = a[k + 1][k - 1];
            r = if k + 1 != nn { a[k + 2][k - 1] } else { 0.0 };
            xk = p.abs() + q.abs() + r.abs();
            if xk != 0.0 {
                p /= xk;
                q /= xk;
                r /= xk;
            }
        }
        let s = (p * p + q * q + r * r).sqrt().copysign(p);
        if s == 0.0 {
            continue;
        }
        if k == m {
            if l != m {
                a[k][k - 1] = -a[k][k - 1];
            }
        } else {
            a[k][k - 1] = -s * xk;
        }
        p += s;
        let xx = p / s;
        let yy = q / s;
        let zz = r / s;
        q /= p;
        r /= p;
        for j in k..=nn {
            let mut pp = a[k][j] + q * a[k + 1][j];
            if k + 1 != nn {
                pp += r * a[k + 2][j];
                a[k + 2][j] -= pp * zz;
            }
            a[k + 1][j] -= pp * yy;
            a[k][j] -= pp * xx;
        }
        let mmin = nn.min(k + 3);
        for row in a.iter_mut().take(mmin + 1).skip(l) {
            let mut pp = xx * row[k] + yy * row[k + 1];
            if k + 1 != nn {
                pp += zz * row[k + 2];
                row[k + 2] -= pp * r;
            }
            row[k + 1] -= pp * q;
            row[k] -= pp;
        }
    }
}

/// Null vector of `matrix - lambda I` by inverse iteration with a partially
/// pivoted LU factorization.
pub fn inverse_iteration(matrix: &[Vec<f64>], lambda: Complex64) -> Vec<Complex64> {
    let n = matrix.len();
    if n == 0 {
        return Vec::new();
    }
    let norm = matrix
        .iter()
        .map(|row| row.iter().map(|v| v.abs()).sum::<f64>())
        .fold(lambda.norm(), f64::max)
        .max(1.0);
    let tiny = f64::EPSILON * norm;

    let mut lu: Vec<Vec<Complex64>> = matrix
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(|(j, &v)| {
                    Complex64::new(v, 0.0)
                        - if i == j {
                            lambda
                        } else {
                            Complex64::new(0.0, 0.0)
                        }
                })
                .collect()
        })
        .collect();
    let mut perm: Vec<usize> = (0..n).collect();
    for k in 0..n {
        let pivot_row = (k..n)
            .max_by(|&i, &j| lu[i][k].norm().total_cmp(&lu[j][k].norm()))
            .unwrap_or(k);
        lu.swap(k, pivot_row);
        perm.swap(k, pivot_row);
        if lu[k][k].norm() < tiny {
            lu[k][k] = Complex64::new(tiny, 0.0);
        }
        for i in k + 1..n {
            let factor = lu[i][k] / lu[k][k];
            lu[i][k] = factor;
            for j in k + 1..n {
                let u = lu[k][j];
                lu[i][j] -= factor * u;
            }
        }
    }

    let solve = |b: &[Complex64]| -> Vec<Complex64> {
        let mut y: Vec<Complex64> = perm.iter().map(|&i| b[i]).collect();
        for i in 0..n {
            for j in 0..i {
                let l = lu[i][j];
                y[i] = y[i] - l * y[j];
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                let u = lu[i][j];
                y[i] = y[i] - u * y[j];
            }
            y[i] /= lu[i][i];
        }
        y
    };

    // start from a vector unlikely to be orthogonal to the eigenvector
    let mut v: Vec<Complex64> = (0..n)
        .map(|i| Complex64::new(1.0 + 0.1 * i as f64, 0.0))
        .collect();
    for _ in 0..3 {
        v = solve(&v);
        let scale = v.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if scale == 0.0 || !scale.is_finite() {
            break;
        }
        v.iter_mut().for_each(|c| *c /= scale);
    }
    v
}

/// Real roots of the characteristic polynomial of a tridiagonal matrix.
///
/// The determinant recurrence `p_k(λ) = (d_k - λ) p_{k-1} - sub_{k-1} sup_{k-1} p_{k-2}`
/// is scanned on a fine grid over the Gershgorin interval and every sign
/// change is refined by bisection. Intended as an independent check on the
/// QR and Sturm paths for small matrices.
pub fn characteristic_roots(diag: &[f64], sub: &[f64], sup: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    let charpoly = |lambda: f64| -> f64 {
        let (mut prev, mut cur) = (1.0, diag[0] - lambda);
        for k in 1..n {
            let next = (diag[k] - lambda) * cur - sub[k - 1] * sup[k - 1] * prev;
            prev = cur;
            cur = next;
        }
        cur
    };
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for i in 0..n {
        // row sums of |entries| off the diagonal
        let left = if i > 0 { sub[i - 1].abs() } else { 0.0 };
        let right = if i + 1 < n { sup[i].abs() } else { 0.0 };
        lo = lo.min(diag[i] - left - right);
        hi = hi.max(diag[i] + left + right);
    }
    let pad = 1e-3 * (hi - lo).max(1.0);
    lo -= pad;
    hi += pad;

    let steps = 4000 * n;
    let h = (hi - lo) / steps as f64;
    let mut roots = Vec::new();
    let mut x0 = lo;
    let mut f0 = charpoly(x0);
    for i in 1..=steps {
        let x1 = lo + h * i as f64;
        let f1 = charpoly(x1);
        if f1 == 0.0 {
            roots.push(x1);
        } else if f0 != 0.0 && f0.signum() != f1.signum() {
            let (mut a, mut b, mut fa) = (x0, x1, f0);
            for _ in 0..200 {
                let mid = 0.5 * (a + b);
                if mid <= a || mid >= b {
                    break;
                }
                let fm = charpoly(mid);
                if fm == 0.0 {
                    a = mid;
                    b = mid;
                    break;
                }
                if fm.signum() == fa.signum() {
                    a = mid;
                    fa = fm;
                } else {
                    b = mid;
                }
            }
            roots.push(0.5 * (a + b));
        }
        x0 = x1;
        f0 = f1;
    }
    if roots.len() < n {
        return Err(Error::ComplexRootsDetected {
            real_roots: roots.len(),
            dimension: n,
        });
    }
    Ok(roots)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sturm_bisection_small() {
        let ev = symmetric_tridiagonal_eigenvalues(&[2.0, 2.0, 2.0], &[-1.0, -1.0]);
        let s = 2f64.sqrt();
        let expected = [2.0 - s, 2.0, 2.0 + s];
        for (a, b) in ev.iter().zip(expected) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn qr_finds_complex_pair() {
        // rotation-like block: eigenvalues ±i
        let ev = hessenberg_eigenvalues(vec![vec![0.0, -1.0], vec![1.0, 0.0]]).unwrap();
        let mut ims: Vec<f64> = ev.iter().map(|c| c.im).collect();
        ims.sort_by(f64::total_cmp);
        assert!((ims[0] + 1.0).abs() < 1e-14 && (ims[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn qr_on_larger_nonsymmetric_tridiagonal() {
        // tridiagonal with positive off-diagonal products: real spectrum,
        // compare with Sturm bisection of its symmetrization
        let n = 12;
        let diag: Vec<f64> = (0..n).map(|i| (i as f64 * 0.7).sin() * 3.0).collect();
        let sub: Vec<f64> = (0..n - 1).map(|i| 1.0 + 0.1 * i as f64).collect();
        let sup: Vec<f64> = (0..n - 1).map(|i| 0.5 + 0.05 * (i * i) as f64).collect();
        let mut dense = vec![vec![0.0; n]; n];
        for i in 0..n {
            dense[i][i] = diag[i];
            if i + 1 < n {
                dense[i + 1][i] = sub[i];
                dense[i][i + 1] = sup[i];
            }
        }
        let mut qr: Vec<f64> = hessenberg_eigenvalues(dense)
            .unwrap()
            .iter()
            .map(|c| c.re)
            .collect();
        qr.sort_by(f64::total_cmp);
        let off: Vec<f64> = sub.iter().zip(&sup).map(|(a, b)| (a * b).sqrt()).collect();
        let sturm = symmetric_tridiagonal_eigenvalues(&diag, &off);
        for (a, b) in qr.iter().zip(&sturm) {
            assert!((a - b).abs() < 1e-11, "{a} vs {b}");
        }
    }

    #[test]
    fn oracle_trivial_cases() {
        let r = characteristic_roots(&[0.0, 0.0], &[0.5], &[2.0]).unwrap();
        assert!((r[0] + 1.0).abs() < 1e-13 && (r[1] - 1.0).abs() < 1e-13);
        assert_eq!(characteristic_roots(&[3.5], &[], &[]).unwrap(), vec![3.5]);
        assert!(matches!(
            characteristic_roots(&[0.0, 0.0], &[-0.5], &[2.0]),
            Err(Error::ComplexRootsDetected {
                real_roots: 0,
                dimension: 2
            })
        ));
    }

    #[test]
    fn inverse_iteration_recovers_eigenvector() {
        let m = vec![vec![0.0, 2.0], vec![0.5, 0.0]];
        let v = inverse_iteration(&m, Complex64::new(1.0, 0.0));
        // eigenvector of λ = 1 is (2, 1)
        let ratio = v[0] / v[1];
        assert!((ratio.re - 2.0).abs() < 1e-12 && ratio.im.abs() < 1e-12);
    }
}
