//! Eigenvalue moduli of small dense real matrices.
//!
//! Classic pipeline: radix-2 balancing, Householder reduction to upper
//! Hessenberg form, then implicit double-shift QR iteration with deflation
//! (the Jama/EISPACK `hqr` scheme, eigenvalues only). Complex pairs are read
//! off the final 2x2 blocks.

use crate::error::{Error, Result};
use crate::linalg::Mat;

/// Subdiagonal deflation tolerance.
const TOL: f64 = 1e-10;
/// QR sweeps allowed per matrix: 100 * n.
const SWEEPS_PER_STATE: usize = 100;
/// Problem-size guard; everything in this crate is desk-scale.
const MAX_DIM: usize = 256;

/// All `n` eigenvalue moduli of a square matrix, sorted descending.
/// Non-convergence within the sweep cap is an explicit error, never a silent
/// wrong answer.
pub fn eigen_moduli(a: &Mat) -> Result<Vec<f64>> {
    if a.n_rows() != a.n_cols() {
        return Err(Error::invalid("eigen_moduli needs a square matrix"));
    }
    let n = a.n_rows();
    if n == 0 {
        return Err(Error::invalid("empty matrix"));
    }
    if n > MAX_DIM {
        return Err(Error::invalid(format!("matrix dimension {n} exceeds {MAX_DIM}")));
    }
    let mut h: Vec<Vec<f64>> = (0..n).map(|r| a.row(r).to_vec()).collect();
    balance(&mut h);
    hessenberg(&mut h);
    let (d, e) = francis_qr(&mut h, SWEEPS_PER_STATE * n)?;
    let mut moduli: Vec<f64> = d
        .iter()
        .zip(&e)
        .map(|(re, im)| (re * re + im * im).sqrt())
        .collect();
    moduli.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Ok(moduli)
}

/// Diagonal similarity scaling so row and column norms are comparable.
/// Similarity transforms leave the spectrum unchanged.
fn balance(h: &mut [Vec<f64>]) {
    let n = h.len();
    let radix = 2.0f64;
    loop {
        let mut done = true;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += h[j][i].abs();
                    r += h[i][j].abs();
                }
            }
            if c != 0.0 && r != 0.0 {
                let s = c + r;
                let mut f = 1.0;
                let mut g = r / radix;
                while c < g {
                    f *= radix;
                    c *= radix * radix;
                }
                g = r * radix;
                while c >= g {
                    f /= radix;
                    c /= radix * radix;
                }
                if (c + r) / f < 0.95 * s {
                    done = false;
                    let g = 1.0 / f;
                    for j in 0..n {
                        h[i][j] *= g;
                    }
                    for j in 0..n {
                        h[j][i] *= f;
                    }
                }
            }
        }
        if done {
            break;
        }
    }
}

/// Householder similarity reduction to upper Hessenberg form.
fn hessenberg(h: &mut [Vec<f64>]) {
    let n = h.len();
    if n < 3 {
        return;
    }
    let high = n - 1;
    let mut ort = vec![0.0; n];
    for m in 1..high {
        let mut scale = 0.0;
        for i in m..=high {
            scale += h[i][m - 1].abs();
        }
        if scale == 0.0 {
            continue;
        }
        let mut hh = 0.0;
        for i in (m..=high).rev() {
            ort[i] = h[i][m - 1] / scale;
            hh += ort[i] * ort[i];
        }
        let mut g = hh.sqrt();
        if ort[m] > 0.0 {
            g = -g;
        }
        hh -= ort[m] * g;
        ort[m] -= g;

        for j in m..n {
            let mut f = 0.0;
            for i in (m..=high).rev() {
                f += ort[i] * h[i][j];
            }
            f /= hh;
            for i in m..=high {
                h[i][j] -= f * ort[i];
            }
        }
        for i in 0..=high {
            let mut f = 0.0;
            for j in (m..=high).rev() {
                f += ort[j] * h[i][j];
            }
            f /= hh;
            for j in m..=high {
                h[i][j] -= f * ort[j];
            }
        }
        ort[m] *= scale;
        h[m][m - 1] = scale * g;
    }
    // zero out the strictly-lower part below the subdiagonal
    for i in 2..n {
        for j in 0..i - 1 {
            h[i][j] = 0.0;
        }
    }
}

/// Implicit double-shift QR with deflation on a Hessenberg matrix. Returns
/// (real, imag) parts of every eigenvalue.
fn francis_qr(h: &mut [Vec<f64>], max_sweeps: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let nn = h.len();
    let mut d = vec![0.0; nn];
    let mut e = vec![0.0; nn];

    let mut norm = 0.0;
    for i in 0..nn {
        for j in i.saturating_sub(1)..nn {
            norm += h[i][j].abs();
        }
    }
    if norm == 0.0 {
        return Ok((d, e)); // zero matrix
    }

    let mut hi = nn; // active block is 0..hi
    let mut exshift = 0.0;
    let mut iter = 0usize;
    let mut sweeps = 0usize;

    while hi > 0 {
        let n = hi - 1;
        // look for a single small subdiagonal element
        let mut l = n;
        while l > 0 {
            let mut s = h[l - 1][l - 1].abs() + h[l][l].abs();
            if s == 0.0 {
                s = norm;
            }
            if h[l][l - 1].abs() < TOL * s {
                break;
            }
            l -= 1;
        }

        if l == n {
            // one real root
            d[n] = h[n][n] + exshift;
            e[n] = 0.0;
            hi -= 1;
            iter = 0;
        } else if l == n - 1 {
            // a 2x2 block: real pair or complex-conjugate pair
            let w = h[n][n - 1] * h[n - 1][n];
            let pp = (h[n - 1][n - 1] - h[n][n]) / 2.0;
            let qq = pp * pp + w;
            let zz = qq.abs().sqrt();
            let x = h[n][n] + exshift;
            if qq >= 0.0 {
                let zz = if pp >= 0.0 { pp + zz } else { pp - zz };
                d[n - 1] = x + zz;
                d[n] = if zz != 0.0 { x - w / zz } else { d[n - 1] };
                e[n - 1] = 0.0;
                e[n] = 0.0;
            } else {
                d[n - 1] = x + pp;
                d[n] = x + pp;
                e[n - 1] = zz;
                e[n] = -zz;
            }
            hi -= 2;
            iter = 0;
        } else {
            // no convergence yet: one double-shift sweep
            let mut x = h[n][n];
            let mut y = h[n - 1][n - 1];
            let mut w = h[n][n - 1] * h[n - 1][n];
            if iter == 10 || iter == 20 {
                // exceptional shift to break symmetry cycles
                exshift += x;
                for i in 0..=n {
                    h[i][i] -= x;
                }
                let s = h[n][n - 1].abs() + h[n - 1][n - 2].abs();
                x = 0.75 * s;
                y = x;
                w = -0.4375 * s * s;
            }
            iter += 1;
            sweeps += 1;
            if sweeps > max_sweeps {
                return Err(Error::Numerical(format!(
                    "QR iteration failed to converge within {max_sweeps} sweeps"
                )));
            }

            // find two consecutive small subdiagonals
            let (mut p, mut q, mut r): (f64, f64, f64);
            let mut m = n - 2;
            loop {
                let z = h[m][m];
                let rr = x - z;
                let ss = y - z;
                p = (rr * ss - w) / h[m + 1][m] + h[m][m + 1];
                q = h[m + 1][m + 1] - z - rr - ss;
                r = h[m + 2][m + 1];
                let s = p.abs() + q.abs() + r.abs();
                p /= s;
                q /= s;
                r /= s;
                if m == l {
                    break;
                }
                if h[m][m - 1].abs() * (q.abs() + r.abs())
                    < TOL * (p.abs() * (h[m - 1][m - 1].abs() + z.abs() + h[m + 1][m + 1].abs()))
                {
                    break;
                }
                m -= 1;
            }
            for i in m + 2..=n {
                h[i][i - 2] = 0.0;
                if i > m + 2 {
                    h[i][i - 3] = 0.0;
                }
            }

            // double QR sweep over rows l..=n
            for k in m..n {
                let notlast = k != n - 1;
                if k != m {
                    p = h[k][k - 1];
                    q = h[k + 1][k - 1];
                    r = if notlast { h[k + 2][k - 1] } else { 0.0 };
                    x = p.abs() + q.abs() + r.abs();
                    if x == 0.0 {
                        continue;
                    }
                    p /= x;
                    q /= x;
                    r /= x;
                }
                let mut s = (p * p + q * q + r * r).sqrt();
                if p < 0.0 {
                    s = -s;
                }
                if s == 0.0 {
                    continue;
                }
                if k != m {
                    h[k][k - 1] = -s * x;
                } else if l != m {
                    h[k][k - 1] = -h[k][k - 1];
                }
                p += s;
                x = p / s;
                y = q / s;
                let z = r / s;
                q /= p;
                r /= p;

                for j in k..nn {
                    let mut pp = h[k][j] + q * h[k + 1][j];
                    if notlast {
                        pp += r * h[k + 2][j];
                        h[k + 2][j] -= pp * z;
                    }
                    h[k][j] -= pp * x;
                    h[k + 1][j] -= pp * y;
                }
                let upper = n.min(k + 3);
                for i in 0..=upper {
                    let mut pp = x * h[i][k] + y * h[i][k + 1];
                    if notlast {
                        pp += z * h[i][k + 2];
                        h[i][k + 2] -= pp * r;
                    }
                    h[i][k] -= pp;
                    h[i][k + 1] -= pp * q;
                }
            }
        }
    }
    Ok((d, e))
}
