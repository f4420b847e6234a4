//! Floating-point eigen machinery.
//!
//! Eigenvalues of a Cartan matrix are `λ_k = 2 − 2cos(kπ/h) = 4sin²(kπ/2h)`
//! for `k` in the exponents. Equality of eigenvectors is always projective
//! (collinearity up to a complex scalar), see [`projective_distance`].

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gabrielov::{self, Factorization, WeylWord};
use crate::lattice::bipartite_coxeter;
use crate::matrix::{kron_vec, IntMatrix};
use crate::rootsys::{bipartition, cartan_matrix, exponents, Color, Coloring, RootSystemId};

pub type C64 = Complex64;

/// Jacobi stopping threshold on the off-diagonal Frobenius norm.
pub const JACOBI_TOL: f64 = 1e-13;
pub const JACOBI_MAX_SWEEPS: usize = 100;
/// Acceptance tolerance for single-step identities.
pub const IDENTITY_TOL: f64 = 1e-9;
/// Tolerance for Coxeter-side residuals.
pub const COXETER_TOL: f64 = 1e-8;
/// Tolerance for comparisons after several composed steps.
pub const PIPELINE_TOL: f64 = 1e-7;

/// Eigen-decomposition of a real symmetric matrix, values ascending,
/// eigenvectors in the columns of `vectors`.
#[derive(Clone, Debug)]
pub struct SymEigen {
    pub values: Vec<f64>,
    pub vectors: DMatrix<f64>,
    pub sweeps: usize,
}

impl SymEigen {
    pub fn vector(&self, i: usize) -> Vec<f64> {
        self.vectors.column(i).iter().copied().collect()
    }
}

fn off_norm(a: &DMatrix<f64>) -> f64 {
    let n = a.nrows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)] * a[(i, j)];
            }
        }
    }
    s.sqrt()
}

/// Cyclic Jacobi diagonalization.
pub fn eig_sym(a: &DMatrix<f64>) -> Result<SymEigen> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(Error::Dimension(format!("{}x{} matrix is not square", n, a.ncols())));
    }
    let scale = a.iter().fold(1.0_f64, |m, x| m.max(x.abs()));
    for i in 0..n {
        for j in i + 1..n {
            if (a[(i, j)] - a[(j, i)]).abs() > 1e-12 * scale {
                return Err(Error::Domain(format!("matrix is not symmetric at ({}, {})", i + 1, j + 1)));
            }
        }
    }
    let mut m = a.clone();
    let mut v = DMatrix::<f64>::identity(n, n);
    let mut sweeps = 0;
    while off_norm(&m) >= JACOBI_TOL * scale {
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::NoConvergence(format!("Jacobi after {JACOBI_MAX_SWEEPS} sweeps")));
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let tau = (m[(q, q)] - m[(p, p)]) / (2.0 * apq);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let t = if tau == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[(k, p)];
                    let mkq = m[(k, q)];
                    m[(k, p)] = c * mkp - s * mkq;
                    m[(k, q)] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[(p, k)];
                    let mqk = m[(q, k)];
                    m[(p, k)] = c * mpk - s * mqk;
                    m[(q, k)] = s * mpk + c * mqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].total_cmp(&m[(j, j)]));
    let values = order.iter().map(|&i| m[(i, i)]).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok(SymEigen { values, vectors, sweeps })
}

pub const SCHUR_MAX_ITER: usize = 10_000;
/// Francis iterations allowed per eigenvalue in the fallback.
pub const HQR_MAX_ITS: usize = 60;

/// Eigenvalues of a general real matrix. Uses nalgebra's Schur form and
/// falls back to [`hqr`] on a Hessenberg reduction when that stalls, which
/// it does on some defective integer matrices.
pub fn general_eigenvalues(m: &DMatrix<f64>) -> Result<Vec<C64>> {
    let n = m.nrows();
    if n != m.ncols() {
        return Err(Error::Dimension(format!("{}x{} is not square", n, m.ncols())));
    }
    if let Some(s) = nalgebra::Schur::try_new(m.clone(), f64::EPSILON, SCHUR_MAX_ITER) {
        return Ok(s.complex_eigenvalues().iter().copied().collect());
    }
    hqr(m.clone().hessenberg().h())
        .ok_or_else(|| Error::NoConvergence(format!("Francis QR on a {n}x{n} matrix")))
}

/// Francis double-shift QR on an upper Hessenberg matrix, with the
/// exceptional shifts at iterations 10 and 20 that break cycling on
/// defective inputs.
pub fn hqr(mut a: DMatrix<f64>) -> Option<Vec<C64>> {
    let n = a.nrows();
    let mut w = vec![C64::new(0.0, 0.0); n];
    let mut anorm = 0.0;
    for i in 0..n {
        for j in i.saturating_sub(1)..n {
            anorm += a[(i, j)].abs();
        }
    }
    let sign = |a: f64, b: f64| if b >= 0.0 { a.abs() } else { -a.abs() };
    let mut nn = n as isize - 1;
    let mut t = 0.0;
    while nn >= 0 {
        let mut its = 0;
        loop {
            let nu = nn as usize;
            let mut l = nu;
            while l > 0 {
                let mut s = a[(l - 1, l - 1)].abs() + a[(l, l)].abs();
                if s == 0.0 {
                    s = anorm;
                }
                if a[(l, l - 1)].abs() <= f64::EPSILON * s {
                    a[(l, l - 1)] = 0.0;
                    break;
                }
                l -= 1;
            }
            let mut x = a[(nu, nu)];
            if l == nu {
                w[nu] = C64::new(x + t, 0.0);
                nn -= 1;
                break;
            }
            let mut y = a[(nu - 1, nu - 1)];
            let mut ww = a[(nu, nu - 1)] * a[(nu - 1, nu)];
            if l == nu - 1 {
                let p = 0.5 * (y - x);
                let q = p * p + ww;
                let z = q.abs().sqrt();
                x += t;
                if q >= 0.0 {
                    let z = p + sign(z, p);
                    w[nu - 1] = C64::new(x + z, 0.0);
                    w[nu] = C64::new(if z != 0.0 { x - ww / z } else { x + z }, 0.0);
                } else {
                    w[nu] = C64::new(x + p, -z);
                    w[nu - 1] = C64::new(x + p, z);
                }
                nn -= 2;
                break;
            }
            if its == HQR_MAX_ITS {
                return None;
            }
            if its == 10 || its == 20 {
                t += x;
                for i in 0..=nu {
                    a[(i, i)] -= x;
                }
                let s = a[(nu, nu - 1)].abs() + a[(nu - 1, nu - 2)].abs();
                x = 0.75 * s;
                y = x;
                ww = -0.4375 * s * s;
            }
            its += 1;
            let (mut p, mut q, mut r, mut z);
            let mut m = nu - 2;
            loop {
                z = a[(m, m)];
                r = x - z;
                let s = y - z;
                p = (r * s - ww) / a[(m + 1, m)] + a[(m, m + 1)];
                q = a[(m + 1, m + 1)] - z - r - s;
                r = a[(m + 2, m + 1)];
                let s = p.abs() + q.abs() + r.abs();
                p /= s;
                q /= s;
                r /= s;
                if m == l {
                    break;
                }
                let u = a[(m, m - 1)].abs() * (q.abs() + r.abs());
                let v = p.abs() * (a[(m - 1, m - 1)].abs() + z.abs() + a[(m + 1, m + 1)].abs());
                if u <= f64::EPSILON * v {
                    break;
                }
                m -= 1;
            }
            for i in m..nu - 1 {
                a[(i + 2, i)] = 0.0;
                if i != m {
                    a[(i + 2, i - 1)] = 0.0;
                }
            }
            for k in m..nu {
                if k != m {
                    p = a[(k, k - 1)];
                    q = a[(k + 1, k - 1)];
                    r = if k + 1 != nu { a[(k + 2, k - 1)] } else { 0.0 };
                    x = p.abs() + q.abs() + r.abs();
                    if x != 0.0 {
                        p /= x;
                        q /= x;
                        r /= x;
                    }
                }
                let s = sign((p * p + q * q + r * r).sqrt(), p);
                if s == 0.0 {
                    continue;
                }
                if k == m {
                    if l != m {
                        a[(k, k - 1)] = -a[(k, k - 1)];
                    }
                } else {
                    a[(k, k - 1)] = -s * x;
                }
                p += s;
                x = p / s;
                y = q / s;
                z = r / s;
                q /= p;
                r /= p;
                for j in k..=nu {
                    let mut pp = a[(k, j)] + q * a[(k + 1, j)];
                    if k + 1 != nu {
                        pp += r * a[(k + 2, j)];
                        a[(k + 2, j)] -= pp * z;
                    }
                    a[(k + 1, j)] -= pp * y;
                    a[(k, j)] -= pp * x;
                }
                let mmin = nu.min(k + 3);
                for i in l..=mmin {
                    let mut pp = x * a[(i, k)] + y * a[(i, k + 1)];
                    if k + 1 != nu {
                        pp += z * a[(i, k + 2)];
                        a[(i, k + 2)] -= pp * r;
                    }
                    a[(i, k + 1)] -= pp * q;
                    a[(i, k)] -= pp;
                }
            }
        }
    }
    Some(w)
}

/// Unit vector spanning the (numerical) kernel of `m`: the right singular
/// vector of the smallest singular value.
pub fn null_vector(m: &DMatrix<C64>) -> Vec<C64> {
    let svd = match m.clone().try_svd(false, true, f64::EPSILON, SCHUR_MAX_ITER) {
        Some(svd) => svd,
        None => return null_vector_inverse_iteration(m),
    };
    let vt = svd.v_t.expect("requested V^t");
    let (imin, _) = svd
        .singular_values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("nonempty matrix");
    vt.row(imin).iter().map(|z| z.conj()).collect()
}

/// Fallback for [`null_vector`]: inverse iteration on `m + δI`.
fn null_vector_inverse_iteration(m: &DMatrix<C64>) -> Vec<C64> {
    let n = m.nrows();
    let scale = m.iter().fold(1.0_f64, |a, z| a.max(z.norm()));
    let shifted = m + DMatrix::<C64>::identity(n, n) * C64::new(scale * 1e-10, 0.0);
    let lu = shifted.lu();
    let mut v = nalgebra::DVector::from_fn(n, |i, _| C64::new(1.0 + i as f64 * 0.1, 0.0));
    for _ in 0..3 {
        if let Some(next) = lu.solve(&v) {
            v = next.normalize();
        }
    }
    v.iter().copied().collect()
}

/// Greedy matching distance between two multisets of complex numbers:
/// the largest gap between an element of `expected` and its nearest
/// not-yet-used partner in `actual`. Infinite when sizes differ.
pub fn multiset_distance(expected: &[C64], actual: &[C64]) -> f64 {
    if expected.len() != actual.len() {
        return f64::INFINITY;
    }
    let mut used = vec![false; actual.len()];
    let mut worst: f64 = 0.0;
    for e in expected {
        let (j, d) = actual
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, a)| (j, (a - e).norm()))
            .min_by(|x, y| x.1.total_cmp(&y.1))
            .expect("sizes match");
        used[j] = true;
        worst = worst.max(d);
    }
    worst
}

pub fn to_complex(v: &[f64]) -> Vec<C64> {
    v.iter().map(|&x| C64::new(x, 0.0)).collect()
}

pub fn mat_vec(a: &DMatrix<f64>, v: &[C64]) -> Vec<C64> {
    (0..a.nrows())
        .map(|i| (0..a.ncols()).map(|j| v[j] * a[(i, j)]).sum())
        .collect()
}

pub fn int_mat_vec(a: &IntMatrix, v: &[C64]) -> Vec<C64> {
    (0..a.n())
        .map(|i| a.row(i).iter().zip(v).map(|(&x, y)| y * x as f64).sum())
        .collect()
}

fn max_norm(v: &[C64]) -> f64 {
    v.iter().fold(0.0, |m, z| m.max(z.norm()))
}

/// `‖Mv − λv‖∞ / ‖v‖∞`.
pub fn residual(m: &DMatrix<f64>, v: &[C64], lambda: C64) -> f64 {
    let mv = mat_vec(m, v);
    let r = mv.iter().zip(v).fold(0.0_f64, |acc, (a, b)| acc.max((a - lambda * b).norm()));
    r / max_norm(v)
}

pub fn int_residual(m: &IntMatrix, v: &[C64], lambda: C64) -> f64 {
    residual(&m.to_dmatrix(), v, lambda)
}

/// Scales so that the first coordinate of largest modulus becomes `+1`.
pub fn normalize(v: &[C64]) -> Vec<C64> {
    let big = max_norm(v);
    match v.iter().find(|z| z.norm() >= big * (1.0 - 1e-12)) {
        Some(&pivot) if big > 0.0 => v.iter().map(|z| z / pivot).collect(),
        _ => v.to_vec(),
    }
}

/// Sine of the angle between the complex lines spanned by `u` and `v`,
/// computed as the norm of the part of `v̂` orthogonal to `û`. Zero iff
/// they are proportional.
pub fn projective_distance(u: &[C64], v: &[C64]) -> f64 {
    let nu = u.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let nv = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if nu == 0.0 || nv == 0.0 || u.len() != v.len() {
        return 1.0;
    }
    let uh: Vec<C64> = u.iter().map(|z| z / nu).collect();
    let vh: Vec<C64> = v.iter().map(|z| z / nv).collect();
    let c: C64 = uh.iter().zip(&vh).map(|(a, b)| a.conj() * b).sum();
    uh.iter()
        .zip(&vh)
        .map(|(a, b)| (b - c * a).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// One eigenpair of a Cartan matrix `A`, with `λ = 2 − 2cos(kπ/h)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Eigenpair {
    pub k: u32,
    pub h: u32,
    pub lambda: f64,
    pub vector: Vec<C64>,
    pub residual: f64,
}

/// Eigenpairs sorted by `lambda` ascending.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Spectrum {
    pub pairs: Vec<Eigenpair>,
}

impl Spectrum {
    pub fn lambdas(&self) -> Vec<f64> {
        self.pairs.iter().map(|p| p.lambda).collect()
    }

    pub fn max_residual(&self) -> f64 {
        self.pairs.iter().fold(0.0, |m, p| m.max(p.residual))
    }
}

/// `2 − 2cos(kπ/h)`.
pub fn cartan_eigenvalue(k: u32, h: u32) -> f64 {
    2.0 - 2.0 * (k as f64 * PI / h as f64).cos()
}

/// Exponent label of an eigenvalue: the `k` with `2 − 2cos(kπ/h)` nearest.
pub fn exponent_of(lambda: f64, h: u32) -> u32 {
    let c = (1.0 - lambda / 2.0).clamp(-1.0, 1.0);
    (c.acos() * h as f64 / PI).round() as u32
}

/// Numeric spectrum of a catalog Cartan matrix via [`eig_sym`].
pub fn cartan_spectrum(id: RootSystemId) -> Result<Spectrum> {
    let a = cartan_matrix(id);
    let (h, exps) = exponents(id);
    let eig = eig_sym(&a.to_dmatrix())?;
    let ad = a.to_dmatrix();
    let pairs = eig
        .values
        .iter()
        .zip(exps)
        .enumerate()
        .map(|(i, (&lambda, k))| {
            let v = normalize(&to_complex(&eig.vector(i)));
            let residual = residual(&ad, &v, C64::new(lambda, 0.0));
            Eigenpair { k, h, lambda, vector: v, residual }
        })
        .collect();
    Ok(Spectrum { pairs })
}

/// Block matrices `L = [[I, 0], [Y, I]]`, `U = [[I, X], [0, I]]` with
/// `X: p × (r−p)` and `Y: (r−p) × p`.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockForm {
    pub x: DMatrix<f64>,
    pub y: DMatrix<f64>,
}

impl BlockForm {
    pub fn new(x: DMatrix<f64>, y: DMatrix<f64>) -> Result<Self> {
        if x.nrows() != y.ncols() || x.ncols() != y.nrows() {
            return Err(Error::Dimension(format!(
                "X is {}x{}, Y is {}x{}",
                x.nrows(),
                x.ncols(),
                y.nrows(),
                y.ncols()
            )));
        }
        Ok(BlockForm { x, y })
    }

    /// Reads the blocks of a matrix with `2` on the diagonal whose first `p`
    /// and last `r − p` indices are each pairwise orthogonal.
    pub fn from_cartan(a: &DMatrix<f64>, p: usize) -> Result<Self> {
        let r = a.nrows();
        if p > r {
            return Err(Error::Dimension(format!("split {p} exceeds rank {r}")));
        }
        Self::new(a.view((0, p), (p, r - p)).into_owned(), a.view((p, 0), (r - p, p)).into_owned())
    }

    pub fn p(&self) -> usize {
        self.x.nrows()
    }

    pub fn rank(&self) -> usize {
        self.x.nrows() + self.x.ncols()
    }

    /// `A = L + U = [[2I, X], [Y, 2I]]`.
    pub fn a(&self) -> DMatrix<f64> {
        let (p, r) = (self.p(), self.rank());
        let mut a = DMatrix::<f64>::identity(r, r) * 2.0;
        a.view_mut((0, p), (p, r - p)).copy_from(&self.x);
        a.view_mut((p, 0), (r - p, p)).copy_from(&self.y);
        a
    }

    /// `C = −U⁻¹L = [[XY − I, X], [−Y, −I]]`.
    pub fn coxeter(&self) -> DMatrix<f64> {
        let (p, r) = (self.p(), self.rank());
        let mut c = DMatrix::<f64>::zeros(r, r);
        let xy = &self.x * &self.y - DMatrix::<f64>::identity(p, p);
        c.view_mut((0, 0), (p, p)).copy_from(&xy);
        c.view_mut((0, p), (p, r - p)).copy_from(&self.x);
        c.view_mut((p, 0), (r - p, p)).copy_from(&(-&self.y));
        c.view_mut((p, p), (r - p, r - p)).copy_from(&(-DMatrix::<f64>::identity(r - p, r - p)));
        c
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    /// Argument in `(−π/2, π/2]`.
    Principal,
    Negated,
}

/// Result of moving an eigenvector from the Coxeter side to the Cartan side.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Transfer {
    pub vector: Vec<C64>,
    pub root: C64,
    pub lambda: C64,
}

/// `λ = 2 − s − 1/s`.
pub fn lambda_of_root(root: C64) -> C64 {
    C64::new(2.0, 0.0) - root - root.inv()
}

pub fn sqrt_branch(mu: C64, branch: Branch) -> C64 {
    let s = mu.sqrt();
    match branch {
        Branch::Principal => s,
        Branch::Negated => -s,
    }
}

/// `(v1; v2) ↦ (v1; s·v2)` with `s = √μ` on the principal branch.
pub fn cartan_coxeter_transfer(v1: &[C64], v2: &[C64], mu: C64) -> Result<Transfer> {
    cartan_coxeter_transfer_branch(v1, v2, mu, Branch::Principal)
}

pub fn cartan_coxeter_transfer_branch(v1: &[C64], v2: &[C64], mu: C64, branch: Branch) -> Result<Transfer> {
    if mu == C64::new(0.0, 0.0) {
        return Err(Error::Domain("transfer needs a nonzero eigenvalue".into()));
    }
    transfer_with_root(v1, v2, sqrt_branch(mu, branch))
}

/// Transfer with an explicitly chosen square root `s` of `μ`.
pub fn transfer_with_root(v1: &[C64], v2: &[C64], root: C64) -> Result<Transfer> {
    if root == C64::new(0.0, 0.0) {
        return Err(Error::Domain("transfer needs a nonzero eigenvalue".into()));
    }
    let vector = v1.iter().copied().chain(v2.iter().map(|z| z * root)).collect();
    Ok(Transfer { vector, root, lambda: lambda_of_root(root) })
}

/// Inverse transfer `(x1; x2) ↦ (x1; x2/s)`.
pub fn coxeter_from_cartan_transfer(x1: &[C64], x2: &[C64], root: C64) -> Result<Vec<C64>> {
    if root == C64::new(0.0, 0.0) {
        return Err(Error::Domain("transfer needs a nonzero eigenvalue".into()));
    }
    Ok(x1.iter().copied().chain(x2.iter().map(|z| z / root)).collect())
}

/// Splits a vector into the coordinates of colour `first` followed by the
/// others, each in ascending vertex order.
pub fn split_by_color(v: &[C64], coloring: &Coloring, first: Color) -> (Vec<C64>, Vec<C64>) {
    let a = coloring.class(first).iter().map(|&i| v[i]).collect();
    let b = (0..v.len()).filter(|&i| coloring.color(i) != first).map(|i| v[i]).collect();
    (a, b)
}

/// Inverse of [`split_by_color`].
pub fn merge_by_color(v1: &[C64], v2: &[C64], coloring: &Coloring, first: Color) -> Vec<C64> {
    let mut out = vec![C64::new(0.0, 0.0); coloring.len()];
    let (mut i1, mut i2) = (v1.iter(), v2.iter());
    for (i, slot) in out.iter_mut().enumerate() {
        let src = if coloring.color(i) == first { &mut i1 } else { &mut i2 };
        *slot = *src.next().expect("block sizes match the coloring");
    }
    out
}

/// From an `A`-eigenvector for `λ = 2 − 2cos θ` to an eigenvector of the
/// bipartite Coxeter element `C_W C_B` for `e^{2iθ}`: white coordinates
/// times `e^{iθ/2}`, black ones times `e^{−iθ/2}`.
pub fn coxeter_eigvec_from_cartan(a: &IntMatrix, x: &[f64], theta: f64, coloring: &Coloring) -> Result<Vec<C64>> {
    let lambda = 2.0 - 2.0 * theta.cos();
    let xc = to_complex(x);
    let r = int_residual(a, &xc, C64::new(lambda, 0.0));
    if !(r <= IDENTITY_TOL) {
        return Err(Error::NotEigenvector { residual: r, tolerance: IDENTITY_TOL });
    }
    let half = C64::from_polar(1.0, theta / 2.0);
    let out: Vec<C64> = xc
        .iter()
        .enumerate()
        .map(|(j, z)| match coloring.color(j) {
            Color::White => z * half,
            Color::Black => z * half.conj(),
        })
        .collect();
    let cbw = bipartite_coxeter(a, coloring)?;
    let rc = int_residual(&cbw, &out, C64::from_polar(1.0, 2.0 * theta));
    if !(rc <= COXETER_TOL) {
        return Err(Error::NotEigenvector { residual: rc, tolerance: COXETER_TOL });
    }
    Ok(out)
}

/// Inverse of [`coxeter_eigvec_from_cartan`] for a `C_W C_B` eigenvector with
/// eigenvalue `e^{2iθ}`. Goes through [`transfer_with_root`] with the white
/// block first and `s = e^{iθ}`, then removes the common phase.
pub fn cartan_eigvec_from_coxeter(xc: &[C64], theta: f64, coloring: &Coloring) -> Result<Vec<C64>> {
    let (w, b) = split_by_color(xc, coloring, Color::White);
    let t = transfer_with_root(&w, &b, C64::from_polar(1.0, theta))?;
    let (w2, b2) = t.vector.split_at(w.len());
    let phase = C64::from_polar(1.0, -theta / 2.0);
    let merged = merge_by_color(w2, b2, coloring, Color::White);
    Ok(merged.iter().map(|z| z * phase).collect())
}

/// `x(θ)_j = Σ_{k=0}^{n−j} e^{i(n−j−2k)θ}`; real, and an `A(A_n)`
/// eigenvector for `2 − 2cos θ` when `θ = kπ/(n+1)`.
pub fn an_eigenvector_at(n: usize, theta: f64) -> Vec<C64> {
    (1..=n)
        .map(|j| {
            let m = n - j;
            (0..=m).map(|k| C64::from_polar(1.0, (m as f64 - 2.0 * k as f64) * theta)).sum()
        })
        .collect()
}

pub fn an_eigenvector(n: usize, k: usize) -> Result<Vec<C64>> {
    if n == 0 || k == 0 || k > n {
        return Err(Error::Domain(format!("A_{n} eigenvector needs 1 <= k <= n, got k = {k}")));
    }
    Ok(an_eigenvector_at(n, k as f64 * PI / (n + 1) as f64))
}

/// `X_C(A_n)_j = Σ_{k=0}^{n−j} e^{2ikθ}`, an eigenvector of `C(A_n)` for
/// `e^{2iθ}` when `θ = kπ/(n+1)`.
pub fn an_coxeter_eigenvector(n: usize, theta: f64) -> Vec<C64> {
    (1..=n)
        .map(|j| (0..=n - j).map(|k| C64::from_polar(1.0, 2.0 * k as f64 * theta)).sum())
        .collect()
}

const DELTA: f64 = PI / 2.0;

fn check_range(name: &str, v: usize, hi: usize) -> Result<()> {
    if v == 0 || v > hi {
        return Err(Error::Domain(format!("{name} must be in 1..={hi}, got {v}")));
    }
    Ok(())
}

/// Angles `(θ, γ)` for E8: `θ = aπ/5`, `γ = bπ/3`.
pub fn e8_angles(a: usize, b: usize) -> Result<(f64, f64)> {
    check_range("a", a, 4)?;
    check_range("b", b, 2)?;
    Ok((a as f64 * PI / 5.0, b as f64 * PI / 3.0))
}

/// Angles `(θ, γ)` for E6: `θ = aπ/4`, `γ = bπ/3`.
pub fn e6_angles(a: usize, b: usize) -> Result<(f64, f64)> {
    check_range("a", a, 3)?;
    check_range("b", b, 2)?;
    Ok((a as f64 * PI / 4.0, b as f64 * PI / 3.0))
}

/// `λ = 2 − 2cos(θ + γ + π/2)`.
pub fn join_lambda(theta: f64, gamma: f64) -> f64 {
    2.0 - 2.0 * (theta + gamma + DELTA).cos()
}

/// Closed-form E8 Cartan eigenvector, expanded form.
pub fn e8_eigenvector(a: usize, b: usize) -> Result<Vec<f64>> {
    let (t, g) = e8_angles(a, b)?;
    let d = DELTA;
    let c = f64::cos;
    Ok(vec![
        c(g + t - d) + c(g - 3.0 * t - d) + c(g - t - d),
        c(2.0 * g + 2.0 * t),
        c(2.0 * g) + c(2.0 * g + 2.0 * t) + c(2.0 * g - 2.0 * t) + c(4.0 * t) + c(2.0 * t),
        c(g + 3.0 * t - d) + c(g + t - d) + c(-g + 3.0 * t - d),
        2.0 * c(2.0 * g)
            + 2.0 * c(2.0 * g + 2.0 * t)
            + c(2.0 * g - 2.0 * t)
            + c(2.0 * g + 4.0 * t)
            + c(4.0 * t)
            + 2.0 * c(2.0 * t)
            + 1.0,
        c(g + 3.0 * t - d) + c(g + t - d),
        c(2.0 * g) + c(2.0 * t - 2.0 * d),
        c(g - t - d),
    ])
}

fn e8_simplified_inner(a: usize, b: usize, fifth_offset: f64) -> Result<Vec<f64>> {
    let (t, g) = e8_angles(a, b)?;
    let d = DELTA;
    let c = f64::cos;
    let inner = [
        2.0 * c(4.0 * t) * c(g - t - d),
        -c(2.0 * g + 2.0 * t),
        2.0 * c(t) * c(t),
        -2.0 * c(g) * c(3.0 * t - d) - c(g + t - d),
        -2.0 * c(2.0 * g + 3.0 * t) * c(t) + c(2.0 * g) + fifth_offset,
        -2.0 * c(t) * c(g + 2.0 * t - d),
        -2.0 * c(g + t - d) * c(g - t + d),
        -c(g - t - d),
    ];
    Ok(inner.iter().map(|x| -x).collect())
}

/// The simplified E8 formula in its reference form. Its fifth coordinate
/// exceeds the expanded form by 1, so it is not an eigenvector.
pub fn e8_eigenvector_simplified_printed(a: usize, b: usize) -> Result<Vec<f64>> {
    e8_simplified_inner(a, b, 0.0)
}

/// The simplified E8 formula with the fifth coordinate corrected; agrees
/// with [`e8_eigenvector`] exactly.
pub fn e8_eigenvector_simplified(a: usize, b: usize) -> Result<Vec<f64>> {
    e8_simplified_inner(a, b, 1.0)
}

/// Closed-form E6 Cartan eigenvector.
pub fn e6_eigenvector(a: usize, b: usize) -> Result<Vec<f64>> {
    let (t, g) = e6_angles(a, b)?;
    let d = DELTA;
    let c = f64::cos;
    Ok(vec![
        c(3.0 * g + 3.0 * t - d),
        2.0 * c(t) * c(t),
        -2.0 * c(3.0 * g + 3.0 * t - d) * c(g + t - d),
        -4.0 * c(t) * c(t) * c(g + t - d),
        1.0 - 2.0 * c(2.0 * g + 3.0 * t) * c(t),
        -2.0 * c(g) * c(t - d),
    ])
}

/// Eigenpairs from the closed forms, sorted by eigenvalue.
pub fn closed_form_spectrum(id: RootSystemId) -> Result<Spectrum> {
    let (h, _) = exponents(id);
    let (amax, f): (usize, fn(usize, usize) -> Result<Vec<f64>>) = match (id.family(), id.rank()) {
        (crate::rootsys::Family::E, 8) => (4, e8_eigenvector),
        (crate::rootsys::Family::E, 6) => (3, e6_eigenvector),
        _ => return Err(Error::Domain(format!("no closed-form eigenvectors for {id}"))),
    };
    let angles = if id.rank() == 8 { e8_angles } else { e6_angles };
    let a = cartan_matrix(id).to_dmatrix();
    let mut pairs = Vec::new();
    for ia in 1..=amax {
        for ib in 1..=2 {
            let (t, g) = angles(ia, ib)?;
            let lambda = join_lambda(t, g);
            let v = normalize(&to_complex(&f(ia, ib)?));
            let residual = residual(&a, &v, C64::new(lambda, 0.0));
            pairs.push(Eigenpair { k: exponent_of(lambda, h), h, lambda, vector: v, residual });
        }
    }
    pairs.sort_by(|x, y| x.lambda.total_cmp(&y.lambda));
    Ok(Spectrum { pairs })
}

/// Coxeter eigenvector built from factor eigenvectors: `x_* = ⊗ X_C(A_{n_i})(θ_i)`
/// pulled back through `G⁻¹` and pushed by the conjugator `w`. The result
/// is an eigenvector of `C_W C_B` for `e^{2i Σθ_i}`; the residual is checked.
pub fn factorized_coxeter_eigenvector_for(f: &Factorization, w: &WeylWord, thetas: &[f64]) -> Result<Vec<C64>> {
    if thetas.len() != f.factors.len() {
        return Err(Error::Dimension(format!("{} angles for {} factors", thetas.len(), f.factors.len())));
    }
    let mut xs = vec![C64::new(1.0, 0.0)];
    for (id, &t) in f.factors.iter().zip(thetas) {
        xs = kron_vec(&xs, &an_coxeter_eigenvector(id.rank(), t));
    }
    let a = cartan_matrix(f.target);
    let ginv = f.g.inverse_unimodular()?;
    let wm = gabrielov::weyl_matrix(&a, w)?;
    let x_bw = int_mat_vec(&wm, &int_mat_vec(&ginv, &xs));
    let cbw = bipartite_coxeter(&a, &bipartition(f.target))?;
    let mu = C64::from_polar(1.0, 2.0 * thetas.iter().sum::<f64>());
    let r = int_residual(&cbw, &x_bw, mu);
    if !(r <= COXETER_TOL) {
        return Err(Error::NotEigenvector { residual: r, tolerance: COXETER_TOL });
    }
    Ok(x_bw)
}

/// E8 instance with `θ = k4·π/5`, `γ = k2·π/3` and the A1 angle `π/2`.
pub fn factorized_coxeter_eigenvector(k4: usize, k2: usize) -> Result<Vec<C64>> {
    let (t, g) = e8_angles(k4, k2)?;
    let f = gabrielov::e8_factorization()?;
    factorized_coxeter_eigenvector_for(&f, &WeylWord(gabrielov::W_E8_PRINTED.to_vec()), &[t, g, DELTA])
}

/// Cartan eigenvector recovered from [`factorized_coxeter_eigenvector`].
pub fn factorized_cartan_eigenvector(k4: usize, k2: usize) -> Result<Vec<C64>> {
    let (t, g) = e8_angles(k4, k2)?;
    let xc = factorized_coxeter_eigenvector(k4, k2)?;
    cartan_eigvec_from_coxeter(&xc, t + g + DELTA, &bipartition(RootSystemId::e(8)))
}

pub const PF_TOL: f64 = 1e-13;
pub const PF_MAX_ITER: usize = 1_000_000;

/// Perron–Frobenius vector of a Cartan matrix: power iteration on `5I − A`,
/// normalized so the smallest component is 1.
pub fn perron_frobenius(a: &IntMatrix) -> Result<Vec<f64>> {
    let n = a.n();
    let shift = 5.0;
    let m = DMatrix::<f64>::identity(n, n) * shift - a.to_dmatrix();
    let mut v = nalgebra::DVector::<f64>::from_element(n, 1.0);
    for _ in 0..PF_MAX_ITER {
        let mut next = &m * &v;
        let top = next.amax();
        if top == 0.0 {
            return Err(Error::Domain("power iteration collapsed to zero".into()));
        }
        next /= top;
        let diff = (&next - &v).amax();
        v = next;
        if diff < PF_TOL {
            let v = polish(&a.to_dmatrix(), v);
            let min = v.iter().copied().fold(f64::INFINITY, f64::min);
            if min <= 0.0 {
                return Err(Error::Domain("dominant vector is not positive; matrix is reducible".into()));
            }
            return Ok(v.iter().map(|x| x / min).collect());
        }
    }
    Err(Error::NoConvergence(format!("power iteration after {PF_MAX_ITER} steps")))
}

/// Two steps of Rayleigh-quotient inverse iteration; the power iteration
/// alone leaves an error of about `PF_TOL / (1 − ratio)`.
fn polish(a: &DMatrix<f64>, mut v: nalgebra::DVector<f64>) -> nalgebra::DVector<f64> {
    let n = a.nrows();
    for _ in 0..2 {
        let rho = v.dot(&(a * &v)) / v.dot(&v);
        let shifted = a - DMatrix::<f64>::identity(n, n) * rho;
        match shifted.lu().solve(&v) {
            Some(y) if y.iter().all(|x| x.is_finite()) && y.amax() > 0.0 => {
                let s = if y.sum() < 0.0 { -y.amax() } else { y.amax() };
                v = y / s;
            }
            _ => break,
        }
    }
    v
}

/// Zamolodchikov's mass vector scaled by `m`.
pub fn zamolodchikov(m: f64) -> [f64; 8] {
    let c5 = (PI / 5.0).cos();
    let c = |x: f64| (x * PI).cos();
    [
        m,
        2.0 * m * c5,
        2.0 * m * c(1.0 / 30.0),
        4.0 * m * c5 * c(7.0 / 30.0),
        4.0 * m * c5 * c(2.0 / 15.0),
        4.0 * m * c5 * c(1.0 / 30.0),
        8.0 * m * c5 * c5 * c(7.0 / 30.0),
        8.0 * m * c5 * c5 * c(2.0 / 15.0),
    ]
}

/// Reference closed form of the E8 Perron–Frobenius vector (Bourbaki order).
pub fn e8_pf_printed() -> [f64; 8] {
    let c = |x: f64| (x * PI).cos();
    [
        2.0 * c(0.2) * c(11.0 / 30.0),
        c(1.0 / 15.0),
        2.0 * c(0.2) * c(0.2),
        2.0 * c(2.0 / 30.0) * c(1.0 / 30.0),
        2.0 * c(4.0 / 15.0) * c(0.2) + 0.5,
        2.0 * c(0.2) * c(7.0 / 30.0),
        2.0 * c(1.0 / 30.0) * c(11.0 / 30.0),
        c(11.0 / 30.0),
    ]
}

pub fn sorted(v: &[f64]) -> Vec<f64> {
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    s
}
