//! q-deformed Cartan matrices `A(q) = qL + U`.
//!
//! `L` (lower) and `U` (upper) are the unit-triangular parts of `A`. When
//! `Γ(A)` is a tree, `A(q) = D⁻¹ A′(q) D` with `A′(q) = √q·A + (1 − √q)²·I`
//! and `D⁻¹ = diag(q^{k_i/2})`, so every eigenpair `(λ, x)` of `A` gives the
//! eigenpair `(1 + (λ − 2)√q + q, (q^{k_i/2} x_i))` of `A(q)`.

use std::collections::VecDeque;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::rootsys::graph_edges;
use crate::spectral::{self, C64};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QDeformedCartan {
    pub lower: IntMatrix,
    pub upper: IntMatrix,
    /// Integers `k_i`; the vector entries scale by `q^{k_i/2}`.
    pub exponent_vector: Vec<i64>,
}

fn check_q(q: f64) -> Result<()> {
    if !(q > 0.0 && q.is_finite()) {
        return Err(Error::Domain(format!("q must be a positive real, got {q}")));
    }
    Ok(())
}

/// Checks `a_ii = 2`, `a_ij ≠ 0 ⇔ a_ji ≠ 0`, and that `Γ(A)` is a tree.
pub fn check_tree_cartan(a: &IntMatrix) -> Result<()> {
    let n = a.n();
    if n == 0 {
        return Err(Error::Domain("empty matrix".into()));
    }
    for i in 0..n {
        if a.get(i, i) != 2 {
            return Err(Error::Domain(format!("a[{0}][{0}] = {1}, expected 2", i + 1, a.get(i, i))));
        }
        for j in 0..n {
            if (a.get(i, j) == 0) != (a.get(j, i) == 0) {
                return Err(Error::Domain(format!(
                    "zero pattern is not symmetric at ({}, {})",
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    let edges = graph_edges(a);
    if edges.len() != n - 1 {
        return Err(Error::NotATree(format!("{} edges on {n} vertices", edges.len())));
    }
    let reached = bfs_order(a, 0).len();
    if reached != n {
        return Err(Error::NotATree(format!("graph is disconnected ({reached} of {n} vertices reachable)")));
    }
    Ok(())
}

fn neighbours(a: &IntMatrix, i: usize) -> impl Iterator<Item = usize> + '_ {
    (0..a.n()).filter(move |&j| j != i && a.get(i, j) != 0)
}

fn bfs_order(a: &IntMatrix, root: usize) -> Vec<usize> {
    let mut seen = vec![false; a.n()];
    let mut order = Vec::new();
    let mut queue = VecDeque::from([root]);
    seen[root] = true;
    while let Some(i) = queue.pop_front() {
        order.push(i);
        for j in neighbours(a, i) {
            if !seen[j] {
                seen[j] = true;
                queue.push_back(j);
            }
        }
    }
    order
}

/// Exponent vector with the tree rooted at `root` (0-based), unnormalized:
/// `k_root = 0`, and along an edge `i → j`, `k_j = k_i + 1` if `j > i`,
/// else `k_i − 1`.
pub fn exponent_vector_rooted(a: &IntMatrix, root: usize) -> Result<Vec<i64>> {
    check_tree_cartan(a)?;
    if root >= a.n() {
        return Err(Error::Index { index: root + 1, rank: a.n() });
    }
    let n = a.n();
    let mut k: Vec<Option<i64>> = vec![None; n];
    k[root] = Some(0);
    for i in bfs_order(a, root) {
        let ki = k[i].expect("parent visited first");
        for j in neighbours(a, i) {
            if k[j].is_none() {
                k[j] = Some(if j > i { ki + 1 } else { ki - 1 });
            }
        }
    }
    Ok(k.into_iter().map(|x| x.expect("tree is connected")).collect())
}

/// Exponent vector rooted at vertex 1 and shifted so that `min k_i = 0`.
pub fn exponent_vector(a: &IntMatrix) -> Result<Vec<i64>> {
    let k = exponent_vector_rooted(a, 0)?;
    let min = *k.iter().min().expect("nonempty");
    Ok(k.iter().map(|x| x - min).collect())
}

/// Splits `A` into unit-triangular `L + U` and computes the exponent vector.
pub fn deform(a: &IntMatrix) -> Result<QDeformedCartan> {
    let exponent_vector = exponent_vector(a)?;
    let n = a.n();
    let mut lower = IntMatrix::identity(n);
    let mut upper = IntMatrix::identity(n);
    for i in 0..n {
        for j in 0..n {
            if i > j {
                lower.set(i, j, a.get(i, j));
            } else if i < j {
                upper.set(i, j, a.get(i, j));
            }
        }
    }
    Ok(QDeformedCartan { lower, upper, exponent_vector })
}

/// `1 + (λ − 2)√q + q`.
pub fn q_eigenvalue(lambda: f64, q: f64) -> f64 {
    1.0 + (lambda - 2.0) * q.sqrt() + q
}

impl QDeformedCartan {
    pub fn rank(&self) -> usize {
        self.lower.n()
    }

    /// The undeformed matrix `L + U`.
    pub fn cartan(&self) -> IntMatrix {
        &self.lower + &self.upper
    }

    /// `qL + U`.
    pub fn evaluate(&self, q: f64) -> Result<DMatrix<f64>> {
        check_q(q)?;
        Ok(self.lower.to_dmatrix() * q + self.upper.to_dmatrix())
    }

    /// `√q·A + (1 − √q)²·I`.
    pub fn symmetric_form(&self, q: f64) -> Result<DMatrix<f64>> {
        check_q(q)?;
        let n = self.rank();
        let s = q.sqrt();
        Ok(self.cartan().to_dmatrix() * s + DMatrix::<f64>::identity(n, n) * (1.0 - s).powi(2))
    }

    /// `diag(q^{k_i/2})`.
    pub fn scaling(&self, q: f64) -> Result<Vec<f64>> {
        check_q(q)?;
        Ok(self.exponent_vector.iter().map(|&k| q.powf(k as f64 / 2.0)).collect())
    }

    /// `‖D⁻¹ A′(q) D − A(q)‖∞` (entrywise max) with `D⁻¹ = diag(q^{k_i/2})`.
    pub fn conjugation_certificate(&self, q: f64) -> Result<f64> {
        let d = self.scaling(q)?;
        let ap = self.symmetric_form(q)?;
        let aq = self.evaluate(q)?;
        let n = self.rank();
        let mut dev: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                dev = dev.max((d[i] * ap[(i, j)] / d[j] - aq[(i, j)]).abs());
            }
        }
        Ok(dev)
    }

    /// `(q^{k_i/2} x_i)`, after checking that `x` is an `A`-eigenvector for
    /// `λ` and that the result is an `A(q)`-eigenvector for `λ(q)`.
    pub fn q_eigenvector(&self, x: &[f64], lambda: f64, q: f64) -> Result<Vec<f64>> {
        let xc = spectral::to_complex(x);
        let r = spectral::int_residual(&self.cartan(), &xc, C64::new(lambda, 0.0));
        if !(r <= spectral::IDENTITY_TOL) {
            return Err(Error::NotEigenvector { residual: r, tolerance: spectral::IDENTITY_TOL });
        }
        let d = self.scaling(q)?;
        let out: Vec<f64> = x.iter().zip(&d).map(|(a, b)| a * b).collect();
        let rq = spectral::residual(&self.evaluate(q)?, &spectral::to_complex(&out), C64::new(q_eigenvalue(lambda, q), 0.0));
        if !(rq <= spectral::COXETER_TOL) {
            return Err(Error::NotEigenvector { residual: rq, tolerance: spectral::COXETER_TOL });
        }
        Ok(out)
    }

    /// Eigenvalues of `A(q)` through the symmetric `A′(q)` (requires a
    /// symmetric `A`), ascending.
    pub fn q_eigenvalues_symmetric(&self, q: f64) -> Result<Vec<f64>> {
        if !self.cartan().is_symmetric() {
            return Err(Error::Domain("symmetric path needs a symmetric Cartan matrix".into()));
        }
        Ok(spectral::eig_sym(&self.symmetric_form(q)?)?.values)
    }

    /// Eigenvalues of `A(q)` from the general (Schur) solver, sorted by real
    /// then imaginary part.
    pub fn q_eigenvalues_general(&self, q: f64) -> Result<Vec<C64>> {
        let mut ev = spectral::general_eigenvalues(&self.evaluate(q)?)?;
        ev.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        Ok(ev)
    }

    /// Largest gap between the general-solver spectrum of `A(q)` and
    /// `{1 + (λ − 2)√q + q}` over the general-solver spectrum of `A`.
    pub fn spectrum_law_deviation(&self, q: f64) -> Result<f64> {
        let base = spectral::general_eigenvalues(&self.cartan().to_dmatrix())?;
        let s = q.sqrt();
        let expected: Vec<C64> = base.iter().map(|l| C64::new(1.0 + q, 0.0) + (l - 2.0) * s).collect();
        Ok(spectral::multiset_distance(&expected, &self.q_eigenvalues_general(q)?))
    }

    pub fn report(&self, q: f64) -> Result<QReport> {
        let eigenvalues = if self.cartan().is_symmetric() {
            self.q_eigenvalues_symmetric(q)?
        } else {
            self.q_eigenvalues_general(q)?.iter().map(|z| z.re).collect()
        };
        Ok(QReport {
            q,
            eigenvalues,
            exponent_vector: self.exponent_vector.clone(),
            certificate_deviation: self.conjugation_certificate(q)?,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QReport {
    pub q: f64,
    pub eigenvalues: Vec<f64>,
    pub exponent_vector: Vec<i64>,
    pub certificate_deviation: f64,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::{cartan_matrix, catalog, RootSystemId};
    use approx::assert_abs_diff_eq;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn a1_and_a2() {
        let d = deform(&cartan_matrix(RootSystemId::a(1))).unwrap();
        assert_eq!(d.exponent_vector, vec![0]);
        assert_eq!(d.evaluate(3.0).unwrap()[(0, 0)], 4.0);
        let d = deform(&cartan_matrix(RootSystemId::a(2))).unwrap();
        let e = d.evaluate(4.0).unwrap();
        assert_eq!(e, DMatrix::from_row_slice(2, 2, &[5.0, -1.0, -4.0, 5.0]));
        assert!(d.evaluate(0.0).is_err());
        assert!(d.evaluate(-1.0).is_err());
    }

    #[test]
    fn an_tridiagonal() {
        for n in 2..=8 {
            let d = deform(&cartan_matrix(RootSystemId::a(n))).unwrap();
            assert_eq!(d.exponent_vector, (0..n as i64).collect::<Vec<_>>());
            let q = 2.5;
            let e = d.evaluate(q).unwrap();
            for i in 0..n {
                assert_eq!(e[(i, i)], 1.0 + q);
                if i + 1 < n {
                    assert_eq!(e[(i, i + 1)], -1.0);
                    assert_eq!(e[(i + 1, i)], -q);
                }
            }
        }
    }

    #[test]
    fn e8_deformation() {
        let a = cartan_matrix(RootSystemId::e(8));
        let d = deform(&a).unwrap();
        assert_eq!(d.exponent_vector, vec![0, 1, 1, 2, 3, 4, 5, 6]);
        assert_eq!(d.cartan(), a);
        let e = d.evaluate(2.0).unwrap();
        for i in 0..8 {
            for j in 0..8 {
                let want = match (i.cmp(&j), a.get(i, j)) {
                    (std::cmp::Ordering::Equal, _) => 3.0,
                    (_, 0) => 0.0,
                    (std::cmp::Ordering::Less, _) => -1.0,
                    (std::cmp::Ordering::Greater, _) => -2.0,
                };
                assert_eq!(e[(i, j)], want);
            }
        }
    }

    #[test]
    fn evaluate_at_one_is_cartan() {
        for id in catalog() {
            let d = deform(&cartan_matrix(id)).unwrap();
            assert_eq!(d.evaluate(1.0).unwrap(), cartan_matrix(id).to_dmatrix());
        }
    }

    #[test]
    fn rejects_non_trees() {
        let cycle = m(&[&[2, -1, -1], &[-1, 2, -1], &[-1, -1, 2]]);
        assert!(matches!(deform(&cycle), Err(Error::NotATree(_))));
        let forest = IntMatrix::diagonal(&[2, 2]);
        assert!(matches!(deform(&forest), Err(Error::NotATree(_))));
        assert!(deform(&m(&[&[2, -1], &[0, 2]])).is_err());
        assert!(deform(&m(&[&[3, -1], &[-1, 2]])).is_err());
    }

    #[test]
    fn q_eigenvalue_examples() {
        assert_abs_diff_eq!(q_eigenvalue(2.0, 7.0), 8.0);
        assert_abs_diff_eq!(q_eigenvalue(1.3, 1.0), 1.3, epsilon = 1e-15);
        let l = 2.0 - 2.0 * (std::f64::consts::PI / 30.0).cos();
        let want = 3.0 - 2.0 * 2f64.sqrt() * (std::f64::consts::PI / 30.0).cos();
        assert_abs_diff_eq!(q_eigenvalue(l, 2.0), want, epsilon = 1e-14);
        let d = deform(&cartan_matrix(RootSystemId::e(8))).unwrap();
        let ev = d.q_eigenvalues_general(2.0).unwrap();
        assert!(ev.iter().any(|z| (z - want).norm() < 1e-9));
    }

    #[test]
    fn certificates() {
        let d = deform(&cartan_matrix(RootSystemId::a(5))).unwrap();
        assert!(d.conjugation_certificate(3.0).unwrap() < 1e-10);
        assert!(d.conjugation_certificate(1.0).unwrap() == 0.0);
        let d = deform(&cartan_matrix(RootSystemId::e(8))).unwrap();
        for q in [0.5, 2.0, 10.0] {
            assert!(d.conjugation_certificate(q).unwrap() < 1e-10);
        }
    }

    #[test]
    fn e8_q_eigenvectors() {
        let id = RootSystemId::e(8);
        let d = deform(&cartan_matrix(id)).unwrap();
        let s = spectral::cartan_spectrum(id).unwrap();
        for p in &s.pairs {
            let x: Vec<f64> = p.vector.iter().map(|z| z.re).collect();
            assert_eq!(d.q_eigenvector(&x, p.lambda, 1.0).unwrap(), x);
            d.q_eigenvector(&x, p.lambda, 2.0).unwrap();
        }
        assert!(d.q_eigenvector(&[1.0; 8], 0.5, 2.0).is_err());
    }

    #[test]
    fn a2_pf_at_q4() {
        let d = deform(&cartan_matrix(RootSystemId::a(2))).unwrap();
        let x = d.q_eigenvector(&[1.0, 1.0], 1.0, 4.0).unwrap();
        assert_eq!(x, vec![1.0, 2.0]);
        assert_abs_diff_eq!(q_eigenvalue(1.0, 4.0), 3.0);
    }

    #[test]
    fn symmetric_and_general_paths_agree() {
        let d = deform(&cartan_matrix(RootSystemId::d(5))).unwrap();
        let sym = d.q_eigenvalues_symmetric(0.25).unwrap();
        let gen = d.q_eigenvalues_general(0.25).unwrap();
        assert!(spectral::multiset_distance(&spectral::to_complex(&sym), &gen) < 1e-10);
    }

    #[test]
    fn inversion_symmetry() {
        let d = deform(&cartan_matrix(RootSystemId::e(7))).unwrap();
        let q = 3.0;
        let inv = d.q_eigenvalues_general(1.0 / q).unwrap();
        let scaled: Vec<C64> = d.q_eigenvalues_general(q).unwrap().iter().map(|z| z / q).collect();
        assert!(spectral::multiset_distance(&inv, &scaled) < 1e-8);
    }

    #[test]
    fn non_symmetric_tree_cartan() {
        let b2 = m(&[&[2, -2], &[-1, 2]]);
        let d = deform(&b2).unwrap();
        assert!(d.q_eigenvalues_symmetric(2.0).is_err());
        assert!(d.spectrum_law_deviation(2.0).unwrap() < 1e-10);
        assert!(d.conjugation_certificate(2.0).unwrap() < 1e-12);
    }

    #[test]
    fn report_json() {
        let d = deform(&cartan_matrix(RootSystemId::a(3))).unwrap();
        let r = d.report(2.0).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["exponent_vector"], serde_json::json!([0, 1, 2]));
        let back: QReport = serde_json::from_value(v).unwrap();
        assert_eq!(back, r);
    }
}
