//! Random block-shaped `A = [[2I, X], [Y, 2I]]` instances shared by the
//! property and acceptance suites.

use cartan_core::spectral::{
    coxeter_from_cartan_transfer, general_eigenvalues, null_vector, projective_distance, residual,
    transfer_with_root, BlockForm, C64,
};
use nalgebra::DMatrix;
use proptest::prelude::*;

pub fn block_instance() -> impl Strategy<Value = BlockForm> {
    (1usize..=5)
        .prop_flat_map(|p| (Just(p), 1usize..=(6 - p)))
        .prop_flat_map(|(p, q)| {
            (
                Just((p, q)),
                prop::collection::vec(-2i64..=2, p * q),
                prop::collection::vec(-2i64..=2, p * q),
            )
        })
        .prop_map(|((p, q), x, y)| {
            let x = DMatrix::from_iterator(p, q, x.into_iter().map(|v| v as f64));
            let y = DMatrix::from_iterator(q, p, y.into_iter().map(|v| v as f64));
            BlockForm::new(x, y).unwrap()
        })
}

/// Largest projective error over all eigenpairs of both round trips
/// `C → A → C` and `A → C → A`.
pub fn round_trip_error(b: &BlockForm) -> f64 {
    let (a, c) = (b.a(), b.coxeter());
    let p = b.p();
    let to_c = |m: &DMatrix<f64>| m.map(|v| C64::new(v, 0.0));
    let mut worst: f64 = 0.0;
    for mu in general_eigenvalues(&c).unwrap() {
        let v = null_vector(&(to_c(&c) - DMatrix::<C64>::identity(c.nrows(), c.nrows()) * mu));
        let s = mu.sqrt();
        let t = transfer_with_root(&v[..p], &v[p..], s).unwrap();
        let back = coxeter_from_cartan_transfer(&t.vector[..p], &t.vector[p..], s).unwrap();
        worst = worst.max(projective_distance(&v, &back));
    }
    for lambda in general_eigenvalues(&a).unwrap() {
        let x = null_vector(&(to_c(&a) - DMatrix::<C64>::identity(a.nrows(), a.nrows()) * lambda));
        // s + 1/s = 2 − λ
        let h = (C64::new(2.0, 0.0) - lambda) / 2.0;
        let s = h + (h * h - 1.0).sqrt();
        if s.norm() < 1e-12 {
            continue;
        }
        let v = coxeter_from_cartan_transfer(&x[..p], &x[p..], s).unwrap();
        let t = transfer_with_root(&v[..p], &v[p..], s).unwrap();
        worst = worst.max(projective_distance(&x, &t.vector));
    }
    worst
}

/// For eigenpairs of `C` that the null-vector solver resolves cleanly,
/// the transferred vector is an eigenvector of `A` for `2 − s − 1/s`.
pub fn transfer_residual(b: &BlockForm) -> Option<f64> {
    let (a, c) = (b.a(), b.coxeter());
    let p = b.p();
    let mut worst: Option<f64> = None;
    for mu in general_eigenvalues(&c).unwrap() {
        let v = null_vector(&(c.map(|v| C64::new(v, 0.0)) - DMatrix::<C64>::identity(c.nrows(), c.nrows()) * mu));
        if residual(&c, &v, mu) > 1e-10 {
            continue;
        }
        let t = transfer_with_root(&v[..p], &v[p..], mu.sqrt()).unwrap();
        let r = residual(&a, &t.vector, t.lambda);
        worst = Some(worst.map_or(r, |w: f64| w.max(r)));
    }
    worst
}
