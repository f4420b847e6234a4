//! Polarized lattices, Coxeter automorphisms, the black/white (Steinberg)
//! decomposition and the Sebastiani–Thom join, all in exact integers.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{IntMatrix, RationalMatrix};
use crate::rootsys::{graph_edges, Color, Coloring};

/// Search cap for [`coxeter_order`].
pub const ORDER_CAP: u32 = 1000;

/// A Cartan form `A` together with a Seifert form `L` such that `A = L + Lᵗ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolarizedLattice {
    cartan: IntMatrix,
    seifert: IntMatrix,
}

impl PolarizedLattice {
    /// Polarized lattice with the given Seifert form; `A` is derived.
    pub fn from_seifert(seifert: IntMatrix) -> Result<Self> {
        if seifert.det()? == 0 {
            return Err(Error::Domain("Seifert form is singular over the rationals".into()));
        }
        let cartan = seifert.checked_add(&seifert.transpose())?;
        Ok(PolarizedLattice { cartan, seifert })
    }

    /// Standard polarization: the unique upper-triangular `L` with
    /// `A = L + Lᵗ`.
    pub fn standard(a: &IntMatrix) -> Result<Self> {
        standard_polarization(a)
    }

    pub fn rank(&self) -> usize {
        self.cartan.n()
    }

    pub fn cartan(&self) -> &IntMatrix {
        &self.cartan
    }

    pub fn seifert(&self) -> &IntMatrix {
        &self.seifert
    }

    /// `C = −L⁻¹Lᵗ`.
    pub fn coxeter(&self) -> Result<CoxeterElement> {
        let linv = self.seifert.inverse_rational()?;
        let c = linv.mul_int(&self.seifert.transpose())?.neg()?;
        Ok(CoxeterElement { matrix: c, order: None })
    }

    /// Gauge transform by `M`: `L' = MᵗLM`, `A' = MᵗAM`.
    pub fn gauge(&self, m: &IntMatrix) -> Result<Self> {
        if m.n() != self.rank() {
            return Err(Error::Dimension(format!("gauge matrix is {}x{0}, lattice rank {}", m.n(), self.rank())));
        }
        if m.det()? == 0 {
            return Err(Error::Singular);
        }
        let mt = m.transpose();
        let seifert = mt.checked_mul(&self.seifert)?.checked_mul(m)?;
        let cartan = mt.checked_mul(&self.cartan)?.checked_mul(m)?;
        Ok(PolarizedLattice { cartan, seifert })
    }

    /// Sebastiani–Thom join: `L = L₁ ⊗ L₂` in lexicographic basis order
    /// (first factor major), `A = L + Lᵗ`.
    pub fn join(&self, other: &Self) -> Result<Self> {
        let seifert = self.seifert.kron(&other.seifert)?;
        let cartan = seifert.checked_add(&seifert.transpose())?;
        Ok(PolarizedLattice { cartan, seifert })
    }

    /// Left-associated join of several lattices.
    pub fn join_all(factors: &[PolarizedLattice]) -> Result<Self> {
        let (first, rest) = factors
            .split_first()
            .ok_or_else(|| Error::Domain("join of an empty list".into()))?;
        rest.iter().try_fold(first.clone(), |acc, f| acc.join(f))
    }
}

/// Standard polarization of a symmetric matrix with even diagonal.
pub fn standard_polarization(a: &IntMatrix) -> Result<PolarizedLattice> {
    if !a.is_symmetric() {
        return Err(Error::Domain("standard polarization needs a symmetric matrix".into()));
    }
    let n = a.n();
    if let Some(i) = (0..n).find(|&i| a.get(i, i) % 2 != 0) {
        return Err(Error::Domain(format!("diagonal entry a[{0}][{0}] = {1} is odd", i + 1, a.get(i, i))));
    }
    let mut l = IntMatrix::zeros(n);
    for i in 0..n {
        l.set(i, i, a.get(i, i) / 2);
        for j in i + 1..n {
            l.set(i, j, a.get(i, j));
        }
    }
    PolarizedLattice::from_seifert(l)
}

/// Coxeter automorphism of a polarized lattice. The matrix is rational in
/// general and integral whenever `det L = ±1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoxeterElement {
    matrix: RationalMatrix,
    order: Option<u32>,
}

impl CoxeterElement {
    pub fn from_integral(m: IntMatrix) -> Self {
        CoxeterElement { matrix: RationalMatrix::from_integral(m), order: None }
    }

    pub fn rational(&self) -> &RationalMatrix {
        &self.matrix
    }

    pub fn is_integral(&self) -> bool {
        self.matrix.is_integral()
    }

    /// The integer matrix, when the element is integral.
    pub fn matrix(&self) -> Option<&IntMatrix> {
        self.is_integral().then_some(&self.matrix.numer)
    }

    pub fn order(&self) -> Option<u32> {
        self.order
    }

    /// Computes and stores the order (integral elements only).
    pub fn with_order(mut self) -> Result<Self> {
        let m = self
            .matrix()
            .ok_or_else(|| Error::Domain("order search needs an integral Coxeter element".into()))?;
        self.order = Some(coxeter_order(m)?);
        Ok(self)
    }
}

/// True iff `CᵗAC = A` exactly.
pub fn orthogonality_check(a: &IntMatrix, c: &IntMatrix) -> Result<bool> {
    if a.n() != c.n() {
        return Err(Error::Dimension(format!("form is {}x{0}, operator {}x{1}", a.n(), c.n())));
    }
    Ok(c.transpose().checked_mul(a)?.checked_mul(c)? == *a)
}

/// Smallest `h ≥ 1` with `Cʰ = I`, searching up to [`ORDER_CAP`].
pub fn coxeter_order(c: &IntMatrix) -> Result<u32> {
    coxeter_order_capped(c, ORDER_CAP)
}

pub fn coxeter_order_capped(c: &IntMatrix, cap: u32) -> Result<u32> {
    let id = IntMatrix::identity(c.n());
    let mut p = c.clone();
    for h in 1..=cap {
        if p == id {
            return Ok(h);
        }
        p = p.checked_mul(c)?;
    }
    Err(Error::OrderCapExceeded(cap))
}

/// Simple reflection `s_i` in the simple-root basis: row `i` of the
/// identity replaced by `e_i − A[i,:]`, i.e. `s_i(α_j) = α_j − a_ij α_i`.
/// `i` is 0-based. An involution whenever `a_ii = 2`.
pub fn reflection(a: &IntMatrix, i: usize) -> IntMatrix {
    let n = a.n();
    let mut s = IntMatrix::identity(n);
    for j in 0..n {
        s.set(i, j, s.get(i, j) - a.get(i, j));
    }
    s
}

/// Product `s_{i1} s_{i2} ...` of reflections (0-based indices), leftmost
/// factor leftmost in the matrix product.
pub fn reflection_product(a: &IntMatrix, indices: &[usize]) -> Result<IntMatrix> {
    indices
        .iter()
        .try_fold(IntMatrix::identity(a.n()), |acc, &i| acc.checked_mul(&reflection(a, i)))
}

/// Steinberg's black/white decomposition.
///
/// Returns `(C_B, C_W)`, the products of the reflections in each colour
/// class, in the original vertex order. With black vertices listed first
/// they are `[[−I, −X], [0, I]]` and `[[I, 0], [−Y, −I]]`, and
/// `C_B + C_W = 2I − A`. An empty class contributes the identity.
pub fn steinberg_decomposition(a: &IntMatrix, coloring: &Coloring) -> Result<(IntMatrix, IntMatrix)> {
    let n = a.n();
    if coloring.len() != n {
        return Err(Error::Dimension(format!("coloring has {} vertices, matrix {n}", coloring.len())));
    }
    coloring.check_proper(&graph_edges(a))?;
    let mut cb = IntMatrix::identity(n);
    let mut cw = IntMatrix::identity(n);
    for i in 0..n {
        let target = match coloring.color(i) {
            Color::Black => &mut cb,
            Color::White => &mut cw,
        };
        for j in 0..n {
            target.set(i, j, if i == j { 1 } else { 0 } - a.get(i, j));
        }
    }
    Ok((cb, cw))
}

/// Bipartite Coxeter element `C_W · C_B`: the white reflections stand on
/// the left. For E8 with vertex 1 white this is `s1 s4 s6 s8 s2 s3 s5 s7`.
pub fn bipartite_coxeter(a: &IntMatrix, coloring: &Coloring) -> Result<IntMatrix> {
    let (cb, cw) = steinberg_decomposition(a, coloring)?;
    cw.checked_mul(&cb)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::{bipartition, cartan_matrix, catalog, RootSystemId};

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(rows).unwrap()
    }

    fn std_of(id: RootSystemId) -> PolarizedLattice {
        standard_polarization(&cartan_matrix(id)).unwrap()
    }

    #[test]
    fn a2_polarization_and_coxeter() {
        let p = std_of(RootSystemId::a(2));
        assert_eq!(*p.seifert(), m(&[&[1, -1], &[0, 1]]));
        let c = p.coxeter().unwrap();
        assert_eq!(c.matrix().unwrap(), &m(&[&[0, -1], &[1, -1]]));
        assert_eq!(c.with_order().unwrap().order(), Some(3));
    }

    #[test]
    fn a1_polarization_and_coxeter() {
        let p = std_of(RootSystemId::a(1));
        assert_eq!(*p.seifert(), IntMatrix::diagonal(&[1]));
        let c = p.coxeter().unwrap();
        assert_eq!(c.matrix().unwrap(), &IntMatrix::diagonal(&[-1]));
        assert_eq!(coxeter_order(c.matrix().unwrap()).unwrap(), 2);
    }

    #[test]
    fn a4_coxeter_matches_printed() {
        let c = std_of(RootSystemId::a(4)).coxeter().unwrap();
        let printed = m(&[&[0, 0, 0, -1], &[1, 0, 0, -1], &[0, 1, 0, -1], &[0, 0, 1, -1]]);
        assert_eq!(c.matrix().unwrap(), &printed);
    }

    #[test]
    fn e8_standard_polarization() {
        let a = cartan_matrix(RootSystemId::e(8));
        let p = standard_polarization(&a).unwrap();
        let l = p.seifert();
        for i in 0..8 {
            assert_eq!(l.get(i, i), 1);
            for j in 0..i {
                assert_eq!(l.get(i, j), 0);
            }
        }
        assert_eq!(l.checked_add(&l.transpose()).unwrap(), a);
    }

    #[test]
    fn polarization_rejects_bad_input() {
        assert!(standard_polarization(&m(&[&[2, 1], &[0, 2]])).is_err());
        assert!(standard_polarization(&m(&[&[3, 0], &[0, 2]])).is_err());
    }

    #[test]
    fn singular_seifert_rejected() {
        assert!(PolarizedLattice::from_seifert(m(&[&[1, 1], &[1, 1]])).is_err());
    }

    #[test]
    fn non_unimodular_seifert_gives_rational_coxeter() {
        let p = PolarizedLattice::from_seifert(m(&[&[2, 1], &[0, 1]])).unwrap();
        let c = p.coxeter().unwrap();
        assert!(!c.is_integral());
        assert!(c.matrix().is_none());
        assert_eq!(c.rational().denom, 2);
    }

    #[test]
    fn orthogonality_examples() {
        let a = cartan_matrix(RootSystemId::a(2));
        let c = std_of(RootSystemId::a(2)).coxeter().unwrap();
        assert!(orthogonality_check(&a, c.matrix().unwrap()).unwrap());
        assert!(orthogonality_check(&a, &IntMatrix::identity(2)).unwrap());
        assert!(!orthogonality_check(&a, &m(&[&[1, 1], &[0, 1]])).unwrap());
        assert!(orthogonality_check(&a, &IntMatrix::identity(3)).is_err());
    }

    #[test]
    fn gauge_examples() {
        let p = std_of(RootSystemId::a(2));
        assert_eq!(p.gauge(&IntMatrix::identity(2)).unwrap(), p);
        let d = IntMatrix::diagonal(&[1, -1]);
        let q = p.gauge(&d).unwrap();
        assert_eq!(*q.cartan(), m(&[&[2, 1], &[1, 2]]));
        let c = p.coxeter().unwrap().matrix().unwrap().clone();
        let expected = d.inverse_unimodular().unwrap() * c * d.clone();
        assert_eq!(q.coxeter().unwrap().matrix().unwrap(), &expected);
        assert!(p.gauge(&m(&[&[1, 2], &[2, 4]])).is_err());
    }

    #[test]
    fn join_with_a1_keeps_seifert_and_sign() {
        let p = std_of(RootSystemId::a(3));
        let u = std_of(RootSystemId::a(1));
        let j = p.join(&u).unwrap();
        assert_eq!(j.seifert(), p.seifert());
        let c1 = p.coxeter().unwrap();
        let cj = j.coxeter().unwrap();
        // −C₁ ⊗ (−1) = C₁
        assert_eq!(cj.matrix().unwrap(), c1.matrix().unwrap());
    }

    #[test]
    fn join_coxeter_is_negated_tensor() {
        for (x, y) in [(1, 2), (2, 3), (4, 2), (3, 3)] {
            let p1 = std_of(RootSystemId::a(x));
            let p2 = std_of(RootSystemId::a(y));
            let c1 = p1.coxeter().unwrap().matrix().unwrap().clone();
            let c2 = p2.coxeter().unwrap().matrix().unwrap().clone();
            let cj = p1.join(&p2).unwrap().coxeter().unwrap();
            assert_eq!(cj.matrix().unwrap(), &-c1.kron(&c2).unwrap());
        }
    }

    #[test]
    fn triple_join_order_30() {
        let j = PolarizedLattice::join_all(&[
            std_of(RootSystemId::a(4)),
            std_of(RootSystemId::a(2)),
            std_of(RootSystemId::a(1)),
        ])
        .unwrap();
        assert_eq!(j.rank(), 8);
        let c = j.coxeter().unwrap().with_order().unwrap();
        assert_eq!(c.order(), Some(30));
        assert!(orthogonality_check(j.cartan(), c.matrix().unwrap()).unwrap());
    }

    #[test]
    fn order_cap() {
        let shear = m(&[&[1, 1], &[0, 1]]);
        assert_eq!(coxeter_order_capped(&shear, 50).unwrap_err(), Error::OrderCapExceeded(50));
    }

    #[test]
    fn steinberg_a2() {
        let a = cartan_matrix(RootSystemId::a(2));
        let col = Coloring(vec![Color::Black, Color::White]);
        let (cb, cw) = steinberg_decomposition(&a, &col).unwrap();
        assert_eq!(cb, m(&[&[-1, 1], &[0, 1]]));
        assert_eq!(cw, m(&[&[1, 0], &[1, -1]]));
        assert_eq!(cb.clone() + cw, m(&[&[0, 1], &[1, 0]]));
    }

    #[test]
    fn steinberg_a1_single_class() {
        let a = cartan_matrix(RootSystemId::a(1));
        let col = Coloring(vec![Color::Black]);
        let (cb, cw) = steinberg_decomposition(&a, &col).unwrap();
        assert_eq!(cb, IntMatrix::diagonal(&[-1]));
        assert_eq!(cw, IntMatrix::identity(1));
    }

    #[test]
    fn steinberg_rejects_improper_coloring() {
        let a = cartan_matrix(RootSystemId::a(2));
        let col = Coloring(vec![Color::White, Color::White]);
        assert_eq!(
            steinberg_decomposition(&a, &col).unwrap_err(),
            Error::ImproperColoring(1, 2)
        );
    }

    #[test]
    fn steinberg_classes_are_reflection_products() {
        for id in catalog() {
            let a = cartan_matrix(id);
            let col = bipartition(id);
            let (cb, cw) = steinberg_decomposition(&a, &col).unwrap();
            assert_eq!(cb, reflection_product(&a, &col.class(Color::Black)).unwrap());
            assert_eq!(cw, reflection_product(&a, &col.class(Color::White)).unwrap());
            let two_i_minus_a = IntMatrix::diagonal(&vec![2; a.n()]) - a.clone();
            assert_eq!(cb.clone() + cw.clone(), two_i_minus_a, "{id}");
        }
    }

    #[test]
    fn bipartite_coxeter_e8_word() {
        let id = RootSystemId::e(8);
        let a = cartan_matrix(id);
        let cbw = bipartite_coxeter(&a, &bipartition(id)).unwrap();
        let word: Vec<usize> = [1, 4, 6, 8, 2, 3, 5, 7].iter().map(|i| i - 1).collect();
        assert_eq!(cbw, reflection_product(&a, &word).unwrap());
        assert_eq!(coxeter_order(&cbw).unwrap(), 30);
    }

    #[test]
    fn reflections_are_involutions() {
        let a = cartan_matrix(RootSystemId::e(8));
        for i in 0..8 {
            let s = reflection(&a, i);
            assert!((&s * &s).is_identity());
        }
    }
}
