//! Square integer matrices with exact, overflow-checked arithmetic.
//!
//! Every arithmetic method has a `checked_*` form returning [`Error::Overflow`]
//! instead of wrapping. The operator impls (`&a * &b`, `&a + &b`, ...) call the
//! checked forms and panic on overflow, so an identity can never pass because
//! of silent wraparound.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Square integer matrix stored row-major.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct IntMatrix {
    n: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(n: usize) -> Self {
        IntMatrix { n, data: vec![0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn diagonal(diag: &[i64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n);
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * n + i] = d;
        }
        m
    }

    /// Builds a matrix from row-major data of length `n * n`.
    pub fn from_vec(n: usize, data: Vec<i64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::Dimension(format!(
                "expected {} entries for a {n}x{n} matrix, got {}",
                n * n,
                data.len()
            )));
        }
        Ok(IntMatrix { n, data })
    }

    /// Builds a matrix from a slice of rows; every row must have the same
    /// length as the number of rows.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != n {
                return Err(Error::Dimension(format!(
                    "row {i} has length {} in a {n}-row matrix",
                    r.len()
                )));
            }
            data.extend_from_slice(r);
        }
        Ok(IntMatrix { n, data })
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns<C: AsRef<[i64]>>(cols: &[C]) -> Result<Self> {
        Ok(Self::from_rows(cols)?.transpose())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.n + j] = v;
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn column(&self, j: usize) -> Vec<i64> {
        (0..self.n).map(|i| self.get(i, j)).collect()
    }

    pub fn set_row(&mut self, i: usize, row: &[i64]) {
        self.data[i * self.n..(i + 1) * self.n].copy_from_slice(row);
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let mut t = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                t.data[j * n + i] = self.data[i * n + j];
            }
        }
        t
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.n)
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::Dimension(format!("{}x{0} vs {}x{1}", self.n, other.n)));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.checked_add(*b).ok_or(Error::Overflow))
            .collect::<Result<_>>()?;
        Ok(IntMatrix { n: self.n, data })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.checked_sub(*b).ok_or(Error::Overflow))
            .collect::<Result<_>>()?;
        Ok(IntMatrix { n: self.n, data })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    let p = a.checked_mul(other.data[k * n + j]).ok_or(Error::Overflow)?;
                    let e = &mut out.data[i * n + j];
                    *e = e.checked_add(p).ok_or(Error::Overflow)?;
                }
            }
        }
        Ok(out)
    }

    pub fn checked_scale(&self, s: i64) -> Result<Self> {
        let data = self
            .data
            .iter()
            .map(|a| a.checked_mul(s).ok_or(Error::Overflow))
            .collect::<Result<_>>()?;
        Ok(IntMatrix { n: self.n, data })
    }

    pub fn checked_pow(&self, e: u32) -> Result<Self> {
        let mut acc = Self::identity(self.n);
        for _ in 0..e {
            acc = acc.checked_mul(self)?;
        }
        Ok(acc)
    }

    /// Matrix-vector product `M·x`.
    pub fn mul_vec(&self, x: &[i64]) -> Result<Vec<i64>> {
        if x.len() != self.n {
            return Err(Error::Dimension(format!("vector length {} vs {}", x.len(), self.n)));
        }
        (0..self.n)
            .map(|i| dot(self.row(i), x))
            .collect()
    }

    /// Bilinear form `xᵗ·M·y`.
    pub fn bilinear(&self, x: &[i64], y: &[i64]) -> Result<i64> {
        let my = self.mul_vec(y)?;
        dot(x, &my)
    }

    /// Kronecker product with the first factor major.
    pub fn kron(&self, other: &Self) -> Result<Self> {
        let (n, m) = (self.n, other.n);
        let size = n * m;
        let mut out = Self::zeros(size);
        for i in 0..n {
            for j in 0..n {
                let a = self.get(i, j);
                for k in 0..m {
                    for l in 0..m {
                        let v = a.checked_mul(other.get(k, l)).ok_or(Error::Overflow)?;
                        out.set(i * m + k, j * m + l, v);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Permutes columns: column `j` of the result is column `perm[j]` of `self`.
    pub fn select_columns(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n || perm.iter().any(|&p| p >= self.n) {
            return Err(Error::Dimension("bad column permutation".into()));
        }
        let mut out = Self::zeros(self.n);
        for i in 0..self.n {
            for (j, &p) in perm.iter().enumerate() {
                out.set(i, j, self.get(i, p));
            }
        }
        Ok(out)
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Result<i64> {
        let n = self.n;
        if n == 0 {
            return Ok(1);
        }
        let mut m: Vec<i128> = self.data.iter().map(|&v| v as i128).collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n {
            if m[k * n + k] == 0 {
                match (k + 1..n).find(|&r| m[r * n + k] != 0) {
                    Some(r) => {
                        for c in 0..n {
                            m.swap(k * n + c, r * n + c);
                        }
                        sign = -sign;
                    }
                    None => return Ok(0),
                }
            }
            let pivot = m[k * n + k];
            for i in k + 1..n {
                for j in k + 1..n {
                    let a = m[i * n + j].checked_mul(pivot).ok_or(Error::Overflow)?;
                    let b = m[i * n + k].checked_mul(m[k * n + j]).ok_or(Error::Overflow)?;
                    m[i * n + j] = a.checked_sub(b).ok_or(Error::Overflow)? / prev;
                }
                m[i * n + k] = 0;
            }
            prev = pivot;
        }
        i64::try_from(sign * m[n * n - 1]).map_err(|_| Error::Overflow)
    }

    /// Exact inverse over the rationals.
    pub fn inverse_rational(&self) -> Result<RationalMatrix> {
        let n = self.n;
        let mut a: Vec<Frac> = self.data.iter().map(|&v| Frac::int(v as i128)).collect();
        let mut inv: Vec<Frac> = Self::identity(n).data.iter().map(|&v| Frac::int(v as i128)).collect();
        for col in 0..n {
            let piv = (col..n).find(|&r| !a[r * n + col].is_zero()).ok_or(Error::Singular)?;
            if piv != col {
                for c in 0..n {
                    a.swap(piv * n + c, col * n + c);
                    inv.swap(piv * n + c, col * n + c);
                }
            }
            let p = a[col * n + col];
            for c in 0..n {
                a[col * n + c] = a[col * n + c].div(p)?;
                inv[col * n + c] = inv[col * n + c].div(p)?;
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a[r * n + col];
                if f.is_zero() {
                    continue;
                }
                for c in 0..n {
                    a[r * n + c] = a[r * n + c].sub(f.mul(a[col * n + c])?)?;
                    inv[r * n + c] = inv[r * n + c].sub(f.mul(inv[col * n + c])?)?;
                }
            }
        }
        RationalMatrix::from_fracs(n, &inv)
    }

    /// Inverse of a matrix with determinant ±1.
    pub fn inverse_unimodular(&self) -> Result<Self> {
        let d = self.det()?;
        if d.abs() != 1 {
            return Err(Error::NotUnimodular(d));
        }
        self.inverse_rational()?
            .to_integral()
            .ok_or(Error::NotUnimodular(d))
    }

    /// Largest absolute entrywise difference.
    pub fn max_abs_diff(&self, other: &Self) -> Result<u64> {
        self.check_same(other)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (*a as i128 - *b as i128).unsigned_abs() as u64)
            .max()
            .unwrap_or(0))
    }

    pub fn to_f64_rows(&self) -> Vec<Vec<f64>> {
        (0..self.n)
            .map(|i| self.row(i).iter().map(|&v| v as f64).collect())
            .collect()
    }

    pub fn to_dmatrix(&self) -> nalgebra::DMatrix<f64> {
        nalgebra::DMatrix::from_fn(self.n, self.n, |i, j| self.get(i, j) as f64)
    }
}

/// Exact dot product.
pub fn dot(a: &[i64], b: &[i64]) -> Result<i64> {
    a.iter().zip(b).try_fold(0i64, |acc, (x, y)| {
        x.checked_mul(*y)
            .and_then(|p| acc.checked_add(p))
            .ok_or(Error::Overflow)
    })
}

/// Kronecker product of vectors with the first factor major.
pub fn kron_vec<T: Copy + Mul<Output = T>>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().flat_map(|&x| b.iter().map(move |&y| x * y)).collect()
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self
            .data
            .iter()
            .map(|v| v.to_string().len())
            .max()
            .unwrap_or(1);
        for i in 0..self.n {
            let row: Vec<String> = self.row(i).iter().map(|v| format!("{v:>width$}")).collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}

impl Serialize for IntMatrix {
    /// Row-major array of integer strings, so exact values never pass
    /// through a float.
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = (0..self.n)
            .map(|i| self.row(i).iter().map(|v| v.to_string()).collect())
            .collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let rows: Vec<Vec<String>> = Vec::deserialize(d)?;
        let parsed: Vec<Vec<i64>> = rows
            .iter()
            .map(|r| r.iter().map(|v| v.parse::<i64>()).collect::<std::result::Result<_, _>>())
            .collect::<std::result::Result<_, _>>()
            .map_err(D::Error::custom)?;
        IntMatrix::from_rows(&parsed).map_err(D::Error::custom)
    }
}

macro_rules! panicking_op {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&IntMatrix> for &IntMatrix {
            type Output = IntMatrix;
            fn $method(self, rhs: &IntMatrix) -> IntMatrix {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $tr<IntMatrix> for IntMatrix {
            type Output = IntMatrix;
            fn $method(self, rhs: IntMatrix) -> IntMatrix {
                (&self).$method(&rhs)
            }
        }
    };
}

panicking_op!(Add, add, checked_add);
panicking_op!(Sub, sub, checked_sub);
panicking_op!(Mul, mul, checked_mul);

impl Neg for &IntMatrix {
    type Output = IntMatrix;
    fn neg(self) -> IntMatrix {
        self.checked_scale(-1).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Neg for IntMatrix {
    type Output = IntMatrix;
    fn neg(self) -> IntMatrix {
        -&self
    }
}

/// Rational matrix `numer / denom` with `denom > 0` and
/// `gcd(denom, all numerators) = 1`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct RationalMatrix {
    pub numer: IntMatrix,
    pub denom: i64,
}

impl RationalMatrix {
    pub fn from_integral(m: IntMatrix) -> Self {
        RationalMatrix { numer: m, denom: 1 }
    }

    pub fn new(numer: IntMatrix, denom: i64) -> Result<Self> {
        if denom == 0 {
            return Err(Error::Singular);
        }
        let (mut numer, mut denom) = (numer, denom);
        if denom < 0 {
            numer = numer.checked_scale(-1)?;
            denom = -denom;
        }
        let g = numer.data.iter().fold(denom, |g, &v| gcd(g, v.abs()));
        if g > 1 {
            numer.data.iter_mut().for_each(|v| *v /= g);
            denom /= g;
        }
        Ok(RationalMatrix { numer, denom })
    }

    fn from_fracs(n: usize, fr: &[Frac]) -> Result<Self> {
        let lcm = fr.iter().try_fold(1i128, |l, f| {
            let g = gcd128(l, f.den);
            (l / g).checked_mul(f.den).ok_or(Error::Overflow)
        })?;
        let data = fr
            .iter()
            .map(|f| {
                let v = f.num.checked_mul(lcm / f.den).ok_or(Error::Overflow)?;
                i64::try_from(v).map_err(|_| Error::Overflow)
            })
            .collect::<Result<Vec<_>>>()?;
        let denom = i64::try_from(lcm).map_err(|_| Error::Overflow)?;
        RationalMatrix::new(IntMatrix::from_vec(n, data)?, denom)
    }

    pub fn n(&self) -> usize {
        self.numer.n()
    }

    pub fn is_integral(&self) -> bool {
        self.denom == 1
    }

    pub fn to_integral(&self) -> Option<IntMatrix> {
        self.is_integral().then(|| self.numer.clone())
    }

    /// Product with an integer matrix on the right.
    pub fn mul_int(&self, m: &IntMatrix) -> Result<Self> {
        RationalMatrix::new(self.numer.checked_mul(m)?, self.denom)
    }

    /// Product with an integer matrix on the left.
    pub fn left_mul_int(&self, m: &IntMatrix) -> Result<Self> {
        RationalMatrix::new(m.checked_mul(&self.numer)?, self.denom)
    }

    pub fn neg(&self) -> Result<Self> {
        RationalMatrix::new(self.numer.checked_scale(-1)?, self.denom)
    }

    pub fn to_dmatrix(&self) -> nalgebra::DMatrix<f64> {
        self.numer.to_dmatrix() / self.denom as f64
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn gcd128(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd128(b, a % b)
    }
}

/// Minimal checked fraction used by Gauss–Jordan elimination.
#[derive(Clone, Copy, Debug)]
struct Frac {
    num: i128,
    den: i128,
}

impl Frac {
    fn int(v: i128) -> Self {
        Frac { num: v, den: 1 }
    }

    fn is_zero(&self) -> bool {
        self.num == 0
    }

    fn reduce(num: i128, den: i128) -> Result<Self> {
        if den == 0 {
            return Err(Error::Singular);
        }
        let g = gcd128(num, den).max(1);
        let s = if den < 0 { -1 } else { 1 };
        Ok(Frac { num: s * num / g, den: s * den / g })
    }

    fn mul(self, o: Frac) -> Result<Frac> {
        let num = self.num.checked_mul(o.num).ok_or(Error::Overflow)?;
        let den = self.den.checked_mul(o.den).ok_or(Error::Overflow)?;
        Frac::reduce(num, den)
    }

    fn div(self, o: Frac) -> Result<Frac> {
        self.mul(Frac::reduce(o.den, o.num)?)
    }

    fn sub(self, o: Frac) -> Result<Frac> {
        let a = self.num.checked_mul(o.den).ok_or(Error::Overflow)?;
        let b = o.num.checked_mul(self.den).ok_or(Error::Overflow)?;
        let den = self.den.checked_mul(o.den).ok_or(Error::Overflow)?;
        Frac::reduce(a.checked_sub(b).ok_or(Error::Overflow)?, den)
    }
}
