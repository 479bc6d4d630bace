//! Exact rational linear algebra on small square matrices.
//!
//! Everything here works over `BigRational`; there is no tolerance parameter
//! anywhere, and equality is entry-wise. The census only ever uses 5×5
//! matrices, but the routines accept any square size so the same code can
//! handle the 3×3 residual forms that show up in the Witt decomposition.

use std::fmt;
use std::ops::{Index, Mul};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Exact rational scalar. Always reduced with a positive denominator.
pub type Rat = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinError {
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("invalid rational literal {0:?}")]
    BadRational(String),
}

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `p/q` or `p`. The result is reduced.
pub fn parse_rat(s: &str) -> Result<Rat, LinError> {
    let t = s.trim();
    let bad = || LinError::BadRational(s.to_string());
    if t.is_empty() {
        return Err(bad());
    }
    Rat::from_str(t).map_err(|_| bad())
}

pub fn is_integer(r: &Rat) -> bool {
    r.denom().is_one()
}

/// Square matrix of exact rationals stored row-major.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Mat {
    n: usize,
    entries: Vec<Rat>,
}

impl Mat {
    pub fn zero(n: usize) -> Self {
        Mat {
            n,
            entries: vec![Rat::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zero(n);
        for i in 0..n {
            m.entries[i * n + i] = Rat::one();
        }
        m
    }

    pub fn diagonal(values: &[Rat]) -> Self {
        let mut m = Mat::zero(values.len());
        for (i, v) in values.iter().enumerate() {
            m.set(i, i, v.clone());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Result<Self, LinError> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(LinError::DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
            entries.extend(row);
        }
        Ok(Mat { n, entries })
    }

    /// Convenience constructor for integer literals in tests and fixtures.
    pub fn from_int_rows<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let rows = rows
            .iter()
            .map(|r| r.as_ref().iter().map(|&x| rat(x)).collect())
            .collect();
        Mat::from_rows(rows).expect("integer rows must form a square matrix")
    }

    /// Builds the matrix whose j-th column is `cols[j]`.
    pub fn from_columns(cols: &[Vec<Rat>]) -> Result<Self, LinError> {
        let n = cols.len();
        let mut m = Mat::zero(n);
        for (j, c) in cols.iter().enumerate() {
            if c.len() != n {
                return Err(LinError::DimensionMismatch {
                    expected: n,
                    found: c.len(),
                });
            }
            for (i, x) in c.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rat) {
        self.entries[i * self.n + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<Rat> {
        self.entries[i * self.n..(i + 1) * self.n].to_vec()
    }

    pub fn column(&self, j: usize) -> Vec<Rat> {
        (0..self.n).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn rows(&self) -> Vec<Vec<Rat>> {
        (0..self.n).map(|i| self.row(i)).collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = &Rat> {
        self.entries.iter()
    }

    pub fn transpose(&self) -> Mat {
        let n = self.n;
        let mut t = Mat::zero(n);
        for i in 0..n {
            for j in 0..n {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn scale(&self, c: &Rat) -> Mat {
        Mat {
            n: self.n,
            entries: self.entries.iter().map(|x| x * c).collect(),
        }
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert_eq!(self.n, other.n);
        Mat {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        assert_eq!(self.n, other.n);
        Mat {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.n, v.len());
        (0..self.n)
            .map(|i| {
                self.entries[i * self.n..(i + 1) * self.n]
                    .iter()
                    .zip(v)
                    .fold(Rat::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    pub fn matmul(&self, other: &Mat) -> Mat {
        assert_eq!(self.n, other.n, "matrix product of different sizes");
        let n = self.n;
        let mut out = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = BigInt::zero();
                let mut den = BigInt::one();
                // Accumulate over a common denominator; most entries are
                // integral so this avoids a gcd per term.
                let mut frac = Rat::zero();
                for k in 0..n {
                    let a = self.get(i, k);
                    let b = other.get(k, j);
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    if a.denom().is_one() && b.denom().is_one() {
                        acc += a.numer() * b.numer();
                    } else {
                        frac += a * b;
                    }
                }
                if !frac.is_zero() {
                    den = frac.denom().clone();
                    acc = acc * &den + frac.numer();
                }
                out.push(Rat::new(acc, den));
            }
        }
        Mat { n, entries: out }
    }

    pub fn is_identity(&self) -> bool {
        (0..self.n).all(|i| {
            (0..self.n).all(|j| {
                let x = self.get(i, j);
                if i == j {
                    x.is_one()
                } else {
                    x.is_zero()
                }
            })
        })
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.entries.iter().all(is_integer)
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (i + 1..self.n).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Determinant by fraction-valued Gaussian elimination.
    pub fn det(&self) -> Rat {
        let n = self.n;
        let mut a = self.rows();
        let mut det = Rat::one();
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| !a[r][col].is_zero()) else {
                return Rat::zero();
            };
            if piv != col {
                a.swap(piv, col);
                det = -det;
            }
            let p = a[col][col].clone();
            det *= &p;
            for r in col + 1..n {
                if a[r][col].is_zero() {
                    continue;
                }
                let f = &a[r][col] / &p;
                let pivot = a[col].clone();
                for (x, y) in a[r][col..].iter_mut().zip(&pivot[col..]) {
                    *x -= &f * y;
                }
            }
        }
        det
    }

    /// Gauss-Jordan inverse.
    pub fn inverse(&self) -> Result<Mat, LinError> {
        let n = self.n;
        let mut a = self.rows();
        let mut inv = Mat::identity(n).rows();
        for col in 0..n {
            let piv = (col..n)
                .find(|&r| !a[r][col].is_zero())
                .ok_or(LinError::SingularMatrix)?;
            a.swap(piv, col);
            inv.swap(piv, col);
            let p = a[col][col].clone();
            for c in 0..n {
                a[col][c] /= &p;
                inv[col][c] /= &p;
            }
            for r in 0..n {
                if r == col || a[r][col].is_zero() {
                    continue;
                }
                let f = a[r][col].clone();
                for c in 0..n {
                    let t = &f * &a[col][c];
                    a[r][c] -= t;
                    let t = &f * &inv[col][c];
                    inv[r][c] -= t;
                }
            }
        }
        Mat::from_rows(inv)
    }

    /// Non-negative power by repeated squaring.
    pub fn pow_u(&self, mut k: u64) -> Mat {
        let mut base = self.clone();
        let mut acc = Mat::identity(self.n);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.matmul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.matmul(&base);
            }
        }
        acc
    }

    /// Integer power; negative exponents go through the inverse.
    pub fn pow(&self, k: i64) -> Result<Mat, LinError> {
        if k >= 0 {
            Ok(self.pow_u(k as u64))
        } else {
            Ok(self.inverse()?.pow_u(k.unsigned_abs()))
        }
    }

    /// True iff (M − I)^n = 0, i.e. the characteristic polynomial is (x − 1)^n.
    pub fn is_unipotent(&self) -> bool {
        let nil = self.sub(&Mat::identity(self.n));
        nil.pow_u(self.n as u64).is_zero()
    }

    /// Principal submatrix on the given index set.
    pub fn submatrix(&self, idx: &[usize]) -> Mat {
        let mut m = Mat::zero(idx.len());
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                m.set(a, b, self.get(i, j).clone());
            }
        }
        m
    }
}

impl Index<(usize, usize)> for Mat {
    type Output = Rat;
    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        self.get(i, j)
    }
}

impl Mul for &Mat {
    type Output = Mat;
    fn mul(self, rhs: &Mat) -> Mat {
        self.matmul(rhs)
    }
}

impl Mul for Mat {
    type Output = Mat;
    fn mul(self, rhs: Mat) -> Mat {
        self.matmul(&rhs)
    }
}

impl fmt::Display for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.entries.iter().map(|x| x.to_string()).collect();
        let width = cells.iter().map(String::len).max().unwrap_or(1);
        for i in 0..self.n {
            let line: Vec<String> = cells[i * self.n..(i + 1) * self.n]
                .iter()
                .map(|c| format!("{c:>width$}"))
                .collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

pub fn matrix_product(a: &Mat, b: &Mat) -> Mat {
    a.matmul(b)
}

pub fn matrix_inverse(a: &Mat) -> Result<Mat, LinError> {
    a.inverse()
}

pub fn is_unipotent(m: &Mat) -> bool {
    m.is_unipotent()
}

pub fn dot(u: &[Rat], v: &[Rat]) -> Rat {
    u.iter().zip(v).fold(Rat::zero(), |acc, (a, b)| acc + a * b)
}

/// Basis of the solution space of `rows · x = 0`, each vector of length `n`.
pub fn nullspace(rows: &[Vec<Rat>], n: usize) -> Vec<Vec<Rat>> {
    let mut a: Vec<Vec<Rat>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let pv = a[r][c].clone();
        for x in a[r].iter_mut() {
            *x /= &pv;
        }
        let pivot = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == a.len() {
            break;
        }
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![Rat::zero(); n];
            v[fc] = Rat::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -a[row][fc].clone();
            }
            v
        })
        .collect()
}

/// Symmetric matrix, i.e. the Gram matrix of a bilinear form.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SymMat(Mat);

impl SymMat {
    pub fn new(m: Mat) -> Result<Self, LinError> {
        if m.is_symmetric() {
            Ok(SymMat(m))
        } else {
            Err(LinError::NotSymmetric)
        }
    }

    pub fn as_mat(&self) -> &Mat {
        &self.0
    }

    pub fn into_mat(self) -> Mat {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn get(&self, i: usize, j: usize) -> &Rat {
        self.0.get(i, j)
    }

    pub fn bilinear(&self, u: &[Rat], v: &[Rat]) -> Rat {
        dot(u, &self.0.mul_vec(v))
    }

    pub fn value(&self, v: &[Rat]) -> Rat {
        self.bilinear(v, v)
    }

    /// The form in the basis given by the columns of `x`: XᵗSX.
    pub fn congruent(&self, x: &Mat) -> SymMat {
        SymMat(x.transpose().matmul(&self.0).matmul(x))
    }

    pub fn scale(&self, c: &Rat) -> SymMat {
        SymMat(self.0.scale(c))
    }

    pub fn det(&self) -> Rat {
        self.0.det()
    }
}

/// Inertia of a symmetric form: counts of positive and negative squares.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Signature {
    pub positive: usize,
    pub negative: usize,
    pub rank: usize,
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.positive, self.negative)
    }
}

/// Congruence diagonalization over ℚ.
///
/// Returns `(d, p)` with `pᵗ·s·p = diag(d)` and `p` invertible. Zero diagonal
/// pivots are repaired by adding a coupled row/column first.
pub fn diagonalize(s: &SymMat) -> (Vec<Rat>, Mat) {
    let n = s.dim();
    let mut a = s.as_mat().clone();
    let mut p = Mat::identity(n);

    // col_dst += c * col_src and row_dst += c * row_src
    fn add_multiple(a: &mut Mat, p: &mut Mat, src: usize, dst: usize, c: &Rat) {
        let n = a.dim();
        for r in 0..n {
            let t = c * a.get(r, src);
            let v = a.get(r, dst) + t;
            a.set(r, dst, v);
        }
        for col in 0..n {
            let t = c * a.get(src, col);
            let v = a.get(dst, col) + t;
            a.set(dst, col, v);
        }
        for r in 0..n {
            let t = c * p.get(r, src);
            let v = p.get(r, dst) + t;
            p.set(r, dst, v);
        }
    }

    fn swap(a: &mut Mat, p: &mut Mat, i: usize, j: usize) {
        let n = a.dim();
        for r in 0..n {
            let x = a.get(r, i).clone();
            let y = a.get(r, j).clone();
            a.set(r, i, y);
            a.set(r, j, x);
        }
        for c in 0..n {
            let x = a.get(i, c).clone();
            let y = a.get(j, c).clone();
            a.set(i, c, y);
            a.set(j, c, x);
        }
        for r in 0..n {
            let x = p.get(r, i).clone();
            let y = p.get(r, j).clone();
            p.set(r, i, y);
            p.set(r, j, x);
        }
    }

    for k in 0..n {
        if a.get(k, k).is_zero() {
            if let Some(j) = (k + 1..n).find(|&j| !a.get(j, j).is_zero()) {
                swap(&mut a, &mut p, j, k);
            } else if let Some(j) = (k + 1..n).find(|&j| !a.get(k, j).is_zero()) {
                // new a[k][k] = 2 a[k][j] since both diagonals vanish
                add_multiple(&mut a, &mut p, j, k, &Rat::one());
            } else {
                continue;
            }
        }
        let pivot = a.get(k, k).clone();
        for i in k + 1..n {
            if a.get(i, k).is_zero() {
                continue;
            }
            let c = -(a.get(i, k) / &pivot);
            add_multiple(&mut a, &mut p, k, i, &c);
        }
    }
    let d = (0..n).map(|i| a.get(i, i).clone()).collect();
    (d, p)
}

pub fn exact_signature(s: &SymMat) -> Signature {
    let (d, _) = diagonalize(s);
    let positive = d.iter().filter(|x| x.is_positive()).count();
    let negative = d.iter().filter(|x| x.is_negative()).count();
    Signature {
        positive,
        negative,
        rank: positive + negative,
    }
}

/// |det| of the 3×3 integer matrix with the given rows. Zero means the rows
/// are linearly dependent.
pub fn lattice_index(rows: &[[BigInt; 3]; 3]) -> BigUint {
    let [r0, r1, r2] = rows;
    let det = &r0[0] * (&r1[1] * &r2[2] - &r1[2] * &r2[1])
        - &r0[1] * (&r1[0] * &r2[2] - &r1[2] * &r2[0])
        + &r0[2] * (&r1[0] * &r2[1] - &r1[1] * &r2[0]);
    det.magnitude().clone()
}
