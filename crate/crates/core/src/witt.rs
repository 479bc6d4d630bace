//! Isotropic vectors, ℚ-rank, Witt bases, and the unipotent membership tests.
//!
//! Basis conventions follow the columns (ε₁, ε₂, ε₃, ε₂*, ε₁*). In that
//! basis the rank-two shape of G = XᵗQX is anti-diagonal with a nonzero
//! centre, and the rank-one shape is a hyperbolic pair in the corners around
//! an anisotropic 3×3 block.

use std::fmt;
use std::ops::Add;

use num_bigint::{BigInt, BigUint};
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::exactlin::{diagonalize, exact_signature, nullspace, Mat, Rat, SymMat};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WittError {
    #[error("form is definite and has no isotropic vector")]
    DefiniteForm,
    #[error("form is degenerate")]
    Degenerate,
    #[error("ternary form has a zero coefficient")]
    ZeroCoefficient,
    #[error("expected a form of dimension 5, found {0}")]
    Dimension(usize),
    #[error("basis does not have the expected shape: {0}")]
    Shape(String),
}

// ---------------------------------------------------------------------------
// Isotropic search

/// Integer matrix proportional to `q`.
fn integral_entries(q: &SymMat) -> Vec<Vec<BigInt>> {
    let n = q.dim();
    let mut l = BigInt::one();
    for i in 0..n {
        for j in 0..n {
            l = l.lcm(q.get(i, j).denom());
        }
    }
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let e = q.get(i, j);
                    e.numer() * (&l / e.denom())
                })
                .collect()
        })
        .collect()
}

/// Position of `t` in the sequence 0, 1, −1, 2, −2, …
fn seq_key(t: i64) -> (u64, bool) {
    (t.unsigned_abs(), t < 0)
}

/// Walks `rest` through the colex small-first order at sup-norm `bound`;
/// returns false when exhausted.
fn advance(idx: &mut [i64], bound: i64) -> bool {
    for x in idx.iter_mut() {
        let next = if *x > 0 { -*x } else { -*x + 1 };
        if next <= bound {
            *x = next;
            return true;
        }
        *x = 0;
    }
    false
}

/// First isotropic vector at sup-norm `bound`, solving for the first
/// coordinate instead of enumerating it.
fn search_bound<T>(m: &[Vec<T>], bound: i64) -> Option<Vec<i64>>
where
    T: Clone + Integer + Signed + Roots + ToPrimitive + From<i64>,
{
    let n = m.len();
    let two = T::from(2);
    let four = T::from(4);
    let mut rest = vec![0i64; n - 1];
    loop {
        let xs: Vec<T> = rest.iter().map(|&x| T::from(x)).collect();
        let a = m[0][0].clone();
        let mut lin = T::zero();
        for j in 1..n {
            lin = lin + m[0][j].clone() * xs[j - 1].clone();
        }
        let b = two.clone() * lin;
        let mut c = T::zero();
        for i in 1..n {
            for j in 1..n {
                c = c + m[i][j].clone() * xs[i - 1].clone() * xs[j - 1].clone();
            }
        }
        let rest_zero = rest.iter().all(|&x| x == 0);
        let mut roots: Vec<T> = Vec::new();
        if a.is_zero() {
            if b.is_zero() {
                if c.is_zero() {
                    roots.push(if rest_zero { T::one() } else { T::zero() });
                }
            } else {
                let (t, r) = (-c).div_rem(&b);
                if r.is_zero() {
                    roots.push(t);
                }
            }
        } else {
            let disc = b.clone() * b.clone() - four.clone() * a.clone() * c;
            if !disc.is_negative() {
                let s = disc.sqrt();
                if s.clone() * s.clone() == disc {
                    let den = two.clone() * a;
                    for num in [-b.clone() + s.clone(), -b - s] {
                        let (t, r) = num.div_rem(&den);
                        if r.is_zero() {
                            roots.push(t);
                        }
                    }
                }
            }
        }
        let best = roots
            .into_iter()
            .filter_map(|t| {
                let t = t.to_i64()?;
                (t.abs() <= bound && !(t == 0 && rest_zero)).then_some(t)
            })
            .min_by_key(|&t| seq_key(t));
        if let Some(t) = best {
            let mut v = vec![t];
            v.extend(&rest);
            return Some(v);
        }
        if !advance(&mut rest, bound) {
            return None;
        }
    }
}

fn primitive_vec(v: &[i64]) -> Vec<BigInt> {
    let g = v.iter().fold(0i64, |g, &x| g.gcd(&x));
    v.iter().map(|&x| BigInt::from(x / g)).collect()
}

/// A primitive integer vector w with Q(w,w) = 0.
///
/// The search deepens over sup-norm bounds 1, 2, 4, … and returns the first
/// hit in colex order with each coordinate running 0, 1, −1, 2, −2, …
pub fn find_isotropic(q: &SymMat) -> Result<Vec<BigInt>, WittError> {
    let n = q.dim();
    let sig = exact_signature(q);
    if sig.rank == n && (sig.positive == 0 || sig.negative == 0) {
        return Err(WittError::DefiniteForm);
    }
    let m = integral_entries(q);
    let max = m
        .iter()
        .flatten()
        .map(|x| x.magnitude().clone())
        .max()
        .unwrap_or_default();
    let mut bound: i64 = 1;
    loop {
        // |b|, |c| ≤ n²·max·bound², so the discriminant stays below
        // 5·(n²·max·bound²)²; i128 is used whenever that fits.
        let scale = BigUint::from((n * n) as u64) * &max * BigUint::from((bound * bound) as u64);
        let fits = (&scale * &scale * BigUint::from(5u32)).bits() < 126;
        let hit = if fits {
            let small: Vec<Vec<i128>> = m
                .iter()
                .map(|r| r.iter().map(|x| x.to_i128().expect("fits")).collect())
                .collect();
            search_bound(&small, bound)
        } else {
            search_bound(&m, bound)
        };
        if let Some(v) = hit {
            return Ok(primitive_vec(&v));
        }
        bound *= 2;
    }
}

// ---------------------------------------------------------------------------
// Factoring and the Legendre criterion

fn small_primes(limit: u32) -> Vec<u32> {
    let mut sieve = vec![true; limit as usize + 1];
    let mut out = Vec::new();
    for p in 2..=limit as usize {
        if sieve[p] {
            out.push(p as u32);
            let mut k = p * p;
            while k <= limit as usize {
                sieve[k] = false;
                k += p;
            }
        }
    }
    out
}

fn is_probable_prime(n: &BigUint) -> bool {
    let two = BigUint::from(2u32);
    if n < &two {
        return false;
    }
    let one = BigUint::one();
    let nm1 = n - &one;
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s;
    'bases: for a in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41] {
        let a = BigUint::from(a);
        if &a % n == BigUint::zero() {
            continue;
        }
        let mut x = a.modpow(&d, n);
        if x == one || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == nm1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Pollard rho with Floyd cycle detection; `n` odd composite.
fn rho(n: &BigUint) -> BigUint {
    let one = BigUint::one();
    let mut c = BigUint::one();
    loop {
        let f = |x: &BigUint| (x * x + &c) % n;
        let (mut x, mut y, mut d) = (BigUint::from(2u32), BigUint::from(2u32), one.clone());
        while d == one {
            x = f(&x);
            y = f(&f(&y));
            let diff = if x > y { &x - &y } else { &y - &x };
            d = diff.gcd(n);
        }
        if &d != n {
            return d;
        }
        c += 1u32;
    }
}

/// Distinct prime factors with multiplicity.
fn factor(n: &BigUint) -> Vec<(BigUint, u32)> {
    let mut out: Vec<(BigUint, u32)> = Vec::new();
    let push = |p: BigUint, out: &mut Vec<(BigUint, u32)>| {
        match out.iter_mut().find(|(q, _)| *q == p) {
            Some(e) => e.1 += 1,
            None => out.push((p, 1)),
        }
    };
    let mut r = n.clone();
    for p in small_primes(1000) {
        let bp = BigUint::from(p);
        while (&r % &bp).is_zero() {
            r /= &bp;
            push(bp.clone(), &mut out);
        }
    }
    let mut stack = vec![r];
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if is_probable_prime(&m) {
            push(m, &mut out);
        } else {
            let d = rho(&m);
            stack.push(&m / &d);
            stack.push(d);
        }
    }
    out.sort();
    out
}

/// Squarefree integer in the same square class as `n` (nonzero).
fn squarefree(n: &BigInt) -> BigInt {
    let core: BigUint = factor(n.magnitude())
        .into_iter()
        .filter(|(_, e)| e % 2 == 1)
        .map(|(p, _)| p)
        .product();
    let core = BigInt::from(core);
    if n.is_negative() {
        -core
    } else {
        core
    }
}

/// Is `a` a square modulo the squarefree positive integer `m`?
fn is_square_mod(a: &BigInt, m: &BigUint) -> bool {
    factor(m).into_iter().all(|(p, _)| {
        if p == BigUint::from(2u32) {
            return true;
        }
        let bp = BigInt::from(p.clone());
        let r = a.mod_floor(&bp).to_biguint().expect("nonnegative");
        if r.is_zero() {
            return true;
        }
        r.modpow(&((&p - 1u32) >> 1), &p).is_one()
    })
}

/// Whether d₁x² + d₂y² + d₃z² has a nontrivial rational zero.
pub fn ternary_isotropic(d: &[Rat; 3]) -> Result<bool, WittError> {
    if d.iter().any(Zero::is_zero) {
        return Err(WittError::ZeroCoefficient);
    }
    // n/d and n·d differ by the square d²
    let mut a: Vec<BigInt> = d.iter().map(|r| squarefree(&(r.numer() * r.denom()))).collect();
    'reduce: loop {
        for i in 0..3 {
            for j in i + 1..3 {
                let g = a[i].gcd(&a[j]);
                if !g.is_one() {
                    let k = 3 - i - j;
                    a[i] = &a[i] / &g;
                    a[j] = &a[j] / &g;
                    a[k] = squarefree(&(&a[k] * &g));
                    continue 'reduce;
                }
            }
        }
        break;
    }
    if a.iter().all(Signed::is_positive) || a.iter().all(Signed::is_negative) {
        return Ok(false);
    }
    Ok((0..3).all(|i| {
        let j = (i + 1) % 3;
        let k = (i + 2) % 3;
        is_square_mod(&-(&a[j] * &a[k]), a[i].magnitude())
    }))
}

// ---------------------------------------------------------------------------
// Hyperbolic splitting and ℚ-rank

fn to_rats(v: &[BigInt]) -> Vec<Rat> {
    v.iter().map(|x| Rat::from_integer(x.clone())).collect()
}

fn lin_comb(coeffs: &[Rat], vecs: &[Vec<Rat>]) -> Vec<Rat> {
    let n = vecs[0].len();
    let mut out = vec![Rat::zero(); n];
    for (c, v) in coeffs.iter().zip(vecs) {
        for (o, x) in out.iter_mut().zip(v) {
            *o += c * x;
        }
    }
    out
}

/// Integer multiple of `v` with coprime entries, same direction.
fn primitive_integer(v: &[Rat]) -> Vec<Rat> {
    let l = v.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&l / x.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    ints.into_iter().map(|x| Rat::from_integer(x / &g)).collect()
}

/// Given isotropic `w` inside the span of `space`, returns an isotropic
/// partner w* in that span with Q(w, w*) ≠ 0.
fn partner(q: &SymMat, w: &[Rat], space: &[Vec<Rat>]) -> Result<Vec<Rat>, WittError> {
    let u = space
        .iter()
        .find(|u| !q.bilinear(w, u).is_zero())
        .ok_or(WittError::Degenerate)?;
    let c = q.bilinear(w, u);
    let t = q.value(u) / (Rat::from_integer(2.into()) * c);
    Ok(u.iter().zip(w).map(|(ui, wi)| ui - &t * wi).collect())
}

/// Basis of the Q-orthogonal complement of `vecs`.
fn complement(q: &SymMat, vecs: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let rows: Vec<Vec<Rat>> = vecs.iter().map(|v| q.as_mat().mul_vec(v)).collect();
    nullspace(&rows, q.dim())
}

fn restrict(q: &SymMat, basis: &[Vec<Rat>]) -> SymMat {
    let k = basis.len();
    let rows = (0..k)
        .map(|i| (0..k).map(|j| q.bilinear(&basis[i], &basis[j])).collect())
        .collect();
    SymMat::new(Mat::from_rows(rows).expect("square")).expect("symmetric")
}

fn ternary_of(q: &SymMat) -> Result<bool, WittError> {
    let (d, _) = diagonalize(q);
    let d: [Rat; 3] = d.try_into().map_err(|_| WittError::Dimension(q.dim()))?;
    ternary_isotropic(&d)
}

type Split = (Vec<Rat>, Vec<Rat>, Vec<Vec<Rat>>);

/// One hyperbolic plane split off: (ε₁, ε₁*, basis of their complement).
fn split_first(q: &SymMat) -> Result<Split, WittError> {
    let n = q.dim();
    let w = to_rats(&find_isotropic(q)?);
    let std: Vec<Vec<Rat>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }).collect())
        .collect();
    let ws = partner(q, &w, &std)?;
    let rest = complement(q, &[w.clone(), ws.clone()]);
    Ok((w, ws, rest))
}

fn check_nondegenerate_5(q: &SymMat) -> Result<(), WittError> {
    if q.dim() != 5 {
        return Err(WittError::Dimension(q.dim()));
    }
    if q.det().is_zero() {
        return Err(WittError::Degenerate);
    }
    Ok(())
}

/// Witt index over ℚ of a nondegenerate 5-dimensional form.
pub fn q_rank(q: &SymMat) -> Result<u8, WittError> {
    check_nondegenerate_5(q)?;
    let sig = exact_signature(q);
    if sig.positive == 0 || sig.negative == 0 {
        return Ok(0);
    }
    let (_, _, rest) = split_first(q)?;
    Ok(if ternary_of(&restrict(q, &rest))? { 2 } else { 1 })
}

// ---------------------------------------------------------------------------
// Witt bases

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WittKind {
    Rank2,
    Rank1,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WittBasis {
    pub x: Mat,
    pub kind: WittKind,
    pub g: SymMat,
    /// (G(1,5), G(2,4), G(3,3)) for rank-two bases.
    pub lambdas: Option<[Rat; 3]>,
}

fn shape_err(msg: impl Into<String>) -> WittError {
    WittError::Shape(msg.into())
}

impl WittBasis {
    /// Wraps a given change of basis after checking that XᵗQX has the shape
    /// of `kind`.
    pub fn from_matrix(q: &SymMat, x: Mat, kind: WittKind) -> Result<Self, WittError> {
        if q.dim() != 5 || x.dim() != 5 {
            return Err(WittError::Dimension(x.dim()));
        }
        if x.det().is_zero() {
            return Err(shape_err("X is singular"));
        }
        let g = q.congruent(&x);
        let lambdas = match kind {
            WittKind::Rank2 => {
                for i in 0..5 {
                    for j in 0..5 {
                        let anti = i + j == 4;
                        let e = g.get(i, j);
                        if anti && e.is_zero() {
                            return Err(shape_err(format!("G({},{}) is zero", i + 1, j + 1)));
                        }
                        if !anti && !e.is_zero() {
                            return Err(shape_err(format!(
                                "G({},{}) = {e} off the anti-diagonal",
                                i + 1,
                                j + 1
                            )));
                        }
                    }
                }
                Some([g.get(0, 4).clone(), g.get(1, 3).clone(), g.get(2, 2).clone()])
            }
            WittKind::Rank1 => {
                for i in [0, 4] {
                    for j in 0..5 {
                        let corner = i + j == 4;
                        let e = g.get(i, j);
                        if corner && e.is_zero() {
                            return Err(shape_err(format!("G({},{}) is zero", i + 1, j + 1)));
                        }
                        if !corner && !e.is_zero() {
                            return Err(shape_err(format!(
                                "G({},{}) = {e} outside the hyperbolic corners",
                                i + 1,
                                j + 1
                            )));
                        }
                    }
                }
                let mid = SymMat::new(g.as_mat().submatrix(&[1, 2, 3])).expect("symmetric");
                match ternary_of(&mid) {
                    Ok(false) => {}
                    Ok(true) => return Err(shape_err("middle block is isotropic")),
                    Err(_) => return Err(shape_err("middle block is degenerate")),
                }
                None
            }
        };
        Ok(WittBasis { x, kind, g, lambdas })
    }
}

/// Builds a Witt basis for a nondegenerate indefinite 5-dimensional form.
/// Columns are primitive integer vectors.
pub fn witt_basis(q: &SymMat) -> Result<WittBasis, WittError> {
    check_nondegenerate_5(q)?;
    let (e1, e1s, rest) = split_first(q)?;
    let mid = restrict(q, &rest);
    let (cols, kind) = if ternary_of(&mid)? {
        let y = to_rats(&find_isotropic(&mid)?);
        let e2 = lin_comb(&y, &rest);
        let e2s = partner(q, &e2, &rest)?;
        let e3 = complement(q, &[e1.clone(), e1s.clone(), e2.clone(), e2s.clone()]);
        (vec![e1, e2, e3[0].clone(), e2s, e1s], WittKind::Rank2)
    } else {
        (
            vec![e1, rest[0].clone(), rest[1].clone(), rest[2].clone(), e1s],
            WittKind::Rank1,
        )
    };
    let cols: Vec<Vec<Rat>> = cols.iter().map(|c| primitive_integer(c)).collect();
    let x = Mat::from_columns(&cols).expect("five columns of length five");
    WittBasis::from_matrix(q, x, kind)
}

// ---------------------------------------------------------------------------
// Membership

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NotMember {
    #[error("entry ({row},{col}) = {value} breaks the required pattern")]
    Support {
        row: usize,
        col: usize,
        value: String,
    },
    #[error("matrix does not preserve the form")]
    NotIsometry,
    #[error("{0}")]
    Relation(String),
    #[error("root-group membership needs a rank-two basis")]
    NotRank2,
}

/// Coordinates (u₁₂, u₁₃, u₁₄) of a flag unipotent.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FlagCoords {
    pub s: Rat,
    pub x: Rat,
    pub y: Rat,
}

impl FlagCoords {
    pub fn is_zero(&self) -> bool {
        self.s.is_zero() && self.x.is_zero() && self.y.is_zero()
    }

    /// Integer coordinates, if all three are integral.
    pub fn to_integers(&self) -> Option<[BigInt; 3]> {
        let f = |r: &Rat| r.is_integer().then(|| r.to_integer());
        Some([f(&self.s)?, f(&self.x)?, f(&self.y)?])
    }
}

impl Add for &FlagCoords {
    type Output = FlagCoords;
    fn add(self, o: &FlagCoords) -> FlagCoords {
        FlagCoords {
            s: &self.s + &o.s,
            x: &self.x + &o.x,
            y: &self.y + &o.y,
        }
    }
}

impl fmt::Display for FlagCoords {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.s, self.x, self.y)
    }
}

/// Checks that u − I vanishes outside `allowed` (0-based positions).
fn check_support(u: &Mat, allowed: &[(usize, usize)]) -> Result<(), NotMember> {
    let n = u.dim();
    for i in 0..n {
        for j in 0..n {
            let e = u.get(i, j);
            let ok = if i == j {
                e.is_one()
            } else {
                e.is_zero() || allowed.contains(&(i, j))
            };
            if !ok {
                return Err(NotMember::Support {
                    row: i + 1,
                    col: j + 1,
                    value: e.to_string(),
                });
            }
        }
    }
    Ok(())
}

const FLAG_SUPPORT: [(usize, usize); 7] = [(0, 1), (0, 2), (0, 3), (0, 4), (1, 4), (2, 4), (3, 4)];

/// Membership in the unipotent radical of the parabolic fixing
/// ⟨ε₁⟩ ⊂ ε₁^⊥. `u` is expressed in the ε-basis.
pub fn flag_membership(u: &Mat, basis: &WittBasis) -> Result<FlagCoords, NotMember> {
    check_support(u, &FLAG_SUPPORT)?;
    if basis.g.congruent(u) != basis.g {
        return Err(NotMember::NotIsometry);
    }
    Ok(FlagCoords {
        s: u.get(0, 1).clone(),
        x: u.get(0, 2).clone(),
        y: u.get(0, 3).clone(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Root {
    Highest,
    SecondHighest,
}

/// Membership in the root group of the highest or second highest root.
/// Returns the parameter x (u₁₄ or u₁₃ respectively).
pub fn root_group_membership(u: &Mat, basis: &WittBasis, which: Root) -> Result<Rat, NotMember> {
    let [l1, l2, l3] = basis.lambdas.as_ref().ok_or(NotMember::NotRank2)?;
    match which {
        Root::Highest => {
            check_support(u, &[(0, 3), (1, 4)])?;
            let x = u.get(0, 3).clone();
            if x.is_zero() {
                return Err(NotMember::Relation("u14 is zero".into()));
            }
            let want = -(l1 / l2) * &x;
            if u.get(1, 4) != &want {
                return Err(NotMember::Relation(format!(
                    "u25 = {} but -(l1/l2)·u14 = {want}",
                    u.get(1, 4)
                )));
            }
            Ok(x)
        }
        Root::SecondHighest => {
            check_support(u, &[(0, 2), (2, 4), (0, 4)])?;
            let x = u.get(0, 2).clone();
            if x.is_zero() {
                return Err(NotMember::Relation("u13 is zero".into()));
            }
            let want35 = -(l1 / l3) * &x;
            if u.get(2, 4) != &want35 {
                return Err(NotMember::Relation(format!(
                    "u35 = {} but -(l1/l3)·u13 = {want35}",
                    u.get(2, 4)
                )));
            }
            let two = Rat::from_integer(2.into());
            let want15 = -(l1 / (two * l3)) * &x * &x;
            if u.get(0, 4) != &want15 {
                return Err(NotMember::Relation(format!(
                    "u15 = {} but -(l1/(2·l3))·u13² = {want15}",
                    u.get(0, 4)
                )));
            }
            Ok(x)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::{rat, ratio};

    fn sym(rows: &[[i64; 5]]) -> SymMat {
        SymMat::new(Mat::from_int_rows(rows)).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn anti(d: [i64; 5]) -> SymMat {
        let mut m = Mat::zero(5);
        for (i, x) in d.into_iter().enumerate() {
            m.set(i, 4 - i, rat(x));
        }
        SymMat::new(m).unwrap()
    }

    pub(crate) fn bs1_q() -> SymMat {
        sym(&[
            [5, -5, -3, 11, 5],
            [-5, 5, -5, -3, 11],
            [-3, -5, 5, -5, -3],
            [11, -3, -5, 5, -5],
            [5, 11, -3, -5, 5],
        ])
    }

    #[test]
    fn isotropic_examples() {
        let d = SymMat::new(Mat::diagonal(&[rat(1), rat(-1), rat(1), rat(1), rat(1)])).unwrap();
        assert_eq!(find_isotropic(&d).unwrap(), ints(&[1, 1, 0, 0, 0]));
        assert_eq!(find_isotropic(&anti([1; 5])).unwrap(), ints(&[1, 0, 0, 0, 0]));
        assert_eq!(
            find_isotropic(&SymMat::new(Mat::identity(5)).unwrap()),
            Err(WittError::DefiniteForm)
        );
        let q = bs1_q();
        let one = [1, 1, 1, 1, 0].map(rat);
        assert!(q.value(&one).is_zero());
        let w = to_rats(&find_isotropic(&q).unwrap());
        assert!(q.value(&w).is_zero());
    }

    #[test]
    fn ternary_examples() {
        assert_eq!(ternary_isotropic(&[rat(1), rat(-1), rat(1)]), Ok(true));
        assert_eq!(ternary_isotropic(&[rat(1), rat(1), rat(1)]), Ok(false));
        assert_eq!(ternary_isotropic(&[rat(1), rat(0), rat(1)]), Err(WittError::ZeroCoefficient));
        // x² + y² − 3z² is anisotropic (3 is not a sum of two squares mod 9)
        assert_eq!(ternary_isotropic(&[rat(1), rat(1), rat(-3)]), Ok(false));
        assert_eq!(ternary_isotropic(&[rat(1), rat(1), rat(-2)]), Ok(true));
        assert_eq!(ternary_isotropic(&[ratio(1, 4), rat(9), ratio(-5, 1)]), Ok(true));
        let mid = SymMat::new(Mat::from_int_rows(&[
            [-24, -12, -12],
            [-12, -24, 12],
            [-12, 12, -8],
        ]))
        .unwrap();
        assert_eq!(ternary_of(&mid), Ok(false));
    }

    #[test]
    fn factoring() {
        let n = BigUint::from(1_000_003u64) * BigUint::from(1_000_033u64) * BigUint::from(12u32);
        let f = factor(&n);
        assert_eq!(
            f,
            vec![
                (BigUint::from(2u32), 2),
                (BigUint::from(3u32), 1),
                (BigUint::from(1_000_003u64), 1),
                (BigUint::from(1_000_033u64), 1)
            ]
        );
        assert_eq!(squarefree(&BigInt::from(-72)), BigInt::from(-2));
    }

    #[test]
    fn ranks() {
        assert_eq!(q_rank(&bs1_q()), Ok(2));
        assert_eq!(q_rank(&SymMat::new(Mat::identity(5)).unwrap()), Ok(0));
        assert_eq!(q_rank(&anti([1; 5])), Ok(2));
        let d = SymMat::new(Mat::diagonal(&[rat(1), rat(1), rat(1), rat(1), rat(-1)])).unwrap();
        assert_eq!(q_rank(&d), Ok(1));
        let d = SymMat::new(Mat::diagonal(&[rat(1), rat(-1), rat(1), rat(1), rat(-3)])).unwrap();
        assert_eq!(q_rank(&d), Ok(1));
    }

    #[test]
    fn bs1_basis_shape() {
        let x = Mat::from_int_rows(&[
            [4, 0, 0, 0, -1],
            [4, 0, -2, 6, 2],
            [4, 4, -2, 2, -2],
            [4, 4, -6, 10, 0],
            [0, 0, 2, -2, -3],
        ]);
        let b = WittBasis::from_matrix(&bs1_q(), x.clone(), WittKind::Rank2).unwrap();
        assert_eq!(b.lambdas, Some([rat(-128), rat(-128), rat(64)]));
        assert!(WittBasis::from_matrix(&bs1_q(), x, WittKind::Rank1).is_err());
    }

    #[test]
    fn discovered_bases() {
        let b = witt_basis(&bs1_q()).unwrap();
        assert_eq!(b.kind, WittKind::Rank2);
        let d = SymMat::new(Mat::diagonal(&[rat(1), rat(-1), rat(1), rat(1), rat(-3)])).unwrap();
        let b = witt_basis(&d).unwrap();
        assert_eq!(b.kind, WittKind::Rank1);
    }

    #[test]
    fn flag_members() {
        let b = WittBasis::from_matrix(&anti([1; 5]), Mat::identity(5), WittKind::Rank2).unwrap();
        let mut q3 = Mat::identity(5);
        q3.set(0, 1, rat(2));
        q3.set(3, 4, rat(-2));
        assert_eq!(
            flag_membership(&q3, &b),
            Ok(FlagCoords { s: rat(2), x: rat(0), y: rat(0) })
        );
        let mut bad = q3.clone();
        bad.set(3, 4, rat(2));
        assert_eq!(flag_membership(&bad, &b), Err(NotMember::NotIsometry));
        let mut bad = q3.clone();
        bad.set(2, 1, rat(1));
        assert!(matches!(
            flag_membership(&bad, &b),
            Err(NotMember::Support { row: 3, col: 2, .. })
        ));
    }

    #[test]
    fn root_groups() {
        let g = {
            let mut m = Mat::zero(5);
            m.set(0, 4, rat(-72));
            m.set(4, 0, rat(-72));
            m.set(1, 3, rat(252));
            m.set(3, 1, rat(252));
            m.set(2, 2, ratio(3, 49));
            SymMat::new(m).unwrap()
        };
        let b = WittBasis::from_matrix(&g, Mat::identity(5), WittKind::Rank2).unwrap();
        let mut q1 = Mat::identity(5);
        q1.set(0, 3, rat(84));
        q1.set(1, 4, rat(24));
        assert_eq!(root_group_membership(&q1, &b, Root::Highest), Ok(rat(84)));
        assert!(root_group_membership(&q1, &b, Root::SecondHighest).is_err());
        let mut q2 = Mat::identity(5);
        q2.set(0, 2, rat(-24));
        q2.set(2, 4, rat(-28224));
        q2.set(0, 4, rat(338688));
        assert_eq!(root_group_membership(&q2, &b, Root::SecondHighest), Ok(rat(-24)));
        q2.set(0, 4, rat(338689));
        assert!(matches!(
            root_group_membership(&q2, &b, Root::SecondHighest),
            Err(NotMember::Relation(_))
        ));
    }
}
