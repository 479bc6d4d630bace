//! Levelt generators and the invariant quadratic form.
//!
//! For a pair (f, g) the group is generated by the companion matrices A and
//! B. C = A⁻¹B is a reflection, Cx = x + x₅·v with v = (C − I)e₅, so an
//! invariant form satisfies Q(v, x) ∝ x₅. Normalizing Q(v, e₅) = 1 fixes the
//! Gram matrix of Q on the basis {v, Bv, …, B⁴v}.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::cyclo::{bh_delta, interlaces, IntPoly, ParamPair};
use crate::exactlin::{exact_signature, Mat, Rat, Signature, SymMat};
use crate::witt::{q_rank, WittError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HgError {
    #[error("invariant violated: {0}")]
    InvariantViolation(&'static str),
    #[error("invariant form is degenerate")]
    DegenerateForm,
    #[error("signature {signature} disagrees with the root-count delta {delta}")]
    InconsistentSignature { signature: Signature, delta: u32 },
    #[error(transparent)]
    Witt(#[from] WittError),
}

/// Companion matrix: ones on the subdiagonal, last column −(c₀, …, c_{n−1}).
pub fn companion(p: &IntPoly) -> Mat {
    let n = p.degree();
    let mut m = Mat::zero(n);
    for i in 1..n {
        m.set(i, i - 1, Rat::one());
    }
    for i in 0..n {
        m.set(i, n - 1, Rat::from_integer(-p.coeff(i)));
    }
    m
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HGPair {
    pub params: ParamPair,
    pub f: IntPoly,
    pub g: IntPoly,
    pub a: Mat,
    pub b: Mat,
    pub c: Mat,
    pub v: Vec<Rat>,
}

fn krylov(gen: &Mat, v: &[Rat]) -> (Vec<Vec<Rat>>, Mat) {
    let mut cols = vec![v.to_vec()];
    for _ in 1..v.len() {
        let next = gen.mul_vec(cols.last().expect("nonempty"));
        cols.push(next);
    }
    let m = Mat::from_columns(&cols).expect("square");
    (cols, m)
}

pub fn build_pair(params: &ParamPair) -> Result<HGPair, HgError> {
    let f = params.f();
    let g = params.g();
    let a = companion(&f);
    let b = companion(&g);
    let ainv = a
        .inverse()
        .map_err(|_| HgError::InvariantViolation("A is singular"))?;
    let c = ainv.matmul(&b);
    let n = c.dim();
    let id = Mat::identity(n);
    let v = c.sub(&id).column(n - 1);
    if !c.matmul(&c).is_identity() {
        return Err(HgError::InvariantViolation("C² ≠ I"));
    }
    let cv = c.mul_vec(&v);
    if cv.iter().zip(&v).any(|(x, y)| x != &-y.clone()) {
        return Err(HgError::InvariantViolation("Cv ≠ −v"));
    }
    let (_, m) = krylov(&b, &v);
    if m.det().is_zero() {
        return Err(HgError::InvariantViolation("v, Bv, …, B⁴v are dependent"));
    }
    Ok(HGPair {
        params: params.clone(),
        f,
        g,
        a,
        b,
        c,
        v,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantForm {
    /// Primitive integral form in the standard basis, with p ≥ q.
    pub q: SymMat,
    pub signature: Signature,
    /// Gram matrix on {v, Bv, …, B⁴v} with Q(v, e₅) = 1.
    pub gram: SymMat,
}

/// Rescales to a primitive integral matrix whose signature has p ≥ q.
pub fn primitive_form(s: &SymMat) -> SymMat {
    let n = s.dim();
    let entries = || (0..n).flat_map(move |i| (0..n).map(move |j| (i, j)));
    let l = entries().fold(BigInt::one(), |l, (i, j)| l.lcm(s.get(i, j).denom()));
    let g = entries().fold(BigInt::zero(), |g, (i, j)| {
        let e = s.get(i, j);
        g.gcd(&(e.numer() * (&l / e.denom())))
    });
    if g.is_zero() {
        return s.clone();
    }
    let mut scale = Rat::new(l, g);
    let sig = exact_signature(s);
    if sig.negative > sig.positive {
        scale = -scale;
    }
    s.scale(&scale)
}

/// Form built from the Krylov basis of `gen` applied to v. Both A and B give
/// the same form because each preserves it and C is the reflection in v.
pub fn form_from_generator(pair: &HGPair, gen: &Mat) -> Result<InvariantForm, HgError> {
    let n = pair.v.len();
    let (cols, m) = krylov(gen, &pair.v);
    let t: Vec<Rat> = cols.iter().map(|c| c[n - 1].clone()).collect();
    let mut gm = Mat::zero(n);
    for i in 0..n {
        for j in 0..n {
            gm.set(i, j, t[i.abs_diff(j)].clone());
        }
    }
    let gram = SymMat::new(gm).expect("Toeplitz is symmetric");
    let minv = m.inverse().map_err(|_| HgError::DegenerateForm)?;
    let std = gram.congruent(&minv);
    if std.det().is_zero() {
        return Err(HgError::DegenerateForm);
    }
    let q = primitive_form(&std);
    if q.congruent(&pair.a) != q || q.congruent(&pair.b) != q {
        return Err(HgError::InvariantViolation("form is not invariant under A and B"));
    }
    let signature = exact_signature(&q);
    Ok(InvariantForm { q, signature, gram })
}

pub fn invariant_form(pair: &HGPair) -> Result<InvariantForm, HgError> {
    form_from_generator(pair, &pair.b)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FormKind {
    Finite,
    Orthogonal41,
    Orthogonal32,
}

impl fmt::Display for FormKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FormKind::Finite => "finite",
            FormKind::Orthogonal41 => "sig41",
            FormKind::Orthogonal32 => "sig32",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub kind: FormKind,
    pub signature: Signature,
    pub real_rank: u8,
    pub q_rank: u8,
    pub bh_delta: u32,
    pub interlaces: bool,
}

/// Everything computed for one parameter pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Analysis {
    pub pair: HGPair,
    pub form: InvariantForm,
    pub class: Classification,
}

pub fn analyze(params: &ParamPair) -> Result<Analysis, HgError> {
    let pair = build_pair(params)?;
    let form = invariant_form(&pair)?;
    let sig = form.signature;
    let delta = bh_delta(params);
    if sig.positive.abs_diff(sig.negative) as u32 != delta {
        return Err(HgError::InconsistentSignature {
            signature: sig,
            delta,
        });
    }
    let kind = match (sig.positive, sig.negative) {
        (5, 0) => FormKind::Finite,
        (4, 1) => FormKind::Orthogonal41,
        (3, 2) => FormKind::Orthogonal32,
        _ => return Err(HgError::DegenerateForm),
    };
    let class = Classification {
        kind,
        signature: sig,
        real_rank: sig.negative as u8,
        q_rank: q_rank(&form.q)?,
        bh_delta: delta,
        interlaces: interlaces(params),
    };
    Ok(Analysis { pair, form, class })
}

pub fn classify(params: &ParamPair) -> Result<Classification, HgError> {
    analyze(params).map(|a| a.class)
}
