//! Cyclotomic polynomials and the parameter census.
//!
//! A parameter list α of length five stands for the polynomial
//! ∏(X − e^{2πiα_j}). Everything here stays in integer arithmetic: a
//! Galois-closed parameter list is a union of primitive-root orbits
//! {k/n : gcd(k,n) = 1}, and each orbit contributes one factor Φ_n.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exactlin::{ratio, Rat};

/// Orders n with φ(n) ≤ 5. These are the only cyclotomic factors that can
/// divide a degree-five polynomial.
pub const CENSUS_ORDERS: [u32; 9] = [1, 2, 3, 4, 5, 6, 8, 10, 12];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CycloError {
    #[error("parameters are not a union of primitive-root orbits")]
    NotGaloisClosed,
    #[error("polynomial is not a product of cyclotomic polynomials")]
    NotCyclotomicProduct,
    #[error("expected a monic polynomial of degree 5, found degree {0}")]
    WrongDegree(usize),
    #[error("expected 5 parameters, found {0}")]
    WrongLength(usize),
    #[error("parameter {0} is outside [0,1)")]
    OutOfRange(String),
    #[error("alpha and beta share the value {0}")]
    CommonRoot(String),
    #[error("sum of {0} has the wrong fractional part")]
    BadNormalization(&'static str),
}

/// Polynomial with integer coefficients, constant term first, no trailing
/// zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        IntPoly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn one() -> Self {
        IntPoly::from_i64(&[1])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(One::is_one)
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return IntPoly::new(vec![]);
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }

    /// Division by a monic polynomial: `(q, r)` with `self = q·d + r`.
    pub fn div_rem_monic(&self, d: &IntPoly) -> (IntPoly, IntPoly) {
        assert!(d.is_monic(), "divisor must be monic");
        let dd = d.degree();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (IntPoly::new(vec![]), self.clone());
        }
        let mut q = vec![BigInt::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = r[k + dd].clone();
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                r[k + j] -= &c * dc;
            }
            q[k] = c;
        }
        (IntPoly::new(q), IntPoly::new(r))
    }

    /// `p(−x)`.
    pub fn negate_x(&self) -> IntPoly {
        IntPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| if k % 2 == 1 { -c } else { c.clone() })
                .collect(),
        )
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for k in (0..self.coeffs.len()).rev() {
            let c = &self.coeffs[k];
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            }
            first = false;
            let show_mag = k == 0 || !mag.is_one();
            if show_mag {
                write!(f, "{mag}")?;
            }
            match k {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{k}")?,
            }
        }
        Ok(())
    }
}

pub fn euler_phi(n: u32) -> u32 {
    (1..=n).filter(|k| k.gcd(&n) == 1).count() as u32
}

/// The n-th cyclotomic polynomial, by exact division of xⁿ − 1.
pub fn cyclotomic(n: u32) -> IntPoly {
    assert!(n >= 1);
    let mut coeffs = vec![BigInt::zero(); n as usize + 1];
    coeffs[0] = BigInt::from(-1);
    coeffs[n as usize] = BigInt::one();
    let mut p = IntPoly::new(coeffs);
    for d in (1..n).filter(|d| n.is_multiple_of(*d)) {
        let (q, r) = p.div_rem_monic(&cyclotomic(d));
        debug_assert!(r.coeffs.is_empty());
        p = q;
    }
    p
}

/// The primitive-root orbit {k/n : gcd(k,n) = 1, 0 ≤ k < n}.
pub fn orbit(n: u32) -> Vec<Rat> {
    if n == 1 {
        return vec![Rat::zero()];
    }
    (1..n)
        .filter(|k| k.gcd(&n) == 1)
        .map(|k| ratio(k as i64, n as i64))
        .collect()
}

fn check_range(v: &Rat) -> Result<(), CycloError> {
    if v.is_negative() || v >= &Rat::one() {
        return Err(CycloError::OutOfRange(v.to_string()));
    }
    Ok(())
}

/// Multiplicity of each Φ_n in ∏(X − e^{2πiv}).
fn orbit_multiplicities(vals: &[Rat]) -> Result<BTreeMap<u32, usize>, CycloError> {
    let mut by_den: BTreeMap<u32, BTreeMap<Rat, usize>> = BTreeMap::new();
    for v in vals {
        check_range(v)?;
        let n: u32 = v
            .denom()
            .try_into()
            .map_err(|_| CycloError::NotGaloisClosed)?;
        *by_den.entry(n).or_default().entry(v.clone()).or_default() += 1;
    }
    let mut mult = BTreeMap::new();
    for (n, counts) in by_den {
        let full = orbit(n);
        let m = counts.get(&full[0]).copied().unwrap_or(0);
        if counts.len() != full.len() || full.iter().any(|r| counts.get(r) != Some(&m)) {
            return Err(CycloError::NotGaloisClosed);
        }
        mult.insert(n, m);
    }
    Ok(mult)
}

/// ∏(X − e^{2πiv}) for a Galois-closed list, assembled from cyclotomic
/// factors.
pub fn params_to_polynomial(vals: &[Rat]) -> Result<IntPoly, CycloError> {
    let mut p = IntPoly::one();
    for (n, m) in orbit_multiplicities(vals)? {
        let phi = cyclotomic(n);
        for _ in 0..m {
            p = p.mul(&phi);
        }
    }
    Ok(p)
}

/// Greedy cyclotomic factorization of a monic degree-5 polynomial. The
/// parameters come back sorted ascending.
pub fn polynomial_to_params(p: &IntPoly) -> Result<Vec<Rat>, CycloError> {
    if p.degree() != 5 || !p.is_monic() {
        return Err(CycloError::WrongDegree(p.degree()));
    }
    let mut rest = p.clone();
    let mut vals = Vec::new();
    for n in CENSUS_ORDERS {
        let phi = cyclotomic(n);
        loop {
            let (q, r) = rest.div_rem_monic(&phi);
            if !r.coeffs.is_empty() {
                break;
            }
            rest = q;
            vals.extend(orbit(n));
        }
    }
    if rest != IntPoly::one() {
        return Err(CycloError::NotCyclotomicProduct);
    }
    vals.sort();
    Ok(vals)
}

/// A pair of parameter lists, each sorted ascending.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ParamPair {
    pub alpha: Vec<Rat>,
    pub beta: Vec<Rat>,
}

impl ParamPair {
    /// Sorts both lists and checks length, range, Galois closure,
    /// disjointness, and the orthogonal normalization f(0) = −1, g(0) = 1.
    pub fn new(mut alpha: Vec<Rat>, mut beta: Vec<Rat>) -> Result<Self, CycloError> {
        for l in [&alpha, &beta] {
            if l.len() != 5 {
                return Err(CycloError::WrongLength(l.len()));
            }
        }
        alpha.sort();
        beta.sort();
        orbit_multiplicities(&alpha)?;
        orbit_multiplicities(&beta)?;
        if let Some(c) = alpha.iter().find(|a| beta.contains(a)) {
            return Err(CycloError::CommonRoot(c.to_string()));
        }
        let sa: Rat = alpha.iter().sum();
        if !sa.is_integer() {
            return Err(CycloError::BadNormalization("alpha"));
        }
        let sb: Rat = beta.iter().sum::<Rat>() - ratio(1, 2);
        if !sb.is_integer() {
            return Err(CycloError::BadNormalization("beta"));
        }
        Ok(ParamPair { alpha, beta })
    }

    pub fn f(&self) -> IntPoly {
        params_to_polynomial(&self.alpha).expect("validated on construction")
    }

    pub fn g(&self) -> IntPoly {
        params_to_polynomial(&self.beta).expect("validated on construction")
    }
}

impl fmt::Display for ParamPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "alpha=({}) beta=({})",
            crate::fmt_rats(&self.alpha),
            crate::fmt_rats(&self.beta)
        )
    }
}

fn shift_half(vals: &[Rat]) -> Vec<Rat> {
    let half = ratio(1, 2);
    let mut out: Vec<Rat> = vals
        .iter()
        .map(|v| {
            let s = v + &half;
            if s >= Rat::one() {
                s - Rat::one()
            } else {
                s
            }
        })
        .collect();
    out.sort();
    out
}

/// Scalar shift by 1/2 composed with the f ↔ g swap.
pub fn tau_involution(pair: &ParamPair) -> ParamPair {
    ParamPair {
        alpha: shift_half(&pair.beta),
        beta: shift_half(&pair.alpha),
    }
}

/// Lexicographically least member of the τ-orbit.
pub fn canonical(pair: &ParamPair) -> ParamPair {
    let t = tau_involution(pair);
    if t < *pair {
        t
    } else {
        pair.clone()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusEntry {
    pub params: ParamPair,
    pub tau_fixed: bool,
    /// Both f and g are polynomials in x⁵, i.e. the pair (x⁵ − 1, x⁵ + 1).
    pub monomial: bool,
}

/// All multisets of orders from `CENSUS_ORDERS[from..]` with Σφ = `deg`.
fn order_multisets(from: usize, deg: u32, acc: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if deg == 0 {
        out.push(acc.clone());
        return;
    }
    for (i, &n) in CENSUS_ORDERS.iter().enumerate().skip(from) {
        let phi = euler_phi(n);
        if phi <= deg {
            acc.push(n);
            order_multisets(i, deg - phi, acc, out);
            acc.pop();
        }
    }
}

fn params_of_orders(orders: &[u32]) -> Vec<Rat> {
    let mut v: Vec<Rat> = orders.iter().flat_map(|&n| orbit(n)).collect();
    v.sort();
    v
}

/// Every monic degree-5 cyclotomic product, as its sorted parameter list
/// together with its Φ₁ multiplicity.
fn candidates() -> Vec<(Vec<u32>, Vec<Rat>)> {
    let mut out = Vec::new();
    order_multisets(0, 5, &mut Vec::new(), &mut out);
    out.into_iter()
        .map(|o| {
            let p = params_of_orders(&o);
            (o, p)
        })
        .collect()
}

/// All coprime pairs (f, g) with f(0) = −1 and g(0) = 1, sorted, before the
/// τ quotient.
pub fn raw_pairs() -> Vec<ParamPair> {
    let cands = candidates();
    let m1 = |o: &[u32]| o.iter().filter(|&&n| n == 1).count();
    let mut out = Vec::new();
    for (fo, fp) in cands.iter().filter(|(o, _)| m1(o) % 2 == 1) {
        for (go, gp) in cands.iter().filter(|(o, _)| m1(o) % 2 == 0) {
            if fo.iter().any(|n| go.contains(n)) {
                continue;
            }
            out.push(ParamPair {
                alpha: fp.clone(),
                beta: gp.clone(),
            });
        }
    }
    out.sort();
    out
}

fn is_monomial(p: &IntPoly) -> bool {
    (1..p.degree()).all(|k| p.coeff(k).is_zero())
}

/// One canonical representative per τ-orbit, sorted.
pub fn enumerate_pairs() -> Vec<CensusEntry> {
    let mut reps: Vec<ParamPair> = raw_pairs().iter().map(canonical).collect();
    reps.sort();
    reps.dedup();
    reps.into_iter()
        .map(|params| {
            let tau_fixed = tau_involution(&params) == params;
            let monomial = is_monomial(&params.f()) && is_monomial(&params.g());
            CensusEntry {
                params,
                tau_fixed,
                monomial,
            }
        })
        .collect()
}

/// True iff the merged sorted parameters strictly alternate between α and β.
pub fn interlaces(pair: &ParamPair) -> bool {
    let mut merged: Vec<(&Rat, bool)> = pair
        .alpha
        .iter()
        .map(|a| (a, true))
        .chain(pair.beta.iter().map(|b| (b, false)))
        .collect();
    merged.sort();
    merged
        .windows(2)
        .all(|w| w[0].0 != w[1].0 && w[0].1 != w[1].1)
}

/// |Σ_j (−1)^{j+m_j}| with m_j = #{k : β_k < α_j}. Equals |p − q| for the
/// signature of the invariant form.
pub fn bh_delta(pair: &ParamPair) -> u32 {
    let mut alpha = pair.alpha.clone();
    alpha.sort();
    let s: i64 = alpha
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let m = pair.beta.iter().filter(|b| *b < a).count();
            if (i + 1 + m) % 2 == 0 {
                1
            } else {
                -1
            }
        })
        .sum();
    s.unsigned_abs() as u32
}
