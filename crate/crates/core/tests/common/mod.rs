//! Independent oracles and random generators shared by the property tests
//! and the acceptance harness. None of these call into the code they check.

#![allow(dead_code)]

use hgmono::exactlin::{rat, Mat, Rat, SymMat};
use hgmono::wordlang::WordExpr;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rand::Rng;

// ---------------------------------------------------------------------------
// Sturm-sequence signature

type Poly = Vec<Rat>; // constant term first

fn trim(mut p: Poly) -> Poly {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn poly_rem(a: &Poly, b: &Poly) -> Poly {
    let mut r = a.clone();
    let db = b.len() - 1;
    while r.len() > db {
        let c = r.last().unwrap() / b.last().unwrap();
        let shift = r.len() - 1 - db;
        for (i, bc) in b.iter().enumerate() {
            r[shift + i] -= &c * bc;
        }
        r.pop();
        r = trim(r);
    }
    trim(r)
}

fn derivative(p: &Poly) -> Poly {
    trim(
        p.iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * rat(k as i64))
            .collect(),
    )
}

fn poly_gcd(a: &Poly, b: &Poly) -> Poly {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_empty() {
        let r = poly_rem(&a, &b);
        a = b;
        b = r;
    }
    a
}

/// Characteristic polynomial det(xI − M) by Faddeev–LeVerrier.
pub fn char_poly(m: &Mat) -> Poly {
    let n = m.dim();
    let mut coeffs = vec![Rat::zero(); n + 1];
    coeffs[n] = rat(1);
    let mut mk = Mat::zero(n);
    for k in 1..=n {
        let mut t = m.matmul(&mk);
        let prev = coeffs[n - k + 1].clone();
        for i in 0..n {
            t.set(i, i, t.get(i, i) + &prev);
        }
        mk = t;
        let am = m.matmul(&mk);
        let tr: Rat = (0..n).map(|i| am.get(i, i).clone()).sum();
        coeffs[n - k] = -tr / rat(k as i64);
    }
    coeffs
}

fn sign_at(p: &Poly, x: Option<i8>) -> i8 {
    // None = value at 0; Some(±1) = sign at ±∞
    let v = match x {
        None => p[0].clone(),
        Some(s) => {
            let lead = p.last().unwrap().clone();
            if (p.len() - 1) % 2 == 1 && s < 0 {
                -lead
            } else {
                lead
            }
        }
    };
    if v.is_positive() {
        1
    } else if v.is_negative() {
        -1
    } else {
        0
    }
}

fn variations(seq: &[Poly], x: Option<i8>) -> usize {
    let signs: Vec<i8> = seq.iter().map(|p| sign_at(p, x)).filter(|&s| s != 0).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Distinct roots in (0, ∞) and (−∞, 0) of a polynomial with p(0) ≠ 0.
fn distinct_pos_neg(p: &Poly) -> (usize, usize) {
    let mut seq = vec![p.clone(), derivative(p)];
    while seq.last().unwrap().len() > 1 {
        let n = seq.len();
        let r = poly_rem(&seq[n - 2], &seq[n - 1]);
        if r.is_empty() {
            break;
        }
        seq.push(r.into_iter().map(|c| -c).collect());
    }
    let at0 = variations(&seq, None);
    let pos = at0 - variations(&seq, Some(1));
    let neg = variations(&seq, Some(-1)) - at0;
    (pos, neg)
}

/// (p, q) from a Sturm count on the characteristic polynomial, with
/// multiplicities recovered through repeated gcd with the derivative.
pub fn sturm_signature(s: &SymMat) -> (usize, usize) {
    let mut p = char_poly(s.as_mat());
    while p[0].is_zero() {
        p.remove(0);
    }
    let (mut pos, mut neg) = (0, 0);
    let mut g = p;
    while g.len() > 1 {
        let (a, b) = distinct_pos_neg(&g);
        pos += a;
        neg += b;
        g = poly_gcd(&g, &derivative(&g));
    }
    (pos, neg)
}

// ---------------------------------------------------------------------------
// Census by brute force over parameter multisets

/// All rationals k/n in [0,1) whose orbit fits in degree 5.
fn small_values() -> Vec<(i64, i64)> {
    let mut v = Vec::new();
    for n in 1..=12i64 {
        let orbit: Vec<i64> = (0..n).filter(|k| k.gcd(&n) == 1).collect();
        if orbit.len() <= 5 {
            v.extend(orbit.into_iter().map(|k| (k, n)));
        }
    }
    v
}

fn galois_closed(ms: &[(i64, i64)]) -> bool {
    ms.iter().all(|&(k, n)| {
        let c = ms.iter().filter(|&&x| x == (k, n)).count();
        (0..n)
            .filter(|j| j.gcd(&n) == 1)
            .all(|j| ms.iter().filter(|&&x| x == (j, n)).count() == c)
    })
}

fn frac_sum(ms: &[(i64, i64)]) -> Rat {
    let s: Rat = ms.iter().map(|&(k, n)| Rat::new(k.into(), n.into())).sum();
    s.clone() - s.floor()
}

fn multisets(vals: &[(i64, i64)], k: usize, from: usize, acc: &mut Vec<(i64, i64)>, out: &mut Vec<Vec<(i64, i64)>>) {
    if k == 0 {
        out.push(acc.clone());
        return;
    }
    for i in from..vals.len() {
        acc.push(vals[i]);
        multisets(vals, k - 1, i, acc, out);
        acc.pop();
    }
}

/// Number of ordered (α, β) with α, β Galois-closed of size 5, disjoint,
/// Σα ∈ ℤ and Σβ ∈ 1/2 + ℤ; plus the parameter lists as sorted rationals.
pub fn brute_force_pairs() -> Vec<(Vec<Rat>, Vec<Rat>)> {
    let vals = small_values();
    let mut all = Vec::new();
    multisets(&vals, 5, 0, &mut Vec::new(), &mut all);
    let closed: Vec<Vec<(i64, i64)>> = all.into_iter().filter(|m| galois_closed(m)).collect();
    let half = Rat::new(1.into(), 2.into());
    let alphas: Vec<_> = closed
        .iter()
        .filter(|m| frac_sum(m).is_zero())
        .collect();
    let betas: Vec<_> = closed
        .iter()
        .filter(|m| frac_sum(m) == half)
        .collect();
    let to_rats = |m: &Vec<(i64, i64)>| {
        let mut v: Vec<Rat> = m.iter().map(|&(k, n)| Rat::new(k.into(), n.into())).collect();
        v.sort();
        v
    };
    let mut out = Vec::new();
    for a in &alphas {
        for b in &betas {
            if a.iter().all(|x| !b.contains(x)) {
                out.push((to_rats(a), to_rats(b)));
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Ternary forms

/// Searches |x|,|y|,|z| ≤ bound for a nontrivial zero of ax² + by² + cz².
pub fn ternary_brute(a: i64, b: i64, c: i64, bound: i64) -> bool {
    for x in -bound..=bound {
        for y in -bound..=bound {
            let r = -(a * x * x + b * y * y);
            if r == 0 && (x, y) != (0, 0) {
                return true;
            }
            if r % c != 0 {
                continue;
            }
            let z2 = r / c;
            if z2 <= 0 {
                continue;
            }
            let z = (z2 as f64).sqrt().round() as i64;
            if z * z == z2 && z <= bound {
                return true;
            }
        }
    }
    false
}

// ---------------------------------------------------------------------------
// Random generators

pub fn random_symmetric<R: Rng>(rng: &mut R, n: usize, range: i64) -> SymMat {
    let mut m = Mat::zero(n);
    for i in 0..n {
        for j in i..n {
            let v = rat(rng.gen_range(-range..=range));
            m.set(i, j, v.clone());
            m.set(j, i, v);
        }
    }
    SymMat::new(m).unwrap()
}

/// Symmetric matrix congruent to a diagonal with at least one zero, so
/// repeated and zero eigenvalues get exercised.
pub fn random_degenerate<R: Rng>(rng: &mut R, n: usize) -> SymMat {
    let d: Vec<Rat> = (0..n)
        .map(|i| if i == 0 { rat(0) } else { rat(rng.gen_range(-3..=3)) })
        .collect();
    let p = random_invertible(rng, n);
    SymMat::new(Mat::diagonal(&d)).unwrap().congruent(&p)
}

/// Random invertible rational matrix: six random elementary factors and one
/// diagonal factor with entries in {1, 2, 1/2}.
pub fn random_invertible<R: Rng>(rng: &mut R, n: usize) -> Mat {
    let mut m = Mat::identity(n);
    for _ in 0..6 {
        let mut e = Mat::identity(n);
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n);
        if i == j {
            j = (j + 1) % n;
        }
        e.set(i, j, rat(rng.gen_range(-2..=2)));
        m = m.matmul(&e);
    }
    let mut d = Mat::identity(n);
    let k = rng.gen_range(0..n);
    d.set(k, k, Rat::new(rng.gen_range(1..=2).into(), rng.gen_range(1..=2).into()));
    m.matmul(&d)
}

pub fn random_word<R: Rng>(rng: &mut R, names: &[&str], depth: u32) -> WordExpr {
    let leaf = depth == 0 || rng.gen_bool(0.35);
    if leaf {
        return WordExpr::name(names[rng.gen_range(0..names.len())]);
    }
    match rng.gen_range(0..3) {
        0 => {
            let k = rng.gen_range(2..=3);
            WordExpr::Product((0..k).map(|_| random_word(rng, names, depth - 1)).collect())
        }
        1 => {
            let mut e = rng.gen_range(-3..=3);
            if e == 0 {
                e = 2;
            }
            WordExpr::Power(Box::new(random_word(rng, names, depth - 1)), e)
        }
        _ => WordExpr::Commutator(
            Box::new(random_word(rng, names, depth - 1)),
            Box::new(random_word(rng, names, depth - 1)),
        ),
    }
}
