use hgmono::census::{load_fixture, reconcile, FixtureRow, DEFAULT_FIXTURE};
use hgmono::cyclo::{
    bh_delta, cyclotomic, enumerate_pairs, interlaces, params_to_polynomial,
    polynomial_to_params, tau_involution, IntPoly, ParamPair,
};
use hgmono::exactlin::{ratio, Rat};
use hgmono::hgcore::{analyze, form_from_generator, FormKind};
use num_traits::Zero;

#[test]
fn enumeration_is_deterministic() {
    assert_eq!(format!("{:?}", enumerate_pairs()), format!("{:?}", enumerate_pairs()));
}

#[test]
fn census_entries_are_valid_and_canonical() {
    let half = ratio(1, 2);
    for e in enumerate_pairs() {
        let p = &e.params;
        let sa: Rat = p.alpha.iter().sum();
        let sb: Rat = p.beta.iter().sum();
        assert!(sa.is_integer());
        assert!((sb - &half).is_integer());
        let t = tau_involution(p);
        assert!(ParamPair::new(t.alpha.clone(), t.beta.clone()).is_ok());
        assert!(*p <= t);
        assert_eq!(e.tau_fixed, t == *p);
        for vals in [&p.alpha, &p.beta] {
            let poly = params_to_polynomial(vals).unwrap();
            assert_eq!(&polynomial_to_params(&poly).unwrap(), vals);
        }
    }
}

#[test]
fn tau_fixed_pairs_are_the_expected_seven() {
    let phi = |ns: &[u32]| ns.iter().fold(IntPoly::one(), |p, &n| p.mul(&cyclotomic(n)));
    let mut want = vec![
        phi(&[1, 5]),
        phi(&[1, 10]),
        phi(&[1, 3, 3]),
        phi(&[1, 6, 6]),
        phi(&[1, 1, 1, 3]),
        phi(&[1, 1, 1, 6]),
        phi(&[1, 1, 1, 1, 1]),
    ];
    let mut got: Vec<IntPoly> = enumerate_pairs()
        .iter()
        .filter(|e| e.tau_fixed)
        .map(|e| {
            let f = e.params.f();
            // g(x) = −f(−x) on a fixed pair
            let g = e.params.g();
            let neg = IntPoly::new(f.negate_x().coeffs().iter().map(|c| -c).collect());
            assert_eq!(g, neg);
            f
        })
        .collect();
    want.sort();
    got.sort();
    assert_eq!(got, want);
}

#[test]
fn interlacing_iff_delta_five() {
    for e in enumerate_pairs() {
        assert_eq!(interlaces(&e.params), bh_delta(&e.params) == 5, "{}", e.params);
    }
}

#[test]
fn fixture_matches_from_either_representative() {
    let rows = load_fixture(DEFAULT_FIXTURE).unwrap();
    let flipped: Vec<FixtureRow> = rows
        .iter()
        .map(|r| FixtureRow {
            params: tau_involution(&r.params),
            ..r.clone()
        })
        .collect();
    let census = enumerate_pairs();
    assert_eq!(reconcile(&census, &rows), reconcile(&census, &flipped));
    assert!(reconcile(&census, &flipped).is_ok());
}

#[test]
fn fixture_tables_agree_with_classification() {
    let rows = load_fixture(DEFAULT_FIXTURE).unwrap();
    for r in rows {
        let kind = analyze(&r.params).unwrap().class.kind;
        let want = match r.table_id {
            5 => FormKind::Finite,
            1 | 7 => FormKind::Orthogonal41,
            _ => FormKind::Orthogonal32,
        };
        assert_eq!(kind, want, "table {} row {}", r.table_id, r.row_no);
    }
}

#[test]
fn forms_are_toeplitz_and_generator_independent() {
    for e in enumerate_pairs() {
        let an = analyze(&e.params).unwrap();
        let g = an.form.gram.as_mat();
        for i in 1..5 {
            for j in 1..5 {
                assert_eq!(g.get(i, j), g.get(i - 1, j - 1));
            }
        }
        let via_a = form_from_generator(&an.pair, &an.pair.a).unwrap();
        assert_eq!(via_a.q, an.form.q);
        assert!(!an.form.q.det().is_zero());
    }
}

#[test]
fn real_and_rational_ranks() {
    for e in enumerate_pairs() {
        let c = analyze(&e.params).unwrap().class;
        assert_eq!(c.real_rank as usize, c.signature.negative);
        assert!(c.q_rank <= c.real_rank);
        if c.kind == FormKind::Orthogonal41 {
            assert_eq!(c.q_rank, 1);
        }
    }
}
