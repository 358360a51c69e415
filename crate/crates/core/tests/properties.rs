use std::collections::BTreeMap;
use std::sync::Arc;

use abelianize::charclass::{
    chern_character, exterior_power_characters, index_group, index_group_exterior, lambda_alternating_ch, mult_class,
    ClassName, NamedClassSeries,
};
use abelianize::config::{model_to_config, QuotientConfig};
use abelianize::presentation::{ann_e_basis, invariant_basis};
use abelianize::quotient::{grassmannian_model, integrate_group, GroupRoots, QuotientModel, SplitBundle};
use abelianize::ratpoly::{
    Monomial, PermutationGroup, Rational, RingSpec, SymmetrizeMode, TruncatedPolynomial, UnivariateSeries,
};
use abelianize::rootdata::{e_product, RootSubset, Weight};
use abelianize::schubert::{oracle_chern_pairing, oracle_chern_pairing_ordered};
use num::{BigInt, One, Zero};
use proptest::prelude::*;

type Terms = Vec<(Vec<u32>, i64, i64)>;

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

fn poly(ring: &Arc<RingSpec>, terms: &Terms) -> TruncatedPolynomial {
    TruncatedPolynomial::from_terms(ring, terms.iter().map(|(e, n, d)| (Monomial(e.clone()), rat(*n, *d)))).unwrap()
}

fn terms(k: usize, max_exp: u32) -> impl Strategy<Value = Terms> {
    prop::collection::vec((prop::collection::vec(0..=max_exp, k), -9i64..=9, 1i64..=4), 0..6)
}

fn nilpotent(t: Terms) -> Terms {
    t.into_iter().filter(|(e, _, _)| e.iter().any(|&x| x > 0)).collect()
}

fn ring_and_terms(n: usize) -> impl Strategy<Value = (Vec<u32>, Vec<Terms>)> {
    prop::collection::vec(1u32..=4, 1..=3).prop_flat_map(move |t| {
        let k = t.len();
        (Just(t), prop::collection::vec(terms(k, 5), n))
    })
}

fn naive_product(a: &Terms, b: &Terms, truncations: &[u32]) -> BTreeMap<Vec<u32>, Rational> {
    let mut out: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();
    for (ea, na, da) in a {
        for (eb, nb, db) in b {
            let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            if e.iter().zip(truncations).all(|(x, n)| x < n) {
                *out.entry(e).or_insert_with(Rational::zero) += rat(*na, *da) * rat(*nb, *db);
            }
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn weights(k: usize) -> impl Strategy<Value = Vec<(Vec<i64>, i64)>> {
    prop::collection::vec((prop::collection::vec(-2i64..=2, k), -2i64..=3), 0..4)
}

fn bundle(ring: &Arc<RingSpec>, ws: &[(Vec<i64>, i64)]) -> SplitBundle {
    let mut b = SplitBundle::empty(ring);
    for (w, m) in ws {
        b.push_weight(&Weight(w.clone()), *m).unwrap();
    }
    b
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for pos in 0..k {
            let mut q = p.clone();
            q.insert(pos, k - 1);
            out.push(q);
        }
    }
    out
}

/// Each weight together with its full S_k orbit, so the bundle is Weyl-invariant.
fn symmetric_bundle(ring: &Arc<RingSpec>, ws: &[(Vec<i64>, i64)]) -> SplitBundle {
    let k = ring.variable_count();
    let mut orbit = Vec::new();
    for (w, m) in ws {
        let mut seen = std::collections::BTreeSet::new();
        for p in permutations(k) {
            let image: Vec<i64> = p.iter().map(|&j| w[j]).collect();
            if seen.insert(image.clone()) {
                orbit.push((image, *m));
            }
        }
    }
    bundle(ring, &orbit)
}

fn model(k: usize, n: usize) -> QuotientModel {
    grassmannian_model(k, n).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms((t, ps) in ring_and_terms(3)) {
        let r = RingSpec::new(t.len(), t).unwrap();
        let (a, b, c) = (poly(&r, &ps[0]), poly(&r, &ps[1]), poly(&r, &ps[2]));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a + &b) - &b, a.clone());
        prop_assert_eq!(&a * &TruncatedPolynomial::one(&r), a);
    }

    #[test]
    fn product_is_truncated_full_product((t, ps) in ring_and_terms(2)) {
        let r = RingSpec::new(t.len(), t.clone()).unwrap();
        let product = &poly(&r, &ps[0]) * &poly(&r, &ps[1]);
        let got: BTreeMap<Vec<u32>, Rational> = product.terms().map(|(m, c)| (m.0.clone(), c.clone())).collect();
        prop_assert_eq!(got, naive_product(&ps[0], &ps[1], &t));
    }

    #[test]
    fn truncation_ideal_vanishes((t, ps) in ring_and_terms(1), i in 0usize..3) {
        let r = RingSpec::new(t.len(), t.clone()).unwrap();
        let i = i % t.len();
        let u = TruncatedPolynomial::variable(&r, i).unwrap();
        prop_assert!((&poly(&r, &ps[0]) * &u.pow(t[i] as u64)).is_zero());
    }

    #[test]
    fn exp_is_a_homomorphism((t, ps) in ring_and_terms(2)) {
        let r = RingSpec::new(t.len(), t).unwrap();
        let exp = UnivariateSeries::exp(&r);
        let a = poly(&r, &nilpotent(ps[0].clone()));
        let b = poly(&r, &nilpotent(ps[1].clone()));
        prop_assert_eq!(exp.eval(&(&a + &b)).unwrap(), &exp.eval(&a).unwrap() * &exp.eval(&b).unwrap());
    }

    #[test]
    fn reciprocal_inverts(c0 in prop::sample::select(vec![-3i64, -1, 1, 2, 5]), rest in prop::collection::vec(-5i64..=5, 0..8)) {
        let r = RingSpec::new(1, vec![9]).unwrap();
        let mut coeffs = vec![rat(c0, 1)];
        coeffs.extend(rest.iter().map(|&c| rat(c, 3)));
        let f = UnivariateSeries::from_coefficients(&r, coeffs);
        let product = f.multiply(&f.reciprocal().unwrap());
        let mut one = vec![Rational::zero(); product.len()];
        one[0] = Rational::one();
        prop_assert_eq!(product.coefficients(), &one[..]);
    }

    #[test]
    fn averaging_is_idempotent(k in 1usize..=3, n in 1u32..=4, ts in terms(3, 4)) {
        let r = RingSpec::new(k, vec![n; k]).unwrap();
        let ts: Terms = ts.into_iter().map(|(e, a, b)| (e[..k].to_vec(), a, b)).collect();
        let g = PermutationGroup::symmetric(k);
        let once = poly(&r, &ts).symmetrize(&g, SymmetrizeMode::Average).unwrap();
        prop_assert_eq!(once.symmetrize(&g, SymmetrizeMode::Average).unwrap(), once.clone());
        for h in g.generators() {
            let single = PermutationGroup::new(k, vec![h.clone()]).unwrap();
            prop_assert_eq!(once.symmetrize(&single, SymmetrizeMode::Average).unwrap(), once.clone());
        }
    }

    #[test]
    fn classes_are_multiplicative(v in weights(2), w in weights(2)) {
        let r = RingSpec::new(2, vec![4, 4]).unwrap();
        let (v, w) = (bundle(&r, &v), bundle(&r, &w));
        let sum = v.direct_sum(&w).unwrap();
        for name in [ClassName::TotalChern, ClassName::Todd, ClassName::LClass, ClassName::ChernCharacterExp] {
            let f = NamedClassSeries::builtin(name, &r).unwrap();
            prop_assert_eq!(mult_class(&f, &sum).unwrap(), &mult_class(&f, &v).unwrap() * &mult_class(&f, &w).unwrap());
        }
        prop_assert_eq!(chern_character(&sum).unwrap(), &chern_character(&v).unwrap() + &chern_character(&w).unwrap());
    }

    #[test]
    fn todd_of_virtual_inverse(v in weights(3)) {
        let r = RingSpec::new(3, vec![3, 3, 3]).unwrap();
        let v = bundle(&r, &v);
        let td = NamedClassSeries::builtin(ClassName::Todd, &r).unwrap();
        prop_assert_eq!(&mult_class(&td, &v).unwrap() * &mult_class(&td, &v.negated()).unwrap(), TruncatedPolynomial::one(&r));
    }

    #[test]
    fn k_identity_by_subsets(roots in prop::collection::vec(prop::collection::vec(-2i64..=2, 2), 0..=3)) {
        let r = RingSpec::new(2, vec![4, 4]).unwrap();
        let e = bundle(&r, &roots.iter().map(|w| (w.clone(), 1)).collect::<Vec<_>>());
        let exp = UnivariateSeries::exp(&r);
        let xs: Vec<TruncatedPolynomial> = roots.iter().map(|w| TruncatedPolynomial::linear(&r, w).unwrap()).collect();
        let mut alternating = TruncatedPolynomial::zero(&r);
        let mut layers = vec![TruncatedPolynomial::zero(&r); xs.len() + 1];
        for mask in 0u32..(1 << xs.len()) {
            let mut sum = TruncatedPolynomial::zero(&r);
            for (i, x) in xs.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    sum = &sum + x;
                }
            }
            let term = exp.eval(&sum).unwrap();
            let size = mask.count_ones() as usize;
            layers[size] = &layers[size] + &term;
            alternating = if size.is_multiple_of(2) { &alternating + &term } else { &alternating - &term };
        }
        prop_assert_eq!(lambda_alternating_ch(&e).unwrap(), alternating);
        prop_assert_eq!(exterior_power_characters(&e).unwrap(), layers);
    }

    #[test]
    fn index_ignores_positive_root_choice(
        shape in prop::sample::select(vec![(1usize, 3usize), (2, 4), (2, 5), (3, 5)]),
        ws in prop::collection::vec((prop::collection::vec(-2i64..=2, 3), 1i64..=2), 0..3),
    ) {
        let (k, n) = shape;
        let m = model(k, n);
        let ws: Vec<(Vec<i64>, i64)> = ws.into_iter().map(|(w, mult)| (w[..k].to_vec(), mult)).collect();
        let v = symmetric_bundle(m.ring(), &ws);
        let a = index_group(&m, &v, GroupRoots::All).unwrap();
        let b = index_group(&m.with_opposite_positive_roots(), &v, GroupRoots::All).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(index_group_exterior(&m, &v, GroupRoots::All).unwrap().difference(), a);
    }

    #[test]
    fn integration_is_weyl_invariant(shape in prop::sample::select(vec![(2usize, 4usize), (2, 5), (3, 5)]), ts in terms(3, 4)) {
        let (k, n) = shape;
        let m = model(k, n);
        let ts: Terms = ts.into_iter().map(|(e, a, b)| (e[..k].to_vec(), a, b)).collect();
        let p = poly(m.ring(), &ts);
        let whole = integrate_group(&m, &p, GroupRoots::All).unwrap();
        for g in m.root_data().weyl().generators() {
            let single = PermutationGroup::new(k, vec![g.clone()]).unwrap();
            let avg = p.symmetrize(&single, SymmetrizeMode::Average).unwrap();
            prop_assert_eq!(integrate_group(&m, &avg, GroupRoots::All).unwrap(), whole.clone());
        }
    }

    #[test]
    fn annihilator_is_an_ideal(
        shape in prop::sample::select(vec![(2usize, 4usize), (2, 5), (3, 5)]),
        seed in prop::collection::vec(-3i64..=3, 4),
        d in 0u32..8,
        j in 0u32..4,
    ) {
        let (k, n) = shape;
        let m = model(k, n);
        let e = e_product(m.ring(), m.root_data(), RootSubset::All).unwrap();
        let ann = ann_e_basis(&m, d.min(m.ring().top_degree())).unwrap();
        let inv = invariant_basis(&m, j).unwrap();
        let mut multiplier = TruncatedPolynomial::zero(m.ring());
        for (x, c) in inv.elements.iter().zip(&seed) {
            multiplier = &multiplier + &x.scale(&rat(*c, 1));
        }
        for b in &ann.elements {
            prop_assert!((b * &e).is_zero());
            prop_assert!((&(b * &multiplier) * &e).is_zero());
        }
    }

    #[test]
    fn pieri_order_is_irrelevant(
        (k, n, exps, order) in prop::sample::select(vec![(2usize, 5usize), (3, 6), (3, 7), (2, 7)])
            .prop_flat_map(|(k, n)| {
                let all = abelianize::quotient::degree_matching_exponents(k, (k * (n - k)) as u64);
                prop::sample::select(all).prop_flat_map(move |exps| {
                    let order: Vec<usize> = exps
                        .iter()
                        .enumerate()
                        .flat_map(|(i, &m)| std::iter::repeat_n(i + 1, m as usize))
                        .collect();
                    (Just(k), Just(n), Just(exps), Just(order).prop_shuffle())
                })
            })
    ) {
        prop_assert_eq!(
            oracle_chern_pairing_ordered(k, n, k, &order).unwrap(),
            oracle_chern_pairing(k, n, &exps).unwrap()
        );
    }

    #[test]
    fn config_round_trip(k in 1usize..=3, extra in 1usize..=3, p in 1i64..=5, q in 1i64..=5, flip: bool) {
        let mut m = model(k, k + extra).with_orbifold_prefactor(rat(p, q)).unwrap();
        if flip {
            m = m.with_opposite_positive_roots();
        }
        let cfg = model_to_config(&m).unwrap();
        let reloaded = QuotientConfig::parse(&cfg.to_json()).unwrap().to_model().unwrap();
        prop_assert_eq!(reloaded, m);
    }
}
