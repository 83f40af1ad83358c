use proptest::prelude::*;

use qchev_core::cartan::{CartanDatum, Weight, WeylElement};
use qchev_core::chevalley::{check_conditions, decompose_with, TraceCache};
use qchev_core::hull::lattice_points;
use qchev_core::modules::{irreducible, restrict_sl2, WeightModule};
use qchev_core::qfield::{quantum_integer, ExactScalar};
use qchev_core::torus::TorusFunction;

fn scalar() -> impl Strategy<Value = ExactScalar> {
    (prop::collection::vec((-3i64..=3, -4i64..=4), 1..4), -2i64..=2, -3i64..=3).prop_map(|(terms, c, e)| {
        let mut num = ExactScalar::zero();
        for (k, x) in terms {
            num = &num + &(&ExactScalar::from_int(k) * &ExactScalar::q_pow_frac(x, 2));
        }
        let den = &ExactScalar::one() + &(&ExactScalar::from_int(c) * &ExactScalar::q_pow(e));
        match den.inv() {
            Some(d) => &num * &d,
            None => num,
        }
    })
}

fn datum() -> impl Strategy<Value = CartanDatum> {
    prop_oneof![Just("A2"), Just("B2"), Just("G2")].prop_map(|n| CartanDatum::from_name(n).unwrap())
}

fn word() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0usize..2, 0..7)
}

fn weight2() -> impl Strategy<Value = Weight> {
    (-6i64..=6, -6i64..=6).prop_map(|(a, b)| Weight(vec![a, b]))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn scalar_field_axioms(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a - &b) + &b, a.clone());
        if let Some(ai) = a.inv() {
            prop_assert!((&a * &ai).is_one());
        } else {
            prop_assert!(a.is_zero());
        }
        let back: ExactScalar = a.to_string().parse().unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn quantum_integer_identities(m in -12i64..12, d in 1i64..4) {
        let lhs = &quantum_integer(m + 1, d) * &quantum_integer(m - 1, d);
        let rhs = &(&quantum_integer(m, d) * &quantum_integer(m, d)) - &ExactScalar::one();
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(quantum_integer(m, d).bar(), quantum_integer(m, d));
        prop_assert_eq!(quantum_integer(-m, d), -quantum_integer(m, d));
    }

    #[test]
    fn pairing_is_w_invariant(d in datum(), w in word(), l in weight2(), m in weight2()) {
        let w = WeylElement { word: w };
        prop_assert_eq!(d.pairing(&w.act(&d, &l), &w.act(&d, &m)), d.pairing(&l, &m));
    }

    #[test]
    fn braid_relations(d in datum(), l in weight2()) {
        let order = match d.name.as_str() { "A2" => 3, "B2" => 4, _ => 6 };
        let alt = |start: usize| WeylElement { word: (0..order).map(|k| (start + k) % 2).collect() };
        prop_assert_eq!(alt(0).act(&d, &l), alt(1).act(&d, &l));
        for i in 0..2 {
            prop_assert_eq!(d.reflect(i, &d.reflect(i, &l)), l.clone());
        }
    }

    #[test]
    fn dot_action_composes(d in datum(), a in word(), b in word(), l in weight2()) {
        let wa = WeylElement { word: a.clone() };
        let wb = WeylElement { word: b.clone() };
        let ab = WeylElement { word: [a, b].concat() };
        prop_assert_eq!(ab.dot(&d, &l), wa.dot(&d, &wb.dot(&d, &l)));
        prop_assert_eq!(ab.act(&d, &l), wa.act(&d, &wb.act(&d, &l)));
    }

    #[test]
    fn qstring_division_round_trip(
        terms in prop::collection::vec(((-3i64..=3, -3i64..=3), -5i64..=5), 1..6),
        node in 0usize..2,
        n in 1usize..4,
    ) {
        let d = CartanDatum::from_name("B2").unwrap();
        let mut f = TorusFunction::zero(&d, 1, 1);
        for ((a, b), c) in terms {
            f = f.add(&{
                let mut g = TorusFunction::zero(&d, 1, 1);
                g.add_term(Weight(vec![a, b]), &[ExactScalar::from_int(c)]);
                g
            });
        }
        let prod = f.mul_qstring(node, n);
        prop_assert_eq!(prod.divide_by_qstring(node, n).unwrap(), f);
    }

    #[test]
    fn evaluation_is_linear(a in -4i64..=4, b in -4i64..=4, l in weight2(), c in scalar()) {
        let d = CartanDatum::from_name("A2").unwrap();
        let mut f = TorusFunction::zero(&d, 1, 1);
        f.add_term(Weight(vec![a, b]), &[ExactScalar::one()]);
        let mut g = TorusFunction::zero(&d, 1, 1);
        g.add_term(Weight(vec![b, a]), &[c.clone()]);
        let sum = f.add(&g.scale(&c));
        let lhs = sum.evaluate_at_weight(&l);
        let rhs = &f.evaluate_at_weight(&l)[0] + &(&c * &g.evaluate_at_weight(&l)[0]);
        prop_assert_eq!(lhs[0].clone(), rhs);
    }
}

fn a2_adjoint() -> WeightModule {
    irreducible(&CartanDatum::from_name("A2").unwrap(), &Weight(vec![1, 1])).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn random_rank_one_combinations_round_trip(coeffs in prop::collection::vec(-6i64..=6, 7)) {
        let v = irreducible(&CartanDatum::rank_one(), &Weight(vec![4])).unwrap();
        let mut cache = TraceCache::new(&v);
        let mut f = TorusFunction::zero_for(&v);
        let mut want = Vec::new();
        for (k, c) in coeffs.iter().enumerate() {
            let mu = Weight(vec![k as i64 + 2]);
            if *c != 0 {
                let x = vec![ExactScalar::from_int(*c)];
                f = f.add(&cache.trace(&mu, &x).unwrap());
                want.push((mu, x));
            }
        }
        let d = decompose_with(&f, &mut cache).unwrap();
        let got: Vec<_> = d.terms.into_iter().map(|t| (t.mu, t.v)).collect();
        prop_assert_eq!(got, want);
    }
}

#[test]
fn weight_diagrams_of_traces_are_w_stable() {
    let v = a2_adjoint();
    let mut cache = TraceCache::new(&v);
    for mu in [vec![1, 1], vec![2, 1], vec![2, 2]] {
        let f = cache.trace(&Weight(mu), &[ExactScalar::one(), ExactScalar::zero()]).unwrap();
        let wd = f.weight_diagram();
        for p in &wd {
            for i in 0..2 {
                assert!(wd.contains(&v.datum.reflect(i, p)));
            }
        }
        assert_eq!(wd, lattice_points(&f.support()));
    }
}

#[test]
fn string_restrictions_satisfy_rank_one_conditions() {
    for (name, hw, mus) in [
        ("A2", vec![1, 1], vec![vec![1, 1], vec![2, 1]]),
        ("B2", vec![0, 2], vec![vec![1, 1], vec![0, 2]]),
    ] {
        let d = CartanDatum::from_name(name).unwrap();
        let v = irreducible(&d, &Weight(hw)).unwrap();
        let mut cache = TraceCache::new(&v);
        let d0 = v.weight_dim(&Weight::zero(2));
        for mu in mus {
            let mut e = vec![ExactScalar::zero(); d0];
            e[0] = ExactScalar::one();
            let f = match cache.trace(&Weight(mu), &e) {
                Ok(f) => f,
                Err(_) => continue,
            };
            for i in 0..2 {
                let vi = restrict_sl2(&v, i);
                let parts = f.string_restriction(&v, i);
                assert!(!parts.is_empty());
                for p in parts {
                    let rep = check_conditions(&p, &vi).unwrap();
                    assert!(rep.pass, "{} node {}: {}", name, i, rep.to_json_string());
                }
            }
        }
    }
}

#[test]
fn string_restriction_of_a2_character() {
    let d = CartanDatum::from_name("A2").unwrap();
    let v = WeightModule::trivial(&d);
    let l = irreducible(&d, &Weight(vec![1, 0])).unwrap();
    let mut f = TorusFunction::zero_for(&v);
    for (nu, m) in l.character() {
        f.add_term(nu, &[ExactScalar::from_int(m as i64)]);
    }
    let mut sizes: Vec<usize> = f.string_restriction(&v, 0).iter().map(|g| g.terms().len()).collect();
    sizes.sort();
    assert_eq!(sizes, vec![1, 2]);
    assert!(TorusFunction::zero_for(&v).string_restriction(&v, 0).is_empty());
}

#[test]
fn every_supported_type_evaluates_monomials_exactly() {
    for name in ["A1", "A2", "A3", "A4", "B2", "B3", "B4", "C2", "C3", "C4", "D4", "G2"] {
        let d = CartanDatum::from_name(name).unwrap();
        let f = TorusFunction::zero(&d, 1, 1);
        for i in 0..d.rank {
            for j in 0..d.rank {
                let x = f.monomial_at(&d.fundamental(i), &d.fundamental(j));
                assert!(!x.is_zero());
            }
        }
    }
}
