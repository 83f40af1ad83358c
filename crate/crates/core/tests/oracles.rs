//! Hand-computed values that the engine must reproduce exactly.

use qchev_core::cartan::{CartanDatum, Weight, WeylElement};
use qchev_core::chevalley::{check_conditions, decompose, verma_trace_series, TraceCache};
use qchev_core::dynamical::{a_operator_rank1_formula, DynamicalWeyl};
use qchev_core::intertwiner::HomSpace;
use qchev_core::modules::{irreducible, WeightModule};
use qchev_core::qfield::{quantum_integer, ExactScalar};
use qchev_core::torus::{TorusFunction, TorusJson};
use qchev_core::Error;

fn w(x: i64) -> Weight {
    Weight(vec![x])
}

fn q(k: i64) -> ExactScalar {
    ExactScalar::q_pow(k)
}

#[test]
fn rank_one_operator_values() {
    assert_eq!(a_operator_rank1_formula(0, 5).unwrap(), ExactScalar::one());
    for l in 1..6 {
        let want = -(&quantum_integer(l + 2, 1) / &quantum_integer(l, 1));
        assert_eq!(a_operator_rank1_formula(1, l).unwrap(), want);
    }
    assert_eq!(a_operator_rank1_formula(1, 2).unwrap(), -(&q(2) + &q(-2)));
    assert!(matches!(a_operator_rank1_formula(2, 1), Err(Error::Pole(_))));

    let v = irreducible(&CartanDatum::rank_one(), &w(2)).unwrap();
    let dw = DynamicalWeyl::new(&v).unwrap();
    let a = dw.shifted(&WeylElement::simple(0), &w(2)).unwrap();
    assert_eq!(a.get(0, 0).clone(), -(&q(2) + &q(-2)));
}

#[test]
fn unshifted_rank_one_matches_closed_form() {
    // A(z) = (q^{1-z} - q^{z-1}) / (q^{1+z} - q^{-1-z}) for V = L_2
    let v = irreducible(&CartanDatum::rank_one(), &w(2)).unwrap();
    let dw = DynamicalWeyl::new(&v).unwrap();
    for z in [2i64, 3, 5, -4] {
        let got = dw.unshifted(&WeylElement::simple(0), &w(z)).unwrap().get(0, 0).clone();
        let want = &(&q(1 - z) - &q(z - 1)) / &(&q(1 + z) - &q(-1 - z));
        assert_eq!(got, want, "z = {}", z);
    }
}

#[test]
fn decomposition_examples() {
    let v = irreducible(&CartanDatum::rank_one(), &w(2)).unwrap();
    assert!(decompose(&TorusFunction::zero_for(&v), &v).unwrap().terms.is_empty());

    let mut cache = TraceCache::new(&v);
    let three = ExactScalar::from_int(3);
    let five = ExactScalar::from_int(5);
    let f = cache.trace(&w(2), &[three.clone()]).unwrap().add(&cache.trace(&w(4), &[five.clone()]).unwrap());
    let d = decompose(&f, &v).unwrap();
    assert_eq!(d.terms.len(), 2);
    assert_eq!((d.terms[0].mu.clone(), d.terms[0].v.clone()), (w(2), vec![three]));
    assert_eq!((d.terms[1].mu.clone(), d.terms[1].v.clone()), (w(4), vec![five]));
}

#[test]
fn checker_examples() {
    let a1 = CartanDatum::rank_one();
    let v = irreducible(&a1, &w(2)).unwrap();
    let h = HomSpace::new(&w(4), &v).unwrap();
    let f = h.trace(&h.from_expectation(&[ExactScalar::one()]).unwrap()).unwrap();
    assert!(check_conditions(&f, &v).unwrap().pass);

    // The same function read back from its JSON form.
    let (g, v2) = TorusJson::parse(&f.to_json_string()).unwrap();
    assert_eq!(g.terms(), f.terms());
    assert!(check_conditions(&g, &v2).unwrap().pass);

    // A character is invariant when V is trivial.
    let triv = WeightModule::trivial(&a1);
    let mut ch = TorusFunction::zero_for(&triv);
    for k in [-3i64, -1, 1, 3] {
        ch.add_term(w(k), &[ExactScalar::one()]);
    }
    assert!(check_conditions(&ch, &triv).unwrap().pass);
    // Dropping one weight breaks Weyl invariance.
    let mut broken = TorusFunction::zero_for(&triv);
    for k in [-1i64, 1, 3] {
        broken.add_term(w(k), &[ExactScalar::one()]);
    }
    assert_eq!(check_conditions(&broken, &triv).unwrap().first_failure(), Some(2));
}

#[test]
fn verma_series_examples() {
    for mu in 0..5 {
        assert!(verma_trace_series(0, mu, 10).unwrap().is_zero());
    }
    let r = verma_trace_series(1, 4, 10).unwrap();
    assert!(r.is_zero());
    assert_eq!(r.twist, a_operator_rank1_formula(1, 4).unwrap());
    assert!(verma_trace_series(1, 4, 0).unwrap().is_zero());
}
