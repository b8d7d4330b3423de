mod common;

use hurwitz_core::criteria::{classify, predicate_verdicts, Verdict};
use hurwitz_core::dessin::{
    dessin_from_realization, is_isomorphic, realization_from_dessin, validate_against_datum,
};
use hurwitz_core::perm::simultaneous_conjugator;
use hurwitz_core::realizer::{product, search, verify_witness, Realization, SearchOutcome, DEFAULT_BUDGET};
use hurwitz_core::{infer_cover, is_transitive, BranchDatum, Permutation, Surface};
use proptest::prelude::*;

fn perm(d: usize) -> impl Strategy<Value = Permutation> {
    Just((0..d).collect::<Vec<usize>>())
        .prop_shuffle()
        .prop_map(|v| Permutation::from_images(&v).unwrap())
}

/// A tuple whose product is trivial: `n - 1` random permutations and the
/// inverse of their product.
fn closed_tuple(d: usize, n: usize) -> impl Strategy<Value = Vec<Permutation>> {
    prop::collection::vec(perm(d), n - 1).prop_map(move |mut taus| {
        taus.push(product(d, &taus).inverse());
        taus
    })
}

fn tuples() -> impl Strategy<Value = Vec<Permutation>> {
    (3usize..=7, 3usize..=4).prop_flat_map(|(d, n)| closed_tuple(d, n))
}

/// The sphere-base datum a tuple realizes, with trivial points dropped.
fn datum_of(taus: &[Permutation]) -> Option<BranchDatum> {
    let d = taus[0].degree();
    let parts: Vec<_> = taus.iter().map(|t| t.cycle_type()).filter(|p| !p.is_trivial()).collect();
    let cover = *infer_cover(Surface::SPHERE, d, &parts).first()?;
    let datum = BranchDatum::new(cover, Surface::SPHERE, d, parts).ok()?;
    Some(datum)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn inverse_and_conjugation((a, b) in (2usize..=9).prop_flat_map(|d| (perm(d), perm(d)))) {
        prop_assert!(a.compose(&a.inverse()).unwrap().is_identity());
        prop_assert_eq!(a.conjugate_by(&b).cycle_type(), a.cycle_type());
        prop_assert_eq!(a.cycle_type().degree(), a.degree());
    }

    #[test]
    fn datum_string_round_trip(taus in tuples()) {
        if let Some(datum) = datum_of(&taus) {
            let back: BranchDatum = datum.to_string().parse().unwrap();
            prop_assert_eq!(back, datum);
        }
    }

    #[test]
    fn realized_data_are_never_exceptional(taus in tuples()) {
        let d = taus[0].degree();
        prop_assume!(is_transitive(d, &taus));
        let datum = datum_of(&taus).expect("a realized datum is compatible");
        prop_assert!(datum.is_compatible());
        for v in predicate_verdicts(&datum) {
            prop_assert!(!v.is_exceptional(), "{} fired on a realized datum", v.provenance());
        }
        let v = classify(&datum, DEFAULT_BUDGET).unwrap();
        prop_assert!(matches!(v, Verdict::Realizable { .. }), "{}", v.line(&datum));
        if datum.n() >= 2 {
            match search(&datum, DEFAULT_BUDGET).unwrap().outcome {
                SearchOutcome::Found(w) => prop_assert!(verify_witness(&datum, &w)),
                other => prop_assert!(false, "{datum}: {other:?}"),
            }
        }
    }

    #[test]
    fn dessin_round_trip(taus in (3usize..=7, 3usize..=5).prop_flat_map(|(d, n)| closed_tuple(d, n))) {
        let d = taus[0].degree();
        prop_assume!(is_transitive(d, &taus));
        let r = Realization::new(d, taus.clone()).unwrap();
        let dsn = dessin_from_realization(&r).unwrap();
        let cover = dsn.surface().expect("orientable surface");
        prop_assert_eq!(dsn.euler_characteristic(), cover.euler_characteristic());
        let datum = BranchDatum::new_dropping_trivial(cover, Surface::SPHERE, d, r.cycle_types()).unwrap();
        prop_assert!(datum.is_compatible());
        if datum.n() == taus.len() {
            prop_assert!(validate_against_datum(&dsn, &datum));
        }
        let back = realization_from_dessin(&dsn).unwrap();
        prop_assert!(simultaneous_conjugator(r.taus(), back.taus()).is_some());
        prop_assert!(is_isomorphic(&dsn, &dessin_from_realization(&back).unwrap()));
    }
}
