//! Library results checked against slow, obviously-correct reimplementations.

mod common;

use std::collections::{BTreeSet, HashSet};

use common::*;
use hurwitz_core::blocks::{all_block_systems, find_block_decomposition};
use hurwitz_core::catalog::enumerate_compatible;
use hurwitz_core::realizer::{search, verify_witness, SearchOutcome, DEFAULT_BUDGET};
use hurwitz_core::{class_iterator, infer_cover, partitions_of, BranchDatum, Partition, Surface};

fn sphere_data(d: usize, n_max: usize) -> Vec<BranchDatum> {
    enumerate_compatible(d, 1..=n_max, Surface::SPHERE, Some(Surface::SPHERE))
}

#[test]
fn search_matches_naive_oracle() {
    let mut checked = 0;
    for d in 2..=6 {
        for datum in sphere_data(d, 4) {
            let report = search(&datum, DEFAULT_BUDGET).unwrap();
            let naive = naive_realizable(&datum);
            match report.outcome {
                SearchOutcome::Found(w) => {
                    assert!(naive, "{datum}: search found a witness the oracle missed");
                    assert!(verify_witness(&datum, &w));
                }
                SearchOutcome::Exhausted => assert!(!naive, "{datum}: oracle realizes it"),
                SearchOutcome::BudgetExceeded => panic!("{datum}: budget"),
            }
            checked += 1;
        }
    }
    assert!(checked > 100, "only {checked} data");
}

#[test]
fn naive_oracle_witnesses_are_valid() {
    let datum = sphere(6, &[&[2, 2, 2], &[2, 2, 2], &[3, 3]]);
    let mut count = 0;
    naive_realizations(&datum, |r| {
        assert!(verify_witness(&datum, &r));
        count += 1;
        true
    });
    assert!(count > 0);
}

#[test]
fn search_exhausted_records_reconfirmed() {
    // the data the catalog at d ≤ 8 leaves to exhaustive search
    for s in [
        "d=6 cover=O1 base=O0 parts=[4,2|3,3|3,3]",
        "d=6 cover=O1 base=O0 parts=[3,2,1|2,2,2|2,2,2|2,2,2]",
        "d=8 cover=O2 base=O0 parts=[5,3|2,2,2,2|2,2,2,2|2,2,2,2]",
        "d=8 cover=O1 base=O0 parts=[5,1,1,1|2,2,2,2|2,2,2,2|2,2,2,2]",
        "d=8 cover=O1 base=O0 parts=[3,2,2,1|2,2,2,2|2,2,2,2|2,2,2,2]",
    ] {
        let d = datum(s);
        assert_eq!(search(&d, DEFAULT_BUDGET).unwrap().outcome, SearchOutcome::Exhausted, "{s}");
        assert!(!naive_realizable(&d), "{s}");
    }
}

#[test]
fn class_iterator_counts() {
    for d in 1..=8 {
        for t in partitions_of(d) {
            let mut seen = HashSet::new();
            for p in class_iterator(&t) {
                assert_eq!(p.cycle_type(), t);
                assert!(seen.insert(p.images()), "{t}: repeated element");
            }
            assert_eq!(seen.len() as u128, t.class_size(), "{t}");
        }
    }
}

/// All compatible data over the sphere from ordered tuples of partitions,
/// with the Euler and parity filters written out by hand.
fn brute_compatible(d: usize, n: usize) -> BTreeSet<String> {
    let parts: Vec<Partition> = partitions_of(d).filter(|p| !p.is_trivial()).collect();
    let mut out = BTreeSet::new();
    let mut idx = vec![0usize; n];
    loop {
        let chosen: Vec<Partition> = idx.iter().map(|&i| parts[i].clone()).collect();
        let n_tilde: i64 = chosen.iter().map(|p| p.len() as i64).sum();
        let chi = n_tilde - (n as i64 - 2) * d as i64;
        if chi <= 2 && chi % 2 == 0 {
            let cover = Surface::orientable(((2 - chi) / 2) as u32);
            let datum = BranchDatum::new(cover, Surface::SPHERE, d, chosen).unwrap();
            out.insert(datum.to_string());
        }
        // odometer over ordered tuples
        let mut i = n;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            idx[i] += 1;
            if idx[i] < parts.len() {
                break;
            }
            idx[i] = 0;
        }
    }
}

#[test]
fn enumeration_matches_brute_force() {
    for d in 2..=6 {
        for n in 2..=4 {
            let got: Vec<String> = enumerate_compatible(d, n..=n, Surface::SPHERE, None)
                .iter()
                .map(|x| x.to_string())
                .collect();
            let unique: BTreeSet<String> = got.iter().cloned().collect();
            assert_eq!(unique.len(), got.len(), "d={d} n={n}: duplicates");
            assert_eq!(unique, brute_compatible(d, n), "d={d} n={n}");
        }
    }
}

#[test]
fn infer_cover_over_sphere_is_unique() {
    let p = part(&[3, 3, 3]);
    assert_eq!(infer_cover(Surface::SPHERE, 9, &[p.clone(), p.clone(), p]), [Surface::TORUS]);
}

fn witnesses_up_to(d_max: usize) -> Vec<Vec<hurwitz_core::Permutation>> {
    let mut out = Vec::new();
    for d in 4..=d_max {
        for datum in sphere_data(d, 4) {
            if let SearchOutcome::Found(w) = search(&datum, DEFAULT_BUDGET).unwrap().outcome {
                out.push(w.taus().to_vec());
            }
        }
    }
    out
}

#[test]
fn block_systems_match_brute_force() {
    let tuples = witnesses_up_to(8);
    assert!(tuples.len() > 500);
    for gens in &tuples {
        let d = gens[0].degree();
        let mut expected: Vec<Vec<Vec<usize>>> = Vec::new();
        for k in (2..d).filter(|k| d % k == 0) {
            let brute = brute_block_systems(gens, k);
            let fast = find_block_decomposition(gens, k).unwrap();
            assert_eq!(fast.is_some(), !brute.is_empty(), "k={k} gens={gens:?}");
            if let Some(bd) = fast {
                assert!(brute.contains(&sorted_blocks(&bd)));
            }
            expected.extend(brute);
        }
        let mut all: Vec<Vec<Vec<usize>>> =
            all_block_systems(gens).unwrap().iter().map(sorted_blocks).collect();
        all.sort();
        expected.sort();
        assert_eq!(all, expected, "gens={gens:?}");
    }
}
