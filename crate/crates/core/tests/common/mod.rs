#![allow(dead_code)]

use hurwitz_core::blocks::BlockDecomposition;
use hurwitz_core::realizer::Realization;
use hurwitz_core::{class_iterator, class_representative, is_transitive, BranchDatum, Partition, Permutation};

pub fn datum(s: &str) -> BranchDatum {
    s.parse().unwrap_or_else(|e| panic!("{s}: {e}"))
}

pub fn part(p: &[usize]) -> Partition {
    Partition::new(p.to_vec()).unwrap()
}

pub fn sphere(d: usize, parts: &[&[usize]]) -> BranchDatum {
    let parts = parts.iter().map(|p| part(p)).collect();
    BranchDatum::new(hurwitz_core::Surface::SPHERE, hurwitz_core::Surface::SPHERE, d, parts).unwrap()
}

/// Brute-force realization finder: the first permutation is pinned to its
/// class representative, the last is solved for, and every element of the
/// remaining classes is tried. Calls `found` for each realization (in the
/// datum's partition order) and stops once it returns false.
pub fn naive_realizations(datum: &BranchDatum, mut found: impl FnMut(Realization) -> bool) {
    let d = datum.degree();
    let parts = datum.partitions();
    let n = parts.len();
    if n < 2 {
        return;
    }
    // pin the largest class, solve for the second largest
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(parts[i].class_size()));
    let first = class_representative(&parts[order[0]]);
    let last = order[1];
    let middle: Vec<usize> = order[2..].to_vec();

    // tuple in the order first, middle..., last; product must be trivial
    fn rec(
        d: usize,
        parts: &[Partition],
        middle: &[usize],
        last: usize,
        acc: &mut Vec<Permutation>,
        prod: &Permutation,
        found: &mut dyn FnMut(Realization) -> bool,
    ) -> bool {
        if let Some((&i, rest)) = middle.split_first() {
            for p in class_iterator(&parts[i]) {
                let next = prod.compose(&p).unwrap();
                acc.push(p);
                let go = rec(d, parts, rest, last, acc, &next, found);
                acc.pop();
                if !go {
                    return false;
                }
            }
            return true;
        }
        let closing = prod.inverse();
        if closing.cycle_type() != parts[last] {
            return true;
        }
        acc.push(closing);
        let mut go = true;
        if is_transitive(d, acc) {
            let r = Realization::new(d, acc.clone()).expect("valid tuple");
            let r = r.reordered(parts).expect("same cycle types");
            go = found(r);
        }
        acc.pop();
        go
    }

    let mut acc = vec![first.clone()];
    rec(d, parts, &middle, last, &mut acc, &first, &mut found);
}

pub fn naive_realizable(datum: &BranchDatum) -> bool {
    let mut any = false;
    naive_realizations(datum, |_| {
        any = true;
        false
    });
    any
}

/// Every partition of `0..d` into blocks of size `k`, by brute force.
pub fn equal_set_partitions(d: usize, k: usize) -> Vec<Vec<Vec<usize>>> {
    fn rec(left: Vec<usize>, k: usize, acc: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        let Some((&head, rest)) = left.split_first() else {
            out.push(acc.clone());
            return;
        };
        // choose k-1 companions for the smallest remaining point
        let rest = rest.to_vec();
        let mut pick = Vec::new();
        fn choose(
            from: &[usize],
            need: usize,
            pick: &mut Vec<usize>,
            cb: &mut dyn FnMut(&[usize]),
        ) {
            if need == 0 {
                cb(pick);
                return;
            }
            for i in 0..from.len() {
                pick.push(from[i]);
                choose(&from[i + 1..], need - 1, pick, cb);
                pick.pop();
            }
        }
        let mut choices = Vec::new();
        choose(&rest, k - 1, &mut pick, &mut |c| choices.push(c.to_vec()));
        for c in choices {
            let mut block = vec![head];
            block.extend(&c);
            let remaining: Vec<usize> = rest.iter().copied().filter(|x| !c.contains(x)).collect();
            acc.push(block);
            rec(remaining, k, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    if k == 0 || d % k != 0 {
        return out;
    }
    rec((0..d).collect(), k, &mut Vec::new(), &mut out);
    out
}

/// Block systems of order `k` preserved by all generators, found by scanning
/// every equal-size set partition. Blocks are 0-based, sorted.
pub fn brute_block_systems(gens: &[Permutation], k: usize) -> Vec<Vec<Vec<usize>>> {
    let d = gens[0].degree();
    equal_set_partitions(d, k)
        .into_iter()
        .filter(|blocks| {
            let mut id = vec![0; d];
            for (b, block) in blocks.iter().enumerate() {
                for &x in block {
                    id[x] = b;
                }
            }
            gens.iter().all(|g| {
                blocks.iter().all(|block| {
                    let target = id[g.apply(block[0])];
                    block.iter().all(|&x| id[g.apply(x)] == target)
                })
            })
        })
        .collect()
}

pub fn sorted_blocks(bd: &BlockDecomposition) -> Vec<Vec<usize>> {
    let mut blocks: Vec<Vec<usize>> = bd
        .blocks()
        .into_iter()
        .map(|b| {
            let mut b: Vec<usize> = b.into_iter().map(|x| x - 1).collect();
            b.sort();
            b
        })
        .collect();
    blocks.sort();
    blocks
}
