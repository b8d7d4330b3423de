//! Block systems of transitive permutation groups, the cycle-type groupings
//! they induce, and the factorization of a covering through a block system.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use crate::datum::{infer_cover, BranchDatum};
use crate::partition::Partition;
use crate::perm::{is_transitive, Permutation};
use crate::realizer::{verify_witness, Realization};
use crate::surface::Surface;
use crate::union_find::UnionFind;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BlockError {
    #[error("generators are not transitive")]
    NotTransitive,
    #[error("block order {k} is not a proper divisor of {d}")]
    BadOrder { k: usize, d: usize },
    #[error("block system is not preserved by the permutations")]
    NotPreserved,
    #[error("permutations do not realize the datum")]
    InvalidWitness,
    #[error("no intermediate surface makes the factor data compatible")]
    NoIntermediateSurface,
    #[error("{0}")]
    Precondition(String),
}

/// A partition of `{1..d}` into blocks of equal size `k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BlockDecomposition {
    k: usize,
    /// Block of each point (0-based); blocks numbered by smallest member.
    assignment: Vec<usize>,
}

impl BlockDecomposition {
    /// Builds a decomposition from 1-based blocks.
    pub fn from_blocks(d: usize, blocks: &[Vec<usize>]) -> Result<Self, BlockError> {
        let k = blocks.first().map_or(0, Vec::len);
        if k <= 1 || k >= d || d % k != 0 {
            return Err(BlockError::BadOrder { k, d });
        }
        let mut uf = UnionFind::new(d);
        let mut seen = vec![false; d];
        for b in blocks {
            if b.len() != k {
                return Err(BlockError::Precondition("blocks of unequal size".into()));
            }
            for &x in b {
                if x == 0 || x > d || seen[x - 1] {
                    return Err(BlockError::Precondition(format!("point {x} misplaced")));
                }
                seen[x - 1] = true;
                uf.union(b[0] - 1, x - 1);
            }
        }
        if seen.contains(&false) {
            return Err(BlockError::Precondition("blocks do not cover every point".into()));
        }
        Ok(BlockDecomposition {
            k,
            assignment: uf.labels(),
        })
    }

    fn from_union_find(uf: &mut UnionFind) -> Self {
        let k = uf.class_size(0);
        BlockDecomposition {
            k,
            assignment: uf.labels(),
        }
    }

    pub fn order(&self) -> usize {
        self.k
    }

    pub fn degree(&self) -> usize {
        self.assignment.len()
    }

    pub fn block_count(&self) -> usize {
        self.degree() / self.k
    }

    /// Block id (0-based) of a 0-based point.
    pub fn block_of(&self, x: usize) -> usize {
        self.assignment[x]
    }

    /// Blocks as sorted 1-based point lists, ordered by smallest member.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.block_count()];
        for (x, &b) in self.assignment.iter().enumerate() {
            out[b].push(x + 1);
        }
        out
    }

    pub fn is_preserved_by(&self, p: &Permutation) -> bool {
        self.induced(p).is_some()
    }

    /// The permutation `τ̂` of the blocks, if well defined.
    pub fn induced(&self, p: &Permutation) -> Option<Permutation> {
        if p.degree() != self.degree() {
            return None;
        }
        let mut images = vec![usize::MAX; self.block_count()];
        for x in 0..self.degree() {
            let (from, to) = (self.assignment[x], self.assignment[p.apply(x)]);
            if images[from] == usize::MAX {
                images[from] = to;
            } else if images[from] != to {
                return None;
            }
        }
        Permutation::from_images(&images).ok()
    }

    /// Groups the cycles of `p` by the cycles of `τ̂`: each entry is the
    /// list of cycle lengths lying over one cycle of `τ̂`, with its length.
    pub fn grouping(&self, p: &Permutation) -> Option<Grouping> {
        let hat = self.induced(p)?;
        let mut group_of_block = vec![0; self.block_count()];
        let mut groups = Vec::new();
        for (g, cycle) in hat.cycles().into_iter().enumerate() {
            for &b in &cycle {
                group_of_block[b] = g;
            }
            groups.push((Vec::new(), cycle.len()));
        }
        for cycle in p.cycles() {
            let g = group_of_block[self.assignment[cycle[0]]];
            groups[g].0.push(cycle.len());
        }
        for (parts, _) in &mut groups {
            parts.sort_unstable_by(|a, b| b.cmp(a));
        }
        groups.sort_by(|a, b| b.cmp(a));
        Some(Grouping { groups })
    }
}

impl fmt::Display for BlockDecomposition {
    /// `k=<k> blocks={1,3}{2,4}`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "k={} blocks=", self.k)?;
        for b in self.blocks() {
            let items: Vec<String> = b.iter().map(|x| x.to_string()).collect();
            write!(f, "{{{}}}", items.join(","))?;
        }
        Ok(())
    }
}

/// Cycle lengths split into groups `D_j`, each with its integer `p_j`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Grouping {
    pub groups: Vec<(Vec<usize>, usize)>,
}

impl Grouping {
    /// Cycle type `(p_1, …, p_t)` of the induced block permutation.
    pub fn induced_type(&self) -> Partition {
        Partition::new(self.groups.iter().map(|g| g.1).collect()).expect("non-empty")
    }

    /// Cycle types `(x / p_j)_{x ∈ D_j}` of the restriction to one block,
    /// one per group.
    pub fn block_types(&self) -> Vec<Partition> {
        self.groups
            .iter()
            .map(|(parts, p)| Partition::new(parts.iter().map(|x| x / p).collect()).expect("non-empty"))
            .collect()
    }
}

/// Every way to split the parts of `t` into groups `D_j` with an integer
/// `p_j` dividing each member and `sum(x / p_j) = k`.
pub fn cycle_type_block_groupings(t: &Partition, k: usize) -> Vec<Grouping> {
    let d = t.degree();
    if k <= 1 || k >= d || d % k != 0 {
        return Vec::new();
    }
    let values: Vec<(usize, usize)> = t.multiplicities().into_iter().rev().collect();
    let counts: Vec<usize> = values.iter().map(|v| v.1).collect();
    let mut out = Vec::new();
    split_groups(&values, counts, k, &mut Vec::new(), &mut out);
    out.sort();
    out.dedup();
    out
}

fn split_groups(
    values: &[(usize, usize)],
    counts: Vec<usize>,
    k: usize,
    acc: &mut Vec<(Vec<usize>, usize)>,
    out: &mut Vec<Grouping>,
) {
    let Some(anchor) = counts.iter().position(|&c| c > 0) else {
        let mut groups = acc.clone();
        groups.sort_by(|a, b| b.cmp(a));
        out.push(Grouping { groups });
        return;
    };
    let mut rest = counts.clone();
    rest[anchor] -= 1;
    // companions of the anchor: a sub-multiset of what is left
    let mut take = vec![0; values.len()];
    loop {
        let mut members = vec![values[anchor].0];
        for (i, &t) in take.iter().enumerate() {
            members.extend(std::iter::repeat_n(values[i].0, t));
        }
        let sum: usize = members.iter().sum();
        if sum % k == 0 {
            let p = sum / k;
            if members.iter().all(|x| x % p == 0) {
                let left: Vec<usize> = rest.iter().zip(&take).map(|(r, t)| r - t).collect();
                members.sort_unstable_by(|a, b| b.cmp(a));
                acc.push((members, p));
                split_groups(values, left, k, acc, out);
                acc.pop();
            }
        }
        // odometer over take[i] in 0..=rest[i]
        let mut i = 0;
        loop {
            if i == take.len() {
                return;
            }
            if take[i] < rest[i] {
                take[i] += 1;
                break;
            }
            take[i] = 0;
            i += 1;
        }
    }
}

/// Merges `a` and `b` and closes under the generators, so that the result
/// is the finest block system coarser than the starting partition.
fn close(uf: &mut UnionFind, gens: &[Permutation], seeds: Vec<(usize, usize)>) {
    let mut queue: VecDeque<(usize, usize)> = VecDeque::new();
    for (a, b) in seeds {
        if uf.union(a, b) {
            queue.push_back((a, b));
        }
    }
    while let Some((a, b)) = queue.pop_front() {
        for g in gens {
            let (ga, gb) = (g.apply(a), g.apply(b));
            if uf.union(ga, gb) {
                queue.push_back((ga, gb));
            }
        }
    }
}

/// Finest block system in which `0` and `x` share a block.
fn minimal_system(gens: &[Permutation], d: usize, x: usize) -> BlockDecomposition {
    let mut uf = UnionFind::new(d);
    close(&mut uf, gens, vec![(0, x)]);
    BlockDecomposition::from_union_find(&mut uf)
}

/// Every non-trivial block system of a transitive group, ordered by the
/// block containing the first point.
pub fn all_block_systems(gens: &[Permutation]) -> Result<Vec<BlockDecomposition>, BlockError> {
    let d = gens.first().map_or(0, Permutation::degree);
    if d == 0 || !is_transitive(d, gens) {
        return Err(BlockError::NotTransitive);
    }
    // a system is fixed by its block of the first point
    let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut systems: Vec<BlockDecomposition> = Vec::new();
    let key = |b: &BlockDecomposition| -> Vec<usize> { b.blocks().swap_remove(0) };
    for x in 1..d {
        let m = minimal_system(gens, d, x);
        if m.order() < d && found.insert(key(&m)) {
            systems.push(m);
        }
    }
    // joins of minimal systems give the rest
    let mut i = 0;
    while i < systems.len() {
        for j in 0..i {
            let (fi, fj) = (firsts(&systems[i]), firsts(&systems[j]));
            let seeds: Vec<(usize, usize)> = (0..d)
                .flat_map(|x| [(x, fi[systems[i].assignment[x]]), (x, fj[systems[j].assignment[x]])])
                .collect();
            let mut uf = UnionFind::new(d);
            close(&mut uf, gens, seeds);
            let joined = BlockDecomposition::from_union_find(&mut uf);
            if joined.order() < d && found.insert(key(&joined)) {
                systems.push(joined);
            }
        }
        i += 1;
    }
    systems.sort_by_key(|s| key(s));
    Ok(systems)
}

fn firsts(b: &BlockDecomposition) -> Vec<usize> {
    b.blocks().iter().map(|blk| blk[0] - 1).collect()
}

/// A block system of order `k` preserved by every generator, choosing the
/// one whose block of `1` is lexicographically smallest.
pub fn find_block_decomposition(gens: &[Permutation], k: usize) -> Result<Option<BlockDecomposition>, BlockError> {
    let d = gens.first().map_or(0, Permutation::degree);
    if k <= 1 || k >= d || d % k != 0 {
        return Err(BlockError::BadOrder { k, d });
    }
    Ok(all_block_systems(gens)?.into_iter().find(|b| b.order() == k))
}

/// The two data a decomposable covering factors through: the inner covering
/// of degree `k` onto the intermediate surface, and the outer one of degree
/// `d/k` onto the base. Trivial partitions are dropped from both.
pub fn factor_covering(
    datum: &BranchDatum,
    r: &Realization,
    bd: &BlockDecomposition,
) -> Result<(BranchDatum, BranchDatum), BlockError> {
    if !verify_witness(datum, r) {
        return Err(BlockError::InvalidWitness);
    }
    if bd.degree() != datum.degree() {
        return Err(BlockError::BadOrder {
            k: bd.order(),
            d: datum.degree(),
        });
    }
    let mut inner_parts = Vec::new();
    let mut outer_parts = Vec::new();
    for tau in r.taus() {
        let g = bd.grouping(tau).ok_or(BlockError::NotPreserved)?;
        inner_parts.extend(g.block_types());
        outer_parts.push(g.induced_type());
    }
    let k = bd.order();
    let outer_degree = datum.degree() / k;
    let nontrivial: Vec<Partition> = outer_parts.iter().filter(|p| !p.is_trivial()).cloned().collect();
    for middle in infer_cover(datum.base(), outer_degree, &nontrivial) {
        let outer = BranchDatum::new_dropping_trivial(middle, datum.base(), outer_degree, outer_parts.clone())
            .map_err(|e| BlockError::Precondition(e.to_string()))?;
        let inner = BranchDatum::new_dropping_trivial(datum.cover(), middle, k, inner_parts.clone())
            .map_err(|e| BlockError::Precondition(e.to_string()))?;
        if inner.is_compatible() && outer.is_compatible() {
            return Ok((inner, outer));
        }
    }
    Err(BlockError::NoIntermediateSurface)
}

/// Checks that a witness of a sphere datum with two all-even partitions has
/// a block system of order `d/2` whose outer factor is the degree-2 datum
/// branched over exactly two points.
pub fn verify_filtration(datum: &BranchDatum, r: &Realization) -> Result<bool, BlockError> {
    let d = datum.degree();
    if !datum.base().is_sphere() || !datum.cover().is_sphere() || !datum.is_compatible() {
        return Err(BlockError::Precondition("needs a compatible datum over the sphere with sphere cover".into()));
    }
    if d % 2 == 1 || d < 4 {
        return Err(BlockError::Precondition(format!("degree {d} is not an even number above 2")));
    }
    if datum.partitions().iter().filter(|p| p.all_even()).count() < 2 {
        return Err(BlockError::Precondition("fewer than two partitions with all parts even".into()));
    }
    if !verify_witness(datum, r) {
        return Err(BlockError::InvalidWitness);
    }
    let two = Partition::full_cycle(2);
    for bd in all_block_systems(r.taus())?.into_iter().filter(|b| b.order() == d / 2) {
        let (_, outer) = factor_covering(datum, r, &bd)?;
        if outer.cover() == Surface::SPHERE && outer.partitions() == [two.clone(), two.clone()] {
            return Ok(true);
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::realizer::{search, SearchOutcome, DEFAULT_BUDGET};

    fn part(p: &[usize]) -> Partition {
        Partition::new(p.to_vec()).unwrap()
    }

    fn cyc(d: usize, cycles: &[&[usize]]) -> Permutation {
        Permutation::from_cycles(d, cycles).unwrap()
    }

    fn witness(s: &str) -> (BranchDatum, Realization) {
        let datum: BranchDatum = s.parse().unwrap();
        match search(&datum, DEFAULT_BUDGET).unwrap().outcome {
            SearchOutcome::Found(r) => (datum, r),
            other => panic!("{s}: {other:?}"),
        }
    }

    #[test]
    fn groupings_examples() {
        let g = cycle_type_block_groupings(&part(&[4, 2]), 3);
        assert_eq!(g.len(), 1);
        assert_eq!(g[0].groups, vec![(vec![4, 2], 2)]);
        assert_eq!(g[0].induced_type(), part(&[2]));

        let g = cycle_type_block_groupings(&part(&[6]), 2);
        assert_eq!(g.len(), 1);
        assert_eq!(g[0].induced_type(), part(&[3]));

        assert!(cycle_type_block_groupings(&part(&[3, 1]), 2).is_empty());
        assert!(cycle_type_block_groupings(&part(&[2, 2]), 3).is_empty());

        // (2,2) into blocks of 2: {2},{2} with p=1, or {2,2} with p=2
        let types: Vec<Partition> = cycle_type_block_groupings(&part(&[2, 2]), 2)
            .iter()
            .map(Grouping::induced_type)
            .collect();
        assert_eq!(types.len(), 2);
        assert!(types.contains(&part(&[1, 1])));
        assert!(types.contains(&part(&[2])));
    }

    #[test]
    fn four_cycle_blocks() {
        let b = find_block_decomposition(&[cyc(4, &[&[1, 2, 3, 4]])], 2).unwrap().unwrap();
        assert_eq!(b.blocks(), vec![vec![1, 3], vec![2, 4]]);
        assert_eq!(b.to_string(), "k=2 blocks={1,3}{2,4}");
    }

    #[test]
    fn errors() {
        assert_eq!(
            find_block_decomposition(&[cyc(6, &[&[1, 2, 3, 4], &[5, 6]])], 2),
            Err(BlockError::NotTransitive)
        );
        assert!(matches!(
            find_block_decomposition(&[cyc(4, &[&[1, 2, 3, 4]])], 4),
            Err(BlockError::BadOrder { .. })
        ));
    }

    #[test]
    fn symmetric_group_is_primitive() {
        for d in [4usize, 5] {
            let cycle: Vec<usize> = (1..=d).collect();
            let gens = [cyc(d, &[&cycle]), cyc(d, &[&[1, 2]])];
            assert!(all_block_systems(&gens).unwrap().is_empty());
        }
    }

    #[test]
    fn lattice_of_cyclic_group() {
        // Z/12 has block systems for each proper divisor above one
        let cycle: Vec<usize> = (1..=12).collect();
        let orders: Vec<usize> = all_block_systems(&[cyc(12, &[&cycle])])
            .unwrap()
            .iter()
            .map(BlockDecomposition::order)
            .collect();
        let mut sorted = orders.clone();
        sorted.sort();
        assert_eq!(sorted, vec![2, 3, 4, 6]);
    }

    #[test]
    fn factor_even_datum() {
        let (datum, r) = witness("d=6 cover=O0 base=O0 parts=[3,3|2,2,2|2,2,2]");
        let bd = find_block_decomposition(r.taus(), 3).unwrap().unwrap();
        let (inner, outer) = factor_covering(&datum, &r, &bd).unwrap();
        assert_eq!(outer.to_string(), "d=2 cover=O0 base=O0 parts=[2|2]");
        assert!(inner.is_compatible());
        assert_eq!(inner.degree(), 3);
        assert!(verify_filtration(&datum, &r).unwrap());
    }

    #[test]
    fn factor_rejects_foreign_blocks() {
        let (datum, r) = witness("d=6 cover=O0 base=O0 parts=[3,3|2,2,2|2,2,2]");
        let bogus = BlockDecomposition::from_blocks(6, &[vec![1, 2, 3], vec![4, 5, 6]]).unwrap();
        if !r.taus().iter().all(|t| bogus.is_preserved_by(t)) {
            assert_eq!(factor_covering(&datum, &r, &bogus), Err(BlockError::NotPreserved));
        }
    }

    #[test]
    fn filtration_preconditions() {
        let (datum, r) = witness("d=6 cover=O0 base=O0 parts=[4,1,1|3,2,1|2,2,1,1|2,2,1,1]");
        assert!(matches!(verify_filtration(&datum, &r), Err(BlockError::Precondition(_))));
    }

    #[test]
    fn filtration_eight() {
        let (datum, r) = witness("d=8 cover=O0 base=O0 parts=[4,4|2,2,2,2|2,2,2,2]");
        assert!(verify_filtration(&datum, &r).unwrap());
    }
}
