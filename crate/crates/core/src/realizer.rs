//! Exhaustive search for permutation witnesses over the sphere, and the
//! reduction of projective-plane data to sphere data.
//!
//! A datum `(cover, S, n, d, partitions)` is realized by permutations
//! `τ1, …, τn` of the prescribed cycle types with `τ1 ∘ τ2 ∘ … ∘ τn = id`
//! generating a transitive group. Simultaneous conjugation preserves every
//! constraint, so the first permutation is pinned to a class representative.

use std::collections::{BTreeSet, HashSet};
use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};

use crate::datum::BranchDatum;
use crate::partition::Partition;
use crate::perm::{
    class_iterator, class_representative, cycle_lengths, is_transitive, representative_centralizer,
    Permutation,
};
use crate::surface::Surface;
use crate::union_find::UnionFind;

pub const DEFAULT_BUDGET: u64 = 1_000_000_000;

/// Classes larger than this are streamed instead of held in memory.
const MATERIALIZE_LIMIT: u128 = 3_000_000;
/// Largest centralizer scanned element by element when a class is streamed.
const STREAMED_CENTRALIZER_LIMIT: usize = 5_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RealizerError {
    #[error("search requires the sphere as base, got {0}")]
    BaseNotSphere(Surface),
    #[error("reduction requires the projective plane as base, got {0}")]
    BaseNotProjective(Surface),
    #[error("cover {0} is not orientable")]
    CoverNonOrientable(Surface),
    #[error("datum is not compatible ({0})")]
    Incompatible(String),
    #[error("degree 2 over the projective plane reduces to the identity covering")]
    DegreeTwoReduction,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RealizationError {
    #[error("permutations of different degrees")]
    DegreeMismatch,
    #[error("product of the permutations is not the identity")]
    ProductNotIdentity,
    #[error("generated group is not transitive")]
    NotTransitive,
}

/// Permutations `τ1, …, τn` with `τ1 ∘ … ∘ τn = id` (rightmost acts first)
/// generating a transitive subgroup of `S_d`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Realization {
    degree: usize,
    taus: Vec<Permutation>,
}

impl Realization {
    pub fn new(degree: usize, taus: Vec<Permutation>) -> Result<Self, RealizationError> {
        if taus.iter().any(|t| t.degree() != degree) {
            return Err(RealizationError::DegreeMismatch);
        }
        if !product(degree, &taus).is_identity() {
            return Err(RealizationError::ProductNotIdentity);
        }
        if !is_transitive(degree, &taus) {
            return Err(RealizationError::NotTransitive);
        }
        Ok(Realization { degree, taus })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn taus(&self) -> &[Permutation] {
        &self.taus
    }

    pub fn cycle_types(&self) -> Vec<Partition> {
        self.taus.iter().map(Permutation::cycle_type).collect()
    }

    /// Rearranges the tuple so that its cycle types follow `order`, using
    /// moves `(a, b) -> (b, b⁻¹ a b)` that keep the product and the group.
    pub fn reordered(&self, order: &[Partition]) -> Option<Realization> {
        if order.len() != self.taus.len() {
            return None;
        }
        let mut taus = self.taus.clone();
        for (i, want) in order.iter().enumerate() {
            let j = (i..taus.len()).find(|&j| taus[j].cycle_type() == *want)?;
            for k in (i..j).rev() {
                let b = taus[k + 1].clone();
                let a = taus[k].conjugate_by(&b.inverse());
                taus[k] = b;
                taus[k + 1] = a;
            }
        }
        Some(Realization {
            degree: self.degree,
            taus,
        })
    }

    /// `tau[i]=<cycles>` lines, 1-based.
    pub fn witness_lines(&self) -> Vec<String> {
        self.taus
            .iter()
            .enumerate()
            .map(|(i, t)| format!("tau[{}]={}", i + 1, t))
            .collect()
    }

    /// Compact single-field form: cycles of each permutation joined by `;`.
    pub fn compact(&self) -> String {
        self.taus
            .iter()
            .map(|t| t.to_string())
            .collect::<Vec<_>>()
            .join(";")
    }

    pub fn parse_compact(s: &str, degree: usize) -> Result<Self, crate::ParseError> {
        let taus = s
            .split(';')
            .map(|c| Permutation::parse_cycles(c, degree))
            .collect::<Result<Vec<_>, _>>()?;
        Realization::new(degree, taus).map_err(|e| crate::ParseError::new(e.to_string()))
    }
}

/// `τ1 ∘ τ2 ∘ … ∘ τn`.
pub fn product(degree: usize, taus: &[Permutation]) -> Permutation {
    taus.iter().fold(Permutation::identity(degree), |acc, t| {
        acc.compose(t).expect("equal degrees")
    })
}

/// Checks that `r` realizes `datum`: trivial product, transitive group, and
/// the multiset of cycle types equal to the datum's partitions.
pub fn verify_witness(datum: &BranchDatum, r: &Realization) -> bool {
    if r.degree != datum.degree() || r.taus.len() != datum.n() {
        return false;
    }
    if r.taus.iter().any(|t| t.degree() != r.degree) {
        return false;
    }
    if !product(r.degree, &r.taus).is_identity() || !is_transitive(r.degree, &r.taus) {
        return false;
    }
    let mut got = r.cycle_types();
    let mut want = datum.partitions().to_vec();
    got.sort();
    want.sort();
    got == want
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(Realization),
    /// The whole search space was covered without a witness.
    Exhausted,
    BudgetExceeded,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchReport {
    pub outcome: SearchOutcome,
    /// Search-tree nodes (candidate permutations) examined.
    pub nodes: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchConfig {
    pub budget: u64,
    pub threads: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            budget: DEFAULT_BUDGET,
            threads: 1,
        }
    }
}

impl SearchConfig {
    pub fn with_budget(budget: u64) -> Self {
        SearchConfig {
            budget,
            ..Self::default()
        }
    }
}

/// Decides realizability of a compatible sphere-based datum by exhaustive
/// search, single-threaded.
pub fn search(datum: &BranchDatum, budget: u64) -> Result<SearchReport, RealizerError> {
    search_with(datum, &SearchConfig::with_budget(budget))
}

pub fn search_with(datum: &BranchDatum, config: &SearchConfig) -> Result<SearchReport, RealizerError> {
    if !datum.base().is_sphere() {
        return Err(RealizerError::BaseNotSphere(datum.base()));
    }
    if !datum.cover().is_orientable() {
        return Err(RealizerError::CoverNonOrientable(datum.cover()));
    }
    let report = datum.check_compatibility();
    if !report.is_compatible() {
        return Err(RealizerError::Incompatible(report.to_string()));
    }

    let d = datum.degree();
    let n = datum.n();
    if n < 2 {
        // n = 0 leaves no generators and n = 1 would need τ1 = id.
        return Ok(SearchReport {
            outcome: SearchOutcome::Exhausted,
            nodes: 0,
        });
    }

    let plan = Plan::new(datum);
    let counter = Counter::new(config.budget);

    let found = if n == 2 {
        counter.tick();
        plan.finish(&plan.anchor_images(), &plan.anchor_orbits, &[])
    } else {
        plan.run(&counter, config.threads.max(1))
    };

    let outcome = match found {
        Some(internal) => {
            let r = Realization::new(d, internal).expect("search yields valid tuples");
            let ordered = r.reordered(datum.partitions()).expect("types match datum");
            SearchOutcome::Found(ordered)
        }
        None if counter.exceeded() => SearchOutcome::BudgetExceeded,
        None => SearchOutcome::Exhausted,
    };
    Ok(SearchReport {
        outcome,
        nodes: counter.nodes(),
    })
}

struct Counter {
    nodes: AtomicU64,
    budget: u64,
    exceeded: AtomicBool,
}

impl Counter {
    fn new(budget: u64) -> Self {
        Counter {
            nodes: AtomicU64::new(0),
            budget,
            exceeded: AtomicBool::new(false),
        }
    }

    /// Counts one node; false once the budget is spent.
    fn tick(&self) -> bool {
        let used = self.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        if used > self.budget {
            self.exceeded.store(true, Ordering::Relaxed);
            return false;
        }
        true
    }

    fn exceeded(&self) -> bool {
        self.exceeded.load(Ordering::Relaxed)
    }

    fn nodes(&self) -> u64 {
        self.nodes.load(Ordering::Relaxed).min(self.budget.saturating_add(1))
    }
}

enum Candidates {
    Listed(Vec<Permutation>),
    /// One member per orbit of the anchor centralizer, produced on demand.
    Orbits {
        class: Partition,
        gens: Vec<Permutation>,
    },
    Streamed {
        class: Partition,
        /// Centralizer elements for orbit-minimality filtering, if small enough.
        filter: Option<Vec<Permutation>>,
    },
}

/// Precomputed search layout. Internal position 0 holds the anchor, positions
/// `1..n-1` are enumerated and position `n-1` is solved from the product.
struct Plan {
    degree: usize,
    types: Vec<Partition>,
    anchor: Permutation,
    anchor_orbits: UnionFind,
    levels: Vec<Candidates>,
    /// Sum of defects of internal positions `j..n`.
    defect_suffix: Vec<usize>,
    /// Largest defect among internal positions `j..n`.
    max_defect_suffix: Vec<usize>,
    target_last: Vec<usize>,
}

enum Step {
    Found(Vec<Permutation>),
    Continue,
    Stop,
}

impl Plan {
    fn new(datum: &BranchDatum) -> Plan {
        let d = datum.degree();
        let n = datum.n();
        let mut types = datum.partitions().to_vec();
        // smallest class first, largest class solved last
        types.sort_by(|a, b| a.class_size().cmp(&b.class_size()).then(b.cmp(a)));

        let anchor = class_representative(&types[0]);
        let anchor_orbits = crate::perm::orbits(d, std::slice::from_ref(&anchor));

        let mut levels = Vec::new();
        for (j, t) in types.iter().enumerate().take(n - 1).skip(1) {
            let cand = if j == 1 {
                level_one_candidates(&types[0], t)
            } else if t.class_size() <= MATERIALIZE_LIMIT {
                Candidates::Listed(class_iterator(t).collect())
            } else {
                Candidates::Streamed {
                    class: t.clone(),
                    filter: None,
                }
            };
            levels.push(cand);
        }

        let mut defect_suffix = vec![0; n + 1];
        let mut max_defect_suffix = vec![0; n + 1];
        for j in (0..n).rev() {
            defect_suffix[j] = defect_suffix[j + 1] + types[j].defect();
            max_defect_suffix[j] = max_defect_suffix[j + 1].max(types[j].defect());
        }
        let target_last = types[n - 1].parts().to_vec();

        Plan {
            degree: d,
            types,
            anchor,
            anchor_orbits,
            levels,
            defect_suffix,
            max_defect_suffix,
            target_last,
        }
    }

    fn n(&self) -> usize {
        self.types.len()
    }

    fn anchor_images(&self) -> Vec<u8> {
        self.anchor.raw().to_vec()
    }

    /// Splits level-one candidates over worker threads; the witness reported
    /// is the one under the lowest-indexed candidate, as in a serial run.
    fn run(&self, counter: &Counter, threads: usize) -> Option<Vec<Permutation>> {
        let product0 = self.anchor_images();
        let listed;
        let first = match &self.levels[0] {
            Candidates::Orbits { class, gens } if threads > 1 => {
                listed = Candidates::Listed(OrbitReps::new(class, gens).collect());
                &listed
            }
            other => other,
        };
        match first {
            Candidates::Listed(list) if threads > 1 && list.len() > 1 => {
                let next = AtomicUsize::new(0);
                let best = AtomicUsize::new(usize::MAX);
                let results = std::sync::Mutex::new(Vec::new());
                std::thread::scope(|scope| {
                    for _ in 0..threads {
                        scope.spawn(|| loop {
                            let i = next.fetch_add(1, Ordering::Relaxed);
                            if i >= list.len() || i > best.load(Ordering::Relaxed) || counter.exceeded() {
                                break;
                            }
                            match self.try_candidate(1, &product0, &self.anchor_orbits, &mut Vec::new(), &list[i], counter) {
                                Step::Found(w) => {
                                    best.fetch_min(i, Ordering::Relaxed);
                                    results.lock().unwrap().push((i, w));
                                }
                                Step::Stop => break,
                                Step::Continue => {}
                            }
                        });
                    }
                });
                let mut results = results.into_inner().unwrap();
                results.sort_by_key(|(i, _)| *i);
                results.into_iter().next().map(|(_, w)| w)
            }
            _ => match self.extend(1, &product0, &self.anchor_orbits, &mut Vec::new(), counter) {
                Step::Found(w) => Some(w),
                _ => None,
            },
        }
    }

    /// Enumerates internal position `level` given the partial product of
    /// positions `0..level`.
    fn extend(
        &self,
        level: usize,
        partial: &[u8],
        orbits: &UnionFind,
        chosen: &mut Vec<Permutation>,
        counter: &Counter,
    ) -> Step {
        match &self.levels[level - 1] {
            Candidates::Listed(list) => {
                for tau in list {
                    match self.try_candidate(level, partial, orbits, chosen, tau, counter) {
                        Step::Continue => {}
                        other => return other,
                    }
                }
            }
            Candidates::Orbits { class, gens } => {
                for tau in OrbitReps::new(class, gens) {
                    match self.try_candidate(level, partial, orbits, chosen, &tau, counter) {
                        Step::Continue => {}
                        other => return other,
                    }
                }
            }
            Candidates::Streamed { class, filter } => {
                for tau in class_iterator(class) {
                    if let Some(cent) = filter {
                        if !is_orbit_minimal(&tau, cent) {
                            continue;
                        }
                    }
                    match self.try_candidate(level, partial, orbits, chosen, &tau, counter) {
                        Step::Continue => {}
                        other => return other,
                    }
                }
            }
        }
        Step::Continue
    }

    fn try_candidate(
        &self,
        level: usize,
        partial: &[u8],
        orbits: &UnionFind,
        chosen: &mut Vec<Permutation>,
        tau: &Permutation,
        counter: &Counter,
    ) -> Step {
        if !counter.tick() {
            return Step::Stop;
        }
        let n = self.n();
        let d = self.degree;
        let t = tau.raw();
        let next: Vec<u8> = t.iter().map(|&y| partial[y as usize]).collect();

        if level == n - 2 {
            // Last enumerated position: the remaining permutation is forced.
            let mut lengths = cycle_lengths(&next);
            if lengths.len() != self.target_last.len() {
                return Step::Continue;
            }
            lengths.sort_unstable_by(|a, b| b.cmp(a));
            if lengths != self.target_last {
                return Step::Continue;
            }
            let mut uf = orbits.clone();
            for x in 0..d {
                uf.union(x, t[x] as usize);
            }
            chosen.push(tau.clone());
            let result = self.finish(&next, &uf, chosen);
            chosen.pop();
            return match result {
                Some(w) => Step::Found(w),
                None => Step::Continue,
            };
        }

        // Partial product must be reachable by the remaining factors.
        let remaining = self.defect_suffix[level + 1];
        let defect = d - cycle_lengths(&next).len();
        if defect > remaining {
            return Step::Continue;
        }
        let mut uf = orbits.clone();
        for x in 0..d {
            uf.union(x, t[x] as usize);
        }
        // Any one remaining factor is redundant as a generator.
        if uf.classes() - 1 > remaining - self.max_defect_suffix[level + 1] {
            return Step::Continue;
        }
        chosen.push(tau.clone());
        let step = self.extend(level + 1, &next, &uf, chosen, counter);
        if let Step::Found(_) = step {
            return step;
        }
        chosen.pop();
        step
    }

    /// Closes the tuple with the inverse of the full product.
    fn finish(&self, full: &[u8], orbits: &UnionFind, chosen: &[Permutation]) -> Option<Vec<Permutation>> {
        if orbits.classes() != 1 {
            return None;
        }
        let last = Permutation::from_images_unchecked(full.to_vec()).inverse();
        if last.cycle_type() != self.types[self.n() - 1] {
            return None;
        }
        let mut taus = Vec::with_capacity(self.n());
        taus.push(self.anchor.clone());
        taus.extend(chosen.iter().cloned());
        taus.push(last);
        Some(taus)
    }
}

/// Candidates for the first enumerated position, one per orbit of the
/// anchor's centralizer acting by conjugation.
fn level_one_candidates(anchor_type: &Partition, t: &Partition) -> Candidates {
    if t.class_size() <= MATERIALIZE_LIMIT && t.degree() <= PACK_DEGREE {
        Candidates::Orbits {
            class: t.clone(),
            gens: centralizer_generators(anchor_type),
        }
    } else {
        let cent_size = crate::partition::factorial(anchor_type.degree()) / anchor_type.class_size();
        let filter = (cent_size <= STREAMED_CENTRALIZER_LIMIT as u128)
            .then(|| representative_centralizer(anchor_type));
        Candidates::Streamed {
            class: t.clone(),
            filter,
        }
    }
}

const PACK_DEGREE: usize = 25;

/// Images packed five bits per point.
fn pack(images: &[u8]) -> u128 {
    images.iter().fold(0u128, |acc, &x| (acc << 5) | x as u128)
}

/// Walks a class and yields its first member from each orbit under
/// conjugation by the group generated by `gens`.
struct OrbitReps<'a> {
    class: crate::perm::ClassIter,
    gens: &'a [Permutation],
    seen: HashSet<u128>,
}

impl<'a> OrbitReps<'a> {
    fn new(class: &Partition, gens: &'a [Permutation]) -> Self {
        OrbitReps {
            class: class_iterator(class),
            gens,
            seen: HashSet::new(),
        }
    }
}

impl Iterator for OrbitReps<'_> {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        for tau in self.class.by_ref() {
            if !self.seen.insert(pack(tau.raw())) {
                continue;
            }
            let mut stack = vec![tau.clone()];
            while let Some(p) = stack.pop() {
                for g in self.gens {
                    let q = p.conjugate_by(g);
                    if self.seen.insert(pack(q.raw())) {
                        stack.push(q);
                    }
                }
            }
            return Some(tau);
        }
        None
    }
}

/// Generators of the centralizer of the class representative: one rotation
/// per cycle and one swap per pair of adjacent equal-length cycles.
fn centralizer_generators(t: &Partition) -> Vec<Permutation> {
    let d = t.degree();
    let mut gens = Vec::new();
    let mut start = 0;
    let mut prev: Option<(usize, usize)> = None;
    for &len in t.parts() {
        if len > 1 {
            let mut images: Vec<usize> = (0..d).collect();
            for i in 0..len {
                images[start + i] = start + (i + 1) % len;
            }
            gens.push(Permutation::from_images(&images).expect("rotation"));
        }
        if let Some((s0, l0)) = prev {
            if l0 == len {
                let mut images: Vec<usize> = (0..d).collect();
                for i in 0..len {
                    images[s0 + i] = start + i;
                    images[start + i] = s0 + i;
                }
                gens.push(Permutation::from_images(&images).expect("swap"));
            }
        }
        prev = Some((start, len));
        start += len;
    }
    gens
}

fn is_orbit_minimal(tau: &Permutation, centralizer: &[Permutation]) -> bool {
    centralizer.iter().all(|g| tau.conjugate_by(g).raw() >= tau.raw())
}

/// Every sphere datum obtained by splitting each partition of a datum over
/// the projective plane with orientable cover into two partitions of `d/2`.
///
/// The original datum is realizable exactly when one of the returned data is.
/// Trivial halves are dropped and duplicates removed; the result is sorted.
pub fn reduce_projective(datum: &BranchDatum) -> Result<Vec<BranchDatum>, RealizerError> {
    if !datum.base().is_projective_plane() {
        return Err(RealizerError::BaseNotProjective(datum.base()));
    }
    if !datum.cover().is_orientable() {
        return Err(RealizerError::CoverNonOrientable(datum.cover()));
    }
    let report = datum.check_compatibility();
    if !report.is_compatible() {
        return Err(RealizerError::Incompatible(report.to_string()));
    }
    let half = datum.degree() / 2;
    if half < 2 {
        return Err(RealizerError::DegreeTwoReduction);
    }

    let choices: Vec<Vec<(Partition, Partition)>> =
        datum.partitions().iter().map(half_splits).collect();

    let mut out = BTreeSet::new();
    let mut index = vec![0usize; choices.len()];
    loop {
        let mut parts = Vec::with_capacity(2 * choices.len());
        for (c, &i) in choices.iter().zip(&index) {
            parts.push(c[i].0.clone());
            parts.push(c[i].1.clone());
        }
        let reduced = BranchDatum::new_dropping_trivial(datum.cover(), Surface::SPHERE, half, parts)
            .expect("halves have degree d/2");
        out.insert(reduced);

        // odometer over the split choices
        let mut k = 0;
        loop {
            if k == index.len() {
                return Ok(out.into_iter().collect());
            }
            index[k] += 1;
            if index[k] < choices[k].len() {
                break;
            }
            index[k] = 0;
            k += 1;
        }
    }
}

/// Unordered splittings of `p` into two partitions of half its degree, with
/// the lexicographically larger half first.
pub fn half_splits(p: &Partition) -> Vec<(Partition, Partition)> {
    let half = p.degree() / 2;
    let values: Vec<(usize, usize)> = p.multiplicities().into_iter().rev().collect();
    let mut out = Vec::new();
    let mut take = vec![0usize; values.len()];
    collect_splits(&values, 0, half, &mut take, &mut out);
    out.retain(|(a, b)| a >= b);
    out
}

fn collect_splits(
    values: &[(usize, usize)],
    i: usize,
    remaining: usize,
    take: &mut Vec<usize>,
    out: &mut Vec<(Partition, Partition)>,
) {
    if i == values.len() {
        if remaining == 0 {
            let mut a = Vec::new();
            let mut b = Vec::new();
            for (&(v, c), &t) in values.iter().zip(take.iter()) {
                a.extend(std::iter::repeat_n(v, t));
                b.extend(std::iter::repeat_n(v, c - t));
            }
            if let (Ok(a), Ok(b)) = (Partition::new(a), Partition::new(b)) {
                out.push((a, b));
            }
        }
        return;
    }
    let (v, c) = values[i];
    for t in 0..=c {
        if t * v > remaining {
            break;
        }
        take[i] = t;
        collect_splits(values, i + 1, remaining - t * v, take, out);
    }
    take[i] = 0;
}
