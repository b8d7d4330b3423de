//! Closed-form sufficient conditions for realizability and for
//! exceptionality, and the classifier that combines them with search.
//!
//! Every predicate takes a datum, returns `None` when its hypotheses do not
//! apply (including when the datum is incompatible) and otherwise a verdict
//! tagged with its origin. Hypotheses that single out particular branching
//! points are matched against every choice of partitions.

use std::fmt;

use crate::datum::{BranchDatum, CompatibilityReport};
use crate::partition::Partition;
use crate::realizer::{self, Realization, SearchConfig, SearchOutcome};
use crate::surface::Surface;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Tag {
    ThmOO,
    ThmNN,
    ThmON,
    ThmNP,
    FullCycle,
    EksBound,
    EksDegreeFour,
    Eks222,
    LongCycles,
    NAtLeastD,
    SmallParts,
    Prop53,
    Prop23,
    Fixpoints,
    EvenDegree,
    Mixed,
    OddDivisible,
    Transpositions,
    SearchFound,
    SearchExhausted,
    SearchBudget,
    ReductionFound,
    ReductionExhausted,
    ReductionBudget,
    OrientationCover,
}

impl Tag {
    pub const ALL: [Tag; 25] = [
        Tag::ThmOO,
        Tag::ThmNN,
        Tag::ThmON,
        Tag::ThmNP,
        Tag::FullCycle,
        Tag::EksBound,
        Tag::EksDegreeFour,
        Tag::Eks222,
        Tag::LongCycles,
        Tag::NAtLeastD,
        Tag::SmallParts,
        Tag::Prop53,
        Tag::Prop23,
        Tag::Fixpoints,
        Tag::EvenDegree,
        Tag::Mixed,
        Tag::OddDivisible,
        Tag::Transpositions,
        Tag::SearchFound,
        Tag::SearchExhausted,
        Tag::SearchBudget,
        Tag::ReductionFound,
        Tag::ReductionExhausted,
        Tag::ReductionBudget,
        Tag::OrientationCover,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Tag::ThmOO => "Thm-OO",
            Tag::ThmNN => "Thm-NN",
            Tag::ThmON => "Thm-ON",
            Tag::ThmNP => "Thm-NP",
            Tag::FullCycle => "Thm-full-cycle",
            Tag::EksBound => "Thm-EKS-bound",
            Tag::EksDegreeFour => "Thm-EKS-d4",
            Tag::Eks222 => "Prop-EKS-222",
            Tag::LongCycles => "Prop-long-cycles",
            Tag::NAtLeastD => "Prop-n-ge-d",
            Tag::SmallParts => "Prop-small-parts",
            Tag::Prop53 => "Prop-53",
            Tag::Prop23 => "Prop-23",
            Tag::Fixpoints => "Thm-fixpoints",
            Tag::EvenDegree => "Thm-even-deg",
            Tag::Mixed => "Cor-mixed",
            Tag::OddDivisible => "Thm-odd-div",
            Tag::Transpositions => "Lemma-transpos",
            Tag::SearchFound => "search-found",
            Tag::SearchExhausted => "search-exhausted",
            Tag::SearchBudget => "search-budget",
            Tag::ReductionFound => "reduction-found",
            Tag::ReductionExhausted => "reduction-exhausted",
            Tag::ReductionBudget => "reduction-budget",
            Tag::OrientationCover => "orientation-cover",
        }
    }

    /// Whether the verdict came from a closed-form predicate.
    pub fn is_predicate(self) -> bool {
        !matches!(
            self,
            Tag::SearchFound
                | Tag::SearchExhausted
                | Tag::SearchBudget
                | Tag::ReductionFound
                | Tag::ReductionExhausted
                | Tag::ReductionBudget
                | Tag::OrientationCover
        )
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Tag {
    type Err = crate::ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Tag::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| crate::ParseError::new(format!("unknown tag `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarity {
    Realizable,
    Exceptional,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Incompatible(CompatibilityReport),
    Realizable {
        tag: Tag,
        /// Predicates of the same polarity that fired, including `tag`.
        agreeing: usize,
        witness: Option<Realization>,
    },
    Exceptional {
        tag: Tag,
        agreeing: usize,
    },
    /// The search budget ran out.
    Unknown {
        tag: Tag,
    },
}

impl Verdict {
    fn realizable(tag: Tag) -> Verdict {
        Verdict::Realizable {
            tag,
            agreeing: 1,
            witness: None,
        }
    }

    fn exceptional(tag: Tag) -> Verdict {
        Verdict::Exceptional { tag, agreeing: 1 }
    }

    pub fn keyword(&self) -> &'static str {
        match self {
            Verdict::Incompatible(_) => "INCOMPATIBLE",
            Verdict::Realizable { .. } => "REALIZABLE",
            Verdict::Exceptional { .. } => "EXCEPTIONAL",
            Verdict::Unknown { .. } => "UNKNOWN",
        }
    }

    pub fn tag(&self) -> Option<Tag> {
        match self {
            Verdict::Incompatible(_) => None,
            Verdict::Realizable { tag, .. } | Verdict::Exceptional { tag, .. } | Verdict::Unknown { tag } => {
                Some(*tag)
            }
        }
    }

    /// Tag text, with `cond-<list>` for incompatible data.
    pub fn provenance(&self) -> String {
        match self {
            Verdict::Incompatible(r) => {
                let list: Vec<String> = r.violated().iter().map(|c| c.to_string()).collect();
                format!("cond-{}", list.join(","))
            }
            other => other.tag().expect("tagged").to_string(),
        }
    }

    pub fn agreeing(&self) -> usize {
        match self {
            Verdict::Realizable { agreeing, .. } | Verdict::Exceptional { agreeing, .. } => *agreeing,
            _ => 0,
        }
    }

    pub fn polarity(&self) -> Option<Polarity> {
        match self {
            Verdict::Realizable { .. } => Some(Polarity::Realizable),
            Verdict::Exceptional { .. } => Some(Polarity::Exceptional),
            _ => None,
        }
    }

    pub fn witness(&self) -> Option<&Realization> {
        match self {
            Verdict::Realizable { witness, .. } => witness.as_ref(),
            _ => None,
        }
    }

    pub fn is_realizable(&self) -> bool {
        matches!(self, Verdict::Realizable { .. })
    }

    pub fn is_exceptional(&self) -> bool {
        matches!(self, Verdict::Exceptional { .. })
    }

    /// `<datum> <VERDICT> tag=<tag>[ witness=<c1;c2;…>]`
    pub fn line(&self, datum: &BranchDatum) -> String {
        let mut s = format!("{datum} {} tag={}", self.keyword(), self.provenance());
        if let Some(w) = self.witness() {
            s.push_str(" witness=");
            s.push_str(&w.compact());
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CriteriaError {
    #[error("consistency fault on {datum}: {realizable} says realizable, {exceptional} says exceptional")]
    ConsistencyFault {
        datum: String,
        realizable: Tag,
        exceptional: Tag,
    },
}

pub type Predicate = fn(&BranchDatum) -> Option<Verdict>;

/// All predicates in evaluation order.
pub const PREDICATES: [(&str, Predicate); 13] = [
    ("thm_chi_nonpositive", thm_chi_nonpositive),
    ("thm_projective", thm_projective),
    ("thm_full_cycle", thm_full_cycle),
    ("thm_eks_large", thm_eks_large),
    ("prop_eks_222", prop_eks_222),
    ("prop_baranski", prop_baranski),
    ("prop_53", prop_53),
    ("prop_23", prop_23),
    ("thm_fixpoints", thm_fixpoints),
    ("thm_even_deg", thm_even_deg),
    ("cor_mixed", cor_mixed),
    ("thm_odd_divisible", thm_odd_divisible),
    ("lemma_transpos", lemma_transpos),
];

fn sphere_over_sphere(datum: &BranchDatum) -> bool {
    datum.is_compatible() && datum.base().is_sphere() && datum.cover().is_sphere()
}

fn twos(d: usize) -> Partition {
    Partition::uniform(2, d / 2)
}

/// `lead` followed by `(2,…,2)` and then `tail`, as a partition of `d`.
fn padded(lead: &[usize], tail: &[usize], d: usize) -> Option<Partition> {
    let used: usize = lead.iter().chain(tail).sum();
    if used > d || (d - used) % 2 == 1 {
        return None;
    }
    let mut parts = lead.to_vec();
    parts.extend(std::iter::repeat_n(2, (d - used) / 2));
    parts.extend_from_slice(tail);
    Partition::new(parts).ok()
}

/// `(a,1,…,1)` with `a > 1`: returns `a`.
fn single_cycle_length(p: &Partition) -> Option<usize> {
    let parts = p.parts();
    (parts[0] > 1 && parts[1..].iter().all(|&x| x == 1)).then_some(parts[0])
}

pub fn thm_chi_nonpositive(datum: &BranchDatum) -> Option<Verdict> {
    if !datum.is_compatible() || datum.base().euler_characteristic() > 0 {
        return None;
    }
    let tag = match (datum.base().is_orientable(), datum.cover().is_orientable()) {
        (true, _) => Tag::ThmOO,
        (false, false) => Tag::ThmNN,
        (false, true) => Tag::ThmON,
    };
    Some(Verdict::realizable(tag))
}

pub fn thm_projective(datum: &BranchDatum) -> Option<Verdict> {
    (datum.is_compatible() && datum.base().is_projective_plane() && !datum.cover().is_orientable())
        .then(|| Verdict::realizable(Tag::ThmNP))
}

pub fn thm_full_cycle(datum: &BranchDatum) -> Option<Verdict> {
    let d = datum.degree();
    (datum.is_compatible() && datum.partitions().iter().any(|p| p.parts() == [d]))
        .then(|| Verdict::realizable(Tag::FullCycle))
}

pub fn thm_eks_large(datum: &BranchDatum) -> Option<Verdict> {
    if !datum.is_compatible() || !datum.base().is_sphere() {
        return None;
    }
    let d = datum.degree();
    let n = datum.n();
    if d == 4 {
        let mut ps = datum.partitions().to_vec();
        ps.sort();
        let mut expected = vec![Partition::uniform(2, 2); n.saturating_sub(1)];
        expected.push(Partition::new(vec![3, 1]).expect("valid"));
        expected.sort();
        return Some(if n >= 1 && ps == expected {
            Verdict::exceptional(Tag::EksDegreeFour)
        } else {
            Verdict::realizable(Tag::EksDegreeFour)
        });
    }
    (n * d - datum.n_tilde() >= 3 * (d - 1)).then(|| Verdict::realizable(Tag::EksBound))
}

pub fn prop_eks_222(datum: &BranchDatum) -> Option<Verdict> {
    let d = datum.degree();
    if !sphere_over_sphere(datum) || datum.n() != 3 || d % 2 == 1 {
        return None;
    }
    let ps = datum.partitions();
    let t = twos(d);
    for third in 0..3 {
        let others: Vec<&Partition> = (0..3).filter(|&i| i != third).map(|i| &ps[i]).collect();
        if others.iter().all(|p| **p == t) && ps[third].len() == 2 {
            let x = ps[third].parts()[0];
            return Some(if x == d / 2 {
                Verdict::realizable(Tag::Eks222)
            } else {
                Verdict::exceptional(Tag::Eks222)
            });
        }
    }
    None
}

/// Whether some `r` of the part counts sum to `(r-1)d + 1`.
fn has_long_cycle_subset(counts: &[usize], d: usize) -> bool {
    let n = counts.len();
    let total: usize = counts.iter().sum();
    // reachable[r][s]: some r counts sum to s
    let mut reachable = vec![vec![false; total + 1]; n + 1];
    reachable[0][0] = true;
    for &m in counts {
        for r in (0..n).rev() {
            for s in (0..=total - m).rev() {
                if reachable[r][s] {
                    reachable[r + 1][s + m] = true;
                }
            }
        }
    }
    (1..=n).any(|r| {
        let target = (r - 1) * d + 1;
        target <= total && reachable[r][target]
    })
}

pub fn prop_baranski(datum: &BranchDatum) -> Option<Verdict> {
    if !sphere_over_sphere(datum) {
        return None;
    }
    let d = datum.degree();
    let ps = datum.partitions();
    let counts: Vec<usize> = ps.iter().map(Partition::len).collect();
    if has_long_cycle_subset(&counts, d) {
        return Some(Verdict::realizable(Tag::LongCycles));
    }
    if datum.n() >= d {
        return Some(Verdict::realizable(Tag::NAtLeastD));
    }
    // m_i >= d - sqrt(d/2)  <=>  2 (d - m_i)^2 <= d
    let small = ps
        .iter()
        .all(|p| p.largest() <= 2 && 2 * (d - p.len()).pow(2) <= d);
    small.then(|| Verdict::realizable(Tag::SmallParts))
}

pub fn prop_53(datum: &BranchDatum) -> Option<Verdict> {
    let d = datum.degree();
    if !datum.is_compatible() || !datum.base().is_sphere() || datum.n() != 3 || d < 8 || d % 2 == 1 {
        return None;
    }
    let ps = datum.partitions();
    let t = twos(d);
    let five_three = padded(&[5, 3], &[], d)?;
    for i in 0..3 {
        for j in 0..3 {
            if i == j || ps[i] != t || ps[j] != five_three {
                continue;
            }
            let third = ps[3 - i - j].parts();
            let cover = datum.cover();
            if cover == Surface::TORUS && third.len() == 2 {
                let bad = third == [d / 2, d / 2];
                return Some(verdict_by(bad, Tag::Prop53));
            }
            if cover.is_sphere() && third.len() == 4 {
                let paired = third[0] == third[1] && third[2] == third[3] && third[0] + third[2] == d / 2;
                let sixths = d % 6 == 0 && third == [d / 2, d / 6, d / 6, d / 6];
                return Some(verdict_by(paired || sixths, Tag::Prop53));
            }
        }
    }
    None
}

fn verdict_by(exceptional: bool, tag: Tag) -> Verdict {
    if exceptional {
        Verdict::exceptional(tag)
    } else {
        Verdict::realizable(tag)
    }
}

pub fn prop_23(datum: &BranchDatum) -> Option<Verdict> {
    let d = datum.degree();
    if !sphere_over_sphere(datum) || datum.n() != 3 || d % 2 == 1 {
        return None;
    }
    let ps = datum.partitions();
    let t = twos(d);
    let shapes: Vec<Partition> = [padded(&[3, 3], &[], d), padded(&[3], &[1], d)]
        .into_iter()
        .flatten()
        .collect();
    for i in 0..3 {
        for j in 0..3 {
            if i == j || ps[i] != t || !shapes.contains(&ps[j]) {
                continue;
            }
            let third = &ps[3 - i - j];
            return Some(verdict_by(third.largest() == d / 2, Tag::Prop23));
        }
    }
    None
}

fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
}

pub fn thm_fixpoints(datum: &BranchDatum) -> Option<Verdict> {
    if !sphere_over_sphere(datum) {
        return None;
    }
    let d = datum.degree();
    let ps = datum.partitions();
    for k in (2..d).filter(|k| d % k == 0) {
        for (i, j) in pairs(ps.len()) {
            if !ps[i].all_divisible_by(k) || !ps[j].all_divisible_by(k) {
                continue;
            }
            let violated = ps
                .iter()
                .enumerate()
                .any(|(l, p)| l != i && l != j && p.largest() > d / k);
            if violated {
                return Some(Verdict::exceptional(Tag::Fixpoints));
            }
        }
    }
    None
}

pub fn thm_even_deg(datum: &BranchDatum) -> Option<Verdict> {
    let d = datum.degree();
    if !sphere_over_sphere(datum) || d % 2 == 1 {
        return None;
    }
    let ps = datum.partitions();
    for (i, j) in pairs(ps.len()) {
        if !ps[i].all_even() || !ps[j].all_even() {
            continue;
        }
        let violated = ps.iter().enumerate().any(|(l, p)| {
            l != i && l != j && !p.refines_two_halves().expect("even degree")
        });
        if violated {
            return Some(Verdict::exceptional(Tag::EvenDegree));
        }
    }
    None
}

pub fn cor_mixed(datum: &BranchDatum) -> Option<Verdict> {
    let d = datum.degree();
    if !sphere_over_sphere(datum) {
        return None;
    }
    let ps = datum.partitions();
    let n = ps.len();
    for k in (2..).take_while(|&k| 2 * k < d).filter(|k| d % (2 * k) == 0) {
        for first in 0..n {
            if !ps[first].all_divisible_by(k) {
                continue;
            }
            for (j, l) in pairs(n) {
                if j == first || l == first || !ps[j].all_even() || !ps[l].all_even() {
                    continue;
                }
                let violated = ps.iter().enumerate().any(|(x, p)| {
                    if x == first {
                        false
                    } else if x == j || x == l {
                        p.largest() > d / k
                    } else {
                        p.largest() > d / (2 * k)
                    }
                });
                if violated {
                    return Some(Verdict::exceptional(Tag::Mixed));
                }
            }
        }
    }
    None
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn thm_odd_divisible(datum: &BranchDatum) -> Option<Verdict> {
    if !datum.is_compatible() || !datum.base().is_sphere() || datum.n() != 3 {
        return None;
    }
    let g = datum
        .partitions()
        .iter()
        .flat_map(|p| p.parts().iter().copied())
        .fold(0, gcd);
    // some odd p >= 3 divides g unless g is a power of two
    (!g.is_power_of_two()).then(|| Verdict::realizable(Tag::OddDivisible))
}

pub fn lemma_transpos(datum: &BranchDatum) -> Option<Verdict> {
    if !sphere_over_sphere(datum) {
        return None;
    }
    let d = datum.degree();
    let ps = datum.partitions();
    let n = ps.len();
    if n < 3 {
        return None;
    }
    let is_transposition = |p: &Partition| p.parts()[0] == 2 && p.len() == d - 1;
    for k in (2..d).filter(|k| d % k == 0) {
        let h = d / k;
        if h < 2 {
            continue;
        }
        for (i, j) in pairs(n) {
            if !ps[i].all_divisible_by(k) || !ps[j].all_divisible_by(k) {
                continue;
            }
            let (p, q) = (ps[i].len(), ps[j].len());
            if p < 2 || q < 2 || p + q < h + 2 {
                continue;
            }
            for l in (0..n).filter(|&l| l != i && l != j) {
                let Some(a) = single_cycle_length(&ps[l]) else { continue };
                if a <= h {
                    continue;
                }
                let r = a - h;
                if r >= p + q - h || n + r + h != p + q + 2 {
                    continue;
                }
                let rest_ok = (0..n)
                    .filter(|&x| x != i && x != j && x != l)
                    .all(|x| is_transposition(&ps[x]));
                if rest_ok {
                    return Some(Verdict::exceptional(Tag::Transpositions));
                }
            }
        }
    }
    None
}

/// Verdicts of every predicate that fires, in evaluation order.
pub fn predicate_verdicts(datum: &BranchDatum) -> Vec<Verdict> {
    PREDICATES.iter().filter_map(|(_, p)| p(datum)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassifyOptions {
    pub budget: u64,
    pub threads: usize,
    /// Run the search after a predicate fires realizable, to attach a witness.
    pub attach_witness: bool,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            budget: realizer::DEFAULT_BUDGET,
            threads: 1,
            attach_witness: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub verdict: Verdict,
    /// Search nodes spent, zero when no search ran.
    pub nodes: u64,
}

pub fn classify(datum: &BranchDatum, budget: u64) -> Result<Verdict, CriteriaError> {
    let opts = ClassifyOptions {
        budget,
        ..ClassifyOptions::default()
    };
    classify_with(datum, &opts).map(|c| c.verdict)
}

pub fn classify_with(datum: &BranchDatum, opts: &ClassifyOptions) -> Result<Classification, CriteriaError> {
    let report = datum.check_compatibility();
    if !report.is_compatible() {
        return Ok(Classification {
            verdict: Verdict::Incompatible(report),
            nodes: 0,
        });
    }

    let fired = predicate_verdicts(datum);
    let first_of = |pol: Polarity| fired.iter().find(|v| v.polarity() == Some(pol));
    let count = |pol: Polarity| fired.iter().filter(|v| v.polarity() == Some(pol)).count();
    let config = SearchConfig {
        budget: opts.budget,
        threads: opts.threads.max(1),
    };

    match (first_of(Polarity::Realizable), first_of(Polarity::Exceptional)) {
        (Some(r), Some(e)) => Err(CriteriaError::ConsistencyFault {
            datum: datum.to_string(),
            realizable: r.tag().expect("tagged"),
            exceptional: e.tag().expect("tagged"),
        }),
        (Some(r), None) => {
            let mut nodes = 0;
            let mut witness = None;
            if opts.attach_witness && datum.base().is_sphere() {
                let report = realizer::search_with(datum, &config).expect("compatible sphere datum");
                nodes = report.nodes;
                if let SearchOutcome::Found(w) = report.outcome {
                    witness = Some(w);
                }
            }
            Ok(Classification {
                verdict: Verdict::Realizable {
                    tag: r.tag().expect("tagged"),
                    agreeing: count(Polarity::Realizable),
                    witness,
                },
                nodes,
            })
        }
        (None, Some(e)) => Ok(Classification {
            verdict: Verdict::Exceptional {
                tag: e.tag().expect("tagged"),
                agreeing: count(Polarity::Exceptional),
            },
            nodes: 0,
        }),
        (None, None) => fallback(datum, opts, &config),
    }
}

fn fallback(datum: &BranchDatum, opts: &ClassifyOptions, config: &SearchConfig) -> Result<Classification, CriteriaError> {
    if datum.base().is_sphere() {
        let report = realizer::search_with(datum, config).expect("compatible sphere datum");
        let verdict = match report.outcome {
            SearchOutcome::Found(w) => Verdict::Realizable {
                tag: Tag::SearchFound,
                agreeing: 0,
                witness: Some(w),
            },
            SearchOutcome::Exhausted => Verdict::Exceptional {
                tag: Tag::SearchExhausted,
                agreeing: 0,
            },
            SearchOutcome::BudgetExceeded => Verdict::Unknown { tag: Tag::SearchBudget },
        };
        return Ok(Classification {
            verdict,
            nodes: report.nodes,
        });
    }

    // Only the projective plane with orientable cover is left undecided.
    let reduced = match realizer::reduce_projective(datum) {
        Ok(r) => r,
        Err(realizer::RealizerError::DegreeTwoReduction) => {
            return Ok(Classification {
                verdict: Verdict::Realizable {
                    tag: Tag::OrientationCover,
                    agreeing: 0,
                    witness: None,
                },
                nodes: 0,
            })
        }
        Err(e) => unreachable!("undecided datum outside the reduction: {e}"),
    };
    let inner = ClassifyOptions {
        attach_witness: false,
        ..*opts
    };
    let mut nodes = 0;
    let mut unknown = false;
    for r in &reduced {
        let c = classify_with(r, &inner)?;
        nodes += c.nodes;
        match c.verdict {
            Verdict::Realizable { .. } => {
                return Ok(Classification {
                    verdict: Verdict::Realizable {
                        tag: Tag::ReductionFound,
                        agreeing: 0,
                        witness: None,
                    },
                    nodes,
                })
            }
            Verdict::Unknown { .. } => unknown = true,
            _ => {}
        }
    }
    let verdict = if unknown {
        Verdict::Unknown {
            tag: Tag::ReductionBudget,
        }
    } else {
        Verdict::Exceptional {
            tag: Tag::ReductionExhausted,
            agreeing: 0,
        }
    };
    Ok(Classification { verdict, nodes })
}
