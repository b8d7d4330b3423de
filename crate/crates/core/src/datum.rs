//! Branch data and the necessary conditions for their realizability.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::ParseError;
use crate::partition::Partition;
use crate::surface::Surface;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DatumError {
    #[error("degree must be at least 2, got {0}")]
    DegreeTooSmall(usize),
    #[error("partition {partition} has degree {found}, expected {expected}")]
    DegreeMismatch {
        partition: String,
        expected: usize,
        found: usize,
    },
    #[error("partition {0} is trivial; drop the branching point instead")]
    TrivialPartition(String),
}

/// A candidate branched covering `cover -> base` of degree `d` with one
/// partition of `d` per branching point.
///
/// The partition list is unordered; it is stored sorted in descending
/// lexicographic order so that equal data compare equal.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BranchDatum {
    cover: Surface,
    base: Surface,
    degree: usize,
    partitions: Vec<Partition>,
}

impl BranchDatum {
    pub fn new(
        cover: Surface,
        base: Surface,
        degree: usize,
        mut partitions: Vec<Partition>,
    ) -> Result<Self, DatumError> {
        if degree < 2 {
            return Err(DatumError::DegreeTooSmall(degree));
        }
        for p in &partitions {
            if p.degree() != degree {
                return Err(DatumError::DegreeMismatch {
                    partition: p.to_string(),
                    expected: degree,
                    found: p.degree(),
                });
            }
            if p.is_trivial() {
                return Err(DatumError::TrivialPartition(p.to_string()));
            }
        }
        partitions.sort_by(|a, b| b.cmp(a));
        Ok(BranchDatum {
            cover,
            base,
            degree,
            partitions,
        })
    }

    /// Like [`BranchDatum::new`] but silently drops `(1,…,1)` partitions.
    pub fn new_dropping_trivial(
        cover: Surface,
        base: Surface,
        degree: usize,
        partitions: Vec<Partition>,
    ) -> Result<Self, DatumError> {
        let kept = partitions.into_iter().filter(|p| !p.is_trivial()).collect();
        Self::new(cover, base, degree, kept)
    }

    pub fn cover(&self) -> Surface {
        self.cover
    }

    pub fn base(&self) -> Surface {
        self.base
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Number of branching points.
    pub fn n(&self) -> usize {
        self.partitions.len()
    }

    pub fn partitions(&self) -> &[Partition] {
        &self.partitions
    }

    /// Total number of preimages of the branching points.
    pub fn n_tilde(&self) -> usize {
        self.partitions.iter().map(Partition::len).sum()
    }

    pub fn with_cover(&self, cover: Surface) -> Self {
        BranchDatum {
            cover,
            ..self.clone()
        }
    }

    pub fn check_compatibility(&self) -> CompatibilityReport {
        let d = self.degree as i64;
        let n = self.n() as i64;
        let n_tilde = self.n_tilde() as i64;
        let mut violated = BTreeSet::new();

        if self.cover.euler_characteristic() - n_tilde != d * (self.base.euler_characteristic() - n) {
            violated.insert(1);
        }
        if (n * d - n_tilde) % 2 != 0 {
            violated.insert(2);
        }
        if self.base.is_orientable() && !self.cover.is_orientable() {
            violated.insert(3);
        }
        if !self.base.is_orientable() && d % 2 == 1 && self.cover.is_orientable() {
            violated.insert(4);
        }
        // Only meaningful for even d; an odd degree here already violates 4
        // and cannot split into halves either.
        if !self.base.is_orientable() && self.cover.is_orientable() {
            let splits = self.degree % 2 == 0
                && self
                    .partitions
                    .iter()
                    .all(|p| p.refines_two_halves().unwrap_or(false));
            if !splits {
                violated.insert(5);
            }
        }
        CompatibilityReport { violated }
    }

    pub fn is_compatible(&self) -> bool {
        self.check_compatibility().is_compatible()
    }
}

/// Which of the five compatibility conditions a datum violates.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CompatibilityReport {
    violated: BTreeSet<u8>,
}

impl CompatibilityReport {
    pub fn is_compatible(&self) -> bool {
        self.violated.is_empty()
    }

    pub fn violated(&self) -> &BTreeSet<u8> {
        &self.violated
    }
}

impl fmt::Display for CompatibilityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_compatible() {
            return f.write_str("compatible");
        }
        let list: Vec<String> = self.violated.iter().map(|c| c.to_string()).collect();
        write!(f, "incompatible: violates {}", list.join(","))
    }
}

/// All cover surfaces for which the Riemann–Hurwitz count and the two
/// orientability conditions hold. Condition 5 is not applied here.
pub fn infer_cover(base: Surface, degree: usize, partitions: &[Partition]) -> Vec<Surface> {
    let n = partitions.len() as i64;
    let n_tilde: i64 = partitions.iter().map(|p| p.len() as i64).sum();
    let chi = n_tilde + degree as i64 * (base.euler_characteristic() - n);

    let mut candidates = Vec::new();
    let orientable_allowed = base.is_orientable() || degree % 2 == 0;
    if orientable_allowed {
        candidates.extend(Surface::from_euler(true, chi));
    }
    if !base.is_orientable() {
        candidates.extend(Surface::from_euler(false, chi));
    }
    candidates
}

impl fmt::Display for BranchDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "d={} cover={} base={} parts=[",
            self.degree, self.cover, self.base
        )?;
        for (i, p) in self.partitions.iter().enumerate() {
            if i > 0 {
                f.write_str("|")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str("]")
    }
}

impl FromStr for BranchDatum {
    type Err = ParseError;

    /// Parses `d=<int> cover=<SURF> base=<SURF> parts=[p1,p2|q1,…]`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let fields: Vec<&str> = s.split(' ').collect();
        if fields.len() != 4 {
            return Err(ParseError::new(format!(
                "expected `d=… cover=… base=… parts=[…]`, got `{s}`"
            )));
        }
        let field = |i: usize, key: &str| {
            fields[i]
                .strip_prefix(key)
                .ok_or_else(|| ParseError::new(format!("expected `{key}…` at field {}, got `{}`", i + 1, fields[i])))
        };
        let d_str = field(0, "d=")?;
        if d_str.is_empty() || !d_str.bytes().all(|b| b.is_ascii_digit()) {
            return Err(ParseError::new(format!("bad degree `{d_str}`")));
        }
        let degree: usize = d_str
            .parse()
            .map_err(|_| ParseError::new(format!("bad degree `{d_str}`")))?;
        let cover: Surface = field(1, "cover=")?.parse()?;
        let base: Surface = field(2, "base=")?.parse()?;
        let body = field(3, "parts=")?
            .strip_prefix('[')
            .and_then(|b| b.strip_suffix(']'))
            .ok_or_else(|| ParseError::new("partition list must be enclosed in [ ]"))?;
        let partitions = if body.is_empty() {
            Vec::new()
        } else {
            body.split('|')
                .map(str::parse::<Partition>)
                .collect::<Result<Vec<_>, _>>()?
        };
        BranchDatum::new(cover, base, degree, partitions)
            .map_err(|e| ParseError::new(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn datum(s: &str) -> BranchDatum {
        s.parse().unwrap()
    }

    fn parts(list: &[&[usize]]) -> Vec<Partition> {
        list.iter().map(|p| Partition::new(p.to_vec()).unwrap()).collect()
    }

    #[test]
    fn compatibility_examples() {
        let r = datum("d=4 cover=O0 base=O0 parts=[3,1|2,2|2,2]").check_compatibility();
        assert!(r.is_compatible());
        assert_eq!(datum("d=4 cover=O0 base=O0 parts=[3,1|2,2|2,2]").n_tilde(), 6);

        let r = datum("d=3 cover=O0 base=O0 parts=[2,1]").check_compatibility();
        assert_eq!(r.violated().iter().copied().collect::<Vec<_>>(), vec![1, 2]);

        let r = datum("d=4 cover=O1 base=O0 parts=[4|3,1|2,1,1]").check_compatibility();
        assert_eq!(r.violated().iter().copied().collect::<Vec<_>>(), vec![1]);
        assert!(datum("d=4 cover=O0 base=O0 parts=[4|3,1|2,1,1]").is_compatible());
    }

    #[test]
    fn orientability_conditions() {
        // non-orientable cover over an orientable base
        let r = datum("d=2 cover=N2 base=O1 parts=[2|2]").check_compatibility();
        assert!(r.violated().contains(&3));
        // odd degree with orientable cover over a non-orientable base
        let r = datum("d=3 cover=O0 base=N1 parts=[]").check_compatibility();
        assert!(r.violated().contains(&4));
        // partition (3,1) does not split into two halves of 2
        let r = datum("d=4 cover=O0 base=N1 parts=[3,1|2,2]").check_compatibility();
        assert!(r.violated().contains(&5));
        // orientation double cover of the projective plane
        assert!(datum("d=2 cover=O0 base=N1 parts=[]").is_compatible());
    }

    #[test]
    fn infer_cover_examples() {
        let s = Surface::SPHERE;
        assert_eq!(infer_cover(s, 4, &parts(&[&[3, 1], &[2, 2], &[2, 2]])), vec![s]);
        assert_eq!(infer_cover(s, 4, &parts(&[&[4], &[3, 1], &[2, 1, 1]])), vec![s]);
        assert_eq!(
            infer_cover(s, 9, &parts(&[&[3, 3, 3], &[3, 3, 3], &[3, 3, 3]])),
            vec![Surface::TORUS]
        );
        // chi = 5 + 3*(2-2) = 5 > 2
        assert!(infer_cover(s, 3, &parts(&[&[2, 1], &[1, 1, 1]])).is_empty());
        // two candidates over the projective plane with even degree
        let two = infer_cover(Surface::PROJECTIVE_PLANE, 4, &parts(&[&[2, 2], &[2, 2]]));
        assert_eq!(two, vec![Surface::TORUS, Surface::non_orientable(2).unwrap()]);
        // odd degree over the projective plane: non-orientable only
        let one = infer_cover(Surface::PROJECTIVE_PLANE, 3, &parts(&[&[3]]));
        assert_eq!(one, vec![Surface::non_orientable(1).unwrap()]);
    }

    #[test]
    fn constructor_errors() {
        let s = Surface::SPHERE;
        assert_eq!(BranchDatum::new(s, s, 1, vec![]), Err(DatumError::DegreeTooSmall(1)));
        assert!(matches!(
            BranchDatum::new(s, s, 4, parts(&[&[2, 1]])),
            Err(DatumError::DegreeMismatch { .. })
        ));
        assert!(matches!(
            BranchDatum::new(s, s, 3, parts(&[&[1, 1, 1]])),
            Err(DatumError::TrivialPartition(_))
        ));
        let kept = BranchDatum::new_dropping_trivial(s, s, 3, parts(&[&[1, 1, 1], &[3], &[3]])).unwrap();
        assert_eq!(kept.n(), 2);
    }

    #[test]
    fn text_format() {
        let d = datum("d=4 cover=O0 base=O0 parts=[2,2|1,3|2,2]");
        assert_eq!(d.to_string(), "d=4 cover=O0 base=O0 parts=[3,1|2,2|2,2]");
        assert_eq!(datum("d=2 cover=O0 base=N1 parts=[]").n(), 0);
        for bad in [
            "d=4 cover=O0 base=O0",
            "d=4  cover=O0 base=O0 parts=[4]",
            "d=x cover=O0 base=O0 parts=[4]",
            "d=4 cover=Q0 base=O0 parts=[4]",
            "d=4 cover=O0 base=O0 parts=4",
            "d=4 cover=O0 base=O0 parts=[4|]",
            "d=4 cover=O0 base=O0 parts=[1,1,1,1]",
            "d=4 base=O0 cover=O0 parts=[4]",
        ] {
            assert!(bad.parse::<BranchDatum>().is_err(), "{bad}");
        }
    }

    proptest::proptest! {
        #[test]
        fn compatibility_ignores_partition_order(
            raw in proptest::collection::vec(proptest::collection::vec(1usize..4, 1..4), 1..5),
            cover_genus in 0u32..3,
        ) {
            let d: usize = raw[0].iter().sum();
            let list: Vec<Partition> = raw.iter()
                .filter(|p| p.iter().sum::<usize>() == d)
                .map(|p| Partition::new(p.clone()).unwrap())
                .filter(|p| !p.is_trivial())
                .collect();
            if d >= 2 {
                let s = Surface::SPHERE;
                let c = Surface::orientable(cover_genus);
                let fwd = BranchDatum::new(c, s, d, list.clone()).unwrap();
                let mut rev = list.clone();
                rev.reverse();
                let back = BranchDatum::new(c, s, d, rev).unwrap();
                proptest::prop_assert_eq!(fwd.check_compatibility(), back.check_compatibility());
                for cover in infer_cover(s, d, &list) {
                    let r = fwd.with_cover(cover).check_compatibility();
                    proptest::prop_assert!(!r.violated().contains(&1));
                }
            }
        }
    }
}
