//! Integer partitions, used both as local-degree lists and as cycle types.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::ParseError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PartitionError {
    #[error("a partition needs at least one part")]
    Empty,
    #[error("partition parts must be positive")]
    ZeroPart,
    #[error("partition of odd degree {0} cannot be split into two halves")]
    OddDegree(usize),
}

/// A partition of `degree`, parts kept in non-increasing order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    /// Builds a partition from parts given in any order.
    pub fn new(mut parts: Vec<usize>) -> Result<Self, PartitionError> {
        if parts.is_empty() {
            return Err(PartitionError::Empty);
        }
        if parts.contains(&0) {
            return Err(PartitionError::ZeroPart);
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Partition { parts })
    }

    /// The single-part partition `(d)`.
    pub fn full_cycle(degree: usize) -> Self {
        Partition { parts: vec![degree] }
    }

    /// `(1,…,1)` of the given degree.
    pub fn trivial(degree: usize) -> Self {
        Partition {
            parts: vec![1; degree],
        }
    }

    /// `(k,…,k)` with `count` parts.
    pub fn uniform(part: usize, count: usize) -> Self {
        Partition {
            parts: vec![part; count],
        }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn degree(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Number of parts (the `m_i` of a branching point).
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn largest(&self) -> usize {
        self.parts[0]
    }

    pub fn is_trivial(&self) -> bool {
        self.parts[0] == 1
    }

    /// `degree - len`: the minimal number of transpositions whose product has
    /// this cycle type.
    pub fn defect(&self) -> usize {
        self.degree() - self.len()
    }

    pub fn all_divisible_by(&self, k: usize) -> bool {
        self.parts.iter().all(|&x| x % k == 0)
    }

    pub fn all_even(&self) -> bool {
        self.all_divisible_by(2)
    }

    /// Multiplicity of each part value.
    pub fn multiplicities(&self) -> BTreeMap<usize, usize> {
        let mut counts = BTreeMap::new();
        for &x in &self.parts {
            *counts.entry(x).or_insert(0) += 1;
        }
        counts
    }

    /// Size of the conjugacy class of `S_d` with this cycle type:
    /// `d! / prod(c_l! * l^c_l)`.
    pub fn class_size(&self) -> u128 {
        let mut size = factorial(self.degree());
        for (len, count) in self.multiplicities() {
            size /= factorial(count);
            size /= (len as u128).pow(count as u32);
        }
        size
    }

    /// Whether some sub-multiset of the parts sums to `degree / 2`, i.e. the
    /// partition is the juxtaposition of two partitions of half the degree.
    pub fn refines_two_halves(&self) -> Result<bool, PartitionError> {
        let d = self.degree();
        if d % 2 == 1 {
            return Err(PartitionError::OddDegree(d));
        }
        let half = d / 2;
        let mut reachable = vec![false; half + 1];
        reachable[0] = true;
        for &x in &self.parts {
            for s in (x..=half).rev() {
                if reachable[s - x] {
                    reachable[s] = true;
                }
            }
        }
        Ok(reachable[half])
    }
}

pub(crate) fn factorial(n: usize) -> u128 {
    (2..=n as u128).product()
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, x) in self.parts.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

impl FromStr for Partition {
    type Err = ParseError;

    /// Parses comma-separated parts, e.g. `3,1`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts = s
            .split(',')
            .map(|tok| {
                tok.parse::<usize>()
                    .map_err(|_| ParseError::new(format!("bad partition part `{tok}` in `{s}`")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Partition::new(parts).map_err(|e| ParseError::new(format!("`{s}`: {e}")))
    }
}

/// Iterator over all partitions of `d` in reverse-lexicographic order,
/// starting from `(d)` and ending at `(1,…,1)`.
#[derive(Debug, Clone)]
pub struct Partitions {
    current: Option<Vec<usize>>,
}

pub fn partitions_of(d: usize) -> Partitions {
    Partitions {
        current: (d > 0).then(|| vec![d]),
    }
}

impl Iterator for Partitions {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        let current = self.current.take()?;
        let out = Partition {
            parts: current.clone(),
        };

        // Successor: strip trailing ones, decrement the last part > 1, then
        // refill greedily with parts no larger than the decremented value.
        let mut parts = current;
        let mut freed = 0;
        while parts.last() == Some(&1) {
            parts.pop();
            freed += 1;
        }
        if let Some(last) = parts.pop() {
            let bound = last - 1;
            freed += last;
            while freed > 0 {
                let x = bound.min(freed);
                parts.push(x);
                freed -= x;
            }
            self.current = Some(parts);
        }
        Some(out)
    }
}
