//! Permutations of `{1..d}` and conjugacy classes of the symmetric group.
//!
//! Points are 0-based internally and 1-based in cycle notation. Composition
//! applies the right factor first: `a.compose(&b)(x) == a(b(x))`.

use std::fmt;

use crate::error::ParseError;
use crate::partition::{factorial, Partition};
use crate::union_find::UnionFind;

/// Largest degree for which permutations are stored (points fit in a byte).
pub const MAX_DEGREE: usize = 255;
/// Largest degree for which class ranks fit in `u128`.
pub const MAX_CLASS_DEGREE: usize = 34;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PermError {
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("images do not form a bijection")]
    NotBijection,
    #[error("point {0} is outside 1..={1}")]
    PointOutOfRange(usize, usize),
    #[error("degree {0} exceeds the supported maximum")]
    DegreeTooLarge(usize),
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation {
    images: Vec<u8>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        assert!(degree <= MAX_DEGREE, "degree {degree} too large");
        Permutation {
            images: (0..degree).map(|x| x as u8).collect(),
        }
    }

    /// From 0-based images, `images[x] = τ(x)`.
    pub fn from_images(images: &[usize]) -> Result<Self, PermError> {
        let d = images.len();
        if d > MAX_DEGREE {
            return Err(PermError::DegreeTooLarge(d));
        }
        let mut seen = vec![false; d];
        for &y in images {
            if y >= d || seen[y] {
                return Err(PermError::NotBijection);
            }
            seen[y] = true;
        }
        Ok(Permutation {
            images: images.iter().map(|&y| y as u8).collect(),
        })
    }

    pub(crate) fn from_images_unchecked(images: Vec<u8>) -> Self {
        debug_assert!(Self::from_images(&images.iter().map(|&y| y as usize).collect::<Vec<_>>()).is_ok());
        Permutation { images }
    }

    /// Builds a permutation from disjoint cycles written with 1-based points.
    pub fn from_cycles(degree: usize, cycles: &[&[usize]]) -> Result<Self, PermError> {
        if degree > MAX_DEGREE {
            return Err(PermError::DegreeTooLarge(degree));
        }
        let mut images: Vec<usize> = (0..degree).collect();
        let mut touched = vec![false; degree];
        for cycle in cycles {
            for (i, &x) in cycle.iter().enumerate() {
                if x == 0 || x > degree {
                    return Err(PermError::PointOutOfRange(x, degree));
                }
                if touched[x - 1] {
                    return Err(PermError::NotBijection);
                }
                touched[x - 1] = true;
                let y = cycle[(i + 1) % cycle.len()];
                images[x - 1] = y - 1;
            }
        }
        Self::from_images(&images)
    }

    /// Parses cycle notation such as `(1 2 3 4)(5 6)`; `()` is the identity.
    pub fn parse_cycles(s: &str, degree: usize) -> Result<Self, ParseError> {
        let s = s.trim();
        let mut cycles: Vec<Vec<usize>> = Vec::new();
        let mut rest = s;
        while !rest.is_empty() {
            let inner = rest
                .strip_prefix('(')
                .and_then(|r| r.split_once(')'))
                .ok_or_else(|| ParseError::new(format!("bad cycle notation `{s}`")))?;
            let points = inner
                .0
                .split_whitespace()
                .map(|t| {
                    t.parse::<usize>()
                        .map_err(|_| ParseError::new(format!("bad point `{t}` in `{s}`")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            if !points.is_empty() {
                cycles.push(points);
            }
            rest = inner.1.trim_start();
        }
        let refs: Vec<&[usize]> = cycles.iter().map(Vec::as_slice).collect();
        Self::from_cycles(degree, &refs).map_err(|e| ParseError::new(format!("`{s}`: {e}")))
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// Image of a 0-based point.
    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.images[x] as usize
    }

    pub(crate) fn raw(&self) -> &[u8] {
        &self.images
    }

    pub fn images(&self) -> Vec<usize> {
        self.images.iter().map(|&y| y as usize).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(x, &y)| x == y as usize)
    }

    /// `self ∘ other`, i.e. `other` acts first.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation, PermError> {
        if self.degree() != other.degree() {
            return Err(PermError::DegreeMismatch(self.degree(), other.degree()));
        }
        Ok(Permutation {
            images: other.images.iter().map(|&y| self.images[y as usize]).collect(),
        })
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u8; self.degree()];
        for (x, &y) in self.images.iter().enumerate() {
            inv[y as usize] = x as u8;
        }
        Permutation { images: inv }
    }

    /// `g ∘ self ∘ g⁻¹`.
    pub fn conjugate_by(&self, g: &Permutation) -> Permutation {
        let mut out = vec![0u8; self.degree()];
        for x in 0..self.degree() {
            out[g.apply(x)] = g.images[self.apply(x)];
        }
        Permutation { images: out }
    }

    /// Disjoint cycles (0-based), each starting at its smallest point, ordered
    /// by that point. Fixed points are included.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let d = self.degree();
        let mut seen = vec![false; d];
        let mut out = Vec::new();
        for start in 0..d {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x);
                x = self.apply(x);
            }
            out.push(cycle);
        }
        out
    }

    pub fn cycle_type(&self) -> Partition {
        if self.degree() == 0 {
            // no partition of 0; callers never ask for one
            panic!("cycle type of the empty permutation");
        }
        Partition::new(cycle_lengths(&self.images)).expect("cycle lengths are positive")
    }
}

pub(crate) fn cycle_lengths(images: &[u8]) -> Vec<usize> {
    let d = images.len();
    let mut seen = [false; MAX_DEGREE + 1];
    let mut out = Vec::new();
    for start in 0..d {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            len += 1;
            x = images[x] as usize;
        }
        out.push(len);
    }
    out
}

pub fn compose(a: &Permutation, b: &Permutation) -> Result<Permutation, PermError> {
    a.compose(b)
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for cycle in self.cycles() {
            if cycle.len() < 2 {
                continue;
            }
            f.write_str("(")?;
            for (i, x) in cycle.iter().enumerate() {
                if i > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{}", x + 1)?;
            }
            f.write_str(")")?;
            wrote = true;
        }
        if !wrote {
            f.write_str("()")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Orbit partition of `{0..degree}` under the group generated by `gens`.
pub fn orbits(degree: usize, gens: &[Permutation]) -> UnionFind {
    let mut uf = UnionFind::new(degree);
    for g in gens {
        for x in 0..degree {
            uf.union(x, g.apply(x));
        }
    }
    uf
}

/// Whether the group generated by `gens` acts transitively on `{1..degree}`.
/// Computed by orbit closure; no group elements are enumerated.
pub fn is_transitive(degree: usize, gens: &[Permutation]) -> bool {
    if gens.iter().any(|g| g.degree() != degree) {
        return false;
    }
    degree <= 1 || orbits(degree, gens).classes() == 1
}

/// The permutation whose cycles are consecutive runs `(1..t1)(t1+1..t1+t2)…`.
pub fn class_representative(t: &Partition) -> Permutation {
    let mut images = Vec::with_capacity(t.degree());
    let mut start = 0;
    for &len in t.parts() {
        for i in 0..len {
            let next = if i + 1 == len { start } else { start + i + 1 };
            images.push(next as u8);
        }
        start += len;
    }
    Permutation { images }
}

/// Every element of the centralizer of [`class_representative`]`(t)`:
/// cycles of equal length are permuted among themselves and each cycle may be
/// rotated.
pub fn representative_centralizer(t: &Partition) -> Vec<Permutation> {
    let d = t.degree();
    // (start offset, length) of each cycle of the representative
    let mut blocks = Vec::new();
    let mut start = 0;
    for &len in t.parts() {
        blocks.push((start, len));
        start += len;
    }
    // Group cycle indices by length.
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for (i, &(_, len)) in blocks.iter().enumerate() {
        match groups.last_mut() {
            Some(g) if blocks[g[0]].1 == len => g.push(i),
            _ => groups.push(vec![i]),
        }
    }

    // Build all maps cycle -> (target cycle, rotation).
    let mut partial: Vec<Vec<(usize, usize)>> = vec![vec![(0, 0); blocks.len()]];
    for group in &groups {
        let len = blocks[group[0]].1;
        let arrangements = permutations_of(group);
        let mut next = Vec::new();
        for assign in &partial {
            for arr in &arrangements {
                // rotations as mixed radix over the group
                let total = len.pow(group.len() as u32);
                for code in 0..total {
                    let mut a = assign.clone();
                    let mut c = code;
                    for (slot, &src) in group.iter().enumerate() {
                        a[src] = (arr[slot], c % len);
                        c /= len;
                    }
                    next.push(a);
                }
            }
        }
        partial = next;
    }

    partial
        .into_iter()
        .map(|assign| {
            let mut images = vec![0u8; d];
            for (src, &(dst, rot)) in assign.iter().enumerate() {
                let (s0, len) = blocks[src];
                let (t0, _) = blocks[dst];
                for i in 0..len {
                    images[s0 + i] = (t0 + (i + rot) % len) as u8;
                }
            }
            Permutation { images }
        })
        .collect()
}

fn permutations_of(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations_of(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

/// Finds `g` with `g ∘ a[i] ∘ g⁻¹ == b[i]` for every `i`, assuming the
/// generators `a` act transitively.
pub fn simultaneous_conjugator(a: &[Permutation], b: &[Permutation]) -> Option<Permutation> {
    if a.len() != b.len() || a.is_empty() {
        return None;
    }
    let d = a[0].degree();
    if a.iter().chain(b).any(|p| p.degree() != d) {
        return None;
    }
    // g is determined by g(0) when <a> is transitive: g(a_i(x)) = b_i(g(x)).
    'target: for y0 in 0..d {
        let mut g = vec![usize::MAX; d];
        let mut used = vec![false; d];
        g[0] = y0;
        used[y0] = true;
        let mut stack = vec![0];
        while let Some(x) = stack.pop() {
            for (ai, bi) in a.iter().zip(b) {
                let (x2, y2) = (ai.apply(x), bi.apply(g[x]));
                if g[x2] == usize::MAX {
                    if used[y2] {
                        continue 'target;
                    }
                    g[x2] = y2;
                    used[y2] = true;
                    stack.push(x2);
                } else if g[x2] != y2 {
                    continue 'target;
                }
            }
        }
        if g.contains(&usize::MAX) {
            return None;
        }
        return Permutation::from_images(&g).ok();
    }
    None
}

/// Enumerates a conjugacy class of `S_d` in backtracking order: the smallest
/// unused point opens the next cycle, cycle lengths are tried in decreasing
/// order and the remaining cycle entries in increasing order.
///
/// Elements are produced by unranking, so the class can be cut into disjoint
/// rank ranges ([`ClassIter::split`]) that advance independently.
#[derive(Debug, Clone)]
pub struct ClassIter {
    cycle_type: Partition,
    next: u128,
    end: u128,
}

pub fn class_iterator(t: &Partition) -> ClassIter {
    assert!(
        t.degree() <= MAX_CLASS_DEGREE,
        "class enumeration limited to degree {MAX_CLASS_DEGREE}"
    );
    ClassIter {
        cycle_type: t.clone(),
        next: 0,
        end: t.class_size(),
    }
}

impl ClassIter {
    /// Iterator restricted to ranks `start..end` of the class.
    pub fn range(t: &Partition, start: u128, end: u128) -> Self {
        let mut it = class_iterator(t);
        it.end = end.min(it.end);
        it.next = start.min(it.end);
        it
    }

    pub fn remaining(&self) -> u128 {
        self.end - self.next
    }

    /// Splits the remaining ranks into `parts` contiguous, disjoint iterators.
    pub fn split(self, parts: usize) -> Vec<ClassIter> {
        let parts = parts.max(1) as u128;
        let total = self.remaining();
        (0..parts)
            .map(|i| ClassIter {
                cycle_type: self.cycle_type.clone(),
                next: self.next + total * i / parts,
                end: self.next + total * (i + 1) / parts,
            })
            .collect()
    }

    /// The class element of the given rank.
    pub fn unrank(t: &Partition, mut rank: u128) -> Permutation {
        let d = t.degree();
        let mut counts: Vec<(usize, usize)> = t.multiplicities().into_iter().rev().collect();
        let mut unused: Vec<usize> = (0..d).collect();
        let mut images = vec![0u8; d];

        while !unused.is_empty() {
            let r = unused.len();
            let x = unused.remove(0);
            let mut chosen = None;
            for i in 0..counts.len() {
                let (len, c) = counts[i];
                if c == 0 || len > r {
                    continue;
                }
                counts[i].1 -= 1;
                let sub = completions(r - len, &counts);
                let block = arrangements(r - 1, len - 1) * sub;
                if rank < block {
                    chosen = Some((len, sub));
                    break;
                }
                counts[i].1 += 1;
                rank -= block;
            }
            let (len, sub) = chosen.expect("rank within class size");
            let mut q = rank / sub;
            rank %= sub;
            let mut prev = x;
            for i in 0..len - 1 {
                let radix = arrangements(r - 2 - i, len - 2 - i);
                let y = unused.remove((q / radix) as usize);
                q %= radix;
                images[prev] = y as u8;
                prev = y;
            }
            images[prev] = x as u8;
        }
        Permutation { images }
    }
}

/// Number of ways to fill `points` points with the given (length, count) cycles.
fn completions(points: usize, counts: &[(usize, usize)]) -> u128 {
    let mut n = factorial(points);
    for &(len, c) in counts {
        n /= factorial(c) * (len as u128).pow(c as u32);
    }
    n
}

/// Ordered selections of `k` items out of `n`.
fn arrangements(n: usize, k: usize) -> u128 {
    ((n - k + 1) as u128..=n as u128).product()
}

impl Iterator for ClassIter {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        if self.next >= self.end {
            return None;
        }
        let p = ClassIter::unrank(&self.cycle_type, self.next);
        self.next += 1;
        Some(p)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = usize::try_from(self.remaining()).unwrap_or(usize::MAX);
        (n, Some(n))
    }
}
