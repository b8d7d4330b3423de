//! Layered dessins d'enfants: embedded graphs on the cover equivalent to a
//! tuple of permutations.
//!
//! Vertex layers `V1 … V(n-1)` are the cycles of `π1 … π(n-1)`. Edge `e_i^k`
//! (layer `i = 1 … n-2`) joins the `πi`-cycle and the `π(i+1)`-cycle of `k`.
//! Rotations list the incident edges counterclockwise:
//!
//! * at `V1`: `e_1^k` is followed by `e_1^{π1(k)}`;
//! * at a middle `Vi`: `e_i^k`, `e_{i-1}^k`, `e_i^{πi(k)}`, …;
//! * at `V(n-1)`: `e_{n-2}^k` is followed by `e_{n-2}^{π(n-1)(k)}`.
//!
//! Faces are traced by leaving each vertex along the edge preceding the
//! arrival edge, which walks `e_1^k … e_{n-2}^k` up and returns through
//! `π(n-1)⁻¹(k)`, `π(n-2)⁻¹π(n-1)⁻¹(k)`, …. One face per cycle of
//! `π1⁻¹ ∘ … ∘ π(n-1)⁻¹`.
//!
//! In this raw form the tuple multiplies the other way round from
//! [`Realization`]; [`dessin_from_realization`] passes the inverses.

use std::collections::VecDeque;
use std::fmt::Write as _;

use crate::datum::BranchDatum;
use crate::partition::Partition;
use crate::perm::{is_transitive, simultaneous_conjugator, Permutation};
use crate::realizer::Realization;
use crate::surface::Surface;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DessinError {
    #[error("a dessin needs at least two permutations, got {0}")]
    TooFewLayers(usize),
    #[error("permutations of different degrees")]
    DegreeMismatch,
    #[error("permutations do not generate a transitive group, the dessin is disconnected")]
    Disconnected,
    #[error("malformed dessin: {0}")]
    Malformed(String),
    #[error("checkerboard coloring needs a sphere, this dessin lies on {0}")]
    NotSphere(Surface),
}

/// Edge `e_layer^k`, both 1-based as in the export format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeRef {
    pub layer: usize,
    pub k: usize,
}

/// Endpoints of an edge of layer `i`: a vertex of `Vi` and one of `V(i+1)`,
/// as indices within their layers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub lower: usize,
    pub upper: usize,
}

/// A traversal of an edge; `up` goes from `Vi` to `V(i+1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Dart {
    pub edge: EdgeRef,
    pub up: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dessin {
    degree: usize,
    /// `rotations[i][v]`: counterclockwise incident edges of vertex `v` of `V(i+1)`.
    rotations: Vec<Vec<Vec<EdgeRef>>>,
    /// `edges[i][k]`: endpoints of `e_{i+1}^{k+1}`.
    edges: Vec<Vec<Edge>>,
    faces: Vec<Vec<Dart>>,
}

impl Dessin {
    /// Assembles a dessin from rotations and endpoints, checking the layer
    /// structure, then traces its faces.
    pub fn from_rotations(
        degree: usize,
        rotations: Vec<Vec<Vec<EdgeRef>>>,
        edges: Vec<Vec<Edge>>,
    ) -> Result<Dessin, DessinError> {
        let mut dessin = Dessin {
            degree,
            rotations,
            edges,
            faces: Vec::new(),
        };
        dessin.check()?;
        dessin.faces = dessin.trace_faces();
        Ok(dessin)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// The number `n` of branching points: vertex layers plus one.
    pub fn n(&self) -> usize {
        self.rotations.len() + 1
    }

    pub fn vertex_layers(&self) -> &[Vec<Vec<EdgeRef>>] {
        &self.rotations
    }

    pub fn edge(&self, e: EdgeRef) -> Edge {
        self.edges[e.layer - 1][e.k - 1]
    }

    pub fn faces(&self) -> &[Vec<Dart>] {
        &self.faces
    }

    pub fn vertex_count(&self) -> usize {
        self.rotations.iter().map(Vec::len).sum()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.iter().map(Vec::len).sum()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertex_count() as i64 - self.edge_count() as i64 + self.faces.len() as i64
    }

    /// The closed orientable surface obtained by attaching the faces.
    pub fn surface(&self) -> Option<Surface> {
        Surface::from_euler(true, self.euler_characteristic())
    }

    pub fn face_lengths(&self) -> Vec<usize> {
        let mut lengths: Vec<usize> = self.faces.iter().map(Vec::len).collect();
        lengths.sort_unstable_by(|a, b| b.cmp(a));
        lengths
    }

    /// Valences of the vertices of `V(layer)`, non-increasing.
    pub fn valences(&self, layer: usize) -> Vec<usize> {
        let mut v: Vec<usize> = self.rotations[layer - 1].iter().map(Vec::len).collect();
        v.sort_unstable_by(|a, b| b.cmp(a));
        v
    }

    fn check(&self) -> Result<(), DessinError> {
        let layers = self.rotations.len();
        let bad = |msg: String| Err(DessinError::Malformed(msg));
        if layers < 2 {
            return Err(DessinError::TooFewLayers(layers));
        }
        if self.edges.len() != layers - 1 {
            return bad(format!("{} edge layers for {} vertex layers", self.edges.len(), layers));
        }
        for (i, layer) in self.edges.iter().enumerate() {
            if layer.len() != self.degree {
                return bad(format!("edge layer {} has {} edges", i + 1, layer.len()));
            }
            for e in layer {
                if e.lower >= self.rotations[i].len() || e.upper >= self.rotations[i + 1].len() {
                    return bad(format!("edge of layer {} ends outside its vertex layers", i + 1));
                }
            }
        }
        // every edge appears exactly once at each endpoint
        for (i, layer) in self.rotations.iter().enumerate() {
            let mut seen = vec![Vec::new(); self.edges.len()];
            for (v, rot) in layer.iter().enumerate() {
                for e in rot {
                    if e.layer == 0 || e.layer > self.edges.len() || e.k == 0 || e.k > self.degree {
                        return bad(format!("unknown edge {}:{}", e.layer, e.k));
                    }
                    let edge = self.edge(*e);
                    let end = if e.layer == i + 1 {
                        edge.lower
                    } else if e.layer == i {
                        edge.upper
                    } else {
                        return bad(format!("edge {}:{} at a vertex of layer {}", e.layer, e.k, i + 1));
                    };
                    if end != v {
                        return bad(format!("edge {}:{} listed at the wrong vertex", e.layer, e.k));
                    }
                    seen[e.layer - 1].push(e.k);
                }
                if i > 0 && i + 1 < layers {
                    // middle layers alternate lower and upper edges
                    let alternating = rot.len() % 2 == 0
                        && rot.iter().zip(rot.iter().cycle().skip(1)).all(|(a, b)| a.layer != b.layer);
                    if !alternating {
                        return bad(format!("vertex {} of layer {} does not alternate", v + 1, i + 1));
                    }
                }
            }
            for (l, ks) in seen.iter_mut().enumerate() {
                if l + 1 == i || l == i {
                    ks.sort_unstable();
                    if *ks != (1..=self.degree).collect::<Vec<_>>() {
                        return bad(format!("layer {} rotations miss edges of layer {}", i + 1, l + 1));
                    }
                }
            }
        }
        Ok(())
    }

    /// Vertex (layer, index) reached by a dart.
    fn head(&self, dart: Dart) -> (usize, usize) {
        let e = self.edge(dart.edge);
        if dart.up {
            (dart.edge.layer, e.upper)
        } else {
            (dart.edge.layer - 1, e.lower)
        }
    }

    fn position(&self, layer: usize, v: usize, e: EdgeRef) -> usize {
        self.rotations[layer][v].iter().position(|x| *x == e).expect("checked rotation")
    }

    fn trace_faces(&self) -> Vec<Vec<Dart>> {
        let layers = self.edges.len();
        let index = |d: &Dart| ((d.edge.layer - 1) * self.degree + d.edge.k - 1) * 2 + d.up as usize;
        let mut used = vec![false; layers * self.degree * 2];
        let mut faces = Vec::new();
        for k in 1..=self.degree {
            let start = Dart {
                edge: EdgeRef { layer: 1, k },
                up: true,
            };
            if used[index(&start)] {
                continue;
            }
            let mut face = Vec::new();
            let mut dart = start;
            loop {
                used[index(&dart)] = true;
                face.push(dart);
                let (layer, v) = self.head(dart);
                let rot = &self.rotations[layer][v];
                let p = self.position(layer, v, dart.edge);
                let next = rot[(p + rot.len() - 1) % rot.len()];
                dart = Dart {
                    edge: next,
                    up: next.layer == layer + 1,
                };
                if dart == start {
                    break;
                }
            }
            faces.push(face);
        }
        faces
    }

    /// Renames the edges of each layer: `e_i^k` becomes `e_i^{perms[i-1](k)}`.
    pub fn relabel_edges(&self, perms: &[Permutation]) -> Dessin {
        let rename = |e: EdgeRef| EdgeRef {
            layer: e.layer,
            k: perms[e.layer - 1].apply(e.k - 1) + 1,
        };
        let rotations = self
            .rotations
            .iter()
            .map(|layer| layer.iter().map(|rot| rot.iter().map(|&e| rename(e)).collect()).collect())
            .collect();
        let mut edges = self.edges.clone();
        for (i, layer) in self.edges.iter().enumerate() {
            for (k, e) in layer.iter().enumerate() {
                edges[i][perms[i].apply(k)] = *e;
            }
        }
        Dessin::from_rotations(self.degree, rotations, edges).expect("relabeling keeps structure")
    }

    /// Line-oriented dump: vertices with rotations, edges, faces.
    pub fn export(&self) -> String {
        let mut out = String::new();
        let edge_list = |es: &mut dyn Iterator<Item = EdgeRef>| {
            es.map(|e| format!("{}:{}", e.layer, e.k)).collect::<Vec<_>>().join(",")
        };
        for (i, layer) in self.rotations.iter().enumerate() {
            for (v, rot) in layer.iter().enumerate() {
                let _ = writeln!(out, "vertex {} {} rot={}", i + 1, v + 1, edge_list(&mut rot.iter().copied()));
            }
        }
        for (i, layer) in self.edges.iter().enumerate() {
            for (k, e) in layer.iter().enumerate() {
                let _ = writeln!(out, "edge {} {} {} {}", i + 1, k + 1, e.lower + 1, e.upper + 1);
            }
        }
        for face in &self.faces {
            let _ = writeln!(
                out,
                "face len={} edges={}",
                face.len(),
                edge_list(&mut face.iter().map(|d| d.edge))
            );
        }
        out
    }
}

/// Builds the dessin of a raw tuple `π1, …, π(n-1)`.
pub fn dessin_from_permutations(perms: &[Permutation]) -> Result<Dessin, DessinError> {
    if perms.len() < 2 {
        return Err(DessinError::TooFewLayers(perms.len()));
    }
    let d = perms[0].degree();
    if perms.iter().any(|p| p.degree() != d) {
        return Err(DessinError::DegreeMismatch);
    }
    if !is_transitive(d, perms) {
        return Err(DessinError::Disconnected);
    }
    let last = perms.len() - 1;

    // vertex index of each point in each layer
    let mut owner = vec![vec![0usize; d]; perms.len()];
    let mut rotations = Vec::with_capacity(perms.len());
    for (i, p) in perms.iter().enumerate() {
        let mut layer = Vec::new();
        for (v, cycle) in p.cycles().into_iter().enumerate() {
            let mut rot = Vec::new();
            for &x in &cycle {
                owner[i][x] = v;
                let k = x + 1;
                if i < last {
                    rot.push(EdgeRef { layer: i + 1, k });
                }
                if i > 0 {
                    rot.push(EdgeRef { layer: i, k });
                }
            }
            layer.push(rot);
        }
        rotations.push(layer);
    }
    let edges = (0..last)
        .map(|i| {
            (0..d)
                .map(|x| Edge {
                    lower: owner[i][x],
                    upper: owner[i + 1][x],
                })
                .collect()
        })
        .collect();
    Dessin::from_rotations(d, rotations, edges)
}

/// Reads a raw tuple back from a dessin. Edges of `E1` keep their numbers;
/// deeper layers are renumbered so that around each vertex `e_i^k` is
/// followed by `e_{i-1}^k`.
pub fn permutations_from_dessin(dsn: &Dessin) -> Result<Vec<Permutation>, DessinError> {
    let d = dsn.degree;
    let layers = dsn.rotations.len();
    let malformed = |msg: String| DessinError::Malformed(msg);

    // number[i][k-1]: derived number of e_{i+1}^k
    let mut number: Vec<Vec<usize>> = vec![(0..d).collect()];
    for i in 1..layers - 1 {
        let mut current = vec![usize::MAX; d];
        for rot in &dsn.rotations[i] {
            for (p, e) in rot.iter().enumerate() {
                if e.layer != i + 1 {
                    continue;
                }
                let follower = rot[(p + 1) % rot.len()];
                if follower.layer != i {
                    return Err(malformed(format!("edge {}:{} not followed by a lower edge", e.layer, e.k)));
                }
                current[e.k - 1] = number[i - 1][follower.k - 1];
            }
        }
        let mut check = current.clone();
        check.sort_unstable();
        if check != (0..d).collect::<Vec<_>>() {
            return Err(malformed(format!("edges of layer {} cannot be numbered consistently", i + 1)));
        }
        number.push(current);
    }

    let mut perms = Vec::with_capacity(layers);
    for i in 0..layers {
        // layer of edges read at this vertex layer
        let el = if i + 1 < layers { i } else { i - 1 };
        let mut images = vec![0usize; d];
        for rot in &dsn.rotations[i] {
            let own: Vec<EdgeRef> = rot.iter().copied().filter(|e| e.layer == el + 1).collect();
            for (p, e) in own.iter().enumerate() {
                let next = own[(p + 1) % own.len()];
                images[number[el][e.k - 1]] = number[el][next.k - 1];
            }
        }
        perms.push(Permutation::from_images(&images).map_err(|e| malformed(e.to_string()))?);
    }
    Ok(perms)
}

/// Dessin of a realization with at least three permutations.
pub fn dessin_from_realization(r: &Realization) -> Result<Dessin, DessinError> {
    let taus = r.taus();
    if taus.len() < 3 {
        return Err(DessinError::TooFewLayers(taus.len().saturating_sub(1)));
    }
    let raw: Vec<Permutation> = taus[..taus.len() - 1].iter().map(Permutation::inverse).collect();
    dessin_from_permutations(&raw)
}

/// Realization read back from a dessin; the last permutation is solved from
/// the product.
pub fn realization_from_dessin(dsn: &Dessin) -> Result<Realization, DessinError> {
    let mut taus: Vec<Permutation> = permutations_from_dessin(dsn)?
        .iter()
        .map(Permutation::inverse)
        .collect();
    let prod = crate::realizer::product(dsn.degree, &taus);
    taus.push(prod.inverse());
    Realization::new(dsn.degree, taus).map_err(|e| DessinError::Malformed(e.to_string()))
}

/// Same layered rotation system up to renumbering the edges.
pub fn is_isomorphic(a: &Dessin, b: &Dessin) -> bool {
    if a.degree != b.degree || a.n() != b.n() {
        return false;
    }
    match (permutations_from_dessin(a), permutations_from_dessin(b)) {
        (Ok(pa), Ok(pb)) => simultaneous_conjugator(&pa, &pb).is_some(),
        _ => false,
    }
}

fn scaled(p: &Partition, factor: usize) -> Vec<usize> {
    p.parts().iter().map(|x| x * factor).collect()
}

/// Whether the valences and face lengths match some assignment of the
/// datum's partitions to the branching points, and the surface is the cover.
pub fn validate_against_datum(dsn: &Dessin, datum: &BranchDatum) -> bool {
    let n = dsn.n();
    if datum.n() != n || datum.degree() != dsn.degree || dsn.surface() != Some(datum.cover()) {
        return false;
    }
    if !datum.base().is_sphere() {
        return false;
    }
    let faces = dsn.face_lengths();
    let scale = 2 * (n - 2);
    if faces.iter().any(|l| l % scale != 0) {
        return false;
    }
    let mut observed: Vec<Vec<usize>> = Vec::with_capacity(n);
    for layer in 1..n {
        let mut v = dsn.valences(layer);
        if layer > 1 && layer < n - 1 {
            if v.iter().any(|x| x % 2 == 1) {
                return false;
            }
            v.iter_mut().for_each(|x| *x /= 2);
        }
        observed.push(v);
    }
    observed.push(faces.iter().map(|l| l / scale).collect());
    let mut expected: Vec<Vec<usize>> = datum.partitions().iter().map(|p| scaled(p, 1)).collect();
    // identity partitions are not branching points
    observed.retain(|v| v.iter().any(|&x| x > 1));
    observed.sort();
    expected.sort();
    observed == expected
}

/// Black/white assignment of faces, opposite across every edge. `None` when
/// some vertex has odd valence.
pub fn checkerboard_coloring(dsn: &Dessin) -> Result<Option<Vec<bool>>, DessinError> {
    match dsn.surface() {
        Some(s) if s.is_sphere() => {}
        Some(s) => return Err(DessinError::NotSphere(s)),
        None => return Err(DessinError::Malformed("Euler characteristic out of range".into())),
    }
    if dsn.rotations.iter().flatten().any(|rot| rot.len() % 2 == 1) {
        return Ok(None);
    }
    // the two faces on either side of each edge
    let layers = dsn.edges.len();
    let mut sides = vec![Vec::with_capacity(2); layers * dsn.degree];
    for (f, face) in dsn.faces.iter().enumerate() {
        for dart in face {
            sides[(dart.edge.layer - 1) * dsn.degree + dart.edge.k - 1].push(f);
        }
    }
    let mut adjacent = vec![Vec::new(); dsn.faces.len()];
    for s in &sides {
        let (a, b) = (s[0], s[1]);
        adjacent[a].push(b);
        adjacent[b].push(a);
    }
    let mut color: Vec<Option<bool>> = vec![None; dsn.faces.len()];
    for start in 0..dsn.faces.len() {
        if color[start].is_some() {
            continue;
        }
        color[start] = Some(true);
        let mut queue = VecDeque::from([start]);
        while let Some(f) = queue.pop_front() {
            let c = color[f].expect("colored");
            for &g in &adjacent[f] {
                match color[g] {
                    None => {
                        color[g] = Some(!c);
                        queue.push_back(g);
                    }
                    Some(cg) if cg == c => return Ok(None),
                    Some(_) => {}
                }
            }
        }
    }
    Ok(Some(color.into_iter().map(|c| c.expect("colored")).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::realizer::{search, SearchOutcome, DEFAULT_BUDGET};

    fn cyc(d: usize, cycles: &[&[usize]]) -> Permutation {
        Permutation::from_cycles(d, cycles).unwrap()
    }

    #[test]
    fn four_cycle_example() {
        let dsn = dessin_from_permutations(&[cyc(4, &[&[1, 2, 3, 4]]), cyc(4, &[&[1, 3, 2]])]).unwrap();
        assert_eq!(dsn.vertex_count(), 3);
        assert_eq!(dsn.edge_count(), 4);
        assert_eq!(dsn.faces().len(), 3);
        assert_eq!(dsn.euler_characteristic(), 2);
        assert_eq!(dsn.face_lengths(), vec![4, 2, 2]);
        let datum: BranchDatum = "d=4 cover=O0 base=O0 parts=[4|3,1|2,1,1]".parse().unwrap();
        assert!(validate_against_datum(&dsn, &datum));
        let wrong: BranchDatum = "d=4 cover=O0 base=O0 parts=[4|4|3,1]".parse().unwrap();
        assert!(!validate_against_datum(&dsn, &wrong));
        let back = permutations_from_dessin(&dsn).unwrap();
        let types: Vec<String> = back.iter().map(|p| p.cycle_type().to_string()).collect();
        assert_eq!(types, ["4", "3,1"]);
    }

    #[test]
    fn faces_follow_the_return_recipe() {
        let perms = [
            cyc(5, &[&[1, 2], &[3, 4]]),
            cyc(5, &[&[2, 3, 5]]),
            cyc(5, &[&[1, 5], &[2, 4]]),
        ];
        let dsn = dessin_from_permutations(&perms).unwrap();
        let inv: Vec<Permutation> = perms.iter().map(Permutation::inverse).collect();
        for face in dsn.faces() {
            // each round: up along k, down along the inverses
            for round in face.chunks(4) {
                let k = round[0].edge.k - 1;
                assert_eq!(round[1].edge, EdgeRef { layer: 2, k: k + 1 });
                let a = inv[2].apply(k);
                assert_eq!(round[2].edge, EdgeRef { layer: 2, k: a + 1 });
                let b = inv[1].apply(a);
                assert_eq!(round[3].edge, EdgeRef { layer: 1, k: b + 1 });
            }
        }
        let total: usize = dsn.face_lengths().iter().sum();
        assert_eq!(total, 2 * 2 * 5);
    }

    #[test]
    fn circle_dessin() {
        let t = cyc(2, &[&[1, 2]]);
        let dsn = dessin_from_permutations(&[t.clone(), t.clone()]).unwrap();
        assert_eq!(dsn.vertex_count(), 2);
        assert_eq!(dsn.edge_count(), 2);
        assert_eq!(permutations_from_dessin(&dsn).unwrap(), vec![t.clone(), t]);
        let colors = checkerboard_coloring(&dsn).unwrap().unwrap();
        assert_eq!(colors.len(), 2);
        assert_ne!(colors[0], colors[1]);
    }

    #[test]
    fn degree_one() {
        let id = Permutation::identity(1);
        let dsn = dessin_from_permutations(&[id.clone(), id.clone()]).unwrap();
        assert_eq!(permutations_from_dessin(&dsn).unwrap(), vec![id.clone(), id]);
        assert_eq!(dsn.euler_characteristic(), 2);
    }

    #[test]
    fn disconnected_rejected() {
        let id = Permutation::identity(3);
        assert_eq!(
            dessin_from_permutations(&[id.clone(), id]),
            Err(DessinError::Disconnected)
        );
    }

    #[test]
    fn odd_valence_has_no_coloring() {
        let dsn = dessin_from_permutations(&[cyc(3, &[&[1, 2, 3]]), cyc(3, &[&[1, 3, 2]])]).unwrap();
        assert_eq!(checkerboard_coloring(&dsn), Ok(None));
    }

    #[test]
    fn relabeled_dessin_reads_back_conjugate() {
        let perms = vec![cyc(5, &[&[1, 2, 3]]), cyc(5, &[&[3, 4], &[1, 5]]), cyc(5, &[&[2, 5]])];
        let dsn = dessin_from_permutations(&perms).unwrap();
        let shuffles = vec![
            cyc(5, &[&[1, 4, 2]]),
            cyc(5, &[&[2, 5], &[3, 4]]),
        ];
        let moved = dsn.relabel_edges(&shuffles);
        let back = permutations_from_dessin(&moved).unwrap();
        assert!(simultaneous_conjugator(&perms, &back).is_some());
        assert!(is_isomorphic(&dsn, &moved));
        assert_eq!(moved.face_lengths(), dsn.face_lengths());
    }

    #[test]
    fn malformed_rotation_rejected() {
        let dsn = dessin_from_permutations(&[cyc(3, &[&[1, 2, 3]]), cyc(3, &[&[1, 2]]), cyc(3, &[&[2, 3]])]).unwrap();
        let mut rotations = dsn.rotations.clone();
        // break the alternation at a middle vertex
        let rot = &mut rotations[1][0];
        rot.swap(0, 1);
        rot.swap(1, 2);
        let err = Dessin::from_rotations(3, rotations, dsn.edges.clone());
        assert!(matches!(err, Err(DessinError::Malformed(_))));
    }

    #[test]
    fn witnesses_give_valid_dessins() {
        for s in [
            "d=6 cover=O0 base=O0 parts=[3,3|2,2,2|2,2,2]",
            "d=6 cover=O0 base=O0 parts=[4,1,1|3,2,1|2,2,1,1|2,2,1,1]",
            "d=5 cover=O1 base=O0 parts=[5|5|3,1,1]",
        ] {
            let datum: BranchDatum = s.parse().unwrap();
            let SearchOutcome::Found(r) = search(&datum, DEFAULT_BUDGET).unwrap().outcome else {
                panic!("{s} realizable")
            };
            let dsn = dessin_from_realization(&r).unwrap();
            assert!(validate_against_datum(&dsn, &datum), "{s}");
            let back = realization_from_dessin(&dsn).unwrap();
            assert_eq!(back, r);
        }
    }

    #[test]
    fn even_sphere_dessin_coloring_unique() {
        let datum: BranchDatum = "d=6 cover=O0 base=O0 parts=[3,3|2,2,2|2,2,2]".parse().unwrap();
        let SearchOutcome::Found(r) = search(&datum, DEFAULT_BUDGET).unwrap().outcome else { panic!() };
        // (2,2,2) twice as the vertex layers
        let raw: Vec<Permutation> = r.taus()[1..].iter().map(Permutation::inverse).collect();
        let dsn = dessin_from_permutations(&raw).unwrap();
        let colors = checkerboard_coloring(&dsn).unwrap().unwrap();
        assert_eq!(colors.iter().filter(|&&c| c).count(), colors.len() / 2);
    }

    #[test]
    fn export_format() {
        let t = cyc(2, &[&[1, 2]]);
        let dsn = dessin_from_permutations(&[t.clone(), t]).unwrap();
        let text = dsn.export();
        assert!(text.contains("vertex 1 1 rot=1:1,1:2"));
        assert!(text.contains("edge 1 2 1 1"));
        assert!(text.contains("face len=2 edges=1:1,1:2"));
    }
}
