//! Distance labelings of pointed maps and the map <-> mobile constructions.
//!
//! Mobile edges are numbered like the map edges they come from (edge `k` of
//! the map owns half-edges `2k`, `2k + 1`). In the inverse direction every
//! map edge is built as a pair `2k`, `2k + 1` where `2k` runs from the lower
//! label to the higher one, or along the orientation for Eulerian maps.

use std::collections::{BTreeMap, VecDeque};

use thiserror::Error;

use crate::map::{Color, MapError, PlanarMap};
use crate::mobile::{ContourItem, EdgeKind, Flavor, Mobile, MobileEdge, MobileError, NodeKind, Violation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BijectionError {
    #[error("NotBipartite: the map has a face of odd valence or is not vertex 2-colorable")]
    NotBipartite,
    #[error("NotEulerian: the map has no face bicoloring")]
    NotEulerian,
    #[error("NotWellLabeled: {0}")]
    NotWellLabeled(String),
    #[error("InvalidLabels: {0}")]
    InvalidLabels(Violation),
    #[error("NoOrigin: the map has no origin vertex")]
    NoOrigin,
    #[error("InternalError: {0}")]
    Internal(String),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Mobile(#[from] MobileError),
}

/// Half-edge rotation of every vertex, in clockwise order.
pub fn rotations(map: &PlanarMap) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new(); map.num_vertices()];
    let mut seen = vec![false; map.num_half_edges()];
    for start in 0..map.num_half_edges() {
        if seen[start] {
            continue;
        }
        let v = map.vertex(start);
        let mut h = start;
        loop {
            seen[h] = true;
            out[v].push(h);
            h = map.next_cw(h);
            if h == start {
                break;
            }
        }
    }
    out
}

/// Oriented half-edges of a face-bicolored map: those with a black face on
/// their right.
pub fn is_oriented(map: &PlanarMap, h: usize) -> bool {
    map.face_color(map.face(h)) == Some(Color::Black)
}

/// Breadth-first distances from `origin`. On a face-bicolored map only
/// half-edges with a black face on their right are followed; otherwise
/// edges are traversed both ways.
pub fn label_distances(map: &PlanarMap, origin: usize) -> Result<Vec<i64>, BijectionError> {
    let oriented = map.is_colored();
    let mut out_edges = vec![Vec::new(); map.num_vertices()];
    for h in 0..map.num_half_edges() {
        if !oriented || is_oriented(map, h) {
            out_edges[map.vertex(h)].push(map.target(h));
        }
    }
    let mut dist = vec![-1i64; map.num_vertices()];
    dist[origin] = 0;
    let mut queue = VecDeque::from([origin]);
    while let Some(v) = queue.pop_front() {
        for &w in &out_edges[v] {
            if dist[w] < 0 {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
        }
    }
    if let Some(v) = dist.iter().position(|&d| d < 0) {
        return Err(BijectionError::Internal(format!("vertex {v} unreachable from the origin")));
    }
    Ok(dist)
}

/// Relabel half-edges so that opposite half-edges are `2k` and `2k + 1`.
pub fn normalized(map: &PlanarMap) -> PlanarMap {
    if (0..map.num_half_edges()).all(|h| map.opposite(h) == h ^ 1) {
        return map.clone();
    }
    let mut perm = vec![usize::MAX; map.num_half_edges()];
    let mut next = 0;
    for h in 0..map.num_half_edges() {
        if perm[h] == usize::MAX {
            perm[h] = next;
            perm[map.opposite(h)] = next + 1;
            next += 2;
        }
    }
    map.relabel(&perm)
}

fn origin_of(map: &PlanarMap, origin: Option<usize>) -> Result<usize, BijectionError> {
    origin.or(map.origin()).ok_or(BijectionError::NoOrigin)
}

/// Normalized copy of `map` pointed at the requested origin.
fn pointed(map: &PlanarMap, origin: Option<usize>) -> Result<(PlanarMap, usize), BijectionError> {
    let origin = origin_of(map, origin)?;
    let map = normalized(&map.with_markers(Some(origin), map.root())?);
    let origin = map.origin().expect("origin was just set");
    Ok((map, origin))
}

/// Node ids used by the forward constructions: faces first, then the
/// non-origin vertices.
struct NodeIds {
    vertex_node: Vec<usize>,
    nodes: Vec<NodeKind>,
}

fn node_ids(map: &PlanarMap, origin: usize, labels: &[i64], face_kind: impl Fn(usize) -> NodeKind) -> NodeIds {
    let mut nodes: Vec<NodeKind> = (0..map.num_faces()).map(face_kind).collect();
    let mut vertex_node = vec![usize::MAX; map.num_vertices()];
    for v in 0..map.num_vertices() {
        if v != origin {
            vertex_node[v] = nodes.len();
            nodes.push(NodeKind::Labeled(labels[v]));
        }
    }
    NodeIds { vertex_node, nodes }
}

/// Mobile of a pointed bipartite map: every face gets a white vertex joined
/// to the corners whose label is followed clockwise by a smaller one.
pub fn map_to_mobile_bipartite(map: &PlanarMap, origin: Option<usize>) -> Result<Mobile, BijectionError> {
    if !map.check_even_bipartite() {
        return Err(BijectionError::NotBipartite);
    }
    let (plain, origin) = pointed(&map.with_coloring(None)?, origin)?;
    let labels = label_distances(&plain, origin)?;
    let down = |h: usize| labels[plain.target(h)] < labels[plain.vertex(h)];
    let ids = node_ids(&plain, origin, &labels, |_| NodeKind::White);
    let mut edges = vec![MobileEdge { ends: [0, 0], kind: EdgeKind::Plain }; plain.num_edges()];
    let mut around = vec![Vec::new(); ids.nodes.len()];
    for face in plain.faces() {
        for &h in &face.contour {
            if down(h) {
                edges[h / 2].ends = [ids.vertex_node[plain.vertex(h)], face.id];
                around[face.id].push(h / 2);
            }
        }
    }
    for (v, rot) in rotations(&plain).into_iter().enumerate() {
        if v != origin {
            around[ids.vertex_node[v]] = rot.into_iter().filter(|&h| down(h)).map(|h| h / 2).collect();
        }
    }
    let mobile = Mobile::new(Flavor::Bipartite, ids.nodes, edges, around, None)?;
    let root = match plain.root() {
        Some(r) => {
            let h = if down(r) { r } else { plain.opposite(r) };
            Some(corner_index(&mobile, ids.vertex_node[plain.vertex(h)], h / 2))
        }
        None => None,
    };
    check_counts(&plain, &mobile)?;
    Ok(mobile.with_root(root)?)
}

fn corner_index(mobile: &Mobile, node: usize, edge: usize) -> usize {
    let dart = mobile.dart_at(edge, node);
    mobile
        .contour()
        .iter()
        .position(|c| matches!(*c, ContourItem::Corner { dart: Some(d), .. } if d == dart))
        .expect("every dart at a labeled vertex starts a corner")
}

fn check_counts(map: &PlanarMap, mobile: &Mobile) -> Result<(), BijectionError> {
    // a lone labeled vertex stands for the single-edge map
    let lone = mobile.edges().is_empty() && map.num_edges() == 1 && map.num_vertices() == 2;
    let ok = lone
        || mobile.edges().len() == map.num_edges()
        && mobile.num_unlabeled() == map.num_faces()
        && mobile.num_labeled() + 1 == map.num_vertices();
    if ok {
        Ok(())
    } else {
        Err(BijectionError::Internal("edge, face or vertex counts do not match".into()))
    }
}

/// Mobile of a pointed face-bicolored map. An oriented edge whose label
/// increases by one joins its head to the white face on its left; any other
/// edge joins the two faces with a flagged edge.
pub fn map_to_mobile_eulerian(map: &PlanarMap, origin: Option<usize>) -> Result<Mobile, BijectionError> {
    if !map.is_colored() {
        return Err(BijectionError::NotEulerian);
    }
    let (map, origin) = pointed(map, origin)?;
    let map = &map;
    let colors = map.face_colors().expect("colored").to_vec();
    let labels = label_distances(map, origin)?;
    // white-side half-edge of an edge of the first kind
    let plain_side = |h: usize| {
        colors[map.face(h)] == Color::White && labels[map.vertex(h)] == labels[map.target(h)] + 1
    };
    let ids = node_ids(map, origin, &labels, |f| match colors[f] {
        Color::White => NodeKind::White,
        Color::Black => NodeKind::Black,
    });
    let mut edges = vec![MobileEdge { ends: [0, 0], kind: EdgeKind::Plain }; map.num_edges()];
    let mut around = vec![Vec::new(); ids.nodes.len()];
    for face in map.faces() {
        for &h in &face.contour {
            let e = h / 2;
            match face.color {
                Some(Color::White) => {
                    if plain_side(h) {
                        edges[e] = MobileEdge { ends: [ids.vertex_node[map.vertex(h)], face.id], kind: EdgeKind::Plain };
                    } else {
                        edges[e].ends[1] = face.id;
                    }
                    around[face.id].push(e);
                }
                _ => {
                    if !plain_side(map.opposite(h)) {
                        edges[e].ends[0] = face.id;
                        edges[e].kind = EdgeKind::Flagged {
                            first_at_black: labels[map.vertex(h)],
                            second_at_black: labels[map.target(h)],
                        };
                        around[face.id].push(e);
                    }
                }
            }
        }
    }
    for (v, rot) in rotations(map).into_iter().enumerate() {
        if v != origin {
            around[ids.vertex_node[v]] = rot.into_iter().filter(|&h| plain_side(h)).map(|h| h / 2).collect();
        }
    }
    let mobile = Mobile::new(Flavor::Eulerian, ids.nodes, edges, around, None)?;
    let root = match map.root() {
        Some(r) => {
            let e = r / 2;
            match mobile.edges()[e].kind {
                EdgeKind::Plain => Some(corner_index(&mobile, mobile.edges()[e].ends[0], e)),
                _ => mobile.flag_index(e),
            }
        }
        None => None,
    };
    check_counts(map, &mobile)?;
    Ok(mobile.with_root(root)?)
}

/// Where an arc of the reconstructed map ends.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Target {
    Origin,
    /// contour position of the target corner (may be the sentinel `len`)
    Corner(usize),
}

/// Rebuild the pointed map of a well-labeled bipartite or Eulerian mobile by
/// joining every corner and flag to its successor.
fn successor_map(mobile: &Mobile) -> Result<PlanarMap, BijectionError> {
    let report = mobile.validate();
    if let Some(v) = report.violation {
        return Err(BijectionError::InvalidLabels(v));
    }
    if !mobile.check_well_labeled() {
        return Err(BijectionError::NotWellLabeled("labels do not reach the minimum".into()));
    }
    let contour = mobile.contour();
    let len = contour.len();
    let origin_bound = |c: &ContourItem| match c {
        ContourItem::Corner { label, .. } => *label == 1,
        ContourItem::Flag { label, .. } => *label == 0,
    };
    let start = contour
        .iter()
        .position(origin_bound)
        .ok_or_else(|| BijectionError::NotWellLabeled("no corner labeled 1 or flag labeled 0".into()))?;
    let seq: Vec<ContourItem> = (0..len).map(|i| contour[(start + i) % len]).collect();
    let max_label = seq.iter().map(|c| c.label()).max().unwrap_or(0).max(1) as usize;
    let mut next_corner = vec![usize::MAX; max_label + 2];
    if let ContourItem::Corner { label, .. } = seq[0] {
        next_corner[label as usize] = len;
    }
    let mut target = vec![Target::Origin; len];
    for i in (0..len).rev() {
        let c = seq[i];
        let want = match c {
            ContourItem::Corner { label, .. } => label - 1,
            ContourItem::Flag { label, .. } => label,
        };
        if want == 0 {
            target[i] = Target::Origin;
        } else {
            let j = next_corner[want as usize];
            if j == usize::MAX {
                return Err(BijectionError::Internal(format!("no successor for contour item {i}")));
            }
            target[i] = Target::Corner(j);
        }
        if let ContourItem::Corner { label, .. } = c {
            next_corner[label as usize] = i;
        }
    }

    // map edges: one per corner, one per flagged or single-flag mobile edge
    let n_edges = mobile.edges().len();
    let mut edge_of_item = vec![usize::MAX; len];
    let mut next_edge = 0;
    let mut flag_edge: BTreeMap<usize, usize> = BTreeMap::new();
    for (i, c) in seq.iter().enumerate() {
        match *c {
            ContourItem::Corner { .. } => {
                edge_of_item[i] = next_edge;
                next_edge += 1;
            }
            ContourItem::Flag { dart, .. } => {
                let e = *flag_edge.entry(dart / 2).or_insert_with(|| {
                    next_edge += 1;
                    next_edge - 1
                });
                edge_of_item[i] = e;
            }
        }
    }
    if next_edge != n_edges.max(1) {
        return Err(BijectionError::Internal("edge count mismatch".into()));
    }
    // half-edge owned by item i at its target end
    let target_end = |i: usize| -> usize {
        let e = edge_of_item[i];
        match seq[i] {
            // arcs run from the successor (lower label) to the corner
            ContourItem::Corner { .. } => 2 * e,
            ContourItem::Flag { dart, .. } => {
                if dart % 2 == 0 {
                    2 * e
                } else {
                    2 * e + 1
                }
            }
        }
    };
    // ends attached at each corner position (sentinel folded onto 0)
    let mut incoming: Vec<Vec<usize>> = vec![Vec::new(); len];
    let mut at_origin = Vec::new();
    for i in (0..len).rev() {
        match target[i] {
            Target::Origin => at_origin.push(target_end(i)),
            Target::Corner(j) => incoming[j % len].push(target_end(i)),
        }
    }
    // rotation lists of the map vertices
    let mut rotation_lists: Vec<Vec<usize>> = Vec::new();
    let mut corner_pos = vec![usize::MAX; 2 * n_edges.max(1)];
    for (i, c) in seq.iter().enumerate() {
        if let ContourItem::Corner { dart: Some(d), .. } = *c {
            corner_pos[d] = i;
        }
    }
    let corner_ends = |i: usize| {
        let mut ends = incoming[i].clone();
        ends.push(2 * edge_of_item[i] + 1);
        ends
    };
    for (u, kind) in mobile.nodes().iter().enumerate() {
        if let NodeKind::Labeled(_) = kind {
            let mut list = Vec::new();
            if mobile.edges().is_empty() {
                list.extend(corner_ends(0));
            }
            for &e in mobile.around(u) {
                list.extend(corner_ends(corner_pos[mobile.dart_at(e, u)]));
            }
            rotation_lists.push(list);
        }
    }
    rotation_lists.push(at_origin);
    let n = 2 * next_edge;
    let mut next_cw = vec![usize::MAX; n];
    for list in &rotation_lists {
        for (i, &h) in list.iter().enumerate() {
            next_cw[h] = list[(i + 1) % list.len()];
        }
    }
    let opposite: Vec<usize> = (0..n).map(|h| h ^ 1).collect();
    let plain = PlanarMap::build(opposite, next_cw, None, None, None)?;
    let origin = plain.vertex(*rotation_lists.last().unwrap().first().expect("origin has an edge"));
    let root = mobile.root().map(|r| {
        let i = (r + len - start) % len;
        2 * edge_of_item[i]
    });
    Ok(plain.with_markers(Some(origin), root)?)
}

/// Inverse of [`map_to_mobile_bipartite`].
pub fn mobile_to_map_bipartite(mobile: &Mobile) -> Result<PlanarMap, BijectionError> {
    if mobile.flavor() != Flavor::Bipartite {
        return Err(MobileError::BadFlavor(format!("expected a bipartite mobile, got {}", mobile.flavor())).into());
    }
    let map = successor_map(mobile)?;
    check_counts(&map, mobile)?;
    Ok(map)
}

/// Inverse of [`map_to_mobile_eulerian`]; the output carries its face
/// bicoloring.
pub fn mobile_to_map_eulerian(mobile: &Mobile) -> Result<PlanarMap, BijectionError> {
    if mobile.is_simplified() || mobile.flavor() == Flavor::Bipartite {
        return Err(MobileError::BadFlavor(format!("expected an Eulerian mobile, got {}", mobile.flavor())).into());
    }
    let map = successor_map(mobile)?;
    let colors = map
        .face_two_coloring(0, Color::Black)
        .ok_or_else(|| BijectionError::Internal("reconstructed map is not face-bicolorable".into()))?;
    let map = map.with_coloring(Some(colors))?;
    check_counts(&map, mobile)?;
    Ok(map)
}

/// Mobile of a pointed map of any kind, through its inflated Eulerian map.
pub fn map_to_mobile_arbitrary(map: &PlanarMap, origin: Option<usize>) -> Result<Mobile, BijectionError> {
    let origin = origin_of(map, origin)?;
    let plain = if map.is_colored() { map.with_coloring(None)? } else { map.clone() };
    let inflated = plain.with_markers(Some(origin), plain.root())?.inflate_edges()?;
    let eulerian = map_to_mobile_eulerian(&inflated, None)?;
    Ok(eulerian.simplify(Flavor::Arbitrary)?)
}

pub fn mobile_to_map_arbitrary(mobile: &Mobile) -> Result<PlanarMap, BijectionError> {
    let eulerian = mobile.unsimplify()?;
    let inflated = mobile_to_map_eulerian(&eulerian)?;
    inflated
        .deflate_edges()
        .ok_or_else(|| BijectionError::Internal("black faces of the rebuilt map are not all 2-valent".into()))
}

/// Simplified mobile of a pointed p-constellation (every black face of
/// valence p).
pub fn map_to_mobile_constellation(map: &PlanarMap, origin: Option<usize>, p: u32) -> Result<Mobile, BijectionError> {
    let eulerian = map_to_mobile_eulerian(map, origin)?;
    Ok(eulerian.simplify(Flavor::PConstellation(p))?)
}

pub fn mobile_to_map_constellation(mobile: &Mobile) -> Result<PlanarMap, BijectionError> {
    mobile_to_map_eulerian(&mobile.unsimplify()?)
}

/// Dispatch on the mobile flavor.
pub fn mobile_to_map(mobile: &Mobile) -> Result<PlanarMap, BijectionError> {
    match mobile.flavor() {
        Flavor::Bipartite => mobile_to_map_bipartite(mobile),
        Flavor::Arbitrary if mobile.is_simplified() => mobile_to_map_arbitrary(mobile),
        Flavor::PConstellation(_) if mobile.is_simplified() => mobile_to_map_constellation(mobile),
        _ => mobile_to_map_eulerian(mobile),
    }
}

/// Dispatch on the requested flavor.
pub fn map_to_mobile(map: &PlanarMap, origin: Option<usize>, flavor: Flavor) -> Result<Mobile, BijectionError> {
    match flavor {
        Flavor::Bipartite => map_to_mobile_bipartite(map, origin),
        Flavor::Eulerian => map_to_mobile_eulerian(map, origin),
        Flavor::PConstellation(p) => map_to_mobile_constellation(map, origin, p),
        Flavor::Arbitrary => map_to_mobile_arbitrary(map, origin),
    }
}

/// Vertex counts per distance and edge counts per (smaller, larger)
/// endpoint distance.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DistanceProfile {
    pub vertices: BTreeMap<i64, u64>,
    pub edges: BTreeMap<(i64, i64), u64>,
}

impl DistanceProfile {
    pub fn add(&mut self, other: &DistanceProfile) {
        for (k, v) in &other.vertices {
            *self.vertices.entry(*k).or_default() += v;
        }
        for (k, v) in &other.edges {
            *self.edges.entry(*k).or_default() += v;
        }
    }
}

pub fn profile(map: &PlanarMap, origin: Option<usize>) -> Result<DistanceProfile, BijectionError> {
    let (map, origin) = pointed(map, origin)?;
    let map = &map;
    let labels = label_distances(map, origin)?;
    let mut out = DistanceProfile::default();
    for &l in &labels {
        *out.vertices.entry(l).or_default() += 1;
    }
    for e in 0..map.num_edges() {
        let (a, b) = (labels[map.vertex(2 * e)], labels[map.target(2 * e)]);
        *out.edges.entry((a.min(b), a.max(b))).or_default() += 1;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map::fixtures::*;
    use crate::mobile::fixtures as mob;

    fn labels_of(m: &Mobile) -> Vec<i64> {
        m.contour().iter().map(|c| c.label()).collect()
    }

    #[test]
    fn distances() {
        assert_eq!(label_distances(&single_edge(), 0).unwrap(), vec![0, 1]);
        assert_eq!(label_distances(&single_loop(), 0).unwrap(), vec![0]);
        assert_eq!(label_distances(&oriented_triangle(), 0).unwrap(), vec![0, 1, 2]);
    }

    #[test]
    fn bipartite_examples() {
        let m = map_to_mobile_bipartite(&single_edge(), Some(0)).unwrap();
        assert_eq!(m.canonical_code(), mob::star(Flavor::Bipartite, &[1]).canonical_code());
        let m = map_to_mobile_bipartite(&path3(), Some(0)).unwrap();
        assert_eq!(m.canonical_code(), mob::star(Flavor::Bipartite, &[2, 1]).canonical_code());
        let m = map_to_mobile_bipartite(&path3(), Some(1)).unwrap();
        assert_eq!(m.canonical_code(), mob::star(Flavor::Bipartite, &[1, 1]).canonical_code());
        let m = map_to_mobile_bipartite(&single_loop(), Some(0));
        assert_eq!(m, Err(BijectionError::NotBipartite));
    }

    #[test]
    fn bipartite_inverse_examples() {
        for (map, origin) in [(single_edge(), 0), (path3(), 0), (path3(), 1)] {
            let pointed = map.with_markers(Some(origin), None).unwrap();
            let mobile = map_to_mobile_bipartite(&pointed, None).unwrap();
            let back = mobile_to_map_bipartite(&mobile).unwrap();
            assert_eq!(back.canonical_code(), pointed.canonical_code());
        }
    }

    #[test]
    fn eulerian_examples() {
        let m = map_to_mobile_eulerian(&single_loop().with_coloring(single_loop().face_two_coloring(0, Color::Black)).unwrap(), Some(0)).unwrap();
        assert_eq!(m.canonical_code(), mob::flagged_pair(0, 0).canonical_code());

        let tri = oriented_triangle();
        let m = map_to_mobile_eulerian(&tri, Some(0)).unwrap();
        assert!(m.validate().is_valid());
        let mut sorted = labels_of(&m);
        sorted.sort();
        assert_eq!(sorted, vec![0, 1, 2, 2]);
        assert_eq!(m.face_profile().unwrap(), (vec![3], vec![3]));
        let back = mobile_to_map_eulerian(&m).unwrap();
        assert_eq!(back.canonical_code(), tri.with_markers(Some(0), None).unwrap().canonical_code());
    }

    #[test]
    fn profiles() {
        let p = profile(&path3(), Some(1)).unwrap();
        assert_eq!(p.vertices, BTreeMap::from([(0, 1), (1, 2)]));
        assert_eq!(p.edges, BTreeMap::from([((0, 1), 2)]));
        let p = profile(&oriented_triangle(), Some(0)).unwrap();
        assert_eq!(p.edges, BTreeMap::from([((0, 1), 1), ((1, 2), 1), ((0, 2), 1)]));
    }

    #[test]
    fn base_cases() {
        let map = mobile_to_map_bipartite(&mob::single_vertex(1)).unwrap();
        assert_eq!(map.num_edges(), 1);
        assert_eq!(map.num_vertices(), 2);
        let map = mobile_to_map_eulerian(&mob::flagged_pair(0, 0)).unwrap();
        assert_eq!(map.num_edges(), 1);
        assert_eq!(map.num_vertices(), 1);
    }
}
