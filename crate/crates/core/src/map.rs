//! Planar maps stored as rotation systems.
//!
//! A map on `E` edges has half-edges `0..2E`. `opposite` pairs the two
//! half-edges of every edge and `next_cw` gives the next half-edge in
//! clockwise order around the common source vertex. The face lying to the
//! right of a half-edge `h` is traversed by `h -> prev_cw(opposite(h))`, so
//! face contours read clockwise around the face.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MapError {
    #[error("NotInvolution: {0}")]
    NotInvolution(String),
    #[error("NotPermutation: next_cw is not a permutation of the half-edges")]
    NotPermutation,
    #[error("NotConnected: the rotation system has {0} components")]
    NotConnected(usize),
    #[error("NonPlanar: V - E + F = {0}")]
    NonPlanar(i64),
    #[error("BadColoring: {0}")]
    BadColoring(String),
    #[error("BadMarker: {0}")]
    BadMarker(String),
    #[error("Empty: a map needs at least one edge")]
    Empty,
    #[error("BadJson: {0}")]
    BadJson(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Color {
    #[serde(rename = "b")]
    Black,
    #[serde(rename = "w")]
    White,
}

impl Color {
    pub fn flip(self) -> Color {
        match self {
            Color::Black => Color::White,
            Color::White => Color::Black,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaceInfo {
    pub id: usize,
    pub color: Option<Color>,
    pub valence: usize,
    /// Half-edges along the face, clockwise, face on the right of each.
    pub contour: Vec<usize>,
}

/// A validated, immutable planar map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanarMap {
    opposite: Vec<usize>,
    next_cw: Vec<usize>,
    prev_cw: Vec<usize>,
    vertex_of: Vec<usize>,
    face_of: Vec<usize>,
    n_vertices: usize,
    n_faces: usize,
    face_color: Option<Vec<Color>>,
    origin: Option<usize>,
    root: Option<usize>,
}

fn orbit_ids(n: usize, step: impl Fn(usize) -> usize) -> (Vec<usize>, usize) {
    let mut id = vec![usize::MAX; n];
    let mut count = 0;
    for start in 0..n {
        if id[start] != usize::MAX {
            continue;
        }
        let mut h = start;
        loop {
            id[h] = count;
            h = step(h);
            if h == start {
                break;
            }
        }
        count += 1;
    }
    (id, count)
}

impl PlanarMap {
    pub fn build(
        opposite: Vec<usize>,
        next_cw: Vec<usize>,
        face_color: Option<Vec<Color>>,
        origin: Option<usize>,
        root: Option<usize>,
    ) -> Result<PlanarMap, MapError> {
        let n = opposite.len();
        if n == 0 {
            return Err(MapError::Empty);
        }
        if !n.is_multiple_of(2) {
            return Err(MapError::NotInvolution(format!("odd number of half-edges ({n})")));
        }
        if next_cw.len() != n {
            return Err(MapError::NotPermutation);
        }
        for (h, &o) in opposite.iter().enumerate() {
            if o >= n || opposite[o] != h || o == h {
                return Err(MapError::NotInvolution(format!("half-edge {h}")));
            }
        }
        let mut prev_cw = vec![usize::MAX; n];
        for (h, &c) in next_cw.iter().enumerate() {
            if c >= n || prev_cw[c] != usize::MAX {
                return Err(MapError::NotPermutation);
            }
            prev_cw[c] = h;
        }
        let components = count_components(&opposite, &next_cw);
        if components != 1 {
            return Err(MapError::NotConnected(components));
        }
        let (vertex_of, n_vertices) = orbit_ids(n, |h| next_cw[h]);
        let (face_of, n_faces) = orbit_ids(n, |h| prev_cw[opposite[h]]);
        let euler = n_vertices as i64 - (n / 2) as i64 + n_faces as i64;
        if euler != 2 {
            return Err(MapError::NonPlanar(euler));
        }
        if let Some(colors) = &face_color {
            if colors.len() != n_faces {
                return Err(MapError::BadColoring(format!(
                    "{} colors for {} faces",
                    colors.len(),
                    n_faces
                )));
            }
            for h in 0..n {
                if colors[face_of[h]] == colors[face_of[opposite[h]]] {
                    return Err(MapError::BadColoring(format!(
                        "both sides of half-edge {h} have the same color"
                    )));
                }
            }
        }
        if let Some(o) = origin {
            if o >= n_vertices {
                return Err(MapError::BadMarker(format!("origin {o} out of range")));
            }
        }
        if let Some(r) = root {
            if r >= n {
                return Err(MapError::BadMarker(format!("root {r} out of range")));
            }
        }
        Ok(PlanarMap {
            opposite,
            next_cw,
            prev_cw,
            vertex_of,
            face_of,
            n_vertices,
            n_faces,
            face_color,
            origin,
            root,
        })
    }

    pub fn num_half_edges(&self) -> usize {
        self.opposite.len()
    }

    pub fn num_edges(&self) -> usize {
        self.opposite.len() / 2
    }

    pub fn num_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn num_faces(&self) -> usize {
        self.n_faces
    }

    pub fn opposite(&self, h: usize) -> usize {
        self.opposite[h]
    }

    pub fn next_cw(&self, h: usize) -> usize {
        self.next_cw[h]
    }

    pub fn prev_cw(&self, h: usize) -> usize {
        self.prev_cw[h]
    }

    /// Next half-edge along the face on the right of `h`.
    pub fn face_next(&self, h: usize) -> usize {
        self.prev_cw[self.opposite[h]]
    }

    /// Source vertex of `h`.
    pub fn vertex(&self, h: usize) -> usize {
        self.vertex_of[h]
    }

    /// Target vertex of `h`.
    pub fn target(&self, h: usize) -> usize {
        self.vertex_of[self.opposite[h]]
    }

    /// Face on the right of `h`.
    pub fn face(&self, h: usize) -> usize {
        self.face_of[h]
    }

    pub fn face_colors(&self) -> Option<&[Color]> {
        self.face_color.as_deref()
    }

    pub fn face_color(&self, f: usize) -> Option<Color> {
        self.face_color.as_ref().map(|c| c[f])
    }

    pub fn is_colored(&self) -> bool {
        self.face_color.is_some()
    }

    pub fn origin(&self) -> Option<usize> {
        self.origin
    }

    pub fn root(&self) -> Option<usize> {
        self.root
    }

    pub fn opposite_slice(&self) -> &[usize] {
        &self.opposite
    }

    pub fn next_cw_slice(&self) -> &[usize] {
        &self.next_cw
    }

    /// The smallest half-edge leaving vertex `v`.
    pub fn vertex_half_edge(&self, v: usize) -> usize {
        self.vertex_of.iter().position(|&x| x == v).expect("vertex id in range")
    }

    /// Half-edges around `v` in clockwise order, starting at the smallest.
    pub fn rotation(&self, v: usize) -> Vec<usize> {
        let start = self.vertex_half_edge(v);
        let mut out = vec![start];
        let mut h = self.next_cw[start];
        while h != start {
            out.push(h);
            h = self.next_cw[h];
        }
        out
    }

    pub fn degree(&self, v: usize) -> usize {
        self.vertex_of.iter().filter(|&&x| x == v).count()
    }

    pub fn with_markers(&self, origin: Option<usize>, root: Option<usize>) -> Result<PlanarMap, MapError> {
        PlanarMap::build(
            self.opposite.clone(),
            self.next_cw.clone(),
            self.face_color.clone(),
            origin,
            root,
        )
    }

    pub fn with_coloring(&self, colors: Option<Vec<Color>>) -> Result<PlanarMap, MapError> {
        PlanarMap::build(self.opposite.clone(), self.next_cw.clone(), colors, self.origin, self.root)
    }

    /// Orbit decomposition into faces.
    pub fn faces(&self) -> Vec<FaceInfo> {
        let mut seen = vec![false; self.num_half_edges()];
        let mut out = Vec::with_capacity(self.n_faces);
        for start in 0..self.num_half_edges() {
            if seen[start] {
                continue;
            }
            let mut contour = Vec::new();
            let mut h = start;
            loop {
                seen[h] = true;
                contour.push(h);
                h = self.face_next(h);
                if h == start {
                    break;
                }
            }
            let id = self.face_of[start];
            out.push(FaceInfo { id, color: self.face_color(id), valence: contour.len(), contour });
        }
        out
    }

    pub fn face_valences(&self) -> Vec<usize> {
        let mut val = vec![0; self.n_faces];
        for h in 0..self.num_half_edges() {
            val[self.face_of[h]] += 1;
        }
        val
    }

    /// True iff every face has even valence. When true, a proper vertex
    /// 2-coloring is constructed and checked.
    pub fn check_even_bipartite(&self) -> bool {
        if self.face_valences().iter().any(|v| v % 2 != 0) {
            return false;
        }
        self.vertex_two_coloring().is_some()
    }

    /// Proper 2-coloring of the vertices, if one exists.
    pub fn vertex_two_coloring(&self) -> Option<Vec<bool>> {
        let mut side: Vec<Option<bool>> = vec![None; self.n_vertices];
        let mut adj = vec![Vec::new(); self.n_vertices];
        for h in 0..self.num_half_edges() {
            adj[self.vertex(h)].push(self.target(h));
        }
        side[0] = Some(false);
        let mut queue = VecDeque::from([0]);
        while let Some(v) = queue.pop_front() {
            let s = side[v].unwrap();
            for &w in &adj[v] {
                match side[w] {
                    None => {
                        side[w] = Some(!s);
                        queue.push_back(w);
                    }
                    Some(t) if t == s => return None,
                    _ => {}
                }
            }
        }
        Some(side.into_iter().map(|s| s.unwrap()).collect())
    }

    /// Proper face 2-coloring in which the face on the right of `h0` gets
    /// `color`, if one exists (it does iff every vertex has even degree).
    pub fn face_two_coloring(&self, h0: usize, color: Color) -> Option<Vec<Color>> {
        let mut contour = vec![Vec::new(); self.n_faces];
        for h in 0..self.num_half_edges() {
            contour[self.face_of[h]].push(h);
        }
        let mut out: Vec<Option<Color>> = vec![None; self.n_faces];
        out[self.face_of[h0]] = Some(color);
        let mut queue = VecDeque::from([self.face_of[h0]]);
        while let Some(f) = queue.pop_front() {
            let c = out[f].unwrap();
            for &h in &contour[f] {
                let g = self.face_of[self.opposite[h]];
                match out[g] {
                    None => {
                        out[g] = Some(c.flip());
                        queue.push_back(g);
                    }
                    Some(d) if d == c => return None,
                    _ => {}
                }
            }
        }
        Some(out.into_iter().map(|c| c.unwrap()).collect())
    }

    /// Replace every edge by a 2-valent black face. Original faces become white.
    pub fn inflate_edges(&self) -> Result<PlanarMap, MapError> {
        let n = self.num_half_edges();
        let mut opposite = vec![0; 2 * n];
        let mut next_cw = vec![0; 2 * n];
        for h in 0..n {
            let o = self.opposite[h];
            opposite[2 * h] = 2 * o + 1;
            opposite[2 * h + 1] = 2 * o;
            next_cw[2 * h] = 2 * h + 1;
            next_cw[2 * h + 1] = 2 * self.next_cw[h];
        }
        let uncolored = PlanarMap::build(opposite.clone(), next_cw.clone(), None, None, None)?;
        let mut colors = vec![Color::White; uncolored.n_faces];
        for h in 0..n {
            colors[uncolored.face_of[2 * h]] = Color::Black;
        }
        PlanarMap::build(opposite, next_cw, Some(colors), self.origin, self.root.map(|r| 2 * r))
    }

    /// Contract every 2-valent black face into a single edge. Inverse of
    /// [`PlanarMap::inflate_edges`] up to half-edge relabeling. Returns `None`
    /// when some black face is not 2-valent.
    pub fn deflate_edges(&self) -> Option<PlanarMap> {
        let colors = self.face_color.as_ref()?;
        let n = self.num_half_edges();
        // keep the half-edges whose right face is black; each black face has two
        let kept: Vec<usize> = (0..n).filter(|&h| colors[self.face_of[h]] == Color::Black).collect();
        let mut new_id = vec![usize::MAX; n];
        for (i, &h) in kept.iter().enumerate() {
            new_id[h] = i;
        }
        let mut opposite = vec![0; kept.len()];
        let mut next_cw = vec![0; kept.len()];
        for (i, &a) in kept.iter().enumerate() {
            let b = self.face_next(a);
            if self.face_next(b) != a || b == a {
                return None;
            }
            if self.next_cw[a] != self.opposite[b] {
                return None;
            }
            opposite[i] = new_id[b];
            let c = self.next_cw[self.next_cw[a]];
            if new_id[c] == usize::MAX {
                return None;
            }
            next_cw[i] = new_id[c];
        }
        let origin_he = self.origin.map(|o| new_id[self.kept_at(o, &new_id)]);
        let uncolored = PlanarMap::build(opposite, next_cw, None, None, None).ok()?;
        let origin = origin_he.map(|h| uncolored.vertex(h));
        let root = self.root.map(|r| {
            if new_id[r] != usize::MAX {
                new_id[r]
            } else {
                new_id[self.prev_cw[r]]
            }
        });
        uncolored.with_markers(origin, root).ok()
    }

    fn kept_at(&self, v: usize, new_id: &[usize]) -> usize {
        self.rotation(v).into_iter().find(|&h| new_id[h] != usize::MAX).expect("vertex has a kept half-edge")
    }

    /// The dual map: one vertex per face, one face per vertex. When the map
    /// is bipartite the dual faces are colored by the vertex bipartition and
    /// the result is face-bicolored.
    pub fn dual(&self) -> PlanarMap {
        let n = self.num_half_edges();
        let next_cw: Vec<usize> = (0..n).map(|h| self.face_next(h)).collect();
        let opposite = self.opposite.clone();
        let plain = PlanarMap::build(opposite.clone(), next_cw.clone(), None, None, None)
            .expect("dual of a planar map is planar");
        let colors = self.vertex_two_coloring().map(|side| {
            let mut colors = vec![Color::White; plain.n_faces];
            for h in 0..n {
                // dual face of h surrounds the primal source vertex of opp(h)
                let v = self.vertex(self.opposite[h]);
                colors[plain.face_of[h]] = if side[v] { Color::Black } else { Color::White };
            }
            colors
        });
        match colors {
            Some(c) => PlanarMap::build(opposite, next_cw, Some(c), None, None)
                .expect("bipartition colors the dual properly"),
            None => plain,
        }
    }

    /// Apply a half-edge relabeling `perm` (old id -> new id).
    pub fn relabel(&self, perm: &[usize]) -> PlanarMap {
        let n = self.num_half_edges();
        let mut opposite = vec![0; n];
        let mut next_cw = vec![0; n];
        for h in 0..n {
            opposite[perm[h]] = perm[self.opposite[h]];
            next_cw[perm[h]] = perm[self.next_cw[h]];
        }
        let plain = PlanarMap::build(opposite.clone(), next_cw.clone(), None, None, None)
            .expect("relabeling preserves validity");
        let colors = self.face_color.as_ref().map(|c| {
            let mut out = vec![Color::White; plain.n_faces];
            for h in 0..n {
                out[plain.face_of[perm[h]]] = c[self.face_of[h]];
            }
            out
        });
        let origin = self.origin.map(|o| plain.vertex(perm[self.vertex_half_edge(o)]));
        let root = self.root.map(|r| perm[r]);
        PlanarMap::build(opposite, next_cw, colors, origin, root).expect("relabeling preserves validity")
    }

    /// Canonical code: lexicographically smallest breadth-first code over all
    /// admissible starting half-edges. A root forces the start; an origin
    /// restricts starts to its half-edges.
    pub fn canonical_code(&self) -> CanonicalCode {
        let starts: Vec<usize> = match (self.root, self.origin) {
            (Some(r), _) => vec![r],
            (None, Some(o)) => self.rotation(o),
            (None, None) => (0..self.num_half_edges()).collect(),
        };
        let mut best: Option<Vec<u32>> = None;
        let mut scratch = Vec::new();
        for s in starts {
            self.bfs_code(s, &mut scratch);
            if best.as_ref().is_none_or(|b| scratch < *b) {
                best = Some(scratch.clone());
            }
        }
        let words = best.unwrap();
        let mut bytes = Vec::with_capacity(words.len() * 4 + 2);
        bytes.push(self.origin.is_some() as u8);
        bytes.push(self.root.is_some() as u8);
        for w in words {
            bytes.extend_from_slice(&w.to_be_bytes());
        }
        CanonicalCode(bytes)
    }

    fn bfs_code(&self, start: usize, out: &mut Vec<u32>) {
        let n = self.num_half_edges();
        let mut label = vec![u32::MAX; n];
        let mut order = Vec::with_capacity(n);
        label[start] = 0;
        order.push(start);
        let mut i = 0;
        while i < order.len() {
            let h = order[i];
            for g in [self.next_cw[h], self.opposite[h]] {
                if label[g] == u32::MAX {
                    label[g] = order.len() as u32;
                    order.push(g);
                }
            }
            i += 1;
        }
        out.clear();
        for &h in &order {
            out.push(label[self.next_cw[h]]);
            out.push(label[self.opposite[h]]);
            let color = match self.face_color(self.face_of[h]) {
                None => 0,
                Some(Color::Black) => 1,
                Some(Color::White) => 2,
            };
            let at_origin = (Some(self.vertex_of[h]) == self.origin) as u32;
            out.push(color * 2 + at_origin);
        }
    }

    pub fn to_json(&self) -> MapJson {
        MapJson {
            edges: self.num_edges(),
            opposite: self.opposite.clone(),
            next_cw: self.next_cw.clone(),
            face_color: self.face_color.clone(),
            origin: self.origin,
            root: self.root,
        }
    }

    pub fn from_json(j: &MapJson) -> Result<PlanarMap, MapError> {
        if j.opposite.len() != 2 * j.edges {
            return Err(MapError::BadJson(format!(
                "E = {} but {} half-edges given",
                j.edges,
                j.opposite.len()
            )));
        }
        PlanarMap::build(j.opposite.clone(), j.next_cw.clone(), j.face_color.clone(), j.origin, j.root)
    }
}

fn count_components(opposite: &[usize], next_cw: &[usize]) -> usize {
    let n = opposite.len();
    let mut seen = vec![false; n];
    let mut components = 0;
    for s in 0..n {
        if seen[s] {
            continue;
        }
        components += 1;
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(h) = stack.pop() {
            for g in [opposite[h], next_cw[h]] {
                if !seen[g] {
                    seen[g] = true;
                    stack.push(g);
                }
            }
        }
    }
    components
}

/// Identifies a map up to orientation-preserving homeomorphism, respecting
/// any origin and root markers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalCode(pub Vec<u8>);

impl fmt::Display for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.0 {
            write!(f, "{b:02x}")?;
        }
        Ok(())
    }
}

/// On-disk map format. Face colors are indexed by face orbit id, orbits
/// being numbered by their smallest half-edge.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapJson {
    #[serde(rename = "E")]
    pub edges: usize,
    pub opposite: Vec<usize>,
    pub next_cw: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub face_color: Option<Vec<Color>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub origin: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub root: Option<usize>,
}

/// Small fixtures shared by tests and documentation.
pub mod fixtures {
    use super::*;

    /// One edge between two vertices.
    pub fn single_edge() -> PlanarMap {
        PlanarMap::build(vec![1, 0], vec![0, 1], None, None, None).unwrap()
    }

    /// One loop at a single vertex.
    pub fn single_loop() -> PlanarMap {
        PlanarMap::build(vec![1, 0], vec![1, 0], None, None, None).unwrap()
    }

    /// Path u - v - w. Half-edges: 0 = u->v, 1 = v->u, 2 = v->w, 3 = w->v.
    /// Vertex ids: u = 0, v = 1, w = 2.
    pub fn path3() -> PlanarMap {
        PlanarMap::build(vec![1, 0, 3, 2], vec![0, 2, 1, 3], None, None, None).unwrap()
    }

    /// Triangle u -> v -> w -> u with the black face on the right of the
    /// oriented edges. Half-edges 0 = u->v, 2 = v->w, 4 = w->u.
    pub fn oriented_triangle() -> PlanarMap {
        // at u: 0 (to v) and 5 (to w); at v: 2 (to w), 1 (to u); at w: 4, 3.
        let opposite = vec![1, 0, 3, 2, 5, 4];
        let next_cw = vec![5, 2, 1, 4, 3, 0];
        let plain = PlanarMap::build(opposite.clone(), next_cw.clone(), None, None, None).unwrap();
        let mut colors = vec![Color::White; 2];
        colors[plain.face(0)] = Color::Black;
        PlanarMap::build(opposite, next_cw, Some(colors), None, None).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    #[test]
    fn smallest_maps_are_accepted() {
        let e = single_edge();
        assert_eq!((e.num_vertices(), e.num_edges(), e.num_faces()), (2, 1, 1));
        let l = single_loop();
        assert_eq!((l.num_vertices(), l.num_edges(), l.num_faces()), (1, 1, 2));
    }

    #[test]
    fn torus_rotation_is_rejected() {
        // one vertex, two loops a, b interleaved: a+ b+ a- b- around the vertex
        let opposite = vec![2, 3, 0, 1];
        let next_cw = vec![1, 2, 3, 0];
        assert_eq!(PlanarMap::build(opposite, next_cw, None, None, None), Err(MapError::NonPlanar(0)));
    }

    #[test]
    fn structural_errors() {
        assert!(matches!(
            PlanarMap::build(vec![0, 1], vec![0, 1], None, None, None),
            Err(MapError::NotInvolution(_))
        ));
        assert_eq!(
            PlanarMap::build(vec![1, 0, 3, 2], vec![0, 1, 2, 3], None, None, None),
            Err(MapError::NotConnected(2))
        );
        assert_eq!(PlanarMap::build(vec![1, 0], vec![1, 1], None, None, None), Err(MapError::NotPermutation));
        assert!(matches!(
            PlanarMap::build(vec![1, 0], vec![0, 1], None, Some(5), None),
            Err(MapError::BadMarker(_))
        ));
        assert!(matches!(
            PlanarMap::build(vec![1, 0], vec![1, 0], Some(vec![Color::Black, Color::Black]), None, None),
            Err(MapError::BadColoring(_))
        ));
        assert_eq!(PlanarMap::build(vec![], vec![], None, None, None), Err(MapError::Empty));
    }

    #[test]
    fn face_contours() {
        let faces = single_edge().faces();
        assert_eq!(faces.len(), 1);
        assert_eq!(faces[0].valence, 2);

        let p = path3();
        let faces = p.faces();
        assert_eq!(faces.len(), 1);
        assert_eq!(faces[0].valence, 4);
        let verts: Vec<usize> = faces[0].contour.iter().map(|&h| p.vertex(h)).collect();
        assert_eq!(verts, vec![0, 1, 2, 1]);

        let mut vals = single_loop().face_valences();
        vals.sort();
        assert_eq!(vals, vec![1, 1]);
    }

    #[test]
    fn even_bipartite() {
        assert!(single_edge().check_even_bipartite());
        assert!(!single_loop().check_even_bipartite());
        assert!(path3().check_even_bipartite());
        assert!(!oriented_triangle().check_even_bipartite());
    }

    #[test]
    fn inflation_of_small_maps() {
        let e = single_edge().inflate_edges().unwrap();
        let mut faces: Vec<(Color, usize)> = e.faces().iter().map(|f| (f.color.unwrap(), f.valence)).collect();
        faces.sort();
        assert_eq!(faces, vec![(Color::Black, 2), (Color::White, 2)]);

        let l = single_loop().inflate_edges().unwrap();
        let mut faces: Vec<(Color, usize)> = l.faces().iter().map(|f| (f.color.unwrap(), f.valence)).collect();
        faces.sort();
        assert_eq!(faces, vec![(Color::Black, 2), (Color::White, 1), (Color::White, 1)]);

        let pointed = single_edge().with_markers(Some(1), None).unwrap();
        let inflated = pointed.inflate_edges().unwrap();
        assert_eq!(inflated.origin(), Some(1));
        assert_eq!(inflated.num_vertices(), 2);
    }

    #[test]
    fn deflate_inverts_inflate() {
        for m in [single_edge(), single_loop(), path3()] {
            let pointed = m.with_markers(Some(m.num_vertices() - 1), Some(1)).unwrap();
            let back = pointed.inflate_edges().unwrap().deflate_edges().unwrap();
            assert_eq!(back.canonical_code(), pointed.canonical_code());
        }
        assert!(oriented_triangle().deflate_edges().is_none());
    }

    #[test]
    fn canonical_codes_of_pointed_paths() {
        let p = path3();
        let at_u = p.with_markers(Some(0), None).unwrap().canonical_code();
        let at_w = p.with_markers(Some(2), None).unwrap().canonical_code();
        let at_v = p.with_markers(Some(1), None).unwrap().canonical_code();
        assert_eq!(at_u, at_w);
        assert_ne!(at_u, at_v);
    }

    #[test]
    fn triangle_orientation_and_dual() {
        let t = oriented_triangle();
        assert_eq!(t.face_color(t.face(0)), Some(Color::Black));
        assert_eq!(t.target(0), t.vertex(2));
        assert_eq!(t.target(2), t.vertex(4));
        let d = path3().dual();
        assert!(d.is_colored());
        assert_eq!(d.num_vertices(), 1);
    }

    #[test]
    fn json_round_trip() {
        let t = oriented_triangle().with_markers(Some(0), Some(2)).unwrap();
        let text = serde_json::to_string(&t.to_json()).unwrap();
        let back = PlanarMap::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back, t);
    }
}
