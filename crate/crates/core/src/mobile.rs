//! Mobiles: plane trees with labeled vertices, unlabeled white and black
//! vertices, and plain, flagged or single-flag edges.
//!
//! Darts are numbered `2 * edge + side`, where `side` indexes
//! [`MobileEdge::ends`]. A flagged edge stores `ends = [black, white]`; a
//! plain edge stores `ends = [labeled, white]`. Walking along a dart, the
//! contour keeps the tree on its right, so the flag seen while traversing a
//! dart is the one on its left: `first_at_black` for the black-side dart and
//! `second_at_black` for the white-side dart.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MobileError {
    #[error("MalformedTree: {0}")]
    MalformedTree(String),
    #[error("NotInSubclass: black vertex {node}: {reason}")]
    NotInSubclass { node: usize, reason: String },
    #[error("InvalidLabels: {0}")]
    InvalidLabels(Violation),
    #[error("BadFlavor: {0}")]
    BadFlavor(String),
    #[error("BadJson: {0}")]
    BadJson(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Flavor {
    Bipartite,
    Eulerian,
    PConstellation(u32),
    Arbitrary,
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Flavor::Bipartite => write!(f, "bipartite"),
            Flavor::Eulerian => write!(f, "eulerian"),
            Flavor::PConstellation(p) => write!(f, "p{p}"),
            Flavor::Arbitrary => write!(f, "arbitrary"),
        }
    }
}

impl FromStr for Flavor {
    type Err = MobileError;

    fn from_str(s: &str) -> Result<Flavor, MobileError> {
        match s {
            "bipartite" => Ok(Flavor::Bipartite),
            "eulerian" => Ok(Flavor::Eulerian),
            "arbitrary" => Ok(Flavor::Arbitrary),
            _ => {
                let p = s
                    .strip_prefix('p')
                    .and_then(|rest| rest.parse::<u32>().ok())
                    .filter(|&p| p >= 2)
                    .ok_or_else(|| MobileError::BadFlavor(s.to_string()))?;
                Ok(Flavor::PConstellation(p))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NodeKind {
    Labeled(i64),
    White,
    Black,
}

impl NodeKind {
    pub fn label(self) -> Option<i64> {
        match self {
            NodeKind::Labeled(l) => Some(l),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EdgeKind {
    Plain,
    /// Flags read clockwise around the black endpoint.
    Flagged { first_at_black: i64, second_at_black: i64 },
    /// Edge between two white vertices carrying one flag (simplified
    /// arbitrary mobiles).
    Flag(i64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MobileEdge {
    pub ends: [usize; 2],
    pub kind: EdgeKind,
}

/// One step of the clockwise contour.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContourItem {
    /// Corner at a labeled vertex, lying just before the departing dart
    /// (`None` for an isolated vertex).
    Corner { vertex: usize, dart: Option<usize>, label: i64 },
    /// Flag on the left of `dart`.
    Flag { dart: usize, label: i64 },
}

impl ContourItem {
    pub fn label(&self) -> i64 {
        match *self {
            ContourItem::Corner { label, .. } | ContourItem::Flag { label, .. } => label,
        }
    }

    pub fn is_corner(&self) -> bool {
        matches!(self, ContourItem::Corner { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub node: usize,
    pub clause: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "vertex {}: {}", self.node, self.clause)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidityReport {
    pub violation: Option<Violation>,
}

impl ValidityReport {
    pub fn is_valid(&self) -> bool {
        self.violation.is_none()
    }
}

/// Label-bearing items met clockwise around an unlabeled vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Around {
    Vertex(i64),
    /// Two flags of one edge, in clockwise order around the vertex.
    Flags(i64, i64),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mobile {
    flavor: Flavor,
    nodes: Vec<NodeKind>,
    edges: Vec<MobileEdge>,
    around: Vec<Vec<usize>>,
    /// position of each dart inside the rotation list of its node
    slot: Vec<usize>,
    root: Option<usize>,
}

/// Incremental construction: edges are appended to the rotation lists of
/// both ends in call order.
#[derive(Debug, Clone, Default)]
pub struct MobileBuilder {
    nodes: Vec<NodeKind>,
    edges: Vec<MobileEdge>,
    around: Vec<Vec<usize>>,
}

impl MobileBuilder {
    pub fn new() -> MobileBuilder {
        MobileBuilder::default()
    }

    pub fn node(&mut self, kind: NodeKind) -> usize {
        self.nodes.push(kind);
        self.around.push(Vec::new());
        self.nodes.len() - 1
    }

    pub fn edge(&mut self, a: usize, b: usize, kind: EdgeKind) -> usize {
        let e = self.edges.len();
        self.edges.push(MobileEdge { ends: [a, b], kind });
        self.around[a].push(e);
        self.around[b].push(e);
        e
    }

    pub fn finish(self, flavor: Flavor, root: Option<usize>) -> Result<Mobile, MobileError> {
        Mobile::new(flavor, self.nodes, self.edges, self.around, root)
    }
}

impl Mobile {
    pub fn new(
        flavor: Flavor,
        nodes: Vec<NodeKind>,
        edges: Vec<MobileEdge>,
        around: Vec<Vec<usize>>,
        root: Option<usize>,
    ) -> Result<Mobile, MobileError> {
        let bad = |s: String| Err(MobileError::MalformedTree(s));
        if nodes.is_empty() {
            return bad("empty tree".into());
        }
        if around.len() != nodes.len() {
            return bad("rotation list count differs from node count".into());
        }
        if edges.len() + 1 != nodes.len() {
            return bad(format!("{} nodes but {} edges", nodes.len(), edges.len()));
        }
        let mut slot = vec![usize::MAX; 2 * edges.len()];
        for (u, list) in around.iter().enumerate() {
            for (i, &e) in list.iter().enumerate() {
                let Some(edge) = edges.get(e) else {
                    return bad(format!("unknown edge {e} at node {u}"));
                };
                let side = if edge.ends[0] == u {
                    0
                } else if edge.ends[1] == u {
                    1
                } else {
                    return bad(format!("edge {e} listed at node {u} which it does not touch"));
                };
                if slot[2 * e + side] != usize::MAX {
                    return bad(format!("edge {e} listed twice at node {u}"));
                }
                slot[2 * e + side] = i;
            }
        }
        if slot.contains(&usize::MAX) {
            return bad("some edge end is missing from its rotation list".into());
        }
        // connectivity (with n - 1 edges this makes it a tree)
        let mut seen = vec![false; nodes.len()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for &e in &around[u] {
                let v = edges[e].ends[0] + edges[e].ends[1] - u;
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return bad("not connected".into());
        }
        if nodes.len() == 1 && !matches!(nodes[0], NodeKind::Labeled(_)) {
            return bad("a single-vertex mobile must be labeled".into());
        }
        let mobile = Mobile { flavor, nodes, edges, around, slot, root };
        mobile.check_typing()?;
        if let Some(r) = root {
            if r >= mobile.contour().len() {
                return bad(format!("root index {r} beyond the contour"));
            }
        }
        Ok(mobile)
    }

    fn check_typing(&self) -> Result<(), MobileError> {
        let has_black = self.nodes.contains(&NodeKind::Black);
        let has_single_flag = self.edges.iter().any(|e| matches!(e.kind, EdgeKind::Flag(_)));
        for (i, e) in self.edges.iter().enumerate() {
            let [a, b] = e.ends;
            let (ka, kb) = (self.nodes[a], self.nodes[b]);
            let ok = match e.kind {
                EdgeKind::Plain => matches!(ka, NodeKind::Labeled(_)) && kb == NodeKind::White,
                EdgeKind::Flagged { first_at_black, second_at_black } => {
                    if second_at_black > first_at_black {
                        return Err(MobileError::MalformedTree(format!(
                            "flagged edge {i} increases across the black vertex"
                        )));
                    }
                    ka == NodeKind::Black && kb == NodeKind::White
                }
                EdgeKind::Flag(_) => ka == NodeKind::White && kb == NodeKind::White,
            };
            if !ok {
                return Err(MobileError::MalformedTree(format!("edge {i} joins the wrong vertex types")));
            }
            let allowed = match (self.flavor, e.kind) {
                (_, EdgeKind::Plain) => true,
                (Flavor::Bipartite, _) => false,
                (Flavor::Eulerian, EdgeKind::Flagged { .. }) => true,
                (Flavor::PConstellation(_), EdgeKind::Flagged { .. }) => true,
                (Flavor::Arbitrary, EdgeKind::Flagged { .. }) => !has_single_flag,
                (Flavor::Arbitrary, EdgeKind::Flag(_)) => !has_black,
                _ => false,
            };
            if !allowed {
                return Err(MobileError::MalformedTree(format!(
                    "edge {i} of kind {:?} not allowed in a {} mobile",
                    e.kind, self.flavor
                )));
            }
        }
        if self.flavor == Flavor::Bipartite && has_black {
            return Err(MobileError::MalformedTree("bipartite mobiles have no black vertices".into()));
        }
        Ok(())
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn nodes(&self) -> &[NodeKind] {
        &self.nodes
    }

    pub fn edges(&self) -> &[MobileEdge] {
        &self.edges
    }

    /// Edge ids around `u` in clockwise order.
    pub fn around(&self, u: usize) -> &[usize] {
        &self.around[u]
    }

    pub fn root(&self) -> Option<usize> {
        self.root
    }

    pub fn with_root(&self, root: Option<usize>) -> Result<Mobile, MobileError> {
        Mobile::new(self.flavor, self.nodes.clone(), self.edges.clone(), self.around.clone(), root)
    }

    pub fn with_flavor(&self, flavor: Flavor) -> Result<Mobile, MobileError> {
        Mobile::new(flavor, self.nodes.clone(), self.edges.clone(), self.around.clone(), self.root)
    }

    /// True when the tree has no black vertices but its flavor is one that
    /// admits a simplified form.
    pub fn is_simplified(&self) -> bool {
        matches!(self.flavor, Flavor::PConstellation(_) | Flavor::Arbitrary)
            && !self.nodes.contains(&NodeKind::Black)
    }

    pub fn num_labeled(&self) -> usize {
        self.nodes.iter().filter(|n| matches!(n, NodeKind::Labeled(_))).count()
    }

    pub fn num_unlabeled(&self) -> usize {
        self.nodes.len() - self.num_labeled()
    }

    pub fn dart_node(&self, d: usize) -> usize {
        self.edges[d / 2].ends[d % 2]
    }

    pub fn dart_cw(&self, d: usize) -> usize {
        let u = self.dart_node(d);
        let list = &self.around[u];
        let e = list[(self.slot[d] + 1) % list.len()];
        self.dart_at(e, u)
    }

    /// The dart of edge `e` leaving node `u`.
    pub fn dart_at(&self, e: usize, u: usize) -> usize {
        if self.edges[e].ends[0] == u {
            2 * e
        } else {
            2 * e + 1
        }
    }

    /// Flag label seen on the left of `d`, if the edge carries flags.
    pub fn left_flag(&self, d: usize) -> Option<i64> {
        match self.edges[d / 2].kind {
            EdgeKind::Plain => None,
            EdgeKind::Flagged { first_at_black, second_at_black } => {
                Some(if d.is_multiple_of(2) { first_at_black } else { second_at_black })
            }
            EdgeKind::Flag(n) => Some(n),
        }
    }

    /// Clockwise contour around the tree, starting at the first dart of node 0.
    pub fn contour(&self) -> Vec<ContourItem> {
        if self.edges.is_empty() {
            let label = self.nodes[0].label().expect("single vertex is labeled");
            return vec![ContourItem::Corner { vertex: 0, dart: None, label }];
        }
        let start = self.dart_at(self.around[0][0], 0);
        let mut out = Vec::with_capacity(2 * self.edges.len());
        let mut d = start;
        loop {
            let u = self.dart_node(d);
            if let NodeKind::Labeled(label) = self.nodes[u] {
                out.push(ContourItem::Corner { vertex: u, dart: Some(d), label });
            }
            if let Some(label) = self.left_flag(d) {
                out.push(ContourItem::Flag { dart: d, label });
            }
            d = self.dart_cw(d ^ 1);
            if d == start {
                break;
            }
        }
        out
    }

    /// Darts in contour order (each dart exactly once).
    pub fn contour_darts(&self) -> Vec<usize> {
        if self.edges.is_empty() {
            return Vec::new();
        }
        let start = self.dart_at(self.around[0][0], 0);
        let mut out = Vec::with_capacity(2 * self.edges.len());
        let mut d = start;
        loop {
            out.push(d);
            d = self.dart_cw(d ^ 1);
            if d == start {
                break;
            }
        }
        out
    }

    fn around_items(&self, u: usize) -> Vec<Around> {
        self.around[u]
            .iter()
            .map(|&e| {
                let edge = &self.edges[e];
                match edge.kind {
                    EdgeKind::Plain => {
                        let other = edge.ends[0] + edge.ends[1] - u;
                        Around::Vertex(self.nodes[other].label().expect("plain edge reaches a label"))
                    }
                    EdgeKind::Flagged { first_at_black, second_at_black } => {
                        if self.nodes[u] == NodeKind::Black {
                            Around::Flags(first_at_black, second_at_black)
                        } else {
                            Around::Flags(second_at_black, first_at_black)
                        }
                    }
                    EdgeKind::Flag(n) => Around::Flags(n, n),
                }
            })
            .collect()
    }

    /// Unlabeled nodes in order of first appearance along the contour.
    fn unlabeled_in_contour_order(&self) -> Vec<usize> {
        let mut seen = vec![false; self.nodes.len()];
        let mut out = Vec::new();
        for d in self.contour_darts() {
            let u = self.dart_node(d);
            if !seen[u] {
                seen[u] = true;
                if self.nodes[u].label().is_none() {
                    out.push(u);
                }
            }
        }
        out
    }

    /// Checks the clockwise label rule around every unlabeled vertex and
    /// reports the first violation in contour order.
    pub fn validate(&self) -> ValidityReport {
        let simplified = self.is_simplified();
        for u in self.unlabeled_in_contour_order() {
            let items = self.around_items(u);
            let clause = match (self.flavor, self.nodes[u]) {
                (Flavor::Bipartite, _) => check_bipartite_white(&items),
                (Flavor::PConstellation(p), NodeKind::White) if simplified => {
                    check_constellation_white(&items, p as i64)
                }
                (Flavor::Arbitrary, NodeKind::White) if simplified => check_arbitrary_white(&items),
                (_, NodeKind::White) => check_eulerian_white(&items),
                (_, NodeKind::Black) => check_eulerian_black(&items),
                (_, NodeKind::Labeled(_)) => unreachable!(),
            };
            if let Some(clause) = clause {
                return ValidityReport { violation: Some(Violation { node: u, clause }) };
            }
        }
        ValidityReport { violation: None }
    }

    /// Positivity conditions of a well-labeled mobile, per flavor.
    pub fn check_well_labeled(&self) -> bool {
        let labels_positive = self.nodes.iter().all(|n| n.label().is_none_or(|l| l >= 1));
        let has_label_one = self.nodes.iter().any(|n| n.label() == Some(1));
        let flags: Vec<i64> = self
            .edges
            .iter()
            .flat_map(|e| match e.kind {
                EdgeKind::Plain => vec![],
                EdgeKind::Flagged { first_at_black, second_at_black } => vec![first_at_black, second_at_black],
                EdgeKind::Flag(n) => vec![n],
            })
            .collect();
        let flags_ok = flags.iter().all(|&f| f >= 0);
        let has_zero_flag = flags.contains(&0);
        match self.flavor {
            Flavor::Bipartite => labels_positive && has_label_one,
            Flavor::PConstellation(_) if self.is_simplified() => labels_positive && has_label_one,
            Flavor::Arbitrary if self.is_simplified() => {
                labels_positive && flags_ok && (has_zero_flag || has_label_one)
            }
            _ => labels_positive && flags_ok && has_zero_flag,
        }
    }

    /// Valence of the map face encoded by an unlabeled node.
    pub fn face_valence(&self, u: usize) -> usize {
        match self.nodes[u] {
            NodeKind::Labeled(_) => 0,
            NodeKind::White if self.flavor == Flavor::Bipartite => 2 * self.around[u].len(),
            NodeKind::White => self.around[u].len(),
            NodeKind::Black => {
                let items = self.around_items(u);
                let k = items.len();
                (0..k)
                    .map(|i| {
                        let (_, out) = flags_of(items[i]);
                        let (inn, _) = flags_of(items[(i + 1) % k]);
                        (inn - out + 1) as usize
                    })
                    .sum()
            }
        }
    }

    /// Sorted valences of the faces encoded by white and black vertices. For
    /// simplified flavors the valences are those of the unsimplified mobile.
    pub fn face_profile(&self) -> Result<(Vec<usize>, Vec<usize>), MobileError> {
        if self.is_simplified() {
            return self.unsimplify()?.face_profile();
        }
        let mut whites = Vec::new();
        let mut blacks = Vec::new();
        for (u, kind) in self.nodes.iter().enumerate() {
            match kind {
                NodeKind::White => whites.push(self.face_valence(u)),
                NodeKind::Black => blacks.push(self.face_valence(u)),
                NodeKind::Labeled(_) => {}
            }
        }
        whites.sort_unstable();
        blacks.sort_unstable();
        Ok((whites, blacks))
    }

    /// Remove the black vertices of an Eulerian mobile whose map lies in a
    /// p-constellation or arbitrary-map subclass.
    pub fn simplify(&self, target: Flavor) -> Result<Mobile, MobileError> {
        if self.is_simplified() || self.flavor == Flavor::Bipartite {
            return Err(MobileError::BadFlavor(format!("cannot simplify a {} mobile", self.flavor)));
        }
        let root_corner = self.root_corner_key();
        let mut remove_edge = vec![false; self.edges.len()];
        let mut remove_node = vec![false; self.nodes.len()];
        // bivalent black -> (its two edges)
        let mut merged: Vec<(usize, usize, i64)> = Vec::new();
        for (u, kind) in self.nodes.iter().enumerate() {
            if *kind != NodeKind::Black {
                continue;
            }
            let items = self.around_items(u);
            let fail = |reason: String| Err(MobileError::NotInSubclass { node: u, reason });
            match (target, items.as_slice()) {
                (Flavor::PConstellation(p), [Around::Flags(a, b)]) if a - b == p as i64 - 1 => {}
                (Flavor::PConstellation(p), _) => {
                    return fail(format!("not univalent with flag gap {}", p - 1));
                }
                (Flavor::Arbitrary, [Around::Flags(a, b)]) if a - b == 1 => {}
                (Flavor::Arbitrary, [Around::Flags(a, b), Around::Flags(c, d)])
                    if a == b && c == d && a == c => {}
                (Flavor::Arbitrary, _) => {
                    return fail("neither univalent (n+1, n) nor bivalent (n, n)".into());
                }
                _ => return Err(MobileError::BadFlavor(format!("cannot simplify to {target}"))),
            }
            remove_node[u] = true;
            for &e in &self.around[u] {
                remove_edge[e] = true;
            }
            if self.around[u].len() == 2 {
                let n = flags_of(items[0]).0;
                merged.push((self.around[u][0], self.around[u][1], n));
            }
        }
        // new edge ids; a merged pair keeps the id slot of its first edge
        let mut b = MobileBuilder::new();
        let mut node_map = vec![usize::MAX; self.nodes.len()];
        for (u, kind) in self.nodes.iter().enumerate() {
            if !remove_node[u] {
                node_map[u] = b.node(*kind);
            }
        }
        let mut replacement: HashMap<usize, EdgeKind> = HashMap::new();
        let mut partner: HashMap<usize, usize> = HashMap::new();
        for &(e1, e2, n) in &merged {
            replacement.insert(e1, EdgeKind::Flag(n));
            partner.insert(e1, e2);
            partner.insert(e2, e1);
        }
        let mut new_edges = Vec::new();
        let mut edge_map: HashMap<usize, usize> = HashMap::new();
        for (e, edge) in self.edges.iter().enumerate() {
            if !remove_edge[e] {
                edge_map.insert(e, new_edges.len());
                new_edges.push(MobileEdge { ends: [node_map[edge.ends[0]], node_map[edge.ends[1]]], kind: edge.kind });
            } else if let Some(kind) = replacement.get(&e) {
                let e2 = partner[&e];
                let w1 = self.edges[e].ends[1];
                let w2 = self.edges[e2].ends[1];
                let id = new_edges.len();
                edge_map.insert(e, id);
                edge_map.insert(e2, id);
                new_edges.push(MobileEdge { ends: [node_map[w1], node_map[w2]], kind: *kind });
            }
        }
        let mut around = vec![Vec::new(); b.nodes.len()];
        for (u, list) in self.around.iter().enumerate() {
            if remove_node[u] {
                continue;
            }
            for &e in list {
                if let Some(&ne) = edge_map.get(&e) {
                    around[node_map[u]].push(ne);
                }
            }
        }
        let mut out = Mobile::new(target, b.nodes, new_edges, around, None)?;
        if let Some(key) = root_corner {
            out.root = out.find_corner(node_map[key.0], key.1.map(|e| edge_map[&e]));
        }
        Ok(out)
    }

    /// Exact inverse of [`Mobile::simplify`].
    pub fn unsimplify(&self) -> Result<Mobile, MobileError> {
        if !self.is_simplified() {
            return Err(MobileError::BadFlavor(format!("{} mobile is not in simplified form", self.flavor)));
        }
        let root_corner = self.root_corner_key();
        let mut nodes = self.nodes.clone();
        let mut edges: Vec<MobileEdge> = Vec::new();
        let mut around: Vec<Vec<usize>> = vec![Vec::new(); nodes.len()];
        // flag edges become bivalent blacks; remember which new edge each end uses
        let mut flag_edge_end: HashMap<(usize, usize), usize> = HashMap::new();
        let mut edge_map: HashMap<usize, usize> = HashMap::new();
        for (e, edge) in self.edges.iter().enumerate() {
            match edge.kind {
                EdgeKind::Flag(n) => {
                    let black = nodes.len();
                    nodes.push(NodeKind::Black);
                    around.push(Vec::new());
                    let kind = EdgeKind::Flagged { first_at_black: n, second_at_black: n };
                    for w in edge.ends {
                        let id = edges.len();
                        edges.push(MobileEdge { ends: [black, w], kind });
                        around[black].push(id);
                        flag_edge_end.insert((e, w), id);
                    }
                }
                _ => {
                    edge_map.insert(e, edges.len());
                    edges.push(*edge);
                }
            }
        }
        for (u, kind) in self.nodes.iter().enumerate() {
            match kind {
                NodeKind::Labeled(_) => {
                    around[u] = self.around[u].iter().map(|e| edge_map[e]).collect();
                }
                NodeKind::White => {
                    let items = self.around_items(u);
                    let k = items.len();
                    let mut list = Vec::new();
                    for i in 0..k {
                        let e = self.around[u][i];
                        list.push(match self.edges[e].kind {
                            EdgeKind::Flag(_) => flag_edge_end[&(e, u)],
                            _ => edge_map[&e],
                        });
                        let exit = match items[i] {
                            Around::Vertex(l) => l - 1,
                            Around::Flags(_, b) => b,
                        };
                        let entry = match items[(i + 1) % k] {
                            Around::Vertex(l) => l,
                            Around::Flags(a, _) => a,
                        };
                        let step = match self.flavor {
                            Flavor::PConstellation(p) => p as i64 - 1,
                            _ => 1,
                        };
                        let rise = entry - exit;
                        if rise < 0 || rise % step != 0 {
                            return Err(MobileError::InvalidLabels(Violation {
                                node: u,
                                clause: format!("cannot insert black vertices between labels {exit} and {entry}"),
                            }));
                        }
                        for j in 0..rise / step {
                            let second = exit + j * step;
                            let black = nodes.len();
                            nodes.push(NodeKind::Black);
                            let id = edges.len();
                            edges.push(MobileEdge {
                                ends: [black, u],
                                kind: EdgeKind::Flagged { first_at_black: second + step, second_at_black: second },
                            });
                            around.push(vec![id]);
                            list.push(id);
                        }
                    }
                    around[u] = list;
                }
                NodeKind::Black => unreachable!("simplified mobiles have no black vertices"),
            }
        }
        let mut out = Mobile::new(Flavor::Eulerian, nodes, edges, around, None)?;
        if let Some((v, e)) = root_corner {
            out.root = out.find_corner(v, e.map(|e| edge_map[&e]));
        }
        Ok(out)
    }

    /// (vertex, edge of the departing dart) of a corner root.
    fn root_corner_key(&self) -> Option<(usize, Option<usize>)> {
        let r = self.root?;
        match self.contour()[r] {
            ContourItem::Corner { vertex, dart, .. } => Some((vertex, dart.map(|d| d / 2))),
            ContourItem::Flag { .. } => None,
        }
    }

    fn find_corner(&self, vertex: usize, edge: Option<usize>) -> Option<usize> {
        self.contour().iter().position(|item| match *item {
            ContourItem::Corner { vertex: v, dart, .. } => v == vertex && dart.map(|d| d / 2) == edge,
            _ => false,
        })
    }

    /// Contour index of the flag on the black side of flagged edge `e`.
    pub fn flag_index(&self, e: usize) -> Option<usize> {
        self.contour().iter().position(|item| matches!(*item, ContourItem::Flag { dart, .. } if dart == 2 * e))
    }

    /// Code identifying the mobile up to plane-tree isomorphism (respecting
    /// the root, if any).
    pub fn canonical_code(&self) -> Vec<i64> {
        if self.edges.is_empty() {
            return vec![-1, self.nodes[0].label().unwrap(), self.root.is_some() as i64];
        }
        let starts: Vec<(usize, i64)> = match self.root {
            Some(r) => match self.contour()[r] {
                ContourItem::Corner { dart, .. } => vec![(dart.unwrap(), 1)],
                ContourItem::Flag { dart, .. } => vec![(dart, 2)],
            },
            None => (0..2 * self.edges.len()).map(|d| (d, 0)).collect(),
        };
        let mut best: Option<Vec<i64>> = None;
        for (s, tag) in starts {
            let code = self.bfs_code(s, tag);
            if best.as_ref().is_none_or(|b| code < *b) {
                best = Some(code);
            }
        }
        best.unwrap()
    }

    fn bfs_code(&self, start: usize, tag: i64) -> Vec<i64> {
        let n = 2 * self.edges.len();
        let mut label = vec![usize::MAX; n];
        let mut order = vec![start];
        label[start] = 0;
        let mut i = 0;
        while i < order.len() {
            let d = order[i];
            for g in [self.dart_cw(d), d ^ 1] {
                if label[g] == usize::MAX {
                    label[g] = order.len();
                    order.push(g);
                }
            }
            i += 1;
        }
        let mut out = vec![tag];
        for &d in &order {
            let (kind, value) = match self.nodes[self.dart_node(d)] {
                NodeKind::Labeled(l) => (0, l),
                NodeKind::White => (1, 0),
                NodeKind::Black => (2, 0),
            };
            out.extend([label[self.dart_cw(d)] as i64, label[d ^ 1] as i64, kind, value]);
            out.push(self.left_flag(d).map_or(i64::MIN, |f| f));
        }
        out
    }

    pub fn to_json(&self) -> MobileJson {
        let mut parent_edge = vec![usize::MAX; self.nodes.len()];
        MobileJson {
            flavor: self.flavor.to_string(),
            root: self.root,
            node: self.node_json(0, &mut parent_edge),
        }
    }

    fn node_json(&self, u: usize, parent_edge: &mut Vec<usize>) -> NodeJson {
        let list = &self.around[u];
        let skip = list.iter().position(|&e| e == parent_edge[u]);
        let ordered: Vec<usize> = match skip {
            Some(i) => (1..list.len()).map(|j| list[(i + j) % list.len()]).collect(),
            None => list.clone(),
        };
        let children = ordered
            .into_iter()
            .map(|e| {
                let edge = self.edges[e];
                let v = edge.ends[0] + edge.ends[1] - u;
                parent_edge[v] = e;
                ChildJson {
                    edge: match edge.kind {
                        EdgeKind::Plain => EdgeJson::Plain(PlainTag::Plain),
                        EdgeKind::Flagged { first_at_black, second_at_black } => {
                            EdgeJson::Flags { flags: [first_at_black, second_at_black] }
                        }
                        EdgeKind::Flag(n) => EdgeJson::Flag { flag: n },
                    },
                    node: self.node_json(v, parent_edge),
                }
            })
            .collect();
        let (kind, label) = match self.nodes[u] {
            NodeKind::Labeled(l) => ("labeled", Some(l)),
            NodeKind::White => ("white", None),
            NodeKind::Black => ("black", None),
        };
        NodeJson { kind: kind.to_string(), label, children }
    }

    pub fn from_json(j: &MobileJson) -> Result<Mobile, MobileError> {
        let flavor: Flavor = j.flavor.parse()?;
        let mut b = MobileBuilder::new();
        // fills node `v` (already allocated with its parent edge) from `n`
        fn walk_into(b: &mut MobileBuilder, v: usize, n: &NodeJson) -> Result<usize, MobileError> {
            let kind = match (n.kind.as_str(), n.label) {
                ("labeled", Some(l)) => NodeKind::Labeled(l),
                ("white", None) => NodeKind::White,
                ("black", None) => NodeKind::Black,
                (k, _) => return Err(MobileError::BadJson(format!("bad node record of kind {k:?}"))),
            };
            b.nodes[v] = kind;
            for child in &n.children {
                let edge_kind = match &child.edge {
                    EdgeJson::Plain(_) => EdgeKind::Plain,
                    EdgeJson::Flags { flags } => {
                        EdgeKind::Flagged { first_at_black: flags[0], second_at_black: flags[1] }
                    }
                    EdgeJson::Flag { flag } => EdgeKind::Flag(*flag),
                };
                let e = b.edges.len();
                let w = b.nodes.len();
                b.edges.push(MobileEdge { ends: [v, w], kind: edge_kind });
                b.around[v].push(e);
                b.nodes.push(NodeKind::White);
                b.around.push(vec![e]);
                walk_into(b, w, &child.node)?;
                orient(b, e);
            }
            Ok(v)
        }
        // store ends in the [labeled|black, white] convention
        fn orient(b: &mut MobileBuilder, e: usize) {
            let [a, c] = b.edges[e].ends;
            let swap = match b.edges[e].kind {
                EdgeKind::Plain => b.nodes[c] != NodeKind::White,
                EdgeKind::Flagged { .. } => b.nodes[a] != NodeKind::Black,
                EdgeKind::Flag(_) => false,
            };
            if swap {
                b.edges[e].ends = [c, a];
            }
        }
        let top = b.node(NodeKind::White);
        walk_into(&mut b, top, &j.node)?;
        Mobile::new(flavor, b.nodes, b.edges, b.around, j.root)
    }
}

fn flags_of(item: Around) -> (i64, i64) {
    match item {
        Around::Flags(a, b) => (a, b),
        Around::Vertex(l) => (l, l),
    }
}

fn check_bipartite_white(items: &[Around]) -> Option<String> {
    let k = items.len();
    for i in 0..k {
        let (Around::Vertex(n), Around::Vertex(m)) = (items[i], items[(i + 1) % k]) else {
            return Some("bipartite white vertex adjacent to a flagged edge".into());
        };
        if m < n - 1 {
            return Some(format!("label {n} followed clockwise by {m} (< {})", n - 1));
        }
    }
    None
}

fn check_constellation_white(items: &[Around], p: i64) -> Option<String> {
    let k = items.len();
    for i in 0..k {
        let (Around::Vertex(n), Around::Vertex(m)) = (items[i], items[(i + 1) % k]) else {
            return Some("simplified p-mobile white vertex adjacent to a flag".into());
        };
        let rise = m - n + 1;
        if rise < 0 || rise % (p - 1) != 0 {
            return Some(format!(
                "label {n} followed clockwise by {m}: neither a decrease by 1 nor an increase of the form k({p}-1)-1"
            ));
        }
    }
    None
}

fn check_arbitrary_white(items: &[Around]) -> Option<String> {
    let k = items.len();
    for i in 0..k {
        let entry = match items[(i + 1) % k] {
            Around::Vertex(l) => l,
            Around::Flags(a, _) => a,
        };
        match items[i] {
            Around::Vertex(n) if entry < n - 1 => {
                return Some(format!("vertex {n} followed clockwise by label {entry} (< {})", n - 1));
            }
            Around::Flags(_, n) if entry < n => {
                return Some(format!("flag {n} followed clockwise by label {entry} (< {n})"));
            }
            _ => {}
        }
    }
    None
}

fn check_eulerian_white(items: &[Around]) -> Option<String> {
    let k = items.len();
    for i in 0..k {
        if let Around::Flags(a, b) = items[i] {
            if b < a {
                return Some(format!("flags {a}, {b} decrease across an edge"));
            }
        }
        let entry = match items[(i + 1) % k] {
            Around::Vertex(l) => l,
            Around::Flags(a, _) => a,
        };
        match items[i] {
            Around::Vertex(n) if entry != n - 1 => {
                return Some(format!("vertex {n} followed clockwise by label {entry} instead of {}", n - 1));
            }
            Around::Flags(_, n) if entry != n => {
                return Some(format!("flag {n} followed clockwise by label {entry} instead of {n}"));
            }
            _ => {}
        }
    }
    None
}

fn check_eulerian_black(items: &[Around]) -> Option<String> {
    let k = items.len();
    for i in 0..k {
        let Around::Flags(a, b) = items[i] else {
            return Some("black vertex adjacent to a labeled vertex".into());
        };
        if b > a {
            return Some(format!("flags {a}, {b} increase across an edge"));
        }
        let (next, _) = flags_of(items[(i + 1) % k]);
        if next < b {
            return Some(format!("flag {b} followed clockwise by flag {next} on the next edge"));
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MobileJson {
    pub flavor: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub root: Option<usize>,
    #[serde(flatten)]
    pub node: NodeJson,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeJson {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<i64>,
    #[serde(default)]
    pub children: Vec<ChildJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChildJson {
    pub edge: EdgeJson,
    pub node: NodeJson,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PlainTag {
    Plain,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EdgeJson {
    Plain(PlainTag),
    Flags { flags: [i64; 2] },
    Flag { flag: i64 },
}

/// Small mobiles used across the test suites.
pub mod fixtures {
    use super::*;

    pub fn single_vertex(label: i64) -> Mobile {
        let mut b = MobileBuilder::new();
        b.node(NodeKind::Labeled(label));
        b.finish(Flavor::Bipartite, None).unwrap()
    }

    /// White center with labeled leaves, listed clockwise.
    pub fn star(flavor: Flavor, labels: &[i64]) -> Mobile {
        let mut b = MobileBuilder::new();
        let w = b.node(NodeKind::White);
        for &l in labels {
            let v = b.node(NodeKind::Labeled(l));
            b.edge(v, w, EdgeKind::Plain);
        }
        b.finish(flavor, None).unwrap()
    }

    /// One black - white flagged edge.
    pub fn flagged_pair(first_at_black: i64, second_at_black: i64) -> Mobile {
        let mut b = MobileBuilder::new();
        let black = b.node(NodeKind::Black);
        let white = b.node(NodeKind::White);
        b.edge(black, white, EdgeKind::Flagged { first_at_black, second_at_black });
        b.finish(Flavor::Eulerian, None).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    #[test]
    fn contour_of_small_mobiles() {
        let c = single_vertex(1).contour();
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].label(), 1);

        let labels: Vec<i64> = star(Flavor::Bipartite, &[2, 1]).contour().iter().map(|c| c.label()).collect();
        assert_eq!(labels, vec![2, 1]);

        let c = flagged_pair(0, 0).contour();
        assert_eq!(c.len(), 2);
        assert!(c.iter().all(|item| !item.is_corner() && item.label() == 0));
    }

    #[test]
    fn bipartite_rule() {
        assert!(star(Flavor::Bipartite, &[2, 1]).validate().is_valid());
        let report = star(Flavor::Bipartite, &[3, 1]).validate();
        assert_eq!(report.violation.unwrap().node, 0);
    }

    #[test]
    fn black_vertex_rule() {
        assert!(check_eulerian_black(&[Around::Flags(2, 0)]).is_none());
        assert!(check_eulerian_black(&[Around::Flags(2, 0), Around::Flags(1, 1)]).is_none());
        assert!(check_eulerian_black(&[Around::Flags(2, 1), Around::Flags(0, 0)]).is_some());
        let m = flagged_pair(2, 0).with_flavor(Flavor::PConstellation(3)).unwrap();
        assert_eq!(m.face_valence(0), 3);
    }

    #[test]
    fn well_labeled() {
        assert!(star(Flavor::Bipartite, &[2, 1]).check_well_labeled());
        assert!(!star(Flavor::Bipartite, &[2, 3]).check_well_labeled());
        let m = flagged_pair(0, 0);
        assert!(m.validate().is_valid());
        assert!(m.check_well_labeled());
    }

    #[test]
    fn malformed_trees() {
        let mut b = MobileBuilder::new();
        let u = b.node(NodeKind::Labeled(1));
        let v = b.node(NodeKind::Labeled(1));
        b.edge(u, v, EdgeKind::Plain);
        assert!(matches!(b.finish(Flavor::Bipartite, None), Err(MobileError::MalformedTree(_))));

        let mut b = MobileBuilder::new();
        let w = b.node(NodeKind::White);
        let k = b.node(NodeKind::Black);
        b.edge(k, w, EdgeKind::Flagged { first_at_black: 0, second_at_black: 1 });
        assert!(matches!(b.finish(Flavor::Eulerian, None), Err(MobileError::MalformedTree(_))));
    }

    fn triangle_mobile() -> Mobile {
        // white center: L1, flagged edge (2,0) to a univalent black, L2
        let mut b = MobileBuilder::new();
        let w = b.node(NodeKind::White);
        let l1 = b.node(NodeKind::Labeled(1));
        let k = b.node(NodeKind::Black);
        let l2 = b.node(NodeKind::Labeled(2));
        b.edge(l1, w, EdgeKind::Plain);
        b.edge(k, w, EdgeKind::Flagged { first_at_black: 2, second_at_black: 0 });
        b.edge(l2, w, EdgeKind::Plain);
        b.finish(Flavor::Eulerian, None).unwrap()
    }

    #[test]
    fn eulerian_contour_labels() {
        let m = triangle_mobile();
        assert!(m.validate().is_valid());
        assert!(m.check_well_labeled());
        let labels: Vec<i64> = m.contour().iter().map(|c| c.label()).collect();
        assert_eq!(labels, vec![1, 0, 2, 2]);
        assert_eq!(m.face_profile().unwrap(), (vec![3], vec![3]));
    }

    #[test]
    fn constellation_simplification() {
        let m = triangle_mobile();
        let s = m.simplify(Flavor::PConstellation(3)).unwrap();
        assert_eq!(s.num_unlabeled(), 1);
        assert!(s.validate().is_valid());
        assert!(s.check_well_labeled());
        let back = s.unsimplify().unwrap();
        assert_eq!(back.canonical_code(), m.canonical_code());
        assert!(matches!(m.simplify(Flavor::PConstellation(4)), Err(MobileError::NotInSubclass { node: 2, .. })));
    }

    #[test]
    fn arbitrary_simplification() {
        // bivalent black with (0,0) flags on both edges between two whites
        let mut b = MobileBuilder::new();
        let w1 = b.node(NodeKind::White);
        let k = b.node(NodeKind::Black);
        let w2 = b.node(NodeKind::White);
        let flags = EdgeKind::Flagged { first_at_black: 0, second_at_black: 0 };
        b.edge(k, w1, flags);
        b.edge(k, w2, flags);
        let m = b.finish(Flavor::Eulerian, None).unwrap();
        assert!(m.validate().is_valid());
        let s = m.simplify(Flavor::Arbitrary).unwrap();
        assert_eq!(s.edges().len(), 1);
        assert_eq!(s.edges()[0].kind, EdgeKind::Flag(0));
        assert!(s.check_well_labeled());
        assert_eq!(s.unsimplify().unwrap().canonical_code(), m.canonical_code());

        // univalent black with flags (n+1, n) is erased
        let mut b = MobileBuilder::new();
        let w = b.node(NodeKind::White);
        let l = b.node(NodeKind::Labeled(1));
        let k = b.node(NodeKind::Black);
        b.edge(l, w, EdgeKind::Plain);
        b.edge(k, w, EdgeKind::Flagged { first_at_black: 1, second_at_black: 0 });
        let m = b.finish(Flavor::Eulerian, None).unwrap();
        assert!(m.validate().is_valid());
        let s = m.simplify(Flavor::Arbitrary).unwrap();
        assert_eq!(s.nodes().len(), 2);
        assert!(s.validate().is_valid());
        assert_eq!(s.unsimplify().unwrap().canonical_code(), m.canonical_code());
    }

    #[test]
    fn json_round_trip_keeps_contour() {
        let m = triangle_mobile().with_root(Some(2)).unwrap();
        let text = serde_json::to_string(&m.to_json()).unwrap();
        let back = Mobile::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back.canonical_code(), m.canonical_code());
        let labels = |m: &Mobile| m.contour().iter().map(|c| c.label()).collect::<Vec<_>>();
        assert_eq!(labels(&back), labels(&m));
    }

    #[test]
    fn flavor_names() {
        for f in [Flavor::Bipartite, Flavor::Eulerian, Flavor::Arbitrary, Flavor::PConstellation(3)] {
            assert_eq!(f.to_string().parse::<Flavor>().unwrap(), f);
        }
        assert!("p1".parse::<Flavor>().is_err());
    }
}
