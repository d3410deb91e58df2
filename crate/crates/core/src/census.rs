//! Brute-force counts of small pointed maps and small mobiles.
//!
//! Maps are produced by fixing the face contours as consecutive blocks of
//! half-edges and trying every pairing of half-edges; mobiles by growing
//! ordered trees from a root corner (or a root flag) with all admissible
//! labels. Both sides report counts of isomorphism classes keyed by face
//! valences and marking.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use num_integer::binomial;

use crate::bijection::label_distances;
use crate::map::{CanonicalCode, Color, PlanarMap};
use crate::mobile::{ContourItem, EdgeKind, Flavor, Mobile, MobileBuilder, NodeKind};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CountKey {
    pub flavor: String,
    pub whites: Vec<usize>,
    pub blacks: Vec<usize>,
    pub marking: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CountTable {
    pub counts: BTreeMap<CountKey, u64>,
}

impl CountTable {
    pub fn get(&self, flavor: &str, whites: &[usize], blacks: &[usize], marking: &str) -> u64 {
        let key = CountKey {
            flavor: flavor.to_string(),
            whites: sorted(whites),
            blacks: sorted(blacks),
            marking: marking.to_string(),
        };
        self.counts.get(&key).copied().unwrap_or(0)
    }

    fn add(&mut self, flavor: &str, whites: &[usize], blacks: &[usize], marking: String, n: u64) {
        let key = CountKey { flavor: flavor.to_string(), whites: whites.to_vec(), blacks: blacks.to_vec(), marking };
        *self.counts.entry(key).or_default() += n;
    }

    pub fn merge(&mut self, other: CountTable) {
        for (k, v) in other.counts {
            *self.counts.entry(k).or_default() += v;
        }
    }

    pub fn filter_marking(&self, marking: &str) -> CountTable {
        CountTable {
            counts: self.counts.iter().filter(|(k, _)| k.marking == marking).map(|(k, v)| (k.clone(), *v)).collect(),
        }
    }
}

fn list(v: &[usize]) -> String {
    if v.is_empty() {
        "-".to_string()
    } else {
        v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
    }
}

impl fmt::Display for CountTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in &self.counts {
            writeln!(f, "{}|{}|{}|{}|{}", k.flavor, list(&k.whites), list(&k.blacks), k.marking, v)?;
        }
        Ok(())
    }
}

fn sorted(v: &[usize]) -> Vec<usize> {
    let mut v = v.to_vec();
    v.sort_unstable();
    v
}

/// Marking name for an edge running from label `m` to label `n`.
pub fn edge_marking(m: i64, n: i64) -> String {
    if (0..10).contains(&m) && (0..10).contains(&n) {
        format!("pointed-edge{m}{n}")
    } else {
        format!("pointed-edge{m}-{n}")
    }
}

pub const POINTED: &str = "pointed";

/// Exact number of rooted planar maps with `n` edges.
pub fn tutte_rooted_count(n: u64) -> u128 {
    // 2 (2n)! 3^n / (n! (n+2)!) = 2 * 3^n * C(2n, n) / ((n+1)(n+2))
    let n128 = n as u128;
    2 * 3u128.pow(n as u32) * binomial(2 * n128, n128) / ((n128 + 1) * (n128 + 2))
}

/// Call `f` on every fixed-point-free involution of `0..n` that only pairs
/// darts of different classes when `class` is given.
fn for_each_pairing(n: usize, class: Option<&[bool]>, f: &mut dyn FnMut(&[usize])) {
    fn rec(opp: &mut Vec<usize>, class: Option<&[bool]>, f: &mut dyn FnMut(&[usize])) {
        let Some(a) = opp.iter().position(|&x| x == usize::MAX) else {
            f(opp);
            return;
        };
        for b in a + 1..opp.len() {
            if opp[b] != usize::MAX || class.is_some_and(|c| c[a] == c[b]) {
                continue;
            }
            opp[a] = b;
            opp[b] = a;
            rec(opp, class, f);
            opp[a] = usize::MAX;
            opp[b] = usize::MAX;
        }
    }
    let mut opp = vec![usize::MAX; n];
    rec(&mut opp, class, f);
}

fn cycle_count(perm: &[usize]) -> usize {
    let mut seen = vec![false; perm.len()];
    let mut count = 0;
    for s in 0..perm.len() {
        if !seen[s] {
            count += 1;
            let mut h = s;
            while !seen[h] {
                seen[h] = true;
                h = perm[h];
            }
        }
    }
    count
}

fn connected(opp: &[usize], cw: &[usize]) -> bool {
    let mut seen = vec![false; opp.len()];
    let mut stack = vec![0];
    seen[0] = true;
    let mut count = 1;
    while let Some(h) = stack.pop() {
        for g in [opp[h], cw[h]] {
            if !seen[g] {
                seen[g] = true;
                count += 1;
                stack.push(g);
            }
        }
    }
    count == opp.len()
}

/// All unlabeled planar maps whose faces have the given valences; with
/// `blacks` non-empty the faces are bicolored white/black. Returns one
/// representative per isomorphism class.
pub fn maps_with_faces(whites: &[usize], blacks: &[usize]) -> Vec<PlanarMap> {
    let mut block_colors = Vec::new();
    let mut rho = Vec::new();
    let mut class = Vec::new();
    for (faces, color) in [(whites, Color::White), (blacks, Color::Black)] {
        for &k in faces {
            let start = rho.len();
            for i in 0..k {
                rho.push(start + (i + 1) % k);
                class.push(color == Color::Black);
            }
            block_colors.push(color);
        }
    }
    let n = rho.len();
    if n == 0 || n % 2 != 0 {
        return Vec::new();
    }
    let colored = !blacks.is_empty();
    let n_faces = whites.len() + blacks.len();
    let n_vertices = (n / 2 + 2) as isize - n_faces as isize;
    if n_vertices < 1 {
        return Vec::new();
    }
    let mut rho_inv = vec![0; n];
    for (h, &r) in rho.iter().enumerate() {
        rho_inv[r] = h;
    }
    let mut seen: HashSet<CanonicalCode> = HashSet::new();
    let mut out = Vec::new();
    let mut cw = vec![0; n];
    let mut visit = |opp: &[usize]| {
        for y in 0..n {
            cw[y] = opp[rho_inv[y]];
        }
        if cycle_count(&cw) as isize != n_vertices || !connected(opp, &cw) {
            return;
        }
        let map = PlanarMap::build(opp.to_vec(), cw.clone(), None, None, None).expect("planar by construction");
        let map = if colored {
            // half-edge h lies in the face block it was allocated to
            let mut colors = vec![Color::White; map.num_faces()];
            for h in 0..n {
                if class[h] {
                    colors[map.face(h)] = Color::Black;
                }
            }
            map.with_coloring(Some(colors)).expect("pairing respects colors")
        } else {
            map
        };
        if seen.insert(map.canonical_code()) {
            out.push(map);
        }
    };
    if colored {
        for_each_pairing(n, Some(&class), &mut visit);
    } else if whites.iter().all(|k| k % 2 == 0) {
        // bipartite maps: sources alternate colors along each face, so
        // guess the parity of every face but the first and pair across colors
        let faces = whites.len();
        for shifts in 0..1usize << (faces - 1) {
            let mut side = Vec::with_capacity(n);
            for (f, &k) in whites.iter().enumerate() {
                let shift = f > 0 && shifts >> (f - 1) & 1 == 1;
                side.extend((0..k).map(|i| (i % 2 == 1) != shift));
            }
            for_each_pairing(n, Some(&side), &mut visit);
        }
    } else {
        for_each_pairing(n, None, &mut visit);
    }
    out
}

/// Pointed and edge-marked class counts of the maps with the given faces.
/// Marked edges are oriented from the smaller label to the larger one for
/// uncolored maps and along the orientation (black face on the right) for
/// colored maps.
pub fn count_maps(flavor: &str, whites: &[usize], blacks: &[usize]) -> CountTable {
    let whites = sorted(whites);
    let blacks = sorted(blacks);
    let mut table = CountTable::default();
    for map in maps_with_faces(&whites, &blacks) {
        let mut pointed = HashSet::new();
        let mut rooted: BTreeMap<(i64, i64), HashSet<CanonicalCode>> = BTreeMap::new();
        for origin in 0..map.num_vertices() {
            let m = map.with_markers(Some(origin), None).unwrap();
            pointed.insert(m.canonical_code());
            let labels = label_distances(&m, origin).expect("connected");
            for h in 0..map.num_half_edges() {
                let (a, b) = (labels[map.vertex(h)], labels[map.target(h)]);
                let keep = match map.face_color(map.face(h)) {
                    Some(c) => c == Color::Black,
                    None => a < b || (a == b && h < map.opposite(h)),
                };
                if keep {
                    let code = m.with_markers(Some(origin), Some(h)).unwrap().canonical_code();
                    rooted.entry((a, b)).or_default().insert(code);
                }
            }
        }
        table.add(flavor, &whites, &blacks, POINTED.to_string(), pointed.len() as u64);
        for ((a, b), codes) in rooted {
            table.add(flavor, &whites, &blacks, edge_marking(a, b), codes.len() as u64);
        }
    }
    table
}

/// Number of rooted maps (a marked half-edge, no origin) with `n` edges,
/// counted by brute force over all face profiles.
pub fn brute_rooted_count(n: usize) -> u64 {
    let mut total = 0;
    for faces in partitions(2 * n, 2 * n) {
        for map in maps_with_faces(&faces, &[]) {
            let codes: HashSet<CanonicalCode> = (0..map.num_half_edges())
                .map(|h| map.with_markers(None, Some(h)).unwrap().canonical_code())
                .collect();
            total += codes.len() as u64;
        }
    }
    total
}

/// Partitions of `n` into parts of size at most `max`, as sorted vectors.
pub fn partitions(n: usize, max: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in (1..=max.min(n)).rev() {
        for mut rest in partitions(n - first, first) {
            rest.push(first);
            rest.sort_unstable();
            out.push(rest);
        }
    }
    out
}

/// Counts of all maps with at most `max_edges` edges, per face profile.
pub fn enumerate_maps(max_edges: usize, flavor: Flavor) -> CountTable {
    let mut table = CountTable::default();
    for e in 1..=max_edges {
        match flavor {
            Flavor::Bipartite => {
                for half in partitions(e, e) {
                    let whites: Vec<usize> = half.iter().map(|k| 2 * k).collect();
                    table.merge(count_maps("bipartite", &whites, &[]));
                }
            }
            Flavor::Eulerian => {
                for whites in partitions(e, e) {
                    for blacks in partitions(e, e) {
                        table.merge(count_maps("eulerian", &whites, &blacks));
                    }
                }
            }
            Flavor::Arbitrary => {
                for faces in partitions(2 * e, 2 * e) {
                    table.merge(count_maps("arbitrary", &faces, &[]));
                }
            }
            Flavor::PConstellation(p) => {
                let p = p as usize;
                if e % p == 0 {
                    for part in partitions(e / p, e / p) {
                        let whites: Vec<usize> = part.iter().map(|k| k * p).collect();
                        let blacks = vec![p; e / p];
                        table.merge(count_maps(&format!("p{p}"), &whites, &blacks));
                    }
                }
            }
        }
    }
    table
}

// ---------------------------------------------------------------------------
// mobiles

/// A label-bearing item around a white vertex, in clockwise order.
#[derive(Debug, Clone, Copy)]
enum Item {
    Vertex(i64),
    /// (second, first) flags of a flagged edge, clockwise around the white
    Flags(i64, i64),
}

impl Item {
    fn entry(self) -> i64 {
        match self {
            Item::Vertex(l) => l,
            Item::Flags(a, _) => a,
        }
    }

    fn exit(self) -> i64 {
        match self {
            Item::Vertex(l) => l - 1,
            Item::Flags(_, b) => b,
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Task {
    /// labeled vertex that may receive further white children
    Labeled { node: usize, label: i64 },
    White { node: usize, parent: Item, degree: usize },
    /// black vertex whose parent edge reads (first, second) clockwise; a
    /// root black has its first child edge in that role
    Black { node: usize, first: i64, second: i64, root: bool },
}

type Emit<'a> = dyn FnMut(&[NodeKind], &[(usize, usize, EdgeKind)]) + 'a;

/// Depth-first growth of ordered trees. Every tree is produced once: the
/// decisions taken at a node are read off the finished tree.
struct Grower<'a> {
    eulerian: bool,
    max_label: i64,
    white_degrees: Vec<usize>,
    white_left: Vec<usize>,
    black_valences: Vec<usize>,
    black_left: Vec<usize>,
    blacks_pending: usize,
    nodes: Vec<NodeKind>,
    edges: Vec<(usize, usize, EdgeKind)>,
    tasks: Vec<Task>,
    emit: &'a mut Emit<'a>,
}

impl Grower<'_> {
    fn node(&mut self, kind: NodeKind) -> usize {
        self.nodes.push(kind);
        self.nodes.len() - 1
    }

    fn whites_left(&self) -> usize {
        self.white_left.iter().sum()
    }

    fn run(&mut self) {
        let Some(task) = self.tasks.pop() else {
            if self.whites_left() == 0 && self.black_left.iter().all(|&c| c == 0) {
                (self.emit)(&self.nodes, &self.edges);
            }
            return;
        };
        match task {
            Task::Labeled { node, label } => {
                self.run();
                self.add_white_child(node, label);
            }
            Task::White { node, parent, degree } => self.expand_white(node, parent, degree, &mut Vec::new()),
            Task::Black { node, first, second, root } => {
                self.expand_black(node, first, second, root, &mut Vec::new())
            }
        }
        self.tasks.push(task);
    }

    fn add_white_child(&mut self, node: usize, label: i64) {
        for d in 0..self.white_degrees.len() {
            if self.white_left[d] == 0 {
                continue;
            }
            self.white_left[d] -= 1;
            let (nn, ne, nt) = (self.nodes.len(), self.edges.len(), self.tasks.len());
            let w = self.node(NodeKind::White);
            self.edges.push((node, w, EdgeKind::Plain));
            self.tasks.push(Task::Labeled { node, label });
            self.tasks.push(Task::White { node: w, parent: Item::Vertex(label), degree: self.white_degrees[d] });
            self.run();
            self.nodes.truncate(nn);
            self.edges.truncate(ne);
            self.tasks.truncate(nt);
            self.white_left[d] += 1;
        }
    }

    fn expand_white(&mut self, node: usize, parent: Item, degree: usize, items: &mut Vec<Item>) {
        let last = *items.last().unwrap_or(&parent);
        if items.len() + 1 == degree {
            let closes = if self.eulerian {
                last.exit() == parent.entry()
            } else {
                parent.entry() >= last.exit()
            };
            if closes {
                self.create_white_children(node, items);
            }
            return;
        }
        let x = last.exit();
        if !self.eulerian {
            for l in x.max(1)..=self.max_label {
                items.push(Item::Vertex(l));
                self.expand_white(node, parent, degree, items);
                items.pop();
            }
            return;
        }
        if x >= 1 && x <= self.max_label {
            items.push(Item::Vertex(x));
            self.expand_white(node, parent, degree, items);
            items.pop();
        }
        if x >= 0 && self.blacks_pending < self.black_left.iter().sum::<usize>() {
            for y in x..=self.max_label {
                items.push(Item::Flags(x, y));
                self.blacks_pending += 1;
                self.expand_white(node, parent, degree, items);
                self.blacks_pending -= 1;
                items.pop();
            }
        }
    }

    fn create_white_children(&mut self, node: usize, items: &[Item]) {
        let (nn, ne, nt) = (self.nodes.len(), self.edges.len(), self.tasks.len());
        let mut tasks = Vec::new();
        for &item in items {
            match item {
                Item::Vertex(l) => {
                    let v = self.node(NodeKind::Labeled(l));
                    self.edges.push((v, node, EdgeKind::Plain));
                    tasks.push(Task::Labeled { node: v, label: l });
                }
                Item::Flags(second, first) => {
                    let b = self.node(NodeKind::Black);
                    self.edges.push((b, node, EdgeKind::Flagged { first_at_black: first, second_at_black: second }));
                    tasks.push(Task::Black { node: b, first, second, root: false });
                }
            }
        }
        self.tasks.extend(tasks.into_iter().rev());
        self.run();
        self.nodes.truncate(nn);
        self.edges.truncate(ne);
        self.tasks.truncate(nt);
    }

    /// Choose the further flagged edges of a black vertex clockwise after
    /// its parent edge, closing whenever the valence matches an unused black
    /// face.
    fn expand_black(&mut self, node: usize, first: i64, second: i64, root: bool, flags: &mut Vec<(i64, i64)>) {
        let prev_second = flags.last().map_or(second, |f| f.1);
        if prev_second <= first {
            let mut valence = 0;
            let mut cur = second;
            for &(f, s) in flags.iter() {
                valence += f - cur + 1;
                cur = s;
            }
            valence += first - cur + 1;
            if let Some(i) = self.black_valences.iter().position(|&v| v as i64 == valence) {
                if self.black_left[i] > 0 {
                    self.black_left[i] -= 1;
                    self.blacks_pending -= 1;
                    let mut all = Vec::new();
                    if root {
                        all.push((first, second));
                    }
                    all.extend_from_slice(flags);
                    self.attach_whites(node, &all, 0);
                    self.blacks_pending += 1;
                    self.black_left[i] += 1;
                }
            }
        }
        let needed = flags.len() + 1 + root as usize;
        if needed > self.whites_left() {
            return;
        }
        for f in prev_second.max(0)..=self.max_label {
            for s in 0..=f {
                flags.push((f, s));
                self.expand_black(node, first, second, root, flags);
                flags.pop();
            }
        }
    }

    fn attach_whites(&mut self, black: usize, flags: &[(i64, i64)], i: usize) {
        if i == flags.len() {
            self.run();
            return;
        }
        let (f, s) = flags[i];
        for d in 0..self.white_degrees.len() {
            if self.white_left[d] == 0 {
                continue;
            }
            self.white_left[d] -= 1;
            let (nn, ne, nt) = (self.nodes.len(), self.edges.len(), self.tasks.len());
            let w = self.node(NodeKind::White);
            self.edges.push((black, w, EdgeKind::Flagged { first_at_black: f, second_at_black: s }));
            self.tasks.push(Task::White { node: w, parent: Item::Flags(s, f), degree: self.white_degrees[d] });
            self.attach_whites(black, flags, i + 1);
            self.nodes.truncate(nn);
            self.edges.truncate(ne);
            self.tasks.truncate(nt);
            self.white_left[d] += 1;
        }
    }
}

fn multiset(values: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let mut keys: Vec<usize> = values.to_vec();
    keys.sort_unstable();
    keys.dedup();
    let counts = keys.iter().map(|k| values.iter().filter(|v| *v == k).count()).collect();
    (keys, counts)
}

/// Every rooted well-labeled mobile whose unlabeled vertices encode faces of
/// the given valences. Bipartite mobiles (`blacks` empty, `eulerian` false)
/// are rooted at a corner; Eulerian ones at a corner or at the black-side
/// flag of a flagged edge. The root is contour index 0.
pub fn for_each_rooted_mobile(eulerian: bool, whites: &[usize], blacks: &[usize], f: &mut dyn FnMut(Mobile)) {
    let degrees: Vec<usize> = if eulerian { whites.to_vec() } else { whites.iter().map(|v| v / 2).collect() };
    let n_edges: usize = degrees.iter().sum();
    let n_faces = whites.len() + blacks.len();
    if n_faces == 0 || n_edges + 1 < n_faces || (eulerian && blacks.iter().sum::<usize>() != n_edges) {
        return;
    }
    let flavor = if eulerian { Flavor::Eulerian } else { Flavor::Bipartite };
    let max_label = (n_edges + 1 - n_faces) as i64;
    let (white_degrees, white_left) = multiset(&degrees);
    let (black_valences, black_left) = multiset(blacks);
    let mut emit = |nodes: &[NodeKind], edges: &[(usize, usize, EdgeKind)]| {
        let mut b = MobileBuilder::new();
        for &k in nodes {
            b.node(k);
        }
        for &(x, y, kind) in edges {
            b.edge(x, y, kind);
        }
        let m = b.finish(flavor, Some(0)).expect("grown trees are well formed");
        assert!(m.validate().is_valid(), "grown mobile violates the label rules");
        if m.check_well_labeled() {
            f(m);
        }
    };
    let mut g = Grower {
        eulerian,
        max_label,
        white_degrees,
        white_left,
        black_valences,
        black_left,
        blacks_pending: 0,
        nodes: Vec::new(),
        edges: Vec::new(),
        tasks: Vec::new(),
        emit: &mut emit,
    };
    // corner roots: the root vertex gets at least one child
    for label in 1..=max_label {
        let root = g.node(NodeKind::Labeled(label));
        g.add_white_child(root, label);
        g.nodes.clear();
    }
    // flag roots
    if eulerian {
        for first in 0..=max_label {
            for second in 0..=first {
                let root = g.node(NodeKind::Black);
                g.blacks_pending += 1;
                g.expand_black(root, first, second, true, &mut Vec::new());
                g.blacks_pending -= 1;
                g.nodes.clear();
            }
        }
    }
}

/// Marking of a rooted mobile under the map correspondence.
pub fn root_marking(m: &Mobile) -> String {
    match m.contour()[m.root().expect("rooted")] {
        ContourItem::Corner { label, .. } => edge_marking(label - 1, label),
        ContourItem::Flag { dart, .. } => match m.edges()[dart / 2].kind {
            EdgeKind::Flagged { first_at_black, second_at_black } => edge_marking(first_at_black, second_at_black),
            _ => unreachable!("flag roots sit on flagged edges"),
        },
    }
}

/// Rooted and pointed mobile counts for one face profile.
pub fn count_mobiles(flavor: &str, whites: &[usize], blacks: &[usize]) -> CountTable {
    let whites = sorted(whites);
    let blacks = sorted(blacks);
    let eulerian = !blacks.is_empty();
    let mut table = CountTable::default();
    let mut unrooted: HashSet<Vec<i64>> = HashSet::new();
    let mut rooted: BTreeMap<String, u64> = BTreeMap::new();
    for_each_rooted_mobile(eulerian, &whites, &blacks, &mut |m| {
        *rooted.entry(root_marking(&m)).or_default() += 1;
        unrooted.insert(m.with_root(None).unwrap().canonical_code());
    });
    if !unrooted.is_empty() {
        table.add(flavor, &whites, &blacks, POINTED.to_string(), unrooted.len() as u64);
    }
    for (marking, n) in rooted {
        table.add(flavor, &whites, &blacks, marking, n);
    }
    table
}

/// Mobile counts over all face profiles with at most `max_faces` faces of
/// valence at most `max_valence`.
pub fn enumerate_mobiles(max_faces: usize, max_valence: usize, flavor: Flavor) -> CountTable {
    let mut table = CountTable::default();
    let profiles = |count: usize, step: usize| -> Vec<Vec<usize>> {
        let mut out = BTreeSet::new();
        fn rec(count: usize, min: usize, max: usize, step: usize, cur: &mut Vec<usize>, out: &mut BTreeSet<Vec<usize>>) {
            out.insert(cur.clone());
            if cur.len() == count {
                return;
            }
            let mut v = min;
            while v <= max {
                cur.push(v);
                rec(count, v, max, step, cur, out);
                cur.pop();
                v += step;
            }
        }
        rec(count, step, max_valence, step, &mut Vec::new(), &mut out);
        out.into_iter().collect()
    };
    match flavor {
        Flavor::Bipartite => {
            for whites in profiles(max_faces, 2) {
                if !whites.is_empty() {
                    table.merge(count_mobiles("bipartite", &whites, &[]));
                }
            }
        }
        _ => {
            let all = profiles(max_faces, 1);
            for whites in &all {
                for blacks in &all {
                    if !whites.is_empty() && !blacks.is_empty() && whites.len() + blacks.len() <= max_faces {
                        table.merge(count_mobiles("eulerian", whites, blacks));
                    }
                }
            }
        }
    }
    table
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tutte_formula() {
        assert_eq!((1..=4).map(tutte_rooted_count).collect::<Vec<_>>(), vec![2, 9, 54, 378]);
    }

    #[test]
    fn tutte_by_brute_force() {
        for n in 1..=4 {
            assert_eq!(brute_rooted_count(n) as u128, tutte_rooted_count(n as u64));
        }
    }

    #[test]
    fn quadrangulation_counts() {
        let t = count_maps("bipartite", &[4], &[]);
        assert_eq!(t.get("bipartite", &[4], &[], "pointed-edge01"), 2);
        let marked: u64 = t.counts.iter().filter(|(k, _)| k.marking != POINTED).map(|(_, v)| v).sum();
        assert_eq!(marked, 3);
        let m = count_mobiles("bipartite", &[4], &[]);
        assert_eq!(m.get("bipartite", &[4], &[], "pointed-edge01"), 2);
        assert_eq!(count_mobiles("bipartite", &[2], &[]).get("bipartite", &[2], &[], "pointed-edge01"), 1);
    }

    #[test]
    fn loop_map_counts() {
        let t = count_maps("eulerian", &[1], &[1]);
        assert_eq!(t.get("eulerian", &[1], &[1], "pointed-edge00"), 1);
        let m = count_mobiles("eulerian", &[1], &[1]);
        assert_eq!(m.get("eulerian", &[1], &[1], "pointed-edge00"), 1);
        assert_eq!(m.get("eulerian", &[1], &[1], POINTED), 1);
    }

    #[test]
    fn table_text() {
        let t = count_maps("bipartite", &[2], &[]);
        assert_eq!(t.to_string(), "bipartite|2|-|pointed|1\nbipartite|2|-|pointed-edge01|1\n");
    }
}
