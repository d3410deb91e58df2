//! Random pointed bipartite maps through random mobiles, and distance
//! statistics of large quadrangulations.

use std::collections::BTreeMap;
use std::thread;

use num_integer::binomial;
use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::bijection::{mobile_to_map_bipartite, BijectionError, DistanceProfile};
use crate::map::PlanarMap;
use crate::mobile::{EdgeKind, Flavor, Mobile, MobileBuilder, NodeKind};
use crate::series::Q;

#[derive(Debug, Error)]
pub enum SampleError {
    #[error("RejectionBudgetExhausted: no sample in the window after {0} attempts")]
    RejectionBudgetExhausted(u64),
    #[error("WeightsOutOfRange: {0}")]
    WeightsOutOfRange(String),
    #[error("Unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Bijection(#[from] BijectionError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Boltzmann mobile planted at a corner labeled 1, with size rejection
    Boltzmann,
    /// face count drawn from the windowed Boltzmann law, then a uniform
    /// quadrangulation mobile of that size (only for a single g4 weight)
    ExactSize,
}

#[derive(Debug, Clone)]
pub struct SampleSpec {
    pub flavor: Flavor,
    /// white face valence -> numeric weight
    pub weights: BTreeMap<usize, f64>,
    pub window: (usize, usize),
    pub max_attempts: u64,
    pub seed: u64,
    pub workers: usize,
    pub method: Method,
}

impl SampleSpec {
    pub fn new(weights: BTreeMap<usize, f64>, window: (usize, usize), seed: u64) -> SampleSpec {
        SampleSpec {
            flavor: Flavor::Bipartite,
            weights,
            window,
            max_attempts: 10_000_000,
            seed,
            workers: 1,
            method: Method::Boltzmann,
        }
    }

    fn check(&self) -> Result<(), SampleError> {
        if self.flavor != Flavor::Bipartite {
            return Err(SampleError::Unsupported(format!("sampling {} maps", self.flavor)));
        }
        if self.window.0 > self.window.1 {
            return Err(SampleError::Unsupported("empty face window".into()));
        }
        if self.weights.is_empty() || self.weights.iter().any(|(&k, &g)| k % 2 != 0 || k == 0 || !(g >= 0.0)) {
            return Err(SampleError::WeightsOutOfRange("need non-negative weights on even valences".into()));
        }
        if self.method == Method::ExactSize && self.weights.keys().ne([4usize].iter()) {
            return Err(SampleError::Unsupported("exact-size sampling handles quadrangulations only".into()));
        }
        Ok(())
    }
}

const ESCAPE: f64 = 1e6;
const LIMIT_ITERATIONS: usize = 1_000_000;

/// Numeric large-label limit R of the bipartite system, if the fixed-point
/// iteration from 1 stays bounded.
pub fn numeric_limit(weights: &BTreeMap<usize, f64>) -> Option<f64> {
    let terms: Vec<(i32, f64)> = weights
        .iter()
        .map(|(&k2, &g)| {
            let k = (k2 / 2) as u64;
            (k as i32, g * binomial(2 * k - 1, k) as f64)
        })
        .collect();
    let mut r = 1.0f64;
    for _ in 0..LIMIT_ITERATIONS {
        let s: f64 = terms.iter().map(|(k, c)| c * r.powi(k - 1)).sum();
        if s >= 1.0 {
            return None;
        }
        let next = 1.0 / (1.0 - s);
        if !(next < ESCAPE) {
            return None;
        }
        if (next - r).abs() <= 1e-13 * next {
            return Some(next);
        }
        r = next;
    }
    Some(r)
}

/// Largest weight on a single valence for which the limit stays finite,
/// found by bisection.
pub fn critical_weight(valence: usize) -> f64 {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if numeric_limit(&BTreeMap::from([(valence, mid)])).is_some() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Numeric R_n for n in 0..=top, with R_n = R for larger n.
#[derive(Debug, Clone)]
pub struct NumericR {
    pub r: Vec<f64>,
    pub limit: f64,
    weights: Vec<(usize, f64)>,
}

impl NumericR {
    pub fn solve(weights: &BTreeMap<usize, f64>, top: usize) -> Result<NumericR, SampleError> {
        let limit = numeric_limit(weights).ok_or_else(|| SampleError::WeightsOutOfRange("the limit fixed point diverges".into()))?;
        let mut nr = NumericR { r: vec![1.0; top + 1], limit, weights: weights.iter().map(|(&k, &g)| (k, g)).collect() };
        nr.r[0] = 0.0;
        for _ in 0..100_000 {
            let mut delta = 0.0f64;
            for n in 1..=top {
                let l = nr.l(n as i64);
                if !(l < 1.0) {
                    return Err(SampleError::WeightsOutOfRange(format!("L_{n} reached {l}")));
                }
                let next = 1.0 / (1.0 - l);
                delta = delta.max((next - nr.r[n]).abs() / next);
                nr.r[n] = next;
            }
            if delta < 1e-12 {
                return Ok(nr);
            }
        }
        Err(SampleError::WeightsOutOfRange("R_n iteration did not settle".into()))
    }

    pub fn at(&self, i: i64) -> f64 {
        if i <= 0 {
            0.0
        } else if i as usize >= self.r.len() {
            self.limit
        } else {
            self.r[i as usize]
        }
    }

    /// Table `t[s][i - base]` = <target|Q^s|i> for s = 0..=len.
    fn walks_to(&self, target: i64, len: usize) -> (i64, Vec<Vec<f64>>) {
        let base = (target - len as i64 - 1).max(0);
        let width = (target + len as i64 + 2 - base) as usize;
        let mut t = vec![vec![0.0; width]; len + 1];
        t[0][(target - base) as usize] = 1.0;
        for s in 1..=len {
            for idx in 0..width {
                let i = base + idx as i64;
                let mut v = 0.0;
                if idx + 1 < width {
                    v += t[s - 1][idx + 1];
                }
                if idx >= 1 {
                    v += self.at(i) * t[s - 1][idx - 1];
                }
                t[s][idx] = v;
            }
        }
        (base, t)
    }

    pub fn l(&self, n: i64) -> f64 {
        self.weights
            .iter()
            .map(|&(k, g)| {
                let (base, t) = self.walks_to(n, k - 1);
                g * t[k - 1][(n - 1 - base) as usize]
            })
            .sum()
    }
}

/// Plane tree with labeled and white nodes; children in clockwise order
/// after the parent edge.
#[derive(Debug, Clone, Default)]
pub struct LabeledTree {
    pub label: Vec<Option<i64>>,
    pub children: Vec<Vec<usize>>,
}

impl LabeledTree {
    fn add(&mut self, label: Option<i64>, parent: Option<usize>) -> usize {
        let u = self.label.len();
        self.label.push(label);
        self.children.push(Vec::new());
        if let Some(p) = parent {
            self.children[p].push(u);
        }
        u
    }

    pub fn num_faces(&self) -> usize {
        self.label.iter().filter(|l| l.is_none()).count()
    }

    /// Number of corners of the labeled node `u` (node 0 is the root).
    fn corners(&self, u: usize) -> usize {
        let d = self.children[u].len() + usize::from(u != 0);
        d.max(1)
    }

    pub fn to_mobile(&self) -> Mobile {
        let mut b = MobileBuilder::new();
        for l in &self.label {
            b.node(l.map_or(NodeKind::White, NodeKind::Labeled));
        }
        // rotation lists are filled in call order, so add each node's
        // parent edge before its child edges
        let mut stack = vec![0];
        while let Some(u) = stack.pop() {
            for &c in &self.children[u] {
                let (a, w) = if self.label[u].is_some() { (u, c) } else { (c, u) };
                b.edge(a, w, EdgeKind::Plain);
            }
            stack.extend(self.children[u].iter().rev());
        }
        let mobile = b.finish(Flavor::Bipartite, None);
        mobile.expect("sampled trees are well-formed")
    }

    /// Distance profile read off the labels: a node labeled n is a vertex at
    /// distance n and each of its corners an edge of type (n-1, n).
    pub fn profile(&self) -> DistanceProfile {
        let mut out = DistanceProfile::default();
        out.vertices.insert(0, 1);
        for (u, l) in self.label.iter().enumerate() {
            if let Some(n) = *l {
                *out.vertices.entry(n).or_default() += 1;
                *out.edges.entry((n - 1, n)).or_default() += self.corners(u) as u64;
            }
        }
        out
    }
}

fn walk_step(rng: &mut impl Rng, p_up: f64) -> bool {
    rng.gen::<f64>() < p_up
}

/// Boltzmann tree planted at a corner labeled 1; None once it exceeds
/// `max_faces` faces.
fn boltzmann_tree(nr: &NumericR, rng: &mut ChaCha8Rng, max_faces: usize) -> Option<LabeledTree> {
    let mut tree = LabeledTree::default();
    let root = tree.add(Some(1), None);
    let mut stack = vec![root];
    let mut faces = 0;
    while let Some(u) = stack.pop() {
        let n = tree.label[u].unwrap();
        let l_n = 1.0 - 1.0 / nr.at(n);
        // geometric number of white children
        while rng.gen::<f64>() < l_n {
            faces += 1;
            if faces > max_faces {
                return None;
            }
            let w = tree.add(None, Some(u));
            // pick the valence, then the walk around the white node
            let choices: Vec<(usize, f64, i64, Vec<Vec<f64>>)> = nr
                .weights
                .iter()
                .map(|&(k, g)| {
                    let (base, t) = nr.walks_to(n, k - 1);
                    (k, g * t[k - 1][(n - 1 - base) as usize], base, t)
                })
                .collect();
            let total: f64 = choices.iter().map(|c| c.1).sum();
            let mut x = rng.gen::<f64>() * total;
            let mut pick = &choices[0];
            for c in &choices {
                pick = c;
                if x < c.1 {
                    break;
                }
                x -= c.1;
            }
            let (k, _, base, t) = pick;
            let mut state = n - 1;
            for s in (1..*k).rev() {
                let here = t[s][(state - base) as usize];
                let up = t[s - 1][(state + 1 - base) as usize];
                if walk_step(rng, up / here) {
                    state += 1;
                } else {
                    let child = tree.add(Some(state), Some(w));
                    stack.push(child);
                    state -= 1;
                }
            }
            debug_assert_eq!(state, n);
        }
    }
    // children were pushed in order, so the stack order does not matter for
    // the tree shape
    Some(tree)
}

/// Uniform quadrangulation mobile with exactly `n` faces: a uniform plane
/// tree with `n` edges, i.i.d. label increments in {-1, 0, 1}, shifted so
/// that the minimum is 1, with a white node on every tree edge.
pub fn uniform_quadrangulation_tree(rng: &mut ChaCha8Rng, n: usize) -> LabeledTree {
    // cycle lemma: a shuffled word of n ups and n + 1 downs has exactly one
    // rotation that first reaches -1 at its end
    let mut steps: Vec<i32> = std::iter::repeat_n(1, n).chain(std::iter::repeat_n(-1, n + 1)).collect();
    steps.shuffle(rng);
    let (mut h, mut low, mut at) = (0, 0, 0);
    for (i, s) in steps.iter().enumerate() {
        h += s;
        if h < low {
            low = h;
            at = i + 1;
        }
    }
    let len = steps.len();
    steps.rotate_left(at % len);
    let mut tree = LabeledTree::default();
    let root = tree.add(Some(0), None);
    let mut path = vec![root];
    for &s in &steps[..2 * n] {
        let u = *path.last().unwrap();
        if s == 1 {
            let w = tree.add(None, Some(u));
            let l = tree.label[u].unwrap() + rng.gen_range(-1..=1);
            let c = tree.add(Some(l), Some(w));
            path.push(c);
        } else {
            path.pop();
        }
    }
    let min = tree.label.iter().flatten().min().copied().unwrap();
    for l in tree.label.iter_mut().flatten() {
        *l += 1 - min;
    }
    tree
}

/// Log weights of face counts in the window for pointed quadrangulations
/// weighted by g^n and inverse symmetry.
fn quadrangulation_size_law(g: f64, window: (usize, usize)) -> Vec<(usize, f64)> {
    // rooted maps with n edges: t(n+1)/t(n) = 6(2n+1)/(n+3), t(1) = 2;
    // pointed and unrooted: t(n)(n+2)/(4n)
    let mut log_t = 2f64.ln();
    let mut out = Vec::new();
    for n in 1..=window.1 {
        if n > 1 {
            let m = (n - 1) as f64;
            log_t += (6.0 * (2.0 * m + 1.0) / (m + 3.0)).ln();
        }
        if n >= window.0 {
            out.push((n, log_t + ((n + 2) as f64 / (4 * n) as f64).ln() + n as f64 * g.ln()));
        }
    }
    let top = out.iter().map(|x| x.1).fold(f64::MIN, f64::max);
    out.iter().map(|&(n, w)| (n, (w - top).exp())).collect()
}

/// Sampler with its numeric tables, reusable across draws.
#[derive(Debug, Clone)]
pub struct Sampler {
    spec: SampleSpec,
    numeric: Option<NumericR>,
    sizes: Vec<(usize, f64)>,
}

impl Sampler {
    pub fn new(spec: SampleSpec) -> Result<Sampler, SampleError> {
        spec.check()?;
        match spec.method {
            Method::Boltzmann => {
                let top = 64 + 2 * spec.window.1.min(200);
                let numeric = NumericR::solve(&spec.weights, top)?;
                Ok(Sampler { spec, numeric: Some(numeric), sizes: Vec::new() })
            }
            Method::ExactSize => {
                let g = spec.weights[&4];
                if numeric_limit(&spec.weights).is_none() {
                    return Err(SampleError::WeightsOutOfRange(format!("g4 = {g} is beyond the critical point")));
                }
                let sizes = quadrangulation_size_law(g, spec.window);
                Ok(Sampler { spec, numeric: None, sizes })
            }
        }
    }

    pub fn spec(&self) -> &SampleSpec {
        &self.spec
    }

    /// One labeled tree whose face count lies in the window.
    pub fn sample_tree(&self, rng: &mut ChaCha8Rng) -> Result<LabeledTree, SampleError> {
        match &self.numeric {
            Some(nr) => {
                for _ in 0..self.spec.max_attempts {
                    let Some(tree) = boltzmann_tree(nr, rng, self.spec.window.1) else {
                        continue;
                    };
                    if tree.num_faces() < self.spec.window.0 {
                        continue;
                    }
                    // keep each pointed map once, not once per corner at the origin
                    let ones: usize = (0..tree.label.len()).filter(|&u| tree.label[u] == Some(1)).map(|u| tree.corners(u)).sum();
                    if rng.gen_range(0..ones) == 0 {
                        return Ok(tree);
                    }
                }
                Err(SampleError::RejectionBudgetExhausted(self.spec.max_attempts))
            }
            None => {
                let total: f64 = self.sizes.iter().map(|s| s.1).sum();
                let mut x = rng.gen::<f64>() * total;
                let mut n = self.sizes.last().unwrap().0;
                for &(m, w) in &self.sizes {
                    if x < w {
                        n = m;
                        break;
                    }
                    x -= w;
                }
                Ok(uniform_quadrangulation_tree(rng, n))
            }
        }
    }

    pub fn sample_mobile(&self, rng: &mut ChaCha8Rng) -> Result<Mobile, SampleError> {
        Ok(self.sample_tree(rng)?.to_mobile())
    }

    /// A pointed map; the origin is the map's marked origin.
    pub fn sample_pointed_map(&self, rng: &mut ChaCha8Rng) -> Result<(PlanarMap, usize), SampleError> {
        let map = mobile_to_map_bipartite(&self.sample_mobile(rng)?)?;
        let origin = map.origin().expect("maps built from mobiles are pointed");
        Ok((map, origin))
    }

    /// Generator of worker `w`; draws are reproducible from (seed, w).
    pub fn worker_rng(&self, w: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.spec.seed);
        rng.set_stream(w as u64);
        rng
    }

    /// `count` draws spread over the spec's workers; draw i comes from
    /// worker i mod workers.
    pub fn run<T: Send, F>(&self, count: usize, f: F) -> Result<Vec<T>, SampleError>
    where
        F: Fn(LabeledTree) -> T + Sync,
    {
        let workers = self.spec.workers.max(1);
        let results: Vec<Result<Vec<T>, SampleError>> = thread::scope(|scope| {
            let handles: Vec<_> = (0..workers)
                .map(|w| {
                    let f = &f;
                    scope.spawn(move || {
                        let mut rng = self.worker_rng(w);
                        (w..count).step_by(workers).map(|_| self.sample_tree(&mut rng).map(f)).collect()
                    })
                })
                .collect();
            handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
        });
        let mut per_worker = Vec::new();
        for r in results {
            per_worker.push(r?.into_iter());
        }
        let mut out = Vec::with_capacity(count);
        for i in 0..count {
            out.push(per_worker[i % workers].next().unwrap());
        }
        Ok(out)
    }
}

pub fn sample_pointed_map(spec: &SampleSpec) -> Result<(PlanarMap, usize), SampleError> {
    let sampler = Sampler::new(spec.clone())?;
    sampler.sample_pointed_map(&mut sampler.worker_rng(0))
}

/// <e_{n-1,n}> = (6/35)(n^2+2n-1)(5n^4+20n^3+27n^2+14n+4) / (n(n+1)(n+2))
pub fn expected_edges_quadrangulation(n: i64) -> Q {
    let n = n as i128;
    Q::new(6, 35) * Q::new((n * n + 2 * n - 1) * (5 * n.pow(4) + 20 * n.pow(3) + 27 * n * n + 14 * n + 4), n * (n + 1) * (n + 2))
}

/// <v_n> = (3/35)((n+1)(5n^2+10n+2) + [n = 1])
pub fn expected_vertices_quadrangulation(n: i64) -> Q {
    let n = n as i128;
    Q::new(3, 35) * Q::from_integer((n + 1) * (5 * n * n + 10 * n + 2) + i128::from(n == 1))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProfileRow {
    pub n: i64,
    pub mean_v: f64,
    pub se_v: f64,
    pub mean_e: f64,
    pub se_e: f64,
}

fn mean_se(xs: &[f64]) -> (f64, f64) {
    let k = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / k;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (k - 1.0);
    (mean, (var / k).sqrt())
}

/// Per-distance means and standard errors of v_n and e_{n-1,n} over
/// `samples` independent draws, for n = 1..=n_cap.
pub fn monte_carlo_profile(spec: &SampleSpec, samples: usize, n_cap: i64) -> Result<Vec<ProfileRow>, SampleError> {
    let sampler = Sampler::new(spec.clone())?;
    let profiles = sampler.run(samples, |t| t.profile())?;
    Ok((1..=n_cap)
        .map(|n| {
            let v: Vec<f64> = profiles.iter().map(|p| p.vertices.get(&n).copied().unwrap_or(0) as f64).collect();
            let e: Vec<f64> = profiles.iter().map(|p| p.edges.get(&(n - 1, n)).copied().unwrap_or(0) as f64).collect();
            let (mean_v, se_v) = mean_se(&v);
            let (mean_e, se_e) = mean_se(&e);
            ProfileRow { n, mean_v, se_v, mean_e, se_e }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bijection::profile;
    use crate::census::edge_marking;

    fn spec(k: usize, g: f64, window: (usize, usize)) -> SampleSpec {
        SampleSpec::new(BTreeMap::from([(k, g)]), window, 7)
    }

    #[test]
    fn formulas() {
        assert_eq!(expected_edges_quadrangulation(1), Q::from_integer(4));
        assert_eq!(expected_edges_quadrangulation(2), Q::from_integer(19));
        assert_eq!(expected_vertices_quadrangulation(1), Q::from_integer(3));
        assert_eq!(expected_vertices_quadrangulation(2), Q::new(54, 5));
        assert_eq!(expected_vertices_quadrangulation(3), Q::new(132, 5));
    }

    #[test]
    fn critical_point_of_quadrangulations() {
        assert!((critical_weight(4) - 1.0 / 12.0).abs() < 1e-6);
        assert!(numeric_limit(&BTreeMap::from([(4, 0.09)])).is_none());
    }

    #[test]
    fn numeric_r_matches_series() {
        let nr = NumericR::solve(&BTreeMap::from([(4, 0.001)]), 40).unwrap();
        // R_1 = 1 + 2g + 9g^2 + ...
        assert!((nr.at(1) - (1.0 + 0.002 + 0.000009)).abs() < 1e-6);
        assert!((nr.at(40) - nr.limit).abs() < 1e-9);
    }

    #[test]
    fn single_edge_window() {
        let (map, origin) = sample_pointed_map(&spec(2, 0.3, (1, 1))).unwrap();
        assert_eq!(map.num_edges(), 1);
        assert_eq!(profile(&map, Some(origin)).unwrap().vertices[&1], 1);
    }

    #[test]
    fn one_face_quadrangulations_follow_the_census() {
        let sampler = Sampler::new(spec(4, 0.05, (1, 1))).unwrap();
        let draws = 20_000;
        let ends = sampler.run(draws, |t| t.profile().vertices.contains_key(&2)).unwrap();
        let hits = ends.iter().filter(|&&x| x).count() as f64;
        // origin at an end of the path: 2 of the 3 rooted classes
        let p = 2.0 / 3.0;
        let sd = (p * (1.0 - p) / draws as f64).sqrt();
        assert!((hits / draws as f64 - p).abs() < 3.0 * sd, "{hits}");
        assert_eq!(edge_marking(1, 2), "pointed-edge12");
    }

    #[test]
    fn sampled_mobiles_are_valid_and_match_their_maps() {
        let weights = BTreeMap::from([(2, 0.05), (4, 0.03), (6, 0.003)]);
        let sampler = Sampler::new(SampleSpec::new(weights, (3, 40), 11)).unwrap();
        let mut rng = sampler.worker_rng(0);
        for _ in 0..30 {
            let tree = sampler.sample_tree(&mut rng).unwrap();
            let mobile = tree.to_mobile();
            assert!(mobile.validate().is_valid(), "{:?}", mobile.validate());
            assert!(mobile.check_well_labeled());
            let map = mobile_to_map_bipartite(&mobile).unwrap();
            assert_eq!(profile(&map, None).unwrap(), tree.profile());
        }
    }

    #[test]
    fn exact_size_quadrangulations() {
        let mut s = spec(4, critical_weight(4) * 0.999, (50, 60));
        s.method = Method::ExactSize;
        let sampler = Sampler::new(s).unwrap();
        let mut rng = sampler.worker_rng(0);
        for _ in 0..10 {
            let tree = sampler.sample_tree(&mut rng).unwrap();
            assert!((50..=60).contains(&tree.num_faces()));
            let mobile = tree.to_mobile();
            assert!(mobile.validate().is_valid());
            let map = mobile_to_map_bipartite(&mobile).unwrap();
            assert!(map.face_valences().iter().all(|&k| k == 4));
            assert_eq!(profile(&map, None).unwrap(), tree.profile());
        }
    }

    #[test]
    fn deterministic_given_seed_and_workers() {
        let mut s = spec(4, 0.06, (2, 30));
        s.workers = 3;
        let sampler = Sampler::new(s).unwrap();
        let a = sampler.run(20, |t| t.label).unwrap();
        let b = sampler.run(20, |t| t.label).unwrap();
        assert_eq!(a, b);
    }
}
