//! Label-indexed recursions for mobile generating functions, solved
//! order by order with exact series.
//!
//! Labels live in a window `0..=top`. Walk states beyond `top` are dropped;
//! `top` is placed far enough above the requested range that the dropped
//! walks cannot reach the reported coefficients.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_integer::binomial;
use num_traits::Zero;
use thiserror::Error;

use crate::series::{Ring, Series, Q};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error("WindowTooNarrow: a walk from {start} of length {power} may leave the window [{lo}, {hi}]")]
    WindowTooNarrow { start: i64, power: usize, lo: i64, hi: i64 },
    #[error("IndexBeyondStabilization: index {index} exceeds the solved range 1..={n_max}")]
    IndexBeyondStabilization { index: i64, n_max: usize },
    #[error("BadSupport: {0}")]
    BadSupport(String),
    #[error("NoFixedPoint: iteration did not settle after {0} rounds")]
    NoFixedPoint(usize),
    #[error("BadWeight: {0}")]
    BadWeight(String),
}

/// Weight attached to faces of one valence: a formal variable or a constant.
#[derive(Debug, Clone, PartialEq)]
pub enum Weight {
    Var(String),
    Const(Q),
}

/// Face weights: `white[k]` for white (or plain) k-valent faces and
/// `black[k]` for black ones, with the series truncation degree.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightSpec {
    pub white: BTreeMap<usize, Weight>,
    pub black: BTreeMap<usize, Weight>,
    pub degree: usize,
}

impl WeightSpec {
    pub fn new(degree: usize) -> WeightSpec {
        WeightSpec { white: BTreeMap::new(), black: BTreeMap::new(), degree }
    }

    /// Formal variable `gK` on white K-valent faces.
    pub fn white_var(mut self, k: usize) -> WeightSpec {
        self.white.insert(k, Weight::Var(format!("g{k}")));
        self
    }

    /// Formal variable `hK` on black K-valent faces.
    pub fn black_var(mut self, k: usize) -> WeightSpec {
        self.black.insert(k, Weight::Var(format!("h{k}")));
        self
    }

    pub fn black_const(mut self, k: usize, c: Q) -> WeightSpec {
        self.black.insert(k, Weight::Const(c));
        self
    }

    pub fn white_const(mut self, k: usize, c: Q) -> WeightSpec {
        self.white.insert(k, Weight::Const(c));
        self
    }

    /// Parse "g4", "g4=1/2", "h2=1" items.
    pub fn parse(items: &[String], degree: usize) -> Result<WeightSpec, SolveError> {
        let mut w = WeightSpec::new(degree);
        for item in items {
            let (name, value) = match item.split_once('=') {
                Some((n, v)) => (n, Some(v)),
                None => (item.as_str(), None),
            };
            let bad = || SolveError::BadWeight(item.clone());
            let (side, k) = name.split_at(1);
            let k: usize = k.parse().map_err(|_| bad())?;
            if k == 0 {
                return Err(bad());
            }
            let weight = match value {
                None => Weight::Var(name.to_string()),
                Some(v) => Weight::Const(parse_q(v).ok_or_else(bad)?),
            };
            match side {
                "g" => w.white.insert(k, weight),
                "h" => w.black.insert(k, weight),
                _ => return Err(bad()),
            };
        }
        Ok(w)
    }

    pub fn vars(&self) -> Vec<String> {
        self.white
            .values()
            .chain(self.black.values())
            .filter_map(|w| match w {
                Weight::Var(v) => Some(v.clone()),
                Weight::Const(_) => None,
            })
            .collect()
    }

    pub fn ring(&self) -> Arc<Ring> {
        Ring::new(self.vars(), self.degree)
    }

    fn max_valence(&self) -> usize {
        self.white.keys().chain(self.black.keys()).copied().max().unwrap_or(1)
    }
}

pub fn parse_q(s: &str) -> Option<Q> {
    match s.split_once('/') {
        Some((a, b)) => {
            let n: i128 = a.trim().parse().ok()?;
            let d: i128 = b.trim().parse().ok()?;
            (d != 0).then(|| Q::new(n, d))
        }
        None => Some(Q::from_integer(s.trim().parse().ok()?)),
    }
}

fn weight_series(ring: &Arc<Ring>, w: &Weight) -> Series {
    match w {
        Weight::Var(v) => Series::var(ring, v),
        Weight::Const(c) => Series::constant(ring, *c),
    }
}

fn weights(ring: &Arc<Ring>, map: &BTreeMap<usize, Weight>) -> Vec<(usize, Series)> {
    map.iter().map(|(&k, w)| (k, weight_series(ring, w))).collect()
}

/// Banded operator on basis states `lo..=hi`; `steps[i - lo]` lists the
/// (target state, weight) pairs of state `i`.
#[derive(Debug, Clone)]
pub struct TransferOperator {
    pub lo: i64,
    pub hi: i64,
    pub max_up: i64,
    steps: Vec<Vec<(i64, Series)>>,
}

impl TransferOperator {
    pub fn new(lo: i64, hi: i64, steps: Vec<Vec<(i64, Series)>>) -> TransferOperator {
        assert_eq!(steps.len() as i64, hi - lo + 1);
        let max_up = steps
            .iter()
            .enumerate()
            .flat_map(|(i, s)| s.iter().map(move |(j, _)| j - (lo + i as i64)))
            .max()
            .unwrap_or(0)
            .max(0);
        let steps = steps
            .into_iter()
            .map(|s| s.into_iter().filter(|(j, w)| *j >= lo && *j <= hi && !w.is_zero()).collect())
            .collect();
        TransferOperator { lo, hi, max_up, steps }
    }

    /// `Q|i> = |i+1> + R_i |i-1>` with `r[i]` for `i` in the window.
    pub fn bipartite(ring: &Arc<Ring>, lo: i64, r: &[Series]) -> TransferOperator {
        let hi = lo + r.len() as i64 - 1;
        let steps = (lo..=hi)
            .map(|i| vec![(i + 1, Series::one(ring)), (i - 1, r[(i - lo) as usize].clone())])
            .collect();
        TransferOperator::new(lo, hi, steps)
    }

    /// Vectors `Q^p |start>` for p = 0..=max_power, dropping escaped states.
    fn powers(&self, ring: &Arc<Ring>, start: i64, max_power: usize) -> Vec<Vec<Series>> {
        let width = (self.hi - self.lo + 1) as usize;
        let mut v = vec![Series::zero(ring); width];
        v[(start - self.lo) as usize] = Series::one(ring);
        let mut out = vec![v];
        for _ in 0..max_power {
            let cur = out.last().unwrap();
            let mut next = vec![Series::zero(ring); width];
            for (i, x) in cur.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                for (j, w) in &self.steps[i] {
                    next[(j - self.lo) as usize].add_product(x, w);
                }
            }
            out.push(next);
        }
        out
    }

    fn entry<'a>(&self, v: &'a [Series], n: i64) -> Option<&'a Series> {
        (n >= self.lo && n <= self.hi).then(|| &v[(n - self.lo) as usize])
    }
}

/// `<n| Q^power |m>`: weighted walks of the given length from m to n.
pub fn q_power_element(op: &TransferOperator, ring: &Arc<Ring>, n: i64, m: i64, power: usize) -> Result<Series, SolveError> {
    let escape = m + power as i64 * op.max_up > op.hi || m < op.lo || n < op.lo || n > op.hi;
    if escape {
        return Err(SolveError::WindowTooNarrow { start: m, power, lo: op.lo, hi: op.hi });
    }
    let v = op.powers(ring, m, power);
    Ok(op.entry(&v[power], n).cloned().unwrap_or_else(|| Series::zero(ring)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverFlavor {
    Bipartite,
    Eulerian,
    PConstellation(u32),
    Arbitrary,
}

/// Solution arrays indexed by label `0..=top`; only `1..=n_max` (and `0` for
/// flags) are guaranteed exact to the ring's degree.
#[derive(Debug, Clone)]
pub struct SeriesSolution {
    pub flavor: SolverFlavor,
    pub ring: Arc<Ring>,
    pub n_max: usize,
    pub top: usize,
    pub r: Vec<Series>,
    pub l: Vec<Series>,
    /// `w[m][n]`, zero unless m >= n (Eulerian, p-constellation)
    pub w: Vec<Vec<Series>>,
    /// `b[m][n]`, zero unless m <= n (Eulerian, p-constellation)
    pub b: Vec<Vec<Series>>,
    /// `s[n]` (arbitrary maps)
    pub s: Vec<Series>,
    pub rounds: usize,
}

impl SeriesSolution {
    pub fn r_at(&self, n: i64) -> Series {
        if n <= 0 {
            Series::zero(&self.ring)
        } else {
            self.r[n as usize].clone()
        }
    }

    pub fn w_at(&self, m: i64, n: i64) -> Series {
        if m < 0 || n < 0 || self.w.is_empty() {
            Series::zero(&self.ring)
        } else {
            self.w[m as usize][n as usize].clone()
        }
    }

    pub fn b_at(&self, m: i64, n: i64) -> Series {
        if m < 0 || n < 0 || self.b.is_empty() {
            Series::zero(&self.ring)
        } else {
            self.b[m as usize][n as usize].clone()
        }
    }

    pub fn s_at(&self, n: i64) -> Series {
        if n < 0 || self.s.is_empty() {
            Series::zero(&self.ring)
        } else {
            self.s[n as usize].clone()
        }
    }

    fn check_index(&self, index: i64) -> Result<(), SolveError> {
        if index > self.n_max as i64 {
            Err(SolveError::IndexBeyondStabilization { index, n_max: self.n_max })
        } else {
            Ok(())
        }
    }
}

fn window_top(w: &WeightSpec, n_max: usize) -> usize {
    n_max + (w.degree + 1) * w.max_valence() + 2
}

const EXTRA_ROUNDS: usize = 4;

fn settle<F: FnMut() -> bool>(degree: usize, mut round: F) -> Result<usize, SolveError> {
    let cap = degree + 1 + EXTRA_ROUNDS;
    for i in 1..=cap {
        if !round() {
            return Ok(i);
        }
    }
    Err(SolveError::NoFixedPoint(cap))
}

/// Bipartite recursion: R_n = 1/(1 - L_n), L_n = sum_k g_2k <n|Q^(2k-1)|n-1>.
pub fn solve_bipartite(w: &WeightSpec, n_max: usize) -> Result<SeriesSolution, SolveError> {
    if w.white.keys().any(|k| k % 2 != 0) || !w.black.is_empty() {
        return Err(SolveError::BadSupport("bipartite weights need even white valences only".into()));
    }
    let ring = w.ring();
    let top = window_top(w, n_max);
    let g = weights(&ring, &w.white);
    let max_k = g.iter().map(|(k, _)| *k).max().unwrap_or(0);
    let mut r: Vec<Series> = (0..=top).map(|i| if i == 0 { Series::zero(&ring) } else { Series::one(&ring) }).collect();
    let mut l = vec![Series::zero(&ring); top + 1];
    let rounds = settle(w.degree, || {
        let op = TransferOperator::bipartite(&ring, 0, &r);
        let mut changed = false;
        for n in 1..=top {
            let v = op.powers(&ring, n as i64 - 1, max_k.saturating_sub(1));
            let mut ln = Series::zero(&ring);
            for (k, gk) in &g {
                if let Some(x) = op.entry(&v[k - 1], n as i64) {
                    ln.add_product(gk, x);
                }
            }
            let rn = (Series::one(&ring) - ln.clone()).recip();
            changed |= rn != r[n];
            r[n] = rn;
            l[n] = ln;
        }
        changed
    })?;
    Ok(SeriesSolution { flavor: SolverFlavor::Bipartite, ring, n_max, top, r, l, w: vec![], b: vec![], s: vec![], rounds })
}

/// Limit R = 1/(1 - sum_k C(2k-1, k) g_2k R^(k-1)).
pub fn solve_limit_r(w: &WeightSpec) -> Result<Series, SolveError> {
    if w.white.keys().any(|k| k % 2 != 0) {
        return Err(SolveError::BadSupport("limit R needs even white valences only".into()));
    }
    let ring = w.ring();
    let terms: Vec<(usize, Series)> = weights(&ring, &w.white)
        .into_iter()
        .map(|(k2, g)| {
            let k = (k2 / 2) as i128;
            (k as usize, g.scale(Q::from_integer(binomial(2 * k - 1, k))))
        })
        .collect();
    let mut r = Series::one(&ring);
    settle(w.degree, || {
        let mut sum = Series::zero(&ring);
        for (k, c) in &terms {
            sum.add_product(c, &r.pow(k - 1));
        }
        let next = (Series::one(&ring) - sum).recip();
        let changed = next != r;
        r = next;
        changed
    })?;
    Ok(r)
}

fn square(ring: &Arc<Ring>, n: usize) -> Vec<Vec<Series>> {
    vec![vec![Series::zero(ring); n]; n]
}

/// Eulerian recursion with white weights g_k and black weights g~_k.
pub fn solve_eulerian(w: &WeightSpec, n_max: usize) -> Result<SeriesSolution, SolveError> {
    let ring = w.ring();
    let top = window_top(w, n_max);
    let g = weights(&ring, &w.white);
    let gt = weights(&ring, &w.black);
    let max_g = g.iter().map(|(k, _)| *k).max().unwrap_or(1);
    let max_gt = gt.iter().map(|(k, _)| *k).max().unwrap_or(1);
    let size = top + 1;
    let mut r: Vec<Series> = (0..size).map(|i| if i == 0 { Series::zero(&ring) } else { Series::one(&ring) }).collect();
    let mut l = vec![Series::zero(&ring); size];
    let mut wm = square(&ring, size);
    let mut bm = square(&ring, size);
    let rounds = settle(w.degree, || {
        let mut changed = false;
        // white side: Q|i> = sum_{j>=i} B_ij |j> + R_i |i-1>
        let steps = (0..size)
            .map(|i| {
                let mut s: Vec<(i64, Series)> = (i..size).map(|j| (j as i64, bm[i][j].clone())).collect();
                s.push((i as i64 - 1, r[i].clone()));
                s
            })
            .collect();
        let op = TransferOperator::new(0, top as i64, steps);
        let mut new_w = square(&ring, size);
        for m in 0..size {
            let v = op.powers(&ring, m as i64, max_g - 1);
            for (k, gk) in &g {
                for n in 0..=m {
                    new_w[m][n].add_product(gk, &v[k - 1][n]);
                }
                if m + 1 < size {
                    l[m + 1].add_product(gk, &v[k - 1][m + 1]);
                }
            }
        }
        for n in 1..size {
            let rn = (Series::one(&ring) - l[n].clone()).recip();
            changed |= rn != r[n];
            r[n] = rn;
            l[n] = Series::zero(&ring);
        }
        changed |= new_w != wm;
        wm = new_w;
        // black side: Q~|i> = |i+1> + sum_{j<=i} W_ij |j>
        let steps = (0..size)
            .map(|i| {
                let mut s: Vec<(i64, Series)> = (0..=i).map(|j| (j as i64, wm[i][j].clone())).collect();
                s.push((i as i64 + 1, Series::one(&ring)));
                s
            })
            .collect();
        let op = TransferOperator::new(0, top as i64, steps);
        let mut new_b = square(&ring, size);
        for m in 0..size {
            let v = op.powers(&ring, m as i64, max_gt - 1);
            for (k, gk) in &gt {
                for n in m..size {
                    new_b[m][n].add_product(gk, &v[k - 1][n]);
                }
            }
        }
        changed |= new_b != bm;
        bm = new_b;
        changed
    })?;
    // recompute L from the settled values for reporting
    let steps = (0..size)
        .map(|i| {
            let mut s: Vec<(i64, Series)> = (i..size).map(|j| (j as i64, bm[i][j].clone())).collect();
            s.push((i as i64 - 1, r[i].clone()));
            s
        })
        .collect();
    let op = TransferOperator::new(0, top as i64, steps);
    for n in 1..size {
        let v = op.powers(&ring, n as i64 - 1, max_g - 1);
        let mut ln = Series::zero(&ring);
        for (k, gk) in &g {
            ln.add_product(gk, &v[k - 1][n]);
        }
        l[n] = ln;
    }
    Ok(SeriesSolution { flavor: SolverFlavor::Eulerian, ring, n_max, top, r, l, w: wm, b: bm, s: vec![], rounds })
}

/// p-constellations: black faces all of valence p with weight g~_p, so
/// B_{m,n} = g~_p [n = m + p - 1] and Q|i> = g~_p |i+p-1> + R_i |i-1>.
pub fn solve_p_constellation(p: u32, w: &WeightSpec, n_max: usize) -> Result<SeriesSolution, SolveError> {
    let p = p as usize;
    if p < 2 {
        return Err(SolveError::BadSupport("p must be at least 2".into()));
    }
    if w.white.keys().any(|k| k % p != 0) || w.black.keys().any(|&k| k != p) || !w.black.contains_key(&p) {
        return Err(SolveError::BadSupport(format!("white valences must be multiples of {p} and black faces {p}-valent")));
    }
    let ring = w.ring();
    let top = window_top(w, n_max);
    let g = weights(&ring, &w.white);
    let gp = weight_series(&ring, &w.black[&p]);
    let max_g = g.iter().map(|(k, _)| *k).max().unwrap_or(1);
    let size = top + 1;
    let mut r: Vec<Series> = (0..size).map(|i| if i == 0 { Series::zero(&ring) } else { Series::one(&ring) }).collect();
    let mut l = vec![Series::zero(&ring); size];
    let make_op = |r: &[Series]| {
        let steps = (0..size)
            .map(|i| vec![((i + p - 1) as i64, gp.clone()), (i as i64 - 1, r[i].clone())])
            .collect();
        TransferOperator::new(0, top as i64, steps)
    };
    let rounds = settle(w.degree, || {
        let op = make_op(&r);
        let mut changed = false;
        for n in 1..size {
            let v = op.powers(&ring, n as i64 - 1, max_g - 1);
            let mut ln = Series::zero(&ring);
            for (k, gk) in &g {
                ln.add_product(gk, &v[k - 1][n]);
            }
            let rn = (Series::one(&ring) - ln.clone()).recip();
            changed |= rn != r[n];
            r[n] = rn;
            l[n] = ln;
        }
        changed
    })?;
    let op = make_op(&r);
    let mut wm = square(&ring, size);
    let mut bm = square(&ring, size);
    for m in 0..size {
        let v = op.powers(&ring, m as i64, max_g - 1);
        for (k, gk) in &g {
            for n in 0..=m {
                wm[m][n].add_product(gk, &v[k - 1][n]);
            }
        }
        if m + p - 1 < size {
            bm[m][m + p - 1] = gp.clone();
        }
    }
    Ok(SeriesSolution { flavor: SolverFlavor::PConstellation(p as u32), ring, n_max, top, r, l, w: wm, b: bm, s: vec![], rounds })
}

/// Arbitrary maps: Q|i> = |i+1> + S_i |i> + R_i |i-1>,
/// R_n = 1/(1 - sum g_k <n|Q^(k-1)|n-1>), S_n = sum g_k <n|Q^(k-1)|n>.
pub fn solve_arbitrary(w: &WeightSpec, n_max: usize) -> Result<SeriesSolution, SolveError> {
    if !w.black.is_empty() {
        return Err(SolveError::BadSupport("arbitrary maps take white weights only".into()));
    }
    let ring = w.ring();
    let top = window_top(w, n_max);
    let g = weights(&ring, &w.white);
    let max_g = g.iter().map(|(k, _)| *k).max().unwrap_or(1);
    let size = top + 1;
    let mut r: Vec<Series> = (0..size).map(|i| if i == 0 { Series::zero(&ring) } else { Series::one(&ring) }).collect();
    let mut s = vec![Series::zero(&ring); size];
    let mut l = vec![Series::zero(&ring); size];
    let rounds = settle(w.degree, || {
        let steps = (0..size)
            .map(|i| vec![(i as i64 + 1, Series::one(&ring)), (i as i64, s[i].clone()), (i as i64 - 1, r[i].clone())])
            .collect();
        let op = TransferOperator::new(0, top as i64, steps);
        let mut changed = false;
        let mut new_s = vec![Series::zero(&ring); size];
        for m in 0..size {
            let v = op.powers(&ring, m as i64, max_g - 1);
            for (k, gk) in &g {
                new_s[m].add_product(gk, &v[k - 1][m]);
                if m + 1 < size {
                    l[m + 1].add_product(gk, &v[k - 1][m + 1]);
                }
            }
        }
        for n in 1..size {
            let rn = (Series::one(&ring) - l[n].clone()).recip();
            changed |= rn != r[n];
            r[n] = rn;
        }
        changed |= new_s != s;
        s = new_s;
        for x in l.iter_mut() {
            *x = Series::zero(&ring);
        }
        changed
    })?;
    for n in 1..size {
        l[n] = Series::one(&ring) - r[n].recip();
    }
    Ok(SeriesSolution { flavor: SolverFlavor::Arbitrary, ring, n_max, top, r, l, w: vec![], b: vec![], s, rounds })
}

/// Named combinations of solution entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivedKind {
    /// R_n - R_(n-1): origin plus a marked edge of type (n-1) -> n
    EdgeUp(i64),
    /// B_{n,m} W_{m,n} - B_{n-1,m-1} W_{m-1,n-1}: marked oriented edge m -> n, m >= n
    EdgeDown { from: i64, to: i64 },
    /// S_n^2 - S_(n-1)^2: marked edge (n, n) in an arbitrary map
    EdgeFlat(i64),
    /// Log(R_n / R_(n-1)) for n >= 2, Log R_1 for n = 1
    LogRatio(i64),
    Rn(i64),
    Ln(i64),
}

pub fn derived_series(sol: &SeriesSolution, kind: DerivedKind) -> Result<Series, SolveError> {
    match kind {
        DerivedKind::EdgeUp(n) => {
            sol.check_index(n)?;
            Ok(sol.r_at(n) - sol.r_at(n - 1))
        }
        DerivedKind::EdgeDown { from: m, to: n } => {
            sol.check_index(m.max(n))?;
            if m < n {
                return Ok(Series::zero(&sol.ring));
            }
            let now = &sol.b_at(n, m) * &sol.w_at(m, n);
            let before = &sol.b_at(n - 1, m - 1) * &sol.w_at(m - 1, n - 1);
            Ok(now - before)
        }
        DerivedKind::EdgeFlat(n) => {
            sol.check_index(n)?;
            let a = sol.s_at(n);
            let b = sol.s_at(n - 1);
            Ok(&a * &a - &b * &b)
        }
        DerivedKind::LogRatio(n) => {
            sol.check_index(n)?;
            if n < 1 {
                return Err(SolveError::IndexBeyondStabilization { index: n, n_max: sol.n_max });
            }
            let top = sol.r_at(n).log();
            if n == 1 {
                Ok(top)
            } else {
                Ok(top - sol.r_at(n - 1).log())
            }
        }
        DerivedKind::Rn(n) => {
            sol.check_index(n)?;
            Ok(sol.r_at(n))
        }
        DerivedKind::Ln(n) => {
            sol.check_index(n)?;
            Ok(if n <= 0 { Series::zero(&sol.ring) } else { sol.l[n as usize].clone() })
        }
    }
}

/// For each degree d, the smallest N such that the degree-d coefficients of
/// R_n equal those of `limit` for every n in N..=n_max (None if never).
pub fn stabilization(sol: &SeriesSolution, limit: &Series) -> Vec<Option<usize>> {
    (0..=sol.ring.degree())
        .map(|d| {
            let target = limit.degree_part(d);
            let mut first = None;
            for n in (1..=sol.n_max).rev() {
                if sol.r[n].degree_part(d) == target {
                    first = Some(n);
                } else {
                    break;
                }
            }
            first
        })
        .collect()
}

/// Large-label limits: values at the top of the exact range.
pub fn limit_values(sol: &SeriesSolution) -> (Series, Series) {
    (sol.r[sol.n_max].clone(), sol.l[sol.n_max].clone())
}

pub fn is_zero_at(s: &Series, exps: &[u32]) -> bool {
    s.coeff(exps).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i128) -> Q {
        Q::from_integer(n)
    }

    #[test]
    fn g2_only_gives_geometric_r() {
        let w = WeightSpec::new(5).white_var(2);
        let sol = solve_bipartite(&w, 4).unwrap();
        for n in 1..=4 {
            assert_eq!(sol.r[n].univariate(), vec![q(1); 6]);
        }
    }

    #[test]
    fn g4_first_coefficients() {
        let w = WeightSpec::new(2).white_var(4);
        let sol = solve_bipartite(&w, 3).unwrap();
        assert_eq!(sol.r[1].univariate(), vec![q(1), q(2), q(9)]);
        assert_eq!(sol.r[3].univariate(), vec![q(1), q(3), q(18)]);
    }

    #[test]
    fn limit_r_values() {
        let w = WeightSpec::new(4).white_var(4);
        assert_eq!(solve_limit_r(&w).unwrap().univariate(), vec![q(1), q(3), q(18), q(135), q(1134)]);
        assert_eq!(solve_limit_r(&WeightSpec::new(3)).unwrap().univariate(), vec![q(1), q(0), q(0), q(0)]);
        let w = WeightSpec::new(4).white_var(2);
        assert_eq!(solve_limit_r(&w).unwrap().univariate(), vec![q(1); 5]);
    }

    #[test]
    fn loop_map_weights() {
        let w = WeightSpec::new(2).white_var(1).black_var(1);
        let sol = solve_eulerian(&w, 3).unwrap();
        assert_eq!(sol.w_at(0, 0).coeff_of(&[("g1", 1)]), q(1));
        assert_eq!(sol.b_at(0, 0).coeff_of(&[("h1", 1)]), q(1));
        let e = derived_series(&sol, DerivedKind::EdgeDown { from: 0, to: 0 }).unwrap();
        assert_eq!(e.coeff_of(&[("g1", 1), ("h1", 1)]), q(1));
    }

    #[test]
    fn zero_weights() {
        let sol = solve_eulerian(&WeightSpec::new(2), 3).unwrap();
        assert!(sol.r[1..].iter().all(|r| *r == Series::one(&sol.ring)));
        let sol = solve_arbitrary(&WeightSpec::new(2), 3).unwrap();
        assert!(sol.s.iter().all(|s| s.is_zero()));
    }

    #[test]
    fn constellation_small_terms() {
        let w = WeightSpec::new(2).white_var(3).black_var(3);
        let sol = solve_p_constellation(3, &w, 3).unwrap();
        assert_eq!(sol.r[1].coeff_of(&[("g3", 1), ("h3", 1)]), q(1));
        assert!(solve_p_constellation(3, &WeightSpec::new(2).white_var(4).black_var(3), 3).is_err());
    }

    #[test]
    fn arbitrary_loop() {
        let w = WeightSpec::new(2).white_var(1);
        let sol = solve_arbitrary(&w, 3).unwrap();
        assert_eq!(sol.s[0].coeff_of(&[("g1", 1)]), q(1));
    }

    #[test]
    fn narrow_window() {
        let ring = Ring::new(vec![], 0);
        let op = TransferOperator::bipartite(&ring, 0, &vec![Series::one(&ring); 4]);
        assert!(matches!(q_power_element(&op, &ring, 2, 1, 5), Err(SolveError::WindowTooNarrow { .. })));
        assert_eq!(q_power_element(&op, &ring, 2, 1, 1).unwrap(), Series::one(&ring));
    }

    #[test]
    fn weight_parsing() {
        let w = WeightSpec::parse(&["g4".into(), "h2=1".into(), "g6=1/2".into()], 3).unwrap();
        assert_eq!(w.white[&4], Weight::Var("g4".into()));
        assert_eq!(w.black[&2], Weight::Const(q(1)));
        assert_eq!(w.white[&6], Weight::Const(Q::new(1, 2)));
        assert!(WeightSpec::parse(&["x4".into()], 3).is_err());
    }
}

#[cfg(test)]
mod cross_tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn eulerian_and_constellation_embed_bipartite() {
        let base = WeightSpec::new(3).white_var(2).white_var(4);
        let bip = solve_bipartite(&base, 4).unwrap();
        let eul = solve_eulerian(&base.clone().black_const(2, Q::one()), 4).unwrap();
        let con = solve_p_constellation(2, &base.clone().black_const(2, Q::one()), 4).unwrap();
        for n in 1..=4 {
            assert_eq!(bip.r[n].to_text(), eul.r[n].to_text());
            assert_eq!(bip.r[n].to_text(), con.r[n].to_text());
        }
    }

    #[test]
    fn arbitrary_matches_inflated_eulerian() {
        let base = WeightSpec::new(3).white_var(1).white_var(2).white_var(3);
        let arb = solve_arbitrary(&base, 4).unwrap();
        let eul = solve_eulerian(&base.clone().black_const(2, Q::one()), 4).unwrap();
        for n in 1..=4 {
            assert_eq!(arb.r[n].to_text(), eul.r[n].to_text());
            assert_eq!(arb.s[n].to_text(), eul.w[n][n].to_text());
            assert_eq!(eul.b[n][n + 1], Series::one(&eul.ring));
        }
    }
}
