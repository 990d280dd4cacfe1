//! Exact minimum cover of outer points by separable groups.
//!
//! The outer points are partitioned into at most `k` groups, each of which
//! must be separable from the inner set by one inequality. Points are placed
//! one at a time (most constrained first); a group's current witness is
//! reused whenever it already cuts the new point, and otherwise the group is
//! re-solved by LP. Results of LP calls are memoized by member set. `k`
//! grows from the hiding-set lower bound until a partition is found or the
//! greedy upper bound is reached.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;

use num_traits::Signed;
use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{chromatic_adj, max_clique_adj};
use crate::error::{Error, Result};
use crate::geometry::{centroid, extreme_points, reachable_through, strict_separator, weak_separator, WeakSeparation};
use crate::halfspace::Inequality;
use crate::lattice::{content, IPoint};
use crate::rat::{Rat, RatPoint};

/// How an outer point must relate to a separating inequality `a·x ≤ b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SeparationMode {
    /// `a·y > b`: the point leaves the closed halfspace.
    Strict,
    /// `a·y ≥ b` with `a ≠ 0`: the point leaves the open halfspace.
    Weak,
}

impl SeparationMode {
    pub fn cuts(self, ineq: &Inequality, y: &[i64]) -> bool {
        let s = ineq.slack_int(y);
        match self {
            SeparationMode::Strict => s.is_negative(),
            SeparationMode::Weak => !s.is_positive() && !ineq.is_trivial(),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SeparationMode::Strict => "strict",
            SeparationMode::Weak => "weak",
        }
    }
}

/// Tuning for [`Oracle::solve`].
#[derive(Debug, Clone, Copy, Default)]
pub struct CoverOptions {
    /// Use the chromatic number of the conflict graph as lower bound.
    pub chromatic_bound: bool,
}

/// Result of an exact cover computation.
#[derive(Debug, Clone)]
pub struct CoverOutcome {
    pub k: usize,
    pub inequalities: Vec<Inequality>,
    /// For every outer point (input order), the index of an inequality cutting it.
    pub assignment: Vec<usize>,
    pub stats: CoverStats,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct CoverStats {
    pub outer_points: usize,
    pub reduced_points: usize,
    pub conflict_edges: usize,
    pub lower_bound: usize,
    pub greedy_bound: usize,
    pub nodes: u64,
    pub lp_calls: u64,
}

type Cache = Mutex<HashMap<Vec<usize>, Option<Inequality>>>;

/// Separability oracle over a fixed inner set and a fixed list of outer points.
pub(crate) struct Oracle {
    mode: SeparationMode,
    inner: Vec<RatPoint>,
    center: RatPoint,
    pts: Vec<IPoint>,
    rpts: Vec<RatPoint>,
    cache: Cache,
    lp_calls: AtomicU64,
}

impl Oracle {
    pub fn new(mode: SeparationMode, inner: &[RatPoint], pts: Vec<IPoint>) -> Result<Self> {
        if inner.is_empty() {
            return Err(Error::InvalidInput("inner point set is empty".into()));
        }
        let inner = extreme_points(inner)?;
        let center = centroid(&inner);
        let rpts = pts.iter().map(|p| RatPoint::from_ints(p)).collect();
        Ok(Oracle {
            mode,
            inner,
            center,
            pts,
            rpts,
            cache: Mutex::new(HashMap::new()),
            lp_calls: AtomicU64::new(0),
        })
    }

    fn lp(&self, members: &[usize]) -> Result<WeakSeparation> {
        self.lp_calls.fetch_add(1, Ordering::Relaxed);
        let outer: Vec<RatPoint> = members.iter().map(|&i| self.rpts[i].clone()).collect();
        match self.mode {
            SeparationMode::Strict => Ok(match strict_separator(&self.inner, &outer)? {
                Some(i) => WeakSeparation::Strict(i),
                None => WeakSeparation::None,
            }),
            SeparationMode::Weak => weak_separator(&self.inner, &outer, &self.center),
        }
    }

    /// One inequality cutting every listed point, if any.
    pub fn separate(&self, members: &[usize]) -> Result<Option<Inequality>> {
        let mut key = members.to_vec();
        key.sort_unstable();
        if let Some(v) = self.cache.lock().expect("cache lock").get(&key) {
            return Ok(v.clone());
        }
        let res = self.lp(&key)?.inequality().map(|i| i.normalized());
        self.cache
            .lock()
            .expect("cache lock")
            .insert(key, res.clone());
        Ok(res)
    }

    fn cuts(&self, ineq: &Inequality, i: usize) -> bool {
        self.mode.cuts(ineq, &self.pts[i])
    }

    /// Singleton witnesses; errors on a point no inequality can cut. Also
    /// reports which points lie in the inner hull (possible in weak mode).
    fn singletons(&self) -> Result<(Vec<Inequality>, Vec<bool>)> {
        let res: Vec<(Inequality, bool)> = (0..self.pts.len())
            .into_par_iter()
            .map(|i| {
                let r = self.lp(&[i])?;
                let in_hull = matches!(r, WeakSeparation::Weak(_));
                match r.inequality() {
                    Some(w) => {
                        let w = w.normalized();
                        self.cache
                            .lock()
                            .expect("cache lock")
                            .insert(vec![i], Some(w.clone()));
                        Ok((w, in_hull))
                    }
                    None => Err(Error::NotSeparable(self.pts[i].clone())),
                }
            })
            .collect::<Result<_>>()?;
        Ok(res.into_iter().unzip())
    }

    /// Drops outer points `y ∉ conv(inner)` for which some other outer point
    /// `z` lies in `conv(inner ∪ {y})` with positive weight on `y`: every
    /// inequality cutting `z` then cuts `y`. `anchors` are integer points of
    /// `conv(inner)` used for a cheap gcd-based first pass.
    fn reduce(&self, anchors: &[IPoint], in_hull: &[bool]) -> Result<Vec<usize>> {
        let n = self.pts.len();
        let index: HashMap<&[i64], usize> = self
            .pts
            .iter()
            .enumerate()
            .map(|(i, p)| (p.as_slice(), i))
            .collect();
        let mut dominated = vec![false; n];
        for i in 0..n {
            if in_hull[i] {
                continue;
            }
            let y = &self.pts[i];
            for x in anchors {
                let v: Vec<i64> = y.iter().zip(x).map(|(a, b)| a - b).collect();
                let g = content(&v);
                if g < 2 {
                    continue;
                }
                let z: Vec<i64> = y.iter().zip(&v).map(|(a, b)| a - b / g).collect();
                if index.get(z.as_slice()).is_some_and(|&j| j != i) {
                    dominated[i] = true;
                    break;
                }
            }
        }
        let surv: Vec<usize> = (0..n).filter(|&i| !dominated[i]).collect();
        let lo_hi = inner_box(&self.inner);
        let drop: Vec<bool> = surv
            .par_iter()
            .map(|&i| {
                if in_hull[i] {
                    return Ok(false);
                }
                let y = &self.rpts[i];
                for &j in &surv {
                    if j == i || !in_box(&self.rpts[j], &lo_hi, y) {
                        continue;
                    }
                    if reachable_through(&self.rpts[j], y, &self.inner)? {
                        return Ok(true);
                    }
                }
                Ok(false)
            })
            .collect::<Result<_>>()?;
        Ok(surv
            .into_iter()
            .zip(drop)
            .filter(|(_, d)| !d)
            .map(|(i, _)| i)
            .collect())
    }

    /// Exact minimum cover of all outer points, with `anchors ⊆ conv(inner) ∩ Z^d`.
    pub fn solve(&self, anchors: &[IPoint], opts: CoverOptions) -> Result<CoverOutcome> {
        let n = self.pts.len();
        let mut stats = CoverStats {
            outer_points: n,
            ..CoverStats::default()
        };
        if n == 0 {
            return Ok(CoverOutcome {
                k: 0,
                inequalities: Vec::new(),
                assignment: Vec::new(),
                stats,
            });
        }
        let (singles_all, in_hull) = self.singletons()?;
        let kept = self.reduce(anchors, &in_hull)?;
        let m = kept.len();
        stats.reduced_points = m;
        let singles: Vec<Inequality> = kept.iter().map(|&i| singles_all[i].clone()).collect();

        let pairs: Vec<(usize, usize)> = (0..m)
            .flat_map(|u| (u + 1..m).map(move |v| (u, v)))
            .collect();
        let conflicts: Vec<bool> = pairs
            .par_iter()
            .map(|&(u, v)| {
                if self.cuts(&singles[u], kept[v]) || self.cuts(&singles[v], kept[u]) {
                    return Ok(false);
                }
                Ok(self.separate(&[kept[u], kept[v]])?.is_none())
            })
            .collect::<Result<_>>()?;
        let mut conflict = vec![vec![false; m]; m];
        for (&(u, v), c) in pairs.iter().zip(conflicts) {
            conflict[u][v] = c;
            conflict[v][u] = c;
            stats.conflict_edges += usize::from(c);
        }

        let lb = if opts.chromatic_bound {
            chromatic_adj(&conflict).0
        } else {
            max_clique_adj(&conflict).len()
        };
        stats.lower_bound = lb;

        let greedy = self.greedy(&kept, &conflict, &singles)?;
        stats.greedy_bound = greedy.0.len();

        let adj: Vec<Vec<usize>> = conflict
            .iter()
            .map(|r| (0..m).filter(|&j| r[j]).collect())
            .collect();
        let mut best = greedy;
        for k in lb.max(1)..stats.greedy_bound {
            let mut s = Search::new(self, &kept, &adj, &singles, k);
            let found = s.dfs(m)?;
            stats.nodes += s.nodes;
            if found {
                best = (s.witness, s.group_of.into_iter().map(|g| g.expect("assigned")).collect());
                break;
            }
        }
        let inequalities = best.0;
        let mut assignment = Vec::with_capacity(n);
        for i in 0..n {
            let j = inequalities
                .iter()
                .position(|w| self.cuts(w, i))
                .ok_or_else(|| Error::Internal(format!("point {:?} left uncovered", self.pts[i])))?;
            assignment.push(j);
        }
        stats.lp_calls = self.lp_calls.load(Ordering::Relaxed);
        Ok(CoverOutcome {
            k: inequalities.len(),
            inequalities,
            assignment,
            stats,
        })
    }

    /// First-fit cover in point order; returns witnesses and group per kept point.
    fn greedy(
        &self,
        kept: &[usize],
        conflict: &[Vec<bool>],
        singles: &[Inequality],
    ) -> Result<(Vec<Inequality>, Vec<usize>)> {
        let m = kept.len();
        let mut group = vec![usize::MAX; m];
        let mut witnesses = Vec::new();
        for v in 0..m {
            if group[v] != usize::MAX {
                continue;
            }
            let g = witnesses.len();
            let mut members = vec![v];
            let mut w = singles[v].clone();
            group[v] = g;
            for u in v + 1..m {
                if group[u] != usize::MAX || members.iter().any(|&x| conflict[x][u]) {
                    continue;
                }
                if self.cuts(&w, kept[u]) {
                    members.push(u);
                    group[u] = g;
                    continue;
                }
                let mut ids: Vec<usize> = members.iter().map(|&x| kept[x]).collect();
                ids.push(kept[u]);
                if let Some(w2) = self.separate(&ids)? {
                    w = w2;
                    members.push(u);
                    group[u] = g;
                }
            }
            witnesses.push(w);
        }
        Ok((witnesses, group))
    }
}

fn inner_box(inner: &[RatPoint]) -> Vec<(Rat, Rat)> {
    let d = inner[0].dim();
    (0..d)
        .map(|i| {
            let lo = inner.iter().map(|p| &p.0[i]).min().expect("non-empty").clone();
            let hi = inner.iter().map(|p| &p.0[i]).max().expect("non-empty").clone();
            (lo, hi)
        })
        .collect()
}

/// Is `z` in the bounding box of the inner set together with `y`?
fn in_box(z: &RatPoint, inner: &[(Rat, Rat)], y: &RatPoint) -> bool {
    z.0.iter().zip(inner).zip(&y.0).all(|((zi, (lo, hi)), yi)| {
        let lo = if yi < lo { yi } else { lo };
        let hi = if yi > hi { yi } else { hi };
        zi >= lo && zi <= hi
    })
}

struct Search<'a> {
    oracle: &'a Oracle,
    kept: &'a [usize],
    adj: &'a [Vec<usize>],
    singles: &'a [Inequality],
    k: usize,
    group_of: Vec<Option<usize>>,
    groups: Vec<Vec<usize>>,
    witness: Vec<Inequality>,
    /// `conf[v][g]`: members of group `g` in conflict with `v`.
    conf: Vec<Vec<u32>>,
    nodes: u64,
}

impl<'a> Search<'a> {
    fn new(
        oracle: &'a Oracle,
        kept: &'a [usize],
        adj: &'a [Vec<usize>],
        singles: &'a [Inequality],
        k: usize,
    ) -> Self {
        let m = kept.len();
        Search {
            oracle,
            kept,
            adj,
            singles,
            k,
            group_of: vec![None; m],
            groups: Vec::with_capacity(k),
            witness: Vec::with_capacity(k),
            conf: vec![vec![0; k]; m],
            nodes: 0,
        }
    }

    fn assign(&mut self, v: usize, g: usize) {
        self.group_of[v] = Some(g);
        self.groups[g].push(v);
        for &u in &self.adj[v] {
            self.conf[u][g] += 1;
        }
    }

    fn unassign(&mut self, v: usize, g: usize) {
        self.group_of[v] = None;
        self.groups[g].pop();
        for &u in &self.adj[v] {
            self.conf[u][g] -= 1;
        }
    }

    /// Picks the unplaced point with the fewest open groups; `None` if some point has none.
    fn select(&self) -> Option<usize> {
        let open_new = usize::from(self.groups.len() < self.k);
        let mut best: Option<(usize, usize, usize)> = None;
        for v in 0..self.kept.len() {
            if self.group_of[v].is_some() {
                continue;
            }
            let opts = (0..self.groups.len())
                .filter(|&g| self.conf[v][g] == 0)
                .count()
                + open_new;
            if opts == 0 {
                return None;
            }
            let deg = self.adj[v]
                .iter()
                .filter(|&&u| self.group_of[u].is_none())
                .count();
            let better = match best {
                None => true,
                Some((_, o, d)) => opts < o || (opts == o && deg > d),
            };
            if better {
                best = Some((v, opts, deg));
            }
        }
        best.map(|b| b.0)
    }

    fn dfs(&mut self, remaining: usize) -> Result<bool> {
        self.nodes += 1;
        if remaining == 0 {
            return Ok(true);
        }
        let Some(v) = self.select() else {
            return Ok(false);
        };
        for g in 0..self.groups.len() {
            if self.conf[v][g] != 0 {
                continue;
            }
            let w = if self.oracle.cuts(&self.witness[g], self.kept[v]) {
                self.witness[g].clone()
            } else {
                let mut ids: Vec<usize> = self.groups[g].iter().map(|&x| self.kept[x]).collect();
                ids.push(self.kept[v]);
                match self.oracle.separate(&ids)? {
                    Some(w) => w,
                    None => continue,
                }
            };
            let old = std::mem::replace(&mut self.witness[g], w);
            self.assign(v, g);
            if self.dfs(remaining - 1)? {
                return Ok(true);
            }
            self.unassign(v, g);
            self.witness[g] = old;
        }
        if self.groups.len() < self.k {
            let g = self.groups.len();
            self.groups.push(Vec::new());
            self.witness.push(self.singles[v].clone());
            self.assign(v, g);
            if self.dfs(remaining - 1)? {
                return Ok(true);
            }
            self.unassign(v, g);
            self.groups.pop();
            self.witness.pop();
        }
        Ok(false)
    }
}
