//! Hiding graphs and the clique / colouring lower bounds on relaxation complexity.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::geometry::strict_separator;
use crate::lattice::{IPoint, LatticeSet};
use crate::rat::RatPoint;

/// Undirected graph on integer points; `u ~ v` when the segment `[u, v]` meets `conv(X)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HidingGraph {
    vertices: Vec<IPoint>,
    adj: Vec<Vec<bool>>,
}

impl HidingGraph {
    /// Builds a graph from an explicit edge list over vertex indices.
    pub fn from_edges(vertices: Vec<IPoint>, edges: &[(usize, usize)]) -> Result<Self> {
        let n = vertices.len();
        let mut adj = vec![vec![false; n]; n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return invalid(format!("edge ({u}, {v}) out of range"));
            }
            if u == v {
                return invalid(format!("self-loop at {u}"));
            }
            adj[u][v] = true;
            adj[v][u] = true;
        }
        Ok(HidingGraph { vertices, adj })
    }

    pub(crate) fn from_matrix(vertices: Vec<IPoint>, adj: Vec<Vec<bool>>) -> Self {
        debug_assert!((0..adj.len()).all(|i| !adj[i][i]));
        HidingGraph { vertices, adj }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[IPoint] {
        &self.vertices
    }

    pub fn adjacency(&self) -> &[Vec<bool>] {
        &self.adj
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u][v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].iter().filter(|&&b| b).count()
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut e = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if self.adj[u][v] {
                    e.push((u, v));
                }
            }
        }
        e
    }

    pub fn edge_count(&self) -> usize {
        self.edges().len()
    }

    pub fn index_of(&self, p: &[i64]) -> Option<usize> {
        self.vertices.iter().position(|q| q.as_slice() == p)
    }

    pub fn without_edge(&self, u: usize, v: usize) -> HidingGraph {
        let mut g = self.clone();
        g.adj[u][v] = false;
        g.adj[v][u] = false;
        g
    }

    /// Subgraph induced by `keep`, in the given order.
    pub fn induced(&self, keep: &[usize]) -> HidingGraph {
        let vertices = keep.iter().map(|&i| self.vertices[i].clone()).collect();
        let adj = keep
            .iter()
            .map(|&i| keep.iter().map(|&j| self.adj[i][j]).collect())
            .collect();
        HidingGraph { vertices, adj }
    }

    /// Graphviz rendering; nodes are labelled by their coordinates.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph hiding {\n");
        for (i, p) in self.vertices.iter().enumerate() {
            let label: Vec<String> = p.iter().map(|v| v.to_string()).collect();
            let _ = writeln!(s, "  n{i} [label=\"({})\"];", label.join(","));
        }
        for (u, v) in self.edges() {
            let _ = writeln!(s, "  n{u} -- n{v};");
        }
        s.push_str("}\n");
        s
    }
}

/// Hiding graph of `X` on `Y \ X`.
pub fn hiding_graph(x: &LatticeSet, y: &LatticeSet) -> Result<HidingGraph> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch {
            expected: x.dim(),
            found: y.dim(),
        });
    }
    let verts: Vec<IPoint> = y.iter().filter(|p| !x.contains(p)).cloned().collect();
    let n = verts.len();
    if n == 0 {
        return Ok(HidingGraph::from_matrix(verts, Vec::new()));
    }
    if x.is_empty() {
        return Ok(HidingGraph::from_matrix(verts, vec![vec![false; n]; n]));
    }
    let inner: Vec<RatPoint> = x.vertices()?.iter().map(|p| RatPoint::from_ints(p)).collect();
    let rats: Vec<RatPoint> = verts.iter().map(|p| RatPoint::from_ints(p)).collect();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    let hits: Vec<bool> = pairs
        .par_iter()
        .map(|&(u, v)| {
            strict_separator(&inner, &[rats[u].clone(), rats[v].clone()]).map(|s| s.is_none())
        })
        .collect::<Result<_>>()?;
    let mut adj = vec![vec![false; n]; n];
    for (&(u, v), h) in pairs.iter().zip(hits) {
        adj[u][v] = h;
        adj[v][u] = h;
    }
    Ok(HidingGraph::from_matrix(verts, adj))
}

/// Adjacent pairs of the hiding graph of `X` on `Y \ X`.
pub fn hiding_pairs(x: &LatticeSet, y: &LatticeSet) -> Result<Vec<(IPoint, IPoint)>> {
    let g = hiding_graph(x, y)?;
    Ok(g.edges()
        .into_iter()
        .map(|(u, v)| (g.vertices[u].clone(), g.vertices[v].clone()))
        .collect())
}

/// Maximum clique; returns its size and sorted vertex indices.
pub fn max_clique(g: &HidingGraph) -> (usize, Vec<usize>) {
    let c = max_clique_adj(&g.adj);
    (c.len(), c)
}

/// Chromatic number with a proper colouring using exactly that many colours.
pub fn chromatic_number(g: &HidingGraph) -> (usize, Vec<usize>) {
    chromatic_adj(&g.adj)
}

#[derive(Clone)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64)])
    }
    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn clear(&mut self, i: usize) {
        self.0[i / 64] &= !(1 << (i % 64));
    }
    fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }
    fn and(&self, o: &Bits) -> Bits {
        Bits(self.0.iter().zip(&o.0).map(|(a, b)| a & b).collect())
    }
    fn and_not_assign(&mut self, o: &Bits) {
        for (a, b) in self.0.iter_mut().zip(&o.0) {
            *a &= !b;
        }
    }
    fn first(&self) -> Option<usize> {
        self.0
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }
}

pub(crate) fn max_clique_adj(adj: &[Vec<bool>]) -> Vec<usize> {
    let n = adj.len();
    if n == 0 {
        return Vec::new();
    }
    let deg: Vec<usize> = adj.iter().map(|r| r.iter().filter(|&&b| b).count()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| deg[b].cmp(&deg[a]).then(a.cmp(&b)));
    let nbr: Vec<Bits> = order
        .iter()
        .map(|&u| {
            let mut b = Bits::new(n);
            for (j, &v) in order.iter().enumerate() {
                if adj[u][v] {
                    b.set(j);
                }
            }
            b
        })
        .collect();
    let mut all = Bits::new(n);
    for i in 0..n {
        all.set(i);
    }
    let mut mc = Mcq {
        nbr: &nbr,
        best: Vec::new(),
        cur: Vec::new(),
    };
    mc.expand(all);
    let mut res: Vec<usize> = mc.best.iter().map(|&j| order[j]).collect();
    res.sort_unstable();
    res
}

struct Mcq<'a> {
    nbr: &'a [Bits],
    best: Vec<usize>,
    cur: Vec<usize>,
}

impl Mcq<'_> {
    fn expand(&mut self, mut p: Bits) {
        let (list, colors) = self.color_sort(&p);
        for i in (0..list.len()).rev() {
            if self.cur.len() + colors[i] <= self.best.len() {
                return;
            }
            let v = list[i];
            self.cur.push(v);
            let np = p.and(&self.nbr[v]);
            if np.is_empty() {
                if self.cur.len() > self.best.len() {
                    self.best = self.cur.clone();
                }
            } else {
                self.expand(np);
            }
            self.cur.pop();
            p.clear(v);
        }
    }

    /// Greedy colouring of `p`; vertices listed by non-decreasing colour.
    fn color_sort(&self, p: &Bits) -> (Vec<usize>, Vec<usize>) {
        let mut list = Vec::new();
        let mut colors = Vec::new();
        let mut uncolored = p.clone();
        let mut color = 0;
        while !uncolored.is_empty() {
            color += 1;
            let mut q = uncolored.clone();
            while let Some(v) = q.first() {
                uncolored.clear(v);
                q.clear(v);
                q.and_not_assign(&self.nbr[v]);
                list.push(v);
                colors.push(color);
            }
        }
        (list, colors)
    }
}

pub(crate) fn chromatic_adj(adj: &[Vec<bool>]) -> (usize, Vec<usize>) {
    let n = adj.len();
    if n == 0 {
        return (0, Vec::new());
    }
    let lb = max_clique_adj(adj).len().max(1);
    for k in lb..=n {
        if let Some(c) = k_coloring(adj, k) {
            return (k, c);
        }
    }
    unreachable!("n colours always suffice")
}

/// A proper colouring with at most `k` colours, if one exists.
pub fn k_coloring(adj: &[Vec<bool>], k: usize) -> Option<Vec<usize>> {
    let n = adj.len();
    if n == 0 {
        return Some(Vec::new());
    }
    if k == 0 {
        return None;
    }
    let nbrs: Vec<Vec<usize>> = adj
        .iter()
        .map(|r| (0..n).filter(|&j| r[j]).collect())
        .collect();
    let mut st = Dsatur {
        nbrs: &nbrs,
        k,
        color: vec![None; n],
        counts: vec![vec![0; k]; n],
    };
    if st.solve(0, 0) {
        Some(st.color.into_iter().map(|c| c.expect("all coloured")).collect())
    } else {
        None
    }
}

struct Dsatur<'a> {
    nbrs: &'a [Vec<usize>],
    k: usize,
    color: Vec<Option<usize>>,
    counts: Vec<Vec<u32>>,
}

impl Dsatur<'_> {
    fn solve(&mut self, colored: usize, used: usize) -> bool {
        let n = self.color.len();
        if colored == n {
            return true;
        }
        let mut pick: Option<(usize, usize, usize)> = None;
        for v in 0..n {
            if self.color[v].is_some() {
                continue;
            }
            let sat = self.counts[v].iter().filter(|&&c| c > 0).count();
            if sat == self.k {
                return false;
            }
            let deg = self.nbrs[v]
                .iter()
                .filter(|&&u| self.color[u].is_none())
                .count();
            let better = match pick {
                None => true,
                Some((_, s, d)) => sat > s || (sat == s && deg > d),
            };
            if better {
                pick = Some((v, sat, deg));
            }
        }
        let (v, _, _) = pick.expect("an uncoloured vertex");
        let limit = (used + 1).min(self.k);
        for c in 0..limit {
            if self.counts[v][c] > 0 {
                continue;
            }
            self.color[v] = Some(c);
            for &u in &self.nbrs[v] {
                self.counts[u][c] += 1;
            }
            if self.solve(colored + 1, used.max(c + 1)) {
                return true;
            }
            for &u in &self.nbrs[v] {
                self.counts[u][c] -= 1;
            }
            self.color[v] = None;
        }
        false
    }
}
