//! Cut-commutativity graphs and exact clique / coloring searches.
//!
//! The vertices of a graph are the members of an [`OperatorSet`], in order.
//! Under the `commute` relation an edge joins two members that cut-commute;
//! under `anticommute`, two members that cut-anticommute. The two graphs are
//! complements of each other.
//!
//! All searches are exact. Maximum cliques use branch and bound with greedy
//! coloring bounds; the chromatic number uses DSATUR-ordered backtracking
//! with increasing color budgets starting from the clique number.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;

use crate::cuts::{cut_anticommute, Partition};
use crate::error::{Error, Result};
use crate::pauli::OperatorSet;

/// Default vertex cap for clique and independence searches.
pub const CLIQUE_VERTEX_CAP: usize = 128;
/// Default vertex cap for the chromatic number search.
pub const COLORING_VERTEX_CAP: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Commute,
    Anticommute,
}

impl FromStr for Relation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "commute" => Ok(Relation::Commute),
            "anticommute" => Ok(Relation::Anticommute),
            other => Err(Error::InvalidArgument(format!(
                "unknown relation {other:?} (expected commute or anticommute)"
            ))),
        }
    }
}

/// Fixed-size bitset over vertex indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Bits(Vec<u64>);

impl Bits {
    fn empty(n: usize) -> Bits {
        Bits(vec![0; n.div_ceil(64)])
    }

    fn full(n: usize) -> Bits {
        let mut b = Bits::empty(n);
        for i in 0..n {
            b.insert(i);
        }
        b
    }

    fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn remove(&mut self, i: usize) {
        self.0[i / 64] &= !(1 << (i % 64));
    }

    fn contains(&self, i: usize) -> bool {
        (self.0[i / 64] >> (i % 64)) & 1 == 1
    }

    fn is_empty(&self) -> bool {
        self.0.iter().all(|w| *w == 0)
    }

    fn len(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn and(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn and_not(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & !b).collect())
    }

    fn first(&self) -> Option<usize> {
        self.0
            .iter()
            .enumerate()
            .find(|(_, w)| **w != 0)
            .map(|(k, w)| k * 64 + w.trailing_zeros() as usize)
    }

    fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let t = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(k * 64 + t)
                }
            })
        })
    }
}

/// Undirected simple graph with labeled vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    labels: Vec<String>,
    adj: Vec<Bits>,
}

impl Graph {
    pub fn empty(labels: Vec<String>) -> Graph {
        let n = labels.len();
        Graph {
            labels,
            adj: vec![Bits::empty(n); n],
        }
    }

    /// Vertices labeled `0..n`.
    pub fn unlabeled(n: usize) -> Graph {
        Graph::empty((0..n).map(|i| i.to_string()).collect())
    }

    pub fn from_edges(labels: Vec<String>, edges: &[(usize, usize)]) -> Result<Graph> {
        let mut g = Graph::empty(labels);
        for &(i, j) in edges {
            g.add_edge(i, j)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, i: usize, j: usize) -> Result<()> {
        let n = self.vertex_count();
        if i >= n || j >= n {
            return Err(Error::IndexOutOfRange {
                index: i.max(j),
                width: n,
            });
        }
        if i == j {
            return Err(Error::InvalidArgument(format!("self-loop at vertex {i}")));
        }
        self.adj[i].insert(j);
        self.adj[j].insert(i);
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adj[i].contains(j)
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adj[i].len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Bits::len).sum::<usize>() / 2
    }

    /// Edges `(i, j)` with `i < j`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (i, row) in self.adj.iter().enumerate() {
            out.extend(row.iter().filter(|&j| j > i).map(|j| (i, j)));
        }
        out
    }

    pub fn neighbors(&self, i: usize) -> Vec<usize> {
        self.adj[i].iter().collect()
    }

    pub fn is_clique(&self, vertices: &[usize]) -> bool {
        vertices.iter().enumerate().all(|(k, &a)| {
            vertices[k + 1..]
                .iter()
                .all(|&b| a != b && self.has_edge(a, b))
        })
    }

    pub fn is_independent(&self, vertices: &[usize]) -> bool {
        vertices.iter().enumerate().all(|(k, &a)| {
            vertices[k + 1..]
                .iter()
                .all(|&b| a != b && !self.has_edge(a, b))
        })
    }

    pub fn is_proper_coloring(&self, colors: &[usize]) -> bool {
        colors.len() == self.vertex_count()
            && self.edges().iter().all(|&(i, j)| colors[i] != colors[j])
    }
}

/// Graph over `sigma` whose edges are the pairs satisfying `relation` under `part`.
pub fn build_graph(sigma: &OperatorSet, part: &Partition, relation: Relation) -> Result<Graph> {
    if sigma.width() != part.width() {
        return Err(Error::WidthMismatch {
            expected: part.width(),
            found: sigma.width(),
        });
    }
    let members = sigma.members();
    let mut g = Graph::empty(members.iter().map(|p| p.to_string()).collect());
    for i in 0..members.len() {
        for j in i + 1..members.len() {
            let anti = cut_anticommute(&members[i], &members[j], part)?;
            if anti == (relation == Relation::Anticommute) {
                g.add_edge(i, j)?;
            }
        }
    }
    Ok(g)
}

pub fn complement(g: &Graph) -> Graph {
    let n = g.vertex_count();
    let all = Bits::full(n);
    let adj = g
        .adj
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = all.and_not(row);
            r.remove(i);
            r
        })
        .collect();
    Graph {
        labels: g.labels.clone(),
        adj,
    }
}

/// Maximum clique (or independent set) and a witness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CliqueResult {
    pub size: usize,
    /// Sorted vertex indices.
    pub witness: Vec<usize>,
}

/// Greedy sequential coloring of `cand`; returns vertices with their color
/// numbers (1-based), non-decreasing in color.
fn color_sort(g: &Graph, cand: &Bits) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(cand.len());
    let mut uncolored = cand.clone();
    let mut color = 0;
    while !uncolored.is_empty() {
        color += 1;
        let mut q = uncolored.clone();
        while let Some(v) = q.first() {
            out.push((v, color));
            uncolored.remove(v);
            q.remove(v);
            q = q.and_not(&g.adj[v]);
        }
    }
    out
}

/// Branch and bound. Stops as soon as `best.len() >= stop_at`.
fn expand(
    g: &Graph,
    current: &mut Vec<usize>,
    mut cand: Bits,
    best: &mut Vec<usize>,
    stop_at: usize,
) {
    let order = color_sort(g, &cand);
    for &(v, color) in order.iter().rev() {
        if best.len() >= stop_at || current.len() + color <= best.len() {
            return;
        }
        current.push(v);
        let next = cand.and(&g.adj[v]);
        if next.is_empty() {
            if current.len() > best.len() {
                *best = current.clone();
            }
        } else {
            expand(g, current, next, best, stop_at);
        }
        current.pop();
        cand.remove(v);
    }
}

fn largest_clique_within(g: &Graph, cand: Bits, stop_at: usize) -> Vec<usize> {
    let mut best = Vec::new();
    if !cand.is_empty() {
        expand(g, &mut Vec::new(), cand, &mut best, stop_at);
    }
    best
}

/// Exact maximum clique. The witness is the lexicographically smallest
/// maximum clique.
pub fn max_clique(g: &Graph) -> Result<CliqueResult> {
    max_clique_capped(g, CLIQUE_VERTEX_CAP)
}

pub fn max_clique_capped(g: &Graph, cap: usize) -> Result<CliqueResult> {
    let n = g.vertex_count();
    if n > cap {
        return Err(Error::cap("clique search vertices", n, cap));
    }
    let omega = largest_clique_within(g, Bits::full(n), usize::MAX).len();

    let mut witness = Vec::with_capacity(omega);
    let mut cand = Bits::full(n);
    for v in 0..n {
        if witness.len() == omega {
            break;
        }
        if !cand.contains(v) {
            continue;
        }
        let mut later = cand.and(&g.adj[v]);
        for u in 0..=v {
            later.remove(u);
        }
        let need = omega - witness.len() - 1;
        if need == 0 || largest_clique_within(g, later.clone(), need).len() >= need {
            witness.push(v);
            cand = later;
        }
    }
    if witness.len() != omega || !g.is_clique(&witness) {
        return Err(Error::Internal(
            "clique witness reconstruction failed".into(),
        ));
    }
    Ok(CliqueResult {
        size: omega,
        witness,
    })
}

/// Largest set of pairwise non-adjacent vertices.
pub fn independence_number(g: &Graph) -> Result<CliqueResult> {
    independence_number_capped(g, CLIQUE_VERTEX_CAP)
}

pub fn independence_number_capped(g: &Graph, cap: usize) -> Result<CliqueResult> {
    let r = max_clique_capped(&complement(g), cap)?;
    debug_assert!(g.is_independent(&r.witness));
    Ok(r)
}

/// Minimum proper coloring.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Coloring {
    pub count: usize,
    /// Color index of each vertex, `0..count`.
    pub colors: Vec<usize>,
}

impl Coloring {
    /// Vertices grouped by color.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.count];
        for (v, &c) in self.colors.iter().enumerate() {
            out[c].push(v);
        }
        out
    }
}

pub fn chromatic_number(g: &Graph) -> Result<Coloring> {
    chromatic_number_capped(g, COLORING_VERTEX_CAP)
}

pub fn chromatic_number_capped(g: &Graph, cap: usize) -> Result<Coloring> {
    let n = g.vertex_count();
    if n > cap {
        return Err(Error::cap("coloring search vertices", n, cap));
    }
    if n == 0 {
        return Ok(Coloring {
            count: 0,
            colors: Vec::new(),
        });
    }
    let lower = max_clique_capped(g, cap.max(CLIQUE_VERTEX_CAP))?.size;
    let greedy = dsatur_greedy(g);
    let upper = greedy.iter().max().map_or(0, |c| c + 1);
    for k in lower..upper {
        let mut colors = vec![usize::MAX; n];
        if color_with(g, k, &mut colors, 0, 0) {
            debug_assert!(g.is_proper_coloring(&colors));
            return Ok(Coloring { count: k, colors });
        }
    }
    Ok(Coloring {
        count: upper,
        colors: greedy,
    })
}

/// Uncolored vertex with the most distinctly colored neighbors; ties go to
/// higher degree, then lower index.
fn pick_saturated(g: &Graph, colors: &[usize]) -> Option<usize> {
    let mut best: Option<(usize, usize, usize)> = None;
    for v in 0..colors.len() {
        if colors[v] != usize::MAX {
            continue;
        }
        let mut seen: Vec<usize> = g.adj[v]
            .iter()
            .map(|u| colors[u])
            .filter(|&c| c != usize::MAX)
            .collect();
        seen.sort_unstable();
        seen.dedup();
        let key = (seen.len(), g.degree(v), v);
        let better = match best {
            None => true,
            Some((s, d, _)) => (key.0, key.1) > (s, d),
        };
        if better {
            best = Some(key);
        }
    }
    best.map(|(_, _, v)| v)
}

fn dsatur_greedy(g: &Graph) -> Vec<usize> {
    let mut colors = vec![usize::MAX; g.vertex_count()];
    while let Some(v) = pick_saturated(g, &colors) {
        let c = (0..)
            .find(|c| g.adj[v].iter().all(|u| colors[u] != *c))
            .unwrap_or(0);
        colors[v] = c;
    }
    colors
}

fn color_with(g: &Graph, k: usize, colors: &mut [usize], done: usize, used: usize) -> bool {
    if done == colors.len() {
        return true;
    }
    let Some(v) = pick_saturated(g, colors) else {
        return true;
    };
    // Only one fresh color is tried: fresh colors are interchangeable.
    for c in 0..k.min(used + 1) {
        if g.adj[v].iter().any(|u| colors[u] == c) {
            continue;
        }
        colors[v] = c;
        if color_with(g, k, colors, done + 1, used.max(c + 1)) {
            return true;
        }
        colors[v] = usize::MAX;
    }
    false
}

/// DOT text for `g`. Nodes in index order, edges in lexicographic order.
pub fn export_dot(g: &Graph) -> String {
    let mut out = String::from("graph G {\n");
    for (i, label) in g.labels.iter().enumerate() {
        let _ = writeln!(out, "  {i} [label=\"{}\"];", label.replace('"', "\\\""));
    }
    for (i, j) in g.edges() {
        let _ = writeln!(out, "  {i} -- {j};");
    }
    out.push_str("}\n");
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GraphJson {
    pub labels: Vec<String>,
    pub edges: Vec<[usize; 2]>,
}

pub fn export_json(g: &Graph) -> GraphJson {
    GraphJson {
        labels: g.labels.clone(),
        edges: g.edges().into_iter().map(|(i, j)| [i, j]).collect(),
    }
}
