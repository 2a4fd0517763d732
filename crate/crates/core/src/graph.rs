//! Finite graphs as half-edge structures.
//!
//! Edge `e` owns the half-edges `2e` (tail to head) and `2e + 1` (head to tail), so the
//! reversal involution is `h ^ 1` and has no fixed points. Loops and parallel edges need no
//! special casing. Vertices are `0..vertex_count`.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfEdge(pub usize);

impl HalfEdge {
    pub fn forward(edge: usize) -> HalfEdge {
        HalfEdge(2 * edge)
    }

    pub fn backward(edge: usize) -> HalfEdge {
        HalfEdge(2 * edge + 1)
    }

    pub fn new(edge: usize, forward: bool) -> HalfEdge {
        if forward {
            HalfEdge::forward(edge)
        } else {
            HalfEdge::backward(edge)
        }
    }

    pub fn edge(self) -> usize {
        self.0 / 2
    }

    pub fn is_forward(self) -> bool {
        self.0.is_multiple_of(2)
    }

    pub fn reverse(self) -> HalfEdge {
        HalfEdge(self.0 ^ 1)
    }

    /// `+(e+1)` for forward, `-(e+1)` for backward.
    pub fn signed_id(self) -> i64 {
        let id = self.edge() as i64 + 1;
        if self.is_forward() {
            id
        } else {
            -id
        }
    }
}

/// A sequence of half-edges, each starting where the previous one ends.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgePath(pub Vec<HalfEdge>);

impl EdgePath {
    /// Removes immediate backtracks `h, reverse(h)`.
    pub fn reduce<I: IntoIterator<Item = HalfEdge>>(steps: I) -> EdgePath {
        let mut out: Vec<HalfEdge> = Vec::new();
        for h in steps {
            if out.last() == Some(&h.reverse()) {
                out.pop();
            } else {
                out.push(h);
            }
        }
        EdgePath(out)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn steps(&self) -> &[HalfEdge] {
        &self.0
    }

    pub fn inverse(&self) -> EdgePath {
        EdgePath(self.0.iter().rev().map(|h| h.reverse()).collect())
    }

    pub fn concat(&self, other: &EdgePath) -> EdgePath {
        EdgePath::reduce(self.0.iter().chain(other.0.iter()).copied())
    }

    pub fn is_reduced(&self) -> bool {
        self.0.windows(2).all(|w| w[1] != w[0].reverse())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Graph {
    ends: Vec<(usize, usize)>,
    vertex_count: usize,
    basepoint: Option<usize>,
}

impl Graph {
    pub fn new(vertex_count: usize, edges: Vec<(usize, usize)>, basepoint: Option<usize>) -> Result<Graph> {
        if let Some(&(u, w)) = edges.iter().find(|&&(u, w)| u >= vertex_count || w >= vertex_count) {
            return Err(Error::InvalidGraph(format!("edge ({u}, {w}) out of range")));
        }
        if basepoint.is_some_and(|b| b >= vertex_count) {
            return Err(Error::InvalidGraph("basepoint out of range".into()));
        }
        if vertex_count == 0 {
            return Err(Error::InvalidGraph("no vertices".into()));
        }
        Ok(Graph { ends: edges, vertex_count, basepoint })
    }

    /// One vertex (the basepoint) with `n` loops.
    pub fn rose(n: usize) -> Graph {
        Graph { ends: vec![(0, 0); n], vertex_count: 1, basepoint: Some(0) }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.ends.len()
    }

    pub fn half_edge_count(&self) -> usize {
        2 * self.ends.len()
    }

    pub fn basepoint(&self) -> Option<usize> {
        self.basepoint
    }

    pub fn with_basepoint(&self, basepoint: Option<usize>) -> Graph {
        assert!(basepoint.is_none_or(|b| b < self.vertex_count));
        Graph { basepoint, ..self.clone() }
    }

    pub fn edge_ends(&self, e: usize) -> (usize, usize) {
        self.ends[e]
    }

    pub fn is_loop(&self, e: usize) -> bool {
        let (u, w) = self.ends[e];
        u == w
    }

    pub fn tail(&self, h: HalfEdge) -> usize {
        let (u, w) = self.ends[h.edge()];
        if h.is_forward() {
            u
        } else {
            w
        }
    }

    pub fn head(&self, h: HalfEdge) -> usize {
        self.tail(h.reverse())
    }

    pub fn half_edges(&self) -> impl Iterator<Item = HalfEdge> {
        (0..self.half_edge_count()).map(HalfEdge)
    }

    pub fn add_vertex(&mut self) -> usize {
        self.vertex_count += 1;
        self.vertex_count - 1
    }

    pub fn add_edge(&mut self, from: usize, to: usize) -> usize {
        assert!(from < self.vertex_count && to < self.vertex_count);
        self.ends.push((from, to));
        self.ends.len() - 1
    }

    /// Half-edges leaving each vertex, in increasing order.
    pub fn stars(&self) -> Vec<Vec<HalfEdge>> {
        let mut stars = vec![Vec::new(); self.vertex_count];
        for h in self.half_edges() {
            stars[self.tail(h)].push(h);
        }
        stars
    }

    pub fn valence(&self, v: usize) -> usize {
        self.ends.iter().map(|&(a, b)| (a == v) as usize + (b == v) as usize).sum()
    }

    pub fn valences(&self) -> Vec<usize> {
        let mut val = vec![0; self.vertex_count];
        for &(a, b) in &self.ends {
            val[a] += 1;
            val[b] += 1;
        }
        val
    }

    fn loop_counts(&self) -> Vec<usize> {
        let mut c = vec![0; self.vertex_count];
        for &(a, b) in &self.ends {
            if a == b {
                c[a] += 1;
            }
        }
        c
    }

    pub fn is_connected(&self) -> bool {
        let mut uf = UnionFind::new(self.vertex_count);
        for &(a, b) in &self.ends {
            uf.union(a, b);
        }
        (1..self.vertex_count).all(|v| uf.find(v) == uf.find(0))
    }

    /// `E - V + 1` for a connected graph.
    pub fn rank(&self) -> Result<usize> {
        if !self.is_connected() {
            return Err(Error::Disconnected);
        }
        Ok(self.edge_count() + 1 - self.vertex_count)
    }

    /// Checks that consecutive half-edges of `p` are incident and that it runs `from → to`.
    pub fn is_path(&self, p: &EdgePath, from: usize, to: usize) -> bool {
        let mut at = from;
        for &h in p.steps() {
            if h.edge() >= self.edge_count() || self.tail(h) != at {
                return false;
            }
            at = self.head(h);
        }
        at == to
    }

    /// A BFS spanning tree rooted at `root`, as a sorted edge list.
    pub fn spanning_tree(&self, root: usize) -> Result<Vec<usize>> {
        if !self.is_connected() {
            return Err(Error::Disconnected);
        }
        let stars = self.stars();
        let mut seen = vec![false; self.vertex_count];
        let mut tree = Vec::new();
        let mut queue = VecDeque::from([root]);
        seen[root] = true;
        while let Some(v) = queue.pop_front() {
            for &h in &stars[v] {
                let w = self.head(h);
                if !seen[w] {
                    seen[w] = true;
                    tree.push(h.edge());
                    queue.push_back(w);
                }
            }
        }
        tree.sort_unstable();
        Ok(tree)
    }

    /// For a spanning tree, the tree path from `root` to every vertex.
    pub fn tree_paths(&self, tree: &[usize], root: usize) -> Result<Vec<EdgePath>> {
        let mut in_tree = vec![false; self.edge_count()];
        for &e in tree {
            in_tree[e] = true;
        }
        let stars = self.stars();
        let mut paths: Vec<Option<EdgePath>> = vec![None; self.vertex_count];
        paths[root] = Some(EdgePath::default());
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &h in &stars[v] {
                let w = self.head(h);
                if in_tree[h.edge()] && paths[w].is_none() {
                    let mut p = paths[v].clone().expect("visited");
                    p.0.push(h);
                    paths[w] = Some(p);
                    queue.push_back(w);
                }
            }
        }
        if tree.len() + 1 != self.vertex_count || paths.iter().any(Option::is_none) {
            return Err(Error::NotSpanningTree);
        }
        Ok(paths.into_iter().map(|p| p.expect("checked")).collect())
    }

    pub fn collapse_forest(&self, forest: &Forest) -> Result<CollapseMap> {
        let mut uf = UnionFind::new(self.vertex_count);
        let mut in_forest = vec![false; self.edge_count()];
        for &e in forest.edges() {
            if e >= self.edge_count() {
                return Err(Error::InvalidGraph(format!("edge {e} out of range")));
            }
            let (a, b) = self.ends[e];
            if !uf.union(a, b) {
                return Err(Error::NotAForest);
            }
            in_forest[e] = true;
        }
        // New vertices are numbered by the smallest old vertex of each component.
        let mut comp_id: HashMap<usize, usize> = HashMap::new();
        let vertex_map: Vec<usize> = (0..self.vertex_count)
            .map(|v| {
                let r = uf.find(v);
                let next = comp_id.len();
                *comp_id.entry(r).or_insert(next)
            })
            .collect();
        let mut ends = Vec::new();
        let mut half_edge_map = vec![None; self.half_edge_count()];
        for e in 0..self.edge_count() {
            if in_forest[e] {
                continue;
            }
            let (a, b) = self.ends[e];
            let ne = ends.len();
            ends.push((vertex_map[a], vertex_map[b]));
            half_edge_map[2 * e] = Some(HalfEdge::forward(ne));
            half_edge_map[2 * e + 1] = Some(HalfEdge::backward(ne));
        }
        let target = Graph { ends, vertex_count: comp_id.len(), basepoint: self.basepoint.map(|b| vertex_map[b]) };
        Ok(CollapseMap { target, vertex_map, half_edge_map })
    }

    /// All nonempty forests, by size and then lexicographically by edge index.
    pub fn enumerate_forests(&self) -> Vec<Forest> {
        let candidates: Vec<usize> = (0..self.edge_count()).filter(|&e| !self.is_loop(e)).collect();
        let mut out = Vec::new();
        for size in 1..self.vertex_count {
            let mut chosen = Vec::new();
            self.forests_of_size(&candidates, 0, size, &mut chosen, &mut out);
        }
        out
    }

    fn forests_of_size(
        &self,
        candidates: &[usize],
        start: usize,
        size: usize,
        chosen: &mut Vec<usize>,
        out: &mut Vec<Forest>,
    ) {
        if chosen.len() == size {
            out.push(Forest(chosen.clone()));
            return;
        }
        for i in start..candidates.len() {
            if candidates.len() - i < size - chosen.len() {
                break;
            }
            chosen.push(candidates[i]);
            if self.is_acyclic(chosen) {
                self.forests_of_size(candidates, i + 1, size, chosen, out);
            }
            chosen.pop();
        }
    }

    fn is_acyclic(&self, edges: &[usize]) -> bool {
        let mut uf = UnionFind::new(self.vertex_count);
        edges.iter().all(|&e| {
            let (a, b) = self.ends[e];
            uf.union(a, b)
        })
    }

    /// Erases every valence-2 vertex other than `protect` by merging its two edges.
    pub fn suppress_valence2(&self, protect: Option<usize>) -> Result<Suppression> {
        if !self.is_connected() {
            return Err(Error::Disconnected);
        }
        let val = self.valences();
        let keep: Vec<bool> = (0..self.vertex_count).map(|v| val[v] != 2 || Some(v) == protect).collect();
        if !keep.iter().any(|&k| k) {
            return Err(Error::CircleWithoutVertex);
        }
        let mut vertex_map = vec![None; self.vertex_count];
        let mut count = 0;
        for v in 0..self.vertex_count {
            if keep[v] {
                vertex_map[v] = Some(count);
                count += 1;
            }
        }
        let stars = self.stars();
        let mut used = vec![false; self.half_edge_count()];
        let mut ends = Vec::new();
        let mut provenance = Vec::new();
        for v in 0..self.vertex_count {
            if !keep[v] {
                continue;
            }
            for &h in &stars[v] {
                if used[h.0] {
                    continue;
                }
                let mut chain = vec![h];
                let mut cur = h;
                used[cur.0] = true;
                while !keep[self.head(cur)] {
                    let w = self.head(cur);
                    let next = *stars[w]
                        .iter()
                        .find(|&&x| x != cur.reverse())
                        .expect("valence 2 vertex has a second half-edge");
                    used[cur.reverse().0] = true;
                    used[next.0] = true;
                    chain.push(next);
                    cur = next;
                }
                used[cur.reverse().0] = true;
                ends.push((vertex_map[v].expect("kept"), vertex_map[self.head(cur)].expect("kept")));
                provenance.push(chain);
            }
        }
        let graph = Graph { ends, vertex_count: count, basepoint: self.basepoint.and_then(|b| vertex_map[b]) };
        Ok(Suppression { graph, provenance, vertex_map })
    }

    /// Every isomorphism `self → other`; see [`Graph::for_each_isomorphism`].
    pub fn isomorphisms(&self, other: &Graph, respect_basepoint: bool) -> Vec<Isomorphism> {
        let mut out = Vec::new();
        self.for_each_isomorphism(other, respect_basepoint, |iso| {
            out.push(iso.clone());
            true
        });
        out
    }

    /// Backtracking isomorphism search, edge by edge in BFS order, pruned by valence
    /// and loop counts. The callback returns `false` to stop early. Isolated vertices
    /// (only possible in disconnected graphs) are matched in index order, not permuted.
    pub fn for_each_isomorphism<F: FnMut(&Isomorphism) -> bool>(
        &self,
        other: &Graph,
        respect_basepoint: bool,
        mut visit: F,
    ) {
        if self.vertex_count != other.vertex_count || self.edge_count() != other.edge_count() {
            return;
        }
        let (va, vb) = (self.valences(), other.valences());
        let (la, lb) = (self.loop_counts(), other.loop_counts());
        let signature = |val: &[usize], lc: &[usize]| {
            let mut s: Vec<(usize, usize)> = val.iter().copied().zip(lc.iter().copied()).collect();
            s.sort_unstable();
            s
        };
        if signature(&va, &la) != signature(&vb, &lb) {
            return;
        }
        let mut vmap = vec![usize::MAX; self.vertex_count];
        let mut vused = vec![false; other.vertex_count];
        if respect_basepoint {
            match (self.basepoint, other.basepoint) {
                (Some(a), Some(b)) => {
                    if va[a] != vb[b] || la[a] != lb[b] {
                        return;
                    }
                    vmap[a] = b;
                    vused[b] = true;
                }
                (None, None) => {}
                _ => return,
            }
        }
        let start = if respect_basepoint { self.basepoint.unwrap_or(0) } else { 0 };
        let order = self.bfs_edge_order(start);
        let mut state = IsoSearch {
            a: self,
            b: other,
            va: &va,
            vb: &vb,
            la: &la,
            lb: &lb,
            order: &order,
            vmap,
            vused,
            hmap: vec![HalfEdge(usize::MAX); self.half_edge_count()],
            eused: vec![false; other.edge_count()],
        };
        state.search(0, &mut visit);
    }

    fn bfs_edge_order(&self, start: usize) -> Vec<usize> {
        let stars = self.stars();
        let mut seen_v = vec![false; self.vertex_count];
        let mut seen_e = vec![false; self.edge_count()];
        let mut order = Vec::new();
        for root in std::iter::once(start).chain(0..self.vertex_count) {
            if seen_v[root] {
                continue;
            }
            seen_v[root] = true;
            let mut queue = VecDeque::from([root]);
            while let Some(v) = queue.pop_front() {
                for &h in &stars[v] {
                    if !seen_e[h.edge()] {
                        seen_e[h.edge()] = true;
                        order.push(h.edge());
                    }
                    let w = self.head(h);
                    if !seen_v[w] {
                        seen_v[w] = true;
                        queue.push_back(w);
                    }
                }
            }
        }
        order
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson {
            vertices: (0..self.vertex_count as i64).collect(),
            basepoint: self.basepoint.map(|b| b as i64),
            edges: self
                .ends
                .iter()
                .enumerate()
                .map(|(e, &(a, b))| EdgeJson { id: e as i64 + 1, from: a as i64, to: b as i64, label: None })
                .collect(),
        }
    }

    /// Builds a graph from the JSON form. Edges are renumbered in list order; the
    /// returned map takes a JSON edge id to its edge index.
    pub fn from_json(j: &GraphJson) -> Result<(Graph, HashMap<i64, usize>)> {
        let vindex: HashMap<i64, usize> = j.vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        if vindex.len() != j.vertices.len() {
            return Err(Error::InvalidGraph("duplicate vertex id".into()));
        }
        let lookup = |v: i64| vindex.get(&v).copied().ok_or_else(|| Error::InvalidGraph(format!("unknown vertex {v}")));
        let mut edges = Vec::new();
        let mut eindex = HashMap::new();
        for (i, e) in j.edges.iter().enumerate() {
            if e.id <= 0 {
                return Err(Error::InvalidGraph(format!("edge id {} must be positive", e.id)));
            }
            if eindex.insert(e.id, i).is_some() {
                return Err(Error::InvalidGraph(format!("duplicate edge id {}", e.id)));
            }
            edges.push((lookup(e.from)?, lookup(e.to)?));
        }
        let basepoint = j.basepoint.map(lookup).transpose()?;
        Ok((Graph::new(j.vertices.len(), edges, basepoint)?, eindex))
    }

    pub fn to_dot(&self, name: &str) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "graph {name} {{");
        for v in 0..self.vertex_count {
            let shape = if Some(v) == self.basepoint { "doublecircle" } else { "circle" };
            let _ = writeln!(s, "  v{v} [shape={shape}];");
        }
        for (e, &(a, b)) in self.ends.iter().enumerate() {
            let _ = writeln!(s, "  v{a} -- v{b} [label=\"e{}\"];", e + 1);
        }
        s.push_str("}\n");
        s
    }
}

struct IsoSearch<'g> {
    a: &'g Graph,
    b: &'g Graph,
    va: &'g [usize],
    vb: &'g [usize],
    la: &'g [usize],
    lb: &'g [usize],
    order: &'g [usize],
    vmap: Vec<usize>,
    vused: Vec<bool>,
    hmap: Vec<HalfEdge>,
    eused: Vec<bool>,
}

impl IsoSearch<'_> {
    fn compatible(&self, u: usize, x: usize) -> bool {
        if self.vmap[u] != usize::MAX {
            return self.vmap[u] == x;
        }
        !self.vused[x] && self.va[u] == self.vb[x] && self.la[u] == self.lb[x]
    }

    fn search<F: FnMut(&Isomorphism) -> bool>(&mut self, depth: usize, visit: &mut F) -> bool {
        if depth == self.order.len() {
            let mut vmap = self.vmap.clone();
            let mut free = (0..self.b.vertex_count).filter(|&x| !self.vused[x]);
            for m in vmap.iter_mut().filter(|m| **m == usize::MAX) {
                *m = free.next().expect("equal vertex counts");
            }
            let iso = Isomorphism { vertex_map: vmap, half_edge_map: self.hmap.clone() };
            return visit(&iso);
        }
        let e = self.order[depth];
        let (u, w) = self.a.ends[e];
        for f in 0..self.b.edge_count() {
            if self.eused[f] || self.b.is_loop(f) != (u == w) {
                continue;
            }
            for fwd in [true, false] {
                let h = HalfEdge::new(f, fwd);
                let (x, y) = (self.b.tail(h), self.b.head(h));
                if !self.compatible(u, x) {
                    continue;
                }
                let set_u = self.vmap[u] == usize::MAX;
                if set_u {
                    self.vmap[u] = x;
                    self.vused[x] = true;
                }
                let ok_w = self.compatible(w, y);
                let set_w = ok_w && self.vmap[w] == usize::MAX;
                if ok_w {
                    if set_w {
                        self.vmap[w] = y;
                        self.vused[y] = true;
                    }
                    self.eused[f] = true;
                    self.hmap[2 * e] = h;
                    self.hmap[2 * e + 1] = h.reverse();
                    let go_on = self.search(depth + 1, visit);
                    self.eused[f] = false;
                    if set_w {
                        self.vmap[w] = usize::MAX;
                        self.vused[y] = false;
                    }
                    if !go_on {
                        if set_u {
                            self.vmap[u] = usize::MAX;
                            self.vused[x] = false;
                        }
                        return false;
                    }
                }
                if set_u {
                    self.vmap[u] = usize::MAX;
                    self.vused[x] = false;
                }
            }
        }
        true
    }
}

/// A bijection on half-edges commuting with reversal and incidence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Isomorphism {
    pub vertex_map: Vec<usize>,
    pub half_edge_map: Vec<HalfEdge>,
}

impl Isomorphism {
    pub fn map_half_edge(&self, h: HalfEdge) -> HalfEdge {
        self.half_edge_map[h.0]
    }

    pub fn map_path(&self, p: &EdgePath) -> EdgePath {
        EdgePath(p.steps().iter().map(|&h| self.map_half_edge(h)).collect())
    }

    pub fn is_identity(&self) -> bool {
        self.half_edge_map.iter().enumerate().all(|(i, h)| h.0 == i)
            && self.vertex_map.iter().enumerate().all(|(i, &v)| v == i)
    }
}

/// An acyclic set of non-loop edges, sorted.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Forest(Vec<usize>);

impl Forest {
    pub fn new(g: &Graph, mut edges: Vec<usize>) -> Result<Forest> {
        edges.sort_unstable();
        edges.dedup();
        if edges.iter().any(|&e| e >= g.edge_count()) {
            return Err(Error::InvalidGraph("forest edge out of range".into()));
        }
        if !g.is_acyclic(&edges) {
            return Err(Error::NotAForest);
        }
        Ok(Forest(edges))
    }

    pub fn empty() -> Forest {
        Forest(Vec::new())
    }

    pub fn edges(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// The quotient map of a forest collapse. Collapsed half-edges map to `None`.
#[derive(Clone, Debug)]
pub struct CollapseMap {
    pub target: Graph,
    pub vertex_map: Vec<usize>,
    pub half_edge_map: Vec<Option<HalfEdge>>,
}

impl CollapseMap {
    pub fn map_path(&self, p: &EdgePath) -> EdgePath {
        EdgePath::reduce(p.steps().iter().filter_map(|h| self.half_edge_map[h.0]))
    }

    /// `other ∘ self`
    pub fn then(&self, other: &CollapseMap) -> CollapseMap {
        CollapseMap {
            target: other.target.clone(),
            vertex_map: self.vertex_map.iter().map(|&v| other.vertex_map[v]).collect(),
            half_edge_map: self.half_edge_map.iter().map(|h| h.and_then(|h| other.half_edge_map[h.0])).collect(),
        }
    }
}

/// Result of [`Graph::suppress_valence2`]. `provenance[e]` lists the old half-edges that
/// the new forward half-edge of `e` traverses.
#[derive(Clone, Debug)]
pub struct Suppression {
    pub graph: Graph,
    pub provenance: Vec<Vec<HalfEdge>>,
    pub vertex_map: Vec<Option<usize>>,
}

impl Suppression {
    /// Rewrites a path between surviving vertices of the old graph. The path is
    /// reduced first; a reduced path can only cross an erased vertex straight through.
    pub fn rewrite_path(&self, p: &EdgePath) -> Result<EdgePath> {
        let p = EdgePath::reduce(p.steps().iter().copied());
        let mut starts: HashMap<HalfEdge, HalfEdge> = HashMap::new();
        for (e, chain) in self.provenance.iter().enumerate() {
            starts.insert(chain[0], HalfEdge::forward(e));
            starts.insert(chain.last().expect("nonempty").reverse(), HalfEdge::backward(e));
        }
        let mut out = Vec::new();
        let mut i = 0;
        let steps = p.steps();
        while i < steps.len() {
            let new = *starts
                .get(&steps[i])
                .ok_or_else(|| Error::InvalidMarking("path starts at an erased vertex".into()))?;
            let chain = &self.provenance[new.edge()];
            let expected: Vec<HalfEdge> =
                if new.is_forward() { chain.clone() } else { chain.iter().rev().map(|h| h.reverse()).collect() };
            if steps.len() < i + expected.len() || steps[i..i + expected.len()] != expected[..] {
                return Err(Error::InvalidMarking("path stops at an erased vertex".into()));
            }
            out.push(new);
            i += expected.len();
        }
        Ok(EdgePath(out))
    }

    /// The old half-edges making up a new path.
    pub fn expand_path(&self, p: &EdgePath) -> EdgePath {
        let mut out = Vec::new();
        for &h in p.steps() {
            let chain = &self.provenance[h.edge()];
            if h.is_forward() {
                out.extend(chain.iter().copied());
            } else {
                out.extend(chain.iter().rev().map(|x| x.reverse()));
            }
        }
        EdgePath(out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeJson {
    pub id: i64,
    pub from: i64,
    pub to: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub vertices: Vec<i64>,
    pub basepoint: Option<i64>,
    pub edges: Vec<EdgeJson>,
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> UnionFind {
        UnionFind { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false if already joined.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }
}
