//! Vertices of the spines `K_n` (no basepoint) and `L_n` (basepointed): marked graphs up to
//! marking-preserving isomorphism, adjacency by forest collapse, roses, Nielsen graphs and
//! the loops traced out by products of transvections.
//!
//! A marking is stored as one reduced closed edge-path per basis generator, all based at a
//! hub vertex. In mode L the hub is the basepoint. In mode K the hub is only an anchor for
//! computation and the marking is compared up to free homotopy.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::folding::is_automorphism;
use crate::freegroup::{simultaneous_conjugator, Endomorphism, Letter, Side, Transvection, Word};
use crate::graph::{EdgePath, Forest, Graph, GraphJson, HalfEdge, Isomorphism};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    /// Outer space spine: basepoint-free equivalence.
    K,
    /// Auter space spine: basepointed equivalence.
    L,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::K => "K",
            Mode::L => "L",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MarkedGraph {
    graph: Graph,
    hub: usize,
    marking: Vec<EdgePath>,
}

impl MarkedGraph {
    /// Validates closure, reducedness, rank and that the marking induces an automorphism.
    pub fn new(graph: Graph, hub: usize, marking: Vec<EdgePath>) -> Result<MarkedGraph> {
        let m = MarkedGraph::from_parts(graph, hub, marking)?;
        let f = m.induced_automorphism(&m.default_tree())?;
        if !is_automorphism(&f) {
            return Err(Error::NotAutomorphism);
        }
        Ok(m)
    }

    /// Structural checks only; the automorphism check is left to the caller.
    pub(crate) fn from_parts(graph: Graph, hub: usize, marking: Vec<EdgePath>) -> Result<MarkedGraph> {
        if hub >= graph.vertex_count() {
            return Err(Error::InvalidMarking("hub out of range".into()));
        }
        let rank = graph.rank()?;
        if rank != marking.len() {
            return Err(Error::RankMismatch { expected: rank, found: marking.len() });
        }
        for (k, p) in marking.iter().enumerate() {
            if !graph.is_path(p, hub, hub) {
                return Err(Error::InvalidMarking(format!("a{} is not a closed path at the hub", k + 1)));
            }
            if !p.is_reduced() {
                return Err(Error::InvalidMarking(format!("a{} is not reduced", k + 1)));
            }
        }
        Ok(MarkedGraph { graph, hub, marking })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn hub(&self) -> usize {
        self.hub
    }

    pub fn marking(&self) -> &[EdgePath] {
        &self.marking
    }

    pub fn rank(&self) -> usize {
        self.marking.len()
    }

    pub fn default_tree(&self) -> Vec<usize> {
        self.graph.spanning_tree(self.hub).expect("marked graphs are connected")
    }

    /// Reads the marking in the free basis given by the edges outside `tree`: the `j`-th
    /// non-tree edge (by index, forward orientation) is `a_j`.
    pub fn induced_automorphism(&self, tree: &[usize]) -> Result<Endomorphism> {
        self.graph.tree_paths(tree, self.hub)?;
        let reader = TreeReader::new(&self.graph, tree);
        Endomorphism::from_images(self.marking.iter().map(|p| reader.read(p)).collect())
    }

    fn check_policy(&self, mode: Mode) -> Result<()> {
        let val = self.graph.valences();
        for (v, &d) in val.iter().enumerate() {
            let is_base = mode == Mode::L && v == self.hub;
            let min = if is_base { 2 } else { 3 };
            if d < min {
                return Err(Error::ValencePolicy(format!("vertex {v} has valence {d}")));
            }
        }
        Ok(())
    }

    /// Collapses a forest and pushes the marking through the quotient map.
    pub fn collapse(&self, forest: &Forest, mode: Mode) -> Result<MarkedGraph> {
        let c = self.graph.collapse_forest(forest)?;
        let m = MarkedGraph {
            hub: c.vertex_map[self.hub],
            marking: self.marking.iter().map(|p| c.map_path(p)).collect(),
            graph: c.target,
        };
        m.check_policy(mode)?;
        Ok(m)
    }

    /// Inverse of collapsing a single edge: the half-edges in `moved` (all leaving `v`) are
    /// re-attached to a new vertex joined to `v` by a new edge. The hub stays where it was.
    pub fn blow_up(&self, v: usize, moved: &[HalfEdge], mode: Mode) -> Result<MarkedGraph> {
        let stars = self.graph.stars();
        if moved.iter().any(|h| !stars[v].contains(h)) {
            return Err(Error::InvalidGraph("blow-up half-edges must leave the vertex".into()));
        }
        let mut graph = self.graph.clone();
        let fresh = graph.add_vertex();
        let mut tails: Vec<usize> = self.graph.half_edges().map(|h| self.graph.tail(h)).collect();
        for h in moved {
            tails[h.0] = fresh;
        }
        let mut ends: Vec<(usize, usize)> =
            (0..self.graph.edge_count()).map(|e| (tails[2 * e], tails[2 * e + 1])).collect();
        let new_edge = ends.len();
        ends.push((v, fresh));
        tails.push(v);
        tails.push(fresh);
        let graph = Graph::new(graph.vertex_count(), ends, graph.basepoint())?;
        let link = |from: usize, to: usize| -> Option<HalfEdge> {
            match (from == to, from == v) {
                (true, _) => None,
                (false, true) => Some(HalfEdge::forward(new_edge)),
                (false, false) => Some(HalfEdge::backward(new_edge)),
            }
        };
        let marking = self
            .marking
            .iter()
            .map(|p| {
                let mut out = Vec::new();
                let mut at = self.hub;
                for &h in p.steps() {
                    out.extend(link(at, tails[h.0]));
                    out.push(h);
                    at = tails[h.reverse().0];
                }
                out.extend(link(at, self.hub));
                EdgePath(out)
            })
            .collect();
        let m = MarkedGraph { graph, hub: self.hub, marking };
        m.check_policy(mode)?;
        Ok(m)
    }

    /// Every single-edge blow-up allowed by the valence policy, in a fixed order.
    pub fn blow_ups(&self, mode: Mode) -> Vec<MarkedGraph> {
        let stars = self.graph.stars();
        let mut out = Vec::new();
        for (v, star) in stars.iter().enumerate() {
            let d = star.len();
            if d > 16 {
                continue;
            }
            for mask in 1u32..(1 << d) - 1 {
                let moved: Vec<HalfEdge> = (0..d).filter(|i| mask & (1 << i) != 0).map(|i| star[i]).collect();
                // In mode K the two sides are interchangeable; keep one of each pair.
                if mode == Mode::K && mask & 1 != 0 {
                    continue;
                }
                if let Ok(m) = self.blow_up(v, &moved, mode) {
                    out.push(m);
                }
            }
        }
        out
    }

    fn to_json(&self) -> (GraphJson, Vec<Vec<i64>>) {
        let marking = self.marking.iter().map(|p| p.steps().iter().map(|h| h.signed_id()).collect()).collect();
        (self.graph.to_json(), marking)
    }
}

/// Reads closed paths as words in the basis of non-tree edges.
pub(crate) struct TreeReader {
    generator: Vec<Option<usize>>,
}

impl TreeReader {
    pub(crate) fn new(graph: &Graph, tree: &[usize]) -> TreeReader {
        let mut generator = vec![None; graph.edge_count()];
        let mut next = 1;
        for (e, g) in generator.iter_mut().enumerate() {
            if !tree.contains(&e) {
                *g = Some(next);
                next += 1;
            }
        }
        TreeReader { generator }
    }

    pub(crate) fn read(&self, p: &EdgePath) -> Word {
        Word::reduce(p.steps().iter().filter_map(|h| self.generator[h.edge()].map(|g| Letter::new(g, !h.is_forward()))))
    }
}

/// A vertex of `K_n` or `L_n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SpineVertex {
    marked: MarkedGraph,
    mode: Mode,
}

impl SpineVertex {
    pub fn new(marked: MarkedGraph, mode: Mode) -> Result<SpineVertex> {
        let v = SpineVertex::from_marked(marked, mode);
        v.marked.check_policy(mode)?;
        Ok(v)
    }

    /// Normalizes the basepoint field to the mode.
    pub(crate) fn from_marked(mut marked: MarkedGraph, mode: Mode) -> SpineVertex {
        let bp = match mode {
            Mode::K => None,
            Mode::L => Some(marked.hub),
        };
        if marked.graph.basepoint() != bp {
            marked.graph = marked.graph.with_basepoint(bp);
        }
        SpineVertex { marked, mode }
    }

    pub fn marked(&self) -> &MarkedGraph {
        &self.marked
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn graph(&self) -> &Graph {
        &self.marked.graph
    }

    pub fn rank(&self) -> usize {
        self.marked.rank()
    }

    pub fn collapse(&self, forest: &Forest) -> Result<SpineVertex> {
        Ok(SpineVertex::from_marked(self.marked.collapse(forest, self.mode)?, self.mode))
    }

    pub fn equivalent(&self, other: &SpineVertex) -> bool {
        self.mode == other.mode && equivalent(&self.marked, &other.marked, self.mode)
    }

    /// Some nonempty forest collapse of one vertex is equivalent to the other.
    pub fn adjacent(&self, other: &SpineVertex) -> bool {
        if self.mode != other.mode || self.rank() != other.rank() {
            return false;
        }
        let (big, small) =
            if self.graph().vertex_count() >= other.graph().vertex_count() { (self, other) } else { (other, self) };
        let drop = big.graph().vertex_count() - small.graph().vertex_count();
        if drop == 0 || big.graph().edge_count() - small.graph().edge_count() != drop {
            return false;
        }
        big.graph()
            .enumerate_forests()
            .into_iter()
            .filter(|f| f.len() == drop)
            .any(|f| big.collapse(&f).is_ok_and(|c| c.equivalent(small)))
    }

    /// The same marked graph read in the other mode, without any valence repair.
    pub fn with_mode(&self, mode: Mode) -> Result<SpineVertex> {
        SpineVertex::new(self.marked.clone(), mode)
    }

    pub fn to_json(&self) -> MarkedGraphJson {
        let (graph, marking) = self.marked.to_json();
        MarkedGraphJson { graph, hub: Some(self.marked.hub as i64), mode: Some(self.mode), marking }
    }

    pub fn from_json(j: &MarkedGraphJson) -> Result<SpineVertex> {
        let (graph, eindex) = Graph::from_json(&j.graph)?;
        let mode = j.mode.unwrap_or(if graph.basepoint().is_some() { Mode::L } else { Mode::K });
        let vindex: HashMap<i64, usize> = j.graph.vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let hub = match (j.hub, graph.basepoint()) {
            (Some(h), _) => *vindex.get(&h).ok_or_else(|| Error::InvalidMarking(format!("unknown hub {h}")))?,
            (None, Some(b)) => b,
            (None, None) => 0,
        };
        if mode == Mode::L && graph.basepoint().is_some_and(|b| b != hub) {
            return Err(Error::InvalidMarking("hub must be the basepoint in mode L".into()));
        }
        let marking = j
            .marking
            .iter()
            .map(|p| {
                p.iter()
                    .map(|&s| {
                        let e =
                            *eindex.get(&s.abs()).ok_or_else(|| Error::InvalidMarking(format!("unknown edge {s}")))?;
                        Ok(HalfEdge::new(e, s > 0))
                    })
                    .collect::<Result<Vec<_>>>()
                    .map(EdgePath)
            })
            .collect::<Result<Vec<_>>>()?;
        SpineVertex::new(MarkedGraph::new(graph, hub, marking)?, mode)
    }
}

/// JSON form: the graph fields plus `hub`, `mode` and the marking as signed edge ids.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarkedGraphJson {
    #[serde(flatten)]
    pub graph: GraphJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hub: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<Mode>,
    pub marking: Vec<Vec<i64>>,
}

/// Equivalence of marked graphs.
///
/// Mode L: a basepoint-preserving isomorphism carrying each marking path to the other
/// literally. Mode K: an isomorphism after which the two markings differ by one common
/// conjugation, i.e. by an inner automorphism.
pub fn equivalent(m1: &MarkedGraph, m2: &MarkedGraph, mode: Mode) -> bool {
    if m1.rank() != m2.rank()
        || m1.graph.vertex_count() != m2.graph.vertex_count()
        || m1.graph.edge_count() != m2.graph.edge_count()
    {
        return false;
    }
    let mut found = false;
    match mode {
        Mode::L => {
            if m1.marking.iter().zip(&m2.marking).any(|(p, q)| p.len() != q.len()) {
                return false;
            }
            let g1 = m1.graph.with_basepoint(Some(m1.hub));
            let g2 = m2.graph.with_basepoint(Some(m2.hub));
            g1.for_each_isomorphism(&g2, true, |iso| {
                found = m1.marking.iter().zip(&m2.marking).all(|(p, q)| iso.map_path(p) == *q);
                !found
            });
        }
        Mode::K => {
            let g1 = m1.graph.with_basepoint(None);
            let g2 = m2.graph.with_basepoint(None);
            let tree = m2.default_tree();
            let reader = TreeReader::new(&g2, &tree);
            let to_vertex = g2.tree_paths(&tree, m2.hub).expect("spanning tree");
            let target: Vec<Word> = m2.marking.iter().map(|p| reader.read(p)).collect();
            g1.for_each_isomorphism(&g2, false, |iso: &Isomorphism| {
                let q = &to_vertex[iso.vertex_map[m1.hub]];
                let moved: Vec<Word> =
                    m1.marking.iter().map(|p| reader.read(&q.concat(&iso.map_path(p)).concat(&q.inverse()))).collect();
                found = simultaneous_conjugator(&moved, &target).is_some();
                !found
            });
        }
    }
    found
}

fn petal_path(w: &Word) -> EdgePath {
    EdgePath(w.letters().iter().map(|l| HalfEdge::new(l.generator() - 1, !l.is_inverse())).collect())
}

/// The rose whose `k`-th marking path spells `f(a_k)` in the petals.
pub fn rose_vertex(f: &Endomorphism, mode: Mode) -> Result<SpineVertex> {
    if !is_automorphism(f) {
        return Err(Error::NotAutomorphism);
    }
    Ok(rose_unchecked(f, mode))
}

pub(crate) fn rose_unchecked(f: &Endomorphism, mode: Mode) -> SpineVertex {
    let marked =
        MarkedGraph { graph: Graph::rose(f.rank()), hub: 0, marking: f.images().iter().map(petal_path).collect() };
    SpineVertex::from_marked(marked, mode)
}

/// Edge indices `[e0, e1, e2]` of the three parallel edges of a rank-`n` Nielsen graph.
pub fn nielsen_theta_edges(n: usize) -> [usize; 3] {
    [n - 2, n - 1, n]
}

/// Marking paths of the identity-prefix Nielsen graph for `t`, indexed by generator.
fn nielsen_base_paths(t: Transvection, n: usize) -> Vec<EdgePath> {
    let [e0, e1, e2] = nielsen_theta_edges(n);
    let (f, b) = (HalfEdge::forward, HalfEdge::backward);
    let (s_path, t_path) = match (t.side, t.exponent > 0) {
        (Side::Right, true) => ([f(e1), b(e0)], [f(e2), b(e0)]),
        (Side::Right, false) => ([f(e0), b(e1)], [f(e2), b(e0)]),
        (Side::Left, true) => ([f(e0), b(e1)], [f(e0), b(e2)]),
        (Side::Left, false) => ([f(e1), b(e0)], [f(e0), b(e2)]),
    };
    let mut petal = 0;
    (1..=n)
        .map(|k| {
            if k == t.multiplier {
                EdgePath(s_path.to_vec())
            } else if k == t.target {
                EdgePath(t_path.to_vec())
            } else {
                petal += 1;
                EdgePath(vec![f(petal - 1)])
            }
        })
        .collect()
}

/// The Nielsen graph between `rose(prefix)` and `rose(t ∘ prefix)`: `n - 2` loops at the
/// basepoint and three parallel edges to a trivalent vertex. Collapsing `e0` gives
/// `rose(prefix)`, collapsing `e1` gives `rose(t ∘ prefix)`.
pub fn nielsen_graph(prefix: &Endomorphism, t: Transvection, n: usize) -> Result<SpineVertex> {
    if t.max_index() > n || n < 2 {
        return Err(Error::GeneratorOutOfRange { index: t.max_index(), rank: n });
    }
    if prefix.rank() != n {
        return Err(Error::RankMismatch { expected: n, found: prefix.rank() });
    }
    Ok(nielsen_unchecked(prefix, t, n))
}

fn nielsen_unchecked(prefix: &Endomorphism, t: Transvection, n: usize) -> SpineVertex {
    let mut ends = vec![(0, 0); n - 2];
    ends.extend([(0, 1); 3]);
    let graph = Graph::new(2, ends, Some(0)).expect("valid shape");
    let base = nielsen_base_paths(t, n);
    let marking = prefix
        .images()
        .iter()
        .map(|w| {
            EdgePath::reduce(w.letters().iter().flat_map(|l| {
                let p = &base[l.generator() - 1];
                if l.is_inverse() {
                    p.inverse().0
                } else {
                    p.0.clone()
                }
            }))
        })
        .collect();
    SpineVertex::from_marked(MarkedGraph { graph, hub: 0, marking }, Mode::L)
}

/// A cyclic sequence of spine vertices; consecutive entries (including last → first) should
/// be adjacent.
#[derive(Clone, Debug)]
pub struct SimplicialLoop {
    pub vertices: Vec<SpineVertex>,
}

impl SimplicialLoop {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Index `j` of the first pair `(j, j+1 mod len)` that is not adjacent.
    pub fn first_non_adjacent(&self) -> Option<usize> {
        let n = self.vertices.len();
        (0..n).find(|&j| !self.vertices[j].adjacent(&self.vertices[(j + 1) % n]))
    }

    pub fn to_json(&self) -> Vec<MarkedGraphJson> {
        self.vertices.iter().map(SpineVertex::to_json).collect()
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph loop {\n");
        for (j, v) in self.vertices.iter().enumerate() {
            let kind = if v.graph().vertex_count() == 1 { "rose" } else { "nielsen" };
            s.push_str(&format!("  s{j} [label=\"{kind} {j}\"];\n"));
        }
        let n = self.vertices.len();
        for j in 0..n {
            s.push_str(&format!("  s{j} -- s{};\n", (j + 1) % n));
        }
        s.push_str("}\n");
        s
    }
}

#[derive(Clone, Debug)]
pub enum BuiltLoop {
    Closed(SimplicialLoop),
    /// The product was not the identity; the path ends at the last rose.
    Open(Vec<SpineVertex>),
}

/// The path of roses and Nielsen graphs in `L_n` traced by `τ1 ⋯ τk`, visiting
/// `(τ1 ⋯ τj)·I = rose(τj⁻¹ ∘ ⋯ ∘ τ1⁻¹)`. Two steps per transvection.
pub fn build_loop(ts: &[Transvection], n: usize) -> Result<BuiltLoop> {
    if let Some(t) = ts.iter().find(|t| t.max_index() > n) {
        return Err(Error::GeneratorOutOfRange { index: t.max_index(), rank: n });
    }
    let mut marking = Endomorphism::identity(n);
    let mut vertices = Vec::with_capacity(2 * ts.len() + 1);
    for &t in ts {
        let step = t.inverse();
        vertices.push(rose_unchecked(&marking, Mode::L));
        vertices.push(nielsen_unchecked(&marking, step, n));
        marking = step.endomorphism(n)?.compose(&marking)?;
    }
    if marking.is_identity() {
        Ok(BuiltLoop::Closed(SimplicialLoop { vertices }))
    } else {
        vertices.push(rose_unchecked(&marking, Mode::L));
        Ok(BuiltLoop::Open(vertices))
    }
}
