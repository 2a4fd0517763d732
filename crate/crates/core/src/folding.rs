//! Stallings folding over an arbitrary label alphabet.
//!
//! Labels are either basis letters (subgroup graphs of `F_n`) or half-edges of a fixed
//! target graph (immersions into that graph). Both go through the same [`fold`].

use std::collections::{HashMap, VecDeque};
use std::fmt::Debug;
use std::hash::Hash;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::freegroup::{Endomorphism, Letter, Word};
use crate::graph::{EdgeJson, EdgePath, Graph, GraphJson, HalfEdge, UnionFind};

pub trait Label: Copy + Eq + Hash + Ord + Debug {
    fn inverse(self) -> Self;
    fn describe(self) -> String;
}

impl Label for Letter {
    fn inverse(self) -> Letter {
        Letter::inverse(self)
    }

    fn describe(self) -> String {
        self.to_string()
    }
}

impl Label for HalfEdge {
    fn inverse(self) -> HalfEdge {
        self.reverse()
    }

    fn describe(self) -> String {
        self.signed_id().to_string()
    }
}

/// A graph whose forward half-edges carry labels; `label(reverse(h)) = inverse(label(h))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledGraph<L: Label> {
    pub graph: Graph,
    labels: Vec<L>,
}

impl<L: Label> LabeledGraph<L> {
    pub fn new(graph: Graph, labels: Vec<L>) -> Result<LabeledGraph<L>> {
        if labels.len() != graph.edge_count() {
            return Err(Error::InvalidGraph("one label per edge required".into()));
        }
        Ok(LabeledGraph { graph, labels })
    }

    pub fn label(&self, h: HalfEdge) -> L {
        let l = self.labels[h.edge()];
        if h.is_forward() {
            l
        } else {
            l.inverse()
        }
    }

    pub fn edge_labels(&self) -> &[L] {
        &self.labels
    }

    pub fn read_path(&self, p: &EdgePath) -> Vec<L> {
        p.steps().iter().map(|&h| self.label(h)).collect()
    }

    /// No vertex has two distinct outgoing half-edges with the same label.
    pub fn is_immersion(&self) -> bool {
        self.graph.stars().iter().all(|star| {
            let mut seen: Vec<L> = star.iter().map(|&h| self.label(h)).collect();
            let n = seen.len();
            seen.sort_unstable();
            seen.dedup();
            seen.len() == n
        })
    }

    pub fn to_json(&self) -> GraphJson {
        let mut j = self.graph.to_json();
        for (e, edge) in j.edges.iter_mut().enumerate() {
            edge.label = Some(self.labels[e].describe());
        }
        j
    }
}

impl LabeledGraph<Letter> {
    pub fn from_json(j: &GraphJson) -> Result<LabeledGraph<Letter>> {
        let (graph, _) = Graph::from_json(j)?;
        let labels = j
            .edges
            .iter()
            .map(|e: &EdgeJson| {
                let w: Word = e.label.as_deref().unwrap_or("").parse()?;
                match w.letters() {
                    [l] => Ok(*l),
                    _ => Err(Error::InvalidGraph(format!("edge {} needs a single-letter label", e.id))),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        LabeledGraph::new(graph, labels)
    }
}

/// A bouquet of subdivided loops at vertex 0, one per input word.
#[derive(Clone, Debug)]
pub struct Wedge<L: Label> {
    pub graph: LabeledGraph<L>,
    /// The `k`-th loop as a path in `graph`.
    pub loops: Vec<EdgePath>,
}

pub fn wedge_of_loops<L: Label>(words: &[Vec<L>]) -> Result<Wedge<L>> {
    if words.iter().any(Vec::is_empty) {
        return Err(Error::TrivialWord);
    }
    let mut g = Graph::new(1, Vec::new(), Some(0))?;
    let mut labels = Vec::new();
    let mut loops = Vec::new();
    for word in words {
        let mut path = Vec::new();
        let mut at = 0;
        for (i, &l) in word.iter().enumerate() {
            let next = if i + 1 == word.len() { 0 } else { g.add_vertex() };
            let e = g.add_edge(at, next);
            labels.push(l);
            path.push(HalfEdge::forward(e));
            at = next;
        }
        loops.push(EdgePath(path));
    }
    Ok(Wedge { graph: LabeledGraph::new(g, labels)?, loops })
}

pub fn wedge_of_words(words: &[Word]) -> Result<Wedge<Letter>> {
    let raw: Vec<Vec<Letter>> = words.iter().map(|w| w.letters().to_vec()).collect();
    wedge_of_loops(&raw)
}

/// Output of [`fold`]: the immersed graph plus where every input vertex and half-edge went.
#[derive(Clone, Debug)]
pub struct Folded<L: Label> {
    pub graph: LabeledGraph<L>,
    pub vertex_map: Vec<usize>,
    pub half_edge_map: Vec<HalfEdge>,
}

impl<L: Label> Folded<L> {
    pub fn map_path(&self, p: &EdgePath) -> EdgePath {
        EdgePath::reduce(p.steps().iter().map(|h| self.half_edge_map[h.0]))
    }
}

/// Folds until the immersion condition holds. Output vertices and edges are numbered by
/// the smallest input vertex or edge they contain, and each output edge is oriented like
/// that smallest edge, so the result does not depend on the order of folds.
pub fn fold<L: Label>(g: &LabeledGraph<L>) -> Folded<L> {
    Folder::new(g).run(None::<&mut rand::rngs::ThreadRng>)
}

/// [`fold`] with the pending folds processed in a random order.
pub fn fold_shuffled<L: Label, R: Rng>(g: &LabeledGraph<L>, rng: &mut R) -> Folded<L> {
    Folder::new(g).run(Some(rng))
}

struct Folder<'g, L: Label> {
    g: &'g LabeledGraph<L>,
    vertices: UnionFind,
    /// `(parent, same orientation as parent)`
    edge_parent: Vec<(usize, bool)>,
    outgoing: Vec<HashMap<L, HalfEdge>>,
    pending: VecDeque<(HalfEdge, HalfEdge)>,
}

impl<'g, L: Label> Folder<'g, L> {
    fn new(g: &'g LabeledGraph<L>) -> Folder<'g, L> {
        let n = g.graph.vertex_count();
        let mut f = Folder {
            g,
            vertices: UnionFind::new(n),
            edge_parent: (0..g.graph.edge_count()).map(|e| (e, true)).collect(),
            outgoing: vec![HashMap::new(); n],
            pending: VecDeque::new(),
        };
        for h in g.graph.half_edges() {
            let v = g.graph.tail(h);
            f.insert(v, g.label(h), h);
        }
        f
    }

    fn insert(&mut self, v: usize, label: L, h: HalfEdge) {
        match self.outgoing[v].get(&label) {
            Some(&existing) => self.pending.push_back((existing, h)),
            None => {
                self.outgoing[v].insert(label, h);
            }
        }
    }

    fn find_edge(&mut self, e: usize) -> (usize, bool) {
        let (p, same) = self.edge_parent[e];
        if p == e {
            return (e, true);
        }
        let (root, s2) = self.find_edge(p);
        let out = (root, same == s2);
        self.edge_parent[e] = out;
        out
    }

    fn canonical(&mut self, h: HalfEdge) -> HalfEdge {
        let (root, same) = self.find_edge(h.edge());
        HalfEdge::new(root, h.is_forward() == same)
    }

    fn head(&mut self, h: HalfEdge) -> usize {
        let v = self.g.graph.head(h);
        self.vertices.find(v)
    }

    fn run<R: Rng>(mut self, mut rng: Option<&mut R>) -> Folded<L> {
        loop {
            if let Some(r) = rng.as_deref_mut() {
                self.pending.make_contiguous().shuffle(r);
            }
            let Some((h1, h2)) = self.pending.pop_front() else { break };
            let c1 = self.canonical(h1);
            let c2 = self.canonical(h2);
            if c1 == c2 {
                continue;
            }
            debug_assert_ne!(c1, c2.reverse(), "a label equal to its own inverse");
            let a = self.head(c1);
            let b = self.head(c2);
            self.edge_parent[c2.edge()] = (c1.edge(), c1.is_forward() == c2.is_forward());
            if a != b {
                self.merge_vertices(a, b);
            }
        }
        self.finish()
    }

    fn merge_vertices(&mut self, a: usize, b: usize) {
        let (ka, kb) = (self.outgoing[a].len(), self.outgoing[b].len());
        self.vertices.union(a, b);
        let root = self.vertices.find(a);
        let (keep, absorb) = if ka >= kb { (a, b) } else { (b, a) };
        let moved = std::mem::take(&mut self.outgoing[absorb]);
        let mut kept = std::mem::take(&mut self.outgoing[keep]);
        for (label, h) in moved {
            match kept.get(&label) {
                Some(&existing) => self.pending.push_back((existing, h)),
                None => {
                    kept.insert(label, h);
                }
            }
        }
        self.outgoing[root] = kept;
    }

    fn finish(mut self) -> Folded<L> {
        let graph = &self.g.graph;
        let mut vid: HashMap<usize, usize> = HashMap::new();
        let mut vertex_map = Vec::with_capacity(graph.vertex_count());
        for v in 0..graph.vertex_count() {
            let r = self.vertices.find(v);
            let next = vid.len();
            vertex_map.push(*vid.entry(r).or_insert(next));
        }
        // Representative of each class: its smallest edge.
        let mut rep: HashMap<usize, (usize, bool)> = HashMap::new();
        let mut ends = Vec::new();
        let mut labels = Vec::new();
        let mut half_edge_map = vec![HalfEdge(0); graph.half_edge_count()];
        for e in 0..graph.edge_count() {
            let (root, same) = self.find_edge(e);
            let (id, rep_same) = *rep.entry(root).or_insert_with(|| {
                let (t, h) = graph.edge_ends(e);
                ends.push((vertex_map[t], vertex_map[h]));
                labels.push(self.g.labels[e]);
                (ends.len() - 1, same)
            });
            let aligned = same == rep_same;
            half_edge_map[2 * e] = HalfEdge::new(id, aligned);
            half_edge_map[2 * e + 1] = HalfEdge::new(id, !aligned);
        }
        let basepoint = graph.basepoint().map(|b| vertex_map[b]);
        let out = Graph::new(vid.len(), ends, basepoint).expect("endpoints in range");
        Folded { graph: LabeledGraph { graph: out, labels }, vertex_map, half_edge_map }
    }
}

/// A core graph and the retraction from the graph it was cut out of.
#[derive(Clone, Debug)]
pub struct CoreGraph<L: Label> {
    pub graph: LabeledGraph<L>,
    pub based: bool,
    /// Deleted vertices go to the core vertex their hair retracts onto.
    pub vertex_map: Vec<usize>,
    pub half_edge_map: Vec<Option<HalfEdge>>,
}

impl<L: Label> CoreGraph<L> {
    /// Image of a path under the retraction.
    pub fn map_path(&self, p: &EdgePath) -> EdgePath {
        EdgePath::reduce(p.steps().iter().filter_map(|h| self.half_edge_map[h.0]))
    }
}

/// Repeatedly deletes valence-1 vertices. With `keep_basepoint` the basepoint is never
/// deleted; otherwise the result has no basepoint and no valence-1 vertices.
pub fn core<L: Label>(g: &LabeledGraph<L>, keep_basepoint: bool) -> Result<CoreGraph<L>> {
    let graph = &g.graph;
    let rank = graph.rank()?;
    let protect = if keep_basepoint { graph.basepoint() } else { None };
    if rank == 0 && protect.is_none() {
        return Err(Error::RankZeroCore);
    }
    let n = graph.vertex_count();
    let stars = graph.stars();
    let mut valence = graph.valences();
    let mut removed_edge = vec![false; graph.edge_count()];
    let mut removed_vertex = vec![false; n];
    let mut retract: Vec<usize> = (0..n).collect();
    let mut order = Vec::new();
    let mut queue: VecDeque<usize> = (0..n).filter(|&v| valence[v] == 1 && Some(v) != protect).collect();
    while let Some(x) = queue.pop_front() {
        if removed_vertex[x] || valence[x] != 1 {
            continue;
        }
        let h = *stars[x].iter().find(|h| !removed_edge[h.edge()]).expect("valence 1");
        let y = graph.head(h);
        removed_edge[h.edge()] = true;
        removed_vertex[x] = true;
        valence[x] = 0;
        valence[y] -= 1;
        retract[x] = y;
        order.push(x);
        if valence[y] == 1 && Some(y) != protect {
            queue.push_back(y);
        }
    }
    for &x in order.iter().rev() {
        retract[x] = retract[retract[x]];
    }
    let mut new_id = vec![usize::MAX; n];
    let mut count = 0;
    for v in 0..n {
        if !removed_vertex[v] {
            new_id[v] = count;
            count += 1;
        }
    }
    let vertex_map: Vec<usize> = (0..n).map(|v| new_id[retract[v]]).collect();
    let mut ends = Vec::new();
    let mut labels = Vec::new();
    let mut half_edge_map = vec![None; graph.half_edge_count()];
    for e in 0..graph.edge_count() {
        if removed_edge[e] {
            continue;
        }
        let (a, b) = graph.edge_ends(e);
        let id = ends.len();
        ends.push((new_id[a], new_id[b]));
        labels.push(g.labels[e]);
        half_edge_map[2 * e] = Some(HalfEdge::forward(id));
        half_edge_map[2 * e + 1] = Some(HalfEdge::backward(id));
    }
    let basepoint = protect.map(|b| new_id[b]);
    Ok(CoreGraph {
        graph: LabeledGraph { graph: Graph::new(count, ends, basepoint)?, labels },
        based: keep_basepoint,
        vertex_map,
        half_edge_map,
    })
}

/// True iff the images generate `F_n`: the folded wedge of the images, cored at the
/// basepoint, must be the rose with each basis letter on exactly one petal.
pub fn is_automorphism(f: &Endomorphism) -> bool {
    let n = f.rank();
    if n == 0 || f.images().iter().any(Word::is_empty) {
        return false;
    }
    let Ok(wedge) = wedge_of_words(f.images()) else { return false };
    let folded = fold(&wedge.graph);
    let Ok(c) = core(&folded.graph, true) else { return false };
    let g = &c.graph.graph;
    if g.vertex_count() != 1 || g.edge_count() != n {
        return false;
    }
    let mut gens: Vec<usize> = c.graph.edge_labels().iter().map(|l| l.generator()).collect();
    gens.sort_unstable();
    gens == (1..=n).collect::<Vec<_>>()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freegroup::{t_map, Transvection};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn words(ws: &[&str]) -> Vec<Word> {
        ws.iter().map(|s| s.parse().unwrap()).collect()
    }

    #[test]
    fn wedge_shapes() {
        let w = wedge_of_words(&words(&["a1"])).unwrap();
        assert_eq!((w.graph.graph.vertex_count(), w.graph.graph.edge_count()), (1, 1));
        let w = wedge_of_words(&words(&["a1a2"])).unwrap();
        assert_eq!((w.graph.graph.vertex_count(), w.graph.graph.edge_count()), (2, 2));
        let w = wedge_of_words(&words(&["a1a2", "a2"])).unwrap();
        assert_eq!(w.graph.graph.edge_count(), 3);
        assert_eq!(w.loops.len(), 2);
        assert!(matches!(wedge_of_words(&words(&["a1", ""])), Err(Error::TrivialWord)));
    }

    #[test]
    fn fold_two_equal_loops() {
        let w = wedge_of_words(&words(&["a1", "a1"])).unwrap();
        let f = fold(&w.graph);
        assert_eq!(f.graph.graph.vertex_count(), 1);
        assert_eq!(f.graph.graph.edge_count(), 1);
        assert_eq!(f.graph.edge_labels(), &[Letter::gen(1)]);
    }

    #[test]
    fn fold_a1a2_and_a2_gives_rose() {
        let w = wedge_of_words(&words(&["a1a2", "a2"])).unwrap();
        let f = fold(&w.graph);
        let g = &f.graph.graph;
        assert_eq!((g.vertex_count(), g.edge_count()), (1, 2));
        assert!(f.graph.is_immersion());
        let mut labels = f.graph.edge_labels().to_vec();
        labels.sort();
        assert_eq!(labels, vec![Letter::gen(1), Letter::gen(2)]);
    }

    #[test]
    fn fold_leaves_immersions_alone() {
        let w = wedge_of_words(&words(&["a1a2A1", "a2a2"])).unwrap();
        assert!(!w.graph.is_immersion());
        let once = fold(&w.graph);
        let twice = fold(&once.graph);
        assert_eq!(twice.graph, once.graph);
        assert!(twice.half_edge_map.iter().enumerate().all(|(i, h)| h.0 == i));
    }

    #[test]
    fn unbased_core_of_conjugate() {
        let w = wedge_of_words(&words(&["a1a2A1"])).unwrap();
        let f = fold(&w.graph);
        let c = core(&f.graph, false).unwrap();
        let s = c.graph.graph.suppress_valence2(None);
        // A single loop with no valence >= 3 vertex: keep it as a one-vertex circle.
        assert!(matches!(s, Err(Error::CircleWithoutVertex)));
        assert_eq!(c.graph.graph.vertex_count(), 1);
        assert_eq!(c.graph.edge_labels(), &[Letter::gen(2)]);
        // The based core keeps the a1 hair.
        let b = core(&f.graph, true).unwrap();
        assert_eq!(b.graph.graph.edge_count(), 2);
    }

    #[test]
    fn core_removes_hanging_edge() {
        let g = Graph::new(2, vec![(0, 0), (0, 1)], None).unwrap();
        let lg = LabeledGraph::new(g, vec![Letter::gen(1), Letter::gen(2)]).unwrap();
        let c = core(&lg, false).unwrap();
        assert_eq!(c.graph.graph.edge_count(), 1);
        assert_eq!(c.vertex_map, vec![0, 0]);
        let again = core(&c.graph, false).unwrap();
        assert_eq!(again.graph, c.graph);
    }

    #[test]
    fn core_of_tree_needs_basepoint() {
        let g = Graph::new(2, vec![(0, 1)], Some(0)).unwrap();
        let lg = LabeledGraph::new(g, vec![Letter::gen(1)]).unwrap();
        assert!(matches!(core(&lg, false), Err(Error::RankZeroCore)));
        let c = core(&lg, true).unwrap();
        assert_eq!(c.graph.graph.vertex_count(), 1);
    }

    #[test]
    fn automorphism_checks() {
        assert!(is_automorphism(&t_map()));
        assert!(is_automorphism(&Endomorphism::identity(3)));
        let square = Endomorphism::parse_images(&["a1a1", "a2", "a3"]).unwrap();
        assert!(!is_automorphism(&square));
        let collapse = Endomorphism::parse_images(&["a1", "a1", "a3"]).unwrap();
        assert!(!is_automorphism(&collapse));
        let r = Transvection::right(1, 2).endomorphism(2).unwrap();
        assert!(is_automorphism(&r));
    }

    #[test]
    fn shuffled_folds_agree_exactly() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let w = wedge_of_words(&words(&["a1a2A1A2", "a1a1a2", "A2a1a2a2", "a2a1"])).unwrap();
        let reference = fold(&w.graph);
        for _ in 0..20 {
            let f = fold_shuffled(&w.graph, &mut rng);
            assert_eq!(f.graph, reference.graph);
            assert_eq!(f.half_edge_map, reference.half_edge_map);
        }
    }

    #[test]
    fn labeled_json_roundtrip() {
        let w = wedge_of_words(&words(&["a1A2"])).unwrap();
        let j = w.graph.to_json();
        assert_eq!(j.edges[1].label.as_deref(), Some("A2"));
        assert_eq!(LabeledGraph::from_json(&j).unwrap(), w.graph);
    }
}
