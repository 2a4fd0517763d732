//! Filling areas of loops in finite simplicial 2-complexes: an exhaustive exact oracle,
//! a move-based upper bound, pushforward of fillings along simplicial maps, and an
//! exhaustive check that simplicial maps never increase area.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap, HashMap, VecDeque};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::freegroup::{Letter, Word};

/// Largest triangle budget accepted by [`area_exact`].
pub const AREA_HARD_CAP: usize = 10;
const MAX_VERTICES: usize = 64;

/// A finite simplicial complex of dimension at most two with connected 1-skeleton.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TwoComplex {
    adjacency: Vec<u64>,
    triangles: Vec<[usize; 3]>,
}

fn sorted3(mut t: [usize; 3]) -> [usize; 3] {
    t.sort_unstable();
    t
}

impl TwoComplex {
    /// Vertices are `0..vertex_count`; the edges of every triangle are added automatically.
    pub fn new(vertex_count: usize, triangles: &[[usize; 3]], extra_edges: &[[usize; 2]]) -> Result<TwoComplex> {
        if vertex_count == 0 || vertex_count > MAX_VERTICES {
            return Err(Error::InvalidComplex(format!("vertex count {vertex_count} not in 1..={MAX_VERTICES}")));
        }
        let mut adjacency = vec![0u64; vertex_count];
        let mut link = |a: usize, b: usize| -> Result<()> {
            if a >= vertex_count || b >= vertex_count {
                return Err(Error::InvalidComplex(format!("vertex {} out of range", a.max(b))));
            }
            if a == b {
                return Err(Error::InvalidComplex(format!("repeated vertex {a} in a simplex")));
            }
            adjacency[a] |= 1 << b;
            adjacency[b] |= 1 << a;
            Ok(())
        };
        for &[a, b] in extra_edges {
            link(a, b)?;
        }
        for &[a, b, c] in triangles {
            if a == b || b == c || a == c {
                return Err(Error::InvalidComplex(format!("repeated vertex in triangle {a} {b} {c}")));
            }
            link(a, b)?;
            link(b, c)?;
            link(a, c)?;
        }
        let triangles: BTreeSet<[usize; 3]> = triangles.iter().map(|&t| sorted3(t)).collect();
        let x = TwoComplex { adjacency, triangles: triangles.into_iter().collect() };
        if !x.is_connected() {
            return Err(Error::InvalidComplex("1-skeleton is disconnected".into()));
        }
        Ok(x)
    }

    /// The boundary and interior of one triangle.
    pub fn triangle() -> TwoComplex {
        TwoComplex::new(3, &[[0, 1, 2]], &[]).expect("valid")
    }

    /// A triangle cut into four: corners 0, 1, 2 and edge midpoints 3 (on 01), 4 (on 12)
    /// and 5 (on 20).
    pub fn subdivided_triangle() -> TwoComplex {
        TwoComplex::new(6, &[[0, 3, 5], [3, 1, 4], [5, 4, 2], [3, 4, 5]], &[]).expect("valid")
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn edges(&self) -> Vec<[usize; 2]> {
        let n = self.vertex_count();
        (0..n).flat_map(|a| (a + 1..n).filter(move |&b| self.has_edge(a, b)).map(move |b| [a, b])).collect()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a != b && self.adjacency[a] & (1 << b) != 0
    }

    pub fn neighbours(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        let bits = self.adjacency[v];
        (0..self.vertex_count()).filter(move |&u| bits & (1 << u) != 0)
    }

    /// Whether the distinct vertices among `vs` form a simplex (vertex, edge or triangle).
    pub fn spans_simplex(&self, vs: &[usize]) -> bool {
        let mut d = [0usize; 3];
        let mut k = 0;
        for &v in vs {
            if d[..k].contains(&v) {
                continue;
            }
            if k == 3 {
                return false;
            }
            d[k] = v;
            k += 1;
        }
        match k {
            0 => false,
            1 => true,
            2 => self.has_edge(d[0], d[1]),
            _ => self.has_edge(d[0], d[1]) && self.triangles.binary_search(&sorted3(d)).is_ok(),
        }
    }

    fn is_connected(&self) -> bool {
        let mut seen = 1u64;
        let mut queue = VecDeque::from([0]);
        while let Some(v) = queue.pop_front() {
            let fresh = self.adjacency[v] & !seen;
            seen |= fresh;
            queue.extend((0..self.vertex_count()).filter(|&u| fresh & (1 << u) != 0));
        }
        seen.count_ones() as usize == self.vertex_count()
    }

    /// Tries to show the fundamental group is trivial by Tietze moves on the edge-path
    /// presentation: a relator containing some generator exactly once eliminates it.
    /// `false` means "not certified", not "not simply connected".
    pub fn certify_simply_connected(&self) -> bool {
        let n = self.vertex_count();
        let mut parent_edge = vec![None; n];
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut queue = VecDeque::from([0]);
        while let Some(v) = queue.pop_front() {
            for u in self.neighbours(v) {
                if !seen[u] {
                    seen[u] = true;
                    parent_edge[u] = Some(v);
                    queue.push_back(u);
                }
            }
        }
        let mut generator = HashMap::new();
        for [a, b] in self.edges() {
            if parent_edge[b] != Some(a) && parent_edge[a] != Some(b) {
                let g = generator.len() + 1;
                generator.insert((a, b), g);
            }
        }
        let step = |a: usize, b: usize| -> Option<Letter> {
            let (lo, hi) = (a.min(b), a.max(b));
            generator.get(&(lo, hi)).map(|&g| Letter::new(g, a > b))
        };
        let mut relators: Vec<Word> = self
            .triangles
            .iter()
            .map(|&[a, b, c]| Word::reduce([step(a, b), step(b, c), step(c, a)].into_iter().flatten()))
            .collect();
        let mut alive: BTreeSet<usize> = generator.values().copied().collect();
        while !alive.is_empty() {
            relators = relators.iter().map(|r| r.cyclic_reduction().1).filter(|r| !r.is_empty()).collect();
            let found = relators.iter().enumerate().find_map(|(i, r)| {
                alive.iter().copied().find_map(|g| {
                    let at: Vec<usize> =
                        r.letters().iter().enumerate().filter(|(_, l)| l.generator() == g).map(|(p, _)| p).collect();
                    (at.len() == 1).then(|| (i, g, at[0]))
                })
            });
            let Some((i, g, p)) = found else { return false };
            let r = relators.swap_remove(i);
            let (before, after) =
                (Word::reduce(r.letters()[..p].iter().copied()), Word::reduce(r.letters()[p + 1..].iter().copied()));
            // before · g^ε · after = 1
            let value =
                if r.letters()[p].is_inverse() { after.mul(&before) } else { before.inverse().mul(&after.inverse()) };
            relators = relators
                .iter()
                .map(|w| {
                    Word::reduce(w.letters().iter().flat_map(|&l| {
                        if l.generator() != g {
                            vec![l]
                        } else if l.is_inverse() {
                            value.inverse().letters().to_vec()
                        } else {
                            value.letters().to_vec()
                        }
                    }))
                })
                .collect();
            alive.remove(&g);
        }
        true
    }

    /// Vertex permutations preserving edges and triangles (brute force; small complexes).
    pub fn automorphisms(&self) -> Vec<Vec<usize>> {
        let n = self.vertex_count();
        let mut out = Vec::new();
        let mut perm = Vec::with_capacity(n);
        let mut used = vec![false; n];
        fn go(x: &TwoComplex, perm: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
            let v = perm.len();
            if v == x.vertex_count() {
                if x.triangles.iter().all(|t| x.spans_simplex(&t.map(|u| perm[u]))) {
                    out.push(perm.clone());
                }
                return;
            }
            for y in 0..x.vertex_count() {
                if used[y] || x.adjacency[v].count_ones() != x.adjacency[y].count_ones() {
                    continue;
                }
                if (0..v).any(|u| x.has_edge(u, v) != x.has_edge(perm[u], y)) {
                    continue;
                }
                used[y] = true;
                perm.push(y);
                go(x, perm, used, out);
                perm.pop();
                used[y] = false;
            }
        }
        go(self, &mut perm, &mut used, &mut out);
        out
    }

    pub fn to_json(&self) -> TwoComplexJson {
        let covered: BTreeSet<[usize; 2]> =
            self.triangles.iter().flat_map(|&[a, b, c]| [[a, b], [a, c], [b, c]]).collect();
        TwoComplexJson {
            vertices: (0..self.vertex_count() as i64).collect(),
            triangles: self.triangles.iter().map(|t| t.map(|v| v as i64)).collect(),
            extra_edges: self
                .edges()
                .into_iter()
                .filter(|e| !covered.contains(e))
                .map(|e| e.map(|v| v as i64))
                .collect(),
        }
    }

    /// Parses the JSON form; vertex ids are renumbered in the order listed.
    pub fn from_json(j: &TwoComplexJson) -> Result<TwoComplex> {
        let index: HashMap<i64, usize> = j.vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        if index.len() != j.vertices.len() {
            return Err(Error::InvalidComplex("duplicate vertex id".into()));
        }
        let look = |v: i64| index.get(&v).copied().ok_or_else(|| Error::InvalidComplex(format!("unknown vertex {v}")));
        let triangles =
            j.triangles.iter().map(|t| Ok([look(t[0])?, look(t[1])?, look(t[2])?])).collect::<Result<Vec<_>>>()?;
        let extra = j.extra_edges.iter().map(|e| Ok([look(e[0])?, look(e[1])?])).collect::<Result<Vec<_>>>()?;
        TwoComplex::new(j.vertices.len(), &triangles, &extra)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoComplexJson {
    pub vertices: Vec<i64>,
    pub triangles: Vec<[i64; 3]>,
    #[serde(default)]
    pub extra_edges: Vec<[i64; 2]>,
}

/// A closed edge path, read cyclically: consecutive vertices are equal or adjacent.
/// Stationary steps are allowed (images of loops under simplicial maps have them) and do
/// not affect the area, which is that of the loop with them removed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ComplexLoop {
    vertices: Vec<usize>,
}

impl ComplexLoop {
    pub fn new(x: &TwoComplex, vertices: Vec<usize>) -> Result<ComplexLoop> {
        let l = ComplexLoop { vertices };
        l.check(x)?;
        Ok(l)
    }

    fn check(&self, x: &TwoComplex) -> Result<()> {
        let v = &self.vertices;
        if v.is_empty() {
            return Err(Error::InvalidLoop("empty".into()));
        }
        if let Some(&bad) = v.iter().find(|&&u| u >= x.vertex_count()) {
            return Err(Error::InvalidLoop(format!("vertex {bad} out of range")));
        }
        if self.is_constant() {
            return Ok(());
        }
        for i in 0..v.len() {
            let (a, b) = (v[i], v[(i + 1) % v.len()]);
            if a != b && !x.has_edge(a, b) {
                return Err(Error::InvalidLoop(format!("no edge {a}-{b}")));
            }
        }
        Ok(())
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// The loop with stationary steps removed.
    pub fn normalized(&self) -> ComplexLoop {
        let v = &self.vertices;
        let n = v.len();
        let kept: Vec<usize> = (0..n).filter(|&i| v[i] != v[(i + 1) % n]).map(|i| v[i]).collect();
        if kept.is_empty() {
            ComplexLoop { vertices: vec![v[0]] }
        } else {
            ComplexLoop { vertices: kept }
        }
    }

    /// The boundary word of the discs that fill this loop: the normalized loop, with a
    /// backtrack `u v` padded to `u v v` since a disc boundary has at least three
    /// vertices. `None` for constant loops, which need no disc.
    pub fn disc_boundary(&self) -> Option<ComplexLoop> {
        let mut n = self.normalized();
        match n.vertices.len() {
            1 => None,
            2 => {
                n.vertices.push(n.vertices[1]);
                Some(n)
            }
            _ => Some(n),
        }
    }

    pub fn is_constant(&self) -> bool {
        self.vertices.iter().all(|&v| v == self.vertices[0])
    }

    /// Number of steps that move along an edge.
    pub fn edge_length(&self) -> usize {
        let v = &self.vertices;
        (0..v.len()).filter(|&i| v[i] != v[(i + 1) % v.len()]).count()
    }

    /// The least rotation or reversal, which has the same area.
    pub fn canonical(&self) -> ComplexLoop {
        let n = self.vertices.len();
        let mut best = self.vertices.clone();
        let mut rev = self.vertices.clone();
        rev.reverse();
        for base in [&self.vertices, &rev] {
            for r in 0..n {
                let cand: Vec<usize> = (0..n).map(|i| base[(r + i) % n]).collect();
                if cand < best {
                    best = cand;
                }
            }
        }
        ComplexLoop { vertices: best }
    }
}

/// A triangulated disc with a simplicial map to a complex. The disc's boundary circle is
/// `boundary` in order; its image is the filled loop.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscFilling {
    pub boundary: Vec<usize>,
    pub triangles: Vec<[usize; 3]>,
    pub map: Vec<usize>,
}

impl DiscFilling {
    pub fn area(&self) -> usize {
        self.triangles.len()
    }

    pub fn boundary_image(&self) -> Vec<usize> {
        self.boundary.iter().map(|&v| self.map[v]).collect()
    }

    /// Checks that the domain is a triangulated disc with the stated boundary, that the map
    /// is simplicial into `x`, and that it restricts to `l` on the boundary.
    pub fn validate(&self, x: &TwoComplex, l: &ComplexLoop) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidComplex(format!("filling: {m}")));
        let n = self.map.len();
        if self.triangles.is_empty() {
            return bad("no triangles");
        }
        let mut tri_set = BTreeSet::new();
        for &t in &self.triangles {
            let s = sorted3(t);
            if s[2] >= n || s[0] == s[1] || s[1] == s[2] || !tri_set.insert(s) {
                return bad("degenerate, out-of-range or repeated triangle");
            }
        }
        let mut edge_count: BTreeMap<[usize; 2], usize> = BTreeMap::new();
        for &[a, b, c] in &tri_set {
            for e in [[a, b], [a, c], [b, c]] {
                *edge_count.entry(e).or_default() += 1;
            }
        }
        if edge_count.values().any(|&c| c > 2) {
            return bad("edge in more than two triangles");
        }
        let k = self.boundary.len();
        let distinct: BTreeSet<usize> = self.boundary.iter().copied().collect();
        if k < 3 || distinct.len() != k {
            return bad("boundary is not a simple cycle");
        }
        let boundary_edges: BTreeSet<[usize; 2]> = (0..k)
            .map(|i| {
                let (a, b) = (self.boundary[i], self.boundary[(i + 1) % k]);
                [a.min(b), a.max(b)]
            })
            .collect();
        let free: BTreeSet<[usize; 2]> = edge_count.iter().filter(|(_, &c)| c == 1).map(|(e, _)| *e).collect();
        if free != boundary_edges {
            return bad("free edges differ from the boundary cycle");
        }
        let used: BTreeSet<usize> = tri_set.iter().flatten().copied().collect();
        if used.len() != n {
            return bad("isolated domain vertex");
        }
        let euler = n as i64 - edge_count.len() as i64 + tri_set.len() as i64;
        if euler != 1 {
            return bad("Euler characteristic is not 1");
        }
        for v in 0..n {
            let link: Vec<[usize; 2]> = tri_set
                .iter()
                .filter(|t| t.contains(&v))
                .map(|t| {
                    let o: Vec<usize> = t.iter().copied().filter(|&u| u != v).collect();
                    [o[0], o[1]]
                })
                .collect();
            let mut degree: BTreeMap<usize, usize> = BTreeMap::new();
            for [a, b] in &link {
                *degree.entry(*a).or_default() += 1;
                *degree.entry(*b).or_default() += 1;
            }
            let ends = degree.values().filter(|&&d| d == 1).count();
            let on_boundary = distinct.contains(&v);
            // A connected link with all degrees ≤ 2 is a path or a cycle; it has
            // |nodes| - 1 edges iff it is a path.
            let path_shaped = link.len() + 1 == degree.len();
            let connected = {
                let nodes: Vec<usize> = degree.keys().copied().collect();
                let mut reach = BTreeSet::from([nodes[0]]);
                let mut changed = true;
                while changed {
                    changed = false;
                    for [a, b] in &link {
                        if reach.contains(a) != reach.contains(b) {
                            reach.insert(*a);
                            reach.insert(*b);
                            changed = true;
                        }
                    }
                }
                reach.len() == nodes.len()
            };
            let ok = connected
                && degree.values().all(|&d| d <= 2)
                && if on_boundary { path_shaped && ends == 2 } else { !path_shaped && ends == 0 };
            if !ok {
                return bad(&format!("vertex {v} does not have a disc neighbourhood"));
            }
        }
        if self.map.iter().any(|&y| y >= x.vertex_count()) {
            return bad("image vertex out of range");
        }
        for &[a, b, c] in &tri_set {
            if !x.spans_simplex(&[self.map[a], self.map[b], self.map[c]]) {
                return bad("a triangle's image is not a simplex");
            }
        }
        if self.boundary_image() != l.vertices {
            return bad("boundary image differs from the loop");
        }
        Ok(())
    }
}

/// Depth-first search over triangulated discs. A disc with boundary cycle `c0 c1 … c(L-1)`
/// has exactly one triangle on `c0 c1`; its third vertex is either a new interior vertex
/// or some `cj`, which splits the rest into two smaller discs.
struct ExactSearch<'a> {
    x: &'a TwoComplex,
    images: Vec<usize>,
    adjacency: Vec<u64>,
    triangles: Vec<[usize; 3]>,
    pending: Vec<Vec<usize>>,
    fresh_left: usize,
}

impl ExactSearch<'_> {
    fn linked(&self, a: usize, b: usize) -> bool {
        self.adjacency[a] & (1 << b) != 0
    }

    fn set_link(&mut self, a: usize, b: usize, on: bool) {
        if on {
            self.adjacency[a] |= 1 << b;
            self.adjacency[b] |= 1 << a;
        } else {
            self.adjacency[a] &= !(1 << b);
            self.adjacency[b] &= !(1 << a);
        }
    }

    /// On failure the pending stack is left as it was found.
    fn run(&mut self) -> bool {
        let Some(cycle) = self.pending.pop() else { return true };
        let l = cycle.len();
        let (c0, c1) = (cycle[0], cycle[1]);
        let (f0, f1) = (self.images[c0], self.images[c1]);
        for j in 2..l {
            let v = cycle[j];
            if !self.x.spans_simplex(&[f0, f1, self.images[v]]) {
                continue;
            }
            let chord1 = j != 2;
            let chord0 = j != l - 1;
            if (chord1 && self.linked(c1, v)) || (chord0 && self.linked(c0, v)) {
                continue;
            }
            if chord1 {
                self.set_link(c1, v, true);
            }
            if chord0 {
                self.set_link(c0, v, true);
            }
            self.triangles.push([c0, c1, v]);
            let before = self.pending.len();
            if j >= 3 {
                self.pending.push(cycle[1..=j].to_vec());
            }
            if l - j + 1 >= 3 {
                let mut rest = cycle[j..].to_vec();
                rest.push(c0);
                self.pending.push(rest);
            }
            if self.run() {
                return true;
            }
            self.pending.truncate(before);
            self.triangles.pop();
            if chord1 {
                self.set_link(c1, v, false);
            }
            if chord0 {
                self.set_link(c0, v, false);
            }
        }
        if self.fresh_left > 0 {
            for y in 0..self.x.vertex_count() {
                if !self.x.spans_simplex(&[f0, f1, y]) {
                    continue;
                }
                let w = self.images.len();
                self.images.push(y);
                self.adjacency.push(0);
                self.set_link(c0, w, true);
                self.set_link(c1, w, true);
                self.triangles.push([c0, c1, w]);
                let mut next = vec![c0, w];
                next.extend_from_slice(&cycle[1..]);
                self.pending.push(next);
                self.fresh_left -= 1;
                if self.run() {
                    return true;
                }
                self.fresh_left += 1;
                self.pending.pop();
                self.triangles.pop();
                self.set_link(c0, w, false);
                self.set_link(c1, w, false);
                self.adjacency.pop();
                self.images.pop();
            }
        }
        self.pending.push(cycle);
        false
    }
}

/// A filling of [`ComplexLoop::disc_boundary`] with the fewest triangles among those with
/// at most `k_max`, found by exhaustive search. Constant loops need no disc and give
/// `None`, as do loops with no filling within the budget.
pub fn minimal_filling(x: &TwoComplex, l: &ComplexLoop, k_max: usize) -> Result<Option<DiscFilling>> {
    if k_max > AREA_HARD_CAP {
        return Err(Error::BudgetTooLarge { budget: k_max, cap: AREA_HARD_CAP });
    }
    l.check(x)?;
    let Some(l) = l.disc_boundary() else { return Ok(None) };
    let len = l.len();
    if len - 2 > k_max {
        return Ok(None);
    }
    // Triangles = len - 2 + 2 · (interior vertices), so search by interior vertex count.
    for interior in 0..=(k_max - (len - 2)) / 2 {
        let mut adjacency = vec![0u64; len];
        for i in 0..len {
            let j = (i + 1) % len;
            adjacency[i] |= 1 << j;
            adjacency[j] |= 1 << i;
        }
        let mut s = ExactSearch {
            x,
            images: l.vertices.clone(),
            adjacency,
            triangles: Vec::new(),
            pending: vec![(0..len).collect()],
            fresh_left: interior,
        };
        if s.run() {
            return Ok(Some(DiscFilling { boundary: (0..len).collect(), triangles: s.triangles, map: s.images }));
        }
    }
    Ok(None)
}

/// The least number of triangles in a filling of `l`, if it is at most `k_max`.
/// Constant loops have area 0.
pub fn area_exact(x: &TwoComplex, l: &ComplexLoop, k_max: usize) -> Result<Option<usize>> {
    if l.is_constant() {
        l.check(x)?;
        return Ok(Some(0));
    }
    Ok(minimal_filling(x, l, k_max)?.map(|d| d.area()))
}

#[derive(Clone)]
struct Frontier {
    cycle: Vec<usize>,
    images: Vec<usize>,
    edges: BTreeSet<[usize; 2]>,
    triangles: Vec<[usize; 3]>,
}

fn edge_key(a: usize, b: usize) -> [usize; 2] {
    [a.min(b), a.max(b)]
}

/// Best-first contraction of the loop: each move glues one triangle onto the current
/// frontier, either cutting off a corner `u w v` that spans a simplex or pushing an edge
/// `u v` across a new vertex. The search stops after `step_cap` expansions. Fills
/// [`ComplexLoop::disc_boundary`], like [`minimal_filling`].
pub fn upper_filling(x: &TwoComplex, l: &ComplexLoop, step_cap: usize) -> Result<Option<DiscFilling>> {
    l.check(x)?;
    let Some(l) = l.disc_boundary() else { return Ok(None) };
    let l = &l;
    let len = l.len();
    let max_frontier = len + 2;
    let start = Frontier {
        cycle: (0..len).collect(),
        images: l.vertices.clone(),
        edges: (0..len).map(|i| edge_key(i, (i + 1) % len)).collect(),
        triangles: Vec::new(),
    };
    let mut states = vec![start];
    let mut heap = BinaryHeap::from([Reverse((len - 2, 0usize))]);
    let mut best_seen: HashMap<ComplexLoop, usize> = HashMap::new();
    let mut expansions = 0;
    while let Some(Reverse((_, id))) = heap.pop() {
        if expansions == step_cap {
            break;
        }
        expansions += 1;
        let s = states[id].clone();
        let k = s.cycle.len();
        let img = |i: usize| s.images[s.cycle[i % k]];
        if k == 3 && x.spans_simplex(&[img(0), img(1), img(2)]) {
            let mut triangles = s.triangles.clone();
            triangles.push([s.cycle[0], s.cycle[1], s.cycle[2]]);
            let d = DiscFilling { boundary: (0..len).collect(), triangles, map: s.images.clone() };
            if d.validate(x, l).is_ok() {
                return Ok(Some(d));
            }
            continue;
        }
        let mut push = |next: Frontier, states: &mut Vec<Frontier>| {
            let key = ComplexLoop { vertices: next.cycle.iter().map(|&v| next.images[v]).collect() }.canonical();
            let used = next.triangles.len();
            if best_seen.get(&key).is_some_and(|&b| b <= used) {
                return;
            }
            best_seen.insert(key, used);
            let priority = used + next.cycle.len() - 2;
            heap.push(Reverse((priority, states.len())));
            states.push(next);
        };
        for i in 0..k {
            let (u, w, v) = (s.cycle[i], s.cycle[(i + 1) % k], s.cycle[(i + 2) % k]);
            if k >= 4 && x.spans_simplex(&[s.images[u], s.images[w], s.images[v]]) && !s.edges.contains(&edge_key(u, v))
            {
                let mut next = s.clone();
                next.cycle.remove((i + 1) % k);
                next.edges.insert(edge_key(u, v));
                next.triangles.push([u, w, v]);
                push(next, &mut states);
            }
        }
        if k < max_frontier {
            for i in 0..k {
                let (u, v) = (s.cycle[i], s.cycle[(i + 1) % k]);
                for y in 0..x.vertex_count() {
                    if !x.spans_simplex(&[s.images[u], s.images[v], y]) {
                        continue;
                    }
                    let mut next = s.clone();
                    let w = next.images.len();
                    next.images.push(y);
                    next.cycle.insert(i + 1, w);
                    next.edges.insert(edge_key(u, w));
                    next.edges.insert(edge_key(w, v));
                    next.triangles.push([u, w, v]);
                    push(next, &mut states);
                }
            }
        }
    }
    Ok(None)
}

/// Area of the filling found by [`upper_filling`]; never below the true area.
pub fn area_upper(x: &TwoComplex, l: &ComplexLoop, step_cap: usize) -> Result<Option<usize>> {
    if l.is_constant() {
        l.check(x)?;
        return Ok(Some(0));
    }
    Ok(upper_filling(x, l, step_cap)?.map(|d| d.area()))
}

/// A vertex map sending every simplex onto a simplex, possibly of lower dimension.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SimplicialMap {
    map: Vec<usize>,
}

impl SimplicialMap {
    pub fn new(source: &TwoComplex, target: &TwoComplex, map: Vec<usize>) -> Result<SimplicialMap> {
        if map.len() != source.vertex_count() || map.iter().any(|&y| y >= target.vertex_count()) {
            return Err(Error::InvalidComplex("map has the wrong shape".into()));
        }
        for [a, b] in source.edges() {
            if !target.spans_simplex(&[map[a], map[b]]) {
                return Err(Error::InvalidComplex(format!("edge {a}-{b} is not sent to a simplex")));
            }
        }
        for &[a, b, c] in source.triangles() {
            if !target.spans_simplex(&[map[a], map[b], map[c]]) {
                return Err(Error::InvalidComplex(format!("triangle {a} {b} {c} is not sent to a simplex")));
            }
        }
        Ok(SimplicialMap { map })
    }

    pub fn identity(x: &TwoComplex) -> SimplicialMap {
        SimplicialMap { map: (0..x.vertex_count()).collect() }
    }

    pub fn vertex_map(&self) -> &[usize] {
        &self.map
    }

    pub fn apply_loop(&self, l: &ComplexLoop) -> ComplexLoop {
        ComplexLoop { vertices: l.vertices.iter().map(|&v| self.map[v]).collect() }
    }

    /// Same disc, composed map: a filling of the image loop with the same area.
    pub fn pushforward(&self, d: &DiscFilling) -> DiscFilling {
        DiscFilling {
            boundary: d.boundary.clone(),
            triangles: d.triangles.clone(),
            map: d.map.iter().map(|&v| self.map[v]).collect(),
        }
    }

    /// All simplicial maps `source → target`, in lexicographic order of vertex images.
    pub fn enumerate(source: &TwoComplex, target: &TwoComplex) -> Vec<SimplicialMap> {
        let n = source.vertex_count();
        let earlier: Vec<Vec<usize>> = (0..n).map(|v| source.neighbours(v).filter(|&u| u < v).collect()).collect();
        let closing: Vec<Vec<[usize; 3]>> =
            (0..n).map(|v| source.triangles().iter().copied().filter(|t| t[2] == v).collect()).collect();
        let mut out = Vec::new();
        let mut map = Vec::with_capacity(n);
        fn go(
            v: usize,
            map: &mut Vec<usize>,
            out: &mut Vec<SimplicialMap>,
            target: &TwoComplex,
            earlier: &[Vec<usize>],
            closing: &[Vec<[usize; 3]>],
        ) {
            if v == earlier.len() {
                out.push(SimplicialMap { map: map.clone() });
                return;
            }
            for y in 0..target.vertex_count() {
                map.push(y);
                let ok = earlier[v].iter().all(|&u| target.spans_simplex(&[map[u], y]))
                    && closing[v].iter().all(|t| target.spans_simplex(&[map[t[0]], map[t[1]], y]));
                if ok {
                    go(v + 1, map, out, target, earlier, closing);
                }
                map.pop();
            }
        }
        go(0, &mut map, &mut out, target, &earlier, &closing);
        out
    }
}

/// Closed edge paths of lengths `min..=max` (no stationary steps), one per class under
/// rotation and reversal, in sorted order.
pub fn enumerate_loops(x: &TwoComplex, min: usize, max: usize) -> Vec<ComplexLoop> {
    let mut found = BTreeSet::new();
    let mut path = Vec::new();
    fn go(x: &TwoComplex, path: &mut Vec<usize>, min: usize, max: usize, found: &mut BTreeSet<ComplexLoop>) {
        let len = path.len();
        let last = path[len - 1];
        if len >= min && x.has_edge(last, path[0]) {
            found.insert(ComplexLoop { vertices: path.clone() }.canonical());
        }
        if len == max {
            return;
        }
        for u in x.neighbours(last) {
            // Rotations are covered by starting at the least vertex.
            if u < path[0] {
                continue;
            }
            path.push(u);
            go(x, path, min, max, found);
            path.pop();
        }
    }
    for v in 0..x.vertex_count() {
        path.push(v);
        go(x, &mut path, min.max(2), max, &mut found);
        path.pop();
    }
    found.into_iter().collect()
}

/// Pure 2-complexes (every vertex and edge lies in a triangle) with at most `max_triangles`
/// triangles on at most `max_vertices <= 8` vertices and connected 1-skeleton, one per
/// isomorphism class, ordered by size and then by canonical form.
pub fn enumerate_complexes(max_triangles: usize, max_vertices: usize) -> Vec<TwoComplex> {
    assert!(max_vertices <= 8, "enumeration is limited to 8 vertices");
    let n = max_vertices;
    let mut triangle_list = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                triangle_list.push([a, b, c]);
            }
        }
    }
    let index: HashMap<[usize; 3], usize> = triangle_list.iter().enumerate().map(|(i, &t)| (t, i)).collect();
    let mut perms: Vec<Vec<usize>> = vec![(0..n).collect()];
    // Heap's algorithm is overkill here; lexicographic successor is enough.
    loop {
        let mut p = perms.last().expect("nonempty").clone();
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| p[i] < p[i + 1]) else { break };
        let j = (i + 1..n).rev().find(|&j| p[j] > p[i]).expect("successor exists");
        p.swap(i, j);
        p[i + 1..].reverse();
        perms.push(p);
    }
    let permuted: Vec<Vec<usize>> =
        perms.iter().map(|p| triangle_list.iter().map(|t| index[&sorted3(t.map(|v| p[v]))]).collect()).collect();
    let canonical = |set: &[usize]| -> Vec<usize> {
        permuted
            .iter()
            .map(|image| {
                let mut s: Vec<usize> = set.iter().map(|&t| image[t]).collect();
                s.sort_unstable();
                s
            })
            .min()
            .expect("at least one permutation")
    };
    let connected = |set: &[usize]| -> bool {
        let mut reached = vec![false; set.len()];
        reached[0] = true;
        let mut verts: u64 = triangle_list[set[0]].iter().map(|&v| 1u64 << v).sum();
        let mut changed = true;
        while changed {
            changed = false;
            for (k, &t) in set.iter().enumerate() {
                let bits: u64 = triangle_list[t].iter().map(|&v| 1u64 << v).sum();
                if !reached[k] && bits & verts != 0 {
                    reached[k] = true;
                    verts |= bits;
                    changed = true;
                }
            }
        }
        reached.iter().all(|&r| r)
    };
    let mut out = Vec::new();
    let mut level: BTreeSet<Vec<usize>> =
        if max_triangles == 0 || n < 3 { BTreeSet::new() } else { BTreeSet::from([vec![0]]) };
    for _ in 0..max_triangles {
        let mut next = BTreeSet::new();
        for set in &level {
            let verts: BTreeSet<usize> = set.iter().flat_map(|&t| triangle_list[t]).collect();
            let tris: Vec<[usize; 3]> = set.iter().map(|&t| triangle_list[t]).collect();
            // Relabel the used vertices to 0..k in order.
            let relabel: HashMap<usize, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
            let local: Vec<[usize; 3]> = tris.iter().map(|t| t.map(|v| relabel[&v])).collect();
            out.push(TwoComplex::new(verts.len(), &local, &[]).expect("connected by construction"));
            if set.len() == max_triangles {
                continue;
            }
            for t in 0..triangle_list.len() {
                if set.contains(&t) {
                    continue;
                }
                let mut bigger = set.clone();
                bigger.push(t);
                if connected(&bigger) {
                    next.insert(canonical(&bigger));
                }
            }
        }
        level = next;
    }
    out
}

/// Packs the least rotation or reversal of a short loop (at most 13 vertices, each
/// below 16) into an integer.
fn pack_canonical(v: &[usize]) -> u64 {
    let n = v.len();
    let pack = |rev: bool, r: usize| {
        (0..n).fold(n as u64, |k, i| {
            let j = if rev { (r + n - i) % n } else { (r + i) % n };
            k << 4 | v[j] as u64
        })
    };
    (0..n).flat_map(|r| [pack(false, r), pack(true, r)]).min().unwrap_or(0)
}

const OVER_BUDGET: u8 = u8::MAX - 1;
const NOT_A_LOOP: u8 = u8::MAX;

/// Exact area of every loop of length `3..=max_len` in one complex, stationary steps
/// included, indexed by the vertex sequence read as a base-`|V|` number.
struct AreaTable {
    base: usize,
    by_length: Vec<Vec<u8>>,
    distinct: usize,
    over_budget: usize,
    max_area: usize,
}

impl AreaTable {
    fn new(x: &TwoComplex, max_len: usize, budget: usize) -> AreaTable {
        let base = x.vertex_count();
        let mut cache: HashMap<u64, u8> = HashMap::new();
        let mut by_length = vec![Vec::new(); max_len + 1];
        for (len, table) in by_length.iter_mut().enumerate().skip(3) {
            *table = vec![NOT_A_LOOP; base.pow(len as u32)];
            let mut seq = Vec::with_capacity(len);
            fill_table(x, len, budget, &mut seq, table, &mut cache);
        }
        let over_budget = cache.values().filter(|&&a| a == OVER_BUDGET).count();
        let max_area = cache.values().filter(|&&a| a < OVER_BUDGET).map(|&a| a as usize).max().unwrap_or(0);
        AreaTable { base, by_length, distinct: cache.len(), over_budget, max_area }
    }

    fn get(&self, seq: impl Iterator<Item = usize>, len: usize) -> u8 {
        self.by_length[len][seq.fold(0, |i, v| i * self.base + v)]
    }
}

fn fill_table(
    x: &TwoComplex,
    len: usize,
    budget: usize,
    seq: &mut Vec<usize>,
    table: &mut [u8],
    cache: &mut HashMap<u64, u8>,
) {
    if seq.len() == len {
        let (first, last) = (seq[0], seq[len - 1]);
        if first == last || x.has_edge(first, last) {
            let area = *cache.entry(pack_canonical(seq)).or_insert_with(|| {
                let l = ComplexLoop { vertices: seq.clone() };
                area_exact(x, &l, budget).expect("valid loop").map_or(OVER_BUDGET, |a| a as u8)
            });
            table[seq.iter().fold(0, |i, &v| i * x.vertex_count() + v)] = area;
        }
        return;
    }
    for y in 0..x.vertex_count() {
        if seq.last().is_none_or(|&p| p == y || x.has_edge(p, y)) {
            seq.push(y);
            fill_table(x, len, budget, seq, table, cache);
            seq.pop();
        }
    }
}

/// Backtracking over simplicial maps `source → target`, assigning the vertices of a chosen
/// support first.
struct PartialMaps<'a> {
    target: &'a TwoComplex,
    order: Vec<usize>,
    support_len: usize,
    /// For the `i`-th vertex in `order`: earlier neighbours, and pairs of earlier vertices
    /// completing a triangle with it.
    earlier: Vec<Vec<usize>>,
    closing: Vec<Vec<[usize; 2]>>,
    map: Vec<usize>,
}

impl<'a> PartialMaps<'a> {
    fn new(source: &TwoComplex, target: &'a TwoComplex, support: &[usize]) -> PartialMaps<'a> {
        let n = source.vertex_count();
        let mut order = support.to_vec();
        order.extend((0..n).filter(|v| !support.contains(v)));
        let mut rank = vec![0; n];
        for (i, &v) in order.iter().enumerate() {
            rank[v] = i;
        }
        let earlier = order.iter().map(|&v| source.neighbours(v).filter(|&u| rank[u] < rank[v]).collect()).collect();
        let closing = order
            .iter()
            .map(|&v| {
                source
                    .triangles()
                    .iter()
                    .filter(|t| t.contains(&v) && t.iter().all(|&u| rank[u] <= rank[v]))
                    .map(|t| {
                        let o: Vec<usize> = t.iter().copied().filter(|&u| u != v).collect();
                        [o[0], o[1]]
                    })
                    .collect()
            })
            .collect();
        PartialMaps { target, order, support_len: support.len(), earlier, closing, map: vec![usize::MAX; n] }
    }

    fn fits(&self, i: usize, y: usize) -> bool {
        let x = self.target;
        self.earlier[i].iter().all(|&u| x.spans_simplex(&[self.map[u], y]))
            && self.closing[i].iter().all(|&[u, w]| x.spans_simplex(&[self.map[u], self.map[w], y]))
    }

    /// Visits complete maps from depth `i`; the visitor returns `false` to stop.
    fn walk(&mut self, i: usize, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if i == self.order.len() {
            return visit(&self.map);
        }
        let v = self.order[i];
        for y in 0..self.target.vertex_count() {
            if self.fits(i, y) {
                self.map[v] = y;
                if !self.walk(i + 1, visit) {
                    self.map[v] = usize::MAX;
                    return false;
                }
            }
        }
        self.map[v] = usize::MAX;
        true
    }

    fn count(mut self) -> u64 {
        let mut n = 0;
        self.walk(0, &mut |_| {
            n += 1;
            true
        });
        n
    }

    /// Distinct restrictions to the support (in support order) of simplicial maps.
    fn restrictions(mut self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        self.collect_restrictions(0, &mut out);
        out
    }

    fn collect_restrictions(&mut self, i: usize, out: &mut Vec<Vec<usize>>) {
        if i == self.support_len {
            let mut extends = false;
            self.walk(i, &mut |_| {
                extends = true;
                false
            });
            if extends {
                out.push(self.order[..i].iter().map(|&v| self.map[v]).collect());
            }
            return;
        }
        let v = self.order[i];
        for y in 0..self.target.vertex_count() {
            if self.fits(i, y) {
                self.map[v] = y;
                self.collect_restrictions(i + 1, out);
            }
        }
        self.map[v] = usize::MAX;
    }

    /// Some full simplicial map with the given values on the support.
    fn extension(mut self, values: &[usize]) -> Vec<usize> {
        for (i, &y) in values.iter().enumerate() {
            self.map[self.order[i]] = y;
        }
        let mut found = Vec::new();
        self.walk(values.len(), &mut |m| {
            found = m.to_vec();
            false
        });
        found
    }
}

/// One failure of `Area_A(ℓ) ≥ Area_B(F∘ℓ)`; any instance is a defect. Complexes are
/// indexed into the harness enumeration; a target area of `None` means over budget.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Violation {
    pub source: usize,
    pub target: usize,
    pub map: Vec<usize>,
    pub loop_vertices: Vec<usize>,
    pub source_area: usize,
    pub target_area: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HarnessReport {
    pub budget: usize,
    pub max_triangles: usize,
    pub max_vertices: usize,
    pub max_loop_length: usize,
    /// Enumerated complexes that were certified simply connected.
    pub complexes: usize,
    /// Edge-loops over all complexes, one per rotation/reversal class.
    pub loops: usize,
    pub maps: u64,
    /// (source, target, map, loop) instances covered.
    pub instances: u64,
    /// Instances whose source area is within budget, so that the inequality applies.
    pub compared: u64,
    /// Distinct loops (stationary steps allowed) whose exact area was computed.
    pub areas_computed: usize,
    pub areas_over_budget: usize,
    pub max_area_seen: usize,
    pub length_violations: u64,
    pub violation_count: u64,
    /// The first few violations, sorted.
    pub violations: Vec<Violation>,
    /// Edge-loops with an exact area within budget, each also run through the upper bound.
    pub upper_checked: usize,
    /// Of those, how many the upper-bound search solved within its step cap.
    pub upper_solved: usize,
    pub upper_violations: usize,
}

impl HarnessReport {
    pub fn passed(&self) -> bool {
        self.violation_count == 0 && self.upper_violations == 0 && self.length_violations == 0
    }
}

/// Step cap used for the upper bound inside the harness.
pub const HARNESS_UPPER_STEPS: usize = 5_000;
const REPORTED_VIOLATIONS: usize = 20;

/// Checks `Area_A(ℓ) ≥ Area_B(F∘ℓ)` for every pair of certified simply connected complexes
/// from [`enumerate_complexes`], every simplicial map `F: A → B` and every edge-loop `ℓ`
/// of length `3..=max_loop_length`, whenever `Area_A(ℓ) ≤ budget`. Also checks that `F`
/// never lengthens a loop and that [`area_upper`] never undercuts [`area_exact`].
///
/// Symmetry is used only where it cannot hide a case: `(ℓ, F)` and `(σℓ, F∘σ⁻¹)` have the
/// same image for an automorphism `σ` of `A`, and `F∘ℓ`, `τ∘F∘ℓ` have the same area for an
/// automorphism `τ` of `B`.
pub fn monotonicity_harness(
    budget: usize,
    max_triangles: usize,
    max_vertices: usize,
    max_loop_length: usize,
) -> Result<HarnessReport> {
    if budget > AREA_HARD_CAP {
        return Err(Error::BudgetTooLarge { budget, cap: AREA_HARD_CAP });
    }
    let complexes: Vec<TwoComplex> = enumerate_complexes(max_triangles, max_vertices)
        .into_iter()
        .filter(TwoComplex::certify_simply_connected)
        .collect();
    let tables: Vec<AreaTable> = complexes.par_iter().map(|x| AreaTable::new(x, max_loop_length, budget)).collect();
    let auts: Vec<Vec<Vec<usize>>> = complexes.iter().map(TwoComplex::automorphisms).collect();
    let all_loops: Vec<Vec<ComplexLoop>> = complexes.iter().map(|x| enumerate_loops(x, 3, max_loop_length)).collect();
    let source_area = |a: usize, l: &ComplexLoop| tables[a].get(l.vertices.iter().copied(), l.len());
    let reps: Vec<Vec<&ComplexLoop>> = all_loops
        .iter()
        .zip(&auts)
        .enumerate()
        .map(|(a, (ls, sym))| {
            ls.iter()
                .filter(|l| source_area(a, l) < OVER_BUDGET)
                .filter(|l| {
                    sym.iter().all(|p| {
                        ComplexLoop { vertices: l.vertices.iter().map(|&v| p[v]).collect() }.canonical() >= **l
                    })
                })
                .collect()
        })
        .collect();

    struct Tally {
        maps: u64,
        instances: u64,
        compared: u64,
        length_violations: u64,
        violation_count: u64,
        violations: Vec<Violation>,
    }
    let tallies: Vec<Tally> = (0..complexes.len())
        .into_par_iter()
        .map(|a| {
            let mut t = Tally {
                maps: 0,
                instances: 0,
                compared: 0,
                length_violations: 0,
                violation_count: 0,
                violations: Vec::new(),
            };
            let within = all_loops[a].iter().filter(|l| source_area(a, l) < OVER_BUDGET).count() as u64;
            let mut by_support: BTreeMap<Vec<usize>, Vec<&ComplexLoop>> = BTreeMap::new();
            for l in &reps[a] {
                let support: BTreeSet<usize> = l.vertices.iter().copied().collect();
                by_support.entry(support.into_iter().collect()).or_default().push(l);
            }
            for (b, target) in complexes.iter().enumerate() {
                let count = PartialMaps::new(&complexes[a], target, &[]).count();
                t.maps += count;
                t.instances += count * all_loops[a].len() as u64;
                t.compared += count * within;
                for (support, members) in &by_support {
                    let mut position = vec![usize::MAX; complexes[a].vertex_count()];
                    for (i, &v) in support.iter().enumerate() {
                        position[v] = i;
                    }
                    for g in PartialMaps::new(&complexes[a], target, support).restrictions() {
                        // τ∘g is also a restriction, with images of the same area.
                        let least = auts[b].iter().all(|tau| g.iter().map(|&y| tau[y]).cmp(g.iter().copied()).is_ge());
                        if !least {
                            continue;
                        }
                        for l in members {
                            let len = l.len();
                            let image = |i: usize| g[position[l.vertices[i % len]]];
                            let moved = (0..len).filter(|&i| image(i) != image(i + 1)).count();
                            if moved > l.edge_length() {
                                t.length_violations += 1;
                            }
                            let s = source_area(a, l);
                            let r = tables[b].get((0..len).map(image), len);
                            if r > s {
                                t.violation_count += 1;
                                if t.violations.len() < REPORTED_VIOLATIONS {
                                    t.violations.push(Violation {
                                        source: a,
                                        target: b,
                                        map: PartialMaps::new(&complexes[a], target, support).extension(&g),
                                        loop_vertices: l.vertices.clone(),
                                        source_area: s as usize,
                                        target_area: (r < OVER_BUDGET).then_some(r as usize),
                                    });
                                }
                            }
                        }
                    }
                }
            }
            t
        })
        .collect();

    let instances: Vec<(usize, &ComplexLoop)> = all_loops
        .iter()
        .enumerate()
        .flat_map(|(a, ls)| ls.iter().map(move |l| (a, l)))
        .filter(|(a, l)| source_area(*a, l) < OVER_BUDGET)
        .collect();
    let upper: Vec<(bool, bool)> = instances
        .par_iter()
        .map(|&(a, l)| {
            let exact = source_area(a, l) as usize;
            let up = area_upper(&complexes[a], l, HARNESS_UPPER_STEPS).expect("valid loop");
            (up.is_some(), up.is_some_and(|u| u < exact))
        })
        .collect();

    let mut violations: Vec<Violation> = tallies.iter().flat_map(|t| t.violations.iter().cloned()).collect();
    violations.sort();
    violations.truncate(REPORTED_VIOLATIONS);
    Ok(HarnessReport {
        budget,
        max_triangles,
        max_vertices,
        max_loop_length,
        complexes: complexes.len(),
        loops: all_loops.iter().map(Vec::len).sum(),
        maps: tallies.iter().map(|t| t.maps).sum(),
        instances: tallies.iter().map(|t| t.instances).sum(),
        compared: tallies.iter().map(|t| t.compared).sum(),
        areas_computed: tables.iter().map(|t| t.distinct).sum(),
        areas_over_budget: tables.iter().map(|t| t.over_budget).sum(),
        max_area_seen: tables.iter().map(|t| t.max_area).max().unwrap_or(0),
        length_violations: tallies.iter().map(|t| t.length_violations).sum(),
        violation_count: tallies.iter().map(|t| t.violation_count).sum(),
        violations,
        upper_checked: upper.len(),
        upper_solved: upper.iter().filter(|u| u.0).count(),
        upper_violations: upper.iter().filter(|u| u.1).count(),
    })
}
