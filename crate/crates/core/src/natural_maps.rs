//! The forgetful map `L_n → K_n`, augmentation `L_m → L_n`, restriction `K_n → K_m`, and the
//! checks that they fit into a commuting square and that restriction is simplicial.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::folding::{core, fold, wedge_of_loops};
use crate::graph::{EdgePath, Graph, HalfEdge};
use crate::spine::{MarkedGraph, Mode, SpineVertex};

/// `F_m` as the span of the first `m` basis elements of `F_n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisEmbedding {
    m: usize,
    n: usize,
}

impl BasisEmbedding {
    pub fn new(m: usize, n: usize) -> Result<BasisEmbedding> {
        if m < 2 || m >= n {
            return Err(Error::InvalidEmbedding { m, n });
        }
        Ok(BasisEmbedding { m, n })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

/// Suppresses every valence-2 vertex. If the hub is one of them, the marking is first
/// conjugated along its edge to the nearest surviving vertex.
fn suppress_rebased(graph: &Graph, hub: usize, marking: &[EdgePath]) -> Result<MarkedGraph> {
    let s = graph.with_basepoint(None).suppress_valence2(None)?;
    let (hub, marking) = match s.vertex_map[hub] {
        Some(h) => (h, marking.to_vec()),
        None => {
            let (e, j) = s
                .provenance
                .iter()
                .enumerate()
                .find_map(|(e, chain)| chain.iter().position(|&h| graph.head(h) == hub).map(|j| (e, j)))
                .expect("erased vertices lie inside a merged edge");
            let q = EdgePath(s.provenance[e][..=j].to_vec());
            let start = graph.tail(s.provenance[e][0]);
            let moved = marking.iter().map(|p| q.concat(p).concat(&q.inverse())).collect();
            (s.vertex_map[start].expect("chains start at kept vertices"), moved)
        }
    };
    let marking = marking.iter().map(|p| s.rewrite_path(p)).collect::<Result<Vec<_>>>()?;
    MarkedGraph::new(s.graph, hub, marking)
}

/// Forgets the basepoint, suppressing it if it had valence 2.
pub fn forget(v: &SpineVertex) -> Result<SpineVertex> {
    if v.mode() != Mode::L {
        return Err(Error::WrongMode("L"));
    }
    let m = v.marked();
    if m.graph().valence(m.hub()) != 2 {
        return SpineVertex::new(m.clone(), Mode::K);
    }
    SpineVertex::new(suppress_rebased(m.graph(), m.hub(), m.marking())?, Mode::K)
}

/// Wedges `n - m` new petals at the basepoint, marked by `a_{m+1}, …, a_n`.
pub fn augment(v: &SpineVertex, emb: BasisEmbedding) -> Result<SpineVertex> {
    if v.mode() != Mode::L {
        return Err(Error::WrongMode("L"));
    }
    if v.rank() != emb.m {
        return Err(Error::RankMismatch { expected: emb.m, found: v.rank() });
    }
    let m = v.marked();
    let mut graph = m.graph().clone();
    let mut marking = m.marking().to_vec();
    for _ in emb.m..emb.n {
        let e = graph.add_edge(m.hub(), m.hub());
        marking.push(EdgePath(vec![HalfEdge::forward(e)]));
    }
    SpineVertex::new(MarkedGraph::new(graph, m.hub(), marking)?, Mode::L)
}

/// The core of the cover of the graph belonging to `⟨a_1, …, a_m⟩`, with valence-2
/// vertices erased. Computed by folding the wedge of the first `m` marking loops.
pub fn restrict(v: &SpineVertex, emb: BasisEmbedding) -> Result<SpineVertex> {
    restrict_traced(v, emb).map(|(r, _)| r)
}

/// Sizes of the intermediate graphs built by [`restrict`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RestrictTrace {
    pub wedge_vertices: usize,
    pub wedge_edges: usize,
    pub folded_vertices: usize,
    pub folded_edges: usize,
    pub core_vertices: usize,
    pub core_edges: usize,
    pub suppressed_vertices: usize,
}

/// [`restrict`] together with a summary of the fold, core and suppression steps.
pub fn restrict_traced(v: &SpineVertex, emb: BasisEmbedding) -> Result<(SpineVertex, RestrictTrace)> {
    if v.mode() != Mode::K {
        return Err(Error::WrongMode("K"));
    }
    if v.rank() != emb.n {
        return Err(Error::RankMismatch { expected: emb.n, found: v.rank() });
    }
    let loops: Vec<Vec<HalfEdge>> = v.marked().marking()[..emb.m].iter().map(|p| p.steps().to_vec()).collect();
    let wedge = wedge_of_loops(&loops)?;
    let folded = fold(&wedge.graph);
    let cored = core(&folded.graph, false)?;
    let hub = cored.vertex_map[folded.vertex_map[0]];
    let marking: Vec<EdgePath> = wedge.loops.iter().map(|p| cored.map_path(&folded.map_path(p))).collect();
    let core_graph = &cored.graph.graph;
    let result = SpineVertex::new(suppress_rebased(core_graph, hub, &marking)?, Mode::K)?;
    let trace = RestrictTrace {
        wedge_vertices: wedge.graph.graph.vertex_count(),
        wedge_edges: wedge.graph.graph.edge_count(),
        folded_vertices: folded.graph.graph.vertex_count(),
        folded_edges: folded.graph.graph.edge_count(),
        core_vertices: core_graph.vertex_count(),
        core_edges: core_graph.edge_count(),
        suppressed_vertices: core_graph.vertex_count() - result.graph().vertex_count(),
    };
    Ok((result, trace))
}

/// Both ways around the square `L_m → L_n → K_n → K_m` and `L_m → K_m` agree.
pub fn check_square(v: &SpineVertex, emb: BasisEmbedding) -> Result<bool> {
    let direct = forget(v)?;
    let around = restrict(&forget(&augment(v, emb)?)?, emb)?;
    Ok(direct.equivalent(&around))
}

/// Restrictions of two adjacent vertices are equal or adjacent.
pub fn check_rho_simplicial(v1: &SpineVertex, v2: &SpineVertex, emb: BasisEmbedding) -> Result<bool> {
    let r1 = restrict(v1, emb)?;
    let r2 = restrict(v2, emb)?;
    Ok(r1.equivalent(&r2) || r1.adjacent(&r2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freegroup::{a_map, t_map, Endomorphism, Transvection};
    use crate::graph::Forest;
    use crate::spine::{nielsen_graph, rose_vertex};

    fn emb(m: usize, n: usize) -> BasisEmbedding {
        BasisEmbedding::new(m, n).unwrap()
    }

    #[test]
    fn embedding_validation() {
        assert!(BasisEmbedding::new(3, 3).is_err());
        assert!(BasisEmbedding::new(1, 3).is_err());
    }

    #[test]
    fn forget_rose_and_nielsen() {
        let i = rose_vertex(&Endomorphism::identity(3), Mode::L).unwrap();
        let f = forget(&i).unwrap();
        assert_eq!(f.mode(), Mode::K);
        assert!(f.equivalent(&rose_vertex(&Endomorphism::identity(3), Mode::K).unwrap()));
        let n = nielsen_graph(&t_map(), Transvection::left(3, 1), 3).unwrap();
        assert_eq!(forget(&n).unwrap().graph().valences(), vec![5, 3]);
        assert!(matches!(forget(&f), Err(Error::WrongMode(_))));
    }

    #[test]
    fn forget_suppresses_valence_two_basepoint() {
        // The basepoint has valence 2: it subdivides a loop at a vertex carrying the other petal.
        let i = rose_vertex(&Endomorphism::identity(2), Mode::L).unwrap();
        let lolli = i.marked().blow_up(0, &[HalfEdge(1), HalfEdge(2), HalfEdge(3)], Mode::L).unwrap();
        let v = SpineVertex::new(lolli, Mode::L).unwrap();
        let f = forget(&v).unwrap();
        assert_eq!(f.graph().vertex_count(), 1);
        assert_eq!(f.rank(), 2);
        assert!(f.equivalent(&rose_vertex(&Endomorphism::identity(2), Mode::K).unwrap()));
    }

    #[test]
    fn augment_examples() {
        let i2 = rose_vertex(&Endomorphism::identity(2), Mode::L).unwrap();
        let i3 = rose_vertex(&Endomorphism::identity(3), Mode::L).unwrap();
        assert!(augment(&i2, emb(2, 3)).unwrap().equivalent(&i3));
        let r = Transvection::right(1, 2);
        let a = augment(&rose_vertex(&r.endomorphism(2).unwrap(), Mode::L).unwrap(), emb(2, 3)).unwrap();
        assert!(a.equivalent(&rose_vertex(&r.endomorphism(3).unwrap(), Mode::L).unwrap()));
        let theta = i2.marked().blow_up(0, &[HalfEdge(0), HalfEdge(2)], Mode::L).unwrap();
        let t3 = augment(&SpineVertex::new(theta, Mode::L).unwrap(), emb(2, 3)).unwrap();
        assert_eq!(t3.rank(), 3);
        assert_eq!(t3.graph().valences(), vec![5, 3]);
    }

    #[test]
    fn augment_commutes_with_collapse() {
        let n = nielsen_graph(&Endomorphism::identity(2), Transvection::left(2, 1), 2).unwrap();
        for e in [0, 1, 2] {
            let f = Forest::new(n.graph(), vec![e]).unwrap();
            let a = augment(&n.collapse(&f).unwrap(), emb(2, 4)).unwrap();
            let big = augment(&n, emb(2, 4)).unwrap();
            let b = big.collapse(&Forest::new(big.graph(), vec![e]).unwrap()).unwrap();
            assert!(a.equivalent(&b));
        }
    }

    #[test]
    fn restrict_identity_roses() {
        for n in 3..=5 {
            for m in 2..n {
                let r = restrict(&rose_vertex(&Endomorphism::identity(n), Mode::K).unwrap(), emb(m, n)).unwrap();
                assert!(r.equivalent(&rose_vertex(&Endomorphism::identity(m), Mode::K).unwrap()));
            }
        }
    }

    #[test]
    fn restrict_examples() {
        let i2 = rose_vertex(&Endomorphism::identity(2), Mode::K).unwrap();
        let ra = restrict(&rose_vertex(&a_map(), Mode::K).unwrap(), emb(2, 3)).unwrap();
        assert!(ra.equivalent(&i2));
        let rt = restrict(&rose_vertex(&t_map(), Mode::K).unwrap(), emb(2, 3)).unwrap();
        let t2 = Endomorphism::parse_images(&["a1a1a2", "a1a2"]).unwrap();
        assert!(rt.equivalent(&rose_vertex(&t2, Mode::K).unwrap()));
        assert_eq!(rt.graph().vertex_count(), 1);
    }

    #[test]
    fn restrict_nielsen_examples() {
        let id = Endomorphism::identity(3);
        let i = rose_vertex(&id, Mode::K).unwrap();
        let na = forget(&nielsen_graph(&id, Transvection::left(3, 1), 3).unwrap()).unwrap();
        let i2 = rose_vertex(&Endomorphism::identity(2), Mode::K).unwrap();
        assert!(restrict(&na, emb(2, 3)).unwrap().equivalent(&i2));
        assert!(check_rho_simplicial(&na, &i, emb(2, 3)).unwrap());
        let nr = forget(&nielsen_graph(&id, Transvection::right(1, 2), 3).unwrap()).unwrap();
        assert!(nr.adjacent(&i));
        assert!(check_rho_simplicial(&nr, &i, emb(2, 3)).unwrap());
        assert!(check_rho_simplicial(&i, &i, emb(2, 3)).unwrap());
    }

    #[test]
    fn square_on_roses() {
        let i2 = rose_vertex(&Endomorphism::identity(2), Mode::L).unwrap();
        assert!(check_square(&i2, emb(2, 3)).unwrap());
        let f = Transvection::right(1, 2)
            .endomorphism(2)
            .unwrap()
            .compose(&Transvection::left(2, 1).inverse().endomorphism(2).unwrap())
            .unwrap();
        let v = rose_vertex(&f, Mode::L).unwrap();
        assert!(check_square(&v, emb(2, 3)).unwrap());
        assert!(check_square(&v, emb(2, 4)).unwrap());
    }

    #[test]
    fn restriction_commutes_with_fixing_automorphisms() {
        // φ fixes a3 and preserves ⟨a1,a2⟩: restrict(rose(φ∘σ)) = rose(φ|∘σ|) when σ does too.
        let phi2 = Transvection::right(1, 2).endomorphism(2).unwrap();
        let sigma2 = Transvection::left(2, 1).endomorphism(2).unwrap();
        let both = phi2.compose(&sigma2).unwrap();
        let r = restrict(&rose_vertex(&both.extend(3), Mode::K).unwrap(), emb(2, 3)).unwrap();
        assert!(r.equivalent(&rose_vertex(&both, Mode::K).unwrap()));
    }
}
