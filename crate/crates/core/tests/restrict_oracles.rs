//! Restriction checked against roses whose marking preserves the span of `a1, ..., am`:
//! there the answer is known in closed form, independently of folding.

use rand::Rng;

use autspine::freegroup::{compose_all, Endomorphism, Side, Transvection};
use autspine::natural_maps::{restrict_traced, BasisEmbedding};
use autspine::sampling::rng_from_seed;
use autspine::spine::{rose_vertex, Mode};

/// A random product of transvections each of which maps `F_m` into itself, together with
/// the product of the ones acting inside `F_m` (the others fix `a1, ..., am`).
fn preserving_product<R: Rng>(rng: &mut R, m: usize, n: usize) -> (Endomorphism, Endomorphism) {
    let mut all = Vec::new();
    let mut inner = Vec::new();
    for _ in 0..rng.gen_range(0..=8) {
        let side = if rng.gen() { Side::Left } else { Side::Right };
        let exponent = if rng.gen() { 1 } else { -1 };
        let target = rng.gen_range(1..=n);
        let pool = if target <= m { m } else { n };
        let mut multiplier = rng.gen_range(1..pool);
        if multiplier >= target {
            multiplier += 1;
        }
        let t = Transvection::new(side, target, multiplier, exponent).unwrap();
        all.push(t);
        if target <= m {
            inner.push(t);
        }
    }
    (compose_all(&all, n).unwrap(), compose_all(&inner, m).unwrap())
}

#[test]
fn restriction_of_preserving_roses() {
    let mut rng = rng_from_seed(41);
    for (m, n) in [(2, 3), (2, 4), (3, 4), (2, 5), (4, 5)] {
        let emb = BasisEmbedding::new(m, n).unwrap();
        for _ in 0..40 {
            let (f, inner) = preserving_product(&mut rng, m, n);
            let v = rose_vertex(&f, Mode::K).unwrap();
            let expected = rose_vertex(&inner, Mode::K).unwrap();
            let (r, trace) = restrict_traced(&v, emb).unwrap();
            assert!(r.equivalent(&expected), "f = {f}, inner = {inner}");
            assert_eq!((trace.core_vertices, trace.core_edges), (1, m));
        }
    }
}
