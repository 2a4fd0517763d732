//! Seeded random spine vertices: roses marked by short transvection products, optionally
//! blown up a few times.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::freegroup::{Endomorphism, Side, Transvection};
use crate::spine::{rose_vertex, Mode, SpineVertex};

pub const MAX_TRANSVECTIONS: usize = 8;
pub const MAX_BLOW_UPS: usize = 2;

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_transvection<R: Rng>(rng: &mut R, n: usize) -> Transvection {
    let side = if rng.gen() { Side::Left } else { Side::Right };
    let target = rng.gen_range(1..=n);
    let mut multiplier = rng.gen_range(1..n);
    if multiplier >= target {
        multiplier += 1;
    }
    let exponent = if rng.gen() { 1 } else { -1 };
    Transvection::new(side, target, multiplier, exponent).expect("distinct indices")
}

/// A product of at most [`MAX_TRANSVECTIONS`] random transvections of rank `n >= 2`.
pub fn random_automorphism<R: Rng>(rng: &mut R, n: usize) -> Result<Endomorphism> {
    let k = rng.gen_range(0..=MAX_TRANSVECTIONS);
    let mut f = Endomorphism::identity(n);
    for _ in 0..k {
        f = random_transvection(rng, n).endomorphism(n)?.compose(&f)?;
    }
    Ok(f)
}

/// A random rose followed by up to [`MAX_BLOW_UPS`] admissible single-edge blow-ups.
pub fn random_vertex<R: Rng>(rng: &mut R, n: usize, mode: Mode) -> Result<SpineVertex> {
    let f = random_automorphism(rng, n)?;
    let mut v = rose_vertex(&f, mode)?;
    let blow = rng.gen_range(0..=MAX_BLOW_UPS);
    for _ in 0..blow {
        let options = v.marked().blow_ups(mode);
        match options.choose(rng) {
            Some(m) => v = SpineVertex::new(m.clone(), mode)?,
            None => break,
        }
    }
    Ok(v)
}

/// A random vertex together with one of its admissible nonempty forest collapses.
pub fn random_adjacent_pair<R: Rng>(rng: &mut R, n: usize, mode: Mode) -> Result<(SpineVertex, SpineVertex)> {
    loop {
        let v = random_vertex(rng, n, mode)?;
        let collapses: Vec<SpineVertex> = v
            .graph()
            .enumerate_forests()
            .into_iter()
            .filter(|f| !f.is_empty())
            .filter_map(|f| v.collapse(&f).ok())
            .collect();
        if let Some(c) = collapses.choose(rng) {
            return Ok((v, c.clone()));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::folding::is_automorphism;

    #[test]
    fn same_seed_same_samples() {
        let a: Vec<SpineVertex> = {
            let mut r = rng_from_seed(7);
            (0..10).map(|_| random_vertex(&mut r, 3, Mode::K).unwrap()).collect()
        };
        let b: Vec<SpineVertex> = {
            let mut r = rng_from_seed(7);
            (0..10).map(|_| random_vertex(&mut r, 3, Mode::K).unwrap()).collect()
        };
        assert_eq!(a, b);
    }

    #[test]
    fn samples_are_valid() {
        let mut r = rng_from_seed(1);
        for _ in 0..20 {
            let f = random_automorphism(&mut r, 3).unwrap();
            assert!(is_automorphism(&f));
            for mode in [Mode::K, Mode::L] {
                let v = random_vertex(&mut r, 3, mode).unwrap();
                assert!(v.graph().vertex_count() <= 1 + MAX_BLOW_UPS);
                assert!(is_automorphism(&v.marked().induced_automorphism(&v.marked().default_tree()).unwrap()));
            }
        }
    }

    #[test]
    fn adjacent_pairs_are_adjacent() {
        let mut r = rng_from_seed(3);
        for _ in 0..10 {
            let (a, b) = random_adjacent_pair(&mut r, 3, Mode::K).unwrap();
            assert!(a.adjacent(&b));
        }
    }
}
