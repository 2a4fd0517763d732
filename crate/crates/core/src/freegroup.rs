//! Words in a free group with a fixed ordered basis `a1, ..., an`, endomorphisms
//! given by generator images, and elementary transvections.
//!
//! Conventions used throughout the crate:
//!
//! * `f.compose(&g)` is `f ∘ g`, i.e. `g` is applied first.
//! * A left transvection `λ_ij^e` sends `a_i` to `a_j^e a_i`; a right transvection
//!   `ρ_ij^e` sends `a_i` to `a_i a_j^e`. Every other generator is fixed.
//!
//! With these, `λ21 ∘ ρ12` is the automorphism `a1 ↦ a1 a1 a2, a2 ↦ a1 a2`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A basis letter `a_k` or its inverse. Stored as `+k` / `-k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter(i32);

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Letter {
        assert!(generator >= 1, "generators are 1-based");
        let g = generator as i32;
        Letter(if inverse { -g } else { g })
    }

    pub fn gen(generator: usize) -> Letter {
        Letter::new(generator, false)
    }

    pub fn generator(self) -> usize {
        self.0.unsigned_abs() as usize
    }

    pub fn is_inverse(self) -> bool {
        self.0 < 0
    }

    pub fn inverse(self) -> Letter {
        Letter(-self.0)
    }

    pub fn signed(self) -> i32 {
        self.0
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = if self.is_inverse() { 'A' } else { 'a' };
        write!(f, "{}{}", c, self.generator())
    }
}

/// A freely reduced word. There is no way to build an unreduced `Word`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn identity() -> Word {
        Word(Vec::new())
    }

    /// Free reduction of a raw letter sequence.
    pub fn reduce<I: IntoIterator<Item = Letter>>(letters: I) -> Word {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    pub fn letter(l: Letter) -> Word {
        Word(vec![l])
    }

    pub fn generator(k: usize) -> Word {
        Word(vec![Letter::gen(k)])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max_generator(&self) -> usize {
        self.0.iter().map(|l| l.generator()).max().unwrap_or(0)
    }

    pub fn mul(&self, other: &Word) -> Word {
        Word::reduce(self.0.iter().chain(other.0.iter()).copied())
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    pub fn pow(&self, e: i64) -> Word {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        let mut acc = Word::identity();
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        acc
    }

    /// `self · x · self⁻¹`
    pub fn conjugate(&self, x: &Word) -> Word {
        Word::reduce(self.0.iter().copied().chain(x.0.iter().copied()).chain(self.0.iter().rev().map(|l| l.inverse())))
    }

    /// Splits `self = s · w · s⁻¹` with `w` cyclically reduced. Returns `(s, w)`.
    pub fn cyclic_reduction(&self) -> (Word, Word) {
        let n = self.0.len();
        let mut k = 0;
        while 2 * k + 1 < n && self.0[k] == self.0[n - 1 - k].inverse() {
            k += 1;
        }
        (Word(self.0[..k].to_vec()), Word(self.0[k..n - k].to_vec()))
    }

    /// Shortest `r` with `self = r^p`. The identity is its own root.
    pub fn root(&self) -> Word {
        let n = self.0.len();
        for d in 1..=n {
            if n.is_multiple_of(d) && (d..n).all(|i| self.0[i] == self.0[i - d]) {
                return Word(self.0[..d].to_vec());
            }
        }
        self.clone()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    /// Parses `a1a1a2`, `A3a1`, ... (capital = inverse). The empty string and
    /// `"1"` both denote the identity.
    fn from_str(s: &str) -> Result<Word> {
        let t = s.trim();
        if t.is_empty() || t == "1" {
            return Ok(Word::identity());
        }
        let bytes = t.as_bytes();
        let mut letters = Vec::new();
        let mut pos = 0;
        while pos < bytes.len() {
            let inverse = match bytes[pos] {
                b'a' => false,
                b'A' => true,
                _ => {
                    return Err(Error::WordParse { input: s.to_string(), position: pos });
                }
            };
            let start = pos + 1;
            let mut end = start;
            while end < bytes.len() && bytes[end].is_ascii_digit() {
                end += 1;
            }
            let index: usize = t[start..end]
                .parse()
                .ok()
                .filter(|&k| k >= 1)
                .ok_or(Error::WordParse { input: s.to_string(), position: start })?;
            letters.push(Letter::new(index, inverse));
            pos = end;
        }
        Ok(Word::reduce(letters))
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Word, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// An endomorphism of `F_n` given by the images of `a1, ..., an`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Endomorphism {
    images: Vec<Word>,
}

impl Endomorphism {
    pub fn identity(rank: usize) -> Endomorphism {
        Endomorphism { images: (1..=rank).map(Word::generator).collect() }
    }

    pub fn from_images(images: Vec<Word>) -> Result<Endomorphism> {
        let rank = images.len();
        for w in &images {
            let k = w.max_generator();
            if k > rank {
                return Err(Error::GeneratorOutOfRange { index: k, rank });
            }
        }
        Ok(Endomorphism { images })
    }

    pub fn parse_images(images: &[&str]) -> Result<Endomorphism> {
        Endomorphism::from_images(images.iter().map(|s| s.parse()).collect::<Result<_>>()?)
    }

    pub fn rank(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    /// Image of `a_k` (1-based).
    pub fn image(&self, k: usize) -> &Word {
        &self.images[k - 1]
    }

    pub fn apply(&self, w: &Word) -> Result<Word> {
        let k = w.max_generator();
        if k > self.rank() {
            return Err(Error::RankMismatch { expected: self.rank(), found: k });
        }
        Ok(self.apply_unchecked(w))
    }

    fn apply_unchecked(&self, w: &Word) -> Word {
        let mut out: Vec<Letter> = Vec::new();
        let mut push = |l: Letter| {
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        };
        for l in w.letters() {
            let img = &self.images[l.generator() - 1];
            if l.is_inverse() {
                img.letters().iter().rev().for_each(|x| push(x.inverse()));
            } else {
                img.letters().iter().for_each(|&x| push(x));
            }
        }
        Word(out)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Endomorphism) -> Result<Endomorphism> {
        if self.rank() != other.rank() {
            return Err(Error::RankMismatch { expected: self.rank(), found: other.rank() });
        }
        Ok(Endomorphism { images: other.images.iter().map(|w| self.apply_unchecked(w)).collect() })
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, w)| w.letters() == [Letter::gen(i + 1)])
    }

    /// Extends to rank `n` by fixing the new generators.
    pub fn extend(&self, n: usize) -> Endomorphism {
        assert!(n >= self.rank());
        let mut images = self.images.clone();
        images.extend((self.rank() + 1..=n).map(Word::generator));
        Endomorphism { images }
    }

    /// Returns `c` with `self(a_k) = c a_k c⁻¹` for every `k`, if this is inner.
    pub fn is_inner(&self) -> Option<Word> {
        let basis: Vec<Word> = (1..=self.rank()).map(Word::generator).collect();
        simultaneous_conjugator(&basis, &self.images)
    }
}

impl fmt::Display for Endomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, w) in self.images.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            if w.is_empty() {
                write!(f, "1")?;
            } else {
                write!(f, "{w}")?;
            }
        }
        write!(f, ")")
    }
}

/// Finds `c` with `c · us[k] · c⁻¹ = vs[k]` for all `k`.
///
/// Pivot on the first nontrivial `u`: every solution is a particular one times
/// a power of the root of that `u` (its centralizer), and only boundedly many
/// powers can move a non-commuting second element to the right length.
pub fn simultaneous_conjugator(us: &[Word], vs: &[Word]) -> Option<Word> {
    if us.len() != vs.len() {
        return None;
    }
    let Some(p) = us.iter().position(|u| !u.is_empty()) else {
        return vs.iter().all(Word::is_empty).then(Word::identity);
    };
    let (s, w) = us[p].cyclic_reduction();
    let (t, w2) = vs[p].cyclic_reduction();
    if w.len() != w2.len() {
        return None;
    }
    let n = w.len();
    let letters = w.letters();
    let rot = (0..n).find(|&r| (0..n).all(|i| letters[(i + r) % n] == w2.letters()[i]))?;
    // w = x y with |x| = rot, and x⁻¹ w x = y x = w2.
    let x = Word(letters[..rot].to_vec());
    let c0 = t.mul(&x.inverse()).mul(&s.inverse());

    let root = s.conjugate(&w.root());
    let check = |c: &Word| us.iter().zip(vs).all(|(u, v)| c.conjugate(u) == *v);

    let other = us.iter().zip(vs).find(|(u, _)| u.mul(&us[p]) != us[p].mul(u));
    let Some((u, v)) = other else {
        return check(&c0).then_some(c0);
    };
    let bound = ((u.len() + v.len() + 2 * (s.len() + t.len() + rot)) / w.root().len()) as i64 + 3;
    (0..=bound)
        .flat_map(|m| if m == 0 { vec![0] } else { vec![m, -m] })
        .map(|m| c0.mul(&root.pow(m)))
        .find(|c| check(c))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
}

/// `λ_ij^e` (left) or `ρ_ij^e` (right): `a_target` is multiplied by `a_multiplier^e`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Transvection {
    pub side: Side,
    pub target: usize,
    pub multiplier: usize,
    pub exponent: i8,
}

impl Transvection {
    pub fn new(side: Side, target: usize, multiplier: usize, exponent: i8) -> Result<Transvection> {
        if target == multiplier {
            return Err(Error::DegenerateTransvection(target));
        }
        assert!(exponent == 1 || exponent == -1, "exponent must be ±1");
        assert!(target >= 1 && multiplier >= 1, "generators are 1-based");
        Ok(Transvection { side, target, multiplier, exponent })
    }

    pub fn left(target: usize, multiplier: usize) -> Transvection {
        Transvection::new(Side::Left, target, multiplier, 1).expect("distinct indices")
    }

    pub fn right(target: usize, multiplier: usize) -> Transvection {
        Transvection::new(Side::Right, target, multiplier, 1).expect("distinct indices")
    }

    pub fn inverse(self) -> Transvection {
        Transvection { exponent: -self.exponent, ..self }
    }

    pub fn max_index(self) -> usize {
        self.target.max(self.multiplier)
    }

    fn multiplier_letter(self) -> Letter {
        Letter::new(self.multiplier, self.exponent < 0)
    }

    /// Image of `a_target`.
    pub fn target_image(self) -> Word {
        let m = self.multiplier_letter();
        let t = Letter::gen(self.target);
        match self.side {
            Side::Left => Word(vec![m, t]),
            Side::Right => Word(vec![t, m]),
        }
    }

    pub fn endomorphism(self, rank: usize) -> Result<Endomorphism> {
        if self.max_index() > rank {
            return Err(Error::GeneratorOutOfRange { index: self.max_index(), rank });
        }
        let mut f = Endomorphism::identity(rank);
        f.images[self.target - 1] = self.target_image();
        Ok(f)
    }
}

impl fmt::Display for Transvection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self.side {
            Side::Left => 'L',
            Side::Right => 'R',
        };
        write!(f, "{s}{}{}", self.target, self.multiplier)?;
        if self.exponent < 0 {
            write!(f, "^-1")?;
        }
        Ok(())
    }
}

impl FromStr for Transvection {
    type Err = Error;

    /// `L21`, `R12^-1`, ... (single-digit indices).
    fn from_str(s: &str) -> Result<Transvection> {
        let err = || Error::WordParse { input: s.to_string(), position: 0 };
        let (body, exponent) = match s.strip_suffix("^-1") {
            Some(b) => (b, -1),
            None => (s, 1),
        };
        let mut chars = body.chars();
        let side = match chars.next() {
            Some('L') => Side::Left,
            Some('R') => Side::Right,
            _ => return Err(err()),
        };
        let digits: Vec<usize> =
            chars.map(|c| c.to_digit(10).map(|d| d as usize)).collect::<Option<_>>().ok_or_else(err)?;
        match digits[..] {
            [i, j] if i >= 1 && j >= 1 => Transvection::new(side, i, j, exponent),
            _ => Err(err()),
        }
    }
}

/// `τ1 ∘ τ2 ∘ ... ∘ τk` at the given rank.
pub fn compose_all(ts: &[Transvection], rank: usize) -> Result<Endomorphism> {
    let mut acc = Endomorphism::identity(rank);
    for t in ts {
        acc = acc.compose(&t.endomorphism(rank)?)?;
    }
    Ok(acc)
}

/// `T = λ21 ∘ ρ12` as a transvection sequence.
pub fn t_factors() -> [Transvection; 2] {
    [Transvection::left(2, 1), Transvection::right(1, 2)]
}

/// `T⁻¹ = ρ12⁻¹ ∘ λ21⁻¹`.
pub fn t_inverse_factors() -> [Transvection; 2] {
    [Transvection::right(1, 2).inverse(), Transvection::left(2, 1).inverse()]
}

/// `A = λ31`
pub fn a_factor() -> Transvection {
    Transvection::left(3, 1)
}

/// `B = ρ32`
pub fn b_factor() -> Transvection {
    Transvection::right(3, 2)
}

pub fn t_map() -> Endomorphism {
    compose_all(&t_factors(), 3).expect("rank 3")
}

pub fn a_map() -> Endomorphism {
    a_factor().endomorphism(3).expect("rank 3")
}

pub fn b_map() -> Endomorphism {
    b_factor().endomorphism(3).expect("rank 3")
}

/// Transvection expansion of `w_i = T^i A T^-i B T^i A^-1 T^-i B^-1`.
/// Always `8i + 4` factors long.
pub fn expand_w(i: usize) -> Vec<Transvection> {
    let power = |inverse: bool| -> Vec<Transvection> {
        let block = if inverse { t_inverse_factors() } else { t_factors() };
        std::iter::repeat_n(block, i).flatten().collect()
    };
    let mut out = Vec::with_capacity(8 * i + 4);
    out.extend(power(false));
    out.push(a_factor());
    out.extend(power(true));
    out.push(b_factor());
    out.extend(power(false));
    out.push(a_factor().inverse());
    out.extend(power(true));
    out.push(b_factor().inverse());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn reduce_examples() {
        let a1 = Letter::gen(1);
        let a2 = Letter::gen(2);
        let a3 = Letter::gen(3);
        assert!(Word::reduce([a1, a1.inverse()]).is_empty());
        assert_eq!(Word::reduce([a1, a2, a2.inverse(), a3]), w("a1a3"));
        assert_eq!(Word::reduce([a1, a1, a2]).len(), 3);
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(w("A3a1").to_string(), "A3a1");
        assert_eq!(w("a1A1"), Word::identity());
        assert_eq!(w("a12").letters(), &[Letter::gen(12)]);
        assert!("a0".parse::<Word>().is_err());
        assert!(matches!("a1b2".parse::<Word>(), Err(Error::WordParse { position: 2, .. })));
    }

    #[test]
    fn apply_examples() {
        assert_eq!(t_map().apply(&w("a1")).unwrap(), w("a1a1a2"));
        assert_eq!(a_map().apply(&w("a3")).unwrap(), w("a1a3"));
        let x = w("a1A2a3a3");
        assert_eq!(Endomorphism::identity(3).apply(&x).unwrap(), x);
        assert!(matches!(Endomorphism::identity(2).apply(&w("a3")), Err(Error::RankMismatch { .. })));
    }

    #[test]
    fn t_is_lambda21_after_rho12() {
        let l21 = Transvection::left(2, 1).endomorphism(3).unwrap();
        let r12 = Transvection::right(1, 2).endomorphism(3).unwrap();
        let t = l21.compose(&r12).unwrap();
        assert_eq!(t, Endomorphism::parse_images(&["a1a1a2", "a1a2", "a3"]).unwrap());
    }

    #[test]
    fn a_and_b_commute() {
        let ab = a_map().compose(&b_map()).unwrap();
        let ba = b_map().compose(&a_map()).unwrap();
        assert_eq!(ab, ba);
        assert_eq!(ab, Endomorphism::parse_images(&["a1", "a2", "a1a3a2"]).unwrap());
    }

    #[test]
    fn transvection_images() {
        let a = Transvection::left(3, 1).endomorphism(3).unwrap();
        assert_eq!(a.image(3), &w("a1a3"));
        let b = Transvection::right(3, 2).endomorphism(3).unwrap();
        assert_eq!(b.image(3), &w("a3a2"));
        let r = Transvection::right(1, 2);
        let id = compose_all(&[r.inverse(), r], 2).unwrap();
        assert!(id.is_identity());
        assert_eq!(Transvection::new(Side::Left, 2, 2, 1), Err(Error::DegenerateTransvection(2)));
    }

    #[test]
    fn compose_rank_mismatch() {
        let e = Endomorphism::identity(2).compose(&Endomorphism::identity(3));
        assert!(matches!(e, Err(Error::RankMismatch { .. })));
    }

    #[test]
    fn expand_w_lengths_and_identity() {
        assert_eq!(expand_w(1).len(), 12);
        assert_eq!(expand_w(5).len(), 44);
        for i in 1..=4 {
            assert!(compose_all(&expand_w(i), 3).unwrap().is_identity(), "i = {i}");
        }
    }

    #[test]
    fn inner_detection() {
        let c = w("a1");
        let conj = Endomorphism::from_images((1..=3).map(|k| c.conjugate(&Word::generator(k))).collect()).unwrap();
        assert_eq!(conj.is_inner(), Some(c));
        assert_eq!(Endomorphism::identity(3).is_inner(), Some(Word::identity()));
        assert_eq!(t_map().is_inner(), None);

        let c = w("a2A1a3a3a1");
        let conj = Endomorphism::from_images((1..=3).map(|k| c.conjugate(&Word::generator(k))).collect()).unwrap();
        assert_eq!(conj.is_inner(), Some(c));
    }

    #[test]
    fn conjugator_with_power_in_centralizer() {
        // c = a1^5 a2: the pivot a1 alone cannot see the a1-power.
        let c = w("a1a1a1a1a1a2");
        let us = vec![w("a1"), w("a2"), w("a3")];
        let vs: Vec<Word> = us.iter().map(|u| c.conjugate(u)).collect();
        assert_eq!(simultaneous_conjugator(&us, &vs), Some(c));
        let vs_bad = vec![vs[0].clone(), vs[1].clone(), w("a3")];
        assert_eq!(simultaneous_conjugator(&us, &vs_bad), None);
    }

    #[test]
    fn transvection_parse_roundtrip() {
        for s in ["L21", "R12^-1", "L31", "R32"] {
            assert_eq!(s.parse::<Transvection>().unwrap().to_string(), s);
        }
        assert!("L22".parse::<Transvection>().is_err());
        assert!("X12".parse::<Transvection>().is_err());
    }
}
