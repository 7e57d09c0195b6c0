//! Surface-group words, the homomorphism `h0` onto `Z`, adic surfaces and
//! Euler-characteristic arithmetic for unbranched covers.
//!
//! `pi_1` of the closed orientable surface of genus `g` is generated by
//! `a1, b1, ..., ag, bg` subject to the single relator
//! `[a1, b1] ... [ag, bg]`. `h0` sends `a1` to `1` and every other generator to
//! `0`; composing it with the adding machine gives the holonomy action whose
//! suspension is the adic surface. Words are kept unreduced since only their
//! `h0` image acts.

use std::fmt;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::odometer::TowerPoint;
use crate::supernatural::BondingSequence;

/// Standard generator `a_i` or `b_i`, indexed from 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    Alpha(u32),
    Beta(u32),
}

impl Generator {
    pub fn index(&self) -> u32 {
        match *self {
            Generator::Alpha(i) | Generator::Beta(i) => i,
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Alpha(i) => write!(f, "a{i}"),
            Generator::Beta(i) => write!(f, "b{i}"),
        }
    }
}

/// A word in the standard generators of a genus-`g` surface group.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SurfaceGroupWord {
    genus: u32,
    letters: Vec<(Generator, i64)>,
}

impl SurfaceGroupWord {
    pub fn new(genus: u32, letters: Vec<(Generator, i64)>) -> Result<Self> {
        if genus < 1 {
            return Err(Error::InvalidGenus(i64::from(genus)));
        }
        for (g, e) in &letters {
            if g.index() < 1 || g.index() > genus {
                return Err(Error::GeneratorOutOfRange { index: g.index(), genus });
            }
            if *e == 0 {
                return Err(Error::MalformedWord(format!("zero exponent on {g}")));
            }
        }
        Ok(SurfaceGroupWord { genus, letters })
    }

    pub fn empty(genus: u32) -> Result<Self> {
        Self::new(genus, Vec::new())
    }

    /// Single letter `g^e`.
    pub fn letter(genus: u32, g: Generator, e: i64) -> Result<Self> {
        Self::new(genus, vec![(g, e)])
    }

    /// The surface relator `[a1, b1] ... [ag, bg]` with `[x, y] = x y x^-1 y^-1`.
    pub fn relator(genus: u32) -> Result<Self> {
        let mut letters = Vec::with_capacity(4 * genus as usize);
        for i in 1..=genus {
            let (a, b) = (Generator::Alpha(i), Generator::Beta(i));
            letters.extend([(a, 1), (b, 1), (a, -1), (b, -1)]);
        }
        Self::new(genus, letters)
    }

    /// Parses words such as `a1^3 b2 a1^-1`. Letters are separated by
    /// whitespace or `*`; the empty string is the identity.
    pub fn parse(genus: u32, text: &str) -> Result<Self> {
        let mut letters = Vec::new();
        for token in text.split(|c: char| c.is_whitespace() || c == '*').filter(|t| !t.is_empty()) {
            let (head, exp) = match token.split_once('^') {
                Some((h, e)) => {
                    let e: i64 = e.parse().map_err(|_| Error::MalformedWord(format!("bad exponent in {token:?}")))?;
                    (h, e)
                }
                None => (token, 1),
            };
            let mut chars = head.chars();
            let kind = chars.next();
            let index: u32 = chars
                .as_str()
                .parse()
                .map_err(|_| Error::MalformedWord(format!("bad generator index in {token:?}")))?;
            let generator = match kind {
                Some('a') => Generator::Alpha(index),
                Some('b') => Generator::Beta(index),
                _ => return Err(Error::MalformedWord(format!("unknown generator in {token:?}"))),
            };
            letters.push((generator, exp));
        }
        Self::new(genus, letters)
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn letters(&self) -> &[(Generator, i64)] {
        &self.letters
    }

    /// `self` followed by `other`.
    pub fn concat(&self, other: &SurfaceGroupWord) -> Result<SurfaceGroupWord> {
        if self.genus != other.genus {
            return Err(Error::GenusMismatch { word: other.genus, surface: self.genus });
        }
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Ok(SurfaceGroupWord { genus: self.genus, letters })
    }
}

impl fmt::Display for SurfaceGroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> =
            self.letters.iter().map(|(g, e)| if *e == 1 { g.to_string() } else { format!("{g}^{e}") }).collect();
        f.write_str(&parts.join(" "))
    }
}

/// Exponent sum of `a1`. Exact for any word that fits in memory.
pub fn h0(w: &SurfaceGroupWord) -> i128 {
    w.letters.iter().filter(|(g, _)| *g == Generator::Alpha(1)).map(|(_, e)| i128::from(*e)).sum()
}

/// Action of a word on the fiber: translation by `h0(w)`.
pub fn holonomy(w: &SurfaceGroupWord, p: &TowerPoint) -> TowerPoint {
    p.translate(&BigInt::from(h0(w)))
}

/// `m`-adic surface over the closed orientable surface of the given genus.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AdicSurface {
    genus: u32,
    seq: BondingSequence,
}

impl AdicSurface {
    pub fn new(genus: u32, seq: BondingSequence) -> Result<Self> {
        if genus < 1 {
            return Err(Error::InvalidGenus(i64::from(genus)));
        }
        Ok(AdicSurface { genus, seq })
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn seq(&self) -> &BondingSequence {
        &self.seq
    }
}

impl fmt::Display for AdicSurface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "genus {} over {}", self.genus, self.seq)
    }
}

/// Points visited by applying each word's holonomy in turn, starting at
/// `start` (which is not itself included).
pub fn suspension_orbit(s: &AdicSurface, words: &[SurfaceGroupWord], start: &TowerPoint) -> Result<Vec<TowerPoint>> {
    if start.tower().seq() != s.seq() {
        return Err(Error::TowerMismatch);
    }
    let mut out = Vec::with_capacity(words.len());
    let mut current = start.clone();
    for w in words {
        if w.genus() != s.genus() {
            return Err(Error::GenusMismatch { word: w.genus(), surface: s.genus() });
        }
        current = holonomy(w, &current);
        out.push(current.clone());
    }
    Ok(out)
}

/// `chi(Sigma_g) = 2 - 2g`.
pub fn euler_characteristic(genus: i64) -> Result<i64> {
    if genus < 1 {
        return Err(Error::InvalidGenus(genus));
    }
    genus.checked_mul(2).and_then(|twice| 2i64.checked_sub(twice)).ok_or(Error::Overflow("euler characteristic"))
}

/// An unbranched `degree`-fold cover of a closed orientable surface.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CoveringDatum {
    pub base_genus: i64,
    pub degree: i64,
    pub cover_genus: i64,
    pub euler_base: i64,
    pub euler_cover: i64,
}

/// Euler characteristic is multiplicative under covers, so the cover of
/// `Sigma_g` of degree `d` has genus `d (g - 1) + 1`.
pub fn cover_of(base_genus: i64, degree: i64) -> Result<CoveringDatum> {
    if degree < 1 {
        return Err(Error::InvalidDegree(degree));
    }
    let euler_base = euler_characteristic(base_genus)?;
    let euler_cover = degree.checked_mul(euler_base).ok_or(Error::Overflow("cover euler characteristic"))?;
    let cover_genus =
        degree.checked_mul(base_genus - 1).and_then(|x| x.checked_add(1)).ok_or(Error::Overflow("cover genus"))?;
    Ok(CoveringDatum { base_genus, degree, cover_genus, euler_base, euler_cover })
}
