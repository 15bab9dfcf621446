//! The group `K = <a, b, c, h>`, isomorphic to `Z_n^3 ⋊ Z_3`, where `h`
//! acts on `a`, `b`, `c` by `x^h = x^r` for a root `r` of `r^2 + r + 1 = 0`
//! in `Z_n`.
//!
//! Elements are stored in the normal form `a^x b^y c^z h^t`. Moving `h^t`
//! past `a^x` gives `h^t a^x = a^(rho^t x) h^t` with `rho = r^-1`, so
//!
//! ```text
//! (x1,y1,z1,t1)(x2,y2,z2,t2) = (x1 + rho^t1 x2, y1 + rho^t1 y2, z1 + rho^t1 z2, t1 + t2)
//! ```

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest modulus scanned for roots.
pub const ROOT_SEARCH_CAP: u64 = 1_000_000;
/// Largest group enumerated element by element.
pub const ENUMERATION_CAP: u64 = 10_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("x^2 + x + 1 = 0 has no solution modulo {0}")]
    NoRoot(u64),
    #[error("cannot parse word {word:?}: {reason}")]
    Word { word: String, reason: String },
    #[error("{what} of size {size} exceeds the cap {cap}")]
    SizeCap { what: &'static str, size: u64, cap: u64 },
}

/// All `r` in `0..n` with `r^2 + r + 1 = 0 (mod n)`, ascending.
pub fn find_unit_cube_roots(n: u64) -> Result<Vec<u64>, KError> {
    if n < 2 {
        return Err(KError::InvalidParams(format!("modulus {n} is below 2")));
    }
    if n > ROOT_SEARCH_CAP {
        return Err(KError::SizeCap {
            what: "root search modulus",
            size: n,
            cap: ROOT_SEARCH_CAP,
        });
    }
    Ok((0..n).filter(|&r| (r * r + r + 1) % n == 0).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct KParams {
    n: u64,
    r: u64,
    /// `rho^t` for `t = 0, 1, 2`.
    rho_pow: [u64; 3],
}

#[derive(Serialize, Deserialize)]
struct RawParams {
    n: u64,
    r: u64,
}

impl TryFrom<RawParams> for KParams {
    type Error = KError;
    fn try_from(raw: RawParams) -> Result<Self, KError> {
        KParams::new(raw.n, raw.r)
    }
}

impl From<KParams> for RawParams {
    fn from(p: KParams) -> Self {
        RawParams { n: p.n, r: p.r }
    }
}

/// An element `a^x b^y c^z h^t`; valid only together with its [`KParams`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "[u32; 4]", into = "[u32; 4]")]
pub struct KElement {
    pub x: u32,
    pub y: u32,
    pub z: u32,
    pub t: u32,
}

impl From<[u32; 4]> for KElement {
    fn from(v: [u32; 4]) -> Self {
        KElement {
            x: v[0],
            y: v[1],
            z: v[2],
            t: v[3],
        }
    }
}

impl From<KElement> for [u32; 4] {
    fn from(e: KElement) -> Self {
        [e.x, e.y, e.z, e.t]
    }
}

impl fmt::Display for KElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{},{},{}]", self.x, self.y, self.z, self.t)
    }
}

/// Images of the generators `a`, `b`, `c`, `h` under a candidate map `K -> K`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorImages {
    pub a: KElement,
    pub b: KElement,
    pub c: KElement,
    pub h: KElement,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ImageCheck {
    pub is_endomorphism: bool,
    pub is_automorphism: bool,
    /// Defining relations violated by the images.
    pub failed_relations: Vec<String>,
}

impl KParams {
    pub fn new(n: u64, r: u64) -> Result<Self, KError> {
        if n < 7 || n % 2 == 0 {
            return Err(KError::InvalidParams(format!(
                "modulus must be odd and at least 7, got {n}"
            )));
        }
        if n > ROOT_SEARCH_CAP {
            return Err(KError::SizeCap {
                what: "modulus",
                size: n,
                cap: ROOT_SEARCH_CAP,
            });
        }
        if r >= n || (r * r + r + 1) % n != 0 {
            return Err(KError::InvalidParams(format!(
                "{r} is not a root of x^2 + x + 1 modulo {n}"
            )));
        }
        let rho = r * r % n;
        Ok(KParams {
            n,
            r,
            rho_pow: [1, rho, rho * rho % n],
        })
    }

    /// Uses the smallest root.
    pub fn with_default_root(n: u64) -> Result<Self, KError> {
        let roots = find_unit_cube_roots(n)?;
        let Some(&r) = roots.first() else {
            return Err(KError::NoRoot(n));
        };
        Self::new(n, r)
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn r(&self) -> u64 {
        self.r
    }

    /// `r^-1 = r^2 (mod n)`.
    pub fn rho(&self) -> u64 {
        self.rho_pow[1]
    }

    /// `3 n^3`.
    pub fn order(&self) -> u64 {
        3 * self.n * self.n * self.n
    }

    pub fn identity(&self) -> KElement {
        KElement::default()
    }

    pub fn a(&self) -> KElement {
        KElement { x: 1, ..KElement::default() }
    }

    pub fn b(&self) -> KElement {
        KElement { y: 1, ..KElement::default() }
    }

    pub fn c(&self) -> KElement {
        KElement { z: 1, ..KElement::default() }
    }

    pub fn h(&self) -> KElement {
        KElement { t: 1, ..KElement::default() }
    }

    /// Reduces arbitrary integer exponents into an element.
    pub fn element(&self, x: i64, y: i64, z: i64, t: i64) -> KElement {
        let n = self.n as i64;
        KElement {
            x: x.rem_euclid(n) as u32,
            y: y.rem_euclid(n) as u32,
            z: z.rem_euclid(n) as u32,
            t: t.rem_euclid(3) as u32,
        }
    }

    pub fn is_valid(&self, e: &KElement) -> bool {
        (e.x as u64) < self.n && (e.y as u64) < self.n && (e.z as u64) < self.n && e.t < 3
    }

    pub fn multiply(&self, e1: &KElement, e2: &KElement) -> KElement {
        let n = self.n;
        let s = self.rho_pow[e1.t as usize];
        KElement {
            x: ((e1.x as u64 + s * e2.x as u64) % n) as u32,
            y: ((e1.y as u64 + s * e2.y as u64) % n) as u32,
            z: ((e1.z as u64 + s * e2.z as u64) % n) as u32,
            t: (e1.t + e2.t) % 3,
        }
    }

    pub fn inverse(&self, e: &KElement) -> KElement {
        // (v, t)^-1 = (-rho^-t v, -t) and rho^-t = rho^(3-t)
        let n = self.n;
        let s = self.rho_pow[((3 - e.t) % 3) as usize];
        let neg = |v: u32| ((n - v as u64) % n * s % n) as u32;
        KElement {
            x: neg(e.x),
            y: neg(e.y),
            z: neg(e.z),
            t: (3 - e.t) % 3,
        }
    }

    pub fn pow(&self, e: &KElement, exp: i64) -> KElement {
        let base = if exp < 0 { self.inverse(e) } else { *e };
        let mut k = exp.unsigned_abs();
        let mut result = self.identity();
        let mut sq = base;
        while k > 0 {
            if k & 1 == 1 {
                result = self.multiply(&result, &sq);
            }
            sq = self.multiply(&sq, &sq);
            k >>= 1;
        }
        result
    }

    /// `g^-1 e g`.
    pub fn conjugate(&self, e: &KElement, g: &KElement) -> KElement {
        self.multiply(&self.multiply(&self.inverse(g), e), g)
    }

    /// `e^-1 f^-1 e f`.
    pub fn commutator(&self, e: &KElement, f: &KElement) -> KElement {
        let ef = self.multiply(e, f);
        let fe = self.multiply(f, e);
        self.multiply(&self.inverse(&fe), &ef)
    }

    /// Position in the order `(x, y, z, t)` lexicographic.
    pub fn index_of(&self, e: &KElement) -> usize {
        let n = self.n as usize;
        ((e.x as usize * n + e.y as usize) * n + e.z as usize) * 3 + e.t as usize
    }

    pub fn element_at(&self, index: usize) -> KElement {
        let n = self.n as usize;
        let t = index % 3;
        let rest = index / 3;
        KElement {
            x: (rest / (n * n)) as u32,
            y: (rest / n % n) as u32,
            z: (rest % n) as u32,
            t: t as u32,
        }
    }

    pub fn enumerate_elements(&self) -> Result<Vec<KElement>, KError> {
        let size = self.order();
        if size > ENUMERATION_CAP {
            return Err(KError::SizeCap {
                what: "group",
                size,
                cap: ENUMERATION_CAP,
            });
        }
        Ok((0..size as usize).map(|i| self.element_at(i)).collect())
    }

    /// Order of the subgroup generated by `gens`, by breadth-first closure.
    pub fn generated_order(&self, gens: &[KElement]) -> usize {
        let mut seen = vec![false; self.order() as usize];
        let id = self.identity();
        seen[self.index_of(&id)] = true;
        let mut queue = VecDeque::from([id]);
        let mut count = 1;
        while let Some(e) = queue.pop_front() {
            for g in gens {
                let f = self.multiply(&e, g);
                let i = self.index_of(&f);
                if !seen[i] {
                    seen[i] = true;
                    count += 1;
                    queue.push_back(f);
                }
            }
        }
        count
    }

    /// Image of `e = a^x b^y c^z h^t` under the map given on generators.
    pub fn apply_images(&self, images: &GeneratorImages, e: &KElement) -> KElement {
        let parts = [
            self.pow(&images.a, e.x as i64),
            self.pow(&images.b, e.y as i64),
            self.pow(&images.c, e.z as i64),
            self.pow(&images.h, e.t as i64),
        ];
        parts
            .iter()
            .fold(self.identity(), |acc, p| self.multiply(&acc, p))
    }

    pub fn check_generator_images(&self, images: &GeneratorImages) -> ImageCheck {
        let id = self.identity();
        let n = self.n as i64;
        let r = self.r as i64;
        let named = [("a", images.a), ("b", images.b), ("c", images.c)];
        let mut failed = Vec::new();
        for (name, g) in &named {
            if self.pow(g, n) != id {
                failed.push(format!("{name}^n"));
            }
        }
        if self.pow(&images.h, 3) != id {
            failed.push("h^3".to_string());
        }
        for i in 0..3 {
            for j in i + 1..3 {
                if self.commutator(&named[i].1, &named[j].1) != id {
                    failed.push(format!("[{},{}]", named[i].0, named[j].0));
                }
            }
        }
        for (name, g) in &named {
            if self.conjugate(g, &images.h) != self.pow(g, r) {
                failed.push(format!("{name}^h = {name}^r"));
            }
        }
        let is_endomorphism = failed.is_empty();
        let is_automorphism = is_endomorphism
            && self.generated_order(&[images.a, images.b, images.c, images.h]) as u64 == self.order();
        ImageCheck {
            is_endomorphism,
            is_automorphism,
            failed_relations: failed,
        }
    }

    pub fn identity_images(&self) -> GeneratorImages {
        GeneratorImages {
            a: self.a(),
            b: self.b(),
            c: self.c(),
            h: self.h(),
        }
    }

    /// Evaluates a word such as `h^-1 a b^{-r} c^{r^2}`.
    ///
    /// Letters are `a`, `b`, `c`, `h`, each optionally followed by `^` and
    /// an exponent: a signed integer, `r`, `-r`, `r^2`, `-r^2` (`r2` and
    /// `r²` are accepted for `r^2`), optionally wrapped in braces. Symbolic
    /// exponents are only allowed on `a`, `b`, `c`. Whitespace, `*` and `·`
    /// are ignored; `1` and the empty word denote the identity.
    pub fn parse_word(&self, word: &str) -> Result<KElement, KError> {
        let err = |reason: &str| KError::Word {
            word: word.to_string(),
            reason: reason.to_string(),
        };
        let chars: Vec<char> = word
            .chars()
            .filter(|c| !c.is_whitespace() && *c != '*' && *c != '·')
            .collect();
        if chars == ['1'] {
            return Ok(self.identity());
        }
        let mut result = self.identity();
        let mut i = 0;
        while i < chars.len() {
            let letter = chars[i];
            let gen = match letter {
                'a' => self.a(),
                'b' => self.b(),
                'c' => self.c(),
                'h' => self.h(),
                _ => return Err(err(&format!("unexpected character {letter:?}"))),
            };
            i += 1;
            let mut exp: i64 = 1;
            if i < chars.len() && chars[i] == '^' {
                i += 1;
                let braced = i < chars.len() && chars[i] == '{';
                let end = if braced {
                    let close = chars[i..]
                        .iter()
                        .position(|&c| c == '}')
                        .ok_or_else(|| err("unclosed brace"))?;
                    i += 1;
                    i + close - 1
                } else {
                    let mut j = i;
                    if j < chars.len() && chars[j] == '-' {
                        j += 1;
                    }
                    if j < chars.len() && chars[j] == 'r' {
                        j += 1;
                        if j < chars.len() && (chars[j] == '²' || chars[j] == '2') {
                            j += 1;
                        } else if j + 1 < chars.len() && chars[j] == '^' && chars[j + 1] == '2' {
                            j += 2;
                        }
                    } else {
                        while j < chars.len() && chars[j].is_ascii_digit() {
                            j += 1;
                        }
                    }
                    j
                };
                let text: String = chars[i..end].iter().collect();
                exp = self.parse_exponent(&text, letter == 'h').map_err(|r| err(&r))?;
                i = if braced { end + 1 } else { end };
            }
            result = self.multiply(&result, &self.pow(&gen, exp));
        }
        Ok(result)
    }

    fn parse_exponent(&self, text: &str, on_h: bool) -> Result<i64, String> {
        let (neg, body) = match text.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, text.strip_prefix('+').unwrap_or(text)),
        };
        let value = match body {
            "" => return Err("missing exponent".into()),
            "r" | "r^1" => self.r as i64,
            "r^2" | "r2" | "r²" => (self.r * self.r % self.n) as i64,
            digits => digits
                .parse::<i64>()
                .map_err(|_| format!("bad exponent {text:?}"))?,
        };
        if on_h && body.starts_with('r') {
            return Err("symbolic exponents are not defined on h".into());
        }
        Ok(if neg { -value } else { value })
    }

    /// The normal form written as a word, e.g. `a^2 c^6 h^2`; `1` for the identity.
    pub fn to_word(&self, e: &KElement) -> String {
        let mut parts = Vec::new();
        for (letter, v) in [("a", e.x), ("b", e.y), ("c", e.z), ("h", e.t)] {
            match v {
                0 => {}
                1 => parts.push(letter.to_string()),
                _ => parts.push(format!("{letter}^{v}")),
            }
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join(" ")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p7() -> KParams {
        KParams::new(7, 2).unwrap()
    }

    #[test]
    fn roots_by_scan() {
        assert_eq!(find_unit_cube_roots(7).unwrap(), vec![2, 4]);
        assert!(find_unit_cube_roots(9).unwrap().is_empty());
        assert_eq!(find_unit_cube_roots(13).unwrap(), vec![3, 9]);
        assert!(find_unit_cube_roots(6).unwrap().is_empty());
    }

    #[test]
    fn params_validation() {
        assert!(matches!(KParams::with_default_root(9), Err(KError::NoRoot(9))));
        assert!(KParams::new(7, 3).is_err());
        assert!(KParams::new(3, 1).is_err());
        let p = KParams::with_default_root(13).unwrap();
        assert_eq!((p.r(), p.rho()), (3, 9));
    }

    #[test]
    fn twisted_products() {
        let p = p7();
        let (a, h) = (p.a(), p.h());
        assert_eq!(p.multiply(&h, &a), KElement::from([4, 0, 0, 1]));
        assert_eq!(p.multiply(&a, &h), KElement::from([1, 0, 0, 1]));
        assert_eq!(p.multiply(&a, &h), p.multiply(&h, &p.pow(&a, 2)));
        assert_eq!(p.conjugate(&a, &h), p.pow(&a, 2));
    }

    #[test]
    fn inverses() {
        let p = p7();
        assert_eq!(p.inverse(&p.identity()), p.identity());
        assert_eq!(p.inverse(&p.a()), KElement::from([6, 0, 0, 0]));
        assert_eq!(p.inverse(&p.h()), KElement::from([0, 0, 0, 2]));
        assert_eq!(p.multiply(&p.h(), &p.inverse(&p.h())), p.identity());
    }

    #[test]
    fn words() {
        let p = p7();
        assert_eq!(p.parse_word("a").unwrap(), KElement::from([1, 0, 0, 0]));
        assert_eq!(p.parse_word("h^{-1}a").unwrap(), KElement::from([2, 0, 0, 2]));
        assert_eq!(p.parse_word("hc").unwrap(), KElement::from([0, 0, 4, 1]));
        assert_eq!(p.parse_word("c^{-r}").unwrap(), p.pow(&p.c(), -2));
        assert_eq!(p.parse_word("c^-r^2 b^r2").unwrap(), {
            let c = p.pow(&p.c(), -4);
            p.multiply(&c, &p.pow(&p.b(), 4))
        });
        assert_eq!(p.parse_word("1").unwrap(), p.identity());
        assert_eq!(p.parse_word("").unwrap(), p.identity());
        assert!(p.parse_word("h^r").is_err());
        assert!(p.parse_word("d").is_err());
        assert!(p.parse_word("a^{2").is_err());
        assert!(p.parse_word("a^").is_err());
    }

    #[test]
    fn word_round_trip() {
        let p = p7();
        for i in (0..p.order() as usize).step_by(37) {
            let e = p.element_at(i);
            assert_eq!(p.parse_word(&p.to_word(&e)).unwrap(), e);
        }
    }

    #[test]
    fn serialization() {
        let p = p7();
        let e = p.parse_word("h^{-1}a").unwrap();
        assert_eq!(serde_json::to_string(&e).unwrap(), "[2,0,0,2]");
        assert_eq!(e.to_string(), "[2,0,0,2]");
        assert_eq!(serde_json::to_string(&p).unwrap(), r#"{"n":7,"r":2}"#);
        assert!(serde_json::from_str::<KParams>(r#"{"n":7,"r":3}"#).is_err());
    }

    #[test]
    fn enumeration_order() {
        let p = p7();
        let all = p.enumerate_elements().unwrap();
        assert_eq!(all.len(), 1029);
        assert_eq!(all[0], p.identity());
        for (i, e) in all.iter().enumerate() {
            assert_eq!(p.index_of(e), i);
        }
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(KParams::with_default_root(13).unwrap().enumerate_elements().unwrap().len(), 6591);
    }

    #[test]
    fn generator_image_checks() {
        let p = p7();
        let id = p.check_generator_images(&p.identity_images());
        assert!(id.is_automorphism);
        let w = |s: &str| p.parse_word(s).unwrap();
        let alpha1 = GeneratorImages {
            a: w("b^{-r}c^{-1}"),
            b: w("a^r b^{-r} c^r"),
            c: w("c^r"),
            h: w("h c^{-r}"),
        };
        assert!(p.check_generator_images(&alpha1).is_automorphism);
        // collapsing everything onto <a> satisfies nothing about h
        let bad = GeneratorImages {
            a: p.a(),
            b: p.a(),
            c: p.a(),
            h: p.h(),
        };
        let check = p.check_generator_images(&bad);
        assert!(check.is_endomorphism);
        assert!(!check.is_automorphism);
    }
}
