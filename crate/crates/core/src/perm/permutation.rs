use std::fmt;

use serde::{Deserialize, Serialize};

use super::PermError;

/// A bijection of `{0, ..., degree - 1}` stored as its image array.
///
/// Products are read left to right with the left factor acting first:
/// `p.then(&q)` sends `i` to `q(p(i))`. This is the only composition order
/// used anywhere in the crate, and it matches the exponent notation `i^p`
/// for right actions.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree as u32).collect(),
        }
    }

    pub fn from_images(images: Vec<u32>) -> Result<Self, PermError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            let i = i as usize;
            if i >= n || seen[i] {
                return Err(PermError::NotBijection);
            }
            seen[i] = true;
        }
        Ok(Permutation { images })
    }

    pub fn from_usize_images(images: &[usize]) -> Result<Self, PermError> {
        if images.iter().any(|&i| i > u32::MAX as usize) {
            return Err(PermError::NotBijection);
        }
        Self::from_images(images.iter().map(|&i| i as u32).collect())
    }

    /// Builds the permutation of the given degree that has the listed cycles.
    pub fn from_cycles(degree: usize, cycles: &[&[usize]]) -> Result<Self, PermError> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        let mut touched = vec![false; degree];
        for cycle in cycles {
            for (k, &p) in cycle.iter().enumerate() {
                if p >= degree {
                    return Err(PermError::PointOutOfRange { point: p, degree });
                }
                if touched[p] {
                    return Err(PermError::NotBijection);
                }
                touched[p] = true;
                images[p] = cycle[(k + 1) % cycle.len()] as u32;
            }
        }
        Ok(Permutation { images })
    }

    /// Parses a disjoint-cycle string such as `(0 1 2)(3 4)`; `()` is the identity.
    pub fn parse_cycles(text: &str, degree: usize) -> Result<Self, PermError> {
        let mut cycles: Vec<Vec<usize>> = Vec::new();
        let mut rest = text.trim();
        while !rest.is_empty() {
            let body = rest
                .strip_prefix('(')
                .ok_or_else(|| PermError::Parse(format!("expected '(' in {text:?}")))?;
            let close = body
                .find(')')
                .ok_or_else(|| PermError::Parse(format!("unclosed cycle in {text:?}")))?;
            let points = body[..close]
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .map(|s| {
                    s.parse::<usize>()
                        .map_err(|_| PermError::Parse(format!("bad point {s:?}")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            if !points.is_empty() {
                cycles.push(points);
            }
            rest = body[close + 1..].trim_start();
        }
        let refs: Vec<&[usize]> = cycles.iter().map(|c| c.as_slice()).collect();
        Self::from_cycles(degree, &refs)
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn apply(&self, point: usize) -> usize {
        self.images[point] as usize
    }

    #[inline]
    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &p)| i as u32 == p)
    }

    /// `self` followed by `other`. Panics if the degrees differ; use
    /// [`compose`] for a checked product.
    pub fn then(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.degree(), other.degree(), "degree mismatch in product");
        Permutation {
            images: self.images.iter().map(|&i| other.images[i as usize]).collect(),
        }
    }

    /// Writes `self.then(other)` into `out`, reusing its allocation.
    pub(crate) fn then_into(&self, other: &Permutation, out: &mut Permutation) {
        assert_eq!(self.degree(), other.degree(), "degree mismatch in product");
        out.images.clear();
        out.images
            .extend(self.images.iter().map(|&i| other.images[i as usize]));
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0u32; self.degree()];
        for (i, &p) in self.images.iter().enumerate() {
            images[p as usize] = i as u32;
        }
        Permutation { images }
    }

    /// `g^-1 * self * g`, the conjugate of `self` by `g`.
    pub fn conjugate_by(&self, g: &Permutation) -> Permutation {
        assert_eq!(self.degree(), g.degree(), "degree mismatch in conjugation");
        let mut images = vec![0u32; self.degree()];
        for (i, &p) in self.images.iter().enumerate() {
            images[g.images[i] as usize] = g.images[p as usize];
        }
        Permutation { images }
    }

    /// `self^-1 * other^-1 * self * other`.
    pub fn commutator(&self, other: &Permutation) -> Permutation {
        self.inverse()
            .then(&other.inverse())
            .then(self)
            .then(other)
    }

    pub fn pow(&self, exp: u64) -> Permutation {
        let mut result = Permutation::identity(self.degree());
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                result = result.then(&base);
            }
            base = base.then(&base);
            e >>= 1;
        }
        result
    }

    pub fn cycle_lengths(&self) -> Vec<usize> {
        let mut seen = vec![false; self.degree()];
        let mut lengths = Vec::new();
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                p = self.images[p] as usize;
                len += 1;
            }
            lengths.push(len);
        }
        lengths
    }

    pub fn order(&self) -> u128 {
        self.cycle_lengths()
            .into_iter()
            .fold(1u128, |acc, l| lcm(acc, l as u128))
    }

    /// Exponent `k` such that `2^k` is the 2-part of the order.
    pub fn two_adic_order_exponent(&self) -> u32 {
        two_adic_exponent_of_cycles(&self.images, &mut vec![false; self.degree()])
    }

    pub fn smallest_moved_point(&self) -> Option<usize> {
        self.images
            .iter()
            .enumerate()
            .find(|&(i, &p)| i as u32 != p)
            .map(|(i, _)| i)
    }

    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] || self.images[start] as usize == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                cycle.push(p);
                p = self.images[p] as usize;
            }
            out.push(cycle);
        }
        out
    }

    pub fn to_cycle_string(&self) -> String {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return "()".to_string();
        }
        let mut s = String::new();
        for c in cycles {
            s.push('(');
            let parts: Vec<String> = c.iter().map(|p| p.to_string()).collect();
            s.push_str(&parts.join(" "));
            s.push(')');
        }
        s
    }
}

/// Maximum 2-adic valuation over the cycle lengths of an image array.
/// `scratch` must be all `false` and is left all `false`.
pub(crate) fn two_adic_exponent_of_cycles(images: &[u32], scratch: &mut [bool]) -> u32 {
    let mut best = 0;
    for start in 0..images.len() {
        if scratch[start] {
            continue;
        }
        let mut len: usize = 0;
        let mut p = start;
        while !scratch[p] {
            scratch[p] = true;
            p = images[p] as usize;
            len += 1;
        }
        best = best.max(len.trailing_zeros());
    }
    scratch.iter_mut().for_each(|b| *b = false);
    best
}

fn gcd(a: u128, b: u128) -> u128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u128, b: u128) -> u128 {
    a / gcd(a, b) * b
}

/// Checked product: the result maps `i` to `q(p(i))`.
pub fn compose(p: &Permutation, q: &Permutation) -> Result<Permutation, PermError> {
    if p.degree() != q.degree() {
        return Err(PermError::DegreeMismatch {
            left: p.degree(),
            right: q.degree(),
        });
    }
    Ok(p.then(q))
}

impl TryFrom<Vec<u32>> for Permutation {
    type Error = PermError;

    fn try_from(images: Vec<u32>) -> Result<Self, Self::Error> {
        Permutation::from_images(images)
    }
}

impl From<Permutation> for Vec<u32> {
    fn from(p: Permutation) -> Self {
        p.images
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_cycle_string())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation[{}]{}", self.degree(), self.to_cycle_string())
    }
}
