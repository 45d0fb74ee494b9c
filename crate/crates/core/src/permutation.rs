//! Finite-support permutations of ℤ, partitions, and vexillary triples.
//!
//! A [`Permutation`] is stored on the smallest interval `[lo, lo + len)` that
//! contains every non-fixed point, so structural equality is equality of
//! permutations.

use std::fmt;
use std::str::FromStr;

use rustc_hash::FxHashSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    /// First position of the stored window (1 for the identity).
    lo: i64,
    images: Vec<i64>,
}

impl Permutation {
    pub fn identity() -> Permutation {
        Permutation { lo: 1, images: Vec::new() }
    }

    /// Builds from images at positions `lo, lo+1, …`; the values must be a
    /// permutation of those positions.
    pub fn from_window(lo: i64, images: Vec<i64>) -> Result<Permutation> {
        let n = images.len() as i64;
        let mut seen = vec![false; images.len()];
        for &v in &images {
            let k = v - lo;
            if k < 0 || k >= n {
                return Err(Error::InvalidPermutation(format!(
                    "value {v} outside window ({}, {}]",
                    lo - 1,
                    lo + n - 1
                )));
            }
            if std::mem::replace(&mut seen[k as usize], true) {
                return Err(Error::InvalidPermutation(format!("duplicate value {v}")));
            }
        }
        Ok(Permutation { lo, images }.canonical())
    }

    fn canonical(mut self) -> Permutation {
        let first = self.images.iter().enumerate().position(|(k, &v)| v != self.lo + k as i64);
        let Some(first) = first else {
            return Permutation::identity();
        };
        let last = (0..self.images.len())
            .rev()
            .find(|&k| self.images[k] != self.lo + k as i64)
            .unwrap();
        self.images = self.images[first..=last].to_vec();
        self.lo += first as i64;
        self
    }

    /// Simple transposition `s_i` swapping `i` and `i+1`.
    pub fn simple(i: i64) -> Permutation {
        Permutation { lo: i, images: vec![i + 1, i] }
    }

    /// Decreasing arrangement of `(−m, m]`.
    pub fn longest(m: i64) -> Result<Permutation> {
        if m < 1 {
            return Err(Error::IndexOutOfRange { index: m, range: "m >= 1".into() });
        }
        Ok(Permutation { lo: -m + 1, images: (-m + 1..=m).rev().collect() })
    }

    pub fn is_identity(&self) -> bool {
        self.images.is_empty()
    }

    pub fn apply(&self, i: i64) -> i64 {
        let k = i - self.lo;
        if k >= 0 && (k as usize) < self.images.len() {
            self.images[k as usize]
        } else {
            i
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.images.len()];
        for (k, &v) in self.images.iter().enumerate() {
            inv[(v - self.lo) as usize] = self.lo + k as i64;
        }
        Permutation { lo: self.lo, images: inv }
    }

    /// Support interval `[lo, hi]` (empty for the identity: `lo > hi`).
    pub fn support(&self) -> (i64, i64) {
        (self.lo, self.lo + self.images.len() as i64 - 1)
    }

    /// Smallest `m >= 1` with support inside `(−m, m]`.
    pub fn min_window(&self) -> i64 {
        if self.is_identity() {
            return 1;
        }
        let (lo, hi) = self.support();
        (1 - lo).max(hi).max(1)
    }

    pub fn in_window(&self, m: i64) -> bool {
        self.is_identity() || {
            let (lo, hi) = self.support();
            lo > -m && hi <= m
        }
    }

    /// Images at positions `a..=b`.
    pub fn window_images(&self, a: i64, b: i64) -> Vec<i64> {
        (a..=b).map(|i| self.apply(i)).collect()
    }

    /// Composition `(self ∘ other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        if self.is_identity() {
            return other.clone();
        }
        if other.is_identity() {
            return self.clone();
        }
        let (a1, b1) = self.support();
        let (a2, b2) = other.support();
        let (a, b) = (a1.min(a2), b1.max(b2));
        let images = (a..=b).map(|i| self.apply(other.apply(i))).collect();
        Permutation { lo: a, images }.canonical()
    }

    /// `w s_i` (swaps the entries at positions `i`, `i+1`).
    pub fn mul_simple(&self, i: i64) -> Permutation {
        self.compose(&Permutation::simple(i))
    }

    /// Number of inversions.
    pub fn length(&self) -> usize {
        let v = &self.images;
        let mut n = 0;
        for a in 0..v.len() {
            for b in a + 1..v.len() {
                if v[a] > v[b] {
                    n += 1;
                }
            }
        }
        n
    }

    pub fn has_descent(&self, i: i64) -> bool {
        self.apply(i) > self.apply(i + 1)
    }

    pub fn descents(&self) -> Vec<i64> {
        let (lo, hi) = self.support();
        (lo..hi).filter(|&i| self.has_descent(i)).collect()
    }

    pub fn is_grassmannian(&self) -> bool {
        self.descents().iter().all(|&d| d == 0)
    }

    /// `k_w(p, q) = #{ i ≤ p | w(i) > q }`.
    pub fn dimension_function(&self, p: i64, q: i64) -> usize {
        if self.is_identity() {
            return (p - q).max(0) as usize;
        }
        let (lo, hi) = self.support();
        // fixed points below the support
        let below = (p.min(lo - 1) - q).max(0) as usize;
        let inside = (lo..=p.min(hi)).filter(|&i| self.apply(i) > q).count();
        // fixed points above the support, at most p
        let above = if p > hi {
            ((p - q.max(hi)).max(0)) as usize
        } else {
            0
        };
        below + inside + above
    }

    /// Bruhat order via dimension functions on the padded union window.
    pub fn bruhat_leq(&self, other: &Permutation) -> bool {
        if self.length() > other.length() {
            return false;
        }
        let (a1, b1) = self.support();
        let (a2, b2) = other.support();
        let lo = a1.min(a2) - 1;
        let hi = b1.max(b2) + 1;
        for p in lo..=hi {
            for q in lo..=hi {
                if self.dimension_function(p, q) > other.dimension_function(p, q) {
                    return false;
                }
            }
        }
        true
    }

    /// Reduced word `[i_1, …, i_l]` with `w = s_{i_1} ⋯ s_{i_l}`, produced by
    /// repeatedly stripping the leftmost descent on the right.
    pub fn reduced_word(&self) -> Vec<i64> {
        let mut w = self.clone();
        let mut word = Vec::new();
        while let Some(&i) = w.descents().first() {
            word.push(i);
            w = w.mul_simple(i);
        }
        word.reverse();
        word
    }

    pub fn from_word(word: &[i64]) -> Permutation {
        word.iter().fold(Permutation::identity(), |w, &i| w.mul_simple(i))
    }

    /// All permutations of `(−m, m]`.
    pub fn all_in_window(m: i64) -> Vec<Permutation> {
        let n = (2 * m) as usize;
        let mut current: Vec<i64> = (-m + 1..=m).collect();
        let mut out = Vec::new();
        // lexicographic successor enumeration
        loop {
            out.push(Permutation { lo: -m + 1, images: current.clone() }.canonical());
            let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| current[i] < current[i + 1]) else {
                break;
            };
            let j = (i + 1..n).rev().find(|&j| current[j] > current[i]).unwrap();
            current.swap(i, j);
            current[i + 1..].reverse();
        }
        out
    }

    pub fn one_line(&self) -> String {
        let parts: Vec<String> = self.images.iter().map(|v| v.to_string()).collect();
        format!("[{}]", parts.join(","))
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.one_line())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.one_line())
    }
}

impl FromStr for Permutation {
    type Err = Error;

    /// One-line notation; the sorted values give the positions.
    fn from_str(s: &str) -> Result<Permutation> {
        let s = s.trim();
        if s == "e" || s == "id" {
            return Ok(Permutation::identity());
        }
        let inner = s
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(format!("expected `[a,b,…]`, got `{s}`")))?;
        let images: Vec<i64> = if inner.trim().is_empty() {
            Vec::new()
        } else {
            inner
                .split(',')
                .map(|t| {
                    t.trim()
                        .replace('−', "-")
                        .parse::<i64>()
                        .map_err(|_| Error::Parse(format!("bad entry `{t}`")))
                })
                .collect::<Result<_>>()?
        };
        if images.is_empty() {
            return Ok(Permutation::identity());
        }
        let lo = *images.iter().min().unwrap();
        Permutation::from_window(lo, images)
    }
}

#[derive(Serialize, Deserialize)]
struct PermJson {
    window: [i64; 2],
    images: Vec<i64>,
}

impl Serialize for Permutation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let (lo, hi) = self.support();
        PermJson { window: [lo - 1, hi.max(lo - 1)], images: self.images.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = PermJson::deserialize(d)?;
        if raw.window[1] - raw.window[0] != raw.images.len() as i64 {
            return Err(D::Error::custom("window size does not match images"));
        }
        Permutation::from_window(raw.window[0] + 1, raw.images).map_err(D::Error::custom)
    }
}

/// Weakly decreasing positive parts.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn new(parts: Vec<u32>) -> Result<Partition> {
        let parts: Vec<u32> = parts.into_iter().filter(|&p| p > 0).collect();
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Parse(format!("parts {parts:?} are not weakly decreasing")));
        }
        Ok(Partition(parts))
    }

    pub fn empty() -> Partition {
        Partition(Vec::new())
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn size(&self) -> usize {
        self.0.iter().map(|&p| p as usize).sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `λ_i` with 1-based index, 0 past the end.
    pub fn part(&self, i: usize) -> u32 {
        if i == 0 {
            return 0;
        }
        self.0.get(i - 1).copied().unwrap_or(0)
    }

    /// All partitions of `n`, parts in decreasing lexicographic order.
    pub fn of_size(n: usize) -> Vec<Partition> {
        fn rec(n: u32, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Partition>) {
            if n == 0 {
                out.push(Partition(prefix.clone()));
                return;
            }
            for p in (1..=n.min(max)).rev() {
                prefix.push(p);
                rec(n - p, p, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        rec(n as u32, n as u32, &mut Vec::new(), &mut out);
        out
    }

    /// Partitions fitting in an `rows × cols` box.
    pub fn in_box(rows: usize, cols: u32) -> Vec<Partition> {
        let mut out = Vec::new();
        for n in 0..=rows * cols as usize {
            out.extend(
                Partition::of_size(n)
                    .into_iter()
                    .filter(|p| p.len() <= rows && p.part(1) <= cols),
            );
        }
        out
    }

    /// The Grassmannian permutation `w_λ` (unique descent at 0).
    pub fn grassmannian(&self) -> Permutation {
        let l = self.len() as i64;
        if l == 0 {
            return Permutation::identity();
        }
        let top = self.part(1) as i64;
        let lo = -l + 1;
        let mut used = FxHashSet::default();
        let mut images = Vec::new();
        for k in lo..=0 {
            let v = self.part((1 - k) as usize) as i64 + k;
            used.insert(v);
            images.push(v);
        }
        for v in lo..=top {
            if !used.contains(&v) {
                images.push(v);
            }
        }
        Permutation::from_window(lo, images).expect("grassmannian construction")
    }

    /// Inverse of [`Partition::grassmannian`]; rejects permutations with a
    /// descent away from 0.
    pub fn of_grassmannian(w: &Permutation) -> Result<Partition> {
        if !w.is_grassmannian() {
            return Err(Error::NotGrassmannian(w.to_string()));
        }
        let mut parts = Vec::new();
        let mut k = 1i64;
        loop {
            let p = w.apply(1 - k) - 1 + k;
            if p <= 0 {
                break;
            }
            parts.push(p as u32);
            k += 1;
        }
        Partition::new(parts)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Partition {
    type Err = Error;
    fn from_str(s: &str) -> Result<Partition> {
        let s = s.trim();
        if s == "∅" || s == "()" || s.is_empty() {
            return Ok(Partition::empty());
        }
        let inner = s
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .unwrap_or(s);
        let parts = inner
            .split(',')
            .map(|t| t.trim().parse::<u32>().map_err(|_| Error::Parse(format!("bad part `{t}`"))))
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}

#[derive(Serialize, Deserialize)]
struct PartitionJson {
    parts: Vec<u32>,
}

impl Serialize for Partition {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PartitionJson { parts: self.0.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        Partition::new(PartitionJson::deserialize(d)?.parts).map_err(D::Error::custom)
    }
}

/// `μ ⊘_m v ∈ S_{(−2m, 2m]}`.
pub fn oslash(mu: &Partition, v: &Permutation, m: i64) -> Result<Permutation> {
    let wm = mu.grassmannian();
    if !wm.in_window(m) {
        return Err(Error::WindowTooSmall { m, what: format!("w_μ for μ={mu}") });
    }
    if !v.in_window(m) {
        return Err(Error::WindowTooSmall { m, what: format!("v={v}") });
    }
    let mut images = Vec::with_capacity(4 * m as usize);
    images.extend((-m + 1..=0).map(|i| wm.apply(i) - m));
    images.extend((-m + 1..=m).map(|i| v.apply(i) + m));
    images.extend((1..=m).map(|i| wm.apply(i) - m));
    Permutation::from_window(-2 * m + 1, images)
}

/// `x^{(m)} = [−2m+1, …, −m, 1, …, 2m, −m+1, …, 0]`.
pub fn x_perm(m: i64) -> Result<Permutation> {
    if m < 1 {
        return Err(Error::IndexOutOfRange { index: m, range: "m >= 1".into() });
    }
    let mut images: Vec<i64> = (-2 * m + 1..=-m).collect();
    images.extend(1..=2 * m);
    images.extend(-m + 1..=0);
    Permutation::from_window(-2 * m + 1, images)
}

/// Vexillary data `(k, p, q)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Triple {
    pub k: Vec<i64>,
    pub p: Vec<i64>,
    pub q: Vec<i64>,
}

impl Triple {
    pub fn new(k: Vec<i64>, p: Vec<i64>, q: Vec<i64>) -> Result<Triple> {
        let t = Triple { k, p, q };
        t.validate()?;
        Ok(t)
    }

    pub fn len(&self) -> usize {
        self.k.len()
    }

    pub fn is_empty(&self) -> bool {
        self.k.is_empty()
    }

    pub fn validate(&self) -> Result<()> {
        let s = self.k.len();
        let bad = |msg: &str| Err(Error::InvalidTriple(format!("{msg}: {self:?}")));
        if self.p.len() != s || self.q.len() != s {
            return bad("sequences of unequal length");
        }
        if s > 0 && self.k[0] <= 0 {
            return bad("k must be positive");
        }
        for i in 1..s {
            if self.k[i] <= self.k[i - 1] {
                return bad("k not strictly increasing");
            }
            if self.p[i] < self.p[i - 1] {
                return bad("p not weakly increasing");
            }
            if self.q[i] > self.q[i - 1] {
                return bad("q not weakly decreasing");
            }
            if self.lambda_at(i) > self.lambda_at(i - 1) {
                return bad("q - p + k not nonincreasing");
            }
        }
        if s > 0 && self.lambda_at(s - 1) < 0 {
            return bad("negative part");
        }
        Ok(())
    }

    fn lambda_at(&self, i: usize) -> i64 {
        self.q[i] - self.p[i] + self.k[i]
    }

    /// `λ_k` for `k = 1..=k_s` (parts may be zero at the end).
    pub fn lambda_parts(&self) -> Vec<i64> {
        let mut out = Vec::new();
        let mut prev = 0;
        for i in 0..self.len() {
            for _ in prev..self.k[i] {
                out.push(self.lambda_at(i));
            }
            prev = self.k[i];
        }
        out
    }

    /// Index `i` (0-based) of the condition governing row `row` (1-based).
    pub fn condition_of_row(&self, row: i64) -> usize {
        self.k.iter().position(|&k| row <= k).expect("row within k_s")
    }

    /// The triple of `w_circ^{(−m, m]}`.
    pub fn longest(m: i64) -> Triple {
        let n = 2 * m - 1;
        Triple {
            k: (1..=n).collect(),
            p: (1..=n).map(|i| -m + i).collect(),
            q: (1..=n).map(|i| m - i).collect(),
        }
    }
}

/// The minimal permutation with `k_w(p_i, q_i) = k_i`, together with its partition.
pub fn vexillary_from_triple(t: &Triple) -> Result<(Permutation, Partition)> {
    t.validate()?;
    let lambda: Vec<u32> = t.lambda_parts().into_iter().map(|x| x as u32).collect();
    let lambda = Partition::new(lambda)?;
    if t.is_empty() {
        return Ok((Permutation::identity(), lambda));
    }
    let kmax = *t.k.last().unwrap();
    let lo = t.p.iter().chain(t.q.iter()).min().unwrap() - kmax - 2;
    let hi = t.p.iter().chain(t.q.iter()).max().unwrap() + kmax + 2;
    // smallest function compatible with the conditions
    let rank = |p: i64, q: i64| -> i64 {
        let mut r = (p - q).max(0);
        for i in 0..t.len() {
            let bound = t.k[i] - (t.p[i] - p).max(0) - (q - t.q[i]).max(0);
            r = r.max(bound);
        }
        r
    };
    let mut images = Vec::new();
    for pos in lo..=hi {
        let mut value = None;
        for q in lo - 1..=hi {
            if rank(pos, q) - rank(pos - 1, q) == 0 {
                value = Some(q);
                break;
            }
        }
        images.push(value.ok_or_else(|| Error::InvalidTriple(format!("no value at {pos}")))?);
    }
    let w = Permutation::from_window(lo, images)
        .map_err(|e| Error::InvalidTriple(format!("conditions are not realizable: {e}")))?;
    for i in 0..t.len() {
        if w.dimension_function(t.p[i], t.q[i]) as i64 != t.k[i] {
            return Err(Error::InvalidTriple(format!("condition {i} not met by {w}")));
        }
    }
    if w.length() != lambda.size() {
        return Err(Error::InvalidTriple(format!(
            "length {} of {w} differs from |λ| = {}",
            w.length(),
            lambda.size()
        )));
    }
    Ok((w, lambda))
}

/// Reads a triple off the essential set of `w`; `None` unless `w` is vexillary
/// (checked by reconstructing `w` from the triple).
pub fn triple_of(w: &Permutation) -> Option<Triple> {
    if w.is_identity() {
        return Some(Triple { k: vec![], p: vec![], q: vec![] });
    }
    let inv = w.inverse();
    let (lo, hi) = w.support();
    let mut ess = Vec::new();
    for p in lo - 1..=hi {
        for q in lo - 1..=hi {
            if w.apply(p) > q && q >= w.apply(p + 1) && inv.apply(q) > p && p >= inv.apply(q + 1) {
                ess.push((w.dimension_function(p, q) as i64, p, q));
            }
        }
    }
    ess.sort();
    let t = Triple {
        k: ess.iter().map(|e| e.0).collect(),
        p: ess.iter().map(|e| e.1).collect(),
        q: ess.iter().map(|e| e.2).collect(),
    };
    match vexillary_from_triple(&t) {
        Ok((v, _)) if &v == w => Some(t),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn parse_examples() {
        let w = p("[3,2]");
        assert_eq!((w.apply(2), w.apply(3), w.apply(4)), (3, 2, 4));
        assert_eq!(w.support(), (2, 3));
        let w = p("[-1,2,1,-2,0]");
        assert_eq!(w.window_images(-2, 2), vec![-1, 2, 1, -2, 0]);
        assert!(p("[1,2]").is_identity());
        assert_eq!(p("[1,2,4,3]"), p("[4,3]"));
        assert!("[1,3]".parse::<Permutation>().is_err());
        assert!("[1,1]".parse::<Permutation>().is_err());
        assert_eq!(p("[]"), Permutation::identity());
    }

    #[test]
    fn lengths() {
        assert_eq!(Permutation::identity().length(), 0);
        assert_eq!(p("[1,0]").length(), 1);
        assert_eq!(p("[2,1,0,-1]").length(), 6);
        assert_eq!(Permutation::longest(3).unwrap().length(), 15);
        assert_eq!(Permutation::longest(1).unwrap(), p("[1,0]"));
        assert_eq!(Permutation::longest(2).unwrap(), p("[2,1,0,-1]"));
        assert!(Permutation::longest(0).is_err());
    }

    #[test]
    fn dimension_function_examples() {
        let e = Permutation::identity();
        for (pp, q) in [(3, 1), (0, -4), (-2, 5), (2, 2)] {
            assert_eq!(e.dimension_function(pp, q), (pp - q).max(0) as usize);
        }
        assert_eq!(p("[3,2]").dimension_function(2, 2), 1);
        let w = Partition::new(vec![2, 1]).unwrap().grassmannian();
        assert_eq!(w.dimension_function(0, 1), 1);
        assert_eq!(w.dimension_function(0, -1), 2);
    }

    /// Brute force `#{i ≤ p | w(i) > q}` over a generous range.
    fn k_brute(w: &Permutation, pp: i64, q: i64) -> usize {
        (-40..=pp).filter(|&i| w.apply(i) > q).count()
    }

    #[test]
    fn dimension_function_matches_brute_force() {
        for w in Permutation::all_in_window(2) {
            let w = w.compose(&p("[5,3,4]"));
            for pp in -5..7 {
                for q in -5..7 {
                    assert_eq!(w.dimension_function(pp, q), k_brute(&w, pp, q), "{w} {pp} {q}");
                }
            }
        }
    }

    #[test]
    fn grassmannian_bijection() {
        assert_eq!(Partition::empty().grassmannian(), Permutation::identity());
        let one = Partition::new(vec![1]).unwrap();
        assert_eq!(one.grassmannian(), p("[1,0]"));
        for n in 0..7 {
            for mu in Partition::of_size(n) {
                let w = mu.grassmannian();
                assert!(w.is_grassmannian());
                assert_eq!(w.length(), mu.size());
                assert_eq!(Partition::of_grassmannian(&w).unwrap(), mu);
                for i in 1..=mu.len() {
                    let lam = mu.part(i) as i64 - i as i64;
                    assert_eq!(w.dimension_function(0, lam), i);
                }
            }
        }
        assert!(Partition::of_grassmannian(&p("[3,2]")).is_err());
    }

    #[test]
    fn oslash_and_x_perm() {
        let one = Partition::new(vec![1]).unwrap();
        let e = Permutation::identity();
        assert_eq!(oslash(&one, &e, 1).unwrap(), p("[0,1,2,-1]"));
        assert_eq!(oslash(&Partition::empty(), &e, 2).unwrap(), x_perm(2).unwrap());
        assert_eq!(x_perm(1).unwrap(), p("[-1,1,2,0]"));
        assert_eq!(x_perm(2).unwrap(), p("[-3,-2,1,2,3,4,-1,0]"));
        for m in 1..4 {
            let x = x_perm(m).unwrap();
            assert_eq!(x.descents(), vec![m]);
        }
        assert!(oslash(&Partition::new(vec![3]).unwrap(), &e, 2).is_err());
    }

    #[test]
    fn oslash_length_law() {
        for m in 1..=2 {
            for mu in Partition::in_box(m as usize, m as u32) {
                for v in Permutation::all_in_window(m) {
                    let u = oslash(&mu, &v, m).unwrap();
                    assert_eq!(u.length(), mu.size() + v.length() + 2 * (m * m) as usize);
                }
            }
        }
    }

    #[test]
    fn reduced_words() {
        for w in Permutation::all_in_window(2) {
            let word = w.reduced_word();
            assert_eq!(word.len(), w.length());
            assert_eq!(Permutation::from_word(&word), w);
        }
    }

    #[test]
    fn vexillary_examples() {
        for m in 1..=3 {
            let (w, lam) = vexillary_from_triple(&Triple::longest(m)).unwrap();
            assert_eq!(w, Permutation::longest(m).unwrap());
            let expect: Vec<u32> = (1..2 * m as u32).rev().collect();
            assert_eq!(lam.parts(), &expect[..]);
        }
        let t = Triple::new(vec![1], vec![0], vec![1]).unwrap();
        let (w, lam) = vexillary_from_triple(&t).unwrap();
        assert_eq!(lam, Partition::new(vec![2]).unwrap());
        assert_eq!(w, lam.grassmannian());
        assert!(Triple::new(vec![2, 1], vec![0, 0], vec![0, 0]).is_err());
    }

    #[test]
    fn triples_recovered_for_grassmannians_and_longest() {
        for n in 0..6 {
            for mu in Partition::of_size(n) {
                let w = mu.grassmannian();
                let t = triple_of(&w).unwrap_or_else(|| panic!("no triple for {w}"));
                assert!(t.p.iter().all(|&x| x == 0));
            }
        }
        for m in 1..=3 {
            assert!(triple_of(&Permutation::longest(m).unwrap()).is_some());
        }
        // 2143 pattern is not vexillary
        assert!(triple_of(&p("[2,1,4,3]")).is_none());
    }

    #[test]
    fn json_forms() {
        let w = p("[2,1,0,-1]");
        let js = serde_json::to_string(&w).unwrap();
        assert_eq!(js, r#"{"window":[-2,2],"images":[2,1,0,-1]}"#);
        assert_eq!(serde_json::from_str::<Permutation>(&js).unwrap(), w);
        let mu = Partition::new(vec![2, 2]).unwrap();
        assert_eq!(serde_json::to_string(&mu).unwrap(), r#"{"parts":[2,2]}"#);
        assert_eq!("(2,2)".parse::<Partition>().unwrap(), mu);
        assert_eq!(mu.to_string(), "(2,2)");
    }
}
