//! `d̂^w_{μ,v}` as the coefficient of `𝔊_{μ⊘_m v}(𝕔;x;𝕫)` in
//! `𝔊_w(𝕔̃;x;𝕫̃)·𝔊_{x^{(m)}}(𝕔;x;𝕫)`.
//!
//! After the specialization `c ↦ ∏_{i=−M+1}^{0}(1+u_i t)/(1+x̃_i t)`,
//! `z_j ↦ u_j` the row series of the determinantal formula become
//! `∏_{b=−M+1}^{q}(1+u_b t) / ∏_{a=−M+1}^{p}(1+x̃_a t)`, so everything is
//! computed directly in the finitely many variables `x_{−M+1..M}`, `u`.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rustc_hash::FxHashMap;

use num_bigint::BigInt;

use super::packed::{degree, to_i128, to_monomial, vexillary_at, weight, Packed, PointData};
use super::{CoproductTable, EchelonBasis};
use crate::chern_series::{vexillary_determinant_with, TSeries, Variant};
use crate::error::{Error, Result};
use crate::families::{nearest_vexillary, Theory};
use crate::operators::{isobaric, Ring};
use crate::permutation::{oslash, triple_of, x_perm, Partition, Permutation};
use crate::poly::{x_tilde, Family, GradedPoly, Int, Monomial, Var};

/// The sequence `u_i`, `i ∈ (−M, M]`, substituted for the equivariant variables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Specialization {
    /// `𝕫 = (z_{−m+1}, …, z_m, z_{−m+1}, …, z_m)`.
    Doubled,
    /// `𝕫̃ = (z_{−m+1}, …, z_0, z_{−m+1}, …, z_m, z_1, …, z_m)`.
    Interleaved,
    /// All zero.
    Zero,
}

impl Specialization {
    /// `u_i` for the doubled window `(−2m, 2m]`.
    pub fn value(self, m: i64, i: i64) -> GradedPoly {
        self.z_index(m, i).map_or_else(GradedPoly::zero, |j| GradedPoly::var(Var::z(j)))
    }

    /// `Some(j)` if `u_i = z_j`, `None` if `u_i = 0`.
    pub fn z_index(self, m: i64, i: i64) -> Option<i64> {
        match self {
            Specialization::Zero => None,
            Specialization::Doubled => Some(if i <= 0 { i + m } else { i - m }),
            Specialization::Interleaved => Some(if i <= -m {
                i + m
            } else if i <= m {
                i
            } else {
                i - m
            }),
        }
    }
}

/// Specialized Grothendieck polynomials on the doubled window, memoized.
pub struct FiniteFamily {
    m: i64,
    special: Specialization,
    n: u32,
    memo: FxHashMap<Permutation, GradedPoly>,
}

impl FiniteFamily {
    pub fn new(m: i64, special: Specialization, n: u32) -> FiniteFamily {
        FiniteFamily { m, special, n, memo: FxHashMap::default() }
    }

    fn big_m(&self) -> i64 {
        2 * self.m
    }

    fn row(&self, p: i64, q: i64, order: usize) -> TSeries {
        let lo = -self.big_m() + 1;
        let mut num = TSeries::one(order);
        for b in lo..=q {
            num = num.mul(&TSeries::linear(self.special.value(self.m, b).with_trunc(Some(self.n)), order));
        }
        let mut den = TSeries::one(order);
        for a in lo..=p {
            den = den.mul(&TSeries::linear(x_tilde(a, self.n), order));
        }
        num.div(&den).expect("unit constant term")
    }

    /// `𝔊_u(c;x;z)` with `c` and `z` specialized.
    pub fn get(&mut self, u: &Permutation) -> Result<GradedPoly> {
        if let Some(hit) = self.memo.get(u) {
            return Ok(hit.clone());
        }
        let big_m = self.big_m();
        if !u.in_window(big_m) {
            return Err(Error::WindowTooSmall { m: big_m, what: format!("u = {u}") });
        }
        let (top, word) = nearest_vexillary(u, big_m)?;
        let mut cur = top;
        let mut f = match self.memo.get(&cur) {
            Some(hit) => hit.clone(),
            None => {
                let t = triple_of(&cur).ok_or_else(|| Error::Inconsistent(format!("{cur} is not vexillary")))?;
                let f = vexillary_determinant_with(&t, Variant::Grothendieck, Some(self.n), |p, q, order| {
                    self.row(p, q, order)
                })?;
                self.memo.insert(cur.clone(), f.clone());
                f
            }
        };
        for &i in word.iter().rev() {
            cur = cur.mul_simple(i);
            f = match self.memo.get(&cur) {
                Some(hit) => hit.clone(),
                None => {
                    let g = isobaric(i, &f, Ring::KTheory(self.n))?;
                    self.memo.insert(cur.clone(), g.clone());
                    g
                }
            };
        }
        Ok(f)
    }
}

/// Values of specialized Grothendieck polynomials at integer points
/// `(x_{−M+1}, …, x_M)`, with `z` and `β` symbolic. After the `c`-specialization
/// every `s_i` only swaps coordinates, so `π_i` is evaluated pointwise.
pub struct PointFamily {
    m: i64,
    special: Specialization,
    n: u32,
    steps: FxHashMap<Permutation, Option<i64>>,
    memo: FxHashMap<(Permutation, Vec<i64>), Packed>,
}

impl PointFamily {
    pub fn new(m: i64, special: Specialization, n: u32) -> PointFamily {
        PointFamily { m, special, n, steps: FxHashMap::default(), memo: FxHashMap::default() }
    }

    fn big_m(&self) -> i64 {
        2 * self.m
    }

    fn z_lo(&self) -> i64 {
        -self.m + 1
    }

    /// First step `i` of a shortest right path from `u` to a vexillary permutation.
    fn step(&mut self, u: &Permutation) -> Result<Option<i64>> {
        if let Some(s) = self.steps.get(u) {
            return Ok(*s);
        }
        let s = match triple_of(u) {
            Some(_) => None,
            None => Some(nearest_vexillary(u, self.big_m())?.1[0]),
        };
        self.steps.insert(u.clone(), s);
        Ok(s)
    }

    /// `𝔊_u` with `c`, `z` specialized and `x` evaluated at `point`.
    pub fn value(&mut self, u: &Permutation, point: &[i64]) -> Result<GradedPoly> {
        Ok(self.packed(u, point)?.to_graded(self.z_lo(), Some(self.n)))
    }

    pub(crate) fn packed(&mut self, u: &Permutation, point: &[i64]) -> Result<Packed> {
        let big_m = self.big_m();
        if point.len() != 2 * big_m as usize {
            return Err(Error::Inconsistent(format!("point of length {} for window {big_m}", point.len())));
        }
        if !u.in_window(big_m) {
            return Err(Error::WindowTooSmall { m: big_m, what: format!("u = {u}") });
        }
        let key = (u.clone(), point.to_vec());
        if let Some(hit) = self.memo.get(&key) {
            return Ok(hit.clone());
        }
        let n = self.n;
        let out = match self.step(u)? {
            None => {
                let t = triple_of(u).expect("vexillary");
                let (m, special) = (self.m, self.special);
                let data = PointData {
                    z_lo: self.z_lo(),
                    u: &|b| special.z_index(m, b),
                    x: &|a| point[(a + big_m - 1) as usize],
                    lo: -big_m + 1,
                    n,
                };
                vexillary_at(&t, &data)?
            }
            Some(i) => {
                let up = u.mul_simple(i);
                let (xi, xj) = (point[(i + big_m - 1) as usize], point[(i + big_m) as usize]);
                let mut swapped = point.to_vec();
                swapped.swap((i + big_m - 1) as usize, (i + big_m) as usize);
                let f = self.packed(&up, point)?;
                let g = self.packed(&up, &swapped)?;
                // (1 + βx_{i+1}) f − (1 + βx_i) s_i f
                let lhs = f.add(&f.shifted(1, xj as i128, n)?, 1)?;
                let rhs = g.add(&g.shifted(1, xi as i128, n)?, 1)?;
                lhs.add(&rhs, -1)?.div_exact(xi - xj)?
            }
        };
        self.memo.insert(key, out.clone());
        Ok(out)
    }
}

fn marker(p: usize) -> Var {
    Var::new(Family::T, p as i64)
}

/// Integer points with pairwise distinct coordinates, from a fixed seed.
fn sample_points(count: usize, dim: usize, seed: u64) -> Vec<Vec<i64>> {
    let mut rng = StdRng::seed_from_u64(seed);
    let pool: Vec<i64> = (-(dim as i64)..=dim as i64).collect();
    (0..count).map(|_| pool.choose_multiple(&mut rng, dim).copied().collect()).collect()
}

const EXTRA_POINTS: usize = 8;
const POINT_ROUNDS: usize = 3;

type Key = (Partition, Permutation);

/// The expansion set `{𝔊_{μ⊘_m v}(𝕔;x;𝕫)}` sampled at fixed points.
struct Sampled {
    m: i64,
    n: u32,
    points: Vec<Vec<i64>>,
    shifted: FxHashMap<Key, Permutation>,
    bases: FxHashMap<usize, Arc<EchelonBasis<Key>>>,
    doubled: PointFamily,
}

impl Sampled {
    /// Picks points until every degree slice of the reduced set has full rank.
    fn new(m: i64, n: u32) -> Result<Sampled> {
        let mut by_degree: BTreeMap<usize, Vec<Key>> = BTreeMap::new();
        let mut shifted: FxHashMap<Key, Permutation> = FxHashMap::default();
        for mu in Partition::in_box(m as usize, m as u32) {
            for v in Permutation::all_in_window(m) {
                let u = oslash(&mu, &v, m)?;
                by_degree.entry(u.length()).or_default().push((mu.clone(), v.clone()));
                shifted.insert((mu.clone(), v), u);
            }
        }
        let widest = by_degree.values().map(Vec::len).max().unwrap_or(0);
        let mut count = widest + EXTRA_POINTS;
        let mut last_err = None;
        for round in 0..POINT_ROUNDS {
            let points = sample_points(count, 4 * m as usize, round as u64);
            let mut reduced = PointFamily::new(m, Specialization::Zero, 0);
            let mut bases = FxHashMap::default();
            let mut deficient = None;
            for (&d, labels) in &by_degree {
                let mut items = Vec::with_capacity(labels.len());
                for key in labels {
                    let mut vec = GradedPoly::zero();
                    for (p, pt) in points.iter().enumerate() {
                        let c = reduced.packed(&shifted[key], pt)?.terms().first().map_or(0, |t| t.1);
                        vec = &vec + &GradedPoly::monomial(Monomial::var(marker(p)), Int::from(BigInt::from(c)));
                    }
                    items.push((key.clone(), vec));
                }
                match EchelonBasis::new(items) {
                    Ok(b) => {
                        bases.insert(d, Arc::new(b));
                    }
                    Err(e) => {
                        deficient = Some(e);
                        break;
                    }
                }
            }
            match deficient {
                None => {
                    let doubled = PointFamily::new(m, Specialization::Doubled, n);
                    return Ok(Sampled { m, n, points, shifted, bases, doubled });
                }
                Some(e) => {
                    last_err = Some(e);
                    count *= 2;
                }
            }
        }
        Err(Error::Expansion {
            reason: format!("specialized basis {{𝔊_(μ⊘v)}} is rank deficient at {count} sample points"),
            offending: last_err.map(|e| e.to_string()).unwrap_or_default(),
        })
    }

    fn expand(&mut self, w: &Permutation) -> Result<CoproductTable> {
        let (m, n) = (self.m, self.n);
        if !w.in_window(m) {
            return Err(Error::WindowTooSmall { m, what: format!("w = {w}") });
        }
        let xm = x_perm(m)?;
        let top_degree = (w.length() + xm.length()) as i64;
        let mut tilde = PointFamily::new(m, Specialization::Interleaved, n);
        let mut residual = Vec::with_capacity(self.points.len());
        for pt in &self.points {
            residual.push(tilde.packed(w, pt)?.mul(&self.doubled.packed(&xm, pt)?, n)?);
        }

        let mut out: BTreeMap<Key, Packed> = BTreeMap::new();
        let mut last_weight = None;
        while let Some(level) = residual.iter().flat_map(|r| r.terms()).map(|&(k, _)| weight(k)).min() {
            if last_weight.is_some_and(|lw| level <= lw) {
                return Err(Error::Inconsistent(format!("expansion did not clear weight {level}")));
            }
            last_weight = Some(level);
            let mut groups: BTreeMap<u64, GradedPoly> = BTreeMap::new();
            for (p, r) in residual.iter().enumerate() {
                for &(k, c) in r.terms().iter().filter(|t| weight(t.0) == level) {
                    let slot = groups.entry(k).or_default();
                    *slot = &*slot + &GradedPoly::monomial(Monomial::var(marker(p)), Int::from(BigInt::from(c)));
                }
            }
            let mut coeffs: BTreeMap<Key, FxHashMap<u64, i128>> = BTreeMap::new();
            for (mono, g) in groups {
                let d = top_degree - degree(mono);
                let basis = usize::try_from(d).ok().and_then(|d| self.bases.get(&d)).ok_or_else(|| Error::Expansion {
                    reason: format!("no basis element μ⊘v of length {d}"),
                    offending: to_monomial(mono, -m + 1).to_string(),
                })?;
                for (key, a) in basis.solve(&g)? {
                    *coeffs.entry(key).or_default().entry(mono).or_default() += to_i128(&a)?;
                }
            }
            for (key, a) in coeffs {
                let a = Packed::from_map(a);
                let u = &self.shifted[&key];
                for (p, pt) in self.points.iter().enumerate() {
                    let full = self.doubled.packed(u, pt)?;
                    let mut map: FxHashMap<u64, i128> = residual[p].terms().iter().copied().collect();
                    a.mul_into(&full, n, -1, &mut map)?;
                    residual[p] = Packed::from_map(map);
                }
                let slot = out.entry(key).or_default();
                *slot = slot.add(&a, 1)?;
            }
        }
        let entries = out
            .into_iter()
            .filter(|(_, a)| !a.is_zero())
            .map(|(k, a)| (k, a.to_graded(-m + 1, Some(n))))
            .collect();
        Ok(CoproductTable { w: w.clone(), theory: Theory::K, m, trunc: Some(n), entries })
    }
}

/// `d̂^w_{μ,v}` for all `w_μ, v ∈ S_(−m,m]` through the product identity.
///
/// `x` is sampled at integer points; the reduced expansion set is checked for
/// full rank and every level solve is overdetermined by extra points.
pub fn coproduct_via_product_route(w: &Permutation, m: i64, n: u32) -> Result<CoproductTable> {
    Ok(coproduct_via_product_route_batch(std::slice::from_ref(w), m, n)?.remove(0))
}

/// [`coproduct_via_product_route`] for several `w`, sharing the sampled expansion set.
pub fn coproduct_via_product_route_batch(ws: &[Permutation], m: i64, n: u32) -> Result<Vec<CoproductTable>> {
    let mut sampled = Sampled::new(m, n)?;
    ws.iter().map(|w| sampled.expand(w)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{build, specialize_c, FamilyRequest};
    use crate::poly::oplus;

    #[test]
    fn finite_family_matches_specialized_enriched() {
        let n = 3;
        let m = 1;
        let mut fam = FiniteFamily::new(m, Specialization::Interleaved, n);
        let u_seq: Vec<(i64, GradedPoly)> =
            (-1..=0).map(|i| (i, Specialization::Interleaved.value(m, i).with_trunc(Some(n)))).collect();
        let z_sub: FxHashMap<Var, GradedPoly> =
            (-1..=2).map(|i| (Var::z(i), Specialization::Interleaved.value(m, i))).collect();
        for u in Permutation::all_in_window(2) {
            let enriched = build(&FamilyRequest::new(u.clone(), Theory::K, n).window(2)).unwrap();
            let expect = specialize_c(&enriched, &u_seq, n).substitute(&z_sub);
            assert_eq!(fam.get(&u).unwrap(), expect, "{u}");
        }
    }

    #[test]
    fn point_values_match_symbolic() {
        let n = 3;
        let points = sample_points(3, 4, 7);
        for special in [Specialization::Doubled, Specialization::Interleaved] {
            let mut sym = FiniteFamily::new(1, special, n);
            let mut pts = PointFamily::new(1, special, n);
            for u in Permutation::all_in_window(2) {
                let f = sym.get(&u).unwrap();
                for pt in &points {
                    let at = f.evaluate(|v| (v.family() == Family::X).then(|| pt[(v.index() + 1) as usize]));
                    assert_eq!(pts.value(&u, pt).unwrap(), at, "{u} at {pt:?}");
                }
            }
        }
    }

    #[test]
    fn s0_specializes_to_formal_sum() {
        let mut fam = FiniteFamily::new(1, Specialization::Doubled, 4);
        let s0: Permutation = "[1,0]".parse().unwrap();
        let x = |i| GradedPoly::var(Var::x(i));
        let u = |i| Specialization::Doubled.value(1, i);
        let expect = oplus(&oplus(&x(-1), &x(0)), &oplus(&u(-1), &u(0)));
        assert_eq!(fam.get(&s0).unwrap(), expect.truncated(4));
    }
}
