//! The coproduct `Δ(c_k) = Σ c_{k−i} c'_i` and the coefficients `ĉ^w_{μ,v}`,
//! `d̂^w_{μ,v}` of `Δ𝔖_w`, `Δ𝔊_w` in the tensor bases.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::families::{build, FamilyRequest, Theory};
use crate::permutation::{Partition, Permutation};
use crate::poly::{Family, GradedPoly, Int, Monomial, Var};

mod packed;
mod product_route;
pub use product_route::{coproduct_via_product_route, coproduct_via_product_route_batch, FiniteFamily, PointFamily, Specialization};

/// `c_k ↦ Σ_{i=0}^{k} c_{k−i} c'_i`, extended multiplicatively.
pub fn delta(f: &GradedPoly) -> Result<GradedPoly> {
    if f.contains_family(Family::CPrime) {
        return Err(Error::CPrimeInInput);
    }
    let mut assignment: FxHashMap<Var, GradedPoly> = FxHashMap::default();
    for v in f.variables() {
        if v.family() == Family::C {
            assignment.insert(v, delta_c(v.index()));
        }
    }
    if assignment.is_empty() {
        return Ok(f.clone());
    }
    Ok(f.substitute(&assignment))
}

fn delta_c(k: i64) -> GradedPoly {
    let gen = |fam: fn(i64) -> Var, i: i64| if i == 0 { GradedPoly::one() } else { GradedPoly::var(fam(i)) };
    let mut acc = GradedPoly::zero();
    for i in 0..=k {
        acc = &acc + &(&gen(Var::c, k - i) * &gen(Var::cp, i));
    }
    acc
}

/// Coefficients of `Δ𝔖_w` (H) or `Δ𝔊_w` (K).
#[derive(Clone, Debug, PartialEq)]
pub struct CoproductTable {
    pub w: Permutation,
    pub theory: Theory,
    pub m: i64,
    /// Truncation order (K-theory only).
    pub trunc: Option<u32>,
    pub entries: BTreeMap<(Partition, Permutation), GradedPoly>,
}

impl CoproductTable {
    pub fn get(&self, mu: &Partition, v: &Permutation) -> GradedPoly {
        self.entries
            .get(&(mu.clone(), v.clone()))
            .cloned()
            .unwrap_or_else(|| GradedPoly::zero().with_trunc(self.trunc))
    }
}

#[derive(Serialize, Deserialize)]
struct EntryJson {
    mu: Vec<u32>,
    v: String,
    coeff: String,
}

#[derive(Serialize, Deserialize)]
struct TableJson {
    w: String,
    theory: Theory,
    m: i64,
    #[serde(rename = "N")]
    n: Option<u32>,
    entries: Vec<EntryJson>,
}

impl Serialize for CoproductTable {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TableJson {
            w: self.w.to_string(),
            theory: self.theory,
            m: self.m,
            n: self.trunc,
            entries: self
                .entries
                .iter()
                .map(|((mu, v), c)| EntryJson { mu: mu.parts().to_vec(), v: v.to_string(), coeff: c.to_string() })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CoproductTable {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = TableJson::deserialize(d)?;
        let mut entries = BTreeMap::new();
        for e in raw.entries {
            let mu = Partition::new(e.mu).map_err(D::Error::custom)?;
            let v: Permutation = e.v.parse().map_err(D::Error::custom)?;
            let c: GradedPoly = e.coeff.parse().map_err(D::Error::custom)?;
            entries.insert((mu, v), c.with_trunc(raw.n));
        }
        Ok(CoproductTable {
            w: raw.w.parse().map_err(D::Error::custom)?,
            theory: raw.theory,
            m: raw.m,
            trunc: raw.n,
            entries,
        })
    }
}

/// `(pivot, row, combination of labels giving the row)`.
type EchelonRow = (Monomial, BTreeMap<Monomial, BigRational>, BTreeMap<usize, BigRational>);

/// Reduced row echelon form of a set of basis polynomials, over ℚ.
pub struct EchelonBasis<K> {
    labels: Vec<K>,
    rows: Vec<EchelonRow>,
}

fn to_rational_map(f: &GradedPoly) -> BTreeMap<Monomial, BigRational> {
    f.terms().map(|(m, c)| (m.clone(), BigRational::from_integer(c.to_bigint()))).collect()
}

fn axpy<K: Ord + Clone>(target: &mut BTreeMap<K, BigRational>, a: &BigRational, x: &BTreeMap<K, BigRational>) {
    for (k, v) in x {
        let slot = target.entry(k.clone()).or_insert_with(BigRational::zero);
        *slot += a * v;
        if slot.is_zero() {
            target.remove(k);
        }
    }
}

impl<K: Clone + std::fmt::Debug> EchelonBasis<K> {
    /// Errors if the polynomials are linearly dependent.
    pub fn new(items: Vec<(K, GradedPoly)>) -> Result<EchelonBasis<K>> {
        let mut basis = EchelonBasis { labels: Vec::new(), rows: Vec::new() };
        for (label, poly) in items {
            let idx = basis.labels.len();
            let mut row = to_rational_map(&poly);
            let mut combo = BTreeMap::from([(idx, BigRational::one())]);
            for (pivot, r, c) in &basis.rows {
                if let Some(a) = row.get(pivot).cloned() {
                    axpy(&mut row, &-a.clone(), r);
                    axpy(&mut combo, &-a, c);
                }
            }
            let Some((pivot, lead)) = row.iter().next_back().map(|(m, c)| (m.clone(), c.clone())) else {
                return Err(Error::Expansion {
                    reason: "basis polynomials are linearly dependent".into(),
                    offending: format!("{label:?}"),
                });
            };
            let inv = lead.recip();
            row.values_mut().for_each(|v| *v *= &inv);
            combo.values_mut().for_each(|v| *v *= &inv);
            for (_, r, c) in basis.rows.iter_mut() {
                if let Some(a) = r.get(&pivot).cloned() {
                    axpy(r, &-a.clone(), &row);
                    axpy(c, &-a, &combo);
                }
            }
            basis.labels.push(label);
            basis.rows.push((pivot, row, combo));
        }
        Ok(basis)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Integer coordinates of `f`; errors if `f` is outside the span or a
    /// coordinate is not integral.
    pub fn solve(&self, f: &GradedPoly) -> Result<Vec<(K, Int)>> {
        let mut rest = to_rational_map(f);
        let mut sol: BTreeMap<usize, BigRational> = BTreeMap::new();
        for (pivot, r, c) in &self.rows {
            if let Some(a) = rest.get(pivot).cloned() {
                axpy(&mut rest, &-a.clone(), r);
                axpy(&mut sol, &a, c);
            }
        }
        if !rest.is_empty() {
            let offending: Vec<String> = rest.iter().take(8).map(|(m, c)| format!("{c}*{m}")).collect();
            return Err(Error::Expansion {
                reason: "polynomial is outside the span of the candidate basis (window too small?)".into(),
                offending: offending.join(" + "),
            });
        }
        let mut out = Vec::new();
        for (idx, a) in sol {
            if !a.is_integer() {
                return Err(Error::Expansion {
                    reason: "non-integral coefficient".into(),
                    offending: format!("{:?} -> {a}", self.labels[idx]),
                });
            }
            let n: BigInt = a.to_integer();
            if !n.is_zero() {
                out.push((self.labels[idx].clone(), Int::from(n)));
            }
        }
        Ok(out)
    }
}

type Stage1Key = (i64, usize);

fn stage1_bases() -> &'static Mutex<FxHashMap<Stage1Key, Arc<EchelonBasis<Permutation>>>> {
    static CACHE: OnceLock<Mutex<FxHashMap<Stage1Key, Arc<EchelonBasis<Permutation>>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

fn stage2_bases() -> &'static Mutex<FxHashMap<usize, Arc<EchelonBasis<Partition>>>> {
    static CACHE: OnceLock<Mutex<FxHashMap<usize, Arc<EchelonBasis<Partition>>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

fn to_cprime(f: &GradedPoly) -> GradedPoly {
    f.rename(|v| if v.family() == Family::C { Var::cp(v.index()) } else { v })
}

fn drop_equivariant(f: &GradedPoly) -> GradedPoly {
    f.evaluate(|v| matches!(v.family(), Family::Y | Family::Z).then_some(0))
}

/// `{𝔖_v(c';x;0) : v ∈ S_(−m,m], ℓ(v) = d}`.
fn stage1_basis(m: i64, d: usize) -> Result<Arc<EchelonBasis<Permutation>>> {
    if let Some(b) = stage1_bases().lock().unwrap().get(&(m, d)) {
        return Ok(b.clone());
    }
    let mut items = Vec::new();
    for v in Permutation::all_in_window(m).into_iter().filter(|v| v.length() == d) {
        let s = build(&FamilyRequest::new(v.clone(), Theory::H, 0).window(m))?;
        items.push((v, to_cprime(&drop_equivariant(&s))));
    }
    let b = Arc::new(EchelonBasis::new(items)?);
    stage1_bases().lock().unwrap().insert((m, d), b.clone());
    Ok(b)
}

/// `{𝔖_{w_μ}(c;0) : |μ| = d}`.
fn stage2_basis(d: usize) -> Result<Arc<EchelonBasis<Partition>>> {
    if let Some(b) = stage2_bases().lock().unwrap().get(&d) {
        return Ok(b.clone());
    }
    let mut items = Vec::new();
    for mu in Partition::of_size(d) {
        let s = build(&FamilyRequest::new(mu.grassmannian(), Theory::H, 0))?;
        items.push((mu, drop_equivariant(&s)));
    }
    let b = Arc::new(EchelonBasis::new(items)?);
    stage2_bases().lock().unwrap().insert(d, b.clone());
    Ok(b)
}

/// Filtration weight of a coefficient monomial: `y`/`z` degree plus β exponent.
fn group_degree(g: &GradedPoly) -> Result<usize> {
    let d = g
        .homogeneous_degree()
        .ok_or_else(|| Error::Expansion { reason: "inhomogeneous group".into(), offending: g.to_string() })?;
    Ok(d.max(0) as usize)
}

fn weight(m: &Monomial) -> u32 {
    m.factors()
        .iter()
        .filter(|(v, _)| v.is_beta() || matches!(v.family(), Family::Y | Family::Z))
        .map(|&(_, e)| e)
        .sum()
}

/// Expands `f = Σ_K A_K · full(K)` where `full(K)` reduces to the basis element
/// `K` modulo `(y, z, β)`. `is_basis_var` selects the variables carried by the
/// basis; `basis` picks the basis for a coefficient monomial and its group.
pub(crate) fn peel<K: Clone + Ord + std::fmt::Debug>(
    mut f: GradedPoly,
    is_basis_var: impl Fn(Var) -> bool,
    basis: impl Fn(&Monomial, &GradedPoly) -> Result<Arc<EchelonBasis<K>>>,
    full: impl Fn(&K) -> Result<GradedPoly>,
) -> Result<BTreeMap<K, GradedPoly>> {
    let trunc = f.trunc();
    let mut out: BTreeMap<K, GradedPoly> = BTreeMap::new();
    let mut last_weight = None;
    while !f.is_zero() {
        let w = f.terms().map(|(m, _)| weight(&m.split(&is_basis_var).1)).min().unwrap();
        if last_weight.is_some_and(|lw| w <= lw) {
            return Err(Error::Inconsistent(format!("expansion did not clear weight {w}")));
        }
        last_weight = Some(w);
        let level = f.filter_terms(|m| weight(&m.split(&is_basis_var).1) == w);
        let groups = level.group_by(|v| !is_basis_var(v));
        let mut coeffs: BTreeMap<K, GradedPoly> = BTreeMap::new();
        for (coeff_mono, g) in groups {
            for (k, a) in basis(&coeff_mono, &g)?.solve(&g)? {
                let slot = coeffs.entry(k).or_insert_with(|| GradedPoly::zero().with_trunc(trunc));
                *slot = &*slot + &GradedPoly::monomial(coeff_mono.clone(), a);
            }
        }
        for (k, a) in coeffs {
            f = &f - &(&a * &full(&k)?);
            let slot = out.entry(k).or_insert_with(|| GradedPoly::zero().with_trunc(trunc));
            *slot = &*slot + &a;
        }
    }
    out.retain(|_, v| !v.is_zero());
    Ok(out)
}

/// Expands `g(c, c', x)` in `{F_μ(c)·F_v(c';x)}` with `F = 𝔖` or `𝔊`, `v ∈ S_(−m,m]`.
pub fn expand_pair_basis(g: &GradedPoly, theory: Theory, m: i64, n: u32) -> Result<BTreeMap<(Partition, Permutation), GradedPoly>> {
    let trunc = theory.trunc(n);
    let g = g.clone().with_trunc(trunc);
    let is_cp_or_x = |v: Var| matches!(v.family(), Family::CPrime | Family::X);
    let by_v = peel(g, is_cp_or_x, |_, g| stage1_basis(m, group_degree(g)?), |v: &Permutation| {
        let f = build(&FamilyRequest::new(v.clone(), theory, n).window(m))?;
        Ok(to_cprime(&f))
    })?;
    let mut out = BTreeMap::new();
    for (v, a) in by_v {
        let by_mu = peel(a, |x: Var| x.family() == Family::C, |_, g| stage2_basis(group_degree(g)?), |mu: &Partition| {
            build(&FamilyRequest::new(mu.grassmannian(), theory, n))
        })?;
        for (mu, coeff) in by_mu {
            out.insert((mu, v.clone()), coeff);
        }
    }
    Ok(out)
}

/// `ĉ^w_{μ,v}` (H) or `d̂^w_{μ,v}` (K) for all `(μ, v)`.
pub fn coproduct_coefficients(w: &Permutation, theory: Theory, m: i64, n: u32) -> Result<CoproductTable> {
    if !w.in_window(m) {
        return Err(Error::WindowTooSmall { m, what: format!("w = {w}") });
    }
    let f = build(&FamilyRequest::new(w.clone(), theory, n).window(m))?;
    let entries = expand_pair_basis(&delta(&f)?, theory, m, n)?;
    Ok(CoproductTable { w: w.clone(), theory, m, trunc: theory.trunc(n), entries })
}

/// `(−1)^{|μ|+ℓ(v)−ℓ(w)}`.
pub fn sign_factor(w: &Permutation, mu: &Partition, v: &Permutation) -> i64 {
    if (mu.size() + v.length() + w.length()).is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Whether every coefficient of `f` is nonnegative.
pub fn all_coefficients_nonnegative(f: &GradedPoly) -> bool {
    f.terms().all(|(_, c)| !c.to_bigint().is_negative())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> GradedPoly {
        s.parse().unwrap()
    }

    #[test]
    fn delta_values() {
        assert_eq!(delta(&v("c[1]")).unwrap(), v("c[1] + c'[1]"));
        assert_eq!(delta(&v("c[2]")).unwrap(), v("c[2] + c[1]*c'[1] + c'[2]"));
        assert_eq!(delta(&v("x[1]*y[0]")).unwrap(), v("x[1]*y[0]"));
        assert!(matches!(delta(&v("c'[1]")), Err(Error::CPrimeInInput)));
    }

    #[test]
    fn small_expansions() {
        let t = expand_pair_basis(&GradedPoly::one(), Theory::H, 1, 0).unwrap();
        assert_eq!(t.len(), 1);
        assert!(t[&(Partition::empty(), Permutation::identity())].is_one());
        let s0: Permutation = "[1,0]".parse().unwrap();
        let t = expand_pair_basis(&v("c[1] + c'[1]"), Theory::H, 1, 0).unwrap();
        assert_eq!(t.len(), 2);
        assert!(t[&(Partition::new(vec![1]).unwrap(), Permutation::identity())].is_one());
        assert!(t[&(Partition::empty(), s0)].is_one());
    }

    #[test]
    fn echelon_rejects_dependence() {
        let items = vec![("a", v("x[1] + x[2]")), ("b", v("2*x[1] + 2*x[2]"))];
        assert!(EchelonBasis::new(items).is_err());
        let b = EchelonBasis::new(vec![("a", v("x[1] + x[2]")), ("b", v("x[1] - x[2]"))]).unwrap();
        assert!(b.solve(&v("x[1]")).is_err());
        assert_eq!(b.solve(&v("2*x[1]")).unwrap(), vec![("a", Int::ONE), ("b", Int::ONE)]);
    }
}
