//! Enriched Schubert `𝔖_w(c;x;y)` and Grothendieck `𝔊_w(c;x;z)` polynomials,
//! and their specializations.

use std::fmt;
use std::str::FromStr;
use std::sync::{OnceLock, RwLock};

use rustc_hash::{FxHashMap, FxHashSet};
use serde::{Deserialize, Serialize};

use crate::chern_series::{vexillary_determinant, TSeries, Variant};
use crate::error::{Error, Result};
use crate::operators::{divided_difference, isobaric, Ring};
use crate::permutation::{triple_of, Permutation, Triple};
use crate::poly::{ominus_unary, x_tilde, Family, GradedPoly, Var};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Theory {
    /// Cohomology (Schubert polynomials).
    H,
    /// K-theory (Grothendieck polynomials).
    K,
}

impl Theory {
    pub fn variant(self) -> Variant {
        match self {
            Theory::H => Variant::Schubert,
            Theory::K => Variant::Grothendieck,
        }
    }

    pub fn ring(self, n: u32) -> Ring {
        match self {
            Theory::H => Ring::Cohomology,
            Theory::K => Ring::KTheory(n),
        }
    }

    pub fn trunc(self, n: u32) -> Option<u32> {
        self.ring(n).trunc()
    }

    /// The equivariant family: `y` in cohomology, `z` in K-theory.
    pub fn equivariant_family(self) -> Family {
        match self {
            Theory::H => Family::Y,
            Theory::K => Family::Z,
        }
    }

    pub fn equivariant_var(self, i: i64) -> Var {
        Var::new(self.equivariant_family(), i)
    }
}

impl fmt::Display for Theory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Theory::H => "H",
            Theory::K => "K",
        })
    }
}

impl FromStr for Theory {
    type Err = Error;
    fn from_str(s: &str) -> Result<Theory> {
        match s {
            "H" | "h" | "schubert" => Ok(Theory::H),
            "K" | "k" | "groth" | "grothendieck" => Ok(Theory::K),
            _ => Err(Error::Parse(format!("unknown theory `{s}` (expected H or K)"))),
        }
    }
}

/// Where the operator descent starts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Start {
    /// The nearest vexillary permutation above `w` in right weak order.
    #[default]
    Vexillary,
    /// The longest element of the window.
    Longest,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FamilyRequest {
    pub w: Permutation,
    pub theory: Theory,
    /// Defaults to the minimal window of `w`.
    pub window: Option<i64>,
    /// Ignored in cohomology.
    pub trunc: u32,
    pub start: Start,
}

impl FamilyRequest {
    pub fn new(w: Permutation, theory: Theory, trunc: u32) -> FamilyRequest {
        FamilyRequest { w, theory, window: None, trunc, start: Start::Vexillary }
    }

    pub fn window(mut self, m: i64) -> FamilyRequest {
        self.window = Some(m);
        self
    }

    pub fn start(mut self, start: Start) -> FamilyRequest {
        self.start = start;
        self
    }

    pub fn resolved_window(&self) -> i64 {
        self.window.unwrap_or_else(|| self.w.min_window())
    }

    fn key(&self, w: &Permutation) -> CacheKey {
        let trunc = self.theory.trunc(self.trunc);
        (w.clone(), self.theory, trunc, self.start, self.resolved_window())
    }
}

type CacheKey = (Permutation, Theory, Option<u32>, Start, i64);

fn cache() -> &'static RwLock<FxHashMap<CacheKey, GradedPoly>> {
    static CACHE: OnceLock<RwLock<FxHashMap<CacheKey, GradedPoly>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

pub fn schubert(w: &Permutation) -> Result<GradedPoly> {
    build(&FamilyRequest::new(w.clone(), Theory::H, 0))
}

pub fn grothendieck(w: &Permutation, n: u32) -> Result<GradedPoly> {
    build(&FamilyRequest::new(w.clone(), Theory::K, n))
}

/// `𝔖_w` or `𝔊_w` per the request.
pub fn build(req: &FamilyRequest) -> Result<GradedPoly> {
    let m = req.resolved_window();
    if !req.w.in_window(m) {
        return Err(Error::WindowTooSmall { m, what: format!("w = {}", req.w) });
    }
    if let Some(hit) = cache().read().unwrap().get(&req.key(&req.w)) {
        return Ok(hit.clone());
    }
    let (top, word) = match req.start {
        Start::Longest => {
            let w0 = Permutation::longest(m)?;
            let word = req.w.inverse().compose(&w0).reduced_word();
            (w0, word)
        }
        Start::Vexillary => nearest_vexillary(&req.w, m)?,
    };
    let ring = req.theory.ring(req.trunc);
    let mut u = top;
    let mut f = match cache().read().unwrap().get(&req.key(&u)) {
        Some(hit) => hit.clone(),
        None => {
            let t = triple_of(&u).ok_or_else(|| Error::Inconsistent(format!("{u} is not vexillary")))?;
            vexillary_fast_path(&t, req.theory, req.trunc)?
        }
    };
    cache().write().unwrap().insert(req.key(&u), f.clone());
    for &i in word.iter().rev() {
        u = u.mul_simple(i);
        let key = req.key(&u);
        let hit = cache().read().unwrap().get(&key).cloned();
        f = match hit {
            Some(hit) => hit,
            None => {
                let next = match req.theory {
                    Theory::H => divided_difference(i, &f, ring)?,
                    Theory::K => isobaric(i, &f, ring)?,
                };
                cache().write().unwrap().insert(key, next.clone());
                next
            }
        };
    }
    debug_assert_eq!(u, req.w);
    Ok(f)
}

/// Vexillary `V ≥ w` reached by the fewest length-increasing right steps inside
/// the window, with the word `[i_1, …]` such that `V = w s_{i_1} ⋯`.
pub fn nearest_vexillary(w: &Permutation, m: i64) -> Result<(Permutation, Vec<i64>)> {
    let mut level: Vec<(Permutation, Vec<i64>)> = vec![(w.clone(), Vec::new())];
    let mut seen: FxHashSet<Permutation> = FxHashSet::default();
    seen.insert(w.clone());
    while !level.is_empty() {
        let best = level
            .iter()
            .filter_map(|(u, word)| triple_of(u).map(|t| (t.k.last().copied().unwrap_or(0), u, word)))
            .min_by_key(|(size, _, _)| *size);
        if let Some((_, u, word)) = best {
            return Ok((u.clone(), word.clone()));
        }
        let mut next = Vec::new();
        for (u, word) in &level {
            for i in -m + 1..m {
                if !u.has_descent(i) {
                    let up = u.mul_simple(i);
                    if seen.insert(up.clone()) {
                        let mut w2 = word.clone();
                        w2.push(i);
                        next.push((up, w2));
                    }
                }
            }
        }
        level = next;
    }
    Err(Error::Inconsistent(format!("no vexillary permutation above {w} in window {m}")))
}

/// Determinantal formula for the permutation encoded by `t`.
pub fn vexillary_fast_path(t: &Triple, theory: Theory, n: u32) -> Result<GradedPoly> {
    vexillary_determinant(t, theory.variant(), theory.trunc(n))
}

/// `Sch_w(x;y) = 𝔖_w(1;x;−y)` in cohomology, `Γ_w(x;z) = 𝔊_w(1;x;z)|_{β=−1}` in
/// K-theory. The K-theory value is meaningful once the truncation order
/// exceeds the β-degree of the finite polynomial.
pub fn specialize_finite(f: &GradedPoly, theory: Theory) -> GradedPoly {
    let c_one = f.evaluate(|v| (v.family() == Family::C).then_some(0));
    match theory {
        Theory::H => {
            let mut neg: FxHashMap<Var, GradedPoly> = FxHashMap::default();
            for v in c_one.variables() {
                if v.family() == Family::Y {
                    neg.insert(v, -GradedPoly::var(v));
                }
            }
            c_one.substitute(&neg)
        }
        Theory::K => c_one.evaluate(|v| v.is_beta().then_some(-1)).with_trunc(None),
    }
}

/// `β → 0`, `z → y`.
pub fn beta_zero(f: &GradedPoly) -> GradedPoly {
    f.evaluate(|v| v.is_beta().then_some(0))
        .rename(|v| if v.family() == Family::Z { Var::y(v.index()) } else { v })
        .with_trunc(None)
}

/// Replaces `c_k` by the `t^k` coefficient of `∏_{i ∈ range} (1 + u_i t)/(1 + x̃_i t)`.
pub fn specialize_c(f: &GradedPoly, u: &[(i64, GradedPoly)], n: u32) -> GradedPoly {
    let max_k = f
        .variables()
        .into_iter()
        .filter(|v| v.family() == Family::C)
        .map(|v| v.index())
        .max();
    let Some(max_k) = max_k else {
        return f.clone();
    };
    let order = max_k as usize;
    let mut num = TSeries::one(order);
    let mut den = TSeries::one(order);
    for (i, ui) in u {
        num = num.mul(&TSeries::linear(ui.clone(), order));
        den = den.mul(&TSeries::linear(x_tilde(*i, n), order));
    }
    let series = num.div(&den).expect("unit constant term");
    let mut assignment: FxHashMap<Var, GradedPoly> = FxHashMap::default();
    for k in 1..=max_k {
        assignment.insert(Var::c(k), series.coeff(k).truncated(n));
    }
    f.substitute(&assignment).truncated(n)
}

/// `c ↦ ∏_{i=−M+1}^{0}(1+z_i t)/(1+x̃_i t)`, then `z_i ↦ ⊖a_i`, with `a_i`
/// written in the `z` family. `β` stays symbolic; see [`at_beta_minus_one`].
pub fn to_back_stable(f: &GradedPoly, n: u32, window: i64) -> GradedPoly {
    let u: Vec<(i64, GradedPoly)> = (-window + 1..=0).map(|i| (i, GradedPoly::var(Var::z(i)))).collect();
    let g = specialize_c(f, &u, n);
    let mut assignment: FxHashMap<Var, GradedPoly> = FxHashMap::default();
    for v in g.variables() {
        if v.family() == Family::Z {
            assignment.insert(v, ominus_unary(&GradedPoly::var(v), n));
        }
    }
    g.substitute(&assignment).truncated(n)
}

/// Evaluates at `β = −1` when no term reaches the truncation order.
pub fn at_beta_minus_one(f: &GradedPoly) -> Option<GradedPoly> {
    match f.trunc() {
        Some(n) if f.max_beta_exp() >= n => None,
        _ => Some(f.evaluate(|v| v.is_beta().then_some(-1)).with_trunc(None)),
    }
}
