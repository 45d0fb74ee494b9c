//! Certificates that coproduct coefficients lie in the positive cones
//! `ℤ≥0[y_j − y_i : i ≺ j]` and `ℤ≥0[e^{y_i−y_j} − 1 : i ≺ j]`.

use std::collections::BTreeMap;
use std::fmt;

use rustc_hash::FxHashMap;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::coproduct::CoproductTable;
use crate::error::{Error, Result};
use crate::permutation::{Partition, Permutation};
use crate::poly::{ominus, Family, GradedPoly, Int, Monomial, Var};

/// The order `1 ≺ 2 ≺ ⋯ ≺ m ≺ −m+1 ≺ ⋯ ≺ −1 ≺ 0` on the window `(−m, m]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrecOrder {
    m: i64,
    chain: Vec<i64>,
}

impl PrecOrder {
    pub fn new(m: i64) -> Result<PrecOrder> {
        if m < 1 {
            return Err(Error::IndexOutOfRange { index: m, range: "m >= 1".into() });
        }
        let chain = (1..=m).chain(-m + 1..=0).collect();
        Ok(PrecOrder { m, chain })
    }

    pub fn window(&self) -> i64 {
        self.m
    }

    pub fn chain(&self) -> &[i64] {
        &self.chain
    }

    fn position(&self, i: i64) -> Option<usize> {
        self.chain.iter().position(|&c| c == i)
    }

    /// `i ≺ j`.
    pub fn precedes(&self, i: i64, j: i64) -> bool {
        matches!((self.position(i), self.position(j)), (Some(a), Some(b)) if a < b)
    }

    /// Number of adjacent generators.
    pub fn generator_count(&self) -> usize {
        self.chain.len() - 1
    }

    /// `(σ(k), σ(k+1))` for generator `k` (0-based).
    pub fn generator_pair(&self, k: usize) -> (i64, i64) {
        (self.chain[k], self.chain[k + 1])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Certified,
    Rejected,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cone {
    /// Generators `g = y_{σ(k+1)} − y_{σ(k)}`.
    Cohomology,
    /// Generators `u = e^{y_{σ(k)} − y_{σ(k+1)}} − 1`.
    KTheory,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PositivityCertificate {
    pub status: Status,
    pub cone: Cone,
    pub order: PrecOrder,
    /// Polynomial in the generators; generator `k` is `Var::new(Family::T, k)`.
    pub expansion: GradedPoly,
    pub reason: Option<String>,
    /// First negative coefficient, when that is the reason for rejection.
    pub offending: Option<(Monomial, Int)>,
    /// K-theory: the working truncation order.
    pub trunc: Option<u32>,
    /// K-theory: no term of the expansion reached `β^N`, so the β=−1 value is exact.
    pub terminated: bool,
}

fn generator(k: usize) -> Var {
    Var::new(Family::T, k as i64)
}

impl PositivityCertificate {
    pub fn is_certified(&self) -> bool {
        self.status == Status::Certified
    }

    pub fn generator_label(&self, k: usize) -> String {
        let (a, b) = self.order.generator_pair(k);
        match self.cone {
            Cone::Cohomology => format!("g({a},{b})"),
            Cone::KTheory => format!("u({a},{b})"),
        }
    }

    pub fn generators(&self) -> Vec<String> {
        (0..self.order.generator_count()).map(|k| self.generator_label(k)).collect()
    }

    /// `(generator label → exponent, coefficient)` pairs.
    pub fn terms(&self) -> Vec<(BTreeMap<String, u32>, Int)> {
        self.expansion
            .terms()
            .map(|(m, c)| {
                let mono = m.factors().iter().map(|&(v, e)| (self.generator_label(v.index() as usize), e)).collect();
                (mono, c.clone())
            })
            .collect()
    }

    /// K-theory value in `e^y` form, as Laurent monomials `e^{Σ a_i y_i}`.
    pub fn e_y_form(&self) -> Option<LaurentPoly> {
        if self.cone != Cone::KTheory || !self.terminated {
            return None;
        }
        let mut out = LaurentPoly::one_term(BTreeMap::new(), Int::ZERO);
        for (m, c) in self.expansion.terms() {
            let mut term = LaurentPoly::one_term(BTreeMap::new(), c.clone());
            for &(v, e) in m.factors() {
                let (a, b) = self.order.generator_pair(v.index() as usize);
                let mut char_ab = BTreeMap::new();
                char_ab.insert(a, 1);
                char_ab.insert(b, -1);
                let u = LaurentPoly::one_term(char_ab, Int::ONE).add(&LaurentPoly::one_term(BTreeMap::new(), -Int::ONE));
                for _ in 0..e {
                    term = term.mul(&u);
                }
            }
            out = out.add(&term);
        }
        Some(out)
    }
}

/// Laurent polynomial in the characters `e^{y_i}`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LaurentPoly(BTreeMap<BTreeMap<i64, i64>, Int>);

impl LaurentPoly {
    fn one_term(exps: BTreeMap<i64, i64>, c: Int) -> LaurentPoly {
        let mut map = BTreeMap::new();
        if !c.is_zero() {
            map.insert(exps, c);
        }
        LaurentPoly(map)
    }

    fn add(&self, other: &LaurentPoly) -> LaurentPoly {
        let mut out = self.0.clone();
        for (k, c) in &other.0 {
            let slot = out.entry(k.clone()).or_insert(Int::ZERO);
            *slot += c;
        }
        out.retain(|_, c| !c.is_zero());
        LaurentPoly(out)
    }

    fn mul(&self, other: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::default();
        for (k1, c1) in &self.0 {
            for (k2, c2) in &other.0 {
                let mut k = k1.clone();
                for (&i, &e) in k2 {
                    *k.entry(i).or_insert(0) += e;
                }
                k.retain(|_, e| *e != 0);
                out = out.add(&LaurentPoly::one_term(k, c1 * c2));
            }
        }
        out
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BTreeMap<i64, i64>, &Int)> {
        self.0.iter()
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        for (n, (exps, c)) in self.0.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (n, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if exps.is_empty() {
                write!(f, "{abs}")?;
                continue;
            }
            if !abs.is_one() {
                write!(f, "{abs}*")?;
            }
            let mut exponent = String::new();
            for (i, (&idx, &e)) in exps.iter().enumerate() {
                let sign = if e < 0 { "-" } else if i > 0 { "+" } else { "" };
                let mag = if e.abs() == 1 { String::new() } else { e.abs().to_string() };
                exponent.push_str(&format!("{sign}{mag}y{idx}"));
            }
            write!(f, "e^({exponent})")?;
        }
        Ok(())
    }
}

impl Serialize for PositivityCertificate {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Term {
            mono: BTreeMap<String, u32>,
            coeff: String,
        }
        let mut map = s.serialize_map(None)?;
        map.serialize_entry("status", &self.status)?;
        map.serialize_entry("generators", &self.generators())?;
        let expansion: Vec<Term> =
            self.terms().into_iter().map(|(mono, c)| Term { mono, coeff: c.to_string() }).collect();
        map.serialize_entry("expansion", &expansion)?;
        if let Some(r) = &self.reason {
            map.serialize_entry("reason", r)?;
        }
        if let Some((m, c)) = &self.offending {
            let label: BTreeMap<String, u32> =
                m.factors().iter().map(|&(v, e)| (self.generator_label(v.index() as usize), e)).collect();
            map.serialize_entry("offending", &Term { mono: label, coeff: c.to_string() })?;
        }
        if let Some(n) = self.trunc {
            map.serialize_entry("N", &n)?;
            map.serialize_entry("terminated", &self.terminated)?;
        }
        map.end()
    }
}

fn check_variables(p: &GradedPoly, family: Family, order: &PrecOrder) -> Result<()> {
    for v in p.variables() {
        if v.is_beta() && family == Family::Z {
            continue;
        }
        if v.family() != family || order.position(v.index()).is_none() {
            return Err(Error::Parse(format!(
                "unexpected variable {v} (expected {family:?} variables in the window (-{m},{m}])",
                m = order.m
            )));
        }
    }
    Ok(())
}

fn first_negative(f: &GradedPoly) -> Option<(Monomial, Int)> {
    f.terms().find(|(_, c)| c.is_negative()).map(|(m, c)| (m.clone(), c.clone()))
}

fn finish(
    mut cert: PositivityCertificate,
    shift_invariant: bool,
    value: &GradedPoly,
) -> PositivityCertificate {
    if !shift_invariant {
        cert.status = Status::Rejected;
        cert.reason = Some("not shift-invariant".into());
    } else if let Some(neg) = first_negative(value) {
        cert.status = Status::Rejected;
        cert.reason = Some("negative coefficient".into());
        cert.offending = Some(neg);
    } else if value.terms().any(|(m, _)| m.factors().iter().any(|(v, _)| v.family() != Family::T)) {
        cert.status = Status::Rejected;
        cert.reason = Some("not a polynomial in the generators".into());
    }
    cert
}

/// `ĉ ∈ ℤ≥0[y_j − y_i : i ≺ j]`, by the substitution
/// `y_{σ(k)} = −(g_k + ⋯ + g_{L−1})`, `y_{σ(L)} = 0`.
pub fn certify_cohomology(p: &GradedPoly, order: &PrecOrder) -> Result<PositivityCertificate> {
    check_variables(p, Family::Y, order)?;
    let chain = order.chain();
    let gens = order.generator_count();
    let mut to_g: FxHashMap<Var, GradedPoly> = FxHashMap::default();
    let mut tail = GradedPoly::zero();
    for k in (0..chain.len()).rev() {
        to_g.insert(Var::y(chain[k]), -&tail);
        if k > 0 {
            tail = &tail + &GradedPoly::var(generator(k - 1));
        }
    }
    let expansion = p.substitute(&to_g).with_trunc(None);
    let back_map: FxHashMap<Var, GradedPoly> = (0..gens)
        .map(|k| (generator(k), &GradedPoly::var(Var::y(chain[k + 1])) - &GradedPoly::var(Var::y(chain[k]))))
        .collect();
    let shift_invariant = expansion.substitute(&back_map) == p.clone().with_trunc(None);
    let cert = PositivityCertificate {
        status: Status::Certified,
        cone: Cone::Cohomology,
        order: order.clone(),
        expansion: expansion.clone(),
        reason: None,
        offending: None,
        trunc: None,
        terminated: true,
    };
    Ok(finish(cert, shift_invariant, &expansion))
}

/// `(−1)^e·d ∈ ℤ≥0[e^{y_i−y_j} − 1 : i ≺ j]` at `β = −1`.
///
/// `d` is rewritten in `G_k = z_{σ(k+1)} ⊖ z_{σ(k)}` through
/// `z_{σ(k)} = z_{σ(k+1)} ⊖ G_k`, `z_{σ(L)} = 0`; at `β = −1`, `G_k = −u_k`.
/// The expansion is exact when it stays below `β^N`; otherwise it is
/// certified through `β^N` and `terminated` is false.
pub fn certify_ktheory(d: &GradedPoly, sign_exponent: i64, order: &PrecOrder) -> Result<PositivityCertificate> {
    check_variables(d, Family::Z, order)?;
    let n = d
        .trunc()
        .ok_or_else(|| Error::TruncationTooLow("K-theory certification needs a truncated (β, z)-series".into()))?;
    let chain = order.chain();
    let gens = order.generator_count();
    let mut to_g: FxHashMap<Var, GradedPoly> = FxHashMap::default();
    let mut next = GradedPoly::zero().with_trunc(Some(n));
    to_g.insert(Var::z(chain[chain.len() - 1]), next.clone());
    for k in (0..gens).rev() {
        next = ominus(&next, &GradedPoly::var(generator(k)), n);
        to_g.insert(Var::z(chain[k]), next.clone());
    }
    let in_g = d.substitute(&to_g).truncated(n);
    let back_map: FxHashMap<Var, GradedPoly> = (0..gens)
        .map(|k| {
            let (a, b) = (GradedPoly::var(Var::z(chain[k + 1])), GradedPoly::var(Var::z(chain[k])));
            (generator(k), ominus(&a, &b, n))
        })
        .collect();
    let shift_invariant = in_g.substitute(&back_map).truncated(n) == d.truncated(n);
    let terminated = in_g.is_zero() || in_g.max_beta_exp() < n;

    let sign = if sign_exponent.rem_euclid(2) == 0 { 1 } else { -1 };
    let negate: FxHashMap<Var, GradedPoly> = (0..gens).map(|k| (generator(k), -GradedPoly::var(generator(k)))).collect();
    let value = in_g
        .evaluate(|v| v.is_beta().then_some(-1))
        .with_trunc(None)
        .substitute(&negate)
        .scale(&Int::from(sign));
    let cert = PositivityCertificate {
        status: Status::Certified,
        cone: Cone::KTheory,
        order: order.clone(),
        expansion: value.clone(),
        reason: None,
        offending: None,
        trunc: Some(n),
        terminated,
    };
    Ok(finish(cert, shift_invariant, &value))
}

/// Certifies every entry of a coproduct table with the sign `(−1)^{|μ|+ℓ(v)−ℓ(w)}`.
pub fn certify_table(table: &CoproductTable) -> Result<Vec<((Partition, Permutation), PositivityCertificate)>> {
    let order = PrecOrder::new(table.m)?;
    let mut out = Vec::with_capacity(table.entries.len());
    for ((mu, v), coeff) in &table.entries {
        let cert = match table.theory {
            crate::families::Theory::H => certify_cohomology(coeff, &order)?,
            crate::families::Theory::K => {
                let e = mu.size() as i64 + v.length() as i64 - table.w.length() as i64;
                certify_ktheory(coeff, e, &order)?
            }
        };
        out.push(((mu.clone(), v.clone()), cert));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> GradedPoly {
        s.parse().unwrap()
    }

    #[test]
    fn chain_order() {
        let o = PrecOrder::new(2).unwrap();
        assert_eq!(o.chain(), &[1, 2, -1, 0]);
        assert!(o.precedes(2, -1) && o.precedes(1, 0) && !o.precedes(0, 1));
    }

    #[test]
    fn cohomology_examples() {
        let o = PrecOrder::new(2).unwrap();
        let c = certify_cohomology(&v("y[-1] - y[1]"), &o).unwrap();
        assert!(c.is_certified());
        assert_eq!(c.expansion, &GradedPoly::var(generator(0)) + &GradedPoly::var(generator(1)));
        assert!(certify_cohomology(&GradedPoly::zero(), &o).unwrap().is_certified());
        let r = certify_cohomology(&v("y[1] - y[-1]"), &o).unwrap();
        assert_eq!(r.status, Status::Rejected);
        assert!(r.offending.is_some());
        let r = certify_cohomology(&v("y[1]"), &o).unwrap();
        assert_eq!(r.reason.as_deref(), Some("not shift-invariant"));
    }

    fn zm(i: i64, j: i64, n: u32) -> GradedPoly {
        ominus(&GradedPoly::var(Var::z(i)), &GradedPoly::var(Var::z(j)), n)
    }

    #[test]
    fn ktheory_single_difference() {
        let o = PrecOrder::new(2).unwrap();
        let c = certify_ktheory(&zm(0, 1, 6), -1, &o).unwrap();
        assert!(c.is_certified(), "{:?}", c.reason);
        assert!(c.terminated);
        let u = |k| GradedPoly::var(generator(k));
        let one = GradedPoly::one();
        let want = &(&(&(&one + &u(0)) * &(&one + &u(1))) * &(&one + &u(2))) - &one;
        assert_eq!(c.expansion, want);
        let ey = c.e_y_form().unwrap();
        assert_eq!(ey.to_string(), "-1 + e^(-y0+y1)");
    }

    #[test]
    fn ktheory_rejections() {
        let o = PrecOrder::new(2).unwrap();
        let r = certify_ktheory(&zm(1, 0, 6), -1, &o).unwrap();
        assert_eq!(r.status, Status::Rejected);
        assert!(r.offending.is_some());
        let r = certify_ktheory(&GradedPoly::var(Var::z(1)).with_trunc(Some(6)), 0, &o).unwrap();
        assert_eq!(r.reason.as_deref(), Some("not shift-invariant"));
        assert!(certify_ktheory(&zm(0, 1, 6).with_trunc(None), -1, &o).is_err());
        assert!(certify_ktheory(&GradedPoly::var(Var::z(5)).with_trunc(Some(6)), 0, &o).is_err());
    }

    #[test]
    fn certificate_json_shape() {
        let o = PrecOrder::new(1).unwrap();
        let c = certify_ktheory(&zm(0, 1, 4), -1, &o).unwrap();
        let j = serde_json::to_value(&c).unwrap();
        assert_eq!(j["status"], "certified");
        assert_eq!(j["generators"][0], "u(1,0)");
        assert_eq!(j["expansion"][0]["mono"]["u(1,0)"], 1);
        assert_eq!(j["expansion"][0]["coeff"], "1");
        assert_eq!(j["terminated"], true);
    }
}
