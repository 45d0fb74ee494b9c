//! Exact sparse multivariate polynomials over the variable families
//! `β, c, c', x, y, z, t`, with optional β-truncation.
//!
//! A [`GradedPoly`] with `trunc = Some(n)` is an element of
//! `ℤ[vars][β]/(β^{n+1})`: terms with β-exponent above `n` have been discarded.
//! Arithmetic between values of different orders works at the smaller one.

mod formal;
mod int;
mod text;
mod var;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use rustc_hash::FxHashMap;

pub use formal::{ominus, oplus, ominus_unary, x_tilde, FormalOp};
pub use int::Int;
pub use var::{Family, Monomial, Var};

use crate::error::{Error, Result};

/// Default β-truncation order.
pub const DEFAULT_TRUNC: u32 = 8;

fn min_trunc(a: Option<u32>, b: Option<u32>) -> Option<u32> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GradedPoly {
    /// Sorted by monomial, no zero coefficients.
    terms: Vec<(Monomial, Int)>,
    trunc: Option<u32>,
}

impl GradedPoly {
    pub fn zero() -> GradedPoly {
        GradedPoly::default()
    }

    pub fn one() -> GradedPoly {
        GradedPoly::constant(1)
    }

    pub fn constant(c: impl Into<Int>) -> GradedPoly {
        GradedPoly::monomial(Monomial::one(), c.into())
    }

    pub fn var(v: Var) -> GradedPoly {
        GradedPoly::monomial(Monomial::var(v), Int::ONE)
    }

    pub fn monomial(m: Monomial, c: Int) -> GradedPoly {
        if c.is_zero() {
            return GradedPoly::zero();
        }
        GradedPoly {
            terms: vec![(m, c)],
            trunc: None,
        }
    }

    pub fn beta() -> GradedPoly {
        GradedPoly::var(Var::beta())
    }

    /// Collects terms, combining repeated monomials and honoring `trunc`.
    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Int)>, trunc: Option<u32>) -> GradedPoly {
        let mut map: FxHashMap<Monomial, Int> = FxHashMap::default();
        for (m, c) in terms {
            if let Some(n) = trunc {
                if m.beta_exp() > n {
                    continue;
                }
            }
            *map.entry(m).or_default() += &c;
        }
        GradedPoly::from_map(map, trunc)
    }

    fn from_map(map: FxHashMap<Monomial, Int>, trunc: Option<u32>) -> GradedPoly {
        let mut terms: Vec<_> = map.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        GradedPoly { terms, trunc }
    }

    pub fn trunc(&self) -> Option<u32> {
        self.trunc
    }

    /// Returns a copy at order `min(self.trunc, n)`.
    pub fn truncated(&self, n: u32) -> GradedPoly {
        let trunc = min_trunc(self.trunc, Some(n));
        GradedPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.beta_exp() <= n)
                .cloned()
                .collect(),
            trunc,
        }
    }

    /// Marks the value as known only through `β^n` without it being a
    /// computation result (used for generic series inputs).
    pub fn with_trunc(mut self, trunc: Option<u32>) -> GradedPoly {
        if let Some(n) = trunc {
            self.terms.retain(|(m, _)| m.beta_exp() <= n);
        }
        self.trunc = trunc;
        self
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Int)> {
        self.terms.iter().map(|(m, c)| (m, c))
    }

    pub fn into_terms(self) -> Vec<(Monomial, Int)> {
        self.terms
    }

    /// Coefficient of a monomial.
    pub fn coeff(&self, m: &Monomial) -> Int {
        self.terms
            .binary_search_by(|t| t.0.cmp(m))
            .map(|i| self.terms[i].1.clone())
            .unwrap_or(Int::ZERO)
    }

    pub fn constant_term(&self) -> Int {
        self.coeff(&Monomial::one())
    }

    /// Degree if every term has the same graded degree (`None` for 0 or inhomogeneous).
    pub fn homogeneous_degree(&self) -> Option<i64> {
        let mut it = self.terms.iter().map(|(m, _)| m.degree());
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.homogeneous_degree().is_some()
    }

    pub fn max_beta_exp(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.beta_exp()).max().unwrap_or(0)
    }

    pub fn variables(&self) -> Vec<Var> {
        let mut vs: Vec<Var> = self
            .terms
            .iter()
            .flat_map(|(m, _)| m.factors().iter().map(|f| f.0))
            .collect();
        vs.sort();
        vs.dedup();
        vs
    }

    pub fn contains_family(&self, fam: Family) -> bool {
        self.terms
            .iter()
            .any(|(m, _)| m.factors().iter().any(|(v, _)| v.family() == fam))
    }

    pub fn scale(&self, c: &Int) -> GradedPoly {
        if c.is_zero() {
            return GradedPoly::zero().with_trunc(self.trunc);
        }
        GradedPoly {
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
            trunc: self.trunc,
        }
    }

    /// `c * m * self`.
    pub fn mul_term(&self, m: &Monomial, c: &Int) -> GradedPoly {
        if c.is_zero() {
            return GradedPoly::zero().with_trunc(self.trunc);
        }
        let limit = self.trunc;
        let mut terms: Vec<(Monomial, Int)> = self
            .terms
            .iter()
            .filter_map(|(mm, k)| {
                let p = mm.mul(m);
                match limit {
                    Some(n) if p.beta_exp() > n => None,
                    _ => Some((p, k * c)),
                }
            })
            .collect();
        // not order-preserving for sparse factor lists
        terms.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        GradedPoly { terms, trunc: limit }
    }

    fn merge(&self, other: &GradedPoly, negate: bool) -> GradedPoly {
        let trunc = min_trunc(self.trunc, other.trunc);
        let keep = |m: &Monomial| trunc.is_none_or(|n| m.beta_exp() <= n);
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            let ord = match (a.get(i), b.get(j)) {
                (Some(x), Some(y)) => x.0.cmp(&y.0),
                (Some(_), None) => std::cmp::Ordering::Less,
                _ => std::cmp::Ordering::Greater,
            };
            match ord {
                std::cmp::Ordering::Less => {
                    if keep(&a[i].0) {
                        out.push(a[i].clone());
                    }
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    if keep(&b[j].0) {
                        let c = if negate { -&b[j].1 } else { b[j].1.clone() };
                        out.push((b[j].0.clone(), c));
                    }
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    if keep(&a[i].0) {
                        let c = if negate { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                        if !c.is_zero() {
                            out.push((a[i].0.clone(), c));
                        }
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        GradedPoly { terms: out, trunc }
    }

    fn mul_impl(&self, other: &GradedPoly) -> GradedPoly {
        let trunc = min_trunc(self.trunc, other.trunc);
        if self.is_zero() || other.is_zero() {
            return GradedPoly::zero().with_trunc(trunc);
        }
        if other.terms.len() == 1 {
            let (m, c) = &other.terms[0];
            return self.mul_term(m, c).with_trunc(trunc);
        }
        if self.terms.len() == 1 {
            let (m, c) = &self.terms[0];
            return other.mul_term(m, c).with_trunc(trunc);
        }
        let mut map: FxHashMap<Monomial, Int> = FxHashMap::default();
        map.reserve(self.terms.len().max(other.terms.len()) * 2);
        for (m1, c1) in &self.terms {
            let b1 = m1.beta_exp();
            for (m2, c2) in &other.terms {
                if let Some(n) = trunc {
                    if b1 + m2.beta_exp() > n {
                        continue;
                    }
                }
                let p = c1 * c2;
                *map.entry(m1.mul(m2)).or_default() += &p;
            }
        }
        GradedPoly::from_map(map, trunc)
    }

    pub fn pow(&self, e: u32) -> GradedPoly {
        let mut acc = GradedPoly::one().with_trunc(self.trunc);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Simultaneous substitution of variables by polynomials.
    pub fn substitute(&self, assignment: &FxHashMap<Var, GradedPoly>) -> GradedPoly {
        let mut trunc = self.trunc;
        for v in assignment.values() {
            trunc = min_trunc(trunc, v.trunc);
        }
        let mut powers: FxHashMap<(Var, u32), GradedPoly> = FxHashMap::default();
        // group terms by the part that gets substituted
        let mut groups: FxHashMap<Monomial, Vec<(Monomial, Int)>> = FxHashMap::default();
        for (m, c) in &self.terms {
            let (sub, keep) = m.split(|v| assignment.contains_key(&v));
            groups.entry(sub).or_default().push((keep, c.clone()));
        }
        let mut acc = GradedPoly::zero().with_trunc(trunc);
        for (sub, rest) in groups {
            let mut factor = GradedPoly::one().with_trunc(trunc);
            for &(v, e) in sub.factors() {
                let p = powers
                    .entry((v, e))
                    .or_insert_with(|| assignment[&v].pow(e))
                    .clone();
                factor = &factor * &p;
                if factor.is_zero() {
                    break;
                }
            }
            if factor.is_zero() {
                continue;
            }
            let rest = GradedPoly::from_terms(rest, trunc);
            acc = &acc + &(&rest * &factor);
        }
        acc
    }

    /// Renames variables (must be injective on the variables present).
    pub fn rename(&self, f: impl Fn(Var) -> Var) -> GradedPoly {
        GradedPoly::from_terms(
            self.terms.iter().map(|(m, c)| {
                (Monomial::from_factors(m.factors().iter().map(|&(v, e)| (f(v), e))), c.clone())
            }),
            self.trunc,
        )
    }

    /// Sets every variable for which `f` returns `Some(k)` to the integer `k`.
    pub fn evaluate(&self, f: impl Fn(Var) -> Option<i64>) -> GradedPoly {
        let terms = self.terms.iter().map(|(m, c)| {
            let mut coeff = c.clone();
            let mut rest = Vec::new();
            for &(v, e) in m.factors() {
                match f(v) {
                    Some(k) => coeff = &coeff * &Int::from(k).pow(e),
                    None => rest.push((v, e)),
                }
            }
            (Monomial::from_factors(rest), coeff)
        });
        GradedPoly::from_terms(terms, self.trunc)
    }

    /// Groups terms by the part of the monomial made of variables satisfying
    /// `pred`, returning `key monomial -> polynomial in the other variables`.
    pub fn group_by(&self, pred: impl Fn(Var) -> bool) -> FxHashMap<Monomial, GradedPoly> {
        let mut groups: FxHashMap<Monomial, Vec<(Monomial, Int)>> = FxHashMap::default();
        for (m, c) in &self.terms {
            let (key, rest) = m.split(&pred);
            groups.entry(key).or_default().push((rest, c.clone()));
        }
        groups
            .into_iter()
            .map(|(k, v)| (k, GradedPoly::from_terms(v, self.trunc)))
            .collect()
    }

    /// Keeps only terms satisfying `pred`.
    pub fn filter_terms(&self, pred: impl Fn(&Monomial) -> bool) -> GradedPoly {
        GradedPoly {
            terms: self.terms.iter().filter(|(m, _)| pred(m)).cloned().collect(),
            trunc: self.trunc,
        }
    }

    /// Coefficient of `β^k` (a β-free polynomial, exact).
    pub fn beta_coeff(&self, k: u32) -> GradedPoly {
        GradedPoly::from_terms(
            self.terms
                .iter()
                .filter(|(m, _)| m.beta_exp() == k)
                .map(|(m, c)| (m.take(Var::beta()).1, c.clone())),
            None,
        )
    }

    /// Equality of the parts both sides know (terms up to the smaller order).
    pub fn eq_up_to_trunc(&self, other: &GradedPoly) -> bool {
        (self - other).is_zero()
    }

    /// Exact quotient `self / g`; errors if a remainder is left.
    pub fn exact_divide(&self, g: &GradedPoly) -> Result<GradedPoly> {
        if g.is_zero() {
            return Err(Error::Inconsistent("division by zero".into()));
        }
        if let Some((a, b)) = g.as_var_difference() {
            return self.divide_by_difference(a, b);
        }
        if g.terms.len() == 1 && g.terms[0].1.is_one() && g.trunc.is_none() {
            let m = &g.terms[0].0;
            let mut terms = Vec::with_capacity(self.terms.len());
            for (mm, c) in &self.terms {
                let q = mm
                    .div(m)
                    .ok_or_else(|| Error::Inconsistent(format!("{mm} not divisible by {m}")))?;
                terms.push((q, c.clone()));
            }
            return Ok(GradedPoly::from_terms(terms, self.trunc));
        }
        self.long_divide(g)
    }

    /// Divides every coefficient by `d`; errors unless all divisions are exact.
    pub fn div_exact_int(&self, d: i64) -> Result<GradedPoly> {
        if d == 0 {
            return Err(Error::Inconsistent("division by zero".into()));
        }
        let d_big = BigInt::from(d);
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let q = match c.to_i64() {
                Some(v) if v % d == 0 => Int::from(v / d),
                Some(_) => return Err(Error::Inconsistent(format!("{c} not divisible by {d}"))),
                None => {
                    let (q, r) = c.to_bigint().div_rem(&d_big);
                    if !r.is_zero() {
                        return Err(Error::Inconsistent(format!("{c} not divisible by {d}")));
                    }
                    Int::from(q)
                }
            };
            terms.push((m.clone(), q));
        }
        Ok(GradedPoly { terms, trunc: self.trunc })
    }

    /// `Some((a, b))` if this is exactly `a - b` for variables `a`, `b`.
    fn as_var_difference(&self) -> Option<(Var, Var)> {
        if self.terms.len() != 2 || self.trunc.is_some() {
            return None;
        }
        let single = |m: &Monomial| match m.factors() {
            [(v, 1)] => Some(*v),
            _ => None,
        };
        let (m0, c0) = &self.terms[0];
        let (m1, c1) = &self.terms[1];
        let (v0, v1) = (single(m0)?, single(m1)?);
        match (c0.to_i64()?, c1.to_i64()?) {
            (1, -1) => Some((v0, v1)),
            (-1, 1) => Some((v1, v0)),
            _ => None,
        }
    }

    /// Division by `a - b`: each bihomogeneous slice in `(a, b)` is divided by
    /// a running-sum recurrence; a nonzero slice sum means inexact.
    pub fn divide_by_difference(&self, a: Var, b: Var) -> Result<GradedPoly> {
        let mut slices: FxHashMap<(Monomial, u32), Vec<(u32, Int)>> = FxHashMap::default();
        for (m, c) in &self.terms {
            let (ea, r) = m.take(a);
            let (eb, rest) = r.take(b);
            slices.entry((rest, ea + eb)).or_default().push((ea, c.clone()));
        }
        let mut out = Vec::new();
        for ((rest, d), mut coeffs) in slices {
            coeffs.sort_unstable_by_key(|x| x.0);
            if d == 0 {
                return Err(Error::Inconsistent(format!(
                    "term {rest} free of {a},{b} cannot be divided by {a} - {b}"
                )));
            }
            // P = Σ c_p a^p b^{d-p};  Q = Σ q_p a^p b^{d-1-p} with q_p = q_{p-1} - c_p
            let mut q = Int::ZERO;
            let mut idx = 0;
            for p in 0..d {
                if idx < coeffs.len() && coeffs[idx].0 == p {
                    q -= &coeffs[idx].1;
                    idx += 1;
                }
                if !q.is_zero() {
                    let m = Monomial::from_factors([(a, p), (b, d - 1 - p)]).mul(&rest);
                    out.push((m, q.clone()));
                }
            }
            let top = if idx < coeffs.len() { coeffs[idx].1.clone() } else { Int::ZERO };
            if (&q - &top).is_zero() {
                continue;
            }
            return Err(Error::Inconsistent(format!(
                "inexact division by {a} - {b} (slice {rest}, degree {d})"
            )));
        }
        Ok(GradedPoly::from_terms(out, self.trunc))
    }

    fn long_divide(&self, g: &GradedPoly) -> Result<GradedPoly> {
        let lead = g
            .terms
            .iter()
            .max_by(|a, b| a.0.lex_cmp(&b.0))
            .cloned()
            .expect("nonzero divisor");
        let mut rem = self.clone();
        let mut quot = GradedPoly::zero().with_trunc(min_trunc(self.trunc, g.trunc));
        let limit = 1_000_000usize;
        for _ in 0..limit {
            let Some((m, c)) = rem.terms.iter().max_by(|a, b| a.0.lex_cmp(&b.0)).cloned() else {
                return Ok(quot);
            };
            let qm = m
                .div(&lead.0)
                .ok_or_else(|| Error::Inconsistent(format!("inexact division: {m} by {}", lead.0)))?;
            let k = c.to_bigint();
            let l = lead.1.to_bigint();
            if &k % &l != num_bigint::BigInt::from(0) {
                return Err(Error::Inconsistent("inexact division: coefficient".into()));
            }
            let qc = Int::from(k / l);
            let t = GradedPoly::monomial(qm, qc);
            rem = &rem - &(&t * g);
            quot = &quot + &t;
        }
        Err(Error::Inconsistent("division did not terminate".into()))
    }
}

impl<'a> Add<&'a GradedPoly> for &'a GradedPoly {
    type Output = GradedPoly;
    fn add(self, rhs: &GradedPoly) -> GradedPoly {
        self.merge(rhs, false)
    }
}

impl<'a> Sub<&'a GradedPoly> for &'a GradedPoly {
    type Output = GradedPoly;
    fn sub(self, rhs: &GradedPoly) -> GradedPoly {
        self.merge(rhs, true)
    }
}

impl<'a> Mul<&'a GradedPoly> for &'a GradedPoly {
    type Output = GradedPoly;
    fn mul(self, rhs: &GradedPoly) -> GradedPoly {
        self.mul_impl(rhs)
    }
}

impl Add for GradedPoly {
    type Output = GradedPoly;
    fn add(self, rhs: GradedPoly) -> GradedPoly {
        &self + &rhs
    }
}

impl Sub for GradedPoly {
    type Output = GradedPoly;
    fn sub(self, rhs: GradedPoly) -> GradedPoly {
        &self - &rhs
    }
}

impl Mul for GradedPoly {
    type Output = GradedPoly;
    fn mul(self, rhs: GradedPoly) -> GradedPoly {
        &self * &rhs
    }
}

impl Neg for &GradedPoly {
    type Output = GradedPoly;
    fn neg(self) -> GradedPoly {
        GradedPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
            trunc: self.trunc,
        }
    }
}

impl Neg for GradedPoly {
    type Output = GradedPoly;
    fn neg(self) -> GradedPoly {
        -&self
    }
}

impl From<Var> for GradedPoly {
    fn from(v: Var) -> Self {
        GradedPoly::var(v)
    }
}

impl fmt::Debug for GradedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")?;
        if let Some(n) = self.trunc {
            write!(f, " + O(b^{})", n + 1)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: i64) -> GradedPoly {
        GradedPoly::var(Var::x(i))
    }
    fn y(i: i64) -> GradedPoly {
        GradedPoly::var(Var::y(i))
    }
    fn c(k: i64) -> GradedPoly {
        GradedPoly::var(Var::c(k))
    }

    #[test]
    fn difference_of_squares() {
        let f = &(&x(1) + &y(0)) * &(&x(1) - &y(0));
        assert_eq!(f, &(&x(1) * &x(1)) - &(&y(0) * &y(0)));
        assert_eq!(&f * &GradedPoly::one(), f);
    }

    #[test]
    fn truncation_min_rule() {
        let b = GradedPoly::beta();
        let f = (&GradedPoly::one() + &(&b * &c(1))).with_trunc(Some(2));
        let g = (&b.pow(2) * &c(2)).with_trunc(Some(4));
        let p = &f * &g;
        assert_eq!(p.trunc(), Some(2));
        assert_eq!(p, (&b.pow(2) * &c(2)).with_trunc(Some(2)));
    }

    #[test]
    fn exact_division_examples() {
        let num = &(&x(1) * &x(1)) - &(&x(2) * &x(2));
        assert_eq!(num.exact_divide(&(&x(1) - &x(2))).unwrap(), &x(1) + &x(2));
        assert_eq!(num.exact_divide(&GradedPoly::one()).unwrap(), num);
        let num = &(&x(0) * &y(1)) - &(&x(1) * &y(1));
        assert_eq!(num.exact_divide(&(&x(0) - &x(1))).unwrap(), y(1));
        assert!(x(1).exact_divide(&(&x(1) - &x(2))).is_err());
        // general long division path
        let g = &(&x(1) * &y(1)) + &c(2);
        let q = &x(3) - &(&c(1) * &y(2));
        assert_eq!((&g * &q).exact_divide(&g).unwrap(), q);
    }

    #[test]
    fn substitution() {
        let f = &(&x(1) * &x(1)) + &(&c(2) * &y(0));
        let mut a = FxHashMap::default();
        a.insert(Var::x(1), &y(0) + &GradedPoly::one());
        a.insert(Var::c(2), GradedPoly::zero());
        let g = f.substitute(&a);
        let e = &(&y(0) + &GradedPoly::one()) * &(&y(0) + &GradedPoly::one());
        assert_eq!(g, e);
        assert_eq!(f.substitute(&FxHashMap::default()), f);
    }

    #[test]
    fn homogeneity() {
        let b = GradedPoly::beta();
        let g = &c(1) + &(&b * &c(2));
        assert_eq!(g.homogeneous_degree(), Some(1));
        assert_eq!((&g * &x(3)).homogeneous_degree(), Some(2));
        assert_eq!((&g + &GradedPoly::one()).homogeneous_degree(), None);
    }
}
