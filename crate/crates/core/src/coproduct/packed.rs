//! Vexillary Grothendieck determinants with `x` at integer points, over
//! `ℤ[β, z]/(β^{N+1})` with packed exponents.

use num_bigint::BigInt;
use rustc_hash::FxHashMap;

use crate::chern_series::order_for;
use crate::error::{Error, Result};
use crate::permutation::Triple;
use crate::poly::{GradedPoly, Int, Monomial, Var};

const SLOT_BITS: u32 = 8;
const MAX_Z: usize = 7;

fn overflow() -> Error {
    Error::Inconsistent("coefficient overflow in point evaluation".into())
}

/// Monomials `β^e z_{lo}^{a_0} ⋯` packed one byte per variable, β lowest.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub(crate) struct Packed(Vec<(u64, i128)>);

pub(crate) fn beta_exp(key: u64) -> u32 {
    (key & 0xFF) as u32
}

fn z_exps(key: u64) -> impl Iterator<Item = (usize, u32)> {
    (0..MAX_Z).map(move |slot| (slot, ((key >> (SLOT_BITS * (slot as u32 + 1))) & 0xFF) as u32))
}

/// `z`-degree plus `β`-exponent.
pub(crate) fn weight(key: u64) -> u32 {
    beta_exp(key) + z_exps(key).map(|(_, e)| e).sum::<u32>()
}

/// Degree with `deg z = 1`, `deg β = −1`.
pub(crate) fn degree(key: u64) -> i64 {
    z_exps(key).map(|(_, e)| e as i64).sum::<i64>() - beta_exp(key) as i64
}

pub(crate) fn to_monomial(key: u64, z_lo: i64) -> Monomial {
    let mut factors = vec![(Var::beta(), beta_exp(key))];
    factors.extend(z_exps(key).map(|(slot, e)| (Var::z(z_lo + slot as i64), e)));
    Monomial::from_factors(factors)
}

pub(crate) fn to_i128(c: &Int) -> Result<i128> {
    i128::try_from(&c.to_bigint()).map_err(|_| overflow())
}

impl Packed {
    pub(crate) fn terms(&self) -> &[(u64, i128)] {
        &self.0
    }

    pub(crate) fn constant(c: i128) -> Packed {
        if c == 0 {
            Packed::default()
        } else {
            Packed(vec![(0, c)])
        }
    }

    pub(crate) fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub(crate) fn from_map(map: FxHashMap<u64, i128>) -> Packed {
        Packed(map.into_iter().filter(|&(_, c)| c != 0).collect())
    }

    pub(crate) fn add(&self, other: &Packed, sign: i128) -> Result<Packed> {
        let mut map: FxHashMap<u64, i128> = self.0.iter().copied().collect();
        for &(k, c) in &other.0 {
            let slot = map.entry(k).or_default();
            *slot = c.checked_mul(sign).and_then(|c| slot.checked_add(c)).ok_or_else(overflow)?;
        }
        Ok(Packed::from_map(map))
    }

    pub(crate) fn mul(&self, other: &Packed, n: u32) -> Result<Packed> {
        let mut map: FxHashMap<u64, i128> = FxHashMap::default();
        self.mul_into(other, n, 1, &mut map)?;
        Ok(Packed::from_map(map))
    }

    /// `map += sign·self·other`.
    pub(crate) fn mul_into(&self, other: &Packed, n: u32, sign: i128, map: &mut FxHashMap<u64, i128>) -> Result<()> {
        for &(k1, c1) in &self.0 {
            let b1 = beta_exp(k1);
            let c1 = c1 * sign;
            for &(k2, c2) in &other.0 {
                if b1 + beta_exp(k2) > n {
                    continue;
                }
                let p = c1.checked_mul(c2).ok_or_else(overflow)?;
                let slot = map.entry(k1 + k2).or_default();
                *slot = slot.checked_add(p).ok_or_else(overflow)?;
            }
        }
        Ok(())
    }

    /// `c·β^d·self`.
    pub(crate) fn shifted(&self, d: u32, c: i128, n: u32) -> Result<Packed> {
        let mut out = Vec::with_capacity(self.0.len());
        for &(k, v) in &self.0 {
            if beta_exp(k) + d <= n {
                out.push((k + d as u64, v.checked_mul(c).ok_or_else(overflow)?));
            }
        }
        Ok(Packed(out))
    }

    /// Divides every coefficient by `d`; errors unless exact.
    pub(crate) fn div_exact(&self, d: i64) -> Result<Packed> {
        let d = d as i128;
        if d == 0 || self.0.iter().any(|&(_, c)| c % d != 0) {
            return Err(Error::Inconsistent(format!("point value not divisible by {d}")));
        }
        Ok(Packed(self.0.iter().map(|&(k, c)| (k, c / d)).collect()))
    }

    pub(crate) fn to_graded(&self, z_lo: i64, n: Option<u32>) -> GradedPoly {
        GradedPoly::from_terms(self.0.iter().map(|&(k, c)| (to_monomial(k, z_lo), Int::from(BigInt::from(c)))), n)
    }
}

type Series = Vec<Packed>;

fn series_mul(a: &Series, b: &Series, n: u32) -> Result<Series> {
    let order = a.len().min(b.len());
    let mut out: Vec<FxHashMap<u64, i128>> = vec![FxHashMap::default(); order];
    for (i, ai) in a.iter().enumerate().take(order) {
        for (j, bj) in b.iter().enumerate().take(order - i) {
            ai.mul_into(bj, n, 1, &mut out[i + j])?;
        }
    }
    Ok(out.into_iter().map(Packed::from_map).collect())
}

/// Evaluation data for one point: `u_b` as `z`-variables or zero, `x_a` as integers.
pub(crate) struct PointData<'a> {
    /// Lowest `z` index that may occur.
    pub z_lo: i64,
    /// `u_b` for `b` from `lo`: `Some(j)` for `z_j`, `None` for zero.
    pub u: &'a dyn Fn(i64) -> Option<i64>,
    /// `x_a` for `a` from `lo`.
    pub x: &'a dyn Fn(i64) -> i64,
    /// First index of both products.
    pub lo: i64,
    pub n: u32,
}

impl PointData<'_> {
    /// `∏_{b=lo}^{q}(1+u_b t) / ∏_{a=lo}^{p}(1+x̃_a t)`.
    fn row(&self, p: i64, q: i64, order: usize) -> Result<Series> {
        let n = self.n;
        let len = order + 1;
        let mut acc: Series = vec![Packed::default(); len];
        acc[0] = Packed::constant(1);
        for b in self.lo..=q {
            if let Some(j) = (self.u)(b) {
                let slot = (j - self.z_lo) as usize;
                if slot >= MAX_Z {
                    return Err(Error::IndexOutOfRange { index: j, range: "at most 7 z variables".into() });
                }
                let mut lin: Series = vec![Packed::default(); len];
                lin[0] = Packed::constant(1);
                if len > 1 {
                    lin[1] = Packed(vec![(1u64 << (SLOT_BITS * (slot as u32 + 1)), 1)]);
                }
                acc = series_mul(&acc, &lin, n)?;
            }
        }
        // 1/(1 + x̃_a t) = Σ_k (x_a/(1+βx_a))^k t^k, and x/(1+βx) = Σ_j (−β)^j x^{j+1}.
        for a in self.lo..=p {
            let xa = (self.x)(a) as i128;
            let mut r = Vec::new();
            let mut pow = xa;
            for j in 0..=n {
                let c = if j % 2 == 0 { pow } else { -pow };
                if c != 0 {
                    r.push((j as u64, c));
                }
                pow = pow.checked_mul(xa).ok_or_else(overflow)?;
            }
            let ratio = Packed(r);
            let mut geo: Series = vec![Packed::default(); len];
            geo[0] = Packed::constant(1);
            for k in 1..len {
                geo[k] = geo[k - 1].mul(&ratio, n)?;
            }
            acc = series_mul(&acc, &geo, n)?;
        }
        Ok(acc)
    }
}

fn determinant(rows: &[Vec<Packed>], n: u32) -> Result<Packed> {
    let mut layer: FxHashMap<u32, Packed> = FxHashMap::default();
    layer.insert(0, Packed::constant(1));
    for row in rows {
        let mut next: FxHashMap<u32, FxHashMap<u64, i128>> = FxHashMap::default();
        for (&mask, acc) in &layer {
            for (j, entry) in row.iter().enumerate() {
                if mask & (1 << j) != 0 || entry.is_zero() {
                    continue;
                }
                let sign = if (mask >> (j + 1)).count_ones() % 2 == 1 { -1 } else { 1 };
                acc.mul_into(entry, n, sign, next.entry(mask | (1 << j)).or_default())?;
            }
        }
        layer = next.into_iter().map(|(k, v)| (k, Packed::from_map(v))).filter(|(_, v)| !v.is_zero()).collect();
    }
    Ok(layer.into_values().next().unwrap_or_default())
}

/// The Grothendieck determinant of `t` at one point.
pub(crate) fn vexillary_at(t: &Triple, data: &PointData<'_>) -> Result<Packed> {
    t.validate()?;
    let n = data.n;
    let lambda = t.lambda_parts();
    let s = lambda.len() as i64;
    let mut cache: FxHashMap<usize, Series> = FxHashMap::default();
    let mut rows = Vec::with_capacity(s as usize);
    for i in 1..=s {
        let cond = t.condition_of_row(i);
        let lam = lambda[(i - 1) as usize];
        if let std::collections::hash_map::Entry::Vacant(slot) = cache.entry(cond) {
            let order = order_for(t, cond, &lambda, n as i64);
            slot.insert(data.row(t.p[cond], t.q[cond], order)?);
        }
        let series = &cache[&cond];
        let mut row = Vec::with_capacity(s as usize);
        for j in 1..=s {
            let base = lam - i + j;
            let mut acc = Packed::default();
            for d in 0..=n as i64 {
                let k = base + d;
                if k < 0 || k as usize >= series.len() {
                    continue;
                }
                let w = if lam == 0 {
                    if d == 0 { 1 } else { continue }
                } else {
                    Int::binomial((lam - 1 + d) as u64, d as u64).to_i64().ok_or_else(overflow)? as i128
                };
                acc = acc.add(&series[k as usize].shifted(d as u32, w, n)?, 1)?;
            }
            row.push(acc);
        }
        rows.push(row);
    }
    determinant(&rows, n)
}
