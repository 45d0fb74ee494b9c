//! Power series in `t` over [`GradedPoly`], the row series `c(i)` and
//! `c^β(i)`, and exact determinants.

use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::permutation::Triple;
use crate::poly::{x_tilde, GradedPoly, Int, Monomial, Var};

/// A series `Σ_k a_k t^k`, stored through a fixed `t`-order.
#[derive(Clone, Debug, PartialEq)]
pub struct TSeries {
    coeffs: Vec<GradedPoly>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesOp {
    Mul,
    Div,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Variant {
    /// Cohomology: factors `(1 − x_a t)`, `(1 + y_b t)`.
    Schubert,
    /// K-theory: factors `(1 + x̃_a t)`, `(1 + z_b t)`.
    Grothendieck,
}

impl TSeries {
    pub fn one(order: usize) -> TSeries {
        TSeries::from_coeffs(vec![GradedPoly::one()], order)
    }

    /// Pads or cuts `coeffs` to exactly `order + 1` entries.
    pub fn from_coeffs(mut coeffs: Vec<GradedPoly>, order: usize) -> TSeries {
        coeffs.resize(order + 1, GradedPoly::zero());
        TSeries { coeffs }
    }

    /// `1 + c_1 t + c_2 t² + ⋯`.
    pub fn generic_c(order: usize) -> TSeries {
        let coeffs = (0..=order)
            .map(|k| if k == 0 { GradedPoly::one() } else { GradedPoly::var(Var::c(k as i64)) })
            .collect();
        TSeries { coeffs }
    }

    /// `1 + f t`.
    pub fn linear(f: GradedPoly, order: usize) -> TSeries {
        TSeries::from_coeffs(vec![GradedPoly::one(), f], order)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `t^k`; zero for negative `k`.
    pub fn coeff(&self, k: i64) -> GradedPoly {
        if k < 0 {
            return GradedPoly::zero();
        }
        self.coeffs.get(k as usize).cloned().unwrap_or_else(|| {
            panic!("t-order {k} requested from a series computed through {}", self.order())
        })
    }

    pub fn coeffs(&self) -> &[GradedPoly] {
        &self.coeffs
    }

    pub fn mul(&self, other: &TSeries) -> TSeries {
        let n = self.order().min(other.order());
        let mut out = vec![GradedPoly::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(n + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(n + 1 - i) {
                if !b.is_zero() {
                    out[i + j] = &out[i + j] + &(a * b);
                }
            }
        }
        TSeries { coeffs: out }
    }

    pub fn inverse(&self) -> Result<TSeries> {
        if !self.coeffs[0].is_one() {
            return Err(Error::NonUnitConstant);
        }
        let n = self.order();
        let mut inv = vec![GradedPoly::one()];
        for k in 1..=n {
            let mut acc = GradedPoly::zero();
            for j in 1..=k {
                if !self.coeffs[j].is_zero() {
                    acc = &acc - &(&self.coeffs[j] * &inv[k - j]);
                }
            }
            inv.push(acc);
        }
        Ok(TSeries { coeffs: inv })
    }

    pub fn div(&self, other: &TSeries) -> Result<TSeries> {
        Ok(self.mul(&other.inverse()?))
    }

    pub fn map(&self, f: impl Fn(&GradedPoly) -> GradedPoly) -> TSeries {
        TSeries { coeffs: self.coeffs.iter().map(f).collect() }
    }
}

pub fn series_combine(a: &TSeries, b: &TSeries, op: SeriesOp) -> Result<TSeries> {
    match op {
        SeriesOp::Mul => Ok(a.mul(b)),
        SeriesOp::Div => a.div(b),
    }
}

/// `(1 − x_a t)` or `(1 + x̃_a t)`.
fn x_factor(a: i64, variant: Variant, trunc: Option<u32>, order: usize) -> TSeries {
    let f = match variant {
        Variant::Schubert => -GradedPoly::var(Var::x(a)),
        Variant::Grothendieck => x_tilde(a, trunc.expect("K-theory needs a truncation order")),
    };
    TSeries::linear(f, order)
}

/// `(1 + y_b t)` or `(1 + z_b t)`.
fn e_factor(b: i64, variant: Variant, order: usize) -> TSeries {
    let v = match variant {
        Variant::Schubert => Var::y(b),
        Variant::Grothendieck => Var::z(b),
    };
    TSeries::linear(GradedPoly::var(v), order)
}

/// `c · ∏_{a≤0}(1+x̃_a t) ∏_{b≤q}(1+z_b t) / (∏_{a≤p}(1+x̃_a t) ∏_{b≤0}(1+z_b t))`
/// after cancelling the common tails.
pub fn row_series(p: i64, q: i64, variant: Variant, order: usize, trunc: Option<u32>) -> TSeries {
    let mut num = TSeries::one(order);
    let mut den = TSeries::one(order);
    for a in p + 1..=0 {
        num = num.mul(&x_factor(a, variant, trunc, order));
    }
    for a in 1..=p {
        den = den.mul(&x_factor(a, variant, trunc, order));
    }
    for b in 1..=q {
        num = num.mul(&e_factor(b, variant, order));
    }
    for b in q + 1..=0 {
        den = den.mul(&e_factor(b, variant, order));
    }
    let c = TSeries::generic_c(order).map(|f| f.clone().with_trunc(trunc));
    c.mul(&num).div(&den).expect("factors have unit constant term")
}

/// `c(i)` / `c^β(i)` for the longest element of `(−m, m]`.
pub fn row_series_w0(i: i64, m: i64, variant: Variant, order: usize, trunc: Option<u32>) -> Result<TSeries> {
    if m < 1 || i < 1 || i > 2 * m - 1 {
        return Err(Error::IndexOutOfRange { index: i, range: format!("1..={}", 2 * m - 1) });
    }
    Ok(row_series(i - m, m - i, variant, order, trunc))
}

/// Row series for condition `i` (0-based) of a vexillary triple.
pub fn row_series_vexillary(t: &Triple, i: usize, variant: Variant, order: usize, trunc: Option<u32>) -> Result<TSeries> {
    t.validate()?;
    if i >= t.len() {
        return Err(Error::IndexOutOfRange { index: i as i64, range: format!("0..{}", t.len()) });
    }
    Ok(row_series(t.p[i], t.q[i], variant, order, trunc))
}

/// Exact determinant by expansion along rows, memoized on used-column sets.
pub fn determinant(rows: &[Vec<GradedPoly>]) -> Result<GradedPoly> {
    let n = rows.len();
    if let Some(r) = rows.iter().find(|r| r.len() != n) {
        return Err(Error::NonSquare { rows: n, cols: r.len() });
    }
    if n == 0 {
        return Ok(GradedPoly::one());
    }
    if n > 20 {
        return Err(Error::IndexOutOfRange { index: n as i64, range: "matrix size <= 20".into() });
    }
    let mut layer: FxHashMap<u32, GradedPoly> = FxHashMap::default();
    layer.insert(0, GradedPoly::one());
    for row in rows {
        let mut next: FxHashMap<u32, GradedPoly> = FxHashMap::default();
        for (&mask, acc) in &layer {
            for (j, entry) in row.iter().enumerate() {
                if mask & (1 << j) != 0 || entry.is_zero() {
                    continue;
                }
                let larger_used = (mask >> (j + 1)).count_ones();
                let mut term = acc * entry;
                if larger_used % 2 == 1 {
                    term = -term;
                }
                let slot = next.entry(mask | (1 << j)).or_insert_with(GradedPoly::zero);
                *slot = &*slot + &term;
            }
        }
        next.retain(|_, v| !v.is_zero());
        layer = next;
    }
    Ok(layer.remove(&((1u32 << n) - 1)).unwrap_or_else(GradedPoly::zero))
}

/// `Σ_d β^d C(λ_i−1+d, d) · row_{λ_i−i+j+d}` for the Grothendieck variant (the
/// single term at `d = 0` for Schubert). Rows and columns are 1-based.
pub fn weighted_entry(row: &TSeries, i: i64, j: i64, lambda_i: i64, variant: Variant, trunc: Option<u32>) -> GradedPoly {
    let base = lambda_i - i + j;
    match variant {
        Variant::Schubert => row.coeff(base),
        Variant::Grothendieck => {
            let n = trunc.expect("K-theory needs a truncation order");
            let mut acc = GradedPoly::zero().with_trunc(trunc);
            for d in 0..=n as i64 {
                let k = base + d;
                if k < 0 {
                    continue;
                }
                let w = if lambda_i == 0 {
                    if d == 0 { Int::ONE } else { continue }
                } else {
                    Int::binomial((lambda_i - 1 + d) as u64, d as u64)
                };
                let term = row.coeff(k).mul_term(&Monomial::pow(Var::beta(), d as u32), &w);
                acc = &acc + &term;
            }
            acc
        }
    }
}

/// Entry `(i, j)` of the Grothendieck matrix for `w_circ^{(−m, m]}` and shape `λ`.
pub fn groth_entry(i: i64, j: i64, lambda: &crate::permutation::Partition, m: i64, n: u32) -> Result<GradedPoly> {
    let size = 2 * m - 1;
    if i < 1 || i > size || j < 1 || j > size {
        return Err(Error::IndexOutOfRange { index: i.max(j), range: format!("1..={size}") });
    }
    let lam = lambda.part(i as usize) as i64;
    let order = (lam - i + j + n as i64).max(0) as usize;
    let row = row_series_w0(i, m, Variant::Grothendieck, order, Some(n))?;
    Ok(weighted_entry(&row, i, j, lam, Variant::Grothendieck, Some(n)))
}

/// The determinantal formula attached to a vexillary triple.
pub fn vexillary_determinant(t: &Triple, variant: Variant, trunc: Option<u32>) -> Result<GradedPoly> {
    vexillary_determinant_with(t, variant, trunc, |p, q, order| row_series(p, q, variant, order, trunc))
}

/// As [`vexillary_determinant`], with the row series for condition `(p_i, q_i)`
/// supplied by `rows(p_i, q_i, t_order)`.
pub fn vexillary_determinant_with(
    t: &Triple,
    variant: Variant,
    trunc: Option<u32>,
    rows_fn: impl Fn(i64, i64, usize) -> TSeries,
) -> Result<GradedPoly> {
    t.validate()?;
    let lambda = t.lambda_parts();
    let s = lambda.len() as i64;
    if s == 0 {
        return Ok(GradedPoly::one().with_trunc(trunc));
    }
    let extra = match variant {
        Variant::Schubert => 0,
        Variant::Grothendieck => trunc.unwrap_or(0) as i64,
    };
    let mut rows = Vec::with_capacity(s as usize);
    let mut cache: FxHashMap<usize, TSeries> = FxHashMap::default();
    for i in 1..=s {
        let cond = t.condition_of_row(i);
        let lam = lambda[(i - 1) as usize];
        let series = cache
            .entry(cond)
            .or_insert_with(|| rows_fn(t.p[cond], t.q[cond], order_for(t, cond, &lambda, extra)));
        let row = (1..=s).map(|j| weighted_entry(series, i, j, lam, variant, trunc)).collect();
        rows.push(row);
    }
    determinant(&rows)
}

/// Largest `t`-order any row governed by `cond` needs.
pub(crate) fn order_for(t: &Triple, cond: usize, lambda: &[i64], extra: i64) -> usize {
    let s = lambda.len() as i64;
    let lo = if cond == 0 { 1 } else { t.k[cond - 1] + 1 };
    (lo..=t.k[cond])
        .map(|i| (lambda[(i - 1) as usize] - i + s + extra).max(0) as usize)
        .max()
        .unwrap_or(0)
}
