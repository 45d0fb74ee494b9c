//! The multiplicative formal group law `u ⊕ v = u + v + βuv` and its inverse.

use super::{GradedPoly, Var};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FormalOp {
    Oplus,
    Ominus,
    Neg,
}

impl FormalOp {
    /// Applies the operation; `Neg` ignores `u` and returns `⊖v`.
    pub fn apply(self, u: &GradedPoly, v: &GradedPoly, trunc: u32) -> GradedPoly {
        match self {
            FormalOp::Oplus => oplus(u, v).truncated(trunc),
            FormalOp::Ominus => ominus(u, v, trunc),
            FormalOp::Neg => ominus_unary(v, trunc),
        }
    }
}

pub fn oplus(u: &GradedPoly, v: &GradedPoly) -> GradedPoly {
    let b = GradedPoly::beta();
    &(u + v) + &(&b * &(u * v))
}

/// `1/(1 + βv)` as a geometric series through `β^trunc`.
pub(crate) fn inv_one_plus_beta(v: &GradedPoly, trunc: u32) -> GradedPoly {
    let step = -&(&GradedPoly::beta() * v).truncated(trunc);
    let mut acc = GradedPoly::one().with_trunc(Some(trunc));
    let mut term = acc.clone();
    for _ in 0..trunc {
        term = &term * &step;
        if term.is_zero() {
            break;
        }
        acc = &acc + &term;
    }
    acc
}

/// `u ⊖ v = (u - v)/(1 + βv)`.
pub fn ominus(u: &GradedPoly, v: &GradedPoly, trunc: u32) -> GradedPoly {
    &(u - v).truncated(trunc) * &inv_one_plus_beta(v, trunc)
}

/// `⊖v = -v/(1 + βv)`.
pub fn ominus_unary(v: &GradedPoly, trunc: u32) -> GradedPoly {
    ominus(&GradedPoly::zero(), v, trunc)
}

/// `x̃_i = ⊖x_i`.
pub fn x_tilde(i: i64, trunc: u32) -> GradedPoly {
    ominus_unary(&GradedPoly::var(Var::x(i)), trunc)
}
