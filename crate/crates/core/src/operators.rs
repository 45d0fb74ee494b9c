//! Reflections `s_i`, divided differences `∂_i` and isobaric operators `π_i`.
//!
//! `s_0` also moves the `c` variables; it is extended to products as a ring
//! homomorphism.

use std::sync::{Mutex, OnceLock};

use rustc_hash::FxHashMap;

use crate::error::Result;
use crate::poly::{x_tilde, Family, GradedPoly, Var};

/// Which ring the operators act in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Ring {
    /// `β = 0`, exact.
    Cohomology,
    /// Power series in `β` modulo `β^{N+1}`.
    KTheory(u32),
}

impl Ring {
    pub fn trunc(self) -> Option<u32> {
        match self {
            Ring::Cohomology => None,
            Ring::KTheory(n) => Some(n),
        }
    }

    /// K-theory at the polynomial's own order, cohomology if it has none.
    pub fn of(f: &GradedPoly) -> Ring {
        f.trunc().map_or(Ring::Cohomology, Ring::KTheory)
    }

    /// `x̃_a`, or `−x_a` in cohomology.
    pub fn x_tilde(self, a: i64) -> GradedPoly {
        match self {
            Ring::Cohomology => -GradedPoly::var(Var::x(a)),
            Ring::KTheory(n) => x_tilde(a, n),
        }
    }
}

type S0Key = (i64, Option<u32>);

fn s0_cache() -> &'static Mutex<FxHashMap<S0Key, GradedPoly>> {
    static CACHE: OnceLock<Mutex<FxHashMap<S0Key, GradedPoly>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// `s_0(c_k) = c_k + (x̃_0 − x̃_1) Σ_{i<k} (−x̃_1)^i c_{k−1−i}`.
pub fn s0_on_c(k: i64, ring: Ring) -> GradedPoly {
    let key = (k, ring.trunc());
    if let Some(hit) = s0_cache().lock().unwrap().get(&key) {
        return hit.clone();
    }
    let t0 = ring.x_tilde(0);
    let t1 = ring.x_tilde(1);
    let neg_t1 = -&t1;
    let mut sum = GradedPoly::zero();
    let mut power = GradedPoly::one();
    for i in 0..k {
        let c = if k - 1 - i == 0 { GradedPoly::one() } else { GradedPoly::var(Var::c(k - 1 - i)) };
        sum = &sum + &(&power * &c);
        power = &power * &neg_t1;
    }
    let out = (&GradedPoly::var(Var::c(k)) + &(&(&t0 - &t1) * &sum)).with_trunc(ring.trunc());
    s0_cache().lock().unwrap().insert(key, out.clone());
    out
}

/// `s_i f`: swaps `x_i`, `x_{i+1}`; for `i = 0` also applies `s_0` to every `c_k`.
pub fn s_action(i: i64, f: &GradedPoly, ring: Ring) -> GradedPoly {
    let swap = |v: Var| {
        if v.family() == Family::X && v.index() == i {
            Var::x(i + 1)
        } else if v.family() == Family::X && v.index() == i + 1 {
            Var::x(i)
        } else {
            v
        }
    };
    if i != 0 || !f.contains_family(Family::C) {
        return f.rename(swap);
    }
    let mut assignment: FxHashMap<Var, GradedPoly> = FxHashMap::default();
    assignment.insert(Var::x(0), GradedPoly::var(Var::x(1)));
    assignment.insert(Var::x(1), GradedPoly::var(Var::x(0)));
    for v in f.variables() {
        if v.family() == Family::C {
            assignment.insert(v, s0_on_c(v.index(), ring));
        }
    }
    f.substitute(&assignment).with_trunc(merge_trunc(f.trunc(), ring.trunc()))
}

fn merge_trunc(a: Option<u32>, b: Option<u32>) -> Option<u32> {
    match (a, b) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, b) => a.or(b),
    }
}

/// `∂_i f = (f − s_i f)/(x_i − x_{i+1})`.
pub fn divided_difference(i: i64, f: &GradedPoly, ring: Ring) -> Result<GradedPoly> {
    let num = f - &s_action(i, f, ring);
    num.divide_by_difference(Var::x(i), Var::x(i + 1))
}

/// `π_i f = ∂_i((1 + βx_{i+1}) f)`; equals `∂_i` in cohomology.
pub fn isobaric(i: i64, f: &GradedPoly, ring: Ring) -> Result<GradedPoly> {
    match ring {
        Ring::Cohomology => divided_difference(i, f, ring),
        Ring::KTheory(n) => {
            let w = &GradedPoly::one() + &(&GradedPoly::beta() * &GradedPoly::var(Var::x(i + 1)));
            let g = (&w * f).truncated(n);
            divided_difference(i, &g, ring)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> GradedPoly {
        s.parse().unwrap()
    }

    #[test]
    fn reflections() {
        assert_eq!(s_action(1, &v("x[1]"), Ring::Cohomology), v("x[2]"));
        assert_eq!(s_action(3, &v("c[5]"), Ring::KTheory(3)), v("c[5]"));
        let c2 = v("c[2]").with_trunc(Some(4));
        let back = s_action(0, &s_action(0, &c2, Ring::KTheory(4)), Ring::KTheory(4));
        assert_eq!(back, c2);
    }

    #[test]
    fn small_operator_values() {
        let r = Ring::Cohomology;
        assert_eq!(divided_difference(0, &v("c[1]"), r).unwrap(), v("1"));
        assert_eq!(divided_difference(1, &v("x[1]"), r).unwrap(), v("1"));
        assert!(divided_difference(1, &v("x[1]*x[2]"), r).unwrap().is_zero());
        let k = Ring::KTheory(3);
        assert_eq!(isobaric(2, &GradedPoly::one().with_trunc(Some(3)), k).unwrap(), v("-b").with_trunc(Some(3)));
        let g = v("c[1] + b*c[2] + b^2*c[3] + b^3*c[4]").with_trunc(Some(3));
        assert_eq!(isobaric(0, &g, k).unwrap(), GradedPoly::one().with_trunc(Some(3)));
    }
}
