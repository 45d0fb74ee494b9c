use std::fmt;
use std::str::FromStr;

use smallvec::SmallVec;

use crate::error::Error;

/// Variable families, in canonical order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    Beta = 0,
    C = 1,
    CPrime = 2,
    X = 3,
    Y = 4,
    Z = 5,
    T = 6,
}

impl Family {
    fn from_code(code: u32) -> Family {
        match code {
            0 => Family::Beta,
            1 => Family::C,
            2 => Family::CPrime,
            3 => Family::X,
            4 => Family::Y,
            5 => Family::Z,
            _ => Family::T,
        }
    }
}

const INDEX_BITS: u32 = 24;
const INDEX_OFFSET: i64 = 1 << 23;

/// A single variable, packed as `family << 24 | (index + 2^23)` so that the
/// derived order is "family, then index".
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(u32);

impl Var {
    pub fn new(family: Family, index: i64) -> Var {
        debug_assert!(index.abs() < INDEX_OFFSET);
        Var(((family as u32) << INDEX_BITS) | ((index + INDEX_OFFSET) as u32))
    }

    pub fn beta() -> Var {
        Var::new(Family::Beta, 0)
    }
    pub fn t() -> Var {
        Var::new(Family::T, 0)
    }
    pub fn c(k: i64) -> Var {
        Var::new(Family::C, k)
    }
    pub fn cp(k: i64) -> Var {
        Var::new(Family::CPrime, k)
    }
    pub fn x(i: i64) -> Var {
        Var::new(Family::X, i)
    }
    pub fn y(i: i64) -> Var {
        Var::new(Family::Y, i)
    }
    pub fn z(i: i64) -> Var {
        Var::new(Family::Z, i)
    }

    pub fn family(self) -> Family {
        Family::from_code(self.0 >> INDEX_BITS)
    }

    pub fn index(self) -> i64 {
        (self.0 & ((1 << INDEX_BITS) - 1)) as i64 - INDEX_OFFSET
    }

    pub fn is_beta(self) -> bool {
        self.family() == Family::Beta
    }

    /// Degree in the grading where `β` has degree −1 and `c_k`, `c'_k` degree `k`.
    pub fn degree(self) -> i64 {
        match self.family() {
            Family::Beta => -1,
            Family::C | Family::CPrime => self.index(),
            _ => 1,
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let i = self.index();
        match self.family() {
            Family::Beta => write!(f, "b"),
            Family::T => write!(f, "t"),
            Family::C => write!(f, "c[{i}]"),
            Family::CPrime => write!(f, "c'[{i}]"),
            Family::X => write!(f, "x[{i}]"),
            Family::Y => write!(f, "y[{i}]"),
            Family::Z => write!(f, "z[{i}]"),
        }
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Var {
    type Err = Error;
    fn from_str(s: &str) -> Result<Var, Error> {
        let s = s.trim();
        match s {
            "b" | "β" | "beta" => return Ok(Var::beta()),
            "t" => return Ok(Var::t()),
            _ => {}
        }
        let bad = || Error::Parse(format!("unknown variable `{s}`"));
        let open = s.find('[').ok_or_else(bad)?;
        if !s.ends_with(']') {
            return Err(bad());
        }
        let index: i64 = s[open + 1..s.len() - 1].trim().parse().map_err(|_| bad())?;
        let family = match &s[..open] {
            "c" => Family::C,
            "c'" | "cp" => Family::CPrime,
            "x" => Family::X,
            "y" => Family::Y,
            "z" => Family::Z,
            _ => return Err(bad()),
        };
        if matches!(family, Family::C | Family::CPrime) && index < 1 {
            return Err(Error::Parse(format!("c-variable index must be >= 1 in `{s}`")));
        }
        Ok(Var::new(family, index))
    }
}

/// A monomial: variables with positive exponents, sorted by variable.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(pub(crate) SmallVec<[(Var, u32); 6]>);

impl Monomial {
    pub fn one() -> Monomial {
        Monomial(SmallVec::new())
    }

    pub fn var(v: Var) -> Monomial {
        Monomial::pow(v, 1)
    }

    pub fn pow(v: Var, e: u32) -> Monomial {
        let mut m = SmallVec::new();
        if e > 0 {
            m.push((v, e));
        }
        Monomial(m)
    }

    /// Builds a monomial from unsorted factors, merging repeats and dropping zero exponents.
    pub fn from_factors(factors: impl IntoIterator<Item = (Var, u32)>) -> Monomial {
        let mut v: SmallVec<[(Var, u32); 6]> = factors.into_iter().filter(|f| f.1 > 0).collect();
        v.sort_by_key(|f| f.0);
        let mut out: SmallVec<[(Var, u32); 6]> = SmallVec::new();
        for (var, e) in v {
            match out.last_mut() {
                Some(last) if last.0 == var => last.1 += e,
                _ => out.push((var, e)),
            }
        }
        Monomial(out)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn factors(&self) -> &[(Var, u32)] {
        &self.0
    }

    pub fn exponent(&self, v: Var) -> u32 {
        self.0
            .binary_search_by_key(&v, |f| f.0)
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }

    pub fn beta_exp(&self) -> u32 {
        match self.0.first() {
            Some((v, e)) if v.is_beta() => *e,
            _ => 0,
        }
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().map(|(v, e)| v.degree() * *e as i64).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = SmallVec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// `self / other` if `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = SmallVec::new();
        let mut j = 0;
        for &(v, e) in self.0.iter() {
            if j < other.0.len() && other.0[j].0 < v {
                return None;
            }
            if j < other.0.len() && other.0[j].0 == v {
                let oe = other.0[j].1;
                j += 1;
                if oe > e {
                    return None;
                }
                if oe < e {
                    out.push((v, e - oe));
                }
            } else {
                out.push((v, e));
            }
        }
        if j < other.0.len() {
            return None;
        }
        Some(Monomial(out))
    }

    /// Splits into (factors satisfying `pred`, the rest).
    pub fn split(&self, pred: impl Fn(Var) -> bool) -> (Monomial, Monomial) {
        let mut yes = SmallVec::new();
        let mut no = SmallVec::new();
        for &f in self.0.iter() {
            if pred(f.0) {
                yes.push(f);
            } else {
                no.push(f);
            }
        }
        (Monomial(yes), Monomial(no))
    }

    /// Removes the given variable, returning its exponent and the remainder.
    pub fn take(&self, v: Var) -> (u32, Monomial) {
        let mut e = 0;
        let mut out = SmallVec::new();
        for &f in self.0.iter() {
            if f.0 == v {
                e = f.1;
            } else {
                out.push(f);
            }
        }
        (e, Monomial(out))
    }

    /// Pure lexicographic order with variables ranked by their canonical order
    /// (a genuine monomial order, used for division).
    pub fn lex_cmp(&self, other: &Monomial) -> std::cmp::Ordering {
        use std::cmp::Ordering::*;
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j) = (0, 0);
        loop {
            match (a.get(i), b.get(j)) {
                (None, None) => return Equal,
                (Some(_), None) => return Greater,
                (None, Some(_)) => return Less,
                (Some(x), Some(y)) => match x.0.cmp(&y.0) {
                    Less => return Greater,
                    Greater => return Less,
                    Equal => match x.1.cmp(&y.1) {
                        Equal => {
                            i += 1;
                            j += 1;
                        }
                        o => return o,
                    },
                },
            }
        }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (k, (v, e)) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn packing_round_trips() {
        for (v, s) in [
            (Var::c(3), "c[3]"),
            (Var::x(-1), "x[-1]"),
            (Var::z(0), "z[0]"),
            (Var::cp(2), "c'[2]"),
            (Var::beta(), "b"),
        ] {
            assert_eq!(v.to_string(), s);
            assert_eq!(s.parse::<Var>().unwrap(), v);
        }
        assert_eq!(Var::x(-5).index(), -5);
        assert!(Var::beta() < Var::c(100));
        assert!(Var::c(100) < Var::cp(1));
        assert!(Var::x(7) < Var::y(-7));
        assert!("c[0]".parse::<Var>().is_err());
    }

    #[test]
    fn monomial_algebra() {
        let a = Monomial::from_factors([(Var::x(1), 2), (Var::beta(), 1)]);
        let b = Monomial::from_factors([(Var::x(1), 1), (Var::c(2), 1)]);
        let ab = a.mul(&b);
        assert_eq!(ab.to_string(), "b*c[2]*x[1]^3");
        assert_eq!(ab.div(&b), Some(a.clone()));
        assert_eq!(a.div(&b), None);
        assert_eq!(ab.degree(), -1 + 2 + 3);
        assert_eq!(ab.beta_exp(), 1);
    }
}
