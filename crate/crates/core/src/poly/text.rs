//! Canonical text and JSON forms of [`GradedPoly`].
//!
//! Text: `3*c[1]*x[-1]^2 - b*z[0] + 1`, terms in canonical monomial order.
//! JSON: `{"trunc":N|null,"terms":[{"coeff":"-3","mono":{"c[3]":1,"x[-1]":2}}]}`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{GradedPoly, Int, Monomial, Var};
use crate::error::Error;

impl fmt::Display for GradedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{abs}*{m}")?;
            }
        }
        Ok(())
    }
}

fn parse_term(text: &str) -> Result<(Monomial, Int), Error> {
    let mut coeff = Int::ONE;
    let mut factors = Vec::new();
    for factor in text.split('*') {
        let factor = factor.trim();
        if factor.is_empty() {
            return Err(Error::Parse(format!("empty factor in `{text}`")));
        }
        let (base, exp) = match factor.rfind('^') {
            Some(i) => {
                let e: u32 = factor[i + 1..]
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad exponent in `{factor}`")))?;
                (&factor[..i], e)
            }
            None => (factor, 1),
        };
        if base.chars().all(|ch| ch.is_ascii_digit()) {
            let k: Int = base
                .parse()
                .map_err(|_| Error::Parse(format!("bad integer `{base}`")))?;
            coeff = &coeff * &k.pow(exp);
        } else {
            factors.push((base.parse::<Var>()?, exp));
        }
    }
    Ok((Monomial::from_factors(factors), coeff))
}

impl FromStr for GradedPoly {
    type Err = Error;

    fn from_str(s: &str) -> Result<GradedPoly, Error> {
        let s = s.replace('−', "-");
        let mut terms = Vec::new();
        let mut current = String::new();
        let mut sign = 1i64;
        let mut depth = 0i32;
        let mut pending = false;
        let flush = |current: &mut String, sign: i64, terms: &mut Vec<(Monomial, Int)>| -> Result<(), Error> {
            let t = current.trim();
            if !t.is_empty() {
                let (m, c) = parse_term(t)?;
                terms.push((m, if sign < 0 { -c } else { c }));
            } else if sign < 0 {
                return Err(Error::Parse("dangling sign".into()));
            }
            current.clear();
            Ok(())
        };
        for ch in s.chars() {
            match ch {
                '[' => {
                    depth += 1;
                    current.push(ch);
                }
                ']' => {
                    depth -= 1;
                    current.push(ch);
                }
                '+' | '-' if depth == 0 => {
                    pending = true;
                    if current.trim().is_empty() {
                        if ch == '-' {
                            sign = -sign;
                        }
                        continue;
                    }
                    flush(&mut current, sign, &mut terms)?;
                    sign = if ch == '-' { -1 } else { 1 };
                }
                _ => current.push(ch),
            }
        }
        if pending && current.trim().is_empty() {
            return Err(Error::Parse("dangling operator".into()));
        }
        flush(&mut current, sign, &mut terms)?;
        if terms.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        Ok(GradedPoly::from_terms(terms, None))
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    coeff: String,
    mono: serde_json::Map<String, serde_json::Value>,
}

#[derive(Serialize, Deserialize)]
struct PolyJson {
    trunc: Option<u32>,
    terms: Vec<TermJson>,
}

impl Serialize for GradedPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let terms = self
            .terms()
            .map(|(m, c)| TermJson {
                coeff: c.to_string(),
                mono: m
                    .factors()
                    .iter()
                    .map(|(v, e)| (v.to_string(), serde_json::Value::from(*e)))
                    .collect(),
            })
            .collect();
        PolyJson {
            trunc: self.trunc(),
            terms,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GradedPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = PolyJson::deserialize(d)?;
        let mut terms = Vec::with_capacity(raw.terms.len());
        for t in raw.terms {
            let c: Int = t.coeff.parse().map_err(D::Error::custom)?;
            let mut factors = Vec::new();
            for (name, e) in t.mono {
                let v: Var = name.parse().map_err(D::Error::custom)?;
                let e = e
                    .as_u64()
                    .ok_or_else(|| D::Error::custom("exponent must be a nonnegative integer"))?;
                factors.push((v, e as u32));
            }
            terms.push((Monomial::from_factors(factors), c));
        }
        Ok(GradedPoly::from_terms(terms, raw.trunc))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn display_and_parse() {
        let p: GradedPoly = "x[1]^2 - y[0]^2".parse().unwrap();
        assert_eq!(p.to_string(), "x[1]^2 - y[0]^2");
        let q: GradedPoly = "-3*b*c[2] + c[1] - 1".parse().unwrap();
        assert_eq!(q.to_string(), "-1 - 3*b*c[2] + c[1]");
        assert_eq!("0".parse::<GradedPoly>().unwrap(), GradedPoly::zero());
        assert!("x[1] +".parse::<GradedPoly>().is_err());
        assert!("q[1]".parse::<GradedPoly>().is_err());
    }

    #[test]
    fn json_shape() {
        let p: GradedPoly = "2*c[3]*x[-1]^2".parse().unwrap();
        let p = p.with_trunc(Some(4));
        let js = serde_json::to_string(&p).unwrap();
        assert_eq!(js, r#"{"trunc":4,"terms":[{"coeff":"2","mono":{"c[3]":1,"x[-1]":2}}]}"#);
        let back: GradedPoly = serde_json::from_str(&js).unwrap();
        assert_eq!(back, p);
    }

    fn arb_poly() -> impl Strategy<Value = GradedPoly> {
        let var = prop_oneof![
            (1i64..4).prop_map(Var::c),
            (-2i64..3).prop_map(Var::x),
            (-2i64..3).prop_map(Var::z),
            Just(Var::beta()),
        ];
        let term = (-50i64..50, prop::collection::vec((var, 1u32..3), 0..3));
        prop::collection::vec(term, 0..6).prop_map(|ts| {
            GradedPoly::from_terms(
                ts.into_iter().map(|(c, f)| (Monomial::from_factors(f), Int::from(c))),
                None,
            )
        })
    }

    proptest! {
        #[test]
        fn text_round_trip(p in arb_poly()) {
            let back: GradedPoly = p.to_string().parse().unwrap();
            prop_assert_eq!(back, p);
        }
    }
}
