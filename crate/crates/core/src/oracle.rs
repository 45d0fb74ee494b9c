//! Property suites run by `bsp oracle`.

use std::fmt;
use std::str::FromStr;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::coproduct::{coproduct_coefficients, coproduct_via_product_route_batch};
use crate::error::{Error, Result};
use crate::families::{build, grothendieck, schubert, FamilyRequest, Theory};
use crate::operators::{divided_difference, isobaric, s_action, Ring};
use crate::permutation::{Partition, Permutation};
use crate::poly::{ominus, GradedPoly, Var};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Operators,
    Windows,
    Examples,
    Routes,
}

impl Suite {
    pub const ALL: [Suite; 4] = [Suite::Operators, Suite::Windows, Suite::Examples, Suite::Routes];
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Operators => "operators",
            Suite::Windows => "windows",
            Suite::Examples => "examples",
            Suite::Routes => "routes",
        })
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Suite> {
        Suite::ALL
            .into_iter()
            .find(|x| x.to_string() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite `{s}` (operators, windows, examples, routes)")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub cases: usize,
    /// Descriptions of the failing cases.
    pub failures: Vec<String>,
}

impl Check {
    fn new(name: &str) -> Check {
        Check { name: name.into(), cases: 0, failures: Vec::new() }
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub suite: Suite,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }
}

pub fn run(suite: Suite) -> Result<Report> {
    let checks = match suite {
        Suite::Operators => operators(100, 0)?,
        Suite::Windows => windows(4, 6)?,
        Suite::Examples => examples()?,
        Suite::Routes => routes(6)?,
    };
    Ok(Report { suite, checks })
}

/// A homogeneous polynomial of degree `deg` in `x_{−2..3}`, `c_1..c_3`.
pub fn random_homogeneous(rng: &mut StdRng, deg: i64, terms: usize) -> GradedPoly {
    let vars: Vec<(Var, i64)> = (-2..=3).map(|i| (Var::x(i), 1)).chain((1..=3).map(|k| (Var::c(k), k))).collect();
    let mut f = GradedPoly::zero();
    for _ in 0..terms {
        let mut term = GradedPoly::constant(rng.gen_range(-3i64..=3));
        let mut left = deg;
        while left > 0 {
            let fitting: Vec<_> = vars.iter().filter(|v| v.1 <= left).collect();
            let (v, d) = fitting[rng.gen_range(0..fitting.len())];
            term = &term * &GradedPoly::var(*v);
            left -= d;
        }
        f = &f + &term;
    }
    f
}

/// Nil-Hecke and 0-Hecke relations and both Leibniz rules on `cases` random polynomials.
pub fn operators(cases: usize, seed: u64) -> Result<Vec<Check>> {
    const N: u32 = 4;
    let (h, k) = (Ring::Cohomology, Ring::KTheory(N));
    let beta = GradedPoly::beta();
    let mut rng = StdRng::seed_from_u64(seed);
    let mut nil = Check::new("d_i^2 = 0");
    let mut idem = Check::new("pi_i^2 = -beta pi_i");
    let mut braid = Check::new("braid relations");
    let mut comm = Check::new("commutation relations");
    let mut leib_h = Check::new("Leibniz rule (H)");
    let mut leib_k = Check::new("Leibniz rule (K)");
    for case in 0..cases {
        let deg = rng.gen_range(0..=5);
        let terms = rng.gen_range(1..=4);
        let f = random_homogeneous(&mut rng, deg, terms);
        let gdeg = rng.gen_range(0..=2);
        let g = random_homogeneous(&mut rng, gdeg, 2);
        let (fk, gk) = (f.clone().with_trunc(Some(N)), g.clone().with_trunc(Some(N)));
        let dd = |i, f: &GradedPoly| divided_difference(i, f, h);
        let pi = |i, f: &GradedPoly| isobaric(i, f, k);
        let tag = |i: i64| move || format!("case {case}, i = {i}");
        for i in -2..=2 {
            nil.record(dd(i, &dd(i, &f)?)?.is_zero(), tag(i));
            let once = pi(i, &fk)?;
            idem.record(pi(i, &once)? == (&(-&beta) * &once).truncated(N), tag(i));
            if i < 2 {
                let j = i + 1;
                let ok_h = dd(i, &dd(j, &dd(i, &f)?)?)? == dd(j, &dd(i, &dd(j, &f)?)?)?;
                let ok_k = pi(i, &pi(j, &pi(i, &fk)?)?)? == pi(j, &pi(i, &pi(j, &fk)?)?)?;
                braid.record(ok_h && ok_k, tag(i));
            }
            for j in i + 2..=2 {
                let ok_h = dd(i, &dd(j, &f)?)? == dd(j, &dd(i, &f)?)?;
                let ok_k = pi(i, &pi(j, &fk)?)? == pi(j, &pi(i, &fk)?)?;
                comm.record(ok_h && ok_k, || format!("case {case}, i = {i}, j = {j}"));
            }
            let lhs = dd(i, &(&f * &g))?;
            let rhs = &(&dd(i, &f)? * &g) + &(&s_action(i, &f, h) * &dd(i, &g)?);
            leib_h.record(lhs == rhs, tag(i));
            let sf = s_action(i, &fk, k);
            let lhs = pi(i, &(&fk * &gk))?;
            let rhs = &(&(&pi(i, &fk)? * &gk) + &(&sf * &pi(i, &gk)?)) + &(&(&beta * &sf) * &gk);
            leib_k.record(lhs == rhs.truncated(N), tag(i));
        }
    }
    Ok(vec![nil, idem, braid, comm, leib_h, leib_k])
}

/// `𝔖_w` and `𝔊_w` agree across windows for `w ∈ S_(−2,2]`, `ℓ(w) ≤ max_len`.
pub fn windows(max_len: usize, n: u32) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for theory in [Theory::H, Theory::K] {
        let mut check = Check::new(&format!("back-stability ({theory})"));
        for w in Permutation::all_in_window(2).into_iter().filter(|w| w.length() <= max_len) {
            let lo = w.min_window().max(1);
            let base = build(&FamilyRequest::new(w.clone(), theory, n).window(lo))?;
            for m in lo + 1..=3 {
                let f = build(&FamilyRequest::new(w.clone(), theory, n).window(m))?;
                check.record(f == base, || format!("{w}: windows {lo} and {m}"));
            }
        }
        out.push(check);
    }
    Ok(out)
}

fn zm(i: i64, j: i64, n: u32) -> GradedPoly {
    ominus(&GradedPoly::var(Var::z(i)), &GradedPoly::var(Var::z(j)), n)
}

/// Reference values for the base cases and selected coproduct coefficients at `N = 6`.
pub fn examples() -> Result<Vec<Check>> {
    const N: u32 = 6;
    let b = GradedPoly::beta();
    let one = GradedPoly::one().with_trunc(Some(N));
    let opb = |i, j| &one + &(&b * &zm(i, j, N));
    let s0 = Permutation::simple(0);
    let mut base = Check::new("base cases");
    let c1 = GradedPoly::var(Var::c(1));
    base.record(schubert(&s0)? == c1, || "S_{s0} = c1".into());
    let g = grothendieck(&s0, N)?;
    let mut want = GradedPoly::zero().with_trunc(Some(N));
    for i in 1..=(N as i64 + 1) {
        want = &want + &(&b.pow(i as u32 - 1) * &GradedPoly::var(Var::c(i)));
    }
    base.record(g == want.truncated(N), || "G_{s0}".into());
    base.record(divided_difference(0, &c1, Ring::Cohomology)?.is_one(), || "d0 S_{s0} = 1".into());
    base.record(isobaric(0, &g, Ring::KTheory(N))?.is_one(), || "pi0 G_{s0} = 1".into());

    let mut coeffs = Check::new("coproduct coefficients");
    let p = |s: &str| s.parse::<Permutation>();
    let mu = |parts: &[u32]| Partition::new(parts.to_vec());
    let e = Permutation::identity();
    let mut cases: Vec<(&str, Partition, Permutation, GradedPoly)> = Vec::new();
    let longest = &(&(&b * &b) * &opb(0, 2)) * &zm(-1, 1, N);
    cases.push(("[2,1,0,-1]", mu(&[2, 2])?, p("[1,0,-1]")?, longest.truncated(N)));
    let inner = &(&(&(&opb(0, 1) * &opb(-1, 2)) + &(&opb(0, 1) * &opb(-1, 1))) + &(&opb(0, 1) * &opb(0, 2)))
        + &(&b * &(&zm(0, 1, N) * &opb(0, 1)));
    cases.push(("[2,1,0,-1]", mu(&[2, 1])?, p("[1,2,-1,0]")?, (&b * &inner).truncated(N)));
    cases.push(("[0,-1,2,1]", mu(&[2, 1])?, e.clone(), (&b + &(&(&b * &b) * &zm(0, 1, N))).truncated(N)));
    cases.push(("[0,-1,2,1]", mu(&[2])?, e.clone(), opb(0, 1)));
    cases.push(("[0,-1,2,1]", mu(&[1, 1])?, e.clone(), opb(0, 1)));
    cases.push(("[0,-1,2,1]", mu(&[1])?, e.clone(), zm(0, 1, N)));
    for (w, parts, want) in [
        ("[3,1,2]", &[2][..], opb(2, 1)),
        ("[2,3,1]", &[1, 1], opb(0, 2)),
        ("[2,0,1]", &[2], one.clone()),
        ("[1,2,0]", &[1, 1], opb(0, 1)),
        ("[1,-1,0]", &[2], opb(0, 1)),
        ("[0,1,-1]", &[1, 1], one.clone()),
        ("[0,-2,-1]", &[2], opb(-1, 1)),
        ("[-1,0,-2]", &[1, 1], opb(0, -1)),
    ] {
        cases.push((w, mu(parts)?, e.clone(), want));
    }
    let mut tables = std::collections::BTreeMap::new();
    for (w, mu, v, want) in cases {
        let w = p(w)?;
        if !tables.contains_key(&w) {
            let t = coproduct_coefficients(&w, Theory::K, w.min_window().max(2), N)?;
            tables.insert(w.clone(), t);
        }
        let got = tables[&w].get(&mu, &v);
        coeffs.record(got == want, || format!("w = {w}, mu = {mu}, v = {v}: got {got}"));
    }
    Ok(vec![base, coeffs])
}

/// The product route agrees with the direct route on `S_(−1,2]` at `m = 2`.
pub fn routes(n: u32) -> Result<Vec<Check>> {
    let ws = Permutation::all_in_window(2).into_iter().filter(|w| w.is_identity() || w.support().0 > -1).collect::<Vec<_>>();
    let product = coproduct_via_product_route_batch(&ws, 2, n)?;
    let mut check = Check::new("product route = direct route");
    for (w, via_product) in ws.iter().zip(product) {
        let direct = coproduct_coefficients(w, Theory::K, 2, n)?;
        check.record(direct.entries == via_product.entries, || format!("w = {w}"));
    }
    Ok(vec![check])
}
