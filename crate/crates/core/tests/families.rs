use bsp_core::families::{beta_zero, build, specialize_finite, FamilyRequest, Start, Theory};
use bsp_core::permutation::{triple_of, Partition, Permutation};
use bsp_core::poly::{Family, GradedPoly, Var};

fn dominant_product(n: i64) -> GradedPoly {
    let mut acc = GradedPoly::one();
    for i in 1..n {
        for j in 1..=(n - i) {
            let x = GradedPoly::var(Var::x(i));
            let z = GradedPoly::var(Var::z(j));
            let f = &(&x + &z) - &(&x * &z);
            acc = &acc * &f;
        }
    }
    acc
}

#[test]
fn vexillary_start_matches_longest_start() {
    for theory in [Theory::H, Theory::K] {
        for w in Permutation::all_in_window(2) {
            let a = build(&FamilyRequest::new(w.clone(), theory, 4).window(2)).unwrap();
            let b = build(&FamilyRequest::new(w.clone(), theory, 4).window(2).start(Start::Longest)).unwrap();
            assert_eq!(a, b, "{theory} {w} vexillary={}", triple_of(&w).is_some());
        }
    }
}

#[test]
fn dominant_grothendieck_products() {
    for n in 2..=4i64 {
        let w = Permutation::from_window(1, (1..=n).rev().collect()).unwrap();
        let g = build(&FamilyRequest::new(w, Theory::K, 6)).unwrap();
        assert_eq!(specialize_finite(&g, Theory::K), dominant_product(n), "n={n}");
    }
}

#[test]
fn homogeneous_of_length_degree() {
    for w in Permutation::all_in_window(2) {
        for theory in [Theory::H, Theory::K] {
            let f = build(&FamilyRequest::new(w.clone(), theory, 3)).unwrap();
            assert_eq!(f.homogeneous_degree(), Some(w.length() as i64), "{theory} {w}");
        }
    }
}

#[test]
fn beta_zero_recovers_schubert() {
    for w in Permutation::all_in_window(2).into_iter().filter(|w| w.length() <= 3) {
        let g = build(&FamilyRequest::new(w.clone(), Theory::K, 3)).unwrap();
        let s = build(&FamilyRequest::new(w.clone(), Theory::H, 0)).unwrap();
        assert_eq!(beta_zero(&g), s, "{w}");
    }
}

#[test]
fn grassmannian_polynomials_have_no_x() {
    for mu in Partition::in_box(2, 2) {
        let w = mu.grassmannian();
        for theory in [Theory::H, Theory::K] {
            let f = build(&FamilyRequest::new(w.clone(), theory, 4)).unwrap();
            assert!(!f.contains_family(Family::X), "{theory} {mu}");
        }
    }
}

#[test]
fn window_too_small_is_rejected() {
    let w: Permutation = "[2,1,0,-1]".parse().unwrap();
    assert!(build(&FamilyRequest::new(w, Theory::H, 0).window(1)).is_err());
}
