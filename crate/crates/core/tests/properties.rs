//! Randomized property tests for the Riemann-Roch, Koszul and Torelli layers.

use ellsurf::acceptance::{
    build_constant_j_instance, split_genus2_curve, split_genus3_curve, ConstJKind,
};
use ellsurf::curve::{valuation, HyperellipticCurve, Place};
use ellsurf::divisor::{canonical_divisor, Divisor};
use ellsurf::koszul::{koszul_dim, mu_pi, mult_map};
use ellsurf::rrspace::{h0, h1, rr_basis};
use ellsurf::torelli::{invariants_from_weierstrass, torelli_decide, Outcome};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn random_divisor(
    curve: &HyperellipticCurve,
    picks: &[(usize, i64)],
) -> Divisor {
    let places = curve.rational_places();
    let mut d = Divisor::zero(curve);
    for &(idx, mult) in picks {
        let place = places[idx % places.len()];
        d = d
            .add(&Divisor::from_place(curve, place, mult).unwrap())
            .unwrap();
    }
    d
}

fn picks_strategy(max_len: usize) -> impl Strategy<Value = Vec<(usize, i64)>> {
    prop::collection::vec((0usize..500, -2i64..=3), 1..=max_len)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 40, ..ProptestConfig::default() })]

    /// h0 - h1 = deg - g + 1 on both test curves.
    #[test]
    fn riemann_roch_identity(picks in picks_strategy(5), genus3 in any::<bool>()) {
        let curve = if genus3 { split_genus3_curve() } else { split_genus2_curve() };
        let d = random_divisor(&curve, &picks);
        let g = curve.genus() as i64;
        let lhs = h0(&curve, &d).unwrap() as i64 - h1(&curve, &d).unwrap() as i64;
        prop_assert_eq!(lhs, d.degree() - g + 1);
    }

    /// Adding one rational point raises h0 by 0 or 1.
    #[test]
    fn h0_monotone_in_points(picks in picks_strategy(4), extra in 0usize..500) {
        let curve = split_genus2_curve();
        let d = random_divisor(&curve, &picks);
        let places = curve.rational_places();
        let p = places[extra % places.len()];
        let bigger = d.add(&Divisor::from_place(&curve, p, 1).unwrap()).unwrap();
        let a = h0(&curve, &d).unwrap();
        let b = h0(&curve, &bigger).unwrap();
        prop_assert!(a <= b && b <= a + 1, "h0 jumped from {} to {}", a, b);
    }

    /// Serre duality: h1(D) = h0(K - D).
    #[test]
    fn serre_symmetry(picks in picks_strategy(4)) {
        let curve = split_genus2_curve();
        let d = random_divisor(&curve, &picks);
        let k_div = canonical_divisor(&curve);
        prop_assert_eq!(
            h1(&curve, &d).unwrap(),
            h0(&curve, &k_div.sub(&d).unwrap()).unwrap()
        );
    }

    /// Every basis element of L(D) satisfies div(phi) + D >= 0 at all
    /// rational places plus infinity.
    #[test]
    fn basis_is_effective(picks in picks_strategy(4)) {
        let curve = split_genus2_curve();
        let d = random_divisor(&curve, &picks);
        let space = rr_basis(&curve, &d).unwrap();
        let mut checkpoints: Vec<Place> = curve.rational_places();
        checkpoints.push(Place::Infinity);
        for phi in space.basis() {
            for &place in &checkpoints {
                if let Some(v) = valuation(&curve, phi, &place) {
                    prop_assert!(
                        v + d.coeff(&place) >= 0,
                        "pole violation at {:?}: v = {}, D = {}",
                        place, v, d.coeff(&place)
                    );
                }
            }
        }
    }

    /// Twist identification: dim K_{p,q}(C, F, L) = dim K_{p,q-1}(C, F+L, L).
    #[test]
    fn koszul_twist_identification(
        p in 0i64..3,
        q in 0i64..3,
        f_mult in 0i64..3,
        l_extra in 0i64..2,
    ) {
        let curve = split_genus2_curve();
        let l_div = Divisor::infinity(&curve, 5 + l_extra);
        let f_div = Divisor::infinity(&curve, f_mult);
        let lhs = koszul_dim(&curve, p, q, &f_div, &l_div).unwrap().dim;
        let rhs = koszul_dim(&curve, p, q - 1, &f_div.add(&l_div).unwrap(), &l_div)
            .unwrap()
            .dim;
        prop_assert_eq!(lhs, rhs);
    }

    /// Multiplication is symmetric: rank of L(D1) x L(D2) -> L(D1 + D2)
    /// does not depend on the order of the factors.
    #[test]
    fn mult_map_symmetry(m1 in 3i64..7, m2 in 3i64..7) {
        let curve = split_genus2_curve();
        let d1 = Divisor::infinity(&curve, m1);
        let d2 = Divisor::infinity(&curve, m2);
        let a = mult_map(&curve, &d1, &d2).unwrap();
        let b = mult_map(&curve, &d2, &d1).unwrap();
        prop_assert_eq!(a.rank, b.rank);
    }
}

/// corank mu_pi = dim K_{d+g-3,1}(C, L - Delta, K + L) on constant-j
/// instances: the Koszul slot that the reduction step equates with the
/// cokernel of the multiplication map.
#[test]
fn projection_formula_matches_mu_corank() {
    let curve = split_genus2_curve();
    let g = curve.genus() as i64;
    let k_div = canonical_divisor(&curve);
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let kinds = [ConstJKind::Zero, ConstJKind::J1728, ConstJKind::Other];
    let mut checked = 0;
    for trial in 0..12 {
        let kind = kinds[trial % kinds.len()];
        let d = 3 + (trial as i64 % 2);
        let data = match build_constant_j_instance(&curve, d, kind, &mut rng) {
            Ok(w) => w,
            Err(_) => continue,
        };
        let inv = match invariants_from_weierstrass(&data) {
            Ok(inv) => inv,
            Err(_) => continue,
        };
        let delta = inv.delta.clone().expect("constant-j instances have split discriminant");
        let mu = mu_pi(&curve, &data.l_div, &delta).unwrap();
        let slot = koszul_dim(
            &curve,
            d + g - 3,
            1,
            &data.l_div.sub(&delta).unwrap(),
            &k_div.add(&data.l_div).unwrap(),
        )
        .unwrap();
        assert_eq!(
            mu.corank, slot.dim,
            "kind {kind:?}, d = {d}: corank {} vs Koszul dim {}",
            mu.corank, slot.dim
        );
        checked += 1;
    }
    assert!(checked >= 6, "only {checked} instances were checked");
}

/// Analyze output round-trips: re-running the rule engine on the extracted
/// invariants reproduces the decided outcome.
#[test]
fn decide_is_stable_under_reextraction() {
    let curve = split_genus2_curve();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let data = build_constant_j_instance(&curve, 3, ConstJKind::Zero, &mut rng).unwrap();
    let first = torelli_decide(&data, true).unwrap();
    let second = torelli_decide(&data, true).unwrap();
    assert_eq!(first.outcome, second.outcome);
    assert_eq!(first.rule, second.rule);
    assert_eq!(first.mu_corank, second.mu_corank);
    assert_ne!(first.outcome, Outcome::OutOfScope);
}
