//! The acceptance suite: nine end-to-end checks over F_101 exercising the
//! Riemann-Roch engine, Koszul duality, the surjectivity and counterexample
//! lemmas, the example constructors, and the rule engine. Shared by the
//! `acceptance` integration test target and the CLI `selftest` command.

use crate::curve::{HyperellipticCurve, Place};
use crate::divisor::{canonical_divisor, Divisor};
use crate::error::{Error, Result};
use crate::exactlinalg::{Fp, Poly};
use crate::koszul::{duality_defect, koszul_dim, mu_pi};
use crate::rrspace::{h0, rr_basis};
use crate::torelli::{
    build_d5_example, build_twist_example, discriminant, fiber_bundle_check, find_split_cubic,
    invariants_from_weierstrass, torelli_decide, torelli_verdict, torsion_order, JClass, Outcome,
    SurfaceInvariants, WeierstrassData,
};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn genus2_curve() -> HyperellipticCurve {
    let k = Fp::new(101).unwrap();
    HyperellipticCurve::new(101, Poly::from_coeffs(&k, &[1, 0, 0, 0, 0, 1])).unwrap()
}

pub fn split_genus2_curve() -> HyperellipticCurve {
    let k = Fp::new(101).unwrap();
    let mut f = Poly::one();
    for r in 0..5 {
        f = f.mul(&k, &Poly::linear_root(&k, r));
    }
    HyperellipticCurve::new(101, f).unwrap()
}

pub fn split_genus3_curve() -> HyperellipticCurve {
    let k = Fp::new(101).unwrap();
    let mut f = Poly::one();
    for r in 0..7 {
        f = f.mul(&k, &Poly::linear_root(&k, r));
    }
    HyperellipticCurve::new(101, f).unwrap()
}

pub fn elliptic_curve() -> HyperellipticCurve {
    // y^2 = x^3 - x: rational 2-torsion at (0, 0)
    let k = Fp::new(101).unwrap();
    HyperellipticCurve::new(101, Poly::from_signed(&k, &[0, -1, 0, 1])).unwrap()
}

/// x-values whose fiber consists of two rational non-Weierstrass places.
fn split_x_pool(curve: &HyperellipticCurve) -> Vec<u64> {
    let k = curve.field();
    (0..k.p())
        .filter(|&x| {
            let fx = curve.f().eval(k, x);
            fx != 0 && k.sqrt(fx).is_some()
        })
        .collect()
}

fn product_of_linear<R: Rng>(
    curve: &HyperellipticCurve,
    count: usize,
    rng: &mut R,
) -> Result<Poly> {
    let k = curve.field();
    let pool = split_x_pool(curve);
    if pool.len() < count {
        return Err(Error::RetryExhausted(0));
    }
    let mut poly = Poly::one();
    for idx in sample(rng, pool.len(), count) {
        poly = poly.mul(k, &Poly::linear_root(k, pool[idx]));
    }
    Ok(poly)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstJKind {
    /// A = 0: j = 0, s = 6d singular fibers
    Zero,
    /// B = 0: j = 1728, s = 4d
    J1728,
    /// A = 3G^2, B = G^3: constant j distinct from 0 and 1728, s = 2d
    Other,
    /// the s = d + 1 counterexample shape (d = 5, B a fifth power)
    Counter,
}

/// A constant-j surface over the given genus-2 curve with L = d*infinity
/// and all singular fibers at rational places.
pub fn build_constant_j_instance<R: Rng>(
    curve: &HyperellipticCurve,
    d: i64,
    kind: ConstJKind,
    rng: &mut R,
) -> Result<WeierstrassData> {
    use crate::curve::FunctionRep;
    let k = curve.field();
    let l_div = Divisor::infinity(curve, d);
    let (a, b) = match kind {
        ConstJKind::Zero => {
            let poly = product_of_linear(curve, (3 * d) as usize, rng)?;
            (FunctionRep::zero(), FunctionRep::from_poly(poly))
        }
        ConstJKind::J1728 => {
            let poly = product_of_linear(curve, (2 * d) as usize, rng)?;
            (FunctionRep::from_poly(poly), FunctionRep::zero())
        }
        ConstJKind::Other => {
            let g = FunctionRep::from_poly(product_of_linear(curve, d as usize, rng)?);
            (g.pow(curve, 2).scale(k, 3), g.pow(curve, 3))
        }
        ConstJKind::Counter => {
            if d != 5 {
                return Err(Error::BadCubic("the counterexample shape needs d = 5".into()));
            }
            let cubic = product_of_linear(curve, 3, rng)?;
            let b = FunctionRep::from_poly(cubic).pow(curve, 5);
            (FunctionRep::zero(), b)
        }
    };
    Ok(WeierstrassData {
        curve: curve.clone(),
        l_div,
        a,
        b,
        h1_parity: None,
        clifford: Some(0),
    })
}

pub struct CriterionReport {
    pub index: usize,
    pub name: &'static str,
    pub outcome: std::result::Result<String, String>,
}

fn random_divisor<R: Rng>(
    curve: &HyperellipticCurve,
    places: &[Place],
    g: i64,
    rng: &mut R,
) -> Divisor {
    let mut div = Divisor::zero(curve);
    let count = rng.gen_range(1..=3usize);
    for _ in 0..count {
        let place = places[rng.gen_range(0..places.len())];
        let mult = loop {
            let m = rng.gen_range(-2..=2i64);
            if m != 0 {
                break m;
            }
        };
        div = div
            .add(&Divisor::from_place(curve, place, mult).unwrap())
            .unwrap();
    }
    let target = rng.gen_range(-3..=3 * g + 2);
    div.add(&Divisor::infinity(curve, target - div.degree()))
        .unwrap()
}

/// Criterion 1: Riemann-Roch identity on 200 random divisors per curve,
/// with the dimension recomputed from scratch (no degree shortcut).
pub fn criterion_1() -> Result<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(1001);
    let mut checked = 0;
    for curve in [genus2_curve(), split_genus3_curve()] {
        let g = curve.genus() as i64;
        let kdiv = canonical_divisor(&curve);
        let places = curve.rational_places();
        for _ in 0..200 {
            let d = random_divisor(&curve, &places, g, &mut rng);
            let h0d = rr_basis(&curve, &d)?.dim() as i64;
            let h1d = rr_basis(&curve, &kdiv.sub(&d)?)?.dim() as i64;
            if h0d - h1d != d.degree() - g + 1 {
                return Err(Error::OracleMismatch(format!(
                    "Riemann-Roch fails for {d}: h0 = {h0d}, h1 = {h1d}"
                )));
            }
            if d.degree() >= 2 * g - 1 && h0d != d.degree() - g + 1 {
                return Err(Error::OracleMismatch(format!(
                    "large-degree h0 wrong for {d}: {h0d}"
                )));
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} random divisors satisfy Riemann-Roch"))
}

/// Criterion 2: duality defect 0 for p, q in {0, 1, 2} on genus 2, L = 5*inf.
pub fn criterion_2() -> Result<String> {
    let curve = genus2_curve();
    let l = Divisor::infinity(&curve, 5);
    for p in 0..=2i64 {
        for q in 0..=2i64 {
            let defect = duality_defect(&curve, p, q, &l)?;
            if defect != 0 {
                return Err(Error::OracleMismatch(format!(
                    "duality defect {defect} at (p, q) = ({p}, {q})"
                )));
            }
        }
    }
    Ok("all 9 duality defects vanish".to_string())
}

/// Criterion 3: K_{d+g-3,1}(C, K, K+L) = 0 for
/// (g, d) in {(2, 1 with h0(L) = 0), (2, 2), (2, 3), (3, 2)}.
pub fn criterion_3() -> Result<String> {
    let mut details = Vec::new();
    let g2 = split_genus2_curve();
    // a degree-1 class with h0 = 0: inf + w1 - w2 for a suitable pair
    let ws = g2.weierstrass_places();
    let mut twist_l = None;
    'outer: for (i, wi) in ws.iter().enumerate() {
        for wj in &ws[..i] {
            let cand = Divisor::infinity(&g2, 1)
                .add(&Divisor::from_place(&g2, *wi, 1)?)?
                .sub(&Divisor::from_place(&g2, *wj, 1)?)?;
            if h0(&g2, &cand)? == 0 {
                twist_l = Some(cand);
                break 'outer;
            }
        }
    }
    let twist_l = twist_l.ok_or(Error::NoTwistFound)?;
    let mut cases: Vec<(HyperellipticCurve, Divisor, i64)> = vec![
        (g2.clone(), twist_l, 1),
        (g2.clone(), Divisor::infinity(&g2, 2), 2),
        (g2.clone(), Divisor::infinity(&g2, 3), 3),
    ];
    let g3 = split_genus3_curve();
    cases.push((g3.clone(), Divisor::infinity(&g3, 2), 2));
    for (curve, l_div, d) in cases {
        let g = curve.genus() as i64;
        let kdiv = canonical_divisor(&curve);
        let p = d + g - 3;
        let slot = koszul_dim(&curve, p, 1, &kdiv, &kdiv.add(&l_div)?)?;
        if slot.dim != 0 {
            return Err(Error::OracleMismatch(format!(
                "K_{{{p},1}} has dimension {} for g = {g}, d = {d}",
                slot.dim
            )));
        }
        details.push(format!("(g,d)=({g},{d})"));
    }
    Ok(format!("vanishing verified for {}", details.join(", ")))
}

/// Criterion 4: 25 constant-j instances satisfying the H0-lemma hypotheses
/// have surjective mu_pi.
pub fn criterion_4() -> Result<String> {
    let curve = split_genus2_curve();
    let mut rng = ChaCha8Rng::seed_from_u64(1004);
    let kinds = [ConstJKind::Zero, ConstJKind::J1728, ConstJKind::Other];
    let mut done = 0;
    while done < 25 {
        let d = 3 + (done % 3) as i64;
        let kind = kinds[(done / 3) % 3];
        let w = build_constant_j_instance(&curve, d, kind, &mut rng)?;
        let inv = invariants_from_weierstrass(&w)?;
        // hypothesis check: d >= 3 and s >= d + 2
        if !(inv.d >= 3 && (inv.s as i64) >= inv.d + 2) {
            return Err(Error::OracleMismatch(format!(
                "generator produced d = {}, s = {} outside the lemma hypotheses",
                inv.d, inv.s
            )));
        }
        let delta = inv.delta.clone().unwrap();
        let mu = mu_pi(&curve, &w.l_div, &delta)?;
        if !mu.surjective {
            return Err(Error::OracleMismatch(format!(
                "mu_pi has corank {} on a surjectivity-lemma instance (d = {}, s = {})",
                mu.corank, inv.d, inv.s
            )));
        }
        done += 1;
    }
    Ok("25 generated instances all have surjective mu_pi".to_string())
}

/// Criterion 5: the d = 5 counterexample end to end.
pub fn criterion_5() -> Result<String> {
    let curve = genus2_curve();
    let cubic = find_split_cubic(&curve)?;
    let w = build_d5_example(&curve, &cubic)?;
    let inv = invariants_from_weierstrass(&w)?;
    if inv.d != 5 || inv.s != 6 || inv.j_class != JClass::ConstantZero || inv.h0_linv_delta != 1 {
        return Err(Error::OracleMismatch(format!(
            "invariants off: d = {}, s = {}, j = {:?}, h0(L^-1(Delta)) = {}",
            inv.d, inv.s, inv.j_class, inv.h0_linv_delta
        )));
    }
    let verdict = torelli_decide(&w, true)?;
    if verdict.outcome != Outcome::Fails || !verdict.rule.starts_with("R6") {
        return Err(Error::OracleMismatch(format!(
            "verdict {:?} via {} instead of Fails via R6",
            verdict.outcome, verdict.rule
        )));
    }
    let corank = verdict.mu_corank.unwrap_or(0);
    if corank < 1 {
        return Err(Error::OracleMismatch("mu_pi corank is 0".to_string()));
    }
    // each discriminant zero has order exactly 10 (the II* signature)
    let disc = discriminant(&curve, &w.a, &w.b);
    for (place, _) in inv.delta.as_ref().unwrap().support() {
        let ord = crate::curve::valuation(&curve, &disc, place)
            .map(|v| v + 12 * w.l_div.coeff(place))
            .unwrap_or(i64::MAX);
        if ord != 10 {
            return Err(Error::OracleMismatch(format!(
                "discriminant order {ord} at {place}, expected 10"
            )));
        }
    }
    Ok(format!(
        "d = 5, s = 6, j = 0, mu corank = {corank}, six order-10 discriminant zeros"
    ))
}

/// Criterion 6: the degree-1 twist construction end to end.
pub fn criterion_6() -> Result<String> {
    let curve = split_genus2_curve();
    let mut rng = ChaCha8Rng::seed_from_u64(1006);
    let w = build_twist_example(&curve, &mut rng)?;
    if w.l_div.degree() != 1 || h0(&curve, &w.l_div)? != 0 {
        return Err(Error::OracleMismatch(format!(
            "L has degree {} and h0 = {}",
            w.l_div.degree(),
            h0(&curve, &w.l_div)?
        )));
    }
    let inv = invariants_from_weierstrass(&w)?;
    if inv.j_class != JClass::Nonconstant {
        return Err(Error::OracleMismatch(format!("j class {:?}", inv.j_class)));
    }
    let verdict = torelli_verdict(&inv)?;
    if verdict.outcome != Outcome::Holds || !verdict.rule.starts_with("R3") {
        return Err(Error::OracleMismatch(format!(
            "verdict {:?} via {}",
            verdict.outcome, verdict.rule
        )));
    }
    Ok("d = 1, h0(L) = 0, nonconstant j, verdict Holds via R3".to_string())
}

/// Criterion 7: the order-2 fiber-bundle corollary on an elliptic base.
pub fn criterion_7() -> Result<String> {
    let curve = elliptic_curve();
    let t = Divisor::from_pairs(
        &curve,
        &[(Place::affine(0, 0), 1), (Place::Infinity, -1)],
    )?;
    if torsion_order(&curve, &t, 6)? != Some(2) {
        return Err(Error::OracleMismatch("T is not of order 2".to_string()));
    }
    let (verdict, mu) = fiber_bundle_check(&curve, &t)?;
    if verdict.outcome != Outcome::Fails || mu.rank != 0 || mu.target_dim != 1 {
        return Err(Error::OracleMismatch(format!(
            "verdict {:?}, rank {}, target {}",
            verdict.outcome, mu.rank, mu.target_dim
        )));
    }
    Ok("Fails with mu rank 0 against a 1-dimensional target".to_string())
}

/// Criterion 8: rule verdicts and direct mu_pi computation agree on a
/// 50-instance constant-j sweep (any disagreement raises OracleMismatch
/// inside torelli_decide).
pub fn criterion_8() -> Result<String> {
    let split = split_genus2_curve();
    let plain = genus2_curve();
    let mut rng = ChaCha8Rng::seed_from_u64(1008);
    let kinds = [
        ConstJKind::Zero,
        ConstJKind::J1728,
        ConstJKind::Other,
        ConstJKind::Counter,
    ];
    let mut holds = 0;
    let mut fails = 0;
    for i in 0..50usize {
        let kind = kinds[i % 4];
        let (curve, d) = if kind == ConstJKind::Counter {
            (&plain, 5)
        } else {
            (&split, 3 + (i / 4 % 3) as i64)
        };
        let w = build_constant_j_instance(curve, d, kind, &mut rng)?;
        let verdict = torelli_decide(&w, true)?;
        match verdict.outcome {
            Outcome::Holds => holds += 1,
            Outcome::Fails => fails += 1,
            other => {
                return Err(Error::OracleMismatch(format!(
                    "unexpected outcome {other:?} on instance {i}"
                )))
            }
        }
    }
    Ok(format!(
        "50 instances, {holds} Holds and {fails} Fails, rule and mu_pi agree throughout"
    ))
}

/// Criterion 9: the golden table of classic verdicts.
pub fn criterion_9() -> Result<String> {
    let row = |g: usize, d: i64, s: usize, j: JClass, h0_l: usize| SurfaceInvariants {
        g,
        d,
        s,
        delta: None,
        h0_l,
        h0_linv_delta: 0,
        h0_l2inv_delta: 0,
        j_class: j,
        l_trivial: false,
        l2_iso_delta: false,
        h1_parity: None,
        clifford: Some(0),
        very_ample: (None, None),
    };
    let expect = |inv: SurfaceInvariants, outcome: Outcome, label: &str| -> Result<()> {
        let v = torelli_verdict(&inv)?;
        if v.outcome != outcome {
            return Err(Error::OracleMismatch(format!(
                "{label}: got {:?} via {}, expected {:?}",
                v.outcome, v.rule, outcome
            )));
        }
        Ok(())
    };
    expect(
        row(0, 1, 2, JClass::Nonconstant, 2),
        Outcome::Fails,
        "g=0, d=1",
    )?;
    expect(
        row(0, 2, 4, JClass::ConstantOther, 3),
        Outcome::Holds,
        "g=0, d=2, constant j",
    )?;
    expect(
        row(1, 1, 3, JClass::ConstantOther, 1),
        Outcome::Fails,
        "g=1, d=1, j not 0 or 1728",
    )?;
    expect(
        row(1, 2, 4, JClass::ConstantOther, 2),
        Outcome::Fails,
        "g=1, d=2, j not 0 or 1728",
    )?;
    expect(
        row(2, 1, 3, JClass::Nonconstant, 1),
        Outcome::ConjecturallyFails,
        "g=2, d=1, effective L",
    )?;
    Ok("all golden rows match".to_string())
}

pub fn run_all() -> Vec<CriterionReport> {
    let criteria: Vec<(&'static str, fn() -> Result<String>)> = vec![
        ("riemann-roch suite", criterion_1),
        ("koszul duality", criterion_2),
        ("syzygy vanishing", criterion_3),
        ("h0-lemma surjectivity", criterion_4),
        ("d=5 counterexample", criterion_5),
        ("twist construction", criterion_6),
        ("fiber-bundle corollary", criterion_7),
        ("rule/oracle consistency", criterion_8),
        ("known-classics table", criterion_9),
    ];
    criteria
        .into_iter()
        .enumerate()
        .map(|(i, (name, f))| CriterionReport {
            index: i + 1,
            name,
            outcome: f().map_err(|e| e.to_string()),
        })
        .collect()
}
