//! Divisors on a hyperelliptic curve: arithmetic, degree, principal divisors
//! of functions, and the canonical divisor (2g-2) * infinity.

use std::collections::BTreeMap;

use crate::curve::{valuation, FunctionRep, HyperellipticCurve, Place};
use crate::error::{Error, Result};
use crate::exactlinalg::poly_roots;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Divisor {
    curve: HyperellipticCurve,
    coeffs: BTreeMap<Place, i64>,
}

impl Divisor {
    pub fn zero(curve: &HyperellipticCurve) -> Self {
        Divisor {
            curve: curve.clone(),
            coeffs: BTreeMap::new(),
        }
    }

    pub fn from_place(curve: &HyperellipticCurve, place: Place, mult: i64) -> Result<Self> {
        if !curve.contains(&place) {
            return Err(Error::NonSplitSupport);
        }
        let mut d = Divisor::zero(curve);
        d.set(place, mult);
        Ok(d)
    }

    pub fn from_pairs(
        curve: &HyperellipticCurve,
        pairs: &[(Place, i64)],
    ) -> Result<Self> {
        let mut d = Divisor::zero(curve);
        for &(place, mult) in pairs {
            if !curve.contains(&place) {
                return Err(Error::NonSplitSupport);
            }
            d.bump(place, mult);
        }
        Ok(d)
    }

    pub fn infinity(curve: &HyperellipticCurve, mult: i64) -> Self {
        let mut d = Divisor::zero(curve);
        d.set(Place::Infinity, mult);
        d
    }

    pub fn curve(&self) -> &HyperellipticCurve {
        &self.curve
    }

    fn set(&mut self, place: Place, mult: i64) {
        if mult == 0 {
            self.coeffs.remove(&place);
        } else {
            self.coeffs.insert(place, mult);
        }
    }

    fn bump(&mut self, place: Place, delta: i64) {
        let v = self.coeff(&place) + delta;
        self.set(place, v);
    }

    pub fn coeff(&self, place: &Place) -> i64 {
        self.coeffs.get(place).copied().unwrap_or(0)
    }

    pub fn support(&self) -> impl Iterator<Item = (&Place, i64)> {
        self.coeffs.iter().map(|(p, &m)| (p, m))
    }

    pub fn support_size(&self) -> usize {
        self.coeffs.len()
    }

    pub fn degree(&self) -> i64 {
        self.coeffs.values().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_effective(&self) -> bool {
        self.coeffs.values().all(|&m| m > 0)
    }

    /// Effective with all coefficients equal to one (the zero divisor counts).
    pub fn is_reduced(&self) -> bool {
        self.coeffs.values().all(|&m| m == 1)
    }

    pub fn add(&self, o: &Divisor) -> Result<Divisor> {
        if self.curve != o.curve {
            return Err(Error::CurveMismatch);
        }
        let mut out = self.clone();
        for (&place, &m) in &o.coeffs {
            out.bump(place, m);
        }
        Ok(out)
    }

    pub fn sub(&self, o: &Divisor) -> Result<Divisor> {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Divisor {
        Divisor {
            curve: self.curve.clone(),
            coeffs: self.coeffs.iter().map(|(&p, &m)| (p, -m)).collect(),
        }
    }

    pub fn scale(&self, c: i64) -> Divisor {
        if c == 0 {
            return Divisor::zero(&self.curve);
        }
        Divisor {
            curve: self.curve.clone(),
            coeffs: self.coeffs.iter().map(|(&p, &m)| (p, c * m)).collect(),
        }
    }

    /// Clamp every coefficient to 1; errors on any negative coefficient.
    pub fn reduce_support(&self) -> Result<Divisor> {
        if self.coeffs.values().any(|&m| m < 0) {
            return Err(Error::NotEffective(
                "reduce_support needs an effective divisor".into(),
            ));
        }
        Ok(Divisor {
            curve: self.curve.clone(),
            coeffs: self.coeffs.keys().map(|&p| (p, 1)).collect(),
        })
    }
}

impl std::fmt::Display for Divisor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (p, m) in self.support() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if m == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{m}*{p}")?;
            }
        }
        Ok(())
    }
}

/// The canonical divisor class of the odd model: (2g - 2) * infinity.
pub fn canonical_divisor(curve: &HyperellipticCurve) -> Divisor {
    Divisor::infinity(curve, 2 * curve.genus() as i64 - 2)
}

/// The principal divisor of a nonzero function whose zeros and poles are all
/// rational. A zero or pole over a non-split x-coordinate raises
/// `NonSplitSupport`.
pub fn divisor_of_function(
    curve: &HyperellipticCurve,
    phi: &FunctionRep,
) -> Result<Divisor> {
    if phi.is_zero() {
        return Err(Error::ZeroFunction);
    }
    let k = curve.field();
    // candidate x-coordinates: roots of the denominator and of the norm
    let mut xs = std::collections::BTreeSet::new();
    let mut require_split = |poly: &crate::exactlinalg::Poly| -> Result<()> {
        if poly.deg().map(|d| d > 0).unwrap_or(false) {
            let r = poly_roots(k, poly)?;
            if !r.splits {
                return Err(Error::NonSplitSupport);
            }
            for (root, _) in r.roots {
                xs.insert(root);
            }
        }
        Ok(())
    };
    require_split(&phi.numerator_norm(curve))?;
    require_split(phi.den())?;
    let mut out = Divisor::zero(curve);
    for x0 in xs {
        let places = curve.places_above(x0);
        if places.is_empty() {
            // a zero or pole concentrated at a degree-2 place
            return Err(Error::NonSplitSupport);
        }
        for place in places {
            if let Some(v) = valuation(curve, phi, &place) {
                if v != 0 {
                    out.bump(place, v);
                }
            }
        }
    }
    if let Some(v) = valuation(curve, phi, &Place::Infinity) {
        if v != 0 {
            out.bump(Place::Infinity, v);
        }
    }
    debug_assert_eq!(out.degree(), 0, "principal divisors have degree zero");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlinalg::{Fp, Poly};

    fn genus2_curve() -> HyperellipticCurve {
        let k = Fp::new(101).unwrap();
        HyperellipticCurve::new(101, Poly::from_coeffs(&k, &[1, 0, 0, 0, 0, 1])).unwrap()
    }

    fn split_genus2_curve() -> HyperellipticCurve {
        let k = Fp::new(101).unwrap();
        let mut f = Poly::x();
        for r in 1..5 {
            f = f.mul(&k, &Poly::linear_root(&k, r));
        }
        HyperellipticCurve::new(101, f).unwrap()
    }

    #[test]
    fn canonical_divisor_degree() {
        let c = genus2_curve();
        let kd = canonical_divisor(&c);
        assert_eq!(kd.degree(), 2);
        assert_eq!(kd.coeff(&Place::Infinity), 2);

        let k = Fp::new(101).unwrap();
        let e = HyperellipticCurve::new(101, Poly::from_coeffs(&k, &[5, 3, 0, 1])).unwrap();
        assert!(canonical_divisor(&e).is_zero());

        let g3 = HyperellipticCurve::new(
            101,
            Poly::from_coeffs(&k, &[3, 1, 0, 0, 0, 0, 0, 1]),
        )
        .unwrap();
        assert_eq!(canonical_divisor(&g3).degree(), 4);
    }

    #[test]
    fn divisor_of_x_minus_3_matches_residuosity() {
        let c = genus2_curve();
        let k = *c.field();
        // f(3) = 3^5 + 1 = 244 = 42 mod 101; exhaustive squaring decides
        // whether the fiber splits
        let is_square = (0..101).any(|t| k.mul(t, t) == 42);
        let phi = FunctionRep::from_poly(Poly::from_signed(&k, &[-3, 1]));
        let d = divisor_of_function(&c, &phi);
        if is_square {
            let d = d.unwrap();
            let y3 = k.sqrt(42).unwrap();
            assert_eq!(d.coeff(&Place::affine(3, y3)), 1);
            assert_eq!(d.coeff(&Place::affine(3, k.neg(y3))), 1);
            assert_eq!(d.coeff(&Place::Infinity), -2);
            assert_eq!(d.degree(), 0);
        } else {
            assert_eq!(d, Err(Error::NonSplitSupport));
        }
    }

    #[test]
    fn divisor_of_constant_is_zero() {
        let c = genus2_curve();
        let k = *c.field();
        let phi = FunctionRep::constant(&k, 17);
        assert!(divisor_of_function(&c, &phi).unwrap().is_zero());
        assert_eq!(
            divisor_of_function(&c, &FunctionRep::zero()),
            Err(Error::ZeroFunction)
        );
    }

    #[test]
    fn divisor_of_y_on_split_model() {
        let c = split_genus2_curve();
        let d = divisor_of_function(&c, &FunctionRep::y()).unwrap();
        for r in 0..5 {
            assert_eq!(d.coeff(&Place::affine(r, 0)), 1);
        }
        assert_eq!(d.coeff(&Place::Infinity), -5);
        assert_eq!(d.degree(), 0);
    }

    #[test]
    fn divisor_of_product_is_sum() {
        let c = split_genus2_curve();
        let k = *c.field();
        let phi = FunctionRep::from_poly(Poly::from_signed(&k, &[-7, 1]));
        let psi = FunctionRep::y();
        let lhs = divisor_of_function(&c, &phi.mul(&c, &psi));
        let rhs = divisor_of_function(&c, &phi)
            .and_then(|d| d.add(&divisor_of_function(&c, &psi)?));
        match (lhs, rhs) {
            (Ok(a), Ok(b)) => assert_eq!(a, b),
            (Err(Error::NonSplitSupport), Err(Error::NonSplitSupport)) => {}
            other => panic!("inconsistent results: {other:?}"),
        }
    }

    #[test]
    fn reduce_support_and_arithmetic() {
        let c = split_genus2_curve();
        let p1 = Place::affine(1, 0);
        let p2 = Place::affine(2, 0);
        let d = Divisor::from_pairs(&c, &[(p1, 10), (p2, 10)]).unwrap();
        let r = d.reduce_support().unwrap();
        assert_eq!(r.coeff(&p1), 1);
        assert_eq!(r.coeff(&p2), 1);
        assert_eq!(r.degree(), 2);

        assert!(d.add(&d.neg()).unwrap().is_zero());

        let mixed = Divisor::from_pairs(&c, &[(p1, 1), (Place::Infinity, -1)]).unwrap();
        assert!(matches!(
            mixed.reduce_support(),
            Err(Error::NotEffective(_))
        ));
    }

    #[test]
    fn curve_mismatch_is_rejected() {
        let a = genus2_curve();
        let b = split_genus2_curve();
        let da = Divisor::infinity(&a, 1);
        let db = Divisor::infinity(&b, 1);
        assert_eq!(da.add(&db), Err(Error::CurveMismatch));
    }
}
