//! Hyperelliptic curves y^2 = f(x) in odd-degree Weierstrass form, their
//! rational places, and exact valuations of function-field elements.
//!
//! Valuations use closed forms throughout. At the unique infinite place and
//! at Weierstrass places the two components a(x) and b(x)*y of a function
//! have valuations of opposite parity, so the minimum is exact. At a
//! non-Weierstrass affine place cancellation is resolved through the norm
//! (a + by)(a - by) = a^2 - b^2 f after stripping common x - x0 factors.

use crate::error::{Error, Result};
use crate::exactlinalg::{poly_roots, Fp, Poly};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HyperellipticCurve {
    field: Fp,
    f: Poly,
    genus: usize,
}

impl HyperellipticCurve {
    /// Build y^2 = f(x) over F_p; f must be monic, squarefree, of odd degree >= 3.
    pub fn new(p: u64, f: Poly) -> Result<Self> {
        let field = Fp::new(p)?;
        let deg = match f.deg() {
            Some(d) if d >= 3 && d % 2 == 1 => d,
            _ => {
                return Err(Error::BadDegree(
                    "defining polynomial must have odd degree >= 3".into(),
                ))
            }
        };
        if f.lc() != 1 {
            return Err(Error::BadDegree("defining polynomial must be monic".into()));
        }
        if !f.is_squarefree(&field) {
            return Err(Error::NotSquarefree);
        }
        Ok(HyperellipticCurve {
            field,
            f,
            genus: (deg - 1) / 2,
        })
    }

    pub fn field(&self) -> &Fp {
        &self.field
    }

    pub fn p(&self) -> u64 {
        self.field.p()
    }

    pub fn f(&self) -> &Poly {
        &self.f
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    /// Rational places over a given x-coordinate: two, one (Weierstrass), or
    /// none when f(x0) is a non-residue.
    pub fn places_above(&self, x0: u64) -> Vec<Place> {
        let v = self.f.eval(&self.field, x0);
        if v == 0 {
            return vec![Place::affine(x0, 0)];
        }
        match self.field.sqrt(v) {
            Some(y0) => vec![
                Place::affine(x0, y0),
                Place::affine(x0, self.field.neg(y0)),
            ],
            None => Vec::new(),
        }
    }

    pub fn contains(&self, place: &Place) -> bool {
        match place {
            Place::Infinity => true,
            Place::Affine { x, y } => {
                self.field.mul(*y, *y) == self.f.eval(&self.field, *x)
            }
        }
    }

    /// Every rational place, infinity first.
    pub fn rational_places(&self) -> Vec<Place> {
        let mut out = vec![Place::Infinity];
        for x0 in 0..self.p() {
            out.extend(self.places_above(x0));
        }
        out
    }

    /// The ramification places of x: the infinite place plus every (x0, 0)
    /// with f(x0) = 0.
    pub fn weierstrass_places(&self) -> Vec<Place> {
        let mut out = vec![Place::Infinity];
        let roots = poly_roots(&self.field, &self.f).expect("f is nonzero");
        for (r, _) in roots.roots {
            out.push(Place::affine(r, 0));
        }
        out
    }
}

/// A rational place of the curve: the unique place at infinity of the odd
/// model, or an affine point (x0, y0) with y0^2 = f(x0).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    Infinity,
    Affine { x: u64, y: u64 },
}

impl Place {
    pub fn affine(x: u64, y: u64) -> Self {
        Place::Affine { x, y }
    }

    pub fn is_weierstrass(&self) -> bool {
        matches!(self, Place::Infinity | Place::Affine { y: 0, .. })
    }

    /// The image under the hyperelliptic involution.
    pub fn conjugate(&self, k: &Fp) -> Place {
        match *self {
            Place::Infinity => Place::Infinity,
            Place::Affine { x, y } => Place::Affine { x, y: k.neg(y) },
        }
    }
}

impl std::fmt::Display for Place {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Place::Infinity => write!(f, "inf"),
            Place::Affine { x, y } => write!(f, "({x}, {y})"),
        }
    }
}

/// Element of the function field in canonical form (a(x) + b(x)*y) / den(x):
/// gcd(a, b, den) = 1 and den monic. The zero function is (0, 0, 1).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FunctionRep {
    a: Poly,
    b: Poly,
    den: Poly,
}

impl FunctionRep {
    pub fn new(k: &Fp, a: Poly, b: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::BadDegree("denominator must be nonzero".into()));
        }
        let mut f = FunctionRep { a, b, den };
        f.canonicalize(k);
        Ok(f)
    }

    pub fn zero() -> Self {
        FunctionRep {
            a: Poly::zero(),
            b: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        FunctionRep {
            a: Poly::one(),
            b: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn constant(k: &Fp, c: u64) -> Self {
        FunctionRep {
            a: Poly::constant(k, c),
            b: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn from_poly(a: Poly) -> Self {
        FunctionRep {
            a,
            b: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn y() -> Self {
        FunctionRep {
            a: Poly::zero(),
            b: Poly::one(),
            den: Poly::one(),
        }
    }

    pub fn a(&self) -> &Poly {
        &self.a
    }

    pub fn b(&self) -> &Poly {
        &self.b
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    fn canonicalize(&mut self, k: &Fp) {
        if self.is_zero() {
            self.den = Poly::one();
            return;
        }
        let g = self.a.gcd(k, &self.b).gcd(k, &self.den);
        if g.deg() != Some(0) {
            self.a = self.a.divrem(k, &g).0;
            self.b = self.b.divrem(k, &g).0;
            self.den = self.den.divrem(k, &g).0;
        }
        let lead = k.inv(self.den.lc());
        self.a = self.a.scale(k, lead);
        self.b = self.b.scale(k, lead);
        self.den = self.den.scale(k, lead);
    }

    pub fn add(&self, k: &Fp, o: &FunctionRep) -> FunctionRep {
        let a = self
            .a
            .mul(k, &o.den)
            .add(k, &o.a.mul(k, &self.den));
        let b = self
            .b
            .mul(k, &o.den)
            .add(k, &o.b.mul(k, &self.den));
        let den = self.den.mul(k, &o.den);
        let mut out = FunctionRep { a, b, den };
        out.canonicalize(k);
        out
    }

    pub fn neg(&self, k: &Fp) -> FunctionRep {
        FunctionRep {
            a: self.a.neg(k),
            b: self.b.neg(k),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, k: &Fp, o: &FunctionRep) -> FunctionRep {
        self.add(k, &o.neg(k))
    }

    pub fn scale(&self, k: &Fp, c: u64) -> FunctionRep {
        let mut out = FunctionRep {
            a: self.a.scale(k, c),
            b: self.b.scale(k, c),
            den: self.den.clone(),
        };
        out.canonicalize(k);
        out
    }

    /// (a1 + b1 y)(a2 + b2 y) = (a1 a2 + b1 b2 f) + (a1 b2 + a2 b1) y.
    pub fn mul(&self, curve: &HyperellipticCurve, o: &FunctionRep) -> FunctionRep {
        let k = curve.field();
        let a = self
            .a
            .mul(k, &o.a)
            .add(k, &self.b.mul(k, &o.b).mul(k, curve.f()));
        let b = self.a.mul(k, &o.b).add(k, &self.b.mul(k, &o.a));
        let den = self.den.mul(k, &o.den);
        let mut out = FunctionRep { a, b, den };
        out.canonicalize(k);
        out
    }

    pub fn pow(&self, curve: &HyperellipticCurve, e: usize) -> FunctionRep {
        let mut acc = FunctionRep::one();
        for _ in 0..e {
            acc = acc.mul(curve, self);
        }
        acc
    }

    /// 1/phi = den * (a - by) / (a^2 - b^2 f). The norm is nonzero for any
    /// nonzero function because f is not a square in F_p[x].
    pub fn inverse(&self, curve: &HyperellipticCurve) -> Result<FunctionRep> {
        if self.is_zero() {
            return Err(Error::ZeroFunction);
        }
        let k = curve.field();
        let norm = self.numerator_norm(curve);
        debug_assert!(!norm.is_zero());
        let a = self.den.mul(k, &self.a);
        let b = self.den.mul(k, &self.b).neg(k);
        let mut out = FunctionRep { a, b, den: norm };
        out.canonicalize(k);
        Ok(out)
    }

    pub fn div(&self, curve: &HyperellipticCurve, o: &FunctionRep) -> Result<FunctionRep> {
        Ok(self.mul(curve, &o.inverse(curve)?))
    }

    /// a^2 - b^2 f (the norm of the numerator a + by).
    pub fn numerator_norm(&self, curve: &HyperellipticCurve) -> Poly {
        let k = curve.field();
        self.a
            .mul(k, &self.a)
            .sub(k, &self.b.mul(k, &self.b).mul(k, curve.f()))
    }

    /// Value at an affine place where the denominator does not vanish.
    pub fn eval(&self, curve: &HyperellipticCurve, place: &Place) -> Option<u64> {
        let k = curve.field();
        match place {
            Place::Infinity => None,
            Place::Affine { x, y } => {
                let d = self.den.eval(k, *x);
                if d == 0 {
                    return None;
                }
                let num = k.add(self.a.eval(k, *x), k.mul(self.b.eval(k, *x), *y));
                Some(k.mul(num, k.inv(d)))
            }
        }
    }
}

impl std::fmt::Display for FunctionRep {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let num = match (self.a.is_zero(), self.b.is_zero()) {
            (true, true) => "0".to_string(),
            (false, true) => format!("{}", self.a),
            (true, false) => {
                if self.b.deg() == Some(0) && self.b.coeff(0) == 1 {
                    "y".to_string()
                } else {
                    format!("({})*y", self.b)
                }
            }
            (false, false) => format!("{} + ({})*y", self.a, self.b),
        };
        if self.den.deg() == Some(0) {
            write!(f, "{num}")
        } else {
            write!(f, "({num})/({})", self.den)
        }
    }
}

/// Exact discrete valuation of `phi` at a rational place. `None` encodes the
/// +infinity marker for the zero function.
pub fn valuation(
    curve: &HyperellipticCurve,
    phi: &FunctionRep,
    place: &Place,
) -> Option<i64> {
    if phi.is_zero() {
        return None;
    }
    let k = curve.field();
    let g = curve.genus() as i64;
    match *place {
        Place::Infinity => {
            // v(x) = -2, v(y) = -(2g+1); the two parities never collide.
            let va = phi.a.deg().map(|d| -2 * d as i64);
            let vb = phi.b.deg().map(|d| -(2 * d as i64) - (2 * g + 1));
            let vnum = match (va, vb) {
                (Some(a), Some(b)) => a.min(b),
                (Some(a), None) => a,
                (None, Some(b)) => b,
                (None, None) => unreachable!("nonzero function"),
            };
            let vden = -2 * phi.den.deg().expect("nonzero denominator") as i64;
            Some(vnum - vden)
        }
        Place::Affine { x: x0, y: 0 } => {
            // t = y; v(x - x0) = 2, v(polynomial) = 2 * ord, v(b*y) odd.
            let va = if phi.a.is_zero() {
                None
            } else {
                Some(2 * phi.a.ord_at(k, x0) as i64)
            };
            let vb = if phi.b.is_zero() {
                None
            } else {
                Some(2 * phi.b.ord_at(k, x0) as i64 + 1)
            };
            let vnum = match (va, vb) {
                (Some(a), Some(b)) => a.min(b),
                (Some(a), None) => a,
                (None, Some(b)) => b,
                (None, None) => unreachable!(),
            };
            let vden = 2 * phi.den.ord_at(k, x0) as i64;
            Some(vnum - vden)
        }
        Place::Affine { x: x0, y: y0 } => {
            debug_assert!(curve.contains(place), "place not on curve");
            let vden = phi.den.ord_at(k, x0) as i64;
            // strip common x - x0 factors from (a, b)
            let lin = Poly::linear_root(k, x0);
            let mut a = phi.a.clone();
            let mut b = phi.b.clone();
            let strip = match (a.is_zero(), b.is_zero()) {
                (false, false) => a.ord_at(k, x0).min(b.ord_at(k, x0)),
                (false, true) => a.ord_at(k, x0),
                (true, false) => b.ord_at(k, x0),
                (true, true) => unreachable!(),
            };
            for _ in 0..strip {
                if !a.is_zero() {
                    a = a.divrem(k, &lin).0;
                }
                if !b.is_zero() {
                    b = b.divrem(k, &lin).0;
                }
            }
            let plus = k.add(a.eval(k, x0), k.mul(b.eval(k, x0), y0));
            let vnum = if plus != 0 {
                strip as i64
            } else {
                // conjugate is a unit here, so v(a + by) = ord of the norm
                let norm = a
                    .mul(k, &a)
                    .sub(k, &b.mul(k, &b).mul(k, curve.f()));
                debug_assert_ne!(
                    k.sub(a.eval(k, x0), k.mul(b.eval(k, x0), y0)),
                    0
                );
                strip as i64 + norm.ord_at(k, x0) as i64
            };
            Some(vnum - vden)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn genus2_curve() -> HyperellipticCurve {
        // y^2 = x^5 + 1 over F_101
        let k = Fp::new(101).unwrap();
        HyperellipticCurve::new(101, Poly::from_coeffs(&k, &[1, 0, 0, 0, 0, 1])).unwrap()
    }

    fn split_genus2_curve() -> HyperellipticCurve {
        // y^2 = x(x-1)(x-2)(x-3)(x-4)
        let k = Fp::new(101).unwrap();
        let mut f = Poly::x();
        for r in 1..5 {
            f = f.mul(&k, &Poly::linear_root(&k, r));
        }
        HyperellipticCurve::new(101, f).unwrap()
    }

    #[test]
    fn make_curve_genus() {
        assert_eq!(genus2_curve().genus(), 2);
        let k = Fp::new(101).unwrap();
        let e = HyperellipticCurve::new(101, Poly::from_coeffs(&k, &[5, 3, 0, 1])).unwrap();
        assert_eq!(e.genus(), 1);
    }

    #[test]
    fn make_curve_rejects_non_squarefree() {
        let k = Fp::new(101).unwrap();
        // x^5 + 2x^4 + x^3 = x^3 (x + 1)^2
        let f = Poly::from_coeffs(&k, &[0, 0, 0, 1, 2, 1]);
        assert_eq!(HyperellipticCurve::new(101, f), Err(Error::NotSquarefree));
    }

    #[test]
    fn make_curve_rejects_bad_shapes() {
        let k = Fp::new(101).unwrap();
        assert!(matches!(
            HyperellipticCurve::new(101, Poly::from_coeffs(&k, &[1, 0, 0, 0, 1])),
            Err(Error::BadDegree(_))
        ));
        assert!(matches!(
            HyperellipticCurve::new(4, Poly::from_coeffs(&k, &[1, 0, 0, 1])),
            Err(Error::BadPrime(4))
        ));
    }

    #[test]
    fn valuations_at_infinity() {
        let c = genus2_curve();
        let x = FunctionRep::from_poly(Poly::x());
        let y = FunctionRep::y();
        assert_eq!(valuation(&c, &x, &Place::Infinity), Some(-2));
        assert_eq!(valuation(&c, &y, &Place::Infinity), Some(-5));
    }

    #[test]
    fn y_is_uniformizer_at_simple_weierstrass_point() {
        let c = genus2_curve();
        // (-1)^5 + 1 = 0, so (100, 0) is a Weierstrass place
        let w = Place::affine(100, 0);
        assert_eq!(valuation(&c, &FunctionRep::y(), &w), Some(1));
        let x_plus_1 = FunctionRep::from_poly(Poly::from_signed(c.field(), &[1, 1]));
        assert_eq!(valuation(&c, &x_plus_1, &w), Some(2));
    }

    #[test]
    fn zero_function_has_infinite_valuation() {
        let c = genus2_curve();
        assert_eq!(valuation(&c, &FunctionRep::zero(), &Place::Infinity), None);
    }

    #[test]
    fn weierstrass_places_of_split_model() {
        let c = split_genus2_curve();
        let w = c.weierstrass_places();
        assert_eq!(w.len(), 6);
        assert!(w.contains(&Place::Infinity));
        for r in 0..5 {
            assert!(w.contains(&Place::affine(r, 0)));
        }
    }

    #[test]
    fn weierstrass_places_match_root_finder() {
        let k = Fp::new(101).unwrap();
        let f = Poly::from_coeffs(&k, &[5, 3, 0, 1]);
        let c = HyperellipticCurve::new(101, f.clone()).unwrap();
        let roots = poly_roots(&k, &f).unwrap();
        assert_eq!(c.weierstrass_places().len(), roots.roots.len() + 1);
    }

    #[test]
    fn product_rule_for_valuations() {
        use rand::{Rng, SeedableRng};
        let c = split_genus2_curve();
        let k = *c.field();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        let mut places = vec![Place::Infinity, Place::affine(1, 0)];
        places.extend(c.places_above(7));
        places.extend(c.places_above(9));
        let mut checked = 0;
        while checked < 200 {
            let rand_poly = |rng: &mut rand_chacha::ChaCha8Rng| {
                let deg = rng.gen_range(0..3);
                Poly::from_coeffs(
                    &k,
                    &(0..=deg).map(|_| rng.gen_range(0..101)).collect::<Vec<_>>(),
                )
            };
            let phi = FunctionRep::new(&k, rand_poly(&mut rng), rand_poly(&mut rng), Poly::one())
                .unwrap();
            let psi = FunctionRep::new(&k, rand_poly(&mut rng), rand_poly(&mut rng), Poly::one())
                .unwrap();
            if phi.is_zero() || psi.is_zero() {
                continue;
            }
            let prod = phi.mul(&c, &psi);
            for pl in &places {
                let v1 = valuation(&c, &phi, pl).unwrap();
                let v2 = valuation(&c, &psi, pl).unwrap();
                let vp = valuation(&c, &prod, pl).unwrap();
                assert_eq!(vp, v1 + v2, "product rule failed at {pl}");
            }
            checked += 1;
        }
    }

    #[test]
    fn canonical_form_is_unique() {
        let c = genus2_curve();
        let k = *c.field();
        // (x^2 - 1)/(x - 1) and (x + 1) are the same function
        let f1 = FunctionRep::new(
            &k,
            Poly::from_signed(&k, &[-1, 0, 1]),
            Poly::zero(),
            Poly::from_signed(&k, &[-1, 1]),
        )
        .unwrap();
        let f2 = FunctionRep::from_poly(Poly::from_signed(&k, &[1, 1]));
        assert_eq!(f1, f2);
    }

    #[test]
    fn inverse_multiplies_to_one() {
        let c = genus2_curve();
        let k = *c.field();
        let phi = FunctionRep::new(
            &k,
            Poly::from_signed(&k, &[3, 1]),
            Poly::from_signed(&k, &[2]),
            Poly::from_signed(&k, &[0, 1]),
        )
        .unwrap();
        let inv = phi.inverse(&c).unwrap();
        assert_eq!(phi.mul(&c, &inv), FunctionRep::one());
    }
}
