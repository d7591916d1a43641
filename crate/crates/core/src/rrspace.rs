//! Riemann-Roch spaces L(D) on an odd-model hyperelliptic curve.
//!
//! The candidate space for L(D) is { (a(x) + b(x) y) / h(x) } where h
//! collects the affine poles allowed by D. The pole orders at infinity of
//! the monomials x^i and x^i y all differ (opposite parities), so the
//! infinity constraint is a pair of degree caps; the affine constraints are
//! linear conditions on truncated local expansions. The computed dimension
//! is cross-checked against Riemann-Roch whenever the degree pins it down.

use crate::curve::{valuation, FunctionRep, HyperellipticCurve, Place};
use crate::divisor::{canonical_divisor, Divisor};
use crate::error::{Error, Result};
use crate::exactlinalg::{rank_kernel, solve_many, Matrix, Poly};
use crate::series::{expand_at, Series};

/// A basis of L(D) together with its divisor.
#[derive(Debug, Clone)]
pub struct RRSpace {
    divisor: Divisor,
    basis: Vec<FunctionRep>,
}

impl RRSpace {
    pub fn divisor(&self) -> &Divisor {
        &self.divisor
    }

    pub fn basis(&self) -> &[FunctionRep] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

#[derive(Clone, Copy)]
struct Monomial {
    xdeg: usize,
    with_y: bool,
}

impl Monomial {
    fn pole_order_at_infinity(&self, genus: usize) -> usize {
        2 * self.xdeg + if self.with_y { 2 * genus + 1 } else { 0 }
    }
}

/// Compute a basis of L(D), echelonized by pole order at infinity.
pub fn rr_basis(curve: &HyperellipticCurve, d: &Divisor) -> Result<RRSpace> {
    if d.curve() != curve {
        return Err(Error::CurveMismatch);
    }
    let k = curve.field();
    let g = curve.genus();
    let deg = d.degree();
    if deg < 0 {
        return Ok(RRSpace {
            divisor: d.clone(),
            basis: Vec::new(),
        });
    }

    // Allowed affine poles: exponent per x-coordinate, generous for
    // Weierstrass places (v(x - x0) = 2 there).
    let mut pole_exp: std::collections::BTreeMap<u64, i64> = std::collections::BTreeMap::new();
    for (place, mult) in d.support() {
        if let Place::Affine { x, .. } = place {
            let e = pole_exp.entry(*x).or_insert(0);
            *e = (*e).max(mult.max(0));
        }
    }
    let mut h = Poly::one();
    for (&x0, &e) in &pole_exp {
        h = h.mul(k, &Poly::linear_root(k, x0).pow(k, e as usize));
    }
    let deg_h = h.deg().unwrap() as i64;

    // Degree caps from the infinity constraint v(a + by) >= -D(inf) - 2 deg h.
    let slack = d.coeff(&Place::Infinity) + 2 * deg_h;
    let cap_a = slack.div_euclid(2); // 2*deg a <= slack
    let cap_b = (slack - (2 * g as i64 + 1)).div_euclid(2);

    let mut monomials = Vec::new();
    if cap_a >= 0 {
        for i in 0..=cap_a as usize {
            monomials.push(Monomial {
                xdeg: i,
                with_y: false,
            });
        }
    }
    if cap_b >= 0 {
        for i in 0..=cap_b as usize {
            monomials.push(Monomial {
                xdeg: i,
                with_y: true,
            });
        }
    }
    // Descending pole order at infinity makes the echelonized kernel unique
    // with distinct leading pole orders.
    monomials.sort_by_key(|m| std::cmp::Reverse(m.pole_order_at_infinity(g)));

    if monomials.is_empty() {
        return Ok(RRSpace {
            divisor: d.clone(),
            basis: Vec::new(),
        });
    }

    // Affine constraints.
    let mut rows: Vec<Vec<u64>> = Vec::new();
    for (&x0, &e) in &pole_exp {
        for place in curve.places_above(x0) {
            let v_lin = if place.is_weierstrass() { 2 } else { 1 };
            let needed = e * v_lin - d.coeff(&place);
            if needed <= 0 {
                continue;
            }
            let prec = needed as usize;
            let (x, y) = match place {
                Place::Affine { x, y } => expand_at(curve, x, y, prec),
                Place::Infinity => unreachable!(),
            };
            // powers of x, and times y
            let mut xpow = Series::constant(1, prec);
            let mut expansions = Vec::new();
            let max_x = monomials.iter().map(|m| m.xdeg).max().unwrap_or(0);
            let mut xpowers = Vec::with_capacity(max_x + 1);
            xpowers.push(xpow.clone());
            for _ in 0..max_x {
                xpow = xpow.mul(k, &x);
                xpowers.push(xpow.clone());
            }
            for m in &monomials {
                let s = if m.with_y {
                    xpowers[m.xdeg].mul(k, &y)
                } else {
                    xpowers[m.xdeg].clone()
                };
                expansions.push(s);
            }
            for j in 0..prec {
                rows.push(expansions.iter().map(|s| s.c[j]).collect());
            }
        }
    }

    let basis_vecs = if rows.is_empty() {
        // no constraints: the monomials themselves
        let n = monomials.len();
        (0..n)
            .map(|i| {
                let mut v = vec![0u64; n];
                v[i] = 1;
                v
            })
            .collect()
    } else {
        let m = Matrix::from_rows(k, &rows);
        let (_, kernel) = rank_kernel(k, &m);
        kernel
    };

    let mut basis = Vec::with_capacity(basis_vecs.len());
    for v in &basis_vecs {
        let mut a = Poly::zero();
        let mut b = Poly::zero();
        for (c, m) in v.iter().zip(&monomials) {
            if *c == 0 {
                continue;
            }
            let term = Poly::from_coeffs(k, &[*c]).shift(m.xdeg);
            if m.with_y {
                b = b.add(k, &term);
            } else {
                a = a.add(k, &term);
            }
        }
        basis.push(FunctionRep::new(k, a, b, h.clone())?);
    }

    // Riemann-Roch pins the dimension for large degree; any disagreement is
    // an internal bound failure, never a silent wrong answer.
    if deg >= 2 * g as i64 - 1 {
        let expected = (deg - g as i64 + 1) as usize;
        if basis.len() != expected {
            return Err(Error::InternalBoundError(format!(
                "h0 of degree-{deg} divisor computed as {}, Riemann-Roch forces {expected}",
                basis.len()
            )));
        }
    }
    if basis.len() as i64 > deg + 1 {
        return Err(Error::InternalBoundError(format!(
            "h0 = {} exceeds deg + 1 = {}",
            basis.len(),
            deg + 1
        )));
    }
    debug_assert!(basis.iter().all(|phi| {
        d.support().all(|(p, m)| {
            valuation(curve, phi, p).map(|v| v + m >= 0).unwrap_or(true)
        })
    }));

    Ok(RRSpace {
        divisor: d.clone(),
        basis,
    })
}

/// h0(D) = dim L(D). Uses the Riemann-Roch shortcut for large degrees.
pub fn h0(curve: &HyperellipticCurve, d: &Divisor) -> Result<usize> {
    let g = curve.genus() as i64;
    let deg = d.degree();
    if deg < 0 {
        return Ok(0);
    }
    if deg >= 2 * g - 1 {
        return Ok((deg - g + 1) as usize);
    }
    Ok(rr_basis(curve, d)?.dim())
}

/// h1(D) = h0(K - D) by Serre duality.
pub fn h1(curve: &HyperellipticCurve, d: &Divisor) -> Result<usize> {
    let kd = canonical_divisor(curve);
    h0(curve, &kd.sub(d)?)
}

fn require_split_model(curve: &HyperellipticCurve) -> Result<()> {
    let roots = crate::exactlinalg::poly_roots(curve.field(), curve.f())?;
    if roots.splits {
        Ok(())
    } else {
        Err(Error::Inconclusive)
    }
}

/// Base point freeness. Degree >= 2g certifies it outright; below that every
/// rational place is tested, which is conclusive only on a fully split model.
pub fn is_base_point_free(curve: &HyperellipticCurve, d: &Divisor) -> Result<bool> {
    let g = curve.genus() as i64;
    let deg = d.degree();
    if deg < 0 {
        return Ok(false);
    }
    if deg >= 2 * g {
        return Ok(true);
    }
    let n = h0(curve, d)?;
    if n == 0 {
        return Ok(false);
    }
    require_split_model(curve)?;
    for place in curve.rational_places() {
        let dp = d.sub(&Divisor::from_place(curve, place, 1)?)?;
        if h0(curve, &dp)? == n {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Very ampleness: degree >= 2g + 1 certifies it; below that all pairs of
/// rational places (including doubled points) are tested on a split model.
pub fn is_very_ample(curve: &HyperellipticCurve, d: &Divisor) -> Result<bool> {
    let g = curve.genus() as i64;
    let deg = d.degree();
    if deg >= 2 * g + 1 {
        return Ok(true);
    }
    if deg < 0 {
        return Ok(false);
    }
    let n = h0(curve, d)?;
    if n < 2 {
        return Ok(false);
    }
    if !is_base_point_free(curve, d)? {
        return Ok(false);
    }
    require_split_model(curve)?;
    let places = curve.rational_places();
    for (i, p) in places.iter().enumerate() {
        for q in &places[i..] {
            let mut dd = d.sub(&Divisor::from_place(curve, *p, 1)?)?;
            dd = dd.sub(&Divisor::from_place(curve, *q, 1)?)?;
            if h0(curve, &dd)? != n - 2 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Coordinates of each function in the basis of `space`, as columns.
/// Fails with `InternalBoundError` when some function is not in the span,
/// since callers only pass functions that belong there by construction.
pub fn express_in_basis(
    curve: &HyperellipticCurve,
    space: &RRSpace,
    funcs: &[FunctionRep],
) -> Result<Matrix> {
    let k = curve.field();
    if funcs.is_empty() {
        return Ok(Matrix::zero(space.dim(), 0));
    }
    let mut common = Poly::one();
    for phi in space.basis().iter().chain(funcs) {
        common = common.lcm(k, phi.den());
    }
    // numerator pair of phi over the common denominator
    let lift = |phi: &FunctionRep| -> Result<(Poly, Poly)> {
        let q = phi.den().divides(k, &common).ok_or_else(|| {
            Error::InternalBoundError("denominator does not divide the common multiple".into())
        })?;
        Ok((phi.a().mul(k, &q), phi.b().mul(k, &q)))
    };
    let basis_nums: Vec<(Poly, Poly)> = space
        .basis()
        .iter()
        .map(lift)
        .collect::<Result<_>>()?;
    let func_nums: Vec<(Poly, Poly)> = funcs.iter().map(lift).collect::<Result<_>>()?;
    let deg_of = |p: &Poly| p.deg().map(|v| v + 1).unwrap_or(0);
    let rows_a = basis_nums
        .iter()
        .chain(&func_nums)
        .map(|(a, _)| deg_of(a))
        .max()
        .unwrap_or(0);
    let rows_b = basis_nums
        .iter()
        .chain(&func_nums)
        .map(|(_, b)| deg_of(b))
        .max()
        .unwrap_or(0);
    let height = rows_a + rows_b;
    let stack = |(a, b): &(Poly, Poly)| -> Vec<u64> {
        let mut col = Vec::with_capacity(height);
        for i in 0..rows_a {
            col.push(a.coeff(i));
        }
        for i in 0..rows_b {
            col.push(b.coeff(i));
        }
        col
    };
    let mut lhs = Matrix::zero(height, basis_nums.len());
    for (c, bn) in basis_nums.iter().enumerate() {
        for (r, v) in stack(bn).into_iter().enumerate() {
            lhs.set(r, c, v);
        }
    }
    let mut rhs = Matrix::zero(height, func_nums.len());
    for (c, fnm) in func_nums.iter().enumerate() {
        for (r, v) in stack(fnm).into_iter().enumerate() {
            rhs.set(r, c, v);
        }
    }
    solve_many(k, &lhs, &rhs).ok_or_else(|| {
        Error::InternalBoundError("product fell outside the target section space".into())
    })
}
