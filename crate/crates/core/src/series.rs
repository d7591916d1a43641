//! Truncated power series over F_p and local expansions of the coordinate
//! functions at affine places. Used to turn valuation constraints into
//! linear conditions on polynomial coefficients.

use crate::curve::HyperellipticCurve;
use crate::exactlinalg::{Fp, Poly};

/// Coefficients c[0..prec] of a power series truncated at t^prec.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Series {
    pub c: Vec<u64>,
}

impl Series {
    pub fn zero(prec: usize) -> Self {
        Series { c: vec![0; prec] }
    }

    pub fn constant(v: u64, prec: usize) -> Self {
        let mut c = vec![0; prec];
        if prec > 0 {
            c[0] = v;
        }
        Series { c }
    }

    pub fn prec(&self) -> usize {
        self.c.len()
    }

    pub fn add(&self, k: &Fp, o: &Series) -> Series {
        debug_assert_eq!(self.prec(), o.prec());
        Series {
            c: self
                .c
                .iter()
                .zip(&o.c)
                .map(|(&a, &b)| k.add(a, b))
                .collect(),
        }
    }

    pub fn sub(&self, k: &Fp, o: &Series) -> Series {
        debug_assert_eq!(self.prec(), o.prec());
        Series {
            c: self
                .c
                .iter()
                .zip(&o.c)
                .map(|(&a, &b)| k.sub(a, b))
                .collect(),
        }
    }

    pub fn scale(&self, k: &Fp, v: u64) -> Series {
        Series {
            c: self.c.iter().map(|&a| k.mul(a, v)).collect(),
        }
    }

    pub fn mul(&self, k: &Fp, o: &Series) -> Series {
        let n = self.prec();
        debug_assert_eq!(n, o.prec());
        let mut out = vec![0u64; n];
        for i in 0..n {
            let a = self.c[i];
            if a == 0 {
                continue;
            }
            for j in 0..n - i {
                let b = o.c[j];
                if b != 0 {
                    out[i + j] = k.add(out[i + j], k.mul(a, b));
                }
            }
        }
        Series { c: out }
    }

    /// Multiplicative inverse; requires a unit (c[0] != 0).
    pub fn inverse(&self, k: &Fp) -> Series {
        let n = self.prec();
        assert!(n > 0 && self.c[0] != 0, "series inverse needs a unit");
        let inv0 = k.inv(self.c[0]);
        let mut out = vec![0u64; n];
        out[0] = inv0;
        for m in 1..n {
            let mut acc = 0u64;
            for i in 1..=m {
                acc = k.add(acc, k.mul(self.c[i], out[m - i]));
            }
            out[m] = k.mul(k.neg(acc), inv0);
        }
        Series { c: out }
    }

    /// Square root with prescribed unit constant term y0 (y0^2 = c[0]).
    pub fn sqrt_with(&self, k: &Fp, y0: u64) -> Series {
        let n = self.prec();
        debug_assert_eq!(k.mul(y0, y0), self.c[0]);
        assert!(y0 != 0, "square root needs a unit constant term");
        let mut out = vec![0u64; n];
        out[0] = y0;
        let half = k.inv(2);
        let inv_y0 = k.inv(y0);
        for m in 1..n {
            // c[m] = sum_{i=0..m} out[i] out[m-i]  =>  solve for out[m]
            let mut acc = 0u64;
            for i in 1..m {
                acc = k.add(acc, k.mul(out[i], out[m - i]));
            }
            let rhs = k.sub(self.c[m], acc);
            out[m] = k.mul(k.mul(rhs, half), inv_y0);
        }
        Series { c: out }
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|&v| v == 0)
    }
}

/// Evaluate a polynomial at a series argument (Horner).
pub fn poly_at_series(k: &Fp, poly: &Poly, s: &Series) -> Series {
    let prec = s.prec();
    let mut acc = Series::zero(prec);
    for &c in poly.coeffs().iter().rev() {
        acc = acc.mul(k, s);
        if prec > 0 {
            acc.c[0] = k.add(acc.c[0], c);
        }
    }
    acc
}

/// Local expansions (x(t), y(t)) at an affine place to `prec` terms.
///
/// At a non-Weierstrass place the uniformizer is t = x - x0 and y expands as
/// the square root of f(x0 + t) with initial term y0. At a Weierstrass place
/// the uniformizer is t = y and x - x0 = s(t) is obtained by Newton iteration
/// on f(x0 + s) = t^2.
pub fn expand_at(
    curve: &HyperellipticCurve,
    x0: u64,
    y0: u64,
    prec: usize,
) -> (Series, Series) {
    let k = curve.field();
    if y0 != 0 {
        let mut x = Series::zero(prec);
        if prec > 0 {
            x.c[0] = x0;
        }
        if prec > 1 {
            x.c[1] = 1;
        }
        // f(x0 + t) as a series in t
        let mut t = Series::zero(prec);
        if prec > 1 {
            t.c[1] = 1;
        }
        let f_of_x = poly_at_series(k, curve.f(), &x);
        debug_assert_eq!(f_of_x.c.first().copied().unwrap_or(0), k.mul(y0, y0));
        let y = f_of_x.sqrt_with(k, y0);
        (x, y)
    } else {
        // t = y; solve f(x0 + s) = t^2 with s = t^2/f'(x0) + ...
        let fprime = curve.f().derivative(k).eval(k, x0);
        debug_assert!(fprime != 0, "f squarefree, so f'(x0) != 0 at a root");
        let mut t2 = Series::zero(prec);
        if prec > 2 {
            t2.c[2] = 1;
        }
        let mut s = Series::zero(prec);
        if prec > 2 {
            s.c[2] = k.inv(fprime);
        }
        // Newton: s <- s - (f(x0 + s) - t^2) / f'(x0 + s)
        let shift = |ser: &Series| {
            let mut out = ser.clone();
            out.c[0] = k.add(out.c[0], x0);
            out
        };
        // quadratic convergence: 24 iterations cover any prec below 2^24
        for _ in 0..24 {
            let fx = poly_at_series(k, curve.f(), &shift(&s));
            let resid = fx.sub(k, &t2);
            if resid.is_zero() {
                break;
            }
            let fpx = poly_at_series(k, &curve.f().derivative(k), &shift(&s));
            s = s.sub(k, &resid.mul(k, &fpx.inverse(k)));
        }
        debug_assert!(poly_at_series(k, curve.f(), &shift(&s)).sub(k, &t2).is_zero());
        let x = shift(&s);
        let mut y = Series::zero(prec);
        if prec > 1 {
            y.c[1] = 1;
        }
        (x, y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlinalg::Fp;

    fn curve() -> HyperellipticCurve {
        let k = Fp::new(101).unwrap();
        HyperellipticCurve::new(101, Poly::from_coeffs(&k, &[1, 0, 0, 0, 0, 1])).unwrap()
    }

    #[test]
    fn expansion_satisfies_curve_equation_non_weierstrass() {
        let c = curve();
        let k = c.field();
        // f(0) = 1, y0 = 1
        let (x, y) = expand_at(&c, 0, 1, 12);
        let lhs = y.mul(k, &y);
        let rhs = poly_at_series(k, c.f(), &x);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn expansion_satisfies_curve_equation_weierstrass() {
        let c = curve();
        let k = c.field();
        // (-1, 0) is a Weierstrass place
        let (x, y) = expand_at(&c, 100, 0, 14);
        let lhs = y.mul(k, &y);
        let rhs = poly_at_series(k, c.f(), &x);
        assert_eq!(lhs, rhs);
        // x - x0 has valuation exactly 2
        assert_eq!(x.c[1], 0);
        assert!(x.c[2] != 0);
    }

    #[test]
    fn inverse_and_sqrt_roundtrip() {
        let k = Fp::new(101).unwrap();
        let s = Series {
            c: vec![4, 7, 1, 0, 9, 3, 0, 0],
        };
        let prod = s.mul(&k, &s.inverse(&k));
        assert_eq!(prod.c[0], 1);
        assert!(prod.c[1..].iter().all(|&v| v == 0));
        let sq = s.mul(&k, &s);
        assert_eq!(sq.sqrt_with(&k, 4), s);
    }
}
