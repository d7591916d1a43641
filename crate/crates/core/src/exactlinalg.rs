//! Exact arithmetic over a prime field F_p, univariate polynomials, root
//! extraction, and dense rank/kernel/solve routines.
//!
//! Everything here is deterministic: the randomized equal-degree splitting
//! seeds its generator from the input polynomial, so repeated calls agree.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// The prime field F_p. Elements are plain `u64` residues in `[0, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp {
    p: u64,
}

impl Fp {
    pub fn new(p: u64) -> Result<Self> {
        if p <= 3 || !is_prime(p) {
            return Err(Error::BadPrime(p));
        }
        Ok(Fp { p })
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    pub fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut acc = 1u64;
        a %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u64) -> u64 {
        assert!(a % self.p != 0, "inverse of zero");
        self.pow(a, self.p - 2)
    }

    #[inline]
    pub fn reduce_u64(&self, v: u64) -> u64 {
        v % self.p
    }

    #[inline]
    pub fn reduce_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }

    /// Canonical square root: the smaller of the two roots, if one exists.
    pub fn sqrt(&self, c: u64) -> Option<u64> {
        let c = c % self.p;
        if c == 0 {
            return Some(0);
        }
        if self.pow(c, (self.p - 1) / 2) != 1 {
            return None;
        }
        let f = Poly::from_coeffs(self, &[self.neg(c), 0, 1]);
        let roots = poly_roots(self, &f).expect("nonzero polynomial");
        roots.roots.iter().map(|&(r, _)| r).min()
    }
}

/// Dense univariate polynomial over F_p, ascending coefficients, no trailing
/// zeros. The empty vector is the zero polynomial.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<u64>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly { coeffs: vec![1] }
    }

    pub fn x() -> Self {
        Poly { coeffs: vec![0, 1] }
    }

    pub fn constant(k: &Fp, c: u64) -> Self {
        let c = k.reduce_u64(c);
        if c == 0 {
            Poly::zero()
        } else {
            Poly { coeffs: vec![c] }
        }
    }

    pub fn from_coeffs(k: &Fp, cs: &[u64]) -> Self {
        let mut coeffs: Vec<u64> = cs.iter().map(|&c| k.reduce_u64(c)).collect();
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_signed(k: &Fp, cs: &[i64]) -> Self {
        let mapped: Vec<u64> = cs.iter().map(|&c| k.reduce_i64(c)).collect();
        Poly::from_coeffs(k, &mapped)
    }

    /// x - r
    pub fn linear_root(k: &Fp, r: u64) -> Self {
        Poly::from_coeffs(k, &[k.neg(r), 1])
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    /// `None` is the degree of the zero polynomial.
    pub fn deg(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn lc(&self) -> u64 {
        *self.coeffs.last().expect("leading coefficient of zero polynomial")
    }

    pub fn add(&self, k: &Fp, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(k.add(self.coeff(i), o.coeff(i)));
        }
        while out.last() == Some(&0) {
            out.pop();
        }
        Poly { coeffs: out }
    }

    pub fn sub(&self, k: &Fp, o: &Poly) -> Poly {
        self.add(k, &o.neg(k))
    }

    pub fn neg(&self, k: &Fp) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|&c| k.neg(c)).collect(),
        }
    }

    pub fn scale(&self, k: &Fp, c: u64) -> Poly {
        let c = k.reduce_u64(c);
        if c == 0 {
            return Poly::zero();
        }
        Poly {
            coeffs: self.coeffs.iter().map(|&a| k.mul(a, c)).collect(),
        }
    }

    pub fn mul(&self, k: &Fp, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![0u64; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.coeffs.iter().enumerate() {
                out[i + j] = k.add(out[i + j], k.mul(a, b));
            }
        }
        while out.last() == Some(&0) {
            out.pop();
        }
        Poly { coeffs: out }
    }

    /// Multiply by x^n.
    pub fn shift(&self, n: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![0u64; n];
        out.extend_from_slice(&self.coeffs);
        Poly { coeffs: out }
    }

    pub fn pow(&self, k: &Fp, e: usize) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = acc.mul(k, self);
        }
        acc
    }

    pub fn eval(&self, k: &Fp, x0: u64) -> u64 {
        let mut acc = 0u64;
        for &c in self.coeffs.iter().rev() {
            acc = k.add(k.mul(acc, x0), c);
        }
        acc
    }

    pub fn divrem(&self, k: &Fp, den: &Poly) -> (Poly, Poly) {
        assert!(!den.is_zero(), "division by zero polynomial");
        let dd = den.deg().unwrap();
        let lead_inv = k.inv(den.lc());
        let mut rem = self.coeffs.clone();
        let mut quo = vec![0u64; self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd {
            let deg_r = rem.len() - 1;
            let c = k.mul(*rem.last().unwrap(), lead_inv);
            if c != 0 {
                quo[deg_r - dd] = c;
                for i in 0..=dd {
                    let idx = deg_r - dd + i;
                    rem[idx] = k.sub(rem[idx], k.mul(c, den.coeff(i)));
                }
            }
            rem.pop();
            while rem.last() == Some(&0) {
                rem.pop();
            }
            if rem.is_empty() {
                break;
            }
        }
        while quo.last() == Some(&0) {
            quo.pop();
        }
        (Poly { coeffs: quo }, Poly { coeffs: rem })
    }

    pub fn divides(&self, k: &Fp, num: &Poly) -> Option<Poly> {
        if num.is_zero() {
            return Some(Poly::zero());
        }
        let (q, r) = num.divrem(k, self);
        if r.is_zero() {
            Some(q)
        } else {
            None
        }
    }

    pub fn monic(&self, k: &Fp) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        self.scale(k, k.inv(self.lc()))
    }

    /// Monic gcd.
    pub fn gcd(&self, k: &Fp, o: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(k, &b);
            a = b;
            b = r;
        }
        a.monic(k)
    }

    pub fn lcm(&self, k: &Fp, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let g = self.gcd(k, o);
        let (q, _) = self.divrem(k, &g);
        q.mul(k, o).monic(k)
    }

    pub fn derivative(&self, k: &Fp) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        let mut out = Vec::with_capacity(self.coeffs.len() - 1);
        for (i, &c) in self.coeffs.iter().enumerate().skip(1) {
            out.push(k.mul(c, k.reduce_u64(i as u64)));
        }
        while out.last() == Some(&0) {
            out.pop();
        }
        Poly { coeffs: out }
    }

    /// Multiplicity of `x0` as a root (0 if not a root). Panics on zero input.
    pub fn ord_at(&self, k: &Fp, x0: u64) -> usize {
        assert!(!self.is_zero());
        let lin = Poly::linear_root(k, x0);
        let mut cur = self.clone();
        let mut m = 0;
        loop {
            let (q, r) = cur.divrem(k, &lin);
            if !r.is_zero() {
                return m;
            }
            m += 1;
            cur = q;
            if cur.is_zero() {
                return m;
            }
        }
    }

    pub fn is_squarefree(&self, k: &Fp) -> bool {
        if self.is_zero() {
            return false;
        }
        let d = self.derivative(k);
        if d.is_zero() {
            return self.deg() == Some(0);
        }
        self.gcd(k, &d).deg() == Some(0)
    }

    /// self^e mod m by square and multiply.
    pub fn powmod(&self, k: &Fp, mut e: u64, m: &Poly) -> Poly {
        let (_, mut base) = self.divrem(k, m);
        let mut acc = Poly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(k, &base).divrem(k, m).1;
            }
            base = base.mul(k, &base).divrem(k, m).1;
            e >>= 1;
        }
        acc
    }
}

impl std::fmt::Display for Poly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => {
                    if c == 1 {
                        write!(f, "x")?
                    } else {
                        write!(f, "{c}*x")?
                    }
                }
                _ => {
                    if c == 1 {
                        write!(f, "x^{i}")?
                    } else {
                        write!(f, "{c}*x^{i}")?
                    }
                }
            }
        }
        Ok(())
    }
}

/// Roots of a polynomial in F_p with multiplicities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Roots {
    /// Sorted by root value.
    pub roots: Vec<(u64, usize)>,
    /// True iff the polynomial factors into linear factors over F_p.
    pub splits: bool,
}

/// All rational roots via equal-degree splitting on the squarefree part.
pub fn poly_roots(k: &Fp, f: &Poly) -> Result<Roots> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if f.deg() == Some(0) {
        return Ok(Roots {
            roots: Vec::new(),
            splits: true,
        });
    }
    let deriv = f.derivative(k);
    let sf = if deriv.is_zero() {
        // f = g(x^p); its roots are still roots of a lower-degree poly, but at
        // desk scale (deg f < p) this cannot happen for nonconstant f unless
        // p <= deg f. Fall back to exhaustive scan.
        return exhaustive_roots(k, f);
    } else {
        let g = f.gcd(k, &deriv);
        f.divrem(k, &g).0.monic(k)
    };
    // Product of the linear factors: gcd(x^p - x, sf).
    let xp = Poly::x().powmod(k, k.p(), &sf);
    let xp_minus_x = xp.sub(k, &Poly::x());
    let lin = if xp_minus_x.is_zero() {
        sf.clone()
    } else {
        sf.gcd(k, &xp_minus_x)
    };
    let mut roots = Vec::new();
    if lin.deg() != Some(0) {
        let mut seed = 0xe11u64;
        for &c in f.coeffs() {
            seed = seed.wrapping_mul(0x100000001b3).wrapping_add(c);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut stack = vec![lin];
        let mut fuel = 4096usize;
        while let Some(h) = stack.pop() {
            match h.deg() {
                None | Some(0) => continue,
                Some(1) => {
                    // monic x + c -> root -c
                    let h = h.monic(k);
                    roots.push(k.neg(h.coeff(0)));
                    continue;
                }
                _ => {}
            }
            if fuel == 0 {
                if k.p() <= 10_000 {
                    return exhaustive_roots(k, f);
                }
                return Err(Error::InternalBoundError(
                    "equal-degree splitting did not converge".into(),
                ));
            }
            fuel -= 1;
            let a = rng.gen_range(0..k.p());
            let shifted = Poly::from_coeffs(k, &[a, 1]);
            if h.eval(k, k.neg(a)) == 0 {
                let (q, _) = h.divrem(k, &shifted);
                roots.push(k.neg(a));
                stack.push(q);
                continue;
            }
            let w = shifted
                .powmod(k, (k.p() - 1) / 2, &h)
                .sub(k, &Poly::one());
            if w.is_zero() {
                stack.push(h);
                continue;
            }
            let d = w.gcd(k, &h);
            match d.deg() {
                Some(dd) if dd > 0 && dd < h.deg().unwrap() => {
                    let (q, _) = h.divrem(k, &d);
                    stack.push(d);
                    stack.push(q);
                }
                _ => stack.push(h),
            }
        }
    }
    roots.sort_unstable();
    let with_mult: Vec<(u64, usize)> = roots.iter().map(|&r| (r, f.ord_at(k, r))).collect();
    let total: usize = with_mult.iter().map(|&(_, m)| m).sum();
    Ok(Roots {
        splits: total == f.deg().unwrap(),
        roots: with_mult,
    })
}

/// Deterministic oracle: evaluate at every field element. Only for small p.
pub fn exhaustive_roots(k: &Fp, f: &Poly) -> Result<Roots> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut roots = Vec::new();
    for x in 0..k.p() {
        if f.eval(k, x) == 0 {
            roots.push((x, f.ord_at(k, x)));
        }
    }
    let total: usize = roots.iter().map(|&(_, m)| m).sum();
    Ok(Roots {
        splits: total == f.deg().unwrap_or(0),
        roots,
    })
}

/// Dense row-major matrix over F_p.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl Matrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(k: &Fp, rows: &[Vec<u64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map(|v| v.len()).unwrap_or(0);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row.iter().map(|&v| k.reduce_u64(v)));
        }
        Matrix { rows: r, cols: c, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zero(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn mul(&self, k: &Fp, o: &Matrix) -> Matrix {
        assert_eq!(self.cols, o.rows);
        let mut out = Matrix::zero(self.rows, o.cols);
        for r in 0..self.rows {
            for i in 0..self.cols {
                let a = self.get(r, i);
                if a == 0 {
                    continue;
                }
                for c in 0..o.cols {
                    let v = k.add(out.get(r, c), k.mul(a, o.get(i, c)));
                    out.set(r, c, v);
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    /// In-place reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self, k: &Fp) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut pr = 0usize;
        for pc in 0..self.cols {
            if pr == self.rows {
                break;
            }
            let Some(sel) = (pr..self.rows).find(|&r| self.get(r, pc) != 0) else {
                continue;
            };
            if sel != pr {
                for c in 0..self.cols {
                    let a = self.get(pr, c);
                    let b = self.get(sel, c);
                    self.set(pr, c, b);
                    self.set(sel, c, a);
                }
            }
            let inv = k.inv(self.get(pr, pc));
            for c in pc..self.cols {
                let v = k.mul(self.get(pr, c), inv);
                self.set(pr, c, v);
            }
            for r in 0..self.rows {
                if r == pr {
                    continue;
                }
                let factor = self.get(r, pc);
                if factor == 0 {
                    continue;
                }
                for c in pc..self.cols {
                    let v = k.sub(self.get(r, c), k.mul(factor, self.get(pr, c)));
                    self.set(r, c, v);
                }
            }
            pivots.push(pc);
            pr += 1;
        }
        pivots
    }

    pub fn rank(&self, k: &Fp) -> usize {
        let mut m = self.clone();
        m.rref(k).len()
    }
}

/// Rank together with a canonical (reduced-echelon) basis of the right kernel.
pub fn rank_kernel(k: &Fp, m: &Matrix) -> (usize, Vec<Vec<u64>>) {
    let mut r = m.clone();
    let pivots = r.rref(k);
    let rank = pivots.len();
    let mut kernel = Vec::new();
    let mut pivot_of_col = vec![None; m.cols()];
    for (i, &pc) in pivots.iter().enumerate() {
        pivot_of_col[pc] = Some(i);
    }
    for free in 0..m.cols() {
        if pivot_of_col[free].is_some() {
            continue;
        }
        let mut v = vec![0u64; m.cols()];
        v[free] = 1;
        for (&pc, i) in pivots.iter().zip(0..) {
            v[pc] = k.neg(r.get(i, free));
        }
        kernel.push(v);
    }
    if !kernel.is_empty() {
        let mut km = Matrix::from_rows(k, &kernel);
        km.rref(k);
        kernel = (0..km.rows()).map(|i| km.row(i).to_vec()).collect();
    }
    (rank, kernel)
}

/// Solve `A x = b` for one particular solution (free variables set to zero).
pub fn solve(k: &Fp, a: &Matrix, b: &[u64]) -> Option<Vec<u64>> {
    let rhs = Matrix::from_rows(k, &b.iter().map(|&v| vec![v]).collect::<Vec<_>>());
    solve_many(k, a, &rhs).map(|m| (0..m.rows()).map(|r| m.get(r, 0)).collect())
}

/// Solve `A X = B` column-wise; `None` if any column is inconsistent.
pub fn solve_many(k: &Fp, a: &Matrix, b: &Matrix) -> Option<Matrix> {
    assert_eq!(a.rows(), b.rows());
    let n = a.cols();
    let nr = b.cols();
    let mut aug = Matrix::zero(a.rows(), n + nr);
    for r in 0..a.rows() {
        for c in 0..n {
            aug.set(r, c, a.get(r, c));
        }
        for c in 0..nr {
            aug.set(r, n + c, b.get(r, c));
        }
    }
    let pivots = aug.rref(k);
    // A pivot in the RHS block means some column is inconsistent.
    if pivots.iter().any(|&pc| pc >= n) {
        return None;
    }
    let mut x = Matrix::zero(n, nr);
    for (i, &pc) in pivots.iter().enumerate() {
        for c in 0..nr {
            x.set(pc, c, aug.get(i, n + c));
        }
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f101() -> Fp {
        Fp::new(101).unwrap()
    }

    #[test]
    fn rejects_bad_primes() {
        assert!(Fp::new(3).is_err());
        assert!(Fp::new(91).is_err());
        assert!(Fp::new(101).is_ok());
    }

    #[test]
    fn roots_of_x2_minus_1() {
        let k = f101();
        let f = Poly::from_signed(&k, &[-1, 0, 1]);
        let r = poly_roots(&k, &f).unwrap();
        assert_eq!(r.roots, vec![(1, 1), (100, 1)]);
        assert!(r.splits);
    }

    #[test]
    fn x2_plus_1_has_no_roots_mod_103() {
        let k = Fp::new(103).unwrap();
        let f = Poly::from_signed(&k, &[1, 0, 1]);
        let r = poly_roots(&k, &f).unwrap();
        assert!(r.roots.is_empty());
        assert!(!r.splits);
        // independent oracle: exhaustive squaring shows -1 is a non-residue
        assert!((0..103).all(|x| k.mul(x, x) != 102));
    }

    #[test]
    fn repeated_linear_factor() {
        let k = f101();
        let f = Poly::linear_root(&k, 2).pow(&k, 3);
        let r = poly_roots(&k, &f).unwrap();
        assert_eq!(r.roots, vec![(2, 3)]);
        assert!(r.splits);
    }

    #[test]
    fn zero_polynomial_is_rejected() {
        let k = f101();
        assert_eq!(poly_roots(&k, &Poly::zero()), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn eds_agrees_with_exhaustive_scan() {
        let k = f101();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..40 {
            let deg = rng.gen_range(1..8);
            let mut cs: Vec<u64> = (0..=deg).map(|_| rng.gen_range(0..101)).collect();
            if *cs.last().unwrap() == 0 {
                *cs.last_mut().unwrap() = 1;
            }
            let f = Poly::from_coeffs(&k, &cs);
            assert_eq!(
                poly_roots(&k, &f).unwrap(),
                exhaustive_roots(&k, &f).unwrap()
            );
        }
    }

    #[test]
    fn roots_multiplicative_over_split_product() {
        let k = f101();
        let f = Poly::linear_root(&k, 5).mul(&k, &Poly::linear_root(&k, 9));
        let g = Poly::linear_root(&k, 5).mul(&k, &Poly::linear_root(&k, 17));
        let fg = f.mul(&k, &g);
        let rf = poly_roots(&k, &f).unwrap();
        let rg = poly_roots(&k, &g).unwrap();
        let rfg = poly_roots(&k, &fg).unwrap();
        assert!(rf.splits && rg.splits && rfg.splits);
        let mut merged = std::collections::BTreeMap::new();
        for (r, m) in rf.roots.into_iter().chain(rg.roots) {
            *merged.entry(r).or_insert(0) += m;
        }
        let merged: Vec<(u64, usize)> = merged.into_iter().collect();
        assert_eq!(rfg.roots, merged);
    }

    #[test]
    fn rank_kernel_identity_and_zero() {
        let k = f101();
        let (rank, kernel) = rank_kernel(&k, &Matrix::identity(2));
        assert_eq!(rank, 2);
        assert!(kernel.is_empty());

        let (rank, kernel) = rank_kernel(&k, &Matrix::zero(1, 3));
        assert_eq!(rank, 0);
        assert_eq!(kernel.len(), 3);
    }

    #[test]
    fn rank_one_kernel_matches_hand_elimination() {
        let k = f101();
        let m = Matrix::from_rows(&k, &[vec![1, 2], vec![2, 4]]);
        let (rank, kernel) = rank_kernel(&k, &m);
        assert_eq!(rank, 1);
        assert_eq!(kernel.len(), 1);
        // spanned by (-2, 1) = (99, 1); canonical form scales the pivot to 1
        let v = &kernel[0];
        let scale = k.inv(99);
        assert_eq!(v, &vec![k.mul(99, scale), k.mul(1, scale)]);
        for r in 0..2 {
            let dot = k.add(k.mul(m.get(r, 0), v[0]), k.mul(m.get(r, 1), v[1]));
            assert_eq!(dot, 0);
        }
    }

    #[test]
    fn rank_transpose_invariant() {
        let k = f101();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..25 {
            let r = rng.gen_range(1..7);
            let c = rng.gen_range(1..7);
            let rows: Vec<Vec<u64>> = (0..r)
                .map(|_| (0..c).map(|_| rng.gen_range(0..101)).collect())
                .collect();
            let m = Matrix::from_rows(&k, &rows);
            assert_eq!(m.rank(&k), m.transpose().rank(&k));
        }
    }

    #[test]
    fn kernel_invariant_under_row_shuffles() {
        let k = f101();
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..20 {
            let r = rng.gen_range(2..6);
            let c = rng.gen_range(2..6);
            let mut rows: Vec<Vec<u64>> = (0..r)
                .map(|_| (0..c).map(|_| rng.gen_range(0..101)).collect())
                .collect();
            let m = Matrix::from_rows(&k, &rows);
            let (rank, kernel) = rank_kernel(&k, &m);
            // shuffle rows
            for i in (1..rows.len()).rev() {
                let j = rng.gen_range(0..=i);
                rows.swap(i, j);
            }
            let m2 = Matrix::from_rows(&k, &rows);
            let (rank2, kernel2) = rank_kernel(&k, &m2);
            assert_eq!(rank, rank2);
            assert_eq!(kernel, kernel2);
        }
    }

    #[test]
    fn solve_finds_consistent_solutions() {
        let k = f101();
        let a = Matrix::from_rows(&k, &[vec![1, 2], vec![3, 4]]);
        let x = solve(&k, &a, &[5, 6]).unwrap();
        assert_eq!(k.add(k.mul(1, x[0]), k.mul(2, x[1])), 5);
        assert_eq!(k.add(k.mul(3, x[0]), k.mul(4, x[1])), 6);
        let singular = Matrix::from_rows(&k, &[vec![1, 2], vec![2, 4]]);
        assert!(solve(&k, &singular, &[0, 1]).is_none());
    }
}
