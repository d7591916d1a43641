//! Multiplication maps between section spaces, Koszul cohomology
//! dimensions, and the surjectivity test for the multiplication map
//! mu_pi : H0(K+L) (x) H0(K-L+Delta) -> H0(2K+Delta).

use crate::curve::HyperellipticCurve;
use crate::divisor::{canonical_divisor, Divisor};
use crate::error::{Error, Result};
use crate::exactlinalg::Matrix;
use crate::rrspace::{express_in_basis, is_base_point_free, rr_basis, RRSpace};
use std::collections::HashMap;

/// Hard ceiling on the number of entries of any assembled matrix.
pub const SIZE_CAP: u128 = 1_000_000;

/// The multiplication map H0(D1) (x) H0(D2) -> H0(D1 + D2) in matrix form.
/// Column (i, j) holds the coordinates of left[i] * right[j] in the target
/// basis; columns are ordered with the right index fastest.
#[derive(Debug, Clone)]
pub struct MultMap {
    pub left: RRSpace,
    pub right: RRSpace,
    pub target: RRSpace,
    pub matrix: Matrix,
    pub rank: usize,
}

impl MultMap {
    pub fn is_surjective(&self) -> bool {
        self.rank == self.target.dim()
    }

    pub fn corank(&self) -> usize {
        self.target.dim() - self.rank
    }
}

pub fn mult_map(curve: &HyperellipticCurve, d1: &Divisor, d2: &Divisor) -> Result<MultMap> {
    let k = curve.field();
    let left = rr_basis(curve, d1)?;
    let right = rr_basis(curve, d2)?;
    let target = rr_basis(curve, &d1.add(d2)?)?;
    check_cap(target.dim(), left.dim() * right.dim())?;
    let mut products = Vec::with_capacity(left.dim() * right.dim());
    for a in left.basis() {
        for b in right.basis() {
            products.push(a.mul(curve, b));
        }
    }
    let matrix = if products.is_empty() {
        Matrix::zero(target.dim(), 0)
    } else {
        express_in_basis(curve, &target, &products)?
    };
    let rank = matrix.rank(k);
    Ok(MultMap {
        left,
        right,
        target,
        matrix,
        rank,
    })
}

/// One Koszul cohomology group K_{p,q}(C, F, L) with the two numbers its
/// dimension is made of: dim = kernel_dim(outgoing) - incoming_rank.
#[derive(Debug, Clone, Copy)]
pub struct KoszulSlot {
    pub p: i64,
    pub q: i64,
    pub dim: usize,
    pub kernel_dim: usize,
    pub incoming_rank: usize,
}

fn check_cap(rows: usize, cols: usize) -> Result<()> {
    let needed = rows as u128 * cols as u128;
    if needed > SIZE_CAP {
        return Err(Error::SizeCapExceeded {
            needed,
            cap: SIZE_CAP,
        });
    }
    Ok(())
}

/// Strictly increasing index tuples from {0..n-1} of length `len`, in
/// lexicographic order. Negative length means the space is zero.
fn wedge_tuples(n: usize, len: i64) -> Vec<Vec<usize>> {
    if len < 0 {
        return Vec::new();
    }
    let len = len as usize;
    if len > n {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..len).collect();
    loop {
        out.push(cur.clone());
        // advance to the next combination
        let mut i = len;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] != i + n - len {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        cur[i] += 1;
        for j in i + 1..len {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// The Koszul differential wedge^{len} H (x) V_dom -> wedge^{len-1} H (x) V_cod,
/// where `prod` gives the coordinates of H[i] * V_dom[j] in the V_cod basis.
fn differential(
    k: &crate::exactlinalg::Fp,
    n_sections: usize,
    len: i64,
    vdim_dom: usize,
    vdim_cod: usize,
    prod: &Matrix, // vdim_cod rows, n_sections * vdim_dom cols, right index fastest
) -> Result<Matrix> {
    let dom_tuples = wedge_tuples(n_sections, len);
    let cod_tuples = wedge_tuples(n_sections, len - 1);
    let rows = cod_tuples.len() * vdim_cod;
    let cols = dom_tuples.len() * vdim_dom;
    check_cap(rows, cols)?;
    let cod_index: HashMap<&[usize], usize> = cod_tuples
        .iter()
        .enumerate()
        .map(|(i, t)| (t.as_slice(), i))
        .collect();
    let mut m = Matrix::zero(rows, cols);
    let mut reduced = Vec::new();
    for (t_idx, tuple) in dom_tuples.iter().enumerate() {
        for (pos, &sec) in tuple.iter().enumerate() {
            reduced.clear();
            reduced.extend(tuple.iter().copied().filter(|&s| s != sec));
            let u_idx = cod_index[reduced.as_slice()];
            for j in 0..vdim_dom {
                let col = t_idx * vdim_dom + j;
                for r in 0..vdim_cod {
                    let c = prod.get(r, sec * vdim_dom + j);
                    let signed = if pos % 2 == 0 { c } else { k.neg(c) };
                    let cur = m.get(u_idx * vdim_cod + r, col);
                    m.set(u_idx * vdim_cod + r, col, k.add(cur, signed));
                }
            }
        }
    }
    Ok(m)
}

/// Coordinates of every product H[i] * V[j] in the basis of `next`,
/// as a matrix with next.dim() rows and H.dim()*V.dim() columns.
fn product_table(
    curve: &HyperellipticCurve,
    h: &RRSpace,
    v: &RRSpace,
    next: &RRSpace,
) -> Result<Matrix> {
    check_cap(next.dim(), h.dim() * v.dim())?;
    if h.dim() * v.dim() == 0 {
        return Ok(Matrix::zero(next.dim(), 0));
    }
    let mut products = Vec::with_capacity(h.dim() * v.dim());
    for a in h.basis() {
        for b in v.basis() {
            products.push(a.mul(curve, b));
        }
    }
    express_in_basis(curve, next, &products)
}

/// dim K_{p,q}(C, F, L) as the middle cohomology of
/// wedge^{p+1} H0(L) (x) H0(F+(q-1)L) -> wedge^p (x) H0(F+qL) -> wedge^{p-1} (x) H0(F+(q+1)L).
pub fn koszul_dim(
    curve: &HyperellipticCurve,
    p: i64,
    q: i64,
    f_div: &Divisor,
    l_div: &Divisor,
) -> Result<KoszulSlot> {
    let k = curve.field();
    let h = rr_basis(curve, l_div)?;
    let n = h.dim();
    let twist = |m: i64| -> Result<RRSpace> { rr_basis(curve, &f_div.add(&l_div.scale(m))?) };
    let v_prev = twist(q - 1)?;
    let v_mid = twist(q)?;
    let v_next = twist(q + 1)?;

    let middle_dim = wedge_tuples(n, p).len() * v_mid.dim();
    if middle_dim == 0 {
        return Ok(KoszulSlot {
            p,
            q,
            dim: 0,
            kernel_dim: 0,
            incoming_rank: 0,
        });
    }

    let table_out = product_table(curve, &h, &v_mid, &v_next)?;
    let d_out = differential(k, n, p, v_mid.dim(), v_next.dim(), &table_out)?;
    let kernel_dim = middle_dim - d_out.rank(k);

    let table_in = product_table(curve, &h, &v_prev, &v_mid)?;
    let d_in = differential(k, n, p + 1, v_prev.dim(), v_mid.dim(), &table_in)?;
    let incoming_rank = d_in.rank(k);

    // the composite of consecutive differentials must vanish identically
    if d_out.cols() > 0 && d_in.cols() > 0 && !d_out.mul(k, &d_in).is_zero() {
        return Err(Error::InternalBoundError(
            "Koszul differentials do not compose to zero".into(),
        ));
    }
    if incoming_rank > kernel_dim {
        return Err(Error::InternalBoundError(
            "Koszul image exceeds the kernel".into(),
        ));
    }
    Ok(KoszulSlot {
        p,
        q,
        dim: kernel_dim - incoming_rank,
        kernel_dim,
        incoming_rank,
    })
}

/// |dim K_{p,q}(C, O, L) - dim K_{r-1-p, 2-q}(C, K, L)| where r = h0(L) - 1.
/// Zero by duality; any other value exposes a bug.
pub fn duality_defect(curve: &HyperellipticCurve, p: i64, q: i64, l_div: &Divisor) -> Result<usize> {
    if !is_base_point_free(curve, l_div)? {
        return Err(Error::NotBasePointFree);
    }
    let r = crate::rrspace::h0(curve, l_div)? as i64 - 1;
    let zero = Divisor::zero(curve);
    let kdiv = canonical_divisor(curve);
    let lhs = koszul_dim(curve, p, q, &zero, l_div)?.dim;
    let rhs = koszul_dim(curve, r - 1 - p, 2 - q, &kdiv, l_div)?.dim;
    Ok(lhs.abs_diff(rhs))
}

/// Result of the mu_pi surjectivity computation.
#[derive(Debug, Clone, Copy)]
pub struct MuResult {
    pub surjective: bool,
    pub rank: usize,
    pub corank: usize,
    pub target_dim: usize,
}

/// mu_pi : H0(K + L) (x) H0(K - L + Delta) -> H0(2K + Delta), with Delta
/// effective and reduced (possibly zero).
pub fn mu_pi(curve: &HyperellipticCurve, l_div: &Divisor, delta: &Divisor) -> Result<MuResult> {
    if !delta.is_reduced() {
        return Err(Error::NotReduced);
    }
    let kdiv = canonical_divisor(curve);
    let d1 = kdiv.add(l_div)?;
    let d2 = kdiv.sub(l_div)?.add(delta)?;
    let map = mult_map(curve, &d1, &d2)?;
    Ok(MuResult {
        surjective: map.is_surjective(),
        rank: map.rank,
        corank: map.corank(),
        target_dim: map.target.dim(),
    })
}
