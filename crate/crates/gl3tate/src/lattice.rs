//! Exact integer/rational linear algebra used by the ideal and matrix
//! machinery: row Hermite normal forms, integer kernels, and complete
//! enumeration of short vectors of a positive definite quadratic form.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type ZMat = Vec<Vec<BigInt>>;

pub fn zeros(rows: usize, cols: usize) -> ZMat {
    vec![vec![BigInt::zero(); cols]; rows]
}

/// Canonical row Hermite normal form of the lattice spanned by `rows`.
///
/// Returns the nonzero echelon rows: pivots positive, entries above a pivot
/// reduced into `[0, pivot)`. Zero rows are dropped, so the result has one
/// row per lattice rank.
pub fn hnf_rows(mut rows: ZMat) -> ZMat {
    if rows.is_empty() {
        return rows;
    }
    let ncols = rows[0].len();
    let mut pivot_row = 0usize;
    for col in 0..ncols {
        // eliminate below pivot_row in this column by gcd steps
        loop {
            let mut best: Option<usize> = None;
            for (i, r) in rows.iter().enumerate().skip(pivot_row) {
                if !r[col].is_zero() {
                    best = match best {
                        None => Some(i),
                        Some(j) => {
                            if r[col].magnitude() < rows[j][col].magnitude() {
                                Some(i)
                            } else {
                                Some(j)
                            }
                        }
                    };
                }
            }
            let Some(imin) = best else { break };
            rows.swap(pivot_row, imin);
            let mut done = true;
            let piv = rows[pivot_row][col].clone();
            for i in pivot_row + 1..rows.len() {
                if !rows[i][col].is_zero() {
                    let q = div_round(&rows[i][col], &piv);
                    if !q.is_zero() {
                        for k in 0..ncols {
                            let t = &rows[pivot_row][k] * &q;
                            rows[i][k] -= t;
                        }
                    }
                    if !rows[i][col].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if pivot_row < rows.len() && !rows[pivot_row][col].is_zero() {
            if rows[pivot_row][col].is_negative() {
                for k in 0..ncols {
                    rows[pivot_row][k] = -rows[pivot_row][k].clone();
                }
            }
            // reduce entries above the pivot into [0, pivot)
            let piv = rows[pivot_row][col].clone();
            for i in 0..pivot_row {
                let q = rows[i][col].div_floor(&piv);
                if !q.is_zero() {
                    for k in 0..ncols {
                        let t = &rows[pivot_row][k] * &q;
                        rows[i][k] -= t;
                    }
                }
            }
            pivot_row += 1;
        }
    }
    rows.truncate(pivot_row);
    rows
}

fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    // nearest-integer division, ties toward floor; keeps remainders small
    let (q, r) = a.div_rem(b);
    let two_r = &r * 2i32;
    if two_r.magnitude() > b.magnitude() {
        if (r.is_negative()) == (b.is_negative()) {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}

/// Row HNF together with a unimodular transform `U` such that `U * input = H`
/// (as full matrices, zero rows of `H` included at the bottom).
pub fn hnf_with_transform(input: &ZMat) -> (ZMat, ZMat) {
    let nrows = input.len();
    let ncols = if nrows == 0 { 0 } else { input[0].len() };
    let mut rows = input.clone();
    let mut u = zeros(nrows, nrows);
    for (i, r) in u.iter_mut().enumerate() {
        r[i] = BigInt::one();
    }
    let mut pivot_row = 0usize;
    for col in 0..ncols {
        loop {
            let mut best: Option<usize> = None;
            for i in pivot_row..nrows {
                if !rows[i][col].is_zero() {
                    best = match best {
                        None => Some(i),
                        Some(j) => {
                            if rows[i][col].magnitude() < rows[j][col].magnitude() {
                                Some(i)
                            } else {
                                Some(j)
                            }
                        }
                    };
                }
            }
            let Some(imin) = best else { break };
            rows.swap(pivot_row, imin);
            u.swap(pivot_row, imin);
            let mut done = true;
            let piv = rows[pivot_row][col].clone();
            for i in pivot_row + 1..nrows {
                if !rows[i][col].is_zero() {
                    let q = div_round(&rows[i][col], &piv);
                    if !q.is_zero() {
                        for k in 0..ncols {
                            let t = &rows[pivot_row][k] * &q;
                            rows[i][k] -= t;
                        }
                        for k in 0..nrows {
                            let t = &u[pivot_row][k] * &q;
                            u[i][k] -= t;
                        }
                    }
                    if !rows[i][col].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if pivot_row < nrows && !rows[pivot_row][col].is_zero() {
            if rows[pivot_row][col].is_negative() {
                for k in 0..ncols {
                    rows[pivot_row][k] = -rows[pivot_row][k].clone();
                }
                for k in 0..nrows {
                    u[pivot_row][k] = -u[pivot_row][k].clone();
                }
            }
            let piv = rows[pivot_row][col].clone();
            for i in 0..pivot_row {
                let q = rows[i][col].div_floor(&piv);
                if !q.is_zero() {
                    for k in 0..ncols {
                        let t = &rows[pivot_row][k] * &q;
                        rows[i][k] -= t;
                    }
                    for k in 0..nrows {
                        let t = &u[pivot_row][k] * &q;
                        u[i][k] -= t;
                    }
                }
            }
            pivot_row += 1;
        }
    }
    (rows, u)
}

/// Basis of the left kernel `{ u : u * mat = 0 }`; the basis is primitive
/// because it comes from a unimodular transform.
pub fn left_kernel(mat: &ZMat) -> ZMat {
    let (h, u) = hnf_with_transform(mat);
    let mut ker = Vec::new();
    for (i, row) in h.iter().enumerate() {
        if row.iter().all(|x| x.is_zero()) {
            ker.push(u[i].clone());
        }
    }
    ker
}

pub fn transpose(mat: &ZMat) -> ZMat {
    if mat.is_empty() {
        return Vec::new();
    }
    let mut t = zeros(mat[0].len(), mat.len());
    for (i, row) in mat.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            t[j][i] = x.clone();
        }
    }
    t
}

/// Basis of the right kernel `{ x : mat * x = 0 }`, as row vectors.
pub fn right_kernel(mat: &ZMat) -> ZMat {
    left_kernel(&transpose(mat))
}

/// Solve `c * hnf = v` for integer `c`, where `hnf` is an echelon basis as
/// produced by [`hnf_rows`]. Returns `None` when `v` is not in the lattice.
pub fn solve_in_hnf(hnf: &ZMat, v: &[BigInt]) -> Option<Vec<BigInt>> {
    let mut rem: Vec<BigInt> = v.to_vec();
    let mut coeffs = vec![BigInt::zero(); hnf.len()];
    for (i, row) in hnf.iter().enumerate() {
        let col = row.iter().position(|x| !x.is_zero())?;
        let (q, r) = rem[col].div_rem(&row[col]);
        if !r.is_zero() {
            return None;
        }
        if !q.is_zero() {
            for k in 0..rem.len() {
                let t = &row[k] * &q;
                rem[k] -= t;
            }
        }
        coeffs[i] = q;
    }
    if rem.iter().all(|x| x.is_zero()) {
        Some(coeffs)
    } else {
        None
    }
}

pub fn hnf_contains(hnf: &ZMat, v: &[BigInt]) -> bool {
    solve_in_hnf(hnf, v).is_some()
}

pub fn mat_mul(a: &ZMat, b: &ZMat) -> ZMat {
    let n = a.len();
    let m = b[0].len();
    let k = b.len();
    let mut out = zeros(n, m);
    for i in 0..n {
        for l in 0..k {
            if a[i][l].is_zero() {
                continue;
            }
            for j in 0..m {
                let t = &a[i][l] * &b[l][j];
                out[i][j] += t;
            }
        }
    }
    out
}

pub fn mat_vec(a: &ZMat, v: &[BigInt]) -> Vec<BigInt> {
    a.iter()
        .map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum())
        .collect()
}

/// Determinant by fraction-free (Bareiss) elimination.
#[allow(dead_code)]
pub fn det(mat: &ZMat) -> BigInt {
    let n = mat.len();
    let mut m = mat.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = num.checked_div(&prev).expect("bareiss exact division");
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    sign * m[n - 1][n - 1].clone()
}

/// Inverse of a square rational matrix; panics on singular input.
pub fn qmat_inverse(mat: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let n = mat.len();
    let mut a: Vec<Vec<BigRational>> = mat.to_vec();
    let mut inv: Vec<Vec<BigRational>> = vec![vec![BigRational::zero(); n]; n];
    for (i, r) in inv.iter_mut().enumerate() {
        r[i] = BigRational::one();
    }
    for col in 0..n {
        let piv = (col..n)
            .find(|&i| !a[i][col].is_zero())
            .expect("singular matrix");
        a.swap(col, piv);
        inv.swap(col, piv);
        let p = a[col][col].clone();
        for j in 0..n {
            a[col][j] /= p.clone();
            inv[col][j] /= p.clone();
        }
        for i in 0..n {
            if i != col && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                for j in 0..n {
                    let t = &f * &a[col][j];
                    a[i][j] -= t;
                    let t = &f * &inv[col][j];
                    inv[i][j] -= t;
                }
            }
        }
    }
    inv
}

pub fn qmat_from_int(mat: &ZMat) -> Vec<Vec<BigRational>> {
    mat.iter()
        .map(|r| r.iter().map(|x| BigRational::from(x.clone())).collect())
        .collect()
}

/// All nonzero integer vectors `x` with `xᵀ G x ≤ bound`, for `G` positive
/// definite. Complete enumeration via rational LDLᵀ; results are sorted for
/// determinism.
pub fn enumerate_short_vectors(gram: &[Vec<BigRational>], bound: &BigRational) -> Vec<Vec<BigInt>> {
    let n = gram.len();
    // rational LDLᵀ without square roots: G = Lᵀ D L with unit upper L
    let mut dd = vec![BigRational::zero(); n];
    let mut ll = vec![vec![BigRational::zero(); n]; n];
    for i in 0..n {
        let mut di = gram[i][i].clone();
        for k in 0..i {
            let t = &ll[k][i] * &ll[k][i] * &dd[k];
            di -= t;
        }
        assert!(di > BigRational::zero(), "form not positive definite");
        dd[i] = di;
        ll[i][i] = BigRational::one();
        for j in i + 1..n {
            let mut v = gram[i][j].clone();
            for k in 0..i {
                let t = &ll[k][i] * &ll[k][j] * &dd[k];
                v -= t;
            }
            ll[i][j] = &v / &dd[i];
        }
    }

    let mut out: Vec<Vec<BigInt>> = Vec::new();
    let mut x = vec![BigInt::zero(); n];
    enum_rec(n, &dd, &ll, bound.clone(), &mut x, n, &mut out);
    out.retain(|v| v.iter().any(|c| !c.is_zero()));
    out.sort();
    out
}

fn enum_rec(
    n: usize,
    d: &[BigRational],
    l: &[Vec<BigRational>],
    remaining: BigRational,
    x: &mut Vec<BigInt>,
    level: usize,
    out: &mut Vec<Vec<BigInt>>,
) {
    if level == 0 {
        out.push(x.clone());
        return;
    }
    let i = level - 1;
    // center c_i = Σ_{j>i} l[i][j] x_j
    let mut c = BigRational::zero();
    for j in i + 1..n {
        c += &l[i][j] * BigRational::from(x[j].clone());
    }
    // need d_i (x_i + c)^2 ≤ remaining
    let t = &remaining / &d[i];
    // |x_i + c| ≤ sqrt(t): bound sqrt(t) from above by rational s
    let s_hi = rational_sqrt_upper(&t);
    let lo = (-&c - &s_hi).ceil().to_integer();
    let hi = (-&c + &s_hi).floor().to_integer();
    let mut xi = lo.clone();
    while xi <= hi {
        let shifted = BigRational::from(xi.clone()) + &c;
        let used = &d[i] * &shifted * &shifted;
        if used <= remaining {
            x[i] = xi.clone();
            enum_rec(n, d, l, &remaining - used, x, i, out);
        }
        xi += 1;
    }
    x[i] = BigInt::zero();
}

/// A rational `s ≥ sqrt(t)` for `t ≥ 0`.
fn rational_sqrt_upper(t: &BigRational) -> BigRational {
    if t < &BigRational::zero() {
        return BigRational::zero();
    }
    let num = t.numer();
    let den = t.denom();
    // sqrt(n/d) = sqrt(n d)/d ≤ (isqrt(n d)+1)/d
    let prod = num * den;
    let root = prod.sqrt() + 1;
    BigRational::new(root, den.clone())
}

/// Integer square root check: returns `s` with `s² = n` when `n` is a square.
pub fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let s = n.sqrt();
    if &(&s * &s) == n {
        Some(s)
    } else {
        None
    }
}
