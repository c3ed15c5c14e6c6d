//! Ideal arithmetic in the quartic orders `O_K[ζ_3]`, with ideals stored as
//! full-rank integer lattices in canonical Hermite normal form on the basis
//! `{1, ω, ζ, ωζ}`.
//!
//! Principality testing enumerates lattice vectors under the positive
//! definite trace form `Tr(x·x̄)` of the CM involution, with the enumeration
//! radius balanced by the fundamental unit of the maximal real subfield, so
//! both a found generator and a reported absence are exact. Prime ideals come
//! from splitting `O/pO` by Frobenius-kernel linear algebra over `F_p`
//! (no polynomial factorization). The class group is generated from the prime
//! ideals below the Minkowski bound, with a canonical minimal-norm
//! representative per class, the multiplication table, and the Galois action
//! `σ` whose fixed classes and 2-orbits give `h_μ` and `h_λ`.

use crate::cycloring::{galois_sigma, CycloElem, CycloOrder};
use crate::lattice::{self, ZMat};
use crate::quadring::{fundamental_unit_real, QuadInt, QuadOrder};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Hard default for the Minkowski-bound cap; configurable per call.
pub const DEFAULT_MINKOWSKI_CAP: u64 = 200;

fn vec4(e: &CycloElem) -> Vec<BigInt> {
    let c = e.coords();
    vec![
        c[0].a().clone(),
        c[0].b().clone(),
        c[1].a().clone(),
        c[1].b().clone(),
    ]
}

fn elem4(order: &CycloOrder, v: &[BigInt]) -> CycloElem {
    let base = order.base();
    order.from_coords(vec![
        QuadInt::new(&base, v[0].clone(), v[1].clone()),
        QuadInt::new(&base, v[2].clone(), v[3].clone()),
    ])
}

fn order_basis(order: &CycloOrder) -> Vec<CycloElem> {
    let base = order.base();
    let one = order.one();
    let om = order.embed_base(&base.omega());
    let z = order.zeta();
    let omz = om.mul(&z);
    vec![one, om, z, omz]
}

/// Complex conjugation (the CM involution): `ζ ↦ ζ²` always, and the base
/// conjugation on coordinates when the base is imaginary.
fn complex_conj(e: &CycloElem) -> CycloElem {
    let ord = e.order().clone();
    let conjed = if ord.base().is_imaginary() {
        ord.from_coords(e.coords().iter().map(|q| q.conj()).collect())
    } else {
        e.clone()
    };
    galois_sigma(&conjed)
}

/// `Tr_{L/Q}(x) = Tr_{K/Q}(x + σx)`.
fn trace_to_q(e: &CycloElem) -> BigInt {
    let s = e.add(&galois_sigma(e));
    assert!(s.coords()[1].is_zero());
    s.coords()[0].trace()
}

/// Shared environment for the enumeration-based operations on one order.
struct Env {
    order: CycloOrder,
    /// Gram matrix of the positive definite form `Tr(x·x̄)` on the order basis.
    gram: ZMat,
    /// `κ ≥ s + 1/s` for the archimedean value `s` of the balancing unit.
    kappa: BigInt,
    /// Minkowski bound (integer upper bound).
    minkowski: u64,
}

fn isqrt_big(n: &BigInt) -> BigInt {
    assert!(!n.is_negative());
    n.sqrt()
}

fn quartic_env(order: &CycloOrder, cap: u64) -> Result<Env> {
    if order.ell() != 3 {
        return Err(Error::Unsupported(
            "ideal machinery is implemented for the quartic orders O_K[zeta_3]".into(),
        ));
    }
    let base = order.base();
    let basis = order_basis(order);
    let mut gram = lattice::zeros(4, 4);
    for i in 0..4 {
        for j in 0..4 {
            gram[i][j] = trace_to_q(&basis[i].mul(&complex_conj(&basis[j])));
        }
    }
    // |disc L| = |D_K · (−3) · D_third| with the third quadratic subfield Q(√−3d)
    let d = base.d();
    let third = QuadOrder::new(-3 * d)?;
    let disc = BigInt::from(base.discriminant().abs())
        * BigInt::from(3)
        * BigInt::from(third.discriminant().abs());
    // Minkowski: (3/(2π²))·√|disc| < (19/125)·(⌊√disc⌋+1)
    let mink_num = BigInt::from(19) * (isqrt_big(&disc) + 1);
    let minkowski_big = mink_num / BigInt::from(125) + 1;
    let minkowski = u64::try_from(&minkowski_big)
        .map_err(|_| Error::ResourceCap("Minkowski bound does not fit u64".into()))?;
    if minkowski > cap {
        return Err(Error::ResourceCap(format!(
            "Minkowski bound {minkowski} exceeds the cap {cap}"
        )));
    }
    // real subfield: Q(√(−3d)) for imaginary d, Q(√d) for real d
    let real = if base.is_imaginary() { third } else { base };
    let eps = fundamental_unit_real(&real)?.unit;
    let eps_hi =
        eps.a().abs() + eps.b().abs() * (isqrt_big(&BigInt::from(real.d())) + 1) + BigInt::one();
    // balance with the fundamental unit of the quartic order itself: when the
    // Hasse index is 2 its archimedean value is √ε, halving the radius
    let m_abs = base.d().unsigned_abs();
    let quartic_unit = if base.is_imaginary() {
        crate::units::fundamental_unit_quartic(m_abs)
    } else {
        crate::units::fundamental_unit_quartic_real(m_abs)
    };
    let kappa = match quartic_unit {
        Ok(data) if data.hasse_index == 2 => isqrt_big(&eps_hi) + 2,
        _ => &eps_hi + 1,
    };
    Ok(Env {
        order: order.clone(),
        gram,
        kappa,
        minkowski,
    })
}

impl Env {
    fn kappa(&self) -> BigInt {
        self.kappa.clone()
    }

    /// `T₂` bound covering, up to unit balance, every `α` with `|N(α)| ≤ nmax`.
    fn t2_bound(&self, nmax: &BigInt) -> BigInt {
        BigInt::from(2) * (isqrt_big(nmax) + 1) * self.kappa()
    }

    /// `T₂` bound on `β = den·α` for `α ∈ I⁻¹` with `|N(α)| ≤ M/N(I)`:
    /// `den² · 2κ · sqrt(M/N(I))`, rounded up in exact arithmetic.
    fn t2_bound_inverse(&self, n_ideal: &BigInt, den: &BigInt) -> BigInt {
        let m = BigInt::from(self.minkowski);
        // sqrt(M/N) ≤ (isqrt(M·N)+1)/N
        let root = isqrt_big(&(&m * n_ideal)) + 1;
        let num = BigInt::from(2) * self.kappa() * den * den * root;
        num / n_ideal + 1
    }

    fn bilinear(&self, x: &[BigInt], y: &[BigInt]) -> BigInt {
        let mut s = BigInt::zero();
        for i in 0..4 {
            for j in 0..4 {
                s += &x[i] * &self.gram[i][j] * &y[j];
            }
        }
        s
    }
}

/// An integral ideal of `O_K[ζ_3]` as a canonical HNF lattice. Rows of
/// `basis` are lattice generators in the order coordinates `{1, ω, ζ, ωζ}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HnfIdeal {
    order: CycloOrder,
    basis: ZMat,
}

impl HnfIdeal {
    /// The unit ideal `(1)`.
    pub fn one(order: &CycloOrder) -> HnfIdeal {
        let mut basis = lattice::zeros(4, 4);
        for (i, row) in basis.iter_mut().enumerate() {
            row[i] = BigInt::one();
        }
        HnfIdeal {
            order: order.clone(),
            basis,
        }
    }

    /// Smallest ideal containing the generators.
    pub fn from_generators(order: &CycloOrder, gens: &[CycloElem]) -> Result<HnfIdeal> {
        let mut rows: ZMat = Vec::new();
        for g in gens {
            for b in order_basis(order) {
                rows.push(vec4(&g.mul(&b)));
            }
        }
        let h = lattice::hnf_rows(rows);
        if h.len() != 4 {
            return Err(Error::InvalidInput(
                "zero ideal: generators do not span a full lattice".into(),
            ));
        }
        Ok(HnfIdeal {
            order: order.clone(),
            basis: h,
        })
    }

    pub fn order(&self) -> &CycloOrder {
        &self.order
    }

    /// Canonical HNF basis rows.
    pub fn basis(&self) -> &ZMat {
        &self.basis
    }

    pub fn basis_elems(&self) -> Vec<CycloElem> {
        self.basis.iter().map(|r| elem4(&self.order, r)).collect()
    }

    /// Absolute norm = lattice index in `O` = product of the HNF diagonal.
    pub fn norm(&self) -> BigInt {
        (0..4).map(|i| self.basis[i][i].clone()).product()
    }

    pub fn contains(&self, e: &CycloElem) -> bool {
        lattice::hnf_contains(&self.basis, &vec4(e))
    }

    pub fn mul(&self, other: &HnfIdeal) -> HnfIdeal {
        assert_eq!(self.order, other.order);
        let a = self.basis_elems();
        let b = other.basis_elems();
        let mut rows = Vec::with_capacity(16);
        for x in &a {
            for y in &b {
                rows.push(vec4(&x.mul(y)));
            }
        }
        HnfIdeal {
            order: self.order.clone(),
            basis: lattice::hnf_rows(rows),
        }
    }

    /// Image under the Galois generator `σ` (a ring automorphism).
    pub fn apply_sigma(&self) -> HnfIdeal {
        let rows: ZMat = self
            .basis_elems()
            .iter()
            .map(|e| vec4(&galois_sigma(e)))
            .collect();
        HnfIdeal {
            order: self.order.clone(),
            basis: lattice::hnf_rows(rows),
        }
    }

    /// The principal ideal `(g)`.
    pub fn principal(order: &CycloOrder, g: &CycloElem) -> Result<HnfIdeal> {
        HnfIdeal::from_generators(order, std::slice::from_ref(g))
    }

    /// Wraps an HNF basis computed elsewhere, validating the module property.
    pub(crate) fn from_hnf_basis(order: &CycloOrder, basis: ZMat) -> Result<HnfIdeal> {
        if basis.len() != 4 {
            return Err(Error::InvalidInput("ideal basis must have rank 4".into()));
        }
        let ideal = HnfIdeal {
            order: order.clone(),
            basis: lattice::hnf_rows(basis),
        };
        let base = order.base();
        for e in ideal.basis_elems() {
            if !ideal.contains(&e.scale(&base.omega())) || !ideal.contains(&e.mul(&order.zeta())) {
                return Err(Error::InvalidInput(
                    "lattice is not an O[zeta]-module".into(),
                ));
            }
        }
        Ok(ideal)
    }

    /// `(1/den) · num` with `num` integral: the inverse fractional ideal.
    /// Returns `(num, den)` such that `self · num = den · O`.
    pub fn inverse(&self) -> (HnfIdeal, BigInt) {
        // x ∈ I⁻¹ ⟺ x·g ∈ O for the four basis generators g; each condition
        // is 4 integral linear functionals, so I⁻¹ is the dual lattice of the
        // row span of the stacked multiplication matrices.
        let mut rows: ZMat = Vec::with_capacity(16);
        for g in self.basis_elems() {
            // multiplication matrix: column j = coords of g·e_j
            let cols: Vec<Vec<BigInt>> = order_basis(&self.order)
                .iter()
                .map(|e| vec4(&g.mul(e)))
                .collect();
            for k in 0..4 {
                rows.push((0..4).map(|j| cols[j][k].clone()).collect());
            }
        }
        let h = lattice::hnf_rows(rows);
        assert_eq!(h.len(), 4);
        let hq = lattice::qmat_from_int(&h);
        let hinv = lattice::qmat_inverse(&hq);
        // dual basis vectors are the columns of H⁻¹; scale by den = |det H|
        let den: BigInt = (0..4).map(|i| h[i][i].clone()).product();
        let mut int_rows = Vec::new();
        for j in 0..4 {
            let mut row = Vec::new();
            for i in 0..4 {
                let scaled = &hinv[i][j] * BigRational::from(den.clone());
                assert!(scaled.is_integer());
                row.push(scaled.to_integer());
            }
            int_rows.push(row);
        }
        let num = HnfIdeal {
            order: self.order.clone(),
            basis: lattice::hnf_rows(int_rows),
        };
        (num, den)
    }
}

/// Searches for a generator: an `α ∈ I` with `|N(α)| = N(I)`. The enumeration
/// is complete for the unit-balanced radius, so `None` certifies
/// non-principality.
pub fn is_principal(ideal: &HnfIdeal) -> Result<Option<CycloElem>> {
    let env = quartic_env(&ideal.order, DEFAULT_MINKOWSKI_CAP.max(10_000))?;
    let n = ideal.norm();
    let bound = env.t2_bound(&n);
    let cands = short_elements(&env, ideal, &bound);
    let mut best: Option<CycloElem> = None;
    for alpha in cands {
        if alpha.absolute_norm().abs() == n {
            best = Some(alpha);
            break;
        }
    }
    Ok(best)
}

/// All nonzero `α` in the ideal with `Tr(α·ᾱ) ≤ bound`, sorted.
fn short_elements(env: &Env, ideal: &HnfIdeal, bound: &BigInt) -> Vec<CycloElem> {
    let rows = &ideal.basis;
    let mut gram = lattice::zeros(4, 4);
    for i in 0..4 {
        for j in 0..4 {
            gram[i][j] = env.bilinear(&rows[i], &rows[j]);
        }
    }
    let gram_q = lattice::qmat_from_int(&gram);
    let coeffs = lattice::enumerate_short_vectors(&gram_q, &BigRational::from(bound.clone()));
    coeffs
        .into_iter()
        .map(|c| {
            let mut v = vec![BigInt::zero(); 4];
            for (i, ci) in c.iter().enumerate() {
                for k in 0..4 {
                    v[k] += ci * &rows[i][k];
                }
            }
            elem4(&env.order, &v)
        })
        .collect()
}

/// Canonical representative of the ideal class of `I`: the minimal-norm
/// integral ideal in the class, ties broken by lexicographic HNF basis.
pub fn canonical_class_rep(ideal: &HnfIdeal, cap: u64) -> Result<HnfIdeal> {
    let env = quartic_env(&ideal.order, cap)?;
    canonical_class_rep_env(&env, ideal)
}

fn canonical_class_rep_env(env: &Env, ideal: &HnfIdeal) -> Result<HnfIdeal> {
    let (inv, den) = ideal.inverse();
    let n_i = ideal.norm();
    // enumerate β ∈ den·I⁻¹; α = β/den runs over I⁻¹ with |N(α)| ≤ M/N(I)
    // (up to units), and J = α·I is integral of norm |N(α)|·N(I)
    let bound = env.t2_bound_inverse(&n_i, &den);
    let betas = short_elements(&env, &inv, &bound);
    let den4 = &den * &den * &den * &den;
    // first pass: candidate norms only
    let mut scored: Vec<(BigInt, CycloElem)> = Vec::new();
    for beta in betas {
        let num = beta.absolute_norm().abs() * &n_i;
        if num.is_zero() || !(&num % &den4).is_zero() {
            continue;
        }
        scored.push((num / &den4, beta));
    }
    let min_norm = scored
        .iter()
        .map(|(n, _)| n.clone())
        .min()
        .ok_or_else(|| {
            Error::Inconsistency("no integral ideal found below the Minkowski bound".into())
        })?;
    // second pass: build lattices only for the minimal-norm candidates
    let mut best: Option<HnfIdeal> = None;
    for (nj, beta) in scored.into_iter().filter(|(n, _)| *n == min_norm) {
        // J = (β/den)·I : rows (β·g)/den must be integral
        let mut rows = Vec::new();
        let mut ok = true;
        for g in ideal.basis_elems() {
            let prod = vec4(&beta.mul(&g));
            let mut row = Vec::new();
            for x in prod {
                let (q, r) = num_integer::Integer::div_rem(&x, &den);
                if !r.is_zero() {
                    ok = false;
                    break;
                }
                row.push(q);
            }
            if !ok {
                break;
            }
            rows.push(row);
        }
        if !ok {
            continue;
        }
        let j = HnfIdeal {
            order: ideal.order.clone(),
            basis: lattice::hnf_rows(rows),
        };
        debug_assert_eq!(j.norm(), nj);
        match &best {
            None => best = Some(j),
            Some(bj) => {
                if j.basis < bj.basis {
                    best = Some(j);
                }
            }
        }
    }
    best.ok_or_else(|| {
        Error::Inconsistency("no integral ideal found below the Minkowski bound".into())
    })
}

/// The ideal class group with its Galois action.
#[derive(Debug, Clone)]
pub struct ClassGroupData {
    pub order_h: u64,
    /// Canonical class representatives; index 0 is the principal class `O`.
    pub reps: Vec<HnfIdeal>,
    /// `law[i][j]` = index of the class of `reps[i]·reps[j]`.
    pub law: Vec<Vec<usize>>,
    /// Index of the class of `σ(reps[i])`.
    pub sigma_action: Vec<usize>,
}

impl ClassGroupData {
    /// Class index of an arbitrary integral ideal.
    pub fn class_index(&self, ideal: &HnfIdeal, cap: u64) -> Result<usize> {
        let c = canonical_class_rep(ideal, cap)?;
        self.reps
            .iter()
            .position(|r| r.basis == c.basis)
            .ok_or_else(|| Error::Inconsistency("class not in the computed group".into()))
    }
}

/// Splits `(p)` into prime ideals of `O` by decomposing the `F_p`-algebra
/// `O/pO` with Frobenius kernels; returns the primes with residue degrees.
pub fn split_prime(order: &CycloOrder, p: u64) -> Result<Vec<(HnfIdeal, u32)>> {
    let basis = order_basis(order);
    // structure constants mod p
    let mut table = vec![vec![vec![0u64; 4]; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            let prod = vec4(&basis[i].mul(&basis[j]));
            for k in 0..4 {
                let r = (&prod[k] % BigInt::from(p) + BigInt::from(p)) % BigInt::from(p);
                table[i][j][k] = u64::try_from(&r).unwrap();
            }
        }
    }
    let alg = FpAlgebra { p, table };
    let max_ideals = alg.maximal_ideals();
    let mut out = Vec::new();
    for (mbasis, f) in max_ideals {
        let mut rows: ZMat = Vec::new();
        for i in 0..4 {
            let mut r = vec![BigInt::zero(); 4];
            r[i] = BigInt::from(p);
            rows.push(r);
        }
        for v in &mbasis {
            rows.push(v.iter().map(|&x| BigInt::from(x)).collect());
        }
        let h = lattice::hnf_rows(rows);
        let ideal = HnfIdeal {
            order: order.clone(),
            basis: h,
        };
        let expect = BigInt::from(p).pow(f);
        if ideal.norm() != expect {
            return Err(Error::Inconsistency(format!(
                "prime above {p}: norm {} != p^{f}",
                ideal.norm()
            )));
        }
        out.push((ideal, f));
    }
    Ok(out)
}

/// A commutative `F_p`-algebra of dimension 4 given by structure constants.
struct FpAlgebra {
    p: u64,
    table: Vec<Vec<Vec<u64>>>,
}

impl FpAlgebra {
    fn mul(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        let p = self.p;
        let mut out = vec![0u64; 4];
        for i in 0..4 {
            if x[i] == 0 {
                continue;
            }
            for j in 0..4 {
                if y[j] == 0 {
                    continue;
                }
                let c = x[i] * y[j] % p;
                for k in 0..4 {
                    out[k] = (out[k] + c * self.table[i][j][k]) % p;
                }
            }
        }
        out
    }

    fn one(&self) -> Vec<u64> {
        vec![1, 0, 0, 0]
    }

    fn pow(&self, x: &[u64], mut e: u64) -> Vec<u64> {
        let mut acc = self.one();
        let mut b = x.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &b);
            }
            b = self.mul(&b, &b);
            e >>= 1;
        }
        acc
    }

    /// Maximal ideals as `(F_p-basis of the ideal inside O/pO, residue degree)`.
    fn maximal_ideals(&self) -> Vec<(Vec<Vec<u64>>, u32)> {
        let p = self.p;
        // Frobenius matrix: column i = e_i^p
        let mut frob = vec![vec![0u64; 4]; 4];
        for i in 0..4 {
            let mut e = vec![0u64; 4];
            e[i] = 1;
            let fe = self.pow(&e, p);
            for (k, row) in frob.iter_mut().enumerate() {
                row[i] = fe[k];
            }
        }
        // radical = ker(F^k), p^k ≥ 4
        let k = if p < 4 { 2 } else { 1 };
        let mut fk = frob.clone();
        for _ in 1..k {
            fk = fp_mat_mul(&fk, &frob, p);
        }
        let radical = fp_nullspace(&fk, p);
        // components of A/R, tracked as F_p-subspaces of A (coset sections)
        // that are ideals of A/R; each stores (basis, idempotent)
        let quot = FpQuotient::new(self, &radical);
        let mut components = vec![(quot.basis.clone(), quot.normalize(&self.one()))];
        loop {
            let mut progressed = false;
            let mut next: Vec<(Vec<Vec<u64>>, Vec<u64>)> = Vec::new();
            for (cbasis, cid) in components.drain(..) {
                // B_C = fixed points of Frobenius inside C
                let fixed = quot.frobenius_fixed_subspace(self, &cbasis);
                if fixed.len() <= 1 {
                    next.push((cbasis, cid));
                    continue;
                }
                // pick b ∈ B_C independent from the component identity
                let b = fixed
                    .iter()
                    .find(|v| !fp_in_span(&[cid.clone()], v, p))
                    .expect("dim ≥ 2 fixed space contains a non-scalar")
                    .clone();
                // eigen-split: C = ⊕ ker(mul_b − λ) over eigenvalues λ
                let mut eigen: Vec<(u64, Vec<Vec<u64>>)> = Vec::new();
                for lam in 0..p {
                    let mut kerb: Vec<Vec<u64>> = Vec::new();
                    // restrict mul_b − λ to C: solve in coordinates of cbasis
                    let dim = cbasis.len();
                    let mut mat = vec![vec![0u64; dim]; 4];
                    for (j, v) in cbasis.iter().enumerate() {
                        let mut w = quot.normalize(&self.mul(&b, v));
                        // subtract λ·v
                        for t in 0..4 {
                            w[t] = (w[t] + (p - lam % p) * v[t]) % p;
                        }
                        let w = quot.normalize(&w);
                        for t in 0..4 {
                            mat[t][j] = w[t];
                        }
                    }
                    for sol in fp_nullspace(&mat, p) {
                        // sol are coefficients in cbasis
                        let mut v = vec![0u64; 4];
                        for (j, &cj) in sol.iter().enumerate() {
                            for t in 0..4 {
                                v[t] = (v[t] + cj * cbasis[j][t]) % p;
                            }
                        }
                        kerb.push(quot.normalize(&v));
                    }
                    if !kerb.is_empty() {
                        eigen.push((lam, kerb));
                    }
                }
                if eigen.len() <= 1 {
                    next.push((cbasis, cid));
                    continue;
                }
                progressed = true;
                // Lagrange idempotents for each eigenvalue
                for (lam, kerb) in &eigen {
                    let mut e = cid.clone();
                    for (mu, _) in &eigen {
                        if mu == lam {
                            continue;
                        }
                        // e *= (b − μ·1_C)/(λ − μ)
                        let scale = fp_inv((lam + p - mu) % p, p);
                        let mut factor = b.clone();
                        for t in 0..4 {
                            factor[t] = (factor[t] + (p - mu % p) * cid[t]) % p;
                        }
                        for t in &mut factor {
                            *t = *t * scale % p;
                        }
                        e = quot.normalize(&self.mul(&e, &factor));
                    }
                    next.push((kerb.clone(), e));
                }
            }
            components = next;
            if !progressed {
                break;
            }
        }
        // maximal ideal for component i: radical + all other components
        let mut out = Vec::new();
        for i in 0..components.len() {
            let mut vecs: Vec<Vec<u64>> = radical.clone();
            for (j, (cbasis, _)) in components.iter().enumerate() {
                if j != i {
                    vecs.extend(cbasis.iter().cloned());
                }
            }
            let f = components[i].0.len() as u32;
            out.push((vecs, f));
        }
        out
    }
}

/// Coset sections of `A/R`: elements are normalized by reducing along the
/// echelonized radical basis.
struct FpQuotient {
    p: u64,
    rad_echelon: Vec<Vec<u64>>,
    /// normalized basis of a complement of R in A
    basis: Vec<Vec<u64>>,
}

impl FpQuotient {
    fn new(alg: &FpAlgebra, radical: &[Vec<u64>]) -> FpQuotient {
        let p = alg.p;
        let rad_echelon = fp_echelon(radical, p);
        let mut basis = Vec::new();
        let mut span = rad_echelon.clone();
        for i in 0..4 {
            let mut e = vec![0u64; 4];
            e[i] = 1;
            if !fp_in_span(&span, &e, p) {
                span.push(e.clone());
                span = fp_echelon(&span, p);
                basis.push(fp_reduce(&rad_echelon, &e, p));
            }
        }
        FpQuotient {
            p,
            rad_echelon,
            basis,
        }
    }

    fn normalize(&self, v: &[u64]) -> Vec<u64> {
        fp_reduce(&self.rad_echelon, v, self.p)
    }

    /// Basis of `{x ∈ span(cbasis) : x^p = x (mod R)}`.
    fn frobenius_fixed_subspace(&self, alg: &FpAlgebra, cbasis: &[Vec<u64>]) -> Vec<Vec<u64>> {
        let p = self.p;
        let dim = cbasis.len();
        let mut mat = vec![vec![0u64; dim]; 4];
        for (j, v) in cbasis.iter().enumerate() {
            let mut w = self.normalize(&alg.pow(v, p));
            for t in 0..4 {
                w[t] = (w[t] + (p - 1) * v[t]) % p;
            }
            let w = self.normalize(&w);
            for t in 0..4 {
                mat[t][j] = w[t];
            }
        }
        fp_nullspace(&mat, p)
            .into_iter()
            .map(|sol| {
                let mut v = vec![0u64; 4];
                for (j, &cj) in sol.iter().enumerate() {
                    for t in 0..4 {
                        v[t] = (v[t] + cj * cbasis[j][t]) % p;
                    }
                }
                self.normalize(&v)
            })
            .collect()
    }
}

fn fp_inv(a: u64, p: u64) -> u64 {
    // p prime, a ≠ 0
    let mut res = 1u64;
    let mut b = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            res = res * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    res
}

fn fp_mat_mul(a: &[Vec<u64>], b: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    let n = a.len();
    let mut out = vec![vec![0u64; n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k] == 0 {
                continue;
            }
            for j in 0..n {
                out[i][j] = (out[i][j] + a[i][k] * b[k][j]) % p;
            }
        }
    }
    out
}

/// Row echelon form of a list of vectors over `F_p` (reduced).
fn fp_echelon(rows: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    let mut m: Vec<Vec<u64>> = rows.iter().map(|r| r.iter().map(|&x| x % p).collect()).collect();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivot_row = 0;
    for c in 0..cols {
        if let Some(r) = (pivot_row..m.len()).find(|&r| m[r][c] != 0) {
            m.swap(pivot_row, r);
            let inv = fp_inv(m[pivot_row][c], p);
            for x in &mut m[pivot_row] {
                *x = *x * inv % p;
            }
            for r2 in 0..m.len() {
                if r2 != pivot_row && m[r2][c] != 0 {
                    let f = m[r2][c];
                    for cc in 0..cols {
                        m[r2][cc] = (m[r2][cc] + (p - f) * m[pivot_row][cc]) % p;
                    }
                }
            }
            pivot_row += 1;
        }
    }
    m.truncate(pivot_row);
    m
}

fn fp_reduce(echelon: &[Vec<u64>], v: &[u64], p: u64) -> Vec<u64> {
    let mut out: Vec<u64> = v.iter().map(|&x| x % p).collect();
    for row in echelon {
        let c = row.iter().position(|&x| x != 0).unwrap();
        if out[c] != 0 {
            let f = out[c];
            for i in 0..out.len() {
                out[i] = (out[i] + (p - f) * row[i]) % p;
            }
        }
    }
    out
}

fn fp_in_span(rows: &[Vec<u64>], v: &[u64], p: u64) -> bool {
    let ech = fp_echelon(rows, p);
    fp_reduce(&ech, v, p).iter().all(|&x| x == 0)
}

/// Nullspace basis of a matrix over `F_p` (columns = unknowns).
fn fp_nullspace(mat: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    let rows = mat.len();
    let cols = mat.first().map_or(0, |r| r.len());
    let mut m: Vec<Vec<u64>> = mat.iter().map(|r| r.iter().map(|&x| x % p).collect()).collect();
    let mut pivots: Vec<Option<usize>> = vec![None; cols];
    let mut pr = 0usize;
    for c in 0..cols {
        if let Some(r) = (pr..rows).find(|&r| m[r][c] != 0) {
            m.swap(pr, r);
            let inv = fp_inv(m[pr][c], p);
            for x in &mut m[pr] {
                *x = *x * inv % p;
            }
            for r2 in 0..rows {
                if r2 != pr && m[r2][c] != 0 {
                    let f = m[r2][c];
                    for cc in 0..cols {
                        m[r2][cc] = (m[r2][cc] + (p - f) * m[pr][cc]) % p;
                    }
                }
            }
            pivots[c] = Some(pr);
            pr += 1;
        }
    }
    let mut out = Vec::new();
    for free in 0..cols {
        if pivots[free].is_some() {
            continue;
        }
        let mut v = vec![0u64; cols];
        v[free] = 1;
        for c in 0..cols {
            if let Some(r) = pivots[c] {
                v[c] = (p - m[r][free] % p) % p;
            }
        }
        out.push(v);
    }
    out
}

/// Computes the class group of `O_K[ζ_3]`, generated by the prime ideals
/// below the Minkowski bound, with multiplication table and σ-action.
pub fn class_group(order: &CycloOrder, cap: u64) -> Result<ClassGroupData> {
    let env = quartic_env(order, cap)?;
    let mut gens: Vec<HnfIdeal> = Vec::new();
    for p in primes_up_to(env.minkowski) {
        for (ideal, f) in split_prime(order, p)? {
            if BigInt::from(p).pow(f) <= BigInt::from(env.minkowski) {
                gens.push(ideal);
            }
        }
    }
    let one = HnfIdeal::one(order);
    let mut reps: Vec<HnfIdeal> = vec![one];
    let mut frontier = vec![0usize];
    while let Some(i) = frontier.pop() {
        for g in &gens {
            let prod = reps[i].mul(g);
            let canon = canonical_class_rep_env(&env, &prod)?;
            if !reps.iter().any(|r| r.basis == canon.basis) {
                reps.push(canon);
                frontier.push(reps.len() - 1);
            }
        }
    }
    let h = reps.len();
    let mut law = vec![vec![0usize; h]; h];
    for i in 0..h {
        for j in 0..h {
            let canon = canonical_class_rep_env(&env, &reps[i].mul(&reps[j]))?;
            law[i][j] = reps
                .iter()
                .position(|r| r.basis == canon.basis)
                .ok_or_else(|| Error::Inconsistency("law escaped the class set".into()))?;
        }
    }
    let mut sigma_action = vec![0usize; h];
    for i in 0..h {
        let canon = canonical_class_rep_env(&env, &reps[i].apply_sigma())?;
        sigma_action[i] = reps
            .iter()
            .position(|r| r.basis == canon.basis)
            .ok_or_else(|| Error::Inconsistency("sigma escaped the class set".into()))?;
    }
    Ok(ClassGroupData {
        order_h: h as u64,
        reps,
        law,
        sigma_action,
    })
}

/// Class group of `O_{Q(√−m)}[ζ_3]`.
pub fn class_group_imaginary(m: u64, cap: u64) -> Result<ClassGroupData> {
    let base = QuadOrder::imaginary(m)?;
    let order = CycloOrder::new(base, 3)?;
    class_group(&order, cap)
}

/// `(h_μ, h_λ)`: Galois-fixed classes and 2-element Galois orbits.
pub fn galois_orbit_counts(cg: &ClassGroupData) -> (u64, u64) {
    let mut h_mu = 0u64;
    let mut h_lambda = 0u64;
    for (i, &si) in cg.sigma_action.iter().enumerate() {
        if si == i {
            h_mu += 1;
        } else if si > i {
            h_lambda += 1;
        }
    }
    (h_mu, h_lambda)
}

fn primes_up_to(n: u64) -> Vec<u64> {
    let mut sieve = vec![true; (n + 1) as usize];
    let mut out = Vec::new();
    for p in 2..=n {
        if sieve[p as usize] {
            out.push(p);
            let mut q = p * p;
            while q <= n {
                sieve[q as usize] = false;
                q += p;
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Ideals of the quadratic base order (rank-2 lattices).

/// An integral ideal of the base order `O_K`, 2×2 HNF on `{1, ω}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadIdeal {
    order: QuadOrder,
    basis: ZMat,
}

impl QuadIdeal {
    pub fn from_generators(order: &QuadOrder, gens: &[QuadInt]) -> Result<QuadIdeal> {
        let mut rows: ZMat = Vec::new();
        for g in gens {
            for b in [order.one(), order.omega()] {
                let prod = g * &b;
                rows.push(vec![prod.a().clone(), prod.b().clone()]);
            }
        }
        let h = lattice::hnf_rows(rows);
        if h.len() != 2 {
            return Err(Error::InvalidInput("zero ideal in the base order".into()));
        }
        Ok(QuadIdeal {
            order: *order,
            basis: h,
        })
    }

    pub fn principal(g: &QuadInt) -> Result<QuadIdeal> {
        QuadIdeal::from_generators(&g.order(), std::slice::from_ref(g))
    }

    pub fn basis(&self) -> &ZMat {
        &self.basis
    }

    pub fn norm(&self) -> BigInt {
        (&self.basis[0][0] * &self.basis[1][1]).abs()
    }

    pub fn mul(&self, other: &QuadIdeal) -> QuadIdeal {
        assert_eq!(self.order, other.order);
        let elems = |i: &QuadIdeal| -> Vec<QuadInt> {
            i.basis
                .iter()
                .map(|r| QuadInt::new(&i.order, r[0].clone(), r[1].clone()))
                .collect()
        };
        let mut rows = Vec::new();
        for x in elems(self) {
            for y in elems(other) {
                let prod = &x * &y;
                rows.push(vec![prod.a().clone(), prod.b().clone()]);
            }
        }
        QuadIdeal {
            order: self.order,
            basis: lattice::hnf_rows(rows),
        }
    }

    pub fn contains(&self, x: &QuadInt) -> bool {
        lattice::hnf_contains(&self.basis, &[x.a().clone(), x.b().clone()])
    }

    /// Generator search in an imaginary quadratic order; complete because the
    /// norm form is positive definite.
    pub fn is_principal(&self) -> Result<Option<QuadInt>> {
        if !self.order.is_imaginary() {
            return Err(Error::Unsupported(
                "base-order principality test implemented for imaginary orders".into(),
            ));
        }
        let n = self.norm();
        // Tr(x·x̄) = 2N(x); enumerate 2N(x) ≤ 2N(I)
        let v: Vec<QuadInt> = self
            .basis
            .iter()
            .map(|r| QuadInt::new(&self.order, r[0].clone(), r[1].clone()))
            .collect();
        let tr = |x: &QuadInt, y: &QuadInt| -> BigInt { (x * &y.conj()).trace() };
        let gram = vec![
            vec![tr(&v[0], &v[0]), tr(&v[0], &v[1])],
            vec![tr(&v[1], &v[0]), tr(&v[1], &v[1])],
        ];
        let bound = BigRational::from(BigInt::from(2) * &n);
        let sols = lattice::enumerate_short_vectors(&lattice::qmat_from_int(&gram), &bound);
        for c in sols {
            let x = QuadInt::new(
                &self.order,
                &c[0] * &self.basis[0][0] + &c[1] * &self.basis[1][0],
                &c[0] * &self.basis[0][1] + &c[1] * &self.basis[1][1],
            );
            if x.norm().abs() == n {
                return Ok(Some(x));
            }
        }
        Ok(None)
    }
}

/// Relative norm ideal `N_{L/K}(I) = (I · σI) ∩ O_K` of a quartic ideal.
pub fn relative_norm_ideal(ideal: &HnfIdeal) -> QuadIdeal {
    let prod = ideal.mul(&ideal.apply_sigma());
    // kernel of projection to the ζ-coordinates picks out the K-sublattice
    let zeta_cols: ZMat = prod
        .basis
        .iter()
        .map(|r| vec![r[2].clone(), r[3].clone()])
        .collect();
    let combos = lattice::left_kernel(&zeta_cols);
    let rows: ZMat = combos
        .iter()
        .map(|c| {
            let mut v = vec![BigInt::zero(); 2];
            for (i, ci) in c.iter().enumerate() {
                v[0] += ci * &prod.basis[i][0];
                v[1] += ci * &prod.basis[i][1];
            }
            v
        })
        .collect();
    QuadIdeal {
        order: ideal.order.base(),
        basis: lattice::hnf_rows(rows),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quartic(m: i64) -> CycloOrder {
        CycloOrder::new(QuadOrder::new(m).unwrap(), 3).unwrap()
    }

    fn appendix_ideal(ord: &CycloOrder) -> HnfIdeal {
        // (3, √−5 ζ3 − 1)
        let base = ord.base();
        let g1 = ord.embed_base(&QuadInt::new(&base, 3, 0));
        let g2 = ord
            .zeta()
            .scale(&base.sqrt_d())
            .sub(&ord.one());
        HnfIdeal::from_generators(ord, &[g1, g2]).unwrap()
    }

    #[test]
    fn unit_ideal_and_zero_rejection() {
        let ord = quartic(-5);
        let one = HnfIdeal::principal(&ord, &ord.one()).unwrap();
        assert_eq!(one, HnfIdeal::one(&ord));
        assert_eq!(one.norm(), BigInt::one());
        assert!(HnfIdeal::from_generators(&ord, &[ord.zero()]).is_err());
    }

    #[test]
    fn appendix_ideal_norm_and_principality() {
        let ord = quartic(-5);
        let a = appendix_ideal(&ord);
        // 3 splits in Q(√−5) and ramifies in the ζ3-direction, so this is a
        // prime of norm 3
        assert_eq!(a.norm(), BigInt::from(3));
        assert!(is_principal(&a).unwrap().is_none());
        let sq = a.mul(&a);
        let gen = is_principal(&sq).unwrap();
        assert!(gen.is_some());
        // module property: closed under ω and ζ multiplication
        for e in a.basis_elems() {
            assert!(a.contains(&e.mul(&ord.zeta())));
            assert!(a.contains(&e.scale(&ord.base().omega())));
        }
    }

    #[test]
    fn principal_example_m2() {
        let ord = quartic(-2);
        let g = ord.one().sub(&ord.zeta());
        let i = HnfIdeal::principal(&ord, &g).unwrap();
        let found = is_principal(&i).unwrap().expect("principal by construction");
        assert_eq!(found.absolute_norm().abs(), i.norm());
    }

    #[test]
    fn ideal_mul_identity_and_norms() {
        let ord = quartic(-5);
        let a = appendix_ideal(&ord);
        assert_eq!(a.mul(&HnfIdeal::one(&ord)), a);
        // coprime-norm multiplicativity
        let p2 = split_prime(&ord, 7).unwrap();
        for (p, _) in &p2 {
            let prod = a.mul(p);
            assert_eq!(prod.norm(), a.norm() * p.norm());
        }
        // σ preserves norms
        assert_eq!(a.apply_sigma().norm(), a.norm());
    }

    #[test]
    fn inverse_inverts() {
        let ord = quartic(-5);
        let a = appendix_ideal(&ord);
        let (inv, den) = a.inverse();
        let prod = a.mul(&inv);
        // a · inv = den · O
        let mut expect = lattice::zeros(4, 4);
        for (i, row) in expect.iter_mut().enumerate() {
            row[i] = den.clone();
        }
        assert_eq!(prod.basis, lattice::hnf_rows(expect));
    }

    #[test]
    fn prime_splitting_shapes() {
        let ord = quartic(-5);
        // degrees multiply to ≤ 4 and the product of norms divides p⁴
        for p in [2u64, 3, 5, 7, 11, 13] {
            let primes = split_prime(&ord, p).unwrap();
            assert!(!primes.is_empty(), "no primes above {p}");
            for (ideal, f) in &primes {
                assert_eq!(ideal.norm(), BigInt::from(p).pow(*f));
                assert!(ideal.contains(&ord.embed_base(&QuadInt::new(&ord.base(), p as i64, 0))));
            }
        }
    }

    #[test]
    fn class_groups_small() {
        let cg2 = class_group_imaginary(2, DEFAULT_MINKOWSKI_CAP).unwrap();
        assert_eq!(cg2.order_h, 1);
        assert_eq!(galois_orbit_counts(&cg2), (1, 0));

        let cg5 = class_group_imaginary(5, DEFAULT_MINKOWSKI_CAP).unwrap();
        assert_eq!(cg5.order_h, 2);
        assert_eq!(galois_orbit_counts(&cg5), (2, 0));

        let cg1 = class_group_imaginary(1, DEFAULT_MINKOWSKI_CAP).unwrap();
        assert_eq!(cg1.order_h, 1);
        assert_eq!(galois_orbit_counts(&cg1), (1, 0));
    }

    #[test]
    fn class_group_m13_structure() {
        let cg = class_group_imaginary(13, DEFAULT_MINKOWSKI_CAP).unwrap();
        assert_eq!(cg.order_h, 4);
        let (h_mu, h_lambda) = galois_orbit_counts(&cg);
        assert_eq!(2 * h_lambda + h_mu, 4);
        // law rows are permutations; σ is an automorphism with σ² = id
        let h = cg.order_h as usize;
        for i in 0..h {
            let mut seen: Vec<bool> = vec![false; h];
            for j in 0..h {
                seen[cg.law[i][j]] = true;
            }
            assert!(seen.iter().all(|&x| x));
        }
        for i in 0..h {
            assert_eq!(cg.sigma_action[cg.sigma_action[i]], i);
            for j in 0..h {
                assert_eq!(
                    cg.sigma_action[cg.law[i][j]],
                    cg.law[cg.sigma_action[i]][cg.sigma_action[j]]
                );
            }
        }
    }

    #[test]
    fn class_count_matches_biquadratic_formula() {
        for m in [1u64, 2, 5, 10] {
            let cg = class_group_imaginary(m, DEFAULT_MINKOWSKI_CAP).unwrap();
            let formula = crate::classnum::class_number_biquadratic(m).unwrap();
            assert_eq!(cg.order_h, formula, "m = {m}");
        }
    }

    #[test]
    fn appendix_class_is_the_nontrivial_one() {
        let ord = quartic(-5);
        let cg = class_group(&ord, DEFAULT_MINKOWSKI_CAP).unwrap();
        let a = appendix_ideal(&ord);
        let idx = cg.class_index(&a, DEFAULT_MINKOWSKI_CAP).unwrap();
        assert_ne!(idx, 0, "the appendix ideal class is nontrivial");
    }

    #[test]
    fn base_order_identity_and_product() {
        let base = QuadOrder::new(-5).unwrap();
        // 2·3 + (√−5+1)(√−5−1) = 0
        let s = base.sqrt_d();
        let lhs = &QuadInt::new(&base, 6, 0)
            + &(&(&s + &base.one()) * &(&s - &base.one()));
        assert!(lhs.is_zero());
        // (2, √−5+1)·(3, √−5−1) = (1 − √−5)
        let a = QuadIdeal::from_generators(&base, &[QuadInt::new(&base, 2, 0), &s + &base.one()])
            .unwrap();
        let b = QuadIdeal::from_generators(&base, &[QuadInt::new(&base, 3, 0), &s - &base.one()])
            .unwrap();
        let prod = a.mul(&b);
        let expect = QuadIdeal::principal(&(&base.one() - &s)).unwrap();
        assert_eq!(prod, expect);
        assert!(a.is_principal().unwrap().is_none());
        assert!(prod.is_principal().unwrap().is_some());
    }

    #[test]
    fn relative_norm_of_appendix_class_is_nontrivial() {
        let ord = quartic(-5);
        let a = appendix_ideal(&ord);
        let nm = relative_norm_ideal(&a);
        assert!(nm.is_principal().unwrap().is_none());
        // and the norm of a principal quartic ideal is principal
        let g = ord.one().sub(&ord.zeta());
        let p = HnfIdeal::principal(&ord, &g).unwrap();
        assert!(relative_norm_ideal(&p).is_principal().unwrap().is_some());
    }

    #[test]
    fn hnf_canonicity() {
        let ord = quartic(-5);
        let a = appendix_ideal(&ord);
        // same ideal from a different generating set
        let base = ord.base();
        let g1 = ord.embed_base(&QuadInt::new(&base, 3, 0));
        let g2 = ord.zeta().scale(&base.sqrt_d()).sub(&ord.one());
        let shuffled = HnfIdeal::from_generators(
            &ord,
            &[g2.clone(), g1.clone(), g1.add(&g2), g2.mul(&ord.zeta())],
        )
        .unwrap();
        assert_eq!(a, shuffled);
    }
}
