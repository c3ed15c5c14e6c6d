//! Unit groups of the quartic orders `O_K[ζ_3]` and their action on
//! `O_K/(3)`.
//!
//! The quartic order is a CM order whose maximal real subfield is `Q(√3m)`
//! (imaginary base `Q(√−m)`) or `Q(√m)` (real base). Its unit group is
//! `μ_{3n} × Z`; an infinite-order generator is either the embedded real
//! fundamental unit `ε` (Hasse unit index 1) or a square root `η` of some
//! torsion multiple of `ε` (index 2). The index is decided by exact algebraic
//! square-root extraction inside the field — no numerical certification.
//!
//! The orbit machinery at the bottom computes the unit-group orbits on the
//! nine-element ring `O_K/(3)`, the count the cohomology assembly consumes.

use crate::cycloring::{galois_sigma, reduce_zeta_to_one, CycloElem, CycloOrder, ZetaResidue};
use crate::quadring::{
    fundamental_unit_real, reduce_mod3, residue_kind, QuadInt, QuadOrder, ResidueKind, ResidueMod3,
};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

type Q = BigRational;

/// An element of `K ⊗ Q` as `x + y·√d`, rational coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
struct KRat {
    d: i64,
    x: Q,
    y: Q,
}

impl KRat {
    fn new(d: i64, x: Q, y: Q) -> Self {
        KRat { d, x, y }
    }

    fn zero(d: i64) -> Self {
        KRat::new(d, Q::zero(), Q::zero())
    }

    fn from_quadint(q: &QuadInt) -> Self {
        let a = Q::from(q.a().clone());
        let b = Q::from(q.b().clone());
        if q.order().omega_is_half() {
            // a + b(1+√d)/2
            let half = Q::new(BigInt::one(), BigInt::from(2));
            KRat::new(q.order().d(), a + &half * &b, half * b)
        } else {
            KRat::new(q.order().d(), a, b)
        }
    }

    /// Back to ω-coordinates when they are integral.
    fn to_quadint(&self, order: &QuadOrder) -> Option<QuadInt> {
        let (a, b) = if order.omega_is_half() {
            let b = &self.y * Q::from(BigInt::from(2));
            let a = &self.x - &self.y;
            (a, b)
        } else {
            (self.x.clone(), self.y.clone())
        };
        if a.is_integer() && b.is_integer() {
            Some(QuadInt::new(order, a.to_integer(), b.to_integer()))
        } else {
            None
        }
    }

    fn add(&self, o: &KRat) -> KRat {
        KRat::new(self.d, &self.x + &o.x, &self.y + &o.y)
    }

    fn sub(&self, o: &KRat) -> KRat {
        KRat::new(self.d, &self.x - &o.x, &self.y - &o.y)
    }

    fn mul(&self, o: &KRat) -> KRat {
        let d = Q::from(BigInt::from(self.d));
        KRat::new(
            self.d,
            &self.x * &o.x + &(&self.y * &o.y) * &d,
            &self.x * &o.y + &self.y * &o.x,
        )
    }

    fn scale(&self, k: &Q) -> KRat {
        KRat::new(self.d, &self.x * k, &self.y * k)
    }

    fn norm(&self) -> Q {
        let d = Q::from(BigInt::from(self.d));
        &self.x * &self.x - &(&self.y * &self.y) * &d
    }

    fn inv(&self) -> KRat {
        let n = self.norm();
        assert!(!n.is_zero());
        KRat::new(self.d, &self.x / &n, -(&self.y / &n))
    }

    fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }
}

fn sqrt_rational(r: &Q) -> Option<Q> {
    if r.is_negative() {
        return None;
    }
    let n = crate::lattice::exact_sqrt(r.numer())?;
    let d = crate::lattice::exact_sqrt(r.denom())?;
    Some(Q::new(n, d))
}

/// All square roots of `z` in `K = Q(√d)`, listing both signs.
fn sqrt_in_quadfield(z: &KRat) -> Vec<KRat> {
    let mut out = Vec::new();
    if z.is_zero() {
        out.push(KRat::zero(z.d));
        return out;
    }
    if z.y.is_zero() {
        if let Some(u) = sqrt_rational(&z.x) {
            out.push(KRat::new(z.d, u.clone(), Q::zero()));
            out.push(KRat::new(z.d, -u, Q::zero()));
        }
        let xd = &z.x / Q::from(BigInt::from(z.d));
        if let Some(v) = sqrt_rational(&xd) {
            out.push(KRat::new(z.d, Q::zero(), v.clone()));
            out.push(KRat::new(z.d, Q::zero(), -v));
        }
        return out;
    }
    let n = z.norm();
    let Some(s) = sqrt_rational(&n) else {
        return out;
    };
    let two = Q::from(BigInt::from(2));
    for sgn in [s.clone(), -s] {
        let usq = (&z.x + &sgn) / &two;
        if let Some(u) = sqrt_rational(&usq) {
            if u.is_zero() {
                continue;
            }
            let v = &z.y / &(&u * &two);
            let w = KRat::new(z.d, u, v);
            if w.mul(&w) == *z {
                let neg = KRat::zero(z.d).sub(&w);
                out.push(w);
                out.push(neg);
            }
        }
    }
    out
}

/// `t` as `α + β·√−3` over `K`, derived from its `{1, ζ_3}` coordinates.
fn cyclo_to_sqrt3_coords(t: &CycloElem) -> (KRat, KRat) {
    assert_eq!(t.order().ell(), 3);
    let q0 = KRat::from_quadint(&t.coords()[0]);
    let q1 = KRat::from_quadint(&t.coords()[1]);
    let half = Q::new(BigInt::one(), BigInt::from(2));
    // ζ = (−1 + √−3)/2 ⟹ q0 + q1 ζ = (q0 − q1/2) + (q1/2)√−3
    let alpha = q0.sub(&q1.scale(&half));
    let beta = q1.scale(&half);
    (alpha, beta)
}

/// Square root of `t` inside the order `O_K[ζ_3]`, if one exists; exact.
///
/// Writes `w = p + q√−3` with `p, q ∈ K`, reduces to two nested square roots
/// in `K`, and keeps only results integral in the order.
pub(crate) fn sqrt_in_quartic_order(t: &CycloElem) -> Option<CycloElem> {
    let ord = t.order().clone();
    let base = ord.base();
    let (alpha, beta) = cyclo_to_sqrt3_coords(t);
    let three = Q::from(BigInt::from(3));
    let two = Q::from(BigInt::from(2));
    let mut candidates: Vec<(KRat, KRat)> = Vec::new();
    if beta.is_zero() {
        for p in sqrt_in_quadfield(&alpha) {
            candidates.push((p, KRat::zero(base.d())));
        }
        let m3 = alpha.scale(&(-Q::one() / &three));
        for q in sqrt_in_quadfield(&m3) {
            candidates.push((KRat::zero(base.d()), q));
        }
    } else {
        // N_{L/K}(t) = α² + 3β²
        let n = alpha.mul(&alpha).add(&beta.mul(&beta).scale(&three));
        for s in sqrt_in_quadfield(&n) {
            let psq = alpha.add(&s).scale(&(Q::one() / &two));
            for p in sqrt_in_quadfield(&psq) {
                if p.is_zero() {
                    continue;
                }
                let q = beta.mul(&p.scale(&two).inv());
                if p.mul(&p).sub(&q.mul(&q).scale(&three)) == alpha
                    && p.mul(&q).scale(&two) == beta
                {
                    candidates.push((p, q));
                }
            }
        }
    }
    for (p, q) in candidates {
        // w = p + q√−3 = (p + q) + 2q·ζ
        let c0 = p.add(&q);
        let c1 = q.scale(&two);
        if let (Some(a0), Some(a1)) = (c0.to_quadint(&base), c1.to_quadint(&base)) {
            let w = ord.from_coords(vec![a0, a1]);
            debug_assert_eq!(w.mul(&w), *t);
            return Some(w);
        }
    }
    None
}

/// Inverse of a unit in a degree-2 cyclotomic order.
pub fn unit_inverse(u: &CycloElem) -> CycloElem {
    assert_eq!(u.order().degree(), 2);
    let n = crate::cycloring::relative_norm(u);
    assert!(n.is_unit(), "not a unit");
    // n⁻¹ = conj(n)/N(n)
    let nn = n.norm();
    let mut ninv = n.conj();
    if nn.is_negative() {
        ninv = -&ninv;
    }
    galois_sigma(u).scale(&ninv)
}

/// The torsion subgroup `μ_{3n}` of `O_K[ζ_3]^×`, as explicit elements.
pub fn torsion_elements(ord: &CycloOrder) -> Vec<CycloElem> {
    assert_eq!(ord.ell(), 3);
    let base = ord.base();
    let mut base_torsion = vec![base.one(), -&base.one()];
    if base.d() == -1 {
        let i = base.sqrt_d();
        base_torsion.push(i.clone());
        base_torsion.push(-&i);
    }
    let mut out = Vec::new();
    for bt in &base_torsion {
        for k in 0..3u64 {
            out.push(ord.zeta().pow(k).scale(bt));
        }
    }
    out
}

/// Unit group data of a quartic order `O_K[ζ_3]`.
#[derive(Debug, Clone)]
pub struct UnitGroupData {
    /// `|μ(O_K[ζ_3])| = 3n`: 6, except 12 over `Q(i)`.
    pub torsion_order: u32,
    /// An infinite-order generator: together with the torsion it generates
    /// the full unit group.
    pub fundamental: CycloElem,
    /// Hasse unit index `[O_L^× : μ_L · O_{L⁺}^×] ∈ {1, 2}`.
    pub hasse_index: u8,
}

/// Embeds the real quadratic order `O_{Q(√3m)}` into `O_{Q(√−m)}[ζ_3]` via
/// `√(3m) = √−m · √−3` and `√−3 = 2ζ_3 + 1`.
fn embed_real_unit_imaginary(ord: &CycloOrder, eps: &QuadInt) -> CycloElem {
    let base = ord.base();
    let s = base.sqrt_d(); // √−m
    let real_order = eps.order();
    let omega_img = if real_order.omega_is_half() {
        // (1 + √3m)/2 = ω_K + √−m·ζ, valid since 3m ≡ 1 (mod 4) ⟺ −m ≡ 1 (mod 4)
        assert!(base.omega_is_half());
        ord.from_coords(vec![base.omega(), s.clone()])
    } else {
        // √3m itself: √−m + 2√−m·ζ
        ord.from_coords(vec![s.clone(), &s + &s])
    };
    ord.embed_base(&QuadInt::new(&base, eps.a().clone(), 0))
        .add(&omega_img.scale(&QuadInt::new(&base, eps.b().clone(), 0)))
}

fn quartic_order_imaginary(m: u64) -> Result<CycloOrder> {
    let base = QuadOrder::imaginary(m)?;
    CycloOrder::new(base, 3)
}

fn check_3_coprime(m: u64) -> Result<()> {
    if m % 3 == 0 {
        return Err(Error::Unsupported(format!(
            "3 | m = {m}: the quartic order O_K[zeta_3] is not maximal"
        )));
    }
    Ok(())
}

fn fundamental_common(ord: &CycloOrder, eps_embedded: CycloElem) -> Result<UnitGroupData> {
    let torsion = torsion_elements(ord);
    let torsion_order = torsion.len() as u32;
    debug_assert!(eps_embedded.is_unit());
    let mut found: Option<CycloElem> = None;
    for zeta in &torsion {
        let target = zeta.mul(&eps_embedded);
        if let Some(eta) = sqrt_in_quartic_order(&target) {
            found = Some(eta);
            break;
        }
    }
    let (fundamental, hasse_index) = match found {
        Some(eta) => (eta, 2u8),
        None => (eps_embedded, 1u8),
    };
    // fundamentality certificate: no torsion multiple of the generator is a
    // square in the order
    for zeta in &torsion {
        if sqrt_in_quartic_order(&zeta.mul(&fundamental)).is_some() {
            return Err(Error::Inconsistency(
                "returned generator is a torsion multiple of a square".into(),
            ));
        }
    }
    if !fundamental.is_unit() {
        return Err(Error::Inconsistency("generator has |norm| != 1".into()));
    }
    Ok(UnitGroupData {
        torsion_order,
        fundamental,
        hasse_index,
    })
}

/// Fundamental unit and Hasse index of `O_{Q(√−m)}[ζ_3]`, `3 ∤ m` squarefree.
pub fn fundamental_unit_quartic(m: u64) -> Result<UnitGroupData> {
    check_3_coprime(m)?;
    let ord = quartic_order_imaginary(m)?;
    let real = QuadOrder::new(3 * m as i64)?;
    let eps = fundamental_unit_real(&real)?.unit;
    let embedded = embed_real_unit_imaginary(&ord, &eps);
    fundamental_common(&ord, embedded)
}

/// Fundamental unit and Hasse index of `O_{Q(√m)}[ζ_3]` for a real base,
/// `m > 1` squarefree with `3 ∤ m`.
pub fn fundamental_unit_quartic_real(m: u64) -> Result<UnitGroupData> {
    check_3_coprime(m)?;
    let base = QuadOrder::real(m)?;
    let ord = CycloOrder::new(base, 3)?;
    let eps = fundamental_unit_real(&base)?.unit;
    let embedded = ord.embed_base(&eps);
    fundamental_common(&ord, embedded)
}

/// Hasse unit index of `O_{Q(√−m)}[ζ_3]`; consumed by the biquadratic class
/// number relation.
pub fn hasse_unit_index(m: u64) -> Result<u8> {
    Ok(fundamental_unit_quartic(m)?.hasse_index)
}

/// The image of the unit group inside `(O_K/(3))^×`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionImage {
    /// Subgroup elements, sorted canonically.
    pub elements: Vec<ResidueMod3>,
    /// Images of the generators that were fed in (torsion, then fundamental).
    pub generators: Vec<ResidueMod3>,
}

fn subgroup_closure(kind: ResidueKind, gens: &[ResidueMod3]) -> Vec<ResidueMod3> {
    let mut set: Vec<ResidueMod3> = vec![ResidueMod3::one(kind)];
    let mut frontier = set.clone();
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = x.mul(g);
            if !set.contains(&y) {
                set.push(y);
                frontier.push(y);
            }
        }
    }
    set.sort_by_key(|r| r.key());
    set
}

fn image_from_units(ord: &CycloOrder, units: &[CycloElem]) -> Result<ReductionImage> {
    let kind = residue_kind(&ord.base())?;
    let mut generators = Vec::new();
    for u in units {
        match reduce_zeta_to_one(u)? {
            ZetaResidue::Quad(r) => {
                if !r.is_unit() {
                    return Err(Error::Inconsistency(format!(
                        "unit reduced to the non-unit {r}"
                    )));
                }
                generators.push(r);
            }
            ZetaResidue::Prime { .. } => unreachable!("ell = 3 reduction"),
        }
    }
    let elements = subgroup_closure(kind, &generators);
    Ok(ReductionImage {
        elements,
        generators,
    })
}

/// Image of `O_{Q(√−m)}[ζ_3]^×` in `(O_K/(3))^×`.
pub fn reduction_image(m: u64) -> Result<ReductionImage> {
    let ord = quartic_order_imaginary(m)?;
    let data = fundamental_unit_quartic(m)?;
    let mut units = torsion_elements(&ord);
    units.push(data.fundamental.clone());
    image_from_units(&ord, &units)
}

/// Orbits of a unit subgroup acting multiplicatively on all nine residues.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitDecomposition {
    /// Orbits sorted by canonical representative; each orbit sorted too.
    pub orbits: Vec<Vec<ResidueMod3>>,
    pub count: usize,
}

/// Orbit decomposition of `O/(3)` under an explicit subgroup of units.
pub fn orbits_under(kind: ResidueKind, subgroup: &[ResidueMod3]) -> OrbitDecomposition {
    let mut seen: Vec<ResidueMod3> = Vec::new();
    let mut orbits = Vec::new();
    for r in ResidueMod3::all(kind) {
        if seen.contains(&r) {
            continue;
        }
        let mut orbit: Vec<ResidueMod3> = subgroup.iter().map(|h| h.mul(&r)).collect();
        orbit.sort_by_key(|x| x.key());
        orbit.dedup();
        seen.extend(orbit.iter().copied());
        orbits.push(orbit);
    }
    orbits.sort_by_key(|o| o[0].key());
    OrbitDecomposition {
        count: orbits.len(),
        orbits,
    }
}

/// The `O_{-m}[ζ_3]^×`-orbits on `O_{-m}/(3)`.
pub fn orbit_count(m: u64) -> Result<OrbitDecomposition> {
    let image = reduction_image(m)?;
    let kind = residue_kind(&QuadOrder::imaginary(m)?)?;
    Ok(orbits_under(kind, &image.elements))
}

/// One canonical representative per orbit (least in the fixed total order).
pub fn orbit_representatives(m: u64) -> Result<Vec<ResidueMod3>> {
    Ok(orbit_count(m)?.orbits.iter().map(|o| o[0]).collect())
}

/// Canonical representative of the orbit of `r` under the given subgroup.
pub fn orbit_canonical_rep(subgroup: &[ResidueMod3], r: &ResidueMod3) -> ResidueMod3 {
    subgroup
        .iter()
        .map(|h| h.mul(r))
        .min_by_key(|x| x.key())
        .expect("nonempty subgroup")
}

/// Reduction data for a real quadratic base.
#[derive(Debug, Clone)]
pub struct RealCaseReduction {
    /// Image of the base units `O_m^× = ⟨−1, ε⟩` in `(O_m/(3))^×`.
    pub base_image: ReductionImage,
    /// Image of the full quartic unit group `O_m[ζ_3]^×`.
    pub full_image: ReductionImage,
    /// Orbits of the full image on `O_m/(3)`.
    pub orbits: OrbitDecomposition,
}

/// Reduction images and orbit count for the real-base 3-torsion situation.
pub fn real_case_reduction_image(m: u64) -> Result<RealCaseReduction> {
    check_3_coprime(m)?;
    let base = QuadOrder::real(m)?;
    let kind = residue_kind(&base)?;
    let eps = fundamental_unit_real(&base)?.unit;
    let minus_one = -&base.one();
    let base_gens = vec![reduce_mod3(&minus_one)?, reduce_mod3(&eps)?];
    let base_image = ReductionImage {
        elements: subgroup_closure(kind, &base_gens),
        generators: base_gens,
    };
    let data = fundamental_unit_quartic_real(m)?;
    let ord = CycloOrder::new(base, 3)?;
    let mut units = torsion_elements(&ord);
    units.push(data.fundamental.clone());
    let full_image = image_from_units(&ord, &units)?;
    let orbits = orbits_under(kind, &full_image.elements);
    Ok(RealCaseReduction {
        base_image,
        full_image,
        orbits,
    })
}

/// The 5-torsion analogue over `Q(√5)`: image of the unit group in
/// `O/(√5) ≅ F_5` and the orbit count on `F_5`.
///
/// Returns `(image elements, orbit count)`.
pub fn five_torsion_orbits() -> (Vec<u8>, usize) {
    // ω = (1+√5)/2 ↦ 3 under O → O/(√5); the group generated by ±3 in F_5^×
    let gens = [3u8, 4u8];
    let mut set = vec![1u8];
    let mut frontier = set.clone();
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = (x as u32 * g as u32 % 5) as u8;
            if !set.contains(&y) {
                set.push(y);
                frontier.push(y);
            }
        }
    }
    set.sort_unstable();
    let mut orbits = 0usize;
    let mut seen = [false; 5];
    for r in 0..5u8 {
        if seen[r as usize] {
            continue;
        }
        orbits += 1;
        for h in &set {
            seen[(*h as usize * r as usize) % 5] = true;
        }
    }
    (set, orbits)
}
