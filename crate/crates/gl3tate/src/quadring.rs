//! Exact arithmetic in quadratic orders `O_{Q(√d)}`.
//!
//! Elements are written on the basis `{1, ω}` with the usual convention
//!
//! * `ω = √d` when `d ≡ 2, 3 (mod 4)`, discriminant `4d`;
//! * `ω = (1 + √d)/2` when `d ≡ 1 (mod 4)`, discriminant `d`;
//!
//! so coordinates are canonical and all products stay integral. The module
//! also provides the residue ring `O/(3)` (either `F_9` or `F_3 × F_3`) and
//! fundamental units of real quadratic orders by the continued-fraction
//! expansion of `ω`.

use crate::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// A quadratic order `Z[ω] ⊂ Q(√d)` for squarefree `d ∉ {0, 1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuadOrder {
    d: i64,
    half: bool,
    disc: i64,
}

/// Whether `d` is squarefree (and nonzero).
pub fn is_squarefree(d: i64) -> bool {
    let mut n = d.unsigned_abs();
    if n == 0 {
        return false;
    }
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return false;
            }
        }
        p += 1;
    }
    true
}

impl QuadOrder {
    /// The maximal order of `Q(√d)`. Rejects `d ∈ {0, 1}` and non-squarefree `d`.
    pub fn new(d: i64) -> Result<Self> {
        if d == 0 || d == 1 {
            return Err(Error::InvalidInput(format!("degenerate d = {d}")));
        }
        if !is_squarefree(d) {
            return Err(Error::InvalidInput(format!("d = {d} is not squarefree")));
        }
        let half = d.rem_euclid(4) == 1;
        let disc = if half { d } else { 4 * d };
        Ok(QuadOrder { d, half, disc })
    }

    /// The imaginary order `O_{-m}` for positive squarefree `m`.
    pub fn imaginary(m: u64) -> Result<Self> {
        let m = i64::try_from(m).map_err(|_| Error::InvalidInput("m too large".into()))?;
        Self::new(-m)
    }

    /// The real order `O_m` for positive squarefree `m > 1`.
    pub fn real(m: u64) -> Result<Self> {
        let m = i64::try_from(m).map_err(|_| Error::InvalidInput("m too large".into()))?;
        Self::new(m)
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn discriminant(&self) -> i64 {
        self.disc
    }

    /// True when `ω = (1+√d)/2`.
    pub fn omega_is_half(&self) -> bool {
        self.half
    }

    pub fn is_imaginary(&self) -> bool {
        self.d < 0
    }

    /// `ω² = omega_sq_const + omega_sq_omega · ω`.
    pub(crate) fn omega_sq(&self) -> (i64, i64) {
        if self.half {
            ((self.d - 1) / 4, 1)
        } else {
            (self.d, 0)
        }
    }

    pub fn zero(&self) -> QuadInt {
        QuadInt::new(self, 0, 0)
    }

    pub fn one(&self) -> QuadInt {
        QuadInt::new(self, 1, 0)
    }

    pub fn omega(&self) -> QuadInt {
        QuadInt::new(self, 0, 1)
    }

    /// `√d` as an element of the order: `ω` itself, or `2ω − 1` when `ω` is
    /// the half-integer generator.
    pub fn sqrt_d(&self) -> QuadInt {
        if self.half {
            QuadInt::new(self, -1, 2)
        } else {
            self.omega()
        }
    }

    pub fn from_pair(&self, a: impl Into<BigInt>, b: impl Into<BigInt>) -> QuadInt {
        QuadInt {
            a: a.into(),
            b: b.into(),
            order: *self,
        }
    }
}

/// An element `a + b·ω` of a quadratic order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadInt {
    a: BigInt,
    b: BigInt,
    order: QuadOrder,
}

impl QuadInt {
    pub fn new(order: &QuadOrder, a: impl Into<BigInt>, b: impl Into<BigInt>) -> Self {
        QuadInt {
            a: a.into(),
            b: b.into(),
            order: *order,
        }
    }

    pub fn order(&self) -> QuadOrder {
        self.order
    }

    /// Coordinate of 1.
    pub fn a(&self) -> &BigInt {
        &self.a
    }

    /// Coordinate of ω.
    pub fn b(&self) -> &BigInt {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    /// Galois conjugate `a + b·ω̄`.
    pub fn conj(&self) -> QuadInt {
        if self.order.half {
            // ω̄ = 1 − ω
            QuadInt {
                a: &self.a + &self.b,
                b: -self.b.clone(),
                order: self.order,
            }
        } else {
            QuadInt {
                a: self.a.clone(),
                b: -self.b.clone(),
                order: self.order,
            }
        }
    }

    /// Field norm `x · x̄` as a rational integer.
    pub fn norm(&self) -> BigInt {
        let d = BigInt::from(self.order.d);
        if self.order.half {
            // N(a + bω) = a² + ab − b²(d−1)/4
            let q = BigInt::from((self.order.d - 1) / 4);
            &self.a * &self.a + &self.a * &self.b - &self.b * &self.b * q
        } else {
            &self.a * &self.a - &self.b * &self.b * d
        }
    }

    /// Field trace `x + x̄`.
    pub fn trace(&self) -> BigInt {
        if self.order.half {
            &self.a * 2 + &self.b
        } else {
            &self.a * 2
        }
    }

    pub fn is_unit(&self) -> bool {
        self.norm().magnitude() == BigInt::one().magnitude()
    }

    /// `max(|a|, |b|)` in the ω-basis.
    pub fn height(&self) -> BigInt {
        self.a.abs().max(self.b.abs())
    }

    pub fn mul_int(&self, k: &BigInt) -> QuadInt {
        QuadInt {
            a: &self.a * k,
            b: &self.b * k,
            order: self.order,
        }
    }

    fn assert_same_order(&self, other: &QuadInt) {
        assert_eq!(
            self.order, other.order,
            "mixed quadratic orders in arithmetic"
        );
    }
}

impl fmt::Display for QuadInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_negative() {
            write!(f, "{}-{}*w", self.a, self.b.magnitude())
        } else {
            write!(f, "{}+{}*w", self.a, self.b)
        }
    }
}

impl Add for &QuadInt {
    type Output = QuadInt;
    fn add(self, rhs: &QuadInt) -> QuadInt {
        self.assert_same_order(rhs);
        QuadInt {
            a: &self.a + &rhs.a,
            b: &self.b + &rhs.b,
            order: self.order,
        }
    }
}

impl Sub for &QuadInt {
    type Output = QuadInt;
    fn sub(self, rhs: &QuadInt) -> QuadInt {
        self.assert_same_order(rhs);
        QuadInt {
            a: &self.a - &rhs.a,
            b: &self.b - &rhs.b,
            order: self.order,
        }
    }
}

impl Mul for &QuadInt {
    type Output = QuadInt;
    fn mul(self, rhs: &QuadInt) -> QuadInt {
        self.assert_same_order(rhs);
        let (c0, c1) = self.order.omega_sq();
        let bb = &self.b * &rhs.b;
        let cross = &self.a * &rhs.b + &self.b * &rhs.a;
        QuadInt {
            a: &self.a * &rhs.a + &bb * BigInt::from(c0),
            b: cross + bb * BigInt::from(c1),
            order: self.order,
        }
    }
}

impl Neg for &QuadInt {
    type Output = QuadInt;
    fn neg(self) -> QuadInt {
        QuadInt {
            a: -self.a.clone(),
            b: -self.b.clone(),
            order: self.order,
        }
    }
}

impl Add for QuadInt {
    type Output = QuadInt;
    fn add(self, rhs: QuadInt) -> QuadInt {
        &self + &rhs
    }
}
impl Sub for QuadInt {
    type Output = QuadInt;
    fn sub(self, rhs: QuadInt) -> QuadInt {
        &self - &rhs
    }
}
impl Mul for QuadInt {
    type Output = QuadInt;
    fn mul(self, rhs: QuadInt) -> QuadInt {
        &self * &rhs
    }
}
impl Neg for QuadInt {
    type Output = QuadInt;
    fn neg(self) -> QuadInt {
        -&self
    }
}

/// Shape of `O/(3)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
pub enum ResidueKind {
    /// `F_3[X]/(X² − d̄)` with `d̄` a non-square: the field with nine elements,
    /// written on the basis `{1, x̄}` with `x̄² = −1`.
    FiniteField9,
    /// `X² − d̄` splits; components are the evaluations at the two roots,
    /// with `√d ↦ (1, −1)`.
    ProductF3xF3,
}

/// An element of `O/(3)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
pub struct ResidueMod3 {
    pub kind: ResidueKind,
    pub c0: u8,
    pub c1: u8,
}

impl fmt::Display for ResidueMod3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            ResidueKind::ProductF3xF3 => write!(f, "({},{})", self.c0, self.c1),
            ResidueKind::FiniteField9 => write!(f, "{}+{}x", self.c0, self.c1),
        }
    }
}

impl ResidueMod3 {
    pub fn new(kind: ResidueKind, c0: u8, c1: u8) -> Self {
        ResidueMod3 {
            kind,
            c0: c0 % 3,
            c1: c1 % 3,
        }
    }

    pub fn zero(kind: ResidueKind) -> Self {
        Self::new(kind, 0, 0)
    }

    pub fn one(kind: ResidueKind) -> Self {
        match kind {
            ResidueKind::FiniteField9 => Self::new(kind, 1, 0),
            ResidueKind::ProductF3xF3 => Self::new(kind, 1, 1),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.c0 == 0 && self.c1 == 0
    }

    pub fn add(&self, rhs: &ResidueMod3) -> ResidueMod3 {
        assert_eq!(self.kind, rhs.kind);
        Self::new(self.kind, (self.c0 + rhs.c0) % 3, (self.c1 + rhs.c1) % 3)
    }

    pub fn neg(&self) -> ResidueMod3 {
        Self::new(self.kind, (3 - self.c0) % 3, (3 - self.c1) % 3)
    }

    pub fn mul(&self, rhs: &ResidueMod3) -> ResidueMod3 {
        assert_eq!(self.kind, rhs.kind);
        match self.kind {
            ResidueKind::ProductF3xF3 => Self::new(
                self.kind,
                (self.c0 * rhs.c0) % 3,
                (self.c1 * rhs.c1) % 3,
            ),
            ResidueKind::FiniteField9 => {
                // (a + b x)(c + d x) with x² = −1
                let a = self.c0 as i32;
                let b = self.c1 as i32;
                let c = rhs.c0 as i32;
                let d = rhs.c1 as i32;
                let r0 = (a * c - b * d).rem_euclid(3) as u8;
                let r1 = (a * d + b * c).rem_euclid(3) as u8;
                Self::new(self.kind, r0, r1)
            }
        }
    }

    pub fn is_unit(&self) -> bool {
        match self.kind {
            ResidueKind::ProductF3xF3 => self.c0 != 0 && self.c1 != 0,
            ResidueKind::FiniteField9 => !self.is_zero(),
        }
    }

    /// All nine residues, in the canonical order (c0, c1 ascending).
    pub fn all(kind: ResidueKind) -> Vec<ResidueMod3> {
        let mut v = Vec::with_capacity(9);
        for c0 in 0..3 {
            for c1 in 0..3 {
                v.push(ResidueMod3 { kind, c0, c1 });
            }
        }
        v
    }

    /// The unit group of `O/(3)` (order 8 for `F_9`, order 4 for `F_3 × F_3`).
    pub fn units(kind: ResidueKind) -> Vec<ResidueMod3> {
        Self::all(kind).into_iter().filter(|r| r.is_unit()).collect()
    }

    /// Lexicographic key implementing the canonical total order 0 < 1 < 2 on
    /// digits, `(c0, c1)` major.
    pub fn key(&self) -> (u8, u8) {
        (self.c0, self.c1)
    }
}

/// Residue-ring shape of `O/(3)`; requires `gcd(3, disc) = 1`.
pub fn residue_kind(order: &QuadOrder) -> Result<ResidueKind> {
    let d = order.d;
    if d % 3 == 0 {
        return Err(Error::Unsupported(format!(
            "3 divides d = {d}: no residue ring F_3[X]/(X^2 - d) of rank 2, and no \
             relative integral basis for the cyclotomic extension"
        )));
    }
    // X² ≡ d (mod 3) is solvable iff d ≡ 1 (mod 3)
    if d.rem_euclid(3) == 1 {
        Ok(ResidueKind::ProductF3xF3)
    } else {
        Ok(ResidueKind::FiniteField9)
    }
}

/// The ring map `O → O/(3)`. Integers reduce diagonally and `√d` maps to
/// `(1, −1)` in the split case, to `x̄` otherwise.
pub fn reduce_mod3(x: &QuadInt) -> Result<ResidueMod3> {
    let order = x.order();
    let kind = residue_kind(&order)?;
    let a = (x.a().clone() % 3i32 + 3i32).magnitude().clone();
    let b = (x.b().clone() % 3i32 + 3i32).magnitude().clone();
    let a: u8 = (a % 3u32).try_into().unwrap();
    let b: u8 = (b % 3u32).try_into().unwrap();
    // image of √d
    let sd = match kind {
        ResidueKind::ProductF3xF3 => ResidueMod3::new(kind, 1, 2), // (1, −1)
        ResidueKind::FiniteField9 => ResidueMod3::new(kind, 0, 1),
    };
    // image of ω: √d, or 2(1 + √d) since 2 = 2⁻¹ (mod 3)
    let omega = if order.omega_is_half() {
        let one = ResidueMod3::one(kind);
        let two = one.add(&one);
        two.mul(&one.add(&sd))
    } else {
        sd
    };
    let am = match kind {
        ResidueKind::ProductF3xF3 => ResidueMod3::new(kind, a, a),
        ResidueKind::FiniteField9 => ResidueMod3::new(kind, a, 0),
    };
    let bm = match kind {
        ResidueKind::ProductF3xF3 => ResidueMod3::new(kind, b, b),
        ResidueKind::FiniteField9 => ResidueMod3::new(kind, b, 0),
    };
    Ok(am.add(&bm.mul(&omega)))
}

/// A fundamental unit of a real quadratic order, with the continued-fraction
/// period length as a regulator proxy.
#[derive(Debug, Clone)]
pub struct RealFundamentalUnit {
    pub unit: QuadInt,
    /// Period length of the continued fraction of ω.
    pub regulator_proxy: usize,
}

/// Fundamental unit of the maximal real quadratic order, by the continued
/// fraction of ω (not of √d, so the result generates the unit group of the
/// maximal order also when `d ≡ 1 mod 4`).
pub fn fundamental_unit_real(order: &QuadOrder) -> Result<RealFundamentalUnit> {
    if order.is_imaginary() {
        return Err(Error::InvalidInput(format!(
            "fundamental unit asked for imaginary order d = {}",
            order.d()
        )));
    }
    let d = order.d();
    // ω = (p0 + √d)/q0
    let (p0, q0) = if order.omega_is_half() { (1i64, 2i64) } else { (0i64, 1i64) };
    let sqrt_floor = isqrt64(d);
    let mut p = p0;
    let mut q = q0;
    // convergents p_{-1}=1, p_0=a_0, ...
    let mut pm1 = BigInt::one();
    let mut qm1 = BigInt::zero();
    let a0 = (p + sqrt_floor).div_euclid(q);
    let mut pk = BigInt::from(a0);
    let mut qk = BigInt::one();
    // step to (P_1, Q_1)
    p = a0 * q - p;
    q = (d - p * p) / q;
    let first = (p, q);
    let mut period = 0usize;
    loop {
        period += 1;
        let a = (p + sqrt_floor).div_euclid(q);
        let pnext = BigInt::from(a) * &pk + &pm1;
        let qnext = BigInt::from(a) * &qk + &qm1;
        p = a * q - p;
        q = (d - p * p) / q;
        if (p, q) == first {
            break;
        }
        pm1 = std::mem::replace(&mut pk, pnext);
        qm1 = std::mem::replace(&mut qk, qnext);
        if period > 100_000 {
            return Err(Error::ResourceCap(format!(
                "continued fraction of ω for d = {d} did not close within 100000 steps"
            )));
        }
    }
    // unit = p_{k-1} − q_{k-1}·ω̄
    let unit = if order.omega_is_half() {
        QuadInt::new(order, pk - &qk, qk)
    } else {
        QuadInt::new(order, pk, qk)
    };
    debug_assert!(unit.is_unit());
    if !unit.is_unit() {
        return Err(Error::Inconsistency(format!(
            "continued-fraction unit for d = {d} has |norm| != 1"
        )));
    }
    Ok(RealFundamentalUnit {
        unit,
        regulator_proxy: period,
    })
}

fn isqrt64(n: i64) -> i64 {
    let mut r = (n as f64).sqrt() as i64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}
