//! The relative cyclotomic extensions `O_K[ζ_ℓ]` of a quadratic order.
//!
//! For the supported pairs the minimal polynomial `Ψ_ℓ` of `ζ_ℓ` over `K` has
//! degree 2 or 3 and the powers of `ζ` form a relative integral basis, so an
//! element is a vector of [`QuadInt`] coordinates. Multiplication reduces by
//! `Ψ_ℓ`; the Galois group of `K(ζ_ℓ)/K` is generated by [`galois_sigma`],
//! and [`reduce_zeta_to_one`] realizes the quotient
//! `O_K[ζ_ℓ]/(ζ_ℓ−1) ≅ O_K/(ℓ)`.
//!
//! Supported pairs: `(Q(√±m), 3)` with `3 ∤ m`, `(Q(√5), 5)`, and
//! `(Q(√−7), 7)`.

use crate::quadring::{reduce_mod3, QuadInt, QuadOrder, ResidueMod3};
use crate::{Error, Result};
use num_bigint::BigInt;
use std::fmt;

/// The order `O_K[ζ_ℓ] = O_K[T]/(Ψ_ℓ(T))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycloOrder {
    base: QuadOrder,
    ell: u32,
    /// Coefficients `[c_0, …, c_{deg−1}]` of `Ψ_ℓ = T^deg + c_{deg−1} T^{deg−1} + … + c_0`.
    psi: Vec<QuadInt>,
}

impl CycloOrder {
    /// Builds the supported cyclotomic extension orders.
    ///
    /// * `ℓ = 3` over any quadratic `Q(√d)` with `3 ∤ d`: `Ψ_3 = T² + T + 1`.
    /// * `ℓ = 5` over `Q(√5)`: `Ψ_5 = T² − ((√5−1)/2)·T + 1`.
    /// * `ℓ = 7` over `Q(√−7)`: `Ψ_7 = T³ + ((1−√−7)/2)·T² − ((1+√−7)/2)·T − 1`.
    pub fn new(base: QuadOrder, ell: u32) -> Result<Self> {
        match ell {
            3 => {
                if base.d() % 3 == 0 {
                    return Err(Error::Unsupported(format!(
                        "3 | {}: O_K[zeta_3] is not maximal (no relative integral basis)",
                        base.d()
                    )));
                }
                let one = base.one();
                Ok(CycloOrder {
                    base,
                    ell,
                    psi: vec![one.clone(), one],
                })
            }
            5 => {
                if base.d() != 5 {
                    return Err(Error::Unsupported(
                        "zeta_5 has degree 2 only over Q(√5)".into(),
                    ));
                }
                // Ψ5 = T² − (ω−1)T + 1 where ω = (1+√5)/2
                let c1 = base.from_pair(1, -1);
                Ok(CycloOrder {
                    base,
                    ell,
                    psi: vec![base.one(), c1],
                })
            }
            7 => {
                if base.d() != -7 {
                    return Err(Error::Unsupported(
                        "zeta_7 has degree 3 only over Q(√−7)".into(),
                    ));
                }
                // Ψ7 = T³ + (1−ω)T² − ωT − 1 where ω = (1+√−7)/2
                let c2 = base.from_pair(1, -1);
                let c1 = -&base.omega();
                let c0 = -&base.one();
                Ok(CycloOrder {
                    base,
                    ell,
                    psi: vec![c0, c1, c2],
                })
            }
            _ => Err(Error::Unsupported(format!(
                "torsion prime ell = {ell} out of range for GL_3 over quadratic rings"
            ))),
        }
    }

    pub fn base(&self) -> QuadOrder {
        self.base
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    /// `[K(ζ_ℓ) : K]`, 2 or 3.
    pub fn degree(&self) -> usize {
        self.psi.len()
    }

    /// Coefficients of `Ψ_ℓ` below the leading 1.
    pub fn psi_coeffs(&self) -> &[QuadInt] {
        &self.psi
    }

    pub fn zero(&self) -> CycloElem {
        CycloElem {
            coords: vec![self.base.zero(); self.degree()],
            order: self.clone(),
        }
    }

    pub fn one(&self) -> CycloElem {
        let mut e = self.zero();
        e.coords[0] = self.base.one();
        e
    }

    pub fn zeta(&self) -> CycloElem {
        let mut e = self.zero();
        e.coords[1] = self.base.one();
        e
    }

    pub fn embed_base(&self, x: &QuadInt) -> CycloElem {
        assert_eq!(x.order(), self.base, "element from a different base order");
        let mut e = self.zero();
        e.coords[0] = x.clone();
        e
    }

    pub fn from_coords(&self, coords: Vec<QuadInt>) -> CycloElem {
        assert_eq!(coords.len(), self.degree());
        for c in &coords {
            assert_eq!(c.order(), self.base);
        }
        CycloElem {
            coords,
            order: self.clone(),
        }
    }
}

/// An element of `O_K[ζ_ℓ]` on the basis `{1, ζ, …, ζ^{deg−1}}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycloElem {
    coords: Vec<QuadInt>,
    order: CycloOrder,
}

impl fmt::Display for CycloElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coords
            .iter()
            .enumerate()
            .map(|(i, c)| match i {
                0 => format!("({c})"),
                1 => format!("({c})·z"),
                k => format!("({c})·z^{k}"),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl CycloElem {
    pub fn order(&self) -> &CycloOrder {
        &self.order
    }

    pub fn coords(&self) -> &[QuadInt] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, rhs: &CycloElem) -> CycloElem {
        assert_eq!(self.order, rhs.order);
        CycloElem {
            coords: self
                .coords
                .iter()
                .zip(&rhs.coords)
                .map(|(a, b)| a + b)
                .collect(),
            order: self.order.clone(),
        }
    }

    pub fn sub(&self, rhs: &CycloElem) -> CycloElem {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> CycloElem {
        CycloElem {
            coords: self.coords.iter().map(|c| -c).collect(),
            order: self.order.clone(),
        }
    }

    pub fn scale(&self, k: &QuadInt) -> CycloElem {
        CycloElem {
            coords: self.coords.iter().map(|c| c * k).collect(),
            order: self.order.clone(),
        }
    }

    pub fn mul(&self, rhs: &CycloElem) -> CycloElem {
        assert_eq!(self.order, rhs.order);
        let deg = self.order.degree();
        let base = self.order.base;
        // convolution up to degree 2·deg−2
        let mut conv = vec![base.zero(); 2 * deg - 1];
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coords.iter().enumerate() {
                conv[i + j] = &conv[i + j] + &(a * b);
            }
        }
        // reduce top coefficients by ζ^deg = −(c_{deg−1}ζ^{deg−1} + … + c_0)
        for top in (deg..conv.len()).rev() {
            let coeff = std::mem::replace(&mut conv[top], base.zero());
            if coeff.is_zero() {
                continue;
            }
            for (k, c) in self.order.psi.iter().enumerate() {
                let sub = &coeff * c;
                conv[top - deg + k] = &conv[top - deg + k] - &sub;
            }
        }
        conv.truncate(deg);
        CycloElem {
            coords: conv,
            order: self.order.clone(),
        }
    }

    pub fn pow(&self, mut e: u64) -> CycloElem {
        let mut acc = self.order.one();
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b);
            }
            b = b.mul(&b);
            e >>= 1;
        }
        acc
    }

    /// Whether this element is a unit of the order (absolute norm ±1).
    pub fn is_unit(&self) -> bool {
        use num_traits::One;
        self.absolute_norm().magnitude() == BigInt::one().magnitude()
    }

    /// Norm down to `Q`: the base-field norm of the relative norm.
    pub fn absolute_norm(&self) -> BigInt {
        relative_norm(self).norm()
    }
}

/// The generator of `Gal(K(ζ_ℓ)/K)`.
///
/// For degree 2, `σ(ζ) = t − ζ` with `t` the trace coefficient of `Ψ_ℓ`;
/// for the degree-3 case `σ(ζ) = ζ²` (the roots of `Ψ_7` are `ζ, ζ², ζ⁴`).
pub fn galois_sigma(x: &CycloElem) -> CycloElem {
    let ord = x.order().clone();
    match ord.degree() {
        2 => {
            // σ(q0 + q1 ζ) = (q0 + q1 t) − q1 ζ, t = −c1
            let t = -&ord.psi[1];
            let q0 = &x.coords[0] + &(&x.coords[1] * &t);
            let q1 = -&x.coords[1];
            ord.from_coords(vec![q0, q1])
        }
        3 => {
            let z2 = ord.zeta().pow(2);
            let z4 = ord.zeta().pow(4);
            let mut acc = ord.embed_base(&x.coords[0]);
            acc = acc.add(&z2.scale(&x.coords[1]));
            acc = acc.add(&z4.scale(&x.coords[2]));
            acc
        }
        _ => unreachable!(),
    }
}

/// Relative norm `N_{K(ζ)/K}(x) = x · σ(x) (· σ²(x))` as a base element.
pub fn relative_norm(x: &CycloElem) -> QuadInt {
    let mut prod = x.clone();
    let mut conj = x.clone();
    for _ in 1..x.order().degree() {
        conj = galois_sigma(&conj);
        prod = prod.mul(&conj);
    }
    for c in &prod.coords[1..] {
        assert!(c.is_zero(), "relative norm not in the base order");
    }
    prod.coords[0].clone()
}

/// Image of an element under `O_K[ζ_ℓ] → O_K[ζ_ℓ]/(ζ_ℓ − 1) ≅ O_K/(ℓ)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ZetaResidue {
    /// `ℓ = 3`: the rank-2 residue ring `O_K/(3)`.
    Quad(ResidueMod3),
    /// `ℓ = 5, 7`: the prime `(ζ_ℓ − 1)` is ramified with residue field `F_ℓ`.
    Prime { ell: u32, value: u8 },
}

impl fmt::Display for ZetaResidue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ZetaResidue::Quad(r) => write!(f, "{r}"),
            ZetaResidue::Prime { value, .. } => write!(f, "{value}"),
        }
    }
}

fn residue_u8(v: BigInt, ell: i64) -> u8 {
    let r = ((v % ell) + ell) % ell;
    u8::try_from(r).unwrap()
}

/// The ring map sending `ζ ↦ 1` and reducing base coordinates mod `ℓ`.
pub fn reduce_zeta_to_one(x: &CycloElem) -> Result<ZetaResidue> {
    let ord = x.order();
    let mut s = ord.base.zero();
    for c in &x.coords {
        s = &s + c;
    }
    match ord.ell {
        3 => Ok(ZetaResidue::Quad(reduce_mod3(&s)?)),
        5 => {
            // O_{Q(√5)}/(√5) ≅ F_5 with ω = (1+√5)/2 ↦ 3
            let v = s.a() + s.b() * BigInt::from(3);
            Ok(ZetaResidue::Prime {
                ell: 5,
                value: residue_u8(v, 5),
            })
        }
        7 => {
            // O_{Q(√−7)}/(√−7) ≅ F_7 with ω = (1+√−7)/2 ↦ 4
            let v = s.a() + s.b() * BigInt::from(4);
            Ok(ZetaResidue::Prime {
                ell: 7,
                value: residue_u8(v, 7),
            })
        }
        _ => unreachable!(),
    }
}
