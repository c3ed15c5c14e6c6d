//! Class numbers of quadratic fields, computed from binary quadratic forms,
//! and of the biquadratic fields `Q(√−m, √−3)` via the unit-index relation.
//!
//! Imaginary fields: count reduced positive definite forms `(a, b, c)` with
//! `|b| ≤ a ≤ c` (and `b ≥ 0` on the boundary). Real fields: count cycles of
//! reduced indefinite forms, which gives the narrow class number `h⁺`, then
//! divide by 2 when the fundamental unit has norm `+1`. Both routes are exact
//! integer arithmetic; no L-functions, no floating point.

use crate::quadring::{fundamental_unit_real, QuadOrder};
use crate::{Error, Result};
use num_traits::Signed;

/// How a quadratic class number was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormMethod {
    DefiniteReduction,
    IndefiniteCycles,
}

/// A quadratic class number together with its discriminant and method.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FormClassCount {
    pub discriminant: i64,
    pub h: u64,
    pub method: FormMethod,
}

/// Whether `disc` is a fundamental discriminant.
pub fn is_fundamental_discriminant(disc: i64) -> bool {
    if disc == 0 || disc == 1 {
        return false;
    }
    match disc.rem_euclid(4) {
        1 => crate::quadring::is_squarefree(disc),
        0 => {
            let q = disc / 4;
            crate::quadring::is_squarefree(q) && matches!(q.rem_euclid(4), 2 | 3)
        }
        _ => false,
    }
}

fn isqrt64(n: i64) -> i64 {
    let mut r = (n as f64).sqrt() as i64;
    while r > 0 && r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Class number of the quadratic field of fundamental discriminant `disc`,
/// by reduced-form counting.
pub fn class_number_quadratic(disc: i64) -> Result<FormClassCount> {
    if !is_fundamental_discriminant(disc) {
        return Err(Error::InvalidInput(format!(
            "{disc} is not a fundamental discriminant"
        )));
    }
    if disc < 0 {
        Ok(FormClassCount {
            discriminant: disc,
            h: count_reduced_definite(disc),
            method: FormMethod::DefiniteReduction,
        })
    } else {
        let cycles = count_indefinite_cycles(disc);
        // cycles = h⁺; h = h⁺ / 2 when the fundamental unit has norm +1
        let d = if disc % 4 == 0 { disc / 4 } else { disc };
        let unit = fundamental_unit_real(&QuadOrder::new(d)?)?.unit;
        let h = if unit.norm().is_negative() {
            cycles
        } else {
            debug_assert_eq!(cycles % 2, 0);
            cycles / 2
        };
        Ok(FormClassCount {
            discriminant: disc,
            h,
            method: FormMethod::IndefiniteCycles,
        })
    }
}

/// Number of reduced primitive definite forms `(a, b, c)`, `b² − 4ac = disc < 0`,
/// `|b| ≤ a ≤ c`, with `b ≥ 0` when `|b| = a` or `a = c`.
fn count_reduced_definite(disc: i64) -> u64 {
    let mut count = 0u64;
    let mut a = 1i64;
    while 3 * a * a <= -disc {
        let mut b = -a;
        while b <= a {
            if (b * b - disc) % (4 * a) == 0 {
                let c = (b * b - disc) / (4 * a);
                if c >= a {
                    let boundary = b < 0 && (b == -a || a == c);
                    let primitive = gcd3(a, b.abs(), c) == 1;
                    if !boundary && primitive {
                        count += 1;
                    }
                }
            }
            b += 1;
        }
        a += 1;
    }
    count
}

fn gcd3(a: i64, b: i64, c: i64) -> i64 {
    fn g(x: i64, y: i64) -> i64 {
        if y == 0 {
            x.abs()
        } else {
            g(y, x % y)
        }
    }
    g(g(a, b), c)
}

/// Reduced indefinite form test: `0 < b < √D` and `√D − b < 2|a| < √D + b`.
fn is_reduced_indefinite(a: i64, b: i64, sqrt_floor: i64) -> bool {
    // exact: b < √D ⟺ b ≤ ⌊√D⌋ (D nonsquare); √D − b < 2|a| ⟺ 2|a| ≥ ⌊√D⌋ − b + 1;
    // 2|a| < √D + b ⟺ 2|a| ≤ ⌊√D⌋ + b
    let t = 2 * a.abs();
    b >= 1 && b <= sqrt_floor && t > sqrt_floor - b && t <= sqrt_floor + b
}

/// Number of cycles of reduced indefinite forms = narrow class number `h⁺`.
fn count_indefinite_cycles(disc: i64) -> u64 {
    let s = isqrt64(disc);
    debug_assert!(s * s != disc, "fundamental discriminant is never a square");
    let mut forms = Vec::new();
    for b in 1..=s {
        if (disc - b * b) % 4 != 0 {
            continue;
        }
        let ac = (b * b - disc) / 4; // = −a·c > 0... note a·c = (b²−D)/4 < 0
        // enumerate a with 2|a| in (s−b, s+b], a | (b²−D)/4
        for abs_a in 1..=((s + b) / 2) {
            if !is_reduced_indefinite(abs_a, b, s) {
                continue;
            }
            if ac % abs_a != 0 {
                continue;
            }
            for a in [abs_a, -abs_a] {
                let c = (b * b - disc) / (4 * a);
                debug_assert!(a * c < 0);
                if gcd3(a, b, c) == 1 {
                    forms.push((a, b, c));
                }
            }
        }
    }
    // cycle structure under the reduction step ρ
    let mut seen = vec![false; forms.len()];
    let mut cycles = 0u64;
    for start in 0..forms.len() {
        if seen[start] {
            continue;
        }
        cycles += 1;
        let mut f = forms[start];
        loop {
            let idx = forms.iter().position(|&g| g == f).expect("closed cycle");
            if seen[idx] {
                break;
            }
            seen[idx] = true;
            f = rho(f, disc, s);
        }
    }
    cycles
}

/// The reduction step `ρ(a, b, c) = (c, b', c')` with `b' ≡ −b (mod 2|c|)`
/// chosen in the reduced window `(√D − 2|c|, √D)`.
fn rho(f: (i64, i64, i64), disc: i64, sqrt_floor: i64) -> (i64, i64, i64) {
    let (_, b, c) = f;
    let t = 2 * c.abs();
    // unique b' ≡ −b (mod t) with s + 1 − t ≤ b' ≤ s
    let lo = sqrt_floor + 1 - t;
    let mut bp = -b + t * (((lo + b) as f64 / t as f64).ceil() as i64);
    while bp < lo {
        bp += t;
    }
    while bp > sqrt_floor {
        bp -= t;
    }
    debug_assert!((bp + b) % t == 0 && bp >= lo && bp <= sqrt_floor);
    let cp = (bp * bp - disc) / (4 * c);
    (c, bp, cp)
}

/// Class number of `Q(√−m, √−3)` for positive squarefree `m`, `3 ∤ m`:
/// `u · h(Q(√−m)) · h(Q(√3m))`, where `u = 1` when the Hasse unit index of
/// the quartic order is 2 and `u = 1/2` when it is 1.
pub fn class_number_biquadratic(m: u64) -> Result<u64> {
    if m == 0 || !crate::quadring::is_squarefree(m as i64) {
        return Err(Error::InvalidInput(format!("m = {m} is not squarefree")));
    }
    if m % 3 == 0 {
        return Err(Error::Unsupported(format!("3 | m = {m}")));
    }
    let d_imag = QuadOrder::imaginary(m)?.discriminant();
    let d_real = QuadOrder::new(3 * m as i64)?.discriminant();
    let h1 = class_number_quadratic(d_imag)?.h;
    let h2 = class_number_quadratic(d_real)?.h;
    let q = crate::units::hasse_unit_index(m)?;
    let prod = h1 * h2;
    match q {
        2 => Ok(prod),
        1 => {
            if prod % 2 != 0 {
                return Err(Error::Inconsistency(format!(
                    "m = {m}: unit index 1 with odd product h1*h2 = {prod}"
                )));
            }
            Ok(prod / 2)
        }
        _ => unreachable!(),
    }
}

/// Class numbers `h(Q(ζ_ℓ))` for the primes where degree-3 torsion questions
/// arise; verified values, all 1 in this range (the first prime with
/// nontrivial cyclotomic class group is ℓ = 23).
pub fn class_number_cyclotomic(ell: u32) -> Result<u64> {
    match ell {
        3 | 5 | 7 | 11 | 13 | 17 | 19 => Ok(1),
        _ => Err(Error::Unsupported(format!(
            "no stored cyclotomic class number for ell = {ell}"
        ))),
    }
}
