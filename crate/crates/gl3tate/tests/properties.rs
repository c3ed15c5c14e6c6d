//! Cross-module property tests: invariance under conjugation with many
//! random conjugators, the structural constraints on orbit counts, and the
//! consistency relations tying units, class numbers and conjugacy counts
//! together.

use gl3tate::classnum::class_number_biquadratic;
use gl3tate::quadring::{is_squarefree, QuadOrder, ResidueKind};
use gl3tate::reiner::{build_matrix_principal, Mat3, ReinerContext};
use gl3tate::units::{hasse_unit_index, orbit_count};
use gl3tate::QuadInt;

/// Invariants are constant on conjugation orbits: 500 random unimodular
/// conjugators applied to one base matrix.
#[test]
fn invariants_constant_over_500_conjugators() {
    let ctx = ReinerContext::new(5).unwrap();
    let order = QuadOrder::new(-5).unwrap();
    let base = build_matrix_principal(&QuadInt::new(&order, 1, 1), &QuadInt::new(&order, 0, -1));
    let expected = ctx.compute_invariants(&base).unwrap();
    let mut state: u64 = 0xC0FFEE;
    let mut next = move || {
        state = state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        ((state >> 41) as i64 % 5) - 2
    };
    for trial in 0..500 {
        // product of two elementary transvections: unimodular with entries of
        // height ≤ 2, and its inverse is the reversed product
        let mut factors = Vec::new();
        for _ in 0..2 {
            let i = (next().rem_euclid(3)) as usize;
            let mut j = (next().rem_euclid(3)) as usize;
            if i == j {
                j = (j + 1) % 3;
            }
            let mut rows = vec![vec![order.zero(); 3]; 3];
            for k in 0..3 {
                rows[k][k] = order.one();
            }
            rows[i][j] = QuadInt::new(&order, next(), next());
            factors.push((i, j, rows));
        }
        let mut p = Mat3::identity(&order);
        let mut pinv = Mat3::identity(&order);
        for (_, _, rows) in &factors {
            let e = Mat3::new(
                &order,
                [
                    [rows[0][0].clone(), rows[0][1].clone(), rows[0][2].clone()],
                    [rows[1][0].clone(), rows[1][1].clone(), rows[1][2].clone()],
                    [rows[2][0].clone(), rows[2][1].clone(), rows[2][2].clone()],
                ],
            );
            p = p.mul(&e);
        }
        for (i, j, rows) in factors.iter().rev() {
            let mut neg = rows.clone();
            neg[*i][*j] = -&neg[*i][*j];
            let e = Mat3::new(
                &order,
                [
                    [neg[0][0].clone(), neg[0][1].clone(), neg[0][2].clone()],
                    [neg[1][0].clone(), neg[1][1].clone(), neg[1][2].clone()],
                    [neg[2][0].clone(), neg[2][1].clone(), neg[2][2].clone()],
                ],
            );
            pinv = pinv.mul(&e);
        }
        assert_eq!(p.mul(&pinv), Mat3::identity(&order), "trial {trial}");
        let conj = p.mul(&base).mul(&pinv);
        assert_eq!(
            ctx.compute_invariants(&conj).unwrap(),
            expected,
            "trial {trial}"
        );
    }
}

/// Orbit counts obey the structural case tables: a split residue ring gives
/// 4 or 5 orbits, the field case gives 2, 3 or 5.
#[test]
fn orbit_counts_obey_case_tables() {
    for m in (1u64..=34).filter(|&m| m % 3 != 0 && is_squarefree(m as i64)) {
        let count = orbit_count(m).unwrap().count;
        let kind = gl3tate::quadring::residue_kind(&QuadOrder::imaginary(m).unwrap()).unwrap();
        match kind {
            ResidueKind::ProductF3xF3 => {
                assert!([4, 5].contains(&count), "m = {m}: {count} orbits")
            }
            ResidueKind::FiniteField9 => {
                assert!([2, 3, 5].contains(&count), "m = {m}: {count} orbits")
            }
        }
    }
}

/// The biquadratic class number is a positive integer for every tested m;
/// a half-integer would mean a wrong unit index.
#[test]
fn biquadratic_class_number_always_integral() {
    for m in (1u64..=34).filter(|&m| m % 3 != 0 && is_squarefree(m as i64)) {
        let h = class_number_biquadratic(m).unwrap();
        assert!(h >= 1, "m = {m}");
    }
}

/// A Hasse index of 2 is exactly the case `u = 1` in the class-number
/// relation (both recomputed independently here from the form counts).
#[test]
fn hasse_index_matches_unit_factor() {
    use gl3tate::classnum::class_number_quadratic;
    for m in [1u64, 2, 5, 10, 13, 14, 17, 22, 26, 29] {
        let q = hasse_unit_index(m).unwrap();
        let h_biq = class_number_biquadratic(m).unwrap();
        let h1 = class_number_quadratic(QuadOrder::imaginary(m).unwrap().discriminant())
            .unwrap()
            .h;
        let h2 = class_number_quadratic(QuadOrder::new(3 * m as i64).unwrap().discriminant())
            .unwrap()
            .h;
        match q {
            2 => assert_eq!(h_biq, h1 * h2, "m = {m}"),
            1 => assert_eq!(2 * h_biq, h1 * h2, "m = {m}"),
            _ => unreachable!(),
        }
    }
}
