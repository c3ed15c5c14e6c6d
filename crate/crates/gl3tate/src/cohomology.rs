//! Farrell–Tate cohomology of the normalizers, assembled per ring.
//!
//! For `A = Z^r × Z/n` with `ℓ | n`, the mod-ℓ cohomology is the monomial
//! algebra `F_ℓ[a_2, a_2⁻¹](b_1, x_1, …, x_r)`: a Laurent generator in degree
//! 2, one exterior degree-1 generator from the torsion, and `r` exterior
//! generators from the free part. Dimension counting, the invariants under a
//! sign action (the Galois flip acts by −1 on `a_2` and `b_1`), and the
//! resulting Hilbert–Poincaré series are all finite monomial enumerations;
//! series are exact integer rational functions with denominator `1 − T^p`.
//!
//! [`assemble_report`] combines the component multiplicities coming from the
//! conjugacy classification with the per-component series into one report.

use crate::quadring::QuadOrder;
use crate::reiner::{
    count_conjugacy_classes, normalizer_descriptor, NormalizerDescriptor, NormalizerSetting,
    OrbitKind,
};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// A monomial model `F_ℓ[a_2^{±1}](b_1, x_1, …, x_r)` with an optional sign
/// action of an involution.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedAlgebraModel {
    /// Whether the degree-1 torsion class `b_1` is present (`ℓ | n`).
    pub torsion_odd: bool,
    /// Number of exterior degree-1 generators from the free part.
    pub exterior_rank: usize,
    pub action: ModelAction,
}

/// Action of the flip on the generators.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum ModelAction {
    /// No quotient: the full algebra.
    Trivial,
    /// An involution acting by the given signs on `a_2`, `b_1`, and each
    /// exterior generator.
    Involution {
        sign_a2: i8,
        sign_b1: i8,
        sign_x: Vec<i8>,
    },
}

impl GradedAlgebraModel {
    /// `Ĥ(Z^r × Z/n)` with no action.
    pub fn full(exterior_rank: usize) -> GradedAlgebraModel {
        GradedAlgebraModel {
            torsion_odd: true,
            exterior_rank,
            action: ModelAction::Trivial,
        }
    }

    /// The inversion involution: −1 on `a_2`, `b_1`, and every exterior
    /// generator (imaginary-base dihedral situation).
    pub fn inversion(exterior_rank: usize) -> GradedAlgebraModel {
        GradedAlgebraModel {
            torsion_odd: true,
            exterior_rank,
            action: ModelAction::Involution {
                sign_a2: -1,
                sign_b1: -1,
                sign_x: vec![-1; exterior_rank],
            },
        }
    }

    /// Flip acting on the torsion only: −1 on `a_2`, `b_1`, trivial on the
    /// exterior generators (real-base situation where the free units are
    /// Galois-fixed).
    pub fn torsion_flip(exterior_rank: usize) -> GradedAlgebraModel {
        GradedAlgebraModel {
            torsion_odd: true,
            exterior_rank,
            action: ModelAction::Involution {
                sign_a2: -1,
                sign_b1: -1,
                sign_x: vec![1; exterior_rank],
            },
        }
    }
}

/// Dimension of the full model in degree `d`: monomials `a_2^k b_1^ε x_S`
/// with `2k + ε + |S| = d`, `k ∈ Z`.
pub fn tate_dimension(model: &GradedAlgebraModel, d: i64) -> u64 {
    let mut count = 0u64;
    let eps_range: &[i64] = if model.torsion_odd { &[0, 1] } else { &[0] };
    for &eps in eps_range {
        for mask in 0u32..(1 << model.exterior_rank) {
            let size = mask.count_ones() as i64;
            if (d - eps - size).rem_euclid(2) == 0 {
                count += 1;
            }
        }
    }
    count
}

/// Dimension of the invariant subalgebra in degree `d`.
pub fn invariant_dimension(model: &GradedAlgebraModel, d: i64) -> u64 {
    let (sa, sb, sx) = match &model.action {
        ModelAction::Trivial => return tate_dimension(model, d),
        ModelAction::Involution {
            sign_a2,
            sign_b1,
            sign_x,
        } => (*sign_a2, *sign_b1, sign_x.clone()),
    };
    let mut count = 0u64;
    let eps_range: &[i64] = if model.torsion_odd { &[0, 1] } else { &[0] };
    for &eps in eps_range {
        for mask in 0u32..(1 << model.exterior_rank) {
            let size = mask.count_ones() as i64;
            let rem = d - eps - size;
            if rem.rem_euclid(2) != 0 {
                continue;
            }
            let k = rem / 2;
            let mut sign = if k.rem_euclid(2) == 1 { sa } else { 1 };
            if eps == 1 {
                sign *= sb;
            }
            for (i, &sxi) in sx.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    sign *= sxi;
                }
            }
            if sign == 1 {
                count += 1;
            }
        }
    }
    count
}

/// Dimension in degree `d` of the 7-torsion invariant algebra
/// `F_7[a_2^{±3}](b_1 a_2², x_1∧y_1)`: free over `F_7[a_2³]` on classes in
/// degrees 0, 2, 5, 7.
pub fn seven_torsion_invariants(d: i64) -> u64 {
    if d < 0 {
        return 0;
    }
    [0i64, 2, 5, 7]
        .iter()
        .filter(|&&f| d >= f && (d - f) % 6 == 0)
        .count() as u64
}

/// A Hilbert–Poincaré series `numerator / (1 − T^period)` with integer
/// coefficients (`numerator[i]` is the coefficient of `T^i`).
///
/// Serialized with the denominator written out as a coefficient vector
/// `[1, 0, …, 0, −1]`, so the wire format carries two integer polynomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalSeries {
    pub numerator: Vec<i64>,
    pub period: usize,
}

#[derive(Serialize, Deserialize)]
struct SeriesWire {
    numerator: Vec<i64>,
    denominator: Vec<i64>,
}

impl Serialize for RationalSeries {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let mut denominator = vec![0i64; self.period + 1];
        denominator[0] = 1;
        denominator[self.period] = -1;
        SeriesWire {
            numerator: self.numerator.clone(),
            denominator,
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for RationalSeries {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let wire = SeriesWire::deserialize(de)?;
        let p = wire.denominator.len().saturating_sub(1);
        let mut expect = vec![0i64; p + 1];
        if p > 0 {
            expect[0] = 1;
            expect[p] = -1;
        }
        if p == 0 || wire.denominator != expect {
            return Err(serde::de::Error::custom(
                "series denominator must have the form 1 - T^p",
            ));
        }
        Ok(RationalSeries {
            numerator: wire.numerator,
            period: p,
        })
    }
}

impl RationalSeries {
    /// Coefficients of the expansion for degrees `0..=upto`.
    pub fn expand(&self, upto: usize) -> Vec<i64> {
        let mut out = vec![0i64; upto + 1];
        for d in 0..=upto {
            let mut c = *self.numerator.get(d).unwrap_or(&0);
            if d >= self.period {
                c += out[d - self.period];
            }
            out[d] = c;
        }
        out
    }
}

impl std::fmt::Display for RationalSeries {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut terms = Vec::new();
        for (i, &c) in self.numerator.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let mono = match i {
                0 => "1".to_string(),
                1 => "T".to_string(),
                _ => format!("T^{i}"),
            };
            if c == 1 && i > 0 {
                terms.push(mono);
            } else if i == 0 {
                terms.push(format!("{c}"));
            } else {
                terms.push(format!("{c}*{mono}"));
            }
        }
        if terms.is_empty() {
            terms.push("0".into());
        }
        write!(f, "({})/(1 - T^{})", terms.join(" + "), self.period)
    }
}

/// Series of the invariant dimensions for positive degrees: the dimension
/// function is periodic, the period is found and verified over four periods.
pub fn series_from_model(model: &GradedAlgebraModel) -> RationalSeries {
    let period = [1usize, 2, 4]
        .into_iter()
        .find(|&p| {
            (0..=(4 * p as i64)).all(|d| {
                invariant_dimension(model, d) == invariant_dimension(model, d + p as i64)
            })
        })
        .expect("the sign action has order dividing 2, so the period divides 4");
    let mut numerator = vec![0i64; period + 1];
    for d in 1..=period {
        numerator[d] = invariant_dimension(model, d as i64) as i64;
    }
    RationalSeries { numerator, period }
}

/// The 7-torsion series `(1 + T²)(1 + T⁵)/(1 − T⁶)`.
pub fn seven_torsion_series() -> RationalSeries {
    // (1 + T²)(1 + T⁵) = 1 + T² + T⁵ + T⁷
    RationalSeries {
        numerator: vec![1, 0, 1, 0, 0, 1, 0, 1],
        period: 6,
    }
}

/// One family of components in a report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentReport {
    pub descriptor: NormalizerDescriptor,
    /// Number of conjugacy classes with this normalizer shape.
    pub multiplicity: u64,
    /// Positive-degree Hilbert–Poincaré series of one component, when the
    /// monomial model applies.
    pub series: Option<RationalSeries>,
    pub note: Option<String>,
}

/// Farrell–Tate cohomology report for one ring and torsion prime.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyReport {
    pub ring_label: String,
    pub ell: u32,
    pub lambda: u64,
    pub mu: u64,
    pub components: Vec<ComponentReport>,
    /// Total dimension per degree over the requested range.
    pub dims: Vec<(i64, u64)>,
    pub notes: Vec<String>,
}

impl CohomologyReport {
    /// Total number of components (sum of multiplicities).
    pub fn total_components(&self) -> u64 {
        self.components.iter().map(|c| c.multiplicity).sum()
    }
}

/// What to report on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ReportTarget {
    /// 3-torsion of `PGL_3(O_{-m})`, imaginary quadratic base.
    Imaginary3 { m: u64 },
    /// 3-torsion of `PGL_3(O_m)`, real quadratic base.
    Real3 { m: u64 },
    /// 5-torsion of `PGL_3(O_{Q(√5)})`.
    Sqrt5Ell5,
    /// 7-torsion of `PGL_3(O_{Q(√−7)})`.
    Sqrt7Ell7,
    /// ℓ-torsion of `PGL_ℓ(Z)`.
    PglZ { ell: u32 },
}

const MU_SERIES_NOTE: &str = "mu-component series from direct monomial enumeration; a \
previously tabulated value for this component type lists twice this series, and the factor-2 \
difference is flagged here rather than resolved";

/// Assembles the cohomology report: component multiplicities from the
/// conjugacy classification, one series per component family, and the total
/// dimension table over `degree_range`.
pub fn assemble_report(target: ReportTarget, degree_range: (i64, i64)) -> Result<CohomologyReport> {
    let (lo, hi) = degree_range;
    if lo > hi {
        return Err(Error::InvalidInput("empty degree range".into()));
    }
    match target {
        ReportTarget::Imaginary3 { m } => {
            let counts = count_conjugacy_classes(m)?;
            let reps = crate::units::orbit_representatives(m)?;
            let lambda_model = GradedAlgebraModel::full(1);
            let mu_model = GradedAlgebraModel::inversion(1);
            let mut components = Vec::new();
            for rep in &reps {
                let kind = OrbitKind::of(rep);
                let setting = NormalizerSetting::Imaginary3 { m, orbit: kind };
                if counts.h_mu > 0 {
                    components.push(ComponentReport {
                        descriptor: normalizer_descriptor(&setting),
                        multiplicity: counts.h_mu,
                        series: Some(series_from_model(&mu_model)),
                        note: Some(MU_SERIES_NOTE.into()),
                    });
                }
                if counts.h_lambda > 0 {
                    // a 2-element Galois orbit of classes: no dihedral overgroup,
                    // the normalizer equals the centralizer
                    let mut desc = normalizer_descriptor(&setting);
                    desc.has_galois_flip = false;
                    components.push(ComponentReport {
                        descriptor: desc,
                        multiplicity: counts.h_lambda,
                        series: Some(series_from_model(&lambda_model)),
                        note: None,
                    });
                }
            }
            let dims = (lo..=hi)
                .map(|d| {
                    let v = counts.mu * invariant_dimension(&mu_model, d)
                        + counts.lambda * tate_dimension(&lambda_model, d);
                    (d, v)
                })
                .collect();
            Ok(CohomologyReport {
                ring_label: format!("O_-{m}"),
                ell: 3,
                lambda: counts.lambda,
                mu: counts.mu,
                components,
                dims,
                notes: vec![MU_SERIES_NOTE.into()],
            })
        }
        ReportTarget::Real3 { m } => {
            if m % 3 == 0 {
                return Err(Error::Unsupported(format!("3 | m = {m}")));
            }
            let base = QuadOrder::real(m)?;
            let h_base = crate::classnum::class_number_quadratic(base.discriminant())?.h;
            if h_base != 1 {
                return Err(Error::Unsupported(format!(
                    "O_{m} is not a principal ideal domain (h = {h_base})"
                )));
            }
            let rc = crate::units::real_case_reduction_image(m)?;
            let c = rc.orbits.count as u64;
            let cyclo = crate::cycloring::CycloOrder::new(base, 3)?;
            let cg = crate::ideals::class_group(&cyclo, crate::ideals::DEFAULT_MINKOWSKI_CAP)?;
            let (h_mu, h_lambda) = crate::ideals::galois_orbit_counts(&cg);
            let lambda = c * h_lambda;
            let mu = c * h_mu;
            let mu_model = GradedAlgebraModel::torsion_flip(2);
            let lambda_model = GradedAlgebraModel::full(2);
            let mut components = Vec::new();
            if mu > 0 {
                components.push(ComponentReport {
                    descriptor: normalizer_descriptor(&NormalizerSetting::Real3),
                    multiplicity: mu,
                    series: Some(series_from_model(&mu_model)),
                    note: None,
                });
            }
            if lambda > 0 {
                let mut desc = normalizer_descriptor(&NormalizerSetting::Real3);
                desc.has_galois_flip = false;
                components.push(ComponentReport {
                    descriptor: desc,
                    multiplicity: lambda,
                    series: Some(series_from_model(&lambda_model)),
                    note: None,
                });
            }
            let dims = (lo..=hi)
                .map(|d| {
                    let v = mu * invariant_dimension(&mu_model, d)
                        + lambda * tate_dimension(&lambda_model, d);
                    (d, v)
                })
                .collect();
            Ok(CohomologyReport {
                ring_label: format!("O_{m}"),
                ell: 3,
                lambda,
                mu,
                components,
                dims,
                notes: Vec::new(),
            })
        }
        ReportTarget::Sqrt5Ell5 => {
            // conjugacy classes = unit orbits on F_5 × the (trivial) class group
            let (_, orbits) = crate::units::five_torsion_orbits();
            let h = crate::classnum::class_number_cyclotomic(5)?;
            let mult = orbits as u64 * h;
            let model = GradedAlgebraModel::torsion_flip(2);
            let series = series_from_model(&model);
            let dims = (lo..=hi)
                .map(|d| (d, mult * invariant_dimension(&model, d)))
                .collect();
            Ok(CohomologyReport {
                ring_label: "O_Q(sqrt5)".into(),
                ell: 5,
                lambda: 0,
                mu: mult,
                components: vec![ComponentReport {
                    descriptor: normalizer_descriptor(&NormalizerSetting::Sqrt5Ell5),
                    multiplicity: mult,
                    series: Some(series),
                    note: None,
                }],
                dims,
                notes: Vec::new(),
            })
        }
        ReportTarget::Sqrt7Ell7 => {
            let h = crate::classnum::class_number_cyclotomic(7)?;
            let dims = (lo..=hi)
                .map(|d| (d, h * seven_torsion_invariants(d)))
                .collect();
            Ok(CohomologyReport {
                ring_label: "O_Q(sqrt-7)".into(),
                ell: 7,
                lambda: 0,
                mu: h,
                components: vec![ComponentReport {
                    descriptor: normalizer_descriptor(&NormalizerSetting::Sqrt7Ell7),
                    multiplicity: h,
                    series: Some(seven_torsion_series()),
                    note: None,
                }],
                dims,
                notes: Vec::new(),
            })
        }
        ReportTarget::PglZ { ell } => {
            let h = crate::classnum::class_number_cyclotomic(ell)?;
            let total = crate::reiner::count_pgl_l_z(ell)?;
            debug_assert_eq!(total, 2 * h);
            let components = vec![
                ComponentReport {
                    descriptor: normalizer_descriptor(&NormalizerSetting::PglZ {
                        ell,
                        constrained: false,
                    }),
                    multiplicity: h,
                    series: None,
                    note: None,
                },
                ComponentReport {
                    descriptor: normalizer_descriptor(&NormalizerSetting::PglZ {
                        ell,
                        constrained: true,
                    }),
                    multiplicity: h,
                    series: None,
                    note: None,
                },
            ];
            Ok(CohomologyReport {
                ring_label: "Z".into(),
                ell,
                lambda: 0,
                mu: total,
                components,
                dims: Vec::new(),
                notes: vec![
                    "per ideal class there is one unconstrained and one fibered normalizer shape"
                        .into(),
                ],
            })
        }
    }
}
