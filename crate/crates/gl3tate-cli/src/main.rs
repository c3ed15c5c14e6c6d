//! Command-line front end: per-ring cohomology reports, the conjugacy-count
//! table, orbit/unit/class-group inspection, and matrix generation and
//! classification in the plain-text exchange format.
//!
//! Exit codes: 0 success, 2 invalid input, 3 unsupported hypothesis (the
//! violated condition is named on stderr), 4 resource cap exceeded.

use clap::{Parser, Subcommand, ValueEnum};
use gl3tate::cohomology::{assemble_report, series_from_model, GradedAlgebraModel, RationalSeries};
use gl3tate::ideals::{class_group_imaginary, galois_orbit_counts, DEFAULT_MINKOWSKI_CAP};
use gl3tate::quadring::QuadOrder;
use gl3tate::reiner::{
    brute_force_conjugate, build_matrix_nonprincipal, build_matrix_principal,
    count_conjugacy_classes, parse_matrices, write_matrices, Mat3, ReinerContext,
    ReinerInvariants,
};
use gl3tate::units::{fundamental_unit_quartic, orbit_count, orbit_representatives, reduction_image};
use gl3tate::{Error, ReportTarget};
use serde::{Deserialize, Serialize};

#[derive(Parser)]
#[command(name = "gl3tate", version, about = "Torsion in GL3/PGL3 over quadratic integer rings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Field {
    /// Q(√5) with ℓ = 5
    Sqrt5,
    /// Q(√−7) with ℓ = 7
    #[value(name = "sqrt-7", alias = "sqrt7")]
    Sqrt7,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Family {
    Principal,
    Nonprincipal,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SeriesModel {
    /// Ĥ(Z × Z/6) with no quotient
    ImaginaryLambda,
    /// flip-invariants of Ĥ(Z × Z/6)
    ImaginaryMu,
    /// Ĥ(Z² × Z/6) with no quotient
    RealLambda,
    /// flip-invariants of Ĥ(Z² × Z/6), trivial action on the free part
    RealMu,
    /// flip-invariants of Ĥ(Z/6) (dihedral)
    Dihedral,
    /// the 7-torsion invariant algebra over Q(√−7)
    SevenTorsion,
}

#[derive(Subcommand)]
enum Command {
    /// Farrell–Tate cohomology report for one ring and torsion prime
    Report {
        /// Squarefree m (imaginary base unless --real)
        #[arg(long)]
        m: Option<u64>,
        /// Use the real quadratic base O_m instead of O_{-m}
        #[arg(long)]
        real: bool,
        /// A named field case (sqrt5, sqrt-7)
        #[arg(long, value_enum)]
        field: Option<Field>,
        /// ℓ-torsion of PGL_ℓ(Z)
        #[arg(long)]
        pglz: bool,
        /// Torsion prime
        #[arg(long, default_value_t = 3)]
        ell: u32,
        /// Degree range lo:hi for the dimension table
        #[arg(long, default_value = "0:12")]
        degrees: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// The (λ, μ) table for the principal imaginary bases
    Table1 {
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Unit-orbit decomposition of `O_{-m}/(3)`
    Orbits {
        #[arg(long)]
        m: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Fundamental unit, Hasse index and reduction image for `O_{-m}[ζ_3]`
    Units {
        #[arg(long)]
        m: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Ideal class group of `O_{-m}[ζ_3]` with Galois action
    Classgroup {
        #[arg(long)]
        m: u64,
        /// Cap on the Minkowski bound
        #[arg(long, default_value_t = DEFAULT_MINKOWSKI_CAP)]
        max_minkowski: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Emit order-3 matrices in the exchange format
    MatrixGen {
        #[arg(long)]
        m: u64,
        #[arg(long, value_enum, default_value_t = Family::Principal)]
        family: Family,
    },
    /// Classify matrices from the exchange format (stdin or --input)
    MatrixClassify {
        /// Input file; defaults to stdin
        #[arg(long)]
        input: Option<String>,
        /// Also search for explicit conjugators
        #[arg(long)]
        oracle: bool,
        /// Height bound for the conjugator search
        #[arg(long, default_value_t = 2)]
        height: u32,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Print a named Hilbert–Poincaré series and its dimension table
    Series {
        #[arg(long, value_enum)]
        model: SeriesModel,
        #[arg(long, default_value = "0:16")]
        degrees: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidInput(_) | Error::Parse(_) => 2,
        Error::Unsupported(_) => 3,
        Error::ResourceCap(_) => 4,
        Error::Inconsistency(_) => 1,
    }
}

fn main() {
    // die quietly on closed pipes (`gl3tate table1 | head`)
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => {}
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(exit_code(&e));
        }
    }
}

fn parse_degrees(s: &str) -> gl3tate::Result<(i64, i64)> {
    let (lo, hi) = s
        .split_once(':')
        .ok_or_else(|| Error::InvalidInput(format!("bad degree range `{s}`, expected lo:hi")))?;
    let lo = lo
        .parse()
        .map_err(|_| Error::InvalidInput(format!("bad degree `{lo}`")))?;
    let hi = hi
        .parse()
        .map_err(|_| Error::InvalidInput(format!("bad degree `{hi}`")))?;
    Ok((lo, hi))
}

fn run(cli: Cli) -> gl3tate::Result<()> {
    match cli.command {
        Command::Report {
            m,
            real,
            field,
            pglz,
            ell,
            degrees,
            format,
        } => {
            let range = parse_degrees(&degrees)?;
            let target = match (m, field, pglz) {
                (Some(m), None, false) => {
                    if real {
                        if ell != 3 {
                            return Err(Error::Unsupported(
                                "real quadratic bases carry 3-torsion reports only (5-torsion \
                                 exists only over Q(√5): use --field sqrt5)"
                                    .into(),
                            ));
                        }
                        ReportTarget::Real3 { m }
                    } else {
                        if ell != 3 {
                            return Err(Error::Unsupported(
                                "imaginary quadratic bases carry 3-torsion reports only \
                                 (7-torsion exists only over Q(√−7): use --field sqrt-7)"
                                    .into(),
                            ));
                        }
                        ReportTarget::Imaginary3 { m }
                    }
                }
                (None, Some(Field::Sqrt5), false) => {
                    if ell != 5 {
                        return Err(Error::InvalidInput("--field sqrt5 requires --ell 5".into()));
                    }
                    ReportTarget::Sqrt5Ell5
                }
                (None, Some(Field::Sqrt7), false) => {
                    if ell != 7 {
                        return Err(Error::InvalidInput(
                            "--field sqrt-7 requires --ell 7".into(),
                        ));
                    }
                    ReportTarget::Sqrt7Ell7
                }
                (None, None, true) => ReportTarget::PglZ { ell },
                _ => {
                    return Err(Error::InvalidInput(
                        "choose exactly one of --m, --field, --pglz".into(),
                    ))
                }
            };
            let report = assemble_report(target, range)?;
            match format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&report).unwrap()),
                Format::Text => print_report(&report),
            }
            Ok(())
        }
        Command::Table1 { format } => table1(format),
        Command::Orbits { m, format } => {
            let dec = orbit_count(m)?;
            let out = OrbitsOut {
                m,
                count: dec.count as u64,
                orbits: dec
                    .orbits
                    .iter()
                    .map(|o| o.iter().map(|r| r.to_string()).collect())
                    .collect(),
                representatives: orbit_representatives(m)?
                    .iter()
                    .map(|r| r.to_string())
                    .collect(),
            };
            match format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&out).unwrap()),
                Format::Text => {
                    println!("m = {m}: {} unit orbits on O/(3)", out.count);
                    for o in &out.orbits {
                        println!("  {{{}}}", o.join(", "));
                    }
                }
            }
            Ok(())
        }
        Command::Units { m, format } => {
            let data = fundamental_unit_quartic(m)?;
            let image = reduction_image(m)?;
            let out = UnitsOut {
                m,
                torsion_order: data.torsion_order,
                hasse_index: data.hasse_index,
                fundamental: data
                    .fundamental
                    .coords()
                    .iter()
                    .map(|q| [q.a().to_string(), q.b().to_string()])
                    .collect(),
                image_order: image.elements.len() as u64,
                image: image.elements.iter().map(|r| r.to_string()).collect(),
            };
            match format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&out).unwrap()),
                Format::Text => {
                    println!("unit group of O_-{m}[zeta_3]: Z x mu_{}", out.torsion_order);
                    println!("fundamental unit (coords on 1, zeta): {}", data.fundamental);
                    println!("hasse index: {}", out.hasse_index);
                    println!(
                        "reduction image in (O/(3))^x: order {} {{{}}}",
                        out.image_order,
                        out.image.join(", ")
                    );
                }
            }
            Ok(())
        }
        Command::Classgroup {
            m,
            max_minkowski,
            format,
        } => {
            let cg = class_group_imaginary(m, max_minkowski)?;
            let (h_mu, h_lambda) = galois_orbit_counts(&cg);
            let out = ClassGroupOut {
                m,
                h: cg.order_h,
                h_mu,
                h_lambda,
                law: cg.law.clone(),
                sigma: cg.sigma_action.clone(),
                reps: cg
                    .reps
                    .iter()
                    .map(|r| {
                        r.basis()
                            .iter()
                            .map(|row| row.iter().map(|x| x.to_string()).collect())
                            .collect()
                    })
                    .collect(),
            };
            match format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&out).unwrap()),
                Format::Text => {
                    println!("Cl(O_-{m}[zeta_3]): order {}", out.h);
                    println!("h_mu = {h_mu} (Galois-fixed), h_lambda = {h_lambda} (2-orbits)");
                    println!("sigma action: {:?}", out.sigma);
                    for (i, rep) in cg.reps.iter().enumerate() {
                        println!("class {i}: norm {}", rep.norm());
                    }
                }
            }
            Ok(())
        }
        Command::MatrixGen { m, family } => {
            let order = QuadOrder::imaginary(m)?;
            let mats: Vec<Mat3> = match family {
                Family::Principal => orbit_representatives(m)?
                    .iter()
                    .map(|rep| {
                        let a = gl3tate::QuadInt::new(&order, rep.c0 as i64, rep.c1 as i64);
                        build_matrix_principal(&a, &order.zero())
                    })
                    .collect(),
                Family::Nonprincipal => {
                    vec![
                        build_matrix_nonprincipal(&order.zero(), &order.zero(), &order.zero())?,
                        build_matrix_nonprincipal(&order.one(), &order.zero(), &order.zero())?,
                    ]
                }
            };
            print!("{}", write_matrices(&order, &mats));
            Ok(())
        }
        Command::MatrixClassify {
            input,
            oracle,
            height,
            format,
        } => {
            let text = match input {
                Some(path) => std::fs::read_to_string(&path)
                    .map_err(|e| Error::InvalidInput(format!("cannot read {path}: {e}")))?,
                None => {
                    use std::io::Read;
                    let mut s = String::new();
                    std::io::stdin()
                        .read_to_string(&mut s)
                        .map_err(|e| Error::InvalidInput(format!("stdin: {e}")))?;
                    s
                }
            };
            let (order, mats) = parse_matrices(&text)?;
            if !order.is_imaginary() {
                return Err(Error::Unsupported(
                    "classification contexts are built for imaginary bases".into(),
                ));
            }
            let m = order.d().unsigned_abs();
            let ctx = ReinerContext::new(m)?;
            let invs: Vec<ReinerInvariants> = mats
                .iter()
                .map(|a| ctx.compute_invariants(a))
                .collect::<gl3tate::Result<_>>()?;
            let mut verdicts = Vec::new();
            for i in 0..mats.len() {
                for j in i + 1..mats.len() {
                    let verdict = if invs[i] == invs[j] {
                        if invs[i].c_orbit.is_some() {
                            "conjugate (equal invariants)"
                        } else {
                            "undecided (equal invariants, no canonical coefficient)"
                        }
                    } else {
                        "distinct (invariants differ)"
                    };
                    let oracle_result = if oracle {
                        match brute_force_conjugate(&mats[i], &mats[j], height) {
                            Some(p) => Some(format!(
                                "conjugator of height <= {height} found: {}",
                                p.to_string().replace('\n', " / ")
                            )),
                            None => Some(format!("no conjugator of height <= {height}")),
                        }
                    } else {
                        None
                    };
                    verdicts.push(VerdictOut {
                        i,
                        j,
                        verdict: verdict.to_string(),
                        oracle: oracle_result,
                    });
                }
            }
            let out = ClassifyOut {
                m,
                invariants: invs,
                verdicts,
            };
            match format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&out).unwrap()),
                Format::Text => {
                    for (k, inv) in out.invariants.iter().enumerate() {
                        let c = inv
                            .c_orbit
                            .map(|r| r.to_string())
                            .unwrap_or_else(|| "-".into());
                        println!(
                            "matrix {k}: (r, s) = ({}, {}), class index {}, coefficient orbit {c}",
                            inv.r, inv.s, inv.det_class
                        );
                    }
                    for v in &out.verdicts {
                        println!("({}, {}): {}", v.i, v.j, v.verdict);
                        if let Some(o) = &v.oracle {
                            println!("    oracle: {o}");
                        }
                    }
                }
            }
            Ok(())
        }
        Command::Series {
            model,
            degrees,
            format,
        } => {
            let (lo, hi) = parse_degrees(&degrees)?;
            let (name, series, dims): (&str, RationalSeries, Vec<(i64, u64)>) = match model {
                SeriesModel::SevenTorsion => {
                    let s = gl3tate::cohomology::seven_torsion_series();
                    let dims = (lo..=hi)
                        .map(|d| (d, gl3tate::cohomology::seven_torsion_invariants(d)))
                        .collect();
                    ("seven-torsion", s, dims)
                }
                other => {
                    let m = match other {
                        SeriesModel::ImaginaryLambda => GradedAlgebraModel::full(1),
                        SeriesModel::ImaginaryMu => GradedAlgebraModel::inversion(1),
                        SeriesModel::RealLambda => GradedAlgebraModel::full(2),
                        SeriesModel::RealMu => GradedAlgebraModel::torsion_flip(2),
                        SeriesModel::Dihedral => GradedAlgebraModel::inversion(0),
                        SeriesModel::SevenTorsion => unreachable!(),
                    };
                    let name = match other {
                        SeriesModel::ImaginaryLambda => "imaginary-lambda",
                        SeriesModel::ImaginaryMu => "imaginary-mu",
                        SeriesModel::RealLambda => "real-lambda",
                        SeriesModel::RealMu => "real-mu",
                        SeriesModel::Dihedral => "dihedral",
                        SeriesModel::SevenTorsion => unreachable!(),
                    };
                    let dims = (lo..=hi)
                        .map(|d| (d, gl3tate::cohomology::invariant_dimension(&m, d)))
                        .collect();
                    (name, series_from_model(&m), dims)
                }
            };
            let out = SeriesOut {
                model: name.to_string(),
                series: series.clone(),
                dims: dims.clone(),
            };
            match format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&out).unwrap()),
                Format::Text => {
                    println!("{name}: positive-degree series {series}");
                    for (d, v) in dims {
                        println!("  dim^{d} = {v}");
                    }
                }
            }
            Ok(())
        }
    }
}

fn print_report(r: &gl3tate::CohomologyReport) {
    println!(
        "ring {} / ell = {}: lambda = {}, mu = {}",
        r.ring_label, r.ell, r.lambda, r.mu
    );
    for c in &r.components {
        let series = c
            .series
            .as_ref()
            .map(|s| s.to_string())
            .unwrap_or_else(|| "-".into());
        println!(
            "  {} component(s): free rank {}, torsion mu_{}{}, galois order {}, series {}",
            c.multiplicity,
            c.descriptor.free_rank,
            c.descriptor.torsion_order,
            if c.descriptor.extra_torsion_order > 0 {
                format!(
                    " x mu_{}^{}",
                    c.descriptor.extra_torsion_order, c.descriptor.extra_torsion_count
                )
            } else {
                String::new()
            },
            c.descriptor.galois_order,
            series
        );
    }
    if !r.dims.is_empty() {
        let row: Vec<String> = r.dims.iter().map(|(d, v)| format!("{d}:{v}")).collect();
        println!("  dims {}", row.join(" "));
    }
    for n in &r.notes {
        println!("  note: {n}");
    }
}

fn table1(format: Format) -> gl3tate::Result<()> {
    let formula_ms = [1u64, 2, 7, 11, 19];
    let excluded_ms = [5u64, 15];
    let mut rows = Vec::new();
    for m in formula_ms {
        let c = count_conjugacy_classes(m)?;
        rows.push(TableRow {
            m,
            lambda: Some(c.lambda),
            mu: Some(c.mu),
            provenance: format!(
                "formula path: c = {}, h_mu = {}, h_lambda = {}",
                c.c, c.h_mu, c.h_lambda
            ),
        });
    }
    for m in excluded_ms {
        let why = if m % 3 == 0 {
            "3 | m"
        } else {
            "base order is not a principal ideal domain"
        };
        rows.push(TableRow {
            m,
            lambda: None,
            mu: None,
            provenance: format!("formula hypotheses violated ({why}); no formula value"),
        });
    }
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&rows).unwrap()),
        Format::Text => {
            println!("m      lambda mu     provenance");
            for r in rows {
                println!(
                    "{:<6} {:<6} {:<6} {}",
                    r.m,
                    r.lambda.map(|v| v.to_string()).unwrap_or("-".into()),
                    r.mu.map(|v| v.to_string()).unwrap_or("-".into()),
                    r.provenance
                );
            }
        }
    }
    Ok(())
}

#[derive(Serialize, Deserialize, PartialEq, Debug)]
struct TableRow {
    m: u64,
    lambda: Option<u64>,
    mu: Option<u64>,
    provenance: String,
}

#[derive(Serialize, Deserialize, PartialEq, Debug)]
struct OrbitsOut {
    m: u64,
    count: u64,
    orbits: Vec<Vec<String>>,
    representatives: Vec<String>,
}

#[derive(Serialize, Deserialize, PartialEq, Debug)]
struct UnitsOut {
    m: u64,
    torsion_order: u32,
    hasse_index: u8,
    fundamental: Vec<[String; 2]>,
    image_order: u64,
    image: Vec<String>,
}

#[derive(Serialize, Deserialize, PartialEq, Debug)]
struct ClassGroupOut {
    m: u64,
    h: u64,
    h_mu: u64,
    h_lambda: u64,
    law: Vec<Vec<usize>>,
    sigma: Vec<usize>,
    reps: Vec<Vec<Vec<String>>>,
}

#[derive(Serialize, Deserialize, PartialEq, Debug)]
struct VerdictOut {
    i: usize,
    j: usize,
    verdict: String,
    oracle: Option<String>,
}

#[derive(Serialize, Deserialize, PartialEq, Debug)]
struct ClassifyOut {
    m: u64,
    invariants: Vec<ReinerInvariants>,
    verdicts: Vec<VerdictOut>,
}

#[derive(Serialize, Deserialize, PartialEq, Debug)]
struct SeriesOut {
    model: String,
    series: RationalSeries,
    dims: Vec<(i64, u64)>,
}
