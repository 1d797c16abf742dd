use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

use reflsos_core::groups::{Coords, FundamentalBasis, ReflectionGroup};
use reflsos_core::harmonics::{coinvariant_hilbert_series, harmonic_basis, jacobian_check};
use reflsos_core::isotypic::{decompose, schur_violations, symmetry_adapted_basis};
use reflsos_core::poly::binomial;
use reflsos_core::sos::{assemble, solve_small, SeparationKind, SolveOptions, SolveOutcome};
use reflsos_core::specht::coinvariant_catalog;
use reflsos_core::dualcone::{verify_family, FamilyCase};
use reflsos_core::{Error, Poly};

use crate::cli::{Cli, Command, GroupArgs};
use crate::error::{CliError, Result};
use crate::parse::parse_poly;
use crate::report::{CaseReport, CatalogJson, DecompositionJson, Envelope, StabilizationJson};
use crate::sdpa::write_sdpa;
use crate::suite;

/// Result of one command: verdict, JSON payload and a text summary.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub ok: bool,
    pub json: Value,
    pub text: String,
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Basis { .. } => "basis",
        Command::Blocks { .. } => "blocks",
        Command::SosCheck { .. } => "sos-check",
        Command::DualCheck { .. } => "dual-check",
        Command::Harmonics { .. } => "harmonics",
        Command::Stabilization { .. } => "stabilization",
        Command::Verify { .. } => "verify-paper",
    }
}

fn group_and_coords(a: &GroupArgs) -> Result<(ReflectionGroup, Coords)> {
    let g: ReflectionGroup = a.group.parse()?;
    let c: Coords = a.coords.parse()?;
    FundamentalBasis::new(&g, c)?;
    Ok((g, c))
}

fn check_budget(g: &ReflectionGroup, d: u32, max_dim: usize) -> Result<()> {
    let n = g.n() as u64;
    let dim = binomial(n + d as u64 - 1, d as u64);
    if dim > max_dim as u128 {
        return Err(Error::Budget {
            what: format!("dim H_{{{},{}}}", n, d),
            limit: max_dim,
            reached: dim.min(usize::MAX as u128) as usize,
        }
        .into());
    }
    Ok(())
}

fn wrap<R: Serialize>(cli: &Cli, ok: bool, result: R, text: String) -> Result<Outcome> {
    let env = Envelope::new(command_name(&cli.command), cli, ok, result);
    Ok(Outcome { ok, json: serde_json::to_value(env)?, text })
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    let gl = &cli.global;
    match &cli.command {
        Command::Basis { group, degree } => {
            let (g, c) = group_and_coords(group)?;
            check_budget(&g, *degree, gl.max_dim)?;
            let cat = coinvariant_catalog(&g, Some(*degree))?;
            let dec = symmetry_adapted_basis(&g, *degree, c)?;
            let dj = DecompositionJson::new(&dec, false);
            let mut text = format!("{} degree {}: {} generators\n", g, degree, cat.entries.len());
            for e in &cat.entries {
                let _ = writeln!(text, "  {} S={} deg {}: {}", e.label.iso.render(g.family()), e.label.s, e.degree, e.poly);
            }
            for b in &dj.blocks {
                let gens: Vec<String> = b.generators.iter().map(|x| format!("{} * ({})", x.invariant, x.specht)).collect();
                let _ = writeln!(text, "  {} x{}: {}", b.isotype, b.multiplicity, gens.join(", "));
            }
            let _ = writeln!(text, "  dimension {} = {}", dj.weighted_dim, dj.ambient_dim);
            #[derive(Serialize)]
            struct R {
                catalog: CatalogJson,
                decomposition: DecompositionJson,
            }
            wrap(cli, true, R { catalog: CatalogJson::new(&cat), decomposition: dj }, text)
        }
        Command::Blocks { group, degree } => {
            let (g, c) = group_and_coords(group)?;
            check_budget(&g, *degree, gl.max_dim)?;
            let dec = decompose(&g, *degree, c)?;
            let viol = schur_violations(&dec).len();
            let dj = DecompositionJson::new(&dec, true);
            let mut text = format!("{} degree {} in {:?}\n", g, degree, dj.symbols);
            for b in &dj.blocks {
                let _ = writeln!(text, "  {}: {:?}", b.isotype, b.matrix);
            }
            let _ = writeln!(text, "  cross-isotype products: {}", viol);
            #[derive(Serialize)]
            struct R {
                decomposition: DecompositionJson,
                schur_violations: usize,
            }
            wrap(cli, viol == 0, R { decomposition: dj, schur_violations: viol }, text)
        }
        Command::SosCheck { group, input, poly, degree, sdpa, certificate } => {
            let (g, c) = group_and_coords(group)?;
            let src = match (input, poly) {
                (Some(p), _) => std::fs::read_to_string(p)?,
                (None, Some(s)) => s.clone(),
                (None, None) => return Err(CliError::Usage(String::from("pass --input FILE or --poly TEXT"))),
            };
            let f = parse_poly(src.trim(), g.n())?;
            let d = match (f.homogeneous_degree(), degree) {
                (_, Some(d)) if f.is_zero() => *d,
                (_, None) if f.is_zero() => {
                    return Err(CliError::Usage(String::from("the zero polynomial needs --degree")))
                }
                (Some(k), _) if k % 2 == 1 => return Err(Error::OddDegree(k).into()),
                (Some(k), _) => k / 2,
                (None, _) => return Err(Error::NotHomogeneous { degree: f.degree().unwrap_or(0) }.into()),
            };
            check_budget(&g, d, gl.max_dim)?;
            let prog = assemble(&g, &f, d, c)?;
            if let Some(p) = sdpa {
                write_sdpa(p, &prog)?;
            }
            let opts = SolveOptions { max_iter: gl.max_iter, max_den: gl.max_den, tol: gl.tol, ..SolveOptions::default() };
            let out = solve_small(&prog, &opts)?;
            sos_outcome(cli, &prog.space.basis, &f, out, *certificate)
        }
        Command::DualCheck { case, grid, samples } => {
            let fc: FamilyCase = case.parse()?;
            let n = match fc {
                FamilyCase::B3Octics => *grid,
                _ => *samples,
            };
            let t = std::time::Instant::now();
            let mut r = CaseReport::from_family(&verify_family(fc, n, gl.seed)?);
            r.elapsed_ms = t.elapsed().as_millis();
            let text = r.render();
            wrap(cli, r.passed, r, text)
        }
        Command::Harmonics { group, coords, cap } => {
            let g: ReflectionGroup = group.parse()?;
            let h = harmonic_basis(&g, *cap)?;
            let hs = coinvariant_hilbert_series(&g);
            let graded: Vec<u128> = h.graded.iter().map(|&x| x as u128).collect();
            let c: Coords = coords.as_deref().unwrap_or("psum").parse()?;
            let basis = FundamentalBasis::new(&g, c)?;
            let jc = jacobian_check(&g, &basis)?;
            let ok = h.dim() as u128 == g.order() && graded == hs;
            #[derive(Serialize)]
            struct R {
                group: String,
                order: u128,
                delta: String,
                dim: usize,
                graded: Vec<usize>,
                hilbert_series: Vec<u128>,
                jacobian_constant: String,
            }
            let text = format!(
                "{}: |G| = {}, harmonic dimension {}, graded {:?}, Hilbert series {:?}, Δ = {}·Jac\n",
                g,
                g.order(),
                h.dim(),
                h.graded,
                hs,
                jc
            );
            let r = R {
                group: g.label(),
                order: g.order(),
                delta: h.delta.to_string(),
                dim: h.dim(),
                graded: h.graded.clone(),
                hilbert_series: hs,
                jacobian_constant: jc.to_string(),
            };
            wrap(cli, ok, r, text)
        }
        Command::Stabilization { family, degree, n } => {
            let fam = suite::parse_family(family)?;
            let ns = suite::parse_range(n)?;
            let (r, sj) = suite::stabilization(fam, *degree, &ns)?;
            let mut text = r.render();
            for row in &sj.rows {
                let _ = writeln!(text, "  n={}: {:?}", row.n, row.multiplicities);
            }
            #[derive(Serialize)]
            struct R {
                report: CaseReport,
                table: StabilizationJson,
            }
            wrap(cli, r.passed, R { report: r, table: sj }, text)
        }
        Command::Verify { case, n, family, degree, grid, samples } => {
            let reports = run_suite(case, n.as_deref(), family.as_deref(), *degree, *grid, *samples, gl.seed)?;
            let ok = reports.iter().all(|r| r.passed);
            let text: String = reports.iter().map(CaseReport::render).collect();
            wrap(cli, ok, reports, text)
        }
    }
}

fn run_suite(
    case: &str,
    n: Option<&str>,
    family: Option<&str>,
    degree: Option<u32>,
    grid: usize,
    samples: usize,
    seed: u64,
) -> Result<Vec<CaseReport>> {
    Ok(match case {
        "b3-octics" => vec![suite::b3_blocks()?, suite::b3_dual(grid)?],
        "d4-quartics" => vec![suite::d4_quartics(samples, if seed == 0 { 1 } else { seed })?],
        "bn-octics" => suite::parse_range(n.unwrap_or("4..6"))?
            .into_iter()
            .map(suite::bn_octics)
            .collect::<Result<_>>()?,
        "limits" => {
            let ns: Vec<u64> = suite::parse_range(n.unwrap_or("10,100,1000"))?.into_iter().map(|x| x as u64).collect();
            vec![suite::limits(&ns)?.0]
        }
        "regular-rep" => vec![suite::regular_representation(10_000)?],
        "dimensions" => vec![suite::dimensions()?],
        "stabilization" => {
            let d = degree.unwrap_or(4);
            match family {
                Some(f) => {
                    let fam = suite::parse_family(f)?;
                    let default = if fam == reflsos_core::groups::Family::D { "9..11" } else { "8..11" };
                    vec![suite::stabilization(fam, d, &suite::parse_range(n.unwrap_or(default))?)?.0]
                }
                None => vec![
                    suite::stabilization(reflsos_core::groups::Family::S, d, &[8, 9, 10, 11])?.0,
                    suite::stabilization(reflsos_core::groups::Family::B, d, &[8, 9, 10, 11])?.0,
                    suite::stabilization(reflsos_core::groups::Family::D, d, &[9, 10, 11])?.0,
                    suite::counterexample()?,
                ],
            }
        }
        "counterexample" => vec![suite::counterexample()?],
        "all" => suite::all_cases()?,
        _ => return Err(CliError::Usage(format!("unknown case '{}'", case))),
    })
}

fn sos_outcome(cli: &Cli, basis: &FundamentalBasis, f: &Poly, out: SolveOutcome, with_cert: bool) -> Result<Outcome> {
    #[derive(Serialize)]
    struct R {
        polynomial: String,
        symbols: Vec<String>,
        status: &'static str,
        residual: Option<f64>,
        min_eigenvalue: Option<f64>,
        #[serde(skip_serializing_if = "Option::is_none")]
        certificate: Option<Vec<Vec<Vec<String>>>>,
        #[serde(skip_serializing_if = "Option::is_none")]
        separation: Option<Sep>,
    }
    #[derive(Serialize)]
    struct Sep {
        kind: &'static str,
        point: Option<Vec<String>>,
        functional: Vec<f64>,
        value_at_target: f64,
    }
    let mut r = R {
        polynomial: f.to_string(),
        symbols: basis.names.clone(),
        status: "",
        residual: None,
        min_eigenvalue: None,
        certificate: None,
        separation: None,
    };
    let text;
    match &out {
        SolveOutcome::Exact(cert) => {
            r.status = "certified-exact";
            r.residual = Some(0.0);
            if with_cert {
                r.certificate = Some(
                    cert.iter()
                        .map(|m| m.iter().map(|row| row.iter().map(|x| x.to_string()).collect()).collect())
                        .collect(),
                );
            }
            text = String::from("invariant sum of squares (exact rational certificate)\n");
        }
        SolveOutcome::Numeric { blocks, residual, min_eig } => {
            r.status = "certified-numeric";
            r.residual = Some(*residual);
            r.min_eigenvalue = Some(*min_eig);
            if with_cert {
                r.certificate = Some(
                    blocks
                        .iter()
                        .map(|m| m.iter().map(|row| row.iter().map(|x| format!("{:e}", x)).collect()).collect())
                        .collect(),
                );
            }
            text = format!("invariant sum of squares (numeric, residual {:e}, least eigenvalue {:e})\n", residual, min_eig);
        }
        SolveOutcome::Infeasible(sep) => {
            r.status = "not-sos";
            let (kind, point) = match &sep.kind {
                SeparationKind::Point(p) => ("point-evaluation", Some(p.iter().map(|x| x.to_string()).collect::<Vec<_>>())),
                SeparationKind::DualExact => ("dual-exact", None),
                SeparationKind::DualNumeric => ("dual-numeric", None),
            };
            text = match &point {
                Some(p) => format!("not a sum of squares: f({}) = {} < 0\n", p.join(", "), sep.value_at_target),
                None => format!("not a sum of squares: separating functional with value {:e}\n", sep.value_at_target),
            };
            r.separation = Some(Sep { kind, point, functional: sep.values.clone(), value_at_target: sep.value_at_target });
        }
        SolveOutcome::Undetermined { residual, min_eig } => {
            r.status = "undetermined";
            r.residual = Some(*residual);
            r.min_eigenvalue = Some(*min_eig);
            text = format!("undetermined (residual {:e}, least eigenvalue {:e})\n", residual, min_eig);
        }
    }
    wrap(cli, out.is_feasible(), r, text)
}
