//! One function per subcommand, each returning an [`Outcome`].

use std::path::Path;

use pdsa_core::liealg::{self, jacobi_check, AlgebraSpec, Representation};
use pdsa_core::moments::{self, closure_check, moment_bracket, truncated_symbols, MomentsError};
use pdsa_core::poisson::{
    self, casimir_check_exact, casimir_check_sampled, find_polynomial_casimirs, independent_count, rank_at, rank_scan,
    standard_loci, subcasimir_check, CasimirCertificate, Locus, NullBasis, Point, PoissonStructure, Residual, Sampler,
};
use pdsa_core::polyring::{default_names, parse_rational, to_f64, Rational};
use pdsa_core::strata::{self, catalog_representation, stratum_classify, HilbertBasis};
use pdsa_core::symbreak::{
    self, analyze_vacuum, catalog_potential, corank_compare, corank_pair, parse_sweep, NewtonConfig, Potential,
    SymbreakError, VacuumReport,
};
use serde_json::{json, Value};

use crate::report::{digest, fmt_f64, num, nums, Outcome, Table};
use crate::{Args, Command, Failure};

pub fn run(args: &Args) -> Result<Outcome, Failure> {
    match args.command {
        Command::CheckJacobi => check_jacobi(args),
        Command::Rank => rank(args),
        Command::Scan => scan(args),
        Command::Casimirs => casimirs(args),
        Command::Verify => verify(args),
        Command::Moments => moments_cmd(args),
        Command::Strata => strata_cmd(args),
        Command::Goldstone => goldstone(args),
        Command::Sweep => sweep(args),
    }
}

fn require<'a, T>(v: &'a Option<T>, flag: &str, command: &str) -> Result<&'a T, Failure> {
    v.as_ref()
        .ok_or_else(|| Failure::Input(format!("{command} needs --{flag}")))
}

fn is_file(source: &str) -> bool {
    Path::new(source).is_file()
}

/// Catalog name or JSON file; files are loaded without the Jacobi check
/// when `validate` is false so that verification can report it.
fn load_algebra(source: &str, validate: bool, out: &mut Outcome) -> Result<AlgebraSpec, Failure> {
    if is_file(source) {
        out.inputs.push(digest(Path::new(source))?);
        Ok(AlgebraSpec::load(Path::new(source), validate)?)
    } else {
        Ok(liealg::catalog(source)?)
    }
}

struct RepSource {
    name: String,
    rep: Representation,
    coords: Vec<String>,
    basis: Option<HilbertBasis>,
}

fn load_rep(source: &str, invariants: &[String], out: &mut Outcome) -> Result<RepSource, Failure> {
    if is_file(source) {
        out.inputs.push(digest(Path::new(source))?);
        let text = std::fs::read_to_string(source)?;
        let rep = Representation::from_json(&text)?;
        let coords = default_names(rep.dim_v);
        let basis = if invariants.is_empty() {
            None
        } else {
            Some(HilbertBasis::parse(invariants, &coords)?)
        };
        Ok(RepSource {
            name: source.to_string(),
            rep,
            coords,
            basis,
        })
    } else {
        let c = catalog_representation(source)?;
        let basis = if invariants.is_empty() {
            c.basis
        } else {
            HilbertBasis::parse(invariants, &c.coords)?
        };
        Ok(RepSource {
            name: c.name,
            rep: c.rep,
            coords: c.coords,
            basis: Some(basis),
        })
    }
}

fn parse_exact_point(text: &str, n: usize) -> Result<Vec<Rational>, Failure> {
    let p: Vec<Rational> = text.split(',').map(parse_rational).collect::<Result<_, _>>()?;
    if p.len() != n {
        return Err(Failure::Input(format!(
            "--point has {} coordinates, expected {n}",
            p.len()
        )));
    }
    Ok(p)
}

fn parse_float_point(text: &str, n: usize) -> Result<Vec<f64>, Failure> {
    Ok(parse_exact_point(text, n)?.iter().map(to_f64).collect())
}

fn rationals(v: &[Rational]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

fn check_jacobi(args: &Args) -> Result<Outcome, Failure> {
    let mut out = Outcome::default();
    let spec = load_algebra(require(&args.algebra, "algebra", "check-jacobi")?, false, &mut out)?;
    let residual = jacobi_check(&spec.structure);
    let tensor = poisson::linear_tensor(&spec.structure, spec.coordinate_names.clone())?;
    let failing = poisson::jacobi_tensor_check(&tensor);
    let pass = residual == Rational::from_integer(0.into()) && failing.is_empty();
    out.lines
        .push(format!("{} residual {residual}", if pass { "PASS" } else { "FAIL" }));
    out.lines.push(format!("tensor components failing: {}", failing.len()));
    let mut table = Table::new(["i", "j", "k", "cyclic sum"]);
    for ((i, j, k), p) in &failing {
        table.push(vec![i.to_string(), j.to_string(), k.to_string(), tensor.format_poly(p)]);
    }
    out.result.insert("algebra".into(), json!(spec.name));
    out.result.insert("dim".into(), json!(spec.dim()));
    out.result.insert("residual".into(), json!(residual.to_string()));
    out.result.insert(
        "tensor_failures".into(),
        Value::Array(table.rows.iter().map(|r| json!(r)).collect()),
    );
    if !failing.is_empty() {
        out.table = Some(table);
    }
    out.failed = !pass;
    Ok(out)
}

fn rank(args: &Args) -> Result<Outcome, Failure> {
    let mut out = Outcome::default();
    let spec = load_algebra(require(&args.algebra, "algebra", "rank")?, true, &mut out)?;
    let j = poisson::from_spec(&spec)?;
    let text = require(&args.point, "point", "rank")?;
    let n = j.dim();
    let point = if text.contains(['.', 'e', 'E']) {
        Point::Float(parse_float_point(text, n)?)
    } else {
        Point::Exact(parse_exact_point(text, n)?)
    };
    let r = rank_at(&j, &point, args.tol)?;
    let mode = if matches!(point, Point::Exact(_)) {
        "exact"
    } else {
        "float"
    };
    out.lines
        .push(format!("rank {} corank {} ({mode})", r.rank, n - r.rank));
    let mut table = Table::new(["null vector"]);
    let basis: Vec<Vec<String>> = match &r.null_basis {
        NullBasis::Exact(b) => b.iter().map(|v| rationals(v)).collect(),
        NullBasis::Float(b) => b.iter().map(|v| v.iter().map(|x| fmt_f64(*x)).collect()).collect(),
    };
    for v in &basis {
        table.push(vec![v.join(",")]);
    }
    out.result.insert("algebra".into(), json!(spec.name));
    out.result.insert("mode".into(), json!(mode));
    out.result.insert("rank".into(), json!(r.rank));
    out.result.insert("corank".into(), json!(n - r.rank));
    out.result.insert("null_basis".into(), json!(basis));
    if let Some(t) = r.tolerance_used {
        out.result.insert("tolerance_used".into(), num(t));
    }
    out.table = Some(table);
    Ok(out)
}

fn scan(args: &Args) -> Result<Outcome, Failure> {
    let mut out = Outcome::default();
    let spec = load_algebra(require(&args.algebra, "algebra", "scan")?, true, &mut out)?;
    let j = poisson::from_spec(&spec)?;
    let sampler = match (args.samples, args.locus.is_empty()) {
        (Some(count), _) => Sampler::RandomPoints { count },
        (None, true) => Sampler::Loci(standard_loci(&spec)?),
        (None, false) => Sampler::Loci(
            args.locus
                .iter()
                .map(|l| {
                    Ok(poisson::ScanLocus {
                        locus: Locus::parse(l, &spec.coordinate_names, l)?,
                        candidates: args.casimir.iter().map(|c| j.parse_poly(c)).collect::<Result<_, _>>()?,
                    })
                })
                .collect::<Result<_, Failure>>()?,
        ),
    };
    let report = rank_scan(&j, &spec.name, &sampler, args.seed, args.tol)?;
    let mut table = Table::new([
        "locus",
        "equations",
        "rank",
        "corank",
        "float_rank",
        "float_agrees",
        "casimirs",
    ]);
    let mut rows = Vec::new();
    for r in &report.rows {
        table.push(vec![
            r.locus.clone(),
            if r.equations.is_empty() {
                "-".into()
            } else {
                r.equations.join(" ")
            },
            r.rank.to_string(),
            r.corank.to_string(),
            r.float_rank.to_string(),
            r.float_agrees.to_string(),
            if r.casimirs.is_empty() {
                "-".into()
            } else {
                r.casimirs.join("; ")
            },
        ]);
        rows.push(json!({
            "locus": r.locus,
            "equations": r.equations,
            "point": r.point,
            "rank": r.rank,
            "corank": r.corank,
            "float_rank": r.float_rank,
            "float_agrees": r.float_agrees,
            "casimirs": r.casimirs,
        }));
    }
    let agree = report.rows.iter().all(|r| r.float_agrees);
    out.lines.push(format!(
        "{}: ranks {}",
        spec.name,
        report
            .rows
            .iter()
            .map(|r| r.rank.to_string())
            .collect::<Vec<_>>()
            .join("/")
    ));
    out.result.insert("algebra".into(), json!(spec.name));
    out.result.insert("rows".into(), Value::Array(rows));
    out.table = Some(table);
    out.failed = !agree;
    if !agree {
        out.lines.push("FAIL float rank disagrees with the exact rank".into());
    }
    Ok(out)
}

fn casimirs(args: &Args) -> Result<Outcome, Failure> {
    let mut out = Outcome::default();
    let spec = load_algebra(require(&args.algebra, "algebra", "casimirs")?, true, &mut out)?;
    let j = poisson::from_spec(&spec)?;
    let degree = args.degree.unwrap_or(2);
    let found = find_polynomial_casimirs(&j, degree);
    let independent = independent_count(&found, args.seed);
    out.lines.push(format!(
        "{} Casimirs up to degree {degree}, {independent} functionally independent",
        found.len()
    ));
    let mut table = Table::new(["degree", "casimir"]);
    for c in &found {
        table.push(vec![c.degree().to_string(), j.format_poly(c)]);
    }
    out.result.insert("algebra".into(), json!(spec.name));
    out.result.insert("max_degree".into(), json!(degree));
    out.result.insert("independent".into(), json!(independent));
    out.result.insert(
        "casimirs".into(),
        json!(found.iter().map(|c| j.format_poly(c)).collect::<Vec<_>>()),
    );
    out.table = Some(table);
    Ok(out)
}

fn residual_text(j: &PoissonStructure, r: &Residual) -> String {
    match r {
        Residual::Exact(v) => {
            let nonzero: Vec<String> = v.iter().filter(|p| !p.is_zero()).map(|p| j.format_poly(p)).collect();
            if nonzero.is_empty() {
                "0".into()
            } else {
                nonzero.join("; ")
            }
        }
        Residual::Float(x) => fmt_f64(*x),
    }
}

fn status_text(c: &CasimirCertificate) -> String {
    serde_json::to_value(c.status)
        .ok()
        .and_then(|v| v.as_str().map(String::from))
        .unwrap_or_default()
}

fn verify(args: &Args) -> Result<Outcome, Failure> {
    let mut out = Outcome::default();
    let spec = load_algebra(require(&args.algebra, "algebra", "verify")?, false, &mut out)?;
    let residual = jacobi_check(&spec.structure);
    out.result.insert("algebra".into(), json!(spec.name));
    out.result.insert("jacobi_residual".into(), json!(residual.to_string()));
    if residual != Rational::from_integer(0.into()) {
        out.lines.push(format!("FAIL jacobi residual {residual}"));
        out.failed = true;
        return Ok(out);
    }
    let j = poisson::from_spec(&spec)?;
    let mut checks: Vec<(Option<Locus>, pdsa_core::polyring::MultiPoly)> = Vec::new();
    if args.casimir.is_empty() {
        for sl in standard_loci(&spec)? {
            for c in sl.candidates {
                checks.push((Some(sl.locus.clone()), c));
            }
        }
    } else {
        let loci: Vec<Locus> = args
            .locus
            .iter()
            .map(|l| Locus::parse(l, &spec.coordinate_names, l))
            .collect::<Result<_, _>>()?;
        for text in &args.casimir {
            let c = j.parse_poly(text)?;
            if loci.is_empty() {
                checks.push((None, c));
            } else {
                for l in &loci {
                    checks.push((Some(l.clone()), c.clone()));
                }
            }
        }
    }
    let mut table = Table::new(["casimir", "locus", "status", "residual"]);
    let mut rows = Vec::new();
    let mut all = true;
    for (locus, c) in &checks {
        let cert = match (locus, args.samples) {
            (Some(l), _) => subcasimir_check(&j, l, c)?,
            (None, Some(count)) => casimir_check_sampled(&j, c, count, args.seed)?,
            (None, None) => casimir_check_exact(&j, c)?,
        };
        all &= cert.certified();
        let lname = locus.as_ref().map_or("generic".to_string(), |l| l.name.clone());
        let res = residual_text(&j, &cert.residual);
        table.push(vec![j.format_poly(c), lname.clone(), status_text(&cert), res.clone()]);
        rows.push(json!({
            "casimir": j.format_poly(c),
            "locus": lname,
            "status": status_text(&cert),
            "residual": res,
        }));
    }
    out.lines.push(format!(
        "{} {} of {} certified",
        if all { "PASS" } else { "FAIL" },
        rows.iter().filter(|r| r["status"] != json!("not_certified")).count(),
        rows.len()
    ));
    out.result.insert("certificates".into(), Value::Array(rows));
    out.table = Some(table);
    out.failed = !all;
    Ok(out)
}

fn moments_cmd(args: &Args) -> Result<Outcome, Failure> {
    let mut out = Outcome::default();
    if let Some(text) = &args.closure {
        let (m, n) = text
            .split_once(',')
            .and_then(|(a, b)| Some((a.trim().parse().ok()?, b.trim().parse().ok()?)))
            .ok_or_else(|| Failure::Input(format!("--closure must look like 3,4, got {text:?}")))?;
        let v = closure_check(m, n)?;
        out.lines.push(format!(
            "closure ({m},{n}): image degree {} rule {} nonzero brackets {}",
            v.image_degree, v.rule_holds, v.nonzero_brackets
        ));
        out.result.insert(
            "closure".into(),
            json!({"m": m, "n": n, "image_degree": v.image_degree, "rule_holds": v.rule_holds,
                   "closes_on_inputs": v.closes_on_inputs, "nonzero_brackets": v.nonzero_brackets}),
        );
        out.failed |= !v.rule_holds;
    }
    let k = match (args.k, &args.closure) {
        (Some(k), _) => k,
        (None, Some(_)) => return Ok(out),
        (None, None) => return Err(Failure::Input("moments needs --k or --closure".into())),
    };
    let (spec, j) = moments::build_truncated_matrix(k)?;
    moments::truncation_closure(k)?;
    let symbols = truncated_symbols(k);
    let mut table = Table::new(["f", "g", "{f,g}"]);
    let mut brackets = Vec::new();
    for (i, &a) in symbols.iter().enumerate() {
        for &b in &symbols[i + 1..] {
            let e = moment_bracket(a, b);
            if e.terms.is_empty() && e.omega.is_empty() {
                continue;
            }
            table.push(vec![a.name(), b.name(), e.to_string()]);
            brackets.push(json!([a.name(), b.name(), e.to_string()]));
        }
    }
    let scan = rank_scan(
        &j,
        &spec.name,
        &Sampler::Loci(standard_loci(&spec)?),
        args.seed,
        args.tol,
    )?;
    let generic = scan.rows.iter().find(|r| r.locus == "generic").map_or(0, |r| r.rank);
    out.lines.push(format!(
        "{}: dimension {} generic rank {generic}",
        spec.name,
        spec.dim()
    ));
    let mut certs = Vec::new();
    match moments::verify_known_casimirs(k) {
        Ok(list) => {
            for (label, cert) in list {
                out.lines.push(format!("PASS {label} {}", status_text(&cert)));
                certs.push(
                    json!({"label": label, "casimir": j.format_poly(&cert.casimir), "status": status_text(&cert)}),
                );
            }
        }
        Err(MomentsError::CasimirRegression { label, .. }) => {
            out.lines.push(format!("FAIL {label} not_certified"));
            out.failed = true;
        }
        Err(e) => return Err(e.into()),
    }
    if let Some(path) = &args.export {
        std::fs::write(path, spec.to_json()).map_err(|e| Failure::Input(format!("writing {}: {e}", path.display())))?;
        out.lines
            .push(format!("exported structure constants to {}", path.display()));
    }
    out.result.insert("algebra".into(), json!(spec.name));
    out.result.insert("coordinates".into(), json!(spec.coordinate_names));
    out.result.insert("generic_rank".into(), json!(generic));
    out.result.insert("brackets".into(), Value::Array(brackets));
    out.result.insert("casimirs".into(), Value::Array(certs));
    out.table = Some(table);
    Ok(out)
}

fn strata_cmd(args: &Args) -> Result<Outcome, Failure> {
    let mut out = Outcome::default();
    let src = load_rep(require(&args.rep, "rep", "strata")?, &args.invariant, &mut out)?;
    let basis = src
        .basis
        .ok_or_else(|| Failure::Input("a representation file needs --invariant for the Hilbert basis".into()))?;
    let phi = parse_exact_point(require(&args.point, "point", "strata")?, src.rep.dim_v)?;
    out.result.insert("representation".into(), json!(src.name));
    if let Err(e) = strata::verify_basis_invariant(&src.rep, &basis).and_then(|_| basis.verify_r_hat()) {
        out.lines.push(format!("FAIL {e}"));
        out.failed = true;
        return Ok(out);
    }
    let r = stratum_classify(&src.rep, &basis, &phi)?;
    out.lines.push(format!(
        "orbit {} N0 {} N1 {} rank R {} {}",
        r.dim_orbit,
        r.dim_n0,
        r.dim_n1,
        r.rank_r,
        if r.principal { "principal" } else { "singular" }
    ));
    if !r.consistent() {
        out.lines.push("FAIL rank R differs from dim N0".into());
        out.failed = true;
    }
    let mut table = Table::new(["invariant", "value"]);
    for (t, v) in basis.thetas.iter().zip(&r.hilbert_image) {
        table.push(vec![t.to_string_with(&src.coords), v.to_string()]);
    }
    out.result.insert("point".into(), json!(rationals(&r.point)));
    out.result.insert("dim_orbit".into(), json!(r.dim_orbit));
    out.result.insert("dim_n0".into(), json!(r.dim_n0));
    out.result.insert("dim_n1".into(), json!(r.dim_n1));
    out.result.insert("rank_r".into(), json!(r.rank_r));
    out.result.insert("principal".into(), json!(r.principal));
    out.result
        .insert("hilbert_image".into(), json!(rationals(&r.hilbert_image)));
    out.table = Some(table);
    Ok(out)
}

struct PotentialSetup {
    potential: Potential,
    rep: Representation,
    start: Vec<f64>,
    algebra: Option<AlgebraSpec>,
}

fn potential_setup(args: &Args, command: &str, out: &mut Outcome) -> Result<PotentialSetup, Failure> {
    let (potential, rep_name, start) = match (&args.potential, &args.algebra) {
        (Some(src), _) if is_file(src) => {
            out.inputs.push(digest(Path::new(src))?);
            let p = Potential::from_json(&std::fs::read_to_string(src)?)?;
            (p, None, None)
        }
        (Some(name), _) => {
            let c = catalog_potential(name)?;
            (c.potential, Some(c.rep_name.to_string()), Some(c.start))
        }
        (None, Some(alg)) => {
            let pair = corank_pair(alg)?;
            let start = match &args.point {
                Some(p) => parse_float_point(p, pair.rep.dim_v)?,
                None => pair.start,
            };
            return Ok(PotentialSetup {
                potential: pair.potential,
                rep: pair.rep,
                start,
                algebra: Some(pair.algebra),
            });
        }
        (None, None) => return Err(Failure::Input(format!("{command} needs --potential or --algebra"))),
    };
    let rep_src = args
        .rep
        .clone()
        .or(rep_name)
        .ok_or_else(|| Failure::Input(format!("{command} needs --rep for a potential file")))?;
    let rep = load_rep(&rep_src, &[], out)?.rep;
    if rep.dim_v != potential.nvars() {
        return Err(Failure::Input(format!(
            "potential has {} coordinates, representation acts on {}",
            potential.nvars(),
            rep.dim_v
        )));
    }
    let start = match (&args.point, start) {
        (Some(p), _) => parse_float_point(p, rep.dim_v)?,
        (None, Some(s)) => s,
        (None, None) => return Err(Failure::Input(format!("{command} needs --point as the Newton start"))),
    };
    let algebra = match &args.algebra {
        Some(a) => Some(load_algebra(a, true, out)?),
        None => None,
    };
    Ok(PotentialSetup {
        potential,
        rep,
        start,
        algebra,
    })
}

fn vacuum_json(r: &VacuumReport) -> Value {
    json!({
        "vacuum": nums(&r.vacuum.point),
        "value": num(r.vacuum.value),
        "gradient_norm": num(r.vacuum.gradient_norm),
        "iterations": r.vacuum.iterations,
        "spectrum": nums(&r.mass.spectrum),
        "zero_modes": r.mass.zero_mode_count(),
        "tangent": r.goldstone.n_tangent,
        "n0": r.goldstone.n_n0,
        "n1": r.goldstone.n_n1,
        "mixed": r.goldstone.n_mixed,
        "dim_orbit": r.goldstone.dim_orbit,
        "tangent_residual": num(r.goldstone.tangent_residual),
    })
}

fn solve_failure(out: &mut Outcome, e: SymbreakError) -> Result<(), Failure> {
    match e {
        SymbreakError::NoConvergence {
            iterations,
            last,
            gradient_norm,
        } => {
            out.lines.push(format!(
                "FAIL Newton did not converge in {iterations} steps, gradient norm {}",
                fmt_f64(gradient_norm)
            ));
            out.result.insert("last_iterate".into(), nums(&last));
            out.failed = true;
            Ok(())
        }
        SymbreakError::NotInvariant(a) => {
            out.lines
                .push(format!("FAIL potential is not invariant under generator {a}"));
            out.failed = true;
            Ok(())
        }
        e => Err(e.into()),
    }
}

fn goldstone(args: &Args) -> Result<Outcome, Failure> {
    let mut out = Outcome::default();
    let setup = potential_setup(args, "goldstone", &mut out)?;
    let config = NewtonConfig::default();
    let r = match analyze_vacuum(&setup.potential, &setup.rep, &setup.start, &config) {
        Ok(r) => r,
        Err(e) => {
            solve_failure(&mut out, e)?;
            return Ok(out);
        }
    };
    out.lines.push(format!(
        "vacuum {}",
        r.vacuum.point.iter().map(|x| fmt_f64(*x)).collect::<Vec<_>>().join(",")
    ));
    out.lines.push(format!(
        "spectrum {}",
        r.mass
            .spectrum
            .iter()
            .map(|x| fmt_f64(*x))
            .collect::<Vec<_>>()
            .join(",")
    ));
    out.lines.push(format!(
        "zero modes {}: tangent {} N0 {} N1 {} mixed {}",
        r.mass.zero_mode_count(),
        r.goldstone.n_tangent,
        r.goldstone.n_n0,
        r.goldstone.n_n1,
        r.goldstone.n_mixed
    ));
    let mut table = Table::new(["mode", "kind", "w_T", "w_N0", "w_N1", "vector"]);
    for (i, m) in r.goldstone.modes.iter().enumerate() {
        let kind = serde_json::to_value(m.kind)?.as_str().unwrap_or_default().to_string();
        table.push(vec![
            i.to_string(),
            kind,
            fmt_f64(m.weights[0]),
            fmt_f64(m.weights[1]),
            fmt_f64(m.weights[2]),
            m.vector.iter().map(|x| fmt_f64(*x)).collect::<Vec<_>>().join(","),
        ]);
    }
    out.result
        .extend(vacuum_json(&r).as_object().cloned().unwrap_or_default());
    if let Some(alg) = &setup.algebra {
        let rec = corank_compare(&setup.rep, alg, &setup.potential, &r.vacuum.point, None)?;
        out.lines.push(format!(
            "corank {}: rank J {} corank {} orbit {} tangent zero modes {}",
            if rec.agrees { "agrees" } else { "disagrees" },
            rec.rank_j,
            rec.corank_j,
            rec.orbit_dim,
            rec.zero_modes_tangent
        ));
        out.result.insert(
            "corank".into(),
            json!({"algebra": alg.name, "rank_j": rec.rank_j, "corank_j": rec.corank_j,
                   "orbit_dim": rec.orbit_dim, "zero_modes": rec.zero_modes,
                   "zero_modes_tangent": rec.zero_modes_tangent, "agrees": rec.agrees}),
        );
    }
    out.table = Some(table);
    Ok(out)
}

fn sweep(args: &Args) -> Result<Outcome, Failure> {
    let mut out = Outcome::default();
    let setup = potential_setup(args, "sweep", &mut out)?;
    let (control, values) = parse_sweep(require(&args.sweep, "sweep", "sweep")?)?;
    let points = match symbreak::sweep(
        &setup.potential,
        &setup.rep,
        &control,
        &values,
        &setup.start,
        &NewtonConfig::default(),
    ) {
        Ok(p) => p,
        Err(e) => {
            solve_failure(&mut out, e)?;
            return Ok(out);
        }
    };
    let mut table = Table::new([
        control.as_str(),
        "norm",
        "min_eig",
        "max_eig",
        "zero",
        "T",
        "N0",
        "N1",
        "mixed",
        "jump",
    ]);
    let mut rows = Vec::new();
    for p in &points {
        let r = &p.report;
        let norm = r.vacuum.point.iter().map(|x| x * x).sum::<f64>().sqrt();
        let g = &r.goldstone;
        table.push(vec![
            p.control.to_string(),
            fmt_f64(norm),
            fmt_f64(r.mass.spectrum[0]),
            fmt_f64(*r.mass.spectrum.last().unwrap_or(&0.0)),
            r.mass.zero_mode_count().to_string(),
            g.n_tangent.to_string(),
            g.n_n0.to_string(),
            g.n_n1.to_string(),
            g.n_mixed.to_string(),
            fmt_f64(p.jump),
        ]);
        let mut row = vacuum_json(r);
        row["control"] = json!(p.control.to_string());
        row["jump"] = num(p.jump);
        rows.push(row);
    }
    let max_jump = points.iter().map(|p| p.jump).fold(0.0, f64::max);
    out.lines.push(format!(
        "sweep {control} over {} values, largest vacuum jump {}",
        points.len(),
        fmt_f64(max_jump)
    ));
    out.result.insert("control".into(), json!(control));
    out.result.insert("points".into(), Value::Array(rows));
    out.table = Some(table);
    Ok(out)
}
