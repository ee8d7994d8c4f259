//! Acceptance criteria 1-10. Each test writes one PASS/FAIL line to stderr
//! (outside the test harness capture) and then asserts.

use std::io::Write;

use pdsa_core::liealg::{catalog, jacobi_check, Representation};
use pdsa_core::moments::{self, closure_check, moment_bracket, truncation_closure, MomentSymbol};
use pdsa_core::poisson::{
    self, casimir_check_exact, find_polynomial_casimirs, integrate_flow, jacobi_tensor_check, rank_scan, standard_loci,
    subcasimir_check, CertificateStatus, Locus, PoissonStructure, Sampler,
};
use pdsa_core::polyring::{canonical_span, int, newton_convert, rat, MultiPoly, NewtonDirection, Rational};
use pdsa_core::strata::{catalog_representation, normal_decomposition, r_matrix, stratum_classify};
use pdsa_core::symbreak::{
    self, analyze_vacuum, catalog_potential, corank_compare, corank_pair, finite_difference_hessian, mass_matrix,
    parse_sweep, vacuum_solve, NewtonConfig, CORANK_PAIRS, ZERO_TOL,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn report(n: u32, name: &str, result: Result<(), String>) {
    let line = match &result {
        Ok(()) => format!("criterion {n:>2} {name}: PASS"),
        Err(e) => format!("criterion {n:>2} {name}: FAIL {e}"),
    };
    let _ = writeln!(std::io::stderr(), "{line}");
    if let Err(e) = result {
        panic!("criterion {n} failed: {e}");
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn tensor(name: &str) -> PoissonStructure {
    poisson::from_spec(&catalog(name).unwrap()).unwrap()
}

fn poly(j: &PoissonStructure, s: &str) -> MultiPoly {
    j.parse_poly(s).unwrap()
}

fn ints(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| int(x)).collect()
}

const CATALOG: [&str; 8] = [
    "so3",
    "so21",
    "gravity",
    "underwater",
    "moments:k=1",
    "moments:k=2",
    "moments:k=3",
    "moments:k=4",
];

#[test]
fn criterion_01_catalog_validity() {
    let r = (|| {
        for name in CATALOG {
            let spec = catalog(name).map_err(|e| e.to_string())?;
            let res = jacobi_check(&spec.structure);
            ensure(res == int(0), || format!("{name}: structure residual {res}"))?;
            let j = poisson::from_spec(&spec).map_err(|e| e.to_string())?;
            let bad = jacobi_tensor_check(&j);
            ensure(bad.is_empty(), || {
                format!("{name}: {} tensor components nonzero", bad.len())
            })?;
        }
        Ok(())
    })();
    report(1, "catalog validity", r);
}

fn exact_rank(j: &PoissonStructure, x: &[Rational]) -> usize {
    j.eval_exact(x).rank()
}

fn subcasimir(j: &PoissonStructure, names: &[String], locus: &str, c: &str) -> Result<(), String> {
    let l = Locus::parse(locus, names, locus).map_err(|e| e.to_string())?;
    let cert = subcasimir_check(j, &l, &poly(j, c)).map_err(|e| e.to_string())?;
    ensure(cert.status == CertificateStatus::RestrictedToLocus, || {
        format!("{c} on {locus}: {:?}", cert.status)
    })
}

#[test]
fn criterion_02_rank_tables() {
    let r = (|| {
        // hand-picked rational points on each locus, ranked by exact elimination
        let so3 = tensor("so3");
        ensure(exact_rank(&so3, &ints(&[1, 2, 3])) == 2, || "so3 generic".into())?;
        ensure(exact_rank(&so3, &ints(&[0, 0, 0])) == 0, || "so3 origin".into())?;
        let grav = tensor("gravity");
        ensure(exact_rank(&grav, &ints(&[1, -2, 3, 2, 1, -1])) == 4, || {
            "gravity generic".into()
        })?;
        ensure(exact_rank(&grav, &ints(&[1, -2, 3, 0, 0, 0])) == 2, || {
            "gravity z=0".into()
        })?;
        let uw = tensor("underwater");
        let generic = ints(&[1, -2, 3, 2, 1, -1, 3, -1, 2]);
        let parallel = ints(&[1, -2, 3, 2, 1, -1, 6, 3, -3]);
        let zb0 = ints(&[1, -2, 3, 0, 0, 0, 0, 0, 0]);
        ensure(exact_rank(&uw, &generic) == 6, || "underwater generic".into())?;
        ensure(exact_rank(&uw, &parallel) == 4, || "underwater b=3z".into())?;
        ensure(exact_rank(&uw, &zb0) == 2, || "underwater z=b=0".into())?;
        ensure(exact_rank(&uw, &ints(&[0; 9])) == 0, || "underwater origin".into())?;

        // the scan reports the same ranks, with the float path agreeing at 1e-9
        for (name, expected) in [
            ("so3", vec![("generic", 2), ("origin", 0)]),
            ("gravity", vec![("generic", 4), ("z=0", 2), ("origin", 0)]),
            (
                "underwater",
                vec![("generic", 6), ("b=lambda*z", 4), ("z=b=0", 2), ("origin", 0)],
            ),
        ] {
            let spec = catalog(name).unwrap();
            let j = poisson::from_spec(&spec).unwrap();
            let loci = standard_loci(&spec).map_err(|e| e.to_string())?;
            let scan = rank_scan(&j, name, &Sampler::Loci(loci), 42, 1e-9).map_err(|e| e.to_string())?;
            for (locus, rank) in expected {
                let row = scan
                    .rows
                    .iter()
                    .find(|r| r.locus == locus)
                    .ok_or_else(|| format!("{name}: no {locus} row"))?;
                ensure(row.rank == rank, || {
                    format!("{name} {locus}: rank {} != {rank}", row.rank)
                })?;
                ensure(row.float_agrees, || {
                    format!("{name} {locus}: float rank {}", row.float_rank)
                })?;
            }
        }

        let gn = catalog("gravity").unwrap().coordinate_names;
        subcasimir(&grav, &gn, "z=0", "mu1^2 + mu2^2 + mu3^2")?;
        let un = catalog("underwater").unwrap().coordinate_names;
        subcasimir(&uw, &un, "b=lambda*z", "mu1*z1 + mu2*z2 + mu3*z3")?;
        subcasimir(&uw, &un, "b=lambda*z", "mu1*b1 + mu2*b2 + mu3*b3")?;
        subcasimir(&uw, &un, "z=0, b=0", "mu1^2 + mu2^2 + mu3^2")?;
        // not a Casimir on the generic stratum
        let cert = casimir_check_exact(&uw, &poly(&uw, "mu1*z1 + mu2*z2 + mu3*z3")).unwrap();
        ensure(!cert.certified(), || "mu.z certified generically".into())
    })();
    report(2, "rank tables", r);
}

#[test]
fn criterion_03_casimir_regression() {
    let r = (|| {
        let cases: Vec<(&str, Vec<String>)> = vec![
            ("so3", vec!["1/2*(mu1^2 + mu2^2 + mu3^2)".into()]),
            ("so21", vec!["a1^2 + a2^2 - a3^2".into()]),
            (
                "gravity",
                vec!["mu1*z1 + mu2*z2 + mu3*z3".into(), "z1^2 + z2^2 + z3^2".into()],
            ),
            (
                "underwater",
                vec![
                    "b1*z1 + b2*z2 + b3*z3".into(),
                    "z1^2 + z2^2 + z3^2".into(),
                    "b1^2 + b2^2 + b3^2".into(),
                ],
            ),
            (
                "moments:k=2",
                vec!["b11^2 - b20*b02".into(), "a1*b02 - a2*b11 + a3*b20".into()],
            ),
            (
                "moments:k=3",
                vec!["4*b12^3*b30 + 4*b21^3*b03 - 6*b03*b12*b21*b30 + b03^2*b30^2 - 3*b12^2*b21^2".into()],
            ),
            (
                "moments:k=4",
                vec![
                    "b04*b40 - 4*b13*b31 + 3*b22^2".into(),
                    "-b22^3 + 2*b13*b22*b31 - b04*b31^2 - b13^2*b40 + b04*b22*b40".into(),
                ],
            ),
        ];
        for (name, list) in cases {
            let j = tensor(name);
            for c in list {
                let cert = casimir_check_exact(&j, &poly(&j, &c)).map_err(|e| e.to_string())?;
                ensure(cert.status == CertificateStatus::ExactIdentity, || {
                    format!("{name}: {c}")
                })?;
            }
        }
        Ok(())
    })();
    report(3, "Casimir regression", r);
}

/// All products of `gens` with total degree at most `max_degree`.
fn products(gens: &[MultiPoly], max_degree: i64) -> Vec<MultiPoly> {
    let mut out: Vec<MultiPoly> = Vec::new();
    let mut frontier: Vec<MultiPoly> = gens.to_vec();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for p in frontier {
            if p.degree() > max_degree || out.contains(&p) {
                continue;
            }
            for g in gens {
                next.push(&p * g);
            }
            out.push(p);
        }
        frontier = next;
    }
    out
}

#[test]
fn criterion_04_casimir_discovery() {
    let r = (|| {
        let cases: Vec<(&str, u32, Vec<&str>)> = vec![
            ("so3", 4, vec!["mu1^2 + mu2^2 + mu3^2"]),
            ("so21", 4, vec!["a1^2 + a2^2 - a3^2"]),
            ("gravity", 2, vec!["mu1*z1 + mu2*z2 + mu3*z3", "z1^2 + z2^2 + z3^2"]),
            (
                "underwater",
                2,
                vec!["b1*z1 + b2*z2 + b3*z3", "z1^2 + z2^2 + z3^2", "b1^2 + b2^2 + b3^2"],
            ),
            ("moments:k=2", 3, vec!["b11^2 - b20*b02", "a1*b02 - a2*b11 + a3*b20"]),
            (
                "moments:k=3",
                4,
                vec!["4*b12^3*b30 + 4*b21^3*b03 - 6*b03*b12*b21*b30 + b03^2*b30^2 - 3*b12^2*b21^2"],
            ),
            (
                "moments:k=4",
                4,
                vec![
                    "b04*b40 - 4*b13*b31 + 3*b22^2",
                    "-b22^3 + 2*b13*b22*b31 - b04*b31^2 - b13^2*b40 + b04*b22*b40",
                ],
            ),
        ];
        for (name, degree, gens) in cases {
            let j = tensor(name);
            let gens: Vec<MultiPoly> = gens.iter().map(|s| poly(&j, s)).collect();
            let expected = canonical_span(&products(&gens, degree as i64));
            let found = find_polynomial_casimirs(&j, degree);
            ensure(found == expected, || {
                format!(
                    "{name} to degree {degree}: found {} basis elements, expected {}",
                    found.len(),
                    expected.len()
                )
            })?;
        }
        // the k=1 truncation has exactly one Casimir up to degree 3, recorded
        // after its first computation
        let j5 = tensor("moments:k=1");
        let fixture = poly(&j5, "a1*b01^2 - a2*b10*b01 + a3*b10^2");
        let found = find_polynomial_casimirs(&j5, 3);
        ensure(found == vec![fixture.monic()], || {
            format!("J5: {} Casimirs", found.len())
        })
    })();
    report(4, "Casimir discovery", r);
}

#[test]
fn criterion_05_moment_brackets() {
    let r = (|| {
        let a = [MomentSymbol::A(1), MomentSymbol::A(2), MomentSymbol::A(3)];
        // {a1,a2} = 2a1, {a2,a3} = 2a3, {a3,a1} = -a2, with antisymmetry
        let mut table = vec![vec![vec![int(0); 3]; 3]; 3];
        let mut set = |i: usize, j: usize, k: usize, v: i64| {
            table[i][j][k] = int(v);
            table[j][i][k] = int(-v);
        };
        set(0, 1, 0, 2);
        set(1, 2, 2, 2);
        set(2, 0, 1, -1);
        for i in 0..3 {
            for j in 0..3 {
                let e = moment_bracket(a[i], a[j]);
                ensure(e.omega.is_empty(), || {
                    format!("{{a{},a{}}} leaves the a-span", i + 1, j + 1)
                })?;
                for k in 0..3 {
                    let got = e.terms.get(&a[k]).cloned().unwrap_or_else(|| int(0));
                    ensure(got == table[i][j][k], || {
                        format!("{{a{},a{}}} coefficient of a{}: {got}", i + 1, j + 1, k + 1)
                    })?;
                }
                ensure(e.terms.keys().all(|s| a.contains(s)), || "a-bracket has b terms".into())?;
            }
        }
        for m in 1..=6 {
            for n in 1..=6 {
                let v = closure_check(m, n).map_err(|e| e.to_string())?;
                ensure(v.rule_holds, || format!("degree rule fails for ({m},{n})"))?;
            }
        }
        for k in 1..=4 {
            truncation_closure(k).map_err(|e| e.to_string())?;
        }
        Ok(())
    })();
    report(5, "moment bracket table", r);
}

/// Coefficients of prod (x - r_i) as elementary symmetric functions.
fn elementary(roots: &[Rational]) -> Vec<Rational> {
    let mut e = vec![int(1)];
    for r in roots {
        let mut next = vec![int(0); e.len() + 1];
        for (k, c) in e.iter().enumerate() {
            next[k] += c;
            next[k + 1] += c * r;
        }
        e = next;
    }
    e[1..].to_vec()
}

#[test]
fn criterion_06_newton_identities() {
    let r = (|| {
        let s =
            newton_convert(&ints(&[6, 11, 6]), NewtonDirection::ElementaryToPowerSums, 3).map_err(|e| e.to_string())?;
        ensure(s == ints(&[6, 14, 36]), || format!("(1,2,3) gives {s:?}"))?;
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for trial in 0..100 {
            let n = 1 + trial % 6;
            let roots: Vec<Rational> = (0..n)
                .map(|_| rat(rng.gen_range(-12..=12), rng.gen_range(1..=5)))
                .collect();
            let e = elementary(&roots);
            let power: Vec<Rational> = (1..=n)
                .map(|k| roots.iter().fold(int(0), |acc, r| acc + num_pow(r, k)))
                .collect();
            let s = newton_convert(&e, NewtonDirection::ElementaryToPowerSums, n).map_err(|e| e.to_string())?;
            ensure(s == power, || format!("trial {trial}: power sums differ"))?;
            let back = newton_convert(&s, NewtonDirection::PowerSumsToElementary, n).map_err(|e| e.to_string())?;
            ensure(back == e, || format!("trial {trial}: roundtrip differs"))?;
        }
        Ok(())
    })();
    report(6, "Newton identities", r);
}

fn num_pow(r: &Rational, k: usize) -> Rational {
    (0..k).fold(int(1), |acc, _| acc * r)
}

#[test]
fn criterion_07_strata() {
    let r = (|| {
        let c = catalog_representation("so3-vector").map_err(|e| e.to_string())?;
        let g = stratum_classify(&c.rep, &c.basis, &ints(&[1, -2, 2])).map_err(|e| e.to_string())?;
        ensure((g.dim_orbit, g.dim_n0, g.dim_n1) == (2, 1, 0), || {
            format!("generic {g:?}")
        })?;
        let o = stratum_classify(&c.rep, &c.basis, &ints(&[0, 0, 0])).map_err(|e| e.to_string())?;
        ensure((o.dim_orbit, o.dim_n0, o.dim_n1) == (0, 0, 3), || {
            format!("origin {o:?}")
        })?;

        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let reps = ["so3-vector", "so2-plane", "so4-adjoint"];
        for trial in 0..200 {
            let c = catalog_representation(reps[trial % reps.len()]).unwrap();
            let n = c.rep.dim_v;
            // a third of the points get zeroed coordinates so that singular
            // strata are sampled too
            let phi: Vec<Rational> = (0..n)
                .map(|_| {
                    if rng.gen_range(0..3) == 0 {
                        int(0)
                    } else {
                        rat(rng.gen_range(-9..=9), rng.gen_range(1..=4))
                    }
                })
                .collect();
            let iso = pdsa_core::strata::isotropy_generators(&c.rep, &phi).map_err(|e| e.to_string())?;
            let dec = normal_decomposition(&c.rep, &iso, &phi).map_err(|e| e.to_string())?;
            let (_, rank) = r_matrix(&c.basis, &phi);
            ensure(rank == dec.n0.len(), || {
                format!("{}: rank R {rank} != dim N0 {} at {phi:?}", c.name, dec.n0.len())
            })?;
            let rep = stratum_classify(&c.rep, &c.basis, &phi).map_err(|e| e.to_string())?;
            ensure(rep.principal == (rep.dim_n1 == 0), || {
                format!("{}: principal flag at {phi:?}", c.name)
            })?;
        }
        Ok(())
    })();
    report(7, "strata", r);
}

#[test]
fn criterion_08_symmetry_breaking() {
    let r = (|| {
        let c = catalog_potential("sombrero").map_err(|e| e.to_string())?;
        let rep = catalog_representation(c.rep_name).unwrap().rep;
        let v = analyze_vacuum(&c.potential, &rep, &c.start, &NewtonConfig::default()).map_err(|e| e.to_string())?;
        let phi = &v.vacuum.point;
        let norm2: f64 = phi.iter().map(|x| x * x).sum();
        // on |φ| = 1 the Hessian of (|φ|² - 1)² is 8 φ φᵀ
        let spec = &v.mass.spectrum;
        ensure((spec[2] - 8.0).abs() <= 8.0 * 1e-8, || {
            format!("top eigenvalue {}", spec[2])
        })?;
        ensure(spec[0].abs() <= 8.0 * 1e-8 && spec[1].abs() <= 8.0 * 1e-8, || {
            format!("spectrum {spec:?}")
        })?;
        ensure((norm2 - 1.0).abs() < 1e-10, || format!("|φ|² = {norm2}"))?;
        for i in 0..3 {
            for j in 0..3 {
                let expect = 8.0 * phi[i] * phi[j] + 4.0 * (norm2 - 1.0) * f64::from(u8::from(i == j));
                ensure((v.mass.matrix[(i, j)] - expect).abs() < 1e-9, || format!("M[{i},{j}]"))?;
            }
        }
        let g = &v.goldstone;
        ensure((g.n_tangent, g.n_n0, g.n_n1, g.n_mixed) == (2, 0, 0, 0), || {
            format!("{g:?}")
        })?;
        ensure(g.tangent_residual < 1e-9, || {
            format!("|M T φ| = {}", g.tangent_residual)
        })?;

        let (name, values) = parse_sweep("g1=-1:0:21").map_err(|e| e.to_string())?;
        let pts = symbreak::sweep(&c.potential, &rep, &name, &values, &c.start, &NewtonConfig::default())
            .map_err(|e| e.to_string())?;
        let first = &pts[0].report.goldstone;
        let last = &pts[20].report.goldstone;
        ensure((first.n_tangent, first.n_n1) == (2, 0), || format!("g1=-1: {first:?}"))?;
        ensure((last.n_tangent, last.n_n0 + last.n_n1) == (0, 3), || {
            format!("g1=0: {last:?}")
        })?;
        // continuity: |φ_e|² = -g1/2 along the branch
        for w in pts.windows(2) {
            let expect = |p: &symbreak::SweepPoint| (-pdsa_core::polyring::to_f64(&p.control) / 2.0).sqrt();
            let bound = (expect(&w[0]) - expect(&w[1])).abs() + 1e-6;
            ensure(w[1].jump <= bound, || {
                format!("jump {} at g1={}", w[1].jump, w[1].control)
            })?;
        }

        for x in [[0.3, -0.7, 1.1], [1.5, 0.2, -0.4], [-0.05, 0.9, 0.6]] {
            let a = mass_matrix(&c.potential, &x, ZERO_TOL).matrix;
            let f = finite_difference_hessian(&c.potential, &x, 1e-5);
            let rel = (&a - &f).norm() / a.norm();
            ensure(rel < 1e-6, || format!("finite differences differ by {rel:e} at {x:?}"))?;
        }
        Ok(())
    })();
    report(8, "symmetry breaking", r);
}

#[test]
fn criterion_09_corank_check() {
    let r = (|| {
        for name in CORANK_PAIRS {
            let p = corank_pair(name).map_err(|e| e.to_string())?;
            let vac = vacuum_solve(&p.potential, &p.start, &NewtonConfig::default()).map_err(|e| e.to_string())?;
            let rec = corank_compare(&p.rep, &p.algebra, &p.potential, &vac.point, None).map_err(|e| e.to_string())?;
            ensure(rec.agrees, || format!("{name}: {rec:?}"))?;
        }
        // the zero action on so(3)* sees no orbit, but J still has rank 2
        let p = corank_pair("so3").unwrap();
        let vac = vacuum_solve(&p.potential, &p.start, &NewtonConfig::default()).unwrap();
        let zero = Representation::zero(3, 3);
        let rec = corank_compare(&zero, &p.algebra, &p.potential, &vac.point, None).map_err(|e| e.to_string())?;
        ensure(!rec.agrees, || "zero representation not flagged".into())?;
        let wrong = Representation::zero(3, 6);
        ensure(
            corank_compare(&wrong, &p.algebra, &p.potential, &[0.0; 6], None).is_err(),
            || "mismatched dimensions accepted".into(),
        )
    })();
    report(9, "corank check", r);
}

#[test]
fn criterion_10_determinism() {
    let r = (|| {
        let argv = ["pdsa", "scan", "--algebra", "underwater", "--seed", "42"];
        let a = pdsa::run(argv);
        let b = pdsa::run(argv);
        ensure(a.code == 0, || format!("exit {}: {}", a.code, a.stderr))?;
        ensure(a.stdout == b.stdout, || "scan reports differ".into())?;
        let j = tensor("so3");
        let h = poly(&j, "1/2*(mu1^2 + mu2^2/2 + mu3^2/3)");
        let c = poly(&j, "mu1^2 + mu2^2 + mu3^2");
        let f = integrate_flow(&j, &h, &[1.0, 1.0, 1.0], 1e-3, 10_000, &[c], 1000).map_err(|e| e.to_string())?;
        ensure(f.casimir_drift[0] < 1e-8, || format!("drift {}", f.casimir_drift[0]))
    })();
    report(10, "determinism", r);
}

#[test]
fn moments_generic_ranks() {
    for (k, expected) in [(1, 4), (2, 4), (3, 6), (4, 6)] {
        let (_, j) = moments::build_truncated_matrix(k).unwrap();
        let x: Vec<Rational> = (0..k + 4).map(|i| rat(2 * i as i64 + 1, (i % 3 + 1) as i64)).collect();
        assert_eq!(j.eval_exact(&x).rank(), expected, "k={k}");
    }
}
