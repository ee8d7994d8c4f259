//! Symmetry breaking for invariant polynomial potentials: vacua, mass
//! matrices, Goldstone-mode classification against `T ⊕ N⁰ ⊕ N¹`,
//! orbit-space extremization and the comparison of mass-matrix zero modes
//! with the corank of the matching Lie-Poisson tensor.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::Deserialize;

use crate::liealg::{AlgebraSpec, Representation};
use crate::poisson::{self, PoissonError};
use crate::polyring::{
    int, parse_rational, to_f64, CompiledPoly, MultiPoly, ParseError, PolyError, Rational, RationalMatrix, UniPoly,
};
use crate::strata::{self, projection_weight, HilbertBasis, StrataError};

#[derive(Debug, thiserror::Error)]
pub enum SymbreakError {
    #[error("Newton iteration did not converge in {iterations} steps (gradient norm {gradient_norm:e})")]
    NoConvergence {
        iterations: usize,
        last: Vec<f64>,
        gradient_norm: f64,
    },
    #[error("potential is not invariant under generator {0}")]
    NotInvariant(usize),
    #[error("unknown control {0:?}")]
    UnknownControl(String),
    #[error("unknown potential {0:?}; available: sombrero, quartic, convex")]
    UnknownPotential(String),
    #[error("representation and algebra do not match: {0}")]
    Mismatch(String),
    #[error("orbit-space extremization needs R-hat for the basis")]
    MissingRHat,
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Strata(#[from] StrataError),
    #[error(transparent)]
    Poisson(#[from] PoissonError),
    #[error("malformed potential file: {0}")]
    Json(#[from] serde_json::Error),
}

impl From<ParseError> for SymbreakError {
    fn from(e: ParseError) -> Self {
        SymbreakError::Poly(e.into())
    }
}

/// Polynomial in coordinates and named control parameters; the controls are
/// substituted with their current rational values before any derivative is
/// taken.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Potential {
    coords: Vec<String>,
    control_names: Vec<String>,
    control_values: Vec<Rational>,
    // over coords followed by controls
    expr: MultiPoly,
}

#[derive(Deserialize)]
struct PotentialFile {
    coords: Vec<String>,
    expr: String,
    #[serde(default)]
    controls: BTreeMap<String, String>,
}

impl Potential {
    pub fn parse(text: &str, coords: &[String], controls: &[(&str, Rational)]) -> Result<Self, SymbreakError> {
        let control_names: Vec<String> = controls.iter().map(|(n, _)| n.to_string()).collect();
        let all: Vec<String> = coords.iter().chain(&control_names).cloned().collect();
        let expr = MultiPoly::parse(text, &all)?;
        Ok(Potential {
            coords: coords.to_vec(),
            control_names,
            control_values: controls.iter().map(|(_, v)| v.clone()).collect(),
            expr,
        })
    }

    /// `{"coords": [...], "expr": "...", "controls": {"g1": "-2"}}`.
    pub fn from_json(text: &str) -> Result<Self, SymbreakError> {
        let f: PotentialFile = serde_json::from_str(text)?;
        let controls: Vec<(String, Rational)> = f
            .controls
            .into_iter()
            .map(|(k, v)| parse_rational(&v).map(|r| (k, r)))
            .collect::<Result<_, _>>()?;
        let refs: Vec<(&str, Rational)> = controls.iter().map(|(k, v)| (k.as_str(), v.clone())).collect();
        Self::parse(&f.expr, &f.coords, &refs)
    }

    pub fn coords(&self) -> &[String] {
        &self.coords
    }

    pub fn nvars(&self) -> usize {
        self.coords.len()
    }

    pub fn controls(&self) -> impl Iterator<Item = (&str, &Rational)> {
        self.control_names.iter().map(String::as_str).zip(&self.control_values)
    }

    pub fn with_control(&self, name: &str, value: Rational) -> Result<Self, SymbreakError> {
        let i = self
            .control_names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| SymbreakError::UnknownControl(name.into()))?;
        let mut out = self.clone();
        out.control_values[i] = value;
        Ok(out)
    }

    /// The potential with controls substituted.
    pub fn concrete(&self) -> MultiPoly {
        let n = self.nvars();
        let mut images: Vec<MultiPoly> = (0..n).map(|i| MultiPoly::var(n, i)).collect();
        images.extend(self.control_values.iter().map(|v| MultiPoly::constant(n, v.clone())));
        self.expr.substitute(&images).expect("consistent sizes")
    }

    pub fn check_invariant(&self, rep: &Representation) -> Result<(), SymbreakError> {
        strata::invariance_certificate(rep, &self.concrete()).map_err(SymbreakError::NotInvariant)
    }
}

/// A catalog potential with the representation it is invariant under, its
/// orbit-space form and a default Newton start.
#[derive(Clone, Debug)]
pub struct CatalogPotential {
    pub potential: Potential,
    pub rep_name: &'static str,
    /// Same controls, written in the invariant `theta1 = |φ|²`.
    pub orbit_form: Potential,
    pub start: Vec<f64>,
}

pub fn catalog_potential(name: &str) -> Result<CatalogPotential, SymbreakError> {
    let coords: Vec<String> = (1..=3).map(|i| format!("phi{i}")).collect();
    let theta = vec!["theta1".to_string()];
    let r2 = "(phi1^2 + phi2^2 + phi3^2)";
    let (expr, hat, controls): (String, &str, Vec<(&str, Rational)>) = match name {
        // (|φ|² - 1)² at the default controls
        "sombrero" => (
            format!("g2*{r2}^2 + g1*{r2} + g0"),
            "g2*theta1^2 + g1*theta1 + g0",
            vec![("g2", int(1)), ("g1", int(-2)), ("g0", int(1))],
        ),
        "quartic" => (format!("{r2}^2"), "theta1^2", vec![]),
        "convex" => (r2.to_string(), "theta1", vec![]),
        _ => return Err(SymbreakError::UnknownPotential(name.into())),
    };
    Ok(CatalogPotential {
        potential: Potential::parse(&expr, &coords, &controls)?,
        rep_name: "so3-vector",
        orbit_form: Potential::parse(hat, &theta, &controls)?,
        start: vec![0.5, 0.2, 0.1],
    })
}

/// Algebra, coadjoint representation and an invariant potential built from
/// its Casimirs, for comparing Goldstone counts with the tensor corank.
#[derive(Clone, Debug)]
pub struct CorankPair {
    pub algebra: AlgebraSpec,
    pub rep: Representation,
    pub potential: Potential,
    pub start: Vec<f64>,
}

pub const CORANK_PAIRS: &[&str] = &["so3", "so21", "gravity"];

pub fn corank_pair(name: &str) -> Result<CorankPair, SymbreakError> {
    let (expr, start): (&str, Vec<f64>) = match name {
        "so3" => ("(mu1^2 + mu2^2 + mu3^2 - 1)^2", vec![0.5, 0.2, 0.1]),
        "so21" => ("(a1^2 + a2^2 - a3^2 - 1)^2", vec![0.9, 0.2, 0.1]),
        "gravity" => (
            "(z1^2 + z2^2 + z3^2 - 1)^2 + (mu1*z1 + mu2*z2 + mu3*z3)^2",
            vec![0.3, -0.2, 0.1, 0.9, 0.1, 0.2],
        ),
        _ => {
            return Err(SymbreakError::Invalid(format!(
                "no corank pair {name:?}; available: {}",
                CORANK_PAIRS.join(", ")
            )))
        }
    };
    let c = strata::catalog_representation(&format!("coadjoint:{name}"))?;
    let potential = Potential::parse(expr, &c.algebra.coordinate_names, &[])?;
    potential.check_invariant(&c.rep)?;
    Ok(CorankPair {
        algebra: c.algebra,
        rep: c.rep,
        potential,
        start,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NewtonConfig {
    pub max_iter: usize,
    pub gtol: f64,
    /// Step-length tolerance relative to `max(1, |φ|)`.
    pub xtol: f64,
}

impl Default for NewtonConfig {
    fn default() -> Self {
        NewtonConfig {
            max_iter: 500,
            gtol: 1e-14,
            xtol: 1e-12,
        }
    }
}

struct Compiled {
    value: CompiledPoly,
    grad: Vec<CompiledPoly>,
    hess: Vec<Vec<CompiledPoly>>,
}

impl Compiled {
    fn new(v: &MultiPoly) -> Self {
        Compiled {
            value: v.compile(),
            grad: v.gradient().iter().map(MultiPoly::compile).collect(),
            hess: v
                .hessian()
                .iter()
                .map(|r| r.iter().map(MultiPoly::compile).collect())
                .collect(),
        }
    }

    fn grad(&self, x: &[f64]) -> DVector<f64> {
        DVector::from_iterator(x.len(), self.grad.iter().map(|g| g.eval(x)))
    }

    fn hess(&self, x: &[f64]) -> DMatrix<f64> {
        let n = x.len();
        DMatrix::from_fn(n, n, |i, j| self.hess[i][j].eval(x))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Vacuum {
    pub point: Vec<f64>,
    pub value: f64,
    pub gradient_norm: f64,
    pub iterations: usize,
}

/// Newton's method on `∇V = 0` from `start`. The Hessian is replaced by
/// `Q |Λ| Qᵀ` so every step is a descent direction, with eigenvalues below
/// `1e-8 · max |λ|` replaced by `max |λ|`. Steps are
/// backtracked until either `V` satisfies the Armijo condition or `|∇V|`
/// decreases. Converged when `|∇V| ≤ gtol` and the last step is below
/// `xtol · max(1, |φ|)`.
pub fn vacuum_solve(v: &Potential, start: &[f64], config: &NewtonConfig) -> Result<Vacuum, SymbreakError> {
    if start.len() != v.nvars() {
        return Err(SymbreakError::Invalid(format!(
            "start has {} coordinates, potential has {}",
            start.len(),
            v.nvars()
        )));
    }
    let c = Compiled::new(&v.concrete());
    let mut x = DVector::from_column_slice(start);
    let mut g = c.grad(x.as_slice());
    for it in 0..config.max_iter {
        let h = c.hess(x.as_slice());
        let eig = SymmetricEigen::new(h);
        let scale = eig.eigenvalues.iter().fold(0.0f64, |m, l| m.max(l.abs()));
        // near-null directions take a gradient step scaled by the largest
        // curvature, so roundoff in flat directions is not amplified
        let floor = scale * 1e-8;
        let fallback = if scale > 0.0 { scale } else { 1.0 };
        let qtg = eig.eigenvectors.transpose() * &g;
        let y = DVector::from_iterator(
            qtg.len(),
            qtg.iter().zip(eig.eigenvalues.iter()).map(|(a, l)| {
                if l.abs() > floor && *l != 0.0 {
                    a / l.abs()
                } else {
                    a / fallback
                }
            }),
        );
        let p = -(&eig.eigenvectors * y);
        let v0 = c.value.eval(x.as_slice());
        let slope = g.dot(&p);
        let gnorm0 = g.norm();
        let mut t = 1.0;
        let mut accepted = None;
        for _ in 0..60 {
            let xn = &x + &p * t;
            let gn = c.grad(xn.as_slice());
            let vn = c.value.eval(xn.as_slice());
            if vn <= v0 + 1e-4 * t * slope || gn.norm() < gnorm0 {
                accepted = Some((xn, gn));
                break;
            }
            t *= 0.5;
        }
        let Some((xn, gn)) = accepted else {
            if gnorm0 <= config.gtol {
                return Ok(Vacuum {
                    value: v0,
                    point: x.iter().copied().collect(),
                    gradient_norm: gnorm0,
                    iterations: it,
                });
            }
            return Err(SymbreakError::NoConvergence {
                iterations: it,
                last: x.iter().copied().collect(),
                gradient_norm: gnorm0,
            });
        };
        let step = (&xn - &x).norm();
        x = xn;
        g = gn;
        if g.norm() <= config.gtol && step <= config.xtol * x.norm().max(1.0) {
            return Ok(Vacuum {
                value: c.value.eval(x.as_slice()),
                point: x.iter().copied().collect(),
                gradient_norm: g.norm(),
                iterations: it + 1,
            });
        }
    }
    Err(SymbreakError::NoConvergence {
        iterations: config.max_iter,
        last: x.iter().copied().collect(),
        gradient_norm: g.norm(),
    })
}

/// Relative tolerance for counting an eigenvalue of the mass matrix as
/// zero: `|λ| < ZERO_TOL · max(1, max |λ|)`.
pub const ZERO_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq)]
pub struct MassMatrix {
    pub matrix: DMatrix<f64>,
    /// Ascending eigenvalues.
    pub spectrum: Vec<f64>,
    /// Unit eigenvectors in the order of `spectrum`.
    pub eigenvectors: Vec<Vec<f64>>,
    pub zero_tol: f64,
    pub gradient_norm: f64,
}

impl MassMatrix {
    fn threshold(&self) -> f64 {
        let m = self.spectrum.iter().fold(0.0f64, |a, l| a.max(l.abs()));
        self.zero_tol * m.max(1.0)
    }

    pub fn zero_modes(&self) -> Vec<Vec<f64>> {
        let thr = self.threshold();
        self.spectrum
            .iter()
            .zip(&self.eigenvectors)
            .filter(|(l, _)| l.abs() < thr)
            .map(|(_, v)| v.clone())
            .collect()
    }

    pub fn zero_mode_count(&self) -> usize {
        let thr = self.threshold();
        self.spectrum.iter().filter(|l| l.abs() < thr).count()
    }

    /// No eigenvalue below `-zero_tol · max(1, max |λ|)`.
    pub fn is_positive_semidefinite(&self) -> bool {
        let thr = self.threshold();
        self.spectrum.iter().all(|l| *l >= -thr)
    }
}

/// Hessian of the potential at `φ` with its symmetric eigendecomposition.
pub fn mass_matrix(v: &Potential, phi: &[f64], zero_tol: f64) -> MassMatrix {
    let c = Compiled::new(&v.concrete());
    let h = c.hess(phi);
    let h = (&h + h.transpose()) * 0.5;
    let eig = SymmetricEigen::new(h.clone());
    let mut order: Vec<usize> = (0..phi.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    MassMatrix {
        matrix: h,
        spectrum: order.iter().map(|&i| eig.eigenvalues[i]).collect(),
        eigenvectors: order
            .iter()
            .map(|&i| eig.eigenvectors.column(i).iter().copied().collect())
            .collect(),
        zero_tol,
        gradient_norm: c.grad(phi).norm(),
    }
}

/// Exact Hessian at a rational point.
pub fn mass_matrix_exact(v: &Potential, phi: &[Rational]) -> RationalMatrix {
    let h = v.concrete().hessian();
    let rows: Vec<Vec<Rational>> = h.iter().map(|r| r.iter().map(|p| p.eval(phi)).collect()).collect();
    RationalMatrix::from_rows(rows).expect("square")
}

/// Central finite-difference Hessian from the analytic gradient.
pub fn finite_difference_hessian(v: &Potential, phi: &[f64], h: f64) -> DMatrix<f64> {
    let c = Compiled::new(&v.concrete());
    let n = phi.len();
    let mut out = DMatrix::zeros(n, n);
    for j in 0..n {
        let mut xp = phi.to_vec();
        let mut xm = phi.to_vec();
        xp[j] += h;
        xm[j] -= h;
        let d = (c.grad(&xp) - c.grad(&xm)) / (2.0 * h);
        out.set_column(j, &d);
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeKind {
    Tangent,
    N0,
    N1,
    Mixed,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ZeroMode {
    pub kind: ModeKind,
    pub vector: Vec<f64>,
    /// Squared projections onto `T`, `N⁰`, `N¹`.
    pub weights: [f64; 3],
}

#[derive(Clone, Debug, PartialEq)]
pub struct GoldstoneReport {
    pub modes: Vec<ZeroMode>,
    pub n_tangent: usize,
    pub n_n0: usize,
    pub n_n1: usize,
    pub n_mixed: usize,
    pub dim_orbit: usize,
    /// `max_a |M T^a φ|`.
    pub tangent_residual: f64,
}

/// Dominance threshold for labelling a zero mode by one subspace.
pub const DOMINANCE: f64 = 0.99;

fn orthonormal_complement_in(chosen: &[DVector<f64>], dim: usize) -> Vec<DVector<f64>> {
    let rows: Vec<Vec<f64>> = chosen.iter().map(|v| v.iter().copied().collect()).collect();
    if rows.is_empty() {
        return (0..dim)
            .map(|i| DVector::from_fn(dim, |j, _| if i == j { 1.0 } else { 0.0 }))
            .collect();
    }
    let m = DMatrix::from_fn(rows.len(), dim, |i, j| rows[i][j]);
    let (_, k) = poisson::float_rank_and_kernel(&m, 1e-12);
    k.into_iter().map(DVector::from_vec).collect()
}

/// Splits the zero eigenspace of `M` by principal angles with `T`, `N⁰` and
/// `N¹` in that order: directions whose squared projection onto a subspace
/// is at least [`DOMINANCE`] are labelled by it; what remains is mixed.
pub fn goldstone_classify(
    mass: &MassMatrix,
    rep: &Representation,
    phi: &[f64],
    tol: f64,
) -> Result<GoldstoneReport, SymbreakError> {
    let dec = strata::normal_decomposition_f64(rep, phi, tol)?;
    let n = phi.len();
    let zero: Vec<DVector<f64>> = mass.zero_modes().into_iter().map(DVector::from_vec).collect();
    let mut remaining: Vec<DVector<f64>> = zero;
    let mut modes = Vec::new();
    let subspaces = [
        (ModeKind::Tangent, &dec.tangent),
        (ModeKind::N0, &dec.n0),
        (ModeKind::N1, &dec.n1),
    ];
    for (kind, basis) in subspaces {
        if remaining.is_empty() || basis.is_empty() {
            continue;
        }
        let z = DMatrix::from_fn(n, remaining.len(), |i, j| remaining[j][i]);
        let q = DMatrix::from_fn(basis.len(), n, |i, j| basis[i][j]);
        let svd = (&q * &z).svd(false, true);
        let vt = svd.v_t.expect("requested");
        let mut chosen = Vec::new();
        for (i, s) in svd.singular_values.iter().enumerate() {
            if s * s >= DOMINANCE {
                let coeff = vt.row(i).transpose();
                let vec = &z * &coeff;
                chosen.push(coeff);
                modes.push((kind, vec));
            }
        }
        if !chosen.is_empty() {
            let comp = orthonormal_complement_in(&chosen, remaining.len());
            remaining = comp.iter().map(|c| &z * c).collect();
        }
    }
    for r in remaining {
        modes.push((ModeKind::Mixed, r));
    }
    let modes: Vec<ZeroMode> = modes
        .into_iter()
        .map(|(kind, v)| {
            let vec: Vec<f64> = v.iter().copied().collect();
            ZeroMode {
                kind,
                weights: [
                    projection_weight(&vec, &dec.tangent),
                    projection_weight(&vec, &dec.n0),
                    projection_weight(&vec, &dec.n1),
                ],
                vector: vec,
            }
        })
        .collect();
    let p = DVector::from_column_slice(phi);
    let tangent_residual = rep
        .generators
        .iter()
        .map(|t| (&mass.matrix * (t.to_f64() * &p)).norm())
        .fold(0.0, f64::max);
    let count = |k| modes.iter().filter(|m| m.kind == k).count();
    Ok(GoldstoneReport {
        n_tangent: count(ModeKind::Tangent),
        n_n0: count(ModeKind::N0),
        n_n1: count(ModeKind::N1),
        n_mixed: count(ModeKind::Mixed),
        dim_orbit: dec.tangent.len(),
        modes,
        tangent_residual,
    })
}

/// Vacuum, mass matrix and mode table in one record.
#[derive(Clone, Debug, PartialEq)]
pub struct VacuumReport {
    pub vacuum: Vacuum,
    pub mass: MassMatrix,
    pub goldstone: GoldstoneReport,
}

pub fn analyze_vacuum(
    v: &Potential,
    rep: &Representation,
    start: &[f64],
    config: &NewtonConfig,
) -> Result<VacuumReport, SymbreakError> {
    v.check_invariant(rep)?;
    let vacuum = vacuum_solve(v, start, config)?;
    let mass = mass_matrix(v, &vacuum.point, ZERO_TOL);
    let goldstone = goldstone_classify(&mass, rep, &vacuum.point, 1e-9)?;
    Ok(VacuumReport {
        vacuum,
        mass,
        goldstone,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepPoint {
    pub control: Rational,
    pub report: VacuumReport,
    /// Distance from the previous vacuum.
    pub jump: f64,
}

/// Continuation in one control: each vacuum seeds the Newton solve at the
/// next control value.
pub fn sweep(
    v: &Potential,
    rep: &Representation,
    control: &str,
    values: &[Rational],
    start: &[f64],
    config: &NewtonConfig,
) -> Result<Vec<SweepPoint>, SymbreakError> {
    let mut x = start.to_vec();
    let mut out: Vec<SweepPoint> = Vec::with_capacity(values.len());
    for val in values {
        let pv = v.with_control(control, val.clone())?;
        let report = analyze_vacuum(&pv, rep, &x, config)?;
        let jump = out.last().map_or(0.0, |prev| {
            prev.report
                .vacuum
                .point
                .iter()
                .zip(&report.vacuum.point)
                .map(|(a, b)| (a - b).powi(2))
                .sum::<f64>()
                .sqrt()
        });
        x = report.vacuum.point.clone();
        out.push(SweepPoint {
            control: val.clone(),
            report,
            jump,
        });
    }
    Ok(out)
}

/// Parses `name=lo:hi:count` into an inclusive, evenly spaced exact grid.
pub fn parse_sweep(spec: &str) -> Result<(String, Vec<Rational>), SymbreakError> {
    let bad = || SymbreakError::Invalid(format!("sweep must look like g1=-1:0:21, got {spec:?}"));
    let (name, range) = spec.split_once('=').ok_or_else(bad)?;
    let parts: Vec<&str> = range.split(':').collect();
    if parts.len() != 3 {
        return Err(bad());
    }
    let lo = parse_rational(parts[0])?;
    let hi = parse_rational(parts[1])?;
    let count: usize = parts[2].trim().parse().map_err(|_| bad())?;
    if count == 0 {
        return Err(bad());
    }
    let values = if count == 1 {
        vec![lo]
    } else {
        let step = (&hi - &lo) / int(count as i64 - 1);
        (0..count).map(|i| &lo + &step * int(i as i64)).collect()
    };
    Ok((name.trim().to_string(), values))
}

#[derive(Clone, Debug, PartialEq)]
pub enum Theta {
    Exact(Rational),
    Float(f64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct CriticalPoint {
    pub theta: Vec<f64>,
    pub exact: Option<Vec<Rational>>,
    /// Rank of `R̂(θ*)`; full rank is the principal stratum.
    pub rank_r: usize,
    pub principal: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Extremization {
    pub critical: Vec<CriticalPoint>,
    /// `R̂ ∇V̂` vanishes identically: every point of orbit space is critical.
    pub everywhere: bool,
    pub diagnostics: Vec<String>,
}

/// Equations `det R̂[S, S] = 0` for the selected index sets `S`, which
/// restrict the search to lower-rank strata.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StratumTarget {
    pub minors: Vec<Vec<usize>>,
}

fn poly_det(m: &[Vec<MultiPoly>], nvars: usize) -> MultiPoly {
    match m.len() {
        0 => MultiPoly::one(nvars),
        1 => m[0][0].clone(),
        _ => {
            let mut out = MultiPoly::zero(nvars);
            for (j, a) in m[0].iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                let minor: Vec<Vec<MultiPoly>> = m[1..]
                    .iter()
                    .map(|r| {
                        r.iter()
                            .enumerate()
                            .filter(|(k, _)| *k != j)
                            .map(|(_, p)| p.clone())
                            .collect()
                    })
                    .collect();
                let t = a * &poly_det(&minor, nvars);
                out = if j % 2 == 0 { &out + &t } else { &out - &t };
            }
            out
        }
    }
}

/// Critical points of `V̂` on orbit space: solutions of
/// `Σ_b R̂_ab(θ) ∂_b V̂(θ) = 0` with `R̂(θ)` positive semidefinite.
/// One invariant is solved exactly by real-root isolation; several are
/// solved by Gauss-Newton from `starts`.
pub fn stratum_extremize(
    vhat: &Potential,
    basis: &HilbertBasis,
    target: &StratumTarget,
    starts: &[Vec<f64>],
) -> Result<Extremization, SymbreakError> {
    let rh = basis.r_hat.as_ref().ok_or(SymbreakError::MissingRHat)?;
    let q = basis.len();
    if vhat.nvars() != q {
        return Err(SymbreakError::Invalid(format!(
            "orbit potential has {} variables, basis has {q}",
            vhat.nvars()
        )));
    }
    let v = vhat.concrete();
    let grad = v.gradient();
    let mut eqs: Vec<MultiPoly> = rh
        .iter()
        .map(|row| {
            row.iter()
                .zip(&grad)
                .fold(MultiPoly::zero(q), |acc, (r, g)| &acc + &(r * g))
        })
        .collect();
    for s in &target.minors {
        let sub: Vec<Vec<MultiPoly>> = s
            .iter()
            .map(|&i| s.iter().map(|&j| rh[i][j].clone()).collect())
            .collect();
        eqs.push(poly_det(&sub, q));
    }
    let rank_at = |theta: &[Rational]| -> (usize, bool) {
        let m = RationalMatrix::from_rows(rh.iter().map(|r| r.iter().map(|p| p.eval(theta)).collect()).collect())
            .expect("square");
        (m.rank(), strata::is_psd_exact(&m))
    };
    let mut out = Extremization {
        critical: Vec::new(),
        everywhere: false,
        diagnostics: Vec::new(),
    };
    if eqs.iter().all(MultiPoly::is_zero) {
        out.everywhere = true;
        return Ok(out);
    }
    if q == 1 && target.minors.is_empty() {
        let p = UniPoly::from_multi(&eqs[0])?;
        for root in p.real_roots() {
            match &root.exact {
                Some(r) => {
                    let (rank, psd) = rank_at(std::slice::from_ref(r));
                    if !psd {
                        out.diagnostics.push(format!("θ = {r} lies outside orbit space"));
                        continue;
                    }
                    out.critical.push(CriticalPoint {
                        theta: vec![root.approx],
                        exact: Some(vec![r.clone()]),
                        rank_r: rank,
                        principal: rank == q,
                    });
                }
                None => {
                    let r = rh[0][0].eval_f64(&[root.approx]);
                    if r < -1e-12 {
                        out.diagnostics
                            .push(format!("θ ≈ {:e} lies outside orbit space", root.approx));
                        continue;
                    }
                    let rank = usize::from(r.abs() > 1e-12);
                    out.critical.push(CriticalPoint {
                        theta: vec![root.approx],
                        exact: None,
                        rank_r: rank,
                        principal: rank == q,
                    });
                }
            }
        }
        if out.critical.is_empty() {
            out.diagnostics.push("no real critical point in orbit space".into());
        }
        return Ok(out);
    }
    let f: Vec<CompiledPoly> = eqs.iter().map(MultiPoly::compile).collect();
    let jac: Vec<Vec<CompiledPoly>> = eqs
        .iter()
        .map(|e| e.gradient().iter().map(MultiPoly::compile).collect())
        .collect();
    for s in starts {
        if s.len() != q {
            out.diagnostics.push(format!("start {s:?} has the wrong length"));
            continue;
        }
        let mut x = DVector::from_column_slice(s);
        let mut converged = false;
        for _ in 0..200 {
            let fx = DVector::from_iterator(f.len(), f.iter().map(|p| p.eval(x.as_slice())));
            if fx.norm() < 1e-13 {
                converged = true;
                break;
            }
            let jx = DMatrix::from_fn(f.len(), q, |i, j| jac[i][j].eval(x.as_slice()));
            let Ok(step) = jx.clone().svd(true, true).solve(&fx, 1e-14) else {
                break;
            };
            x -= step;
        }
        if !converged {
            out.diagnostics.push(format!("no convergence from {s:?}"));
            continue;
        }
        let theta: Vec<f64> = x.iter().copied().collect();
        let r = DMatrix::from_fn(q, q, |i, j| rh[i][j].eval_f64(&theta));
        let eig = SymmetricEigen::new(r.clone());
        let scale = eig.eigenvalues.iter().fold(1.0f64, |m, l| m.max(l.abs()));
        if eig.eigenvalues.iter().any(|l| *l < -1e-9 * scale) {
            out.diagnostics.push(format!("θ ≈ {theta:?} lies outside orbit space"));
            continue;
        }
        let rank = eig.eigenvalues.iter().filter(|l| l.abs() > 1e-9 * scale).count();
        if out
            .critical
            .iter()
            .any(|c| c.theta.iter().zip(&theta).all(|(a, b)| (a - b).abs() < 1e-8))
        {
            continue;
        }
        out.critical.push(CriticalPoint {
            theta,
            exact: None,
            rank_r: rank,
            principal: rank == q,
        });
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct CorankRecord {
    pub zero_modes: usize,
    pub zero_modes_tangent: usize,
    pub orbit_dim: usize,
    pub rank_j: usize,
    pub corank_j: usize,
    /// `orbit_dim(φ_e) - orbit_dim(φ_e')` when a second vacuum is supplied.
    pub orbit_delta: Option<i64>,
    /// Tangent zero modes, orbit dimension and `rank J(φ_e)` all coincide.
    pub agrees: bool,
}

fn abs_float_rank(m: &DMatrix<f64>, tol: f64) -> usize {
    if m.is_empty() {
        return 0;
    }
    let sv = m.clone().singular_values();
    let smax = sv.iter().cloned().fold(0.0, f64::max);
    sv.iter().filter(|s| **s > tol * smax.max(1.0)).count()
}

/// Compares the Goldstone picture of `V` at `φ_e` with the Lie-Poisson
/// tensor of `algebra` at the same point. The representation must act on
/// the algebra's dual, with one generator per basis element.
pub fn corank_compare(
    rep: &Representation,
    algebra: &AlgebraSpec,
    v: &Potential,
    phi_e: &[f64],
    second: Option<&[f64]>,
) -> Result<CorankRecord, SymbreakError> {
    let d = algebra.dim();
    if rep.generators.len() != d || rep.dim_v != d {
        return Err(SymbreakError::Mismatch(format!(
            "representation has {} generators on dimension {}, algebra {} has dimension {d}",
            rep.generators.len(),
            rep.dim_v,
            algebra.name
        )));
    }
    rep.check_homomorphism(&algebra.structure)
        .map_err(|e| SymbreakError::Mismatch(e.to_string()))?;
    let mass = mass_matrix(v, phi_e, ZERO_TOL);
    let gold = goldstone_classify(&mass, rep, phi_e, 1e-9)?;
    let j = poisson::from_spec(algebra)?;
    let rank_j = abs_float_rank(&j.eval_f64(phi_e), 1e-9);
    let orbit_delta = match second {
        Some(p2) => {
            let g2 = strata::normal_decomposition_f64(rep, p2, 1e-9)?;
            Some(gold.dim_orbit as i64 - g2.tangent.len() as i64)
        }
        None => None,
    };
    Ok(CorankRecord {
        zero_modes: mass.zero_mode_count(),
        zero_modes_tangent: gold.n_tangent,
        orbit_dim: gold.dim_orbit,
        rank_j,
        corank_j: d - rank_j,
        orbit_delta,
        agrees: gold.n_tangent == gold.dim_orbit && gold.dim_orbit == rank_j,
    })
}

pub fn rationals_to_f64(v: &[Rational]) -> Vec<f64> {
    v.iter().map(to_f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::catalog;
    use crate::polyring::rat;
    use crate::strata::catalog_representation;

    fn sombrero() -> (CatalogPotential, Representation) {
        let c = catalog_potential("sombrero").unwrap();
        let rep = catalog_representation(c.rep_name).unwrap().rep;
        (c, rep)
    }

    #[test]
    fn sombrero_vacuum_and_spectrum() {
        let (c, rep) = sombrero();
        let r = analyze_vacuum(&c.potential, &rep, &c.start, &NewtonConfig::default()).unwrap();
        let norm: f64 = r.vacuum.point.iter().map(|x| x * x).sum::<f64>().sqrt();
        assert!((norm - 1.0).abs() < 1e-10);
        let s = &r.mass.spectrum;
        assert!(s[0].abs() < 1e-8 && s[1].abs() < 1e-8);
        assert!((s[2] - 8.0).abs() < 8e-8);
        assert_eq!(r.mass.zero_mode_count(), 2);
        assert_eq!((r.goldstone.n_tangent, r.goldstone.n_n0, r.goldstone.n_n1), (2, 0, 0));
        assert!(r.goldstone.tangent_residual < 1e-9);
    }

    #[test]
    fn convex_and_quartic() {
        let conv = catalog_potential("convex").unwrap();
        let rep = catalog_representation("so3-vector").unwrap().rep;
        let r = analyze_vacuum(&conv.potential, &rep, &[0.3, -2.0, 1.0], &NewtonConfig::default()).unwrap();
        assert!(r.vacuum.point.iter().all(|x| x.abs() < 1e-12));
        assert_eq!(r.mass.spectrum, vec![2.0, 2.0, 2.0]);
        assert_eq!(r.mass.zero_mode_count(), 0);
        let q = catalog_potential("quartic").unwrap();
        let r = analyze_vacuum(&q.potential, &rep, &[0.05, -0.02, 0.01], &NewtonConfig::default()).unwrap();
        assert!(r.vacuum.point.iter().all(|x| x.abs() < 1e-9));
        assert_eq!(r.mass.zero_mode_count(), 3);
        assert_eq!((r.goldstone.n_tangent, r.goldstone.n_n0, r.goldstone.n_n1), (0, 0, 3));
    }

    #[test]
    fn exact_mass_matrix() {
        let (c, _) = sombrero();
        let m = mass_matrix_exact(&c.potential, &[int(0), int(0), int(1)]);
        assert_eq!(m, RationalMatrix::from_i64(&[&[0, 0, 0], &[0, 0, 0], &[0, 0, 8]]));
    }

    #[test]
    fn hessian_matches_finite_differences() {
        let (c, _) = sombrero();
        let x = [0.3, -0.7, 1.1];
        let a = mass_matrix(&c.potential, &x, ZERO_TOL).matrix;
        let f = finite_difference_hessian(&c.potential, &x, 1e-5);
        assert!((&a - &f).norm() / a.norm() < 1e-6);
    }

    #[test]
    fn invariance_enforced() {
        let coords: Vec<String> = (1..=3).map(|i| format!("phi{i}")).collect();
        let v = Potential::parse("phi1^2", &coords, &[]).unwrap();
        let rep = catalog_representation("so3-vector").unwrap().rep;
        assert!(matches!(v.check_invariant(&rep), Err(SymbreakError::NotInvariant(_))));
    }

    #[test]
    fn orbit_space_extremization() {
        let basis = catalog_representation("so3-vector").unwrap().basis;
        let theta = vec!["theta1".to_string()];
        let v = Potential::parse("(theta1 - 1)^2", &theta, &[]).unwrap();
        let e = stratum_extremize(&v, &basis, &StratumTarget::default(), &[]).unwrap();
        let exact: Vec<Rational> = e.critical.iter().map(|c| c.exact.clone().unwrap()[0].clone()).collect();
        assert_eq!(exact, vec![int(0), int(1)]);
        assert!(!e.critical[0].principal && e.critical[1].principal);
        let lin = Potential::parse("theta1", &theta, &[]).unwrap();
        let e = stratum_extremize(&lin, &basis, &StratumTarget::default(), &[]).unwrap();
        assert_eq!(e.critical.len(), 1);
        assert_eq!(e.critical[0].exact, Some(vec![int(0)]));
        let k = Potential::parse("3", &theta, &[]).unwrap();
        assert!(
            stratum_extremize(&k, &basis, &StratumTarget::default(), &[])
                .unwrap()
                .everywhere
        );
        // γ₁ > 0: the nonzero root is negative and outside orbit space
        let c = catalog_potential("sombrero")
            .unwrap()
            .orbit_form
            .with_control("g1", int(1))
            .unwrap();
        let e = stratum_extremize(&c, &basis, &StratumTarget::default(), &[]).unwrap();
        assert_eq!(e.critical.len(), 1);
        assert!(!e.diagnostics.is_empty());
    }

    #[test]
    fn two_invariant_extremization() {
        let c = catalog_representation("so4-adjoint").unwrap();
        let names = vec!["theta1".to_string(), "theta2".to_string()];
        // minimum of (θ1 + 2)^2 + θ2^2 lies at θ = (-2, 0)
        let v = Potential::parse("(theta1 + 2)^2 + theta2^2", &names, &[]).unwrap();
        let e = stratum_extremize(&v, &c.basis, &StratumTarget::default(), &[vec![-1.5, 0.3]]).unwrap();
        assert_eq!(e.critical.len(), 1);
        assert!((e.critical[0].theta[0] + 2.0).abs() < 1e-10);
        assert!(e.critical[0].theta[1].abs() < 1e-10);
        assert!(e.critical[0].principal);
        let target = StratumTarget {
            minors: vec![vec![0, 1]],
        };
        let e = stratum_extremize(&v, &c.basis, &target, &[vec![-1.0, 0.6]]).unwrap();
        for crit in &e.critical {
            assert!(crit.rank_r < 2);
        }
    }

    #[test]
    fn sweep_parsing() {
        let (name, v) = parse_sweep("g1=-1:0:21").unwrap();
        assert_eq!(name, "g1");
        assert_eq!(v.len(), 21);
        assert_eq!(v[0], int(-1));
        assert_eq!(v[1], rat(-19, 20));
        assert_eq!(v[20], int(0));
        assert!(parse_sweep("g1=-1:0").is_err());
    }

    #[test]
    fn restoration_sweep() {
        let (c, rep) = sombrero();
        let (name, values) = parse_sweep("g1=-1:0:21").unwrap();
        let pts = sweep(&c.potential, &rep, &name, &values, &c.start, &NewtonConfig::default()).unwrap();
        let first = &pts[0].report.goldstone;
        assert_eq!((first.n_tangent, first.n_n0, first.n_n1), (2, 0, 0));
        let last = &pts[20].report.goldstone;
        assert_eq!((last.n_tangent, last.n_n0, last.n_n1), (0, 0, 3));
        for p in &pts[..20] {
            let g1 = to_f64(&p.control);
            let r2: f64 = p.report.vacuum.point.iter().map(|x| x * x).sum();
            assert!((r2 + g1 / 2.0).abs() < 1e-10, "{g1} {r2}");
        }
        assert!(pts.iter().all(|p| p.jump < 0.2));
    }

    #[test]
    fn corank_pairs_agree() {
        for name in CORANK_PAIRS {
            let p = corank_pair(name).unwrap();
            let vac = vacuum_solve(&p.potential, &p.start, &NewtonConfig::default()).unwrap();
            let rec = corank_compare(&p.rep, &p.algebra, &p.potential, &vac.point, None).unwrap();
            assert!(rec.agrees, "{name}: {rec:?}");
        }
    }

    #[test]
    fn corank_agreement_and_mismatch() {
        let (c, rep) = sombrero();
        let so3 = catalog("so3").unwrap();
        let vac = vacuum_solve(&c.potential, &c.start, &NewtonConfig::default()).unwrap();
        let rec = corank_compare(&rep, &so3, &c.potential, &vac.point, Some(&[0.0, 0.0, 0.0])).unwrap();
        assert!(rec.agrees);
        assert_eq!(
            (rec.zero_modes_tangent, rec.rank_j, rec.corank_j, rec.orbit_dim),
            (2, 2, 1, 2)
        );
        assert_eq!(rec.orbit_delta, Some(2));
        let zero = Representation::zero(3, 3);
        let bad = corank_compare(&zero, &so3, &c.potential, &vac.point, None).unwrap();
        assert!(!bad.agrees);
        let wrong = Representation::zero(2, 3);
        assert!(matches!(
            corank_compare(&wrong, &so3, &c.potential, &vac.point, None),
            Err(SymbreakError::Mismatch(_))
        ));
    }
}
