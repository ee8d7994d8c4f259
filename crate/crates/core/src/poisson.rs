//! Poisson tensors with polynomial entries: Jacobi verification, rank at a
//! point, Casimir certification and discovery, locus restriction for
//! subcasimirs, rank scans and a reference flow integrator.

use std::collections::{BTreeMap, BTreeSet};

use nalgebra::DMatrix;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::liealg::{jacobi_check, AlgebraSpec, LieError, StructureConstants};
use crate::polyring::{
    canonical_span, monomials_of_degree, sparse_kernel, to_f64, Monomial, MultiPoly, ParseError, PolyError, Rational,
    RationalMatrix, SparseRow,
};
use crate::sampling;

/// Default relative singular-value threshold of the float rank path.
pub const DEFAULT_RANK_TOL: f64 = 1e-9;

#[derive(Debug, thiserror::Error)]
pub enum PoissonError {
    #[error("tensor is not antisymmetric at ({i}, {j})")]
    NotAntisymmetric { i: usize, j: usize },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("locus: {0}")]
    Locus(String),
    #[error("non-finite state at step {step}")]
    NonFinite { step: usize },
    #[error("time step must be positive and finite, got {0}")]
    BadStep(f64),
}

impl From<ParseError> for PoissonError {
    fn from(e: ParseError) -> Self {
        PoissonError::Poly(e.into())
    }
}

/// Antisymmetric matrix of polynomials in `dim` coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoissonStructure {
    entries: Vec<Vec<MultiPoly>>,
    names: Vec<String>,
}

impl PoissonStructure {
    pub fn new(entries: Vec<Vec<MultiPoly>>, names: Vec<String>) -> Result<Self, PoissonError> {
        let n = entries.len();
        if names.len() != n {
            return Err(PoissonError::Shape(format!("{} names for dimension {n}", names.len())));
        }
        for (i, row) in entries.iter().enumerate() {
            if row.len() != n {
                return Err(PoissonError::Shape(format!("row {i} has length {}", row.len())));
            }
            for (j, p) in row.iter().enumerate() {
                if p.nvars() != n {
                    return Err(PoissonError::Shape(format!(
                        "entry ({i}, {j}) has {} variables, expected {n}",
                        p.nvars()
                    )));
                }
                if *p != -&entries[j][i] {
                    return Err(PoissonError::NotAntisymmetric { i, j });
                }
            }
        }
        Ok(PoissonStructure { entries, names })
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn entry(&self, i: usize, j: usize) -> &MultiPoly {
        &self.entries[i][j]
    }

    pub fn entries(&self) -> &[Vec<MultiPoly>] {
        &self.entries
    }

    pub fn eval_exact(&self, x: &[Rational]) -> RationalMatrix {
        let n = self.dim();
        let mut m = RationalMatrix::zeros(n, n);
        for i in 0..n {
            for j in i + 1..n {
                let v = self.entries[i][j].eval(x);
                m[(j, i)] = -v.clone();
                m[(i, j)] = v;
            }
        }
        m
    }

    pub fn eval_f64(&self, x: &[f64]) -> DMatrix<f64> {
        let n = self.dim();
        let mut m = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in i + 1..n {
                let v = self.entries[i][j].eval_f64(x);
                m[(i, j)] = v;
                m[(j, i)] = -v;
            }
        }
        m
    }

    /// The vector field `J ∇F`, component `i` being `{x_i, F}`.
    pub fn hamiltonian_vector_field(&self, f: &MultiPoly) -> Result<Vec<MultiPoly>, PoissonError> {
        if f.nvars() != self.dim() {
            return Err(PolyError::DimensionMismatch {
                left: self.dim(),
                right: f.nvars(),
            }
            .into());
        }
        let grad = f.gradient();
        Ok(apply(&self.entries, &grad))
    }

    /// `{F, G} = ∇F · J ∇G`.
    pub fn bracket(&self, f: &MultiPoly, g: &MultiPoly) -> Result<MultiPoly, PoissonError> {
        let xg = self.hamiltonian_vector_field(g)?;
        let mut out = MultiPoly::zero(self.dim());
        for (df, v) in f.gradient().iter().zip(&xg) {
            if !df.is_zero() && !v.is_zero() {
                out = &out + &(df * v);
            }
        }
        Ok(out)
    }

    pub fn parse_poly(&self, text: &str) -> Result<MultiPoly, ParseError> {
        MultiPoly::parse(text, &self.names)
    }

    pub fn format_poly(&self, p: &MultiPoly) -> String {
        p.to_string_with(&self.names)
    }
}

fn apply(j: &[Vec<MultiPoly>], v: &[MultiPoly]) -> Vec<MultiPoly> {
    j.iter()
        .map(|row| {
            let nvars = v.first().map_or(0, MultiPoly::nvars);
            let mut s = MultiPoly::zero(nvars);
            for (a, b) in row.iter().zip(v) {
                if !a.is_zero() && !b.is_zero() {
                    s = &s + &(a * b);
                }
            }
            s
        })
        .collect()
}

/// `J^{lm} = C^{lm}_n x_n`.
pub fn lie_poisson_tensor(c: &StructureConstants, names: Vec<String>) -> Result<PoissonStructure, PoissonError> {
    let r = jacobi_check(c);
    if !r.is_zero() {
        return Err(LieError::Jacobi { residual: r }.into());
    }
    linear_tensor(c, names)
}

/// `J^{lm} = C^{lm}_n x_n` without the Jacobi check, so that a defective
/// table can still be inspected with [`jacobi_tensor_check`].
pub fn linear_tensor(c: &StructureConstants, names: Vec<String>) -> Result<PoissonStructure, PoissonError> {
    let n = c.dim();
    let mut entries = vec![vec![MultiPoly::zero(n); n]; n];
    for (i, j, k, v) in c.triples() {
        let t = MultiPoly::var(n, k).scale(&v);
        entries[i][j] = &entries[i][j] + &t;
        entries[j][i] = &entries[j][i] - &t;
    }
    PoissonStructure::new(entries, names)
}

pub fn from_spec(spec: &AlgebraSpec) -> Result<PoissonStructure, PoissonError> {
    lie_poisson_tensor(&spec.structure, spec.coordinate_names.clone())
}

/// Nonzero components of the cyclic sum
/// `J^{il} ∂_l J^{jk} + J^{jl} ∂_l J^{ki} + J^{kl} ∂_l J^{ij}` over
/// `i < j < k`. Empty exactly when `J` satisfies the Jacobi identity.
pub fn jacobi_tensor_check(j: &PoissonStructure) -> Vec<((usize, usize, usize), MultiPoly)> {
    let n = j.dim();
    let e = &j.entries;
    let d: Vec<Vec<Vec<MultiPoly>>> = e
        .iter()
        .map(|row| row.iter().map(MultiPoly::gradient).collect())
        .collect();
    let term = |a: usize, b: usize, c: usize| {
        let mut s = MultiPoly::zero(n);
        for l in 0..n {
            if !e[a][l].is_zero() && !d[b][c][l].is_zero() {
                s = &s + &(&e[a][l] * &d[b][c][l]);
            }
        }
        s
    };
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                let r = &(&term(a, b, c) + &term(b, c, a)) + &term(c, a, b);
                if !r.is_zero() {
                    out.push(((a, b, c), r));
                }
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub enum Point {
    Exact(Vec<Rational>),
    Float(Vec<f64>),
}

impl Point {
    pub fn len(&self) -> usize {
        match self {
            Point::Exact(v) => v.len(),
            Point::Float(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn to_f64(&self) -> Vec<f64> {
        match self {
            Point::Exact(v) => v.iter().map(to_f64).collect(),
            Point::Float(v) => v.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum NullBasis {
    Exact(Vec<Vec<Rational>>),
    Float(Vec<Vec<f64>>),
}

impl NullBasis {
    pub fn len(&self) -> usize {
        match self {
            NullBasis::Exact(v) => v.len(),
            NullBasis::Float(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RankReport {
    pub point: Point,
    pub rank: usize,
    pub null_basis: NullBasis,
    pub tolerance_used: Option<f64>,
}

/// Rank of a float matrix by singular-value thresholding, with an
/// orthonormal basis of the numerical kernel. Singular values at most
/// `tol * sigma_max` count as zero; a zero matrix has rank 0.
pub fn float_rank_and_kernel(m: &DMatrix<f64>, tol: f64) -> (usize, Vec<Vec<f64>>) {
    let n = m.ncols();
    if m.nrows() == 0 || n == 0 {
        return (0, (0..n).map(|i| unit(n, i)).collect());
    }
    let svd = m.clone().svd(false, true);
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    if smax == 0.0 {
        return (0, (0..n).map(|i| unit(n, i)).collect());
    }
    let thr = tol * smax;
    let vt = svd.v_t.expect("requested");
    let mut rank = 0;
    let mut kernel = Vec::new();
    for (i, s) in svd.singular_values.iter().enumerate() {
        if *s > thr {
            rank += 1;
        } else {
            kernel.push(vt.row(i).iter().copied().collect());
        }
    }
    // wide matrices: rows of V^T beyond min(m, n) are not returned, so
    // complete the kernel from the orthogonal complement of the row space
    if vt.nrows() < n {
        let rows: Vec<Vec<f64>> = (0..vt.nrows()).map(|i| vt.row(i).iter().copied().collect()).collect();
        kernel.extend(orthogonal_completion(&rows, n));
    }
    (rank, kernel)
}

fn unit(n: usize, i: usize) -> Vec<f64> {
    let mut v = vec![0.0; n];
    v[i] = 1.0;
    v
}

fn orthogonal_completion(rows: &[Vec<f64>], n: usize) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = rows.to_vec();
    let mut extra = Vec::new();
    for i in 0..n {
        let mut v = unit(n, i);
        for b in &basis {
            let d: f64 = v.iter().zip(b).map(|(x, y)| x * y).sum();
            for (x, y) in v.iter_mut().zip(b) {
                *x -= d * y;
            }
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-8 {
            v.iter_mut().for_each(|x| *x /= norm);
            basis.push(v.clone());
            extra.push(v);
        }
    }
    extra
}

/// Rank of `J` at `x`: exact for rational points (tolerance ignored),
/// singular-value thresholded for float points.
pub fn rank_at(j: &PoissonStructure, x: &Point, tol: f64) -> Result<RankReport, PoissonError> {
    if x.len() != j.dim() {
        return Err(PoissonError::Shape(format!(
            "point has {} coordinates, structure has dimension {}",
            x.len(),
            j.dim()
        )));
    }
    Ok(match x {
        Point::Exact(v) => {
            let m = j.eval_exact(v);
            let kernel = m.kernel();
            RankReport {
                point: x.clone(),
                rank: j.dim() - kernel.len(),
                null_basis: NullBasis::Exact(kernel),
                tolerance_used: None,
            }
        }
        Point::Float(v) => {
            let (rank, kernel) = float_rank_and_kernel(&j.eval_f64(v), tol);
            RankReport {
                point: x.clone(),
                rank,
                null_basis: NullBasis::Float(kernel),
                tolerance_used: Some(tol),
            }
        }
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateStatus {
    ExactIdentity,
    Sampled,
    RestrictedToLocus,
    NotCertified,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Residual {
    /// Components of `J ∇C` (restricted to the locus when there is one).
    Exact(Vec<MultiPoly>),
    /// Largest relative float residual over the sample points.
    Float(f64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct CasimirCertificate {
    pub casimir: MultiPoly,
    pub status: CertificateStatus,
    pub locus: Option<Vec<String>>,
    pub residual: Residual,
}

impl CasimirCertificate {
    pub fn certified(&self) -> bool {
        self.status != CertificateStatus::NotCertified
    }
}

/// Certifies `C` as a Casimir when `J ∇C` is the zero polynomial vector.
pub fn casimir_check_exact(j: &PoissonStructure, c: &MultiPoly) -> Result<CasimirCertificate, PoissonError> {
    let r = j.hamiltonian_vector_field(c)?;
    let ok = r.iter().all(MultiPoly::is_zero);
    Ok(CasimirCertificate {
        casimir: c.clone(),
        status: if ok {
            CertificateStatus::ExactIdentity
        } else {
            CertificateStatus::NotCertified
        },
        locus: None,
        residual: Residual::Exact(r),
    })
}

/// Float smoke test of `J ∇C = 0` at `count` seeded points in `[-2, 2]^n`.
/// The residual of component `i` is measured relative to
/// `sum_j |J_ij| |∂_j C|`; the check passes below `1e-10`.
pub fn casimir_check_sampled(
    j: &PoissonStructure,
    c: &MultiPoly,
    count: usize,
    seed: u64,
) -> Result<CasimirCertificate, PoissonError> {
    const THRESHOLD: f64 = 1e-10;
    if c.nvars() != j.dim() {
        return Err(PolyError::DimensionMismatch {
            left: j.dim(),
            right: c.nvars(),
        }
        .into());
    }
    let n = j.dim();
    let grad: Vec<_> = c.gradient().iter().map(MultiPoly::compile).collect();
    let mut rng = sampling::rng(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..count {
        let x = sampling::float_point(&mut rng, n);
        let m = j.eval_f64(&x);
        let g: Vec<f64> = grad.iter().map(|p| p.eval(&x)).collect();
        for i in 0..n {
            let (mut num, mut den) = (0.0, 0.0);
            for (k, gk) in g.iter().enumerate() {
                num += m[(i, k)] * gk;
                den += (m[(i, k)] * gk).abs();
            }
            if den > 0.0 {
                worst = worst.max(num.abs() / den);
            }
        }
    }
    Ok(CasimirCertificate {
        casimir: c.clone(),
        status: if worst < THRESHOLD {
            CertificateStatus::Sampled
        } else {
            CertificateStatus::NotCertified
        },
        locus: None,
        residual: Residual::Float(worst),
    })
}

/// A subset of phase space given by substitutions `x_i = image_i`, where the
/// images are polynomials in the original coordinates plus auxiliary
/// parameters (such as `lambda` in `b = lambda z`). Coordinates that are
/// not substituted remain free.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Locus {
    pub name: String,
    pub equations: Vec<String>,
    nvars: usize,
    aux_names: Vec<String>,
    images: Vec<MultiPoly>,
}

impl Locus {
    /// The whole space.
    pub fn generic(nvars: usize) -> Self {
        Locus {
            name: "generic".into(),
            equations: Vec::new(),
            nvars,
            aux_names: Vec::new(),
            images: (0..nvars).map(|i| MultiPoly::var(nvars, i)).collect(),
        }
    }

    pub fn origin(nvars: usize) -> Self {
        Locus {
            name: "origin".into(),
            equations: vec!["all=0".into()],
            nvars,
            aux_names: Vec::new(),
            images: vec![MultiPoly::zero(nvars); nvars],
        }
    }

    pub fn aux_names(&self) -> &[String] {
        &self.aux_names
    }

    /// Variable count of the images (coordinates followed by auxiliaries).
    pub fn image_nvars(&self) -> usize {
        self.nvars + self.aux_names.len()
    }

    pub fn images(&self) -> &[MultiPoly] {
        &self.images
    }

    /// Solves affine linear equations `sum_j a_j x_j + c = 0` in the
    /// coordinates, expressing pivot coordinates through the free ones.
    pub fn from_linear_equations(name: &str, nvars: usize, equations: &[MultiPoly]) -> Result<Self, PoissonError> {
        let mut rows = Vec::with_capacity(equations.len());
        for e in equations {
            if e.nvars() != nvars {
                return Err(PoissonError::Locus(format!(
                    "equation has {} variables, expected {nvars}",
                    e.nvars()
                )));
            }
            if e.degree() > 1 {
                return Err(PoissonError::Locus("equation is not linear".into()));
            }
            let mut row = vec![Rational::zero(); nvars + 1];
            for (m, v) in e.terms() {
                match m.exponents().iter().position(|&x| x == 1) {
                    Some(i) => row[i] = v.clone(),
                    None => row[nvars] = -v.clone(),
                }
            }
            rows.push(row);
        }
        let images = if rows.is_empty() {
            (0..nvars).map(|i| MultiPoly::var(nvars, i)).collect()
        } else {
            let m = RationalMatrix::from_rows(rows)?;
            let (r, pivots) = m.rref();
            if pivots.contains(&nvars) {
                return Err(PoissonError::Locus("inconsistent equations".into()));
            }
            let mut images: Vec<MultiPoly> = (0..nvars).map(|i| MultiPoly::var(nvars, i)).collect();
            for (row, &p) in pivots.iter().enumerate() {
                let mut img = MultiPoly::constant(nvars, r[(row, nvars)].clone());
                for f in (0..nvars).filter(|f| !pivots.contains(f)) {
                    let a = &r[(row, f)];
                    if !a.is_zero() {
                        img = &img - &MultiPoly::var(nvars, f).scale(a);
                    }
                }
                images[p] = img;
            }
            images
        };
        Ok(Locus {
            name: name.to_string(),
            equations: Vec::new(),
            nvars,
            aux_names: Vec::new(),
            images,
        })
    }

    /// Parses comma-separated equations such as `z1=0, z2=0` or
    /// `b=lambda*z`. A name with indexed coordinates (`z` for `z1, z2, z3`)
    /// expands componentwise. Identifiers that are not coordinates become
    /// auxiliary parameters. Equations must be affine linear in the
    /// coordinates, or each of the form `coordinate = expression` with no
    /// substituted coordinate on a right-hand side.
    pub fn parse(name: &str, names: &[String], text: &str) -> Result<Self, PoissonError> {
        let mut eqs: Vec<(String, String)> = Vec::new();
        for part in text.split([',', ';']).map(str::trim).filter(|s| !s.is_empty()) {
            let (lhs, rhs) = part
                .split_once('=')
                .ok_or_else(|| PoissonError::Locus(format!("expected `lhs=rhs`, got {part:?}")))?;
            eqs.extend(expand_group(names, lhs.trim(), rhs.trim())?);
        }
        if eqs.is_empty() {
            return Err(PoissonError::Locus("no equations".into()));
        }
        let mut aux: Vec<String> = Vec::new();
        let parse_in = |s: &str, aux: &mut Vec<String>| -> Result<MultiPoly, PoissonError> {
            loop {
                let all: Vec<&str> = names.iter().chain(aux.iter()).map(String::as_str).collect();
                match MultiPoly::parse(s, &all) {
                    Ok(p) => return Ok(p),
                    Err(ParseError::UnknownVariable { name, .. }) => aux.push(name),
                    Err(e) => return Err(e.into()),
                }
            }
        };
        let mut parsed = Vec::new();
        for (l, r) in &eqs {
            let lp = parse_in(l, &mut aux)?;
            let rp = parse_in(r, &mut aux)?;
            parsed.push((lp, rp));
        }
        let n = names.len();
        let total = n + aux.len();
        let widen = |p: &MultiPoly| -> MultiPoly {
            let map: Vec<usize> = (0..p.nvars()).collect();
            p.embed(total, &map).expect("widening")
        };
        let parsed: Vec<(MultiPoly, MultiPoly)> = parsed.iter().map(|(l, r)| (widen(l), widen(r))).collect();
        let equations: Vec<String> = eqs.iter().map(|(l, r)| format!("{l}={r}")).collect();

        let uses_aux = |p: &MultiPoly| p.terms().any(|(m, _)| m.exponents()[n..].iter().any(|&e| e > 0));
        let diffs: Vec<MultiPoly> = parsed.iter().map(|(l, r)| l - r).collect();
        if diffs.iter().all(|d| !uses_aux(d) && d.degree() <= 1) {
            let narrowed: Vec<MultiPoly> = diffs
                .iter()
                .map(|d| MultiPoly::from_terms(n, d.terms().map(|(m, v)| (m.exponents()[..n].to_vec(), v.clone()))))
                .collect();
            let mut locus = Self::from_linear_equations(name, n, &narrowed)?;
            if !aux.is_empty() {
                // unused auxiliaries can only come from cancelled terms
                let map: Vec<usize> = (0..n).collect();
                locus.images = locus
                    .images
                    .iter()
                    .map(|p| p.embed(total, &map).expect("widening"))
                    .collect();
                locus.aux_names = aux;
            }
            locus.equations = equations;
            return Ok(locus);
        }

        let mut images: Vec<MultiPoly> = (0..n).map(|i| MultiPoly::var(total, i)).collect();
        let mut substituted = BTreeSet::new();
        for (l, r) in &parsed {
            let target = (0..n).find(|&i| *l == MultiPoly::var(total, i)).ok_or_else(|| {
                PoissonError::Locus("nonlinear equations must have a single coordinate on the left".into())
            })?;
            if !substituted.insert(target) {
                return Err(PoissonError::Locus(format!("{} is constrained twice", names[target])));
            }
            images[target] = r.clone();
        }
        for (_, r) in &parsed {
            for (m, _) in r.terms() {
                if let Some(i) = substituted.iter().find(|&&i| m.exponents()[i] > 0) {
                    return Err(PoissonError::Locus(format!(
                        "{} appears on a right-hand side after being substituted",
                        names[*i]
                    )));
                }
            }
        }
        Ok(Locus {
            name: name.to_string(),
            equations,
            nvars: n,
            aux_names: aux,
            images,
        })
    }

    /// Pulls a polynomial in the coordinates back to the locus variables.
    pub fn restrict(&self, p: &MultiPoly) -> Result<MultiPoly, PoissonError> {
        Ok(p.substitute(&self.images)?)
    }

    /// A seeded random rational point of the locus.
    pub fn sample_point(&self, rng: &mut sampling::SampleRng) -> Vec<Rational> {
        let params = sampling::rational_point(rng, self.image_nvars());
        self.images.iter().map(|p| p.eval(&params)).collect()
    }
}

fn expand_group(names: &[String], lhs: &str, rhs: &str) -> Result<Vec<(String, String)>, PoissonError> {
    if names.iter().any(|n| n == lhs) {
        return Ok(vec![(lhs.to_string(), rhs.to_string())]);
    }
    let size_of = |g: &str| -> usize {
        (1..)
            .take_while(|i| names.iter().any(|n| *n == format!("{g}{i}")))
            .count()
    };
    let k = size_of(lhs);
    if k == 0 {
        return Ok(vec![(lhs.to_string(), rhs.to_string())]);
    }
    let mut out = Vec::with_capacity(k);
    for i in 1..=k {
        let mut r = String::new();
        let mut chars = rhs.char_indices().peekable();
        while let Some((start, ch)) = chars.next() {
            if ch.is_ascii_alphabetic() || ch == '_' {
                let mut end = start + ch.len_utf8();
                while let Some(&(p, c)) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        end = p + c.len_utf8();
                        chars.next();
                    } else {
                        break;
                    }
                }
                let ident = &rhs[start..end];
                let is_coord = names.iter().any(|n| n == ident);
                let gk = if is_coord { 0 } else { size_of(ident) };
                if gk == k {
                    r.push_str(&format!("{ident}{i}"));
                } else if gk != 0 {
                    return Err(PoissonError::Locus(format!(
                        "{ident} has {gk} components, {lhs} has {k}"
                    )));
                } else {
                    r.push_str(ident);
                }
            } else {
                r.push(ch);
            }
        }
        out.push((format!("{lhs}{i}"), r));
    }
    Ok(out)
}

/// Certifies `C` as a subcasimir on `locus`: `J|_locus ∇C|_locus` must be
/// the zero polynomial in the locus variables.
pub fn subcasimir_check(
    j: &PoissonStructure,
    locus: &Locus,
    c: &MultiPoly,
) -> Result<CasimirCertificate, PoissonError> {
    if locus.nvars != j.dim() || c.nvars() != j.dim() {
        return Err(PoissonError::Shape(
            "locus, tensor and polynomial dimensions differ".into(),
        ));
    }
    let jr: Vec<Vec<MultiPoly>> = j
        .entries
        .iter()
        .map(|row| row.iter().map(|p| locus.restrict(p)).collect::<Result<_, _>>())
        .collect::<Result<_, _>>()?;
    let gr: Vec<MultiPoly> = c
        .gradient()
        .iter()
        .map(|p| locus.restrict(p))
        .collect::<Result<_, _>>()?;
    let r = apply(&jr, &gr);
    let ok = r.iter().all(MultiPoly::is_zero);
    let status = match (ok, locus.equations.is_empty()) {
        (false, _) => CertificateStatus::NotCertified,
        (true, true) => CertificateStatus::ExactIdentity,
        (true, false) => CertificateStatus::RestrictedToLocus,
    };
    Ok(CasimirCertificate {
        casimir: c.clone(),
        status,
        locus: (!locus.equations.is_empty()).then(|| locus.equations.clone()),
        residual: Residual::Exact(r),
    })
}

/// Basis of all polynomial Casimirs of degree `1..=max_degree`, in
/// canonical reduced graded-lex form. Computed as the exact kernel of the
/// linear map `C -> J ∇C` on monomial coefficients.
pub fn find_polynomial_casimirs(j: &PoissonStructure, max_degree: u32) -> Vec<MultiPoly> {
    let n = j.dim();
    let homogeneous_degree = {
        let degs: BTreeSet<Option<u32>> = j
            .entries
            .iter()
            .flatten()
            .filter(|p| !p.is_zero())
            .map(MultiPoly::homogeneous_degree)
            .collect();
        match degs.len() {
            0 => Some(0),
            1 => *degs.iter().next().expect("one"),
            _ => None,
        }
    };
    let blocks: Vec<Vec<u32>> = if homogeneous_degree.is_some() {
        (1..=max_degree).map(|d| vec![d]).collect()
    } else {
        vec![(1..=max_degree).collect()]
    };
    let mut found = Vec::new();
    for degrees in blocks {
        let monos: Vec<Monomial> = degrees.iter().flat_map(|&d| monomials_of_degree(n, d)).collect();
        let mut rows: BTreeMap<(usize, Monomial), SparseRow> = BTreeMap::new();
        for (col, m) in monos.iter().enumerate() {
            let p = MultiPoly::from_terms(n, [(m.exponents().to_vec(), Rational::one())]);
            for (i, comp) in apply(&j.entries, &p.gradient()).into_iter().enumerate() {
                for (om, v) in comp.terms() {
                    rows.entry((i, om.clone())).or_default().insert(col, v.clone());
                }
            }
        }
        for v in sparse_kernel(monos.len(), rows.into_values()) {
            found.push(MultiPoly::from_terms(
                n,
                v.into_iter().map(|(c, x)| (monos[c].exponents().to_vec(), x)),
            ));
        }
    }
    canonical_span(&found)
}

/// Number of functionally independent polynomials among `polys`: the rank of
/// their gradients at a seeded random rational point.
pub fn independent_count(polys: &[MultiPoly], seed: u64) -> usize {
    let Some(n) = polys.first().map(MultiPoly::nvars) else {
        return 0;
    };
    let mut rng = sampling::rng(seed);
    let x = sampling::rational_point(&mut rng, n);
    let rows: Vec<Vec<Rational>> = polys
        .iter()
        .map(|p| p.gradient().iter().map(|g| g.eval(&x)).collect())
        .collect();
    RationalMatrix::from_rows(rows).map(|m| m.rank()).unwrap_or(0)
}

/// Whether the gradients of `casimirs` at `x` span exactly `ker J(x)`.
pub fn gradients_span_kernel(j: &PoissonStructure, casimirs: &[MultiPoly], x: &[Rational]) -> bool {
    let kernel = j.eval_exact(x).kernel();
    let grads: Vec<Vec<Rational>> = casimirs
        .iter()
        .map(|p| p.gradient().iter().map(|g| g.eval(x)).collect())
        .collect();
    let rank_of = |rows: Vec<Vec<Rational>>| {
        if rows.is_empty() {
            0
        } else {
            RationalMatrix::from_rows(rows).map(|m| m.rank()).unwrap_or(usize::MAX)
        }
    };
    let k = kernel.len();
    let g = rank_of(grads.clone());
    let both = rank_of(kernel.into_iter().chain(grads).collect());
    k == g && g == both
}

#[derive(Clone, Debug, PartialEq)]
pub struct FlowReport {
    /// States at step `0, record_every, 2 * record_every, ...` and the last step.
    pub trajectory: Vec<Vec<f64>>,
    pub final_state: Vec<f64>,
    /// `max_t |C(x_t) - C(x_0)|` per supplied Casimir.
    pub casimir_drift: Vec<f64>,
    pub steps: usize,
}

/// Fixed-step classical RK4 for `dx/dt = J(x) ∇H(x)`.
pub fn integrate_flow(
    j: &PoissonStructure,
    h: &MultiPoly,
    x0: &[f64],
    dt: f64,
    steps: usize,
    casimirs: &[MultiPoly],
    record_every: usize,
) -> Result<FlowReport, PoissonError> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(PoissonError::BadStep(dt));
    }
    if x0.len() != j.dim() {
        return Err(PoissonError::Shape(format!(
            "initial state has {} coordinates",
            x0.len()
        )));
    }
    let field: Vec<_> = j.hamiltonian_vector_field(h)?.iter().map(MultiPoly::compile).collect();
    let cas: Vec<_> = casimirs.iter().map(MultiPoly::compile).collect();
    let c0: Vec<f64> = cas.iter().map(|c| c.eval(x0)).collect();
    let f = |x: &[f64]| -> Vec<f64> { field.iter().map(|p| p.eval(x)).collect() };
    let axpy = |x: &[f64], a: f64, k: &[f64]| -> Vec<f64> { x.iter().zip(k).map(|(x, k)| x + a * k).collect() };
    let record_every = record_every.max(1);
    let mut x = x0.to_vec();
    let mut trajectory = vec![x.clone()];
    let mut drift = vec![0.0f64; cas.len()];
    for step in 1..=steps {
        let k1 = f(&x);
        let k2 = f(&axpy(&x, dt / 2.0, &k1));
        let k3 = f(&axpy(&x, dt / 2.0, &k2));
        let k4 = f(&axpy(&x, dt, &k3));
        for i in 0..x.len() {
            x[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(PoissonError::NonFinite { step });
        }
        for (d, (c, v0)) in drift.iter_mut().zip(cas.iter().zip(&c0)) {
            *d = d.max((c.eval(&x) - v0).abs());
        }
        if step % record_every == 0 || step == steps {
            trajectory.push(x.clone());
        }
    }
    Ok(FlowReport {
        trajectory,
        final_state: x,
        casimir_drift: drift,
        steps,
    })
}

/// A locus of a rank scan with the candidate (sub)Casimirs to certify on it.
#[derive(Clone, Debug)]
pub struct ScanLocus {
    pub locus: Locus,
    pub candidates: Vec<MultiPoly>,
}

/// The loci on which rank changes for the catalog algebras, with the
/// Casimirs and subcasimirs expected there.
pub fn standard_loci(spec: &AlgebraSpec) -> Result<Vec<ScanLocus>, PoissonError> {
    let names = &spec.coordinate_names;
    let n = spec.dim();
    let p = |s: &str| MultiPoly::parse(s, names).map_err(PoissonError::from);
    let locus = |name: &str, eq: &str| Locus::parse(name, names, eq);
    let generic = |c: &[&str]| -> Result<ScanLocus, PoissonError> {
        Ok(ScanLocus {
            locus: Locus::generic(n),
            candidates: c.iter().map(|s| p(s)).collect::<Result<_, _>>()?,
        })
    };
    let origin = ScanLocus {
        locus: Locus::origin(n),
        candidates: Vec::new(),
    };
    let base = spec.name.split(':').next().unwrap_or("");
    let loci = match base {
        "so3" => vec![generic(&["1/2*(mu1^2 + mu2^2 + mu3^2)"])?, origin],
        "so21" => vec![generic(&["a1^2 + a2^2 - a3^2"])?, origin],
        "sl2" => vec![generic(&["a2^2 - 4*a1*a3"])?, origin],
        "gravity" => vec![
            generic(&["mu1*z1 + mu2*z2 + mu3*z3", "z1^2 + z2^2 + z3^2"])?,
            ScanLocus {
                locus: locus("z=0", "z=0")?,
                candidates: vec![p("mu1^2 + mu2^2 + mu3^2")?],
            },
            origin,
        ],
        "underwater" => vec![
            generic(&["b1*z1 + b2*z2 + b3*z3", "z1^2 + z2^2 + z3^2", "b1^2 + b2^2 + b3^2"])?,
            ScanLocus {
                locus: locus("b=lambda*z", "b=lambda*z")?,
                candidates: vec![p("mu1*z1 + mu2*z2 + mu3*z3")?, p("mu1*b1 + mu2*b2 + mu3*b3")?],
            },
            ScanLocus {
                locus: locus("z=0", "z=0")?,
                candidates: vec![p("mu1*b1 + mu2*b2 + mu3*b3")?, p("b1^2 + b2^2 + b3^2")?],
            },
            ScanLocus {
                locus: locus("z=b=0", "z=0, b=0")?,
                candidates: vec![p("mu1^2 + mu2^2 + mu3^2")?],
            },
            origin,
        ],
        "moments" => {
            let cands = crate::moments::known_casimirs(n)
                .into_iter()
                .map(|(_, s)| p(&s))
                .collect::<Result<Vec<_>, _>>()?;
            vec![
                ScanLocus {
                    locus: Locus::generic(n),
                    candidates: cands,
                },
                origin,
            ]
        }
        _ => vec![generic(&[])?, origin],
    };
    Ok(loci)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanRow {
    pub locus: String,
    pub equations: Vec<String>,
    pub point: Vec<String>,
    pub rank: usize,
    pub corank: usize,
    pub float_rank: usize,
    pub float_agrees: bool,
    pub casimirs: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanReport {
    pub algebra: String,
    pub seed: u64,
    pub tolerance: f64,
    pub rows: Vec<ScanRow>,
}

#[derive(Clone, Debug)]
pub enum Sampler {
    /// `count` seeded random rational points of the whole space.
    RandomPoints {
        count: usize,
    },
    Loci(Vec<ScanLocus>),
}

/// Rank table over the sampler's points: exact rank, float rank at `tol`,
/// and the candidates certified on each locus. Rows are sorted by
/// descending rank; ties keep sampler order.
pub fn rank_scan(
    j: &PoissonStructure,
    algebra: &str,
    sampler: &Sampler,
    seed: u64,
    tol: f64,
) -> Result<ScanReport, PoissonError> {
    let n = j.dim();
    let loci: Vec<ScanLocus> = match sampler {
        Sampler::RandomPoints { count } => (0..*count)
            .map(|i| ScanLocus {
                locus: Locus {
                    name: format!("sample-{i}"),
                    ..Locus::generic(n)
                },
                candidates: Vec::new(),
            })
            .collect(),
        Sampler::Loci(l) => l.clone(),
    };
    let mut rng = sampling::rng(seed);
    let mut rows = Vec::with_capacity(loci.len());
    for sl in &loci {
        let x = sl.locus.sample_point(&mut rng);
        let exact = rank_at(j, &Point::Exact(x.clone()), tol)?;
        let float = rank_at(j, &Point::Float(x.iter().map(to_f64).collect()), tol)?;
        let mut casimirs = Vec::new();
        for c in &sl.candidates {
            if subcasimir_check(j, &sl.locus, c)?.certified() {
                casimirs.push(j.format_poly(c));
            }
        }
        rows.push(ScanRow {
            locus: sl.locus.name.clone(),
            equations: sl.locus.equations.clone(),
            point: x.iter().map(ToString::to_string).collect(),
            rank: exact.rank,
            corank: n - exact.rank,
            float_rank: float.rank,
            float_agrees: float.rank == exact.rank,
            casimirs,
        });
    }
    rows.sort_by_key(|r| std::cmp::Reverse(r.rank));
    Ok(ScanReport {
        algebra: algebra.to_string(),
        seed,
        tolerance: tol,
        rows,
    })
}
