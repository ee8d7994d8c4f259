//! Orbit geometry of a linear action on `V^n`: orbit tangents, the
//! decomposition `V = T ⊕ N⁰ ⊕ N¹`, Hilbert maps, R-matrices and stratum
//! classification.
//!
//! At a point `φ` with isotropy `H`, `T` is the orbit tangent
//! `{ξ·φ}`, `N⁰` the `H`-fixed vectors orthogonal to `T`, and `N¹` the rest
//! of the normal space. Orthogonality is Euclidean.

use nalgebra::{DMatrix, DVector};
use num_traits::{One, Signed, Zero};

pub use crate::liealg::Representation;
use crate::liealg::{catalog, so3_vector_rep, so_n, AlgebraSpec, LieError, StructureConstants};
use crate::poisson::float_rank_and_kernel;
use crate::polyring::{
    int, poly_matrix_trace_powers, rat, to_f64, MultiPoly, ParseError, PolyError, Rational, RationalMatrix,
};

#[derive(Debug, thiserror::Error)]
pub enum StrataError {
    #[error("point has {found} coordinates, representation acts on {expected}")]
    PointLength { expected: usize, found: usize },
    #[error("isotropy generator {0} does not annihilate the point")]
    NotIsotropy(usize),
    #[error("invariant {theta} is not annihilated by generator {generator}")]
    NotInvariant { theta: usize, generator: usize },
    #[error("R-hat entry ({0}, {1}) does not match the gradient Gram matrix")]
    RHatMismatch(usize, usize),
    #[error("unknown representation {name:?}; available: so3-vector, so2-plane, so4-adjoint, coadjoint:<algebra>")]
    UnknownRepresentation { name: String },
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

impl From<ParseError> for StrataError {
    fn from(e: ParseError) -> Self {
        StrataError::Poly(e.into())
    }
}

/// Invariant polynomials `θ_1..θ_q`, optionally with the R-matrix written
/// in the invariants, `R̂_ab(θ)`, as polynomials in `q` variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertBasis {
    pub thetas: Vec<MultiPoly>,
    pub r_hat: Option<Vec<Vec<MultiPoly>>>,
}

impl HilbertBasis {
    pub fn new(thetas: Vec<MultiPoly>) -> Self {
        HilbertBasis { thetas, r_hat: None }
    }

    pub fn parse<S: AsRef<str>>(texts: &[S], names: &[String]) -> Result<Self, StrataError> {
        let thetas = texts
            .iter()
            .map(|t| MultiPoly::parse(t.as_ref(), names))
            .collect::<Result<_, _>>()?;
        Ok(Self::new(thetas))
    }

    pub fn len(&self) -> usize {
        self.thetas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.thetas.is_empty()
    }

    /// Checks that `R̂(θ(φ))` equals `∇θ_a · ∇θ_b` as polynomials in `φ`.
    pub fn verify_r_hat(&self) -> Result<(), StrataError> {
        let Some(rh) = &self.r_hat else {
            return Ok(());
        };
        let gram = gram_polys(&self.thetas);
        for (a, row) in rh.iter().enumerate() {
            for (b, p) in row.iter().enumerate() {
                if p.substitute(&self.thetas)? != gram[a][b] {
                    return Err(StrataError::RHatMismatch(a, b));
                }
            }
        }
        Ok(())
    }
}

fn gram_polys(thetas: &[MultiPoly]) -> Vec<Vec<MultiPoly>> {
    let grads: Vec<Vec<MultiPoly>> = thetas.iter().map(MultiPoly::gradient).collect();
    grads
        .iter()
        .map(|ga| {
            grads
                .iter()
                .map(|gb| {
                    let nvars = ga.first().map_or(0, MultiPoly::nvars);
                    ga.iter()
                        .zip(gb)
                        .fold(MultiPoly::zero(nvars), |acc, (x, y)| &acc + &(x * y))
                })
                .collect()
        })
        .collect()
}

fn check_len(rep: &Representation, n: usize) -> Result<(), StrataError> {
    if n != rep.dim_v {
        return Err(StrataError::PointLength {
            expected: rep.dim_v,
            found: n,
        });
    }
    Ok(())
}

/// Columns `T^a φ`.
fn generator_images(rep: &Representation, phi: &[Rational]) -> Vec<Vec<Rational>> {
    rep.generators.iter().map(|t| t.mul_vec(phi)).collect()
}

/// Basis of the orbit tangent `span{T^a φ}`.
pub fn orbit_tangent(rep: &Representation, phi: &[Rational]) -> Result<Vec<Vec<Rational>>, StrataError> {
    check_len(rep, phi.len())?;
    let images = generator_images(rep, phi);
    if images.is_empty() {
        return Ok(Vec::new());
    }
    Ok(RationalMatrix::from_rows(images)?.row_space())
}

/// Basis of the isotropy algebra `{ξ : Σ ξ_a T^a φ = 0}`.
pub fn isotropy_generators(rep: &Representation, phi: &[Rational]) -> Result<Vec<Vec<Rational>>, StrataError> {
    check_len(rep, phi.len())?;
    let d = rep.generators.len();
    if d == 0 {
        return Ok(Vec::new());
    }
    let cols = generator_images(rep, phi);
    Ok(RationalMatrix::from_columns(rep.dim_v, &cols).kernel())
}

/// Subspace bases of the decomposition `V = T ⊕ N⁰ ⊕ N¹`.
#[derive(Clone, Debug, PartialEq)]
pub struct Decomposition<T> {
    pub tangent: Vec<Vec<T>>,
    pub n0: Vec<Vec<T>>,
    pub n1: Vec<Vec<T>>,
}

fn complement(rows: &[Vec<Rational>], n: usize) -> Vec<Vec<Rational>> {
    if rows.is_empty() {
        return (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { Rational::one() } else { Rational::zero() })
                    .collect()
            })
            .collect();
    }
    RationalMatrix::from_rows(rows.to_vec())
        .expect("equal lengths")
        .kernel()
}

/// Exact decomposition at a rational point. Each isotropy generator is
/// checked to annihilate `φ`.
pub fn normal_decomposition(
    rep: &Representation,
    isotropy: &[Vec<Rational>],
    phi: &[Rational],
) -> Result<Decomposition<Rational>, StrataError> {
    check_len(rep, phi.len())?;
    let n = rep.dim_v;
    let xs: Vec<RationalMatrix> = isotropy.iter().map(|xi| rep.element_matrix(xi)).collect();
    for (i, x) in xs.iter().enumerate() {
        if !x.mul_vec(phi).iter().all(Zero::is_zero) {
            return Err(StrataError::NotIsotropy(i));
        }
    }
    let tangent = orbit_tangent(rep, phi)?;
    let normal = complement(&tangent, n);
    // N⁰: combinations Σ c_k ν_k fixed by every isotropy generator
    let n0 = if normal.is_empty() {
        Vec::new()
    } else {
        let mut rows = Vec::new();
        for x in &xs {
            let imgs: Vec<Vec<Rational>> = normal.iter().map(|v| x.mul_vec(v)).collect();
            for i in 0..n {
                rows.push(imgs.iter().map(|img| img[i].clone()).collect());
            }
        }
        let coeffs = if rows.is_empty() {
            complement(&[], normal.len())
        } else {
            RationalMatrix::from_rows(rows)?.kernel()
        };
        coeffs
            .iter()
            .map(|c| {
                let mut v = vec![Rational::zero(); n];
                for (ck, nu) in c.iter().zip(&normal) {
                    for (vi, ni) in v.iter_mut().zip(nu) {
                        *vi += ck * ni;
                    }
                }
                v
            })
            .collect()
    };
    let mut both = tangent.clone();
    both.extend(n0.iter().cloned());
    let n1 = if both.len() == n {
        Vec::new()
    } else {
        complement(&both, n)
    };
    Ok(Decomposition { tangent, n0, n1 })
}

/// Orthonormal columns spanning the range of `m`, with singular values at
/// most `tol * max(1, sigma_max)` treated as zero. The absolute floor makes
/// points very close to a fixed point behave like the fixed point itself.
fn float_range(m: &DMatrix<f64>, tol: f64) -> Vec<Vec<f64>> {
    if m.ncols() == 0 || m.nrows() == 0 {
        return Vec::new();
    }
    let svd = m.clone().svd(true, false);
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let thr = tol * smax.max(1.0);
    let u = svd.u.expect("requested");
    svd.singular_values
        .iter()
        .enumerate()
        .filter(|(_, s)| **s > thr)
        .map(|(i, _)| u.column(i).iter().copied().collect())
        .collect()
}

/// Orthonormal basis of the orthogonal complement of `basis` in `R^n`.
fn float_complement(basis: &[Vec<f64>], n: usize) -> Vec<Vec<f64>> {
    if basis.is_empty() {
        return (0..n)
            .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
    }
    let m = DMatrix::from_fn(basis.len(), n, |i, j| basis[i][j]);
    let (_, k) = float_rank_and_kernel(&m, 1e-12);
    k
}

/// Float decomposition with orthonormal bases; isotropy is computed from
/// the numerical kernel of `ξ ↦ Σ ξ_a T^a φ`.
pub fn normal_decomposition_f64(
    rep: &Representation,
    phi: &[f64],
    tol: f64,
) -> Result<Decomposition<f64>, StrataError> {
    if phi.len() != rep.dim_v {
        return Err(StrataError::PointLength {
            expected: rep.dim_v,
            found: phi.len(),
        });
    }
    let n = rep.dim_v;
    let d = rep.generators.len();
    let gens: Vec<DMatrix<f64>> = rep.generators.iter().map(RationalMatrix::to_f64).collect();
    let p = DVector::from_column_slice(phi);
    let a = DMatrix::from_fn(n, d, |i, j| (&gens[j] * &p)[i]);
    let tangent = float_range(&a, tol);
    let scale = a.iter().fold(0.0f64, |m, x| m.max(x.abs())).max(1.0);
    // isotropy: right singular vectors of A with small singular values
    let iso: Vec<Vec<f64>> = if d == 0 {
        Vec::new()
    } else {
        let svd = a.clone().svd(false, true);
        let vt = svd.v_t.expect("requested");
        let mut k: Vec<Vec<f64>> = svd
            .singular_values
            .iter()
            .enumerate()
            .filter(|(_, s)| **s <= tol * scale)
            .map(|(i, _)| vt.row(i).iter().copied().collect())
            .collect();
        if vt.nrows() < d {
            let rows: Vec<Vec<f64>> = (0..vt.nrows()).map(|i| vt.row(i).iter().copied().collect()).collect();
            k.extend(float_complement(&rows, d));
        }
        k
    };
    let normal = float_complement(&tangent, n);
    let n0 = if normal.is_empty() {
        Vec::new()
    } else if iso.is_empty() {
        normal.clone()
    } else {
        let nmat = DMatrix::from_fn(n, normal.len(), |i, j| normal[j][i]);
        let mut rows = DMatrix::zeros(n * iso.len(), normal.len());
        for (h, xi) in iso.iter().enumerate() {
            let mut x = DMatrix::zeros(n, n);
            for (c, g) in xi.iter().zip(&gens) {
                x += g * *c;
            }
            let img = x * &nmat;
            rows.view_mut((h * n, 0), (n, normal.len())).copy_from(&img);
        }
        let svd = rows.clone().svd(false, true);
        let vt = svd.v_t.expect("requested");
        let mut coeffs: Vec<Vec<f64>> = svd
            .singular_values
            .iter()
            .enumerate()
            .filter(|(_, s)| **s <= tol)
            .map(|(i, _)| vt.row(i).iter().copied().collect())
            .collect();
        if vt.nrows() < normal.len() {
            let r: Vec<Vec<f64>> = (0..vt.nrows()).map(|i| vt.row(i).iter().copied().collect()).collect();
            coeffs.extend(float_complement(&r, normal.len()));
        }
        coeffs
            .iter()
            .map(|c| {
                (0..n)
                    .map(|i| c.iter().zip(&normal).map(|(ck, nu)| ck * nu[i]).sum())
                    .collect()
            })
            .collect()
    };
    let mut both = tangent.clone();
    both.extend(n0.iter().cloned());
    let n1 = if both.len() >= n {
        Vec::new()
    } else {
        float_complement(&both, n)
    };
    Ok(Decomposition { tangent, n0, n1 })
}

/// `(θ_1(φ), ..., θ_q(φ))`.
pub fn hilbert_map(basis: &HilbertBasis, phi: &[Rational]) -> Vec<Rational> {
    basis.thetas.iter().map(|t| t.eval(phi)).collect()
}

/// Gram matrix `R_ab = Σ_i ∂_i θ_a ∂_i θ_b` at `φ`, with its exact rank.
pub fn r_matrix(basis: &HilbertBasis, phi: &[Rational]) -> (RationalMatrix, usize) {
    let q = basis.len();
    let grads: Vec<Vec<Rational>> = basis
        .thetas
        .iter()
        .map(|t| t.gradient().iter().map(|g| g.eval(phi)).collect())
        .collect();
    let mut r = RationalMatrix::zeros(q, q);
    for a in 0..q {
        for b in 0..q {
            r[(a, b)] = grads[a].iter().zip(&grads[b]).map(|(x, y)| x * y).sum();
        }
    }
    let rank = r.rank();
    (r, rank)
}

pub fn r_matrix_f64(basis: &HilbertBasis, phi: &[f64], tol: f64) -> (DMatrix<f64>, usize) {
    let q = basis.len();
    let grads: Vec<Vec<f64>> = basis
        .thetas
        .iter()
        .map(|t| t.gradient().iter().map(|g| g.eval_f64(phi)).collect())
        .collect();
    let r = DMatrix::from_fn(q, q, |a, b| grads[a].iter().zip(&grads[b]).map(|(x, y)| x * y).sum());
    let (rank, _) = float_rank_and_kernel(&r, tol);
    (r, rank)
}

/// Exact positive semi-definiteness through all principal minors.
pub fn is_psd_exact(m: &RationalMatrix) -> bool {
    let q = m.nrows();
    (1u32..(1 << q)).all(|mask| {
        let idx: Vec<usize> = (0..q).filter(|i| mask & (1 << i) != 0).collect();
        let sub = RationalMatrix::from_rows(
            idx.iter()
                .map(|&i| idx.iter().map(|&j| m[(i, j)].clone()).collect())
                .collect(),
        )
        .expect("square");
        !sub.determinant().expect("square").is_negative()
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StratumReport {
    pub point: Vec<Rational>,
    pub dim_orbit: usize,
    pub dim_n0: usize,
    pub dim_n1: usize,
    pub principal: bool,
    pub rank_r: usize,
    pub hilbert_image: Vec<Rational>,
}

impl StratumReport {
    /// `rank R = dim N⁰` and the dimensions add up to `n`.
    pub fn consistent(&self) -> bool {
        self.rank_r == self.dim_n0 && self.dim_orbit + self.dim_n0 + self.dim_n1 == self.point.len()
    }
}

pub fn stratum_classify(
    rep: &Representation,
    basis: &HilbertBasis,
    phi: &[Rational],
) -> Result<StratumReport, StrataError> {
    let iso = isotropy_generators(rep, phi)?;
    let dec = normal_decomposition(rep, &iso, phi)?;
    let (_, rank_r) = r_matrix(basis, phi);
    Ok(StratumReport {
        point: phi.to_vec(),
        dim_orbit: dec.tangent.len(),
        dim_n0: dec.n0.len(),
        dim_n1: dec.n1.len(),
        principal: dec.n1.is_empty(),
        rank_r,
        hilbert_image: hilbert_map(basis, phi),
    })
}

/// The polynomial `Σ_i (T^a φ)_i ∂_i p` for generator `a`.
pub fn generator_derivative(rep: &Representation, a: usize, p: &MultiPoly) -> MultiPoly {
    let n = rep.dim_v;
    let t = &rep.generators[a];
    let grad = p.gradient();
    let mut out = MultiPoly::zero(n);
    for (i, g) in grad.iter().enumerate() {
        if g.is_zero() {
            continue;
        }
        let row: Vec<Rational> = (0..n).map(|j| t[(i, j)].clone()).collect();
        if row.iter().all(Zero::is_zero) {
            continue;
        }
        out = &out + &(&MultiPoly::linear(&row) * g);
    }
    out
}

/// Exact check that `p` is annihilated by every generator.
pub fn invariance_certificate(rep: &Representation, p: &MultiPoly) -> Result<(), usize> {
    (0..rep.generators.len())
        .find(|&a| !generator_derivative(rep, a, p).is_zero())
        .map_or(Ok(()), Err)
}

pub fn verify_basis_invariant(rep: &Representation, basis: &HilbertBasis) -> Result<(), StrataError> {
    for (theta, p) in basis.thetas.iter().enumerate() {
        invariance_certificate(rep, p).map_err(|generator| StrataError::NotInvariant { theta, generator })?;
    }
    Ok(())
}

/// A representation from the catalog with its algebra, coordinate names
/// and a verified invariant basis.
#[derive(Clone, Debug)]
pub struct CatalogRepresentation {
    pub name: String,
    pub algebra: AlgebraSpec,
    pub rep: Representation,
    pub coords: Vec<String>,
    pub basis: HilbertBasis,
}

fn names(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

fn norm_squared(n: usize) -> MultiPoly {
    (0..n).fold(MultiPoly::zero(n), |acc, i| &acc + &MultiPoly::var(n, i).pow(2))
}

/// `so3-vector`, `so2-plane`, `so4-adjoint` or `coadjoint:<algebra>`.
pub fn catalog_representation(name: &str) -> Result<CatalogRepresentation, StrataError> {
    let theta1 = || MultiPoly::var(1, 0);
    let out = match name {
        "so3-vector" => CatalogRepresentation {
            name: name.into(),
            algebra: catalog("so3")?,
            rep: so3_vector_rep(),
            coords: names("phi", 3),
            basis: HilbertBasis {
                thetas: vec![norm_squared(3)],
                r_hat: Some(vec![vec![theta1().scale(&int(4))]]),
            },
        },
        "so2-plane" => CatalogRepresentation {
            name: name.into(),
            algebra: catalog("so2")?,
            rep: Representation::new(2, vec![RationalMatrix::from_i64(&[&[0, -1], &[1, 0]])])?,
            coords: names("phi", 2),
            basis: HilbertBasis {
                thetas: vec![norm_squared(2)],
                r_hat: Some(vec![vec![theta1().scale(&int(4))]]),
            },
        },
        "so4-adjoint" => {
            let c: StructureConstants = so_n(4);
            let algebra = catalog("so4")?;
            let coords = algebra.coordinate_names.clone();
            let rep = Representation::adjoint(&c);
            // Tr X^4 cannot tell (a, b) from (a, -b) in the rotation
            // angles; the Pfaffian can
            let mut thetas = so_n_trace_invariants(4, &[2]);
            thetas.push(MultiPoly::parse("m12*m34 - m13*m24 + m14*m23", &coords)?);
            let t = |i| MultiPoly::var(2, i);
            let r_hat = vec![
                vec![t(0).scale(&int(-8)), t(1).scale(&int(-8))],
                vec![t(1).scale(&int(-8)), t(0).scale(&rat(-1, 2))],
            ];
            CatalogRepresentation {
                name: name.into(),
                algebra,
                rep,
                coords,
                basis: HilbertBasis {
                    thetas,
                    r_hat: Some(r_hat),
                },
            }
        }
        _ => {
            let Some(alg) = name.strip_prefix("coadjoint:") else {
                return Err(StrataError::UnknownRepresentation { name: name.into() });
            };
            let algebra = catalog(alg)?;
            let rep = Representation::coadjoint(&algebra.structure);
            let j = crate::poisson::from_spec(&algebra).map_err(|e| LieError::Invalid(e.to_string()))?;
            // coadjoint invariants are exactly the Casimirs
            let thetas = crate::poisson::find_polynomial_casimirs(&j, 2);
            CatalogRepresentation {
                name: name.into(),
                coords: algebra.coordinate_names.clone(),
                algebra,
                rep,
                basis: HilbertBasis::new(thetas),
            }
        }
    };
    Ok(out)
}

/// `Tr X^k` for the selected `k`, where `X = Σ m_ab L_ab` is a generic
/// element of `so(n)` in the coordinates of [`so_n`].
#[allow(clippy::needless_range_loop)]
pub fn so_n_trace_invariants(n: usize, powers: &[usize]) -> Vec<MultiPoly> {
    let d = n * (n - 1) / 2;
    let mut x = vec![vec![MultiPoly::zero(d); n]; n];
    let mut idx = 0;
    for a in 0..n {
        for b in a + 1..n {
            x[a][b] = MultiPoly::var(d, idx);
            x[b][a] = -&MultiPoly::var(d, idx);
            idx += 1;
        }
    }
    let kmax = powers.iter().copied().max().unwrap_or(0);
    let traces = poly_matrix_trace_powers(&x, kmax).expect("square");
    powers.iter().map(|&k| traces[k - 1].clone()).collect()
}

/// Projection of a float vector onto the span of an orthonormal basis,
/// returned as the squared norm of the projection.
pub fn projection_weight(v: &[f64], basis: &[Vec<f64>]) -> f64 {
    basis
        .iter()
        .map(|b| b.iter().zip(v).map(|(x, y)| x * y).sum::<f64>().powi(2))
        .sum()
}

pub fn rational_vector_to_f64(v: &[Rational]) -> Vec<f64> {
    v.iter().map(to_f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn tangent_examples() {
        let rep = so3_vector_rep();
        assert_eq!(orbit_tangent(&rep, &ints(&[0, 0, 1])).unwrap().len(), 2);
        assert!(orbit_tangent(&rep, &ints(&[0, 0, 0])).unwrap().is_empty());
        assert_eq!(orbit_tangent(&rep, &ints(&[1, 1, 1])).unwrap().len(), 2);
        assert!(orbit_tangent(&rep, &ints(&[1, 1])).is_err());
    }

    #[test]
    fn decomposition_examples() {
        let rep = so3_vector_rep();
        let phi = ints(&[0, 0, 1]);
        let iso = isotropy_generators(&rep, &phi).unwrap();
        let d = normal_decomposition(&rep, &iso, &phi).unwrap();
        assert_eq!((d.tangent.len(), d.n0.len(), d.n1.len()), (2, 1, 0));
        assert_eq!(d.n0, vec![ints(&[0, 0, 1])]);
        let zero = ints(&[0, 0, 0]);
        let iso0 = isotropy_generators(&rep, &zero).unwrap();
        let d0 = normal_decomposition(&rep, &iso0, &zero).unwrap();
        assert_eq!((d0.tangent.len(), d0.n0.len(), d0.n1.len()), (0, 0, 3));
        let bad = normal_decomposition(&rep, &[ints(&[1, 0, 0])], &phi);
        assert!(matches!(bad, Err(StrataError::NotIsotropy(0))));

        let so2 = catalog_representation("so2-plane").unwrap();
        let p = ints(&[1, 0]);
        let iso = isotropy_generators(&so2.rep, &p).unwrap();
        let d = normal_decomposition(&so2.rep, &iso, &p).unwrap();
        assert_eq!(d.tangent, vec![ints(&[0, 1])]);
        assert_eq!(d.n0, vec![ints(&[1, 0])]);
        assert!(d.n1.is_empty());
    }

    #[test]
    fn float_decomposition_matches_exact() {
        let rep = so3_vector_rep();
        let d = normal_decomposition_f64(&rep, &[0.3, -0.4, 1.2], 1e-9).unwrap();
        assert_eq!((d.tangent.len(), d.n0.len(), d.n1.len()), (2, 1, 0));
        let d = normal_decomposition_f64(&rep, &[1e-13, 0.0, -1e-13], 1e-9).unwrap();
        assert_eq!((d.tangent.len(), d.n0.len(), d.n1.len()), (0, 0, 3));
    }

    #[test]
    fn hilbert_and_r_matrix() {
        let c = catalog_representation("so3-vector").unwrap();
        assert_eq!(hilbert_map(&c.basis, &ints(&[0, 0, 2])), ints(&[4]));
        assert_eq!(hilbert_map(&c.basis, &ints(&[2, 0, 0])), ints(&[4]));
        assert_eq!(hilbert_map(&c.basis, &ints(&[1, 0, 0])), ints(&[1]));
        assert_eq!(hilbert_map(&c.basis, &ints(&[0, 0, 0])), ints(&[0]));
        let (r, rank) = r_matrix(&c.basis, &ints(&[1, 2, 2]));
        assert_eq!(r[(0, 0)], int(36));
        assert_eq!(rank, 1);
        assert_eq!(r_matrix(&c.basis, &ints(&[0, 0, 0])).1, 0);
        let t = c.basis.thetas[0].clone();
        let dep = HilbertBasis::new(vec![t.clone(), t.pow(2)]);
        assert_eq!(r_matrix(&dep, &ints(&[1, -1, 3])).1, 1);
    }

    #[test]
    fn catalog_bases_are_invariant_and_r_hat_holds() {
        for name in [
            "so3-vector",
            "so2-plane",
            "so4-adjoint",
            "coadjoint:so3",
            "coadjoint:gravity",
        ] {
            let c = catalog_representation(name).unwrap();
            c.rep.check_homomorphism(&c.algebra.structure).unwrap();
            verify_basis_invariant(&c.rep, &c.basis).unwrap();
            c.basis.verify_r_hat().unwrap();
        }
        let wrong = HilbertBasis {
            thetas: vec![norm_squared(3)],
            r_hat: Some(vec![vec![MultiPoly::var(1, 0)]]),
        };
        assert!(wrong.verify_r_hat().is_err());
    }

    #[test]
    fn non_invariant_detected() {
        let rep = so3_vector_rep();
        let p = MultiPoly::var(3, 0);
        assert!(invariance_certificate(&rep, &p).is_err());
    }

    #[test]
    fn classification() {
        let c = catalog_representation("so3-vector").unwrap();
        let g = stratum_classify(&c.rep, &c.basis, &[rat(1, 3), int(-2), rat(5, 7)]).unwrap();
        assert_eq!((g.dim_orbit, g.dim_n0, g.dim_n1, g.principal), (2, 1, 0, true));
        assert!(g.consistent());
        let o = stratum_classify(&c.rep, &c.basis, &ints(&[0, 0, 0])).unwrap();
        assert_eq!((o.dim_orbit, o.dim_n0, o.dim_n1, o.principal), (0, 0, 3, false));
        assert!(o.consistent());
        let s = catalog_representation("so2-plane").unwrap();
        let r = stratum_classify(&s.rep, &s.basis, &ints(&[3, -4])).unwrap();
        assert_eq!((r.dim_orbit, r.dim_n0, r.dim_n1, r.principal), (1, 1, 0, true));
    }

    #[test]
    fn so4_adjoint_generic_and_singular() {
        let c = catalog_representation("so4-adjoint").unwrap();
        let g = stratum_classify(&c.rep, &c.basis, &ints(&[1, 2, -1, 3, 1, 5])).unwrap();
        assert_eq!((g.dim_orbit, g.dim_n0, g.dim_n1), (4, 2, 0));
        assert!(g.consistent());
        // one rotation plane: same orbit dimension, still principal
        let s = stratum_classify(&c.rep, &c.basis, &ints(&[1, 0, 0, 0, 0, 0])).unwrap();
        assert_eq!((s.dim_orbit, s.dim_n0, s.dim_n1), (4, 2, 0));
        assert!(s.consistent());
        // equal angles: isotropy u(2)
        let u = stratum_classify(&c.rep, &c.basis, &ints(&[1, 0, 0, 0, 0, 1])).unwrap();
        assert_eq!((u.dim_orbit, u.dim_n0, u.dim_n1, u.principal), (2, 1, 3, false));
        assert!(u.consistent());
    }

    #[test]
    fn exact_psd() {
        assert!(is_psd_exact(&RationalMatrix::from_i64(&[&[2, 1], &[1, 2]])));
        assert!(!is_psd_exact(&RationalMatrix::from_i64(&[&[1, 2], &[2, 1]])));
        assert!(is_psd_exact(&RationalMatrix::zeros(2, 2)));
    }
}
