//! Lie algebra structure constants, representations, semidirect products and
//! the catalog of algebras analysed by the rest of the crate.
//!
//! Structure constants `C^{ij}_k` are stored for `i < j` only; the `i > j`
//! entries are implied by antisymmetry. The bracket of coordinate functions
//! on the dual is `{x_i, x_j} = C^{ij}_k x_k`, which is how every catalog
//! entry is written down.

use std::collections::BTreeMap;
use std::path::Path;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::polyring::{int, parse_rational, Rational, RationalMatrix};

#[derive(Debug, thiserror::Error)]
pub enum LieError {
    #[error("antisymmetry violated at C^{{{i},{j}}}_{k}")]
    Antisymmetry { i: usize, j: usize, k: usize },
    #[error("index ({i}, {j}, {k}) out of range for dimension {dim}")]
    IndexOutOfRange { i: usize, j: usize, k: usize, dim: usize },
    #[error("Jacobi identity fails: max residual {residual}")]
    Jacobi { residual: Rational },
    #[error("representation is not a homomorphism: [T^{a}, T^{b}] != C^{{{a},{b}}}_c T^c")]
    NotHomomorphism { a: usize, b: usize },
    #[error("representation has {found} generators, algebra has dimension {expected}")]
    GeneratorCount { expected: usize, found: usize },
    #[error("generator {index} is {rows}x{cols}, expected {dim}x{dim}")]
    GeneratorShape {
        index: usize,
        rows: usize,
        cols: usize,
        dim: usize,
    },
    #[error("unknown algebra {name:?}; available: {available}")]
    UnknownAlgebra { name: String, available: String },
    #[error("{0}")]
    Invalid(String),
    #[error("reading {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed algebra file: {0}")]
    Json(#[from] serde_json::Error),
}

/// Sparse structure constants of a Lie algebra of dimension `dim`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureConstants {
    dim: usize,
    // (i, j) with i < j  ->  k -> C^{ij}_k
    entries: BTreeMap<(usize, usize), BTreeMap<usize, Rational>>,
}

impl StructureConstants {
    pub fn abelian(dim: usize) -> Self {
        StructureConstants {
            dim,
            entries: BTreeMap::new(),
        }
    }

    /// Builds from `(i, j, k, value)` triples meaning `C^{ij}_k = value`.
    /// Both orderings of a pair may be given as long as they agree up to
    /// sign; a nonzero diagonal entry or a disagreeing pair is an
    /// antisymmetry error.
    pub fn from_triples<I>(dim: usize, triples: I) -> Result<Self, LieError>
    where
        I: IntoIterator<Item = (usize, usize, usize, Rational)>,
    {
        let mut raw: BTreeMap<(usize, usize, usize), Rational> = BTreeMap::new();
        for (i, j, k, v) in triples {
            if i >= dim || j >= dim || k >= dim {
                return Err(LieError::IndexOutOfRange { i, j, k, dim });
            }
            if v.is_zero() {
                continue;
            }
            if i == j {
                return Err(LieError::Antisymmetry { i, j, k });
            }
            if let Some(prev) = raw.insert((i, j, k), v.clone()) {
                if prev != v {
                    return Err(LieError::Antisymmetry { i, j, k });
                }
            }
        }
        let mut entries: BTreeMap<(usize, usize), BTreeMap<usize, Rational>> = BTreeMap::new();
        for ((i, j, k), v) in &raw {
            if let Some(w) = raw.get(&(*j, *i, *k)) {
                if *w != -v.clone() {
                    return Err(LieError::Antisymmetry { i: *i, j: *j, k: *k });
                }
            }
            let (a, b, val) = if i < j {
                (*i, *j, v.clone())
            } else {
                (*j, *i, -v.clone())
            };
            entries.entry((a, b)).or_default().insert(*k, val);
        }
        Ok(StructureConstants { dim, entries })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `C^{ij}_k` with antisymmetry applied.
    pub fn get(&self, i: usize, j: usize, k: usize) -> Rational {
        match i.cmp(&j) {
            std::cmp::Ordering::Equal => Rational::zero(),
            std::cmp::Ordering::Less => self
                .entries
                .get(&(i, j))
                .and_then(|m| m.get(&k))
                .cloned()
                .unwrap_or_else(Rational::zero),
            std::cmp::Ordering::Greater => -self.get(j, i, k),
        }
    }

    /// `[e_i, e_j]` as a sparse coefficient map.
    pub fn bracket_basis(&self, i: usize, j: usize) -> BTreeMap<usize, Rational> {
        match i.cmp(&j) {
            std::cmp::Ordering::Equal => BTreeMap::new(),
            std::cmp::Ordering::Less => self.entries.get(&(i, j)).cloned().unwrap_or_default(),
            std::cmp::Ordering::Greater => self.bracket_basis(j, i).into_iter().map(|(k, v)| (k, -v)).collect(),
        }
    }

    /// Bracket of two algebra elements given in coordinates.
    pub fn bracket(&self, u: &[Rational], v: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.dim];
        for ((i, j), ks) in &self.entries {
            let c = &u[*i] * &v[*j] - &u[*j] * &v[*i];
            if c.is_zero() {
                continue;
            }
            for (k, val) in ks {
                out[*k] += &c * val;
            }
        }
        out
    }

    /// Stored `i < j` triples in ascending order.
    pub fn triples(&self) -> Vec<(usize, usize, usize, Rational)> {
        self.entries
            .iter()
            .flat_map(|((i, j), ks)| ks.iter().map(move |(k, v)| (*i, *j, *k, v.clone())))
            .collect()
    }

    pub fn is_abelian(&self) -> bool {
        self.entries.is_empty()
    }

    /// Matrix of `ad(e_a)`: column `b` holds `[e_a, e_b]`.
    pub fn ad_matrix(&self, a: usize) -> RationalMatrix {
        let mut m = RationalMatrix::zeros(self.dim, self.dim);
        for b in 0..self.dim {
            for (k, v) in self.bracket_basis(a, b) {
                m[(k, b)] = v;
            }
        }
        m
    }
}

/// Largest absolute value of the cyclic sum
/// `sum_m C^{ij}_m C^{mk}_l + C^{jk}_m C^{mi}_l + C^{ki}_m C^{mj}_l`
/// over all `i < j < k` and `l`. Zero exactly when the constants define a
/// Lie algebra.
pub fn jacobi_check(c: &StructureConstants) -> Rational {
    let d = c.dim;
    let mut worst = Rational::zero();
    for i in 0..d {
        for j in i + 1..d {
            for k in j + 1..d {
                let mut acc = vec![Rational::zero(); d];
                for (a, b, z) in [(i, j, k), (j, k, i), (k, i, j)] {
                    for (m, cm) in c.bracket_basis(a, b) {
                        for (l, cl) in c.bracket_basis(m, z) {
                            acc[l] += &cm * &cl;
                        }
                    }
                }
                for v in acc {
                    let v = v.abs();
                    if v > worst {
                        worst = v;
                    }
                }
            }
        }
    }
    worst
}

/// A Lie algebra together with names for the coordinates on its dual.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraSpec {
    pub name: String,
    pub structure: StructureConstants,
    pub coordinate_names: Vec<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum ValueField {
    Text(String),
    Number(serde_json::Number),
}

#[derive(Serialize, Deserialize)]
struct AlgebraFile {
    name: String,
    dim: usize,
    coords: Vec<String>,
    triples: Vec<(usize, usize, usize, ValueField)>,
}

impl AlgebraSpec {
    pub fn new(
        name: impl Into<String>,
        structure: StructureConstants,
        coordinate_names: Vec<String>,
    ) -> Result<Self, LieError> {
        if coordinate_names.len() != structure.dim() {
            return Err(LieError::Invalid(format!(
                "{} coordinate names for dimension {}",
                coordinate_names.len(),
                structure.dim()
            )));
        }
        Ok(AlgebraSpec {
            name: name.into(),
            structure,
            coordinate_names,
        })
    }

    pub fn dim(&self) -> usize {
        self.structure.dim()
    }

    /// Parses the JSON algebra format and checks antisymmetry and Jacobi.
    pub fn from_json(text: &str) -> Result<Self, LieError> {
        let spec = Self::from_json_unchecked(text)?;
        let r = jacobi_check(&spec.structure);
        if !r.is_zero() {
            return Err(LieError::Jacobi { residual: r });
        }
        Ok(spec)
    }

    /// Parses without the Jacobi check (antisymmetry is still enforced).
    /// Used by the verification commands, which report the residual
    /// themselves.
    pub fn from_json_unchecked(text: &str) -> Result<Self, LieError> {
        let file: AlgebraFile = serde_json::from_str(text)?;
        let mut triples = Vec::with_capacity(file.triples.len());
        for (i, j, k, v) in file.triples {
            let v = match v {
                ValueField::Text(s) => s,
                ValueField::Number(n) => n.to_string(),
            };
            let r = parse_rational(&v).map_err(|e| LieError::Invalid(e.to_string()))?;
            triples.push((i, j, k, r));
        }
        let structure = StructureConstants::from_triples(file.dim, triples)?;
        Self::new(file.name, structure, file.coords)
    }

    pub fn load(path: &Path, validate: bool) -> Result<Self, LieError> {
        let text = std::fs::read_to_string(path).map_err(|source| LieError::Io {
            path: path.display().to_string(),
            source,
        })?;
        if validate {
            Self::from_json(&text)
        } else {
            Self::from_json_unchecked(&text)
        }
    }

    pub fn to_json(&self) -> String {
        let file = AlgebraFile {
            name: self.name.clone(),
            dim: self.dim(),
            coords: self.coordinate_names.clone(),
            triples: self
                .structure
                .triples()
                .into_iter()
                .map(|(i, j, k, v)| (i, j, k, ValueField::Text(v.to_string())))
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("serializable")
    }
}

/// Linear action of an algebra on a vector space by `dim_v x dim_v`
/// generator matrices. Generator `a` acts on `phi` as `T^a phi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Representation {
    pub dim_v: usize,
    pub generators: Vec<RationalMatrix>,
}

#[derive(Deserialize, Serialize)]
struct RepresentationFile {
    dim_v: usize,
    generators: Vec<Vec<Vec<ValueField>>>,
    #[serde(default)]
    algebra: Option<String>,
}

impl Representation {
    pub fn new(dim_v: usize, generators: Vec<RationalMatrix>) -> Result<Self, LieError> {
        for (index, g) in generators.iter().enumerate() {
            if g.nrows() != dim_v || g.ncols() != dim_v {
                return Err(LieError::GeneratorShape {
                    index,
                    rows: g.nrows(),
                    cols: g.ncols(),
                    dim: dim_v,
                });
            }
        }
        Ok(Representation { dim_v, generators })
    }

    pub fn zero(d: usize, dim_v: usize) -> Self {
        Representation {
            dim_v,
            generators: vec![RationalMatrix::zeros(dim_v, dim_v); d],
        }
    }

    /// Adjoint representation `T^a = ad(e_a)`.
    pub fn adjoint(c: &StructureConstants) -> Self {
        Representation {
            dim_v: c.dim(),
            generators: (0..c.dim()).map(|a| c.ad_matrix(a)).collect(),
        }
    }

    /// Coadjoint representation `T^a = -ad(e_a)^T` on the dual, whose orbit
    /// through `mu` is tangent to the column space of the Lie-Poisson tensor.
    pub fn coadjoint(c: &StructureConstants) -> Self {
        let m1 = -Rational::one();
        Representation {
            dim_v: c.dim(),
            generators: (0..c.dim()).map(|a| c.ad_matrix(a).transpose().scale(&m1)).collect(),
        }
    }

    /// Block-diagonal sum of two representations of the same algebra.
    pub fn direct_sum(&self, other: &Representation) -> Result<Self, LieError> {
        if self.generators.len() != other.generators.len() {
            return Err(LieError::GeneratorCount {
                expected: self.generators.len(),
                found: other.generators.len(),
            });
        }
        let n = self.dim_v + other.dim_v;
        let generators = self
            .generators
            .iter()
            .zip(&other.generators)
            .map(|(a, b)| {
                let mut m = RationalMatrix::zeros(n, n);
                for i in 0..self.dim_v {
                    for j in 0..self.dim_v {
                        m[(i, j)] = a[(i, j)].clone();
                    }
                }
                for i in 0..other.dim_v {
                    for j in 0..other.dim_v {
                        m[(self.dim_v + i, self.dim_v + j)] = b[(i, j)].clone();
                    }
                }
                m
            })
            .collect();
        Ok(Representation { dim_v: n, generators })
    }

    /// Checks `[T^a, T^b] = C^{ab}_c T^c` exactly.
    pub fn check_homomorphism(&self, c: &StructureConstants) -> Result<(), LieError> {
        if self.generators.len() != c.dim() {
            return Err(LieError::GeneratorCount {
                expected: c.dim(),
                found: self.generators.len(),
            });
        }
        for a in 0..c.dim() {
            for b in a + 1..c.dim() {
                let ta = &self.generators[a];
                let tb = &self.generators[b];
                let comm = (ta * tb).sub(&(tb * ta));
                let mut rhs = RationalMatrix::zeros(self.dim_v, self.dim_v);
                for (k, v) in c.bracket_basis(a, b) {
                    rhs = rhs.add(&self.generators[k].scale(&v));
                }
                if comm != rhs {
                    return Err(LieError::NotHomomorphism { a, b });
                }
            }
        }
        Ok(())
    }

    /// Action of the algebra element `xi` (coordinates in the generator
    /// basis) as a matrix.
    pub fn element_matrix(&self, xi: &[Rational]) -> RationalMatrix {
        let mut m = RationalMatrix::zeros(self.dim_v, self.dim_v);
        for (x, t) in xi.iter().zip(&self.generators) {
            if !x.is_zero() {
                m = m.add(&t.scale(x));
            }
        }
        m
    }

    pub fn from_json(text: &str) -> Result<Self, LieError> {
        let file: RepresentationFile = serde_json::from_str(text)?;
        let mut gens = Vec::with_capacity(file.generators.len());
        for g in file.generators {
            let rows = g
                .into_iter()
                .map(|row| {
                    row.into_iter()
                        .map(|v| {
                            let s = match v {
                                ValueField::Text(s) => s,
                                ValueField::Number(n) => n.to_string(),
                            };
                            parse_rational(&s).map_err(|e| LieError::Invalid(e.to_string()))
                        })
                        .collect::<Result<Vec<_>, _>>()
                })
                .collect::<Result<Vec<_>, _>>()?;
            // flat row-major lists are accepted as well as nested rows
            let m = if rows.len() == 1 && file.dim_v > 1 && rows[0].len() == file.dim_v * file.dim_v {
                let flat = rows.into_iter().next().expect("one row");
                RationalMatrix::from_rows(flat.chunks(file.dim_v).map(<[Rational]>::to_vec).collect())
            } else {
                RationalMatrix::from_rows(rows)
            }
            .map_err(|e| LieError::Invalid(e.to_string()))?;
            gens.push(m);
        }
        Self::new(file.dim_v, gens)
    }

    pub fn to_json(&self, algebra: Option<&str>) -> String {
        let file = RepresentationFile {
            dim_v: self.dim_v,
            generators: self
                .generators
                .iter()
                .map(|g| {
                    g.to_rows()
                        .into_iter()
                        .map(|r| r.into_iter().map(|v| ValueField::Text(v.to_string())).collect())
                        .collect()
                })
                .collect(),
            algebra: algebra.map(str::to_string),
        };
        serde_json::to_string_pretty(&file).expect("serializable")
    }
}

/// Semidirect product `g ⋉ V`: the algebra `g` acting on the abelian ideal
/// `V` through `rep`. Basis order is `g` first, then `V`.
pub fn semidirect_product(c: &StructureConstants, rep: &Representation) -> Result<StructureConstants, LieError> {
    let r = jacobi_check(c);
    if !r.is_zero() {
        return Err(LieError::Jacobi { residual: r });
    }
    rep.check_homomorphism(c)?;
    let d = c.dim();
    let mut triples = c.triples();
    for (a, t) in rep.generators.iter().enumerate() {
        for i in 0..rep.dim_v {
            for j in 0..rep.dim_v {
                // [e_a, v_i] = sum_j T^a_{ji} v_j
                let v = &t[(j, i)];
                if !v.is_zero() {
                    triples.push((a, d + i, d + j, v.clone()));
                }
            }
        }
    }
    StructureConstants::from_triples(d + rep.dim_v, triples)
}

/// Result of [`isotropy_subalgebra`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Isotropy {
    pub basis: Vec<Vec<Rational>>,
    pub abelian: bool,
}

/// Elements `xi` whose coadjoint action fixes `mu`, i.e. the kernel of the
/// Lie-Poisson tensor at `mu`, with a flag telling whether they commute.
pub fn isotropy_subalgebra(c: &StructureConstants, mu: &[Rational]) -> Isotropy {
    assert_eq!(mu.len(), c.dim(), "point dimension");
    let d = c.dim();
    let mut j = RationalMatrix::zeros(d, d);
    for ((a, b), ks) in &c.entries {
        let v: Rational = ks.iter().map(|(k, val)| val * &mu[*k]).sum();
        j[(*a, *b)] = v.clone();
        j[(*b, *a)] = -v;
    }
    let basis = j.kernel();
    let abelian = basis
        .iter()
        .enumerate()
        .all(|(i, u)| basis[i + 1..].iter().all(|v| c.bracket(u, v).iter().all(Zero::is_zero)));
    Isotropy { basis, abelian }
}

fn levi_civita_so3() -> StructureConstants {
    StructureConstants::from_triples(3, [(0, 1, 2, int(1)), (1, 2, 0, int(1)), (2, 0, 1, int(1))]).expect("valid")
}

fn named(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

/// `so(n)` in the basis `L_ab = E_ab - E_ba`, `a < b`, in lexicographic
/// order. `so(3)` is special-cased to `C^{ij}_k = eps_ijk`.
pub fn so_n(n: usize) -> StructureConstants {
    if n == 3 {
        return levi_civita_so3();
    }
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    let index: BTreeMap<(usize, usize), usize> = pairs.iter().enumerate().map(|(i, p)| (*p, i)).collect();
    let gen = |(a, b): (usize, usize)| {
        let mut m = RationalMatrix::zeros(n, n);
        m[(a, b)] = int(1);
        m[(b, a)] = int(-1);
        m
    };
    let mut triples = Vec::new();
    for (i, &p) in pairs.iter().enumerate() {
        for (j, &q) in pairs.iter().enumerate().skip(i + 1) {
            let (x, y) = (gen(p), gen(q));
            let comm = (&x * &y).sub(&(&y * &x));
            for (&(a, b), &k) in &index {
                let v = comm[(a, b)].clone();
                if !v.is_zero() {
                    triples.push((i, j, k, v));
                }
            }
        }
    }
    StructureConstants::from_triples(pairs.len(), triples).expect("valid")
}

fn so_n_names(n: usize) -> Vec<String> {
    if n == 3 {
        return named("mu", 3);
    }
    (1..=n)
        .flat_map(|a| (a + 1..=n).map(move |b| format!("m{a}{b}")))
        .collect()
}

/// `so(3)` acting on itself (and on R^3) by the hat map.
pub fn so3_vector_rep() -> Representation {
    Representation::adjoint(&levi_civita_so3())
}

/// Known catalog names (the `abelian:n=N` and `moments:k=N` families are
/// parametrized).
pub const CATALOG_NAMES: &[&str] = &[
    "so2",
    "so3",
    "so4",
    "so5",
    "so6",
    "so21",
    "sl2",
    "gravity",
    "underwater",
    "abelian:n=N",
    "moments:k=1..4",
];

/// Looks up a catalog algebra by name.
pub fn catalog(name: &str) -> Result<AlgebraSpec, LieError> {
    let unknown = || LieError::UnknownAlgebra {
        name: name.to_string(),
        available: CATALOG_NAMES.join(", "),
    };
    if let Some(k) = name.strip_prefix("moments:k=") {
        let k: usize = k.parse().map_err(|_| unknown())?;
        return crate::moments::build_truncated_matrix(k)
            .map(|(spec, _)| spec)
            .map_err(|e| LieError::Invalid(e.to_string()));
    }
    if let Some(n) = name.strip_prefix("abelian:n=") {
        let n: usize = n.parse().map_err(|_| unknown())?;
        if n == 0 {
            return Err(unknown());
        }
        return AlgebraSpec::new(name, StructureConstants::abelian(n), named("x", n));
    }
    let spec = match name {
        "so2" | "so3" | "so4" | "so5" | "so6" => {
            let n: usize = name[2..].parse().expect("digit");
            AlgebraSpec::new(name, so_n(n), so_n_names(n))?
        }
        // Killing-diagonal basis, Casimir a1^2 + a2^2 - a3^2
        "so21" => AlgebraSpec::new(
            name,
            StructureConstants::from_triples(3, [(0, 1, 2, int(1)), (1, 2, 0, int(-1)), (2, 0, 1, int(-1))])?,
            named("a", 3),
        )?,
        // vorticity quadratic moments: {a1,a2} = 2a1, {a2,a3} = 2a3, {a3,a1} = -a2
        "sl2" => AlgebraSpec::new(
            name,
            StructureConstants::from_triples(3, [(0, 1, 0, int(2)), (1, 2, 2, int(2)), (2, 0, 1, int(-1))])?,
            named("a", 3),
        )?,
        "gravity" => {
            let c = semidirect_product(&levi_civita_so3(), &so3_vector_rep())?;
            let mut names = named("mu", 3);
            names.extend(named("z", 3));
            AlgebraSpec::new(name, c, names)?
        }
        "underwater" => {
            let v = so3_vector_rep();
            let c = semidirect_product(&levi_civita_so3(), &v.direct_sum(&v)?)?;
            let mut names = named("mu", 3);
            names.extend(named("z", 3));
            names.extend(named("b", 3));
            AlgebraSpec::new(name, c, names)?
        }
        _ => return Err(unknown()),
    };
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::rat;

    #[test]
    fn so3_is_lie() {
        assert!(jacobi_check(&so_n(3)).is_zero());
        assert!(jacobi_check(&StructureConstants::abelian(4)).is_zero());
    }

    #[test]
    fn rescaled_so3_entry_still_satisfies_jacobi() {
        // any algebra [e1,e2]=a e3, [e2,e3]=b e1, [e3,e1]=c e2 is Lie
        let c = StructureConstants::from_triples(3, [(0, 1, 2, rat(11, 10)), (1, 2, 0, int(1)), (2, 0, 1, int(1))])
            .unwrap();
        assert!(jacobi_check(&c).is_zero());
    }

    #[test]
    fn perturbed_so3_fails_jacobi() {
        // [e1,e2] = e3 + e1/10: the cyclic sum for (1,2,3) is -e2/10
        let c = StructureConstants::from_triples(
            3,
            [
                (0, 1, 2, int(1)),
                (0, 1, 0, rat(1, 10)),
                (1, 2, 0, int(1)),
                (2, 0, 1, int(1)),
            ],
        )
        .unwrap();
        assert_eq!(jacobi_check(&c), rat(1, 10));
    }

    #[test]
    fn antisymmetry_errors_are_separate() {
        let bad = StructureConstants::from_triples(3, [(0, 1, 2, rat(11, 10)), (1, 0, 2, int(-1))]);
        assert!(matches!(bad, Err(LieError::Antisymmetry { .. })));
        let diag = StructureConstants::from_triples(3, [(1, 1, 2, int(1))]);
        assert!(matches!(diag, Err(LieError::Antisymmetry { .. })));
        let range = StructureConstants::from_triples(3, [(0, 1, 3, int(1))]);
        assert!(matches!(range, Err(LieError::IndexOutOfRange { .. })));
    }

    #[test]
    fn catalog_entries_are_lie_algebras() {
        for name in [
            "so2",
            "so3",
            "so4",
            "so5",
            "so6",
            "so21",
            "sl2",
            "gravity",
            "underwater",
            "abelian:n=4",
        ] {
            let spec = catalog(name).unwrap();
            assert!(jacobi_check(&spec.structure).is_zero(), "{name}");
            assert_eq!(spec.coordinate_names.len(), spec.dim());
        }
        assert_eq!(catalog("so3").unwrap().dim(), 3);
        assert_eq!(catalog("so6").unwrap().dim(), 15);
        assert_eq!(catalog("gravity").unwrap().dim(), 6);
        assert_eq!(catalog("underwater").unwrap().dim(), 9);
    }

    #[test]
    fn unknown_algebra_lists_entries() {
        let err = catalog("e8").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("gravity") && msg.contains("so21"), "{msg}");
    }

    #[test]
    fn sl2_table_matches_vorticity_moments() {
        let c = catalog("sl2").unwrap().structure;
        assert_eq!(c.get(0, 1, 0), int(2));
        assert_eq!(c.get(1, 2, 2), int(2));
        assert_eq!(c.get(2, 0, 1), int(-1));
        assert_eq!(c.get(1, 0, 0), int(-2));
    }

    #[test]
    fn semidirect_with_zero_rep_is_direct_sum() {
        let c = semidirect_product(&so_n(3), &Representation::zero(3, 2)).unwrap();
        assert_eq!(c.dim(), 5);
        for a in 0..5 {
            for v in 3..5 {
                assert!(c.bracket_basis(a, v).is_empty());
            }
        }
    }

    #[test]
    fn semidirect_rejects_non_homomorphism() {
        let mut gens = so3_vector_rep().generators;
        gens[0] = gens[0].scale(&int(2));
        let rep = Representation::new(3, gens).unwrap();
        assert!(matches!(
            semidirect_product(&so_n(3), &rep),
            Err(LieError::NotHomomorphism { .. })
        ));
    }

    #[test]
    fn semidirect_vv_block_vanishes() {
        let c = catalog("underwater").unwrap().structure;
        for i in 3..9 {
            for j in 3..9 {
                assert!(c.bracket_basis(i, j).is_empty());
            }
        }
        // {mu_1, z_2} = z_3
        assert_eq!(c.get(0, 4, 5), int(1));
    }

    #[test]
    fn coadjoint_and_adjoint_are_homomorphisms() {
        for name in ["so3", "so21", "sl2", "gravity", "so4"] {
            let c = catalog(name).unwrap().structure;
            Representation::adjoint(&c).check_homomorphism(&c).unwrap();
            Representation::coadjoint(&c).check_homomorphism(&c).unwrap();
        }
    }

    #[test]
    fn isotropy_examples() {
        let c = so_n(3);
        let iso = isotropy_subalgebra(&c, &[int(0), int(0), int(1)]);
        assert_eq!(iso.basis, vec![vec![int(0), int(0), int(1)]]);
        assert!(iso.abelian);
        let origin = isotropy_subalgebra(&c, &[int(0), int(0), int(0)]);
        assert_eq!(origin.basis.len(), 3);
        assert!(!origin.abelian);
    }

    #[test]
    fn json_roundtrip_and_validation() {
        let spec = catalog("gravity").unwrap();
        let back = AlgebraSpec::from_json(&spec.to_json()).unwrap();
        assert_eq!(back, spec);
        let bad = r#"{"name":"bad","dim":3,"coords":["a","b","c"],
            "triples":[[0,1,2,"1"],[0,1,0,"1/10"],[1,2,0,"1"],[2,0,1,"1"]]}"#;
        assert!(matches!(AlgebraSpec::from_json(bad), Err(LieError::Jacobi { .. })));
        assert!(AlgebraSpec::from_json_unchecked(bad).is_ok());
        let names = r#"{"name":"x","dim":3,"coords":["a"],"triples":[]}"#;
        assert!(AlgebraSpec::from_json(names).is_err());
        let numeric = r#"{"name":"n","dim":3,"coords":["a","b","c"],"triples":[[0,1,2,1],[1,2,0,1],[2,0,1,1]]}"#;
        assert_eq!(AlgebraSpec::from_json(numeric).unwrap().structure, so_n(3));
    }

    #[test]
    fn representation_file_roundtrip() {
        let rep = so3_vector_rep();
        let back = Representation::from_json(&rep.to_json(Some("so3"))).unwrap();
        assert_eq!(back, rep);
    }
}
