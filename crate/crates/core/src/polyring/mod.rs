//! Exact sparse multivariate polynomials over the rationals.
//!
//! Everything else in the crate is built on [`MultiPoly`]: Poisson tensor
//! entries, Casimir candidates, invariant polynomials and potentials. Terms
//! are kept in graded-lexicographic order so iteration and printing are
//! deterministic.

mod matrix;
mod parse;
mod sparse;
mod symmetric;
mod univariate;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub use matrix::RationalMatrix;
pub use parse::{parse_rational, ParseError};
pub use sparse::{canonical_span, sparse_kernel, SparseRow};
pub use symmetric::{newton_convert, poly_matrix_trace_powers, trace_invariants, NewtonDirection};
pub use univariate::{RealRoot, UniPoly};

/// Exact rational scalar used throughout the crate.
pub type Rational = BigRational;

/// Shorthand for the integer `n` as a [`Rational`].
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Shorthand for `n / d`. Panics when `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Lossy conversion used by the floating-point paths.
pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Errors raised by polynomial and rational-matrix operations.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PolyError {
    #[error("dimension mismatch: {left} vs {right} variables")]
    DimensionMismatch { left: usize, right: usize },
    #[error("variable index {index} out of range for {nvars} variables")]
    VariableOutOfRange { index: usize, nvars: usize },
    #[error("matrix shape mismatch: {0}")]
    Shape(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// Exponent vector of a monomial. Ordered graded-lexicographically: higher
/// total degree is greater, ties broken by comparing exponents from the first
/// variable on.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

/// All monomials in `nvars` variables of exactly total degree `degree`,
/// in descending graded-lex order.
pub fn monomials_of_degree(nvars: usize, degree: u32) -> Vec<Monomial> {
    fn rec(pos: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if pos + 1 == cur.len() {
            cur[pos] = left;
            out.push(Monomial(cur.clone()));
            return;
        }
        for e in (0..=left).rev() {
            cur[pos] = e;
            rec(pos + 1, left - e, cur, out);
        }
        cur[pos] = 0;
    }
    if nvars == 0 {
        return if degree == 0 { vec![Monomial(vec![])] } else { vec![] };
    }
    let mut out = Vec::new();
    rec(0, degree, &mut vec![0; nvars], &mut out);
    out
}

/// Sparse polynomial with rational coefficients in a fixed number of
/// variables. Zero coefficients are never stored, so structural equality is
/// polynomial equality. The zero polynomial has degree `-1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(Monomial::one(nvars), c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    /// The coordinate function `x_index`.
    pub fn var(nvars: usize, index: usize) -> Self {
        assert!(index < nvars, "variable {index} out of range for {nvars}");
        let mut e = vec![0; nvars];
        e[index] = 1;
        Self::from_terms(nvars, [(e, Rational::one())])
    }

    pub fn from_terms<I>(nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u32>, Rational)>,
    {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent vector length");
            p.add_term(Monomial(e), c);
        }
        p
    }

    /// Linear form `sum_i coeffs[i] * x_i`.
    pub fn linear(coeffs: &[Rational]) -> Self {
        let n = coeffs.len();
        let mut p = Self::zero(n);
        for (i, c) in coeffs.iter().enumerate() {
            let mut e = vec![0; n];
            e[i] = 1;
            p.add_term(Monomial(e), c.clone());
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exponents: &[u32]) -> Rational {
        self.terms
            .get(&Monomial(exponents.to_vec()))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// Total degree, `-1` for the zero polynomial.
    pub fn degree(&self) -> i64 {
        self.terms.keys().next_back().map_or(-1, |m| i64::from(m.degree()))
    }

    pub fn is_constant(&self) -> bool {
        self.degree() <= 0
    }

    pub fn constant_term(&self) -> Rational {
        self.coefficient(&vec![0; self.nvars])
    }

    /// `Some(d)` when every term has total degree `d`; `None` for mixed
    /// degrees and for the zero polynomial.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(Monomial::degree);
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    /// Greatest term in graded-lex order.
    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    /// Scales so that the leading coefficient is one. Zero stays zero.
    pub fn monic(&self) -> Self {
        match self.leading_term() {
            Some((_, c)) => self.scale(&(Rational::one() / c)),
            None => self.clone(),
        }
    }

    /// Largest absolute coefficient (zero for the zero polynomial).
    pub fn max_abs_coefficient(&self) -> Rational {
        self.terms
            .values()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(Rational::zero)
    }

    fn check_same(&self, other: &Self) -> Result<(), PolyError> {
        if self.nvars != other.nvars {
            return Err(PolyError::DimensionMismatch {
                left: self.nvars,
                right: other.nvars,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_same(other)?;
        let mut out = Self::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Exact partial derivative with respect to `x_var`.
    pub fn diff(&self, var: usize) -> Result<Self, PolyError> {
        if var >= self.nvars {
            return Err(PolyError::VariableOutOfRange {
                index: var,
                nvars: self.nvars,
            });
        }
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e == 0 {
                continue;
            }
            let mut d = m.0.clone();
            d[var] -= 1;
            out.add_term(Monomial(d), c * int(i64::from(e)));
        }
        Ok(out)
    }

    pub fn gradient(&self) -> Vec<Self> {
        (0..self.nvars).map(|i| self.diff(i).expect("index in range")).collect()
    }

    pub fn hessian(&self) -> Vec<Vec<Self>> {
        let g = self.gradient();
        g.iter().map(MultiPoly::gradient).collect()
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.nvars, "point dimension");
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                if e > 0 {
                    t *= num_traits::pow(x.clone(), e as usize);
                }
            }
            acc += t;
        }
        acc
    }

    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        self.compile().eval(point)
    }

    /// Float form for repeated evaluation.
    pub fn compile(&self) -> CompiledPoly {
        CompiledPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let factors =
                        m.0.iter()
                            .enumerate()
                            .filter(|(_, &e)| e > 0)
                            .map(|(i, &e)| (i, e as i32))
                            .collect();
                    (to_f64(c), factors)
                })
                .collect(),
        }
    }

    /// Composition: replaces `x_i` by `images[i]`. All images must share
    /// one variable count, which becomes the variable count of the result.
    pub fn substitute(&self, images: &[MultiPoly]) -> Result<Self, PolyError> {
        if images.len() != self.nvars {
            return Err(PolyError::DimensionMismatch {
                left: self.nvars,
                right: images.len(),
            });
        }
        let target = images.first().map_or(0, MultiPoly::nvars);
        if let Some(bad) = images.iter().find(|p| p.nvars != target) {
            return Err(PolyError::DimensionMismatch {
                left: target,
                right: bad.nvars,
            });
        }
        let mut cache: BTreeMap<(usize, u32), MultiPoly> = BTreeMap::new();
        let mut out = Self::zero(target);
        for (m, c) in &self.terms {
            let mut t = Self::constant(target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let p = cache.entry((i, e)).or_insert_with(|| images[i].pow(e)).clone();
                t = &t * &p;
            }
            for (tm, tc) in t.terms {
                out.add_term(tm, tc);
            }
        }
        Ok(out)
    }

    /// Re-embeds into a ring with `nvars` variables, sending `x_i` to
    /// `x_{mapping[i]}`.
    pub fn embed(&self, nvars: usize, mapping: &[usize]) -> Result<Self, PolyError> {
        let images: Vec<MultiPoly> = mapping.iter().map(|&j| MultiPoly::var(nvars, j)).collect();
        self.substitute(&images)
    }

    /// Prints with the given variable names, terms in descending graded-lex
    /// order, coefficients as `p/q`.
    pub fn to_string_with<S: AsRef<str>>(&self, names: &[S]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            if idx == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let a = c.abs();
            let mono = format_monomial(m, names);
            if mono.is_empty() {
                s.push_str(&a.to_string());
            } else if a.is_one() {
                s.push_str(&mono);
            } else {
                s.push_str(&format!("{a} * {mono}"));
            }
        }
        s
    }

    /// Parses the text form using the given variable names.
    pub fn parse<S: AsRef<str>>(text: &str, names: &[S]) -> Result<Self, ParseError> {
        parse::parse_poly(text, names)
    }

    /// Parses with default names `x1..xn`.
    pub fn parse_default(text: &str, nvars: usize) -> Result<Self, ParseError> {
        parse::parse_poly(text, &default_names(nvars))
    }
}

/// `x1, x2, …, xn`.
pub fn default_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}

fn format_monomial<S: AsRef<str>>(m: &Monomial, names: &[S]) -> String {
    let mut parts = Vec::new();
    for (i, &e) in m.0.iter().enumerate() {
        if e == 0 {
            continue;
        }
        let name = names
            .get(i)
            .map(|n| n.as_ref().to_string())
            .unwrap_or_else(|| format!("x{}", i + 1));
        if e == 1 {
            parts.push(name);
        } else {
            parts.push(format!("{name}^{e}"));
        }
    }
    parts.join("*")
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_with(&default_names(self.nvars)))
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        self.try_add(rhs).expect("polynomial variable counts must agree")
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self.try_sub(rhs).expect("polynomial variable counts must agree")
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        self.try_mul(rhs).expect("polynomial variable counts must agree")
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(&-Rational::one())
    }
}

impl Add for MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: MultiPoly) -> MultiPoly {
        &self + &rhs
    }
}

impl Sub for MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: MultiPoly) -> MultiPoly {
        &self - &rhs
    }
}

impl Mul for MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: MultiPoly) -> MultiPoly {
        &self * &rhs
    }
}

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}

/// Floating-point evaluation form of a [`MultiPoly`].
#[derive(Clone, Debug)]
pub struct CompiledPoly {
    nvars: usize,
    terms: Vec<(f64, Vec<(usize, i32)>)>,
}

impl CompiledPoly {
    pub fn eval(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.nvars);
        self.terms
            .iter()
            .map(|(c, fs)| fs.iter().fold(*c, |acc, &(i, e)| acc * x[i].powi(e)))
            .sum()
    }
}

/// Canonical planar bracket `[f, g] = f_x g_y - f_y g_x` on polynomials in
/// `(x, y)`.
pub fn jacobian_bracket(f: &MultiPoly, g: &MultiPoly) -> Result<MultiPoly, PolyError> {
    for p in [f, g] {
        if p.nvars != 2 {
            return Err(PolyError::DimensionMismatch {
                left: 2,
                right: p.nvars,
            });
        }
    }
    let fx = f.diff(0)?;
    let fy = f.diff(1)?;
    let gx = g.diff(0)?;
    let gy = g.diff(1)?;
    Ok(&(&fx * &gy) - &(&fy * &gx))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xy(s: &str) -> MultiPoly {
        MultiPoly::parse(s, &["x", "y"]).unwrap()
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(&xy("x + y") + &xy("x - y"), xy("2*x"));
        let prod = &xy("x") * &MultiPoly::zero(2);
        assert!(prod.is_zero());
        assert_eq!(prod.len(), 0);
        assert_eq!(xy("x^2 + 2*x*y").scale(&rat(1, 2)), xy("1/2*x^2 + x*y"));
        assert_eq!(-&xy("x - 1"), xy("1 - x"));
    }

    #[test]
    fn mismatched_dimensions_error() {
        let a = MultiPoly::var(2, 0);
        let b = MultiPoly::var(3, 0);
        assert_eq!(a.try_add(&b), Err(PolyError::DimensionMismatch { left: 2, right: 3 }));
        assert!(a.try_mul(&b).is_err());
        assert!(matches!(
            a.diff(5),
            Err(PolyError::VariableOutOfRange { index: 5, nvars: 2 })
        ));
    }

    #[test]
    fn derivatives() {
        assert_eq!(xy("x^2*y").diff(0).unwrap(), xy("2*x*y"));
        assert!(xy("x^2").diff(1).unwrap().is_zero());
        let names = ["mu1", "mu2", "mu3"];
        let c = MultiPoly::parse("1/2*(mu1^2 + mu2^2 + mu3^2)", &names).unwrap();
        assert_eq!(c.diff(0).unwrap(), MultiPoly::parse("mu1", &names).unwrap());
    }

    #[test]
    fn degree_sentinel_and_zero_printing() {
        let z = MultiPoly::zero(3);
        assert_eq!(z.degree(), -1);
        assert_eq!(z.to_string(), "0");
        assert_eq!(MultiPoly::one(3).degree(), 0);
        assert_eq!(xy("x^3*y + y").degree(), 4);
    }

    #[test]
    fn planar_bracket_examples() {
        assert_eq!(jacobian_bracket(&xy("1/2*x^2"), &xy("x*y")).unwrap(), xy("x^2"));
        assert_eq!(jacobian_bracket(&xy("1/2*x^2"), &xy("1/2*y^2")).unwrap(), xy("x*y"));
        let f = xy("x^3 - 2*x*y + 7");
        assert!(jacobian_bracket(&f, &f).unwrap().is_zero());
        assert!(jacobian_bracket(&MultiPoly::var(3, 0), &f).is_err());
    }

    #[test]
    fn printing_is_graded_lex_descending() {
        let p = xy("y + 3 - x*y + 1/2*x^2");
        assert_eq!(p.to_string_with(&["x", "y"]), "1/2 * x^2 - x*y + y + 3");
        assert_eq!(p.to_string(), "1/2 * x1^2 - x1*x2 + x2 + 3");
        assert_eq!(xy("-x").to_string_with(&["x", "y"]), "-x");
    }

    #[test]
    fn substitution_and_embedding() {
        // (x + y)^2 with x -> u, y -> u => 4u^2
        let p = xy("(x + y)^2");
        let u = MultiPoly::var(1, 0);
        assert_eq!(
            p.substitute(&[u.clone(), u]).unwrap(),
            MultiPoly::parse("4*u^2", &["u"]).unwrap()
        );
        let e = xy("x*y^2").embed(3, &[2, 0]).unwrap();
        assert_eq!(e, MultiPoly::parse("c*a^2", &["a", "b", "c"]).unwrap());
    }

    #[test]
    fn monomial_enumeration_counts() {
        assert_eq!(monomials_of_degree(3, 2).len(), 6);
        assert_eq!(monomials_of_degree(9, 4).len(), 495);
        let m = monomials_of_degree(2, 2);
        assert!(m.windows(2).all(|w| w[0] > w[1]));
    }

    #[test]
    fn float_evaluation_matches_exact() {
        let p = xy("3/4*x^3*y - 2*y^2 + 5");
        let exact = to_f64(&p.eval(&[rat(1, 3), rat(-2, 1)]));
        let float = p.eval_f64(&[1.0 / 3.0, -2.0]);
        assert!((exact - float).abs() < 1e-14);
    }

    #[test]
    fn homogeneity() {
        assert_eq!(xy("x^2 + x*y").homogeneous_degree(), Some(2));
        assert_eq!(xy("x^2 + y").homogeneous_degree(), None);
        assert_eq!(MultiPoly::zero(2).homogeneous_degree(), None);
    }
}
