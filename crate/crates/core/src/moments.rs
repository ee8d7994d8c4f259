//! Moment algebras of a planar vortex carrying a passive density.
//!
//! Functionals of the vorticity `ω` and density `ρ` are restricted to
//! moments: `a1 = ∫ x²ω/2`, `a2 = ∫ xyω`, `a3 = ∫ y²ω/2` and
//! `b_ij = ∫ x^i y^j ρ`. Their functional derivatives are monomials, so the
//! bracket
//!
//! ```text
//! {F, G} = ∫ ω [F_ω, G_ω] + ρ ([F_ω, G_ρ] - [G_ω, F_ρ])
//! ```
//!
//! reduces to planar Jacobian brackets of monomials followed by
//! re-expression in moments.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::liealg::{AlgebraSpec, LieError, StructureConstants};
use crate::poisson::{casimir_check_exact, lie_poisson_tensor, CasimirCertificate, PoissonError, PoissonStructure};
use crate::polyring::{int, jacobian_bracket, rat, MultiPoly, Rational};

#[derive(Debug, thiserror::Error)]
pub enum MomentsError {
    #[error("density degree k must be in 1..=4, got {0}")]
    DegreeOutOfRange(usize),
    #[error("closure degrees must be at least 1, got ({0}, {1})")]
    BadClosureDegrees(u32, u32),
    #[error("bracket of {0} and {1} leaves the moment span")]
    NotClosed(MomentSymbol, MomentSymbol),
    #[error("{label} is not a Casimir of the k={k} moment algebra")]
    CasimirRegression { label: String, k: usize },
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Poisson(#[from] PoissonError),
}

/// A vorticity moment `a1, a2, a3` or a density moment `b_ij`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MomentSymbol {
    A(u8),
    B(u32, u32),
}

impl MomentSymbol {
    /// Functional derivative with respect to `ω` (for `a`) or `ρ` (for `b`)
    /// as a polynomial in `(x, y)`.
    fn weight(self) -> MultiPoly {
        match self {
            MomentSymbol::A(1) => MultiPoly::from_terms(2, [(vec![2, 0], rat(1, 2))]),
            MomentSymbol::A(2) => MultiPoly::from_terms(2, [(vec![1, 1], int(1))]),
            MomentSymbol::A(3) => MultiPoly::from_terms(2, [(vec![0, 2], rat(1, 2))]),
            MomentSymbol::A(n) => panic!("no vorticity moment a{n}"),
            MomentSymbol::B(i, j) => MultiPoly::from_terms(2, [(vec![i, j], int(1))]),
        }
    }

    pub fn name(self) -> String {
        match self {
            MomentSymbol::A(n) => format!("a{n}"),
            MomentSymbol::B(i, j) => format!("b{i}{j}"),
        }
    }
}

impl fmt::Display for MomentSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// Linear combination of moments; an `ω`-integral of a monomial that is not
/// quadratic cannot be written with `a1..a3` and is kept as an `Omega` term.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MomentExpression {
    pub terms: BTreeMap<MomentSymbol, Rational>,
    /// `∫ x^i y^j ω` terms outside the quadratic vorticity moments.
    pub omega: BTreeMap<(u32, u32), Rational>,
}

impl MomentExpression {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.omega.is_empty()
    }

    fn add(&mut self, s: MomentSymbol, v: Rational) {
        let e = self.terms.entry(s).or_insert_with(Rational::zero);
        *e += v;
        if e.is_zero() {
            self.terms.remove(&s);
        }
    }

    /// `∫ p ω` for a polynomial `p` in `(x, y)`.
    fn add_omega(&mut self, p: &MultiPoly) {
        for (m, c) in p.terms() {
            let e = m.exponents();
            match (e[0], e[1]) {
                (2, 0) => self.add(MomentSymbol::A(1), c * int(2)),
                (1, 1) => self.add(MomentSymbol::A(2), c.clone()),
                (0, 2) => self.add(MomentSymbol::A(3), c * int(2)),
                (i, j) => {
                    let v = self.omega.entry((i, j)).or_insert_with(Rational::zero);
                    *v += c;
                    if v.is_zero() {
                        self.omega.remove(&(i, j));
                    }
                }
            }
        }
    }

    /// `∫ p ρ`.
    fn add_rho(&mut self, p: &MultiPoly) {
        for (m, c) in p.terms() {
            let e = m.exponents();
            self.add(MomentSymbol::B(e[0], e[1]), c.clone());
        }
    }
}

impl fmt::Display for MomentExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let one = int(1);
        let term = |v: &Rational, s: String| {
            if *v == one {
                s
            } else if *v == -one.clone() {
                format!("-{s}")
            } else {
                format!("{v}*{s}")
            }
        };
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(s, v)| term(v, s.name()))
            .chain(self.omega.iter().map(|((i, j), v)| term(v, format!("w{i}{j}"))))
            .collect();
        f.write_str(&parts.join(" + ").replace("+ -", "- "))
    }
}

/// Bracket of two moments.
pub fn moment_bracket(a: MomentSymbol, b: MomentSymbol) -> MomentExpression {
    let mut out = MomentExpression::default();
    let jb = |f: &MultiPoly, g: &MultiPoly| jacobian_bracket(f, g).expect("planar");
    match (a, b) {
        (MomentSymbol::A(_), MomentSymbol::A(_)) => out.add_omega(&jb(&a.weight(), &b.weight())),
        // F_ω = f, G_ρ = g: ∫ ρ [f, g]
        (MomentSymbol::A(_), MomentSymbol::B(..)) => out.add_rho(&jb(&a.weight(), &b.weight())),
        // F_ρ = f, G_ω = g: -∫ ρ [g, f]
        (MomentSymbol::B(..), MomentSymbol::A(_)) => out.add_rho(&-jb(&b.weight(), &a.weight())),
        (MomentSymbol::B(..), MomentSymbol::B(..)) => {}
    }
    out
}

/// Coordinates of the truncated algebra: `a1, a2, a3` then
/// `b_k0, b_(k-1)1, ..., b_0k`.
pub fn truncated_symbols(k: usize) -> Vec<MomentSymbol> {
    let k = k as u32;
    let mut s = vec![MomentSymbol::A(1), MomentSymbol::A(2), MomentSymbol::A(3)];
    s.extend((0..=k).map(|j| MomentSymbol::B(k - j, j)));
    s
}

/// Structure constants of `{a1, a2, a3} ∪ V^k` read off the moment
/// bracket, as an algebra spec named `moments:k=K` together with its
/// Lie-Poisson tensor.
pub fn build_truncated_matrix(k: usize) -> Result<(AlgebraSpec, PoissonStructure), MomentsError> {
    if !(1..=4).contains(&k) {
        return Err(MomentsError::DegreeOutOfRange(k));
    }
    let symbols = truncated_symbols(k);
    let index: BTreeMap<MomentSymbol, usize> = symbols.iter().enumerate().map(|(i, s)| (*s, i)).collect();
    let mut triples = Vec::new();
    for (i, &si) in symbols.iter().enumerate() {
        for (j, &sj) in symbols.iter().enumerate().skip(i + 1) {
            let e = moment_bracket(si, sj);
            if !e.omega.is_empty() {
                return Err(MomentsError::NotClosed(si, sj));
            }
            for (s, v) in e.terms {
                let kk = *index.get(&s).ok_or(MomentsError::NotClosed(si, sj))?;
                triples.push((i, j, kk, v));
            }
        }
    }
    let names: Vec<String> = symbols.iter().map(|s| s.name()).collect();
    let c = StructureConstants::from_triples(symbols.len(), triples)?;
    let spec = AlgebraSpec::new(format!("moments:k={k}"), c, names.clone())?;
    let j = lie_poisson_tensor(&spec.structure, names)?;
    Ok((spec, j))
}

/// Exhaustive check that every bracket among `{a1, a2, a3} ∪ V^k` lies in
/// their span.
pub fn truncation_closure(k: usize) -> Result<(), MomentsError> {
    let symbols = truncated_symbols(k);
    for &a in &symbols {
        for &b in &symbols {
            let e = moment_bracket(a, b);
            if !e.omega.is_empty() || e.terms.keys().any(|s| !symbols.contains(s)) {
                return Err(MomentsError::NotClosed(a, b));
            }
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureVerdict {
    /// Common degree of every nonzero bracket image, `m + n - 2`.
    pub image_degree: u32,
    /// All brackets of `V^m × V^n` are homogeneous of `image_degree`.
    pub rule_holds: bool,
    /// The image lies in `V^m` or `V^n`.
    pub closes_on_inputs: bool,
    pub nonzero_brackets: usize,
}

/// Brackets every monomial of degree `m` with every monomial of degree `n`
/// under the planar Jacobian bracket and reports the image degree.
pub fn closure_check(m: u32, n: u32) -> Result<ClosureVerdict, MomentsError> {
    if m == 0 || n == 0 {
        return Err(MomentsError::BadClosureDegrees(m, n));
    }
    let image_degree = m + n - 2;
    let mut rule_holds = true;
    let mut nonzero = 0;
    for f in crate::polyring::monomials_of_degree(2, m) {
        for g in crate::polyring::monomials_of_degree(2, n) {
            let fp = MultiPoly::from_terms(2, [(f.exponents().to_vec(), int(1))]);
            let gp = MultiPoly::from_terms(2, [(g.exponents().to_vec(), int(1))]);
            let b = jacobian_bracket(&fp, &gp).expect("planar");
            if b.is_zero() {
                continue;
            }
            nonzero += 1;
            if b.homogeneous_degree() != Some(image_degree) {
                rule_holds = false;
            }
        }
    }
    Ok(ClosureVerdict {
        image_degree,
        rule_holds,
        closes_on_inputs: image_degree == m || image_degree == n,
        nonzero_brackets: nonzero,
    })
}

/// The explicit Casimirs of the truncated algebras, keyed by dimension
/// `k + 4`. The dimension-5 entry was found by solving for all Casimirs of
/// degree at most 3 and is kept as a fixture.
pub fn known_casimirs(dim: usize) -> Vec<(&'static str, String)> {
    let v: Vec<(&'static str, &str)> = match dim {
        5 => vec![("C5", "a1*b01^2 - a2*b10*b01 + a3*b10^2")],
        6 => vec![("C6_1", "b11^2 - b20*b02"), ("C6_2", "a1*b02 - a2*b11 + a3*b20")],
        7 => vec![(
            "C7",
            "4*b12^3*b30 + 4*b21^3*b03 - 6*b03*b12*b21*b30 + b03^2*b30^2 - 3*b12^2*b21^2",
        )],
        8 => vec![
            ("C8_1", "b04*b40 - 4*b13*b31 + 3*b22^2"),
            ("C8_2", "-b22^3 + 2*b13*b22*b31 - b04*b31^2 - b13^2*b40 + b04*b22*b40"),
        ],
        _ => vec![],
    };
    v.into_iter().map(|(l, s)| (l, s.to_string())).collect()
}

/// Certifies every listed Casimir of the `k` truncation as an exact
/// identity; any failure is an error.
pub fn verify_known_casimirs(k: usize) -> Result<Vec<(String, CasimirCertificate)>, MomentsError> {
    let (_, j) = build_truncated_matrix(k)?;
    let mut out = Vec::new();
    for (label, text) in known_casimirs(k + 4) {
        let c = j.parse_poly(&text).map_err(PoissonError::from)?;
        let cert = casimir_check_exact(&j, &c)?;
        if !cert.certified() {
            return Err(MomentsError::CasimirRegression {
                label: label.to_string(),
                k,
            });
        }
        out.push((label.to_string(), cert));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::{catalog, jacobi_check};
    use crate::poisson::{find_polynomial_casimirs, independent_count, jacobi_tensor_check, rank_at, Point};
    use crate::sampling;
    use MomentSymbol::{A, B};

    fn single(s: MomentSymbol, v: i64) -> MomentExpression {
        let mut e = MomentExpression::default();
        e.add(s, int(v));
        e
    }

    #[test]
    fn vorticity_moments_form_sl2() {
        assert_eq!(moment_bracket(A(1), A(2)), single(A(1), 2));
        assert_eq!(moment_bracket(A(2), A(3)), single(A(3), 2));
        assert_eq!(moment_bracket(A(3), A(1)), single(A(2), -1));
        assert!(moment_bracket(A(2), A(2)).is_zero());
        assert!(moment_bracket(B(2, 0), B(0, 2)).is_zero());
    }

    #[test]
    fn vorticity_acts_on_density_degree() {
        // [x²/2, x^i y^j] = j x^{i+1} y^{j-1}
        assert_eq!(moment_bracket(A(1), B(1, 2)), single(B(2, 1), 2));
        assert_eq!(moment_bracket(A(2), B(1, 2)), single(B(1, 2), 1));
        assert_eq!(moment_bracket(A(3), B(1, 2)), single(B(0, 3), -1));
        assert_eq!(moment_bracket(B(1, 2), A(3)), single(B(0, 3), 1));
    }

    #[test]
    fn truncations_are_lie_and_closed() {
        for k in 1..=4 {
            let (spec, j) = build_truncated_matrix(k).unwrap();
            assert_eq!(spec.dim(), k + 4);
            assert!(jacobi_check(&spec.structure).is_zero());
            assert!(jacobi_tensor_check(&j).is_empty());
            truncation_closure(k).unwrap();
        }
        assert!(matches!(
            build_truncated_matrix(5),
            Err(MomentsError::DegreeOutOfRange(5))
        ));
        assert!(matches!(
            build_truncated_matrix(0),
            Err(MomentsError::DegreeOutOfRange(0))
        ));
    }

    #[test]
    fn a_block_matches_sl2_catalog() {
        let (spec, _) = build_truncated_matrix(2).unwrap();
        let sl2 = catalog("sl2").unwrap().structure;
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    assert_eq!(spec.structure.get(i, j, k), sl2.get(i, j, k));
                }
            }
        }
    }

    #[test]
    fn closure_degrees() {
        let v = closure_check(2, 2).unwrap();
        assert_eq!((v.image_degree, v.rule_holds, v.closes_on_inputs), (2, true, true));
        let v = closure_check(2, 3).unwrap();
        assert_eq!((v.image_degree, v.rule_holds, v.closes_on_inputs), (3, true, true));
        let v = closure_check(3, 3).unwrap();
        assert_eq!((v.image_degree, v.rule_holds, v.closes_on_inputs), (4, true, false));
        assert!(closure_check(0, 2).is_err());
    }

    #[test]
    fn known_casimirs_certify() {
        for k in 1..=4 {
            let certs = verify_known_casimirs(k).unwrap();
            assert!(!certs.is_empty());
        }
    }

    #[test]
    fn generic_ranks() {
        let mut rng = sampling::rng(11);
        for (k, expected) in [(1, 4), (2, 4), (3, 6), (4, 6)] {
            let (_, j) = build_truncated_matrix(k).unwrap();
            let x = sampling::rational_point(&mut rng, k + 4);
            assert_eq!(rank_at(&j, &Point::Exact(x), 0.0).unwrap().rank, expected, "k={k}");
        }
    }

    #[test]
    fn k1_casimir_fixture_is_the_only_one() {
        let (_, j) = build_truncated_matrix(1).unwrap();
        let found = find_polynomial_casimirs(&j, 3);
        assert_eq!(independent_count(&found, 5), 1);
        let fixture = j.parse_poly(&known_casimirs(5)[0].1).unwrap();
        assert_eq!(found, crate::polyring::canonical_span(&[fixture]));
    }

    #[test]
    fn k2_casimirs_span() {
        let (_, j) = build_truncated_matrix(2).unwrap();
        let found = find_polynomial_casimirs(&j, 2);
        let known: Vec<MultiPoly> = known_casimirs(6)
            .iter()
            .map(|(_, s)| j.parse_poly(s).unwrap())
            .collect();
        assert_eq!(found, crate::polyring::canonical_span(&known));
    }
}
