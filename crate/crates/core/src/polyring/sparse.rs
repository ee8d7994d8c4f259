//! Sparse exact elimination for the large, very sparse coefficient systems
//! that appear when solving for polynomial Casimirs.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};

use super::{MultiPoly, Rational};

/// Sparse rational row: column index to nonzero value.
pub type SparseRow = BTreeMap<usize, Rational>;

/// Right null space of the system whose rows are given, over `ncols`
/// unknowns. Rows are reduced incrementally against pivots keyed by their
/// lowest column, so only the echelon form is ever stored.
pub fn sparse_kernel<I>(ncols: usize, rows: I) -> Vec<SparseRow>
where
    I: IntoIterator<Item = SparseRow>,
{
    let mut pivots: HashMap<usize, SparseRow> = HashMap::new();
    for mut row in rows {
        row.retain(|_, v| !v.is_zero());
        while let Some((&lead, lead_val)) = row.iter().next() {
            match pivots.get(&lead) {
                Some(p) => {
                    let f = lead_val.clone();
                    for (c, v) in p {
                        let e = row.entry(*c).or_insert_with(Rational::zero);
                        *e -= &f * v;
                        if e.is_zero() {
                            row.remove(c);
                        }
                    }
                }
                None => {
                    let inv = Rational::one() / lead_val;
                    for v in row.values_mut() {
                        *v *= &inv;
                    }
                    pivots.insert(lead, row);
                    break;
                }
            }
        }
    }
    let mut pivot_cols: Vec<usize> = pivots.keys().copied().collect();
    pivot_cols.sort_unstable_by(|a, b| b.cmp(a));
    (0..ncols)
        .filter(|c| !pivots.contains_key(c))
        .map(|free| {
            let mut x: SparseRow = BTreeMap::new();
            x.insert(free, Rational::one());
            for &p in &pivot_cols {
                if p > free {
                    continue;
                }
                let row = &pivots[&p];
                let mut s = Rational::zero();
                for (c, v) in row.range(p + 1..) {
                    if let Some(xc) = x.get(c) {
                        s -= v * xc;
                    }
                }
                if !s.is_zero() {
                    x.insert(p, s);
                }
            }
            x
        })
        .collect()
}

/// Canonical basis of the span of `polys`: reduced echelon form with respect
/// to descending graded-lex order, each element monic in its leading
/// monomial, returned in ascending order of leading monomial. Two lists span
/// the same space iff their canonical spans are equal.
pub fn canonical_span(polys: &[MultiPoly]) -> Vec<MultiPoly> {
    let Some(nvars) = polys.first().map(MultiPoly::nvars) else {
        return Vec::new();
    };
    let mut basis: Vec<MultiPoly> = Vec::new();
    for p in polys {
        // basis elements are monic at their pivot and zero at every other
        // pivot, so a single pass clears all pivot monomials from r
        let mut r = p.clone();
        for b in &basis {
            let c = r.coefficient(b.leading_term().expect("nonzero").0.exponents());
            if !c.is_zero() {
                r = &r - &b.scale(&c);
            }
        }
        if r.is_zero() {
            continue;
        }
        let r = r.monic();
        let lm = r.leading_term().expect("nonzero").0.clone();
        for b in basis.iter_mut() {
            let c = b.coefficient(lm.exponents());
            if !c.is_zero() {
                *b = &*b - &r.scale(&c);
            }
        }
        basis.push(r);
    }
    debug_assert!(basis.iter().all(|b| b.nvars() == nvars));
    basis.sort_by(|a, b| a.leading_term().map(|t| t.0).cmp(&b.leading_term().map(|t| t.0)));
    basis
}

#[cfg(test)]
mod tests {
    use super::super::{int, RationalMatrix};
    use super::*;

    #[test]
    fn sparse_kernel_agrees_with_dense() {
        let dense = RationalMatrix::from_i64(&[&[1, 0, 2, 0], &[0, 1, -1, 3], &[1, 1, 1, 3]]);
        let rows = (0..3).map(|i| {
            dense
                .row(i)
                .iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(c, v)| (c, v.clone()))
                .collect::<SparseRow>()
        });
        let k = sparse_kernel(4, rows);
        assert_eq!(k.len(), dense.kernel().len());
        for v in k {
            let full: Vec<Rational> = (0..4).map(|c| v.get(&c).cloned().unwrap_or_default()).collect();
            assert!(dense.mul_vec(&full).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn canonical_span_is_basis_independent() {
        let names = ["x", "y"];
        let p = |s: &str| MultiPoly::parse(s, &names).unwrap();
        let a = canonical_span(&[p("x^2 + y"), p("x*y - 3*y")]);
        let b = canonical_span(&[p("2*x^2 + x*y - y"), p("x^2 - x*y + 4*y"), p("x^2 + y")]);
        assert_eq!(a, b);
        assert_eq!(a.len(), 2);
        let lt: Vec<_> = a.iter().map(|q| q.leading_term().unwrap().1.clone()).collect();
        assert!(lt.iter().all(|c| *c == int(1)));
    }
}
