//! Newton's identities and trace invariants of matrices.

use super::{int, MultiPoly, PolyError, Rational, RationalMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NewtonDirection {
    PowerSumsToElementary,
    ElementaryToPowerSums,
}

/// Converts between elementary symmetric functions `p_1..p_n` and power sums
/// `S_1..S_n` through `S_i - p_1 S_{i-1} + ... + (-1)^i i p_i = 0`.
pub fn newton_convert(input: &[Rational], direction: NewtonDirection, n: usize) -> Result<Vec<Rational>, PolyError> {
    if input.len() != n {
        return Err(PolyError::Shape(format!(
            "expected {n} coefficients, got {}",
            input.len()
        )));
    }
    let sign = |j: usize| if j % 2 == 1 { int(1) } else { int(-1) };
    let mut out: Vec<Rational> = Vec::with_capacity(n);
    match direction {
        NewtonDirection::ElementaryToPowerSums => {
            let p = input;
            for i in 1..=n {
                let mut s = sign(i) * int(i as i64) * &p[i - 1];
                for j in 1..i {
                    s += sign(j) * &p[j - 1] * &out[i - j - 1];
                }
                out.push(s);
            }
        }
        NewtonDirection::PowerSumsToElementary => {
            let s = input;
            for i in 1..=n {
                let mut acc = s[i - 1].clone();
                for j in 1..i {
                    acc -= sign(j) * &out[j - 1] * &s[i - j - 1];
                }
                out.push(sign(i) * acc / int(i as i64));
            }
        }
    }
    Ok(out)
}

/// `Tr X^k` for `k = 1..=kmax`.
pub fn trace_invariants(x: &RationalMatrix, kmax: usize) -> Result<Vec<Rational>, PolyError> {
    if !x.is_square() {
        return Err(PolyError::Shape(format!(
            "trace invariants need a square matrix, got {}x{}",
            x.nrows(),
            x.ncols()
        )));
    }
    let mut out = Vec::with_capacity(kmax);
    let mut pw = x.clone();
    for k in 1..=kmax {
        out.push(pw.trace()?);
        if k < kmax {
            pw = &pw * x;
        }
    }
    Ok(out)
}

/// Symbolic `Tr X^k` for a square matrix of polynomials.
pub fn poly_matrix_trace_powers(x: &[Vec<MultiPoly>], kmax: usize) -> Result<Vec<MultiPoly>, PolyError> {
    let n = x.len();
    if x.iter().any(|r| r.len() != n) {
        return Err(PolyError::Shape("trace invariants need a square matrix".into()));
    }
    let nvars = x.first().and_then(|r| r.first()).map_or(0, MultiPoly::nvars);
    let mul = |a: &[Vec<MultiPoly>], b: &[Vec<MultiPoly>]| -> Vec<Vec<MultiPoly>> {
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let mut s = MultiPoly::zero(nvars);
                        for k in 0..n {
                            if !a[i][k].is_zero() && !b[k][j].is_zero() {
                                s = &s + &(&a[i][k] * &b[k][j]);
                            }
                        }
                        s
                    })
                    .collect()
            })
            .collect()
    };
    let mut out = Vec::with_capacity(kmax);
    let mut pw: Vec<Vec<MultiPoly>> = x.to_vec();
    for k in 1..=kmax {
        let mut t = MultiPoly::zero(nvars);
        for (i, row) in pw.iter().enumerate() {
            t = &t + &row[i];
        }
        out.push(t);
        if k < kmax {
            pw = mul(&pw, x);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn is_all_zero(v: &[Rational]) -> bool {
        v.iter().all(Zero::is_zero)
    }

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn spectrum_one_two_three() {
        let s = newton_convert(&ints(&[6, 11, 6]), NewtonDirection::ElementaryToPowerSums, 3).unwrap();
        assert_eq!(s, ints(&[6, 14, 36]));
        let p = newton_convert(&ints(&[6, 14, 36]), NewtonDirection::PowerSumsToElementary, 3).unwrap();
        assert_eq!(p, ints(&[6, 11, 6]));
    }

    #[test]
    fn nilpotent_spectrum() {
        let z = newton_convert(&ints(&[0, 0, 0, 0]), NewtonDirection::ElementaryToPowerSums, 4).unwrap();
        assert!(is_all_zero(&z));
    }

    #[test]
    fn length_checked() {
        assert!(newton_convert(&ints(&[1, 2]), NewtonDirection::ElementaryToPowerSums, 3).is_err());
    }

    #[test]
    fn traces_of_hat_map() {
        // hat(0, 0, 1)
        let x = RationalMatrix::from_i64(&[&[0, -1, 0], &[1, 0, 0], &[0, 0, 0]]);
        let t = trace_invariants(&x, 4).unwrap();
        assert_eq!(t, ints(&[0, -2, 0, 2]));
        let z = trace_invariants(&RationalMatrix::zeros(3, 3), 3).unwrap();
        assert!(is_all_zero(&z));
        assert!(trace_invariants(&RationalMatrix::zeros(2, 3), 2).is_err());
    }

    #[test]
    fn symbolic_traces() {
        let names = ["u", "v", "w"];
        let p = |s: &str| MultiPoly::parse(s, &names).unwrap();
        let x = vec![
            vec![p("0"), p("-w"), p("v")],
            vec![p("w"), p("0"), p("-u")],
            vec![p("-v"), p("u"), p("0")],
        ];
        let t = poly_matrix_trace_powers(&x, 3).unwrap();
        assert!(t[0].is_zero());
        assert_eq!(t[1], p("-2*(u^2 + v^2 + w^2)"));
        assert!(t[2].is_zero());
    }
}
