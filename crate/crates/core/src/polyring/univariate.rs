//! Univariate rational polynomials with exact real-root isolation.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{int, to_f64, MultiPoly, PolyError, Rational};

/// Coefficients from the constant term upward, trailing zeros trimmed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPoly(Vec<Rational>);

/// A real root located to double precision, with its exact value when it is
/// a small-denominator rational.
#[derive(Clone, Debug, PartialEq)]
pub struct RealRoot {
    pub approx: f64,
    pub exact: Option<Rational>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly(coeffs)
    }

    pub fn from_multi(p: &MultiPoly) -> Result<Self, PolyError> {
        if p.nvars() != 1 {
            return Err(PolyError::DimensionMismatch {
                left: 1,
                right: p.nvars(),
            });
        }
        let d = p.degree().max(0) as usize;
        let mut c = vec![Rational::zero(); d + 1];
        for (m, v) in p.terms() {
            c[m.exponents()[0] as usize] = v.clone();
        }
        Ok(Self::new(c))
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> i64 {
        self.0.len() as i64 - 1
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.0.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, c| acc * x + to_f64(c))
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * int(i as i64))
                .collect(),
        )
    }

    fn rem(&self, d: &Self) -> Self {
        assert!(!d.is_zero(), "division by zero polynomial");
        let mut r = self.0.clone();
        let dl = d.0.last().expect("nonzero");
        let dd = d.0.len();
        while r.len() >= dd {
            let f = r.last().expect("nonempty") / dl;
            let shift = r.len() - dd;
            for (i, c) in d.0.iter().enumerate() {
                r[shift + i] -= &f * c;
            }
            r.pop();
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        Self::new(r)
    }

    fn quot(&self, d: &Self) -> Self {
        let mut r = self.0.clone();
        let dl = d.0.last().expect("nonzero");
        let dd = d.0.len();
        if r.len() < dd {
            return Self::new(vec![]);
        }
        let mut q = vec![Rational::zero(); r.len() - dd + 1];
        while r.len() >= dd {
            let f = r.last().expect("nonempty") / dl;
            let shift = r.len() - dd;
            for (i, c) in d.0.iter().enumerate() {
                r[shift + i] -= &f * c;
            }
            q[shift] = f;
            r.pop();
        }
        Self::new(q)
    }

    fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a
    }

    /// Product of the distinct irreducible factors.
    pub fn square_free(&self) -> Self {
        let g = self.gcd(&self.derivative());
        if g.degree() <= 0 {
            return self.clone();
        }
        self.quot(&g)
    }

    fn sturm_chain(&self) -> Vec<Self> {
        let mut chain = vec![self.clone(), self.derivative()];
        while !chain.last().expect("nonempty").is_zero() {
            let n = chain.len();
            let r = chain[n - 2].rem(&chain[n - 1]);
            if r.is_zero() {
                break;
            }
            chain.push(Self::new(r.0.into_iter().map(|c| -c).collect()));
        }
        chain
    }

    fn sign_changes(chain: &[Self], x: &Rational) -> usize {
        let signs: Vec<i8> = chain
            .iter()
            .map(|p| {
                let v = p.eval(x);
                if v.is_zero() {
                    0
                } else if v.is_positive() {
                    1
                } else {
                    -1
                }
            })
            .filter(|&s| s != 0)
            .collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    }

    /// Distinct real roots in increasing order. Panics on the zero
    /// polynomial, whose root set is all of the reals.
    pub fn real_roots(&self) -> Vec<RealRoot> {
        assert!(!self.is_zero(), "zero polynomial has every real as a root");
        let mut p = self.square_free();
        let mut exact = Vec::new();
        let mut out = Vec::new();
        'restart: while p.degree() >= 1 {
            out.clear();
            // Cauchy bound: every root lies strictly inside (-bound, bound)
            let lead = p.0.last().expect("nonzero").abs();
            let bound = Rational::one()
                + p.0[..p.0.len() - 1]
                    .iter()
                    .map(|c| c.abs() / &lead)
                    .max()
                    .unwrap_or_else(Rational::zero);
            let chain = p.sturm_chain();
            let mut stack = vec![(-bound.clone(), bound)];
            while let Some((lo, hi)) = stack.pop() {
                let count = Self::sign_changes(&chain, &lo) - Self::sign_changes(&chain, &hi);
                if count == 0 {
                    continue;
                }
                if count == 1 {
                    out.push(p.refine(&chain, lo, hi));
                    continue;
                }
                let mid = (&lo + &hi) / int(2);
                if p.eval(&mid).is_zero() {
                    // deflate so interval endpoints are never roots
                    p = p.quot(&Self::new(vec![-mid.clone(), Rational::one()]));
                    exact.push(mid);
                    continue 'restart;
                }
                stack.push((mid.clone(), hi));
                stack.push((lo, mid));
            }
            break;
        }
        out.extend(exact.into_iter().map(|r| RealRoot {
            approx: to_f64(&r),
            exact: Some(r),
        }));
        out.sort_by(|a, b| a.approx.total_cmp(&b.approx));
        out
    }

    /// Narrows an isolating interval `(lo, hi]` to a double-precision root.
    fn refine(&self, chain: &[Self], mut lo: Rational, mut hi: Rational) -> RealRoot {
        if self.eval(&hi).is_zero() {
            return RealRoot {
                approx: to_f64(&hi),
                exact: Some(hi),
            };
        }
        for _ in 0..200 {
            if let Some(r) = simplest_between(&lo, &hi) {
                if self.eval(&r).is_zero() {
                    return RealRoot {
                        approx: to_f64(&r),
                        exact: Some(r),
                    };
                }
            }
            let width = to_f64(&(&hi - &lo));
            let scale = to_f64(&hi).abs().max(1.0);
            if width <= 1e-17 * scale {
                break;
            }
            let mid = (&lo + &hi) / int(2);
            if self.eval(&mid).is_zero() {
                return RealRoot {
                    approx: to_f64(&mid),
                    exact: Some(mid),
                };
            }
            if Self::sign_changes(chain, &lo) - Self::sign_changes(chain, &mid) == 1 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        RealRoot {
            approx: to_f64(&((&lo + &hi) / int(2))),
            exact: None,
        }
    }
}

/// Rational with the smallest denominator strictly inside `(lo, hi)`, when
/// that denominator is below 10^6.
fn simplest_between(lo: &Rational, hi: &Rational) -> Option<Rational> {
    // continued-fraction walk on (lo, hi)
    fn walk(lo: Rational, hi: Rational, depth: u32) -> Option<Rational> {
        if depth > 64 {
            return None;
        }
        let fl = lo.floor();
        if &fl + Rational::one() < hi {
            return Some(fl + Rational::one());
        }
        let frac_lo = &lo - &fl;
        let frac_hi = &hi - &fl;
        if frac_lo.is_zero() {
            // interval (n, n + f): simplest is n + 1/ceil(1/f)
            let inv = (Rational::one() / frac_hi).floor() + Rational::one();
            return Some(fl + Rational::one() / inv);
        }
        let inner = walk(Rational::one() / frac_hi, Rational::one() / frac_lo, depth + 1)?;
        Some(fl + Rational::one() / inner)
    }
    if lo >= hi {
        return None;
    }
    let z = Rational::zero();
    let r = if lo < &z && hi > &z {
        z
    } else if hi <= &z {
        -walk(-hi.clone(), -lo.clone(), 0)?
    } else {
        walk(lo.clone(), hi.clone(), 0)?
    };
    (r.denom() < &BigInt::from(1_000_000)).then_some(r)
}

#[cfg(test)]
mod tests {
    use super::super::rat;
    use super::*;

    fn up(c: &[i64]) -> UniPoly {
        UniPoly::new(c.iter().map(|&v| int(v)).collect())
    }

    #[test]
    fn rational_roots_are_exact() {
        // 8θ(θ - 1) = 8θ² - 8θ
        let roots = up(&[0, -8, 8]).real_roots();
        assert_eq!(roots.len(), 2);
        assert_eq!(roots[0].exact, Some(int(0)));
        assert_eq!(roots[1].exact, Some(int(1)));
    }

    #[test]
    fn repeated_and_irrational_roots() {
        // (x - 1)^2 (x^2 - 2)
        let p = up(&[-2, 4, -1, -2, 1]);
        let roots = p.real_roots();
        assert_eq!(roots.len(), 3);
        assert!((roots[0].approx + 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(roots[1].exact, Some(int(1)));
        assert!((roots[2].approx - 2f64.sqrt()).abs() < 1e-15);
        assert!(roots[2].exact.is_none());
    }

    #[test]
    fn fractional_roots() {
        // (2x + 1)(3x - 2)
        let roots = up(&[-2, -1, 6]).real_roots();
        assert_eq!(roots[0].exact, Some(rat(-1, 2)));
        assert_eq!(roots[1].exact, Some(rat(2, 3)));
        assert!(up(&[1, 0, 1]).real_roots().is_empty());
    }

    #[test]
    fn simplest_rational() {
        assert_eq!(simplest_between(&rat(1, 3), &rat(1, 2)), Some(rat(2, 5)));
        assert_eq!(simplest_between(&rat(-1, 2), &rat(1, 2)), Some(int(0)));
        assert_eq!(simplest_between(&rat(7, 5), &rat(3, 2)), Some(rat(10, 7)));
    }
}
