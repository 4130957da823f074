//! Univariate polynomials over an exact field and fraction-free
//! characteristic polynomials.

use std::fmt;


use crate::linalg::Matrix;
use crate::scalar::{Field, Rational};

/// Coefficients from the constant term upwards; no trailing zeros.
#[derive(Clone, PartialEq)]
pub struct UniPoly<F> {
    coeffs: Vec<F>,
}

impl<F: Field> UniPoly<F> {
    pub fn new(mut coeffs: Vec<F>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: F) -> Self {
        Self::new(vec![c])
    }

    /// The indeterminate `t`.
    pub fn t() -> Self {
        Self::new(vec![F::zero(), F::one()])
    }

    /// `t² − s·t + p`
    pub fn quadratic(s: &F, p: &F) -> Self {
        Self::new(vec![p.clone(), -s.clone(), F::one()])
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial has no degree.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&F> {
        self.coeffs.last()
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let z = F::zero();
        Self::new(
            (0..n)
                .map(|i| {
                    self.coeffs.get(i).unwrap_or(&z).add_ref(o.coeffs.get(i).unwrap_or(&z))
                })
                .collect(),
        )
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let z = F::zero();
        Self::new(
            (0..n)
                .map(|i| {
                    self.coeffs.get(i).unwrap_or(&z).sub_ref(o.coeffs.get(i).unwrap_or(&z))
                })
                .collect(),
        )
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut out = vec![F::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = out[i + j].add_ref(&a.mul_ref(b));
                }
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, e: usize) -> Self {
        (0..e).fold(Self::constant(F::one()), |acc, _| acc.mul(self))
    }

    /// Euclidean division. Panics when dividing by zero.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lead_inv = d.leading().unwrap().inv().expect("nonzero leading coefficient");
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![F::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = rem[i + dd].mul_ref(&lead_inv);
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                if !dc.is_zero() {
                    rem[i + j] = rem[i + j].sub_ref(&c.mul_ref(dc));
                }
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    /// Exact quotient, or `None` if `d` does not divide `self`.
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(d);
        r.is_zero().then_some(q)
    }

    /// Largest `m` with `d^m | self`, together with the cofactor.
    pub fn multiplicity_of(&self, d: &Self) -> (usize, Self) {
        let mut m = 0;
        let mut cur = self.clone();
        if d.degree().unwrap_or(0) == 0 || cur.is_zero() {
            return (0, cur);
        }
        while let Some(q) = cur.exact_div(d) {
            cur = q;
            m += 1;
        }
        (m, cur)
    }

    pub fn eval(&self, x: &F) -> F {
        self.coeffs.iter().rev().fold(F::zero(), |acc, c| acc.mul_ref(x).add_ref(c))
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> UniPoly<G> {
        UniPoly::new(self.coeffs.iter().map(f).collect())
    }
}

impl<F: Field + fmt::Display> fmt::Display for UniPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("({c})"),
                1 => format!("({c})*t"),
                _ => format!("({c})*t^{i}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

impl<F: Field + fmt::Display> fmt::Debug for UniPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `det(t·I − M)` by Bareiss fraction-free elimination over `F[t]`.
///
/// Each elimination step divides exactly by the previous pivot, so all
/// intermediate entries stay polynomial.
pub fn charpoly<F: Field>(m: &Matrix<F>) -> UniPoly<F> {
    assert!(m.is_square(), "characteristic polynomial of a non-square matrix");
    let n = m.rows();
    if n == 0 {
        return UniPoly::constant(F::one());
    }
    let mut a: Vec<Vec<UniPoly<F>>> = (0..n)
        .map(|r| {
            (0..n)
                .map(|c| {
                    let neg = UniPoly::constant(-m[(r, c)].clone());
                    if r == c {
                        neg.add(&UniPoly::t())
                    } else {
                        neg
                    }
                })
                .collect()
        })
        .collect();
    let mut prev = UniPoly::constant(F::one());
    let mut negate = false;
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    negate = !negate;
                }
                None => return UniPoly::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = a[k][k].mul(&a[i][j]).sub(&a[i][k].mul(&a[k][j]));
                a[i][j] = num.exact_div(&prev).expect("Bareiss division is exact");
            }
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if negate {
        UniPoly::zero().sub(&det)
    } else {
        det
    }
}

/// Coefficients are rational when every coefficient has zero `√2` part.
pub fn rational_coefficients(p: &UniPoly<crate::scalar::QSqrt2>) -> Option<UniPoly<Rational>> {
    if p.coeffs().iter().all(|c| c.is_rational()) {
        Some(UniPoly::new(p.coeffs().iter().map(|c| c.a.clone()).collect()))
    } else {
        None
    }
}

impl<F: Field> UniPoly<F> {
    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|l| l.is_one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rat_int, QSqrt2};
    use num_traits::Zero;

    fn rpoly(c: &[(i64, i64)]) -> UniPoly<Rational> {
        UniPoly::new(c.iter().map(|&(n, d)| rat(n, d)).collect())
    }

    #[test]
    fn division_round_trip() {
        let a = rpoly(&[(1, 1), (0, 1), (-3, 2), (2, 1)]);
        let b = rpoly(&[(1, 2), (1, 1)]);
        let (q, r) = a.div_rem(&b);
        assert_eq!(q.mul(&b).add(&r), a);
        assert!(r.degree().unwrap_or(0) < 1);
    }

    #[test]
    fn charpoly_of_triangular_matrix() {
        let m = Matrix::from_rows(vec![
            vec![rat_int(2), rat_int(5), rat_int(7)],
            vec![rat_int(0), rat(-1, 2), rat_int(3)],
            vec![rat_int(0), rat_int(0), rat_int(4)],
        ]);
        let expected = rpoly(&[(-2, 1), (1, 1)])
            .mul(&rpoly(&[(1, 2), (1, 1)]))
            .mul(&rpoly(&[(-4, 1), (1, 1)]));
        assert_eq!(charpoly(&m), expected);
    }

    #[test]
    fn charpoly_needs_no_pivot_from_zero_diagonal() {
        // [[0,1],[1,0]] -> t² − 1
        let m = Matrix::from_rows(vec![vec![rat_int(0), rat_int(1)], vec![rat_int(1), rat_int(0)]]);
        assert_eq!(charpoly(&m), rpoly(&[(-1, 1), (0, 1), (1, 1)]));
    }

    #[test]
    fn quadratic_multiplicity() {
        let q = UniPoly::quadratic(&rat(-15, 2), &rat(-415, 16));
        let lin = rpoly(&[(-105, 4), (1, 1)]);
        let p = q.pow(4).mul(&lin.pow(4));
        let (m, rest) = p.multiplicity_of(&q);
        assert_eq!(m, 4);
        assert_eq!(rest, lin.pow(4));
    }

    #[test]
    fn charpoly_over_qsqrt2() {
        // [[0, √2], [√2, 0]] -> t² − 2
        let m = Matrix::from_rows(vec![
            vec![QSqrt2::zero(), QSqrt2::sqrt2()],
            vec![QSqrt2::sqrt2(), QSqrt2::zero()],
        ]);
        let p = charpoly(&m);
        assert_eq!(rational_coefficients(&p).unwrap(), rpoly(&[(-2, 1), (0, 1), (1, 1)]));
    }
}
