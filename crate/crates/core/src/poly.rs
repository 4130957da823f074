//! Sparse polynomials in four variables and linear differential operators
//! with polynomial coefficients.
//!
//! The same storage serves both charts: `(x¹, x², x³, x⁴)` with coefficients
//! in `Q(√2)` ([`RealPoly`]) and `(z, z̄, w, w̄)` with coefficients in
//! `Q(i, √2)` ([`ComplexPoly`]). Mixing charts is a type error.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{Field, GaussQSqrt2, QSqrt2, Rational};

pub const NVARS: usize = 4;

/// Exponent vector, ordered graded-lexicographically.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial(pub [u32; NVARS]);

impl Monomial {
    pub const ONE: Monomial = Monomial([0; NVARS]);

    pub fn var(i: usize) -> Self {
        let mut e = [0; NVARS];
        e[i] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        let mut e = self.0;
        for (x, y) in e.iter_mut().zip(o.0) {
            *x += y;
        }
        Monomial(e)
    }

    /// All monomials of the given total degree, in ascending order.
    pub fn of_degree(d: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        for a in 0..=d {
            for b in 0..=d - a {
                for c in 0..=d - a - b {
                    out.push(Monomial([a, b, c, d - a - b - c]));
                }
            }
        }
        out.sort();
        out
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree().cmp(&other.degree()).then_with(|| other.0.cmp(&self.0))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Variable names and coefficient rendering for a chart.
pub trait Chart: Field + fmt::Display {
    const VARS: [&'static str; NVARS];

    /// Rendering of a coefficient inside a product; multi-part values are
    /// parenthesized so that top-level `+`/`-` always separate terms.
    fn render_coeff(&self) -> String;
    fn is_minus_one(&self) -> bool {
        (-self.clone()).is_one()
    }
}

impl Chart for QSqrt2 {
    const VARS: [&'static str; NVARS] = ["x1", "x2", "x3", "x4"];
    fn render_coeff(&self) -> String {
        if self.a.is_zero() || self.b.is_zero() {
            self.to_string()
        } else {
            format!("({self})")
        }
    }
}

impl Chart for GaussQSqrt2 {
    const VARS: [&'static str; NVARS] = ["z", "zb", "w", "wb"];
    fn render_coeff(&self) -> String {
        if self.im.is_zero() {
            self.re.render_coeff()
        } else {
            format!("({self})")
        }
    }
}

#[derive(Clone, PartialEq, Eq, Default)]
pub struct Poly<C> {
    terms: BTreeMap<Monomial, C>,
}

pub type RealPoly = Poly<QSqrt2>;
pub type ComplexPoly = Poly<GaussQSqrt2>;

impl<C: Field> Poly<C> {
    pub fn zero() -> Self {
        Poly { terms: BTreeMap::new() }
    }

    pub fn constant(c: C) -> Self {
        Self::term(c, Monomial::ONE)
    }

    pub fn one() -> Self {
        Self::constant(C::one())
    }

    pub fn term(c: C, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn var(i: usize) -> Self {
        Self::term(C::one(), Monomial::var(i))
    }

    pub fn from_terms(it: impl IntoIterator<Item = (Monomial, C)>) -> Self {
        let mut p = Self::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().add_ref(&c);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(*m, c.clone());
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(*m, -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|c| -c.clone())
    }

    pub fn scale(&self, s: &C) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, c)| (*m, c.mul_ref(s))).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Self::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                out.add_term(m1.mul(m2), c1.mul_ref(c2));
            }
        }
        out
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        Poly { terms: self.terms.iter().map(|(k, c)| (k.mul(m), c.clone())).collect() }
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| acc.mul(self))
    }

    pub fn map_coeffs<D: Field>(&self, f: impl Fn(&C) -> D) -> Poly<D> {
        Poly::from_terms(self.terms.iter().map(|(m, c)| (*m, f(c))))
    }

    /// Largest total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut it = self.terms.keys().map(|m| m.degree());
        match it.next() {
            None => true,
            Some(d) => it.all(|e| e == d),
        }
    }

    /// Degree of a homogeneous polynomial (0 for the zero polynomial).
    pub fn homogeneous_degree(&self) -> Result<u32> {
        if !self.is_homogeneous() {
            return Err(Error::NotHomogeneous);
        }
        Ok(self.degree().unwrap_or(0))
    }

    /// `∂^α p`
    pub fn derivative(&self, alpha: &[u32; NVARS]) -> Self {
        let mut out = Self::zero();
        'terms: for (m, c) in &self.terms {
            let mut e = m.0;
            let mut factor: i64 = 1;
            for v in 0..NVARS {
                if e[v] < alpha[v] {
                    continue 'terms;
                }
                for j in 0..alpha[v] {
                    factor *= (e[v] - j) as i64;
                }
                e[v] -= alpha[v];
            }
            out.add_term(Monomial(e), c.mul_ref(&C::from_i64(factor)));
        }
        out
    }

    pub fn partial(&self, var: usize) -> Self {
        let mut a = [0; NVARS];
        a[var] = 1;
        self.derivative(&a)
    }

    /// Substitutes polynomials for the four variables.
    pub fn substitute<D: Field>(&self, images: &[Poly<D>; NVARS], lift: impl Fn(&C) -> D) -> Poly<D> {
        let mut powers: Vec<Vec<Poly<D>>> = images.iter().map(|p| vec![Poly::one(), p.clone()]).collect();
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut t = Poly::constant(lift(c));
            for v in 0..NVARS {
                let e = m.0[v] as usize;
                while powers[v].len() <= e {
                    let next = powers[v].last().unwrap().mul(&images[v]);
                    powers[v].push(next);
                }
                if e > 0 {
                    t = t.mul(&powers[v][e]);
                }
            }
            out = out.add(&t);
        }
        out
    }

    /// The constant term when the polynomial is constant.
    pub fn as_constant(&self) -> Option<C> {
        match self.terms.len() {
            0 => Some(C::zero()),
            1 => self.terms.get(&Monomial::ONE).cloned(),
            _ => None,
        }
    }
}

impl<C: Chart> Poly<C> {
    /// Signed sum of `coeff*var^e*…` terms, highest degree first.
    pub fn to_text(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let vars: Vec<String> = (0..NVARS)
                .filter(|&v| m.0[v] > 0)
                .map(|v| {
                    if m.0[v] == 1 {
                        C::VARS[v].to_string()
                    } else {
                        format!("{}^{}", C::VARS[v], m.0[v])
                    }
                })
                .collect();
            let mono = vars.join("*");
            let term = if mono.is_empty() {
                c.render_coeff()
            } else if c.is_one() {
                mono
            } else if c.is_minus_one() {
                format!("-{mono}")
            } else {
                format!("{}*{mono}", c.render_coeff())
            };
            if i == 0 {
                out.push_str(&term);
            } else if let Some(rest) = term.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(rest);
            } else {
                out.push_str(" + ");
                out.push_str(&term);
            }
        }
        out
    }
}

impl<C: Chart> fmt::Display for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

impl<C: Chart> fmt::Debug for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({})", self.to_text())
    }
}

impl RealPoly {
    /// Parses the textual real-chart format produced by [`Poly::to_text`].
    pub fn parse(s: &str) -> Result<Self> {
        let src: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if src.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let mut terms: Vec<(bool, &str)> = Vec::new();
        let mut depth = 0i32;
        let mut start = 0;
        let mut negative = false;
        let bytes = src.as_bytes();
        for i in 0..bytes.len() {
            match bytes[i] {
                b'(' => depth += 1,
                b')' => depth -= 1,
                b'+' | b'-' if depth == 0 && i > 0 && !matches!(bytes[i - 1], b'*' | b'^' | b'/') => {
                    terms.push((negative, &src[start..i]));
                    negative = bytes[i] == b'-';
                    start = i + 1;
                }
                b'-' if depth == 0 && i == 0 => {
                    negative = true;
                    start = 1;
                }
                _ => {}
            }
        }
        if depth != 0 {
            return Err(Error::Parse(format!("unbalanced parentheses in `{s}`")));
        }
        terms.push((negative, &src[start..]));
        let mut p = Poly::zero();
        for (neg, t) in terms {
            let (c, m) = parse_real_term(t)?;
            p.add_term(m, if neg { -c } else { c });
        }
        Ok(p)
    }
}

fn parse_real_term(t: &str) -> Result<(QSqrt2, Monomial)> {
    if t.is_empty() {
        return Err(Error::Parse("empty term".into()));
    }
    let mut coeff = QSqrt2::one();
    let mut exps = [0u32; NVARS];
    let mut rest = t;
    if let Some(inner) = rest.strip_prefix('(') {
        let close = inner.find(')').ok_or_else(|| Error::Parse(format!("bad term `{t}`")))?;
        coeff = QSqrt2::parse(&inner[..close])?;
        rest = inner[close + 1..].strip_prefix('*').unwrap_or(&inner[close + 1..]);
    }
    let mut sqrt2_seen = false;
    for factor in rest.split('*').filter(|f| !f.is_empty()) {
        if let Some(v) = factor.strip_prefix('x') {
            let (idx, e) = match v.split_once('^') {
                Some((i, e)) => (i, e.parse::<u32>().map_err(|_| Error::Parse(format!("bad exponent in `{t}`")))?),
                None => (v, 1),
            };
            let i: usize = idx.parse().map_err(|_| Error::Parse(format!("bad variable in `{t}`")))?;
            if !(1..=NVARS).contains(&i) {
                return Err(Error::Parse(format!("unknown variable x{i}")));
            }
            exps[i - 1] += e;
        } else if factor == "sqrt2" {
            if sqrt2_seen {
                return Err(Error::Parse(format!("repeated sqrt2 in `{t}`")));
            }
            sqrt2_seen = true;
            coeff = &coeff * &QSqrt2::sqrt2();
        } else {
            let r: Rational = crate::scalar::parse_rational(factor)?;
            coeff = coeff.scale(&r);
        }
    }
    Ok((coeff, Monomial(exps)))
}

/// `Σ c_α(x)·∂^α`, with terms merged by multi-index.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct DiffOp<C> {
    terms: BTreeMap<[u32; NVARS], Poly<C>>,
}

impl<C: Field> DiffOp<C> {
    pub fn zero() -> Self {
        DiffOp { terms: BTreeMap::new() }
    }

    pub fn identity() -> Self {
        Self::term(Poly::one(), [0; NVARS])
    }

    pub fn term(coeff: Poly<C>, alpha: [u32; NVARS]) -> Self {
        let mut d = Self::zero();
        d.add_term(alpha, coeff);
        d
    }

    /// `∂_var`
    pub fn partial(var: usize) -> Self {
        let mut a = [0; NVARS];
        a[var] = 1;
        Self::term(Poly::one(), a)
    }

    /// Multiplication by a polynomial.
    pub fn multiply_by(p: Poly<C>) -> Self {
        Self::term(p, [0; NVARS])
    }

    /// First-order operator `Σ vᵢ·∂ᵢ`.
    pub fn vector_field(coeffs: &[Poly<C>; NVARS]) -> Self {
        let mut d = Self::zero();
        for (i, c) in coeffs.iter().enumerate() {
            let mut a = [0; NVARS];
            a[i] = 1;
            d.add_term(a, c.clone());
        }
        d
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32; NVARS], &Poly<C>)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn order(&self) -> u32 {
        self.terms.keys().map(|a| a.iter().sum()).max().unwrap_or(0)
    }

    fn add_term(&mut self, alpha: [u32; NVARS], c: Poly<C>) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(alpha).or_insert_with(Poly::zero);
        *e = e.add(&c);
        if e.is_zero() {
            self.terms.remove(&alpha);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (a, c) in &o.terms {
            out.add_term(*a, c.clone());
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&(-C::one())))
    }

    pub fn scale(&self, s: &C) -> Self {
        let mut out = Self::zero();
        for (a, c) in &self.terms {
            out.add_term(*a, c.scale(s));
        }
        out
    }

    pub fn apply(&self, p: &Poly<C>) -> Poly<C> {
        let mut out = Poly::zero();
        for (a, c) in &self.terms {
            let d = p.derivative(a);
            if !d.is_zero() {
                out = out.add(&c.mul(&d));
            }
        }
        out
    }

    /// `self ∘ other`, normalized.
    ///
    /// `c·∂^α ∘ d·∂^β = Σ_{γ≤α} C(α,γ)·c·(∂^γ d)·∂^{α−γ+β}` (Leibniz).
    pub fn compose(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (alpha, c) in &self.terms {
            for (beta, d) in &other.terms {
                for gamma in sub_multi_indices(alpha) {
                    let dd = d.derivative(&gamma);
                    if dd.is_zero() {
                        continue;
                    }
                    let binom: i64 = (0..NVARS).map(|v| binomial(alpha[v], gamma[v])).product();
                    let mut idx = [0; NVARS];
                    for v in 0..NVARS {
                        idx[v] = alpha[v] - gamma[v] + beta[v];
                    }
                    out.add_term(idx, c.mul(&dd).scale(&C::from_i64(binom)));
                }
            }
        }
        out
    }

    /// `[self, other] = self∘other − other∘self`
    pub fn commutator(&self, other: &Self) -> Self {
        self.compose(other).sub(&other.compose(self))
    }
}

impl<C: Chart> fmt::Debug for DiffOp<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(a, c)| format!("({})*d{:?}", c.to_text(), a))
            .collect();
        write!(f, "DiffOp[{}]", parts.join(" + "))
    }
}

fn sub_multi_indices(alpha: &[u32; NVARS]) -> Vec<[u32; NVARS]> {
    let mut out = vec![[0; NVARS]];
    for v in 0..NVARS {
        let mut next = Vec::new();
        for g in &out {
            for k in 0..=alpha[v] {
                let mut h = *g;
                h[v] = k;
                next.push(h);
            }
        }
        out = next;
    }
    out
}

fn binomial(n: u32, k: u32) -> i64 {
    (0..k).fold(1i64, |acc, j| acc * (n - j) as i64 / (j + 1) as i64)
}

/// Geometer's Euclidean Laplacian `−Σ∂ᵢ²` on `R⁴` (real chart).
pub fn euclidean_laplacian() -> DiffOp<QSqrt2> {
    let mut d = DiffOp::zero();
    for v in 0..NVARS {
        let mut a = [0; NVARS];
        a[v] = 2;
        d.add_term(a, Poly::constant(QSqrt2::int(-1)));
    }
    d
}

/// `Σ (xⁱ)²` in the real chart.
pub fn radius_squared() -> RealPoly {
    Poly::from_terms((0..NVARS).map(|v| {
        let mut e = [0; NVARS];
        e[v] = 2;
        (Monomial(e), QSqrt2::one())
    }))
}

/// Canonical remainder modulo `Σ(xⁱ)² − 2`: every `(x⁴)²` is replaced by
/// `2 − (x¹)² − (x²)² − (x³)²` until no monomial has `x⁴`-degree above one.
pub fn reduce_mod_sphere(p: &RealPoly) -> RealPoly {
    let mut out = Poly::zero();
    let mut work: Vec<(Monomial, QSqrt2)> = p.terms().map(|(m, c)| (*m, c.clone())).collect();
    let two = QSqrt2::int(2);
    while let Some((m, c)) = work.pop() {
        if m.0[3] < 2 {
            out.add_term(m, c);
            continue;
        }
        let mut base = m.0;
        base[3] -= 2;
        work.push((Monomial(base), c.mul_ref(&two)));
        for v in 0..3 {
            let mut e = base;
            e[v] += 2;
            work.push((Monomial(e), -c.clone()));
        }
    }
    out
}

/// Whether `p ≡ q` modulo the sphere relation.
pub fn equal_on_sphere(p: &RealPoly, q: &RealPoly) -> bool {
    reduce_mod_sphere(&p.sub(q)).is_zero()
}

/// The constant value of `p` on the sphere, if it is constant there.
pub fn constant_on_sphere(p: &RealPoly) -> Option<QSqrt2> {
    reduce_mod_sphere(p).as_constant()
}
