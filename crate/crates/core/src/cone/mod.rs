//! Exponential polynomials, simplicial cones and regularized integration.
//!
//! `I_C(f; λ) = ∫_C f(x) e^{⟨λ,x⟩} dx` is continued meromorphically by
//! integrating out one cone direction at a time with
//! `∫_0^∞ e^{ct} Q(t) dt = Σ_m (D^m Q)(0) / (-c)^{m+1}`. The #-integral of
//! `f(x) τ^C(x - T)` is the value of that continuation at `λ = 0`; it is an
//! [`ExpSum`] `Σ a_k e^{b_k}`, which stays exact over rational coefficients.

mod field;
mod numeric;
mod parse;
mod poly;

use std::fmt;

use num_complex::Complex64;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{determinant, inverse, transpose, Matrix};
use crate::Rational;

pub use field::ConeField;
pub use numeric::numeric_cone_integral;
pub use parse::{parse_expression, parse_problem, parse_rational, ConeProblem};
pub use poly::{Polynomial, MAX_DEGREE, MAX_VARS};

use field::{dot, lexicographic, lift};

/// `Σ_i e^{⟨λ_i, x⟩} P_i(x)` with pairwise distinct `λ_i` and nonzero `P_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExponentialPolynomial<F> {
    dim: usize,
    terms: Vec<(Vec<F>, Polynomial<F>)>,
}

impl<F: ConeField> ExponentialPolynomial<F> {
    /// Merges equal exponents, drops zero polynomials and sorts terms by
    /// exponent.
    pub fn new(dim: usize, terms: Vec<(Vec<F>, Polynomial<F>)>) -> Result<Self> {
        if dim == 0 || dim > MAX_VARS {
            return Err(Error::Unsupported(format!("dimension {dim} outside 1..={MAX_VARS}")));
        }
        let mut merged: Vec<(Vec<F>, Polynomial<F>)> = Vec::new();
        for (lambda, p) in terms {
            if lambda.len() != dim {
                return Err(Error::RankMismatch { expected: dim, got: lambda.len() });
            }
            if p.nvars() != dim {
                return Err(Error::RankMismatch { expected: dim, got: p.nvars() });
            }
            match merged.iter_mut().find(|(l, _)| *l == lambda) {
                Some(slot) => slot.1 = slot.1.add(&p),
                None => merged.push((lambda, p)),
            }
        }
        merged.retain(|(_, p)| !p.is_zero());
        if let Some((_, p)) = merged.iter().find(|(_, p)| p.degree() > MAX_DEGREE) {
            return Err(Error::Unsupported(format!("degree {} exceeds {MAX_DEGREE}", p.degree())));
        }
        merged.sort_by(|a, b| lexicographic(&a.0, &b.0));
        Ok(Self { dim, terms: merged })
    }

    pub fn pure_exponential(lambda: Vec<F>) -> Result<Self> {
        let n = lambda.len();
        Self::new(n, vec![(lambda, Polynomial::one(n))])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &[(Vec<F>, Polynomial<F>)] {
        &self.terms
    }

    pub fn exponents(&self) -> Vec<&[F]> {
        self.terms.iter().map(|(l, _)| l.as_slice()).collect()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        Self::new(self.dim, self.terms.iter().chain(&other.terms).cloned().collect())
    }

    pub fn scale(&self, c: &F) -> Self {
        let terms = self.terms.iter().map(|(l, p)| (l.clone(), p.scale(c))).collect();
        Self::new(self.dim, terms).expect("scaling keeps the shape")
    }

    /// Maps coefficients into another field.
    pub fn convert<G: ConeField>(&self, f: impl Fn(&F) -> G) -> Result<ExponentialPolynomial<G>> {
        let terms = self.terms.iter().map(|(l, p)| (l.iter().map(&f).collect(), p.convert(&f))).collect();
        ExponentialPolynomial::new(self.dim, terms)
    }

    pub fn eval_complex(&self, x: &[Complex64]) -> Complex64 {
        self.terms.iter().fold(Complex64::zero(), |s, (l, p)| {
            let e: Complex64 = l.iter().zip(x).map(|(li, xi)| li.to_complex() * xi).sum();
            s + e.exp() * p.eval_complex(x)
        })
    }

    pub fn eval(&self, x: &[F]) -> Complex64 {
        self.eval_complex(&x.iter().map(ConeField::to_complex).collect::<Vec<_>>())
    }
}

/// A finite sum `Σ_k a_k e^{b_k}` with distinct exponents `b_k` and nonzero
/// coefficients `a_k`, sorted by exponent.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpSum<F> {
    terms: Vec<(F, F)>,
}

impl<F: ConeField> ExpSum<F> {
    /// Terms are `(exponent, coefficient)` pairs.
    pub fn new<I: IntoIterator<Item = (F, F)>>(terms: I) -> Self {
        let mut out: Vec<(F, F)> = Vec::new();
        for (b, a) in terms {
            match out.iter_mut().find(|(e, _)| *e == b) {
                Some(slot) => slot.1 = slot.1.clone() + a,
                None => out.push((b, a)),
            }
        }
        out.retain(|(_, a)| !a.is_zero());
        out.sort_by(|x, y| x.0.total_cmp(&y.0));
        Self { terms: out }
    }

    pub fn zero() -> Self {
        Self { terms: Vec::new() }
    }

    pub fn constant(c: F) -> Self {
        Self::new([(F::zero(), c)])
    }

    pub fn terms(&self) -> &[(F, F)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(self.terms.iter().chain(&other.terms).cloned())
    }

    pub fn scale(&self, c: &F) -> Self {
        Self::new(self.terms.iter().map(|(b, a)| (b.clone(), a.clone() * c.clone())))
    }

    /// Multiplies by `e^{s}`.
    pub fn shift(&self, s: &F) -> Self {
        Self::new(self.terms.iter().map(|(b, a)| (b.clone() + s.clone(), a.clone())))
    }

    pub fn value(&self) -> Complex64 {
        self.terms.iter().map(|(b, a)| b.to_complex().exp() * a.to_complex()).sum()
    }

    /// Exact equality for exact fields; relative closeness of values otherwise.
    pub fn agrees_with(&self, other: &Self, rel: f64) -> bool {
        if F::EXACT {
            return self == other;
        }
        let (x, y) = (self.value(), other.value());
        (x - y).norm() <= rel * x.norm().max(y.norm()).max(1.0)
    }
}

impl<F: ConeField + fmt::Display> fmt::Display for ExpSum<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (b, a)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            if b.is_zero() {
                write!(f, "({a})")?;
            } else {
                write!(f, "({a})*exp({b})")?;
            }
        }
        Ok(())
    }
}

/// The hyperplane `⟨λ + λ_i, e_k⟩ = 0` through which a continuation is singular.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Hyperplane {
    pub direction: usize,
    pub term: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub enum MeromorphicValue<V> {
    Finite(V),
    Singular(Vec<Hyperplane>),
}

impl<V> MeromorphicValue<V> {
    pub fn is_singular(&self) -> bool {
        matches!(self, Self::Singular(_))
    }

    pub fn finite(&self) -> Option<&V> {
        match self {
            Self::Finite(v) => Some(v),
            Self::Singular(_) => None,
        }
    }

    pub fn into_finite(self) -> Result<V> {
        match self {
            Self::Finite(v) => Ok(v),
            Self::Singular(h) => Err(Error::Singular(format!("singular along {h:?}"))),
        }
    }

    pub fn hyperplanes(&self) -> &[Hyperplane] {
        match self {
            Self::Finite(_) => &[],
            Self::Singular(h) => h,
        }
    }

    pub fn map<W>(self, f: impl FnOnce(V) -> W) -> MeromorphicValue<W> {
        match self {
            Self::Finite(v) => MeromorphicValue::Finite(f(v)),
            Self::Singular(h) => MeromorphicValue::Singular(h),
        }
    }
}

/// The translated simplicial cone `T + {Σ a_j e_j : a_j ≥ 0}`, equivalently
/// `{x : ⟨μ_i, x - T⟩ ≥ 0}` with `⟨μ_i, e_j⟩ = δ_ij`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConeRecord {
    generators: Matrix<Rational>,
    forms: Matrix<Rational>,
    offset: Vec<Rational>,
}

impl ConeRecord {
    /// `generators` holds `e_1, …, e_n` as rows.
    pub fn new(generators: Matrix<Rational>, offset: Vec<Rational>) -> Result<Self> {
        let n = generators.len();
        if n == 0 || n > MAX_VARS {
            return Err(Error::Unsupported(format!("dimension {n} outside 1..={MAX_VARS}")));
        }
        if let Some(row) = generators.iter().find(|r| r.len() != n) {
            return Err(Error::RankMismatch { expected: n, got: row.len() });
        }
        if offset.len() != n {
            return Err(Error::RankMismatch { expected: n, got: offset.len() });
        }
        let forms = inverse(&transpose(&generators)).ok_or_else(|| Error::Degenerate("generators are linearly dependent".into()))?;
        Ok(Self { generators, forms, offset })
    }

    /// From the forms `μ_i` (rows) cutting out the cone.
    pub fn from_forms(forms: Matrix<Rational>, offset: Vec<Rational>) -> Result<Self> {
        let generators = transpose(&inverse(&forms).ok_or_else(|| Error::Degenerate("forms are linearly dependent".into()))?);
        Self::new(generators, offset)
    }

    pub fn orthant(n: usize) -> Result<Self> {
        let id = crate::linalg::identity(n);
        Self::new(id, vec![Rational::zero(); n])
    }

    pub fn dim(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &Matrix<Rational> {
        &self.generators
    }

    pub fn forms(&self) -> &Matrix<Rational> {
        &self.forms
    }

    pub fn offset(&self) -> &[Rational] {
        &self.offset
    }

    pub fn with_offset(&self, offset: Vec<Rational>) -> Result<Self> {
        Self::new(self.generators.clone(), offset)
    }

    /// `-C` with the same offset.
    pub fn negated(&self) -> Self {
        let g = self.generators.iter().map(|r| r.iter().map(|x| -x).collect()).collect();
        Self::new(g, self.offset.clone()).expect("negation keeps independence")
    }

    /// Volume of the parallelepiped spanned by the generators.
    pub fn volume(&self) -> Rational {
        determinant(&self.generators).abs()
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        let d: Vec<Rational> = x.iter().zip(&self.offset).map(|(a, b)| a - b).collect();
        self.forms.iter().all(|mu| !crate::linalg::dot(mu, &d).is_negative())
    }

    /// `x = T + Σ a_j e_j` as the affine map `a ↦ A a + T`.
    fn chart<F: ConeField>(&self) -> (Vec<Vec<F>>, Vec<F>) {
        let a = transpose(&self.generators).iter().map(|r| lift(r)).collect();
        (a, lift(&self.offset))
    }
}

/// A term `e^{shift} e^{⟨λ, y⟩} P(y)`; `origin` indexes the term of `f` it
/// descends from.
#[derive(Clone, Debug)]
struct Piece<F> {
    origin: usize,
    shift: F,
    lambda: Vec<F>,
    poly: Polynomial<F>,
}

fn pieces<F: ConeField>(f: &ExponentialPolynomial<F>, twist: Option<&[F]>) -> Vec<Piece<F>> {
    f.terms
        .iter()
        .enumerate()
        .map(|(i, (l, p))| {
            let lambda = match twist {
                Some(t) => l.iter().zip(t).map(|(a, b)| a.clone() + b.clone()).collect(),
                None => l.clone(),
            };
            Piece { origin: i, shift: F::zero(), lambda, poly: p.clone() }
        })
        .collect()
}

/// Substitutes `x = A y + b` with `A` of shape `n × m`.
fn pull_back<F: ConeField>(ps: Vec<Piece<F>>, a: &[Vec<F>], b: &[F], m: usize) -> Vec<Piece<F>> {
    ps.into_iter()
        .map(|p| {
            let lambda = (0..m).map(|j| p.lambda.iter().zip(a).fold(F::zero(), |s, (l, row)| s + l.clone() * row[j].clone())).collect();
            Piece { origin: p.origin, shift: p.shift + dot(&p.lambda, b), lambda, poly: p.poly.compose_affine(a, b, m) }
        })
        .collect()
}

/// Pairs `(k, i)` with `⟨λ_i, e_k⟩ = 0` among the first `q` coordinates.
fn hyperplanes<F: ConeField>(ps: &[Piece<F>], q: usize) -> Result<Vec<Hyperplane>> {
    let mut out = Vec::new();
    for p in ps.iter().filter(|p| !p.poly.is_zero()) {
        for (k, c) in p.lambda.iter().take(q).enumerate() {
            if c.is_zero() {
                out.push(Hyperplane { direction: k, term: p.origin });
            } else if c.is_negligible() {
                return Err(Error::Degenerate(format!("exponent of term {} nearly vanishes on direction {k}", p.origin)));
            }
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

fn factorial<F: ConeField>(m: usize) -> F {
    (1..=m).fold(F::one(), |a, k| a * F::from_i64(k as i64))
}

/// `∫_0^∞ e^{c y_0} P dy_0` for every piece; requires `c ≠ 0`.
fn integrate_halfline_first<F: ConeField>(ps: Vec<Piece<F>>) -> Vec<Piece<F>> {
    ps.into_iter()
        .filter_map(|p| {
            let c = p.lambda[0].clone();
            let minus_c = -c;
            let mut denom = minus_c.clone();
            let mut poly = Polynomial::zero(p.poly.nvars() - 1);
            for (m, q) in p.poly.split_first().iter().enumerate() {
                poly = poly.add(&q.scale(&(factorial::<F>(m) / denom.clone())));
                denom = denom * minus_c.clone();
            }
            (!poly.is_zero()).then(|| Piece { origin: p.origin, shift: p.shift, lambda: p.lambda[1..].to_vec(), poly })
        })
        .collect()
}

/// `∫_lo^hi e^{c y_0} P dy_0` for every piece.
fn integrate_interval_first<F: ConeField>(ps: Vec<Piece<F>>, lo: &F, hi: &F) -> Vec<Piece<F>> {
    let mut out = Vec::new();
    for p in ps {
        let c = p.lambda[0].clone();
        let parts = p.poly.split_first();
        let rest = p.lambda[1..].to_vec();
        let nv = p.poly.nvars() - 1;
        if c.is_zero() || c.is_negligible() {
            let mut poly = Polynomial::zero(nv);
            for (m, q) in parts.iter().enumerate() {
                let k = F::from_i64(m as i64 + 1);
                let w = (power(hi, m + 1) - power(lo, m + 1)) / k;
                poly = poly.add(&q.scale(&w));
            }
            out.push(Piece { origin: p.origin, shift: p.shift, lambda: rest, poly });
            continue;
        }
        for (t, sign) in [(hi, F::one()), (lo, -F::one())] {
            let mut poly = Polynomial::zero(nv);
            for (m, q) in parts.iter().enumerate() {
                // e^{ct} Σ_k (-1)^k m!/(m-k)! t^{m-k} / c^{k+1} is an antiderivative of e^{ct} t^m.
                let mut w = F::zero();
                let mut cpow = c.clone();
                for k in 0..=m {
                    let falling = factorial::<F>(m) / factorial::<F>(m - k);
                    let term = falling * power(t, m - k) / cpow.clone();
                    w = if k % 2 == 0 { w + term } else { w - term };
                    cpow = cpow * c.clone();
                }
                poly = poly.add(&q.scale(&(w * sign.clone())));
            }
            out.push(Piece { origin: p.origin, shift: p.shift.clone() + c.clone() * t.clone(), lambda: rest.clone(), poly });
        }
    }
    out.retain(|p| !p.poly.is_zero());
    out
}

fn power<F: ConeField>(x: &F, k: usize) -> F {
    (0..k).fold(F::one(), |a, _| a * x.clone())
}

fn collect<F: ConeField>(ps: Vec<Piece<F>>) -> ExpSum<F> {
    ExpSum::new(ps.into_iter().map(|p| (p.shift, p.poly.coeff(&[]))))
}

/// Integrates out the first `q` coordinates over the orthant.
fn integrate_orthant<F: ConeField>(mut ps: Vec<Piece<F>>, q: usize) -> Vec<Piece<F>> {
    for _ in 0..q {
        ps = integrate_halfline_first(ps);
    }
    ps
}

fn check_dims<F: ConeField>(f: &ExponentialPolynomial<F>, cone: &ConeRecord) -> Result<()> {
    if f.dim != cone.dim() {
        return Err(Error::RankMismatch { expected: f.dim, got: cone.dim() });
    }
    Ok(())
}

/// `∫_0^∞ e^{-λx} P(x) dx = Σ_m (D^m P)(0) / λ^{m+1}`, singular at `λ = 0`.
pub fn integral_halfline<F: ConeField>(p: &Polynomial<F>, lambda: &F) -> Result<MeromorphicValue<F>> {
    if p.nvars() != 1 {
        return Err(Error::RankMismatch { expected: 1, got: p.nvars() });
    }
    if lambda.is_zero() {
        return Ok(MeromorphicValue::Singular(vec![Hyperplane { direction: 0, term: 0 }]));
    }
    if lambda.is_negligible() {
        return Err(Error::Degenerate("exponent is numerically zero".into()));
    }
    let mut out = F::zero();
    let mut den = lambda.clone();
    for m in 0..=p.degree() {
        out = out + p.coeff(&[m]) * factorial::<F>(m as usize) / den.clone();
        den = den * lambda.clone();
    }
    Ok(MeromorphicValue::Finite(out))
}

/// The continuation of `I_C(f; λ) = ∫_C f(x) e^{⟨λ,x⟩} dx` at `λ`, for the
/// cone `C` at the origin (the offset of `cone` is ignored).
pub fn i_cone<F: ConeField>(f: &ExponentialPolynomial<F>, cone: &ConeRecord, lambda: &[F]) -> Result<MeromorphicValue<F>> {
    check_dims(f, cone)?;
    if lambda.len() != f.dim {
        return Err(Error::RankMismatch { expected: f.dim, got: lambda.len() });
    }
    let n = f.dim;
    let (a, _) = cone.chart::<F>();
    let ps = pull_back(pieces(f, Some(lambda)), &a, &vec![F::zero(); n], n);
    let hits = hyperplanes(&ps, n)?;
    if !hits.is_empty() {
        return Ok(MeromorphicValue::Singular(hits));
    }
    let total = collect(integrate_orthant(ps, n));
    let v: F = total.terms().iter().fold(F::zero(), |s, (_, a)| s + a.clone());
    Ok(MeromorphicValue::Finite(v * F::from_rational(&cone.volume())))
}

/// `∫^# f(x) τ^C(x - T) dx` with `T` the offset of `cone`.
pub fn sharp_integral<F: ConeField>(f: &ExponentialPolynomial<F>, cone: &ConeRecord) -> Result<MeromorphicValue<ExpSum<F>>> {
    check_dims(f, cone)?;
    let n = f.dim;
    let (a, b) = cone.chart::<F>();
    let ps = pull_back(pieces(f, None), &a, &b, n);
    let hits = hyperplanes(&ps, n)?;
    if !hits.is_empty() {
        return Ok(MeromorphicValue::Singular(hits));
    }
    let vol = F::from_rational(&cone.volume());
    Ok(MeromorphicValue::Finite(collect(integrate_orthant(ps, n)).scale(&vol)))
}

/// `(-1)^n Vol(e_1, …, e_n) e^{⟨λ_0, T⟩} / Π_j ⟨λ_0, e_j⟩`.
pub fn closed_form_pure_exponential<F: ConeField>(lambda0: &[F], cone: &ConeRecord) -> Result<ExpSum<F>> {
    let n = cone.dim();
    if lambda0.len() != n {
        return Err(Error::RankMismatch { expected: n, got: lambda0.len() });
    }
    let mut den = F::one();
    for (j, e) in cone.generators().iter().enumerate() {
        let v = dot(lambda0, &lift::<F>(e));
        if v.is_zero() || v.is_negligible() {
            return Err(Error::Degenerate(format!("exponent vanishes on generator {j}")));
        }
        den = den * v;
    }
    let sign = if n % 2 == 0 { F::one() } else { -F::one() };
    let coeff = sign * F::from_rational(&cone.volume()) / den;
    Ok(ExpSum::new([(dot(lambda0, &lift::<F>(cone.offset())), coeff)]))
}

/// `V = W_1 ⊕ W_2`, each summand given by a basis (rows). Each `W_i` carries
/// Lebesgue measure in the coordinates of its basis.
#[derive(Clone, Debug, PartialEq)]
pub struct Decomposition {
    w1: Matrix<Rational>,
    w2: Matrix<Rational>,
}

impl Decomposition {
    pub fn new(w1: Matrix<Rational>, w2: Matrix<Rational>) -> Result<Self> {
        let n = w1.len() + w2.len();
        if let Some(row) = w1.iter().chain(&w2).find(|r| r.len() != n) {
            return Err(Error::RankMismatch { expected: n, got: row.len() });
        }
        let d = Self { w1, w2 };
        if determinant(&d.columns()).is_zero() {
            return Err(Error::Degenerate("summands do not span".into()));
        }
        Ok(d)
    }

    /// The coordinate split `ℝ^p ⊕ ℝ^q`.
    pub fn coordinate(p: usize, q: usize) -> Result<Self> {
        let id = crate::linalg::identity::<Rational>(p + q);
        Self::new(id[..p].to_vec(), id[p..].to_vec())
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.w1.len(), self.w2.len())
    }

    /// Basis vectors of `W_1` then `W_2` as columns.
    fn columns(&self) -> Matrix<Rational> {
        transpose(&self.w1.iter().chain(&self.w2).cloned().collect::<Vec<_>>())
    }

    /// `|det|` relating `dx` to `dw_1 dw_2`.
    pub fn jacobian(&self) -> Rational {
        determinant(&self.columns()).abs()
    }

    fn embed(basis: &Matrix<Rational>, coords: &[Rational]) -> Vec<Rational> {
        let n = basis.first().map_or(0, Vec::len);
        (0..n).map(|l| basis.iter().zip(coords).fold(Rational::zero(), |s, (b, c)| s + &b[l] * c)).collect()
    }

    /// The cone `C_1 + C_2` of `V` with offset `T_1 + T_2`.
    pub fn combine(&self, c1: &ConeRecord, c2: &ConeRecord) -> Result<ConeRecord> {
        let (p, q) = self.dims();
        if c1.dim() != p || c2.dim() != q {
            return Err(Error::RankMismatch { expected: p, got: c1.dim() });
        }
        let gens = c1
            .generators()
            .iter()
            .map(|e| Self::embed(&self.w1, e))
            .chain(c2.generators().iter().map(|e| Self::embed(&self.w2, e)))
            .collect();
        let t1 = Self::embed(&self.w1, c1.offset());
        let t2 = Self::embed(&self.w2, c2.offset());
        ConeRecord::new(gens, t1.iter().zip(&t2).map(|(a, b)| a + b).collect())
    }

    fn split_pieces<F: ConeField>(&self, f: &ExponentialPolynomial<F>) -> Vec<Piece<F>> {
        let n = f.dim;
        let cols: Vec<Vec<F>> = self.columns().iter().map(|r| lift(r)).collect();
        pull_back(pieces(f, None), &cols, &vec![F::zero(); n], n)
    }
}

/// Block-diagonal chart `(a, u) ↦ (T + E^T a, u)` on the leading `p` coordinates.
fn leading_chart<F: ConeField>(cone: &ConeRecord, rest: usize) -> (Vec<Vec<F>>, Vec<F>) {
    let p = cone.dim();
    let (a, b) = cone.chart::<F>();
    let mut m = vec![vec![F::zero(); p + rest]; p + rest];
    let mut off = vec![F::zero(); p + rest];
    for i in 0..p {
        m[i][..p].clone_from_slice(&a[i]);
        off[i] = b[i].clone();
    }
    for i in p..p + rest {
        m[i][i] = F::one();
    }
    (m, off)
}

#[derive(Clone, Debug, PartialEq)]
pub struct IteratedCheck<F> {
    pub direct: ExpSum<F>,
    pub iterated: ExpSum<F>,
    /// Distinct exponents, in `W_2` coordinates, of the inner #-integral.
    pub inner_exponents: Vec<Vec<F>>,
    /// Inner exponents are restrictions to `W_2` of exponents of `f`.
    pub exponents_restricted: bool,
    pub agree: bool,
}

/// Compares `∫^#_V f τ^C(x - T)` for `C = C_1 + C_2` with the iterated
/// `∫^#_{W_2} (∫^#_{W_1} f(w_1 + w_2) τ^{C_1}(w_1 - T_1) dw_1) τ^{C_2}(w_2 - T_2) dw_2`.
///
/// `c1` and `c2` are given in the coordinates of the respective bases.
pub fn iterated_decomposition_check<F: ConeField>(
    f: &ExponentialPolynomial<F>,
    split: &Decomposition,
    c1: &ConeRecord,
    c2: &ConeRecord,
) -> Result<IteratedCheck<F>> {
    let whole = split.combine(c1, c2)?;
    check_dims(f, &whole)?;
    let direct = sharp_integral(f, &whole)?.into_finite().map_err(degenerate)?;
    let (p, q) = split.dims();
    let ps = split.split_pieces(f);
    let (m, off) = leading_chart::<F>(c1, q);
    let ps = pull_back(ps, &m, &off, p + q);
    let inner = integrate_orthant(ps, p);
    let vol1 = F::from_rational(&c1.volume());
    let restricted: Vec<Vec<F>> = split.split_pieces(f).iter().map(|pc| pc.lambda[p..].to_vec()).collect();
    let mut inner_exponents: Vec<Vec<F>> = Vec::new();
    for pc in &inner {
        if !inner_exponents.contains(&pc.lambda) {
            inner_exponents.push(pc.lambda.clone());
        }
    }
    inner_exponents.sort_by(|a, b| lexicographic(a, b));
    let exponents_restricted = inner_exponents.iter().all(|l| restricted.contains(l));
    let (m2, off2) = c2.chart::<F>();
    let outer = pull_back(inner, &m2, &off2, q);
    if !hyperplanes(&outer, q)?.is_empty() {
        return Err(Error::Degenerate("inner integral has an exponent degenerate for the second cone".into()));
    }
    let scale = vol1 * F::from_rational(&c2.volume()) * F::from_rational(&split.jacobian());
    let iterated = collect(integrate_orthant(outer, q)).scale(&scale);
    let agree = direct.agrees_with(&iterated, 1e-9);
    Ok(IteratedCheck { direct, iterated, inner_exponents, exponents_restricted, agree })
}

fn degenerate(e: Error) -> Error {
    Error::Degenerate(e.to_string())
}

/// A box `[lo, hi]` in `W_1` coordinates carrying a constant weight.
#[derive(Clone, Debug, PartialEq)]
pub struct BoxPiece {
    pub lo: Vec<Rational>,
    pub hi: Vec<Rational>,
    pub weight: Rational,
}

/// `G(x) = g(w_1 - t_1) τ^{C_2}(w_2 - T_2)` with `g` a weighted sum of box
/// indicators on `W_1`; `cone` lives in `W_2` coordinates and carries `T_2`.
/// With `W_1 = 0` a single box of weight `a` gives `a τ^{C_2}`.
#[derive(Clone, Debug, PartialEq)]
pub struct TypeC {
    pub split: Decomposition,
    pub boxes: Vec<BoxPiece>,
    pub t1: Vec<Rational>,
    pub cone: ConeRecord,
}

impl TypeC {
    fn validate(&self) -> Result<()> {
        let (p, q) = self.split.dims();
        if self.cone.dim() != q {
            return Err(Error::RankMismatch { expected: q, got: self.cone.dim() });
        }
        if self.t1.len() != p {
            return Err(Error::RankMismatch { expected: p, got: self.t1.len() });
        }
        for b in &self.boxes {
            if b.lo.len() != p || b.hi.len() != p {
                return Err(Error::RankMismatch { expected: p, got: b.lo.len() });
            }
            if b.lo.iter().zip(&b.hi).any(|(l, h)| l > h) {
                return Err(Error::Degenerate("box with lo > hi".into()));
            }
        }
        Ok(())
    }

    /// Indicator value at `x` (boundaries counted as inside).
    pub fn eval(&self, x: &[Rational]) -> Result<Rational> {
        self.validate()?;
        let (p, _) = self.split.dims();
        let inv = inverse(&self.split.columns()).ok_or_else(|| Error::Internal("basis not invertible".into()))?;
        let c = crate::linalg::mat_vec(&inv, x);
        let (v, u) = c.split_at(p);
        if !self.cone.contains(u) {
            return Ok(Rational::zero());
        }
        let mut s = Rational::zero();
        for b in &self.boxes {
            let inside = (0..p).all(|k| {
                let y = &v[k] - &self.t1[k];
                b.lo[k] <= y && y <= b.hi[k]
            });
            if inside {
                s += &b.weight;
            }
        }
        Ok(s)
    }
}

/// `∫^# f(x) G(x) dx` for a type-(C) function `G`: the inner integral over
/// `W_1` is an ordinary compact integral, the outer one a #-integral.
pub fn sharp_integral_type_c<F: ConeField>(f: &ExponentialPolynomial<F>, g: &TypeC) -> Result<MeromorphicValue<ExpSum<F>>> {
    g.validate()?;
    let (p, q) = g.split.dims();
    if f.dim != p + q {
        return Err(Error::RankMismatch { expected: f.dim, got: p + q });
    }
    let base = g.split.split_pieces(f);
    let mut inner = Vec::new();
    for b in &g.boxes {
        let mut ps = base.clone();
        for k in 0..p {
            let lo = F::from_rational(&(&b.lo[k] + &g.t1[k]));
            let hi = F::from_rational(&(&b.hi[k] + &g.t1[k]));
            ps = integrate_interval_first(ps, &lo, &hi);
        }
        let w = F::from_rational(&b.weight);
        inner.extend(ps.into_iter().map(|mut pc| {
            pc.poly = pc.poly.scale(&w);
            pc
        }));
    }
    let (m, off) = g.cone.chart::<F>();
    let outer = pull_back(inner, &m, &off, q);
    let hits = hyperplanes(&outer, q)?;
    if !hits.is_empty() {
        return Ok(MeromorphicValue::Singular(hits));
    }
    let scale = F::from_rational(&g.cone.volume()) * F::from_rational(&g.split.jacobian());
    Ok(MeromorphicValue::Finite(collect(integrate_orthant(outer, q)).scale(&scale)))
}
