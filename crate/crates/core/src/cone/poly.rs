//! Sparse multivariate polynomials keyed by exponent multi-index.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use num_complex::Complex64;

use super::field::ConeField;

pub const MAX_DEGREE: u32 = 8;
pub const MAX_VARS: usize = 4;

#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial<F> {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, F>,
}

impl<F: ConeField> Polynomial<F> {
    pub fn zero(nvars: usize) -> Self {
        Self { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: F) -> Self {
        Self::from_terms(nvars, [(vec![0; nvars], c)])
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, F::one())
    }

    /// The coordinate function `x_i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::from_terms(nvars, [(e, F::one())])
    }

    /// Sums repeated exponents and drops zero coefficients.
    ///
    /// # Panics
    ///
    /// Panics if an exponent vector has the wrong length.
    pub fn from_terms<I: IntoIterator<Item = (Vec<u32>, F)>>(nvars: usize, terms: I) -> Self {
        let mut out = Self::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent length");
            out.add_term(e, c);
        }
        out
    }

    /// `Σ c_m t^m` in one variable.
    pub fn univariate(coeffs: &[F]) -> Self {
        Self::from_terms(1, coeffs.iter().enumerate().map(|(m, c)| (vec![m as u32], c.clone())))
    }

    fn add_term(&mut self, e: Vec<u32>, c: F) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = o.get().clone() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
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

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &F)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &[u32]) -> F {
        self.terms.get(e).cloned().unwrap_or_else(F::zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-F::one()))
    }

    pub fn scale(&self, c: &F) -> Self {
        Self::from_terms(self.nvars, self.terms.iter().map(|(e, v)| (e.clone(), v.clone() * c.clone())))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1.clone() * c2.clone());
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(self.nvars), |acc, _| acc.mul(self))
    }

    pub fn convert<G: ConeField>(&self, f: impl Fn(&F) -> G) -> Polynomial<G> {
        Polynomial::from_terms(self.nvars, self.terms.iter().map(|(e, c)| (e.clone(), f(c))))
    }

    pub fn eval(&self, x: &[F]) -> F {
        self.terms.iter().fold(F::zero(), |s, (e, c)| {
            let m = e.iter().zip(x).fold(c.clone(), |p, (&k, xi)| (0..k).fold(p, |q, _| q * xi.clone()));
            s + m
        })
    }

    pub fn eval_complex(&self, x: &[Complex64]) -> Complex64 {
        self.terms.iter().fold(Complex64::new(0.0, 0.0), |s, (e, c)| {
            s + e.iter().zip(x).fold(c.to_complex(), |p, (&k, xi)| p * xi.powu(k))
        })
    }

    pub fn derivative(&self, var: usize) -> Self {
        Self::from_terms(
            self.nvars,
            self.terms.iter().filter(|(e, _)| e[var] > 0).map(|(e, c)| {
                let mut e2 = e.clone();
                e2[var] -= 1;
                (e2, c.clone() * F::from_i64(e[var] as i64))
            }),
        )
    }

    /// `P(A y + b)` as a polynomial in `y ∈ F^m`, where `A` is `nvars × m`.
    pub fn compose_affine(&self, a: &[Vec<F>], b: &[F], m: usize) -> Self {
        let images: Vec<Polynomial<F>> = (0..self.nvars)
            .map(|i| {
                let mut p = Self::constant(m, b[i].clone());
                for (j, aij) in a[i].iter().enumerate() {
                    p = p.add(&Self::var(m, j).scale(aij));
                }
                p
            })
            .collect();
        let mut out = Self::zero(m);
        for (e, c) in &self.terms {
            let mut mono = Self::constant(m, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    mono = mono.mul(&images[i].pow(k));
                }
            }
            out = out.add(&mono);
        }
        out
    }

    /// Coefficients `Q_m` of `P = Σ_m x_0^m Q_m(x_1, …)`.
    pub fn split_first(&self) -> Vec<Polynomial<F>> {
        let mut out: Vec<Polynomial<F>> = Vec::new();
        for (e, c) in &self.terms {
            let m = e[0] as usize;
            if out.len() <= m {
                out.resize(m + 1, Self::zero(self.nvars - 1));
            }
            out[m].add_term(e[1..].to_vec(), c.clone());
        }
        out
    }
}
