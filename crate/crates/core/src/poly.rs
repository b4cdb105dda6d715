//! Sparse polynomials in 3 or 4 Cartesian variables.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};

pub type Exponent = Vec<u32>;

/// Sparse real polynomial; [`HomogPoly::is_homogeneous`] checks the grading.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct HomogPoly {
    pub nvars: usize,
    pub terms: BTreeMap<Exponent, f64>,
}

impl HomogPoly {
    pub fn zero(nvars: usize) -> Self {
        Self { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: f64) -> Self {
        Self::monomial(vec![0; nvars], c)
    }

    pub fn monomial(exp: Exponent, c: f64) -> Self {
        let mut p = Self::zero(exp.len());
        if c != 0.0 {
            p.terms.insert(exp, c);
        }
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(e, 1.0)
    }

    /// Σ_{i ∈ vars} x_i².
    pub fn sum_of_squares(nvars: usize, vars: &[usize]) -> Self {
        let mut p = Self::zero(nvars);
        for &i in vars {
            let mut e = vec![0; nvars];
            e[i] = 2;
            p.add_term(e, 1.0);
        }
        p
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

    fn add_term(&mut self, exp: Exponent, c: f64) {
        match self.terms.get_mut(&exp) {
            Some(v) => {
                *v += c;
                if *v == 0.0 {
                    self.terms.remove(&exp);
                }
            }
            None if c != 0.0 => {
                self.terms.insert(exp, c);
            }
            None => {}
        }
    }

    /// Total degree of the stored terms, if they agree.
    pub fn degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(|e| e.iter().sum::<u32>());
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.degree().is_some()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), *c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1.0))
    }

    pub fn scale(&self, s: f64) -> Self {
        if s == 0.0 {
            return Self::zero(self.nvars);
        }
        Self { nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (e.clone(), c * s)).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Exponent = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::constant(self.nvars, 1.0), |acc, _| acc.mul(self))
    }

    /// Drops coefficients below `rel` times the largest magnitude.
    pub fn pruned(&self, rel: f64) -> Self {
        let cut = rel * self.max_abs();
        Self {
            nvars: self.nvars,
            terms: self.terms.iter().filter(|(_, c)| c.abs() > cut).map(|(e, c)| (e.clone(), *c)).collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.terms.values().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Euclidean norm of the coefficient vector.
    pub fn coeff_norm(&self) -> f64 {
        self.terms.values().map(|c| c * c).sum::<f64>().sqrt()
    }

    /// Scales so that the lexicographically largest stored term has
    /// coefficient 1.
    pub fn normalized(&self) -> Self {
        match self.terms.values().next_back() {
            Some(&c) => self.scale(1.0 / c),
            None => self.clone(),
        }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| c * e.iter().zip(x).map(|(k, xi)| xi.powi(*k as i32)).product::<f64>())
            .sum()
    }

    /// ∂/∂x_i.
    pub fn derivative(&self, i: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut f = e.clone();
                f[i] -= 1;
                out.add_term(f, c * e[i] as f64);
            }
        }
        out
    }

    /// Euclidean Laplacian, computed term by term.
    pub fn laplacian(&self) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            for i in 0..self.nvars {
                if e[i] >= 2 {
                    let mut f = e.clone();
                    f[i] -= 2;
                    out.add_term(f, c * (e[i] * (e[i] - 1)) as f64);
                }
            }
        }
        out
    }

    /// Parity under x_i → −x_i for every axis (1 = odd).
    pub fn classify_symmetry(&self) -> Result<Vec<u8>> {
        if self.is_zero() {
            return Err(Error::InvalidProblem("zero polynomial has no parity".into()));
        }
        let mut bits = vec![None; self.nvars];
        for e in self.terms.keys() {
            for (axis, k) in e.iter().enumerate() {
                let b = (k % 2) as u8;
                match bits[axis] {
                    None => bits[axis] = Some(b),
                    Some(prev) if prev != b => return Err(Error::MixedParity { axis }),
                    _ => {}
                }
            }
        }
        Ok(bits.into_iter().map(|b| b.unwrap()).collect())
    }

    /// Coefficients on the given monomial basis; terms outside it are dropped.
    pub fn to_vector(&self, basis: &[Exponent]) -> Vec<f64> {
        basis.iter().map(|e| self.terms.get(e).copied().unwrap_or(0.0)).collect()
    }

    pub fn from_vector(basis: &[Exponent], v: &[f64]) -> Self {
        let nvars = basis.first().map_or(0, |e| e.len());
        let mut p = Self::zero(nvars);
        for (e, c) in basis.iter().zip(v) {
            if *c != 0.0 {
                p.terms.insert(e.clone(), *c);
            }
        }
        p
    }

    /// Substitutes x_i → x_{perm[i]}; `perm` must be a permutation of 0..nvars.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let mut seen = vec![false; self.nvars];
        if perm.len() != self.nvars || perm.iter().any(|&p| p >= self.nvars || std::mem::replace(&mut seen[p], true)) {
            return Err(Error::InvalidProblem(format!("{perm:?} is not a permutation of {} variables", self.nvars)));
        }
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut f = vec![0; self.nvars];
            for (i, &k) in e.iter().enumerate() {
                f[perm[i]] = k;
            }
            out.terms.insert(f, *c);
        }
        Ok(out)
    }

    /// One "coeff  i j k l" line per term, in lexicographic exponent order.
    pub fn export(&self) -> String {
        let mut s = String::new();
        for (e, c) in &self.terms {
            let idx: Vec<String> = e.iter().map(|k| k.to_string()).collect();
            let _ = writeln!(s, "{c:e}  {}", idx.join(" "));
        }
        s
    }

    /// Inner product of the restrictions to the unit sphere, with the
    /// normalised surface measure.
    pub fn sphere_inner(&self, other: &Self) -> f64 {
        let mut acc = 0.0;
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Exponent = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                acc += c1 * c2 * sphere_moment(&e);
            }
        }
        acc
    }
}

/// Mean of x^e over the unit sphere in R^n, n = e.len().
pub fn sphere_moment(e: &[u32]) -> f64 {
    if e.iter().any(|k| k % 2 == 1) {
        return 0.0;
    }
    let n = e.len() as f64;
    let mut num = 1.0;
    let mut total = 0;
    for &k in e {
        for j in 0..(k / 2) {
            num *= j as f64 + 0.5;
        }
        total += k / 2;
    }
    let mut den = 1.0;
    for j in 0..total {
        den *= j as f64 + 0.5 * n;
    }
    num / den
}

/// All exponents of total degree `degree` in `nvars` variables, descending
/// lexicographic order.
pub fn monomials(nvars: usize, degree: u32) -> Vec<Exponent> {
    fn rec(left: usize, degree: u32, prefix: &mut Exponent, out: &mut Vec<Exponent>) {
        if left == 1 {
            prefix.push(degree);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for k in (0..=degree).rev() {
            prefix.push(k);
            rec(left - 1, degree - k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if nvars > 0 {
        rec(nvars, degree, &mut Vec::new(), &mut out);
    }
    out
}

/// Real and imaginary parts of (x_a + i x_b)^k.
pub fn complex_power(nvars: usize, a: usize, b: usize, k: u32) -> (HomogPoly, HomogPoly) {
    let mut re = HomogPoly::zero(nvars);
    let mut im = HomogPoly::zero(nvars);
    let mut binom = 1.0;
    for j in 0..=k {
        // term C(k,j) x_a^{k−j} (i x_b)^j
        let mut e = vec![0; nvars];
        e[a] = k - j;
        e[b] += j;
        let sign = if (j / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if j % 2 == 0 {
            re.add_term(e, sign * binom);
        } else {
            im.add_term(e, sign * binom);
        }
        binom = binom * (k - j) as f64 / (j + 1) as f64;
    }
    (re, im)
}

/// r^n c(x/r) for a polynomial c of parity n, with r² = `r2`.
pub fn homogenize(c: &[f64], x: &HomogPoly, r2: &HomogPoly, n: u32) -> HomogPoly {
    let mut out = HomogPoly::zero(x.nvars);
    for (j, cj) in c.iter().enumerate() {
        let j = j as u32;
        if *cj == 0.0 || j > n || (n - j) % 2 == 1 {
            continue;
        }
        out = out.add(&x.pow(j).mul(&r2.pow((n - j) / 2)).scale(*cj));
    }
    out
}
