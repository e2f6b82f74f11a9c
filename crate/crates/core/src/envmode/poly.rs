use std::ops::{Add, Mul};

use crate::C64;

/// Polynomial Σ c_ij x^i p^j with complex coefficients, `coeffs[i][j]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly2 {
    coeffs: Vec<Vec<C64>>,
}

impl Poly2 {
    pub fn constant(c: C64) -> Self {
        Self { coeffs: vec![vec![c]] }
    }

    pub fn zero() -> Self {
        Self::constant(C64::ZERO)
    }

    /// c0 + cx·x + cp·p.
    pub fn linear(c0: C64, cx: C64, cp: C64) -> Self {
        Self { coeffs: vec![vec![c0, cp], vec![cx, C64::ZERO]] }
    }

    /// Single term c·x^i p^j.
    pub fn monomial(c: C64, i: usize, j: usize) -> Self {
        let mut coeffs = vec![vec![C64::ZERO; j + 1]; i + 1];
        coeffs[i][j] = c;
        Self { coeffs }
    }

    pub fn coefficient(&self, i: usize, j: usize) -> C64 {
        self.coeffs.get(i).and_then(|r| r.get(j)).copied().unwrap_or(C64::ZERO)
    }

    /// Nonzero terms as (i, j, c).
    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, C64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().enumerate().map(move |(j, &c)| (i, j, c)))
            .filter(|t| t.2 != C64::ZERO)
    }

    pub fn degree(&self) -> usize {
        self.terms().map(|(i, j, _)| i + j).max().unwrap_or(0)
    }

    pub fn eval(&self, x: f64, p: f64) -> C64 {
        self.terms().map(|(i, j, c)| c * x.powi(i as i32) * p.powi(j as i32)).sum()
    }

    pub fn scale(&self, s: C64) -> Self {
        Self { coeffs: self.coeffs.iter().map(|r| r.iter().map(|c| c * s).collect()).collect() }
    }

    pub fn pow(&self, n: usize) -> Self {
        (0..n).fold(Self::constant(C64::ONE), |acc, _| &acc * self)
    }
}

impl Add for &Poly2 {
    type Output = Poly2;
    fn add(self, rhs: &Poly2) -> Poly2 {
        let ni = self.coeffs.len().max(rhs.coeffs.len());
        let nj = self.coeffs.iter().chain(&rhs.coeffs).map(Vec::len).max().unwrap_or(1);
        let coeffs = (0..ni).map(|i| (0..nj).map(|j| self.coefficient(i, j) + rhs.coefficient(i, j)).collect()).collect();
        Poly2 { coeffs }
    }
}

impl Mul for &Poly2 {
    type Output = Poly2;
    fn mul(self, rhs: &Poly2) -> Poly2 {
        let ni = self.coeffs.len() + rhs.coeffs.len() - 1;
        let nj = self.coeffs.iter().map(Vec::len).max().unwrap_or(1) + rhs.coeffs.iter().map(Vec::len).max().unwrap_or(1) - 1;
        let mut coeffs = vec![vec![C64::ZERO; nj]; ni];
        for (i1, j1, a) in self.terms() {
            for (i2, j2, b) in rhs.terms() {
                coeffs[i1 + i2][j1 + j2] += a * b;
            }
        }
        Poly2 { coeffs }
    }
}
