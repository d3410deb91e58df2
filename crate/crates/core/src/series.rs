//! Truncated multivariate power series with exact rational coefficients.
//!
//! A [`Ring`] fixes the variables and the truncation degree; series are dense
//! coefficient vectors over the ring's monomials, ordered by total degree
//! and then by exponent vector.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_rational::Ratio;
use num_traits::{One, Zero};

pub type Q = Ratio<i128>;

#[derive(Debug)]
pub struct Ring {
    vars: Vec<String>,
    degree: usize,
    monomials: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
    total: Vec<usize>,
    /// product index for every pair of monomials whose degrees fit
    mul: Vec<Vec<u32>>,
}

const NONE: u32 = u32::MAX;

impl Ring {
    pub fn new(vars: Vec<String>, degree: usize) -> Arc<Ring> {
        let n = vars.len();
        let mut monomials = Vec::new();
        fn rec(n: usize, left: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            if cur.len() == n {
                out.push(cur.clone());
                return;
            }
            for e in 0..=left {
                cur.push(e as u32);
                rec(n, left - e, cur, out);
                cur.pop();
            }
        }
        rec(n, degree, &mut Vec::new(), &mut monomials);
        let deg = |m: &Vec<u32>| m.iter().sum::<u32>() as usize;
        monomials.sort_by(|a, b| deg(a).cmp(&deg(b)).then_with(|| b.cmp(a)));
        let index: HashMap<Vec<u32>, usize> = monomials.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        let total: Vec<usize> = monomials.iter().map(deg).collect();
        let mul = monomials
            .iter()
            .map(|a| {
                monomials
                    .iter()
                    .map(|b| {
                        let prod: Vec<u32> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                        index.get(&prod).map_or(NONE, |&k| k as u32)
                    })
                    .collect()
            })
            .collect();
        Arc::new(Ring { vars, degree, monomials, index, total, mul })
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn monomial(&self, i: usize) -> &[u32] {
        &self.monomials[i]
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }
}

#[derive(Clone)]
pub struct Series {
    ring: Arc<Ring>,
    coeffs: Vec<Q>,
}

impl fmt::Debug for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Series[{}]", self.to_text().trim_end().replace('\n', "; "))
    }
}

impl PartialEq for Series {
    fn eq(&self, other: &Series) -> bool {
        Arc::ptr_eq(&self.ring, &other.ring) && self.coeffs == other.coeffs
    }
}

impl Series {
    pub fn zero(ring: &Arc<Ring>) -> Series {
        Series { ring: ring.clone(), coeffs: vec![Q::zero(); ring.len()] }
    }

    pub fn constant(ring: &Arc<Ring>, c: Q) -> Series {
        let mut s = Series::zero(ring);
        s.coeffs[0] = c;
        s
    }

    pub fn one(ring: &Arc<Ring>) -> Series {
        Series::constant(ring, Q::one())
    }

    /// The variable `name`; zero when the truncation degree is 0.
    pub fn var(ring: &Arc<Ring>, name: &str) -> Series {
        let i = ring.var_index(name).unwrap_or_else(|| panic!("unknown variable {name}"));
        let mut exps = vec![0; ring.vars.len()];
        exps[i] = 1;
        let mut s = Series::zero(ring);
        if let Some(&k) = ring.index.get(&exps) {
            s.coeffs[k] = Q::one();
        }
        s
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn constant_term(&self) -> Q {
        self.coeffs[0]
    }

    /// Coefficient of the monomial with the given exponents (one per ring
    /// variable); zero beyond the truncation degree.
    pub fn coeff(&self, exps: &[u32]) -> Q {
        self.ring.index.get(exps).map_or(Q::zero(), |&k| self.coeffs[k])
    }

    /// Coefficient of a monomial written as (variable, exponent) pairs.
    pub fn coeff_of(&self, term: &[(&str, u32)]) -> Q {
        let mut exps = vec![0; self.ring.vars.len()];
        for &(name, e) in term {
            match self.ring.var_index(name) {
                Some(i) => exps[i] += e,
                None => return Q::zero(),
            }
        }
        self.coeff(&exps)
    }

    /// Coefficients of a one-variable series, degree 0 upwards.
    pub fn univariate(&self) -> Vec<Q> {
        assert!(self.ring.vars.len() <= 1);
        (0..=self.ring.degree)
            .map(|d| if self.ring.vars.is_empty() { if d == 0 { self.coeffs[0] } else { Q::zero() } } else { self.coeff(&[d as u32]) })
            .collect()
    }

    /// Entries (monomial index, coefficient) of the given total degree.
    pub fn degree_part(&self, d: usize) -> Vec<(usize, Q)> {
        (0..self.coeffs.len())
            .filter(|&i| self.ring.total[i] == d)
            .map(|i| (i, self.coeffs[i]))
            .collect()
    }

    pub fn scale(&self, c: Q) -> Series {
        Series { ring: self.ring.clone(), coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    pub fn add_assign_ref(&mut self, other: &Series) {
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            if !b.is_zero() {
                *a += b;
            }
        }
    }

    /// `self += a * b`
    pub fn add_product(&mut self, a: &Series, b: &Series) {
        let table = &self.ring.mul;
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let row = &table[i];
            for (j, y) in b.coeffs.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let k = row[j];
                if k != NONE {
                    self.coeffs[k as usize] += x * y;
                }
            }
        }
    }

    /// Multiplicative inverse; requires a nonzero constant term.
    pub fn recip(&self) -> Series {
        let c0 = self.coeffs[0];
        assert!(!c0.is_zero(), "series has no inverse");
        let inv0 = Q::one() / c0;
        let mut tail = self.clone();
        tail.coeffs[0] = Q::zero();
        // b = (1 - tail * b) / c0, gaining one degree per pass
        let mut b = Series::constant(&self.ring, inv0);
        for _ in 0..self.ring.degree {
            let mut next = Series::one(&self.ring);
            let mut prod = Series::zero(&self.ring);
            prod.add_product(&tail, &b);
            next = next - prod;
            b = next.scale(inv0);
        }
        b
    }

    pub fn pow(&self, n: usize) -> Series {
        let mut out = Series::one(&self.ring);
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    /// Logarithm of a series with constant term 1.
    pub fn log(&self) -> Series {
        assert!(self.coeffs[0].is_one(), "log needs constant term 1");
        let mut x = self.clone();
        x.coeffs[0] = Q::zero();
        let mut out = Series::zero(&self.ring);
        let mut power = Series::one(&self.ring);
        for k in 1..=self.ring.degree {
            power = &power * &x;
            let sign = if k % 2 == 1 { 1 } else { -1 };
            out.add_assign_ref(&power.scale(Q::new(sign, k as i128)));
        }
        out
    }

    /// True when every coefficient is non-negative.
    pub fn is_nonnegative(&self) -> bool {
        self.coeffs.iter().all(|c| *c >= Q::zero())
    }

    /// Text form: one line per nonzero term, "coeff var^e ...", in the
    /// ring's monomial order. Integers print bare, other values as a/b.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            out.push_str(&format_q(c));
            for (v, &e) in self.ring.vars.iter().zip(&self.ring.monomials[i]) {
                match e {
                    0 => {}
                    1 => out.push_str(&format!(" {v}")),
                    _ => out.push_str(&format!(" {v}^{e}")),
                }
            }
            out.push('\n');
        }
        out
    }
}

pub fn format_q(c: &Q) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl Add for Series {
    type Output = Series;
    fn add(mut self, other: Series) -> Series {
        self.add_assign_ref(&other);
        self
    }
}

impl Sub for Series {
    type Output = Series;
    fn sub(mut self, other: Series) -> Series {
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a -= b;
        }
        self
    }
}

impl Neg for Series {
    type Output = Series;
    fn neg(self) -> Series {
        self.scale(-Q::one())
    }
}

impl Mul for &Series {
    type Output = Series;
    fn mul(self, other: &Series) -> Series {
        let mut out = Series::zero(&self.ring);
        out.add_product(self, other);
        out
    }
}

impl Mul for Series {
    type Output = Series;
    fn mul(self, other: Series) -> Series {
        &self * &other
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i128) -> Q {
        Q::from_integer(n)
    }

    #[test]
    fn geometric_series() {
        let ring = Ring::new(vec!["x".into()], 5);
        let x = Series::var(&ring, "x");
        let s = (Series::one(&ring) - x).recip();
        assert_eq!(s.univariate(), vec![q(1); 6]);
    }

    #[test]
    fn log_of_exp_like() {
        let ring = Ring::new(vec!["x".into()], 4);
        let x = Series::var(&ring, "x");
        let l = (Series::one(&ring) + x).log();
        assert_eq!(l.univariate(), vec![q(0), q(1), Q::new(-1, 2), Q::new(1, 3), Q::new(-1, 4)]);
    }

    #[test]
    fn truncation_and_text() {
        let ring = Ring::new(vec!["a".into(), "b".into()], 2);
        let a = Series::var(&ring, "a");
        let b = Series::var(&ring, "b");
        let s = (Series::one(&ring) + a.clone() + b.clone()).pow(3);
        assert_eq!(s.coeff_of(&[("a", 1), ("b", 1)]), q(6));
        assert_eq!(s.coeff_of(&[("a", 3)]), q(0));
        assert_eq!(s.to_text(), "1\n3 a\n3 b\n3 a^2\n6 a b\n3 b^2\n");
        let half = a.scale(Q::new(1, 2));
        assert_eq!(half.to_text(), "1/2 a\n");
    }

    #[test]
    fn recip_multivariate() {
        let ring = Ring::new(vec!["a".into(), "b".into()], 3);
        let s = Series::constant(&ring, q(2)) + Series::var(&ring, "a") - Series::var(&ring, "b").scale(q(3));
        let inv = s.recip();
        assert_eq!(&inv * &s, Series::one(&ring));
    }
}
