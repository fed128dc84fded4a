//! Exact polynomials in the size parameter `N` and the flow parameter `t`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Sparse polynomial in `(N, t)` with rational coefficients. Terms are keyed
/// by `(N exponent, t exponent)`; zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly {
    terms: BTreeMap<(u32, u32), Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Poly::monomial(c, 0, 0)
    }

    pub fn int(c: i64) -> Self {
        Poly::constant(rat(c))
    }

    pub fn monomial(c: Rational, n_exp: u32, t_exp: u32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((n_exp, t_exp), c);
        }
        Poly { terms }
    }

    /// `N^k`.
    pub fn n_pow(k: u32) -> Self {
        Poly::monomial(Rational::one(), k, 0)
    }

    /// `t^k`.
    pub fn t_pow(k: u32) -> Self {
        Poly::monomial(Rational::one(), 0, k)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, u32, &Rational)> {
        self.terms.iter().map(|(&(n, t), c)| (n, t, c))
    }

    pub fn coefficient(&self, n_exp: u32, t_exp: u32) -> Rational {
        self.terms.get(&(n_exp, t_exp)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, c: Rational, n_exp: u32, t_exp: u32) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry((n_exp, t_exp)).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&(n_exp, t_exp));
        }
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect() }
    }

    pub fn shift_n(&self, k: u32) -> Poly {
        Poly { terms: self.terms.iter().map(|(&(n, t), v)| ((n + k, t), v.clone())).collect() }
    }

    pub fn max_n_degree(&self) -> u32 {
        self.terms.keys().map(|k| k.0).max().unwrap_or(0)
    }

    pub fn max_t_degree(&self) -> u32 {
        self.terms.keys().map(|k| k.1).max().unwrap_or(0)
    }

    /// `∂/∂t`.
    pub fn derivative_t(&self) -> Poly {
        let mut out = Poly::zero();
        for (&(n, t), c) in &self.terms {
            if t > 0 {
                out.add_term(c * rat(t as i64), n, t - 1);
            }
        }
        out
    }

    pub fn eval(&self, n: &Rational, t: &Rational) -> Rational {
        self.terms.iter().fold(Rational::zero(), |acc, (&(ne, te), c)| {
            acc + c * pow(n, ne) * pow(t, te)
        })
    }

    pub fn eval_n(&self, n: i64) -> Rational {
        self.eval(&rat(n), &Rational::zero())
    }

    /// Substitutes a value for `t`, leaving a polynomial in `N`.
    pub fn subs_t(&self, t: &Rational) -> Poly {
        let mut out = Poly::zero();
        for (&(ne, te), c) in &self.terms {
            out.add_term(c * pow(t, te), ne, 0);
        }
        out
    }

    pub fn eval_f64(&self, n: f64, t: f64) -> f64 {
        self.terms
            .iter()
            .map(|(&(ne, te), c)| c.to_f64().unwrap_or(f64::NAN) * n.powi(ne as i32) * t.powi(te as i32))
            .sum()
    }

    /// Drops all terms with `t` exponent above `max`.
    pub fn truncate_t(&self, max: u32) -> Poly {
        Poly { terms: self.terms.iter().filter(|(k, _)| k.1 <= max).map(|(k, v)| (*k, v.clone())).collect() }
    }
}

pub fn pow(x: &Rational, e: u32) -> Rational {
    num_traits::pow(x.clone(), e as usize)
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (&(n, t), c)) in self.terms.iter().rev().enumerate() {
            let sign = if c.is_negative() { "-" } else { "+" };
            if i == 0 {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let a = c.abs();
            let has_symbol = n > 0 || t > 0;
            if !a.is_one() || !has_symbol {
                write!(f, "{a}")?;
                if has_symbol {
                    f.write_str("*")?;
                }
            }
            let mut parts = Vec::new();
            match n {
                0 => {}
                1 => parts.push("N".to_string()),
                _ => parts.push(format!("N^{n}")),
            }
            match t {
                0 => {}
                1 => parts.push("t".to_string()),
                _ => parts.push(format!("t^{t}")),
            }
            f.write_str(&parts.join("*"))?;
        }
        Ok(())
    }
}

impl AddAssign<&Poly> for Poly {
    fn add_assign(&mut self, rhs: &Poly) {
        for (&(n, t), c) in &rhs.terms {
            self.add_term(c.clone(), n, t);
        }
    }
}

impl SubAssign<&Poly> for Poly {
    fn sub_assign(&mut self, rhs: &Poly) {
        for (&(n, t), c) in &rhs.terms {
            self.add_term(-c.clone(), n, t);
        }
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(mut self, rhs: Poly) -> Poly {
        self += &rhs;
        self
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(mut self, rhs: Poly) -> Poly {
        self -= &rhs;
        self
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { terms: self.terms.iter().map(|(k, v)| (*k, -v.clone())).collect() }
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (&(n1, t1), c1) in &self.terms {
            for (&(n2, t2), c2) in &rhs.terms {
                out.add_term(c1 * c2, n1 + n2, t1 + t2);
            }
        }
        out
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_is_exact() {
        let a = Poly::n_pow(3) + Poly::int(1);
        let b = Poly::n_pow(3) - Poly::int(1);
        assert_eq!(&a * &b, Poly::n_pow(6) - Poly::int(1));
        assert!((&a - &a).is_zero());
        assert_eq!(a.eval_n(2), rat(9));
    }

    #[test]
    fn t_derivative_and_substitution() {
        let p = Poly::monomial(ratio(1, 2), 2, 3) + Poly::t_pow(1);
        assert_eq!(p.derivative_t(), Poly::monomial(ratio(3, 2), 2, 2) + Poly::one());
        assert_eq!(p.subs_t(&rat(2)), Poly::monomial(rat(4), 2, 0) + Poly::int(2));
    }

    #[test]
    fn display() {
        let p = Poly::n_pow(6) + Poly::n_pow(3);
        assert_eq!(p.to_string(), "N^6 + N^3");
        assert_eq!(Poly::monomial(ratio(-1, 3), 1, 2).to_string(), "-1/3*N*t^2");
    }
}
