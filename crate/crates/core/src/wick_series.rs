//! Truncated formal power series in the couplings `λ_Γ`.
//!
//! Monomials are multisets of canonical graph keys; coefficients are exact
//! polynomials in `N` (and `t` where the flow module needs it). The grading
//! is the total vertex count `Σ 2 p_Γ m_Γ`.

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::colored_graph::{enumerate_graphs_of_size, ColoredGraph, GraphKey};
use crate::error::{Error, Result};
use crate::poly::{rat, Poly, Rational};
use crate::tensor_eval::face_count;

/// A commutative monomial `Π λ_Γ^{m_Γ}`, or equivalently a multi-trace
/// observable `Π Tr_Γ^{m_Γ}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(BTreeMap<GraphKey, u32>);

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn single(key: GraphKey) -> Self {
        Monomial::from_keys([key])
    }

    pub fn from_keys<I: IntoIterator<Item = GraphKey>>(keys: I) -> Self {
        let mut map = BTreeMap::new();
        for k in keys {
            *map.entry(k).or_insert(0) += 1;
        }
        Monomial(map)
    }

    /// Connected components of `g` as a monomial, plus the loop count.
    pub fn of_graph(g: &ColoredGraph) -> (Self, usize) {
        let (comps, loops) = g.connected_components();
        (Monomial::from_keys(comps.iter().map(|c| c.canonical_form())), loops)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn power(&self, key: &GraphKey) -> u32 {
        self.0.get(key).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&GraphKey, u32)> {
        self.0.iter().map(|(k, &m)| (k, m))
    }

    /// Keys with repetition.
    pub fn keys(&self) -> Vec<GraphKey> {
        self.0.iter().flat_map(|(k, &m)| std::iter::repeat(k.clone()).take(m as usize)).collect()
    }

    /// Total vertex count `Σ 2 p m`.
    pub fn order(&self) -> usize {
        self.0.iter().map(|(k, &m)| k.vertex_count() * m as usize).sum()
    }

    /// `Σ p m`, the eigenvalue of the Euler operator `Σ p λ ∂_λ`.
    pub fn white_count(&self) -> usize {
        self.0.iter().map(|(k, &m)| k.p() * m as usize).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut map = self.0.clone();
        for (k, &m) in &other.0 {
            *map.entry(k.clone()).or_insert(0) += m;
        }
        Monomial(map)
    }

    /// Removes one factor of `key`, if present.
    pub fn without(&self, key: &GraphKey) -> Option<Monomial> {
        let mut map = self.0.clone();
        let m = map.get_mut(key)?;
        *m -= 1;
        if *m == 0 {
            map.remove(key);
        }
        Some(Monomial(map))
    }

    /// The disjoint union of the factors.
    pub fn graph(&self, d: usize) -> ColoredGraph {
        let graphs: Vec<ColoredGraph> = self.keys().iter().map(|k| k.decode()).collect();
        ColoredGraph::union_all(d, &graphs).expect("keys share D")
    }

    /// `Π m_Γ!`.
    pub fn multiplicity_factorial(&self) -> BigInt {
        self.0.values().fold(BigInt::one(), |acc, &m| acc * factorial_big(m as usize))
    }

    /// `Π C_Γ^{m_Γ} m_Γ!`, the symmetry factor of the disjoint union.
    pub fn symmetry_factor(&self) -> BigInt {
        self.0.iter().fold(BigInt::one(), |acc, (k, &m)| {
            acc * BigInt::from(k.decode().automorphism_count()).pow(m) * factorial_big(m as usize)
        })
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(k, &m)| if m == 1 { format!("λ[{k}]") } else { format!("λ[{k}]^{m}") })
            .collect();
        f.write_str(&parts.join("·"))
    }
}

pub(crate) fn factorial_big(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Truncated series `Σ_μ c_μ(N, t) μ` keeping monomials of vertex order
/// `≤ max_order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CouplingSeries {
    terms: BTreeMap<Monomial, Poly>,
    max_order: usize,
}

impl CouplingSeries {
    pub fn zero(max_order: usize) -> Self {
        CouplingSeries { terms: BTreeMap::new(), max_order }
    }

    pub fn one(max_order: usize) -> Self {
        let mut s = Self::zero(max_order);
        s.add_term(Monomial::one(), &Poly::one());
        s
    }

    /// The single coupling `λ_key`, or zero when it exceeds the truncation.
    pub fn variable(key: GraphKey, max_order: usize) -> Self {
        let mut s = Self::zero(max_order);
        s.add_term(Monomial::single(key), &Poly::one());
        s
    }

    pub fn max_order(&self) -> usize {
        self.max_order
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Poly)> {
        self.terms.iter()
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

    pub fn coefficient(&self, m: &Monomial) -> Poly {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn constant_term(&self) -> Poly {
        self.coefficient(&Monomial::one())
    }

    pub fn add_term(&mut self, m: Monomial, c: &Poly) {
        if m.order() > self.max_order || c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m.clone()).or_default();
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn add(&self, other: &CouplingSeries) -> CouplingSeries {
        let mut out = CouplingSeries { terms: self.terms.clone(), max_order: self.max_order.min(other.max_order) };
        out.retain_order();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &CouplingSeries) -> CouplingSeries {
        self.add(&other.scale(&Poly::int(-1)))
    }

    pub fn scale(&self, c: &Poly) -> CouplingSeries {
        let mut out = CouplingSeries::zero(self.max_order);
        for (m, x) in &self.terms {
            out.add_term(m.clone(), &(x * c));
        }
        out
    }

    pub fn mul(&self, other: &CouplingSeries) -> CouplingSeries {
        let mut out = CouplingSeries::zero(self.max_order.min(other.max_order));
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                if m1.order() + m2.order() <= out.max_order {
                    out.add_term(m1.mul(m2), &(c1 * c2));
                }
            }
        }
        out
    }

    /// Multiplies by a monomial. The truncation order rises by its order.
    pub fn mul_monomial(&self, m: &Monomial) -> CouplingSeries {
        let mut out = CouplingSeries::zero(self.max_order + m.order());
        for (m2, c) in &self.terms {
            out.add_term(m.mul(m2), c);
        }
        out
    }

    /// Replaces every coefficient by `f(monomial, coefficient)`.
    pub fn map_coefficients(&self, f: impl Fn(&Monomial, &Poly) -> Poly) -> CouplingSeries {
        let mut out = CouplingSeries::zero(self.max_order);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), &f(m, c));
        }
        out
    }

    pub fn with_max_order(&self, max_order: usize) -> CouplingSeries {
        let mut out = CouplingSeries { terms: self.terms.clone(), max_order };
        out.retain_order();
        out
    }

    fn retain_order(&mut self) {
        let max = self.max_order;
        self.terms.retain(|m, _| m.order() <= max);
    }

    /// `∂/∂λ_key`. The truncation order drops by the vertex count of `key`.
    pub fn differentiate(&self, key: &GraphKey) -> CouplingSeries {
        let max = self.max_order.saturating_sub(key.vertex_count());
        let mut out = CouplingSeries::zero(max);
        for (m, c) in &self.terms {
            let k = m.power(key);
            if k == 0 {
                continue;
            }
            let rest = m.without(key).unwrap();
            out.add_term(rest, &c.scale(&rat(k as i64)));
        }
        out
    }

    /// The Euler operator `Σ_Γ p_Γ λ_Γ ∂/∂λ_Γ`.
    pub fn euler(&self) -> CouplingSeries {
        let mut out = CouplingSeries::zero(self.max_order);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), &c.scale(&rat(m.white_count() as i64)));
        }
        out
    }

    /// `log S` through the expansion of `log(1 + x)`.
    pub fn log(&self) -> Result<CouplingSeries> {
        let c0 = self.constant_term();
        if c0 != Poly::one() {
            return Err(Error::ConstantTerm(c0.to_string()));
        }
        let x = self.sub(&CouplingSeries::one(self.max_order));
        let mut out = CouplingSeries::zero(self.max_order);
        let mut power = x.clone();
        // Every monomial in x has order ≥ 2, so max_order / 2 powers suffice.
        for k in 1..=self.max_order.max(1) {
            if power.is_zero() {
                break;
            }
            let sign = if k % 2 == 1 { 1 } else { -1 };
            out = out.add(&power.scale(&Poly::constant(Rational::new(BigInt::from(sign), BigInt::from(k)))));
            power = power.mul(&x);
        }
        Ok(out)
    }

    /// `exp S` for a series without constant term.
    pub fn exp(&self) -> Result<CouplingSeries> {
        let c0 = self.constant_term();
        if !c0.is_zero() {
            return Err(Error::ConstantTerm(c0.to_string()));
        }
        let mut out = CouplingSeries::one(self.max_order);
        let mut power = CouplingSeries::one(self.max_order);
        for k in 1..=self.max_order.max(1) {
            power = power.mul(self).scale(&Poly::constant(Rational::new(BigInt::one(), BigInt::from(k))));
            if power.is_zero() {
                break;
            }
            out = out.add(&power);
        }
        Ok(out)
    }

    /// Evaluates every coefficient at the given `N` (with `t = 0`).
    pub fn eval_n(&self, n: i64) -> BTreeMap<Monomial, Rational> {
        self.terms
            .iter()
            .map(|(m, c)| (m.clone(), c.eval_n(n)))
            .filter(|(_, v)| !v.is_zero())
            .collect()
    }
}

impl fmt::Display for CouplingSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(m, c)| format!("({c})·{m}")).collect();
        f.write_str(&parts.join(" + "))
    }
}

/// `Σ_φ N^{faces(φ)}` over all pairings of the disjoint union of `graphs`.
pub fn moment_polynomial_of_graphs(graphs: &[ColoredGraph]) -> Poly {
    let Some(first) = graphs.first() else {
        return Poly::one();
    };
    let union = ColoredGraph::union_all(first.d(), graphs).expect("graphs share D");
    let p = union.p();
    let mut counts: BTreeMap<u32, i64> = BTreeMap::new();
    for pairing in (0..p).permutations(p) {
        *counts.entry((face_count(&union, &pairing) + union.loops()) as u32).or_insert(0) += 1;
    }
    let mut out = Poly::zero();
    for (e, c) in counts {
        out.add_term(rat(c), e, 0);
    }
    out
}

/// `⟨Π Tr_Γ⟩` as a polynomial in `N`.
pub fn moment_polynomial(keys: &[GraphKey]) -> Poly {
    let graphs: Vec<ColoredGraph> = keys.iter().map(|k| k.decode()).collect();
    moment_polynomial_of_graphs(&graphs)
}

/// Connected graphs other than the dipole with vertex count `≤ max_order`,
/// sorted by `(p, key)`. These index the couplings.
pub fn coupling_graphs(d: usize, max_order: usize) -> Vec<GraphKey> {
    (2..=max_order / 2).flat_map(|p| enumerate_graphs_of_size(d, p, true)).collect()
}

/// All monomials in `vars` of vertex order `≤ max_order`.
pub fn monomials_up_to(vars: &[GraphKey], max_order: usize) -> Vec<Monomial> {
    fn rec(vars: &[GraphKey], budget: usize, current: &mut Vec<GraphKey>, out: &mut Vec<Monomial>) {
        let Some((first, rest)) = vars.split_first() else {
            out.push(Monomial::from_keys(current.iter().cloned()));
            return;
        };
        let w = first.vertex_count();
        let mut k = 0;
        loop {
            rec(rest, budget - k * w, current, out);
            if (k + 1) * w > budget || w == 0 {
                break;
            }
            current.push(first.clone());
            k += 1;
        }
        for _ in 0..k {
            current.pop();
        }
    }
    let mut out = Vec::new();
    rec(vars, max_order, &mut Vec::new(), &mut out);
    out
}

/// `Z = ⟨exp Σ_{Γ ≠ dipole} (λ_Γ / C_Γ) Tr_Γ⟩` truncated at total vertex
/// order `max_order`: the coefficient of `Π λ^m` is `⟨Π Tr^m⟩ / Π C^m m!`.
pub fn partition_series(d: usize, max_order: usize) -> CouplingSeries {
    let vars = coupling_graphs(d, max_order);
    let mut z = CouplingSeries::zero(max_order);
    for m in monomials_up_to(&vars, max_order) {
        let moment = moment_polynomial(&m.keys());
        let norm = Rational::new(BigInt::one(), m.symmetry_factor());
        z.add_term(m, &moment.scale(&norm));
    }
    z
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dip3() -> GraphKey {
        ColoredGraph::dipole(3).canonical_form()
    }

    #[test]
    fn dipole_moment_polynomials() {
        assert_eq!(moment_polynomial(&[dip3()]), Poly::n_pow(3));
        assert_eq!(moment_polynomial(&[dip3(), dip3()]), Poly::n_pow(6) + Poly::n_pow(3));
        assert_eq!(moment_polynomial(&[]), Poly::one());
    }

    #[test]
    fn trivial_partition_series() {
        assert_eq!(partition_series(3, 2), CouplingSeries::one(2));
        assert_eq!(partition_series(2, 6).constant_term(), Poly::one());
    }

    #[test]
    fn first_order_coefficients() {
        let z = partition_series(3, 4);
        for key in coupling_graphs(3, 4) {
            let expected = moment_polynomial(&[key.clone()])
                .scale(&Rational::new(BigInt::one(), BigInt::from(key.decode().automorphism_count())));
            assert_eq!(z.coefficient(&Monomial::single(key.clone())), expected);
            assert_eq!(z.differentiate(&key).constant_term(), expected);
        }
    }

    #[test]
    fn log_of_one_and_linear() {
        assert!(CouplingSeries::one(6).log().unwrap().is_zero());
        let key = coupling_graphs(3, 4)[0].clone();
        let x = CouplingSeries::variable(key.clone(), 4).scale(&Poly::int(5));
        let z = CouplingSeries::one(4).add(&x);
        assert_eq!(z.log().unwrap(), x);
        assert!(x.log().is_err());
    }

    #[test]
    fn derivative_rules() {
        let key = coupling_graphs(3, 4)[0].clone();
        let l = CouplingSeries::variable(key.clone(), 8);
        assert_eq!(l.differentiate(&key), CouplingSeries::one(4));
        let l2 = l.mul(&l);
        assert_eq!(l2.differentiate(&key), l.scale(&Poly::int(2)).with_max_order(4));
    }

    #[test]
    fn exp_log_round_trip() {
        let z = partition_series(2, 8);
        assert_eq!(z.log().unwrap().exp().unwrap(), z);
    }

    #[test]
    fn second_order_cumulant() {
        let z = partition_series(3, 8);
        let w = z.log().unwrap();
        for key in coupling_graphs(3, 4) {
            let c = BigInt::from(key.decode().automorphism_count());
            let m1 = moment_polynomial(&[key.clone()]);
            let m2 = moment_polynomial(&[key.clone(), key.clone()]);
            let cumulant = &m2 - &(&m1 * &m1);
            let expected = cumulant.scale(&Rational::new(BigInt::one(), c.clone() * c * 2));
            assert_eq!(w.coefficient(&Monomial::from_keys([key.clone(), key.clone()])), expected);
        }
    }
}
