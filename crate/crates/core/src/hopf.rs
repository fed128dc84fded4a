//! The commutative Hopf algebra of marked connected graphs.
//!
//! A generator is an orbit-canonical pair `(Γ, v)` ([`MarkedKey`]). The
//! coproduct sums over families of disjoint admissible subgraphs: connected,
//! induced, avoiding `v`, with exactly `D` external legs of distinct colors,
//! all hanging from vertices of one color. Such a subgraph has one more
//! vertex of the leg color than of the other. Closing its legs on a new
//! vertex of the opposite color gives `Γ̂_n`, marked at the new vertex;
//! shrinking it to a single vertex of the leg color gives the reduced graph.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::colored_graph::{ColoredGraph, MarkedGraph, MarkedKey, Vertex};
use crate::error::{Error, Result};
use crate::poly::Rational;

/// Which vertex subsets count as admissible subgraphs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Admissibility {
    /// Allow single-vertex subgraphs (their closure is a dipole).
    pub single_vertices: bool,
    /// Allow the subgraph made of every vertex except the mark.
    pub complement_of_mark: bool,
}

/// A vertex subset of a graph, as white and black index lists.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Subgraph {
    pub whites: Vec<usize>,
    pub blacks: Vec<usize>,
    /// Color of the vertices carrying the external legs.
    pub legs_on_white: bool,
}

impl Subgraph {
    pub fn len(&self) -> usize {
        self.whites.len() + self.blacks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Tests the leg condition for a vertex subset; returns the leg color.
fn leg_color(g: &ColoredGraph, whites: &[bool], blacks: &[bool]) -> Option<bool> {
    let d = g.d();
    let mut white_legs = vec![0usize; d];
    let mut black_legs = vec![0usize; d];
    for c in 0..d {
        for w in 0..g.p() {
            let b = g.black_neighbor(w, c);
            match (whites[w], blacks[b]) {
                (true, false) => white_legs[c] += 1,
                (false, true) => black_legs[c] += 1,
                _ => {}
            }
        }
    }
    let distinct = |legs: &[usize]| legs.iter().all(|&x| x == 1);
    let none = |legs: &[usize]| legs.iter().all(|&x| x == 0);
    if distinct(&white_legs) && none(&black_legs) {
        Some(true)
    } else if distinct(&black_legs) && none(&white_legs) {
        Some(false)
    } else {
        None
    }
}

fn induced_connected(g: &ColoredGraph, whites: &[bool], blacks: &[bool]) -> bool {
    let start = match (whites.iter().position(|&x| x), blacks.iter().position(|&x| x)) {
        (Some(w), _) => Vertex::White(w),
        (None, Some(b)) => Vertex::Black(b),
        (None, None) => return false,
    };
    let mut seen_w = vec![false; g.p()];
    let mut seen_b = vec![false; g.p()];
    let mut stack = vec![start];
    match start {
        Vertex::White(w) => seen_w[w] = true,
        Vertex::Black(b) => seen_b[b] = true,
    }
    while let Some(v) = stack.pop() {
        for c in 0..g.d() {
            match v {
                Vertex::White(w) => {
                    let b = g.black_neighbor(w, c);
                    if blacks[b] && !seen_b[b] {
                        seen_b[b] = true;
                        stack.push(Vertex::Black(b));
                    }
                }
                Vertex::Black(b) => {
                    let w = g.white_neighbor(b, c);
                    if whites[w] && !seen_w[w] {
                        seen_w[w] = true;
                        stack.push(Vertex::White(w));
                    }
                }
            }
        }
    }
    seen_w == whites && seen_b == blacks
}

/// Every admissible subgraph of the marked graph.
pub fn admissible_subgraphs(g: &MarkedGraph, adm: Admissibility) -> Vec<Subgraph> {
    let graph = &g.graph;
    let p = graph.p();
    let n = 2 * p;
    let mark = match g.vertex {
        Vertex::White(w) => w,
        Vertex::Black(b) => p + b,
    };
    assert!(n <= 30, "graph too large for subset enumeration");
    let mut out = Vec::new();
    for mask in 1u32..(1 << n) {
        if mask & (1 << mark) != 0 {
            continue;
        }
        let size = mask.count_ones() as usize;
        if size == 1 && !adm.single_vertices {
            continue;
        }
        if size == n - 1 && !adm.complement_of_mark {
            continue;
        }
        let whites: Vec<bool> = (0..p).map(|i| mask & (1 << i) != 0).collect();
        let blacks: Vec<bool> = (0..p).map(|i| mask & (1 << (p + i)) != 0).collect();
        let nw = whites.iter().filter(|&&x| x).count();
        let nb = size - nw;
        if nw.abs_diff(nb) != 1 {
            continue;
        }
        let Some(on_white) = leg_color(graph, &whites, &blacks) else {
            continue;
        };
        if on_white != (nw > nb) || !induced_connected(graph, &whites, &blacks) {
            continue;
        }
        out.push(Subgraph {
            whites: (0..p).filter(|&i| whites[i]).collect(),
            blacks: (0..p).filter(|&i| blacks[i]).collect(),
            legs_on_white: on_white,
        });
    }
    out.sort();
    out
}

/// All nonempty families of pairwise disjoint admissible subgraphs.
pub fn admissible_subgraph_families(g: &MarkedGraph, adm: Admissibility) -> Vec<Vec<Subgraph>> {
    fn rec(all: &[Subgraph], start: usize, current: &mut Vec<Subgraph>, out: &mut Vec<Vec<Subgraph>>) {
        for i in start..all.len() {
            let s = &all[i];
            let disjoint = current.iter().all(|t| {
                s.whites.iter().all(|w| !t.whites.contains(w)) && s.blacks.iter().all(|b| !t.blacks.contains(b))
            });
            if disjoint {
                current.push(s.clone());
                out.push(current.clone());
                rec(all, i + 1, current, out);
                current.pop();
            }
        }
    }
    let all = admissible_subgraphs(g, adm);
    let mut out = Vec::new();
    rec(&all, 0, &mut Vec::new(), &mut out);
    out
}

/// `Γ̂_n`: the subgraph with its legs closed on a new vertex, marked there.
pub fn close_subgraph(g: &ColoredGraph, s: &Subgraph) -> MarkedGraph {
    let d = g.d();
    // Relabel so that the subgraph's whites and blacks come first; the new
    // vertex takes the last index of its color.
    let p_new = s.whites.len().max(s.blacks.len());
    let wi: HashMap<usize, usize> = s.whites.iter().enumerate().map(|(i, &w)| (w, i)).collect();
    let bi: HashMap<usize, usize> = s.blacks.iter().enumerate().map(|(i, &b)| (b, i)).collect();
    let sigma = (0..d)
        .map(|c| {
            let mut row = vec![usize::MAX; p_new];
            for (&w, &i) in &wi {
                let b = g.black_neighbor(w, c);
                row[i] = *bi.get(&b).unwrap_or(&(p_new - 1));
            }
            if !s.legs_on_white {
                // Closing white vertex: its color-c edge goes to the black
                // carrying the color-c leg.
                let b = s.blacks.iter().find(|&&b| !wi.contains_key(&g.white_neighbor(b, c))).unwrap();
                row[p_new - 1] = bi[b];
            }
            row
        })
        .collect();
    let graph = ColoredGraph::new(d, sigma, 0).expect("closure is a valid graph");
    let vertex = if s.legs_on_white { Vertex::Black(p_new - 1) } else { Vertex::White(p_new - 1) };
    MarkedGraph { graph, vertex }
}

/// `Γ / Π Γ_n`: every subgraph shrunk to one vertex of its leg color.
pub fn reduce(g: &MarkedGraph, family: &[Subgraph]) -> MarkedGraph {
    let graph = &g.graph;
    let p = graph.p();
    let d = graph.d();
    let mut white_map: Vec<Option<usize>> = vec![None; p];
    let mut black_map: Vec<Option<usize>> = vec![None; p];
    let mut white_owner = vec![None; p];
    let mut black_owner = vec![None; p];
    for (n, s) in family.iter().enumerate() {
        for &w in &s.whites {
            white_owner[w] = Some(n);
        }
        for &b in &s.blacks {
            black_owner[b] = Some(n);
        }
    }
    let mut nw = 0;
    for w in 0..p {
        if white_owner[w].is_none() {
            white_map[w] = Some(nw);
            nw += 1;
        }
    }
    let mut nb = 0;
    for b in 0..p {
        if black_owner[b].is_none() {
            black_map[b] = Some(nb);
            nb += 1;
        }
    }
    let mut shrunk_white = vec![None; family.len()];
    let mut shrunk_black = vec![None; family.len()];
    for (n, s) in family.iter().enumerate() {
        if s.legs_on_white {
            shrunk_white[n] = Some(nw);
            nw += 1;
        } else {
            shrunk_black[n] = Some(nb);
            nb += 1;
        }
    }
    assert_eq!(nw, nb);
    let new_black = |b: usize| -> usize {
        match black_owner[b] {
            None => black_map[b].unwrap(),
            Some(n) => shrunk_black[n].expect("edge into a white-leg subgraph from outside"),
        }
    };
    let sigma = (0..d)
        .map(|c| {
            let mut row = vec![usize::MAX; nw];
            for w in 0..p {
                let b = graph.black_neighbor(w, c);
                match white_owner[w] {
                    None => row[white_map[w].unwrap()] = new_black(b),
                    Some(n) => {
                        if family[n].legs_on_white && black_owner[b] != Some(n) {
                            row[shrunk_white[n].unwrap()] = new_black(b);
                        }
                    }
                }
            }
            row
        })
        .collect();
    let reduced = ColoredGraph::new(d, sigma, 0).expect("reduced graph is valid");
    let vertex = match g.vertex {
        Vertex::White(w) => Vertex::White(white_map[w].expect("mark survives")),
        Vertex::Black(b) => Vertex::Black(black_map[b].expect("mark survives")),
    };
    MarkedGraph { graph: reduced, vertex }
}

/// A commutative monomial in generators.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HopfMonomial(BTreeMap<MarkedKey, u32>);

impl HopfMonomial {
    pub fn unit() -> Self {
        Self::default()
    }

    pub fn single(key: MarkedKey) -> Self {
        Self::from_keys([key])
    }

    pub fn from_keys<I: IntoIterator<Item = MarkedKey>>(keys: I) -> Self {
        let mut m = BTreeMap::new();
        for k in keys {
            *m.entry(k).or_insert(0) += 1;
        }
        HopfMonomial(m)
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&MarkedKey, u32)> {
        self.0.iter().map(|(k, &m)| (k, m))
    }

    pub fn degree(&self) -> u32 {
        self.0.values().sum()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut m = self.0.clone();
        for (k, &e) in &other.0 {
            *m.entry(k.clone()).or_insert(0) += e;
        }
        HopfMonomial(m)
    }

    /// Total vertex count.
    pub fn vertex_count(&self) -> usize {
        self.0.iter().map(|(k, &m)| 2 * k.p() * m as usize).sum()
    }
}

impl fmt::Display for HopfMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(k, &m)| if m == 1 { format!("[{k}]") } else { format!("[{k}]^{m}") })
            .collect();
        f.write_str(&parts.join("·"))
    }
}

/// Integer combination of monomials.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HopfElement(BTreeMap<HopfMonomial, BigInt>);

impl HopfElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn unit() -> Self {
        Self::monomial(HopfMonomial::unit())
    }

    pub fn generator(key: MarkedKey) -> Self {
        Self::monomial(HopfMonomial::single(key))
    }

    pub fn monomial(m: HopfMonomial) -> Self {
        let mut e = Self::zero();
        e.add_term(m, BigInt::one());
        e
    }

    pub fn add_term(&mut self, m: HopfMonomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let e = self.0.entry(m.clone()).or_insert_with(BigInt::zero);
        *e += c;
        if e.is_zero() {
            self.0.remove(&m);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&HopfMonomial, &BigInt)> {
        self.0.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.0 {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        let mut out = Self::zero();
        for (m, x) in &self.0 {
            out.add_term(m.clone(), x * c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (m1, c1) in &self.0 {
            for (m2, c2) in &other.0 {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl fmt::Display for HopfElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.0.iter().map(|(m, c)| format!("{c}·{m}")).collect();
        f.write_str(&parts.join(" + "))
    }
}

/// Element of `H ⊗ H`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TensorSquareElement(BTreeMap<(HopfMonomial, HopfMonomial), BigInt>);

impl TensorSquareElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn add_term(&mut self, l: HopfMonomial, r: HopfMonomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let key = (l, r);
        let e = self.0.entry(key.clone()).or_insert_with(BigInt::zero);
        *e += c;
        if e.is_zero() {
            self.0.remove(&key);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&HopfMonomial, &HopfMonomial, &BigInt)> {
        self.0.iter().map(|((l, r), c)| (l, r, c))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for ((l1, r1), c1) in &self.0 {
            for ((l2, r2), c2) in &other.0 {
                out.add_term(l1.mul(l2), r1.mul(r2), c1 * c2);
            }
        }
        out
    }
}

impl fmt::Display for TensorSquareElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.0.iter().map(|((l, r), c)| format!("{c}·{l}⊗{r}")).collect();
        f.write_str(&parts.join(" + "))
    }
}

/// Element of `H ⊗ H ⊗ H`, used for coassociativity.
pub type TensorCube = BTreeMap<(HopfMonomial, HopfMonomial, HopfMonomial), BigInt>;

/// Coproduct, antipode and characters under a fixed admissibility rule,
/// with memoized coproducts and antipodes.
#[derive(Debug, Default)]
pub struct HopfAlgebra {
    pub admissibility: Admissibility,
    coproducts: HashMap<MarkedKey, TensorSquareElement>,
    antipodes: HashMap<MarkedKey, HopfElement>,
}

impl HopfAlgebra {
    pub fn new(admissibility: Admissibility) -> Self {
        HopfAlgebra { admissibility, ..Default::default() }
    }

    /// The reduced coproduct terms `(Π (Γ̂_n, v_n), Γ/ΠΓ_n)` of a generator.
    pub fn reduced_coproduct_terms(&self, key: &MarkedKey) -> Vec<(HopfMonomial, MarkedKey)> {
        let g = key.decode();
        admissible_subgraph_families(&g, self.admissibility)
            .par_iter()
            .map(|family| {
                let left = HopfMonomial::from_keys(family.iter().map(|s| close_subgraph(&g.graph, s).canonical_form()));
                let right = reduce(&g, family).canonical_form();
                (left, right)
            })
            .collect()
    }

    pub fn coproduct(&mut self, key: &MarkedKey) -> TensorSquareElement {
        if let Some(c) = self.coproducts.get(key) {
            return c.clone();
        }
        let x = HopfMonomial::single(key.clone());
        let mut out = TensorSquareElement::zero();
        out.add_term(x.clone(), HopfMonomial::unit(), BigInt::one());
        out.add_term(HopfMonomial::unit(), x, BigInt::one());
        for (l, r) in self.reduced_coproduct_terms(key) {
            out.add_term(l, HopfMonomial::single(r), BigInt::one());
        }
        self.coproducts.insert(key.clone(), out.clone());
        out
    }

    pub fn coproduct_monomial(&mut self, m: &HopfMonomial) -> TensorSquareElement {
        let mut out = TensorSquareElement::zero();
        out.add_term(HopfMonomial::unit(), HopfMonomial::unit(), BigInt::one());
        for (k, e) in m.iter() {
            let dk = self.coproduct(k);
            for _ in 0..e {
                out = out.mul(&dk);
            }
        }
        out
    }

    pub fn coproduct_element(&mut self, x: &HopfElement) -> TensorSquareElement {
        let mut out = TensorSquareElement::zero();
        for (m, c) in x.terms() {
            for (l, r, x) in self.coproduct_monomial(m).terms() {
                out.add_term(l.clone(), r.clone(), x * c);
            }
        }
        out
    }

    /// `S(x) = −x − Σ S(x′) x″` over the reduced coproduct.
    pub fn antipode(&mut self, key: &MarkedKey) -> Result<HopfElement> {
        self.antipode_bounded(key, 2 * key.p() + 1)
    }

    fn antipode_bounded(&mut self, key: &MarkedKey, depth: usize) -> Result<HopfElement> {
        if let Some(s) = self.antipodes.get(key) {
            return Ok(s.clone());
        }
        if depth == 0 {
            return Err(Error::Input(format!("antipode recursion did not terminate at {key}")));
        }
        let mut out = HopfElement::generator(key.clone()).scale(&BigInt::from(-1));
        for (l, r) in self.reduced_coproduct_terms(key) {
            assert!(l.vertex_count() < 2 * key.p() || l.degree() > 0);
            let mut sl = HopfElement::unit();
            for (k, e) in l.iter() {
                if k.p() >= key.p() {
                    return Err(Error::Input(format!("reduced coproduct of {key} does not shrink")));
                }
                let sk = self.antipode_bounded(k, depth - 1)?;
                for _ in 0..e {
                    sl = sl.mul(&sk);
                }
            }
            out = out.add(&sl.mul(&HopfElement::generator(r)).scale(&BigInt::from(-1)));
        }
        self.antipodes.insert(key.clone(), out.clone());
        Ok(out)
    }

    pub fn antipode_monomial(&mut self, m: &HopfMonomial) -> Result<HopfElement> {
        let mut out = HopfElement::unit();
        for (k, e) in m.iter() {
            let s = self.antipode(k)?;
            for _ in 0..e {
                out = out.mul(&s);
            }
        }
        Ok(out)
    }

    /// `m(S ⊗ id)Δ(x)` and `m(id ⊗ S)Δ(x)`; both equal `ε(x)·1`.
    pub fn antipode_identities(&mut self, key: &MarkedKey) -> Result<(HopfElement, HopfElement)> {
        let delta = self.coproduct(key);
        let mut left = HopfElement::zero();
        let mut right = HopfElement::zero();
        for (l, r, c) in delta.terms() {
            let sl = self.antipode_monomial(l)?;
            left = left.add(&sl.mul(&HopfElement::monomial(r.clone())).scale(c));
            let sr = self.antipode_monomial(r)?;
            right = right.add(&HopfElement::monomial(l.clone()).mul(&sr).scale(c));
        }
        Ok((left, right))
    }

    /// `((Δ ⊗ id)Δ x, (id ⊗ Δ)Δ x)`.
    pub fn coassociativity_sides(&mut self, key: &MarkedKey) -> (TensorCube, TensorCube) {
        let delta = self.coproduct(key);
        let mut lhs = TensorCube::new();
        let mut rhs = TensorCube::new();
        let add = |cube: &mut TensorCube, k: (HopfMonomial, HopfMonomial, HopfMonomial), c: BigInt| {
            let e = cube.entry(k.clone()).or_insert_with(BigInt::zero);
            *e += c;
            if e.is_zero() {
                cube.remove(&k);
            }
        };
        for (l, r, c) in delta.terms() {
            for (ll, lr, c2) in self.coproduct_monomial(l).terms() {
                add(&mut lhs, (ll.clone(), lr.clone(), r.clone()), c * c2);
            }
            for (rl, rr, c2) in self.coproduct_monomial(r).terms() {
                add(&mut rhs, (l.clone(), rl.clone(), rr.clone()), c * c2);
            }
        }
        (lhs, rhs)
    }

    pub fn is_coassociative_on(&mut self, key: &MarkedKey) -> bool {
        let (l, r) = self.coassociativity_sides(key);
        l == r
    }

    /// Every generator reachable from `keys` through coproducts.
    pub fn closure(&mut self, keys: &[MarkedKey]) -> BTreeSet<MarkedKey> {
        let mut seen: BTreeSet<MarkedKey> = BTreeSet::new();
        let mut stack: Vec<MarkedKey> = keys.to_vec();
        while let Some(k) = stack.pop() {
            if !seen.insert(k.clone()) {
                continue;
            }
            for (l, r, _) in self.coproduct(&k).terms() {
                for (x, _) in l.iter().chain(r.iter()) {
                    if !seen.contains(x) {
                        stack.push(x.clone());
                    }
                }
            }
        }
        seen
    }

    /// `(a ∗ b)(x) = (a ⊗ b)Δx` on every generator of `domain`.
    pub fn convolve(&mut self, a: &Character, b: &Character, domain: &[MarkedKey]) -> Result<Character> {
        let mut out = Character::default();
        for k in domain {
            let mut v = Rational::zero();
            for (l, r, c) in self.coproduct(k).terms() {
                v += a.eval(l)? * b.eval(r)? * Rational::from_integer(c.clone());
            }
            out.values.insert(k.clone(), v);
        }
        Ok(out)
    }

    /// `a ∘ S` on every generator of `domain`.
    pub fn inverse(&mut self, a: &Character, domain: &[MarkedKey]) -> Result<Character> {
        let mut out = Character::default();
        for k in domain {
            out.values.insert(k.clone(), a.eval_element(&self.antipode(k)?)?);
        }
        Ok(out)
    }

    /// `[da, db] = (da ⊗ db − db ⊗ da)∘Δ` on every generator of `domain`.
    pub fn infinitesimal_bracket(&mut self, da: &InfinitesimalCharacter, db: &InfinitesimalCharacter, domain: &[MarkedKey]) -> InfinitesimalCharacter {
        let mut out = InfinitesimalCharacter::default();
        for k in domain {
            let mut v = Rational::zero();
            for (l, r, c) in self.coproduct(k).terms() {
                let c = Rational::from_integer(c.clone());
                v += (da.eval(l) * db.eval(r) - db.eval(l) * da.eval(r)) * c;
            }
            out.set(k.clone(), v);
        }
        out
    }
}

impl HopfAlgebra {
    /// Generators appearing as a single factor on either side of `Δx`.
    fn factors_of(&mut self, x: &MarkedKey) -> Vec<MarkedKey> {
        let mut out = BTreeSet::new();
        for (l, r, _) in self.coproduct(x).terms() {
            for m in [l, r] {
                if m.degree() == 1 {
                    out.insert(m.iter().next().unwrap().0.clone());
                }
            }
        }
        out.into_iter().collect()
    }

    /// `[da, [db, dc]] + [db, [dc, da]] + [dc, [da, db]]` at `x`.
    pub fn jacobiator_at(&mut self, da: &InfinitesimalCharacter, db: &InfinitesimalCharacter, dc: &InfinitesimalCharacter, x: &MarkedKey) -> Rational {
        let domain = self.factors_of(x);
        let one = [x.clone()];
        let mut total = Rational::zero();
        for (f, g, h) in [(da, db, dc), (db, dc, da), (dc, da, db)] {
            let inner = self.infinitesimal_bracket(g, h, &domain);
            total += self.infinitesimal_bracket(f, &inner, &one).get(x);
        }
        total
    }
}

/// Swaps the two vertex colors.
fn mirror(g: &MarkedGraph) -> MarkedGraph {
    let sigma = g.graph.sigma().iter().map(|s| crate::colored_graph::invert(s)).collect();
    let graph = ColoredGraph::new(g.graph.d(), sigma, 0).expect("inverse permutations");
    let vertex = match g.vertex {
        Vertex::White(i) => Vertex::Black(i),
        Vertex::Black(i) => Vertex::White(i),
    };
    MarkedGraph { graph, vertex }
}

/// Generators `x` with an admissible subgraph whose closure is `a` and whose
/// reduced graph is `y`: `a` minus its mark substituted for each vertex of
/// `y` (other than the mark) of the color opposite to the mark of `a`.
pub fn insertions(a: &MarkedKey, y: &MarkedKey) -> Result<Vec<MarkedKey>> {
    if a.d() != y.d() {
        return Err(Error::DimensionMismatch(a.d(), y.d()));
    }
    let (mut ga, mut gy) = (a.decode(), y.decode());
    let flip = a.is_white();
    if flip {
        ga = mirror(&ga);
        gy = mirror(&gy);
    }
    let Vertex::Black(mark_a) = ga.vertex else { unreachable!() };
    let mut out = BTreeSet::new();
    for u in 0..gy.graph.p() {
        if gy.vertex == Vertex::White(u) {
            continue;
        }
        let s = crate::contraction::glue_tracked(&ga.graph, mark_a, &gy.graph, u)?;
        let vertex = match gy.vertex {
            Vertex::White(w) => Vertex::White(s.white_map[ga.graph.p() + w].unwrap()),
            Vertex::Black(b) => Vertex::Black(s.black_map[ga.graph.p() + b].unwrap()),
        };
        let mut x = MarkedGraph { graph: s.graph, vertex };
        if flip {
            x = mirror(&x);
        }
        out.insert(x.canonical_form());
    }
    Ok(out.into_iter().collect())
}

/// Every generator on which the double brackets of `a, b, c` can be nonzero.
pub fn jacobi_domain(a: &MarkedKey, b: &MarkedKey, c: &MarkedKey) -> Result<Vec<MarkedKey>> {
    let mut out = BTreeSet::new();
    for (p, q, r) in [(a, b, c), (a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a)] {
        for y in insertions(q, r)? {
            out.extend(insertions(p, &y)?);
            out.extend(insertions(&y, p)?);
        }
    }
    Ok(out.into_iter().collect())
}

/// `ε`: 1 on the unit monomial, 0 elsewhere.
pub fn counit(x: &HopfElement) -> BigInt {
    x.terms().filter(|(m, _)| m.is_unit()).map(|(_, c)| c.clone()).sum()
}

/// A character, given by its values on generators.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Character {
    pub values: BTreeMap<MarkedKey, Rational>,
}

impl Character {
    /// The counit: zero on every generator of `domain`.
    pub fn counit_on(domain: &[MarkedKey]) -> Self {
        Character { values: domain.iter().map(|k| (k.clone(), Rational::zero())).collect() }
    }

    pub fn eval_generator(&self, k: &MarkedKey) -> Result<Rational> {
        self.values
            .get(k)
            .cloned()
            .ok_or_else(|| Error::Input(format!("character has no value on {k}")))
    }

    pub fn eval(&self, m: &HopfMonomial) -> Result<Rational> {
        let mut v = Rational::one();
        for (k, e) in m.iter() {
            let x = self.eval_generator(k)?;
            for _ in 0..e {
                v *= &x;
            }
        }
        Ok(v)
    }

    pub fn eval_element(&self, x: &HopfElement) -> Result<Rational> {
        let mut v = Rational::zero();
        for (m, c) in x.terms() {
            v += self.eval(m)? * Rational::from_integer(c.clone());
        }
        Ok(v)
    }

    /// Restriction to `domain`.
    pub fn restrict(&self, domain: &[MarkedKey]) -> Self {
        Character { values: domain.iter().filter_map(|k| self.values.get(k).map(|v| (k.clone(), v.clone()))).collect() }
    }
}

/// A linear functional vanishing on the unit and on products of two or more
/// generators. Generators without a value read as zero.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct InfinitesimalCharacter {
    values: BTreeMap<MarkedKey, Rational>,
}

impl InfinitesimalCharacter {
    pub fn delta(key: MarkedKey) -> Self {
        let mut d = Self::default();
        d.set(key, Rational::one());
        d
    }

    pub fn set(&mut self, key: MarkedKey, v: Rational) {
        if v.is_zero() {
            self.values.remove(&key);
        } else {
            self.values.insert(key, v);
        }
    }

    pub fn get(&self, key: &MarkedKey) -> Rational {
        self.values.get(key).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, m: &HopfMonomial) -> Rational {
        let mut it = m.iter();
        match (it.next(), it.next()) {
            (Some((k, 1)), None) => self.get(k),
            _ => Rational::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&MarkedKey, &Rational)> {
        self.values.iter()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, v) in &other.values {
            let x = out.get(k) + v;
            out.set(k.clone(), x);
        }
        out
    }
}

/// Every generator with `1 ≤ p ≤ p_max`: each connected graph with one
/// marked vertex per orbit, white and black.
pub fn generators(d: usize, p_max: usize) -> Vec<MarkedKey> {
    let mut out = BTreeSet::new();
    for key in crate::colored_graph::enumerate_graphs(d, p_max, true) {
        let g = key.decode();
        for i in 0..g.p() {
            for v in [Vertex::White(i), Vertex::Black(i)] {
                out.insert(MarkedGraph { graph: g.clone(), vertex: v }.canonical_form());
            }
        }
    }
    out.into_iter().collect()
}

/// Side-by-side values of the Hopf bracket `[δ_a, δ_b]` and the
/// Schwinger-Dyson bracket `[X_a, X_b]` for two black-marked generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BracketComparison {
    pub hopf: Vec<(MarkedKey, Rational)>,
    pub schwinger_dyson: Vec<(MarkedKey, Rational)>,
    /// Whether the two have the same support.
    pub same_support: bool,
}

pub fn compare_brackets(alg: &mut HopfAlgebra, a: &MarkedKey, b: &MarkedKey) -> Result<BracketComparison> {
    let sd = crate::schwinger_dyson::symbolic_bracket(a, b)?;
    let size = a.p() + b.p() - 1;
    let domain: Vec<MarkedKey> = generators(a.d(), size).into_iter().filter(|k| k.p() == size).collect();
    let br = alg.infinitesimal_bracket(&InfinitesimalCharacter::delta(a.clone()), &InfinitesimalCharacter::delta(b.clone()), &domain);
    let hopf: Vec<(MarkedKey, Rational)> = br.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
    let schwinger_dyson: Vec<(MarkedKey, Rational)> = sd.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
    let hs: BTreeSet<&MarkedKey> = hopf.iter().map(|(k, _)| k).collect();
    let ss: BTreeSet<&MarkedKey> = schwinger_dyson.iter().map(|(k, _)| k).collect();
    Ok(BracketComparison { same_support: hs == ss, hopf, schwinger_dyson })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eq1_marked() -> MarkedGraph {
        let g = ColoredGraph::from_one_based(3, 3, &[vec![1, 2, 3], vec![3, 1, 2], vec![2, 3, 1]], 0).unwrap();
        MarkedGraph { graph: g, vertex: Vertex::White(0) }
    }

    #[test]
    fn dipole_is_primitive() {
        let mut alg = HopfAlgebra::default();
        let dip = MarkedGraph { graph: ColoredGraph::dipole(3), vertex: Vertex::White(0) }.canonical_form();
        assert!(admissible_subgraph_families(&dip.decode(), Admissibility::default()).is_empty());
        assert_eq!(alg.coproduct(&dip).len(), 2);
        assert_eq!(alg.antipode(&dip).unwrap(), HopfElement::generator(dip.clone()).scale(&BigInt::from(-1)));
    }

    #[test]
    fn single_vertex_candidates() {
        let g = eq1_marked();
        let with = Admissibility { single_vertices: true, ..Default::default() };
        let singles: Vec<_> = admissible_subgraphs(&g, with).into_iter().filter(|s| s.len() == 1).collect();
        assert_eq!(singles.len(), 5);
        for s in &singles {
            assert_eq!(close_subgraph(&g.graph, s).graph.canonical_form(), ColoredGraph::dipole(3).canonical_form());
        }
        assert!(admissible_subgraphs(&g, Admissibility::default()).iter().all(|s| s.len() > 1));
    }

    #[test]
    fn closure_and_reduction_sizes() {
        let g = eq1_marked();
        for family in admissible_subgraph_families(&g, Admissibility::default()) {
            let r = reduce(&g, &family);
            let shrunk: usize = family.iter().map(|s| s.len() - 1).sum();
            assert_eq!(r.graph.vertex_count(), g.graph.vertex_count() - shrunk);
            for s in &family {
                assert_eq!(close_subgraph(&g.graph, s).graph.vertex_count(), s.len() + 1);
            }
        }
    }

    #[test]
    fn counit_examples() {
        let k = eq1_marked().canonical_form();
        let x = HopfElement::unit().scale(&BigInt::from(3)).add(&HopfElement::generator(k.clone()).scale(&BigInt::from(2)));
        assert_eq!(counit(&x), BigInt::from(3));
        assert_eq!(counit(&HopfElement::generator(k)), BigInt::zero());
    }

    #[test]
    fn axioms_small_d3() {
        let mut alg = HopfAlgebra::default();
        for k in generators(3, 3) {
            assert!(alg.is_coassociative_on(&k), "{k}");
            let (l, r) = alg.antipode_identities(&k).unwrap();
            assert!(l.is_zero() && r.is_zero(), "{k}");
        }
    }

    #[test]
    fn axioms_small_d2() {
        let mut alg = HopfAlgebra::default();
        for k in generators(2, 4) {
            assert!(alg.is_coassociative_on(&k), "{k}");
            let (l, r) = alg.antipode_identities(&k).unwrap();
            assert!(l.is_zero() && r.is_zero(), "{k}");
        }
    }

    #[test]
    fn admissibility_switches() {
        let gens = generators(3, 3);
        let only_single = Admissibility { single_vertices: true, complement_of_mark: false };
        let only_complement = Admissibility { single_vertices: false, complement_of_mark: true };
        for adm in [only_single, only_complement] {
            let mut alg = HopfAlgebra::new(adm);
            assert!(gens.iter().any(|k| !alg.is_coassociative_on(k)));
        }
        let mut all = HopfAlgebra::new(Admissibility { single_vertices: true, complement_of_mark: true });
        assert!(gens.iter().all(|k| all.is_coassociative_on(k)));
        let dip = MarkedGraph { graph: ColoredGraph::dipole(3), vertex: Vertex::White(0) }.canonical_form();
        assert_eq!(all.coproduct(&dip).len(), 3);
        assert!(all.antipode(&dip).is_err());
    }

    #[test]
    fn characters_form_a_group() {
        let mut alg = HopfAlgebra::default();
        let domain: Vec<MarkedKey> = alg.closure(&generators(3, 3)).into_iter().collect();
        let a = Character {
            values: domain.iter().enumerate().map(|(i, k)| (k.clone(), Rational::new(BigInt::from(i as i64 % 7 - 3), BigInt::from(i as i64 % 4 + 1)))).collect(),
        };
        let eps = Character::counit_on(&domain);
        assert_eq!(alg.convolve(&a, &eps, &domain).unwrap(), a);
        assert_eq!(alg.convolve(&eps, &a, &domain).unwrap(), a);
        let inv = alg.inverse(&a, &domain).unwrap();
        assert_eq!(alg.convolve(&a, &inv, &domain).unwrap(), eps);
        assert_eq!(alg.convolve(&inv, &a, &domain).unwrap(), eps);
    }

    #[test]
    fn infinitesimal_brackets() {
        let mut alg = HopfAlgebra::default();
        let gens = generators(3, 2);
        let domain: Vec<MarkedKey> = generators(3, 5);
        for a in &gens {
            let da = InfinitesimalCharacter::delta(a.clone());
            assert!(alg.infinitesimal_bracket(&da, &da, &domain).is_zero());
        }
        let dip = InfinitesimalCharacter::delta(MarkedGraph { graph: ColoredGraph::dipole(3), vertex: Vertex::White(0) }.canonical_form());
        let dip_b = InfinitesimalCharacter::delta(MarkedGraph { graph: ColoredGraph::dipole(3), vertex: Vertex::Black(0) }.canonical_form());
        assert!(alg.infinitesimal_bracket(&dip, &dip_b, &domain).is_zero());
    }

    #[test]
    fn insertions_invert_coproduct() {
        let alg = HopfAlgebra::default();
        for x in generators(3, 3) {
            for (l, r) in alg.reduced_coproduct_terms(&x) {
                if l.degree() == 1 {
                    let a = l.iter().next().unwrap().0.clone();
                    assert!(insertions(&a, &r).unwrap().contains(&x));
                }
            }
        }
    }

    #[test]
    fn jacobi_small() {
        let mut alg = HopfAlgebra::default();
        let gens = generators(3, 2);
        for a in &gens {
            for b in &gens {
                for c in &gens {
                    let (da, db, dc) = (InfinitesimalCharacter::delta(a.clone()), InfinitesimalCharacter::delta(b.clone()), InfinitesimalCharacter::delta(c.clone()));
                    for x in jacobi_domain(a, b, c).unwrap() {
                        assert!(alg.jacobiator_at(&da, &db, &dc, &x).is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn brackets_agree_away_from_dipole() {
        let mut alg = HopfAlgebra::default();
        let gens: Vec<_> = generators(3, 2).into_iter().filter(|k| !k.is_white()).collect();
        for a in &gens {
            for b in &gens {
                let c = compare_brackets(&mut alg, a, b).unwrap();
                if a.p() >= 2 && b.p() >= 2 {
                    assert_eq!(c.hopf, c.schwinger_dyson);
                } else {
                    assert!(c.hopf.is_empty());
                }
            }
        }
    }
}
