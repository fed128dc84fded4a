//! Schwinger-Dyson constraints as differential operators on coupling series,
//! and the Lie algebra of the underlying changes of variables.
//!
//! Acting on `Z`, multiplication of the integrand by `Tr_G` becomes an
//! operator `D_G`: for every non-dipole component `Γ_k`, `C_k ∂/∂λ_k`; for
//! dipole components, `N^D + j + E` with `E = Σ p_Γ λ_Γ ∂/∂λ_Γ` (the dipole
//! coupling is frozen into the Gaussian measure); each vertexless loop gives
//! a factor `N`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::colored_graph::{enumerate_graphs, enumerate_graphs_of_size, ColoredGraph, GraphKey, MarkedGraph, MarkedKey, Vertex};
use crate::contraction::{contract_pairs, glue_tracked};
use crate::error::{Error, Result};
use crate::poly::{rat, Poly, Rational};
use crate::wick_series::{coupling_graphs, partition_series, CouplingSeries, Monomial};

/// Which generating function the constraint is applied to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SdForm {
    /// `Z`, the integral itself.
    #[default]
    Z,
    /// `W = log Z`, with the same operator applied literally.
    W,
}

impl std::str::FromStr for SdForm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "z" | "z-form" => Ok(SdForm::Z),
            "w" | "w-form" => Ok(SdForm::W),
            _ => Err(Error::Input(format!("unknown Schwinger-Dyson form {s:?} (expected z-form or w-form)"))),
        }
    }
}

/// One white vertex `v` of `Γ₀` and the graph `Γ₀/v̄₀v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JacobianTerm {
    pub white: usize,
    /// Connected components with at least one vertex.
    pub components: Monomial,
    /// Vertexless loops, each worth `N`.
    pub loops: usize,
}

/// `L_(Γ₀, v̄₀)`, stored in the canonical labeling of the marked orbit, so
/// `v̄₀` is always black vertex 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstraintOperator {
    key: MarkedKey,
    graph: ColoredGraph,
    jacobian: Vec<JacobianTerm>,
}

impl ConstraintOperator {
    pub fn new(g0: &ColoredGraph, vbar0: usize) -> Result<Self> {
        g0.check_vertex(Vertex::Black(vbar0))?;
        if !g0.is_connected() {
            return Err(Error::NotConnected);
        }
        let key = MarkedGraph::new(g0.without_loops(), Vertex::Black(vbar0))?.canonical_form();
        Self::from_key(key)
    }

    pub fn from_key(key: MarkedKey) -> Result<Self> {
        if key.is_white() {
            return Err(Error::Input("constraint operators are marked at a black vertex".into()));
        }
        let graph = key.decode().graph;
        if !graph.is_connected() {
            return Err(Error::NotConnected);
        }
        let mut jacobian = Vec::with_capacity(graph.p());
        for v in 0..graph.p() {
            let s = contract_pairs(&graph, &[(v, 0)])?;
            let (components, loops) = Monomial::of_graph(&s.graph);
            jacobian.push(JacobianTerm { white: v, components, loops: loops + s.new_loops });
        }
        Ok(ConstraintOperator { key, graph, jacobian })
    }

    pub fn dipole(d: usize) -> Self {
        Self::new(&ColoredGraph::dipole(d), 0).expect("dipole is connected")
    }

    pub fn key(&self) -> &MarkedKey {
        &self.key
    }

    pub fn graph(&self) -> &ColoredGraph {
        &self.graph
    }

    pub fn graph_key(&self) -> GraphKey {
        self.graph.canonical_form()
    }

    pub fn d(&self) -> usize {
        self.graph.d()
    }

    pub fn p(&self) -> usize {
        self.graph.p()
    }

    pub fn jacobian_terms(&self) -> &[JacobianTerm] {
        &self.jacobian
    }

    /// `(Γ₀ H)/v̄₀v`, connected whenever `H` is.
    pub fn insert(&self, h: &ColoredGraph, v: usize) -> Result<ColoredGraph> {
        Ok(glue_tracked(&self.graph, 0, h, v)?.graph)
    }
}

impl fmt::Display for ConstraintOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L[{}]", self.key)
    }
}

/// One black vertex per orbit of the automorphism group, smallest index first.
pub fn black_orbits(g: &ColoredGraph) -> Vec<usize> {
    let mut seen = BTreeSet::new();
    (0..g.p())
        .filter(|&b| {
            let key = MarkedGraph { graph: g.without_loops(), vertex: Vertex::Black(b) }.canonical_form();
            seen.insert(key)
        })
        .collect()
}

/// Every constraint operator of a connected graph with `1 ≤ p ≤ p_max`.
pub fn constraint_operators(d: usize, p_max: usize) -> Vec<ConstraintOperator> {
    enumerate_graphs(d, p_max, true)
        .into_iter()
        .filter(|k| k.p() >= 1)
        .flat_map(|k| {
            let g = k.decode();
            black_orbits(&g).into_iter().map(move |b| ConstraintOperator::new(&g, b).unwrap())
        })
        .collect()
}

fn dipole_key(d: usize) -> GraphKey {
    ColoredGraph::dipole(d).canonical_form()
}

fn automorphisms(key: &GraphKey) -> BigInt {
    BigInt::from(key.decode().automorphism_count())
}

/// `D_G S` for `G = components ⊔ loops`.
pub fn apply_graph_operator(d: usize, components: &Monomial, loops: usize, s: &CouplingSeries) -> CouplingSeries {
    let dip = dipole_key(d);
    let nd = Poly::n_pow(d as u32);
    let mut out = s.clone();
    for j in 0..components.power(&dip) {
        out = out.scale(&(&nd + &Poly::int(j as i64))).add(&out.euler());
    }
    for (k, m) in components.iter() {
        if *k == dip {
            continue;
        }
        let c = Poly::constant(Rational::from_integer(automorphisms(k)));
        for _ in 0..m {
            out = out.differentiate(k).scale(&c);
        }
    }
    if loops > 0 {
        out = out.scale(&Poly::n_pow(loops as u32));
    }
    out
}

/// The three contributions to `L S`, each a series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstraintTerms {
    /// `Σ_v N^{loops} D_{Γ₀/v̄₀v} S`.
    pub jacobian: CouplingSeries,
    /// `D_{Γ₀} S`, entering with a minus sign.
    pub measure: CouplingSeries,
    /// `Σ_Γ (λ_Γ / C_Γ) Σ_v D_{(Γ₀Γ)/v̄₀v} S`.
    pub insertion: CouplingSeries,
}

impl ConstraintTerms {
    pub fn residual(&self) -> CouplingSeries {
        self.jacobian.sub(&self.measure).add(&self.insertion)
    }
}

fn check_dimension(op: &ConstraintOperator, s: &CouplingSeries) -> Result<()> {
    for (m, _) in s.terms() {
        for (k, _) in m.iter() {
            if k.d() != op.d() {
                return Err(Error::DimensionMismatch(op.d(), k.d()));
            }
        }
    }
    Ok(())
}

pub fn constraint_terms(op: &ConstraintOperator, s: &CouplingSeries) -> Result<ConstraintTerms> {
    check_dimension(op, s)?;
    let d = op.d();
    let mut jacobian: Option<CouplingSeries> = None;
    for t in &op.jacobian {
        let x = apply_graph_operator(d, &t.components, t.loops, s);
        jacobian = Some(match jacobian {
            Some(acc) => acc.add(&x),
            None => x,
        });
    }
    let jacobian = jacobian.expect("p ≥ 1");
    let measure = apply_graph_operator(d, &Monomial::single(op.graph_key()), 0, s);

    let mut cache: HashMap<GraphKey, CouplingSeries> = HashMap::new();
    let mut insertion = CouplingSeries::zero(s.max_order());
    for gamma in coupling_graphs(d, s.max_order()) {
        let h = gamma.decode();
        let inv_c = Poly::constant(Rational::new(BigInt::one(), automorphisms(&gamma)));
        let mut acc: Option<CouplingSeries> = None;
        for v in 0..h.p() {
            let glued = op.insert(&h, v)?.canonical_form();
            let x = cache
                .entry(glued.clone())
                .or_insert_with(|| apply_graph_operator(d, &Monomial::single(glued), 0, s))
                .clone();
            acc = Some(match acc {
                Some(a) => a.add(&x),
                None => x,
            });
        }
        if let Some(a) = acc {
            insertion = insertion.add(&a.mul_monomial(&Monomial::single(gamma)).scale(&inv_c));
        }
    }
    Ok(ConstraintTerms { jacobian, measure, insertion })
}

/// `L_(Γ₀, v̄₀) S`. Valid through vertex order `S.max_order − 2 p₀`.
pub fn constraint_action(op: &ConstraintOperator, s: &CouplingSeries) -> Result<CouplingSeries> {
    let r = constraint_terms(op, s)?.residual();
    Ok(r.with_max_order(s.max_order().saturating_sub(2 * op.p())))
}

/// The generating function the constraints are checked against.
pub fn generating_series(d: usize, v_max: usize, form: SdForm) -> CouplingSeries {
    let z = partition_series(d, v_max);
    match form {
        SdForm::Z => z,
        SdForm::W => z.log().expect("Z has constant term 1"),
    }
}

/// `L_(Γ₀, v̄₀)` applied to `Z` (or `W`) truncated at `v_max`. Returns the
/// residual, which should be the zero series.
pub fn verify_constraint(g0: &GraphKey, vbar0: usize, d: usize, v_max: usize, form: SdForm) -> Result<CouplingSeries> {
    if g0.d() != d {
        return Err(Error::DimensionMismatch(d, g0.d()));
    }
    let op = ConstraintOperator::new(&g0.decode(), vbar0)?;
    let s = generating_series(d, v_max, form);
    verify_with(&op, &s)
}

pub fn verify_with(op: &ConstraintOperator, s: &CouplingSeries) -> Result<CouplingSeries> {
    if 2 * op.p() > s.max_order() {
        return Err(Error::TruncationTooSmall { vertices: 2 * op.p(), max: s.max_order() });
    }
    constraint_action(op, s)
}

/// Residuals of every operator with `p ≤ p_max`, in enumeration order.
pub fn verify_all(d: usize, p_max: usize, v_max: usize, form: SdForm) -> Result<Vec<(ConstraintOperator, CouplingSeries)>> {
    let s = generating_series(d, v_max, form);
    constraint_operators(d, p_max)
        .into_par_iter()
        .map(|op| {
            let r = verify_with(&op, &s)?;
            Ok((op, r))
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Lie algebra

/// A finite linear combination of generators `X_(Γ, v̄)`, indexed by black
/// marked keys.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OperatorCombination {
    terms: BTreeMap<MarkedKey, Rational>,
}

impl OperatorCombination {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn single(key: MarkedKey) -> Self {
        let mut c = Self::zero();
        c.add_term(key, rat(1));
        c
    }

    pub fn add_term(&mut self, key: MarkedKey, c: Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(key.clone()).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&key);
        }
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

    pub fn iter(&self) -> impl Iterator<Item = (&MarkedKey, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, key: &MarkedKey) -> Rational {
        self.terms.get(key).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero();
        for (k, x) in &self.terms {
            out.add_term(k.clone(), x * c);
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, x) in &other.terms {
            out.add_term(k.clone(), x.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&rat(-1)))
    }
}

impl fmt::Display for OperatorCombination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(k, c)| format!("({c})·X[{k}]")).collect();
        f.write_str(&parts.join(" + "))
    }
}

fn glue_marked(a: &MarkedKey, b: &MarkedKey, w: usize) -> Result<MarkedKey> {
    let ga = a.decode().graph;
    let gb = b.decode().graph;
    let s = glue_tracked(&ga, 0, &gb, w)?;
    let mark = s.map_vertex(Vertex::Black(ga.p())).expect("mark of b survives");
    Ok(MarkedGraph::new(s.graph, mark)?.canonical_form())
}

/// `[X_a, X_b]` from the composition of the two substitutions:
/// `Σ_{w ∈ Γ_b} X_(Γ_a ∘_w Γ_b, v̄_b) − Σ_{w ∈ Γ_a} X_(Γ_b ∘_w Γ_a, v̄_a)`.
pub fn symbolic_bracket(a: &MarkedKey, b: &MarkedKey) -> Result<OperatorCombination> {
    if a.d() != b.d() {
        return Err(Error::DimensionMismatch(a.d(), b.d()));
    }
    let mut out = OperatorCombination::zero();
    for w in 0..b.p() {
        out.add_term(glue_marked(a, b, w)?, rat(1));
    }
    for w in 0..a.p() {
        out.add_term(glue_marked(b, a, w)?, rat(-1));
    }
    Ok(out)
}

/// Bilinear extension of [`symbolic_bracket`].
pub fn bracket_combination(x: &OperatorCombination, y: &OperatorCombination) -> Result<OperatorCombination> {
    let mut out = OperatorCombination::zero();
    for (a, ca) in x.iter() {
        for (b, cb) in y.iter() {
            out = out.add(&symbolic_bracket(a, b)?.scale(&(ca * cb)));
        }
    }
    Ok(out)
}

/// `[x,[y,z]] + [y,[z,x]] + [z,[x,y]]`.
pub fn jacobiator(x: &OperatorCombination, y: &OperatorCombination, z: &OperatorCombination) -> Result<OperatorCombination> {
    let a = bracket_combination(x, &bracket_combination(y, z)?)?;
    let b = bracket_combination(y, &bracket_combination(z, x)?)?;
    let c = bracket_combination(z, &bracket_combination(x, y)?)?;
    Ok(a.add(&b).add(&c))
}

/// A linear combination of single-trace observables.
pub type Observable = BTreeMap<GraphKey, Rational>;

/// The change of variables `M → M + δM` acting on `Tr_H` as a derivation:
/// every white vertex of `H` is replaced in turn by `δM`.
pub fn act_on_trace(gen: &MarkedKey, h: &GraphKey) -> Result<Observable> {
    let g = gen.decode().graph;
    let hg = h.decode();
    let mut out = Observable::new();
    for w in 0..hg.p() {
        let key = glue_tracked(&g, 0, &hg, w)?.graph.canonical_form();
        *out.entry(key).or_insert_with(Rational::zero) += rat(1);
    }
    out.retain(|_, c| !c.is_zero());
    Ok(out)
}

pub fn act(gen: &MarkedKey, obs: &Observable) -> Result<Observable> {
    let mut out = Observable::new();
    for (h, c) in obs {
        for (k, x) in act_on_trace(gen, h)? {
            *out.entry(k).or_insert_with(Rational::zero) += x * c;
        }
    }
    out.retain(|_, c| !c.is_zero());
    Ok(out)
}

/// Outcome of expanding a commutator in generators by linear algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BracketResult {
    pub combination: OperatorCombination,
    /// Components of the commutator that no candidate reproduces, as
    /// `(basis trace, output trace, coefficient)`.
    pub remainder: Vec<(GraphKey, GraphKey, Rational)>,
    /// Candidates left undetermined by the basis (set to zero).
    pub undetermined: Vec<MarkedKey>,
    pub basis_size: usize,
}

impl BracketResult {
    pub fn closes(&self) -> bool {
        self.remainder.is_empty()
    }
}

/// Every black-marked connected graph with `p` white vertices.
pub fn generators_of_size(d: usize, p: usize) -> Vec<MarkedKey> {
    enumerate_graphs_of_size(d, p, true)
        .into_iter()
        .flat_map(|k| {
            let g = k.decode();
            black_orbits(&g)
                .into_iter()
                .map(move |b| MarkedGraph { graph: g.clone(), vertex: Vertex::Black(b) }.canonical_form())
        })
        .collect()
}

/// `[a, b]` computed by applying `X_a X_b − X_b X_a` to every connected
/// trace with at most `v_max` vertices and solving exactly for the
/// coefficients of candidate generators. The candidates are the support of
/// [`symbolic_bracket`], plus all generators of the right size when that
/// size is at most 4.
pub fn lie_bracket(a: &ConstraintOperator, b: &ConstraintOperator, v_max: usize) -> Result<BracketResult> {
    let (ka, kb) = (a.key(), b.key());
    if ka.d() != kb.d() {
        return Err(Error::DimensionMismatch(ka.d(), kb.d()));
    }
    let d = ka.d();
    let mut candidates: BTreeSet<MarkedKey> = symbolic_bracket(ka, kb)?.iter().map(|(k, _)| k.clone()).collect();
    let size = ka.p() + kb.p() - 1;
    if size <= 4 {
        candidates.extend(generators_of_size(d, size));
    }
    let candidates: Vec<MarkedKey> = candidates.into_iter().collect();
    let basis = enumerate_graphs(d, v_max / 2, true);

    let mut rows: BTreeMap<(GraphKey, GraphKey), (Vec<Rational>, Rational)> = BTreeMap::new();
    let ncols = candidates.len();
    for h in &basis {
        let single: Observable = [(h.clone(), rat(1))].into_iter().collect();
        let ab = act(ka, &act(kb, &single)?)?;
        let ba = act(kb, &act(ka, &single)?)?;
        for (k, c) in ab {
            rows.entry((h.clone(), k)).or_insert_with(|| (vec![Rational::zero(); ncols], Rational::zero())).1 += c;
        }
        for (k, c) in ba {
            rows.entry((h.clone(), k)).or_insert_with(|| (vec![Rational::zero(); ncols], Rational::zero())).1 -= c;
        }
        for (j, cand) in candidates.iter().enumerate() {
            for (k, c) in act_on_trace(cand, h)? {
                rows.entry((h.clone(), k)).or_insert_with(|| (vec![Rational::zero(); ncols], Rational::zero())).0[j] += c;
            }
        }
    }
    let labels: Vec<(GraphKey, GraphKey)> = rows.keys().cloned().collect();
    let (matrix, rhs): (Vec<Vec<Rational>>, Vec<Rational>) = rows.into_values().unzip();
    let sol = solve(matrix, rhs);
    let mut combination = OperatorCombination::zero();
    for (j, x) in sol.values.into_iter().enumerate() {
        combination.add_term(candidates[j].clone(), x);
    }
    let remainder = sol
        .inconsistent
        .into_iter()
        .map(|(i, r)| (labels[i].0.clone(), labels[i].1.clone(), r))
        .collect();
    let undetermined = sol.free.into_iter().map(|j| candidates[j].clone()).collect();
    Ok(BracketResult { combination, remainder, undetermined, basis_size: basis.len() })
}

struct Solution {
    values: Vec<Rational>,
    free: Vec<usize>,
    /// Rows whose reduced equation reads `0 = r` with `r ≠ 0`.
    inconsistent: Vec<(usize, Rational)>,
}

/// Gauss-Jordan elimination over the rationals. Free variables are set to
/// zero.
fn solve(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Solution {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut order: Vec<usize> = (0..rows).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(pr) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, pr);
        b.swap(r, pr);
        order.swap(r, pr);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        b[r] *= &inv;
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for k in 0..cols {
                    let t = &f * &a[r][k];
                    a[i][k] -= t;
                }
                let t = &f * &b[r];
                b[i] -= t;
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    let mut values = vec![Rational::zero(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        values[c] = b[i].clone();
    }
    let free = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let inconsistent = (r..rows).filter(|&i| !b[i].is_zero()).map(|i| (order[i], b[i].clone())).collect();
    Solution { values, free, inconsistent }
}

/// The generator `X_k` of the `k`-necklace (`D = 2`), marked at a black vertex.
pub fn necklace_generator(k: usize) -> MarkedKey {
    MarkedGraph { graph: ColoredGraph::necklace(k), vertex: Vertex::Black(0) }.canonical_form()
}

/// Computed `[X_m, X_n]` for `D = 2` necklaces, as `(coefficient, size)`
/// pairs with `X_size`.
pub fn necklace_relation(m: usize, n: usize) -> Result<Vec<(Rational, usize)>> {
    let c = symbolic_bracket(&necklace_generator(m), &necklace_generator(n))?;
    Ok(c.iter().map(|(k, x)| (x.clone(), k.p())).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor_eval::sd_residual_numeric;

    fn eq1_graph() -> ColoredGraph {
        ColoredGraph::from_one_based(3, 3, &[vec![1, 2, 3], vec![3, 1, 2], vec![2, 3, 1]], 0).unwrap()
    }

    #[test]
    fn dipole_jacobian_is_nd() {
        for d in [2, 3] {
            let op = ConstraintOperator::dipole(d);
            let t = constraint_terms(&op, &CouplingSeries::one(0)).unwrap();
            assert_eq!(t.jacobian, CouplingSeries::one(0).scale(&Poly::n_pow(d as u32)));
            let num = sd_residual_numeric(&ColoredGraph::dipole(d), 0, &[], 2).unwrap();
            assert_eq!(num.jacobian, BigInt::from(2u64.pow(d as u32)));
        }
    }

    #[test]
    fn dipole_constraint_vanishes() {
        assert!(verify_constraint(&dipole_key(3), 0, 3, 4, SdForm::Z).unwrap().is_zero());
        assert!(verify_constraint(&dipole_key(2), 0, 2, 6, SdForm::Z).unwrap().is_zero());
    }

    #[test]
    fn sextic_constraint_vanishes() {
        let g = eq1_graph();
        let key = g.canonical_form();
        for b in 0..3 {
            assert!(verify_constraint(&key, b, 3, 6, SdForm::Z).unwrap().is_zero());
        }
    }

    #[test]
    fn quartic_constraints_vanish() {
        for key in enumerate_graphs_of_size(3, 2, true) {
            for b in black_orbits(&key.decode()) {
                assert!(verify_constraint(&key, b, 3, 6, SdForm::Z).unwrap().is_zero(), "{key} b{b}");
            }
        }
    }

    #[test]
    fn truncation_too_small() {
        let key = eq1_graph().canonical_form();
        assert!(matches!(verify_constraint(&key, 0, 3, 4, SdForm::Z), Err(Error::TruncationTooSmall { .. })));
    }

    #[test]
    fn orbit_invariance() {
        let g = eq1_graph();
        let ops: Vec<_> = (0..3).map(|b| ConstraintOperator::new(&g, b).unwrap()).collect();
        assert_eq!(black_orbits(&g), vec![0]);
        assert!(ops.iter().all(|o| o == &ops[0]));
    }

    #[test]
    fn terms_match_numeric_oracle() {
        let z = partition_series(3, 6);
        for op in constraint_operators(3, 2) {
            let t = constraint_terms(&op, &z).unwrap();
            let valid = 6 - 2 * op.p();
            for (m, _) in z.terms().filter(|(m, _)| m.order() <= valid) {
                let sym = m.symmetry_factor();
                let ins: Vec<ColoredGraph> = m.keys().iter().map(|k| k.decode()).collect();
                for n in 1..=2i64 {
                    let num = sd_residual_numeric(op.graph(), 0, &ins, n as u64).unwrap();
                    let scaled = |s: &CouplingSeries| s.coefficient(m).eval_n(n) * Rational::from_integer(sym.clone());
                    assert_eq!(scaled(&t.jacobian), Rational::from_integer(num.jacobian.clone()));
                    assert_eq!(scaled(&t.measure), Rational::from_integer(num.measure.clone()));
                    assert_eq!(scaled(&t.insertion), Rational::from_integer(num.insertion.clone()));
                    assert!(num.residual.is_zero());
                }
            }
        }
    }

    #[test]
    fn bracket_antisymmetry() {
        let ops = constraint_operators(3, 2);
        for a in &ops {
            assert!(symbolic_bracket(a.key(), a.key()).unwrap().is_zero());
            for b in &ops {
                let ab = symbolic_bracket(a.key(), b.key()).unwrap();
                let ba = symbolic_bracket(b.key(), a.key()).unwrap();
                assert!(ab.add(&ba).is_zero());
            }
        }
    }

    #[test]
    fn bracket_matches_linear_solve() {
        let ops = constraint_operators(3, 2);
        for a in &ops {
            for b in &ops {
                let r = lie_bracket(a, b, 6).unwrap();
                assert!(r.closes());
                assert!(r.undetermined.is_empty(), "{:?}", r.undetermined);
                assert_eq!(r.combination, symbolic_bracket(a.key(), b.key()).unwrap());
            }
        }
    }

    #[test]
    fn witt_relation() {
        for m in 1..=4 {
            for n in 1..=4 {
                let rel = necklace_relation(m, n).unwrap();
                if m == n {
                    assert!(rel.is_empty());
                } else {
                    assert_eq!(rel, vec![(rat(n as i64 - m as i64), m + n - 1)]);
                }
            }
        }
    }

    #[test]
    fn jacobi_small() {
        let ops = constraint_operators(3, 2);
        let singles: Vec<_> = ops.iter().map(|o| OperatorCombination::single(o.key().clone())).collect();
        for x in &singles {
            for y in &singles {
                for z in &singles {
                    assert!(jacobiator(x, y, z).unwrap().is_zero());
                }
            }
        }
    }
}
