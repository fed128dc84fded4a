//! The effective action `S_t = −log ∫ dμ_t(Q) exp(−S₀[T+Q])` of a tensor
//! model in a background `T`, its couplings `λ_Γ(t)`, and their flow.
//!
//! Couplings are indexed by possibly disconnected graphs, represented as
//! [`Monomial`]s of connected keys (the empty monomial is the constant
//! term). A term with `t^k` in front of a graph with `V` vertices comes from
//! bare interactions with `V + 2k` vertices in total; truncation at `V_max`
//! bounds that bare count, so every coefficient kept is exact.

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::colored_graph::{cycle_lengths, enumerate_graphs, invert, ColoredGraph, GraphKey};
use crate::contraction::{contract_pairs, edge_cut, enumerate_cuts};
use crate::error::{Error, Result};
use crate::poly::{rat, Poly, Rational};
use crate::wick_series::{factorial_big, monomials_up_to, CouplingSeries, Monomial};

/// Bare couplings `λ_Γ(0)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Seed {
    pub d: usize,
    pub couplings: BTreeMap<Monomial, Rational>,
}

impl Seed {
    pub fn new(d: usize) -> Self {
        Seed { d, couplings: BTreeMap::new() }
    }

    pub fn with(mut self, graph: &ColoredGraph, value: Rational) -> Result<Self> {
        if graph.d() != self.d {
            return Err(Error::DimensionMismatch(self.d, graph.d()));
        }
        let (m, loops) = Monomial::of_graph(graph);
        if loops > 0 {
            return Err(Error::Input("seed graphs carry no vertexless loops".into()));
        }
        if !value.is_zero() {
            self.couplings.insert(m, value);
        }
        Ok(self)
    }

    /// `λ Tr_dipole`.
    pub fn dipole(d: usize, value: Rational) -> Self {
        Seed::new(d).with(&ColoredGraph::dipole(d), value).unwrap()
    }

    pub fn max_vertices(&self) -> usize {
        self.couplings.keys().map(|m| m.order()).max().unwrap_or(0)
    }
}

/// `λ_Γ(t)` for every graph with at most `V_max` vertices, as polynomials
/// in `N` and `t`. The coefficient of `t^k` is kept for `V + 2k ≤ V_max`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EffectiveCouplings {
    pub d: usize,
    pub v_max: usize,
    values: BTreeMap<Monomial, Poly>,
}

impl EffectiveCouplings {
    pub fn get(&self, m: &Monomial) -> Poly {
        self.values.get(m).cloned().unwrap_or_default()
    }

    pub fn get_graph(&self, g: &ColoredGraph) -> Poly {
        self.get(&Monomial::of_graph(g).0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Monomial, &Poly)> {
        self.values.iter()
    }

    /// Highest `t` power known exactly for a graph with this many vertices.
    pub fn window(&self, vertices: usize) -> Option<u32> {
        (vertices <= self.v_max).then(|| ((self.v_max - vertices) / 2) as u32)
    }
}

/// Keeps the terms with `V + 2·deg_t ≤ v_max`.
fn truncate_bare(s: &CouplingSeries, v_max: usize) -> CouplingSeries {
    s.map_coefficients(|m, c| {
        if m.order() > v_max {
            Poly::zero()
        } else {
            c.truncate_t(((v_max - m.order()) / 2) as u32)
        }
    })
}

/// All partial matchings between whites and blacks, as pair lists.
fn partial_matchings(p: usize) -> Vec<Vec<(usize, usize)>> {
    let mut out = Vec::new();
    for k in 0..=p {
        for whites in (0..p).combinations(k) {
            for blacks in (0..p).permutations(k) {
                out.push(whites.iter().copied().zip(blacks).collect());
            }
        }
    }
    out
}

/// `E_t[Tr_H(T + Q)]` as a series in background traces: every partial Wick
/// pairing of `H` contributes `t^{pairs} N^{loops} Tr_{H/pairs}(T)`.
pub fn fluctuation_average(h: &ColoredGraph, v_max: usize) -> Result<CouplingSeries> {
    let mut out = CouplingSeries::zero(v_max);
    for pairs in partial_matchings(h.p()) {
        let s = contract_pairs(h, &pairs)?;
        let (m, loops) = Monomial::of_graph(&s.graph);
        let c = Poly::monomial(rat(1), (loops + s.new_loops + h.loops()) as u32, pairs.len() as u32);
        out.add_term(m, &c);
    }
    Ok(out)
}

/// `λ_Γ(t) = C_Γ · [Tr_Γ] S_t` with `S_t = −log E_t exp(−S₀[T+Q])`.
pub fn effective_couplings(seed: &Seed, v_max: usize) -> Result<EffectiveCouplings> {
    let d = seed.d;
    if seed.max_vertices() > v_max {
        return Err(Error::TruncationTooSmall { vertices: seed.max_vertices(), max: v_max });
    }
    let constant = seed.couplings.get(&Monomial::one()).cloned().unwrap_or_else(Rational::zero);
    let vars: Vec<(&Monomial, &Rational)> = seed.couplings.iter().filter(|(m, _)| !m.is_one()).collect();
    let mut f = CouplingSeries::zero(v_max);
    for mult in multisets(&vars.iter().map(|(m, _)| m.order()).collect::<Vec<_>>(), v_max) {
        let mut graphs = Vec::new();
        let mut weight = Rational::one();
        for (i, &m) in mult.iter().enumerate() {
            if m == 0 {
                continue;
            }
            let (mono, value) = vars[i];
            let c = Rational::from_integer(mono.symmetry_factor());
            weight *= crate::poly::pow(&(-value / &c), m) / Rational::from_integer(factorial_big(m as usize));
            for _ in 0..m {
                graphs.push(mono.graph(d));
            }
        }
        let h = ColoredGraph::union_all(d, &graphs)?;
        let avg = fluctuation_average(&h, v_max)?;
        f = f.add(&avg.scale(&Poly::constant(weight)));
    }
    let f = truncate_bare(&f, v_max);
    let log_f = bare_log(&f, v_max)?;
    let mut values = BTreeMap::new();
    for (m, c) in log_f.terms() {
        let sym = Rational::from_integer(m.symmetry_factor());
        let mut v = c.scale(&(-sym));
        if m.is_one() {
            v += &Poly::constant(constant.clone());
        }
        if !v.is_zero() {
            values.insert(m.clone(), v);
        }
    }
    if !constant.is_zero() && !values.contains_key(&Monomial::one()) {
        values.insert(Monomial::one(), Poly::constant(constant));
    }
    Ok(EffectiveCouplings { d, v_max, values })
}

/// Multiplicity vectors `m` with `Σ m_i·sizes_i ≤ bound`.
fn multisets(sizes: &[usize], bound: usize) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for &s in sizes {
        let mut next = Vec::new();
        for cur in out {
            let used: usize = cur.iter().zip(sizes).map(|(&m, &z)| m as usize * z).sum();
            let mut m = 0u32;
            while used + m as usize * s <= bound {
                let mut c = cur.clone();
                c.push(m);
                next.push(c);
                m += 1;
                if s == 0 {
                    break;
                }
            }
        }
        out = next;
    }
    out
}

/// `log F` for `F = 1 + (terms of bare order ≥ 2)`, truncated in bare order.
fn bare_log(f: &CouplingSeries, v_max: usize) -> Result<CouplingSeries> {
    let c0 = f.constant_term();
    if c0.coefficient(0, 0) != rat(1) {
        return Err(Error::ConstantTerm(c0.to_string()));
    }
    let y = f.sub(&CouplingSeries::one(v_max));
    let mut out = CouplingSeries::zero(v_max);
    let mut power = y.clone();
    for k in 1..=(v_max / 2).max(1) {
        if power.is_zero() {
            break;
        }
        let sign = if k % 2 == 1 { 1 } else { -1 };
        out = out.add(&power.scale(&Poly::constant(Rational::new(BigInt::from(sign), BigInt::from(k)))));
        power = truncate_bare(&power.mul(&y), v_max);
    }
    Ok(out)
}

/// The discrete choices left open by the flow equation as usually written.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FlowConvention {
    /// Include the cut with no edges (a disjoint dipole), weight `N^D`.
    pub include_k0: bool,
    /// Sign of the bilinear term.
    pub quadratic_sign: i64,
    /// Multiplicity of each (cut, split) pair in the bilinear term, as `num/den`.
    pub quadratic_weight: (i64, i64),
}

impl Default for FlowConvention {
    fn default() -> Self {
        FlowConvention { include_k0: true, quadratic_sign: -1, quadratic_weight: (1, 1) }
    }
}

impl FlowConvention {
    /// Every combination searched by [`search_conventions`].
    pub fn all() -> Vec<FlowConvention> {
        let mut out = Vec::new();
        for include_k0 in [true, false] {
            for quadratic_sign in [1, -1] {
                for quadratic_weight in [(1, 2), (1, 1), (2, 1)] {
                    out.push(FlowConvention { include_k0, quadratic_sign, quadratic_weight });
                }
            }
        }
        out
    }

    fn quadratic_factor(&self) -> Rational {
        Rational::new(BigInt::from(self.quadratic_sign * self.quadratic_weight.0), BigInt::from(self.quadratic_weight.1))
    }
}

impl fmt::Display for FlowConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "k0={} sign={:+} weight={}/{}",
            self.include_k0, self.quadratic_sign, self.quadratic_weight.0, self.quadratic_weight.1
        )
    }
}

impl std::str::FromStr for FlowConvention {
    type Err = Error;
    /// Comma-separated switches: `no-k0`, `plus`, `half`, `double`.
    fn from_str(s: &str) -> Result<Self> {
        let mut c = FlowConvention::default();
        for part in s.split(',').map(str::trim).filter(|x| !x.is_empty()) {
            match part {
                "k0" => c.include_k0 = true,
                "no-k0" => c.include_k0 = false,
                "plus" => c.quadratic_sign = 1,
                "minus" => c.quadratic_sign = -1,
                "half" => c.quadratic_weight = (1, 2),
                "unit" => c.quadratic_weight = (1, 1),
                "double" => c.quadratic_weight = (2, 1),
                _ => return Err(Error::Input(format!("unknown flow convention switch {part:?}"))),
            }
        }
        Ok(c)
    }
}

/// One contribution to `dλ_Γ/dt`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RhsTerm {
    /// `N^{D−k} λ_{Γ − cut}` for a cut of `k` edges.
    Linear { k: usize, source: Monomial },
    /// `λ_{Γ₁} λ_{Γ₂}` for a cut of all `D` colors separating the new pair;
    /// `left` holds the new white vertex.
    Quadratic { left: Monomial, right: Monomial },
}

/// Every cut of `Γ` and, for cuts of `D` edges whose new white and black
/// vertices end up in different components, every split of the remaining
/// components.
pub fn rhs_terms(d: usize, target: &Monomial) -> Result<Vec<RhsTerm>> {
    let g = target.graph(d);
    let p = g.p();
    let mut out = Vec::new();
    for k in 0..=d {
        for cut in enumerate_cuts(&g, k) {
            let gp = edge_cut(&g, &cut)?;
            let (source, _) = Monomial::of_graph(&gp);
            out.push(RhsTerm::Linear { k, source });
            if k != d {
                continue;
            }
            let (wl, bl) = gp.component_labels();
            let (cw, cb) = (wl[p], bl[p]);
            if cw == cb {
                continue;
            }
            let (comps, _) = gp.connected_components();
            let keys: Vec<GraphKey> = comps.iter().map(|c| c.canonical_form()).collect();
            let rest: Vec<usize> = (0..comps.len()).filter(|&i| i != cw && i != cb).collect();
            for mask in 0u32..(1 << rest.len()) {
                let mut left = vec![keys[cw].clone()];
                let mut right = vec![keys[cb].clone()];
                for (j, &i) in rest.iter().enumerate() {
                    if mask & (1 << j) != 0 {
                        left.push(keys[i].clone());
                    } else {
                        right.push(keys[i].clone());
                    }
                }
                out.push(RhsTerm::Quadratic { left: Monomial::from_keys(left), right: Monomial::from_keys(right) });
            }
        }
    }
    Ok(out)
}

/// Exact right-hand side of the flow for `target`.
pub fn flow_rhs(ec: &EffectiveCouplings, target: &Monomial, conv: FlowConvention) -> Result<Poly> {
    let d = ec.d;
    let q = Poly::constant(conv.quadratic_factor());
    let mut out = Poly::zero();
    for term in rhs_terms(d, target)? {
        match term {
            RhsTerm::Linear { k, source } => {
                if k == 0 && !conv.include_k0 {
                    continue;
                }
                out += &ec.get(&source).shift_n((d - k) as u32);
            }
            RhsTerm::Quadratic { left, right } => {
                out += &(&(&ec.get(&left) * &ec.get(&right)) * &q);
            }
        }
    }
    Ok(out)
}

/// Outcome of [`verify_flow`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlowReport {
    pub convention: FlowConvention,
    /// Nonzero residuals `dλ/dt − rhs` within the exact window.
    pub residuals: Vec<(Monomial, Poly)>,
    /// Graphs whose flow was checked.
    pub checked: usize,
    /// Graphs too large for any exact `t` coefficient of the derivative.
    pub unchecked: Vec<Monomial>,
    /// Right-hand-side pieces beyond the exact window, per graph.
    pub dropped: Vec<(Monomial, Poly)>,
}

impl FlowReport {
    pub fn is_zero(&self) -> bool {
        self.residuals.is_empty()
    }
}

/// All graphs (as monomials of connected keys, dipole included) with at
/// most `v_max` vertices.
pub fn all_graphs(d: usize, v_max: usize) -> Vec<Monomial> {
    let vars = enumerate_graphs(d, v_max / 2, true);
    monomials_up_to(&vars, v_max)
}

/// Compares `dλ_Γ/dt` with [`flow_rhs`] for every graph with at most
/// `v_max − 2` vertices, coefficient by coefficient in `t` up to the exact
/// window.
pub fn verify_flow(seed: &Seed, v_max: usize, conv: FlowConvention) -> Result<FlowReport> {
    let ec = effective_couplings(seed, v_max)?;
    verify_flow_with(&ec, conv)
}

pub fn verify_flow_with(ec: &EffectiveCouplings, conv: FlowConvention) -> Result<FlowReport> {
    let v_max = ec.v_max;
    let graphs = all_graphs(ec.d, v_max);
    let (targets, unchecked): (Vec<Monomial>, Vec<Monomial>) = graphs.into_iter().partition(|m| m.order() + 2 <= v_max);
    let results: Vec<Result<(Monomial, Poly, Poly)>> = targets
        .par_iter()
        .map(|m| {
            let window = ec.window(m.order()).unwrap() - 1;
            let lhs = ec.get(m).derivative_t().truncate_t(window);
            let rhs_full = flow_rhs(ec, m, conv)?;
            let rhs = rhs_full.truncate_t(window);
            let dropped = &rhs_full - &rhs;
            Ok((m.clone(), &lhs - &rhs, dropped))
        })
        .collect();
    let mut residuals = Vec::new();
    let mut dropped = Vec::new();
    for r in results {
        let (m, res, drop) = r?;
        if !res.is_zero() {
            residuals.push((m.clone(), res));
        }
        if !drop.is_zero() {
            dropped.push((m, drop));
        }
    }
    Ok(FlowReport { convention: conv, residuals, checked: targets.len(), unchecked, dropped })
}

/// Runs [`verify_flow`] under every convention in [`FlowConvention::all`].
pub fn search_conventions(seed: &Seed, v_max: usize) -> Result<Vec<(FlowConvention, bool)>> {
    let ec = effective_couplings(seed, v_max)?;
    FlowConvention::all()
        .into_iter()
        .map(|c| Ok((c, verify_flow_with(&ec, c)?.is_zero())))
        .collect()
}

// ---------------------------------------------------------------------------
// Numerical integration

/// Couplings at one value of `t`, on every graph with at most `v_max`
/// vertices.
#[derive(Clone, Debug, PartialEq)]
pub struct FlowState {
    pub t: f64,
    pub d: usize,
    pub n: f64,
    pub v_max: usize,
    pub values: BTreeMap<Monomial, f64>,
}

impl FlowState {
    /// The seed at `t = 0`, with every other graph up to `v_max` at zero.
    pub fn from_seed(seed: &Seed, n: f64, v_max: usize) -> Result<Self> {
        if seed.max_vertices() > v_max {
            return Err(Error::TruncationTooSmall { vertices: seed.max_vertices(), max: v_max });
        }
        let mut values: BTreeMap<Monomial, f64> = all_graphs(seed.d, v_max).into_iter().map(|m| (m, 0.0)).collect();
        for (m, v) in &seed.couplings {
            values.insert(m.clone(), v.to_f64().unwrap_or(f64::NAN));
        }
        Ok(FlowState { t: 0.0, d: seed.d, n, v_max, values })
    }

    pub fn get(&self, m: &Monomial) -> f64 {
        self.values.get(m).copied().unwrap_or(0.0)
    }
}

/// Precomputed right-hand-side structure on a fixed key set. Terms whose
/// source lies outside the key set are dropped and counted.
#[derive(Clone, Debug)]
pub struct FlowSystem {
    pub d: usize,
    pub n: f64,
    pub convention: FlowConvention,
    pub keys: Vec<Monomial>,
    terms: Vec<Vec<(f64, usize, Option<usize>)>>,
    pub dropped: usize,
}

impl FlowSystem {
    pub fn new(d: usize, n: f64, keys: Vec<Monomial>, conv: FlowConvention) -> Result<Self> {
        let index: BTreeMap<&Monomial, usize> = keys.iter().enumerate().map(|(i, k)| (k, i)).collect();
        let q = conv.quadratic_factor().to_f64().unwrap();
        let mut terms = Vec::with_capacity(keys.len());
        let mut dropped = 0;
        for key in &keys {
            let mut row = Vec::new();
            for term in rhs_terms(d, key)? {
                match term {
                    RhsTerm::Linear { k, source } => {
                        if k == 0 && !conv.include_k0 {
                            continue;
                        }
                        match index.get(&source) {
                            Some(&i) => row.push((n.powi((d - k) as i32), i, None)),
                            None => dropped += 1,
                        }
                    }
                    RhsTerm::Quadratic { left, right } => match (index.get(&left), index.get(&right)) {
                        (Some(&i), Some(&j)) => row.push((q, i, Some(j))),
                        _ => dropped += 1,
                    },
                }
            }
            terms.push(row);
        }
        Ok(FlowSystem { d, n, convention: conv, keys, terms, dropped })
    }

    pub fn for_state(state: &FlowState, conv: FlowConvention) -> Result<Self> {
        Self::new(state.d, state.n, state.values.keys().cloned().collect(), conv)
    }

    pub fn rhs(&self, y: &[f64]) -> Vec<f64> {
        self.terms
            .iter()
            .map(|row| {
                row.iter()
                    .map(|&(c, i, j)| match j {
                        None => c * y[i],
                        Some(j) => c * y[i] * y[j],
                    })
                    .sum()
            })
            .collect()
    }

    fn rk4_step(&self, y: &[f64], h: f64) -> Vec<f64> {
        let axpy = |a: &[f64], s: f64, b: &[f64]| a.iter().zip(b).map(|(x, z)| x + s * z).collect::<Vec<f64>>();
        let k1 = self.rhs(y);
        let k2 = self.rhs(&axpy(y, h / 2.0, &k1));
        let k3 = self.rhs(&axpy(y, h / 2.0, &k2));
        let k4 = self.rhs(&axpy(y, h, &k3));
        (0..y.len()).map(|i| y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])).collect()
    }
}

/// A fixed-step trajectory; `error` is set when integration stopped early
/// on a non-finite value, in which case the last state is the last good one.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub states: Vec<FlowState>,
    pub dropped_terms: usize,
    pub error: Option<Error>,
}

impl Trajectory {
    pub fn last(&self) -> &FlowState {
        self.states.last().expect("trajectory has an initial state")
    }
}

/// Classical RK4 with `steps` equal steps from `state.t` to `t_end`.
pub fn integrate_flow(state: &FlowState, t_end: f64, steps: usize, conv: FlowConvention) -> Result<Trajectory> {
    if steps == 0 {
        return Err(Error::Input("steps must be positive".into()));
    }
    let sys = FlowSystem::for_state(state, conv)?;
    let h = (t_end - state.t) / steps as f64;
    let mut y: Vec<f64> = sys.keys.iter().map(|k| state.get(k)).collect();
    let mut states = vec![state.clone()];
    for s in 1..=steps {
        let next = sys.rk4_step(&y, h);
        let t = state.t + h * s as f64;
        if let Some(i) = next.iter().position(|x| !x.is_finite()) {
            let err = Error::NonFinite { t, key: sys.keys[i].to_string() };
            return Ok(Trajectory { states, dropped_terms: sys.dropped, error: Some(err) });
        }
        y = next;
        let values = sys.keys.iter().cloned().zip(y.iter().copied()).collect();
        states.push(FlowState { t, d: state.d, n: state.n, v_max: state.v_max, values });
    }
    Ok(Trajectory { states, dropped_terms: sys.dropped, error: None })
}

/// `(e_h − e_{h/2}) / (e_{h/2} − e_{h/4})` for the final value of `key`
/// with `steps`, `2·steps` and `4·steps` steps; about 16 for a 4th-order
/// scheme.
pub fn richardson_ratio(state: &FlowState, t_end: f64, steps: usize, key: &Monomial, conv: FlowConvention) -> Result<f64> {
    let run = |s: usize| -> Result<f64> { Ok(integrate_flow(state, t_end, s, conv)?.last().get(key)) };
    let (a, b, c) = (run(steps)?, run(2 * steps)?, run(4 * steps)?);
    Ok((a - b) / (b - c))
}

// ---------------------------------------------------------------------------
// Matrix models

/// One multi-trace coupling of a `D = 2` model: `n_k` necklaces of length `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixModeRow {
    pub multiset: BTreeMap<usize, u32>,
    /// `Π k^{n_k} n_k!`.
    pub symmetry_factor: BigInt,
    /// Automorphisms of the disjoint union, counted on the graph.
    pub automorphisms: u64,
    pub value: Poly,
}

/// Cycle type of `σ₁⁻¹σ₂` for a `D = 2` graph: its necklace lengths.
pub fn necklace_lengths(g: &ColoredGraph) -> Vec<usize> {
    let s1inv = invert(&g.sigma()[0]);
    let perm: Vec<usize> = (0..g.p()).map(|w| s1inv[g.sigma()[1][w]]).collect();
    let mut l = cycle_lengths(&perm);
    l.sort_unstable();
    l
}

pub fn matrix_mode_factor(multiset: &BTreeMap<usize, u32>) -> BigInt {
    multiset
        .iter()
        .fold(BigInt::one(), |acc, (&k, &n)| acc * BigInt::from(k).pow(n) * factorial_big(n as usize))
}

/// The disjoint union of `n_k` necklaces of length `k`.
pub fn necklace_union(multiset: &BTreeMap<usize, u32>) -> ColoredGraph {
    let graphs: Vec<ColoredGraph> = multiset
        .iter()
        .flat_map(|(&k, &n)| std::iter::repeat(ColoredGraph::necklace(k)).take(n as usize))
        .collect();
    ColoredGraph::union_all(2, &graphs).unwrap()
}

/// Re-indexes `D = 2` couplings by necklace multisets.
pub fn matrix_mode_expand(ec: &EffectiveCouplings) -> Result<Vec<MatrixModeRow>> {
    if ec.d != 2 {
        return Err(Error::Input(format!("matrix-mode expansion needs D = 2, got {}", ec.d)));
    }
    Ok(ec
        .iter()
        .map(|(m, v)| {
            let g = m.graph(2);
            let mut multiset = BTreeMap::new();
            for k in necklace_lengths(&g) {
                *multiset.entry(k).or_insert(0) += 1;
            }
            MatrixModeRow {
                symmetry_factor: matrix_mode_factor(&multiset),
                automorphisms: g.automorphism_count(),
                multiset,
                value: v.clone(),
            }
        })
        .collect())
}

/// Every necklace multiset with `Σ k·n_k ≤ total`, including the empty one.
pub fn necklace_multisets(total: usize) -> Vec<BTreeMap<usize, u32>> {
    fn rec(k: usize, left: usize, cur: &mut BTreeMap<usize, u32>, out: &mut Vec<BTreeMap<usize, u32>>) {
        if k == 0 {
            out.push(cur.clone());
            return;
        }
        let mut n = 0;
        while n * k <= left {
            if n > 0 {
                cur.insert(k, n as u32);
            }
            rec(k - 1, left - n * k, cur, out);
            n += 1;
        }
        cur.remove(&k);
    }
    let mut out = Vec::new();
    rec(total, total, &mut BTreeMap::new(), &mut out);
    out
}
