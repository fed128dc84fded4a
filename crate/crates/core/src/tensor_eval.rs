//! Explicit evaluation of trace invariants and brute-force Gaussian moments.
//!
//! Everything here is exact integer arithmetic and deliberately naive: these
//! routines are the ground truth that the symbolic modules are checked
//! against. The covariance is `⟨M_I M̄_J⟩ = δ_IJ` with `⟨1⟩ = 1`.

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::colored_graph::{cycle_count, invert, ColoredGraph};
use crate::contraction::{contract_pairs, glue_and_contract};
use crate::error::{Error, Result};

/// A rank-`D` tensor with `N^D` exact integer entries, row-major in
/// `(i_1, …, i_D)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenseTensor {
    n: usize,
    d: usize,
    entries: Vec<i64>,
}

impl DenseTensor {
    pub fn new(n: usize, d: usize, entries: Vec<i64>) -> Result<Self> {
        if entries.len() != n.pow(d as u32) {
            return Err(Error::DimensionMismatch(entries.len(), n.pow(d as u32)));
        }
        Ok(DenseTensor { n, d, entries })
    }

    pub fn filled(n: usize, d: usize, value: i64) -> Self {
        DenseTensor { n, d, entries: vec![value; n.pow(d as u32)] }
    }

    pub fn from_fn(n: usize, d: usize, mut f: impl FnMut(&[usize]) -> i64) -> Self {
        let entries = (0..n.pow(d as u32))
            .map(|flat| {
                let idx = unflatten(flat, n, d);
                f(&idx)
            })
            .collect();
        DenseTensor { n, d, entries }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn get(&self, idx: &[usize]) -> i64 {
        self.entries[flatten(idx, self.n)]
    }

    pub fn scaled(&self, s: i64) -> Self {
        DenseTensor { n: self.n, d: self.d, entries: self.entries.iter().map(|x| x * s).collect() }
    }
}

fn flatten(idx: &[usize], n: usize) -> usize {
    idx.iter().fold(0, |acc, &i| acc * n + i)
}

fn unflatten(mut flat: usize, n: usize, d: usize) -> Vec<usize> {
    let mut idx = vec![0; d];
    for slot in (0..d).rev() {
        idx[slot] = flat % n;
        flat /= n;
    }
    idx
}

/// Iterates over all assignments of an index in `0..n` to each of the
/// `p·D` edges of `g`, calling `f` with the index tuple of every white and
/// every black vertex.
fn for_each_edge_assignment(g: &ColoredGraph, n: usize, mut f: impl FnMut(&[usize], &[usize])) {
    let (p, d) = (g.p(), g.d());
    let edges = p * d;
    let inverse: Vec<Vec<usize>> = g.sigma().iter().map(|s| invert(s)).collect();
    let mut white_codes = vec![0usize; p];
    let mut black_codes = vec![0usize; p];
    let total = n.pow(edges as u32);
    let mut assignment = vec![0usize; edges];
    for _ in 0..total {
        // edge (w, c) has slot w*d + c
        for w in 0..p {
            white_codes[w] = (0..d).fold(0, |acc, c| acc * n + assignment[w * d + c]);
        }
        for b in 0..p {
            black_codes[b] = (0..d).fold(0, |acc, c| acc * n + assignment[inverse[c][b] * d + c]);
        }
        f(&white_codes, &black_codes);
        for slot in assignment.iter_mut() {
            *slot += 1;
            if *slot < n {
                break;
            }
            *slot = 0;
        }
    }
}

/// `Tr_Γ(M, M̄)`: white vertices carry `M`, black vertices `M̄`, and the
/// index of slot `c` is shared along the edge of color `c`. Each loop carried
/// by `g` contributes a factor `N`.
pub fn trace_invariant(g: &ColoredGraph, m: &DenseTensor, mbar: &DenseTensor) -> Result<BigInt> {
    if m.d != g.d() || mbar.d != g.d() {
        return Err(Error::DimensionMismatch(g.d(), m.d.min(mbar.d)));
    }
    if m.n != mbar.n {
        return Err(Error::DimensionMismatch(m.n, mbar.n));
    }
    let mut total = BigInt::zero();
    for_each_edge_assignment(g, m.n, |whites, blacks| {
        let mut term = BigInt::one();
        for &code in whites {
            term *= m.entries[code];
        }
        for &code in blacks {
            term *= mbar.entries[code];
        }
        total += term;
    });
    Ok(total * BigInt::from(m.n).pow(g.loops() as u32))
}

/// Number of faces of a complete Wick pairing: for each color, the cycles of
/// `w ↦ φ⁻¹(sigma_c(w))`, with `φ(w)` the black vertex paired to `w`.
pub fn face_count(g: &ColoredGraph, pairing: &[usize]) -> usize {
    let inv = invert(pairing);
    g.sigma()
        .iter()
        .map(|s| {
            let perm: Vec<usize> = s.iter().map(|&b| inv[b]).collect();
            cycle_count(&perm)
        })
        .sum()
}

/// `⟨Π Tr_Γ⟩` by summing `N^{faces}` over all `P!` white↔black pairings of the
/// disjoint union. Loops carried by the inputs contribute `N` each.
pub fn gaussian_moment_bruteforce(graphs: &[ColoredGraph], n: u64) -> Result<BigInt> {
    let Some(first) = graphs.first() else {
        return Ok(BigInt::one());
    };
    let union = ColoredGraph::union_all(first.d(), graphs)?;
    let p = union.p();
    let base = BigInt::from(n);
    let mut total = BigInt::zero();
    for pairing in (0..p).permutations(p) {
        total += base.pow(face_count(&union, &pairing) as u32);
    }
    Ok(total * base.pow(union.loops() as u32))
}

/// `⟨Π Tr_Γ⟩` by expanding every invariant into index monomials and using
/// `⟨Π_a z_a^{n_a} z̄_a^{m_a}⟩ = Π_a δ_{n_a m_a} n_a!` for independent standard
/// complex Gaussians. Shares no code with the pairing enumeration.
pub fn gaussian_moment_explicit(graphs: &[ColoredGraph], n: u64) -> Result<BigInt> {
    let Some(first) = graphs.first() else {
        return Ok(BigInt::one());
    };
    let union = ColoredGraph::union_all(first.d(), graphs)?;
    let mut total = BigInt::zero();
    let factorials: Vec<u64> = (0..=union.p()).scan(1u64, |acc, k| {
        if k > 0 {
            *acc *= k as u64;
        }
        Some(*acc)
    }).collect();
    let mut ws = Vec::new();
    let mut bs = Vec::new();
    let mut count: u64 = 0;
    for_each_edge_assignment(&union, n as usize, |whites, blacks| {
        ws.clear();
        ws.extend_from_slice(whites);
        bs.clear();
        bs.extend_from_slice(blacks);
        ws.sort_unstable();
        bs.sort_unstable();
        if ws != bs {
            return;
        }
        let mut weight = 1u64;
        let mut run = 1usize;
        for i in 1..=ws.len() {
            if i < ws.len() && ws[i] == ws[i - 1] {
                run += 1;
            } else {
                weight *= factorials[run];
                run = 1;
            }
        }
        count += weight;
    });
    total += count;
    Ok(total * BigInt::from(n).pow(union.loops() as u32))
}

/// Terms of the Gaussian expectation of the total-derivative identity behind
/// a Schwinger-Dyson constraint, with fixed insertions and no couplings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SdNumeric {
    /// `Σ_v N^{loops} ⟨Tr_{Γ₀/v̄₀v} Π Tr_H⟩` (divergence of the variation).
    pub jacobian: BigInt,
    /// `⟨Tr_{Γ₀} Π Tr_H⟩` (variation of the Gaussian weight, enters with −).
    pub measure: BigInt,
    /// `Σ_j Σ_{v ∈ H_j} ⟨Tr_{(Γ₀H_j)/v̄₀v} Π_{i≠j} Tr_{H_i}⟩`.
    pub insertion: BigInt,
    /// `jacobian − measure + insertion`; zero for a correct identity.
    pub residual: BigInt,
}

/// Evaluates the change of variables `M → M + ε δM`, with `δM` equal to
/// `Tr_{Γ₀}` stripped of black vertex `vbar0`, inside
/// `⟨Π Tr_{H_j}⟩`. Every term is a brute-force Wick moment.
pub fn sd_residual_numeric(g0: &ColoredGraph, vbar0: usize, insertions: &[ColoredGraph], n: u64) -> Result<SdNumeric> {
    g0.check_vertex(crate::Vertex::Black(vbar0))?;
    let d = g0.d();
    let nn = BigInt::from(n);
    let mut jacobian = BigInt::zero();
    for v in 0..g0.p() {
        let s = contract_pairs(g0, &[(v, vbar0)])?;
        let mut factors = vec![s.graph];
        factors.extend(insertions.iter().cloned());
        jacobian += nn.pow(s.new_loops as u32) * gaussian_moment_bruteforce(&factors, n)?;
    }
    let mut with_base = vec![g0.clone()];
    with_base.extend(insertions.iter().cloned());
    let measure = gaussian_moment_bruteforce(&with_base, n)?;
    let mut insertion = BigInt::zero();
    for (j, h) in insertions.iter().enumerate() {
        if h.d() != d {
            return Err(Error::DimensionMismatch(d, h.d()));
        }
        for v in 0..h.p() {
            let glued = glue_and_contract(g0, vbar0, h, v)?.with_loops(h.loops());
            let mut factors = vec![glued];
            factors.extend(insertions.iter().enumerate().filter(|(i, _)| *i != j).map(|(_, x)| x.clone()));
            insertion += gaussian_moment_bruteforce(&factors, n)?;
        }
    }
    let residual = &jacobian - &measure + &insertion;
    Ok(SdNumeric { jacobian, measure, insertion, residual })
}
