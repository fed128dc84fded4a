//! Closed bipartite D-colored graphs.
//!
//! A graph with `p` white and `p` black vertices is stored as `D` permutations:
//! `sigma[c][w]` is the black vertex joined to white vertex `w` by the edge of
//! color `c`. Bipartiteness, valence `D` and properness of the coloring are
//! therefore structural. Vertex indices are 0-based internally and 1-based in
//! the JSON format.
//!
//! Isomorphism classes are identified by a [`GraphKey`]: the lexicographically
//! smallest concatenation `sigma[0] ‖ sigma[1] ‖ …` over all relabelings
//! `sigma[c] ↦ tau ∘ sigma[c] ∘ pi⁻¹`. Since `tau` can always turn `sigma[0]`
//! into the identity, the minimum is reached with `tau = pi ∘ sigma[0]⁻¹` and
//! the search reduces to simultaneous conjugation of
//! `rho[c] = sigma[0]⁻¹ ∘ sigma[c]` by `pi`.

use std::collections::BTreeSet;
use std::fmt;

use itertools::Itertools;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ColoredGraph {
    d: usize,
    sigma: Vec<Vec<usize>>,
    loops: usize,
}

/// A vertex of a colored graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Vertex {
    White(usize),
    Black(usize),
}

impl Vertex {
    pub fn index(self) -> usize {
        match self {
            Vertex::White(i) | Vertex::Black(i) => i,
        }
    }

    pub fn is_white(self) -> bool {
        matches!(self, Vertex::White(_))
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Vertex::White(i) => write!(f, "w{}", i + 1),
            Vertex::Black(i) => write!(f, "b{}", i + 1),
        }
    }
}

pub fn invert(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; perm.len()];
    for (i, &j) in perm.iter().enumerate() {
        inv[j] = i;
    }
    inv
}

pub fn cycle_count(perm: &[usize]) -> usize {
    let mut seen = vec![false; perm.len()];
    let mut cycles = 0;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        cycles += 1;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = perm[x];
        }
    }
    cycles
}

pub fn cycle_lengths(perm: &[usize]) -> Vec<usize> {
    let mut seen = vec![false; perm.len()];
    let mut lengths = Vec::new();
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = perm[x];
            len += 1;
        }
        lengths.push(len);
    }
    lengths
}

pub(crate) fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

fn check_permutation(color: usize, p: usize, perm: &[usize]) -> Result<()> {
    if perm.len() != p {
        return Err(Error::NotAPermutation {
            color: color + 1,
            p,
            reason: format!("length {}", perm.len()),
        });
    }
    let mut seen = vec![false; p];
    for &x in perm {
        if x >= p {
            return Err(Error::NotAPermutation {
                color: color + 1,
                p,
                reason: format!("image {} out of range", x + 1),
            });
        }
        if seen[x] {
            return Err(Error::NotAPermutation {
                color: color + 1,
                p,
                reason: format!("image {} repeated", x + 1),
            });
        }
        seen[x] = true;
    }
    Ok(())
}

impl ColoredGraph {
    /// Builds a validated graph from 0-based color maps.
    pub fn new(d: usize, sigma: Vec<Vec<usize>>, loops: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::ZeroColors);
        }
        if sigma.len() != d {
            return Err(Error::ColorCount { expected: d, got: sigma.len() });
        }
        let p = sigma[0].len();
        if p > 255 {
            return Err(Error::TooLarge(p));
        }
        for (c, perm) in sigma.iter().enumerate() {
            check_permutation(c, p, perm)?;
        }
        Ok(ColoredGraph { d, sigma, loops })
    }

    /// Builds a graph from 1-based color maps, as written in the JSON format.
    pub fn from_one_based(d: usize, p: usize, sigma: &[Vec<usize>], loops: usize) -> Result<Self> {
        if sigma.len() != d {
            return Err(Error::ColorCount { expected: d, got: sigma.len() });
        }
        let mut zero = Vec::with_capacity(d);
        for (c, perm) in sigma.iter().enumerate() {
            let mut row = Vec::with_capacity(perm.len());
            for &x in perm {
                if x == 0 || x > p {
                    return Err(Error::NotAPermutation {
                        color: c + 1,
                        p,
                        reason: format!("image {x} out of range"),
                    });
                }
                row.push(x - 1);
            }
            if row.len() != p {
                return Err(Error::NotAPermutation {
                    color: c + 1,
                    p,
                    reason: format!("length {}", row.len()),
                });
            }
            zero.push(row);
        }
        Self::new(d, zero, loops)
    }

    pub fn empty(d: usize) -> Self {
        ColoredGraph { d, sigma: vec![Vec::new(); d], loops: 0 }
    }

    pub fn dipole(d: usize) -> Self {
        ColoredGraph { d, sigma: vec![vec![0]; d], loops: 0 }
    }

    /// The D=2 necklace with `k` white vertices: `sigma = [id, cyclic shift]`.
    pub fn necklace(k: usize) -> Self {
        let id: Vec<usize> = (0..k).collect();
        let shift: Vec<usize> = (0..k).map(|i| (i + 1) % k).collect();
        ColoredGraph { d: 2, sigma: vec![id, shift], loops: 0 }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn p(&self) -> usize {
        self.sigma[0].len()
    }

    pub fn vertex_count(&self) -> usize {
        2 * self.p()
    }

    pub fn loops(&self) -> usize {
        self.loops
    }

    pub fn sigma(&self) -> &[Vec<usize>] {
        &self.sigma
    }

    pub fn black_neighbor(&self, white: usize, color: usize) -> usize {
        self.sigma[color][white]
    }

    pub fn white_neighbor(&self, black: usize, color: usize) -> usize {
        self.sigma[color].iter().position(|&b| b == black).expect("valid permutation")
    }

    pub fn with_loops(mut self, loops: usize) -> Self {
        self.loops = loops;
        self
    }

    pub fn without_loops(&self) -> Self {
        ColoredGraph { d: self.d, sigma: self.sigma.clone(), loops: 0 }
    }

    pub fn is_empty(&self) -> bool {
        self.p() == 0
    }

    pub fn is_dipole(&self) -> bool {
        self.p() == 1
    }

    pub(crate) fn from_parts_unchecked(d: usize, sigma: Vec<Vec<usize>>, loops: usize) -> Self {
        debug_assert!(Self::new(d, sigma.clone(), loops).is_ok());
        ColoredGraph { d, sigma, loops }
    }

    pub fn check_vertex(&self, v: Vertex) -> Result<()> {
        let p = self.p();
        match v {
            Vertex::White(i) if i >= p => Err(Error::VertexOutOfRange { kind: "white", index: i + 1, p }),
            Vertex::Black(i) if i >= p => Err(Error::VertexOutOfRange { kind: "black", index: i + 1, p }),
            _ => Ok(()),
        }
    }

    /// Disjoint union; whites and blacks of `other` are shifted by `self.p()`.
    pub fn disjoint_union(&self, other: &ColoredGraph) -> Result<ColoredGraph> {
        if self.d != other.d {
            return Err(Error::DimensionMismatch(self.d, other.d));
        }
        let shift = self.p();
        let sigma = self
            .sigma
            .iter()
            .zip(&other.sigma)
            .map(|(a, b)| a.iter().copied().chain(b.iter().map(|&x| x + shift)).collect())
            .collect();
        Ok(ColoredGraph { d: self.d, sigma, loops: self.loops + other.loops })
    }

    pub fn union_all<'a, I: IntoIterator<Item = &'a ColoredGraph>>(d: usize, graphs: I) -> Result<ColoredGraph> {
        graphs.into_iter().try_fold(ColoredGraph::empty(d), |acc, g| acc.disjoint_union(g))
    }

    /// Applies the relabeling `w ↦ pi[w]`, `b ↦ tau[b]`.
    pub fn relabel(&self, pi: &[usize], tau: &[usize]) -> ColoredGraph {
        let p = self.p();
        let sigma = self
            .sigma
            .iter()
            .map(|s| {
                let mut out = vec![0; p];
                for w in 0..p {
                    out[pi[w]] = tau[s[w]];
                }
                out
            })
            .collect();
        ColoredGraph { d: self.d, sigma, loops: self.loops }
    }

    fn rhos(&self) -> Vec<Vec<usize>> {
        let inv0 = invert(&self.sigma[0]);
        self.sigma[1..]
            .iter()
            .map(|s| s.iter().map(|&b| inv0[b]).collect())
            .collect()
    }

    /// Canonical key of the isomorphism class (loops are ignored).
    pub fn canonical_form(&self) -> GraphKey {
        let search = CanonicalSearch::run(self, None);
        GraphKey(self.encode(&[], &search.best))
    }

    /// The canonical representative: the graph decoded from its key.
    pub fn canonical_graph(&self) -> ColoredGraph {
        self.canonical_form().decode()
    }

    /// `|{(pi, tau) : tau ∘ sigma[c] ∘ pi⁻¹ = sigma[c] for all c}|`.
    pub fn automorphism_count(&self) -> u64 {
        CanonicalSearch::run(self, None).count
    }

    /// Number of automorphisms fixing the given vertex.
    pub fn stabilizer_count(&self, v: Vertex) -> u64 {
        let white = self.anchor_white(v);
        CanonicalSearch::run(self, Some(white)).count
    }

    fn anchor_white(&self, v: Vertex) -> usize {
        match v {
            Vertex::White(w) => w,
            Vertex::Black(b) => invert(&self.sigma[0])[b],
        }
    }

    fn encode(&self, prefix: &[u8], rows: &[usize]) -> Vec<u8> {
        let p = self.p();
        let mut bytes = Vec::with_capacity(2 + prefix.len() + self.d * p);
        bytes.push(self.d as u8);
        bytes.push(p as u8);
        bytes.extend_from_slice(prefix);
        bytes.extend((0..p).map(|i| i as u8));
        bytes.extend(rows.iter().map(|&x| x as u8));
        bytes
    }

    /// Connected components, each re-indexed, ordered by smallest white
    /// vertex; vertexless loops are returned separately.
    pub fn connected_components(&self) -> (Vec<ColoredGraph>, usize) {
        let p = self.p();
        let mut parent: Vec<usize> = (0..2 * p).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for s in &self.sigma {
            for (w, &b) in s.iter().enumerate() {
                let (a, c) = (find(&mut parent, w), find(&mut parent, p + b));
                if a != c {
                    parent[a] = c;
                }
            }
        }
        let mut roots: Vec<usize> = Vec::new();
        let mut comp_of = vec![0; 2 * p];
        for x in 0..2 * p {
            let r = find(&mut parent, x);
            let idx = match roots.iter().position(|&q| q == r) {
                Some(i) => i,
                None => {
                    roots.push(r);
                    roots.len() - 1
                }
            };
            comp_of[x] = idx;
        }
        let mut comps = Vec::with_capacity(roots.len());
        for k in 0..roots.len() {
            let whites: Vec<usize> = (0..p).filter(|&w| comp_of[w] == k).collect();
            let blacks: Vec<usize> = (0..p).filter(|&b| comp_of[p + b] == k).collect();
            let mut black_pos = vec![usize::MAX; p];
            for (i, &b) in blacks.iter().enumerate() {
                black_pos[b] = i;
            }
            let sigma = self
                .sigma
                .iter()
                .map(|s| whites.iter().map(|&w| black_pos[s[w]]).collect())
                .collect();
            comps.push(ColoredGraph { d: self.d, sigma, loops: 0 });
        }
        (comps, self.loops)
    }

    pub fn is_connected(&self) -> bool {
        self.connected_components().0.len() == 1
    }

    /// Component index of every white and every black vertex, in the order
    /// used by [`ColoredGraph::connected_components`].
    pub fn component_labels(&self) -> (Vec<usize>, Vec<usize>) {
        let p = self.p();
        let mut white = vec![usize::MAX; p];
        let mut black = vec![usize::MAX; p];
        let mut next = 0;
        for start in 0..p {
            if white[start] != usize::MAX {
                continue;
            }
            let mut stack = vec![Vertex::White(start)];
            white[start] = next;
            while let Some(v) = stack.pop() {
                match v {
                    Vertex::White(w) => {
                        for s in &self.sigma {
                            if black[s[w]] == usize::MAX {
                                black[s[w]] = next;
                                stack.push(Vertex::Black(s[w]));
                            }
                        }
                    }
                    Vertex::Black(b) => {
                        for s in &self.sigma {
                            let w = s.iter().position(|&x| x == b).unwrap();
                            if white[w] == usize::MAX {
                                white[w] = next;
                                stack.push(Vertex::White(w));
                            }
                        }
                    }
                }
            }
            next += 1;
        }
        (white, black)
    }
}

/// Branch-and-bound search for the lexicographically smallest conjugate of
/// the tuple `rho`, counting the labelings that reach it.
struct CanonicalSearch {
    rhos: Vec<Vec<usize>>,
    p: usize,
    best: Vec<usize>,
    have_best: bool,
    count: u64,
    version: u64,
}

#[derive(Clone)]
struct LabelState {
    label: Vec<usize>,
    inv: Vec<usize>,
    counter: usize,
    cur: Vec<usize>,
    strictly_better: bool,
    /// Incumbent version `strictly_better` refers to.
    version: u64,
}

const UNSET: usize = usize::MAX;

impl CanonicalSearch {
    fn run(g: &ColoredGraph, fixed_white: Option<usize>) -> Self {
        let p = g.p();
        let mut search = CanonicalSearch {
            rhos: g.rhos(),
            p,
            best: Vec::new(),
            have_best: false,
            count: 0,
            version: 0,
        };
        let mut state = LabelState {
            label: vec![UNSET; p],
            inv: vec![UNSET; p],
            counter: 0,
            cur: Vec::with_capacity((g.d - 1) * p),
            strictly_better: false,
            version: 0,
        };
        if let Some(w) = fixed_white {
            state.label[w] = 0;
            state.inv[0] = w;
            state.counter = 1;
        }
        search.dfs(state);
        search
    }

    /// Compares `value` at the current position against the incumbent.
    /// Returns false when the branch must be pruned.
    fn admit(&self, state: &mut LabelState, value: usize) -> bool {
        let pos = state.cur.len();
        if self.have_best && state.version != self.version {
            state.version = self.version;
            match state.cur.as_slice().cmp(&self.best[..pos]) {
                std::cmp::Ordering::Greater => return false,
                std::cmp::Ordering::Less => state.strictly_better = true,
                std::cmp::Ordering::Equal => state.strictly_better = false,
            }
        }
        if self.have_best && !state.strictly_better {
            match value.cmp(&self.best[pos]) {
                std::cmp::Ordering::Greater => return false,
                std::cmp::Ordering::Less => state.strictly_better = true,
                std::cmp::Ordering::Equal => {}
            }
        }
        state.cur.push(value);
        true
    }

    fn dfs(&mut self, mut state: LabelState) {
        let p = self.p;
        let total = self.rhos.len() * p;
        while state.cur.len() < total {
            let pos = state.cur.len();
            let (row, i) = (pos / p, pos % p);
            let rho = self.rhos[row].clone();
            if state.inv[i] == UNSET {
                debug_assert_eq!(state.counter, i);
                let value_of = |x: usize, st: &LabelState| {
                    let y = rho[x];
                    if y == x {
                        i
                    } else if st.label[y] != UNSET {
                        st.label[y]
                    } else {
                        i + 1
                    }
                };
                let candidates: Vec<usize> = (0..p).filter(|&x| state.label[x] == UNSET).collect();
                let min = candidates.iter().map(|&x| value_of(x, &state)).min().unwrap();
                for &x in candidates.iter().filter(|&&x| value_of(x, &state) == min) {
                    let mut next = state.clone();
                    next.label[x] = i;
                    next.inv[i] = x;
                    next.counter = i + 1;
                    let y = rho[x];
                    if next.label[y] == UNSET {
                        next.label[y] = next.counter;
                        next.inv[next.counter] = y;
                        next.counter += 1;
                    }
                    if self.admit(&mut next, min) {
                        self.dfs(next);
                    }
                }
                return;
            }
            let x = state.inv[i];
            let y = rho[x];
            if state.label[y] == UNSET {
                state.label[y] = state.counter;
                state.inv[state.counter] = y;
                state.counter += 1;
            }
            let value = state.label[y];
            if !self.admit(&mut state, value) {
                return;
            }
        }
        // Only reachable with unlabeled vertices when D = 1.
        let free = p - state.counter;
        let multiplicity = factorial(free);
        if self.have_best && state.version != self.version {
            state.version = self.version;
            match state.cur.cmp(&self.best) {
                std::cmp::Ordering::Greater => return,
                std::cmp::Ordering::Less => state.strictly_better = true,
                std::cmp::Ordering::Equal => state.strictly_better = false,
            }
        }
        if !self.have_best || state.strictly_better {
            self.version += 1;
            self.best = state.cur;
            self.have_best = true;
            self.count = multiplicity;
        } else {
            self.count += multiplicity;
        }
    }
}

/// Canonical identifier of an isomorphism class of colored graphs.
///
/// Layout: `[D, p, sigma[0] (identity), sigma[1], …]`, one byte per entry.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GraphKey(Vec<u8>);

impl GraphKey {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn d(&self) -> usize {
        self.0[0] as usize
    }

    pub fn p(&self) -> usize {
        self.0[1] as usize
    }

    pub fn vertex_count(&self) -> usize {
        2 * self.p()
    }

    pub fn to_hex(&self) -> String {
        hex::encode(&self.0)
    }

    pub fn from_hex(s: &str) -> Result<Self> {
        let bytes = hex::decode(s).map_err(|e| Error::InvalidKey(format!("{s}: {e}")))?;
        Self::from_bytes(bytes)
    }

    pub fn from_bytes(bytes: Vec<u8>) -> Result<Self> {
        if bytes.len() < 2 {
            return Err(Error::InvalidKey("too short".into()));
        }
        let (d, p) = (bytes[0] as usize, bytes[1] as usize);
        if bytes.len() != 2 + d * p {
            return Err(Error::InvalidKey(format!("length {} for D={d}, p={p}", bytes.len())));
        }
        let sigma = (0..d)
            .map(|c| bytes[2 + c * p..2 + (c + 1) * p].iter().map(|&x| x as usize).collect())
            .collect();
        let g = ColoredGraph::new(d, sigma, 0)?;
        let key = GraphKey(bytes);
        if g.canonical_form() != key {
            return Err(Error::InvalidKey("not in canonical form".into()));
        }
        Ok(key)
    }

    /// The canonical representative graph.
    pub fn decode(&self) -> ColoredGraph {
        let (d, p) = (self.d(), self.p());
        let sigma = (0..d)
            .map(|c| self.0[2 + c * p..2 + (c + 1) * p].iter().map(|&x| x as usize).collect())
            .collect();
        ColoredGraph::from_parts_unchecked(d, sigma, 0)
    }
}

impl fmt::Display for GraphKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

/// A graph together with a distinguished vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkedGraph {
    pub graph: ColoredGraph,
    pub vertex: Vertex,
}

impl MarkedGraph {
    pub fn new(graph: ColoredGraph, vertex: Vertex) -> Result<Self> {
        graph.check_vertex(vertex)?;
        Ok(MarkedGraph { graph, vertex })
    }

    /// Canonical key of the orbit of the marked vertex. In the canonical
    /// labeling the marked vertex is white 0 or black 0.
    pub fn canonical_form(&self) -> MarkedKey {
        let anchor = self.graph.anchor_white(self.vertex);
        let search = CanonicalSearch::run(&self.graph, Some(anchor));
        let tag = if self.vertex.is_white() { 0 } else { 1 };
        MarkedKey(self.graph.encode(&[tag], &search.best))
    }
}

/// Canonical identifier of a (graph, vertex orbit) pair.
///
/// Layout: `[D, p, color (0 white, 1 black), sigma rows…]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MarkedKey(Vec<u8>);

impl MarkedKey {
    pub fn d(&self) -> usize {
        self.0[0] as usize
    }

    pub fn p(&self) -> usize {
        self.0[1] as usize
    }

    pub fn is_white(&self) -> bool {
        self.0[2] == 0
    }

    pub fn to_hex(&self) -> String {
        hex::encode(&self.0)
    }

    pub fn from_hex(s: &str) -> Result<Self> {
        let bytes = hex::decode(s).map_err(|e| Error::InvalidKey(format!("{s}: {e}")))?;
        if bytes.len() < 3 {
            return Err(Error::InvalidKey("too short".into()));
        }
        let (d, p) = (bytes[0] as usize, bytes[1] as usize);
        if bytes.len() != 3 + d * p || bytes[2] > 1 || p == 0 {
            return Err(Error::InvalidKey(format!("bad marked key {s}")));
        }
        let sigma = (0..d)
            .map(|c| bytes[3 + c * p..3 + (c + 1) * p].iter().map(|&x| x as usize).collect())
            .collect();
        let g = ColoredGraph::new(d, sigma, 0)?;
        let vertex = if bytes[2] == 0 { Vertex::White(0) } else { Vertex::Black(0) };
        let key = MarkedKey(bytes);
        if (MarkedGraph { graph: g, vertex }).canonical_form() != key {
            return Err(Error::InvalidKey("not in canonical form".into()));
        }
        Ok(key)
    }

    pub fn decode(&self) -> MarkedGraph {
        let (d, p) = (self.d(), self.p());
        let sigma = (0..d)
            .map(|c| self.0[3 + c * p..3 + (c + 1) * p].iter().map(|&x| x as usize).collect())
            .collect();
        let vertex = if self.is_white() { Vertex::White(0) } else { Vertex::Black(0) };
        MarkedGraph { graph: ColoredGraph::from_parts_unchecked(d, sigma, 0), vertex }
    }

    pub fn graph_key(&self) -> GraphKey {
        self.decode().graph.canonical_form()
    }
}

impl fmt::Display for MarkedKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

/// Reference canonicalization by scanning all of `S_p × S_p`. Returns the
/// minimal encoding and the automorphism count. Only usable for small `p`.
pub fn canonical_form_exhaustive(g: &ColoredGraph) -> (GraphKey, u64) {
    let p = g.p();
    let mut best: Option<Vec<usize>> = None;
    let mut count = 0;
    for pi in (0..p).permutations(p) {
        for tau in (0..p).permutations(p) {
            let h = g.relabel(&pi, &tau);
            if h.sigma == g.sigma {
                count += 1;
            }
            let flat: Vec<usize> = h.sigma.concat();
            if best.as_ref().map_or(true, |b| flat < *b) {
                best = Some(flat);
            }
        }
    }
    let flat = best.unwrap_or_default();
    let mut bytes = vec![g.d as u8, p as u8];
    bytes.extend(flat.iter().map(|&x| x as u8));
    (GraphKey(bytes), count)
}

fn partitions(n: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if n == 0 {
        out.push(prefix.clone());
        return;
    }
    for part in (1..=n.min(max)).rev() {
        prefix.push(part);
        partitions(n - part, part, prefix, out);
        prefix.pop();
    }
}

fn cycle_type_representative(parts: &[usize]) -> Vec<usize> {
    let mut perm = Vec::new();
    let mut start = 0;
    for &len in parts {
        for i in 0..len {
            perm.push(start + (i + 1) % len);
        }
        start += len;
    }
    perm
}

/// All isomorphism classes with `1 ≤ p ≤ p_max`, sorted by `(p, key)`.
pub fn enumerate_graphs(d: usize, p_max: usize, connected_only: bool) -> Vec<GraphKey> {
    let mut out = Vec::new();
    for p in 1..=p_max {
        out.extend(enumerate_graphs_of_size(d, p, connected_only));
    }
    out
}

/// Classes with exactly `p` white vertices, sorted by key.
pub fn enumerate_graphs_of_size(d: usize, p: usize, connected_only: bool) -> Vec<GraphKey> {
    assert!(d >= 1);
    let id: Vec<usize> = (0..p).collect();
    let mut keys = BTreeSet::new();
    if d == 1 {
        let g = ColoredGraph::from_parts_unchecked(1, vec![id], 0);
        if !connected_only || g.is_connected() {
            keys.insert(g.canonical_form());
        }
        return keys.into_iter().collect();
    }
    let mut parts = Vec::new();
    partitions(p, p, &mut Vec::new(), &mut parts);
    let all: Vec<Vec<usize>> = (0..p).permutations(p).collect();
    for part in &parts {
        let first = cycle_type_representative(part);
        let rest = std::iter::repeat(all.iter()).take(d - 2).multi_cartesian_product();
        let mut visit = |others: Vec<&Vec<usize>>| {
            let mut sigma = vec![id.clone(), first.clone()];
            sigma.extend(others.into_iter().cloned());
            let g = ColoredGraph::from_parts_unchecked(d, sigma, 0);
            if !connected_only || g.is_connected() {
                keys.insert(g.canonical_form());
            }
        };
        if d == 2 {
            visit(Vec::new());
        } else {
            for others in rest {
                visit(others);
            }
        }
    }
    keys.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eq1_graph() -> ColoredGraph {
        ColoredGraph::from_one_based(3, 3, &[vec![1, 2, 3], vec![3, 1, 2], vec![2, 3, 1]], 0).unwrap()
    }

    #[test]
    fn rejects_out_of_range_image() {
        let err = ColoredGraph::from_one_based(2, 2, &[vec![1, 2], vec![1, 3]], 0).unwrap_err();
        assert!(matches!(err, Error::NotAPermutation { color: 2, .. }));
    }

    #[test]
    fn rejects_repeated_image() {
        let err = ColoredGraph::new(2, vec![vec![0, 1], vec![1, 1]], 0).unwrap_err();
        assert!(matches!(err, Error::NotAPermutation { color: 2, .. }));
    }

    #[test]
    fn dipole_key_and_symmetry() {
        let dip = ColoredGraph::dipole(3);
        assert_eq!(dip.canonical_form().as_bytes(), &[3, 1, 0, 0, 0]);
        assert_eq!(dip.automorphism_count(), 1);
    }

    #[test]
    fn eq1_graph_symmetry_factor() {
        let g = eq1_graph();
        assert_eq!(g.automorphism_count(), 3);
        assert_eq!(canonical_form_exhaustive(&g).1, 3);
    }

    #[test]
    fn shifted_labels_share_key() {
        let g = eq1_graph();
        let h = g.relabel(&[1, 2, 0], &[0, 1, 2]);
        assert_eq!(g.canonical_form(), h.canonical_form());
    }

    #[test]
    fn necklace_symmetry() {
        for k in 1..=5 {
            assert_eq!(ColoredGraph::necklace(k).automorphism_count(), k as u64);
            assert_eq!(canonical_form_exhaustive(&ColoredGraph::necklace(k)).1, k as u64);
        }
    }

    #[test]
    fn components_of_two_dipoles() {
        let g = ColoredGraph::new(3, vec![vec![0, 1]; 3], 0).unwrap();
        let (comps, loops) = g.connected_components();
        assert_eq!(comps, vec![ColoredGraph::dipole(3), ColoredGraph::dipole(3)]);
        assert_eq!(loops, 0);
    }

    #[test]
    fn empty_graph_with_loops() {
        let g = ColoredGraph::empty(3).with_loops(3);
        let (comps, loops) = g.connected_components();
        assert!(comps.is_empty());
        assert_eq!(loops, 3);
        assert_eq!(g.automorphism_count(), 1);
    }

    #[test]
    fn enumeration_small_cases() {
        assert_eq!(enumerate_graphs(3, 1, false), vec![ColoredGraph::dipole(3).canonical_form()]);
        let necklaces = enumerate_graphs(2, 3, true);
        assert_eq!(necklaces.len(), 3);
        for (k, key) in necklaces.iter().enumerate() {
            assert_eq!(*key, ColoredGraph::necklace(k + 1).canonical_form());
        }
    }

    #[test]
    fn key_hex_round_trip() {
        let key = eq1_graph().canonical_form();
        assert_eq!(GraphKey::from_hex(&key.to_hex()).unwrap(), key);
        assert!(GraphKey::from_hex("030100").is_err());
    }

    #[test]
    fn marked_orbits() {
        let g = eq1_graph();
        // All three black vertices lie in one orbit of the order-3 group.
        let keys: BTreeSet<MarkedKey> = (0..3)
            .map(|b| MarkedGraph::new(g.clone(), Vertex::Black(b)).unwrap().canonical_form())
            .collect();
        assert_eq!(keys.len(), 1);
        let key = keys.into_iter().next().unwrap();
        assert_eq!(MarkedKey::from_hex(&key.to_hex()).unwrap(), key);
        assert_eq!(key.decode().vertex, Vertex::Black(0));
    }

    #[test]
    fn d1_graphs() {
        let g = ColoredGraph::new(1, vec![vec![1, 0, 2]], 0).unwrap();
        assert_eq!(g.automorphism_count(), 6);
        assert_eq!(canonical_form_exhaustive(&g), (g.canonical_form(), 6));
        assert_eq!(enumerate_graphs(1, 3, true).len(), 1);
    }
}
