//! Graph surgery: contraction of a white/black pair, gluing two graphs
//! through a contraction, and edge cuts.

use crate::colored_graph::{invert, ColoredGraph, Vertex};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContractionResult {
    /// The contracted graph, carrying no loops of its own.
    pub graph: ColoredGraph,
    /// Vertexless loops created by the contraction.
    pub new_loops: usize,
}

/// Contraction of several disjoint white/black pairs, with index maps from
/// the surviving vertices of the input to those of the output.
#[derive(Clone, Debug)]
pub struct Surgery {
    pub graph: ColoredGraph,
    pub new_loops: usize,
    pub white_map: Vec<Option<usize>>,
    pub black_map: Vec<Option<usize>>,
}

impl Surgery {
    pub fn map_vertex(&self, v: Vertex) -> Option<Vertex> {
        match v {
            Vertex::White(w) => self.white_map[w].map(Vertex::White),
            Vertex::Black(b) => self.black_map[b].map(Vertex::Black),
        }
    }
}

/// Contracts every `(white, black)` pair in turn. For each color, a pair
/// joined by that color closes into a loop; otherwise the white neighbor of
/// the black vertex is rewired to the black neighbor of the white vertex.
/// The result does not depend on the order of the pairs.
pub fn contract_pairs(g: &ColoredGraph, pairs: &[(usize, usize)]) -> Result<Surgery> {
    let p = g.p();
    let d = g.d();
    let mut sigma: Vec<Vec<usize>> = g.sigma().to_vec();
    let mut inverse: Vec<Vec<usize>> = sigma.iter().map(|s| invert(s)).collect();
    let mut white_gone = vec![false; p];
    let mut black_gone = vec![false; p];
    let mut loops = 0;
    for &(w, b) in pairs {
        g.check_vertex(Vertex::White(w))?;
        g.check_vertex(Vertex::Black(b))?;
        if white_gone[w] || black_gone[b] {
            return Err(Error::Input(format!("vertex contracted twice: w{} b{}", w + 1, b + 1)));
        }
        for c in 0..d {
            let bw = sigma[c][w];
            if bw == b {
                loops += 1;
            } else {
                let wb = inverse[c][b];
                sigma[c][wb] = bw;
                inverse[c][bw] = wb;
            }
        }
        white_gone[w] = true;
        black_gone[b] = true;
    }
    let compress = |gone: &[bool]| {
        let mut next = 0;
        gone.iter()
            .map(|&x| {
                if x {
                    None
                } else {
                    next += 1;
                    Some(next - 1)
                }
            })
            .collect::<Vec<_>>()
    };
    let white_map = compress(&white_gone);
    let black_map = compress(&black_gone);
    let new_sigma = sigma
        .iter()
        .map(|s| {
            (0..p)
                .filter(|&w| !white_gone[w])
                .map(|w| black_map[s[w]].expect("surviving white points to surviving black"))
                .collect()
        })
        .collect();
    let graph = ColoredGraph::new(d, new_sigma, 0)?;
    Ok(Surgery { graph, new_loops: loops, white_map, black_map })
}

/// `Γ/v̄v`: removes white `v` and black `vbar` and reattaches the freed
/// half-edges color by color.
pub fn contract(g: &ColoredGraph, v: usize, vbar: usize) -> Result<ContractionResult> {
    let s = contract_pairs(g, &[(v, vbar)])?;
    Ok(ContractionResult { graph: s.graph, new_loops: s.new_loops })
}

/// Disjoint union `g0 ⊔ g` followed by contraction of black `vbar0` of `g0`
/// with white `v` of `g`. Indices of `g` are shifted by `g0.p()` in the union.
pub fn glue_tracked(g0: &ColoredGraph, vbar0: usize, g: &ColoredGraph, v: usize) -> Result<Surgery> {
    if g0.d() != g.d() {
        return Err(Error::DimensionMismatch(g0.d(), g.d()));
    }
    g0.check_vertex(Vertex::Black(vbar0))?;
    g.check_vertex(Vertex::White(v))?;
    let union = g0.without_loops().disjoint_union(&g.without_loops())?;
    let s = contract_pairs(&union, &[(g0.p() + v, vbar0)])?;
    debug_assert_eq!(s.new_loops, 0);
    Ok(s)
}

pub fn glue_and_contract(g0: &ColoredGraph, vbar0: usize, g: &ColoredGraph, v: usize) -> Result<ColoredGraph> {
    Ok(glue_tracked(g0, vbar0, g, v)?.graph)
}

/// An edge, identified by its white endpoint and its color.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub white: usize,
    pub color: usize,
}

/// Cuts the given edges (pairwise distinct colors) and closes the wound with
/// a new white vertex `w′` and black vertex `b′` (both with index `p`): a cut
/// edge `w → b` of color `c` becomes `w → b′` and `w′ → b`; every uncut color
/// joins `w′ → b′`. With no edges this is `Γ ⊔ dipole`.
pub fn edge_cut(g: &ColoredGraph, edges: &[Edge]) -> Result<ColoredGraph> {
    let p = g.p();
    let d = g.d();
    let mut cut_color = vec![None; d];
    for e in edges {
        if e.color >= d {
            return Err(Error::Input(format!("color {} out of range", e.color + 1)));
        }
        g.check_vertex(Vertex::White(e.white))?;
        if cut_color[e.color].is_some() {
            return Err(Error::RepeatedCutColor(e.color + 1));
        }
        cut_color[e.color] = Some(e.white);
    }
    let sigma = (0..d)
        .map(|c| {
            let mut row = g.sigma()[c].clone();
            match cut_color[c] {
                Some(w) => {
                    let b = row[w];
                    row[w] = p;
                    row.push(b);
                }
                None => row.push(p),
            }
            row
        })
        .collect();
    ColoredGraph::new(d, sigma, g.loops())
}

/// All sets of `k` edges with pairwise distinct colors, ordered by color set
/// and then by white endpoints.
pub fn enumerate_cuts(g: &ColoredGraph, k: usize) -> Vec<Vec<Edge>> {
    use itertools::Itertools;
    let p = g.p();
    let mut out = Vec::new();
    if k > g.d() {
        return out;
    }
    for colors in (0..g.d()).combinations(k) {
        if k == 0 {
            out.push(Vec::new());
            continue;
        }
        for whites in std::iter::repeat(0..p).take(k).multi_cartesian_product() {
            out.push(
                colors
                    .iter()
                    .zip(&whites)
                    .map(|(&color, &white)| Edge { white, color })
                    .collect(),
            );
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eq1_graph() -> ColoredGraph {
        ColoredGraph::from_one_based(3, 3, &[vec![1, 2, 3], vec![3, 1, 2], vec![2, 3, 1]], 0).unwrap()
    }

    #[test]
    fn dipole_contracts_to_loops() {
        let r = contract(&ColoredGraph::dipole(3), 0, 0).unwrap();
        assert!(r.graph.is_empty());
        assert_eq!(r.new_loops, 3);
    }

    #[test]
    fn contraction_without_shared_edge() {
        // In the sextic graph, w1 is joined to b1 (color 1), b3 (color 2), b2 (color 3).
        let g = eq1_graph();
        let r = contract(&g, 0, 0).unwrap();
        assert_eq!(r.new_loops, 1);
        assert_eq!(r.graph.p(), 2);
        // Pick a pair not sharing any edge: none exists here since every
        // white meets every black, so use a p=2 graph with a free pair.
        let h = ColoredGraph::from_one_based(3, 3, &[vec![1, 2, 3], vec![2, 1, 3], vec![1, 2, 3]], 0).unwrap();
        let r = contract(&h, 0, 2).unwrap();
        assert_eq!(r.new_loops, 0);
        assert_eq!(r.graph.p(), 2);
    }

    #[test]
    fn loops_count_shared_colors() {
        let g = eq1_graph();
        for w in 0..3 {
            for b in 0..3 {
                let shared = (0..3).filter(|&c| g.black_neighbor(w, c) == b).count();
                let r = contract(&g, w, b).unwrap();
                assert_eq!(r.new_loops, shared);
                assert_eq!(r.graph.p(), 2);
            }
        }
    }

    #[test]
    fn dipole_insertion_is_identity() {
        let g = eq1_graph();
        let dip = ColoredGraph::dipole(3);
        let key = g.canonical_form();
        for v in 0..3 {
            assert_eq!(glue_and_contract(&dip, 0, &g, v).unwrap().canonical_form(), key);
            assert_eq!(glue_and_contract(&g, v, &dip, 0).unwrap().canonical_form(), key);
        }
    }

    #[test]
    fn sextic_glue_is_connected() {
        let g = eq1_graph();
        let h = glue_and_contract(&g, 1, &g, 2).unwrap();
        assert_eq!(h.p(), 5);
        assert!(h.is_connected());
    }

    #[test]
    fn cuts_of_dipole() {
        let dip = ColoredGraph::dipole(3);
        let all = edge_cut(&dip, &enumerate_cuts(&dip, 3)[0]).unwrap();
        let (comps, _) = all.connected_components();
        assert_eq!(comps, vec![dip.clone(), dip.clone()]);

        let one = edge_cut(&dip, &[Edge { white: 0, color: 0 }]).unwrap();
        assert_eq!(one.sigma(), &[vec![1, 0], vec![0, 1], vec![0, 1]]);
        assert!(one.is_connected());

        let none = edge_cut(&dip, &[]).unwrap();
        assert_eq!(none.canonical_form(), dip.disjoint_union(&dip).unwrap().canonical_form());
    }

    #[test]
    fn repeated_color_rejected() {
        let g = eq1_graph();
        let err = edge_cut(&g, &[Edge { white: 0, color: 1 }, Edge { white: 2, color: 1 }]).unwrap_err();
        assert_eq!(err, Error::RepeatedCutColor(2));
    }

    #[test]
    fn cut_counts() {
        let dip = ColoredGraph::dipole(3);
        assert_eq!(enumerate_cuts(&dip, 1).len(), 3);
        assert_eq!(enumerate_cuts(&dip, 3).len(), 1);
        assert_eq!(enumerate_cuts(&eq1_graph(), 2).len(), 27);
    }
}
