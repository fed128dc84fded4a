use colored_tensor::colored_graph::enumerate_graphs_of_size;
use colored_tensor::contraction::contract;
use colored_tensor::flow::{self, FlowConvention, FlowState, RhsTerm, Seed};
use colored_tensor::poly::{rat, ratio, Poly};
use colored_tensor::wick_series::{partition_series, Monomial};
use colored_tensor::ColoredGraph;

fn passing(seed: &Seed, v_max: usize) -> Vec<FlowConvention> {
    flow::search_conventions(seed, v_max).unwrap().into_iter().filter(|(_, ok)| *ok).map(|(c, _)| c).collect()
}

#[test]
fn convention_search_d2() {
    let seed = Seed::new(2).with(&ColoredGraph::necklace(2), rat(1)).unwrap();
    // Four vertices only see the linear terms and already rule out dropping
    // k = 0; the bilinear term needs eight.
    assert!(passing(&seed, 4).iter().all(|c| c.include_k0));
    assert!(passing(&seed, 6).len() > 1);
    assert_eq!(passing(&seed, 8), vec![FlowConvention::default()]);
}

#[test]
fn convention_search_d3() {
    let g = enumerate_graphs_of_size(3, 2, true)[0].decode();
    let seed = Seed::new(3).with(&g, rat(1)).unwrap();
    assert_eq!(passing(&seed, 8), vec![FlowConvention::default()]);
}

#[test]
fn mixed_seed_flow() {
    let seed = Seed::dipole(2, ratio(1, 2))
        .with(&ColoredGraph::necklace(2), ratio(-1, 3))
        .unwrap()
        .with(&ColoredGraph::necklace(3), rat(2))
        .unwrap();
    let report = flow::verify_flow(&seed, 6, FlowConvention::default()).unwrap();
    assert!(report.is_zero(), "{:?}", report.residuals);
}

#[test]
fn quartic_single_contraction() {
    // One Wick pair inside the seed: λ_dipole = t/C_Γ · Σ_pairs N^loops.
    for g in enumerate_graphs_of_size(3, 2, true).iter().map(|k| k.decode()) {
        let ec = flow::effective_couplings(&Seed::new(3).with(&g, rat(1)).unwrap(), 4).unwrap();
        let dip = Monomial::single(ColoredGraph::dipole(3).canonical_form());
        let mut expected = Poly::zero();
        for w in 0..2 {
            for b in 0..2 {
                let r = contract(&g, w, b).unwrap();
                expected.add_term(ratio(1, g.automorphism_count() as i64), r.new_loops as u32, 1);
            }
        }
        assert_eq!(ec.get(&dip).truncate_t(1), expected);
    }
}

/// The constant coupling is the vacuum free energy with rescaled couplings:
/// `λ_∅(t) = −W(λ_Γ → −seed_Γ · t^{p_Γ})`.
#[test]
fn vacuum_term_matches_free_energy() {
    let d = 3;
    let g = enumerate_graphs_of_size(d, 2, true)[1].decode();
    let key = g.canonical_form();
    let seed = Seed::new(d).with(&g, rat(1)).unwrap();
    let ec = flow::effective_couplings(&seed, 6).unwrap();
    let w = partition_series(d, 6).log().unwrap();
    let mut expected = Poly::zero();
    for (m, c) in w.terms() {
        let k = m.power(&key);
        if m.keys().len() != k as usize {
            continue;
        }
        let sign = if k % 2 == 1 { rat(1) } else { rat(-1) };
        let c = c.scale(&sign);
        for (n, _, v) in c.terms() {
            expected.add_term(v.clone(), n, 2 * k);
        }
    }
    assert_eq!(ec.get(&Monomial::one()), expected);
}

#[test]
fn rhs_terms_of_dipole() {
    let dip = Monomial::single(ColoredGraph::dipole(2).canonical_form());
    let terms = flow::rhs_terms(2, &dip).unwrap();
    let quadratic: Vec<_> = terms.iter().filter(|t| matches!(t, RhsTerm::Quadratic { .. })).collect();
    assert_eq!(quadratic, vec![&RhsTerm::Quadratic { left: dip.clone(), right: dip.clone() }]);
    assert_eq!(terms.len() - quadratic.len(), 1 + 2 + 1);
}

#[test]
fn truncated_integration() {
    let seed = Seed::dipole(2, rat(1)).with(&ColoredGraph::necklace(2), ratio(1, 10)).unwrap();
    let state = FlowState::from_seed(&seed, 3.0, 4).unwrap();
    let traj = flow::integrate_flow(&state, 0.1, 50, FlowConvention::default()).unwrap();
    assert!(traj.error.is_none());
    assert_eq!(traj.states.len(), 51);
    assert!(traj.dropped_terms > 0);
    assert!((traj.last().t - 0.1).abs() < 1e-12);
}

#[test]
fn blow_up_is_reported() {
    let seed = Seed::dipole(2, rat(-10));
    let state = FlowState::from_seed(&seed, 1.0, 2).unwrap();
    let traj = flow::integrate_flow(&state, 1.0, 20, FlowConvention::default()).unwrap();
    assert!(traj.error.is_some());
}

#[test]
fn seed_too_large() {
    let seed = Seed::new(2).with(&ColoredGraph::necklace(3), rat(1)).unwrap();
    assert!(flow::effective_couplings(&seed, 4).is_err());
}

#[test]
fn matrix_mode_rows() {
    let seed = Seed::new(2).with(&ColoredGraph::necklace(2), rat(1)).unwrap();
    let ec = flow::effective_couplings(&seed, 6).unwrap();
    for row in flow::matrix_mode_expand(&ec).unwrap() {
        assert_eq!(row.symmetry_factor, num_bigint::BigInt::from(row.automorphisms));
    }
    let d3 = flow::effective_couplings(&Seed::new(3), 4).unwrap();
    assert!(flow::matrix_mode_expand(&d3).is_err());
}
