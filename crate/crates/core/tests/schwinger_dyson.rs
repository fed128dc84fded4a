use colored_tensor::colored_graph::enumerate_graphs_of_size;
use colored_tensor::hopf::{self, HopfAlgebra};
use colored_tensor::poly::rat;
use colored_tensor::schwinger_dyson::{self as sd, ConstraintOperator, SdForm};
use colored_tensor::wick_series::Monomial;
use colored_tensor::ColoredGraph;

#[test]
fn z_form_holds_for_d2_and_d4() {
    for (d, p_max, v_max) in [(2, 3, 8), (4, 2, 6)] {
        for (op, r) in sd::verify_all(d, p_max, v_max, SdForm::Z).unwrap() {
            assert!(r.is_zero(), "D={d} {op}: {r}");
        }
    }
}

/// On `log Z` the same operator leaves `−⟨Tr_Γ₀⟩` at the lowest order.
/// Only the dipole constraint still holds.
#[test]
fn w_form_fails() {
    let results = sd::verify_all(3, 2, 6, SdForm::W).unwrap();
    for (op, r) in &results {
        assert_eq!(r.is_zero(), op.p() == 1, "{op}");
    }
    let quartic = enumerate_graphs_of_size(3, 2, true)[0].clone();
    let r = sd::verify_constraint(&quartic, 0, 3, 6, SdForm::W).unwrap();
    assert!(!r.coefficient(&Monomial::one()).is_zero());
}

#[test]
fn vertex_out_of_range_is_rejected() {
    let g = ColoredGraph::dipole(3);
    assert!(ConstraintOperator::new(&g, 1).is_err());
    let two = ColoredGraph::union_all(3, &[g.clone(), g]).unwrap();
    assert!(ConstraintOperator::new(&two, 0).is_err());
}

/// The commutator of two constraints, expanded on traces, is the symbolic
/// bracket for every pair of `p ≤ 3` operators in `D = 2` and pairs with
/// total size at most four in `D = 3`.
#[test]
fn bracket_closes_on_traces() {
    let d2 = sd::constraint_operators(2, 3);
    for a in &d2 {
        for b in &d2 {
            let r = sd::lie_bracket(a, b, 8).unwrap();
            assert!(r.closes());
            assert_eq!(r.combination, sd::symbolic_bracket(a.key(), b.key()).unwrap());
        }
    }
    let d3 = sd::constraint_operators(3, 3);
    for a in &d3 {
        for b in d3.iter().filter(|b| a.p() + b.p() <= 4) {
            let r = sd::lie_bracket(a, b, 8).unwrap();
            assert!(r.closes(), "{a} {b}");
            assert_eq!(r.combination, sd::symbolic_bracket(a.key(), b.key()).unwrap());
        }
    }
}

#[test]
fn necklace_relation_regression() {
    assert_eq!(sd::necklace_relation(2, 5).unwrap(), vec![(rat(3), 6)]);
    assert_eq!(sd::necklace_relation(5, 2).unwrap(), vec![(rat(-3), 6)]);
    assert_eq!(sd::necklace_relation(3, 3).unwrap(), vec![]);
    // The dipole acts as the Euler operator: [X_1, X_n] = (n − 1) X_n.
    assert_eq!(sd::necklace_relation(1, 4).unwrap(), vec![(rat(3), 4)]);
}

#[test]
fn hopf_and_sd_brackets_agree_off_the_dipole() {
    let mut alg = HopfAlgebra::default();
    let gens: Vec<_> = sd::constraint_operators(2, 4).iter().map(|o| o.key().clone()).collect();
    for a in &gens {
        for b in &gens {
            let c = hopf::compare_brackets(&mut alg, a, b).unwrap();
            if a.p() >= 2 && b.p() >= 2 {
                assert_eq!(c.hopf, c.schwinger_dyson, "{a} {b}");
            } else {
                assert!(c.hopf.is_empty());
            }
        }
    }
}
