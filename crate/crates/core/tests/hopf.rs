use std::path::Path;

use num_bigint::BigInt;
use serde_json::Value;

use colored_tensor::cli::run_with;
use colored_tensor::colored_graph::MarkedGraph;
use colored_tensor::hopf::{self, Admissibility, Character, HopfAlgebra, HopfElement, HopfMonomial};
use colored_tensor::poly::Rational;
use colored_tensor::{ColoredGraph, MarkedKey, Vertex};

fn golden(name: &str, args: &[&str]) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("ctm").chain(args.iter().copied()).map(String::from);
    assert_eq!(run_with(argv, &mut out, &mut err), 0);
    let got: Value = serde_json::from_slice(&out).unwrap();
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name);
    let want: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(got, want, "{name}");
}

#[test]
fn coproduct_golden_files() {
    let eq1 = |color: &str| {
        format!(r#"{{"graph":{{"D":3,"p":3,"sigma":[[1,2,3],[3,1,2],[2,3,1]]}},"vertex":{{"color":"{color}","index":1}}}}"#)
    };
    golden("eq1_coproduct_white.json", &["hopf", "coproduct", "--graph", &eq1("white")]);
    golden("eq1_coproduct_black.json", &["hopf", "coproduct", "--graph", &eq1("black")]);
    golden("p3_coproduct.json", &["hopf", "coproduct", "--graph", "030301000102000201010002"]);
}

fn character(domain: &[MarkedKey], shift: i64) -> Character {
    Character {
        values: domain
            .iter()
            .enumerate()
            .map(|(i, k)| (k.clone(), Rational::new(BigInt::from((i as i64 * 7 + shift) % 9 - 4), BigInt::from((i as i64 + shift) % 4 + 1))))
            .collect(),
    }
}

#[test]
fn convolution_is_associative() {
    let mut alg = HopfAlgebra::default();
    let domain: Vec<MarkedKey> = alg.closure(&hopf::generators(3, 3)).into_iter().collect();
    let (a, b, c) = (character(&domain, 1), character(&domain, 5), character(&domain, 11));
    let ab = alg.convolve(&a, &b, &domain).unwrap();
    let bc = alg.convolve(&b, &c, &domain).unwrap();
    let ab_c = alg.convolve(&ab, &c, &domain).unwrap();
    let a_bc = alg.convolve(&a, &bc, &domain).unwrap();
    assert_eq!(ab_c, a_bc);
    let eps = Character::counit_on(&domain);
    assert_eq!(alg.convolve(&a, &eps, &domain).unwrap(), a);
}

#[test]
fn antipode_is_multiplicative() {
    let mut alg = HopfAlgebra::default();
    let gens: Vec<MarkedKey> = hopf::generators(3, 2);
    for x in &gens {
        for y in &gens {
            let m = HopfMonomial::single(x.clone()).mul(&HopfMonomial::single(y.clone()));
            let sx = alg.antipode(x).unwrap();
            let sy = alg.antipode(y).unwrap();
            assert_eq!(alg.antipode_monomial(&m).unwrap(), sx.mul(&sy));
        }
    }
    assert_eq!(alg.antipode_monomial(&HopfMonomial::unit()).unwrap(), HopfElement::unit());
}

#[test]
fn counit_values() {
    let dip = MarkedGraph { graph: ColoredGraph::dipole(3), vertex: Vertex::White(0) }.canonical_form();
    let mut x = HopfElement::unit().scale(&BigInt::from(3));
    x = x.add(&HopfElement::generator(dip).scale(&BigInt::from(2)));
    assert_eq!(hopf::counit(&x), BigInt::from(3));
}

/// Records which admissibility settings give a Hopf algebra.
#[test]
fn admissibility_settings() {
    let gens = hopf::generators(3, 3);
    let settings = [
        (Admissibility { single_vertices: false, complement_of_mark: false }, true),
        (Admissibility { single_vertices: true, complement_of_mark: false }, false),
        (Admissibility { single_vertices: false, complement_of_mark: true }, false),
    ];
    for (adm, coassociative) in settings {
        let mut alg = HopfAlgebra::new(adm);
        assert_eq!(gens.iter().all(|k| alg.is_coassociative_on(k)), coassociative, "{adm:?}");
    }
    // Both switches together stay coassociative, but the dipole is no longer
    // primitive and the antipode recursion cannot start.
    let both = Admissibility { single_vertices: true, complement_of_mark: true };
    let mut alg = HopfAlgebra::new(both);
    assert!(gens.iter().all(|k| alg.is_coassociative_on(k)));
    let dip = MarkedGraph { graph: ColoredGraph::dipole(3), vertex: Vertex::White(0) }.canonical_form();
    assert_eq!(alg.coproduct(&dip).len(), 3);
    assert!(gens.iter().any(|k| alg.antipode(k).is_err()));
}
