use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use secrecy_core::entropy::{run_harness, verify_inequality, write_reports_csv, LemmaInstance, Params, Rule};
use secrecy_core::state::{random_pure, random_state};
use secrecy_core::DensityOperator;

fn pauli_x() -> DMatrix<Complex64> {
    let o = Complex64::new(0.0, 0.0);
    let l = Complex64::new(1.0, 0.0);
    DMatrix::from_row_slice(2, 2, &[o, l, l, o])
}

#[test]
fn data_processing_example() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let rho = random_state(&[2, 2, 2], 4, &mut rng);
    let p = Params { eps: Some(0.1), ..Default::default() };
    for rule in [Rule::DataProcessingMin, Rule::DataProcessingMax] {
        let r = verify_inequality(rule, &LemmaInstance::Tripartite(rho.clone()), &p).unwrap();
        assert!(r.holds && r.slack >= -1e-6, "{r:?}");
    }
}

#[test]
fn min_max_conversion_collapses_on_pure_product() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    let sigma = random_state(&[2], 2, &mut rng);
    let rho = DensityOperator::diagonal(&[1.0, 0.0], vec![2]).unwrap().tensor(&sigma);
    let p = Params { eps: Some(0.0), delta: Some(0.0), ..Default::default() };
    let r = verify_inequality(Rule::MinMaxConversion, &LemmaInstance::Bipartite(rho), &p).unwrap();
    assert!(r.lhs.abs() < 1e-6 && r.rhs.abs() < 1e-6, "{r:?}");
    assert!(r.holds);
}

#[test]
fn quasi_concavity_on_pauli_orbit() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    let psi = random_pure(4, &mut rng);
    let rho = DensityOperator::from_pure(&psi, vec![2, 2]).unwrap();
    let id = DMatrix::identity(2, 2);
    let inst = LemmaInstance::Orbit { rho, probs: vec![0.5, 0.5], unitaries: vec![(id.clone(), id), (pauli_x(), pauli_x())] };
    let p = Params { eps: Some(0.2), ..Default::default() };
    let r = verify_inequality(Rule::QuasiConcavity, &inst, &p).unwrap();
    assert!(r.holds, "{r:?}");
}

#[test]
fn domain_violations_are_rejected() {
    let rho = DensityOperator::maximally_entangled(2);
    let inst = LemmaInstance::Bipartite(rho);
    let p = Params { eps: Some(0.6), delta: Some(0.5), ..Default::default() };
    assert!(verify_inequality(Rule::MinMaxConversion, &inst, &p).is_err());
    let p = Params { alpha: Some(1.0), beta: Some(1.0), ..Default::default() };
    assert!(verify_inequality(Rule::MinMaxConversionSharp, &inst, &p).is_err());
    assert!(verify_inequality(Rule::DataProcessingMin, &inst, &Params::default()).is_err());
    assert!("ChainMaxUpper".parse::<Rule>().is_ok());
    assert!("NoSuchRule".parse::<Rule>().is_err());
}

#[test]
fn every_rule_holds_on_a_few_seeds() {
    let reports = run_harness(&Rule::ALL, 3, 100, [2, 2, 2]).unwrap();
    assert_eq!(reports.len(), 30);
    for r in &reports {
        assert!(r.holds, "{} seed {:?} {}: lhs {} rhs {}", r.rule, r.seed, r.params, r.lhs, r.rhs);
    }
}

#[test]
fn reports_are_reproducible_csv() {
    let a = run_harness(&[Rule::MaxMinConversion], 2, 7, [2, 2, 2]).unwrap();
    let b = run_harness(&[Rule::MaxMinConversion], 2, 7, [2, 2, 2]).unwrap();
    let mut x = Vec::new();
    let mut y = Vec::new();
    write_reports_csv(&a, &mut x).unwrap();
    write_reports_csv(&b, &mut y).unwrap();
    assert_eq!(x, y);
    let text = String::from_utf8(x).unwrap();
    assert!(text.starts_with("rule,seed,params,lhs,rhs,slack,holds\n"));
    assert_eq!(text.lines().count(), 3);
}
