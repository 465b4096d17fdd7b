use cutcat::decoders::{build_cut_cat_lut, CutCatLut, LutDecoder};
use cutcat::experiments::{decoder_for, sweep_gadget, McConfig};
use cutcat::gadget::resource_report;
use cutcat::{verify_gadget, GadgetSpec, PrepModel, Scheme};

#[test]
fn serialized_lut_still_verifies() {
    let spec = GadgetSpec::non_adaptive(14, 7).unwrap();
    let lut = CutCatLut::from_json(&build_cut_cat_lut(&spec).unwrap().to_json().unwrap()).unwrap();
    let report = verify_gadget(&spec.build(), &LutDecoder { lut }, spec.t);
    assert!(report.pass, "{:?}", report.counterexample);
}

#[test]
fn rules_and_lut_agree_on_d5() {
    for gamma in [8, 10, 13] {
        let spec = GadgetSpec::cut_cat(gamma, 5).unwrap();
        let g = spec.build();
        let rules = decoder_for(&spec).unwrap();
        let lut = LutDecoder { lut: build_cut_cat_lut(&spec).unwrap() };
        assert!(verify_gadget(&g, rules.as_ref(), 2).pass);
        assert!(verify_gadget(&g, &lut, 2).pass);
    }
}

#[test]
fn over_weight_faults_are_caught() {
    let spec = GadgetSpec::cut_cat(8, 3).unwrap();
    let report = verify_gadget(&spec.build(), decoder_for(&spec).unwrap().as_ref(), 2);
    assert!(!report.pass);
    let ce = report.counterexample.unwrap();
    assert!(ce.coset_weight > ce.locations.len());
}

#[test]
fn full_cat_sweep_runs() {
    let spec = GadgetSpec::full_cat(6, 3).unwrap();
    assert_eq!(spec.scheme, Scheme::FullCat);
    let r = sweep_gadget(&spec, &[0.05], &McConfig { min_failures: 20, ..McConfig::default() }, 1).unwrap();
    assert!(r.points[0].stats.failures >= 20);
}

#[test]
fn prep_model_shifts_counts() {
    let spec = GadgetSpec::cut_cat(14, 7).unwrap();
    let base = resource_report(&spec);
    let ideal = resource_report(&spec.clone().with_prep(PrepModel::Ideal));
    assert_eq!(base.two_qubit_gates.min - ideal.two_qubit_gates.min, 12);
    assert_eq!(base.simultaneous_qubits, ideal.simultaneous_qubits + 1);
}
