use std::sync::Arc;

use riesz_ned::ned::verify_two_sided_projection_bound;
use riesz_ned::{
    generated_family, ned_shift_certificate, norm, verify_ned, CondExpOperator, Instance, LatticeVector, NedCertificate,
    NormKind, ProcessWindow, SampleSpace,
};

fn v(x: &[f64]) -> LatticeVector {
    LatticeVector::new(x.to_vec())
}

/// Three independent fair signs on four atoms.
fn sign_noise() -> (CondExpOperator, ProcessWindow) {
    let t = CondExpOperator::global(Arc::new(SampleSpace::uniform(4).unwrap()));
    let noise = ProcessWindow::new(
        1,
        vec![
            v(&[1.0, 1.0, -1.0, -1.0]),
            v(&[1.0, -1.0, 1.0, -1.0]),
            v(&[1.0, -1.0, -1.0, 1.0]),
        ],
    )
    .unwrap();
    (t, noise)
}

// f_n = ε_n is NED with ξ ≡ 0: ε_n is measurable for every window around n.
// Shifting by one and keeping ξ'_0 = ξ_1 = 0 claims ε_{n+1} is determined by
// ε_n, which is false for independent signs.
#[test]
fn shift_with_xi_one_for_small_gaps_fails() {
    let (t, noise) = sign_noise();
    let family = generated_family(&noise, &t).unwrap();
    let ones = vec![v(&[1.0; 4]); 3];
    let zero_xi = vec![v(&[0.0; 4]); 4];
    let cert = NedCertificate::new(NormKind::Two, ones.clone(), zero_xi.clone()).unwrap();
    assert!(verify_ned(&noise, &family, &cert).unwrap().pass);

    let shifted = noise.shifted(1).unwrap();
    let printed = NedCertificate {
        p: NormKind::Two,
        d: vec![v(&[2.0; 4]); 2],
        xi: vec![zero_xi[1].clone(), zero_xi[1].clone(), zero_xi[1].clone(), zero_xi[0].clone()],
    };
    let report = verify_ned(&shifted, &family, &printed).unwrap();
    assert!(!report.pass);
    assert_eq!(report.location.unwrap().m, Some(0));

    let norms: Vec<_> = noise.vectors().iter().map(|e| norm(e, &t, NormKind::Two).unwrap().value).collect();
    let corrected = ned_shift_certificate(&cert, &norms, 1).unwrap();
    assert!(verify_ned(&shifted, &family, &corrected).unwrap().pass);
}

#[test]
fn two_sided_bound_needs_factor_two() {
    let inst = Instance::load(concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures/two_sided_counterexample.json")).unwrap();
    let (t, u, w) = (inst.base_operator(), inst.operator("U").unwrap(), inst.operator("V").unwrap());
    let f = &inst.vectors()["f"];
    let lhs = norm(&(f - w.apply(f)), &t, NormKind::Inf).unwrap().value;
    let rhs = norm(&(f - u.apply(f)), &t, NormKind::Inf).unwrap().value;
    assert!((lhs.max() - 2.0 / 3.0).abs() < 1e-12);
    assert!((rhs.max() - 0.5).abs() < 1e-12);
    assert!(lhs.max() > rhs.max(), "factor 1 would suffice");
    assert!(verify_two_sided_projection_bound(f, &u, &w, &t, NormKind::Inf).unwrap().pass);
}
