use std::f64::consts::PI;

use num_complex::Complex64;
use ptolemy_core::groebner::Budget;
use ptolemy_core::ideal::{build_ideal, reduce_and_saturate, Mode, Saturation};
use ptolemy_core::numeric::solve_point;
use ptolemy_core::shapes::{
    check_gluing_equations, dehn_lhs, dehn_report, dehn_rhs, numeric_shapes,
    shape_relation_residual, symbolic_gluing, verify_certificate, Certificate, CertificateContext,
    SymbolicCoordinates, Verdict,
};
use ptolemy_core::triangulation::{build_point_classes, Triangulation};

const M004: &str = include_str!("../fixtures/m004.json");

fn m004(n: u32) -> Triangulation {
    Triangulation::parse(M004).unwrap().with_n(n).unwrap()
}

fn cert(tet: usize, z: &str, w: &str) -> Certificate {
    Certificate {
        tet,
        s: [0, 0, 0, 0],
        z: z.into(),
        one_minus_z: w.into(),
    }
}

#[test]
fn symbolic_shapes_satisfy_the_gluing_equations_exactly() {
    for n in 2..=3 {
        let tri = m004(n);
        let pc = build_point_classes(&tri).unwrap();
        for primed in [true, false] {
            let sc = SymbolicCoordinates::new(&tri, &pc, primed).unwrap();
            let (sa, certs) = sc.shapes();
            assert_eq!(sa.shapes.len(), 2 * ((n + 1) * n * (n - 1) / 6) as usize);
            assert_eq!(certs.len(), sa.shapes.len());
            for s in &sa.shapes {
                let p = s.z.mul(&s.z_prime).mul(&s.z_dprime);
                assert_eq!(p.sign, -1);
                assert!(p.mono.is_one());
            }
            for (class, product) in symbolic_gluing(&pc, &sa, sc.registry.len()) {
                assert!(product.is_one(), "n = {n}, class {class}");
            }
        }
    }
}

#[test]
fn figure_eight_dehn_invariant_from_printed_certificates() {
    let tri = m004(2);
    let (bundle, pc) = build_ideal(&tri, Mode::Enhanced).unwrap();
    let ctx = CertificateContext::new(&tri, &pc, &bundle, Budget::default()).unwrap();
    let certs = [
        cert(0, "x*y^-1", "-m'^2*l'*y*x^-1"),
        cert(1, "l'*m'^-2*y^2*x^-2", "l'*y*x^-1"),
    ];
    let verified: Vec<_> = certs
        .iter()
        .map(|c| verify_certificate(c, &ctx).unwrap())
        .collect();
    let lhs = dehn_lhs(&verified, &ctx).unwrap();
    assert_eq!(lhs.to_string(), "-2 m'∧l'");
    assert_eq!(dehn_rhs(&tri, false).to_string(), "-2 m∧l");
}

#[test]
fn inconsistent_certificate_is_rejected() {
    let tri = m004(2);
    let (bundle, pc) = build_ideal(&tri, Mode::Enhanced).unwrap();
    let ctx = CertificateContext::new(&tri, &pc, &bundle, Budget::default()).unwrap();
    assert!(verify_certificate(&cert(0, "x", "x"), &ctx).is_err());
    assert!(verify_certificate(&cert(0, "2*x", "y"), &ctx).is_err());
}

#[test]
fn figure_eight_report_from_coordinates() {
    let tri = m004(2);
    let (bundle, pc) = build_ideal(&tri, Mode::Enhanced).unwrap();
    let r = dehn_report(&tri, &pc, &bundle, None, Budget::default()).unwrap();
    assert_eq!(r.lhs_primed, "-2 m'∧l'");
    assert_eq!(r.rhs_primed, "-2 m'∧l'");
    assert_eq!(r.verdict_primed, Verdict::Equal);
    assert_eq!(r.lhs, "2 m∧l");
    assert_eq!(r.rhs, "-2 m∧l");
    assert_eq!(r.verdict, Verdict::EqualUpToGlobalSign);
}

#[test]
fn rank_three_report_from_coordinates() {
    let tri = m004(3);
    let (bundle, pc) = build_ideal(&tri, Mode::Enhanced).unwrap();
    let r = dehn_report(&tri, &pc, &bundle, None, Budget::default()).unwrap();
    assert_eq!(r.certificates.len(), 8);
    assert_eq!(r.lhs_primed, "-2 m1'∧l1' - m1'∧l2' - m2'∧l1' - 2 m2'∧l2'");
    assert_eq!(r.verdict_primed, Verdict::Equal);
    assert_eq!(r.rhs, "-2 m1∧l1 - m1∧l2 - m2∧l1 - 2 m2∧l2");
    assert_eq!(r.verdict, Verdict::EqualUpToGlobalSign);
}

#[test]
fn boundary_unipotent_side_vanishes() {
    let tri = m004(2);
    let (bundle, pc) = build_ideal(&tri, Mode::Standard).unwrap();
    let std = tri.standard();
    let r = dehn_report(&std, &pc, &bundle, None, Budget::default()).unwrap();
    assert_eq!(r.lhs_primed, "0");
}

#[test]
fn geometric_point_has_regular_shapes() {
    let tri = m004(2);
    let (b, pc) = build_ideal(&tri, Mode::Enhanced).unwrap();
    let b = reduce_and_saturate(&b, &pc, &tri, &["y".into()], Saturation::Global).unwrap();
    let pins = [
        ("m".to_string(), Complex64::new(1.0, 0.0)),
        ("l".to_string(), Complex64::new(-1.0, 0.0)),
    ];
    let points = solve_point(&b, &pins, &Budget::default()).unwrap();
    assert_eq!(points.len(), 2);
    for p in &points {
        let mut sa = numeric_shapes(&tri, &pc, &b, p).unwrap();
        assert!(shape_relation_residual(&sa) < 1e-9);
        for s in &sa.shapes {
            assert!((s.z.norm() - 1.0).abs() < 1e-9);
            assert!((s.z.arg().abs() - PI / 3.0).abs() < 1e-9, "{}", s.z);
        }
        let report = check_gluing_equations(&pc, &sa);
        assert_eq!(report.len(), 2);
        assert!(report.iter().all(|g| g.residual < 1e-9));

        sa.shapes[0].z *= 1.01;
        assert!(check_gluing_equations(&pc, &sa)
            .iter()
            .any(|g| g.residual > 1e-3));
    }
}
