use num_complex::Complex64;
use proptest::prelude::*;
use ptolemy_core::groebner::Budget;
use ptolemy_core::holonomy::{
    compare_two_bridge, distance, eigenvalues, figure_eight_two_bridge, holonomy, inv2,
    natural_cocycle, trace, CocycleLabeling, Holonomy, M2,
};
use ptolemy_core::ideal::{
    build_ideal, diagonal_action, reduce_and_saturate, DiagonalScaling, IdealBundle, Mode,
    Saturation,
};
use ptolemy_core::numeric::{aberth, fill_witnesses, solve_point, NumericPoint};
use ptolemy_core::triangulation::{PointClasses, Triangulation};
use ptolemy_core::Error;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const M004: &str = include_str!("../fixtures/m004.json");

fn setup() -> (Triangulation, IdealBundle, PointClasses) {
    let tri = Triangulation::parse(M004).unwrap();
    let (b, pc) = build_ideal(&tri, Mode::Enhanced).unwrap();
    let b = reduce_and_saturate(&b, &pc, &tri, &["y".into()], Saturation::Global).unwrap();
    (tri, b, pc)
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Roots in `l` of the figure-eight A-polynomial at `m`.
fn l_roots(m: Complex64) -> Vec<Complex64> {
    let m2 = m * m;
    let m4 = m2 * m2;
    let b = m4 * m4 - m4 * m2 - 2.0 * m4 - m2 + 1.0;
    aberth(&[-m4, b, -m4]).unwrap()
}

fn points(b: &IdealBundle, m: Complex64, l: Complex64) -> Vec<NumericPoint> {
    solve_point(b, &[("m".into(), m), ("l".into(), l)], &Budget::default()).unwrap()
}

fn hol(tri: &Triangulation, b: &IdealBundle, pc: &PointClasses, p: &NumericPoint) -> Holonomy {
    let co = natural_cocycle(tri, pc, b, p).unwrap();
    holonomy(tri, &co, 1e-8).unwrap()
}

fn det(a: [Complex64; 2], b: [Complex64; 2]) -> Complex64 {
    a[0] * b[1] - a[1] * b[0]
}

fn vector() -> impl Strategy<Value = [Complex64; 2]> {
    prop::array::uniform4(-2.0f64..2.0).prop_map(|x| [c(x[0], x[1]), c(x[2], x[3])])
}

proptest! {
    /// The closed-form labels agree with the frames `(v_i, v_j / det(v_i, v_j))`
    /// built directly from four flag vectors.
    #[test]
    fn labels_match_counter_diagonal_frames(vs in prop::array::uniform4(vector())) {
        let mut coords = [[c(0.0, 0.0); 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                coords[i][j] = det(vs[i], vs[j]);
            }
        }
        prop_assume!((0..4).all(|i| (0..4).all(|j| i == j || coords[i][j].norm() > 1e-3)));
        let co = CocycleLabeling { coords: vec![coords], eigenvalues: vec![] };
        let frame = |i: usize, j: usize| {
            let u = vs[j].map(|z| z / coords[i][j]);
            M2::new(vs[i][0], u[0], vs[i][1], u[1])
        };
        for i in 0..4 {
            for j in 0..4 {
                if i == j {
                    continue;
                }
                let f = frame(i, j);
                prop_assert!((f[(0, 0)] * f[(1, 1)] - f[(0, 1)] * f[(1, 0)] - 1.0).norm() < 1e-9);
                let long = inv2(&f) * frame(j, i);
                prop_assert!(distance(&long, &co.long(0, i, j)) < 1e-6 * (1.0 + long.norm()));
                for k in (0..4).filter(|&k| k != i && k != j) {
                    let short = inv2(&f) * frame(i, k);
                    prop_assert!(distance(&short, &co.short(0, i, j, k)) < 1e-6 * (1.0 + short.norm()));
                }
            }
        }
    }
}

#[test]
fn eigenvalues_at_m_two() {
    let (tri, b, pc) = setup();
    let m = c(2.0, 0.0);
    let mut count = 0;
    for l in l_roots(m) {
        for p in points(&b, m, l) {
            count += 1;
            let h = hol(&tri, &b, &pc, &p);
            assert!(h.relator_residual < 1e-8);
            assert!(h.det_residual < 1e-8);
            let per = &h.peripheral[0];
            assert!(per.lower_left < 1e-8);
            assert!(per.commutator < 1e-8);
            // m' = m and l' = m^-2 l^-1 for this cusp basis
            assert!((per.mu_prime[(0, 0)] - m).norm() < 1e-8);
            assert!((per.lambda_prime[(0, 0)] - (m * m * l).inv()).norm() < 1e-8);
            assert!((per.lambda[(0, 0)] - l).norm() < 1e-8);
            let mu = h.word(&per.mu_word).unwrap();
            let mut ev = eigenvalues(&mu).map(|z| z.re);
            ev.sort_by(f64::total_cmp);
            assert!(
                (ev[0] - 0.5).abs() < 1e-8 && (ev[1] - 2.0).abs() < 1e-8,
                "{ev:?}"
            );
            let lam = h.word(&per.lambda_word).unwrap();
            assert!(distance(&(mu * lam), &(lam * mu)) < 1e-8);
        }
    }
    assert_eq!(count, 2);
}

#[test]
fn geometric_point_is_parabolic() {
    let (tri, b, pc) = setup();
    let ps = points(&b, c(1.0, 0.0), c(-1.0, 0.0));
    assert_eq!(ps.len(), 2);
    for p in &ps {
        let h = hol(&tri, &b, &pc, p);
        assert!(h.relator_residual < 1e-8);
        let per = &h.peripheral[0];
        for w in [&per.mu_word, &per.lambda_word] {
            let t = trace(&h.word(w).unwrap());
            assert!((t.norm() - 2.0).abs() < 1e-8, "{t}");
        }
        // the meridian c is parabolic and the group is not abelian
        assert!((trace(&h.word("c").unwrap()).norm() - 2.0).abs() < 1e-8);
        let (a, cc) = (h.word("a").unwrap(), h.word("c").unwrap());
        assert!(distance(&(a * cc), &(cc * a)) > 1e-3);
    }
}

#[test]
fn two_bridge_representation_matches_the_holonomy() {
    let (tri, b, pc) = setup();
    let mut rng = StdRng::seed_from_u64(7);
    let mut checked = 0;
    while checked < 10 {
        let m = c(rng.gen_range(0.6..1.8), rng.gen_range(-0.8..0.8));
        let l = l_roots(m)[rng.gen_range(0..2)];
        let rep = figure_eight_two_bridge(m, l).unwrap();
        assert!(
            rep.relation_residual < 1e-8,
            "{m} {l}: {}",
            rep.relation_residual
        );
        assert!(rep.det_residual < 1e-8);
        let ps = points(&b, m, l);
        assert_eq!(ps.len(), 1, "{m} {l}");
        let h = hol(&tri, &b, &pc, &ps[0]);
        let cmp = compare_two_bridge(&rep, &h, "c", "a*b^-1").unwrap();
        assert!(cmp.max_difference < 1e-8, "{cmp:?}");
        // the other images of the isomorphism: a = x2 x1 x2^-1, b = x1 x2^-1
        let a = rep.x2 * rep.x1 * inv2(&rep.x2);
        let bb = rep.x1 * inv2(&rep.x2);
        assert!((trace(&a) - trace(&h.word("a").unwrap())).norm() < 1e-8);
        assert!((trace(&bb) - trace(&h.word("b").unwrap())).norm() < 1e-8);
        assert!((trace(&(a * bb)) - trace(&h.word("a*b").unwrap())).norm() < 1e-8);
        checked += 1;
    }
}

#[test]
fn two_bridge_excludes_unit_meridian() {
    let err = figure_eight_two_bridge(c(1.0, 0.0), c(1.0, 0.0)).unwrap_err();
    assert!(err.to_string().contains("excluded locus"));
}

#[test]
fn diagonal_action_keeps_traces() {
    let (tri, b, pc) = setup();
    let m = c(1.3, 0.4);
    let l = l_roots(m)[0];
    let p = &points(&b, m, l)[0];
    let h = hol(&tri, &b, &pc, p);
    let scaling = DiagonalScaling::from_free(vec![vec![c(0.7, 1.1)]]);
    let mut values = diagonal_action(&tri, &pc, &scaling, &p.values).unwrap();
    fill_witnesses(&b, &mut values);
    let q = NumericPoint {
        registry: p.registry.clone(),
        values,
        residual: 0.0,
    };
    assert!((q.values[0] - p.values[0]).norm() > 1e-3);
    let h2 = hol(&tri, &b, &pc, &q);
    for w in ["a", "b", "c", "a*b", "a*c^-1", "a*b^-1*c", "b^2*c*a^-1"] {
        let (t1, t2) = (trace(&h.word(w).unwrap()), trace(&h2.word(w).unwrap()));
        assert!((t1 - t2).norm() < 1e-8, "{w}: {t1} vs {t2}");
    }
    // the cocycle itself changes
    let co1 = natural_cocycle(&tri, &pc, &b, p).unwrap();
    let co2 = natural_cocycle(&tri, &pc, &b, &q).unwrap();
    assert!(distance(&co1.long(0, 0, 1), &co2.long(0, 0, 1)) > 1e-3);
}

#[test]
fn perturbed_point_fails_loudly() {
    let (tri, b, pc) = setup();
    let m = c(2.0, 0.0);
    let l = l_roots(m)[0];
    let mut p = points(&b, m, l).remove(0);
    p.values[0] *= 1.01;
    let co = natural_cocycle(&tri, &pc, &b, &p).unwrap();
    assert!(co.check(&tri).max() > 1e-4);
    let err = holonomy(&tri, &co, 1e-8).unwrap_err();
    assert!(err.to_string().contains("bookkeeping"), "{err}");
}

#[test]
fn rank_three_is_refused() {
    let tri = Triangulation::parse(M004).unwrap().with_n(3).unwrap();
    let (b, pc) = build_ideal(&tri, Mode::Enhanced).unwrap();
    let p = NumericPoint {
        registry: b.registry.clone(),
        values: vec![c(1.0, 0.0); b.registry.len()],
        residual: 0.0,
    };
    assert!(matches!(
        natural_cocycle(&tri, &pc, &b, &p),
        Err(Error::Invalid(_))
    ));
}
