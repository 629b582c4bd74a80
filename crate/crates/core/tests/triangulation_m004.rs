use ptolemy_core::triangulation::{
    abelianization, build_point_classes, edge, integral_point_count, integral_points, invert,
    transfer, Presentation, Triangulation, Word,
};

const M004: &str = include_str!("../fixtures/m004.json");
const ONE_TET: &str = include_str!("../fixtures/one_tet.json");

fn m004() -> Triangulation {
    Triangulation::parse(M004).unwrap()
}

fn point(label: &str) -> [u32; 4] {
    let d: Vec<u32> = label.chars().map(|c| c.to_digit(10).unwrap()).collect();
    [d[0], d[1], d[2], d[3]]
}

/// Expected identifications as (tet, point, sign relative to the first entry).
fn standard_n3_table() -> Vec<Vec<(usize, &'static str, i8)>> {
    vec![
        vec![
            (1, "2100", 1),
            (0, "1002", 1),
            (1, "2010", 1),
            (0, "1020", 1),
            (1, "0102", 1),
            (0, "0120", 1),
        ],
        vec![
            (1, "1200", 1),
            (0, "2001", 1),
            (1, "1020", 1),
            (0, "2010", 1),
            (1, "0201", 1),
            (0, "0210", 1),
        ],
        vec![
            (1, "0120", 1),
            (0, "2100", 1),
            (1, "0021", 1),
            (0, "0012", 1),
            (1, "2001", 1),
            (0, "0102", 1),
        ],
        vec![
            (1, "0210", 1),
            (0, "1200", 1),
            (1, "0012", 1),
            (0, "0021", 1),
            (1, "1002", 1),
            (0, "0201", 1),
        ],
        vec![(1, "1101", 1), (0, "1011", 1)],
        vec![(1, "1011", 1), (0, "1101", 1)],
        vec![(1, "1110", 1), (0, "1110", -1)],
        vec![(1, "0111", 1), (0, "0111", -1)],
    ]
}

#[test]
fn standard_classes_at_rank_three_match_the_table() {
    let tri = m004().standard().with_n(3).unwrap();
    let pc = build_point_classes(&tri).unwrap();
    assert_eq!(pc.classes.len(), 8);
    for group in standard_n3_table() {
        let (t0, p0, _) = group[0];
        let (c0, f0) = pc.class_of(t0, &point(p0));
        let f0 = f0.clone();
        assert_eq!(pc.classes[c0].members.len(), group.len());
        for (tet, p, sign) in group {
            let (c, f) = pc.class_of(tet, &point(p));
            assert_eq!(c, c0, "c_{p}_{tet}");
            assert!(f.mono.is_one());
            assert_eq!(f.sign * f0.sign, sign, "c_{p}_{tet}");
        }
    }
}

#[test]
fn enhanced_classes_at_rank_two() {
    let pc = build_point_classes(&m004()).unwrap();
    let mut names = pc.names();
    names.sort();
    assert_eq!(names, ["x", "y"]);
    assert_eq!(pc.total_members(), 12);
    assert!(pc.classes.iter().all(|c| c.members.len() == 6));
    let (c, f) = pc.resolve("c_0110_1").unwrap();
    assert_eq!(pc.classes[c].name, "y");
    assert!(f.is_one());
}

/// Checks each printed relation `c_target = F · c_source` against the
/// computed class factors.
#[test]
fn enhanced_relations_reproduce_the_printed_chain() {
    let tri = m004();
    let pc = build_point_classes(&tri).unwrap();
    let names = pc.symbols.names().to_vec();
    let printed = [
        ((0, 1, 2), (1, 1, 3), "1"),
        ((1, 1, 3), (0, 0, 2), "m'^-1*l'"),
        ((0, 0, 2), (1, 0, 2), "-m'"),
        ((1, 0, 2), (0, 0, 3), "-1"),
        ((0, 0, 3), (1, 0, 1), "-m'*l'^-1"),
        ((1, 0, 1), (0, 1, 2), "-m'^-1"),
        ((0, 1, 3), (1, 0, 3), "-1"),
        ((1, 0, 3), (0, 2, 3), "-m'^-2"),
        ((0, 2, 3), (1, 2, 3), "-1"),
        ((1, 2, 3), (0, 0, 1), "1"),
        ((0, 0, 1), (1, 1, 2), "-m'^2"),
        ((1, 1, 2), (0, 1, 3), "1"),
    ];
    for ((ta, ia, ja), (tb, ib, jb), f) in printed {
        let (ca, fa) = pc.class_of(ta, &edge(ia, ja));
        let (cb, fb) = pc.class_of(tb, &edge(ib, jb));
        assert_eq!(ca, cb);
        let ratio = fa.mul(&fb.inv());
        assert_eq!(ratio.render(&names), f, "c_{ia}{ja},{ta} / c_{ib}{jb},{tb}");
    }
    assert_eq!(pc.classes[pc.class_of(1, &edge(0, 1)).0].name, "x");
    assert_eq!(pc.classes[pc.class_of(1, &edge(1, 2)).0].name, "y");
}

#[test]
fn edge_cycle_products_are_trivial() {
    let tri = m004();
    let p = ptolemy_core::triangulation::face_pairing_presentation(&tri).unwrap();
    assert_eq!(p.cycles.len(), 2);
    for c in &p.cycles {
        assert_eq!(c.steps.len(), 6);
        assert!(c.product(&tri).is_one());
    }
}

#[test]
fn rule_and_reverse_compose_to_identity() {
    for n in 2..=4 {
        let tri = m004().with_n(n).unwrap();
        for rule in &tri.gluings {
            let back = rule.reverse();
            for t in integral_points(n).iter().filter(|t| t[rule.face] == 0) {
                let (s, f) = transfer(&tri, rule, t);
                let (u, g) = transfer(&tri, &back, &s);
                assert_eq!(&u, t);
                assert!(f.mul(&g).is_one(), "{} at {t:?}", rule.label);
            }
        }
    }
}

#[test]
fn point_counts_are_conserved() {
    for n in 2..=5 {
        let tri = m004().with_n(n).unwrap();
        let pc = build_point_classes(&tri).unwrap();
        assert_eq!(pc.total_members(), tri.tetrahedra * integral_point_count(n));
        // faces contribute (n-1)(n-2)/2 interior points, edges n-1 each, plus
        // the interior of each tetrahedron
        let n = n as usize;
        let interior = if n >= 4 {
            (n - 1) * (n - 2) * (n - 3) / 6
        } else {
            0
        };
        let face = (n - 1) * (n - 2) / 2;
        assert_eq!(pc.classes.len(), 2 * (n - 1) + 4 * face + 2 * interior);
    }
}

fn rotations(w: &Word) -> Vec<Word> {
    let mut out = Vec::new();
    for base in [w.clone(), invert(w)] {
        for k in 0..base.len().max(1) {
            let mut r = base[k..].to_vec();
            r.extend_from_slice(&base[..k]);
            out.push(r);
        }
    }
    out
}

fn same_relator(p: &Presentation, a: &Word, text: &str) -> bool {
    let b = p.parse_word(text).unwrap();
    rotations(a).contains(&b)
}

#[test]
fn presentation_matches_the_printed_one() {
    let tri = m004();
    let p = ptolemy_core::triangulation::face_pairing_presentation(&tri).unwrap();
    let gens: Vec<&str> = p.generators.iter().map(|&g| p.labels[g].as_str()).collect();
    assert_eq!(gens, ["a", "b", "c"]);
    assert_eq!(p.relators.len(), 2);
    let printed = ["c*a^-1*b*c^-1*a", "a*b^-1*c^-1*b"];
    for text in printed {
        assert!(
            p.relators.iter().any(|r| same_relator(&p, r, text)),
            "{text} not among {:?}",
            p.relators.iter().map(|r| p.render(r)).collect::<Vec<_>>()
        );
    }
    assert_eq!(abelianization(&p), (1, vec![]));
}

#[test]
fn toy_presentation_has_one_relator_per_edge_class() {
    let tri = Triangulation::parse(ONE_TET).unwrap();
    let p = ptolemy_core::triangulation::face_pairing_presentation(&tri).unwrap();
    let edge_classes = build_point_classes(&tri).unwrap().classes.len();
    assert_eq!(p.cycles.len(), edge_classes);
    assert_eq!(p.relators.len(), edge_classes);
    assert_eq!(p.generators.len(), 2);
    let walked: usize = p.cycles.iter().map(|c| c.steps.len()).sum();
    assert_eq!(walked, 6);
}
