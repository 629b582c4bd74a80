//! Holonomy of an `n = 2` enhanced Ptolemy point: the natural cocycle on the
//! fattened decomposition, generator images as path products, and the
//! peripheral holonomy in the decoration frame.

mod two_bridge;

use std::collections::{HashMap, VecDeque};

use nalgebra::Matrix2;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ideal::IdealBundle;
use crate::numeric::NumericPoint;
use crate::shapes::{coordinate_value, primed_eigenvalues};
use crate::triangulation::{
    edge, edge_cycles, face_pairing_presentation, free_reduce, invert, label, FacePairingRule,
    Letter, PointClasses, Presentation, Triangulation, Word,
};

pub use two_bridge::{compare_two_bridge, figure_eight_two_bridge, TraceComparison, TwoBridgeRep};

pub type M2 = Matrix2<Complex64>;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn identity() -> M2 {
    M2::identity()
}

pub fn diag(d: Complex64) -> M2 {
    M2::new(d, c(0.0), c(0.0), d.inv())
}

/// Inverse of a 2×2 matrix by the adjugate.
pub fn inv2(m: &M2) -> M2 {
    let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
    M2::new(m[(1, 1)], -m[(0, 1)], -m[(1, 0)], m[(0, 0)]) / det
}

pub fn det2(m: &M2) -> Complex64 {
    m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]
}

pub fn trace(m: &M2) -> Complex64 {
    m[(0, 0)] + m[(1, 1)]
}

/// Largest entry of `a - b` in absolute value.
pub fn distance(a: &M2, b: &M2) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn power(m: &M2, k: i64) -> M2 {
    let base = if k < 0 { inv2(m) } else { *m };
    (0..k.unsigned_abs()).fold(identity(), |acc, _| acc * base)
}

/// `[[re, im], [re, im]]` rows for JSON output.
pub fn matrix_json(m: &M2) -> [[[f64; 2]; 2]; 2] {
    let e = |i, j| {
        let z: Complex64 = m[(i, j)];
        [z.re, z.im]
    };
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

/// A corner of a truncated simplex: the end near vertex `v` of the long
/// edge from `v` to `w`.
type Corner = (usize, usize, usize);

/// The natural cocycle of a point at `n = 2`. Long edges carry
/// `[[0, -1/c], [c, 0]]`, short edges upper unipotent matrices, and the
/// face-pairing edges near `v` the dressing `diag(d, 1/d)` of `v`.
#[derive(Debug, Clone)]
pub struct CocycleLabeling {
    /// `coords[tet][i][j] = det(v_i, v_j)`, antisymmetric.
    pub coords: Vec<[[Complex64; 4]; 4]>,
    /// Values of the primed eigenvalue symbols.
    pub eigenvalues: Vec<Complex64>,
}

/// Largest face-product defect for each kind of face.
#[derive(Debug, Clone, Default, Serialize)]
pub struct CocycleReport {
    pub hexagons: f64,
    pub triangles: f64,
    pub long_squares: f64,
    pub short_squares: f64,
    pub polygons: f64,
}

impl CocycleReport {
    pub fn max(&self) -> f64 {
        [
            self.hexagons,
            self.triangles,
            self.long_squares,
            self.short_squares,
            self.polygons,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

fn others(v: usize, w: usize) -> impl Iterator<Item = usize> {
    (0..4).filter(move |&u| u != v && u != w)
}

/// Labels the natural cocycle of `point`; `n = 2` only.
pub fn natural_cocycle(
    tri: &Triangulation,
    classes: &PointClasses,
    bundle: &IdealBundle,
    point: &NumericPoint,
) -> Result<CocycleLabeling> {
    if tri.n != 2 {
        return Err(Error::Invalid(format!(
            "natural cocycles are implemented for n = 2 only, not n = {}",
            tri.n
        )));
    }
    let eigenvalues = primed_eigenvalues(tri, bundle, point);
    let mut coords = Vec::with_capacity(tri.tetrahedra);
    for tet in 0..tri.tetrahedra {
        let mut cm = [[c(0.0); 4]; 4];
        for i in 0..4 {
            for j in i + 1..4 {
                let t = edge(i, j);
                let v = coordinate_value(classes, &eigenvalues, point, tet, &t);
                if v.norm() < 1e-12 || !v.is_finite() {
                    return Err(Error::Numeric(format!(
                        "degenerate flags: c_{}_{tet} vanishes",
                        label(&t)
                    )));
                }
                cm[i][j] = v;
                cm[j][i] = -v;
            }
        }
        coords.push(cm);
    }
    Ok(CocycleLabeling {
        coords,
        eigenvalues,
    })
}

impl CocycleLabeling {
    /// Label of the long edge from corner `(tet, i, j)` to `(tet, j, i)`.
    pub fn long(&self, tet: usize, i: usize, j: usize) -> M2 {
        let x = self.coords[tet][i][j];
        M2::new(c(0.0), -x.inv(), x, c(0.0))
    }

    /// Label of the short edge from corner `(tet, i, j)` to `(tet, i, k)`.
    pub fn short(&self, tet: usize, i: usize, j: usize, k: usize) -> M2 {
        let cm = &self.coords[tet];
        M2::new(c(1.0), cm[k][j] / (cm[i][j] * cm[i][k]), c(0.0), c(1.0))
    }

    /// The first diagonal entry of `M_{αv}` for the rule read from its
    /// source side.
    pub fn dressing(&self, tri: &Triangulation, rule: &FacePairingRule, v: usize) -> Complex64 {
        let [em, el] = rule.dressing[v];
        let cusp = tri.vertex_cusp[rule.tet][v];
        let m = self.eigenvalues[tri.eigen_index(cusp, false, 1)];
        let l = self.eigenvalues[tri.eigen_index(cusp, true, 1)];
        m.powi(em) * l.powi(el)
    }

    /// Label of the face-pairing edge from `(rule.tet, v, w)` to
    /// `(rule.to_tet, σv, σw)`.
    pub fn pairing(&self, tri: &Triangulation, rule: &FacePairingRule, v: usize) -> M2 {
        diag(self.dressing(tri, rule, v))
    }

    /// Products of labels around every face of the fattened decomposition.
    pub fn check(&self, tri: &Triangulation) -> CocycleReport {
        let one = identity();
        let mut r = CocycleReport::default();
        for tet in 0..tri.tetrahedra {
            for l in 0..4 {
                let f: Vec<usize> = (0..4).filter(|&u| u != l).collect();
                let (i, j, k) = (f[0], f[1], f[2]);
                let hex = self.long(tet, i, j)
                    * self.short(tet, j, i, k)
                    * self.long(tet, j, k)
                    * self.short(tet, k, j, i)
                    * self.long(tet, k, i)
                    * self.short(tet, i, k, j);
                r.hexagons = r.hexagons.max(distance(&hex, &one));
                // the triangle cut off at vertex l
                let tri_face =
                    self.short(tet, l, i, j) * self.short(tet, l, j, k) * self.short(tet, l, k, i);
                r.triangles = r.triangles.max(distance(&tri_face, &one));
            }
        }
        for rule in &tri.gluings {
            let s = &rule.perm;
            let (k2, f) = (rule.to_tet, rule.face);
            for v in others(f, f) {
                for w in others(v, f) {
                    let sq = self.long(rule.tet, v, w)
                        * self.pairing(tri, rule, w)
                        * self.long(k2, s[w], s[v])
                        * inv2(&self.pairing(tri, rule, v));
                    r.long_squares = r.long_squares.max(distance(&sq, &one));
                    for u in others(v, f).filter(|&u| u != w) {
                        let sq = self.short(rule.tet, v, w, u)
                            * self.pairing(tri, rule, v)
                            * self.short(k2, s[v], s[u], s[w])
                            * inv2(&self.pairing(tri, rule, v));
                        r.short_squares = r.short_squares.max(distance(&sq, &one));
                    }
                }
            }
        }
        for cycle in edge_cycles(tri) {
            let first = &cycle.steps[0];
            for end in [first.edge.0, first.edge.1] {
                r.polygons = r
                    .polygons
                    .max(self.polygon_defect(tri, first.tet, end, first.edge, first.exit));
            }
        }
        r
    }

    /// Walks the face-pairing edges around the 1-cell near the end `a` of
    /// the edge, until the starting corner recurs.
    fn polygon_defect(
        &self,
        tri: &Triangulation,
        tet: usize,
        a: usize,
        e: (usize, usize),
        exit: usize,
    ) -> f64 {
        let b = if e.0 == a { e.1 } else { e.0 };
        let start = (tet, a, b, exit);
        let mut state = start;
        let mut acc = c(1.0);
        for _ in 0..4 * tri.tetrahedra * 6 + 1 {
            let (k, a, b, p) = state;
            let (_, _, rule) = tri.rule_at(k, p);
            acc *= self.dressing(tri, &rule, a);
            let q = others(a, b).find(|&u| u != p).unwrap();
            let s = &rule.perm;
            state = (rule.to_tet, s[a], s[b], s[q]);
            if state == start {
                return (acc - 1.0).norm();
            }
        }
        f64::INFINITY
    }
}

/// Cusp data used to express peripheral curves as words.
#[derive(Debug, Clone, Serialize)]
pub struct PeripheralHolonomy {
    pub cusp: usize,
    /// Corner the decoration frame is taken at.
    pub base: (usize, usize, usize),
    pub mu_prime_word: String,
    pub lambda_prime_word: String,
    pub mu_word: String,
    pub lambda_word: String,
    #[serde(serialize_with = "ser_m2")]
    pub mu_prime: M2,
    #[serde(serialize_with = "ser_m2")]
    pub lambda_prime: M2,
    #[serde(serialize_with = "ser_m2")]
    pub mu: M2,
    #[serde(serialize_with = "ser_m2")]
    pub lambda: M2,
    /// Largest lower-left entry of the four matrices above.
    pub lower_left: f64,
    /// `‖[ρ(μ'), ρ(λ')] - I‖`.
    pub commutator: f64,
}

fn ser_m2<S: serde::Serializer>(m: &M2, s: S) -> std::result::Result<S::Ok, S::Error> {
    matrix_json(m).serialize(s)
}

/// The holonomy representation on the face-pairing presentation.
#[derive(Debug, Clone)]
pub struct Holonomy {
    pub presentation: Presentation,
    /// Image of every face pairing; tree pairings map to the identity.
    pub images: Vec<M2>,
    pub relator_residual: f64,
    pub det_residual: f64,
    /// Disagreement between generator images computed through different
    /// corners of the same face.
    pub corner_spread: f64,
    /// Disagreement between peripheral path products and their words.
    pub word_spread: f64,
    pub cocycle: CocycleReport,
    pub peripheral: Vec<PeripheralHolonomy>,
}

struct Tree {
    frame: HashMap<Corner, M2>,
}

fn corners(tri: &Triangulation) -> Vec<Corner> {
    let mut out = Vec::new();
    for k in 0..tri.tetrahedra {
        for v in 0..4 {
            for w in 0..4 {
                if v != w {
                    out.push((k, v, w));
                }
            }
        }
    }
    out
}

/// Edges of the fattened 1-skeleton leaving a corner: target, label, the
/// crossed rule (index and direction) for face-pairing edges.
fn neighbours(
    tri: &Triangulation,
    co: &CocycleLabeling,
    (k, v, w): Corner,
) -> Vec<(Corner, M2, Option<(usize, bool, [i32; 2])>)> {
    let mut out = vec![((k, w, v), co.long(k, v, w), None)];
    for u in others(v, w) {
        out.push(((k, v, u), co.short(k, v, w, u), None));
    }
    for p in others(v, w) {
        let (ri, fwd, rule) = tri.rule_at(k, p);
        let s = &rule.perm;
        out.push((
            (rule.to_tet, s[v], s[w]),
            co.pairing(tri, &rule, v),
            Some((ri, fwd, rule.dressing[v])),
        ));
    }
    out
}

/// Frames of every corner by breadth-first path products from corner
/// `(0, 0, 1)`, using intra-simplex edges and tree face pairings only.
fn develop(tri: &Triangulation, co: &CocycleLabeling, tree: &[usize]) -> Tree {
    let base = (0, 0, 1);
    let mut frame = HashMap::from([(base, identity())]);
    let mut queue = VecDeque::from([base]);
    while let Some(x) = queue.pop_front() {
        let gx = frame[&x];
        for (y, lab, crossing) in neighbours(tri, co, x) {
            if let Some((ri, _, _)) = crossing {
                if !tree.contains(&ri) {
                    continue;
                }
            }
            if let std::collections::hash_map::Entry::Vacant(e) = frame.entry(y) {
                e.insert(gx * lab);
                queue.push_back(y);
            }
        }
    }
    Tree { frame }
}

/// Evaluates a word on the generator images.
pub fn evaluate(images: &[M2], word: &[Letter]) -> M2 {
    word.iter().fold(identity(), |acc, l| {
        let m = images[l.rule];
        acc * if l.inverse { inv2(&m) } else { m }
    })
}

struct CuspLoop {
    class: [i64; 2],
    word: Word,
    matrix: M2,
}

/// Independent loops of the cusp link graph, based at its first corner.
fn cusp_loops(
    tri: &Triangulation,
    co: &CocycleLabeling,
    tree: &[usize],
    cusp: usize,
) -> (Corner, Vec<CuspLoop>) {
    let nodes: Vec<Corner> = corners(tri)
        .into_iter()
        .filter(|&(k, v, _)| tri.vertex_cusp[k][v] == cusp)
        .collect();
    let base = nodes[0];
    let mut seen: HashMap<Corner, (M2, [i64; 2], Word)> =
        HashMap::from([(base, (identity(), [0, 0], Vec::new()))]);
    let mut queue = VecDeque::from([base]);
    let mut pending = Vec::new();
    while let Some(x) = queue.pop_front() {
        let (hx, cx, wx) = seen[&x].clone();
        for (y, lab, crossing) in neighbours(tri, co, x) {
            if y.1 != x.1 && y.0 == x.0 {
                continue; // long edges leave the cusp
            }
            let (dc, letter) = match crossing {
                Some((ri, fwd, [em, el])) => (
                    [em as i64, el as i64],
                    (!tree.contains(&ri)).then_some(Letter {
                        rule: ri,
                        inverse: fwd,
                    }),
                ),
                None => ([0, 0], None),
            };
            let mut wy = wx.clone();
            wy.extend(letter);
            let entry = (hx * lab, [cx[0] + dc[0], cx[1] + dc[1]], wy);
            match seen.get(&y) {
                None => {
                    seen.insert(y, entry);
                    queue.push_back(y);
                }
                Some(_) => pending.push((y, entry)),
            }
        }
    }
    let loops = pending
        .into_iter()
        .map(|(y, (h, cl, w))| {
            let (hy, cy, wy) = &seen[&y];
            let mut word = w;
            word.extend(invert(wy));
            CuspLoop {
                class: [cl[0] - cy[0], cl[1] - cy[1]],
                word: free_reduce(&word),
                matrix: h * inv2(hy),
            }
        })
        .collect();
    (base, loops)
}

/// Word and decoration-frame matrix of the peripheral curve with the given
/// class in the primed basis.
fn peripheral_curve(loops: &[CuspLoop], target: [i64; 2]) -> Option<(Word, M2)> {
    for (i, a) in loops.iter().enumerate() {
        for b in &loops[i + 1..] {
            let det = a.class[0] * b.class[1] - a.class[1] * b.class[0];
            if det.abs() != 1 {
                continue;
            }
            let p = (target[0] * b.class[1] - target[1] * b.class[0]) * det;
            let q = (a.class[0] * target[1] - a.class[1] * target[0]) * det;
            let mut word = Vec::new();
            for (l, k) in [(a, p), (b, q)] {
                let piece = if k < 0 {
                    invert(&l.word)
                } else {
                    l.word.clone()
                };
                for _ in 0..k.unsigned_abs() {
                    word.extend(piece.iter().copied());
                }
            }
            return Some((
                free_reduce(&word),
                power(&a.matrix, p) * power(&b.matrix, q),
            ));
        }
    }
    None
}

/// Generator images by path products through the developed fattened
/// decomposition. The image of a face pairing is the loop crossing its
/// face from the target side to the source side.
pub fn holonomy(tri: &Triangulation, co: &CocycleLabeling, tol: f64) -> Result<Holonomy> {
    let presentation = face_pairing_presentation(tri)?;
    let tree = develop(tri, co, &presentation.tree);
    let g = |x: &Corner| tree.frame[x];
    let mut images = vec![identity(); tri.gluings.len()];
    let mut corner_spread: f64 = 0.0;
    for &ri in &presentation.generators {
        let rule = &tri.gluings[ri];
        let s = &rule.perm;
        let mut first: Option<M2> = None;
        for v in others(rule.face, rule.face) {
            for w in others(v, rule.face) {
                let x = (rule.tet, v, w);
                let y = (rule.to_tet, s[v], s[w]);
                let m = g(&y) * inv2(&co.pairing(tri, rule, v)) * inv2(&g(&x));
                match first {
                    None => first = Some(m),
                    Some(f) => corner_spread = corner_spread.max(distance(&f, &m)),
                }
            }
        }
        images[ri] = first.unwrap();
    }
    let relator_residual = presentation
        .relators
        .iter()
        .map(|r| distance(&evaluate(&images, r), &identity()))
        .fold(0.0, f64::max);
    let det_residual = images
        .iter()
        .map(|m| (det2(m) - 1.0).norm())
        .fold(0.0, f64::max);
    let cocycle = co.check(tri);
    let mut peripheral = Vec::new();
    let mut word_spread: f64 = 0.0;
    for cusp in &tri.cusps {
        let (base, loops) = cusp_loops(tri, co, &presentation.tree, cusp.index);
        let inv = cusp.inverse();
        let curve = |t: [i64; 2]| {
            peripheral_curve(&loops, t).ok_or_else(|| {
                Error::Numeric(format!(
                    "cusp {} has no peripheral basis of loops",
                    cusp.index
                ))
            })
        };
        let (mpw, mp) = curve([1, 0])?;
        let (lpw, lp) = curve([0, 1])?;
        let (mw, mu) = curve(inv[0])?;
        let (lw, lambda) = curve(inv[1])?;
        let gb = g(&base);
        for (w, m) in [(&mpw, &mp), (&lpw, &lp), (&mw, &mu), (&lw, &lambda)] {
            word_spread = word_spread.max(distance(&evaluate(&images, w), &(gb * m * inv2(&gb))));
        }
        let lower_left = [mp, lp, mu, lambda]
            .iter()
            .map(|m| m[(1, 0)].norm())
            .fold(0.0, f64::max);
        let commutator = distance(&(mp * lp * inv2(&mp) * inv2(&lp)), &identity());
        peripheral.push(PeripheralHolonomy {
            cusp: cusp.index,
            base,
            mu_prime_word: presentation.render(&mpw),
            lambda_prime_word: presentation.render(&lpw),
            mu_word: presentation.render(&mw),
            lambda_word: presentation.render(&lw),
            mu_prime: mp,
            lambda_prime: lp,
            mu,
            lambda,
            lower_left,
            commutator,
        });
    }
    let h = Holonomy {
        presentation,
        images,
        relator_residual,
        det_residual,
        corner_spread,
        word_spread,
        cocycle,
        peripheral,
    };
    let worst = [
        h.relator_residual,
        h.det_residual,
        h.corner_spread,
        h.word_spread,
        h.cocycle.max(),
    ]
    .into_iter()
    .fold(0.0, f64::max);
    if !(worst <= tol) {
        return Err(Error::Numeric(format!(
            "cocycle/path bookkeeping error: residual {worst:.3e} exceeds {tol:.1e} (relators {:.3e}, cocycle {:.3e}, corners {:.3e}, peripheral words {:.3e})",
            h.relator_residual,
            h.cocycle.max(),
            h.corner_spread,
            h.word_spread
        )));
    }
    Ok(h)
}

impl Holonomy {
    /// `ρ(word)` for a word in the face-pairing generators.
    pub fn word(&self, text: &str) -> Result<M2> {
        Ok(evaluate(&self.images, &self.presentation.parse_word(text)?))
    }
}

/// Eigenvalues of a 2×2 matrix.
pub fn eigenvalues(m: &M2) -> [Complex64; 2] {
    let t = trace(m);
    let d = det2(m);
    let s = (t * t - 4.0 * d).sqrt();
    [(t + s) / 2.0, (t - s) / 2.0]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(a: f64, b: f64, cc: f64, d: f64) -> M2 {
        M2::new(c(a), c(b), c(cc), c(d))
    }

    #[test]
    fn small_matrix_helpers() {
        let a = m(2.0, 1.0, 3.0, 2.0);
        assert!(distance(&(a * inv2(&a)), &identity()) < 1e-12);
        assert!(distance(&power(&a, -2), &inv2(&(a * a))) < 1e-12);
        assert!(distance(&power(&a, 0), &identity()) < 1e-12);
        let mut ev = eigenvalues(&m(3.0, 5.0, 0.0, 0.5)).map(|z| z.re);
        ev.sort_by(f64::total_cmp);
        assert_eq!(ev, [0.5, 3.0]);
        assert_eq!(
            matrix_json(&diag(c(2.0))),
            [[[2.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.5, 0.0]]]
        );
    }
}
