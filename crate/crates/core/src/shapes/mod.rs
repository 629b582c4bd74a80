//! Shape assignments of Ptolemy points, the generalized gluing equations,
//! and the Dehn invariant computed both from shapes and from eigenvalues.

mod dehn;
mod wedge;

use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{Monomial, Registry};
use crate::error::{Error, Result};
use crate::ideal::{unprime, IdealBundle, Role};
use crate::numeric::NumericPoint;
use crate::triangulation::{
    add, label, simplex_points, Factor, Point, PointClasses, Triangulation,
};

pub use dehn::{
    dehn_lhs, dehn_report, dehn_rhs, dehn_rhs_from_bars, unprime_wedge, verify_certificate,
    verify_dehn_theorem, CertificateContext, DehnReport, Membership, Verdict, VerifiedCertificate,
};
pub use wedge::{cartan_inverse, CartanData, WedgeSum};

/// The three shape parameters of a subsimplex: `z = z^{1100} = z^{0011}`,
/// `z' = z^{0110} = z^{1001}`, `z'' = z^{1010} = z^{0101}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Subsimplex<T> {
    pub tet: usize,
    pub s: Point,
    pub z: T,
    pub z_prime: T,
    pub z_dprime: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShapeAssignment<T> {
    pub n: u32,
    pub shapes: Vec<Subsimplex<T>>,
}

pub const EDGES: [Point; 6] = [
    [1, 1, 0, 0],
    [0, 0, 1, 1],
    [0, 1, 1, 0],
    [1, 0, 0, 1],
    [1, 0, 1, 0],
    [0, 1, 0, 1],
];

impl<T> Subsimplex<T> {
    /// The shape parameter on edge `e` of this subsimplex.
    pub fn at(&self, e: &Point) -> &T {
        match e {
            [1, 1, 0, 0] | [0, 0, 1, 1] => &self.z,
            [0, 1, 1, 0] | [1, 0, 0, 1] => &self.z_prime,
            [1, 0, 1, 0] | [0, 1, 0, 1] => &self.z_dprime,
            _ => panic!("{e:?} is not an edge point"),
        }
    }
}

/// A shape certificate: `z` and `1 - z` as signed Laurent monomials.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub tet: usize,
    pub s: Point,
    pub z: String,
    pub one_minus_z: String,
}

/// Coordinates as signed monomials in the class representatives and the
/// eigenvalue symbols (primed or not).
#[derive(Debug, Clone)]
pub struct SymbolicCoordinates<'a> {
    pub tri: &'a Triangulation,
    pub classes: &'a PointClasses,
    pub registry: Arc<Registry>,
    pub primed: bool,
}

impl<'a> SymbolicCoordinates<'a> {
    pub fn new(tri: &'a Triangulation, classes: &'a PointClasses, primed: bool) -> Result<Self> {
        let mut names = classes.names();
        names.extend(tri.eigen_names(primed));
        Ok(SymbolicCoordinates {
            tri,
            classes,
            registry: Registry::new(names)?,
            primed,
        })
    }

    pub fn coordinate(&self, tet: usize, t: &Point) -> Factor {
        let (ci, f) = self.classes.class_of(tet, t);
        let offset = self.classes.classes.len();
        let nvars = self.registry.len();
        let mut mono = if self.primed {
            let mut m = Monomial::one(nvars);
            for (v, &e) in f.mono.exponents().iter().enumerate() {
                m.set_exp(offset + v, e);
            }
            m
        } else {
            unprime(self.tri, &f.mono, nvars, offset)
        };
        mono.set_exp(ci, mono.exp(ci) + 1);
        Factor { sign: f.sign, mono }
    }

    /// Shapes as signed monomials, with the certificate of each `1 - z`
    /// read off the Ptolemy relation of the subsimplex.
    pub fn shapes(&self) -> (ShapeAssignment<Factor>, Vec<Certificate>) {
        let n = self.tri.n;
        let mut shapes = Vec::new();
        let mut certs = Vec::new();
        let names = self.registry.names();
        for tet in 0..self.tri.tetrahedra {
            for s in simplex_points(n - 2) {
                let c = |e: [u32; 4]| self.coordinate(tet, &add(&s, &e));
                let p1 = c([1, 0, 0, 1]).mul(&c([0, 1, 1, 0]));
                let p2 = c([1, 0, 1, 0]).mul(&c([0, 1, 0, 1]));
                let p3 = c([1, 1, 0, 0]).mul(&c([0, 0, 1, 1]));
                let z = p1.mul(&p2.inv());
                let z_prime = p2.mul(&p3.inv());
                let mut z_dprime = p3.mul(&p1.inv());
                z_dprime.sign = -z_dprime.sign;
                let one_minus_z = p3.mul(&p2.inv());
                certs.push(Certificate {
                    tet,
                    s,
                    z: z.render(names),
                    one_minus_z: one_minus_z.render(names),
                });
                shapes.push(Subsimplex {
                    tet,
                    s,
                    z,
                    z_prime,
                    z_dprime,
                });
            }
        }
        (ShapeAssignment { n, shapes }, certs)
    }
}

/// Values of the primed eigenvalue symbols at a point of the bundle.
pub fn primed_eigenvalues(
    tri: &Triangulation,
    bundle: &IdealBundle,
    point: &NumericPoint,
) -> Vec<Complex64> {
    let names = tri.eigen_names(true);
    let eig = bundle.vars_with(Role::Eigenvalue);
    if eig.is_empty() {
        return vec![Complex64::new(1.0, 0.0); names.len()];
    }
    let k = tri.n as usize - 1;
    let mut out = vec![Complex64::new(1.0, 0.0); names.len()];
    for cusp in &tri.cusps {
        let [[a, b], [c, d]] = cusp.basis;
        for j in 1..=k {
            let mi = tri.eigen_index(cusp.index, false, j);
            let li = tri.eigen_index(cusp.index, true, j);
            let m = point.values[eig[mi]];
            let l = point.values[eig[li]];
            out[mi] = m.powi(a as i32) * l.powi(b as i32);
            out[li] = m.powi(c as i32) * l.powi(d as i32);
        }
    }
    out
}

/// Evaluates `c_{t,tet}` at a point of the bundle.
pub fn coordinate_value(
    classes: &PointClasses,
    primed: &[Complex64],
    point: &NumericPoint,
    tet: usize,
    t: &Point,
) -> Complex64 {
    let (ci, f) = classes.class_of(tet, t);
    let mut v = point.values[ci] * f.sign as f64;
    for (i, &e) in f.mono.exponents().iter().enumerate() {
        if e != 0 {
            v *= primed[i].powi(e);
        }
    }
    v
}

/// Numeric shapes of a point; fails on a degenerate subsimplex.
pub fn numeric_shapes(
    tri: &Triangulation,
    classes: &PointClasses,
    bundle: &IdealBundle,
    point: &NumericPoint,
) -> Result<ShapeAssignment<Complex64>> {
    let primed = primed_eigenvalues(tri, bundle, point);
    let n = tri.n;
    let mut shapes = Vec::new();
    for tet in 0..tri.tetrahedra {
        for s in simplex_points(n - 2) {
            let c = |e: [u32; 4]| coordinate_value(classes, &primed, point, tet, &add(&s, &e));
            let p1 = c([1, 0, 0, 1]) * c([0, 1, 1, 0]);
            let p2 = c([1, 0, 1, 0]) * c([0, 1, 0, 1]);
            let p3 = c([1, 1, 0, 0]) * c([0, 0, 1, 1]);
            let z = p1 / p2;
            let degenerate = [p1, p2, p3].iter().any(|p| p.norm() < 1e-12)
                || (z - 1.0).norm() < 1e-12
                || !z.is_finite();
            if degenerate {
                return Err(Error::Numeric(format!(
                    "degenerate simplex: tetrahedron {tet}, subsimplex {}",
                    label(&s)
                )));
            }
            shapes.push(Subsimplex {
                tet,
                s,
                z,
                z_prime: p2 / p3,
                z_dprime: -p3 / p1,
            });
        }
    }
    Ok(ShapeAssignment { n, shapes })
}

/// Largest defect in `z z' z'' = -1`, `z' (1 - z) = 1` and `z'' z = z - 1`.
pub fn shape_relation_residual(sa: &ShapeAssignment<Complex64>) -> f64 {
    sa.shapes
        .iter()
        .map(|s| {
            let a = (s.z * s.z_prime * s.z_dprime + 1.0).norm();
            let b = (s.z_prime * (1.0 - s.z) - 1.0).norm();
            let c = (s.z_dprime * s.z - (s.z - 1.0)).norm();
            a.max(b).max(c)
        })
        .fold(0.0, f64::max)
}

/// For each class, the product of the shape parameters `z^e_{s}` over
/// members `(t, tet)` and decompositions `t = s + e`.
pub fn gluing_products<T: Clone>(
    classes: &PointClasses,
    sa: &ShapeAssignment<T>,
    one: T,
    mul: impl Fn(&T, &T) -> T,
) -> Vec<(String, T)> {
    let n = sa.n;
    classes
        .classes
        .iter()
        .map(|c| {
            let mut acc = one.clone();
            for &(tet, t) in &c.members {
                for sub in sa.shapes.iter().filter(|x| x.tet == tet) {
                    for e in &EDGES {
                        if add(&sub.s, e) == t {
                            acc = mul(&acc, sub.at(e));
                        }
                    }
                }
            }
            let _ = n;
            (c.name.clone(), acc)
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct GluingResidual {
    pub class: String,
    pub product: [f64; 2],
    pub residual: f64,
}

pub fn check_gluing_equations(
    classes: &PointClasses,
    sa: &ShapeAssignment<Complex64>,
) -> Vec<GluingResidual> {
    gluing_products(classes, sa, Complex64::new(1.0, 0.0), |a, b| a * b)
        .into_iter()
        .map(|(class, p)| GluingResidual {
            class,
            product: [p.re, p.im],
            residual: (p - 1.0).norm(),
        })
        .collect()
}

/// Symbolic gluing products; each is exactly `+1` on a consistent variety.
pub fn symbolic_gluing(
    classes: &PointClasses,
    sa: &ShapeAssignment<Factor>,
    nvars: usize,
) -> Vec<(String, Factor)> {
    gluing_products(classes, sa, Factor::one(nvars), |a, b| a.mul(b))
}
