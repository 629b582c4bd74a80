//! Ptolemy ideals: Ptolemy relations written in class representatives,
//! reduction by fixing coordinates, saturation witnesses and CAS export.

mod export;

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{rat, Monomial, MonomialOrder, Polynomial, Registry};
use crate::error::{Error, Result};
use crate::triangulation::{
    build_point_classes, simplex_points, Factor, Point, PointClasses, Triangulation,
};

pub use crate::triangulation::{peripheral_multiplier, sign_multiplier};
pub use export::{parse_json, Format};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Standard,
    Enhanced,
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Mode> {
        match s {
            "standard" => Ok(Mode::Standard),
            "enhanced" => Ok(Mode::Enhanced),
            _ => Err(Error::Invalid(format!("unknown mode `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Ptolemy,
    Eigenvalue,
    Witness,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Provenance {
    PtolemyRelation { tet: usize, s: Point },
    Reduction { fix: String },
    Saturation,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::PtolemyRelation { tet, s } => write!(
                f,
                "ptolemy relation s={} tet={}",
                crate::triangulation::label(s),
                tet
            ),
            Provenance::Reduction { fix } => write!(f, "reduction {fix}=1"),
            Provenance::Saturation => write!(f, "saturation"),
        }
    }
}

/// How non-vanishing of the coordinates is imposed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Saturation {
    /// One witness `w` with `w · ∏ v - 1`.
    #[default]
    Global,
    /// One witness per variable, `w_v · v - 1`.
    PerVariable,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdealBundle {
    pub registry: Arc<Registry>,
    pub roles: Vec<Role>,
    pub generators: Vec<Polynomial>,
    pub provenance: Vec<Provenance>,
    pub n: u32,
    pub cusps: usize,
    pub mode: Mode,
}

impl IdealBundle {
    pub fn vars_with(&self, role: Role) -> Vec<usize> {
        (0..self.roles.len())
            .filter(|&v| self.roles[v] == role)
            .collect()
    }

    pub fn names_with(&self, role: Role) -> Vec<String> {
        self.vars_with(role)
            .into_iter()
            .map(|v| self.registry.name(v).to_string())
            .collect()
    }

    /// Ptolemy coordinates and witnesses: the variables eliminated to reach
    /// the eigenvalue variety.
    pub fn eliminable(&self) -> Vec<usize> {
        (0..self.roles.len())
            .filter(|&v| self.roles[v] != Role::Eigenvalue)
            .collect()
    }

    pub fn push(&mut self, p: Polynomial, tag: Provenance) {
        let p = p.normalized();
        if !p.is_zero() {
            self.generators.push(p);
            self.provenance.push(tag);
        }
    }

    /// Re-expresses every generator over a registry with `extra` appended.
    fn extend(&mut self, extra: &[String], role: Role) -> Result<()> {
        let reg = self.registry.extended(extra.iter().cloned())?;
        self.generators = self
            .generators
            .iter()
            .map(|g| g.rebase(&reg))
            .collect::<Result<_>>()?;
        self.roles.extend(extra.iter().map(|_| role));
        self.registry = reg;
        Ok(())
    }
}

/// Maps a primed eigenvalue monomial to the unprimed symbols through the
/// cusp bases: `m' = m^a l^b`, `l' = m^c l^d`, entry by entry.
pub(crate) fn unprime(
    tri: &Triangulation,
    primed: &Monomial,
    nvars: usize,
    offset: usize,
) -> Monomial {
    let mut out = Monomial::one(nvars);
    let k = tri.n as usize - 1;
    for cusp in &tri.cusps {
        let [[a, b], [c, d]] = cusp.basis;
        for j in 1..=k {
            let em = primed.exp(tri.eigen_index(cusp.index, false, j)) as i64;
            let el = primed.exp(tri.eigen_index(cusp.index, true, j)) as i64;
            if em == 0 && el == 0 {
                continue;
            }
            let mi = offset + tri.eigen_index(cusp.index, false, j);
            let li = offset + tri.eigen_index(cusp.index, true, j);
            out.set_exp(mi, out.exp(mi) + (em * a + el * c) as i32);
            out.set_exp(li, out.exp(li) + (em * b + el * d) as i32);
        }
    }
    out
}

fn resolved_term(
    tri: &Triangulation,
    pc: &PointClasses,
    reg: &Arc<Registry>,
    offset: usize,
    tet: usize,
    t: &Point,
) -> (Monomial, i8) {
    let (ci, f): (usize, &Factor) = pc.class_of(tet, t);
    let mut m = unprime(tri, &f.mono, reg.len(), offset);
    m.set_exp(ci, m.exp(ci) + 1);
    (m, f.sign)
}

/// The Ptolemy relations of one tetrahedron, indexed by `s ∈ Δ³_{n-2}`, over
/// the class representatives: `c_{s+1001} c_{s+0110} - c_{s+1010} c_{s+0101}
/// + c_{s+1100} c_{s+0011}`, cleared of eigenvalue denominators.
pub fn ptolemy_relations(
    tri: &Triangulation,
    pc: &PointClasses,
    reg: &Arc<Registry>,
    tet: usize,
) -> Vec<(Point, Polynomial)> {
    let offset = pc.classes.len();
    let pairs: [([u32; 4], [u32; 4], i64); 3] = [
        ([1, 0, 0, 1], [0, 1, 1, 0], 1),
        ([1, 0, 1, 0], [0, 1, 0, 1], -1),
        ([1, 1, 0, 0], [0, 0, 1, 1], 1),
    ];
    let mut out = Vec::new();
    for s in simplex_points(tri.n - 2) {
        let mut p = Polynomial::zero(reg);
        for (u, v, coeff) in pairs {
            let (mu, su) = resolved_term(
                tri,
                pc,
                reg,
                offset,
                tet,
                &crate::triangulation::add(&s, &u),
            );
            let (mv, sv) = resolved_term(
                tri,
                pc,
                reg,
                offset,
                tet,
                &crate::triangulation::add(&s, &v),
            );
            p.add_term(mu.mul(&mv), rat(coeff * (su * sv) as i64));
        }
        out.push((s, p.clear_denominators().0));
    }
    out
}

/// Builds the standard or enhanced Ptolemy ideal of `tri` at rank `tri.n`.
pub fn build_ideal(tri: &Triangulation, mode: Mode) -> Result<(IdealBundle, PointClasses)> {
    let tri = match mode {
        Mode::Standard => tri.standard(),
        Mode::Enhanced => tri.clone(),
    };
    let pc = build_point_classes(&tri)?;
    let mut names = pc.names();
    let mut roles = vec![Role::Ptolemy; names.len()];
    if mode == Mode::Enhanced {
        let eig = tri.eigen_names(false);
        roles.extend(eig.iter().map(|_| Role::Eigenvalue));
        names.extend(eig);
    }
    let reg = Registry::new(names)?;
    let mut bundle = IdealBundle {
        registry: reg.clone(),
        roles,
        generators: Vec::new(),
        provenance: Vec::new(),
        n: tri.n,
        cusps: tri.cusp_count(),
        mode,
    };
    for tet in 0..tri.tetrahedra {
        for (s, p) in ptolemy_relations(&tri, &pc, &reg, tet) {
            bundle.push(p, Provenance::PtolemyRelation { tet, s });
        }
    }
    Ok((bundle, pc))
}

/// Appends `v - 1` for each fixed coordinate and the saturation witnesses.
/// A fix may name a representative or any member `c_<t>_<tet>` of a class;
/// the latter fixes `factor · representative = 1`.
pub fn reduce_and_saturate(
    bundle: &IdealBundle,
    classes: &PointClasses,
    tri: &Triangulation,
    fixes: &[String],
    saturation: Saturation,
) -> Result<IdealBundle> {
    let mut out = bundle.clone();
    let reg = out.registry.clone();
    let ptolemy = bundle.vars_with(Role::Ptolemy);
    if fixes.len() > ptolemy.len() {
        return Err(Error::Invalid("more fixes than Ptolemy coordinates".into()));
    }
    let offset = classes.classes.len();
    for fix in fixes {
        let (ci, f) = classes.resolve(fix).ok_or_else(|| {
            if reg.index(fix).is_some() {
                Error::Invalid(format!("`{fix}` is not a Ptolemy coordinate"))
            } else {
                Error::UnknownVariable(fix.clone())
            }
        })?;
        let mut m = if bundle.mode == Mode::Enhanced {
            unprime(tri, &f.mono, reg.len(), offset)
        } else {
            Monomial::one(reg.len())
        };
        m.set_exp(ci, m.exp(ci) + 1);
        let mut p = Polynomial::term(&reg, m, rat(f.sign as i64));
        p.add_term(Monomial::one(reg.len()), rat(-1));
        out.push(
            p.clear_denominators().0,
            Provenance::Reduction { fix: fix.clone() },
        );
    }
    let guarded: Vec<usize> = (0..reg.len())
        .filter(|&v| bundle.roles[v] != Role::Witness)
        .collect();
    match saturation {
        Saturation::Global => {
            out.extend(&[fresh(&reg, "w")], Role::Witness)?;
            let r = out.registry.clone();
            let mut m = Monomial::one(r.len());
            for &v in &guarded {
                m.set_exp(v, 1);
            }
            m.set_exp(r.len() - 1, 1);
            let p = Polynomial::from_terms(&r, [(m, rat(1)), (Monomial::one(r.len()), rat(-1))]);
            out.push(p, Provenance::Saturation);
        }
        Saturation::PerVariable => {
            let names: Vec<String> = guarded
                .iter()
                .map(|&v| fresh(&reg, &format!("w_{}", reg.name(v).replace('\'', "p"))))
                .collect();
            out.extend(&names, Role::Witness)?;
            let r = out.registry.clone();
            for (i, &v) in guarded.iter().enumerate() {
                let w = reg.len() + i;
                let mut m = Monomial::one(r.len());
                m.set_exp(v, 1);
                m.set_exp(w, 1);
                let p =
                    Polynomial::from_terms(&r, [(m, rat(1)), (Monomial::one(r.len()), rat(-1))]);
                out.push(p, Provenance::Saturation);
            }
        }
    }
    Ok(out)
}

fn fresh(reg: &Registry, base: &str) -> String {
    let mut name = base.to_string();
    while reg.index(&name).is_some() {
        name.push('_');
    }
    name
}

/// Per-cusp diagonal scalings `d_{i,1..n}` with product one.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalScaling {
    pub entries: Vec<Vec<Complex64>>,
}

impl DiagonalScaling {
    pub fn identity(cusps: usize, n: u32) -> DiagonalScaling {
        DiagonalScaling {
            entries: vec![vec![Complex64::new(1.0, 0.0); n as usize]; cusps],
        }
    }

    /// Completes `n - 1` free entries per cusp with the inverse product.
    pub fn from_free(free: Vec<Vec<Complex64>>) -> DiagonalScaling {
        let entries = free
            .into_iter()
            .map(|mut d| {
                let p: Complex64 = d.iter().product();
                d.push(p.inv());
                d
            })
            .collect();
        DiagonalScaling { entries }
    }

    pub fn check(&self, n: u32, tol: f64) -> Result<()> {
        for (i, d) in self.entries.iter().enumerate() {
            let p: Complex64 = d.iter().product();
            if d.len() != n as usize || (p - 1.0).norm() > tol {
                return Err(Error::Invalid(format!(
                    "scaling of cusp {i} must have {n} entries with product 1"
                )));
            }
        }
        Ok(())
    }

    /// `∏_v` of the first `t_v` entries of the scaling at the cusp of `v`.
    pub fn multiplier(&self, tri: &Triangulation, tet: usize, t: &Point) -> Complex64 {
        let mut acc = Complex64::new(1.0, 0.0);
        for v in 0..4 {
            let d = &self.entries[tri.vertex_cusp[tet][v]];
            for e in d.iter().take(t[v] as usize) {
                acc *= e;
            }
        }
        acc
    }
}

/// Applies the diagonal action to a point given in the bundle's variable
/// order; eigenvalue and witness coordinates are left unchanged.
pub fn diagonal_action(
    tri: &Triangulation,
    classes: &PointClasses,
    scaling: &DiagonalScaling,
    point: &[Complex64],
) -> Result<Vec<Complex64>> {
    scaling.check(tri.n, 1e-12)?;
    let mut out = point.to_vec();
    for (ci, c) in classes.classes.iter().enumerate() {
        let (tet, t) = c.representative();
        out[ci] *= scaling.multiplier(tri, tet, &t);
    }
    Ok(out)
}

/// The monomial order eliminating Ptolemy coordinates and witnesses.
pub fn elimination_order(bundle: &IdealBundle) -> MonomialOrder {
    MonomialOrder::elimination(&bundle.registry, &bundle.eliminable())
}

#[cfg(test)]
mod tests {
    use super::*;

    const M004: &str = include_str!("../../fixtures/m004.json");

    fn m004() -> Triangulation {
        Triangulation::parse(M004).unwrap()
    }

    fn parse(b: &IdealBundle, s: &str) -> Polynomial {
        Polynomial::parse(s, &b.registry).unwrap()
    }

    #[test]
    fn enhanced_rank_two_relations() {
        let (b, _) = build_ideal(&m004(), Mode::Enhanced).unwrap();
        assert_eq!(b.registry.names(), ["x", "y", "m", "l"]);
        assert_eq!(b.generators.len(), 2);
        let expect = [
            "m^4*l*x^2 + m^4*l*x*y - m^4*y^2",
            "-y^2 + m^4*l*x^2 - m^2*x*y",
        ];
        for e in expect {
            let e = parse(&b, e).strip_monomial_factor().0;
            assert!(
                b.generators
                    .iter()
                    .any(|g| g.strip_monomial_factor().0.associate(&e)),
                "{e} missing from {:?}",
                b.generators
            );
        }
    }

    #[test]
    fn standard_is_enhanced_at_one() {
        let tri = m004();
        let (s, _) = build_ideal(&tri, Mode::Standard).unwrap();
        let (e, _) = build_ideal(&tri, Mode::Enhanced).unwrap();
        let one = Polynomial::one(&e.registry);
        for (gs, ge) in s.generators.iter().zip(&e.generators) {
            let mut p = ge.clone();
            for v in e.vars_with(Role::Eigenvalue) {
                p = p.substitute(v, &one).unwrap();
            }
            let p = p.rebase(&s.registry).unwrap();
            assert!(p.associate(gs), "{p} vs {gs}");
        }
    }

    #[test]
    fn rank_three_relation_shapes() {
        let tri = m004().with_n(3).unwrap();
        let (b, _) = build_ideal(&tri, Mode::Enhanced).unwrap();
        assert_eq!(b.vars_with(Role::Ptolemy).len(), 8);
        assert_eq!(b.names_with(Role::Eigenvalue), ["m1", "m2", "l1", "l2"]);
        assert_eq!(b.generators.len(), 8);
        let ptolemy = b.vars_with(Role::Ptolemy);
        for g in &b.generators {
            assert_eq!(g.len(), 3);
            for (m, _) in g.terms() {
                assert_eq!(ptolemy.iter().map(|&v| m.exp(v)).sum::<i32>(), 2);
            }
        }
        let (s, _) = build_ideal(&m004().standard().with_n(3).unwrap(), Mode::Standard).unwrap();
        // c_2001 c_1110 - c_2010 c_1101 + c_2100 c_1011 on tetrahedron 0
        let rel = &s.generators[s
            .provenance
            .iter()
            .position(|p| {
                *p == Provenance::PtolemyRelation {
                    tet: 0,
                    s: [1, 0, 0, 0],
                }
            })
            .unwrap()];
        assert_eq!(rel.len(), 3);
    }

    #[test]
    fn rank_four_has_ten_relations_per_tetrahedron() {
        let tri = m004().with_n(4).unwrap();
        let (b, _) = build_ideal(&tri, Mode::Standard).unwrap();
        assert_eq!(b.generators.len(), 20);
    }

    #[test]
    fn fixes_and_witness() {
        let tri = m004();
        let (b, pc) = build_ideal(&tri, Mode::Enhanced).unwrap();
        let r = reduce_and_saturate(&b, &pc, &tri, &["y".into()], Saturation::Global).unwrap();
        assert_eq!(r.generators.len(), 4);
        assert_eq!(r.generators[2].to_string(), "y - 1");
        assert_eq!(r.generators[3].to_string(), "x*y*m*l*w - 1");
        let bare = reduce_and_saturate(&b, &pc, &tri, &[], Saturation::Global).unwrap();
        assert_eq!(bare.generators.len(), 3);
        assert!(reduce_and_saturate(&b, &pc, &tri, &["m".into()], Saturation::Global).is_err());
        assert!(reduce_and_saturate(&b, &pc, &tri, &["q".into()], Saturation::Global).is_err());
        let per = reduce_and_saturate(&b, &pc, &tri, &[], Saturation::PerVariable).unwrap();
        assert_eq!(per.vars_with(Role::Witness).len(), 4);
        // a member name fixes its signed, rescaled representative
        let m =
            reduce_and_saturate(&b, &pc, &tri, &["c_0011_0".into()], Saturation::Global).unwrap();
        assert_eq!(
            m.provenance[2],
            Provenance::Reduction {
                fix: "c_0011_0".into()
            }
        );
        assert!(m.generators[2].involves(0) || m.generators[2].involves(1));
    }

    #[test]
    fn standard_rank_three_fixes() {
        let tri = m004().standard().with_n(3).unwrap();
        let (b, pc) = build_ideal(&tri, Mode::Standard).unwrap();
        let fixes = ["c_0012_0".to_string(), "c_0111_0".to_string()];
        let r = reduce_and_saturate(&b, &pc, &tri, &fixes, Saturation::Global).unwrap();
        assert_eq!(r.generators.len(), 8 + 2 + 1);
    }

    #[test]
    fn ptolemy_relations_scale_uniformly() {
        // the three terms of each relation pick up one common multiplier
        for n in 2..=3 {
            let tri = m004().with_n(n).unwrap();
            let sc = DiagonalScaling::from_free(vec![(1..n)
                .map(|j| Complex64::new(1.0 + j as f64 * 0.37, 0.2 * j as f64))
                .collect()]);
            for s in simplex_points(n - 2) {
                let pairs = [
                    ([1, 0, 0, 1], [0, 1, 1, 0]),
                    ([1, 0, 1, 0], [0, 1, 0, 1]),
                    ([1, 1, 0, 0], [0, 0, 1, 1]),
                ];
                let mults: Vec<Complex64> = pairs
                    .iter()
                    .map(|(u, v)| {
                        let a = crate::triangulation::add(&s, u);
                        let b = crate::triangulation::add(&s, v);
                        sc.multiplier(&tri, 0, &a) * sc.multiplier(&tri, 0, &b)
                    })
                    .collect();
                assert!((mults[0] - mults[1]).norm() < 1e-12);
                assert!((mults[0] - mults[2]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn edge_multiplier_is_first_entry_product() {
        let tri = Triangulation::parse(include_str!("../../fixtures/one_tet.json")).unwrap();
        let (d, e) = (Complex64::new(2.0, 0.0), Complex64::new(0.0, 3.0));
        let sc = DiagonalScaling::from_free(vec![vec![d], vec![e]]);
        // vertices 0 and 1 lie on cusp 0, vertices 2 and 3 on cusp 1
        assert!((sc.multiplier(&tri, 0, &[1, 0, 1, 0]) - d * e).norm() < 1e-12);
        let id = DiagonalScaling::identity(2, 2);
        assert!((id.multiplier(&tri, 0, &[1, 0, 1, 0]) - 1.0).norm() < 1e-12);
    }
}
