//! Identification classes of integral points under face pairings.
//!
//! Each union edge says `c_{σ·t, target} = sign · multiplier · c_{t, source}`;
//! the union-find keeps, for every node, the factor relating its coordinate
//! to its parent's, so closing a cycle can be checked exactly.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use super::points::{act, integral_points, inverse, label, sign_multiplier, Point};
use super::{FacePairingRule, Triangulation};
use crate::algebra::{Monomial, Registry};
use crate::error::{Error, Result};

/// A sign together with a Laurent monomial in the primed eigenvalue symbols.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Factor {
    pub sign: i8,
    pub mono: Monomial,
}

impl Factor {
    pub fn one(nsym: usize) -> Factor {
        Factor {
            sign: 1,
            mono: Monomial::one(nsym),
        }
    }

    pub fn mul(&self, other: &Factor) -> Factor {
        Factor {
            sign: self.sign * other.sign,
            mono: self.mono.mul(&other.mono),
        }
    }

    pub fn inv(&self) -> Factor {
        Factor {
            sign: self.sign,
            mono: self.mono.inv(),
        }
    }

    pub fn is_one(&self) -> bool {
        self.sign == 1 && self.mono.is_one()
    }

    pub fn render(&self, names: &[String]) -> String {
        let m = self.mono.render(names);
        match (self.sign, m.as_str()) {
            (1, _) => m,
            (_, "1") => "-1".to_string(),
            _ => format!("-{m}"),
        }
    }
}

/// `c(M_α)_t`: for each source vertex `v`, the product of the first `t_v`
/// diagonal entries of `M_{αv}`, written over the primed eigenvalue symbols.
pub fn peripheral_multiplier(tri: &Triangulation, rule: &FacePairingRule, t: &Point) -> Monomial {
    let n = tri.n as usize;
    let mut mono = Monomial::one(tri.eigen_names(true).len());
    for v in 0..4 {
        let [em, el] = rule.dressing[v];
        let tv = t[v] as usize;
        // the product of all n entries of a determinant-one diagonal matrix is 1
        if (em == 0 && el == 0) || tv == 0 || tv >= n {
            continue;
        }
        let cusp = tri.vertex_cusp[rule.tet][v];
        for j in 1..=tv {
            let mi = tri.eigen_index(cusp, false, j);
            let li = tri.eigen_index(cusp, true, j);
            mono.set_exp(mi, mono.exp(mi) + em);
            mono.set_exp(li, mono.exp(li) + el);
        }
    }
    mono
}

/// Pushes the point `t` of the rule's source tetrahedron across the face:
/// returns `σ·t` and the factor `F` with `c_{σ·t, target} = F · c_{t, source}`.
pub fn transfer(tri: &Triangulation, rule: &FacePairingRule, t: &Point) -> (Point, Factor) {
    let sign = sign_multiplier(&inverse(&rule.perm), t);
    let mono = peripheral_multiplier(tri, rule, t);
    (act(&rule.perm, t), Factor { sign, mono })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointKind {
    Edge,
    Face,
    Interior,
}

#[derive(Debug, Clone)]
pub struct PointClass {
    /// Variable name of the representative.
    pub name: String,
    /// `members[0]` is the representative.
    pub members: Vec<(usize, Point)>,
    /// `c_member = factors[i] · c_representative`.
    pub factors: Vec<Factor>,
}

impl PointClass {
    pub fn representative(&self) -> (usize, Point) {
        self.members[0]
    }

    pub fn kind(&self) -> PointKind {
        match self.members[0].1.iter().filter(|&&x| x != 0).count() {
            2 => PointKind::Edge,
            3 => PointKind::Face,
            _ => PointKind::Interior,
        }
    }
}

pub fn member_name(tet: usize, t: &Point) -> String {
    format!("c_{}_{}", label(t), tet)
}

#[derive(Debug, Clone)]
pub struct PointClasses {
    pub n: u32,
    /// Primed eigenvalue symbols the factor monomials are written over.
    pub symbols: Arc<Registry>,
    pub classes: Vec<PointClass>,
    /// Number of union edges that closed a cycle and were checked.
    pub cycle_checks: usize,
    lookup: HashMap<(usize, Point), (usize, usize)>,
}

struct UnionFind {
    parent: Vec<usize>,
    weight: Vec<Factor>,
}

impl UnionFind {
    fn find(&mut self, i: usize) -> (usize, Factor) {
        let p = self.parent[i];
        if p == i {
            return (i, self.weight[i].clone());
        }
        let (root, wp) = self.find(p);
        let w = self.weight[i].mul(&wp);
        self.parent[i] = root;
        self.weight[i] = w.clone();
        (root, w)
    }
}

/// Builds the identification classes for `tri` at rank `tri.n`.
pub fn build_point_classes(tri: &Triangulation) -> Result<PointClasses> {
    let pts = integral_points(tri.n);
    let nsym = tri.eigen_names(true).len();
    let per = pts.len();
    let index: HashMap<Point, usize> = pts.iter().enumerate().map(|(i, t)| (*t, i)).collect();
    let node = |tet: usize, t: &Point| tet * per + index[t];
    let total = tri.tetrahedra * per;
    let mut uf = UnionFind {
        parent: (0..total).collect(),
        weight: vec![Factor::one(nsym); total],
    };
    let mut cycle_checks = 0;
    let symbols = tri.eigen_registry(true);

    for rule in &tri.gluings {
        for t in pts.iter().filter(|t| t[rule.face] == 0) {
            let (s, f) = transfer(tri, rule, t);
            let u = node(rule.to_tet, &s);
            let v = node(rule.tet, t);
            let (ru, wu) = uf.find(u);
            let (rv, wv) = uf.find(v);
            // c_u = wu c_ru, c_v = wv c_rv, c_u = f c_v
            if ru == rv {
                cycle_checks += 1;
                let closing = wu.inv().mul(&f).mul(&wv);
                if !closing.is_one() {
                    return Err(Error::CycleInconsistency {
                        tet: rule.tet,
                        point: *t,
                        detail: format!(
                            "gluing `{}` closes a cycle with factor {}",
                            rule.label,
                            closing.render(symbols.names())
                        ),
                    });
                }
            } else {
                uf.parent[ru] = rv;
                uf.weight[ru] = f.mul(&wv).mul(&wu.inv());
            }
        }
    }

    let mut groups: HashMap<usize, Vec<(usize, Point, Factor)>> = HashMap::new();
    let mut roots_in_order = Vec::new();
    for tet in 0..tri.tetrahedra {
        for t in &pts {
            let (r, w) = uf.find(node(tet, t));
            let g = groups.entry(r).or_default();
            if g.is_empty() {
                roots_in_order.push(r);
            }
            g.push((tet, *t, w));
        }
    }

    let specs: Vec<_> = tri
        .representatives
        .iter()
        .filter(|spec| spec.point.iter().sum::<u32>() == tri.n)
        .collect();
    let mut classes = Vec::new();
    for r in roots_in_order {
        let mut members = groups.remove(&r).unwrap();
        members.sort_by_key(|a| (a.0, a.1));
        let chosen = specs
            .iter()
            .find(|spec| members.iter().any(|m| m.0 == spec.tet && m.1 == spec.point));
        let (rep_pos, name) = match chosen {
            Some(spec) => (
                members
                    .iter()
                    .position(|m| m.0 == spec.tet && m.1 == spec.point)
                    .unwrap(),
                spec.name.clone(),
            ),
            None => (0, member_name(members[0].0, &members[0].1)),
        };
        let rep = members.remove(rep_pos);
        members.insert(0, rep);
        let base = members[0].2.inv();
        classes.push(PointClass {
            name,
            factors: members.iter().map(|m| m.2.mul(&base)).collect(),
            members: members.iter().map(|m| (m.0, m.1)).collect(),
        });
    }
    // named representatives first, in the order they are declared
    classes.sort_by_key(|c| {
        specs
            .iter()
            .position(|s| c.members[0] == (s.tet, s.point))
            .unwrap_or(usize::MAX)
    });
    for spec in &specs {
        if !classes
            .iter()
            .any(|c| c.members[0] == (spec.tet, spec.point))
        {
            return Err(Error::Triangulation(format!(
                "representative `{}` shares a class with another representative at n = {}",
                spec.name, tri.n
            )));
        }
    }

    let mut lookup = HashMap::new();
    for (ci, c) in classes.iter().enumerate() {
        for (mi, m) in c.members.iter().enumerate() {
            lookup.insert(*m, (ci, mi));
        }
    }
    Ok(PointClasses {
        n: tri.n,
        symbols,
        classes,
        cycle_checks,
        lookup,
    })
}

impl PointClasses {
    /// Class index and transfer factor of `c_{t,tet}`.
    pub fn class_of(&self, tet: usize, t: &Point) -> (usize, &Factor) {
        let (c, m) = self.lookup[&(tet, *t)];
        (c, &self.classes[c].factors[m])
    }

    pub fn names(&self) -> Vec<String> {
        self.classes.iter().map(|c| c.name.clone()).collect()
    }

    /// Resolves a representative name or any member name `c_<t>_<tet>`.
    pub fn resolve(&self, name: &str) -> Option<(usize, &Factor)> {
        if let Some(ci) = self.classes.iter().position(|c| c.name == name) {
            return Some((ci, &self.classes[ci].factors[0]));
        }
        let rest = name.strip_prefix("c_")?;
        let (digits, tet) = rest.split_once('_')?;
        let tet: usize = tet.parse().ok()?;
        if digits.len() != 4 {
            return None;
        }
        let mut t = [0u32; 4];
        for (i, ch) in digits.chars().enumerate() {
            t[i] = ch.to_digit(10)?;
        }
        self.lookup
            .get(&(tet, t))
            .map(|&(c, m)| (c, &self.classes[c].factors[m]))
    }

    pub fn total_members(&self) -> usize {
        self.classes.iter().map(|c| c.members.len()).sum()
    }
}

impl fmt::Display for PointClasses {
    /// One line per non-representative member: `c_<t>_<tet> = factor*rep`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.classes {
            for ((tet, t), fac) in c.members.iter().zip(&c.factors).skip(1) {
                let r = fac.render(self.symbols.names());
                let coeff = match r.as_str() {
                    "1" => String::new(),
                    "-1" => "-".to_string(),
                    _ => format!("{r}*"),
                };
                writeln!(f, "{} = {}{}", member_name(*tet, t), coeff, c.name)?;
            }
        }
        Ok(())
    }
}
