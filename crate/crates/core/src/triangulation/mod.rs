//! Ideal triangulations with peripheral data: parsing, validation, integral
//! point classes and the face-pairing presentation.

mod classes;
mod points;
mod presentation;

use std::collections::HashSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::Registry;
use crate::error::{Error, Result};

pub use classes::{
    build_point_classes, member_name, peripheral_multiplier, transfer, Factor, PointClass,
    PointClasses, PointKind,
};
pub use points::{
    act, add, all_permutations, edge, integral_point_count, integral_points, inverse, is_vertex,
    label, sign_multiplier, simplex_points, Perm, Point,
};
pub use presentation::{
    abelianization, edge_cycles, face_pairing_presentation, free_reduce, invert, smith_invariants,
    CycleStep, EdgeCycle, Letter, Presentation, Word,
};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CuspBasis {
    pub index: usize,
    /// `((a, b), (c, d))` with `μ' = μ^a λ^b` and `λ' = μ^c λ^d`.
    pub basis: [[i64; 2]; 2],
}

impl CuspBasis {
    pub fn determinant(&self) -> i64 {
        let [[a, b], [c, d]] = self.basis;
        a * d - b * c
    }

    /// Inverse matrix, expressing `μ, λ` in terms of `μ', λ'`.
    pub fn inverse(&self) -> [[i64; 2]; 2] {
        let [[a, b], [c, d]] = self.basis;
        let det = self.determinant();
        [[d * det, -b * det], [-c * det, a * det]]
    }
}

/// A face pairing: face `face` (the vertex opposite it) of tetrahedron `tet`
/// is glued to tetrahedron `to_tet`, vertex `v` going to `perm[v]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FacePairingRule {
    pub label: String,
    pub tet: usize,
    pub face: usize,
    pub to_tet: usize,
    pub perm: Perm,
    /// Exponents `(e_μ, e_λ)` of `M_{αv} = D_{μ'}^{e_μ} D_{λ'}^{e_λ}` per source vertex.
    pub dressing: [[i32; 2]; 4],
}

impl FacePairingRule {
    pub fn target_face(&self) -> usize {
        self.perm[self.face]
    }

    /// The same gluing read from the target side.
    pub fn reverse(&self) -> FacePairingRule {
        let inv = inverse(&self.perm);
        let mut dressing = [[0; 2]; 4];
        for (w, d) in dressing.iter_mut().enumerate() {
            let v = inv[w];
            *d = [-self.dressing[v][0], -self.dressing[v][1]];
        }
        FacePairingRule {
            label: format!("{}^-1", self.label),
            tet: self.to_tet,
            face: self.perm[self.face],
            to_tet: self.tet,
            perm: inv,
            dressing,
        }
    }
}

/// A named choice of class representative.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepresentativeSpec {
    pub name: String,
    pub tet: usize,
    pub point: Point,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Triangulation {
    pub name: String,
    #[serde(default = "default_n")]
    pub n: u32,
    pub tetrahedra: usize,
    pub cusps: Vec<CuspBasis>,
    pub vertex_cusp: Vec<[usize; 4]>,
    pub gluings: Vec<FacePairingRule>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub representatives: Vec<RepresentativeSpec>,
    /// Labels of the face pairings forming the spanning tree of the dual graph.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub tree: Vec<String>,
}

fn default_n() -> u32 {
    2
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::Triangulation(msg.into())
}

impl Triangulation {
    pub fn parse(document: &str) -> Result<Triangulation> {
        let tri: Triangulation = serde_json::from_str(document)?;
        tri.validate()?;
        Ok(tri)
    }

    pub fn with_n(&self, n: u32) -> Result<Triangulation> {
        let mut t = self.clone();
        t.n = n;
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(invalid(format!("rank n = {} is below 2", self.n)));
        }
        if self.tetrahedra == 0 {
            return Err(invalid("no tetrahedra"));
        }
        if self.vertex_cusp.len() != self.tetrahedra {
            return Err(invalid("vertex_cusp must have one row per tetrahedron"));
        }
        for (i, c) in self.cusps.iter().enumerate() {
            if c.index != i {
                return Err(invalid(format!(
                    "cusp {} listed at position {}",
                    c.index, i
                )));
            }
            if c.determinant().abs() != 1 {
                return Err(invalid(format!(
                    "cusp {} basis has determinant {}",
                    i,
                    c.determinant()
                )));
            }
        }
        for row in &self.vertex_cusp {
            if row.iter().any(|&c| c >= self.cusps.len()) {
                return Err(invalid("vertex_cusp refers to an undeclared cusp"));
            }
        }
        let mut used = HashSet::new();
        let mut labels = HashSet::new();
        for r in &self.gluings {
            if !labels.insert(r.label.as_str()) {
                return Err(invalid(format!("duplicate label `{}`", r.label)));
            }
            if r.tet >= self.tetrahedra || r.to_tet >= self.tetrahedra || r.face >= 4 {
                return Err(invalid(format!("gluing `{}` out of range", r.label)));
            }
            if !points::is_permutation(&r.perm) {
                return Err(invalid(format!(
                    "gluing `{}`: permutation {:?} is not a bijection",
                    r.label, r.perm
                )));
            }
            if r.dressing[r.face] != [0, 0] {
                return Err(invalid(format!(
                    "gluing `{}`: dressing on the vertex opposite the glued face must be (0,0)",
                    r.label
                )));
            }
            for (tet, face) in [(r.tet, r.face), (r.to_tet, r.target_face())] {
                if !used.insert((tet, face)) {
                    return Err(invalid(format!(
                        "duplicate gluing of face {face} of tetrahedron {tet} (`{}`)",
                        r.label
                    )));
                }
            }
            for v in (0..4).filter(|&v| v != r.face) {
                if self.vertex_cusp[r.tet][v] != self.vertex_cusp[r.to_tet][r.perm[v]] {
                    return Err(invalid(format!(
                        "gluing `{}` joins vertices of different cusps",
                        r.label
                    )));
                }
            }
        }
        for tet in 0..self.tetrahedra {
            for face in 0..4 {
                if !used.contains(&(tet, face)) {
                    return Err(invalid(format!(
                        "face {face} of tetrahedron {tet} is unglued"
                    )));
                }
            }
        }
        for label in &self.tree {
            if !labels.contains(label.as_str()) {
                return Err(invalid(format!("tree refers to unknown gluing `{label}`")));
            }
        }
        Ok(())
    }

    /// The same triangulation with every peripheral dressing removed, so the
    /// identification relations carry sign multipliers only.
    pub fn standard(&self) -> Triangulation {
        let mut t = self.clone();
        for r in &mut t.gluings {
            r.dressing = [[0; 2]; 4];
        }
        t
    }

    pub fn cusp_count(&self) -> usize {
        self.cusps.len()
    }

    pub fn rule(&self, label: &str) -> Option<&FacePairingRule> {
        self.gluings.iter().find(|r| r.label == label)
    }

    /// The rule gluing face `face` of `tet`, read with `tet` as source.
    pub fn rule_at(&self, tet: usize, face: usize) -> (usize, bool, FacePairingRule) {
        for (i, r) in self.gluings.iter().enumerate() {
            if r.tet == tet && r.face == face {
                return (i, true, r.clone());
            }
            if r.to_tet == tet && r.target_face() == face {
                return (i, false, r.reverse());
            }
        }
        unreachable!("validated triangulations glue every face")
    }

    /// Names of the per-cusp eigenvalue symbols, `m` block then `l` block for
    /// each cusp. `primed` selects the rectangle basis `m', l'`.
    pub fn eigen_names(&self, primed: bool) -> Vec<String> {
        let n = self.n as usize;
        let tick = if primed { "'" } else { "" };
        let mut out = Vec::new();
        for i in 0..self.cusp_count() {
            for base in ["m", "l"] {
                for j in 1..n {
                    let name = match (self.cusp_count(), n) {
                        (1, 2) => format!("{base}{tick}"),
                        (1, _) => format!("{base}{j}{tick}"),
                        (_, 2) => format!("{base}{i}{tick}"),
                        _ => format!("{base}{i}_{j}{tick}"),
                    };
                    out.push(name);
                }
            }
        }
        out
    }

    /// Index of `m_{i,j}` (`lambda = false`) or `l_{i,j}` in `eigen_names`,
    /// for `j` in `1..n`.
    pub fn eigen_index(&self, cusp: usize, lambda: bool, j: usize) -> usize {
        let k = self.n as usize - 1;
        cusp * 2 * k + if lambda { k } else { 0 } + (j - 1)
    }

    pub fn eigen_registry(&self, primed: bool) -> Arc<Registry> {
        Registry::new(self.eigen_names(primed)).expect("eigen names are distinct")
    }
}
