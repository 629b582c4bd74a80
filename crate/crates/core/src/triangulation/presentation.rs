//! The face-pairing presentation of the fundamental group: one generator per
//! face pairing outside a spanning tree of the dual graph, one relator per
//! edge cycle.

use std::collections::{HashSet, VecDeque};

use super::classes::{transfer, Factor};
use super::points::edge;
use super::Triangulation;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Letter {
    /// Index into `Triangulation::gluings`.
    pub rule: usize,
    pub inverse: bool,
}

pub type Word = Vec<Letter>;

/// One crossing of a face while walking around an edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleStep {
    pub rule: usize,
    /// True when the face is crossed from the rule's source to its target.
    pub forward: bool,
    pub tet: usize,
    pub edge: (usize, usize),
    /// Vertex opposite the face being crossed.
    pub exit: usize,
}

/// The link of an edge of the triangulation, as a closed walk through the
/// tetrahedra around it.
#[derive(Debug, Clone)]
pub struct EdgeCycle {
    pub steps: Vec<CycleStep>,
}

impl EdgeCycle {
    /// Composes the transfer factors of the edge coordinate around the cycle.
    pub fn product(&self, tri: &Triangulation) -> Factor {
        let nsym = tri.eigen_names(true).len();
        let mut acc = Factor::one(nsym);
        for s in &self.steps {
            let (_, _, rule) = tri.rule_at(s.tet, s.exit);
            let (_, f) = transfer(tri, &rule, &edge(s.edge.0, s.edge.1));
            acc = acc.mul(&f);
        }
        acc
    }
}

fn norm(i: usize, j: usize) -> (usize, usize) {
    (i.min(j), i.max(j))
}

/// All edge cycles, each started at its lowest (tet, edge) occurrence.
pub fn edge_cycles(tri: &Triangulation) -> Vec<EdgeCycle> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for tet in 0..tri.tetrahedra {
        for i in 0..4 {
            for j in i + 1..4 {
                if seen.contains(&(tet, (i, j))) {
                    continue;
                }
                let exit0 = (0..4).find(|&v| v != i && v != j).unwrap();
                let start = (tet, (i, j), exit0);
                let mut state = start;
                let mut steps = Vec::new();
                loop {
                    let (k, (a, b), p) = state;
                    seen.insert((k, (a, b)));
                    let (ri, fwd, rule) = tri.rule_at(k, p);
                    steps.push(CycleStep {
                        rule: ri,
                        forward: fwd,
                        tet: k,
                        edge: (a, b),
                        exit: p,
                    });
                    let q = (0..4).find(|&v| v != a && v != b && v != p).unwrap();
                    let s = &rule.perm;
                    state = (rule.to_tet, norm(s[a], s[b]), s[q]);
                    if state == start {
                        break;
                    }
                }
                out.push(EdgeCycle { steps });
            }
        }
    }
    out
}

/// Cancels adjacent inverse pairs, then cyclically.
pub fn free_reduce(word: &[Letter]) -> Word {
    let mut out: Word = Vec::with_capacity(word.len());
    for &l in word {
        match out.last() {
            Some(&p) if p.rule == l.rule && p.inverse != l.inverse => {
                out.pop();
            }
            _ => out.push(l),
        }
    }
    out
}

fn cyclic_reduce(mut w: Word) -> Word {
    while w.len() >= 2 {
        let (f, l) = (w[0], w[w.len() - 1]);
        if f.rule == l.rule && f.inverse != l.inverse {
            w.pop();
            w.remove(0);
        } else {
            break;
        }
    }
    w
}

#[derive(Debug, Clone)]
pub struct Presentation {
    pub labels: Vec<String>,
    /// Rule indices of the spanning tree (trivial generators).
    pub tree: Vec<usize>,
    /// Rule indices of the generators.
    pub generators: Vec<usize>,
    pub relators: Vec<Word>,
    pub cycles: Vec<EdgeCycle>,
}

impl Presentation {
    pub fn render(&self, w: &[Letter]) -> String {
        if w.is_empty() {
            return "1".to_string();
        }
        w.iter()
            .map(|l| {
                let s = &self.labels[l.rule];
                if l.inverse {
                    format!("{s}^-1")
                } else {
                    s.clone()
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }

    /// Parses words like `c*a^-1*b`, `c a^-1 b` or `a^2*b^-3`; tree letters
    /// are accepted and dropped.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let mut out = Vec::new();
        for tok in text.split(|c: char| c == '*' || c.is_whitespace()) {
            if tok.is_empty() || tok == "1" {
                continue;
            }
            let (name, exp) = match tok.split_once('^') {
                Some((n, e)) => (
                    n,
                    e.trim_matches(|c| c == '(' || c == ')')
                        .parse::<i32>()
                        .map_err(|_| Error::Invalid(format!("bad exponent in `{tok}`")))?,
                ),
                None => (tok, 1),
            };
            let rule = self
                .labels
                .iter()
                .position(|l| l == name)
                .ok_or_else(|| Error::Invalid(format!("unknown generator `{name}`")))?;
            if self.tree.contains(&rule) {
                continue;
            }
            for _ in 0..exp.unsigned_abs() {
                out.push(Letter {
                    rule,
                    inverse: exp < 0,
                });
            }
        }
        Ok(free_reduce(&out))
    }
}

pub fn invert(w: &[Letter]) -> Word {
    w.iter()
        .rev()
        .map(|l| Letter {
            rule: l.rule,
            inverse: !l.inverse,
        })
        .collect()
}

fn spanning_tree(tri: &Triangulation) -> Result<Vec<usize>> {
    let mut tree = Vec::new();
    let mut reached = vec![false; tri.tetrahedra];
    if !tri.tree.is_empty() {
        // a declared tree must connect every tetrahedron without cycles
        let mut comp: Vec<usize> = (0..tri.tetrahedra).collect();
        fn root(c: &mut [usize], i: usize) -> usize {
            if c[i] == i {
                i
            } else {
                let r = root(c, c[i]);
                c[i] = r;
                r
            }
        }
        for label in &tri.tree {
            let ri = tri.gluings.iter().position(|r| &r.label == label).unwrap();
            let r = &tri.gluings[ri];
            let (a, b) = (root(&mut comp, r.tet), root(&mut comp, r.to_tet));
            if a == b {
                return Err(Error::Triangulation(format!(
                    "declared tree contains a cycle at `{label}`"
                )));
            }
            comp[a] = b;
            tree.push(ri);
        }
        if tree.len() + 1 != tri.tetrahedra {
            return Err(Error::Triangulation("declared tree is not spanning".into()));
        }
        return Ok(tree);
    }
    let mut queue = VecDeque::from([0usize]);
    reached[0] = true;
    while let Some(k) = queue.pop_front() {
        for (ri, r) in tri.gluings.iter().enumerate() {
            let other = if r.tet == k {
                r.to_tet
            } else if r.to_tet == k {
                r.tet
            } else {
                continue;
            };
            if !reached[other] {
                reached[other] = true;
                tree.push(ri);
                queue.push_back(other);
            }
        }
    }
    if reached.iter().any(|&r| !r) {
        return Err(Error::Triangulation("dual graph is disconnected".into()));
    }
    Ok(tree)
}

/// Generators and relators of the face-pairing presentation. A relator is
/// the crossings around an edge read in reverse, each forward crossing
/// contributing its letter and each backward crossing the inverse.
pub fn face_pairing_presentation(tri: &Triangulation) -> Result<Presentation> {
    let tree = spanning_tree(tri)?;
    let generators = (0..tri.gluings.len())
        .filter(|r| !tree.contains(r))
        .collect();
    let cycles = edge_cycles(tri);
    let relators = cycles
        .iter()
        .map(|c| {
            let word: Word = c
                .steps
                .iter()
                .rev()
                .filter(|s| !tree.contains(&s.rule))
                .map(|s| Letter {
                    rule: s.rule,
                    inverse: !s.forward,
                })
                .collect();
            cyclic_reduce(free_reduce(&word))
        })
        .collect();
    Ok(Presentation {
        labels: tri.gluings.iter().map(|r| r.label.clone()).collect(),
        tree,
        generators,
        relators,
        cycles,
    })
}

/// Smith normal form diagonal of an integer matrix (nonzero entries only).
pub fn smith_invariants(mut a: Vec<Vec<i64>>) -> Vec<i64> {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut out = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // pivot: smallest nonzero absolute value in the remaining block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if a[i][j] != 0 && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        let mut clean = true;
        for i in t + 1..rows {
            let q = a[i][t] / a[t][t];
            if q != 0 {
                for j in t..cols {
                    a[i][j] -= q * a[t][j];
                }
            }
            clean &= a[i][t] == 0;
        }
        for j in t + 1..cols {
            let q = a[t][j] / a[t][t];
            if q != 0 {
                for row in a.iter_mut().skip(t) {
                    row[j] -= q * row[t];
                }
            }
            clean &= a[t][j] == 0;
        }
        if !clean {
            continue;
        }
        // the pivot must divide the rest of the block
        let p = a[t][t];
        let bad = (t + 1..rows)
            .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
            .find(|&(i, j)| a[i][j] % p != 0);
        if let Some((i, _)) = bad {
            for j in t..cols {
                a[t][j] += a[i][j];
            }
            continue;
        }
        out.push(p.abs());
        t += 1;
    }
    out
}

/// Abelianization as (free rank, torsion coefficients greater than one).
pub fn abelianization(p: &Presentation) -> (usize, Vec<i64>) {
    let mat: Vec<Vec<i64>> = p
        .relators
        .iter()
        .map(|w| {
            p.generators
                .iter()
                .map(|g| {
                    w.iter()
                        .filter(|l| l.rule == *g)
                        .map(|l| if l.inverse { -1 } else { 1 })
                        .sum()
                })
                .collect()
        })
        .collect();
    let inv = smith_invariants(mat);
    let rank = p.generators.len() - inv.len();
    (rank, inv.into_iter().filter(|&d| d > 1).collect())
}
