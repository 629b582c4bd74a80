//! Fraction-free Buchberger over the integers.
//!
//! Polynomials are stored as term vectors sorted by the active monomial order
//! (largest first) with primitive integer coefficients. Reductions multiply
//! the reducend by the reducer's leading coefficient instead of dividing, and
//! the integer content is divided out after every step.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{Budget, GroebnerStats};
use crate::algebra::{Monomial, MonomialOrder};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct IPoly {
    pub terms: Vec<(Monomial, BigInt)>,
}

impl IPoly {
    pub fn lm(&self) -> &Monomial {
        &self.terms[0].0
    }

    pub fn lc(&self) -> &BigInt {
        &self.terms[0].1
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn make_primitive(&mut self) {
        if self.terms.is_empty() {
            return;
        }
        let mut g = BigInt::zero();
        for (_, c) in &self.terms {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        if self.lc().is_negative() {
            g = -g;
        }
        if !g.is_one() {
            for (_, c) in &mut self.terms {
                *c = &*c / &g;
            }
        }
    }
}

/// `a*p - b*t*g` where the leading terms cancel at position `k` of `p`.
fn combine(
    order: &MonomialOrder,
    p: &[(Monomial, BigInt)],
    k: usize,
    a: &BigInt,
    b: &BigInt,
    t: &Monomial,
    g: &[(Monomial, BigInt)],
) -> Vec<(Monomial, BigInt)> {
    let mut out = Vec::with_capacity(p.len() + g.len());
    for (m, c) in &p[..k] {
        out.push((m.clone(), c * a));
    }
    let (mut i, mut j) = (k + 1, 1);
    while i < p.len() || j < g.len() {
        let take = if i >= p.len() {
            Ordering::Less
        } else if j >= g.len() {
            Ordering::Greater
        } else {
            order.cmp(&p[i].0, &g[j].0.mul(t))
        };
        match take {
            Ordering::Greater => {
                out.push((p[i].0.clone(), &p[i].1 * a));
                i += 1;
            }
            Ordering::Less => {
                out.push((g[j].0.mul(t), -(&g[j].1 * b)));
                j += 1;
            }
            Ordering::Equal => {
                let c = &p[i].1 * a - &g[j].1 * b;
                if !c.is_zero() {
                    out.push((p[i].0.clone(), c));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out
}

pub(crate) struct Engine<'a> {
    pub order: &'a MonomialOrder,
    pub budget: &'a Budget,
    pub stats: GroebnerStats,
}

impl<'a> Engine<'a> {
    pub fn new(order: &'a MonomialOrder, budget: &'a Budget) -> Self {
        Engine {
            order,
            budget,
            stats: GroebnerStats::default(),
        }
    }

    fn over(&self, limit: &'static str, basis: usize) -> Error {
        Error::BudgetExceeded {
            limit,
            steps: self.stats.reduction_steps,
            basis,
            max_terms: self.stats.max_terms,
        }
    }

    pub fn sort(&self, terms: &mut [(Monomial, BigInt)]) {
        terms.sort_by(|a, b| self.order.cmp(&b.0, &a.0));
    }

    /// Fully reduces `p` by the polynomials `reducers` (indices into `basis`).
    /// The result is primitive and equals `c * NF(p)` for a nonzero integer `c`.
    pub fn reduce(&mut self, mut p: IPoly, basis: &[IPoly], reducers: &[usize]) -> Result<IPoly> {
        let mut pos = 0;
        loop {
            let mut hit = None;
            while pos < p.terms.len() {
                let m = &p.terms[pos].0;
                let mut best: Option<usize> = None;
                for &r in reducers {
                    if basis[r].lm().divides(m)
                        && best.is_none_or(|b| basis[r].terms.len() < basis[b].terms.len())
                    {
                        best = Some(r);
                    }
                }
                if let Some(r) = best {
                    hit = Some(r);
                    break;
                }
                pos += 1;
            }
            let Some(r) = hit else {
                p.make_primitive();
                return Ok(p);
            };
            let g = &basis[r];
            let c = &p.terms[pos].1;
            let d = c.gcd(g.lc());
            let a = g.lc() / &d;
            let b = c / &d;
            let t = p.terms[pos].0.div(g.lm());
            p.terms = combine(self.order, &p.terms, pos, &a, &b, &t, &g.terms);
            p.make_primitive();
            self.stats.reduction_steps += 1;
            self.stats.max_terms = self.stats.max_terms.max(p.terms.len());
            if self.stats.reduction_steps > self.budget.max_steps {
                return Err(self.over("reduction steps", basis.len()));
            }
            if p.terms.len() > self.budget.max_terms {
                return Err(self.over("terms per polynomial", basis.len()));
            }
        }
    }

    pub fn spoly(&self, f: &IPoly, g: &IPoly) -> IPoly {
        let l = f.lm().lcm(g.lm());
        let d = f.lc().gcd(g.lc());
        let a = g.lc() / &d;
        let b = f.lc() / &d;
        let tf = l.div(f.lm());
        let tg = l.div(g.lm());
        let fs: Vec<_> = f
            .terms
            .iter()
            .map(|(m, c)| (m.mul(&tf), c.clone()))
            .collect();
        let mut p = IPoly {
            terms: combine(self.order, &fs, 0, &a, &b, &tg, &g.terms),
        };
        p.make_primitive();
        p
    }
}

#[derive(Debug, Clone)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
}

/// Buchberger's algorithm with the Gebauer–Möller criteria and the normal
/// selection strategy (smallest lcm first, ties by index). Returns a
/// reduced basis sorted by ascending leading monomial.
pub(crate) fn buchberger(engine: &mut Engine, input: Vec<IPoly>) -> Result<Vec<IPoly>> {
    let mut basis: Vec<IPoly> = Vec::new();
    let mut active: Vec<usize> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();

    for f in input {
        let h = engine.reduce(f, &basis, &active)?;
        if !h.is_zero() {
            update(engine, &mut basis, &mut active, &mut pairs, h)?;
        }
    }

    while !pairs.is_empty() {
        let order = engine.order;
        let best = (0..pairs.len())
            .min_by(|&x, &y| {
                let (p, q) = (&pairs[x], &pairs[y]);
                p.lcm
                    .degree()
                    .cmp(&q.lcm.degree())
                    .then_with(|| order.cmp(&p.lcm, &q.lcm))
                    .then_with(|| (p.j, p.i).cmp(&(q.j, q.i)))
            })
            .unwrap();
        let pair = pairs.swap_remove(best);
        engine.stats.pairs_reduced += 1;
        let s = engine.spoly(&basis[pair.i], &basis[pair.j]);
        let h = engine.reduce(s, &basis, &active)?;
        if h.is_zero() {
            engine.stats.zero_reductions += 1;
        } else {
            if h.lm().is_one() {
                return Ok(vec![h]);
            }
            update(engine, &mut basis, &mut active, &mut pairs, h)?;
        }
    }

    interreduce(engine, &basis, &active)
}

fn update(
    engine: &mut Engine,
    basis: &mut Vec<IPoly>,
    active: &mut Vec<usize>,
    pairs: &mut Vec<Pair>,
    h: IPoly,
) -> Result<()> {
    let t = basis.len();
    if t + 1 > engine.budget.max_basis {
        return Err(engine.over("basis size", t + 1));
    }
    let hm = h.lm().clone();
    let mut c: Vec<(usize, Monomial)> = active
        .iter()
        .map(|&g| (g, basis[g].lm().lcm(&hm)))
        .collect();
    let mut d: Vec<(usize, Monomial)> = Vec::new();
    while !c.is_empty() {
        let (g1, l1) = c.remove(0);
        let coprime = basis[g1].lm().coprime(&hm);
        let dominated = c.iter().chain(d.iter()).any(|(_, l2)| l2.divides(&l1));
        if coprime || !dominated {
            d.push((g1, l1));
        } else {
            engine.stats.chain_skipped += 1;
        }
    }
    let before = pairs.len();
    pairs.retain(|p| {
        !hm.divides(&p.lcm)
            || basis[p.i].lm().lcm(&hm) == p.lcm
            || basis[p.j].lm().lcm(&hm) == p.lcm
    });
    engine.stats.chain_skipped += (before - pairs.len()) as u64;
    for (g, l) in d {
        if basis[g].lm().coprime(&hm) {
            engine.stats.product_skipped += 1;
        } else {
            pairs.push(Pair { i: g, j: t, lcm: l });
        }
    }
    active.retain(|&g| !hm.divides(basis[g].lm()));
    active.push(t);
    basis.push(h);
    engine.stats.basis_peak = engine.stats.basis_peak.max(active.len());
    Ok(())
}

fn interreduce(engine: &mut Engine, basis: &[IPoly], active: &[usize]) -> Result<Vec<IPoly>> {
    let mut out = Vec::with_capacity(active.len());
    for &g in active {
        let others: Vec<usize> = active.iter().copied().filter(|&o| o != g).collect();
        // No other leading monomial divides this one, so only the tail changes.
        out.push(engine.reduce(basis[g].clone(), basis, &others)?);
    }
    let order = engine.order;
    out.sort_by(|a, b| order.cmp(a.lm(), b.lm()));
    Ok(out)
}
