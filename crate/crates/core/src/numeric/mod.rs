//! Numeric points of a Ptolemy ideal: triangular solving of a pinned system
//! through a lex Gröbner basis, root finding and Gauss-Newton polishing.

mod aberth;

use std::collections::BTreeMap;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::algebra::{MonomialOrder, Polynomial, Registry};
use crate::error::{Error, Result};
use crate::groebner::{groebner_basis, Budget};
use crate::ideal::{IdealBundle, Role};

pub use aberth::{aberth, horner};

/// A complex point given on every variable of a registry.
#[derive(Debug, Clone, PartialEq)]
pub struct NumericPoint {
    pub registry: Arc<Registry>,
    pub values: Vec<Complex64>,
    /// Largest scaled generator residual.
    pub residual: f64,
}

impl NumericPoint {
    pub fn value(&self, name: &str) -> Option<Complex64> {
        self.registry.index(name).map(|i| self.values[i])
    }

    /// `{"x": [re, im], ...}` over every non-witness variable.
    pub fn to_json(&self, bundle: &IdealBundle) -> String {
        let map: BTreeMap<&str, [f64; 2]> = (0..self.values.len())
            .filter(|&v| bundle.roles[v] != Role::Witness)
            .map(|v| {
                (
                    self.registry.name(v),
                    [self.values[v].re, self.values[v].im],
                )
            })
            .collect();
        serde_json::to_string_pretty(&map).expect("point serializes")
    }

    /// Reads the JSON form of `to_json`; witness values are recomputed.
    pub fn from_json(text: &str, bundle: &IdealBundle) -> Result<NumericPoint> {
        let map: BTreeMap<String, [f64; 2]> = serde_json::from_str(text)?;
        let reg = bundle.registry.clone();
        let mut values = vec![Complex64::new(f64::NAN, 0.0); reg.len()];
        for (name, [re, im]) in &map {
            values[reg.var(name)?] = Complex64::new(*re, *im);
        }
        for v in 0..reg.len() {
            if bundle.roles[v] != Role::Witness && values[v].re.is_nan() {
                return Err(Error::Invalid(format!(
                    "point gives no value for `{}`",
                    reg.name(v)
                )));
            }
        }
        fill_witnesses(bundle, &mut values);
        let residual = residual(&bundle.generators, &values);
        Ok(NumericPoint {
            registry: reg,
            values,
            residual,
        })
    }
}

/// Sets each witness `w` from a generator `w · M - 1`.
pub fn fill_witnesses(bundle: &IdealBundle, values: &mut [Complex64]) {
    for w in bundle.vars_with(Role::Witness) {
        for g in bundle
            .generators
            .iter()
            .filter(|g| g.involves(w) && g.len() == 2)
        {
            let mut rest = None;
            for (m, _) in g.terms() {
                if m.exp(w) == 1 {
                    let mut r = m.clone();
                    r.set_exp(w, 0);
                    rest = Some(r);
                }
            }
            if let Some(r) = rest {
                let p = Polynomial::monomial(g.registry(), r);
                let mut vals = values.to_vec();
                vals[w] = Complex64::new(1.0, 0.0);
                values[w] = p.eval(&vals).inv();
            }
        }
    }
}

/// Largest `|g(p)| / max(1, Σ|terms|)` over the generators.
pub fn residual(gens: &[Polynomial], values: &[Complex64]) -> f64 {
    gens.iter()
        .map(|g| g.eval(values).norm() / g.eval_magnitude(values).max(1.0))
        .fold(0.0, f64::max)
}

/// Coefficients, lowest degree first, of `p` as a polynomial in `v` once the
/// known values are substituted; `None` if another unknown occurs.
fn specialize(
    p: &Polynomial,
    v: usize,
    known: &[Option<Complex64>],
) -> Option<(Vec<Complex64>, f64)> {
    let mut coeffs = vec![Complex64::new(0.0, 0.0); (p.max_degree(v).max(0) + 1) as usize];
    let mut scale: f64 = 0.0;
    for (m, c) in p.terms() {
        let mut t = Complex64::new(num_traits::ToPrimitive::to_f64(c).unwrap_or(f64::NAN), 0.0);
        for (u, &e) in m.exponents().iter().enumerate() {
            if u == v || e == 0 {
                continue;
            }
            t *= known[u]?.powi(e);
        }
        let e = m.exp(v);
        if e < 0 {
            return None;
        }
        scale += t.norm();
        coeffs[e as usize] += t;
    }
    Some((coeffs, scale))
}

/// Value and term scale of `p` when every variable it involves is known.
fn evaluate_known(p: &Polynomial, known: &[Option<Complex64>]) -> Option<(Complex64, f64)> {
    let mut value = Complex64::new(0.0, 0.0);
    let mut scale: f64 = 0.0;
    for (m, c) in p.terms() {
        let mut t = Complex64::new(num_traits::ToPrimitive::to_f64(c).unwrap_or(f64::NAN), 0.0);
        for (u, &e) in m.exponents().iter().enumerate() {
            if e != 0 {
                t *= known[u]?.powi(e);
            }
        }
        scale += t.norm();
        value += t;
    }
    Some((value, scale))
}

const VANISH: f64 = 1e-9;

fn solve_level(
    order: &[usize],
    level: usize,
    cands: &[Polynomial],
    known: &mut Vec<Option<Complex64>>,
    out: &mut Vec<Vec<Option<Complex64>>>,
) -> Result<()> {
    // a fully determined candidate that does not vanish ends the branch
    for p in cands {
        if let Some((value, scale)) = evaluate_known(p, known) {
            if value.norm() > 1e-6 * scale {
                return Ok(());
            }
        }
    }
    if level == order.len() {
        out.push(known.clone());
        return Ok(());
    }
    let v = order[level];
    let mut polys = Vec::new();
    for p in cands.iter().filter(|p| p.involves(v)) {
        if let Some((c, scale)) = specialize(p, v, known) {
            let c = aberth::trim(&c, VANISH);
            if c.iter().all(|x| x.norm() <= VANISH * scale) {
                continue;
            }
            polys.push((c, scale));
        }
    }
    let Some(pos) = polys
        .iter()
        .enumerate()
        .filter(|(_, (c, _))| c.len() > 1)
        .min_by_key(|(_, (c, _))| c.len())
        .map(|(i, _)| i)
    else {
        return Err(Error::PositiveDimensional(format!(
            "no univariate condition determines variable {v} after pinning"
        )));
    };
    let mut roots: Vec<Complex64> = Vec::new();
    for r in aberth(&polys[pos].0)? {
        let fits = polys.iter().all(|(c, _)| {
            let (p, _) = horner(c, r);
            let mag: f64 = c
                .iter()
                .enumerate()
                .map(|(k, a)| a.norm() * r.norm().powi(k as i32))
                .sum();
            p.norm() <= 1e-6 * mag.max(1e-300)
        });
        if fits
            && !roots
                .iter()
                .any(|q| (q - r).norm() < 1e-9 * (1.0 + r.norm()))
        {
            roots.push(r);
        }
    }
    for r in roots {
        known[v] = Some(r);
        solve_level(order, level + 1, cands, known, out)?;
    }
    known[v] = None;
    Ok(())
}

/// Gauss-Newton steps on the unknowns, keeping pinned values fixed.
fn polish(gens: &[Polynomial], unknowns: &[usize], values: &mut [Complex64]) {
    let jac: Vec<Vec<Polynomial>> = gens
        .iter()
        .map(|g| unknowns.iter().map(|&v| g.derivative(v)).collect())
        .collect();
    let mut best = residual(gens, values);
    for _ in 0..8 {
        if best < 1e-15 || unknowns.is_empty() {
            break;
        }
        let j = DMatrix::from_fn(gens.len(), unknowns.len(), |r, c| jac[r][c].eval(values));
        let f = DVector::from_iterator(gens.len(), gens.iter().map(|g| -g.eval(values)));
        let Ok(step) = j.svd(true, true).solve(&f, 1e-12) else {
            break;
        };
        let mut trial = values.to_vec();
        for (k, &v) in unknowns.iter().enumerate() {
            trial[v] += step[k];
        }
        let r = residual(gens, &trial);
        if r.is_finite() && r < best {
            values.copy_from_slice(&trial);
            best = r;
        } else {
            break;
        }
    }
}

/// Solves the bundle with the given variables pinned to complex values.
/// Witnesses are dropped and replaced by the condition that every Ptolemy
/// coordinate and eigenvalue is nonzero.
pub fn solve_point(
    bundle: &IdealBundle,
    pins: &[(String, Complex64)],
    budget: &Budget,
) -> Result<Vec<NumericPoint>> {
    let reg = bundle.registry.clone();
    let witness = bundle.vars_with(Role::Witness);
    let gens: Vec<Polynomial> = bundle
        .generators
        .iter()
        .filter(|g| !witness.iter().any(|&w| g.involves(w)))
        .cloned()
        .collect();
    let mut known = vec![None; reg.len()];
    for (name, value) in pins {
        known[reg.var(name)?] = Some(*value);
    }
    let unknowns: Vec<usize> = (0..reg.len())
        .filter(|&v| known[v].is_none() && !witness.contains(&v))
        .collect();
    let pinned: Vec<usize> = (0..reg.len()).filter(|&v| known[v].is_some()).collect();
    let lex: Vec<usize> = witness
        .iter()
        .chain(&unknowns)
        .chain(&pinned)
        .copied()
        .collect();
    let gb = groebner_basis(&gens, &MonomialOrder::Lex(lex), budget)?;
    if gb.is_unit() {
        return Ok(Vec::new());
    }
    let mut cands = gb.polys.clone();
    cands.extend(gens.iter().cloned());
    let order: Vec<usize> = unknowns.iter().rev().copied().collect();
    let mut raw = Vec::new();
    solve_level(&order, 0, &cands, &mut known, &mut raw)?;

    let guarded: Vec<usize> = (0..reg.len()).filter(|v| !witness.contains(v)).collect();
    let mut points: Vec<NumericPoint> = Vec::new();
    for sol in raw {
        let mut values: Vec<Complex64> = sol
            .iter()
            .map(|x| x.unwrap_or(Complex64::new(0.0, 0.0)))
            .collect();
        polish(&gens, &unknowns, &mut values);
        if guarded.iter().any(|&v| values[v].norm() < 1e-8) {
            continue;
        }
        fill_witnesses(bundle, &mut values);
        let res = residual(&gens, &values);
        if res > 1e-6 {
            log::warn!("dropping a root with residual {res:.2e}");
            continue;
        }
        let dup = points.iter().any(|p| {
            p.values
                .iter()
                .zip(&values)
                .all(|(a, b)| (a - b).norm() < 1e-7 * (1.0 + a.norm()))
        });
        if !dup {
            points.push(NumericPoint {
                registry: reg.clone(),
                values,
                residual: res,
            });
        }
    }
    Ok(points)
}
