//! From a triangulation to the eliminated eigenvalue ideal: build, reduce,
//! saturate, eliminate, and normalize the generators in the `m, l` symbols.

use std::fmt;

use serde::Serialize;

use crate::algebra::{Monomial, Polynomial};
use crate::error::{Error, Result};
use crate::groebner::{groebner_basis, Budget, GroebnerBasis};
use crate::ideal::{
    build_ideal, elimination_order, reduce_and_saturate, IdealBundle, Mode, Role, Saturation,
};
use crate::triangulation::Triangulation;

#[derive(Debug, Clone, Default)]
pub struct AVarietyOptions {
    pub fixes: Vec<String>,
    pub saturation: Saturation,
    pub budget: Budget,
    /// Run without fixes even though the fibers of the projection then grow.
    pub allow_unreduced: bool,
}

/// A coordinate solved rationally from a basis element linear in it.
#[derive(Debug, Clone, Serialize)]
pub struct BackSubstitution {
    pub variable: String,
    pub numerator: String,
    pub denominator: String,
}

#[derive(Debug)]
pub struct AVarietyResult {
    pub bundle: IdealBundle,
    /// Eliminated generators, monomial factors stripped, primitive.
    pub generators: Vec<Polynomial>,
    /// For one cusp at `n = 2`: the generator involving both `m` and `l`.
    pub candidate: Option<Polynomial>,
    pub support: Vec<Vec<String>>,
    pub back_substitution: Vec<BackSubstitution>,
    pub dimension_note: String,
    pub basis: Option<GroebnerBasis>,
    /// Set when the Gröbner computation stopped on its budget.
    pub failure: Option<Error>,
}

impl AVarietyResult {
    /// The unit ideal after elimination: no eigenvalue point lifts.
    pub fn is_empty(&self) -> bool {
        self.basis.as_ref().is_some_and(|b| b.is_unit())
    }
}

/// Runs the elimination pipeline on the enhanced ideal of `tri`.
pub fn compute_avariety(tri: &Triangulation, opts: &AVarietyOptions) -> Result<AVarietyResult> {
    if opts.fixes.is_empty() && !opts.allow_unreduced {
        return Err(Error::Invalid(
            "no coordinates fixed; pass fixes or allow unreduced elimination".into(),
        ));
    }
    let (raw, classes) = build_ideal(tri, Mode::Enhanced)?;
    let bundle = reduce_and_saturate(&raw, &classes, tri, &opts.fixes, opts.saturation)?;
    let eigen = bundle.vars_with(Role::Eigenvalue);
    let mut result = AVarietyResult {
        bundle: bundle.clone(),
        generators: Vec::new(),
        candidate: None,
        support: Vec::new(),
        back_substitution: Vec::new(),
        dimension_note: String::new(),
        basis: None,
        failure: None,
    };
    let order = elimination_order(&bundle);
    let gb = match groebner_basis(&bundle.generators, &order, &opts.budget) {
        Ok(gb) => gb,
        Err(e @ Error::BudgetExceeded { .. }) => {
            log::warn!("elimination stopped: {e}");
            result.dimension_note = "not computed".into();
            result.failure = Some(e);
            return Ok(result);
        }
        Err(e) => return Err(e),
    };
    let mut gens: Vec<Polynomial> = gb
        .eliminate(&eigen)?
        .iter()
        .map(|g| g.strip_monomial_factor().0.normalized())
        .collect();
    gens.dedup();
    let names = bundle.registry.names();
    result.support = gens
        .iter()
        .map(|g| g.variables().iter().map(|&v| names[v].clone()).collect())
        .collect();
    if tri.n == 2 && tri.cusp_count() == 1 {
        result.candidate = gens
            .iter()
            .find(|g| eigen.iter().all(|&v| g.involves(v)))
            .cloned();
    }
    if !gb.is_unit() {
        result.back_substitution = back_substitution(&bundle, &gb);
    }
    result.dimension_note = if gb.is_unit() {
        "empty: the eliminated ideal is the unit ideal".into()
    } else {
        format!(
            "{} kept variables, {} eliminated generators, expected dimension {}",
            eigen.len(),
            gens.len(),
            eigen.len().saturating_sub(gens.len())
        )
    };
    result.generators = gens;
    result.basis = Some(gb);
    Ok(result)
}

/// Replaces `v` by `num / den` in both `a` and `b`, scaling both by the same
/// power of `den`, so the ratio `b / a` is preserved.
fn substitute_ratio(
    a: &Polynomial,
    b: &Polynomial,
    v: usize,
    num: &Polynomial,
    den: &Polynomial,
) -> (Polynomial, Polynomial) {
    let deg = a.max_degree(v).max(b.max_degree(v)).max(0) as u32;
    let sub = |p: &Polynomial| {
        let mut out = Polynomial::zero(p.registry());
        for (m, c) in p.terms() {
            let k = m.exp(v) as u32;
            let mut rest = m.clone();
            rest.set_exp(v, 0);
            let t = &num.pow(k) * &den.pow(deg - k);
            out = &out + &t.mul_monomial(&rest).scale(c);
        }
        out
    };
    (sub(a), sub(b))
}

/// Solves coordinates one at a time from basis elements linear in them whose
/// other eliminated variables are already solved, giving each Ptolemy
/// coordinate as a ratio of eigenvalue polynomials.
fn back_substitution(bundle: &IdealBundle, gb: &GroebnerBasis) -> Vec<BackSubstitution> {
    let elim = bundle.eliminable();
    let mut solved: Vec<(usize, Polynomial, Polynomial)> = Vec::new();
    loop {
        let mut progress = false;
        for &u in &elim {
            if solved.iter().any(|s| s.0 == u) {
                continue;
            }
            let usable = |g: &&Polynomial| {
                g.max_degree(u) == 1
                    && elim
                        .iter()
                        .all(|&w| w == u || !g.involves(w) || solved.iter().any(|s| s.0 == w))
            };
            let Some(g) = gb.polys.iter().filter(usable).min_by_key(|g| g.len()) else {
                continue;
            };
            let reg = g.registry();
            let mut a = Polynomial::zero(reg);
            let mut b = Polynomial::zero(reg);
            for (m, c) in g.terms() {
                let mut rest = m.clone();
                rest.set_exp(u, 0);
                if m.exp(u) == 1 {
                    a.add_term(rest, c.clone());
                } else {
                    b.add_term(rest, -c.clone());
                }
            }
            for (w, num, den) in &solved {
                (a, b) = substitute_ratio(&a, &b, *w, num, den);
            }
            if a.is_zero() {
                continue;
            }
            let (a, ma) = a.strip_monomial_factor();
            let (b, mb) = b.strip_monomial_factor();
            let common = ma.gcd(&mb);
            solved.push((
                u,
                b.mul_monomial(&mb.div(&common)),
                a.mul_monomial(&ma.div(&common)),
            ));
            progress = true;
        }
        if !progress {
            break;
        }
    }
    let ptolemy = bundle.vars_with(Role::Ptolemy);
    let names = bundle.registry.names();
    ptolemy
        .iter()
        .filter_map(|v| solved.iter().find(|s| s.0 == *v))
        .map(|(v, num, den)| BackSubstitution {
            variable: names[*v].clone(),
            numerator: num.to_string(),
            denominator: den.to_string(),
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Symmetry {
    Symmetric,
    SymmetricUpToUnit,
    Asymmetric,
}

impl fmt::Display for Symmetry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Symmetry::Symmetric => "symmetric",
            Symmetry::SymmetricUpToUnit => "symmetric up to unit",
            Symmetry::Asymmetric => "asymmetric",
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct WeilReport {
    pub candidate: String,
    /// The candidate at `(m⁻¹, l⁻¹)`, cleared of denominators.
    pub inverted: String,
    pub symmetry: Symmetry,
    /// The candidate at `(m, l⁻¹)`, cleared, for tables using the opposite
    /// longitude orientation.
    pub longitude_flipped: String,
}

fn invert_vars(p: &Polynomial, vars: &[usize]) -> Polynomial {
    let mut q = Polynomial::zero(p.registry());
    for (m, c) in p.terms() {
        let mut e = m.clone();
        for &v in vars {
            e.set_exp(v, -m.exp(v));
        }
        q.add_term(e, c.clone());
    }
    q.clear_denominators().0.strip_monomial_factor().0
}

/// Compares `p(m, l)` with `p(m⁻¹, l⁻¹)` after clearing denominators.
pub fn weil_symmetry(p: &Polynomial, m: usize, l: usize) -> WeilReport {
    let base = p.strip_monomial_factor().0;
    let inv = invert_vars(&base, &[m, l]);
    let symmetry = if inv == base {
        Symmetry::Symmetric
    } else if inv.associate(&base) {
        Symmetry::SymmetricUpToUnit
    } else {
        Symmetry::Asymmetric
    };
    WeilReport {
        candidate: base.to_string(),
        inverted: inv.to_string(),
        symmetry,
        longitude_flipped: invert_vars(&base, &[l]).normalized().to_string(),
    }
}

/// The Weil report for the candidate of a one-cusp rank-two result.
pub fn weil_symmetry_report(result: &AVarietyResult) -> Result<WeilReport> {
    let c = result.candidate.as_ref().ok_or_else(|| {
        Error::Invalid("the symmetry report needs a one-cusp rank-two candidate".into())
    })?;
    let eig = result.bundle.vars_with(Role::Eigenvalue);
    Ok(weil_symmetry(c, eig[0], eig[1]))
}

/// A polynomial evaluated at unit eigenvalues, for comparing the enhanced
/// candidate with the boundary-unipotent locus.
pub fn at_unit_eigenvalues(p: &Polynomial, eigen: &[usize]) -> Polynomial {
    let one = Polynomial::one(p.registry());
    let mut q = p.clone();
    for &v in eigen {
        q = q.substitute(v, &one).expect("polynomial substitution");
    }
    q
}

/// Exponent vector helper used to compare monomial supports in reports.
pub fn support_of(p: &Polynomial) -> Vec<Monomial> {
    p.terms().map(|(m, _)| m.clone()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Registry;

    fn poly(s: &str) -> (Polynomial, usize, usize) {
        let reg = Registry::new(["m", "l"]).unwrap();
        (Polynomial::parse(s, &reg).unwrap(), 0, 1)
    }

    #[test]
    fn symmetry_classification() {
        let (p, m, l) = poly("l - m");
        assert_eq!(
            weil_symmetry(&p, m, l).symmetry,
            Symmetry::SymmetricUpToUnit
        );
        let (p, m, l) = poly("l - m - 1");
        assert_eq!(weil_symmetry(&p, m, l).symmetry, Symmetry::Asymmetric);
        let (p, m, l) = poly("l - m^2");
        assert_eq!(
            weil_symmetry(&p, m, l).symmetry,
            Symmetry::SymmetricUpToUnit
        );
        let (p, m, l) = poly("-m^4*l^2 + m^8*l - m^6*l - 2*m^4*l - m^2*l + l - m^4");
        let r = weil_symmetry(&p, m, l);
        assert_eq!(r.symmetry, Symmetry::Symmetric);
        assert_eq!(r.inverted, r.candidate);
    }
}
