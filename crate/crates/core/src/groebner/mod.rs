//! Gröbner bases, normal forms, elimination and ideal membership.

mod engine;

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::algebra::{Monomial, MonomialOrder, Polynomial, Registry};
use crate::error::{Error, Result};
use engine::{Engine, IPoly};

/// Resource limits for a Buchberger run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Budget {
    pub max_steps: u64,
    pub max_basis: usize,
    pub max_terms: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_steps: 1_000_000,
            max_basis: 100_000,
            max_terms: 20_000,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct GroebnerStats {
    pub reduction_steps: u64,
    pub pairs_reduced: u64,
    pub zero_reductions: u64,
    pub product_skipped: u64,
    pub chain_skipped: u64,
    pub basis_peak: usize,
    pub max_terms: usize,
}

/// A reduced Gröbner basis: primitive integer coefficients, positive leading
/// coefficients, sorted by ascending leading monomial.
#[derive(Debug, Clone)]
pub struct GroebnerBasis {
    pub registry: Arc<Registry>,
    pub order: MonomialOrder,
    pub polys: Vec<Polynomial>,
    pub stats: GroebnerStats,
}

fn to_ipoly(p: &Polynomial, engine: &Engine) -> Result<IPoly> {
    if !p.is_polynomial() {
        return Err(Error::NotPolynomial(p.to_string()));
    }
    let q = p.primitive(engine.order);
    let mut terms: Vec<(Monomial, BigInt)> = q
        .terms()
        .map(|(m, c)| (m.clone(), c.numer().clone()))
        .collect();
    engine.sort(&mut terms);
    Ok(IPoly { terms })
}

fn from_ipoly(p: &IPoly, reg: &Arc<Registry>) -> Polynomial {
    Polynomial::from_terms(
        reg,
        p.terms
            .iter()
            .map(|(m, c)| (m.clone(), BigRational::from_integer(c.clone()))),
    )
}

/// Computes the reduced Gröbner basis of the ideal generated by `gens`.
pub fn groebner_basis(
    gens: &[Polynomial],
    order: &MonomialOrder,
    budget: &Budget,
) -> Result<GroebnerBasis> {
    let reg = match gens.first() {
        Some(g) => g.registry().clone(),
        None => return Err(Error::Invalid("empty generator list".into())),
    };
    let mut engine = Engine::new(order, budget);
    let mut input = Vec::new();
    for g in gens {
        if !Arc::ptr_eq(g.registry(), &reg) && **g.registry() != *reg {
            return Err(Error::RegistryMismatch);
        }
        if !g.is_zero() {
            input.push(to_ipoly(g, &engine)?);
        }
    }
    let basis = if input.is_empty() {
        Vec::new()
    } else {
        engine::buchberger(&mut engine, input)?
    };
    let polys = basis.iter().map(|p| from_ipoly(p, &reg)).collect();
    log::debug!(
        "groebner basis under {}: {} polynomials, {:?}",
        order.describe(&reg),
        basis.len(),
        engine.stats
    );
    Ok(GroebnerBasis {
        registry: reg,
        order: order.clone(),
        polys,
        stats: engine.stats,
    })
}

/// Normal form of `f` with respect to `basis` over the rationals: the unique
/// remainder when `basis` is a Gröbner basis for `order`.
pub fn normal_form(f: &Polynomial, basis: &[Polynomial], order: &MonomialOrder) -> Polynomial {
    let leads: Vec<(Monomial, BigRational)> = basis
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| {
            let (m, c) = g.leading(order).unwrap();
            (m.clone(), c.clone())
        })
        .collect();
    let reducers: Vec<&Polynomial> = basis.iter().filter(|g| !g.is_zero()).collect();
    let mut p = f.clone();
    let mut rem = Polynomial::zero(f.registry());
    while let Some((m, c)) = p.leading(order).map(|(m, c)| (m.clone(), c.clone())) {
        match leads.iter().position(|(lm, _)| lm.divides(&m)) {
            Some(k) => {
                let t = m.div(&leads[k].0);
                let q = &c / &leads[k].1;
                p = &p - &reducers[k].mul_monomial(&t).scale(&q);
            }
            None => {
                let term = Polynomial::term(f.registry(), m, c);
                rem = &rem + &term;
                p = &p - &term;
            }
        }
    }
    rem
}

fn spoly(f: &Polynomial, g: &Polynomial, order: &MonomialOrder) -> Polynomial {
    let (mf, cf) = f.leading(order).unwrap();
    let (mg, cg) = g.leading(order).unwrap();
    let l = mf.lcm(mg);
    let a = f.mul_monomial(&l.div(mf)).scale(&cf.recip());
    let b = g.mul_monomial(&l.div(mg)).scale(&cg.recip());
    &a - &b
}

/// Outcome of checking that every S-polynomial reduces to zero.
#[derive(Debug, Clone, Serialize)]
pub struct SPairAudit {
    pub pairs_checked: usize,
    pub failures: Vec<(usize, usize)>,
}

impl SPairAudit {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl GroebnerBasis {
    pub fn is_unit(&self) -> bool {
        self.polys.len() == 1 && self.polys[0].is_constant()
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.polys
            .iter()
            .map(|p| p.leading(&self.order).unwrap().0.clone())
            .collect()
    }

    pub fn normal_form(&self, f: &Polynomial) -> Result<Polynomial> {
        let f = f.rebase(&self.registry)?;
        Ok(normal_form(&f, &self.polys, &self.order))
    }

    /// Membership test; Laurent input is first cleared of denominators,
    /// which is sound whenever the variables are units modulo the ideal.
    pub fn contains(&self, f: &Polynomial) -> Result<bool> {
        let (f, _) = f.rebase(&self.registry)?.clear_denominators();
        Ok(normal_form(&f, &self.polys, &self.order).is_zero())
    }

    /// Elements not involving any variable in `vars`.
    pub fn free_of(&self, vars: &[usize]) -> Vec<Polynomial> {
        self.polys
            .iter()
            .filter(|p| vars.iter().all(|&v| !p.involves(v)))
            .cloned()
            .collect()
    }

    /// Elements supported on `keep`: the elimination ideal, provided the
    /// order eliminates exactly the complement of `keep`.
    pub fn eliminate(&self, keep: &[usize]) -> Result<Vec<Polynomial>> {
        let mut drop: Vec<usize> = (0..self.registry.len())
            .filter(|v| !keep.contains(v))
            .collect();
        drop.sort_unstable();
        let eliminates = |prefixes: Vec<Vec<usize>>| {
            prefixes.into_iter().any(|mut p| {
                p.sort_unstable();
                p == drop
            })
        };
        let ok = drop.is_empty()
            || match &self.order {
                MonomialOrder::Lex(vars) => {
                    eliminates((0..=vars.len()).map(|k| vars[..k].to_vec()).collect())
                }
                MonomialOrder::Block(blocks) => {
                    eliminates((0..=blocks.len()).map(|k| blocks[..k].concat()).collect())
                }
                MonomialOrder::GrevLex(_) => false,
            };
        if !ok {
            return Err(Error::Invalid(format!(
                "order {} does not eliminate the complement of the kept variables",
                self.order.describe(&self.registry)
            )));
        }
        Ok(self.free_of(&drop))
    }

    pub fn s_pair_audit(&self) -> SPairAudit {
        let mut failures = Vec::new();
        let n = self.polys.len();
        for i in 0..n {
            for j in i + 1..n {
                let s = spoly(&self.polys[i], &self.polys[j], &self.order);
                if !normal_form(&s, &self.polys, &self.order).is_zero() {
                    failures.push((i, j));
                }
            }
        }
        SPairAudit {
            pairs_checked: n * n.saturating_sub(1) / 2,
            failures,
        }
    }

    /// Reducedness: no leading monomial divides any term of another element,
    /// and all leading coefficients are positive integers with content one.
    pub fn is_reduced(&self) -> bool {
        let leads = self.leading_monomials();
        for (i, p) in self.polys.iter().enumerate() {
            if p.primitive(&self.order) != *p {
                return false;
            }
            for (j, lm) in leads.iter().enumerate() {
                if i != j && p.terms().any(|(m, _)| lm.divides(m)) {
                    return false;
                }
            }
        }
        true
    }
}

/// Generators of the elimination ideal `I ∩ Q[remaining variables]`.
pub fn elimination_ideal(
    gens: &[Polynomial],
    eliminate: &[usize],
    budget: &Budget,
) -> Result<(Vec<Polynomial>, GroebnerBasis)> {
    let reg = gens
        .first()
        .ok_or_else(|| Error::Invalid("empty generator list".into()))?
        .registry()
        .clone();
    let order = MonomialOrder::elimination(&reg, eliminate);
    let gb = groebner_basis(gens, &order, budget)?;
    Ok((gb.free_of(eliminate), gb))
}

/// Whether `f` lies in the ideal generated by `gens`.
pub fn ideal_membership(f: &Polynomial, gens: &[Polynomial], budget: &Budget) -> Result<bool> {
    let reg = f.registry();
    let gb = groebner_basis(gens, &MonomialOrder::grevlex(reg), budget)?;
    gb.contains(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup(names: &[&str], gens: &[&str]) -> (Arc<Registry>, Vec<Polynomial>) {
        let reg = Registry::new(names.iter().copied()).unwrap();
        let g = gens
            .iter()
            .map(|s| Polynomial::parse(s, &reg).unwrap())
            .collect();
        (reg, g)
    }

    #[test]
    fn textbook_lex_basis() {
        // Cox-Little-O'Shea: <x^2 + y^2 + z^2 - 1, x^2 + z^2 - y, x - z> under lex
        let (reg, g) = setup(
            &["x", "y", "z"],
            &["x^2 + y^2 + z^2 - 1", "x^2 + z^2 - y", "x - z"],
        );
        let gb = groebner_basis(&g, &MonomialOrder::lex(&reg), &Budget::default()).unwrap();
        let expect: Vec<Polynomial> = ["4*z^4 + 2*z^2 - 1", "y - 2*z^2", "x - z"]
            .iter()
            .map(|s| Polynomial::parse(s, &reg).unwrap())
            .collect();
        assert_eq!(gb.polys, expect);
        assert!(gb.s_pair_audit().passed());
        assert!(gb.is_reduced());
    }

    #[test]
    fn unit_ideal_collapses() {
        let (reg, g) = setup(&["x", "y"], &["x*y - 1", "x"]);
        let gb = groebner_basis(&g, &MonomialOrder::grevlex(&reg), &Budget::default()).unwrap();
        assert!(gb.is_unit());
    }

    #[test]
    fn twisted_cubic_elimination() {
        let (reg, g) = setup(&["t", "x", "y", "z"], &["x - t", "y - t^2", "z - t^3"]);
        let (elim, _) = elimination_ideal(&g, &[0], &Budget::default()).unwrap();
        for e in &elim {
            assert!(!e.involves(0));
        }
        let xy = Polynomial::parse("x^2 - y", &reg).unwrap();
        let yz = Polynomial::parse("y^2 - x*z", &reg).unwrap();
        let gb = groebner_basis(&elim, &MonomialOrder::grevlex(&reg), &Budget::default()).unwrap();
        assert!(gb.contains(&xy).unwrap());
        assert!(gb.contains(&yz).unwrap());
        assert!(!gb
            .contains(&Polynomial::parse("x - y", &reg).unwrap())
            .unwrap());
    }

    #[test]
    fn budget_is_enforced() {
        let (reg, g) = setup(
            &["x", "y", "z"],
            &["x^3 - 2*x*y", "x^2*y - 2*y^2 + x", "z^2*x - y^3 + 1"],
        );
        let tight = Budget {
            max_steps: 5,
            ..Budget::default()
        };
        let r = groebner_basis(&g, &MonomialOrder::lex(&reg), &tight);
        assert!(matches!(r, Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn membership_and_normal_form() {
        let (reg, g) = setup(&["x", "y"], &["x^2 - y", "y^2 - 1"]);
        let f = Polynomial::parse("x^4 - 1", &reg).unwrap();
        assert!(ideal_membership(&f, &g, &Budget::default()).unwrap());
        let h = Polynomial::parse("x^3", &reg).unwrap();
        let gb = groebner_basis(&g, &MonomialOrder::lex(&reg), &Budget::default()).unwrap();
        assert_eq!(
            gb.normal_form(&h).unwrap(),
            Polynomial::parse("x*y", &reg).unwrap()
        );
    }

    #[test]
    fn laurent_generators_rejected() {
        let (reg, g) = setup(&["x"], &["x^-1 - 1"]);
        assert!(matches!(
            groebner_basis(&g, &MonomialOrder::lex(&reg), &Budget::default()),
            Err(Error::NotPolynomial(_))
        ));
    }

    #[test]
    fn normal_form_examples() {
        let (reg, g) = setup(&["x", "y"], &["x - y", "x"]);
        let lex = MonomialOrder::lex(&reg);
        let f = Polynomial::parse("x^2 + y", &reg).unwrap();
        assert_eq!(normal_form(&f, &g[..1], &lex).to_string(), "y^2 + y");
        let x2 = Polynomial::parse("x^2", &reg).unwrap();
        assert!(normal_form(&x2, &g[1..], &lex).is_zero());
    }

    #[test]
    fn small_lex_basis() {
        let (reg, g) = setup(&["x", "y"], &["x*y - 1", "y^2 - 1"]);
        let gb = groebner_basis(&g, &MonomialOrder::lex(&reg), &Budget::default()).unwrap();
        let shown: Vec<String> = gb.polys.iter().map(|p| p.to_string()).collect();
        assert_eq!(shown, ["y^2 - 1", "x - y"]);
        let (_, single) = setup(&["x"], &["x^2 - 1"]);
        let gb = groebner_basis(
            &single,
            &MonomialOrder::lex(single[0].registry()),
            &Budget::default(),
        )
        .unwrap();
        assert_eq!(gb.polys, single);
    }

    #[test]
    fn eliminate_checks_the_order() {
        let (reg, g) = setup(&["x", "y"], &["y - x^2", "x - 2"]);
        let gb = groebner_basis(&g, &MonomialOrder::lex(&reg), &Budget::default()).unwrap();
        let kept: Vec<String> = gb
            .eliminate(&[1])
            .unwrap()
            .iter()
            .map(|p| p.to_string())
            .collect();
        assert_eq!(kept, ["y - 4"]);
        assert!(gb.eliminate(&[0]).is_err());
        let (reg, g) = setup(&["x", "y"], &["x^2 + y^2 - 1", "x - y"]);
        let gb = groebner_basis(
            &g,
            &MonomialOrder::elimination(&reg, &[0]),
            &Budget::default(),
        )
        .unwrap();
        let kept: Vec<String> = gb
            .eliminate(&[1])
            .unwrap()
            .iter()
            .map(|p| p.to_string())
            .collect();
        assert_eq!(kept, ["2*y^2 - 1"]);
        let gr = groebner_basis(&g, &MonomialOrder::grevlex(&reg), &Budget::default()).unwrap();
        assert!(gr.eliminate(&[1]).is_err());
    }
}
