//! Both sides of the Dehn invariant formula: the sum of `z ∧ (1 - z)` over
//! certified shapes, and the Cartan-inverse pairing of boundary eigenvalues.

use std::cell::OnceCell;
use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use super::wedge::{cartan_inverse, WedgeSum};
use super::{Certificate, SymbolicCoordinates};
use crate::algebra::{rat, Monomial, MonomialOrder, Polynomial, Registry};
use crate::error::{Error, Result};
use crate::groebner::{groebner_basis, Budget, GroebnerBasis};
use crate::ideal::IdealBundle;
use crate::triangulation::{PointClasses, Triangulation};

/// How a certificate relation was shown to lie in the ideal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Membership {
    /// A monomial multiple of a generator.
    Generator,
    /// Normal form zero modulo a Gröbner basis.
    GroebnerBasis,
}

/// Everything needed to check certificates against an ideal.
pub struct CertificateContext<'a> {
    pub tri: &'a Triangulation,
    pub bundle: &'a IdealBundle,
    /// Class names, primed eigenvalue symbols, then unprimed ones.
    pub registry: Arc<Registry>,
    pub budget: Budget,
    gb: OnceCell<Result<GroebnerBasis>>,
}

impl<'a> CertificateContext<'a> {
    pub fn new(
        tri: &'a Triangulation,
        classes: &PointClasses,
        bundle: &'a IdealBundle,
        budget: Budget,
    ) -> Result<Self> {
        let mut names = classes.names();
        names.extend(tri.eigen_names(true));
        names.extend(tri.eigen_names(false));
        Ok(CertificateContext {
            tri,
            bundle,
            registry: Registry::new(names)?,
            budget,
            gb: OnceCell::new(),
        })
    }

    fn ncoords(&self) -> usize {
        self.registry.len() - 2 * self.tri.eigen_names(true).len()
    }

    /// Exponent vector of each certificate symbol over coordinates and
    /// primed eigenvalue symbols.
    fn primed_images(&self) -> (Vec<String>, Vec<Vec<i32>>) {
        let nc = self.ncoords();
        let ne = self.tri.eigen_names(true).len();
        let target: Vec<String> = self.registry.names()[..nc + ne].to_vec();
        let mut images: Vec<Vec<i32>> = (0..nc + ne)
            .map(|i| (0..nc + ne).map(|j| i32::from(i == j)).collect())
            .collect();
        let mut unprimed = vec![vec![0; nc + ne]; ne];
        let k = self.tri.n as usize - 1;
        for cusp in &self.tri.cusps {
            let [[a, b], [c, d]] = cusp.inverse();
            for j in 1..=k {
                let mi = self.tri.eigen_index(cusp.index, false, j);
                let li = self.tri.eigen_index(cusp.index, true, j);
                unprimed[mi][nc + mi] = a as i32;
                unprimed[mi][nc + li] = b as i32;
                unprimed[li][nc + mi] = c as i32;
                unprimed[li][nc + li] = d as i32;
            }
        }
        images.extend(unprimed);
        (target, images)
    }

    /// Rewrites a monomial over the certificate registry into the bundle's
    /// variables; eigenvalues absent from the bundle are set to one.
    fn to_bundle(&self, mono: &Monomial) -> Monomial {
        let nc = self.ncoords();
        let ne = self.tri.eigen_names(true).len();
        let reg = &self.bundle.registry;
        let mut out = Monomial::one(reg.len());
        let mut bump = |name: &str, e: i32| {
            if let Some(v) = reg.index(name) {
                out.set_exp(v, out.exp(v) + e);
            }
        };
        let names = self.registry.names();
        let unprimed = self.tri.eigen_names(false);
        let k = self.tri.n as usize - 1;
        for v in 0..nc {
            bump(&names[v], mono.exp(v));
        }
        for (i, name) in unprimed.iter().enumerate() {
            bump(name, mono.exp(nc + ne + i));
        }
        for cusp in &self.tri.cusps {
            let [[a, b], [c, d]] = cusp.basis;
            for j in 1..=k {
                let mi = self.tri.eigen_index(cusp.index, false, j);
                let li = self.tri.eigen_index(cusp.index, true, j);
                let (em, el) = (mono.exp(nc + mi) as i64, mono.exp(nc + li) as i64);
                bump(&unprimed[mi], (em * a + el * c) as i32);
                bump(&unprimed[li], (em * b + el * d) as i32);
            }
        }
        out
    }

    fn contains(&self, p: &Polynomial) -> Result<Option<Membership>> {
        let (p, _) = p.strip_monomial_factor();
        if p.is_zero() {
            return Ok(Some(Membership::Generator));
        }
        if self
            .bundle
            .generators
            .iter()
            .any(|g| g.strip_monomial_factor().0.associate(&p))
        {
            return Ok(Some(Membership::Generator));
        }
        let gb = self.gb.get_or_init(|| {
            groebner_basis(
                &self.bundle.generators,
                &MonomialOrder::grevlex(&self.bundle.registry),
                &self.budget,
            )
        });
        match gb {
            Ok(gb) => Ok(gb.contains(&p)?.then_some(Membership::GroebnerBasis)),
            Err(Error::BudgetExceeded {
                limit,
                steps,
                basis,
                max_terms,
            }) => Err(Error::BudgetExceeded {
                limit,
                steps: *steps,
                basis: *basis,
                max_terms: *max_terms,
            }),
            Err(e) => Err(Error::Invalid(e.to_string())),
        }
    }
}

/// A certificate whose relation was confirmed, up to the signs of `z` and
/// `1 - z` (signs are torsion and do not affect the wedge).
#[derive(Debug, Clone, Serialize)]
pub struct VerifiedCertificate {
    pub certificate: Certificate,
    #[serde(skip)]
    pub z: Monomial,
    #[serde(skip)]
    pub one_minus_z: Monomial,
    /// `(ε, δ)` with `1 - ε z - δ w` in the ideal.
    pub signs: (i8, i8),
    pub membership: Membership,
}

fn signed_monomial(text: &str, reg: &Arc<Registry>) -> Result<(i8, Monomial)> {
    let p = Polynomial::parse(text, reg)?;
    let bad = || Error::Invalid(format!("`{text}` is not a signed monomial"));
    let (m, c) = p.as_term().ok_or_else(bad)?;
    if c.is_one() {
        Ok((1, m.clone()))
    } else if *c == rat(-1) {
        Ok((-1, m.clone()))
    } else {
        Err(bad())
    }
}

pub fn verify_certificate(
    cert: &Certificate,
    ctx: &CertificateContext,
) -> Result<VerifiedCertificate> {
    let (sz, z) = signed_monomial(&cert.z, &ctx.registry)?;
    let (sw, w) = signed_monomial(&cert.one_minus_z, &ctx.registry)?;
    let reg = &ctx.bundle.registry;
    let zb = ctx.to_bundle(&z);
    let wb = ctx.to_bundle(&w);
    // the stated signs first, then the other three combinations
    let mut combos = vec![(sz, sw)];
    for e in [1i8, -1] {
        for d in [1i8, -1] {
            if (e, d) != (sz, sw) {
                combos.push((e, d));
            }
        }
    }
    for (e, d) in combos {
        let mut p = Polynomial::one(reg);
        p.add_term(zb.clone(), rat(-e as i64));
        p.add_term(wb.clone(), rat(-d as i64));
        if let Some(membership) = ctx.contains(&p.clear_denominators().0)? {
            return Ok(VerifiedCertificate {
                certificate: cert.clone(),
                z,
                one_minus_z: w,
                signs: (e, d),
                membership,
            });
        }
    }
    Err(Error::Invalid(format!(
        "certificate for tetrahedron {} subsimplex {:?} fails membership: 1 - ({}) - ({}) is not in the ideal for any signs",
        cert.tet, cert.s, cert.z, cert.one_minus_z
    )))
}

/// `Σ z ∧ (1 - z)` over the primed eigenvalue symbols; the coordinate
/// symbols must cancel.
pub fn dehn_lhs(certs: &[VerifiedCertificate], ctx: &CertificateContext) -> Result<WedgeSum> {
    let mut sum = WedgeSum::zero(ctx.registry.names().to_vec());
    for c in certs {
        sum.add_wedge(
            c.z.exponents(),
            c.one_minus_z.exponents(),
            &BigRational::one(),
        );
    }
    let (target, images) = ctx.primed_images();
    let primed = sum.map(target, &images);
    primed.restrict(&ctx.tri.eigen_names(true)).map_err(|left| {
        Error::Invalid(format!(
            "coordinate symbols {} remain after canonicalization: {primed}",
            left.join(", ")
        ))
    })
}

/// Rewrites a wedge over the primed symbols into the unprimed ones.
pub fn unprime_wedge(tri: &Triangulation, w: &WedgeSum) -> WedgeSum {
    let k = tri.n as usize - 1;
    let ne = tri.eigen_names(false).len();
    let mut images = vec![vec![0; ne]; ne];
    for cusp in &tri.cusps {
        let [[a, b], [c, d]] = cusp.basis;
        for j in 1..=k {
            let mi = tri.eigen_index(cusp.index, false, j);
            let li = tri.eigen_index(cusp.index, true, j);
            images[mi][mi] = a as i32;
            images[mi][li] = b as i32;
            images[li][mi] = c as i32;
            images[li][li] = d as i32;
        }
    }
    w.map(tri.eigen_names(false), &images)
}

/// `-Σ_{j,k} A⁻¹_{jk} m̄_j ∧ l̄_k` for one cusp, given the exponent vectors
/// of the ratios `m̄_j`, `l̄_k` (`j, k = 1..n-1`); adds into `out`.
pub fn dehn_rhs_from_bars(out: &mut WedgeSum, n: u32, m_bars: &[Vec<i32>], l_bars: &[Vec<i32>]) {
    let cartan = cartan_inverse(n);
    for (j, mb) in m_bars.iter().enumerate() {
        for (k, lb) in l_bars.iter().enumerate() {
            out.add_wedge(mb, lb, &-cartan.inverse[j][k].clone());
        }
    }
}

/// The eigenvalue side over `m_{i,j}, l_{i,j}` (or the primed symbols), with
/// `m_{i,n} = (m_{i,1} ⋯ m_{i,n-1})⁻¹` and `m̄_j = m_j / m_{j+1}`.
pub fn dehn_rhs(tri: &Triangulation, primed: bool) -> WedgeSum {
    let symbols = tri.eigen_names(primed);
    let ne = symbols.len();
    let k = tri.n as usize - 1;
    let mut out = WedgeSum::zero(symbols);
    for cusp in &tri.cusps {
        let bars = |lambda: bool| -> Vec<Vec<i32>> {
            let e = |j: usize| -> Vec<i32> {
                let mut v = vec![0; ne];
                if j <= k {
                    v[tri.eigen_index(cusp.index, lambda, j)] = 1;
                } else {
                    for i in 1..=k {
                        v[tri.eigen_index(cusp.index, lambda, i)] = -1;
                    }
                }
                v
            };
            (1..=k)
                .map(|j| e(j).iter().zip(e(j + 1)).map(|(a, b)| a - b).collect())
                .collect()
        };
        dehn_rhs_from_bars(&mut out, tri.n, &bars(false), &bars(true));
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Equal,
    EqualUpToGlobalSign,
    Different,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Equal => "equal",
            Verdict::EqualUpToGlobalSign => "equal-up-to-global-sign",
            Verdict::Different => "different",
        })
    }
}

pub fn verify_dehn_theorem(lhs: &WedgeSum, rhs: &WedgeSum) -> Verdict {
    if lhs == rhs {
        Verdict::Equal
    } else if *lhs == rhs.neg() {
        Verdict::EqualUpToGlobalSign
    } else {
        Verdict::Different
    }
}

/// Both sides in both eigenvalue bases, with the verdict for each.
#[derive(Debug, Clone, Serialize)]
pub struct DehnReport {
    pub certificates: Vec<VerifiedCertificate>,
    pub lhs_primed: String,
    pub rhs_primed: String,
    pub verdict_primed: Verdict,
    pub lhs: String,
    pub rhs: String,
    pub verdict: Verdict,
}

/// Verifies `certs` (or the certificates read off the coordinates when
/// `None`) and compares both sides of the formula.
pub fn dehn_report(
    tri: &Triangulation,
    classes: &PointClasses,
    bundle: &IdealBundle,
    certs: Option<&[Certificate]>,
    budget: Budget,
) -> Result<DehnReport> {
    let ctx = CertificateContext::new(tri, classes, bundle, budget)?;
    let auto;
    let certs = match certs {
        Some(c) => c,
        None => {
            auto = SymbolicCoordinates::new(tri, classes, true)?.shapes().1;
            &auto[..]
        }
    };
    let verified = certs
        .iter()
        .map(|c| verify_certificate(c, &ctx))
        .collect::<Result<Vec<_>>>()?;
    let lhs_primed = dehn_lhs(&verified, &ctx)?;
    let rhs_primed = dehn_rhs(tri, true);
    let lhs = unprime_wedge(tri, &lhs_primed);
    let rhs = dehn_rhs(tri, false);
    Ok(DehnReport {
        certificates: verified,
        verdict_primed: verify_dehn_theorem(&lhs_primed, &rhs_primed),
        verdict: verify_dehn_theorem(&lhs, &rhs),
        lhs_primed: lhs_primed.to_string(),
        rhs_primed: rhs_primed.to_string(),
        lhs: lhs.to_string(),
        rhs: rhs.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Vec<String> {
        vec!["a".into(), "b".into()]
    }

    #[test]
    fn bars_pair_through_the_cartan_inverse() {
        let mut w = WedgeSum::zero(ab());
        let a = vec![1, 0];
        let b = vec![0, 1];
        dehn_rhs_from_bars(&mut w, 3, &[a.clone(), a.clone()], &[b.clone(), b.clone()]);
        assert_eq!(w.to_string(), "-2 a∧b");

        let mut w = WedgeSum::zero(ab());
        dehn_rhs_from_bars(&mut w, 2, &[vec![2, 0]], &[vec![0, 2]]);
        assert_eq!(w.to_string(), "-2 a∧b");

        let mut w = WedgeSum::zero(ab());
        dehn_rhs_from_bars(&mut w, 4, &vec![vec![0, 0]; 3], &vec![vec![0, 0]; 3]);
        assert!(w.is_zero());
    }

    #[test]
    fn verdicts() {
        let z = WedgeSum::zero(ab());
        let w = WedgeSum::wedge(ab(), &[1, 0], &[0, 1]);
        assert_eq!(verify_dehn_theorem(&z, &z), Verdict::Equal);
        assert_eq!(
            verify_dehn_theorem(&w, &w.neg()),
            Verdict::EqualUpToGlobalSign
        );
        assert_eq!(
            verify_dehn_theorem(&w, &w.scale(&rat(2))),
            Verdict::Different
        );
    }
}
