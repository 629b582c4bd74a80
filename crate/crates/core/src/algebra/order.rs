use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::monomial::Monomial;
use super::registry::Registry;
use crate::error::{Error, Result};

/// A monomial order over registry variable indices. Variable lists run from
/// most to least significant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum MonomialOrder {
    Lex(Vec<usize>),
    GrevLex(Vec<usize>),
    /// Blocks compared one after another, each by grevlex. The first block
    /// is eliminated.
    Block(Vec<Vec<usize>>),
}

fn grevlex(vars: &[usize], a: &[i32], b: &[i32]) -> Ordering {
    let da: i64 = vars.iter().map(|&v| a[v] as i64).sum();
    let db: i64 = vars.iter().map(|&v| b[v] as i64).sum();
    da.cmp(&db).then_with(|| {
        for &v in vars.iter().rev() {
            if a[v] != b[v] {
                return b[v].cmp(&a[v]);
            }
        }
        Ordering::Equal
    })
}

impl MonomialOrder {
    pub fn lex(reg: &Registry) -> Self {
        MonomialOrder::Lex((0..reg.len()).collect())
    }

    pub fn grevlex(reg: &Registry) -> Self {
        MonomialOrder::GrevLex((0..reg.len()).collect())
    }

    /// Block order with `eliminate` first (in the given order) and every
    /// remaining variable, in registry order, in the second block.
    pub fn elimination(reg: &Registry, eliminate: &[usize]) -> Self {
        let rest = (0..reg.len()).filter(|v| !eliminate.contains(v)).collect();
        MonomialOrder::Block(vec![eliminate.to_vec(), rest])
    }

    /// Parses `lex`, `grevlex` or `elim:VAR,VAR,...`.
    pub fn parse(spec: &str, reg: &Registry) -> Result<Self> {
        match spec {
            "lex" => Ok(Self::lex(reg)),
            "grevlex" => Ok(Self::grevlex(reg)),
            _ => {
                let names = spec
                    .strip_prefix("elim:")
                    .ok_or_else(|| Error::Invalid(format!("unknown monomial order `{spec}`")))?;
                let vars = names
                    .split(',')
                    .map(|n| reg.var(n.trim()))
                    .collect::<Result<Vec<_>>>()?;
                Ok(Self::elimination(reg, &vars))
            }
        }
    }

    /// Variables of the first block of an elimination order.
    pub fn eliminated(&self) -> &[usize] {
        match self {
            MonomialOrder::Block(b) if b.len() > 1 => &b[0],
            _ => &[],
        }
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        let (a, b) = (a.exponents(), b.exponents());
        match self {
            MonomialOrder::Lex(vars) => {
                for &v in vars {
                    if a[v] != b[v] {
                        return a[v].cmp(&b[v]);
                    }
                }
                Ordering::Equal
            }
            MonomialOrder::GrevLex(vars) => grevlex(vars, a, b),
            MonomialOrder::Block(blocks) => {
                for blk in blocks {
                    let o = grevlex(blk, a, b);
                    if o != Ordering::Equal {
                        return o;
                    }
                }
                Ordering::Equal
            }
        }
    }

    pub fn describe(&self, reg: &Registry) -> String {
        let names = |vs: &[usize]| {
            vs.iter()
                .map(|&v| reg.name(v).to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        match self {
            MonomialOrder::Lex(v) => format!("lex({})", names(v)),
            MonomialOrder::GrevLex(v) => format!("grevlex({})", names(v)),
            MonomialOrder::Block(b) => format!(
                "block({})",
                b.iter()
                    .map(|blk| format!("grevlex({})", names(blk)))
                    .collect::<Vec<_>>()
                    .join(" > ")
            ),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[i32]) -> Monomial {
        Monomial::from_exponents(e.to_vec())
    }

    #[test]
    fn lex_and_grevlex_disagree_where_expected() {
        let reg = Registry::new(["x", "y", "z"]).unwrap();
        let lex = MonomialOrder::lex(&reg);
        let grl = MonomialOrder::grevlex(&reg);
        // x vs y^2: lex prefers x, grevlex prefers y^2
        assert_eq!(lex.cmp(&m(&[1, 0, 0]), &m(&[0, 2, 0])), Ordering::Greater);
        assert_eq!(grl.cmp(&m(&[1, 0, 0]), &m(&[0, 2, 0])), Ordering::Less);
        // x*z vs y^2 under grevlex: same degree, smaller z exponent wins
        assert_eq!(grl.cmp(&m(&[1, 0, 1]), &m(&[0, 2, 0])), Ordering::Less);
    }

    #[test]
    fn elimination_block_dominates() {
        let reg = Registry::new(["m", "l", "x"]).unwrap();
        let o = MonomialOrder::parse("elim:x", &reg).unwrap();
        assert_eq!(o.eliminated(), &[2]);
        assert_eq!(o.cmp(&m(&[0, 0, 1]), &m(&[9, 9, 0])), Ordering::Greater);
        assert_eq!(o.cmp(&m(&[2, 0, 1]), &m(&[0, 1, 1])), Ordering::Greater);
        assert!(MonomialOrder::parse("elim:q", &reg).is_err());
    }
}
