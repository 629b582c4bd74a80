//! Text renderings of an ideal bundle: plain listing, Magma and Singular
//! elimination scripts, and a JSON form that parses back losslessly.

use serde::{Deserialize, Serialize};

use super::{IdealBundle, Mode, Provenance, Role};
use crate::algebra::{Polynomial, Registry};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Plain,
    Magma,
    Singular,
    Json,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Format> {
        match s {
            "plain" => Ok(Format::Plain),
            "magma" => Ok(Format::Magma),
            "singular" => Ok(Format::Singular),
            "json" => Ok(Format::Json),
            _ => Err(Error::Invalid(format!("unknown format `{s}`"))),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct Variable {
    name: String,
    role: Role,
}

#[derive(Serialize, Deserialize)]
struct Generator {
    polynomial: String,
    provenance: Provenance,
}

#[derive(Serialize, Deserialize)]
struct Document {
    n: u32,
    cusps: usize,
    mode: Mode,
    variables: Vec<Variable>,
    generators: Vec<Generator>,
}

/// Variables with the eliminated block (coordinates and witnesses) first.
fn elimination_layout(b: &IdealBundle) -> (Vec<String>, usize) {
    let elim = b.eliminable();
    let keep = b.vars_with(Role::Eigenvalue);
    let names = elim
        .iter()
        .chain(&keep)
        .map(|&v| b.registry.name(v).to_string())
        .collect();
    (names, elim.len())
}

fn generator_lines(b: &IdealBundle) -> Vec<String> {
    b.generators.iter().map(|g| g.to_string()).collect()
}

impl IdealBundle {
    pub fn export(&self, format: Format) -> String {
        match format {
            Format::Plain => {
                let mut out = format!(
                    "# {:?} Ptolemy ideal, n = {}, {} cusp(s)\n# variables: {}\n",
                    self.mode,
                    self.n,
                    self.cusps,
                    self.registry.names().join(", ")
                )
                .to_lowercase();
                for (g, p) in self.generators.iter().zip(&self.provenance) {
                    out.push_str(&format!("{g}    # {p}\n"));
                }
                out
            }
            Format::Magma => {
                let (names, k) = elimination_layout(self);
                format!(
                    "R<{}> := PolynomialRing(Rationals(), {}, \"elim\", {});\nI := ideal<R |\n  {}\n>;\nJ := EliminationIdeal(I, {});\nJ;\n",
                    names.join(","),
                    names.len(),
                    k,
                    generator_lines(self).join(",\n  "),
                    k
                )
            }
            Format::Singular => {
                let (names, k) = elimination_layout(self);
                let kept = names.len() - k;
                let prod = names[..k].join("*");
                let order = if kept == 0 {
                    format!("dp({k})")
                } else {
                    format!("(dp({k}), dp({kept}))")
                };
                format!(
                    "ring R = 0, ({}), {};\nideal I =\n  {};\nideal J = eliminate(I, {});\nprint(J);\n",
                    names.join(","),
                    order,
                    generator_lines(self).join(",\n  "),
                    prod
                )
            }
            Format::Json => {
                let doc = Document {
                    n: self.n,
                    cusps: self.cusps,
                    mode: self.mode,
                    variables: self
                        .registry
                        .names()
                        .iter()
                        .zip(&self.roles)
                        .map(|(name, &role)| Variable {
                            name: name.clone(),
                            role,
                        })
                        .collect(),
                    generators: self
                        .generators
                        .iter()
                        .zip(&self.provenance)
                        .map(|(g, p)| Generator {
                            polynomial: g.to_string(),
                            provenance: p.clone(),
                        })
                        .collect(),
                };
                serde_json::to_string_pretty(&doc).expect("bundle serializes")
            }
        }
    }
}

/// Reads the JSON form written by `export(Format::Json)`.
pub fn parse_json(text: &str) -> Result<IdealBundle> {
    let doc: Document = serde_json::from_str(text)?;
    let registry = Registry::new(doc.variables.iter().map(|v| v.name.clone()))?;
    let mut generators = Vec::new();
    let mut provenance = Vec::new();
    for g in doc.generators {
        generators.push(Polynomial::parse(&g.polynomial, &registry)?);
        provenance.push(g.provenance);
    }
    Ok(IdealBundle {
        roles: doc.variables.iter().map(|v| v.role).collect(),
        registry,
        generators,
        provenance,
        n: doc.n,
        cusps: doc.cusps,
        mode: doc.mode,
    })
}

#[cfg(test)]
mod tests {
    use super::super::{build_ideal, reduce_and_saturate, Saturation};
    use super::*;
    use crate::triangulation::Triangulation;

    fn bundle(n: u32) -> IdealBundle {
        let tri = Triangulation::parse(include_str!("../../fixtures/m004.json"))
            .unwrap()
            .with_n(n)
            .unwrap();
        let (b, pc) = build_ideal(&tri, Mode::Enhanced).unwrap();
        let fixes: Vec<String> = if n == 2 { vec!["y".into()] } else { vec![] };
        reduce_and_saturate(&b, &pc, &tri, &fixes, Saturation::Global).unwrap()
    }

    #[test]
    fn json_round_trip() {
        let b = bundle(2);
        assert_eq!(parse_json(&b.export(Format::Json)).unwrap(), b);
        let b3 = bundle(3);
        assert_eq!(parse_json(&b3.export(Format::Json)).unwrap(), b3);
    }

    #[test]
    fn magma_script() {
        let s = bundle(2).export(Format::Magma);
        assert!(s.starts_with("R<x,y,w,m,l> := PolynomialRing(Rationals(), 5, \"elim\", 3);"));
        assert!(s.contains("EliminationIdeal(I, 3)"));
    }

    #[test]
    fn singular_script() {
        let b = bundle(3);
        let s = b.export(Format::Singular);
        assert!(s.contains("(dp(9), dp(4))"));
        assert!(s.contains("ideal J = eliminate(I, "));
        let body = s
            .split("ideal I =")
            .nth(1)
            .unwrap()
            .split(';')
            .next()
            .unwrap();
        assert_eq!(body.split(',').count(), b.generators.len());
        assert_eq!(b.generators.len(), 8 + 1);
    }

    #[test]
    fn export_is_deterministic() {
        for f in [Format::Plain, Format::Magma, Format::Singular, Format::Json] {
            assert_eq!(bundle(2).export(f), bundle(2).export(f));
        }
    }
}
