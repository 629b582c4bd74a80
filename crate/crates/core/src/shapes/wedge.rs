//! Formal sums of wedges `u ∧ v` of Laurent monomials over a symbol set, as
//! a rational vector space with torsion discarded.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::algebra::rat;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WedgeSum {
    pub symbols: Vec<String>,
    /// Coefficient of `s_i ∧ s_j` for `i < j`; zero entries are removed.
    terms: BTreeMap<(usize, usize), BigRational>,
}

impl WedgeSum {
    pub fn zero(symbols: Vec<String>) -> WedgeSum {
        WedgeSum {
            symbols,
            terms: BTreeMap::new(),
        }
    }

    /// `u ∧ v` for exponent vectors over the symbols.
    pub fn wedge(symbols: Vec<String>, u: &[i32], v: &[i32]) -> WedgeSum {
        let mut w = WedgeSum::zero(symbols);
        w.add_wedge(u, v, &BigRational::one());
        w
    }

    /// Adds `c · (u ∧ v)`.
    pub fn add_wedge(&mut self, u: &[i32], v: &[i32], c: &BigRational) {
        let n = self.symbols.len();
        for i in 0..n {
            for j in i + 1..n {
                let k = u[i] as i64 * v[j] as i64 - u[j] as i64 * v[i] as i64;
                if k != 0 {
                    self.add_basis(i, j, c * rat(k));
                }
            }
        }
    }

    fn add_basis(&mut self, i: usize, j: usize, c: BigRational) {
        let e = self.terms.entry((i, j)).or_insert_with(BigRational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&(i, j));
        }
    }

    pub fn coefficient(&self, i: usize, j: usize) -> BigRational {
        let (key, sign) = if i < j { ((i, j), 1) } else { ((j, i), -1) };
        self.terms
            .get(&key)
            .cloned()
            .unwrap_or_else(BigRational::zero)
            * rat(sign)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(usize, usize), &BigRational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &WedgeSum) -> WedgeSum {
        assert_eq!(
            self.symbols, other.symbols,
            "wedge sums over different symbols"
        );
        let mut out = self.clone();
        for (&(i, j), c) in &other.terms {
            out.add_basis(i, j, c.clone());
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> WedgeSum {
        let mut out = WedgeSum::zero(self.symbols.clone());
        if !c.is_zero() {
            for (&k, v) in &self.terms {
                out.terms.insert(k, v * c);
            }
        }
        out
    }

    pub fn neg(&self) -> WedgeSum {
        self.scale(&rat(-1))
    }

    /// Symbols occurring with a nonzero coefficient.
    pub fn support(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self.terms.keys().flat_map(|&(i, j)| [i, j]).collect();
        s.sort_unstable();
        s.dedup();
        s
    }

    /// Rewrites over `target`, sending symbol `i` to the exponent vector
    /// `images[i]` over `target`; bilinear extension.
    pub fn map(&self, target: Vec<String>, images: &[Vec<i32>]) -> WedgeSum {
        let mut out = WedgeSum::zero(target);
        for (&(i, j), c) in &self.terms {
            out.add_wedge(&images[i], &images[j], c);
        }
        out
    }

    /// Restricts to the symbols named in `keep`, failing if any other symbol
    /// survives.
    pub fn restrict(&self, keep: &[String]) -> Result<WedgeSum, Vec<String>> {
        let leftover: Vec<String> = self
            .support()
            .into_iter()
            .map(|i| self.symbols[i].clone())
            .filter(|s| !keep.contains(s))
            .collect();
        if !leftover.is_empty() {
            return Err(leftover);
        }
        let images: Vec<Vec<i32>> = self
            .symbols
            .iter()
            .map(|s| keep.iter().map(|k| i32::from(k == s)).collect())
            .collect();
        Ok(self.map(keep.to_vec(), &images))
    }
}

impl fmt::Display for WedgeSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (&(i, j), c)) in self.terms.iter().enumerate() {
            let sep = match (k, c.is_negative()) {
                (0, false) => "",
                (0, true) => "-",
                (_, false) => " + ",
                (_, true) => " - ",
            };
            let a = c.abs();
            let coeff = if a.is_one() {
                String::new()
            } else if a.is_integer() {
                format!("{} ", a.numer())
            } else {
                format!("{}/{} ", a.numer(), a.denom())
            };
            write!(f, "{sep}{coeff}{}∧{}", self.symbols[i], self.symbols[j])?;
        }
        Ok(())
    }
}

/// The Cartan matrix of type `A_{n-1}` and its exact inverse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CartanData {
    pub n: u32,
    pub a: Vec<Vec<i64>>,
    pub inverse: Vec<Vec<BigRational>>,
}

pub fn cartan_inverse(n: u32) -> CartanData {
    let k = n as usize - 1;
    let a = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| match i.abs_diff(j) {
                    0 => 2,
                    1 => -1,
                    _ => 0,
                })
                .collect()
        })
        .collect();
    // entries j(n - k)/n for j <= k, 1-based, and symmetric
    let inverse = (1..=k)
        .map(|j| {
            (1..=k)
                .map(|l| {
                    let (lo, hi) = (j.min(l), j.max(l));
                    BigRational::new(((lo * (n as usize - hi)) as i64).into(), (n as i64).into())
                })
                .collect()
        })
        .collect();
    CartanData { n, a, inverse }
}
