use std::fmt::Write as _;

/// A Laurent monomial stored densely: one (possibly negative) exponent per
/// registry variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<i32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, v: usize) -> Self {
        Self::var_pow(nvars, v, 1)
    }

    pub fn var_pow(nvars: usize, v: usize, e: i32) -> Self {
        let mut m = Self::one(nvars);
        m.0[v] = e;
        m
    }

    pub fn from_exponents(exps: Vec<i32>) -> Self {
        Monomial(exps)
    }

    pub fn exponents(&self) -> &[i32] {
        &self.0
    }

    pub fn exp(&self, v: usize) -> i32 {
        self.0[v]
    }

    pub fn set_exp(&mut self, v: usize, e: i32) {
        self.0[v] = e;
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn is_polynomial(&self) -> bool {
        self.0.iter().all(|&e| e >= 0)
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().map(|&e| e as i64).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn div(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn inv(&self) -> Monomial {
        Monomial(self.0.iter().map(|a| -a).collect())
    }

    pub fn pow(&self, k: i32) -> Monomial {
        Monomial(self.0.iter().map(|a| a * k).collect())
    }

    /// True when `self` divides `other` as ordinary monomials.
    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.max(b))
                .collect(),
        )
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.min(b))
                .collect(),
        )
    }

    pub fn coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e != 0)
            .map(|(i, _)| i)
    }

    /// Renders as `x^2*y^-1`; the empty product renders as `1`.
    pub fn render(&self, names: &[String]) -> String {
        let mut s = String::new();
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !s.is_empty() {
                s.push('*');
            }
            s.push_str(&names[i]);
            if e != 1 {
                let _ = write!(s, "^{e}");
            }
        }
        if s.is_empty() {
            s.push('1');
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lcm_gcd_and_divisibility() {
        let a = Monomial::from_exponents(vec![2, 0, 1]);
        let b = Monomial::from_exponents(vec![1, 3, 0]);
        assert_eq!(a.lcm(&b).exponents(), &[2, 3, 1]);
        assert_eq!(a.gcd(&b).exponents(), &[1, 0, 0]);
        assert!(a.gcd(&b).divides(&a));
        assert!(!a.divides(&b));
        assert!(!a.coprime(&b));
        assert_eq!(a.mul(&b).div(&b), a);
    }

    #[test]
    fn render_laurent() {
        let names: Vec<String> = ["m", "l"].iter().map(|s| s.to_string()).collect();
        let m = Monomial::from_exponents(vec![-2, 1]);
        assert_eq!(m.render(&names), "m^-2*l");
        assert_eq!(Monomial::one(2).render(&names), "1");
    }
}
