use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::SpineError;

/// A monomial: variable name to positive exponent.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(BTreeMap<String, u32>);

impl Monomial {
    pub fn one() -> Monomial {
        Monomial::default()
    }

    pub fn var(name: &str) -> Monomial {
        Monomial(BTreeMap::from([(name.to_string(), 1)]))
    }

    pub fn exponent(&self, var: &str) -> u32 {
        self.0.get(var).copied().unwrap_or(0)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.values().sum()
    }

    pub fn factors(&self) -> impl Iterator<Item = (&str, u32)> {
        self.0.iter().map(|(v, e)| (v.as_str(), *e))
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = self.0.clone();
        for (v, e) in &other.0 {
            *out.entry(v.clone()).or_insert(0) += e;
        }
        Monomial(out)
    }

    /// `self / other`, assuming `other` divides `self`.
    fn div(&self, other: &Monomial) -> Monomial {
        let mut out = self.0.clone();
        for (v, e) in &other.0 {
            let slot = out.get_mut(v).expect("divisor variable present");
            *slot -= e;
            if *slot == 0 {
                out.remove(v);
            }
        }
        Monomial(out)
    }

    fn without(&self, var: &str) -> Monomial {
        let mut out = self.0.clone();
        out.remove(var);
        Monomial(out)
    }

    pub fn gcd_with(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .filter_map(|(v, e)| other.0.get(v).map(|f| (v.clone(), *e.min(f))))
                .collect(),
        )
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (k, (v, e)) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            match e {
                1 => write!(f, "{v}")?,
                _ => write!(f, "{v}^{e}")?,
            }
        }
        Ok(())
    }
}

/// A polynomial over GF(2) as a set of monomials. Addition is symmetric
/// difference.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PolyGF2(BTreeSet<Monomial>);

impl PolyGF2 {
    pub fn zero() -> PolyGF2 {
        PolyGF2::default()
    }

    pub fn one() -> PolyGF2 {
        PolyGF2::from_monomial(Monomial::one())
    }

    pub fn var(name: &str) -> PolyGF2 {
        PolyGF2::from_monomial(Monomial::var(name))
    }

    pub fn from_monomial(m: Monomial) -> PolyGF2 {
        PolyGF2(BTreeSet::from([m]))
    }

    pub fn from_monomials(ms: impl IntoIterator<Item = Monomial>) -> PolyGF2 {
        let mut p = PolyGF2::zero();
        for m in ms {
            p.toggle(m);
        }
        p
    }

    /// Parses `a*d + b*y^2 + 1`. Variable names are any run of characters
    /// other than `+`, `*`, `^` and whitespace.
    pub fn parse(text: &str) -> Result<PolyGF2, SpineError> {
        let text = text.trim();
        if text == "0" {
            return Ok(PolyGF2::zero());
        }
        let mut p = PolyGF2::zero();
        for term in text.split('+') {
            let mut m = Monomial::one();
            let mut vanishes = false;
            for factor in term.split('*') {
                let factor = factor.trim();
                let (name, exp) = match factor.split_once('^') {
                    Some((n, e)) => (
                        n.trim(),
                        e.trim()
                            .parse::<u32>()
                            .map_err(|_| SpineError::Parse(text.to_string()))?,
                    ),
                    None => (factor, 1),
                };
                if name.is_empty() || name.chars().any(char::is_whitespace) {
                    return Err(SpineError::Parse(text.to_string()));
                }
                if name == "0" {
                    vanishes = true;
                }
                if name == "1" || name == "0" || exp == 0 {
                    continue;
                }
                for _ in 0..exp {
                    m = m.mul(&Monomial::var(name));
                }
            }
            if !vanishes {
                p.toggle(m);
            }
        }
        Ok(p)
    }

    fn toggle(&mut self, m: Monomial) {
        if !self.0.remove(&m) {
            self.0.insert(m);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.0.len() == 1 && self.0.iter().all(Monomial::is_one)
    }

    pub fn monomials(&self) -> impl Iterator<Item = &Monomial> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn variables(&self) -> BTreeSet<String> {
        self.0.iter().flat_map(|m| m.0.keys().cloned()).collect()
    }

    pub fn contains_var(&self, var: &str) -> bool {
        self.0.iter().any(|m| m.exponent(var) > 0)
    }

    pub fn add(&self, other: &PolyGF2) -> PolyGF2 {
        PolyGF2(self.0.symmetric_difference(&other.0).cloned().collect())
    }

    pub fn mul(&self, other: &PolyGF2) -> PolyGF2 {
        let mut out = PolyGF2::zero();
        for a in &self.0 {
            for b in &other.0 {
                out.toggle(a.mul(b));
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> PolyGF2 {
        (0..k).fold(PolyGF2::one(), |acc, _| acc.mul(self))
    }

    /// Highest power of `var` present; 0 if absent.
    pub fn degree_in(&self, var: &str) -> u32 {
        self.0.iter().map(|m| m.exponent(var)).max().unwrap_or(0)
    }

    /// Coefficients `c_k` with `self = Σ c_k var^k`.
    pub fn coefficients(&self, var: &str) -> Vec<PolyGF2> {
        let mut out = vec![PolyGF2::zero(); self.degree_in(var) as usize + 1];
        for m in &self.0 {
            out[m.exponent(var) as usize].toggle(m.without(var));
        }
        out
    }

    /// Largest monomial dividing every term; `1` for zero.
    pub fn content(&self) -> Monomial {
        let mut it = self.0.iter();
        let Some(first) = it.next() else {
            return Monomial::one();
        };
        it.fold(first.clone(), |g, m| g.gcd_with(m))
    }

    pub fn div_monomial(&self, m: &Monomial) -> PolyGF2 {
        PolyGF2(self.0.iter().map(|t| t.div(m)).collect())
    }

    /// Divides out the content.
    pub fn primitive(&self) -> PolyGF2 {
        self.div_monomial(&self.content())
    }

    /// Evaluates with each variable mapped into GF(2).
    pub fn eval_bool(&self, value: impl Fn(&str) -> bool) -> bool {
        self.0
            .iter()
            .filter(|m| m.0.keys().all(|v| value(v)))
            .count()
            % 2
            == 1
    }
}

impl fmt::Display for PolyGF2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        for (k, m) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}
