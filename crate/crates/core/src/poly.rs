//! Sparse integer polynomials in `t` and `s`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Serialize, Serializer};

/// Coefficients keyed by `(t-degree, s-degree)`. Zero coefficients are never
/// stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    terms: BTreeMap<(u32, u32), i64>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn add_term(&mut self, t: u32, s: u32, c: i64) {
        if c == 0 {
            return;
        }
        let e = self.terms.entry((t, s)).or_insert(0);
        *e += c;
        if *e == 0 {
            self.terms.remove(&(t, s));
        }
    }

    pub fn coeff(&self, t: u32, s: u32) -> i64 {
        self.terms.get(&(t, s)).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), i64)> + '_ {
        self.terms.iter().map(|(&k, &v)| (k, v))
    }

    pub fn neg(&self) -> Poly {
        Poly { terms: self.terms.iter().map(|(&k, &v)| (k, -v)).collect() }
    }

    fn sorted_terms(&self) -> Vec<((u32, u32), i64)> {
        let mut v: Vec<_> = self.terms().collect();
        v.sort_by_key(|&((t, s), _)| (t + s, t));
        v
    }
}

fn monomial(t: u32, s: u32) -> String {
    let var = |name: &str, d: u32| match d {
        0 => None,
        1 => Some(name.to_string()),
        _ => Some(format!("{name}^{d}")),
    };
    [var("t", t), var("s", s)].into_iter().flatten().collect::<Vec<_>>().join("*")
}

impl fmt::Display for Poly {
    /// Terms by total degree, then by `t`-degree: `1 - 2*t*s + t^2*s^2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, ((t, s), c)) in self.sorted_terms().into_iter().enumerate() {
            let m = monomial(t, s);
            let mag = c.unsigned_abs();
            let body = match (m.is_empty(), mag) {
                (true, _) => mag.to_string(),
                (false, 1) => m,
                (false, _) => format!("{mag}*{m}"),
            };
            match (k, c < 0) {
                (0, true) => write!(f, "-{body}")?,
                (0, false) => f.write_str(&body)?,
                (_, true) => write!(f, " - {body}")?,
                (_, false) => write!(f, " + {body}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for Poly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formatting() {
        let mut p = Poly::zero();
        assert_eq!(p.to_string(), "0");
        p.add_term(2, 2, 1);
        p.add_term(1, 1, -2);
        assert_eq!(p.to_string(), "-2*t*s + t^2*s^2");
        p.add_term(0, 0, 1);
        assert_eq!(p.to_string(), "1 - 2*t*s + t^2*s^2");
        let mut q = Poly::zero();
        q.add_term(0, 2, -1);
        q.add_term(1, 1, 1);
        q.add_term(3, 0, 4);
        assert_eq!(q.to_string(), "-s^2 + t*s + 4*t^3");
    }

    #[test]
    fn cancellation_removes_terms() {
        let mut p = Poly::zero();
        p.add_term(1, 0, 3);
        p.add_term(1, 0, -3);
        assert!(p.is_zero());
        assert_eq!(p, Poly::zero());
    }
}
