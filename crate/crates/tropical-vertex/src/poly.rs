//! Commutative polynomials over the rationals in declared formal symbols.
//!
//! Symbols are referenced by index; names live in the ring specification.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num::{One, Zero};

use crate::rational::{fmt_q, q, Q};

/// A monomial in the formal symbols: sorted `(symbol, exponent)` pairs.
pub type SymMono = Vec<(u16, u32)>;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Poly {
    terms: BTreeMap<SymMono, Q>,
}

fn mono_mul(x: &SymMono, y: &SymMono) -> SymMono {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() && j < y.len() {
        match x[i].0.cmp(&y[j].0) {
            std::cmp::Ordering::Less => {
                out.push(x[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(y[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                out.push((x[i].0, x[i].1 + y[j].1));
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&x[i..]);
    out.extend_from_slice(&y[j..]);
    out
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Vec::new(), c);
        }
        Poly { terms }
    }

    pub fn int(n: i64) -> Self {
        Poly::constant(q(n))
    }

    pub fn symbol(id: u16) -> Self {
        Poly::monomial(vec![(id, 1)], Q::one())
    }

    pub fn monomial(mono: SymMono, c: Q) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(mono, c);
        }
        Poly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&SymMono, &Q)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value when the polynomial has no symbol dependence.
    pub fn as_constant(&self) -> Option<Q> {
        match self.terms.len() {
            0 => Some(Q::zero()),
            1 => self.terms.get(&Vec::new()).cloned(),
            _ => None,
        }
    }

    pub fn coefficient(&self, mono: &SymMono) -> Q {
        self.terms.get(mono).cloned().unwrap_or_else(Q::zero)
    }

    pub fn add_term(&mut self, mono: SymMono, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(mono) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_assign_ref(&mut self, o: &Poly) {
        for (m, c) in &o.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let mut r = self.clone();
        r.add_assign_ref(o);
        r
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(m.clone(), -c.clone());
        }
        r
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }

    pub fn scale(&self, k: &Q) -> Poly {
        if k.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect(),
        }
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        if let Some(c) = self.as_constant() {
            return o.scale(&c);
        }
        if let Some(c) = o.as_constant() {
            return self.scale(&c);
        }
        let mut r = Poly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                r.add_term(mono_mul(m1, m2), c1 * c2);
            }
        }
        r
    }

    pub fn pow(&self, e: u32) -> Poly {
        (0..e).fold(Poly::one(), |acc, _| acc.mul(self))
    }

    /// Highest symbol index used, if any.
    pub fn max_symbol(&self) -> Option<u16> {
        self.terms.keys().flat_map(|m| m.iter().map(|(s, _)| *s)).max()
    }

    pub fn render(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                s.push_str(" + ");
            }
            let mut parts: Vec<String> = Vec::new();
            if m.is_empty() || !c.is_one() {
                parts.push(fmt_q(c));
            }
            for (id, e) in m {
                let name = names
                    .get(*id as usize)
                    .cloned()
                    .unwrap_or_else(|| format!("s{id}"));
                if *e == 1 {
                    parts.push(name);
                } else {
                    parts.push(format!("{name}^{e}"));
                }
            }
            let _ = write!(s, "{}", parts.join("*"));
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic() {
        let a = Poly::symbol(0);
        let qq = Poly::symbol(1);
        let s = a.add(&qq);
        let sq = s.mul(&s);
        let expect = a.pow(2).add(&a.mul(&qq).scale(&q(2))).add(&qq.pow(2));
        assert_eq!(sq, expect);
        assert!(s.sub(&s).is_zero());
        assert_eq!(Poly::int(3).as_constant(), Some(q(3)));
        assert_eq!(a.as_constant(), None);
    }

    #[test]
    fn rendering() {
        let names = vec!["A".to_string(), "Q".to_string()];
        let p = Poly::symbol(0).pow(2).scale(&q(2)).add(&Poly::int(-1));
        assert_eq!(p.render(&names), "-1 + 2*A^2");
    }
}
