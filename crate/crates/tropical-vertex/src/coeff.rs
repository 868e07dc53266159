//! Series coefficients: square matrices of symbol polynomials.
//!
//! Rank one covers both plain rationals and the commuting-symbol mode.
//! Arithmetic between a rank-one value and a rank-`r` value treats the
//! former as a multiple of the identity.

use crate::poly::Poly;
use crate::rational::Q;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coeff {
    r: usize,
    e: Vec<Poly>,
}

impl Coeff {
    pub fn zero(r: usize) -> Self {
        assert!(r >= 1, "matrix rank must be positive");
        Coeff { r, e: vec![Poly::zero(); r * r] }
    }

    /// `p` times the identity of rank `r`.
    pub fn diag(r: usize, p: Poly) -> Self {
        let mut c = Coeff::zero(r);
        for i in 0..r {
            c.e[i * r + i] = p.clone();
        }
        c
    }

    pub fn identity(r: usize) -> Self {
        Coeff::diag(r, Poly::one())
    }

    pub fn scalar(p: Poly) -> Self {
        Coeff { r: 1, e: vec![p] }
    }

    pub fn rational(x: Q) -> Self {
        Coeff::scalar(Poly::constant(x))
    }

    /// The elementary matrix with a one in position `(i, j)`, zero-based.
    pub fn elementary(r: usize, i: usize, j: usize) -> Self {
        assert!(i < r && j < r, "elementary index out of range");
        let mut c = Coeff::zero(r);
        c.e[i * r + j] = Poly::one();
        c
    }

    pub fn from_rows(rows: Vec<Vec<Poly>>) -> Option<Self> {
        let r = rows.len();
        if r == 0 || rows.iter().any(|row| row.len() != r) {
            return None;
        }
        Some(Coeff { r, e: rows.into_iter().flatten().collect() })
    }

    pub fn rank(&self) -> usize {
        self.r
    }

    pub fn entry(&self, i: usize, j: usize) -> &Poly {
        &self.e[i * self.r + j]
    }

    pub fn entries(&self) -> &[Poly] {
        &self.e
    }

    pub fn is_zero(&self) -> bool {
        self.e.iter().all(Poly::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        *self == Coeff::identity(self.r)
    }

    /// `Some(p)` when the value equals `p` times the identity.
    pub fn as_scalar(&self) -> Option<Poly> {
        let p = self.e[0].clone();
        (*self == Coeff::diag(self.r, p.clone())).then_some(p)
    }

    /// Scalar matrices collapse to rank one so equal values compare equal.
    pub fn canonical(self) -> Coeff {
        if self.r > 1 {
            if let Some(p) = self.as_scalar() {
                return Coeff::scalar(p);
            }
        }
        self
    }

    /// Re-expresses a rank-one value at rank `r`.
    pub fn lift(&self, r: usize) -> Coeff {
        if self.r == r {
            self.clone()
        } else {
            assert_eq!(self.r, 1, "cannot lift rank {} to {}", self.r, r);
            Coeff::diag(r, self.e[0].clone())
        }
    }

    fn aligned<'a>(&'a self, o: &'a Coeff) -> (std::borrow::Cow<'a, Coeff>, std::borrow::Cow<'a, Coeff>) {
        use std::borrow::Cow;
        match (self.r, o.r) {
            (a, b) if a == b => (Cow::Borrowed(self), Cow::Borrowed(o)),
            (1, b) => (Cow::Owned(self.lift(b)), Cow::Borrowed(o)),
            (a, 1) => (Cow::Borrowed(self), Cow::Owned(o.lift(a))),
            (a, b) => panic!("coefficient rank mismatch: {a} vs {b}"),
        }
    }

    pub fn add(&self, o: &Coeff) -> Coeff {
        let (x, y) = self.aligned(o);
        Coeff { r: x.r, e: x.e.iter().zip(&y.e).map(|(p, q)| p.add(q)).collect() }
    }

    pub fn sub(&self, o: &Coeff) -> Coeff {
        let (x, y) = self.aligned(o);
        Coeff { r: x.r, e: x.e.iter().zip(&y.e).map(|(p, q)| p.sub(q)).collect() }
    }

    pub fn neg(&self) -> Coeff {
        Coeff { r: self.r, e: self.e.iter().map(Poly::neg).collect() }
    }

    pub fn scale(&self, k: &Q) -> Coeff {
        Coeff { r: self.r, e: self.e.iter().map(|p| p.scale(k)).collect() }
    }

    pub fn scale_poly(&self, k: &Poly) -> Coeff {
        Coeff { r: self.r, e: self.e.iter().map(|p| p.mul(k)).collect() }
    }

    pub fn mul(&self, o: &Coeff) -> Coeff {
        if self.r == 1 {
            return o.scale_poly(&self.e[0]);
        }
        if o.r == 1 {
            return self.scale_poly(&o.e[0]);
        }
        assert_eq!(self.r, o.r, "coefficient rank mismatch");
        let r = self.r;
        let mut e = vec![Poly::zero(); r * r];
        for i in 0..r {
            for k in 0..r {
                let a = &self.e[i * r + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..r {
                    let b = &o.e[k * r + j];
                    if !b.is_zero() {
                        e[i * r + j].add_assign_ref(&a.mul(b));
                    }
                }
            }
        }
        Coeff { r, e }
    }

    /// `xy - yx`.
    pub fn commutator(&self, o: &Coeff) -> Coeff {
        if self.r == 1 || o.r == 1 {
            return Coeff::zero(self.r.max(o.r));
        }
        self.mul(o).sub(&o.mul(self))
    }

    pub fn render(&self, names: &[String]) -> String {
        if self.r == 1 {
            return self.e[0].render(names);
        }
        let rows: Vec<String> = (0..self.r)
            .map(|i| {
                let row: Vec<String> =
                    (0..self.r).map(|j| self.entry(i, j).render(names)).collect();
                format!("[{}]", row.join(","))
            })
            .collect();
        format!("[{}]", rows.join(","))
    }
}
