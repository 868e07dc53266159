//! The rank-two lattice of monomial exponents.

use std::cmp::Ordering;
use std::fmt;

use num::Integer;

use crate::rational::{fmt_q, q, Q};

/// A point `m = (a, b)` of the exponent lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct LatticeVector {
    pub a: i64,
    pub b: i64,
}

impl LatticeVector {
    pub const ZERO: LatticeVector = LatticeVector { a: 0, b: 0 };

    pub const fn new(a: i64, b: i64) -> Self {
        LatticeVector { a, b }
    }

    pub fn is_zero(self) -> bool {
        self.a == 0 && self.b == 0
    }

    /// `gcd(|a|, |b|)`; zero for the zero vector.
    pub fn index(self) -> u64 {
        (self.a.unsigned_abs()).gcd(&self.b.unsigned_abs())
    }

    /// `m / index(m)`. The zero vector is returned unchanged.
    pub fn primitive(self) -> Self {
        let g = self.index() as i64;
        if g == 0 {
            self
        } else {
            LatticeVector::new(self.a / g, self.b / g)
        }
    }

    pub fn is_primitive(self) -> bool {
        self.index() == 1
    }

    /// The positively oriented normal `(-b, a)`.
    pub fn normal(self) -> Self {
        LatticeVector::new(-self.b, self.a)
    }

    /// `a * b' - b * a'`.
    pub fn wedge(self, o: Self) -> i64 {
        self.a * o.b - self.b * o.a
    }

    /// The pairing `<m, n> = a n_1 + b n_2`.
    pub fn pair(self, n: Self) -> i64 {
        self.a * n.a + self.b * n.b
    }

    pub fn scale(self, k: i64) -> Self {
        LatticeVector::new(self.a * k, self.b * k)
    }

    /// True when `self` is a positive multiple of the primitive vector `m`.
    pub fn on_ray(self, m: Self) -> bool {
        !self.is_zero() && self.primitive() == m.primitive()
    }

    /// Quadrant-aware angular comparison starting from the positive first axis,
    /// counter-clockwise, on `[0, 2pi)`.
    pub fn angle_cmp(self, o: Self) -> Ordering {
        let half = |v: Self| if v.b > 0 || (v.b == 0 && v.a > 0) { 0 } else { 1 };
        half(self)
            .cmp(&half(o))
            .then_with(|| 0.cmp(&self.wedge(o)))
    }
}

impl std::ops::Add for LatticeVector {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        LatticeVector::new(self.a + o.a, self.b + o.b)
    }
}

impl std::ops::Sub for LatticeVector {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        LatticeVector::new(self.a - o.a, self.b - o.b)
    }
}

impl std::ops::Neg for LatticeVector {
    type Output = Self;
    fn neg(self) -> Self {
        LatticeVector::new(-self.a, -self.b)
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a, self.b)
    }
}

/// A point of the real plane with rational coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct RPoint {
    pub x: Q,
    pub y: Q,
}

impl RPoint {
    pub fn new(x: Q, y: Q) -> Self {
        RPoint { x, y }
    }

    pub fn origin() -> Self {
        RPoint::new(q(0), q(0))
    }

    pub fn is_origin(&self) -> bool {
        *self == RPoint::origin()
    }

    pub fn from_lattice(v: LatticeVector) -> Self {
        RPoint::new(q(v.a), q(v.b))
    }

    /// `self + s * v`.
    pub fn offset(&self, s: &Q, v: LatticeVector) -> Self {
        RPoint::new(&self.x + s * q(v.a), &self.y + s * q(v.b))
    }

    pub fn sub(&self, o: &RPoint) -> (Q, Q) {
        (&self.x - &o.x, &self.y - &o.y)
    }

    /// `(self - o) ∧ v`.
    pub fn wedge_dir(&self, o: &RPoint, v: LatticeVector) -> Q {
        let (dx, dy) = self.sub(o);
        dx * q(v.b) - dy * q(v.a)
    }

    /// `<self - o, v>`.
    pub fn dot_dir(&self, o: &RPoint, v: LatticeVector) -> Q {
        let (dx, dy) = self.sub(o);
        dx * q(v.a) + dy * q(v.b)
    }
}

impl fmt::Display for RPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", fmt_q(&self.x), fmt_q(&self.y))
    }
}

pub fn lv(a: i64, b: i64) -> LatticeVector {
    LatticeVector::new(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normal_and_wedge() {
        let m = lv(1, 2);
        assert_eq!(m.normal(), lv(-2, 1));
        assert_eq!(m.pair(m.normal()), 0);
        assert_eq!(lv(1, 0).wedge(lv(0, 1)), 1);
        assert_eq!(lv(2, 4).index(), 2);
        assert_eq!(lv(2, 4).primitive(), lv(1, 2));
        assert_eq!(lv(-3, 0).primitive(), lv(-1, 0));
    }

    #[test]
    fn positively_oriented_pair_pairings() {
        let (m1, m2) = (lv(1, 0), lv(1, 3));
        let w = m1.wedge(m2);
        assert!(w > 0);
        assert_eq!(m2.pair(m1.normal()), w);
        assert_eq!(m1.pair(m2.normal()), -w);
    }

    #[test]
    fn angular_order() {
        let mut v = vec![lv(0, -1), lv(-1, 0), lv(1, 1), lv(1, 0), lv(0, 1), lv(1, -1)];
        v.sort_by(|x, y| x.angle_cmp(*y));
        assert_eq!(v, vec![lv(1, 0), lv(1, 1), lv(0, 1), lv(-1, 0), lv(0, -1), lv(1, -1)]);
    }
}
