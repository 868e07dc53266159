//! The Lie algebra `z^m (gl_r ⊕ derivations)` with its twisted bracket, the
//! BCH product and the induced group acting on series.
//!
//! A term `(A, d) z^m` acts on a (matrix-valued) series by
//! `s ↦ A z^m s + D(s)` with `D(z^k) = <k, d> z^{m+k}`.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num::{One, Zero};

use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::lattice::LatticeVector;
use crate::poly::Poly;
use crate::rational::{binomial, factorial, q, Q};
use crate::series::{Mono, MultiDegree, Ring, Series};

/// Matrix part and derivation vector of a single monomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieCoef {
    pub mat: Coeff,
    pub d: [Poly; 2],
}

impl LieCoef {
    pub fn new(mat: Coeff, d1: Poly, d2: Poly) -> Self {
        LieCoef { mat, d: [d1, d2] }
    }

    pub fn is_zero(&self) -> bool {
        self.mat.is_zero() && self.d[0].is_zero() && self.d[1].is_zero()
    }

    fn add(&self, o: &LieCoef) -> LieCoef {
        LieCoef {
            mat: self.mat.add(&o.mat),
            d: [self.d[0].add(&o.d[0]), self.d[1].add(&o.d[1])],
        }
    }

    fn scale(&self, k: &Q) -> LieCoef {
        LieCoef { mat: self.mat.scale(k), d: [self.d[0].scale(k), self.d[1].scale(k)] }
    }

    /// `<k, d>` as a polynomial.
    pub fn pair(&self, k: LatticeVector) -> Poly {
        self.d[0].scale(&q(k.a)).add(&self.d[1].scale(&q(k.b)))
    }
}

/// A finite zero-free sum of terms `(A, d) z^m t^deg`.
#[derive(Clone, Debug)]
pub struct LieElement {
    ring: Arc<Ring>,
    terms: BTreeMap<Mono, LieCoef>,
}

impl PartialEq for LieElement {
    fn eq(&self, o: &Self) -> bool {
        Ring::same(&self.ring, &o.ring) && self.terms == o.terms
    }
}

impl Eq for LieElement {}

impl LieElement {
    pub fn zero(ring: &Arc<Ring>) -> Self {
        LieElement { ring: ring.clone(), terms: BTreeMap::new() }
    }

    pub fn term(ring: &Arc<Ring>, m: LatticeVector, deg: MultiDegree, c: LieCoef) -> Self {
        let mut e = LieElement::zero(ring);
        e.add_term(m, deg, c);
        e
    }

    /// A pure matrix term `A z^m`.
    pub fn matrix_term(ring: &Arc<Ring>, m: LatticeVector, deg: MultiDegree, a: Coeff) -> Self {
        let z = Poly::zero();
        LieElement::term(ring, m, deg, LieCoef::new(a.lift(ring.rank()), z.clone(), z))
    }

    /// A pure derivation term `c z^m ∂_n`.
    pub fn deriv_term(ring: &Arc<Ring>, m: LatticeVector, deg: MultiDegree, c: Poly, n: LatticeVector) -> Self {
        let d1 = c.scale(&q(n.a));
        let d2 = c.scale(&q(n.b));
        LieElement::term(ring, m, deg, LieCoef::new(Coeff::zero(ring.rank()), d1, d2))
    }

    /// `(log F, log f ∂_{normal(m)})` from the two logarithms of a wall
    /// function along the primitive direction `m`.
    pub fn from_logs(m: LatticeVector, matrix_log: &Series, scalar_log: &Series) -> Result<Self> {
        if !Ring::same(matrix_log.ring(), scalar_log.ring()) {
            return Err(Error::RingMismatch);
        }
        let ring = matrix_log.ring().clone();
        let n = m.normal();
        let mut e = LieElement::zero(&ring);
        for ((k, d), c) in matrix_log.terms() {
            e = e.add(&LieElement::matrix_term(&ring, *k, d.clone(), c.clone()))?;
        }
        for ((k, d), c) in scalar_log.terms() {
            let p = c.as_scalar().ok_or(Error::RankMismatch { expected: 1, found: c.rank() })?;
            e = e.add(&LieElement::deriv_term(&ring, *k, d.clone(), p, n))?;
        }
        Ok(e)
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &LieCoef)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The `gl_r` component alone.
    pub fn matrix_part(&self) -> LieElement {
        let mut out = LieElement::zero(&self.ring);
        for ((m, deg), c) in &self.terms {
            out.add_term(*m, deg.clone(), LieCoef::new(c.mat.clone(), Poly::zero(), Poly::zero()));
        }
        out
    }

    pub fn add_term(&mut self, m: LatticeVector, deg: MultiDegree, c: LieCoef) {
        if c.is_zero() || !self.ring.admits(&deg) {
            return;
        }
        let key = (m, deg);
        match self.terms.get_mut(&key) {
            Some(old) => {
                let s = old.add(&c);
                if s.is_zero() {
                    self.terms.remove(&key);
                } else {
                    *old = s;
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    fn check(&self, o: &LieElement) -> Result<()> {
        if Ring::same(&self.ring, &o.ring) {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    pub fn add(&self, o: &LieElement) -> Result<LieElement> {
        self.check(o)?;
        let mut r = self.clone();
        for ((m, d), c) in &o.terms {
            r.add_term(*m, d.clone(), c.clone());
        }
        Ok(r)
    }

    pub fn sub(&self, o: &LieElement) -> Result<LieElement> {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> LieElement {
        self.scale(&q(-1))
    }

    pub fn scale(&self, k: &Q) -> LieElement {
        let mut r = LieElement::zero(&self.ring);
        for ((m, d), c) in &self.terms {
            r.add_term(*m, d.clone(), c.scale(k));
        }
        r
    }

    pub fn truncate(&self, order: u32) -> LieElement {
        LieElement {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .filter(|((_, d), _)| d.degree() <= order)
                .map(|(k, c)| (k.clone(), c.clone()))
                .collect(),
        }
    }

    /// Terms of total formal degree exactly `k`.
    pub fn homogeneous(&self, k: u32) -> LieElement {
        LieElement {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .filter(|((_, d), _)| d.degree() == k)
                .map(|(key, c)| (key.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().map(|(_, d)| d.degree()).min()
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.terms.keys().map(|(_, d)| d.degree()).max()
    }

    /// Membership in the subalgebra: every derivation vector is orthogonal
    /// to its exponent and every degree lies in the maximal ideal.
    pub fn in_h_tilde(&self) -> bool {
        self.terms
            .iter()
            .all(|((m, d), c)| !m.is_zero() && !d.is_unit() && c.pair(*m).is_zero())
    }

    /// Splits the element by the primitive direction of each exponent.
    pub fn by_direction(&self) -> BTreeMap<LatticeVector, LieElement> {
        let mut out: BTreeMap<LatticeVector, LieElement> = BTreeMap::new();
        for ((m, d), c) in &self.terms {
            out.entry(m.primitive())
                .or_insert_with(|| LieElement::zero(&self.ring))
                .add_term(*m, d.clone(), c.clone());
        }
        out
    }

    /// Substitutes `t_i = sum_j u_ij` in every coefficient.
    pub fn expand_t_to_u(&self, target: &Arc<Ring>) -> Result<LieElement> {
        crate::series::check_expand(&self.ring, target)?;
        let mut out = LieElement::zero(target);
        for ((m, d), c) in &self.terms {
            for (e, w) in crate::series::expand_degree(d, target.u_slots() as u16)? {
                out.add_term(*m, e, c.scale(&w));
            }
        }
        Ok(out)
    }

    /// Left inverse of [`LieElement::expand_t_to_u`].
    pub fn collapse_u_to_t(&self, target: &Arc<Ring>) -> Result<LieElement> {
        crate::series::check_collapse(&self.ring, target)?;
        let mut out = LieElement::zero(target);
        for ((m, d), c) in &self.terms {
            let (e, w) = crate::series::collapse_degree(d, target.n_t(), self.ring.u_slots() as u64);
            out.add_term(*m, e, c.scale(&w));
        }
        Ok(out)
    }

    /// `[self, o]`, dropping products of total degree above `order`.
    pub fn bracket_to(&self, o: &LieElement, order: u32) -> Result<LieElement> {
        self.check(o)?;
        let mut r = LieElement::zero(&self.ring);
        for ((m1, d1), c1) in &self.terms {
            for ((m2, d2), c2) in &o.terms {
                if d1.degree() + d2.degree() > order {
                    continue;
                }
                let Some(deg) = self.ring.mul_deg(d1, d2) else { continue };
                let p21 = c1.pair(*m2);
                let p12 = c2.pair(*m1);
                let mat = c1
                    .mat
                    .commutator(&c2.mat)
                    .add(&c2.mat.scale_poly(&p21))
                    .sub(&c1.mat.scale_poly(&p12));
                let d = [
                    p21.mul(&c2.d[0]).sub(&p12.mul(&c1.d[0])),
                    p21.mul(&c2.d[1]).sub(&p12.mul(&c1.d[1])),
                ];
                let c = LieCoef { mat, d };
                if c.is_zero() {
                    continue;
                }
                let m = *m1 + *m2;
                if m.is_zero() {
                    return Err(Error::DomainViolation(m1.to_string()));
                }
                r.add_term(m, deg, c);
            }
        }
        Ok(r)
    }

    pub fn bracket(&self, o: &LieElement) -> Result<LieElement> {
        self.bracket_to(o, self.ring.max_degree())
    }

    /// `ad_self^k(o)`.
    pub fn ad_pow(&self, k: usize, o: &LieElement) -> Result<LieElement> {
        let mut acc = o.clone();
        for _ in 0..k {
            acc = self.bracket(&acc)?;
        }
        Ok(acc)
    }

    /// Applies the operator `self` once to a series.
    pub fn apply(&self, s: &Series, with_matrix: bool) -> Result<Series> {
        if !Ring::same(&self.ring, s.ring()) {
            return Err(Error::RingMismatch);
        }
        let mut out = Series::zero(&self.ring);
        for ((m, d), c) in &self.terms {
            for ((k, e), v) in s.terms() {
                let Some(deg) = self.ring.mul_deg(d, e) else { continue };
                let mut w = v.scale_poly(&c.pair(*k));
                if with_matrix && !c.mat.is_zero() {
                    w = w.add(&c.mat.mul(v));
                }
                out.add_term(*m + *k, deg, w);
            }
        }
        Ok(out)
    }

    pub fn render(&self) -> String {
        let names = self.ring.symbols();
        self.terms
            .iter()
            .map(|((m, d), c)| {
                let deg = self.ring.render_degree(d);
                let head = if deg.is_empty() { format!("z^{m}") } else { format!("z^{m} {deg}") };
                format!(
                    "{head} : {} d=({},{})",
                    c.mat.render(names),
                    c.d[0].render(names),
                    c.d[1].render(names)
                )
            })
            .collect::<Vec<_>>()
            .join("\n")
    }

    /// The two wall functions `(exp A, exp a)` of an element supported on a
    /// single ray, where `d = a·normal(m)`.
    pub fn wall_functions(&self, m: LatticeVector) -> Result<(Series, Series)> {
        let n = m.normal();
        let mut mat = Series::zero(&self.ring);
        let mut sca = Series::zero(&self.ring);
        for ((k, d), c) in &self.terms {
            if !k.on_ray(m) {
                return Err(Error::InvalidWall(format!("exponent {k} off the ray {m}")));
            }
            mat.add_term(*k, d.clone(), c.mat.clone());
            let a = if n.a != 0 { c.d[0].scale(&(Q::one() / q(n.a))) } else { c.d[1].scale(&(Q::one() / q(n.b))) };
            if a.scale(&q(n.a)) != c.d[0] || a.scale(&q(n.b)) != c.d[1] {
                return Err(Error::InvalidWall(format!("derivation at {k} not normal to {m}")));
            }
            sca.add_term(*k, d.clone(), Coeff::scalar(a));
        }
        let f_mat = if mat.is_zero() { Series::identity(&self.ring) } else { mat.exp()? };
        Ok((f_mat, sca.exp()?))
    }
}

/// Bernoulli numbers `B_0..=B_n` with `B_1 = -1/2`.
pub fn bernoulli(n: usize) -> Vec<Q> {
    let mut b = vec![Q::one()];
    for m in 1..=n {
        let mut s = Q::zero();
        for (k, bk) in b.iter().enumerate() {
            s += Q::from_integer(binomial(m as u64 + 1, k as u64)) * bk;
        }
        b.push(-s / q(m as i64 + 1));
    }
    b
}

/// `log(e^x e^y)` through the Varadarajan recursion, keeping total formal
/// degree at most `order`.
pub fn bch(x: &LieElement, y: &LieElement, order: u32) -> Result<LieElement> {
    x.check(y)?;
    let x = x.truncate(order);
    let y = y.truncate(order);
    if x.is_zero() {
        return Ok(y);
    }
    if y.is_zero() {
        return Ok(x);
    }
    let min_deg = x.min_degree().unwrap().min(y.min_degree().unwrap()).max(1);
    let max_len = (order / min_deg) as usize;
    let sum = x.add(&y)?;
    let diff = x.sub(&y)?;
    let bern = bernoulli(max_len + 1);
    let half = Q::one() / q(2);
    // z[k] is the homogeneous word-length-k component
    let mut z: Vec<LieElement> = vec![LieElement::zero(&x.ring), sum.clone()];
    let mut t: HashMap<(usize, usize), LieElement> = HashMap::new();
    t.insert((0, 0), sum.clone());
    let mut total = sum.clone();
    for n in 1..max_len {
        let mut acc = diff.bracket_to(&z[n], order)?.scale(&half);
        for p in 1..=n / 2 {
            let j = 2 * p;
            let k2p = &bern[j] / Q::from_integer(factorial(j as u64));
            if k2p.is_zero() {
                continue;
            }
            let tj = t_term(j, n, &z, &mut t, order)?;
            acc = acc.add(&tj.scale(&k2p))?;
        }
        let next = acc.scale(&(Q::one() / q(n as i64 + 1)));
        total = total.add(&next)?;
        z.push(next);
    }
    Ok(total)
}

fn t_term(
    j: usize,
    n: usize,
    z: &[LieElement],
    memo: &mut HashMap<(usize, usize), LieElement>,
    order: u32,
) -> Result<LieElement> {
    if let Some(v) = memo.get(&(j, n)) {
        return Ok(v.clone());
    }
    let ring = &z[1].ring;
    let mut acc = LieElement::zero(ring);
    if j == 0 {
        memo.insert((j, n), acc.clone());
        return Ok(acc);
    }
    if n >= j {
        for k in 1..=(n + 1 - j) {
            let inner = t_term(j - 1, n - k, z, memo, order)?;
            if inner.is_zero() || z[k].is_zero() {
                continue;
            }
            acc = acc.add(&z[k].bracket_to(&inner, order)?)?;
        }
    }
    memo.insert((j, n), acc.clone());
    Ok(acc)
}

/// An element of the group, stored through its logarithm.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupElement {
    log: LieElement,
}

impl GroupElement {
    pub fn identity(ring: &Arc<Ring>) -> Self {
        GroupElement { log: LieElement::zero(ring) }
    }

    pub fn exp(log: LieElement) -> Self {
        GroupElement { log }
    }

    pub fn log(&self) -> &LieElement {
        &self.log
    }

    pub fn into_log(self) -> LieElement {
        self.log
    }

    pub fn is_identity(&self) -> bool {
        self.log.is_zero()
    }

    /// The product acting as `self ∘ o`.
    pub fn mul(&self, o: &GroupElement) -> Result<GroupElement> {
        let order = self.log.ring.max_degree();
        Ok(GroupElement { log: bch(&self.log, &o.log, order)? })
    }

    pub fn mul_to(&self, o: &GroupElement, order: u32) -> Result<GroupElement> {
        Ok(GroupElement { log: bch(&self.log, &o.log, order)? })
    }

    pub fn inv(&self) -> GroupElement {
        GroupElement { log: self.log.neg() }
    }

    fn act(&self, s: &Series, with_matrix: bool) -> Result<Series> {
        if with_matrix {
            let r = self.log.ring.rank();
            if let Some((_, c)) = s.terms().find(|(_, c)| c.rank() != 1 && c.rank() != r) {
                return Err(Error::RankMismatch { expected: r, found: c.rank() });
            }
        }
        let mut out = s.clone();
        let mut pw = s.clone();
        let mut k = 1i64;
        let mut fact = Q::one();
        loop {
            pw = self.log.apply(&pw, with_matrix)?;
            if pw.is_zero() {
                break;
            }
            fact *= q(k);
            out = out.add(&pw.scale(&(Q::one() / fact.clone())))?;
            k += 1;
        }
        Ok(out)
    }

    /// The torus automorphism alone, acting on scalar series.
    pub fn act_torus(&self, s: &Series) -> Result<Series> {
        self.act(s, false)
    }

    /// The full action on vector or matrix valued series.
    pub fn act_on_series(&self, s: &Series) -> Result<Series> {
        self.act(s, true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::lv;

    fn ring() -> Arc<Ring> {
        Ring::graded(2, 4).shared()
    }

    #[test]
    fn bernoulli_values() {
        let b = bernoulli(6);
        assert_eq!(b[2], Q::new(1.into(), 6.into()));
        assert_eq!(b[4], Q::new((-1).into(), 30.into()));
        assert_eq!(b[6], Q::new(1.into(), 42.into()));
    }

    #[test]
    fn derivation_bracket() {
        let r = ring();
        let a = LieElement::deriv_term(&r, lv(1, 0), r.t_degree(0, 1), Poly::one(), lv(0, 1));
        let b = LieElement::deriv_term(&r, lv(0, 1), r.t_degree(1, 1), Poly::one(), lv(-1, 0));
        let c = a.bracket(&b).unwrap();
        let expect = LieElement::deriv_term(&r, lv(1, 1), r.t_monomial(&[1, 1]), Poly::one(), lv(-1, 1));
        assert_eq!(c, expect);
        assert!(c.in_h_tilde());
    }

    #[test]
    fn torus_action_examples() {
        let r = Ring::graded(1, 3).shared();
        let x = Series::z(&r, lv(1, 0));
        let y = Series::z(&r, lv(0, 1));
        let f = Series::one(&r)
            .add(&Series::monomial(&r, lv(1, 0), r.t_degree(0, 1), Coeff::rational(q(1))))
            .unwrap();
        let log = LieElement::from_logs(lv(1, 0), &Series::zero(&r), &f.log().unwrap()).unwrap();
        let g = GroupElement::exp(log);
        assert_eq!(g.act_torus(&y).unwrap(), y.mul(&f).unwrap());
        assert_eq!(g.act_torus(&x).unwrap(), x);
        let h = GroupElement::exp(LieElement::deriv_term(&r, lv(1, 0), r.t_degree(0, 1), Poly::one(), lv(0, 1)));
        let expected = y.mul(&f.sub(&Series::one(&r)).unwrap().exp().unwrap()).unwrap();
        assert_eq!(h.act_torus(&y).unwrap(), expected);
    }
}
