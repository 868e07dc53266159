//! Pointed groupoid rings, the automorphisms of type S and K, their
//! infinitesimal generators and the map into the extended tropical vertex
//! algebra.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num::{One, Zero};

use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::lattice::LatticeVector;
use crate::lie::{LieCoef, LieElement};
use crate::poly::Poly;
use crate::rational::{fmt_q, q, Q};
use crate::scattering::{ScatteringDiagram, SupportKind, Wall};
use crate::series::Ring;

/// The distinguished object `o`; arrows `i → o` are the torsor elements `γ_i`.
pub const POINT: usize = usize::MAX;

/// A morphism `i → j` addressed by `m(γ_ij) = γ_ij − e_ij`; loops
/// (`i = j`) are the copy of `Γ` at `i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mor {
    pub i: usize,
    pub j: usize,
    pub m: LatticeVector,
}

impl Mor {
    pub fn new(i: usize, j: usize, m: LatticeVector) -> Mor {
        Mor { i, j, m }
    }

    pub fn is_loop(&self) -> bool {
        self.i == self.j
    }

    /// `self + o` when the inner indices match.
    pub fn compose(&self, o: &Mor) -> Option<Mor> {
        (self.j == o.i).then(|| Mor::new(self.i, o.j, self.m + o.m))
    }

    pub fn shift(&self, c: LatticeVector) -> Mor {
        Mor::new(self.i, self.j, self.m + c)
    }
}

fn obj(i: usize) -> String {
    if i == POINT {
        "o".into()
    } else {
        i.to_string()
    }
}

impl fmt::Display for Mor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}{}", obj(self.i), obj(self.j), self.m)
    }
}

/// How `σ` extends off `Γ × Γ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum TwistRule {
    /// `+1` whenever an argument is not in `Γ`.
    LatticeOnly,
    /// `(-1)^{<c(a), c(b)>_D}` for all composable pairs, with the charge
    /// `c(γ_ij) = m(γ_ij) + b_i − b_j`.
    #[default]
    Bilinear,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupoidData {
    /// Objects `0..objects` form `V`; `POINT` is the extra object.
    pub objects: usize,
    /// `<e1, e2>_D`.
    pub dirac: i64,
    pub twist: TwistRule,
    /// Truncation order in `t`.
    pub order: u32,
    /// Offsets `b_i` of the base points; absent objects have zero.
    pub offsets: BTreeMap<usize, LatticeVector>,
}

impl GroupoidData {
    pub fn new(objects: usize, dirac: i64, order: u32) -> Self {
        GroupoidData { objects, dirac, twist: TwistRule::default(), order, offsets: BTreeMap::new() }
    }

    pub fn with_offset(mut self, object: usize, b: LatticeVector) -> Self {
        self.offsets.insert(object, b);
        self
    }

    /// `c(a) = m(a) + b_i − b_j`.
    pub fn charge(&self, a: &Mor) -> LatticeVector {
        let b = |i: usize| self.offsets.get(&i).copied().unwrap_or(LatticeVector::ZERO);
        a.m + b(a.i) - b(a.j)
    }

    pub fn with_twist(mut self, t: TwistRule) -> Self {
        self.twist = t;
        self
    }

    pub fn pairing(&self, a: LatticeVector, b: LatticeVector) -> i64 {
        self.dirac * (a.a * b.b - a.b * b.a)
    }

    fn sign_of(&self, a: &Mor, b: &Mor) -> i64 {
        let odd = match self.twist {
            TwistRule::LatticeOnly if !(a.is_loop() && b.is_loop()) => false,
            _ => self.pairing(self.charge(a), self.charge(b)).rem_euclid(2) == 1,
        };
        if odd {
            -1
        } else {
            1
        }
    }

    /// `σ(a, b)`.
    pub fn twist(&self, a: &Mor, b: &Mor) -> Result<i64> {
        a.compose(b)
            .map(|_| self.sign_of(a, b))
            .ok_or_else(|| Error::Input(format!("{a} and {b} do not compose")))
    }

    /// Sign carried by `X_a` under the map to the tropical vertex algebra;
    /// a quadratic refinement of the twist.
    pub fn epsilon(&self, a: &Mor) -> i64 {
        match self.twist {
            TwistRule::LatticeOnly => 1,
            TwistRule::Bilinear => {
                let c = self.charge(a);
                if (self.dirac * c.a * c.b).rem_euclid(2) == 1 {
                    -1
                } else {
                    1
                }
            }
        }
    }

    /// `ω(γ, a) = Ω(γ) <m(a), n_γ>`.
    pub fn omega(&self, gamma: LatticeVector, big_omega: i64, a: &Mor) -> i64 {
        big_omega * a.m.pair(gamma.primitive().normal())
    }

    /// Whether `ω(γ, γ') = Ω(γ) <γ, γ'>_D` on `Γ`.
    pub fn check_hypothesis(&self, gamma: LatticeVector, big_omega: i64) -> Result<()> {
        for e in [LatticeVector::new(1, 0), LatticeVector::new(0, 1)] {
            if self.omega(gamma, big_omega, &Mor::new(0, 0, e)) != big_omega * self.pairing(gamma, e) {
                return Err(Error::Hypothesis(format!("ω(γ, ·) for γ = {gamma} is not Ω(γ)<·, n_γ>")));
            }
        }
        Ok(())
    }

    /// Cocycle and symmetry conditions on every triple from `elems`;
    /// returns the first failing triple.
    pub fn check_twist(&self, elems: &[Mor]) -> Option<(Mor, Mor, Mor)> {
        for a in elems {
            for b in elems {
                let Some(ab) = a.compose(b) else { continue };
                if b.compose(a).is_some() && self.sign_of(a, b) != self.sign_of(b, a) {
                    return Some((*a, *b, *b));
                }
                for c in elems {
                    let (Some(bc), Some(_)) = (b.compose(c), ab.compose(c)) else { continue };
                    let lhs = self.sign_of(a, &bc) * self.sign_of(b, c);
                    let rhs = self.sign_of(a, b) * self.sign_of(&ab, c);
                    if lhs != rhs {
                        return Some((*a, *b, *c));
                    }
                }
            }
        }
        None
    }

    pub fn all_objects(&self) -> Vec<usize> {
        let mut v: Vec<usize> = (0..self.objects).collect();
        v.push(POINT);
        v
    }

    /// Morphisms between any two objects (including the point) with `m` in
    /// the box `[-b, b]^2`.
    pub fn generators(&self, b: i64) -> Vec<Mor> {
        let ms: Vec<LatticeVector> =
            (-b..=b).flat_map(|x| (-b..=b).map(move |y| LatticeVector::new(x, y))).collect();
        let mut out = Vec::new();
        for &i in &self.all_objects() {
            for &j in &self.all_objects() {
                out.extend(ms.iter().map(|&m| Mor::new(i, j, m)));
            }
        }
        out
    }

    /// `X_γ` for `γ ∈ Γ`: the sum of the loops `γ` at every object.
    pub fn central(&self, k: u32, gamma: LatticeVector, c: Q) -> GElement {
        let mut e = GElement::zero();
        for i in self.all_objects() {
            e.add_term(k, Mor::new(i, i, gamma), c.clone());
        }
        e
    }
}

/// A truncated element `Σ c t^k X_a` of the groupoid ring.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct GElement {
    terms: BTreeMap<(u32, Mor), Q>,
}

impl GElement {
    pub fn zero() -> Self {
        GElement::default()
    }

    pub fn basis(a: Mor) -> Self {
        GElement::term(0, a, Q::one())
    }

    pub fn one(d: &GroupoidData) -> Self {
        d.central(0, LatticeVector::ZERO, Q::one())
    }

    pub fn term(k: u32, a: Mor, c: Q) -> Self {
        let mut e = GElement::zero();
        e.add_term(k, a, c);
        e
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, Mor), &Q)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, k: u32, a: Mor, c: Q) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry((k, a)).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&(k, a));
        }
    }

    pub fn add(&self, o: &GElement) -> GElement {
        let mut r = self.clone();
        for ((k, a), c) in &o.terms {
            r.add_term(*k, *a, c.clone());
        }
        r
    }

    pub fn sub(&self, o: &GElement) -> GElement {
        self.add(&o.scale(&q(-1)))
    }

    pub fn scale(&self, s: &Q) -> GElement {
        let mut r = GElement::zero();
        for ((k, a), c) in &self.terms {
            r.add_term(*k, *a, c * s);
        }
        r
    }

    pub fn mul(&self, o: &GElement, d: &GroupoidData) -> GElement {
        let mut r = GElement::zero();
        for ((k1, a), c1) in &self.terms {
            for ((k2, b), c2) in &o.terms {
                let k = k1 + k2;
                if k > d.order {
                    continue;
                }
                if let Some(ab) = a.compose(b) {
                    r.add_term(k, ab, c1 * c2 * q(d.sign_of(a, b)));
                }
            }
        }
        r
    }

    pub fn truncate(&self, order: u32) -> GElement {
        GElement { terms: self.terms.iter().filter(|((k, _), _)| *k <= order).map(|(k, c)| (*k, c.clone())).collect() }
    }

    /// Lowest power of `t` present.
    pub fn min_order(&self) -> Option<u32> {
        self.terms.keys().map(|(k, _)| *k).min()
    }

    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|((k, a), c)| {
                let t = match k {
                    0 => String::new(),
                    1 => "t ".into(),
                    _ => format!("t^{k} "),
                };
                format!("{} {t}X[{a}]", fmt_q(c))
            })
            .collect();
        parts.join(" + ")
    }
}

/// A factor of an automorphism word.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Factor {
    /// `X ↦ (1 − μ t^h X_a) X (1 + μ t^h X_a)`.
    S { a: Mor, mu: i64, h: u32 },
    /// `X ↦ (1 − t^h X_γ)^{−ω(γ, ·)} X` with `ω = Ω <m(·), n_γ>`.
    K { gamma: LatticeVector, big_omega: i64, h: u32 },
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Factor::S { a, mu, h } => write!(f, "S[{a}; mu={mu}; h={h}]"),
            Factor::K { gamma, big_omega, h } => write!(f, "K[{gamma}; Omega={big_omega}; h={h}]"),
        }
    }
}

impl Factor {
    /// Image of a single basis element.
    pub fn apply_basis(&self, d: &GroupoidData, k: u32, a: &Mor) -> GElement {
        let x = GElement::term(k, *a, Q::one());
        match self {
            Factor::S { a: s, mu, h } => {
                let g = GElement::term(*h, *s, q(*mu));
                let left = GElement::one(d).sub(&g);
                let right = GElement::one(d).add(&g);
                left.mul(&x, d).mul(&right, d)
            }
            Factor::K { gamma, big_omega, h } => {
                let w = d.omega(*gamma, *big_omega, a);
                // (1 − y)^{−w} = Σ c_k y^k with c_{k+1} = c_k (w + k) / (k + 1)
                let y = d.central(*h, *gamma, Q::one());
                let mut out = x.clone();
                let mut c = Q::one();
                let mut pow = x;
                let mut n = 0i64;
                while *h * (n as u32 + 1) + k <= d.order {
                    c = c * q(w + n) / q(n + 1);
                    if c.is_zero() {
                        break;
                    }
                    pow = y.mul(&pow, d);
                    out = out.add(&pow.scale(&c));
                    n += 1;
                }
                out
            }
        }
    }

    pub fn apply(&self, d: &GroupoidData, x: &GElement) -> GElement {
        let mut out = GElement::zero();
        for ((k, a), c) in x.terms() {
            out = out.add(&self.apply_basis(d, *k, a).scale(c));
        }
        out.truncate(d.order)
    }

    /// Infinitesimal generator in the module of derivations.
    pub fn generator(&self, d: &GroupoidData) -> LElement {
        let mut g = LElement::zero();
        match self {
            Factor::S { a, mu, h } => g.add_ad(*h, *a, q(-*mu)),
            Factor::K { gamma, big_omega, h } => {
                let n = gamma.primitive().normal();
                let mut l = 1u32;
                while l * h <= d.order {
                    let c = q(*big_omega) / q(l as i64);
                    g.add_euler(l * h, gamma.scale(l as i64), [c.clone() * q(n.a), c * q(n.b)]);
                    l += 1;
                }
            }
        }
        g
    }

    /// Key used to compare factors regardless of their parameter.
    pub fn charge(&self) -> (bool, Mor, u32) {
        match self {
            Factor::S { a, h, .. } => (true, *a, *h),
            Factor::K { gamma, h, .. } => (false, Mor::new(0, 0, *gamma), *h),
        }
    }
}

/// `F_1 ∘ F_2 ∘ … ∘ F_n`, the last factor acting first.
pub fn apply_word(d: &GroupoidData, word: &[Factor], x: &GElement) -> GElement {
    word.iter().rev().fold(x.clone(), |acc, f| f.apply(d, &acc))
}

/// Outcome of comparing two automorphism words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WcfReport {
    Equal,
    Differs { generator: Mor, order: u32, defect: GElement },
}

impl WcfReport {
    pub fn is_equal(&self) -> bool {
        matches!(self, WcfReport::Equal)
    }
}

/// Compares both composites on every generator.
pub fn verify_wcf(d: &GroupoidData, lhs: &[Factor], rhs: &[Factor], generators: &[Mor]) -> WcfReport {
    let mut worst: Option<(Mor, u32, GElement)> = None;
    for g in generators {
        let x = GElement::basis(*g);
        let diff = apply_word(d, lhs, &x).sub(&apply_word(d, rhs, &x));
        if let Some(k) = diff.min_order() {
            if worst.as_ref().map_or(true, |(_, w, _)| k < *w) {
                worst = Some((*g, k, diff));
            }
        }
    }
    match worst {
        None => WcfReport::Equal,
        Some((generator, order, defect)) => WcfReport::Differs { generator, order, defect },
    }
}

/// An element of the module of derivations spanned by `t^k ad_{X_a}` and
/// `t^k E_{c,n}: X_a ↦ <m(a), n> X_c X_a`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LElement {
    ad: BTreeMap<(u32, Mor), Q>,
    euler: BTreeMap<(u32, LatticeVector), [Q; 2]>,
}

impl LElement {
    pub fn zero() -> Self {
        LElement::default()
    }

    pub fn ad(k: u32, a: Mor) -> Self {
        let mut e = LElement::zero();
        e.add_ad(k, a, Q::one());
        e
    }

    pub fn euler(k: u32, c: LatticeVector, n: LatticeVector) -> Self {
        let mut e = LElement::zero();
        e.add_euler(k, c, [q(n.a), q(n.b)]);
        e
    }

    pub fn is_zero(&self) -> bool {
        self.ad.is_empty() && self.euler.is_empty()
    }

    pub fn add_ad(&mut self, k: u32, a: Mor, c: Q) {
        if c.is_zero() {
            return;
        }
        let e = self.ad.entry((k, a)).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.ad.remove(&(k, a));
        }
    }

    pub fn add_euler(&mut self, k: u32, c: LatticeVector, n: [Q; 2]) {
        let e = self.euler.entry((k, c)).or_insert_with(|| [Q::zero(), Q::zero()]);
        e[0] += &n[0];
        e[1] += &n[1];
        if e[0].is_zero() && e[1].is_zero() {
            self.euler.remove(&(k, c));
        }
    }

    pub fn add(&self, o: &LElement) -> LElement {
        let mut r = self.clone();
        for ((k, a), c) in &o.ad {
            r.add_ad(*k, *a, c.clone());
        }
        for ((k, c), n) in &o.euler {
            r.add_euler(*k, *c, n.clone());
        }
        r
    }

    pub fn scale(&self, s: &Q) -> LElement {
        let mut r = LElement::zero();
        for ((k, a), c) in &self.ad {
            r.add_ad(*k, *a, c * s);
        }
        for ((k, c), n) in &self.euler {
            r.add_euler(*k, *c, [&n[0] * s, &n[1] * s]);
        }
        r
    }

    pub fn apply(&self, d: &GroupoidData, x: &GElement) -> GElement {
        let mut out = GElement::zero();
        for ((k, a), c) in &self.ad {
            let g = GElement::term(*k, *a, c.clone());
            out = out.add(&g.mul(x, d).sub(&x.mul(&g, d)));
        }
        for ((k, cm), n) in &self.euler {
            for ((kx, a), cx) in x.terms() {
                let p = q(a.m.a) * &n[0] + q(a.m.b) * &n[1];
                if p.is_zero() {
                    continue;
                }
                let lhs = d.central(*k, *cm, p);
                out = out.add(&lhs.mul(&GElement::term(*kx, *a, cx.clone()), d));
            }
        }
        out.truncate(d.order)
    }

    /// `exp(D)(x) = Σ D^n x / n!` to the truncation order.
    pub fn exp_apply(&self, d: &GroupoidData, x: &GElement) -> GElement {
        let mut out = x.clone();
        let mut term = x.clone();
        for n in 1..=d.order as i64 {
            term = self.apply(d, &term).scale(&(Q::one() / q(n)));
            if term.is_zero() {
                break;
            }
            out = out.add(&term);
        }
        out
    }

    /// The bracket of derivations in closed form.
    pub fn bracket(&self, o: &LElement, d: &GroupoidData) -> LElement {
        let mut r = LElement::zero();
        let order = d.order;
        for ((k1, a), c1) in &self.ad {
            for ((k2, b), c2) in &o.ad {
                if k1 + k2 > order {
                    continue;
                }
                let c = c1 * c2;
                if let Some(ab) = a.compose(b) {
                    r.add_ad(k1 + k2, ab, &c * q(d.sign_of(a, b)));
                }
                if let Some(ba) = b.compose(a) {
                    r.add_ad(k1 + k2, ba, -&c * q(d.sign_of(b, a)));
                }
            }
        }
        let mut mixed = |e: &BTreeMap<(u32, LatticeVector), [Q; 2]>, ads: &BTreeMap<(u32, Mor), Q>, sign: Q| {
            for ((k1, cm), n) in e {
                for ((k2, a), c) in ads {
                    if k1 + k2 > order {
                        continue;
                    }
                    let p = q(a.m.a) * &n[0] + q(a.m.b) * &n[1];
                    let s = q(d.sign_of(&Mor::new(a.i, a.i, *cm), a));
                    r.add_ad(k1 + k2, a.shift(*cm), p * c * s * &sign);
                }
            }
        };
        mixed(&self.euler, &o.ad, Q::one());
        mixed(&o.euler, &self.ad, q(-1));
        for ((k1, c1), n1) in &self.euler {
            for ((k2, c2), n2) in &o.euler {
                if k1 + k2 > order {
                    continue;
                }
                // [E_{c,n}, E_{c',n'}] = σ(c,c') E_{c+c', <c',n> n' − <c,n'> n}
                let s = q(d.sign_of(&Mor::new(0, 0, *c1), &Mor::new(0, 0, *c2)));
                let p1 = q(c2.a) * &n1[0] + q(c2.b) * &n1[1];
                let p2 = q(c1.a) * &n2[0] + q(c1.b) * &n2[1];
                let v = [
                    (&p1 * &n2[0] - &p2 * &n1[0]) * &s,
                    (&p1 * &n2[1] - &p2 * &n1[1]) * &s,
                ];
                r.add_euler(k1 + k2, *c1 + *c2, v);
            }
        }
        r
    }
}

/// The coefficient ring `ℚ[t]/(t^{order+1})` with `gl_r`, `r = |V|`.
pub fn upsilon_ring(d: &GroupoidData) -> Arc<Ring> {
    Ring::r_n(1, d.order).with_rank(d.objects.max(1)).shared()
}

/// `t^k ad_{X_a} ↦ ε(m) t^k E_ij w^{m(a)}` and
/// `t^k E_{c,n} ↦ ε(c) t^k (0, w^c ∂_n)`.
pub fn upsilon(d: &GroupoidData, ring: &Arc<Ring>, x: &LElement) -> Result<LieElement> {
    let r = ring.rank();
    let mut out = LieElement::zero(ring);
    for ((k, a), c) in &x.ad {
        let Mor { i, j, m } = *a;
        if i >= r || j >= r {
            return Err(Error::Input(format!("{a} does not join two objects of V")));
        }
        let mat = Coeff::elementary(r, i, j).scale(&(c * q(d.epsilon(a))));
        out = out.add(&LieElement::matrix_term(ring, m, ring.t_degree(0, *k), mat))?;
    }
    for ((k, cm), n) in &x.euler {
        let e = q(d.epsilon(&Mor::new(0, 0, *cm)));
        let coef = LieCoef::new(Coeff::zero(r), Poly::constant(&n[0] * &e), Poly::constant(&n[1] * &e));
        out = out.add(&LieElement::term(ring, *cm, ring.t_degree(0, *k), coef))?;
    }
    Ok(out)
}

/// Lines through the origin decorated with the images of the generators.
pub fn seed_diagram(d: &GroupoidData, word: &[Factor]) -> Result<ScatteringDiagram> {
    let ring = upsilon_ring(d);
    let mut walls = Vec::new();
    for f in word {
        if let Factor::K { gamma, big_omega, .. } = f {
            d.check_hypothesis(*gamma, *big_omega)?;
        }
        let (_, charge, _) = f.charge();
        let m = charge.m.primitive();
        if m.is_zero() {
            return Err(Error::Input(format!("{f} has zero charge")));
        }
        walls.push(Wall::line(m, upsilon(d, &ring, &f.generator(d))?)?);
    }
    ScatteringDiagram::with_walls(&ring, walls)
}

/// Reads factors of type S off the matrix parts of the rays of a completed
/// diagram, and factors of type K off scalar parts.
pub fn rays_to_factors(d: &GroupoidData, diagram: &ScatteringDiagram) -> Result<Vec<Factor>> {
    let ring = diagram.ring();
    let r = ring.rank();
    let mut out = Vec::new();
    for w in diagram.walls() {
        if w.kind != SupportKind::Ray {
            continue;
        }
        let mut factors = Vec::new();
        for ((m, deg), c) in w.log.terms() {
            let k = deg.degree();
            for i in 0..r {
                for j in 0..r {
                    let v = c.mat.lift(r).entry(i, j).as_constant().unwrap_or_else(Q::zero);
                    if v.is_zero() {
                        continue;
                    }
                    let mu = -(v * q(d.epsilon(&Mor::new(i, j, *m))));
                    if !mu.is_integer() || i == j {
                        return Err(Error::Hypothesis(format!("ray term at {m} is not of type S")));
                    }
                    factors.push(Factor::S { a: Mor::new(i, j, *m), mu: mu.to_integer().try_into().unwrap_or(0), h: k });
                }
            }
        }
        let scalar: Vec<_> = w.log.terms().filter(|(_, c)| !c.d[0].is_zero() || !c.d[1].is_zero()).collect();
        if let Some(((m, deg), c)) = scalar.iter().min_by_key(|((_, deg), _)| deg.degree()) {
            let n = m.primitive().normal();
            let p = if n.a != 0 { c.d[0].scale(&(Q::one() / q(n.a))) } else { c.d[1].scale(&(Q::one() / q(n.b))) };
            let om = p.as_constant().unwrap_or_else(Q::zero) * q(d.epsilon(&Mor::new(0, 0, *m)));
            if !om.is_integer() {
                return Err(Error::Hypothesis(format!("ray term at {m} is not of type K")));
            }
            factors.push(Factor::K { gamma: *m, big_omega: om.to_integer().try_into().unwrap_or(0), h: deg.degree() });
        }
        let mut total = LElement::zero();
        for f in &factors {
            total = total.add(&f.generator(d));
        }
        if upsilon(d, ring, &total)? != w.log {
            return Err(Error::Hypothesis(format!("ray along {} is not a product of S and K factors", w.m)));
        }
        out.extend(factors);
    }
    out.sort();
    Ok(out)
}

/// Completes the seed lines of `lhs` and checks that the new rays are
/// exactly the factors of `rhs` that do not occur in `lhs`.
pub fn round_trip(d: &GroupoidData, lhs: &[Factor], rhs: &[Factor]) -> Result<(Vec<Factor>, bool)> {
    let done = seed_diagram(d, lhs)?.complete_ks(d.order)?;
    let found = rays_to_factors(d, &done)?;
    let mut expected: Vec<Factor> = rhs.iter().filter(|f| !lhs.contains(f)).cloned().collect();
    expected.sort();
    let ok = found == expected;
    Ok((found, ok))
}

/// The first of the two worked identities: `K_γ S_{γ_ij} = S_{γ_ij} S_{γ_ij+γ} K_γ`
/// with `ω(γ, γ_ij) = −1`, `μ(γ_ij) = μ'(γ_ij) = 1`, `μ'(γ_ij + γ) = −1`,
/// realised by `Ω(γ) = big_omega`, `γ = (0,1)`, `m(γ_ij) = (big_omega, 0)`.
pub fn example_k_s_with(big_omega: i64, order: u32) -> (GroupoidData, Vec<Factor>, Vec<Factor>) {
    let d = GroupoidData::new(3, 1, order).with_offset(0, LatticeVector::new(1, 0));
    let gamma = LatticeVector::new(0, 1);
    let gij = Mor::new(0, 1, LatticeVector::new(big_omega, 0));
    let k = Factor::K { gamma, big_omega, h: 1 };
    let lhs = vec![k.clone(), Factor::S { a: gij, mu: 1, h: 1 }];
    let rhs = vec![Factor::S { a: gij, mu: 1, h: 1 }, Factor::S { a: gij.shift(gamma), mu: -1, h: 2 }, k];
    (d, lhs, rhs)
}

/// The realisation compatible with the orientation of path-ordered products:
/// `Ω(γ) = −1`, `m(γ_ij) = (−1,0)`.
pub fn example_k_s(order: u32) -> (GroupoidData, Vec<Factor>, Vec<Factor>) {
    example_k_s_with(-1, order)
}

/// The second worked identity with `μ(γ_il) = 0`:
/// `S_{γ_ij} S_{γ_jl} = S_{γ_jl} S'_{γ_il} S_{γ_ij}` with
/// `μ'(γ_il) = −σ(γ_ij, γ_jl) μ(γ_ij) μ(γ_jl)`. The offset `b_0 = (1,0)`
/// shared with [`example_k_s_with`] makes `σ = +1` here.
pub fn example_s_s(mu_ij: i64, mu_jl: i64, order: u32) -> (GroupoidData, Vec<Factor>, Vec<Factor>) {
    let d = GroupoidData::new(3, 1, order).with_offset(0, LatticeVector::new(1, 0));
    let gij = Mor::new(0, 1, LatticeVector::new(1, 0));
    let gjl = Mor::new(1, 2, LatticeVector::new(0, 1));
    let gil = gij.compose(&gjl).expect("composable");
    let sij = Factor::S { a: gij, mu: mu_ij, h: 1 };
    let sjl = Factor::S { a: gjl, mu: mu_jl, h: 1 };
    let lhs = vec![sij.clone(), sjl.clone()];
    let mut rhs = vec![sjl, sij];
    let mu = -d.twist(&gij, &gjl).expect("composable") * mu_ij * mu_jl;
    if mu != 0 {
        rhs.insert(1, Factor::S { a: gil, mu, h: 2 });
    }
    (d, lhs, rhs)
}

/// Both sides of the collapsed adjoint series in the first worked identity
/// with its literal data `Ω(γ) = 1`, `m(γ_ij) = (1,0)`, `γ = (0,1)`.
#[derive(Clone, Debug)]
pub struct AdjointSeries {
    pub log_k: LieElement,
    pub log_s: LieElement,
    /// `ad^l_{log θ_K} log θ_S` for `l = 1..=order`.
    pub powers: Vec<LieElement>,
    /// `Σ_{l≥2} ad^l_{log θ_K} log θ_S / l!`.
    pub tail: LieElement,
    /// `−(E_ij Σ_{k≥2} t^{k+1} w^{m + kγ} / k, 0)`.
    pub collapsed: LieElement,
    /// `log θ_S + (t² E_ij w^{m+γ}, 0)`.
    pub conjugated: LieElement,
}

impl AdjointSeries {
    pub fn holds(&self) -> bool {
        self.tail == self.collapsed
    }
}

/// Computes `Σ_l ad^l_{log θ_K}(log θ_S)/l!` in the extended tropical
/// vertex algebra and the closed form it should collapse to.
pub fn adjoint_series(order: u32) -> Result<AdjointSeries> {
    let ring = Ring::r_n(1, order).with_rank(2).shared();
    let gamma = LatticeVector::new(0, 1);
    let m = LatticeVector::new(1, 0);
    let n = gamma.normal();
    let e = Coeff::elementary(2, 0, 1);
    let mut log_k = LieElement::zero(&ring);
    for l in 1..=order {
        let c = Poly::constant(Q::one() / q(l as i64));
        log_k = log_k.add(&LieElement::deriv_term(&ring, gamma.scale(l as i64), ring.t_degree(0, l), c, n))?;
    }
    let log_s = LieElement::matrix_term(&ring, m, ring.t_degree(0, 1), e.scale(&q(-1)));
    let mut powers = Vec::new();
    let mut acc = log_s.clone();
    let mut tail = LieElement::zero(&ring);
    let mut fact = Q::one();
    for l in 1..=order {
        acc = log_k.bracket(&acc)?;
        fact *= q(l as i64);
        if l >= 2 {
            tail = tail.add(&acc.scale(&(Q::one() / &fact)))?;
        }
        powers.push(acc.clone());
    }
    let mut collapsed = LieElement::zero(&ring);
    for k in 2..order {
        let c = e.scale(&(q(-1) / q(k as i64)));
        collapsed = collapsed.add(&LieElement::matrix_term(&ring, m + gamma.scale(k as i64), ring.t_degree(0, k + 1), c))?;
    }
    let conjugated = log_s.add(&LieElement::matrix_term(&ring, m + gamma, ring.t_degree(0, 2), e))?;
    Ok(AdjointSeries { log_k, log_s, powers, tail, collapsed, conjugated })
}

/// Renders a report for people.
pub fn render_report(r: &WcfReport) -> String {
    match r {
        WcfReport::Equal => "equal".into(),
        WcfReport::Differs { generator, order, defect } => {
            format!("differs on X[{generator}] at order {order}: {}", defect.render())
        }
    }
}
