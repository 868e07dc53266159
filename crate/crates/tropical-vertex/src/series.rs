//! Truncated series in `z^m` with coefficients in `R_N`, `R~_N` or a
//! total-degree truncation of a polynomial ring in `t` variables.

use std::collections::BTreeMap;
use std::sync::Arc;

use num::{One, Zero};

use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::lattice::LatticeVector;
use crate::poly::Poly;
use crate::rational::{binomial, factorial, q, Q};

/// Truncation data and coefficient mode shared by series and Lie elements.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ring {
    t_names: Vec<String>,
    t_cap: Option<u32>,
    total_cap: Option<u32>,
    u_lines: u16,
    u_slots: u16,
    rank: usize,
    symbols: Vec<String>,
}

fn default_t_names(n: usize) -> Vec<String> {
    if n == 1 {
        vec!["t".into()]
    } else {
        (1..=n).map(|i| format!("t{i}")).collect()
    }
}

impl Ring {
    /// `n` parameters, everything of total degree above `order` dropped.
    pub fn graded(n: usize, order: u32) -> Self {
        Ring {
            t_names: default_t_names(n),
            t_cap: None,
            total_cap: Some(order),
            u_lines: 0,
            u_slots: 0,
            rank: 1,
            symbols: Vec::new(),
        }
    }

    /// `C[t_1..t_n] / (t_i^{N+1})`.
    pub fn r_n(n: usize, cap: u32) -> Self {
        Ring { t_cap: Some(cap), total_cap: None, ..Ring::graded(n, 0) }
    }

    /// `C[u_ij] / (u_ij^2)` with `1 <= i <= n`, `1 <= j <= N`.
    pub fn r_tilde(n: usize, slots: u32) -> Self {
        Ring {
            t_names: Vec::new(),
            t_cap: None,
            total_cap: None,
            u_lines: n as u16,
            u_slots: slots as u16,
            rank: 1,
            symbols: Vec::new(),
        }
    }

    pub fn with_rank(mut self, r: usize) -> Self {
        assert!(r >= 1);
        self.rank = r;
        self
    }

    pub fn with_symbols<S: Into<String>>(mut self, names: impl IntoIterator<Item = S>) -> Self {
        self.symbols = names.into_iter().map(Into::into).collect();
        self
    }

    pub fn with_t_names<S: Into<String>>(mut self, names: impl IntoIterator<Item = S>) -> Self {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        assert_eq!(names.len(), self.t_names.len(), "parameter count changed");
        self.t_names = names;
        self
    }

    pub fn with_total_cap(mut self, cap: Option<u32>) -> Self {
        self.total_cap = cap;
        self
    }

    pub fn shared(self) -> Arc<Ring> {
        Arc::new(self)
    }

    pub fn n_t(&self) -> usize {
        self.t_names.len()
    }

    pub fn t_names(&self) -> &[String] {
        &self.t_names
    }

    pub fn t_cap(&self) -> Option<u32> {
        self.t_cap
    }

    pub fn total_cap(&self) -> Option<u32> {
        self.total_cap
    }

    pub fn u_lines(&self) -> usize {
        self.u_lines as usize
    }

    pub fn u_slots(&self) -> usize {
        self.u_slots as usize
    }

    pub fn is_tilde(&self) -> bool {
        self.u_lines > 0
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn symbol_id(&self, name: &str) -> Option<u16> {
        self.symbols.iter().position(|s| s == name).map(|i| i as u16)
    }

    /// Largest total degree a nonzero monomial can have.
    pub fn max_degree(&self) -> u32 {
        let structural = match self.t_cap {
            Some(c) => Some(c * self.n_t() as u32 + self.u_lines as u32 * self.u_slots as u32),
            None if self.n_t() == 0 => Some(self.u_lines as u32 * self.u_slots as u32),
            None => None,
        };
        match (structural, self.total_cap) {
            (Some(a), Some(b)) => a.min(b),
            (Some(a), None) => a,
            (None, Some(b)) => b,
            (None, None) => panic!("ring without any truncation"),
        }
    }

    pub fn unit_degree(&self) -> MultiDegree {
        MultiDegree { t: vec![0; self.n_t()], u: Vec::new() }
    }

    /// The degree `t_i^e` (zero-based `i`).
    pub fn t_degree(&self, i: usize, e: u32) -> MultiDegree {
        let mut d = self.unit_degree();
        d.t[i] = e;
        d
    }

    pub fn t_monomial(&self, exps: &[u32]) -> MultiDegree {
        assert_eq!(exps.len(), self.n_t());
        MultiDegree { t: exps.to_vec(), u: Vec::new() }
    }

    /// The degree `prod u_{i,j}` with one-based indices.
    pub fn u_degree(&self, flags: impl IntoIterator<Item = (u16, u16)>) -> MultiDegree {
        let mut u: Vec<(u16, u16)> = flags.into_iter().collect();
        u.sort_unstable();
        MultiDegree { t: vec![0; self.n_t()], u }
    }

    pub fn admits(&self, d: &MultiDegree) -> bool {
        if let Some(c) = self.t_cap {
            if d.t.iter().any(|&e| e > c) {
                return false;
            }
        }
        if let Some(c) = self.total_cap {
            if d.degree() > c {
                return false;
            }
        }
        d.u.windows(2).all(|w| w[0] != w[1])
            && d.u.iter().all(|&(i, j)| i >= 1 && i <= self.u_lines && j >= 1 && j <= self.u_slots)
    }

    /// Product of degrees, or `None` when the product vanishes in the ring.
    pub fn mul_deg(&self, a: &MultiDegree, b: &MultiDegree) -> Option<MultiDegree> {
        let d = a.mul(b)?;
        self.admits(&d).then_some(d)
    }

    pub fn same(a: &Arc<Ring>, b: &Arc<Ring>) -> bool {
        Arc::ptr_eq(a, b) || **a == **b
    }

    pub fn render_degree(&self, d: &MultiDegree) -> String {
        let mut parts = Vec::new();
        for (name, &e) in self.t_names.iter().zip(&d.t) {
            match e {
                0 => {}
                1 => parts.push(name.clone()),
                _ => parts.push(format!("{name}^{e}")),
            }
        }
        for (i, j) in &d.u {
            parts.push(format!("u_{{{i},{j}}}"));
        }
        parts.join(" ")
    }
}

/// Exponents of the formal parameters: dense `t` exponents and sorted
/// square-zero `u` flags.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiDegree {
    pub t: Vec<u32>,
    pub u: Vec<(u16, u16)>,
}

impl MultiDegree {
    pub fn degree(&self) -> u32 {
        self.t.iter().sum::<u32>() + self.u.len() as u32
    }

    pub fn is_unit(&self) -> bool {
        self.degree() == 0
    }

    /// Product; `None` when a `u` flag repeats.
    pub fn mul(&self, o: &MultiDegree) -> Option<MultiDegree> {
        debug_assert_eq!(self.t.len(), o.t.len());
        let t = self.t.iter().zip(&o.t).map(|(a, b)| a + b).collect();
        let mut u = Vec::with_capacity(self.u.len() + o.u.len());
        let (mut i, mut j) = (0, 0);
        while i < self.u.len() && j < o.u.len() {
            match self.u[i].cmp(&o.u[j]) {
                std::cmp::Ordering::Less => {
                    u.push(self.u[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    u.push(o.u[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => return None,
            }
        }
        u.extend_from_slice(&self.u[i..]);
        u.extend_from_slice(&o.u[j..]);
        Some(MultiDegree { t, u })
    }

    /// The set of lines `i` carrying a `u` flag.
    pub fn u_lines(&self) -> Vec<u16> {
        let mut v: Vec<u16> = self.u.iter().map(|f| f.0).collect();
        v.dedup();
        v
    }
}

pub type Mono = (LatticeVector, MultiDegree);

/// A finite sum of `c * z^m * (formal monomial)`, zero-free.
#[derive(Clone, Debug)]
pub struct Series {
    ring: Arc<Ring>,
    terms: BTreeMap<Mono, Coeff>,
}

impl PartialEq for Series {
    fn eq(&self, o: &Self) -> bool {
        Ring::same(&self.ring, &o.ring) && self.terms == o.terms
    }
}

impl Eq for Series {}

impl Series {
    pub fn zero(ring: &Arc<Ring>) -> Self {
        Series { ring: ring.clone(), terms: BTreeMap::new() }
    }

    /// The scalar unit.
    pub fn one(ring: &Arc<Ring>) -> Self {
        Series::monomial(ring, LatticeVector::ZERO, ring.unit_degree(), Coeff::rational(Q::one()))
    }

    /// The identity matrix of the ring's rank, stored as the scalar unit.
    pub fn identity(ring: &Arc<Ring>) -> Self {
        Series::monomial(ring, LatticeVector::ZERO, ring.unit_degree(), Coeff::identity(ring.rank()))
    }

    /// The scalar monomial `z^m`.
    pub fn z(ring: &Arc<Ring>, m: LatticeVector) -> Self {
        Series::monomial(ring, m, ring.unit_degree(), Coeff::rational(Q::one()))
    }

    pub fn monomial(ring: &Arc<Ring>, m: LatticeVector, d: MultiDegree, c: Coeff) -> Self {
        let mut s = Series::zero(ring);
        s.add_term(m, d, c);
        s
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &Coeff)> {
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

    pub fn coefficient(&self, m: LatticeVector, d: &MultiDegree) -> Option<&Coeff> {
        self.terms.get(&(m, d.clone()))
    }

    /// Adds a term, silently discarding monomials that vanish in the ring.
    pub fn add_term(&mut self, m: LatticeVector, d: MultiDegree, c: Coeff) {
        if c.is_zero() || !self.ring.admits(&d) {
            return;
        }
        let key = (m, d);
        let c = c.canonical();
        match self.terms.get_mut(&key) {
            Some(old) => {
                let s = old.add(&c).canonical();
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

    fn check(&self, o: &Series) -> Result<()> {
        if Ring::same(&self.ring, &o.ring) {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    pub fn add(&self, o: &Series) -> Result<Series> {
        self.check(o)?;
        let mut r = self.clone();
        for ((m, d), c) in &o.terms {
            r.add_term(*m, d.clone(), c.clone());
        }
        Ok(r)
    }

    pub fn sub(&self, o: &Series) -> Result<Series> {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Series {
        self.map_coeffs(|c| c.neg())
    }

    pub fn scale(&self, k: &Q) -> Series {
        self.map_coeffs(|c| c.scale(k))
    }

    /// Left multiplication of every coefficient by `c`.
    pub fn left_mul_coeff(&self, c: &Coeff) -> Series {
        self.map_coeffs(|x| c.mul(x))
    }

    fn map_coeffs(&self, f: impl Fn(&Coeff) -> Coeff) -> Series {
        let mut r = Series::zero(&self.ring);
        for ((m, d), c) in &self.terms {
            r.add_term(*m, d.clone(), f(c));
        }
        r
    }

    pub fn mul(&self, o: &Series) -> Result<Series> {
        self.check(o)?;
        let mut r = Series::zero(&self.ring);
        for ((m1, d1), c1) in &self.terms {
            for ((m2, d2), c2) in &o.terms {
                if let Some(d) = self.ring.mul_deg(d1, d2) {
                    r.add_term(*m1 + *m2, d, c1.mul(c2));
                }
            }
        }
        Ok(r)
    }

    pub fn pow(&self, e: u32) -> Result<Series> {
        let mut acc = if self.terms.values().any(|c| c.rank() > 1) {
            Series::identity(&self.ring)
        } else {
            Series::one(&self.ring)
        };
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Drops every term of total formal degree above `order`.
    pub fn truncate(&self, order: u32) -> Series {
        Series {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .filter(|((_, d), _)| d.degree() <= order)
                .map(|(k, c)| (k.clone(), c.clone()))
                .collect(),
        }
    }

    /// The coefficient of `z^0` times the unit formal monomial.
    pub fn constant_term(&self) -> Option<&Coeff> {
        self.terms.get(&(LatticeVector::ZERO, self.ring.unit_degree()))
    }

    fn is_nilpotent(&self) -> bool {
        self.terms.keys().all(|(_, d)| !d.is_unit())
    }

    fn split_unit(&self) -> Result<(Coeff, Series)> {
        let c = self.constant_term().cloned().ok_or(Error::NonUnital)?;
        if !(c.is_identity() || c.as_scalar().is_some_and(|p| p.is_one())) {
            return Err(Error::NonUnital);
        }
        let mut g = self.clone();
        g.terms.remove(&(LatticeVector::ZERO, self.ring.unit_degree()));
        if !g.is_nilpotent() {
            return Err(Error::NotNilpotent);
        }
        Ok((c, g))
    }

    /// `log f` for `f` with identity constant term.
    pub fn log(&self) -> Result<Series> {
        let (_, g) = self.split_unit()?;
        let mut out = Series::zero(&self.ring);
        let mut pw = g.clone();
        let mut k = 1i64;
        while !pw.is_zero() {
            let sign = if k % 2 == 1 { q(1) } else { q(-1) };
            out = out.add(&pw.scale(&(sign / q(k))))?;
            pw = pw.mul(&g)?;
            k += 1;
        }
        Ok(out)
    }

    /// `exp g` for nilpotent `g`; the unit is matrix-valued when `g` is.
    pub fn exp(&self) -> Result<Series> {
        if !self.is_nilpotent() {
            return Err(Error::NotNilpotent);
        }
        let matrix = self.terms.values().any(|c| c.rank() > 1);
        let mut out = if matrix { Series::identity(&self.ring) } else { Series::one(&self.ring) };
        let mut pw = out.clone();
        let mut k = 1i64;
        let mut fact = Q::one();
        loop {
            pw = pw.mul(self)?;
            if pw.is_zero() {
                break;
            }
            fact *= q(k);
            out = out.add(&pw.scale(&(Q::one() / fact.clone())))?;
            k += 1;
        }
        Ok(out)
    }

    /// Substitutes `t_i = sum_j u_ij`, landing in `target` (an `R~_N`).
    pub fn expand_t_to_u(&self, target: &Arc<Ring>) -> Result<Series> {
        check_expand(&self.ring, target)?;
        let mut out = Series::zero(target);
        for ((m, d), c) in &self.terms {
            for (e, w) in expand_degree(d, target.u_slots() as u16)? {
                out.add_term(*m, e, c.scale(&w));
            }
        }
        Ok(out)
    }

    /// Sends `prod_{j in B} u_ij` to `t_i^{|B|} / (|B|! C(N, |B|))`; a left
    /// inverse of [`Series::expand_t_to_u`].
    pub fn collapse_u_to_t(&self, target: &Arc<Ring>) -> Result<Series> {
        check_collapse(&self.ring, target)?;
        let mut out = Series::zero(target);
        for ((m, d), c) in &self.terms {
            let (e, w) = collapse_degree(d, target.n_t(), self.ring.u_slots() as u64);
            out.add_term(*m, e, c.scale(&w));
        }
        Ok(out)
    }

    pub fn render(&self) -> String {
        let mut lines = Vec::new();
        for ((m, d), c) in &self.terms {
            let deg = self.ring.render_degree(d);
            let head = if deg.is_empty() { format!("z^{m}") } else { format!("z^{m} {deg}") };
            lines.push(format!("{head} : {}", c.render(self.ring.symbols())));
        }
        lines.join("\n")
    }
}

pub(crate) fn check_expand(src: &Ring, target: &Ring) -> Result<()> {
    if target.u_lines() != src.n_t()
        || target.n_t() != 0
        || target.rank() != src.rank()
        || target.symbols() != src.symbols()
    {
        return Err(Error::RingMismatch);
    }
    Ok(())
}

pub(crate) fn check_collapse(src: &Ring, target: &Ring) -> Result<()> {
    if target.n_t() != src.u_lines() || target.rank() != src.rank() || target.symbols() != src.symbols() {
        return Err(Error::RingMismatch);
    }
    Ok(())
}

/// The image of `prod t_i^{e_i}` under `t_i = sum_j u_ij` as weighted
/// square-free `u` degrees.
pub fn expand_degree(d: &MultiDegree, slots: u16) -> Result<Vec<(MultiDegree, Q)>> {
    if !d.u.is_empty() {
        return Err(Error::RingMismatch);
    }
    let mut partial: Vec<Vec<(u16, u16)>> = vec![Vec::new()];
    let mut weight = Q::one();
    for (i, &e) in d.t.iter().enumerate() {
        if e == 0 {
            continue;
        }
        weight *= Q::from_integer(factorial(e as u64));
        let subsets = subsets_of_size(slots, e as usize);
        let mut next = Vec::with_capacity(partial.len() * subsets.len());
        for p in &partial {
            for s in &subsets {
                let mut v = p.clone();
                v.extend(s.iter().map(|&j| (i as u16 + 1, j)));
                next.push(v);
            }
        }
        partial = next;
    }
    Ok(partial
        .into_iter()
        .map(|mut u| {
            u.sort_unstable();
            (MultiDegree { t: Vec::new(), u }, weight.clone())
        })
        .collect())
}

/// The `t` degree and weight a square-free `u` degree collapses to.
pub fn collapse_degree(d: &MultiDegree, n_t: usize, slots: u64) -> (MultiDegree, Q) {
    let mut t = vec![0u32; n_t];
    for &(i, _) in &d.u {
        t[i as usize - 1] += 1;
    }
    let mut w = Q::one();
    for &p in &t {
        let p = p as u64;
        w /= Q::from_integer(factorial(p) * binomial(slots, p));
    }
    (MultiDegree { t, u: Vec::new() }, w)
}

/// All `k`-subsets of `{1..n}` in lexicographic order.
pub fn subsets_of_size(n: u16, k: usize) -> Vec<Vec<u16>> {
    fn rec(start: u16, n: u16, k: usize, cur: &mut Vec<u16>, out: &mut Vec<Vec<u16>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in start..=n {
            cur.push(x);
            rec(x + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(1, n, k, &mut Vec::new(), &mut out);
    out
}

/// Helper for building scalar series from `(m, degree, rational)` triples.
pub fn scalar_series(ring: &Arc<Ring>, terms: &[(LatticeVector, MultiDegree, Q)]) -> Series {
    let mut s = Series::zero(ring);
    for (m, d, c) in terms {
        s.add_term(*m, d.clone(), Coeff::rational(c.clone()));
    }
    s
}

/// Scalar series whose coefficients are symbol polynomials.
pub fn poly_series(ring: &Arc<Ring>, terms: Vec<(LatticeVector, MultiDegree, Poly)>) -> Series {
    let mut s = Series::zero(ring);
    for (m, d, c) in terms {
        s.add_term(m, d, Coeff::scalar(c));
    }
    s
}

impl Series {
    pub fn max_degree(&self) -> u32 {
        self.terms.keys().map(|(_, d)| d.degree()).max().unwrap_or(0)
    }

    /// Sum of the rational coefficients; only meaningful for scalar series.
    pub fn coefficient_sum(&self) -> Q {
        self.terms
            .values()
            .filter_map(|c| c.as_scalar().and_then(|p| p.as_constant()))
            .fold(Q::zero(), |a, b| a + b)
    }
}
