//! Partitions of tangency profiles, the dictionary between tropical counts
//! and relative invariants, extraction of invariants from wall functions and
//! the linear-independence analysis of the generating vectors.

use std::collections::BTreeMap;
use std::sync::Arc;

use num::{One, Signed, Zero};

use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::lattice::{LatticeVector, RPoint};
use crate::lie::LieElement;
use crate::linalg::{self, Sparse};
use crate::perturbation::StandardDiagram;
use crate::poly::{Poly, SymMono};
use crate::rational::{q, Q};
use crate::scattering::{ScatteringDiagram, SupportKind};
use crate::series::{Ring, Series};
use crate::tropical::count_tropical;

/// Contact orders `P_j` along the directions `m_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TangencyProfile {
    pub p: Vec<u32>,
    pub m: Vec<LatticeVector>,
}

impl TangencyProfile {
    pub fn new(p: Vec<u32>, m: Vec<LatticeVector>) -> Result<Self> {
        if p.len() != m.len() {
            return Err(Error::Input("one contact order per direction".into()));
        }
        if m.iter().any(|v| !v.is_primitive()) {
            return Err(Error::Input("directions must be primitive".into()));
        }
        let t = TangencyProfile { p, m };
        if t.total().is_zero() {
            return Err(Error::Input("contact orders sum to zero".into()));
        }
        Ok(t)
    }

    /// `Σ P_j m_j = l_P m_P`.
    pub fn total(&self) -> LatticeVector {
        self.p.iter().zip(&self.m).fold(LatticeVector::ZERO, |acc, (&p, &m)| acc + m.scale(p as i64))
    }

    pub fn index(&self) -> u64 {
        self.total().index()
    }

    pub fn direction(&self) -> LatticeVector {
        self.total().primitive()
    }

    /// Plain-text summary of the curve class data.
    pub fn describe(&self) -> String {
        let contacts: Vec<String> = self
            .p
            .iter()
            .zip(&self.m)
            .filter(|(p, _)| **p > 0)
            .map(|(p, m)| format!("order {p} at a fixed point of the divisor of -{m}"))
            .collect();
        format!(
            "P = {:?}; l_P = {}, m_P = {}; contacts: {}; one unprescribed contact of order {} along {}",
            self.p,
            self.index(),
            self.direction(),
            contacts.join(", "),
            self.index(),
            self.direction()
        )
    }
}

/// Integer partitions of `n` as multiplicity vectors `(k_1, k_2, …)` with
/// `Σ l k_l = n`, trailing zeros removed; `n = 0` gives the empty vector.
pub fn integer_partitions(n: u32) -> Vec<Vec<u32>> {
    fn go(n: u32, max: u32, parts: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 0 {
            let top = parts.first().copied().unwrap_or(0) as usize;
            let mut k = vec![0u32; top];
            for &p in parts.iter() {
                k[p as usize - 1] += 1;
            }
            out.push(k);
            return;
        }
        for p in (1..=max.min(n)).rev() {
            parts.push(p);
            go(n - p, p, parts, out);
            parts.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out.reverse();
    out
}

/// `k ⊢ P`: one multiplicity vector per direction.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Partition {
    pub k: Vec<Vec<u32>>,
}

/// `R_l = (-1)^{l-1} / l^2`.
pub fn r_l(l: u32) -> Q {
    let s = if l % 2 == 1 { 1 } else { -1 };
    Q::new(s.into(), (l as i64 * l as i64).into())
}

fn fact(n: u32) -> Q {
    Q::from(crate::rational::factorial(n as u64))
}

impl Partition {
    /// Parts `(j, l, k_jl)` with `k_jl > 0`.
    pub fn parts(&self) -> impl Iterator<Item = (usize, u32, u32)> + '_ {
        self.k
            .iter()
            .enumerate()
            .flat_map(|(j, kj)| kj.iter().enumerate().filter(|(_, c)| **c > 0).map(move |(l, c)| (j, l as u32 + 1, *c)))
    }

    pub fn s(&self) -> u32 {
        self.parts().map(|(_, _, c)| c).sum()
    }

    pub fn profile(&self) -> Vec<u32> {
        self.k.iter().map(|kj| kj.iter().enumerate().map(|(l, c)| (l as u32 + 1) * c).sum()).collect()
    }

    /// `w(k)`: `k_jl` copies of `l m_j`, ordered by `j` then `l`.
    pub fn weights(&self, m: &[LatticeVector]) -> Vec<LatticeVector> {
        let mut w = Vec::new();
        for (j, l, c) in self.parts() {
            for _ in 0..c {
                w.push(m[j].scale(l as i64));
            }
        }
        w
    }

    pub fn class(&self, m: &[LatticeVector]) -> WeightClass {
        weight_class(&self.weights(m))
    }

    /// `Π l^{k_jl}`.
    pub fn weight_product(&self) -> u64 {
        self.parts().map(|(_, l, c)| (l as u64).pow(c)).product()
    }

    /// `Π ((-1)^{l-1}/l)^{k_jl} / k_jl!`.
    pub fn lambda(&self) -> Q {
        self.parts()
            .map(|(_, l, c)| {
                let s = if l % 2 == 1 { 1 } else { -1 };
                num::pow(Q::new(s.into(), (l as i64).into()), c as usize) / fact(c)
            })
            .product()
    }

    /// `Π R_l^{k_jl} / k_jl!`.
    pub fn trop_factor(&self) -> Q {
        self.parts().map(|(_, l, c)| num::pow(r_l(l), c as usize) / fact(c)).product()
    }

    /// `Π l^{k_jl} R_l^{k_jl} / k_jl!`.
    pub fn degeneration_factor(&self) -> Q {
        self.trop_factor() * q(self.weight_product() as i64)
    }

    /// `Σ_j Σ_l l k_jl A_j^l`.
    pub fn matrix_weight(&self, a: &[Coeff], rank: usize) -> Coeff {
        let mut out = Coeff::zero(rank);
        for (j, l, c) in self.parts() {
            let mut p = Coeff::identity(rank);
            for _ in 0..l {
                p = p.mul(&a[j].lift(rank));
            }
            out = out.add(&p.scale(&q((l * c) as i64)));
        }
        out
    }
}

/// All `k ⊢ P` in canonical order.
pub fn enumerate_partitions(profile: &TangencyProfile) -> Vec<Partition> {
    let mut out: Vec<Vec<Vec<u32>>> = vec![Vec::new()];
    for &pj in &profile.p {
        let opts = integer_partitions(pj);
        out = out
            .into_iter()
            .flat_map(|prefix| {
                opts.iter().map(move |o| {
                    let mut v = prefix.clone();
                    v.push(o.clone());
                    v
                })
            })
            .collect();
    }
    out.into_iter().map(|k| Partition { k }).collect()
}

/// A weight tuple up to reordering.
pub type WeightClass = Vec<LatticeVector>;

pub fn weight_class(w: &[LatticeVector]) -> WeightClass {
    let mut v = w.to_vec();
    v.sort_by(|a, b| a.angle_cmp(*b).then(a.index().cmp(&b.index())));
    v
}

pub fn render_class(w: &WeightClass) -> String {
    let parts: Vec<String> = w.iter().map(|v| v.to_string()).collect();
    format!("[{}]", parts.join(", "))
}

/// `N_{0,w(k)} = N^trop_{w(k)} / Π l^{k_jl}`.
pub fn trop_to_relative(n_trop: &Q, k: &Partition) -> Q {
    n_trop / q(k.weight_product() as i64)
}

/// `N_{0,P} = Σ_{k ⊢ P} N_{0,w(k)} Π l^{k} R_l^{k} / k!`.
pub fn degenerate(table: &BTreeMap<WeightClass, Q>, profile: &TangencyProfile) -> Result<Q> {
    let mut total = Q::zero();
    for k in enumerate_partitions(profile) {
        let w = k.class(&profile.m);
        let n = table
            .get(&w)
            .ok_or_else(|| Error::Input(format!("missing relative invariant for {}", render_class(&w))))?;
        total += n * k.degeneration_factor();
    }
    Ok(total)
}

/// Solves the degeneration formula for the one class absent from `table`.
pub fn solve_degeneration(
    table: &BTreeMap<WeightClass, Q>,
    profile: &TangencyProfile,
    n_p: &Q,
) -> Result<(WeightClass, Q)> {
    let mut known = Q::zero();
    let mut unknown: Option<(WeightClass, Q)> = None;
    for k in enumerate_partitions(profile) {
        let w = k.class(&profile.m);
        match table.get(&w) {
            Some(n) => known += n * k.degeneration_factor(),
            None => match &mut unknown {
                Some((u, f)) if *u == w => *f += k.degeneration_factor(),
                Some(_) => return Err(Error::Input("more than one unknown class".into())),
                None => unknown = Some((w, k.degeneration_factor())),
            },
        }
    }
    let (w, f) = unknown.ok_or_else(|| Error::Input("no unknown class".into()))?;
    if f.is_zero() {
        return Err(Error::Hypothesis("unknown class does not enter the formula".into()));
    }
    Ok((w, (n_p - known) / f))
}

/// Lines `(m_i ℝ, (1 + A_i t_i z^{m_i}, 1 + t_i z^{m_i}))` over `R_N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GwSeed {
    ring: Arc<Ring>,
    lines: Vec<(LatticeVector, Coeff)>,
}

impl GwSeed {
    pub fn new(ring: &Arc<Ring>, lines: Vec<(LatticeVector, Coeff)>) -> Result<Self> {
        if ring.is_tilde() || ring.t_cap().is_none() || ring.n_t() != lines.len() {
            return Err(Error::Input("seed needs R_N with one parameter per line".into()));
        }
        if lines.iter().any(|(m, _)| !m.is_primitive()) {
            return Err(Error::Input("line directions must be primitive".into()));
        }
        for (i, (_, a)) in lines.iter().enumerate() {
            for (_, b) in &lines[i + 1..] {
                if !a.commutator(b).is_zero() {
                    return Err(Error::Hypothesis("matrix parts must commute".into()));
                }
            }
        }
        Ok(GwSeed { ring: ring.clone(), lines })
    }

    /// Commuting formal symbols `A_i` on lines flagged `true`, zero matrix
    /// elsewhere.
    pub fn formal(dirs: &[(LatticeVector, bool)], cap: u32) -> Result<Self> {
        let names: Vec<String> = (1..=dirs.len()).map(|i| format!("A{i}")).collect();
        let ring = Ring::r_n(dirs.len(), cap).with_symbols(names).shared();
        let lines = dirs
            .iter()
            .enumerate()
            .map(|(i, &(m, on))| (m, if on { Coeff::scalar(Poly::symbol(i as u16)) } else { Coeff::zero(1) }))
            .collect();
        GwSeed::new(&ring, lines)
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn lines(&self) -> &[(LatticeVector, Coeff)] {
        &self.lines
    }

    pub fn directions(&self) -> Vec<LatticeVector> {
        self.lines.iter().map(|(m, _)| *m).collect()
    }

    fn matrices(&self) -> Vec<Coeff> {
        self.lines.iter().map(|(_, a)| a.clone()).collect()
    }

    pub fn standard_diagram(&self) -> Result<StandardDiagram> {
        let r = &self.ring;
        let mut lines = Vec::new();
        for (i, (m, a)) in self.lines.iter().enumerate() {
            let deg = r.t_degree(i, 1);
            let mat = Series::identity(r).add(&Series::monomial(r, *m, deg.clone(), a.clone()))?;
            let sca = Series::one(r).add(&Series::monomial(r, *m, deg, Coeff::rational(Q::one())))?;
            lines.push((*m, mat, sca));
        }
        StandardDiagram::from_functions(r, lines)
    }

    /// Profiles `P` inside the truncation whose total lies on the ray of
    /// `m_d`, excluding those carried by lines parallel to it alone.
    pub fn profiles_on(&self, m_d: LatticeVector) -> Vec<TangencyProfile> {
        let cap = self.ring.t_cap().unwrap_or(0);
        let n = self.lines.len();
        let dirs = self.directions();
        let mut out = Vec::new();
        let mut p = vec![0u32; n];
        loop {
            let prof = TangencyProfile { p: p.clone(), m: dirs.clone() };
            let total = prof.total();
            let transverse = p.iter().zip(&dirs).any(|(&x, m)| x > 0 && m.wedge(m_d) != 0);
            if !total.is_zero()
                && total.on_ray(m_d)
                && transverse
                && self.ring.admits(&self.ring.t_monomial(&p))
            {
                out.push(prof);
            }
            let mut i = 0;
            loop {
                if i == n {
                    return out;
                }
                if p[i] < cap {
                    p[i] += 1;
                    break;
                }
                p[i] = 0;
                i += 1;
            }
        }
    }

    /// `V_w` evaluated on the seed's matrices: for each class, the map from
    /// `P` to `Σ λ_k Σ l k_jl A_j^l` over `k ⊢ P` in that class.
    pub fn v_system(&self, m_d: LatticeVector) -> BTreeMap<WeightClass, BTreeMap<Vec<u32>, Coeff>> {
        let rank = self.ring.rank();
        let a = self.matrices();
        let mut out: BTreeMap<WeightClass, BTreeMap<Vec<u32>, Coeff>> = BTreeMap::new();
        for prof in self.profiles_on(m_d) {
            for k in enumerate_partitions(&prof) {
                let w = k.class(&prof.m);
                if w.iter().all(|v| v.wedge(m_d) == 0) {
                    continue;
                }
                let e = k.matrix_weight(&a, rank).scale(&k.lambda());
                let slot = out.entry(w).or_default().entry(prof.p.clone()).or_insert_with(|| Coeff::zero(rank));
                *slot = slot.add(&e);
            }
        }
        out
    }
}

/// Sum of the logarithms of central rays along `m`.
pub fn ray_log(d: &ScatteringDiagram, m: LatticeVector) -> Result<LieElement> {
    let mut acc = LieElement::zero(d.ring());
    for w in d.walls() {
        if w.kind == SupportKind::Ray && w.m == m && w.base == RPoint::origin() {
            acc = acc.add(&w.log)?;
        }
    }
    Ok(acc)
}

type CoordKey = (Vec<u32>, usize, SymMono);

fn flatten(entries: &BTreeMap<Vec<u32>, Coeff>, rank: usize) -> Sparse<CoordKey> {
    let mut out = Sparse::new();
    for (p, c) in entries {
        for (i, e) in c.lift(rank).entries().iter().enumerate() {
            for (mono, x) in e.terms() {
                if !x.is_zero() {
                    out.insert((p.clone(), i, mono.clone()), x.clone());
                }
            }
        }
    }
    out
}

/// Invariants read off one ray.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct InvariantTable {
    /// `(P, l_d, N_{0,P})`.
    pub profiles: Vec<(Vec<u32>, u64, Q)>,
    /// Relative invariants fixed by the matrix part.
    pub weights: BTreeMap<WeightClass, Q>,
    /// Classes the matrix part leaves free.
    pub undetermined: Vec<WeightClass>,
    /// Directions of the residual solution space.
    pub kernel: Vec<BTreeMap<WeightClass, Q>>,
}

impl InvariantTable {
    pub fn profile(&self, p: &[u32]) -> Option<&Q> {
        self.profiles.iter().find(|(x, _, _)| x == p).map(|(_, _, n)| n)
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        for (p, l, n) in &self.profiles {
            s.push_str(&format!("N_0,P {:?} (l = {l}) = {}\n", p, crate::rational::fmt_q(n)));
        }
        for (w, n) in &self.weights {
            s.push_str(&format!("N_0,w {} = {}\n", render_class(w), crate::rational::fmt_q(n)));
        }
        for w in &self.undetermined {
            s.push_str(&format!("N_0,w {} undetermined\n", render_class(w)));
        }
        s
    }
}

/// Reads `N_{0,P}` from the scalar part and solves the matrix part of the
/// ray `m_d` for the relative invariants `N_{0,w}`.
pub fn extract_from_wall(seed: &GwSeed, d: &ScatteringDiagram, m_d: LatticeVector) -> Result<InvariantTable> {
    if !Ring::same(seed.ring(), d.ring()) {
        return Err(Error::RingMismatch);
    }
    let log = ray_log(d, m_d)?;
    let n = m_d.normal();
    let rank = seed.ring().rank();
    let mut table = InvariantTable::default();
    let mut matrix_part: BTreeMap<Vec<u32>, Coeff> = BTreeMap::new();
    for prof in seed.profiles_on(m_d) {
        let deg = seed.ring().t_monomial(&prof.p);
        let k = prof.total();
        let (mat, der) = match log.terms().find(|((e, dg), _)| *e == k && *dg == deg) {
            Some((_, c)) => (c.mat.clone(), c.d.clone()),
            None => (Coeff::zero(rank), [Poly::zero(), Poly::zero()]),
        };
        let a = if n.a != 0 { der[0].scale(&(Q::one() / q(n.a))) } else { der[1].scale(&(Q::one() / q(n.b))) };
        let a = a
            .as_constant()
            .ok_or_else(|| Error::Hypothesis("scalar part is not rational".into()))?;
        let l = prof.index();
        table.profiles.push((prof.p.clone(), l, a / q(l as i64)));
        if !mat.is_zero() {
            matrix_part.insert(prof.p.clone(), mat);
        }
    }
    let system = seed.v_system(m_d);
    let classes: Vec<WeightClass> = system.keys().cloned().collect();
    let cols: Vec<Sparse<CoordKey>> = system.values().map(|v| flatten(v, rank)).collect();
    let rhs = flatten(&matrix_part, rank);
    let (x, ker) = linalg::solve(&cols, &rhs)
        .ok_or_else(|| Error::Hypothesis("matrix part is not a combination of the V_w".into()))?;
    for (j, w) in classes.iter().enumerate() {
        if ker.iter().all(|v| v[j].is_zero()) {
            table.weights.insert(w.clone(), x[j].clone());
        } else {
            table.undetermined.push(w.clone());
        }
    }
    table.kernel = ker
        .iter()
        .map(|v| classes.iter().cloned().zip(v.iter().cloned()).filter(|(_, c)| !c.is_zero()).collect())
        .collect();
    Ok(table)
}

/// The log of the ray along `m_d` assembled from tropical counts:
/// `Σ_P Σ_{k ⊢ P} N^trop_{w(k)} (Σ l k_jl A_j^l, l_d) Π R_l^k/k! t^P z^{Σ P_j m_j}`.
pub fn f_trop(seed: &GwSeed, m_d: LatticeVector, count_seed: u64) -> Result<LieElement> {
    let ring = seed.ring();
    let rank = ring.rank();
    let a = seed.matrices();
    let mut out = LieElement::zero(ring);
    for prof in seed.profiles_on(m_d) {
        let deg = ring.t_monomial(&prof.p);
        let k_vec = prof.total();
        for k in enumerate_partitions(&prof) {
            let w = k.weights(&prof.m);
            if w.iter().all(|v| v.wedge(m_d) == 0) {
                continue;
            }
            let n_trop = q(count_tropical(&w, count_seed)? as i64);
            if n_trop.is_zero() {
                continue;
            }
            let f = k.trop_factor() * &n_trop;
            let mat = k.matrix_weight(&a, rank).scale(&f);
            out = out.add(&LieElement::matrix_term(ring, k_vec, deg.clone(), mat))?;
            let sca = Poly::constant(f * q(prof.index() as i64));
            out = out.add(&LieElement::deriv_term(ring, k_vec, deg.clone(), sca, m_d.normal()))?;
        }
    }
    Ok(out)
}

/// One weight class of the basis analysis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisClass {
    pub w: WeightClass,
    /// `(P, k, λ_k, e_k)`.
    pub terms: Vec<(Vec<u32>, Partition, Q, Poly)>,
    /// `Σ_k e_k`.
    pub e: Poly,
    /// `V_w = Σ_k λ_k e_k`.
    pub v: Poly,
}

/// A monomial expected to occur in exactly one `V_w`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Designated {
    pub label: String,
    pub class: WeightClass,
    pub monomial: SymMono,
    /// Classes whose `V_w` contains the monomial.
    pub found_in: Vec<WeightClass>,
}

impl Designated {
    pub fn is_unique(&self) -> bool {
        self.found_in == [self.class.clone()]
    }
}

/// Span analysis of the generating vectors for `ℓ1` lines on `(1,0)` with
/// symbols `A_i`, `t_i` and `ℓ2` lines on `(0,1)` with `Q_j`, `s_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisAnalysis {
    pub ell: (u32, u32),
    pub target: (u32, u32),
    pub names: Vec<String>,
    pub classes: Vec<BasisClass>,
    pub e_rank: usize,
    pub v_rank: usize,
    /// Kernel basis of the `e` vectors, coefficients in class order.
    pub e_relations: Vec<Vec<Q>>,
    pub v_relations: Vec<Vec<Q>>,
    pub designated: Vec<Designated>,
}

fn poly_sparse(p: &Poly) -> Sparse<SymMono> {
    p.terms().map(|(m, c)| (m.clone(), c.clone())).collect()
}

fn compositions(total: u32, parts: u32) -> Vec<Vec<u32>> {
    if parts == 1 {
        return vec![vec![total]];
    }
    (0..=total)
        .rev()
        .flat_map(|first| {
            compositions(total - first, parts - 1).into_iter().map(move |mut rest| {
                rest.insert(0, first);
                rest
            })
        })
        .collect()
}

fn mono(factors: &[(u16, u32)]) -> SymMono {
    let mut v: Vec<(u16, u32)> = factors.iter().copied().filter(|(_, e)| *e > 0).collect();
    v.sort_unstable();
    v
}

fn containing(classes: &[BasisClass], m: &SymMono) -> Vec<WeightClass> {
    classes.iter().filter(|c| !c.v.coefficient(m).is_zero()).map(|c| c.w.clone()).collect()
}

pub fn analyze_basis(ell1: u32, ell2: u32, target: (u32, u32)) -> Result<BasisAnalysis> {
    if ell1 == 0 || ell2 == 0 {
        return Err(Error::Input("need at least one line in each direction".into()));
    }
    let n = (ell1 + ell2) as usize;
    let mut names: Vec<String> = Vec::new();
    names.extend((1..=ell1).map(|i| format!("A{i}")));
    names.extend((1..=ell2).map(|j| format!("Q{j}")));
    names.extend((1..=ell1).map(|i| format!("t{i}")));
    names.extend((1..=ell2).map(|j| format!("s{j}")));
    let sym = |line: usize| line as u16;
    let var = |line: usize| (n + line) as u16;
    let dirs: Vec<LatticeVector> = (0..n)
        .map(|i| if i < ell1 as usize { LatticeVector::new(1, 0) } else { LatticeVector::new(0, 1) })
        .collect();
    let mut by_class: BTreeMap<WeightClass, BasisClass> = BTreeMap::new();
    for p1 in compositions(target.0, ell1) {
        for p2 in compositions(target.1, ell2) {
            let p: Vec<u32> = p1.iter().chain(&p2).copied().collect();
            let prof = TangencyProfile { p: p.clone(), m: dirs.clone() };
            let tmono: Vec<(u16, u32)> = p.iter().enumerate().map(|(i, &e)| (var(i), e)).collect();
            let tpoly = Poly::monomial(mono(&tmono), Q::one());
            for k in enumerate_partitions(&prof) {
                let mut weight = Poly::zero();
                for (j, l, c) in k.parts() {
                    weight = weight.add(&Poly::monomial(mono(&[(sym(j), l)]), q((l * c) as i64)));
                }
                let e = weight.mul(&tpoly);
                let lambda = k.lambda();
                let w = k.class(&dirs);
                let cls = by_class.entry(w.clone()).or_insert_with(|| BasisClass {
                    w,
                    terms: Vec::new(),
                    e: Poly::zero(),
                    v: Poly::zero(),
                });
                cls.e = cls.e.add(&e);
                cls.v = cls.v.add(&e.scale(&lambda));
                cls.terms.push((p.clone(), k, lambda, e));
            }
        }
    }
    let classes: Vec<BasisClass> = by_class.into_values().collect();
    let e_cols: Vec<_> = classes.iter().map(|c| poly_sparse(&c.e)).collect();
    let v_cols: Vec<_> = classes.iter().map(|c| poly_sparse(&c.v)).collect();
    let mut designated = Vec::new();
    if target == (ell1, ell2) {
        let all_t: Vec<(u16, u32)> = (0..ell1 as usize).map(|i| (var(i), 1)).collect();
        let all_s: Vec<(u16, u32)> = (0..ell2 as usize).map(|j| (var(ell1 as usize + j), 1)).collect();
        let ones = |count: u32, v: LatticeVector| vec![v; count as usize];
        let (m1, m2) = (LatticeVector::new(1, 0), LatticeVector::new(0, 1));
        let mut push = |label: String, w: Vec<LatticeVector>, factors: Vec<(u16, u32)>| {
            let monomial = mono(&factors);
            let found_in = containing(&classes, &monomial);
            designated.push(Designated { label, class: weight_class(&w), monomial, found_in });
        };
        let mut f = vec![(sym(0), 1)];
        f.extend(&all_t);
        f.extend(&all_s);
        push("a".into(), [ones(ell1, m1), ones(ell2, m2)].concat(), f);
        for j in 2..=ell1 {
            let mut f = vec![(sym(0), j), (var(0), j)];
            f.extend((1..=(ell1 - j) as usize).map(|i| (var(i), 1)));
            f.extend(&all_s);
            let w = [vec![m1.scale(j as i64)], ones(ell1 - j, m1), ones(ell2, m2)].concat();
            push(format!("b{j}"), w, f);
        }
        for j in 2..=ell2 {
            let q1 = ell1 as usize;
            let mut f = vec![(sym(q1), j), (var(q1), j)];
            f.extend(&all_t);
            f.extend((1..=(ell2 - j) as usize).map(|i| (var(q1 + i), 1)));
            let w = [ones(ell1, m1), vec![m2.scale(j as i64)], ones(ell2 - j, m2)].concat();
            push(format!("c{j}"), w, f);
        }
    }
    Ok(BasisAnalysis {
        ell: (ell1, ell2),
        target,
        names,
        e_rank: linalg::rank(&e_cols),
        v_rank: linalg::rank(&v_cols),
        e_relations: linalg::kernel(&e_cols),
        v_relations: linalg::kernel(&v_cols),
        classes,
        designated,
    })
}

impl BasisAnalysis {
    /// Classes whose `V_w` contains the monomial.
    pub fn classes_containing(&self, m: &SymMono) -> Vec<WeightClass> {
        containing(&self.classes, m)
    }

    /// A monomial in the analysis' symbols, e.g. `[("A1", 2), ("t1", 2)]`.
    pub fn monomial(&self, factors: &[(&str, u32)]) -> Result<SymMono> {
        let mut v = Vec::new();
        for (name, e) in factors {
            let id = self
                .names
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| Error::Input(format!("unknown symbol {name}")))?;
            v.push((id as u16, *e));
        }
        Ok(mono(&v))
    }

    pub fn class_index(&self, w: &[LatticeVector]) -> Option<usize> {
        let w = weight_class(w);
        self.classes.iter().position(|c| c.w == w)
    }

    /// Whether `Σ c_w e_w = 0`.
    pub fn e_relation_holds(&self, coeffs: &[(WeightClass, Q)]) -> Result<bool> {
        let mut acc = Poly::zero();
        for (w, c) in coeffs {
            let i = self
                .class_index(w)
                .ok_or_else(|| Error::Input(format!("unknown class {}", render_class(w))))?;
            acc = acc.add(&self.classes[i].e.scale(c));
        }
        Ok(acc.is_zero())
    }

    /// Every reported kernel vector annihilates its vectors.
    pub fn verify_relations(&self) -> bool {
        let check = |rels: &[Vec<Q>], pick: &dyn Fn(&BasisClass) -> &Poly| {
            rels.iter().all(|r| {
                let mut acc = Poly::zero();
                for (c, cls) in r.iter().zip(&self.classes) {
                    acc = acc.add(&pick(cls).scale(c));
                }
                acc.is_zero()
            })
        };
        check(&self.e_relations, &|c| &c.e) && check(&self.v_relations, &|c| &c.v)
    }

    /// `λ_k ≠ 0` for every partition.
    pub fn lambdas_nonzero(&self) -> bool {
        self.classes.iter().all(|c| c.terms.iter().all(|(_, _, l, _)| !l.is_zero()))
    }

    pub fn render_relation(&self, r: &[Q]) -> String {
        let mut parts = Vec::new();
        for (c, cls) in r.iter().zip(&self.classes) {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            let mag = crate::rational::fmt_q(&c.abs());
            let coef = if mag == "1" { String::new() } else { format!("{mag}*") };
            parts.push(format!("{sign} {coef}e{}", render_class(&cls.w)));
        }
        format!("{} = 0", parts.join(" ").trim_start_matches("+ "))
    }

    /// Ranks, kernel relations and designated monomials as plain text.
    pub fn render(&self) -> String {
        let mut s = format!(
            "basis ell = ({}, {}) target = ({}, {}): {} classes, rank e = {}, rank V = {}\n",
            self.ell.0,
            self.ell.1,
            self.target.0,
            self.target.1,
            self.classes.len(),
            self.e_rank,
            self.v_rank
        );
        for (i, c) in self.classes.iter().enumerate() {
            s.push_str(&format!("  class {i}: {} ({} partitions)\n", render_class(&c.w), c.terms.len()));
        }
        for r in &self.e_relations {
            s.push_str(&format!("  e relation: {}\n", self.render_relation(r)));
        }
        for r in &self.v_relations {
            s.push_str(&format!("  V relation: {}\n", self.render_relation(r)));
        }
        s.push_str(&format!("  relations verified: {}\n", self.verify_relations()));
        for d in &self.designated {
            let mono = Poly::monomial(d.monomial.clone(), Q::one()).render(&self.names);
            let status = if d.is_unique() { "unique" } else { "shared" };
            s.push_str(&format!("  witness {} {} for {}: {status}\n", d.label, mono, render_class(&d.class)));
        }
        s
    }
}
