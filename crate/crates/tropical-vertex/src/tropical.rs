//! Rational tropical curves, their multiplicities, the correspondence with
//! rays of a completed perturbed diagram, and an independent enumerator.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use num::Signed;

use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::lattice::{LatticeVector, RPoint};
use crate::perturbation::{random_offsets, PWall, PerturbedDiagram, MAX_ATTEMPTS};
use crate::rational::{q, Q};
use crate::scattering::SupportKind;
use crate::series::Ring;

/// Largest number of ends accepted by [`oracle_enumerate`].
pub const ORACLE_MAX_ENDS: usize = 6;

/// An edge oriented towards the out end. `tail == None` marks an incoming
/// end, `head == None` the out end.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Edge {
    pub tail: Option<usize>,
    pub head: Option<usize>,
    pub direction: LatticeVector,
    pub weight: u64,
    pub leaf: Option<usize>,
    pub anchor: Option<RPoint>,
}

impl Edge {
    pub fn weighted(&self) -> LatticeVector {
        self.direction.scale(self.weight as i64)
    }
}

/// A parametrized rational tropical curve: vertex positions and edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TropicalCurve {
    pub vertices: Vec<RPoint>,
    pub edges: Vec<Edge>,
}

impl TropicalCurve {
    /// Every vertex balances: incoming weighted directions sum to outgoing.
    pub fn check_balancing(&self) -> Result<()> {
        for v in 0..self.vertices.len() {
            let mut inflow = LatticeVector::ZERO;
            let mut outflow = LatticeVector::ZERO;
            for e in &self.edges {
                if e.head == Some(v) {
                    inflow = inflow + e.weighted();
                }
                if e.tail == Some(v) {
                    outflow = outflow + e.weighted();
                }
            }
            if inflow != outflow {
                return Err(Error::Hypothesis(format!("vertex {v} is not balanced")));
            }
        }
        Ok(())
    }

    /// First Betti number of the graph of bounded vertices and edges.
    pub fn genus(&self) -> usize {
        let n = self.vertices.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut Vec<usize>, x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        let mut cycles = 0;
        for e in &self.edges {
            if let (Some(a), Some(b)) = (e.tail, e.head) {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                if ra == rb {
                    cycles += 1;
                } else {
                    parent[ra] = rb;
                }
            }
        }
        cycles
    }

    fn incident(&self, v: usize) -> Vec<&Edge> {
        self.edges.iter().filter(|e| e.tail == Some(v) || e.head == Some(v)).collect()
    }

    /// `w1 w2 |m1 ∧ m2|` at a trivalent vertex; the three pairings agree.
    pub fn vertex_multiplicity(&self, v: usize) -> Result<u64> {
        let edges = self.incident(v);
        if edges.len() != 3 {
            return Err(Error::Hypothesis(format!("vertex {v} has valency {}", edges.len())));
        }
        // outward weighted directions
        let out: Vec<LatticeVector> =
            edges.iter().map(|e| if e.tail == Some(v) { e.weighted() } else { -e.weighted() }).collect();
        let m01 = out[0].wedge(out[1]).unsigned_abs();
        let m02 = out[0].wedge(out[2]).unsigned_abs();
        let m12 = out[1].wedge(out[2]).unsigned_abs();
        if m01 != m02 || m01 != m12 {
            return Err(Error::Hypothesis(format!("vertex {v} multiplicities disagree")));
        }
        Ok(m01)
    }

    /// Product of vertex multiplicities.
    pub fn multiplicity(&self) -> Result<u64> {
        (0..self.vertices.len()).map(|v| self.vertex_multiplicity(v)).product()
    }

    /// The weighted direction of the out end.
    pub fn out_weight(&self) -> LatticeVector {
        self.edges.iter().find(|e| e.head.is_none()).map(Edge::weighted).unwrap_or(LatticeVector::ZERO)
    }

    /// Incoming ends as `(leaf label, weighted direction)`, sorted by label.
    pub fn ends(&self) -> Vec<(usize, LatticeVector)> {
        let mut v: Vec<_> = self.edges.iter().filter_map(|e| e.leaf.map(|l| (l, e.weighted()))).collect();
        v.sort();
        v
    }

    /// Vertex labels replaced by positions, edges sorted; equal for equal
    /// embedded curves however they were built.
    pub fn signature(&self) -> Vec<(Option<RPoint>, Option<RPoint>, LatticeVector, u64, Option<usize>)> {
        let pos = |v: Option<usize>| v.map(|i| self.vertices[i].clone());
        let mut v: Vec<_> =
            self.edges.iter().map(|e| (pos(e.tail), pos(e.head), e.direction, e.weight, e.leaf)).collect();
        v.sort();
        v
    }

    /// Text adjacency format, one edge per line.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (i, p) in self.vertices.iter().enumerate() {
            let _ = writeln!(s, "vertex {i} {p}");
        }
        for e in &self.edges {
            let end = |v: Option<usize>| v.map_or("inf".to_string(), |i| i.to_string());
            let _ = write!(s, "edge {} -> {} dir {} weight {}", end(e.tail), end(e.head), e.direction, e.weight);
            if let Some(l) = e.leaf {
                let _ = write!(s, " leaf {l}");
            }
            if let Some(a) = &e.anchor {
                let _ = write!(s, " anchor {a}");
            }
            s.push('\n');
        }
        s
    }
}

/// The curve traced by the ancestors of ray `id`: one vertex per ancestor
/// ray, one incoming end per leaf line, the out end along the ray itself.
pub fn curve_from_ray(d: &PerturbedDiagram, id: usize) -> Result<TropicalCurve> {
    let anc = d.ancestors(id);
    for (i, &x) in anc.iter().enumerate() {
        for &y in &anc[i + 1..] {
            if !d.wall(x).a.commutator(&d.wall(y).a).is_zero() {
                return Err(Error::Hypothesis(format!("walls {x} and {y} carry non-commuting matrices")));
            }
        }
    }
    let rays: Vec<usize> = anc.iter().copied().filter(|&a| d.wall(a).kind == SupportKind::Ray).collect();
    let vertex_of = |wall: usize| rays.iter().position(|&r| r == wall);
    let vertices = rays.iter().map(|&r| d.wall(r).base.clone()).collect();
    let mut edges = Vec::new();
    for &a in &anc {
        let w = d.wall(a);
        let child = anc
            .iter()
            .copied()
            .find(|&c| d.wall(c).parents.is_some_and(|(p, q)| p == a || q == a));
        let is_line = w.kind == SupportKind::Line;
        edges.push(Edge {
            tail: if is_line { None } else { vertex_of(a) },
            head: child.and_then(vertex_of),
            direction: w.m,
            weight: w.l as u64,
            leaf: is_line.then_some(a),
            anchor: is_line.then(|| w.base.clone()),
        });
    }
    let c = TropicalCurve { vertices, edges };
    c.check_balancing()?;
    Ok(c)
}

/// The single-term wall function rebuilt from the curve multiplicity and the
/// leaf data `a_q = c_q / l_q`: `A = Mult Σ_p A_p Π_{q≠p} a_q`,
/// `c = l Mult Π_q a_q`.
pub fn reconstruct_from_leaves(d: &PerturbedDiagram, id: usize) -> Result<(Coeff, Q)> {
    let mult = q(curve_from_ray(d, id)?.multiplicity()? as i64);
    let leaves = d.leaves(id);
    let leaf_a = |o: usize| &d.wall(o).c / q(d.wall(o).l as i64);
    let mut a = Coeff::zero(d.ring().rank());
    for &p in &leaves {
        let mut term = d.wall(p).a.clone();
        for &o in &leaves {
            if o != p {
                term = term.scale(&leaf_a(o));
            }
        }
        a = a.add(&term);
    }
    let prod: Q = leaves.iter().map(|&o| leaf_a(o)).product();
    let w = d.wall(id);
    Ok((a.scale(&mult), prod * q(w.l as i64) * mult))
}

/// Lines `ξ_r + ℝ w_r` with weight `|w_r|`, unit scalar part and one private
/// `u` flag each.
pub fn curve_type_lines(w: &[LatticeVector], anchors: &[RPoint]) -> Result<PerturbedDiagram> {
    if w.is_empty() || w.iter().any(|v| v.is_zero()) {
        return Err(Error::Input("weights must be nonzero".into()));
    }
    if anchors.len() != w.len() {
        return Err(Error::Input("one anchor per weight".into()));
    }
    let s = w.len();
    let ring = Ring::r_tilde(s, 1).shared();
    let target = Ring::r_n(s, 1).shared();
    let lines = w
        .iter()
        .zip(anchors)
        .enumerate()
        .map(|(r, (v, xi))| PWall {
            id: r,
            kind: SupportKind::Line,
            base: xi.clone(),
            m: v.primitive(),
            l: v.index() as u32,
            index_set: vec![(r as u16 + 1, 1)],
            a: Coeff::zero(1),
            c: q(1),
            parents: None,
            generation: 0,
        })
        .collect();
    PerturbedDiagram::from_lines(&ring, &target, lines)
}

fn check_type(w: &[LatticeVector]) -> Result<()> {
    if w.is_empty() || w.iter().any(|v| v.is_zero()) {
        return Err(Error::Input("weights must be nonzero".into()));
    }
    if w.iter().fold(LatticeVector::ZERO, |a, &b| a + b).is_zero() {
        return Err(Error::Input("weights sum to zero".into()));
    }
    Ok(())
}

/// Anchor points drawn from `seed`.
pub fn generic_anchors(s: usize, seed: u64) -> Vec<RPoint> {
    random_offsets(s, seed)
}

/// All curves of type `(w, ξ)` read off a completed diagram: walls whose
/// leaves are every line.
pub fn curves_by_scattering(w: &[LatticeVector], anchors: &[RPoint]) -> Result<Vec<TropicalCurve>> {
    check_type(w)?;
    let d = curve_type_lines(w, anchors)?.complete()?;
    let all: Vec<usize> = (0..w.len()).collect();
    let mut out = Vec::new();
    for wall in d.walls() {
        if d.leaves(wall.id) == all {
            let c = curve_from_ray(&d, wall.id)?;
            if reconstruct_from_leaves(&d, wall.id)? != (wall.a.clone(), wall.c.clone()) {
                return Err(Error::Hypothesis(format!("wall {} disagrees with its curve", wall.id)));
            }
            out.push(c);
        }
    }
    Ok(out)
}

/// `N^trop_w`: curves of type `(w, ξ)` counted with multiplicity, for
/// generic anchors drawn from `seed`.
pub fn count_tropical(w: &[LatticeVector], seed: u64) -> Result<u64> {
    check_type(w)?;
    let mut last = None;
    for attempt in 0..MAX_ATTEMPTS {
        let anchors = generic_anchors(w.len(), seed.wrapping_add(attempt.wrapping_mul(0x9E37_79B9_7F4A_7C15)));
        match curves_by_scattering(w, &anchors) {
            Ok(curves) => return curves.iter().map(TropicalCurve::multiplicity).sum(),
            Err(e @ Error::Genericity(_)) => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last.unwrap_or_else(|| Error::Genericity("no attempt made".into())))
}

/// Unordered rooted binary trees with the given leaf labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tree {
    Leaf(usize),
    Node(Box<Tree>, Box<Tree>),
}

/// Every rooted binary tree with leaves labelled by `labels`, each once.
pub fn binary_trees(labels: &[usize]) -> Vec<Tree> {
    match labels {
        [] => vec![],
        [x] => vec![Tree::Leaf(*x)],
        [first, rest @ ..] => {
            let mut out = Vec::new();
            // the left part always holds `first`; the right part is nonempty
            for mask in 0..(1u64 << rest.len()) - 1 {
                let mut left = vec![*first];
                let mut right = Vec::new();
                for (i, &x) in rest.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        left.push(x);
                    } else {
                        right.push(x);
                    }
                }
                for l in binary_trees(&left) {
                    for r in binary_trees(&right) {
                        out.push(Tree::Node(Box::new(l.clone()), Box::new(r)));
                    }
                }
            }
            out
        }
    }
}

/// Intersection of `p + ℝ d` and `o + ℝ e`, with both parameters.
fn meet(p: &RPoint, d: LatticeVector, o: &RPoint, e: LatticeVector) -> Option<(RPoint, Q, Q)> {
    let det = d.wedge(e);
    if det == 0 {
        return None;
    }
    let det = q(det);
    let s = o.wedge_dir(p, e) / &det;
    let r = o.wedge_dir(p, d) / &det;
    Some((p.offset(&s, d), s, r))
}

/// Where the edge leaving a subtree runs: a point on it, its weighted
/// direction, and whether it must start at that point.
struct Placed {
    point: RPoint,
    dir: LatticeVector,
    vertex: Option<usize>,
}

fn place(t: &Tree, w: &[LatticeVector], xi: &[RPoint], c: &mut TropicalCurve) -> Option<Placed> {
    match t {
        Tree::Leaf(r) => Some(Placed { point: xi[*r].clone(), dir: w[*r], vertex: None }),
        Tree::Node(a, b) => {
            let pa = place(a, w, xi, c)?;
            let pb = place(b, w, xi, c)?;
            let (p, s, r) = meet(&pa.point, pa.dir, &pb.point, pb.dir)?;
            if (pa.vertex.is_some() && !s.is_positive()) || (pb.vertex.is_some() && !r.is_positive()) {
                return None;
            }
            let v = c.vertices.len();
            c.vertices.push(p.clone());
            for (child, tree) in [(&pa, a), (&pb, b)] {
                let leaf = match tree.as_ref() {
                    Tree::Leaf(l) => Some(*l),
                    Tree::Node(..) => None,
                };
                c.edges.push(Edge {
                    tail: child.vertex,
                    head: Some(v),
                    direction: child.dir.primitive(),
                    weight: child.dir.index(),
                    leaf,
                    anchor: leaf.map(|l| xi[l].clone()),
                });
            }
            Some(Placed { point: p, dir: pa.dir + pb.dir, vertex: Some(v) })
        }
    }
}

/// Every curve of type `(w, ξ)`, found by solving vertex positions for each
/// combinatorial type of rooted trivalent tree.
pub fn oracle_enumerate(w: &[LatticeVector], xi: &[RPoint]) -> Result<Vec<TropicalCurve>> {
    check_type(w)?;
    if w.len() > ORACLE_MAX_ENDS {
        return Err(Error::Input(format!("oracle handles at most {ORACLE_MAX_ENDS} ends")));
    }
    if xi.len() != w.len() {
        return Err(Error::Input("one anchor per weight".into()));
    }
    let labels: Vec<usize> = (0..w.len()).collect();
    let mut out = Vec::new();
    for t in binary_trees(&labels) {
        let mut c = TropicalCurve { vertices: Vec::new(), edges: Vec::new() };
        if let Some(root) = place(&t, w, xi, &mut c) {
            let leaf = match t {
                Tree::Leaf(l) => Some(l),
                Tree::Node(..) => None,
            };
            c.edges.push(Edge {
                tail: root.vertex,
                head: None,
                direction: root.dir.primitive(),
                weight: root.dir.index(),
                leaf,
                anchor: leaf.map(|l| xi[l].clone()),
            });
            out.push(c);
        }
    }
    Ok(out)
}

/// Sum of multiplicities over [`oracle_enumerate`].
pub fn count_by_oracle(w: &[LatticeVector], xi: &[RPoint]) -> Result<u64> {
    oracle_enumerate(w, xi)?.iter().map(TropicalCurve::multiplicity).sum()
}

/// Distinct vertex positions of a set of curves.
pub fn vertex_set(curves: &[TropicalCurve]) -> BTreeSet<RPoint> {
    curves.iter().flat_map(|c| c.vertices.iter().cloned()).collect()
}
