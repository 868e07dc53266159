//! Walls, path-ordered products, consistency and order-by-order completion.

use std::cmp::Ordering;
use std::sync::Arc;

use num::Zero;

use crate::error::{Error, Result};
use crate::lattice::{LatticeVector, RPoint};
use crate::lie::{bch, GroupElement, LieElement};
use crate::series::{Ring, Series};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SupportKind {
    Line,
    Ray,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Wall {
    pub m: LatticeVector,
    pub kind: SupportKind,
    pub base: RPoint,
    pub log: LieElement,
}

impl Wall {
    /// Validates the wall invariants: primitive `m`, exponents on `m`'s ray,
    /// derivations along `normal(m)`.
    pub fn new(m: LatticeVector, kind: SupportKind, base: RPoint, log: LieElement) -> Result<Wall> {
        if !m.is_primitive() {
            return Err(Error::InvalidWall(format!("direction {m} is not primitive")));
        }
        for ((k, d), c) in log.terms() {
            if !k.on_ray(m) {
                return Err(Error::InvalidWall(format!("exponent {k} off the ray of {m}")));
            }
            if d.is_unit() {
                return Err(Error::InvalidWall(format!("term at {k} has no formal parameter")));
            }
            if !c.pair(m).is_zero() {
                return Err(Error::InvalidWall(format!("derivation at {k} not normal to {m}")));
            }
        }
        Ok(Wall { m, kind, base, log })
    }

    pub fn line(m: LatticeVector, log: LieElement) -> Result<Wall> {
        Wall::new(m, SupportKind::Line, RPoint::origin(), log)
    }

    pub fn ray(m: LatticeVector, log: LieElement) -> Result<Wall> {
        Wall::new(m, SupportKind::Ray, RPoint::origin(), log)
    }

    /// A wall from its two functions `(F, f)`.
    pub fn from_functions(m: LatticeVector, kind: SupportKind, base: RPoint, mat: &Series, sca: &Series) -> Result<Wall> {
        let ml = mat.log()?;
        let sl = sca.log()?;
        Wall::new(m, kind, base, LieElement::from_logs(m, &ml, &sl)?)
    }

    /// `(exp A, exp a)` with `log = (A, a ∂_{normal(m)})`.
    pub fn functions(&self) -> Result<(Series, Series)> {
        self.log.wall_functions(self.m)
    }

    pub fn element(&self) -> GroupElement {
        GroupElement::exp(self.log.clone())
    }

    pub fn is_central(&self) -> bool {
        self.base.is_origin()
    }

    /// Whether `p` lies on the support, and whether it is the ray's endpoint.
    pub fn locate(&self, p: &RPoint) -> Option<bool> {
        if !p.wedge_dir(&self.base, self.m).is_zero() {
            return None;
        }
        match self.kind {
            SupportKind::Line => Some(false),
            SupportKind::Ray => match p.dot_dir(&self.base, self.m).cmp(&Zero::zero()) {
                Ordering::Less => None,
                Ordering::Equal => Some(true),
                Ordering::Greater => Some(false),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScatteringDiagram {
    ring: Arc<Ring>,
    walls: Vec<Wall>,
}

/// A nonzero path-ordered product around a singular point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Defect {
    pub point: RPoint,
    pub log: LieElement,
}

impl ScatteringDiagram {
    pub fn new(ring: &Arc<Ring>) -> Self {
        ScatteringDiagram { ring: ring.clone(), walls: Vec::new() }
    }

    pub fn with_walls(ring: &Arc<Ring>, walls: Vec<Wall>) -> Result<Self> {
        let mut d = ScatteringDiagram::new(ring);
        for w in walls {
            d.push(w)?;
        }
        Ok(d)
    }

    pub fn push(&mut self, w: Wall) -> Result<()> {
        if !Ring::same(&self.ring, w.log.ring()) {
            return Err(Error::RingMismatch);
        }
        self.walls.push(w);
        Ok(())
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn walls(&self) -> &[Wall] {
        &self.walls
    }

    pub fn is_central(&self) -> bool {
        self.walls.iter().all(Wall::is_central)
    }

    /// Walls sorted by kind, base point, angle and content.
    pub fn canonical(&self) -> ScatteringDiagram {
        let mut walls: Vec<Wall> = self.walls.iter().filter(|w| !w.log.is_zero()).cloned().collect();
        walls.sort_by(|a, b| {
            a.kind
                .cmp(&b.kind)
                .then_with(|| a.base.cmp(&b.base))
                .then_with(|| a.m.angle_cmp(b.m))
                .then_with(|| a.log.render().cmp(&b.log.render()))
        });
        ScatteringDiagram { ring: self.ring.clone(), walls }
    }

    /// Rays added on top of `seed`: walls of `self` absent from `seed`.
    pub fn new_rays(&self, seed: &ScatteringDiagram) -> Vec<Wall> {
        self.walls.iter().filter(|w| !seed.walls.contains(w)).cloned().collect()
    }

    /// Singular points: ray endpoints and pairwise intersections of
    /// non-parallel supports.
    pub fn singular_points(&self) -> Vec<RPoint> {
        let mut pts: Vec<RPoint> = Vec::new();
        for w in &self.walls {
            if w.kind == SupportKind::Ray {
                pts.push(w.base.clone());
            }
        }
        for (i, a) in self.walls.iter().enumerate() {
            for b in &self.walls[i + 1..] {
                if let Some(p) = intersect(a, b) {
                    pts.push(p);
                }
            }
        }
        pts.sort();
        pts.dedup();
        pts
    }

    /// The product along a small anticlockwise loop around `p`, starting just
    /// below the direction `(1,0)`. The first wall crossed acts first.
    pub fn path_ordered_product(&self, p: &RPoint, order: u32) -> Result<GroupElement> {
        let mut crossings: Vec<(LatticeVector, bool, usize)> = Vec::new();
        for (i, w) in self.walls.iter().enumerate() {
            match w.locate(p) {
                None => {}
                Some(true) => crossings.push((w.m, true, i)),
                Some(false) => {
                    crossings.push((w.m, true, i));
                    crossings.push((-w.m, false, i));
                }
            }
        }
        crossings.sort_by(|a, b| a.0.angle_cmp(b.0).then(a.2.cmp(&b.2)));
        let mut acc = LieElement::zero(&self.ring);
        for (_, positive, i) in crossings {
            let x = &self.walls[i].log;
            let x = if positive { x.clone() } else { x.neg() };
            acc = bch(&x, &acc, order)?;
        }
        Ok(GroupElement::exp(acc))
    }

    /// Defects at every singular point, modulo total degree `order + 1`.
    pub fn check_consistency(&self, order: u32) -> Result<Vec<Defect>> {
        let mut out = Vec::new();
        for p in self.singular_points() {
            let g = self.path_ordered_product(&p, order)?;
            if !g.is_identity() {
                out.push(Defect { point: p, log: g.into_log() });
            }
        }
        Ok(out)
    }

    pub fn is_consistent(&self, order: u32) -> Result<bool> {
        Ok(self.check_consistency(order)?.is_empty())
    }

    /// Adds rays from the origin, degree by degree, until the diagram is
    /// consistent up to total degree `order`.
    pub fn complete_ks(&self, order: u32) -> Result<ScatteringDiagram> {
        if !self.is_central() {
            return Err(Error::Input("completion needs every wall through the origin".into()));
        }
        let order = order.min(self.ring.max_degree());
        let mut d = self.clone();
        let origin = RPoint::origin();
        for k in 1..=order {
            let defect = d.path_ordered_product(&origin, k)?.into_log();
            for (m, part) in defect.by_direction() {
                let correction = part.neg();
                let slot = d
                    .walls
                    .iter()
                    .position(|w| w.kind == SupportKind::Ray && w.m == m && w.is_central());
                match slot {
                    Some(i) => {
                        let merged = bch(&d.walls[i].log, &correction, order)?;
                        d.walls[i].log = merged;
                    }
                    None => d.walls.push(Wall::ray(m, correction)?),
                }
            }
        }
        d.walls.retain(|w| !w.log.is_zero());
        Ok(d)
    }
}

/// The intersection point of two non-parallel supports, if any.
pub fn intersect(a: &Wall, b: &Wall) -> Option<RPoint> {
    let det = a.m.wedge(b.m);
    if det == 0 {
        return None;
    }
    // a.base + s a.m = b.base + r b.m
    let s = b.base.wedge_dir(&a.base, b.m) / crate::rational::q(det);
    let p = a.base.offset(&s, a.m);
    (a.locate(&p).is_some() && b.locate(&p).is_some()).then_some(p)
}
