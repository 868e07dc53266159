//! Property checkers shared by the property suite and the acceptance run.
//! Each draws its inputs from a seed and reports the first violation.

#![allow(dead_code)]

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tropical_vertex::coeff::Coeff;
use tropical_vertex::gw::{enumerate_partitions, f_trop, ray_log, GwSeed, TangencyProfile};
use tropical_vertex::lattice::{lv, LatticeVector};
use tropical_vertex::lie::{bch, GroupElement, LieCoef, LieElement};
use tropical_vertex::perturbation::{complete_by_perturbation, StandardDiagram};
use tropical_vertex::poly::Poly;
use tropical_vertex::rational::q;
use tropical_vertex::series::{Ring, Series};
use tropical_vertex::tropical::{count_by_oracle, count_tropical, generic_anchors};
use tropical_vertex::wcf::{upsilon, upsilon_ring, GroupoidData, LElement, Mor};

pub type Check = Result<(), String>;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn small(r: &mut ChaCha8Rng) -> i64 {
    r.gen_range(-3..=3)
}

/// The ring used for random Lie elements: two parameters, total degree at
/// most four, rank two.
pub fn lie_ring() -> Arc<Ring> {
    Ring::r_n(2, 2).with_rank(2).shared()
}

/// A random element of the extended tropical vertex algebra with exponents
/// in the closed first quadrant, so no two exponents are opposite.
pub fn random_element(ring: &Arc<Ring>, r: &mut ChaCha8Rng) -> LieElement {
    let mut x = LieElement::zero(ring);
    for _ in 0..r.gen_range(1..=3) {
        let m = loop {
            let m = lv(r.gen_range(0..=2), r.gen_range(0..=2));
            if !m.is_zero() {
                break m;
            }
        };
        let deg = ring.t_monomial(&[r.gen_range(0..=1), r.gen_range(1..=2)]);
        let rows = (0..2).map(|_| (0..2).map(|_| Poly::int(small(r))).collect()).collect();
        let mat = Coeff::from_rows(rows).expect("square");
        let s = q(small(r));
        let n = m.primitive().normal();
        let c = LieCoef::new(mat, Poly::constant(&s * q(n.a)), Poly::constant(&s * q(n.b)));
        x.add_term(m, deg, c);
    }
    x
}

fn triple(seed: u64) -> (LieElement, LieElement, LieElement) {
    let ring = lie_ring();
    let mut r = rng(seed);
    (random_element(&ring, &mut r), random_element(&ring, &mut r), random_element(&ring, &mut r))
}

fn err<E: std::fmt::Debug>(e: E) -> String {
    format!("{e:?}")
}

/// Antisymmetry and the Jacobi identity.
pub fn jacobi(seed: u64) -> Check {
    let (x, y, z) = triple(seed);
    let xy = x.bracket(&y).map_err(err)?;
    if xy != y.bracket(&x).map_err(err)?.neg() {
        return Err(format!("antisymmetry fails for seed {seed}"));
    }
    let a = x.bracket(&y.bracket(&z).map_err(err)?).map_err(err)?;
    let b = y.bracket(&z.bracket(&x).map_err(err)?).map_err(err)?;
    let c = z.bracket(&xy).map_err(err)?;
    let sum = a.add(&b).and_then(|s| s.add(&c)).map_err(err)?;
    if !sum.is_zero() {
        return Err(format!("Jacobi fails for seed {seed}: {}", sum.render()));
    }
    Ok(())
}

/// Brackets and products of elements with derivations orthogonal to their
/// exponents stay in that subalgebra.
pub fn h_tilde_closure(seed: u64) -> Check {
    let (x, y, z) = triple(seed);
    if !(x.in_h_tilde() && y.in_h_tilde() && z.in_h_tilde()) {
        return Err("generator left the subalgebra".into());
    }
    let order = lie_ring().max_degree();
    let outs = [x.bracket(&y).map_err(err)?, bch(&y, &z, order).map_err(err)?, x.bracket(&z.bracket(&y).map_err(err)?).map_err(err)?];
    match outs.iter().find(|o| !o.in_h_tilde()) {
        Some(o) => Err(format!("seed {seed}: {} left the subalgebra", o.render())),
        None => Ok(()),
    }
}

/// `(a•b)•c = a•(b•c)`, and the group action is compatible with products.
pub fn bch_associative(seed: u64) -> Check {
    let (x, y, z) = triple(seed);
    let order = lie_ring().max_degree();
    let left = bch(&bch(&x, &y, order).map_err(err)?, &z, order).map_err(err)?;
    let right = bch(&x, &bch(&y, &z, order).map_err(err)?, order).map_err(err)?;
    if left != right {
        return Err(format!("bch not associative for seed {seed}"));
    }
    let ring = lie_ring();
    let (g, h) = (GroupElement::exp(x), GroupElement::exp(y));
    let gh = g.mul(&h).map_err(err)?;
    let s = Series::z(&ring, lv(1, 0)).add(&Series::z(&ring, lv(0, 1))).map_err(err)?;
    let lhs = gh.act_on_series(&s).map_err(err)?;
    let rhs = g.act_on_series(&h.act_on_series(&s).map_err(err)?).map_err(err)?;
    if lhs != rhs {
        return Err(format!("action is not compatible with products for seed {seed}"));
    }
    Ok(())
}

/// A random standard seed: `lines` lines through the origin, each with its
/// own parameter, over `R_N` with cap `n_cap`.
pub fn random_standard(seed: u64, lines: usize, n_cap: u32) -> StandardDiagram {
    let mut r = rng(seed);
    let mut dirs = vec![lv(1, 0), lv(0, 1), lv(1, 1), lv(-1, 1), lv(1, 2), lv(2, -1)];
    dirs.shuffle(&mut r);
    let ring = Ring::r_n(lines, n_cap).with_rank(2).shared();
    let mut ls = Vec::new();
    for (i, m) in dirs.into_iter().take(lines).enumerate() {
        let c = loop {
            let c = small(&mut r);
            if c != 0 {
                break c;
            }
        };
        let mut sca = Series::one(&ring);
        sca.add_term(m, ring.t_degree(i, 1), Coeff::rational(q(c)));
        if n_cap >= 2 && r.gen_bool(0.5) {
            sca.add_term(m.scale(2), ring.t_degree(i, 2), Coeff::rational(q(small(&mut r))));
        }
        let mut mat = Series::identity(&ring);
        if r.gen_bool(0.5) {
            let (a, b) = if r.gen_bool(0.5) { (0, 1) } else { (1, 0) };
            mat.add_term(m, ring.t_degree(i, 1), Coeff::elementary(2, a, b).scale(&q(small(&mut r))));
        }
        ls.push((m, mat, sca));
    }
    StandardDiagram::from_functions(&ring, ls).expect("valid standard seed")
}

/// KS completion and the perturbation pipeline agree on a random standard
/// seed, both are consistent, and the result does not depend on the
/// deformation seed.
pub fn ks_vs_perturbation(seed: u64, lines: usize, n_cap: u32) -> Check {
    let std = random_standard(seed, lines, n_cap);
    let order = std.ring().max_degree();
    let ks = std.diagram().complete_ks(order).map_err(err)?.canonical();
    if !ks.is_consistent(order).map_err(err)? {
        return Err(format!("KS completion inconsistent for seed {seed}"));
    }
    let p1 = complete_by_perturbation(&std, seed).map_err(err)?.canonical();
    let p2 = complete_by_perturbation(&std, seed ^ 0x5555).map_err(err)?.canonical();
    if p1 != p2 {
        return Err(format!("perturbation depends on the deformation for seed {seed}"));
    }
    if p1 != ks {
        return Err(format!("KS and perturbation differ for seed {seed}"));
    }
    Ok(())
}

/// Every completed diagram has trivial path-ordered products.
pub fn completed_consistent(seed: u64) -> Check {
    let mut r = rng(seed);
    let lines = r.gen_range(1..=3);
    let std = random_standard(seed, lines, if lines == 3 { 1 } else { 2 });
    let order = std.ring().max_degree();
    let done = std.diagram().complete_ks(order).map_err(err)?;
    let defects = done.check_consistency(order).map_err(err)?;
    if defects.is_empty() {
        Ok(())
    } else {
        Err(format!("seed {seed}: {} defects", defects.len()))
    }
}

/// Random derivations with charges in the open first quadrant, the domain
/// where upsilon lands in the algebra without opposite exponents.
fn random_l(r: &mut ChaCha8Rng) -> LElement {
    let gammas = [lv(0, 1), lv(1, 1), lv(1, 0), lv(2, 1)];
    let ms = [lv(1, 0), lv(0, 1), lv(1, 1), lv(1, 2)];
    let mut x = LElement::zero();
    for _ in 0..r.gen_range(1..=2) {
        let k = r.gen_range(1..=2);
        let c = q(r.gen_range(1..=3) * if r.gen_bool(0.5) { 1 } else { -1 });
        let term = if r.gen_bool(0.5) {
            let (i, j) = (r.gen_range(0..3), r.gen_range(0..3));
            LElement::ad(k, Mor::new(i, j, *ms.choose(r).unwrap()))
        } else {
            let g = *gammas.choose(r).unwrap();
            LElement::euler(k, g, g.normal().scale(r.gen_range(1..=2)))
        };
        x = x.add(&term.scale(&c));
    }
    x
}

/// Upsilon preserves brackets of random elements built from both kinds of
/// generator: loop and arrow terms, Euler terms, and mixtures.
pub fn upsilon_homomorphism(seed: u64) -> Check {
    let mut r = rng(seed);
    let d = GroupoidData::new(3, 1, 4).with_offset(0, lv(1, 0));
    let ring = upsilon_ring(&d);
    let (x, y) = (random_l(&mut r), random_l(&mut r));
    let lhs = upsilon(&d, &ring, &x.bracket(&y, &d)).map_err(err)?;
    let rhs = upsilon(&d, &ring, &x)
        .and_then(|ux| ux.bracket(&upsilon(&d, &ring, &y)?))
        .map_err(err)?;
    if lhs != rhs {
        return Err(format!("seed {seed}: upsilon is not a homomorphism on {x:?}, {y:?}"));
    }
    let sum = upsilon(&d, &ring, &x.add(&y)).map_err(err)?;
    if sum != upsilon(&d, &ring, &x).and_then(|a| a.add(&upsilon(&d, &ring, &y)?)).map_err(err)? {
        return Err(format!("seed {seed}: upsilon is not additive"));
    }
    Ok(())
}

/// The ray function assembled from tropical counts equals the ray of the
/// completed diagram.
pub fn f_trop_matches(seed: u64) -> Check {
    let mut r = rng(seed);
    let pairs = [(lv(1, 0), lv(0, 1)), (lv(0, 1), lv(1, 0)), (lv(1, 0), lv(1, 1)), (lv(-1, 1), lv(1, 0))];
    let (m1, m2) = *pairs.choose(&mut r).unwrap();
    let flags = (r.gen_bool(0.7), r.gen_bool(0.7));
    let gw = GwSeed::formal(&[(m1, flags.0), (m2, flags.1)], 2).map_err(err)?;
    let done = gw.standard_diagram().map_err(err)?.diagram().complete_ks(4).map_err(err)?;
    let (a, b) = (r.gen_range(1..=2), r.gen_range(1..=2));
    let m = (m1.scale(a) + m2.scale(b)).primitive();
    let lhs = f_trop(&gw, m, seed).map_err(err)?;
    let rhs = ray_log(&done, m).map_err(err)?;
    if lhs != rhs {
        return Err(format!("seed {seed}: ray {m} differs: {} vs {}", lhs.render(), rhs.render()));
    }
    Ok(())
}

/// Weight tuples with at most `s_max` ends from partitions of `p`.
pub fn weight_tuples(p: &[u32], s_max: usize) -> Vec<Vec<LatticeVector>> {
    let m = vec![lv(1, 0), lv(0, 1)];
    let prof = TangencyProfile::new(p.to_vec(), m.clone()).expect("profile");
    enumerate_partitions(&prof).iter().map(|k| k.weights(&m)).filter(|w| w.len() <= s_max).collect()
}

/// The brute-force tree enumeration agrees with the scattering count.
pub fn oracle_agrees(w: &[LatticeVector], seed: u64) -> Check {
    let by_scattering = count_tropical(w, seed).map_err(err)?;
    let by_trees = count_by_oracle(w, &generic_anchors(w.len(), seed)).map_err(err)?;
    if by_scattering == by_trees {
        Ok(())
    } else {
        Err(format!("{w:?}: scattering {by_scattering}, oracle {by_trees}"))
    }
}
