//! Relation instances a sign assignment must satisfy.
//!
//! Degenerations pair a flow with its companion. Squares are two length-2
//! paths with common endpoints; their four signs multiply to `-1`.

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::formal::{
    self, companion, enumerate_generators, flows_from, rects_from, reverse_edge,
    simple_flip, DegenerationKind, Edge, FormalBigon, FormalFlow, FormalGenerator, FormalRectangle,
    RectPicture,
};
use crate::gf2::{Family, Gf2System};
use crate::sign::Sign;
use crate::torus::{self, CurveFrame, GridSquare};
use crate::Limits;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RelationKind {
    AlphaDegeneration,
    BetaDegeneration,
    Square,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RelationInstance {
    pub kind: RelationKind,
    pub family: Family,
    /// `(φ1, φ2)` for degenerations, `(φ1, φ2, φ3, φ4)` for squares, where
    /// `φ1 * φ2` and `φ3 * φ4` are the two paths.
    pub flows: Vec<FormalFlow>,
}

impl RelationInstance {
    /// Parity right-hand side: the product of the signs is `(-1)^rhs`.
    pub fn rhs(&self) -> bool {
        self.expected_product(false).bit()
    }

    /// Required sign product. With `swapped` the roles of α and β are exchanged.
    pub fn expected_product(&self, swapped: bool) -> Sign {
        match (self.kind, swapped) {
            (RelationKind::Square, _) => Sign::Minus,
            (RelationKind::AlphaDegeneration, false) | (RelationKind::BetaDegeneration, true) => Sign::Plus,
            _ => Sign::Minus,
        }
    }

    /// Endpoint bookkeeping of the instance.
    pub fn is_well_formed(&self) -> bool {
        if !self.flows.iter().all(|f| f.is_valid()) {
            return false;
        }
        let f = &self.flows;
        match self.kind {
            RelationKind::AlphaDegeneration | RelationKind::BetaDegeneration => {
                let kind = if self.kind == RelationKind::AlphaDegeneration {
                    DegenerationKind::Alpha
                } else {
                    DegenerationKind::Beta
                };
                f.len() == 2 && companion(&f[0], kind).as_ref() == Ok(&f[1])
            }
            RelationKind::Square => {
                f.len() == 4
                    && f[0].start() == f[2].start()
                    && f[1].end_unchecked() == f[3].end_unchecked()
                    && f[0].end_unchecked() == *f[1].start()
                    && f[2].end_unchecked() == *f[3].start()
                    && *f[0].start() != f[1].end_unchecked()
            }
        }
    }

    pub fn describe(&self) -> String {
        let keys: Vec<String> = self.flows.iter().map(|f| f.key()).collect();
        format!("{:?}/{} [{}]", self.kind, self.family.name(), keys.join(" "))
    }

    fn square(family: Family, flows: [FormalFlow; 4]) -> Self {
        RelationInstance { kind: RelationKind::Square, family, flows: flows.to_vec() }
    }
}

pub fn degeneration(flow: &FormalFlow, kind: DegenerationKind) -> Result<RelationInstance> {
    let c = companion(flow, kind)?;
    Ok(RelationInstance {
        kind: match kind {
            DegenerationKind::Alpha => RelationKind::AlphaDegeneration,
            DegenerationKind::Beta => RelationKind::BetaDegeneration,
        },
        family: Family::Degenerations,
        flows: vec![flow.clone(), c],
    })
}

/// The other path `(φ3, φ4)` through the composite of two flows with disjoint moving coordinates.
pub fn disjoint_partner(phi1: &FormalFlow, phi2: &FormalFlow) -> Result<(FormalFlow, FormalFlow)> {
    phi1.check()?;
    phi2.check()?;
    if phi1.end_unchecked() != *phi2.start() {
        return Err(Error::NotComposable);
    }
    let c1 = phi1.moving_coords();
    if phi2.moving_coords().iter().any(|c| c1.contains(c)) {
        return Err(Error::SharedCoordinates);
    }
    let phi3 = phi2.with_start(phi1.start().clone());
    let phi4 = phi1.with_start(phi3.end_unchecked());
    Ok((phi3, phi4))
}

/// The canonical bigon at `p` from `x`.
fn canonical_bigon(x: &FormalGenerator, p: usize) -> FormalBigon {
    FormalBigon { start: x.clone(), coord: p, o_alpha: Sign::Plus, o_beta: x.eps(p) }
}

/// The square `(B, R', R, B')` relating `rect` with its simple flip at `p`.
pub fn flip_square(rect: &FormalRectangle, p: usize) -> Result<RelationInstance> {
    let flipped = simple_flip(rect, p)?;
    let b = canonical_bigon(&rect.start, p);
    let r = FormalFlow::Rect(rect.clone());
    let b2 = FormalFlow::Bigon(FormalBigon { start: r.end_unchecked(), ..b.clone() });
    Ok(RelationInstance::square(Family::Flip, [FormalFlow::Bigon(b), FormalFlow::Rect(flipped), r, b2]))
}

/// Right-edge and top-edge relations in a picture; the other two edges are
/// handled by rotating the picture.
fn picture_relation(pic: &RectPicture, top_edge: bool) -> [FormalFlow; 4] {
    let a = FormalFlow::Rect(pic.normalize());
    let mut ab = pic.clone();
    if top_edge {
        ab.o_top = -ab.o_top;
    } else {
        ab.o_right = -ab.o_right;
    }
    ab.start = ab.start.with_eps(ab.top, ab.o_top * ab.o_right);
    let c = FormalBigon { start: pic.start.clone(), coord: pic.top, o_alpha: pic.o_top, o_beta: pic.o_right };
    let end_a = a.end_unchecked();
    let bc = if top_edge {
        FormalBigon { start: end_a, coord: pic.top, o_alpha: pic.o_top, o_beta: pic.o_left }
    } else {
        FormalBigon { start: end_a, coord: pic.bottom, o_alpha: pic.o_bottom, o_beta: pic.o_right }
    };
    [a, FormalFlow::Bigon(bc), FormalFlow::Bigon(c), FormalFlow::Rect(ab.normalize())]
}

/// The square `(A, BC, C, AB)` where `AB = reverse_edge(rect, edge)` and the
/// bigons sit at the start corner of the reversed edge.
pub fn basic_relation(rect: &FormalRectangle, edge: Edge) -> Result<RelationInstance> {
    if !rect.is_valid() {
        return Err(Error::InvalidFlow(FormalFlow::Rect(rect.clone()).key()));
    }
    let flows = match edge {
        Edge::Right => picture_relation(&rect.picture(), false),
        Edge::Top => picture_relation(&rect.picture(), true),
        Edge::Left => picture_relation(&rect.rotated_picture(), false),
        Edge::Bottom => picture_relation(&rect.rotated_picture(), true),
    };
    debug_assert_eq!(flows[3].as_rect(), Some(&reverse_edge(rect, edge)?));
    Ok(RelationInstance::square(Family::Basic, flows))
}

fn grid_square_flows(sq: &GridSquare, frame: &CurveFrame, tail: &[Sign]) -> [FormalFlow; 4] {
    let x = &sq.start;
    let y1 = sq.first_middle();
    let y2 = sq.second_middle();
    [
        FormalFlow::Rect(frame.rectangle(x, sq.first.0, tail)),
        FormalFlow::Rect(frame.rectangle(&y1, sq.first.1, tail)),
        FormalFlow::Rect(frame.rectangle(x, sq.second.0, tail)),
        FormalFlow::Rect(frame.rectangle(&y2, sq.second.1, tail)),
    ]
}

/// Squares among profile-1 rectangles starting at the grid state `sigma`.
pub fn grid_composites(sigma: &[u8]) -> Result<Vec<RelationInstance>> {
    oriented_grid_composites(sigma, &CurveFrame::identity(sigma.len()))
}

/// Grid squares from `sigma` read through arbitrary curve orders and orientations.
pub fn oriented_grid_composites(sigma: &[u8], frame: &CurveFrame) -> Result<Vec<RelationInstance>> {
    Ok(torus::grid_composites(sigma)?
        .iter()
        .map(|sq| RelationInstance::square(Family::Grid, grid_square_flows(sq, frame, &[])))
        .collect())
}

fn degenerations_of(f: &FormalFlow, out: &mut Vec<RelationInstance>) -> Result<()> {
    out.push(degeneration(f, DegenerationKind::Alpha)?);
    out.push(degeneration(f, DegenerationKind::Beta)?);
    Ok(())
}

/// All instances of the chosen families whose first flow starts at `x`.
pub fn instances_from(x: &FormalGenerator, families: &[Family]) -> Result<Vec<RelationInstance>> {
    let mut out = Vec::new();
    let flows = flows_from(x);
    for fam in families {
        match fam {
            Family::Degenerations => {
                for f in &flows {
                    degenerations_of(f, &mut out)?;
                }
            }
            Family::Disjoint => {
                for f1 in &flows {
                    for f2 in flows_from(&f1.end_unchecked()) {
                        if f2.moving_coords().iter().any(|c| f1.moving_coords().contains(c)) {
                            continue;
                        }
                        let (f3, f4) = disjoint_partner(f1, &f2)?;
                        out.push(RelationInstance::square(Family::Disjoint, [f1.clone(), f2, f3, f4]));
                    }
                }
            }
            Family::Grid => {
                if x.is_profile_one() {
                    out.extend(grid_composites(x.sigma())?);
                }
            }
            Family::Flip => {
                for r in rects_from(x) {
                    for p in (0..x.power()).filter(|&p| !r.moves(p)) {
                        out.push(flip_square(&r, p)?);
                    }
                }
            }
            Family::Basic => {
                for r in rects_from(x) {
                    for e in Edge::ALL {
                        out.push(basic_relation(&r, e)?);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Every instance of the chosen families at power `n`, in deterministic order.
pub fn relation_instances(n: usize, families: &[Family], limits: &Limits) -> Result<Vec<RelationInstance>> {
    let gens = enumerate_generators(n, limits)?;
    let parts: Vec<Vec<RelationInstance>> =
        gens.par_iter().map(|x| instances_from(x, families)).collect::<Result<_>>()?;
    Ok(parts.into_iter().flatten().collect())
}

/// One uniformly chosen instance of `family` at power `n`, if the random
/// starting data admit one.
pub fn sample_instance<R: Rng>(n: usize, family: Family, rng: &mut R) -> Result<Option<RelationInstance>> {
    let mut sigma: Vec<usize> = (0..n).collect();
    for k in (1..n).rev() {
        sigma.swap(k, rng.gen_range(0..=k));
    }
    let eps: Vec<Sign> = (0..n)
        .map(|_| if family == Family::Grid { Sign::Plus } else { Sign::from_bit(rng.gen()) })
        .collect();
    let x = FormalGenerator::new(sigma, eps)?;
    let pick = |v: &Vec<FormalFlow>, rng: &mut R| v[rng.gen_range(0..v.len())].clone();
    Ok(match family {
        Family::Degenerations => {
            let f = pick(&flows_from(&x), rng);
            let kind = if rng.gen() { DegenerationKind::Alpha } else { DegenerationKind::Beta };
            Some(degeneration(&f, kind)?)
        }
        Family::Disjoint => {
            let f1 = pick(&flows_from(&x), rng);
            let cands: Vec<FormalFlow> = flows_from(&f1.end_unchecked())
                .into_iter()
                .filter(|f2| !f2.moving_coords().iter().any(|c| f1.moving_coords().contains(c)))
                .collect();
            if cands.is_empty() {
                return Ok(None);
            }
            let f2 = pick(&cands, rng);
            let (f3, f4) = disjoint_partner(&f1, &f2)?;
            Some(RelationInstance::square(Family::Disjoint, [f1, f2, f3, f4]))
        }
        Family::Grid => {
            if n < 2 {
                return Ok(None);
            }
            let s = x.sigma().to_vec();
            let r1s = torus::rects_from(&s);
            let r1 = r1s[rng.gen_range(0..r1s.len())];
            let y = r1.end(&s);
            let r2s = torus::rects_from(&y);
            let r2 = r2s[rng.gen_range(0..r2s.len())];
            torus::composite_square(&s, r1, r2)?.map(|sq| {
                let frame = CurveFrame::identity(n);
                let mut flows = grid_square_flows(&sq, &frame, &[]);
                if sq.first != (r1, r2) {
                    flows.swap(0, 2);
                    flows.swap(1, 3);
                }
                RelationInstance::square(Family::Grid, flows)
            })
        }
        Family::Flip => {
            if n < 3 {
                return Ok(None);
            }
            let rs = rects_from(&x);
            let r = &rs[rng.gen_range(0..rs.len())];
            let ps: Vec<usize> = (0..n).filter(|&p| !r.moves(p)).collect();
            Some(flip_square(r, ps[rng.gen_range(0..ps.len())])?)
        }
        Family::Basic => {
            if n < 2 {
                return Ok(None);
            }
            let rs = rects_from(&x);
            let r = &rs[rng.gen_range(0..rs.len())];
            Some(basic_relation(r, Edge::ALL[rng.gen_range(0..4)])?)
        }
    })
}

/// GF(2) system over all flows of power `n` for the chosen families.
pub fn enumerate_relation_rows(n: usize, families: &[Family], limits: &Limits) -> Result<Gf2System> {
    let vars = formal::enumerate_all_flows(n, limits)?;
    let mut sys = Gf2System::new(vars);
    for inst in relation_instances(n, families, limits)? {
        sys.push(&inst.flows, inst.rhs(), inst.family)?;
    }
    Ok(sys)
}

/// Profile-1 rectangles of power `n`: both endpoints carry the all-plus profile.
pub fn profile1_rectangles(n: usize, limits: &Limits) -> Result<Vec<FormalRectangle>> {
    formal::check_power(n, limits.profile1)?;
    let mut out = Vec::new();
    for sigma in crate::perm::permutations(n) {
        let x = FormalGenerator::from_raw(sigma.clone(), vec![Sign::Plus; n]);
        for r in rects_from(&x) {
            if r.bits().iter().all(|&b| b == r.o_bottom) {
                out.push(r);
            }
        }
    }
    Ok(out)
}

/// GF(2) system on profile-1 rectangles: degenerations and grid squares.
pub fn profile1_rows(n: usize, limits: &Limits) -> Result<Gf2System> {
    let vars: Vec<FormalFlow> = profile1_rectangles(n, limits)?.into_iter().map(FormalFlow::Rect).collect();
    let mut sys = Gf2System::new(vars.clone());
    let parts: Vec<Vec<RelationInstance>> = vars
        .par_iter()
        .map(|f| -> Result<Vec<RelationInstance>> {
            let mut out = Vec::new();
            degenerations_of(f, &mut out)?;
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let perms = crate::perm::permutations(n);
    let grid: Vec<Vec<RelationInstance>> = perms.par_iter().map(|s| grid_composites(s)).collect::<Result<_>>()?;
    for inst in parts.into_iter().chain(grid).flatten() {
        sys.push(&inst.flows, inst.rhs(), inst.family)?;
    }
    Ok(sys)
}
