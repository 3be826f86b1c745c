//! Rectangles on the n×n toroidal grid.
//!
//! Row `k` is the horizontal circle α_k, column `l` the vertical circle β_l,
//! both at integer positions. A permutation `sigma` places one point on each
//! row, at `(sigma[k], k)`. Cell `(c, r)` is the unit square `[c, c+1]×[r, r+1]`.
//!
//! A rectangle from `sigma` is fixed by its bottom and top rows: it runs
//! rightward from column `sigma[bottom]` to `sigma[top]` and upward from row
//! `bottom` to `top`, both measured cyclically.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::formal::{FormalGenerator, FormalRectangle, RectPicture};
use crate::sign::Sign;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TorusRect {
    pub bottom: usize,
    pub top: usize,
}

impl TorusRect {
    pub fn width(&self, sigma: &[u8]) -> usize {
        let n = sigma.len();
        (sigma[self.top] as usize + n - sigma[self.bottom] as usize) % n
    }

    pub fn height(&self, n: usize) -> usize {
        (self.top + n - self.bottom) % n
    }

    pub fn end(&self, sigma: &[u8]) -> Vec<u8> {
        let mut s = sigma.to_vec();
        s.swap(self.bottom, self.top);
        s
    }

    /// Cells covered by the rectangle, as `(column, row)` pairs.
    pub fn cells(&self, sigma: &[u8]) -> impl Iterator<Item = (usize, usize)> {
        let n = sigma.len();
        let (w, h) = (self.width(sigma), self.height(n));
        let (c0, r0) = (sigma[self.bottom] as usize, self.bottom);
        (0..h).flat_map(move |dr| (0..w).map(move |dc| ((c0 + dc) % n, (r0 + dr) % n)))
    }

    /// Adds the rectangle's cells to a row-major multiplicity array.
    pub fn add_to(&self, sigma: &[u8], mult: &mut [u8]) {
        let n = sigma.len();
        for (c, r) in self.cells(sigma) {
            mult[r * n + c] += 1;
        }
    }

    pub fn multiplicity(&self, sigma: &[u8]) -> Vec<u8> {
        let mut m = vec![0; sigma.len() * sigma.len()];
        self.add_to(sigma, &mut m);
        m
    }

    /// Rows `k` whose point `(sigma[k], k)` lies strictly inside the rectangle.
    pub fn interior_points(&self, sigma: &[u8]) -> Vec<usize> {
        let n = sigma.len();
        let (w, h) = (self.width(sigma), self.height(n));
        let c0 = sigma[self.bottom] as usize;
        (1..h)
            .map(|dr| (self.bottom + dr) % n)
            .filter(|&k| {
                let dc = (sigma[k] as usize + n - c0) % n;
                dc > 0 && dc < w
            })
            .collect()
    }

    /// Number of start points in the interior.
    pub fn complexity(&self, sigma: &[u8]) -> usize {
        self.interior_points(sigma).len()
    }
}

/// All `n(n-1)` rectangles starting at `sigma`, sorted by (bottom, top).
pub fn rects_from(sigma: &[u8]) -> Vec<TorusRect> {
    let n = sigma.len();
    let mut out = Vec::with_capacity(n * n.saturating_sub(1));
    for bottom in 0..n {
        for top in 0..n {
            if bottom != top {
                out.push(TorusRect { bottom, top });
            }
        }
    }
    out
}

/// Curve orders and orientations used to read grid objects as formal ones.
///
/// `alpha_order[k]` is the formal α-index of row `k`, `beta_order[l]` the
/// formal β-index of column `l`. Orientation `+1` means rightward for rows and
/// upward for columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveFrame {
    pub alpha_order: Vec<u8>,
    pub beta_order: Vec<u8>,
    pub alpha_orient: Vec<Sign>,
    pub beta_orient: Vec<Sign>,
}

impl CurveFrame {
    pub fn identity(n: usize) -> Self {
        CurveFrame {
            alpha_order: (0..n as u8).collect(),
            beta_order: (0..n as u8).collect(),
            alpha_orient: vec![Sign::Plus; n],
            beta_orient: vec![Sign::Plus; n],
        }
    }

    /// Uniformly random orders and orientations.
    pub fn random<R: rand::Rng>(n: usize, rng: &mut R) -> Self {
        use rand::seq::SliceRandom;
        let mut alpha_order: Vec<u8> = (0..n as u8).collect();
        let mut beta_order = alpha_order.clone();
        alpha_order.shuffle(rng);
        beta_order.shuffle(rng);
        let mut signs = || (0..n).map(|_| Sign::from_bit(rng.gen())).collect::<Vec<_>>();
        let alpha_orient = signs();
        let beta_orient = signs();
        CurveFrame { alpha_order, beta_order, alpha_orient, beta_orient }
    }

    pub fn size(&self) -> usize {
        self.alpha_order.len()
    }

    pub fn is_identity(&self) -> bool {
        *self == CurveFrame::identity(self.size())
    }

    /// Formal generator of the grid state `sigma`, padded with fixed tail
    /// coordinates carrying the signs in `tail`.
    pub fn generator(&self, sigma: &[u8], tail: &[Sign]) -> FormalGenerator {
        let n = sigma.len();
        let mut s = vec![0u8; n + tail.len()];
        let mut e = vec![Sign::Plus; n + tail.len()];
        for k in 0..n {
            let f = self.alpha_order[k] as usize;
            s[f] = self.beta_order[sigma[k] as usize];
            e[f] = self.alpha_orient[k] * self.beta_orient[sigma[k] as usize];
        }
        for (u, &t) in tail.iter().enumerate() {
            s[n + u] = (n + u) as u8;
            e[n + u] = t;
        }
        FormalGenerator::from_raw(s, e)
    }

    /// The formal rectangle of a grid rectangle starting at `sigma`.
    pub fn rectangle(&self, sigma: &[u8], r: TorusRect, tail: &[Sign]) -> FormalRectangle {
        RectPicture {
            start: self.generator(sigma, tail),
            bottom: self.alpha_order[r.bottom] as usize,
            top: self.alpha_order[r.top] as usize,
            o_bottom: self.alpha_orient[r.bottom],
            o_top: self.alpha_orient[r.top],
            o_left: self.beta_orient[sigma[r.bottom] as usize],
            o_right: self.beta_orient[sigma[r.top] as usize],
        }
        .normalize()
    }
}

/// The profile-1 formal rectangle of a grid rectangle (identity frame).
pub fn to_profile1(sigma: &[u8], r: TorusRect) -> FormalRectangle {
    CurveFrame::identity(sigma.len()).rectangle(sigma, r, &[])
}

/// Inverse of [`to_profile1`]; `None` unless both endpoints have the all-plus profile.
pub fn from_profile1(rect: &FormalRectangle) -> Option<TorusRect> {
    if !rect.start.is_profile_one() {
        return None;
    }
    match rect.bits() {
        [Sign::Plus, Sign::Plus, Sign::Plus, Sign::Plus] => Some(TorusRect { bottom: rect.i, top: rect.j }),
        [Sign::Minus, Sign::Minus, Sign::Minus, Sign::Minus] => {
            Some(TorusRect { bottom: rect.j, top: rect.i })
        }
        _ => None,
    }
}

/// Two ways of writing the same composite domain as a length-2 path.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GridSquare {
    pub start: Vec<u8>,
    /// `(r1, r2)`: `r1` from `start`, `r2` from the end of `r1`.
    pub first: (TorusRect, TorusRect),
    pub second: (TorusRect, TorusRect),
}

impl GridSquare {
    pub fn first_middle(&self) -> Vec<u8> {
        self.first.0.end(&self.start)
    }

    pub fn second_middle(&self) -> Vec<u8> {
        self.second.0.end(&self.start)
    }
}

fn composite(sigma: &[u8], r1: TorusRect, r2: TorusRect) -> (Vec<u8>, Vec<u8>) {
    let y = r1.end(sigma);
    let mut m = r1.multiplicity(sigma);
    r2.add_to(&y, &mut m);
    (r2.end(&y), m)
}

fn differing_rows(a: &[u8], b: &[u8]) -> Vec<usize> {
    (0..a.len()).filter(|&k| a[k] != b[k]).collect()
}

/// All ordered decompositions of the domain `mult` from `sigma` to `z` into two rectangles.
pub fn decompositions(sigma: &[u8], z: &[u8], mult: &[u8]) -> Vec<(TorusRect, TorusRect)> {
    let diff = differing_rows(sigma, z);
    let mut out = Vec::new();
    let mut rest = vec![0u8; mult.len()];
    for &a in &diff {
        for &b in &diff {
            if a == b {
                continue;
            }
            let r3 = TorusRect { bottom: a, top: b };
            rest.copy_from_slice(mult);
            let mut fits = true;
            for (c, r) in r3.cells(sigma) {
                let v = &mut rest[r * sigma.len() + c];
                if *v == 0 {
                    fits = false;
                    break;
                }
                *v -= 1;
            }
            if !fits {
                continue;
            }
            let w = r3.end(sigma);
            let d2 = differing_rows(&w, z);
            if d2.len() != 2 {
                continue;
            }
            for (p, q) in [(d2[0], d2[1]), (d2[1], d2[0])] {
                let r4 = TorusRect { bottom: p, top: q };
                if r4.multiplicity(&w) == rest {
                    out.push((r3, r4));
                }
            }
        }
    }
    out.sort();
    out
}

/// The square through `(r1, r2)`.
///
/// `None` if the path returns to `sigma`, or if the composite domain has no
/// second decomposition. The latter happens exactly when one rectangle holds
/// a moving point of the other in its interior; such a pair is not realized
/// as a square on the grid.
pub fn composite_square(sigma: &[u8], r1: TorusRect, r2: TorusRect) -> Result<Option<GridSquare>> {
    let (z, mult) = composite(sigma, r1, r2);
    if z == sigma {
        return Ok(None);
    }
    let decs = decompositions(sigma, &z, &mult);
    if !decs.contains(&(r1, r2)) {
        return Err(Error::DecompositionCountMismatch { found: decs.len() });
    }
    if decs.len() == 1 && holds_moving_point(sigma, r1, r2) {
        return Ok(None);
    }
    if decs.len() != 2 {
        return Err(Error::DecompositionCountMismatch { found: decs.len() });
    }
    Ok(Some(GridSquare { start: sigma.to_vec(), first: decs[0], second: decs[1] }))
}

fn holds_moving_point(sigma: &[u8], r1: TorusRect, r2: TorusRect) -> bool {
    let y = r1.end(sigma);
    let in1 = r1.interior_points(sigma);
    let in2 = r2.interior_points(&y);
    in1.iter().any(|k| *k == r2.bottom || *k == r2.top) || in2.iter().any(|k| *k == r1.bottom || *k == r1.top)
}

/// Every square of length-2 rectangle paths from `sigma` with distinct endpoints, deduplicated.
pub fn grid_composites(sigma: &[u8]) -> Result<Vec<GridSquare>> {
    let mut out = Vec::new();
    for r1 in rects_from(sigma) {
        let y = r1.end(sigma);
        for r2 in rects_from(&y) {
            if let Some(sq) = composite_square(sigma, r1, r2)? {
                if sq.first == (r1, r2) {
                    out.push(sq);
                }
            }
        }
    }
    Ok(out)
}

/// The four ways of cutting a rectangle into three at an interior point `p`.
///
/// The lines through `p` split the rectangle into `A` (upper left), `B`
/// (upper right), `C` (lower left) and `D` (lower right). Each variant names
/// the pieces in the order they are applied.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Decomposition {
    /// `B * (AC) * D`, the conventional one.
    BAcD,
    CBdA,
    BCdA,
    CAbD,
}

impl Decomposition {
    pub const ALL: [Decomposition; 4] =
        [Decomposition::BAcD, Decomposition::CBdA, Decomposition::BCdA, Decomposition::CAbD];

    pub fn name(self) -> &'static str {
        match self {
            Decomposition::BAcD => "B*(AC)*D",
            Decomposition::CBdA => "C*(BD)*A",
            Decomposition::BCdA => "B*(CD)*A",
            Decomposition::CAbD => "C*(AB)*D",
        }
    }

    /// The three pieces of `r` at the interior point in row `k`, each taken
    /// from the end of the previous one.
    pub fn pieces(self, r: TorusRect, k: usize) -> [TorusRect; 3] {
        let (a, b) = (r.bottom, r.top);
        let t = |bottom, top| TorusRect { bottom, top };
        match self {
            Decomposition::BAcD => [t(k, b), t(a, b), t(a, k)],
            Decomposition::CBdA => [t(a, k), t(a, b), t(k, b)],
            Decomposition::BCdA => [t(k, b), t(a, k), t(k, b)],
            Decomposition::CAbD => [t(a, k), t(k, b), t(a, k)],
        }
    }

    /// Start generators of the three pieces.
    pub fn path(self, sigma: &[u8], r: TorusRect, k: usize) -> [(Vec<u8>, TorusRect); 3] {
        let [p1, p2, p3] = self.pieces(r, k);
        let s2 = p1.end(sigma);
        let s3 = p2.end(&s2);
        [(sigma.to_vec(), p1), (s2, p2), (s3, p3)]
    }
}
