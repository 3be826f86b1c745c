//! Formal generators, formal bigons and formal rectangles.
//!
//! Everything here is 0-based internally. The JSON wire format and the
//! human-readable flow keys use 1-based α/β indices.
//!
//! Local models:
//!
//! * A bigon is drawn with its α-arc as the lower boundary and its β-arc as
//!   the upper one. `o_alpha = +1` means the α-arc points left to right,
//!   likewise for `o_beta`. The bigon starts at the left corner, whose
//!   crossing sign is `o_alpha * o_beta`.
//! * A rectangle is axis aligned with α-sides horizontal. After a 180°
//!   rotation, if needed, the lower-indexed moving α-curve is the bottom side.
//!   Horizontal bits are +1 when pointing right, vertical bits when pointing
//!   up. It starts at the bottom-left and top-right corners; the sign of a
//!   corner is the product of its two adjacent side bits.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm;
use crate::sign::Sign;
use crate::Limits;

/// Hard upper limit on the power; keeps coordinates in a `u8`.
pub const MAX_SUPPORTED_POWER: usize = 16;

/// A permutation together with a sign profile.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "GeneratorRepr", into = "GeneratorRepr")]
pub struct FormalGenerator {
    sigma: Vec<u8>,
    epsilon: Vec<Sign>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GeneratorRepr {
    sigma: Vec<usize>,
    epsilon: Vec<Sign>,
}

impl TryFrom<GeneratorRepr> for FormalGenerator {
    type Error = Error;
    fn try_from(r: GeneratorRepr) -> Result<Self> {
        if r.sigma.contains(&0) {
            return Err(Error::InvalidGenerator("sigma is 1-based".into()));
        }
        FormalGenerator::new(r.sigma.into_iter().map(|v| v - 1).collect(), r.epsilon)
    }
}

impl From<FormalGenerator> for GeneratorRepr {
    fn from(g: FormalGenerator) -> Self {
        GeneratorRepr {
            sigma: g.sigma.iter().map(|&v| v as usize + 1).collect(),
            epsilon: g.epsilon,
        }
    }
}

impl FormalGenerator {
    /// `sigma` is 0-based: α-index `k` is matched with β-index `sigma[k]`.
    pub fn new(sigma: Vec<usize>, epsilon: Vec<Sign>) -> Result<Self> {
        let n = sigma.len();
        if n == 0 {
            return Err(Error::ZeroPower);
        }
        if n > MAX_SUPPORTED_POWER {
            return Err(Error::PowerTooLarge { n, bound: MAX_SUPPORTED_POWER });
        }
        if epsilon.len() != n {
            return Err(Error::InvalidGenerator(format!(
                "sign profile has length {}, expected {n}",
                epsilon.len()
            )));
        }
        let sigma: Vec<u8> = sigma.into_iter().map(|v| v.min(255) as u8).collect();
        if !perm::is_permutation(&sigma) {
            return Err(Error::InvalidGenerator("sigma is not a permutation".into()));
        }
        Ok(FormalGenerator { sigma, epsilon })
    }

    pub(crate) fn from_raw(sigma: Vec<u8>, epsilon: Vec<Sign>) -> Self {
        debug_assert_eq!(sigma.len(), epsilon.len());
        FormalGenerator { sigma, epsilon }
    }

    pub fn identity(n: usize) -> Self {
        FormalGenerator::from_raw((0..n as u8).collect(), vec![Sign::Plus; n])
    }

    pub fn power(&self) -> usize {
        self.sigma.len()
    }

    pub fn sigma(&self) -> &[u8] {
        &self.sigma
    }

    pub fn epsilon(&self) -> &[Sign] {
        &self.epsilon
    }

    pub fn eps(&self, k: usize) -> Sign {
        self.epsilon[k]
    }

    pub fn beta_of(&self, k: usize) -> usize {
        self.sigma[k] as usize
    }

    pub fn is_valid(&self) -> bool {
        !self.sigma.is_empty()
            && self.sigma.len() == self.epsilon.len()
            && perm::is_permutation(&self.sigma)
    }

    pub fn is_profile_one(&self) -> bool {
        self.epsilon.iter().all(|s| s.is_plus())
    }

    /// The same generator with the sign at `k` negated.
    pub fn flipped(&self, k: usize) -> Self {
        let mut g = self.clone();
        g.epsilon[k] = -g.epsilon[k];
        g
    }

    pub fn with_eps(&self, k: usize, s: Sign) -> Self {
        let mut g = self.clone();
        g.epsilon[k] = s;
        g
    }

    /// `sgn(sigma) * prod(epsilon)`.
    pub fn twist_value(&self) -> Sign {
        perm::parity(&self.sigma) * Sign::product(self.epsilon.iter().copied())
    }

    /// Appends a fixed coordinate `n` with the given sign.
    pub fn extended(&self, eps: Sign) -> Self {
        let mut g = self.clone();
        g.sigma.push(self.sigma.len() as u8);
        g.epsilon.push(eps);
        g
    }

    fn key_fragment(&self) -> String {
        let sigma: Vec<String> = self.sigma.iter().map(|v| (v + 1).to_string()).collect();
        let eps: String = self.epsilon.iter().map(|s| s.as_char()).collect();
        format!("{}:{}", sigma.join(","), eps)
    }

    fn parse_fragment(sigma: &str, eps: &str) -> Result<Self> {
        let sigma = sigma
            .split(',')
            .map(|s| match s.trim().parse::<usize>() {
                Ok(v) if v >= 1 => Ok(v - 1),
                _ => Err(Error::Parse(format!("bad sigma entry {s:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        let eps = eps
            .chars()
            .map(|c| Sign::from_char(c).ok_or_else(|| Error::Parse(format!("bad sign {c:?}"))))
            .collect::<Result<Vec<_>>>()?;
        FormalGenerator::new(sigma, eps)
    }
}

impl fmt::Display for FormalGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.key_fragment())
    }
}

/// A side of a formal rectangle in its canonical picture.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Edge {
    Bottom,
    Top,
    Left,
    Right,
}

impl Edge {
    pub const ALL: [Edge; 4] = [Edge::Bottom, Edge::Top, Edge::Left, Edge::Right];
}

impl std::str::FromStr for Edge {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bottom" => Ok(Edge::Bottom),
            "top" => Ok(Edge::Top),
            "left" => Ok(Edge::Left),
            "right" => Ok(Edge::Right),
            _ => Err(Error::Parse(format!("unknown edge {s:?}"))),
        }
    }
}

/// Which family of curves closes up in a boundary degeneration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DegenerationKind {
    Alpha,
    Beta,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FormalBigon {
    pub start: FormalGenerator,
    /// Moving α-coordinate.
    pub coord: usize,
    pub o_alpha: Sign,
    pub o_beta: Sign,
}

impl FormalBigon {
    pub fn is_valid(&self) -> bool {
        self.start.is_valid()
            && self.coord < self.start.power()
            && self.o_alpha * self.o_beta == self.start.eps(self.coord)
    }

    pub(crate) fn end_unchecked(&self) -> FormalGenerator {
        self.start.flipped(self.coord)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FormalRectangle {
    pub start: FormalGenerator,
    /// Moving α-coordinate on the bottom side; always `i < j`.
    pub i: usize,
    /// Moving α-coordinate on the top side.
    pub j: usize,
    pub o_bottom: Sign,
    pub o_top: Sign,
    pub o_left: Sign,
    pub o_right: Sign,
}

impl FormalRectangle {
    pub fn is_valid(&self) -> bool {
        self.start.is_valid()
            && self.i < self.j
            && self.j < self.start.power()
            && self.start.eps(self.i) == self.o_bottom * self.o_left
            && self.start.eps(self.j) == self.o_top * self.o_right
    }

    pub fn bit(&self, edge: Edge) -> Sign {
        match edge {
            Edge::Bottom => self.o_bottom,
            Edge::Top => self.o_top,
            Edge::Left => self.o_left,
            Edge::Right => self.o_right,
        }
    }

    pub fn bits(&self) -> [Sign; 4] {
        [self.o_bottom, self.o_top, self.o_left, self.o_right]
    }

    fn set_bit(&mut self, edge: Edge, s: Sign) {
        match edge {
            Edge::Bottom => self.o_bottom = s,
            Edge::Top => self.o_top = s,
            Edge::Left => self.o_left = s,
            Edge::Right => self.o_right = s,
        }
    }

    pub(crate) fn end_unchecked(&self) -> FormalGenerator {
        let mut g = self.start.clone();
        g.sigma.swap(self.i, self.j);
        g.epsilon[self.i] = self.o_bottom * self.o_right;
        g.epsilon[self.j] = self.o_top * self.o_left;
        g
    }

    /// Moves the start generator so that the corner signs agree with the bits again.
    fn resync_start(&mut self) {
        self.start.epsilon[self.i] = self.o_bottom * self.o_left;
        self.start.epsilon[self.j] = self.o_top * self.o_right;
    }

    /// The canonical picture (bottom side on `i`).
    pub fn picture(&self) -> RectPicture {
        RectPicture {
            start: self.start.clone(),
            bottom: self.i,
            top: self.j,
            o_bottom: self.o_bottom,
            o_top: self.o_top,
            o_left: self.o_left,
            o_right: self.o_right,
        }
    }

    /// The same rectangle rotated by 180°: bottom side on `j`.
    pub fn rotated_picture(&self) -> RectPicture {
        RectPicture {
            start: self.start.clone(),
            bottom: self.j,
            top: self.i,
            o_bottom: -self.o_top,
            o_top: -self.o_bottom,
            o_left: -self.o_right,
            o_right: -self.o_left,
        }
    }

    /// Moving coordinates are `{i, j}`; true if `p` is one of them.
    pub fn moves(&self, p: usize) -> bool {
        p == self.i || p == self.j
    }
}

/// An axis-aligned picture of a formal rectangle with an arbitrary α-curve on
/// the bottom. `normalize` rotates it into the canonical model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RectPicture {
    pub start: FormalGenerator,
    pub bottom: usize,
    pub top: usize,
    pub o_bottom: Sign,
    pub o_top: Sign,
    pub o_left: Sign,
    pub o_right: Sign,
}

impl RectPicture {
    pub fn normalize(&self) -> FormalRectangle {
        if self.bottom < self.top {
            FormalRectangle {
                start: self.start.clone(),
                i: self.bottom,
                j: self.top,
                o_bottom: self.o_bottom,
                o_top: self.o_top,
                o_left: self.o_left,
                o_right: self.o_right,
            }
        } else {
            FormalRectangle {
                start: self.start.clone(),
                i: self.top,
                j: self.bottom,
                o_bottom: -self.o_top,
                o_top: -self.o_bottom,
                o_left: -self.o_right,
                o_right: -self.o_left,
            }
        }
    }
}

/// Either a formal bigon or a formal rectangle.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "FlowRepr", into = "FlowRepr")]
pub enum FormalFlow {
    Bigon(FormalBigon),
    Rect(FormalRectangle),
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind")]
enum FlowRepr {
    #[serde(rename = "bigon")]
    Bigon { start: FormalGenerator, i: usize, o_alpha: Sign, o_beta: Sign },
    #[serde(rename = "rect")]
    Rect { start: FormalGenerator, i: usize, j: usize, o: [Sign; 4] },
}

impl TryFrom<FlowRepr> for FormalFlow {
    type Error = Error;
    fn try_from(r: FlowRepr) -> Result<Self> {
        match r {
            FlowRepr::Bigon { start, i, o_alpha, o_beta } => {
                if i == 0 {
                    return Err(Error::Parse("i is 1-based".into()));
                }
                Ok(FormalFlow::Bigon(FormalBigon { start, coord: i - 1, o_alpha, o_beta }))
            }
            FlowRepr::Rect { start, i, j, o } => {
                if i == 0 || j == 0 {
                    return Err(Error::Parse("i and j are 1-based".into()));
                }
                Ok(FormalFlow::Rect(FormalRectangle {
                    start,
                    i: i - 1,
                    j: j - 1,
                    o_bottom: o[0],
                    o_top: o[1],
                    o_left: o[2],
                    o_right: o[3],
                }))
            }
        }
    }
}

impl From<FormalFlow> for FlowRepr {
    fn from(f: FormalFlow) -> Self {
        match f {
            FormalFlow::Bigon(b) => FlowRepr::Bigon {
                start: b.start,
                i: b.coord + 1,
                o_alpha: b.o_alpha,
                o_beta: b.o_beta,
            },
            FormalFlow::Rect(r) => FlowRepr::Rect {
                o: r.bits(),
                start: r.start,
                i: r.i + 1,
                j: r.j + 1,
            },
        }
    }
}

impl From<FormalBigon> for FormalFlow {
    fn from(b: FormalBigon) -> Self {
        FormalFlow::Bigon(b)
    }
}

impl From<FormalRectangle> for FormalFlow {
    fn from(r: FormalRectangle) -> Self {
        FormalFlow::Rect(r)
    }
}

impl FormalFlow {
    pub fn start(&self) -> &FormalGenerator {
        match self {
            FormalFlow::Bigon(b) => &b.start,
            FormalFlow::Rect(r) => &r.start,
        }
    }

    pub fn power(&self) -> usize {
        self.start().power()
    }

    pub fn is_valid(&self) -> bool {
        match self {
            FormalFlow::Bigon(b) => b.is_valid(),
            FormalFlow::Rect(r) => r.is_valid(),
        }
    }

    pub(crate) fn end_unchecked(&self) -> FormalGenerator {
        match self {
            FormalFlow::Bigon(b) => b.end_unchecked(),
            FormalFlow::Rect(r) => r.end_unchecked(),
        }
    }

    /// End generator; errors on invalid flows.
    pub fn end(&self) -> Result<FormalGenerator> {
        self.check()?;
        Ok(self.end_unchecked())
    }

    pub fn moving_coords(&self) -> Vec<usize> {
        match self {
            FormalFlow::Bigon(b) => vec![b.coord],
            FormalFlow::Rect(r) => vec![r.i, r.j],
        }
    }

    /// Same local data, different start generator (used for disjoint partners).
    pub(crate) fn with_start(&self, start: FormalGenerator) -> FormalFlow {
        match self {
            FormalFlow::Bigon(b) => FormalFlow::Bigon(FormalBigon { start, ..b.clone() }),
            FormalFlow::Rect(r) => FormalFlow::Rect(FormalRectangle { start, ..r.clone() }),
        }
    }

    pub(crate) fn check(&self) -> Result<()> {
        if self.is_valid() {
            Ok(())
        } else {
            Err(Error::InvalidFlow(self.key()))
        }
    }

    pub fn as_rect(&self) -> Option<&FormalRectangle> {
        match self {
            FormalFlow::Rect(r) => Some(r),
            FormalFlow::Bigon(_) => None,
        }
    }

    pub fn as_bigon(&self) -> Option<&FormalBigon> {
        match self {
            FormalFlow::Bigon(b) => Some(b),
            FormalFlow::Rect(_) => None,
        }
    }

    /// Compact textual key, e.g. `b:2,1:+-:1:++` or `r:1,2:++:1,2:++++`.
    pub fn key(&self) -> String {
        match self {
            FormalFlow::Bigon(b) => format!(
                "b:{}:{}:{}{}",
                b.start.key_fragment(),
                b.coord + 1,
                b.o_alpha,
                b.o_beta
            ),
            FormalFlow::Rect(r) => format!(
                "r:{}:{},{}:{}{}{}{}",
                r.start.key_fragment(),
                r.i + 1,
                r.j + 1,
                r.o_bottom,
                r.o_top,
                r.o_left,
                r.o_right
            ),
        }
    }

    pub fn parse_key(key: &str) -> Result<FormalFlow> {
        let parts: Vec<&str> = key.split(':').collect();
        let bad = || Error::Parse(format!("bad flow key {key:?}"));
        if parts.len() != 5 {
            return Err(bad());
        }
        let start = FormalGenerator::parse_fragment(parts[1], parts[2])?;
        let bits: Vec<Sign> = parts[4].chars().map(Sign::from_char).collect::<Option<_>>().ok_or_else(bad)?;
        match parts[0] {
            "b" => {
                let i: usize = parts[3].parse().map_err(|_| bad())?;
                if i == 0 || bits.len() != 2 {
                    return Err(bad());
                }
                Ok(FormalFlow::Bigon(FormalBigon { start, coord: i - 1, o_alpha: bits[0], o_beta: bits[1] }))
            }
            "r" => {
                let (i, j) = parts[3].split_once(',').ok_or_else(bad)?;
                let i: usize = i.parse().map_err(|_| bad())?;
                let j: usize = j.parse().map_err(|_| bad())?;
                if i == 0 || j == 0 || bits.len() != 4 {
                    return Err(bad());
                }
                Ok(FormalFlow::Rect(FormalRectangle {
                    start,
                    i: i - 1,
                    j: j - 1,
                    o_bottom: bits[0],
                    o_top: bits[1],
                    o_left: bits[2],
                    o_right: bits[3],
                }))
            }
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for FormalFlow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.key())
    }
}

pub(crate) fn check_power(n: usize, bound: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::ZeroPower);
    }
    if n > bound || n > MAX_SUPPORTED_POWER {
        return Err(Error::PowerTooLarge { n, bound: bound.min(MAX_SUPPORTED_POWER) });
    }
    Ok(())
}

/// All sign profiles of length `n`, lexicographic with `+` first.
pub(crate) fn sign_profiles(n: usize) -> impl Iterator<Item = Vec<Sign>> {
    (0u32..(1u32 << n)).map(move |m| (0..n).map(|k| Sign::from_bit(m >> (n - 1 - k) & 1 == 1)).collect())
}

/// All `n! * 2^n` formal generators of power `n` in lexicographic order.
pub fn enumerate_generators(n: usize, limits: &Limits) -> Result<Vec<FormalGenerator>> {
    check_power(n, limits.enumeration)?;
    let mut out = Vec::with_capacity(perm::factorial(n) << n);
    for sigma in perm::permutations(n) {
        for eps in sign_profiles(n) {
            out.push(FormalGenerator::from_raw(sigma.clone(), eps));
        }
    }
    Ok(out)
}

/// The `2n` bigons starting at `x`, sorted.
pub fn bigons_from(x: &FormalGenerator) -> Vec<FormalBigon> {
    let mut out = Vec::with_capacity(2 * x.power());
    for coord in 0..x.power() {
        for o_alpha in Sign::BOTH {
            out.push(FormalBigon { start: x.clone(), coord, o_alpha, o_beta: o_alpha * x.eps(coord) });
        }
    }
    out
}

/// The `2n(n-1)` rectangles starting at `x`, sorted.
pub fn rects_from(x: &FormalGenerator) -> Vec<FormalRectangle> {
    let n = x.power();
    let mut out = Vec::with_capacity(2 * n * n.saturating_sub(1));
    for i in 0..n {
        for j in i + 1..n {
            for o_bottom in Sign::BOTH {
                for o_top in Sign::BOTH {
                    out.push(FormalRectangle {
                        start: x.clone(),
                        i,
                        j,
                        o_bottom,
                        o_top,
                        o_left: o_bottom * x.eps(i),
                        o_right: o_top * x.eps(j),
                    });
                }
            }
        }
    }
    out
}

/// All flows starting at `x`: bigons first, then rectangles.
pub fn flows_from(x: &FormalGenerator) -> Vec<FormalFlow> {
    bigons_from(x)
        .into_iter()
        .map(FormalFlow::Bigon)
        .chain(rects_from(x).into_iter().map(FormalFlow::Rect))
        .collect()
}

/// All bigons and all rectangles of power `n`, each list sorted.
pub fn enumerate_flows(n: usize, limits: &Limits) -> Result<(Vec<FormalBigon>, Vec<FormalRectangle>)> {
    let gens = enumerate_generators(n, limits)?;
    let mut bigons = Vec::new();
    let mut rects = Vec::new();
    for x in &gens {
        bigons.extend(bigons_from(x));
        rects.extend(rects_from(x));
    }
    Ok((bigons, rects))
}

/// All flows of power `n` in sorted order (bigons before rectangles).
pub fn enumerate_all_flows(n: usize, limits: &Limits) -> Result<Vec<FormalFlow>> {
    let (bigons, rects) = enumerate_flows(n, limits)?;
    Ok(bigons
        .into_iter()
        .map(FormalFlow::Bigon)
        .chain(rects.into_iter().map(FormalFlow::Rect))
        .collect())
}

pub fn flow_endpoints(flow: &FormalFlow) -> Result<(FormalGenerator, FormalGenerator)> {
    flow.check()?;
    Ok((flow.start().clone(), flow.end_unchecked()))
}

pub fn validate_flow(flow: &FormalFlow) -> bool {
    flow.is_valid()
}

/// The partner of `flow` in a boundary degeneration of the given kind.
pub fn companion(flow: &FormalFlow, kind: DegenerationKind) -> Result<FormalFlow> {
    flow.check()?;
    let start = flow.end_unchecked();
    Ok(match (flow, kind) {
        (FormalFlow::Bigon(b), DegenerationKind::Alpha) => {
            FormalFlow::Bigon(FormalBigon { start, coord: b.coord, o_alpha: b.o_alpha, o_beta: -b.o_beta })
        }
        (FormalFlow::Bigon(b), DegenerationKind::Beta) => {
            FormalFlow::Bigon(FormalBigon { start, coord: b.coord, o_alpha: -b.o_alpha, o_beta: b.o_beta })
        }
        // the complementary rectangle in the horizontal annulus
        (FormalFlow::Rect(r), DegenerationKind::Alpha) => FormalFlow::Rect(FormalRectangle {
            start,
            i: r.i,
            j: r.j,
            o_bottom: r.o_bottom,
            o_top: r.o_top,
            o_left: r.o_right,
            o_right: r.o_left,
        }),
        // the complementary rectangle in the vertical annulus, rotated back
        (FormalFlow::Rect(r), DegenerationKind::Beta) => FormalFlow::Rect(FormalRectangle {
            start,
            i: r.i,
            j: r.j,
            o_bottom: -r.o_bottom,
            o_top: -r.o_top,
            o_left: -r.o_right,
            o_right: -r.o_left,
        }),
    })
}

/// Reverses one side of `rect`, adjusting the start so the corner signs stay compatible.
pub fn reverse_edge(rect: &FormalRectangle, edge: Edge) -> Result<FormalRectangle> {
    if !rect.is_valid() {
        return Err(Error::InvalidFlow(FormalFlow::Rect(rect.clone()).key()));
    }
    let mut r = rect.clone();
    r.set_bit(edge, -rect.bit(edge));
    r.resync_start();
    Ok(r)
}

/// Negates the sign profile at the non-moving coordinate `p` of both endpoints.
pub fn simple_flip(rect: &FormalRectangle, p: usize) -> Result<FormalRectangle> {
    if !rect.is_valid() || p >= rect.start.power() {
        return Err(Error::InvalidFlow(FormalFlow::Rect(rect.clone()).key()));
    }
    if rect.moves(p) {
        return Err(Error::MovingCoordinate(p));
    }
    Ok(FormalRectangle { start: rect.start.flipped(p), ..rect.clone() })
}
