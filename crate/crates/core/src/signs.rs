//! Sign assignments: construction, gauge tools and the axiom verifier.
//!
//! Bigons get a closed formula. Profile-1 rectangles are solved as a GF(2)
//! system and gauge fixed on a spanning tree. Every other rectangle is reduced
//! to a profile-1 one through simple flips and basic relations.

use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::{Arc, RwLock};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formal::{
    self, reverse_edge, simple_flip, Edge, FormalBigon, FormalFlow, FormalGenerator, FormalRectangle,
};
use crate::gf2::Family;
use crate::relations::{self, RelationInstance};
use crate::sign::Sign;
use crate::torus::{self, Decomposition, TorusRect};
use crate::{perm, Limits};

/// Anything that assigns a sign to formal flows of a fixed power.
pub trait SignSource: Sync {
    fn power(&self) -> usize;
    fn sign(&self, flow: &FormalFlow) -> Result<Sign>;
}

impl<S: SignSource + ?Sized> SignSource for &S {
    fn power(&self) -> usize {
        (**self).power()
    }
    fn sign(&self, flow: &FormalFlow) -> Result<Sign> {
        (**self).sign(flow)
    }
}

impl<S: SignSource + ?Sized> SignSource for Box<S> {
    fn power(&self) -> usize {
        (**self).power()
    }
    fn sign(&self, flow: &FormalFlow) -> Result<Sign> {
        (**self).sign(flow)
    }
}

impl<S: SignSource + ?Sized + Send> SignSource for Arc<S> {
    fn power(&self) -> usize {
        (**self).power()
    }
    fn sign(&self, flow: &FormalFlow) -> Result<Sign> {
        (**self).sign(flow)
    }
}

fn check_power(src: &dyn SignSource, flow: &FormalFlow) -> Result<()> {
    if flow.power() != src.power() {
        return Err(Error::PowerMismatch { expected: src.power(), found: flow.power() });
    }
    Ok(())
}

/// `o_alpha * prod_{j < i} epsilon_j`.
pub fn bigon_sign(b: &FormalBigon) -> Result<Sign> {
    if !b.is_valid() {
        return Err(Error::InvalidFlow(FormalFlow::Bigon(b.clone()).key()));
    }
    Ok(b.o_alpha * Sign::product(b.start.epsilon()[..b.coord].iter().copied()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scope {
    Bigons,
    Profile1Rectangles,
    AllFlows,
}

/// A finite table of signs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignTable {
    pub n: usize,
    pub scope: Scope,
    pub gauge_id: String,
    pub entries: HashMap<FormalFlow, Sign>,
}

#[derive(Serialize, Deserialize)]
struct SignTableRepr {
    n: usize,
    scope: Scope,
    gauge_id: String,
    entries: Vec<(String, Sign)>,
}

impl SignTable {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, flow: &FormalFlow) -> Option<Sign> {
        self.entries.get(flow).copied()
    }

    /// Flows in the table, sorted.
    pub fn flows(&self) -> Vec<FormalFlow> {
        let mut v: Vec<FormalFlow> = self.entries.keys().cloned().collect();
        v.sort();
        v
    }

    pub fn to_json(&self) -> serde_json::Value {
        let repr = SignTableRepr {
            n: self.n,
            scope: self.scope,
            gauge_id: self.gauge_id.clone(),
            entries: self.flows().into_iter().map(|f| (f.key(), self.entries[&f])).collect(),
        };
        serde_json::to_value(repr).expect("sign table serializes")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<SignTable> {
        let repr: SignTableRepr = serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        let mut entries = HashMap::new();
        for (k, s) in repr.entries {
            let f = FormalFlow::parse_key(&k)?;
            f.check()?;
            entries.insert(f, s);
        }
        Ok(SignTable { n: repr.n, scope: repr.scope, gauge_id: repr.gauge_id, entries })
    }

    /// The same table with one entry negated.
    pub fn perturbed(&self, flow: &FormalFlow) -> SignTable {
        let mut t = self.clone();
        if let Some(s) = t.entries.get_mut(flow) {
            *s = -*s;
        }
        t.gauge_id = format!("{}+perturbed", self.gauge_id);
        t
    }
}

impl SignSource for SignTable {
    fn power(&self) -> usize {
        self.n
    }
    fn sign(&self, flow: &FormalFlow) -> Result<Sign> {
        self.get(flow).ok_or_else(|| Error::ScopeMismatch(format!("{flow} is not in the table")))
    }
}

/// Result of a gauge-fixed GF(2) solve.
#[derive(Clone, Debug)]
pub struct Solved {
    pub table: SignTable,
    /// Dimension of the solution space before gauge fixing.
    pub dimension: usize,
    pub variables: usize,
    pub rows: usize,
    pub instances: usize,
}

fn shuffled_order(nvars: usize, seed: Option<u64>) -> Option<Vec<u32>> {
    use rand::seq::SliceRandom;
    seed.map(|s| {
        let mut v: Vec<u32> = (0..nvars as u32).collect();
        v.shuffle(&mut ChaCha8Rng::seed_from_u64(s));
        v
    })
}

fn solve_system(sys: &crate::gf2::Gf2System, n: usize, scope: Scope, tree_seed: Option<u64>) -> Result<Solved> {
    let order = shuffled_order(sys.num_vars(), tree_seed);
    let sol = sys.solve_gauge_fixed(order.as_deref())?;
    let entries = sys.vars.iter().enumerate().map(|(k, f)| (f.clone(), sol.sign(k as u32))).collect();
    let root = sys.vars.iter().map(|f| f.start()).min().map(|g| g.to_string()).unwrap_or_default();
    let gauge_id = match tree_seed {
        None => format!("bfs-tree:{root}"),
        Some(s) => format!("bfs-tree:{root}:shuffle-{s}"),
    };
    Ok(Solved {
        table: SignTable { n, scope, gauge_id, entries },
        dimension: sol.dimension,
        variables: sys.num_vars(),
        rows: sys.rows.len(),
        instances: sys.instance_count,
    })
}

/// Signs on profile-1 rectangles from degenerations and grid squares.
pub fn solve_profile1(n: usize, limits: &Limits) -> Result<Solved> {
    let sys = relations::profile1_rows(n, limits)?;
    solve_system(&sys, n, Scope::Profile1Rectangles, None)
}

/// Signs on all flows of power `n` from every relation family.
pub fn solve_global(n: usize, limits: &Limits) -> Result<Solved> {
    solve_global_with(n, limits, None)
}

/// As [`solve_global`], with the spanning tree built from a shuffled flow order.
pub fn solve_global_with(n: usize, limits: &Limits, tree_seed: Option<u64>) -> Result<Solved> {
    formal::check_power(n, limits.global)?;
    let sys = relations::enumerate_relation_rows(n, &Family::ALL, limits)?;
    let solved = solve_system(&sys, n, Scope::AllFlows, tree_seed)?;
    let expected = perm::factorial(n) * (1 << n) - 1;
    if solved.dimension != expected {
        return Err(Error::DimensionMismatch { found: solved.dimension, expected });
    }
    Ok(solved)
}

/// Total sign assignment built from a profile-1 table.
///
/// The base table may have a smaller power `m` than the evaluator; then
/// rectangles must fix every coordinate from `m` on, which is the case for
/// all rectangles of a stabilized diagram.
pub struct SignEvaluator {
    n: usize,
    base: Arc<SignTable>,
    memo: RwLock<HashMap<FormalRectangle, Sign>>,
}

impl SignEvaluator {
    pub fn new(n: usize, base: Arc<SignTable>) -> Result<Self> {
        if base.scope != Scope::Profile1Rectangles || base.n > n {
            return Err(Error::ScopeMismatch(format!(
                "base table of power {} and scope {:?} cannot serve power {n}",
                base.n, base.scope
            )));
        }
        Ok(SignEvaluator { n, base, memo: RwLock::new(HashMap::new()) })
    }

    /// Solves the profile-1 sector at power `min(n, limits.profile1)`.
    pub fn build(n: usize, limits: &Limits) -> Result<Self> {
        formal::check_power(n, limits.enumeration.max(n))?;
        let m = n.min(limits.profile1);
        SignEvaluator::new(n, Arc::new(solve_profile1(m, limits)?.table))
    }

    pub fn base(&self) -> &Arc<SignTable> {
        &self.base
    }

    pub fn memo_len(&self) -> usize {
        self.memo.read().unwrap().len()
    }

    pub fn evaluate(&self, flow: &FormalFlow) -> Result<Sign> {
        check_power(self, flow)?;
        flow.check()?;
        match flow {
            FormalFlow::Bigon(b) => bigon_sign(b),
            FormalFlow::Rect(r) => self.rect(r),
        }
    }

    fn rect(&self, r: &FormalRectangle) -> Result<Sign> {
        if let Some(&s) = self.memo.read().unwrap().get(r) {
            return Ok(s);
        }
        let s = self.reduce(r)?;
        self.memo.write().unwrap().insert(r.clone(), s);
        Ok(s)
    }

    fn reduce(&self, r: &FormalRectangle) -> Result<Sign> {
        if let Some(p) = (0..self.n).find(|&p| !r.moves(p) && r.start.eps(p) == Sign::Minus) {
            // S(R) = -S(B) S(B') S(R')
            let sq = relations::flip_square(r, p)?;
            let b = sq.flows[0].as_bigon().unwrap();
            let b2 = sq.flows[3].as_bigon().unwrap();
            let flipped = simple_flip(r, p)?;
            return Ok(-(bigon_sign(b)? * bigon_sign(b2)? * self.rect(&flipped)?));
        }
        if let Some(e) = Edge::ALL.into_iter().find(|&e| r.bit(e) == Sign::Minus) {
            // S(A) = -S(BC) S(C) S(AB)
            let sq = relations::basic_relation(r, e)?;
            let bc = sq.flows[1].as_bigon().unwrap();
            let c = sq.flows[2].as_bigon().unwrap();
            let ab = reverse_edge(r, e)?;
            return Ok(-(bigon_sign(bc)? * bigon_sign(c)? * self.rect(&ab)?));
        }
        self.lookup(r)
    }

    fn lookup(&self, r: &FormalRectangle) -> Result<Sign> {
        let m = self.base.n;
        let key = if m == self.n {
            FormalFlow::Rect(r.clone())
        } else {
            let fixes_tail = (m..self.n).all(|k| r.start.beta_of(k) == k);
            if !fixes_tail || r.j >= m {
                return Err(Error::ScopeMismatch(format!(
                    "{} moves coordinates beyond the base power {m}",
                    FormalFlow::Rect(r.clone())
                )));
            }
            let start = FormalGenerator::from_raw(r.start.sigma()[..m].to_vec(), vec![Sign::Plus; m]);
            FormalFlow::Rect(FormalRectangle { start, ..r.clone() })
        };
        self.base.sign(&key)
    }
}

impl SignSource for SignEvaluator {
    fn power(&self) -> usize {
        self.n
    }
    fn sign(&self, flow: &FormalFlow) -> Result<Sign> {
        self.evaluate(flow)
    }
}

/// A ±1-valued function on formal generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GaugeMap {
    Identity,
    Table { values: HashMap<FormalGenerator, Sign>, restricted: bool },
    /// A pseudo-random function of the generator (or of its permutation only).
    Seeded { seed: u64, restricted: bool },
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl GaugeMap {
    pub fn value(&self, x: &FormalGenerator) -> Sign {
        match self {
            GaugeMap::Identity => Sign::Plus,
            GaugeMap::Table { values, .. } => values.get(x).copied().unwrap_or(Sign::Plus),
            GaugeMap::Seeded { seed, restricted } => {
                let mut h = splitmix(*seed);
                for &v in x.sigma() {
                    h = splitmix(h ^ v as u64);
                }
                if !restricted {
                    for &s in x.epsilon() {
                        h = splitmix(h ^ (2 + s.bit() as u64));
                    }
                }
                Sign::from_bit(h & 1 == 1)
            }
        }
    }

    pub fn is_restricted(&self) -> bool {
        match self {
            GaugeMap::Identity => true,
            GaugeMap::Table { restricted, .. } | GaugeMap::Seeded { restricted, .. } => *restricted,
        }
    }

    /// Tabulates `f` on `gens`.
    pub fn from_fn(gens: &[FormalGenerator], f: impl Fn(&FormalGenerator) -> Sign) -> GaugeMap {
        GaugeMap::Table { values: gens.iter().map(|g| (g.clone(), f(g))).collect(), restricted: false }
    }

    /// True if `self` and `other` agree on `gens` up to a global sign.
    pub fn agrees_up_to_sign(&self, other: &GaugeMap, gens: &[FormalGenerator]) -> bool {
        let d: HashSet<Sign> = gens.iter().map(|g| self.value(g) * other.value(g)).collect();
        d.len() <= 1
    }
}

/// `S^u(φ) = u(x) S(φ) u(y)`.
pub struct Gauged<S> {
    pub inner: S,
    pub gauge: GaugeMap,
}

impl<S: SignSource> SignSource for Gauged<S> {
    fn power(&self) -> usize {
        self.inner.power()
    }
    fn sign(&self, flow: &FormalFlow) -> Result<Sign> {
        let s = self.inner.sign(flow)?;
        Ok(self.gauge.value(flow.start()) * s * self.gauge.value(&flow.end()?))
    }
}

pub fn apply_gauge(table: &SignTable, u: &GaugeMap) -> SignTable {
    let entries = table
        .entries
        .iter()
        .map(|(f, &s)| (f.clone(), u.value(f.start()) * s * u.value(&f.end_unchecked())))
        .collect();
    SignTable { entries, gauge_id: format!("{}+gauge", table.gauge_id), ..table.clone() }
}

/// Finds `u` with `s2 = s1^u` on `flows`, fixing `u = +1` at the least
/// generator of each connected component.
pub fn find_gauge(s1: &dyn SignSource, s2: &dyn SignSource, flows: &[FormalFlow]) -> Result<GaugeMap> {
    if s1.power() != s2.power() {
        return Err(Error::ScopeMismatch(format!("powers {} and {}", s1.power(), s2.power())));
    }
    let mut adj: HashMap<FormalGenerator, Vec<(FormalGenerator, Sign)>> = HashMap::new();
    let mut diffs = Vec::with_capacity(flows.len());
    for f in flows {
        let d = s1.sign(f)? * s2.sign(f)?;
        let (x, y) = (f.start().clone(), f.end()?);
        adj.entry(x.clone()).or_default().push((y.clone(), d));
        adj.entry(y).or_default().push((x, d));
        diffs.push(d);
    }
    let mut gens: Vec<&FormalGenerator> = adj.keys().collect();
    gens.sort();
    let mut u: HashMap<FormalGenerator, Sign> = HashMap::new();
    for root in gens {
        if u.contains_key(root) {
            continue;
        }
        u.insert(root.clone(), Sign::Plus);
        let mut queue = VecDeque::from([root.clone()]);
        while let Some(x) = queue.pop_front() {
            let ux = u[&x];
            for (y, d) in &adj[&x] {
                if !u.contains_key(y) {
                    u.insert(y.clone(), *d * ux);
                    queue.push_back(y.clone());
                }
            }
        }
    }
    for (f, d) in flows.iter().zip(diffs) {
        if u[f.start()] * u[&f.end_unchecked()] != d {
            return Err(Error::NotEquivalent(format!("flow {f} violates the gauge")));
        }
    }
    Ok(GaugeMap::Table { values: u, restricted: false })
}

/// `m(sigma, epsilon) = sgn(sigma) * prod(epsilon)`.
pub fn twist_value(x: &FormalGenerator) -> Sign {
    x.twist_value()
}

/// `S'(φ) = S(φ) * m(start(φ))`.
pub struct Twisted<S>(pub S);

impl<S: SignSource> SignSource for Twisted<S> {
    fn power(&self) -> usize {
        self.0.power()
    }
    fn sign(&self, flow: &FormalFlow) -> Result<Sign> {
        Ok(self.0.sign(flow)? * flow.start().twist_value())
    }
}

pub fn m_twist(table: &SignTable) -> Result<SignTable> {
    if table.scope != Scope::AllFlows {
        return Err(Error::ScopeMismatch("the twist needs a table over all flows".into()));
    }
    let entries = table.entries.iter().map(|(f, &s)| (f.clone(), s * f.start().twist_value())).collect();
    Ok(SignTable { entries, gauge_id: format!("{}+twist", table.gauge_id), ..table.clone() })
}

/// Power-`n` signs read off a power-`n+1` source by fixing the last coordinate.
pub struct Restricted<S> {
    pub inner: S,
    pub fixed_epsilon: Sign,
}

pub fn embed(flow: &FormalFlow, eps: Sign) -> FormalFlow {
    flow.with_start(flow.start().extended(eps))
}

impl<S: SignSource> SignSource for Restricted<S> {
    fn power(&self) -> usize {
        self.inner.power() - 1
    }
    fn sign(&self, flow: &FormalFlow) -> Result<Sign> {
        check_power(self, flow)?;
        self.inner.sign(&embed(flow, self.fixed_epsilon))
    }
}

pub fn restrict<S: SignSource>(inner: S, fixed_epsilon: Sign) -> Restricted<S> {
    Restricted { inner, fixed_epsilon }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerifyMode {
    Exhaustive,
    Sampled { count: usize, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyCount {
    pub family: Family,
    pub checked: usize,
    pub violations: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub n: usize,
    pub swapped: bool,
    pub sampled: bool,
    pub families: Vec<FamilyCount>,
    /// Descriptions of violated relations, at most [`VerifyReport::MAX_LISTED`].
    pub violations: Vec<String>,
    pub total_violations: usize,
}

impl VerifyReport {
    pub const MAX_LISTED: usize = 100;

    pub fn passed(&self) -> bool {
        self.total_violations == 0
    }

    pub fn checked(&self) -> usize {
        self.families.iter().map(|f| f.checked).sum()
    }

    pub fn to_text(&self) -> String {
        let mut s = format!(
            "power {}{}{}\n",
            self.n,
            if self.swapped { " (alpha/beta swapped)" } else { "" },
            if self.sampled { " (sampled)" } else { "" }
        );
        for f in &self.families {
            s += &format!("  {:<14} checked {:>9}  violations {}\n", f.family.name(), f.checked, f.violations);
        }
        for v in self.violations.iter().take(10) {
            s += &format!("  violation: {v}\n");
        }
        if self.total_violations > 10 {
            s += &format!("  ... {} more violations\n", self.total_violations - 10);
        }
        s += if self.passed() { "PASS\n" } else { "FAIL\n" };
        s
    }
}

fn check_instance(src: &dyn SignSource, inst: &RelationInstance, swapped: bool) -> Result<bool> {
    let mut p = Sign::Plus;
    for f in &inst.flows {
        p *= src.sign(f)?;
    }
    Ok(p == inst.expected_product(swapped))
}

/// Checks every relation instance of the chosen families (or a seeded sample).
/// With `swapped`, α-degenerations must multiply to `-1` and β-degenerations to `+1`.
pub fn verify(
    src: &dyn SignSource,
    families: &[Family],
    mode: VerifyMode,
    swapped: bool,
    limits: &Limits,
) -> Result<VerifyReport> {
    let n = src.power();
    let instances: Vec<RelationInstance> = match mode {
        VerifyMode::Exhaustive => relations::relation_instances(n, families, limits)?,
        VerifyMode::Sampled { count, seed } => sample_instances(n, families, count, seed)?,
    };
    let results: Vec<bool> =
        instances.par_iter().map(|i| check_instance(src, i, swapped)).collect::<Result<_>>()?;
    let mut counts: Vec<FamilyCount> =
        families.iter().map(|&family| FamilyCount { family, checked: 0, violations: 0 }).collect();
    let mut violations = Vec::new();
    let mut total = 0;
    for (inst, ok) in instances.iter().zip(results) {
        let c = counts.iter_mut().find(|c| c.family == inst.family).unwrap();
        c.checked += 1;
        if !ok {
            c.violations += 1;
            total += 1;
            if violations.len() < VerifyReport::MAX_LISTED {
                violations.push(inst.describe());
            }
        }
    }
    Ok(VerifyReport {
        n,
        swapped,
        sampled: matches!(mode, VerifyMode::Sampled { .. }),
        families: counts,
        violations,
        total_violations: total,
    })
}

/// `count` seeded instances, spread round-robin over `families`.
pub fn sample_instances(n: usize, families: &[Family], count: usize, seed: u64) -> Result<Vec<RelationInstance>> {
    formal::check_power(n, formal::MAX_SUPPORTED_POWER)?;
    if families.is_empty() {
        return Ok(Vec::new());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let mut misses = 0usize;
    while out.len() < count {
        let fam = families[out.len() % families.len()];
        match relations::sample_instance(n, fam, &mut rng)? {
            Some(i) => out.push(i),
            None => {
                misses += 1;
                if misses > 64 * count.max(1) {
                    break;
                }
            }
        }
    }
    Ok(out)
}

/// How often each three-piece decomposition reproduces the sign of a
/// profile-1 rectangle with interior points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecompositionReport {
    pub n: usize,
    pub rectangles: usize,
    /// (rectangle, interior point) pairs examined.
    pub points: usize,
    /// Per decomposition, the number of pairs where the product of the piece
    /// signs equals the sign of the rectangle.
    pub holds: Vec<(String, usize)>,
    /// Rectangles whose conventional product depends on the chosen point.
    pub dependent: usize,
}

impl DecompositionReport {
    /// The conventional identity holds everywhere and never depends on the point.
    pub fn passed(&self) -> bool {
        self.holds[0].1 == self.points && self.dependent == 0
    }
}

/// Checks `S(r) = S(B) S(AC) S(D)` on every profile-1 rectangle of positive complexity.
pub fn check_decompositions(src: &dyn SignSource) -> Result<DecompositionReport> {
    let n = src.power();
    let sign = |sigma: &[u8], r: TorusRect| src.sign(&FormalFlow::Rect(torus::to_profile1(sigma, r)));
    let per_perm: Vec<(usize, usize, [usize; 4], usize)> = perm::permutations(n)
        .par_iter()
        .map(|sigma| {
            let (mut rects, mut points, mut holds, mut dependent) = (0, 0, [0usize; 4], 0);
            for r in torus::rects_from(sigma) {
                let interior = r.interior_points(sigma);
                if interior.is_empty() {
                    continue;
                }
                rects += 1;
                let s = sign(sigma, r)?;
                let mut conv = Vec::new();
                for &k in &interior {
                    points += 1;
                    for (slot, d) in Decomposition::ALL.into_iter().enumerate() {
                        let mut prod = Sign::Plus;
                        for (start, piece) in d.path(sigma, r, k) {
                            prod *= sign(&start, piece)?;
                        }
                        if prod == s {
                            holds[slot] += 1;
                        }
                        if d == Decomposition::BAcD {
                            conv.push(prod);
                        }
                    }
                }
                if conv.iter().any(|&c| c != conv[0]) {
                    dependent += 1;
                }
            }
            Ok((rects, points, holds, dependent))
        })
        .collect::<Result<_>>()?;
    let mut total = (0, 0, [0usize; 4], 0);
    for (r, p, h, d) in per_perm {
        total.0 += r;
        total.1 += p;
        for k in 0..4 {
            total.2[k] += h[k];
        }
        total.3 += d;
    }
    Ok(DecompositionReport {
        n,
        rectangles: total.0,
        points: total.1,
        holds: Decomposition::ALL.iter().zip(total.2).map(|(d, c)| (d.name().to_string(), c)).collect(),
        dependent: total.3,
    })
}
