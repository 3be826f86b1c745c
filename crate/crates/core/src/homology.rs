//! Signed grid differentials and their homology.
//!
//! The differential of a grid diagram maps a generator `x` to the signed sum
//! of the ends of the empty rectangles and stabilization bigons out of `x`.
//! Homology over the integers comes from a Smith normal form; the ranks over
//! GF(2) (from the unsigned differential) and over the rationals are computed
//! separately as cross-checks.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::diagram::{self, GridDiagram};
use crate::error::{Error, Result};
use crate::gf2::BitMatrix;
use crate::signs::SignSource;

/// Sparse integer matrix; entry `(r, c)` is the coefficient of generator `r`
/// in the image of generator `c`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SparseIntMatrix {
    pub rows: usize,
    pub cols: usize,
    entries: BTreeMap<(usize, usize), BigInt>,
}

impl SparseIntMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        SparseIntMatrix { rows, cols, entries: BTreeMap::new() }
    }

    pub fn add(&mut self, r: usize, c: usize, v: impl Into<BigInt>) {
        assert!(r < self.rows && c < self.cols, "entry ({r}, {c}) out of range");
        let e = self.entries.entry((r, c)).or_default();
        *e += v.into();
        if e.is_zero() {
            self.entries.remove(&(r, c));
        }
    }

    pub fn get(&self, r: usize, c: usize) -> BigInt {
        self.entries.get(&(r, c)).cloned().unwrap_or_default()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &BigInt)> {
        self.entries.iter().map(|(&(r, c), v)| (r, c, v))
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &SparseIntMatrix) -> SparseIntMatrix {
        assert_eq!(self.cols, other.rows);
        let mut by_row: Vec<Vec<(usize, &BigInt)>> = vec![Vec::new(); other.rows];
        for (r, c, v) in other.entries() {
            by_row[r].push((c, v));
        }
        let mut out = SparseIntMatrix::new(self.rows, other.cols);
        for (r, k, a) in self.entries() {
            for &(c, b) in &by_row[k] {
                out.add(r, c, a * b);
            }
        }
        out
    }

    /// One line per nonzero entry: `row col value`, 0-based, sorted.
    pub fn to_triplets(&self) -> String {
        let mut s = format!("{} {} {}\n", self.rows, self.cols, self.nnz());
        for (r, c, v) in self.entries() {
            let _ = writeln!(s, "{r} {c} {v}");
        }
        s
    }
}

fn check_source(d: &GridDiagram, src: &dyn SignSource) -> Result<()> {
    if src.power() != d.power() {
        return Err(Error::PowerMismatch { expected: d.power(), found: src.power() });
    }
    Ok(())
}

/// Signed differential of `d` under the sign assignment `src`.
pub fn differential(d: &GridDiagram, src: &dyn SignSource) -> Result<SparseIntMatrix> {
    check_source(d, src)?;
    let gens = diagram::generators(d)?;
    let index = diagram::generator_index(&gens);
    let cols: Vec<Vec<(usize, i64)>> = gens
        .par_iter()
        .map(|x| {
            let mut col = Vec::new();
            for (f, y) in diagram::flows_from(d, x)? {
                let s = src.sign(&diagram::to_formal(d, &f, x)?)?;
                col.push((index[&y], s.to_i64()));
            }
            Ok(col)
        })
        .collect::<Result<_>>()?;
    let mut m = SparseIntMatrix::new(gens.len(), gens.len());
    for (c, col) in cols.into_iter().enumerate() {
        for (r, v) in col {
            m.add(r, c, v);
        }
    }
    Ok(m)
}

/// The unsigned differential, reduced mod 2, as a list of rows of column sets.
pub fn differential_f2(d: &GridDiagram) -> Result<Vec<Vec<usize>>> {
    let gens = diagram::generators(d)?;
    let index = diagram::generator_index(&gens);
    let mut rows: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); gens.len()];
    for (c, x) in gens.iter().enumerate() {
        for (_, y) in diagram::flows_from(d, x)? {
            let r = index[&y];
            if !rows[r].remove(&c) {
                rows[r].insert(c);
            }
        }
    }
    Ok(rows.into_iter().map(|s| s.into_iter().collect()).collect())
}

/// A nonzero entry of `d * d`, if any.
pub fn square_zero_witness(m: &SparseIntMatrix) -> Option<(usize, usize, BigInt)> {
    m.mul(m).entries().next().map(|(r, c, v)| (r, c, v.clone()))
}

pub fn d_squared_is_zero(m: &SparseIntMatrix) -> bool {
    square_zero_witness(m).is_none()
}

/// A nonzero coefficient of `d^2` with the signed two-step paths behind it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SquareWitness {
    pub from: usize,
    pub to: usize,
    pub value: String,
    /// `(first flow, its sign, second flow, its sign)` by formal flow key.
    pub paths: Vec<(String, i64, String, i64)>,
}

/// `None` if `d^2 = 0` for `d` under `src`, else the first offending pair.
pub fn d_squared_witness(d: &GridDiagram, src: &dyn SignSource) -> Result<Option<SquareWitness>> {
    let m = differential(d, src)?;
    let Some((to, from, value)) = square_zero_witness(&m) else {
        return Ok(None);
    };
    let gens = diagram::generators(d)?;
    let index = diagram::generator_index(&gens);
    let mut paths = Vec::new();
    let x = &gens[from];
    for (f1, y) in diagram::flows_from(d, x)? {
        for (f2, z) in diagram::flows_from(d, &y)? {
            if index[&z] == to {
                let a = diagram::to_formal(d, &f1, x)?;
                let b = diagram::to_formal(d, &f2, &y)?;
                paths.push((a.key(), src.sign(&a)?.to_i64(), b.key(), src.sign(&b)?.to_i64()));
            }
        }
    }
    Ok(Some(SquareWitness { from, to, value: value.to_string(), paths }))
}

/// Entry type for the elimination: `i64` with overflow detection, or `BigInt`.
trait Coef: Clone + Eq + Ord + Zero + One + Integer + Signed + std::fmt::Debug {
    /// `a - q * b`, or `None` when the result leaves the safe range.
    fn sub_mul(a: &Self, q: &Self, b: &Self) -> Option<Self>;
    fn to_big(&self) -> BigInt;
}

const SAFE: i64 = 1 << 62;

impl Coef for i64 {
    fn sub_mul(a: &i64, q: &i64, b: &i64) -> Option<i64> {
        let r = a.checked_sub(q.checked_mul(*b)?)?;
        (r.abs() < SAFE).then_some(r)
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Coef for BigInt {
    fn sub_mul(a: &BigInt, q: &BigInt, b: &BigInt) -> Option<BigInt> {
        Some(a - q * b)
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

/// Result of a Smith normal form computation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SmithForm {
    pub rank: usize,
    /// Nonzero diagonal entries, positive, each dividing the next.
    #[serde(serialize_with = "ser_bigints")]
    pub invariant_factors: Vec<BigInt>,
}

fn ser_bigints<S: serde::Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|b| b.to_string()))
}

fn ser_factors<S: serde::Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|b| match u64::try_from(b) {
        Ok(x) => serde_json::Value::from(x),
        Err(_) => serde_json::Value::from(b.to_string()),
    }))
}

struct Elim<T> {
    rows: Vec<BTreeMap<usize, T>>,
    cols: Vec<BTreeSet<usize>>,
}

impl<T: Coef> Elim<T> {
    fn new(m: &SparseIntMatrix, conv: impl Fn(&BigInt) -> Option<T>) -> Option<Self> {
        let mut rows = vec![BTreeMap::new(); m.rows];
        let mut cols = vec![BTreeSet::new(); m.cols];
        for (r, c, v) in m.entries() {
            rows[r].insert(c, conv(v)?);
            cols[c].insert(r);
        }
        Some(Elim { rows, cols })
    }

    fn set(&mut self, r: usize, c: usize, v: T) {
        if v.is_zero() {
            self.rows[r].remove(&c);
            self.cols[c].remove(&r);
        } else {
            self.rows[r].insert(c, v);
            self.cols[c].insert(r);
        }
    }

    /// row `dst` -= q * row `src`.
    fn row_op(&mut self, dst: usize, q: &T, src: usize) -> Option<()> {
        let src_row: Vec<(usize, T)> = self.rows[src].iter().map(|(&c, v)| (c, v.clone())).collect();
        for (c, v) in src_row {
            let cur = self.rows[dst].get(&c).cloned().unwrap_or_else(T::zero);
            let nv = T::sub_mul(&cur, q, &v)?;
            self.set(dst, c, nv);
        }
        Some(())
    }

    /// column `dst` -= q * column `src`.
    fn col_op(&mut self, dst: usize, q: &T, src: usize) -> Option<()> {
        let src_col: Vec<usize> = self.cols[src].iter().copied().collect();
        for r in src_col {
            let v = self.rows[r][&src].clone();
            let cur = self.rows[r].get(&dst).cloned().unwrap_or_else(T::zero);
            let nv = T::sub_mul(&cur, q, &v)?;
            self.set(r, dst, nv);
        }
        Some(())
    }

    /// Pivot: smallest magnitude, then smallest fill-in estimate, then position.
    fn pick(&self) -> Option<(usize, usize)> {
        let mut best: Option<(T, usize, usize, usize)> = None;
        for (r, row) in self.rows.iter().enumerate() {
            for (&c, v) in row {
                let a = v.abs();
                if let Some((ba, _, _, _)) = &best {
                    if a > *ba {
                        continue;
                    }
                }
                let cost = (row.len() - 1) * (self.cols[c].len() - 1);
                let cand = (a, cost, r, c);
                if best.as_ref().is_none_or(|b| (&cand.0, cand.1, cand.2, cand.3) < (&b.0, b.1, b.2, b.3)) {
                    best = Some(cand);
                }
            }
        }
        best.map(|(_, _, r, c)| (r, c))
    }

    fn run(mut self) -> Option<Vec<T>> {
        let mut diag = Vec::new();
        while let Some((r, c)) = self.pick() {
            let p = self.rows[r][&c].clone();
            // a column entry not divisible by p: reduce it and pick again
            let bad_row = self.cols[c].iter().copied().find(|&r2| r2 != r && !self.rows[r2][&c].is_multiple_of(&p));
            if let Some(r2) = bad_row {
                let q = self.rows[r2][&c].div_floor(&p);
                self.row_op(r2, &q, r)?;
                continue;
            }
            let bad_col = self.rows[r].iter().find(|(&c2, v)| c2 != c && !v.is_multiple_of(&p)).map(|(&c2, _)| c2);
            if let Some(c2) = bad_col {
                let q = self.rows[r][&c2].div_floor(&p);
                self.col_op(c2, &q, c)?;
                continue;
            }
            let others: Vec<usize> = self.cols[c].iter().copied().filter(|&r2| r2 != r).collect();
            for r2 in others {
                let q = self.rows[r2][&c].div_floor(&p);
                self.row_op(r2, &q, r)?;
            }
            // every other entry in row r is a multiple of p; column operations
            // clear them without touching other rows
            let row = std::mem::take(&mut self.rows[r]);
            for &c2 in row.keys() {
                self.cols[c2].remove(&r);
            }
            diag.push(p.abs());
        }
        Some(diag)
    }
}

fn normalize_diagonal(mut d: Vec<BigInt>) -> Vec<BigInt> {
    d.sort();
    let start = d.iter().position(|v| !v.is_one()).unwrap_or(d.len());
    for i in start..d.len() {
        for j in i + 1..d.len() {
            let g = d[i].gcd(&d[j]);
            let l = d[i].lcm(&d[j]);
            d[i] = g;
            d[j] = l;
        }
    }
    d
}

/// Smith normal form by sparse elimination. Runs in machine integers and
/// restarts in arbitrary precision if an entry grows too large.
pub fn smith_normal_form(m: &SparseIntMatrix) -> SmithForm {
    let fast = Elim::<i64>::new(m, |v| i64::try_from(v).ok().filter(|x| x.abs() < SAFE)).and_then(Elim::run);
    let diag: Vec<BigInt> = match fast {
        Some(d) => d.iter().map(Coef::to_big).collect(),
        None => Elim::<BigInt>::new(m, |v| Some(v.clone())).and_then(Elim::run).expect("BigInt elimination cannot overflow"),
    };
    SmithForm { rank: diag.len(), invariant_factors: normalize_diagonal(diag) }
}

/// Rank over the rationals by fraction-free row reduction with content removal.
pub fn rational_rank(m: &SparseIntMatrix) -> usize {
    let mut input: Vec<BTreeMap<usize, BigInt>> = vec![BTreeMap::new(); m.rows];
    for (r, c, v) in m.entries() {
        input[r].insert(c, v.clone());
    }
    let mut pivots: BTreeMap<usize, BTreeMap<usize, BigInt>> = BTreeMap::new();
    for mut row in input {
        while let Some((&lead, _)) = row.iter().next() {
            let Some(prow) = pivots.get(&lead) else { break };
            let a = row[&lead].clone();
            let p = prow[&lead].clone();
            let g = a.gcd(&p);
            let (ma, mp) = (&p / &g, &a / &g);
            for v in row.values_mut() {
                *v *= &ma;
            }
            for (&c, v) in prow {
                let e = row.entry(c).or_default();
                *e -= &mp * v;
                if e.is_zero() {
                    row.remove(&c);
                }
            }
            let content = row.values().fold(BigInt::zero(), |g, v| g.gcd(v));
            if !content.is_zero() && !content.is_one() {
                for v in row.values_mut() {
                    *v /= &content;
                }
            }
        }
        if let Some((&lead, _)) = row.iter().next() {
            pivots.insert(lead, row);
        }
    }
    pivots.len()
}

pub fn f2_rank(rows: &[Vec<usize>], cols: usize) -> usize {
    let mut m = BitMatrix::new(cols);
    for r in rows {
        m.push_row(r, false);
    }
    m.rank()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologyResult {
    #[serde(skip)]
    pub generators: usize,
    pub betti: usize,
    /// Invariant factors greater than one.
    #[serde(serialize_with = "ser_factors")]
    pub torsion: Vec<BigInt>,
    /// Dimension of homology over GF(2), from the unsigned differential.
    pub f2_dim: usize,
    /// Dimension of homology over the rationals, from a separate rank computation.
    pub q_rank: usize,
}

impl HomologyResult {
    /// Universal-coefficient consistency of the three computations.
    pub fn is_coherent(&self) -> bool {
        let even = self.torsion.iter().filter(|t| t.is_even()).count();
        self.q_rank == self.betti && self.f2_dim == self.betti + 2 * even
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("Z^{}", self.betti);
        for t in &self.torsion {
            let _ = write!(s, " + Z/{t}");
        }
        let _ = write!(s, "  (generators {}, dim over F2 {}, rank over Q {})", self.generators, self.f2_dim, self.q_rank);
        s
    }
}

/// Homology of the signed complex of `d` under `src`.
pub fn homology(d: &GridDiagram, src: &dyn SignSource) -> Result<HomologyResult> {
    let m = differential(d, src)?;
    homology_of(d, &m)
}

/// Homology from a precomputed signed differential of `d`.
pub fn homology_of(d: &GridDiagram, m: &SparseIntMatrix) -> Result<HomologyResult> {
    if let Some((r, c, v)) = square_zero_witness(m) {
        return Err(Error::DifferentialNotSquareZero(format!("entry ({r}, {c}) of d^2 is {v}")));
    }
    let n = m.rows;
    let snf = smith_normal_form(m);
    let f2 = f2_rank(&differential_f2(d)?, n);
    let q = rational_rank(m);
    Ok(HomologyResult {
        generators: n,
        betti: n - 2 * snf.rank,
        torsion: snf.invariant_factors.into_iter().filter(|t| !t.is_one()).collect(),
        f2_dim: n - 2 * f2,
        q_rank: n - 2 * q,
    })
}

/// Dimension over GF(2) alone, with no signs involved.
pub fn f2_homology_dim(d: &GridDiagram) -> Result<usize> {
    let rows = differential_f2(d)?;
    let n = rows.len();
    Ok(n - 2 * f2_rank(&rows, n))
}
