//! Parity systems over GF(2).
//!
//! A sign `S = (-1)^s` turns every multiplicative relation into a linear
//! equation on the bits `s`. Variables are formal flows.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::formal::{FormalFlow, FormalGenerator};
use crate::sign::Sign;

/// Relation family that produced a row.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Degenerations,
    Disjoint,
    Grid,
    Flip,
    Basic,
}

impl Family {
    pub const ALL: [Family; 5] =
        [Family::Degenerations, Family::Disjoint, Family::Grid, Family::Flip, Family::Basic];

    pub fn name(self) -> &'static str {
        match self {
            Family::Degenerations => "degenerations",
            Family::Disjoint => "disjoint",
            Family::Grid => "grid",
            Family::Flip => "flip",
            Family::Basic => "basic",
        }
    }
}

impl std::str::FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown relation family {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gf2Row {
    /// Sorted variable indices, each appearing once.
    pub vars: Vec<u32>,
    pub rhs: bool,
    pub family: Family,
}

#[derive(Clone, Debug, Default)]
pub struct Gf2System {
    pub vars: Vec<FormalFlow>,
    index: HashMap<FormalFlow, u32>,
    pub rows: Vec<Gf2Row>,
    seen: HashSet<(Vec<u32>, bool)>,
    /// Relation instances offered, before deduplication.
    pub instance_count: usize,
}

impl Gf2System {
    pub fn new(vars: Vec<FormalFlow>) -> Self {
        let index = vars.iter().enumerate().map(|(k, f)| (f.clone(), k as u32)).collect();
        Gf2System { vars, index, ..Default::default() }
    }

    pub fn var(&self, f: &FormalFlow) -> Option<u32> {
        self.index.get(f).copied()
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    /// Adds `sum s(f) = rhs`; repeated flows cancel. Returns false for duplicates.
    pub fn push(&mut self, flows: &[FormalFlow], rhs: bool, family: Family) -> Result<bool> {
        let mut vars = Vec::with_capacity(flows.len());
        for f in flows {
            vars.push(self.var(f).ok_or_else(|| Error::ScopeMismatch(format!("{f} is not a variable")))?);
        }
        self.instance_count += 1;
        vars.sort_unstable();
        let mut reduced: Vec<u32> = Vec::with_capacity(vars.len());
        for v in vars {
            if reduced.last() == Some(&v) {
                reduced.pop();
            } else {
                reduced.push(v);
            }
        }
        if !self.seen.insert((reduced.clone(), rhs)) {
            return Ok(false);
        }
        self.rows.push(Gf2Row { vars: reduced, rhs, family });
        Ok(true)
    }

    /// Text export: a `vars m rows k` header, then `idx idx ... | rhs` per row.
    pub fn export_text(&self) -> String {
        let mut s = format!("vars {} rows {}\n", self.vars.len(), self.rows.len());
        for r in &self.rows {
            for v in &r.vars {
                write!(s, "{v} ").unwrap();
            }
            writeln!(s, "| {}", r.rhs as u8).unwrap();
        }
        s
    }

    /// True if `values` satisfies every row.
    pub fn is_satisfied_by(&self, values: &[bool]) -> bool {
        self.rows.iter().all(|r| r.vars.iter().fold(false, |a, &v| a ^ values[v as usize]) == r.rhs)
    }

    /// Breadth-first spanning tree of the generator graph, flows taken in
    /// variable order. Returns the tree's variable indices and the number of
    /// generators reached.
    pub fn spanning_tree(&self, order: Option<&[u32]>) -> (Vec<u32>, usize) {
        let mut out: HashMap<&FormalGenerator, Vec<u32>> = HashMap::new();
        let default: Vec<u32> = (0..self.vars.len() as u32).collect();
        let order = order.unwrap_or(&default);
        for &v in order {
            out.entry(self.vars[v as usize].start()).or_default().push(v);
        }
        let Some(root) = self.vars.iter().map(|f| f.start()).min() else {
            return (Vec::new(), 0);
        };
        let mut seen: HashSet<FormalGenerator> = HashSet::from([root.clone()]);
        let mut queue = VecDeque::from([root.clone()]);
        let mut tree = Vec::new();
        while let Some(x) = queue.pop_front() {
            for &v in out.get(&x).map(|v| v.as_slice()).unwrap_or(&[]) {
                let y = self.vars[v as usize].end_unchecked();
                if seen.insert(y.clone()) {
                    tree.push(v);
                    queue.push_back(y);
                }
            }
        }
        (tree, seen.len())
    }

    /// Solves with the tree flows fixed to `+1`.
    ///
    /// Gauge transformations act freely (up to a global sign) on solutions
    /// and can set tree flows arbitrarily, so the dimension of the full
    /// solution space is the tree size plus the remaining freedom.
    pub fn solve_gauge_fixed(&self, order: Option<&[u32]>) -> Result<GaugeFixedSolution> {
        let (tree, reached) = self.spanning_tree(order);
        let fixed: Vec<(u32, bool)> = tree.iter().map(|&v| (v, false)).collect();
        let (values, free) = solve_with_fixed(&self.rows, self.vars.len(), &fixed)?;
        Ok(GaugeFixedSolution { dimension: tree.len() + free, values, tree, generators: reached })
    }
}

#[derive(Clone, Debug)]
pub struct GaugeFixedSolution {
    pub values: Vec<bool>,
    pub dimension: usize,
    pub tree: Vec<u32>,
    pub generators: usize,
}

impl GaugeFixedSolution {
    pub fn sign(&self, v: u32) -> Sign {
        Sign::from_bit(self.values[v as usize])
    }
}

/// Solves `rows` with some variables preset. Returns one solution (free
/// variables set to 0) and the number of free variables.
///
/// Rows with a single unknown are propagated first; what remains goes
/// through dense elimination.
pub fn solve_with_fixed(rows: &[Gf2Row], nvars: usize, fixed: &[(u32, bool)]) -> Result<(Vec<bool>, usize)> {
    let mut value: Vec<Option<bool>> = vec![None; nvars];
    for &(v, b) in fixed {
        value[v as usize] = Some(b);
    }
    let mut by_var: Vec<Vec<u32>> = vec![Vec::new(); nvars];
    for (k, r) in rows.iter().enumerate() {
        for &v in &r.vars {
            by_var[v as usize].push(k as u32);
        }
    }
    let mut unknown: Vec<u32> = Vec::with_capacity(rows.len());
    let mut acc: Vec<bool> = Vec::with_capacity(rows.len());
    for r in rows {
        let mut u = 0;
        let mut a = r.rhs;
        for &v in &r.vars {
            match value[v as usize] {
                Some(b) => a ^= b,
                None => u += 1,
            }
        }
        unknown.push(u);
        acc.push(a);
    }
    let mut queue: VecDeque<u32> = (0..rows.len() as u32).filter(|&k| unknown[k as usize] <= 1).collect();
    while let Some(k) = queue.pop_front() {
        let k = k as usize;
        match unknown[k] {
            0 => {
                if acc[k] {
                    return Err(Error::InconsistentSystem(format!("row {k} ({})", rows[k].family.name())));
                }
            }
            1 => {
                let v = *rows[k].vars.iter().find(|&&v| value[v as usize].is_none()).unwrap();
                let b = acc[k];
                value[v as usize] = Some(b);
                for &k2 in &by_var[v as usize] {
                    let k2 = k2 as usize;
                    unknown[k2] -= 1;
                    acc[k2] ^= b;
                    if unknown[k2] <= 1 {
                        queue.push_back(k2 as u32);
                    }
                }
            }
            _ => {}
        }
    }

    // dense elimination on what propagation could not settle
    let residual_vars: Vec<u32> = (0..nvars as u32).filter(|&v| value[v as usize].is_none()).collect();
    let mut free = 0;
    if !residual_vars.is_empty() {
        let pos: HashMap<u32, usize> = residual_vars.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut m = BitMatrix::new(residual_vars.len());
        for (k, r) in rows.iter().enumerate() {
            if unknown[k] >= 2 {
                let cols: Vec<usize> =
                    r.vars.iter().filter_map(|v| pos.get(v).copied()).collect();
                m.push_row(&cols, acc[k]);
            }
        }
        let (sol, rank) = m.solve().ok_or_else(|| Error::InconsistentSystem("residual elimination".into()))?;
        free = residual_vars.len() - rank;
        for (i, &v) in residual_vars.iter().enumerate() {
            value[v as usize] = Some(sol[i]);
        }
    }
    Ok((value.into_iter().map(|b| b.unwrap_or(false)).collect(), free))
}

/// Dense GF(2) matrix with an augmented right-hand side column.
#[derive(Clone, Debug)]
pub struct BitMatrix {
    cols: usize,
    words: usize,
    rows: Vec<Vec<u64>>,
}

impl BitMatrix {
    pub fn new(cols: usize) -> Self {
        BitMatrix { cols, words: (cols + 1).div_ceil(64), rows: Vec::new() }
    }

    /// Adds a row; listing a column twice cancels it.
    pub fn push_row(&mut self, cols: &[usize], rhs: bool) {
        let mut row = vec![0u64; self.words];
        for &c in cols {
            row[c / 64] ^= 1 << (c % 64);
        }
        if rhs {
            row[self.cols / 64] |= 1 << (self.cols % 64);
        }
        self.rows.push(row);
    }

    fn bit(row: &[u64], c: usize) -> bool {
        row[c / 64] >> (c % 64) & 1 == 1
    }

    /// Reduced row echelon form in place; returns pivot columns.
    fn reduce(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            let Some(p) = (r..self.rows.len()).find(|&k| Self::bit(&self.rows[k], c)) else {
                continue;
            };
            self.rows.swap(r, p);
            let pivot = self.rows[r].clone();
            for k in 0..self.rows.len() {
                if k != r && Self::bit(&self.rows[k], c) {
                    for (a, b) in self.rows[k].iter_mut().zip(&pivot) {
                        *a ^= b;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    /// Rank of the coefficient part.
    pub fn rank(&self) -> usize {
        self.clone().reduce().len()
    }

    /// Rank including the right-hand side column.
    pub fn augmented_rank(&self) -> usize {
        let mut m = self.clone();
        m.cols += 1;
        m.reduce().len()
    }

    /// One solution (free variables 0) and the rank, or `None` if inconsistent.
    pub fn solve(mut self) -> Option<(Vec<bool>, usize)> {
        let pivots = self.reduce();
        let rank = pivots.len();
        if self.rows[rank..].iter().any(|r| Self::bit(r, self.cols)) {
            return None;
        }
        let mut x = vec![false; self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = Self::bit(&self.rows[r], self.cols);
        }
        Some((x, rank))
    }
}

/// Independent check: the solution-space dimension of `rows` computed by
/// plain dense elimination, or `None` if the system is inconsistent.
pub fn dense_dimension(rows: &[Gf2Row], nvars: usize) -> Option<usize> {
    let mut m = BitMatrix::new(nvars);
    for r in rows {
        let cols: Vec<usize> = r.vars.iter().map(|&v| v as usize).collect();
        m.push_row(&cols, r.rhs);
    }
    let rank = m.rank();
    (m.augmented_rank() == rank).then_some(nvars - rank)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(vars: &[u32], rhs: bool) -> Gf2Row {
        Gf2Row { vars: vars.to_vec(), rhs, family: Family::Degenerations }
    }

    #[test]
    fn small_consistent_system() {
        let rows = vec![row(&[0, 1], false), row(&[1, 2], true), row(&[0, 2], true)];
        assert_eq!(dense_dimension(&rows, 3), Some(1));
        let (x, free) = solve_with_fixed(&rows, 3, &[]).unwrap();
        assert_eq!(free, 1);
        assert_eq!(x[0] ^ x[1], false);
        assert_eq!(x[1] ^ x[2], true);
        let (x, free) = solve_with_fixed(&rows, 3, &[(0, true)]).unwrap();
        assert_eq!((x, free), (vec![true, true, false], 0));
    }

    #[test]
    fn inconsistent_system() {
        let rows = vec![row(&[0, 1], false), row(&[1, 2], false), row(&[0, 2], true)];
        assert_eq!(dense_dimension(&rows, 3), None);
        assert!(matches!(solve_with_fixed(&rows, 3, &[]), Err(Error::InconsistentSystem(_))));
    }

    #[test]
    fn bit_matrix_wide() {
        let mut m = BitMatrix::new(130);
        m.push_row(&[0, 129], true);
        m.push_row(&[129, 64], false);
        m.push_row(&[0, 64], true);
        assert_eq!(m.rank(), 2);
        assert_eq!(m.augmented_rank(), 2);
        let (x, rank) = m.solve().unwrap();
        assert_eq!(rank, 2);
        assert!(x[0] ^ x[129]);
    }
}
