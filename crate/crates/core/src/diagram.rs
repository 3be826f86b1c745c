//! Toroidal grid diagrams with O (and optionally X) markings and abstract
//! type-b stabilizations.
//!
//! A stabilization unit has two states `u` and `d` and contributes two
//! parallel bigons from `u` to `d`. It sits at formal coordinate `n + unit`,
//! with crossing sign `+1` in state `u` and `-1` in state `d`.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formal::{FormalBigon, FormalFlow, FormalGenerator};
use crate::perm;
use crate::sign::Sign;
use crate::torus::{self, CurveFrame, TorusRect};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridDiagram {
    pub n: usize,
    /// Column of the O marking in each row (0-based).
    pub o: Vec<u8>,
    pub x: Option<Vec<u8>>,
    pub frame: CurveFrame,
    pub b_stab: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DiagramRepr {
    #[serde(rename = "type")]
    kind: String,
    n: usize,
    #[serde(rename = "O")]
    o: Vec<usize>,
    #[serde(rename = "X", default, skip_serializing_if = "Option::is_none")]
    x: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    alpha_orient: Option<Vec<Sign>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    beta_orient: Option<Vec<Sign>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    alpha_order: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    beta_order: Option<Vec<usize>>,
    #[serde(default)]
    b_stab: usize,
}

fn to_zero_based(v: &[usize], what: &str) -> Result<Vec<u8>> {
    v.iter()
        .map(|&k| {
            if k == 0 || k > 255 {
                Err(Error::BadDiagram(format!("{what}: entries are 1-based, got {k}")))
            } else {
                Ok((k - 1) as u8)
            }
        })
        .collect()
}

fn to_one_based(v: &[u8]) -> Vec<usize> {
    v.iter().map(|&k| k as usize + 1).collect()
}

/// Outcome of [`validate_diagram`]: `None` if valid, else the first problem.
pub fn validate_diagram(d: &GridDiagram) -> Option<String> {
    let n = d.n;
    if n == 0 {
        return Some("grid size must be positive".into());
    }
    if d.o.len() != n || !perm::is_permutation(&d.o) {
        return Some("O must have exactly one marking per row and column".into());
    }
    if let Some(x) = &d.x {
        if x.len() != n || !perm::is_permutation(x) {
            return Some("X must have exactly one marking per row and column".into());
        }
        if let Some(k) = (0..n).find(|&k| x[k] == d.o[k]) {
            return Some(format!("O and X share the cell in row {}", k + 1));
        }
    }
    let f = &d.frame;
    if f.alpha_order.len() != n || !perm::is_permutation(&f.alpha_order) {
        return Some("alpha_order must be a permutation".into());
    }
    if f.beta_order.len() != n || !perm::is_permutation(&f.beta_order) {
        return Some("beta_order must be a permutation".into());
    }
    if f.alpha_orient.len() != n || f.beta_orient.len() != n {
        return Some("orientation vectors must have length n".into());
    }
    None
}

impl GridDiagram {
    /// Diagram with only O markings, identity frame and no stabilizations.
    pub fn s3(o: Vec<u8>) -> Result<Self> {
        GridDiagram { n: o.len(), frame: CurveFrame::identity(o.len()), o, x: None, b_stab: 0 }.validated()
    }

    pub fn knot(o: Vec<u8>, x: Vec<u8>) -> Result<Self> {
        GridDiagram { n: o.len(), frame: CurveFrame::identity(o.len()), o, x: Some(x), b_stab: 0 }.validated()
    }

    /// The 2×2 unknot grid.
    pub fn unknot() -> Self {
        GridDiagram::knot(vec![0, 1], vec![1, 0]).expect("valid grid")
    }

    /// A 5×5 trefoil grid: O on the diagonal, X two columns to the right.
    pub fn trefoil() -> Self {
        GridDiagram::knot(vec![0, 1, 2, 3, 4], vec![2, 3, 4, 0, 1]).expect("valid grid")
    }

    /// A 6×6 figure-eight grid.
    pub fn figure_eight() -> Self {
        GridDiagram::knot(vec![0, 1, 3, 2, 5, 4], vec![2, 5, 0, 4, 3, 1]).expect("valid grid")
    }

    /// `k` further stabilization units.
    pub fn stabilized(&self, k: usize) -> Self {
        GridDiagram { b_stab: self.b_stab + k, ..self.clone() }
    }

    pub fn validated(self) -> Result<Self> {
        match validate_diagram(&self) {
            None => Ok(self),
            Some(msg) => Err(Error::BadDiagram(msg)),
        }
    }

    pub fn with_frame(&self, frame: CurveFrame) -> Result<Self> {
        GridDiagram { frame, ..self.clone() }.validated()
    }

    /// Power of the formal objects: `n + b_stab`.
    pub fn power(&self) -> usize {
        self.n + self.b_stab
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let r: DiagramRepr = serde_json::from_value(v.clone()).map_err(|e| Error::BadDiagram(e.to_string()))?;
        if r.kind != "grid" {
            return Err(Error::BadDiagram(format!("unsupported diagram type {:?}", r.kind)));
        }
        let n = r.n;
        let id = || (0..n as u8).collect::<Vec<u8>>();
        let frame = CurveFrame {
            alpha_order: match &r.alpha_order {
                Some(v) => to_zero_based(v, "alpha_order")?,
                None => id(),
            },
            beta_order: match &r.beta_order {
                Some(v) => to_zero_based(v, "beta_order")?,
                None => id(),
            },
            alpha_orient: r.alpha_orient.unwrap_or_else(|| vec![Sign::Plus; n]),
            beta_orient: r.beta_orient.unwrap_or_else(|| vec![Sign::Plus; n]),
        };
        GridDiagram {
            n,
            o: to_zero_based(&r.o, "O")?,
            x: r.x.as_deref().map(|x| to_zero_based(x, "X")).transpose()?,
            frame,
            b_stab: r.b_stab,
        }
        .validated()
    }

    pub fn parse(text: &str) -> Result<Self> {
        let v: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::BadDiagram(e.to_string()))?;
        GridDiagram::from_json(&v)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let frame_default = self.frame.is_identity();
        let repr = DiagramRepr {
            kind: "grid".into(),
            n: self.n,
            o: to_one_based(&self.o),
            x: self.x.as_deref().map(to_one_based),
            alpha_orient: (!frame_default).then(|| self.frame.alpha_orient.clone()),
            beta_orient: (!frame_default).then(|| self.frame.beta_orient.clone()),
            alpha_order: (!frame_default).then(|| to_one_based(&self.frame.alpha_order)),
            beta_order: (!frame_default).then(|| to_one_based(&self.frame.beta_order)),
            b_stab: self.b_stab,
        };
        serde_json::to_value(repr).expect("diagram serializes")
    }

    /// Number of link components (needs X markings).
    pub fn components(&self) -> Option<usize> {
        let x = self.x.as_ref()?;
        let mut col_o = vec![0usize; self.n];
        for (r, &c) in self.o.iter().enumerate() {
            col_o[c as usize] = r;
        }
        // row r: O at o[r], X at x[r]; column x[r] leads to the row holding its O
        let mut seen = vec![false; self.n];
        let mut comps = 0;
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            comps += 1;
            let mut r = s;
            while !seen[r] {
                seen[r] = true;
                r = col_o[x[r] as usize];
            }
        }
        Some(comps)
    }

    fn blocked(&self) -> Vec<bool> {
        let n = self.n;
        let mut b = vec![false; n * n];
        for r in 0..n {
            b[r * n + self.o[r] as usize] = true;
            if let Some(x) = &self.x {
                b[r * n + x[r] as usize] = true;
            }
        }
        b
    }

    /// True if the rectangle avoids every marking and has no start point inside.
    pub fn is_empty_rect(&self, base: &[u8], r: TorusRect) -> bool {
        let blocked = self.blocked();
        self.empty_with(&blocked, base, r)
    }

    fn empty_with(&self, blocked: &[bool], base: &[u8], r: TorusRect) -> bool {
        r.cells(base).all(|(c, row)| !blocked[row * self.n + c]) && r.complexity(base) == 0
    }
}

pub fn b_stabilize(d: &GridDiagram) -> GridDiagram {
    GridDiagram { b_stab: d.b_stab + 1, ..d.clone() }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum StabState {
    U,
    D,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DiagramGenerator {
    pub base: Vec<u8>,
    pub stab: Vec<StabState>,
}

impl DiagramGenerator {
    fn tail(&self) -> Vec<Sign> {
        self.stab.iter().map(|s| if *s == StabState::U { Sign::Plus } else { Sign::Minus }).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DiagramFlow {
    Rect(TorusRect),
    /// Bigon `variant` (0 or 1) of a stabilization unit.
    StabBigon { unit: usize, variant: u8 },
}

/// All `n! * 2^k` generators: permutations in lexicographic order, then unit states.
pub fn generators(d: &GridDiagram) -> Result<Vec<DiagramGenerator>> {
    if let Some(msg) = validate_diagram(d) {
        return Err(Error::BadDiagram(msg));
    }
    let k = d.b_stab;
    let mut out = Vec::with_capacity(perm::factorial(d.n) << k);
    for base in perm::permutations(d.n) {
        for m in 0..(1usize << k) {
            let stab = (0..k)
                .map(|u| if m >> (k - 1 - u) & 1 == 0 { StabState::U } else { StabState::D })
                .collect();
            out.push(DiagramGenerator { base: base.clone(), stab });
        }
    }
    Ok(out)
}

/// Empty rectangles and stabilization bigons out of `x`, with their end generators.
pub fn flows_from(d: &GridDiagram, x: &DiagramGenerator) -> Result<Vec<(DiagramFlow, DiagramGenerator)>> {
    if x.base.len() != d.n || x.stab.len() != d.b_stab || !perm::is_permutation(&x.base) {
        return Err(Error::BadDiagram("generator does not belong to the diagram".into()));
    }
    let blocked = d.blocked();
    let mut out = Vec::new();
    for r in torus::rects_from(&x.base) {
        if d.empty_with(&blocked, &x.base, r) {
            out.push((DiagramFlow::Rect(r), DiagramGenerator { base: r.end(&x.base), stab: x.stab.clone() }));
        }
    }
    for (unit, s) in x.stab.iter().enumerate() {
        if *s == StabState::U {
            let mut stab = x.stab.clone();
            stab[unit] = StabState::D;
            for variant in 0..2 {
                out.push((
                    DiagramFlow::StabBigon { unit, variant },
                    DiagramGenerator { base: x.base.clone(), stab: stab.clone() },
                ));
            }
        }
    }
    Ok(out)
}

pub fn formal_generator(d: &GridDiagram, x: &DiagramGenerator) -> FormalGenerator {
    d.frame.generator(&x.base, &x.tail())
}

/// The formal flow of a diagram flow starting at `x`.
pub fn to_formal(d: &GridDiagram, flow: &DiagramFlow, x: &DiagramGenerator) -> Result<FormalFlow> {
    let bad = || Error::FlowNotInDiagram(format!("{flow:?} from {x:?}"));
    if x.base.len() != d.n || x.stab.len() != d.b_stab {
        return Err(bad());
    }
    match *flow {
        DiagramFlow::Rect(r) => {
            if r.bottom >= d.n || r.top >= d.n || r.bottom == r.top || !d.is_empty_rect(&x.base, r) {
                return Err(bad());
            }
            Ok(FormalFlow::Rect(d.frame.rectangle(&x.base, r, &x.tail())))
        }
        DiagramFlow::StabBigon { unit, variant } => {
            if unit >= d.b_stab || x.stab[unit] != StabState::U || variant > 1 {
                return Err(bad());
            }
            let o = if variant == 0 { Sign::Plus } else { Sign::Minus };
            Ok(FormalFlow::Bigon(FormalBigon {
                start: formal_generator(d, x),
                coord: d.n + unit,
                o_alpha: o,
                o_beta: o,
            }))
        }
    }
}

/// Generators with their basis index.
pub fn generator_index(gens: &[DiagramGenerator]) -> HashMap<DiagramGenerator, usize> {
    gens.iter().enumerate().map(|(k, g)| (g.clone(), k)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signs::bigon_sign;

    #[test]
    fn validation() {
        assert!(GridDiagram::s3(vec![0, 1]).is_ok());
        assert!(matches!(GridDiagram::s3(vec![0, 0]), Err(Error::BadDiagram(_))));
        assert!(GridDiagram::knot(vec![0, 1], vec![0, 1]).is_err());
        assert!(GridDiagram::knot(vec![0, 1], vec![1, 0]).is_ok());
    }

    #[test]
    fn json_schema() {
        let d = GridDiagram::parse(r#"{"type":"grid","n":2,"O":[1,2]}"#).unwrap();
        assert_eq!(d.o, vec![0, 1]);
        assert!(GridDiagram::parse(r#"{"type":"grid","n":2,"O":[1,2],"bogus":1}"#).is_err());
        assert!(GridDiagram::parse(r#"{"type":"torus","n":2,"O":[1,2]}"#).is_err());
        let e = GridDiagram::parse(
            r#"{"type":"grid","n":2,"O":[1,2],"X":[2,1],"alpha_orient":[1,-1],"beta_orient":[1,1],
                "alpha_order":[2,1],"beta_order":[1,2],"b_stab":1}"#,
        )
        .unwrap();
        assert_eq!(GridDiagram::from_json(&e.to_json()).unwrap(), e);
    }

    #[test]
    fn generator_counts() {
        let d = GridDiagram::s3(vec![0, 1, 2]).unwrap();
        assert_eq!(generators(&d).unwrap().len(), 6);
        assert_eq!(generators(&b_stabilize(&d)).unwrap().len(), 12);
        assert_eq!(generators(&GridDiagram::s3(vec![0, 1, 2, 3, 4]).unwrap()).unwrap().len(), 120);
    }

    #[test]
    fn n2_diagonal_flows() {
        let d = GridDiagram::s3(vec![0, 1]).unwrap();
        let gens = generators(&d).unwrap();
        assert_eq!(flows_from(&d, &gens[0]).unwrap().len(), 0);
        let anti = flows_from(&d, &gens[1]).unwrap();
        assert_eq!(anti.len(), 2);
        assert!(anti.iter().all(|(_, y)| *y == gens[0]));
    }

    #[test]
    fn n1_has_no_flows() {
        let d = GridDiagram::s3(vec![0]).unwrap();
        let gens = generators(&d).unwrap();
        assert_eq!(gens.len(), 1);
        assert!(flows_from(&d, &gens[0]).unwrap().is_empty());
    }

    #[test]
    fn stab_bigons_have_opposite_signs() {
        let d = b_stabilize(&GridDiagram::s3(vec![0, 1, 2]).unwrap());
        for x in generators(&d).unwrap() {
            let bigons: Vec<FormalFlow> = flows_from(&d, &x)
                .unwrap()
                .into_iter()
                .filter(|(f, _)| matches!(f, DiagramFlow::StabBigon { .. }))
                .map(|(f, _)| to_formal(&d, &f, &x).unwrap())
                .collect();
            if x.stab[0] == StabState::U {
                assert_eq!(bigons.len(), 2);
                let s: Vec<Sign> = bigons.iter().map(|b| bigon_sign(b.as_bigon().unwrap()).unwrap()).collect();
                assert_eq!(s[0], -s[1]);
            } else {
                assert!(bigons.is_empty());
            }
        }
    }

    #[test]
    fn formal_images_are_coherent() {
        let d = GridDiagram::knot(vec![0, 1, 2, 3], vec![2, 3, 0, 1]).unwrap();
        let frame = CurveFrame {
            alpha_order: vec![2, 0, 3, 1],
            beta_order: vec![1, 3, 0, 2],
            alpha_orient: vec![Sign::Plus, Sign::Minus, Sign::Plus, Sign::Minus],
            beta_orient: vec![Sign::Minus, Sign::Plus, Sign::Plus, Sign::Plus],
        };
        let d = b_stabilize(&d.with_frame(frame).unwrap());
        for x in generators(&d).unwrap() {
            for (f, y) in flows_from(&d, &x).unwrap() {
                let ff = to_formal(&d, &f, &x).unwrap();
                assert!(ff.is_valid());
                assert_eq!(ff.power(), 5);
                assert_eq!(ff.start(), &formal_generator(&d, &x));
                assert_eq!(ff.end().unwrap(), formal_generator(&d, &y));
                if let DiagramFlow::Rect(r) = f {
                    assert!(r.cells(&x.base).all(|(c, row)| d.o[row] as usize != c));
                    assert_eq!(r.complexity(&x.base), 0);
                }
            }
        }
    }

    #[test]
    fn default_frame_images_are_profile_one() {
        let d = GridDiagram::s3(vec![2, 0, 3, 1]).unwrap();
        for x in generators(&d).unwrap() {
            for (f, _) in flows_from(&d, &x).unwrap() {
                assert!(to_formal(&d, &f, &x).unwrap().start().is_profile_one());
            }
        }
    }

    #[test]
    fn component_count() {
        assert_eq!(GridDiagram::knot(vec![0, 1], vec![1, 0]).unwrap().components(), Some(1));
        assert_eq!(GridDiagram::trefoil().components(), Some(1));
        assert_eq!(GridDiagram::figure_eight().components(), Some(1));
        assert_eq!(GridDiagram::knot(vec![0, 1, 2, 3], vec![1, 0, 3, 2]).unwrap().components(), Some(2));
    }
}
