//! Checks that pin the conventions left open by the construction: which
//! degeneration is the α one, the bigons chosen in flip and basic relations,
//! and the stabilization bigons.
//!
//! Every relation row must hold for the sign assignment solved over all flows,
//! grid squares must hold under arbitrary curve frames, and stabilization
//! bigons must cancel and double the homology.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::diagram::{self, b_stabilize, DiagramFlow, GridDiagram};
use crate::error::Result;
use crate::gf2::Family;
use crate::homology;
use crate::relations;
use crate::signs::{self, bigon_sign, SignSource, SignTable, VerifyMode};
use crate::torus::CurveFrame;
use crate::{perm, Limits};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CalibrationCheck {
    pub name: String,
    pub n: usize,
    pub checked: usize,
    pub failures: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CalibrationReport {
    pub checks: Vec<CalibrationCheck>,
}

impl CalibrationReport {
    pub fn passed(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.failures == 0)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            let status = if c.failures == 0 { "ok" } else { "FAILED" };
            s += &format!("{status:6} n={} {:34} checked {:7} failures {}\n", c.n, c.name, c.checked, c.failures);
        }
        s
    }
}

fn check(name: &str, n: usize, checked: usize, failures: usize) -> CalibrationCheck {
    CalibrationCheck { name: name.into(), n, checked, failures }
}

/// Runs the suite against the solutions over all flows for every `n` in `powers`.
pub fn calibrate(powers: &[usize], frames: usize, seed: u64, limits: &Limits) -> Result<CalibrationReport> {
    let mut checks = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for &n in powers {
        let table = signs::solve_global(n, limits)?.table;
        for fam in Family::ALL {
            let rep = signs::verify(&table, &[fam], VerifyMode::Exhaustive, false, limits)?;
            let label = match fam {
                Family::Degenerations => "companion labeling (degenerations)",
                Family::Basic => "basic-relation bigon table",
                Family::Flip => "flip-square bigons",
                _ => fam.name(),
            };
            checks.push(check(label, n, rep.checked(), rep.total_violations));
        }
        // The opposite labeling must fail, or the degeneration check pins nothing.
        let swapped = signs::verify(&table, &[Family::Degenerations], VerifyMode::Exhaustive, true, limits)?;
        let all_fail = swapped.total_violations == swapped.checked();
        checks.push(check("swapped labeling rejected", n, swapped.checked(), usize::from(!all_fail)));

        let (mut checked, mut failures) = (0, 0);
        for _ in 0..frames {
            let frame = CurveFrame::random(n, &mut rng);
            for sigma in perm::permutations(n) {
                for inst in relations::oriented_grid_composites(&sigma, &frame)? {
                    checked += 1;
                    let mut p = crate::Sign::Plus;
                    for f in &inst.flows {
                        p *= table.sign(f)?;
                    }
                    if p != inst.expected_product(false) {
                        failures += 1;
                    }
                }
            }
        }
        checks.push(check("grid squares under random frames", n, checked, failures));

        if n >= 2 {
            checks.push(stabilization_check(n - 1, &table)?);
        }
    }
    // families with no instances at a small power say nothing
    checks.retain(|c| c.checked > 0);
    Ok(CalibrationReport { checks })
}

/// Stabilization bigons cancel, and stabilizing every S³ grid of size `m`
/// doubles its homology, with signs read from a power `m + 1` table.
fn stabilization_check(m: usize, table: &SignTable) -> Result<CalibrationCheck> {
    let (mut checked, mut failures) = (0, 0);
    for o in perm::permutations(m) {
        let d = GridDiagram::s3(o)?;
        let s = b_stabilize(&d);
        for x in diagram::generators(&s)? {
            let bigons: Vec<_> = diagram::flows_from(&s, &x)?
                .into_iter()
                .filter(|(f, _)| matches!(f, DiagramFlow::StabBigon { .. }))
                .map(|(f, _)| diagram::to_formal(&s, &f, &x))
                .collect::<Result<_>>()?;
            if bigons.len() == 2 {
                checked += 1;
                let a = table.sign(&bigons[0])?;
                let b = table.sign(&bigons[1])?;
                let fa = bigon_sign(bigons[0].as_bigon().unwrap())?;
                let fb = bigon_sign(bigons[1].as_bigon().unwrap())?;
                if a != -b || fa != -fb {
                    failures += 1;
                }
            }
        }
        let base = homology::f2_homology_dim(&d)?;
        let stab = homology::homology(&s, table)?;
        checked += 1;
        if stab.betti != 2 * base || !stab.torsion.is_empty() {
            failures += 1;
        }
    }
    Ok(check("stabilization bigons", m + 1, checked, failures))
}
