use std::sync::Arc;

use hfsign_core::diagram::GridDiagram;
use hfsign_core::homology::{self, d_squared_witness, differential};
use hfsign_core::signs::{solve_profile1, SignEvaluator};
use hfsign_core::{perm, CurveFrame, Error, FormalFlow, Limits, Sign};

fn evaluator(n: usize) -> SignEvaluator {
    SignEvaluator::build(n, &Limits::default()).unwrap()
}

#[test]
fn n2_diagonal_differential_vanishes() {
    let d = GridDiagram::s3(vec![0, 1]).unwrap();
    assert_eq!(differential(&d, &evaluator(2)).unwrap().nnz(), 0);
}

#[test]
fn n1_grid() {
    let d = GridDiagram::s3(vec![0]).unwrap();
    let m = differential(&d, &evaluator(1)).unwrap();
    assert_eq!((m.rows, m.nnz()), (1, 0));
    let h = homology::homology(&d, &evaluator(1)).unwrap();
    assert_eq!((h.betti, h.torsion.len()), (1, 0));
}

#[test]
fn stabilized_n2_grid() {
    let d = GridDiagram::s3(vec![0, 1]).unwrap().stabilized(1);
    let h = homology::homology(&d, &evaluator(3)).unwrap();
    assert_eq!((h.betti, h.torsion.len()), (4, 0));
}

#[test]
fn stab_bigon_pairs_cancel() {
    // the only entries between u and d copies come from the two bigons, which cancel
    let d = GridDiagram::s3(vec![1, 0]).unwrap().stabilized(1);
    let m = differential(&d, &evaluator(3)).unwrap();
    for (r, c, _) in m.entries() {
        assert_eq!(r % 2, c % 2, "entry ({r}, {c}) links the two copies");
    }
}

#[test]
fn power_mismatch() {
    let d = GridDiagram::s3(vec![0, 1, 2]).unwrap();
    assert!(matches!(differential(&d, &evaluator(4)), Err(Error::PowerMismatch { .. })));
}

#[test]
fn perturbed_table_breaks_d_squared() {
    let limits = Limits::default();
    let table = solve_profile1(4, &limits).unwrap().table;
    let mut broken = 0;
    for f in table.flows().into_iter().step_by(37) {
        let bad = SignEvaluator::new(4, Arc::new(table.perturbed(&f))).unwrap();
        let witness = perm::permutations(4).into_iter().find_map(|o| {
            let d = GridDiagram::s3(o).unwrap();
            d_squared_witness(&d, &bad).unwrap()
        });
        if let Some(w) = witness {
            broken += 1;
            assert!(!w.paths.is_empty());
            for (a, _, b, _) in &w.paths {
                FormalFlow::parse_key(a).unwrap();
                FormalFlow::parse_key(b).unwrap();
            }
        }
    }
    assert!(broken > 0);
}

#[test]
fn figure_eight_homology() {
    let ev = evaluator(6);
    let h = homology::homology(&GridDiagram::figure_eight(), &ev).unwrap();
    assert_eq!(h.betti, 160);
    assert!(h.torsion.is_empty() && h.is_coherent());
}

#[test]
fn reversing_a_curve_changes_signs_not_homology() {
    let d = GridDiagram::trefoil();
    let ev = evaluator(5);
    let mut f = CurveFrame::identity(5);
    f.alpha_orient[2] = Sign::Minus;
    let e = d.with_frame(f).unwrap();
    let (a, b) = (differential(&d, &ev).unwrap(), differential(&e, &ev).unwrap());
    assert_ne!(a, b);
    assert_eq!(homology::homology(&d, &ev).unwrap(), homology::homology(&e, &ev).unwrap());
}

#[test]
fn homology_json_shape() {
    let h = homology::homology(&GridDiagram::unknot(), &evaluator(2)).unwrap();
    let v = serde_json::to_value(&h).unwrap();
    assert_eq!(v, serde_json::json!({"betti": 2, "torsion": [], "f2_dim": 2, "q_rank": 2}));
}
