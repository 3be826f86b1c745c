//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;
use std::time::Instant;

use hfsign_core::diagram::GridDiagram;
use hfsign_core::formal::{enumerate_all_flows, enumerate_flows, enumerate_generators};
use hfsign_core::gf2::Family;
use hfsign_core::homology::{self, HomologyResult};
use hfsign_core::signs::{
    self, bigon_sign, check_decompositions, find_gauge, m_twist, solve_global, solve_profile1, GaugeMap, Gauged,
    SignEvaluator, SignTable, VerifyMode,
};
use hfsign_core::{companion, perm, CurveFrame, DegenerationKind, FormalFlow, Limits, SignSource};
use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

const SEED: u64 = 0x5eed;
const RANDOM_GRIDS: usize = 20;
const FRAMES: usize = 5;
const SAMPLES: usize = 100_000;

struct Ctx {
    limits: Limits,
    profile1: HashMap<usize, Arc<SignTable>>,
    global: HashMap<usize, SignTable>,
}

impl Ctx {
    fn base(&mut self, n: usize) -> Arc<SignTable> {
        let limits = self.limits;
        let m = n.min(limits.profile1);
        self.profile1
            .entry(m)
            .or_insert_with(|| Arc::new(solve_profile1(m, &limits).expect("profile-1 solve").table))
            .clone()
    }

    fn evaluator(&mut self, n: usize) -> SignEvaluator {
        SignEvaluator::new(n, self.base(n)).expect("evaluator")
    }

    fn global(&mut self, n: usize) -> &SignTable {
        let limits = self.limits;
        self.global.entry(n).or_insert_with(|| solve_global(n, &limits).expect("global solve").table)
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e2s<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn c01_counts(_: &mut Ctx) -> Outcome {
    let limits = Limits::default();
    let mut seen = Vec::new();
    for n in 1..=5usize {
        let base = perm::factorial(n) << n;
        let gens = enumerate_generators(n, &limits).map_err(e2s)?.len();
        let (b, r) = enumerate_flows(n, &limits).map_err(e2s)?;
        ensure(gens == base, || format!("n={n}: {gens} generators, expected {base}"))?;
        ensure(b.len() == 2 * n * base, || format!("n={n}: {} bigons", b.len()))?;
        ensure(r.len() == 2 * n * (n - 1) * base, || format!("n={n}: {} rectangles", r.len()))?;
        seen.push(format!("{gens}/{}/{}", b.len(), r.len()));
    }
    ensure(seen[1] == "8/32/32", || format!("n=2 gave {}", seen[1]))?;
    Ok(format!("n=1..5 generators/bigons/rectangles {}", seen.join(" ")))
}

fn c02_existence(ctx: &mut Ctx) -> Outcome {
    let mut out = Vec::new();
    for n in 1..=3 {
        ctx.global(n);
        out.push(format!("global n={n} ok"));
    }
    for n in 2..=6 {
        ctx.base(n);
        out.push(format!("profile1 n={n} ok"));
    }
    Ok(out.join(", "))
}

fn c03_dimension(ctx: &mut Ctx) -> Outcome {
    let mut dims = Vec::new();
    for (n, want) in [(1, 1), (2, 7), (3, 47)] {
        let s = solve_global(n, &ctx.limits).map_err(e2s)?;
        let oracle = hfsign_core::gf2::dense_dimension(
            &hfsign_core::relations::enumerate_relation_rows(n, &Family::ALL, &ctx.limits).map_err(e2s)?.rows,
            s.variables,
        );
        ensure(s.dimension == want && oracle == Some(want), || {
            format!("n={n}: dimension {} (dense {:?}), expected {want}", s.dimension, oracle)
        })?;
        dims.push(s.dimension.to_string());
    }
    Ok(format!("dimensions {}", dims.join(", ")))
}

fn c04_n1_structure(ctx: &mut Ctx) -> Outcome {
    let (bigons, _) = enumerate_flows(1, &ctx.limits).map_err(e2s)?;
    ensure(bigons.len() == 4, || "n=1 should have 4 bigons".into())?;
    let s = |f: &FormalFlow| bigon_sign(f.as_bigon().unwrap()).map_err(e2s);
    for b in &bigons {
        let a = FormalFlow::Bigon(b.clone());
        let bb = companion(&a, DegenerationKind::Alpha).map_err(e2s)?;
        let c = companion(&a, DegenerationKind::Beta).map_err(e2s)?;
        let d = companion(&bb, DegenerationKind::Beta).map_err(e2s)?;
        let all: BTreeSet<String> = [&a, &bb, &c, &d].iter().map(|f| f.key()).collect();
        ensure(all.len() == 4, || format!("companions of {a} do not cover the four bigons"))?;
        let (sa, sb, sc, sd) = (s(&a)?, s(&bb)?, s(&c)?, s(&d)?);
        ensure(sa == sb && sa == -sc && sa == -sd, || format!("pattern fails from {a}"))?;
    }
    // the two assignments are related by u = epsilon
    let table = ctx.global(1).clone();
    let gens = enumerate_generators(1, &ctx.limits).map_err(e2s)?;
    let u = GaugeMap::from_fn(&gens, |x| x.eps(0));
    let flipped = signs::apply_gauge(&table, &u);
    for f in table.flows() {
        ensure(flipped.get(&f) == table.get(&f).map(|s| -s), || format!("gauge by epsilon keeps {f}"))?;
    }
    Ok("S(A)=S(B)=-S(C)=-S(D) for every choice of A; u=epsilon swaps the two assignments".into())
}

fn c05_axioms(ctx: &mut Ctx) -> Outcome {
    let mut out = Vec::new();
    for n in 1..=3 {
        let ev = ctx.evaluator(n);
        let rep = signs::verify(&ev, &Family::ALL, VerifyMode::Exhaustive, false, &ctx.limits).map_err(e2s)?;
        ensure(rep.passed(), || format!("n={n}: {} violations", rep.total_violations))?;
        out.push(format!("n={n} exhaustive {}", rep.checked()));
    }
    for n in [4, 5] {
        let ev = ctx.evaluator(n);
        let mode = VerifyMode::Sampled { count: SAMPLES, seed: SEED };
        let rep = signs::verify(&ev, &Family::ALL, mode, false, &ctx.limits).map_err(e2s)?;
        ensure(rep.passed() && rep.checked() >= SAMPLES, || {
            format!("n={n}: {} violations in {}", rep.total_violations, rep.checked())
        })?;
        out.push(format!("n={n} sampled {}", rep.checked()));
    }
    Ok(format!("0 violations: {}", out.join(", ")))
}

fn c06_cross_validation(ctx: &mut Ctx) -> Outcome {
    let mut out = Vec::new();
    for n in [2, 3] {
        let ev = ctx.evaluator(n);
        let table = ctx.global(n).clone();
        let flows = table.flows();
        find_gauge(&ev, &table, &flows).map_err(|e| format!("n={n}: {e}"))?;
        out.push(format!("n={n} ({} flows)", flows.len()));
    }
    Ok(format!("gauge found {}", out.join(", ")))
}

fn c07_conventional(ctx: &mut Ctx) -> Outcome {
    let mut out = Vec::new();
    for n in [4, 5] {
        let base = ctx.base(n);
        let rep = check_decompositions(base.as_ref()).map_err(e2s)?;
        ensure(rep.passed(), || format!("n={n}: {rep:?}"))?;
        out.push(format!("n={n} {} rectangles, {} points", rep.rectangles, rep.points));
    }
    Ok(out.join(", "))
}

fn c08_twist(ctx: &mut Ctx) -> Outcome {
    let mut out = Vec::new();
    for n in 1..=3 {
        let twisted = m_twist(ctx.global(n)).map_err(e2s)?;
        let swapped = signs::verify(&twisted, &Family::ALL, VerifyMode::Exhaustive, true, &ctx.limits).map_err(e2s)?;
        let standard =
            signs::verify(&twisted, &[Family::Degenerations], VerifyMode::Exhaustive, false, &ctx.limits).map_err(e2s)?;
        ensure(swapped.passed(), || format!("n={n}: {} swapped violations", swapped.total_violations))?;
        ensure(!standard.passed(), || format!("n={n}: twist passes the standard degenerations"))?;
        out.push(format!("n={n} {}", swapped.checked()));
    }
    Ok(format!("swapped suite passes: {}", out.join(", ")))
}

fn c09_restricted_gauge(ctx: &mut Ctx) -> Outcome {
    let mut checked = 0;
    for n in 1..=3 {
        let ev = ctx.evaluator(n);
        let bigons = enumerate_all_flows(n, &ctx.limits)
            .map_err(e2s)?
            .into_iter()
            .filter(|f| f.as_bigon().is_some())
            .collect::<Vec<_>>();
        let mut unrestricted_moved = false;
        for seed in 0..5 {
            let g = Gauged { inner: &ev, gauge: GaugeMap::Seeded { seed, restricted: true } };
            let h = Gauged { inner: &ev, gauge: GaugeMap::Seeded { seed, restricted: false } };
            for f in &bigons {
                let s = ev.sign(f).map_err(e2s)?;
                ensure(g.sign(f).map_err(e2s)? == s, || format!("restricted gauge changes {f}"))?;
                unrestricted_moved |= h.sign(f).map_err(e2s)? != s;
                checked += 1;
            }
        }
        ensure(unrestricted_moved, || format!("n={n}: control gauge changed nothing"))?;
    }
    Ok(format!("{checked} bigon signs unchanged under 5 restricted gauges per power"))
}

/// Base diagrams of the d^2 and homology criteria.
fn base_diagrams() -> Vec<(String, GridDiagram)> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut out = Vec::new();
    for n in 2..=6usize {
        let mut perms = perm::permutations(n);
        if perms.len() > RANDOM_GRIDS {
            perms.shuffle(&mut rng);
            perms.truncate(RANDOM_GRIDS);
            perms.sort();
        }
        for o in perms {
            out.push((format!("S3 n={n} O={o:?}"), GridDiagram::s3(o).unwrap()));
        }
    }
    out.push(("unknot".into(), GridDiagram::unknot()));
    out.push(("trefoil".into(), GridDiagram::trefoil()));
    out.push(("figure-eight".into(), GridDiagram::figure_eight()));
    out
}

fn c10_d_squared(ctx: &mut Ctx) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 10);
    let mut count = 0;
    for (name, d) in base_diagrams() {
        let mut frames = vec![CurveFrame::identity(d.n)];
        frames.extend((0..FRAMES).map(|_| CurveFrame::random(d.n, &mut rng)));
        for k in 0..=2 {
            for frame in &frames {
                let dd = d.stabilized(k).with_frame(frame.clone()).map_err(e2s)?;
                let ev = ctx.evaluator(dd.power());
                let m = homology::differential(&dd, &ev).map_err(e2s)?;
                if let Some((r, c, v)) = homology::square_zero_witness(&m) {
                    return Err(format!("{name} k={k} frame {frame:?}: d^2[{r},{c}] = {v}"));
                }
                count += 1;
            }
        }
    }
    Ok(format!("d^2 = 0 on {count} diagram variants (k = 0..2, identity + {FRAMES} random frames)"))
}

fn hom(ctx: &mut Ctx, d: &GridDiagram) -> Result<HomologyResult, String> {
    let ev = ctx.evaluator(d.power());
    homology::homology(d, &ev).map_err(e2s)
}

fn c11_s3(ctx: &mut Ctx) -> Outcome {
    let mut count = 0;
    for (name, d) in base_diagrams().into_iter().filter(|(_, d)| d.x.is_none()) {
        let h = hom(ctx, &d)?;
        let want = 1usize << (d.n - 1);
        let oracle = homology::f2_homology_dim(&d).map_err(e2s)?;
        ensure(h.betti == want && h.torsion.is_empty() && oracle == want && h.is_coherent(), || {
            format!("{name}: {} (oracle {oracle})", h.to_text())
        })?;
        count += 1;
    }
    Ok(format!("{count} S3 grids n=2..6 give Z^(2^(n-1)), torsion-free, equal to the GF(2) oracle"))
}

fn c12_links(ctx: &mut Ctx) -> Outcome {
    let u = hom(ctx, &GridDiagram::unknot())?;
    ensure(u.betti == 2 && u.torsion.is_empty(), || format!("unknot: {}", u.to_text()))?;
    let t = hom(ctx, &GridDiagram::trefoil())?;
    let oracle = homology::f2_homology_dim(&GridDiagram::trefoil()).map_err(e2s)?;
    ensure(t.betti == 48 && t.torsion.is_empty() && oracle == 48, || {
        format!("trefoil: {} (oracle {oracle})", t.to_text())
    })?;
    Ok(format!("unknot Z^{}, trefoil Z^{} (GF(2) oracle {oracle})", u.betti, t.betti))
}

fn torsion_counts(h: &HomologyResult) -> BTreeMap<BigInt, usize> {
    let mut m = BTreeMap::new();
    for t in &h.torsion {
        *m.entry(t.clone()).or_default() += 1;
    }
    m
}

fn c13_stabilization(ctx: &mut Ctx) -> Outcome {
    let mut count = 0;
    for (name, d) in base_diagrams() {
        let mut prev = hom(ctx, &d)?;
        for k in 1..=2 {
            let h = hom(ctx, &d.stabilized(k))?;
            let doubled: BTreeMap<BigInt, usize> = torsion_counts(&prev).into_iter().map(|(t, c)| (t, 2 * c)).collect();
            ensure(h.betti == 2 * prev.betti && torsion_counts(&h) == doubled, || {
                format!("{name} k={k}: {} after {}", h.to_text(), prev.to_text())
            })?;
            prev = h;
            count += 1;
        }
    }
    Ok(format!("betti and torsion multiplicities double in {count} stabilizations"))
}

fn c14_independence(ctx: &mut Ctx) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 14);
    let mut count = 0;
    for (name, d) in base_diagrams() {
        let ev = ctx.evaluator(d.power());
        let reference = homology::homology(&d, &ev).map_err(e2s)?;
        let mut check = |h: HomologyResult, what: String| {
            count += 1;
            ensure(h == reference, || format!("{name} {what}: {} vs {}", h.to_text(), reference.to_text()))
        };
        for seed in 0..FRAMES as u64 {
            let g = Gauged { inner: &ev, gauge: GaugeMap::Seeded { seed: seed ^ SEED, restricted: false } };
            check(homology::homology(&d, &g).map_err(e2s)?, format!("gauge {seed}"))?;
        }
        for t in 0..FRAMES {
            let mut f = CurveFrame::identity(d.n);
            f.alpha_order.shuffle(&mut rng);
            f.beta_order.shuffle(&mut rng);
            check(homology::homology(&d.with_frame(f).map_err(e2s)?, &ev).map_err(e2s)?, format!("order {t}"))?;
        }
        for t in 0..FRAMES {
            let mut f = CurveFrame::identity(d.n);
            let random = CurveFrame::random(d.n, &mut rng);
            f.alpha_orient = random.alpha_orient;
            f.beta_orient = random.beta_orient;
            check(homology::homology(&d.with_frame(f).map_err(e2s)?, &ev).map_err(e2s)?, format!("orientation {t}"))?;
        }
    }
    Ok(format!("{count} gauge/order/orientation variants agree with the reference homology"))
}

fn c15_calibration(ctx: &mut Ctx) -> Outcome {
    let rep = hfsign_core::calibrate::calibrate(&[2, 3], FRAMES, SEED, &ctx.limits).map_err(e2s)?;
    ensure(rep.passed(), || rep.to_text())?;
    Ok(format!("{} calibration checks pass at n=2,3", rep.checks.len()))
}

fn main() {
    let criteria: [(&str, fn(&mut Ctx) -> Outcome); 15] = [
        ("counts of generators, bigons and rectangles", c01_counts),
        ("existence of solutions", c02_existence),
        ("solution-space dimension n!2^n - 1", c03_dimension),
        ("n=1 bigon sign pattern", c04_n1_structure),
        ("evaluator satisfies all relations", c05_axioms),
        ("evaluator gauge-equivalent to the global solution", c06_cross_validation),
        ("conventional decomposition identity", c07_conventional),
        ("m-twist satisfies the swapped axioms", c08_twist),
        ("restricted gauges fix bigon signs", c09_restricted_gauge),
        ("d^2 = 0 over the integers", c10_d_squared),
        ("S3 grid homology", c11_s3),
        ("unknot and trefoil homology", c12_links),
        ("stabilization doubles homology", c13_stabilization),
        ("homology independent of gauge, order, orientation", c14_independence),
        ("convention calibration", c15_calibration),
    ];
    let mut ctx = Ctx { limits: Limits::default(), profile1: HashMap::new(), global: HashMap::new() };
    let mut failed = 0;
    for (k, (title, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let res = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| f(&mut ctx)))
            .unwrap_or_else(|_| Err("panicked".into()));
        let secs = t.elapsed().as_secs_f64();
        match res {
            Ok(detail) => println!("PASS criterion {:2} {title}: {detail} [{secs:.1}s]", k + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {:2} {title}: {detail} [{secs:.1}s]", k + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
