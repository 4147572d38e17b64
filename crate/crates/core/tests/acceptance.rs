//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
//! failure. Run with `cargo test -p cusp-cm --test acceptance`.
//!
//! Set `BLESS_GOLDEN=1` to rewrite the DOT fixtures under `tests/golden/`.

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use cusp_cm::cusp::labels_up_to_rank;
use cusp_cm::sequences::enumerate_nonneg_bounded;
use cusp_cm::tpq::iso_class;
use cusp_cm::{
    apply_sigma, ar_sequence, cohom_dims, cusp_quiver, delta, descend, dims_from_rank,
    enumerate_canonical, enumerate_rank, export_dot, family_counts, geometry_of,
    is_sigma_symmetric, module_rank, rank_of_h, sigma_of_module, theta, tpq_iso, tpq_special_tube,
    validate_cusp, BundleTriple, CmKind, CmModuleLabel, CuspGeometry, LambdaBase, SSeq, Scalar,
};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Outcome = Result<String, String>;

fn q(n: i64, d: i64) -> Scalar {
    Scalar::new(n, d).unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Shared pass over the grid of criteria 1, 2 and 4.
struct GridTally {
    cases: usize,
    formula_vs_oracle: Vec<String>,
    euler: Vec<String>,
    key_identity: Vec<String>,
}

fn run_grid() -> GridTally {
    let lambdas = [q(1, 1), q(-1, 1), q(2, 1), q(-2, 1), q(1, 2)];
    let mut t = GridTally {
        cases: 0,
        formula_vs_oracle: Vec::new(),
        euler: Vec::new(),
        key_identity: Vec::new(),
    };
    for s in 1..=3usize {
        for seq in enumerate_canonical(s, 6 / s, -3, 3).unwrap() {
            for m in 1..=3u32 {
                for &l in &lambdas {
                    let triple = BundleTriple::new(seq.clone(), m, l).unwrap();
                    let rk = rank_of_h(&triple);
                    let formula = cohom_dims(&triple);
                    let oracle = dims_from_rank(&triple, rk);
                    t.cases += 1;
                    if (formula.h0, formula.h1) != (oracle.h0, oracle.h1) {
                        t.formula_vs_oracle
                            .push(format!("{triple}: {formula:?} vs {oracle:?}"));
                    }
                    let chi = m as i64 * seq.sum();
                    for (path, r) in [("formula", &formula), ("oracle", &oracle)] {
                        if r.h0 as i64 - r.h1 as i64 != chi {
                            t.euler.push(format!("{path} {triple}: h0-h1 != {chi}"));
                        }
                    }
                    let expected = m as u64 * theta(&seq) - delta(&seq, l) as u64;
                    if rk != expected {
                        t.key_identity
                            .push(format!("{triple}: rk h = {rk}, mθ-δ = {expected}"));
                    }
                }
            }
        }
    }
    t
}

fn summarize(failures: &[String], cases: usize) -> Outcome {
    match failures.first() {
        None => Ok(format!("{cases} cases")),
        Some(first) => Err(format!(
            "{} failures of {cases}; first: {first}",
            failures.len()
        )),
    }
}

fn criterion_3() -> Outcome {
    for s in 1..=4 {
        let t = BundleTriple::new(SSeq::zero(s).unwrap(), 1, Scalar::one()).unwrap();
        let f = cohom_dims(&t);
        let o = dims_from_rank(&t, rank_of_h(&t));
        ensure((f.h0, f.h1, o.h0, o.h1) == (1, 1, 1, 1), || {
            format!("s={s}: formula {f:?}, oracle {o:?}")
        })?;
    }
    Ok("s = 1..4".into())
}

fn criterion_5() -> Outcome {
    let lambdas = [q(1, 1), q(-1, 1), q(2, 1)];
    let mut checked = 0;
    for b in [vec![1], vec![2], vec![1, 0], vec![1, 1, 0]] {
        let geom = validate_cusp(b.len() as i64, b.clone()).unwrap();
        for (_, seq, l) in cusp_cm::quiver::tube_bases(&geom, 6, &lambdas).unwrap() {
            for m in 1..=5 {
                let label =
                    cusp_cm::classify_label(&BundleTriple::new(seq.clone(), m, l).unwrap(), &geom)
                        .unwrap();
                let ar = ar_sequence(&geom, &label).unwrap();
                let mid: u64 = ar.middle.iter().map(CmModuleLabel::rank).sum();
                ensure(mid == 2 * ar.left.rank(), || {
                    format!("b={b:?} {label}: middle {mid}, left {}", ar.left.rank())
                })?;
                checked += 1;
            }
        }
        let bseq = geom.b_sequence();
        let r1 = module_rank(
            &BundleTriple::new(bseq.clone(), 1, Scalar::one()).unwrap(),
            &geom,
        )
        .unwrap();
        let r2 = module_rank(&BundleTriple::new(bseq, 2, Scalar::one()).unwrap(), &geom).unwrap();
        ensure(1 + r2 == 2 * r1, || {
            format!("b={b:?}: special tube 1 + {r2} != 2·{r1}")
        })?;
    }
    Ok(format!("{checked} AR sequences over 4 geometries"))
}

fn random_seq(rng: &mut StdRng, s: usize, lo: i64) -> SSeq {
    let r = rng.random_range(1..=(12 / s).max(1));
    let entries = (0..r * s).map(|_| rng.random_range(lo..=3)).collect();
    SSeq::new(s, entries).unwrap()
}

fn criterion_6() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed_0006);
    let lambdas = [q(1, 1), q(-1, 1), q(2, 1), q(-3, 2), q(1, 5)];
    let mut modules = 0;
    for (p, qq) in [(3, 7), (3, 8), (4, 5), (4, 6), (5, 5), (5, 6), (6, 7)] {
        let g = geometry_of(p, qq).unwrap();
        let s = g.cusp.s();
        ensure(
            is_sigma_symmetric(&g, &g.cusp.b_sequence()).unwrap(),
            || format!("({p},{qq}): B not σ-symmetric"),
        )?;
        for _ in 0..500 {
            let x = random_seq(&mut rng, s, -3);
            let sx = apply_sigma(&g, &x).unwrap();
            ensure(apply_sigma(&g, &sx).unwrap() == x, || {
                format!("({p},{qq}) {x}: σ not an involution")
            })?;
            let c = sx.canonical_form();
            for k in 0..x.blocks() as i64 {
                let shifted = x.shift_by(k * s as i64);
                ensure(
                    apply_sigma(&g, &shifted).unwrap().canonical_form() == c,
                    || format!("({p},{qq}) {x}: orbit not preserved at shift {k}"),
                )?;
            }
            // Kahn's condition needs d ≥ 0 outside d = 0
            let x = random_seq(&mut rng, s, 0);
            if !x.is_aperiodic() {
                continue;
            }
            let m = rng.random_range(1..=3);
            let l = lambdas[rng.random_range(0..lambdas.len())];
            let t = BundleTriple::new(x.clone(), m, l).unwrap();
            if !cusp_cm::kahn_condition(&t) {
                continue;
            }
            let back = sigma_of_module(&g, &sigma_of_module(&g, &t).unwrap()).unwrap();
            ensure(
                back.seq().is_shift_of(&x) && back.m() == m && back.lambda() == l,
                || format!("({p},{qq}) {t}: σσ gave {back}"),
            )?;
            modules += 1;
        }
    }
    Ok(format!("3500 sequences, {modules} modules"))
}

/// Second strategy: loop by `m` then block count, brute force under the plain
/// Euler bound `Σd ≤ rank/m + r·Σb`, rank checked at a generic `λ`.
type Keys = BTreeSet<(SSeq, u32)>;

fn brute_force(geom: &CuspGeometry, rank: u64) -> (Keys, Keys) {
    let generic = q(2, 1);
    let b_total: i64 = geom.b().iter().sum();
    let mut families = BTreeSet::new();
    for m in 1..=rank as u32 {
        for blocks in 1..=(rank / m as u64) as usize {
            let bound = (rank / m as u64) as i64 + blocks as i64 * b_total;
            for seq in enumerate_nonneg_bounded(geom.s(), blocks, bound).unwrap() {
                let t = BundleTriple::new(seq.clone(), m, generic).unwrap();
                if module_rank(&t, geom).unwrap() == rank {
                    families.insert((seq, m));
                }
            }
        }
    }
    let mut exceptional = BTreeSet::new();
    for m in 1..=rank as u32 {
        let t = BundleTriple::new(geom.b_sequence(), m, Scalar::one()).unwrap();
        if module_rank(&t, geom).unwrap() == rank {
            exceptional.insert((geom.b_sequence(), m));
        }
    }
    (families, exceptional)
}

fn criterion_7() -> Outcome {
    let geom = validate_cusp(1, vec![1]).unwrap();
    let mut counts = Vec::new();
    for rank in 1..=6 {
        let e = enumerate_rank(&geom, rank).unwrap();
        let fams: BTreeSet<_> = e.families.iter().map(|f| (f.seq.clone(), f.m)).collect();
        let exc: BTreeSet<_> = e
            .exceptional
            .iter()
            .map(|l| {
                let t = l.triple().unwrap();
                (t.seq().clone(), t.m())
            })
            .collect();
        ensure(fams.len() == e.families.len(), || {
            format!("rank {rank}: duplicate families")
        })?;
        let (bf, bx) = brute_force(&geom, rank);
        ensure(fams == bf, || {
            format!("rank {rank}: strategies disagree on families: {fams:?} vs {bf:?}")
        })?;
        ensure(exc == bx, || {
            format!("rank {rank}: strategies disagree on exceptionals")
        })?;
        for f in &e.families {
            for l in [q(1, 1), q(-1, 1), q(2, 1), q(1, 3)] {
                if f.base.contains(l) {
                    let got = f.member(&geom, l).unwrap().rank();
                    ensure(got == rank, || {
                        format!("family ({},{}) at λ={l} has rank {got}", f.seq, f.m)
                    })?;
                }
            }
            let expect_base = if f.seq.is_zero() || f.seq == geom.b_sequence() {
                LambdaBase::NonzeroExceptOne
            } else {
                LambdaBase::AllNonzero
            };
            ensure(f.base == expect_base, || {
                format!("family ({},{}) has base {:?}", f.seq, f.m, f.base)
            })?;
        }
        for x in &e.exceptional {
            ensure(x.rank() == rank, || {
                format!("exceptional {x} has rank {}", x.rank())
            })?;
        }
        counts.push(e.families.len());
    }
    ensure(counts[0] == 2 && counts[1] == 5, || {
        format!("d(1), d(2) = {}, {}", counts[0], counts[1])
    })?;
    Ok(format!("d(1..6) = {counts:?}"))
}

fn criterion_8() -> Outcome {
    let geom = validate_cusp(1, vec![1]).unwrap();
    let table = family_counts(&geom, 10).unwrap();
    let pts: Vec<(f64, f64)> = (4..=10u64)
        .map(|r| (r as f64, (table.counts[&r] as f64).ln()))
        .collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let slope = sxy / sxx;
    let d: Vec<usize> = (4..=10u64).map(|r| table.counts[&r]).collect();
    ensure(slope > 0.0, || format!("slope {slope}"))?;
    ensure(d.windows(2).all(|w| w[0] <= w[1]), || {
        format!("not nondecreasing: {d:?}")
    })?;
    Ok(format!("d(4..10) = {d:?}, slope {slope:.4}"))
}

fn criterion_9() -> Outcome {
    let g = geometry_of(3, 8).unwrap();
    let lambdas = [q(1, 1), q(-1, 1), q(2, 1), q(1, 2), q(3, 1), q(1, 3)];
    let labels = labels_up_to_rank(&g.cusp, 4, &lambdas).unwrap();
    let set: BTreeSet<_> = labels.iter().cloned().collect();

    let (mut free, mut fixed_sign, mut fixed_other) = (0usize, 0usize, 0usize);
    let mut pairs = BTreeSet::new();
    let mut images = Vec::new();
    for label in &labels {
        let imgs = descend(&g, label).unwrap();
        ensure(!imgs.is_empty(), || format!("descend({label}) empty"))?;
        for img in &imgs {
            ensure(img.is_well_formed(&g).unwrap(), || {
                format!("descend({label}) gave ill-formed {img}")
            })?;
        }
        images.extend(imgs);
        let Some(t) = label.triple() else {
            free += 1;
            continue;
        };
        let st = sigma_of_module(&g, t).unwrap();
        let image = cusp_cm::classify_label(&st, &g.cusp).unwrap();
        ensure(set.contains(&image), || {
            format!("set not σ-closed at {label}")
        })?;
        if st == *t {
            if t.lambda().is_sign() {
                fixed_sign += 1;
            } else {
                fixed_other += 1;
            }
        } else {
            pairs.insert(std::cmp::min(t.clone(), st));
        }
    }

    let classes: Vec<_> = images.iter().map(|x| iso_class(&g, x).unwrap()).collect();
    for (i, a) in images.iter().enumerate() {
        for (j, b) in images.iter().enumerate() {
            let iso = tpq_iso(&g, a, b).unwrap();
            ensure(iso == (classes[i] == classes[j]), || {
                format!("tpq_iso({a},{b}) not the kernel of iso_class")
            })?;
            ensure(iso == tpq_iso(&g, b, a).unwrap(), || {
                format!("tpq_iso({a},{b}) not symmetric")
            })?;
        }
    }
    let distinct: BTreeSet<_> = classes.into_iter().collect();
    let expected = pairs.len() + 2 * fixed_sign + fixed_other + free;
    ensure(distinct.len() == expected, || {
        format!(
            "{} classes, expected {} pairs + 2·{fixed_sign} + {fixed_other} + {free} free",
            distinct.len(),
            pairs.len()
        )
    })?;
    Ok(format!(
        "{} labels, {} classes = {} pairs + 2·{fixed_sign} + {fixed_other} + {free}",
        labels.len(),
        distinct.len(),
        pairs.len()
    ))
}

fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests")
        .join("golden")
}

fn check_golden(name: &str, text: &str) -> Result<(), String> {
    let path = golden_dir().join(name);
    if std::env::var_os("BLESS_GOLDEN").is_some() {
        std::fs::create_dir_all(golden_dir()).map_err(|e| e.to_string())?;
        std::fs::write(&path, text).map_err(|e| e.to_string())?;
    }
    let want = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    ensure(want == text, || format!("{name} differs from fixture"))
}

fn criterion_10() -> Outcome {
    let geom = validate_cusp(1, vec![1]).unwrap();
    let lambdas = [q(1, 1), q(2, 1)];
    let cusp = || cusp_quiver(&geom, 2, 3, &lambdas).unwrap();
    let g38 = geometry_of(3, 8).unwrap();
    let special = || tpq_special_tube(&g38, 3).unwrap();

    let (a, b) = (export_dot(&cusp()), export_dot(&cusp()));
    ensure(a == b, || "cusp quiver DOT not deterministic".into())?;
    check_golden("cusp_b1_rank2_depth3.dot", &a)?;
    let (c, d) = (export_dot(&special()), export_dot(&special()));
    ensure(c == d, || "special tube DOT not deterministic".into())?;
    check_golden("tpq_3_8_special_depth3.dot", &c)?;

    let quiver = cusp();
    quiver.check_invariants()?;
    let mut with_free = Vec::new();
    let mut ends = 0;
    for node in &quiver.nodes {
        let cusp_cm::quiver::NodeLabel::Cusp(label) = &node.label else {
            return Err(format!("unexpected node {}", node.id));
        };
        if matches!(label.kind(), CmKind::Free) {
            continue;
        }
        ends += 1;
        let ar = ar_sequence(&geom, label).unwrap();
        if ar.middle.iter().any(CmModuleLabel::is_free) {
            with_free.push(label.to_string());
        }
    }
    ensure(with_free.len() == 1, || {
        format!("free module in middle terms of {with_free:?}")
    })?;
    Ok(format!(
        "{} nodes, {ends} AR sequences, free only in {}",
        quiver.nodes.len(),
        with_free[0]
    ))
}

fn report(n: usize, started: Instant, outcome: Outcome, failed: &mut bool) {
    let secs = started.elapsed().as_secs_f64();
    match outcome {
        Ok(detail) => println!("criterion {n:>2}: PASS ({detail}; {secs:.1}s)"),
        Err(detail) => {
            *failed = true;
            println!("criterion {n:>2}: FAIL ({detail}; {secs:.1}s)");
        }
    }
}

fn main() -> ExitCode {
    let mut failed = false;

    let started = Instant::now();
    let grid = run_grid();
    report(
        1,
        started,
        summarize(&grid.formula_vs_oracle, grid.cases),
        &mut failed,
    );
    report(2, started, summarize(&grid.euler, grid.cases), &mut failed);

    let checks: BTreeMap<usize, fn() -> Outcome> = BTreeMap::from([
        (3, criterion_3 as fn() -> Outcome),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
        (10, criterion_10),
    ]);
    let c3 = Instant::now();
    report(3, c3, checks[&3](), &mut failed);
    report(
        4,
        started,
        summarize(&grid.key_identity, grid.cases),
        &mut failed,
    );
    for (&n, check) in checks.range(5..) {
        let t = Instant::now();
        report(n, t, check(), &mut failed);
    }

    if failed {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
