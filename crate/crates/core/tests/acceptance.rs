//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Failing criteria are reported but do not fail `cargo test` unless
//! `ACCEPTANCE_STRICT` is set in the environment.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use common::{random_connected, random_graph, random_permutation};
use num_bigint::BigInt;
use polyindex::immanant::oracle::d2_oracle;
use polyindex::indexdb::{build_database, load_database, save_database, BuildParams, ViewSpec};
use polyindex::iso::connected_graphs;
use polyindex::linedraw::{simplify, split_image_graph_with_report, DrawingOptions, JunctionType};
use polyindex::study::collision_study;
use polyindex::synth::{evaluate, synthesize, SynthConfig};
use polyindex::{char_signature, d2_signature, CatalogueMode, CharPolySignature, GraphSignature, LineDrawing, RunConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn golden_polynomials() -> Outcome {
    let d2 = |g: &polyindex::WeightedGraph| d2_signature(&g.laplacian(), 12).unwrap();
    let cp = |g: &polyindex::WeightedGraph| char_signature(&g.laplacian(), 12).unwrap();
    let (s1, s2) = (d2(&common::g1()), d2(&common::g2()));
    let (c1, c2) = (cp(&common::g1()), cp(&common::g2()));
    let checks = [
        ("d2(G1)", s1 == GraphSignature::from_coefficients([3, 18, 33, 24, 6]), s1.to_string()),
        ("d2(G2)", s2 == GraphSignature::from_coefficients([3, 24, 105, 68, 24]), s2.to_string()),
        ("char(G1)", c1 == CharPolySignature::from_coefficients([1, -6, 9, -4, 0]), c1.to_string()),
        ("char(G2)", c2 == CharPolySignature::from_coefficients([1, -8, 19, -12, 0]), c2.to_string()),
    ];
    let detail = checks.iter().map(|(name, ok, got)| format!("{name}={got} [{}]", if *ok { "ok" } else { "mismatch" })).collect::<Vec<_>>();
    check(checks.iter().all(|c| c.1), detail.join("; "))
}

fn closed_form_coefficients() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut bad = 0;
    for _ in 0..1000 {
        let n = rng.random_range(3..=10);
        let density = rng.random_range(0.1..0.9);
        let g = random_graph(&mut rng, n, density, 1);
        let sig = d2_signature(&g.laplacian(), 12).unwrap();
        let c = sig.coefficients();
        if c[0] != BigInt::from(n - 1) || c[1] != BigInt::from(2 * g.edge_count() * (n - 1)) {
            bad += 1;
        }
    }
    check(bad == 0, format!("1000 binary graphs, n in [3,10], {bad} violations"))
}

fn permutation_invariance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut bad = 0;
    for k in 0..1000 {
        let n = rng.random_range(2..=10);
        let g = random_graph(&mut rng, n, 0.5, if k % 2 == 0 { 1 } else { 6 });
        let h = g.permute(&random_permutation(&mut rng, n)).unwrap();
        let (lg, lh) = (g.laplacian(), h.laplacian());
        if d2_signature(&lg, 12).unwrap() != d2_signature(&lh, 12).unwrap()
            || char_signature(&lg, 12).unwrap() != char_signature(&lh, 12).unwrap()
        {
            bad += 1;
        }
    }
    check(bad == 0, format!("1000 pairs (500 binary, 500 weighted), {bad} mismatches"))
}

fn oracle_equivalence() -> Outcome {
    let mut classes = 0;
    let mut bad = 0;
    for n in 1..=6 {
        for g in connected_graphs(n) {
            classes += 1;
            if d2_signature(&g.laplacian(), 12).unwrap() != d2_oracle(&g.laplacian()).unwrap() {
                bad += 1;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..500 {
        let n = rng.random_range(1..=7);
        let density = rng.random_range(0.2..0.9);
        let g = random_graph(&mut rng, n, density, 8);
        if d2_signature(&g.laplacian(), 12).unwrap() != d2_oracle(&g.laplacian()).unwrap() {
            bad += 1;
        }
    }
    check(bad == 0, format!("{classes} connected classes n<=6 + 500 random weighted n<=7, {bad} mismatches"))
}

fn discrimination_study() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for n in 1..=7 {
        let r = collision_study(n).map_err(|e| e.to_string())?;
        ok &= r.d2_pairs <= r.char_pairs;
        parts.push(format!("n={} classes={} d2={} char={}", n, r.classes, r.d2_pairs, r.char_pairs));
    }
    check(ok, parts.join("; "))
}

fn schematic_votes() -> Outcome {
    let (db, graphs) = common::schematic();
    let tally = db.recognize(&graphs[..2]);
    let got: Vec<(String, u64)> = ["CV11", "CV12", "CV21"].iter().map(|id| (id.to_string(), tally.score(id).unwrap())).collect();
    let want = [1, 2, 2];
    let ok = got.iter().zip(want).all(|((_, s), w)| *s == w);
    check(ok, got.iter().map(|(id, s)| format!("{id}={s}")).collect::<Vec<_>>().join(" "))
}

fn end_to_end_robustness() -> Outcome {
    let cfg = SynthConfig::default();
    let set = synthesize(&cfg).map_err(|e| e.to_string())?;
    let eval = evaluate(&set, &RunConfig::default()).map_err(|e| e.to_string())?;
    let correct = eval.outcomes.iter().filter(|o| o.correct()).count();
    let (acc, median) = (eval.accuracy(), eval.median_ratio());
    check(
        acc >= 0.7 && median >= 2.0,
        format!(
            "{} objects / {} views / {} scenes: top-1 {correct}/{} = {:.3} (need >= 0.700), median ratio {median:.2} (need >= 2)",
            eval.objects,
            eval.views,
            eval.outcomes.len(),
            eval.outcomes.len(),
            acc
        ),
    )
}

fn comb(teeth: usize, tooth_len: usize, rng: &mut ChaCha8Rng) -> LineDrawing {
    let mut text = String::from(
        "junction a 0 0\njunction b 10 0\njunction c 10 10\njunction d 0 10\n\
         segment ab a b\nsegment bc b c\nsegment cd c d\nsegment da d a\n",
    );
    for t in 0..teeth {
        let x = 20.0 + 5.0 * t as f64;
        text += &format!("junction s{t} {x} 0\n");
        let prev = if t == 0 { "b".to_string() } else { format!("s{}", t - 1) };
        text += &format!("segment sp{t} {prev} s{t}\n");
        for k in 1..=tooth_len {
            let y = -3.0 * k as f64 + rng.random_range(-1.0..1.0);
            text += &format!("junction t{t}_{k} {:.3} {y:.3}\n", x + rng.random_range(-1.0..1.0));
            let from = if k == 1 { format!("s{t}") } else { format!("t{t}_{}", k - 1) };
            text += &format!("segment tt{t}_{k} {from} t{t}_{k}\n");
        }
    }
    LineDrawing::parse(&text).unwrap()
}

fn pipeline_invariants() -> Outcome {
    let opts = DrawingOptions::default();
    let mut drawings: Vec<LineDrawing> = Vec::new();
    let set = synthesize(&SynthConfig { objects: 4, scenes_per_view: 5, ..SynthConfig::default() }).map_err(|e| e.to_string())?;
    drawings.extend(set.views.iter().map(|v| v.drawing.clone()));
    drawings.extend(set.scenes.iter().map(|s| s.drawing.clone()));
    let synthetic = drawings.len();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut combs = Vec::new();
    for teeth in 1..=8 {
        for len in 1..=6 {
            combs.push(comb(teeth, len, &mut rng));
        }
    }
    let mut violations = Vec::new();
    let mut worst_rounds = 0.0f64;
    for (i, d) in drawings.iter().chain(&combs).enumerate() {
        let (simple, _) = simplify(d, &opts);
        for j in 0..simple.junctions().len() {
            if matches!(simple.classify(j, opts.collinear_deg), JunctionType::Terminal | JunctionType::T) {
                violations.push(format!("drawing {i}: {} is {:?}", simple.junctions()[j].id, simple.classify(j, opts.collinear_deg)));
            }
        }
        let (graphs, report) = split_image_graph_with_report(d, &opts).map_err(|e| e.to_string())?;
        if graphs.iter().any(|g| g.edge_count() < g.node_count()) {
            violations.push(format!("drawing {i}: irrelevant component emitted"));
        }
        if report.max_prune_rounds > d.segments().len() {
            violations.push(format!("drawing {i}: {} prune rounds for {} segments", report.max_prune_rounds, d.segments().len()));
        }
        worst_rounds = worst_rounds.max(report.max_prune_rounds as f64 / d.segments().len() as f64);
    }
    check(
        violations.is_empty(),
        format!(
            "{synthetic} synthetic + {} comb drawings, worst prune rounds / |E| = {worst_rounds:.2}, {} violations{}",
            combs.len(),
            violations.len(),
            violations.first().map(|v| format!(" (first: {v})")).unwrap_or_default()
        ),
    )
}

fn corruptions(text: &str, rng: &mut ChaCha8Rng) -> Vec<(&'static str, String)> {
    let lines: Vec<&str> = text.lines().collect();
    let body = lines.len() - 1;
    let mut out = Vec::new();
    let pick = rng.random_range(1..body);
    let mut dropped = lines.clone();
    dropped.remove(pick);
    out.push(("dropped line", dropped.join("\n") + "\n"));
    let digits: Vec<usize> = text.char_indices().filter(|(_, c)| c.is_ascii_digit()).map(|(i, _)| i).collect();
    let at = digits[rng.random_range(0..digits.len() / 2)];
    let mut flipped = text.to_string();
    let old = flipped.as_bytes()[at];
    let new = if old == b'9' { '0' } else { (old + 1) as char };
    flipped.replace_range(at..at + 1, &new.to_string());
    out.push(("changed digit", flipped));
    out.push(("truncated", text[..text.len() / 2].to_string()));
    out.push(("wrong version", text.replacen("polyindex-db 1", "polyindex-db 2", 1)));
    let mut duplicated = lines.clone();
    duplicated.insert(pick, lines[pick]);
    out.push(("duplicated line", duplicated.join("\n") + "\n"));
    out.push(("empty", String::new()));
    out
}

fn database_round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut trips = 0;
    let mut accepted = Vec::new();
    let mut rejected = 0;
    for k in 0..20 {
        let views: Vec<ViewSpec> = (0..rng.random_range(2..7))
            .map(|i| {
                let n = rng.random_range(5..13);
                let extra = rng.random_range(1..n);
                ViewSpec::new(format!("obj{}", i % 3), format!("view{i}"), random_connected(&mut rng, n, extra, 1 + (k % 4) as u32))
            })
            .collect();
        let mode = if k % 3 == 0 { CatalogueMode::Binary } else { CatalogueMode::Weighted };
        let db = build_database(&views, BuildParams { mode, ..BuildParams::default() }).map_err(|e| e.to_string())?;
        let text = save_database(&db).map_err(|e| e.to_string())?;
        let back = load_database(&text).map_err(|e| e.to_string())?;
        if back != db || save_database(&back).map_err(|e| e.to_string())? != text {
            return Err(format!("database {k} changed across save/load"));
        }
        trips += 1;
        for (what, bad) in corruptions(&text, &mut rng) {
            match load_database(&bad) {
                Ok(_) => accepted.push(format!("db {k}: {what}")),
                Err(_) => rejected += 1,
            }
        }
    }
    check(
        accepted.is_empty(),
        format!("{trips} databases round-tripped; {rejected} corrupted streams rejected, {} accepted{}", accepted.len(),
            accepted.first().map(|a| format!(" (first: {a})")).unwrap_or_default()),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("1 golden polynomials", golden_polynomials),
        ("2 closed-form coefficients", closed_form_coefficients),
        ("3 permutation invariance", permutation_invariance),
        ("4 oracle equivalence", oracle_equivalence),
        ("5 discrimination study", discrimination_study),
        ("6 schematic voting walkthrough", schematic_votes),
        ("7 end-to-end robustness", end_to_end_robustness),
        ("8 pipeline invariants", pipeline_invariants),
        ("9 database round-trip", database_round_trip),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".to_string()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {name} ({secs:.2}s): {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {name} ({secs:.2}s): {detail}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 && std::env::var_os("ACCEPTANCE_STRICT").is_some() {
        std::process::exit(1);
    }
}
