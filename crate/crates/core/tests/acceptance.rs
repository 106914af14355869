//! Acceptance checks. Prints one line per criterion; exits nonzero if any fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use framelab_core::gallery::{
    example_expansion_coefficients, paper_example, paper_perturbed_index, paper_plain_index,
    random_frame, random_onb, standard_frame, StandardKind,
};
use framelab_core::linalg::{numerical_rank, projector_onto_span, sym_eigen};
use framelab_core::series::{duplicated_basis_family, sign_sup, subset_sup};
use framelab_core::subfamily::DEFAULT_SUBSET_BUDGET;
use framelab_core::{
    extract, perturbation_certificate, riesz_frame_constant, subfamily_lower_bound,
    tail_localization, CertificateMethod, Frame, NormMode, SeriesFamily, Strategy, SubsetId,
    SupMethod, TolerancePolicy, Vector,
};
use rand::Rng;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(failures: Vec<String>, summary: String) -> Outcome {
    if failures.is_empty() {
        Outcome {
            pass: true,
            detail: summary,
        }
    } else {
        let shown: Vec<&str> = failures.iter().take(3).map(String::as_str).collect();
        Outcome {
            pass: false,
            detail: format!(
                "{summary}; {} failure(s): {}",
                failures.len(),
                shown.join("; ")
            ),
        }
    }
}

fn pol() -> TolerancePolicy {
    TolerancePolicy::default()
}

fn small_random_frame(seed: u64, max_d: usize, max_n: usize) -> Frame {
    let mut rng = common::rng(seed);
    let d = rng.random_range(1..=max_d);
    let n = rng.random_range(1..=max_n);
    random_frame(d, n, seed, None).unwrap()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut prev = f64::INFINITY;
    let mut values = Vec::new();
    for n in 3..=8 {
        let f = paper_example(n).unwrap();
        let c = riesz_frame_constant(&f, &pol(), DEFAULT_SUBSET_BUDGET).unwrap();
        let bound = 0.25f64.powi(n as i32);
        if c.method != CertificateMethod::Exhaustive {
            failures.push(format!("n={n}: not exhaustive"));
        }
        if c.constant > bound {
            failures.push(format!("n={n}: {:e} > {bound:e}", c.constant));
        }
        if c.constant >= prev {
            failures.push(format!("n={n}: not decreasing"));
        }
        prev = c.constant;
        let pair =
            SubsetId::new(vec![paper_plain_index(n, n), paper_perturbed_index(n, n)]).unwrap();
        if c.witness != pair {
            let labels: Vec<String> = c.witness.indices().iter().map(|&i| f.label(i)).collect();
            failures.push(format!(
                "n={n}: witness {{{}}} is not the pair",
                labels.join(", ")
            ));
        }
        values.push(format!("{:.4e}", c.constant));
    }
    let elapsed = start.elapsed();
    if elapsed > Duration::from_secs(10) {
        failures.push(format!("took {elapsed:?}"));
    }
    outcome(
        failures,
        format!("constants [{}] in {elapsed:.2?}", values.join(", ")),
    )
}

fn criterion_2() -> Outcome {
    let f = paper_example(3).unwrap();
    let j = SubsetId::new(vec![paper_plain_index(3, 2), paper_perturbed_index(3, 2)]).unwrap();
    let got = subfamily_lower_bound(&f, &j, &pol()).unwrap();
    let expect = common::lmin_2x2(1.0 / 16.0, 0.25, 2.0);
    let gap = (got - expect).abs();
    let failures = if gap <= 1e-12 {
        vec![]
    } else {
        vec![format!("gap {gap:e}")]
    };
    outcome(
        failures,
        format!("lower bound {got:.15e}, oracle {expect:.15e}"),
    )
}

fn criterion_3() -> Outcome {
    let mut failures = Vec::new();
    for n in 3..=16 {
        let f = paper_example(n).unwrap();
        let idx: Vec<usize> = (2..=n).map(|i| paper_perturbed_index(n, i)).collect();
        let sub = f.subfamily(&SubsetId::new(idx).unwrap()).unwrap();
        let reference: Vec<Vector> = (2..=n).map(|i| Vector::basis(n, i - 1)).collect();
        let pairing: Vec<usize> = (0..n - 1).collect();
        let c = perturbation_certificate(&sub, &reference, &pairing, &pol()).unwrap();
        let expect: f64 = (2..=n).map(|i| 0.25f64.powi(i as i32)).sum();
        if (c.mu - expect).abs() > 1e-14 {
            failures.push(format!("n={n}: mu {:e} vs {expect:e}", c.mu));
        }
        if c.mu >= 1.0 / 12.0 + 1e-14 {
            failures.push(format!("n={n}: mu {:e} not below 1/12", c.mu));
        }
    }
    let mut certified = 0;
    for seed in 0..200u64 {
        let d = 1 + (seed % 8) as usize;
        let onb = random_onb(d, seed).unwrap();
        let mut rng = common::rng(seed ^ 0x5eed);
        let mu = rng.random_range(0.0..1.5);
        let deltas: Vec<Vector> = (0..d)
            .map(|_| common::gaussian_vector(&mut rng, d))
            .collect();
        let total: f64 = deltas.iter().map(|v| v.norm_sq()).sum();
        let scale = (mu / total).sqrt();
        let vectors = onb
            .iter()
            .zip(&deltas)
            .map(|(e, v)| e.add(&v.scaled(scale)))
            .collect();
        let f = Frame::new(d, vectors).unwrap();
        let pairing: Vec<usize> = (0..d).collect();
        let c = perturbation_certificate(&f, &onb, &pairing, &pol()).unwrap();
        if c.certified {
            certified += 1;
            if c.riesz_confirmed != Some(true) || !f.riesz_check(&pol()).unwrap().is_riesz_basis {
                failures.push(format!("seed {seed}: certified but not Riesz"));
            }
        }
    }
    outcome(
        failures,
        format!("n = 3..16 exact, {certified}/200 random instances certified"),
    )
}

fn criterion_4() -> Outcome {
    let mut failures = Vec::new();
    let e1 = Vector::basis(4, 0);
    let hand = example_expansion_coefficients(&e1, &[2], &[2], 2, 4, &pol()).unwrap();
    if hand.coefficients != [-4.0, 4.0] {
        failures.push(format!("e1 -> {:?}", hand.coefficients));
    }
    let mut rng = common::rng(4);
    let mut worst = 0.0f64;
    for trial in 0..100 {
        let n = rng.random_range(3..=10usize);
        let pivot = rng.random_range(2..=n);
        let mut plain: Vec<usize> = (2..=n).filter(|_| rng.random_bool(0.5)).collect();
        plain.push(pivot);
        let mut perturbed: Vec<usize> = (2..=n).filter(|i| !plain.contains(i)).collect();
        perturbed.extend(plain.iter().copied().filter(|_| rng.random_bool(0.3)));
        perturbed.push(pivot);
        let frame = paper_example(n).unwrap();
        let f = common::gaussian_vector(&mut rng, n);
        let e = example_expansion_coefficients(&f, &plain, &perturbed, pivot, n, &pol()).unwrap();
        let mut sum = Vector::zeros(n);
        for (&pos, &c) in e.subset.indices().iter().zip(&e.coefficients) {
            sum.axpy(c, frame.vector(pos));
        }
        let rel = sum.sub(&f).norm() / (1.0 + f.norm());
        worst = worst.max(rel);
        if rel > 1e-10 {
            failures.push(format!("trial {trial}: residual {rel:e}"));
        }
    }
    outcome(
        failures,
        format!(
            "e1 -> {:?}, worst relative residual {worst:.2e}",
            hand.coefficients
        ),
    )
}

fn criterion_5() -> Outcome {
    let mut failures = Vec::new();
    let mut checked = 0;
    let mut run = |f: &Frame, j: &SubsetId, tag: &str| {
        for eps in [0.1, 0.01, 0.001] {
            let r = tail_localization(f, j, eps, &pol()).unwrap();
            if !j.is_subset_of(&r.extended) {
                failures.push(format!("{tag} eps {eps}: J' does not contain J"));
            }
            let oracle = common::projected_tail_max(f, j.indices(), r.extended.indices());
            if oracle > eps {
                failures.push(format!("{tag} eps {eps}: {oracle:e}"));
            }
            checked += 1;
        }
    };
    let example = paper_example(8).unwrap();
    for i in 0..example.len() {
        run(
            &example,
            &SubsetId::new(vec![i]).unwrap(),
            &format!("example seed {i}"),
        );
    }
    run(
        &example,
        &SubsetId::new(vec![0, 1, 2]).unwrap(),
        "example seed {0,1,2}",
    );
    for seed in 0..50u64 {
        let mut rng = common::rng(seed + 500);
        let d = rng.random_range(2..=6);
        let n = rng.random_range(2..=16);
        let f = random_frame(d, n, seed + 500, None).unwrap();
        let k = rng.random_range(1..=n.min(3));
        let j = SubsetId::from_unsorted(
            (0..n)
                .filter(|_| rng.random_bool(0.5))
                .take(k)
                .chain([0])
                .collect(),
        );
        run(&f, &j, &format!("random {seed}"));
    }
    outcome(failures, format!("{checked} localizations checked"))
}

fn criterion_6() -> Outcome {
    let mut failures = Vec::new();
    let mut slowest = Duration::ZERO;
    for seed in 0..100u64 {
        let f = small_random_frame(seed + 600, 6, 10);
        let rank = numerical_rank(&f.rows_matrix(), &pol()).unwrap();
        let p_full = projector_onto_span(f.vectors(), f.ambient_dim(), &pol()).unwrap();
        let start = Instant::now();
        let ex = extract(&f, Strategy::Exhaustive, &pol()).unwrap();
        let elapsed = start.elapsed();
        slowest = slowest.max(elapsed);
        if elapsed > Duration::from_secs(1) {
            failures.push(format!("seed {seed}: exhaustive took {elapsed:?}"));
        }
        let gr = extract(&f, Strategy::Greedy, &pol()).unwrap();
        let pr = extract(&f, Strategy::Projection { seed_size: None }, &pol()).unwrap();
        let tol = 1e-12;
        if ex.riesz_lower < gr.riesz_lower - tol {
            failures.push(format!(
                "seed {seed}: exhaustive {:.4} < greedy {:.4}",
                ex.riesz_lower, gr.riesz_lower
            ));
        }
        if gr.riesz_lower < pr.riesz_lower - tol {
            failures.push(format!(
                "seed {seed}: greedy {:.4} < projection {:.4}",
                gr.riesz_lower, pr.riesz_lower
            ));
        }
        for r in [&ex, &gr, &pr] {
            let sub = f.subfamily(&r.selected).unwrap();
            let vs: Vec<&Vector> = sub.vectors().iter().collect();
            let lmin = common::eigenvalues(&common::gram_of(&vs))
                .first()
                .copied()
                .unwrap_or(0.0);
            let p_sub = projector_onto_span(sub.vectors(), f.ambient_dim(), &pol()).unwrap();
            let spans = p_full.sub(&p_sub).unwrap().frobenius() <= 1e-8;
            if r.selected.len() != rank || lmin <= 1e-12 || !spans {
                failures.push(format!(
                    "seed {seed}: {} result not an independent spanning set",
                    r.strategy
                ));
            }
        }
    }
    outcome(
        failures,
        format!("100 frames, slowest exhaustive {slowest:.2?}"),
    )
}

fn criterion_7() -> Outcome {
    let mut failures = Vec::new();
    let mut worst = 0.0f64;
    for seed in 0..200u64 {
        let f = small_random_frame(seed + 700, 8, 12);
        let gram = sym_eigen(&f.gram(), &pol()).unwrap();
        let op = f.spectrum(&pol()).unwrap();
        let a = gram.nonzero_values(&pol());
        let b = op.nonzero_values(&pol());
        let oracle = common::nonzero_eigenvalues(&f.frame_operator(), 1e-12);
        if a.len() != b.len() || a.len() != oracle.len() {
            failures.push(format!(
                "seed {seed}: ranks {} / {} / {}",
                a.len(),
                b.len(),
                oracle.len()
            ));
            continue;
        }
        for ((x, y), z) in a.iter().zip(b).zip(&oracle) {
            let gap = (x - y).abs().max((y - z).abs());
            worst = worst.max(gap);
            if gap > 1e-9 {
                failures.push(format!("seed {seed}: gap {gap:e}"));
            }
        }
    }
    outcome(failures, format!("200 frames, worst gap {worst:.2e}"))
}

fn criterion_8() -> Outcome {
    let mut frames: Vec<Frame> = (0..20u64)
        .map(|s| small_random_frame(s + 800, 8, 12))
        .collect();
    frames.push(paper_example(6).unwrap());
    frames.push(standard_frame(StandardKind::Mercedes, 2).unwrap());
    frames.push(standard_frame(StandardKind::DuplicatedOnb, 4).unwrap());
    frames.push(standard_frame(StandardKind::Onb, 5).unwrap());
    let mut failures = Vec::new();
    let mut worst = 0.0f64;
    let mut rng = common::rng(8);
    for k in 0..1000 {
        let frame = &frames[k % frames.len()];
        let f = common::random_in_span(&mut rng, frame);
        let dual = frame.canonical_dual(&pol()).unwrap();
        let mut sum = Vector::zeros(frame.ambient_dim());
        for (fi, gi) in frame.vectors().iter().zip(&dual.vectors) {
            sum.axpy(f.dot(gi), fi);
        }
        let rel = sum.sub(&f).norm() / (1.0 + f.norm());
        worst = worst.max(rel);
        if rel > 1e-10 {
            failures.push(format!("sample {k}: {rel:e}"));
        }
    }
    outcome(
        failures,
        format!(
            "1000 vectors over {} frames, worst {worst:.2e}",
            frames.len()
        ),
    )
}

fn criterion_9() -> Outcome {
    let c: Vec<f64> = (1..=20).map(|i| 0.5f64.powi(i)).collect();
    let fam = duplicated_basis_family(10, c.clone()).unwrap();
    let mut failures = Vec::new();
    let mut prev = f64::INFINITY;
    for m in 0..20 {
        let s = sign_sup(&fam, m);
        let cap = 2.0 * c[m..].iter().fold(0.0, |a: f64, x| a.max(x.abs()));
        if s.method != SupMethod::Exhaustive {
            failures.push(format!("m={}: not exhaustive", m + 1));
        }
        if s.lower > cap {
            failures.push(format!("m={}: {:e} > {cap:e}", m + 1, s.lower));
        }
        if s.lower >= prev {
            failures.push(format!("m={}: not decreasing", m + 1));
        }
        prev = s.lower;
    }
    outcome(failures, format!("20 tail starts, last value {prev:e}"))
}

fn criterion_10() -> Outcome {
    let mut failures = Vec::new();
    for seed in 0..600u64 {
        let mut rng = common::rng(seed + 1000);
        let d = rng.random_range(1..=6);
        let count = rng.random_range(1..=12usize);
        let vectors: Vec<Vector> = (0..count)
            .map(|_| common::gaussian_vector(&mut rng, d))
            .collect();
        let coefficients = (0..count).map(|_| rng.random_range(-2.0..2.0)).collect();
        let terms = SeriesFamily::new(vectors, coefficients, NormMode::CoordinateMax)
            .unwrap()
            .terms();
        let closed = subset_sup(&terms, NormMode::CoordinateMax).unwrap().value;
        let mut brute = 0.0f64;
        for mask in 0u32..1 << count {
            let mut sum = vec![0.0; d];
            for (i, x) in terms.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    for j in 0..d {
                        sum[j] += x[j];
                    }
                }
            }
            brute = brute.max(sum.iter().fold(0.0, |a: f64, v| a.max(v.abs())));
        }
        if closed != brute {
            failures.push(format!("seed {seed}: {closed:e} vs {brute:e}"));
        }
    }
    outcome(failures, "600 families, exact equality".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("example family decay", criterion_1),
        ("pair bound exactness", criterion_2),
        ("perturbation certificate", criterion_3),
        ("expansion coefficients", criterion_4),
        ("tail localization", criterion_5),
        ("extraction hierarchy", criterion_6),
        ("spectral equality", criterion_7),
        ("reconstruction identity", criterion_8),
        ("tail sign bound", criterion_9),
        ("subset sup closed form", criterion_10),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        if !o.pass {
            failed += 1;
        }
        println!(
            "criterion {}: {} {name}: {}",
            k + 1,
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
