//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.

mod common;

use std::time::Instant;

use common::{atoms, entails, formulas, random_formula};
use hqcl::gates::{and_gate, Gate};
use hqcl::harness::{builtin, builtin_cases, run_suite, SuiteConfig, SuiteName};
use hqcl::semantics::{
    check_classical_consequence, random_atom_meanings, random_qumix, sample_entangled_model,
};
use hqcl::tensor::{classify_entanglement, Matrix, C64};
use hqcl::{Formula, Partition, Qumix, ScopedModel, StateVector, TruthPerspective};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

const TOL: f64 = 1e-9;
const EXACT: f64 = 1e-12;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn state(n: usize, terms: &[usize]) -> StateVector {
    let mut amps = vec![C64::from(0.0); 1 << n];
    for &i in terms {
        amps[i] = C64::from(1.0);
    }
    StateVector::normalized(amps).unwrap()
}

fn kron_all(parts: &[Matrix]) -> Matrix {
    parts
        .iter()
        .fold(Matrix::from_element(1, 1, C64::from(1.0)), |acc, p| {
            acc.kronecker(p)
        })
}

fn u_matrix(t: &TruthPerspective) -> Matrix {
    let u = t.matrix();
    Matrix::from_fn(2, 2, |i, j| u[(i, j)])
}

/// `T^(k) (I^(k-1) x |1><1|) T^(k)+`, built from scratch.
fn truth_projector(t: &TruthPerspective, k: usize) -> Matrix {
    let dim = 1usize << (k - 1);
    let mut one = Matrix::zeros(2, 2);
    one[(1, 1)] = C64::from(1.0);
    let p = Matrix::identity(dim, dim).kronecker(&one);
    let u = kron_all(&vec![u_matrix(t); k]);
    &u * p * u.adjoint()
}

fn prob(t: &TruthPerspective, rho: &Matrix) -> f64 {
    let k = rho.nrows().trailing_zeros() as usize;
    (truth_projector(t, k) * rho).trace().re
}

/// Partial traces of a dense operator on `m + n` qubits.
fn red_first(rho: &Matrix, m: usize, n: usize) -> Matrix {
    let (a, b) = (1usize << m, 1usize << n);
    Matrix::from_fn(a, a, |i, j| {
        (0..b).map(|k| rho[(i * b + k, j * b + k)]).sum()
    })
}

fn red_second(rho: &Matrix, m: usize, n: usize) -> Matrix {
    let (a, b) = (1usize << m, 1usize << n);
    Matrix::from_fn(b, b, |k, l| {
        (0..a).map(|i| rho[(i * b + k, i * b + l)]).sum()
    })
}

fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> Matrix {
    let dim = 1usize << n;
    Matrix::from_fn(dim, dim, |_, _| {
        C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

fn max_abs(m: &Matrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn c1_bell() -> Outcome {
    let t = TruthPerspective::identity();
    let bell = Qumix::pure(state(2, &[0b00, 0b11]));
    let ghz = Qumix::pure(state(3, &[0b000, 0b111]));
    let out = and_gate(&t, 1, 1, &bell).unwrap();
    let p = t.probability(&out);
    let red = Qumix::maximally_mixed(1);
    let q = t.probability(
        &and_gate(
            &t,
            1,
            1,
            &bell
                .reduce(&[0])
                .unwrap()
                .tensor(&bell.reduce(&[1]).unwrap()),
        )
        .unwrap(),
    );
    let q_direct = t.probability(&and_gate(&t, 1, 1, &red.tensor(&red)).unwrap());
    let d = out.trace_distance(&ghz).unwrap();
    outcome(
        (p - 0.5).abs() <= TOL
            && (q - 0.25).abs() <= TOL
            && (q_direct - 0.25).abs() <= TOL
            && d <= TOL,
        format!("p(AND(Bell)) = {p:.9}, p(AND(Red x Red)) = {q:.9}, D(AND(Bell), GHZ) = {d:.1e}"),
    )
}

fn c2_golden() -> Outcome {
    let report = run_suite(SuiteName::Nval, &SuiteConfig::default());
    let mut slowest = 0.0f64;
    for id in ["nval-5", "nval-6"] {
        let start = Instant::now();
        let case = builtin(id).unwrap();
        let m = case.spec.build().unwrap();
        assert!(m.validate().is_model());
        for target in &case.targets {
            m.probability_of(&hqcl::parse(&target.formula).unwrap())
                .unwrap();
        }
        slowest = slowest.max(start.elapsed().as_secs_f64());
    }
    let pairs: Vec<String> = report
        .cases
        .iter()
        .map(|c| {
            let v: Vec<String> = c
                .measurements
                .iter()
                .map(|m| format!("{}", (m.value * 1e9).round() / 1e9))
                .collect();
            format!("{}: {}", c.id.trim_start_matches("nval-"), v.join("/"))
        })
        .collect();
    outcome(
        report.passed && report.cases.len() == 10 && slowest < 10.0,
        format!("{}; 13-qubit cases {slowest:.2} s", pairs.join(", ")),
    )
}

fn c3_and_laws() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut ts = vec![TruthPerspective::identity()];
    ts.extend((0..5).map(|_| TruthPerspective::random(&mut rng)));
    let mut worst_eq = 0.0f64;
    let mut worst_ineq = 0.0f64;
    let samples = 500;
    for i in 0..samples {
        let t = &ts[i % ts.len()];
        let m = rng.random_range(1..=5usize);
        let n = rng.random_range(1..=6 - m);
        let rho = random_qumix(&mut rng, m + n);
        let p = t.probability(&and_gate(t, m, n, &rho).unwrap());
        let dense = rho.to_dense().unwrap();
        let oracle = (truth_projector(t, m).kronecker(&truth_projector(t, n)) * &dense)
            .trace()
            .re;
        worst_eq = worst_eq.max((p - oracle).abs());
        let p1 = prob(t, &red_first(&dense, m, n));
        let p2 = prob(t, &red_second(&dense, m, n));
        worst_ineq = worst_ineq.max(p - p1).max(p - p2);
    }
    outcome(
        worst_eq <= TOL && worst_ineq <= TOL,
        format!("{samples} qumixes, 6 perspectives: equality residual {worst_eq:.1e}, inequality excess {:.1e}", worst_ineq.max(0.0)),
    )
}

fn c4_reduction() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let m = rng.random_range(1..=3usize);
        let p = rng.random_range(1..=3usize);
        let rho = random_qumix(&mut rng, m + p);
        let dense = rho.to_dense().unwrap();
        let part = Partition::new(vec![m, p]).unwrap();
        let a = random_matrix(&mut rng, m);
        let b = random_matrix(&mut rng, p);
        let lhs1 = (a.kronecker(&Matrix::identity(1 << p, 1 << p)) * &dense).trace();
        let rhs1 = (&a * rho.reduced_state(&part, &[1]).unwrap().to_dense().unwrap()).trace();
        let lhs2 = (Matrix::identity(1 << m, 1 << m).kronecker(&b) * &dense).trace();
        let rhs2 = (&b * rho.reduced_state(&part, &[2]).unwrap().to_dense().unwrap()).trace();
        worst = worst.max((lhs1 - rhs1).norm()).max((lhs2 - rhs2).norm());
    }
    outcome(worst <= TOL, format!("200 pairs, residual {worst:.1e}"))
}

fn c5_toffoli() -> Outcome {
    let t = TruthPerspective::identity();
    let mut worst = 0.0f64;
    for m in 1..=3 {
        for n in 1..=3 {
            let dim = 1usize << (m + n + 1);
            // Explicit permutation: flip the target when both control blocks end in 1.
            let mut perm = Matrix::zeros(dim, dim);
            for x in 0..dim {
                let c1 = (x >> (n + 1)) & 1;
                let c2 = (x >> 1) & 1;
                perm[(x ^ (c1 & c2), x)] = C64::from(1.0);
            }
            let mut p1 = Matrix::zeros(2, 2);
            p1[(1, 1)] = C64::from(1.0);
            let pm = Matrix::identity(1 << (m - 1), 1 << (m - 1)).kronecker(&p1);
            let pn = Matrix::identity(1 << (n - 1), 1 << (n - 1)).kronecker(&p1);
            let pp = pm.kronecker(&pn);
            let not = Matrix::from_fn(2, 2, |i, j| C64::from(f64::from(u8::from(i != j))));
            let block = 1usize << (m + n);
            let rhs = (Matrix::identity(block, block) - &pp).kronecker(&Matrix::identity(2, 2))
                + pp.kronecker(&not);
            let gate = Gate::Toffoli(m, n, 1).matrix(&t).unwrap();
            worst = worst
                .max(max_abs(&(&gate - &rhs)))
                .max(max_abs(&(&perm - &rhs)));
        }
    }
    outcome(
        worst <= EXACT,
        format!("m, n in 1..=3, residual {worst:.1e}"),
    )
}

fn property_suite(name: SuiteName, min_checked: usize) -> Outcome {
    let report = run_suite(name, &SuiteConfig::default());
    let models: Vec<&hqcl::harness::CaseReport> = report
        .cases
        .iter()
        .filter(|c| !c.id.ends_with("gates"))
        .collect();
    let enough = models.iter().all(|c| c.checked >= min_checked);
    let worst = report.cases.iter().map(|c| c.residual).fold(0.0, f64::max);
    let failed: Vec<&str> = report
        .cases
        .iter()
        .filter(|c| !c.passed)
        .map(|c| c.id.as_str())
        .collect();
    let entangled: f64 = models
        .iter()
        .flat_map(|c| c.measurements.iter())
        .filter(|m| m.label == "entangled models")
        .map(|m| m.value)
        .sum();
    outcome(
        report.passed && enough,
        format!(
            "{} cases, >= {min_checked} validated models each ({entangled} entangled in total), worst residual {worst:.1e}{}",
            report.cases.len(),
            if failed.is_empty() { String::new() } else { format!(", failed {failed:?}") }
        ),
    )
}

fn c8_classical() -> Outcome {
    let leaves = atoms(4);
    let all: Vec<Vec<Formula>> = (0..=3).map(|n| formulas(&leaves, n)).collect();
    let mut pairs = 0usize;
    let mut disagreements = Vec::new();
    for na in 0..=3 {
        for nb in 0..=3 - na {
            for a in &all[na] {
                for b in &all[nb] {
                    let v = check_classical_consequence(a, b).unwrap();
                    if v.is_counterexample() == entails(a, b, 4) {
                        disagreements.push(format!("{a} |= {b}"));
                    }
                    pairs += 1;
                }
            }
        }
    }
    outcome(
        disagreements.is_empty(),
        format!(
            "{pairs} pairs over q1..q4 with at most 3 connectives in total, {} disagreements{}",
            disagreements.len(),
            disagreements
                .first()
                .map(|d| format!(" (first: {d})"))
                .unwrap_or_default()
        ),
    )
}

fn random_model(rng: &mut ChaCha8Rng, ctx: &Formula, entangled: bool) -> ScopedModel {
    let t = TruthPerspective::identity();
    if entangled {
        if let (Some(m), _) = sample_entangled_model(&t, ctx, rng).unwrap() {
            return m;
        }
    }
    ScopedModel::compositional(&t, ctx, &random_atom_meanings(rng, ctx.atoms())).unwrap()
}

fn bounded(rng: &mut ChaCha8Rng, atoms: &[u32], depth: usize, max_qubits: usize) -> Formula {
    loop {
        let f = random_formula(rng, atoms, depth);
        if f.atomic_complexity() <= max_qubits {
            return f;
        }
    }
}

fn c9_perspectives() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(91);
    let builtins: Vec<ScopedModel> = builtin_cases()
        .iter()
        .map(|c| c.spec.build().unwrap())
        .collect();
    let mut worst = 0.0f64;
    let mut invalid = 0;
    for k in 0..100 {
        let model = if k % 4 == 0 {
            builtins[k / 4 % builtins.len()].clone()
        } else {
            let ctx = bounded(&mut rng, &[1, 2, 3], 3, 9);
            random_model(&mut rng, &ctx, k % 2 == 1)
        };
        let t = TruthPerspective::random(&mut rng);
        let moved = model.transport(&t).unwrap();
        if !moved.validate().is_model() {
            invalid += 1;
        }
        for occ in model.tree().primary_occurrences() {
            let d =
                (model.probability_at(&occ).unwrap() - moved.probability_at(&occ).unwrap()).abs();
            worst = worst.max(d);
        }
    }
    let id = TruthPerspective::identity();
    let mut worst_state = 0.0f64;
    for _ in 0..200 {
        let n = rng.random_range(1..=5usize);
        let rho = random_qumix(&mut rng, n);
        let t = TruthPerspective::random(&mut rng);
        let u = kron_all(&vec![u_matrix(&t); n]);
        let moved = &u * rho.to_dense().unwrap() * u.adjoint();
        worst_state = worst_state.max((prob(&t, &moved) - id.probability(&rho)).abs());
    }
    outcome(
        invalid == 0 && worst <= TOL && worst_state <= TOL,
        format!("100 transported models ({invalid} invalid), probability drift {worst:.1e}; 200 states, drift {worst_state:.1e}"),
    )
}

fn c10_entanglement() -> Outcome {
    let part = Partition::singletons(3);
    let ghz = state(3, &[0b000, 0b111]);
    let partial = state(3, &[0b000, 0b110]);
    let g = classify_entanglement(&ghz, &part).unwrap();
    let p = classify_entanglement(&partial, &part).unwrap();
    let mut ok = g.t_partite_entangled
        && g.maximally_entangled
        && p.entangled_wrt == vec![1, 2]
        && !p.t_partite_entangled;
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    for _ in 0..20 {
        let t = TruthPerspective::random(&mut rng);
        for (psi, base) in [(&ghz, &g), (&partial, &p)] {
            let mut moved = psi.clone();
            t.apply_extended(moved.amplitudes_mut(), 3);
            let r = classify_entanglement(&moved, &part).unwrap();
            ok &= r.properly_mixed == base.properly_mixed
                && r.maximally_entangled == base.maximally_entangled
                && r.t_partite_entangled == base.t_partite_entangled;
        }
    }
    let suite = run_suite(SuiteName::Entangle, &SuiteConfig::default());
    outcome(
        ok && suite.passed,
        format!(
            "GHZ 3-partite {} maximal {}; (|000>+|110>)/sqrt2 entangled w.r.t. {:?}; stable under 20 perspective changes",
            g.t_partite_entangled, g.maximally_entangled, p.entangled_wrt
        ),
    )
}

fn c11_extension() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(111);
    let mut pairs = 0;
    let mut worst = 0.0f64;
    let mut invalid = 0;
    while pairs < 100 {
        let gamma = bounded(&mut rng, &[1, 2], 2, 5);
        let beta = bounded(&mut rng, &[3, 4], 2, 3);
        if gamma.atomic_complexity() + beta.atomic_complexity() + 1 > 8 {
            continue;
        }
        let model = random_model(&mut rng, &gamma, pairs % 2 == 1);
        let extended = model
            .extend(&beta, &random_atom_meanings(&mut rng, beta.atoms()))
            .unwrap();
        if !extended.validate().is_model() {
            invalid += 1;
        }
        worst = worst.max(model.extension_residual(&extended).unwrap());
        pairs += 1;
    }
    outcome(
        worst <= TOL && invalid == 0,
        format!("100 pairs up to 8 qubits, worst trace distance {worst:.1e}, {invalid} invalid extensions"),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: Vec<Criterion> = vec![
        ("AND of the Bell state", c1_bell),
        ("built-in counterexamples", c2_golden),
        ("AND probability and reduced-state bounds", c3_and_laws),
        ("observables on reduced states", c4_reduction),
        ("Toffoli decomposition", c5_toffoli),
        ("valid Boolean arguments", || {
            property_suite(SuiteName::Valbool, 300)
        }),
        ("square-root connective equivalences", || {
            property_suite(SuiteName::Genui, 300)
        }),
        ("classical fragment against truth tables", c8_classical),
        ("truth-perspective invariance", c9_perspectives),
        ("entanglement classification", c10_entanglement),
        ("model extension", c11_extension),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t0 = Instant::now();
        let o = run();
        println!(
            "criterion {:>2} {}: {} ({}; {:.1} s)",
            i + 1,
            if o.passed { "PASS" } else { "FAIL" },
            name,
            o.detail,
            t0.elapsed().as_secs_f64()
        );
        failed += usize::from(!o.passed);
    }
    println!(
        "acceptance: {} of {} criteria passed in {:.1} s",
        criteria.len() - failed,
        criteria.len(),
        start.elapsed().as_secs_f64()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
