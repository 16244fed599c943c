//! Named suites: valid Boolean arguments, built-in counterexamples, identities
//! of the genuinely quantum connectives, gate laws and entanglement examples.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use super::builtins::builtin_cases;
use super::report::{CaseReport, Measurement, Report, Timing};
use crate::formula::{parse, Formula};
use crate::gates::{and_gate, toffoli_decomposition_residual, Gate};
use crate::perspective::TruthPerspective;
use crate::semantics::{random_atom_meanings, random_qumix, sample_entangled_model, ScopedModel};
use crate::tensor::{classify_entanglement, max_abs, Matrix, Partition, Qumix, StateVector, C64};
use crate::tol;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SuiteName {
    Valbool,
    Nval,
    Genui,
    Gates,
    Entangle,
    All,
}

impl SuiteName {
    pub const ALL: [SuiteName; 5] = [
        SuiteName::Valbool,
        SuiteName::Nval,
        SuiteName::Genui,
        SuiteName::Gates,
        SuiteName::Entangle,
    ];
}

impl FromStr for SuiteName {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "valbool" => Ok(SuiteName::Valbool),
            "nval" => Ok(SuiteName::Nval),
            "genui" => Ok(SuiteName::Genui),
            "gates" => Ok(SuiteName::Gates),
            "entangle" => Ok(SuiteName::Entangle),
            "all" => Ok(SuiteName::All),
            other => Err(format!(
                "unknown suite `{other}` (expected valbool, nval, genui, gates, entangle or all)"
            )),
        }
    }
}

impl fmt::Display for SuiteName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SuiteName::Valbool => "valbool",
            SuiteName::Nval => "nval",
            SuiteName::Genui => "genui",
            SuiteName::Gates => "gates",
            SuiteName::Entangle => "entangle",
            SuiteName::All => "all",
        })
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SuiteConfig {
    /// Random models per property case.
    pub trials: usize,
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            trials: 300,
            seed: 1,
        }
    }
}

/// Random qumixes checked against the AND laws.
pub const AND_SAMPLES: usize = 500;
/// Random (observable, qumix) pairs for the reduced-state characterization.
pub const REDUCTION_SAMPLES: usize = 200;
/// Random perspective changes applied to each entanglement example.
pub const PERSPECTIVE_CHANGES: usize = 20;

type Case = Box<dyn Fn(&SuiteConfig) -> CaseReport + Send + Sync>;

pub fn run_suite(name: SuiteName, cfg: &SuiteConfig) -> Report {
    let start = Instant::now();
    let cases = match name {
        SuiteName::All => SuiteName::ALL.iter().flat_map(|&s| cases(s)).collect(),
        s => cases(s),
    };
    let results: Vec<(CaseReport, f64)> = cases
        .par_iter()
        .map(|case| {
            let t0 = Instant::now();
            let r = case(cfg);
            (r, t0.elapsed().as_secs_f64() * 1e3)
        })
        .collect();
    let mut timing = Timing::default();
    let mut reports = Vec::with_capacity(results.len());
    for (r, ms) in results {
        timing.cases_ms.insert(r.id.clone(), ms);
        reports.push(r);
    }
    timing.total_ms = start.elapsed().as_secs_f64() * 1e3;
    Report::new(&name.to_string(), cfg.seed, cfg.trials, reports, timing)
}

fn cases(name: SuiteName) -> Vec<Case> {
    match name {
        SuiteName::Valbool => valbool_cases(),
        SuiteName::Nval => builtin_cases()
            .into_iter()
            .map(|c| -> Case { Box::new(move |_: &SuiteConfig| nval_case(&c)) })
            .collect(),
        SuiteName::Genui => genui_cases(),
        SuiteName::Gates => vec![
            Box::new(|_: &SuiteConfig| bell_case()),
            Box::new(and_laws_case),
            Box::new(reduction_case),
            Box::new(|_: &SuiteConfig| toffoli_case()),
            Box::new(preorder_case),
        ],
        SuiteName::Entangle => vec![
            Box::new(|cfg: &SuiteConfig| {
                entangle_case(
                    cfg,
                    "entangle-ghz",
                    &[(0b000, 1.0), (0b111, 1.0)],
                    &[1, 1, 1],
                    &[1, 2, 3],
                    true,
                )
            }),
            Box::new(|cfg: &SuiteConfig| {
                entangle_case(
                    cfg,
                    "entangle-partial",
                    &[(0b000, 1.0), (0b110, 1.0)],
                    &[1, 1, 1],
                    &[1, 2],
                    false,
                )
            }),
            Box::new(|cfg: &SuiteConfig| {
                entangle_case(
                    cfg,
                    "entangle-bell",
                    &[(0b00, 1.0), (0b11, 1.0)],
                    &[1, 1],
                    &[1, 2],
                    true,
                )
            }),
        ],
        SuiteName::All => unreachable!("expanded by run_suite"),
    }
}

fn fnv(tag: &str) -> u64 {
    tag.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| {
        (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3)
    })
}

/// Independent stream per (case, trial).
fn trial_rng(seed: u64, tag: &str, i: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ fnv(tag));
    rng.set_stream(i as u64);
    rng
}

fn leaf<R: Rng + ?Sized>(rng: &mut R, atoms: &[u32]) -> Formula {
    match rng.random_range(0..20) {
        0 => Formula::True,
        1 => Formula::False,
        _ => Formula::atom(atoms[rng.random_range(0..atoms.len())]),
    }
}

/// A leaf or one connective over leaves.
fn small_formula<R: Rng + ?Sized>(rng: &mut R, atoms: &[u32]) -> Formula {
    match rng.random_range(0..9) {
        0..=2 => leaf(rng, atoms),
        3 => Formula::not(leaf(rng, atoms)),
        4 => Formula::and(leaf(rng, atoms), leaf(rng, atoms)),
        5 => Formula::or(leaf(rng, atoms), leaf(rng, atoms)),
        6 => Formula::xor(leaf(rng, atoms), leaf(rng, atoms)),
        7 => Formula::sqrt_id(leaf(rng, atoms)),
        _ => Formula::sqrt_not(leaf(rng, atoms)),
    }
}

#[derive(Clone, Copy)]
enum Relation {
    Le,
    Eq,
}

struct Instance {
    context: Formula,
    checks: Vec<(Formula, Formula, Relation)>,
}

/// Random models of a drawn context: even trials compositional, odd trials
/// entangled (falling back to compositional when the generator starves).
/// Every model is validated before the probabilities are compared.
fn model_property(
    cfg: &SuiteConfig,
    id: &str,
    draw: impl Fn(&mut ChaCha8Rng) -> Instance + Sync,
) -> CaseReport {
    let t = TruthPerspective::identity();
    let tol = tol::semantic();
    let outcomes: Vec<Result<(f64, bool, bool, String), String>> = (0..cfg.trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(cfg.seed, id, i);
            let inst = draw(&mut rng);
            let ctx = &inst.context;
            let mut entangled = false;
            let mut starved = false;
            let mut model = None;
            if i % 2 == 1 {
                let (m, _) =
                    sample_entangled_model(&t, ctx, &mut rng).map_err(|e| e.to_string())?;
                entangled = m.is_some();
                starved = m.is_none();
                model = m;
            }
            let model = match model {
                Some(m) => m,
                None => {
                    let meanings = random_atom_meanings(&mut rng, ctx.atoms());
                    ScopedModel::compositional(&t, ctx, &meanings).map_err(|e| e.to_string())?
                }
            };
            let d = model.validate();
            if !d.is_model() {
                return Err(format!("invalid model for {ctx}: {}", d.summary()));
            }
            let mut worst = 0.0f64;
            let mut witness = String::new();
            for (a, b, rel) in &inst.checks {
                let pa = model.probability_of(a).map_err(|e| e.to_string())?;
                let pb = model.probability_of(b).map_err(|e| e.to_string())?;
                let r = match rel {
                    Relation::Le => (pa - pb).max(0.0),
                    Relation::Eq => (pa - pb).abs(),
                };
                if r > worst {
                    worst = r;
                    if r > tol {
                        witness = format!("trial {i}, context {ctx}: p({a}) = {pa}, p({b}) = {pb}");
                    }
                }
            }
            Ok((worst, entangled, starved, witness))
        })
        .collect();
    let mut case = CaseReport::new(id, tol);
    let (mut entangled, mut starved) = (0usize, 0usize);
    for o in outcomes {
        match o {
            Ok((r, e, s, witness)) => {
                case.checked += 1;
                case.residual(r);
                entangled += usize::from(e);
                starved += usize::from(s);
                if !witness.is_empty() {
                    case.fail(witness);
                }
            }
            Err(e) => case.fail(e),
        }
    }
    case.measurements
        .push(Measurement::new("entangled models", entangled as f64));
    case.measurements
        .push(Measurement::new("starved entangled trials", starved as f64));
    case
}

const ATOMS: [u32; 3] = [1, 2, 3];

fn le(a: &Formula, b: &Formula) -> (Formula, Formula, Relation) {
    (a.clone(), b.clone(), Relation::Le)
}

fn eq(a: &Formula, b: &Formula) -> (Formula, Formula, Relation) {
    (a.clone(), b.clone(), Relation::Eq)
}

fn valbool_cases() -> Vec<Case> {
    vec![
        // a & b |= a, a & b |= b
        Box::new(|cfg: &SuiteConfig| {
            model_property(cfg, "valbool-1", |rng| {
                let a = small_formula(rng, &ATOMS);
                let b = small_formula(rng, &ATOMS);
                let ab = Formula::and(a.clone(), b.clone());
                Instance {
                    context: ab.clone(),
                    checks: vec![le(&ab, &a), le(&ab, &b)],
                }
            })
        }),
        // a |= b gives a & d |= b; the premise is realized as a = b & e.
        Box::new(|cfg: &SuiteConfig| {
            model_property(cfg, "valbool-2", |rng| {
                let b = small_formula(rng, &ATOMS);
                let e = leaf(rng, &ATOMS);
                let d = leaf(rng, &ATOMS);
                let a = Formula::and(b.clone(), e);
                let ad = Formula::and(a.clone(), d);
                Instance {
                    context: Formula::and(ad.clone(), b.clone()),
                    checks: vec![le(&a, &b), le(&ad, &b)],
                }
            })
        }),
        // ~~a == a
        Box::new(|cfg: &SuiteConfig| {
            model_property(cfg, "valbool-3", |rng| {
                let a = small_formula(rng, &ATOMS);
                let nna = Formula::not(Formula::not(a.clone()));
                let context = if rng.random_bool(0.5) {
                    Formula::and(nna.clone(), a.clone())
                } else {
                    Formula::and(a.clone(), nna.clone())
                };
                Instance {
                    context,
                    checks: vec![eq(&nna, &a)],
                }
            })
        }),
        // a |= b gives ~b |= ~a; the premise is realized as a = b & e.
        Box::new(|cfg: &SuiteConfig| {
            model_property(cfg, "valbool-4", |rng| {
                let b = small_formula(rng, &ATOMS);
                let e = leaf(rng, &ATOMS);
                let a = Formula::and(b.clone(), e);
                let nb = Formula::not(b);
                let na = Formula::not(a);
                Instance {
                    context: Formula::and(nb.clone(), na.clone()),
                    checks: vec![le(&nb, &na)],
                }
            })
        }),
        // f |= b, b |= t
        Box::new(|cfg: &SuiteConfig| {
            model_property(cfg, "valbool-5", |rng| {
                let b = small_formula(rng, &ATOMS);
                Instance {
                    context: Formula::and(Formula::and(Formula::False, b.clone()), Formula::True),
                    checks: vec![le(&Formula::False, &b), le(&b, &Formula::True)],
                }
            })
        }),
        // a |= a | b, b |= a | b
        Box::new(|cfg: &SuiteConfig| {
            model_property(cfg, "valbool-1-dual", |rng| {
                let a = small_formula(rng, &ATOMS);
                let b = small_formula(rng, &ATOMS);
                let ab = Formula::or(a.clone(), b.clone());
                Instance {
                    context: ab.clone(),
                    checks: vec![le(&a, &ab), le(&b, &ab)],
                }
            })
        }),
        // a |= b gives a |= b | d; the premise is realized as b = a | e.
        Box::new(|cfg: &SuiteConfig| {
            model_property(cfg, "valbool-2-dual", |rng| {
                let a = small_formula(rng, &ATOMS);
                let e = leaf(rng, &ATOMS);
                let d = leaf(rng, &ATOMS);
                let b = Formula::or(a.clone(), e);
                let bd = Formula::or(b.clone(), d);
                Instance {
                    context: Formula::and(a.clone(), bd.clone()),
                    checks: vec![le(&a, &b), le(&a, &bd)],
                }
            })
        }),
    ]
}

fn nval_case(case: &super::builtins::SuiteCase) -> CaseReport {
    let tol = tol::semantic();
    let mut report = CaseReport::new(case.id, tol);
    report.note(case.argument);
    let model = match case.spec.build() {
        Ok(m) => m,
        Err(e) => {
            report.fail(format!("model does not build: {e}"));
            return report;
        }
    };
    let d = model.validate();
    if !d.is_model() {
        report.fail(format!("not a model: {}", d.summary()));
        return report;
    }
    report.checked = 1;
    let mut probs = Vec::new();
    for target in &case.targets {
        let p = parse(&target.formula)
            .map_err(|e| e.to_string())
            .and_then(|f| model.probability_of(&f).map_err(|e| e.to_string()));
        match p {
            Ok(p) => {
                report.residual((p - target.expected).abs());
                report.measurements.push(Measurement::expecting(
                    format!("p({})", target.formula),
                    p,
                    target.expected,
                ));
                probs.push(p);
            }
            Err(e) => {
                report.fail(e);
                return report;
            }
        }
    }
    for &(i, j) in &case.failures {
        if probs[i] <= probs[j] + tol {
            report.fail(format!(
                "p({}) does not exceed p({})",
                case.targets[i].formula, case.targets[j].formula
            ));
        }
    }
    report
}

type Equivalence = fn(&Formula, &Formula) -> Vec<(Formula, Formula)>;

fn sid(f: Formula) -> Formula {
    Formula::sqrt_id(f)
}

fn snot(f: Formula) -> Formula {
    Formula::sqrt_not(f)
}

fn not(f: Formula) -> Formula {
    Formula::not(f)
}

fn genui_equivalences() -> Vec<(&'static str, Equivalence)> {
    use Formula::{False as F, True as T};
    vec![
        ("genui-1", |a, _| vec![(sid(sid(a.clone())), a.clone())]),
        ("genui-2", |_, _| vec![(sid(F), sid(T))]),
        ("genui-3", |_, _| {
            vec![(not(sid(F)), sid(F)), (not(sid(T)), sid(T))]
        }),
        ("genui-4", |a, b| {
            vec![(sid(Formula::and(a.clone(), b.clone())), sid(F))]
        }),
        ("genui-5", |a, _| {
            vec![(snot(snot(a.clone())), not(a.clone()))]
        }),
        ("genui-6", |_, _| vec![(snot(F), snot(T))]),
        ("genui-7", |_, _| {
            vec![(not(snot(F)), snot(F)), (not(snot(T)), snot(T))]
        }),
        ("genui-8", |a, _| {
            vec![(not(snot(a.clone())), snot(not(a.clone())))]
        }),
        ("genui-9", |a, b| {
            vec![(snot(Formula::and(a.clone(), b.clone())), snot(F))]
        }),
        ("genui-10", |a, _| {
            vec![(sid(snot(a.clone())), sid(a.clone()))]
        }),
        ("genui-11", |a, _| {
            vec![(snot(sid(a.clone())), not(snot(a.clone())))]
        }),
        ("genui-12", |a, b| {
            vec![(sid(snot(Formula::and(a.clone(), b.clone()))), snot(F))]
        }),
        ("genui-13", |a, b| {
            vec![(snot(sid(Formula::and(a.clone(), b.clone()))), snot(F))]
        }),
    ]
}

fn genui_cases() -> Vec<Case> {
    let mut out: Vec<Case> = genui_equivalences()
        .into_iter()
        .map(|(id, equiv)| -> Case {
            Box::new(move |cfg: &SuiteConfig| {
                model_property(cfg, id, |rng| {
                    let a = small_formula(rng, &ATOMS);
                    let b = small_formula(rng, &ATOMS);
                    let pairs = equiv(&a, &b);
                    let context = pairs
                        .iter()
                        .map(|(l, r)| Formula::and(l.clone(), r.clone()))
                        .reduce(Formula::and)
                        .expect("at least one pair");
                    Instance {
                        context,
                        checks: pairs.iter().map(|(l, r)| eq(l, r)).collect(),
                    }
                })
            })
        })
        .collect();
    out.push(Box::new(root_identities_case));
    out
}

/// `SQI^2 = I`, `SQN^2 = NOT` and `NOT SQN = SQN NOT` as dense identities.
fn root_identities_case(cfg: &SuiteConfig) -> CaseReport {
    let mut case = CaseReport::new("genui-gates", tol::EXACT_TOL);
    let mut rng = trial_rng(cfg.seed, "genui-gates", 0);
    let mut perspectives = vec![TruthPerspective::identity()];
    perspectives.extend((0..3).map(|_| TruthPerspective::random(&mut rng)));
    for t in &perspectives {
        for n in 1..=4 {
            let m = |g: Gate| g.matrix(t).expect("dense width");
            let (id, not, sqi, sqn) = (
                m(Gate::Identity(n)),
                m(Gate::Not(n)),
                m(Gate::Hadamard(n)),
                m(Gate::SqrtNot(n)),
            );
            case.residual(max_abs(&(&sqi * &sqi - &id)));
            case.residual(max_abs(&(&sqn * &sqn - &not)));
            case.residual(max_abs(&(&not * &sqn - &sqn * &not)));
            case.checked += 3;
        }
    }
    case
}

fn bell_case() -> CaseReport {
    let tol = tol::semantic();
    let mut case = CaseReport::new("gates-bell", tol);
    let t = TruthPerspective::identity();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let amps = |idx: &[usize], n: usize| {
        let mut v = vec![C64::from(0.0); 1 << n];
        idx.iter().for_each(|&i| v[i] = C64::from(s));
        Qumix::pure(StateVector::new(v).expect("power of two"))
    };
    let bell = amps(&[0b00, 0b11], 2);
    let ghz = amps(&[0b000, 0b111], 3);
    let run = || -> crate::Result<(f64, f64, f64)> {
        let out = and_gate(&t, 1, 1, &bell)?;
        let p = t.probability(&out);
        let split = bell.reduce(&[0])?.tensor(&bell.reduce(&[1])?);
        let q = t.probability(&and_gate(&t, 1, 1, &split)?);
        Ok((p, q, out.trace_distance(&ghz)?))
    };
    match run() {
        Ok((p, q, d)) => {
            case.checked = 2;
            case.residual((p - 0.5).abs());
            case.residual((q - 0.25).abs());
            case.residual(d);
            case.measurements
                .push(Measurement::expecting("p(AND(Bell))", p, 0.5));
            case.measurements
                .push(Measurement::expecting("p(AND(Red1 x Red2))", q, 0.25));
            case.measurements
                .push(Measurement::expecting("D(AND(Bell), GHZ)", d, 0.0));
        }
        Err(e) => case.fail(e.to_string()),
    }
    case
}

fn perspectives(cfg: &SuiteConfig, tag: &str, random: usize) -> Vec<TruthPerspective> {
    let mut rng = trial_rng(cfg.seed, tag, usize::MAX);
    let mut out = vec![TruthPerspective::identity()];
    out.extend((0..random).map(|_| TruthPerspective::random(&mut rng)));
    out
}

/// `p(AND(rho)) = tr((P1 x P1) rho)` and `p(AND(rho)) <= p(Red_i(rho))`.
fn and_laws_case(cfg: &SuiteConfig) -> CaseReport {
    let id = "gates-and";
    let tol = tol::semantic();
    let ts = perspectives(cfg, id, 5);
    let rows: Vec<crate::Result<[f64; 3]>> = (0..AND_SAMPLES)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(cfg.seed, id, i);
            let t = &ts[i % ts.len()];
            let m = rng.random_range(1..=5usize);
            let n = rng.random_range(1..=6 - m);
            let rho = random_qumix(&mut rng, m + n);
            let p = t.probability(&and_gate(t, m, n, &rho)?);
            let joint = t.truth_projector(m)?.kronecker(&t.truth_projector(n)?);
            let oracle = rho.expect(&joint)?.re;
            let left: Vec<usize> = (0..m).collect();
            let right: Vec<usize> = (m..m + n).collect();
            let p1 = t.probability(&rho.reduce(&left)?);
            let p2 = t.probability(&rho.reduce(&right)?);
            Ok([(p - oracle).abs(), (p - p1).max(0.0), (p - p2).max(0.0)])
        })
        .collect();
    let mut case = CaseReport::new(id, tol);
    for r in rows {
        match r {
            Ok(rs) => {
                case.checked += 1;
                rs.iter().for_each(|&x| case.residual(x));
            }
            Err(e) => case.fail(e.to_string()),
        }
    }
    case
}

fn random_matrix<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Matrix {
    let dim = 1usize << n;
    Matrix::from_fn(dim, dim, |_, _| {
        C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

/// `tr((A x I) rho) = tr(A Red1(rho))` and the mirrored form.
fn reduction_case(cfg: &SuiteConfig) -> CaseReport {
    let id = "gates-reduced";
    let rows: Vec<crate::Result<f64>> = (0..REDUCTION_SAMPLES)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(cfg.seed, id, i);
            let m = rng.random_range(1..=3usize);
            let p = rng.random_range(1..=3usize);
            let rho = random_qumix(&mut rng, m + p);
            let part = Partition::new(vec![m, p])?;
            let a = random_matrix(&mut rng, m);
            let b = random_matrix(&mut rng, p);
            let id_m = Matrix::identity(1 << m, 1 << m);
            let id_p = Matrix::identity(1 << p, 1 << p);
            let lhs1 = rho.expect(&a.kronecker(&id_p))?;
            let rhs1 = (&a * rho.reduced_state(&part, &[1])?.to_dense()?).trace();
            let lhs2 = rho.expect(&id_m.kronecker(&b))?;
            let rhs2 = (&b * rho.reduced_state(&part, &[2])?.to_dense()?).trace();
            Ok((lhs1 - rhs1).norm().max((lhs2 - rhs2).norm()))
        })
        .collect();
    let mut case = CaseReport::new(id, tol::semantic());
    for r in rows {
        match r {
            Ok(x) => {
                case.checked += 1;
                case.residual(x);
            }
            Err(e) => case.fail(e.to_string()),
        }
    }
    case
}

/// `T(m,n,1) = (I - P1 x P1) x I + P1 x P1 x NOT` for m, n up to 3.
fn toffoli_case() -> CaseReport {
    let mut case = CaseReport::new("gates-toffoli", tol::EXACT_TOL);
    for m in 1..=3 {
        for n in 1..=3 {
            match toffoli_decomposition_residual(m, n) {
                Ok(r) => {
                    case.checked += 1;
                    case.residual(r);
                }
                Err(e) => case.fail(e.to_string()),
            }
        }
    }
    case
}

/// The probability preorder is reflexive and transitive, with falsity at
/// the bottom and truth at the top.
fn preorder_case(cfg: &SuiteConfig) -> CaseReport {
    let id = "gates-preorder";
    let mut case = CaseReport::new(id, tol::semantic());
    for (k, t) in perspectives(cfg, id, 3).iter().enumerate() {
        let mut rng = trial_rng(cfg.seed, id, k);
        let states: Vec<Qumix> = (0..20)
            .map(|_| {
                let n = rng.random_range(1..=3usize);
                random_qumix(&mut rng, n)
            })
            .collect();
        let bottom = t.projector_state(0);
        let top = t.projector_state(1);
        for a in &states {
            if !t.preorder_le(a, a) || !t.preorder_le(&bottom, a) || !t.preorder_le(a, &top) {
                case.fail("reflexivity or bounds violated");
            }
            for b in &states {
                for c in &states {
                    if t.preorder_le(a, b) && t.preorder_le(b, c) && !t.preorder_le(a, c) {
                        case.fail("transitivity violated");
                    }
                }
            }
            case.checked += 1;
        }
    }
    case
}

fn entangle_case(
    cfg: &SuiteConfig,
    id: &str,
    terms: &[(usize, f64)],
    blocks: &[usize],
    expect_wrt: &[usize],
    expect_maximal: bool,
) -> CaseReport {
    let mut case = CaseReport::new(id, tol::semantic());
    let n: usize = blocks.iter().sum();
    let mut amps = vec![C64::from(0.0); 1 << n];
    for &(i, a) in terms {
        amps[i] = C64::from(a);
    }
    let run = || -> crate::Result<()> {
        let psi = StateVector::normalized(amps)?;
        let part = Partition::new(blocks.to_vec())?;
        let base = classify_entanglement(&psi, &part)?;
        for (i, p) in base.purities.iter().enumerate() {
            case.measurements
                .push(Measurement::new(format!("purity(Red{})", i + 1), *p));
        }
        case.checked += 1;
        if base.entangled_wrt != expect_wrt {
            case.fail(format!(
                "entangled w.r.t. {:?}, expected {:?}",
                base.entangled_wrt, expect_wrt
            ));
        }
        if base.maximally_entangled != expect_maximal {
            case.fail(format!(
                "maximally entangled = {}",
                base.maximally_entangled
            ));
        }
        if base.t_partite_entangled != (expect_wrt.len() == blocks.len()) {
            case.fail(format!(
                "t-partite entangled = {}",
                base.t_partite_entangled
            ));
        }
        let mut rng = trial_rng(cfg.seed, id, 0);
        for _ in 0..PERSPECTIVE_CHANGES {
            let t = TruthPerspective::random(&mut rng);
            let mut moved = psi.clone();
            t.apply_extended(moved.amplitudes_mut(), n);
            let r = classify_entanglement(&moved, &part)?;
            case.checked += 1;
            let drift = r
                .purities
                .iter()
                .zip(&base.purities)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            case.residual(drift);
            if r.properly_mixed != base.properly_mixed
                || r.maximally_entangled != base.maximally_entangled
                || r.t_partite_entangled != base.t_partite_entangled
            {
                case.fail("classification changed under a perspective change");
            }
        }
        Ok(())
    };
    if let Err(e) = run() {
        case.fail(e.to_string());
    }
    case
}
