//! Acceptance suite: one line per criterion, non-zero exit if any fails.

mod common;

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::deviation_from_closed_form;
use hardylab::abl::{
    abl_distribution, abl_probability, assign_elements, audit_product_rule, hardy_ensemble,
    hardy_observables, ProjectorFamily,
};
use hardylab::causal::{
    er_criterion, hardy_assignment, interval, nonlocal_region, CausalRegion, Criterion,
    HardyGeometry, LorentzBoost, NonlocalKind, SpacetimeEvent,
};
use hardylab::hardy::{Experiment, ExperimentStage, Observable, Setup};
use hardylab::prodrule::{
    enumerate_lattice_assignments, random_product_rule_trials, uniqueness_theorem_check, Factor,
    ProductRuleFunction,
};
use hardylab::statespace::Projector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const STATE_TOL: f64 = 1e-12;
const INTERVAL_TOL: f64 = 1e-9;
const COMPOSITION_TOL: f64 = 1e-12;
const PRODUCT_RULE_TOL: f64 = 1e-9;
const SEED: u64 = 20_240_601;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: String) -> Verdict {
    Verdict { pass, detail }
}

fn ms(d: Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

fn state_reproduction() -> Verdict {
    let stages = [
        ExperimentStage::AfterP,
        ExperimentStage::AfterBs2Minus,
        ExperimentStage::AfterBs2Plus,
        ExperimentStage::AfterBoth,
    ];
    let mut times = Vec::new();
    let mut worst: f64 = 0.0;
    let mut norm_ok = true;
    for _ in 0..11 {
        let start = Instant::now();
        let exp = Experiment::default();
        let states: Vec<_> = stages.iter().map(|&s| exp.evolve_to(s)).collect();
        times.push(start.elapsed());
        for s in &states {
            match deviation_from_closed_form(s.stage, &s.state) {
                Some(d) => worst = worst.max(d),
                None => worst = f64::INFINITY,
            }
            norm_ok &= (s.state.norm() - 1.0).abs() <= STATE_TOL;
        }
    }
    times.sort();
    let median = times[times.len() / 2];
    verdict(
        worst <= STATE_TOL && norm_ok && median < Duration::from_millis(1),
        format!(
            "max deviation {worst:.1e} (tol {STATE_TOL:e}), norms ok {norm_ok}, median {:.3} ms (limit 1 ms)",
            ms(median)
        ),
    )
}

fn coincidence_rate() -> Verdict {
    let exp = Experiment::default();
    let p = exp
        .observable_probability(
            ExperimentStage::AfterBoth,
            &Observable::d_plus().times(&Observable::d_minus()),
        )
        .unwrap();
    verdict(
        (p - 1.0 / 16.0).abs() <= STATE_TOL,
        format!("P(D+ D-) = {p} (expected 1/16)"),
    )
}

fn projection_free_certainty() -> Verdict {
    let exp = Experiment::default();
    let leg = 1.0 / 8.0;
    let mut pass = true;
    let mut parts = Vec::new();
    for (target, cond, stage) in [
        (
            Observable::u_minus(),
            Observable::d_plus(),
            ExperimentStage::AfterBs2Plus,
        ),
        (
            Observable::u_plus(),
            Observable::d_minus(),
            ExperimentStage::AfterBs2Minus,
        ),
    ] {
        let legs = exp
            .conditional_legs(
                stage,
                &exp.projector(stage, &target).unwrap(),
                &exp.projector(stage, &cond).unwrap(),
            )
            .unwrap();
        pass &= legs.value() == 1.0
            && (legs.joint - leg).abs() <= STATE_TOL
            && (legs.condition - leg).abs() <= STATE_TOL;
        parts.push(format!(
            "P({target}|{cond}) = {} ({} / {})",
            legs.value(),
            legs.joint,
            legs.condition
        ));
    }
    verdict(pass, parts.join(", "))
}

fn abl_triple() -> Verdict {
    let exp = Experiment::default();
    let e = hardy_ensemble(&exp).unwrap();
    let obs = hardy_observables(&exp, ExperimentStage::AfterP).unwrap();
    let p: Vec<f64> = obs
        .iter()
        .map(|o| abl_probability(&e, &ProjectorFamily::binary(&o.projector), 0).unwrap())
        .collect();
    let expected = [1.0, 1.0, 0.0];
    let close = p
        .iter()
        .zip(expected)
        .all(|(a, b)| (a - b).abs() <= STATE_TOL);
    let a = assign_elements(&e, &obs).unwrap();
    let [u_plus, u_minus, _] = obs;
    let violations = audit_product_rule(&a, &[(u_plus, u_minus)])
        .unwrap()
        .violations
        .len();
    verdict(
        close && violations == 1,
        format!(
            "P(U+, U-, U+U-) = ({}, {}, {}), violations {violations}",
            p[0], p[1], p[2]
        ),
    )
}

fn causal_geometry() -> Verdict {
    let g = HardyGeometry::default();
    let exp = Experiment::default();
    let union = nonlocal_region(NonlocalKind::Union, &g.boxes()).unwrap();
    let inter = nonlocal_region(NonlocalKind::Intersection, &g.boxes()).unwrap();
    let outside = CausalRegion::forward_exterior(g.u_plus_box.clone()).contains(&g.d_minus)
        && CausalRegion::forward_exterior(g.u_minus_box.clone()).contains(&g.d_plus);
    let not_in_i = !inter.contains(&g.d_plus) && !inter.contains(&g.d_minus);
    let in_u = union.contains(&g.d_plus) && union.contains(&g.d_minus);

    let frame = |b: f64| LorentzBoost::new(b).unwrap();
    let assign = |k: Criterion, b: f64| {
        hardy_assignment(&exp, &g, k, Some(&frame(b)), NonlocalKind::Union).unwrap()
    };
    let er1_gate = |b: f64| {
        er_criterion(
            Criterion::Er1,
            std::slice::from_ref(&g.d_plus),
            &g.bs2_minus,
            Some(&frame(b)),
        )
        .unwrap()
    };
    let er1_flips = assign(Criterion::Er1, 0.6) != assign(Criterion::Er1, -0.6)
        && er1_gate(0.6) != er1_gate(-0.6);

    let betas = [0.0, 0.3, -0.3, 0.6, -0.6, 0.9, -0.9];
    let er3: Vec<_> = betas.iter().map(|&b| assign(Criterion::Er3, b)).collect();
    let er3_same = er3.windows(2).all(|w| w[0] == w[1]);
    verdict(
        outside && not_in_i && in_u && er1_flips && er3_same,
        format!(
            "D∓ outside FC(U±box) {outside}, detectors outside I {not_in_i}, inside U {in_u}, \
             ER1 differs at ±0.6 {er1_flips}, ER3 equal over {} frames {er3_same}",
            betas.len()
        ),
    )
}

fn relativity_invariants() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let trials = 10_000;
    let start = Instant::now();
    let mut worst_interval: f64 = 0.0;
    let mut worst_composition: f64 = 0.0;
    let mut class_flips = 0;
    for _ in 0..trials {
        let mut ev = || SpacetimeEvent::new(rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0));
        let (a, b) = (ev(), ev());
        let v: f64 = rng.gen_range(-0.99..=0.99);
        let w: f64 = rng.gen_range(-0.99..=0.99);
        let boost = LorentzBoost::new(v).unwrap();
        let s = interval(&a, &b);
        let s2 = interval(&boost.apply(&a), &boost.apply(&b));
        worst_interval = worst_interval.max((s.value - s2.value).abs() / s.value.abs().max(1.0));
        if s.value.abs() > INTERVAL_TOL && s.class != s2.class {
            class_flips += 1;
        }
        let stepwise = LorentzBoost::new(w).unwrap().apply(&boost.apply(&a));
        let direct = LorentzBoost::new((v + w) / (1.0 + v * w))
            .unwrap()
            .apply(&a);
        let scale = stepwise.t.abs().max(stepwise.x.abs()).max(1.0);
        let dev = (stepwise.t - direct.t)
            .abs()
            .max((stepwise.x - direct.x).abs())
            / scale;
        worst_composition = worst_composition.max(dev);
    }
    let elapsed = start.elapsed();
    verdict(
        worst_interval <= INTERVAL_TOL
            && worst_composition <= COMPOSITION_TOL
            && class_flips == 0
            && elapsed < Duration::from_secs(1),
        format!(
            "{trials} trials (seed {SEED}) in {:.1} ms: interval rel dev {worst_interval:.1e}, \
             composition rel dev {worst_composition:.1e}, class changes {class_flips}",
            ms(elapsed)
        ),
    )
}

/// All 0/1 assignments on subsets of `{1..n}` that are multiplicative
/// under intersection, by exhaustive search over every assignment.
fn brute_force_lattice(n: usize) -> BTreeSet<Vec<u64>> {
    let size = 1usize << n;
    (0u64..(1u64 << size))
        .filter(|bits| {
            let f = |m: usize| (bits >> m) & 1 == 1;
            (0..size).all(|a| (0..size).all(|b| f(a & b) == (f(a) && f(b))))
        })
        .map(|bits| (0..size as u64).filter(|&m| (bits >> m) & 1 == 1).collect())
        .collect()
}

fn family_members() -> Vec<ProductRuleFunction> {
    let mut out = Vec::new();
    for n in 3..=5 {
        out.push(ProductRuleFunction::const1(n).unwrap());
        out.push(ProductRuleFunction::const0(n).unwrap());
        for (i, alpha) in [(1, 0.0), (2, 0.5), (n, 1.0), (1, 2.0), (2, 3.7)] {
            for signed in [false, true] {
                out.push(ProductRuleFunction::case2(n, i, alpha, signed).unwrap());
            }
        }
        let f = |index, alpha, signed| Factor {
            index,
            alpha,
            signed,
        };
        out.push(ProductRuleFunction::case3(n, vec![f(1, 1.0, false), f(2, 1.0, false)]).unwrap());
        out.push(ProductRuleFunction::case3(n, vec![f(1, 0.3, true), f(3, 2.5, false)]).unwrap());
        out.push(
            ProductRuleFunction::case3(
                n,
                (1..=n).map(|k| f(k, 0.5 * k as f64, k % 2 == 0)).collect(),
            )
            .unwrap(),
        );
    }
    out
}

fn appendix_classification() -> Verdict {
    let found = |n| -> BTreeSet<Vec<u64>> {
        enumerate_lattice_assignments(n)
            .unwrap()
            .iter()
            .map(|a| a.ones())
            .collect()
    };
    let (e3, e4) = (found(3), found(4));
    let (o3, o4) = (brute_force_lattice(3), brute_force_lattice(4));
    let counts_ok = e3.len() == 9 && e4.len() == 17 && e3 == o3 && e4 == o4;

    let start = Instant::now();
    let unique = (3..=5).all(|n| uniqueness_theorem_check(n).unwrap());
    let n5 = enumerate_lattice_assignments(5).unwrap().len();
    let elapsed = start.elapsed();

    let members = family_members();
    let failing = members
        .iter()
        .enumerate()
        .filter(|(k, f)| {
            !random_product_rule_trials(f, 1000, SEED + *k as u64, PRODUCT_RULE_TOL)
                .unwrap()
                .passed()
        })
        .count();
    verdict(
        counts_ok && unique && failing == 0 && elapsed < Duration::from_secs(60),
        format!(
            "N=3: {} (oracle {}), N=4: {} (oracle {}), N=5: {n5}; uniqueness N=3..5 {unique} in {:.1} ms; \
             {} members x 1000 trials, {failing} failing",
            e3.len(),
            o3.len(),
            e4.len(),
            o4.len(),
            ms(elapsed),
            members.len()
        ),
    )
}

fn normalization_and_unitarity() -> Verdict {
    let mut worst_defect: f64 = 0.0;
    let mut worst_sum: f64 = 0.0;
    let mut maps = 0;
    let mut families = 0;
    for plus in [true, false] {
        for minus in [true, false] {
            let exp = Experiment::new(Setup {
                bs2_plus_present: plus,
                bs2_minus_present: minus,
            });
            for (_, m) in exp.maps().iter() {
                worst_defect = worst_defect.max(m.isometry_defect());
                maps += 1;
            }
            for stage in ExperimentStage::ALL {
                let basis = exp.basis(stage).clone();
                let singles = basis
                    .labels()
                    .iter()
                    .map(|l| Projector::onto_labels(basis.clone(), [l]).unwrap())
                    .collect();
                let mut fams = vec![ProjectorFamily::new(singles).unwrap()];
                for o in ["U+", "U-", "D+", "D-", "U+U-", "D+D-", "gamma"] {
                    if let Ok(p) = exp.projector(stage, &o.parse::<Observable>().unwrap()) {
                        fams.push(ProjectorFamily::binary(&p));
                    }
                }
                for fam in fams {
                    let total: f64 = fam
                        .projectors()
                        .iter()
                        .map(|p| exp.outcome_probability(stage, p).unwrap())
                        .sum();
                    worst_sum = worst_sum.max((total - 1.0).abs());
                    families += 1;
                }
            }
        }
    }
    let exp = Experiment::default();
    let e = hardy_ensemble(&exp).unwrap();
    for o in hardy_observables(&exp, ExperimentStage::AfterP).unwrap() {
        let d = abl_distribution(&e, &ProjectorFamily::binary(&o.projector)).unwrap();
        worst_sum = worst_sum.max((d.iter().sum::<f64>() - 1.0).abs());
        families += 1;
    }
    verdict(
        worst_defect <= STATE_TOL && worst_sum <= STATE_TOL,
        format!(
            "{maps} maps, max isometry defect {worst_defect:.1e}; {families} families, max |sum - 1| {worst_sum:.1e}"
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Verdict); 8] = [
        ("state reproduction", state_reproduction),
        ("coincidence rate", coincidence_rate),
        ("projection-free certainty", projection_free_certainty),
        ("ABL triple and product-rule audit", abl_triple),
        ("causal geometry", causal_geometry),
        ("relativity invariants", relativity_invariants),
        ("lattice classification", appendix_classification),
        ("normalization and unitarity", normalization_and_unitarity),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let v = check();
        println!(
            "{} {}. {name}: {}",
            if v.pass { "PASS" } else { "FAIL" },
            k + 1,
            v.detail
        );
        if !v.pass {
            failed += 1;
        }
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
