//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits with
//! a failure status if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use infolab::densemat::{hermitian_eigenvalues, ComplexMatrix};
use infolab::ensembles::{ClassEnsemble, ClassState, StageLabel};
use infolab::hspkit::{
    enumerate_subgroups, group_fourier, hsp_class_state, lambda_spectrum,
    lambda_spectrum_character_form, FiniteAbelianGroup, HiddenSubgroupInstance,
};
use infolab::infometrics::{analyze, discord_routes, fano_bounds};
use infolab::optimizer::{minimize_discord, simultaneous_diagonalizer, DiscordOptions};
use infolab::problems::{
    build_bv, build_dj, build_phase_estimation, build_simon, hsp_oracle, phase_post_query_state,
    OracleFamily, OracleProblem, OracleSpec, Prior,
};
use infolab::random;
use infolab::simulator::{optimal_output_rule, run_stages, AlgorithmSpec};
use infolab::tables::{self, Scale, TableReport};
use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::Rng;

type Outcome = Result<String, String>;

fn table_outcome(report: TableReport) -> Outcome {
    let cells = report.cells().count();
    let summary = format!(
        "{} rows, {cells} cells, max deviation {:.3e}",
        report.rows.len(),
        report.max_deviation()
    );
    if report.passed() {
        Ok(summary)
    } else {
        let worst: Vec<String> = report
            .rows
            .iter()
            .flat_map(|r| r.cells.iter().filter(|c| !c.passed()).map(move |c| (r, c)))
            .take(5)
            .map(|(r, c)| {
                format!(
                    "{} {}: expected {} got {:.6}",
                    r.label, c.column, c.expected, c.computed
                )
            })
            .collect();
        Err(format!(
            "{summary}; {} breaches: {}",
            report.breaches(),
            worst.join("; ")
        ))
    }
}

fn check(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: infolab::Error) -> String {
    e.to_string()
}

fn dj_table() -> Outcome {
    table_outcome(tables::table1().map_err(err)?)
}

fn bv_table() -> Outcome {
    table_outcome(tables::table2().map_err(err)?)
}

fn simon_table() -> Outcome {
    table_outcome(tables::table3().map_err(err)?)
}

fn simon_multi_query() -> Outcome {
    let report = tables::table4(Scale::Full).map_err(err)?;
    for r in &report.rows {
        for c in r
            .cells
            .iter()
            .filter(|c| c.column == "C" || c.column == "D_Y")
        {
            check(c.computed == 0.0, || {
                format!("{} {} is {} rather than 0", r.label, c.column, c.computed)
            })?;
        }
    }
    let summary = table_outcome(report)?;
    let mut worst: f64 = 0.0;
    for t in 1..=3 {
        let fast =
            infolab::hspkit::hsp_metrics_t(&HiddenSubgroupInstance::simon(2).map_err(err)?, t)
                .map_err(err)?;
        let explicit = tables::simon_tensor_power_metrics(2, t).map_err(err)?;
        check(
            explicit.coherence <= 1e-10 && explicit.discord <= 1e-10,
            || {
                format!(
                    "t={t}: explicit C={} D={}",
                    explicit.coherence, explicit.discord
                )
            },
        )?;
        for (a, b) in fast.seven().iter().zip(explicit.seven()) {
            worst = worst.max((a - b).abs());
        }
    }
    check(worst <= 1e-10, || {
        format!("aggregated vs explicit tensor power differ by {worst:.3e}")
    })?;
    let stages = run_stages(
        &build_simon(2).map_err(err)?,
        &AlgorithmSpec::simon(2)
            .and_then(|s| s.repeated(2))
            .map_err(err)?,
    )
    .map_err(err)?;
    let simulated = analyze(stages.get(StageLabel::Final)).map_err(err)?;
    let explicit = tables::simon_tensor_power_metrics(2, 2).map_err(err)?;
    let gap = simulated
        .seven()
        .iter()
        .zip(explicit.seven())
        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    check(
        gap <= 1e-10 && simulated.coherence <= 1e-10 && simulated.discord <= 1e-10,
        || format!("simulated two-query run differs by {gap:.3e}"),
    )?;
    Ok(format!(
        "{summary}; explicit t<=3 agreement {worst:.1e}, simulated t=2 agreement {gap:.1e}"
    ))
}

fn phase_table() -> Outcome {
    let desk = tables::table5(Scale::Desk).map_err(err)?;
    let desk_summary = table_outcome(desk.clone()).map_err(|e| format!("desk: {e}"))?;
    let full_summary = table_outcome(tables::table5(Scale::Full).map_err(err)?)
        .map_err(|e| format!("full: {e}"))?;
    let mut worst: f64 = 0.0;
    for &(n, t, _) in tables::TABLE5.iter() {
        if n > tables::TABLE5_DESK_MAX_N || t > tables::TABLE5_DESK_MAX_T {
            continue;
        }
        let fast = infolab::problems::phase_final_metrics(n, t).map_err(err)?;
        let slow = tables::phase_simulated_metrics(n, t).map_err(err)?;
        for (a, b) in fast.seven().iter().zip(slow.seven()) {
            worst = worst.max((a - b).abs());
        }
    }
    check(worst <= 1e-9, || {
        format!("fast and simulated rows differ by {worst:.3e}")
    })?;
    Ok(format!(
        "desk {desk_summary} ({} skipped); full {full_summary}; fast vs simulated {worst:.1e}",
        desk.skipped.len()
    ))
}

fn random_ensemble(rng: &mut impl Rng) -> ClassEnsemble {
    let qubits = rng.random_range(1..=4);
    let dim = 1 << qubits;
    let count = rng.random_range(1..=5);
    let weights = random::random_weights(count, rng);
    let classes = weights
        .into_iter()
        .enumerate()
        .map(|(label, weight)| {
            let rank = rng.random_range(1..=dim);
            ClassState {
                label,
                weight,
                state: random::random_density_matrix(dim, rank, rng),
            }
        })
        .collect();
    let mut measured: Vec<usize> = (0..qubits).filter(|_| rng.random_bool(0.6)).collect();
    if measured.is_empty() {
        measured.push(0);
    }
    ClassEnsemble::new(classes, vec![2; qubits], measured).unwrap()
}

fn fully_measured(e: &ClassEnsemble) -> ClassEnsemble {
    let dims = e.subsystem_dims().to_vec();
    ClassEnsemble::new(
        e.classes().to_vec(),
        dims.clone(),
        (0..dims.len()).collect(),
    )
    .unwrap()
}

fn check_invariants(e: &ClassEnsemble, rng: &mut impl Rng, what: &str) -> Result<(), String> {
    let m = analyze(e).map_err(|x| format!("{what}: {x}"))?;
    let (a, b) = discord_routes(e).map_err(err)?;
    check((a - b).abs() <= 1e-8, || {
        format!("{what}: discord routes {a} vs {b}")
    })?;
    check(m.mutual_information - m.lower_bound >= -1e-8, || {
        format!(
            "{what}: I={} below S-H(Y|J)={}",
            m.mutual_information, m.lower_bound
        )
    })?;
    check(m.upper_bound - m.mutual_information >= -1e-8, || {
        format!(
            "{what}: I={} above chi={}",
            m.mutual_information, m.upper_bound
        )
    })?;
    check(m.coherence >= 0.0 && m.discord >= 0.0, || {
        format!("{what}: negative C or D")
    })?;
    let w = e.weights();
    let uniform = w.iter().all(|x| (x - w[0]).abs() <= 1e-12);
    if uniform && w.len() >= 2 {
        let p = optimal_output_rule(e).map_err(err)?.p_success;
        let (upper, lower) = fano_bounds(m.mutual_information, w.len()).map_err(err)?;
        check(lower - 1e-9 <= p && p <= upper + 1e-9, || {
            format!("{what}: p_success {p} outside [{lower}, {upper}]")
        })?;
    }
    let full = fully_measured(e);
    let u = random::haar_unitary(full.dim(), rng);
    let before = analyze(&full).map_err(err)?.chi;
    let after = analyze(&full.conjugate_by(&u).map_err(err)?)
        .map_err(err)?
        .chi;
    check((before - after).abs() <= 1e-8, || {
        format!("{what}: chi {before} -> {after} under a unitary")
    })
}

fn builtin_problems() -> Vec<(String, OracleProblem, AlgorithmSpec)> {
    let mut out = Vec::new();
    for k in 1..=4 {
        out.push((
            format!("dj k={k}"),
            build_dj(k).unwrap(),
            AlgorithmSpec::deutsch_jozsa(k).unwrap(),
        ));
    }
    for n in 1..=6 {
        out.push((
            format!("bv n={n}"),
            build_bv(n).unwrap(),
            AlgorithmSpec::bernstein_vazirani(n).unwrap(),
        ));
    }
    for n in 2..=4 {
        out.push((
            format!("simon n={n}"),
            build_simon(n).unwrap(),
            AlgorithmSpec::simon(n).unwrap(),
        ));
    }
    for (n, t) in [(2, 2), (2, 4), (3, 5)] {
        out.push((
            format!("phase n={n} t={t}"),
            build_phase_estimation(n, t).unwrap(),
            AlgorithmSpec::phase_estimation(t).unwrap(),
        ));
    }
    out
}

fn invariant_suite() -> Outcome {
    let mut rng = random::rng(2024);
    for i in 0..200 {
        let e = random_ensemble(&mut rng);
        check_invariants(&e, &mut rng, &format!("random ensemble {i}"))
            .map_err(|x| format!("random {i}: {x}"))?;
    }
    let mut stages_checked = 0;
    for (name, problem, spec) in builtin_problems() {
        let stages = run_stages(&problem, &spec).map_err(err)?;
        for (stage, e) in stages.iter() {
            check_invariants(e, &mut rng, &format!("{name} {stage}"))
                .map_err(|x| format!("{name} {stage}: {x}"))?;
            stages_checked += 1;
        }
    }
    Ok(format!(
        "200 random ensembles and {stages_checked} built-in stages"
    ))
}

fn random_commuting_ensemble(rng: &mut impl Rng) -> ClassEnsemble {
    let qubits = rng.random_range(1..=3);
    let dim = 1 << qubits;
    let u = random::haar_unitary(dim, rng);
    let count = rng.random_range(2..=4);
    let weights = random::random_weights(count, rng);
    let classes = weights
        .into_iter()
        .enumerate()
        .map(|(label, weight)| {
            let mut diag = random::random_weights(dim, rng);
            let zeros = rng.random_range(0..dim);
            for d in diag.iter_mut().take(zeros) {
                *d = 0.0;
            }
            diag.shuffle(rng);
            let total: f64 = diag.iter().sum();
            let diag: Vec<f64> = diag.iter().map(|d| d / total).collect();
            ClassState {
                label,
                weight,
                state: ComplexMatrix::from_real_diagonal(&diag)
                    .conjugate_by(&u)
                    .unwrap(),
            }
        })
        .collect();
    ClassEnsemble::on_qubits(classes, qubits).unwrap()
}

fn matches_characters(w: &ComplexMatrix, fourier: &ComplexMatrix) -> bool {
    let m = w.matmul(&fourier.adjoint()).unwrap();
    let mut seen = vec![false; m.cols()];
    for r in 0..m.rows() {
        let hits: Vec<usize> = (0..m.cols()).filter(|&c| m[(r, c)].norm() > 1e-8).collect();
        if hits.len() != 1 || (m[(r, hits[0])].norm() - 1.0).abs() > 1e-8 || seen[hits[0]] {
            return false;
        }
        seen[hits[0]] = true;
    }
    true
}

fn commuting_optimizer() -> Outcome {
    let mut rng = random::rng(77);
    let opts = DiscordOptions {
        restarts: 8,
        mixture_start: false,
        ..DiscordOptions::default()
    };
    let mut worst: f64 = 0.0;
    for i in 0..50 {
        let e = random_commuting_ensemble(&mut rng);
        let found = minimize_discord(&e, &opts).map_err(err)?;
        let basis = simultaneous_diagonalizer(&e, i).map_err(err)?;
        let diag_d = analyze(&basis.rotate(&e).map_err(err)?)
            .map_err(err)?
            .discord;
        check(found.d_min <= 1e-6, || {
            format!("ensemble {i}: minimized discord {}", found.d_min)
        })?;
        check(
            diag_d <= 1e-6 && (found.d_min - diag_d).abs() <= 1e-6,
            || {
                format!(
                    "ensemble {i}: diagonalizer discord {diag_d} vs minimized {}",
                    found.d_min
                )
            },
        )?;
        worst = worst.max(found.d_min);
    }
    for n in 2..=4 {
        let inst = HiddenSubgroupInstance::simon(n).map_err(err)?;
        let e = inst.ensemble(StageLabel::PostQuery).map_err(err)?;
        let w = simultaneous_diagonalizer(&e, n as u64).map_err(err)?;
        let rotated = w.rotate(&e).map_err(err)?;
        let off = rotated
            .classes()
            .iter()
            .fold(0.0f64, |m, c| m.max(c.state.max_off_diagonal()));
        check(off <= 1e-8, || {
            format!("simon n={n}: off-diagonal mass {off:.3e}")
        })?;
        let fourier = group_fourier(inst.group()).map_err(err)?;
        check(matches_characters(&w.unitary, &fourier), || {
            format!("simon n={n}: recovered basis is not the character basis")
        })?;
    }
    for orders in [vec![2, 4], vec![3, 3], vec![8]] {
        let group = FiniteAbelianGroup::new(orders.clone()).map_err(err)?;
        let subgroups = enumerate_subgroups(&group).map_err(err)?;
        let e = HiddenSubgroupInstance::uniform(group, subgroups)
            .and_then(|i| i.ensemble(StageLabel::PostQuery))
            .map_err(err)?;
        let w = simultaneous_diagonalizer(&e, 3).map_err(err)?;
        let off = w
            .rotate(&e)
            .map_err(err)?
            .classes()
            .iter()
            .fold(0.0f64, |m, c| m.max(c.state.max_off_diagonal()));
        check(off <= 1e-8, || {
            format!("group {orders:?}: off-diagonal mass {off:.3e}")
        })?;
    }
    Ok(format!(
        "50 random commuting ensembles (worst {worst:.1e}) and HSP post-query ensembles"
    ))
}

fn max_gap(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    (a - b).max_abs()
}

fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v
}

fn brute_force_group(orders: &[usize], rng: &mut impl Rng) -> Result<f64, String> {
    let group = FiniteAbelianGroup::new(orders.to_vec()).map_err(err)?;
    let order = group.order();
    let subgroups = enumerate_subgroups(&group).map_err(err)?;
    let mut oracles = Vec::new();
    for (j, h) in subgroups.iter().enumerate() {
        let cosets = order / h.order();
        for copy in 0..2 {
            let mut labels: Vec<usize> = group.elements().collect();
            labels.shuffle(rng);
            labels.truncate(cosets);
            oracles.push(OracleSpec {
                id: format!("{j}-{copy}"),
                class: j,
                action: hsp_oracle(&group, h, &labels).map_err(err)?,
            });
        }
    }
    let names = (0..subgroups.len()).map(|j| j.to_string()).collect();
    let problem = OracleProblem::finite(
        "brute",
        orders.repeat(2),
        names,
        oracles,
        Prior::PartitionUniform,
    )
    .map_err(err)?;
    let stages = run_stages(
        &problem,
        &AlgorithmSpec::fourier_sampling(&group).map_err(err)?,
    )
    .map_err(err)?;
    let mut worst: f64 = 0.0;
    for stage in [StageLabel::PostQuery, StageLabel::Final] {
        let reduced = stages.reduced(stage).map_err(err)?;
        for (c, h) in reduced.classes().iter().zip(&subgroups) {
            worst = worst.max(max_gap(
                &c.state,
                &hsp_class_state(&group, h, stage).map_err(err)?,
            ));
        }
        let explicit = sorted(hermitian_eigenvalues(&reduced.mix()).map_err(err)?);
        let priors = vec![1.0 / subgroups.len() as f64; subgroups.len()];
        let formula = sorted(lambda_spectrum(&group, &subgroups, &priors).map_err(err)?);
        let characters = sorted(lambda_spectrum_character_form(&group, &subgroups).map_err(err)?);
        for ((a, b), c) in explicit.iter().zip(&formula).zip(&characters) {
            worst = worst.max((a - b).abs()).max((b - c).abs());
        }
    }
    Ok(worst)
}

fn riemann_gap(n: usize, t: usize, points: usize) -> Result<f64, String> {
    let problem = build_phase_estimation(n, t).map_err(err)?;
    let OracleFamily::PhaseIntervals(family) = problem.family() else {
        return Err("phase problem without a phase family".into());
    };
    let psi1 = AlgorithmSpec::phase_estimation(t)
        .map_err(err)?
        .pre_query_state();
    let classes = family.class_count();
    let dim = psi1.len();
    let mut worst: f64 = 0.0;
    for j in 0..classes {
        let mut acc = ComplexMatrix::zeros(dim, dim);
        for m in 0..points {
            let f = (j as f64 + (m as f64 + 0.5) / points as f64) / classes as f64;
            let phases = family.diagonal(f);
            let v: Vec<Complex64> = psi1.iter().zip(&phases).map(|(a, p)| a * p).collect();
            acc.add_outer(1.0 / points as f64, &v);
        }
        let exact = phase_post_query_state(family, j, &psi1).map_err(err)?;
        worst = worst.max(max_gap(&acc, &exact));
    }
    Ok(worst)
}

fn brute_force_equivalence() -> Outcome {
    let mut rng = random::rng(31);
    let groups: [&[usize]; 15] = [
        &[2],
        &[3],
        &[4],
        &[2, 2],
        &[5],
        &[6],
        &[8],
        &[2, 4],
        &[2, 2, 2],
        &[3, 3],
        &[2, 6],
        &[16],
        &[4, 4],
        &[2, 8],
        &[2, 2, 2, 2],
    ];
    let mut worst: f64 = 0.0;
    for orders in groups {
        let gap = brute_force_group(orders, &mut rng)?;
        check(gap <= 1e-10, || {
            format!("group {orders:?}: explicit and structural forms differ by {gap:.3e}")
        })?;
        worst = worst.max(gap);
    }
    let mut riemann: f64 = 0.0;
    for (n, t) in [(2, 2), (2, 3), (3, 3)] {
        let gap = riemann_gap(n, t, 100_000)?;
        check(gap <= 1e-6, || {
            format!("phase n={n} t={t}: Riemann sum differs by {gap:.3e}")
        })?;
        riemann = riemann.max(gap);
    }
    Ok(format!(
        "{} groups with |G| <= 16 (worst {worst:.1e}); phase Riemann check {riemann:.1e}",
        groups.len()
    ))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("Deutsch-Jozsa stages", dj_table),
        ("Bernstein-Vazirani stages", bv_table),
        ("Simon single query", simon_table),
        ("Simon parallel queries", simon_multi_query),
        ("phase estimation", phase_table),
        ("information-theoretic invariants", invariant_suite),
        (
            "commuting ensembles and measurement optimizer",
            commuting_optimizer,
        ),
        ("brute-force equivalence", brute_force_equivalence),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS {name} [{secs:.1}s] {detail}", i + 1),
            Err(detail) => {
                failures += 1;
                println!("criterion {}: FAIL {name} [{secs:.1}s] {detail}", i + 1);
            }
        }
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
