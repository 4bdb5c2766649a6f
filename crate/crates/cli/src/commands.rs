use std::fs;
use std::path::PathBuf;

use infolab::hspkit::{
    enumerate_subgroups, hsp_metrics_t, spectrum_multiplicities_t, FiniteAbelianGroup,
    HiddenSubgroupInstance,
};
use infolab::optimizer::{certify, minimize_discord, search_psi1, DiscordOptions};
use infolab::problems::{
    build_bv, build_dj, build_phase_estimation, build_simon, phase_final_metrics,
};
use infolab::simulator::{stage_report, stage_reports};
use infolab::tables::{self, Scale};
use infolab::{analyze, run_stages, AlgorithmSpec, MetricsRow, OracleProblem, StageLabel};

use crate::args::{Command, OutputArgs, ProblemArgs, ProblemKind, StageChoice};
use crate::error::{CliError, Status};
use crate::problem_file;
use crate::report::{stage_section, Provenance, Report, Section, STAGE_COLUMNS};

/// A validated problem choice.
#[derive(Debug, Clone, PartialEq)]
pub enum ProblemSelector {
    DeutschJozsa { k: usize },
    BernsteinVazirani { n: usize },
    Simon { n: usize, t: usize },
    Phase { n: usize, t: usize },
    Custom { file: PathBuf },
}

fn required(value: Option<usize>, flag: &str, problem: &str) -> Result<usize, CliError> {
    value.ok_or_else(|| CliError::Config(format!("--problem {problem} needs --{flag}")))
}

fn unused(present: bool, flag: &str, problem: &str) -> Result<(), CliError> {
    if present {
        Err(CliError::Config(format!(
            "--{flag} does not apply to --problem {problem}"
        )))
    } else {
        Ok(())
    }
}

impl ProblemSelector {
    pub fn from_args(a: &ProblemArgs) -> Result<Self, CliError> {
        let (k, n, t, file) = (a.k, a.n, a.t, a.file.is_some());
        let sel = match a.problem {
            ProblemKind::Dj => {
                unused(n.is_some(), "n", "dj")?;
                unused(t.is_some(), "t", "dj")?;
                unused(file, "file", "dj")?;
                ProblemSelector::DeutschJozsa {
                    k: required(k, "k", "dj")?,
                }
            }
            ProblemKind::Bv => {
                unused(k.is_some(), "k", "bv")?;
                unused(t.is_some(), "t", "bv")?;
                unused(file, "file", "bv")?;
                ProblemSelector::BernsteinVazirani {
                    n: required(n, "n", "bv")?,
                }
            }
            ProblemKind::Simon => {
                unused(k.is_some(), "k", "simon")?;
                unused(file, "file", "simon")?;
                ProblemSelector::Simon {
                    n: required(n, "n", "simon")?,
                    t: t.unwrap_or(1),
                }
            }
            ProblemKind::Phase => {
                unused(k.is_some(), "k", "phase")?;
                unused(file, "file", "phase")?;
                ProblemSelector::Phase {
                    n: required(n, "n", "phase")?,
                    t: required(t, "t", "phase")?,
                }
            }
            ProblemKind::Custom => {
                unused(
                    k.is_some() || n.is_some() || t.is_some(),
                    "k/--n/--t",
                    "custom",
                )?;
                ProblemSelector::Custom {
                    file: a
                        .file
                        .clone()
                        .ok_or_else(|| CliError::Config("--problem custom needs --file".into()))?,
                }
            }
        };
        Ok(sel)
    }

    /// Short name for file stems.
    pub fn slug(&self) -> String {
        match self {
            ProblemSelector::DeutschJozsa { k } => format!("dj-k{k}"),
            ProblemSelector::BernsteinVazirani { n } => format!("bv-n{n}"),
            ProblemSelector::Simon { n, t } => format!("simon-n{n}-t{t}"),
            ProblemSelector::Phase { n, t } => format!("phase-n{n}-t{t}"),
            ProblemSelector::Custom { file } => {
                let stem = file
                    .file_stem()
                    .and_then(|s| s.to_str())
                    .unwrap_or("problem");
                format!("custom-{stem}")
            }
        }
    }

    pub fn describe(&self) -> String {
        match self {
            ProblemSelector::DeutschJozsa { k } => format!("--problem dj --k {k}"),
            ProblemSelector::BernsteinVazirani { n } => format!("--problem bv --n {n}"),
            ProblemSelector::Simon { n, t } => format!("--problem simon --n {n} --t {t}"),
            ProblemSelector::Phase { n, t } => format!("--problem phase --n {n} --t {t}"),
            ProblemSelector::Custom { file } => {
                format!("--problem custom --file {}", file.display())
            }
        }
    }

    pub fn build(&self) -> Result<(OracleProblem, AlgorithmSpec), CliError> {
        Ok(match self {
            ProblemSelector::DeutschJozsa { k } => {
                (build_dj(*k)?, AlgorithmSpec::deutsch_jozsa(*k)?)
            }
            ProblemSelector::BernsteinVazirani { n } => {
                (build_bv(*n)?, AlgorithmSpec::bernstein_vazirani(*n)?)
            }
            ProblemSelector::Simon { n, t } => {
                (build_simon(*n)?, AlgorithmSpec::simon(*n)?.repeated(*t)?)
            }
            ProblemSelector::Phase { n, t } => (
                build_phase_estimation(*n, *t)?,
                AlgorithmSpec::phase_estimation(*t)?,
            ),
            ProblemSelector::Custom { file } => {
                let text = fs::read_to_string(file).map_err(|source| CliError::Io {
                    path: file.display().to_string(),
                    source,
                })?;
                problem_file::parse(&text)?.build()?
            }
        })
    }
}

fn stage_filter(choice: StageChoice) -> Vec<StageLabel> {
    match choice {
        StageChoice::Pre => vec![StageLabel::PreQuery],
        StageChoice::Post => vec![StageLabel::PostQuery],
        StageChoice::Final => vec![StageLabel::Final],
        StageChoice::All => StageLabel::ALL.to_vec(),
    }
}

fn stage_flag(choice: StageChoice) -> &'static str {
    match choice {
        StageChoice::Pre => "pre",
        StageChoice::Post => "post",
        StageChoice::Final => "final",
        StageChoice::All => "all",
    }
}

/// Stage rows without the per-run success probability and digest.
fn metrics_section(rows: &[(String, MetricsRow)]) -> Section {
    let mut sec = Section::new("stages", &STAGE_COLUMNS[..11]);
    for (label, m) in rows {
        sec.push(vec![
            label.clone().into(),
            m.h_y.into(),
            m.s_rho_y.into(),
            m.coherence.into(),
            m.h_y_given_j.into(),
            m.chi.into(),
            m.mutual_information.into(),
            m.discord.into(),
            m.irrealism.into(),
            m.lower_bound.into(),
            m.upper_bound.into(),
        ]);
    }
    sec
}

pub fn dispatch(command: &Command, output: &OutputArgs) -> Result<(Report, Status), CliError> {
    match command {
        Command::Run { problem, stage } => run(problem, *stage, output),
        Command::Tables { which, scale } => tables_cmd(*which, *scale, output),
        Command::Optimize {
            problem,
            restarts,
            tol,
            search,
        } => optimize(problem, *restarts, *tol, *search, output),
        Command::Hsp { group, n, t } => hsp(group, *n, *t, output),
        Command::Phase { n, t, stage } => phase(*n, *t, *stage, output),
    }
}

pub fn run(
    args: &ProblemArgs,
    stage: StageChoice,
    output: &OutputArgs,
) -> Result<(Report, Status), CliError> {
    let sel = ProblemSelector::from_args(args)?;
    let (problem, spec) = sel.build()?;
    let wanted = stage_filter(stage);
    let reports: Vec<_> = stage_reports(&run_stages(&problem, &spec)?)?
        .into_iter()
        .filter(|r| wanted.contains(&r.stage))
        .collect();
    let command = format!("run {} --stage {}", sel.describe(), stage_flag(stage));
    let mut report = Report::new(
        format!("run-{}", sel.slug()),
        Provenance::new(command, output),
    );
    report.sections.push(stage_section(&reports));
    Ok((report, Status::Ok))
}

pub fn tables_cmd(
    which: Option<u8>,
    scale: Scale,
    output: &OutputArgs,
) -> Result<(Report, Status), CliError> {
    let numbers: Vec<u8> = match which {
        Some(w) => vec![w],
        None => (1..=5).collect(),
    };
    let scale_name = match scale {
        Scale::Desk => "desk",
        Scale::Full => "full",
    };
    let stem = match which {
        Some(w) => format!("table{w}-{scale_name}"),
        None => format!("tables-{scale_name}"),
    };
    let command = match which {
        Some(w) => format!("tables --which {w} --scale {scale_name}"),
        None => format!("tables --scale {scale_name}"),
    };
    let mut report = Report::new(stem, Provenance::new(command, output));
    let mut summary = Section::new(
        "summary",
        &[
            "table",
            "scale",
            "cells",
            "breaches",
            "max_deviation",
            "skipped_rows",
        ],
    );
    let mut status = Status::Ok;
    for number in numbers {
        let rep = tables::replicate(number, scale)?;
        let mut sec = Section::new(
            format!("table{number}"),
            &[
                "row",
                "column",
                "expected",
                "computed",
                "deviation",
                "tolerance",
                "pass",
            ],
        );
        for row in &rep.rows {
            for c in &row.cells {
                sec.push(vec![
                    row.label.clone().into(),
                    c.column.into(),
                    c.expected.into(),
                    c.computed.into(),
                    c.deviation.into(),
                    c.tolerance.into(),
                    c.passed().into(),
                ]);
            }
        }
        if !rep.passed() {
            status = Status::ToleranceBreach;
        }
        summary.push(vec![
            (number as u64).into(),
            scale_name.into(),
            rep.cells().count().into(),
            rep.breaches().into(),
            rep.max_deviation().into(),
            rep.skipped.join(";").into(),
        ]);
        report.sections.push(sec);
    }
    report.sections.insert(0, summary);
    Ok((report, status))
}

pub fn optimize(
    args: &ProblemArgs,
    restarts: usize,
    tol: f64,
    search: Option<usize>,
    output: &OutputArgs,
) -> Result<(Report, Status), CliError> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(CliError::Config(format!(
            "--tol must be positive, got {tol}"
        )));
    }
    let sel = ProblemSelector::from_args(args)?;
    let (problem, spec) = sel.build()?;
    let post = run_stages(&problem, &spec)?.reduced(StageLabel::PostQuery)?;
    let cert = certify(&post)?;
    let opts = DiscordOptions {
        restarts,
        tol,
        seed: output.seed,
        ..DiscordOptions::default()
    };
    let result = minimize_discord(&post, &opts)?;
    let chi = analyze(&post)?.chi;

    let command = format!(
        "optimize {} --restarts {restarts} --tol {tol:e}",
        sel.describe()
    );
    let mut report = Report::new(
        format!("optimize-{}", sel.slug()),
        Provenance::new(command, output),
    );
    let mut summary = Section::new(
        "summary",
        &[
            "orthogonal_support",
            "pairwise_commuting",
            "chi",
            "d_min",
            "i_max",
            "h_j",
            "converged",
            "best_start",
            "sweeps",
            "evaluations",
        ],
    );
    summary.push(vec![
        cert.orthogonal_support.into(),
        cert.pairwise_commuting.into(),
        chi.into(),
        result.d_min.into(),
        (chi - result.d_min).into(),
        problem.class_entropy().into(),
        result.converged.into(),
        result.best_start.into(),
        result.sweeps.into(),
        result.evaluations.into(),
    ]);
    report.sections.push(summary);

    let mut starts = Section::new("starts", &["start", "discord"]);
    for (i, d) in result.start_values.iter().enumerate() {
        starts.push(vec![i.into(), (*d).into()]);
    }
    report.sections.push(starts);

    let mut pairs = Section::new("pairs", &["a", "b", "overlap", "commutator_norm"]);
    let n = cert.gram_overlaps.len();
    for a in 0..n {
        for b in a + 1..n {
            pairs.push(vec![
                a.into(),
                b.into(),
                cert.gram_overlaps[a][b].into(),
                cert.commutator_norms[a][b].into(),
            ]);
        }
    }
    report.sections.push(pairs);

    let u = &result.basis.unitary;
    let mut basis = Section::new("basis", &["row", "col", "re", "im"]);
    for r in 0..u.rows() {
        for c in 0..u.cols() {
            basis.push(vec![
                r.into(),
                c.into(),
                u[(r, c)].re.into(),
                u[(r, c)].im.into(),
            ]);
        }
    }
    report.sections.push(basis);

    if let Some(trials) = search {
        let found = search_psi1(&problem, trials, &opts)?;
        let mut sec = Section::new("search", &["index", "re", "im", "i_max", "evaluations"]);
        for (i, z) in found.psi1.iter().enumerate() {
            sec.push(vec![
                i.into(),
                z.re.into(),
                z.im.into(),
                found.i_max.into(),
                found.evaluations.into(),
            ]);
        }
        report.sections.push(sec);
        report
            .provenance
            .command
            .push_str(&format!(" --search {trials}"));
    }

    let status = if result.converged {
        Status::Ok
    } else {
        Status::NotConverged
    };
    Ok((report, status))
}

pub fn hsp(
    group: &[usize],
    n: Option<usize>,
    t: usize,
    output: &OutputArgs,
) -> Result<(Report, Status), CliError> {
    if t == 0 {
        return Err(CliError::Config("--t must be at least 1".into()));
    }
    let (instance, label) = match n {
        Some(n) => (HiddenSubgroupInstance::simon(n)?, format!("simon-n{n}")),
        None => {
            let g = FiniteAbelianGroup::new(group.to_vec())?;
            let subgroups = enumerate_subgroups(&g)?;
            let label = group
                .iter()
                .map(|o| o.to_string())
                .collect::<Vec<_>>()
                .join("x");
            (
                HiddenSubgroupInstance::uniform(g, subgroups)?,
                format!("z{label}"),
            )
        }
    };
    let command = match n {
        Some(n) => format!("hsp --n {n} --t {t}"),
        None => format!(
            "hsp --group {} --t {t}",
            group
                .iter()
                .map(|o| o.to_string())
                .collect::<Vec<_>>()
                .join(",")
        ),
    };
    let mut report = Report::new(
        format!("hsp-{label}-t{t}"),
        Provenance::new(command, output),
    );

    if t == 1 {
        let mut reports = Vec::new();
        for stage in StageLabel::ALL {
            reports.push(stage_report(stage, &instance.ensemble(stage)?)?);
        }
        report.sections.push(stage_section(&reports));
    } else {
        let m = hsp_metrics_t(&instance, t)?;
        report.sections.push(metrics_section(&[(
            StageLabel::Final.as_str().to_string(),
            m,
        )]));
    }

    let mut classes = Section::new("classes", &["class", "order", "prior", "annihilator_size"]);
    for (j, ((h, p), perp)) in instance
        .subgroups()
        .iter()
        .zip(instance.priors())
        .zip(instance.annihilators())
        .enumerate()
    {
        classes.push(vec![
            j.into(),
            h.order().into(),
            (*p).into(),
            perp.len().into(),
        ]);
    }
    report.sections.push(classes);

    let mut spectrum = Section::new("spectrum", &["eigenvalue", "multiplicity"]);
    for level in spectrum_multiplicities_t(&instance, t)? {
        spectrum.push(vec![level.eigenvalue.into(), level.multiplicity.into()]);
    }
    report.sections.push(spectrum);
    Ok((report, Status::Ok))
}

pub fn phase(
    n: usize,
    t: usize,
    stage: StageChoice,
    output: &OutputArgs,
) -> Result<(Report, Status), CliError> {
    let command = format!("phase --n {n} --t {t} --stage {}", stage_flag(stage));
    let mut report = Report::new(format!("phase-n{n}-t{t}"), Provenance::new(command, output));
    if stage == StageChoice::Final {
        let m = phase_final_metrics(n, t)?;
        report.sections.push(metrics_section(&[(
            StageLabel::Final.as_str().to_string(),
            m,
        )]));
    } else {
        let wanted = stage_filter(stage);
        let stages = run_stages(
            &build_phase_estimation(n, t)?,
            &AlgorithmSpec::phase_estimation(t)?,
        )?;
        let reports: Vec<_> = stage_reports(&stages)?
            .into_iter()
            .filter(|r| wanted.contains(&r.stage))
            .collect();
        report.sections.push(stage_section(&reports));
    }
    Ok((report, Status::Ok))
}
