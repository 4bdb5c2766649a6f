use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use super::MeasurementBasis;
use crate::densemat::{hermitian_eig, ComplexMatrix};
use crate::ensembles::ClassEnsemble;
use crate::infometrics::analyze;
use crate::{random, Error, Result};

#[derive(Debug, Clone)]
pub struct DiscordOptions {
    /// Haar-random starting bases on top of the deterministic ones.
    pub restarts: usize,
    /// A start stops when a full sweep gains less than this.
    pub tol: f64,
    pub seed: u64,
    pub max_sweeps: usize,
    /// Also start from the eigenbasis of `ρ_Y`.
    pub mixture_start: bool,
    /// Further starting bases (rows are the basis bras).
    pub extra_starts: Vec<ComplexMatrix>,
}

impl Default for DiscordOptions {
    fn default() -> Self {
        Self {
            restarts: 32,
            tol: 1e-7,
            seed: 0,
            max_sweeps: 200,
            mixture_start: true,
            extra_starts: Vec::new(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct DiscordResult {
    pub basis: MeasurementBasis,
    pub d_min: f64,
    /// Whether the start that produced the best value met the tolerance.
    pub converged: bool,
    /// Discord reached from each start, in start order.
    pub start_values: Vec<f64>,
    pub best_start: usize,
    pub sweeps: usize,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct IMaxResult {
    pub i_max: f64,
    pub chi: f64,
    pub d_min: f64,
    pub converged: bool,
}

/// `Σ_j P(j,y) log2(P(j,y) / (p_j P(y)))` for one outcome column.
fn outcome_term(col: &[f64], priors: &[f64]) -> f64 {
    let py: f64 = col.iter().sum();
    if py <= 0.0 {
        return 0.0;
    }
    col.iter()
        .zip(priors)
        .filter(|(&q, _)| q > 0.0)
        .map(|(&q, &p)| q * (q / (p * py)).log2())
        .sum()
}

/// Working state of one descent: the rotated class states and the basis.
struct Descent<'a> {
    priors: &'a [f64],
    states: Vec<ComplexMatrix>,
    w: ComplexMatrix,
    evaluations: usize,
}

impl Descent<'_> {
    fn column(&self, y: usize) -> Vec<f64> {
        self.states
            .iter()
            .zip(self.priors)
            .map(|(m, p)| (p * m[(y, y)].re).max(0.0))
            .collect()
    }

    fn information(&self) -> f64 {
        (0..self.w.rows())
            .map(|y| outcome_term(&self.column(y), self.priors))
            .sum()
    }

    /// Information carried by outcomes `a, b` after rotating them by `(θ, φ)`.
    fn pair_value(&mut self, a: usize, b: usize, theta: f64, phi: f64) -> f64 {
        self.evaluations += 1;
        let (c2, s2) = ((2.0 * theta).cos(), (2.0 * theta).sin());
        let rot = Complex64::from_polar(1.0, -phi);
        let mut col_a = Vec::with_capacity(self.states.len());
        let mut col_b = Vec::with_capacity(self.states.len());
        for (m, &p) in self.states.iter().zip(self.priors) {
            let (da, db, x) = (m[(a, a)].re, m[(b, b)].re, m[(a, b)]);
            let mid = 0.5 * (da + db);
            let new_a = mid + 0.5 * c2 * (da - db) - s2 * (rot * x).re;
            col_a.push((p * new_a).max(0.0));
            col_b.push((p * (da + db - new_a)).max(0.0));
        }
        outcome_term(&col_a, self.priors) + outcome_term(&col_b, self.priors)
    }

    fn rotate(&mut self, a: usize, b: usize, theta: f64, phi: f64) {
        let (c, s) = (theta.cos(), theta.sin());
        let g = [
            [Complex64::new(c, 0.0), -Complex64::from_polar(s, phi)],
            [Complex64::from_polar(s, -phi), Complex64::new(c, 0.0)],
        ];
        let rows = |m: &mut ComplexMatrix| {
            for col in 0..m.cols() {
                let (x, y) = (m[(a, col)], m[(b, col)]);
                m[(a, col)] = g[0][0] * x + g[0][1] * y;
                m[(b, col)] = g[1][0] * x + g[1][1] * y;
            }
        };
        rows(&mut self.w);
        for m in &mut self.states {
            rows(m);
            for row in 0..m.rows() {
                let (x, y) = (m[(row, a)], m[(row, b)]);
                m[(row, a)] = x * g[0][0].conj() + y * g[0][1].conj();
                m[(row, b)] = x * g[1][0].conj() + y * g[1][1].conj();
            }
        }
    }

    /// Best rotation of the pair: grid scan, then alternating golden-section
    /// refinement in each angle.
    fn best_pair_rotation(&mut self, a: usize, b: usize) -> (f64, f64, f64) {
        const THETA_STEPS: usize = 8;
        const PHI_STEPS: usize = 8;
        let mut best = (0.0, 0.0, self.pair_value(a, b, 0.0, 0.0));
        for i in 1..THETA_STEPS {
            let theta = i as f64 * PI / (2.0 * THETA_STEPS as f64);
            for k in 0..PHI_STEPS {
                let phi = k as f64 * 2.0 * PI / PHI_STEPS as f64;
                let v = self.pair_value(a, b, theta, phi);
                if v > best.2 {
                    best = (theta, phi, v);
                }
            }
        }
        let (mut theta, mut phi, _) = best;
        let mut theta_half = PI / (2.0 * THETA_STEPS as f64);
        let mut phi_half = PI / PHI_STEPS as f64;
        for _ in 0..3 {
            theta = golden_max(theta - theta_half, theta + theta_half, |t| {
                self.pair_value(a, b, t, phi)
            });
            phi = golden_max(phi - phi_half, phi + phi_half, |p| {
                self.pair_value(a, b, theta, p)
            });
            theta_half *= 0.25;
            phi_half *= 0.25;
        }
        let v = self.pair_value(a, b, theta, phi);
        if v > best.2 {
            (theta, phi, v)
        } else {
            best
        }
    }
}

fn golden_max(mut lo: f64, mut hi: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > 1e-9 {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        }
    }
    0.5 * (lo + hi)
}

struct StartOutcome {
    w: ComplexMatrix,
    discord: f64,
    converged: bool,
    sweeps: usize,
}

fn descend(
    states: &[ComplexMatrix],
    priors: &[f64],
    chi: f64,
    start: &ComplexMatrix,
    opts: &DiscordOptions,
    evaluations: &mut usize,
) -> Result<StartOutcome> {
    let mut d = Descent {
        priors,
        states: states
            .iter()
            .map(|s| s.conjugate_by(start))
            .collect::<Result<_>>()?,
        w: start.clone(),
        evaluations: 0,
    };
    let dim = start.rows();
    let mut info = d.information();
    let mut converged = false;
    let mut sweeps = 0;
    while sweeps < opts.max_sweeps {
        sweeps += 1;
        let before = info;
        for a in 0..dim {
            for b in a + 1..dim {
                let old = d.pair_value(a, b, 0.0, 0.0);
                let (theta, phi, new) = d.best_pair_rotation(a, b);
                if new > old + 1e-15 {
                    d.rotate(a, b, theta, phi);
                }
            }
        }
        info = d.information();
        if info - before < opts.tol || chi - info < opts.tol * 1e-2 {
            converged = true;
            break;
        }
    }
    *evaluations += d.evaluations;
    Ok(StartOutcome {
        w: d.w,
        discord: chi - info,
        converged,
        sweeps,
    })
}

/// Discord minimized over projective measurements in an orthonormal basis.
///
/// Coordinate descent over two-level rotations from several starting
/// bases; the computational basis is always the first start, so the result
/// never exceeds the fixed-basis discord.
pub fn minimize_discord(e: &ClassEnsemble, opts: &DiscordOptions) -> Result<DiscordResult> {
    if opts.tol.is_nan() || opts.tol <= 0.0 {
        return Err(Error::InvalidAlgorithm("tolerance must be positive".into()));
    }
    let e = e.reduce_to_measured()?;
    let dim = e.dim();
    let chi = analyze(&e)?.chi;
    let priors = e.weights();
    let states: Vec<ComplexMatrix> = e.classes().iter().map(|c| c.state.clone()).collect();

    let mut starts = vec![ComplexMatrix::identity(dim)];
    if opts.mixture_start {
        starts.push(hermitian_eig(&e.mix())?.eigenvectors.adjoint());
    }
    for s in &opts.extra_starts {
        if s.rows() != dim || s.cols() != dim {
            return Err(Error::DimensionMismatch {
                context: "starting basis",
                expected: dim,
                found: s.rows(),
            });
        }
        s.ensure_unitary()?;
        starts.push(s.clone());
    }
    let mut rng = random::rng(opts.seed);
    for _ in 0..opts.restarts {
        starts.push(random::haar_unitary(dim, &mut rng));
    }

    let mut evaluations = 0;
    let mut start_values = Vec::with_capacity(starts.len());
    let mut best: Option<(usize, StartOutcome)> = None;
    let mut total_sweeps = 0;
    for (i, start) in starts.iter().enumerate() {
        let outcome = descend(&states, &priors, chi, start, opts, &mut evaluations)?;
        total_sweeps += outcome.sweeps;
        start_values.push(outcome.discord);
        if best
            .as_ref()
            .is_none_or(|(_, b)| outcome.discord < b.discord)
        {
            best = Some((i, outcome));
        }
        if best
            .as_ref()
            .is_some_and(|(_, b)| b.discord <= opts.tol * 1e-2)
        {
            break;
        }
    }
    let (best_start, outcome) = best.expect("at least one start");
    let basis = MeasurementBasis::new(outcome.w)?;
    let d_min = analyze(&basis.rotate(&e)?)?.discord;
    Ok(DiscordResult {
        basis,
        d_min,
        converged: outcome.converged,
        start_values,
        best_start,
        sweeps: total_sweeps,
        evaluations,
    })
}

/// `χ - D_min`: the most mutual information any projective measurement of
/// the post-query ensemble can yield.
pub fn i_max(e: &ClassEnsemble, opts: &DiscordOptions) -> Result<IMaxResult> {
    let reduced = e.reduce_to_measured()?;
    let chi = analyze(&reduced)?.chi;
    let r = minimize_discord(&reduced, opts)?;
    Ok(IMaxResult {
        i_max: chi - r.d_min,
        chi,
        d_min: r.d_min,
        converged: r.converged,
    })
}
