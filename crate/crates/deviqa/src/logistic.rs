//! Four-parameter monotone logistic mapping from objective scores to the
//! subjective scale, fitted with a derivative-free Nelder-Mead search.
//!
//! The mapped predictions feed the Pearson/RMSE figures; Spearman correlation
//! never goes through this mapping.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pooling;

/// `q(s) = (beta1 - beta2) / (1 + exp(-(s - beta3) / |beta4|)) + beta2`
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogisticParams {
    pub beta1: f64,
    pub beta2: f64,
    pub beta3: f64,
    pub beta4: f64,
    /// Whether the search met its tolerance. A `false` here is data, not an
    /// error: degenerate fits are reported as found.
    pub converged: bool,
    pub iterations: usize,
}

impl LogisticParams {
    pub fn predict(&self, s: f64) -> f64 {
        // |beta4| keeps the curve monotone regardless of the sign the search
        // wanders into; the floor avoids 0/0 at s == beta3.
        let b4 = self.beta4.abs().max(1e-12);
        (self.beta1 - self.beta2) / (1.0 + (-(s - self.beta3) / b4).exp()) + self.beta2
    }
}

/// Initialization shared by the fit and by callers that need a mapping when
/// the fit preconditions do not hold: `beta1 = max(mos)`, `beta2 = min(mos)`,
/// `beta3 = median(objective)`, `beta4 = std(objective) / 4`.
pub fn initial_params(objective: &[f64], mos: &[f64]) -> LogisticParams {
    let b1 = mos.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let b2 = mos.iter().copied().fold(f64::INFINITY, f64::min);
    let mut sorted = objective.to_vec();
    sorted.sort_by(f64::total_cmp);
    let b3 = if sorted.len() % 2 == 1 {
        sorted[sorted.len() / 2]
    } else {
        (sorted[sorted.len() / 2 - 1] + sorted[sorted.len() / 2]) / 2.0
    };
    let b4 = pooling::sd_pool(objective).map(|s| s.value / 4.0).unwrap_or(0.0);
    LogisticParams {
        beta1: b1,
        beta2: b2,
        beta3: b3,
        beta4: b4.max(1e-12),
        converged: false,
        iterations: 0,
    }
}

/// Least-squares fit of the 4-parameter logistic. Requires at least 5 points
/// and a non-constant objective. Never returns a fit worse than the
/// initialization; non-convergence is reported in the result.
pub fn fit_logistic(objective: &[f64], mos: &[f64]) -> Result<LogisticParams> {
    if objective.len() != mos.len() {
        return Err(Error::invalid(format!(
            "objective and mos lengths differ: {} vs {}",
            objective.len(),
            mos.len()
        )));
    }
    if objective.len() < 5 {
        return Err(Error::invalid("logistic fit requires at least 5 points"));
    }
    if objective.iter().chain(mos).any(|v| !v.is_finite()) {
        return Err(Error::invalid("logistic fit inputs must be finite"));
    }
    if objective.iter().all(|&v| v == objective[0]) {
        return Err(Error::invalid("objective scores are constant"));
    }

    let sse = |b: &[f64; 4]| -> f64 {
        let p = LogisticParams {
            beta1: b[0],
            beta2: b[1],
            beta3: b[2],
            beta4: b[3],
            converged: false,
            iterations: 0,
        };
        let mut acc = 0.0;
        for (&s, &m) in objective.iter().zip(mos) {
            let r = p.predict(s) - m;
            acc += r * r;
        }
        if acc.is_finite() {
            acc
        } else {
            f64::INFINITY
        }
    };

    let init = initial_params(objective, mos);
    let mut best = [init.beta1, init.beta2, init.beta3, init.beta4];
    let mut best_f = sse(&best);
    let mut total_iters = 0;
    let mut converged = false;

    // Restarting from the incumbent re-opens the simplex step sizes, which
    // lets the search keep moving along flat valleys (e.g. near-linear data
    // pushing |beta4| up) that a single run stalls in.
    for _ in 0..40 {
        let run = nelder_mead(&sse, best, 2000, 1e-12);
        total_iters += run.iterations;
        let improved = run.f < best_f * (1.0 - 1e-9) - f64::MIN_POSITIVE;
        if run.f < best_f {
            best = run.x;
            best_f = run.f;
        }
        converged = run.converged;
        if run.converged && !improved {
            break;
        }
    }

    Ok(LogisticParams {
        beta1: best[0],
        beta2: best[1],
        beta3: best[2],
        beta4: best[3],
        converged,
        iterations: total_iters,
    })
}

struct NmOutcome {
    x: [f64; 4],
    f: f64,
    iterations: usize,
    converged: bool,
}

/// Standard Nelder-Mead over 4 parameters (reflection 1, expansion 2,
/// contraction 0.5, shrink 0.5).
fn nelder_mead<F: Fn(&[f64; 4]) -> f64>(f: &F, start: [f64; 4], max_iter: usize, ftol: f64) -> NmOutcome {
    const DIM: usize = 4;
    let mut simplex: Vec<[f64; 4]> = Vec::with_capacity(DIM + 1);
    simplex.push(start);
    for i in 0..DIM {
        let mut p = start;
        let step = if p[i].abs() > 1e-8 { 0.05 * p[i] } else { 0.1 };
        p[i] += step;
        simplex.push(p);
    }
    let mut values: Vec<f64> = simplex.iter().map(f).collect();

    let mut iterations = 0;
    let mut converged = false;
    while iterations < max_iter {
        iterations += 1;

        let mut order: Vec<usize> = (0..=DIM).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        let best = order[0];
        let worst = order[DIM];
        let second_worst = order[DIM - 1];

        // relative spread so near-perfect fits keep descending instead of
        // stopping at an absolute floor
        if (values[worst] - values[best]).abs() <= ftol * values[best].abs() + 1e-300 {
            converged = true;
            break;
        }

        let mut centroid = [0.0; 4];
        for &i in order.iter().take(DIM) {
            for d in 0..DIM {
                centroid[d] += simplex[i][d];
            }
        }
        for c in &mut centroid {
            *c /= DIM as f64;
        }

        let reflect = |scale: f64| -> [f64; 4] {
            let mut p = [0.0; 4];
            for d in 0..DIM {
                p[d] = centroid[d] + scale * (centroid[d] - simplex[worst][d]);
            }
            p
        };

        let xr = reflect(1.0);
        let fr = f(&xr);
        if fr < values[second_worst] && fr >= values[best] {
            simplex[worst] = xr;
            values[worst] = fr;
            continue;
        }
        if fr < values[best] {
            let xe = reflect(2.0);
            let fe = f(&xe);
            if fe < fr {
                simplex[worst] = xe;
                values[worst] = fe;
            } else {
                simplex[worst] = xr;
                values[worst] = fr;
            }
            continue;
        }
        let xc = reflect(-0.5);
        let fc = f(&xc);
        if fc < values[worst] {
            simplex[worst] = xc;
            values[worst] = fc;
            continue;
        }
        // shrink toward the best vertex
        let anchor = simplex[best];
        for &i in order.iter().skip(1) {
            for d in 0..DIM {
                simplex[i][d] = anchor[d] + 0.5 * (simplex[i][d] - anchor[d]);
            }
            values[i] = f(&simplex[i]);
        }
    }

    let (mut bi, mut bf) = (0, values[0]);
    for (i, &v) in values.iter().enumerate() {
        if v < bf {
            bi = i;
            bf = v;
        }
    }
    NmOutcome {
        x: simplex[bi],
        f: bf,
        iterations,
        converged,
    }
}
