use serde::{Deserialize, Serialize};

use super::SdpProblem;
use crate::error::Result;
use crate::spectral::{PsdProjector, SymMatrix};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverOptions {
    /// Relative primal and dual residual target.
    pub tol: f64,
    pub max_iters: usize,
    /// Multiplier on the initial penalty `||A||_F / n`.
    pub step: f64,
    /// Over-relaxation factor in `(0, 2)`.
    pub relaxation: f64,
    /// Iterations between polishing attempts; 0 turns polishing off.
    pub polish_every: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            tol: 1e-6,
            max_iters: 4000,
            step: 1.0,
            relaxation: 1.6,
            polish_every: 20,
        }
    }
}

const MAX_ADAPTATIONS: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SolveStatus {
    Converged,
    MaxIters,
}

#[derive(Clone, Debug)]
pub struct SdpSolution {
    /// Iterate satisfying the affine and box constraints exactly.
    pub matrix: SymMatrix,
    pub objective: f64,
    /// `||X - Z||_F` relative to the iterate scale, `X` being the PSD block.
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub iterations: usize,
    pub status: SolveStatus,
    /// Whether convergence came from a polishing candidate.
    pub polished: bool,
}

/// A candidate primal point and the unscaled multiplier matrix of the
/// affine and box constraints, i.e. `A + S` for a dual slack `S`.
pub type PolishCandidate = (SymMatrix, SymMatrix);

#[derive(Clone)]
struct State {
    z: SymMatrix,
    u: SymMatrix,
    rho: f64,
    primal: f64,
    dual: f64,
}

struct Admm<'a> {
    prob: &'a SdpProblem,
    a_norm: f64,
    alpha: f64,
    // With zero mass every feasible point has the all-ones vector in its
    // kernel and the problem has no strictly feasible point, so the dual is
    // not attained and plain ADMM drifts. Solving on that face instead fixes it.
    centered: bool,
    projector: PsdProjector,
}

impl Admm<'_> {
    fn step(&mut self, st: &mut State) -> Result<()> {
        let a = &self.prob.data;
        // X = P_psd(Z - U + A / rho)
        let mut v = st.z.clone();
        v.axpy(-1.0, &st.u);
        v.axpy(1.0 / st.rho, a);
        if self.centered {
            v.double_center();
        }
        let x = self.projector.project(&v)?;

        // relaxed point and Z-update
        let mut w = x.scale(self.alpha);
        w.axpy(1.0 - self.alpha, &st.z);
        let mut z_new = w.clone();
        z_new.axpy(1.0, &st.u);
        self.prob.project(&mut z_new);

        // U += relaxed - Z
        st.u.axpy(1.0, &w);
        st.u.axpy(-1.0, &z_new);

        let r = (&x - &z_new).frobenius_norm();
        let s = st.rho * (&z_new - &st.z).frobenius_norm();
        st.z = z_new;

        let scale = x.frobenius_norm().max(st.z.frobenius_norm()).max(1.0);
        st.primal = r / scale;
        st.dual = s / (st.rho * st.u.frobenius_norm()).max(self.a_norm * 1e-3);
        Ok(())
    }
}

/// Two-block ADMM on `min -<A, X> + I_psd(X) + I_C(Z)` s.t. `X = Z`, with
/// scaled duals and residual balancing of the penalty.
pub fn solve(prob: &SdpProblem, opts: &SolverOptions) -> Result<SdpSolution> {
    solve_polished(prob, opts, |_| None)
}

/// [`solve`] with periodic polishing. Every `opts.polish_every` iterations
/// `polish` maps the current iterate to a candidate KKT pair; one ADMM step is
/// taken from it and kept if it meets the tolerance, otherwise the run resumes
/// from where it was.
pub fn solve_polished<P>(prob: &SdpProblem, opts: &SolverOptions, mut polish: P) -> Result<SdpSolution>
where
    P: FnMut(&SymMatrix) -> Option<PolishCandidate>,
{
    prob.check_feasible()?;
    let n = prob.n();
    if let Some(y) = prob.unique_point() {
        let objective = prob.objective(&y);
        return Ok(SdpSolution {
            matrix: y,
            objective,
            primal_residual: 0.0,
            dual_residual: 0.0,
            iterations: 0,
            status: SolveStatus::Converged,
            polished: false,
        });
    }
    let a_norm = prob.data.frobenius_norm().max(1.0);
    let mut admm = Admm {
        prob,
        a_norm,
        alpha: opts.relaxation,
        centered: prob.zero_mass(),
        projector: PsdProjector::new(n),
    };
    let mut z = SymMatrix::identity(n);
    prob.project(&mut z);
    let mut st = State {
        z,
        u: SymMatrix::zeros(n),
        rho: opts.step * a_norm / n.max(1) as f64,
        primal: f64::INFINITY,
        dual: f64::INFINITY,
    };
    let converged = |st: &State| st.primal <= opts.tol && st.dual <= opts.tol;

    let mut iterations = 0;
    let mut status = SolveStatus::MaxIters;
    let mut polished = false;
    let mut adaptations = 0;
    for it in 1..=opts.max_iters {
        iterations = it;
        admm.step(&mut st)?;
        if converged(&st) {
            status = SolveStatus::Converged;
            break;
        }
        if opts.polish_every > 0 && it % opts.polish_every == 0 {
            if let Some((y, m)) = polish(&st.z) {
                let mut trial = State {
                    z: y,
                    u: m.scale(1.0 / st.rho),
                    ..st.clone()
                };
                admm.step(&mut trial)?;
                if converged(&trial) {
                    st = trial;
                    status = SolveStatus::Converged;
                    polished = true;
                    break;
                }
            }
        }
        // a bounded number of penalty changes keeps the fixed-penalty
        // convergence guarantee for the tail of the run
        if it % 10 == 0 && adaptations < MAX_ADAPTATIONS {
            if st.primal > 10.0 * st.dual {
                st.rho *= 2.0;
                st.u = st.u.scale(0.5);
                adaptations += 1;
            } else if st.dual > 10.0 * st.primal {
                st.rho *= 0.5;
                st.u = st.u.scale(2.0);
                adaptations += 1;
            }
        }
    }
    let objective = prob.objective(&st.z);
    Ok(SdpSolution {
        matrix: st.z,
        objective,
        primal_residual: st.primal,
        dual_residual: st.dual,
        iterations,
        status,
        polished,
    })
}
