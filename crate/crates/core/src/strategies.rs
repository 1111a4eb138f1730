//! Finite-n discrimination: Helstrom errors of parallel product strategies,
//! replay of scripted adaptive protocols, an exact dynamic program for
//! classical channel pairs, and a sampling check of the non-adaptive floor.
//!
//! Conventions: symmetric errors use the uniform prior, so the Bayes error is
//! (type1 + type2) / 2. The classical optima minimize
//! 2^{an} type1 + 2^{bn} type2, which at a = b = 0 is twice the Bayes error.

use rayon::prelude::*;

use crate::bounds::{error_lower_bound, PositiveCombination};
use crate::channels::{KrausChannel, DEFAULT_TENSOR_DIM_CAP};
use crate::divergences::OverlapProfile;
use crate::error::{Error, Result};
use crate::exponents::pair_chernoff;
use crate::linalg::{random, same_dim, ComplexMatrix, DensityMatrix, HermitianOperator, C64};

/// Cap on the number of leaves the classical dynamic program may visit.
pub const LEAF_CAP: usize = 10_000_000;
const STOCHASTIC_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ErrorReport {
    /// Deciding for the second hypothesis when the first holds.
    pub type1: f64,
    pub type2: f64,
    pub bayes: f64,
    pub n: usize,
}

/// 1/2 (1 - 1/2 ||rho - sigma||_1).
pub fn helstrom_error(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    Ok(helstrom_report(rho, sigma, 1)?.bayes)
}

/// Optimal symmetric test: accept rho on the positive part of rho - sigma.
pub fn helstrom_report(rho: &DensityMatrix, sigma: &DensityMatrix, n: usize) -> Result<ErrorReport> {
    same_dim(rho, sigma)?;
    let diff = HermitianOperator::from_hermitian_part(&(rho.matrix() - sigma.matrix()));
    let e = diff.eig();
    let (mut accept_rho, mut accept_rho_under_sigma) = (0.0, 0.0);
    for (k, &l) in e.eigenvalues.iter().enumerate() {
        if l <= 0.0 {
            continue;
        }
        let v = e.vector(k);
        accept_rho += expectation(rho.matrix(), &v);
        accept_rho_under_sigma += expectation(sigma.matrix(), &v);
    }
    let type1 = (1.0 - accept_rho).clamp(0.0, 1.0);
    let type2 = accept_rho_under_sigma.clamp(0.0, 1.0);
    Ok(ErrorReport {
        type1,
        type2,
        bayes: 0.5 * (type1 + type2),
        n,
    })
}

fn expectation(m: &ComplexMatrix, v: &[C64]) -> f64 {
    crate::linalg::dot(v, &m.matvec(v)).re
}

/// min_T wa Tr (I - T) rho + wb Tr T sigma = (wa + wb - ||wa rho - wb sigma||_1) / 2.
pub fn weighted_error(rho: &DensityMatrix, sigma: &DensityMatrix, wa: f64, wb: f64) -> Result<f64> {
    same_dim(rho, sigma)?;
    let d = &rho.matrix().scale_real(wa) - &sigma.matrix().scale_real(wb);
    Ok(0.5 * (wa + wb - crate::linalg::trace_norm(&d)?))
}

/// Product inputs, one per channel use.
#[derive(Clone, Debug)]
pub struct ParallelStrategy {
    pub inputs: Vec<DensityMatrix>,
}

impl ParallelStrategy {
    pub fn new(inputs: Vec<DensityMatrix>) -> Result<Self> {
        if inputs.is_empty() {
            return Err(Error::ParameterOutOfRange {
                name: "n",
                value: 0.0,
                range: "n >= 1",
            });
        }
        Ok(Self { inputs })
    }

    pub fn repeated(input: DensityMatrix, n: usize) -> Result<Self> {
        Self::new(vec![input; n])
    }

    pub fn n(&self) -> usize {
        self.inputs.len()
    }
}

fn check_pair(m: &KrausChannel, mbar: &KrausChannel) -> Result<()> {
    if m.in_dim() != mbar.in_dim() || m.out_dim() != mbar.out_dim() {
        return Err(Error::DimensionMismatch(format!(
            "channels {}->{} and {}->{}",
            m.in_dim(),
            m.out_dim(),
            mbar.in_dim(),
            mbar.out_dim()
        )));
    }
    Ok(())
}

fn check_output_dim(dim: usize, n: usize, cap: usize) -> Result<()> {
    let need = dim.checked_pow(n as u32).unwrap_or(usize::MAX);
    if need > cap {
        return Err(Error::BudgetExceeded {
            what: "n-fold output dimension",
            requested: need,
            cap,
        });
    }
    Ok(())
}

/// Helstrom error of the two n-fold outputs for the given product input.
pub fn parallel_error(
    m: &KrausChannel,
    mbar: &KrausChannel,
    strat: &ParallelStrategy,
    cap: usize,
) -> Result<ErrorReport> {
    check_pair(m, mbar)?;
    check_output_dim(m.out_dim(), strat.n(), cap)?;
    let mut outs = (Vec::new(), Vec::new());
    for rho in &strat.inputs {
        outs.0.push(m.apply(rho)?);
        outs.1.push(mbar.apply(rho)?);
    }
    let fold = |v: &[DensityMatrix]| v[1..].iter().fold(v[0].clone(), |acc, x| acc.kron(x));
    helstrom_report(&fold(&outs.0), &fold(&outs.1), strat.n())
}

/// How the input of the next channel use is produced.
#[derive(Clone, Debug)]
pub enum ScriptStep {
    /// Fresh input; the previous output is kept for the final measurement.
    Fresh(DensityMatrix),
    /// The previous output is mapped to the next input (and consumed).
    Feed(KrausChannel),
}

#[derive(Clone, Debug)]
pub struct AdaptiveScript {
    pub initial_input: DensityMatrix,
    pub steps: Vec<ScriptStep>,
}

impl AdaptiveScript {
    pub fn n(&self) -> usize {
        1 + self.steps.len()
    }
}

fn run_branch(ch: &KrausChannel, script: &AdaptiveScript) -> Result<DensityMatrix> {
    let in_dim = ch.in_dim();
    let check_input = |rho: &DensityMatrix| {
        if rho.dim() == in_dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch(format!(
                "script input of dim {} for a channel with input dim {in_dim}",
                rho.dim()
            )))
        }
    };
    check_input(&script.initial_input)?;
    let mut kept: Vec<DensityMatrix> = Vec::new();
    let mut current = ch.apply(&script.initial_input)?;
    for step in &script.steps {
        let next_input = match step {
            ScriptStep::Fresh(rho) => {
                kept.push(current);
                rho.clone()
            }
            ScriptStep::Feed(f) => {
                if f.in_dim() != current.dim() {
                    return Err(Error::DimensionMismatch(format!(
                        "feedback map takes dim {} but the previous output has dim {}",
                        f.in_dim(),
                        current.dim()
                    )));
                }
                f.apply(&current)?
            }
        };
        check_input(&next_input)?;
        current = ch.apply(&next_input)?;
    }
    Ok(kept.iter().rev().fold(current, |acc, k| k.kron(&acc)))
}

/// Runs both hypotheses through the script; Helstrom on the terminal states.
pub fn run_adaptive_script(m: &KrausChannel, mbar: &KrausChannel, script: &AdaptiveScript) -> Result<ErrorReport> {
    check_pair(m, mbar)?;
    helstrom_report(&run_branch(m, script)?, &run_branch(mbar, script)?, script.n())
}

/// Two-use protocol for the Harrow channels: send |00> on A C, then the
/// first output on A with C = |1>. Terminal outputs are |0> and |1>.
pub fn harrow_adaptive_script() -> AdaptiveScript {
    let one_c = ComplexMatrix::from_fn(4, 2, |row, col| {
        // |a>_A -> |a>_A |1>_C, index 2a + c
        if row == 2 * col + 1 {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    AdaptiveScript {
        initial_input: DensityMatrix::basis(4, 0),
        steps: vec![ScriptStep::Feed(KrausChannel::new(vec![one_c]).expect("isometry"))],
    }
}

/// Two classical channels x -> W_x, x -> Wbar_x on the same alphabets.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassicalChannelPair {
    pub w: Vec<Vec<f64>>,
    pub wbar: Vec<Vec<f64>>,
}

impl ClassicalChannelPair {
    pub fn new(w: Vec<Vec<f64>>, wbar: Vec<Vec<f64>>) -> Result<Self> {
        let shape = |m: &[Vec<f64>]| (m.len(), m.first().map_or(0, |r| r.len()));
        if shape(&w) != shape(&wbar) || w.is_empty() || w[0].is_empty() {
            return Err(Error::DimensionMismatch(format!(
                "classical channels of shapes {:?} and {:?}",
                shape(&w),
                shape(&wbar)
            )));
        }
        for m in [&w, &wbar] {
            for row in m.iter() {
                if row.len() != w[0].len() {
                    return Err(Error::DimensionMismatch("ragged stochastic matrix".into()));
                }
                if let Some(&x) = row.iter().find(|x| !(**x >= 0.0)) {
                    return Err(Error::InvalidClassicalChannel {
                        invariant: "nonnegative entries",
                        residual: x,
                    });
                }
                let res = (row.iter().sum::<f64>() - 1.0).abs();
                if res > STOCHASTIC_TOL {
                    return Err(Error::InvalidClassicalChannel {
                        invariant: "row sums equal 1",
                        residual: res,
                    });
                }
            }
        }
        Ok(Self { w, wbar })
    }

    pub fn inputs(&self) -> usize {
        self.w.len()
    }

    pub fn outputs(&self) -> usize {
        self.w[0].len()
    }

    /// sup_x sup_alpha -log2 sum_y W_x(y)^alpha Wbar_x(y)^(1-alpha).
    pub fn chernoff_exponent(&self) -> f64 {
        self.w
            .iter()
            .zip(&self.wbar)
            .map(|(p, q)| pair_chernoff(&OverlapProfile::classical(p, q), 0.0, 0.0).0)
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

fn leaf_budget(branching: usize, n: usize) -> Result<()> {
    let leaves = branching.checked_pow(n as u32).unwrap_or(usize::MAX);
    if leaves > LEAF_CAP {
        return Err(Error::BudgetExceeded {
            what: "classical dynamic program leaves",
            requested: leaves,
            cap: LEAF_CAP,
        });
    }
    Ok(())
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::ParameterOutOfRange {
            name: "n",
            value: 0.0,
            range: "n >= 1",
        });
    }
    Ok(())
}

struct Dp<'a> {
    pair: &'a ClassicalChannelPair,
    wa: f64,
    wb: f64,
    n: usize,
}

impl Dp<'_> {
    /// Best continuation from a history with likelihoods (l, lbar) after `k` uses.
    fn adaptive(&self, l: f64, lbar: f64, k: usize) -> f64 {
        if k == self.n {
            return (self.wa * l).min(self.wb * lbar);
        }
        (0..self.pair.inputs())
            .map(|x| self.letter(x, l, lbar, k, true))
            .fold(f64::INFINITY, f64::min)
    }

    fn letter(&self, x: usize, l: f64, lbar: f64, k: usize, adapt: bool) -> f64 {
        let (p, q) = (&self.pair.w[x], &self.pair.wbar[x]);
        p.iter()
            .zip(q)
            .map(|(py, qy)| {
                let (nl, nb) = (l * py, lbar * qy);
                if nl == 0.0 && nb == 0.0 {
                    0.0
                } else if adapt {
                    self.adaptive(nl, nb, k + 1)
                } else if k + 1 == self.n {
                    (self.wa * nl).min(self.wb * nb)
                } else {
                    self.letter(x, nl, nb, k + 1, false)
                }
            })
            .sum()
    }
}

/// min over deterministic adaptive input policies and final tests of
/// 2^{an} type1 + 2^{bn} type2 (twice the Bayes error at a = b = 0).
pub fn classical_adaptive_optimum(pair: &ClassicalChannelPair, n: usize, a: f64, b: f64) -> Result<f64> {
    check_n(n)?;
    leaf_budget(pair.inputs() * pair.outputs(), n)?;
    let dp = Dp {
        pair,
        wa: (a * n as f64).exp2(),
        wb: (b * n as f64).exp2(),
        n,
    };
    Ok(dp.adaptive(1.0, 1.0, 0))
}

/// Same objective over constant-input policies: the best letter used n times.
pub fn classical_parallel_optimum(pair: &ClassicalChannelPair, n: usize, a: f64, b: f64) -> Result<f64> {
    check_n(n)?;
    leaf_budget(pair.inputs() * pair.outputs(), n)?;
    let dp = Dp {
        pair,
        wa: (a * n as f64).exp2(),
        wb: (b * n as f64).exp2(),
        n,
    };
    Ok((0..pair.inputs())
        .map(|x| dp.letter(x, 1.0, 1.0, 0, false))
        .fold(f64::INFINITY, f64::min))
}

#[derive(Clone, Debug, PartialEq)]
pub struct FloorReport {
    pub n: usize,
    pub samples: usize,
    /// lambda_min^{4n} / 4
    pub floor: f64,
    pub min_error: f64,
    /// Samples with error below floor - 1e-9.
    pub violations: usize,
}

impl FloorReport {
    pub fn holds(&self) -> bool {
        self.violations == 0
    }
}

/// Helstrom errors of (id_R ⊗ M^{⊗n}) vs (id_R ⊗ Mbar^{⊗n}) on Haar-random
/// pure inputs with dim R = dim A^n, compared with the floor of `pc`.
/// Sample k draws from stream k of `seed`.
pub fn nonadaptive_floor_check(
    m: &KrausChannel,
    mbar: &KrausChannel,
    pc: &PositiveCombination,
    n: usize,
    samples: usize,
    seed: u64,
) -> Result<FloorReport> {
    check_pair(m, mbar)?;
    let floor = error_lower_bound(pc, n)?;
    let mn = m.tensor_power(n, DEFAULT_TENSOR_DIM_CAP)?;
    let mbn = mbar.tensor_power(n, DEFAULT_TENSOR_DIM_CAP)?;
    let ref_dim = mn.in_dim();
    check_output_dim(ref_dim * mn.out_dim(), 1, DEFAULT_TENSOR_DIM_CAP)?;
    let errors = (0..samples)
        .into_par_iter()
        .map(|k| {
            let mut rng = random::stream_rng(seed, k as u64);
            let psi = random::haar_vector(ref_dim * mn.in_dim(), &mut rng);
            helstrom_error(
                &mn.apply_extended_pure(&psi, ref_dim)?,
                &mbn.apply_extended_pure(&psi, ref_dim)?,
            )
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(FloorReport {
        n,
        samples,
        floor,
        min_error: errors.iter().copied().fold(f64::INFINITY, f64::min),
        violations: errors.iter().filter(|&&e| e < floor - 1e-9).count(),
    })
}
