//! The sparsest-fit pipeline.
//!
//! Cells of the marginal are grouped by value and processed in ascending
//! order. Each group value either equals a subset sum of the values
//! discovered so far — then the subset's members all occupy the group's
//! cells — or it registers a new support value. Afterwards, each discovered
//! value's accumulated cells form the matching of one support permutation,
//! which is inverted and the whole candidate re-checked against the input.
//! Any failure along the way aborts with a certificate naming the stage;
//! the pipeline never returns an unverified function.

use num_rational::BigRational;
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;

use crate::error::Result;
use crate::marginals::{fourier_coefficient, MarginalMatrix, SparseSupportFunction};
use crate::scalar::{Scalar, Tolerance, ValueMode};
use crate::sparsest_fit::condition::check_unique_witness;
use crate::sparsest_fit::reconstruct::reconstruct_permutation;
use crate::sparsest_fit::subset::{ExactDomain, FloatDomain, Pool, SubsetOutcome, SumDomain};
use crate::symgroup::{Permutation, DEFAULT_DLAMBDA_CAP};

/// Node budget for each group's subset search.
pub const DEFAULT_SUBSET_BUDGET: u64 = 10_000_000;

/// One distinct cell value and every cell carrying it.
#[derive(Clone, PartialEq, Debug)]
pub struct ValueGroup {
    pub value: Scalar,
    /// (row, col), sorted.
    pub cells: Vec<(u64, u64)>,
}

/// Where an abort was raised.
#[derive(Copy, Clone, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AbortStage {
    SubsetMatchAmbiguous,
    SubsetBudgetExceeded,
    MembershipMalformed,
    ReconstructionFailed,
    VerificationFailed,
}

impl fmt::Display for AbortStage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self {
            AbortStage::SubsetMatchAmbiguous => "subset-match-ambiguous",
            AbortStage::SubsetBudgetExceeded => "subset-budget-exceeded",
            AbortStage::MembershipMalformed => "membership-malformed",
            AbortStage::ReconstructionFailed => "reconstruction-failed",
            AbortStage::VerificationFailed => "verification-failed",
        };
        f.write_str(tag)
    }
}

#[derive(Clone, PartialEq, Debug, Serialize)]
pub struct AbortCertificate {
    pub stage: AbortStage,
    pub detail: String,
    /// 1-based ordinal of the offending value group, when one is at fault.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value_index: Option<u64>,
}

/// One discovered support value before reconstruction: p_k plus A_k, the
/// 0-based indices of the groups whose cells it occupies.
#[derive(Clone, PartialEq, Debug)]
pub struct FitComponent {
    pub value: Scalar,
    pub groups: Vec<usize>,
}

#[derive(Clone, PartialEq, Debug)]
pub enum CoreOutcome {
    Fit(Vec<FitComponent>),
    Abort(AbortCertificate),
}

/// A fully reconstructed support entry.
#[derive(Clone, PartialEq, Debug)]
pub struct RecoveredComponent {
    pub value: Scalar,
    pub groups: Vec<usize>,
    pub sigma: Permutation,
}

#[derive(Clone, PartialEq, Debug)]
pub enum RecoveryResult {
    Recovered {
        components: Vec<RecoveredComponent>,
        function: SparseSupportFunction,
    },
    Aborted(AbortCertificate),
}

impl RecoveryResult {
    pub fn function(&self) -> Option<&SparseSupportFunction> {
        match self {
            RecoveryResult::Recovered { function, .. } => Some(function),
            RecoveryResult::Aborted(_) => None,
        }
    }

    pub fn certificate(&self) -> Option<&AbortCertificate> {
        match self {
            RecoveryResult::Recovered { .. } => None,
            RecoveryResult::Aborted(c) => Some(c),
        }
    }
}

#[derive(Clone, Debug)]
pub struct RecoverOptions {
    pub tol: Tolerance,
    pub subset_budget: u64,
    pub cap: u64,
}

impl Default for RecoverOptions {
    fn default() -> Self {
        RecoverOptions {
            tol: Tolerance::default(),
            subset_budget: DEFAULT_SUBSET_BUDGET,
            cap: DEFAULT_DLAMBDA_CAP,
        }
    }
}

/// Groups cells by value, ascending. Exact mode groups by equality; float
/// mode sorts and merges values whose neighbours lie within the tolerance
/// chain, keeping the smallest member as the group's representative.
pub fn build_value_groups(m: &MarginalMatrix, tol: &Tolerance) -> Vec<ValueGroup> {
    match m.mode() {
        ValueMode::Exact => {
            let mut by_value: BTreeMap<BigRational, Vec<(u64, u64)>> = BTreeMap::new();
            for (&cell, v) in m.iter() {
                by_value
                    .entry(v.as_exact().unwrap().clone())
                    .or_default()
                    .push(cell);
            }
            by_value
                .into_iter()
                .map(|(v, cells)| ValueGroup {
                    value: Scalar::Exact(v),
                    cells,
                })
                .collect()
        }
        ValueMode::Float => {
            let mut flat: Vec<(f64, (u64, u64))> = m
                .iter()
                .map(|(&cell, v)| (v.as_float().unwrap(), cell))
                .collect();
            flat.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            let mut groups: Vec<ValueGroup> = Vec::new();
            let mut last = f64::NEG_INFINITY;
            for (v, cell) in flat {
                match groups.last_mut() {
                    Some(g) if tol.close(v, last) => g.cells.push(cell),
                    _ => groups.push(ValueGroup {
                        value: Scalar::Float(v),
                        cells: vec![cell],
                    }),
                }
                last = v;
            }
            for g in &mut groups {
                g.cells.sort_unstable();
            }
            groups
        }
    }
}

/// The iterative core: processes ascending group values, maintaining the
/// discovered values and their group memberships.
pub fn sparsest_fit_core(
    groups: &[ValueGroup],
    tol: &Tolerance,
    subset_budget: u64,
) -> CoreOutcome {
    if groups.is_empty() {
        return CoreOutcome::Fit(Vec::new());
    }
    let run = match groups[0].value.mode() {
        ValueMode::Exact => {
            let targets: Vec<BigRational> = groups
                .iter()
                .map(|g| g.value.as_exact().unwrap().clone())
                .collect();
            run_core(&ExactDomain, |_| ExactDomain, &targets, subset_budget)
        }
        ValueMode::Float => {
            let targets: Vec<f64> = groups.iter().map(|g| g.value.as_float().unwrap()).collect();
            let tol = *tol;
            run_core(
                &FloatDomain { w: tol.abs },
                move |t| FloatDomain { w: tol.window(*t) },
                &targets,
                subset_budget,
            )
        }
    };
    match run {
        Err(cert) => CoreOutcome::Abort(cert),
        Ok(found) => CoreOutcome::Fit(
            found
                .into_iter()
                .map(|(origin, members)| FitComponent {
                    value: groups[origin].value.clone(),
                    groups: members,
                })
                .collect(),
        ),
    }
}

fn run_core<D: SumDomain>(
    base: &D,
    retarget: impl Fn(&D::V) -> D,
    targets: &[D::V],
    subset_budget: u64,
) -> std::result::Result<Vec<(usize, Vec<usize>)>, AbortCertificate> {
    let mut pool: Pool<D::V> = Pool::new();
    let mut found: Vec<(usize, Vec<usize>)> = Vec::new();
    for (l, q) in targets.iter().enumerate() {
        let dom = retarget(q);
        match pool.find(&dom, q, subset_budget) {
            SubsetOutcome::None => {
                let k = found.len() as u32;
                found.push((l, vec![l]));
                pool.push(base, q.clone(), k);
            }
            SubsetOutcome::Unique(subset) => {
                for k in subset {
                    found[k as usize].1.push(l);
                }
            }
            SubsetOutcome::Ambiguous(a, b) => {
                let show = |s: &[u32]| -> String {
                    let ks: Vec<String> = s.iter().map(|k| (k + 1).to_string()).collect();
                    format!("{{{}}}", ks.join(", "))
                };
                return Err(AbortCertificate {
                    stage: AbortStage::SubsetMatchAmbiguous,
                    detail: format!(
                        "value group {} matches the sums of discovered supports {} and {}",
                        l + 1,
                        show(&a),
                        show(&b)
                    ),
                    value_index: Some(l as u64 + 1),
                });
            }
            SubsetOutcome::BudgetExceeded => {
                return Err(AbortCertificate {
                    stage: AbortStage::SubsetBudgetExceeded,
                    detail: format!(
                        "subset search for value group {} exceeded {subset_budget} nodes \
                         without resolving",
                        l + 1
                    ),
                    value_index: Some(l as u64 + 1),
                });
            }
        }
    }
    Ok(found)
}

/// Full recovery: group → fit → reconstruct → verify.
pub fn recover(m: &MarginalMatrix, opts: &RecoverOptions) -> Result<RecoveryResult> {
    let shape = m.shape().clone();
    let d = m.d();
    let groups = build_value_groups(m, &opts.tol);
    let fit = match sparsest_fit_core(&groups, &opts.tol, opts.subset_budget) {
        CoreOutcome::Abort(cert) => return Ok(RecoveryResult::Aborted(cert)),
        CoreOutcome::Fit(components) => components,
    };

    let mut components = Vec::with_capacity(fit.len());
    let mut pairs = Vec::with_capacity(fit.len());
    for (k, comp) in fit.into_iter().enumerate() {
        let mut edges: Vec<(u64, u64)> = Vec::with_capacity(d as usize);
        for &l in &comp.groups {
            edges.extend_from_slice(&groups[l].cells);
        }
        let mut cols: Vec<u64> = edges.iter().map(|&(_, j)| j).collect();
        cols.sort_unstable();
        let coherent =
            cols.len() as u64 == d && cols.iter().enumerate().all(|(j, &c)| c == j as u64);
        if !coherent {
            return Ok(RecoveryResult::Aborted(AbortCertificate {
                stage: AbortStage::MembershipMalformed,
                detail: format!(
                    "support {} occupies {} cells over {} distinct columns; a matching \
                     needs each of the {d} columns exactly once",
                    k + 1,
                    edges.len(),
                    {
                        cols.dedup();
                        cols.len()
                    }
                ),
                value_index: None,
            }));
        }
        let sigma = match reconstruct_permutation(&edges, &shape, opts.cap) {
            Ok(sigma) => sigma,
            Err(e) => {
                return Ok(RecoveryResult::Aborted(AbortCertificate {
                    stage: AbortStage::ReconstructionFailed,
                    detail: format!("support {}: {e}", k + 1),
                    value_index: None,
                }))
            }
        };
        pairs.push((sigma.clone(), comp.value.clone()));
        components.push(RecoveredComponent {
            value: comp.value,
            groups: comp.groups,
            sigma,
        });
    }

    let function = match SparseSupportFunction::new(shape.n(), m.mode(), pairs) {
        Ok(f) => f,
        Err(e) => {
            return Ok(RecoveryResult::Aborted(AbortCertificate {
                stage: AbortStage::ReconstructionFailed,
                detail: format!("assembling the candidate function: {e}"),
                value_index: None,
            }))
        }
    };

    // Self-verification: the candidate must reproduce the input marginal and
    // carry a unique witness per support, or the result is not certified.
    let roundtrip = fourier_coefficient(&function, &shape, opts.cap)?;
    let reproduces = match m.mode() {
        ValueMode::Exact => roundtrip == *m,
        ValueMode::Float => roundtrip.approx_eq(m, &opts.tol),
    };
    if !reproduces {
        return Ok(RecoveryResult::Aborted(AbortCertificate {
            stage: AbortStage::VerificationFailed,
            detail: format!(
                "candidate with {} supports does not reproduce the input marginal",
                function.sparsity()
            ),
            value_index: None,
        }));
    }
    let witness = check_unique_witness(&function, &shape, opts.cap)?;
    if !witness.all_witnessed() {
        return Ok(RecoveryResult::Aborted(AbortCertificate {
            stage: AbortStage::VerificationFailed,
            detail: "candidate reproduces the marginal but lacks a unique witness; the fit \
                     is not certifiably the sparsest"
                .into(),
            value_index: None,
        }));
    }
    Ok(RecoveryResult::Recovered {
        components,
        function,
    })
}
