//! End-to-end computation: one order of the blowup, and the loop that raises
//! the order until every essential chart is smooth.

use std::time::Duration;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{NashError, Result};
use crate::lattice_geometry::{origin_certificate, zspan_is_full};
use crate::minors::{nonzero_minor_exponents, ExponentSet, SearchConfig, SearchMode, SearchStats};
use crate::monomial_jacobian::{build_coeff_matrix, GeneratorMatrix, Point};
use crate::semigroup::{analyze_chart, Chart};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PipelineConfig {
    pub mode: SearchMode,
    pub node_budget: Option<u64>,
    pub time_budget: Option<Duration>,
    /// Worker threads; `None` uses the global rayon pool.
    pub threads: Option<usize>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        let search = SearchConfig::default();
        PipelineConfig {
            mode: search.mode,
            node_budget: search.node_budget,
            time_budget: search.time_budget,
            threads: None,
        }
    }
}

impl PipelineConfig {
    fn search(&self) -> SearchConfig {
        SearchConfig {
            mode: self.mode,
            node_budget: self.node_budget,
            time_budget: self.time_budget,
        }
    }

    fn run<T: Send>(&self, f: impl FnOnce() -> T + Send) -> Result<T> {
        match self.threads {
            None => Ok(f()),
            Some(k) => {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(k)
                    .build()
                    .map_err(|e| NashError::Input(format!("cannot start {k} threads: {e}")))?;
                Ok(pool.install(f))
            }
        }
    }
}

/// How exponents in a report are expressed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExponentForm {
    /// Shifted by `-σ_n`.
    #[default]
    Canonical,
    /// Sums of generator columns, `m_J = Aβ_1 + ⋯ + Aβ_D`.
    Raw,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepReport {
    pub order: u32,
    /// `M = C(n+s, s) - 1`.
    pub rows: usize,
    /// `D = C(n+d, d) - 1`.
    pub cols: usize,
    pub exponent_form: ExponentForm,
    pub shift: Point,
    pub exponents: Vec<Point>,
    pub charts: Vec<Chart>,
    pub essential_count: usize,
    pub all_smooth: bool,
    pub stats: SearchStats,
}

impl StepReport {
    pub fn essential_charts(&self) -> impl Iterator<Item = &Chart> {
        self.charts.iter().filter(|c| c.essential)
    }

    /// Re-expresses exponents and chart centers in the requested form.
    /// Chart generators are differences and do not change.
    pub fn with_form(mut self, form: ExponentForm) -> Self {
        if form == self.exponent_form {
            return self;
        }
        let sign = match form {
            ExponentForm::Raw => 1,
            ExponentForm::Canonical => -1,
        };
        let shift = self.shift.clone();
        let move_point = |p: &mut Point| {
            for (x, s) in p.iter_mut().zip(&shift) {
                *x += sign * s;
            }
        };
        self.exponents.iter_mut().for_each(move_point);
        self.charts
            .iter_mut()
            .for_each(|c| move_point(&mut c.center));
        self.exponent_form = form;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Verdict {
    SmoothAtOrder {
        order: u32,
    },
    BudgetExhausted {
        max_order: u32,
        /// Set when a step was cut short by the search budget.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        error: Option<String>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolutionReport {
    pub generators: GeneratorMatrix,
    pub steps: Vec<StepReport>,
    pub verdict: Verdict,
}

impl ResolutionReport {
    pub fn with_form(mut self, form: ExponentForm) -> Self {
        self.steps = self.steps.into_iter().map(|s| s.with_form(form)).collect();
        self
    }
}

/// Checks the standing hypotheses: the generators span `Z^d` and their
/// convex hull avoids the origin.
pub fn validate_input(a: &GeneratorMatrix) -> Result<()> {
    if !zspan_is_full(a.columns()) {
        return Err(NashError::Input(
            "generators do not span the full integer lattice".into(),
        ));
    }
    if let Some(lambda) = origin_certificate(a.columns())? {
        let combo: Vec<String> = lambda
            .iter()
            .zip(a.columns())
            .filter(|(l, _)| !num_traits::Zero::is_zero(*l))
            .map(|(l, p)| format!("{l}*{p:?}"))
            .collect();
        return Err(NashError::Input(format!(
            "generator set is not essential: 0 = {}",
            combo.join(" + ")
        )));
    }
    Ok(())
}

/// Exponent set for one order, without chart analysis.
pub fn exponent_set(
    a: &GeneratorMatrix,
    n: u32,
    config: &PipelineConfig,
) -> Result<(ExponentSet, SearchStats)> {
    config.run(|| {
        let l = build_coeff_matrix(a, n)?;
        nonzero_minor_exponents(&l, &config.search())
    })?
}

/// One order of the blowup: exponent set and every chart.
pub fn nash_step(a: &GeneratorMatrix, n: u32, config: &PipelineConfig) -> Result<StepReport> {
    validate_input(a)?;
    step_unchecked(a, n, config)
}

fn step_unchecked(a: &GeneratorMatrix, n: u32, config: &PipelineConfig) -> Result<StepReport> {
    config.run(|| {
        let l = build_coeff_matrix(a, n)?;
        let (rows, cols) = (l.num_rows(), l.num_cols());
        let (s, stats) = nonzero_minor_exponents(&l, &config.search())?;
        let charts = s
            .elements
            .par_iter()
            .map(|m| analyze_chart(a, &s, m))
            .collect::<Result<Vec<_>>>()?;
        let essential_count = charts.iter().filter(|c| c.essential).count();
        let all_smooth = charts
            .iter()
            .filter(|c| c.essential)
            .all(|c| c.smooth == Some(true));
        Ok(StepReport {
            order: n,
            rows,
            cols,
            exponent_form: ExponentForm::Canonical,
            shift: s.shift,
            exponents: s.elements,
            charts,
            essential_count,
            all_smooth,
            stats,
        })
    })?
}

/// Runs orders `1..=max_order` on the same generators, stopping at the first
/// order whose essential charts are all smooth.
pub fn resolve(
    a: &GeneratorMatrix,
    max_order: u32,
    config: &PipelineConfig,
) -> Result<ResolutionReport> {
    if max_order == 0 {
        return Err(NashError::Input("max order must be at least 1".into()));
    }
    validate_input(a)?;
    let mut steps = Vec::new();
    for n in 1..=max_order {
        let step = match step_unchecked(a, n, config) {
            Ok(step) => step,
            Err(e @ NashError::BudgetExceeded { .. }) => {
                return Ok(ResolutionReport {
                    generators: a.clone(),
                    steps,
                    verdict: Verdict::BudgetExhausted {
                        max_order,
                        error: Some(format!("order {n}: {e}")),
                    },
                });
            }
            Err(e) => return Err(e),
        };
        let smooth = step.all_smooth;
        steps.push(step);
        if smooth {
            return Ok(ResolutionReport {
                generators: a.clone(),
                steps,
                verdict: Verdict::SmoothAtOrder { order: n },
            });
        }
    }
    Ok(ResolutionReport {
        generators: a.clone(),
        steps,
        verdict: Verdict::BudgetExhausted {
            max_order,
            error: None,
        },
    })
}
