//! Query counts of the three routes for `exp(-beta (x + 1))`.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::filter::analytic_extension_series;
use super::linear::{linear_extension_series, DEFAULT_X0};
use super::taylor::{exponential_alpha, taylor_route_q, temperature_delta};
use super::{ApproxOptions, TargetFunction};
use crate::error::{Error, Result};

pub const CSV_HEADER: &str = "beta,eps,q_lemma37,q_linear,q_analytic";

/// Outcome of one method on one row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Cell {
    Q(usize),
    /// No even `q` up to the ceiling met the target.
    AboveCeiling { q_max: usize },
    Failed(String),
}

impl Cell {
    pub fn q(&self) -> Option<usize> {
        match self {
            Cell::Q(q) => Some(*q),
            _ => None,
        }
    }

    /// Smallest value `q` is known to take: itself, or `q_max + 2` past the ceiling.
    pub fn lower_bound(&self) -> Option<usize> {
        match self {
            Cell::Q(q) => Some(*q),
            Cell::AboveCeiling { q_max } => Some(q_max + 2),
            Cell::Failed(_) => None,
        }
    }

    fn from_result(r: Result<usize>) -> Self {
        match r {
            Ok(q) => Cell::Q(q),
            Err(Error::SearchCeiling { q_max, .. }) => Cell::AboveCeiling { q_max },
            Err(e) => Cell::Failed(e.to_string()),
        }
    }

    fn csv(&self) -> String {
        self.q().map(|q| q.to_string()).unwrap_or_default()
    }

    fn note(&self, column: &str) -> Option<String> {
        match self {
            Cell::Q(_) => None,
            Cell::AboveCeiling { q_max } => Some(format!("{column}: above q_max = {q_max}")),
            Cell::Failed(msg) => Some(format!("{column}: {msg}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub beta: f64,
    pub eps: f64,
    /// A-priori count of the Taylor route with the temperature-balanced margin.
    pub q_lemma37: Cell,
    pub q_linear: Cell,
    pub q_analytic: Cell,
}

impl ComparisonRow {
    pub fn is_complete(&self) -> bool {
        self.q_lemma37.q().is_some() && self.q_linear.q().is_some() && self.q_analytic.q().is_some()
    }

    pub fn notes(&self) -> Vec<String> {
        [
            self.q_lemma37.note("q_lemma37"),
            self.q_linear.note("q_linear"),
            self.q_analytic.note("q_analytic"),
        ]
        .into_iter()
        .flatten()
        .map(|n| format!("beta={} eps={}: {n}", self.beta, self.eps))
        .collect()
    }
}

fn taylor_row_q(beta: f64, eps: f64) -> Result<usize> {
    let delta = temperature_delta(beta);
    let alpha = exponential_alpha(beta, delta)?;
    let shrink = 1.0 - 2.0 * delta / std::f64::consts::PI;
    // ||d||_1 = alpha * exp(-beta) * exp(beta / shrink)
    let d_l1 = alpha * (beta * (1.0 / shrink - 1.0)).exp();
    taylor_route_q(delta, eps, d_l1)
}

fn row(beta: f64, eps: f64, opts: &ApproxOptions) -> ComparisonRow {
    let f = TargetFunction::exponential(beta);
    let run = |m: &dyn Fn(&TargetFunction) -> Result<usize>| match &f {
        Ok(f) => Cell::from_result(m(f)),
        Err(e) => Cell::Failed(e.to_string()),
    };
    ComparisonRow {
        beta,
        eps,
        q_lemma37: Cell::from_result(taylor_row_q(beta, eps)),
        q_linear: run(&|f| linear_extension_series(f, DEFAULT_X0, eps, opts).map(|r| r.q)),
        q_analytic: run(&|f| analytic_extension_series(f, eps, opts).map(|r| r.q)),
    }
}

/// One row per `(beta, eps)` pair, `eps` outermost. Rows are computed in
/// parallel; a failing method leaves its cell empty without aborting the table.
pub fn compare_methods(betas: &[f64], eps_list: &[f64], opts: &ApproxOptions) -> Vec<ComparisonRow> {
    let pairs: Vec<(f64, f64)> = eps_list
        .iter()
        .flat_map(|&e| betas.iter().map(move |&b| (b, e)))
        .collect();
    pairs.par_iter().map(|&(b, e)| row(b, e, opts)).collect()
}

pub fn to_csv(rows: &[ComparisonRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            r.beta,
            r.eps,
            r.q_lemma37.csv(),
            r.q_linear.csv(),
            r.q_analytic.csv()
        );
    }
    out
}

/// Smallest scanned `beta` from which the analytic extension needs fewer
/// queries than the Taylor route for every larger scanned `beta` at this
/// `eps`. `None` when it loses at the largest `beta`.
pub fn crossover_beta(rows: &[ComparisonRow], eps: f64) -> Option<f64> {
    let mut at_eps: Vec<&ComparisonRow> = rows.iter().filter(|r| r.eps == eps).collect();
    at_eps.sort_by(|a, b| a.beta.total_cmp(&b.beta));
    let wins = |r: &ComparisonRow| match (r.q_analytic.q(), r.q_lemma37.q()) {
        (Some(a), Some(t)) => a < t,
        _ => false,
    };
    let mut crossover = None;
    for r in at_eps.iter().rev() {
        if wins(r) {
            crossover = Some(r.beta);
        } else {
            break;
        }
    }
    crossover
}
