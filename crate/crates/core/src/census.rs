//! Cross-checks every route on whole families of tables.
//!
//! Tables are analyzed in parallel; the reduction runs in table order, so
//! the report depends only on the order, class, sample size and seed.

use rayon::prelude::*;
use serde::Serialize;

use crate::analysis::{analyze, AnalysisOptions, AnalysisReport};
use crate::constructors::{all_tables, random_in_class, TableClass};
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::oracles::{Route, Verdict};
use crate::table::CayleyTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Sampling {
    Exhaustive,
    Sampled { count: usize, seed: u64 },
}

/// Yes / no / undetermined tallies for one route family.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub yes: usize,
    pub no: usize,
    pub undetermined: usize,
}

impl Tally {
    fn add(&mut self, v: Verdict) {
        match v {
            Verdict::Yes => self.yes += 1,
            Verdict::No => self.no += 1,
            Verdict::Undetermined => self.undetermined += 1,
        }
    }

    fn merge(&mut self, o: &Tally) {
        self.yes += o.yes;
        self.no += o.no;
        self.undetermined += o.undetermined;
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Counts {
    pub abelian_oracle: Tally,
    pub abelian_fast: Tally,
    pub hamiltonian_oracle: Tally,
    pub hamiltonian_fast: Tally,
}

impl Counts {
    fn merge(&mut self, o: &Counts) {
        self.abelian_oracle.merge(&o.abelian_oracle);
        self.abelian_fast.merge(&o.abelian_fast);
        self.hamiltonian_oracle.merge(&o.hamiltonian_oracle);
        self.hamiltonian_fast.merge(&o.hamiltonian_fast);
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CensusReport {
    pub order: usize,
    pub class: TableClass,
    pub sampling: Sampling,
    pub scanned: usize,
    pub counts: Counts,
    pub disagreements: usize,
    /// Canonical text of the first disagreeing table, if any.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_disagreement: Option<String>,
}

impl CensusReport {
    pub const CSV_HEADER: &'static str = "order,class,sampling,seed,scanned,\
abelian_oracle_yes,abelian_oracle_no,abelian_oracle_undetermined,\
abelian_fast_yes,abelian_fast_no,abelian_fast_undetermined,\
hamiltonian_oracle_yes,hamiltonian_oracle_no,hamiltonian_oracle_undetermined,\
hamiltonian_fast_yes,hamiltonian_fast_no,hamiltonian_fast_undetermined,disagreements";

    /// Header plus one data line.
    pub fn to_csv(&self) -> String {
        let (sampling, seed) = match self.sampling {
            Sampling::Exhaustive => ("exhaustive", String::new()),
            Sampling::Sampled { seed, .. } => ("sampled", seed.to_string()),
        };
        let c = &self.counts;
        let mut fields = vec![
            self.order.to_string(),
            self.class.to_string(),
            sampling.to_string(),
            seed,
            self.scanned.to_string(),
        ];
        for t in [c.abelian_oracle, c.abelian_fast, c.hamiltonian_oracle, c.hamiltonian_fast] {
            fields.extend([t.yes, t.no, t.undetermined].map(|v| v.to_string()));
        }
        fields.push(self.disagreements.to_string());
        format!("{}\n{}\n", Self::CSV_HEADER, fields.join(","))
    }
}

fn fast_verdict(r: &[crate::analysis::RouteOutcome]) -> Verdict {
    r.iter()
        .find(|o| o.route != Route::Oracle)
        .map_or(Verdict::Undetermined, |o| o.verdict)
}

fn oracle_verdict(r: &[crate::analysis::RouteOutcome]) -> Verdict {
    r.iter()
        .find(|o| o.route == Route::Oracle)
        .map_or(Verdict::Undetermined, |o| o.verdict)
}

fn tally(report: &AnalysisReport) -> Counts {
    let mut c = Counts::default();
    c.abelian_oracle.add(oracle_verdict(&report.abelian.routes));
    c.abelian_fast.add(fast_verdict(&report.abelian.routes));
    c.hamiltonian_oracle.add(oracle_verdict(&report.hamiltonian.routes));
    c.hamiltonian_fast.add(fast_verdict(&report.hamiltonian.routes));
    c
}

/// Runs every route on each table of the family and counts disagreements.
pub fn census(order: usize, class: TableClass, sample: Option<(usize, u64)>, limits: &Limits) -> Result<CensusReport> {
    if order == 0 || order > limits.max_order {
        return Err(Error::CapExceeded {
            what: "census order",
            limit: limits.max_order,
            actual: order,
        });
    }
    let opts = AnalysisOptions {
        limits: *limits,
        witness_samples: 0,
        structure: false,
        ..AnalysisOptions::default()
    };
    let (tables, sampling): (Vec<CayleyTable>, Sampling) = match sample {
        None => (all_tables(order, class)?, Sampling::Exhaustive),
        Some((count, seed)) => {
            let tables = (0..count as u64)
                .into_par_iter()
                .map(|k| random_in_class(class, order, seed.wrapping_mul(1_000_003).wrapping_add(k)))
                .collect::<Result<Vec<_>>>()?;
            (tables, Sampling::Sampled { count, seed })
        }
    };
    let reports = tables
        .par_iter()
        .map(|t| analyze(t, &opts))
        .collect::<Result<Vec<_>>>()?;
    let mut counts = Counts::default();
    let mut disagreements = 0;
    let mut first_disagreement = None;
    for (t, r) in tables.iter().zip(&reports) {
        counts.merge(&tally(r));
        if r.inconsistent {
            disagreements += 1;
            first_disagreement.get_or_insert_with(|| t.to_text());
        }
    }
    Ok(CensusReport {
        order,
        class,
        sampling,
        scanned: tables.len(),
        counts,
        disagreements,
        first_disagreement,
    })
}
