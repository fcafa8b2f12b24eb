//! Full analysis of one table: classification, Abelian and Hamiltonian
//! verdicts from every applicable route, and the structure the theorems
//! describe.

use std::str::FromStr;
use std::time::Instant;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::identity::{identity_abelian_witness, IdentityFailure};
use crate::limits::Limits;
use crate::oracles::{
    abelian_oracle, abelian_semigroup_criterion_witness, hamiltonian_oracle, tc_violation_search, CriterionFailure,
    Route, TcWitness, Verdict,
};
use crate::quasigroup::{derive_loop, quasigroup_abelian_witness, LoopDerivation};
use crate::semigroup::{semigroup_abelian_witness, semigroup_structure, SemigroupStructure};
use crate::set::ElementSet;
use crate::table::{CayleyTable, ClassificationReport, Element};

pub const REPORT_VERSION: u32 = 1;

/// Largest order on which the O(n^5) semigroup criterion runs by default.
pub const CRITERION_MAX_ORDER: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    #[default]
    Both,
    FastOnly,
    OracleOnly,
}

impl Mode {
    fn fast(self) -> bool {
        self != Mode::OracleOnly
    }

    fn oracle(self) -> bool {
        self != Mode::FastOnly
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "both" => Ok(Mode::Both),
            "fast-only" | "fast" => Ok(Mode::FastOnly),
            "oracle-only" | "oracle" => Ok(Mode::OracleOnly),
            _ => Err(Error::InvalidSpec(format!("unknown mode '{s}'"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct AnalysisOptions {
    pub mode: Mode,
    /// Base point for the derived loop; 0 if unset.
    pub base: Option<Element>,
    pub limits: Limits,
    /// Seed for the term-condition witness search; no search when
    /// `witness_samples` is 0.
    pub seed: u64,
    pub witness_depth: usize,
    pub witness_samples: usize,
    /// Include the semigroup or loop structure.
    pub structure: bool,
    pub timing: bool,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        Self {
            mode: Mode::Both,
            base: None,
            limits: Limits::default(),
            seed: 0,
            witness_depth: 2,
            witness_samples: 2000,
            structure: true,
            timing: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RouteOutcome {
    pub route: Route,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropertyReport {
    pub verdict: Verdict,
    /// Route the verdict is taken from; `None` when nothing applied.
    pub route: Option<Route>,
    pub routes: Vec<RouteOutcome>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<TcWitness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub offending: Option<ElementSet>,
}

impl PropertyReport {
    fn from_routes(routes: Vec<RouteOutcome>) -> Self {
        // Theorem routes come first; the oracle is the fallback.
        let primary = routes
            .iter()
            .find(|r| r.route != Route::Oracle && r.verdict.is_determined())
            .or_else(|| routes.iter().find(|r| r.verdict.is_determined()))
            .or(routes.first());
        Self {
            verdict: primary.map_or(Verdict::Undetermined, |r| r.verdict),
            route: primary.map(|r| r.route),
            routes,
            witness: None,
            offending: None,
        }
    }

    /// Two determined routes disagree.
    pub fn inconsistent(&self) -> bool {
        let mut seen = self.routes.iter().filter_map(|r| r.verdict.as_bool());
        match seen.next() {
            Some(first) => seen.any(|v| v != first),
            None => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Structure {
    Loop(LoopDerivation),
    Semigroup(Box<SemigroupStructure>),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub report_version: u32,
    pub digest: String,
    pub classification: ClassificationReport,
    pub abelian: PropertyReport,
    pub hamiltonian: PropertyReport,
    pub inconsistent: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub structure: Option<Structure>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<f64>,
}

fn outcome(route: Route, failure: Option<String>) -> RouteOutcome {
    RouteOutcome {
        route,
        verdict: Verdict::from_bool(failure.is_none()),
        reason: failure,
    }
}

fn describe_criterion(f: &CriterionFailure) -> String {
    match f {
        CriterionFailure::NotStationary(w) => format!(
            "not stationary ({:?} side): b={}, c={}, u={}, v={}",
            w.side, w.b, w.c, w.u, w.v
        ),
        CriterionFailure::Sandwich { a, b, c, d, u, v } => {
            format!("{a}*{u}*{b} = {c}*{u}*{d} but {a}*{v}*{b} != {c}*{v}*{d}")
        }
    }
}

/// Fast Abelian routes that apply to `t`, in precedence order.
fn fast_abelian_routes(t: &CayleyTable, c: &ClassificationReport, opts: &AnalysisOptions) -> Result<Vec<RouteOutcome>> {
    let mut out = Vec::new();
    if c.identity.is_some() {
        let f: Option<IdentityFailure> = identity_abelian_witness(t)?;
        out.push(outcome(Route::IdentityGroupoidTheorem, f.map(|f| f.to_string())));
    }
    if c.quasigroup {
        let f = quasigroup_abelian_witness(t, opts.base)?;
        out.push(outcome(Route::QuasigroupTheorem, f.map(|f| f.to_string())));
    }
    if c.associative {
        let f = semigroup_abelian_witness(t)?;
        out.push(outcome(Route::SemigroupTheorem, f.map(|f| f.to_string())));
        if t.order() <= CRITERION_MAX_ORDER {
            let f = abelian_semigroup_criterion_witness(t)?;
            out.push(outcome(Route::SemigroupCriterion, f.as_ref().map(describe_criterion)));
        }
    }
    Ok(out)
}

pub fn analyze(t: &CayleyTable, opts: &AnalysisOptions) -> Result<AnalysisReport> {
    let start = Instant::now();
    if let Some(a) = opts.base {
        t.check_element(a)?;
    }
    let classification = t.classify();

    let mut abelian_routes = Vec::new();
    if opts.mode.fast() {
        abelian_routes = fast_abelian_routes(t, &classification, opts)?;
    }
    let theorem_route = abelian_routes
        .iter()
        .find(|r| r.route != Route::SemigroupCriterion)
        .map(|r| (r.route, r.verdict));
    if opts.mode.oracle() {
        let v = abelian_oracle(t, &opts.limits);
        abelian_routes.push(RouteOutcome {
            route: Route::Oracle,
            verdict: v,
            reason: (v == Verdict::Undetermined).then(|| "square table exceeds the cap".to_string()),
        });
    }
    let mut abelian = PropertyReport::from_routes(abelian_routes);
    if abelian.verdict == Verdict::No && opts.mode.oracle() && opts.witness_samples > 0 {
        abelian.witness = tc_violation_search(t, opts.witness_depth, opts.witness_samples, opts.seed);
    }

    let mut hamiltonian_routes = Vec::new();
    if let Some((route, Verdict::Yes)) = theorem_route {
        hamiltonian_routes.push(RouteOutcome {
            route,
            verdict: Verdict::Yes,
            reason: Some("Abelian".into()),
        });
    }
    let mut offending = None;
    if opts.mode.oracle() {
        let h = hamiltonian_oracle(t, &opts.limits);
        hamiltonian_routes.push(RouteOutcome {
            route: Route::Oracle,
            verdict: h.verdict,
            reason: match h.verdict {
                Verdict::Undetermined => Some("subuniverse enumeration capped".into()),
                Verdict::No => h.offending.as_ref().map(|b| format!("{b} is not a block")),
                Verdict::Yes => None,
            },
        });
        offending = h.offending;
    }
    let mut hamiltonian = PropertyReport::from_routes(hamiltonian_routes);
    hamiltonian.offending = offending;

    let structure = if !opts.structure {
        None
    } else if classification.quasigroup {
        Some(Structure::Loop(derive_loop(t, opts.base.unwrap_or(0))?))
    } else if classification.associative {
        Some(Structure::Semigroup(Box::new(semigroup_structure(t, &opts.limits)?)))
    } else {
        None
    };

    let inconsistent = abelian.inconsistent() || hamiltonian.inconsistent();
    Ok(AnalysisReport {
        report_version: REPORT_VERSION,
        digest: t.digest(),
        classification,
        abelian,
        hamiltonian,
        inconsistent,
        structure,
        elapsed_ms: opts.timing.then(|| start.elapsed().as_secs_f64() * 1000.0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructors::{fixture, zn};

    #[test]
    fn zn4_uses_identity_theorem() {
        let r = analyze(&zn(4), &AnalysisOptions::default()).unwrap();
        assert_eq!(r.abelian.verdict, Verdict::Yes);
        assert_eq!(r.abelian.route, Some(Route::IdentityGroupoidTheorem));
        assert_eq!(r.hamiltonian.verdict, Verdict::Yes);
        assert!(!r.inconsistent);
        assert_eq!(r.abelian.routes.len(), 5);
    }

    #[test]
    fn q4a_routes_agree() {
        let r = analyze(&fixture("q4a").unwrap(), &AnalysisOptions::default()).unwrap();
        assert_eq!(r.abelian.verdict, Verdict::No);
        assert_eq!(r.abelian.route, Some(Route::QuasigroupTheorem));
        assert!(!r.inconsistent);
        let w = r.abelian.witness.unwrap();
        assert!(w.verify(&fixture("q4a").unwrap()));
    }

    #[test]
    fn band8_reason() {
        let r = analyze(&fixture("band8").unwrap(), &AnalysisOptions::default()).unwrap();
        assert_eq!(r.abelian.verdict, Verdict::No);
        let reason = r.abelian.routes[0].reason.as_deref().unwrap();
        assert!(reason.starts_with("idempotents not closed"));
        assert_eq!(r.hamiltonian.route, Some(Route::Oracle));
    }

    #[test]
    fn fast_only_on_plain_groupoid() {
        let t = CayleyTable::new(vec![vec![1, 1], vec![0, 0]]).unwrap();
        let opts = AnalysisOptions { mode: Mode::FastOnly, ..Default::default() };
        let r = analyze(&t, &opts).unwrap();
        assert_eq!(r.abelian.verdict, Verdict::Undetermined);
        assert_eq!(r.abelian.route, None);
    }

    #[test]
    fn deterministic_json() {
        let t = fixture("s3").unwrap();
        let a = serde_json::to_string(&analyze(&t, &AnalysisOptions::default()).unwrap()).unwrap();
        let b = serde_json::to_string(&analyze(&t, &AnalysisOptions::default()).unwrap()).unwrap();
        assert_eq!(a, b);
        assert!(a.contains("\"report_version\":1"));
        assert!(!a.contains("elapsed_ms"));
    }
}
