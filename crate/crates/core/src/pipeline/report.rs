use std::collections::BTreeMap;
use std::path::Path;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::Result;
use crate::reduction::{FormSign, ReductionResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseId {
    SmallK,
    MSmallCase,
    LargeKCase1,
    LargeKCase2,
    FinalBruteforce,
    Corollaries,
}

impl CaseId {
    pub const ALL: [CaseId; 6] = [
        CaseId::SmallK,
        CaseId::MSmallCase,
        CaseId::LargeKCase1,
        CaseId::LargeKCase2,
        CaseId::FinalBruteforce,
        CaseId::Corollaries,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CaseId::SmallK => "small_k",
            CaseId::MSmallCase => "m_small_case",
            CaseId::LargeKCase1 => "large_k_case1",
            CaseId::LargeKCase2 => "large_k_case2",
            CaseId::FinalBruteforce => "final_bruteforce",
            CaseId::Corollaries => "corollaries",
        }
    }
}

impl std::str::FromStr for CaseId {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        CaseId::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| crate::Error::Config(format!("unknown case {s:?}")))
    }
}

/// `L_n^{(k)} = L_m^{(l)}`, verified exactly. `k` is a string because the
/// large-order cases only know `k > 800`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SolutionRecord {
    pub n: u64,
    pub k: String,
    pub m: u64,
    pub l: u64,
    #[serde(with = "crate::decimal")]
    pub value: BigInt,
    pub trivial: bool,
}

/// One reduction, flattened for reports. `k` is absent for the
/// large-order forms, which do not depend on it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReductionRecord {
    /// `small_k`, `case1_pass1`, `case1_pass2` or `case2`.
    pub stage: String,
    pub k: Option<u32>,
    pub l: u32,
    pub sign: FormSign,
    /// Decimal digits of `M`.
    pub m_digits: usize,
    pub q_digits: usize,
    pub convergent_index: usize,
    /// Leading digits of epsilon, which is certified positive.
    pub epsilon: String,
    pub w_bound: f64,
    pub bits: u32,
    pub retries: usize,
    pub escalated: bool,
}

impl ReductionRecord {
    pub fn new(stage: &str, k: Option<u32>, l: u32, sign: FormSign, m: &BigInt, r: &ReductionResult) -> Self {
        Self {
            stage: stage.to_string(),
            k,
            l,
            sign,
            m_digits: m.to_string().len(),
            q_digits: r.q.to_string().len(),
            convergent_index: r.convergent_index,
            epsilon: r.epsilon.to_sci_string(6),
            w_bound: r.w_bound_f64(),
            bits: r.bits,
            retries: r.retries,
            escalated: r.escalated,
        }
    }

    fn key(&self) -> (&str, Option<u32>, u32, FormSign) {
        (&self.stage, self.k, self.l, self.sign)
    }
}

/// A problem that needed more than the starting precision or skipped
/// convergents.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrecisionEvent {
    pub problem: String,
    pub bits: u32,
    pub retries: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaseReport {
    pub case_id: CaseId,
    pub params: BTreeMap<String, Value>,
    pub maxima: BTreeMap<String, Value>,
    /// Named pass/fail conclusions of the case.
    pub checks: BTreeMap<String, bool>,
    pub solutions: Vec<SolutionRecord>,
    pub reductions: Vec<ReductionRecord>,
    /// Seconds per phase.
    pub timings: BTreeMap<String, f64>,
    pub precision_events: Vec<PrecisionEvent>,
}

impl CaseReport {
    pub fn new(case_id: CaseId) -> Self {
        Self {
            case_id,
            params: BTreeMap::new(),
            maxima: BTreeMap::new(),
            checks: BTreeMap::new(),
            solutions: Vec::new(),
            reductions: Vec::new(),
            timings: BTreeMap::new(),
            precision_events: Vec::new(),
        }
    }

    pub fn param(&mut self, name: &str, v: impl Serialize) {
        self.params.insert(name.to_string(), serde_json::to_value(v).unwrap_or(Value::Null));
    }

    pub fn maximum(&mut self, name: &str, v: impl Serialize) {
        self.maxima.insert(name.to_string(), serde_json::to_value(v).unwrap_or(Value::Null));
    }

    pub fn check(&mut self, name: &str, ok: bool) {
        self.checks.insert(name.to_string(), ok);
    }

    pub fn nontrivial_solutions(&self) -> impl Iterator<Item = &SolutionRecord> {
        self.solutions.iter().filter(|s| !s.trivial)
    }

    /// No nontrivial solution and every check passed.
    pub fn passed(&self) -> bool {
        self.nontrivial_solutions().next().is_none() && self.checks.values().all(|&ok| ok)
    }

    /// Sorts the lists so the report does not depend on scheduling.
    pub fn normalize(&mut self) {
        self.solutions.sort();
        self.solutions.dedup();
        self.reductions.sort_by(|a, b| a.key().cmp(&b.key()));
        self.precision_events.sort_by(|a, b| a.problem.cmp(&b.problem));
    }

    pub fn max_w_bound(&self) -> Option<f64> {
        self.reductions.iter().map(|r| r.w_bound).reduce(f64::max)
    }
}

#[derive(Serialize)]
struct CsvRow<'a> {
    k: String,
    l: u32,
    sign: &'a str,
    q_digits: usize,
    epsilon_sign: &'a str,
    w_bound: f64,
}

/// Writes every reduction as `k,l,sign,q_digits,epsilon_sign,w_bound`.
pub fn write_csv(reports: &[CaseReport], path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for rep in reports {
        for r in &rep.reductions {
            w.serialize(CsvRow {
                k: r.k.map_or_else(|| ">800".to_string(), |k| k.to_string()),
                l: r.l,
                sign: r.sign.as_str(),
                q_digits: r.q_digits,
                // only certified-positive epsilons are recorded
                epsilon_sign: "+",
                w_bound: r.w_bound,
            })?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_json(reports: &[CaseReport], path: &Path) -> Result<()> {
    let text = serde_json::to_string_pretty(reports)?;
    std::fs::write(path, text)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let mut r = CaseReport::new(CaseId::FinalBruteforce);
        r.param("l", (2, 17));
        r.maximum("n", 190);
        r.solutions.push(SolutionRecord {
            n: 3,
            k: ">800".into(),
            m: 3,
            l: 2,
            value: BigInt::from(10).pow(40),
            trivial: true,
        });
        let text = serde_json::to_string(&r).unwrap();
        assert!(text.contains("\"10000000000000000000000000000000000000000\""));
        assert!(text.contains("\"case_id\":\"final_bruteforce\""));
        let back: CaseReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
        assert!(back.passed());
    }

    #[test]
    fn case_names() {
        for c in CaseId::ALL {
            assert_eq!(c.as_str().parse::<CaseId>().unwrap(), c);
        }
        assert!("nope".parse::<CaseId>().is_err());
    }
}
