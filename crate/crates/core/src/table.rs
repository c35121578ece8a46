//! Count tables: the result of counting one pattern set over a range of
//! lengths, with CSV and JSON output.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::ops::RangeInclusive;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use serde::Serialize;

use crate::enumerator::{EnumError, Enumerator, SearchConfig, Statistic};
use crate::formulas::{FormulaError, Sequence};
use crate::pattern::PatternSet;

/// How the counts in a table were obtained.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Method {
    Enumeration,
    Formula(Sequence),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountRow {
    pub n: usize,
    pub count: BigUint,
    pub refinement: Option<BTreeMap<usize, u64>>,
    pub elapsed: Duration,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountTable {
    pub patterns: Vec<String>,
    pub method: Method,
    pub statistic: Option<Statistic>,
    pub rows: Vec<CountRow>,
}

/// A count run stopped early by the node budget. `table` holds every length
/// finished before the failure.
#[derive(Debug, Clone, thiserror::Error)]
#[error("{error} (completed through n = {})", .table.rows.last().map_or(0, |r| r.n))]
pub struct PartialTable {
    pub table: CountTable,
    pub error: EnumError,
}

#[derive(Serialize)]
struct JsonRefinement<'a> {
    statistic: &'a str,
    counts: BTreeMap<String, String>,
}

#[derive(Serialize)]
struct JsonRow<'a> {
    patterns: &'a [String],
    n: usize,
    count: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    refinement: Option<JsonRefinement<'a>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    elapsed_ms: Option<u128>,
}

impl CountTable {
    /// Counts `set` for every `n` in `ns`, stopping at the first failure.
    pub fn enumerate(
        set: &PatternSet,
        ns: RangeInclusive<usize>,
        stat: Option<Statistic>,
        cfg: &SearchConfig,
    ) -> Result<CountTable, PartialTable> {
        let mut table = CountTable {
            patterns: set.strings(),
            method: Method::Enumeration,
            statistic: stat,
            rows: Vec::new(),
        };
        let e = match Enumerator::new(set, *cfg) {
            Ok(e) => e,
            Err(error) => return Err(PartialTable { table, error }),
        };
        for n in ns {
            let t0 = Instant::now();
            let res = match stat {
                // statistics are only defined from n = 3 on
                Some(s) if n >= 3 => e.count_refined(n, s).map(|m| {
                    let c: u64 = m.values().sum();
                    (c, Some(m))
                }),
                _ => e.count(n).map(|c| (c, None)),
            };
            match res {
                Ok((c, refinement)) => table.rows.push(CountRow {
                    n,
                    count: c.into(),
                    refinement,
                    elapsed: t0.elapsed(),
                }),
                Err(error) => return Err(PartialTable { table, error }),
            }
        }
        Ok(table)
    }

    /// Tabulates a closed form or recurrence.
    pub fn formula(seq: Sequence, ns: RangeInclusive<usize>) -> Result<CountTable, FormulaError> {
        let mut rows = Vec::new();
        for n in ns {
            let t0 = Instant::now();
            let count = seq.value(n)?;
            rows.push(CountRow {
                n,
                count,
                refinement: None,
                elapsed: t0.elapsed(),
            });
        }
        Ok(CountTable {
            patterns: Vec::new(),
            method: Method::Formula(seq),
            statistic: None,
            rows,
        })
    }

    pub fn count_at(&self, n: usize) -> Option<&BigUint> {
        self.rows.iter().find(|r| r.n == n).map(|r| &r.count)
    }

    /// CSV with columns `n,count,elapsed_ms`. The elapsed column is left
    /// empty unless `timings` is set, so default output is reproducible.
    pub fn to_csv(&self, timings: bool) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["n", "count", "elapsed_ms"]).unwrap();
        for r in &self.rows {
            let ms = if timings {
                r.elapsed.as_millis().to_string()
            } else {
                String::new()
            };
            w.write_record([r.n.to_string(), r.count.to_string(), ms])
                .unwrap();
        }
        String::from_utf8(w.into_inner().unwrap()).unwrap()
    }

    /// JSON array with one object per length. Counts are decimal strings.
    pub fn to_json(&self, timings: bool) -> String {
        let rows: Vec<JsonRow> = self
            .rows
            .iter()
            .map(|r| JsonRow {
                patterns: &self.patterns,
                n: r.n,
                count: r.count.to_string(),
                refinement: match (self.statistic, &r.refinement) {
                    (Some(s), Some(m)) => Some(JsonRefinement {
                        statistic: s.name(),
                        counts: m
                            .iter()
                            .map(|(k, v)| (k.to_string(), v.to_string()))
                            .collect(),
                    }),
                    _ => None,
                },
                elapsed_ms: timings.then_some(r.elapsed.as_millis()),
            })
            .collect();
        serde_json::to_string_pretty(&rows).unwrap() + "\n"
    }

    /// Plain aligned text.
    pub fn to_text(&self, timings: bool) -> String {
        let mut s = String::new();
        match &self.method {
            Method::Enumeration => {
                let _ = writeln!(s, "# Av_n{{{}}}", self.patterns.join(" "));
            }
            Method::Formula(seq) => {
                let _ = writeln!(s, "# {} ({})", seq.name(), seq.definition());
            }
        }
        let width = self
            .rows
            .iter()
            .map(|r| r.count.to_string().len())
            .max()
            .unwrap_or(1)
            .max(5);
        for r in &self.rows {
            let _ = write!(s, "{:>3}  {:>width$}", r.n, r.count.to_string());
            if timings {
                let _ = write!(s, "  {:>8} ms", r.elapsed.as_millis());
            }
            if let (Some(stat), Some(m)) = (self.statistic, &r.refinement) {
                let parts: Vec<String> = m.iter().map(|(k, v)| format!("{k}:{v}")).collect();
                let _ = write!(s, "  {}={{{}}}", stat.name(), parts.join(", "));
            }
            s.push('\n');
        }
        s
    }
}
