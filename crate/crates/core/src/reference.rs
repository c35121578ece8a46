//! Bundled expected counts (`data/tables.csv`) and cell-by-cell comparison
//! against fresh enumeration.

use std::collections::BTreeMap;

use serde::Deserialize;
use thiserror::Error;

use crate::enumerator::{EnumError, Enumerator, SearchConfig};
use crate::pattern::{PatternError, PatternSet};

const TABLES_CSV: &str = include_str!("../data/tables.csv");

#[derive(Debug, Error)]
pub enum ReferenceError {
    #[error("malformed reference data: {0}")]
    Csv(#[from] csv::Error),
    #[error("bad pattern set in reference data: {0}")]
    Pattern(#[from] PatternError),
    #[error("no reference table {0} (expected 1 or 2)")]
    UnknownTable(u8),
    #[error(transparent)]
    Enum(#[from] EnumError),
}

#[derive(Debug, Deserialize)]
struct Record {
    table: u8,
    class: String,
    set: String,
    n: usize,
    count: u64,
}

/// One column of a reference table.
#[derive(Debug, Clone)]
pub struct ExpectedClass {
    pub label: String,
    pub set: PatternSet,
    pub counts: BTreeMap<usize, u64>,
}

#[derive(Debug, Clone)]
pub struct ExpectedTable {
    pub id: u8,
    pub classes: Vec<ExpectedClass>,
}

impl ExpectedTable {
    pub fn max_n(&self) -> usize {
        self.classes
            .iter()
            .filter_map(|c| c.counts.keys().next_back().copied())
            .max()
            .unwrap_or(0)
    }

    pub fn class(&self, label: &str) -> Option<&ExpectedClass> {
        self.classes.iter().find(|c| c.label == label)
    }
}

/// Parses the bundled reference file.
pub fn expected_tables() -> Result<Vec<ExpectedTable>, ReferenceError> {
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(TABLES_CSV.as_bytes());
    let mut tables: BTreeMap<u8, Vec<ExpectedClass>> = BTreeMap::new();
    for rec in rdr.deserialize() {
        let r: Record = rec?;
        let classes = tables.entry(r.table).or_default();
        let idx = match classes.iter().position(|c| c.label == r.class) {
            Some(i) => i,
            None => {
                classes.push(ExpectedClass {
                    label: r.class.clone(),
                    set: r.set.parse()?,
                    counts: BTreeMap::new(),
                });
                classes.len() - 1
            }
        };
        classes[idx].counts.insert(r.n, r.count);
    }
    Ok(tables
        .into_iter()
        .map(|(id, classes)| ExpectedTable { id, classes })
        .collect())
}

pub fn expected_table(id: u8) -> Result<ExpectedTable, ReferenceError> {
    expected_tables()?
        .into_iter()
        .find(|t| t.id == id)
        .ok_or(ReferenceError::UnknownTable(id))
}

/// Outcome for one (class, n) cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cell {
    pub class: String,
    pub n: usize,
    pub expected: u64,
    pub actual: u64,
}

impl Cell {
    pub fn passed(&self) -> bool {
        self.expected == self.actual
    }
}

/// Recounts every cell of table `id` with `n <= n_max`, in row-major order.
pub fn check_table(id: u8, n_max: usize, cfg: &SearchConfig) -> Result<Vec<Cell>, ReferenceError> {
    let table = expected_table(id)?;
    let engines: Vec<(&ExpectedClass, Enumerator)> = table
        .classes
        .iter()
        .map(|c| Enumerator::new(&c.set, *cfg).map(|e| (c, e)))
        .collect::<Result<_, _>>()?;
    let mut cells = Vec::new();
    for n in 1..=n_max.min(table.max_n()) {
        for (class, e) in &engines {
            if let Some(&expected) = class.counts.get(&n) {
                cells.push(Cell {
                    class: class.label.clone(),
                    n,
                    expected,
                    actual: e.count(n)?,
                });
            }
        }
    }
    Ok(cells)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_data_parses() {
        let ts = expected_tables().unwrap();
        assert_eq!(ts.len(), 2);
        assert_eq!(ts[0].classes.len(), 3);
        assert_eq!(ts[0].max_n(), 13);
        assert_eq!(ts[1].classes.len(), 8);
        assert_eq!(ts[1].max_n(), 12);
        assert_eq!(ts[1].class("C").unwrap().counts[&8], 429);
        assert_eq!(
            ts[0].class("A").unwrap().set.to_string(),
            "{[1~2~3] [2~3~1]}"
        );
        assert!(matches!(
            expected_table(3),
            Err(ReferenceError::UnknownTable(3))
        ));
    }

    #[test]
    fn small_rows_match() {
        for id in [1, 2] {
            let cells = check_table(id, 7, &SearchConfig::default()).unwrap();
            assert!(cells.iter().all(Cell::passed), "{cells:?}");
        }
    }
}
