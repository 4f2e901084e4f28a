//! Balanced panel container, ingestion, group splits, and cross-sectional
//! aggregation.
//!
//! A [`PanelDataset`] is an N×T rectangle: every unit has exactly one
//! observation per year, years are consecutive, and unit ids are kept in
//! sorted order so that every aggregation over units is deterministic.
//! Ratio variables are stored in percent units throughout (58.99, not
//! 0.5899).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::Path;

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Immutable balanced panel of unit–year observations over named variables.
///
/// Matrices are indexed `(unit, year)` with units in `unit_ids` order and
/// years in `years` order. The container is immutable after construction and
/// safe to share across threads.
#[derive(Debug, Clone, PartialEq)]
pub struct PanelDataset {
    unit_ids: Vec<String>,
    years: Vec<i32>,
    variables: BTreeMap<String, DMatrix<f64>>,
}

/// Named subset of panel units.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupSplit {
    pub label: String,
    pub members: Vec<String>,
}

impl GroupSplit {
    pub fn new(label: impl Into<String>, mut members: Vec<String>) -> Self {
        members.sort();
        members.dedup();
        GroupSplit {
            label: label.into(),
            members,
        }
    }
}

/// Five-number summary of one panel variable over all cells.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VariableSummary {
    pub mean: f64,
    pub median: f64,
    pub sd: f64,
    pub min: f64,
    pub max: f64,
}

/// Maps dataset variables onto columns of a delimited text file.
#[derive(Debug, Clone)]
pub struct IngestSchema {
    /// Header of the unit-identifier column.
    pub unit_column: String,
    /// Header of the year column.
    pub year_column: String,
    /// `(variable name, file column header)` pairs, in desired order.
    pub variables: Vec<(String, String)>,
    /// Field delimiter, `b','` by default.
    pub delimiter: u8,
    /// Drop units with missing years instead of rejecting the file.
    pub drop_incomplete: bool,
    /// Optional inclusive year window applied after reading.
    pub year_window: Option<(i32, i32)>,
}

impl IngestSchema {
    pub fn new(variables: Vec<(String, String)>) -> Self {
        IngestSchema {
            unit_column: "country".to_string(),
            year_column: "year".to_string(),
            variables,
            delimiter: b',',
            drop_incomplete: false,
            year_window: None,
        }
    }

    /// Schema whose variable names equal the file column headers.
    pub fn identity(columns: &[&str]) -> Self {
        Self::new(
            columns
                .iter()
                .map(|c| (c.to_string(), c.to_string()))
                .collect(),
        )
    }
}

impl PanelDataset {
    /// Build a panel from per-variable `(unit -> year -> value)` maps.
    ///
    /// Validates balance: every unit must have one value for every year of
    /// the consecutive range spanned by the observed years.
    pub fn from_observations(
        observations: &BTreeMap<String, BTreeMap<(String, i32), f64>>,
    ) -> Result<PanelDataset> {
        let mut units: BTreeSet<String> = BTreeSet::new();
        let mut year_set: BTreeSet<i32> = BTreeSet::new();
        for cells in observations.values() {
            for (unit, year) in cells.keys() {
                units.insert(unit.clone());
                year_set.insert(*year);
            }
        }
        if units.is_empty() || year_set.is_empty() {
            return Err(Error::EmptyFile);
        }
        let min_year = *year_set.iter().next().unwrap();
        let max_year = *year_set.iter().next_back().unwrap();
        let years: Vec<i32> = (min_year..=max_year).collect();
        let unit_ids: Vec<String> = units.into_iter().collect();

        let mut variables = BTreeMap::new();
        for (var, cells) in observations {
            let mut m = DMatrix::zeros(unit_ids.len(), years.len());
            for (i, unit) in unit_ids.iter().enumerate() {
                for (j, year) in years.iter().enumerate() {
                    match cells.get(&(unit.clone(), *year)) {
                        Some(v) => m[(i, j)] = *v,
                        None => {
                            return Err(Error::MissingCell {
                                unit: unit.clone(),
                                year: *year,
                            })
                        }
                    }
                }
            }
            variables.insert(var.clone(), m);
        }
        Ok(PanelDataset {
            unit_ids,
            years,
            variables,
        })
    }

    /// Build a panel from pre-shaped matrices. Units must be sorted and
    /// unique, years consecutive, and every matrix N×T.
    pub fn from_matrices(
        unit_ids: Vec<String>,
        years: Vec<i32>,
        variables: BTreeMap<String, DMatrix<f64>>,
    ) -> Result<PanelDataset> {
        if unit_ids.is_empty() || years.is_empty() || variables.is_empty() {
            return Err(Error::EmptyFile);
        }
        for w in unit_ids.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::InvalidConfig(format!(
                    "unit ids must be sorted and unique; saw {:?} before {:?}",
                    w[0], w[1]
                )));
            }
        }
        for w in years.windows(2) {
            if w[1] != w[0] + 1 {
                return Err(Error::InvalidConfig(format!(
                    "years must be consecutive; saw {} after {}",
                    w[1], w[0]
                )));
            }
        }
        for (name, m) in &variables {
            if m.nrows() != unit_ids.len() || m.ncols() != years.len() {
                return Err(Error::InvalidConfig(format!(
                    "variable {name:?} has shape {}x{}, expected {}x{}",
                    m.nrows(),
                    m.ncols(),
                    unit_ids.len(),
                    years.len()
                )));
            }
        }
        Ok(PanelDataset {
            unit_ids,
            years,
            variables,
        })
    }

    pub fn n_units(&self) -> usize {
        self.unit_ids.len()
    }

    pub fn n_years(&self) -> usize {
        self.years.len()
    }

    pub fn unit_ids(&self) -> &[String] {
        &self.unit_ids
    }

    pub fn years(&self) -> &[i32] {
        &self.years
    }

    pub fn variable_names(&self) -> Vec<&str> {
        self.variables.keys().map(|s| s.as_str()).collect()
    }

    pub fn has_variable(&self, var: &str) -> bool {
        self.variables.contains_key(var)
    }

    /// N×T matrix of one variable, rows in `unit_ids` order.
    pub fn variable(&self, var: &str) -> Result<&DMatrix<f64>> {
        self.variables
            .get(var)
            .ok_or_else(|| Error::UnknownVariable(var.to_string()))
    }

    pub fn unit_index(&self, unit: &str) -> Option<usize> {
        self.unit_ids.binary_search_by(|u| u.as_str().cmp(unit)).ok()
    }

    /// Time series of `var` for one unit.
    pub fn unit_series(&self, var: &str, unit_idx: usize) -> Result<Vec<f64>> {
        let m = self.variable(var)?;
        Ok(m.row(unit_idx).iter().copied().collect())
    }

    /// Copy of the panel extended with an additional variable.
    pub fn with_variable(&self, name: &str, values: DMatrix<f64>) -> Result<PanelDataset> {
        assert_eq!(values.nrows(), self.n_units());
        assert_eq!(values.ncols(), self.n_years());
        let mut out = self.clone();
        out.variables.insert(name.to_string(), values);
        Ok(out)
    }

    /// Sub-panel restricted to a consecutive year slice `[start, end)`
    /// (indices into `years`). Used by the half-panel jackknife.
    pub fn year_slice(&self, start: usize, end: usize) -> PanelDataset {
        assert!(start < end && end <= self.n_years());
        let variables = self
            .variables
            .iter()
            .map(|(k, m)| (k.clone(), m.columns(start, end - start).into_owned()))
            .collect();
        PanelDataset {
            unit_ids: self.unit_ids.clone(),
            years: self.years[start..end].to_vec(),
            variables,
        }
    }

    /// Indices of group members in canonical unit order.
    pub fn member_indices(&self, group: &GroupSplit) -> Result<Vec<usize>> {
        if group.members.is_empty() {
            return Err(Error::EmptyGroup(group.label.clone()));
        }
        let mut idx = Vec::with_capacity(group.members.len());
        for m in &group.members {
            match self.unit_index(m) {
                Some(i) => idx.push(i),
                None => return Err(Error::UnknownVariable(format!("unit {m:?} not in panel"))),
            }
        }
        idx.sort_unstable();
        Ok(idx)
    }

    /// Group covering every unit of the panel.
    pub fn full_group(&self) -> GroupSplit {
        GroupSplit::new("all", self.unit_ids.clone())
    }

    /// Per-year arithmetic mean of `var` over `members`, summed in
    /// canonical unit order.
    pub fn cross_sectional_average(&self, var: &str, members: &GroupSplit) -> Result<Vec<f64>> {
        let m = self.variable(var)?;
        let idx = self.member_indices(members)?;
        let n = idx.len() as f64;
        let mut out = Vec::with_capacity(self.n_years());
        for j in 0..self.n_years() {
            let mut sum = 0.0;
            for &i in &idx {
                sum += m[(i, j)];
            }
            out.push(sum / n);
        }
        Ok(out)
    }

    /// Split units by their time-median of `debt_var`: strictly above the
    /// cross-unit median goes to `high`, at or below goes to `low`.
    pub fn median_debt_split(&self, debt_var: &str) -> Result<(GroupSplit, GroupSplit)> {
        let m = self.variable(debt_var)?;
        let unit_medians: Vec<f64> = (0..self.n_units())
            .map(|i| median(&m.row(i).iter().copied().collect::<Vec<_>>()))
            .collect();
        let split_point = median(&unit_medians);
        let mut high = Vec::new();
        let mut low = Vec::new();
        for (i, unit) in self.unit_ids.iter().enumerate() {
            if unit_medians[i] > split_point {
                high.push(unit.clone());
            } else {
                low.push(unit.clone());
            }
        }
        if high.is_empty() {
            return Err(Error::DegenerateSplit {
                median: split_point,
            });
        }
        Ok((
            GroupSplit::new("high_debt", high),
            GroupSplit::new("low_debt", low),
        ))
    }

    /// Five-number summary of a variable over all N×T cells.
    pub fn summary(&self, var: &str) -> Result<VariableSummary> {
        let m = self.variable(var)?;
        let values: Vec<f64> = m.iter().copied().collect();
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var_ = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
        let (mut min, mut max) = (f64::INFINITY, f64::NEG_INFINITY);
        for &v in &values {
            min = min.min(v);
            max = max.max(v);
        }
        Ok(VariableSummary {
            mean,
            median: median(&values),
            sd: var_.sqrt(),
            min,
            max,
        })
    }

    /// Serialize to delimited text with full-precision values. Re-ingesting
    /// the output reproduces the panel bit-exactly.
    pub fn to_delimited(&self, delimiter: char) -> String {
        let mut out = String::new();
        out.push_str("country");
        out.push(delimiter);
        out.push_str("year");
        for var in self.variables.keys() {
            out.push(delimiter);
            out.push_str(var);
        }
        out.push('\n');
        for (i, unit) in self.unit_ids.iter().enumerate() {
            for (j, year) in self.years.iter().enumerate() {
                let _ = write!(out, "{unit}{delimiter}{year}");
                for m in self.variables.values() {
                    let _ = write!(out, "{delimiter}{}", m[(i, j)]);
                }
                out.push('\n');
            }
        }
        out
    }

    pub fn write_delimited(&self, path: &Path, delimiter: char) -> Result<()> {
        std::fs::write(path, self.to_delimited(delimiter)).map_err(|e| Error::Io {
            path: path.display().to_string(),
            source: e,
        })
    }
}

/// Median with the even-count convention: average of the two middle order
/// statistics.
pub fn median(values: &[f64]) -> f64 {
    assert!(!values.is_empty());
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("non-finite value in median"));
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    }
}

/// Read a delimited text file into a balanced panel.
///
/// The file must carry a header row naming at least the unit, year, and
/// every mapped variable column. Rows may arrive in any order; output is
/// canonical. Numeric parsing is locale-independent (dot decimal).
pub fn ingest_table(path: &Path, schema: &IngestSchema) -> Result<PanelDataset> {
    let raw = std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        source: e,
    })?;
    ingest_str(&raw, schema)
}

/// [`ingest_table`] over an in-memory string.
pub fn ingest_str(raw: &str, schema: &IngestSchema) -> Result<PanelDataset> {
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(schema.delimiter)
        .trim(csv::Trim::All)
        .from_reader(raw.as_bytes());

    let headers = reader
        .headers()
        .map_err(|_| Error::EmptyFile)?
        .iter()
        .map(|h| h.to_string())
        .collect::<Vec<_>>();
    let col = |name: &str| -> Result<usize> {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::MissingColumn(name.to_string()))
    };
    let unit_col = col(&schema.unit_column)?;
    let year_col = col(&schema.year_column)?;
    let var_cols: Vec<(String, usize)> = schema
        .variables
        .iter()
        .map(|(var, column)| Ok((var.clone(), col(column)?)))
        .collect::<Result<_>>()?;

    // (unit, year) -> values per variable, detecting duplicates as we go.
    let mut cells: BTreeMap<(String, i32), Vec<f64>> = BTreeMap::new();
    for (row_idx, record) in reader.records().enumerate() {
        let row_no = row_idx + 2; // 1-based, after the header
        let record = record.map_err(|_| Error::UnparsableNumber {
            row: row_no,
            column: "<record>".to_string(),
            value: String::new(),
        })?;
        let unit = record.get(unit_col).unwrap_or("").to_string();
        let year_raw = record.get(year_col).unwrap_or("");
        let year: i32 = year_raw.parse().map_err(|_| Error::UnparsableNumber {
            row: row_no,
            column: schema.year_column.clone(),
            value: year_raw.to_string(),
        })?;
        if let Some((min, max)) = schema.year_window {
            if year < min || year > max {
                continue;
            }
        }
        let mut values = Vec::with_capacity(var_cols.len());
        for (var, c) in &var_cols {
            let raw_val = record.get(*c).unwrap_or("");
            let v: f64 = raw_val.parse().map_err(|_| Error::UnparsableNumber {
                row: row_no,
                column: var.clone(),
                value: raw_val.to_string(),
            })?;
            values.push(v);
        }
        if cells.insert((unit.clone(), year), values).is_some() {
            return Err(Error::DuplicateRow { unit, year });
        }
    }
    if cells.is_empty() {
        return Err(Error::EmptyFile);
    }

    let mut units: BTreeSet<String> = BTreeSet::new();
    let mut min_year = i32::MAX;
    let mut max_year = i32::MIN;
    for (unit, year) in cells.keys() {
        units.insert(unit.clone());
        min_year = min_year.min(*year);
        max_year = max_year.max(*year);
    }
    let years: Vec<i32> = (min_year..=max_year).collect();

    // Balance check, optionally dropping incomplete units.
    let mut kept: Vec<String> = Vec::new();
    for unit in &units {
        let missing = years
            .iter()
            .find(|y| !cells.contains_key(&(unit.clone(), **y)));
        match missing {
            None => kept.push(unit.clone()),
            Some(year) if schema.drop_incomplete => {
                log::warn!("dropping unit {unit:?}: no observation for year {year}");
            }
            Some(year) => {
                return Err(Error::MissingCell {
                    unit: unit.clone(),
                    year: *year,
                })
            }
        }
    }
    if kept.is_empty() {
        return Err(Error::EmptyFile);
    }

    let mut variables = BTreeMap::new();
    for (k, (var, _)) in var_cols.iter().enumerate() {
        let mut m = DMatrix::zeros(kept.len(), years.len());
        for (i, unit) in kept.iter().enumerate() {
            for (j, year) in years.iter().enumerate() {
                m[(i, j)] = cells[&(unit.clone(), *year)][k];
            }
        }
        variables.insert(var.clone(), m);
    }
    Ok(PanelDataset {
        unit_ids: kept,
        years,
        variables,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn schema(vars: &[&str]) -> IngestSchema {
        IngestSchema::identity(vars)
    }

    #[test]
    fn minimal_balanced_panel() {
        let csv = "country,year,debt\nB,2001,20\nA,2000,10\nA,2001,11\nB,2000,21\nA,2002,12\nB,2002,22\n";
        let p = ingest_str(csv, &schema(&["debt"])).unwrap();
        assert_eq!(p.n_units(), 2);
        assert_eq!(p.n_years(), 3);
        assert_eq!(p.unit_ids(), &["A".to_string(), "B".to_string()]);
        assert_eq!(p.years(), &[2000, 2001, 2002]);
        let m = p.variable("debt").unwrap();
        assert_eq!(m[(0, 0)], 10.0);
        assert_eq!(m[(1, 2)], 22.0);
    }

    #[test]
    fn missing_row_names_the_hole() {
        let csv = "country,year,debt\nA,2000,10\nA,2001,11\nB,2000,21\n";
        let err = ingest_str(csv, &schema(&["debt"])).unwrap_err();
        match err {
            Error::MissingCell { unit, year } => {
                assert_eq!(unit, "B");
                assert_eq!(year, 2001);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn drop_incomplete_keeps_balanced_units() {
        let csv = "country,year,debt\nA,2000,10\nA,2001,11\nB,2000,21\n";
        let mut s = schema(&["debt"]);
        s.drop_incomplete = true;
        let p = ingest_str(csv, &s).unwrap();
        assert_eq!(p.unit_ids(), &["A".to_string()]);
    }

    #[test]
    fn duplicate_row_rejected() {
        let csv = "country,year,debt\nA,2000,10\nA,2000,11\n";
        let err = ingest_str(csv, &schema(&["debt"])).unwrap_err();
        assert!(matches!(err, Error::DuplicateRow { .. }));
    }

    #[test]
    fn unparsable_number_reports_location() {
        let csv = "country,year,debt\nA,2000,x\n";
        match ingest_str(csv, &schema(&["debt"])).unwrap_err() {
            Error::UnparsableNumber { row, column, value } => {
                assert_eq!(row, 2);
                assert_eq!(column, "debt");
                assert_eq!(value, "x");
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn empty_file_rejected() {
        assert!(matches!(
            ingest_str("country,year,debt\n", &schema(&["debt"])),
            Err(Error::EmptyFile)
        ));
        assert!(matches!(
            ingest_str("", &schema(&["debt"])),
            Err(Error::EmptyFile)
        ));
    }

    #[test]
    fn median_split_at_or_below_goes_low() {
        // unit medians {A:20, B:50, C:80}: median is 50, B sits at it.
        let csv = "country,year,debt\nA,2000,20\nA,2001,20\nB,2000,50\nB,2001,50\nC,2000,80\nC,2001,80\n";
        let p = ingest_str(csv, &schema(&["debt"])).unwrap();
        let (high, low) = p.median_debt_split("debt").unwrap();
        assert_eq!(high.members, vec!["C".to_string()]);
        assert_eq!(low.members, vec!["A".to_string(), "B".to_string()]);
    }

    #[test]
    fn median_split_all_equal_is_degenerate() {
        let csv = "country,year,debt\nA,2000,50\nA,2001,50\nB,2000,50\nB,2001,50\n";
        let p = ingest_str(csv, &schema(&["debt"])).unwrap();
        assert!(matches!(
            p.median_debt_split("debt"),
            Err(Error::DegenerateSplit { .. })
        ));
    }

    #[test]
    fn median_split_even_count_matches_sort_oracle() {
        // Unit medians {A:10, B:20, C:30, D:40}. Sort-based oracle: the
        // even-count median averages the two middle order statistics,
        // (20 + 30) / 2 = 25, so C and D lie strictly above.
        let mut csv = String::from("country,year,debt\n");
        for (u, v) in [("A", 10.0), ("B", 20.0), ("C", 30.0), ("D", 40.0)] {
            csv.push_str(&format!("{u},2000,{v}\n{u},2001,{v}\n"));
        }
        let p = ingest_str(&csv, &schema(&["debt"])).unwrap();

        let mut meds: Vec<f64> = vec![10.0, 20.0, 30.0, 40.0];
        meds.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let oracle = 0.5 * (meds[1] + meds[2]);
        assert_eq!(oracle, 25.0);

        let (high, low) = p.median_debt_split("debt").unwrap();
        assert_eq!(high.members, vec!["C".to_string(), "D".to_string()]);
        assert_eq!(low.members, vec!["A".to_string(), "B".to_string()]);
        assert_eq!(high.members.len() + low.members.len(), p.n_units());
    }

    #[test]
    fn cross_sectional_average_basics() {
        let csv = "country,year,x\nU1,2000,1\nU1,2001,3\nU2,2000,3\nU2,2001,5\n";
        let p = ingest_str(csv, &schema(&["x"])).unwrap();
        let avg = p.cross_sectional_average("x", &p.full_group()).unwrap();
        assert_eq!(avg, vec![2.0, 4.0]);

        let single = GroupSplit::new("one", vec!["U1".to_string()]);
        let avg1 = p.cross_sectional_average("x", &single).unwrap();
        assert_eq!(avg1, vec![1.0, 3.0]);

        assert!(matches!(
            p.cross_sectional_average("nope", &p.full_group()),
            Err(Error::UnknownVariable(_))
        ));
        let empty = GroupSplit::new("none", vec![]);
        assert!(matches!(
            p.cross_sectional_average("x", &empty),
            Err(Error::EmptyGroup(_))
        ));
    }

    #[test]
    fn cross_sectional_average_matches_naive_loop_oracle() {
        let panel = crate::synth::independent_normal_panel(52, 33, 7, "x");
        let avg = panel
            .cross_sectional_average("x", &panel.full_group())
            .unwrap();
        let m = panel.variable("x").unwrap();
        for (j, got) in avg.iter().enumerate() {
            let mut s = 0.0;
            for i in 0..panel.n_units() {
                s += m[(i, j)];
            }
            let want = s / panel.n_units() as f64;
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn synthetic_52_by_33_shape() {
        let panel = crate::synth::synthetic_dataset(0);
        assert_eq!(panel.n_units(), 52);
        assert_eq!(panel.n_years(), 33);
        assert_eq!(panel.years()[0], 1990);
        assert_eq!(*panel.years().last().unwrap(), 2022);
        let text = panel.to_delimited(',');
        let re = ingest_str(
            &text,
            &schema(&panel.variable_names().into_iter().collect::<Vec<_>>()),
        )
        .unwrap();
        assert_eq!(re.n_units(), 52);
        assert_eq!(re.n_years(), 33);
    }

    #[test]
    fn summary_orders_min_median_max() {
        let csv = "country,year,x\nA,2000,5\nA,2001,-1\nB,2000,2\nB,2001,10\n";
        let p = ingest_str(csv, &schema(&["x"])).unwrap();
        let s = p.summary("x").unwrap();
        assert!(s.min <= s.median && s.median <= s.max);
        assert!(s.sd >= 0.0);
        assert_eq!(s.min, -1.0);
        assert_eq!(s.max, 10.0);
        assert_eq!(s.median, 3.5);
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let panel = crate::synth::independent_normal_panel(5, 7, 123, "v");
        let text = panel.to_delimited(',');
        let re = ingest_str(&text, &schema(&["v"])).unwrap();
        assert_eq!(panel, re);
    }

    #[test]
    fn row_order_permutation_is_invisible() {
        let base = "country,year,x\nA,2000,1.5\nA,2001,2.5\nB,2000,3.5\nB,2001,4.5\n";
        let permuted = "country,year,x\nB,2001,4.5\nA,2001,2.5\nB,2000,3.5\nA,2000,1.5\n";
        let p1 = ingest_str(base, &schema(&["x"])).unwrap();
        let p2 = ingest_str(permuted, &schema(&["x"])).unwrap();
        assert_eq!(p1, p2);
    }
}
