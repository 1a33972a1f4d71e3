//! From dispensing records to a co-medication edge list.
//!
//! The pipeline runs in four steps:
//!
//! 1. [`parse_dispensing`] reads long-form dispensing rows.
//! 2. [`build_episodes`] turns fills into continuous treatment episodes. Each
//!    fill covers `ceil(ddd × adherence_factor)` days from its dispense date
//!    and fills separated by at most `gap_days` uncovered days are merged.
//! 3. [`active_at`] takes the set of drugs each patient is covered by on the
//!    index date.
//! 4. [`build_edge_list`] counts, for every drug pair, the patients using both.

use std::borrow::Cow;
use std::collections::{BTreeMap, BTreeSet};
use std::io::Read;

use chrono::{Days, NaiveDate};
use serde::{Deserialize, Serialize};

use crate::atc::{self, AtcCode};
use crate::error::{Error, Result, RowDiagnostic};

pub const COL_PATIENT: &str = "patient_id";
pub const COL_ATC: &str = "atc";
pub const COL_NAME: &str = "name";
pub const COL_DATE: &str = "date";
pub const COL_DDD: &str = "ddd";

/// One dispensed prescription.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DispensingRecord {
    pub patient_id: String,
    pub atc: AtcCode,
    pub drug_name: Option<String>,
    pub dispense_date: NaiveDate,
    /// Number of defined daily doses dispensed; always positive.
    pub ddd_quantity: f64,
    /// Columns beyond the five required ones (sex, birth year, ...).
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub extra: BTreeMap<String, String>,
}

impl DispensingRecord {
    /// Value of a named column, standard or extra.
    pub fn field(&self, column: &str) -> Option<Cow<'_, str>> {
        match column {
            COL_PATIENT => Some(Cow::Borrowed(&self.patient_id)),
            COL_ATC => Some(Cow::Borrowed(self.atc.as_str())),
            COL_NAME => self.drug_name.as_deref().map(Cow::Borrowed),
            COL_DATE => Some(Cow::Owned(self.dispense_date.to_string())),
            COL_DDD => Some(Cow::Owned(self.ddd_quantity.to_string())),
            other => self.extra.get(other).map(|v| Cow::Borrowed(v.as_str())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ParseMode {
    /// Abort on the first malformed row.
    #[default]
    Strict,
    /// Skip malformed rows and count them.
    Lenient,
}

#[derive(Debug, Clone)]
pub struct ParseOptions {
    pub delimiter: u8,
    pub mode: ParseMode,
}

impl Default for ParseOptions {
    fn default() -> Self {
        ParseOptions {
            delimiter: b',',
            mode: ParseMode::Strict,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct ParsedDispensing {
    pub records: Vec<DispensingRecord>,
    pub skipped: usize,
    pub diagnostics: Vec<RowDiagnostic>,
}

struct Columns {
    patient: usize,
    atc: usize,
    name: usize,
    date: usize,
    ddd: usize,
    extra: Vec<(usize, String)>,
}

impl Columns {
    fn from_header(header: &csv::StringRecord) -> Result<Self> {
        let find = |name: &str| {
            header
                .iter()
                .position(|h| h.trim() == name)
                .ok_or_else(|| Error::MissingColumn(name.to_owned()))
        };
        let patient = find(COL_PATIENT)?;
        let atc = find(COL_ATC)?;
        let name = find(COL_NAME)?;
        let date = find(COL_DATE)?;
        let ddd = find(COL_DDD)?;
        let known = [patient, atc, name, date, ddd];
        let extra = header
            .iter()
            .enumerate()
            .filter(|(i, _)| !known.contains(i))
            .map(|(i, h)| (i, h.trim().to_owned()))
            .collect();
        Ok(Columns {
            patient,
            atc,
            name,
            date,
            ddd,
            extra,
        })
    }

    fn record(&self, row: &csv::StringRecord) -> std::result::Result<DispensingRecord, String> {
        let get = |i: usize| row.get(i).map(str::trim).unwrap_or("");
        if row.len() < self.extra.iter().map(|(i, _)| *i + 1).chain([
            self.patient + 1,
            self.atc + 1,
            self.name + 1,
            self.date + 1,
            self.ddd + 1,
        ])
        .max()
        .unwrap_or(0)
        {
            return Err(format!("expected more fields, found {}", row.len()));
        }

        let patient_id = get(self.patient);
        if patient_id.is_empty() {
            return Err("empty patient_id".into());
        }
        let atc = AtcCode::parse(get(self.atc)).map_err(|e| e.to_string())?;
        let dispense_date = NaiveDate::parse_from_str(get(self.date), "%Y-%m-%d")
            .map_err(|e| format!("malformed date `{}`: {e}", get(self.date)))?;
        let raw_qty = get(self.ddd);
        let ddd_quantity: f64 = raw_qty
            .parse()
            .map_err(|_| format!("malformed DDD quantity `{raw_qty}`"))?;
        if !(ddd_quantity.is_finite() && ddd_quantity > 0.0) {
            return Err(format!("DDD quantity must be positive, got `{raw_qty}`"));
        }
        let name = get(self.name);
        Ok(DispensingRecord {
            patient_id: patient_id.to_owned(),
            atc,
            drug_name: (!name.is_empty()).then(|| name.to_owned()),
            dispense_date,
            ddd_quantity,
            extra: self
                .extra
                .iter()
                .map(|(i, key)| (key.clone(), get(*i).to_owned()))
                .collect(),
        })
    }
}

/// Parse delimited dispensing rows with a header naming
/// `patient_id,atc,name,date,ddd` (any order, extra columns kept).
pub fn parse_dispensing<R: Read>(source: R, options: &ParseOptions) -> Result<ParsedDispensing> {
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(options.delimiter)
        .flexible(true)
        .has_headers(true)
        .from_reader(source);
    let columns = Columns::from_header(reader.headers()?)?;

    let mut out = ParsedDispensing::default();
    let mut row = csv::StringRecord::new();
    loop {
        let line_hint = reader.position().line();
        match reader.read_record(&mut row) {
            Ok(false) => break,
            Ok(true) => {
                let line = row.position().map_or(line_hint, |p| p.line());
                match columns.record(&row) {
                    Ok(record) => out.records.push(record),
                    Err(message) => {
                        let diag = RowDiagnostic { line, message };
                        if options.mode == ParseMode::Strict {
                            return Err(Error::Row(diag));
                        }
                        out.skipped += 1;
                        out.diagnostics.push(diag);
                    }
                }
            }
            Err(e) if options.mode == ParseMode::Lenient && !matches!(e.kind(), csv::ErrorKind::Io(_)) => {
                out.skipped += 1;
                out.diagnostics.push(RowDiagnostic {
                    line: e.position().map_or(line_hint, |p| p.line()),
                    message: e.to_string(),
                });
            }
            Err(e) => return Err(e.into()),
        }
    }
    Ok(out)
}

/// Episode construction parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpisodeParams {
    /// Multiplier on the nominal one-DDD-per-day duration; at least 1.
    pub adherence_factor: f64,
    /// Longest medication-free gap, in days, that does not end an episode.
    pub gap_days: u32,
}

impl Default for EpisodeParams {
    fn default() -> Self {
        EpisodeParams {
            adherence_factor: 1.2,
            gap_days: 14,
        }
    }
}

/// A continuous coverage interval for one patient and one drug, both ends
/// inclusive.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TreatmentEpisode {
    pub patient_id: String,
    pub atc: AtcCode,
    pub start_date: NaiveDate,
    pub end_date: NaiveDate,
}

impl TreatmentEpisode {
    pub fn covers(&self, date: NaiveDate) -> bool {
        self.start_date <= date && date <= self.end_date
    }
}

// Products such as 50 × 1.1 land a hair above the integer in binary floating point.
const CEIL_SLACK: f64 = 1e-9;

/// Days covered by one fill: `ceil(ddd × factor)`, at least one.
pub fn covered_days(ddd_quantity: f64, adherence_factor: f64) -> u64 {
    ((ddd_quantity * adherence_factor - CEIL_SLACK).ceil() as u64).max(1)
}

fn fill_interval(record: &DispensingRecord, factor: f64) -> Result<(NaiveDate, NaiveDate)> {
    let days = covered_days(record.ddd_quantity, factor);
    let end = record
        .dispense_date
        .checked_add_days(Days::new(days - 1))
        .ok_or_else(|| {
            Error::InvalidParameter(format!(
                "fill of {} DDD on {} runs past the calendar range",
                record.ddd_quantity, record.dispense_date
            ))
        })?;
    Ok((record.dispense_date, end))
}

/// Merge fills into treatment episodes, sorted by patient, drug and start.
pub fn build_episodes(records: &[DispensingRecord], params: &EpisodeParams) -> Result<Vec<TreatmentEpisode>> {
    if !(params.adherence_factor.is_finite() && params.adherence_factor >= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "adherence factor must be >= 1, got {}",
            params.adherence_factor
        )));
    }

    let mut fills: BTreeMap<(&str, &AtcCode), Vec<(NaiveDate, NaiveDate)>> = BTreeMap::new();
    for record in records {
        fills
            .entry((record.patient_id.as_str(), &record.atc))
            .or_default()
            .push(fill_interval(record, params.adherence_factor)?);
    }

    let gap = i64::from(params.gap_days);
    let mut episodes = Vec::new();
    for ((patient, atc), mut intervals) in fills {
        intervals.sort_unstable();
        let mut iter = intervals.into_iter();
        let Some((mut start, mut end)) = iter.next() else {
            continue;
        };
        for (next_start, next_end) in iter {
            let uncovered = (next_start - end).num_days() - 1;
            if uncovered <= gap {
                end = end.max(next_end);
            } else {
                episodes.push(TreatmentEpisode {
                    patient_id: patient.to_owned(),
                    atc: atc.clone(),
                    start_date: start,
                    end_date: end,
                });
                start = next_start;
                end = next_end;
            }
        }
        episodes.push(TreatmentEpisode {
            patient_id: patient.to_owned(),
            atc: atc.clone(),
            start_date: start,
            end_date: end,
        });
    }
    Ok(episodes)
}

/// Drugs each patient is covered by on `index_date`.
pub fn active_at(episodes: &[TreatmentEpisode], index_date: NaiveDate) -> BTreeMap<String, BTreeSet<String>> {
    let mut active: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
    for episode in episodes.iter().filter(|e| e.covers(index_date)) {
        active
            .entry(episode.patient_id.clone())
            .or_default()
            .insert(episode.atc.as_str().to_owned());
    }
    active
}

/// ATC codes dropped before network construction.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ExclusionList {
    codes: BTreeSet<String>,
}

impl ExclusionList {
    pub fn new<I, S>(codes: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let codes = codes
            .into_iter()
            .map(|c| {
                let c = c.as_ref().trim();
                if atc::is_valid(c) {
                    Ok(c.to_owned())
                } else {
                    Err(Error::InvalidAtc(c.to_owned()))
                }
            })
            .collect::<Result<_>>()?;
        Ok(ExclusionList { codes })
    }

    /// One code per line, taken from the first comma-separated field. Blank
    /// lines, `#` comments and an `atc` header line are ignored.
    pub fn parse<R: Read>(mut source: R) -> Result<Self> {
        let mut text = String::new();
        source.read_to_string(&mut text)?;
        let codes = text
            .lines()
            .map(|l| l.split(',').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty() && !l.starts_with('#') && !l.eq_ignore_ascii_case("atc"));
        Self::new(codes)
    }

    pub fn contains(&self, code: &str) -> bool {
        self.codes.contains(code)
    }

    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }
}

/// One aggregated co-medication pair, canonical with `drug_a < drug_b`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EdgeListEntry {
    pub drug_a: String,
    pub drug_b: String,
    /// Number of patients co-medicated with both drugs.
    pub weight: u64,
}

impl EdgeListEntry {
    pub fn new(drug_a: impl Into<String>, drug_b: impl Into<String>, weight: u64) -> Self {
        EdgeListEntry {
            drug_a: drug_a.into(),
            drug_b: drug_b.into(),
            weight,
        }
    }
}

/// Every drug that survives exclusion in at least one patient's active set.
pub fn cohort_drugs(active: &BTreeMap<String, BTreeSet<String>>, exclusions: &ExclusionList) -> BTreeSet<String> {
    active
        .values()
        .flatten()
        .filter(|d| !exclusions.contains(d))
        .cloned()
        .collect()
}

/// Count patients per unordered drug pair.
pub fn build_edge_list(active: &BTreeMap<String, BTreeSet<String>>, exclusions: &ExclusionList) -> Vec<EdgeListEntry> {
    let mut counts: BTreeMap<(&str, &str), u64> = BTreeMap::new();
    for drugs in active.values() {
        let kept: Vec<&str> = drugs
            .iter()
            .map(String::as_str)
            .filter(|d| !exclusions.contains(d))
            .collect();
        // BTreeSet iteration is sorted, so (kept[i], kept[j]) with i < j is canonical.
        for (i, a) in kept.iter().enumerate() {
            for b in &kept[i + 1..] {
                *counts.entry((a, b)).or_insert(0) += 1;
            }
        }
    }
    counts
        .into_iter()
        .map(|((a, b), w)| EdgeListEntry::new(a, b, w))
        .collect()
}

/// First non-empty drug name seen for each ATC code.
pub fn drug_names(records: &[DispensingRecord]) -> BTreeMap<String, String> {
    let mut names = BTreeMap::new();
    for r in records {
        if let Some(name) = &r.drug_name {
            names.entry(r.atc.as_str().to_owned()).or_insert_with(|| name.clone());
        }
    }
    names
}
