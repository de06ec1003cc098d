//! Segment-list JSONL parsing, session grouping and report serialization.
//!
//! The input format is one JSON object per line with the required fields
//! `session_id`, `speaker` and `words` and the optional fields `start_time`
//! and `end_time`. The same format carries references and hypotheses; for a
//! hypothesis the `speaker` field names the output channel. Unknown fields
//! are ignored.
//!
//! Reports serialize as canonical JSON (sorted keys, exact integer counts,
//! compact separators, one trailing newline) so identical inputs produce
//! byte-identical reports.

use std::collections::BTreeMap;
use std::io::BufRead;

use serde::{Deserialize, Serialize};
use serde_json::{Value, json};

use crate::error::{MevalError, Result};
use crate::types::{
    Channel, CostConfig, ErrorCounts, HypothesisSet, Rate, ReferenceSet, Speaker, Utterance,
    WerResult, tokenize,
};

/// Version tag written into every report.
pub const REPORT_SCHEMA: &str = "meval-report-v1";

/// One parsed segment line. For references `speaker` is the reference
/// speaker label; for hypotheses it names the output channel.
#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
pub struct SegmentRecord {
    pub session_id: String,
    pub speaker: String,
    pub words: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start_time: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub end_time: Option<f64>,
    /// Line number the segment was parsed from; not part of the wire format.
    #[serde(skip)]
    pub source_index: usize,
}

impl SegmentRecord {
    fn validate(&self, line: usize) -> Result<()> {
        let fail = |message: String| Err(MevalError::Parse { line, message });
        if self.session_id.is_empty() {
            return fail("session_id must be non-empty".to_string());
        }
        if self.speaker.is_empty() {
            return fail("speaker must be non-empty".to_string());
        }
        for (name, time) in [("start_time", self.start_time), ("end_time", self.end_time)] {
            if let Some(t) = time
                && (!t.is_finite() || t < 0.0)
            {
                return fail(format!("{name} must be a non-negative real, got {t}"));
            }
        }
        if let (Some(start), Some(end)) = (self.start_time, self.end_time)
            && end < start
        {
            return fail(format!("end_time {end} precedes start_time {start}"));
        }
        Ok(())
    }
}

/// Parse newline-delimited JSON segments, preserving order. Blank lines are
/// skipped; anything else that fails to parse or validate reports its
/// 1-based line number.
pub fn parse_seglst(reader: impl BufRead) -> Result<Vec<SegmentRecord>> {
    let mut records = Vec::new();
    for (index, line) in reader.lines().enumerate() {
        let line_no = index + 1;
        let text = line.map_err(|e| MevalError::Parse {
            line: line_no,
            message: e.to_string(),
        })?;
        if text.trim().is_empty() {
            continue;
        }
        let mut record: SegmentRecord =
            serde_json::from_str(&text).map_err(|e| MevalError::Parse {
                line: line_no,
                message: e.to_string(),
            })?;
        record.source_index = line_no;
        record.validate(line_no)?;
        records.push(record);
    }
    Ok(records)
}

/// One scorable session: the grouped reference and hypothesis sides.
#[derive(Debug, Clone, PartialEq)]
pub struct Session {
    pub session_id: String,
    pub reference: ReferenceSet,
    pub hypothesis: HypothesisSet,
}

/// Bucket records by session id and build the per-session reference and
/// hypothesis sets. Speakers and channels keep first-appearance order;
/// sessions present on only one side get an empty counterpart (an empty
/// hypothesis side becomes a single empty channel with an empty label).
/// Sessions come back sorted by id.
pub fn group_sessions(
    ref_records: &[SegmentRecord],
    hyp_records: &[SegmentRecord],
) -> Result<Vec<Session>> {
    let mut sessions: BTreeMap<&str, (Vec<&SegmentRecord>, Vec<&SegmentRecord>)> = BTreeMap::new();
    for record in ref_records {
        sessions
            .entry(&record.session_id)
            .or_default()
            .0
            .push(record);
    }
    for record in hyp_records {
        sessions
            .entry(&record.session_id)
            .or_default()
            .1
            .push(record);
    }

    sessions
        .into_iter()
        .map(|(session_id, (refs, hyps))| {
            let reference = build_reference(&refs)?;
            let hypothesis = build_hypothesis(&hyps);
            Ok(Session {
                session_id: session_id.to_string(),
                reference,
                hypothesis,
            })
        })
        .collect()
}

fn build_reference(records: &[&SegmentRecord]) -> Result<ReferenceSet> {
    let mut order: Vec<&str> = Vec::new();
    let mut by_speaker: BTreeMap<&str, Vec<Utterance>> = BTreeMap::new();
    for record in records {
        if !by_speaker.contains_key(record.speaker.as_str()) {
            order.push(&record.speaker);
        }
        by_speaker
            .entry(&record.speaker)
            .or_default()
            .push(Utterance::new(
                tokenize(&record.words),
                record.start_time,
                record.source_index,
            )?);
    }
    Ok(ReferenceSet::new(
        order
            .into_iter()
            .map(|label| Speaker::new(label, by_speaker.remove(label).unwrap()))
            .collect(),
    ))
}

fn build_hypothesis(records: &[&SegmentRecord]) -> HypothesisSet {
    if records.is_empty() {
        return HypothesisSet::new(vec![Channel::new("", Vec::new())]);
    }
    let mut order: Vec<&str> = Vec::new();
    let mut by_channel: BTreeMap<&str, Vec<&SegmentRecord>> = BTreeMap::new();
    for record in records {
        if !by_channel.contains_key(record.speaker.as_str()) {
            order.push(&record.speaker);
        }
        by_channel.entry(&record.speaker).or_default().push(record);
    }
    HypothesisSet::new(
        order
            .into_iter()
            .map(|label| {
                let mut segments = by_channel.remove(label).unwrap();
                // Emission order: start time when every segment has one,
                // else input-file order; stable on the source index.
                if segments.iter().all(|s| s.start_time.is_some()) {
                    segments.sort_by(|a, b| {
                        a.start_time
                            .unwrap()
                            .total_cmp(&b.start_time.unwrap())
                            .then(a.source_index.cmp(&b.source_index))
                    });
                } else {
                    segments.sort_by_key(|s| s.source_index);
                }
                let words = segments.iter().flat_map(|s| tokenize(&s.words)).collect();
                Channel::new(label, words)
            })
            .collect(),
    )
}

/// Metadata block recorded in every report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportMetadata {
    pub version: String,
    pub method: String,
    pub costs: CostConfig,
}

impl ReportMetadata {
    pub fn new(method: impl Into<String>, costs: CostConfig) -> Self {
        ReportMetadata {
            version: env!("CARGO_PKG_VERSION").to_string(),
            method: method.into(),
            costs,
        }
    }
}

/// Scoring results for a corpus: per-session results per metric, pooled into
/// micro-averaged aggregates on serialization.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    metadata: ReportMetadata,
    metrics: Vec<String>,
    sessions: BTreeMap<String, BTreeMap<String, WerResult>>,
}

impl Report {
    pub fn new(metadata: ReportMetadata) -> Self {
        Report {
            metadata,
            metrics: Vec::new(),
            sessions: BTreeMap::new(),
        }
    }

    /// Register a metric so it aggregates (to zero) even over an empty
    /// corpus.
    pub fn ensure_metric(&mut self, metric: &str) {
        if !self.metrics.iter().any(|m| m == metric) {
            self.metrics.push(metric.to_string());
        }
    }

    pub fn insert(&mut self, session_id: &str, metric: &str, result: WerResult) {
        self.ensure_metric(metric);
        self.sessions
            .entry(session_id.to_string())
            .or_default()
            .insert(metric.to_string(), result);
    }

    pub fn sessions(&self) -> &BTreeMap<String, BTreeMap<String, WerResult>> {
        &self.sessions
    }

    /// Pooled counts per metric: the fieldwise sum over sessions.
    pub fn aggregate(&self) -> Result<BTreeMap<String, ErrorCounts>> {
        let mut totals: BTreeMap<String, ErrorCounts> = self
            .metrics
            .iter()
            .map(|m| (m.clone(), ErrorCounts::default()))
            .collect();
        for by_metric in self.sessions.values() {
            for (metric, result) in by_metric {
                let entry = totals.entry(metric.clone()).or_default();
                *entry = entry.combine(result.counts())?;
            }
        }
        Ok(totals)
    }
}

fn rate_fields(rate: Rate) -> (Value, Value) {
    let decimal = match rate.decimal_string() {
        Some(s) if rate.is_defined() => Value::String(s),
        // A zero-length reference has no meaningful rate even when no
        // errors were counted.
        _ => Value::Null,
    };
    (Value::String(rate.ratio_string()), decimal)
}

fn counts_value(counts: &ErrorCounts) -> Value {
    json!({
        "correct": counts.correct,
        "deletions": counts.deletions,
        "insertions": counts.insertions,
        "ref_length": counts.ref_length,
        "substitutions": counts.substitutions,
    })
}

fn result_value(result: &WerResult) -> Value {
    let (ratio, rate) = rate_fields(result.rate());
    json!({
        "assignment": result.assignment(),
        "counts": counts_value(result.counts()),
        "errors": result.counts().errors(),
        "length": result.counts().ref_length,
        "rate": rate,
        "ratio": ratio,
    })
}

/// Serialize a report as canonical JSON: sorted keys, compact separators,
/// one trailing newline. Byte-identical across runs for identical inputs.
pub fn write_report(report: &Report) -> Result<Vec<u8>> {
    let aggregate: BTreeMap<String, Value> = report
        .aggregate()?
        .into_iter()
        .map(|(metric, counts)| {
            let (ratio, rate) = rate_fields(counts.rate());
            let value = json!({
                "counts": counts_value(&counts),
                "errors": counts.errors(),
                "length": counts.ref_length,
                "rate": rate,
                "ratio": ratio,
            });
            (metric, value)
        })
        .collect();
    let sessions: BTreeMap<&String, Value> = report
        .sessions
        .iter()
        .map(|(id, by_metric)| {
            let metrics: BTreeMap<&String, Value> = by_metric
                .iter()
                .map(|(metric, result)| (metric, result_value(result)))
                .collect();
            (id, json!(metrics))
        })
        .collect();
    let document = json!({
        "aggregate": aggregate,
        "metadata": report.metadata,
        "schema": REPORT_SCHEMA,
        "sessions": sessions,
    });
    let mut bytes = serde_json::to_vec(&document).expect("report serialization cannot fail");
    bytes.push(b'\n');
    Ok(bytes)
}
