//! Streaming bookmark ingestion from JSONL or TSV files.
//!
//! JSONL: one object per line with `user`, `resource`, a `tags` array and an
//! optional `seq` (non-negative integer or timestamp string).
//!
//! TSV: `user<TAB>resource<TAB>tag1,tag2,...[<TAB>seq]`. Tags are split on
//! `,` with no escaping, so tags containing commas must go through JSONL.

use std::collections::BTreeSet;
use std::fmt;
use std::io::{self, BufRead};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::store::{normalize_tag, Folksonomy, ResourceId};

/// Reading-state tags GoodReads attaches automatically to every bookmark.
pub const GOODREADS_AUTO_TAGS: [&str; 3] = ["read", "currently-reading", "to-read"];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Jsonl,
    Tsv,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "jsonl" => Ok(Format::Jsonl),
            "tsv" => Ok(Format::Tsv),
            other => Err(Error::InvalidConfig(format!("unknown input format {other:?}"))),
        }
    }
}

/// Ordering information attached to a record. Integers sort before
/// timestamps; timestamps compare lexicographically (ISO 8601 sorts correctly).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OrderHint {
    Seq(u64),
    Timestamp(String),
}

impl OrderHint {
    fn parse(field: &str) -> Option<OrderHint> {
        if field.is_empty() {
            return None;
        }
        Some(match field.parse::<u64>() {
            Ok(n) => OrderHint::Seq(n),
            Err(_) => OrderHint::Timestamp(field.to_owned()),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawRecord {
    pub user: String,
    pub resource: String,
    pub tags: Vec<String>,
    #[serde(rename = "seq", default, skip_serializing_if = "Option::is_none")]
    pub order_hint: Option<OrderHint>,
}

/// A line that could not be parsed; 1-based line number.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MalformedLine {
    pub line: u64,
    pub reason: String,
}

impl fmt::Display for MalformedLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.reason)
    }
}

#[derive(Debug)]
pub enum RecordError {
    Malformed(MalformedLine),
    Io(io::Error),
}

/// Iterator over the records of a line-oriented stream, in file order.
/// Blank lines are skipped.
pub struct RecordReader<R> {
    reader: R,
    format: Format,
    line: u64,
    buf: String,
}

impl<R: BufRead> RecordReader<R> {
    pub fn new(reader: R, format: Format) -> Self {
        RecordReader { reader, format, line: 0, buf: String::new() }
    }
}

impl<R: BufRead> Iterator for RecordReader<R> {
    type Item = std::result::Result<RawRecord, RecordError>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            self.buf.clear();
            match self.reader.read_line(&mut self.buf) {
                Ok(0) => return None,
                Ok(_) => {}
                Err(e) => return Some(Err(RecordError::Io(e))),
            }
            self.line += 1;
            let text = self.buf.strip_suffix('\n').unwrap_or(&self.buf);
            if text.trim().is_empty() {
                continue;
            }
            let parsed = match self.format {
                Format::Jsonl => parse_jsonl_line(text),
                Format::Tsv => parse_tsv_line(text),
            };
            return Some(parsed.map_err(|reason| {
                RecordError::Malformed(MalformedLine { line: self.line, reason })
            }));
        }
    }
}

fn parse_jsonl_line(text: &str) -> std::result::Result<RawRecord, String> {
    let record: RawRecord = serde_json::from_str(text).map_err(|e| e.to_string())?;
    validate(record)
}

fn parse_tsv_line(text: &str) -> std::result::Result<RawRecord, String> {
    let fields: Vec<&str> = text.split('\t').collect();
    if !(3..=4).contains(&fields.len()) {
        return Err(format!("expected 3 or 4 tab-separated columns, found {}", fields.len()));
    }
    let tags = fields[2]
        .split(',')
        .filter(|t| !t.trim().is_empty())
        .map(str::to_owned)
        .collect();
    let order_hint = fields.get(3).and_then(|s| OrderHint::parse(s));
    validate(RawRecord {
        user: fields[0].to_owned(),
        resource: fields[1].to_owned(),
        tags,
        order_hint,
    })
}

fn validate(record: RawRecord) -> std::result::Result<RawRecord, String> {
    if record.user.is_empty() {
        return Err("empty user".into());
    }
    if record.resource.is_empty() {
        return Err("empty resource".into());
    }
    Ok(record)
}

/// All well-formed records of a stream plus the tally of rejected lines.
#[derive(Debug, Default)]
pub struct ParsedStream {
    pub records: Vec<RawRecord>,
    pub malformed: Vec<MalformedLine>,
}

/// Reads a whole stream. I/O failures are fatal; malformed lines are
/// collected and skipped.
pub fn parse_stream<R: BufRead>(reader: R, format: Format) -> Result<ParsedStream> {
    let mut out = ParsedStream::default();
    for item in RecordReader::new(reader, format) {
        match item {
            Ok(record) => out.records.push(record),
            Err(RecordError::Malformed(m)) => out.malformed.push(m),
            Err(RecordError::Io(e)) => return Err(e.into()),
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct IngestOptions {
    /// Normalized tags removed from every record before the empty check.
    pub auto_tags: BTreeSet<String>,
    /// When some records lack an order hint, treat file order as chronological.
    /// If false the resulting folksonomy is marked unordered.
    pub file_order_is_chronological: bool,
}

impl Default for IngestOptions {
    fn default() -> Self {
        IngestOptions { auto_tags: BTreeSet::new(), file_order_is_chronological: true }
    }
}

impl IngestOptions {
    pub fn goodreads() -> Self {
        IngestOptions {
            auto_tags: GOODREADS_AUTO_TAGS.iter().map(|t| t.to_string()).collect(),
            ..Default::default()
        }
    }
}

/// Annotated vs total count for one entity kind.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Availability {
    pub annotated: u64,
    pub total: u64,
}

impl Availability {
    /// Percent annotated; 0 when there is nothing to count.
    pub fn percent(&self) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            100.0 * self.annotated as f64 / self.total as f64
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct IngestReport {
    pub users: Availability,
    pub bookmarks: Availability,
    pub resources: Availability,
    pub distinct_tags: u64,
    /// Tag occurrences removed as automatic tags.
    pub auto_tags_stripped: u64,
    pub malformed: Vec<MalformedLine>,
    pub ordered: bool,
}

impl IngestReport {
    pub fn excluded_bookmarks(&self) -> u64 {
        self.bookmarks.total - self.bookmarks.annotated
    }
}

/// Builds a folksonomy from parsed records, stripping automatic tags and
/// dropping bookmarks left without tags.
pub fn build_folksonomy<I>(records: I, options: &IngestOptions) -> (Folksonomy, IngestReport)
where
    I: IntoIterator<Item = RawRecord>,
{
    let mut records: Vec<RawRecord> = records.into_iter().collect();
    let all_hinted = records.iter().all(|r| r.order_hint.is_some());
    if all_hinted {
        // Stable, so equal hints keep file order.
        records.sort_by(|a, b| a.order_hint.cmp(&b.order_hint));
    }
    let ordered = all_hinted || options.file_order_is_chronological;

    let mut report = IngestReport { ordered, ..Default::default() };
    let mut all_users = BTreeSet::new();
    let mut all_resources = BTreeSet::new();
    let mut f = Folksonomy::new();

    for record in records {
        report.bookmarks.total += 1;
        all_users.insert(record.user.clone());
        all_resources.insert(record.resource.clone());
        let mut tags: BTreeSet<String> = BTreeSet::new();
        for raw in &record.tags {
            let tag = normalize_tag(raw);
            if tag.is_empty() {
                continue;
            }
            if options.auto_tags.contains(&tag) {
                report.auto_tags_stripped += 1;
            } else {
                tags.insert(tag);
            }
        }
        if tags.is_empty() {
            continue;
        }
        f.add_bookmark(&record.user, &record.resource, &tags)
            .expect("non-empty tag set");
    }
    if !ordered {
        f.mark_unordered();
    }

    report.users = Availability { annotated: f.n_users(), total: all_users.len() as u64 };
    report.resources = Availability { annotated: f.n_resources(), total: all_resources.len() as u64 };
    report.bookmarks.annotated = f.n_bookmarks();
    report.distinct_tags = f.n_tags() as u64;
    (f, report)
}

/// Parses and builds in one pass; the report carries the malformed-line tally.
pub fn ingest<R: BufRead>(reader: R, format: Format, options: &IngestOptions) -> Result<(Folksonomy, IngestReport)> {
    let parsed = parse_stream(reader, format)?;
    let (f, mut report) = build_folksonomy(parsed.records, options);
    report.malformed = parsed.malformed;
    Ok((f, report))
}

/// Resources annotated by at least `min_users` distinct users.
pub fn filter_popular(f: &Folksonomy, min_users: u64) -> Result<BTreeSet<ResourceId>> {
    if min_users == 0 {
        return Err(Error::InvalidConfig("min_users must be at least 1".into()));
    }
    Ok(f.resources()
        .filter(|&r| {
            let users: BTreeSet<_> = f.resource_bookmarks(r).map(|b| b.user).collect();
            users.len() as u64 >= min_users
        })
        .collect())
}

/// Serializes records as JSONL.
pub fn write_jsonl<W: io::Write>(mut out: W, records: &[RawRecord]) -> Result<()> {
    for record in records {
        serde_json::to_writer(&mut out, record)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}
