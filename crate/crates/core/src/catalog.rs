//! Enumeration of compatible data and the resumable catalog file.
//!
//! A catalog is a tab-separated file: `#` header lines, one record per datum
//! in canonical order, and a `#` summary footer. Columns are
//! `datum verdict provenance agree witness nodes wall_ms`; the timing column
//! comes last so that it can be cut off before comparing runs.

use std::collections::{BTreeMap, HashSet};
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::mpsc;
use std::time::Instant;

use crate::criteria::{classify_with, ClassifyOptions, CriteriaError, Tag, Verdict};
use crate::datum::{infer_cover, BranchDatum};
use crate::partition::{partitions_of, Partition};
use crate::surface::Surface;

pub const COLUMNS: [&str; 7] = ["datum", "verdict", "provenance", "agree", "witness", "nodes", "wall_ms"];

/// Every compatible datum of degree `d` over `base` with `n` in `n_range`
/// and cover accepted by `cover`, each once, in canonical order: by `n`,
/// then by the partition lists in reverse-lexicographic order, then by cover.
pub fn enumerate_compatible(
    d: usize,
    n_range: RangeInclusive<usize>,
    base: Surface,
    cover: Option<Surface>,
) -> Vec<BranchDatum> {
    let mut out = Vec::new();
    if d < 2 {
        return out;
    }
    let parts: Vec<Partition> = partitions_of(d).filter(|p| !p.is_trivial()).collect();
    for n in n_range {
        // multisets as non-decreasing index vectors
        let mut idx = vec![0usize; n];
        loop {
            let chosen: Vec<Partition> = idx.iter().map(|&i| parts[i].clone()).collect();
            for c in infer_cover(base, d, &chosen) {
                if cover.is_some_and(|want| want != c) {
                    continue;
                }
                let datum = BranchDatum::new(c, base, d, chosen.clone()).expect("partitions of degree d");
                if datum.is_compatible() {
                    out.push(datum);
                }
            }
            // next multiset
            let Some(pos) = (0..n).rev().find(|&i| idx[i] + 1 < parts.len()) else { break };
            let v = idx[pos] + 1;
            for x in &mut idx[pos..] {
                *x = v;
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogRecord {
    pub datum: BranchDatum,
    /// `REALIZABLE`, `EXCEPTIONAL`, `UNKNOWN` or `INCOMPATIBLE`.
    pub verdict: String,
    pub provenance: String,
    pub agree: usize,
    /// Compact witness, cycles of each permutation joined by `;`.
    pub witness: Option<String>,
    pub nodes: u64,
    pub wall_ms: u64,
}

impl CatalogRecord {
    pub fn new(datum: BranchDatum, verdict: &Verdict, nodes: u64, wall_ms: u64) -> Self {
        CatalogRecord {
            datum,
            verdict: verdict.keyword().to_string(),
            provenance: verdict.provenance(),
            agree: verdict.agreeing(),
            witness: verdict.witness().map(|w| w.compact()),
            nodes,
            wall_ms,
        }
    }

    pub fn to_line(&self) -> String {
        format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}",
            self.datum,
            self.verdict,
            self.provenance,
            self.agree,
            self.witness.as_deref().unwrap_or("-"),
            self.nodes,
            self.wall_ms
        )
    }

    pub fn parse_line(line: &str) -> Result<Self, String> {
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != COLUMNS.len() {
            return Err(format!("expected {} columns, found {}", COLUMNS.len(), fields.len()));
        }
        let datum: BranchDatum = fields[0].parse().map_err(|e: crate::ParseError| e.to_string())?;
        let verdict = fields[1];
        if !["REALIZABLE", "EXCEPTIONAL", "UNKNOWN", "INCOMPATIBLE"].contains(&verdict) {
            return Err(format!("unknown verdict `{verdict}`"));
        }
        let provenance = fields[2];
        if verdict != "INCOMPATIBLE" {
            provenance.parse::<Tag>().map_err(|e| e.to_string())?;
        }
        let number = |s: &str, what: &str| s.parse::<u64>().map_err(|_| format!("bad {what} `{s}`"));
        let witness = match fields[4] {
            "-" => None,
            w => {
                crate::realizer::Realization::parse_compact(w, datum.degree()).map_err(|e| e.to_string())?;
                Some(w.to_string())
            }
        };
        Ok(CatalogRecord {
            verdict: verdict.to_string(),
            provenance: provenance.to_string(),
            agree: number(fields[3], "agree count")? as usize,
            witness,
            nodes: number(fields[5], "node count")?,
            wall_ms: number(fields[6], "wall time")?,
            datum,
        })
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CatalogError {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("corrupt catalog {path} at line {line}: {message}")]
    Corrupt {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error(transparent)]
    Criteria(#[from] CriteriaError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogConfig {
    pub d_max: usize,
    pub n_max: usize,
    pub budget: u64,
    pub threads: usize,
    pub out: PathBuf,
    pub resume: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CatalogSummary {
    pub total: usize,
    /// Records classified in this run (the rest came from the resumed file).
    pub computed: usize,
    pub by_verdict: BTreeMap<String, usize>,
    pub by_tag: BTreeMap<String, usize>,
    /// Per degree: exceptional records, and how many a predicate decided.
    pub exceptional_by_degree: BTreeMap<usize, (usize, usize)>,
    pub prime_degree_exceptional: usize,
}

impl CatalogSummary {
    fn from_records(records: &[CatalogRecord], computed: usize) -> Self {
        let mut s = CatalogSummary {
            total: records.len(),
            computed,
            ..Self::default()
        };
        for r in records {
            *s.by_verdict.entry(r.verdict.clone()).or_insert(0) += 1;
            *s.by_tag.entry(r.provenance.clone()).or_insert(0) += 1;
            let d = r.datum.degree();
            if r.verdict == "EXCEPTIONAL" {
                let entry = s.exceptional_by_degree.entry(d).or_insert((0, 0));
                entry.0 += 1;
                if r.provenance.parse::<Tag>().is_ok_and(Tag::is_predicate) {
                    entry.1 += 1;
                }
                if is_prime(d) {
                    s.prime_degree_exceptional += 1;
                }
            }
        }
        s
    }

    pub fn footer_lines(&self) -> Vec<String> {
        let mut lines = vec![format!("# summary total={}", self.total)];
        let verdicts: Vec<String> = self.by_verdict.iter().map(|(k, v)| format!("{k}={v}")).collect();
        lines.push(format!("# verdicts {}", verdicts.join(" ")));
        for (tag, count) in &self.by_tag {
            lines.push(format!("# tag {tag}={count}"));
        }
        for (d, (exc, by_pred)) in &self.exceptional_by_degree {
            let pct = 100.0 * *by_pred as f64 / *exc as f64;
            lines.push(format!("# coverage d={d} exceptional={exc} by_predicate={by_pred} ({pct:.1}%)"));
        }
        lines.push(format!("# prime_degree_exceptional={}", self.prime_degree_exceptional));
        lines
    }
}

fn is_prime(d: usize) -> bool {
    d >= 2 && (2..).take_while(|i| i * i <= d).all(|i| d % i != 0)
}

fn header_lines(config: &CatalogConfig) -> Vec<String> {
    vec![
        format!("# hurwitz catalog v{}", env!("CARGO_PKG_VERSION")),
        format!("# d_max={} n_max={} budget={} base=O0", config.d_max, config.n_max, config.budget),
        format!("# {}", COLUMNS.join("\t")),
    ]
}

/// Reads the records of an existing catalog, ignoring `#` lines.
pub fn read_catalog(path: &Path) -> Result<Vec<CatalogRecord>, CatalogError> {
    let io = |source| CatalogError::Io {
        path: path.to_path_buf(),
        source,
    };
    let file = File::open(path).map_err(io)?;
    let mut records = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(io)?;
        if line.starts_with('#') {
            continue;
        }
        let record = CatalogRecord::parse_line(&line).map_err(|message| CatalogError::Corrupt {
            path: path.to_path_buf(),
            line: i + 1,
            message,
        })?;
        records.push(record);
    }
    Ok(records)
}

/// Every datum the catalog covers: base sphere, `2 ≤ d ≤ d_max`, `1 ≤ n ≤ n_max`.
pub fn catalog_data(d_max: usize, n_max: usize) -> Vec<BranchDatum> {
    (2..=d_max)
        .flat_map(|d| enumerate_compatible(d, 1..=n_max, Surface::SPHERE, None))
        .collect()
}

/// Classifies every catalog datum and writes the catalog file. With
/// `resume`, records already in the file are kept and skipped.
pub fn run_catalog(config: &CatalogConfig) -> Result<CatalogSummary, CatalogError> {
    let path = config.out.as_path();
    let io = |source| CatalogError::Io {
        path: path.to_path_buf(),
        source,
    };

    let existing = if config.resume && path.exists() {
        read_catalog(path)?
    } else {
        Vec::new()
    };
    let done: HashSet<String> = existing.iter().map(|r| r.datum.to_string()).collect();
    let todo: Vec<BranchDatum> = catalog_data(config.d_max, config.n_max)
        .into_iter()
        .filter(|d| !done.contains(&d.to_string()))
        .collect();

    // rewrite header and kept records, dropping any old footer
    {
        let mut file = File::create(path).map_err(io)?;
        let mut text = String::new();
        for line in header_lines(config) {
            text.push_str(&line);
            text.push('\n');
        }
        for r in &existing {
            text.push_str(&r.to_line());
            text.push('\n');
        }
        file.write_all(text.as_bytes()).map_err(io)?;
    }
    let mut file = OpenOptions::new().append(true).open(path).map_err(io)?;

    let opts = ClassifyOptions {
        budget: config.budget,
        threads: 1,
        attach_witness: false,
    };
    let mut records = existing;
    let computed = classify_all(&todo, &opts, config.threads.max(1), |record| {
        file.write_all(format!("{}\n", record.to_line()).as_bytes())
            .and_then(|_| file.flush())
            .map_err(io)?;
        records.push(record);
        Ok(())
    })?;

    let summary = CatalogSummary::from_records(&records, computed);
    let mut footer = String::new();
    for line in summary.footer_lines() {
        footer.push_str(&line);
        footer.push('\n');
    }
    file.write_all(footer.as_bytes()).map_err(io)?;
    Ok(summary)
}

fn classify_one(datum: &BranchDatum, opts: &ClassifyOptions) -> Result<CatalogRecord, CriteriaError> {
    let start = Instant::now();
    let c = classify_with(datum, opts)?;
    let ms = start.elapsed().as_millis() as u64;
    Ok(CatalogRecord::new(datum.clone(), &c.verdict, c.nodes, ms))
}

/// Classifies `data` on `threads` workers and hands records to `sink` in
/// input order.
fn classify_all(
    data: &[BranchDatum],
    opts: &ClassifyOptions,
    threads: usize,
    mut sink: impl FnMut(CatalogRecord) -> Result<(), CatalogError>,
) -> Result<usize, CatalogError> {
    let next = AtomicUsize::new(0);
    let (tx, rx) = mpsc::channel::<(usize, Result<CatalogRecord, CriteriaError>)>();
    std::thread::scope(|scope| {
        for _ in 0..threads {
            let tx = tx.clone();
            let next = &next;
            scope.spawn(move || loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= data.len() {
                    break;
                }
                if tx.send((i, classify_one(&data[i], opts))).is_err() {
                    break;
                }
            });
        }
        drop(tx);

        // reorder buffer
        let mut pending: BTreeMap<usize, CatalogRecord> = BTreeMap::new();
        let mut written = 0;
        for (i, result) in rx {
            match result {
                Ok(record) => {
                    pending.insert(i, record);
                }
                Err(e) => {
                    next.store(data.len(), Ordering::Relaxed);
                    return Err(e.into());
                }
            }
            while let Some(record) = pending.remove(&written) {
                if let Err(e) = sink(record) {
                    next.store(data.len(), Ordering::Relaxed);
                    return Err(e);
                }
                written += 1;
            }
        }
        Ok(written)
    })
}
