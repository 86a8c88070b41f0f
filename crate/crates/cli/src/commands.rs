//! One-shot CLI commands. Each yields the same envelope the HTTP service
//! would send plus a human-readable rendering.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use ecorec_core::text_stats::{load_contingency_csv, parse_keyword_groups, six_significant};
use ecorec_core::{
    chi_square, classify, count_group, count_word_merged, lookup_country, summarize, CountryRecord, Metric,
    StandingResult,
};

use crate::api::{
    ApiEnvelope, ApiError, ChiSquarePayload, GroupCount, Status, SummaryPayload, WordCount, WordCountPayload,
};
use crate::data;

pub struct Outcome {
    pub envelope: ApiEnvelope,
    pub text: String,
}

impl Outcome {
    fn ok(envelope: ApiEnvelope, text: String) -> Self {
        Outcome { envelope, text }
    }

    pub fn is_ok(&self) -> bool {
        self.envelope.status == Status::Ok
    }

    pub fn exit_code(&self) -> i32 {
        if self.is_ok() {
            0
        } else {
            1
        }
    }
}

impl From<ApiError> for Outcome {
    fn from(e: ApiError) -> Self {
        Outcome { text: e.message.clone(), envelope: ApiEnvelope::error(&e) }
    }
}

fn collect(result: Result<Outcome, ApiError>) -> Outcome {
    result.unwrap_or_else(Outcome::from)
}

fn read_file(path: &Path) -> Result<String, ApiError> {
    fs::read_to_string(path).map_err(|e| ApiError::new(500, "Io", format!("{}: {e}", path.display())))
}

pub fn render_standing(r: &StandingResult) -> String {
    let mut out = String::new();
    if let Some(short) = &r.short_label {
        let _ = writeln!(out, "{short}");
    }
    let _ = writeln!(out, "{}", r.long_label);
    let _ = write!(out, "{}", r.reason);
    out
}

pub fn lookup(dataset: &[CountryRecord], name: &str) -> Outcome {
    collect((|| {
        let r = lookup_country(dataset, name)?;
        let text = format!(
            "{}: {}% of plastic waste inadequately managed, {} t per person per year",
            r.name, r.mismanaged_share_pct, r.waste_per_capita
        );
        Ok(Outcome::ok(ApiEnvelope::ok(r), text))
    })())
}

pub fn classify_pct(raw: &str) -> Outcome {
    collect((|| {
        let pct: f64 =
            raw.parse().map_err(|_| ApiError::new(400, "BadRequest", format!("`{raw}` is not a percentage")))?;
        let r = classify(pct).map_err(|e| ApiError::new(400, e.code(), e.to_string()))?;
        Ok(Outcome::ok(ApiEnvelope::ok(&r), render_standing(&r)))
    })())
}

pub fn stats(path: &Path, metric: &str) -> Outcome {
    collect((|| {
        let metric: Metric = metric.parse()?;
        let dataset = data::dataset(Some(path)).map_err(|e| ApiError::new(400, "BadDataset", e))?;
        let summary = summarize(&dataset, metric)?;
        let stdev = summary.sample_stdev.map_or_else(|| "undefined (n = 1)".to_string(), |s| s.to_string());
        let text = format!(
            "metric: {metric}\ncount: {}\nmean: {}\nminimum: {}\nmedian: {}\nmaximum: {}\nsample stdev: {stdev}",
            summary.count, summary.mean, summary.minimum, summary.median, summary.maximum
        );
        Ok(Outcome::ok(ApiEnvelope::ok(&SummaryPayload { metric, summary }), text))
    })())
}

pub fn chisq(path: &Path) -> Outcome {
    collect((|| {
        let body = read_file(path)?;
        let table = load_contingency_csv(body.as_bytes())?;
        let result = chi_square(&table);
        let payload = ChiSquarePayload::new(&table, result);
        let text = render_chisq(&payload);
        Ok(Outcome::ok(ApiEnvelope::ok(&payload), text))
    })())
}

/// Cells read `observed (expected) [component]`.
pub fn render_chisq(p: &ChiSquarePayload) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "\t{}", p.col_labels.join("\t"));
    for (i, label) in p.row_labels.iter().enumerate() {
        let cells: Vec<String> = (0..p.col_labels.len())
            .map(|j| {
                format!("{} ({:.2}) [{:.2}]", p.observed[i][j], p.result.expected[i][j], p.result.components[i][j])
            })
            .collect();
        let _ = writeln!(out, "{label}\t{}", cells.join("\t"));
    }
    let _ = writeln!(out, "The chi-square statistic is {:.4}.", p.result.statistic);
    let _ = writeln!(out, "Degrees of freedom: {}.", p.result.df);
    let p_value = if p.result.p_value < 1e-5 { "< .00001".to_string() } else { six_significant(p.result.p_value) };
    let _ = writeln!(out, "The p-value is {p_value}.");
    let verdict = if p.result.significant_at_5pct {
        "The result is significant at p < .05."
    } else {
        "The result is not significant at p < .05."
    };
    let _ = write!(out, "{verdict}");
    out
}

pub fn wordcount(text_path: &Path, words: &[String], groups_path: Option<&Path>) -> Outcome {
    collect((|| {
        let text = read_file(text_path)?;
        let mut payload = WordCountPayload { words: Vec::new(), groups: Vec::new() };
        for w in words {
            payload.words.push(WordCount { word: w.clone(), count: count_word_merged(&text, w)? });
        }
        if let Some(path) = groups_path {
            for g in parse_keyword_groups(&read_file(path)?)? {
                payload.groups.push(GroupCount {
                    label: g.label().to_string(),
                    keywords: g.keywords().to_vec(),
                    count: count_group(&text, &g),
                });
            }
        }
        let mut rendered = String::new();
        for w in &payload.words {
            let _ = writeln!(rendered, "{}\t{}", w.word, w.count);
        }
        for g in &payload.groups {
            let _ = writeln!(rendered, "{} ({})\t{}", g.label, g.keywords.join(", "), g.count);
        }
        Ok(Outcome::ok(ApiEnvelope::ok(&payload), rendered.trim_end().to_string()))
    })())
}
