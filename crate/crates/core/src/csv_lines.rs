//! Line numbers for CSV records.
//!
//! The csv reader reports a record's position as the point where it started
//! scanning, which sits before any blank or `#` comment lines it skipped. These
//! helpers keep the raw input around and map that offset onto the line the
//! record actually starts on.

use std::io::{self, Read};

pub(crate) struct Source {
    data: Vec<u8>,
}

impl Source {
    pub(crate) fn read<R: Read>(mut source: R) -> io::Result<Self> {
        let mut data = Vec::new();
        source.read_to_end(&mut data)?;
        Ok(Source { data })
    }

    pub(crate) fn reader(&self) -> csv::Reader<&[u8]> {
        csv::ReaderBuilder::new().has_headers(true).flexible(true).comment(Some(b'#')).from_reader(&self.data[..])
    }

    /// 1-based line of the first non-blank, non-comment line at or after `byte`.
    pub(crate) fn line_at(&self, byte: u64) -> u64 {
        let mut pos = (byte as usize).min(self.data.len());
        loop {
            let rest = &self.data[pos..];
            let Some(end) = rest.iter().position(|&b| b == b'\n') else { break };
            let line = rest[..end].strip_suffix(b"\r").unwrap_or(&rest[..end]);
            if line.is_empty() || line[0] == b'#' {
                pos += end + 1;
            } else {
                break;
            }
        }
        1 + self.data[..pos].iter().filter(|&&b| b == b'\n').count() as u64
    }

    pub(crate) fn record_line(&self, record: &csv::StringRecord) -> u64 {
        record.position().map_or(0, |p| self.line_at(p.byte()))
    }

    pub(crate) fn error_line(&self, err: &csv::Error) -> u64 {
        err.position().map_or(0, |p| self.line_at(p.byte()))
    }
}
