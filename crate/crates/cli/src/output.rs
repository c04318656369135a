use clap::ValueEnum;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// One command's result in every format. Rendering is pure, so a fixed
/// configuration always yields the same bytes.
pub struct Output {
    json: String,
    csv: Vec<u8>,
    text: String,
}

pub type RenderError = Box<dyn std::error::Error>;

impl Output {
    pub fn new(json: &impl Serialize, csv: Vec<u8>, text: String) -> Result<Self, carmichael_core::Error> {
        let json = serde_json::to_string_pretty(json)
            .map_err(|e| carmichael_core::Error::Domain(format!("json encoding failed: {e}")))?;
        Ok(Output { json, csv, text })
    }

    pub fn render(&self, format: Format) -> Result<Vec<u8>, RenderError> {
        Ok(match format {
            Format::Json => format!("{}\n", self.json).into_bytes(),
            Format::Csv => self.csv.clone(),
            Format::Text => self.text.clone().into_bytes(),
        })
    }
}

/// CSV with a header row from serialisable records.
pub fn csv_records<T: Serialize>(records: impl IntoIterator<Item = T>) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in records {
        w.serialize(r).expect("records are flat");
    }
    w.into_inner().expect("in-memory writer")
}

/// CSV from an explicit header and string rows.
pub fn csv_table(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory writer");
    for row in rows {
        w.write_record(&row).expect("in-memory writer");
    }
    w.into_inner().expect("in-memory writer")
}

/// Left-aligned text table with two spaces between columns.
pub fn text_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let line = |cells: &mut dyn Iterator<Item = &str>| {
        let mut s = cells
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect::<Vec<_>>()
            .join("  ");
        s.truncate(s.trim_end().len());
        s.push('\n');
        s
    };
    let mut out = line(&mut header.iter().copied());
    for row in rows {
        out += &line(&mut row.iter().map(|s| s.as_str()));
    }
    out
}
