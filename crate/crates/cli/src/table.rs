use std::path::Path;

use crate::error::CliError;

/// A header plus rows of already-serialized cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableFile {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl TableFile {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push_row(&mut self, row: Vec<String>) {
        assert_eq!(row.len(), self.header.len(), "row width must match header");
        self.rows.push(row);
    }

    pub fn header(&self) -> &[String] {
        &self.header
    }

    pub fn rows(&self) -> &[Vec<String>] {
        &self.rows
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    pub fn write_csv(&self, path: &Path) -> Result<(), CliError> {
        let mut writer = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_path(path)?;
        writer.write_record(&self.header)?;
        for row in &self.rows {
            writer.write_record(row)?;
        }
        writer.flush()?;
        Ok(())
    }

    pub fn read_csv(path: &Path) -> Result<Self, CliError> {
        let mut reader = csv::Reader::from_path(path)?;
        let mut table = TableFile::new(reader.headers()?.iter().map(str::to_string));
        for record in reader.records() {
            table.push_row(record?.iter().map(str::to_string).collect());
        }
        Ok(table)
    }
}
