//! CSV emission: comma separated, `.` decimal point, 16 significant digits in
//! scientific notation, a header row and `\n` line endings. Optional `#`
//! lines ahead of the header carry run notes.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::CliError;

pub fn number(v: f64) -> String {
    format!("{v:.15e}")
}

pub fn optional(v: Option<f64>) -> String {
    v.map(number).unwrap_or_default()
}

/// In-memory table, written in one go so a failed run leaves no partial file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub notes: Vec<String>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self {
            notes: Vec::new(),
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn note(&mut self, note: impl Into<String>) -> &mut Self {
        self.notes.push(note.into());
        self
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_bytes(&self) -> Result<Vec<u8>, csv::Error> {
        let mut out = Vec::new();
        for note in &self.notes {
            for line in note.lines() {
                out.extend_from_slice(format!("# {line}\n").as_bytes());
            }
        }
        let mut writer = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(&mut out);
        writer.write_record(&self.header)?;
        for row in &self.rows {
            writer.write_record(row)?;
        }
        writer.flush()?;
        drop(writer);
        Ok(out)
    }

    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        let io = |source| CliError::Io {
            path: path.to_path_buf(),
            source,
        };
        let bytes = self.to_bytes().map_err(|e| io(e.into()))?;
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir).map_err(|source| CliError::Io {
                path: dir.to_path_buf(),
                source,
            })?;
        }
        let mut file = BufWriter::new(File::create(path).map_err(io)?);
        file.write_all(&bytes).map_err(io)?;
        file.flush().map_err(io)?;
        log::info!("wrote {}", path.display());
        Ok(())
    }
}
