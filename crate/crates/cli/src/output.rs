use std::io::Write;
use std::path::Path;

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Accumulates the whole output so that nothing is written on failure.
#[derive(Default)]
pub struct Sink {
    buf: String,
}

impl Sink {
    pub fn json<T: Serialize>(&mut self, value: &T) {
        self.buf.push_str(&serde_json::to_string(value).expect("report types serialize"));
        self.buf.push('\n');
    }

    pub fn line(&mut self, s: &str) {
        self.buf.push_str(s);
        self.buf.push('\n');
    }

    /// Writes to `out` through a temporary file in the same directory and an
    /// atomic rename, or to stdout.
    pub fn finish(self, out: Option<&Path>) -> std::io::Result<()> {
        match out {
            None => {
                let mut stdout = std::io::stdout().lock();
                stdout.write_all(self.buf.as_bytes())?;
                stdout.flush()
            }
            Some(path) => {
                let dir = match path.parent() {
                    Some(d) if !d.as_os_str().is_empty() => d,
                    _ => Path::new("."),
                };
                let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
                tmp.write_all(self.buf.as_bytes())?;
                tmp.as_file().sync_all()?;
                tmp.persist(path).map(|_| ()).map_err(|e| e.error)
            }
        }
    }
}

/// A real in CSV output: 17 significant digits.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// A complex number as two CSV columns.
pub fn cnum(z: tetra_core::Complex64) -> String {
    format!("{},{}", num(z.re), num(z.im))
}
