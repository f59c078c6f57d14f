use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use varlap::{Result, VERSION};

/// Destination for a table or report: a file or stdout.
pub fn sink(out: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// Run configuration recorded as `key=value` pairs in CSV comment lines.
#[derive(Default)]
pub struct Config {
    pairs: Vec<(String, String)>,
}

impl Config {
    pub fn new(command: &str) -> Self {
        let mut c = Self::default();
        c.set("command", command);
        c
    }

    pub fn set(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.pairs.push((key.to_string(), value.to_string()));
        self
    }

    pub fn comment(&self) -> String {
        let body: Vec<String> = self.pairs.iter().map(|(k, v)| format!("{k}={v}")).collect();
        format!("# varlap {VERSION} {}", body.join(" "))
    }
}

/// Comment line followed by a CSV table.
pub struct Table {
    writer: csv::Writer<Box<dyn Write>>,
}

impl Table {
    pub fn create(out: Option<&Path>, config: &Config, header: &[&str]) -> Result<Self> {
        let mut raw = sink(out)?;
        writeln!(raw, "{}", config.comment())?;
        let mut writer = csv::Writer::from_writer(raw);
        writer.write_record(header)?;
        Ok(Self { writer })
    }

    pub fn row<I, S>(&mut self, fields: I) -> Result<()>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        self.writer.write_record(fields)?;
        Ok(())
    }

    pub fn finish(mut self) -> Result<()> {
        self.writer.flush()?;
        Ok(())
    }
}

/// Shortest round-trip rendering of a float, with an exponent for very
/// small or large magnitudes.
pub fn num(x: f64) -> String {
    format!("{x:?}")
}
