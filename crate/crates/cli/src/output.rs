use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use anyhow::Context;

/// Destination for CSV and report output.
pub struct Sink {
    inner: Box<dyn Write>,
}

impl Sink {
    pub fn new(path: Option<&Path>) -> anyhow::Result<Self> {
        let inner: Box<dyn Write> = match path {
            Some(p) => Box::new(BufWriter::new(
                File::create(p).with_context(|| format!("creating {}", p.display()))?,
            )),
            None => Box::new(BufWriter::new(io::stdout())),
        };
        Ok(Self { inner })
    }

    pub fn csv(&mut self) -> csv::Writer<&mut dyn Write> {
        csv::Writer::from_writer(&mut *self.inner)
    }

    pub fn line(&mut self, text: impl AsRef<str>) -> anyhow::Result<()> {
        writeln!(self.inner, "{}", text.as_ref())?;
        Ok(())
    }

    pub fn writer(&mut self) -> &mut dyn Write {
        &mut *self.inner
    }

    pub fn finish(&mut self) -> anyhow::Result<()> {
        self.inner.flush()?;
        Ok(())
    }
}

/// Full-precision float formatting shared by every CSV column.
pub fn f(x: f64) -> String {
    format!("{x:.16e}")
}
