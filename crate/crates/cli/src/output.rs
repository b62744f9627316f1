use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

/// Standard output, or a file when `--output` is given.
pub fn sink(path: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// `f64` for CSV cells: shortest round-trip form.
pub fn float(x: f64) -> String {
    format!("{x:?}")
}
