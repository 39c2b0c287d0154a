use std::io::Write;
use std::path::Path;

use num_complex::Complex64;

use denomlab::stats::format::g12;

/// Writes `text` to `path` through a temporary file in the same directory.
pub fn write_atomic(path: &Path, text: &str) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(text.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

pub fn emit(path: Option<&Path>, text: &str) -> std::io::Result<()> {
    match path {
        Some(p) => write_atomic(p, text),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()
        }
    }
}

/// `a`, `a+bi` or `a-bi` with 12 significant digits.
pub fn complex(z: Complex64) -> String {
    if z.im == 0.0 {
        g12(z.re)
    } else if z.im < 0.0 {
        format!("{}-{}i", g12(z.re), g12(-z.im))
    } else {
        format!("{}+{}i", g12(z.re), g12(z.im))
    }
}

/// A real value as a number, a complex one as `{"re": .., "im": ..}`.
pub fn complex_json(z: Complex64, force_complex: bool) -> serde_json::Value {
    if z.im == 0.0 && !force_complex {
        serde_json::json!(z.re)
    } else {
        serde_json::json!({ "re": z.re, "im": z.im })
    }
}

pub fn json_text(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string(v).expect("values serialize");
    s.push('\n');
    s
}

/// A CSV table with a header row.
pub struct Csv {
    text: String,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        Csv { text: format!("{}\n", header.join(",")) }
    }

    pub fn row(&mut self, cells: &[String]) {
        self.text.push_str(&cells.join(","));
        self.text.push('\n');
    }

    pub fn finish(self) -> String {
        self.text
    }
}
