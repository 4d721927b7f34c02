use std::io::Write;

use serde_json::{json, Value};

use crate::args::{Format, Global};

pub struct Outcome {
    pub command: &'static str,
    pub passed: bool,
    pub results: Vec<Value>,
    /// Human-readable rendering, one line per result.
    pub text: Vec<String>,
}

impl Outcome {
    pub fn to_json(&self) -> Value {
        json!({
            "command": self.command,
            "passed": self.passed,
            "results": self.results,
        })
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s =
                    serde_json::to_string_pretty(&self.to_json()).expect("json values serialize");
                s.push('\n');
                s
            }
            Format::Text => {
                let mut s = self.text.join("\n");
                s.push_str(&format!(
                    "\n{}: {}\n",
                    self.command,
                    if self.passed { "PASS" } else { "FAIL" }
                ));
                s
            }
        }
    }
}

pub fn emit(global: &Global, outcome: &Outcome) -> std::io::Result<()> {
    let body = outcome.render(global.format);
    match &global.output {
        Some(path) => std::fs::write(path, body),
        None => std::io::stdout().lock().write_all(body.as_bytes()),
    }
}

/// Left-aligned columns separated by two spaces.
pub fn table(header: &[&str], rows: &[Vec<String>]) -> Vec<String> {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.chars().count());
        }
    }
    let line = |cells: Vec<String>| {
        cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect::<Vec<_>>()
            .join("  ")
            .trim_end()
            .to_string()
    };
    let mut out = vec![line(header.iter().map(|h| h.to_string()).collect())];
    out.extend(rows.iter().map(|r| line(r.clone())));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn aligned_table() {
        let t = table(&["a", "bb"], &[vec!["long".into(), "x".into()]]);
        assert_eq!(t, vec!["a     bb", "long  x"]);
    }
}
