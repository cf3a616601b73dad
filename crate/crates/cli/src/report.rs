use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

use crate::{CliError, Format, RunConfig, VERSION};

/// Output of one command, renderable as JSON or tab-separated text.
#[derive(Debug, Clone, Default)]
pub struct Report {
    pub command: &'static str,
    pub result: Value,
    /// `# name<TAB>value` lines of the text form.
    pub summary: Vec<(String, String)>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    /// Text form body used instead of the table, e.g. a graph file.
    pub raw: Option<String>,
}

#[derive(Serialize)]
struct Envelope<'a> {
    tool: &'static str,
    version: &'static str,
    config: &'a RunConfig,
    command: &'static str,
    result: &'a Value,
}

impl Report {
    pub fn new(command: &'static str, result: impl Serialize) -> Result<Self, CliError> {
        Ok(Report {
            command,
            result: to_value(result)?,
            ..Default::default()
        })
    }

    pub fn summary(mut self, name: &str, value: impl ToString) -> Self {
        self.summary.push((name.to_string(), value.to_string()));
        self
    }

    pub fn table(mut self, columns: Vec<&'static str>, rows: Vec<Vec<String>>) -> Self {
        self.columns = columns;
        self.rows = rows;
        self
    }

    pub fn render(&self, config: &RunConfig) -> Result<String, CliError> {
        match config.format {
            Format::Json => {
                let envelope = Envelope {
                    tool: "scalevol",
                    version: VERSION,
                    config,
                    command: self.command,
                    result: &self.result,
                };
                let mut s = serde_json::to_string_pretty(&envelope).map_err(json_error)?;
                s.push('\n');
                Ok(s)
            }
            Format::Text => {
                let mut s = format!("# scalevol {VERSION}\n");
                let config = serde_json::to_string(config).map_err(json_error)?;
                writeln!(s, "# config {config}").unwrap();
                for (name, value) in &self.summary {
                    writeln!(s, "# {name}\t{value}").unwrap();
                }
                if let Some(raw) = &self.raw {
                    s.push_str(raw);
                } else if !self.columns.is_empty() {
                    writeln!(s, "{}", self.columns.join("\t")).unwrap();
                    for row in &self.rows {
                        writeln!(s, "{}", row.join("\t")).unwrap();
                    }
                }
                Ok(s)
            }
        }
    }
}

pub fn to_value(x: impl Serialize) -> Result<Value, CliError> {
    serde_json::to_value(x).map_err(json_error)
}

fn json_error(e: serde_json::Error) -> CliError {
    CliError::Json {
        path: "<output>".into(),
        source: e,
    }
}

/// `[a, b, c]` as `a,b,c`.
pub fn join<T: ToString>(xs: impl IntoIterator<Item = T>) -> String {
    xs.into_iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}
