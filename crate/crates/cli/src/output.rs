use serde::Serialize;

use crate::commands::CliError;
use crate::Format;

/// Renders a result. Commands without a tabular shape pass `tsv = None`,
/// and asking them for TSV is a usage error.
pub fn render<T: Serialize>(value: &T, format: Format, tsv: Option<String>) -> Result<String, CliError> {
    match format {
        Format::Json => Ok(serde_json::to_string(value).map_err(internal)? + "\n"),
        Format::Pretty => Ok(serde_json::to_string_pretty(value).map_err(internal)? + "\n"),
        Format::Tsv => tsv.ok_or_else(|| CliError::Usage("this command has no TSV output; use --format json or pretty".into())),
    }
}

fn internal(e: serde_json::Error) -> CliError {
    CliError::Refusal(format!("serialization failed: {e}"))
}

pub fn tsv_table(header: &str, rows: impl IntoIterator<Item = String>) -> String {
    let mut s = String::from(header);
    s.push('\n');
    for r in rows {
        s.push_str(&r);
        s.push('\n');
    }
    s
}

pub fn join_ints(v: &[i64]) -> String {
    v.iter().map(i64::to_string).collect::<Vec<_>>().join(",")
}
