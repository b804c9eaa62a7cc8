use std::collections::BTreeSet;

use super::FormatError;
use crate::framework::LabelSetEntry;
use crate::graph::SubsetKind;
use crate::label::is_normalized;

/// Parses a label-set file: one raw label per line, `#` starts a comment
/// line, blank lines are skipped. Optional tab-separated `key=value` fields
/// after the label override the merge defaults: `cluster=<name>`,
/// `kinds=<kind>[,<kind>...]`, `tag=object|action`.
pub fn parse_label_set(text: &str) -> Result<Vec<LabelSetEntry>, FormatError> {
    let mut entries = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let n = i + 1;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        let mut fields = line.split('\t');
        let mut entry = LabelSetEntry::plain(fields.next().unwrap_or_default().trim());
        for field in fields {
            let Some((key, value)) = field.split_once('=') else {
                return Err(FormatError::at(n, format!("expected key=value, got {field:?}")));
            };
            match key.trim() {
                "cluster" => {
                    let value = value.trim();
                    if !is_normalized(value) {
                        return Err(FormatError::at(n, format!("cluster {value:?} is not normalized")));
                    }
                    entry.cluster = Some(value.to_owned());
                }
                "kinds" | "kind" => {
                    let kinds = value
                        .split(',')
                        .map(|k| k.trim().parse::<SubsetKind>())
                        .collect::<Result<BTreeSet<_>, _>>()
                        .map_err(|e| FormatError::at(n, e))?;
                    entry.kinds = Some(kinds);
                }
                "tag" => entry.tag = Some(value.trim().parse().map_err(|e: String| FormatError::at(n, e))?),
                other => return Err(FormatError::at(n, format!("unknown field {other:?}"))),
            }
        }
        entries.push(entry);
    }
    Ok(entries)
}
