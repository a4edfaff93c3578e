//! Line-oriented mismatch device files.
//!
//! ```text
//! # fabricated device 0042
//! offsets 0.01 0 0 0
//! gains   0.002, -0.001, 0, 0
//! skews   1.2e-13 0 0 0
//! ```
//!
//! Each non-comment line is `<kind> <v1> <v2> ...` with values separated by
//! whitespace and/or commas. Any subset of the three kinds may be present.
//! Parse errors name the offending line.

use crate::error::CliError;

#[derive(Debug, Default, Clone)]
pub struct MismatchFile {
    pub offsets: Option<Vec<f64>>,
    pub gains: Option<Vec<f64>>,
    pub skews: Option<Vec<f64>>,
}

pub fn parse_mismatch_file(name: &str, content: &str) -> Result<MismatchFile, CliError> {
    let mut out = MismatchFile::default();
    for (idx, raw) in content.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (keyword, rest) = line.split_once(char::is_whitespace).ok_or_else(|| {
            CliError::Validation(format!(
                "{name}:{line_no}: expected '<kind> <values...>', got '{line}'"
            ))
        })?;
        let values: Vec<f64> = rest
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .map(|s| {
                s.parse::<f64>().map_err(|_| {
                    CliError::Validation(format!("{name}:{line_no}: invalid value '{s}'"))
                })
            })
            .collect::<Result<_, _>>()?;
        if values.is_empty() {
            return Err(CliError::Validation(format!(
                "{name}:{line_no}: no values after '{keyword}'"
            )));
        }
        let slot = match keyword {
            "offsets" => &mut out.offsets,
            "gains" => &mut out.gains,
            "skews" => &mut out.skews,
            other => {
                return Err(CliError::Validation(format!(
                    "{name}:{line_no}: unknown mismatch kind '{other}' \
                     (expected offsets, gains, or skews)"
                )))
            }
        };
        if slot.is_some() {
            return Err(CliError::Validation(format!(
                "{name}:{line_no}: duplicate '{keyword}' line"
            )));
        }
        *slot = Some(values);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_sections_comments_and_separators() {
        let text = "# device\noffsets 0.01 0 0 0\ngains 0.002, -0.001, 0, 0 # inline\n\nskews 1e-13\t0 0 0\n";
        let parsed = parse_mismatch_file("dev.txt", text).unwrap();
        assert_eq!(parsed.offsets.unwrap(), vec![0.01, 0.0, 0.0, 0.0]);
        assert_eq!(parsed.gains.unwrap(), vec![0.002, -0.001, 0.0, 0.0]);
        assert_eq!(parsed.skews.unwrap(), vec![1e-13, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn errors_name_the_line() {
        let err = parse_mismatch_file("dev.txt", "offsets 0.01 0\ngains 0.1 oops\n").unwrap_err();
        assert!(err.to_string().contains("dev.txt:2"), "{err}");
        let err = parse_mismatch_file("dev.txt", "offsets 1\noffsets 2\n").unwrap_err();
        assert!(err.to_string().contains("dev.txt:2") && err.to_string().contains("duplicate"));
        let err = parse_mismatch_file("dev.txt", "gain 0.1\n").unwrap_err();
        assert!(err.to_string().contains("unknown mismatch kind"));
    }
}
