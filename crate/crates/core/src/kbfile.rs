//! Plain-text knowledge base files.
//!
//! ```text
//! # comments run to the end of the line
//! logic classical
//! strict: p -> q
//! assume: p
//! assume: !q
//! ```
//!
//! Exactly one `logic classical` line, any number of `strict:` lines and at
//! least one `assume:` line. Line endings may be LF or CRLF.

use thiserror::Error;

use crate::abf::{validate_abf, Abf};
use crate::entailment::PremiseSet;
use crate::error::Error;
use crate::formula::{parse_formula, Formula, ParseError};

#[derive(Debug, Error)]
pub enum KbFileError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Formula {
        line: usize,
        #[source]
        source: ParseError,
    },
    #[error("line {line}: `{formula}` already appears on line {first}")]
    Duplicate {
        line: usize,
        first: usize,
        formula: String,
    },
    #[error("no `assume:` lines")]
    NoAssumptions,
    #[error(transparent)]
    Invalid(#[from] Error),
}

impl KbFileError {
    /// Well-formed input that does not describe a valid framework, as
    /// opposed to malformed input.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            KbFileError::Duplicate { .. } | KbFileError::NoAssumptions | KbFileError::Invalid(_)
        )
    }
}

pub fn parse_kb(text: &str) -> Result<Abf, KbFileError> {
    let mut logic_line: Option<usize> = None;
    let mut strict: Vec<(usize, Formula)> = Vec::new();
    let mut assume: Vec<(usize, Formula)> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let syntax = |message: String| KbFileError::Syntax { line, message };
        if let Some(rest) = content.strip_prefix("logic") {
            if let Some(first) = logic_line {
                return Err(syntax(format!("second `logic` line (first on line {first})")));
            }
            let name = rest.trim();
            if name != "classical" {
                return Err(syntax(format!("unsupported logic `{name}`, only `classical` is accepted")));
            }
            logic_line = Some(line);
            continue;
        }
        let (target, body) = if let Some(body) = content.strip_prefix("strict:") {
            (&mut strict, body)
        } else if let Some(body) = content.strip_prefix("assume:") {
            (&mut assume, body)
        } else {
            return Err(syntax(format!(
                "expected `logic`, `strict:` or `assume:`, found `{content}`"
            )));
        };
        if logic_line.is_none() {
            return Err(syntax("`logic classical` must come before any formula".into()));
        }
        let formula = parse_formula(body).map_err(|source| KbFileError::Formula { line, source })?;
        target.push((line, formula));
    }
    if logic_line.is_none() {
        return Err(KbFileError::Syntax {
            line: text.lines().count().max(1),
            message: "missing `logic classical` line".into(),
        });
    }

    let listed: Vec<&(usize, Formula)> = strict.iter().chain(&assume).collect();
    for (k, (line, f)) in listed.iter().enumerate() {
        if let Some((first, _)) = listed[..k].iter().find(|(_, g)| g == f) {
            return Err(KbFileError::Duplicate {
                line: *line,
                first: *first,
                formula: f.render(),
            });
        }
    }
    if assume.is_empty() {
        return Err(KbFileError::NoAssumptions);
    }
    let gamma: PremiseSet = strict.into_iter().map(|(_, f)| f).collect();
    let ab = assume.into_iter().map(|(_, f)| f).collect();
    Ok(validate_abf(gamma, ab)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_the_running_example() {
        let abf = parse_kb("# example\nlogic classical\r\nassume: p\nassume: !p  # negated\n\nassume: q\n").unwrap();
        assert_eq!(abf.len(), 3);
        assert!(abf.gamma().is_empty());
        assert_eq!(parse_kb(&abf.to_string()).unwrap(), abf);
    }

    #[test]
    fn strict_premises() {
        let abf = parse_kb("logic classical\nstrict: p -> q\nassume: p\n").unwrap();
        assert_eq!(abf.gamma().len(), 1);
    }

    #[test]
    fn syntax_errors_carry_line_numbers() {
        let cases = [
            ("assume: p\n", 1),
            ("logic classical\nassume: p &\n", 2),
            ("logic intuitionistic\nassume: p\n", 1),
            ("logic classical\nlogic classical\nassume: p\n", 2),
            ("logic classical\nbelieve: p\n", 2),
            ("", 1),
        ];
        for (text, line) in cases {
            let err = parse_kb(text).unwrap_err();
            assert!(!err.is_validation(), "{text:?}: {err}");
            assert!(err.to_string().starts_with(&format!("line {line}")), "{text:?}: {err}");
        }
    }

    #[test]
    fn validation_errors() {
        let err = parse_kb("logic classical\nassume: p\nassume: q\nassume: p\n").unwrap_err();
        assert!(matches!(err, KbFileError::Duplicate { line: 4, first: 2, .. }));
        let err = parse_kb("logic classical\nstrict: p\nassume: p\n").unwrap_err();
        assert!(matches!(err, KbFileError::Duplicate { line: 3, first: 2, .. }));
        assert!(parse_kb("logic classical\nstrict: p\n").unwrap_err().is_validation());
        let err = parse_kb("logic classical\nstrict: p\nstrict: !p\nassume: q\n").unwrap_err();
        assert!(matches!(err, KbFileError::Invalid(Error::StrictPremisesInconsistent)));
        assert!(err.is_validation());
    }
}
