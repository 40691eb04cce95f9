//! Regex-based text cleaning applied after HTML extraction.
//!
//! Rules run in order over the whole text. The default set removes
//! page-number lines (ASCII or Bengali digits), drops a leading line equal to
//! the item title, collapses runs of three or more newlines to two, and
//! strips the `[`, `]` and `*` symbols. Bengali letters, vowel signs and the
//! danda are content and are never touched by the defaults.

use std::fs;
use std::path::Path;

use regex::Regex;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CleanError {
    #[error("invalid pattern {pattern:?}: {source}")]
    Pattern {
        pattern: String,
        source: regex::Error,
    },
    #[error("rules file {path} line {line}: missing tab separator")]
    MissingTab { path: String, line: usize },
    #[error("failed to read {path}: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },
}

#[derive(Debug, Clone)]
enum Step {
    /// A compiled pattern with a literal replacement.
    Rule { pattern: Regex, replacement: String },
    /// Deletes the first line when it exactly equals the item title.
    /// Only active when a title is supplied; a no-op otherwise.
    TitleLine,
}

/// An ordered list of cleaning steps. Patterns are validated at construction;
/// applying a rule set never fails.
#[derive(Debug, Clone)]
pub struct CleaningRuleSet {
    steps: Vec<Step>,
}

impl CleaningRuleSet {
    /// A rule set that leaves text unchanged.
    pub fn empty() -> Self {
        CleaningRuleSet { steps: Vec::new() }
    }

    /// The default rules, in order: digit-only lines, title line, newline
    /// collapse, symbol strip.
    pub fn defaults() -> Self {
        let mut set = CleaningRuleSet::empty();
        // lines of ASCII or Bengali digits only (page numbers)
        set.push_rule(r"(?m)^[0-9\u{09E6}-\u{09EF}]+$\n?", "")
            .expect("default digit-line pattern");
        set.steps.push(Step::TitleLine);
        set.push_rule(r"\n{3,}", "\n\n")
            .expect("default newline-collapse pattern");
        set.push_rule(r"[\[\]*]", "").expect("default symbol pattern");
        set
    }

    /// Appends a rule. The replacement is inserted literally (no capture
    /// group expansion).
    pub fn push_rule(&mut self, pattern: &str, replacement: &str) -> Result<(), CleanError> {
        let compiled = Regex::new(pattern).map_err(|source| CleanError::Pattern {
            pattern: pattern.to_string(),
            source,
        })?;
        self.steps.push(Step::Rule {
            pattern: compiled,
            replacement: replacement.to_string(),
        });
        Ok(())
    }

    /// Loads rules from a plain-text file, one `pattern<TAB>replacement` per
    /// line. Blank lines are skipped. The replacement may be empty.
    pub fn load(path: &Path) -> Result<Self, CleanError> {
        let raw = fs::read_to_string(path).map_err(|source| CleanError::Read {
            path: path.display().to_string(),
            source,
        })?;
        let mut set = CleaningRuleSet::empty();
        for (idx, line) in raw.lines().enumerate() {
            if line.is_empty() {
                continue;
            }
            let (pattern, replacement) =
                line.split_once('\t').ok_or_else(|| CleanError::MissingTab {
                    path: path.display().to_string(),
                    line: idx + 1,
                })?;
            set.push_rule(pattern, replacement)?;
        }
        Ok(set)
    }

    /// Applies every step in order. `title` activates the title-line step.
    pub fn apply(&self, text: &str, title: Option<&str>) -> String {
        let mut out = text.to_string();
        for step in &self.steps {
            match step {
                Step::Rule {
                    pattern,
                    replacement,
                } => {
                    out = pattern
                        .replace_all(&out, regex::NoExpand(replacement))
                        .into_owned();
                }
                Step::TitleLine => {
                    if let Some(title) = title {
                        if let Some(rest) = out.strip_prefix(title) {
                            if let Some(body) = rest.strip_prefix('\n') {
                                out = body.to_string();
                            } else if rest.is_empty() {
                                out.clear();
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

/// Applies `rules` to `raw` with no title context.
pub fn clean_text(raw: &str, rules: &CleaningRuleSet) -> String {
    rules.apply(raw, None)
}
