//! Corpus construction from stored HTML pages.
//!
//! A fixture directory laid out as `genre/collection/item/page-NN.html`
//! stands in for the live source site. Each item's pages are converted to
//! plain text in reading order, passed through the cleaning rules, and the
//! resulting items are emitted as CSV (one row per item) and TXT (aggregated
//! content).

mod clean;
mod emit;
mod fixtures;
mod html;

pub use clean::{clean_text, CleanError, CleaningRuleSet};
pub use emit::{write_csv, write_txt, EmitError};
pub use fixtures::scan_fixture_dir;
pub use html::{html_to_text, HtmlError};

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("page {page_index}: {source}")]
    Page {
        page_index: usize,
        #[source]
        source: HtmlError,
    },
    #[error("unknown genre {0:?}")]
    UnknownGenre(String),
    #[error("item has no pages")]
    NoPages,
    #[error("failed to read {path}: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },
    #[error("empty corpus")]
    EmptyCorpus,
}

/// The seven genres of the source collection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Genre {
    Novel,
    Poem,
    Song,
    Story,
    Essay,
    Drama,
    Miscellaneous,
}

impl Genre {
    pub const ALL: [Genre; 7] = [
        Genre::Novel,
        Genre::Poem,
        Genre::Song,
        Genre::Story,
        Genre::Essay,
        Genre::Drama,
        Genre::Miscellaneous,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Genre::Novel => "novel",
            Genre::Poem => "poem",
            Genre::Song => "song",
            Genre::Story => "story",
            Genre::Essay => "essay",
            Genre::Drama => "drama",
            Genre::Miscellaneous => "miscellaneous",
        }
    }
}

impl fmt::Display for Genre {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Genre {
    type Err = CorpusError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Genre::ALL
            .into_iter()
            .find(|g| g.name() == s)
            .ok_or_else(|| CorpusError::UnknownGenre(s.to_string()))
    }
}

/// One literary work with its cleaned content.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusItem {
    pub title: String,
    pub collection: String,
    pub genre: Genre,
    pub content: String,
}

/// Converts an item's HTML pages (in reading order) into a cleaned
/// `CorpusItem`. Page texts are joined with a single newline; the cleaning
/// rules then run over the concatenated text, with the title-line rule bound
/// to this item's title.
pub fn extract_item(
    html_pages: &[impl AsRef<str>],
    title: &str,
    collection: &str,
    genre: Genre,
    rules: &CleaningRuleSet,
) -> Result<CorpusItem, CorpusError> {
    if html_pages.is_empty() {
        return Err(CorpusError::NoPages);
    }
    let mut pages = Vec::with_capacity(html_pages.len());
    for (page_index, page) in html_pages.iter().enumerate() {
        let text = html_to_text(page.as_ref())
            .map_err(|source| CorpusError::Page { page_index, source })?;
        pages.push(text);
    }
    let raw = pages.join("\n");
    let content = rules.apply(&raw, Some(title));
    Ok(CorpusItem {
        title: title.to_string(),
        collection: collection.to_string(),
        genre,
        content,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_page_paragraph_break() {
        let item = extract_item(
            &["<p>abc</p><p>def</p>"],
            "t",
            "c",
            Genre::Song,
            &CleaningRuleSet::empty(),
        )
        .unwrap();
        assert_eq!(item.content, "abc\ndef");
    }

    #[test]
    fn pages_concatenate_in_order() {
        let item = extract_item(
            &["<p>X</p>", "<p>Y</p>"],
            "t",
            "c",
            Genre::Poem,
            &CleaningRuleSet::empty(),
        )
        .unwrap();
        assert_eq!(item.content, "X\nY");
    }

    #[test]
    fn page_number_line_removed_by_defaults() {
        let item = extract_item(
            &["<p>আমার সোনার বাংলা</p><p>১২</p><p>আমি তোমায় ভালোবাসি</p>"],
            "t",
            "c",
            Genre::Song,
            &CleaningRuleSet::defaults(),
        )
        .unwrap();
        assert_eq!(item.content, "আমার সোনার বাংলা\nআমি তোমায় ভালোবাসি");
    }

    #[test]
    fn title_line_removed_by_defaults() {
        let item = extract_item(
            &["<h1>gitanjali-1</h1><p>body text</p>"],
            "gitanjali-1",
            "c",
            Genre::Song,
            &CleaningRuleSet::defaults(),
        )
        .unwrap();
        assert_eq!(item.content, "body text");
    }

    #[test]
    fn empty_page_error_names_the_page() {
        let err = extract_item(
            &["<p>ok</p>", "   "],
            "t",
            "c",
            Genre::Story,
            &CleaningRuleSet::empty(),
        )
        .unwrap_err();
        match err {
            CorpusError::Page { page_index, .. } => assert_eq!(page_index, 1),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn genre_parses_all_and_rejects_unknown() {
        for g in Genre::ALL {
            assert_eq!(g.name().parse::<Genre>().unwrap(), g);
        }
        assert!(matches!(
            "ballad".parse::<Genre>(),
            Err(CorpusError::UnknownGenre(s)) if s == "ballad"
        ));
    }

    #[test]
    fn no_markup_angle_brackets_survive() {
        let item = extract_item(
            &["<div><p>line &amp; more</p><ul><li>one</li><li>two</li></ul></div>"],
            "t",
            "c",
            Genre::Essay,
            &CleaningRuleSet::defaults(),
        )
        .unwrap();
        assert!(!item.content.contains('<'));
        assert!(!item.content.contains('>'));
        assert_eq!(item.content, "line & more\none\ntwo");
    }
}
