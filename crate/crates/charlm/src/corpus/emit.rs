//! Dataset file emitters.
//!
//! The CSV format has a fixed header `item_name,collection,genre,content`
//! with RFC-4180-style quoting: fields containing commas, quotes, CR or LF
//! are wrapped in double quotes and embedded quotes are doubled. Rows end in
//! a single `\n`. The TXT format is the items' contents concatenated in input
//! order, joined by a separator (default one newline). Both are UTF-8.

use std::fs;
use std::path::Path;

use thiserror::Error;

use super::{CorpusError, CorpusItem};

#[derive(Debug, Error)]
pub enum EmitError {
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error("failed to write {path}: {source}")]
    Write {
        path: String,
        source: std::io::Error,
    },
}

fn csv_field(field: &str) -> String {
    if field.contains(',') || field.contains('"') || field.contains('\n') || field.contains('\r') {
        let mut quoted = String::with_capacity(field.len() + 2);
        quoted.push('"');
        for ch in field.chars() {
            if ch == '"' {
                quoted.push('"');
            }
            quoted.push(ch);
        }
        quoted.push('"');
        quoted
    } else {
        field.to_string()
    }
}

/// Renders the CSV as a string: header plus one row per item.
pub fn csv_string(items: &[CorpusItem]) -> Result<String, CorpusError> {
    if items.is_empty() {
        return Err(CorpusError::EmptyCorpus);
    }
    let mut out = String::from("item_name,collection,genre,content\n");
    for item in items {
        out.push_str(&csv_field(&item.title));
        out.push(',');
        out.push_str(&csv_field(&item.collection));
        out.push(',');
        out.push_str(item.genre.name());
        out.push(',');
        out.push_str(&csv_field(&item.content));
        out.push('\n');
    }
    Ok(out)
}

/// Renders the TXT aggregation: contents joined by `separator`.
pub fn txt_string(items: &[CorpusItem], separator: &str) -> Result<String, CorpusError> {
    if items.is_empty() {
        return Err(CorpusError::EmptyCorpus);
    }
    Ok(items
        .iter()
        .map(|i| i.content.as_str())
        .collect::<Vec<_>>()
        .join(separator))
}

pub fn write_csv(items: &[CorpusItem], destination: &Path) -> Result<(), EmitError> {
    let data = csv_string(items)?;
    fs::write(destination, data).map_err(|source| EmitError::Write {
        path: destination.display().to_string(),
        source,
    })
}

pub fn write_txt(items: &[CorpusItem], destination: &Path, separator: &str) -> Result<(), EmitError> {
    let data = txt_string(items, separator)?;
    fs::write(destination, data).map_err(|source| EmitError::Write {
        path: destination.display().to_string(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Genre;

    fn item(title: &str, collection: &str, genre: Genre, content: &str) -> CorpusItem {
        CorpusItem {
            title: title.into(),
            collection: collection.into(),
            genre,
            content: content.into(),
        }
    }

    #[test]
    fn comma_in_content_is_quoted() {
        let csv = csv_string(&[item("a", "b", Genre::Song, "x,y")]).unwrap();
        assert_eq!(csv, "item_name,collection,genre,content\na,b,song,\"x,y\"\n");
        assert_eq!(csv.lines().count(), 2);
    }

    #[test]
    fn quotes_are_doubled_and_newlines_quoted() {
        let csv = csv_string(&[item("t", "c", Genre::Poem, "he said \"hi\"\nbye")]).unwrap();
        assert!(csv.ends_with("t,c,poem,\"he said \"\"hi\"\"\nbye\"\n"));
    }

    #[test]
    fn empty_corpus_is_rejected() {
        assert!(matches!(
            csv_string(&[]),
            Err(CorpusError::EmptyCorpus)
        ));
        assert!(matches!(
            txt_string(&[], "\n"),
            Err(CorpusError::EmptyCorpus)
        ));
    }

    #[test]
    fn txt_joins_in_order() {
        let items = [
            item("1", "c", Genre::Song, "p"),
            item("2", "c", Genre::Song, "q"),
        ];
        assert_eq!(txt_string(&items, "\n").unwrap(), "p\nq");
    }

    #[test]
    fn single_item_txt_equals_content() {
        let items = [item("1", "c", Genre::Story, "only content\nhere")];
        assert_eq!(txt_string(&items, "\n").unwrap(), "only content\nhere");
    }

    #[test]
    fn txt_length_arithmetic() {
        let items = [
            item("1", "c", Genre::Song, "অআই"),
            item("2", "c", Genre::Song, "xy"),
            item("3", "c", Genre::Song, "।।"),
        ];
        let sep = "\n~\n";
        let txt = txt_string(&items, sep).unwrap();
        let expected: usize = items.iter().map(|i| i.content.chars().count()).sum::<usize>()
            + (items.len() - 1) * sep.chars().count();
        assert_eq!(txt.chars().count(), expected);
    }

    #[test]
    fn standard_reader_recovers_items() {
        let items = [
            item("a,b", "col \"x\"", Genre::Drama, "line1\nline2, with comma"),
            item("plain", "c", Genre::Novel, "simple"),
        ];
        let csv = csv_string(&items).unwrap();
        let mut reader = csv::Reader::from_reader(csv.as_bytes());
        let headers = reader.headers().unwrap().clone();
        assert_eq!(
            headers.iter().collect::<Vec<_>>(),
            vec!["item_name", "collection", "genre", "content"]
        );
        let rows: Vec<csv::StringRecord> = reader.records().map(|r| r.unwrap()).collect();
        assert_eq!(rows.len(), items.len());
        for (row, item) in rows.iter().zip(&items) {
            assert_eq!(&row[0], item.title.as_str());
            assert_eq!(&row[1], item.collection.as_str());
            assert_eq!(&row[2], item.genre.name());
            assert_eq!(&row[3], item.content.as_str());
        }
    }

    #[test]
    fn write_to_bad_path_is_io_error() {
        let items = [item("t", "c", Genre::Song, "x")];
        let err = write_csv(&items, Path::new("/nonexistent-dir/out.csv")).unwrap_err();
        assert!(matches!(err, EmitError::Write { .. }));
    }
}
