//! Fixture-tree ingestion.
//!
//! The on-disk layout mirrors the source site's hierarchy:
//! `root/<genre>/<collection>/<item>/page-NN.html`. Directory names supply
//! the genre, parent collection and item title. Traversal is sorted at every
//! level so extraction order (and therefore emitted files) is deterministic.

use std::fs;
use std::path::Path;

use super::{extract_item, CleaningRuleSet, CorpusError, CorpusItem, Genre};

fn sorted_dir_entries(dir: &Path, dirs_only: bool) -> Result<Vec<std::path::PathBuf>, CorpusError> {
    let read = fs::read_dir(dir).map_err(|source| CorpusError::Read {
        path: dir.display().to_string(),
        source,
    })?;
    let mut entries = Vec::new();
    for entry in read {
        let entry = entry.map_err(|source| CorpusError::Read {
            path: dir.display().to_string(),
            source,
        })?;
        let path = entry.path();
        if dirs_only == path.is_dir() {
            entries.push(path);
        }
    }
    entries.sort();
    Ok(entries)
}

fn dir_name(path: &Path) -> String {
    path.file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default()
}

/// Walks the fixture tree and extracts every item, applying `rules`.
pub fn scan_fixture_dir(
    root: &Path,
    rules: &CleaningRuleSet,
) -> Result<Vec<CorpusItem>, CorpusError> {
    let mut items = Vec::new();
    for genre_dir in sorted_dir_entries(root, true)? {
        let genre: Genre = dir_name(&genre_dir).parse()?;
        for collection_dir in sorted_dir_entries(&genre_dir, true)? {
            let collection = dir_name(&collection_dir);
            for item_dir in sorted_dir_entries(&collection_dir, true)? {
                let title = dir_name(&item_dir);
                let mut pages = Vec::new();
                for page_path in sorted_dir_entries(&item_dir, false)? {
                    if page_path.extension().and_then(|e| e.to_str()) != Some("html") {
                        continue;
                    }
                    let html = fs::read_to_string(&page_path).map_err(|source| {
                        CorpusError::Read {
                            path: page_path.display().to_string(),
                            source,
                        }
                    })?;
                    pages.push(html);
                }
                items.push(extract_item(&pages, &title, &collection, genre, rules)?);
            }
        }
    }
    if items.is_empty() {
        return Err(CorpusError::EmptyCorpus);
    }
    Ok(items)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write_page(root: &Path, rel: &str, html: &str) {
        let path = root.join(rel);
        fs::create_dir_all(path.parent().unwrap()).unwrap();
        fs::write(path, html).unwrap();
    }

    #[test]
    fn walks_tree_in_sorted_order() {
        let dir = tempfile::tempdir().unwrap();
        let root = dir.path();
        write_page(root, "song/colB/item1/page-01.html", "<p>s1</p>");
        write_page(root, "poem/colA/item2/page-01.html", "<p>p1</p>");
        write_page(root, "poem/colA/item1/page-01.html", "<p>p0a</p>");
        write_page(root, "poem/colA/item1/page-02.html", "<p>p0b</p>");

        let items = scan_fixture_dir(root, &CleaningRuleSet::empty()).unwrap();
        let got: Vec<(String, String, Genre, String)> = items
            .into_iter()
            .map(|i| (i.title, i.collection, i.genre, i.content))
            .collect();
        assert_eq!(
            got,
            vec![
                ("item1".into(), "colA".into(), Genre::Poem, "p0a\np0b".into()),
                ("item2".into(), "colA".into(), Genre::Poem, "p1".into()),
                ("item1".into(), "colB".into(), Genre::Song, "s1".into()),
            ]
        );
    }

    #[test]
    fn unknown_genre_directory_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        write_page(dir.path(), "ballad/c/i/page-01.html", "<p>x</p>");
        let err = scan_fixture_dir(dir.path(), &CleaningRuleSet::empty()).unwrap_err();
        assert!(matches!(err, CorpusError::UnknownGenre(g) if g == "ballad"));
    }

    #[test]
    fn missing_root_names_the_path() {
        let err = scan_fixture_dir(Path::new("/no/such/dir"), &CleaningRuleSet::empty())
            .unwrap_err();
        match err {
            CorpusError::Read { path, .. } => assert!(path.contains("/no/such/dir")),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn empty_tree_is_empty_corpus() {
        let dir = tempfile::tempdir().unwrap();
        let err = scan_fixture_dir(dir.path(), &CleaningRuleSet::empty()).unwrap_err();
        assert!(matches!(err, CorpusError::EmptyCorpus));
    }
}
