//! Plain-text extraction from stored HTML pages.
//!
//! Tags are stripped, block-level boundaries become newline characters
//! (coalesced, so `</p><p>` is one paragraph break while each `<br>` stacks),
//! character entities are decoded, and runs of inline whitespace collapse to
//! a single space. Script and style elements and comments contribute nothing.
//! The converter is lenient about real-world markup but reports pages that
//! are empty or cut off mid-construct.

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HtmlError {
    #[error("empty document")]
    Empty,
    #[error("document has no text content")]
    NoText,
    #[error("unterminated comment")]
    UnterminatedComment,
    #[error("unterminated tag")]
    UnterminatedTag,
    #[error("unterminated <{0}> element")]
    UnterminatedRawText(String),
}

/// Elements whose open or close marks a paragraph boundary.
fn is_block_tag(name: &str) -> bool {
    matches!(
        name,
        "p" | "div"
            | "h1"
            | "h2"
            | "h3"
            | "h4"
            | "h5"
            | "h6"
            | "li"
            | "ul"
            | "ol"
            | "dl"
            | "dt"
            | "dd"
            | "tr"
            | "td"
            | "th"
            | "table"
            | "thead"
            | "tbody"
            | "blockquote"
            | "pre"
            | "hr"
            | "section"
            | "article"
            | "header"
            | "footer"
            | "main"
            | "nav"
            | "aside"
            | "figure"
            | "figcaption"
            | "center"
    )
}

struct TextBuilder {
    out: String,
    pending_breaks: usize,
    pending_space: bool,
}

impl TextBuilder {
    fn new() -> Self {
        TextBuilder {
            out: String::new(),
            pending_breaks: 0,
            pending_space: false,
        }
    }

    fn push_char(&mut self, ch: char) {
        if ch.is_whitespace() {
            if !self.out.is_empty() {
                self.pending_space = true;
            }
            return;
        }
        if self.pending_breaks > 0 {
            if !self.out.is_empty() {
                for _ in 0..self.pending_breaks {
                    self.out.push('\n');
                }
            }
            self.pending_breaks = 0;
            self.pending_space = false;
        } else if self.pending_space {
            self.out.push(' ');
            self.pending_space = false;
        }
        self.out.push(ch);
    }

    fn block_break(&mut self) {
        self.pending_breaks = self.pending_breaks.max(1);
        self.pending_space = false;
    }

    fn line_break(&mut self) {
        self.pending_breaks += 1;
        self.pending_space = false;
    }

    fn finish(self) -> String {
        self.out
    }
}

/// Converts one HTML document to plain text.
pub fn html_to_text(html: &str) -> Result<String, HtmlError> {
    if html.trim().is_empty() {
        return Err(HtmlError::Empty);
    }
    let chars: Vec<char> = html.chars().collect();
    let n = chars.len();
    let mut builder = TextBuilder::new();
    let mut i = 0;

    while i < n {
        match chars[i] {
            '<' if starts_with(&chars, i, "<!--") => {
                i = find_seq(&chars, i + 4, "-->").ok_or(HtmlError::UnterminatedComment)? + 3;
            }
            '<' if i + 1 < n && (chars[i + 1] == '!' || chars[i + 1] == '?') => {
                // doctype / processing instruction
                i = skip_past_gt(&chars, i + 2)?;
            }
            '<' if i + 1 < n && (chars[i + 1].is_ascii_alphabetic() || chars[i + 1] == '/') => {
                let closing = chars[i + 1] == '/';
                let name_start = if closing { i + 2 } else { i + 1 };
                let mut j = name_start;
                while j < n && (chars[j].is_ascii_alphanumeric() || chars[j] == '-') {
                    j += 1;
                }
                let name: String = chars[name_start..j]
                    .iter()
                    .collect::<String>()
                    .to_ascii_lowercase();
                i = skip_past_gt(&chars, j)?;
                if !closing && (name == "script" || name == "style") {
                    let close = format!("</{name}");
                    let at = find_seq_ci(&chars, i, &close)
                        .ok_or_else(|| HtmlError::UnterminatedRawText(name.clone()))?;
                    i = skip_past_gt(&chars, at + close.len())?;
                } else if name == "br" {
                    builder.line_break();
                } else if is_block_tag(&name) {
                    builder.block_break();
                }
            }
            '&' => {
                if let Some((decoded, next)) = decode_entity(&chars, i) {
                    builder.push_char(decoded);
                    i = next;
                } else {
                    builder.push_char('&');
                    i += 1;
                }
            }
            ch => {
                builder.push_char(ch);
                i += 1;
            }
        }
    }

    let text = builder.finish();
    if text.is_empty() {
        return Err(HtmlError::NoText);
    }
    Ok(text)
}

/// Advances past the next '>' outside quoted attribute values.
fn skip_past_gt(chars: &[char], mut i: usize) -> Result<usize, HtmlError> {
    while i < chars.len() {
        match chars[i] {
            '>' => return Ok(i + 1),
            q @ ('"' | '\'') => {
                i += 1;
                while i < chars.len() && chars[i] != q {
                    i += 1;
                }
                if i >= chars.len() {
                    return Err(HtmlError::UnterminatedTag);
                }
                i += 1;
            }
            _ => i += 1,
        }
    }
    Err(HtmlError::UnterminatedTag)
}

fn starts_with(chars: &[char], at: usize, needle: &str) -> bool {
    needle
        .chars()
        .enumerate()
        .all(|(k, c)| chars.get(at + k) == Some(&c))
}

fn find_seq(chars: &[char], from: usize, needle: &str) -> Option<usize> {
    (from..chars.len()).find(|&i| starts_with(chars, i, needle))
}

fn find_seq_ci(chars: &[char], from: usize, needle: &str) -> Option<usize> {
    let lowered: Vec<char> = needle.chars().collect();
    (from..chars.len()).find(|&i| {
        lowered
            .iter()
            .enumerate()
            .all(|(k, c)| chars.get(i + k).map(|x| x.to_ascii_lowercase()) == Some(*c))
    })
}

/// Decodes the entity starting at `chars[at] == '&'`. Returns the decoded
/// character and the index after the terminating ';', or None to emit the
/// ampersand literally.
fn decode_entity(chars: &[char], at: usize) -> Option<(char, usize)> {
    const MAX_ENTITY_LEN: usize = 32;
    let end = chars.len().min(at + MAX_ENTITY_LEN);
    let semi = (at + 1..end).find(|&i| chars[i] == ';')?;
    let body: String = chars[at + 1..semi].iter().collect();
    let decoded = if let Some(num) = body.strip_prefix('#') {
        let code = if let Some(hex) = num.strip_prefix(['x', 'X']) {
            u32::from_str_radix(hex, 16).ok()?
        } else {
            num.parse::<u32>().ok()?
        };
        char::from_u32(code)?
    } else {
        match body.as_str() {
            "amp" => '&',
            "lt" => '<',
            "gt" => '>',
            "quot" => '"',
            "apos" => '\'',
            // non-breaking space enters the corpus as a plain space
            "nbsp" => ' ',
            _ => return None,
        }
    };
    Some((decoded, semi + 1))
}
