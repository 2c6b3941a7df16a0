use crate::error::{Error, Result};

pub trait SentenceSplitter {
    fn split(&self, text: &str) -> Result<Vec<String>>;
}

/// Splits after `.`, `!` or `?` when followed by whitespace or the end of
/// the text. Terminators are dropped and segments trimmed.
#[derive(Debug, Clone, Copy, Default)]
pub struct PunctuationSplitter;

impl SentenceSplitter for PunctuationSplitter {
    fn split(&self, text: &str) -> Result<Vec<String>> {
        split_sentences(text)
    }
}

pub fn split_sentences(text: &str) -> Result<Vec<String>> {
    if text.trim().is_empty() {
        return Err(Error::arg("cannot split empty text into sentences"));
    }
    let mut out = Vec::new();
    let mut start = 0;
    let mut chars = text.char_indices().peekable();
    while let Some((i, c)) = chars.next() {
        if matches!(c, '.' | '!' | '?') {
            let boundary = chars.peek().is_none_or(|&(_, next)| next.is_whitespace());
            if boundary {
                push_trimmed(&mut out, &text[start..i]);
                start = i + c.len_utf8();
            }
        }
    }
    push_trimmed(&mut out, &text[start..]);
    if out.is_empty() {
        // A lone terminator, e.g. "!": keep the text itself as one sentence.
        out.push(text.trim().to_string());
    }
    Ok(out)
}

fn push_trimmed(out: &mut Vec<String>, segment: &str) {
    let s = segment.trim();
    if !s.is_empty() {
        out.push(s.to_string());
    }
}
