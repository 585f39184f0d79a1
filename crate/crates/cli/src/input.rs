//! Input lines: optional `name:` prefix, `#` comments, blank lines skipped.

use std::io::Read;

use anyhow::{Context, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Line {
    /// 1-based line number in the source.
    pub number: usize,
    pub name: Option<String>,
    pub body: String,
}

pub fn read_source(path: &str) -> Result<String> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).context("reading standard input")?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).with_context(|| format!("reading {path}"))
    }
}

fn split_name(text: &str) -> (Option<String>, &str) {
    if text.starts_with("long:") {
        return (None, text);
    }
    match text.split_once(':') {
        Some((name, rest)) if !name.is_empty() && !name.contains(char::is_whitespace) => {
            (Some(name.to_string()), rest.trim())
        }
        _ => (None, text),
    }
}

pub fn lines(source: &str) -> Vec<Line> {
    source
        .lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let text = raw.split('#').next().unwrap_or("").trim();
            if text.is_empty() {
                return None;
            }
            let (name, body) = split_name(text);
            Some(Line { number: i + 1, name, body: body.to_string() })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_comments_and_numbers() {
        let src = "# corpus\n\nunknot: ()\n  O1+U1+  # kink\n435: O1-U2-U1-U3+O2-U4+O3+O4+\nlong:1 2/1 2\n";
        let ls = lines(src);
        assert_eq!(ls.len(), 4);
        assert_eq!(ls[0], Line { number: 3, name: Some("unknot".into()), body: "()".into() });
        assert_eq!(ls[1].number, 4);
        assert_eq!(ls[1].name, None);
        assert_eq!(ls[1].body, "O1+U1+");
        assert_eq!(ls[2].name.as_deref(), Some("435"));
        assert_eq!(ls[3].body, "long:1 2/1 2");
    }

    #[test]
    fn named_long_phrase() {
        let ls = lines("pair: long:1 2/1 2");
        assert_eq!(ls[0].name.as_deref(), Some("pair"));
        assert_eq!(ls[0].body, "long:1 2/1 2");
    }
}
