//! Minimal HTML to text conversion. Superscript tags survive so the
//! normalizer can fold `<sup>2</sup>`.

use std::sync::OnceLock;

use regex::Regex;

fn skipped_elements() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| {
        Regex::new(r"(?is)<(script|style|head)\b[^>]*>.*?</(?:script|style|head)\s*>|<!--.*?-->")
            .expect("valid regex")
    })
}

fn tags() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"(?s)</?([A-Za-z][A-Za-z0-9]*)\b[^>]*>").expect("valid regex"))
}

const BLOCK: &[&str] = &[
    "p", "br", "div", "li", "ul", "ol", "tr", "td", "th", "table", "h1", "h2", "h3", "h4", "h5",
    "h6", "section", "article", "body", "title", "caption", "blockquote",
];

/// Strips markup. Block-level tags become a space, inline tags vanish,
/// `<sup>` and `</sup>` are kept verbatim. Entities are left for the
/// normalizer.
pub fn strip_tags(html: &str) -> String {
    let without = skipped_elements().replace_all(html, " ");
    let mut out = String::with_capacity(without.len());
    let mut last = 0;
    for caps in tags().captures_iter(&without) {
        let m = caps.get(0).expect("group 0");
        out.push_str(&without[last..m.start()]);
        let name = caps[1].to_ascii_lowercase();
        if name == "sup" {
            out.push_str(if m.as_str().starts_with("</") { "</sup>" } else { "<sup>" });
        } else if BLOCK.contains(&name.as_str()) {
            out.push(' ');
        }
        last = m.end();
    }
    out.push_str(&without[last..]);
    out
}

/// Whether a document should go through [`strip_tags`].
pub fn looks_like_html(name: Option<&str>, content: &str) -> bool {
    if let Some(name) = name {
        let lower = name.to_ascii_lowercase();
        if lower.ends_with(".html") || lower.ends_with(".htm") || lower.ends_with(".xhtml") {
            return true;
        }
        if lower.ends_with(".txt") || lower.ends_with(".md") {
            return false;
        }
    }
    let head: String = content.chars().take(512).collect::<String>().to_ascii_lowercase();
    let head = head.trim_start();
    head.starts_with("<!doctype html") || head.starts_with("<html")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keeps_superscripts() {
        assert_eq!(
            strip_tags("<p>A <i>χ</i><SUP class=x>2</SUP>(1)=4.2, <em>p</em> &lt; .05</p>"),
            " A χ<sup>2</sup>(1)=4.2, p &lt; .05 "
        );
    }

    #[test]
    fn drops_scripts_and_comments() {
        assert_eq!(
            strip_tags("<script>t(1)=2, p=.5</script>ok<!-- F(1,2)=3, p=.1 -->"),
            " ok "
        );
    }

    #[test]
    fn detection() {
        assert!(looks_like_html(Some("a.HTML"), ""));
        assert!(!looks_like_html(Some("a.txt"), "<html>"));
        assert!(looks_like_html(None, "  <!DOCTYPE html><html>"));
        assert!(!looks_like_html(None, "t(12)=2.3, p<.05"));
    }
}
