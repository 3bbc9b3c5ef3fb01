//! N-Quads, one statement per line.

use std::io::{self, BufRead, Write};

use super::{is_forbidden_iri_char, GraphName, Literal, LiteralKind, ParseError, Quad, QuadDocument, Term, XSD_STRING};

/// Streaming N-Quads reader. Holds at most one line in memory.
pub struct NQuadsReader<R> {
    input: R,
    line: String,
    line_no: usize,
    done: bool,
}

impl<R: BufRead> NQuadsReader<R> {
    pub fn new(input: R) -> Self {
        NQuadsReader {
            input,
            line: String::new(),
            line_no: 0,
            done: false,
        }
    }
}

impl<R: BufRead> Iterator for NQuadsReader<R> {
    type Item = Result<Quad, ParseError>;

    fn next(&mut self) -> Option<Self::Item> {
        while !self.done {
            self.line.clear();
            match self.input.read_line(&mut self.line) {
                Ok(0) => self.done = true,
                Ok(_) => {
                    self.line_no += 1;
                    match parse_line(&self.line, self.line_no) {
                        Ok(Some(quad)) => return Some(Ok(quad)),
                        Ok(None) => continue,
                        Err(e) => {
                            self.done = true;
                            return Some(Err(e));
                        }
                    }
                }
                Err(e) => {
                    self.done = true;
                    return Some(Err(e.into()));
                }
            }
        }
        None
    }
}

/// Parses one line; `Ok(None)` for blank and comment-only lines.
pub fn parse_line(line: &str, line_no: usize) -> Result<Option<Quad>, ParseError> {
    let mut cur = Cursor {
        text: line,
        pos: 0,
        line: line_no,
    };
    cur.skip_ws();
    if cur.at_end() || cur.peek() == Some('#') {
        return Ok(None);
    }
    let subject = match cur.peek() {
        Some('<') => Term::Iri(cur.iri()?),
        Some('_') => Term::Blank(cur.blank()?),
        _ => return Err(cur.err("expected IRI or blank node as subject")),
    };
    cur.skip_ws();
    if cur.peek() != Some('<') {
        return Err(cur.err("expected IRI as predicate"));
    }
    let predicate = cur.iri()?;
    cur.skip_ws();
    let object = match cur.peek() {
        Some('<') => Term::Iri(cur.iri()?),
        Some('_') => Term::Blank(cur.blank()?),
        Some('"') => Term::Literal(cur.literal()?),
        _ => return Err(cur.err("expected IRI, blank node or literal as object")),
    };
    cur.skip_ws();
    let graph = match cur.peek() {
        Some('<') => GraphName::Iri(cur.iri()?),
        Some('_') => return Err(cur.err("blank node graph labels are not supported")),
        _ => GraphName::Default,
    };
    cur.skip_ws();
    if cur.peek() != Some('.') {
        return Err(cur.err("expected '.' at end of statement"));
    }
    cur.bump();
    cur.skip_ws();
    if !cur.at_end() && cur.peek() != Some('#') {
        return Err(cur.err("unexpected content after '.'"));
    }
    Ok(Some(Quad::new(graph, subject, predicate, object)))
}

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
    line: usize,
}

impl Cursor<'_> {
    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn at_end(&self) -> bool {
        matches!(self.peek(), None | Some('\n') | Some('\r'))
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(' ') | Some('\t')) {
            self.pos += 1;
        }
    }

    fn err(&self, message: impl Into<String>) -> ParseError {
        let column = self.text[..self.pos].chars().count() + 1;
        ParseError::syntax(self.line, column, message)
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.bump() == Some(c) {
            Ok(())
        } else {
            Err(self.err(format!("expected {c:?}")))
        }
    }

    fn iri(&mut self) -> Result<String, ParseError> {
        self.expect('<')?;
        let mut out = String::new();
        loop {
            match self.bump() {
                Some('>') => break,
                Some('\\') => {
                    let c = self.uchar()?;
                    if is_forbidden_iri_char(c) {
                        return Err(self.err(format!("escaped character {c:?} not allowed in IRI")));
                    }
                    out.push(c);
                }
                Some(c) if is_forbidden_iri_char(c) => {
                    return Err(self.err(format!("character {c:?} not allowed in IRI")))
                }
                Some(c) => out.push(c),
                None => return Err(self.err("unterminated IRI")),
            }
        }
        if out.is_empty() {
            return Err(self.err("empty IRI"));
        }
        Ok(out)
    }

    // after the backslash
    fn uchar(&mut self) -> Result<char, ParseError> {
        let len = match self.bump() {
            Some('u') => 4,
            Some('U') => 8,
            _ => return Err(self.err("invalid escape sequence")),
        };
        let hex = self.text.get(self.pos..self.pos + len).ok_or_else(|| self.err("truncated \\u escape"))?;
        let value = u32::from_str_radix(hex, 16).map_err(|_| self.err("invalid hex in \\u escape"))?;
        self.pos += len;
        char::from_u32(value).ok_or_else(|| self.err("escape is not a Unicode scalar value"))
    }

    fn blank(&mut self) -> Result<String, ParseError> {
        self.expect('_')?;
        self.expect(':')?;
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c.is_alphanumeric() || matches!(c, '_' | '-' | '.' | '\u{b7}') {
                self.bump();
            } else {
                break;
            }
        }
        // a trailing dot terminates the statement
        while self.pos > start && self.text[..self.pos].ends_with('.') {
            self.pos -= 1;
        }
        let label = &self.text[start..self.pos];
        if label.is_empty() || label.starts_with(['-', '.']) {
            return Err(self.err("invalid blank node label"));
        }
        Ok(label.to_string())
    }

    fn literal(&mut self) -> Result<Literal, ParseError> {
        self.expect('"')?;
        let mut lexical = String::new();
        loop {
            match self.bump() {
                Some('"') => break,
                Some('\\') => lexical.push(self.echar()?),
                Some('\n') | Some('\r') | None => return Err(self.err("unterminated literal")),
                Some(c) => lexical.push(c),
            }
        }
        let kind = match self.peek() {
            Some('^') => {
                self.bump();
                self.expect('^')?;
                LiteralKind::Typed(self.iri()?)
            }
            Some('@') => {
                self.bump();
                LiteralKind::Lang(self.langtag()?)
            }
            _ => LiteralKind::Typed(XSD_STRING.to_string()),
        };
        Ok(Literal { lexical, kind })
    }

    fn echar(&mut self) -> Result<char, ParseError> {
        let c = match self.peek() {
            Some('u') | Some('U') => return self.uchar(),
            Some(c) => c,
            None => return Err(self.err("dangling backslash")),
        };
        self.bump();
        Ok(match c {
            't' => '\t',
            'b' => '\u{8}',
            'n' => '\n',
            'r' => '\r',
            'f' => '\u{c}',
            '"' => '"',
            '\'' => '\'',
            '\\' => '\\',
            _ => return Err(self.err(format!("invalid escape \\{c}"))),
        })
    }

    fn langtag(&mut self) -> Result<String, ParseError> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == '-') {
            self.bump();
        }
        let tag = &self.text[start..self.pos];
        if !is_valid_langtag(tag) {
            return Err(self.err(format!("invalid language tag {tag:?}")));
        }
        Ok(tag.to_ascii_lowercase())
    }
}

/// `[a-zA-Z]+ ('-' [a-zA-Z0-9]+)*`
pub(crate) fn is_valid_langtag(tag: &str) -> bool {
    let mut parts = tag.split('-');
    let first = parts.next().unwrap_or("");
    !first.is_empty()
        && first.chars().all(|c| c.is_ascii_alphabetic())
        && parts.all(|p| !p.is_empty() && p.chars().all(|c| c.is_ascii_alphanumeric()))
}

fn push_escaped_literal(out: &mut String, lexical: &str) {
    for c in lexical.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            '\u{8}' => out.push_str("\\b"),
            '\u{c}' => out.push_str("\\f"),
            '\u{0}'..='\u{1f}' | '\u{7f}' => out.push_str(&format!("\\u{:04X}", c as u32)),
            c => out.push(c),
        }
    }
}

fn push_term(out: &mut String, term: &Term) {
    match term {
        Term::Iri(iri) => {
            out.push('<');
            out.push_str(iri);
            out.push('>');
        }
        Term::Blank(label) => {
            out.push_str("_:");
            out.push_str(label);
        }
        Term::Literal(lit) => {
            out.push('"');
            push_escaped_literal(out, &lit.lexical);
            out.push('"');
            match &lit.kind {
                LiteralKind::Typed(dt) if dt == XSD_STRING => {}
                LiteralKind::Typed(dt) => {
                    out.push_str("^^<");
                    out.push_str(dt);
                    out.push('>');
                }
                LiteralKind::Lang(tag) => {
                    out.push('@');
                    out.push_str(tag);
                }
            }
        }
    }
}

/// Appends the canonical N-Quads line for `quad`, including the final LF.
pub fn push_quad(out: &mut String, quad: &Quad) {
    push_term(out, &quad.subject);
    out.push(' ');
    out.push('<');
    out.push_str(&quad.predicate);
    out.push_str("> ");
    push_term(out, &quad.object);
    if let GraphName::Iri(g) = &quad.graph {
        out.push_str(" <");
        out.push_str(g);
        out.push('>');
    }
    out.push_str(" .\n");
}

pub fn quad_to_string(quad: &Quad) -> String {
    let mut s = String::new();
    push_quad(&mut s, quad);
    s
}

/// Writes quads as canonical N-Quads, one line each.
pub struct NQuadsWriter<W: Write> {
    out: W,
    buf: String,
}

impl<W: Write> NQuadsWriter<W> {
    pub fn new(out: W) -> Self {
        NQuadsWriter { out, buf: String::new() }
    }

    pub fn write_quad(&mut self, quad: &Quad) -> io::Result<()> {
        self.buf.clear();
        push_quad(&mut self.buf, quad);
        self.out.write_all(self.buf.as_bytes())
    }

    pub fn finish(mut self) -> io::Result<W> {
        self.out.flush()?;
        Ok(self.out)
    }
}

/// Serializes a document in its current quad order.
pub fn serialize(doc: &QuadDocument) -> Vec<u8> {
    let mut s = String::new();
    for q in &doc.quads {
        push_quad(&mut s, q);
    }
    s.into_bytes()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rdf::{parse, RdfFormat};

    fn one(line: &str) -> Quad {
        parse_line(line, 1).unwrap().unwrap()
    }

    #[test]
    fn base_case() {
        let q = one("<http://s> <http://p> <http://o> <http://g> .");
        assert_eq!(q.graph, GraphName::Iri("http://g".into()));
        assert_eq!(q.subject, Term::iri("http://s"));
        assert_eq!(q.object, Term::iri("http://o"));
    }

    #[test]
    fn plain_literal_default_graph() {
        let q = one("<http://s> <http://p> \"x\" .");
        assert_eq!(q.graph, GraphName::Default);
        assert_eq!(q.object, Term::Literal(Literal::simple("x")));
    }

    #[test]
    fn lang_lowercased() {
        let q = one("<http://s> <http://p> \"hi\"@EN-gb .");
        assert_eq!(q.object, Term::Literal(Literal::lang("hi", "en-gb")));
    }

    #[test]
    fn escapes_decoded() {
        let q = one(r#"_:b0 <http://p> "a\"b\\c\ndé\U0001F600" ."#);
        assert_eq!(q.subject, Term::Blank("b0".into()));
        assert_eq!(q.object, Term::Literal(Literal::simple("a\"b\\c\nd\u{e9}\u{1F600}")));
    }

    #[test]
    fn blank_label_before_dot() {
        let q = one("<http://s> <http://p> _:x.");
        assert_eq!(q.object, Term::Blank("x".into()));
    }

    #[test]
    fn comments_and_blank_lines() {
        assert!(parse_line("   # hello\n", 1).unwrap().is_none());
        assert!(parse_line("\r\n", 1).unwrap().is_none());
        let q = one("<http://s> <http://p> <http://o> . # trailing\r\n");
        assert_eq!(q.graph, GraphName::Default);
    }

    #[test]
    fn rejects_malformed() {
        for bad in [
            "<http://s> <http://p> <http://o>",
            "<http://s> <http://p> .",
            "\"lit\" <http://p> <http://o> .",
            "<http://s> _:p <http://o> .",
            "<http://s> <http://p> <http://o> _:g .",
            "<http://s> <http://p> \"x .",
            "<http://s p> <http://p> <http://o> .",
            "<http://s> <http://p> \"x\"@ .",
            "<http://s> <http://p> <http://o> . junk",
        ] {
            assert!(parse_line(bad, 7).is_err(), "{bad}");
        }
        match parse_line("<http://s> <http://p> .", 7) {
            Err(ParseError::Syntax { line, .. }) => assert_eq!(line, 7),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn serialize_escapes_newline() {
        let q = Quad::new(
            GraphName::Default,
            Term::iri("http://s"),
            "http://p",
            Term::Literal(Literal::simple("a\nb")),
        );
        assert_eq!(quad_to_string(&q), "<http://s> <http://p> \"a\\nb\" .\n");
    }

    #[test]
    fn empty_document() {
        let doc = QuadDocument::new(vec![], RdfFormat::NQuads);
        assert!(serialize(&doc).is_empty());
    }

    #[test]
    fn fixture_round_trip() {
        let text = "<http://s> <http://p> \"x\"^^<http://dt> <http://g> .\n\
                    _:a <http://p> \"y\"@de .\n\
                    <http://s> <http://p> \"tab\\there\" .\n";
        let doc = parse(text.as_bytes(), RdfFormat::NQuads).unwrap();
        assert_eq!(doc.len(), 3);
        let bytes = serialize(&doc);
        assert_eq!(std::str::from_utf8(&bytes).unwrap(), text);
        assert_eq!(parse(&bytes[..], RdfFormat::NQuads).unwrap(), doc);
    }
}
