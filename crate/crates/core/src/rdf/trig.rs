//! Streaming reader for a TriG subset: `@prefix`/`PREFIX` declarations,
//! graph blocks (with or without `GRAPH`), default-graph triples,
//! predicate-object lists with `;` and `,`, the `a` keyword, quoted and
//! long literals, numeric and boolean shorthand, and labelled blank nodes.
//! Collections, `[]` blank nodes, `@base` and quoted triples are rejected.

use std::collections::{HashMap, VecDeque};
use std::io::BufRead;

use super::nquads::is_valid_langtag;
use super::{
    is_forbidden_iri_char, GraphName, Literal, LiteralKind, ParseError, Quad, Term, RDF_TYPE, XSD_BOOLEAN,
    XSD_DECIMAL, XSD_DOUBLE, XSD_INTEGER, XSD_STRING,
};

/// Character source pulling one line at a time from the reader.
struct Chars<R> {
    input: R,
    buf: VecDeque<char>,
    line_buf: String,
    eof: bool,
    line: usize,
    column: usize,
}

impl<R: BufRead> Chars<R> {
    fn new(input: R) -> Self {
        Chars {
            input,
            buf: VecDeque::new(),
            line_buf: String::new(),
            eof: false,
            line: 1,
            column: 1,
        }
    }

    fn fill(&mut self, n: usize) -> Result<(), ParseError> {
        while self.buf.len() <= n && !self.eof {
            self.line_buf.clear();
            if self.input.read_line(&mut self.line_buf)? == 0 {
                self.eof = true;
            } else {
                self.buf.extend(self.line_buf.chars());
            }
        }
        Ok(())
    }

    fn peek_at(&mut self, n: usize) -> Result<Option<char>, ParseError> {
        self.fill(n)?;
        Ok(self.buf.get(n).copied())
    }

    fn peek(&mut self) -> Result<Option<char>, ParseError> {
        self.peek_at(0)
    }

    fn bump(&mut self) -> Result<Option<char>, ParseError> {
        self.fill(0)?;
        let c = self.buf.pop_front();
        if c == Some('\n') {
            self.line += 1;
            self.column = 1;
        } else if c.is_some() {
            self.column += 1;
        }
        Ok(c)
    }
}

/// Streaming TriG reader yielding quads in document order.
pub struct TriGReader<R> {
    src: Chars<R>,
    prefixes: HashMap<String, String>,
    graph: Option<GraphName>,
    pending: VecDeque<Quad>,
    done: bool,
}

impl<R: BufRead> TriGReader<R> {
    pub fn new(input: R) -> Self {
        TriGReader {
            src: Chars::new(input),
            prefixes: HashMap::new(),
            graph: None,
            pending: VecDeque::new(),
            done: false,
        }
    }

    fn err(&self, message: impl Into<String>) -> ParseError {
        ParseError::syntax(self.src.line, self.src.column, message)
    }

    fn skip_ws(&mut self) -> Result<(), ParseError> {
        loop {
            match self.src.peek()? {
                Some(c) if c.is_whitespace() => {
                    self.src.bump()?;
                }
                Some('#') => {
                    while !matches!(self.src.bump()?, Some('\n') | None) {}
                }
                _ => return Ok(()),
            }
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        self.skip_ws()?;
        match self.src.bump()? {
            Some(got) if got == c => Ok(()),
            Some(got) => Err(self.err(format!("expected {c:?}, found {got:?}"))),
            None => Err(self.err(format!("expected {c:?}, found end of input"))),
        }
    }

    /// Case-insensitive keyword followed by whitespace.
    fn at_keyword(&mut self, kw: &str) -> Result<bool, ParseError> {
        for (i, k) in kw.chars().enumerate() {
            match self.src.peek_at(i)? {
                Some(c) if c.eq_ignore_ascii_case(&k) => {}
                _ => return Ok(false),
            }
        }
        Ok(matches!(self.src.peek_at(kw.len())?, Some(c) if c.is_whitespace() || c == '<' || c == '{'))
    }

    fn consume(&mut self, n: usize) -> Result<(), ParseError> {
        for _ in 0..n {
            self.src.bump()?;
        }
        Ok(())
    }

    /// Parses one top-level unit or graph-block statement into `pending`.
    fn step(&mut self) -> Result<(), ParseError> {
        self.skip_ws()?;
        if let Some(graph) = self.graph.clone() {
            match self.src.peek()? {
                None => return Err(self.err("unterminated graph block")),
                Some('}') => {
                    self.src.bump()?;
                    self.graph = None;
                }
                Some(_) => {
                    let subject = self.subject()?;
                    self.predicate_object_list(&graph, &subject)?;
                    self.skip_ws()?;
                    match self.src.peek()? {
                        Some('.') => {
                            self.src.bump()?;
                        }
                        Some('}') => {}
                        _ => return Err(self.err("expected '.' or '}' after triples")),
                    }
                }
            }
            return Ok(());
        }
        match self.src.peek()? {
            None => {
                self.done = true;
                return Ok(());
            }
            Some('@') => return self.at_directive(),
            Some('{') => {
                self.src.bump()?;
                self.graph = Some(GraphName::Default);
                return Ok(());
            }
            _ => {}
        }
        if self.at_keyword("PREFIX")? {
            self.consume(6)?;
            return self.prefix_decl(false);
        }
        if self.at_keyword("BASE")? {
            return Err(self.err("base IRIs are not supported"));
        }
        if self.at_keyword("GRAPH")? {
            self.consume(5)?;
            self.skip_ws()?;
            let label = self.graph_label()?;
            self.expect('{')?;
            self.graph = Some(label);
            return Ok(());
        }
        let term = self.subject()?;
        self.skip_ws()?;
        if self.src.peek()? == Some('{') {
            self.src.bump()?;
            self.graph = Some(match term {
                Term::Iri(iri) => GraphName::Iri(iri),
                _ => return Err(self.err("blank node graph labels are not supported")),
            });
            return Ok(());
        }
        self.predicate_object_list(&GraphName::Default, &term)?;
        self.expect('.')
    }

    fn at_directive(&mut self) -> Result<(), ParseError> {
        self.src.bump()?;
        let word = self.name_chars(|c| c.is_ascii_alphabetic())?;
        match word.as_str() {
            "prefix" => self.prefix_decl(true),
            "base" => Err(self.err("base IRIs are not supported")),
            other => Err(self.err(format!("unknown directive @{other}"))),
        }
    }

    fn prefix_decl(&mut self, dotted: bool) -> Result<(), ParseError> {
        self.skip_ws()?;
        let prefix = self.name_chars(is_pn_chars)?;
        if prefix.ends_with('.') {
            return Err(self.err("prefix may not end with '.'"));
        }
        if self.src.bump()? != Some(':') {
            return Err(self.err("expected ':' after prefix name"));
        }
        self.skip_ws()?;
        let iri = self.iri_ref()?;
        if dotted {
            self.expect('.')?;
        }
        self.prefixes.insert(prefix, iri);
        Ok(())
    }

    fn name_chars(&mut self, accept: impl Fn(char) -> bool) -> Result<String, ParseError> {
        let mut s = String::new();
        while let Some(c) = self.src.peek()? {
            if accept(c) {
                s.push(c);
                self.src.bump()?;
            } else {
                break;
            }
        }
        Ok(s)
    }

    fn graph_label(&mut self) -> Result<GraphName, ParseError> {
        match self.src.peek()? {
            Some('_') => Err(self.err("blank node graph labels are not supported")),
            _ => Ok(GraphName::Iri(self.iri()?)),
        }
    }

    fn subject(&mut self) -> Result<Term, ParseError> {
        match self.src.peek()? {
            Some('_') if self.src.peek_at(1)? == Some(':') => Ok(Term::Blank(self.blank()?)),
            Some('[') => Err(self.err("anonymous blank nodes are not supported")),
            Some('(') => Err(self.err("collections are not supported")),
            Some('<') if self.src.peek_at(1)? == Some('<') => Err(self.err("quoted triples are not supported")),
            Some(_) => Ok(Term::Iri(self.iri()?)),
            None => Err(self.err("unexpected end of input")),
        }
    }

    fn predicate_object_list(&mut self, graph: &GraphName, subject: &Term) -> Result<(), ParseError> {
        loop {
            self.skip_ws()?;
            let predicate = if self.src.peek()? == Some('a')
                && matches!(self.src.peek_at(1)?, Some(c) if c.is_whitespace() || c == '<' || c == '"')
            {
                self.src.bump()?;
                RDF_TYPE.to_string()
            } else {
                self.iri()?
            };
            loop {
                self.skip_ws()?;
                let object = self.object()?;
                self.pending
                    .push_back(Quad::new(graph.clone(), subject.clone(), predicate.clone(), object));
                self.skip_ws()?;
                if self.src.peek()? == Some(',') {
                    self.src.bump()?;
                } else {
                    break;
                }
            }
            // one or more ';', optionally followed by another predicate
            let mut saw_semicolon = false;
            while self.src.peek()? == Some(';') {
                self.src.bump()?;
                saw_semicolon = true;
                self.skip_ws()?;
            }
            if !saw_semicolon || matches!(self.src.peek()?, Some('.') | Some('}') | None) {
                return Ok(());
            }
        }
    }

    fn object(&mut self) -> Result<Term, ParseError> {
        match self.src.peek()? {
            Some('"') | Some('\'') => Ok(Term::Literal(self.literal()?)),
            Some(c) if c.is_ascii_digit() || c == '+' || c == '-' => Ok(Term::Literal(self.number()?)),
            Some('.') if matches!(self.src.peek_at(1)?, Some(d) if d.is_ascii_digit()) => {
                Ok(Term::Literal(self.number()?))
            }
            Some('t') | Some('f') if self.at_boolean()? => {
                let word = self.name_chars(|c| c.is_ascii_alphabetic())?;
                Ok(Term::Literal(Literal::typed(word, XSD_BOOLEAN)))
            }
            _ => self.subject(),
        }
    }

    fn at_boolean(&mut self) -> Result<bool, ParseError> {
        for word in ["true", "false"] {
            let mut matched = true;
            for (i, k) in word.chars().enumerate() {
                if self.src.peek_at(i)? != Some(k) {
                    matched = false;
                    break;
                }
            }
            if matched {
                let next = self.src.peek_at(word.len())?;
                if !matches!(next, Some(c) if is_pn_chars(c) || c == ':') {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }

    fn number(&mut self) -> Result<Literal, ParseError> {
        let mut s = String::new();
        if let Some(c @ ('+' | '-')) = self.src.peek()? {
            s.push(c);
            self.src.bump()?;
        }
        s.push_str(&self.name_chars(|c| c.is_ascii_digit())?);
        let mut datatype = XSD_INTEGER;
        if self.src.peek()? == Some('.') && matches!(self.src.peek_at(1)?, Some(d) if d.is_ascii_digit()) {
            self.src.bump()?;
            s.push('.');
            s.push_str(&self.name_chars(|c| c.is_ascii_digit())?);
            datatype = XSD_DECIMAL;
        }
        if let Some(e @ ('e' | 'E')) = self.src.peek()? {
            self.src.bump()?;
            s.push(e);
            if let Some(sign @ ('+' | '-')) = self.src.peek()? {
                self.src.bump()?;
                s.push(sign);
            }
            let exp = self.name_chars(|c| c.is_ascii_digit())?;
            if exp.is_empty() {
                return Err(self.err("malformed exponent"));
            }
            s.push_str(&exp);
            datatype = XSD_DOUBLE;
        }
        if !s.chars().any(|c| c.is_ascii_digit()) {
            return Err(self.err("malformed number"));
        }
        Ok(Literal::typed(s, datatype))
    }

    fn literal(&mut self) -> Result<Literal, ParseError> {
        let quote = self.src.bump()?.expect("caller peeked a quote");
        let long = self.src.peek()? == Some(quote) && self.src.peek_at(1)? == Some(quote);
        if long {
            self.consume(2)?;
        }
        let mut lexical = String::new();
        loop {
            match self.src.bump()? {
                None => return Err(self.err("unterminated literal")),
                Some(c) if c == quote => {
                    if !long {
                        break;
                    }
                    if self.src.peek()? == Some(quote) && self.src.peek_at(1)? == Some(quote) {
                        self.consume(2)?;
                        // up to two quotes may directly precede the closing triple
                        while self.src.peek()? == Some(quote) {
                            lexical.push(quote);
                            self.src.bump()?;
                        }
                        break;
                    }
                    lexical.push(c);
                }
                Some('\\') => lexical.push(self.escape()?),
                Some('\n') | Some('\r') if !long => return Err(self.err("newline in short literal")),
                Some(c) => lexical.push(c),
            }
        }
        let kind = match self.src.peek()? {
            Some('^') if self.src.peek_at(1)? == Some('^') => {
                self.consume(2)?;
                LiteralKind::Typed(self.iri()?)
            }
            Some('@') => {
                self.src.bump()?;
                let tag = self.name_chars(|c| c.is_ascii_alphanumeric() || c == '-')?;
                if !is_valid_langtag(&tag) {
                    return Err(self.err(format!("invalid language tag {tag:?}")));
                }
                LiteralKind::Lang(tag.to_ascii_lowercase())
            }
            _ => LiteralKind::Typed(XSD_STRING.to_string()),
        };
        Ok(Literal { lexical, kind })
    }

    // after the backslash
    fn escape(&mut self) -> Result<char, ParseError> {
        let c = self.src.bump()?.ok_or_else(|| self.err("dangling backslash"))?;
        Ok(match c {
            't' => '\t',
            'b' => '\u{8}',
            'n' => '\n',
            'r' => '\r',
            'f' => '\u{c}',
            '"' => '"',
            '\'' => '\'',
            '\\' => '\\',
            'u' => self.hex_char(4)?,
            'U' => self.hex_char(8)?,
            _ => return Err(self.err(format!("invalid escape \\{c}"))),
        })
    }

    fn hex_char(&mut self, len: usize) -> Result<char, ParseError> {
        let mut value = 0u32;
        for _ in 0..len {
            let d = self
                .src
                .bump()?
                .and_then(|c| c.to_digit(16))
                .ok_or_else(|| self.err("invalid hex in \\u escape"))?;
            value = value * 16 + d;
        }
        char::from_u32(value).ok_or_else(|| self.err("escape is not a Unicode scalar value"))
    }

    fn iri(&mut self) -> Result<String, ParseError> {
        match self.src.peek()? {
            Some('<') => self.iri_ref(),
            Some(_) => self.prefixed_name(),
            None => Err(self.err("expected IRI, found end of input")),
        }
    }

    fn iri_ref(&mut self) -> Result<String, ParseError> {
        if self.src.bump()? != Some('<') {
            return Err(self.err("expected '<'"));
        }
        let mut out = String::new();
        loop {
            match self.src.bump()? {
                Some('>') => break,
                Some('\\') => {
                    let c = match self.src.bump()? {
                        Some('u') => self.hex_char(4)?,
                        Some('U') => self.hex_char(8)?,
                        _ => return Err(self.err("invalid escape in IRI")),
                    };
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

    fn prefixed_name(&mut self) -> Result<String, ParseError> {
        let prefix = self.name_chars(is_pn_chars)?;
        if self.src.peek()? != Some(':') {
            let found = self.src.peek()?;
            return Err(self.err(format!("expected IRI or prefixed name, found {found:?}")));
        }
        self.src.bump()?;
        let namespace = self
            .prefixes
            .get(&prefix)
            .cloned()
            .ok_or_else(|| self.err(format!("undefined prefix {prefix:?}")))?;
        let mut local = String::new();
        loop {
            match self.src.peek()? {
                Some('\\') => {
                    self.src.bump()?;
                    match self.src.bump()? {
                        Some(c) if "_~.-!$&'()*+,;=/?#@%".contains(c) => local.push(c),
                        _ => return Err(self.err("invalid escape in local name")),
                    }
                }
                Some('%') => {
                    local.push('%');
                    self.src.bump()?;
                    for _ in 0..2 {
                        match self.src.bump()? {
                            Some(h) if h.is_ascii_hexdigit() => local.push(h),
                            _ => return Err(self.err("invalid percent escape")),
                        }
                    }
                }
                // a dot is part of the name only if more name characters follow
                Some('.') if matches!(self.src.peek_at(1)?, Some(c) if is_pn_chars(c) || c == ':') => {
                    local.push('.');
                    self.src.bump()?;
                }
                Some(c) if is_pn_chars(c) && c != '.' || c == ':' => {
                    local.push(c);
                    self.src.bump()?;
                }
                _ => break,
            }
        }
        let iri = namespace + &local;
        if iri.chars().any(is_forbidden_iri_char) {
            return Err(self.err("prefixed name expands to an invalid IRI"));
        }
        Ok(iri)
    }

    fn blank(&mut self) -> Result<String, ParseError> {
        self.consume(2)?;
        let mut label = String::new();
        loop {
            match self.src.peek()? {
                Some('.') if matches!(self.src.peek_at(1)?, Some(c) if is_pn_chars(c)) => {
                    label.push('.');
                    self.src.bump()?;
                }
                Some(c) if is_pn_chars(c) && c != '.' => {
                    label.push(c);
                    self.src.bump()?;
                }
                _ => break,
            }
        }
        if label.is_empty() || label.starts_with('-') {
            return Err(self.err("invalid blank node label"));
        }
        Ok(label)
    }
}

fn is_pn_chars(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '-' | '.' | '\u{b7}')
}

impl<R: BufRead> Iterator for TriGReader<R> {
    type Item = Result<Quad, ParseError>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            if let Some(q) = self.pending.pop_front() {
                return Some(Ok(q));
            }
            if self.done {
                return None;
            }
            if let Err(e) = self.step() {
                self.done = true;
                self.pending.clear();
                return Some(Err(e));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rdf::{parse, RdfFormat};

    fn quads(text: &str) -> Vec<Quad> {
        parse(text.as_bytes(), RdfFormat::TriG).unwrap().quads
    }

    fn iri(s: &str) -> Term {
        Term::iri(s)
    }

    #[test]
    fn prefix_expansion() {
        let q = quads("@prefix ex: <http://e/> . ex:g { ex:s ex:p ex:o . }");
        assert_eq!(
            q,
            vec![Quad::new(GraphName::Iri("http://e/g".into()), iri("http://e/s"), "http://e/p", iri("http://e/o"))]
        );
    }

    #[test]
    fn sparql_style_and_graph_keyword() {
        let q = quads("PREFIX ex: <http://e/>\nGRAPH ex:g { ex:s a ex:C }\n{ ex:s ex:p ex:o }");
        assert_eq!(q.len(), 2);
        assert_eq!(q[0].predicate, RDF_TYPE);
        assert_eq!(q[1].graph, GraphName::Default);
    }

    #[test]
    fn lists_and_literals() {
        let text = r#"@prefix ex: <http://e/> .
            @prefix xsd: <http://www.w3.org/2001/XMLSchema#> .
            ex:g {
              ex:s ex:p "a", 'b'@EN ;
                   ex:q """multi
line""" , "5"^^xsd:int ;
                   ex:r 42, -1.5, 1e3, true ;
              .
              _:b1 ex:p ex:o
            }
            ex:t ex:p ex:o ."#;
        let q = quads(text);
        let objs: Vec<_> = q.iter().map(|q| q.object.clone()).collect();
        assert_eq!(objs[0], Term::Literal(Literal::simple("a")));
        assert_eq!(objs[1], Term::Literal(Literal::lang("b", "en")));
        assert_eq!(objs[2], Term::Literal(Literal::simple("multi\nline")));
        assert_eq!(objs[3], Term::Literal(Literal::typed("5", "http://www.w3.org/2001/XMLSchema#int")));
        assert_eq!(objs[4], Term::Literal(Literal::typed("42", XSD_INTEGER)));
        assert_eq!(objs[5], Term::Literal(Literal::typed("-1.5", XSD_DECIMAL)));
        assert_eq!(objs[6], Term::Literal(Literal::typed("1e3", XSD_DOUBLE)));
        assert_eq!(objs[7], Term::Literal(Literal::typed("true", XSD_BOOLEAN)));
        assert_eq!(q[8].subject, Term::Blank("b1".into()));
        assert_eq!(q[9].graph, GraphName::Default);
        assert_eq!(q.len(), 10);
    }

    #[test]
    fn local_names_with_dots_and_escapes() {
        let q = quads("@prefix ex: <http://e/> . ex:a.b ex:p ex:c\\#d . ex:x ex:p ex:y.");
        assert_eq!(q[0].subject, iri("http://e/a.b"));
        assert_eq!(q[0].object, iri("http://e/c#d"));
        assert_eq!(q[1].object, iri("http://e/y"));
    }

    #[test]
    fn errors() {
        for bad in [
            "@prefix ex: <http://e/> . ex:g { ex:s ex:p ex:o . ",
            "ex:s ex:p ex:o .",
            "<http://s> <http://p> [ <http://q> <http://o> ] .",
            "<http://s> <http://p> ( <http://o> ) .",
            "_:g { <http://s> <http://p> <http://o> }",
            "@base <http://e/> .",
            "<http://s> <http://p> \"x\" ",
            "<http://s> <http://p> <http://o> } ",
        ] {
            assert!(parse(bad.as_bytes(), RdfFormat::TriG).is_err(), "{bad}");
        }
    }
}
