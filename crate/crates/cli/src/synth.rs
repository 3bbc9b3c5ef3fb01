//! Synthetic RDF: nanopublication-like documents, small random datasets
//! and large N-Quads files.

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use trustyuri::module_r;
use trustyuri::rdf::nquads::push_quad;
use trustyuri::rdf::{
    GraphName, Literal, LiteralKind, Quad, Term, RDF_TYPE, XSD_BOOLEAN, XSD_DECIMAL, XSD_INTEGER, XSD_STRING,
};
use trustyuri::ModuleId;

pub const NP: &str = "http://www.nanopub.org/nschema#";
pub const PROV: &str = "http://www.w3.org/ns/prov#";
pub const DCT: &str = "http://purl.org/dc/terms/";
pub const XSD: &str = "http://www.w3.org/2001/XMLSchema#";
pub const EX: &str = "http://example.org/vocab/";
const XSD_DATETIME: &str = "http://www.w3.org/2001/XMLSchema#dateTime";

/// Prefix table used when rendering TriG.
pub fn default_prefixes() -> Vec<(&'static str, &'static str)> {
    vec![
        ("np", NP),
        ("prov", PROV),
        ("dct", DCT),
        ("xsd", XSD),
        ("ex", EX),
        ("rdf", "http://www.w3.org/1999/02/22-rdf-syntax-ns#"),
    ]
}

const WORDS: &[&str] = &[
    "alpha", "beta", "gene", "protein", "disease", "Ärzte", "naïve", "東京", "x\"y", "back\\slash", "tab\there",
    "line\nbreak", "🙂", "50%", "a.b", "<tag>",
];

fn sentence(rng: &mut impl Rng) -> String {
    let n = rng.gen_range(1..=4);
    (0..n).map(|_| *WORDS.choose(rng).unwrap()).collect::<Vec<_>>().join(" ")
}

fn random_literal(rng: &mut impl Rng) -> Literal {
    match rng.gen_range(0..8) {
        0 => Literal::simple(sentence(rng)),
        1 => Literal::lang(sentence(rng), ["en", "de", "en-GB", "ja"].choose(rng).unwrap()),
        2 => Literal::typed(rng.gen_range(-1000i64..1000).to_string(), XSD_INTEGER),
        3 => Literal::typed(format!("{}.{}", rng.gen_range(0..100), rng.gen_range(0..100)), XSD_DECIMAL),
        4 => Literal::typed(if rng.gen() { "true" } else { "false" }, XSD_BOOLEAN),
        5 => Literal::typed(
            format!("2014-{:02}-{:02}T10:00:00Z", rng.gen_range(1..13), rng.gen_range(1..29)),
            XSD_DATETIME,
        ),
        6 => Literal::typed(sentence(rng), format!("{EX}customType")),
        _ => Literal::simple(""),
    }
}

/// A nanopublication-like dataset: head, assertion, provenance and
/// publication-info graphs with blank nodes and self-references.
pub fn nanopub(rng: &mut impl Rng, base: &str) -> Vec<Quad> {
    let g = |s: &str| GraphName::Iri(format!("{base}#{s}"));
    let this = |s: &str| Term::iri(format!("{base}#{s}"));
    let ex = |s: &str| Term::iri(format!("{EX}{s}"));
    let (head, assertion, provenance, pubinfo) = (g("Head"), g("assertion"), g("provenance"), g("pubinfo"));
    let mut quads = vec![
        Quad::new(head.clone(), Term::iri(base), RDF_TYPE, Term::iri(format!("{NP}Nanopublication"))),
        Quad::new(head.clone(), Term::iri(base), format!("{NP}hasAssertion"), this("assertion")),
        Quad::new(head.clone(), Term::iri(base), format!("{NP}hasProvenance"), this("provenance")),
        Quad::new(head, Term::iri(base), format!("{NP}hasPublicationInfo"), this("pubinfo")),
    ];
    let blanks = ["b1", "b2", "node3"];
    for _ in 0..rng.gen_range(1..=6) {
        let subject = match rng.gen_range(0..4) {
            0 => Term::Blank(blanks.choose(rng).unwrap().to_string()),
            1 => this(&format!("claim{}", rng.gen_range(0..3))),
            _ => ex(&format!("thing{}", rng.gen_range(0..20))),
        };
        let predicate = match rng.gen_range(0..5) {
            0 => RDF_TYPE.to_string(),
            n => format!("{EX}rel{n}"),
        };
        let object = match rng.gen_range(0..5) {
            0 => Term::Blank(blanks.choose(rng).unwrap().to_string()),
            1 => ex(&format!("thing{}", rng.gen_range(0..20))),
            2 => Term::iri(format!("http://purl.example.org/id/{}-x.y", rng.gen_range(0..9))),
            _ => Term::Literal(random_literal(rng)),
        };
        quads.push(Quad::new(assertion.clone(), subject, predicate, object));
    }
    quads.push(Quad::new(
        provenance.clone(),
        this("assertion"),
        format!("{PROV}wasDerivedFrom"),
        ex(&format!("source{}", rng.gen_range(0..50))),
    ));
    quads.push(Quad::new(
        provenance.clone(),
        this("assertion"),
        format!("{PROV}wasGeneratedBy"),
        Term::Blank("activity".into()),
    ));
    quads.push(Quad::new(
        provenance,
        Term::Blank("activity".into()),
        format!("{PROV}wasAssociatedWith"),
        Term::iri(format!("http://orcid.org/0000-0002-{:04}-{:04}", rng.gen_range(0..10000), rng.gen_range(0..10000))),
    ));
    quads.push(Quad::new(
        pubinfo.clone(),
        Term::iri(base),
        format!("{DCT}created"),
        Term::Literal(Literal::typed(
            format!("2014-0{}-1{}T12:00:00Z", rng.gen_range(1..10), rng.gen_range(0..10)),
            XSD_DATETIME,
        )),
    ));
    quads.push(Quad::new(
        pubinfo,
        Term::iri(base),
        format!("{DCT}description"),
        Term::Literal(Literal::lang(sentence(rng), "en")),
    ));
    quads.shuffle(rng);
    grouped(quads)
}

/// Stable regrouping by graph, then subject, then predicate, each in order
/// of first appearance. This is the statement order of [`render_trig`],
/// so N-Quads written from the result meet blank nodes in the same order
/// as the TriG rendering.
pub fn grouped(quads: Vec<Quad>) -> Vec<Quad> {
    fn first_index<T: PartialEq>(seen: &mut Vec<T>, item: T) -> usize {
        seen.iter().position(|s| *s == item).unwrap_or_else(|| {
            seen.push(item);
            seen.len() - 1
        })
    }
    let mut graphs = Vec::new();
    let mut subjects = Vec::new();
    let mut predicates = Vec::new();
    let mut keyed: Vec<((usize, usize, usize), Quad)> = quads
        .into_iter()
        .map(|q| {
            let g = first_index(&mut graphs, q.graph.clone());
            let s = first_index(&mut subjects, (g, q.subject.clone()));
            let p = first_index(&mut predicates, (s, q.predicate.clone()));
            ((g, s, p), q)
        })
        .collect();
    keyed.sort_by_key(|(k, _)| *k);
    keyed.into_iter().map(|(_, q)| q).collect()
}

/// A small random dataset with 0 to 20 quads.
pub fn random_document(rng: &mut impl Rng, base: &str) -> Vec<Quad> {
    let suffixed = |rng: &mut ChaCha8Rng| -> String {
        let n = rng.gen_range(0..3);
        match rng.gen_range(0..3) {
            0 if !base.ends_with('#') => format!("{base}#part{n}"),
            1 => format!("{base}/sub{n}"),
            _ => format!("{base}.v{n}"),
        }
    };
    let mut rng = ChaCha8Rng::seed_from_u64(rng.gen());
    let count = rng.gen_range(0..=20);
    let mut quads = Vec::with_capacity(count);
    for _ in 0..count {
        let resource = |rng: &mut ChaCha8Rng| -> Term {
            match rng.gen_range(0..5) {
                0 => Term::iri(base),
                1 => Term::iri(suffixed(rng)),
                2 => Term::Blank(format!("b{}", rng.gen_range(0..4))),
                _ => Term::iri(format!("http://example.net/r{}", rng.gen_range(0..6))),
            }
        };
        let graph = match rng.gen_range(0..4) {
            0 => GraphName::Default,
            1 => GraphName::Iri(base.to_string()),
            2 => GraphName::Iri(suffixed(&mut rng)),
            _ => GraphName::Iri(format!("http://example.net/g{}", rng.gen_range(0..2))),
        };
        let subject = resource(&mut rng);
        let predicate = if rng.gen_bool(0.2) {
            suffixed(&mut rng)
        } else {
            format!("{EX}p{}", rng.gen_range(0..4))
        };
        let object = if rng.gen() {
            resource(&mut rng)
        } else {
            Term::Literal(random_literal(&mut rng))
        };
        quads.push(Quad::new(graph, subject, predicate, object));
    }
    quads
}

/// Canonical N-Quads text of `quads`, in the given order.
pub fn render_nquads(quads: &[Quad]) -> String {
    let mut s = String::new();
    for q in quads {
        push_quad(&mut s, q);
    }
    s
}

fn local_name_ok(local: &str) -> bool {
    let mut chars = local.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
}

fn trig_iri(iri: &str, prefixes: &[(&str, &str)]) -> String {
    for (p, ns) in prefixes {
        if let Some(local) = iri.strip_prefix(ns) {
            if local_name_ok(local) {
                return format!("{p}:{local}");
            }
        }
    }
    format!("<{iri}>")
}

fn trig_string(s: &str) -> String {
    let long = s.contains('\n');
    let mut out = String::from(if long { "\"\"\"" } else { "\"" });
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' if long => out.push('\n'),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c => out.push(c),
        }
    }
    out.push_str(if long { "\"\"\"" } else { "\"" });
    out
}

fn is_integer(s: &str) -> bool {
    let digits = s.strip_prefix(['+', '-']).unwrap_or(s);
    !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
}

fn is_decimal(s: &str) -> bool {
    let body = s.strip_prefix(['+', '-']).unwrap_or(s);
    match body.split_once('.') {
        Some((int, frac)) => {
            int.bytes().all(|b| b.is_ascii_digit()) && !frac.is_empty() && frac.bytes().all(|b| b.is_ascii_digit())
        }
        None => false,
    }
}

fn trig_term(t: &Term, prefixes: &[(&str, &str)]) -> String {
    match t {
        Term::Iri(iri) => trig_iri(iri, prefixes),
        Term::Blank(b) => format!("_:{b}"),
        Term::Literal(l) => match &l.kind {
            LiteralKind::Lang(tag) => format!("{}@{tag}", trig_string(&l.lexical)),
            LiteralKind::Typed(dt) if dt == XSD_STRING => trig_string(&l.lexical),
            LiteralKind::Typed(dt) if dt == XSD_INTEGER && is_integer(&l.lexical) => l.lexical.clone(),
            LiteralKind::Typed(dt) if dt == XSD_DECIMAL && is_decimal(&l.lexical) => l.lexical.clone(),
            LiteralKind::Typed(dt) if dt == XSD_BOOLEAN && (l.lexical == "true" || l.lexical == "false") => {
                l.lexical.clone()
            }
            LiteralKind::Typed(dt) => format!("{}^^{}", trig_string(&l.lexical), trig_iri(dt, prefixes)),
        },
    }
}

/// TriG rendering grouped by graph and subject, using `;`, `,` and `a`.
/// Both `GRAPH` and bare graph labels are used. Statements come out in
/// [`grouped`] order.
pub fn render_trig(quads: &[Quad], prefixes: &[(&str, &str)]) -> String {
    let mut out = String::new();
    for (i, (p, ns)) in prefixes.iter().enumerate() {
        if i % 2 == 0 {
            out.push_str(&format!("@prefix {p}: <{ns}> .\n"));
        } else {
            out.push_str(&format!("PREFIX {p}: <{ns}>\n"));
        }
    }
    let mut graphs: Vec<&GraphName> = Vec::new();
    for q in quads {
        if !graphs.contains(&&q.graph) {
            graphs.push(&q.graph);
        }
    }
    for (gi, graph) in graphs.into_iter().enumerate() {
        out.push('\n');
        match graph {
            GraphName::Default => out.push_str("{\n"),
            GraphName::Iri(g) if gi % 2 == 0 => out.push_str(&format!("GRAPH {} {{\n", trig_iri(g, prefixes))),
            GraphName::Iri(g) => out.push_str(&format!("{} {{\n", trig_iri(g, prefixes))),
        }
        let in_graph: Vec<&Quad> = quads.iter().filter(|q| &q.graph == graph).collect();
        let mut subjects: Vec<&Term> = Vec::new();
        for q in &in_graph {
            if !subjects.contains(&&q.subject) {
                subjects.push(&q.subject);
            }
        }
        for subject in subjects {
            out.push_str("  ");
            out.push_str(&trig_term(subject, prefixes));
            let mut predicates: Vec<&str> = Vec::new();
            for q in in_graph.iter().filter(|q| &q.subject == subject) {
                if !predicates.contains(&q.predicate.as_str()) {
                    predicates.push(&q.predicate);
                }
            }
            for (pi, p) in predicates.iter().enumerate() {
                if pi > 0 {
                    out.push_str(" ;\n     ");
                }
                out.push(' ');
                if *p == RDF_TYPE {
                    out.push('a');
                } else {
                    out.push_str(&trig_iri(p, prefixes));
                }
                let objects: Vec<String> = in_graph
                    .iter()
                    .filter(|q| &q.subject == subject && q.predicate == *p)
                    .map(|q| trig_term(&q.object, prefixes))
                    .collect();
                out.push(' ');
                out.push_str(&objects.join(" , "));
            }
            out.push_str(" .\n");
        }
        out.push_str("}\n");
    }
    out
}

/// Base URI of the `i`-th generated nanopublication.
pub fn nanopub_base(seed: u64, i: usize) -> String {
    format!("http://example.org/np/s{seed}n{i}")
}

/// Writes `count` nanopublications as `npN.nq` and `npN.trig` pairs.
pub fn write_nanopubs(dir: &Path, count: usize, seed: u64) -> io::Result<Vec<(PathBuf, PathBuf)>> {
    fs::create_dir_all(dir)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let prefixes = default_prefixes();
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let quads = nanopub(&mut rng, &nanopub_base(seed, i));
        let nq = dir.join(format!("np{i}.nq"));
        let trig = dir.join(format!("np{i}.trig"));
        fs::write(&nq, render_nquads(&quads))?;
        fs::write(&trig, render_trig(&quads, &prefixes))?;
        out.push((nq, trig));
    }
    Ok(out)
}

/// Writes `count` trusty nanopublications (module RA): `npN.<code>.nq`
/// plus a TriG twin `npN.<code>.trig` of the same dataset.
pub fn write_trusty_corpus(dir: &Path, count: usize, seed: u64) -> io::Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let prefixes = default_prefixes();
    let mut files = Vec::with_capacity(2 * count);
    for i in 0..count {
        let quads = nanopub(&mut rng, &nanopub_base(seed, i));
        let t = module_r::transform_quads(quads.into_iter().map(Ok), &nanopub_base(seed, i), ModuleId::RA)
            .map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e))?;
        let nq = dir.join(format!("np{i}.{}.nq", t.code));
        let trig = dir.join(format!("np{i}.{}.trig", t.code));
        fs::write(&nq, t.to_nquads())?;
        fs::write(&trig, render_trig(&t.quads, &prefixes))?;
        files.push(nq);
        files.push(trig);
    }
    Ok(files)
}

/// Writes `n` distinct quads of N-Quads in scrambled order. About one
/// quad in 64 uses a blank node and one in 16 references `base`.
pub fn write_large_nquads(path: &Path, n: u64, seed: u64, base: &str) -> io::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut w = BufWriter::with_capacity(1 << 20, File::create(path)?);
    let graphs = [
        format!("<{base}#g0>"),
        format!("<{base}#g1>"),
        "<http://example.org/graphs/shared>".to_string(),
    ];
    for i in 0..n {
        // an odd multiplier permutes the 64-bit indices
        let h = i.wrapping_mul(0x9E37_79B9_7F4A_7C15) >> 40;
        let r: u32 = rng.gen();
        let graph = &graphs[(r % 3) as usize];
        let subject = match r >> 26 {
            0 => format!("_:b{}", h % 1000),
            1..=4 => format!("<{base}#e{h}>"),
            _ => format!("<http://example.org/data/s{h}>"),
        };
        let p = (r >> 8) % 7;
        match (r >> 4) % 4 {
            0 => writeln!(w, "{subject} <{EX}p{p}> \"value {i} x{h}\" {graph} ."),
            1 => writeln!(w, "{subject} <{EX}p{p}> \"Wert {i}\"@de {graph} ."),
            2 => writeln!(w, "{subject} <{EX}p{p}> \"{i}\"^^<{XSD_INTEGER}> {graph} ."),
            _ => writeln!(w, "{subject} <{EX}link> <http://example.org/data/o{i}> {graph} ."),
        }?;
    }
    w.flush()
}
