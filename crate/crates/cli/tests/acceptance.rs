//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::cmp::Ordering;
use std::fs;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use trustyuri::extsort::SortConfig;
use trustyuri::large;
use trustyuri::module_r::canon::{compare_quads, serialize_statement, sort_key, PreObject, PreprocessedQuad};
use trustyuri::module_r::{self, check_rdf, CheckTarget};
use trustyuri::rdf::{self, GraphName, LiteralKind, RdfFormat};
use trustyuri::{module_fa, to_ni_uri, ModuleId, Verdict};
use trustyuri_cli::commands::{self, Options};
use trustyuri_cli::{fuzz, synth};

type Criterion = (&'static str, u64, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn within(elapsed: Duration, limit: Duration) -> bool {
    elapsed < limit
}

fn empty_file_golden() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("empty");
    fs::write(&path, b"").unwrap();
    let code = module_fa::hash_file(&path).unwrap().artifact_code.to_string();
    let expected = "FA47DEQpj8HBSa-_TImW-5JCeuQeRkm5NMpJWZG3hSuFU";
    let trusty = dir.path().join(format!("e.{expected}.txt"));
    fs::write(&trusty, b"").unwrap();
    let verdict = commands::check_file(&trusty, &Options::default()).verdict;
    outcome(code == expected && verdict == Verdict::Valid, format!("code {code}, CheckFile {verdict}"))
}

fn cross_format_equality() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let pairs = synth::write_nanopubs(dir.path(), 150, 2024).unwrap();
    let opts = Options::default();
    let (mut equal, mut with_blanks) = (0, 0);
    for (i, (nq, trig)) in pairs.iter().enumerate() {
        let doc = rdf::parse_file(nq, None).unwrap();
        with_blanks += usize::from(doc.quads.iter().any(|q| q.has_blank()));
        let base = synth::nanopub_base(2024, i);
        let a = commands::transform_rdf(nq, &base, ModuleId::RA, false, &opts);
        let b = commands::transform_rdf(trig, &base, ModuleId::RA, false, &opts);
        if a.verdict == Verdict::Valid && a.computed_code.is_some() && a.computed_code == b.computed_code {
            equal += 1;
        }
    }
    let twins = tempfile::tempdir().unwrap();
    let files = synth::write_trusty_corpus(twins.path(), 20, 7).unwrap();
    let twins_valid = files.iter().filter(|f| commands::check_file(f, &opts).verdict == Verdict::Valid).count();
    outcome(
        equal == pairs.len() && twins_valid == files.len(),
        format!(
            "{equal}/{} pairs share the RA code ({with_blanks} with blank nodes); {twins_valid}/{} trusty N-Quads/TriG twins valid",
            pairs.len(),
            files.len()
        ),
    )
}

fn corruption_detection() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let files = synth::write_trusty_corpus(dir.path(), 60, 99).unwrap();
    let nq: Vec<_> = files.iter().filter(|f| f.extension().is_some_and(|e| e == "nq")).cloned().collect();
    let trig: Vec<_> = files.iter().filter(|f| f.extension().is_some_and(|e| e == "trig")).cloned().collect();
    let opts = Options::default();
    let report = fuzz::fuzz_files(&nq, 1000, 1, &opts).unwrap();
    let t = report.by_kind.get("nq").copied().unwrap_or_default();
    let trig_report = fuzz::fuzz_files(&trig, 1000, 1, &opts).unwrap();
    let tt = trig_report.by_kind.get("trig").copied().unwrap_or_default();
    outcome(
        t.mutants == 1000 && t.valid == 0 && t.invalid + t.error == 1000,
        format!(
            "N-Quads: {} mutants, {} valid, {} invalid, {} error (still parsing: {}/{}); TriG, for reference: {:.1}% valid, {:.1}% invalid, {:.1}% error",
            t.mutants,
            t.valid,
            t.invalid,
            t.error,
            t.invalid_parsed,
            t.error_parsed,
            tt.valid_percent(),
            tt.invalid_percent(),
            tt.error_percent()
        ),
    )
}

fn random_base(rng: &mut impl Rng, i: usize) -> String {
    match rng.gen_range(0..3) {
        0 => format!("http://example.org/doc{i}"),
        1 => format!("http://example.org/doc{i}/"),
        _ => format!("http://example.org/doc{i}#"),
    }
}

fn round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut valid = 0;
    let (mut blanks, mut selfrefs, mut langs, mut empty) = (0, 0, 0, 0);
    for i in 0..1000 {
        let base = random_base(&mut rng, i);
        let quads = synth::random_document(&mut rng, &base);
        empty += usize::from(quads.is_empty());
        blanks += usize::from(quads.iter().any(|q| q.has_blank()));
        selfrefs += usize::from(quads.iter().any(|q| q.subject.as_iri().is_some_and(|s| s.starts_with(&base))));
        langs += usize::from(quads.iter().any(|q| {
            matches!(&q.object, rdf::Term::Literal(l) if matches!(l.kind, LiteralKind::Lang(_)))
        }));
        let Ok(out) = module_r::transform_quads(quads.into_iter().map(Ok), &base, ModuleId::RA) else {
            continue;
        };
        let doc = rdf::parse(out.to_nquads().as_slice(), RdfFormat::NQuads).unwrap();
        let target = CheckTarget::from_uri(&out.uri).unwrap();
        if check_rdf(&doc, &target).verdict == Verdict::Valid {
            valid += 1;
        }
    }
    outcome(
        valid == 1000,
        format!("{valid}/1000 valid (docs with blanks {blanks}, self-references {selfrefs}, language tags {langs}, empty {empty})"),
    )
}

fn transferability() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut forward = 0;
    for i in 0..100 {
        let base = random_base(&mut rng, i);
        let quads: Vec<_> = synth::random_document(&mut rng, &base)
            .into_iter()
            .map(|mut q| {
                q.graph = GraphName::Iri(base.clone());
                q
            })
            .collect();
        let out = module_r::transform_quads(quads.into_iter().map(Ok), &base, ModuleId::RB).unwrap();
        let rb = out.code.to_string();
        let ra = out.code.transfer(ModuleId::RA).unwrap().to_string();
        let text = String::from_utf8(out.to_nquads()).unwrap().replace(&rb, &ra);
        let doc = rdf::parse(text.as_bytes(), RdfFormat::NQuads).unwrap();
        let target = CheckTarget::from_uri(&out.uri.replace(&rb, &ra)).unwrap();
        if check_rdf(&doc, &target).verdict == Verdict::Valid {
            forward += 1;
        }
    }
    let mut reverse = 0;
    for i in 0..100 {
        let base = synth::nanopub_base(5, i);
        let quads = synth::nanopub(&mut rng, &base);
        let out = module_r::transform_quads(quads.into_iter().map(Ok), &base, ModuleId::RA).unwrap();
        let ra = out.code.to_string();
        let rb = format!("RB{}", out.code.hash_part());
        let text = String::from_utf8(out.to_nquads()).unwrap().replace(&ra, &rb);
        let doc = rdf::parse(text.as_bytes(), RdfFormat::NQuads).unwrap();
        let target = CheckTarget::from_uri(&out.uri.replace(&ra, &rb)).unwrap();
        let report = check_rdf(&doc, &target);
        if report.verdict == Verdict::Invalid && report.message.contains("module RB requires") {
            reverse += 1;
        }
    }
    outcome(
        forward == 100 && reverse == 100,
        format!("RB->RA valid {forward}/100; multi-graph RA->RB rejected by the graph constraint {reverse}/100"),
    )
}

fn large_small_equivalence() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let small_dir = dir.path().join("small");
    let large_dir = dir.path().join("large");
    fs::create_dir_all(&small_dir).unwrap();
    fs::create_dir_all(&large_dir).unwrap();
    let base = "http://example.org/big";
    synth::write_large_nquads(&small_dir.join("big.nq"), 1_000_000, 6, base).unwrap();
    fs::copy(small_dir.join("big.nq"), large_dir.join("big.nq")).unwrap();
    let cfg = SortConfig {
        max_in_memory_records: 10_000,
        ..SortConfig::default()
    };
    let small = module_r::transform_rdf_file(&small_dir.join("big.nq"), base, ModuleId::RA, None).unwrap();
    let big = large::transform_large_rdf(&large_dir.join("big.nq"), base, ModuleId::RA, None, &cfg).unwrap();
    let identical = fs::read(&small.path).unwrap() == fs::read(&big.file.path).unwrap();
    let target = CheckTarget::from_uri(&small.uri).unwrap();
    let full = module_r::check_rdf_file(&small.path, &target, None).verdict;
    let sorted = large::check_sorted_rdf(&small.path, &target, None).verdict;

    let text = fs::read_to_string(&small.path).unwrap();
    let tampered = dir.path().join("tampered.nq");
    fs::write(&tampered, text.replacen("\"value ", "\"valve ", 1)).unwrap();
    drop(text);
    let full_t = module_r::check_rdf_file(&tampered, &target, None).verdict;
    let sorted_t = large::check_sorted_rdf(&tampered, &target, None).verdict;
    outcome(
        identical && small.code == big.file.code && full == Verdict::Valid && sorted == full && full_t == sorted_t
            && full_t == Verdict::Invalid,
        format!(
            "outputs identical: {identical}; codes equal: {}; {} runs, {} merge passes; checkRdf/checkSortedRdf {full}/{sorted}, tampered {full_t}/{sorted_t}",
            small.code == big.file.code,
            big.stats.initial_runs,
            big.stats.merge_passes
        ),
    )
}

const TEXT: &[&str] = &["", "a", "b", "a ", "ab", " ", "\u{0}", "\u{e9}", "\u{1F600}", "^", "@", "z"];

fn random_text(rng: &mut impl Rng) -> String {
    (0..rng.gen_range(0..3)).map(|_| TEXT[rng.gen_range(0..TEXT.len())]).collect()
}

fn random_pq(rng: &mut impl Rng) -> PreprocessedQuad {
    let object = match rng.gen_range(0..3) {
        0 => PreObject::Iri(random_text(rng)),
        1 => PreObject::Literal {
            label: random_text(rng),
            kind: LiteralKind::Lang(random_text(rng)),
        },
        _ => PreObject::Literal {
            label: random_text(rng),
            kind: LiteralKind::Typed(random_text(rng)),
        },
    };
    PreprocessedQuad {
        graph: random_text(rng),
        subject: random_text(rng),
        predicate: random_text(rng),
        object,
    }
}

fn comparator_totality() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let cases = 150_000;
    let (mut violations, mut key_mismatch, mut text_disagree) = (0, 0, 0);
    for _ in 0..cases {
        let (a, b, c) = (random_pq(&mut rng), random_pq(&mut rng), random_pq(&mut rng));
        let ab = compare_quads(&a, &b);
        let bc = compare_quads(&b, &c);
        let ac = compare_quads(&a, &c);
        if ab != compare_quads(&b, &a).reverse() || (ab == Ordering::Equal) != (a == b) {
            violations += 1;
        }
        if ab != Ordering::Greater && bc != Ordering::Greater && ac == Ordering::Greater {
            violations += 1;
        }
        if ab == bc && ab != Ordering::Equal && ac != ab {
            violations += 1;
        }
        if sort_key(&a).cmp(&sort_key(&b)) != ab {
            key_mismatch += 1;
        }
        if serialize_statement(&a).as_str().cmp(serialize_statement(&b).as_str()) != ab {
            text_disagree += 1;
        }
    }
    outcome(
        violations == 0 && key_mismatch == 0,
        format!(
            "{cases} triples: {violations} order violations, {key_mismatch} sort-key mismatches; string order on serialized statements disagrees in {text_disagree} pairs ({:.1}%), so the external sort uses the order-preserving sort keys",
            100.0 * text_disagree as f64 / cases as f64
        ),
    )
}

fn scaling_shape() -> Outcome {
    let sizes = [100_000u64, 1_000_000, 10_000_000];
    let cfg = SortConfig {
        max_in_memory_records: 100_000,
        ..SortConfig::default()
    };
    let mut times = Vec::new();
    for &n in &sizes {
        let dir = tempfile::tempdir().unwrap();
        let input = dir.path().join("scale.nq");
        synth::write_large_nquads(&input, n, 8, "http://example.org/scale").unwrap();
        let start = Instant::now();
        let out = large::transform_large_rdf(&input, "http://example.org/scale", ModuleId::RA, None, &cfg);
        let t = start.elapsed().as_secs_f64();
        if let Err(e) = out {
            return outcome(false, format!("transform of {n} quads failed: {e}"));
        }
        times.push(t);
    }
    let ratios: Vec<f64> = sizes.iter().zip(&times).map(|(&n, &t)| t / (n as f64 * (n as f64).ln())).collect();
    let a = (ratios.iter().map(|r| r.ln()).sum::<f64>() / ratios.len() as f64).exp();
    let deviations: Vec<f64> = ratios.iter().map(|r| r / a - 1.0).collect();
    let pass = deviations.iter().all(|d| d.abs() <= 0.5);
    let points = sizes
        .iter()
        .zip(&times)
        .zip(&deviations)
        .map(|((n, t), d)| format!("n={n}: {t:.2}s ({:+.0}%)", d * 100.0))
        .collect::<Vec<_>>()
        .join(", ");
    outcome(pass, format!("a={a:.3e} s; {points}"))
}

fn ni_strings() -> Outcome {
    let uri = "http://example.org/r1.RA5AbXdpz5DcaYXCh9l3eI9ruBosiL5XDU3rxBbBaUO70";
    let a = to_ni_uri(uri, None, true).unwrap();
    let b = to_ni_uri(uri, Some("example.org"), false).unwrap();
    outcome(
        a == "ni:///sha-256;5AbXdpz5DcaYXCh9l3eI9ruBosiL5XDU3rxBbBaUO70?module=RA"
            && b == "ni://example.org/sha-256;5AbXdpz5DcaYXCh9l3eI9ruBosiL5XDU3rxBbBaUO70",
        format!("{a} | {b}"),
    )
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("empty-file FA golden vector", 1, empty_file_golden),
        ("cross-format equality", 30, cross_format_equality),
        ("corruption detection", 120, corruption_detection),
        ("transform/check round trip", 120, round_trip),
        ("RB to RA transferability", 60, transferability),
        ("large/small path equivalence", 600, large_small_equivalence),
        ("comparator totality", 60, comparator_totality),
        ("scaling shape n log n", u64::MAX, scaling_shape),
        ("ni URI strings", 1, ni_strings),
    ];
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = run();
        let elapsed = start.elapsed();
        let in_time = *limit == u64::MAX || within(elapsed, Duration::from_secs(*limit));
        let pass = result.pass && in_time;
        failed += usize::from(!pass);
        let limit_text = if *limit == u64::MAX { String::new() } else { format!(" (limit {limit}s)") };
        println!(
            "{} {}. {name}: {}; {:.2}s{limit_text}",
            if pass { "PASS" } else { "FAIL" },
            i + 1,
            result.detail,
            elapsed.as_secs_f64()
        );
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
