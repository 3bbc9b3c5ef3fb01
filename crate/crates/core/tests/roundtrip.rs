use std::fs;
use std::path::Path;

use trustyuri::extsort::SortConfig;
use trustyuri::large::{check_large_rdf, check_large_rdf_with_stats, check_sorted_rdf, transform_large_rdf};
use trustyuri::module_r::{check_rdf_file, transform_rdf_file, CheckTarget};
use trustyuri::rdf::{self, RdfFormat};
use trustyuri::{module_fa, ModuleId, Verdict};

const R2_NQ: &str = "<http://example.org/r2> <http://purl.org/dc/terms/description> \"something\" .\n";
const R2_TRIG: &str = "@prefix dct: <http://purl.org/dc/terms/> .\n{ <http://example.org/r2> dct:description \"something\" . }\n";
const R2_CODE: &str = "RATf-GlZsJa1v_EG0-yl5jwcGNPF5zRbhDifBLeG4Q57c";

fn sort_cfg(dir: &Path, max: usize) -> SortConfig {
    SortConfig {
        max_in_memory_records: max,
        temp_dir: dir.to_path_buf(),
        fan_in: 3,
    }
}

#[test]
fn r2_in_both_formats() {
    let dir = tempfile::tempdir().unwrap();
    for (name, text) in [("r2.nq", R2_NQ), ("r2.trig", R2_TRIG)] {
        let input = dir.path().join(name);
        fs::write(&input, text).unwrap();
        let out = transform_rdf_file(&input, "http://example.org/r2", ModuleId::RA, None).unwrap();
        assert_eq!(out.code.to_string(), R2_CODE);
        assert_eq!(out.uri, format!("http://example.org/r2.{R2_CODE}"));
        assert_eq!(out.path.file_name().unwrap().to_str().unwrap(), format!("r2.{R2_CODE}.nq"));
        let written = fs::read_to_string(&out.path).unwrap();
        assert_eq!(
            written,
            format!("<{}> <http://purl.org/dc/terms/description> \"something\" .\n", out.uri)
        );
        let target = CheckTarget::from_uri(&out.uri).unwrap();
        assert!(check_rdf_file(&out.path, &target, None).is_valid());
    }
}

fn sample_nquads(n: usize) -> String {
    let mut s = String::new();
    for i in 0..n {
        let subject = match i % 5 {
            0 => format!("_:b{}", i % 7),
            1 => "<http://example.org/doc>".to_string(),
            2 => format!("<http://example.org/doc#part{}>", i % 11),
            _ => format!("<http://example.org/other/{}>", (i * 37) % 101),
        };
        let object = match i % 4 {
            0 => format!("\"v{i} \\\"q\\\" \\n\"@en-GB"),
            1 => format!("\"{i}\"^^<http://www.w3.org/2001/XMLSchema#integer>"),
            2 => format!("_:b{}", (i + 3) % 7),
            _ => format!("<http://example.org/doc/{}>", i % 13),
        };
        let graph = if i % 3 == 0 { "" } else { "<http://example.org/doc#g> " };
        s.push_str(&format!("{subject} <http://example.org/p{}> {object} {graph}.\n", i % 3));
    }
    // duplicates are ignored
    s.push_str("<http://example.org/doc> <http://example.org/p1> \"1\"^^<http://www.w3.org/2001/XMLSchema#integer> <http://example.org/doc#g> .\n");
    s.push_str("<http://example.org/doc> <http://example.org/p1> \"1\"^^<http://www.w3.org/2001/XMLSchema#integer> <http://example.org/doc#g> .\n");
    s
}

#[test]
fn large_and_small_paths_agree() {
    let dir = tempfile::tempdir().unwrap();
    let tmp = tempfile::tempdir().unwrap();
    let small_dir = dir.path().join("small");
    let large_dir = dir.path().join("large");
    fs::create_dir_all(&small_dir).unwrap();
    fs::create_dir_all(&large_dir).unwrap();
    let text = sample_nquads(3000);
    fs::write(small_dir.join("d.nq"), &text).unwrap();
    fs::write(large_dir.join("d.nq"), &text).unwrap();

    let small = transform_rdf_file(&small_dir.join("d.nq"), "http://example.org/doc", ModuleId::RA, None).unwrap();
    let cfg = sort_cfg(tmp.path(), 100);
    let large =
        transform_large_rdf(&large_dir.join("d.nq"), "http://example.org/doc", ModuleId::RA, None, &cfg).unwrap();
    assert!(large.stats.initial_runs > cfg.fan_in);
    assert!(large.stats.merge_passes >= 2);
    assert_eq!(small.code, large.file.code);
    assert_eq!(small.uri, large.file.uri);
    assert_eq!(fs::read(&small.path).unwrap(), fs::read(&large.file.path).unwrap());

    let target = CheckTarget::from_uri(&small.uri).unwrap();
    assert_eq!(check_rdf_file(&small.path, &target, None).verdict, Verdict::Valid);
    let (report, stats) = check_large_rdf_with_stats(&small.path, &target, None, &cfg);
    assert_eq!(report.verdict, Verdict::Valid);
    assert!(stats.unwrap().peak_resident_records <= 100 * 3);
    assert_eq!(check_sorted_rdf(&small.path, &target, None).verdict, Verdict::Valid);
    assert_eq!(fs::read_dir(tmp.path()).unwrap().count(), 0, "temporary files left behind");
}

#[test]
fn tampering_is_detected_by_every_checker() {
    let dir = tempfile::tempdir().unwrap();
    let tmp = tempfile::tempdir().unwrap();
    let input = dir.path().join("d.nq");
    fs::write(&input, sample_nquads(200)).unwrap();
    let out = transform_rdf_file(&input, "http://example.org/doc", ModuleId::RA, None).unwrap();
    let target = CheckTarget::from_uri(&out.uri).unwrap();
    let text = fs::read_to_string(&out.path).unwrap();
    let tampered = dir.path().join("t.nq");
    fs::write(&tampered, text.replacen("\"v0 ", "\"v9 ", 1)).unwrap();
    let cfg = sort_cfg(tmp.path(), 10);
    assert_eq!(check_rdf_file(&tampered, &target, None).verdict, Verdict::Invalid);
    assert_eq!(check_large_rdf(&tampered, &target, None, &cfg).verdict, Verdict::Invalid);

    // sorted check on a file whose first two lines are swapped
    let mut lines: Vec<&str> = text.lines().collect();
    lines.swap(0, 1);
    let swapped = dir.path().join("s.nq");
    fs::write(&swapped, lines.join("\n") + "\n").unwrap();
    let r = check_sorted_rdf(&swapped, &target, None);
    assert_eq!(r.verdict, Verdict::Error);
    assert!(r.message.contains("out of order"));
    assert_eq!(check_rdf_file(&swapped, &target, None).verdict, Verdict::Valid);
    assert_eq!(fs::read_dir(tmp.path()).unwrap().count(), 0);
}

#[test]
fn failed_large_transform_cleans_up() {
    let dir = tempfile::tempdir().unwrap();
    let tmp = tempfile::tempdir().unwrap();
    let input = dir.path().join("bad.nq");
    let mut text = sample_nquads(500);
    text.push_str("<http://x> <http://y> broken .\n");
    fs::write(&input, text).unwrap();
    let cfg = sort_cfg(tmp.path(), 50);
    assert!(transform_large_rdf(&input, "http://example.org/doc", ModuleId::RA, None, &cfg).is_err());
    assert_eq!(fs::read_dir(tmp.path()).unwrap().count(), 0);
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
}

#[test]
fn trig_and_nquads_give_the_same_code() {
    let trig = r#"@prefix ex: <http://example.org/> .
PREFIX xsd: <http://www.w3.org/2001/XMLSchema#>
GRAPH ex:np1 {
  ex:np1 a ex:Nanopub ;
    ex:label "hello"@EN , "bonjour"@fr ;
    ex:count 42 ;
    ex:ratio 0.5 ;
    ex:ok true ;
    ex:note """two
lines""" .
  _:x ex:rel ex:np1\#part .
}
"#;
    let nq = r#"<http://example.org/np1> <http://www.w3.org/1999/02/22-rdf-syntax-ns#type> <http://example.org/Nanopub> <http://example.org/np1> .
<http://example.org/np1> <http://example.org/label> "hello"@en <http://example.org/np1> .
<http://example.org/np1> <http://example.org/label> "bonjour"@fr <http://example.org/np1> .
<http://example.org/np1> <http://example.org/count> "42"^^<http://www.w3.org/2001/XMLSchema#integer> <http://example.org/np1> .
<http://example.org/np1> <http://example.org/ratio> "0.5"^^<http://www.w3.org/2001/XMLSchema#decimal> <http://example.org/np1> .
<http://example.org/np1> <http://example.org/ok> "true"^^<http://www.w3.org/2001/XMLSchema#boolean> <http://example.org/np1> .
<http://example.org/np1> <http://example.org/note> "two\nlines" <http://example.org/np1> .
_:blank <http://example.org/rel> <http://example.org/np1#part> <http://example.org/np1> .
"#;
    let a = rdf::parse(trig.as_bytes(), RdfFormat::TriG).unwrap();
    let b = rdf::parse(nq.as_bytes(), RdfFormat::NQuads).unwrap();
    for module in [ModuleId::RA, ModuleId::RB] {
        let ca = trustyuri::transform_rdf(&a, "http://example.org/np1", module).unwrap();
        let cb = trustyuri::transform_rdf(&b, "http://example.org/np1", module).unwrap();
        assert_eq!(ca.code, cb.code);
        assert_eq!(ca.to_nquads(), cb.to_nquads());
    }
}

#[test]
fn fa_process_then_check() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("paper.pdf");
    fs::write(&path, b"%PDF-1.4 not really").unwrap();
    let renamed = module_fa::process_file(&path).unwrap();
    assert!(!path.exists());
    let name = renamed.file_name().unwrap().to_str().unwrap().to_string();
    assert!(name.starts_with("paper.FA") && name.ends_with(".pdf"));
    let code = trustyuri::extract_artifact_code(trustyuri::strip_extension(&name).unwrap())
        .code()
        .cloned()
        .unwrap();
    assert!(module_fa::check_file(&renamed, &code).is_valid());
    fs::write(&renamed, b"%PDF-1.4 not really!").unwrap();
    assert_eq!(module_fa::check_file(&renamed, &code).verdict, Verdict::Invalid);
}
