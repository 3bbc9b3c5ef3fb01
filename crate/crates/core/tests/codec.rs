use base64::engine::general_purpose::URL_SAFE_NO_PAD;
use base64::Engine;
use proptest::prelude::*;
use trustyuri::codec::{decode_hash_tail, encode_hash_tail, is_base64_char};
use trustyuri::{
    append_artifact_code, extract_artifact_code, module_fa, strip_extension, to_ni_uri, ArtifactCode, ModuleId,
};

const ALPHABET: &str = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789-_";

fn hex(s: &str) -> Vec<u8> {
    (0..s.len()).step_by(2).map(|i| u8::from_str_radix(&s[i..i + 2], 16).unwrap()).collect()
}

/// Bit-level encoder: digest bits plus two zero bits, read six at a time.
fn six_bit_groups(digest: &[u8]) -> String {
    let mut bits: Vec<u8> = digest.iter().flat_map(|b| (0..8).rev().map(move |i| (b >> i) & 1)).collect();
    bits.extend([0, 0]);
    assert_eq!(bits.len(), 258);
    bits.chunks(6)
        .map(|c| {
            let v = c.iter().fold(0usize, |acc, &b| acc * 2 + b as usize);
            ALPHABET.as_bytes()[v] as char
        })
        .collect()
}

#[test]
fn sha256_of_a() {
    // digest from a standalone sha256sum run
    let digest = hex("ca978112ca1bbdcafac231b39a23dc4da786eff8147c4e72b9807785afee48bb");
    let tail = six_bit_groups(&digest);
    assert_eq!(tail, "ypeBEsobvcr6wjGzmiPcTaeG7_gUfE5yuYB3ha_uSLs");
    assert_eq!(tail, URL_SAFE_NO_PAD.encode(&digest));
    assert_eq!(module_fa::hash_bytes(b"a").hash_part(), tail);
}

#[test]
fn sha256_of_zero_byte() {
    let digest = hex("6e340b9cffb37a989ca544e6bb780a2c78901d3fb33738768511a30617afa01d");
    assert_eq!(module_fa::hash_bytes(&[0]).hash_part(), six_bit_groups(&digest));
}

#[test]
fn empty_input_and_zero_digest() {
    assert_eq!(module_fa::hash_bytes(b"").to_string(), "FA47DEQpj8HBSa-_TImW-5JCeuQeRkm5NMpJWZG3hSuFU");
    let zeros = encode_hash_tail(&[0u8; 32]).unwrap();
    assert_eq!(zeros, "A".repeat(43));
    assert!(encode_hash_tail(&[0u8; 31]).is_err());
}

#[test]
fn ni_examples() {
    let uri = "http://example.org/r1.RA5AbXdpz5DcaYXCh9l3eI9ruBosiL5XDU3rxBbBaUO70";
    assert_eq!(
        to_ni_uri(uri, None, true).unwrap(),
        "ni:///sha-256;5AbXdpz5DcaYXCh9l3eI9ruBosiL5XDU3rxBbBaUO70?module=RA"
    );
    assert_eq!(
        to_ni_uri(uri, Some("example.org"), false).unwrap(),
        "ni://example.org/sha-256;5AbXdpz5DcaYXCh9l3eI9ruBosiL5XDU3rxBbBaUO70"
    );
    assert!(to_ni_uri("http://example.org/r1", None, false).is_err());
}

#[test]
fn unknown_module_is_not_potential() {
    let good = "http://example.org/x.RA5AbXdpz5DcaYXCh9l3eI9ruBosiL5XDU3rxBbBaUO70";
    assert!(extract_artifact_code(good).is_potential());
    let bad = good.replace(".RA", ".ZZ");
    assert!(!extract_artifact_code(&bad).is_potential());
}

fn digest() -> impl Strategy<Value = Vec<u8>> {
    proptest::collection::vec(any::<u8>(), 32)
}

fn module() -> impl Strategy<Value = ModuleId> {
    prop_oneof![Just(ModuleId::FA), Just(ModuleId::RA), Just(ModuleId::RB)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn hash_tail_matches_reference(d in digest()) {
        let tail = encode_hash_tail(&d).unwrap();
        prop_assert_eq!(tail.len(), 43);
        prop_assert_eq!(&tail, &URL_SAFE_NO_PAD.encode(&d));
        prop_assert_eq!(&tail, &six_bit_groups(&d));
        prop_assert_eq!(decode_hash_tail(&tail).unwrap().to_vec(), d);
    }

    #[test]
    fn code_round_trip(m in module(), d in digest()) {
        let code = ArtifactCode::from_digest(m, &d).unwrap();
        let text = code.to_string();
        prop_assert_eq!(text.len(), 45);
        prop_assert!(text.chars().all(is_base64_char));
        prop_assert_eq!(ArtifactCode::parse(&text).unwrap(), code);
    }

    #[test]
    fn append_then_extract(base in "[a-z]{1,8}://[a-zA-Z0-9./#_-]{0,20}", m in module(), d in digest()) {
        let code = ArtifactCode::from_digest(m, &d).unwrap();
        let uri = append_artifact_code(&base, &code);
        prop_assert!(uri.starts_with(&base));
        let candidate = extract_artifact_code(&uri);
        prop_assert_eq!(candidate.code(), Some(&code));
        let sep = &uri[base.len()..uri.len() - 45];
        let last_is_b64 = base.chars().last().is_some_and(is_base64_char);
        prop_assert_eq!(sep, if last_is_b64 { "." } else { "" });
    }

    #[test]
    fn strip_is_idempotent(
        stem in "[a-z0-9]{1,6}",
        m in module(),
        d in digest(),
        exts in proptest::collection::vec("[a-z0-9]{1,10}", 0..=3),
    ) {
        let code = ArtifactCode::from_digest(m, &d).unwrap();
        let bare = format!("{stem}.{code}");
        let name = std::iter::once(bare.clone()).chain(exts).collect::<Vec<_>>().join(".");
        let once = strip_extension(&name).unwrap();
        prop_assert_eq!(once, bare.as_str());
        prop_assert_eq!(strip_extension(once).unwrap(), once);
    }
}
