mod common;

use common::random_model;
use permforge_core::{parse_model, serialize_model, ModelError};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

#[test]
fn serialize_then_parse_is_identity() {
    let mut rng = StdRng::seed_from_u64(1);
    for _ in 0..2000 {
        let m = random_model(&mut rng, 9);
        let text = serialize_model(&m);
        let back = parse_model(&text).unwrap();
        assert_eq!(back, m);
        assert_eq!(serialize_model(&back), text);
    }
}

fn mutate(rng: &mut StdRng, doc: &mut Vec<u8>) {
    const TOKENS: &[&[u8]] = &[
        b"{",
        b"}",
        b"[",
        b"]",
        b",",
        b":",
        b"\"",
        b"-1",
        b"0",
        b"65",
        b"1e400",
        b"null",
        b"\"type\"",
        b"\"mesh\"",
        b"\"regions\"",
        b"\"length\"",
        b"\"mod\"",
        b"true",
        b"\"pattern\"",
        b"99999999999999999999",
    ];
    for _ in 0..rng.gen_range(1..=4) {
        if doc.is_empty() {
            doc.extend_from_slice(TOKENS[rng.gen_range(0..TOKENS.len())]);
            continue;
        }
        let at = rng.gen_range(0..doc.len());
        match rng.gen_range(0..4) {
            0 => {
                doc.remove(at);
            }
            1 => doc[at] = rng.gen(),
            2 => {
                let t = TOKENS[rng.gen_range(0..TOKENS.len())];
                doc.splice(at..at, t.iter().copied());
            }
            _ => {
                let end = (at + rng.gen_range(1..8)).min(doc.len());
                doc.drain(at..end);
            }
        }
    }
}

#[test]
fn fuzzed_documents_never_panic() {
    let mut rng = StdRng::seed_from_u64(2);
    let mut accepted = 0;
    let mut syntax = 0;
    let mut validation = 0;
    for i in 0..20_000 {
        let mut doc = if i % 10 == 0 {
            (0..rng.gen_range(0..64)).map(|_| rng.gen()).collect()
        } else {
            serialize_model(&random_model(&mut rng, 8))
        };
        mutate(&mut rng, &mut doc);
        match parse_model(&doc) {
            Ok(m) => {
                accepted += 1;
                assert_eq!(parse_model(&serialize_model(&m)).unwrap(), m);
            }
            Err(ModelError::Syntax { line, column, .. }) => {
                syntax += 1;
                assert!(line >= 1 && column >= 1);
            }
            Err(ModelError::Validation { .. }) => validation += 1,
        }
    }
    assert!(
        accepted > 0 && syntax > 0 && validation > 0,
        "{accepted} {syntax} {validation}"
    );
}
