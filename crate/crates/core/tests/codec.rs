use std::fs;
use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use unmac::geometry::MessageFormat;
use unmac::remote_id::{decode, encode, encoded_len, CodecError, RemoteIdMessage};

fn golden(name: &str) -> Vec<u8> {
    let path: PathBuf = [
        env!("CARGO_MANIFEST_DIR"),
        "tests",
        "golden",
        &format!("{name}.hex"),
    ]
    .iter()
    .collect();
    hex::decode(fs::read_to_string(&path).unwrap().trim()).unwrap()
}

fn sample(format: MessageFormat) -> RemoteIdMessage {
    let mut id = [0u8; 20];
    id[..8].copy_from_slice(b"UAV-0001");
    let mut m = RemoteIdMessage::empty(format);
    m.uav_id = id;
    m.position_cm = (123_456, -654_321);
    m.altitude_cm = 12_000;
    m.speed_cm_s = 1_290;
    m.emergency = true;
    m.time_mark_ms = 3_600_000;
    m.control_station_cm = (-100, 200, 0);
    m
}

#[test]
fn golden_vectors() {
    let mut cases = vec![
        (
            "standard_zero",
            RemoteIdMessage::empty(MessageFormat::StandardRemoteId),
        ),
        ("standard_sample", sample(MessageFormat::StandardRemoteId)),
    ];
    let mut c1 = sample(MessageFormat::Candidate1);
    c1.loc_error_cm = Some(190);
    cases.push(("candidate1_sample", c1));
    let mut c2 = sample(MessageFormat::Candidate2);
    c2.af_size_cm = Some(350);
    c2.loc_error_cm = Some(570);
    cases.push(("candidate2_sample", c2));
    let mut c3 = sample(MessageFormat::Candidate3);
    c3.af_size_cm = Some(750);
    c3.loc_error_cm = Some(1_385);
    c3.heading = Some(31_416);
    cases.push(("candidate3_sample", c3));

    for (name, msg) in cases {
        let bytes = golden(name);
        assert_eq!(encode(&msg).unwrap(), bytes, "{name}");
        assert_eq!(decode(&bytes).unwrap(), (msg, bytes.len()), "{name}");
    }
}

#[test]
fn zero_standard_is_tag_then_zeros() {
    let bytes = golden("standard_zero");
    assert_eq!(
        bytes.len(),
        encoded_len(MessageFormat::StandardRemoteId).unwrap()
    );
    assert!(bytes.iter().all(|&b| b == 0));
}

#[test]
fn every_truncation_reports_short_buffer() {
    let bytes = golden("candidate3_sample");
    for n in 0..bytes.len() {
        match decode(&bytes[..n]) {
            Err(CodecError::ShortBuffer { available, .. }) => assert!(available <= n),
            other => panic!("prefix {n}: {other:?}"),
        }
    }
}

#[test]
fn corrupted_fields_name_their_offset() {
    let mut bytes = golden("candidate3_sample");
    bytes[35] = 2;
    assert!(matches!(
        decode(&bytes),
        Err(CodecError::OutOfRange { offset: 35, .. })
    ));
    let mut bytes = golden("candidate3_sample");
    bytes[60] = 1;
    assert!(matches!(
        decode(&bytes),
        Err(CodecError::OutOfRange { offset: 60, .. })
    ));
    let mut bytes = golden("candidate2_sample");
    bytes[0] = 9;
    assert!(matches!(
        decode(&bytes),
        Err(CodecError::UnknownTag { offset: 0, tag: 9 })
    ));
}

#[test]
fn fuzz_mutated_golden_buffers() {
    let seeds: Vec<Vec<u8>> = [
        "standard_zero",
        "standard_sample",
        "candidate1_sample",
        "candidate2_sample",
        "candidate3_sample",
    ]
    .iter()
    .map(|n| golden(n))
    .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200_000 {
        let mut buf = seeds[rng.random_range(0..seeds.len())].clone();
        for _ in 0..rng.random_range(1..4) {
            let k = rng.random_range(0..buf.len());
            buf[k] = rng.random();
        }
        let cut = rng.random_range(0..=buf.len());
        buf.truncate(cut);
        if let Ok((msg, used)) = decode(&buf) {
            assert!(used <= buf.len());
            assert_eq!(encode(&msg).unwrap(), buf[..used]);
        }
    }
}
