mod common;

use common::*;
use digitop::io::{
    parse_census, parse_document, parse_image, parse_multifn, parse_report, parse_witness,
    serialize_census, serialize_image, serialize_multifn, serialize_report, serialize_witness,
    Document,
};
use digitop::oracle::census;
use digitop::{analyze, DigitalImage, Error};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn documents_round_trip(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let x = random_image(&mut rng, 4);
        let y = random_image(&mut rng, 4);
        let f = random_multifn(&mut rng, &x, &y);

        let text = serialize_image(&x);
        prop_assert!(text.ends_with('\n') && text.lines().count() == 1);
        prop_assert_eq!(parse_image(&text).unwrap(), x);

        let text = serialize_multifn(&f);
        prop_assert_eq!(&parse_multifn(&text).unwrap(), &f);
        prop_assert_eq!(serialize_multifn(&parse_multifn(&text).unwrap()), text);

        let report = analyze(&f, 2).unwrap();
        let text = serialize_report(&report);
        prop_assert_eq!(serialize_report(&parse_report(&text).unwrap()), text);
        if let Some(w) = &report.witness {
            let text = serialize_witness(w);
            prop_assert_eq!(&parse_witness(&text).unwrap(), w);
        }
    }
}

#[test]
fn census_round_trips() {
    let c = census(
        &DigitalImage::interval(0, 1),
        &DigitalImage::interval(0, 2),
        2,
    )
    .unwrap();
    let text = serialize_census(&c);
    assert_eq!(serialize_census(&parse_census(&text).unwrap()), text);
    assert!(matches!(
        parse_document(&text).unwrap(),
        Document::Census(_)
    ));
}

#[test]
fn malformed_documents_are_parse_errors() {
    let bad = [
        "",
        "{",
        r#"{"kind":"image","version":"1","dim":1,"adjacency":1,"points":[[0],[0]]}"#,
        r#"{"kind":"image","version":"9","dim":1,"adjacency":1,"points":[[0]]}"#,
        r#"{"kind":"image","version":"1","dim":1,"adjacency":2,"points":[[0]]}"#,
        r#"{"kind":"image","version":"1","dim":1,"adjacency":1,"points":[[0]],"extra":1}"#,
        r#"{"kind":"widget","version":"1"}"#,
    ];
    for text in bad {
        assert!(
            matches!(
                parse_document(text),
                Err(Error::Parse(_) | Error::InvalidInput(_))
            ),
            "accepted {text:?}"
        );
    }
}

#[test]
fn multifn_document_shape() {
    let text = serialize_multifn(&f01(&[0, 1], &[2]));
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["kind"], "multifn");
    assert_eq!(v["map"][0]["fx"], serde_json::json!([[0], [1]]));
}
