use meandist::{parse_body_spec, serialize_body};
use meandist_core::sampling::{sample_direction, RngStream};

const SPECS: &[&str] = &[
    r#"{"kind":"ball","center":[0.5,-1],"radius":2}"#,
    r#"{"kind":"ellipsoid","center":[0,0,0],"semi_axes":[1,2,0.5]}"#,
    r#"{"kind":"box","lower":[0,0,0],"upper":[1,2,3]}"#,
    r#"{"kind":"simplex","vertices":[[0,0,0],[1,0,0],[0,1,0],[0,0,1]]}"#,
    r#"{"kind":"vpolytope","vertices":[[1,0,0],[-1,0,0],[0,1,0],[0,-1,0],[0,0,1],[0,0,-1]]}"#,
    r#"{"kind":"regular_polygon","n_sides":7,"circumradius":1.5}"#,
    r#"{"kind":"k_delta","d":3,"delta":0.25}"#,
    r#"{"kind":"k_prime_delta","d":4,"delta":0.1}"#,
];

#[test]
fn round_trip_preserves_the_support_function() {
    for (i, text) in SPECS.iter().enumerate() {
        let body = parse_body_spec(text).unwrap();
        let again = parse_body_spec(&serialize_body(&body)).unwrap();
        let mut rng = RngStream::new(77, i as u64);
        for _ in 0..1000 {
            let u = sample_direction(body.dim(), &mut rng, false);
            let (a, b) = (body.support(&u).unwrap(), again.support(&u).unwrap());
            assert!((a - b).abs() <= 1e-12, "{text}: {a} vs {b}");
        }
    }
}

#[test]
fn malformed_documents_are_rejected() {
    for text in [
        "not json",
        r#"{"center":[0,0],"radius":1}"#,
        r#"{"kind":"ball","center":[0,0]}"#,
        r#"{"kind":"ball","center":[0,0],"radius":-1}"#,
        r#"{"kind":"k_delta","d":2,"delta":0}"#,
        r#"{"kind":"simplex","vertices":[[0,0],[1,0],[2,0]]}"#,
    ] {
        assert!(parse_body_spec(text).is_err(), "{text}");
    }
}
