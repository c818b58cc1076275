use std::sync::Arc;

use proptest::prelude::*;

use chainforge::corpus::{flat_torus, hexagonal_torus, projective_plane, random_grid_metric};
use chainforge::io::{
    parse_chain_json, parse_complex_json, parse_distance_csv, parse_function_json, parse_off, read_complex,
    write_corpus, write_distance_csv, write_off, ComplexJson, CorpusSizes, OffMesh,
};
use chainforge::metric::FiniteMetricSpace;
use chainforge::number::{q_frac, q_int};
use chainforge::systolic::ClosedManifoldComplex;
use chainforge::{Chain, Error, WeightedComplex};

fn line_of(e: Error) -> usize {
    match e {
        Error::ParseAt { line, .. } => line,
        other => panic!("expected a line-numbered error, got {other}"),
    }
}

#[test]
fn off_round_trip() {
    let s = flat_torus(4);
    let mesh = OffMesh { coords: s.coords.clone().unwrap(), faces: s.triangles.iter().map(|t| t.to_vec()).collect() };
    let text = write_off(&mesh);
    assert!(text.starts_with("nOFF\n4\n16 32 0\n"));
    assert_eq!(parse_off(&text).unwrap(), mesh);

    let tri = OffMesh { coords: vec![vec![0.0, 0.0, 0.0], vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.5]], faces: vec![vec![0, 1, 2]] };
    let text = write_off(&tri);
    assert!(text.starts_with("OFF\n"));
    assert_eq!(parse_off(&text).unwrap(), tri);
}

#[test]
fn off_accepts_comments_and_inline_counts() {
    let text = "# a triangle\nOFF 3 1 0\n0 0 0\n1 0 0 # corner\n\n0 1 0\n3 0 1 2\n";
    let mesh = parse_off(text).unwrap();
    assert_eq!(mesh.faces, vec![vec![0, 1, 2]]);
    assert_eq!(mesh.complex().unwrap().count(2), 1);
}

#[test]
fn off_errors_carry_line_numbers() {
    assert_eq!(line_of(parse_off("OFF\n3 1 0\n0 0 0\n1 x 0\n0 1 0\n3 0 1 2\n").unwrap_err()), 4);
    assert_eq!(line_of(parse_off("OFF\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n3 0 1 7\n").unwrap_err()), 6);
    assert_eq!(line_of(parse_off("PLY\n").unwrap_err()), 1);
    assert_eq!(line_of(parse_off("OFF\n1 0 0\n0 0 0\n9 9 9\n").unwrap_err()), 4);
}

#[test]
fn csv_errors_carry_line_numbers() {
    assert_eq!(line_of(parse_distance_csv("0,1\n1,zero\n").unwrap_err()), 2);
    assert_eq!(line_of(parse_distance_csv("# header\n0,1\n1,0,2\n").unwrap_err()), 3);
    assert_eq!(line_of(parse_distance_csv("\n0,1,1\n1,0,1\n").unwrap_err()), 2);
    assert!(parse_distance_csv("0,1\n2,0\n").is_err());
}

proptest! {
    #[test]
    fn csv_round_trip(seed in any::<u64>(), n in 1usize..12, den in 1i64..7) {
        let m = random_grid_metric(n, 20, seed);
        let scaled: Vec<Vec<_>> = (0..n).map(|i| m.row(i).iter().map(|d| d / q_int(den)).collect()).collect();
        let m = FiniteMetricSpace::new(scaled).unwrap();
        let back = parse_distance_csv(&write_distance_csv(&m)).unwrap();
        for i in 0..n {
            prop_assert_eq!(back.row(i), m.row(i));
        }
    }
}

#[test]
fn complex_json_round_trip_keeps_weights() {
    for s in [hexagonal_torus(3), projective_plane(), flat_torus(3)] {
        let original = s.complex().unwrap();
        let text = serde_json::to_string(&ComplexJson::from_surface(&s)).unwrap();
        let back = parse_complex_json(&text).unwrap();
        for d in 0..=2 {
            assert_eq!(back.simplices(d), original.simplices(d), "{}", s.name);
            assert_eq!(back.weights(d).unwrap(), original.weights(d).unwrap(), "{}", s.name);
        }
    }
}

#[test]
fn chain_json_forms() {
    let k = Arc::new(WeightedComplex::builder(3).simplex(&[0, 1, 2]).build().unwrap());
    let c = Chain::from_terms(&k, 1, Some(3), &[([0, 1], 1), ([1, 2], -1)]).unwrap();
    let text = serde_json::to_string(&c.to_json()).unwrap();
    assert_eq!(parse_chain_json(&text, Some(&k)).unwrap(), c);

    // reversed vertex order flips the sign
    let flipped = parse_chain_json(r#"{"dim": 1, "modulus": null, "coeffs": [[[1, 0], 2]]}"#, Some(&k)).unwrap();
    assert_eq!(flipped.coeff(k.index_of(&chainforge::Simplex::from_sorted(vec![0, 1]).unwrap()).unwrap()), -2);

    // embedded complex with rational edge lengths
    let embedded = r#"{
        "dim": 1, "modulus": 2, "coeffs": [[[0, 1], 1]],
        "complex": {"vertex_count": 2, "simplices": [{"vertices": [0, 1]}],
                    "edge_lengths": [{"edge": [0, 1], "length": "3/4"}]}
    }"#;
    let e = parse_chain_json(embedded, None).unwrap();
    assert_eq!(e.complex().weight(1, 0).unwrap(), &q_frac(3, 4));

    // bare chain on the complex generated by its simplices
    let bare = parse_chain_json(r#"{"dim": 2, "modulus": null, "coeffs": [[[0, 1, 2], 1]]}"#, None).unwrap();
    assert_eq!(bare.complex().count(1), 3);

    let err = parse_chain_json("{\n  \"dim\": 1,\n  \"coeffs\": oops\n}", None).unwrap_err();
    assert_eq!(line_of(err), 3);
}

#[test]
fn vertex_function_forms() {
    let a = parse_function_json("[0, \"1/2\", 3]", 3).unwrap();
    let b = parse_function_json(r#"{"values": [0, "1/2", 3]}"#, 3).unwrap();
    let c = parse_function_json(r#"{"2": 3, "0": 0, "1": {"exact": "1/2"}}"#, 3).unwrap();
    assert_eq!(a.values(), b.values());
    assert_eq!(a.values(), c.values());
    assert!(parse_function_json("[0, 1]", 3).is_err());
    assert!(parse_function_json(r#"{"0": 1, "5": 2}"#, 3).is_err());
}

fn write_default(seed: u64) -> (tempfile::TempDir, Vec<(String, Vec<u8>)>) {
    let dir = tempfile::tempdir().unwrap();
    let paths = write_corpus(dir.path(), seed, &CorpusSizes::default()).unwrap();
    let files = paths
        .iter()
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(p).unwrap()))
        .collect();
    (dir, files)
}

#[test]
fn corpus_is_deterministic_and_readable() {
    let (dir, a) = write_default(0);
    let (_, b) = write_default(0);
    let (_, c) = write_default(1);
    assert_eq!(a, b);
    assert_ne!(a, c);
    let names: Vec<&str> = a.iter().map(|(n, _)| n.as_str()).collect();
    for expect in ["circle24.csv", "torus3x3.off", "hextorus6.json", "rp2.json", "klein4x4.json", "sphere4.json", "random10_seed0.csv"] {
        assert!(names.contains(&expect), "{expect} missing");
    }
    let circle = parse_distance_csv(&String::from_utf8(a.iter().find(|(n, _)| n == "circle24.csv").unwrap().1.clone()).unwrap()).unwrap();
    assert_eq!(circle.diameter(), q_int(12));
    for name in ["torus3x3.off", "torus6x6.off", "hextorus6.json", "rp2.json", "klein4x4.json", "sphere4.json"] {
        let k = read_complex(&dir.path().join(name)).unwrap();
        assert!(ClosedManifoldComplex::new(Arc::new(k)).is_ok(), "{name}");
    }
}
