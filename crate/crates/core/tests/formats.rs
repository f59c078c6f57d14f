use varlap::grid::{random_band_limited, read_grid, write_grid, GridDocument};
use varlap::mellin::{CoefficientForm, MellinTable, MultiplierSpec};
use varlap::varlp::{read_exponent, write_exponent};
use varlap::wave::{wave_trace, write_trace_csv, WaveConfig};
use varlap::{Complex64, Error, Geometry, GridFunction, VariableExponent};

#[test]
fn grid_file_round_trip_is_bit_exact() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.json");
    let g = Geometry::new(vec![8, 16], 2.5).unwrap();
    let f = random_band_limited(&g, 11, 3).unwrap().map(|z| z * Complex64::new(0.3, -1.7));
    write_grid(&path, &f).unwrap();
    let back = read_grid(&path).unwrap();
    assert_eq!(back.geometry(), f.geometry());
    assert!(back.samples().iter().zip(f.samples()).all(|(a, b)| a.re.to_bits() == b.re.to_bits() && a.im.to_bits() == b.im.to_bits()));
}

#[test]
fn exponent_file_keeps_infinity() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.json");
    let g = Geometry::cubic(1, 8, 1.0).unwrap();
    let p = VariableExponent::step(g, 1.5, f64::INFINITY).unwrap().with_p_infinity(3.0).unwrap();
    write_exponent(&path, &p).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("\"dtype\":\"exponent\"") && text.contains("-1"));
    let back = read_exponent(&path).unwrap();
    assert_eq!(back.samples(), p.samples());
    assert_eq!(back.p_infinity(), 3.0);
    assert!(back.has_infinite_region());
}

#[test]
fn dtype_mismatch_is_a_format_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.json");
    let p = VariableExponent::constant(Geometry::cubic(1, 4, 1.0).unwrap(), 2.0).unwrap();
    write_exponent(&path, &p).unwrap();
    assert!(matches!(read_grid(&path), Err(Error::Format(_))));
    let f = GridFunction::zeros(Geometry::cubic(1, 4, 1.0).unwrap());
    write_grid(&path, &f).unwrap();
    assert!(matches!(read_exponent(&path), Err(Error::Format(_))));
}

#[test]
fn malformed_documents_are_rejected() {
    for text in [
        "{}",
        r#"{"format_version":2,"dim":1,"sizes":[2],"side":1.0,"samples":[[0,0],[0,0]]}"#,
        r#"{"format_version":1,"dim":2,"sizes":[2],"side":1.0,"samples":[[0,0],[0,0]]}"#,
        r#"{"format_version":1,"dim":1,"sizes":[2],"side":1.0,"samples":[[0,0]]}"#,
        r#"{"format_version":1,"dim":1,"sizes":[3],"side":1.0,"samples":[[0,0],[0,0],[0,0]]}"#,
    ] {
        let doc = GridDocument::from_json(text);
        let res = doc.and_then(|d| d.into_grid());
        assert!(res.is_err(), "{text}");
    }
}

#[test]
fn mellin_table_csv_layout() {
    let spec = MultiplierSpec::new(0.0, 3).unwrap();
    let table = MellinTable::closed_form(spec, vec![-1.0, 0.0, 1.0], CoefficientForm::Displayed).unwrap();
    let mut buf = Vec::new();
    table.write_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "u,re_A,im_A,abs_A,method,alpha,n");
    assert_eq!(lines.count(), 3);
    assert!(table.conjugate_asymmetry() < 1e-15);
}

#[test]
fn wave_trace_csv_is_deterministic() {
    let g = Geometry::cubic(2, 16, 1.0).unwrap();
    let f = random_band_limited(&g, 3, 3).unwrap();
    let cfg = WaveConfig::new(2, vec![0.1, 0.2, 0.4]).unwrap();
    let render = || {
        let mut buf = Vec::new();
        write_trace_csv(&mut buf, &wave_trace(&f, &cfg).unwrap()).unwrap();
        buf
    };
    let a = render();
    assert_eq!(a, render());
    let text = String::from_utf8(a).unwrap();
    assert!(text.starts_with("t,l2,max,energy\n"));
    assert_eq!(text.lines().count(), 4);
}
