use std::process::Command;

use nwell::cli::output::{parse_csv, ParsedCsv};
use nwell::cli::run;
use nwell::potentials::{PotentialModel, SemiclassicalContext, Units};
use nwell::semiclassics::band_energies;

fn nwell(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("nwell").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn csv(args: &[&str]) -> ParsedCsv {
    let (code, out, err) = nwell(args);
    assert_eq!(code, 0, "{err}");
    parse_csv(&out).unwrap()
}

fn column(p: &ParsedCsv, name: &str) -> Vec<String> {
    let i = p.columns.iter().position(|c| c == name).unwrap_or_else(|| panic!("no column {name}"));
    p.rows.iter().map(|r| r[i].clone()).collect()
}

fn floats(p: &ParsedCsv, name: &str) -> Vec<f64> {
    column(p, name).iter().map(|v| v.parse().unwrap()).collect()
}

fn meta(p: &ParsedCsv, key: &str) -> String {
    p.meta.iter().find(|(k, _)| k == key).unwrap_or_else(|| panic!("no meta {key}")).1.clone()
}

#[test]
fn bands_symmetric_about_harmonic_level() {
    let p = csv(&["bands", "--potential", "cosine", "--q", "25", "--lc", "1", "--n", "0", "--wells", "6"]);
    let e = floats(&p, "energy");
    assert_eq!(e.len(), 6);
    let e0: f64 = meta(&p, "e_n0[0]").parse().unwrap();
    for s in 0..3 {
        assert!(((e[s] + e[5 - s]) / 2.0 - e0).abs() <= 1e-14 * e0.abs());
    }
    assert!(e.windows(2).all(|w| w[1] > w[0]));
    assert_eq!(meta(&p, "diagnostics"), "clear");
}

#[test]
fn single_well_band_is_the_harmonic_level() {
    let p = csv(&["bands", "--potential", "cosine", "--q", "25", "--n", "0", "--wells", "1"]);
    assert_eq!(p.rows.len(), 1);
    let e = floats(&p, "energy")[0];
    let e0: f64 = meta(&p, "e_n0[0]").parse().unwrap();
    assert_eq!(e, e0);
}

#[test]
fn missing_band_index_is_a_validation_error() {
    let (code, out, err) = nwell(&["bands", "--potential", "cosine", "--q", "25", "--wells", "3"]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert!(err.contains("--n"));
}

#[test]
fn csv_round_trips_library_values() {
    let p = csv(&["bands", "--potential", "cosine", "--q", "16", "--n", "0,1", "--wells", "5"]);
    let model = PotentialModel::cosine(16.0, 1.0, 5).unwrap();
    let ctx = SemiclassicalContext::new(&model, Units::natural()).unwrap();
    let mut expected = band_energies(&model, &ctx, 0, 5).unwrap().energies;
    expected.extend(band_energies(&model, &ctx, 1, 5).unwrap().energies);
    let printed = floats(&p, "energy");
    assert_eq!(printed.len(), expected.len());
    for (a, b) in printed.iter().zip(&expected) {
        assert_eq!(a.to_bits(), b.to_bits());
    }
}

#[test]
fn mathieu_widths_and_sweep() {
    let p = csv(&["mathieu", "--q", "16,25,36,49", "--n", "0"]);
    let closed = floats(&p, "width_closed_form");
    let ratio = floats(&p, "ratio");
    assert!((closed[1] / 5.884e-7 - 1.0).abs() < 1e-3);
    assert!((0.9..=1.1).contains(&ratio[1]));
    assert!(ratio.windows(2).all(|w| (w[1] - 1.0).abs() < (w[0] - 1.0).abs()));
    assert_eq!(meta(&p, "scale_convention"), "unit-energy");
}

#[test]
fn mathieu_rejects_non_positive_q() {
    assert_eq!(nwell(&["mathieu", "--q", "0"]).0, 2);
    assert_eq!(nwell(&["mathieu", "--q", "-3"]).0, 2);
    assert_eq!(nwell(&["mathieu", "--q", "25", "--grid", "5"]).0, 2);
}

#[test]
fn mathieu_natural_units_rescale_q() {
    // With ħ = m = l_c = 1 the energy scale is ½, so q = 12.5 is q/S = 25.
    let natural = csv(&["mathieu", "--q", "12.5", "--scale-convention", "natural"]);
    let unit = csv(&["mathieu", "--q", "25"]);
    let a = floats(&natural, "width_numeric")[0];
    let b = floats(&unit, "width_numeric")[0];
    assert!((2.0 * a / b - 1.0).abs() < 1e-6);
}

#[test]
fn verify_cosine_band_pattern() {
    let p = csv(&["verify", "--potential", "cosine", "--q", "8", "--wells", "4", "--grid", "8192"]);
    let ratio: f64 = meta(&p, "delta_ratio").parse().unwrap();
    assert!((0.75..=1.25).contains(&ratio), "{ratio}");
    assert_eq!(meta(&p, "status"), "pass");
    assert_eq!(p.rows.len(), 4);
}

#[test]
fn verify_single_harmonic_well() {
    let p = csv(&["verify", "--potential", "parabolic-chain", "--omega", "1", "--a", "20", "--wells", "1"]);
    let e = floats(&p, "energy_fd")[0];
    assert!((e - 0.5).abs() < 1e-5, "{e}");
}

#[test]
fn verify_fails_on_coarse_grid() {
    let (code, out, err) = nwell(&["verify", "--potential", "cosine", "--q", "8", "--wells", "4", "--grid", "64"]);
    assert_eq!(code, 3);
    assert!(err.contains("not converged"), "{err}");
    assert!(out.contains("# status: fail"));
}

#[test]
fn ring_degeneracies() {
    let p = csv(&["ring", "--wells", "8", "--h", "0,-0.1"]);
    let lone: Vec<String> = column(&p, "nondegenerate");
    assert_eq!(lone.iter().filter(|v| *v == "true").count(), 2);
    let labels = column(&p, "label");
    let energies = floats(&p, "energy");
    for (l, e) in labels.iter().zip(&energies) {
        let s: f64 = l.parse().unwrap();
        assert!((e + 0.2 * (2.0 * std::f64::consts::PI * s / 8.0).cos()).abs() < 1e-15);
    }
    assert_eq!(meta(&p, "ring_distinct_levels"), "5");
    assert_eq!(meta(&p, "chain_distinct_levels"), "8");

    let p = csv(&["ring", "--wells", "5", "--h", "0,-0.1"]);
    assert_eq!(meta(&p, "nondegenerate_labels"), "0");
}

#[test]
fn ring_rejects_asymmetric_coefficients() {
    let (code, _, err) = nwell(&["ring", "--wells", "4", "--h", "0,1,0,2"]);
    assert_eq!(code, 2);
    assert!(err.contains("symmetric"));
    assert_eq!(nwell(&["ring", "--wells", "1", "--h", "0"]).0, 2);
}

#[test]
fn ring_heuristic_from_chain() {
    let p = csv(&["ring", "--potential", "cosine", "--q", "25", "--wells", "6", "--n", "0", "--heuristic-from-chain"]);
    assert!(meta(&p, "heuristic").contains("qualitative"));
    assert_eq!(p.rows.len(), 6);
}

#[test]
fn dispersion_grid_and_zone_check() {
    let p = csv(&["dispersion", "--potential", "cosine", "--q", "25", "--wells", "4", "--n", "0", "--k-points", "8"]);
    let k = floats(&p, "k");
    assert_eq!(k.len(), 8);
    assert!((k[0] + 1.0).abs() < 1e-15);
    assert_eq!(nwell(&["dispersion", "--potential", "cosine", "--q", "25", "--wells", "4", "--n", "0", "--k", "1"]).0, 2);
}

#[test]
fn json_output_has_meta_and_rows() {
    let (code, out, _) = nwell(&["bands", "--potential", "cosine", "--q", "25", "--n", "0", "--wells", "3", "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["meta"]["command"], "bands");
    assert_eq!(v["rows"].as_array().unwrap().len(), 3);
    assert!(v["rows"][0]["energy"].is_f64());
}

#[test]
fn output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for path in [&a, &b] {
        let (code, _, _) = nwell(&[
            "verify", "--potential", "cosine", "--q", "8", "--wells", "3", "--grid", "2048", "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(code, 0);
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, r#"{"potential": "cosine", "q": 25, "wells": 3, "n": 0}"#).unwrap();
    let p = csv(&["bands", "--config", cfg.to_str().unwrap(), "--wells", "5"]);
    assert_eq!(p.rows.len(), 5);

    std::fs::write(&cfg, r#"{"potential": "cosine", "q": 25, "wels": 3}"#).unwrap();
    let (code, _, err) = nwell(&["bands", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("wels"));
}

#[test]
fn io_errors_exit_4() {
    let (code, _, _) = nwell(&["bands", "--config", "/nonexistent/run.json"]);
    assert_eq!(code, 4);
    let (code, _, _) = nwell(&["bands", "--potential", "tabulated", "--table", "/nonexistent/v.csv", "--n", "0"]);
    assert_eq!(code, 4);
    let (code, _, _) =
        nwell(&["bands", "--potential", "cosine", "--q", "9", "--wells", "2", "--n", "0", "--out", "/nonexistent/dir/o.csv"]);
    assert_eq!(code, 4);
}

#[test]
fn tabulated_table_through_cli() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("v.csv");
    let mut text = String::from("x,V\n");
    for i in 0..=1200 {
        let x = i as f64 * 3.0 * std::f64::consts::PI / 1200.0;
        text.push_str(&format!("{x},{}\n", 2.0 * 25.0 * (2.0 * x).cos()));
    }
    std::fs::write(&path, text).unwrap();
    let p = csv(&["bands", "--potential", "tabulated", "--table", path.to_str().unwrap(), "--n", "0"]);
    assert_eq!(p.rows.len(), 3);
    let analytic = csv(&["bands", "--potential", "cosine", "--q", "25", "--wells", "3", "--n", "0"]);
    let d_tab: f64 = meta(&p, "delta_n[0]").parse().unwrap();
    let d_ana: f64 = meta(&analytic, "delta_n[0]").parse().unwrap();
    assert!((d_tab / d_ana - 1.0).abs() < 1e-3, "{d_tab} vs {d_ana}");
}

#[test]
fn bad_input_never_panics() {
    for args in [
        vec!["bands", "--potential", "cosine", "--q", "NaN", "--wells", "2", "--n", "0"],
        vec!["bands", "--potential", "cosine", "--q", "4", "--wells", "0", "--n", "0"],
        vec!["bands", "--potential", "parabolic-chain", "--wells", "2", "--n", "0"],
        vec!["bands", "--potential", "cosine", "--q", "1,2", "--wells", "2", "--n", "0"],
        vec!["bands", "--wells", "abc"],
        vec!["frobnicate"],
        vec!["ring", "--wells", "6", "--h", "1,2,3,4,5"],
        vec!["verify", "--potential", "cosine", "--q", "8", "--wells", "2", "--tol", "-1"],
    ] {
        assert_eq!(nwell(&args).0, 2, "{args:?}");
    }
    // A level above the barrier is a numerical, not a validation, failure.
    assert_eq!(nwell(&["bands", "--potential", "cosine", "--q", "1", "--wells", "2", "--n", "1"]).0, 3);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_nwell");
    let ok = Command::new(bin).args(["ring", "--wells", "4", "--h", "0,-1"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("label,energy"));
    let bad = Command::new(bin).args(["mathieu", "--q", "-1"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    let help = Command::new(bin).arg("--help").output().unwrap();
    assert_eq!(help.status.code(), Some(0));
}
