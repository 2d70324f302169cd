use qrisk::report::render;
use qrisk::{emit_report, run, RunConfig};
use qrisk_core::synthetic::PlantedUniverse;
use qrisk_core::RiskMeasure;

fn small_market() -> qrisk_core::data::PricePanel {
    let mut u = PlantedUniverse::new("SPX");
    u.n_securities = 40;
    u.months = 120;
    u.generate(5).unwrap().panel
}

#[test]
fn single_measure_gives_one_profile() {
    let cfg = RunConfig::from_toml("measures = [\"tre\"]\nsecurities_per_bin = 10").unwrap();
    let report = run(&small_market(), &cfg).unwrap();
    assert_eq!(report.profiles.keys().copied().collect::<Vec<_>>(), [RiskMeasure::Tre]);
    let files = render(&report).unwrap();
    let csvs: Vec<_> = files.keys().filter(|k| k.ends_with(".csv")).collect();
    assert_eq!(csvs, ["profile_tre.csv"]);
    assert!(files["profile_tre.csv"].starts_with("bin_index,mean_risk,e_rel,n_cycles_contributing\n"));
    let fits: serde_json::Value = serde_json::from_str(&files["fits.json"]).unwrap();
    let keys: Vec<_> = fits.as_object().unwrap().keys().collect();
    assert_eq!(keys, ["tre"]);
    for k in ["p0", "p1", "chi2"] {
        assert!(fits["tre"][k].is_number());
    }
    assert!(!files.keys().any(|k| k.ends_with(".svg")));
}

#[test]
fn reruns_are_byte_identical() {
    let cfg = RunConfig::from_toml("securities_per_bin = 10\nplot = true\nks_resamples = 20\nks_seed = 9").unwrap();
    let market = small_market();
    let a = render(&run(&market, &cfg).unwrap()).unwrap();
    let b = render(&run(&market, &cfg).unwrap()).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.keys().filter(|k| k.ends_with(".svg")).count(), 4);
}

#[test]
fn config_echo_matches_parsed_config() {
    let cfg = RunConfig::from_toml("procedure = \"II\"\nn_bins = 4\nmeasures = [\"beta\", \"relstd\"]").unwrap();
    let report = run(&small_market(), &cfg).unwrap();
    assert_eq!(report.config, cfg);
    let files = render(&report).unwrap();
    let json: serde_json::Value = serde_json::from_str(&files["report.json"]).unwrap();
    assert_eq!(json["config"]["procedure"], "II");
    assert_eq!(json["config"]["n_bins"], 4);
    assert_eq!(json["config"]["measures"], serde_json::json!(["beta", "relstd"]));
    assert_eq!(report.profiles.len(), 2);
}

#[test]
fn emit_writes_every_file() {
    let cfg = RunConfig::from_toml("securities_per_bin = 10").unwrap();
    let report = run(&small_market(), &cfg).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("nested").join("out");
    let written = emit_report(&report, &out).unwrap();
    let expected = render(&report).unwrap();
    assert_eq!(written.len(), expected.len());
    for (name, body) in expected {
        assert_eq!(std::fs::read_to_string(out.join(name)).unwrap(), body);
    }
}
