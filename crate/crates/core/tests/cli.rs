//! End-to-end tests of the satdist binary: output shapes, exit codes,
//! file emission, and determinism.

use std::process::{Command, Output};

fn satdist(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_satdist"))
        .args(args)
        .output()
        .expect("spawn satdist")
}

fn stdout_of(out: &Output) -> &str {
    std::str::from_utf8(&out.stdout).expect("stdout is utf-8")
}

fn assert_exit(out: &Output, code: i32) {
    assert_eq!(
        out.status.code(),
        Some(code),
        "stdout: {:?}\nstderr: {:?}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
}

mod truth_table {
    use super::*;

    #[test]
    fn single_variable_example() {
        let out = satdist(&["truth-table", "x0", "--n", "1"]);
        assert_exit(&out, 0);
        assert_eq!(stdout_of(&out), "01 k=1\n");
    }

    #[test]
    fn json_form_carries_version_and_config() {
        let out = satdist(&["truth-table", "x1 & !x0", "--n", "2", "--format", "json"]);
        assert_exit(&out, 0);
        let v: serde_json::Value = serde_json::from_str(stdout_of(&out)).unwrap();
        assert_eq!(v["format_version"], 1);
        assert_eq!(v["config"]["subcommand"], "truth-table");
        assert_eq!(v["config"]["n"], 2);
        assert_eq!(v["table"], "0010");
        assert_eq!(v["k"], 1);
    }

    #[test]
    fn reads_formula_from_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("formula.txt");
        std::fs::write(&path, "(x0 | x1) & !x2\n").unwrap();
        let out = satdist(&["truth-table", "--file", path.to_str().unwrap(), "--n", "3"]);
        assert_exit(&out, 0);
        assert_eq!(stdout_of(&out), "01110000 k=3\n");
    }

    #[test]
    fn variable_count_beyond_cap_is_a_precondition_error() {
        let out = satdist(&["truth-table", "x0", "--n", "30"]);
        assert_exit(&out, 3);
    }

    #[test]
    fn malformed_formula_is_a_precondition_error() {
        let out = satdist(&["truth-table", "x0 &", "--n", "1"]);
        assert_exit(&out, 3);
    }

    #[test]
    fn missing_source_is_a_usage_error() {
        let out = satdist(&["truth-table", "--n", "1"]);
        assert_exit(&out, 2);
    }

    #[test]
    fn csv_is_rejected() {
        let out = satdist(&["truth-table", "x0", "--n", "1", "--format", "csv"]);
        assert_exit(&out, 2);
    }
}

mod unrank {
    use super::*;

    #[test]
    fn first_weight_two_string() {
        let out = satdist(&["unrank", "4", "2", "1"]);
        assert_exit(&out, 0);
        assert_eq!(stdout_of(&out), "0011\n");
    }

    #[test]
    fn zero_weight_has_one_string() {
        let out = satdist(&["unrank", "8", "0", "1"]);
        assert_exit(&out, 0);
        assert_eq!(stdout_of(&out), "00000000\n");
    }

    #[test]
    fn out_of_range_index_is_a_precondition_error() {
        let out = satdist(&["unrank", "4", "2", "7"]);
        assert_exit(&out, 3);
    }

    #[test]
    fn non_numeric_index_is_a_usage_error() {
        let out = satdist(&["unrank", "4", "2", "one"]);
        assert_exit(&out, 2);
    }

    #[test]
    fn json_form_echoes_the_index() {
        let out = satdist(&["unrank", "6", "3", "11", "--format", "json"]);
        assert_exit(&out, 0);
        let v: serde_json::Value = serde_json::from_str(stdout_of(&out)).unwrap();
        assert_eq!(v["config"]["index"], "11");
        assert_eq!(v["bitstring"].as_str().unwrap().len(), 6);
    }
}

mod distance {
    use super::*;

    #[test]
    fn silent_vs_one_sixteenth() {
        let out = satdist(&["distance", "0", "0.0625"]);
        assert_exit(&out, 0);
        assert_eq!(stdout_of(&out), "distance_rad 0.252680\nmin_trials 15\n");
    }

    #[test]
    fn packing_lines_appear_with_a_budget() {
        let out = satdist(&["distance", "0.1", "0.9", "--max-m", "10000"]);
        assert_exit(&out, 0);
        let text = stdout_of(&out);
        assert!(text.contains("packing_count "), "{text}");
        assert!(text.contains("normalized_count "), "{text}");
    }

    #[test]
    fn equal_probabilities_have_zero_distance_and_no_min_trials() {
        let out = satdist(&["distance", "0.3", "0.3"]);
        assert_exit(&out, 0);
        assert_eq!(stdout_of(&out), "distance_rad 0.000000\n");

        let out = satdist(&["distance", "0.3", "0.3", "--format", "json"]);
        let v: serde_json::Value = serde_json::from_str(stdout_of(&out)).unwrap();
        assert_eq!(v["distance_rad"], 0.0);
        assert!(v["min_trials"].is_null());
        assert!(v["packing_count"].is_null());
    }

    #[test]
    fn json_form_is_complete() {
        let out = satdist(&["distance", "0", "0.0625", "--max-m", "225", "--format", "json"]);
        assert_exit(&out, 0);
        let v: serde_json::Value = serde_json::from_str(stdout_of(&out)).unwrap();
        assert_eq!(v["format_version"], 1);
        assert_eq!(v["p2"], 0.0625);
        assert_eq!(v["m"], 225);
        assert_eq!(v["min_trials"], 15);
        assert!(v["distance_rad"].as_f64().unwrap() > 0.25);
        assert!(v["packing_count"].as_u64().unwrap() >= 1);
    }

    #[test]
    fn probability_outside_unit_interval_is_a_precondition_error() {
        let out = satdist(&["distance", "1.5", "0.2"]);
        assert_exit(&out, 3);
    }
}

mod figure1 {
    use super::*;

    #[test]
    fn csv_carries_version_config_and_rows() {
        let out = satdist(&["figure1", "1", "10", "12"]);
        assert_exit(&out, 0);
        let text = stdout_of(&out);
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("# format_version: 1"));
        assert!(lines.next().unwrap().starts_with("# config: {"));
        assert_eq!(lines.next(), Some("n,y"));
        assert_eq!(text.lines().count(), 6, "{text}");
        assert!(text.lines().last().unwrap().starts_with("12,"));
    }

    #[test]
    fn json_form_lists_points() {
        let out = satdist(&["figure1", "2", "10", "14", "--format", "json"]);
        assert_exit(&out, 0);
        let v: serde_json::Value = serde_json::from_str(stdout_of(&out)).unwrap();
        assert_eq!(v["points"].as_array().unwrap().len(), 5);
        assert_eq!(v["points"][0]["n"], 10);
    }

    #[test]
    fn zero_ones_is_a_precondition_error() {
        let out = satdist(&["figure1", "0", "10", "12"]);
        assert_exit(&out, 3);
    }
}

mod scaling {
    use super::*;

    #[test]
    fn csv_has_one_row_per_n() {
        let out = satdist(&["scaling", "4", "6", "--reps", "20", "--seed", "5"]);
        assert_exit(&out, 0);
        let text = stdout_of(&out);
        assert!(text.starts_with("# format_version: 1\n# config: {"));
        assert!(text.contains("n,median_trials,mean_trials,reps\n"));
        assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 4);
    }

    #[test]
    fn inverted_range_is_a_precondition_error() {
        let out = satdist(&["scaling", "6", "4", "--reps", "10"]);
        assert_exit(&out, 3);
    }

    #[test]
    fn zero_n_is_a_precondition_error() {
        let out = satdist(&["scaling", "0", "4", "--reps", "10"]);
        assert_exit(&out, 3);
    }

    #[test]
    fn zero_reps_is_a_precondition_error() {
        let out = satdist(&["scaling", "4", "5", "--reps", "0"]);
        assert_exit(&out, 3);
    }
}

mod kestimate {
    use super::*;

    #[test]
    fn zeros_compress_to_almost_nothing() {
        let out = satdist(&["kestimate", "--gen", "zeros:4096"]);
        assert_exit(&out, 0);
        let v: serde_json::Value = serde_json::from_str(stdout_of(&out)).unwrap();
        assert_eq!(v["format_version"], 1);
        assert_eq!(v["input_bits"], 4096);
        assert_eq!(v["compressor"], "ac");
        assert!(v["k_hat_bits"].as_u64().unwrap() < 64);
        assert_eq!(
            v["log2_p_hat"].as_f64().unwrap(),
            -(v["k_hat_bits"].as_u64().unwrap() as f64)
        );
    }

    #[test]
    fn reads_input_from_a_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bits.txt");
        std::fs::write(&path, "0101\n0101\n").unwrap();
        let out = satdist(&["kestimate", "--input", path.to_str().unwrap(), "--compressor", "rle"]);
        assert_exit(&out, 0);
        let v: serde_json::Value = serde_json::from_str(stdout_of(&out)).unwrap();
        assert_eq!(v["input_bits"], 8);
        assert_eq!(v["compressor"], "rle");
    }

    #[test]
    fn non_binary_file_is_a_precondition_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.txt");
        std::fs::write(&path, "01x0").unwrap();
        let out = satdist(&["kestimate", "--input", path.to_str().unwrap()]);
        assert_exit(&out, 3);
    }

    #[test]
    fn unknown_compressor_is_a_usage_error() {
        let out = satdist(&["kestimate", "--gen", "zeros:128", "--compressor", "zip"]);
        assert_exit(&out, 2);
    }

    #[test]
    fn malformed_generator_is_a_usage_error() {
        let out = satdist(&["kestimate", "--gen", "primes:128"]);
        assert_exit(&out, 2);
        let out = satdist(&["kestimate", "--gen", "bernoulli:128"]);
        assert_exit(&out, 2);
    }

    #[test]
    fn bernoulli_rate_outside_unit_interval_is_a_precondition_error() {
        let out = satdist(&["kestimate", "--gen", "bernoulli:1.5:128"]);
        assert_exit(&out, 3);
    }

    #[test]
    fn missing_and_duplicate_sources_are_usage_errors() {
        let out = satdist(&["kestimate"]);
        assert_exit(&out, 2);
        let out = satdist(&["kestimate", "--gen", "zeros:8", "--input", "whatever"]);
        assert_exit(&out, 2);
    }

    #[test]
    fn csv_is_rejected() {
        let out = satdist(&["kestimate", "--gen", "zeros:128", "--format", "csv"]);
        assert_exit(&out, 2);
    }
}

mod output_files {
    use super::*;

    #[test]
    fn out_file_matches_stdout_bytes() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.csv");
        let out = satdist(&[
            "scaling",
            "4",
            "5",
            "--reps",
            "10",
            "--seed",
            "3",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert_exit(&out, 0);
        let file_bytes = std::fs::read(&path).unwrap();
        assert_eq!(file_bytes, out.stdout);
        assert!(!file_bytes.is_empty());
    }

    #[test]
    fn rewriting_the_same_run_is_byte_stable() {
        let dir = tempfile::tempdir().unwrap();
        let first = dir.path().join("a.json");
        let second = dir.path().join("b.json");
        for path in [&first, &second] {
            let out = satdist(&[
                "kestimate",
                "--gen",
                "uniform:8192",
                "--seed",
                "11",
                "--out",
                path.to_str().unwrap(),
            ]);
            assert_exit(&out, 0);
        }
        assert_eq!(
            std::fs::read(&first).unwrap(),
            std::fs::read(&second).unwrap()
        );
    }
}
