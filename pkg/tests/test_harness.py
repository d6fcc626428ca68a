"""Harness: config parsing, CLI exit codes, campaign determinism."""

import pytest

from wbsense.harness import ConfigError, load_campaign, run_campaign
from wbsense.harness.cli import main


class TestConfig:
    def test_defaults_load(self):
        cfg = load_campaign("optimal-times")
        assert cfg.scenario.total_bandwidth_hz == 60e6
        assert cfg.scenario.subband_count == 5
        assert cfg.detector.s_max == 10
        assert cfg.trials == 2000
        assert cfg.detector.edge_frames == 55

    def test_unknown_key_fails_fast(self, tmp_path):
        bad = tmp_path / "bad.cfg"
        bad.write_text("[campaign]\nbanana = 3\n")
        with pytest.raises(ConfigError, match="banana"):
            load_campaign("optimal-times", bad)

    def test_unknown_section_fails(self, tmp_path):
        bad = tmp_path / "bad.cfg"
        bad.write_text("[nonsense]\nx = 1\n")
        with pytest.raises(ConfigError, match="nonsense"):
            load_campaign("optimal-times", bad)

    def test_bad_value_fails(self, tmp_path):
        bad = tmp_path / "bad.cfg"
        bad.write_text("[campaign]\ntrials = lots\n")
        with pytest.raises(ConfigError, match="trials"):
            load_campaign("optimal-times", bad)

    def test_override_applies(self):
        cfg = load_campaign("optimal-times", overrides=["scenario.snr_db=-14"])
        assert cfg.scenario.snr_linear[0] == pytest.approx(10 ** -1.4)

    def test_bad_override_shape(self):
        with pytest.raises(ConfigError):
            load_campaign("optimal-times", overrides=["snr_db=-14"])

    def test_unknown_experiment(self):
        with pytest.raises(ConfigError):
            load_campaign("spin-the-wheel")

    def test_file_values_override_defaults(self, tmp_path):
        f = tmp_path / "c.cfg"
        f.write_text("[campaign]\ntrials = 7\nmaster_seed = 99\n")
        cfg = load_campaign("optimal-times", f)
        assert cfg.trials == 7 and cfg.master_seed == 99

    def test_cli_flags_beat_file(self, tmp_path):
        f = tmp_path / "c.cfg"
        f.write_text("[campaign]\ntrials = 7\n")
        cfg = load_campaign("optimal-times", f, trials=11, master_seed=5)
        assert cfg.trials == 11 and cfg.master_seed == 5


def csv_body(path):
    lines = path.read_text().splitlines()
    assert lines[0].startswith("# generated ")
    return "\n".join(lines[1:])


class TestDeterminism:
    def test_rerun_byte_identical(self, tmp_path):
        for d in ("a", "b"):
            cfg = load_campaign("ref-table", trials=50, master_seed=424242)
            run_campaign(cfg, tmp_path / d)
        for name in ("ref_table.csv", "ref_trials.csv"):
            assert csv_body(tmp_path / "a" / name) == csv_body(tmp_path / "b" / name)

    def test_worker_count_invariant(self, tmp_path):
        from dataclasses import replace

        outs = []
        for d, workers in (("w1", 1), ("w2", 2)):
            cfg = load_campaign("ged-uncertainty", trials=200, master_seed=7)
            cfg = replace(cfg, workers=workers)
            run_campaign(cfg, tmp_path / d)
            outs.append(csv_body(tmp_path / d / "ged_uncertainty.csv"))
        assert outs[0] == outs[1]

    def test_edge_hist_rerun_identical(self, tmp_path):
        overrides = [
            "scenario.total_bandwidth_hz=6e6",
            "scenario.subband_edges_hz=-3e6,-1e6,1e6,3e6",
            "scenario.occupancy=0,1,0",
            "scenario.snr_db=-10",
            "detector.s_max=6",
            "detector.edge_frames=8",
            "detector.edge_sense_duration_s=2e-3",
            "campaign.hist_bin_hz=0.25e6",
        ]
        bodies = []
        for d in ("a", "b"):
            cfg = load_campaign("edge-hist", trials=8, master_seed=3, overrides=overrides)
            run_campaign(cfg, tmp_path / d)
            bodies.append(csv_body(tmp_path / d / "edge_hist.csv"))
        assert bodies[0] == bodies[1]


class TestSmallCampaigns:
    """Each experiment runs end to end on a scaled-down configuration."""

    SMALL = [
        "scenario.total_bandwidth_hz=6e6",
        "scenario.subband_edges_hz=-3e6,-1e6,1e6,3e6",
        "scenario.occupancy=0,1,0",
        "scenario.snr_db=-10",
        "scenario.frame_duration_s=0.25",
        "detector.s_max=6",
        "detector.edge_frames=8",
        "detector.edge_sense_duration_s=2e-3",
        "detector.edge_snr_db=-10",
        "detector.ref_snr_db=-10",
        "detector.band_snr_db=-10",
        "campaign.hist_bin_hz=0.25e6",
        "campaign.sense_time_s=5e-3",
        "campaign.snr_sweep_db=-10,-12",
        "campaign.reference_band=0",
        "campaign.pf_band=2",
        "campaign.pd_band=1",
        "campaign.equal_bands=4",
        "campaign.sensed_frames=1",
    ]

    def run(self, experiment, tmp_path, trials):
        cfg = load_campaign(experiment, trials=trials, master_seed=11,
                            overrides=self.SMALL)
        return run_campaign(cfg, tmp_path / experiment)

    def test_edge_hist(self, tmp_path):
        summary, _ = self.run("edge-hist", tmp_path, 10)
        assert summary["detected_total"] > 0
        assert (tmp_path / "edge-hist" / "edge_qtrace.csv").exists()
        assert summary["recall_within_2bins"] > 0.5

    def test_ref_table(self, tmp_path):
        summary, checks = self.run("ref-table", tmp_path, 150)
        assert summary["p_dwref[-10dB]"] >= 0.98
        assert all(ok for _, ok, _ in checks)

    def test_ged_roc(self, tmp_path):
        summary, _ = self.run("ged-roc", tmp_path, 150)
        assert summary["max_pf_error"] < 0.15
        assert (tmp_path / "ged-roc" / "ged_roc.csv").exists()

    def test_ged_uncertainty(self, tmp_path):
        summary, checks = self.run("ged-uncertainty", tmp_path, 400)
        assert "pf_spread" in summary

    def test_throughput_sweep(self, tmp_path):
        summary, _ = self.run("throughput-sweep", tmp_path, 1)
        assert summary["t_o_grid_best_s"] > 0

    def test_optimal_times(self, tmp_path):
        summary, checks = self.run("optimal-times", tmp_path, 1)
        assert all(ok for _, ok, _ in checks)
        assert summary["t_o_ged_s"] >= summary["t_o_ced_s"]

    def test_full_pipeline(self, tmp_path):
        summary, _ = self.run("full-pipeline", tmp_path, 4)
        assert summary["replicas"] == 4
        assert (tmp_path / "full-pipeline" / "pipeline_decisions.csv").exists()
        assert 0 < summary["mean_t_o_s"] < 0.25


class TestCli:
    def test_success_and_summary(self, tmp_path, capsys):
        code = main(["optimal-times", "--out", str(tmp_path / "o")])
        out = capsys.readouterr().out
        assert code == 0
        assert "t_o_ged_s" in out
        assert (tmp_path / "o" / "summary.txt").exists()

    def test_config_error_exit_2(self, tmp_path, capsys):
        code = main(["optimal-times", "--set", "campaign.bogus=1",
                     "--out", str(tmp_path / "o")])
        assert code == 2
        assert "bogus" in capsys.readouterr().err

    def test_missing_config_file_exit_2(self, tmp_path):
        assert main(["optimal-times", "--config", str(tmp_path / "nope.cfg")]) == 2

    def test_check_failure_exit_3(self, tmp_path):
        # tiny trial count cannot hold the ROC tolerance: --check must flag it
        code = main(["ged-roc", "--trials", "40", "--seed", "1",
                     "--out", str(tmp_path / "roc"), "--check"])
        assert code == 3
