"""Campaign configuration: flat key = value text with section headers.

Every physical quantity carries an explicit unit suffix in its key name
(_hz, _s, _db) so nothing is ambiguous. Unknown keys fail fast with the
offending key named. The built-in defaults describe the 60 MHz five-band
reference scenario; any file value or override replaces a default.
"""

import configparser
import io
from dataclasses import dataclass, field

from ..pipeline import DetectorConfig
from ..sigsynth import ScenarioSpec

__all__ = ["CampaignConfig", "ConfigError", "load_campaign", "DEFAULT_CONFIG_TEXT"]


class ConfigError(ValueError):
    """Bad campaign configuration (unknown key, wrong type, bad value)."""


DEFAULT_CONFIG_TEXT = """\
[scenario]
total_bandwidth_hz = 60e6
subband_edges_hz = -30e6, -20e6, -6e6, 4e6, 18e6, 30e6
occupancy = 0, 1, 0, 1, 0
snr_db = -20
noise_variance = 1.0
uncertainty_db = 0.0
frame_duration_s = 2.0

[detector]
s_max = 10
edge_snr_db = -20
ref_snr_db = -20
band_snr_db = -20
cr_snr_db = 20
target_edge_pf = 0.001
target_edge_pd = 0.999
target_ref_quality = 0.999
target_pd = 0.9
p_idle = 0.8
edge_frames = 55
edge_mu_convention = legacy
edge_sense_duration_s = 6.5e-3

[campaign]
trials = 2000
master_seed = 20140501
workers = 0
hist_bin_hz = 1.5e6
target_pf = 0.1
sense_time_s = 13e-3
snr_sweep_db = -14, -16, -18, -20, -22
reference_band = 2
pf_band = 0
pd_band = 1
equal_bands = 10
sensed_frames = 2
sweep_step_s = 1e-4
"""

_FLOAT_KEYS = {
    ("scenario", "total_bandwidth_hz"), ("scenario", "snr_db"),
    ("scenario", "noise_variance"), ("scenario", "uncertainty_db"),
    ("scenario", "frame_duration_s"),
    ("detector", "edge_snr_db"), ("detector", "ref_snr_db"),
    ("detector", "band_snr_db"), ("detector", "cr_snr_db"),
    ("detector", "target_edge_pf"), ("detector", "target_edge_pd"),
    ("detector", "target_ref_quality"), ("detector", "target_pd"),
    ("detector", "p_idle"), ("detector", "edge_sense_duration_s"),
    ("campaign", "hist_bin_hz"), ("campaign", "target_pf"),
    ("campaign", "sense_time_s"), ("campaign", "sweep_step_s"),
}
_INT_KEYS = {
    ("detector", "s_max"), ("detector", "edge_frames"),
    ("campaign", "trials"), ("campaign", "master_seed"),
    ("campaign", "workers"), ("campaign", "reference_band"),
    ("campaign", "pf_band"), ("campaign", "pd_band"),
    ("campaign", "equal_bands"), ("campaign", "sensed_frames"),
}
_LIST_KEYS = {
    ("scenario", "subband_edges_hz"), ("scenario", "occupancy"),
    ("campaign", "snr_sweep_db"),
}
_STR_KEYS = {("detector", "edge_mu_convention")}
_KNOWN = _FLOAT_KEYS | _INT_KEYS | _LIST_KEYS | _STR_KEYS

EXPERIMENT_IDS = (
    "edge-hist", "ref-table", "ged-roc", "ged-uncertainty",
    "throughput-sweep", "optimal-times", "full-pipeline",
)


@dataclass(frozen=True)
class CampaignConfig:
    experiment_id: str
    trials: int
    master_seed: int
    scenario: ScenarioSpec
    detector: DetectorConfig
    workers: int = 0
    extras: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.experiment_id not in EXPERIMENT_IDS:
            raise ConfigError(f"unknown experiment_id '{self.experiment_id}'; "
                              f"choose from {EXPERIMENT_IDS}")
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")


def _parse(raw: dict) -> dict:
    values = {}
    for (section, key), text in raw.items():
        if (section, key) not in _KNOWN:
            raise ConfigError(f"unknown config key [{section}] {key}")
        try:
            if (section, key) in _FLOAT_KEYS:
                values[(section, key)] = float(text)
            elif (section, key) in _INT_KEYS:
                values[(section, key)] = int(float(text))
            elif (section, key) in _LIST_KEYS:
                values[(section, key)] = tuple(float(t) for t in text.split(","))
            else:
                values[(section, key)] = text.strip()
        except ValueError as exc:
            raise ConfigError(f"bad value for [{section}] {key}: {text!r}") from exc
    return values


def _read_ini(text: str) -> dict:
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"unparseable config: {exc}") from exc
    raw = {}
    for section in parser.sections():
        if section not in ("scenario", "detector", "campaign"):
            raise ConfigError(f"unknown config section [{section}]")
        for key, val in parser.items(section):
            raw[(section, key)] = val
    return raw


def load_campaign(experiment_id: str, config_path=None, *, trials=None,
                  master_seed=None, overrides=()) -> CampaignConfig:
    """Assemble a campaign from defaults, an optional file, and overrides.

    ``overrides`` holds "section.key=value" strings (the CLI's --set).
    """
    values = _parse(_read_ini(DEFAULT_CONFIG_TEXT))
    if config_path is not None:
        with open(config_path, "r", encoding="utf-8") as fh:
            values.update(_parse(_read_ini(fh.read())))
    for item in overrides:
        if "=" not in item or "." not in item.split("=", 1)[0]:
            raise ConfigError(f"override must look like section.key=value, got {item!r}")
        dotted, text = item.split("=", 1)
        section, key = dotted.strip().split(".", 1)
        values.update(_parse({(section.strip(), key.strip()): text.strip()}))

    def get(section, key):
        return values[(section, key)]

    nb = len(get("scenario", "subband_edges_hz")) - 1
    occupancy = tuple(int(o) for o in get("scenario", "occupancy"))
    if len(occupancy) != nb:
        raise ConfigError("occupancy must list one flag per sub-band")
    snr = 10 ** (get("scenario", "snr_db") / 10)
    try:
        scenario = ScenarioSpec(
            total_bandwidth_hz=get("scenario", "total_bandwidth_hz"),
            subband_edges_hz=get("scenario", "subband_edges_hz"),
            occupancy=occupancy,
            snr_linear=(snr,) * nb,
            noise_variance=get("scenario", "noise_variance"),
            uncertainty_db=get("scenario", "uncertainty_db"),
            frame_duration_s=get("scenario", "frame_duration_s"),
        )
        detector = DetectorConfig(
            total_bandwidth_hz=get("scenario", "total_bandwidth_hz"),
            s_max=get("detector", "s_max"),
            frame_duration_s=get("scenario", "frame_duration_s"),
            edge_snr=10 ** (get("detector", "edge_snr_db") / 10),
            ref_snr=10 ** (get("detector", "ref_snr_db") / 10),
            band_snr=10 ** (get("detector", "band_snr_db") / 10),
            cr_snr=10 ** (get("detector", "cr_snr_db") / 10),
            target_edge_pf=get("detector", "target_edge_pf"),
            target_edge_pd=get("detector", "target_edge_pd"),
            target_ref_quality=get("detector", "target_ref_quality"),
            target_pd=get("detector", "target_pd"),
            p_idle=get("detector", "p_idle"),
            edge_mu_convention=get("detector", "edge_mu_convention"),
            edge_sense_duration_s=get("detector", "edge_sense_duration_s"),
            edge_frames=get("detector", "edge_frames"),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    extras = {key: values[("campaign", key)] for (sec, key) in values if sec == "campaign"
              if key not in ("trials", "master_seed", "workers")}
    return CampaignConfig(
        experiment_id=experiment_id,
        trials=int(trials if trials is not None else get("campaign", "trials")),
        master_seed=int(master_seed if master_seed is not None else get("campaign", "master_seed")),
        scenario=scenario,
        detector=detector,
        workers=get("campaign", "workers"),
        extras=extras,
    )
