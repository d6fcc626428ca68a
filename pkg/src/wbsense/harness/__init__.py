"""Seeded Monte Carlo campaign front end (CLI: ``sense``)."""

from .config import CampaignConfig, ConfigError, load_campaign
from .campaigns import EXPERIMENTS, run_campaign

__all__ = ["CampaignConfig", "ConfigError", "load_campaign", "EXPERIMENTS", "run_campaign"]
