"""Seeded property campaigns and the regression suite."""

from .campaigns import Campaign, campaign_lemma35
from .sampling import sample_cone, stream
from .suite import SuiteReport, run_paper_suite

__all__ = ["Campaign", "SuiteReport", "campaign_lemma35", "run_paper_suite", "sample_cone", "stream"]
