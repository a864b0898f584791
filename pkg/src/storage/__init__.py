"""Storage module for SELDA Sim."""

from .results_store import ResultsStore, trial_file_name

__all__ = ['ResultsStore', 'trial_file_name']
