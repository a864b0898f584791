"""SELDA Sim - Planar dynamics simulator and experiment harness for a boom-mounted hopping leg."""

__version__ = '1.0.0'
__author__ = 'SELDA Sim Team'
