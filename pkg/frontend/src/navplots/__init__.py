"""Offline figure rendering for hybrid-navigation simulator outputs."""

from .io import PointCloud, SchemaMismatch, Trajectory, read_pointcloud, read_summary, read_trajectory
from .render import PlotJob, render_distance, render_phase

__version__ = "0.1.0"
