"""Layered-costmap navigation simulator: occupancy grids fed by simulated
RGB-D and 2D lidar sensors, a grid planner with replanning, and a
bandwidth-limited stream synchronizer."""

from ._gridnav import *  # noqa: F401,F403
from ._gridnav import __version__  # noqa: F401
