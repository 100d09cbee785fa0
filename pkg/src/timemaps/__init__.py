"""Time maps of discrete-event interarrival times.

A time map plots every interior event of a stream as the point
(time since previous event, time until next event), usually on log-log
axes.  This package builds, bins, renders and scores such maps.
"""

from .errors import TimemapError

__all__ = ["TimemapError"]
__version__ = "0.1.0"
