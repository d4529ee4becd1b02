from .base import SCOPE, Bus, Event, Topic
from .recorder import TrajectoryRecorder, write_trajectory_csv

__all__ = "SCOPE", "Bus", "Event", "Topic", "TrajectoryRecorder", "write_trajectory_csv"
