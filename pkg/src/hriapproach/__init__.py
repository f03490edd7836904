"""Best-pose selection for a robot approaching a person on an occupancy grid."""
