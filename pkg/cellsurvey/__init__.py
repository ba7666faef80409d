"""Mobile cellular measurement campaigns: partitioning, routing, coordination and telemetry."""

__version__ = "0.1.0"
