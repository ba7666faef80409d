from dataclasses import replace
from typing import Iterable, Optional

from cellsurvey.core.result import CellMeasurement


def _difference(current: Optional[float], previous: Optional[float]) -> Optional[float]:
    if current is None or previous is None:
        return None
    return float(current - previous)


def with_deltas(samples: Iterable[CellMeasurement]) -> list[CellMeasurement]:
    """
    Fill rssi_delta / ber_delta as first differences over one sensor's stream.

    The first sample gets 0; a delta is None when either side is not known.
    """
    out: list[CellMeasurement] = []
    previous: Optional[CellMeasurement] = None
    for sample in samples:
        out.append(next_sample(previous, sample))
        previous = sample
    return out


def next_sample(previous: Optional[CellMeasurement], sample: CellMeasurement) -> CellMeasurement:
    """Delta-annotate ``sample`` against the sample taken just before it."""
    if previous is None:
        return replace(
            sample,
            rssi_delta=None if sample.rssi_dbm is None else 0.0,
            ber_delta=None if sample.ber_pct is None else 0.0,
        )
    return replace(
        sample,
        rssi_delta=_difference(sample.rssi_dbm, previous.rssi_dbm),
        ber_delta=_difference(sample.ber_pct, previous.ber_pct),
    )
