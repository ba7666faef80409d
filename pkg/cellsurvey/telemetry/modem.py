"""
Deterministic stand-in for the measuring GSM modem.

Given a position and the static base-station table it reports the nearest
cell through the SIM-AT grammar, with received level from a log-distance
toy model. The same (position, table, seed) always yields the same block.
"""
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from cellsurvey.core.campaign import BaseStation
from cellsurvey.core.errors import EmptyBsTable
from cellsurvey.core.geometry import Point2D, euclidean_distance
from cellsurvey.core.result import RSSI_MAX_DBM, RSSI_MIN_DBM, CellMeasurement
from cellsurvey.telemetry.at import RXQUAL_BER_PCT, format_cell_info

TA_STEP_M = 550.0
TA_MAX = 63


@dataclass(frozen=True, slots=True)
class ModemProfile:
    mcc: int = 208
    mnc: int = 10
    reference_dbm: float = -70.0       # level at the reference distance
    reference_m: float = 1000.0
    path_loss_exponent: float = 3.5
    noise_db: float = 2.0              # std-dev of the per-seed level offset


def serving_station(position: Point2D, bs_table: Sequence[BaseStation]) -> BaseStation:
    """Nearest base station; equal distances go to the lowest cell id."""
    if not bs_table:
        raise EmptyBsTable("no base stations to measure")
    return min(bs_table, key=lambda bs: (euclidean_distance(position, bs.position), bs.cell_id))


def timing_advance(distance_m: float) -> int:
    """
    GSM timing advance for a one-way distance, one step per 550 m.

    The field is six bits wide, so anything past 63 steps (about 35 km) reads 63.
    A reading of 63 is a lower bound on the distance, not a measurement of it.
    """
    return min(int(distance_m // TA_STEP_M), TA_MAX)


def received_level(distance_m: float, offset_db: float, profile: ModemProfile = ModemProfile()) -> int:
    """Level in dBm, non-increasing with distance for a fixed offset."""
    ratio = max(distance_m, 1.0) / profile.reference_m
    level = profile.reference_dbm - 10.0 * profile.path_loss_exponent * math.log10(ratio) + offset_db
    return max(RSSI_MIN_DBM, min(RSSI_MAX_DBM, math.floor(level + 0.5)))


def rxqual_class(rssi_dbm: int) -> int:
    return max(0, min(7, (-75 - rssi_dbm) // 5))


def modem_reading(position: Point2D, bs_table: Sequence[BaseStation], noise_seed: int,
                  profile: ModemProfile = ModemProfile()) -> CellMeasurement:
    """The measurement ``simulated_modem`` would print for these inputs."""
    serving = serving_station(position, bs_table)
    distance = euclidean_distance(position, serving.position)
    rng = np.random.Generator(np.random.PCG64(noise_seed))
    offset = float(rng.normal(0.0, profile.noise_db))
    rssi = received_level(distance, offset, profile)
    cid = serving.cell_id
    return CellMeasurement(
        cell_id=cid,
        timing_advance=timing_advance(distance),
        mcc=profile.mcc,
        mnc=profile.mnc,
        lac=min(1 + cid // 16, 2**16 - 1),
        rssi_dbm=rssi,
        ber_pct=RXQUAL_BER_PCT[rxqual_class(rssi)],
        bcc=(cid // 8) % 8,
        btcc=(cid // 64) % 8,
        ncc=cid % 8,
    )


def simulated_modem(position: Point2D, bs_table: Sequence[BaseStation], noise_seed: int,
                    profile: ModemProfile = ModemProfile()) -> str:
    """Serving-cell report as a SIM-AT text block."""
    return format_cell_info(modem_reading(position, bs_table, noise_seed, profile))
