import pytest

from cellsurvey.telemetry.ingest import next_sample, with_deltas

from .builders import cell


def test_deltas_are_first_differences():
    out = with_deltas([cell(rssi=-70, ber=0.14), cell(rssi=-75, ber=0.57), cell(rssi=-72, ber=0.28)])
    assert [c.rssi_delta for c in out] == [0.0, -5.0, 3.0]
    assert [c.ber_delta for c in out] == pytest.approx([0.0, 0.43, -0.29])


def test_unknown_values_have_no_delta():
    out = with_deltas([cell(rssi=None, ber=0.14), cell(rssi=-80, ber=None), cell(rssi=-81, ber=0.14)])
    assert [c.rssi_delta for c in out] == [None, None, -1.0]
    assert [c.ber_delta for c in out] == [0.0, None, None]


def test_empty_stream():
    assert with_deltas([]) == []


def test_next_sample_keeps_the_reading():
    sample = next_sample(cell(rssi=-90), cell(rssi=-85))
    assert sample.rssi_dbm == -85
    assert sample.rssi_delta == 5.0
