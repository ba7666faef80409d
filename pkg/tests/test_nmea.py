import numpy as np
import pytest

from cellsurvey.core.errors import ChecksumMismatch, MalformedField, UnsupportedSentence
from cellsurvey.telemetry.nmea import nmea_checksum, parse_nmea, with_checksum

GGA = "$GPGGA,123519,4807.038,N,01131.000,E,1,08,0.9,545.4,M,46.9,M,,*47"
RMC = "$GPRMC,123519,A,4807.038,N,01131.000,E,022.4,084.4,230394,003.1,W*6A"


def test_gga():
    fix = parse_nmea(GGA)
    assert fix.latitude == pytest.approx(48.1173)
    assert fix.longitude == pytest.approx(11.516667, abs=1e-6)
    assert fix.time_utc == 12 * 3600 + 35 * 60 + 19
    assert fix.quality == 1
    assert fix.satellites == 8
    assert fix.valid
    assert fix.asdict()["sentence"] == "GGA"


def test_rmc():
    fix = parse_nmea(RMC + "\r\n")
    assert fix.sentence == "RMC"
    assert fix.latitude == pytest.approx(48.1173)
    assert fix.quality == 1
    assert fix.satellites is None


def test_void_rmc_is_an_invalid_fix():
    fix = parse_nmea(with_checksum("GPRMC,123519,V,4807.038,N,01131.000,E,,,230394,,"))
    assert not fix.valid


def test_southern_and_western_hemispheres_are_negative():
    fix = parse_nmea(with_checksum("GNGGA,000000,3352.128,S,15112.558,W,2,10,1.0,10.0,M,0.0,M,,"))
    assert fix.latitude == pytest.approx(-(33 + 52.128 / 60))
    assert fix.longitude == pytest.approx(-(151 + 12.558 / 60))
    assert fix.time_utc == 0


def test_checksum():
    assert nmea_checksum(GGA[1:GGA.index("*")]) == 0x47
    assert with_checksum("GPGGA,1") == f"$GPGGA,1*{nmea_checksum('GPGGA,1'):02X}"


def test_checksum_mismatch():
    with pytest.raises(ChecksumMismatch):
        parse_nmea(GGA[:-2] + "48")


def test_unsupported_sentence():
    with pytest.raises(UnsupportedSentence):
        parse_nmea(with_checksum("GPGSV,3,1,11,03,03,111,00"))


@pytest.mark.parametrize("sentence", [
    GGA.split("*")[0],                                                          # no checksum
    "GPGGA,123519,4807.038,N,01131.000,E,1,08*47",                             # no '$'
    GGA[:-2] + "4",
    GGA[:-2] + "ZZ",
    with_checksum("GPGGA,123519,4867.038,N,01131.000,E,1,08,0.9,545.4,M,46.9,M,,"),   # 67 minutes
    with_checksum("GPGGA,123519,4807.038,X,01131.000,E,1,08,0.9,545.4,M,46.9,M,,"),
    with_checksum("GPGGA,253519,4807.038,N,01131.000,E,1,08,0.9,545.4,M,46.9,M,,"),
    with_checksum("GPGGA,123519,4807.038,N,01131.000,E,9,08,0.9,545.4,M,46.9,M,,"),
    with_checksum("GPGGA,123519,4807.038,N,01131.000,E,1,xx,0.9,545.4,M,46.9,M,,"),
    with_checksum("GPGGA,123519,4807.038,N"),
    with_checksum("GPRMC,123519,Q,4807.038,N,01131.000,E,,,230394,,"),
])
def test_malformed(sentence):
    with pytest.raises(MalformedField):
        parse_nmea(sentence)


def _gga(lat: str = "4807.038", lon: str = "01131.000", time: str = "123519") -> str:
    return with_checksum(f"GPGGA,{time},{lat},N,{lon},E,1,08,0.9,545.4,M,46.9,M,,")


@pytest.mark.parametrize("lat", ["48nan", "48inf", "48-1.5", "48+1.5", "48 1.5", "4807.", "48_07.0", "4807.038e0"])
def test_latitude_minutes_must_be_plain_digits(lat):
    with pytest.raises(MalformedField):
        parse_nmea(_gga(lat=lat))


@pytest.mark.parametrize("lon", ["011nan", "-1131.000", "0113-1.0", "1131.000"])
def test_longitude_must_be_plain_digits(lon):
    with pytest.raises(MalformedField):
        parse_nmea(_gga(lon=lon))


@pytest.mark.parametrize("time", ["1235nan", "1235-1", "12351", "+12351", "123519.", "1235inf"])
def test_time_must_be_hhmmss(time):
    with pytest.raises(MalformedField):
        parse_nmea(_gga(time=time))


def test_fractional_seconds_and_minutes_accepted():
    fix = parse_nmea(_gga(lat="4807", time="123519.25"))
    assert fix.latitude == pytest.approx(48 + 7 / 60)
    assert fix.time_utc == pytest.approx(12 * 3600 + 35 * 60 + 19.25)


def test_random_digit_fields_stay_in_range():
    rng = np.random.default_rng(5)
    for _ in range(1000):
        deg = int(rng.integers(0, 90))
        minutes = float(rng.uniform(0, 60))
        lat = f"{deg:02d}{minutes:07.4f}"
        if lat[2:4] == "60":
            continue
        fix = parse_nmea(_gga(lat=lat))
        assert 0 <= fix.latitude < 90
        assert fix.latitude == pytest.approx(deg + float(lat[2:]) / 60)
