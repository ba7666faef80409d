import pytest

from cellsurvey.core.errors import MalformedField, MissingKey, OutOfRange
from cellsurvey.telemetry.at import (RXQUAL_BER_PCT, format_cell_info, parse_at_creg, parse_at_csq, parse_cell_info,
                                     split_cell_blocks)

from .builders import cell

BLOCK = """cid:4711
ta:2
mcc:208
mnc:10
lac:295
rssi:-83
ber:0.57
bcc:3
btcc:1
ncc:5
OK
"""


@pytest.mark.parametrize("n", range(32))
def test_csq_level_mapping(n):
    for q in range(8):
        assert parse_at_csq(f"+CSQ: {n},{q}") == (-113 + 2 * n, RXQUAL_BER_PCT[q])


def test_csq_unknown_values():
    assert parse_at_csq("+CSQ: 99,99") == (None, None)
    assert parse_at_csq("  +CSQ:15, 99\r\n") == (-83, None)
    assert parse_at_csq("+CSQ: 20,7") == (-73, 18.10)


@pytest.mark.parametrize("line,error", [
    ("+CSQ: 32,0", OutOfRange),
    ("+CSQ: 10,8", OutOfRange),
    ("+CSQ: 10", MalformedField),
    ("CSQ: 10,0", MalformedField),
    ("+CSQ: -1,0", MalformedField),
])
def test_csq_errors(line, error):
    with pytest.raises(error):
        parse_at_csq(line)


def test_creg():
    reg = parse_at_creg('+CREG: 2,1,"00C3","0000A13F"')
    assert (reg.mode, reg.status, reg.lac, reg.cell_id) == (2, 1, 0xC3, 0xA13F)
    assert reg.registered
    assert parse_at_creg("+CREG: 0,5").registered
    searching = parse_at_creg("+CREG: 0,2")
    assert not searching.registered
    assert searching.lac is None
    with pytest.raises(OutOfRange):
        parse_at_creg("+CREG: 0,6")
    with pytest.raises(MalformedField):
        parse_at_creg("+COPS: 0")


def test_cell_block():
    c = parse_cell_info(BLOCK)
    assert (c.cell_id, c.timing_advance, c.mcc, c.mnc, c.lac) == (4711, 2, 208, 10, 295)
    assert (c.rssi_dbm, c.ber_pct) == (-83, 0.57)
    assert (c.bcc, c.btcc, c.ncc) == (3, 1, 5)
    assert c.rssi_delta is None


def test_cell_block_keys_in_any_order():
    lines = BLOCK.strip().splitlines()
    shuffled = "\n".join(reversed(lines[:-1])) + "\nOK\n"
    assert parse_cell_info(shuffled) == parse_cell_info(BLOCK)


def test_cell_block_missing_key():
    with pytest.raises(MissingKey):
        parse_cell_info(BLOCK.replace("lac:295\n", ""))


@pytest.mark.parametrize("block", [
    BLOCK.replace("OK\n", ""),
    BLOCK.replace("ta:2", "ta:two"),
    BLOCK.replace("ber:0.57", "ber:low"),
    BLOCK.replace("ncc:5", "ncc:5\nncc:5"),
    BLOCK.replace("ncc:5", "ncc:5\nfoo:1"),
    BLOCK + "cid:1\n",
])
def test_cell_block_malformed(block):
    with pytest.raises(MalformedField):
        parse_cell_info(block)


@pytest.mark.parametrize("old,new", [("rssi:-83", "rssi:-40"), ("bcc:3", "bcc:9"), ("ber:0.57", "ber:101")])
def test_cell_block_out_of_range(old, new):
    with pytest.raises(OutOfRange):
        parse_cell_info(BLOCK.replace(old, new))


def test_split_blocks():
    blocks = split_cell_blocks(BLOCK + "\n" + BLOCK.replace("cid:4711", "cid:12"))
    assert len(blocks) == 2
    assert parse_cell_info(blocks[1]).cell_id == 12


def test_format_then_parse():
    sample = cell(cell_id=300, rssi=-95, ber=4.53, ta=17)
    assert parse_cell_info(format_cell_info(sample)) == sample
    with pytest.raises(ValueError):
        format_cell_info(cell(rssi=None))
