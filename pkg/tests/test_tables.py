import pytest

from bb84eve.tables import SweepTable


def test_round_trip():
    t = SweepTable(("p", "omega_star", "status"), [(0.1, 1 / 3, "OK"), (0.2, None, "ALL_UNSECURED")])
    back = SweepTable.from_csv(t.to_csv())
    assert back == t.rounded()
    assert back.to_csv() == t.to_csv()


def test_format():
    t = SweepTable(("a", "b", "c"), [(2 / 3, 1e-20, True)])
    assert t.to_csv() == "a,b,c\n0.666666666667,1e-20,true\n"


def test_arity_and_finiteness():
    t = SweepTable(("a", "b"))
    with pytest.raises(ValueError):
        t.append((1.0,))
    with pytest.raises(ValueError):
        t.append((1.0, float("nan")))
    with pytest.raises(ValueError):
        SweepTable(("a",), [(float("inf"),)])


def test_column():
    t = SweepTable(("a", "b"), [(1, 2), (3, 4)])
    assert t.column("b") == [2, 4] and len(t) == 2
