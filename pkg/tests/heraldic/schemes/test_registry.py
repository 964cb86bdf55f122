import pytest

from heraldic import UnknownSchemeError
from heraldic.schemes import get_scheme, scheme_names, verify_scheme


def test_scheme_names():
    assert scheme_names() == sorted(scheme_names())
    assert {"ghz54", "ghz54-blocks", "bell-omega", "bell-omega-prime"} <= set(scheme_names())


@pytest.mark.parametrize("name", scheme_names())
def test_every_scheme_passes(name):
    entry = get_scheme(name)
    report = verify_scheme(entry.build(), entry.claims())
    assert report.passed, [r.to_json() for r in report.failures]


def test_bell_details():
    entry = get_scheme("bell-omega")
    report = verify_scheme(entry.build(), entry.claims())
    details = entry.details(report.herald)
    assert set(details) == {"20", "02"}
    for pattern in details.values():
        if "plain" in pattern:
            assert set(pattern["plain"]) == set(pattern["rotated"])


def test_unknown_scheme():
    with pytest.raises(UnknownSchemeError):
        get_scheme("nosuch")
