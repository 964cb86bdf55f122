from heraldic.cli import RunManifest, format_probability
from heraldic.cli.formatting import dumps


def test_digest_depends_only_on_the_config():
    first = RunManifest.for_config("search", {"a": 1, "b": [1, 2]}, 4)
    second = RunManifest.for_config("search", {"b": [1, 2], "a": 1}, 4)
    third = RunManifest.for_config("search", {"a": 2, "b": [1, 2]}, 4)
    assert first.config_digest == second.config_digest
    assert first.config_digest != third.config_digest
    assert len(first.config_digest) == 64


def test_phases_are_timed():
    manifest = RunManifest.for_config("verify", {})
    with manifest.phase("build"):
        pass
    with manifest.phase("build"):
        pass
    document = manifest.to_json()
    assert set(document["timings"]) == {"build"}
    assert document["timings"]["build"] >= 0
    assert document["master_seed"] is None


def test_probability_display():
    assert format_probability(1 / 108) == {"decimal": "0.00925925925925926", "rational": "1/108"}
    assert format_probability(2 / 27)["rational"] == "2/27"
    assert format_probability(2**-0.5)["rational"] is None


def test_dumps_keeps_unicode():
    assert dumps({"state": "ψ+"}) == '{\n  "state": "ψ+"\n}'
