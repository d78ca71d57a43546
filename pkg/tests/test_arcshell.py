import json
import subprocess
import sys

import pytest

from schemic.arcshell import (CommandError, ExecOptions, Redefinition, Session, UnboundName,
                              execute_command, parse_script)
from schemic.arcshell import executor
from schemic.arcshell.cache import ResultCache, cache_key
from schemic.arcshell.render import deterministic_view, render_json, render_text
from schemic.polyparse import DSLSyntaxError

SCRIPT = """\
field QQ
ring R = [x, y]
ideal M = { x^2, x*y,
            y^2 }   # spans two lines
fatpoint m = R/M
ideal PAR = { y - x^2 }
scheme P = R/PAR
system J = jets(P, [1, 1])
length m
autoarc A = nabla(m, m)
reduce Ar = A, claim=3
dim A
simple l3
classof P
measure MP = P, lsystem, s=1, d=1
"""


def run(script, **kw):
    return Session(parse_script(script), ExecOptions(**kw)).run_all()


def test_round_trip():
    s = parse_script(SCRIPT)
    again = parse_script(s.render())
    assert again == s
    assert again.render() == s.render()
    assert [c.ident for c in s.commands()][:3] == ["length m", "A", "Ar"]


@pytest.mark.parametrize("text,exc", [
    ("ring R = [x]\nideal I = { x^2 \n", DSLSyntaxError),
    ("length X\n", UnboundName),
    ("ring R = [x]\nring R = [y]\n", Redefinition),
    ("ring R = [x]\nideal I = { z }\nscheme X = R/I\n", DSLSyntaxError),
    ("frobnicate m\n", DSLSyntaxError),
])
def test_parse_errors(text, exc):
    with pytest.raises(exc):
        parse_script(text)


def test_unbound_name_position():
    with pytest.raises(UnboundName) as err:
        parse_script("field QQ\nlength   X\n")
    assert (err.value.line, err.value.col) == (2, 10)


def test_records():
    records = {r["ident"]: r for r in run(SCRIPT)}
    assert records["length m"]["payload"] == {"kind": "integer", "value": "3"}
    red = records["Ar"]
    assert red["flags"]["certified"] is True
    assert red["payload"]["affine_dim"] == "4"
    assert any("DISCREPANCY" in n for n in red["payload"]["notes"])
    assert records["dim A"]["payload"]["value"] == "4"
    assert records["simple l3"]["payload"]["verdict"] == "simple"
    assert records["classof P"]["payload"]["text"] == "L"
    assert records["MP"]["payload"]["text"] == "1"


def test_execute_single_command_by_name():
    rec = execute_command(parse_script(SCRIPT), "Ar")
    assert rec["ident"] == "Ar" and rec["flags"]["cache_hit"] is False


def test_text_rendering():
    text = render_text(run(SCRIPT)).decode()
    assert "length m: 3" in text
    assert "note: DISCREPANCY" in text


def test_engine_errors_become_command_errors():
    with pytest.raises(CommandError):
        run("ring R = [x]\nideal I = { x^2 - 1 }\nfatpoint m = R/I\nlength m\n")


def test_cache_hit_and_identical_records(tmp_path):
    cold = run(SCRIPT, cache_dir=str(tmp_path))
    warm = run(SCRIPT, cache_dir=str(tmp_path))
    assert not any(r["flags"]["cache_hit"] for r in cold)
    assert all(r["flags"]["cache_hit"] for r in warm)
    assert render_json([deterministic_view(r) for r in cold]) == \
        render_json([deterministic_view(r) for r in warm])


def test_corrupt_cache_entry_is_recomputed(tmp_path, caplog):
    first = run("length l3\n", cache_dir=str(tmp_path))[0]
    path = tmp_path / f"{first['cache_key']}.json"
    path.write_text("{not json")
    again = run("length l3\n", cache_dir=str(tmp_path))[0]
    assert again["flags"]["cache_hit"] is False
    assert again["payload"] == first["payload"]
    assert "corrupt cache entry" in caplog.text
    assert json.loads(path.read_text())["payload"] == first["payload"]


def test_engine_version_changes_the_key(monkeypatch, tmp_path):
    first = run("length l3\n", cache_dir=str(tmp_path))[0]
    monkeypatch.setattr(executor, "ENGINE_VERSION", "schemic-test-bump")
    bumped = run("length l3\n", cache_dir=str(tmp_path))[0]
    assert bumped["cache_key"] != first["cache_key"]
    assert bumped["flags"]["cache_hit"] is False


def test_cache_key_is_order_independent():
    assert cache_key("dim", {"a": 1, "b": 2}, "v") == cache_key("dim", {"b": 2, "a": 1}, "v")
    assert cache_key("dim", {"a": 1}, "v") != cache_key("length", {"a": 1}, "v")


def test_unwritable_cache_directory_disables_cache(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("")
    cache = ResultCache(str(blocker / "sub"))
    record, hit = cache.lookup_store("k", lambda: {"cache_key": "k", "payload": {}})
    assert not hit and cache.directory is None


def test_field_line_and_char_option():
    rec = run("field Fp 7\nring R = [x]\nideal I = { x^2 + 1 }\nscheme X = R/I\ndim X\n")[0]
    assert rec["inputs"]["args"][0]["ring"].startswith("GF(7)")
    rec = run("ring R = [x]\nideal I = { x^2 }\nfatpoint m = R/I\nlength m\n", char=5)[0]
    assert rec["inputs"]["args"][0]["ring"].startswith("GF(5)")


def cli(*args, cwd):
    return subprocess.run([sys.executable, "-m", "schemic.arcshell", *args], cwd=cwd,
                          capture_output=True)


def test_cli(tmp_path):
    script = tmp_path / "s.arc"
    script.write_text(SCRIPT)
    out = cli("--script", str(script), "--cmd", "Ar", "--format", "json", cwd=tmp_path)
    assert out.returncode == 0
    assert json.loads(out.stdout)["payload"]["affine_dim"] == "4"
    out = cli("--script", str(script), "--all", cwd=tmp_path)
    assert out.returncode == 0 and b"length m: 3" in out.stdout
    out = cli("--script", str(script), "--cmd", "nope", cwd=tmp_path)
    assert out.returncode == 1 and b"arcshell: error" in out.stderr
    bad = tmp_path / "bad.arc"
    bad.write_text("length X\n")
    out = cli("--script", str(bad), "--all", cwd=tmp_path)
    assert out.returncode == 1 and b"unbound name" in out.stderr
