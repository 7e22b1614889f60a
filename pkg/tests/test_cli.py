import csv
import io
import json
import subprocess
import sys

import pytest

from shearlet_embed.cli import CSV_HEADER, main, parse_list, read_config


def run(args, capsys):
    code = main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


STD11 = ["--group", "standard", "--lambda1", "1", "--lambda2", "1"]
TUPLE = ["--p", "2", "--q", "2", "--r", "2"]


def test_decide_exit_codes(capsys):
    code, out, _ = run(["decide", *STD11, *TUPLE, "--alpha", "0", "--beta", "1", "--k", "1"], capsys)
    assert code == 1 and "DoesNotEmbed" in out
    code, _, _ = run(["decide", "--group", "standard", "--lambda1", "1", "--lambda2", "2", *TUPLE,
                      "--alpha", "2", "--beta", "2", "--k", "1"], capsys)
    assert code == 0
    code, _, _ = run(["decide", "--group", "standard", "--lambda1", "1", "--lambda2", "2",
                      "--p", "2", "--q", "4", "--r", "2", "--alpha", "1", "--beta", "2", "--k", "0"], capsys)
    assert code == 2


@pytest.mark.parametrize("args", [
    ["decide", *STD11, *TUPLE, "--alpha", "x", "--beta", "1", "--k", "1"],
    ["decide", *STD11, *TUPLE, "--alpha", "0", "--beta", "-1", "--k", "1"],
    ["decide", *STD11, *TUPLE, "--alpha", "0", "--beta", "1", "--k", "-1"],
    ["decide", *STD11, *TUPLE, "--alpha", "0", "--beta", "1"],
    ["decide", "--group", "toeplitz", *TUPLE, "--alpha", "0", "--beta", "1", "--k", "0"],
    ["bogus"],
])
def test_usage_errors_exit_3(args, capsys):
    with pytest.raises(SystemExit) as exc:
        raise SystemExit(main(args))
    assert exc.value.code == 3


def test_toeplitz_and_standard_pair_agree(capsys):
    for beta, k in [(1, 0), (2, 1), (0, 0)]:
        for alpha in ("-1", "0", "1/2", "3"):
            tail = [*TUPLE, "--alpha", alpha, "--beta", str(beta), "--k", str(k)]
            t, _, _ = run(["decide", "--group", "toeplitz", "--delta", "1/2", *tail], capsys)
            s, _, _ = run(["decide", "--group", "standard", "--lambda1", "1/2", "--lambda2", "0", *tail], capsys)
            assert t == s


def test_exists_alpha_feeds_decide(capsys):
    code, out, _ = run(["exists-alpha", "--group", "toeplitz", "--delta", "-1", "--p", "1", "--q", "2",
                        "--beta", "0", "--k", "0"], capsys)
    assert code == 0
    alpha = out.strip()
    code, _, _ = run(["decide", "--group", "toeplitz", "--delta", "-1", "--p", "1", "--q", "2", "--r", "1",
                      "--alpha", alpha, "--beta", "0", "--k", "0"], capsys)
    assert code == 0
    code, out, _ = run(["exists-alpha", *STD11, "--p", "2", "--q", "2", "--beta", "2", "--k", "1"], capsys)
    assert code == 1 and out.strip() == "none"


def test_max_k(capsys):
    code, out, _ = run(["max-k", "--group", "standard", "--lambda1", "1", "--lambda2", "2", "--p", "2",
                        "--alpha", "2", "--beta", "2"], capsys)
    assert code == 0 and out.strip() == "1"


def test_json_round_trip(capsys):
    from shearlet_embed.verdict import Verdict
    _, out, _ = run(["decide", "--group", "standard", "--lambda1", "1", "--lambda2", "2", "--p", "2",
                     "--q", "4", "--r", "3", "--alpha", "2", "--beta", "2", "--k", "1", "--format", "json"], capsys)
    again = json.dumps(Verdict.from_dict(json.loads(out)).to_dict(), indent=2, ensure_ascii=False) + "\n"
    assert out == again


def test_sweep_rows_flip_as_lambda2_grows(capsys):
    code, out, err = run(["sweep", "--group", "standard", "--lambda1", "1", "--lambda2", "[1, 3/2, 2]",
                          "--p", "2", "--q", "2", "--r", "2", "--alpha", "2", "--beta", "2", "--k", "1"], capsys)
    assert code == 0 and "tuples: 3" in err
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == CSV_HEADER
    assert [r[12] for r in rows[1:]] == ["DoesNotEmbed", "DoesNotEmbed", "Embeds"]


def test_sweep_empty_lattice(capsys):
    code, out, _ = run(["sweep", "--group", "standard", "--lambda1", "[]", "--lambda2", "1",
                        "--p", "2", "--q", "2", "--r", "2", "--alpha", "0", "--beta", "1", "--k", "0"], capsys)
    assert code == 0
    assert out == ",".join(CSV_HEADER) + "\n"


def test_sweep_config_file_and_override(tmp_path, capsys):
    cfg = tmp_path / "sweep.cfg"
    cfg.write_text(
        "# lattice\n"
        "group = [standard, toeplitz]\n"
        "lambda1 = [1, 2]\nlambda2 = [2]\ndelta = [-1, 1/2]\n"
        "p = [1, 2]\nq = [2]\nr = [1, inf]\nalpha = [0, 3/2]\nbeta = [2]\nk = [0, 1]\n"
    )
    code, out1, _ = run(["sweep", "--config", str(cfg)], capsys)
    _, out2, _ = run(["sweep", "--config", str(cfg)], capsys)
    assert code == 0 and out1 == out2
    rows = list(csv.reader(io.StringIO(out1)))[1:]
    assert len(rows) == 4 * 2 * 2 * 2 * 2
    assert rows[0][:4] == ["standard", "1", "2", ""]
    assert rows[-1][:4] == ["toeplitz", "", "", "1/2"]
    code, out3, _ = run(["sweep", "--config", str(cfg), "--k", "[0]", "--format", "json"], capsys)
    data = json.loads(out3)
    assert len(data["rows"]) == 32 and data["columns"] == CSV_HEADER
    code, _, _ = run(["sweep", "--config", str(cfg), "--max-tuples", "10"], capsys)
    assert code == 3


def test_verify_single_point(capsys):
    code, out, _ = run(["verify", "--group", "standard", "--lambda1", "1", "--lambda2", "2",
                        "--a", "9/2", "--b", "3", "--theta", "1"], capsys)
    assert code == 0 and "Convergent" in out and "contradictions 0" in out


def test_verify_small_grid_json(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("SHEARLET_EMBED_WORKERS", "1")
    code, out, _ = run(["verify", "--group", "toeplitz", "--delta", "1", "--a", "6", "--b", "3",
                        "--theta", "4", "--format", "json"], capsys)
    data = json.loads(out)
    assert code == 0
    assert data["summary"]["contradictions"] == 0
    assert data["records"][0]["oracle"] == "Divergent"
    assert all(len(t.replace("-", "").split("e")[0].replace(".", "")) <= 17 for t in data["records"][0]["totals"])


def test_helpers(tmp_path):
    assert parse_list("[1, 3/2,2]") == ["1", "3/2", "2"]
    assert parse_list("[]") == []
    assert parse_list("inf") == ["inf"]
    cfg = tmp_path / "c.cfg"
    cfg.write_text("a-b = 1  # x\n\nc = [1]\n")
    assert read_config(str(cfg)) == {"a_b": "1", "c": "[1]"}


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "shearlet_embed", "decide", *STD11, *TUPLE,
                           "--alpha", "0", "--beta", "1", "--k", "1"], capture_output=True, text=True)
    assert proc.returncode == 1


def test_negative_rational_option_values(capsys):
    code, out, _ = run(["decide", "--group", "toeplitz", "--delta", "-1/2", "--p", "1", "--q", "2", "--r", "1",
                        "--alpha", "-3/2", "--beta", "1", "--k", "0", "--format", "json"], capsys)
    data = json.loads(out)
    assert data["group"]["delta"] == "-1/2" and data["params"]["alpha"] == "-3/2"
    assert code == 1 and data["case"] == "delta<0"
