import os
import subprocess
from pathlib import Path

import pytest

CLI = os.environ.get("QPP_CLI")
SEED = "000102030405060708090a0b0c0d0e0f"

pytestmark = pytest.mark.skipif(not CLI, reason="QPP_CLI not set")


def run(*args, stdin=None, check=True):
    proc = subprocess.run([CLI, *args], input=stdin, capture_output=True)
    if check:
        assert proc.returncode == 0, proc.stderr.decode()
    return proc


def make_key(tmp_path: Path, name="key.qppk", seed=SEED, n=64, m=16):
    path = tmp_path / name
    run("keygen", "--n", str(n), "--m", str(m), "--seed", seed, "-o", str(path))
    return path


def test_keygen_is_deterministic(tmp_path):
    a = make_key(tmp_path, "a.qppk")
    b = make_key(tmp_path, "b.qppk")
    assert a.read_bytes() == b.read_bytes()
    assert a.read_bytes().hex().startswith("5150504b01")


def test_roundtrip_via_files_and_stdio(tmp_path):
    key = make_key(tmp_path)
    data = os.urandom(1 << 20)
    (tmp_path / "msg").write_bytes(data)
    run("encrypt", "-k", str(key), "-i", str(tmp_path / "msg"), "-o", str(tmp_path / "c"))
    run("decrypt", "-k", str(key), "-i", str(tmp_path / "c"), "-o", str(tmp_path / "out"))
    assert (tmp_path / "out").read_bytes() == data

    container = run("encrypt", "-k", str(key), stdin=data).stdout
    assert run("decrypt", "-k", str(key), stdin=container).stdout == data


def test_exit_codes(tmp_path):
    key = make_key(tmp_path)
    other = make_key(tmp_path, "other.qppk", seed="ff" * 16)
    container = run("encrypt", "-k", str(key), stdin=b"payload").stdout

    assert run("keygen", "--n", "12", "-o", str(tmp_path / "x"), check=False).returncode == 2
    assert run("decrypt", "-k", str(other), stdin=container, check=False).returncode == 3
    assert run("decrypt", "-k", str(key), stdin=container[:10], check=False).returncode == 4
    bad_image = tmp_path / "ascii.pgm"
    bad_image.write_bytes(b"P2\n1 1\n255\n0\n")
    proc = run("demo-image", "--image", str(bad_image), "--out-dir", str(tmp_path / "d"),
               "--seed", SEED, check=False)
    assert proc.returncode == 5
    assert run("encrypt", "-k", str(tmp_path / "missing.qppk"), stdin=b"", check=False
               ).returncode == 6


def test_no_partial_output_on_error(tmp_path):
    key = make_key(tmp_path)
    other = make_key(tmp_path, "other.qppk", seed="ee" * 16)
    container = run("encrypt", "-k", str(key), stdin=b"payload").stdout
    target = tmp_path / "never.bin"
    proc = run("decrypt", "-k", str(other), "-o", str(target), stdin=container, check=False)
    assert proc.returncode == 3
    assert not target.exists()


def test_analyze_text_and_tsv():
    text = run("analyze", "--n", "4096", "--p", "1").stdout.decode()
    assert "1/4096" in text and "below 0.025%: yes" in text

    exact = run("analyze", "--n", "4", "--p", "1", "--m", "2", "--exhaustive").stdout.decode()
    assert "5/92" in exact

    tsv = run("analyze", "--n", "2048", "--m", "256", "--format", "tsv").stdout.decode()
    header, row = tsv.strip().splitlines()
    assert header.split("\t") == [
        "n", "p", "m", "exact_log10", "approx_log10", "observed_rate", "trials", "stderr",
    ]
    assert row.split("\t")[0] == "2048"
    assert abs(float(row.split("\t")[4]) + 847.700468) < 1e-4


def test_demo_image_outputs(tmp_path):
    out = tmp_path / "demo"
    result = run("demo-image", "--benchmark", "--dims", "64", "--m", "16",
                 "--seed", SEED, "--out-dir", str(out)).stdout.decode()
    assert (out / "cipher_n64.pgm").exists()
    assert (out / "original.pgm").exists()
    assert (out / "metrics.tsv").read_text().count("\n") == 2  # header + one row
    assert "collision_fraction" in result


def test_demo_image_default_dims(tmp_path):
    out = tmp_path / "panel"
    run("demo-image", "--benchmark", "--seed", SEED, "--out-dir", str(out))
    for dim in (64, 256, 1024, 2048, 8192):
        assert (out / f"cipher_n{dim}.pgm").exists()
