import json

import numpy as np
import pytest

from anosym import cli, lagrangians as lg, matrixio, symplectic
from anosym.symplectic import SymplecticSpace, line_subspace


@pytest.fixture()
def fuchsian_config(tmp_path):
    cfg = {"group": {"kind": "surface", "genus": 2}, "construction": "hitchin", "n": 1}
    p = tmp_path / "fuchsian.json"
    p.write_text(json.dumps(cfg))
    return str(p)


@pytest.fixture()
def product_ii_config(tmp_path):
    cfg = {"group": {"kind": "surface", "genus": 2}, "construction": "product",
           "epsilon": -1, "n": 1, "factors": ["fuchsian", "fuchsian"]}
    p = tmp_path / "prod.json"
    p.write_text(json.dumps(cfg))
    return str(p)


class TestCertify:
    def test_fuchsian_passes(self, fuchsian_config, tmp_path):
        rc = cli.main(["certify", "--config", fuchsian_config, "--i", "1",
                       "--Lmax", "4", "--count", "25", "--dyn-tests", "10",
                       "--out", str(tmp_path / "out"), "--seed", "3"])
        assert rc == cli.EXIT_PASS
        assert (tmp_path / "out" / "report.txt").exists()
        div = (tmp_path / "out" / "divergence.csv").read_text().splitlines()
        assert div[0].startswith("# anosym-csv v1")

    def test_product_alpha1_fails(self, product_ii_config, tmp_path):
        rc = cli.main(["certify", "--config", product_ii_config, "--i", "1",
                       "--Lmax", "4", "--count", "20", "--dyn-tests", "5",
                       "--out", str(tmp_path / "out2"), "--seed", "3"])
        assert rc == cli.EXIT_FAIL

    def test_malformed_config(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        rc = cli.main(["certify", "--config", str(bad), "--out", str(tmp_path / "o")])
        assert rc == cli.EXIT_CONFIG

    def test_determinism(self, fuchsian_config, tmp_path):
        outs = []
        for name in ("r1", "r2"):
            cli.main(["certify", "--config", fuchsian_config, "--i", "1",
                      "--Lmax", "4", "--count", "20", "--dyn-tests", "5",
                      "--out", str(tmp_path / name), "--seed", "11"])
            outs.append({f.name: f.read_bytes()
                         for f in sorted((tmp_path / name).iterdir())})
        assert outs[0] == outs[1]


class TestLimitset:
    def test_csv_and_svg(self, fuchsian_config, tmp_path):
        out = tmp_path / "ls.csv"
        svg = tmp_path / "ls.svg"
        rc = cli.main(["limitset", "--config", fuchsian_config, "--i", "1",
                       "--count", "40", "--Lmax", "4",
                       "--outfile", str(out), "--svg", str(svg), "--seed", "5"])
        assert rc == cli.EXIT_PASS
        lines = out.read_text().splitlines()
        assert lines[0] == "# anosym-csv v1 limitset"
        assert len(lines) == 2 + 40
        assert "<svg" in svg.read_text()

    def test_points_on_circle_in_chart(self, fuchsian_config, tmp_path):
        # RP^1 image: chart coordinates (cos 2t, sin 2t) lie on the unit circle
        out = tmp_path / "ls.csv"
        cli.main(["limitset", "--config", fuchsian_config, "--i", "1",
                  "--count", "30", "--Lmax", "4", "--outfile", str(out)])
        for line in out.read_text().splitlines()[2:]:
            parts = line.split(",")
            x, y = float(parts[-2]), float(parts[-1])
            assert abs(np.hypot(x, y) - 1.0) < 1e-8

    def test_empty_request(self, fuchsian_config, tmp_path):
        out = tmp_path / "empty.csv"
        rc = cli.main(["limitset", "--config", fuchsian_config, "--count", "0",
                       "--outfile", str(out)])
        assert rc == cli.EXIT_PASS
        lines = out.read_text().splitlines()
        assert len(lines) == 2


class TestClassify:
    def test_labels(self, tmp_path):
        sp = SymplecticSpace(1, "C")
        f1 = tmp_path / "lower.sub"
        matrixio.write_subspace_file(f1, line_subspace(sp, np.array([1.0, 1j]) / np.sqrt(2)))
        f2 = tmp_path / "real.sub"
        matrixio.write_subspace_file(f2, line_subspace(sp, np.array([1.0, 0.0], dtype=complex)))
        out = tmp_path / "cls.csv"
        rc = cli.main(["classify", "--input", str(f1), str(f2), "--outfile", str(out)])
        assert rc == cli.EXIT_PASS
        import csv as csv_mod
        rows = list(csv_mod.reader(out.read_text().splitlines()[2:]))
        assert rows[0][1] == "H^0_{0,1}"
        assert rows[1][1] == "R_n"

    def test_error_row_for_bad_input(self, tmp_path):
        sp = SymplecticSpace(2, "C")
        f = tmp_path / "notlag.sub"
        matrixio.write_subspace_file(
            f, line_subspace(sp, np.eye(4)[:, 0].astype(complex)))
        out = tmp_path / "cls.csv"
        rc = cli.main(["classify", "--input", str(f), "--outfile", str(out)])
        assert rc == cli.EXIT_PASS
        row = out.read_text().splitlines()[2]
        assert row.split(",")[1] == "error"


class TestDod:
    def test_r0_audit_and_candidate(self, tmp_path):
        cfg = {"group": {"kind": "surface", "genus": 2},
               "construction": "complexified-hitchin", "n": 1}
        cp = tmp_path / "c.json"
        cp.write_text(json.dumps(cfg))
        sp = SymplecticSpace(1, "C")
        cand = tmp_path / "cand.sub"
        matrixio.write_subspace_file(cand, line_subspace(sp, np.array([1.0, 1j]) / np.sqrt(2)))
        out = tmp_path / "dod.csv"
        rc = cli.main(["dod", "--config", str(cp), "--candidates", str(cand),
                       "--i", "1", "--count", "30", "--Lmax", "4",
                       "--r0-audit", "--audit-count", "10",
                       "--outfile", str(out), "--seed", "2"])
        assert rc == cli.EXIT_PASS
        lines = out.read_text().splitlines()
        audit_row = lines[2].split(",")
        assert audit_row[0] == "r0-audit" and audit_row[2] == "0"
        cand_row = lines[3].split(",")
        assert cand_row[1] == "outside"


class TestReduce:
    def test_reduce_words(self, fuchsian_config, capsys):
        rc = cli.main(["reduce", "--config", fuchsian_config, "a a' b"])
        assert rc == cli.EXIT_PASS
        assert capsys.readouterr().out.strip() == "b"
