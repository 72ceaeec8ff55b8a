import json
import subprocess
import sys

import numpy as np
import pytest

from fockwitness.cli import main
from fockwitness.serialize import dump_state, load_state
from fockwitness import pattern_state, phi_partition, tensor


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


def test_partition_json(capsys):
    doc = run_json(capsys, "partition", "-M", "4")
    assert [r["probability_exact"] for r in doc["partitions"]] == ["1/16", "1/4", "3/8", "1/4", "1/16"]
    assert doc["zero_photons_at_A_or_B"] == "1/8"
    assert doc["usable_entanglement"] == "7/8"


def test_partition_csv(capsys):
    code, out, _ = run(capsys, "partition", "-M", "4", "--format", "csv")
    lines = out.strip().splitlines()
    assert code == 0 and lines[0].startswith("N_A,N_B,probability")
    assert lines[3].split(",")[2] == "0.375"


def test_generate_round_trip(tmp_path, capsys):
    path = tmp_path / "psi.json"
    assert main(["generate", "-M", "4", "-o", str(path)]) == 0
    psi = load_state(path)
    assert psi.norm() == pytest.approx(1, abs=1e-12)
    doc = run_json(capsys, "probabilities", "--state", str(path), "-N", "2")
    nz = np.array(doc["probabilities"])
    # post-selected on the (2, 2) partition, hence renormalized
    assert np.count_nonzero(nz > 1e-12) == 6
    assert doc["total"] == pytest.approx(1, abs=1e-12)


def test_generate_partition_state(tmp_path, capsys):
    path = tmp_path / "phi.json"
    assert main(["generate", "-M", "4", "-N", "2", "-o", str(path)]) == 0
    state = load_state(path)
    assert np.allclose(state.amplitudes, phi_partition(4, 2).amplitudes)
    doc = run_json(capsys, "witness", "--state", str(path))
    assert doc["witness_value_exact"] == "2/3"


def test_ideal_input_basis(capsys):
    doc = run_json(capsys, "probabilities", "-M", "4", "-N", "2")
    p = np.array(doc["probabilities"])
    assert np.count_nonzero(p > 1e-12) == 6
    assert np.allclose(p[p > 1e-12], 1 / 6, atol=1e-10)
    assert doc["row_order"][:4] == ["2000", "0200", "0020", "0002"]
    assert doc["canonical_row_order"][0] == "2000"
    assert doc["total"] == pytest.approx(1)


def test_ideal_dft_basis_K_blocks(capsys):
    doc = run_json(capsys, "probabilities", "-M", "4", "-N", "2", "--basis", "dft")
    p = np.array(doc["probabilities"])
    rows = [(int(b["label"][2:]), b["size"]) for b in doc["row_blocks"]]
    cols = [(int(b["label"][2:]), b["size"]) for b in doc["col_blocks"]]
    r0 = 0
    for ka, na in rows:
        c0 = 0
        for kb, nb in cols:
            mass = p[r0:r0 + na, c0:c0 + nb].sum()
            if (ka + kb) % 4:
                assert mass < 1e-12
            c0 += nb
        r0 += na
    assert doc["total"] == pytest.approx(1, abs=1e-12)


def test_product_state_dft_flat(tmp_path, capsys):
    path = tmp_path / "prod.json"
    dump_state(tensor(pattern_state("1100"), pattern_state("0011")), path)
    doc = run_json(capsys, "probabilities", "--state", str(path), "--basis", "dft")
    p = np.array(doc["probabilities"])
    big = p[p > 1e-12]
    assert len(big) == 64 and np.allclose(big, 1 / 64, atol=1e-12)


def test_probabilities_csv(capsys):
    code, out, _ = run(capsys, "probabilities", "-M", "4", "-N", "2", "--format", "csv")
    lines = out.splitlines()
    assert code == 0
    assert lines[0] == "# basis: input"
    header = next(l for l in lines if l.startswith("A\\B"))
    assert len(header.split(",")) == 11
    data = [l.split(",") for l in lines if l and not l.startswith(("#", "A\\B"))]
    values = np.array([[float(v) for v in row[1:]] for row in data])
    assert values.sum() == pytest.approx(1, abs=1e-10)


def test_witness_noise(capsys):
    doc = run_json(capsys, "witness", "-M", "4", "-N", "2", "--noise-p", "0.5")
    assert doc["noise"]["witness_value"] == pytest.approx(0.5 * (2 / 3 + 0.74) - 0.74, abs=1e-12)
    assert doc["noise"]["witness_value"] == pytest.approx(-0.0367, abs=1e-4)
    doc = run_json(capsys, "witness", "-M", "4", "-N", "2", "--noise-p", "1.0")
    assert doc["noise"]["witness_value"] == pytest.approx(2 / 3, abs=1e-12)
    assert doc["noise"]["threshold"] == pytest.approx(0.5261, abs=1e-4)


def test_witness_samples(capsys):
    doc = run_json(capsys, "witness", "-M", "4", "-N", "2", "--samples", "20", "--seed", "3")
    assert doc["separable_samples"]["max_witness_value"] <= 1e-9


def test_bounds(capsys):
    doc = run_json(capsys, "bounds", "-M", "4", "-N", "2")
    assert doc["basic_bound_exact"] == "3/2"
    assert doc["basic_fidelity_threshold_exact"] == "3/4"
    assert doc["tight_fidelity_threshold_exact"] == "9/13"
    assert doc["witness_max_eigenvalue"] == pytest.approx(0.75, abs=1e-9)


def test_classes(capsys):
    doc = run_json(capsys, "classes", "-M", "4", "-N", "2")
    reps = {c["representative"]: c for c in doc["classes"]}
    assert set(reps) == {"2000", "1100", "1010"}
    assert reps["1010"]["allowed_K"] == [0, 2]
    assert reps["1100"]["complementary"] == "1100"
    assert reps["2000"]["complementary"] is None


@pytest.mark.parametrize("pattern,M", [("1111", 4), ("111", 3), ("2,2", 2), ("111111", 6)])
def test_suppression_holds(capsys, pattern, M):
    doc = run_json(capsys, "suppression", "-M", str(M), pattern)
    assert doc["suppression_applies"]
    assert doc["violations"] == []
    assert doc["max_K_nonzero_probability"] < 1e-12


def test_suppression_no_claim(capsys):
    doc = run_json(capsys, "suppression", "-M", "4", "1100")
    assert not doc["suppression_applies"]
    assert doc["K_nonzero_total"] > 0.5


def test_dump_unitary(tmp_path, capsys):
    path = tmp_path / "u.json"
    run_json(capsys, "suppression", "-M", "4", "1111", "--dump-unitary", str(path))
    doc = json.loads(path.read_text())
    u = np.array(doc["fock_unitary"])
    u = u[..., 0] + 1j * u[..., 1]
    assert u.shape == (35, 35)
    assert np.abs(u.conj().T @ u - np.eye(35)).max() < 1e-9
    assert doc["basis"][0] == "4000"


@pytest.mark.parametrize("argv,code", [
    (["generate", "-M", "4", "-N", "5"], 2),
    (["generate", "-M", "13"], 3),
    (["generate"], 2),
    (["probabilities", "-M", "4"], 2),
    (["bounds", "-M", "4", "-N", "0"], 2),
    (["suppression", "-M", "4", "11x1"], 2),
    (["suppression", "-M", "3", "1111"], 2),
    (["witness", "-M", "4", "-N", "2", "--noise-p", "1.5"], 2),
    (["witness", "--state", "/nonexistent/state.json"], 3),
])
def test_exit_codes(capsys, argv, code):
    assert main(argv) == code
    assert "error" in capsys.readouterr().err


def test_bad_json_is_resource_error(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    assert main(["witness", "--state", str(path)]) == 3


def test_dimension_cap(monkeypatch, capsys):
    monkeypatch.setenv("FOCKWITNESS_MAX_DIM", "50")
    assert main(["probabilities", "-M", "4", "-N", "2"]) == 3
    monkeypatch.setenv("FOCKWITNESS_MAX_DIM", "100")
    assert main(["probabilities", "-M", "4", "-N", "2"]) == 0


def test_argparse_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["nonsense"])
    assert exc.value.code == 2


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "fockwitness", "bounds", "-M", "3", "-N", "1"],
                         capture_output=True, text=True, check=True)
    assert json.loads(out.stdout)["basic_bound_exact"] == "4/3"
