"""Build the `qmap` extension with cargo and exercise it from Python.

Usage: python3 python/smoke_test.py [--no-build]
"""

import json
import shutil
import subprocess
import sys
import sysconfig
import tempfile
from fractions import Fraction
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def build_and_stage() -> Path:
    if "--no-build" not in sys.argv:
        subprocess.run(
            ["cargo", "build", "--release", "-p", "qmap-py", "--features", "extension-module"],
            cwd=ROOT,
            check=True,
        )
    lib = ROOT / "target" / "release" / "libqmap.so"
    if not lib.exists():
        sys.exit(f"extension not found at {lib}")
    stage = Path(tempfile.mkdtemp(prefix="qmap-py-"))
    shutil.copy(lib, stage / ("qmap" + sysconfig.get_config_var("EXT_SUFFIX")))
    return stage


def main() -> None:
    sys.path.insert(0, str(build_and_stage()))
    import qmap

    p2 = qmap.Target.load("p2")
    assert p2.basis == ["1", "H", "H^2"], p2.basis
    assert p2.validate()["status"] == "ok"

    small = qmap.small_i(p2, 2)
    assert small.coefficient([1]) == {"-3": ["1", "0", "0"], "-4": ["0", "-3", "0"], "-5": ["0", "0", "6"]}

    shift = qmap.big_i(p2, 2, 3)
    operator = qmap.big_i(p2, 2, 3, path="operator")
    assert shift.to_json() == operator.to_json()

    out = qmap.birkhoff(qmap.big_i(p2, 2, 5))
    out.check_contract()
    flat = out.flatten()
    assert flat.coordinates == "flat"
    assert flat.invariant([2], [2, 2, 2, 2], "H^2") == 1

    assert qmap.p2_counts(3) == qmap.wdvv_p2(3) == [1, 1, 12]
    assert qmap.quintic_n1() == qmap.schubert_quintic_lines() == 2875
    assert qmap.cubic_surface_lines() == 27
    i0, i1 = qmap.hypergeom_quintic(2)
    assert i0 == [1, 120, 113400] and i1[1] == Fraction(770)

    checks = qmap.verify("quintic")
    assert all(c["pass"] for c in checks), checks

    code, stdout, _ = qmap.run_cli(["ifun", "--small", "-D", "1"])
    assert code == 0 and json.loads(stdout)["kind"] == "small"

    try:
        qmap.Target.from_json(json.dumps({**json.loads(open(ROOT / "crates/core/targets/p2.json").read()), "theta": ["-1"]}))
    except qmap.QmapError as e:
        assert str(e).startswith("empty-quotient"), e
    else:
        raise AssertionError("negative theta accepted")

    print("python smoke test: ok")


if __name__ == "__main__":
    main()
