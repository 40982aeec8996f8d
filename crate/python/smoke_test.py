"""Smoke test for the cubforge extension module.

Loads the shared library built by `cargo build -p cubforge-python` (building
it first if needed) and checks a few published values end to end.
"""

import importlib.util
import pathlib
import shutil
import subprocess
import sys
import sysconfig
import tempfile

ROOT = pathlib.Path(__file__).resolve().parent.parent


def find_library():
    for profile in ("release", "debug"):
        for name in ("libcubforge.so", "libcubforge.dylib", "cubforge.dll"):
            path = ROOT / "target" / profile / name
            if path.exists():
                return path
    return None


def load():
    lib = find_library()
    if lib is None:
        subprocess.run(["cargo", "build", "-p", "cubforge-python"], cwd=ROOT, check=True)
        lib = find_library()
    suffix = sysconfig.get_config_var("EXT_SUFFIX") or ".so"
    target = pathlib.Path(tempfile.mkdtemp()) / f"cubforge{suffix}"
    shutil.copy(lib, target)
    spec = importlib.util.spec_from_file_location("cubforge", target)
    module = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(module)
    return module


def main():
    cf = load()

    x = cf.ExactScalar("3 + 2*sqrt(2)")
    y = cf.ExactScalar("3 - 2*sqrt(2)")
    assert str(x * y) == "1", x * y
    assert (x - x).sign() == 0
    assert cf.ExactScalar("1 - sqrt(2)").sign() == -1
    assert abs(float(x) - 5.828427124746190) < 1e-12

    sol = cf.solve_degree4(5, [6, 1, 2, 3], 5, "4")
    assert sol.weights == ["0", "1/112", "0", "15/56", "81/112"], sol.weights
    assert sol.positive
    assert sol.rule.node_count == 32
    assert sol.rule.verify() and sol.rule.is_sharp()
    again = cf.Rule.from_json(sol.rule.to_json())
    assert again.weights == sol.rule.weights

    sol5 = cf.solve_degree5(3, [4, 1, 2, 3, 4], 3)
    assert sol5.a == "5" and sol5.rule.node_count == 19

    sphere = cf.solve_degree4(3, [4, 1, 2, 3], 2, "4", gamma="-1/2").rule.to_sphere(antipodal=True)
    assert sphere.node_count == 72
    assert cf.identity_from_rule(sphere, 4).startswith("lhs: 5040 * sum_squares(4) ^ 4")

    ten = cf.solve_degree4(10, [11, 1, 2, 5], 10, "5").rule
    # Orbits: centroid, vertices, v5, u (the zero edge orbit is dropped).
    reduced = ten.reduce_with_bundled_design(2)
    assert reduced.node_count == 89 and reduced.verify()

    assert cf.obstruction("-1/2") == "a = 7/3 vs a^2 - 6a + 1 = 0: inconsistent"
    assert all(cf.p4_holds(d, g) for d in range(1, 31) for g in ("0", "-1/2"))
    assert cf.check_identity("hurwitz")
    assert not cf.check_identity("schur-as-printed")

    try:
        cf.solve_degree4(5, [6, 1, 2, 3], 5, "1")
    except ValueError as e:
        assert "a = 1" in str(e)
    else:
        raise AssertionError("a = 1 accepted")

    print("smoke test passed")


if __name__ == "__main__":
    sys.exit(main())
