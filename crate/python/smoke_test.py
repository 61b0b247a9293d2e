"""Imports the compiled extension and exercises the main operations."""

import glob
import os
import shutil
import sys
import tempfile

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


def load():
    candidates = sorted(
        glob.glob(os.path.join(ROOT, "target", "*", "liburyson.so")),
        key=os.path.getmtime,
    )
    if not candidates:
        sys.exit("build the extension first: cargo build -p uryson-py")
    tmp = tempfile.mkdtemp()
    shutil.copy(candidates[-1], os.path.join(tmp, "uryson.so"))
    sys.path.insert(0, tmp)
    import uryson

    return uryson


def main():
    u = load()
    sc = u.Scenario.builtin()
    t, f = sc.operator("T"), sc.element("f")
    assert u.calc("pos", t, f).coords() == ["1/1"]
    assert t(u.Element([0, 0])).is_zero()

    a, s = sc.operator("A"), sc.operator("S")
    pi, sigma = u.band_project(a, s, f)
    assert pi.coords() == ["1/1", "0/1"] and sigma.coords() == ["0/1", "1/1"]
    pi_grid, _ = u.band_project(a, s, f, eps="1/1048576")
    assert pi_grid == pi

    k = u.Operator("ecseq:1", [[u.PiecewiseLinear.abs()]], tail=[u.PiecewiseLinear.abs()])
    cont, sing = u.decompose(k, u.Element.sequence([5], 3))
    assert cont.coords() == ["5/1"] and sing.coords() == ["3/1"]

    g = u.PiecewiseLinear([("-1", "2"), (0, 0), ("1/2", "1")], "0", "-1")
    assert g("-1/2") == "1/1" and g(3) == "-3/2"

    try:
        u.PiecewiseLinear([(0, 1)], 0, 0)
        u.Operator("finite:1", [[u.PiecewiseLinear([(0, 1)], 0, 0)]])
    except ValueError as e:
        assert "vanish" in str(e)
    else:
        raise AssertionError("kernel not vanishing at 0 was accepted")

    report = sc.verify("onedim", 7)
    assert '"failed":0' in report.splitlines()[-1]
    print("python smoke test passed")


if __name__ == "__main__":
    main()
