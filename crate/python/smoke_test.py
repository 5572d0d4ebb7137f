"""Smoke test for the dualcx Python module.

Run ``python/build.sh`` first, then ``python3 python/smoke_test.py``.
"""

import math
import os
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import dualcx  # noqa: E402


def check(cond, what):
    if not cond:
        raise SystemExit(f"FAIL: {what}")
    print(f"ok   {what}")


def main():
    code, name = dualcx.validate_disk_condition((6, 6, 6))
    check(code == 0 and name.startswith("Base"), "(6,6,6) is a base condition")
    check(dualcx.validate_disk_condition((3, 3, 3))[0] == 1, "(3,3,3) is rejected")
    check(dualcx.triangle_shape((4, 6, 12)) == {"12": "1", "13": "3", "23": "4"}, "(4,6,12) side squares")

    cx = dualcx.Complex.seifert((6, 6, 6), 4)
    check(cx.disk_condition == (6, 6, 6) and cx.margin == 4, repr(cx))
    check(cx.check_link_condition(0)["passes"], "link condition at the base vertex")
    check(cx.structure()["simply_connected"], "patch is simply connected")
    again = dualcx.Complex.from_json(cx.to_json())
    check(again.to_json() == cx.to_json(), "json round trip")

    far = next(
        w
        for w in range(1, cx.num_vertices)
        if cx.is_interior(w) and math.isclose(float(dualcx.vertex_distance(cx, 0, w)), math.sqrt(7))
    )
    d = dualcx.vertex_distance(cx, 0, far)
    check(d == "sqrt(7)" and str(d) == "√7", "an exact distance of sqrt(7)")
    g = dualcx.geodesic(cx, 0, far)
    check(g["breakpoints"] == [0, far], "straight geodesic")

    radii = dualcx.critical_radii(cx, 0, 2)
    check([str(r) for r in radii] == ["1", "√3", "2"], "critical radii up to 2")
    check(dualcx.Radius("sqrt(3)") < 2 and dualcx.Radius(1) + "sqrt(3)" > "2", "exact comparisons")

    b = dualcx.ball(cx, 0, 1)
    sb = b["simplicial_ball"]
    check((len(sb["vertices"]), len(sb["edges"]), len(sb["faces"])) == (7, 12, 6), "simplicial ball of radius 1")
    check(dualcx.audit_sphere_lemmas(cx, 0, "3/2"), "sphere audit at 3/2")

    eps = dualcx.epsilon_for(cx, 0, 1)
    check(math.isclose(float(eps), (1 - math.sqrt(3) / 2) / 2, rel_tol=1e-12), "epsilon at r = 1")

    cert = dualcx.expand(cx, 0, 2)
    check([n for _, n in cert.stages()] == [6, 6, 6], "three stages of six cone steps")
    check(dualcx.verify(cx, cert) is None, "certificate verifies")
    text = cert.to_json().replace(cert.final_hashes()[0], "0" * 64, 1)
    reason = dualcx.verify(cx, dualcx.Certificate.from_json(text))
    check(reason is not None and "hash" in reason, "altered certificate is rejected")

    try:
        dualcx.expand(cx, 0, 4)
    except dualcx.DualcxError as e:
        check("frontier" in str(e), "radius beyond the margin is refused")
    else:
        raise SystemExit("FAIL: radius beyond the margin accepted")

    reg = dualcx.Complex.regular((6, 6, 6), (3, 3, 3), 2)
    check(reg.check_link_condition(0)["passes"], "order-3 complex satisfies the link condition")
    print("all smoke checks passed")


if __name__ == "__main__":
    main()
