#!/usr/bin/env python3
"""Smoke test for the qmf_py extension module.

Builds nothing itself: run `cargo build -p qmf-py --release` (or debug)
first, then `python3 python/smoke_test.py`. The script locates the cdylib
under target/, exposes it as an importable module, and checks a few exact
values end to end.
"""

import json
import pathlib
import shutil
import sys
import tempfile

ROOT = pathlib.Path(__file__).resolve().parent.parent


def locate_cdylib():
    candidates = [
        ROOT / "target" / "release" / "libqmf_py.so",
        ROOT / "target" / "debug" / "libqmf_py.so",
        ROOT / "target" / "release" / "libqmf_py.dylib",
        ROOT / "target" / "debug" / "libqmf_py.dylib",
    ]
    for c in candidates:
        if c.exists():
            return c
    sys.exit("build the extension first: cargo build -p qmf-py --release")


def main():
    lib = locate_cdylib()
    tmp = tempfile.mkdtemp(prefix="qmf_py_")
    shutil.copy(lib, pathlib.Path(tmp) / "qmf_py.so")
    sys.path.insert(0, tmp)
    import qmf_py

    # Eisenstein series coefficients
    e4 = qmf_py.eisenstein(4, prec=10)
    assert e4.coeff("0") == "1"
    assert e4.coeff("1") == "240"
    assert e4.coeff("2") == "2160"
    assert e4.coeff("10") is None  # beyond the precision window
    e2 = qmf_py.eisenstein(2, prec=5)
    assert str(e2).startswith("1 - 24*q - 72*q^2 - 96*q^3")

    # eta^24 = Delta
    delta = qmf_py.hauptmodul("delta", prec=12)
    assert qmf_py.eta(24, prec=12).agrees_with(delta)

    # Leibniz sanity through the operators exposed on Series
    e6 = qmf_py.eisenstein(6, prec=8)
    lhs = (e4 * e6).theta()
    rhs = e4.theta() * e6 + e4 * e6.theta()
    assert lhs.agrees_with(rhs)

    # Frobenius solution of the S4 example
    f1 = qmf_py.solve_mlde("D^2 - (1/18)*E4", "0", weight=2, prec=6)
    assert [f1.coeff(str(n)) for n in range(5)] == ["1", "24", "24", "96", "24"]

    # vvmf: the Klein quartic case, dual route agreement
    v = json.loads(qmf_py.vvmf(3, ["1/7", "2/7", "4/7"], prec=9))
    assert v["weight"] == 2
    assert v["exponents"] == ["1/7", "2/7", "4/7"]
    comp0 = qmf_py.vvmf_component(3, ["1/7", "2/7", "4/7"], 0, prec=9)
    assert comp0.coeff("1/7") == "1"
    assert comp0.coeff("8/7") == "-3"
    frob = qmf_py.solve_mlde(v["mlde"], "1/7", weight=2, prec=8)
    assert comp0.agrees_with(frob)

    # Eisenstein difference on Gamma(3)
    g1 = qmf_py.eis_difference(3, "0", "inf", prec=7)
    assert g1.coeff("0") == "1/3"
    assert g1.coeff("2/3") == "3"

    # the verification registry
    status, witness = qmf_py.verify("ramanujan")
    assert status == "verified" and witness is None
    status, witness = qmf_py.verify("exdeg5")
    assert status == "discrepancy-with-paper-print" and "9b" in witness
    assert "klein-quartic" in qmf_py.identities()

    # supersingular polynomial mod 13 is j - 5
    assert qmf_py.ss_poly(13) == [8, 1]

    # the Hilbert-Poincare dimension formula
    assert qmf_py.dim_formula([0], 12) == 2
    assert qmf_py.dim_formula([0], 2) == 0

    print("qmf_py smoke test: all checks passed")


if __name__ == "__main__":
    main()
