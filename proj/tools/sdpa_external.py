#!/usr/bin/env python3
"""Solve an SDPA sparse file with SDPA (through the sdpap bindings) and print
the objective values in SDPA's own orientation:

    objValPrimal = <value>
    objValDual   = <value>

Exit status 3 when the solver does not report an optimal solution.
"""

import contextlib
import io
import sys

import sdpap


def main(argv):
    if len(argv) != 2:
        print("usage: sdpa_external.py FILE.dat-s", file=sys.stderr)
        return 2
    A, b, c, K, J = sdpap.importsdpa(argv[1])
    with contextlib.redirect_stdout(io.StringIO()), contextlib.redirect_stderr(io.StringIO()):
        x, y, sdpapinfo, timeinfo, sdpainfo = sdpap.solve(A, b, c, K, J, {"print": "no"})
    # importsdpa flips the sign of the objective, so the values come back as
    # the optimum of the maximisation; negate to SDPA's orientation.
    primal = -float(sdpapinfo["primalObj"])
    dual = -float(sdpapinfo["dualObj"])
    print("phase.value  = %s" % sdpapinfo.get("phasevalue", "?"))
    print("objValPrimal = %.16e" % primal)
    print("objValDual   = %.16e" % dual)
    return 0 if sdpapinfo.get("phasevalue") == "pdOPT" else 3


if __name__ == "__main__":
    sys.exit(main(sys.argv))
