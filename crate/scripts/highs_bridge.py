#!/usr/bin/env python3
"""Solve an LP-format file with HiGHS and write a pblin solution file.

Usage: highs_bridge.py MODEL.lp SOLUTION.sol

Set PBLIN_SOLVER_CMD='python3 scripts/highs_bridge.py {lp} {sol}'.
"""
import sys

import highspy


def main() -> int:
    if len(sys.argv) != 3:
        print(__doc__.strip(), file=sys.stderr)
        return 2
    lp_path, sol_path = sys.argv[1:]
    h = highspy.Highs()
    h.setOptionValue("output_flag", False)
    if h.readModel(lp_path) != highspy.HighsStatus.kOk:
        print(f"cannot read {lp_path}", file=sys.stderr)
        return 1
    h.run()
    status = h.modelStatusToString(h.getModelStatus()).lower().replace(" ", "_")
    with open(sol_path, "w") as out:
        out.write(f"=status= {status}\n")
        if h.getModelStatus() == highspy.HighsModelStatus.kOptimal:
            out.write(f"=obj= {h.getInfo().objective_function_value!r}\n")
            lp = h.getLp()
            values = h.getSolution().col_value
            for name, value in zip(lp.col_names_, values):
                out.write(f"{name} {value!r}\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
