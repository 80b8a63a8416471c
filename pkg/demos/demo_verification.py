"""Run a few verification suites and print their reports.

Run:  python3 demos/demo_verification.py
"""

import json

from parasphere.verify import cross_relation_check, run_suite


def show(report):
    doc = report.to_dict()
    print(f"== {doc['family']} (grid {doc['grid']}, seed {doc['seed']}) ==")
    for check in doc["checks"]:
        mark = "ok " if check["passed"] else "BAD"
        print(f"  [{mark}] {check['name']:34s} {check['max_residual']:.3e}")
    if doc["constants"]:
        print(f"  constants: {json.dumps(doc['constants'])}")
    print()


def main():
    for name in ("f1", "example-noninvolutive", "cp-ellipse-hyperbola",
                 "torus-quadric-n1"):
        show(run_suite(name, grid=3, seed=0))
    show(cross_relation_check("ellipse", "hyperbola"))


if __name__ == "__main__":
    main()
