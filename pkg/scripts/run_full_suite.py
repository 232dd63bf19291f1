"""Run every lemma scan on the default grids and write the JSON report.

    python3 scripts/run_full_suite.py [report.json] [--workers N]
"""

import argparse
import sys

from xistrip.cli import main

if __name__ == "__main__":
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("output", nargs="?", default="full_suite_report.json")
    parser.add_argument("--workers", default="1")
    args = parser.parse_args()
    sys.exit(main(["verify", "-o", args.output, "--workers", args.workers]))
