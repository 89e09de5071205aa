#!/usr/bin/env python3
"""Run both collapse pipelines over a range of n and dump the stage reports."""

import argparse
import json
import sys

from trispcat.graphs import pipeline_quotient_category, pipeline_quotient_trisp


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--min-n", type=int, default=3)
    parser.add_argument("--max-n", type=int, default=5)
    parser.add_argument("--endpoint-budget", type=float, default=300.0)
    parser.add_argument("--output", help="write the combined report here instead of stdout")
    args = parser.parse_args()

    reports = []
    for n in range(args.min_n, args.max_n + 1):
        report, _cert = pipeline_quotient_trisp(n, endpoint_budget=args.endpoint_budget)
        reports.append(report.to_json())
        print(f"quotient-trisp     n={n}: ok={report.ok} "
              f"({sum(s.seconds for s in report.stages):.2f}s)", file=sys.stderr)
        report, _steps = pipeline_quotient_category(n)
        reports.append(report.to_json())
        print(f"quotient-category  n={n}: ok={report.ok} "
              f"({sum(s.seconds for s in report.stages):.2f}s)", file=sys.stderr)

    text = json.dumps(reports, indent=2, sort_keys=True) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if all(r["ok"] for r in reports) else 1


if __name__ == "__main__":
    sys.exit(main())
