"""
Quick sanity check for the verification engine.
Runs the slant angle of the three worked examples with a handful of points and writes nothing.
"""

import sys

from src.cli import run_command

EXAMPLES = ("e3", "e4", "hor")


def run_examples(samples: int = 3) -> int:
    try:
        for name in EXAMPLES:
            code, document = run_command(["slant-angle", name, "--samples", str(samples), "--directions", "4"])
            verdict = document.results.get("verdict") if document is not None else None
            print(f"{name}: exit {code}, verdict {verdict}")
            if code != 0:
                return code
        return 0
    except Exception as e:
        print("Headless check failed:", repr(e))
        return 1


if __name__ == "__main__":
    sys.exit(run_examples())
