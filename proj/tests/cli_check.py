"""Run a CLI command and check its exit status, or that two runs print the same bytes.

usage: cli_check.py exit CODE cmd...
       cli_check.py same cmd...
"""

import subprocess
import sys


def main(argv):
    mode = argv[1]
    if mode == "exit":
        want = int(argv[2])
        got = subprocess.run(argv[3:], capture_output=True).returncode
        if got != want:
            print(f"exit status {got}, expected {want}")
            return 1
        return 0
    if mode == "same":
        a = subprocess.run(argv[2:], capture_output=True, check=True).stdout
        b = subprocess.run(argv[2:], capture_output=True, check=True).stdout
        if a != b:
            print("outputs differ between runs")
            return 1
        return 0
    print(f"unknown mode {mode}")
    return 1


if __name__ == "__main__":
    sys.exit(main(sys.argv))
