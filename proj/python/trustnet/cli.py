import os
import subprocess
import sys
from pathlib import Path


def binary() -> Path:
    return Path(__file__).parent / "bin" / ("trustnet-sim.exe" if os.name == "nt" else "trustnet-sim")


def main() -> int:
    return subprocess.call([str(binary()), *sys.argv[1:]])


if __name__ == "__main__":
    sys.exit(main())
