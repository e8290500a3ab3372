import subprocess
import sys
from pathlib import Path

BENCH = Path(__file__).resolve().parents[1] / "benchmarks" / "bench_rk4.py"


def test_benchmark_runs():
    r = subprocess.run([sys.executable, str(BENCH), "--steps", "200", "--dims", "4"],
                       capture_output=True, text=True, check=True)
    assert "us/step" in r.stdout
