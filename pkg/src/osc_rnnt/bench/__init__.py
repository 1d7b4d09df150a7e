from osc_rnnt.bench.runner import BenchCell, BenchReport, bench_grid, run_bench, time_decode

__all__ = ["BenchCell", "BenchReport", "bench_grid", "run_bench", "time_decode"]
