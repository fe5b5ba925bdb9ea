import pytest

from app.schemas.config import BenchConfig
from app.services.bench import dump_bench, run_bench

# Holgura absoluta para celdas de pocos milisegundos, donde el ruido domina.
SLACK_SECONDS = 0.5


def test_bench_rows_follow_the_grid():
    rows = run_bench(BenchConfig(sizes=[2, 3], cases=[10], seed=1))
    assert [(row.size, row.cases) for row in rows] == [(2, 10), (3, 10)]
    assert dump_bench(rows).splitlines()[0] == "size,cases,seconds"


@pytest.mark.slow
def test_twenty_rules_ten_thousand_cases_under_a_minute():
    (row,) = run_bench(BenchConfig(sizes=[20], cases=[10_000], fact_probability=0.3))
    assert row.seconds < 60
    assert int(row.overall) > 0


@pytest.mark.slow
def test_runtime_grows_at_most_proportionally():
    sizes, cases = [10, 20, 40], [5_000, 10_000, 20_000]
    rows = run_bench(BenchConfig(sizes=sizes, cases=cases, fact_probability=0.3))
    seconds = {(row.size, row.cases): row.seconds for row in rows}

    # Doblar una dimensión de la rejilla como mucho duplica el tiempo, con margen 2×.
    for size in sizes:
        for small, large in zip(cases, cases[1:]):
            assert seconds[size, large] <= 4 * seconds[size, small] + SLACK_SECONDS
    for n_cases in cases:
        for small, large in zip(sizes, sizes[1:]):
            assert seconds[large, n_cases] <= 4 * seconds[small, n_cases] + SLACK_SECONDS
