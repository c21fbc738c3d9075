from quadratise.bench import SweepConfig, run_sweep, terms_scaling_report
from quadratise.plotting import render_bench_figures, render_scaling_figure


def test_bench_figures_are_written(tmp_path):
    records = run_sweep(
        SweepConfig(
            n_values=[6, 8],
            densities=[0.3, 0.6],
            algorithms=["lsr-q1.0", "lsr-q0.0", "base-sparse"],
            seeds=[0],
            degree=3,
        ),
        None,
    )
    paths = render_bench_figures(records, tmp_path / "figs")
    assert len(paths) == 3
    for path in paths:
        assert path.exists()
        assert path.stat().st_size > 1000


def test_scaling_figure_is_written(tmp_path):
    rows = terms_scaling_report(range(2, 16), range(2, 7))
    path = render_scaling_figure(rows, tmp_path / "scaling.png")
    assert path.exists()
    assert path.stat().st_size > 1000
