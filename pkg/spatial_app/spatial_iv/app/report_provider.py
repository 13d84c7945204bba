import io
from abc import ABC
from typing import Optional

import matplotlib

matplotlib.use('Agg')

import matplotlib.pyplot as plt  # noqa: E402
import pandas as pd  # noqa: E402

from spatial_iv.model.benchmark_report import BenchmarkReport  # noqa: E402
from spatial_iv.model.data.dr_estimates import ErcCurve  # noqa: E402
from spatial_iv.model.data.spatial_basis import (  # noqa: E402
    ExposureDecomposition,
)

# fixed element ids, no timestamp
matplotlib.rcParams['svg.hashsalt'] = 'spatial-iv'
SVG_METADATA = {'Date': None}


def _svg(figure) -> str:
    buffer = io.StringIO()
    figure.savefig(buffer, format='svg', metadata=SVG_METADATA)
    plt.close(figure)
    return buffer.getvalue()


def _table(frame: pd.DataFrame) -> str:
    if frame.empty:
        return '(no rows)'
    return frame.to_string(index=False, float_format=lambda v: f"{v:.4f}")


class ReportProvider(ABC):
    def benchmark_table(self, report: BenchmarkReport) -> str:
        raise NotImplementedError()

    def results_table(self, title: str, frame: pd.DataFrame) -> str:
        raise NotImplementedError()

    def decomposition_summary(
        self,
        dec: ExposureDecomposition,
        dimension: Optional[int],
    ) -> str:
        raise NotImplementedError()

    def erc_summary(self, curve: ErcCurve) -> str:
        raise NotImplementedError()

    def sensitivity_svg(self, frame: pd.DataFrame) -> str:
        raise NotImplementedError()

    def erc_svg(self, curve: ErcCurve) -> str:
        raise NotImplementedError()


class ReportProviderImpl(ReportProvider):
    def benchmark_table(self, report: BenchmarkReport) -> str:
        columns = ['method', 'bias_x100', 'ref_bias_x100', 'rmse_x100',
                   'ref_rmse_x100', 'n_failed', 'band', 'passed']
        status = 'PASS' if report.passed else \
            f"FAIL ({', '.join(report.failing_methods())})"
        return (
            f"Benchmark at c={report.cutoff:g}, truth={report.truth:.6f} "
            f"(values x 10^2)\n"
            f"{_table(report.rows[columns])}\n"
            f"failed replicate rows: {report.failed_replicates}\n"
            f"bands: {status}"
        )

    def results_table(self, title: str, frame: pd.DataFrame) -> str:
        return f"{title}\n{_table(frame)}"

    def decomposition_summary(
        self,
        dec: ExposureDecomposition,
        dimension: Optional[int],
    ) -> str:
        basis = 'kriging smoother' if dec.basis is None else \
            f"{dec.basis.kind.value} basis"
        chosen = '' if dimension is None else f", dimension {dimension}"
        return (
            f"Decomposition ({basis}{chosen})\n"
            f"confounded variance share:  "
            f"{dec.confounded_variance_share:.4f}\n"
            f"instrument variance share:  "
            f"{dec.instrument_variance_share:.4f}"
        )

    def erc_summary(self, curve: ErcCurve) -> str:
        lines = [
            f"Exposure-response curve: {len(curve.table)} points, "
            f"bandwidth {curve.bandwidth:.4g}, "
            f"{curve.clamped_count} clamped pseudo-outcomes"
        ]
        if curve.risk_ratio is not None:
            lines.append(f"causal risk ratio: {curve.risk_ratio:.4f}")
        return '\n'.join(lines)

    def sensitivity_svg(self, frame: pd.DataFrame) -> str:
        figure, axes = plt.subplots(figsize=(6, 4))
        estimate = frame['psi'].to_numpy()
        axes.errorbar(
            frame['dimension'], estimate,
            yerr=[estimate - frame['ci_lo'].to_numpy(),
                  frame['ci_hi'].to_numpy() - estimate],
            fmt='o', capsize=4, color='black',
        )
        axes.set_xlabel('basis dimension')
        axes.set_ylabel('truncated effect')
        if len(frame):
            axes.set_title(f"{frame['family'].iloc[0]} sensitivity")
        figure.tight_layout()
        return _svg(figure)

    def erc_svg(self, curve: ErcCurve) -> str:
        table = curve.table
        figure, axes = plt.subplots(figsize=(6, 4))
        axes.fill_between(table['a'], table['ci_lo'], table['ci_hi'],
                          color='0.85', linewidth=0)
        axes.plot(table['a'], table['nu'], color='black')
        axes.set_xlabel('exposure')
        axes.set_ylabel('adjusted mean outcome')
        figure.tight_layout()
        return _svg(figure)
