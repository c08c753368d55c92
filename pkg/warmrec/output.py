"""Output file management for warmrec"""

import csv
import json
from datetime import datetime
from pathlib import Path
from typing import Optional

from .evaluation import EvalReport


class OutputManager:
    """Manages writing evaluation outputs (CSV table, JSON detail)"""

    def __init__(self, csv_path: str):
        """
        Initialize output manager

        Args:
            csv_path: Path of the results CSV; the detail file sits next to it
        """
        self.csv_path = Path(csv_path)
        self.outdir = self.csv_path.parent
        self.stem = self.csv_path.stem

        self.details_path = self.outdir / f"{self.stem}.details.json"

        self.outdir.mkdir(parents=True, exist_ok=True)

    def write_csv(self, report: EvalReport, baseline: Optional[EvalReport] = None) -> None:
        """
        Write the plot-ready table ``n,precision_pct,coverage_pct``

        Args:
            report: Evaluation of the main mode
            baseline: Optional rule-only evaluation, written as extra columns
        """
        fieldnames = ["n", "precision_pct", "coverage_pct"]
        if baseline is not None:
            fieldnames += ["baseline_precision_pct", "baseline_coverage_pct"]

        with open(self.csv_path, 'w', newline='', encoding='utf-8') as f:
            writer = csv.DictWriter(f, fieldnames=fieldnames)
            writer.writeheader()
            for row in report.rows:
                record = {
                    "n": row.n,
                    "precision_pct": f"{row.precision_pct:.2f}",
                    "coverage_pct": f"{row.coverage_pct:.2f}",
                }
                if baseline is not None:
                    other = baseline.row_for(row.n)
                    record["baseline_precision_pct"] = f"{other.precision_pct:.2f}" if other else ""
                    record["baseline_coverage_pct"] = f"{other.coverage_pct:.2f}" if other else ""
                writer.writerow(record)

    def write_details(self, report: EvalReport, source: str = "",
                      skipped_sessions: int = 0, baseline: Optional[EvalReport] = None) -> None:
        """
        Write per-case detail and row metadata as JSON

        Args:
            report: Evaluation of the main mode
            source: Test log the cases came from
            skipped_sessions: Sessions too short to split into cases
            baseline: Optional rule-only evaluation
        """
        def rows(rep: EvalReport) -> list:
            return [
                {"n": r.n, "precision_pct": r.precision_pct, "coverage_pct": r.coverage_pct,
                 "valid_cases": r.valid_cases, "excluded_cases": r.excluded_cases}
                for r in rep.rows
            ]

        detail = {
            "source_file": Path(source).name if source else "",
            "timestamp": datetime.now().isoformat(),
            "mode": report.mode,
            "skipped_sessions": skipped_sessions,
            "rows": rows(report),
            "cases": report.details,
        }
        if baseline is not None:
            detail["baseline"] = {"mode": baseline.mode, "rows": rows(baseline), "cases": baseline.details}

        with open(self.details_path, 'w', encoding='utf-8') as f:
            json.dump(detail, f, indent=2)
