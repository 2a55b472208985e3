from pathlib import Path
from typing import Dict, List, Optional
import csv
import json


class RunReport:
    def __init__(
        self,
        config: Dict,
        results: Dict,
        oracle: Dict,
        timing: Dict,
        version: str,
        seed: int,
        series: Optional[List[Dict]] = None
    ):
        """
        Initialize a RunReport instance.

        Args:
            config: Echo of the experiment config
            results: Per-point results under "points" plus run-level summaries
            oracle: Exact reference values for the run
            timing: Wall-clock seconds per phase; not part of the reproducible payload
            version: Library version
            seed: Master seed
            series: Flat rows for the CSV view
        """
        self.config = config
        self.results = results
        self.oracle = oracle
        self.timing = timing
        self.version = version
        self.seed = seed
        self.series = series or []

    def to_dict(self) -> Dict:
        return {
            'config': self.config,
            'results': self.results,
            'oracle': self.oracle,
            'timing': self.timing,
            'version': self.version,
            'seed': self.seed
        }

    def numeric_payload(self) -> Dict:
        """Everything except timing; identical for identical (config, seed)."""
        data = self.to_dict()
        del data['timing']
        return data

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def write_json(self, path: str) -> Path:
        out = Path(path)
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(self.to_json(), encoding='utf-8')
        return out

    def write_csv(self, path: str) -> Path:
        """Write the flat series; columns are the union of row keys in first-seen order."""
        out = Path(path)
        out.parent.mkdir(parents=True, exist_ok=True)
        fields: List[str] = []
        for row in self.series:
            fields.extend(k for k in row if k not in fields)
        with out.open('w', newline='', encoding='utf-8') as f:
            writer = csv.DictWriter(f, fieldnames=fields)
            writer.writeheader()
            writer.writerows(self.series)
        return out

    def __str__(self) -> str:
        return f"RunReport({self.config.get('experiment')}, points={len(self.results.get('points', []))}, seed={self.seed})"
