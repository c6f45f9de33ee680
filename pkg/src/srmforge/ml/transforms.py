"""Feature-matrix preprocessing fitted on training data and stored with models.

Numeric cells are z-scored with training-split statistics, binary cells pass
through, categorical cells expand to one-hot blocks. Fitting on the training
split only (and carrying the statistics inside the model) keeps evaluation
leakage-free.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..features import FeatureSchema


@dataclass(frozen=True)
class FeatureTransform:
    schema_version: str
    means: tuple[float, ...]          # one per numeric cell
    stds: tuple[float, ...]           # one per numeric cell; 0-variance -> 1.0
    kinds: tuple[str, ...]            # schema kinds, in order
    category_sizes: tuple[int, ...]   # widths for categorical cells, in order

    @property
    def output_width(self) -> int:
        width = 0
        cat = iter(self.category_sizes)
        for kind in self.kinds:
            width += next(cat) if kind == "categorical" else 1
        return width

    @staticmethod
    def fit(raw: np.ndarray, schema: FeatureSchema) -> "FeatureTransform":
        kinds = tuple(e.kind for e in schema.entries)
        numeric_cols = [i for i, k in enumerate(kinds) if k == "numeric"]
        means, stds = [], []
        for col in numeric_cols:
            column = raw[:, col]
            means.append(float(column.mean()))
            std = float(column.std())
            stds.append(std if std > 0 else 1.0)
        sizes = tuple(
            len(e.categories) for e in schema.entries if e.kind == "categorical"
        )
        return FeatureTransform(
            schema_version=schema.version,
            means=tuple(means),
            stds=tuple(stds),
            kinds=kinds,
            category_sizes=sizes,
        )

    def apply(self, raw: np.ndarray) -> np.ndarray:
        if raw.ndim == 1:
            raw = raw.reshape(1, -1)
        out = np.zeros((raw.shape[0], self.output_width))
        col_out = 0
        numeric_i = 0
        cat_i = 0
        for col_in, kind in enumerate(self.kinds):
            if kind == "numeric":
                out[:, col_out] = (raw[:, col_in] - self.means[numeric_i]) / self.stds[numeric_i]
                numeric_i += 1
                col_out += 1
            elif kind == "binary":
                out[:, col_out] = raw[:, col_in]
                col_out += 1
            else:
                width = self.category_sizes[cat_i]
                indices = raw[:, col_in].astype(int)
                out[np.arange(raw.shape[0]), col_out + indices] = 1.0
                cat_i += 1
                col_out += width
        return out

    def to_json(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "means": list(self.means),
            "stds": list(self.stds),
            "kinds": list(self.kinds),
            "category_sizes": list(self.category_sizes),
        }

    @staticmethod
    def from_json(data: dict) -> "FeatureTransform":
        return FeatureTransform(
            schema_version=data["schema_version"],
            means=tuple(data["means"]),
            stds=tuple(data["stds"]),
            kinds=tuple(data["kinds"]),
            category_sizes=tuple(data["category_sizes"]),
        )
