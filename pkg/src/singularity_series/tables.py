"""Column-aligned text and JSON rendering of table rows."""

import json
import logging
from collections.abc import Sequence

from pydantic import BaseModel

from .dyckpath import rowmotion
from .gammamod import GermParams, delta_label, fundamental_domain
from .linkseries import gen_cogen_rows
from .springer import hikita_rows

logger = logging.getLogger(__name__)


class RowmotionRow(BaseModel):
    module: str
    label: list[int]
    image: str
    image_label: list[int]


def rowmotion_rows(params: GermParams) -> list[RowmotionRow]:
    domain = fundamental_domain(params)
    rows = []
    for delta in domain:
        image = rowmotion(delta, domain)
        rows.append(
            RowmotionRow(
                module=delta.label(),
                label=list(delta_label(delta)),
                image=image.label(),
                image_label=list(delta_label(image)),
            )
        )
    images = {row.image for row in rows}
    if len(images) != len(rows):
        msg = f"rowmotion on D_{params.n},{params.d} is not a bijection"
        raise RuntimeError(msg)
    return rows


TABLES = {
    "gen-cogen": gen_cogen_rows,
    "hikita": hikita_rows,
    "rowmotion": rowmotion_rows,
}


def build_table(name: str, params: GermParams) -> list[BaseModel]:
    if name not in TABLES:
        available = list(TABLES.keys())
        msg = f"Unsupported table: {name}. Available: {available}"
        raise ValueError(msg)
    return TABLES[name](params)


def _cell(value) -> str:
    if isinstance(value, list):
        return "(" + ",".join(str(v) for v in value) + ")"
    return str(value)


def render_text(rows: Sequence[BaseModel]) -> str:
    if not rows:
        return "(no rows)"
    columns = list(type(rows[0]).model_fields)
    cells = [[_cell(getattr(row, c)) for c in columns] for row in rows]
    widths = [max(len(c), *(len(r[i]) for r in cells)) for i, c in enumerate(columns)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(columns, widths, strict=True)).rstrip()]
    lines.append("  ".join("-" * w for w in widths))
    lines.extend("  ".join(v.ljust(w) for v, w in zip(r, widths, strict=True)).rstrip() for r in cells)
    return "\n".join(lines)


def render_json(rows: Sequence[BaseModel]) -> str:
    return json.dumps([row.model_dump(mode="json") for row in rows], indent=2)
