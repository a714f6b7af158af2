"""Built-in fixture documents: the extremal families plus a few explicit specs."""

import json
from pathlib import Path
from typing import Dict, List, Union

from app.ds.meromorphic import make_meromorphic, to_spec
from app.exceptions import ReportIOError
from app.logger import logger


def gallery_documents() -> Dict[str, dict]:
    """name -> JSON document, in a fixed order."""
    simple_pole = to_spec(make_meromorphic(0.5, [1.0]))
    simple_pole["params"] = {"k": 0.4, "r": 0.75}
    double_pole = to_spec(make_meromorphic(0.2, [0.0, 1.0], [0.0, 0.05]))
    double_pole["params"] = {"k": 0.5, "criteria": ["area", "first_coefficient", "sufficient"]}
    single_coefficient = {"pole": {"p": 0.3, "m": 1, "principal": [[1.0, 0.0]]}, "taylor": [[0.0, 0.0], [0.4, 0.0]]}
    return {
        "extremal_area_k0.4_p0.3": {
            "family": {"name": "extremal_area", "k": 0.4, "p": 0.3},
            "params": {"k": 0.4},
        },
        "extremal_extension_k0.4_p0.3": {
            "family": {"name": "extremal_extension", "k": 0.4, "p": 0.3},
            "params": {"k": 0.4},
        },
        "schwarzian_f0_k0.5": {"family": {"name": "schwarzian_f0", "k": 0.5}},
        "schwarzian_fp_k0.5_p0.3": {"family": {"name": "schwarzian_fp", "k": 0.5, "p": 0.3}},
        "simple_pole_p0.5": simple_pole,
        "double_pole_p0.2": double_pole,
        "hadamard_p0.3": {
            "left": single_coefficient,
            "right": single_coefficient,
            "params": {"k1": 0.4, "k2": 0.4},
        },
        "harmonic_disk": {
            "h": [[0.0, 0.0], [1.0, 0.0]],
            "g": [[0.0, 0.0], [0.0, 0.0], [0.15, 0.0]],
            "domain": {"kind": "disk", "center": [0.0, 0.0], "radius": 1.0},
            "params": {"k": 0.45},
        },
    }


def write_gallery(output_dir: Union[str, Path]) -> List[Path]:
    """One <name>.json per gallery document."""
    output_dir = Path(output_dir)
    paths = []
    for name, document in gallery_documents().items():
        path = output_dir / f"{name}.json"
        try:
            path.write_text(json.dumps(document, indent=2, sort_keys=True) + "\n", encoding="utf-8")
        except OSError as e:
            raise ReportIOError(path, str(e)) from e
        paths.append(path)
    logger.info(f"Wrote {len(paths)} gallery fixture(s) to {output_dir}")
    return paths
