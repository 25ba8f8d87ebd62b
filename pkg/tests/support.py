"""Lookup and scripting helpers shared by the test modules"""

import json
from typing import Dict, Iterable, List, Optional

from models.cfg_graph import Cfg
from models.partition import Partition


def node_id(cfg: Cfg, label_prefix: str) -> int:
    """Id of the only node whose label starts with the prefix"""
    matches = [node.id for node in cfg.nodes if node.label.startswith(label_prefix)]
    assert len(matches) == 1, f"{label_prefix!r} matches {matches}"
    return matches[0]


def partition_where(partitions: List[Partition], covers: Iterable[int] = (), avoids: Iterable[int] = ()) -> Partition:
    """Only partition covering every id in `covers` and none in `avoids`"""
    covers, avoids = set(covers), set(avoids)
    matches = [p for p in partitions if covers <= p.coverage and not (avoids & p.coverage)]
    assert len(matches) == 1, f"{len(matches)} partitions match"
    return matches[0]


def script_for(fingerprints: Iterable[str], default: str = "PASS",
               overrides: Optional[Dict[str, str]] = None) -> Dict[str, str]:
    script = {fp: default for fp in fingerprints}
    script.update(overrides or {})
    return script


def write_script(path, script: Dict[str, str]) -> str:
    path.write_text(json.dumps(script), encoding='utf-8')
    return str(path)
