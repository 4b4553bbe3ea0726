"""Regenerate src/axialforge/data/catalog.json.

For every catalog group, searches generator triples (involutions or the
identity) up to automorphisms and keeps each ordered triple that witnesses
an axet not seen before.  The result is pinned so later runs never search.
"""
from __future__ import annotations

import itertools
import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from catalog_groups import GROUPS, ORDERS  # noqa: E402

from axialforge import config  # noqa: E402
from axialforge.permgrp import Group, MarkedGroup, format_cycles, parse_cycles  # noqa: E402

OUT = Path(__file__).resolve().parents[1] / "src" / "axialforge" / "data" / "catalog.json"


def main() -> None:
    entries = []
    for name, (degree, gens) in GROUPS.items():
        g = Group([parse_cycles(c, degree) for c in gens], degree)
        assert len(g) == ORDERS[name], name
        autos = g.automorphism_list
        invs = [0] + [i for i, o in enumerate(g.element_orders) if o == 2]
        seen_triples = set()
        seen_axets = set()
        for tr in itertools.combinations_with_replacement(invs, 3):
            if len(g.generate(tr)) != len(g):
                continue
            key = min(tuple(sorted(phi[t] for t in tr)) for phi in autos)
            if key in seen_triples:
                continue
            seen_triples.add(key)
            for perm in sorted(set(itertools.permutations(tr))):
                mg = MarkedGroup(name, g, perm)
                patterns = []
                for ax in config.enumerate_axets(mg):
                    k = config.axet_key(g, ax.orbit_types)
                    if k in seen_axets or not config.enumerate_shapes(ax, dedupe=False):
                        continue
                    seen_axets.add(k)
                    patterns.append(ax.pattern)
                if patterns:
                    entries.append({
                        "name": name,
                        "degree": degree,
                        "order": len(g),
                        "group_gens": gens,
                        "gens": [format_cycles(g.elements[t]) for t in perm],
                        "axes_patterns": sorted(patterns, key=lambda p: (len(p), p)),
                    })
                    print(name, entries[-1]["gens"], entries[-1]["axes_patterns"])
    OUT.write_text(json.dumps(entries, indent=1) + "\n")


if __name__ == "__main__":
    main()
