#!/usr/bin/env python3
"""Smoke test for the migmap Python bindings.

Builds nothing itself: run `cargo build -p migmap-py` first, then
`python3 python/smoke_test.py`. The script locates the compiled extension
under target/, imports it, and replays the bundled json -> gson fixture
through the substitution engine.
"""

import shutil
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def import_bindings():
    """Copy the built cdylib next to a temp dir as an importable module."""
    candidates = [
        ROOT / "target" / profile / name
        for profile in ("release", "debug")
        for name in ("libmigmap_py.so", "libmigmap_py.dylib", "migmap_py.dll")
    ]
    built = next((p for p in candidates if p.exists()), None)
    if built is None:
        sys.exit("extension not built; run: cargo build -p migmap-py")
    stage = Path(tempfile.mkdtemp(prefix="migmap-py-"))
    suffix = ".pyd" if built.suffix == ".dll" else ".so"
    shutil.copy2(built, stage / f"migmap_py{suffix}")
    sys.path.insert(0, str(stage))
    import migmap_py

    return migmap_py


def main():
    m = import_bindings()
    print(f"migmap_py {m.__version__} loaded")

    fixtures = ROOT / "fixtures"
    source = m.Catalog.load(str(fixtures / "catalogs" / "json.catalog"))
    target = m.Catalog.load(str(fixtures / "catalogs" / "gson.catalog"))
    assert len(source) > 0 and len(target) > 0
    assert source.contains("getString", 1)
    assert "string" in source.description("getString", 1).lower()
    assert target.description("noSuchMethod", 3) is None

    # The bundled fixture must resolve into the six known mappings.
    fragments = m.read_fragments(
        str(fixtures / "fragments" / "json-gson.fragments.jsonl")
    )
    assert len(fragments) == 4, fragments
    mappings, stats = m.substitution(fragments, source=source, target=target)
    got = sorted((tuple(x.removed), tuple(x.added), x.support) for x in mappings)
    expected = sorted(
        [
            (("get/1",), ("getAsLong/0",), 2),
            (("getString/1",), ("getAsString/0",), 2),
            (("toJsonString/0",), ("toString/0",), 2),
            (("has/1",), ("has/1",), 1),
            (("keys/0",), ("keySet/0",), 1),
            (("length/0",), ("size/0",), 1),
        ]
    )
    assert got == expected, got
    assert all(x.resolved and x.cardinality == "one-to-one" for x in mappings)
    assert stats.ld_born == 1 and stats.doc_invocations > 0, stats

    # Hand-built fragments, intersections only.
    overlap = [
        m.Fragment(["open/1"], ["start/1"]),
        m.Fragment(["open/1", "close/0"], ["start/1", "stop/0"], frequency=3),
    ]
    mappings, stats = m.substitution(overlap)
    got = sorted((tuple(x.removed), tuple(x.added), x.support) for x in mappings)
    assert got == [
        (("close/0",), ("stop/0",), 3),
        (("open/1",), ("start/1",), 4),
    ], got
    assert stats.doc_invocations == 0

    # Description similarity: identical text maxes out, disjoint text floors.
    corpus = ["reads the config entry", "writes the report footer"]
    same = m.csld(corpus, [corpus[0]], [corpus[0]])
    different = m.csld(corpus, [corpus[0]], [corpus[1]])
    assert abs(same - 1.0) < 1e-9, same
    assert 0.0 <= different < same, different

    # Invalid inputs surface as ValueError.
    for bad in (
        lambda: m.Fragment([], ["start/1"]),
        lambda: m.Fragment(["open/oops"], ["start/1"]),
        lambda: m.substitution(overlap, source=source),
    ):
        try:
            bad()
        except ValueError:
            pass
        else:
            raise AssertionError("expected ValueError")

    print("smoke test passed")


if __name__ == "__main__":
    main()
