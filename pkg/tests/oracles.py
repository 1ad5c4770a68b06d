"""Independent reference implementations used only to check the real ones.

These deliberately avoid the production code paths: plain nested loops, no
indexes, no trees, no raster shortcuts.
"""

from agrihub.model import Iri
from agrihub.stores.graph import Variable


def brute_force_bgp(patterns, triples):
    """Enumerate binding sets by nested scans with early consistency pruning."""

    def match(pattern, triple, binding):
        new = dict(binding)
        for term, value in ((pattern.subject, triple.subject),
                            (pattern.predicate, triple.predicate),
                            (pattern.object, triple.object)):
            if isinstance(term, Variable):
                if term.name in new and new[term.name] != value:
                    return None
                new[term.name] = value
            elif term != value:
                return None
        return new

    results = []

    def recurse(idx, binding):
        if idx == len(patterns):
            results.append(binding)
            return
        for t in triples:
            new = match(patterns[idx], t, binding)
            if new is not None:
                recurse(idx + 1, new)

    recurse(0, {})
    unique = {tuple(sorted((k, _key(v)) for k, v in b.items())): b for b in results}
    return list(unique.values())


def _key(term):
    if isinstance(term, Iri):
        return ("i", term.value)
    return ("l", term.datatype.value, term.lexical)


def binding_sets_equal(a, b):
    norm = lambda bs: sorted(tuple(sorted((k, _key(v)) for k, v in d.items()))
                             for d in bs)
    return norm(a) == norm(b)


def naive_intersects(features, shape):
    """All-pairs scan with the same exact geometry predicate."""
    from agrihub.stores.geometry import shapes_intersect

    return sorted((f for f in features if shapes_intersect(shape, f.shape)),
                  key=lambda f: (f.instance_iri.value, f.graph.value))


def rect_iou(a, b):
    """Analytic IoU of two axis-aligned rectangles given as (x0, y0, x1, y1)."""
    ix0, iy0 = max(a[0], b[0]), max(a[1], b[1])
    ix1, iy1 = min(a[2], b[2]), min(a[3], b[3])
    inter = max(0.0, ix1 - ix0) * max(0.0, iy1 - iy0)
    area_a = (a[2] - a[0]) * (a[3] - a[1])
    area_b = (b[2] - b[0]) * (b[3] - b[1])
    union = area_a + area_b - inter
    return inter / union if union > 0 else 0.0


def closure_fixpoint(start, links):
    """Reflexive-symmetric-transitive closure by repeated expansion."""
    members = {start}
    changed = True
    while changed:
        changed = False
        for a, b in links:
            if a in members and b not in members:
                members.add(b)
                changed = True
            if b in members and a not in members:
                members.add(a)
                changed = True
    return members


def reference_segmentation(labeled_rows, gap_seconds, min_rows):
    """The three segmentation rules applied one after another on plain lists.

    Rule 1: split on label change or time gap; rule 2: relabel short field
    runs as transfer; rule 3: merge adjacent transfer runs.
    """
    if not labeled_rows:
        return []
    runs = [[labeled_rows[0]]]
    for prev, cur in zip(labeled_rows, labeled_rows[1:]):
        gap = (cur[0].timestamp - prev[0].timestamp) > gap_seconds * 1000
        if cur[1] != prev[1] or gap:
            runs.append([cur])
        else:
            runs[-1].append(cur)

    relabeled = []
    for run in runs:
        label = run[0][1]
        if label is not None and len(run) < min_rows:
            run = [(row, None) for row, _ in run]
        relabeled.append(run)

    merged = []
    for run in relabeled:
        if merged and run[0][1] is None and merged[-1][0][1] is None:
            merged[-1].extend(run)
        else:
            merged.append(run)
    return [([row for row, _ in run], run[0][1]) for run in merged]
