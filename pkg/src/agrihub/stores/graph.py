"""Named-graph triple store with conjunctive basic-graph-pattern queries.

Three index permutations (SPO, POS, OSP) back the pattern lookups. Results
are deterministic: binding sets come out deduplicated and sorted
lexicographically by their bound values' canonical text.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Union

from ..errors import ValidationError
from ..model import Iri, Literal, Term, Triple, term_text


@dataclass(frozen=True)
class Variable:
    name: str

    def __post_init__(self):
        if not self.name:
            raise ValidationError("variable name must be non-empty")


PatternTerm = Union[Iri, Literal, Variable]


@dataclass(frozen=True)
class TriplePattern:
    subject: PatternTerm
    predicate: PatternTerm
    object: PatternTerm

    def variables(self) -> set[str]:
        return {t.name for t in (self.subject, self.predicate, self.object)
                if isinstance(t, Variable)}


BindingSet = dict  # variable name -> Term


class _GraphIndexes:
    """One graph's triples plus SPO / POS / OSP lookup maps."""

    __slots__ = ("triples", "spo", "pos", "osp")

    def __init__(self):
        self.triples: set[Triple] = set()
        self.spo: dict[Iri, dict[Iri, set[Term]]] = {}
        self.pos: dict[Iri, dict[Term, set[Iri]]] = {}
        self.osp: dict[Term, dict[Iri, set[Iri]]] = {}

    def add(self, t: Triple) -> bool:
        if t in self.triples:
            return False
        self.triples.add(t)
        self.spo.setdefault(t.subject, {}).setdefault(t.predicate, set()).add(t.object)
        self.pos.setdefault(t.predicate, {}).setdefault(t.object, set()).add(t.subject)
        self.osp.setdefault(t.object, {}).setdefault(t.subject, set()).add(t.predicate)
        return True


class GraphStore:
    def __init__(self):
        self._graphs: dict[Iri, _GraphIndexes] = {}

    # -- mutation -----------------------------------------------------------

    def insert(self, graph: Iri, triples: Iterable[Triple]) -> int:
        """Union triples into the named graph; returns newly added count."""
        g = self._graphs.setdefault(graph, _GraphIndexes())
        return sum(1 for t in triples if g.add(t))

    # -- inspection -----------------------------------------------------------

    def graphs(self) -> list[Iri]:
        return sorted(self._graphs, key=lambda g: g.value)

    def graph_triples(self, graph: Iri) -> frozenset[Triple]:
        g = self._graphs.get(graph)
        return frozenset(g.triples) if g else frozenset()

    def contains(self, graph: Iri, triple: Triple) -> bool:
        g = self._graphs.get(graph)
        return bool(g) and triple in g.triples

    def subject_graphs(self, subject: Iri) -> list[Iri]:
        """Graphs holding at least one triple with this subject."""
        return [gi for gi, g in sorted(self._graphs.items(), key=lambda kv: kv[0].value)
                if subject in g.spo]

    # -- pattern matching -----------------------------------------------------

    def _match(self, graphs: list[Iri], s, p, o):
        """Yield triples over the graph union matching constant components."""
        for gi in graphs:
            g = self._graphs.get(gi)
            if g is None:
                continue  # unknown graph contributes nothing
            if s is not None:
                by_p = g.spo.get(s)
                if not by_p:
                    continue
                preds = [p] if p is not None else list(by_p)
                for pred in preds:
                    for obj in by_p.get(pred, ()):
                        if o is None or obj == o:
                            yield Triple(s, pred, obj)
            elif p is not None:
                by_o = g.pos.get(p)
                if not by_o:
                    continue
                objs = [o] if o is not None else list(by_o)
                for obj in objs:
                    for subj in by_o.get(obj, ()):
                        yield Triple(subj, p, obj)
            elif o is not None:
                by_s = g.osp.get(o)
                if not by_s:
                    continue
                for subj, preds in by_s.items():
                    for pred in preds:
                        yield Triple(subj, pred, o)
            else:
                yield from g.triples

    def bgp(self, patterns: list[TriplePattern], graphs: list[Iri]) -> list[BindingSet]:
        """All binding sets satisfying the conjunction over the graph union.

        Evaluated by index-backed nested lookups, most-constrained pattern
        first; duplicates removed; deterministic order.
        """
        if not patterns:
            raise ValidationError("at least one pattern required")
        results: set[tuple] = set()
        var_names = sorted({v for pat in patterns for v in pat.variables()})
        self._join(list(patterns), graphs, {}, var_names, results)
        decoded = [dict(zip(var_names, values)) for values in sorted(
            results, key=lambda vals: tuple(term_text(v) for v in vals))]
        return decoded

    def _join(self, remaining, graphs, binding, var_names, out):
        if not remaining:
            out.add(tuple(binding[v] for v in var_names))
            return
        # evaluate the pattern with the most bound components first
        def bound_count(pat):
            return sum(1 for t in (pat.subject, pat.predicate, pat.object)
                       if not isinstance(t, Variable) or t.name in binding)
        remaining = sorted(remaining, key=bound_count, reverse=True)
        pat, rest = remaining[0], remaining[1:]

        def resolve(t):
            if isinstance(t, Variable):
                return binding.get(t.name)
            return t

        s, p, o = resolve(pat.subject), resolve(pat.predicate), resolve(pat.object)
        if s is not None and not isinstance(s, Iri):
            return  # a literal bound into subject position can never match
        if p is not None and not isinstance(p, Iri):
            return
        for triple in self._match(graphs, s, p, o):
            new = dict(binding)
            ok = True
            for term, value in ((pat.subject, triple.subject),
                                (pat.predicate, triple.predicate),
                                (pat.object, triple.object)):
                if isinstance(term, Variable):
                    bound = new.get(term.name)
                    if bound is None:
                        new[term.name] = value
                    elif bound != value:
                        ok = False
                        break
            if ok:
                self._join(rest, graphs, new, var_names, out)
