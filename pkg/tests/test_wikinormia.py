import pytest

from agrihub import vocab
from agrihub.builtin_formats import (
    GEOJSON_FORMAT,
    ISOXML_FORMAT,
    NRW_FORMAT,
    install_builtins,
)
from agrihub.errors import (
    ConflictError,
    NotFoundError,
    PreconditionError,
    ValidationError,
)
from agrihub.model import Datatype, Iri, Literal, NamedGraph, Triple
from agrihub.stores import PersistentStores
from agrihub.wikinormia import (
    Cardinality,
    Comment,
    ConceptClass,
    FormatDefinition,
    FormatRegistry,
    PropertyDef,
    canonical_definition_text,
    definition_from_json,
    definition_to_json,
)

FMT = Iri("https://agrihub.example/format/soil-samples")
CLS = Iri("https://agrihub.example/format/soil-samples/Sample")
PROP = Iri("https://agrihub.example/format/soil-samples/ph")


def sample_definition(**kwargs):
    cls = ConceptClass(CLS, "Soil sample", (
        PropertyDef(PROP, "pH", Datatype.DECIMAL, Cardinality.REQUIRED_ONE),
    ))
    defaults = dict(format_iri=FMT, label="Soil samples", classes=(cls,))
    defaults.update(kwargs)
    return FormatDefinition(**defaults)


def registry():
    return FormatRegistry(stores=PersistentStores())


class TestLifecycle:
    def test_create_and_retrieve_draft(self):
        reg = registry()
        reg.create_draft(sample_definition())
        assert reg.get_format(FMT).status == "draft"

    def test_draft_with_unknown_range_accepted(self):
        reg = registry()
        cls = ConceptClass(CLS, "Sample", (
            PropertyDef(PROP, "site", Iri("https://agrihub.example/nope/Site")),
        ))
        reg.create_draft(FormatDefinition(FMT, "Samples", classes=(cls,)))
        assert reg.get_format(FMT).status == "draft"

    def test_duplicate_draft_conflicts(self):
        reg = registry()
        reg.create_draft(sample_definition())
        with pytest.raises(ConflictError):
            reg.create_draft(sample_definition())

    def test_finalize_assigns_version_1(self):
        reg = registry()
        reg.create_draft(sample_definition())
        assert reg.finalize(FMT) == 1
        assert reg.get_format(FMT).status == "final"

    def test_refinalize_increments_version(self):
        reg = registry()
        reg.create_draft(sample_definition())
        reg.finalize(FMT)
        reg.create_draft(sample_definition())
        assert reg.finalize(FMT) == 2
        assert reg.get_format(FMT).version == 2
        assert reg.get_format(FMT, version=1).version == 1

    def test_finalize_dangling_parent_names_iri(self):
        reg = registry()
        ghost = "https://agrihub.example/nope/Parent"
        cls = ConceptClass(CLS, "Sample", parent_class=Iri(ghost))
        reg.create_draft(FormatDefinition(FMT, "Samples", classes=(cls,)))
        with pytest.raises(ValidationError, match=ghost):
            reg.finalize(FMT)

    def test_finalize_without_draft(self):
        with pytest.raises(NotFoundError):
            registry().finalize(FMT)

    def test_finalize_requires_a_class(self):
        reg = registry()
        reg.create_draft(FormatDefinition(FMT, "Empty"))
        with pytest.raises(ValidationError):
            reg.finalize(FMT)

    def test_unknown_format_not_found(self):
        with pytest.raises(NotFoundError):
            registry().get_format(FMT)


class TestDefinitionInvariants:
    def test_duplicate_class_iris_rejected(self):
        with pytest.raises(ValidationError):
            FormatDefinition(FMT, "x", classes=(
                ConceptClass(CLS, "a"), ConceptClass(CLS, "b")))

    def test_duplicate_property_iris_rejected(self):
        with pytest.raises(ValidationError):
            FormatDefinition(FMT, "x", classes=(
                ConceptClass(CLS, "a", (
                    PropertyDef(PROP, "p1", Datatype.STRING),
                    PropertyDef(PROP, "p2", Datatype.STRING))),))

    def test_duplicate_csv_columns_rejected(self):
        other = Iri(PROP.value + "2")
        with pytest.raises(ValidationError):
            ConceptClass(CLS, "a", (
                PropertyDef(PROP, "p1", Datatype.STRING, csv_column="col"),
                PropertyDef(other, "p2", Datatype.STRING, csv_column="col")))

    def test_empty_comment_rejected(self):
        with pytest.raises(ValidationError):
            Comment("ann", "2020-01-01T00:00:00.000Z", "")


class TestComments:
    def test_comment_count(self):
        reg = registry()
        reg.create_draft(sample_definition())
        n = reg.add_comment(FMT, Comment("a", "2020-01-01T00:00:00.000Z", "hi"))
        assert n == 1

    def test_comment_on_final_accepted(self):
        reg = registry()
        reg.create_draft(sample_definition())
        reg.finalize(FMT)
        assert reg.add_comment(
            FMT, Comment("a", "2020-01-01T00:00:00.000Z", "still open")) == 1

    def test_comments_sorted_by_timestamp(self):
        reg = registry()
        reg.create_draft(sample_definition())
        reg.add_comment(FMT, Comment("b", "2021-01-01T00:00:00.000Z", "later"))
        reg.add_comment(FMT, Comment("a", "2020-01-01T00:00:00.000Z", "earlier"))
        got = reg.get_format(FMT).comments
        assert [c.body for c in got] == ["earlier", "later"]

    def test_comment_does_not_change_frozen_definition(self):
        reg = registry()
        reg.create_draft(sample_definition())
        reg.finalize(FMT)
        before = canonical_definition_text(reg.get_format(FMT))
        reg.add_comment(FMT, Comment("a", "2020-01-01T00:00:00.000Z", "x"))
        assert canonical_definition_text(reg.get_format(FMT)) == before

    def test_comment_on_unknown_format(self):
        with pytest.raises(NotFoundError):
            registry().add_comment(
                FMT, Comment("a", "2020-01-01T00:00:00.000Z", "x"))


class TestListFormats:
    def test_empty(self):
        assert registry().list_formats() == []

    def test_status_filter(self):
        reg = registry()
        reg.create_draft(sample_definition())
        reg.finalize(FMT)
        other = Iri("https://agrihub.example/format/another")
        reg.create_draft(FormatDefinition(other, "Another"))
        finals = reg.list_formats(status="final")
        assert [r[0] for r in finals] == [FMT]
        drafts = reg.list_formats(status="draft")
        assert [r[0] for r in drafts] == [other]

    def test_lexicographic_order(self):
        reg = registry()
        b = Iri("https://agrihub.example/format/bbb")
        a = Iri("https://agrihub.example/format/aaa")
        for iri in (b, a):
            reg.create_draft(FormatDefinition(iri, "x", classes=(
                ConceptClass(Iri(iri.value + "/C"), "c"),)))
            reg.finalize(iri)
        assert [r[0] for r in reg.list_formats()] == [a, b]


class TestValidation:
    def graph(self, *triples):
        return NamedGraph(Iri("urn:agrihub:graph:test"), frozenset(triples))

    def final_registry(self):
        reg = registry()
        reg.create_draft(sample_definition())
        reg.finalize(FMT)
        return reg

    def test_conformant_instance(self):
        reg = self.final_registry()
        inst = Iri("https://agrihub.example/id/s1")
        report = reg.validate_instances(self.graph(
            Triple(inst, vocab.TYPE, CLS),
            Triple(inst, PROP, Literal("6.5", Datatype.DECIMAL))), FMT)
        assert report.conformant

    def test_missing_required_names_instance_and_property(self):
        reg = self.final_registry()
        inst = Iri("https://agrihub.example/id/s1")
        report = reg.validate_instances(
            self.graph(Triple(inst, vocab.TYPE, CLS)), FMT)
        assert len(report.violations) == 1
        v = report.violations[0]
        assert (v.instance, v.property_iri, v.kind) == (inst, PROP, "missing-required")

    def test_datatype_mismatch(self):
        reg = self.final_registry()
        inst = Iri("https://agrihub.example/id/s1")
        report = reg.validate_instances(self.graph(
            Triple(inst, vocab.TYPE, CLS),
            Triple(inst, PROP, Literal("abc"))), FMT)
        assert any(v.kind == "datatype" for v in report.violations)

    def test_cardinality_violation(self):
        reg = self.final_registry()
        inst = Iri("https://agrihub.example/id/s1")
        report = reg.validate_instances(self.graph(
            Triple(inst, vocab.TYPE, CLS),
            Triple(inst, PROP, Literal("6.5", Datatype.DECIMAL)),
            Triple(inst, PROP, Literal("7.0", Datatype.DECIMAL))), FMT)
        assert any(v.kind == "cardinality" for v in report.violations)

    def test_draft_format_rejected(self):
        reg = registry()
        reg.create_draft(sample_definition())
        with pytest.raises(PreconditionError):
            reg.validate_instances(self.graph(), FMT)

    def test_brute_force_equivalence(self):
        # soundness: zero violations exactly when every constraint holds,
        # cross-checked by independent per-instance constraint evaluation
        import random
        reg = self.final_registry()
        definition = reg.get_format(FMT)
        rng = random.Random(5)
        for _ in range(30):
            triples = set()
            instances = [Iri(f"https://agrihub.example/id/i{k}") for k in range(4)]
            for inst in instances:
                if rng.random() < 0.8:
                    triples.add(Triple(inst, vocab.TYPE, CLS))
                for _ in range(rng.randint(0, 3)):
                    value = rng.choice([
                        Literal("6.5", Datatype.DECIMAL), Literal("oops"),
                        Literal("1", Datatype.INTEGER)])
                    triples.add(Triple(inst, PROP, value))
            graph = self.graph(*triples)
            report = reg.validate_instances(graph, FMT)

            expected_clean = True
            for inst in instances:
                if Triple(inst, vocab.TYPE, CLS) not in triples:
                    continue
                values = [t.object for t in triples
                          if t.subject == inst and t.predicate == PROP]
                if len(values) != 1:
                    expected_clean = False
                elif not (isinstance(values[0], Literal)
                          and values[0].datatype is Datatype.DECIMAL):
                    expected_clean = False
            assert report.conformant == expected_clean


class TestBuiltins:
    def test_builtins_installed_final(self):
        reg = registry()
        install_builtins(reg)
        rows = reg.list_formats(status="final")
        iris = [r[0] for r in rows]
        assert ISOXML_FORMAT in iris and NRW_FORMAT in iris \
            and GEOJSON_FORMAT in iris

    def test_builtin_mirrored_to_graph(self):
        stores = PersistentStores()
        reg = FormatRegistry(stores=stores)
        install_builtins(reg)
        assert len(stores.graph.graph_triples(vocab.WIKINORMIA_GRAPH)) > 20


class TestJsonRoundTrip:
    def test_round_trip(self):
        d = sample_definition()
        assert definition_from_json(definition_to_json(d)) == d

    def test_registry_persists(self, tmp_path):
        stores = PersistentStores(tmp_path)
        reg = FormatRegistry(stores=stores, journal_path=tmp_path / "wikinormia.journal")
        reg.replay_journal()
        reg.create_draft(sample_definition())
        reg.finalize(FMT)
        reg.add_comment(FMT, Comment("a", "2020-01-01T00:00:00.000Z", "note"))
        before = canonical_definition_text(reg.get_format(FMT))

        stores2 = PersistentStores(tmp_path)
        reg2 = FormatRegistry(stores=stores2,
                              journal_path=tmp_path / "wikinormia.journal")
        reg2.replay_journal()
        assert canonical_definition_text(reg2.get_format(FMT)) == before
        assert [c.body for c in reg2.get_format(FMT).comments] == ["note"]
