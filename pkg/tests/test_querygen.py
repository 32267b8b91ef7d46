"""Query surface forms, gating rules, and count identities."""

import dataclasses
import random

import pytest

from autoquery.errors import UsageError
from autoquery.objects import CanonicalObject, object_id_for
from autoquery.querygen import (
    ComparativeEntry,
    INTERROGATIVES,
    Query,
    TECHNIQUES,
    VerbEntry,
    cap_queries,
    comparative_allowed,
    gen_analogy_extensions,
    gen_analogy_queries,
    gen_comparative_queries,
    gen_correlation_queries,
    gen_object_queries,
    gen_pair_queries,
    generate,
    load_comparatives,
    load_verbs,
    query_id_for,
)

TYPES = ("Person", "Object", "Location", "Concept")


def obj(canonical, otype="Object", quantified=False, article=None):
    return CanonicalObject(
        object_id=object_id_for(canonical),
        canonical=canonical,
        object_type=otype,
        mention_count=1,
        quantified=quantified,
        article=article,
    )


GRANT = obj("General Grant", "Person")
WAR = obj("US Civil War", "Concept", quantified=True, article="the")
HORSE = obj("horse", "Object", article="a")
FRANCE = obj("France", "Location")


class TestObjectQueries:
    def test_six_per_object_past(self):
        qs = gen_object_queries([GRANT])
        assert [q.surface for q in qs] == [
            "Who was General Grant?",
            "What was General Grant?",
            "Why was General Grant?",
            "When was General Grant?",
            "Where was General Grant?",
            "How was General Grant?",
        ]

    def test_present_tense_copula(self):
        qs = gen_object_queries([WAR], tense="present")
        assert qs[0].surface == "Who is the US Civil War?"

    def test_article_in_surface(self):
        qs = gen_object_queries([HORSE])
        assert qs[3].surface == "When was a horse?"


class TestPairQueries:
    def test_when_and_where_templates(self):
        qs = gen_pair_queries([GRANT, WAR], verbs=[])
        surfaces = [q.surface for q in qs]
        assert "Was General Grant after the US Civil War?" in surfaces
        assert "Was the US Civil War after General Grant?" in surfaces
        assert "Where is General Grant located relative to the US Civil War?" in surfaces

    def test_verb_templates_use_base_form(self):
        verbs = [
            VerbEntry(
                lemma="fight",
                past="fought",
                subject_types=frozenset(TYPES),
                object_types=frozenset(TYPES),
            )
        ]
        qs = gen_pair_queries([GRANT, WAR], verbs)
        surfaces = [q.surface for q in qs]
        assert "Why did General Grant fight the US Civil War?" in surfaces
        assert "How did General Grant fight the US Civil War?" in surfaces
        assert not any("fought" in s for s in surfaces)

    def test_who_and_what_never_emitted_for_pairs(self):
        verbs = load_verbs()
        qs = gen_pair_queries([GRANT, WAR, HORSE], verbs)
        assert {q.interrogative for q in qs} == {"When", "Where", "Why", "How"}

    def test_no_self_pairs(self):
        qs = gen_pair_queries([GRANT, WAR], verbs=[])
        assert all(q.subject != q.object2 for q in qs)


class TestComparatives:
    def test_surface_form(self):
        adj = ComparativeEntry(form="older", types=frozenset(TYPES), cross_type=True)
        qs = gen_comparative_queries([GRANT, HORSE], [adj])
        assert "Is General Grant older than a horse?" in [q.surface for q in qs]

    def test_type_membership_required(self):
        adj = ComparativeEntry(form="taller", types=frozenset({"Person"}), cross_type=True)
        assert comparative_allowed("Person", "Person", adj)
        assert not comparative_allowed("Person", "Object", adj)
        assert not comparative_allowed("Object", "Object", adj)

    def test_cross_type_flag_gates_mixed_pairs(self):
        adj = ComparativeEntry(
            form="larger", types=frozenset({"Object", "Location"}), cross_type=False
        )
        assert comparative_allowed("Object", "Object", adj)
        assert comparative_allowed("Location", "Location", adj)
        assert not comparative_allowed("Object", "Location", adj)

    def test_generation_respects_gating(self):
        adj = ComparativeEntry(
            form="larger", types=frozenset({"Object", "Location"}), cross_type=False
        )
        qs = gen_comparative_queries([GRANT, HORSE, FRANCE], [adj])
        assert qs == []


class TestAnalogies:
    def test_who_for_persons_what_otherwise(self):
        qs = gen_analogy_queries([GRANT, WAR, HORSE, FRANCE])
        by_subject = {q.subject: q.surface for q in qs}
        assert by_subject[GRANT.object_id] == "Who is most like General Grant?"
        assert by_subject[WAR.object_id] == "What is most like the US Civil War?"
        assert by_subject[HORSE.object_id] == "What is most like a horse?"

    def test_extensions_for_answered_analogy(self):
        base = gen_analogy_queries([GRANT])[0]
        answered = dataclasses.replace(base, state="Answered")
        exts = gen_analogy_extensions(answered, GRANT, WAR)
        assert [e.surface for e in exts] == [
            "Why is the US Civil War most like General Grant?",
            "What is the evidence and reasoning for that choice?",
        ]
        assert all(e.kind == "AnalogyExtension" for e in exts)
        assert all(e.subject == GRANT.object_id for e in exts)
        assert all(e.object2 == WAR.object_id for e in exts)
        assert exts[0].query_id != exts[1].query_id

    def test_extensions_require_answered_state(self):
        base = gen_analogy_queries([GRANT])[0]
        with pytest.raises(UsageError):
            gen_analogy_extensions(base, GRANT, WAR)

    def test_extensions_require_analogy_kind(self):
        q = gen_object_queries([GRANT])[0]
        answered = dataclasses.replace(q, state="Answered")
        with pytest.raises(UsageError):
            gen_analogy_extensions(answered, GRANT, WAR)


class TestCorrelations:
    def test_only_quantified_or_concept_subjects(self):
        qs = gen_correlation_queries([GRANT, WAR, HORSE, FRANCE])
        assert [q.subject for q in qs] == [WAR.object_id]
        assert qs[0].surface == "What is most strongly correlated with the US Civil War?"

    def test_quantified_object_included(self):
        price = obj("grain price", "Object", quantified=True)
        qs = gen_correlation_queries([price])
        assert len(qs) == 1


class TestQueryIds:
    def test_id_depends_on_all_slots(self):
        base = ("ObjectJournalism", "Who", "s", None, None, None)
        qid = query_id_for(*base)
        assert qid == query_id_for(*base)
        assert qid != query_id_for("ObjectJournalism", "What", "s", None, None, None)
        assert qid != query_id_for("ObjectJournalism", "Who", "t", None, None, None)

    def test_all_generated_ids_unique(self):
        verbs = load_verbs()
        adjectives = load_comparatives()
        qs = generate([GRANT, WAR, HORSE, FRANCE], verbs, adjectives)
        ids = [q.query_id for q in qs]
        assert len(ids) == len(set(ids))

    def test_generate_starts_every_query_generated(self):
        qs = generate([GRANT, WAR], load_verbs(), load_comparatives())
        assert all(q.state == "Generated" for q in qs)
        assert all(q.reason is None for q in qs)


class TestCounts:
    def test_count_identities_random_corpora(self):
        # object: 6N; pair: 2N(N-1)(|V|+1); comparative bounded by pairs;
        # analogy: N; correlation: subset of N
        rng = random.Random(20240817)
        verbs = load_verbs()
        adjectives = load_comparatives()
        n_verbs = len(verbs)
        for _ in range(25):
            n = rng.randint(1, 12)
            objects = [
                obj(
                    f"thing{i}",
                    rng.choice(TYPES),
                    quantified=rng.random() < 0.4,
                )
                for i in range(n)
            ]
            assert len(gen_object_queries(objects)) == 6 * n
            pair = gen_pair_queries(objects, verbs)
            assert len(pair) == n * (n - 1) * (2 + 2 * n_verbs)
            assert len(gen_analogy_queries(objects)) == n
            expect_corr = sum(
                1 for o in objects if o.quantified or o.object_type == "Concept"
            )
            assert len(gen_correlation_queries(objects)) == expect_corr

    def test_generate_is_sum_of_techniques(self):
        verbs = load_verbs()
        adjectives = load_comparatives()
        objects = [GRANT, WAR, HORSE, FRANCE]
        total = generate(objects, verbs, adjectives)
        parts = (
            len(gen_object_queries(objects))
            + len(gen_pair_queries(objects, verbs))
            + len(gen_comparative_queries(objects, adjectives))
            + len(gen_analogy_queries(objects))
            + len(gen_correlation_queries(objects))
        )
        assert len(total) == parts

    def test_technique_selection(self):
        objects = [GRANT, WAR]
        only = generate(objects, load_verbs(), load_comparatives(), techniques=("object",))
        assert len(only) == 12
        assert {q.kind for q in only} == {"ObjectJournalism"}

    def test_unknown_technique_rejected(self):
        with pytest.raises(UsageError):
            generate([GRANT], load_verbs(), load_comparatives(), techniques=("nope",))


class TestCap:
    def test_under_cap_unchanged(self):
        qs = gen_object_queries([GRANT, WAR])
        assert cap_queries(qs, 100) == qs

    def test_cap_keeps_lowest_ids_in_original_order(self):
        qs = gen_object_queries([GRANT, WAR])
        capped = cap_queries(qs, 5)
        assert len(capped) == 5
        keep = set(sorted(q.query_id for q in qs)[:5])
        assert [q.query_id for q in capped] == [
            q.query_id for q in qs if q.query_id in keep
        ]

    def test_cap_keep_set_independent_of_input_order(self):
        qs = gen_object_queries([GRANT, WAR, HORSE, FRANCE])
        a = {q.query_id for q in cap_queries(list(qs), 7)}
        b = {q.query_id for q in cap_queries(list(reversed(qs)), 7)}
        assert a == b == set(sorted(q.query_id for q in qs)[:7])
