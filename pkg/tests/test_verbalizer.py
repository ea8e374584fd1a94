import random

import pytest
from hypothesis import given, strategies as st

from kgconflict.conflicts import Provenance, SurfaceTriplet, assemble_instance
from kgconflict.conflicts import PerturbationGroup, SINGLE_HOP
from kgconflict.errors import UnlocatableGroupError
from kgconflict.extractor import ExtractionConfig, extract
from kgconflict.kgstore import Triplet
from kgconflict.verbalizer import (
    CoverageReport,
    VerbalizedContext,
    build_conversion_prompt,
    build_verification_prompt,
    coverage_check,
    covering_sentences,
    locate_gold_sentences,
    normalize,
    parse_verification_verdict,
    split_sentences,
    template_verbalize,
    triplet_covered_by_sentence,
)


# -- sentence splitting --------------------------------------------------------


def test_split_lossless_simple():
    text = "Alpha borders beta. Beta contains gamma town. Gamma is small."
    spans = split_sentences(text)
    assert len(spans) == 3
    assert "".join(s.text for s in spans) == text


def test_split_abbreviation_guard():
    text = "Dr. Smith lives in St. Louis. He works downtown."
    spans = split_sentences(text)
    assert len(spans) == 2
    assert spans[0].text.startswith("Dr. Smith")


def test_split_single_letter_initialism():
    spans = split_sentences("J. R. Tolkien wrote books. They sold well.")
    assert len(spans) == 2


def test_split_handles_questions_and_exclamations():
    spans = split_sentences("Really? Yes! Fine.")
    assert [s.text.strip() for s in spans] == ["Really?", "Yes!", "Fine."]


def test_split_empty():
    assert split_sentences("") == []


@given(st.text(max_size=300))
def test_split_always_tiles_input(text):
    spans = split_sentences(text)
    assert "".join(s.text for s in spans) == text
    for s in spans:
        assert text[s.start : s.end] == s.text


# -- prompts ---------------------------------------------------------------------


def test_conversion_prompt_contains_triplets():
    p = build_conversion_prompt([SurfaceTriplet("a", "borders", "b")])
    assert "(a | borders | b)" in p
    assert "single-paragraph" in p


def test_conversion_prompt_rejects_empty():
    with pytest.raises(ValueError):
        build_conversion_prompt([])


def test_verification_prompt_and_verdicts():
    p = build_verification_prompt([SurfaceTriplet("a", "borders", "b")], "A borders b.")
    assert "No error" in p and "Yes error" in p
    assert parse_verification_verdict("No error") == "no_error"
    assert parse_verification_verdict("  yes error: details") == "yes_error"
    assert parse_verification_verdict("gibberish") == "yes_error"  # fails closed
    with pytest.raises(ValueError):
        build_verification_prompt([], "ctx")


# -- template verbalization --------------------------------------------------------


def _triplets(n, subject=None):
    return [
        SurfaceTriplet(subject or f"entity {i}", "borders", f"place {i}") for i in range(n)
    ]


def test_template_maps_every_triplet_once():
    triplets = _triplets(6, subject="hub")
    ctx = template_verbalize(triplets, rng=random.Random(3))
    for t in triplets:
        assert t.key() in ctx.triplet_sentence_map
        assert len(ctx.triplet_sentence_map[t.key()]) == 1
    assert ctx.source == "template"


def test_template_folding_respects_sentence_count():
    # same subject throughout: folding can halve the count but never below half
    triplets = _triplets(8, subject="hub")
    ctx = template_verbalize(triplets, rng=random.Random(0))
    assert 4 <= len(ctx.sentences) <= 8
    indices = {i for v in ctx.triplet_sentence_map.values() for i in v}
    assert indices == set(range(len(ctx.sentences)))


def test_template_text_matches_spans():
    ctx = template_verbalize(_triplets(5), rng=random.Random(1))
    assert "".join(s.text for s in ctx.sentences) == ctx.text


def test_context_round_trip():
    ctx = template_verbalize(_triplets(3), rng=random.Random(1))
    again = VerbalizedContext.from_dict(ctx.to_dict())
    assert again.text == ctx.text
    assert again.triplet_sentence_map == ctx.triplet_sentence_map


# -- coverage ------------------------------------------------------------------------


def test_triplet_covered_requires_cooccurrence():
    t = SurfaceTriplet("alpha", "borders", "beta")
    assert triplet_covered_by_sentence(t, "Alpha borders beta.")
    assert not triplet_covered_by_sentence(t, "Alpha is large.")
    assert not triplet_covered_by_sentence(t, "Alpha sits near beta.")  # wrong phrase


def test_covered_with_negated_phrase(registry):
    t = SurfaceTriplet(
        "alpha", "does not contain", "beta", relation_id="P150", negated=True
    )
    assert triplet_covered_by_sentence(t, "Alpha does not contain beta.", None, registry)


def test_covered_via_alias():
    t = SurfaceTriplet("alpha", "borders", "beta", subject_id="Q1", object_id="Q2")
    aliases = {"Q1": ["alpha", "the alpha region"], "Q2": ["beta"]}
    assert triplet_covered_by_sentence(t, "The alpha region borders beta.", aliases)


def test_substring_labels_do_not_false_match():
    t = SurfaceTriplet("ala", "borders", "beta")
    # "ala" must not match inside "alabama" under padded token matching
    assert not triplet_covered_by_sentence(t, "Alabama borders beta.")


def test_coverage_check_full_and_partial():
    triplets = _triplets(3)
    ctx = template_verbalize(triplets, rng=random.Random(0))
    full = coverage_check(triplets[:1], triplets, ctx)
    assert full.conflict_covered
    assert full.subgraph_coverage_ratio == 1.0
    assert full.missing_triplets == []

    missing = SurfaceTriplet("ghost", "borders", "nowhere")
    partial = coverage_check([missing], triplets + [missing], ctx)
    assert not partial.conflict_covered
    assert partial.subgraph_coverage_ratio == pytest.approx(3 / 4)
    assert missing.key() in partial.missing_triplets


def test_covering_sentences_prefers_map():
    ctx = template_verbalize(_triplets(3), rng=random.Random(0))
    t = _triplets(3)[0]
    assert covering_sentences(t, ctx) == ctx.triplet_sentence_map[t.key()]
    unmapped = SurfaceTriplet("entity 0", "borders", "place 0", subject_id="X")
    ctx2 = VerbalizedContext(ctx.text, ctx.sentences, {}, "model")
    assert covering_sentences(unmapped, ctx2) == (0,)


# -- gold labeling ---------------------------------------------------------------------


def _make_spec(graph, registry, seed, replacement):
    sg = extract(graph, seed, ExtractionConfig(depth_range=(3, 3)), random.Random(0))
    group = PerturbationGroup((seed,), (replacement,), SINGLE_HOP)
    return assemble_instance(sg, [group], Provenance("rule"))


def test_locate_gold_sentences(tiny_graph, registry):
    from kgconflict.conflicts import surface_form

    seed = Triplet("Q1", "P22", "Q2")
    repl = SurfaceTriplet("alan", "is not the father of", "bert", negated=True)
    spec = _make_spec(tiny_graph, registry, seed, repl)
    surfaces_a = [surface_form(t, tiny_graph, registry) for t in spec.subgraph.edges]
    ctx_a = template_verbalize(surfaces_a, registry, random.Random(0))
    surfaces_b = [repl if t == seed else surface_form(t, tiny_graph, registry) for t in spec.subgraph.edges]
    ctx_b = template_verbalize(surfaces_b, registry, random.Random(0))
    pairs = locate_gold_sentences(
        ctx_a, ctx_b, spec, tiny_graph.entity_aliases, registry, tiny_graph
    )
    assert len(pairs) == 1
    assert pairs[0].a_indices and pairs[0].b_indices
    assert any("alan" in t.lower() for t in pairs[0].a_texts)


def test_locate_gold_raises_when_side_missing(tiny_graph, registry):
    seed = Triplet("Q1", "P22", "Q2")
    repl = SurfaceTriplet("alan", "is not the father of", "bert", negated=True)
    spec = _make_spec(tiny_graph, registry, seed, repl)
    empty = VerbalizedContext("Unrelated text.", split_sentences("Unrelated text."), {}, "model")
    with pytest.raises(UnlocatableGroupError):
        locate_gold_sentences(empty, empty, spec, tiny_graph.entity_aliases, registry, tiny_graph)


def test_normalize():
    assert normalize("  The-Quick  Brown.. Fox!! ") == "the quick brown fox"
