import warnings

import pytest

from opacheck import (
    FormatError,
    build_cc,
    build_gdss,
    build_ghat,
    build_observer,
    export_dot,
    parse,
    serialize,
)
from opacheck.fileformat import (
    AutomatonDocument,
    cc_document,
    document_of,
    observer_document,
)
from opacheck.generate import fuzz_automaton

from conftest import FIXTURE_NAMES, assert_valid_dot, fixture_path


MINIMAL = b"opacity-nfa 1\nstate q\ninit q\n"


class TestParse:
    def test_fixture_file(self):
        doc = parse(fixture_path("cso_but_not_scso").read_bytes())
        assert len(doc.states) == 7
        assert doc.events == (("a", True), ("b", True), ("u", False))
        assert doc.initial == ("x0",)
        assert doc.secret == ("x4", "x5")
        assert ("x0", "u", "x1") in doc.transitions

    def test_minimal_document(self):
        doc = parse(MINIMAL)
        assert doc.states == ("q",)
        assert doc.events == ()
        assert doc.initial == ("q",)

    def test_comments_blank_lines_and_order_insensitivity(self):
        text = b"""
# leading comment
opacity-nfa 1

trans q a q   # trailing comment
init q
event a obs
state q
"""
        doc = parse(text)
        assert doc.transitions == (("q", "a", "q"),)

    @pytest.mark.parametrize(
        "text,fragment,line",
        [
            (b"state q\n", "header", 1),
            (b"opacity-nfa 2\nstate q\n", "version", 1),
            (b"opacity-nfa one\n", "version", 1),
            (b"opacity-nfa 1\nwibble q\n", "directive", 2),
            (b"opacity-nfa 1\nstate q\nstate q\n", "duplicate state", 3),
            (b"opacity-nfa 1\nstate q\nevent a maybe\n", "'event' takes", 3),
            (b"opacity-nfa 1\nstate q\nevent a obs\nevent a unobs\n", "duplicate event", 4),
            (b"opacity-nfa 1\nstate q\ninit r\n", "unknown state", 3),
            (b"opacity-nfa 1\nstate q\nsecret r\n", "unknown state", 3),
            (b"opacity-nfa 1\nstate q\ntrans q a q\n", "unknown event", 3),
            (b"opacity-nfa 1\nstate q\nevent a obs\ntrans q a q\ntrans q a q\n", "duplicate transition", 5),
            (b"opacity-nfa 1\nstate q\ninit q\ninit q\n", "duplicate init", 4),
            (b"opacity-nfa 1\nstate q\nstate\n", "'state' takes", 3),
            (b"", "header", None),
        ],
    )
    def test_errors_carry_line_numbers(self, text, fragment, line):
        with pytest.raises(FormatError) as info:
            parse(text)
        assert fragment in str(info.value)
        assert info.value.line == line

    def test_rejects_non_utf8(self):
        with pytest.raises(FormatError):
            parse(b"\xff\xfe\x00")


class TestDocument:
    def test_shuffled_lists_canonicalize_to_same_bytes(self):
        sorted_doc = AutomatonDocument(
            format_version=1,
            states=("a", "b"),
            events=(("e", True), ("f", False)),
            transitions=(("a", "e", "b"), ("b", "f", "a")),
            initial=("a",),
            secret=("b",),
        )
        shuffled = AutomatonDocument(
            format_version=1,
            states=("b", "a"),
            events=(("f", False), ("e", True)),
            transitions=(("b", "f", "a"), ("a", "e", "b")),
            initial=("a",),
            secret=("b",),
        )
        assert sorted_doc == shuffled
        assert serialize(sorted_doc) == serialize(shuffled)

    def test_bad_names_rejected(self):
        with pytest.raises(FormatError):
            AutomatonDocument(1, ("a b",), (), (), (), ())
        with pytest.raises(FormatError):
            AutomatonDocument(1, ("ok",), (("", True),), (), (), ())

    def test_unknown_references_rejected(self):
        with pytest.raises(FormatError):
            AutomatonDocument(1, ("a",), (), (("a", "e", "a"),), (), ())

    def test_version_checked(self):
        with pytest.raises(FormatError):
            AutomatonDocument(2, ("a",), (), (), (), ())


class TestSerialize:
    def test_canonical_form_is_a_fixpoint(self):
        for name in FIXTURE_NAMES:
            raw = fixture_path(name).read_bytes()
            canonical = serialize(parse(raw))
            assert serialize(parse(canonical)) == canonical

    def test_round_trip_identity_on_random_documents(self):
        for index in range(200):
            doc = document_of(fuzz_automaton(base_seed=11, index=index))
            assert parse(serialize(doc)) == doc

    def test_serialized_automaton_revalidates(self):
        for index in range(50):
            aut = fuzz_automaton(base_seed=13, index=index)
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")  # all-secret instances warn
                again = parse(serialize(document_of(aut))).to_automaton()
            assert again == aut


class TestExportDot:
    def test_product_contains_named_pair_state(self, scso_pos):
        cc = build_cc(scso_pos, build_observer(build_gdss(scso_pos)))
        dot = export_dot(cc)
        assert '"(x4,{x1,x5})"' in dot
        assert_valid_dot(dot)

    def test_empty_estimate_rendered_as_empty_braces(self, cso_not_scso):
        cc = build_cc(cso_not_scso, build_observer(build_gdss(cso_not_scso)))
        dot = export_dot(cc)
        assert '"(x5,{})"' in dot
        assert '"(u,eps)"' in dot
        assert '"(a,a)"' in dot

    def test_empty_automaton_is_a_valid_digraph(self, scso_pos):
        dot = export_dot(build_ghat(scso_pos))  # no secret initial states
        assert_valid_dot(dot)
        assert "->" not in dot.replace("rankdir", "")

    def test_every_fixture_and_structure_parses(self):
        for name in FIXTURE_NAMES:
            aut = parse(fixture_path(name).read_bytes()).to_automaton()
            gdss = build_gdss(aut)
            observer = build_observer(gdss)
            structures = [
                aut,
                gdss,
                build_ghat(aut),
                observer,
                build_cc(aut, observer),
                build_cc(build_ghat(aut), observer),
            ]
            for structure in structures:
                assert_valid_dot(export_dot(structure))

    def test_export_is_deterministic(self, siso_neg):
        cc = build_cc(build_ghat(siso_neg), build_observer(build_gdss(siso_neg)))
        assert export_dot(cc) == export_dot(cc)

    def test_unsupported_type_rejected(self):
        with pytest.raises(TypeError):
            export_dot("not a structure")


class TestNativeExports:
    def test_observer_document_round_trips(self, scso_pos):
        obs = build_observer(build_gdss(scso_pos))
        doc = observer_document(obs)
        assert parse(serialize(doc)) == doc
        assert "{x1,x5}" in doc.states
        assert doc.initial == ("{x0,x3}",)

    def test_cc_document_round_trips(self, cso_not_scso):
        cc = build_cc(cso_not_scso, build_observer(build_gdss(cso_not_scso)))
        doc = cc_document(cc)
        assert parse(serialize(doc)) == doc
        assert "(x5,{})" in doc.states
        assert ("(u,eps)", False) in doc.events
        assert "(x5,{})" in doc.secret
