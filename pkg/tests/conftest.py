import pathlib
import re

import pytest

from opacheck import load

FIXTURE_DIR = pathlib.Path(__file__).resolve().parent.parent / "fixtures"

FIXTURE_NAMES = (
    "cso_but_not_scso",
    "iso_but_not_siso",
    "scso_positive",
    "siso_but_not_scso",
    "siso_negative",
    "no_secrets",
)

# Recorded ground truth for every fixture; the suite asserts both the
# verifiers and the oracles reproduce these verdicts exactly.
EXPECTED_VERDICTS = {
    "cso_but_not_scso": {"CSO": True, "ISO": True, "SCSO": False, "SISO": True, "INF_SSO": False},
    "iso_but_not_siso": {"CSO": True, "ISO": True, "SCSO": True, "SISO": False, "INF_SSO": False},
    "scso_positive": {"CSO": True, "ISO": True, "SCSO": True, "SISO": True, "INF_SSO": True},
    "siso_but_not_scso": {"CSO": False, "ISO": True, "SCSO": False, "SISO": True, "INF_SSO": False},
    "siso_negative": {"CSO": True, "ISO": False, "SCSO": True, "SISO": False, "INF_SSO": False},
    "no_secrets": {"CSO": True, "ISO": True, "SCSO": True, "SISO": True, "INF_SSO": True},
}


def fixture_path(name: str) -> pathlib.Path:
    return FIXTURE_DIR / f"{name}.aut"


def load_fixture(name: str):
    return load(fixture_path(name)).to_automaton()


@pytest.fixture(scope="session")
def cso_not_scso():
    return load_fixture("cso_but_not_scso")


@pytest.fixture(scope="session")
def iso_not_siso():
    return load_fixture("iso_but_not_siso")


@pytest.fixture(scope="session")
def scso_pos():
    return load_fixture("scso_positive")


@pytest.fixture(scope="session")
def siso_not_scso():
    return load_fixture("siso_but_not_scso")


@pytest.fixture(scope="session")
def siso_neg():
    return load_fixture("siso_negative")


@pytest.fixture(scope="session")
def secret_free():
    return load_fixture("no_secrets")


# --- tiny DOT grammar checker -------------------------------------------
#
# Accepts the subset of the DOT grammar used by the exporter: a digraph
# with node statements, edge statements and bare attribute assignments,
# every identifier either quoted or a plain word.

_TOKEN_RE = re.compile(
    r'"(?:[^"\\]|\\.)*"'  # quoted identifier
    r"|[A-Za-z0-9_.]+"  # bare identifier
    r"|->|[{}\[\];,=]"
)


def _tokenize_dot(text: str) -> list[str]:
    tokens = []
    pos = 0
    for match in _TOKEN_RE.finditer(text):
        if text[pos : match.start()].strip():
            raise AssertionError(f"stray characters in DOT output: {text[pos:match.start()]!r}")
        tokens.append(match.group())
        pos = match.end()
    if text[pos:].strip():
        raise AssertionError(f"stray characters at end of DOT output: {text[pos:]!r}")
    return tokens


def _is_id(token: str) -> bool:
    return bool(token) and (token.startswith('"') or _TOKEN_RE.fullmatch(token))


def assert_valid_dot(text: str) -> None:
    tokens = _tokenize_dot(text)

    def expect(value):
        if not tokens or tokens[0] != value:
            raise AssertionError(f"expected {value!r}, found {tokens[:3]}")
        tokens.pop(0)

    def take_id():
        if not tokens or tokens[0] in ("{", "}", "[", "]", ";", ",", "=", "->"):
            raise AssertionError(f"expected identifier, found {tokens[:3]}")
        return tokens.pop(0)

    def attr_list():
        expect("[")
        while tokens and tokens[0] != "]":
            take_id()
            expect("=")
            take_id()
            if tokens and tokens[0] == ",":
                tokens.pop(0)
        expect("]")

    expect("digraph")
    if tokens and tokens[0] != "{":
        take_id()
    expect("{")
    while tokens and tokens[0] != "}":
        take_id()
        if tokens and tokens[0] == "=":  # graph attribute like rankdir=LR
            tokens.pop(0)
            take_id()
        elif tokens and tokens[0] == "->":
            tokens.pop(0)
            take_id()
            if tokens and tokens[0] == "[":
                attr_list()
        elif tokens and tokens[0] == "[":  # node statement or node defaults
            attr_list()
        expect(";")
    expect("}")
    assert not tokens, f"trailing tokens: {tokens}"
